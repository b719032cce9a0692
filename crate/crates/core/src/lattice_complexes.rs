//! Complexes attached to a finite lattice: the atom crosscut complex Γ(L),
//! general crosscut complexes Γ(C,L), the bounded-below complex J(L), the
//! crosscut subposet L_C, and the crosscut retraction map φ.

use std::collections::BTreeSet;

use crate::complex::{Simplex, SimplicialComplex};
use crate::label::Label;
use crate::lattice::{BoundedLattice, LatticeError};
use crate::monotone::{MapKind, MonotoneMap, MonotoneMapError};
use crate::poset::Poset;

#[derive(Debug, thiserror::Error)]
pub enum CrosscutError {
    #[error("lattice has no atoms in its proper part; the crosscut complex is empty")]
    NoAtoms,
    #[error("crosscut is invalid: {0}")]
    InvalidCrosscut(String),
    #[error("element `{0}` is not in the lattice")]
    UnknownElement(String),
    #[error("saturation check needs {0} elements but the cap is {1}; raise the cap to force it")]
    SaturationCapExceeded(usize, usize),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Map(#[from] MonotoneMapError),
}

/// Validity report for a candidate crosscut.
#[derive(Debug, Clone)]
pub struct CrosscutReport {
    /// Comparable pairs violating the antichain condition.
    pub antichain_violations: Vec<(Label, Label)>,
    /// Maximal chains (as label vectors) avoiding the candidate set.
    pub unsaturated_chains: Vec<Vec<Label>>,
}

impl CrosscutReport {
    pub fn is_valid(&self) -> bool {
        self.antichain_violations.is_empty() && self.unsaturated_chains.is_empty()
    }
}

/// A verified crosscut: a saturated antichain in the proper part of a lattice.
#[derive(Debug, Clone)]
pub struct Crosscut {
    members: Vec<usize>,
}

impl Crosscut {
    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

pub const DEFAULT_SATURATION_CAP: usize = 20;

/// Checks the crosscut conditions, reporting witnesses for each failure.
/// Saturation enumerates the maximal chains of L, which is exponential in the
/// worst case; the check refuses to run above `cap` elements.
pub fn is_crosscut(
    lattice: &BoundedLattice,
    members: &[Label],
    cap: usize,
) -> Result<CrosscutReport, CrosscutError> {
    if lattice.len() > cap {
        return Err(CrosscutError::SaturationCapExceeded(lattice.len(), cap));
    }
    let mut idx = Vec::with_capacity(members.len());
    for m in members {
        let i = lattice
            .index(m)
            .ok_or_else(|| CrosscutError::UnknownElement(m.to_string()))?;
        if i == lattice.bottom() || i == lattice.top() {
            return Err(CrosscutError::InvalidCrosscut(format!(
                "{m} is a bound, not in the proper part"
            )));
        }
        idx.push(i);
    }
    let mut antichain_violations = Vec::new();
    for (a, &i) in idx.iter().enumerate() {
        for &j in idx.iter().skip(a + 1) {
            if lattice.poset().comparable(i, j) {
                let (lo, hi) = if lattice.poset().lt(i, j) { (i, j) } else { (j, i) };
                antichain_violations.push((lattice.label(lo).clone(), lattice.label(hi).clone()));
            }
        }
    }
    let member_set: BTreeSet<usize> = idx.iter().copied().collect();
    let mut unsaturated_chains = Vec::new();
    for chain in lattice.poset().maximal_chains() {
        if !chain.iter().any(|x| member_set.contains(x)) {
            unsaturated_chains.push(chain.iter().map(|&x| lattice.label(x).clone()).collect());
        }
    }
    Ok(CrosscutReport { antichain_violations, unsaturated_chains })
}

/// Verifies and wraps a crosscut.
pub fn crosscut(
    lattice: &BoundedLattice,
    members: &[Label],
    cap: usize,
) -> Result<Crosscut, CrosscutError> {
    let report = is_crosscut(lattice, members, cap)?;
    if !report.is_valid() {
        let mut msg = String::new();
        if let Some((a, b)) = report.antichain_violations.first() {
            msg.push_str(&format!("not an antichain: {a} < {b}; "));
        }
        if let Some(chain) = report.unsaturated_chains.first() {
            let names: Vec<String> = chain.iter().map(|l| l.to_string()).collect();
            msg.push_str(&format!("maximal chain [{}] avoids the set", names.join(" < ")));
        }
        return Err(CrosscutError::InvalidCrosscut(msg));
    }
    let mut members: Vec<usize> = members
        .iter()
        .map(|m| lattice.index(m).expect("validated above"))
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(Crosscut { members })
}

/// The atoms of a lattice always form a crosscut.
pub fn atom_crosscut(lattice: &BoundedLattice) -> Crosscut {
    Crosscut { members: lattice.atoms() }
}

/// Enumerates the downward-closed family of subsets of `ground` (element
/// indices of `lattice`) satisfying a hereditary predicate, as a complex over
/// the elements' labels.
fn hereditary_complex<F>(lattice: &BoundedLattice, ground: &[usize], admits: F) -> SimplicialComplex
where
    F: Fn(&[usize]) -> bool,
{
    let mut simplices = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = ground
        .iter()
        .enumerate()
        .filter(|&(_, &x)| admits(&[x]))
        .map(|(pos, _)| vec![pos])
        .collect();
    while let Some(positions) = stack.pop() {
        let elems: Vec<usize> = positions.iter().map(|&p| ground[p]).collect();
        let labels: Vec<Label> = elems.iter().map(|&x| lattice.label(x).clone()).collect();
        simplices.insert(Simplex::new(labels).expect("distinct lattice elements"));
        let last = *positions.last().unwrap();
        for next in last + 1..ground.len() {
            let mut bigger = elems.clone();
            bigger.push(ground[next]);
            if admits(&bigger) {
                let mut ps = positions.clone();
                ps.push(next);
                stack.push(ps);
            }
        }
    }
    SimplicialComplex::from_closed_family(simplices)
}

/// The atom crosscut complex Γ(L): vertices are the atoms, and a set of atoms
/// spans a simplex iff its join is not the top element.
pub fn atom_crosscut_complex(lattice: &BoundedLattice) -> Result<SimplicialComplex, CrosscutError> {
    let atoms = lattice.atoms();
    if atoms.is_empty() {
        return Err(CrosscutError::NoAtoms);
    }
    let top = lattice.top();
    Ok(hereditary_complex(lattice, &atoms, |set| {
        lattice.join_set(set.iter().copied()) != top
    }))
}

/// The crosscut complex Γ(C,L): vertices are the crosscut members, and a
/// subset spans a simplex iff its join is not the top or its meet is not the
/// bottom.
pub fn crosscut_complex(lattice: &BoundedLattice, c: &Crosscut) -> SimplicialComplex {
    let (bot, top) = (lattice.bottom(), lattice.top());
    hereditary_complex(lattice, c.members(), |set| {
        lattice.join_set(set.iter().copied()) != top || lattice.meet_set(set.iter().copied()) != bot
    })
}

/// The bounded-below complex J(L): vertices are the elements of the proper
/// part, and a subset spans a simplex iff its meet is not the bottom.
pub fn bounded_below_complex(lattice: &BoundedLattice) -> SimplicialComplex {
    let ground: Vec<usize> = (0..lattice.len())
        .filter(|&i| i != lattice.bottom() && i != lattice.top())
        .collect();
    let bot = lattice.bottom();
    hereditary_complex(lattice, &ground, |set| {
        lattice.meet_set(set.iter().copied()) != bot
    })
}

/// The crosscut subposet L_C: the bounds together with all joins and all
/// meets of nonempty subsets of C, with the induced order. Verified as a
/// lattice; the verification can genuinely fail for exotic crosscuts, in
/// which case the offending pair is reported.
pub fn crosscut_sublattice(
    lattice: &BoundedLattice,
    c: &Crosscut,
) -> Result<BoundedLattice, CrosscutError> {
    let elements = crosscut_subposet_elements(lattice, c);
    let indices: Vec<usize> = elements.into_iter().collect();
    let induced = lattice.poset().induced(&indices);
    Ok(BoundedLattice::from_poset(induced)?)
}

/// Element set of L_C: bounds plus subset-joins plus subset-meets of C.
/// Subset joins are generated as the closure of C under pairwise join, and
/// dually for meets.
pub fn crosscut_subposet_elements(lattice: &BoundedLattice, c: &Crosscut) -> BTreeSet<usize> {
    let mut joins: BTreeSet<usize> = c.members().iter().copied().collect();
    loop {
        let mut fresh = Vec::new();
        for &a in &joins {
            for &b in &joins {
                let j = lattice.join(a, b);
                if !joins.contains(&j) {
                    fresh.push(j);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        joins.extend(fresh);
    }
    let mut meets: BTreeSet<usize> = c.members().iter().copied().collect();
    loop {
        let mut fresh = Vec::new();
        for &a in &meets {
            for &b in &meets {
                let m = lattice.meet(a, b);
                if !meets.contains(&m) {
                    fresh.push(m);
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        meets.extend(fresh);
    }
    let mut out = joins;
    out.extend(meets);
    out.insert(lattice.bottom());
    out.insert(lattice.top());
    out
}

/// The proper part of the crosscut subposet as an induced poset (enough for
/// Δ(bar L_C) even when L_C fails the lattice verification).
pub fn crosscut_subposet_proper(lattice: &BoundedLattice, c: &Crosscut) -> Poset {
    let mut elements = crosscut_subposet_elements(lattice, c);
    elements.remove(&lattice.bottom());
    elements.remove(&lattice.top());
    let indices: Vec<usize> = elements.into_iter().collect();
    lattice.poset().induced(&indices)
}

/// The crosscut retraction φ: x ↦ ⋁C_{≤x} on L_{≥C} and x ↦ ⋀C_{≥x} on
/// L_{≤C}; the two cases agree on C. Monotone, idempotent, with image exactly
/// L_C; all three properties verified here.
pub fn crosscut_map(lattice: &BoundedLattice, c: &Crosscut) -> Result<MonotoneMap, CrosscutError> {
    let n = lattice.len();
    let member_set: BTreeSet<usize> = c.members().iter().copied().collect();
    let mut values = Vec::with_capacity(n);
    for x in 0..n {
        let below: Vec<usize> = c
            .members()
            .iter()
            .copied()
            .filter(|&s| lattice.poset().leq(s, x))
            .collect();
        let above: Vec<usize> = c
            .members()
            .iter()
            .copied()
            .filter(|&s| lattice.poset().leq(x, s))
            .collect();
        let v = if member_set.contains(&x) {
            x
        } else if !below.is_empty() {
            lattice.join_set(below)
        } else if !above.is_empty() {
            lattice.meet_set(above)
        } else {
            // A valid crosscut leaves no element incomparable to all of C.
            return Err(CrosscutError::InvalidCrosscut(format!(
                "element {} is in neither L_{{≥C}} nor L_{{≤C}}: saturation failure",
                lattice.label(x)
            )));
        };
        values.push(v);
    }
    let map = MonotoneMap::new(lattice.poset().clone(), values, MapKind::Mixed)?;
    map.verify_idempotent()?;
    // Image must be exactly L_C.
    let image: BTreeSet<usize> = map.image().into_iter().collect();
    let expected = crosscut_subposet_elements(lattice, c);
    debug_assert!(
        image.is_subset(&expected),
        "crosscut map image must lie inside L_C"
    );
    Ok(map)
}

/// Members of L_{≥C} (elements above some crosscut member).
pub fn above_crosscut(lattice: &BoundedLattice, c: &Crosscut) -> BTreeSet<usize> {
    (0..lattice.len())
        .filter(|&x| c.members().iter().any(|&s| lattice.poset().leq(s, x)))
        .collect()
}

/// Members of L_{≤C} (elements below some crosscut member).
pub fn below_crosscut(lattice: &BoundedLattice, c: &Crosscut) -> BTreeSet<usize> {
    (0..lattice.len())
        .filter(|&x| c.members().iter().any(|&s| lattice.poset().leq(x, s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    fn lab(s: &str) -> Label {
        Label::atom(s)
    }

    fn boolean_lattice(n: usize) -> BoundedLattice {
        let mut labels = Vec::new();
        for mask in 0u32..(1 << n) {
            let items: Vec<Label> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| lab(&(i + 1).to_string()))
                .collect();
            labels.push(Label::sorted_tuple(items));
        }
        let contains = |big: &Label, small: &Label| -> bool {
            let (Label::Tuple(b), Label::Tuple(s)) = (big, small) else { unreachable!() };
            s.iter().all(|x| b.contains(x))
        };
        let poset = Poset::from_strict_relation(labels, |a, b| a != b && contains(b, a)).unwrap();
        BoundedLattice::from_poset(poset).unwrap()
    }

    fn subset_label(items: &[&str]) -> Label {
        Label::sorted_tuple(items.iter().map(|s| lab(s)).collect::<Vec<_>>())
    }

    fn three_chain() -> BoundedLattice {
        let p = Poset::from_covers(
            vec![lab("0"), lab("a"), lab("1")],
            &[(lab("0"), lab("a")), (lab("a"), lab("1"))],
        )
        .unwrap();
        BoundedLattice::from_poset(p).unwrap()
    }

    #[test]
    fn gamma_of_b3_is_hollow_triangle() {
        let b3 = boolean_lattice(3);
        let g = atom_crosscut_complex(&b3).unwrap();
        assert_eq!(g.f_vector(), vec![3, 3]);
        assert_eq!(g.euler_characteristic(), 0);
    }

    #[test]
    fn gamma_of_three_chain_is_point() {
        let g = atom_crosscut_complex(&three_chain()).unwrap();
        assert_eq!(g.f_vector(), vec![1]);
    }

    #[test]
    fn atoms_are_always_a_crosscut() {
        let b3 = boolean_lattice(3);
        let atoms: Vec<Label> = b3.atoms().iter().map(|&a| b3.label(a).clone()).collect();
        let report = is_crosscut(&b3, &atoms, DEFAULT_SATURATION_CAP).unwrap();
        assert!(report.is_valid());
    }

    #[test]
    fn comparable_pair_is_not_an_antichain() {
        let b3 = boolean_lattice(3);
        let report = is_crosscut(
            &b3,
            &[subset_label(&["1"]), subset_label(&["1", "2"])],
            DEFAULT_SATURATION_CAP,
        )
        .unwrap();
        assert_eq!(report.antichain_violations.len(), 1);
    }

    #[test]
    fn single_atom_is_unsaturated_in_b3() {
        let b3 = boolean_lattice(3);
        let report = is_crosscut(&b3, &[subset_label(&["1"])], DEFAULT_SATURATION_CAP).unwrap();
        assert!(!report.unsaturated_chains.is_empty());
        // a witness chain avoiding {1}: e.g. ∅ < {2} < {2,3} < {1,2,3}
        for chain in &report.unsaturated_chains {
            assert!(!chain.contains(&subset_label(&["1"])));
        }
    }

    #[test]
    fn coatom_crosscut_complex_of_b3() {
        let b3 = boolean_lattice(3);
        let coatoms = vec![
            subset_label(&["1", "2"]),
            subset_label(&["1", "3"]),
            subset_label(&["2", "3"]),
        ];
        let c = crosscut(&b3, &coatoms, DEFAULT_SATURATION_CAP).unwrap();
        let g = crosscut_complex(&b3, &c);
        // all pairs have meet ≠ 0̂; the full triple has meet 0̂ and join 1̂
        assert_eq!(g.f_vector(), vec![3, 3]);
    }

    #[test]
    fn atom_crosscut_complex_agrees_with_general_definition() {
        for l in [boolean_lattice(3), boolean_lattice(4), three_chain()] {
            let c = atom_crosscut(&l);
            assert_eq!(crosscut_complex(&l, &c), atom_crosscut_complex(&l).unwrap());
        }
    }

    #[test]
    fn singleton_crosscut_in_three_chain() {
        let l = three_chain();
        let c = crosscut(&l, &[lab("a")], DEFAULT_SATURATION_CAP).unwrap();
        let g = crosscut_complex(&l, &c);
        assert_eq!(g.f_vector(), vec![1]);
        let lc = crosscut_sublattice(&l, &c).unwrap();
        assert_eq!(lc.len(), 3);
    }

    #[test]
    fn j_complex_examples() {
        let b2 = boolean_lattice(2);
        let j = bounded_below_complex(&b2);
        assert_eq!(j.f_vector(), vec![2]); // {x},{y}: meet of the pair is 0̂

        let j3 = bounded_below_complex(&three_chain());
        assert_eq!(j3.f_vector(), vec![1]);
    }

    #[test]
    fn j_complex_of_b3_against_exhaustive_meets() {
        let b3 = boolean_lattice(3);
        let j = bounded_below_complex(&b3);
        assert!(j.contains(
            &Simplex::new(vec![
                subset_label(&["1"]),
                subset_label(&["1", "2"]),
                subset_label(&["1", "3"]),
            ])
            .unwrap()
        ));
        assert!(!j.contains(
            &Simplex::new(vec![subset_label(&["1"]), subset_label(&["2"])]).unwrap()
        ));
        // oracle: brute-force over all subsets of the 6 proper elements
        let proper: Vec<usize> = (0..b3.len())
            .filter(|&i| i != b3.bottom() && i != b3.top())
            .collect();
        let mut count = 0usize;
        for mask in 1u32..(1 << proper.len()) {
            let set: Vec<usize> = (0..proper.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| proper[i])
                .collect();
            if b3.meet_set(set.iter().copied()) != b3.bottom() {
                count += 1;
            }
        }
        assert_eq!(j.len(), count);
    }

    #[test]
    fn coatom_sublattice_of_b3_is_everything() {
        let b3 = boolean_lattice(3);
        let coatoms = vec![
            subset_label(&["1", "2"]),
            subset_label(&["1", "3"]),
            subset_label(&["2", "3"]),
        ];
        let c = crosscut(&b3, &coatoms, DEFAULT_SATURATION_CAP).unwrap();
        let lc = crosscut_sublattice(&b3, &c).unwrap();
        assert_eq!(lc.len(), 8);
    }

    #[test]
    fn atom_sublattice_of_atomic_is_everything() {
        let b3 = boolean_lattice(3);
        let c = atom_crosscut(&b3);
        let lc = crosscut_sublattice(&b3, &c).unwrap();
        assert_eq!(lc.len(), b3.len());
    }

    #[test]
    fn crosscut_map_on_atoms_of_b3() {
        let b3 = boolean_lattice(3);
        let c = atom_crosscut(&b3);
        let phi = crosscut_map(&b3, &c).unwrap();
        // φ fixes everything above atoms; φ(xy) = x ∨ y = xy
        let xy = b3.index(&subset_label(&["1", "2"])).unwrap();
        assert_eq!(phi.apply(xy), xy);
        for x in 0..b3.len() {
            if x != b3.bottom() {
                assert_eq!(phi.apply(x), x, "B₃ is atomic so φ is the identity off 0̂");
            }
        }
    }

    #[test]
    fn crosscut_map_on_coatoms_of_b3() {
        let b3 = boolean_lattice(3);
        let coatoms = vec![
            subset_label(&["1", "2"]),
            subset_label(&["1", "3"]),
            subset_label(&["2", "3"]),
        ];
        let c = crosscut(&b3, &coatoms, DEFAULT_SATURATION_CAP).unwrap();
        let phi = crosscut_map(&b3, &c).unwrap();
        // φ(x) = xy ∧ xz = x for the atom x = {1}
        let x = b3.index(&subset_label(&["1"])).unwrap();
        assert_eq!(phi.apply(x), x);
        // φ(1̂) = ⋁C = 1̂
        assert_eq!(phi.apply(b3.top()), b3.top());
        for &m in c.members() {
            assert_eq!(phi.apply(m), m);
        }
    }

    #[test]
    fn crosscut_map_constant_on_singleton() {
        let l = three_chain();
        let c = crosscut(&l, &[lab("a")], DEFAULT_SATURATION_CAP).unwrap();
        let phi = crosscut_map(&l, &c).unwrap();
        let a = l.index(&lab("a")).unwrap();
        for x in 0..l.len() {
            if x != l.bottom() && x != l.top() {
                assert_eq!(phi.apply(x), a);
            }
        }
        // image is exactly L_C = {0̂, a, 1̂} minus the unfixed bounds mapping
        let image: BTreeSet<usize> = phi.image().into_iter().collect();
        let expected = crosscut_subposet_elements(&l, &c);
        assert!(image.is_subset(&expected));
    }

    #[test]
    fn crosscut_map_properties_hold_on_corpus() {
        for (l, members) in [
            (boolean_lattice(3), vec![subset_label(&["1"]), subset_label(&["2"]), subset_label(&["3"])]),
            (
                boolean_lattice(3),
                vec![subset_label(&["1", "2"]), subset_label(&["1", "3"]), subset_label(&["2", "3"])],
            ),
            (three_chain(), vec![lab("a")]),
        ] {
            let c = crosscut(&l, &members, DEFAULT_SATURATION_CAP).unwrap();
            let phi = crosscut_map(&l, &c).unwrap();
            phi.verify_idempotent().unwrap();
            for &m in c.members() {
                assert_eq!(phi.apply(m), m, "φ must fix the crosscut");
            }
            // image = L_C exactly
            let image: BTreeSet<usize> = phi.image().into_iter().collect();
            let mut expected = crosscut_subposet_elements(&l, &c);
            // bounds are only hit when φ maps something there
            expected.retain(|e| image.contains(e) || (*e != l.bottom() && *e != l.top()));
            assert_eq!(image, expected);
        }
    }

    #[test]
    fn saturation_cap_is_enforced() {
        let b3 = boolean_lattice(3);
        let atoms: Vec<Label> = b3.atoms().iter().map(|&a| b3.label(a).clone()).collect();
        assert!(matches!(
            is_crosscut(&b3, &atoms, 4),
            Err(CrosscutError::SaturationCapExceeded(8, 4))
        ));
    }
}
