//! The matchings behind the collapse theorems: pivot matchings induced by
//! ascending (closure) and descending (interior) idempotent monotone maps on
//! chains of a poset, the bounded-below matching on J(L), and its restriction
//! to Γ(P) for graph pipelines.
//!
//! Only idempotent maps are accepted: for those the pivot rule (extreme
//! non-fixed element of a chain) provably pairs chains in involution, and
//! acyclicity is verified at runtime before any matching is returned.

use std::collections::BTreeMap;

use crate::complex::{Simplex, SimplicialComplex};
use crate::graphs::{gamma_p_description, image_lattice, Graph, GraphError};
use crate::label::Label;
use crate::lattice::BoundedLattice;
use crate::monotone::{MapKind, MonotoneMap, MonotoneMapError};
use crate::morse::matching::{MatchingError, PartialMatching};

#[derive(Debug, thiserror::Error)]
pub enum OperatorError {
    #[error("the map must be {0}, got {1}")]
    WrongKind(String, String),
    #[error(transparent)]
    Map(#[from] MonotoneMapError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("chain vertex {0} is not an element of the poset")]
    ForeignVertex(String),
    #[error("restricted matching left Γ(P): S = {0} but μ(S) = {1} is not a simplex; this contradicts the closure property")]
    RestrictionViolation(String, String),
}

/// Pivot matching for an ascending idempotent map φ on a poset Q, on the
/// chains of Q (the faces of Δ(Q)).
///
/// A chain not inside Fix φ is paired with its symmetric difference at
/// φ(pivot), where the pivot is the maximal non-fixed element of the chain.
/// Critical cells are exactly the chains inside Fix φ.
pub fn closure_matching(
    delta_q: &SimplicialComplex,
    phi: &MonotoneMap,
) -> Result<PartialMatching, OperatorError> {
    if phi.kind() != MapKind::Ascending {
        return Err(OperatorError::WrongKind(
            "ascending".into(),
            format!("{:?}", phi.kind()),
        ));
    }
    pivot_matching(delta_q, phi, Pivot::MaxNonFixed)
}

/// Pivot matching for a descending idempotent map ψ, dual to
/// [`closure_matching`]: the pivot is the minimal non-fixed element.
pub fn interior_matching(
    delta_q: &SimplicialComplex,
    psi: &MonotoneMap,
) -> Result<PartialMatching, OperatorError> {
    if psi.kind() != MapKind::Descending {
        return Err(OperatorError::WrongKind(
            "descending".into(),
            format!("{:?}", psi.kind()),
        ));
    }
    pivot_matching(delta_q, psi, Pivot::MinNonFixed)
}

enum Pivot {
    MaxNonFixed,
    MinNonFixed,
}

fn pivot_matching(
    delta_q: &SimplicialComplex,
    map: &MonotoneMap,
    rule: Pivot,
) -> Result<PartialMatching, OperatorError> {
    map.verify_idempotent()?;
    let q = map.domain();
    let mut pairs: BTreeMap<Simplex, Simplex> = BTreeMap::new();
    for chain in delta_q.simplices() {
        let mut elems: Vec<usize> = chain
            .vertices()
            .iter()
            .map(|l| q.index(l).ok_or_else(|| OperatorError::ForeignVertex(l.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        // ascending order within the chain
        elems.sort_by(|&a, &b| {
            if q.lt(a, b) {
                std::cmp::Ordering::Less
            } else if q.lt(b, a) {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Equal
            }
        });
        let pivot = match rule {
            Pivot::MaxNonFixed => elems.iter().rev().copied().find(|&x| !map.is_fixed(x)),
            Pivot::MinNonFixed => elems.iter().copied().find(|&x| !map.is_fixed(x)),
        };
        let Some(x) = pivot else { continue }; // chain inside Fix: critical
        let img = map.apply(x);
        let img_label = q.label(img);
        if chain.contains(img_label) {
            // upper side of the pair; its partner is produced from the lower side
            continue;
        }
        let partner = chain.with_vertex(img_label);
        debug_assert!(
            delta_q.contains(&partner),
            "c ∪ {{φ(pivot)}} must again be a chain of Q"
        );
        // Self-consistency of the involution: the partner's pivot is the same
        // element, so the pair is matched from both sides consistently.
        #[cfg(debug_assertions)]
        {
            let mut partner_elems = elems.clone();
            partner_elems.push(img);
            let partner_pivot = match rule {
                Pivot::MaxNonFixed => partner_elems
                    .iter()
                    .filter(|&&y| !map.is_fixed(y))
                    .max_by(|&&a, &&b| if q.lt(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater }),
                Pivot::MinNonFixed => partner_elems
                    .iter()
                    .filter(|&&y| !map.is_fixed(y))
                    .min_by(|&&a, &&b| if q.lt(a, b) { std::cmp::Ordering::Less } else { std::cmp::Ordering::Greater }),
            };
            debug_assert_eq!(partner_pivot, Some(&x), "pivot must be stable under adding its image");
        }
        pairs.insert(chain.clone(), partner);
    }
    let matching = PartialMatching::new(delta_q.clone(), pairs)?;
    matching.ensure_acyclic()?;
    Ok(matching)
}

/// The matching on J(L): a non-chain face S is paired through the element
/// a(S), the meet of the part of S left after peeling off the longest prefix
/// of elements strictly below everything else. Critical cells are exactly the
/// chains of the proper part.
pub fn jl_matching(
    lattice: &BoundedLattice,
    j_complex: &SimplicialComplex,
) -> Result<PartialMatching, OperatorError> {
    let mut pairs: BTreeMap<Simplex, Simplex> = BTreeMap::new();
    for s in j_complex.simplices() {
        let elems: Vec<usize> = s
            .vertices()
            .iter()
            .map(|l| {
                lattice
                    .index(l)
                    .ok_or_else(|| OperatorError::ForeignVertex(l.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let Some(a) = bounded_below_pivot(lattice, &elems) else { continue };
        let a_label = lattice.label(a);
        if s.contains(a_label) {
            continue; // upper side
        }
        let partner = s.with_vertex(a_label);
        debug_assert!(
            j_complex.contains(&partner),
            "adding a(S) keeps the meet nonzero"
        );
        pairs.insert(s.clone(), partner);
    }
    let matching = PartialMatching::new(j_complex.clone(), pairs)?;
    matching.ensure_acyclic()?;
    Ok(matching)
}

/// For a non-chain subset S, the distinguished element a(S): the meet of the
/// tail after removing the maximal prefix of elements each strictly below all
/// later ones. Returns `None` when S is a chain.
pub fn bounded_below_pivot(lattice: &BoundedLattice, elems: &[usize]) -> Option<usize> {
    let poset = lattice.poset();
    let is_chain = elems
        .iter()
        .all(|&x| elems.iter().all(|&y| poset.comparable(x, y)));
    if is_chain {
        return None;
    }
    let mut tail: Vec<usize> = elems.to_vec();
    loop {
        // the unique element strictly below all others, if any
        let dominated_min = tail
            .iter()
            .copied()
            .find(|&x| tail.iter().all(|&y| y == x || poset.lt(x, y)));
        match dominated_min {
            Some(x) if tail.len() > 1 => tail.retain(|&y| y != x),
            _ => break,
        }
    }
    debug_assert!(tail.len() >= 2, "a non-chain set keeps a non-chain tail");
    Some(lattice.meet_set(tail.iter().copied()))
}

/// The J(L) matching for the image lattice of a graph, restricted to the
/// faces of Γ(P). Pairs are expressed over the pair labels of Γ(P); the
/// closure property (μ never leaves Γ(P)) is verified and its failure is a
/// reportable contradiction, not a panic.
pub fn restricted_jl_matching(
    g: &Graph,
) -> Result<(PartialMatching, BoundedLattice, SimplicialComplex), OperatorError> {
    let gamma = gamma_p_description(g)?;
    let lattice = image_lattice(g)?;
    let matching = restricted_jl_matching_on(&gamma, &lattice, g)?;
    Ok((matching, lattice, gamma))
}

pub fn restricted_jl_matching_on(
    gamma: &SimplicialComplex,
    lattice: &BoundedLattice,
    g: &Graph,
) -> Result<PartialMatching, OperatorError> {
    // Γ(P) vertices are pairs ((A)(B)); the J(L) machinery works on the A side.
    let pair_to_a = |l: &Label| -> Result<usize, OperatorError> {
        let Label::Tuple(items) = l else {
            return Err(OperatorError::ForeignVertex(l.to_string()));
        };
        let a_label = items
            .first()
            .ok_or_else(|| OperatorError::ForeignVertex(l.to_string()))?;
        lattice
            .index(a_label)
            .ok_or_else(|| OperatorError::ForeignVertex(l.to_string()))
    };
    let a_to_pair: BTreeMap<usize, Label> = gamma
        .vertices()
        .map(|l| Ok((pair_to_a(l)?, l.clone())))
        .collect::<Result<_, OperatorError>>()?;
    let mut pairs: BTreeMap<Simplex, Simplex> = BTreeMap::new();
    for s in gamma.simplices() {
        let elems: Vec<usize> = s
            .vertices()
            .iter()
            .map(pair_to_a)
            .collect::<Result<Vec<_>, _>>()?;
        let Some(a) = bounded_below_pivot(lattice, &elems) else { continue };
        let pair_label = match a_to_pair.get(&a) {
            Some(l) => l.clone(),
            None => {
                // a(S) = N(N(a(S))) is always an image face, so its pair is a
                // Γ(P) vertex; reaching this is a theorem contradiction.
                return Err(OperatorError::RestrictionViolation(
                    s.to_string(),
                    lattice.label(a).to_string(),
                ));
            }
        };
        if s.contains(&pair_label) {
            continue;
        }
        let partner = s.with_vertex(&pair_label);
        if !gamma.contains(&partner) {
            return Err(OperatorError::RestrictionViolation(
                s.to_string(),
                partner.to_string(),
            ));
        }
        pairs.insert(s.clone(), partner);
        let _ = g;
    }
    let matching = PartialMatching::new(gamma.clone(), pairs)?;
    matching.ensure_acyclic()?;
    Ok(matching)
}

/// Critical cells of a matching as a subcomplex (they are always downward
/// closed for the matchings in this module).
pub fn criticals_as_complex(matching: &PartialMatching) -> SimplicialComplex {
    SimplicialComplex::from_closed_family(matching.critical_cells().into_iter().collect())
}

/// The ascending map N² on the face poset of N(G), as a monotone map over
/// face labels. Fix(N²) = Im N.
pub fn neighbor_square_map(g: &Graph, face_poset: &crate::poset::Poset) -> Result<MonotoneMap, OperatorError> {
    let map = MonotoneMap::from_fn(face_poset.clone(), MapKind::Ascending, |l| {
        let Label::Tuple(vertices) = l else {
            unreachable!("face poset elements are vertex tuples")
        };
        let mask = g
            .mask_of(vertices)
            .expect("face poset vertices are graph vertices");
        let n2 = g.common_neighbors_mask(g.common_neighbors_mask(mask));
        Simplex::new(g.unmask(n2)).expect("N² of a face is a face").as_label()
    })?;
    map.verify_idempotent()?;
    Ok(map)
}

/// The descending map x ↦ ⋁(atoms below x) on the proper part of a lattice.
/// Fix = joins of atoms (bar Lₐ).
pub fn atom_join_interior_map(lattice: &BoundedLattice) -> Result<MonotoneMap, OperatorError> {
    let bar = lattice.proper_part();
    let map = MonotoneMap::from_fn(bar, MapKind::Descending, |l| {
        let x = lattice.index(l).expect("proper part elements are lattice elements");
        let atoms_below = lattice
            .atoms()
            .into_iter()
            .filter(|&a| lattice.poset().leq(a, x));
        lattice.label(lattice.join_set(atoms_below)).clone()
    })?;
    map.verify_idempotent()?;
    Ok(map)
}

/// The ascending map σ ↦ A(L)_{≤ ⋁σ} on the face poset of Γ(L): each face
/// maps to the full set of atoms below its join. Fix ≅ bar Lₐ via σ ↦ ⋁σ.
pub fn atom_closure_map_on_gamma_faces(
    lattice: &BoundedLattice,
    gamma_face_poset: &crate::poset::Poset,
) -> Result<MonotoneMap, OperatorError> {
    let atoms = lattice.atoms();
    let map = MonotoneMap::from_fn(gamma_face_poset.clone(), MapKind::Ascending, |l| {
        let Label::Tuple(members) = l else {
            unreachable!("face poset elements are vertex tuples")
        };
        let join = lattice.join_set(
            members
                .iter()
                .map(|m| lattice.index(m).expect("Γ vertices are lattice atoms")),
        );
        let closed: Vec<Label> = atoms
            .iter()
            .copied()
            .filter(|&a| lattice.poset().leq(a, join))
            .map(|a| lattice.label(a).clone())
            .collect();
        Label::sorted_tuple(closed)
    })?;
    map.verify_idempotent()?;
    Ok(map)
}

/// The canonical bijection Fix φ → join elements for the map of
/// [`atom_closure_map_on_gamma_faces`]: the fixed face A(L)_{≤x} is renamed
/// to the element x = ⋁σ of bar Lₐ.
pub fn gamma_fixed_face_relabeling(
    lattice: &BoundedLattice,
    phi: &MonotoneMap,
) -> BTreeMap<Label, Label> {
    let mut map = BTreeMap::new();
    for i in phi.fixed_points() {
        let l = phi.domain().label(i);
        let Label::Tuple(members) = l else { unreachable!() };
        let join = lattice.join_set(
            members
                .iter()
                .map(|m| lattice.index(m).expect("Γ vertices are lattice atoms")),
        );
        map.insert(l.clone(), lattice.label(join).clone());
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_complexes::{atom_crosscut_complex, bounded_below_complex};
    use crate::morse::matching::matching_to_collapses;
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

    #[test]
    fn closure_matching_identity_map_has_no_pairs() {
        // N² on F(N(K₃)) is the identity: every chain is critical.
        let g = Graph::complete(3);
        let n = crate::graphs::neighborhood_complex(&g).unwrap();
        let fp = crate::cw::face_poset(&n).as_poset();
        let phi = neighbor_square_map(&g, &fp).unwrap();
        let bd = fp.order_complex();
        let m = closure_matching(&bd, &phi).unwrap();
        assert!(m.is_empty());
        assert_eq!(criticals_as_complex(&m), bd);
    }

    #[test]
    fn closure_matching_on_path_graph() {
        // path 1–2–3: N²({1}) = {1,3}, so the chain [{1}] is matched with
        // [{1} ⊂ {1,3}]
        let g = Graph::path(3);
        let n = crate::graphs::neighborhood_complex(&g).unwrap();
        let fp = crate::cw::face_poset(&n).as_poset();
        let phi = neighbor_square_map(&g, &fp).unwrap();
        let bd = fp.order_complex();
        let m = closure_matching(&bd, &phi).unwrap();
        let single = Simplex::new(vec![subset_label(&["1"])]).unwrap();
        let expected = Simplex::new(vec![subset_label(&["1"]), subset_label(&["1", "3"])]).unwrap();
        assert_eq!(m.pairs().get(&single), Some(&expected));
        // criticals are the chains inside Im N
        let criticals = criticals_as_complex(&m);
        let lo = crate::graphs::lovasz_complex(&g).unwrap();
        assert_eq!(criticals, lo.complex);
    }

    #[test]
    fn closure_matching_requires_ascending() {
        let g = Graph::complete(3);
        let p = crate::graphs::hom_k2_lattice(&g).unwrap();
        let psi = atom_join_interior_map(&p).unwrap();
        let bd = p.proper_part().order_complex();
        assert!(matches!(
            closure_matching(&bd, &psi),
            Err(OperatorError::WrongKind(..))
        ));
    }

    #[test]
    fn gamma_closure_map_is_identity_on_b3() {
        // every atom set of B₃ is closed under "atoms below the join"
        let b3 = boolean_lattice(3);
        let gamma = atom_crosscut_complex(&b3).unwrap();
        let fp = crate::cw::face_poset(&gamma).as_poset();
        let phi = atom_closure_map_on_gamma_faces(&b3, &fp).unwrap();
        let bd = fp.order_complex();
        let m = closure_matching(&bd, &phi).unwrap();
        assert!(m.is_empty());
        // Bd Γ(B₃) relabels onto Δ(bar B₃) exactly
        let relabel = gamma_fixed_face_relabeling(&b3, &phi);
        let relabeled = bd.relabel(&relabel).unwrap();
        assert_eq!(relabeled, b3.proper_part().order_complex());
    }

    #[test]
    fn interior_matching_identity_on_atomic() {
        let b3 = boolean_lattice(3);
        let psi = atom_join_interior_map(&b3).unwrap();
        let bd = b3.proper_part().order_complex();
        let m = interior_matching(&bd, &psi).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn interior_matching_on_single_atom_chain() {
        // 0̂ < a < b < 1̂: ψ(b) = a, chain [b] pairs with [a < b]
        let p = Poset::from_covers(
            vec![lab("0"), lab("a"), lab("b"), lab("1")],
            &[(lab("0"), lab("a")), (lab("a"), lab("b")), (lab("b"), lab("1"))],
        )
        .unwrap();
        let l = BoundedLattice::from_poset(p).unwrap();
        let psi = atom_join_interior_map(&l).unwrap();
        let bd = l.proper_part().order_complex();
        let m = interior_matching(&bd, &psi).unwrap();
        assert_eq!(m.len(), 1);
        let only = Simplex::new(vec![lab("b")]).unwrap();
        let partner = Simplex::new(vec![lab("a"), lab("b")]).unwrap();
        assert_eq!(m.pairs().get(&only), Some(&partner));
        // collapse Δ(bar L) onto the point {a}
        let target = SimplicialComplex::from_facets(vec![vec![lab("a")]]).unwrap();
        let cert = matching_to_collapses(&bd, &target, &m).unwrap();
        cert.verify().unwrap();
    }

    #[test]
    fn interior_matching_identity_on_hom_k3_lattice() {
        // P for K₃ is atomic: the interior map fixes everything
        let p = crate::graphs::hom_k2_lattice(&Graph::complete(3)).unwrap();
        assert!(p.is_atomic());
        let psi = atom_join_interior_map(&p).unwrap();
        let bd = p.proper_part().order_complex();
        let m = interior_matching(&bd, &psi).unwrap();
        assert!(m.is_empty());
    }

    #[test]
    fn jl_matching_on_b3() {
        let b3 = boolean_lattice(3);
        let j = bounded_below_complex(&b3);
        let m = jl_matching(&b3, &j).unwrap();

        // S = {xy, xz}: no dominated minimum, a(S) = x ∉ S: matched upward
        let s = Simplex::new(vec![subset_label(&["1", "2"]), subset_label(&["1", "3"])]).unwrap();
        let expected = Simplex::new(vec![
            subset_label(&["1"]),
            subset_label(&["1", "2"]),
            subset_label(&["1", "3"]),
        ])
        .unwrap();
        assert_eq!(m.pairs().get(&s), Some(&expected));

        // S = {x, xy, xz}: prefix [x], tail {xy, xz}, a(S) = x ∈ S: upper side
        assert!(!m.pairs().contains_key(&expected));

        // chains are critical
        let chain = Simplex::new(vec![subset_label(&["1"]), subset_label(&["1", "2"])]).unwrap();
        assert!(m.critical_cells().contains(&chain));

        // criticals = chains of bar L exactly
        assert_eq!(criticals_as_complex(&m), b3.proper_part().order_complex());

        // replay: J(B₃) collapses onto the hexagon Δ(bar B₃)
        let cert = matching_to_collapses(&j, &b3.proper_part().order_complex(), &m).unwrap();
        cert.verify().unwrap();
        let h_start = crate::homology::homology(&j).unwrap();
        let h_end = crate::homology::homology(&cert.end).unwrap();
        assert!(crate::homology::homology_equal(&h_start, &h_end));
    }

    #[test]
    fn jl_matching_involution_property() {
        // a(μ(S)) = a(S) for every matched lower S, Σ ∪ μ(Σ) = non-chains
        let b3 = boolean_lattice(3);
        let j = bounded_below_complex(&b3);
        let m = jl_matching(&b3, &j).unwrap();
        let elems_of = |s: &Simplex| -> Vec<usize> {
            s.vertices().iter().map(|l| b3.index(l).unwrap()).collect()
        };
        let mut non_chains = 0usize;
        for s in j.simplices() {
            if bounded_below_pivot(&b3, &elems_of(s)).is_some() {
                non_chains += 1;
            }
        }
        assert_eq!(non_chains, 2 * m.len());
        for (lo, hi) in m.pairs() {
            let a_lo = bounded_below_pivot(&b3, &elems_of(lo)).unwrap();
            let a_hi = bounded_below_pivot(&b3, &elems_of(hi)).unwrap();
            assert_eq!(a_lo, a_hi, "a(μ(S)) = a(S)");
        }
    }

    #[test]
    fn restricted_matching_collapses_gamma_onto_lovasz() {
        for g in [Graph::complete(3), Graph::complete(2), Graph::cycle(5)] {
            let (m, _lattice, gamma) = restricted_jl_matching(&g).unwrap();
            let criticals = criticals_as_complex(&m);
            // critical cells are the chains of image faces, i.e. Lo(G) with
            // vertices renamed to pairs
            let lo = crate::graphs::lovasz_complex(&g).unwrap();
            assert_eq!(criticals.len(), lo.complex.len());
            let cert = matching_to_collapses(&gamma, &criticals, &m).unwrap();
            cert.verify().unwrap();
            let h_start = crate::homology::homology(&gamma).unwrap();
            let h_end = crate::homology::homology(&criticals).unwrap();
            assert!(crate::homology::homology_equal(&h_start, &h_end));
        }
    }

    #[test]
    fn restricted_matching_is_empty_for_k2() {
        let (m, _, gamma) = restricted_jl_matching(&Graph::complete(2)).unwrap();
        assert!(m.is_empty());
        assert_eq!(gamma.f_vector(), vec![2]);
    }
}
