//! Bounded lattices: verified meets and joins with dense lookup tables.

use std::collections::BTreeSet;
use std::fmt;

use crate::label::Label;
use crate::poset::{Poset, PosetError};

#[derive(Debug, thiserror::Error)]
pub enum LatticeError {
    #[error("poset has no minimum element")]
    MissingBottom,
    #[error("poset has no maximum element")]
    MissingTop,
    #[error("pair ({0}, {1}) has no unique meet (maximal lower bounds: {2})")]
    NoUniqueMeet(String, String, String),
    #[error("pair ({0}, {1}) has no unique join (minimal upper bounds: {2})")]
    NoUniqueJoin(String, String, String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("element `{0}` is not in the lattice")]
    NotAnElement(String),
    #[error("lattice too large: {0} elements exceeds cap {1}")]
    TooLarge(usize, usize),
}

/// A finite bounded lattice: a poset with verified bottom, top, and dense
/// meet/join tables. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct BoundedLattice {
    poset: Poset,
    bottom: usize,
    top: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl BoundedLattice {
    /// Verifies the poset is a bounded lattice and builds the meet and join
    /// tables. Failure names the offending pair.
    pub fn from_poset(poset: Poset) -> Result<BoundedLattice, LatticeError> {
        let n = poset.len();
        let minimals = poset.minimal_elements();
        let bottom = match minimals.as_slice() {
            [b] => *b,
            _ => return Err(LatticeError::MissingBottom),
        };
        let maximals = poset.maximal_elements();
        let top = match maximals.as_slice() {
            [t] => *t,
            _ => return Err(LatticeError::MissingTop),
        };
        // Down-sets and up-sets including self, as bit rows.
        let words = n.div_ceil(64).max(1);
        let mut down = vec![0u64; n * words];
        let mut up = vec![0u64; n * words];
        for i in 0..n {
            down[i * words + i / 64] |= 1 << (i % 64);
            up[i * words + i / 64] |= 1 << (i % 64);
            for j in 0..n {
                if poset.lt(j, i) {
                    down[i * words + j / 64] |= 1 << (j % 64);
                }
                if poset.lt(i, j) {
                    up[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        let unique_extremum = |bounds: &[u64], upper_sets: &[u64], want_max: bool| -> Result<usize, Vec<usize>> {
            // want_max: the unique element of `bounds` with no other bound above it
            let mut extremes = Vec::new();
            for k in 0..n {
                if bounds[k / 64] & (1 << (k % 64)) == 0 {
                    continue;
                }
                // k is extreme if bounds ∩ strictly-(above|below) k = ∅
                let mut dominated = false;
                for w in 0..words {
                    let strict = upper_sets[k * words + w] & !if w == k / 64 { 1 << (k % 64) } else { 0 };
                    if bounds[w] & strict != 0 {
                        dominated = true;
                        break;
                    }
                }
                let _ = want_max;
                if !dominated {
                    extremes.push(k);
                }
            }
            if extremes.len() == 1 {
                Ok(extremes[0])
            } else {
                Err(extremes)
            }
        };
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        let mut scratch = vec![0u64; words];
        for i in 0..n {
            for j in i..n {
                // meet: unique maximal common lower bound
                for w in 0..words {
                    scratch[w] = down[i * words + w] & down[j * words + w];
                }
                let m = unique_extremum(&scratch, &up, true).map_err(|cands| {
                    LatticeError::NoUniqueMeet(
                        poset.label(i).to_string(),
                        poset.label(j).to_string(),
                        format_candidates(&poset, &cands),
                    )
                })?;
                meet[i * n + j] = m as u32;
                meet[j * n + i] = m as u32;
                // join: unique minimal common upper bound
                for w in 0..words {
                    scratch[w] = up[i * words + w] & up[j * words + w];
                }
                let jn = unique_extremum(&scratch, &down, false).map_err(|cands| {
                    LatticeError::NoUniqueJoin(
                        poset.label(i).to_string(),
                        poset.label(j).to_string(),
                        format_candidates(&poset, &cands),
                    )
                })?;
                join[i * n + j] = jn as u32;
                join[j * n + i] = jn as u32;
            }
        }
        Ok(BoundedLattice { poset, bottom, top, meet, join })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn label(&self, i: usize) -> &Label {
        self.poset.label(i)
    }

    pub fn index(&self, l: &Label) -> Option<usize> {
        self.poset.index(l)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j] as usize
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j] as usize
    }

    /// Meet of a set; the empty meet is the top element.
    pub fn meet_set(&self, set: impl IntoIterator<Item = usize>) -> usize {
        set.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set; the empty join is the bottom element.
    pub fn join_set(&self, set: impl IntoIterator<Item = usize>) -> usize {
        set.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Atoms: the covers of the bottom element, sorted by index.
    pub fn atoms(&self) -> Vec<usize> {
        self.poset
            .covers()
            .iter()
            .filter(|&&(lo, _)| lo == self.bottom)
            .map(|&(_, hi)| hi)
            .collect()
    }

    /// The proper part bar L = L ∖ {0̂, 1̂} as an induced poset.
    pub fn proper_part(&self) -> Poset {
        let subset: Vec<usize> = (0..self.len())
            .filter(|&i| i != self.bottom && i != self.top)
            .collect();
        self.poset.induced(&subset)
    }

    /// True if every element is a join of atoms.
    pub fn is_atomic(&self) -> bool {
        let joins = self.atom_join_closure();
        (0..self.len()).all(|i| i == self.bottom || joins.contains(&i))
    }

    /// All joins of nonempty atom sets (closure of atoms under pairwise join).
    fn atom_join_closure(&self) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = self.atoms().into_iter().collect();
        loop {
            let mut fresh = Vec::new();
            for &a in &set {
                for &b in &set {
                    let j = self.join(a, b);
                    if !set.contains(&j) {
                        fresh.push(j);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            set.extend(fresh);
        }
        set
    }

    /// The atomic sublattice Lₐ: bottom, all joins of atoms, and the top
    /// (kept as a bound even when it is not itself a join of atoms, so that
    /// the proper part of Lₐ is well defined).
    pub fn atomic_sublattice(&self) -> BoundedLattice {
        let mut subset: BTreeSet<usize> = self.atom_join_closure();
        subset.insert(self.bottom);
        subset.insert(self.top);
        let indices: Vec<usize> = subset.into_iter().collect();
        let induced = self.poset.induced(&indices);
        BoundedLattice::from_poset(induced)
            .expect("join-closure of atoms with bounds is always a lattice")
    }

    /// Elements of bar Lₐ: joins of atoms other than the top.
    pub fn atomic_proper_indices(&self) -> Vec<usize> {
        self.atom_join_closure()
            .into_iter()
            .filter(|&i| i != self.top)
            .collect()
    }
}

impl fmt::Debug for BoundedLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BoundedLattice{{{} elements, 0̂={}, 1̂={}}}",
            self.len(),
            self.label(self.bottom),
            self.label(self.top)
        )
    }
}

fn format_candidates(poset: &Poset, cands: &[usize]) -> String {
    let names: Vec<String> = cands.iter().map(|&i| poset.label(i).to_string()).collect();
    format!("[{}]", names.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(s: &str) -> Label {
        Label::atom(s)
    }

    pub(crate) fn boolean_lattice(n: usize) -> BoundedLattice {
        // Subsets of {1..n} as sorted tuple labels, ordered by inclusion.
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

    #[test]
    fn diamond_is_a_lattice() {
        let p = Poset::from_covers(
            vec![lab("0"), lab("x"), lab("y"), lab("1")],
            &[
                (lab("0"), lab("x")),
                (lab("0"), lab("y")),
                (lab("x"), lab("1")),
                (lab("y"), lab("1")),
            ],
        )
        .unwrap();
        let l = BoundedLattice::from_poset(p).unwrap();
        let x = l.index(&lab("x")).unwrap();
        let y = l.index(&lab("y")).unwrap();
        assert_eq!(l.meet(x, y), l.bottom());
        assert_eq!(l.join(x, y), l.top());
        assert_eq!(l.atoms().len(), 2);
    }

    #[test]
    fn two_antichain_with_bounds_is_lattice() {
        let p = Poset::from_covers(
            vec![lab("bot"), lab("a"), lab("b"), lab("top")],
            &[
                (lab("bot"), lab("a")),
                (lab("bot"), lab("b")),
                (lab("a"), lab("top")),
                (lab("b"), lab("top")),
            ],
        )
        .unwrap();
        assert!(BoundedLattice::from_poset(p).is_ok());
    }

    #[test]
    fn bowtie_is_not_a_lattice() {
        // two minimal a,b; two maximal c,d; full bipartite order; bounds
        let p = Poset::from_covers(
            vec![lab("0"), lab("a"), lab("b"), lab("c"), lab("d"), lab("1")],
            &[
                (lab("0"), lab("a")),
                (lab("0"), lab("b")),
                (lab("a"), lab("c")),
                (lab("a"), lab("d")),
                (lab("b"), lab("c")),
                (lab("b"), lab("d")),
                (lab("c"), lab("1")),
                (lab("d"), lab("1")),
            ],
        )
        .unwrap();
        let err = BoundedLattice::from_poset(p).unwrap_err();
        match err {
            LatticeError::NoUniqueJoin(x, y, cands) | LatticeError::NoUniqueMeet(x, y, cands) => {
                assert!(!x.is_empty() && !y.is_empty());
                assert!(cands.contains('c') && cands.contains('d') || cands.contains('a') && cands.contains('b'));
            }
            other => panic!("expected non-unique meet/join, got {other}"),
        }
    }

    #[test]
    fn boolean_lattice_algebra() {
        let b3 = boolean_lattice(3);
        assert_eq!(b3.len(), 8);
        assert_eq!(b3.atoms().len(), 3);
        let n = b3.len();
        // commutativity, associativity, absorption, exhaustively
        for i in 0..n {
            for j in 0..n {
                assert_eq!(b3.meet(i, j), b3.meet(j, i));
                assert_eq!(b3.join(i, j), b3.join(j, i));
                assert_eq!(b3.meet(i, b3.join(i, j)), i);
                assert_eq!(b3.join(i, b3.meet(i, j)), i);
                for k in 0..n {
                    assert_eq!(b3.meet(b3.meet(i, j), k), b3.meet(i, b3.meet(j, k)));
                    assert_eq!(b3.join(b3.join(i, j), k), b3.join(i, b3.join(j, k)));
                }
            }
        }
    }

    #[test]
    fn meet_join_sets() {
        let b3 = boolean_lattice(3);
        let atoms = b3.atoms();
        assert_eq!(b3.join_set(atoms.iter().copied()), b3.top());
        assert_eq!(b3.meet_set(atoms.iter().copied().take(2)), b3.bottom());
        assert_eq!(b3.meet_set(std::iter::empty()), b3.top());
        assert_eq!(b3.join_set(std::iter::empty()), b3.bottom());
        // join of two atoms is the doubleton
        let x = b3.index(&Label::sorted_tuple(vec![lab("1")])).unwrap();
        let y = b3.index(&Label::sorted_tuple(vec![lab("2")])).unwrap();
        let xy = b3.index(&Label::sorted_tuple(vec![lab("1"), lab("2")])).unwrap();
        assert_eq!(b3.join(x, y), xy);
    }

    #[test]
    fn proper_part_of_diamond_is_antichain() {
        let p = Poset::from_covers(
            vec![lab("0"), lab("x"), lab("y"), lab("1")],
            &[
                (lab("0"), lab("x")),
                (lab("0"), lab("y")),
                (lab("x"), lab("1")),
                (lab("y"), lab("1")),
            ],
        )
        .unwrap();
        let l = BoundedLattice::from_poset(p).unwrap();
        let bar = l.proper_part();
        assert_eq!(bar.len(), 2);
        assert!(bar.covers().is_empty());
    }

    #[test]
    fn proper_part_of_two_chain_is_empty() {
        let p = Poset::from_covers(vec![lab("0"), lab("1")], &[(lab("0"), lab("1"))]).unwrap();
        let l = BoundedLattice::from_poset(p).unwrap();
        assert!(l.proper_part().is_empty());
    }

    #[test]
    fn atomic_sublattice_of_three_chain() {
        let p = Poset::from_covers(
            vec![lab("0"), lab("a"), lab("1")],
            &[(lab("0"), lab("a")), (lab("a"), lab("1"))],
        )
        .unwrap();
        let l = BoundedLattice::from_poset(p).unwrap();
        assert!(!l.is_atomic());
        let la = l.atomic_sublattice();
        assert_eq!(la.len(), 3); // 0̂, a, and 1̂ kept as bound
        assert_eq!(la.atomic_proper_indices().len(), la.proper_part().len());
    }

    #[test]
    fn boolean_is_atomic_and_idempotent() {
        let b3 = boolean_lattice(3);
        assert!(b3.is_atomic());
        let ba = b3.atomic_sublattice();
        assert_eq!(ba.len(), b3.len());
        let baa = ba.atomic_sublattice();
        assert_eq!(baa.poset().labels(), ba.poset().labels());
    }

    #[test]
    fn missing_bounds_detected() {
        let p = Poset::from_covers(vec![lab("a"), lab("b")], &[]).unwrap();
        assert!(matches!(
            BoundedLattice::from_poset(p),
            Err(LatticeError::MissingBottom)
        ));
    }
}
