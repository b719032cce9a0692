//! Finite posets: covers, strict order closure, linear extensions, chains.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::label::Label;

#[derive(Debug, thiserror::Error)]
pub enum PosetError {
    #[error("cover relation contains a cycle through `{0}`")]
    Cycle(String),
    #[error("unknown element `{0}` in cover relation")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("relation is not transitive: {0} < {1} < {2} but not {0} < {2}")]
    NotTransitive(String, String, String),
    #[error("element `{0}` is not in the poset")]
    NotAnElement(String),
}

/// Row-major strict-order bit matrix.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct Rel {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl Rel {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64).max(1);
        Rel { n, words_per_row, bits: vec![0; words_per_row * n] }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1u64 << (j % 64);
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] & (1u64 << (j % 64)) != 0
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Merges row `j` into row `i` (union).
    pub fn or_row(&mut self, i: usize, j: usize) {
        let (w, n) = (self.words_per_row, self.bits.len());
        debug_assert!(i * w + w <= n && j * w + w <= n);
        for k in 0..w {
            let v = self.bits[j * w + k];
            self.bits[i * w + k] |= v;
        }
    }

    pub fn transpose(&self) -> Rel {
        let mut t = Rel::new(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                if self.get(i, j) {
                    t.set(j, i);
                }
            }
        }
        t
    }

    pub fn iter_row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = self.row(i);
        (0..self.n).filter(move |&j| row[j / 64] & (1u64 << (j % 64)) != 0)
    }
}

/// A finite poset over canonical labels. The strict order is stored closed
/// under transitivity; covers are re-derived from it.
#[derive(Clone)]
pub struct Poset {
    labels: Vec<Label>,
    /// lt.get(i, j) ⟺ element i < element j.
    pub(crate) lt: Rel,
    covers: Vec<(usize, usize)>,
    /// Cover edges supplied to `from_covers` that turned out redundant
    /// (implied by transitivity); normalized away but reported.
    redundant_covers: Vec<(Label, Label)>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.lt == other.lt
    }
}
impl Eq for Poset {}

impl Poset {
    /// Builds from elements and a cover list. The cover list must be acyclic;
    /// non-minimal edges are normalized away and recorded.
    pub fn from_covers(
        elements: impl Into<Vec<Label>>,
        covers: &[(Label, Label)],
    ) -> Result<Poset, PosetError> {
        let mut labels: Vec<Label> = elements.into();
        labels.sort();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            let dup = labels
                .windows(2)
                .find(|w| w[0] == w[1])
                .map(|w| w[0].to_string())
                .unwrap();
            return Err(PosetError::DuplicateElement(dup));
        }
        let n = labels.len();
        let index = |l: &Label| -> Result<usize, PosetError> {
            labels
                .binary_search(l)
                .map_err(|_| PosetError::UnknownElement(l.to_string()))
        };
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (lo, hi) in covers {
            let (i, j) = (index(lo)?, index(hi)?);
            if i == j {
                return Err(PosetError::Cycle(lo.to_string()));
            }
            succ[i].push(j);
            indeg[j] += 1;
        }
        // Topological order; a leftover node means a cycle.
        let mut order: Vec<usize> = Vec::with_capacity(n);
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        while let Some(i) = queue.pop() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push(j);
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&i| indeg[i] > 0).unwrap();
            return Err(PosetError::Cycle(labels[stuck].to_string()));
        }
        // Transitive closure in reverse topological order.
        let mut lt = Rel::new(n);
        for &i in order.iter().rev() {
            for &j in &succ[i] {
                lt.set(i, j);
                lt.or_row(i, j);
            }
        }
        for i in 0..n {
            if lt.get(i, i) {
                return Err(PosetError::Cycle(labels[i].to_string()));
            }
        }
        let mut poset = Poset { labels, lt, covers: Vec::new(), redundant_covers: Vec::new() };
        poset.derive_covers();
        for (lo, hi) in covers {
            let (i, j) = (index_of(&poset.labels, lo).unwrap(), index_of(&poset.labels, hi).unwrap());
            if !poset.covers.contains(&(i, j)) {
                poset.redundant_covers.push((lo.clone(), hi.clone()));
            }
        }
        Ok(poset)
    }

    /// Builds from elements and a comparison predicate `strictly_less`.
    /// Irreflexivity, antisymmetry, and transitivity are verified.
    pub fn from_strict_relation<F>(elements: impl Into<Vec<Label>>, strictly_less: F) -> Result<Poset, PosetError>
    where
        F: Fn(&Label, &Label) -> bool,
    {
        let mut labels: Vec<Label> = elements.into();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(PosetError::DuplicateElement(w[0].to_string()));
        }
        let n = labels.len();
        let mut lt = Rel::new(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && strictly_less(&labels[i], &labels[j]) {
                    lt.set(i, j);
                }
            }
        }
        Self::from_parts(labels, lt)
    }

    pub(crate) fn from_parts(labels: Vec<Label>, lt: Rel) -> Result<Poset, PosetError> {
        let n = labels.len();
        for i in 0..n {
            if lt.get(i, i) {
                return Err(PosetError::Cycle(labels[i].to_string()));
            }
            for j in 0..n {
                if lt.get(i, j) && lt.get(j, i) {
                    return Err(PosetError::Cycle(labels[i].to_string()));
                }
            }
        }
        // Transitivity check.
        for i in 0..n {
            for j in lt.iter_row(i).collect::<Vec<_>>() {
                for k in lt.iter_row(j).collect::<Vec<_>>() {
                    if !lt.get(i, k) {
                        return Err(PosetError::NotTransitive(
                            labels[i].to_string(),
                            labels[j].to_string(),
                            labels[k].to_string(),
                        ));
                    }
                }
            }
        }
        let mut poset = Poset { labels, lt, covers: Vec::new(), redundant_covers: Vec::new() };
        poset.derive_covers();
        Ok(poset)
    }

    fn derive_covers(&mut self) {
        let n = self.len();
        let mut covers = Vec::new();
        for i in 0..n {
            'pair: for j in self.lt.iter_row(i).collect::<Vec<_>>() {
                for k in self.lt.iter_row(i).collect::<Vec<_>>() {
                    if k != j && self.lt.get(k, j) {
                        continue 'pair;
                    }
                }
                covers.push((i, j));
            }
        }
        covers.sort();
        self.covers = covers;
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn index(&self, l: &Label) -> Option<usize> {
        self.labels.binary_search(l).ok()
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.lt.get(i, j)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.lt.get(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i == j || self.lt.get(i, j) || self.lt.get(j, i)
    }

    /// Cover pairs (lower, upper), sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cover_labels(&self) -> Vec<(Label, Label)> {
        self.covers
            .iter()
            .map(|&(i, j)| (self.labels[i].clone(), self.labels[j].clone()))
            .collect()
    }

    pub fn redundant_covers(&self) -> &[(Label, Label)] {
        &self.redundant_covers
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.lt.get(j, i)))
            .collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| (0..self.len()).all(|j| !self.lt.get(i, j)))
            .collect()
    }

    /// The opposite poset (order reversed).
    pub fn opposite(&self) -> Poset {
        let mut p = Poset {
            labels: self.labels.clone(),
            lt: self.lt.transpose(),
            covers: Vec::new(),
            redundant_covers: Vec::new(),
        };
        p.derive_covers();
        p
    }

    /// Height of each element: length of a longest chain strictly below it.
    pub fn heights(&self) -> Vec<usize> {
        let n = self.len();
        let mut h = vec![0usize; n];
        let order = self.linear_extension_indices();
        for &j in &order {
            for i in 0..n {
                if self.lt.get(i, j) {
                    h[j] = h[j].max(h[i] + 1);
                }
            }
        }
        h
    }

    /// Deterministic linear extension: ascending height, then label order.
    pub fn linear_extension(&self) -> Vec<Label> {
        self.linear_extension_indices()
            .into_iter()
            .map(|i| self.labels[i].clone())
            .collect()
    }

    pub fn linear_extension_indices(&self) -> Vec<usize> {
        // Height needs a topological pass first; compute by repeated peeling.
        let n = self.len();
        let mut h = vec![usize::MAX; n];
        let mut remaining = n;
        let mut level = 0usize;
        while remaining > 0 {
            for i in 0..n {
                if h[i] == usize::MAX
                    && (0..n).all(|j| !self.lt.get(j, i) || h[j] < level)
                {
                    h[i] = level;
                    remaining -= 1;
                }
            }
            level += 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| h[a].cmp(&h[b]).then_with(|| self.labels[a].cmp(&self.labels[b])));
        order
    }

    /// Induced subposet on the given element indices.
    pub fn induced(&self, subset: &[usize]) -> Poset {
        let labels: Vec<Label> = {
            let mut v: Vec<Label> = subset.iter().map(|&i| self.labels[i].clone()).collect();
            v.sort();
            v
        };
        let old_index: BTreeMap<&Label, usize> =
            subset.iter().map(|&i| (&self.labels[i], i)).collect();
        let n = labels.len();
        let mut lt = Rel::new(n);
        for a in 0..n {
            for b in 0..n {
                if a != b && self.lt.get(old_index[&labels[a]], old_index[&labels[b]]) {
                    lt.set(a, b);
                }
            }
        }
        let mut p = Poset { labels, lt, covers: Vec::new(), redundant_covers: Vec::new() };
        p.derive_covers();
        p
    }

    /// All nonempty chains, each as a sorted simplex of element labels.
    pub fn chains(&self) -> Vec<Simplex> {
        let n = self.len();
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
        while let Some((top, chain)) = stack.pop() {
            out.push(Simplex::new(chain.iter().map(|&i| self.labels[i].clone()).collect::<Vec<_>>())
                .expect("chain elements are distinct"));
            for j in self.lt.iter_row(top) {
                let mut next = chain.clone();
                next.push(j);
                stack.push((j, next));
            }
        }
        out
    }

    /// The order complex Δ(P): simplices are the nonempty chains.
    pub fn order_complex(&self) -> SimplicialComplex {
        SimplicialComplex::from_closed_family(self.chains().into_iter().collect())
    }

    /// All maximal chains, as index vectors in ascending order.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        // Successor lists along covers.
        let mut cover_up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in &self.covers {
            cover_up[i].push(j);
        }
        let mut stack: Vec<Vec<usize>> =
            self.minimal_elements().into_iter().map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            if cover_up[last].is_empty() {
                out.push(chain);
            } else {
                for &j in &cover_up[last] {
                    let mut next = chain.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
        out
    }

    /// Strict down-set of `i` as indices.
    pub fn below(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.lt.get(j, i)).collect()
    }

    /// Strict up-set of `i` as indices.
    pub fn above(&self, i: usize) -> Vec<usize> {
        self.lt.iter_row(i).collect()
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset{{{} elements, covers: ", self.len())?;
        for (k, (i, j)) in self.covers.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}<{}", self.labels[*i], self.labels[*j])?;
        }
        write!(f, "}}")
    }
}

fn index_of(labels: &[Label], l: &Label) -> Option<usize> {
    labels.binary_search(l).ok()
}

/// JSON form shared by posets and lattices:
/// `{"elements": [...], "covers": [[lo, hi], ...]}` with elements as strings.
#[derive(Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl Poset {
    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.iter().map(|l| l.to_string()).collect(),
            covers: self
                .cover_labels()
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Poset, PosetError> {
        let parse = |s: &String| -> Result<Label, PosetError> {
            s.parse::<Label>().map_err(|_| PosetError::UnknownElement(s.clone()))
        };
        let elements = json.elements.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        let covers = json
            .covers
            .iter()
            .map(|(a, b)| Ok((parse(a)?, parse(b)?)))
            .collect::<Result<Vec<_>, PosetError>>()?;
        Poset::from_covers(elements, &covers)
    }
}
