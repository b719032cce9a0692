//! Graded face posets of regular CW complexes.
//!
//! Cells carry a payload (for `Hom(K₂,G)` the complete bipartite pair); the
//! order is the face relation and must respect the dimension grading.

use std::collections::BTreeMap;

use crate::complex::{Simplex, SimplicialComplex};
use crate::label::Label;
use crate::poset::{Poset, PosetError, Rel};

#[derive(Debug, thiserror::Error)]
pub enum CwError {
    #[error("face order does not respect dimension: {0} < {1}")]
    DimensionViolation(String, String),
    #[error("duplicate cell label {0}")]
    DuplicateCell(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// The face poset of a regular CW complex, graded by cell dimension.
#[derive(Clone)]
pub struct RegularCwPoset<P> {
    labels: Vec<Label>,
    dims: Vec<usize>,
    payloads: Vec<P>,
    lt: Rel,
}

impl<P> RegularCwPoset<P> {
    /// Builds from cells `(label, dim, payload)` and a strict face predicate.
    /// The predicate must already be transitive; dimension monotonicity is
    /// verified here.
    pub fn new<F>(cells: Vec<(Label, usize, P)>, strictly_below: F) -> Result<Self, CwError>
    where
        F: Fn(&P, &P) -> bool,
    {
        let mut cells = cells;
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = cells.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(CwError::DuplicateCell(w[0].0.to_string()));
        }
        let n = cells.len();
        let mut lt = Rel::new(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && strictly_below(&cells[i].2, &cells[j].2) {
                    if cells[i].1 >= cells[j].1 {
                        return Err(CwError::DimensionViolation(
                            cells[i].0.to_string(),
                            cells[j].0.to_string(),
                        ));
                    }
                    lt.set(i, j);
                }
            }
        }
        let mut labels = Vec::with_capacity(n);
        let mut dims = Vec::with_capacity(n);
        let mut payloads = Vec::with_capacity(n);
        for (l, d, p) in cells {
            labels.push(l);
            dims.push(d);
            payloads.push(p);
        }
        Ok(RegularCwPoset { labels, dims, payloads, lt })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn payload(&self, i: usize) -> &P {
        &self.payloads[i]
    }

    pub fn payloads(&self) -> &[P] {
        &self.payloads
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.lt.get(i, j)
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.dims[i] == d)
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.dims.iter().copied().max()
    }

    /// Number of cells per dimension.
    pub fn cell_vector(&self) -> Vec<usize> {
        let Some(d) = self.max_dim() else { return Vec::new() };
        let mut v = vec![0; d + 1];
        for &dim in &self.dims {
            v[dim] += 1;
        }
        v
    }

    /// Forgets payloads and grading.
    pub fn as_poset(&self) -> Poset {
        Poset::from_parts(self.labels.clone(), self.lt.clone())
            .expect("CW face order is a valid strict order")
    }

    /// The barycentric subdivision Δ(F(X)) as a simplicial complex: vertices
    /// are the cells, simplices the chains of cells.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        self.as_poset().order_complex()
    }
}

/// Face poset of a simplicial complex: one cell per nonempty simplex, ordered
/// by strict inclusion, labeled by the simplex's vertex tuple.
pub fn face_poset(k: &SimplicialComplex) -> RegularCwPoset<Simplex> {
    let cells: Vec<(Label, usize, Simplex)> = k
        .simplices()
        .map(|s| (s.as_label(), s.dim(), s.clone()))
        .collect();
    RegularCwPoset::new(cells, |a: &Simplex, b: &Simplex| a != b && a.is_face_of(b))
        .expect("inclusion respects dimension")
}

/// Maps each face poset element back to its simplex.
pub fn face_poset_payload_map(cw: &RegularCwPoset<Simplex>) -> BTreeMap<Label, Simplex> {
    (0..cw.len())
        .map(|i| (cw.label(i).clone(), cw.payload(i).clone()))
        .collect()
}
