//! Independent verification: integral simplicial homology via Smith normal
//! form over exact big integers, and exhaustive collapsibility search on tiny
//! complexes.
//!
//! Nothing in this module looks at matchings or certificates; it recomputes
//! everything from boundary matrices so it can serve as an oracle for the
//! collapse machinery.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::morse::deformation::{DeformationCertificate, DeformationStep, StepKind};

#[derive(Debug, thiserror::Error)]
pub enum HomologyError {
    #[error("boundary dimension {0} out of range 1..={1}")]
    DimOutOfRange(usize, usize),
    #[error("complex is empty")]
    EmptyComplex,
    #[error("complex has {0} faces, exceeding the search cap {1}")]
    SearchCapExceeded(usize, usize),
}

/// Dense exact integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .into_iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c);
                row.into_iter().map(BigInt::from)
            })
            .collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    /// Row operation: row[i] += c * row[k].
    pub fn add_row_multiple(&mut self, i: usize, k: usize, c: &BigInt) {
        for j in 0..self.cols {
            let delta = self.get(k, j) * c;
            let v = self.get(i, j) + delta;
            self.set(i, j, v);
        }
    }

    /// Column operation: col[j] += c * col[k].
    pub fn add_col_multiple(&mut self, j: usize, k: usize, c: &BigInt) {
        for i in 0..self.rows {
            let delta = self.get(i, k) * c;
            let v = self.get(i, j) + delta;
            self.set(i, j, v);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Result of Smith normal form: the nonzero invariant factors in divisibility
/// order (d₁ | d₂ | …), all positive; the rank is their count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

/// Smith normal form of a dense matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let sparse: Vec<BTreeMap<u32, BigInt>> = (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .filter(|&j| !m.get(i, j).is_zero())
                .map(|j| (j as u32, m.get(i, j).clone()))
                .collect()
        })
        .collect();
    smith_normal_form_sparse(sparse, m.cols)
}

/// Smith normal form by sparse integer elimination with min-absolute-value
/// pivoting, followed by pairwise divisibility normalization of the diagonal.
pub fn smith_normal_form_sparse(mut rows: Vec<BTreeMap<u32, BigInt>>, cols: usize) -> SmithForm {
    // column -> set of row indices with a nonzero entry there
    let mut col_rows: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); cols];
    for (i, row) in rows.iter().enumerate() {
        for (&j, _) in row.iter() {
            col_rows[j as usize].insert(i as u32);
        }
    }
    let mut alive_rows: BTreeSet<u32> = (0..rows.len() as u32)
        .filter(|&i| !rows[i as usize].is_empty())
        .collect();
    let mut diagonal: Vec<BigInt> = Vec::new();

    loop {
        // Pivot: minimal (|value|, fill) among nonzero entries of alive rows.
        let mut best: Option<(BigInt, usize, u32, u32)> = None;
        'scan: for &i in &alive_rows {
            for (&j, v) in rows[i as usize].iter() {
                let fill = (rows[i as usize].len() - 1) * (col_rows[j as usize].len() - 1);
                let a = v.abs();
                let better = match &best {
                    None => true,
                    Some((ba, bf, _, _)) => a < *ba || (a == *ba && fill < *bf),
                };
                if better {
                    let unit_no_fill = a.is_one() && fill == 0;
                    best = Some((a, fill, i, j));
                    if unit_no_fill {
                        break 'scan;
                    }
                }
            }
        }
        let Some((_, _, pi, pj)) = best else { break };

        // If the pivot does not divide its whole row and column, do one
        // reduction step; the remainder is strictly smaller than the pivot,
        // so re-picking the global minimum pivot makes progress.
        let pval = rows[pi as usize][&pj].clone();
        let offender_row = col_rows[pj as usize]
            .iter()
            .copied()
            .find(|&i| i != pi && !(&rows[i as usize][&pj] % &pval).is_zero());
        if let Some(i) = offender_row {
            let q = div_round(&rows[i as usize][&pj], &pval);
            row_axpy(&mut rows, &mut col_rows, i, pi, &-q);
            continue;
        }
        let offender_col = rows[pi as usize]
            .iter()
            .find(|(&j, v)| j != pj && !(*v % &pval).is_zero())
            .map(|(&j, _)| j);
        if let Some(j) = offender_col {
            let q = div_round(&rows[pi as usize][&j], &pval);
            col_axpy(&mut rows, &mut col_rows, j, pj, &-q);
            continue;
        }

        // Clear the pivot column and row with exact quotients.
        let col_others: Vec<u32> = col_rows[pj as usize].iter().copied().filter(|&i| i != pi).collect();
        for i in col_others {
            let q = &rows[i as usize][&pj] / &pval;
            row_axpy(&mut rows, &mut col_rows, i, pi, &-q);
        }
        let row_others: Vec<u32> = rows[pi as usize].keys().copied().filter(|&j| j != pj).collect();
        for j in row_others {
            let q = &rows[pi as usize][&j] / &pval;
            col_axpy(&mut rows, &mut col_rows, j, pj, &-q);
        }

        diagonal.push(pval.abs());
        // Retire the pivot row and column.
        let pivot_row = rows[pi as usize].clone();
        for (&j, _) in pivot_row.iter() {
            col_rows[j as usize].remove(&pi);
        }
        rows[pi as usize].clear();
        alive_rows.remove(&pi);
    }

    // Normalize the diagonal multiset into a divisibility chain:
    // diag(a, b) ~ diag(gcd(a,b), lcm(a,b)).
    let mut d = diagonal;
    loop {
        let mut changed = false;
        for i in 0..d.len() {
            for k in i + 1..d.len() {
                if !(&d[k] % &d[i]).is_zero() {
                    let g = d[i].gcd(&d[k]);
                    let l = (&d[i] / &g) * &d[k];
                    d[i] = g;
                    d[k] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    d.sort();
    SmithForm { factors: d }
}

/// Rounded division: quotient q minimizing |a − q·b|.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if r.abs() * 2 > b.abs() {
        if (a.sign() == b.sign()) && !r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn row_axpy(
    rows: &mut [BTreeMap<u32, BigInt>],
    col_rows: &mut [BTreeSet<u32>],
    target: u32,
    source: u32,
    c: &BigInt,
) {
    let src = rows[source as usize].clone();
    for (j, v) in src {
        let entry = rows[target as usize].entry(j).or_insert_with(BigInt::zero);
        *entry += v * c;
        if entry.is_zero() {
            rows[target as usize].remove(&j);
            col_rows[j as usize].remove(&target);
        } else {
            col_rows[j as usize].insert(target);
        }
    }
}

fn col_axpy(
    rows: &mut [BTreeMap<u32, BigInt>],
    col_rows: &mut [BTreeSet<u32>],
    target: u32,
    source: u32,
    c: &BigInt,
) {
    let src_rows: Vec<u32> = col_rows[source as usize].iter().copied().collect();
    for i in src_rows {
        let v = rows[i as usize][&source].clone() * c;
        let entry = rows[i as usize].entry(target).or_insert_with(BigInt::zero);
        *entry += v;
        if entry.is_zero() {
            rows[i as usize].remove(&target);
            col_rows[target as usize].remove(&i);
        } else {
            col_rows[target as usize].insert(i);
        }
    }
}

/// Homology of one dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimSummary {
    pub betti: usize,
    /// Invariant factors > 1, in divisibility order, as decimal strings.
    pub torsion: Vec<String>,
}

/// Unreduced integral homology, all dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub dims: Vec<DimSummary>,
    pub euler: i64,
}

impl HomologySummary {
    /// β alternating sum, which must equal χ.
    pub fn betti_alternating_sum(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, d)| if i % 2 == 0 { d.betti as i64 } else { -(d.betti as i64) })
            .sum()
    }
}

/// The boundary matrix ∂_d with signs from the sorted-vertex orientation.
/// Rows index (d−1)-simplices, columns index d-simplices, both in canonical
/// sorted order.
pub fn boundary_matrix(k: &SimplicialComplex, d: usize) -> Result<IntMatrix, HomologyError> {
    let top = k.dim().ok_or(HomologyError::EmptyComplex)?;
    if d == 0 || d > top {
        return Err(HomologyError::DimOutOfRange(d, top));
    }
    let rows: Vec<&Simplex> = k.simplices().filter(|s| s.dim() == d - 1).collect();
    let cols: Vec<&Simplex> = k.simplices().filter(|s| s.dim() == d).collect();
    let row_index: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut m = IntMatrix::zero(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for (pos, f) in s.facets().iter().enumerate() {
            // facets() drops vertex `pos` of the sorted list, so the sign is (−1)^pos
            let i = row_index[f];
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            m.set(i, j, BigInt::from(sign));
        }
    }
    Ok(m)
}

fn boundary_sparse(k: &SimplicialComplex, d: usize) -> (Vec<BTreeMap<u32, BigInt>>, usize) {
    let rows: Vec<&Simplex> = k.simplices().filter(|s| s.dim() == d - 1).collect();
    let cols: Vec<&Simplex> = k.simplices().filter(|s| s.dim() == d).collect();
    let row_index: BTreeMap<&Simplex, usize> = rows.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut sparse: Vec<BTreeMap<u32, BigInt>> = vec![BTreeMap::new(); rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for (pos, f) in s.facets().iter().enumerate() {
            let i = row_index[&f];
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            sparse[i].insert(j as u32, BigInt::from(sign));
        }
    }
    (sparse, cols.len())
}

/// Unreduced integral homology of a nonempty complex.
pub fn homology(k: &SimplicialComplex) -> Result<HomologySummary, HomologyError> {
    let top = k.dim().ok_or(HomologyError::EmptyComplex)?;
    let f = k.f_vector();
    let mut snf: Vec<SmithForm> = Vec::with_capacity(top);
    for d in 1..=top {
        let (rows, ncols) = boundary_sparse(k, d);
        snf.push(smith_normal_form_sparse(rows, ncols));
    }
    let rank = |d: usize| -> usize {
        if d == 0 || d > top {
            0
        } else {
            snf[d - 1].rank()
        }
    };
    let mut dims = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let betti = f[d] - rank(d) - rank(d + 1);
        let torsion = if d + 1 <= top {
            snf[d].torsion().iter().map(|t| t.to_string()).collect()
        } else {
            Vec::new()
        };
        dims.push(DimSummary { betti, torsion });
    }
    let summary = HomologySummary { dims, euler: k.euler_characteristic() };
    debug_assert_eq!(summary.betti_alternating_sum(), summary.euler);
    Ok(summary)
}

/// Componentwise equality of homology summaries (trailing trivial dimensions
/// are ignored, so complexes of different top dimension compare sensibly).
pub fn homology_equal(a: &HomologySummary, b: &HomologySummary) -> bool {
    let trivial = |d: &DimSummary| d.betti == 0 && d.torsion.is_empty();
    let len = a.dims.len().max(b.dims.len());
    for i in 0..len {
        match (a.dims.get(i), b.dims.get(i)) {
            (Some(x), Some(y)) => {
                if x != y {
                    return false;
                }
            }
            (Some(x), None) => {
                if !trivial(x) {
                    return false;
                }
            }
            (None, Some(y)) => {
                if !trivial(y) {
                    return false;
                }
            }
            (None, None) => {}
        }
    }
    true
}

/// Exhaustive backtracking search for a collapse sequence from `k` down to
/// `k_sub`, over free-face moves. Definitive within the cap: returns `None`
/// only when no sequence exists.
pub fn brute_force_collapse_search(
    k: &SimplicialComplex,
    k_sub: &SimplicialComplex,
    cap: usize,
) -> Result<Option<DeformationCertificate>, HomologyError> {
    if k.len() > cap || k.len() > 63 {
        return Err(HomologyError::SearchCapExceeded(k.len(), cap.min(63)));
    }
    if !k_sub.is_subcomplex_of(k) {
        return Ok(None);
    }
    let universe: Vec<Simplex> = k.simplices().cloned().collect();
    let index: BTreeMap<&Simplex, usize> = universe.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let target: u64 = k_sub.simplices().map(|s| 1u64 << index[s]).fold(0, |a, b| a | b);
    let full: u64 = (0..universe.len()).map(|i| 1u64 << i).fold(0, |a, b| a | b);
    let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); universe.len()];
    for (i, s) in universe.iter().enumerate() {
        for f in s.facets() {
            cofaces[index[&f]].push(i);
        }
    }

    fn dfs(
        state: u64,
        target: u64,
        universe: &[Simplex],
        cofaces: &[Vec<usize>],
        seen: &mut HashSet<u64>,
        steps: &mut Vec<DeformationStep>,
    ) -> bool {
        if state == target {
            return true;
        }
        if !seen.insert(state) {
            return false;
        }
        for t in 0..universe.len() {
            if state & (1 << t) == 0 || target & (1 << t) != 0 {
                continue;
            }
            let present: Vec<usize> = cofaces[t]
                .iter()
                .copied()
                .filter(|&c| state & (1 << c) != 0)
                .collect();
            if let [c] = present.as_slice() {
                let c = *c;
                if target & (1 << c) != 0 {
                    continue;
                }
                // the unique coface must itself be maximal in the current complex
                if cofaces[c].iter().any(|&cc| state & (1 << cc) != 0) {
                    continue;
                }
                let next = state & !(1 << t) & !(1 << c);
                steps.push(DeformationStep {
                    kind: StepKind::Collapse,
                    free: universe[t].clone(),
                    coface: universe[c].clone(),
                });
                if dfs(next, target, universe, cofaces, seen, steps) {
                    return true;
                }
                steps.pop();
            }
        }
        false
    }

    let mut seen: HashSet<u64> = HashSet::new();
    let mut steps: Vec<DeformationStep> = Vec::new();
    if dfs(full, target, &universe, &cofaces, &mut seen, &mut steps) {
        Ok(Some(DeformationCertificate { start: k.clone(), steps, end: k_sub.clone() }))
    } else {
        Ok(None)
    }
}
