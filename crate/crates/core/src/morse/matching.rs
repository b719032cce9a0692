//! Partial matchings on face posets, acyclicity checking, and the conversion
//! of an acyclic matching into an explicit elementary collapse sequence.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Simplex, SimplicialComplex};
use crate::morse::deformation::{DeformationCertificate, DeformationStep, StepKind};

#[derive(Debug, thiserror::Error)]
pub enum MatchingError {
    #[error("matched cell {0} is not in the complex")]
    CellMissing(String),
    #[error("μ({0}) = {1} does not cover {0}")]
    NotACover(String, String),
    #[error("matching is not injective at {0}")]
    NotInjective(String),
    #[error("Σ and μ(Σ) overlap at {0}")]
    Overlap(String),
    #[error("matching has a directed cycle: {0}")]
    Cyclic(String),
    #[error("critical cells differ from the target subcomplex ({extra} extra, {missing} missing; e.g. {witness})")]
    CriticalMismatch { extra: usize, missing: usize, witness: String },
    #[error("target is not a subcomplex of the source")]
    NotASubcomplex,
    #[error("no emissible free pair although {remaining} matched cells remain (next stuck pair: {witness}); this contradicts acyclicity")]
    Stuck { remaining: usize, witness: String },
}

/// Report from the acyclicity check.
#[derive(Debug, Clone)]
pub struct AcyclicityReport {
    pub acyclic: bool,
    /// A directed cycle through matched lower cells, when one exists.
    pub cycle: Option<Vec<Simplex>>,
    pub critical_count: usize,
}

/// An injective cover-respecting matching μ: Σ → F(K) ∖ Σ on the face poset
/// of a simplicial complex. Critical cells are the unmatched ones.
#[derive(Clone)]
pub struct PartialMatching {
    complex: SimplicialComplex,
    /// lower cell ↦ its matched cover coface
    pairs: BTreeMap<Simplex, Simplex>,
}

impl PartialMatching {
    /// Builds and verifies well-formedness (membership, covering, injectivity,
    /// disjointness of Σ and μ(Σ)).
    pub fn new(
        complex: SimplicialComplex,
        pairs: BTreeMap<Simplex, Simplex>,
    ) -> Result<Self, MatchingError> {
        let mut uppers = BTreeSet::new();
        for (lo, hi) in &pairs {
            if !complex.contains(lo) {
                return Err(MatchingError::CellMissing(lo.to_string()));
            }
            if !complex.contains(hi) {
                return Err(MatchingError::CellMissing(hi.to_string()));
            }
            if hi.dim() != lo.dim() + 1 || !lo.is_face_of(hi) {
                return Err(MatchingError::NotACover(lo.to_string(), hi.to_string()));
            }
            if !uppers.insert(hi.clone()) {
                return Err(MatchingError::NotInjective(hi.to_string()));
            }
        }
        for hi in &uppers {
            if pairs.contains_key(hi) {
                return Err(MatchingError::Overlap(hi.to_string()));
            }
        }
        Ok(PartialMatching { complex, pairs })
    }

    pub fn empty(complex: SimplicialComplex) -> Self {
        PartialMatching { complex, pairs: BTreeMap::new() }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn pairs(&self) -> &BTreeMap<Simplex, Simplex> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Cells matched neither down nor up.
    pub fn critical_cells(&self) -> BTreeSet<Simplex> {
        let matched: BTreeSet<&Simplex> = self
            .pairs
            .iter()
            .flat_map(|(lo, hi)| [lo, hi])
            .collect();
        self.complex
            .simplices()
            .filter(|s| !matched.contains(s))
            .cloned()
            .collect()
    }

    /// Detects directed cycles μ(x₁) ≻ x₂, μ(x₂) ≻ x₃, …, μ(x_t) ≻ x₁ among
    /// matched lower cells.
    pub fn check_acyclic(&self) -> AcyclicityReport {
        // Index the lower cells; edge x → y iff y ≺ μ(x), y ≠ x, y matched-lower.
        let lowers: Vec<&Simplex> = self.pairs.keys().collect();
        let index: BTreeMap<&Simplex, usize> =
            lowers.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); lowers.len()];
        for (i, lo) in lowers.iter().enumerate() {
            let up = &self.pairs[*lo];
            for f in up.facets() {
                if &f != *lo {
                    if let Some(&j) = index.get(&f) {
                        adj[i].push(j);
                    }
                }
            }
        }
        // Iterative DFS with colors; extract a cycle witness on back edge.
        #[derive(Clone, Copy, PartialEq)]
        enum Color {
            White,
            Grey,
            Black,
        }
        let mut color = vec![Color::White; lowers.len()];
        let mut parent: Vec<Option<usize>> = vec![None; lowers.len()];
        for start in 0..lowers.len() {
            if color[start] != Color::White {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
            color[start] = Color::Grey;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < adj[v].len() {
                    let w = adj[v][*next];
                    *next += 1;
                    match color[w] {
                        Color::White => {
                            color[w] = Color::Grey;
                            parent[w] = Some(v);
                            stack.push((w, 0));
                        }
                        Color::Grey => {
                            // cycle: walk back from v to w
                            let mut cycle = vec![lowers[w].clone()];
                            let mut cur = v;
                            while cur != w {
                                cycle.push(lowers[cur].clone());
                                cur = parent[cur].expect("grey nodes have parents on the stack");
                            }
                            cycle.reverse();
                            return AcyclicityReport {
                                acyclic: false,
                                cycle: Some(cycle),
                                critical_count: self.complex.len() - 2 * self.pairs.len(),
                            };
                        }
                        Color::Black => {}
                    }
                } else {
                    color[v] = Color::Black;
                    stack.pop();
                }
            }
        }
        AcyclicityReport {
            acyclic: true,
            cycle: None,
            critical_count: self.complex.len() - 2 * self.pairs.len(),
        }
    }

    pub fn ensure_acyclic(&self) -> Result<(), MatchingError> {
        let report = self.check_acyclic();
        if report.acyclic {
            Ok(())
        } else {
            let cyc = report
                .cycle
                .unwrap_or_default()
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(" → ");
            Err(MatchingError::Cyclic(cyc))
        }
    }
}

/// Converts an acyclic matching with critical cells exactly `F(k_sub)` into
/// an explicit collapse sequence from `k` to `k_sub`.
///
/// Scheduling is greedy, highest coface dimension first with lexicographic
/// tie-break on the coface. A deadlock contradicts acyclicity and is reported
/// as an internal error carrying the stuck state.
pub fn matching_to_collapses(
    k: &SimplicialComplex,
    k_sub: &SimplicialComplex,
    matching: &PartialMatching,
) -> Result<DeformationCertificate, MatchingError> {
    assert_eq!(matching.complex(), k, "matching must live on the source complex");
    if !k_sub.is_subcomplex_of(k) {
        return Err(MatchingError::NotASubcomplex);
    }
    {
        let criticals = matching.critical_cells();
        let target: BTreeSet<Simplex> = k_sub.simplices().cloned().collect();
        if criticals != target {
            let extra = criticals.difference(&target).count();
            let missing = target.difference(&criticals).count();
            let witness = criticals
                .symmetric_difference(&target)
                .next()
                .map(|s| s.to_string())
                .unwrap_or_default();
            return Err(MatchingError::CriticalMismatch { extra, missing, witness });
        }
    }
    matching.ensure_acyclic()?;

    // Intern every cell of k.
    let universe: Vec<&Simplex> = k.simplices().collect();
    let index: BTreeMap<&Simplex, usize> =
        universe.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = universe.len();
    let mut cover_cofaces: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, s) in universe.iter().enumerate() {
        for f in s.facets() {
            if let Some(&fi) = index.get(&f) {
                cover_cofaces[fi].push(i as u32);
            }
        }
    }
    let mut partner: Vec<Option<u32>> = vec![None; n];
    let mut is_lower = vec![false; n];
    for (lo, hi) in matching.pairs() {
        let (li, hi_) = (index[lo], index[hi]);
        partner[li] = Some(hi_ as u32);
        partner[hi_] = Some(li as u32);
        is_lower[li] = true;
    }
    let mut present = vec![true; n];
    let mut coface_count: Vec<u32> = (0..n).map(|i| cover_cofaces[i].len() as u32).collect();

    let emissible = |t: usize, present: &[bool], coface_count: &[u32]| -> bool {
        let Some(u) = partner[t] else { return false };
        is_lower[t]
            && present[t]
            && present[u as usize]
            && coface_count[t] == 1
            && coface_count[u as usize] == 0
    };

    // Queue keyed by (coface dim descending, coface lexicographic ascending).
    let mut queue: BTreeSet<(std::cmp::Reverse<usize>, Simplex)> = BTreeSet::new();
    for (lo, hi) in matching.pairs() {
        let t = index[lo];
        if emissible(t, &present, &coface_count) {
            queue.insert((std::cmp::Reverse(hi.dim()), hi.clone()));
        }
    }

    let mut steps = Vec::with_capacity(matching.len());
    let mut remaining = matching.len();
    while remaining > 0 {
        let Some(entry) = queue.iter().next().cloned() else {
            let witness = matching
                .pairs()
                .iter()
                .find(|(lo, _)| present[index[*lo]])
                .map(|(lo, hi)| format!("({lo}, {hi})"))
                .unwrap_or_default();
            return Err(MatchingError::Stuck { remaining, witness });
        };
        queue.remove(&entry);
        let (_, ref upper) = entry;
        let u = index[upper];
        let t = partner[u].expect("queued uppers are matched") as usize;
        if !emissible(t, &present, &coface_count) {
            continue; // stale entry
        }
        steps.push(DeformationStep {
            kind: StepKind::Collapse,
            free: universe[t].clone(),
            coface: universe[u].clone(),
        });
        present[t] = false;
        present[u] = false;
        remaining -= 1;
        // Removing a cell decrements the present-coface count of its facets;
        // re-test those facets' matched pairs.
        for &cell in [t, u].iter() {
            for f in universe[cell].facets() {
                if let Some(&fi) = index.get(&f) {
                    if present[fi] {
                        coface_count[fi] -= 1;
                    }
                    // fi may itself now be emissible, or its lower partner
                    let candidates = [fi, partner[fi].map_or(fi, |p| p as usize)];
                    for &c in &candidates {
                        if is_lower[c] && emissible(c, &present, &coface_count) {
                            let up = partner[c].unwrap() as usize;
                            queue.insert((std::cmp::Reverse(universe[up].dim()), universe[up].clone()));
                        }
                    }
                }
            }
        }
    }

    debug_assert!(
        (0..n).all(|i| present[i] == k_sub.contains(universe[i])),
        "collapse schedule must terminate exactly at the critical subcomplex"
    );
    Ok(DeformationCertificate { start: k.clone(), steps, end: k_sub.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::Label;

    fn lab(s: &str) -> Label {
        Label::atom(s)
    }

    fn sx(vs: &[&str]) -> Simplex {
        Simplex::new(vs.iter().map(|v| lab(v)).collect::<Vec<_>>()).unwrap()
    }

    fn complex(facets: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(
            facets
                .iter()
                .map(|f| f.iter().map(|v| lab(v)).collect::<Vec<_>>()),
        )
        .unwrap()
    }

    #[test]
    fn empty_matching_is_acyclic_with_all_critical() {
        let k = complex(&[&["1", "2", "3"]]);
        let m = PartialMatching::empty(k.clone());
        let report = m.check_acyclic();
        assert!(report.acyclic);
        assert_eq!(report.critical_count, 7);
        assert_eq!(m.critical_cells().len(), 7);
    }

    #[test]
    fn cone_matching_is_acyclic() {
        // Δ² = cone over edge {1,2} with apex 3: pair each τ not containing 3
        // with τ ∪ {3}
        let k = complex(&[&["1", "2", "3"]]);
        let mut pairs = BTreeMap::new();
        for tau in [sx(&["1"]), sx(&["2"]), sx(&["1", "2"])] {
            pairs.insert(tau.clone(), tau.with_vertex(&lab("3")));
        }
        let m = PartialMatching::new(k, pairs).unwrap();
        let report = m.check_acyclic();
        assert!(report.acyclic);
        assert_eq!(m.critical_cells().len(), 1); // just the apex vertex {3}
    }

    #[test]
    fn square_boundary_cycle_detected() {
        // 4-cycle with vᵢ ↦ e(vᵢ, vᵢ₊₁): a directed cycle around the square
        let k = complex(&[&["1", "2"], &["2", "3"], &["3", "4"], &["1", "4"]]);
        let mut pairs = BTreeMap::new();
        pairs.insert(sx(&["1"]), sx(&["1", "2"]));
        pairs.insert(sx(&["2"]), sx(&["2", "3"]));
        pairs.insert(sx(&["3"]), sx(&["3", "4"]));
        pairs.insert(sx(&["4"]), sx(&["1", "4"]));
        let m = PartialMatching::new(k, pairs).unwrap();
        let report = m.check_acyclic();
        assert!(!report.acyclic);
        let cycle = report.cycle.unwrap();
        assert!(cycle.len() >= 2);
    }

    #[test]
    fn malformed_matching_rejected() {
        let k = complex(&[&["1", "2", "3"]]);
        let mut pairs = BTreeMap::new();
        pairs.insert(sx(&["1"]), sx(&["1", "2", "3"]));
        assert!(matches!(
            PartialMatching::new(k, pairs),
            Err(MatchingError::NotACover(..))
        ));
    }

    #[test]
    fn cone_matching_collapses_triangle_to_vertex() {
        let k = complex(&[&["1", "2", "3"]]);
        let mut pairs = BTreeMap::new();
        for tau in [sx(&["1"]), sx(&["2"]), sx(&["1", "2"])] {
            pairs.insert(tau.clone(), tau.with_vertex(&lab("3")));
        }
        let m = PartialMatching::new(k.clone(), pairs).unwrap();
        let vertex = complex(&[&["3"]]);
        let cert = matching_to_collapses(&k, &vertex, &m).unwrap();
        assert_eq!(cert.steps.len(), 3);
        cert.verify().unwrap();
        // highest dimension first
        assert_eq!(cert.steps[0].coface, sx(&["1", "2", "3"]));
    }

    #[test]
    fn empty_matching_gives_empty_certificate() {
        let k = complex(&[&["1", "2"]]);
        let m = PartialMatching::empty(k.clone());
        let cert = matching_to_collapses(&k, &k, &m).unwrap();
        assert!(cert.steps.is_empty());
        cert.verify().unwrap();
    }

    #[test]
    fn critical_mismatch_reported() {
        let k = complex(&[&["1", "2"]]);
        let m = PartialMatching::empty(k.clone());
        let sub = complex(&[&["1"]]);
        assert!(matches!(
            matching_to_collapses(&k, &sub, &m),
            Err(MatchingError::CriticalMismatch { .. })
        ));
    }
}
