//! Formal deformations through subdivisions: from a complex to any of its
//! stellar subdivisions, and along a full barycentric subdivision.
//!
//! The stellar deformation at σ runs in two phases. First a cone over the
//! closed star of σ is attached by elementary expansions (the reverse of a
//! cone collapse scheduled so the apex enters first). Then every simplex
//! containing σ is deleted by elementary collapses, pairing each such simplex
//! ρ with ρ ∪ {v}.

use crate::complex::{ComplexError, Simplex, SimplicialComplex};
use crate::morse::deformation::{DeformationCertificate, DeformationStep, StepKind, VerifyError};
use crate::morse::matching::MatchingError;

#[derive(Debug, thiserror::Error)]
pub enum SubdivideError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("complex is empty")]
    Empty,
}

/// A formal deformation from `k` to its stellar subdivision at `sigma`.
pub fn stellar_deformation(
    k: &SimplicialComplex,
    sigma: &Simplex,
) -> Result<DeformationCertificate, SubdivideError> {
    let (steps, end) = stellar_steps(k, sigma)?;
    Ok(DeformationCertificate { start: k.clone(), steps, end })
}

/// Both phases of a stellar deformation at σ, scheduled dimension-descending
/// with lexicographic tie-break (the forced free-pair order for a cone).
fn stellar_steps(
    k: &SimplicialComplex,
    sigma: &Simplex,
) -> Result<(Vec<DeformationStep>, SimplicialComplex), SubdivideError> {
    if !k.contains(sigma) {
        return Err(SubdivideError::Complex(ComplexError::NotInComplex(sigma.to_string())));
    }
    let apex = sigma.as_label();
    if k.contains(&Simplex::vertex(apex.clone())) {
        return Err(SubdivideError::Complex(ComplexError::LabelCollision(apex.to_string())));
    }
    let star = k.star(sigma)?;

    // Phase 1: attach the cone apex ∗ st σ. As a collapse back onto K the
    // apex cells pair through the toggle vertex s = min σ; reversed, the apex
    // enters first.
    let s = sigma.vertices()[0].clone();
    let apex_cell = Simplex::vertex(apex.clone());
    let mut cone_pairs: Vec<(Simplex, Simplex)> = vec![(apex_cell.clone(), apex_cell.with_vertex(&s))];
    for tau in star.simplices() {
        if !tau.contains(&s) {
            let lower = tau.with_vertex(&apex);
            let upper = lower.with_vertex(&s);
            cone_pairs.push((lower, upper));
        }
    }
    sort_schedule(&mut cone_pairs);
    let expansions = cone_pairs.iter().rev().map(|(lo, hi)| DeformationStep {
        kind: StepKind::Expand,
        free: lo.clone(),
        coface: hi.clone(),
    });

    // Phase 2: delete every simplex containing σ, pairing ρ with ρ ∪ {apex}.
    let mut delete_pairs: Vec<(Simplex, Simplex)> = k
        .simplices()
        .filter(|rho| sigma.is_face_of(rho))
        .map(|rho| (rho.clone(), rho.with_vertex(&apex)))
        .collect();
    sort_schedule(&mut delete_pairs);
    let collapses = delete_pairs.iter().map(|(lo, hi)| DeformationStep {
        kind: StepKind::Collapse,
        free: lo.clone(),
        coface: hi.clone(),
    });

    let steps: Vec<DeformationStep> = expansions.chain(collapses).collect();
    let end = k.stellar_subdivision(sigma)?;
    Ok((steps, end))
}

/// Collapse order: coface dimension descending, then lexicographic.
fn sort_schedule(pairs: &mut [(Simplex, Simplex)]) {
    pairs.sort_by(|a, b| b.1.dim().cmp(&a.1.dim()).then_with(|| a.1.cmp(&b.1)));
}

/// A formal deformation from `k` to its barycentric subdivision: stellar
/// deformations over the faces of `k` in reverse linear-extension order
/// (dimension decreasing, lexicographic on ties).
pub fn bd_deformation(k: &SimplicialComplex) -> Result<DeformationCertificate, SubdivideError> {
    if k.is_empty() {
        return Err(SubdivideError::Empty);
    }
    let mut order: Vec<Simplex> = k.simplices().cloned().collect();
    order.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
    let mut steps = Vec::new();
    let mut current = k.clone();
    for sigma in order {
        let (more, end) = stellar_steps(&current, &sigma)?;
        steps.extend(more);
        current = end;
    }
    debug_assert_eq!(current, k.barycentric_subdivision());
    Ok(DeformationCertificate { start: k.clone(), steps, end: current })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::{brute_force_collapse_search, homology, homology_equal};
    use crate::label::Label;
    use crate::morse::deformation::StepKind;

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
    fn stellar_deformation_of_edge() {
        let k = complex(&[&["1", "2"]]);
        let cert = stellar_deformation(&k, &sx(&["1", "2"])).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.start, k);
        assert_eq!(cert.end, k.stellar_subdivision(&sx(&["1", "2"])).unwrap());
        // apex enters first
        let first = &cert.steps[0];
        assert_eq!(first.kind, StepKind::Expand);
        assert_eq!(first.free, Simplex::vertex(sx(&["1", "2"]).as_label()));
        // final phase pairs {1,2} with {1,2,v}
        let last = cert.steps.last().unwrap();
        assert_eq!(last.kind, StepKind::Collapse);
        assert_eq!(last.free, sx(&["1", "2"]));
    }

    #[test]
    fn stellar_deformation_of_triangle_edge() {
        let k = complex(&[&["1", "2", "3"]]);
        let cert = stellar_deformation(&k, &sx(&["1", "2"])).unwrap();
        cert.verify().unwrap();
        let end = k.stellar_subdivision(&sx(&["1", "2"])).unwrap();
        assert_eq!(cert.end, end);
        assert_eq!(end.f_vector(), vec![4, 5, 2]);
    }

    #[test]
    fn stellar_deformation_at_vertex_renames() {
        let k = complex(&[&["1", "2"], &["2", "3"]]);
        let cert = stellar_deformation(&k, &sx(&["2"])).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.end.f_vector(), k.f_vector());
        assert!(cert.end.contains(&Simplex::vertex(sx(&["2"]).as_label())));
        assert!(!cert.end.contains(&sx(&["2"])));
    }

    #[test]
    fn stellar_requires_membership() {
        let k = complex(&[&["1", "2"]]);
        assert!(stellar_deformation(&k, &sx(&["1", "3"])).is_err());
    }

    #[test]
    fn bd_deformation_of_edge() {
        let k = complex(&[&["1", "2"]]);
        let cert = bd_deformation(&k).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.end, k.barycentric_subdivision());
        assert_eq!(cert.end.f_vector(), vec![3, 2]);
    }

    #[test]
    fn bd_deformation_keeps_lone_point() {
        let k = complex(&[&["1", "2"], &["5"]]);
        let cert = bd_deformation(&k).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.end.f_vector(), vec![4, 2]);
        // the point is renamed to its own singleton tuple, nothing else
        assert!(cert.end.contains(&Simplex::vertex(sx(&["5"]).as_label())));
    }

    #[test]
    fn bd_deformation_of_hollow_triangle() {
        let k = complex(&[&["1", "2"], &["1", "3"], &["2", "3"]]);
        let cert = bd_deformation(&k).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.end, k.barycentric_subdivision());
        assert_eq!(cert.end.f_vector(), vec![6, 6]);
        let h1 = homology(&cert.start).unwrap();
        let h2 = homology(&cert.end).unwrap();
        assert!(homology_equal(&h1, &h2));
    }

    #[test]
    fn bd_deformation_of_full_triangle() {
        let k = complex(&[&["1", "2", "3"]]);
        let cert = bd_deformation(&k).unwrap();
        cert.verify().unwrap();
        assert_eq!(cert.end, k.barycentric_subdivision());
        // reverse also verifies
        cert.reverse().verify().unwrap();
    }

    #[test]
    fn direct_schedule_matches_generic_matching_scheduler() {
        use crate::morse::matching::{matching_to_collapses, PartialMatching};
        use std::collections::{BTreeMap, BTreeSet};
        for (k, sigma) in [
            (complex(&[&["1", "2"]]), sx(&["1", "2"])),
            (complex(&[&["1", "2", "3"]]), sx(&["1", "2"])),
            (complex(&[&["1", "2", "3"], &["3", "4"]]), sx(&["3"])),
        ] {
            let direct = stellar_deformation(&k, &sigma).unwrap();
            // rebuild both phases through the generic scheduler
            let apex = sigma.as_label();
            let star = k.star(&sigma).unwrap();
            let mut extended: BTreeSet<Simplex> = k.simplex_set().clone();
            let apex_cell = Simplex::vertex(apex.clone());
            extended.insert(apex_cell.clone());
            for tau in star.simplices() {
                extended.insert(tau.with_vertex(&apex));
            }
            let x_prime = SimplicialComplex::from_closed_family(extended);
            let s = sigma.vertices()[0].clone();
            let mut cone_pairs: BTreeMap<Simplex, Simplex> = BTreeMap::new();
            cone_pairs.insert(apex_cell.clone(), apex_cell.with_vertex(&s));
            for tau in star.simplices() {
                if !tau.contains(&s) {
                    let lower = tau.with_vertex(&apex);
                    cone_pairs.insert(lower.clone(), lower.with_vertex(&s));
                }
            }
            let cone = PartialMatching::new(x_prime.clone(), cone_pairs).unwrap();
            let phase1 = matching_to_collapses(&x_prime, &k, &cone).unwrap().reverse();
            let mut delete_pairs: BTreeMap<Simplex, Simplex> = BTreeMap::new();
            for rho in k.simplices() {
                if sigma.is_face_of(rho) {
                    delete_pairs.insert(rho.clone(), rho.with_vertex(&apex));
                }
            }
            let target = k.stellar_subdivision(&sigma).unwrap();
            let del = PartialMatching::new(x_prime.clone(), delete_pairs).unwrap();
            let phase2 = matching_to_collapses(&x_prime, &target, &del).unwrap();
            let generic = phase1.concat(phase2).unwrap();
            assert_eq!(direct, generic);
        }
    }

    #[test]
    fn stellar_step2_schedule_confirmed_by_search() {
        // the deletion phase of the stellar deformation is an honest collapse:
        // the brute-force search must also find one
        let k = complex(&[&["1", "2"]]);
        let sigma = sx(&["1", "2"]);
        let apex = sigma.as_label();
        let star = k.star(&sigma).unwrap();
        let mut extended = k.simplex_set().clone();
        extended.insert(Simplex::vertex(apex.clone()));
        for tau in star.simplices() {
            extended.insert(tau.with_vertex(&apex));
        }
        let x_prime = SimplicialComplex::from_closed_family(extended);
        let target = k.stellar_subdivision(&sigma).unwrap();
        let found = brute_force_collapse_search(&x_prime, &target, 18).unwrap();
        assert!(found.is_some());
        found.unwrap().verify().unwrap();
    }
}
