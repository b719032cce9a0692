//! Deformation pipelines: named end-to-end constructions producing verified
//! certificates, including the full chain
//!
//! ```text
//! Bd Hom(K₂,G) ↘ Δ(bar Pₐ) ↗ Bd Γ(P),  Γ(P) ↘ Lo(G) ↗ Bd N(G),
//! ```
//!
//! concatenated through explicit vertex bijections at every junction so the
//! whole certificate replays from `Bd Hom(K₂,G)` to `N(G)` over one alphabet.

use std::collections::BTreeMap;

use crate::complex::{ComplexError, Simplex};
use crate::cw::face_poset;
use crate::graphs::{
    gamma_p_description, hom_k2, hom_lattice_from_cells, image_lattice, neighborhood_complex,
    Graph, GraphError,
};
use crate::label::Label;
use crate::lattice::BoundedLattice;
use crate::lattice_complexes::{
    atom_crosscut_complex, bounded_below_complex, crosscut_subposet_proper, Crosscut, CrosscutError,
};
use crate::monotone::{MapKind, MonotoneMap, MonotoneMapError};
use crate::morse::deformation::{DeformationCertificate, VerifyError};
use crate::morse::matching::{matching_to_collapses, MatchingError};
use crate::morse::operators::{
    atom_closure_map_on_gamma_faces, atom_join_interior_map, closure_matching,
    criticals_as_complex, gamma_fixed_face_relabeling, interior_matching, jl_matching,
    neighbor_square_map, restricted_jl_matching_on, OperatorError,
};
use crate::morse::subdivide::{bd_deformation, SubdivideError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("stage `{stage}`: {message}")]
    Stage { stage: &'static str, message: String },
    #[error("junction mismatch entering stage `{stage}`: {detail}")]
    Junction { stage: &'static str, detail: String },
    #[error("internal consistency: {0}")]
    Consistency(String),
}

impl PipelineError {
    fn at(stage: &'static str, err: impl std::fmt::Display) -> Self {
        PipelineError::Stage { stage, message: err.to_string() }
    }
}

macro_rules! stage {
    ($name:literal, $expr:expr) => {
        $expr.map_err(|e| PipelineError::at($name, e))?
    };
}

/// Certificate J(L) ↘ Δ(bar L).
pub fn jl_to_order(lattice: &BoundedLattice) -> Result<DeformationCertificate, PipelineError> {
    let j = bounded_below_complex(lattice);
    if j.is_empty() {
        return Err(PipelineError::at("jl matching", "the proper part is empty"));
    }
    let matching = stage!("jl matching", jl_matching(lattice, &j));
    let target = lattice.proper_part().order_complex();
    let cert = stage!("jl collapse", matching_to_collapses(&j, &target, &matching));
    Ok(cert)
}

/// Certificate Δ(bar L) ↘ Δ(bar Lₐ) through the descending atom-join map.
pub fn order_to_atomic(lattice: &BoundedLattice) -> Result<DeformationCertificate, PipelineError> {
    let bar = lattice.proper_part();
    if bar.is_empty() {
        return Err(PipelineError::at("interior matching", "the proper part is empty"));
    }
    let delta = bar.order_complex();
    let psi = stage!("interior map", atom_join_interior_map(lattice));
    let matching = stage!("interior matching", interior_matching(&delta, &psi));
    let target = criticals_as_complex(&matching);
    let cert = stage!("interior collapse", matching_to_collapses(&delta, &target, &matching));
    Ok(cert)
}

/// Certificate Bd Γ(L) ↘ Δ(bar Lₐ), relabeled so that the fixed faces carry
/// the element names of bar Lₐ (for an atomic lattice the end is Δ(bar L)
/// itself, bit for bit).
pub fn bd_gamma_to_atomic(lattice: &BoundedLattice) -> Result<DeformationCertificate, PipelineError> {
    let gamma = stage!("atom crosscut complex", atom_crosscut_complex(lattice));
    let fp = face_poset(&gamma).as_poset();
    let phi = stage!("closure map", atom_closure_map_on_gamma_faces(lattice, &fp));
    let bd = fp.order_complex();
    let matching = stage!("closure matching", closure_matching(&bd, &phi));
    let criticals = criticals_as_complex(&matching);
    let cert = stage!("closure collapse", matching_to_collapses(&bd, &criticals, &matching));
    let relabel = gamma_fixed_face_relabeling(lattice, &phi);
    let cert = stage!("fixed-face relabeling", cert.relabel(&relabel));
    // The end is Δ(bar Lₐ) in element names.
    let expected = lattice
        .poset()
        .induced(&lattice.atomic_proper_indices())
        .order_complex();
    if cert.end != expected {
        return Err(PipelineError::Junction {
            stage: "bd gamma end",
            detail: "relabeled critical complex is not Δ(bar Lₐ)".into(),
        });
    }
    Ok(cert)
}

/// Certificate Bd N(G) ↘ Lo(G) through the ascending map N² on faces.
pub fn bd_neighborhood_to_lovasz(g: &Graph) -> Result<DeformationCertificate, PipelineError> {
    let n = stage!("neighborhood complex", neighborhood_complex(g));
    let fp = face_poset(&n).as_poset();
    let phi = stage!("neighbor square map", neighbor_square_map(g, &fp));
    let bd = fp.order_complex();
    let matching = stage!("closure matching", closure_matching(&bd, &phi));
    let lo = criticals_as_complex(&matching);
    let cert = stage!("closure collapse", matching_to_collapses(&bd, &lo, &matching));
    // Criticals are exactly the chains of Im N, i.e. the Lovász complex.
    let lovasz = stage!("lovasz complex", crate::graphs::lovasz_complex(g)).complex;
    if cert.end != lovasz {
        return Err(PipelineError::Junction {
            stage: "lovasz end",
            detail: "critical chains differ from the Lovász complex".into(),
        });
    }
    Ok(cert)
}

/// Certificate Δ(bar L) ↘ Δ(bar L_C) for a crosscut C, as the composition of
/// an ascending stage (fixing everything above C, sending x below C to
/// ⋀C_{≥x}) and a descending stage (sending x above C to ⋁C_{≤x}).
pub fn crosscut_two_stage(
    lattice: &BoundedLattice,
    c: &Crosscut,
) -> Result<DeformationCertificate, PipelineError> {
    let bar = lattice.proper_part();
    if bar.is_empty() {
        return Err(PipelineError::at("crosscut stages", "the proper part is empty"));
    }
    let above = crate::lattice_complexes::above_crosscut(lattice, c);
    let up_image = |l: &Label| -> Label {
        let x = lattice.index(l).expect("bar elements are lattice elements");
        if above.contains(&x) {
            l.clone()
        } else {
            let meets = c.members().iter().copied().filter(|&s| lattice.poset().leq(x, s));
            lattice.label(lattice.meet_set(meets)).clone()
        }
    };
    let phi_up = stage!(
        "ascending crosscut map",
        MonotoneMap::from_fn(bar.clone(), MapKind::Ascending, up_image)
    );
    stage!("ascending idempotence", phi_up.verify_idempotent());
    let delta_bar = bar.order_complex();
    let m_up = stage!("ascending matching", closure_matching(&delta_bar, &phi_up));
    let mid = criticals_as_complex(&m_up);
    let cert_a = stage!("ascending collapse", matching_to_collapses(&delta_bar, &mid, &m_up));

    let fixed = phi_up.fixed_points();
    let q_b = bar.induced(&fixed);
    let down_image = |l: &Label| -> Label {
        let x = lattice.index(l).expect("fixed elements are lattice elements");
        if above.contains(&x) {
            let joins = c.members().iter().copied().filter(|&s| lattice.poset().leq(s, x));
            lattice.label(lattice.join_set(joins)).clone()
        } else {
            l.clone()
        }
    };
    let psi_down = stage!(
        "descending crosscut map",
        MonotoneMap::from_fn(q_b.clone(), MapKind::Descending, down_image)
    );
    stage!("descending idempotence", psi_down.verify_idempotent());
    let delta_mid = q_b.order_complex();
    if delta_mid != mid {
        return Err(PipelineError::Junction {
            stage: "crosscut mid",
            detail: "Δ(Fix of ascending stage) differs from the ascending criticals".into(),
        });
    }
    let m_down = stage!("descending matching", interior_matching(&delta_mid, &psi_down));
    let end = criticals_as_complex(&m_down);
    let cert_b = stage!("descending collapse", matching_to_collapses(&delta_mid, &end, &m_down));

    let expected = crosscut_subposet_proper(lattice, c).order_complex();
    if cert_b.end != expected {
        return Err(PipelineError::Junction {
            stage: "crosscut end",
            detail: "two-stage criticals differ from Δ(bar L_C)".into(),
        });
    }
    let cert = stage!("crosscut concat", cert_a.concat(cert_b));
    Ok(cert)
}

/// Step counts of the four collapse/expansion sequences making up the
/// Hom-to-neighborhood deformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomStageSizes {
    /// Bd Hom(K₂,G) ↘ Δ(bar Pₐ)
    pub hom_to_atomic: usize,
    /// Δ(bar Pₐ) ↗ Bd Γ(P)
    pub atomic_to_bd_gamma: usize,
    /// Γ(P) ↘ Lo(G)
    pub gamma_to_lovasz: usize,
    /// Lo(G) ↗ Bd N(G)
    pub lovasz_to_bd_neighborhood: usize,
}

impl HomStageSizes {
    /// True when every one of the four sequences moves at least one pair.
    pub fn nondegenerate(&self) -> bool {
        self.hom_to_atomic > 0
            && self.atomic_to_bd_gamma > 0
            && self.gamma_to_lovasz > 0
            && self.lovasz_to_bd_neighborhood > 0
    }
}

/// The full deformation certificate from `Bd Hom(K₂,G)` to `N(G)`.
pub struct HomPipeline {
    pub certificate: DeformationCertificate,
    pub stage_sizes: HomStageSizes,
}

/// Builds the concatenated formal deformation
/// `Bd Hom(K₂,G) ↘ Δ(bar Pₐ) ↗ Bd Γ(P) ⇝ Γ(P) ↘ Lo(G) ↗ Bd N(G) ⇝ N(G)`.
///
/// Stages run over their native vertex alphabets and are glued through
/// explicit bijections: fixed faces of Γ(P) are renamed to the cells they
/// join to, Γ(P) vertices are wrapped into their singleton face names, and
/// image faces of N(G) are renamed to their Γ(P) pairs. Every junction is
/// checked bit for bit during concatenation.
pub fn hom_to_neighborhood(g: &Graph) -> Result<HomPipeline, PipelineError> {
    // Shared scaffolding.
    let hom = stage!("hom complex", hom_k2(g));
    let p = stage!("hom lattice", hom_lattice_from_cells(&hom));
    let bar_p = p.proper_part();
    let bd_hom = bar_p.order_complex();
    if bd_hom != hom.barycentric_subdivision() {
        return Err(PipelineError::Consistency(
            "Δ(bar P) differs from Bd Hom(K₂,G)".into(),
        ));
    }

    // Stage 1: Bd Hom(K₂,G) ↘ Δ(bar Pₐ).
    let psi1 = stage!("interior map on P", atom_join_interior_map(&p));
    let m1 = stage!("interior matching on Δ(bar P)", interior_matching(&bd_hom, &psi1));
    let delta_bar_pa = criticals_as_complex(&m1);
    let cert1 = stage!(
        "collapse Bd Hom onto Δ(bar Pₐ)",
        matching_to_collapses(&bd_hom, &delta_bar_pa, &m1)
    );

    // Γ(P), checked against the lattice route.
    let gamma = stage!("Γ(P) direct description", gamma_p_description(g));
    let gamma_via_lattice = stage!("Γ(P) via lattice", atom_crosscut_complex(&p));
    if gamma != gamma_via_lattice {
        return Err(PipelineError::Consistency(
            "Γ(P) direct description differs from the atom crosscut complex of P".into(),
        ));
    }

    // Stage 2: Bd Γ(P) ↘ Δ(Fix φ) ≅ Δ(bar Pₐ), reversed into expansions.
    let gamma_fp = face_poset(&gamma).as_poset();
    let phi2 = stage!("closure map on Γ(P) faces", atom_closure_map_on_gamma_faces(&p, &gamma_fp));
    let bd_gamma = gamma_fp.order_complex();
    let m2 = stage!("closure matching on Bd Γ(P)", closure_matching(&bd_gamma, &phi2));
    let fix2 = criticals_as_complex(&m2);
    let cert2 = stage!(
        "collapse Bd Γ(P) onto fixed faces",
        matching_to_collapses(&bd_gamma, &fix2, &m2)
    );
    let r2 = gamma_fixed_face_relabeling(&p, &phi2);
    let cert2 = stage!("relabel fixed faces to cells", cert2.relabel(&r2));

    // Stage 3: Γ(P) ⇝ Bd Γ(P), reversed. Vertices of Γ(P) swap with their
    // singleton face names so the alphabet stays injective.
    let cert3 = stage!("barycentric deformation of Γ(P)", bd_deformation(&gamma));
    let mut r3 = r2.clone();
    for v in gamma.vertices() {
        r3.insert(v.clone(), Label::tuple(vec![v.clone()]));
    }
    let cert3 = stage!("relabel Γ(P) subdivision", cert3.relabel(&r3));

    // Stage 4: Γ(P) ↘ Lo(G) as pairs, through the restricted J(L) matching.
    let l_imn = stage!("image lattice", image_lattice(g));
    let m4 = stage!(
        "restricted jl matching",
        restricted_jl_matching_on(&gamma, &l_imn, g)
    );
    let lo_pairs = criticals_as_complex(&m4);
    let cert4 = stage!(
        "collapse Γ(P) onto Lo(G)",
        matching_to_collapses(&gamma, &lo_pairs, &m4)
    );
    let r4: BTreeMap<Label, Label> = gamma
        .vertices()
        .map(|v| (v.clone(), Label::tuple(vec![v.clone()])))
        .collect();
    let cert4 = stage!("relabel Γ(P) vertices", cert4.relabel(&r4));

    // Stage 5: Bd N(G) ↘ Lo(G), reversed; image faces are renamed to their
    // Γ(P) pairs.
    let n_g = stage!("neighborhood complex", neighborhood_complex(g));
    let n_fp = face_poset(&n_g).as_poset();
    let phi5 = stage!("neighbor square map", neighbor_square_map(g, &n_fp));
    let bd_n = n_fp.order_complex();
    let m5 = stage!("closure matching on Bd N(G)", closure_matching(&bd_n, &phi5));
    let lo_faces = criticals_as_complex(&m5);
    let cert5 = stage!(
        "collapse Bd N(G) onto Lo(G)",
        matching_to_collapses(&bd_n, &lo_faces, &m5)
    );
    let r5 = image_face_to_pair_relabeling(g, &phi5)?;
    let cert5 = stage!("relabel image faces to pairs", cert5.relabel(&r5));

    // Stage 6: N(G) ⇝ Bd N(G), reversed, under the same renaming.
    let cert6 = stage!("barycentric deformation of N(G)", bd_deformation(&n_g));
    let cert6 = stage!("relabel N(G) subdivision", cert6.relabel(&r5));

    let stage_sizes = HomStageSizes {
        hom_to_atomic: cert1.steps.len(),
        atomic_to_bd_gamma: cert2.steps.len(),
        gamma_to_lovasz: cert4.steps.len(),
        lovasz_to_bd_neighborhood: cert5.steps.len(),
    };

    let junction = |stage: &'static str| {
        move |e: VerifyError| PipelineError::Junction { stage, detail: e.to_string() }
    };
    let certificate = cert1
        .concat(cert2.reverse())
        .map_err(junction("Δ(bar Pₐ) ↗ Bd Γ(P)"))?
        .concat(cert3.reverse())
        .map_err(junction("Bd Γ(P) ⇝ Γ(P)"))?
        .concat(cert4)
        .map_err(junction("Γ(P) ↘ Lo(G)"))?
        .concat(cert5.reverse())
        .map_err(junction("Lo(G) ↗ Bd N(G)"))?
        .concat(cert6.reverse())
        .map_err(junction("Bd N(G) ⇝ N(G)"))?;

    if certificate.end != n_g {
        return Err(PipelineError::Consistency(
            "pipeline did not terminate at N(G)".into(),
        ));
    }
    Ok(HomPipeline { certificate, stage_sizes })
}

/// The junction bijection for stages 5–6: each fixed face A of N² (an image
/// face) is renamed to the singleton tuple of its Γ(P) pair (A, N(A)).
fn image_face_to_pair_relabeling(
    g: &Graph,
    phi5: &MonotoneMap,
) -> Result<BTreeMap<Label, Label>, PipelineError> {
    let mut map = BTreeMap::new();
    for i in phi5.fixed_points() {
        let face_label = phi5.domain().label(i);
        let Label::Tuple(vertices) = face_label else {
            return Err(PipelineError::Consistency(format!(
                "face poset element {face_label} is not a vertex tuple"
            )));
        };
        let mask = g
            .mask_of(vertices)
            .ok_or_else(|| PipelineError::Consistency(format!("unknown vertices in {face_label}")))?;
        let nb = g.common_neighbors_mask(mask);
        let pair_label = Label::tuple(vec![
            face_label.clone(),
            Simplex::new(g.unmask(nb))
                .map_err(|e| PipelineError::Consistency(e.to_string()))?
                .as_label(),
        ]);
        map.insert(face_label.clone(), Label::tuple(vec![pair_label]));
    }
    Ok(map)
}

/// Errors from pipeline entry points that parse or build inputs.
#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Crosscut(#[from] CrosscutError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Subdivide(#[from] SubdivideError),
    #[error(transparent)]
    Monotone(#[from] MonotoneMapError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}
