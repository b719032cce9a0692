//! Formal deformation certificates: ordered sequences of elementary collapses
//! and expansions, replayed and checked step by step.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::complex::{ComplexError, Simplex, SimplicialComplex};
use crate::label::Label;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepKind {
    Collapse,
    Expand,
}

/// One elementary move: remove (collapse) or add (expand) a free pair
/// `(free, coface)` where `coface` covers `free`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationStep {
    pub kind: StepKind,
    pub free: Simplex,
    pub coface: Simplex,
}

/// A formal deformation: replaying `steps` from `start` must reproduce `end`
/// exactly, every collapse removing a genuine free pair and every expansion
/// adding one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationCertificate {
    pub start: SimplicialComplex,
    pub steps: Vec<DeformationStep>,
    pub end: SimplicialComplex,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("step {index}: coface {coface} does not cover free face {free}")]
    NotACover { index: usize, free: String, coface: String },
    #[error("step {index}: collapse of absent cell {cell}")]
    CollapseAbsent { index: usize, cell: String },
    #[error("step {index}: free face {free} has {count} present cofaces {witnesses}, not exactly one")]
    NotFree { index: usize, free: String, count: usize, witnesses: String },
    #[error("step {index}: the unique coface of {free} is {actual}, not {coface}")]
    WrongCoface { index: usize, free: String, coface: String, actual: String },
    #[error("step {index}: coface {coface} is not maximal; present coface: {witness}")]
    CofaceNotMaximal { index: usize, coface: String, witness: String },
    #[error("step {index}: expansion target {cell} is already present")]
    ExpandPresent { index: usize, cell: String },
    #[error("step {index}: expansion of {cell} would break closure; missing face {missing}")]
    ExpandNotClosed { index: usize, cell: String, missing: String },
    #[error("end complex mismatch: {extra} unexpected and {missing} missing simplices")]
    EndMismatch { extra: usize, missing: usize },
    #[error("start complex is not closed: {0}")]
    BadStart(String),
    #[error("certificate io: {0}")]
    Io(String),
}

/// Outcome counts from a successful verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifySummary {
    pub collapses: usize,
    pub expansions: usize,
}

impl DeformationCertificate {
    /// The identity deformation.
    pub fn trivial(k: SimplicialComplex) -> Self {
        DeformationCertificate { start: k.clone(), steps: Vec::new(), end: k }
    }

    pub fn collapse_count(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == StepKind::Collapse).count()
    }

    pub fn expansion_count(&self) -> usize {
        self.steps.iter().filter(|s| s.kind == StepKind::Expand).count()
    }

    /// The reverse deformation: steps in reverse order with kinds flipped.
    pub fn reverse(&self) -> DeformationCertificate {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| DeformationStep {
                kind: match s.kind {
                    StepKind::Collapse => StepKind::Expand,
                    StepKind::Expand => StepKind::Collapse,
                },
                free: s.free.clone(),
                coface: s.coface.clone(),
            })
            .collect();
        DeformationCertificate { start: self.end.clone(), steps, end: self.start.clone() }
    }

    /// Concatenation; the junction complexes must agree bit for bit.
    pub fn concat(self, next: DeformationCertificate) -> Result<DeformationCertificate, VerifyError> {
        if self.end != next.start {
            let extra = self
                .end
                .simplices()
                .filter(|s| !next.start.contains(s))
                .count();
            let missing = next
                .start
                .simplices()
                .filter(|s| !self.end.contains(s))
                .count();
            return Err(VerifyError::EndMismatch { extra, missing });
        }
        let mut steps = self.steps;
        steps.extend(next.steps);
        Ok(DeformationCertificate { start: self.start, steps, end: next.end })
    }

    /// Applies a vertex relabeling to the start, the end, and every step.
    /// Labels not in the map are kept; the induced map on the certificate's
    /// whole vertex alphabet must be injective.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<DeformationCertificate, ComplexError> {
        let mut alphabet: std::collections::BTreeSet<Label> = self.start.vertices().cloned().collect();
        for s in &self.steps {
            alphabet.extend(s.free.vertices().iter().cloned());
            alphabet.extend(s.coface.vertices().iter().cloned());
        }
        alphabet.extend(self.end.vertices().cloned());
        let apply = |l: &Label| map.get(l).cloned().unwrap_or_else(|| l.clone());
        let images: std::collections::BTreeSet<Label> = alphabet.iter().map(&apply).collect();
        if images.len() != alphabet.len() {
            return Err(ComplexError::LabelCollision(
                "certificate relabeling is not injective".into(),
            ));
        }
        let relabel_simplex = |s: &Simplex| -> Result<Simplex, ComplexError> {
            Simplex::new(s.vertices().iter().map(&apply).collect::<Vec<_>>())
        };
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(DeformationStep {
                    kind: s.kind,
                    free: relabel_simplex(&s.free)?,
                    coface: relabel_simplex(&s.coface)?,
                })
            })
            .collect::<Result<Vec<_>, ComplexError>>()?;
        Ok(DeformationCertificate {
            start: self.start.relabel(map)?,
            steps,
            end: self.end.relabel(map)?,
        })
    }

    /// Replays the certificate, checking each move, and compares the final
    /// complex with `end` bit for bit.
    pub fn verify(&self) -> Result<VerifySummary, VerifyError> {
        // Universe: all cells ever present = start ∪ expansion targets.
        let mut universe: Vec<Simplex> = self.start.simplices().cloned().collect();
        for s in &self.steps {
            if s.kind == StepKind::Expand {
                universe.push(s.free.clone());
                universe.push(s.coface.clone());
            }
        }
        universe.sort();
        universe.dedup();
        let index: BTreeMap<&Simplex, usize> =
            universe.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let n = universe.len();
        // cover-coface adjacency within the universe
        let mut cofaces: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, s) in universe.iter().enumerate() {
            for f in s.facets() {
                if let Some(&fi) = index.get(&f) {
                    cofaces[fi].push(i as u32);
                }
            }
        }
        let mut present = vec![false; n];
        let mut present_cofaces = vec![0u32; n];
        for s in self.start.simplices() {
            present[index[s]] = true;
        }
        for (i, p) in present.iter().enumerate() {
            if *p {
                for f in universe[i].facets() {
                    match index.get(&f) {
                        Some(&fi) if present[fi] => present_cofaces[fi] += 1,
                        _ => return Err(VerifyError::BadStart(f.to_string())),
                    }
                }
            }
        }
        let chi0 = self.start.euler_characteristic();
        let mut chi = chi0;

        for (idx, step) in self.steps.iter().enumerate() {
            if step.coface.dim() != step.free.dim() + 1 || !step.free.is_face_of(&step.coface) {
                return Err(VerifyError::NotACover {
                    index: idx,
                    free: step.free.to_string(),
                    coface: step.coface.to_string(),
                });
            }
            let fi = index[&step.free];
            let ci = index[&step.coface];
            match step.kind {
                StepKind::Collapse => {
                    if !present[fi] {
                        return Err(VerifyError::CollapseAbsent { index: idx, cell: step.free.to_string() });
                    }
                    if !present[ci] {
                        return Err(VerifyError::CollapseAbsent { index: idx, cell: step.coface.to_string() });
                    }
                    if present_cofaces[fi] != 1 {
                        let witnesses: Vec<String> = cofaces[fi]
                            .iter()
                            .filter(|&&c| present[c as usize])
                            .map(|&c| universe[c as usize].to_string())
                            .collect();
                        return Err(VerifyError::NotFree {
                            index: idx,
                            free: step.free.to_string(),
                            count: present_cofaces[fi] as usize,
                            witnesses: format!("[{}]", witnesses.join(", ")),
                        });
                    }
                    // the single present coface must be `coface` itself
                    let actual = cofaces[fi]
                        .iter()
                        .copied()
                        .find(|&c| present[c as usize])
                        .expect("count said one coface is present");
                    if actual as usize != ci {
                        return Err(VerifyError::WrongCoface {
                            index: idx,
                            free: step.free.to_string(),
                            coface: step.coface.to_string(),
                            actual: universe[actual as usize].to_string(),
                        });
                    }
                    if present_cofaces[ci] != 0 {
                        let witness = cofaces[ci]
                            .iter()
                            .copied()
                            .find(|&c| present[c as usize])
                            .map(|c| universe[c as usize].to_string())
                            .unwrap_or_default();
                        return Err(VerifyError::CofaceNotMaximal {
                            index: idx,
                            coface: step.coface.to_string(),
                            witness,
                        });
                    }
                    present[fi] = false;
                    present[ci] = false;
                    for f in universe[ci].facets() {
                        let k = index[&f];
                        present_cofaces[k] -= 1;
                    }
                    for f in universe[fi].facets() {
                        let k = index[&f];
                        present_cofaces[k] -= 1;
                    }
                    let d = step.free.dim() as i64;
                    chi -= if d % 2 == 0 { 1 } else { -1 };
                    chi -= if (d + 1) % 2 == 0 { 1 } else { -1 };
                }
                StepKind::Expand => {
                    if present[fi] {
                        return Err(VerifyError::ExpandPresent { index: idx, cell: step.free.to_string() });
                    }
                    if present[ci] {
                        return Err(VerifyError::ExpandPresent { index: idx, cell: step.coface.to_string() });
                    }
                    // closure: all faces of `free` present, all faces of
                    // `coface` except `free` present
                    for f in step.free.facets() {
                        let k = index.get(&f).copied();
                        if k.map_or(true, |k| !present[k]) {
                            return Err(VerifyError::ExpandNotClosed {
                                index: idx,
                                cell: step.free.to_string(),
                                missing: f.to_string(),
                            });
                        }
                    }
                    for f in step.coface.facets() {
                        if f == step.free {
                            continue;
                        }
                        let k = index.get(&f).copied();
                        if k.map_or(true, |k| !present[k]) {
                            return Err(VerifyError::ExpandNotClosed {
                                index: idx,
                                cell: step.coface.to_string(),
                                missing: f.to_string(),
                            });
                        }
                    }
                    present[fi] = true;
                    present[ci] = true;
                    for f in universe[fi].facets() {
                        present_cofaces[index[&f]] += 1;
                    }
                    for f in universe[ci].facets() {
                        present_cofaces[index[&f]] += 1;
                    }
                    // the free face must have acquired exactly its one coface
                    if present_cofaces[fi] != 1 {
                        let witnesses: Vec<String> = cofaces[fi]
                            .iter()
                            .filter(|&&c| present[c as usize])
                            .map(|&c| universe[c as usize].to_string())
                            .collect();
                        return Err(VerifyError::NotFree {
                            index: idx,
                            free: step.free.to_string(),
                            count: present_cofaces[fi] as usize,
                            witnesses: format!("[{}]", witnesses.join(", ")),
                        });
                    }
                    let d = step.free.dim() as i64;
                    chi += if d % 2 == 0 { 1 } else { -1 };
                    chi += if (d + 1) % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        debug_assert_eq!(chi, chi0, "paired moves keep χ fixed");

        let mut extra = 0usize;
        let mut missing = 0usize;
        for (i, p) in present.iter().enumerate() {
            let in_end = self.end.contains(&universe[i]);
            if *p && !in_end {
                extra += 1;
            }
            if !*p && in_end {
                missing += 1;
            }
        }
        missing += self
            .end
            .simplices()
            .filter(|s| !index.contains_key(*s))
            .count();
        if extra > 0 || missing > 0 {
            return Err(VerifyError::EndMismatch { extra, missing });
        }
        Ok(VerifySummary {
            collapses: self.collapse_count(),
            expansions: self.expansion_count(),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct HeaderRecord {
    start_facets: Vec<Vec<Label>>,
    end_facets: Vec<Vec<Label>>,
}

#[derive(Serialize, Deserialize)]
struct StepRecord {
    op: StepKind,
    free: Vec<Label>,
    coface: Vec<Label>,
}

impl DeformationCertificate {
    /// Writes the JSON-lines form: a header record with start and end facets,
    /// then one record per step.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<(), VerifyError> {
        let io_err = |e: std::io::Error| VerifyError::Io(e.to_string());
        let ser_err = |e: serde_json::Error| VerifyError::Io(e.to_string());
        let header = HeaderRecord {
            start_facets: self.start.to_json().facets,
            end_facets: self.end.to_json().facets,
        };
        writeln!(w, "{}", serde_json::to_string(&header).map_err(ser_err)?).map_err(io_err)?;
        for s in &self.steps {
            let rec = StepRecord {
                op: s.kind,
                free: s.free.vertices().to_vec(),
                coface: s.coface.vertices().to_vec(),
            };
            writeln!(w, "{}", serde_json::to_string(&rec).map_err(ser_err)?).map_err(io_err)?;
        }
        Ok(())
    }

    pub fn to_jsonl_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("json is utf8")
    }

    pub fn read_jsonl<R: BufRead>(r: R) -> Result<DeformationCertificate, VerifyError> {
        let io_err = |e: std::io::Error| VerifyError::Io(e.to_string());
        let mut lines = r.lines();
        let header_line = lines
            .next()
            .ok_or_else(|| VerifyError::Io("empty certificate file".into()))?
            .map_err(io_err)?;
        let header: HeaderRecord = serde_json::from_str(&header_line)
            .map_err(|e| VerifyError::Io(format!("bad header: {e}")))?;
        let build = |facets: Vec<Vec<Label>>| {
            SimplicialComplex::from_facets(facets)
                .map_err(|e| VerifyError::Io(format!("bad facets: {e}")))
        };
        let start = build(header.start_facets)?;
        let end = build(header.end_facets)?;
        let mut steps = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io_err)?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: StepRecord = serde_json::from_str(&line)
                .map_err(|e| VerifyError::Io(format!("bad step record {i}: {e}")))?;
            let make = |v: Vec<Label>| {
                Simplex::new(v).map_err(|e| VerifyError::Io(format!("bad simplex in step {i}: {e}")))
            };
            steps.push(DeformationStep { kind: rec.op, free: make(rec.free)?, coface: make(rec.coface)? });
        }
        Ok(DeformationCertificate { start, steps, end })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(s: &str) -> Label {
        Label::atom(s)
    }

    fn complex(facets: &[&[&str]]) -> SimplicialComplex {
        SimplicialComplex::from_facets(
            facets
                .iter()
                .map(|f| f.iter().map(|v| lab(v)).collect::<Vec<_>>()),
        )
        .unwrap()
    }

    fn sx(vs: &[&str]) -> Simplex {
        Simplex::new(vs.iter().map(|v| lab(v)).collect::<Vec<_>>()).unwrap()
    }

    fn triangle_to_edge() -> DeformationCertificate {
        // collapse {1,2,3} via free edge {1,2}, then vertex {1} via {1,3}
        DeformationCertificate {
            start: complex(&[&["1", "2", "3"]]),
            steps: vec![
                DeformationStep { kind: StepKind::Collapse, free: sx(&["1", "2"]), coface: sx(&["1", "2", "3"]) },
                DeformationStep { kind: StepKind::Collapse, free: sx(&["1"]), coface: sx(&["1", "3"]) },
            ],
            end: complex(&[&["2", "3"]]),
        }
    }

    #[test]
    fn verify_collapse_sequence() {
        let cert = triangle_to_edge();
        let summary = cert.verify().unwrap();
        assert_eq!(summary.collapses, 2);
        assert_eq!(summary.expansions, 0);
    }

    #[test]
    fn reverse_is_accepted() {
        let cert = triangle_to_edge();
        let rev = cert.reverse();
        let summary = rev.verify().unwrap();
        assert_eq!(summary.expansions, 2);
        // reversing twice is the identity
        assert_eq!(rev.reverse(), cert);
    }

    #[test]
    fn swapped_steps_rejected_with_index() {
        let mut cert = triangle_to_edge();
        cert.steps.swap(0, 1);
        let err = cert.verify().unwrap_err();
        match err {
            VerifyError::NotFree { index, .. } => assert_eq!(index, 0),
            other => panic!("expected NotFree at step 0, got {other}"),
        }
    }

    #[test]
    fn truncated_certificate_rejected() {
        let mut cert = triangle_to_edge();
        cert.steps.pop();
        let err = cert.verify().unwrap_err();
        assert!(matches!(err, VerifyError::EndMismatch { .. }));
    }

    #[test]
    fn non_cover_rejected() {
        let cert = DeformationCertificate {
            start: complex(&[&["1", "2", "3"]]),
            steps: vec![DeformationStep {
                kind: StepKind::Collapse,
                free: sx(&["1"]),
                coface: sx(&["1", "2", "3"]),
            }],
            end: complex(&[&["1", "2", "3"]]),
        };
        assert!(matches!(cert.verify(), Err(VerifyError::NotACover { index: 0, .. })));
    }

    #[test]
    fn expansion_with_new_vertex() {
        // two points, expand to an edge-path through a fresh vertex
        let cert = DeformationCertificate {
            start: complex(&[&["1"], &["2"]]),
            steps: vec![
                DeformationStep { kind: StepKind::Expand, free: sx(&["v"]), coface: sx(&["1", "v"]) },
                DeformationStep { kind: StepKind::Expand, free: sx(&["2", "v"]), coface: sx(&["1", "2", "v"]) },
            ],
            end: SimplicialComplex::from_facets(vec![
                vec![lab("1"), lab("v")],
                vec![lab("1"), lab("2"), lab("v")],
            ])
            .unwrap(),
        };
        // second expansion needs {1,2} and {2,v}... {1,2} missing, so it fails
        assert!(matches!(cert.verify(), Err(VerifyError::ExpandNotClosed { index: 1, .. })));

        let good = DeformationCertificate {
            start: complex(&[&["1"], &["2"]]),
            steps: vec![DeformationStep {
                kind: StepKind::Expand,
                free: sx(&["v"]),
                coface: sx(&["1", "v"]),
            }],
            end: complex(&[&["1", "v"], &["2"]]),
        };
        good.verify().unwrap();
    }

    #[test]
    fn concat_requires_matching_junction() {
        let a = triangle_to_edge();
        let b = DeformationCertificate::trivial(complex(&[&["1"]]));
        assert!(a.clone().concat(b).is_err());
        let c = DeformationCertificate::trivial(complex(&[&["2", "3"]]));
        let joined = a.concat(c).unwrap();
        joined.verify().unwrap();
    }

    #[test]
    fn jsonl_round_trip() {
        let cert = triangle_to_edge();
        let text = cert.to_jsonl_string();
        let back = DeformationCertificate::read_jsonl(text.as_bytes()).unwrap();
        assert_eq!(back, cert);
        back.verify().unwrap();
    }

    #[test]
    fn relabel_applies_to_everything() {
        let cert = triangle_to_edge();
        let mut map = BTreeMap::new();
        map.insert(lab("1"), lab("a"));
        let relabeled = cert.relabel(&map).unwrap();
        relabeled.verify().unwrap();
        assert!(relabeled.start.contains(&sx(&["a", "2"])));

        // non-injective on the alphabet: 1 -> 2
        let mut bad = BTreeMap::new();
        bad.insert(lab("1"), lab("2"));
        assert!(cert.relabel(&bad).is_err());
    }
}
