//! Finite abstract simplicial complexes.
//!
//! A complex is stored as the explicit downward-closed family of all its
//! nonempty simplices, in canonical sorted order. Matchings and deformation
//! certificates address individual faces constantly, so the closed family is
//! the working representation, not a facets-only compression.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::label::Label;

/// A nonempty simplex: a strictly sorted set of vertex labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Arc<[Label]>);

impl Simplex {
    /// Builds a simplex from vertices, sorting them. Duplicates are an error.
    pub fn new(vertices: impl Into<Vec<Label>>) -> Result<Self, ComplexError> {
        let mut v: Vec<Label> = vertices.into();
        if v.is_empty() {
            return Err(ComplexError::EmptySimplex);
        }
        v.sort();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(ComplexError::DuplicateVertex(format!("{:?}", v)));
        }
        Ok(Simplex(Arc::from(v)))
    }

    /// Single-vertex simplex.
    pub fn vertex(v: Label) -> Self {
        Simplex(Arc::from(vec![v]))
    }

    pub(crate) fn from_sorted_unchecked(v: Vec<Label>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(Arc::from(v))
    }

    pub fn vertices(&self) -> &[Label] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: &Label) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        self.0.iter().all(|v| other.contains(v))
    }

    /// All codimension-one faces (empty for a vertex).
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() == 1 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|skip| {
                let v: Vec<Label> = self
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, l)| l.clone())
                    .collect();
                Simplex::from_sorted_unchecked(v)
            })
            .collect()
    }

    /// All nonempty subsets, including `self`.
    pub fn subsets(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n <= 24, "simplex too large for subset enumeration");
        let mut out = Vec::with_capacity((1usize << n) - 1);
        for mask in 1u32..(1u32 << n) {
            let v: Vec<Label> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.0[i].clone())
                .collect();
            out.push(Simplex::from_sorted_unchecked(v));
        }
        out
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<Label> = self.0.iter().chain(other.0.iter()).cloned().collect();
        v.sort();
        v.dedup();
        Simplex(Arc::from(v))
    }

    /// Adds one vertex; the vertex must not already be present.
    pub fn with_vertex(&self, v: &Label) -> Simplex {
        debug_assert!(!self.contains(v));
        let mut out: Vec<Label> = self.0.to_vec();
        let pos = out.binary_search(v).unwrap_err();
        out.insert(pos, v.clone());
        Simplex(Arc::from(out))
    }

    /// Removes one vertex; `None` if that would empty the simplex.
    pub fn without_vertex(&self, v: &Label) -> Option<Simplex> {
        if self.0.len() == 1 {
            return None;
        }
        let pos = self.0.binary_search(v).ok()?;
        let mut out: Vec<Label> = self.0.to_vec();
        out.remove(pos);
        Some(Simplex(Arc::from(out)))
    }

    pub fn intersect(&self, other: &Simplex) -> Vec<Label> {
        self.0.iter().filter(|v| other.contains(v)).cloned().collect()
    }

    pub fn is_disjoint_from(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| !other.contains(v))
    }

    /// The canonical tuple label naming this simplex as a single vertex of a
    /// derived complex (face poset element, barycenter apex).
    pub fn as_label(&self) -> Label {
        Label::tuple(self.0.to_vec())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ComplexError {
    #[error("empty facet or simplex")]
    EmptySimplex,
    #[error("duplicate vertex in simplex {0}")]
    DuplicateVertex(String),
    #[error("simplex {0} is not in the complex")]
    NotInComplex(String),
    #[error("family is not closed under faces: missing {0}")]
    NotClosed(String),
    #[error("empty complex not allowed here: {0}")]
    EmptyComplex(String),
    #[error("vertex label collision: {0} already names a vertex")]
    LabelCollision(String),
}

/// A finite abstract simplicial complex: the explicit set of all nonempty
/// simplices, closed under taking faces. May be empty.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex::default()
    }

    /// Smallest complex containing all given facets.
    pub fn from_facets<I, V>(facets: I) -> Result<Self, ComplexError>
    where
        I: IntoIterator<Item = V>,
        V: Into<Vec<Label>>,
    {
        let mut simplices = BTreeSet::new();
        for f in facets {
            let s = Simplex::new(f)?;
            for sub in s.subsets() {
                simplices.insert(sub);
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    /// Builds from an explicit family of simplices, verifying closure.
    pub fn from_simplices<I: IntoIterator<Item = Simplex>>(simplices: I) -> Result<Self, ComplexError> {
        let set: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &set {
            for f in s.facets() {
                if !set.contains(&f) {
                    return Err(ComplexError::NotClosed(f.to_string()));
                }
            }
        }
        Ok(SimplicialComplex { simplices: set })
    }

    /// Internal: the caller promises the family is closed.
    pub(crate) fn from_closed_family(simplices: BTreeSet<Simplex>) -> Self {
        #[cfg(debug_assertions)]
        {
            for s in &simplices {
                for f in s.facets() {
                    debug_assert!(simplices.contains(&f), "family not closed at {f}");
                }
            }
        }
        SimplicialComplex { simplices }
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn simplex_set(&self) -> &BTreeSet<Simplex> {
        &self.simplices
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Label> {
        self.simplices
            .iter()
            .filter(|s| s.dim() == 0)
            .map(|s| &s.vertices()[0])
    }

    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.dim()).max()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut non_maximal = BTreeSet::new();
        for s in &self.simplices {
            for f in s.facets() {
                non_maximal.insert(f);
            }
        }
        self.simplices
            .iter()
            .filter(|s| !non_maximal.contains(*s))
            .cloned()
            .collect()
    }

    /// Map from each simplex to its cover cofaces (dimension exactly one up).
    pub fn coface_map(&self) -> BTreeMap<&Simplex, Vec<&Simplex>> {
        let mut map: BTreeMap<&Simplex, Vec<&Simplex>> =
            self.simplices.iter().map(|s| (s, Vec::new())).collect();
        for s in &self.simplices {
            for f in s.facets() {
                if let Some((key, _)) = map.get_key_value(&f) {
                    let key = *key;
                    map.get_mut(key).unwrap().push(s);
                }
            }
        }
        map
    }

    /// f-vector: fᵢ = number of i-simplices, starting at dimension 0.
    pub fn f_vector(&self) -> Vec<usize> {
        let Some(d) = self.dim() else { return Vec::new() };
        let mut f = vec![0usize; d + 1];
        for s in &self.simplices {
            f[s.dim()] += 1;
        }
        f
    }

    /// Unreduced Euler characteristic Σ(−1)ⁱ fᵢ.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }

    /// Link of σ: all τ disjoint from σ with τ∪σ in the complex.
    pub fn link(&self, sigma: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotInComplex(sigma.to_string()));
        }
        let set: BTreeSet<Simplex> = self
            .simplices
            .iter()
            .filter(|t| t.is_disjoint_from(sigma) && self.contains(&t.union(sigma)))
            .cloned()
            .collect();
        Ok(SimplicialComplex { simplices: set })
    }

    /// Closed star of σ: the closure of all cofaces of σ.
    pub fn star(&self, sigma: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotInComplex(sigma.to_string()));
        }
        let mut set = BTreeSet::new();
        for t in &self.simplices {
            if sigma.is_face_of(t) {
                for sub in t.subsets() {
                    set.insert(sub);
                }
            }
        }
        Ok(SimplicialComplex { simplices: set })
    }

    /// Stellar subdivision at σ: σ and its cofaces are replaced by the cone
    /// from a fresh apex over ∂σ ∗ lk(σ). The apex is canonically labeled by
    /// σ's vertex tuple; the complex must not already use that label.
    pub fn stellar_subdivision(&self, sigma: &Simplex) -> Result<SimplicialComplex, ComplexError> {
        if !self.contains(sigma) {
            return Err(ComplexError::NotInComplex(sigma.to_string()));
        }
        let apex = sigma.as_label();
        if self.contains(&Simplex::vertex(apex.clone())) {
            return Err(ComplexError::LabelCollision(apex.to_string()));
        }
        let mut set: BTreeSet<Simplex> = self
            .simplices
            .iter()
            .filter(|t| !sigma.is_face_of(t))
            .cloned()
            .collect();
        // apex ∗ (∂σ ∗ lk σ): faces of star(σ) not containing σ, coned.
        set.insert(Simplex::vertex(apex.clone()));
        let star = self.star(sigma)?;
        for t in star.simplices() {
            if !sigma.is_face_of(t) {
                set.insert(t.with_vertex(&apex));
            }
        }
        Ok(SimplicialComplex { simplices: set })
    }

    /// Barycentric subdivision: vertices are the faces of `self` (tuple
    /// labels), simplices are the chains of faces under inclusion.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let faces: Vec<&Simplex> = self.simplices.iter().collect();
        let mut set = BTreeSet::new();
        // Chains enumerated by ascending inclusion from each face.
        let mut stack: Vec<(usize, Vec<Label>)> = (0..faces.len())
            .map(|i| (i, vec![faces[i].as_label()]))
            .collect();
        while let Some((top, chain)) = stack.pop() {
            set.insert(Simplex::new(chain.clone()).expect("chain labels are distinct"));
            for (j, cand) in faces.iter().enumerate() {
                if cand.dim() > faces[top].dim() && faces[top].is_face_of(cand) && *cand != faces[top] {
                    let mut next = chain.clone();
                    next.push(cand.as_label());
                    stack.push((j, next));
                }
            }
        }
        SimplicialComplex { simplices: set }
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    /// Relabels every vertex through `map`; labels absent from the map are
    /// kept. Fails if the induced map on the complex's vertices is not
    /// injective.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<SimplicialComplex, ComplexError> {
        let apply = |l: &Label| map.get(l).cloned().unwrap_or_else(|| l.clone());
        let verts: BTreeSet<Label> = self.vertices().cloned().collect();
        let images: BTreeSet<Label> = verts.iter().map(&apply).collect();
        if images.len() != verts.len() {
            return Err(ComplexError::LabelCollision(
                "relabeling is not injective on vertices".into(),
            ));
        }
        let set = self
            .simplices
            .iter()
            .map(|s| Simplex::new(s.vertices().iter().map(&apply).collect::<Vec<_>>()))
            .collect::<Result<BTreeSet<_>, _>>()?;
        Ok(SimplicialComplex { simplices: set })
    }

    /// A vertex contained in every facet, if one exists (so the complex is a
    /// cone with that apex).
    pub fn cone_apex(&self) -> Option<Label> {
        let facets = self.facets();
        let first = facets.first()?;
        first
            .vertices()
            .iter()
            .find(|v| facets.iter().all(|f| f.contains(v)))
            .cloned()
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex[")?;
        for (i, s) in self.simplices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// Canonical JSON form `{"facets": [[...], ...]}`.
#[derive(Serialize, Deserialize)]
pub struct ComplexJson {
    pub facets: Vec<Vec<Label>>,
}

impl SimplicialComplex {
    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            facets: self.facets().iter().map(|f| f.vertices().to_vec()).collect(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self, ComplexError> {
        SimplicialComplex::from_facets(json.facets.iter().cloned())
    }

    /// Text form: one facet per line, labels whitespace-separated (tuples
    /// parenthesized).
    pub fn parse_text(text: &str) -> Result<Self, ComplexError> {
        let mut facets: Vec<Vec<Label>> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let labels = parse_label_row(line)
                .map_err(|e| ComplexError::NotClosed(format!("bad facet line `{line}`: {e}")))?;
            facets.push(labels);
        }
        SimplicialComplex::from_facets(facets)
    }
}

/// Splits a line into labels, respecting parenthesized tuples.
pub fn parse_label_row(line: &str) -> Result<Vec<Label>, crate::label::LabelParseError> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in line.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(cur.parse::<Label>()?);
                    cur.clear();
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur.parse::<Label>()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

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
    fn from_facets_path() {
        let k = complex(&[&["1", "2"], &["2", "3"]]);
        assert_eq!(k.f_vector(), vec![3, 2]);
    }

    #[test]
    fn from_facets_full_triangle() {
        let k = complex(&[&["1", "2", "3"]]);
        assert_eq!(k.f_vector(), vec![3, 3, 1]);
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn from_facets_hollow_triangle() {
        let k = complex(&[&["1", "2"], &["1", "3"], &["2", "3"]]);
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert_eq!(k.euler_characteristic(), 0);
    }

    #[test]
    fn from_facets_rejects_empty_facet() {
        let r = SimplicialComplex::from_facets(vec![Vec::<Label>::new()]);
        assert!(r.is_err());
    }

    #[test]
    fn barycentric_edge_is_path() {
        let k = complex(&[&["1", "2"]]);
        let bd = k.barycentric_subdivision();
        assert_eq!(bd.f_vector(), vec![3, 2]);
        let apex = Label::tuple(vec![lab("1"), lab("2")]);
        assert!(bd.contains(&Simplex::vertex(apex)));
    }

    #[test]
    fn barycentric_hollow_triangle_is_hexagon() {
        let k = complex(&[&["1", "2"], &["1", "3"], &["2", "3"]]);
        let bd = k.barycentric_subdivision();
        assert_eq!(bd.f_vector(), vec![6, 6]);
        assert_eq!(bd.euler_characteristic(), 0);
    }

    #[test]
    fn barycentric_triangle_counts() {
        let k = complex(&[&["1", "2", "3"]]);
        let bd = k.barycentric_subdivision();
        assert_eq!(bd.f_vector(), vec![7, 12, 6]);
    }

    #[test]
    fn stellar_edge_gives_path() {
        let k = complex(&[&["1", "2"]]);
        let sd = k.stellar_subdivision(&sx(&["1", "2"])).unwrap();
        assert_eq!(sd.f_vector(), vec![3, 2]);
        assert!(!sd.contains(&sx(&["1", "2"])));
    }

    #[test]
    fn stellar_center_of_triangle() {
        let k = complex(&[&["1", "2", "3"]]);
        let sd = k.stellar_subdivision(&sx(&["1", "2", "3"])).unwrap();
        assert_eq!(sd.f_vector(), vec![4, 6, 3]);
        assert_eq!(sd.euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn stellar_edge_of_hollow_triangle_gives_square() {
        let k = complex(&[&["1", "2"], &["1", "3"], &["2", "3"]]);
        let sd = k.stellar_subdivision(&sx(&["1", "2"])).unwrap();
        assert_eq!(sd.f_vector(), vec![4, 4]);
    }

    #[test]
    fn stellar_requires_membership() {
        let k = complex(&[&["1", "2"]]);
        assert!(k.stellar_subdivision(&sx(&["1", "3"])).is_err());
    }

    #[test]
    fn stellar_face_count_identity() {
        // |faces(sd)| = |faces| − #cofaces(σ) + #(new cone faces).
        let k = complex(&[&["1", "2", "3"], &["2", "3", "4"]]);
        for sigma in k.simplex_set().clone() {
            let sd = k.stellar_subdivision(&sigma).unwrap();
            let cofaces = k.simplices().filter(|t| sigma.is_face_of(t)).count();
            let star = k.star(&sigma).unwrap();
            let added = 1 + star.simplices().filter(|t| !sigma.is_face_of(t)).count();
            assert_eq!(sd.len(), k.len() - cofaces + added, "at {sigma}");
            assert_eq!(sd.euler_characteristic(), k.euler_characteristic());
        }
    }

    #[test]
    fn link_and_star() {
        let hollow = complex(&[&["1", "2"], &["1", "3"], &["2", "3"]]);
        let lk = hollow.link(&sx(&["1"])).unwrap();
        assert_eq!(lk.f_vector(), vec![2]);

        let full = complex(&[&["1", "2", "3"]]);
        let st = full.star(&sx(&["1"])).unwrap();
        assert_eq!(st, full);
        assert!(full.link(&sx(&["4"])).is_err());
    }

    #[test]
    fn star_is_cone() {
        let k = complex(&[&["1", "2", "3"], &["3", "4"], &["5"]]);
        for sigma in k.simplex_set().clone() {
            let star = k.star(&sigma).unwrap();
            assert!(star.cone_apex().is_some(), "star of {sigma} should be a cone");
        }
    }

    #[test]
    fn hexagon_vertex_links() {
        let hollow = complex(&[&["1", "2"], &["1", "3"], &["2", "3"]]);
        let hexagon = hollow.barycentric_subdivision();
        for v in hexagon.vertices().cloned().collect::<Vec<_>>() {
            let lk = hexagon.link(&Simplex::vertex(v)).unwrap();
            assert_eq!(lk.f_vector(), vec![2]);
        }
    }

    #[test]
    fn facets_of_path() {
        let k = complex(&[&["1", "2"], &["2", "3"], &["4"]]);
        let facets = k.facets();
        assert_eq!(facets.len(), 3);
        assert!(facets.contains(&sx(&["4"])));
    }

    #[test]
    fn text_and_json_round_trip() {
        let k = complex(&[&["1", "2", "3"], &["3", "4"]]);
        let json = serde_json::to_string(&k.to_json()).unwrap();
        let back = SimplicialComplex::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, k);

        let text = "1 2 3\n3 4\n";
        assert_eq!(SimplicialComplex::parse_text(text).unwrap(), k);

        let with_tuples = "(1 2) x\n";
        let kt = SimplicialComplex::parse_text(with_tuples).unwrap();
        assert_eq!(kt.f_vector(), vec![2, 1]);
    }

    #[test]
    fn relabel_injectivity() {
        let k = complex(&[&["1", "2"]]);
        let mut map = BTreeMap::new();
        map.insert(lab("1"), lab("2"));
        assert!(k.relabel(&map).is_err());
        map.insert(lab("2"), lab("1"));
        let swapped = k.relabel(&map).unwrap();
        assert_eq!(swapped, k);
    }
}
