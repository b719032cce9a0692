//! Graphs and their complexes: the common-neighbor operator, neighborhood
//! complex N(G), Lovász complex Lo(G), the polyhedral complex Hom(K₂,G) of
//! complete bipartite pairs with its lattice P, the complex DGₙ of
//! disconnected graphs, and the partition lattice Πₙ.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::cw::{CwError, RegularCwPoset};
use crate::label::Label;
use crate::lattice::{BoundedLattice, LatticeError};
use crate::poset::{Poset, PosetError};

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) references a vertex that is not declared")]
    UnknownVertex(String, String),
    #[error("graph has no edges; the construction needs at least one")]
    NoEdges,
    #[error("graph has {0} vertices, exceeding the supported maximum of 63")]
    TooManyVertices(usize),
    #[error("need n ≥ {1}, got {0}")]
    BadParameter(usize, usize),
    #[error("partition lattice cap is {1}, requested n = {0}")]
    PartitionCap(usize, usize),
    #[error("bad graph input: {0}")]
    Parse(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Cw(#[from] CwError),
}

/// An undirected graph; loops allowed, multi-edges not. Vertices are labels,
/// internally indexed; neighborhoods are bitmasks, so at most 63 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<Label>,
    /// adjacency bitmask per vertex; bit v of neighbors[u] set iff (u,v) ∈ E
    neighbors: Vec<u64>,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(
        vertices: impl Into<Vec<Label>>,
        edges: &[(Label, Label)],
    ) -> Result<Graph, GraphError> {
        let mut labels: Vec<Label> = vertices.into();
        labels.sort();
        labels.dedup();
        if labels.len() > 63 {
            return Err(GraphError::TooManyVertices(labels.len()));
        }
        let mut neighbors = vec![0u64; labels.len()];
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let i = labels
                .binary_search(a)
                .map_err(|_| GraphError::UnknownVertex(a.to_string(), b.to_string()))?;
            let j = labels
                .binary_search(b)
                .map_err(|_| GraphError::UnknownVertex(a.to_string(), b.to_string()))?;
            neighbors[i] |= 1 << j;
            neighbors[j] |= 1 << i;
            edge_set.insert((i.min(j), i.max(j)));
        }
        Ok(Graph { labels, neighbors, edges: edge_set })
    }

    /// Builds from edges alone; the vertex set is the set of endpoints.
    pub fn from_edges(edges: &[(Label, Label)]) -> Result<Graph, GraphError> {
        let mut vertices: Vec<Label> = Vec::new();
        for (a, b) in edges {
            vertices.push(a.clone());
            vertices.push(b.clone());
        }
        Graph::new(vertices, edges)
    }

    /// Complete graph Kₙ on vertices "1".."n".
    pub fn complete(n: usize) -> Graph {
        let labels: Vec<Label> = (1..=n).map(|i| Label::atom(i.to_string())).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((labels[i].clone(), labels[j].clone()));
            }
        }
        Graph::new(labels, &edges).expect("complete graph is valid")
    }

    /// Cycle Cₙ on vertices "1".."n".
    pub fn cycle(n: usize) -> Graph {
        let labels: Vec<Label> = (1..=n).map(|i| Label::atom(i.to_string())).collect();
        let edges: Vec<(Label, Label)> = (0..n)
            .map(|i| (labels[i].clone(), labels[(i + 1) % n].clone()))
            .collect();
        Graph::new(labels, &edges).expect("cycle is valid")
    }

    /// Path Pₙ on n vertices "1".."n".
    pub fn path(n: usize) -> Graph {
        let labels: Vec<Label> = (1..=n).map(|i| Label::atom(i.to_string())).collect();
        let edges: Vec<(Label, Label)> = (0..n.saturating_sub(1))
            .map(|i| (labels[i].clone(), labels[i + 1].clone()))
            .collect();
        Graph::new(labels, &edges).expect("path is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
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

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.neighbors[i] & (1 << j) != 0
    }

    pub fn has_loop(&self) -> bool {
        (0..self.vertex_count()).any(|i| self.has_edge(i, i))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    /// Bitmask of vertices that are endpoints of at least one edge.
    pub fn non_isolated_mask(&self) -> u64 {
        (0..self.vertex_count())
            .filter(|&i| self.neighbors[i] != 0 || self.has_edge(i, i))
            .fold(0, |m, i| m | (1 << i))
    }

    /// Common neighbors N(S) as a bitmask. By convention N(∅) is the set of
    /// all non-isolated vertices, so that the subset machinery has an honest
    /// value at the empty set.
    pub fn common_neighbors_mask(&self, set: u64) -> u64 {
        if set == 0 {
            return self.non_isolated_mask();
        }
        let mut acc = u64::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            acc &= self.neighbors[v];
        }
        acc
    }

    /// Common neighbors of a labeled vertex set.
    pub fn common_neighbors(&self, set: &[Label]) -> Result<Vec<Label>, GraphError> {
        let mut mask = 0u64;
        for l in set {
            let i = self
                .index(l)
                .ok_or_else(|| GraphError::UnknownVertex(l.to_string(), String::new()))?;
            mask |= 1 << i;
        }
        Ok(self.unmask(self.common_neighbors_mask(mask)))
    }

    pub fn unmask(&self, mask: u64) -> Vec<Label> {
        (0..self.vertex_count())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| self.labels[i].clone())
            .collect()
    }

    pub fn mask_of(&self, set: &[Label]) -> Option<u64> {
        let mut mask = 0u64;
        for l in set {
            mask |= 1 << self.index(l)?;
        }
        Some(mask)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut rest = frontier;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= self.neighbors[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == n
    }
}

/// Canonical JSON graph form.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<Label>,
    pub edges: Vec<(Label, Label)>,
}

impl Graph {
    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.labels.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(i, j)| (self.labels[i].clone(), self.labels[j].clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Graph, GraphError> {
        Graph::new(json.vertices.clone(), &json.edges)
    }

    /// Text form: one edge per line, "u v"; a loop is "u u".
    pub fn parse_text(text: &str) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let labels = crate::complex::parse_label_row(line)
                .map_err(|e| GraphError::Parse(format!("bad edge line `{line}`: {e}")))?;
            match labels.as_slice() {
                [a, b] => edges.push((a.clone(), b.clone())),
                _ => return Err(GraphError::Parse(format!("edge line `{line}` needs two labels"))),
            }
        }
        Graph::from_edges(&edges)
    }
}

fn mask_to_simplex(g: &Graph, mask: u64) -> Simplex {
    Simplex::new(g.unmask(mask)).expect("nonempty mask")
}

/// The neighborhood complex N(G): vertices are the non-isolated vertices, and
/// a set spans a simplex iff it has a common neighbor.
pub fn neighborhood_complex(g: &Graph) -> Result<SimplicialComplex, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::NoEdges);
    }
    let mut simplices = BTreeSet::new();
    for mask in nonempty_masks_with_common_neighbor(g) {
        simplices.insert(mask_to_simplex(g, mask));
    }
    Ok(SimplicialComplex::from_closed_family(simplices))
}

/// All nonempty vertex sets S with N(S) ≠ ∅, by hereditary DFS.
fn nonempty_masks_with_common_neighbor(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    let mut stack: Vec<(u64, u64, usize)> = Vec::new();
    for v in 0..n {
        let nb = g.common_neighbors_mask(1 << v);
        if nb != 0 {
            stack.push((1 << v, nb, v));
        }
    }
    while let Some((mask, nb, last)) = stack.pop() {
        out.push(mask);
        for v in last + 1..n {
            let nb2 = nb & g.neighbors[v];
            if nb2 != 0 {
                stack.push((mask | (1 << v), nb2, v));
            }
        }
    }
    out
}

/// The image of the common-neighbor operator on the faces of N(G), i.e. the
/// vertex sets of the form N(A) for a face A, as bitmasks.
pub fn image_of_neighbor_operator(g: &Graph) -> BTreeSet<u64> {
    nonempty_masks_with_common_neighbor(g)
        .into_iter()
        .map(|m| g.common_neighbors_mask(m))
        .collect()
}

/// The Lovász complex Lo(G): the order complex of the image of N under
/// inclusion, with vertices labeled by face tuples, plus the involution
/// A ↦ N(A) on that image.
pub struct LovaszComplex {
    pub complex: SimplicialComplex,
    /// the image poset of N, ordered by inclusion
    pub image_poset: Poset,
    /// the involution A ↦ N(A) on image elements (as poset indices)
    pub involution: Vec<usize>,
}

pub fn lovasz_complex(g: &Graph) -> Result<LovaszComplex, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::NoEdges);
    }
    let image: Vec<u64> = image_of_neighbor_operator(g).into_iter().collect();
    let labels: Vec<Label> = image
        .iter()
        .map(|&m| mask_to_simplex(g, m).as_label())
        .collect();
    let by_label: BTreeMap<Label, u64> =
        labels.iter().cloned().zip(image.iter().copied()).collect();
    let poset = Poset::from_strict_relation(labels, |a, b| {
        let (ma, mb) = (by_label[a], by_label[b]);
        ma != mb && ma & mb == ma
    })?;
    let involution: Vec<usize> = poset
        .labels()
        .iter()
        .map(|l| {
            let m = by_label[l];
            let nm = g.common_neighbors_mask(m);
            let nl = mask_to_simplex(g, nm).as_label();
            poset.index(&nl).expect("N maps the image into itself")
        })
        .collect();
    Ok(LovaszComplex { complex: poset.order_complex(), image_poset: poset, involution })
}

/// Report from the freeness check of the involution on Lo(G).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreenessReport {
    /// The graph has a loop; the check does not apply.
    SkippedLoops,
    /// No fixed image element and no invariant simplex of Lo(G).
    Free,
    /// A fixed point or invariant simplex, with a witness.
    NotFree(String),
}

/// Checks that A ↦ N(A) acts freely on Lo(G): no fixed element of the image
/// and no invariant chain. Skipped for graphs with loops.
pub fn lovasz_involution_free(g: &Graph) -> Result<FreenessReport, GraphError> {
    if g.has_loop() {
        return Ok(FreenessReport::SkippedLoops);
    }
    let lo = lovasz_complex(g)?;
    for (i, &ni) in lo.involution.iter().enumerate() {
        if i == ni {
            return Ok(FreenessReport::NotFree(format!(
                "N fixes the face {}",
                lo.image_poset.label(i)
            )));
        }
    }
    for chain in lo.complex.simplices() {
        let mapped: BTreeSet<Label> = chain
            .vertices()
            .iter()
            .map(|l| {
                let i = lo.image_poset.index(l).expect("vertices are image elements");
                lo.image_poset.label(lo.involution[i]).clone()
            })
            .collect();
        let original: BTreeSet<Label> = chain.vertices().iter().cloned().collect();
        if mapped == original {
            return Ok(FreenessReport::NotFree(format!("invariant simplex {chain}")));
        }
    }
    Ok(FreenessReport::Free)
}

/// A complete bipartite pair (A, B): every vertex of A is adjacent to every
/// vertex of B. With loops, A and B may intersect.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct BipartitePair {
    pub a: u64,
    pub b: u64,
}

impl BipartitePair {
    pub fn label(&self, g: &Graph) -> Label {
        Label::tuple(vec![
            mask_to_simplex(g, self.a).as_label(),
            mask_to_simplex(g, self.b).as_label(),
        ])
    }

    pub fn dim(&self) -> usize {
        (self.a.count_ones() + self.b.count_ones()) as usize - 2
    }
}

/// The polyhedral complex Hom(K₂,G) as a regular CW face poset: cells are the
/// complete bipartite pairs (A,B), ordered componentwise by inclusion.
pub fn hom_k2(g: &Graph) -> Result<RegularCwPoset<BipartitePair>, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::NoEdges);
    }
    let mut cells = Vec::new();
    for a_mask in nonempty_masks_with_common_neighbor(g) {
        let nb = g.common_neighbors_mask(a_mask);
        // every nonempty B ⊆ N(A) gives a cell (A, B)
        for b_mask in nonempty_submasks(nb) {
            let pair = BipartitePair { a: a_mask, b: b_mask };
            cells.push((pair.label(g), pair.dim(), pair));
        }
    }
    Ok(RegularCwPoset::new(cells, |x: &BipartitePair, y: &BipartitePair| {
        (x.a != y.a || x.b != y.b) && x.a & y.a == x.a && x.b & y.b == x.b
    })?)
}

fn nonempty_submasks(mask: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out
}

/// Sentinel labels for adjoined lattice bounds. Tuples wrapping an atom that
/// cannot collide with cell or face labels (whose tuple entries are tuples).
fn bottom_label() -> Label {
    Label::tuple(vec![Label::atom("bot")])
}

fn top_label() -> Label {
    Label::tuple(vec![Label::atom("top")])
}

/// The lattice P = F^op(Hom(K₂,G)) ∪ {0̂, 1̂}: the opposite of the cell order
/// with fresh bounds adjoined, verified as a lattice.
pub fn hom_k2_lattice(g: &Graph) -> Result<BoundedLattice, GraphError> {
    let hom = hom_k2(g)?;
    hom_lattice_from_cells(&hom)
}

pub fn hom_lattice_from_cells(
    hom: &RegularCwPoset<BipartitePair>,
) -> Result<BoundedLattice, GraphError> {
    let mut labels: Vec<Label> = (0..hom.len()).map(|i| hom.label(i).clone()).collect();
    let bot = bottom_label();
    let top = top_label();
    labels.push(bot.clone());
    labels.push(top.clone());
    let index: BTreeMap<Label, usize> = (0..hom.len())
        .map(|i| (hom.label(i).clone(), i))
        .collect();
    let poset = Poset::from_strict_relation(labels, |x, y| {
        if x == y {
            return false;
        }
        if *x == bot || *y == top {
            return true;
        }
        if *y == bot || *x == top {
            return false;
        }
        // opposite of the cell face order: x <_P y iff cell y is a face of cell x
        let (ix, iy) = (index[x], index[y]);
        hom.lt(iy, ix)
    })?;
    Ok(BoundedLattice::from_poset(poset)?)
}

/// Γ(P) built directly from its description: vertices are the pairs (A,B)
/// with N(A)=B and N(B)=A; a set of pairs spans a simplex iff the A's and the
/// B's each have a common element.
pub fn gamma_p_description(g: &Graph) -> Result<SimplicialComplex, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::NoEdges);
    }
    let pairs: Vec<BipartitePair> = image_of_neighbor_operator(g)
        .into_iter()
        .map(|a| BipartitePair { a, b: g.common_neighbors_mask(a) })
        .collect();
    debug_assert!(pairs
        .iter()
        .all(|p| g.common_neighbors_mask(p.b) == p.a), "image pairs satisfy N(B)=A");
    let mut simplices = BTreeSet::new();
    let mut stack: Vec<(Vec<usize>, u64, u64)> = (0..pairs.len())
        .map(|i| (vec![i], pairs[i].a, pairs[i].b))
        .collect();
    while let Some((set, ia, ib)) = stack.pop() {
        let labels: Vec<Label> = set.iter().map(|&i| pairs[i].label(g)).collect();
        simplices.insert(Simplex::new(labels).expect("distinct pairs"));
        let last = *set.last().unwrap();
        for next in last + 1..pairs.len() {
            let na = ia & pairs[next].a;
            let nb = ib & pairs[next].b;
            if na != 0 && nb != 0 {
                let mut s = set.clone();
                s.push(next);
                stack.push((s, na, nb));
            }
        }
    }
    Ok(SimplicialComplex::from_closed_family(simplices))
}

/// The lattice of image faces: all A ∈ Im N ordered by inclusion, with fresh
/// bounds attached. Element labels are the face tuples of N(G).
pub fn image_lattice(g: &Graph) -> Result<BoundedLattice, GraphError> {
    let image: Vec<u64> = image_of_neighbor_operator(g).into_iter().collect();
    let mut labels: Vec<Label> = image
        .iter()
        .map(|&m| mask_to_simplex(g, m).as_label())
        .collect();
    let by_label: BTreeMap<Label, u64> =
        labels.iter().cloned().zip(image.iter().copied()).collect();
    let bot = bottom_label();
    let top = top_label();
    labels.push(bot.clone());
    labels.push(top.clone());
    let poset = Poset::from_strict_relation(labels, |x, y| {
        if x == y {
            return false;
        }
        if *x == bot || *y == top {
            return true;
        }
        if *y == bot || *x == top {
            return false;
        }
        let (mx, my) = (by_label[x], by_label[y]);
        mx != my && mx & my == mx
    })?;
    Ok(BoundedLattice::from_poset(poset)?)
}

/// DGₙ: the complex of disconnected graphs on n labeled vertices. Vertices
/// are the edges (i,j), i<j≤n; a set of edges spans a simplex iff the graph
/// it forms on all n vertices (isolated vertices included) is disconnected.
pub fn disconnected_graphs_complex(n: usize) -> Result<SimplicialComplex, GraphError> {
    if n < 2 {
        return Err(GraphError::BadParameter(n, 2));
    }
    let mut edge_list = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            edge_list.push((i, j));
        }
    }
    let edge_label = |&(i, j): &(usize, usize)| {
        Label::tuple(vec![Label::atom(i.to_string()), Label::atom(j.to_string())])
    };
    let disconnected = |set: &[usize]| -> bool {
        // union-find over the n vertices with the chosen edges
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &e in set {
            let (i, j) = edge_list[e];
            let (ri, rj) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
            if ri != rj {
                parent[ri] = rj;
            }
        }
        let mut roots = BTreeSet::new();
        for v in 0..n {
            roots.insert(find(&mut parent, v));
        }
        roots.len() >= 2
    };
    let mut simplices = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = (0..edge_list.len())
        .filter(|&e| disconnected(&[e]))
        .map(|e| vec![e])
        .collect();
    while let Some(set) = stack.pop() {
        let labels: Vec<Label> = set.iter().map(|&e| edge_label(&edge_list[e])).collect();
        simplices.insert(Simplex::new(labels).expect("distinct edges"));
        let last = *set.last().unwrap();
        for next in last + 1..edge_list.len() {
            let mut s = set.clone();
            s.push(next);
            if disconnected(&s) {
                stack.push(s);
            }
        }
    }
    Ok(SimplicialComplex::from_closed_family(simplices))
}

pub const PARTITION_CAP: usize = 7;

/// The partition lattice Πₙ: set partitions of {1..n} ordered by refinement.
/// Element labels are tuples of sorted blocks.
pub fn partition_lattice(n: usize) -> Result<BoundedLattice, GraphError> {
    partition_lattice_capped(n, PARTITION_CAP)
}

pub fn partition_lattice_capped(n: usize, cap: usize) -> Result<BoundedLattice, GraphError> {
    if n < 1 {
        return Err(GraphError::BadParameter(n, 1));
    }
    if n > cap {
        return Err(GraphError::PartitionCap(n, cap));
    }
    // enumerate partitions as restricted growth strings
    let mut partitions: Vec<Vec<usize>> = Vec::new(); // block id per element
    let mut rgs = vec![0usize; n];
    loop {
        partitions.push(rgs.clone());
        let mut advanced = false;
        for i in (1..n).rev() {
            let max_prev = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                for v in rgs.iter_mut().skip(i + 1) {
                    *v = 0;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    let block_label = |p: &[usize]| -> Label {
        let block_count = p.iter().copied().max().unwrap_or(0) + 1;
        let mut blocks: Vec<Vec<Label>> = vec![Vec::new(); block_count];
        for (elem, &b) in p.iter().enumerate() {
            blocks[b].push(Label::atom((elem + 1).to_string()));
        }
        let mut block_labels: Vec<Label> = blocks.into_iter().map(Label::sorted_tuple).collect();
        block_labels.sort();
        Label::tuple(block_labels)
    };
    let labels: Vec<Label> = partitions.iter().map(|p| block_label(p)).collect();
    let by_label: BTreeMap<Label, Vec<usize>> = labels
        .iter()
        .cloned()
        .zip(partitions.iter().cloned())
        .collect();
    let refines = |fine: &[usize], coarse: &[usize]| -> bool {
        // fine ≤ coarse iff every block of fine is inside a block of coarse
        let mut image: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..fine.len() {
            match image.get(&fine[i]) {
                Some(&c) if c != coarse[i] => return false,
                Some(_) => {}
                None => {
                    image.insert(fine[i], coarse[i]);
                }
            }
        }
        true
    };
    let poset = Poset::from_strict_relation(labels, |x, y| {
        let (px, py) = (&by_label[x], &by_label[y]);
        px != py && refines(px, py)
    })?;
    Ok(BoundedLattice::from_poset(poset)?)
}

/// The canonical bijection between the atoms of Πₙ (partitions with a single
/// 2-block) and the vertices of DGₙ (edge pairs), as a relabeling map.
pub fn partition_atoms_to_edges(pi: &BoundedLattice) -> BTreeMap<Label, Label> {
    let mut map = BTreeMap::new();
    for a in pi.atoms() {
        let Label::Tuple(blocks) = pi.label(a) else { unreachable!() };
        let two_block = blocks
            .iter()
            .find_map(|b| match b {
                Label::Tuple(items) if items.len() == 2 => Some(items.to_vec()),
                _ => None,
            })
            .expect("an atom of the partition lattice has exactly one 2-block");
        map.insert(pi.label(a).clone(), Label::tuple(two_block));
    }
    map
}
