//! Seeded random inputs for probes and acceptance runs: connected graphs,
//! lattices from intersection-closed set families, and crosscuts.
//!
//! Everything is driven by a caller-supplied seed through ChaCha8, so
//! identical seeds reproduce identical objects byte for byte.

use std::collections::BTreeSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::graphs::Graph;
use crate::label::Label;
use crate::lattice::BoundedLattice;
use crate::lattice_complexes::{atom_crosscut, crosscut, Crosscut};
use crate::poset::Poset;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random labeled graph on `n` drawn from G(n, 1/2), conditioned
/// on being connected (so it has at least one edge for n ≥ 2).
pub fn random_connected_graph(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> Graph {
    loop {
        let n = rng.gen_range(min_n..=max_n);
        let labels: Vec<Label> = (1..=n).map(|i| Label::atom(i.to_string())).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.5) {
                    edges.push((labels[i].clone(), labels[j].clone()));
                }
            }
        }
        let g = Graph::new(labels, &edges).expect("generated edges are valid");
        if g.is_connected() && g.edge_count() >= 1 {
            return g;
        }
    }
}

/// A random bounded lattice built as an intersection-closed family of subsets
/// of a small universe (a closure system), ordered by inclusion. The result
/// has between `min_size` and `max_size` elements.
pub fn random_lattice(rng: &mut ChaCha8Rng, min_size: usize, max_size: usize) -> BoundedLattice {
    loop {
        let universe = rng.gen_range(3..=6u32);
        let full: u32 = (1 << universe) - 1;
        let generators = rng.gen_range(2..=5usize);
        let mut family: BTreeSet<u32> = BTreeSet::new();
        family.insert(full);
        for _ in 0..generators {
            family.insert(rng.gen_range(0..=full));
        }
        // close under intersection
        loop {
            let mut fresh = Vec::new();
            for &a in &family {
                for &b in &family {
                    let c = a & b;
                    if !family.contains(&c) {
                        fresh.push(c);
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            family.extend(fresh);
        }
        if family.len() < min_size || family.len() > max_size {
            continue;
        }
        let labels: Vec<Label> = family
            .iter()
            .map(|&mask| {
                Label::sorted_tuple(
                    (0..universe)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| Label::atom((i + 1).to_string()))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let masks: Vec<u32> = family.iter().copied().collect();
        let by_label: std::collections::BTreeMap<Label, u32> =
            labels.iter().cloned().zip(masks.iter().copied()).collect();
        let poset = Poset::from_strict_relation(labels, |a, b| {
            let (ma, mb) = (by_label[a], by_label[b]);
            ma != mb && ma & mb == ma
        })
        .expect("inclusion is a strict order");
        let lattice = BoundedLattice::from_poset(poset)
            .expect("an intersection-closed family with top is a lattice");
        if lattice.proper_part().is_empty() {
            continue;
        }
        return lattice;
    }
}

/// A random non-atomic lattice within the size bounds.
pub fn random_nonatomic_lattice(
    rng: &mut ChaCha8Rng,
    min_size: usize,
    max_size: usize,
) -> BoundedLattice {
    loop {
        let l = random_lattice(rng, min_size, max_size);
        if !l.is_atomic() && !l.atomic_sublattice().proper_part().is_empty() {
            return l;
        }
    }
}

/// A random crosscut of the lattice: a greedy random saturated antichain,
/// falling back to the atoms when the greedy draw fails.
pub fn random_crosscut(rng: &mut ChaCha8Rng, lattice: &BoundedLattice, cap: usize) -> Crosscut {
    'attempt: for _ in 0..8 {
        let bar: Vec<usize> = (0..lattice.len())
            .filter(|&i| i != lattice.bottom() && i != lattice.top())
            .collect();
        if bar.is_empty() {
            break;
        }
        let mut members: Vec<usize> = Vec::new();
        let seed_elem = bar[rng.gen_range(0..bar.len())];
        members.push(seed_elem);
        let mut chains = lattice.poset().maximal_chains();
        chains.shuffle(rng);
        for chain in &chains {
            if chain.iter().any(|x| members.contains(x)) {
                continue;
            }
            // extend with a random chain element incomparable to all members
            let mut candidates: Vec<usize> = chain
                .iter()
                .copied()
                .filter(|&x| {
                    x != lattice.bottom()
                        && x != lattice.top()
                        && members.iter().all(|&m| !lattice.poset().comparable(m, x))
                })
                .collect();
            if candidates.is_empty() {
                continue 'attempt;
            }
            candidates.shuffle(rng);
            members.push(candidates[0]);
        }
        let labels: Vec<Label> = members.iter().map(|&m| lattice.label(m).clone()).collect();
        if let Ok(c) = crosscut(lattice, &labels, cap) {
            return c;
        }
    }
    atom_crosscut(lattice)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_complexes::{is_crosscut, DEFAULT_SATURATION_CAP};

    #[test]
    fn graphs_are_connected_and_reproducible() {
        let mut rng = rng_from_seed(7);
        let graphs: Vec<Graph> = (0..10).map(|_| random_connected_graph(&mut rng, 3, 6)).collect();
        for g in &graphs {
            assert!(g.is_connected());
            assert!(g.vertex_count() <= 6);
        }
        let mut rng2 = rng_from_seed(7);
        let again: Vec<Graph> = (0..10).map(|_| random_connected_graph(&mut rng2, 3, 6)).collect();
        assert_eq!(graphs, again);
    }

    #[test]
    fn lattices_are_lattices_with_algebra() {
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let l = random_lattice(&mut rng, 4, 12);
            assert!(l.len() <= 12);
            let n = l.len();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(l.meet(i, j), l.meet(j, i));
                    assert_eq!(l.join(i, l.meet(i, j)), i);
                    for k in 0..n {
                        assert_eq!(l.meet(l.meet(i, j), k), l.meet(i, l.meet(j, k)));
                    }
                }
            }
        }
    }

    #[test]
    fn nonatomic_generator_delivers() {
        let mut rng = rng_from_seed(3);
        for _ in 0..5 {
            let l = random_nonatomic_lattice(&mut rng, 4, 12);
            assert!(!l.is_atomic());
        }
    }

    #[test]
    fn random_crosscuts_are_valid() {
        let mut rng = rng_from_seed(23);
        for _ in 0..10 {
            let l = random_lattice(&mut rng, 4, 10);
            let c = random_crosscut(&mut rng, &l, DEFAULT_SATURATION_CAP);
            let labels: Vec<Label> = c.members().iter().map(|&m| l.label(m).clone()).collect();
            let report = is_crosscut(&l, &labels, DEFAULT_SATURATION_CAP).unwrap();
            assert!(report.is_valid());
        }
    }
}
