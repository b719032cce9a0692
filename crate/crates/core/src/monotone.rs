//! Monotone self-maps of posets: order-preserving maps where every element
//! is comparable with its image.

use crate::label::Label;
use crate::poset::Poset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// φ(x) ≥ x for all x.
    Ascending,
    /// φ(x) ≤ x for all x.
    Descending,
    /// Comparable with the image pointwise, but neither side uniformly.
    Mixed,
}

#[derive(Debug, thiserror::Error)]
pub enum MonotoneMapError {
    #[error("map is not order-preserving: {0} < {1} but images are not ordered")]
    NotOrderPreserving(String, String),
    #[error("element {0} is incomparable with its image {1}")]
    IncomparableImage(String, String),
    #[error("kind flag {0:?} is inconsistent: element {1} maps to {2}")]
    KindMismatch(MapKind, String, String),
    #[error("map is not idempotent at {0}: φ(φ({0})) ≠ φ({0})")]
    NotIdempotent(String),
    #[error("map value out of range for element {0}")]
    OutOfRange(String),
}

/// An order-preserving self-map with every element comparable to its image.
#[derive(Clone)]
pub struct MonotoneMap {
    domain: Poset,
    values: Vec<usize>,
    kind: MapKind,
}

impl MonotoneMap {
    /// Builds and fully verifies a monotone map from an index-valued table.
    pub fn new(domain: Poset, values: Vec<usize>, kind: MapKind) -> Result<Self, MonotoneMapError> {
        let n = domain.len();
        assert_eq!(values.len(), n);
        for (i, &v) in values.iter().enumerate() {
            if v >= n {
                return Err(MonotoneMapError::OutOfRange(domain.label(i).to_string()));
            }
            if !domain.comparable(i, v) {
                return Err(MonotoneMapError::IncomparableImage(
                    domain.label(i).to_string(),
                    domain.label(v).to_string(),
                ));
            }
            let ascending_ok = v == i || domain.lt(i, v);
            let descending_ok = v == i || domain.lt(v, i);
            match kind {
                MapKind::Ascending if !ascending_ok => {
                    return Err(MonotoneMapError::KindMismatch(
                        kind,
                        domain.label(i).to_string(),
                        domain.label(v).to_string(),
                    ))
                }
                MapKind::Descending if !descending_ok => {
                    return Err(MonotoneMapError::KindMismatch(
                        kind,
                        domain.label(i).to_string(),
                        domain.label(v).to_string(),
                    ))
                }
                _ => {}
            }
        }
        for i in 0..n {
            for j in 0..n {
                if domain.lt(i, j) && !domain.leq(values[i], values[j]) {
                    return Err(MonotoneMapError::NotOrderPreserving(
                        domain.label(i).to_string(),
                        domain.label(j).to_string(),
                    ));
                }
            }
        }
        Ok(MonotoneMap { domain, values, kind })
    }

    /// Convenience constructor from a label-level function.
    pub fn from_fn<F>(domain: Poset, kind: MapKind, f: F) -> Result<Self, MonotoneMapError>
    where
        F: Fn(&Label) -> Label,
    {
        let values = domain
            .labels()
            .iter()
            .enumerate()
            .map(|(i, l)| {
                domain
                    .index(&f(l))
                    .ok_or_else(|| MonotoneMapError::OutOfRange(domain.label(i).to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        MonotoneMap::new(domain, values, kind)
    }

    pub fn domain(&self) -> &Poset {
        &self.domain
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn apply(&self, i: usize) -> usize {
        self.values[i]
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.values[i] == i
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.domain.len()).filter(|&i| self.is_fixed(i)).collect()
    }

    pub fn verify_idempotent(&self) -> Result<(), MonotoneMapError> {
        for i in 0..self.domain.len() {
            if self.values[self.values[i]] != self.values[i] {
                return Err(MonotoneMapError::NotIdempotent(self.domain.label(i).to_string()));
            }
        }
        Ok(())
    }

    pub fn image(&self) -> Vec<usize> {
        let mut im: Vec<usize> = self.values.clone();
        im.sort_unstable();
        im.dedup();
        im
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lab(s: &str) -> Label {
        Label::atom(s)
    }

    fn three_chain() -> Poset {
        Poset::from_covers(
            vec![lab("a"), lab("b"), lab("c")],
            &[(lab("a"), lab("b")), (lab("b"), lab("c"))],
        )
        .unwrap()
    }

    #[test]
    fn constant_map_on_chain_is_monotone() {
        let p = three_chain();
        let b = p.index(&lab("b")).unwrap();
        let m = MonotoneMap::new(p, vec![b, b, b], MapKind::Mixed).unwrap();
        m.verify_idempotent().unwrap();
        assert_eq!(m.fixed_points().len(), 1);
    }

    #[test]
    fn ascending_flag_checked() {
        let p = three_chain();
        let a = p.index(&lab("a")).unwrap();
        let r = MonotoneMap::new(p, vec![a, a, a], MapKind::Ascending);
        assert!(matches!(r, Err(MonotoneMapError::KindMismatch(..))));
    }

    #[test]
    fn incomparable_image_rejected() {
        let p = Poset::from_covers(vec![lab("a"), lab("b")], &[]).unwrap();
        let r = MonotoneMap::new(p, vec![1, 0], MapKind::Mixed);
        assert!(matches!(r, Err(MonotoneMapError::IncomparableImage(..))));
    }

    #[test]
    fn order_preservation_checked() {
        // diamond: swap the two middle elements -> not order-preserving with tops
        let p = Poset::from_covers(
            vec![lab("0"), lab("x"), lab("y"), lab("1")],
            &[
                (lab("0"), lab("x")),
                (lab("0"), lab("y")),
                (lab("x"), lab("1")),
                (lab("y"), lab("1")),
            ],
        )
        .unwrap();
        let zero = p.index(&lab("0")).unwrap();
        let x = p.index(&lab("x")).unwrap();
        let one = p.index(&lab("1")).unwrap();
        // map 0->0, x->0, y->1, 1->1: order-preserving, mixed
        let y = p.index(&lab("y")).unwrap();
        let mut values = vec![0; 4];
        values[zero] = zero;
        values[x] = zero;
        values[y] = one;
        values[one] = one;
        let m = MonotoneMap::new(p, values, MapKind::Mixed).unwrap();
        m.verify_idempotent().unwrap();
        assert_eq!(m.image().len(), 2);
    }
}
