//! Enumeration of simple sphere triangulations by vertex splitting.
//!
//! Every simple triangulation with more than four vertices contains a
//! contractible edge, so repeatedly splitting vertices starting from the
//! tetrahedron reaches every isomorphism class. Duplicates are removed per
//! level with canonical keys.

use super::canonical::{canonical_key, CanonicalKey};
use super::rotation::RotationSystem;
use crate::error::Error;
use crate::Result;
use std::collections::BTreeMap;

/// All simple sphere triangulations on exactly `n` vertices, one per
/// isomorphism class, in canonical-key order.
pub fn triangulations(n: usize) -> Result<Vec<RotationSystem>> {
    if !(4..=13).contains(&n) {
        return Err(Error::domain(format!(
            "triangulation enumeration supports 4 <= n <= 13, got {n}"
        )));
    }
    let mut level: BTreeMap<CanonicalKey, RotationSystem> = BTreeMap::new();
    let seed = RotationSystem::tetrahedron();
    level.insert(canonical_key(&seed), seed);
    for _ in 4..n {
        let mut next: BTreeMap<CanonicalKey, RotationSystem> = BTreeMap::new();
        for t in level.values() {
            for v in 0..t.n() {
                let deg = t.degree(v);
                for i in 0..deg {
                    for j in 0..deg {
                        if i == j {
                            continue;
                        }
                        let s = t.split_vertex(v, i, j);
                        let key = canonical_key(&s);
                        next.entry(key).or_insert(s);
                    }
                }
            }
        }
        level = next;
    }
    Ok(level.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangulation_class_counts() {
        // Known counts of simple sphere triangulations on n vertices.
        let expect = [(4, 1), (5, 1), (6, 2), (7, 5), (8, 14), (9, 50), (10, 233)];
        for (n, count) in expect {
            let ts = triangulations(n).unwrap();
            assert_eq!(ts.len(), count, "triangulation count mismatch at n={n}");
            for t in &ts {
                assert!(t.validate().is_ok());
                assert!(t.faces().iter().all(|f| f.len() == 3));
                assert!(t.is_three_connected());
            }
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(triangulations(3).is_err());
        assert!(triangulations(14).is_err());
    }
}
