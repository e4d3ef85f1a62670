//! Canonical form of a combinatorial embedding, closed under relabeling,
//! rotation of the sphere, and reflection.
//!
//! The code of one (start dart, orientation) choice is a breadth-first
//! relabeling: each vertex's rotation is read starting from the dart that
//! first reached it, assigning fresh labels to unseen vertices. The canonical
//! key is the lexicographic minimum over admissible start darts and both
//! orientations, so equal keys mean isomorphic embedded graphs (including
//! mirror images).

use super::rotation::RotationSystem;
use serde::{Deserialize, Serialize};

const SEP: u8 = 0xFF;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Code for one start dart and orientation; bails out early once it exceeds
/// `best` lexicographically.
fn code_from(
    rs: &RotationSystem,
    start: usize,
    first_nbr: u8,
    reversed: bool,
    best: Option<&[u8]>,
    labels_out: Option<&mut Vec<usize>>,
) -> Option<Vec<u8>> {
    const NONE: usize = usize::MAX;
    let n = rs.n();
    let mut label = vec![NONE; n];
    let mut order = Vec::with_capacity(n);
    let mut entry = vec![0u8; n];
    label[start] = 0;
    order.push(start);
    entry[start] = first_nbr;
    let mut next = 1usize;
    let mut code = Vec::with_capacity(2 * rs.edge_count() + n);
    let mut qi = 0;
    // Tracks whether the code so far equals the prefix of `best`; only then
    // can a larger byte disqualify this start.
    let mut on_prefix = best.is_some();
    let mut push = |code: &mut Vec<u8>, byte: u8| -> bool {
        code.push(byte);
        if on_prefix {
            let b = best.unwrap();
            let i = code.len() - 1;
            if i >= b.len() || byte > b[i] {
                return false;
            }
            if byte < b[i] {
                on_prefix = false;
            }
        }
        true
    };
    while qi < order.len() {
        let w = order[qi];
        qi += 1;
        let nbrs = rs.neighbors(w);
        let deg = nbrs.len();
        let startpos = nbrs
            .iter()
            .position(|&x| x == entry[w])
            .expect("entry neighbor present");
        for k in 0..deg {
            let pos = if reversed {
                (startpos + deg - k) % deg
            } else {
                (startpos + k) % deg
            };
            let x = nbrs[pos] as usize;
            if label[x] == NONE {
                label[x] = next;
                next += 1;
                order.push(x);
                entry[x] = w as u8;
            }
            if !push(&mut code, label[x] as u8) {
                return None;
            }
        }
        if !push(&mut code, SEP) {
            return None;
        }
    }
    if let Some(out) = labels_out {
        *out = label;
    }
    Some(code)
}

/// Admissible start darts: tails of minimal degree, heads of minimal degree
/// among those (an isomorphism-invariant restriction).
fn start_darts(rs: &RotationSystem) -> Vec<(usize, u8)> {
    let dmin = (0..rs.n()).map(|v| rs.degree(v)).min().unwrap();
    let mut hmin = usize::MAX;
    for v in 0..rs.n() {
        if rs.degree(v) == dmin {
            for &w in rs.neighbors(v) {
                hmin = hmin.min(rs.degree(w as usize));
            }
        }
    }
    let mut darts = Vec::new();
    for v in 0..rs.n() {
        if rs.degree(v) == dmin {
            for &w in rs.neighbors(v) {
                if rs.degree(w as usize) == hmin {
                    darts.push((v, w));
                }
            }
        }
    }
    darts
}

/// Canonical key of a connected embedded graph.
pub fn canonical_key(rs: &RotationSystem) -> CanonicalKey {
    canonical_key_annotated(rs, &[])
}

/// Canonical key of an embedded graph with isolated-vertex annotations given
/// as indices into `rs.faces()`.
pub fn canonical_key_annotated(rs: &RotationSystem, isolated_faces: &[usize]) -> CanonicalKey {
    let mut best: Option<Vec<u8>> = None;
    let faces = if isolated_faces.is_empty() {
        Vec::new()
    } else {
        rs.faces()
    };
    for (u, v) in start_darts(rs) {
        for reversed in [false, true] {
            let mut labels = Vec::new();
            let got = code_from(
                rs,
                u,
                v,
                reversed,
                best.as_deref(),
                if isolated_faces.is_empty() {
                    None
                } else {
                    Some(&mut labels)
                },
            );
            let Some(mut code) = got else { continue };
            if !isolated_faces.is_empty() {
                code.push(SEP);
                code.extend(annotation_code(&faces, isolated_faces, &labels, reversed));
            }
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
    }
    CanonicalKey(best.expect("at least one start dart"))
}

/// Canonical signatures of the annotated faces under the chosen relabeling:
/// each face cycle is relabeled, oriented consistently, rotated to its
/// lexicographic minimum, and the sorted signatures are concatenated.
fn annotation_code(
    faces: &[Vec<u8>],
    isolated_faces: &[usize],
    labels: &[usize],
    reversed: bool,
) -> Vec<u8> {
    let mut sigs: Vec<Vec<u8>> = isolated_faces
        .iter()
        .map(|&fi| {
            let mut cyc: Vec<u8> = faces[fi].iter().map(|&v| labels[v as usize] as u8).collect();
            if reversed {
                cyc.reverse();
            }
            min_rotation(&cyc)
        })
        .collect();
    sigs.sort();
    let mut out = Vec::new();
    for s in sigs {
        out.extend_from_slice(&s);
        out.push(SEP);
    }
    out
}

fn min_rotation(cyc: &[u8]) -> Vec<u8> {
    let m = cyc.len();
    let mut best: Option<Vec<u8>> = None;
    for s in 0..m {
        let rot: Vec<u8> = (0..m).map(|k| cyc[(s + k) % m]).collect();
        if best.as_ref().is_none_or(|b| rot < *b) {
            best = Some(rot);
        }
    }
    best.unwrap()
}

/// Automorphisms of the embedded graph (rotation- and reflection-type): all
/// vertex permutations arising from start darts whose canonical code equals
/// the overall minimum. Always contains the identity.
pub fn embedding_automorphisms(rs: &RotationSystem) -> Vec<Vec<u8>> {
    // Reference labeling from the canonical code.
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    let mut achievers: Vec<Vec<usize>> = Vec::new();
    for (u, v) in start_darts(rs) {
        for reversed in [false, true] {
            let mut labels = Vec::new();
            if let Some(code) = code_from(rs, u, v, reversed, None, Some(&mut labels)) {
                match &best {
                    None => {
                        best = Some((code, labels.clone()));
                        achievers = vec![labels];
                    }
                    Some((bc, _)) => {
                        if code < *bc {
                            best = Some((code, labels.clone()));
                            achievers = vec![labels];
                        } else if code == *bc {
                            achievers.push(labels);
                        }
                    }
                }
            }
        }
    }
    let (_, reference) = best.expect("graph has at least one dart");
    // label-to-vertex for the reference labeling.
    let n = rs.n();
    let mut ref_vertex = vec![0usize; n];
    for v in 0..n {
        ref_vertex[reference[v]] = v;
    }
    let mut out: Vec<Vec<u8>> = Vec::new();
    for labels in achievers {
        // phi maps the reference achiever's vertices onto this achiever's:
        // phi(v) = vertex with the same label under `labels`.
        let mut to_vertex = vec![0usize; n];
        for v in 0..n {
            to_vertex[labels[v]] = v;
        }
        let phi: Vec<u8> = (0..n).map(|v| to_vertex[reference[v]] as u8).collect();
        if !out.contains(&phi) {
            out.push(phi);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn octahedron() -> RotationSystem {
        // 0 north, 5 south, 1..4 equator.
        RotationSystem::new(vec![
            vec![1, 2, 3, 4],
            vec![0, 4, 5, 2],
            vec![0, 1, 5, 3],
            vec![0, 2, 5, 4],
            vec![0, 3, 5, 1],
            vec![1, 4, 3, 2],
        ])
        .unwrap()
    }

    fn cube() -> RotationSystem {
        // Bottom 0..3, top 4..7 with i above i.
        RotationSystem::new(vec![
            vec![1, 3, 4],
            vec![2, 0, 5],
            vec![3, 1, 6],
            vec![0, 2, 7],
            vec![0, 7, 5],
            vec![1, 4, 6],
            vec![2, 5, 7],
            vec![3, 6, 4],
        ])
        .unwrap()
    }

    #[test]
    fn octahedron_is_valid() {
        let o = octahedron();
        assert_eq!(o.edge_count(), 12);
        assert_eq!(o.faces().len(), 8);
        assert!(o.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn cube_is_valid() {
        let c = cube();
        assert_eq!(c.edge_count(), 12);
        assert_eq!(c.faces().len(), 6);
        assert!(c.faces().iter().all(|f| f.len() == 4));
    }

    #[test]
    fn key_invariant_under_relabeling() {
        let o = octahedron();
        let base = canonical_key(&o);
        let mut rng = SplitMix64::new(11);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..6).collect();
            rng.shuffle(&mut perm);
            assert_eq!(canonical_key(&o.relabel(&perm)), base);
        }
    }

    #[test]
    fn key_invariant_under_mirror() {
        let o = octahedron();
        assert_eq!(canonical_key(&o.mirrored()), canonical_key(&o));
        let c = cube();
        assert_eq!(canonical_key(&c.mirrored()), canonical_key(&c));
    }

    #[test]
    fn octahedron_and_cube_differ() {
        assert_ne!(canonical_key(&octahedron()), canonical_key(&cube()));
    }

    #[test]
    fn annotated_faces_in_same_orbit_share_keys() {
        let c = cube();
        let nf = c.faces().len();
        // All cube faces are equivalent, so annotating any single face gives
        // the same key.
        let keys: Vec<CanonicalKey> = (0..nf)
            .map(|f| canonical_key_annotated(&c, &[f]))
            .collect();
        for k in &keys {
            assert_eq!(*k, keys[0]);
        }
        // But the annotated key differs from the bare key.
        assert_ne!(keys[0], canonical_key(&c));
    }
}
