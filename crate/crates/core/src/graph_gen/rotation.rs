//! Combinatorial embeddings of planar graphs as rotation systems.
//!
//! `adj[v]` lists the neighbors of `v` in cyclic order. Faces are the orbits
//! of the dart successor map: the dart after `(u -> v)` is `(v -> w)` where
//! `w` follows `u` in the rotation at `v`. With this convention a sphere
//! embedding satisfies `V - E + F = 2`.

use crate::error::Error;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RotationSystem {
    adj: Vec<Vec<u8>>,
}

impl RotationSystem {
    pub fn new(adj: Vec<Vec<u8>>) -> Result<RotationSystem> {
        let rs = RotationSystem { adj };
        rs.validate()?;
        Ok(rs)
    }

    /// Builds without validation; used by internal constructions that are
    /// correct by construction (still checked in debug builds).
    pub(crate) fn new_unchecked(adj: Vec<Vec<u8>>) -> RotationSystem {
        let rs = RotationSystem { adj };
        debug_assert!(rs.validate().is_ok(), "invalid rotation system");
        rs
    }

    /// The oriented tetrahedron; seed of the triangulation enumeration.
    pub fn tetrahedron() -> RotationSystem {
        RotationSystem::new_unchecked(vec![
            vec![1, 2, 3],
            vec![0, 3, 2],
            vec![0, 1, 3],
            vec![0, 2, 1],
        ])
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[u8] {
        &self.adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&(v as u8))
    }

    /// Undirected edges with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v as usize {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    fn position_of(&self, v: usize, target: u8) -> usize {
        self.adj[v]
            .iter()
            .position(|&x| x == target)
            .expect("neighbor present in rotation")
    }

    /// Traces all faces; each face is the cyclic sequence of vertices along
    /// its boundary walk.
    pub fn faces(&self) -> Vec<Vec<u8>> {
        let n = self.n();
        let mut seen = vec![vec![false; 0]; n];
        for v in 0..n {
            seen[v] = vec![false; self.adj[v].len()];
        }
        let mut faces = Vec::new();
        for u in 0..n {
            for pos in 0..self.adj[u].len() {
                if seen[u][pos] {
                    continue;
                }
                // Walk the face containing dart (u -> adj[u][pos]).
                let mut cycle = Vec::new();
                let (mut cu, mut cpos) = (u, pos);
                loop {
                    if seen[cu][cpos] {
                        break;
                    }
                    seen[cu][cpos] = true;
                    cycle.push(cu as u8);
                    let cv = self.adj[cu][cpos] as usize;
                    let back = self.position_of(cv, cu as u8);
                    let npos = (back + 1) % self.adj[cv].len();
                    cu = cv;
                    cpos = npos;
                }
                faces.push(cycle);
            }
        }
        faces
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w as usize);
                }
            }
        }
        count == n
    }

    fn connected_avoiding(&self, skip: &[usize]) -> bool {
        let n = self.n();
        let mut blocked = vec![false; n];
        for &s in skip {
            blocked[s] = true;
        }
        let start = match (0..n).find(|&v| !blocked[v]) {
            Some(v) => v,
            None => return true,
        };
        let mut seen = vec![false; n];
        let mut stack = vec![start];
        seen[start] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                let w = w as usize;
                if !blocked[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n - skip.len()
    }

    /// Vertex connectivity at least 3 (for n >= 4).
    pub fn is_three_connected(&self) -> bool {
        let n = self.n();
        if n < 4 {
            return false;
        }
        if self.adj.iter().any(|a| a.len() < 3) {
            return false;
        }
        if !self.is_connected() {
            return false;
        }
        for a in 0..n {
            for b in a + 1..n {
                if !self.connected_avoiding(&[a, b]) {
                    return false;
                }
            }
        }
        true
    }

    /// Structural validation: symmetric simple adjacency, connectedness, and
    /// the Euler relation for a sphere embedding.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::structural("empty graph"));
        }
        for (v, nbrs) in self.adj.iter().enumerate() {
            let mut sorted: Vec<u8> = nbrs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != nbrs.len() {
                return Err(Error::structural(format!("repeated neighbor at {v}")));
            }
            for &w in nbrs {
                let w = w as usize;
                if w >= n {
                    return Err(Error::structural(format!("neighbor {w} out of range")));
                }
                if w == v {
                    return Err(Error::structural(format!("self-loop at {v}")));
                }
                if !self.adj[w].contains(&(v as u8)) {
                    return Err(Error::structural(format!("asymmetric edge {v}-{w}")));
                }
            }
        }
        if !self.is_connected() {
            return Err(Error::structural("graph not connected"));
        }
        let f = self.faces().len();
        let e = self.edge_count();
        if n + f != e + 2 {
            return Err(Error::structural(format!(
                "Euler relation violated: V={n} E={e} F={f}"
            )));
        }
        Ok(())
    }

    /// Removes one undirected edge, keeping both rotations otherwise intact.
    pub fn delete_edge(&self, u: usize, v: usize) -> RotationSystem {
        let mut adj = self.adj.clone();
        adj[u].retain(|&x| x != v as u8);
        adj[v].retain(|&x| x != u as u8);
        RotationSystem { adj }
    }

    /// Splits vertex `v` of a triangulation into an edge. The rotation of `v`
    /// is cut at neighbor positions `i` and `j`; one endpoint keeps the arc
    /// `c_i..c_j`, the other keeps `c_j..c_i`, and the cut neighbors become
    /// adjacent to both. The result is again a simple triangulation.
    pub fn split_vertex(&self, v: usize, i: usize, j: usize) -> RotationSystem {
        let deg = self.adj[v].len();
        assert!(i != j && i < deg && j < deg);
        let old = self.adj[v].clone();
        let new_idx = self.n() as u8;
        let vv = v as u8;

        let mut arc_a = Vec::new(); // c_i ..= c_j, stays with v
        let mut t = i;
        loop {
            arc_a.push(old[t]);
            if t == j {
                break;
            }
            t = (t + 1) % deg;
        }
        let mut arc_b = Vec::new(); // c_j ..= c_i, goes to the new vertex
        let mut t = j;
        loop {
            arc_b.push(old[t]);
            if t == i {
                break;
            }
            t = (t + 1) % deg;
        }

        let mut adj = self.adj.clone();
        // v keeps arc A followed by the new vertex.
        adj[v] = arc_a.clone();
        adj[v].push(new_idx);
        // The new vertex gets arc B followed by v.
        let mut new_rot = arc_b.clone();
        new_rot.push(vv);
        adj.push(new_rot);

        let ci = old[i];
        let cj = old[j];
        // Cut neighbors see both halves; interior arc vertices are rewired to
        // their half. Orders derived from the face-tracing convention.
        for x in 0..adj.len() - 1 {
            let x8 = x as u8;
            if x8 == ci {
                let p = adj[x].iter().position(|&y| y == vv).unwrap();
                adj[x][p] = vv;
                adj[x].insert(p + 1, new_idx);
            } else if x8 == cj {
                let p = adj[x].iter().position(|&y| y == vv).unwrap();
                adj[x][p] = new_idx;
                adj[x].insert(p + 1, vv);
            } else if arc_b.iter().any(|&y| y == x8) && x8 != ci && x8 != cj {
                if let Some(p) = adj[x].iter().position(|&y| y == vv) {
                    adj[x][p] = new_idx;
                }
            }
        }
        RotationSystem { adj }
    }

    /// Relabels vertices by `perm` (new index of old vertex v is perm[v]).
    pub fn relabel(&self, perm: &[usize]) -> RotationSystem {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for v in 0..n {
            adj[perm[v]] = self.adj[v].iter().map(|&w| perm[w as usize] as u8).collect();
        }
        RotationSystem { adj }
    }

    /// Mirror image: every rotation reversed.
    pub fn mirrored(&self) -> RotationSystem {
        let adj = self
            .adj
            .iter()
            .map(|nbrs| nbrs.iter().rev().copied().collect())
            .collect();
        RotationSystem { adj }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_faces() {
        let t = RotationSystem::tetrahedron();
        let faces = t.faces();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));
        assert!(t.validate().is_ok());
        assert!(t.is_three_connected());
    }

    #[test]
    fn split_produces_triangulations() {
        let t = RotationSystem::tetrahedron();
        // Split every vertex every way; all results must be 5-vertex
        // triangulations.
        for v in 0..4 {
            let deg = t.degree(v);
            for i in 0..deg {
                for j in 0..deg {
                    if i == j {
                        continue;
                    }
                    let s = t.split_vertex(v, i, j);
                    assert!(s.validate().is_ok(), "invalid split v={v} i={i} j={j}");
                    assert_eq!(s.n(), 5);
                    assert!(s.faces().iter().all(|f| f.len() == 3));
                    assert!(s.is_three_connected());
                }
            }
        }
    }

    #[test]
    fn delete_edge_keeps_euler() {
        let t = RotationSystem::tetrahedron();
        let mut g = t;
        for v in 0..4 {
            let deg = g.degree(v);
            for i in 0..deg {
                for j in 0..deg {
                    if i != j {
                        g = g.split_vertex(v, i, j);
                        let (u, w) = g.edges()[0];
                        let d = g.delete_edge(u, w);
                        // May or may not stay 3-connected, but Euler holds
                        // whenever it stays connected.
                        if d.is_connected() {
                            assert!(d.validate().is_ok());
                        }
                        return;
                    }
                }
            }
        }
    }

    #[test]
    fn mirror_and_relabel_preserve_validity() {
        let t = RotationSystem::tetrahedron();
        assert!(t.mirrored().validate().is_ok());
        assert!(t.relabel(&[3, 2, 1, 0]).validate().is_ok());
    }
}
