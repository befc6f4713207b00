//! Sight graphs: who sees whom.

use std::collections::BTreeSet;

use crate::entropy::VarSet;
use crate::error::{Error, Result};
use crate::perm::{Permutation, Symmetric};

/// Vertices `0..n`; an undirected edge means mutual sight, a directed edge
/// `(u, v)` means `v` sees `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SightGraph {
    n: usize,
    undirected: BTreeSet<(usize, usize)>,
    directed: BTreeSet<(usize, usize)>,
}

impl SightGraph {
    /// Undirected pairs are stored with the smaller endpoint first.
    pub fn new(
        n: usize,
        undirected: impl IntoIterator<Item = (usize, usize)>,
        directed: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if n == 0 || n > crate::entropy::MAX_VARIABLES {
            return Err(Error::InvalidGraph(format!("vertex count {n} out of range")));
        }
        let check = |u: usize, v: usize| -> Result<()> {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} leaves 1..{n}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {}", u + 1)));
            }
            Ok(())
        };
        let mut und = BTreeSet::new();
        for (u, v) in undirected {
            check(u, v)?;
            und.insert((u.min(v), u.max(v)));
        }
        let mut dir = BTreeSet::new();
        for (u, v) in directed {
            check(u, v)?;
            if und.contains(&(u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!(
                    "{} -> {} duplicates an undirected edge",
                    u + 1,
                    v + 1
                )));
            }
            dir.insert((u, v));
        }
        Ok(SightGraph { n, undirected: und, directed: dir })
    }

    /// Builds from 1-based labels.
    pub fn from_labels(
        n: usize,
        undirected: &[(usize, usize)],
        directed: &[(usize, usize)],
    ) -> Result<Self> {
        let shift = |&(u, v): &(usize, usize)| -> Result<(usize, usize)> {
            if u == 0 || v == 0 {
                return Err(Error::InvalidGraph("vertex labels start at 1".into()));
            }
            Ok((u - 1, v - 1))
        };
        let und = undirected.iter().map(shift).collect::<Result<Vec<_>>>()?;
        let dir = directed.iter().map(shift).collect::<Result<Vec<_>>>()?;
        SightGraph::new(n, und, dir)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        SightGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)), [])
    }

    pub fn complete(n: usize) -> Result<Self> {
        SightGraph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))), [])
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn undirected_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.undirected
    }

    pub fn directed_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.directed
    }

    pub fn is_undirected(&self) -> bool {
        self.directed.is_empty()
    }

    /// Vertices seen by `v`.
    pub fn in_neighbors(&self, v: usize) -> VarSet {
        let mut set = VarSet::EMPTY;
        for &(a, b) in &self.undirected {
            if a == v {
                set = set.with(b);
            } else if b == v {
                set = set.with(a);
            }
        }
        for &(a, b) in &self.directed {
            if b == v {
                set = set.with(a);
            }
        }
        set
    }

    /// Undirected degree of `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.undirected.iter().filter(|(a, b)| *a == v || *b == v).count()
    }

    /// Mutual adjacency of the undirected part, as bitmasks.
    pub fn undirected_adjacency(&self) -> Vec<VarSet> {
        let mut adj = vec![VarSet::EMPTY; self.n];
        for &(a, b) in &self.undirected {
            adj[a] = adj[a].with(b);
            adj[b] = adj[b].with(a);
        }
        adj
    }

    /// Adjacency ignoring direction.
    pub fn any_adjacency(&self) -> Vec<VarSet> {
        let mut adj = self.undirected_adjacency();
        for &(a, b) in &self.directed {
            adj[a] = adj[a].with(b);
            adj[b] = adj[b].with(a);
        }
        adj
    }

    /// Same vertices with only the undirected edges.
    pub fn undirected_part(&self) -> SightGraph {
        SightGraph { directed: BTreeSet::new(), ..self.clone() }
    }

    /// No cycle in the sight relation; an undirected edge is a 2-cycle.
    pub fn is_acyclic(&self) -> bool {
        if !self.undirected.is_empty() {
            return false;
        }
        let mut indegree = vec![0usize; self.n];
        for &(_, b) in &self.directed {
            indegree[b] += 1;
        }
        let mut ready: Vec<usize> = (0..self.n).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = ready.pop() {
            removed += 1;
            for &(a, b) in &self.directed {
                if a == v {
                    indegree[b] -= 1;
                    if indegree[b] == 0 {
                        ready.push(b);
                    }
                }
            }
        }
        removed == self.n
    }

    /// The `t`-blow-up: vertex `(v, i)` is `v * t + i`, and `(u, i)` sees
    /// `(v, j)` exactly when `u` sees `v`.
    pub fn blow_up(&self, t: usize) -> Result<SightGraph> {
        if t == 0 {
            return Err(Error::InvalidGraph("blow-up factor must be at least 1".into()));
        }
        let id = |v: usize, i: usize| v * t + i;
        let mut und = Vec::new();
        for &(a, b) in &self.undirected {
            for i in 0..t {
                for j in 0..t {
                    und.push((id(a, i), id(b, j)));
                }
            }
        }
        let mut dir = Vec::new();
        for &(a, b) in &self.directed {
            for i in 0..t {
                for j in 0..t {
                    dir.push((id(a, i), id(b, j)));
                }
            }
        }
        SightGraph::new(self.n * t, und, dir)
    }

    pub fn edge_count(&self) -> usize {
        self.undirected.len() + self.directed.len()
    }

    /// The image of the graph under a vertex permutation.
    pub fn relabeled(&self, p: &Permutation) -> Result<SightGraph> {
        if p.degree() != self.n {
            return Err(Error::InvalidPermutation(format!(
                "permutation of degree {} on a graph with {} vertices",
                p.degree(),
                self.n
            )));
        }
        SightGraph::new(
            self.n,
            self.undirected.iter().map(|&(a, b)| (p.image(a), p.image(b))),
            self.directed.iter().map(|&(a, b)| (p.image(a), p.image(b))),
        )
    }
}

impl Symmetric for SightGraph {
    fn describe(&self) -> String {
        format!("sight graph on {} vertices", self.n)
    }

    fn label_offset(&self) -> usize {
        1
    }

    fn is_invariant_under(&self, p: &Permutation) -> Result<bool> {
        if p.degree() > self.n {
            return Err(Error::InvalidPermutation(format!(
                "{} moves points beyond the {} vertices",
                p.to_cycle_string(1),
                self.n
            )));
        }
        let map: Vec<usize> =
            (0..self.n).map(|v| if v < p.degree() { p.image(v) } else { v }).collect();
        let und: BTreeSet<(usize, usize)> = self
            .undirected
            .iter()
            .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
            .collect();
        let dir: BTreeSet<(usize, usize)> =
            self.directed.iter().map(|&(a, b)| (map[a], map[b])).collect();
        Ok(und == self.undirected && dir == self.directed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_overlaps() {
        assert!(SightGraph::new(2, [(0, 0)], []).is_err());
        assert!(SightGraph::new(2, [(0, 1)], [(1, 0)]).is_err());
        assert!(SightGraph::new(2, [(0, 2)], []).is_err());
    }

    #[test]
    fn neighbourhoods() {
        let g = SightGraph::new(3, [(0, 1)], [(2, 0)]).unwrap();
        assert_eq!(g.in_neighbors(0), VarSet(0b110));
        assert_eq!(g.in_neighbors(2), VarSet::EMPTY);
        assert!(!g.is_acyclic());
        let path = SightGraph::new(3, [], [(0, 1), (1, 2)]).unwrap();
        assert!(path.is_acyclic());
        let tri = SightGraph::new(3, [], [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!tri.is_acyclic());
    }

    #[test]
    fn blow_up_sizes() {
        let c5 = SightGraph::cycle(5).unwrap();
        let b = c5.blow_up(2).unwrap();
        assert_eq!(b.vertex_count(), 10);
        assert_eq!(b.edge_count(), 20);
        assert_eq!(c5.blow_up(1).unwrap(), c5);
        assert!(c5.blow_up(0).is_err());
        // copies of one vertex are never adjacent
        assert!(!b.undirected_adjacency()[0].contains(1));
    }

    #[test]
    fn dihedral_symmetry_of_c5() {
        let c5 = SightGraph::cycle(5).unwrap();
        let rot = Permutation::parse_cycles("(12345)", 5, 1).unwrap();
        let swap = Permutation::parse_cycles("(12)", 5, 1).unwrap();
        assert!(c5.is_invariant_under(&rot).unwrap());
        assert!(!c5.is_invariant_under(&swap).unwrap());
    }
}
