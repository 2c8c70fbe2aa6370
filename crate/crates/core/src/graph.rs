//! Generic undirected graphs: payload-keyed vertices, induced subgraphs,
//! maximal-clique enumeration (Bron-Kerbosch with degeneracy ordering and
//! pivoting), and isomorphism verification against an explicitly supplied
//! vertex map. No isomorphism search happens anywhere.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset;
use crate::error::{Error, Result};

/// Simple graph with canonical string keys as vertex payloads and sorted
/// neighbor lists. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    name: String,
    keys: Vec<String>,
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Builds from keys and an edge list. Loops are rejected, duplicate
    /// edges collapse, duplicate keys are rejected.
    pub fn new(name: impl Into<String>, keys: Vec<String>, edges: &[(u32, u32)]) -> Result<Graph> {
        let n = keys.len();
        {
            let mut sorted = keys.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != n {
                return Err(Error::InvalidInput("duplicate vertex payload keys".into()));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidInput(format!("edge ({u},{v}) out of range")));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            name: name.into(),
            keys,
            adj,
            edge_count: edge_count / 2,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.keys.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn key(&self, u: u32) -> &str {
        &self.keys[u as usize]
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: u32) -> usize {
        self.adj[u as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as sorted (u, v) pairs with u < v.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if (u as u32) < v {
                    out.push((u as u32, v));
                }
            }
        }
        out
    }

    /// One adjacency bitset row per vertex (scratch; rebuilt on demand).
    pub(crate) fn adjacency_bitsets(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count();
        self.adj
            .iter()
            .map(|list| bitset::from_indices(n, list))
            .collect()
    }

    /// Subgraph induced by the vertices where `keep` is true; payload keys
    /// are preserved. Also returns the original index of each new vertex.
    pub fn induced(&self, keep: &[bool]) -> Result<(Graph, Vec<u32>)> {
        if keep.len() != self.vertex_count() {
            return Err(Error::ShapeMismatch("induced: predicate length".into()));
        }
        let selected: Vec<u32> = (0..self.vertex_count() as u32)
            .filter(|&u| keep[u as usize])
            .collect();
        let mut new_index = vec![u32::MAX; self.vertex_count()];
        for (i, &u) in selected.iter().enumerate() {
            new_index[u as usize] = i as u32;
        }
        let keys = selected.iter().map(|&u| self.keys[u as usize].clone()).collect();
        let mut edges = Vec::new();
        for &u in &selected {
            for &v in self.neighbors(u) {
                if u < v && keep[v as usize] {
                    edges.push((new_index[u as usize], new_index[v as usize]));
                }
            }
        }
        let g = Graph::new(format!("{}[induced]", self.name), keys, &edges)?;
        Ok((g, selected))
    }

    /// Degeneracy order: repeatedly remove a minimum-degree vertex
    /// (smallest index on ties).
    pub fn degeneracy_order(&self) -> Vec<u32> {
        let n = self.vertex_count();
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; n];
        let max_deg = deg.iter().copied().max().unwrap_or(0);
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); max_deg + 1];
        for (u, &d) in deg.iter().enumerate() {
            buckets[d].push(u as u32);
        }
        let mut order = Vec::with_capacity(n);
        let mut cursor = 0usize;
        while order.len() < n {
            while cursor <= max_deg && buckets[cursor].is_empty() {
                cursor += 1;
            }
            if cursor > max_deg {
                break;
            }
            // smallest index first among the current bucket
            let pos = buckets[cursor]
                .iter()
                .enumerate()
                .min_by_key(|(_, &u)| u)
                .map(|(i, _)| i)
                .unwrap();
            let u = buckets[cursor].swap_remove(pos);
            if removed[u as usize] || deg[u as usize] != cursor {
                continue;
            }
            removed[u as usize] = true;
            order.push(u);
            for &v in self.neighbors(u) {
                if !removed[v as usize] {
                    let d = deg[v as usize];
                    deg[v as usize] = d - 1;
                    buckets[d - 1].push(v);
                    if d - 1 < cursor {
                        cursor = d - 1;
                    }
                }
            }
        }
        order
    }

    /// All maximal cliques, each as a sorted vertex list, the list itself
    /// sorted lexicographically. Deterministic regardless of rayon
    /// scheduling. Errors out once more than `limit` cliques are found.
    ///
    /// The outer loop follows a degeneracy order; each root's subproblem
    /// is renumbered into its neighborhood so the recursion works on
    /// neighborhood-width bitsets.
    pub fn maximal_cliques(&self, limit: usize) -> Result<Vec<Vec<u32>>> {
        let n = self.vertex_count();
        if n == 0 {
            return Ok(Vec::new());
        }
        let global_bits = self.adjacency_bitsets();
        let order = self.degeneracy_order();
        let mut rank = vec![0u32; n];
        for (i, &u) in order.iter().enumerate() {
            rank[u as usize] = i as u32;
        }
        let counter = std::sync::atomic::AtomicUsize::new(0);
        let chunks: Vec<Result<Vec<Vec<u32>>>> = order
            .par_iter()
            .map(|&v| {
                let locals = self.neighbors(v);
                let (nbr_local, _) = local_adjacency(n, &global_bits, locals);
                let d = locals.len();
                let mut p = bitset::zeroed(d);
                let mut x = bitset::zeroed(d);
                for (i, &u) in locals.iter().enumerate() {
                    if rank[u as usize] > rank[v as usize] {
                        bitset::set(&mut p, i as u32);
                    } else {
                        bitset::set(&mut x, i as u32);
                    }
                }
                let mut out = Vec::new();
                let mut r = Vec::new();
                bron_kerbosch(&nbr_local, &mut r, p, x, &mut out, &counter, limit)?;
                Ok(out
                    .into_iter()
                    .map(|c| {
                        let mut clique: Vec<u32> =
                            c.into_iter().map(|i| locals[i as usize]).collect();
                        clique.push(v);
                        clique
                    })
                    .collect())
            })
            .collect();
        let mut cliques = Vec::new();
        for chunk in chunks {
            cliques.extend(chunk?);
        }
        for c in cliques.iter_mut() {
            c.sort_unstable();
        }
        cliques.sort_unstable();
        Ok(cliques)
    }

    /// Maximal cliques of the whole graph that contain `v`: maximal
    /// cliques of the subgraph induced on N(v), extended by v. Used by the
    /// assisted special-set search.
    pub fn maximal_cliques_containing(&self, v: u32, limit: usize) -> Result<Vec<Vec<u32>>> {
        let n = self.vertex_count();
        let global_bits = self.adjacency_bitsets();
        let locals = self.neighbors(v);
        let (nbr_local, _) = local_adjacency(n, &global_bits, locals);
        let d = locals.len();
        let counter = std::sync::atomic::AtomicUsize::new(0);
        let mut p = bitset::zeroed(d);
        for i in 0..d {
            bitset::set(&mut p, i as u32);
        }
        let x = bitset::zeroed(d);
        let mut out = Vec::new();
        let mut r = Vec::new();
        bron_kerbosch(&nbr_local, &mut r, p, x, &mut out, &counter, limit)?;
        let mut cliques: Vec<Vec<u32>> = out
            .into_iter()
            .map(|c| {
                let mut clique: Vec<u32> = c.into_iter().map(|i| locals[i as usize]).collect();
                clique.push(v);
                clique.sort_unstable();
                clique
            })
            .collect();
        cliques.sort_unstable();
        Ok(cliques)
    }

    pub fn is_clique(&self, members: &[u32]) -> bool {
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                if u == v || !self.has_edge(u, v) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `members` is a clique and no outside vertex is adjacent to
    /// every member.
    pub fn is_maximal_clique(&self, members: &[u32]) -> bool {
        if members.is_empty() || !self.is_clique(members) {
            return false;
        }
        // candidates must be neighbors of the first member
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        if members.len() == 1 {
            return self.degree(members[0]) == 0;
        }
        'outer: for &w in self.neighbors(members[0]) {
            if sorted.binary_search(&w).is_ok() {
                continue;
            }
            for &m in members {
                if !self.has_edge(w, m) {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Verifies that `f` (self-index -> other-index) is a bijection that
    /// preserves adjacency and non-adjacency in both directions. Never
    /// searches for a map.
    pub fn check_isomorphism_with_map(&self, other: &Graph, f: &[u32]) -> IsoCheck {
        if f.len() != self.vertex_count() || other.vertex_count() != self.vertex_count() {
            return IsoCheck::not_bijective("vertex counts differ or map is not total");
        }
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        for &img in f {
            if img as usize >= n || seen[img as usize] {
                return IsoCheck::not_bijective("map is not a bijection");
            }
            seen[img as usize] = true;
        }
        for u in 0..n as u32 {
            let mut mapped: Vec<u32> = self.neighbors(u).iter().map(|&w| f[w as usize]).collect();
            mapped.sort_unstable();
            let target = other.neighbors(f[u as usize]);
            if mapped != target {
                // locate the first discrepancy for the report
                for &w in self.neighbors(u) {
                    if !other.has_edge(f[u as usize], f[w as usize]) {
                        return IsoCheck {
                            isomorphic: false,
                            violation: Some(IsoViolation::EdgeNotPreserved { u, v: w }),
                        };
                    }
                }
                for &x in target {
                    if !mapped.binary_search(&x).is_ok() {
                        return IsoCheck {
                            isomorphic: false,
                            violation: Some(IsoViolation::EdgeNotReflected {
                                u: f[u as usize],
                                v: x,
                            }),
                        };
                    }
                }
            }
        }
        IsoCheck {
            isomorphic: true,
            violation: None,
        }
    }
}

/// Result of an explicit-map isomorphism check.
#[derive(Debug, Clone, Serialize)]
pub struct IsoCheck {
    pub isomorphic: bool,
    pub violation: Option<IsoViolation>,
}

impl IsoCheck {
    fn not_bijective(msg: &str) -> IsoCheck {
        IsoCheck {
            isomorphic: false,
            violation: Some(IsoViolation::NotBijective(msg.into())),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum IsoViolation {
    NotBijective(String),
    /// Edge (u, v) of the source has no image edge.
    EdgeNotPreserved { u: u32, v: u32 },
    /// Edge (u, v) of the target has no preimage edge.
    EdgeNotReflected { u: u32, v: u32 },
}

/// A clique together with the names of the graphs it has been verified
/// maximal in.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CliqueSet {
    pub members: Vec<u32>,
    pub maximal_in: Vec<String>,
}

impl CliqueSet {
    pub fn new(mut members: Vec<u32>) -> CliqueSet {
        members.sort_unstable();
        CliqueSet {
            members,
            maximal_in: Vec::new(),
        }
    }

    /// Checks maximality in `g` and records g's name on success.
    pub fn verify_maximal_in(&mut self, g: &Graph) -> bool {
        let ok = g.is_maximal_clique(&self.members);
        if ok && !self.maximal_in.iter().any(|n| n == g.name()) {
            self.maximal_in.push(g.name().to_string());
        }
        ok
    }
}

/// Adjacency of the subgraph induced on `locals`, renumbered to local
/// indices. Also returns the global-to-local lookup.
fn local_adjacency(
    n: usize,
    global_bits: &[Vec<u64>],
    locals: &[u32],
) -> (Vec<Vec<u64>>, Vec<u32>) {
    let d = locals.len();
    let mut global_to_local = vec![u32::MAX; n];
    for (i, &u) in locals.iter().enumerate() {
        global_to_local[u as usize] = i as u32;
    }
    let local_mask = bitset::from_indices(n, locals);
    let mut nbr_local = vec![bitset::zeroed(d); d];
    for (i, &u) in locals.iter().enumerate() {
        let mut tmp = global_bits[u as usize].clone();
        bitset::and_into(&mut tmp, &local_mask);
        for g in bitset::iter_ones(&tmp) {
            bitset::set(&mut nbr_local[i], global_to_local[g as usize]);
        }
    }
    (nbr_local, global_to_local)
}

fn bron_kerbosch(
    nbr: &[Vec<u64>],
    r: &mut Vec<u32>,
    p: Vec<u64>,
    x: Vec<u64>,
    out: &mut Vec<Vec<u32>>,
    counter: &std::sync::atomic::AtomicUsize,
    limit: usize,
) -> Result<()> {
    if bitset::is_empty(&p) {
        if bitset::is_empty(&x) {
            let found = counter.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
            if found > limit {
                return Err(Error::CliqueLimitExceeded { found, limit });
            }
            out.push(r.clone());
        }
        return Ok(());
    }
    // pivot: vertex of P | X maximizing |P & N(u)|, smallest index on ties
    let mut pivot = u32::MAX;
    let mut best = -1i64;
    for u in bitset::iter_ones(&p).chain(bitset::iter_ones(&x)) {
        let score = bitset::and_popcount(&p, &nbr[u as usize]) as i64;
        if score > best || (score == best && u < pivot) {
            best = score;
            pivot = u;
        }
    }
    let mut candidates = p.clone();
    bitset::and_not_into(&mut candidates, &nbr[pivot as usize]);
    let mut p = p;
    let mut x = x;
    for v in bitset::iter_ones(&candidates).collect::<Vec<_>>() {
        let mut np = p.clone();
        bitset::and_into(&mut np, &nbr[v as usize]);
        let mut nx = x.clone();
        bitset::and_into(&mut nx, &nbr[v as usize]);
        r.push(v);
        bron_kerbosch(nbr, r, np, nx, out, counter, limit)?;
        r.pop();
        bitset::clear(&mut p, v);
        bitset::set(&mut x, v);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keyed(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    #[test]
    fn triangle_single_clique() {
        let g = Graph::new("t", keyed(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.maximal_cliques(10).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path_two_cliques() {
        let g = Graph::new("p", keyed(3), &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            g.maximal_cliques(10).unwrap(),
            vec![vec![0, 1], vec![1, 2]]
        );
    }

    #[test]
    fn isolated_vertices_are_cliques() {
        let g = Graph::new("i", keyed(3), &[(0, 1)]).unwrap();
        assert_eq!(
            g.maximal_cliques(10).unwrap(),
            vec![vec![0, 1], vec![2]]
        );
        assert!(g.is_maximal_clique(&[2]));
    }

    #[test]
    fn edge_in_triangle_not_maximal() {
        let g = Graph::new("t", keyed(3), &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(!g.is_maximal_clique(&[0, 1]));
        assert!(g.is_maximal_clique(&[0, 1, 2]));
    }

    #[test]
    fn clique_limit_enforced() {
        // 5 disjoint edges -> 5 maximal cliques
        let edges: Vec<(u32, u32)> = (0..5).map(|i| (2 * i, 2 * i + 1)).collect();
        let g = Graph::new("m", keyed(10), &edges).unwrap();
        match g.maximal_cliques(3) {
            Err(Error::CliqueLimitExceeded { limit: 3, .. }) => {}
            other => panic!("expected limit error, got {other:?}"),
        }
    }

    #[test]
    fn cliques_containing_vertex() {
        let g = Graph::new("t", keyed(4), &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        assert_eq!(
            g.maximal_cliques_containing(2, 100).unwrap(),
            vec![vec![0, 1, 2], vec![2, 3]]
        );
    }

    #[test]
    fn identity_map_isomorphic() {
        let g = Graph::new("g", keyed(4), &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let f: Vec<u32> = (0..4).collect();
        assert!(g.check_isomorphism_with_map(&g, &f).isomorphic);
    }

    #[test]
    fn bad_swap_detected_with_pair() {
        // path 0-1-2: swapping 0 and 1 breaks adjacency
        let g = Graph::new("g", keyed(3), &[(0, 1), (1, 2)]).unwrap();
        let check = g.check_isomorphism_with_map(&g, &[1, 0, 2]);
        assert!(!check.isomorphic);
        assert!(check.violation.is_some());
    }

    #[test]
    fn non_bijective_rejected() {
        let g = Graph::new("g", keyed(3), &[(0, 1)]).unwrap();
        let check = g.check_isomorphism_with_map(&g, &[0, 0, 2]);
        assert!(!check.isomorphic);
        assert!(matches!(check.violation, Some(IsoViolation::NotBijective(_))));
    }

    #[test]
    fn induced_subgraph() {
        let g = Graph::new("g", keyed(4), &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (h, idx) = g.induced(&[true, false, true, true]).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 1); // only 2-3 survives
        assert_eq!(idx, vec![0, 2, 3]);
        assert_eq!(h.key(1), "v2");
        // trivial predicates
        let (all, _) = g.induced(&[true; 4]).unwrap();
        assert_eq!(all.edge_count(), g.edge_count());
        let (none, _) = g.induced(&[false; 4]).unwrap();
        assert_eq!(none.vertex_count(), 0);
    }

    #[test]
    fn induced_composes_with_conjunction() {
        let g = Graph::new("g", keyed(5), &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
        let p1 = [true, true, false, true, true];
        let p2 = [true, false, true, true, true];
        let (g1, idx1) = g.induced(&p1).unwrap();
        let nested_pred: Vec<bool> = idx1.iter().map(|&u| p2[u as usize]).collect();
        let (g12, _) = g1.induced(&nested_pred).unwrap();
        let conj: Vec<bool> = (0..5).map(|i| p1[i] && p2[i]).collect();
        let (gc, _) = g.induced(&conj).unwrap();
        assert_eq!(g12.keys(), gc.keys());
        assert_eq!(g12.edges(), gc.edges());
    }

    #[test]
    fn loops_and_dup_keys_rejected() {
        assert!(Graph::new("g", keyed(2), &[(0, 0)]).is_err());
        assert!(Graph::new("g", vec!["a".into(), "a".into()], &[]).is_err());
    }
}
