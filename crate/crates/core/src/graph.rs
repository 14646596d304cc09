//! Finite simple graphs, whisker graphs, independent sets, cliques and the
//! friendly independent sets used by the depth certificates.
//!
//! Vertices are `0..n` in the API and `1..=n` in every text format.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal, VariableSpace};

/// Graphs are stored as adjacency bitmasks, so at most 64 vertices.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "too many vertices");
        Self { n, adj: vec![0; n] }
    }

    /// Builds a graph from 0-based edges. Rejects loops and out-of-range
    /// endpoints; repeated edges collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_VERTICES} vertices supported"
            )));
        }
        let mut g = Self::empty(n);
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {{{}, {}}} has an endpoint outside 1..{n}",
                    a + 1,
                    b + 1
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("loop at vertex {}", a + 1)));
            }
            g.adj[a] |= 1 << b;
            g.adj[b] |= 1 << a;
        }
        Ok(g)
    }

    /// Same as [`SimpleGraph::new`] with 1-based vertex labels.
    pub fn from_labeled_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::InvalidArgument("vertex labels start at 1".into()));
        }
        Self::new(n, edges.iter().map(|&(a, b)| (a - 1, b - 1)))
    }

    /// Graph whose edges are selected by `mask` over the pairs `(i, j)`,
    /// `i < j`, in lexicographic order.
    pub fn from_edge_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::empty(n);
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> bit & 1 == 1 {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
                bit += 1;
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        Self::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn all_vertices(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in bits(self.adj[i] >> (i + 1) << (i + 1)) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.reachable(0) == self.all_vertices()
    }

    fn reachable(&self, start: usize) -> u64 {
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let new = self.adj[v] & !seen;
            seen |= new;
            stack.extend(bits(new));
        }
        seen
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut left = self.all_vertices();
        let mut count = 0;
        while left != 0 {
            let v = left.trailing_zeros() as usize;
            left &= !self.reachable(v);
            count += 1;
        }
        count
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in bits(self.adj[v]) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn predicates(&self) -> GraphPredicates {
        GraphPredicates {
            connected: self.is_connected(),
            bipartite: self.is_bipartite(),
        }
    }

    pub fn is_acyclic(&self) -> bool {
        self.edge_count() + self.component_count() == self.n
    }

    /// The edge mask inverse to [`SimpleGraph::from_edge_mask`].
    pub fn edge_mask(&self) -> u64 {
        let mut mask = 0u64;
        let mut bit = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(i, j) {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        mask
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen >> p & 1 == 1 {
                return Err(Error::InvalidArgument(
                    "not a permutation of the vertices".into(),
                ));
            }
            seen |= 1 << p;
        }
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        Self::new(
            self.n,
            self.edges().into_iter().map(|(a, b)| (perm[a], perm[b])),
        )
    }

    /// The relabeling with the smallest edge mask; equal for isomorphic
    /// graphs. Brute force over all permutations, so `n <= 9`.
    pub fn canonical_form(&self) -> Self {
        assert!(self.n <= 9, "canonical form limited to 9 vertices");
        let edges = self.edges();
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best = u64::MAX;
        loop {
            let mut g = Self::empty(self.n);
            for &(a, b) in &edges {
                g.adj[perm[a]] |= 1 << perm[b];
                g.adj[perm[b]] |= 1 << perm[a];
            }
            best = best.min(g.edge_mask());
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Self::from_edge_mask(self.n, best)
    }

    /// Removes all edges at vertex `v` (the vertex stays, isolated).
    pub fn isolate(&self, v: usize) -> Self {
        let mut g = self.clone();
        for w in bits(g.adj[v]) {
            g.adj[w] &= !(1 << v);
        }
        g.adj[v] = 0;
        g
    }

    pub fn is_independent(&self, set: u64) -> bool {
        bits(set).all(|v| self.adj[v] & set == 0)
    }

    pub fn is_maximal_independent(&self, set: u64) -> bool {
        if !self.is_independent(set) {
            return false;
        }
        // every outside vertex must see the set
        bits(self.all_vertices() & !set).all(|v| self.adj[v] & set != 0)
    }

    /// The whisker graph: vertex `i'` is `n + i`.
    pub fn whisker(&self) -> WhiskerGraph {
        let n = self.n;
        let edges = self.edges().into_iter().chain((0..n).map(|i| (i, n + i)));
        WhiskerGraph {
            base: self.clone(),
            graph: SimpleGraph::new(2 * n, edges).expect("whisker graph has at most 64 vertices"),
        }
    }

    /// Edge ideal in the first `n` variables of `space`.
    pub fn edge_ideal(&self, space: impl Into<Arc<VariableSpace>>) -> Result<MonomialIdeal> {
        let space = space.into();
        if space.len() < self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: space.len(),
            });
        }
        let nv = space.len();
        let gens = self
            .edges()
            .into_iter()
            .map(|(a, b)| Monomial::product_of(nv, [a, b]));
        MonomialIdeal::minimalize(space, gens)
    }

    /// Edge ideal of the whisker graph in `x1..xn, y1..yn`.
    pub fn whisker_ideal(&self) -> MonomialIdeal {
        self.whisker()
            .graph
            .edge_ideal(VariableSpace::whisker(self.n))
            .expect("whisker space has 2n variables")
    }

    pub fn maximal_independent_sets(&self) -> Vec<Vec<usize>> {
        let complement: Vec<u64> = (0..self.n)
            .map(|v| self.all_vertices() & !self.adj[v] & !(1 << v))
            .collect();
        sorted_sets(bron_kerbosch_all(&complement, self.all_vertices()))
    }

    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        sorted_sets(bron_kerbosch_all(&self.adj, self.all_vertices()))
    }

    /// `Γ_S(G)`: vertices `S` (sorted), `{i, j}` an edge when some vertex
    /// outside `S` is adjacent to both.
    pub fn gamma_graph(&self, set: &[usize]) -> Result<GammaGraph> {
        let mask = self.vertex_mask(set)?;
        if !self.is_independent(mask) {
            return Err(Error::Precondition(format!(
                "{} is not an independent set",
                fmt_set(set)
            )));
        }
        let vertices: Vec<usize> = bits(mask).collect();
        let outside = self.all_vertices() & !mask;
        let mut edges = Vec::new();
        for (a, &i) in vertices.iter().enumerate() {
            for (b, &j) in vertices.iter().enumerate().skip(a + 1) {
                if self.adj[i] & self.adj[j] & outside != 0 {
                    edges.push((a, b));
                }
            }
        }
        let graph = SimpleGraph::new(vertices.len(), edges)?;
        Ok(GammaGraph { vertices, graph })
    }

    fn vertex_mask(&self, set: &[usize]) -> Result<u64> {
        let mut mask = 0u64;
        for &v in set {
            if v >= self.n {
                return Err(Error::InvalidArgument(format!(
                    "vertex {} out of range",
                    v + 1
                )));
            }
            mask |= 1 << v;
        }
        Ok(mask)
    }

    /// A maximal independent set `S` with `Γ_S(G)` connected.
    ///
    /// Greedy clique covering: start from the lowest vertex of the first
    /// maximal clique; while the closed neighborhood `U` of `S` is not all
    /// of `V`, take the lowest-indexed maximal clique that meets `U` without
    /// lying inside it and add its lowest vertex outside `U`. The added
    /// vertex shares a clique with a vertex of `U \ S`, which is a common
    /// neighbor with some member of `S`. The loop stops only when `S`
    /// dominates `G`, so the result is already maximal; it is extended and
    /// re-verified anyway, with an exhaustive search as fallback.
    pub fn friendly_independent_set(&self) -> Result<Vec<usize>> {
        if self.n == 0 {
            return Err(Error::Precondition("graph has no vertices".into()));
        }
        if !self.is_connected() {
            return Err(Error::Precondition("graph is not connected".into()));
        }
        if let Some(s) = self.greedy_friendly_set() {
            return Ok(s);
        }
        for s in self.maximal_independent_sets() {
            if self.gamma_graph(&s)?.graph.is_connected() {
                return Ok(s);
            }
        }
        Err(Error::Internal(
            "no maximal independent set with connected Γ on a connected graph".into(),
        ))
    }

    fn greedy_friendly_set(&self) -> Option<Vec<usize>> {
        let cliques: Vec<u64> = self
            .maximal_cliques()
            .iter()
            .map(|c| c.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect();
        let mut set = 1u64 << cliques[0].trailing_zeros();
        let closed_nbhd = |s: u64| bits(s).fold(s, |m, v| m | self.adj[v]);
        let mut covered = closed_nbhd(set);
        while covered != self.all_vertices() {
            let next = cliques
                .iter()
                .find(|&&c| c & covered != 0 && c & !covered != 0)?;
            let v = (next & !covered).trailing_zeros() as usize;
            set |= 1 << v;
            covered = closed_nbhd(set);
        }
        // extend greedily to a maximal independent set
        for v in 0..self.n {
            if set & (1 << v) == 0 && self.adj[v] & set == 0 {
                set |= 1 << v;
            }
        }
        let s: Vec<usize> = bits(set).collect();
        let ok =
            self.is_maximal_independent(set) && self.gamma_graph(&s).ok()?.graph.is_connected();
        ok.then_some(s)
    }

    /// Spanning tree of `Γ_S(G)` with edges in leaf order.
    ///
    /// A BFS tree is re-rooted at its lowest leaf; that leaf gets label 1,
    /// its neighbor label 2, and every further vertex the next label in BFS
    /// order, so that `α_1 = {1, 2}` and `α_j = {i_j, j + 1}` with
    /// `2 <= i_j <= j` for `j > 1`. Witnesses are the lowest common neighbors
    /// outside `S`.
    pub fn spanning_tree_leaf_order(&self, set: &[usize]) -> Result<LeafOrderedTree> {
        let gamma = self.gamma_graph(set)?;
        if !gamma.graph.is_connected() {
            return Err(Error::Precondition(format!(
                "Γ_S(G) is not connected for S = {}",
                fmt_set(set)
            )));
        }
        let s = gamma.vertices.len();
        if s == 1 {
            return Ok(LeafOrderedTree {
                labels: gamma.vertices,
                edges: Vec::new(),
                witnesses: Vec::new(),
            });
        }
        let tree = bfs_tree(&gamma.graph, 0);
        let root = (0..s)
            .find(|&v| tree[v].count_ones() == 1)
            .expect("trees have leaves");
        // BFS from the leaf, neighbors in increasing order
        let mut label_of = vec![usize::MAX; s];
        let mut order = vec![root];
        label_of[root] = 0;
        let mut edges = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for w in bits(tree[v]) {
                if label_of[w] == usize::MAX {
                    label_of[w] = order.len();
                    edges.push((label_of[v], order.len()));
                    order.push(w);
                }
            }
        }
        let labels: Vec<usize> = order.iter().map(|&v| gamma.vertices[v]).collect();
        let outside = self.all_vertices() & !self.vertex_mask(&labels)?;
        let witnesses = edges
            .iter()
            .map(|&(a, b)| {
                let common = self.adj[labels[a]] & self.adj[labels[b]] & outside;
                common.trailing_zeros() as usize
            })
            .collect();
        Ok(LeafOrderedTree {
            labels,
            edges,
            witnesses,
        })
    }

    /// Text form: `n` on the first line, then `i j` per edge (1-based).
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (a, b) in self.edges() {
            s.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let bad = |msg: &str| Error::Parse {
                line: lineno,
                msg: msg.to_string(),
            };
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| bad("expected integers")))
                .collect::<Result<_>>()?;
            match (n, nums.as_slice()) {
                (None, [count]) => n = Some(*count),
                (None, _) => return Err(bad("first line must be the vertex count")),
                (Some(_), [a, b]) if *a >= 1 && *b >= 1 => edges.push((a - 1, b - 1)),
                (Some(_), _) => return Err(bad("expected a 1-based pair `i j`")),
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            msg: "empty graph file".into(),
        })?;
        Self::new(n, edges)
    }

    /// Compact id such as `n4:1-2,2-3`.
    pub fn id(&self) -> String {
        let e: Vec<String> = self
            .edges()
            .iter()
            .map(|(a, b)| format!("{}-{}", a + 1, b + 1))
            .collect();
        format!("n{}:{}", self.n, e.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphPredicates {
    pub connected: bool,
    pub bipartite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WhiskerGraph {
    pub base: SimpleGraph,
    pub graph: SimpleGraph,
}

/// `Γ_S(G)` with its vertices relabeled `0..|S|` in increasing order of the
/// original vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    pub vertices: Vec<usize>,
    pub graph: SimpleGraph,
}

/// Spanning tree of `Γ_S(G)` in leaf order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafOrderedTree {
    /// `labels[l]` is the original vertex carrying tree label `l + 1`.
    pub labels: Vec<usize>,
    /// `α_1, .., α_{s-1}` in 0-based label space: `(i_j, j)`.
    pub edges: Vec<(usize, usize)>,
    /// `v_j`, an original vertex outside `S` adjacent to both ends of `α_j`.
    pub witnesses: Vec<usize>,
}

impl LeafOrderedTree {
    /// Checks the leaf-order labeling and the witnesses against `g`.
    pub fn validate(&self, g: &SimpleGraph) -> bool {
        let s = self.labels.len();
        if self.edges.len() + 1 != s || self.witnesses.len() != self.edges.len() {
            return false;
        }
        let in_set = self.labels.iter().fold(0u64, |m, &v| m | 1 << v);
        self.edges.iter().enumerate().all(|(j, &(i, new))| {
            let shape = if j == 0 {
                i == 0 && new == 1
            } else {
                new == j + 1 && (1..=j).contains(&i)
            };
            let w = self.witnesses[j];
            shape
                && in_set >> w & 1 == 0
                && g.has_edge(self.labels[i], w)
                && g.has_edge(w, self.labels[new])
        })
    }
}

/// Iterates the set bits of a mask, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            b
        })
    })
}

fn fmt_set(set: &[usize]) -> String {
    let v: Vec<String> = set.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn sorted_sets(masks: Vec<u64>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = masks.into_iter().map(|m| bits(m).collect()).collect();
    out.sort();
    out
}

/// All maximal cliques of the graph with adjacency `adj`, restricted to
/// `universe` (Tomita-style pivoting).
fn bron_kerbosch_all(adj: &[u64], universe: u64) -> Vec<u64> {
    fn rec(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        let pivot = bits(p | x)
            .max_by_key(|&u| (adj[u] & p).count_ones())
            .expect("p | x nonempty");
        for v in bits(p & !adj[pivot]) {
            rec(adj, r | 1 << v, p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    if universe == 0 {
        return out;
    }
    rec(adj, 0, universe, 0, &mut out);
    out
}

fn bfs_tree(g: &SimpleGraph, root: usize) -> Vec<u64> {
    let mut tree = vec![0u64; g.n()];
    let mut seen = 1u64 << root;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in bits(g.neighbors(v) & !seen) {
            seen |= 1 << w;
            tree[v] |= 1 << w;
            tree[w] |= 1 << v;
            queue.push_back(w);
        }
    }
    tree
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All `n^(n-2)` labeled trees on `n` vertices by Prüfer decoding.
pub fn enumerate_trees(n: usize) -> Result<Vec<SimpleGraph>> {
    if !(1..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "tree size {n} outside 1..=8"
        )));
    }
    if n == 1 {
        return Ok(vec![SimpleGraph::empty(1)]);
    }
    let count = (n as u64).pow(n as u32 - 2);
    let mut out = Vec::with_capacity(count as usize);
    let mut seq = vec![0usize; n - 2];
    for mut code in 0..count {
        for s in seq.iter_mut() {
            *s = (code % n as u64) as usize;
            code /= n as u64;
        }
        out.push(prufer_decode(n, &seq));
    }
    Ok(out)
}

/// The labeled tree on `seq.len() + 2` vertices with Prüfer code `seq`.
pub fn prufer_decode(n: usize, seq: &[usize]) -> SimpleGraph {
    assert_eq!(seq.len() + 2, n, "Prüfer code length must be n - 2");
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    SimpleGraph::new(n, edges).expect("Prüfer edges are valid")
}

/// Every labeled graph on `n` vertices, as edge masks (see
/// [`SimpleGraph::from_edge_mask`]).
pub fn edge_mask_count(n: usize) -> u64 {
    assert!(n <= 11, "2^(n choose 2) masks only enumerable for n <= 11");
    1u64 << (n * n.saturating_sub(1) / 2)
}
