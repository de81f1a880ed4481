//! Reduction from permutation graphs to bipartite matching, and an exact
//! maximum-matching oracle.

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hiding::{gen_general, vertex_count, GenParams};
use crate::layered::{LayeredGraph, Provenance};
use crate::perm::Permutation;
use crate::stream::EdgeStream;

/// Left side is `L ∪ S` (ids `0..n` then `n..n+half`), right side is
/// `R ∪ T` with the same layout. The canonical matching pairs left `i`
/// with right `i` for `i < n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInstance {
    pub n: usize,
    pub half: usize,
    /// `(left, right)` pairs.
    pub edges: Vec<(usize, usize)>,
    pub tags: Vec<Provenance>,
}

impl BipartiteInstance {
    pub fn side(&self) -> usize {
        self.n + self.half
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.side()];
        for &(l, r) in &self.edges {
            adj[l].push(r);
        }
        adj
    }

    /// Undirected stream with left ids first, then right ids.
    pub fn to_stream(&self) -> EdgeStream {
        let side = self.side();
        let edges = self.edges.iter().map(|&(l, r)| (l, side + r)).collect();
        EdgeStream::new(2 * side, false, edges, Some(self.tags.clone())).expect("ids are in range by construction")
    }
}

/// Builds `H(G)`: `u^l–v^r` for each edge `u→v` of `G`, the canonical
/// matching `v^l–v^r`, `S_i–R(first_i)` and `L(last_i)–T_i` for `i ≤ m/2`.
pub fn bipartite_of(g: &LayeredGraph, m: usize) -> Result<BipartiteInstance> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::InvalidParam(format!("m must be positive and even, got {m}")));
    }
    let half = m / 2;
    if g.depth() < 2 || g.first_size() < half || g.last_size() < half {
        return Err(Error::InvalidParam(format!("graph needs at least {half} sources and sinks in two or more layers")));
    }
    let n = g.num_vertices();
    let off = g.layer_offsets();
    let last = off[g.depth() - 1];
    let mut order: Vec<usize> = (0..g.edges().len()).collect();
    order.sort_by_key(|&i| (g.edges()[i].layer, g.tags()[i]));
    let mut edges = Vec::with_capacity(g.edges().len() + n + m);
    let mut tags = Vec::with_capacity(edges.capacity());
    for i in order {
        let e = g.edges()[i];
        edges.push((off[e.layer as usize] + e.u as usize, off[e.layer as usize + 1] + e.v as usize));
        tags.push(g.tags()[i]);
    }
    for v in 0..n {
        edges.push((v, v));
        tags.push(Provenance::Plumbing);
    }
    for i in 0..half {
        edges.push((n + i, i));
        tags.push(Provenance::Plumbing);
        edges.push((last + i, n + i));
        tags.push(Provenance::Plumbing);
    }
    Ok(BipartiteInstance { n, half, edges, tags })
}

/// `σ_=`: the identity on `[m]`.
pub fn sigma_eq(m: usize) -> Permutation {
    Permutation::identity(m)
}

/// `σ_×`: swaps `[1..m/2]` with `[m/2+1..m]`.
pub fn sigma_cross(m: usize) -> Permutation {
    Permutation::from_zero_based((0..m).map(|i| (i + m / 2) % m).collect()).expect("rotation is a bijection")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub size: usize,
    pub pairs: Vec<(usize, usize)>,
    /// König vertex cover of the same size, proving optimality.
    pub cover_left: Vec<usize>,
    pub cover_right: Vec<usize>,
}

const INF: usize = usize::MAX;

struct HopcroftKarp<'a> {
    adj: &'a [Vec<usize>],
    mate_l: Vec<Option<usize>>,
    mate_r: Vec<Option<usize>>,
    dist: Vec<usize>,
    it: Vec<usize>,
    limit: usize,
}

impl HopcroftKarp<'_> {
    fn bfs(&mut self) -> bool {
        let mut q = VecDeque::new();
        for u in 0..self.adj.len() {
            if self.mate_l[u].is_none() {
                self.dist[u] = 0;
                q.push_back(u);
            } else {
                self.dist[u] = INF;
            }
        }
        self.limit = INF;
        while let Some(u) = q.pop_front() {
            if self.dist[u] >= self.limit {
                continue;
            }
            for &v in &self.adj[u] {
                match self.mate_r[v] {
                    None => {
                        if self.limit == INF {
                            self.limit = self.dist[u] + 1;
                        }
                    }
                    Some(w) if self.dist[w] == INF => {
                        self.dist[w] = self.dist[u] + 1;
                        q.push_back(w);
                    }
                    _ => {}
                }
            }
        }
        self.limit != INF
    }

    fn dfs(&mut self, root: usize) -> bool {
        let mut stack = vec![root];
        while let Some(&u) = stack.last() {
            if self.it[u] < self.adj[u].len() {
                let v = self.adj[u][self.it[u]];
                match self.mate_r[v] {
                    None if self.dist[u] + 1 == self.limit => {
                        for &x in &stack {
                            let y = self.adj[x][self.it[x]];
                            self.mate_l[x] = Some(y);
                            self.mate_r[y] = Some(x);
                        }
                        return true;
                    }
                    Some(w) if self.dist[w] == self.dist[u] + 1 => stack.push(w),
                    _ => self.it[u] += 1,
                }
            } else {
                self.dist[u] = INF;
                stack.pop();
                if let Some(&p) = stack.last() {
                    self.it[p] += 1;
                }
            }
        }
        false
    }
}

/// Exact maximum matching of a bipartite graph given by left adjacency
/// lists over `n_right` right vertices.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Matching {
    let n_left = adj.len();
    let mut hk = HopcroftKarp {
        adj,
        mate_l: vec![None; n_left],
        mate_r: vec![None; n_right],
        dist: vec![INF; n_left],
        it: vec![0; n_left],
        limit: INF,
    };
    while hk.bfs() {
        hk.it.iter_mut().for_each(|x| *x = 0);
        for u in 0..n_left {
            if hk.mate_l[u].is_none() {
                hk.dfs(u);
            }
        }
    }
    // König: Z = vertices reachable from free left vertices by alternating paths.
    let mut zl = vec![false; n_left];
    let mut zr = vec![false; n_right];
    let mut q: VecDeque<usize> = (0..n_left).filter(|&u| hk.mate_l[u].is_none()).collect();
    q.iter().for_each(|&u| zl[u] = true);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if !zr[v] {
                zr[v] = true;
                if let Some(w) = hk.mate_r[v] {
                    if !zl[w] {
                        zl[w] = true;
                        q.push_back(w);
                    }
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = hk.mate_l.iter().enumerate().filter_map(|(u, v)| v.map(|v| (u, v))).collect();
    Matching {
        size: pairs.len(),
        pairs,
        cover_left: (0..n_left).filter(|&u| !zl[u]).collect(),
        cover_right: (0..n_right).filter(|&v| zr[v]).collect(),
    }
}

/// Checks that `mm` is a matching of the graph and that its cover covers
/// every edge with the same cardinality.
pub fn verify_certificate(adj: &[Vec<usize>], n_right: usize, mm: &Matching) -> Result<()> {
    let edge_set: HashSet<(usize, usize)> = adj.iter().enumerate().flat_map(|(u, vs)| vs.iter().map(move |&v| (u, v))).collect();
    let (mut used_l, mut used_r) = (vec![false; adj.len()], vec![false; n_right]);
    for &(u, v) in &mm.pairs {
        if !edge_set.contains(&(u, v)) {
            return Err(Error::CorruptInstance(format!("matched pair ({u},{v}) is not an edge")));
        }
        if std::mem::replace(&mut used_l[u], true) || std::mem::replace(&mut used_r[v], true) {
            return Err(Error::CorruptInstance(format!("vertex reused by pair ({u},{v})")));
        }
    }
    let (cl, cr): (HashSet<usize>, HashSet<usize>) = (mm.cover_left.iter().copied().collect(), mm.cover_right.iter().copied().collect());
    if let Some(&(u, v)) = edge_set.iter().find(|(u, v)| !cl.contains(u) && !cr.contains(v)) {
        return Err(Error::CorruptInstance(format!("edge ({u},{v}) is not covered")));
    }
    if cl.len() + cr.len() != mm.pairs.len() || mm.size != mm.pairs.len() {
        return Err(Error::CorruptInstance("cover and matching sizes differ".into()));
    }
    Ok(())
}

/// Maximum matching of `H`, certificate verified.
pub fn max_matching(inst: &BipartiteInstance) -> Result<Matching> {
    let adj = inst.adjacency();
    let mm = hopcroft_karp(&adj, inst.side());
    verify_certificate(&adj, inst.side(), &mm)?;
    Ok(mm)
}

/// Maximum matching of an undirected stream whose graph is bipartite; the
/// sides are recovered by 2-colouring.
pub fn max_matching_of_edges(n: usize, edges: &[(usize, usize)]) -> Result<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color = vec![u8::MAX; n];
    for s in 0..n {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    q.push_back(v);
                } else if color[v] == color[u] {
                    return Err(Error::Unsupported("graph is not bipartite".into()));
                }
            }
        }
    }
    let (mut lid, mut rid) = (vec![0; n], vec![0; n]);
    let (mut nl, mut nr) = (0, 0);
    for v in 0..n {
        if color[v] == 0 {
            lid[v] = nl;
            nl += 1;
        } else {
            rid[v] = nr;
            nr += 1;
        }
    }
    let mut badj = vec![Vec::new(); nl];
    for &(u, v) in edges {
        let (l, r) = if color[u] == 0 { (u, v) } else { (v, u) };
        badj[lid[l]].push(rid[r]);
    }
    Ok(hopcroft_karp(&badj, nr).size)
}

/// Counts augmenting paths of the canonical matching by explicit search in
/// `H`. Exponential; meant for small graphs.
pub fn count_augmenting_paths(inst: &BipartiteInstance) -> u64 {
    let adj = inst.adjacency();
    let n = inst.n;
    // From right vertex r: free (in T) ends a path, otherwise follow M to left r.
    fn from_right(r: usize, n: usize, adj: &[Vec<usize>]) -> u64 {
        if r >= n {
            return 1;
        }
        adj[r].iter().filter(|&&v| v != r).map(|&v| from_right(v, n, adj)).sum()
    }
    (n..inst.side()).map(|s| adj[s].iter().map(|&r| from_right(r, n, &adj)).sum::<u64>()).sum()
}

/// Number of source-to-sink paths in `G` from the first `half` sources to
/// the first `half` sinks.
pub fn count_prefix_paths(g: &LayeredGraph, half: usize) -> u64 {
    let d = g.depth();
    let mut ways: Vec<u64> = (0..g.first_size()).map(|i| u64::from(i < half)).collect();
    for layer in 0..d.saturating_sub(1) {
        let mut next = vec![0u64; g.layers()[layer + 1]];
        for e in g.edges().iter().filter(|e| e.layer as usize == layer) {
            next[e.v as usize] += ways[e.u as usize];
        }
        ways = next;
    }
    ways.iter().take(half).sum()
}

/// Walks the symmetric difference of `mm` with the canonical matching from
/// each `S` vertex and returns the number of vertex-disjoint augmenting
/// paths it contains.
pub fn disjoint_augmenting_paths(inst: &BipartiteInstance, mm: &Matching) -> Result<usize> {
    let side = inst.side();
    let mut mate_l = vec![None; side];
    for &(u, v) in &mm.pairs {
        mate_l[u] = Some(v);
    }
    let mut seen_r = vec![false; side];
    let mut paths = 0;
    for s in inst.n..side {
        let Some(mut r) = mate_l[s] else { continue };
        loop {
            if std::mem::replace(&mut seen_r[r], true) {
                return Err(Error::CorruptInstance(format!("augmenting paths share right vertex {r}")));
            }
            if r >= inst.n {
                paths += 1;
                break;
            }
            // r's canonical partner is left r; follow its new partner.
            match mate_l[r] {
                Some(next) if next != r => r = next,
                _ => return Err(Error::CorruptInstance(format!("path from S vertex {s} stops at left {r}"))),
            }
        }
    }
    Ok(paths)
}

#[derive(Clone, Debug, Serialize)]
pub struct DichotomyReport {
    pub m: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    pub trials: usize,
    /// Vertices of each sampled graph.
    pub n: usize,
    pub eq_perfect: usize,
    pub cross_size_n: usize,
    /// `1 − n/(n + m/2)`, from `(1−ε)(n+m/2) = n`.
    pub eps_gap: f64,
    /// `m/(4n)`.
    pub eps_quarter: f64,
    pub violations: Vec<String>,
    pub holds: bool,
}

pub fn dichotomy_check<R: Rng + ?Sized>(params: &GenParams, trials: usize, rng: &mut R) -> Result<DichotomyReport> {
    let m = params.m;
    let n = vertex_count(params, true)?;
    let half = m / 2;
    let mut rep = DichotomyReport {
        m,
        b: params.b,
        k: params.k,
        p: params.p,
        trials,
        n,
        eq_perfect: 0,
        cross_size_n: 0,
        eps_gap: 1.0 - n as f64 / (n + half) as f64,
        eps_quarter: m as f64 / (4.0 * n as f64),
        violations: Vec::new(),
        holds: false,
    };
    for t in 0..trials {
        let g = gen_general(&sigma_eq(m), params, rng)?;
        let inst = bipartite_of(&g, m)?;
        let mm = max_matching(&inst)?;
        match disjoint_augmenting_paths(&inst, &mm) {
            Ok(paths) if mm.size == n + half && paths == half => rep.eq_perfect += 1,
            Ok(paths) => rep.violations.push(format!("trial {t}: σ_= gave size {} with {paths} paths", mm.size)),
            Err(e) => rep.violations.push(format!("trial {t}: {e}")),
        }
        let g = gen_general(&sigma_cross(m), params, rng)?;
        let mm = max_matching(&bipartite_of(&g, m)?)?;
        if mm.size == n {
            rep.cross_size_n += 1;
        } else {
            rep.violations.push(format!("trial {t}: σ_× gave size {} instead of {n}", mm.size));
        }
    }
    rep.holds = rep.violations.is_empty();
    Ok(rep)
}
