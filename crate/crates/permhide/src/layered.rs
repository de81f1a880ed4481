//! Layered DAGs, group-layered gadgets, concatenation and permutation
//! extraction by reachability.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{extend, Permutation};

/// Which party's input determined an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    /// Player `i` (one-indexed): edges fixed by the permutation matrix Σ^(i).
    Player(u32),
    /// Edges fixed by the referee's input (L, M, Γ) or by its private coins.
    Referee,
    /// Edges fixed by the public parameters alone.
    Plumbing,
}

impl Provenance {
    pub fn code(&self) -> String {
        match self {
            Provenance::Player(i) => format!("p{i}"),
            Provenance::Referee => "r".into(),
            Provenance::Plumbing => "f".into(),
        }
    }

    pub fn from_code(s: &str) -> Result<Self> {
        match s {
            "r" => Ok(Provenance::Referee),
            "f" => Ok(Provenance::Plumbing),
            _ => s
                .strip_prefix('p')
                .and_then(|n| n.parse().ok())
                .map(Provenance::Player)
                .ok_or_else(|| Error::Parse(format!("unknown provenance tag {s:?}"))),
        }
    }
}

/// An edge from vertex `u` of layer `layer` to vertex `v` of layer `layer+1`
/// (all zero-indexed).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub layer: u32,
    pub u: u32,
    pub v: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGraph {
    layers: Vec<usize>,
    edges: Vec<Edge>,
    tags: Vec<Provenance>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    layers: Vec<usize>,
    edges: Vec<[usize; 3]>,
}

impl LayeredGraph {
    pub fn new(layers: Vec<usize>) -> Self {
        LayeredGraph { layers, edges: Vec::new(), tags: Vec::new() }
    }

    pub fn add_edge(&mut self, layer: usize, u: usize, v: usize, tag: Provenance) -> Result<()> {
        if layer + 1 >= self.layers.len() || u >= self.layers[layer] || v >= self.layers[layer + 1] {
            return Err(Error::InvalidParam(format!(
                "edge ({},{},{}) does not join consecutive layers",
                layer + 1,
                u + 1,
                v + 1
            )));
        }
        self.edges.push(Edge { layer: layer as u32, u: u as u32, v: v as u32 });
        self.tags.push(tag);
        Ok(())
    }

    fn push_unchecked(&mut self, layer: usize, u: usize, v: usize, tag: Provenance) {
        self.edges.push(Edge { layer: layer as u32, u: u as u32, v: v as u32 });
        self.tags.push(tag);
    }

    pub fn layers(&self) -> &[usize] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tags(&self) -> &[Provenance] {
        &self.tags
    }

    pub fn num_vertices(&self) -> usize {
        self.layers.iter().sum()
    }

    pub fn first_size(&self) -> usize {
        self.layers.first().copied().unwrap_or(0)
    }

    pub fn last_size(&self) -> usize {
        self.layers.last().copied().unwrap_or(0)
    }

    /// Global zero-indexed id of the first vertex of each layer.
    pub fn layer_offsets(&self) -> Vec<usize> {
        let mut acc = 0;
        self.layers
            .iter()
            .map(|&n| {
                let o = acc;
                acc += n;
                o
            })
            .collect()
    }

    /// Overwrites every edge's provenance.
    pub fn retag(mut self, tag: Provenance) -> Self {
        self.tags.iter_mut().for_each(|t| *t = tag);
        self
    }

    pub fn to_json(&self) -> String {
        let j = GraphJson {
            layers: self.layers.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| [e.layer as usize + 1, e.u as usize + 1, e.v as usize + 1])
                .collect(),
        };
        serde_json::to_string(&j).expect("graph serializes")
    }

    /// Reads the JSON dump; provenance is set to plumbing unless a side-table
    /// is attached afterwards with [`LayeredGraph::with_tags`].
    pub fn from_json(s: &str) -> Result<Self> {
        let j: GraphJson = serde_json::from_str(s)?;
        let mut g = LayeredGraph::new(j.layers);
        for [i, u, v] in j.edges {
            if i == 0 || u == 0 || v == 0 {
                return Err(Error::Parse(format!("edge [{i},{u},{v}] is not one-indexed")));
            }
            g.add_edge(i - 1, u - 1, v - 1, Provenance::Plumbing)?;
        }
        Ok(g)
    }

    pub fn provenance_json(&self) -> String {
        let codes: Vec<String> = self.tags.iter().map(|t| t.code()).collect();
        serde_json::to_string(&codes).expect("tags serialize")
    }

    pub fn with_tags(mut self, tags: Vec<Provenance>) -> Result<Self> {
        if tags.len() != self.edges.len() {
            return Err(Error::SizeMismatch { left: self.edges.len(), right: tags.len() });
        }
        self.tags = tags;
        Ok(self)
    }
}

/// Two layers of size `m` joined by `i → σ(i)`.
pub fn basic(sigma: &Permutation) -> LayeredGraph {
    basic_tagged(sigma, Provenance::Plumbing)
}

pub fn basic_tagged(sigma: &Permutation, tag: Provenance) -> LayeredGraph {
    let m = sigma.len();
    let mut g = LayeredGraph::new(vec![m, m]);
    for i in 0..m {
        g.push_unchecked(0, i, sigma.at(i), tag);
    }
    g
}

/// Edge tuple `(i, a1, a2, σ)` of a group-layered graph, zero-indexed:
/// connects `(a1, j)` in layer `i` to `(a2, σ(j))` in layer `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTuple {
    pub layer: usize,
    pub a1: usize,
    pub a2: usize,
    pub sigma: Permutation,
    pub tag: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupLayeredGraph {
    pub w: usize,
    pub d: usize,
    pub b: usize,
    pub tuples: Vec<GroupTuple>,
}

impl GroupLayeredGraph {
    pub fn new(w: usize, d: usize, b: usize) -> Self {
        GroupLayeredGraph { w, d, b, tuples: Vec::new() }
    }

    pub fn push(&mut self, t: GroupTuple) -> Result<()> {
        if t.layer + 1 >= self.d || t.a1 >= self.w || t.a2 >= self.w || t.sigma.len() != self.b {
            return Err(Error::Dimension(format!(
                "tuple ({},{},{},{:?}) does not fit w={} d={} b={}",
                t.layer + 1,
                t.a1 + 1,
                t.a2 + 1,
                t.sigma,
                self.w,
                self.d,
                self.b
            )));
        }
        self.tuples.push(t);
        Ok(())
    }
}

/// Materializes tuples; group vertex `(a, j)` becomes index `a·b + j`.
pub fn expand(g: &GroupLayeredGraph) -> LayeredGraph {
    let mut out = LayeredGraph::new(vec![g.w * g.b; g.d]);
    let mut tuples: Vec<&GroupTuple> = g.tuples.iter().collect();
    tuples.sort_by_key(|t| t.layer);
    for t in tuples {
        for j in 0..g.b {
            out.push_unchecked(t.layer, t.a1 * g.b + j, t.a2 * g.b + t.sigma.at(j), t.tag);
        }
    }
    out
}

/// The group-permuting graph: tuples `(1, i, σ(i), id)`.
pub fn permute_groups(sigma: &Permutation, b: usize, tag: Provenance) -> GroupLayeredGraph {
    let mut g = GroupLayeredGraph::new(sigma.len(), 2, b);
    for i in 0..sigma.len() {
        g.tuples.push(GroupTuple { layer: 0, a1: i, a2: sigma.at(i), sigma: Permutation::identity(b), tag });
    }
    g
}

/// `G1 ∘ G2`: traverses `g2` first, then an identity matching from the first
/// `min(|Last(G2)|, |First(G1)|)` vertices of `Last(G2)` into `First(G1)`,
/// then `g1`. A permutation graph for `σ1∘σ2` when `g1`, `g2` are ones for
/// `σ1`, `σ2`.
pub fn concat(g1: &LayeredGraph, g2: &LayeredGraph) -> LayeredGraph {
    concat_prefix(g1, g2, usize::MAX)
}

/// Like [`concat`] but joins at most `width` vertices. Multi-block chains
/// need this: a full-width join lets paths leave a block through the groups
/// beyond `Last_[m]` and re-enter the next block's RS layer.
pub fn concat_prefix(g1: &LayeredGraph, g2: &LayeredGraph, width: usize) -> LayeredGraph {
    let mut layers = g2.layers.clone();
    layers.extend_from_slice(&g1.layers);
    let mut out = LayeredGraph {
        layers,
        edges: Vec::with_capacity(g1.edges.len() + g2.edges.len() + g1.first_size()),
        tags: Vec::with_capacity(g1.edges.len() + g2.edges.len() + g1.first_size()),
    };
    out.edges.extend_from_slice(&g2.edges);
    out.tags.extend_from_slice(&g2.tags);
    let join_layer = g2.depth() - 1;
    let k = g2.last_size().min(g1.first_size()).min(width);
    for i in 0..k {
        out.push_unchecked(join_layer, i, i, Provenance::Plumbing);
    }
    let shift = g2.depth() as u32;
    out.edges.extend(g1.edges.iter().map(|e| Edge { layer: e.layer + shift, ..*e }));
    out.tags.extend_from_slice(&g1.tags);
    out
}

/// Folds `concat` right to left: `gs[0] ∘ gs[1] ∘ ⋯`.
pub fn concat_all(gs: &[LayeredGraph], width: Option<usize>) -> Option<LayeredGraph> {
    let mut iter = gs.iter().rev();
    let mut acc = iter.next()?.clone();
    for g in iter {
        acc = concat_prefix(g, &acc, width.unwrap_or(usize::MAX));
    }
    Some(acc)
}

/// For each of the first `sources` vertices of `First(G)`, the set of vertices
/// of `Last(G)` with index `< sinks` it reaches.
pub fn reach_sets(g: &LayeredGraph, sources: usize, sinks: usize) -> Vec<Vec<usize>> {
    let words = sources.div_ceil(64).max(1);
    let d = g.depth();
    if d == 0 {
        return vec![Vec::new(); sources];
    }
    // bucket edges by layer
    let mut count = vec![0usize; d + 1];
    for e in &g.edges {
        count[e.layer as usize + 1] += 1;
    }
    for i in 0..d {
        count[i + 1] += count[i];
    }
    let mut order = vec![0u32; g.edges.len()];
    let mut fill = count.clone();
    for (idx, e) in g.edges.iter().enumerate() {
        order[fill[e.layer as usize]] = idx as u32;
        fill[e.layer as usize] += 1;
    }
    let mut cur = vec![0u64; g.layers[0] * words];
    for s in 0..sources.min(g.layers[0]) {
        cur[s * words + s / 64] |= 1 << (s % 64);
    }
    for l in 0..d - 1 {
        let mut next = vec![0u64; g.layers[l + 1] * words];
        for &idx in &order[count[l]..count[l + 1]] {
            let e = g.edges[idx as usize];
            let (u, v) = (e.u as usize, e.v as usize);
            for w in 0..words {
                next[v * words + w] |= cur[u * words + w];
            }
        }
        cur = next;
    }
    let last = g.layers[d - 1];
    let mut out = vec![Vec::new(); sources];
    for t in 0..sinks.min(last) {
        for w in 0..words {
            let mut bits = cur[t * words + w];
            while bits != 0 {
                let s = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if s < sources {
                    out[s].push(t);
                }
            }
        }
    }
    out
}

/// Returns σ if every source `i ≤ m` reaches exactly one of the first `m`
/// sinks and those sinks are distinct.
pub fn extract_permutation(g: &LayeredGraph, m: usize) -> Result<Permutation> {
    if g.first_size() < m || g.last_size() < m {
        return Err(Error::NotPermutationGraph(format!(
            "first/last layers have {}/{} vertices, need {m}",
            g.first_size(),
            g.last_size()
        )));
    }
    let reach = reach_sets(g, m, m);
    let mut map = Vec::with_capacity(m);
    for (s, r) in reach.iter().enumerate() {
        if r.len() != 1 {
            let sinks: Vec<usize> = r.iter().map(|t| t + 1).collect();
            return Err(Error::NotPermutationGraph(format!("source {} reaches sinks {:?}", s + 1, sinks)));
        }
        map.push(r[0]);
    }
    Permutation::from_zero_based(map)
        .map_err(|_| Error::NotPermutationGraph("two sources reach the same sink".into()))
}

/// Permutation graph for `extend(σ, b)`; convenience used by tests.
pub fn permute_groups_expanded(sigma: &Permutation, b: usize) -> (LayeredGraph, Permutation) {
    (expand(&permute_groups(sigma, b, Provenance::Plumbing)), extend(sigma, b))
}
