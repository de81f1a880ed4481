//! Encoded RS graphs, edge-picking permutations, blocks and multi-blocks,
//! plus their p-pass samples.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hiding::{self, GenParams};
use crate::layered::{concat, concat_all, expand, permute_groups, GroupLayeredGraph, GroupTuple, LayeredGraph, Provenance};
use crate::perm::{extend, join, match_aligned, PermVector, Permutation};
use crate::rs::RsGraph;

/// `t × r` permutations on `[b]`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermMatrix {
    pub t: usize,
    pub r: usize,
    pub b: usize,
    entries: Vec<Permutation>,
}

impl PermMatrix {
    pub fn new(t: usize, r: usize, entries: Vec<Permutation>) -> Result<Self> {
        let b = entries.first().map_or(0, |e| e.len());
        if entries.len() != t * r || entries.iter().any(|e| e.len() != b) {
            return Err(Error::Dimension(format!("need {t}x{r} permutations of equal size")));
        }
        Ok(PermMatrix { t, r, b, entries })
    }

    pub fn identity(t: usize, r: usize, b: usize) -> Self {
        PermMatrix { t, r, b, entries: vec![Permutation::identity(b); t * r] }
    }

    pub fn random<R: Rng + ?Sized>(t: usize, r: usize, b: usize, rng: &mut R) -> Self {
        PermMatrix { t, r, b, entries: (0..t * r).map(|_| Permutation::random(b, rng)).collect() }
    }

    /// Zero-indexed `σ_{i,j}`.
    pub fn get(&self, i: usize, j: usize) -> &Permutation {
        &self.entries[i * self.r + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Permutation) {
        self.entries[i * self.r + j] = p;
    }

    pub fn entries(&self) -> &[Permutation] {
        &self.entries
    }
}

/// A matching index `l` and `r/2` distinct edge indices of that matching,
/// all zero-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTuple {
    pub l: usize,
    pub edges: Vec<usize>,
}

impl EdgeTuple {
    fn check(&self, rs: &RsGraph) -> Result<()> {
        let mut seen = vec![false; rs.r];
        if self.l >= rs.t {
            return Err(Error::InvalidParam(format!("matching {} out of range", self.l + 1)));
        }
        for &e in &self.edges {
            if e >= rs.r || seen[e] {
                return Err(Error::InvalidParam(format!("edge index {} repeated or out of range", e + 1)));
            }
            seen[e] = true;
        }
        Ok(())
    }
}

/// One tuple `(1, left(j), right(j), σ_{i,j})` per RS edge.
pub fn encoded_rs(rs: &RsGraph, sigma: &PermMatrix, tag: Provenance) -> Result<GroupLayeredGraph> {
    if sigma.t != rs.t || sigma.r != rs.r {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, RS graph has t={} r={}",
            sigma.t, sigma.r, rs.t, rs.r
        )));
    }
    let mut g = GroupLayeredGraph::new(rs.n_rs, 2, sigma.b);
    for i in 0..rs.t {
        for j in 0..rs.r {
            g.push(GroupTuple { layer: 0, a1: rs.left_of(i, j), a2: rs.right_of(i, j), sigma: sigma.get(i, j).clone(), tag })?;
        }
    }
    Ok(g)
}

/// `σL = match_aligned({(i, left(e_i))})`, `σR = match_aligned({(right(e_i), i)})`.
pub fn edge_pick(rs: &RsGraph, e: &EdgeTuple) -> Result<(Permutation, Permutation)> {
    e.check(rs)?;
    let ml: Vec<(usize, usize)> = e.edges.iter().enumerate().map(|(i, &j)| (i + 1, rs.left_of(e.l, j) + 1)).collect();
    let mr: Vec<(usize, usize)> = e.edges.iter().enumerate().map(|(i, &j)| (rs.right_of(e.l, j) + 1, i + 1)).collect();
    Ok((match_aligned(&ml, rs.n_rs)?, match_aligned(&mr, rs.n_rs)?))
}

/// `ρ((i−1)b + a) = (i−1)b + σ_{ℓ,e_i}(a)` on `m = (r/2)·b`.
pub fn block_rho(sigma: &PermMatrix, e: &EdgeTuple) -> Permutation {
    join(&PermVector { entries: e.edges.iter().map(|&j| sigma.get(e.l, j).clone()).collect() })
}

/// `PermGroups(σR) ∘ EncodedRS ∘ PermGroups(σL)`: six layers of `n_rs·b`.
pub fn block(rs: &RsGraph, sigma: &PermMatrix, e: &EdgeTuple, player: u32) -> Result<LayeredGraph> {
    let (sl, sr) = edge_pick(rs, e)?;
    let enc = expand(&encoded_rs(rs, sigma, Provenance::Player(player))?);
    let gl = expand(&permute_groups(&sl, sigma.b, Provenance::Referee));
    let gr = expand(&permute_groups(&sr, sigma.b, Provenance::Referee));
    Ok(concat(&gr, &concat(&enc, &gl)))
}

/// `k` rows of `r/2` distinct edge indices: `hyper[i][a]` is the edge that
/// hyperedge `a` uses in layer `i`.
pub type Hypermatching = Vec<Vec<usize>>;

fn check_dims(rs: &RsGraph, sigmas: &[PermMatrix], l: &[usize], hyper: &Hypermatching) -> Result<()> {
    let k = sigmas.len();
    if k == 0 || l.len() != k || hyper.len() != k {
        return Err(Error::Dimension(format!("need k={k} matrices, indices and hypermatching rows")));
    }
    if rs.r % 2 != 0 || hyper.iter().any(|row| row.len() != rs.r / 2) {
        return Err(Error::Dimension(format!("hypermatching rows must have r/2 = {} entries", rs.r / 2)));
    }
    Ok(())
}

fn tuples(l: &[usize], hyper: &Hypermatching) -> Vec<EdgeTuple> {
    l.iter().zip(hyper).map(|(&l, row)| EdgeTuple { l, edges: row.clone() }).collect()
}

/// `Block_1 ∘ ⋯ ∘ Block_k`, consecutive blocks joined on the first
/// `m = (r/2)·b` vertices only.
pub fn multi_block(rs: &RsGraph, sigmas: &[PermMatrix], l: &[usize], hyper: &Hypermatching) -> Result<LayeredGraph> {
    check_dims(rs, sigmas, l, hyper)?;
    let m = rs.r / 2 * sigmas[0].b;
    let blocks = sigmas
        .iter()
        .zip(tuples(l, hyper))
        .enumerate()
        .map(|(i, (s, e))| block(rs, s, &e, i as u32 + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(concat_all(&blocks, Some(m)).expect("k >= 1"))
}

/// The same chain joined with full-width identity matchings. Kept to
/// document why [`multi_block`] joins on a prefix: with more than one RS
/// matching this is in general not a permutation graph.
pub fn multi_block_full_join(rs: &RsGraph, sigmas: &[PermMatrix], l: &[usize], hyper: &Hypermatching) -> Result<LayeredGraph> {
    check_dims(rs, sigmas, l, hyper)?;
    let blocks = sigmas
        .iter()
        .zip(tuples(l, hyper))
        .enumerate()
        .map(|(i, (s, e))| block(rs, s, &e, i as u32 + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok(concat_all(&blocks, None).expect("k >= 1"))
}

/// `ρ_1 ∘ ⋯ ∘ ρ_k`.
pub fn multi_block_rho(sigmas: &[PermMatrix], l: &[usize], hyper: &Hypermatching) -> Permutation {
    join(&crate::hph::recompute_gamma_star(sigmas, l, hyper))
}

/// Block whose two group-permuting gadgets are replaced by samples of the
/// `(p−1)`-pass generator for `extend(σL, b)` and `extend(σR, b)`. At `p = 1`
/// this is [`block`].
pub fn p_block_sample<R: Rng + ?Sized>(
    rs: &RsGraph,
    sigma: &PermMatrix,
    e: &EdgeTuple,
    p: usize,
    player: u32,
    params: &GenParams,
    rng: &mut R,
) -> Result<LayeredGraph> {
    if p == 0 {
        return Err(Error::InvalidParam("p must be at least 1".into()));
    }
    if p == 1 {
        return block(rs, sigma, e, player);
    }
    let (sl, sr) = edge_pick(rs, e)?;
    let b = sigma.b;
    let inner = params.inner(rs.n_rs * b, p - 1)?;
    let gl = hiding::gen_general(&extend(&sl, b), &inner, rng)?.retag(Provenance::Referee);
    let enc = expand(&encoded_rs(rs, sigma, Provenance::Player(player))?);
    let gr = hiding::gen_general(&extend(&sr, b), &inner, rng)?.retag(Provenance::Referee);
    Ok(concat(&gr, &concat(&enc, &gl)))
}

pub fn p_multi_block_sample<R: Rng + ?Sized>(
    rs: &RsGraph,
    sigmas: &[PermMatrix],
    l: &[usize],
    hyper: &Hypermatching,
    p: usize,
    params: &GenParams,
    rng: &mut R,
) -> Result<LayeredGraph> {
    check_dims(rs, sigmas, l, hyper)?;
    let m = rs.r / 2 * sigmas[0].b;
    let blocks = sigmas
        .iter()
        .zip(tuples(l, hyper))
        .enumerate()
        .map(|(i, (s, e))| p_block_sample(rs, s, &e, p, i as u32 + 1, params, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(concat_all(&blocks, Some(m)).expect("k >= 1"))
}
