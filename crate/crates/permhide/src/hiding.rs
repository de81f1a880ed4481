//! Permutation-hiding generators: simple (one equipartition), general
//! (through a sorting-network decomposition), and their p-pass recursion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::p_multi_block_sample;
use crate::error::{Error, Result};
use crate::hph::sample_hidden;
use crate::layered::{basic_tagged, concat, concat_all, concat_prefix, LayeredGraph, Provenance};
use crate::perm::{compose, inverse, is_simple, join, swap_perm, vec, Equipartition, Permutation};
use crate::rs::{trivial_rs, RsGraph};
use crate::sorting::{decompose, decomposition_partitions};

pub const DEFAULT_MAX_P: usize = 3;
pub const DEFAULT_MAX_VERTICES: usize = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenParams {
    pub m: usize,
    pub b: usize,
    pub k: usize,
    pub p: usize,
    /// `n_rs = rs_multiplier · r`, so the trivial RS graph has
    /// `t = rs_multiplier²` matchings.
    pub rs_multiplier: usize,
    pub max_p: usize,
    pub max_vertices: usize,
}

impl GenParams {
    pub fn new(m: usize, b: usize, k: usize, p: usize) -> Result<Self> {
        let params = GenParams { m, b, k, p, rs_multiplier: 2, max_p: DEFAULT_MAX_P, max_vertices: DEFAULT_MAX_VERTICES };
        params.validate()?;
        Ok(params)
    }

    pub fn with_rs_multiplier(mut self, c: usize) -> Result<Self> {
        self.rs_multiplier = c;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 2 || self.m < self.b || self.m % self.b != 0 {
            return Err(Error::Divisibility(format!("need b >= 2 dividing m, got m={} b={}", self.m, self.b)));
        }
        if self.k == 0 || self.p == 0 || self.rs_multiplier == 0 {
            return Err(Error::InvalidParam("k, p and the RS multiplier must be positive".into()));
        }
        if self.p > self.max_p {
            return Err(Error::InvalidParam(format!("p={} exceeds the recursion cap {}", self.p, self.max_p)));
        }
        Ok(())
    }

    /// `r = 2m/b`.
    pub fn r(&self) -> usize {
        2 * self.m / self.b
    }

    pub fn n_rs(&self) -> usize {
        self.rs_multiplier * self.r()
    }

    pub fn rs(&self) -> RsGraph {
        trivial_rs(self.n_rs(), self.r()).expect("r divides n_rs by construction")
    }

    /// Parameters for the recursive gadgets on `x` elements at pass level `p`.
    pub fn inner(&self, x: usize, p: usize) -> Result<GenParams> {
        let out = GenParams { m: x, p, ..self.clone() };
        out.validate()?;
        Ok(out)
    }

    fn check_budget(&self, general: bool) -> Result<()> {
        let n = vertex_count(self, general)?;
        if n > self.max_vertices {
            return Err(Error::InvalidParam(format!("sample would have {n} vertices, cap is {}", self.max_vertices)));
        }
        Ok(())
    }
}

/// Hides a Lex-simple `ρ`: `MultiBlock ∘ G_{p−1}(join Γ)` with
/// `Γ* ∘ Γ = vec(ρ)`.
fn gen_simple_lex<R: Rng + ?Sized>(rho: &Permutation, params: &GenParams, rng: &mut R) -> Result<LayeredGraph> {
    let rs = params.rs();
    let target = vec(rho, params.b)?;
    let h = sample_hidden(rs.r, rs.t, params.b, params.k, &target, rng)?;
    let mb = p_multi_block_sample(&rs, &h.sigmas, &h.l, &h.hyper, params.p, params, rng)?;
    let shift = join(&h.gamma);
    let gadget = if params.p == 1 {
        basic_tagged(&shift, Provenance::Referee)
    } else {
        gen_general(&shift, &params.inner(params.m, params.p - 1)?, rng)?.retag(Provenance::Referee)
    };
    Ok(concat_prefix(&mb, &gadget, params.m))
}

/// Samples a permutation graph for a `P`-simple `ρ`. For `P ≠ Lex` the
/// Lex-simple `ρ' = swap∘ρ∘swap⁻¹` is hidden and wrapped as
/// `basic(swap⁻¹) ∘ G(ρ') ∘ basic(swap)`.
pub fn gen_simple<R: Rng + ?Sized>(rho: &Permutation, part: &Equipartition, params: &GenParams, rng: &mut R) -> Result<LayeredGraph> {
    if rho.len() != params.m || part.m() != params.m || part.b() != params.b {
        return Err(Error::Dimension(format!("ρ and P must live on [{}] with groups of {}", params.m, params.b)));
    }
    if !is_simple(rho, part) {
        return Err(Error::NotSimple(format!("{rho:?} is not simple on the given partition")));
    }
    params.validate()?;
    if part.is_lex() {
        return gen_simple_lex(rho, params, rng);
    }
    let swap = swap_perm(part);
    let swap_inv = inverse(&swap);
    let conj = compose(&swap, &compose(rho, &swap_inv)?)?;
    let inner = gen_simple_lex(&conj, params, rng)?;
    Ok(concat(&basic_tagged(&swap_inv, Provenance::Plumbing), &concat(&inner, &basic_tagged(&swap, Provenance::Plumbing))))
}

/// Decomposes `σ = γ_1 ∘ ⋯ ∘ γ_d` with the sorting network and chains one
/// simple sample per layer.
pub fn gen_general<R: Rng + ?Sized>(sigma: &Permutation, params: &GenParams, rng: &mut R) -> Result<LayeredGraph> {
    if sigma.len() != params.m {
        return Err(Error::Dimension(format!("σ has size {}, params expect {}", sigma.len(), params.m)));
    }
    params.check_budget(true)?;
    let d = decompose(sigma, params.b)?;
    let parts = d
        .gammas
        .iter()
        .zip(&d.partitions)
        .map(|(g, p)| gen_simple(g, p, params, rng))
        .collect::<Result<Vec<_>>>()?;
    concat_all(&parts, None).ok_or_else(|| Error::InvalidParam("empty decomposition".into()))
}

/// Top-level simple sampler with the vertex budget enforced.
pub fn gen_simple_checked<R: Rng + ?Sized>(rho: &Permutation, part: &Equipartition, params: &GenParams, rng: &mut R) -> Result<LayeredGraph> {
    params.check_budget(false)?;
    gen_simple(rho, part, params, rng)
}

/// `N_{p}(x)` for the general generator, with `N_0(x) = 2x`.
fn general_count(x: usize, p: usize, params: &GenParams) -> Result<usize> {
    if p == 0 {
        return Ok(2 * x);
    }
    let inner = params.inner(x, p)?;
    decomposition_partitions(x, params.b)?
        .iter()
        .map(|part| simple_count(&inner, part.is_lex()))
        .sum()
}

/// `2k(n_rs·b + N_{p−1}(n_rs·b)) + N_{p−1}(m)`, plus `4m` off Lex.
fn simple_count(params: &GenParams, lex: bool) -> Result<usize> {
    let nb = params.n_rs() * params.b;
    let base = 2 * params.k * (nb + general_count(nb, params.p - 1, params)?) + general_count(params.m, params.p - 1, params)?;
    Ok(base + if lex { 0 } else { 4 * params.m })
}

/// Exact vertex count of a sample: Lex-simple when `general` is false,
/// otherwise the general generator.
pub fn vertex_count(params: &GenParams, general: bool) -> Result<usize> {
    params.validate()?;
    if general {
        general_count(params.m, params.p, params)
    } else {
        simple_count(params, true)
    }
}

/// Exact vertex count of [`gen_simple`] on partition `part`.
pub fn vertex_count_simple(params: &GenParams, part: &Equipartition) -> Result<usize> {
    params.validate()?;
    simple_count(params, part.is_lex())
}

/// Uniform Lex-simple permutation.
pub fn random_lex_simple<R: Rng + ?Sized>(m: usize, b: usize, rng: &mut R) -> Permutation {
    let gamma = crate::perm::PermVector { entries: (0..m / b).map(|_| Permutation::random(b, rng)).collect() };
    join(&gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layered::extract_permutation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_counts_p1() {
        let params = GenParams::new(8, 2, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lex = Equipartition::lex(8, 2).unwrap();
        let g = gen_simple(&Permutation::identity(8), &lex, &params, &mut rng).unwrap();
        assert!(extract_permutation(&g, 8).unwrap().is_identity());
        let n_rs = params.n_rs();
        assert_eq!(g.num_vertices(), 6 * 2 * n_rs * 2 + 2 * 8);
        assert_eq!(vertex_count(&params, false).unwrap(), g.num_vertices());
        let odd = Equipartition::from_groups(&[vec![1, 3], vec![2, 4], vec![5, 8], vec![6, 7]]).unwrap();
        let rho = Permutation::from_images(&[3, 4, 1, 2, 8, 7, 6, 5]).unwrap();
        let g = gen_simple(&rho, &odd, &params, &mut rng).unwrap();
        assert_eq!(extract_permutation(&g, 8).unwrap(), rho);
        assert_eq!(g.num_vertices(), 6 * 2 * n_rs * 2 + 2 * 8 + 4 * 8);
        assert!(gen_simple(&rho, &lex, &params, &mut rng).is_err());
    }

    #[test]
    fn simple_random_p1() {
        let params = GenParams::new(16, 4, 2, 1).unwrap();
        let lex = Equipartition::lex(16, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let rho = random_lex_simple(16, 4, &mut rng);
            let g = gen_simple(&rho, &lex, &params, &mut rng).unwrap();
            assert_eq!(extract_permutation(&g, 16).unwrap(), rho);
        }
    }

    #[test]
    fn general_p1() {
        let params = GenParams::new(8, 2, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cross = Permutation::from_images(&[5, 6, 7, 8, 1, 2, 3, 4]).unwrap();
        for sigma in [Permutation::identity(8), cross, Permutation::random(8, &mut rng)] {
            let g = gen_general(&sigma, &params, &mut rng).unwrap();
            assert_eq!(extract_permutation(&g, 8).unwrap(), sigma);
            assert_eq!(g.num_vertices(), vertex_count(&params, true).unwrap());
        }
    }

    #[test]
    fn simple_p2_matches_formula() {
        let params = GenParams::new(8, 2, 2, 2).unwrap();
        let lex = Equipartition::lex(8, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_lex_simple(8, 2, &mut rng);
        let g = gen_simple(&rho, &lex, &params, &mut rng).unwrap();
        assert_eq!(extract_permutation(&g, 8).unwrap(), rho);
        let nb = params.n_rs() * 2;
        let n1 = |x: usize| vertex_count(&params.inner(x, 1).unwrap(), true).unwrap();
        assert_eq!(g.num_vertices(), 2 * 2 * (nb + n1(nb)) + n1(8));
        assert_eq!(vertex_count(&params, false).unwrap(), g.num_vertices());
    }

    #[test]
    fn param_errors() {
        assert!(GenParams::new(9, 2, 2, 1).is_err());
        assert!(GenParams::new(8, 2, 0, 1).is_err());
        assert!(GenParams::new(8, 2, 2, 9).is_err());
    }
}
