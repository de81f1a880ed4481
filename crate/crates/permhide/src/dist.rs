//! Probability distributions over `S_b`: distances, Pinsker checks,
//! convolution, concatenation decay, and the Fourier transform with real
//! orthogonal (Young) representations.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::perm::{compose, factorial, Permutation};

pub const MAX_B: usize = 8;
pub const MAX_FOURIER_B: usize = 6;

/// Dense probability vector indexed by Lehmer rank.
#[derive(Clone, Debug, PartialEq)]
pub struct DistSb {
    b: usize,
    probs: Vec<f64>,
}

/// All permutations of `[b]` in rank order.
pub fn all_perms(b: usize) -> Vec<Permutation> {
    (0..factorial(b)).map(|r| Permutation::from_lehmer_rank(b, r).expect("rank in range")).collect()
}

fn check_b(b: usize, cap: usize) -> Result<()> {
    if b == 0 || b > cap {
        return Err(Error::Unsupported(format!("b={b} outside [1,{cap}]")));
    }
    Ok(())
}

impl DistSb {
    pub fn new(b: usize, probs: Vec<f64>) -> Result<Self> {
        check_b(b, MAX_B)?;
        if probs.len() as u64 != factorial(b) {
            return Err(Error::Dimension(format!("need {} probabilities for S_{b}", factorial(b))));
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| !(p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParam(format!("not a distribution (sum {sum})")));
        }
        Ok(DistSb { b, probs })
    }

    pub fn uniform(b: usize) -> Result<Self> {
        check_b(b, MAX_B)?;
        let n = factorial(b) as usize;
        Ok(DistSb { b, probs: vec![1.0 / n as f64; n] })
    }

    pub fn point(sigma: &Permutation) -> Result<Self> {
        let b = sigma.len();
        check_b(b, MAX_B)?;
        let mut probs = vec![0.0; factorial(b) as usize];
        probs[sigma.lehmer_rank() as usize] = 1.0;
        Ok(DistSb { b, probs })
    }

    /// Dirichlet(1,…,1) sample: normalized exponentials.
    pub fn random<R: Rng + ?Sized>(b: usize, rng: &mut R) -> Result<Self> {
        check_b(b, MAX_B)?;
        let n = factorial(b) as usize;
        let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let s: f64 = w.iter().sum();
        Ok(DistSb { b, probs: w.into_iter().map(|x| x / s).collect() })
    }

    /// `(1 + √ε)/b!` on even permutations and `(1 − √ε)/b!` on odd ones.
    pub fn parity(b: usize, eps: f64) -> Result<Self> {
        check_b(b, MAX_B)?;
        if b < 2 || !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidParam(format!("parity family needs b >= 2 and ε in [0,1], got b={b} ε={eps}")));
        }
        let n = factorial(b) as f64;
        let s = eps.sqrt();
        let probs = all_perms(b).iter().map(|p| if p.is_even() { (1.0 + s) / n } else { (1.0 - s) / n }).collect();
        Ok(DistSb { b, probs })
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, sigma: &Permutation) -> f64 {
        self.probs[sigma.lehmer_rank() as usize]
    }

    fn same_b(&self, other: &DistSb) -> Result<()> {
        if self.b != other.b {
            return Err(Error::SizeMismatch { left: self.b, right: other.b });
        }
        Ok(())
    }

    /// Law of `σ1 ∘ σ2` with `σ1 ~ self`, `σ2 ~ other` independent.
    pub fn convolve(&self, other: &DistSb) -> Result<DistSb> {
        self.same_b(other)?;
        let perms = all_perms(self.b);
        let mut out = vec![0.0; perms.len()];
        for (i, s1) in perms.iter().enumerate() {
            if self.probs[i] == 0.0 {
                continue;
            }
            for (j, s2) in perms.iter().enumerate() {
                let r = compose(s1, s2).expect("same b").lehmer_rank() as usize;
                out[r] += self.probs[i] * other.probs[j];
            }
        }
        Ok(DistSb { b: self.b, probs: out })
    }
}

/// Half the ℓ1 distance.
pub fn tvd(mu: &DistSb, nu: &DistSb) -> Result<f64> {
    mu.same_b(nu)?;
    Ok(0.5 * mu.probs.iter().zip(&nu.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `E_μ[ln μ/ν]`; `+∞` when `μ` puts mass outside the support of `ν`.
pub fn kl(mu: &DistSb, nu: &DistSb) -> Result<f64> {
    mu.same_b(nu)?;
    let mut s = 0.0;
    for (&a, &b) in mu.probs.iter().zip(&nu.probs) {
        if a > 0.0 {
            if b == 0.0 {
                return Ok(f64::INFINITY);
            }
            s += a * (a / b).ln();
        }
    }
    Ok(s)
}

pub fn l2_sq(mu: &DistSb, nu: &DistSb) -> Result<f64> {
    mu.same_b(nu)?;
    Ok(mu.probs.iter().zip(&nu.probs).map(|(a, b)| (a - b) * (a - b)).sum())
}

#[derive(Clone, Debug)]
pub struct PinskerReport {
    /// Ranks with `μ(x) > 2ν(x)`.
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
    /// `KL(μ‖ν)`.
    pub lhs: f64,
    /// `(1 − ln 2)·(Σ_A |μ−ν| + Σ_B (μ−ν)²/ν)`.
    pub rhs: f64,
    pub holds: bool,
    /// The same bound with `μ(x)` in the B-term denominator. This variant
    /// is not a valid inequality and is reported only for comparison.
    pub rhs_mu_denominator: f64,
}

/// Errors on a support violation, where the KL side is infinite.
pub fn strengthened_pinsker_check(mu: &DistSb, nu: &DistSb) -> Result<PinskerReport> {
    let lhs = kl(mu, nu)?;
    if lhs.is_infinite() {
        return Err(Error::InvalidParam("support of μ is not inside support of ν".into()));
    }
    let (mut a_set, mut b_set) = (Vec::new(), Vec::new());
    let (mut acc, mut acc_mu) = (0.0, 0.0);
    for (x, (&m, &n)) in mu.probs.iter().zip(&nu.probs).enumerate() {
        if m > 2.0 * n {
            a_set.push(x);
            acc += (m - n).abs();
            acc_mu += (m - n).abs();
        } else {
            b_set.push(x);
            // m > 0 forces n > 0 here, and m = 0 with n > 0 contributes n.
            if n > 0.0 {
                acc += (m - n) * (m - n) / n;
            }
            if m > 0.0 {
                acc_mu += (m - n) * (m - n) / m;
            }
        }
    }
    let c = 1.0 - std::f64::consts::LN_2;
    let rhs = c * acc;
    Ok(PinskerReport { a_set, b_set, lhs, rhs, holds: lhs >= rhs - 1e-12, rhs_mu_denominator: c * acc_mu })
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    /// `ε_i = b!·‖ν_i − U‖²`.
    pub eps: Vec<f64>,
    /// `b!·‖ν_1 ∘ ⋯ ∘ ν_g − U‖²`.
    pub lhs: f64,
    /// `∏ ε_i`.
    pub bound: f64,
    pub holds: bool,
}

pub fn concat_decay_check(nus: &[DistSb]) -> Result<DecayReport> {
    let first = nus.first().ok_or_else(|| Error::InvalidParam("need at least one distribution".into()))?;
    let u = DistSb::uniform(first.b)?;
    let n = factorial(first.b) as f64;
    let eps = nus.iter().map(|v| Ok(n * l2_sq(v, &u)?)).collect::<Result<Vec<_>>>()?;
    let mut conv = first.clone();
    for v in &nus[1..] {
        conv = conv.convolve(v)?;
    }
    let lhs = n * l2_sq(&conv, &u)?;
    let bound: f64 = eps.iter().product();
    Ok(DecayReport { eps, lhs, bound, holds: lhs <= bound + 1e-12 })
}

/// Dense real matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub d: usize,
    pub a: Vec<f64>,
}

impl Mat {
    pub fn zeros(d: usize) -> Self {
        Mat { d, a: vec![0.0; d * d] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Mat::zeros(d);
        for i in 0..d {
            m.a[i * d + i] = 1.0;
        }
        m
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let d = self.d;
        let mut out = Mat::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let x = self.a[i * d + k];
                if x == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.a[i * d + j] += x * o.a[k * d + j];
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, o: &Mat) -> f64 {
        self.a.iter().zip(&o.a).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum()
    }
}

#[derive(Clone, Debug)]
pub struct Irrep {
    /// The partition of `b` labelling this representation.
    pub shape: Vec<usize>,
    pub dim: usize,
    /// `mats[rank]` is the matrix of the permutation with that Lehmer rank.
    pub mats: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct IrrepSet {
    pub b: usize,
    pub irreps: Vec<Irrep>,
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Standard Young tableaux of `shape`, each given as the `(row, col)` cell
/// of the entries `0..n`.
fn standard_tableaux(shape: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn go(shape: &[usize], filled: &mut Vec<usize>, cells: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>, n: usize) {
        if cells.len() == n {
            out.push(cells.clone());
            return;
        }
        for row in 0..shape.len() {
            let col = filled[row];
            if col < shape[row] && (row == 0 || filled[row - 1] > col) {
                filled[row] += 1;
                cells.push((row, col));
                go(shape, filled, cells, out, n);
                cells.pop();
                filled[row] -= 1;
            }
        }
    }
    let n = shape.iter().sum();
    let mut out = Vec::new();
    go(shape, &mut vec![0; shape.len()], &mut Vec::new(), &mut out, n);
    out
}

/// Young's orthogonal form for the adjacent transposition `(k, k+1)`.
fn transposition_matrix(tabs: &[Vec<(usize, usize)>], index: &HashMap<Vec<(usize, usize)>, usize>, k: usize) -> Mat {
    let d = tabs.len();
    let mut m = Mat::zeros(d);
    for (i, t) in tabs.iter().enumerate() {
        let content = |c: (usize, usize)| c.1 as f64 - c.0 as f64;
        let r = 1.0 / (content(t[k + 1]) - content(t[k]));
        m.a[i * d + i] = r;
        let mut s = t.clone();
        s.swap(k, k + 1);
        if let Some(&j) = index.get(&s) {
            m.a[j * d + i] = (1.0 - r * r).sqrt();
        }
    }
    m
}

/// One real orthogonal irreducible representation per partition of `b`,
/// generated from the adjacent transpositions.
pub fn build_irreps(b: usize) -> Result<IrrepSet> {
    check_b(b, MAX_FOURIER_B)?;
    let perms = all_perms(b);
    let gens: Vec<Permutation> = (0..b.saturating_sub(1))
        .map(|k| {
            let mut img: Vec<usize> = (0..b).collect();
            img.swap(k, k + 1);
            Permutation::from_zero_based(img).expect("transposition")
        })
        .collect();
    let mut irreps = Vec::new();
    for shape in partitions(b, b) {
        let tabs = standard_tableaux(&shape);
        let index: HashMap<Vec<(usize, usize)>, usize> = tabs.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let d = tabs.len();
        let gen_mats: Vec<Mat> = (0..gens.len()).map(|k| transposition_matrix(&tabs, &index, k)).collect();
        let mut mats: Vec<Option<Mat>> = vec![None; perms.len()];
        mats[0] = Some(Mat::identity(d));
        let mut queue = vec![Permutation::identity(b)];
        while let Some(s) = queue.pop() {
            let ms = mats[s.lehmer_rank() as usize].clone().expect("visited");
            for (g, mg) in gens.iter().zip(&gen_mats) {
                let t = compose(g, &s).expect("same b");
                let rt = t.lehmer_rank() as usize;
                if mats[rt].is_none() {
                    mats[rt] = Some(mg.mul(&ms));
                    queue.push(t);
                }
            }
        }
        irreps.push(Irrep { shape, dim: d, mats: mats.into_iter().map(|m| m.expect("generators reach all of S_b")).collect() });
    }
    Ok(IrrepSet { b, irreps })
}

impl IrrepSet {
    pub fn dimension_sum_sq(&self) -> u64 {
        self.irreps.iter().map(|r| (r.dim * r.dim) as u64).sum()
    }

    /// Largest `|ρ(σ∘τ) − ρ(σ)ρ(τ)|` over all pairs and irreps.
    pub fn homomorphism_error(&self) -> f64 {
        let perms = all_perms(self.b);
        let mut worst: f64 = 0.0;
        for rep in &self.irreps {
            for (i, s) in perms.iter().enumerate() {
                for (j, t) in perms.iter().enumerate() {
                    let st = compose(s, t).expect("same b").lehmer_rank() as usize;
                    worst = worst.max(rep.mats[st].max_abs_diff(&rep.mats[i].mul(&rep.mats[j])));
                }
            }
        }
        worst
    }

    /// Largest `|ρ(σ)ᵀρ(σ) − I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for rep in &self.irreps {
            for m in &rep.mats {
                let mut mt = Mat::zeros(m.d);
                for i in 0..m.d {
                    for j in 0..m.d {
                        mt.a[i * m.d + j] = m.a[j * m.d + i];
                    }
                }
                worst = worst.max(mt.mul(m).max_abs_diff(&Mat::identity(m.d)));
            }
        }
        worst
    }
}

/// `f̂(ρ) = Σ_σ f(σ) ρ(σ)`, one matrix per irrep.
pub fn fourier(f: &DistSb, irreps: &IrrepSet) -> Result<Vec<Mat>> {
    fourier_raw(&f.probs, f.b, irreps)
}

fn fourier_raw(f: &[f64], b: usize, irreps: &IrrepSet) -> Result<Vec<Mat>> {
    if b != irreps.b {
        return Err(Error::SizeMismatch { left: b, right: irreps.b });
    }
    Ok(irreps
        .irreps
        .iter()
        .map(|rep| {
            let mut acc = Mat::zeros(rep.dim);
            for (x, m) in f.iter().zip(&rep.mats) {
                if *x != 0.0 {
                    for (a, b) in acc.a.iter_mut().zip(&m.a) {
                        *a += x * b;
                    }
                }
            }
            acc
        })
        .collect())
}

/// `f(σ) = (1/b!) Σ_ρ d_ρ Tr(f̂(ρ)ᵀ ρ(σ))`. Returns raw values; they form a
/// distribution only if the coefficients came from one.
pub fn inverse_fourier(coeffs: &[Mat], irreps: &IrrepSet) -> Vec<f64> {
    let n = factorial(irreps.b) as usize;
    (0..n)
        .map(|s| {
            irreps
                .irreps
                .iter()
                .zip(coeffs)
                .map(|(rep, c)| rep.dim as f64 * c.a.iter().zip(&rep.mats[s].a).map(|(x, y)| x * y).sum::<f64>())
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ConvolutionTheoremReport {
    /// Max deviation of `ν̂1(ρ)·ν̂2(ρ)` from the transform of `ν1 ∘ ν2`.
    pub err_forward: f64,
    /// Same for the reversed product `ν̂2(ρ)·ν̂1(ρ)`.
    pub err_reversed: f64,
    pub holds: bool,
}

pub fn convolution_theorem_check(nu1: &DistSb, nu2: &DistSb, irreps: &IrrepSet) -> Result<ConvolutionTheoremReport> {
    let f1 = fourier(nu1, irreps)?;
    let f2 = fourier(nu2, irreps)?;
    let fc = fourier(&nu1.convolve(nu2)?, irreps)?;
    let mut fwd: f64 = 0.0;
    let mut rev: f64 = 0.0;
    for ((a, b), c) in f1.iter().zip(&f2).zip(&fc) {
        fwd = fwd.max(a.mul(b).max_abs_diff(c));
        rev = rev.max(b.mul(a).max_abs_diff(c));
    }
    Ok(ConvolutionTheoremReport { err_forward: fwd, err_reversed: rev, holds: fwd <= 1e-9 })
}

#[derive(Clone, Debug)]
pub struct PlancherelReport {
    pub direct: f64,
    pub spectral: f64,
    pub holds: bool,
}

/// `Σ_σ (ν1−ν2)² = (1/b!) Σ_ρ d_ρ ‖ν̂1(ρ) − ν̂2(ρ)‖_F²`.
pub fn plancherel_check(nu1: &DistSb, nu2: &DistSb, irreps: &IrrepSet) -> Result<PlancherelReport> {
    let direct = l2_sq(nu1, nu2)?;
    let diff: Vec<f64> = nu1.probs.iter().zip(&nu2.probs).map(|(a, b)| a - b).collect();
    let coeffs = fourier_raw(&diff, nu1.b, irreps)?;
    let n = factorial(nu1.b) as f64;
    let spectral = irreps.irreps.iter().zip(&coeffs).map(|(r, c)| r.dim as f64 * c.frobenius_sq()).sum::<f64>() / n;
    Ok(PlancherelReport { direct, spectral, holds: (direct - spectral).abs() <= 1e-9 })
}
