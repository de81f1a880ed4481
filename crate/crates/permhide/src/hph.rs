//! Multi-HPH instances: sampling, the referee's full-information answer, and
//! a zero-communication referee that only sees its own input.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::blocks::{Hypermatching, PermMatrix};
use crate::dist::DistSb;
use crate::error::{Error, Result};
use crate::perm::{compose, inverse, PermVector, Permutation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Ambiguous,
}

/// Everything except `answer` and the targets is split between parties:
/// player `i` holds `sigmas[i]`; the referee holds `l`, `hyper`, `gamma`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiHphInstance {
    pub r: usize,
    pub t: usize,
    pub b: usize,
    pub k: usize,
    pub sigmas: Vec<PermMatrix>,
    /// Zero-indexed matching index per layer.
    pub l: Vec<usize>,
    pub hyper: Hypermatching,
    pub gamma: PermVector,
    pub yes: PermVector,
    pub no: PermVector,
    pub answer: Answer,
    pub seed: u64,
}

/// The secret part plus the referee's shift, sampled so that
/// `γ* ∘ Γ = target` componentwise.
#[derive(Clone, Debug)]
pub struct Hidden {
    pub sigmas: Vec<PermMatrix>,
    pub l: Vec<usize>,
    pub hyper: Hypermatching,
    pub gamma: PermVector,
}

fn check_shape(r: usize, t: usize, b: usize, k: usize) -> Result<()> {
    if r == 0 || r % 2 != 0 {
        return Err(Error::InvalidParam(format!("r must be even and positive, got {r}")));
    }
    if t == 0 || b == 0 || k == 0 {
        return Err(Error::InvalidParam("t, b, k must be positive".into()));
    }
    Ok(())
}

/// Σ uniform, L uniform, each hypermatching row a uniform sequence of `r/2`
/// distinct edge indices, and `Γ_a = (γ*_a)⁻¹ ∘ target_a`.
pub fn sample_hidden<R: Rng + ?Sized>(r: usize, t: usize, b: usize, k: usize, target: &PermVector, rng: &mut R) -> Result<Hidden> {
    check_shape(r, t, b, k)?;
    if target.len() != r / 2 || target.b() != b {
        return Err(Error::Dimension(format!("target must hold r/2 = {} permutations on [{b}]", r / 2)));
    }
    let sigmas: Vec<PermMatrix> = (0..k).map(|_| PermMatrix::random(t, r, b, rng)).collect();
    let l: Vec<usize> = (0..k).map(|_| rng.gen_range(0..t)).collect();
    let hyper: Hypermatching = (0..k).map(|_| sample(rng, r, r / 2).into_vec()).collect();
    let star = recompute_gamma_star(&sigmas, &l, &hyper);
    let gamma = PermVector::new(
        star.entries.iter().zip(&target.entries).map(|(s, g)| compose(&inverse(s), g).expect("same b")).collect(),
    )?;
    Ok(Hidden { sigmas, l, hyper, gamma })
}

pub fn sample_instance<R: Rng + ?Sized>(
    r: usize,
    t: usize,
    b: usize,
    k: usize,
    yes: &PermVector,
    no: &PermVector,
    seed: u64,
    rng: &mut R,
) -> Result<MultiHphInstance> {
    let answer = if rng.gen::<bool>() { Answer::Yes } else { Answer::No };
    let target = match answer {
        Answer::Yes => yes,
        Answer::No => no,
    };
    if no.len() != yes.len() || no.b() != yes.b() {
        return Err(Error::Dimension("targets differ in shape".into()));
    }
    let h = sample_hidden(r, t, b, k, target, rng)?;
    Ok(MultiHphInstance {
        r,
        t,
        b,
        k,
        sigmas: h.sigmas,
        l: h.l,
        hyper: h.hyper,
        gamma: h.gamma,
        yes: yes.clone(),
        no: no.clone(),
        answer,
        seed,
    })
}

/// `γ*_a = σ^(1)_{ℓ1, M_{1,a}} ∘ ⋯ ∘ σ^(k)_{ℓk, M_{k,a}}`, the same order in
/// which a multi-block chains its blocks.
pub fn recompute_gamma_star(sigmas: &[PermMatrix], l: &[usize], hyper: &Hypermatching) -> PermVector {
    let half = hyper.first().map_or(0, |row| row.len());
    let b = sigmas.first().map_or(0, |s| s.b);
    let entries = (0..half)
        .map(|a| {
            let mut acc = Permutation::identity(b);
            for i in (0..sigmas.len()).rev() {
                acc = compose(sigmas[i].get(l[i], hyper[i][a]), &acc).expect("same b");
            }
            acc
        })
        .collect();
    PermVector { entries }
}

/// Full-information answer: compares `Γ* ∘ Γ` with both targets.
pub fn referee_answer(inst: &MultiHphInstance) -> Result<Verdict> {
    let got = recompute_gamma_star(&inst.sigmas, &inst.l, &inst.hyper).compose(&inst.gamma)?;
    match (got == inst.yes, got == inst.no) {
        (true, true) => Ok(Verdict::Ambiguous),
        (true, false) => Ok(Verdict::Yes),
        (false, true) => Ok(Verdict::No),
        (false, false) => Err(Error::CorruptInstance("Γ* ∘ Γ matches neither target".into())),
    }
}

/// Exact posterior guess from `(L, M, Γ)` and the targets only. Each `γ*_a`
/// is a product of `k` independent uniform entries (distinct `a` use
/// distinct entries of each matrix), so the likelihood of target `T` is
/// `∏_a P[γ*_a = T_a ∘ Γ_a⁻¹]`. Ties are broken by `rng`.
pub fn zero_info_guess<R: Rng + ?Sized>(inst: &MultiHphInstance, rng: &mut R) -> Result<Answer> {
    let u = DistSb::uniform(inst.b)?;
    let mut star = u.clone();
    for _ in 1..inst.k {
        star = star.convolve(&u)?;
    }
    let likelihood = |target: &PermVector| -> f64 {
        target
            .entries
            .iter()
            .zip(&inst.gamma.entries)
            .map(|(tg, g)| star.prob(&compose(tg, &inverse(g)).expect("same b")))
            .product()
    };
    let (ly, ln) = (likelihood(&inst.yes), likelihood(&inst.no));
    let tol = 1e-12 * ly.max(ln);
    Ok(if (ly - ln).abs() <= tol {
        if rng.gen::<bool>() {
            Answer::Yes
        } else {
            Answer::No
        }
    } else if ly > ln {
        Answer::Yes
    } else {
        Answer::No
    })
}

/// The lexicographically first referee input: `L = (1,…,1)`, each
/// hypermatching row `(1,…,r/2)`, `Γ = (id,…,id)`.
pub fn lex_first_referee_input(r: usize, b: usize, k: usize) -> (Vec<usize>, Hypermatching, PermVector) {
    (vec![0; k], vec![(0..r / 2).collect(); k], PermVector::identity(r / 2, b))
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    schema_version: u32,
    r: usize,
    t: usize,
    b: usize,
    k: usize,
    /// `sigmas[i][row][col]` as Lehmer ranks.
    sigmas: Vec<Vec<Vec<u64>>>,
    l: Vec<usize>,
    hyper: Vec<Vec<usize>>,
    gamma: Vec<u64>,
    yes: Vec<u64>,
    no: Vec<u64>,
    answer: Answer,
    seed: u64,
}

fn ranks(v: &PermVector) -> Vec<u64> {
    v.entries.iter().map(|p| p.lehmer_rank()).collect()
}

fn unrank(b: usize, v: &[u64]) -> Result<PermVector> {
    PermVector::new(v.iter().map(|&x| Permutation::from_lehmer_rank(b, x)).collect::<Result<Vec<_>>>()?)
}

impl MultiHphInstance {
    /// JSON with Lehmer-ranked permutations and one-indexed `l`, `hyper`.
    pub fn to_json(&self) -> String {
        let j = InstanceJson {
            schema_version: SCHEMA_VERSION,
            r: self.r,
            t: self.t,
            b: self.b,
            k: self.k,
            sigmas: self
                .sigmas
                .iter()
                .map(|s| (0..s.t).map(|i| (0..s.r).map(|j| s.get(i, j).lehmer_rank()).collect()).collect())
                .collect(),
            l: self.l.iter().map(|x| x + 1).collect(),
            hyper: self.hyper.iter().map(|row| row.iter().map(|x| x + 1).collect()).collect(),
            gamma: ranks(&self.gamma),
            yes: ranks(&self.yes),
            no: ranks(&self.no),
            answer: self.answer,
            seed: self.seed,
        };
        serde_json::to_string(&j).expect("instance serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: InstanceJson = serde_json::from_str(s)?;
        if j.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", j.schema_version)));
        }
        check_shape(j.r, j.t, j.b, j.k)?;
        let sigmas = j
            .sigmas
            .iter()
            .map(|rows| {
                let entries = rows
                    .iter()
                    .flatten()
                    .map(|&x| Permutation::from_lehmer_rank(j.b, x))
                    .collect::<Result<Vec<_>>>()?;
                PermMatrix::new(j.t, j.r, entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let zero = |x: usize, hi: usize| -> Result<usize> {
            if x == 0 || x > hi {
                Err(Error::Parse(format!("index {x} outside [1,{hi}]")))
            } else {
                Ok(x - 1)
            }
        };
        let l = j.l.iter().map(|&x| zero(x, j.t)).collect::<Result<Vec<_>>>()?;
        let hyper = j
            .hyper
            .iter()
            .map(|row| row.iter().map(|&x| zero(x, j.r)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if sigmas.len() != j.k || l.len() != j.k || hyper.len() != j.k || hyper.iter().any(|r| r.len() != j.r / 2) {
            return Err(Error::Dimension("instance arrays disagree with k, r".into()));
        }
        Ok(MultiHphInstance {
            r: j.r,
            t: j.t,
            b: j.b,
            k: j.k,
            sigmas,
            l,
            hyper,
            gamma: unrank(j.b, &j.gamma)?,
            yes: unrank(j.b, &j.yes)?,
            no: unrank(j.b, &j.no)?,
            answer: j.answer,
            seed: j.seed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::multi_block;
    use crate::layered::extract_permutation;
    use crate::perm::join;
    use crate::rs::trivial_rs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn targets(r: usize, b: usize, rng: &mut ChaCha8Rng) -> (PermVector, PermVector) {
        let yes = PermVector::new((0..r / 2).map(|_| Permutation::random(b, rng)).collect()).unwrap();
        let mut no = yes.clone();
        let mut swap: Vec<usize> = (1..=b).collect();
        swap.swap(0, 1);
        no.entries[0] = compose(&no.entries[0], &Permutation::from_images(&swap).unwrap()).unwrap();
        (yes, no)
    }

    #[test]
    fn roundtrip_and_determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (yes, no) = targets(4, 2, &mut rng);
        for s in 0..200 {
            let inst = sample_instance(4, 2, 2, 2, &yes, &no, s, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            let want = if inst.answer == Answer::Yes { Verdict::Yes } else { Verdict::No };
            assert_eq!(referee_answer(&inst).unwrap(), want);
            let again = sample_instance(4, 2, 2, 2, &yes, &no, s, &mut ChaCha8Rng::seed_from_u64(s)).unwrap();
            assert_eq!(inst, again);
            assert_eq!(MultiHphInstance::from_json(&inst.to_json()).unwrap(), inst);
        }
    }

    #[test]
    fn identity_sigmas_give_identity_star() {
        let s = vec![PermMatrix::identity(2, 4, 3); 3];
        let star = recompute_gamma_star(&s, &[0, 1, 0], &vec![vec![0, 3]; 3]);
        assert!(star.entries.iter().all(|p| p.is_identity()));
    }

    #[test]
    fn star_matches_multi_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rs = trivial_rs(8, 4).unwrap();
        for _ in 0..100 {
            let target = PermVector::new((0..2).map(|_| Permutation::random(2, &mut rng)).collect()).unwrap();
            let h = sample_hidden(4, rs.t, 2, 2, &target, &mut rng).unwrap();
            let g = multi_block(&rs, &h.sigmas, &h.l, &h.hyper).unwrap();
            let star = recompute_gamma_star(&h.sigmas, &h.l, &h.hyper);
            assert_eq!(extract_permutation(&g, 4).unwrap(), join(&star));
            assert_eq!(star.compose(&h.gamma).unwrap(), target);
        }
    }

    #[test]
    fn ambiguous_and_corrupt() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (yes, _) = targets(2, 2, &mut rng);
        let inst = sample_instance(2, 1, 2, 1, &yes, &yes, 0, &mut rng).unwrap();
        assert_eq!(referee_answer(&inst).unwrap(), Verdict::Ambiguous);
        let (yes, no) = targets(4, 3, &mut rng);
        let mut bad = sample_instance(4, 2, 3, 2, &yes, &no, 0, &mut rng).unwrap();
        bad.gamma.entries[1] = compose(&bad.gamma.entries[1], &Permutation::from_images(&[1, 3, 2]).unwrap()).unwrap();
        assert!(matches!(referee_answer(&bad), Err(Error::CorruptInstance(_))));
    }

    #[test]
    fn shape_errors() {
        let t = PermVector::identity(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(sample_instance(3, 1, 2, 1, &t, &t, 0, &mut rng).is_err());
        assert!(sample_instance(4, 1, 2, 1, &t, &t, 0, &mut rng).is_err());
    }
}
