//! Permutations on `[m]`, equipartitions, and the vec/join bijection.
//!
//! Semantics are one-indexed everywhere a value leaves the crate (text
//! formats, JSON, Python). Internally a permutation stores zero-indexed
//! images: `map[x] = σ(x+1) - 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Permutation { map: (0..m).collect() }
    }

    /// Builds from zero-indexed images, checking bijectivity.
    pub fn from_zero_based(map: Vec<usize>) -> Result<Self> {
        let m = map.len();
        let mut seen = vec![false; m];
        for &v in &map {
            if v >= m || seen[v] {
                return Err(Error::NotABijection(format!("{:?}", one_based(&map))));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    /// Builds from one-indexed images, e.g. `[2, 3, 1]`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        if images.iter().any(|&v| v == 0) {
            return Err(Error::NotABijection(format!("{images:?}")));
        }
        Self::from_zero_based(images.iter().map(|&v| v - 1).collect())
    }

    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut map: Vec<usize> = (0..m).collect();
        map.shuffle(rng);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Zero-indexed application.
    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.map[x]
    }

    /// One-indexed application: `σ(x)`.
    pub fn apply(&self, x: usize) -> usize {
        self.map[x - 1] + 1
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn images(&self) -> Vec<usize> {
        one_based(&self.map)
    }

    /// Lehmer rank in `[0, m!)`, lexicographic order of image lists.
    pub fn lehmer_rank(&self) -> u64 {
        let m = self.map.len();
        let mut rank = 0u64;
        for i in 0..m {
            let smaller = self.map[i + 1..].iter().filter(|&&v| v < self.map[i]).count() as u64;
            rank = rank * (m - i) as u64 + smaller;
        }
        rank
    }

    pub fn from_lehmer_rank(m: usize, mut rank: u64) -> Result<Self> {
        if rank >= factorial(m) {
            return Err(Error::Parse(format!("rank {rank} out of range for S_{m}")));
        }
        let mut digits = vec![0usize; m];
        for i in (0..m).rev() {
            let base = (m - i) as u64;
            digits[i] = (rank % base) as usize;
            rank /= base;
        }
        let mut pool: Vec<usize> = (0..m).collect();
        let map = digits.into_iter().map(|d| pool.remove(d)).collect();
        Ok(Permutation { map })
    }

    /// Number of inversions mod 2.
    pub fn is_even(&self) -> bool {
        let m = self.map.len();
        let mut inv = 0usize;
        for i in 0..m {
            for j in i + 1..m {
                if self.map[i] > self.map[j] {
                    inv += 1;
                }
            }
        }
        inv % 2 == 0
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(&images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images()
    }
}

fn one_based(map: &[usize]) -> Vec<usize> {
    map.iter().map(|&v| v + 1).collect()
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, ")")
    }
}

/// Whitespace-separated one-indexed image list, e.g. `2 3 4 1`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|v| (v + 1).to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(&images)
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `(f∘g)(x) = f(g(x))`.
pub fn compose(f: &Permutation, g: &Permutation) -> Result<Permutation> {
    if f.len() != g.len() {
        return Err(Error::SizeMismatch { left: f.len(), right: g.len() });
    }
    Ok(Permutation { map: g.map.iter().map(|&x| f.map[x]).collect() })
}

pub fn inverse(f: &Permutation) -> Permutation {
    let mut map = vec![0; f.len()];
    for (x, &y) in f.map.iter().enumerate() {
        map[y] = x;
    }
    Permutation { map }
}

/// Disjoint groups of size `b` covering `[m]`. Stored zero-indexed, each
/// group sorted ascending; group order is significant for [`swap_perm`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equipartition {
    m: usize,
    b: usize,
    groups: Vec<Vec<usize>>,
}

impl Equipartition {
    pub fn lex(m: usize, b: usize) -> Result<Self> {
        if b == 0 || m % b != 0 {
            return Err(Error::Divisibility(format!("group size {b} does not divide {m}")));
        }
        let groups = (0..m / b).map(|g| (g * b..(g + 1) * b).collect()).collect();
        Ok(Equipartition { m, b, groups })
    }

    /// Groups given one-indexed, e.g. `[[1,3],[2,4]]`.
    pub fn from_groups(groups: &[Vec<usize>]) -> Result<Self> {
        let zero: Vec<Vec<usize>> = groups
            .iter()
            .map(|g| g.iter().map(|&x| x.wrapping_sub(1)).collect())
            .collect();
        Self::from_zero_based(zero)
    }

    pub fn from_zero_based(mut groups: Vec<Vec<usize>>) -> Result<Self> {
        let b = groups.first().map_or(0, |g| g.len());
        let m = groups.iter().map(|g| g.len()).sum::<usize>();
        if b == 0 || groups.iter().any(|g| g.len() != b) {
            return Err(Error::BadPartition("groups must be nonempty and equal-sized".into()));
        }
        let mut seen = vec![false; m];
        for g in groups.iter_mut() {
            g.sort_unstable();
            for &x in g.iter() {
                if x >= m || seen[x] {
                    return Err(Error::BadPartition(format!("element {} repeated or out of range", x.wrapping_add(1))));
                }
                seen[x] = true;
            }
        }
        Ok(Equipartition { m, b, groups })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn is_lex(&self) -> bool {
        self.groups.iter().enumerate().all(|(g, grp)| grp[0] == g * self.b && grp[self.b - 1] == (g + 1) * self.b - 1)
    }

    /// Zero-indexed group index of each element.
    pub fn group_of(&self) -> Vec<usize> {
        let mut out = vec![0; self.m];
        for (g, grp) in self.groups.iter().enumerate() {
            for &x in grp {
                out[x] = g;
            }
        }
        out
    }
}

pub fn is_simple(sigma: &Permutation, p: &Equipartition) -> bool {
    if sigma.len() != p.m() {
        return false;
    }
    let g = p.group_of();
    (0..sigma.len()).all(|x| g[x] == g[sigma.at(x)])
}

/// A vector of permutations on `[b]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermVector {
    pub entries: Vec<Permutation>,
}

impl PermVector {
    pub fn new(entries: Vec<Permutation>) -> Result<Self> {
        if let Some(first) = entries.first() {
            if let Some(bad) = entries.iter().find(|e| e.len() != first.len()) {
                return Err(Error::SizeMismatch { left: first.len(), right: bad.len() });
            }
        }
        Ok(PermVector { entries })
    }

    pub fn identity(len: usize, b: usize) -> Self {
        PermVector { entries: vec![Permutation::identity(b); len] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn b(&self) -> usize {
        self.entries.first().map_or(0, |e| e.len())
    }

    /// Componentwise composition.
    pub fn compose(&self, other: &PermVector) -> Result<PermVector> {
        if self.len() != other.len() {
            return Err(Error::SizeMismatch { left: self.len(), right: other.len() });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| compose(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(PermVector { entries })
    }
}

/// `γ_i(j) = ρ((i−1)b+j) − (i−1)b`.
pub fn vec(rho: &Permutation, b: usize) -> Result<PermVector> {
    let p = Equipartition::lex(rho.len(), b)?;
    if !is_simple(rho, &p) {
        return Err(Error::NotSimple(format!("{rho:?} is not simple on Lex({b})")));
    }
    let entries = (0..rho.len() / b)
        .map(|i| Permutation { map: (0..b).map(|j| rho.at(i * b + j) - i * b).collect() })
        .collect();
    Ok(PermVector { entries })
}

pub fn join(gamma: &PermVector) -> Permutation {
    let b = gamma.b();
    let mut map = Vec::with_capacity(gamma.len() * b);
    for (i, g) in gamma.entries.iter().enumerate() {
        map.extend(g.as_slice().iter().map(|&v| i * b + v));
    }
    Permutation { map }
}

/// The lexicographically first permutation extending the partial map `pairs`
/// (one-indexed `(u, v)` meaning `σ(u) = v`).
pub fn match_aligned(pairs: &[(usize, usize)], m: usize) -> Result<Permutation> {
    let mut map = vec![usize::MAX; m];
    let mut used = vec![false; m];
    for &(u, v) in pairs {
        if u == 0 || v == 0 || u > m || v > m {
            return Err(Error::NotInjective(format!("pair ({u},{v}) out of range for m={m}")));
        }
        if map[u - 1] != usize::MAX || used[v - 1] {
            return Err(Error::NotInjective(format!("pair ({u},{v}) collides")));
        }
        map[u - 1] = v - 1;
        used[v - 1] = true;
    }
    let mut next = 0;
    for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
        while used[next] {
            next += 1;
        }
        *slot = next;
        used[next] = true;
    }
    Ok(Permutation { map })
}

/// `σ'((x−1)b + j) = (σ(x)−1)b + j`.
pub fn extend(sigma: &Permutation, b: usize) -> Permutation {
    let mut map = Vec::with_capacity(sigma.len() * b);
    for x in 0..sigma.len() {
        map.extend((0..b).map(|j| sigma.at(x) * b + j));
    }
    Permutation { map }
}

/// Relabeling carrying group `g` of `p` onto the `g`-th Lex group, keeping
/// the order of elements inside each group.
pub fn swap_perm(p: &Equipartition) -> Permutation {
    let mut map = vec![0; p.m()];
    for (g, grp) in p.groups().iter().enumerate() {
        for (f, &x) in grp.iter().enumerate() {
            map[x] = g * p.b() + f;
        }
    }
    Permutation { map }
}

/// Parses a partial map written as `u:v` tokens, one-indexed.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = BTreeMap::new();
    for tok in s.split_whitespace() {
        let (u, v) = tok.split_once(':').ok_or_else(|| Error::Parse(tok.to_string()))?;
        let u: usize = u.parse().map_err(|_| Error::Parse(tok.to_string()))?;
        let v: usize = v.parse().map_err(|_| Error::Parse(tok.to_string()))?;
        out.insert(u, v);
    }
    Ok(out.into_iter().collect())
}
