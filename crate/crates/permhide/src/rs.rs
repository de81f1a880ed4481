//! Bipartite (r,t)-RS graphs: edges split into `t` induced matchings of
//! size `r`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertices on each side are `0..n_rs`; `left[i][j]`, `right[i][j]` are the
/// endpoints of edge `j` of matching `i` (zero-indexed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsGraph {
    pub n_rs: usize,
    pub r: usize,
    pub t: usize,
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RsViolation {
    NotAMatching { matching: usize, edge: usize },
    NotInduced { matching: usize, edge: usize, intruder: usize },
    OutOfRange { matching: usize, edge: usize },
}

impl std::fmt::Display for RsViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RsViolation::NotAMatching { matching, edge } => {
                write!(f, "matching {} edge {} reuses an endpoint", matching + 1, edge + 1)
            }
            RsViolation::NotInduced { matching, edge, intruder } => write!(
                f,
                "edge {} of matching {} joins endpoints of matching {}",
                edge + 1,
                matching + 1,
                intruder + 1
            ),
            RsViolation::OutOfRange { matching, edge } => {
                write!(f, "matching {} edge {} is out of range", matching + 1, edge + 1)
            }
        }
    }
}

impl RsGraph {
    pub fn from_matchings(n_rs: usize, left: Vec<Vec<usize>>, right: Vec<Vec<usize>>) -> Result<Self> {
        let t = left.len();
        let r = left.first().map_or(0, |m| m.len());
        if right.len() != t || left.iter().chain(&right).any(|m| m.len() != r) {
            return Err(Error::Dimension("matchings must all have r edges".into()));
        }
        Ok(RsGraph { n_rs, r, t, left, right })
    }

    pub fn left_of(&self, i: usize, j: usize) -> usize {
        self.left[i][j]
    }

    pub fn right_of(&self, i: usize, j: usize) -> usize {
        self.right[i][j]
    }

    /// `r / n_rs`.
    pub fn alpha(&self) -> f64 {
        self.r as f64 / self.n_rs as f64
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n_rs, self.r, self.t);
        for i in 0..self.t {
            for j in 0..self.r {
                let _ = writeln!(s, "{} {}", self.left[i][j] + 1, self.right[i][j] + 1);
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut nums = text.split_whitespace().map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))));
        let mut next = || nums.next().unwrap_or_else(|| Err(Error::Parse("truncated RS file".into())));
        let (n_rs, r, t) = (next()?, next()?, next()?);
        let mut left = vec![Vec::with_capacity(r); t];
        let mut right = vec![Vec::with_capacity(r); t];
        for i in 0..t {
            for _ in 0..r {
                let (u, v) = (next()?, next()?);
                if u == 0 || v == 0 || u > n_rs || v > n_rs {
                    return Err(Error::Parse(format!("edge {u} {v} outside [1,{n_rs}]")));
                }
                left[i].push(u - 1);
                right[i].push(v - 1);
            }
        }
        RsGraph::from_matchings(n_rs, left, right)
    }
}

/// Matching `(p,q)` over chunk pairs, row-major: edge `j` joins left
/// `p·r + j` to right `q·r + j`. Gives `t = (n_rs/r)²`.
pub fn trivial_rs(n_rs: usize, r: usize) -> Result<RsGraph> {
    if r == 0 || n_rs % r != 0 {
        return Err(Error::Divisibility(format!("r={r} does not divide n_rs={n_rs}")));
    }
    let c = n_rs / r;
    let mut left = Vec::with_capacity(c * c);
    let mut right = Vec::with_capacity(c * c);
    for p in 0..c {
        for q in 0..c {
            left.push((0..r).map(|j| p * r + j).collect());
            right.push((0..r).map(|j| q * r + j).collect());
        }
    }
    RsGraph::from_matchings(n_rs, left, right)
}

/// Checks every matching is a matching and is induced; reports the first
/// offending edge.
pub fn validate_rs(g: &RsGraph) -> std::result::Result<(), RsViolation> {
    let n = g.n_rs;
    for i in 0..g.t {
        for j in 0..g.r {
            if g.left[i][j] >= n || g.right[i][j] >= n {
                return Err(RsViolation::OutOfRange { matching: i, edge: j });
            }
        }
    }
    let mut in_l = vec![usize::MAX; n];
    let mut in_r = vec![usize::MAX; n];
    for i in 0..g.t {
        for j in 0..g.r {
            let (u, v) = (g.left[i][j], g.right[i][j]);
            if in_l[u] == i || in_r[v] == i {
                return Err(RsViolation::NotAMatching { matching: i, edge: j });
            }
            in_l[u] = i;
            in_r[v] = i;
        }
        for i2 in (0..g.t).filter(|&x| x != i) {
            for j2 in 0..g.r {
                if in_l[g.left[i2][j2]] == i && in_r[g.right[i2][j2]] == i {
                    return Err(RsViolation::NotInduced { matching: i2, edge: j2, intruder: i });
                }
            }
        }
    }
    Ok(())
}
