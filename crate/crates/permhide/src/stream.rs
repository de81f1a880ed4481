//! Edge streams, the multi-pass streaming model with a measured state
//! budget, baseline matching algorithms and distinguishing experiments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::layered::{LayeredGraph, Provenance};

pub const MAGIC: &str = "PHSTREAM v1";

/// An ordered edge stream over vertices `0..n` (written one-indexed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeStream {
    pub n: usize,
    pub directed: bool,
    pub edges: Vec<(usize, usize)>,
    pub tags: Option<Vec<Provenance>>,
    /// Seed of the shuffle that produced this order, if any. Not serialized.
    pub shuffle_seed: Option<u64>,
}

impl EdgeStream {
    pub fn new(n: usize, directed: bool, edges: Vec<(usize, usize)>, tags: Option<Vec<Provenance>>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n) {
            return Err(Error::Parse(format!("edge ({},{}) outside [1..{n}]", u + 1, v + 1)));
        }
        if tags.as_ref().is_some_and(|t| t.len() != edges.len()) {
            return Err(Error::Parse("tag count differs from edge count".into()));
        }
        Ok(EdgeStream { n, directed, edges, tags, shuffle_seed: None })
    }

    /// Directed stream of a layered graph in canonical order: layer-major,
    /// then by provenance.
    pub fn from_layered(g: &LayeredGraph) -> Self {
        let off = g.layer_offsets();
        let mut order: Vec<usize> = (0..g.edges().len()).collect();
        order.sort_by_key(|&i| (g.edges()[i].layer, g.tags()[i]));
        let edges = order
            .iter()
            .map(|&i| {
                let e = g.edges()[i];
                (off[e.layer as usize] + e.u as usize, off[e.layer as usize + 1] + e.v as usize)
            })
            .collect();
        let tags = order.iter().map(|&i| g.tags()[i]).collect();
        EdgeStream { n: g.num_vertices(), directed: true, edges, tags: Some(tags), shuffle_seed: None }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Uniformly shuffled copy; tags move with their edges.
    pub fn shuffled(&self, seed: u64) -> Self {
        let mut idx: Vec<usize> = (0..self.edges.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        EdgeStream {
            n: self.n,
            directed: self.directed,
            edges: idx.iter().map(|&i| self.edges[i]).collect(),
            tags: self.tags.as_ref().map(|t| idx.iter().map(|&i| t[i]).collect()),
            shuffle_seed: Some(seed),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{MAGIC}\n{} {} {}\n", self.n, self.edges.len(), u8::from(self.directed));
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            match &self.tags {
                Some(t) => writeln!(s, "{} {} {}", u + 1, v + 1, t[i].code()),
                None => writeln!(s, "{} {}", u + 1, v + 1),
            }
            .expect("writing to a String cannot fail");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(Error::Parse(format!("first line must be {MAGIC:?}")));
        }
        let header: Vec<usize> = lines
            .next()
            .ok_or_else(|| Error::Parse("missing header line".into()))?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad header field {x:?}"))))
            .collect::<Result<_>>()?;
        let [n, count, directed] = header[..] else {
            return Err(Error::Parse("header must be \"<n> <edges> <directed>\"".into()));
        };
        if directed > 1 {
            return Err(Error::Parse("directed flag must be 0 or 1".into()));
        }
        let mut edges = Vec::with_capacity(count);
        let mut tags = Vec::new();
        for (i, line) in lines.enumerate() {
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<usize> {
                match s.parse::<usize>() {
                    Ok(x) if x >= 1 => Ok(x - 1),
                    _ => Err(Error::Parse(format!("edge line {}: bad vertex {s:?}", i + 1))),
                }
            };
            match f[..] {
                [u, v] => edges.push((num(u)?, num(v)?)),
                [u, v, t] => {
                    edges.push((num(u)?, num(v)?));
                    tags.push(Provenance::from_code(t)?);
                }
                _ => return Err(Error::Parse(format!("edge line {}: expected \"u v [tag]\"", i + 1))),
            }
        }
        if edges.len() != count {
            return Err(Error::Parse(format!("header announces {count} edges, found {}", edges.len())));
        }
        let tags = match tags.len() {
            0 => None,
            t if t == count => Some(tags),
            _ => return Err(Error::Parse("either every edge or no edge carries a tag".into())),
        };
        EdgeStream::new(n, directed == 1, edges, tags)
    }
}

/// Read-only random tape fixed before the stream starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomTape(Vec<u64>);

impl RandomTape {
    pub fn new(seed: u64, words: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        RandomTape((0..words).map(|_| rng.gen()).collect())
    }

    pub fn empty() -> Self {
        RandomTape(Vec::new())
    }

    pub fn word(&self, i: usize) -> u64 {
        self.0[i % self.0.len().max(1)]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub trait StreamAlgorithm {
    type State: Clone + PartialEq + std::fmt::Debug;
    type Output;

    /// State budget in bits; `None` is unbounded.
    fn budget_bits(&self) -> Option<u64>;
    fn init(&self, n: usize, tape: &RandomTape) -> Self::State;
    fn update(&self, state: &mut Self::State, edge: (usize, usize), tape: &RandomTape);
    /// Called after every pass, with the one-indexed pass number.
    fn end_pass(&self, _state: &mut Self::State, _pass: usize, _tape: &RandomTape) {}
    fn finalize(&self, state: &Self::State, tape: &RandomTape) -> Self::Output;
    fn serialize(&self, state: &Self::State) -> Vec<u8>;

    /// Must equal `8 * serialize(state).len()`; override when that is cheaper
    /// to compute directly.
    fn state_bits(&self, state: &Self::State) -> u64 {
        8 * self.serialize(state).len() as u64
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub passes: usize,
    pub wall_clock: Option<Duration>,
}

impl RunConfig {
    pub fn passes(p: usize) -> Self {
        RunConfig { passes: p, wall_clock: None }
    }
}

#[derive(Clone, Debug)]
pub struct RunResult<S, O> {
    pub output: O,
    pub final_state: S,
    /// State after each pass (after `end_pass`).
    pub snapshots: Vec<S>,
    pub max_bits: u64,
}

fn charge<A: StreamAlgorithm>(alg: &A, state: &A::State, index: usize, max_bits: &mut u64) -> Result<()> {
    let bits = alg.state_bits(state);
    *max_bits = (*max_bits).max(bits);
    match alg.budget_bits() {
        Some(budget) if bits > budget => Err(Error::BudgetExceeded { index, bits, budget }),
        _ => Ok(()),
    }
}

/// Replays `stream` for `cfg.passes` passes, charging the serialized state
/// after every element. The error index counts elements across passes.
pub fn run_passes<A: StreamAlgorithm>(alg: &A, stream: &EdgeStream, cfg: &RunConfig, tape: &RandomTape) -> Result<RunResult<A::State, A::Output>> {
    let start = Instant::now();
    let mut state = alg.init(stream.n, tape);
    let mut max_bits = 0;
    charge(alg, &state, 0, &mut max_bits)?;
    let mut snapshots = Vec::with_capacity(cfg.passes);
    for pass in 1..=cfg.passes {
        for (i, &e) in stream.edges.iter().enumerate() {
            alg.update(&mut state, e, tape);
            let index = (pass - 1) * stream.edges.len() + i;
            charge(alg, &state, index, &mut max_bits)?;
            if let Some(cap) = cfg.wall_clock {
                if start.elapsed() > cap {
                    return Err(Error::Unsupported(format!("wall-clock cap {cap:?} hit at element {index}")));
                }
            }
        }
        alg.end_pass(&mut state, pass, tape);
        charge(alg, &state, pass * stream.edges.len(), &mut max_bits)?;
        snapshots.push(state.clone());
    }
    let output = alg.finalize(&state, tape);
    Ok(RunResult { output, final_state: state, snapshots, max_bits })
}

/// Counts stream elements in a 64-bit register.
pub struct Counter;

impl StreamAlgorithm for Counter {
    type State = u64;
    type Output = u64;

    fn budget_bits(&self) -> Option<u64> {
        Some(64)
    }
    fn init(&self, _n: usize, _tape: &RandomTape) -> u64 {
        0
    }
    fn update(&self, state: &mut u64, _edge: (usize, usize), _tape: &RandomTape) {
        *state += 1;
    }
    fn finalize(&self, state: &u64, _tape: &RandomTape) -> u64 {
        *state
    }
    fn serialize(&self, state: &u64) -> Vec<u8> {
        state.to_le_bytes().to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingState {
    pub mate: Vec<Option<u32>>,
    pub pairs: usize,
    /// Per matched vertex, one free neighbour seen in the current pass.
    pub cand: Vec<Option<u32>>,
    pub cands: usize,
    /// Current pass, one-indexed. Not part of the charged state.
    pub pass: usize,
}

impl MatchingState {
    fn new(n: usize) -> Self {
        MatchingState { mate: vec![None; n], pairs: 0, cand: vec![None; n], cands: 0, pass: 1 }
    }

    pub fn matching(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, v)| v.map(|v| (u, v as usize)))
            .filter(|&(u, v)| u < v)
            .collect()
    }
}

/// Greedy maximal matching in pass 1; later passes each record one free
/// neighbour per matched vertex and augment the resulting length-3 paths
/// at the end of the pass. With `passes = 1` this is plain greedy.
pub struct AugmentingBaseline {
    pub passes: usize,
    pub budget: Option<u64>,
}

pub fn greedy_matching_baseline() -> AugmentingBaseline {
    AugmentingBaseline { passes: 1, budget: None }
}

pub fn augmenting_baseline(p: usize) -> AugmentingBaseline {
    AugmentingBaseline { passes: p, budget: None }
}

impl StreamAlgorithm for AugmentingBaseline {
    type State = MatchingState;
    type Output = Vec<(usize, usize)>;

    fn budget_bits(&self) -> Option<u64> {
        self.budget
    }

    fn init(&self, n: usize, _tape: &RandomTape) -> MatchingState {
        MatchingState::new(n)
    }

    fn update(&self, s: &mut MatchingState, (u, v): (usize, usize), _tape: &RandomTape) {
        if u == v {
            return;
        }
        match (s.mate[u], s.mate[v]) {
            (None, None) => {
                s.mate[u] = Some(v as u32);
                s.mate[v] = Some(u as u32);
                s.pairs += 1;
            }
            (Some(_), None) if s.pass > 1 && s.cand[u].is_none() => {
                s.cand[u] = Some(v as u32);
                s.cands += 1;
            }
            (None, Some(_)) if s.pass > 1 && s.cand[v].is_none() => {
                s.cand[v] = Some(u as u32);
                s.cands += 1;
            }
            _ => {}
        }
    }

    fn end_pass(&self, s: &mut MatchingState, pass: usize, _tape: &RandomTape) {
        for (a, b) in s.matching() {
            let (Some(fa), Some(fb)) = (s.cand[a], s.cand[b]) else { continue };
            let (fa, fb) = (fa as usize, fb as usize);
            if fa != fb && s.mate[fa].is_none() && s.mate[fb].is_none() {
                s.mate[fa] = Some(a as u32);
                s.mate[a] = Some(fa as u32);
                s.mate[fb] = Some(b as u32);
                s.mate[b] = Some(fb as u32);
                s.pairs += 1;
            }
        }
        s.cand.iter_mut().for_each(|c| *c = None);
        s.cands = 0;
        s.pass = pass + 1;
    }

    fn finalize(&self, s: &MatchingState, _tape: &RandomTape) -> Vec<(usize, usize)> {
        s.matching()
    }

    fn serialize(&self, s: &MatchingState) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 * (s.pairs + s.cands));
        for (u, v) in s.matching() {
            out.extend_from_slice(&(u as u32).to_le_bytes());
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for (u, c) in s.cand.iter().enumerate() {
            if let Some(c) = c {
                out.extend_from_slice(&(u as u32).to_le_bytes());
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
        out
    }

    fn state_bits(&self, s: &MatchingState) -> u64 {
        64 * (s.pairs + s.cands) as u64
    }
}

/// Stores the whole stream (unbounded budget).
pub struct FullMemory;

impl StreamAlgorithm for FullMemory {
    /// `(n, pass, edges)`; only the first pass is recorded.
    type State = (usize, usize, Vec<(usize, usize)>);
    type Output = (usize, Vec<(usize, usize)>);

    fn budget_bits(&self) -> Option<u64> {
        None
    }
    fn init(&self, n: usize, _tape: &RandomTape) -> Self::State {
        (n, 1, Vec::new())
    }
    fn update(&self, s: &mut Self::State, e: (usize, usize), _tape: &RandomTape) {
        if s.1 == 1 {
            s.2.push(e);
        }
    }
    fn end_pass(&self, s: &mut Self::State, pass: usize, _tape: &RandomTape) {
        s.1 = pass + 1;
    }
    fn finalize(&self, s: &Self::State, _tape: &RandomTape) -> Self::Output {
        (s.0, s.2.clone())
    }
    fn serialize(&self, s: &Self::State) -> Vec<u8> {
        s.2.iter().flat_map(|&(u, v)| [(u as u32).to_le_bytes(), (v as u32).to_le_bytes()].concat()).collect()
    }
    fn state_bits(&self, s: &Self::State) -> u64 {
        64 * s.2.len() as u64
    }
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Clone, Debug, Serialize)]
pub struct AdvantageReport {
    /// Samples drawn from each distribution.
    pub trials: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Draws `trials` streams from each sampler, runs `alg` for `p` passes and
/// asks `guess` whether the output came from the second sampler.
pub fn advantage_estimate<A, S1, S2, D>(
    mut dist1: S1,
    mut dist2: S2,
    alg: &A,
    mut guess: D,
    trials: usize,
    p: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AdvantageReport>
where
    A: StreamAlgorithm,
    S1: FnMut(&mut ChaCha8Rng) -> Result<EdgeStream>,
    S2: FnMut(&mut ChaCha8Rng) -> Result<EdgeStream>,
    D: FnMut(&A::Output, &mut ChaCha8Rng) -> Result<bool>,
{
    if trials < 30 {
        return Err(Error::InvalidParam(format!("need at least 30 trials, got {trials}")));
    }
    let cfg = RunConfig::passes(p);
    let mut correct = 0;
    for _ in 0..trials {
        for second in [false, true] {
            let mut fork = ChaCha8Rng::seed_from_u64(rng.gen());
            let stream = if second { dist2(&mut fork)? } else { dist1(&mut fork)? };
            let tape = RandomTape::new(fork.gen(), 64);
            let out = run_passes(alg, &stream, &cfg, &tape)?.output;
            if guess(&out, &mut fork)? == second {
                correct += 1;
            }
        }
    }
    let total = 2 * trials;
    let (ci_low, ci_high) = wilson_interval(correct, total);
    Ok(AdvantageReport { trials, correct, accuracy: correct as f64 / total as f64, ci_low, ci_high })
}

/// The party that owns an edge in a partitioned replay.
fn party_of(tag: Provenance) -> String {
    match tag {
        Provenance::Player(i) => format!("player{i}"),
        _ => "referee".into(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReplayReport {
    pub passes: usize,
    pub handoffs_per_pass: Vec<usize>,
    /// Bytes each party wrote into handoff messages, over all passes.
    pub bytes_per_party: BTreeMap<String, u64>,
    pub max_message_bits: u64,
}

fn segments(stream: &EdgeStream) -> Result<Vec<(String, Vec<(usize, usize)>)>> {
    let tags = stream.tags.as_ref().ok_or(Error::MissingTags)?;
    let mut players: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut referee = Vec::new();
    for (&e, &t) in stream.edges.iter().zip(tags) {
        match t {
            Provenance::Player(i) => players.entry(i).or_default().push(e),
            _ => referee.push(e),
        }
    }
    let mut out: Vec<(String, Vec<(usize, usize)>)> = players.into_iter().map(|(i, es)| (party_of(Provenance::Player(i)), es)).collect();
    out.push(("referee".into(), referee));
    Ok(out)
}

/// Simulates the player/referee pattern: each pass feeds players `1..k` in
/// order, then the referee's edges. Each player hands the serialized state
/// to the next party when its segment ends. With `fake`, passes `1..p−1`
/// use the referee edges of `fake` in place of the real ones.
pub fn partitioned_replay<A: StreamAlgorithm>(
    stream: &EdgeStream,
    alg: &A,
    p: usize,
    tape: &RandomTape,
    fake: Option<&EdgeStream>,
) -> Result<ReplayReport> {
    let real = segments(stream)?;
    let fake_ref = match fake {
        Some(f) => Some(segments(f)?.pop().expect("segments always ends with the referee").1),
        None => None,
    };
    let mut state = alg.init(stream.n, tape);
    let mut rep = ReplayReport { passes: p, handoffs_per_pass: Vec::new(), bytes_per_party: BTreeMap::new(), max_message_bits: 0 };
    for pass in 1..=p {
        let mut handoffs = 0;
        for (party, edges) in &real {
            let edges = match (&fake_ref, party.as_str()) {
                (Some(f), "referee") if pass < p => f,
                _ => edges,
            };
            for &e in edges {
                alg.update(&mut state, e, tape);
            }
            if party != "referee" {
                let bits = alg.state_bits(&state);
                if let Some(budget) = alg.budget_bits() {
                    if bits > budget {
                        return Err(Error::BudgetExceeded { index: handoffs, bits, budget });
                    }
                }
                *rep.bytes_per_party.entry(party.clone()).or_default() += bits.div_ceil(8);
                rep.max_message_bits = rep.max_message_bits.max(bits);
                handoffs += 1;
            }
        }
        alg.end_pass(&mut state, pass, tape);
        rep.handoffs_per_pass.push(handoffs);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k22() -> EdgeStream {
        EdgeStream::new(4, false, vec![(0, 2), (0, 3), (1, 2), (1, 3)], None).unwrap()
    }

    #[test]
    fn text_roundtrip() {
        let s = EdgeStream::new(3, true, vec![(0, 1), (1, 2)], Some(vec![Provenance::Player(1), Provenance::Referee])).unwrap();
        let t = s.to_text();
        assert_eq!(t, "PHSTREAM v1\n3 2 1\n1 2 p1\n2 3 r\n");
        assert_eq!(EdgeStream::from_text(&t).unwrap(), s);
        assert!(EdgeStream::from_text("PHSTREAM v1\n3 1 1\n1 4\n").is_err());
        assert!(EdgeStream::from_text("PHSTREAM v1\n3 2 1\n1 2\n").is_err());
        assert!(EdgeStream::from_text("PHSTREAM v1\n3 2 0\n1 2 p1\n2 3\n").is_err());
    }

    #[test]
    fn counter_and_budget() {
        let s = k22();
        let r = run_passes(&Counter, &s, &RunConfig::passes(3), &RandomTape::empty()).unwrap();
        assert_eq!(r.output, 12);
        assert_eq!(r.snapshots, vec![4, 8, 12]);
        let tight = AugmentingBaseline { passes: 1, budget: Some(64) };
        let long = EdgeStream::new(6, false, vec![(0, 1), (2, 3), (4, 5)], None).unwrap();
        match run_passes(&tight, &long, &RunConfig::passes(1), &RandomTape::empty()) {
            Err(Error::BudgetExceeded { index, bits, budget }) => assert_eq!((index, bits, budget), (1, 128, 64)),
            other => panic!("expected budget failure, got {other:?}"),
        }
    }

    #[test]
    fn greedy_hand_traces() {
        let r = run_passes(&greedy_matching_baseline(), &k22(), &RunConfig::passes(1), &RandomTape::empty()).unwrap();
        assert_eq!(r.output, vec![(0, 2), (1, 3)]);
        let pm = EdgeStream::new(6, false, vec![(0, 3), (1, 4), (2, 5)], None).unwrap();
        let r = run_passes(&greedy_matching_baseline(), &pm, &RunConfig::passes(1), &RandomTape::empty()).unwrap();
        assert_eq!(r.output.len(), 3);
    }

    #[test]
    fn two_pass_augments_path() {
        // Path 0-1-2-3 streamed middle edge first: greedy takes (1,2) only.
        let s = EdgeStream::new(4, false, vec![(1, 2), (0, 1), (2, 3)], None).unwrap();
        let one = run_passes(&augmenting_baseline(1), &s, &RunConfig::passes(1), &RandomTape::empty()).unwrap();
        assert_eq!(one.output.len(), 1);
        let two = run_passes(&augmenting_baseline(2), &s, &RunConfig::passes(2), &RandomTape::empty()).unwrap();
        assert_eq!(two.output, vec![(0, 1), (2, 3)]);
        let again = run_passes(&augmenting_baseline(2), &s, &RunConfig::passes(2), &RandomTape::empty()).unwrap();
        assert_eq!(two.snapshots, again.snapshots);
    }

    #[test]
    fn serialized_size_matches_state_bits() {
        let s = EdgeStream::new(8, false, vec![(1, 2), (0, 1), (2, 3), (4, 5), (5, 6)], None).unwrap();
        let alg = augmenting_baseline(2);
        let tape = RandomTape::empty();
        let mut st = alg.init(8, &tape);
        for &e in &s.edges {
            alg.update(&mut st, e, &tape);
            assert_eq!(alg.state_bits(&st), 8 * alg.serialize(&st).len() as u64);
        }
        let mut fm = FullMemory.init(8, &tape);
        FullMemory.update(&mut fm, (0, 1), &tape);
        assert_eq!(FullMemory.state_bits(&fm), 8 * FullMemory.serialize(&fm).len() as u64);
    }

    #[test]
    fn wilson_contains_estimate() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!(lo < 0.5 && hi > 0.5);
        assert!((lo - 0.4038).abs() < 1e-3);
        assert!(wilson_interval(10, 10).1 > 1.0 - 1e-12);
    }

    #[test]
    fn replay_handoffs() {
        let one = EdgeStream::new(4, true, vec![(0, 1), (2, 3)], Some(vec![Provenance::Player(1), Provenance::Referee])).unwrap();
        let rep = partitioned_replay(&one, &Counter, 2, &RandomTape::empty(), None).unwrap();
        assert_eq!(rep.handoffs_per_pass, vec![1, 1]);
        assert!(partitioned_replay(&k22(), &Counter, 1, &RandomTape::empty(), None).is_err());
    }
}
