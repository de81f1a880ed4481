//! Sorting networks built from b-sorters, and decomposition of a permutation
//! into permutations that are simple on fixed equipartitions.
//!
//! Networks are stored in standard form: a group is an ascending wire list
//! and sorting it puts the smallest value on its lowest wire. The merge
//! construction is easier to state with ordered groups (the `j`-th smallest
//! value goes to the `j`-th listed wire); [`standardize`] converts.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::perm::{compose, is_simple, Equipartition, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SorterNetwork {
    /// Real wires; padding wires are pruned from the layers.
    pub m: usize,
    /// Largest allowed group.
    pub b: usize,
    /// Zero-indexed ascending wire lists per layer. Wires not listed idle.
    pub layers: Vec<Vec<Vec<usize>>>,
}

impl SorterNetwork {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Sorts `values` in place, layer by layer.
    pub fn apply<T: Ord + Copy>(&self, values: &mut [T]) {
        let mut buf = Vec::with_capacity(self.b);
        for layer in &self.layers {
            for g in layer {
                buf.clear();
                buf.extend(g.iter().map(|&w| values[w]));
                buf.sort();
                for (&w, &v) in g.iter().zip(&buf) {
                    values[w] = v;
                }
            }
        }
    }

    /// Layer `l` as an exact equipartition of `[m]` into groups of size `b`,
    /// packing sorter groups (kept intact) and idle wires first-fit
    /// decreasing.
    pub fn equipartition(&self, l: usize) -> Result<Equipartition> {
        pack_layer(&self.layers[l], self.m, self.b)
    }

    /// One line per layer; groups one-indexed, comma-separated, joined by `;`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for layer in &self.layers {
            let groups: Vec<String> = layer
                .iter()
                .map(|g| g.iter().map(|w| (w + 1).to_string()).collect::<Vec<_>>().join(","))
                .collect();
            let _ = writeln!(s, "{}", groups.join(";"));
        }
        s
    }
}

fn pack_layer(groups: &[Vec<usize>], m: usize, b: usize) -> Result<Equipartition> {
    if b == 0 || m % b != 0 {
        return Err(Error::Divisibility(format!("group size {b} does not divide {m}")));
    }
    let mut covered = vec![false; m];
    let mut items: Vec<Vec<usize>> = Vec::new();
    for g in groups {
        for &w in g {
            covered[w] = true;
        }
        items.push(g.clone());
    }
    items.extend((0..m).filter(|&w| !covered[w]).map(|w| vec![w]));
    items.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut bins: Vec<Vec<usize>> = Vec::new();
    for it in items {
        match bins.iter_mut().find(|bin| bin.len() + it.len() <= b) {
            Some(bin) => bin.extend(it),
            None => bins.push(it),
        }
    }
    if bins.iter().any(|bin| bin.len() != b) {
        return Err(Error::Unsupported(format!("cannot pack layer into groups of exactly {b}")));
    }
    for bin in bins.iter_mut() {
        bin.sort_unstable();
    }
    bins.sort();
    Equipartition::from_zero_based(bins)
}

type Ordered = (Vec<Vec<Vec<usize>>>, Vec<usize>);

/// Merges `b` sorted runs laid out consecutively along `wires`, with
/// `b²`-sorters. Returns ordered layers and the output order.
fn merge_ordered(wires: &[usize], b: usize) -> Ordered {
    let n = wires.len();
    if n <= b * b {
        return (vec![vec![wires.to_vec()]], wires.to_vec());
    }
    let rows = n / b;
    let subs: Vec<Ordered> = (0..b)
        .map(|j| {
            let col: Vec<usize> = (0..rows).map(|i| wires[i * b + j]).collect();
            merge_ordered(&col, b)
        })
        .collect();
    let mut layers = zip_layers(subs.iter().map(|s| s.0.clone()).collect());
    let crow = rows + b - 1;
    let mut c = vec![vec![None; b]; crow];
    for (j, sub) in subs.iter().enumerate() {
        for (i, &w) in sub.1.iter().enumerate() {
            c[i + j][j] = Some(w);
        }
    }
    let order: Vec<usize> = c.iter().flatten().flatten().copied().collect();
    let squares: Vec<Vec<(usize, usize)>> = (0..crow.div_ceil(b))
        .map(|l| (l * b..((l + 1) * b).min(crow)).flat_map(|r| (0..b).map(move |col| (r, col))).collect())
        .collect();
    let real = |cells: &[(usize, usize)]| -> Vec<usize> { cells.iter().filter_map(|&(r, col)| c[r][col]).collect() };
    layers.push(squares.iter().map(|sq| real(sq)).filter(|g: &Vec<usize>| !g.is_empty()).collect());
    let half = b * b / 2;
    let boundary: Vec<Vec<usize>> = squares
        .windows(2)
        .map(|w| {
            let a = &w[0][w[0].len().saturating_sub(half)..];
            let z = &w[1][..half.min(w[1].len())];
            let mut cells = a.to_vec();
            cells.extend_from_slice(z);
            real(&cells)
        })
        .filter(|g| !g.is_empty())
        .collect();
    layers.push(boundary);
    (layers, order)
}

fn zip_layers(parts: Vec<Vec<Vec<Vec<usize>>>>) -> Vec<Vec<Vec<usize>>> {
    let depth = parts.iter().map(|p| p.len()).max().unwrap_or(0);
    (0..depth)
        .map(|d| parts.iter().filter_map(|p| p.get(d)).flatten().cloned().collect())
        .collect()
}

/// Sort with `b`-sorters, `b = s²`: sort `s` runs recursively, then merge.
fn sort_ordered(wires: &[usize], s: usize) -> Ordered {
    let b = s * s;
    if wires.len() <= b {
        return (vec![vec![wires.to_vec()]], wires.to_vec());
    }
    let run = wires.len() / s;
    let subs: Vec<Ordered> = wires.chunks(run).map(|c| sort_ordered(c, s)).collect();
    let mut layers = zip_layers(subs.iter().map(|x| x.0.clone()).collect());
    let runs: Vec<usize> = subs.iter().flat_map(|x| x.1.iter().copied()).collect();
    let (ml, order) = merge_ordered(&runs, s);
    layers.extend(ml);
    (layers, order)
}

/// Converts ordered groups to standard ascending groups by tracking where
/// each ordered wire lives physically. The final output order becomes the
/// identity automatically for networks that sort.
fn standardize(n: usize, ordered: &[Vec<Vec<usize>>]) -> Vec<Vec<Vec<usize>>> {
    let mut phys: Vec<usize> = (0..n).collect();
    ordered
        .iter()
        .map(|layer| {
            layer
                .iter()
                .map(|g| {
                    let mut set: Vec<usize> = g.iter().map(|&w| phys[w]).collect();
                    set.sort_unstable();
                    for (&w, &p) in g.iter().zip(&set) {
                        phys[w] = p;
                    }
                    set
                })
                .collect()
        })
        .collect()
}

/// Removes padding wires `>= m` (they hold +∞ and never move) and groups
/// left with fewer than two wires.
fn prune(layers: Vec<Vec<Vec<usize>>>, m: usize) -> Vec<Vec<Vec<usize>>> {
    layers
        .into_iter()
        .map(|layer| {
            layer
                .into_iter()
                .map(|g| g.into_iter().filter(|&w| w < m).collect::<Vec<_>>())
                .filter(|g| g.len() >= 2)
                .collect()
        })
        .collect()
}

fn int_sqrt(b: usize) -> Option<usize> {
    let s = (b as f64).sqrt().round() as usize;
    (s * s == b).then_some(s)
}

/// Merge network with `b²`-sorters on `m = b^j` wires, merging `b` sorted
/// runs of length `m/b`.
pub fn build_merge_network(m: usize, b: usize) -> Result<SorterNetwork> {
    if b < 2 {
        return Err(Error::Unsupported(format!("merge needs b >= 2, got {b}")));
    }
    let mut x = m;
    while x > 1 && x % b == 0 {
        x /= b;
    }
    if x != 1 || m < b {
        return Err(Error::InvalidParam(format!("m={m} is not a power of b={b}")));
    }
    let wires: Vec<usize> = (0..m).collect();
    let (ordered, _) = merge_ordered(&wires, b);
    Ok(SorterNetwork { m, b: b * b, layers: standardize(m, &ordered) })
}

/// Sorting network with `b`-sorters. For square `b >= 4` this is the
/// recursive sort-runs-then-merge construction on `m` padded to a power of
/// `√b`; for other `b >= 2` it is Batcher's odd-even merge sort with
/// 2-sorters on `m` padded to a power of two.
pub fn build_sort_network(m: usize, b: usize) -> Result<SorterNetwork> {
    if b < 2 {
        return Err(Error::Unsupported(format!("no sorting network with {b}-sorters")));
    }
    if m <= 1 {
        return Ok(SorterNetwork { m, b, layers: Vec::new() });
    }
    if m <= b {
        return Ok(SorterNetwork { m, b, layers: vec![vec![(0..m).collect()]] });
    }
    let layers = match int_sqrt(b) {
        Some(s) if s >= 2 => {
            let mut n = b;
            while n < m {
                n *= s;
            }
            let wires: Vec<usize> = (0..n).collect();
            let (ordered, _) = sort_ordered(&wires, s);
            prune(standardize(n, &ordered), m)
        }
        _ => prune(batcher(m.next_power_of_two()), m),
    };
    let layers = if m % b == 0 { layers.into_iter().flat_map(|l| split_packable(l, m, b)).collect() } else { layers };
    Ok(SorterNetwork { m, b, layers })
}

/// Splits a layer into consecutive sub-layers that each pack into an exact
/// `b`-equipartition. Groups within a layer are disjoint, so running them in
/// sequence changes nothing. Most layers pack as they are.
fn split_packable(layer: Vec<Vec<usize>>, m: usize, b: usize) -> Vec<Vec<Vec<usize>>> {
    if layer.is_empty() || pack_layer(&layer, m, b).is_ok() {
        return vec![layer];
    }
    let mut groups = layer;
    groups.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut cur: Vec<Vec<usize>> = Vec::new();
    for g in groups {
        cur.push(g);
        if pack_layer(&cur, m, b).is_err() {
            let g = cur.pop().expect("just pushed");
            out.push(std::mem::take(&mut cur));
            cur.push(g);
        }
    }
    out.push(cur);
    out
}

fn batcher(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut layers = Vec::new();
    let mut p = 1;
    while p < n {
        let mut k = p;
        while k >= 1 {
            let mut layer = Vec::new();
            let mut j = k % p;
            while j + k < n {
                for i in 0..k.min(n - j - k) {
                    if (i + j) / (2 * p) == (i + j + k) / (2 * p) {
                        layer.push(vec![i + j, i + j + k]);
                    }
                }
                j += 2 * k;
            }
            layers.push(layer);
            k /= 2;
        }
        p *= 2;
    }
    layers
}

/// `σ = γ_1 ∘ γ_2 ∘ ⋯ ∘ γ_d` with each `γ_i` simple on `partitions[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub partitions: Vec<Equipartition>,
    pub gammas: Vec<Permutation>,
}

impl Decomposition {
    pub fn recompose(&self) -> Result<Permutation> {
        let m = self.partitions.first().map_or(0, |p| p.m());
        let mut acc = Permutation::identity(m);
        for g in self.gammas.iter().rev() {
            acc = compose(g, &acc)?;
        }
        Ok(acc)
    }

    pub fn all_simple(&self) -> bool {
        self.gammas.iter().zip(&self.partitions).all(|(g, p)| is_simple(g, p))
    }
}

/// Partitions used by [`decompose`]; they depend only on `(m, b)`.
pub fn decomposition_partitions(m: usize, b: usize) -> Result<Vec<Equipartition>> {
    let net = build_sort_network(m, b)?;
    let mut parts: Vec<Equipartition> = (0..net.depth()).map(|l| net.equipartition(l)).collect::<Result<_>>()?;
    parts.reverse();
    Ok(parts)
}

/// Runs the sort network on the values `σ(1..m)` and records how each layer
/// moves wire contents. If the layers move contents by `π_1, …, π_d`, then
/// sorting means `π_d ∘ ⋯ ∘ π_1 = σ`, so `γ_i = π_{d+1-i}`.
pub fn decompose(sigma: &Permutation, b: usize) -> Result<Decomposition> {
    let m = sigma.len();
    let net = build_sort_network(m, b)?;
    let mut vals: Vec<usize> = sigma.as_slice().to_vec();
    let mut partitions = Vec::with_capacity(net.depth());
    let mut gammas = Vec::with_capacity(net.depth());
    for (l, layer) in net.layers.iter().enumerate() {
        let mut pi: Vec<usize> = (0..m).collect();
        for g in layer {
            let mut by_val: Vec<usize> = g.clone();
            by_val.sort_by_key(|&w| vals[w]);
            // content at by_val[k] ends on wire g[k]
            for (k, &src) in by_val.iter().enumerate() {
                pi[src] = g[k];
            }
            let moved: Vec<usize> = by_val.iter().map(|&w| vals[w]).collect();
            for (&w, v) in g.iter().zip(moved) {
                vals[w] = v;
            }
        }
        partitions.push(net.equipartition(l)?);
        gammas.push(Permutation::from_zero_based(pi)?);
    }
    debug_assert!(vals.iter().enumerate().all(|(i, &v)| i == v));
    partitions.reverse();
    gammas.reverse();
    Ok(Decomposition { partitions, gammas })
}

/// `⌈log_b m⌉`, with `log_b 1 = 0`.
pub fn ceil_log(m: usize, b: usize) -> usize {
    let mut k = 0;
    let mut x = 1usize;
    while x < m {
        x = x.saturating_mul(b);
        k += 1;
    }
    k
}
