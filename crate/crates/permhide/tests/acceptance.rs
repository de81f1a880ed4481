//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use permhide::blocks::{multi_block, PermMatrix};
use permhide::dist::{
    build_irreps, concat_decay_check, convolution_theorem_check, fourier, inverse_fourier, kl, plancherel_check,
    strengthened_pinsker_check, tvd, DistSb,
};
use permhide::hiding::{gen_general, gen_simple, random_lex_simple, vertex_count, GenParams};
use permhide::hph::{referee_answer, sample_instance, zero_info_guess, Answer, MultiHphInstance, Verdict};
use permhide::layered::extract_permutation;
use permhide::matching::{bipartite_of, hopcroft_karp, max_matching, max_matching_of_edges, sigma_cross, sigma_eq};
use permhide::perm::{compose, factorial, is_simple, join, Equipartition, PermVector, Permutation};
use permhide::rs::trivial_rs;
use permhide::sorting::{build_sort_network, ceil_log, decompose};
use permhide::stream::{advantage_estimate, greedy_matching_baseline, run_passes, EdgeStream, FullMemory, RandomTape, RunConfig};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_simple_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let params = GenParams::new(16, 4, 2, 1).map_err(|e| e.to_string())?;
    let lex = Equipartition::lex(16, 4).unwrap();
    for i in 0..200 {
        let rho = random_lex_simple(16, 4, &mut rng);
        let g = gen_simple(&rho, &lex, &params, &mut rng).map_err(|e| e.to_string())?;
        let got = extract_permutation(&g, 16).map_err(|e| format!("p=1 sample {i}: {e}"))?;
        check(got == rho, format!("p=1 sample {i}: extracted {got:?}, want {rho:?}"))?;
    }
    let params = GenParams::new(8, 2, 2, 2).map_err(|e| e.to_string())?;
    let lex = Equipartition::lex(8, 2).unwrap();
    for i in 0..50 {
        let rho = random_lex_simple(8, 2, &mut rng);
        let g = gen_simple(&rho, &lex, &params, &mut rng).map_err(|e| e.to_string())?;
        let got = extract_permutation(&g, 8).map_err(|e| format!("p=2 sample {i}: {e}"))?;
        check(got == rho, format!("p=2 sample {i}: extracted {got:?}, want {rho:?}"))?;
    }
    Ok("200 samples at p=1 (m=16,b=4) and 50 at p=2 (m=8,b=2) extract exactly".into())
}

fn c2_general_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let runs = [(16, 4, 1, 100), (8, 2, 2, 20)];
    for (m, b, p, n) in runs {
        let params = GenParams::new(m, b, 2, p).map_err(|e| e.to_string())?;
        for i in 0..n {
            let sigma = Permutation::random(m, &mut rng);
            let g = gen_general(&sigma, &params, &mut rng).map_err(|e| e.to_string())?;
            let got = extract_permutation(&g, m).map_err(|e| format!("m={m} p={p} sample {i}: {e}"))?;
            check(got == sigma, format!("m={m} p={p} sample {i}: extracted {got:?}, want {sigma:?}"))?;
        }
    }
    Ok("100 σ ∈ S_16 (b=4,p=1) and 20 σ ∈ S_8 (b=2,p=2) extract exactly".into())
}

fn c3_vertex_accounting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    // Closed form for p=1 Lex-simple samples.
    for (m, b, k) in [(16, 4, 2), (8, 2, 2), (8, 2, 1), (12, 3, 3)] {
        let params = GenParams::new(m, b, k, 1).map_err(|e| e.to_string())?;
        let n_rs = 2 * (2 * m / b);
        let want = 6 * k * n_rs * b + 2 * m;
        let lex = Equipartition::lex(m, b).unwrap();
        for _ in 0..5 {
            let g = gen_simple(&random_lex_simple(m, b, &mut rng), &lex, &params, &mut rng).map_err(|e| e.to_string())?;
            check(g.num_vertices() == want, format!("m={m} b={b} k={k}: {} vertices, closed form {want}", g.num_vertices()))?;
        }
        check(vertex_count(&params, false).unwrap() == want, format!("vertex_count disagrees with closed form at m={m}"))?;
    }
    // Simple parameter sets of criterion 1, general ones of criterion 2.
    for (m, b, p) in [(16, 4, 1), (8, 2, 2)] {
        let params = GenParams::new(m, b, 2, p).unwrap();
        let want = vertex_count(&params, false).unwrap();
        let lex = Equipartition::lex(m, b).unwrap();
        for _ in 0..10 {
            let g = gen_simple(&random_lex_simple(m, b, &mut rng), &lex, &params, &mut rng).unwrap();
            check(g.num_vertices() == want, format!("simple m={m} p={p}: {} vs {want}", g.num_vertices()))?;
        }
    }
    for (m, b, p) in [(16, 4, 1), (8, 2, 2)] {
        let params = GenParams::new(m, b, 2, p).unwrap();
        let want = vertex_count(&params, true).unwrap();
        for _ in 0..5 {
            let g = gen_general(&Permutation::random(m, &mut rng), &params, &mut rng).unwrap();
            check(g.num_vertices() == want, format!("general m={m} p={p}: {} vs {want}", g.num_vertices()))?;
        }
    }
    Ok("measured counts equal vertex_count(); p=1 Lex count equals 6k·n_rs·b + 2m".into())
}

fn c4_dichotomy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut summary = Vec::new();
    for m in [4, 8] {
        for p in [1, 2] {
            let params = GenParams::new(m, 2, 2, p).map_err(|e| e.to_string())?;
            for i in 0..20 {
                for (name, sigma, extra) in [("σ_=", sigma_eq(m), m / 2), ("σ_×", sigma_cross(m), 0)] {
                    let g = gen_general(&sigma, &params, &mut rng).map_err(|e| e.to_string())?;
                    let n = g.num_vertices();
                    let mm = max_matching(&bipartite_of(&g, m).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                    check(mm.size == n + extra, format!("m={m} p={p} trial {i} {name}: size {} expected {}", mm.size, n + extra))?;
                }
            }
            summary.push(format!("m={m},p={p}: 20/20 + 20/20"));
        }
    }
    Ok(summary.join("; "))
}

fn c5_sorting() -> Outcome {
    for b in [2, 4] {
        let net = build_sort_network(12, b).map_err(|e| e.to_string())?;
        for mask in 0u32..(1 << 12) {
            let mut v: Vec<u8> = (0..12).map(|i| ((mask >> i) & 1) as u8).collect();
            net.apply(&mut v);
            check(v.windows(2).all(|w| w[0] <= w[1]), format!("b={b}: 0-1 input {mask:012b} not sorted"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for b in [2, 4, 8] {
        for i in 0..1000 {
            let sigma = Permutation::random(64, &mut rng);
            let d = decompose(&sigma, b).map_err(|e| e.to_string())?;
            let mut acc = Permutation::identity(64);
            for g in d.gammas.iter().rev() {
                acc = compose(g, &acc).unwrap();
            }
            check(acc == sigma, format!("b={b} sample {i}: recomposition differs"))?;
            for (g, p) in d.gammas.iter().zip(&d.partitions) {
                check(is_simple(g, p), format!("b={b} sample {i}: a layer is not simple on its partition"))?;
            }
        }
    }
    let mut worst = String::new();
    for (m, b) in [(12, 2), (12, 4), (16, 2), (16, 4), (64, 2), (64, 4), (64, 16), (256, 4), (256, 16), (81, 9)] {
        let depth = build_sort_network(m, b).map_err(|e| e.to_string())?.depth();
        let bound = 4 * ceil_log(m, b).pow(2);
        check(depth <= bound, format!("m={m} b={b}: depth {depth} > {bound}"))?;
        if m == 64 && b == 4 {
            worst = format!("S(64,4) depth {depth} ≤ {bound}");
        }
    }
    // Non-square b > 2 uses 2-sorter Batcher layers; its depth is reported, not bounded.
    let fallback = build_sort_network(64, 8).map_err(|e| e.to_string())?.depth();
    Ok(format!("0-1 exhaustive at m=12, 3000 decompositions of S_64, {worst}; b=8 fallback depth {fallback} (bound {} not claimed)", 4 * ceil_log(64, 8).pow(2)))
}

fn c6_tightness() -> Outcome {
    let eps = [0.25, 1.0 / 9.0, 1.0 / 16.0];
    let mut cases = 0;
    let mut worst: f64 = 0.0;
    for b in [2, 3, 4] {
        for g in 1..=4u32 {
            for code in 0..3usize.pow(g) {
                let es: Vec<f64> = (0..g).map(|i| eps[code / 3usize.pow(i) % 3]).collect();
                let nus: Vec<DistSb> = es.iter().map(|&e| DistSb::parity(b, e).unwrap()).collect();
                let rep = concat_decay_check(&nus).map_err(|e| e.to_string())?;
                let prod: f64 = es.iter().product();
                let err = (rep.lhs - prod).abs();
                worst = worst.max(err);
                check(err <= 1e-12, format!("b={b} ε={es:?}: lhs {} vs ∏ε {prod}", rep.lhs))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} parity tuples meet ∏ε_i with equality (max error {worst:.1e})"))
}

fn c7_decay() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut min_slack = f64::INFINITY;
    for i in 0..1000 {
        let nus: Vec<DistSb> = (0..3).map(|_| DistSb::random(3, &mut rng).unwrap()).collect();
        let rep = concat_decay_check(&nus).map_err(|e| e.to_string())?;
        min_slack = min_slack.min(rep.bound - rep.lhs);
        check(rep.lhs <= rep.bound + 1e-12, format!("tuple {i}: {} > {}", rep.lhs, rep.bound))?;
    }
    Ok(format!("1000 random tuples (b=3,g=3), min slack {min_slack:.3e}"))
}

fn c8_fourier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for b in 1..=5 {
        let ir = build_irreps(b).map_err(|e| e.to_string())?;
        check(ir.dimension_sum_sq() == factorial(b), format!("b={b}: Σd² = {}", ir.dimension_sum_sq()))?;
        check(ir.homomorphism_error() <= 1e-9, format!("b={b}: homomorphism error {}", ir.homomorphism_error()))?;
        for i in 0..100 {
            let f = DistSb::random(b, &mut rng).unwrap();
            let g = DistSb::random(b, &mut rng).unwrap();
            let back = inverse_fourier(&fourier(&f, &ir).unwrap(), &ir);
            let err = back.iter().zip(f.probs()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            check(err <= 1e-9, format!("b={b} dist {i}: roundtrip error {err}"))?;
            let ct = convolution_theorem_check(&f, &g, &ir).unwrap();
            check(ct.err_forward <= 1e-9, format!("b={b} dist {i}: convolution theorem error {}", ct.err_forward))?;
            let pl = plancherel_check(&f, &g, &ir).unwrap();
            check((pl.direct - pl.spectral).abs() <= 1e-9, format!("b={b} dist {i}: Plancherel {} vs {}", pl.direct, pl.spectral))?;
        }
    }
    Ok("b=1..5: Σd²=b!, homomorphism, roundtrip, convolution theorem, Plancherel within 1e-9".into())
}

fn c9_pinsker() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(109);
    for i in 0..1000 {
        let mu = DistSb::random(3, &mut rng).unwrap();
        let nu = DistSb::random(3, &mut rng).unwrap();
        let (d, k) = (tvd(&mu, &nu).unwrap(), kl(&mu, &nu).unwrap());
        check(d <= (k / 2.0).sqrt() + 1e-12, format!("pair {i}: tvd {d} > sqrt(kl/2) {}", (k / 2.0).sqrt()))?;
        let sp = strengthened_pinsker_check(&mu, &nu).map_err(|e| e.to_string())?;
        check(sp.lhs >= sp.rhs - 1e-12, format!("pair {i}: strengthened Pinsker kl {} < rhs {}", sp.lhs, sp.rhs))?;
    }
    Ok("1000 random pairs at b=3".into())
}

fn c10_hph() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let yes = PermVector::new((0..2).map(|_| Permutation::random(2, &mut rng)).collect()).unwrap();
    let mut no = yes.clone();
    no.entries[1] = compose(&no.entries[1], &Permutation::from_images(&[2, 1]).unwrap()).unwrap();
    let trials = 10_000;
    let mut zero_correct = 0;
    for s in 0..trials as u64 {
        let inst = sample_instance(4, 2, 2, 2, &yes, &no, s, &mut ChaCha8Rng::seed_from_u64(s)).map_err(|e| e.to_string())?;
        let want = if inst.answer == Answer::Yes { Verdict::Yes } else { Verdict::No };
        check(referee_answer(&inst).map_err(|e| e.to_string())? == want, format!("seed {s}: wrong referee answer"))?;
        if zero_info_guess(&inst, &mut rng).unwrap() == inst.answer {
            zero_correct += 1;
        }
    }
    let acc = zero_correct as f64 / trials as f64;
    let sigma = (0.25 / trials as f64).sqrt();
    check((acc - 0.5).abs() <= 3.0 * sigma, format!("zero-information accuracy {acc} outside 1/2 ± 3σ"))?;

    // Exhaustive family r=2, t=1, k=1, b=2: every Σ, M, Γ and both targets,
    // checked against the multi-block graph's extracted permutation.
    let rs = trivial_rs(2, 2).unwrap();
    let s2 = [Permutation::identity(2), Permutation::from_images(&[2, 1]).unwrap()];
    let yes = PermVector::new(vec![s2[0].clone()]).unwrap();
    let no = PermVector::new(vec![s2[1].clone()]).unwrap();
    let mut count = 0;
    for a in &s2 {
        for c in &s2 {
            let sigma = PermMatrix::new(1, 2, vec![a.clone(), c.clone()]).unwrap();
            for e in 0..2 {
                for g in &s2 {
                    let hyper = vec![vec![e]];
                    let gamma = PermVector::new(vec![g.clone()]).unwrap();
                    let star = extract_permutation(&multi_block(&rs, &[sigma.clone()], &[0], &hyper).unwrap(), 2).unwrap();
                    let total = compose(&star, &join(&gamma)).unwrap();
                    let answer = if total == join(&yes) { Answer::Yes } else { Answer::No };
                    let inst = MultiHphInstance {
                        r: 2,
                        t: 1,
                        b: 2,
                        k: 1,
                        sigmas: vec![sigma.clone()],
                        l: vec![0],
                        hyper,
                        gamma,
                        yes: yes.clone(),
                        no: no.clone(),
                        answer,
                        seed: 0,
                    };
                    let want = if answer == Answer::Yes { Verdict::Yes } else { Verdict::No };
                    check(referee_answer(&inst).map_err(|e| e.to_string())? == want, "exhaustive family: wrong answer")?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("10^4 instances recovered, {count} exhaustive cases, zero-information accuracy {acc:.4}"))
}

fn c11_harness() -> Outcome {
    let m = 8;
    let params = GenParams::new(m, 2, 2, 1).unwrap();
    let n = vertex_count(&params, true).unwrap();
    let sampler = |sigma: Permutation| {
        let params = params.clone();
        move |r: &mut ChaCha8Rng| Ok(bipartite_of(&gen_general(&sigma, &params, r)?, m)?.to_stream())
    };
    let exact = |out: &(usize, Vec<(usize, usize)>), _: &mut ChaCha8Rng| Ok(max_matching_of_edges(out.0, &out.1)? < n + m / 2);
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let full = advantage_estimate(sampler(sigma_eq(m)), sampler(sigma_cross(m)), &FullMemory, exact, 30, 1, &mut rng).map_err(|e| e.to_string())?;
    check(full.accuracy == 1.0, format!("full-memory accuracy {}", full.accuracy))?;
    let null = advantage_estimate(sampler(sigma_eq(m)), sampler(sigma_eq(m)), &FullMemory, exact, 30, 1, &mut rng).map_err(|e| e.to_string())?;
    let sigma = (0.25 / 60.0f64).sqrt();
    check((null.accuracy - 0.5).abs() <= 3.0 * sigma, format!("null accuracy {}", null.accuracy))?;
    for i in 0..100 {
        let (nl, nr) = (rng.gen_range(2..30), rng.gen_range(2..30));
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut adj = vec![Vec::new(); nl];
        for (u, row) in adj.iter_mut().enumerate() {
            for v in 0..nr {
                if rng.gen_bool(0.15) {
                    edges.push((u, nl + v));
                    row.push(v);
                }
            }
        }
        edges.shuffle(&mut rng);
        let stream = EdgeStream::new(nl + nr, false, edges, None).unwrap();
        let greedy = run_passes(&greedy_matching_baseline(), &stream, &RunConfig::passes(1), &RandomTape::empty()).unwrap().output.len();
        let opt = hopcroft_karp(&adj, nr).size;
        check(2 * greedy >= opt, format!("instance {i}: greedy {greedy} < opt {opt} / 2"))?;
    }
    Ok(format!("full-memory accuracy {:.2}, null accuracy {:.3}, greedy ≥ opt/2 on 100 instances", full.accuracy, null.accuracy))
}

fn c12_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bin = env!("CARGO_BIN_EXE_permhide");
    let mut outs = Vec::new();
    for run in ["a", "b"] {
        for (name, args) in [("graph", vec!["gen", "random:7", "--m", "8", "--p", "2", "--seed", "42"]), ("hph", vec!["gen", "id", "--kind", "hph", "--seed", "5"])] {
            let out = dir.path().join(run).join(name);
            let status = Command::new(bin).args(&args).arg("--out").arg(&out).output().map_err(|e| e.to_string())?;
            check(status.status.success(), format!("gen failed: {}", String::from_utf8_lossy(&status.stderr)))?;
            outs.push(out);
        }
    }
    let mut files = 0;
    for (a, b) in outs[..2].iter().zip(&outs[2..]) {
        let mut names: Vec<_> = std::fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for name in names {
            let (x, y) = (std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
            check(x == y, format!("{} differs between runs", name.to_string_lossy()))?;
            files += 1;
        }
    }
    Ok(format!("{files} output files byte-identical across two runs, manifests included"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("permutation-graph soundness (simple generator)", c1_simple_soundness),
        ("general hiding soundness", c2_general_soundness),
        ("vertex accounting", c3_vertex_accounting),
        ("matching dichotomy", c4_dichotomy),
        ("sorting network", c5_sorting),
        ("parity-family tightness", c6_tightness),
        ("concatenation decay", c7_decay),
        ("Fourier suite", c8_fourier),
        ("Pinsker and strengthened Pinsker", c9_pinsker),
        ("Multi-HPH roundtrip", c10_hph),
        ("harness sanity", c11_harness),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
