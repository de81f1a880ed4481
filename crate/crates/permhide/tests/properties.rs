use permhide::layered::{basic, concat, extract_permutation, Provenance};
use permhide::perm::{compose, extend, inverse, is_simple, join, swap_perm, vec, Equipartition, PermVector, Permutation};
use permhide::sorting::decompose;
use permhide::stream::EdgeStream;
use proptest::prelude::*;

fn perm_of(m: usize) -> impl Strategy<Value = Permutation> {
    Just((0..m).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::from_zero_based(v).unwrap())
}

fn perm() -> impl Strategy<Value = Permutation> {
    (1usize..=12).prop_flat_map(perm_of)
}

fn perm_triple() -> impl Strategy<Value = (Permutation, Permutation, Permutation)> {
    (1usize..=12).prop_flat_map(|m| (perm_of(m), perm_of(m), perm_of(m)))
}

/// A random equipartition of `[m]` into groups of `b` and a permutation simple on it.
fn partition_and_simple() -> impl Strategy<Value = (Equipartition, Permutation)> {
    (2usize..=4, 1usize..=5).prop_flat_map(|(b, groups)| {
        let m = b * groups;
        (Just(b), perm_of(m), prop::collection::vec(perm_of(b), groups)).prop_map(move |(b, shuffle, inner)| {
            let groups: Vec<Vec<usize>> = shuffle.as_slice().chunks(b).map(|c| c.to_vec()).collect();
            let part = Equipartition::from_zero_based(groups.clone()).unwrap();
            let mut map = vec![0; m];
            for (grp, p) in groups.iter().zip(&inner) {
                let mut sorted = grp.clone();
                sorted.sort();
                for (j, &x) in sorted.iter().enumerate() {
                    map[x] = sorted[p.at(j)];
                }
            }
            (part, Permutation::from_zero_based(map).unwrap())
        })
    })
}

proptest! {
    #[test]
    fn compose_is_associative((f, g, h) in perm_triple()) {
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(f in perm()) {
        prop_assert!(compose(&f, &inverse(&f)).unwrap().is_identity());
        prop_assert!(compose(&inverse(&f), &f).unwrap().is_identity());
    }

    #[test]
    fn text_and_rank_roundtrip(f in perm()) {
        prop_assert_eq!(f.to_string().parse::<Permutation>().unwrap(), f.clone());
        prop_assert_eq!(Permutation::from_lehmer_rank(f.len(), f.lehmer_rank()).unwrap(), f);
    }

    #[test]
    fn extend_is_a_homomorphism((f, g, _) in perm_triple(), b in 1usize..=4) {
        let lhs = extend(&compose(&f, &g).unwrap(), b);
        let rhs = compose(&extend(&f, b), &extend(&g, b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vec_join_roundtrip(b in 1usize..=4, entries in 1usize..=5, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let gamma = PermVector::new((0..entries).map(|_| Permutation::random(b, &mut rng)).collect()).unwrap();
        let rho = join(&gamma);
        prop_assert!(is_simple(&rho, &Equipartition::lex(b * entries, b).unwrap()));
        prop_assert_eq!(vec(&rho, b).unwrap(), gamma);
    }

    #[test]
    fn swap_conjugation_is_lex_simple((part, rho) in partition_and_simple()) {
        prop_assert!(is_simple(&rho, &part));
        let swap = swap_perm(&part);
        let conj = compose(&swap, &compose(&rho, &inverse(&swap)).unwrap()).unwrap();
        prop_assert!(is_simple(&conj, &Equipartition::lex(part.m(), part.b()).unwrap()));
    }

    #[test]
    fn decomposition_recomposes(m in 2usize..=40, b in 2usize..=4, seed in any::<u64>()) {
        use rand::SeedableRng;
        let sigma = Permutation::random(m, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        match decompose(&sigma, b) {
            Ok(d) => {
                prop_assert_eq!(d.recompose().unwrap(), sigma);
                prop_assert!(d.all_simple());
            }
            // Only sizes that b does not divide may be rejected.
            Err(_) => prop_assert!(m % b != 0),
        }
    }

    #[test]
    fn basic_graphs_compose((f, g, _) in perm_triple()) {
        prop_assert_eq!(extract_permutation(&basic(&f), f.len()).unwrap(), f.clone());
        let both = concat(&basic(&f), &basic(&g));
        prop_assert_eq!(extract_permutation(&both, f.len()).unwrap(), compose(&f, &g).unwrap());
    }

    #[test]
    fn stream_text_roundtrip(n in 1usize..30, raw in prop::collection::vec((0usize..30, 0usize..30, 0u32..4), 0..40), directed in any::<bool>()) {
        let edges: Vec<(usize, usize)> = raw.iter().map(|&(u, v, _)| (u % n, v % n)).collect();
        let tags: Vec<Provenance> = raw.iter().map(|&(_, _, t)| if t == 0 { Provenance::Referee } else { Provenance::Player(t) }).collect();
        let s = EdgeStream::new(n, directed, edges, if raw.is_empty() { None } else { Some(tags) }).unwrap();
        prop_assert_eq!(EdgeStream::from_text(&s.to_text()).unwrap(), s);
    }
}
