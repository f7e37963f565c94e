mod common;

use common::{a36, b36, brute_distance, column_masks, hamming, min_weight_with_syndrome};
use ldpc_distance::distance::{
    covering_trials, cs_decode, cs_subset_len, distance_cs, distance_exhaustive, distance_mb, distance_sw,
    mb_patterns_per_round, CsOptions, MbOptions, SwOptions,
};
use ldpc_distance::{BitVector, Certificate, Code, DistanceResult, Seed};
use rand::Rng;

fn sound(code: &Code, r: &DistanceResult) {
    if let Some(w) = &r.witness {
        assert!(code.is_codeword(w));
        assert_eq!(r.distance, Some(w.weight()));
    }
}

#[test]
fn exhaustive_matches_brute_force() {
    for seed in 0..20 {
        let code = a36(12 + 2 * (seed as usize % 5), seed);
        let r = distance_exhaustive(&code, 28);
        sound(&code, &r);
        assert_eq!(r.distance, brute_distance(code.parity_check()));
    }
}

#[test]
fn sw_matches_oracle_on_a36() {
    for seed in 0..50u64 {
        let n = [16, 18, 20, 22, 24][seed as usize % 5];
        let code = a36(n, seed);
        let r = distance_sw(&code, &SwOptions::new(0.4, n)).unwrap();
        sound(&code, &r);
        assert_eq!(r.certificate, Certificate::Exact, "seed {seed}");
        assert_eq!(r.distance, distance_exhaustive(&code, 28).distance, "seed {seed}");
    }
}

#[test]
fn mb_matches_oracle_on_b36() {
    for seed in 0..50u64 {
        let n = [18, 24][seed as usize % 2];
        let code = b36(n, seed);
        let r = distance_mb(&code, &MbOptions::new(n)).unwrap();
        sound(&code, &r);
        assert_eq!(r.certificate, Certificate::Exact, "seed {seed}");
        assert_eq!(r.distance, distance_exhaustive(&code, 28).distance, "seed {seed}");
    }
}

#[test]
fn cs_is_one_sided_and_almost_always_exact() {
    let mut exact = 0;
    let runs = 50;
    for seed in 0..runs as u64 {
        let n = [20, 22, 24, 26, 28][seed as usize % 5];
        let code = a36(n, seed);
        let oracle = distance_exhaustive(&code, 28).distance.unwrap();
        let r = distance_cs(&code, &CsOptions::new(0.45, n, Seed(seed))).unwrap();
        sound(&code, &r);
        if let Some(d) = r.distance {
            assert!(d >= oracle);
            assert!(matches!(r.certificate, Certificate::Probabilistic { .. }));
        }
        exact += (r.distance == Some(oracle)) as usize;
    }
    assert!(exact * 100 >= runs * 99, "{exact}/{runs}");
}

#[test]
fn cs_decode_finds_coset_leaders() {
    let mut rng = Seed(77).rng();
    let mut exact = 0;
    let runs = 50;
    for seed in 0..runs as u64 {
        let code = a36(20, seed);
        let w = rng.gen_range(1..=3);
        let e = BitVector::from_support(20, &ldpc_distance::ensembles::random_subset(&mut rng, 20, w));
        let v = code.syndrome(&e);
        if v.is_zero() {
            exact += 1;
            continue;
        }
        let target = column_masks(code.parity_check())
            .iter()
            .enumerate()
            .filter(|(j, _)| e.get(*j))
            .fold(0u128, |acc, (_, m)| acc ^ m);
        let leader = min_weight_with_syndrome(&column_masks(code.parity_check()), target, 4).unwrap();
        let r = cs_decode(&code, &v, &CsOptions::new(0.45, 20, Seed(seed))).unwrap();
        let found = r.witness.as_ref().unwrap();
        assert_eq!(code.syndrome(found), v);
        assert!(r.distance.unwrap() <= w);
        exact += (r.distance == Some(leader)) as usize;
    }
    assert!(exact * 100 >= runs * 99, "{exact}/{runs}");
}

#[test]
fn mb_counters_match_closed_form() {
    for seed in 0..10u64 {
        let code = a36(20, seed);
        let opts = MbOptions {
            early_exit: false,
            ..MbOptions::new(20)
        };
        let r = distance_mb(&code, &opts).unwrap();
        let d = r.distance.unwrap();
        // Σ_{d'≤d} n·[C(⌊n/2⌋,⌊d'/2⌋) + C(⌈n/2⌉,⌈d'/2⌉)], binomials by Pascal's rule.
        let mut pascal = vec![vec![0u64; 21]; 21];
        for a in 0..=20 {
            pascal[a][0] = 1;
            for b in 1..=a {
                pascal[a][b] = pascal[a - 1][b - 1] + pascal[a - 1][b];
            }
        }
        let expected: u64 = (1..=d).map(|w| 20 * (pascal[10][w / 2] + pascal[10][w - w / 2])).sum();
        assert_eq!(r.counters.patterns, expected);
        assert_eq!((1..=d).map(|w| mb_patterns_per_round(20, w)).sum::<u64>(), expected);
    }
}

#[test]
fn cs_trials_and_eliminations_follow_schedule() {
    let code = a36(24, 3);
    let oracle = distance_exhaustive(&code, 28).distance.unwrap();
    let s = cs_subset_len(24, 0.45);
    let r = distance_cs(&code, &CsOptions::new(0.45, oracle - 1, Seed(1))).unwrap();
    assert_eq!(r.distance, None);
    let planned: u64 = (1..oracle).map(|d| covering_trials(24, s, d).unwrap()).sum();
    assert_eq!(r.counters.trials, planned);
    assert_eq!(r.counters.eliminations, planned);
}

#[test]
fn row_xors_nondecreasing_in_d_max() {
    let code = a36(20, 9);
    let mut last = [0u64; 3];
    for d_max in 1..=8 {
        let now = [
            distance_sw(&code, &SwOptions::new(0.4, d_max)).unwrap().counters.row_xors,
            distance_mb(&code, &MbOptions::new(d_max)).unwrap().counters.row_xors,
            distance_cs(&code, &CsOptions::new(0.45, d_max, Seed(0))).unwrap().counters.row_xors,
        ];
        for k in 0..3 {
            assert!(now[k] >= last[k]);
        }
        last = now;
    }
}

#[test]
fn hamming_every_algorithm() {
    let code = hamming();
    assert_eq!(distance_exhaustive(&code, 28).distance, Some(3));
    assert_eq!(distance_sw(&code, &SwOptions::new(0.3, 7)).unwrap().distance, Some(3));
    assert_eq!(distance_mb(&code, &MbOptions::new(7)).unwrap().distance, Some(3));
    assert_eq!(distance_cs(&code, &CsOptions::new(0.6, 7, Seed(3))).unwrap().distance, Some(3));
}
