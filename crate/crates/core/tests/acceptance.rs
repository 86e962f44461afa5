//! Acceptance gate: twelve end-to-end criteria, one test each, every test
//! enforcing its own time budget. Run with `--nocapture` to see the timing
//! line each criterion prints after passing.

use fpcyc::aut::verify::{
    verify_fr_presentation_m3, verify_generator_relations, verify_phi_psi_m3,
};
use fpcyc::aut::Automorphism;
use fpcyc::bass::{
    amalgam_report_m2, amalgam_report_m3, build_ball_m2, extend_action, letter_generators,
    verify_no_global_fixed_point, BallGenerator,
};
use fpcyc::invariants::{characteristic_report, fa_case_certificate, induced_automorphism, occurrences};
use fpcyc::tree::{fuzz_helly, fuzz_subtree_cycle};
use fpcyc::word::enumerate_reduced;
use fpcyc::{Signature, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn sig(orders: &[u32]) -> Signature {
    Signature::new(orders.to_vec()).unwrap()
}

/// Every signature with `m` factors and orders drawn from `choices`.
fn all_signatures(m: usize, choices: &[u32]) -> Vec<Signature> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        out.push(sig(&idx.iter().map(|&i| choices[i]).collect::<Vec<_>>()));
        let mut pos = 0;
        while pos < m && idx[pos] == choices.len() - 1 {
            idx[pos] = 0;
            pos += 1;
        }
        if pos == m {
            return out;
        }
        idx[pos] += 1;
    }
}

fn random_word(rng: &mut ChaCha8Rng, s: &Signature) -> Word {
    let len = rng.gen_range(0..=8);
    let letters: Vec<(usize, i64)> = (0..len)
        .map(|_| {
            let i = rng.gen_range(0..s.factor_count());
            (i, rng.gen_range(1..s.order(i)) as i64)
        })
        .collect();
    Word::from_letters(s, &letters).unwrap()
}

fn budget(name: &str, start: Instant, limit: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{name} exceeded its {limit:?} budget: {elapsed:?}"
    );
    println!("{name} PASS in {elapsed:?}");
}

#[test]
fn criterion_01_group_axioms_hold_on_random_triples() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..10_000 {
        let m = rng.gen_range(1..=5);
        let orders: Vec<u32> = (0..m).map(|_| rng.gen_range(2..=6)).collect();
        let s = sig(&orders);
        let a = random_word(&mut rng, &s);
        let b = random_word(&mut rng, &s);
        let c = random_word(&mut rng, &s);
        let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        assert_eq!(left, right, "associativity failed on ({s})");
        assert!(a.multiply(&a.invert()).unwrap().is_identity());
        let e = Word::identity(&s);
        assert_eq!(a.multiply(&e).unwrap(), a);
        assert_eq!(e.multiply(&a).unwrap(), a);
    }
    budget("criterion-01 group-axiom fuzz", start, Duration::from_secs(5));
}

#[test]
fn criterion_02_conjugacy_matches_bounded_brute_force() {
    let start = Instant::now();
    for orders in [vec![2u32, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]] {
        let s = sig(&orders);
        let words = enumerate_reduced(&s, 3);
        let conjugators = enumerate_reduced(&s, 6);
        for a in &words {
            for b in &words {
                let fast = a.is_conjugate(b).unwrap();
                let brute = conjugators.iter().any(|g| {
                    g.multiply(a).unwrap().multiply(&g.invert()).unwrap() == *b
                });
                assert_eq!(
                    fast, brute,
                    "conjugacy disagreement over ({s}): {a} vs {b}"
                );
            }
        }
    }
    budget("criterion-02 conjugacy oracle", start, Duration::from_secs(30));
}

#[test]
fn criterion_03_twisting_relations_sweep() {
    let start = Instant::now();
    for m in 2..=4 {
        for s in all_signatures(m, &[2, 3, 4, 5]) {
            let report = verify_generator_relations(&s).unwrap();
            assert!(report.all_pass(), "({s}): {report}");
        }
    }
    budget("criterion-03 generator relations", start, Duration::from_secs(10));
}

#[test]
fn criterion_04_three_factor_presentation_and_inverse_pair() {
    let start = Instant::now();
    for n in 2..=5 {
        let fr = verify_fr_presentation_m3(n).unwrap();
        assert!(fr.all_pass(), "n={n}: {fr}");
        let phipsi = verify_phi_psi_m3(n).unwrap();
        assert!(phipsi.all_pass(), "n={n}: {phipsi}");
    }
    budget("criterion-04 presentation suite", start, Duration::from_secs(5));
}

#[test]
fn criterion_05_full_conjugation_product_is_inner() {
    let start = Instant::now();
    for m in 2..=4 {
        for s in all_signatures(m, &[2, 3, 4]) {
            for j in 0..m {
                let mut product = Automorphism::identity(&s);
                for k in 0..m {
                    if k != j {
                        product = product
                            .compose(&Automorphism::partial_conj(&s, k, j).unwrap())
                            .unwrap();
                    }
                }
                let inner = Automorphism::inner(&Word::generator(&s, j, 1).unwrap()).unwrap();
                assert_eq!(product, inner, "({s}), j={}", j + 1);
            }
        }
    }
    budget("criterion-05 inner product", start, Duration::from_secs(5));
}

#[test]
fn criterion_06_helly_fuzz_finds_no_counterexample() {
    let start = Instant::now();
    let report = fuzz_helly(0, 10_000);
    assert_eq!(report.failures, 0, "{:?}", report.counterexamples);
    assert_eq!(report.summary_line(), "TRIALS 10000 FAILURES 0");
    budget("criterion-06 helly fuzz", start, Duration::from_secs(10));
}

#[test]
fn criterion_07_cycle_fuzz_finds_no_counterexample() {
    let start = Instant::now();
    let report = fuzz_subtree_cycle(0, 10_000);
    assert_eq!(report.failures, 0, "{:?}", report.counterexamples);
    assert_eq!(report.summary_line(), "TRIALS 10000 FAILURES 0");
    budget("criterion-07 subtree-cycle fuzz", start, Duration::from_secs(20));
}

#[test]
fn criterion_08_two_factor_ball_and_action() {
    let start = Instant::now();

    let r1 = build_ball_m2(3, 1).unwrap();
    assert_eq!(r1.labels(), vec!["A", "B", "aB", "a^2B"]);
    let base_neighbors: Vec<String> = r1
        .edges()
        .iter()
        .filter_map(|&(u, v)| match (u == r1.base(), v == r1.base()) {
            (true, _) => Some(r1.label(v)),
            (_, true) => Some(r1.label(u)),
            _ => None,
        })
        .collect();
    assert_eq!(base_neighbors, vec!["B", "aB", "a^2B"]);

    let r2 = build_ball_m2(3, 2).unwrap();
    assert_eq!(r2.vertex_count(), 10);

    let s = r2.signature().clone();
    let gen_a = BallGenerator::LeftMult(Word::generator(&s, 0, 1).unwrap());
    let gen_b = BallGenerator::LeftMult(Word::generator(&s, 1, 1).unwrap());
    let swap = BallGenerator::Twist(Automorphism::permutation(&s, &[1, 0]).unwrap());
    for g in [&gen_a, &gen_b, &swap] {
        extend_action(&r2, g).expect("edge-preserving injective action");
    }

    let sd = r2.barycentric_subdivide().unwrap();
    for g in [&gen_a, &gen_b, &swap] {
        let map = extend_action(&sd, g).unwrap();
        for &(u, v) in sd.edges() {
            let inverted = map.image(u) == Some(v) && map.image(v) == Some(u);
            assert!(!inverted, "{} inverts edge {}--{}", map.generator(), u, v);
        }
    }

    let r4 = build_ball_m2(3, 4).unwrap();
    let map_a = extend_action(&r4, &gen_a).unwrap();
    let map_b = extend_action(&r4, &gen_b).unwrap();
    let common: Vec<usize> = map_a
        .fixed_vertices()
        .into_iter()
        .filter(|v| map_b.fixed_vertices().contains(v))
        .collect();
    assert!(common.is_empty(), "commonly fixed: {common:?}");
    let report = verify_no_global_fixed_point(&r4, &letter_generators(&r4)).unwrap();
    assert!(report.all_pass(), "{report}");

    budget("criterion-08 coset ball", start, Duration::from_secs(10));
}

#[test]
fn criterion_09_amalgam_stabilizer_orders() {
    let start = Instant::now();
    for n in 2..=4 {
        let m2 = amalgam_report_m2(n).unwrap();
        assert!(m2.all_pass(), "m2 n={n}: {m2}");
        let m3 = amalgam_report_m3(n).unwrap();
        assert!(m3.all_pass(), "m3 n={n}: {m3}");
    }
    budget("criterion-09 amalgam stabilizers", start, Duration::from_secs(60));
}

#[test]
fn criterion_10_occurrences_recover_the_multiset() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        let m = rng.gen_range(1..=6);
        let orders: Vec<u32> = (0..m).map(|_| rng.gen_range(2..=12)).collect();
        let s = sig(&orders);
        for k in 2..=12u64 {
            let expected = orders.iter().filter(|&&n| n as u64 == k).count() as u64;
            assert_eq!(
                occurrences(&s, k).unwrap().corrected,
                expected,
                "({s}), k={k}"
            );
        }
    }
    let mismatch = occurrences(&sig(&[4, 2]), 2).unwrap();
    assert_eq!(mismatch.corrected, 1);
    assert_eq!(mismatch.literal, 0);
    assert!(mismatch.formulas_disagree());
    budget("criterion-10 occurrence invariant", start, Duration::from_secs(10));
}

#[test]
fn criterion_11_characteristic_closures_and_functoriality() {
    let start = Instant::now();
    for m in 1..=5 {
        for s in all_signatures(m, &[2, 3, 4, 5, 6]) {
            let mut seen = Vec::new();
            for &n in s.orders() {
                if seen.contains(&n) {
                    continue;
                }
                seen.push(n);
                let report = characteristic_report(&s, n).unwrap();
                assert!(report.all_pass(), "({s}), k={n}: {report}");
            }
        }
    }

    let s = sig(&[2, 2, 3, 3]);
    let kill = [2usize, 3];
    let mut pool = fpcyc::aut::all_factor_autos(&s);
    pool.extend(fpcyc::aut::all_admissible_permutations(&s));
    pool.extend(fpcyc::aut::all_partial_conjs(&s));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random_composite = |rng: &mut ChaCha8Rng| {
        let mut f = Automorphism::identity(&s);
        for _ in 0..rng.gen_range(0..=5) {
            f = f.compose(&pool[rng.gen_range(0..pool.len())]).unwrap();
        }
        f
    };
    for _ in 0..1_000 {
        let f = random_composite(&mut rng);
        let g = random_composite(&mut rng);
        let lhs = induced_automorphism(&f.compose(&g).unwrap(), &kill).unwrap();
        let rhs = induced_automorphism(&f, &kill)
            .unwrap()
            .compose(&induced_automorphism(&g, &kill).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }
    budget("criterion-11 characteristic suite", start, Duration::from_secs(60));
}

#[test]
fn criterion_12_fixed_point_certificates() {
    let start = Instant::now();
    for orders in [
        vec![2u32, 2, 2, 2],
        vec![3, 3, 3, 3],
        vec![2, 2, 2, 2, 3, 3, 3, 3],
    ] {
        let s = sig(&orders);
        let cert = fa_case_certificate(&s).unwrap();
        let conjugations = s.factor_count() * (s.factor_count() - 1);
        assert_eq!(cert.pairs.len(), conjugations * (conjugations - 1) / 2);
        assert!(cert.all_verified(), "({s})");
    }

    let err = fa_case_certificate(&sig(&[2, 2, 3, 3, 3, 3])).unwrap_err();
    assert!(
        err.to_string().contains("order 2"),
        "rejection must name the scarce order: {err}"
    );
    budget("criterion-12 fixed-point certificates", start, Duration::from_secs(30));
}
