//! Acceptance gate: one test per shipped guarantee, each printing a single
//! `criterion N: PASS/FAIL` line (visible with `--nocapture`).  The final
//! criterion (byte-identical CLI self-test output) lives with the CLI binary.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liealg::chevalley::{ChevalleyAlgebra, LieElt};
use liealg::expmod::{
    exact_exp_ad, p_integrality_check, realize_big_cell, unipotent_order, verify_sl2_relations,
};
use liealg::matrix::Mat;
use liealg::orbits::{bala_carter_catalogue, type_a_partition_oracle};
use liealg::parabolic::{
    enumerate_distinguished, grading, is_distinguished, is_distinguished_oracle, nilradical_class,
};
use liealg::rootdata::RootSystem;
use liealg::scalar::{Fq, Rat};
use liealg::sl2::{
    descent_bijective, richardson_candidate, richardson_certificate, solve_triple, verify_triple,
    Sl2Triple,
};
use liealg::springer::{build_setup, toral_p_root, Family};

/// Simple types exercised exhaustively by the structural criteria.
const TEST_TYPES: &[&str] = &["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "F4"];

/// Good primes up to the default flag bound.
fn flagged_good_primes(rs: &RootSystem) -> Vec<u64> {
    [2u64, 3, 5, 7, 11, 13].into_iter().filter(|&p| rs.is_good_prime(p)).collect()
}

fn algebra(label: &str) -> ChevalleyAlgebra {
    ChevalleyAlgebra::new(RootSystem::new(label).expect("test-set label"))
}

fn report(n: usize, desc: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("criterion {n}: PASS - {desc}");
    } else {
        println!("criterion {n}: FAIL - {desc}");
        panic!(
            "criterion {n} failed with {} problem(s):\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

fn jacobi_vanishes(alg: &ChevalleyAlgebra, i: usize, j: usize, k: usize) -> bool {
    let a: LieElt<Rat> = LieElt::basis(i);
    let b: LieElt<Rat> = LieElt::basis(j);
    let c: LieElt<Rat> = LieElt::basis(k);
    let t1 = alg.bracket(&a, &alg.bracket(&b, &c));
    let t2 = alg.bracket(&b, &alg.bracket(&c, &a));
    let t3 = alg.bracket(&c, &alg.bracket(&a, &b));
    t1.add(&t2).add(&t3).is_zero()
}

#[test]
fn criterion_1_jacobi_identity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for label in TEST_TYPES {
        let alg = algebra(label);
        let d = alg.dim();
        'outer: for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if !jacobi_vanishes(&alg, i, j, k) {
                        failures.push(format!(
                            "{label}: Jacobi residue on ({}, {}, {})",
                            alg.basis_label(i),
                            alg.basis_label(j),
                            alg.basis_label(k)
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    let alg = algebra("E6");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let d = alg.dim();
    let mut bad = 0usize;
    for _ in 0..100_000 {
        let i = rng.gen_range(0..d);
        let j = rng.gen_range(0..d);
        let k = rng.gen_range(0..d);
        if !jacobi_vanishes(&alg, i, j, k) {
            bad += 1;
        }
    }
    if bad > 0 {
        failures.push(format!("E6: {bad} random triples violate the Jacobi identity"));
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs() > 120 {
        failures.push(format!("runtime {elapsed:?} exceeds the two-minute budget"));
    }
    report(
        1,
        "Jacobi identity: exhaustive on ten simple types, 100000 random triples on E6",
        &failures,
    );
}

#[test]
fn criterion_2_distinguished_parabolic_classifier_matches_oracle() {
    let mut failures = Vec::new();
    for label in TEST_TYPES {
        let alg = algebra(label);
        let r = alg.rank();
        for mask in 0u32..(1 << r) {
            let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let g = grading(&alg, &subset).expect("valid subset");
            let fast = is_distinguished(&g);
            let slow = is_distinguished_oracle(&alg, &g);
            if fast != slow {
                failures.push(format!(
                    "{label} I={subset:?}: classifier {fast} but oracle {slow}"
                ));
            }
        }
        if label.starts_with('A') {
            let dist = enumerate_distinguished(&alg);
            if dist != vec![Vec::<usize>::new()] {
                failures.push(format!(
                    "{label}: distinguished subsets {dist:?}, expected only the empty one"
                ));
            }
        }
    }
    report(
        2,
        "dimension classifier for distinguished parabolics agrees with the brute-force oracle",
        &failures,
    );
}

/// All distinguished triples of the test set, solved once and shared by the
/// certificate criteria.
fn distinguished_triples() -> Vec<(String, Vec<usize>, ChevalleyAlgebra, Sl2Triple)> {
    let mut out = Vec::new();
    for label in TEST_TYPES {
        let alg = algebra(label);
        for subset in enumerate_distinguished(&alg) {
            let g = grading(&alg, &subset).expect("valid subset");
            let x = richardson_candidate(&alg, &g, None).expect("candidate exists");
            let t = solve_triple(&alg, &g, &x).expect("triple solvable");
            let alg2 = algebra(label);
            out.push((label.to_string(), subset, alg2, t));
        }
    }
    out
}

#[test]
fn criterion_3_triples_hold_exactly_and_modulo_flagged_primes() {
    let mut failures = Vec::new();
    for (label, subset, alg, t) in distinguished_triples() {
        match verify_triple(&alg, &t, None) {
            Ok(true) => {}
            other => {
                failures.push(format!("{label} I={subset:?}: rational relations gave {other:?}"));
                continue;
            }
        }
        let g = grading(&alg, &subset).unwrap();
        for p in flagged_good_primes(alg.root_system()) {
            if g.max_degree() >= 2 * p as i64 {
                continue;
            }
            if t.denominator_primes.contains(&p) {
                failures.push(format!("{label} I={subset:?}: flagged prime {p} divides a denominator"));
                continue;
            }
            match verify_triple(&alg, &t, Some(p)) {
                Ok(true) => {}
                other => failures.push(format!(
                    "{label} I={subset:?}: relations mod {p} gave {other:?}"
                )),
            }
        }
    }
    report(
        3,
        "distinguished triples satisfy the three bracket relations over Q and mod flagged primes",
        &failures,
    );
}

#[test]
fn criterion_4_richardson_certificates() {
    let mut failures = Vec::new();
    for (label, subset, alg, t) in distinguished_triples() {
        let g = grading(&alg, &subset).unwrap();
        if !richardson_certificate(&alg, &g, &t.x, None) {
            failures.push(format!("{label} I={subset:?}: degree-two map not surjective over Q"));
        }
        for p in flagged_good_primes(alg.root_system()) {
            if g.max_degree() >= 2 * p as i64 {
                continue;
            }
            if !richardson_certificate(&alg, &g, &t.x, Some(p)) {
                failures.push(format!(
                    "{label} I={subset:?}: degree-two map not surjective mod {p}"
                ));
            }
        }
        if !descent_bijective(&alg, &g, &t.x) {
            failures.push(format!(
                "{label} I={subset:?}: descent from degree -2 to 0 is not bijective over Q"
            ));
        }
    }
    report(
        4,
        "ad(X) certificates: onto in degree two (Q and flagged primes), bijective descent over Q",
        &failures,
    );
}

/// The five benchmark regular cases for the modular exponential machinery.
const EXP_CASES: &[(&str, u64)] =
    &[("A2", 3), ("A3", 5), ("B2", 5), ("G2", 7), ("F4", 13)];

fn borel_triple(label: &str) -> (ChevalleyAlgebra, Sl2Triple) {
    let alg = algebra(label);
    let g = grading(&alg, &[]).unwrap();
    let x = richardson_candidate(&alg, &g, None).unwrap();
    let t = solve_triple(&alg, &g, &x).unwrap();
    (alg, t)
}

#[test]
fn criterion_5_exponentials_are_p_integral_with_order_p_generators() {
    let mut failures = Vec::new();
    for &(label, p) in EXP_CASES {
        let (alg, t) = borel_triple(label);
        let g = grading(&alg, &[]).unwrap();
        let class = nilradical_class(&g);
        if class >= p as usize {
            failures.push(format!("{label}: nilradical class {class} not below p = {p}"));
            continue;
        }
        for (name, elt) in [("X", &t.x), ("Y", &t.y)] {
            let e = match exact_exp_ad(&alg, elt) {
                Ok(e) => e,
                Err(err) => {
                    failures.push(format!("{label}: exp(ad {name}) failed: {err}"));
                    continue;
                }
            };
            if !p_integrality_check(&e, p) {
                failures.push(format!("{label}: exp(ad {name}) is not {p}-integral"));
            }
        }
        match realize_big_cell(&alg, &t, p) {
            Ok(b) => match unipotent_order(&b.x_of(1), p) {
                Ok(order) if order == p => {}
                other => failures.push(format!(
                    "{label}: order of the degree-one generator mod {p} gave {other:?}"
                )),
            },
            Err(err) => failures.push(format!("{label}: realization at {p} refused: {err}")),
        }
    }
    report(
        5,
        "below the nilradical class, exponentials are p-integral and x(1) has order exactly p",
        &failures,
    );
}

#[test]
fn criterion_6_one_parameter_relations_hold_for_all_parameters() {
    let mut failures = Vec::new();
    for &(label, p) in EXP_CASES {
        let (alg, t) = borel_triple(label);
        let b = match realize_big_cell(&alg, &t, p) {
            Ok(b) => b,
            Err(err) => {
                failures.push(format!("{label}: realization at {p} refused: {err}"));
                continue;
            }
        };
        let rep = verify_sl2_relations(&alg, &b);
        if !rep.all_passed() {
            let failing: Vec<String> = rep
                .counts
                .iter()
                .filter(|(_, (_, fail))| *fail > 0)
                .map(|(k, (pass, fail))| format!("{k}: {pass} pass / {fail} fail"))
                .collect();
            failures.push(format!("{label} at {p}: {}", failing.join(", ")));
        }
        if rep.sign_c.is_none() {
            failures.push(format!("{label} at {p}: no single sign constant works"));
        }
    }
    report(
        6,
        "all one-parameter subgroup identities hold for every s and t with one sign constant",
        &failures,
    );
}

#[test]
fn criterion_7_type_a_catalogue_counts_and_diagram_labels() {
    let mut failures = Vec::new();
    for n in 2..=6usize {
        let label = format!("A{}", n - 1);
        let alg = algebra(&label);
        let cat = bala_carter_catalogue(&alg);
        let expected = type_a_partition_oracle(n);
        if cat.len() != expected {
            failures.push(format!(
                "{label}: catalogue has {} records, expected partitions({n}) = {expected}",
                cat.len()
            ));
        }
    }
    let mut catalogue_types: Vec<String> = TEST_TYPES.iter().map(|s| s.to_string()).collect();
    catalogue_types.push("A5".to_string());
    for label in &catalogue_types {
        let alg = algebra(label);
        let cat = bala_carter_catalogue(&alg);
        let mut all_two = 0usize;
        let mut all_zero = 0usize;
        for rec in &cat {
            if rec.weighted_diagram.iter().any(|&v| !(0..=2).contains(&v)) {
                failures.push(format!(
                    "{label}: diagram {:?} has a label outside 0..=2",
                    rec.weighted_diagram
                ));
            }
            if rec.weighted_diagram.iter().all(|&v| v == 2) {
                all_two += 1;
            }
            if rec.weighted_diagram.iter().all(|&v| v == 0) {
                all_zero += 1;
            }
        }
        if all_two != 1 || all_zero != 1 {
            failures.push(format!(
                "{label}: {all_two} all-2 and {all_zero} all-0 diagrams, expected one of each"
            ));
        }
    }
    report(
        7,
        "type-A catalogue sizes are partition numbers; diagram labels lie in {0,1,2}",
        &failures,
    );
}

#[test]
fn criterion_8_p_power_compatibility_in_matrix_groups() {
    let mut failures = Vec::new();
    let cases = [
        (Family::Sp, 4usize, 5u64),
        (Family::Sp, 4, 7),
        (Family::So, 5, 5),
        (Family::So, 5, 7),
        (Family::Gl, 3, 7),
    ];
    for (family, n, p) in cases {
        let setup = match build_setup(family, n, p, 1) {
            Ok(s) => s,
            Err(err) => {
                failures.push(format!("{family}({n}) over F_{p}: setup refused: {err}"));
                continue;
            }
        };
        if setup.gram.inverse().is_none() {
            failures.push(format!("{family}({n}) over F_{p}: Gram matrix not invertible"));
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut mismatches = 0usize;
        for _ in 0..100 {
            let g = setup.random_group_element(&mut rng);
            match setup.check_p_power_compat(&g) {
                Ok(true) => {}
                other => {
                    mismatches += 1;
                    if mismatches == 1 {
                        failures.push(format!(
                            "{family}({n}) over F_{p}: p-power compatibility gave {other:?}"
                        ));
                    }
                }
            }
        }
        if mismatches > 1 {
            failures.push(format!(
                "{family}({n}) over F_{p}: {mismatches} of 100 samples failed"
            ));
        }
        let one = setup.identity();
        match setup.springer_map(&one) {
            Ok(l) if l.is_zero_matrix() => {}
            other => failures.push(format!(
                "{family}({n}) over F_{p}: image of the identity gave {other:?}"
            )),
        }
        if family == Family::Gl {
            let mut u = setup.identity();
            for i in 0..n {
                for j in (i + 1)..n {
                    u[(i, j)] = setup.random_element(&mut rng);
                }
            }
            let l = setup.springer_map(&u).unwrap();
            let shift = &u - &setup.identity();
            if !(&l - &shift).is_zero_matrix() {
                failures.push(format!("GL({n}) over F_{p}: map disagrees with u - 1"));
            }
        }
    }
    report(
        8,
        "projection intertwines p-th powers on 100 sampled elements per classical group",
        &failures,
    );
}

#[test]
fn criterion_9_toral_root_inverts_iterated_p_powers() {
    let mut failures = Vec::new();
    for (p, m) in [(3u64, 2u8), (3, 3), (5, 2)] {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let one = if m == 1 {
            Fq::prime(p, 1).unwrap()
        } else {
            Fq::extension(p, m, &[1]).unwrap()
        };
        let zero = one - one;
        let mut bad = 0usize;
        for trial in 0..100u32 {
            let n_steps = 1 + (trial % 4);
            let a = Mat::from_fn(3, 3, |i, j| {
                if i == j {
                    let coeffs: Vec<i64> =
                        (0..m).map(|_| rng.gen_range(0..p) as i64).collect();
                    Fq::extension(p, m, &coeffs).unwrap()
                } else {
                    zero
                }
            });
            let root = match toral_p_root(&a, n_steps, p, m) {
                Ok(r) => r,
                Err(err) => {
                    failures.push(format!("F_{p}^{m}: inverse power map refused: {err}"));
                    break;
                }
            };
            let mut back = root;
            for _ in 0..n_steps {
                back = back.pow(p);
            }
            if !(&back - &a).is_zero_matrix() {
                bad += 1;
            }
        }
        if bad > 0 {
            failures.push(format!(
                "F_{p}^{m}: {bad} of 100 diagonal round trips failed"
            ));
        }
    }
    report(
        9,
        "inverse power map on diagonal tori undoes the iterated p-th power over F9, F27, F25",
        &failures,
    );
}
