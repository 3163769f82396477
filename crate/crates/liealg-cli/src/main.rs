//! Command-line interface for the exact Lie theory library.
//!
//! Subcommands:
//!   orbits          nilpotent orbit catalogue of a simple type as JSON
//!   triple          a standard sl2 triple for a distinguished parabolic
//!   verify          one-parameter subgroup relation checks modulo p
//!   springer-check  classical matrix group projection checks
//!   selftest        deterministic desk-scale battery, byte-stable JSON
//!
//! Exit codes: 0 success, 1 computation or check failure, 2 usage error
//! (including unknown type labels and unsupported families), 3 rejected
//! prime (composite, or bad for the requested type).

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use liealg::chevalley::ChevalleyAlgebra;
use liealg::expmod::{realize_big_cell, verify_sl2_relations};
use liealg::matrix::Mat;
use liealg::orbits::{bala_carter_catalogue, levi_triple, order_p_flags, record_to_json};
use liealg::parabolic::{grading, is_distinguished, is_distinguished_oracle};
use liealg::rootdata::RootSystem;
use liealg::scalar::{is_prime, Fq};
use liealg::sl2::{triple_to_json, verify_triple};
use liealg::springer::{build_setup, field_label, toral_p_root, Family};
use liealg::LieError;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "liealg",
    version,
    about = "Exact computations with root systems, nilpotent orbits, and modular one-parameter subgroups"
)]
struct Cli {
    /// Write the JSON output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the nilpotent orbit catalogue of a simple type as a JSON array.
    Orbits {
        /// Simple type label, e.g. A3, B2, G2, F4.
        #[arg(long = "type")]
        type_label: String,
        /// Primes to flag (repeatable); must be good for the type.
        /// Defaults to the good primes up to 13.
        #[arg(long = "prime")]
        primes: Vec<u64>,
        /// Refuse types of rank above this bound.
        #[arg(long, default_value_t = 8)]
        max_rank: usize,
    },
    /// Solve and print the standard sl2 triple attached to a distinguished
    /// parabolic of a Levi subalgebra.
    Triple {
        /// Ambient simple type label.
        #[arg(long = "type")]
        type_label: String,
        /// Levi subset: "all", "empty", or comma-separated 0-based simple
        /// root indices of the ambient type.
        #[arg(long, default_value = "all")]
        levi: String,
        /// Distinguished parabolic subset inside the Levi: "empty", "all",
        /// or comma-separated 0-based indices of the Levi's own simple roots.
        #[arg(long, default_value = "empty")]
        parabolic: String,
        /// Primes at which to verify the bracket relations (repeatable);
        /// must be good for the ambient type.
        #[arg(long = "prime")]
        primes: Vec<u64>,
    },
    /// Realize the one-parameter subgroups modulo p and check all their
    /// defining identities for every parameter value.
    Verify {
        /// Ambient simple type label.
        #[arg(long = "type")]
        type_label: String,
        /// Levi subset (see `triple`).
        #[arg(long, default_value = "all")]
        levi: String,
        /// Distinguished parabolic subset inside the Levi (see `triple`).
        #[arg(long, default_value = "empty")]
        parabolic: String,
        /// Primes at which to run the checks (repeatable, at least one).
        #[arg(long = "prime", required = true)]
        primes: Vec<u64>,
    },
    /// Check the trace-form projection and p-th power compatibility in a
    /// classical matrix group over a finite field.
    SpringerCheck {
        /// Group family: GL, Sp, or SO.
        #[arg(long)]
        family: String,
        /// Matrix size.
        #[arg(long)]
        n: usize,
        /// Field characteristic.
        #[arg(long)]
        p: u64,
        /// Field extension degree (the field is F_{p^m}).
        #[arg(long, default_value_t = 1)]
        m: u8,
        /// Number of pseudorandom group elements to test.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed for the pseudorandom element generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a deterministic desk-scale battery of the library's checks and
    /// print a byte-stable JSON report (no timing information).
    Selftest {
        /// Seed for all pseudorandom sampling in the battery.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip structural sweeps on types of rank above this bound.
        #[arg(long, default_value_t = 3)]
        max_rank: usize,
    },
}

/// An error carrying its process exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn lie_failure(e: LieError) -> Failure {
    let code = match &e {
        LieError::BadTypeLabel(_) => 2,
        LieError::BadPrime { .. } | LieError::NotPrime(_) => 3,
        _ => 1,
    };
    fail(code, e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match dispatch(cli) {
        Ok((value, code)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON serialization");
            match &out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => {
                    use std::io::Write;
                    // Tolerate a closed pipe (e.g. `liealg orbits ... | head`).
                    let _ = writeln!(std::io::stdout(), "{text}");
                }
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(Value, u8), Failure> {
    match cli.cmd {
        Cmd::Orbits { type_label, primes, max_rank } => orbits_cmd(&type_label, &primes, max_rank),
        Cmd::Triple { type_label, levi, parabolic, primes } => {
            triple_cmd(&type_label, &levi, &parabolic, &primes)
        }
        Cmd::Verify { type_label, levi, parabolic, primes } => {
            verify_cmd(&type_label, &levi, &parabolic, &primes)
        }
        Cmd::SpringerCheck { family, n, p, m, samples, seed } => {
            springer_cmd(&family, n, p, m, samples, seed)
        }
        Cmd::Selftest { seed, max_rank } => selftest_cmd(seed, max_rank),
    }
}

fn root_system(label: &str, max_rank: usize) -> Result<RootSystem, Failure> {
    let rs = RootSystem::new(label).map_err(lie_failure)?;
    if rs.rank() > max_rank {
        return Err(fail(
            2,
            format!("rank {} exceeds the bound {max_rank}; raise --max-rank to allow it", rs.rank()),
        ));
    }
    Ok(rs)
}

/// Validates requested primes against a root system before any computation.
fn validate_primes(rs: &RootSystem, primes: &[u64]) -> Result<(), Failure> {
    for &p in primes {
        if !is_prime(p) {
            return Err(fail(3, format!("{p} is not prime")));
        }
        if !rs.is_good_prime(p) {
            return Err(fail(3, format!("{p} is bad for {}", rs.label())));
        }
    }
    Ok(())
}

fn parse_subset(text: &str, rank: usize, what: &str) -> Result<Vec<usize>, Failure> {
    let trimmed = text.trim();
    if trimmed.eq_ignore_ascii_case("all") {
        return Ok((0..rank).collect());
    }
    if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("empty") || trimmed == "none" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for token in trimmed.split(',') {
        let idx: usize = token
            .trim()
            .parse()
            .map_err(|_| fail(2, format!("cannot parse {what} index '{token}'")))?;
        if idx >= rank {
            return Err(fail(
                2,
                format!("{what} index {idx} out of range (0..{rank}, 0-based)"),
            ));
        }
        out.push(idx);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn orbits_cmd(type_label: &str, primes: &[u64], max_rank: usize) -> Result<(Value, u8), Failure> {
    let rs = root_system(type_label, max_rank)?;
    validate_primes(&rs, primes)?;
    let alg = ChevalleyAlgebra::new(rs);
    let mut catalogue = bala_carter_catalogue(&alg);
    if !primes.is_empty() {
        for rec in &mut catalogue {
            let flags =
                order_p_flags(alg.root_system(), rec, primes).map_err(lie_failure)?;
            rec.order_p_good_primes = flags;
        }
    }
    let records: Vec<Value> = catalogue.iter().map(record_to_json).collect();
    Ok((Value::Array(records), 0))
}

fn solve_requested_triple(
    type_label: &str,
    levi: &str,
    parabolic: &str,
) -> Result<(RootSystem, Vec<usize>, Vec<usize>, ChevalleyAlgebra, liealg::sl2::Sl2Triple), Failure>
{
    let rs = root_system(type_label, 8)?;
    let levi_subset = parse_subset(levi, rs.rank(), "Levi")?;
    let parabolic_subset = parse_subset(parabolic, levi_subset.len(), "parabolic")?;
    let (levi_alg, _grading, triple) =
        levi_triple(&rs, &levi_subset, &parabolic_subset).map_err(lie_failure)?;
    Ok((rs, levi_subset, parabolic_subset, levi_alg, triple))
}

fn triple_cmd(
    type_label: &str,
    levi: &str,
    parabolic: &str,
    primes: &[u64],
) -> Result<(Value, u8), Failure> {
    let rs = root_system(type_label, 8)?;
    validate_primes(&rs, primes)?;
    let (rs, levi_subset, _par, levi_alg, triple) =
        solve_requested_triple(type_label, levi, parabolic)?;
    let exact = verify_triple(&levi_alg, &triple, None).map_err(lie_failure)?;
    let mut modular = serde_json::Map::new();
    let mut all_ok = exact;
    for &p in primes {
        let ok = matches!(verify_triple(&levi_alg, &triple, Some(p)), Ok(true));
        all_ok &= ok;
        modular.insert(p.to_string(), Value::Bool(ok));
    }
    let value = json!({
        "ambient_type": rs.label(),
        "levi_subset": levi_subset,
        "triple": triple_to_json(&levi_alg, &triple),
        "verified": {
            "exact": exact,
            "mod": Value::Object(modular),
        },
    });
    Ok((value, if all_ok { 0 } else { 1 }))
}

fn verify_cmd(
    type_label: &str,
    levi: &str,
    parabolic: &str,
    primes: &[u64],
) -> Result<(Value, u8), Failure> {
    let rs = root_system(type_label, 8)?;
    validate_primes(&rs, primes)?;
    let (rs, levi_subset, parabolic_subset, levi_alg, triple) =
        solve_requested_triple(type_label, levi, parabolic)?;
    let mut reports = Vec::new();
    let mut all_ok = true;
    for &p in primes {
        let start = Instant::now();
        match realize_big_cell(&levi_alg, &triple, p) {
            Ok(cell) => {
                let report = verify_sl2_relations(&levi_alg, &cell);
                all_ok &= report.all_passed();
                let mut v = report.to_json();
                v.as_object_mut().unwrap().insert(
                    "elapsed_ms".to_string(),
                    Value::from(start.elapsed().as_millis() as u64),
                );
                reports.push(v);
            }
            Err(e) => {
                all_ok = false;
                reports.push(json!({ "p": p, "refused": e.to_string() }));
            }
        }
    }
    let value = json!({
        "ambient_type": rs.label(),
        "levi_subset": levi_subset,
        "parabolic_subset": parabolic_subset,
        "reports": reports,
    });
    Ok((value, if all_ok { 0 } else { 1 }))
}

fn parse_family(text: &str) -> Result<Family, Failure> {
    match text.to_ascii_uppercase().as_str() {
        "GL" => Ok(Family::Gl),
        "SP" => Ok(Family::Sp),
        "SO" => Ok(Family::So),
        s if s.starts_with("SL") => Err(fail(
            2,
            "SL is not offered: its trace form degenerates when the characteristic divides the \
             matrix size, so there is no uniform projection; use GL instead",
        )),
        other => Err(fail(2, format!("unknown family '{other}' (expected GL, Sp, or SO)"))),
    }
}

fn springer_cmd(
    family: &str,
    n: usize,
    p: u64,
    m: u8,
    samples: usize,
    seed: u64,
) -> Result<(Value, u8), Failure> {
    let family = parse_family(family)?;
    let setup = build_setup(family, n, p, m).map_err(lie_failure)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut compat_failures = 0usize;
    for _ in 0..samples {
        let g = setup.random_group_element(&mut rng);
        if !matches!(setup.check_p_power_compat(&g), Ok(true)) {
            compat_failures += 1;
        }
    }
    let identity_zero = setup
        .springer_map(&setup.identity())
        .map(|l| l.is_zero_matrix())
        .unwrap_or(false);
    let mut gl_shift = Value::Null;
    if family == Family::Gl {
        let mut agreement = true;
        for _ in 0..samples.min(20) {
            let mut u = setup.identity();
            for i in 0..n {
                for j in (i + 1)..n {
                    u[(i, j)] = setup.random_element(&mut rng);
                }
            }
            let image = setup.springer_map(&u).map_err(lie_failure)?;
            let shift = &u - &setup.identity();
            agreement &= (&image - &shift).is_zero_matrix();
        }
        gl_shift = Value::Bool(agreement);
    }
    let ok = compat_failures == 0
        && identity_zero
        && (gl_shift == Value::Null || gl_shift == Value::Bool(true));
    let value = json!({
        "family": family.to_string(),
        "n": n,
        "field": field_label(p, m),
        "lie_dim": setup.dim(),
        "gram_invertible": true,
        "samples": samples,
        "seed": seed,
        "p_power_compat_failures": compat_failures,
        "identity_maps_to_zero": identity_zero,
        "gl_map_is_shift_by_one": gl_shift,
        "all_ok": ok,
    });
    Ok((value, if ok { 0 } else { 1 }))
}

// ---------------------------------------------------------------------------
// selftest
// ---------------------------------------------------------------------------

fn selftest_cmd(seed: u64, max_rank: usize) -> Result<(Value, u8), Failure> {
    let mut all_ok = true;
    let types: Vec<&str> = ["A1", "A2", "A3", "B2", "B3", "C3", "G2"]
        .into_iter()
        .filter(|t| RootSystem::new(t).map(|rs| rs.rank() <= max_rank).unwrap_or(false))
        .collect();

    // Jacobi identity, exhaustive per type.
    let mut jacobi = serde_json::Map::new();
    for label in &types {
        let alg = ChevalleyAlgebra::new(RootSystem::new(label).unwrap());
        let d = alg.dim();
        let mut ok = true;
        'sweep: for i in 0..d {
            let a = liealg::chevalley::LieElt::<liealg::Rat>::basis(i);
            for j in 0..d {
                let b = liealg::chevalley::LieElt::basis(j);
                let ab = alg.bracket(&a, &b);
                for k in 0..d {
                    let c = liealg::chevalley::LieElt::basis(k);
                    let t1 = alg.bracket(&a, &alg.bracket(&b, &c));
                    let t2 = alg.bracket(&b, &alg.bracket(&c, &a));
                    let t3 = alg.bracket(&c, &ab);
                    if !t1.add(&t2).add(&t3).is_zero() {
                        ok = false;
                        break 'sweep;
                    }
                }
            }
        }
        all_ok &= ok;
        jacobi.insert(label.to_string(), Value::Bool(ok));
    }

    // Distinguished-parabolic classifier against the brute-force oracle.
    let mut classifier = serde_json::Map::new();
    for label in &types {
        let alg = ChevalleyAlgebra::new(RootSystem::new(label).unwrap());
        let r = alg.rank();
        let mut disagreements = 0u64;
        for mask in 0u32..(1 << r) {
            let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let g = grading(&alg, &subset).unwrap();
            if is_distinguished(&g) != is_distinguished_oracle(&alg, &g) {
                disagreements += 1;
            }
        }
        all_ok &= disagreements == 0;
        classifier.insert(label.to_string(), Value::from(disagreements));
    }

    // Catalogue sizes on small types, against the partition oracle in type A.
    let mut catalogue = serde_json::Map::new();
    for (label, expected) in [("A1", 2usize), ("A2", 3), ("A3", 5), ("G2", 5)] {
        if RootSystem::new(label).unwrap().rank() > max_rank {
            continue;
        }
        let alg = ChevalleyAlgebra::new(RootSystem::new(label).unwrap());
        let got = bala_carter_catalogue(&alg).len();
        all_ok &= got == expected;
        catalogue.insert(
            label.to_string(),
            json!({ "records": got, "expected": expected }),
        );
    }

    // Modular one-parameter relations on two benchmark regular cases.
    let mut relations = serde_json::Map::new();
    for (label, p) in [("A2", 3u64), ("B2", 5)] {
        let rs = RootSystem::new(label).unwrap();
        let alg = ChevalleyAlgebra::new(rs);
        let result = (|| -> liealg::Result<Value> {
            let g = grading(&alg, &[])?;
            let x = liealg::sl2::richardson_candidate(&alg, &g, None)?;
            let t = liealg::sl2::solve_triple(&alg, &g, &x)?;
            let cell = realize_big_cell(&alg, &t, p)?;
            let report = verify_sl2_relations(&alg, &cell);
            Ok(report.to_json())
        })();
        match result {
            Ok(v) => {
                let passed = v.get("all_passed") == Some(&Value::Bool(true));
                all_ok &= passed;
                relations.insert(format!("{label}@{p}"), v);
            }
            Err(e) => {
                all_ok = false;
                relations.insert(format!("{label}@{p}"), json!({ "refused": e.to_string() }));
            }
        }
    }

    // Classical matrix groups: p-th power compatibility on sampled elements.
    let mut groups = serde_json::Map::new();
    for (family, n, p) in [(Family::Sp, 4usize, 5u64), (Family::Gl, 3, 7)] {
        let key = format!("{family}({n})/{}", field_label(p, 1));
        match build_setup(family, n, p, 1) {
            Ok(setup) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut failures = 0usize;
                for _ in 0..20 {
                    let g = setup.random_group_element(&mut rng);
                    if !matches!(setup.check_p_power_compat(&g), Ok(true)) {
                        failures += 1;
                    }
                }
                all_ok &= failures == 0;
                groups.insert(key, json!({ "samples": 20, "failures": failures }));
            }
            Err(e) => {
                all_ok = false;
                groups.insert(key, json!({ "refused": e.to_string() }));
            }
        }
    }

    // Inverse p-power map on diagonal tori over F_9.
    let mut toral = serde_json::Map::new();
    {
        let (p, m) = (3u64, 2u8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut failures = 0usize;
        for trial in 0..20u32 {
            let n_steps = 1 + (trial % 3);
            let zero = Fq::extension(p, m, &[0]).unwrap();
            let a = Mat::from_fn(3, 3, |i, j| {
                if i == j {
                    let coeffs: Vec<i64> = (0..m)
                        .map(|_| (rand_chacha::rand_core::RngCore::next_u64(&mut rng) % p) as i64)
                        .collect();
                    Fq::extension(p, m, &coeffs).unwrap()
                } else {
                    zero
                }
            });
            match toral_p_root(&a, n_steps, p, m) {
                Ok(root) => {
                    let mut back = root;
                    for _ in 0..n_steps {
                        back = back.pow(p);
                    }
                    if !(&back - &a).is_zero_matrix() {
                        failures += 1;
                    }
                }
                Err(_) => failures += 1,
            }
        }
        all_ok &= failures == 0;
        toral.insert("F_{3^2}".to_string(), json!({ "samples": 20, "failures": failures }));
    }

    let value = json!({
        "seed": seed,
        "max_rank": max_rank,
        "checks": {
            "jacobi": Value::Object(jacobi),
            "distinguished_classifier_disagreements": Value::Object(classifier),
            "catalogue_counts": Value::Object(catalogue),
            "one_parameter_relations": Value::Object(relations),
            "matrix_groups": Value::Object(groups),
            "toral_round_trip": Value::Object(toral),
        },
        "all_ok": all_ok,
    });
    Ok((value, if all_ok { 0 } else { 1 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_parsing() {
        assert_eq!(parse_subset("all", 4, "Levi").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_subset("empty", 4, "Levi").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_subset("2,0", 4, "Levi").unwrap(), vec![0, 2]);
        assert!(parse_subset("4", 4, "Levi").is_err());
        assert!(parse_subset("x", 4, "Levi").is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!(parse_family("gl").unwrap(), Family::Gl);
        assert_eq!(parse_family("Sp").unwrap(), Family::Sp);
        assert!(parse_family("SL").is_err());
        assert!(parse_family("SU").is_err());
    }
}
