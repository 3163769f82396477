//! Truncated exponentials of nilpotent adjoint operators, their reduction to
//! a prime field, and the resulting rank-one subgroup realization.
//!
//! Everything is computed exactly over the rationals first; reduction mod
//! `p` happens only after an explicit integrality gate, so divided powers
//! never need to be constructed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::chevalley::{reduce_mod_p, ChevalleyAlgebra, LieElt};
use crate::error::{LieError, Result};
use crate::matrix::Mat;
use crate::parabolic::grading;
use crate::scalar::{Field, Fq, Rat};
use crate::sl2::{order_p_criterion, Sl2Triple};

/// The adjoint realization of the rank-one subgroup attached to an
/// sl2-triple over `F_p`: tables of `exp(s ad X)`, `exp(s ad Y)` for all
/// residues `s`, and the grading torus `t -> diag(t^deg)`.
#[derive(Debug)]
pub struct BigCellRealization {
    pub p: u64,
    pub triple: Sl2Triple,
    dim: usize,
    /// `x_table[s] = exp(s ad X) mod p`.
    x_table: Vec<Mat<Fq>>,
    /// `y_table[s] = exp(s ad Y) mod p`.
    y_table: Vec<Mat<Fq>>,
    /// Grading degree of each basis vector.
    degrees: Vec<i64>,
}

/// Exact exponential of the adjoint action of a nilpotent element: the
/// finite sum of `(ad x)^k / k!` over the rationals.
pub fn exact_exp_ad(alg: &ChevalleyAlgebra, x: &LieElt<Rat>) -> Result<Mat<Rat>> {
    exp_nilpotent(&alg.adjoint_matrix(x))
}

/// Exact exponential of a nilpotent rational matrix.
pub fn exp_nilpotent(m: &Mat<Rat>) -> Result<Mat<Rat>> {
    let Some(deg) = m.nilpotency_degree() else {
        return Err(LieError::NotNilpotent);
    };
    let n = m.rows();
    let mut sum: Mat<Rat> = Mat::identity(n);
    let mut term: Mat<Rat> = Mat::identity(n);
    for k in 1..deg {
        term = &term * m;
        let inv_k = Rat::new(BigInt::one(), BigInt::from(k));
        term = term.map(|v| v.clone() * inv_k.clone());
        sum = &sum + &term;
    }
    Ok(sum)
}

/// Whether every entry's denominator is coprime to `p`.
pub fn p_integrality_check(m: &Mat<Rat>, p: u64) -> bool {
    let pb = BigInt::from(p);
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m[(i, j)].denom().mod_floor(&pb).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Entrywise reduction of a `p`-integral rational matrix.
fn mat_rat_mod_p(m: &Mat<Rat>, p: u64) -> Result<Mat<Fq>> {
    let pb = BigInt::from(p);
    let mut out = Mat::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let den = m[(i, j)].denom().mod_floor(&pb);
            if den.is_zero() {
                return Err(LieError::NotDefinedAtP { p });
            }
            let num = m[(i, j)].numer().mod_floor(&pb);
            let num = Fq::prime(p, i64::try_from(&num).unwrap())?;
            let den = Fq::prime(p, i64::try_from(&den).unwrap())?;
            out[(i, j)] = num * den.inverse().expect("unit denominator");
        }
    }
    Ok(out)
}

/// Equality that tolerates unattached scalar constants.
fn mats_equal(a: &Mat<Fq>, b: &Mat<Fq>) -> bool {
    (a - b).is_zero_matrix()
}

fn is_identity(m: &Mat<Fq>) -> bool {
    let id: Mat<Fq> = Mat::identity(m.rows());
    mats_equal(m, &id)
}

/// The divided-power terms `(ad v)^k / k!` over the rationals, up to the
/// nilpotency degree.
fn exp_terms(alg: &ChevalleyAlgebra, v: &LieElt<Rat>) -> Result<Vec<Mat<Rat>>> {
    let m = alg.adjoint_matrix(v);
    let Some(deg) = m.nilpotency_degree() else {
        return Err(LieError::NotNilpotent);
    };
    let n = m.rows();
    let mut terms = vec![Mat::identity(n)];
    let mut term: Mat<Rat> = Mat::identity(n);
    for k in 1..deg {
        term = &term * &m;
        let inv_k = Rat::new(BigInt::one(), BigInt::from(k));
        term = term.map(|v| v.clone() * inv_k.clone());
        terms.push(term.clone());
    }
    Ok(terms)
}

/// `sum_k s^k T_k` for an integer scalar `s`.
fn assemble_exp(terms: &[Mat<Rat>], s: i64) -> Mat<Rat> {
    let n = terms[0].rows();
    let mut sum: Mat<Rat> = Mat::zeros(n, n);
    let mut s_pow = Rat::one();
    let s_rat = Rat::from_integer(BigInt::from(s));
    for t in terms {
        sum = &sum + &t.map(|v| v.clone() * s_pow.clone());
        s_pow *= s_rat.clone();
    }
    sum
}

/// Builds the adjoint realization over `F_p`, gated in order: `p` must be a
/// good prime, the grading height must be below `2p`, `p` must not divide a
/// denominator of `Y`, and every assembled exponential must be `p`-integral.
/// Each gate failure is reported by name.
pub fn realize_big_cell(
    alg: &ChevalleyAlgebra,
    t: &Sl2Triple,
    p: u64,
) -> Result<BigCellRealization> {
    let label = alg.root_system().label().to_string();
    if !crate::scalar::is_prime(p) {
        return Err(LieError::GateFailed(format!(
            "good prime: {p} is not prime"
        )));
    }
    if !alg.root_system().is_good_prime(p) {
        return Err(LieError::GateFailed(format!(
            "good prime: {p} is bad for {label}"
        )));
    }
    let g = grading(alg, &t.i_subset)?;
    if !order_p_criterion(alg, &g, p, Some(t))? {
        return Err(LieError::GateFailed(format!(
            "order_p_criterion: grading height {} is not below 2p = {}",
            g.max_degree(),
            2 * p
        )));
    }
    if t.denominator_primes.contains(&p) {
        return Err(LieError::GateFailed(format!(
            "denominator_primes: {p} divides a denominator of Y"
        )));
    }
    let x_terms = exp_terms(alg, &t.x)?;
    let y_terms = exp_terms(alg, &t.y)?;
    let mut x_table = Vec::with_capacity(p as usize);
    let mut y_table = Vec::with_capacity(p as usize);
    for (name, terms, table) in [
        ("X", &x_terms, &mut x_table),
        ("Y", &y_terms, &mut y_table),
    ] {
        for s in 0..p as i64 {
            let exp_s = assemble_exp(terms, s);
            if !p_integrality_check(&exp_s, p) {
                return Err(LieError::GateFailed(format!(
                    "p_integrality: exp({s} ad {name}) has a denominator divisible by {p}"
                )));
            }
            table.push(mat_rat_mod_p(&exp_s, p)?);
        }
    }
    let degrees: Vec<i64> = (0..alg.dim()).map(|i| g.degree_of_basis(i)).collect();
    Ok(BigCellRealization {
        p,
        triple: t.clone(),
        dim: alg.dim(),
        x_table,
        y_table,
        degrees,
    })
}

impl BigCellRealization {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `exp(s ad X)` over `F_p`, for any integer representative `s`.
    pub fn x_of(&self, s: i64) -> Mat<Fq> {
        let s = s.rem_euclid(self.p as i64) as usize;
        self.x_table[s].clone()
    }

    /// `exp(s ad Y)` over `F_p`.
    pub fn y_of(&self, s: i64) -> Mat<Fq> {
        let s = s.rem_euclid(self.p as i64) as usize;
        self.y_table[s].clone()
    }

    /// The grading torus: `t^degree` on each graded piece, for a unit `t`.
    pub fn h_of(&self, t: i64) -> Mat<Fq> {
        let tr = t.rem_euclid(self.p as i64);
        assert!(tr != 0, "h_of requires a unit");
        let tq = Fq::prime(self.p, tr).unwrap();
        let mut m: Mat<Fq> = Mat::zeros(self.dim, self.dim);
        for (i, &d) in self.degrees.iter().enumerate() {
            let v = if d >= 0 {
                tq.pow(d as u64)
            } else {
                tq.pow((-d) as u64).inverse().expect("unit")
            };
            m[(i, i)] = v;
        }
        m
    }
}

/// Least `m >= 1` with `M^m = 1` for a unipotent matrix over `F_p`; the
/// order of a unipotent element is always a power of `p`.
pub fn unipotent_order(m: &Mat<Fq>, p: u64) -> Result<u64> {
    let n = m.rows();
    let id: Mat<Fq> = Mat::identity(n);
    let nilpart = m - &id;
    if nilpart.nilpotency_degree().is_none() {
        return Err(LieError::NotUnipotent);
    }
    let mut order = 1u64;
    let mut cur = m.clone();
    while !is_identity(&cur) {
        cur = cur.pow(p);
        order *= p;
        assert!(order <= p.pow(8), "unipotent order overflow");
    }
    Ok(order)
}

/// Outcome of the relation suite: per-identity pass/fail counts and the
/// conjugation sign, when one is consistent.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub p: u64,
    pub dim: usize,
    /// The constant `c` with `n(1) x(s) n(1)^-1 = y(c s)` for all `s`.
    pub sign_c: Option<i64>,
    /// identity name -> (pass count, fail count)
    pub counts: BTreeMap<String, (usize, usize)>,
}

impl RelationReport {
    pub fn all_passed(&self) -> bool {
        self.counts.values().all(|&(_, fail)| fail == 0) && self.sign_c.is_some()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let identities: BTreeMap<String, serde_json::Value> = self
            .counts
            .iter()
            .map(|(k, &(pass, fail))| {
                (
                    k.clone(),
                    serde_json::json!({ "pass": pass, "fail": fail }),
                )
            })
            .collect();
        serde_json::json!({
            "p": self.p,
            "dim": self.dim,
            "sign_c": self.sign_c,
            "identities": identities,
            "all_passed": self.all_passed(),
        })
    }
}

/// Sweeps the defining relations of the realization over all of `F_p`
/// (scalars `s`) and `F_p^x` (units `t`):
/// one-parameter additivity for the two unipotent families, torus
/// multiplicativity, torus conjugation with weights `2` and `-2`, the Weyl
/// element relation `n(t) n(-1) = h(t)`, the conjugation `n(1) x(s) n(1)^-1
/// = y(c s)` with a single sign `c`, the tangent-map identity, and the
/// element orders.
pub fn verify_sl2_relations(alg: &ChevalleyAlgebra, b: &BigCellRealization) -> RelationReport {
    let p = b.p as i64;
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut record = |name: &str, ok: bool| {
        let e = counts.entry(name.to_string()).or_insert((0, 0));
        if ok {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    };

    for s in 0..p {
        for s2 in 0..p {
            record(
                "x_additivity",
                mats_equal(&(&b.x_of(s) * &b.x_of(s2)), &b.x_of(s + s2)),
            );
            record(
                "y_additivity",
                mats_equal(&(&b.y_of(s) * &b.y_of(s2)), &b.y_of(s + s2)),
            );
        }
    }
    for t in 1..p {
        for t2 in 1..p {
            record(
                "h_multiplicativity",
                mats_equal(&(&b.h_of(t) * &b.h_of(t2)), &b.h_of((t * t2).rem_euclid(p))),
            );
        }
    }
    for t in 1..p {
        let h = b.h_of(t);
        let h_inv = h.inverse().expect("torus is invertible");
        for s in 0..p {
            let lhs = &(&h * &b.x_of(s)) * &h_inv;
            record("h_conjugation_x", mats_equal(&lhs, &b.x_of(t * t * s)));
            let lhs = &(&h * &b.y_of(s)) * &h_inv;
            // Y sits in degree -2, so conjugation contracts by t^2.
            let t_inv = Fq::prime(b.p, t).unwrap().inverse().unwrap().val();
            record(
                "h_conjugation_y",
                mats_equal(&lhs, &b.y_of(t_inv * t_inv % p * s)),
            );
        }
    }

    let n_of = |t: i64| -> Mat<Fq> {
        let t_inv = Fq::prime(b.p, t.rem_euclid(p)).unwrap().inverse().unwrap().val();
        &(&b.x_of(t) * &b.y_of(-t_inv)) * &b.x_of(t)
    };
    for t in 1..p {
        record(
            "weyl_element",
            mats_equal(&(&n_of(t) * &n_of(-1)), &b.h_of(t)),
        );
    }

    // Conjugation by the Weyl element swaps the two unipotent families up to
    // a sign that is constant in s.
    let n1 = n_of(1);
    let n1_inv = n1.inverse().expect("Weyl element is invertible");
    let mut sign_c = None;
    let mut best_pass = 0usize;
    for c in [1i64, -1] {
        let pass = (0..p)
            .filter(|&s| {
                mats_equal(&(&(&n1 * &b.x_of(s)) * &n1_inv), &b.y_of(c * s))
            })
            .count();
        if pass == p as usize && sign_c.is_none() {
            sign_c = Some(c);
        }
        best_pass = best_pass.max(pass);
    }
    for _ in 0..best_pass {
        record("weyl_conjugation", true);
    }
    for _ in best_pass..p as usize {
        record("weyl_conjugation", false);
    }

    // Tangent map: the linear term of the exponential series reduces to the
    // adjoint action of the reduced X.
    let tangent_ok = match reduce_mod_p(&b.triple.x, b.p) {
        Ok(xp) => {
            let ad_xp = alg.adjoint_matrix(&xp);
            let exact_linear = alg.adjoint_matrix(&b.triple.x);
            match mat_rat_mod_p(&exact_linear, b.p) {
                Ok(reduced) => mats_equal(&reduced, &ad_xp),
                Err(_) => false,
            }
        }
        Err(_) => false,
    };
    record("tangent_map", tangent_ok);

    record(
        "x_order",
        unipotent_order(&b.x_of(1), b.p).map(|o| o == b.p).unwrap_or(false),
    );
    record(
        "y_order",
        unipotent_order(&b.y_of(1), b.p).map(|o| o == b.p).unwrap_or(false),
    );
    // The torus is a homomorphic image of the cyclic unit group, so every
    // value has order dividing p - 1.  (The image itself is smaller whenever
    // all grading degrees are even, which is always the case here: h_of(-1)
    // acts trivially in the adjoint representation.)
    let mut h_ok = true;
    for t in 1..p {
        if !is_identity(&b.h_of(t).pow(b.p - 1)) {
            h_ok = false;
        }
    }
    record("h_order", h_ok);

    RelationReport {
        p: b.p,
        dim: b.dim,
        sign_c,
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::grading;
    use crate::rootdata::RootSystem;
    use crate::sl2::{richardson_candidate, solve_triple};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn algebra(label: &str) -> ChevalleyAlgebra {
        ChevalleyAlgebra::new(RootSystem::new(label).unwrap())
    }

    fn borel_triple(alg: &ChevalleyAlgebra) -> Sl2Triple {
        let g = grading(alg, &[]).unwrap();
        let x = richardson_candidate(alg, &g, None).unwrap();
        solve_triple(alg, &g, &x).unwrap()
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let alg = algebra("A2");
        let exp = exact_exp_ad(&alg, &LieElt::zero()).unwrap();
        assert_eq!(exp, Mat::identity(8));
    }

    #[test]
    fn a1_exp_action_on_lowering_vector() {
        let alg = algebra("A1");
        let x: LieElt<Rat> = LieElt::basis(0);
        let exp = exact_exp_ad(&alg, &x).unwrap();
        // E_{-a} -> E_{-a} + H_a - E_a.
        let image = exp.mul_vec(&LieElt::<Rat>::basis(1).to_dense(3));
        assert_eq!(image[0], Rat::from_integer((-1).into()));
        assert_eq!(image[1], Rat::from_integer(1.into()));
        assert_eq!(image[2], Rat::from_integer(1.into()));
        // Unipotent with determinant 1.
        assert_eq!(exp.det(), Rat::from_integer(1.into()));
        let id: Mat<Rat> = Mat::identity(3);
        assert!((&exp - &id).nilpotency_degree().is_some());
    }

    #[test]
    fn exp_refuses_non_nilpotent() {
        let alg = algebra("A1");
        let h: LieElt<Rat> = LieElt::basis(alg.h_index(0));
        assert!(matches!(
            exact_exp_ad(&alg, &h),
            Err(LieError::NotNilpotent)
        ));
    }

    #[test]
    fn exp_inverse_property_on_random_nilpotents() {
        let alg = algebra("B2");
        let mut rng = ChaCha8Rng::seed_from_u64(0x0b2e);
        for _ in 0..20 {
            // Random element of the nilradical span (positive root vectors).
            let mut x: LieElt<Rat> = LieElt::zero();
            for idx in 0..alg.num_roots() / 2 {
                if rng.gen_bool(0.6) {
                    let c: i64 = rng.gen_range(-3..=3);
                    x.add_term(idx, Rat::from_integer(c.into()));
                }
            }
            let exp = exact_exp_ad(&alg, &x).unwrap();
            let exp_neg = exact_exp_ad(&alg, &x.scale(&Rat::from_integer((-1).into()))).unwrap();
            assert_eq!(&exp * &exp_neg, Mat::identity(alg.dim()));
            assert_eq!(exp.det(), Rat::from_integer(1.into()));
        }
    }

    #[test]
    fn p_integrality_examples() {
        let id: Mat<Rat> = Mat::identity(3);
        assert!(p_integrality_check(&id, 2));
        assert!(p_integrality_check(&id, 97));
        let mut m = id.clone();
        m[(0, 1)] = Rat::new(1.into(), 5.into());
        assert!(!p_integrality_check(&m, 5));
        assert!(p_integrality_check(&m, 3));
        // A2 Borel: nilpotence class 2 < 3, so the exponential is 3-integral.
        let alg = algebra("A2");
        let t = borel_triple(&alg);
        let exp = exact_exp_ad(&alg, &t.x).unwrap();
        assert!(p_integrality_check(&exp, 3));
    }

    #[test]
    fn a1_realization_at_5() {
        let alg = algebra("A1");
        let t = borel_triple(&alg);
        let b = realize_big_cell(&alg, &t, 5).unwrap();
        assert_eq!(b.dim(), 3);
        assert_eq!(unipotent_order(&b.x_of(1), 5).unwrap(), 5);
        assert_eq!(unipotent_order(&b.y_of(1), 5).unwrap(), 5);
        // h_of(2) acts by t^2 = 4 on X, t^{-2} = 4 on Y, 1 on H.
        let h2 = b.h_of(2);
        assert_eq!(h2[(0, 0)].val(), 4);
        assert_eq!(h2[(1, 1)].val(), 4);
        assert_eq!(h2[(2, 2)].val(), 1);
        let report = verify_sl2_relations(&alg, &b);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.sign_c, Some(-1));
    }

    #[test]
    fn a2_realization_at_3() {
        let alg = algebra("A2");
        let t = borel_triple(&alg);
        let b = realize_big_cell(&alg, &t, 3).unwrap();
        assert_eq!(unipotent_order(&b.x_of(1), 3).unwrap(), 3);
        let report = verify_sl2_relations(&alg, &b);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn g2_realization_at_7() {
        let alg = algebra("G2");
        let t = borel_triple(&alg);
        let b = realize_big_cell(&alg, &t, 7).unwrap();
        let report = verify_sl2_relations(&alg, &b);
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(unipotent_order(&b.x_of(1), 7).unwrap(), 7);
    }

    #[test]
    fn gates_fail_by_name() {
        // Order gate: the regular grading of G2 has height 10 >= 2*5.
        let alg = algebra("G2");
        let t = borel_triple(&alg);
        match realize_big_cell(&alg, &t, 5) {
            Err(LieError::GateFailed(msg)) => assert!(msg.contains("order_p_criterion"), "{msg}"),
            other => panic!("expected gate failure, got {other:?}"),
        }
        // Good-prime gate.
        match realize_big_cell(&alg, &t, 3) {
            Err(LieError::GateFailed(msg)) => assert!(msg.contains("good prime"), "{msg}"),
            other => panic!("expected gate failure, got {other:?}"),
        }
        match realize_big_cell(&alg, &t, 9) {
            Err(LieError::GateFailed(msg)) => assert!(msg.contains("not prime"), "{msg}"),
            other => panic!("expected gate failure, got {other:?}"),
        }
        // Denominator gate: scaling X by 3 puts a 3 in Y's denominators.
        let a1 = algebra("A1");
        let g = grading(&a1, &[]).unwrap();
        let x = richardson_candidate(&a1, &g, None).unwrap();
        let t3 = solve_triple(&a1, &g, &x.scale(&Rat::from_integer(3.into()))).unwrap();
        assert_eq!(t3.denominator_primes, std::collections::BTreeSet::from([3]));
        match realize_big_cell(&a1, &t3, 3) {
            Err(LieError::GateFailed(msg)) => {
                assert!(msg.contains("denominator_primes"), "{msg}")
            }
            other => panic!("expected gate failure, got {other:?}"),
        }
    }

    #[test]
    fn corrupted_y_fails_weyl_relation() {
        let alg = algebra("A1");
        let t = borel_triple(&alg);
        let bad = Sl2Triple {
            y: t.y.scale(&Rat::from_integer(2.into())),
            ..t
        };
        let b = realize_big_cell(&alg, &bad, 5).unwrap();
        let report = verify_sl2_relations(&alg, &b);
        assert!(!report.all_passed());
        let weyl = report.counts["weyl_element"];
        assert!(weyl.1 > 0, "{report:?}");
    }

    #[test]
    fn report_json_shape() {
        let alg = algebra("A1");
        let t = borel_triple(&alg);
        let b = realize_big_cell(&alg, &t, 3).unwrap();
        let report = verify_sl2_relations(&alg, &b);
        let v = report.to_json();
        assert_eq!(v["p"], 3);
        assert_eq!(v["dim"], 3);
        assert_eq!(v["all_passed"], true);
        assert!(v["identities"]["x_additivity"]["pass"].as_u64().unwrap() > 0);
        assert_eq!(v["identities"]["x_additivity"]["fail"], 0);
    }
}
