//! Integral sl2-triples attached to distinguished parabolic gradings.
//!
//! For a distinguished grading `g` with cocharacter `tau`, the module finds a
//! Richardson element `X` in the degree-2 piece with small integer
//! coefficients, sets `H = dtau(1)` (the cocharacter written in the coroot
//! basis), and solves `[X, Y] = H` for the unique `Y` in the degree-(-2)
//! piece.  The primes dividing denominators of `Y` are recorded on the triple
//! as a certificate of the rings over which the triple is defined.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chevalley::{reduce_mod_p, ChevalleyAlgebra, LieElt};
use crate::error::{LieError, Result};
use crate::matrix::{mat_mod_p, Mat};
use crate::parabolic::{associated_cocharacter, is_distinguished, ParabolicGrading};
use crate::scalar::{is_prime, prime_divisors_big, Rat, Scalar};

/// An sl2-triple `(X, H, Y)` with `[X,Y] = H`, `[H,X] = 2X`, `[H,Y] = -2Y`.
///
/// `X` is supported on the degree-2 piece of the parabolic grading, `Y` on
/// the degree-(-2) piece, and `H` on the torus.  `X` and `H` always have
/// integer coefficients; the primes dividing denominators of `Y` are listed
/// in `denominator_primes`, so the triple is defined over the localization
/// of the integers away from that set.
#[derive(Clone, Debug)]
pub struct Sl2Triple {
    pub x: LieElt<Rat>,
    pub h: LieElt<Rat>,
    pub y: LieElt<Rat>,
    /// Primes dividing some denominator of a coefficient of `y`.
    pub denominator_primes: BTreeSet<u64>,
    /// The subset of simple roots defining the parabolic the triple came from.
    pub i_subset: Vec<usize>,
}

/// Maximum number of candidate coefficient vectors tried by
/// [`richardson_candidate`] before giving up.
pub const RICHARDSON_ATTEMPT_BOUND: usize = 4096;

/// Writes `x` as `(1/l) * xz` with `xz` integral and `l` the positive least
/// common denominator.
fn integral_rep(x: &LieElt<Rat>) -> (LieElt<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for (_, c) in x.coeffs() {
        l = l.lcm(c.denom());
    }
    l = l.abs();
    let lr = Rat::from_integer(l.clone());
    let xz = x.map_scalars(|c| {
        let s = c.clone() * lr.clone();
        assert!(s.is_integer());
        s.to_integer()
    });
    (xz, l)
}

/// The degree-0 basis indices that are root vectors (excludes the torus).
fn degree_zero_roots(alg: &ChevalleyAlgebra, g: &ParabolicGrading) -> Vec<usize> {
    g.piece(0)
        .iter()
        .copied()
        .filter(|&i| i < alg.num_roots())
        .collect()
}

/// Matrix of `ad(x): g(0) -> g(2)` with integer entries.
///
/// Rows are indexed by the degree-2 root vectors.  Columns run over the
/// degree-0 root vectors followed by the rank-many torus directions; the
/// torus columns are taken in the *fundamental coweight* basis (the torus
/// basis of the adjoint-group form), where `[x, w_j]` has coefficient
/// `-x_beta * beta_j` on the root vector for `beta`.  Over the rationals the
/// coweight and coroot bases span the same space, so the rank is the same in
/// either; modulo a prime dividing the Cartan determinant only the coweight
/// basis gives the rank of the map on the adjoint form, which is the form
/// whose orbits the surjectivity certificate speaks about.
fn certificate_matrix(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    xz: &LieElt<BigInt>,
) -> Mat<BigInt> {
    let rows = g.piece(2);
    let rank = alg.rank();
    let zero_roots = degree_zero_roots(alg, g);
    let mut m: Mat<BigInt> = Mat::zeros(rows.len(), zero_roots.len() + rank);
    for (c, &idx) in zero_roots.iter().enumerate() {
        let br = alg.bracket(xz, &LieElt::basis(idx));
        for (r, &row_idx) in rows.iter().enumerate() {
            m[(r, c)] = br.coeff(row_idx);
        }
    }
    for j in 0..rank {
        for (r, &row_idx) in rows.iter().enumerate() {
            let beta_j = alg.root_system().root(row_idx)[j];
            m[(r, zero_roots.len() + j)] = -xz.coeff(row_idx) * BigInt::from(beta_j);
        }
    }
    m
}

/// Matrix of `ad(x): g(-2) -> g(0)` with integer entries, together with the
/// row basis.  Rows run over the full degree-0 basis (root vectors, then the
/// coroot torus basis `H_1..H_r`); columns over the degree-(-2) root vectors.
fn descent_matrix(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    xz: &LieElt<BigInt>,
) -> (Mat<BigInt>, Vec<usize>) {
    let cols = g.piece(-2).to_vec();
    let zero_basis = g.piece(0).to_vec();
    let mut m: Mat<BigInt> = Mat::zeros(zero_basis.len(), cols.len());
    for (c, &idx) in cols.iter().enumerate() {
        let br = alg.bracket(xz, &LieElt::basis(idx));
        debug_assert!(br.support().all(|s| zero_basis.contains(&s)));
        for (r, &row_idx) in zero_basis.iter().enumerate() {
            m[(r, c)] = br.coeff(row_idx);
        }
    }
    (m, zero_basis)
}

/// Checks the Richardson surjectivity certificate for `x`: `ad(x)` maps the
/// degree-0 piece onto the degree-2 piece over the rationals, and over `F_p`
/// when a prime is supplied.  A rational `x` with `p` in a denominator is
/// never `p`-integral, so the modular certificate fails for it.
pub fn richardson_certificate(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    x: &LieElt<Rat>,
    p: Option<u64>,
) -> bool {
    assert!(
        x.support().all(|i| g.degree_of_basis(i) == 2),
        "certificate applies to elements of the degree-2 piece"
    );
    let d = g.dim_piece(2);
    let (xz, l) = integral_rep(x);
    let m = certificate_matrix(alg, g, &xz);
    if m.int_rank() != d {
        return false;
    }
    if let Some(p) = p {
        if (&l % BigInt::from(p)).is_zero() {
            return false;
        }
        match mat_mod_p(&m, p) {
            Ok(mp) => {
                if mp.rank() != d {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Whether `ad(x): g(-2) -> g(0)` is bijective over the rationals.
pub fn descent_bijective(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    x: &LieElt<Rat>,
) -> bool {
    let (xz, _) = integral_rep(x);
    let (m, zero_basis) = descent_matrix(alg, g, &xz);
    let d = g.dim_piece(-2);
    zero_basis.len() == d && m.int_rank() == d
}

/// Searches deterministically for a Richardson element in the degree-2 piece:
/// first the all-ones coefficient vector, then vectors with entries cycling
/// through `{1..b}` for growing bounds `b`, in lexicographic order, up to
/// [`RICHARDSON_ATTEMPT_BOUND`] candidates.  Each candidate must pass the
/// rational surjectivity certificate, and the mod-`p` certificate when a
/// prime is supplied.
pub fn richardson_candidate(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    p: Option<u64>,
) -> Result<LieElt<Rat>> {
    if !is_distinguished(g) {
        return Err(LieError::NotDistinguished);
    }
    if let Some(p) = p {
        if !is_prime(p) {
            return Err(LieError::NotPrime(p));
        }
        if !alg.root_system().is_good_prime(p) {
            return Err(LieError::BadPrime {
                p,
                label: alg.root_system().label().to_string(),
            });
        }
    }
    let deg2 = g.piece(2).to_vec();
    let d = deg2.len() as u32;
    let mut attempts = 0usize;
    for bound in 1u128.. {
        let total = bound.saturating_pow(d);
        for code in 0..total {
            // Decode `code` in base `bound` into digits in 1..=bound.
            let mut digits = Vec::with_capacity(d as usize);
            let mut c = code;
            for _ in 0..d {
                digits.push((c % bound) as i64 + 1);
                c /= bound;
            }
            // Vectors whose maximum entry is below `bound` were already
            // tried at a smaller bound.
            if bound > 1 && !digits.contains(&(bound as i64)) {
                continue;
            }
            attempts += 1;
            if attempts > RICHARDSON_ATTEMPT_BOUND {
                return Err(LieError::SearchExhausted {
                    attempts: RICHARDSON_ATTEMPT_BOUND,
                });
            }
            let x = LieElt::from_coeffs(
                deg2.iter()
                    .zip(digits.iter())
                    .map(|(&i, &c)| (i, Rat::from_integer(BigInt::from(c)))),
            );
            if richardson_certificate(alg, g, &x, p) {
                return Ok(x);
            }
        }
        if total == 0 {
            // Zero-dimensional degree-2 piece: nothing to search.
            break;
        }
    }
    Err(LieError::SearchExhausted { attempts })
}

/// Completes a Richardson element `x` to an sl2-triple.
///
/// `H` is the grading cocharacter written in the coroot basis, and `Y` is the
/// unique rational solution of `[X, Y] = H` supported on the degree-(-2)
/// piece, computed by fraction-free elimination over the integers.
pub fn solve_triple(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    x: &LieElt<Rat>,
) -> Result<Sl2Triple> {
    if !is_distinguished(g) {
        return Err(LieError::NotDistinguished);
    }
    assert!(
        x.support().all(|i| g.degree_of_basis(i) == 2),
        "X must be supported on the degree-2 piece"
    );
    let rank = alg.rank();
    let tau = associated_cocharacter(alg, g)?;
    let m_coords = tau
        .coroot_coords(alg.root_system())
        .expect("cocharacter has coroot coordinates");
    let mut h: LieElt<Rat> = LieElt::zero();
    for (i, m_i) in m_coords.iter().enumerate().take(rank) {
        assert!(m_i.is_integer());
        h.add_term(alg.h_index(i), m_i.clone());
    }

    let (xz, l) = integral_rep(x);
    let (m, zero_basis) = descent_matrix(alg, g, &xz);
    let b: Vec<BigInt> = zero_basis
        .iter()
        .map(|&i| {
            let c = h.coeff(i);
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    // [x, y] = h  <=>  [xz, (l * y)] = l^2 * h / l ... more directly:
    // solving [xz, y'] = h gives [x, l*y'] = h, so y = l * y'.
    let sol = m.int_solve_unique(&b).map_err(|e| {
        LieError::NotRichardson(format!(
            "ad(X) is not invertible from the degree-(-2) piece to the degree-0 piece: {e}"
        ))
    })?;
    let lr = Rat::from_integer(l);
    let mut y: LieElt<Rat> = LieElt::zero();
    for (t, &idx) in g.piece(-2).iter().enumerate() {
        y.add_term(idx, sol[t].clone() * lr.clone());
    }
    let mut denominator_primes = BTreeSet::new();
    for (_, c) in y.coeffs() {
        denominator_primes.extend(prime_divisors_big(c.denom()));
    }
    let triple = Sl2Triple {
        x: x.clone(),
        h,
        y,
        denominator_primes,
        i_subset: g.subset().to_vec(),
    };
    assert!(
        verify_triple(alg, &triple, None)?,
        "constructed triple must satisfy the bracket relations exactly"
    );
    Ok(triple)
}

/// Evaluates the three bracket identities of the triple over the rationals
/// (`p = None`) or over `F_p`.  Reduction modulo a prime dividing a
/// denominator of `Y` is refused.
pub fn verify_triple(alg: &ChevalleyAlgebra, t: &Sl2Triple, p: Option<u64>) -> Result<bool> {
    match p {
        None => {
            let two = Rat::from_integer(BigInt::from(2));
            let r1 = alg.bracket(&t.x, &t.y).sub(&t.h);
            let r2 = alg.bracket(&t.h, &t.x).sub(&t.x.scale(&two));
            let r3 = alg.bracket(&t.h, &t.y).add(&t.y.scale(&two));
            Ok(r1.is_zero() && r2.is_zero() && r3.is_zero())
        }
        Some(p) => {
            if !is_prime(p) {
                return Err(LieError::NotPrime(p));
            }
            if t.denominator_primes.contains(&p) {
                return Err(LieError::NotDefinedAtP { p });
            }
            let x = reduce_mod_p(&t.x, p)?;
            let h = reduce_mod_p(&t.h, p)?;
            let y = reduce_mod_p(&t.y, p)?;
            let two = crate::scalar::Fq::from_int(2);
            let r1 = alg.bracket(&x, &y).sub(&h);
            let r2 = alg.bracket(&h, &x).sub(&x.scale(&two));
            let r3 = alg.bracket(&h, &y).add(&y.scale(&two));
            Ok(r1.is_zero() && r2.is_zero() && r3.is_zero())
        }
    }
}

/// Whether every graded piece of degree `>= 2p` vanishes, i.e. the grading
/// height is below `2p`.  The prime must be good for the root system.
///
/// When the criterion holds and a triple whose `Y`-denominators avoid `p` is
/// supplied, the function additionally asserts `(ad X)^p = 0` over `F_p`,
/// the computable surrogate for the vanishing of the `p`-th power of `X` in
/// the restricted structure.
pub fn order_p_criterion(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
    p: u64,
    triple: Option<&Sl2Triple>,
) -> Result<bool> {
    if !is_prime(p) {
        return Err(LieError::NotPrime(p));
    }
    if !alg.root_system().is_good_prime(p) {
        return Err(LieError::BadPrime {
            p,
            label: alg.root_system().label().to_string(),
        });
    }
    let ok = g.max_degree() < 2 * p as i64;
    if ok {
        if let Some(t) = triple {
            if !t.denominator_primes.contains(&p) {
                let xp = reduce_mod_p(&t.x, p)?;
                let ad = alg.adjoint_matrix(&xp);
                assert!(
                    ad.pow(p).is_zero_matrix(),
                    "(ad X)^p must vanish mod p when the grading height is below 2p"
                );
            }
        }
    }
    Ok(ok)
}

/// Whether `p` divides the order of the center of the simply connected form
/// (the Cartan determinant).  At such primes the adjoint representation has
/// kernel, so `(ad X)^p = 0` is weaker than the vanishing of the `p`-th
/// power in the restricted structure; callers should record, not assert,
/// equivalence there.
pub fn center_p_torsion(rs: &crate::rootdata::RootSystem, p: u64) -> bool {
    let det = rs.cartan_det().unsigned_abs();
    det % p == 0
}

/// Serializes a triple as JSON: sparse coefficient maps keyed by basis
/// labels, plus the denominator-prime certificate and the parabolic subset.
pub fn triple_to_json(alg: &ChevalleyAlgebra, t: &Sl2Triple) -> serde_json::Value {
    fn elt_json(alg: &ChevalleyAlgebra, e: &LieElt<Rat>) -> serde_json::Value {
        let mut m = serde_json::Map::new();
        for (&i, c) in e.coeffs() {
            m.insert(alg.basis_label(i), serde_json::Value::String(c.to_string()));
        }
        serde_json::Value::Object(m)
    }
    serde_json::json!({
        "type": alg.root_system().label(),
        "parabolic_subset": t.i_subset,
        "x": elt_json(alg, &t.x),
        "h": elt_json(alg, &t.h),
        "y": elt_json(alg, &t.y),
        "denominator_primes": t.denominator_primes.iter().copied().collect::<Vec<u64>>(),
    })
}
