//! Classical matrix groups over finite fields.
//!
//! Each supported family (`GL_n`, `Sp_n`, `SO_n`) is realized concretely as a
//! set of `n x n` matrices over `F_{p^m}` together with its Lie algebra,
//! embedded in the full matrix algebra.  The trace form of the ambient matrix
//! algebra restricts to the Lie algebra; when that restriction is
//! nondegenerate it yields an equivariant projection
//! `gl_n -> Lie(G)`, which in turn gives a map from unipotent group elements
//! to nilpotent Lie algebra elements (`u -> project(u)`, or `u -> u - 1` for
//! `GL_n`).  The module also provides the inverse `p^n`-th power map on
//! diagonal (toral) elements.
//!
//! Everything is exact arithmetic in `F_{p^m}` (`m <= 4`); no floating point
//! and no probabilistic shortcuts are involved in the checks themselves.
//! Pseudorandom sampling is used only to choose test elements, and every
//! sampled group element is built from generators that preserve the defining
//! form exactly, then re-verified by `is_in_group`.

use std::fmt;

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{LieError, Result};
use crate::matrix::Mat;
use crate::scalar::{is_prime, Field, Fq};

/// Classical matrix group families with built-in realizations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// All invertible `n x n` matrices; Lie algebra is the full matrix
    /// algebra `gl_n`.
    Gl,
    /// Invertible matrices preserving the antidiagonal symplectic form on
    /// `F^n` (`n` even); Lie algebra `sp_n`.
    Sp,
    /// Determinant-one matrices preserving the split symmetric antidiagonal
    /// form on `F^n`; Lie algebra `so_n`.
    So,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gl => write!(f, "GL"),
            Family::Sp => write!(f, "Sp"),
            Family::So => write!(f, "SO"),
        }
    }
}

/// Short display name for the coefficient field `F_{p^m}`.
pub fn field_label(p: u64, m: u8) -> String {
    if m == 1 {
        format!("F_{p}")
    } else {
        format!("F_{{{p}^{m}}}")
    }
}

/// A classical group `G <= GL_n(F_{p^m})` with its Lie algebra and the trace
/// form data needed for the equivariant projection `gl_n -> Lie(G)`.
pub struct MatrixGroupSetup {
    /// Which classical family this is.
    pub family: Family,
    /// Matrix size (the group lives inside `n x n` matrices).
    pub n: usize,
    /// Characteristic of the coefficient field.
    pub p: u64,
    /// Extension degree: the field is `F_{p^m}`.
    pub m: u8,
    /// Basis of the Lie algebra inside `gl_n`, in a canonical (reduced row
    /// echelon) order.
    pub lie_basis: Vec<Mat<Fq>>,
    /// Gram matrix `gram[i][j] = tr(b_i b_j)` of the trace form on the basis.
    pub gram: Mat<Fq>,
    /// The invariant bilinear form defining the group (`None` for `GL_n`).
    pub form: Option<Mat<Fq>>,
    gram_inv: Mat<Fq>,
    one: Fq,
}

impl MatrixGroupSetup {
    /// Dimension of the Lie algebra.
    pub fn dim(&self) -> usize {
        self.lie_basis.len()
    }

    /// The field element `v` (an integer reduced into `F_{p^m}`).
    pub fn scalar(&self, v: i64) -> Fq {
        scalar_in(self.p, self.m, v)
    }

    /// The identity matrix with entries attached to the working field.
    pub fn identity(&self) -> Mat<Fq> {
        self.attach(&Mat::identity(self.n))
    }

    /// Re-expresses a matrix with every entry attached to `F_{p^m}`.
    pub fn attach(&self, a: &Mat<Fq>) -> Mat<Fq> {
        let one = self.one;
        a.map(|v| *v * one)
    }

    /// A uniformly pseudorandom field element.
    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Fq {
        random_field_element(self.p, self.m, rng)
    }

    fn random_unit(&self, rng: &mut ChaCha8Rng) -> Fq {
        loop {
            let v = self.random_element(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    /// Orthogonal projection `gl_n -> Lie(G)` with respect to the trace form:
    /// the unique Lie algebra element whose trace pairings against the basis
    /// agree with those of `a`.  Linear, restricts to the identity on
    /// `Lie(G)`, and kills the orthogonal complement.
    pub fn project(&self, a: &Mat<Fq>) -> Mat<Fq> {
        let a = self.attach(a);
        let pairings: Vec<Fq> =
            self.lie_basis.iter().map(|b| (&a * b).trace()).collect();
        let coeffs = self.gram_inv.mul_vec(&pairings);
        let mut out: Mat<Fq> = Mat::zeros(self.n, self.n);
        for (c, b) in coeffs.iter().zip(self.lie_basis.iter()) {
            out = &out + &b.scale(c);
        }
        self.attach(&out)
    }

    /// Exact membership test: invertibility for `GL_n`, exact preservation of
    /// the defining form for `Sp_n`, the same plus determinant one for
    /// `SO_n`.
    pub fn is_in_group(&self, g: &Mat<Fq>) -> bool {
        if g.rows() != self.n || g.cols() != self.n {
            return false;
        }
        let g = self.attach(g);
        match self.family {
            Family::Gl => !g.det().is_zero(),
            Family::Sp => {
                let f = self.form.as_ref().unwrap();
                mats_equal(&(&(&g.transpose() * f) * &g), f)
            }
            Family::So => {
                let f = self.form.as_ref().unwrap();
                mats_equal(&(&(&g.transpose() * f) * &g), f)
                    && g.det() == self.scalar(1)
            }
        }
    }

    /// Compares the projection of the `p`-th power of a group element with
    /// the `p`-th (restricted) power of its projection.  Returns whether the
    /// two agree; refuses matrices outside the group.
    pub fn check_p_power_compat(&self, g: &Mat<Fq>) -> Result<bool> {
        if !self.is_in_group(g) {
            return Err(LieError::NotInGroup(format!(
                "matrix is not in {}({}) over {}",
                self.family,
                self.n,
                field_label(self.p, self.m)
            )));
        }
        let g = self.attach(g);
        let lhs = self.project(&g.pow(self.p));
        let rhs = self.project(&g).pow(self.p);
        Ok(mats_equal(&lhs, &rhs))
    }

    /// Maps a unipotent group element to a nilpotent Lie algebra element:
    /// `u - 1` for `GL_n`, the trace-form projection of `u` for the other
    /// families.  Refuses non-members and non-unipotent elements.
    pub fn springer_map(&self, u: &Mat<Fq>) -> Result<Mat<Fq>> {
        if !self.is_in_group(u) {
            return Err(LieError::NotInGroup(format!(
                "matrix is not in {}({}) over {}",
                self.family,
                self.n,
                field_label(self.p, self.m)
            )));
        }
        let u = self.attach(u);
        let shifted = &u - &self.identity();
        if !shifted.is_zero_matrix() && shifted.nilpotency_degree().is_none() {
            return Err(LieError::NotUnipotent);
        }
        let image = match self.family {
            Family::Gl => shifted,
            Family::Sp | Family::So => self.project(&u),
        };
        assert!(
            image.is_zero_matrix() || image.nilpotency_degree().is_some(),
            "image of a unipotent element must be nilpotent"
        );
        Ok(image)
    }

    /// Basis of the orthogonal complement of `Lie(G)` in `gl_n` with respect
    /// to the trace form.
    pub fn perp_basis(&self) -> Vec<Mat<Fq>> {
        let n = self.n;
        let d = self.dim();
        // Row j expresses the linear functional A -> tr(A b_j) in the
        // coordinates A_{kl} (flattened as k*n + l): tr(A b_j) = sum A_{kl} b_j[(l,k)].
        let mut pairing: Mat<Fq> = Mat::zeros(d, n * n);
        for (j, b) in self.lie_basis.iter().enumerate() {
            for k in 0..n {
                for l in 0..n {
                    pairing[(j, k * n + l)] = b[(l, k)];
                }
            }
        }
        pairing
            .nullspace()
            .into_iter()
            .map(|v| self.attach(&unflatten(&v, n)))
            .collect()
    }

    /// A pseudorandom group element: a product of a few exactly
    /// form-preserving generators (transvection-type unipotents and mirrored
    /// diagonal torus elements), re-verified by `is_in_group`.
    pub fn random_group_element(&self, rng: &mut ChaCha8Rng) -> Mat<Fq> {
        let factors = 6;
        let mut g = self.identity();
        for _ in 0..factors {
            let f = match self.family {
                Family::Gl => {
                    if rng.gen_bool(0.5) {
                        self.random_torus_element(rng)
                    } else {
                        // Elementary transvection 1 + t E_{ij}, i != j.
                        let i = rng.gen_range(0..self.n);
                        let mut j = rng.gen_range(0..self.n - 1);
                        if j >= i {
                            j += 1;
                        }
                        let mut t = self.identity();
                        t[(i, j)] = self.random_element(rng);
                        t
                    }
                }
                Family::Sp => {
                    if rng.gen_bool(0.3) {
                        self.random_torus_element(rng)
                    } else {
                        self.random_symplectic_transvection(rng)
                    }
                }
                Family::So => {
                    if rng.gen_bool(0.3) {
                        self.random_torus_element(rng)
                    } else {
                        self.random_orthogonal_unipotent(rng)
                    }
                }
            };
            g = &g * &f;
        }
        assert!(self.is_in_group(&g), "generator product left the group");
        g
    }

    /// A pseudorandom diagonal torus element (mirrored inverse pairs for the
    /// form-preserving families, arbitrary units for `GL_n`).
    pub fn random_torus_element(&self, rng: &mut ChaCha8Rng) -> Mat<Fq> {
        let n = self.n;
        let mut g: Mat<Fq> = Mat::zeros(n, n);
        match self.family {
            Family::Gl => {
                for i in 0..n {
                    g[(i, i)] = self.random_unit(rng);
                }
            }
            Family::Sp | Family::So => {
                for i in 0..n / 2 {
                    let d = self.random_unit(rng);
                    g[(i, i)] = d;
                    g[(n - 1 - i, n - 1 - i)] = d.inverse().unwrap();
                }
                if n % 2 == 1 {
                    // The middle entry must square to one to preserve the
                    // form (and keep determinant one).
                    g[(n / 2, n / 2)] = self.scalar(1);
                }
            }
        }
        self.attach(&g)
    }

    /// A symplectic transvection `x -> x + t <v, x> v`, written as the matrix
    /// `1 + t v (v^T J)`; preserves the form exactly for every `v` and `t`.
    fn random_symplectic_transvection(&self, rng: &mut ChaCha8Rng) -> Mat<Fq> {
        let n = self.n;
        let form = self.form.as_ref().unwrap();
        let mut v: Mat<Fq> = Mat::zeros(n, 1);
        loop {
            for i in 0..n {
                v[(i, 0)] = self.random_element(rng);
            }
            if !v.is_zero_matrix() {
                break;
            }
        }
        let t = self.random_element(rng);
        let rank_one = &(&v * &v.transpose()) * form;
        &self.identity() + &rank_one.scale(&t)
    }

    /// A unipotent orthogonal element `exp(t b)` for a Lie algebra basis
    /// element `b` with `b^3 = 0`; the truncated exponential
    /// `1 + t b + t^2 b^2 / 2` preserves the form exactly (char != 2).
    fn random_orthogonal_unipotent(&self, rng: &mut ChaCha8Rng) -> Mat<Fq> {
        let cubics: Vec<&Mat<Fq>> = self
            .lie_basis
            .iter()
            .filter(|b| b.pow(3).is_zero_matrix())
            .collect();
        if cubics.is_empty() {
            return self.random_torus_element(rng);
        }
        let b = cubics[rng.gen_range(0..cubics.len())];
        let t = self.random_element(rng);
        let half = self.scalar(2).inverse().unwrap();
        let bt = b.scale(&t);
        let sq = (&bt * &bt).scale(&half);
        &(&self.identity() + &bt) + &sq
    }
}

/// Builds the matrix realization of `family(n)` over `F_{p^m}`, including the
/// Lie algebra basis and the Gram matrix of the trace form.
///
/// Refuses characteristic `2` for `Sp` and `SO` (it is a bad prime for those
/// families), non-primes, and geometrically meaningless sizes.  If the trace
/// form is degenerate on the Lie algebra the setup is refused with the
/// offending prime named; no claim is made in advance about which small
/// configurations survive this test.
pub fn build_setup(family: Family, n: usize, p: u64, m: u8) -> Result<MatrixGroupSetup> {
    if !is_prime(p) {
        return Err(LieError::NotPrime(p));
    }
    match family {
        Family::Gl => {
            if n == 0 {
                return Err(LieError::Unsupported("GL(0) is empty".into()));
            }
        }
        Family::Sp => {
            if n < 2 || n % 2 != 0 {
                return Err(LieError::Unsupported(format!(
                    "Sp({n}) needs an even size of at least 2"
                )));
            }
            if p == 2 {
                return Err(LieError::BadPrime { p, label: format!("Sp({n})") });
            }
        }
        Family::So => {
            if n < 3 {
                return Err(LieError::Unsupported(format!(
                    "SO({n}) of size below 3 is not offered"
                )));
            }
            if p == 2 {
                return Err(LieError::BadPrime { p, label: format!("SO({n})") });
            }
        }
    }
    let one = scalar_in(p, m, 1);
    if one.field_params() != (p, m) {
        // scalar_in already validated p and m via the Fq constructors.
        unreachable!("field construction disagreed with the requested parameters");
    }

    let form = match family {
        Family::Gl => None,
        Family::Sp => {
            let mut f: Mat<Fq> = Mat::zeros(n, n);
            for i in 0..n / 2 {
                f[(i, n - 1 - i)] = scalar_in(p, m, 1);
                f[(n - 1 - i, i)] = scalar_in(p, m, -1);
            }
            Some(f)
        }
        Family::So => {
            let mut f: Mat<Fq> = Mat::zeros(n, n);
            for i in 0..n {
                f[(i, n - 1 - i)] = scalar_in(p, m, 1);
            }
            Some(f)
        }
    };

    let lie_basis: Vec<Mat<Fq>> = match &form {
        None => {
            // gl_n: all matrix units, row-major.
            let mut basis = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let mut b: Mat<Fq> = Mat::zeros(n, n);
                    b[(i, j)] = one;
                    basis.push(b);
                }
            }
            basis
        }
        Some(f) => {
            // Solve A^T F + F A = 0 as a linear system in the n^2 entries
            // A_{ij} (flattened as i*n + j).  Equation (r, c) reads
            // sum_k A_{kr} F_{kc} + sum_l F_{rl} A_{lc} = 0.
            let mut sys: Mat<Fq> = Mat::zeros(n * n, n * n);
            for r in 0..n {
                for c in 0..n {
                    for k in 0..n {
                        let cur = sys[(r * n + c, k * n + r)];
                        sys[(r * n + c, k * n + r)] = cur + f[(k, c)];
                    }
                    for l in 0..n {
                        let cur = sys[(r * n + c, l * n + c)];
                        sys[(r * n + c, l * n + c)] = cur + f[(r, l)];
                    }
                }
            }
            sys.nullspace()
                .into_iter()
                .map(|v| unflatten(&v, n).map(|x| *x * one))
                .collect()
        }
    };

    let d = lie_basis.len();
    let mut gram: Mat<Fq> = Mat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            gram[(i, j)] = (&lie_basis[i] * &lie_basis[j]).trace() * one;
        }
    }
    let Some(gram_inv) = gram.inverse() else {
        return Err(LieError::DegenerateForm(format!(
            "trace form of {family}({n}) is singular over {}",
            field_label(p, m)
        )));
    };

    Ok(MatrixGroupSetup { family, n, p, m, lie_basis, gram, form, gram_inv, one })
}

/// Inverse of the `n`-th iterated `p`-th power map on diagonal (toral)
/// matrices over `F_{p^m}`: applies `a -> a^(p^((m - n) mod m))` entrywise,
/// so that following it with the `p^n`-th power is the identity.  Refuses
/// non-diagonal input.
pub fn toral_p_root(a: &Mat<Fq>, n: u32, p: u64, m: u8) -> Result<Mat<Fq>> {
    if !is_prime(p) {
        return Err(LieError::NotPrime(p));
    }
    if a.rows() != a.cols() {
        return Err(LieError::NotDiagonal);
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if i != j && !a[(i, j)].is_zero() {
                return Err(LieError::NotDiagonal);
            }
        }
    }
    let one = scalar_in(p, m, 1);
    let k = (u32::from(m) - (n % u32::from(m))) % u32::from(m);
    let mut out: Mat<Fq> = Mat::zeros(a.rows(), a.rows());
    for i in 0..a.rows() {
        out[(i, i)] = (a[(i, i)] * one).frobenius(k);
    }
    Ok(out)
}

/// Whether the diagonal part of the orthogonal complement of `Lie(G)` is
/// closed under entrywise `p`-th powers (the restricted-power operation on
/// commuting diagonal matrices).
pub fn diagonal_perp_closed_under_p(setup: &MatrixGroupSetup) -> bool {
    let n = setup.n;
    let d = setup.dim();
    // Functionals D -> tr(D b_j) restricted to diagonal D = diag(d_0..d_{n-1}).
    let mut pairing: Mat<Fq> = Mat::zeros(d, n);
    for (j, b) in setup.lie_basis.iter().enumerate() {
        for i in 0..n {
            pairing[(j, i)] = b[(i, i)];
        }
    }
    let one = setup.scalar(1);
    let basis: Vec<Vec<Fq>> = pairing
        .nullspace()
        .into_iter()
        .map(|v| v.into_iter().map(|x| x * one).collect())
        .collect();
    if basis.is_empty() {
        return true;
    }
    let span: Mat<Fq> = Mat::from_rows(basis.clone());
    let base_rank = span.rank();
    for v in &basis {
        let powered: Vec<Fq> = v.iter().map(|x| x.pow(setup.p)).collect();
        let mut rows = basis.clone();
        rows.push(powered);
        if Mat::from_rows(rows).rank() != base_rank {
            return false;
        }
    }
    true
}

fn scalar_in(p: u64, m: u8, v: i64) -> Fq {
    if m == 1 {
        Fq::prime(p, v).expect("validated prime")
    } else {
        Fq::extension(p, m, &[v]).expect("validated field parameters")
    }
}

fn random_field_element(p: u64, m: u8, rng: &mut ChaCha8Rng) -> Fq {
    if m == 1 {
        Fq::prime(p, rng.gen_range(0..p) as i64).expect("validated prime")
    } else {
        let coeffs: Vec<i64> =
            (0..m).map(|_| rng.gen_range(0..p) as i64).collect();
        Fq::extension(p, m, &coeffs).expect("validated field parameters")
    }
}

fn unflatten(v: &[Fq], n: usize) -> Mat<Fq> {
    Mat::from_fn(n, n, |i, j| v[i * n + j])
}

/// Equality that tolerates unattached scalar constants.
fn mats_equal(a: &Mat<Fq>, b: &Mat<Fq>) -> bool {
    (a - b).is_zero_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn setup_dimensions_and_eligibility() {
        let sp4 = build_setup(Family::Sp, 4, 5, 1).unwrap();
        assert_eq!(sp4.dim(), 10);
        assert!(sp4.gram.inverse().is_some());

        let so5 = build_setup(Family::So, 5, 7, 1).unwrap();
        assert_eq!(so5.dim(), 10);
        let so5b = build_setup(Family::So, 5, 5, 1).unwrap();
        assert_eq!(so5b.dim(), 10);

        let gl3 = build_setup(Family::Gl, 3, 7, 1).unwrap();
        assert_eq!(gl3.dim(), 9);

        assert!(matches!(
            build_setup(Family::Sp, 4, 2, 1),
            Err(LieError::BadPrime { p: 2, .. })
        ));
        assert!(matches!(
            build_setup(Family::So, 5, 2, 1),
            Err(LieError::BadPrime { p: 2, .. })
        ));
        assert!(matches!(build_setup(Family::Sp, 4, 6, 1), Err(LieError::NotPrime(6))));
        assert!(matches!(build_setup(Family::Sp, 3, 5, 1), Err(LieError::Unsupported(_))));
        assert!(matches!(build_setup(Family::So, 2, 5, 1), Err(LieError::Unsupported(_))));
    }

    #[test]
    fn lie_basis_satisfies_the_form_equation() {
        for (fam, n, p) in [(Family::Sp, 4, 5), (Family::So, 5, 7), (Family::So, 3, 5)] {
            let s = build_setup(fam, n, p, 1).unwrap();
            let f = s.form.as_ref().unwrap();
            for b in &s.lie_basis {
                let residue = &(&b.transpose() * f) + &(f * b);
                assert!(residue.is_zero_matrix(), "{fam}({n}) basis element fails");
            }
            // The basis is linearly independent by construction (one free
            // column each); check the count against n(n±1)/2.
            let expected = match fam {
                Family::Sp => n * (n + 1) / 2,
                Family::So => n * (n - 1) / 2,
                Family::Gl => n * n,
            };
            assert_eq!(s.dim(), expected);
        }
    }

    #[test]
    fn so3_trace_form_outcome_at_3_recorded() {
        // Size 3 in characteristic 3 is a boundary configuration; the
        // observed outcome is that the trace form stays nondegenerate, so
        // the setup is accepted rather than refused.
        let s = build_setup(Family::So, 3, 3, 1).unwrap();
        assert_eq!(s.dim(), 3);
        assert!(!s.gram.det().is_zero());
    }

    #[test]
    fn projection_fixes_lie_algebra_and_kills_complement() {
        for (fam, n, p) in [(Family::Sp, 4, 5), (Family::So, 5, 7), (Family::Gl, 3, 7)] {
            let s = build_setup(fam, n, p, 1).unwrap();
            for b in &s.lie_basis {
                assert!(mats_equal(&s.project(b), b));
            }
            let mut r = rng(0x5717);
            for _ in 0..10 {
                let a = Mat::from_fn(n, n, |_, _| s.random_element(&mut r));
                let pa = s.project(&a);
                // Idempotence and vanishing pairings of the residual.
                assert!(mats_equal(&s.project(&pa), &pa));
                let residual = &a - &pa;
                for b in &s.lie_basis {
                    assert!((&residual * b).trace().is_zero());
                }
            }
            // The identity matrix is orthogonal to trace-zero algebras.
            let p1 = s.project(&s.identity());
            match fam {
                Family::Gl => assert!(mats_equal(&p1, &s.identity())),
                _ => assert!(p1.is_zero_matrix()),
            }
        }
    }

    #[test]
    fn ambient_algebra_splits_when_gram_is_invertible() {
        for (fam, n, p) in [(Family::Sp, 4, 5), (Family::So, 5, 7), (Family::Gl, 3, 7)] {
            let s = build_setup(fam, n, p, 1).unwrap();
            let perp = s.perp_basis();
            assert_eq!(s.dim() + perp.len(), n * n);
            let mut rows = Vec::new();
            for b in s.lie_basis.iter().chain(perp.iter()) {
                rows.push((0..n * n).map(|k| b[(k / n, k % n)]).collect::<Vec<_>>());
            }
            assert_eq!(Mat::from_rows(rows).rank(), n * n, "{fam}({n}) does not split");
        }
    }

    #[test]
    fn projection_is_equivariant_under_sampled_conjugation() {
        for (fam, n, p) in [(Family::Sp, 4, 5), (Family::So, 5, 7)] {
            let s = build_setup(fam, n, p, 1).unwrap();
            let mut r = rng(0xe9_1234);
            for _ in 0..8 {
                let g = s.random_group_element(&mut r);
                let ginv = g.inverse().expect("group elements invert");
                let a = Mat::from_fn(n, n, |_, _| s.random_element(&mut r));
                let lhs = s.project(&(&(&g * &a) * &ginv));
                let rhs = &(&g * &s.project(&a)) * &ginv;
                assert!(mats_equal(&lhs, &rhs), "{fam}({n}) projection not equivariant");
            }
        }
    }

    #[test]
    fn sampled_group_elements_satisfy_p_power_compat() {
        for (fam, n, p) in
            [(Family::Sp, 4, 5), (Family::So, 5, 5), (Family::So, 5, 7), (Family::Gl, 3, 7)]
        {
            let s = build_setup(fam, n, p, 1).unwrap();
            let mut r = rng(0xc0);
            for _ in 0..25 {
                let g = s.random_group_element(&mut r);
                assert_eq!(s.check_p_power_compat(&g).unwrap(), true);
            }
        }
    }

    #[test]
    fn non_members_are_refused() {
        let s = build_setup(Family::Sp, 4, 5, 1).unwrap();
        let mut singular: Mat<Fq> = Mat::identity(4);
        singular[(3, 3)] = s.scalar(0);
        assert!(matches!(
            s.check_p_power_compat(&singular),
            Err(LieError::NotInGroup(_))
        ));
        // Invertible but not symplectic: a non-mirrored diagonal.
        let mut d: Mat<Fq> = Mat::identity(4);
        d[(0, 0)] = s.scalar(2);
        assert!(matches!(s.springer_map(&d), Err(LieError::NotInGroup(_))));
    }

    #[test]
    fn diagonal_semisimple_elements_over_f25() {
        let s = build_setup(Family::Sp, 4, 5, 2).unwrap();
        let mut r = rng(0xf25);
        for _ in 0..20 {
            let g = s.random_torus_element(&mut r);
            assert!(s.is_in_group(&g));
            assert_eq!(s.check_p_power_compat(&g).unwrap(), true);
        }
    }

    #[test]
    fn springer_map_on_gl_is_shift_by_one() {
        let s = build_setup(Family::Gl, 3, 7, 1).unwrap();
        // Jordan block.
        let mut u = s.identity();
        u[(0, 1)] = s.scalar(1);
        u[(1, 2)] = s.scalar(1);
        let l = s.springer_map(&u).unwrap();
        assert!(mats_equal(&l, &(&u - &s.identity())));
        assert_eq!(l.nilpotency_degree(), Some(3));
        // The identity goes to zero.
        assert!(s.springer_map(&s.identity()).unwrap().is_zero_matrix());
        // Random upper unipotents agree with u - 1.
        let mut r = rng(0x91);
        for _ in 0..10 {
            let mut u = s.identity();
            for i in 0..3 {
                for j in (i + 1)..3 {
                    u[(i, j)] = s.random_element(&mut r);
                }
            }
            let l = s.springer_map(&u).unwrap();
            assert!(mats_equal(&l, &(&u - &s.identity())));
        }
    }

    #[test]
    fn springer_map_projects_transvections_to_their_nilpotent_part() {
        let s = build_setup(Family::Sp, 4, 5, 1).unwrap();
        let mut r = rng(0x7a);
        for _ in 0..10 {
            let u = s.random_symplectic_transvection(&mut r);
            assert!(s.is_in_group(&u));
            let l = s.springer_map(&u).unwrap();
            // A transvection is 1 + N with N in the Lie algebra, so the
            // projection returns exactly N.
            assert!(mats_equal(&l, &(&u - &s.identity())));
            assert!(l.is_zero_matrix() || l.nilpotency_degree().is_some());
        }
    }

    #[test]
    fn springer_map_is_equivariant_and_refuses_non_unipotents() {
        let s = build_setup(Family::So, 5, 7, 1).unwrap();
        let mut r = rng(0x50);
        for _ in 0..8 {
            let u = s.random_orthogonal_unipotent(&mut r);
            if !s
                .springer_map(&u)
                .is_ok()
            {
                panic!("sampled unipotent was rejected");
            }
            let g = s.random_group_element(&mut r);
            let ginv = g.inverse().unwrap();
            let conj = &(&g * &u) * &ginv;
            let lhs = s.springer_map(&conj).unwrap();
            let rhs = &(&g * &s.springer_map(&u).unwrap()) * &ginv;
            assert!(mats_equal(&lhs, &rhs));
        }
        // A non-unipotent semisimple element is refused.
        let mut d: Mat<Fq> = Mat::zeros(5, 5);
        let two = s.scalar(2);
        d[(0, 0)] = two;
        d[(1, 1)] = s.scalar(1);
        d[(2, 2)] = s.scalar(1);
        d[(3, 3)] = s.scalar(1);
        d[(4, 4)] = two.inverse().unwrap();
        assert!(s.is_in_group(&d));
        assert!(matches!(s.springer_map(&d), Err(LieError::NotUnipotent)));
    }

    #[test]
    fn toral_p_root_inverts_the_iterated_p_power() {
        for (p, m) in [(3u64, 2u8), (3, 3), (5, 2)] {
            let mut r = rng(0x0907 + p + u64::from(m));
            for step in 1..=3u32 {
                for _ in 0..20 {
                    let a = Mat::from_fn(3, 3, |i, j| {
                        if i == j {
                            random_field_element(p, m, &mut r)
                        } else {
                            scalar_in(p, m, 0)
                        }
                    });
                    let root = toral_p_root(&a, step, p, m).unwrap();
                    let mut back = root;
                    for _ in 0..step {
                        back = back.pow(p);
                    }
                    assert!(mats_equal(&back, &a));
                }
            }
        }
    }

    #[test]
    fn toral_p_root_examples_and_refusals() {
        // Over F_9 one inverse step is the Frobenius itself: a -> a^3.
        let a9 = Fq::extension(3, 2, &[0, 1]).unwrap();
        let a = Mat::from_fn(2, 2, |i, j| {
            if i == j {
                a9.pow((i + 1) as u64)
            } else {
                scalar_in(3, 2, 0)
            }
        });
        let root = toral_p_root(&a, 1, 3, 2).unwrap();
        for i in 0..2 {
            assert_eq!(root[(i, i)], a[(i, i)].frobenius(1));
        }
        // Over the prime field every step is the identity map.
        let b = Mat::from_fn(2, 2, |i, j| {
            if i == j {
                scalar_in(7, 1, 3 + i as i64)
            } else {
                scalar_in(7, 1, 0)
            }
        });
        let rb = toral_p_root(&b, 1, 7, 1).unwrap();
        assert!(mats_equal(&rb, &b));
        // Non-diagonal input is refused.
        let mut nd: Mat<Fq> = Mat::identity(2);
        nd[(0, 1)] = scalar_in(7, 1, 1);
        assert!(matches!(toral_p_root(&nd, 1, 7, 1), Err(LieError::NotDiagonal)));
        assert!(matches!(toral_p_root(&b, 1, 6, 1), Err(LieError::NotPrime(6))));
    }

    #[test]
    fn diagonal_tori_are_restricted_subalgebras() {
        // Idempotent diagonal basis of gl_n: E_ii^p = E_ii.
        let gl3 = build_setup(Family::Gl, 3, 7, 1).unwrap();
        for i in 0..3 {
            let mut e: Mat<Fq> = Mat::zeros(3, 3);
            e[(i, i)] = gl3.scalar(1);
            assert!(mats_equal(&e.pow(7), &e));
        }
        // Cartan basis of sp_4 (mirrored differences): H^p = H for odd p.
        let sp4 = build_setup(Family::Sp, 4, 5, 1).unwrap();
        for i in 0..2 {
            let mut h: Mat<Fq> = Mat::zeros(4, 4);
            h[(i, i)] = sp4.scalar(1);
            h[(3 - i, 3 - i)] = sp4.scalar(-1);
            assert!(mats_equal(&h.pow(5), &h));
        }
        // The diagonal part of the complement is closed under p-th powers,
        // including over proper extension fields.
        for (fam, n, p, m) in [
            (Family::So, 3, 3, 2u8),
            (Family::So, 3, 5, 2),
            (Family::Sp, 2, 3, 2),
            (Family::Sp, 4, 5, 1),
            (Family::So, 5, 7, 1),
        ] {
            let s = build_setup(fam, n, p, m).unwrap();
            assert!(diagonal_perp_closed_under_p(&s), "{fam}({n}) over {}", field_label(p, m));
        }
    }
}
