//! Integral Chevalley-basis Lie algebras.
//!
//! The basis is `[E_beta for beta in R (positives in order, then their
//! negatives)] ++ [H_1..H_r]`, and every structure constant is an integer.
//! Brackets of root vectors obey `[E_a, E_b] = N_{a,b} E_{a+b}` with
//! `|N_{a,b}| = q+1`, `q` the number of downward steps of the `a`-string
//! through `b`.  Signs are pinned by the extraspecial-pair convention: for
//! each non-simple positive root `g`, the (order-)minimal special pair
//! `(a1, g - a1)` summing to `g` receives `N = +(q+1)`, and every other
//! constant follows from antisymmetry, the Jacobi identity, and the
//! length-ratio identity `N_{x,y}/(z,z) = N_{y,z}/(x,x)` for `x+y+z = 0`.
//! Any consistent convention would do; this one is deterministic, which keeps
//! serialized output reproducible.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{LieError, Result};
use crate::matrix::Mat;
use crate::rootdata::RootSystem;
use crate::scalar::{Field, Fq, Rat, Scalar};

/// Sparse Lie algebra element: basis index -> coefficient, zeros dropped.
#[derive(Clone, PartialEq, Debug)]
pub struct LieElt<S> {
    coeffs: BTreeMap<usize, S>,
}

impl<S: Scalar> LieElt<S> {
    pub fn zero() -> Self {
        LieElt { coeffs: BTreeMap::new() }
    }

    pub fn basis(idx: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(idx, S::one());
        LieElt { coeffs }
    }

    pub fn from_coeffs(pairs: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut e = LieElt::zero();
        for (idx, c) in pairs {
            e.add_term(idx, c);
        }
        e
    }

    pub fn add_term(&mut self, idx: usize, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(idx).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, S> {
        &self.coeffs
    }

    pub fn coeff(&self, idx: usize) -> S {
        self.coeffs.get(&idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&idx, c) in &other.coeffs {
            out.add_term(idx, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-S::one())))
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return LieElt::zero();
        }
        let mut out = LieElt::zero();
        for (&idx, c) in &self.coeffs {
            out.add_term(idx, c.clone() * s.clone());
        }
        out
    }

    pub fn map_scalars<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> LieElt<T> {
        let mut out = LieElt::zero();
        for (&idx, c) in &self.coeffs {
            out.add_term(idx, f(c));
        }
        out
    }

    /// Coefficient vector in the full basis.
    pub fn to_dense(&self, dim: usize) -> Vec<S> {
        let mut v = vec![S::zero(); dim];
        for (&idx, c) in &self.coeffs {
            v[idx] = c.clone();
        }
        v
    }
}

/// The Chevalley algebra: a root system together with its integer
/// structure-constant tables.
pub struct ChevalleyAlgebra {
    rs: RootSystem,
    /// `root_table[i * 2N + j] = Some((k, c))` when `[E_i, E_j] = c E_k`;
    /// `None` when the bracket is zero or lands in the torus (`j = -i`).
    root_table: Vec<Option<(u32, i64)>>,
    /// Coroot coordinates of each root, for `[E_b, E_{-b}] = H_b`.
    coroots: Vec<Vec<i64>>,
}

impl ChevalleyAlgebra {
    /// Build the structure-constant tables for a root system.
    pub fn new(rs: RootSystem) -> Self {
        let n_pos = rs.num_pos();
        let nr = rs.num_roots();

        // Step 1: constants on special pairs of positive roots, by
        // increasing height of the sum.
        let mut pos_table: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let n_of = |table: &BTreeMap<(usize, usize), i64>, a: usize, b: usize| -> i64 {
            if a < b {
                table.get(&(a, b)).copied().unwrap_or(0)
            } else {
                -table.get(&(b, a)).copied().unwrap_or(0)
            }
        };
        // N_{mu, -nu} for distinct positive roots mu, nu with mu - nu a root.
        let mixed = |table: &BTreeMap<(usize, usize), i64>, mu: usize, nu: usize| -> i64 {
            let diff: Vec<i64> = rs
                .root(mu)
                .iter()
                .zip(rs.root(nu))
                .map(|(a, b)| a - b)
                .collect();
            let Some(d_idx) = rs.root_index(&diff) else {
                return 0;
            };
            if rs.is_positive(d_idx) {
                // mu = nu + delta; N_{mu,-nu} = -(|delta|^2/|mu|^2) N_{nu,delta}
                let v = rs.norm2(d_idx) * -n_of(table, nu, d_idx);
                assert!(v % rs.norm2(mu) == 0, "length-ratio identity must stay integral");
                v / rs.norm2(mu)
            } else {
                // nu = mu + eps; N_{mu,-nu} = +(|eps|^2/|nu|^2) N_{eps,mu}
                let e_idx = rs.negate(d_idx);
                let v = rs.norm2(e_idx) * n_of(table, e_idx, mu);
                assert!(v % rs.norm2(nu) == 0, "length-ratio identity must stay integral");
                v / rs.norm2(nu)
            }
        };

        for g in 0..n_pos {
            if rs.height(g) < 2 {
                continue;
            }
            // Decompositions g = a + b with a, b positive and a < b.
            let mut pairs = Vec::new();
            for a in 0..n_pos {
                let rest: Vec<i64> = rs
                    .root(g)
                    .iter()
                    .zip(rs.root(a))
                    .map(|(gc, ac)| gc - ac)
                    .collect();
                if let Some(b) = rs.root_index(&rest) {
                    if rs.is_positive(b) && a < b {
                        pairs.push((a, b));
                    }
                }
            }
            // The order-minimal pair is extraspecial; its first member is a
            // simple root because sums g = a + b with a simple always exist.
            let &(a1, b1) = pairs.first().expect("positive non-simple root must decompose");
            debug_assert_eq!(rs.height(a1), 1, "extraspecial first component is simple");
            let q = rs.string_down(b1, a1);
            pos_table.insert((a1, b1), q + 1);
            let n_g_neg_a1 = mixed(&pos_table, g, a1);
            debug_assert!(n_g_neg_a1 != 0);

            for &(a, b) in pairs.iter().skip(1) {
                // Jacobi identity on (E_{-a1}, E_a, E_b); every referenced
                // constant has a smaller sum height, so it is already known.
                let term1 = -mixed(&pos_table, a, a1) * n_of(&pos_table, rs.root_index(
                    &rs.root(a).iter().zip(rs.root(a1)).map(|(x, y)| x - y).collect::<Vec<_>>(),
                ).map_or(usize::MAX, |i| i), b);
                let term2 = mixed(&pos_table, b, a1) * n_of(&pos_table, rs.root_index(
                    &rs.root(b).iter().zip(rs.root(a1)).map(|(x, y)| x - y).collect::<Vec<_>>(),
                ).map_or(usize::MAX, |i| i), a);
                let num = -(term1 + term2);
                assert!(num % n_g_neg_a1 == 0, "Jacobi recursion must stay integral");
                pos_table.insert((a, b), num / n_g_neg_a1);
            }
        }

        // Step 2: the full root-root table over all sign combinations.
        let mut root_table = vec![None; nr * nr];
        for i in 0..nr {
            for j in 0..nr {
                if j == rs.negate(i) || i == j {
                    continue;
                }
                let sum: Vec<i64> = rs
                    .root(i)
                    .iter()
                    .zip(rs.root(j))
                    .map(|(a, b)| a + b)
                    .collect();
                let Some(k) = rs.root_index(&sum) else {
                    continue;
                };
                let c = match (rs.is_positive(i), rs.is_positive(j)) {
                    (true, true) => n_of(&pos_table, i, j),
                    (false, false) => -n_of(&pos_table, rs.negate(i), rs.negate(j)),
                    (true, false) => mixed(&pos_table, i, rs.negate(j)),
                    (false, true) => -mixed(&pos_table, j, rs.negate(i)),
                };
                debug_assert!(c != 0, "bracket onto a root must be nonzero");
                root_table[i * nr + j] = Some((k as u32, c));
            }
        }

        let coroots = (0..nr).map(|i| rs.coroot_coords(i)).collect();
        ChevalleyAlgebra { rs, root_table, coroots }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.rs.num_roots()
    }

    /// Dimension = #roots + rank.
    pub fn dim(&self) -> usize {
        self.rs.dim()
    }

    /// Basis index of the root vector `E_beta` for root index `beta`.
    pub fn e_index(&self, root_idx: usize) -> usize {
        root_idx
    }

    /// Basis index of the Cartan generator `H_i` (0-based simple index).
    pub fn h_index(&self, i: usize) -> usize {
        self.rs.num_roots() + i
    }

    /// Human-readable basis label: `E[coords]` or `H<i>` (1-based).
    pub fn basis_label(&self, idx: usize) -> String {
        let nr = self.rs.num_roots();
        if idx < nr {
            let coords: Vec<String> = self.rs.root(idx).iter().map(i64::to_string).collect();
            format!("E[{}]", coords.join(","))
        } else {
            format!("H{}", idx - nr + 1)
        }
    }

    /// The structure constant `N_{a,b}` for root indices, or 0 when the sum
    /// is not a root (coroot pairs are excluded; use `basis_bracket`).
    pub fn structure_constant(&self, a: usize, b: usize) -> i64 {
        if a == b || b == self.rs.negate(a) {
            return 0;
        }
        self.root_table[a * self.rs.num_roots() + b].map_or(0, |(_, c)| c)
    }

    /// Bracket of two basis elements as a sparse integer vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        let nr = self.rs.num_roots();
        match (i < nr, j < nr) {
            (true, true) => {
                if i == j {
                    return Vec::new();
                }
                if j == self.rs.negate(i) {
                    // [E_b, E_{-b}] = H_b; the negative-first pair flips sign.
                    let base = if self.rs.is_positive(i) { i } else { j };
                    let sign = if self.rs.is_positive(i) { 1 } else { -1 };
                    return self.coroots[base]
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m != 0)
                        .map(|(k, &m)| (nr + k, sign * m))
                        .collect();
                }
                match self.root_table[i * nr + j] {
                    Some((k, c)) => vec![(k as usize, c)],
                    None => Vec::new(),
                }
            }
            (false, true) => {
                // [H_k, E_b] = <b, alpha_k^v> E_b
                let c = self.rs.pairing_with_simple_coroot(j, i - nr);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(j, c)]
                }
            }
            (true, false) => {
                let c = self.rs.pairing_with_simple_coroot(i, j - nr);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(i, -c)]
                }
            }
            (false, false) => Vec::new(),
        }
    }

    /// Bilinear bracket of sparse elements over any scalar ring.
    pub fn bracket<S: Scalar>(&self, a: &LieElt<S>, b: &LieElt<S>) -> LieElt<S> {
        let mut out = LieElt::zero();
        for (&i, ca) in a.coeffs() {
            for (&j, cb) in b.coeffs() {
                for (k, c) in self.basis_bracket(i, j) {
                    out.add_term(k, ca.clone() * cb.clone() * S::from_int(c));
                }
            }
        }
        out
    }

    /// Matrix of `ad x` in the full basis (column `j` is `[x, e_j]`).
    pub fn adjoint_matrix<S: Scalar>(&self, x: &LieElt<S>) -> Mat<S> {
        let dim = self.dim();
        let mut m: Mat<S> = Mat::zeros(dim, dim);
        for j in 0..dim {
            for (&i, cx) in x.coeffs() {
                for (k, c) in self.basis_bracket(i, j) {
                    let t = m[(k, j)].clone() + cx.clone() * S::from_int(c);
                    m[(k, j)] = t;
                }
            }
        }
        m
    }

    /// Full structure table as `(i, j, [(k, c)])` triples over `i < j` with
    /// nonzero bracket, in lexicographic order (for serialization).
    pub fn structure_table_export(&self) -> Vec<(usize, usize, Vec<(usize, i64)>)> {
        let dim = self.dim();
        let mut out = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                let entries = self.basis_bracket(i, j);
                if !entries.is_empty() {
                    out.push((i, j, entries));
                }
            }
        }
        out
    }
}

/// Reduce a rational element modulo `p`, coefficientwise.  Fails when a
/// denominator is divisible by `p` (the element does not live in the local
/// ring at `p`).
pub fn reduce_mod_p(x: &LieElt<Rat>, p: u64) -> Result<LieElt<Fq>> {
    let pb = num_bigint::BigInt::from(p);
    let mut out = LieElt::zero();
    for (&idx, c) in x.coeffs() {
        if num_integer::Integer::mod_floor(c.denom(), &pb).is_zero() {
            return Err(LieError::NotDefinedAtP { p });
        }
        let num = num_integer::Integer::mod_floor(c.numer(), &pb);
        let den = num_integer::Integer::mod_floor(c.denom(), &pb);
        let num = i64::try_from(&num).unwrap();
        let den = i64::try_from(&den).unwrap();
        let inv = Fq::prime(p, den)?.inverse().expect("denominator unit mod p");
        out.add_term(idx, Fq::prime(p, num)? * inv);
    }
    Ok(out)
}
