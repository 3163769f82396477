//! Standard parabolic subalgebras and their even gradings.
//!
//! A subset `I` of the simple roots defines a grading function `f` with
//! `f(alpha) = 0` for simple `alpha` in `I`, `f(alpha) = 2` otherwise,
//! extended additively to all roots.  The parabolic is the sum of the
//! nonnegative degrees, its nilradical the strictly positive ones, and `I` is
//! distinguished exactly when `dim g(0) = dim g(2)` — an integer-level test
//! that is independent of the (good) characteristic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::chevalley::{ChevalleyAlgebra, LieElt};
use crate::error::{LieError, Result};
use crate::matrix::Mat;
use crate::rootdata::CoweightVector;
use crate::scalar::Rat;

/// The even grading induced by a subset `I` of simple roots.
#[derive(Clone, Debug)]
pub struct ParabolicGrading {
    i_subset: Vec<usize>,
    f_simple: Vec<i64>,
    /// degree -> basis indices of that graded piece, ascending.
    graded_basis: BTreeMap<i64, Vec<usize>>,
    /// degree of each basis index.
    degree_of: Vec<i64>,
}

impl ParabolicGrading {
    pub fn subset(&self) -> &[usize] {
        &self.i_subset
    }

    /// `f` on a root given in simple-root coordinates.
    pub fn f_of(&self, coords: &[i64]) -> i64 {
        coords.iter().zip(&self.f_simple).map(|(c, f)| c * f).sum()
    }

    /// `f` values on the simple roots.
    pub fn f_simple(&self) -> &[i64] {
        &self.f_simple
    }

    pub fn degree_of_basis(&self, idx: usize) -> i64 {
        self.degree_of[idx]
    }

    /// Basis indices of the degree-`d` piece (empty slice when zero).
    pub fn piece(&self, d: i64) -> &[usize] {
        self.graded_basis.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn dim_piece(&self, d: i64) -> usize {
        self.piece(d).len()
    }

    /// degree -> dimension, over nonzero pieces.
    pub fn dim_vector(&self) -> BTreeMap<i64, usize> {
        self.graded_basis.iter().map(|(&d, v)| (d, v.len())).collect()
    }

    /// Largest degree with a nonzero piece.
    pub fn max_degree(&self) -> i64 {
        *self.graded_basis.keys().last().expect("grading is never empty")
    }

    /// Basis indices of the nilradical (all strictly positive degrees).
    pub fn nilradical(&self) -> Vec<usize> {
        self.graded_basis
            .range(1..)
            .flat_map(|(_, v)| v.iter().copied())
            .collect()
    }
}

/// Build the grading of the algebra determined by the subset `I`.
pub fn grading(alg: &ChevalleyAlgebra, i_subset: &[usize]) -> Result<ParabolicGrading> {
    let rs = alg.root_system();
    let rank = rs.rank();
    let mut i_sorted: Vec<usize> = i_subset.to_vec();
    i_sorted.sort_unstable();
    i_sorted.dedup();
    if i_sorted.iter().any(|&i| i >= rank) {
        return Err(LieError::DimensionMismatch(format!(
            "simple-root index out of range for rank {rank}"
        )));
    }
    let mut f_simple = vec![2i64; rank];
    for &i in &i_sorted {
        f_simple[i] = 0;
    }
    let mut graded_basis: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut degree_of = vec![0i64; alg.dim()];
    for b in 0..alg.dim() {
        let d = if b < rs.num_roots() {
            rs.root(b).iter().zip(&f_simple).map(|(c, f)| c * f).sum()
        } else {
            0
        };
        degree_of[b] = d;
        graded_basis.entry(d).or_default().push(b);
    }
    Ok(ParabolicGrading { i_subset: i_sorted, f_simple, graded_basis, degree_of })
}

/// The distinguishedness test: `dim g(0) == dim g(2)`.
pub fn is_distinguished(g: &ParabolicGrading) -> bool {
    g.dim_piece(0) == g.dim_piece(2)
}

/// Independent distinguishedness oracle: compare `dim g(0)` with
/// `dim u - dim [u,u]`, the derived span computed by explicit brackets.
pub fn is_distinguished_oracle(alg: &ChevalleyAlgebra, g: &ParabolicGrading) -> bool {
    let u = g.nilradical();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (pos, &a) in u.iter().enumerate() {
        for &b in &u[pos + 1..] {
            let bracket = alg.basis_bracket(a, b);
            if bracket.is_empty() {
                continue;
            }
            let mut row = vec![BigInt::zero(); alg.dim()];
            for (k, c) in bracket {
                row[k] = BigInt::from(c);
            }
            rows.push(row);
        }
    }
    let derived_dim = if rows.is_empty() {
        0
    } else {
        Mat::from_rows(rows).int_rank()
    };
    u.len() - derived_dim == g.dim_piece(0)
}

/// The cocharacter associated to a distinguished parabolic: twice the sum of
/// the fundamental coweights outside `I`.  Refused for non-distinguished
/// subsets, where its integrality on the coroot lattice is not guaranteed.
pub fn associated_cocharacter(
    alg: &ChevalleyAlgebra,
    g: &ParabolicGrading,
) -> Result<CoweightVector> {
    if !is_distinguished(g) {
        return Err(LieError::NotDistinguished);
    }
    let tau = CoweightVector::from_ints(g.f_simple());
    assert!(
        tau.is_integral_on_coroot_lattice(alg.root_system()),
        "associated cocharacter of a distinguished parabolic must be integral"
    );
    Ok(tau)
}

/// All distinguished subsets `I`, ordered by (size, lexicographic).
pub fn enumerate_distinguished(alg: &ChevalleyAlgebra) -> Vec<Vec<usize>> {
    let rank = alg.rank();
    let mut found = Vec::new();
    for mask in 0u32..(1 << rank) {
        let subset: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
        let g = grading(alg, &subset).expect("valid subset");
        if is_distinguished(&g) {
            found.push(subset);
        }
    }
    found.sort_by_key(|s| (s.len(), s.clone()));
    found
}

/// Nilpotency class of the nilradical, read off the grading: one less than
/// the least `n >= 0` with `g(2n) = 0` when the nilradical is nonzero, and 0
/// for the degenerate `I = S` case.  `lower_central_class` is the
/// independent cross-check.
pub fn nilradical_class(g: &ParabolicGrading) -> usize {
    let mut n = 0i64;
    while g.dim_piece(2 * n) > 0 {
        n += 1;
    }
    (n - 1).max(0) as usize
}

/// Nilpotency class by direct lower-central-series computation of the
/// nilradical: least `c` with `u^(c+1) = 0`, where `u^(1) = u`.
pub fn lower_central_class(alg: &ChevalleyAlgebra, g: &ParabolicGrading) -> usize {
    let u = g.nilradical();
    if u.is_empty() {
        return 0;
    }
    let dim = alg.dim();
    // Current term of the series as a rational row-space basis.
    let mut current: Vec<LieElt<Rat>> = u.iter().map(|&b| LieElt::basis(b)).collect();
    let mut class = 0usize;
    loop {
        class += 1;
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for &a in &u {
            let ea = LieElt::<Rat>::basis(a);
            for v in &current {
                let w = alg.bracket(&ea, v);
                if !w.is_zero() {
                    rows.push(w.to_dense(dim));
                }
            }
        }
        if rows.is_empty() {
            return class;
        }
        // Reduce to a basis of the span to keep the next round small.
        let (rref, pivots) = Mat::from_rows(rows).rref();
        current = (0..pivots.len())
            .map(|r| {
                LieElt::from_coeffs(
                    (0..dim).map(|j| (j, rref[(r, j)].clone())),
                )
            })
            .collect();
        assert!(class <= alg.dim(), "lower central series failed to terminate");
    }
}

/// Dimensions of the eigenspace grading induced by an integral coweight:
/// degree of `E_beta` is `<beta, tau>`; the torus sits in degree 0.
pub fn coweight_grading_dims(
    alg: &ChevalleyAlgebra,
    tau: &CoweightVector,
) -> BTreeMap<i64, usize> {
    let rs = alg.root_system();
    let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
    dims.insert(0, rs.rank());
    for b in 0..rs.num_roots() {
        let v = tau.pairing(rs.root(b));
        assert!(v.is_integer(), "coweight grading requires integral pairings");
        let d = i64::try_from(&v.to_integer()).unwrap();
        *dims.entry(d).or_insert(0) += 1;
    }
    dims
}
