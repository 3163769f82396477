//! Exact scalar rings.
//!
//! Everything in this crate computes exactly: the two scalar families are
//! arbitrary-precision rationals ([`Rat`]) and finite fields `F_{p^m}`
//! ([`Fq`], with `m = 1` giving the prime field).  Matrices and Lie algebra
//! elements are generic over [`Scalar`]; algorithms that divide require the
//! [`Field`] refinement.  There is deliberately no floating-point instance.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{LieError, Result};

/// Arbitrary-precision exact rationals, the default scalar ring.
pub type Rat = BigRational;

/// Shorthand for a rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Commutative ring with a distinguished image of the integers.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(n: i64) -> Self;
}

/// Scalars in which every nonzero element is invertible.
pub trait Field: Scalar {
    /// Multiplicative inverse; `None` exactly on zero.
    fn inverse(&self) -> Option<Self>;
}

impl Scalar for BigInt {
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Scalar for Rat {
    fn from_int(n: i64) -> Self {
        rat(n)
    }
}

impl Field for Rat {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

// ---------------------------------------------------------------------------
// Finite fields
// ---------------------------------------------------------------------------

/// Largest supported extension degree for `F_{p^m}`.
pub const MAX_EXT_DEGREE: usize = 4;

/// An element of a finite field `F_{p^m}`, represented as a polynomial in a
/// fixed generator modulo a fixed monic irreducible of degree `m`.
///
/// For `m = 1` this is the prime field `F_p` and `p` may be any prime that
/// fits a machine word; extension fields (`m >= 2`) are limited to small `p`
/// (products must stay inside `i64`).
///
/// `p = 0` marks a plain integer that has not met a field yet; such values
/// come from `Scalar::from_int`, `zero()` and `one()` in generic code and are
/// reduced on first contact with a genuine field element.  Elements of two
/// different genuine fields never combine: that is a programming error and
/// panics.
#[derive(Clone, Copy)]
pub struct Fq {
    p: i64,
    m: u8,
    c: [i64; MAX_EXT_DEGREE],
}

impl Fq {
    /// Element `v mod p` of the prime field `F_p`.
    pub fn prime(p: u64, v: i64) -> Result<Fq> {
        if !is_prime(p) {
            return Err(LieError::NotPrime(p));
        }
        if p > (1 << 62) {
            return Err(LieError::Unsupported(format!("prime {p} too large")));
        }
        let p = p as i64;
        Ok(Fq { p, m: 1, c: [v.rem_euclid(p), 0, 0, 0] })
    }

    /// Element of `F_{p^m}` with the given generator-power coefficients
    /// (`coeffs[i]` multiplies `g^i`).  Requires `2 <= m <= 4` and small `p`.
    pub fn extension(p: u64, m: u8, coeffs: &[i64]) -> Result<Fq> {
        if !is_prime(p) {
            return Err(LieError::NotPrime(p));
        }
        if !(2..=MAX_EXT_DEGREE as u8).contains(&m) {
            return Err(LieError::Unsupported(format!(
                "extension degree {m} outside 2..={MAX_EXT_DEGREE}"
            )));
        }
        if p >= (1 << 15) {
            return Err(LieError::Unsupported(format!(
                "prime {p} too large for an extension field"
            )));
        }
        if coeffs.len() > m as usize {
            return Err(LieError::DimensionMismatch(format!(
                "{} coefficients for degree-{m} extension",
                coeffs.len()
            )));
        }
        let p = p as i64;
        let mut c = [0i64; MAX_EXT_DEGREE];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = v.rem_euclid(p);
        }
        Ok(Fq { p, m, c })
    }

    /// The field parameters `(p, m)`; `(0, 1)` for an unattached integer.
    pub fn field_params(&self) -> (u64, u8) {
        (self.p.max(0) as u64, self.m)
    }

    /// Canonical representative in `0..p` (prime fields only).
    pub fn val(&self) -> i64 {
        assert!(self.m == 1, "val() on an extension-field element");
        self.c[0]
    }

    /// Generator-power coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[i64] {
        &self.c[..self.m as usize]
    }

    fn attach(self, p: i64, m: u8) -> Fq {
        if self.p != 0 {
            assert!(
                self.p == p && self.m == m,
                "mixed finite fields: F_{}^{} and F_{}^{}",
                self.p,
                self.m,
                p,
                m
            );
            return self;
        }
        let mut c = [0i64; MAX_EXT_DEGREE];
        c[0] = self.c[0].rem_euclid(p);
        Fq { p, m, c }
    }

    fn unify(a: Fq, b: Fq) -> (Fq, Fq) {
        match (a.p, b.p) {
            (0, 0) => (a, b),
            (0, _) => (a.attach(b.p, b.m), b),
            (_, _) => (a, b.attach(a.p, a.m)),
        }
    }

    /// `self^e` by binary powering (`0^0 = 1`).
    pub fn pow(self, mut e: u64) -> Fq {
        let mut base = self;
        let mut acc = Fq::one().attach_like(&self);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn attach_like(self, other: &Fq) -> Fq {
        if other.p != 0 {
            self.attach(other.p, other.m)
        } else {
            self
        }
    }

    /// `self^(p^k)`: the `k`-th power of the Frobenius.
    pub fn frobenius(self, k: u32) -> Fq {
        assert!(self.p > 0, "frobenius on an unattached integer");
        let mut out = self;
        for _ in 0..k {
            out = out.pow(self.p as u64);
        }
        out
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = Fq::unify(*self, *other);
        a.c == b.c
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "{}Z", self.c[0])
        } else if self.m == 1 {
            write!(f, "{}@F{}", self.c[0], self.p)
        } else {
            write!(f, "{:?}@F{}^{}", self.coeffs(), self.p, self.m)
        }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for i in (0..self.m as usize).rev() {
            if self.c[i] == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", self.c[i])?,
                1 => write!(f, "{}t", self.c[i])?,
                _ => write!(f, "{}t^{}", self.c[i], i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        let (a, b) = Fq::unify(self, rhs);
        let mut c = [0i64; MAX_EXT_DEGREE];
        if a.p == 0 {
            c[0] = a.c[0].checked_add(b.c[0]).expect("integer overflow");
            return Fq { p: 0, m: 1, c };
        }
        for i in 0..a.m as usize {
            c[i] = (a.c[i] + b.c[i]) % a.p;
        }
        Fq { p: a.p, m: a.m, c }
    }
}

impl Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        let mut c = [0i64; MAX_EXT_DEGREE];
        if self.p == 0 {
            c[0] = -self.c[0];
            return Fq { p: 0, m: 1, c };
        }
        for i in 0..self.m as usize {
            c[i] = (self.p - self.c[i]) % self.p;
        }
        Fq { p: self.p, m: self.m, c }
    }
}

impl Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        self + (-rhs)
    }
}

impl Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        let (a, b) = Fq::unify(self, rhs);
        let mut c = [0i64; MAX_EXT_DEGREE];
        if a.p == 0 {
            c[0] = a.c[0].checked_mul(b.c[0]).expect("integer overflow");
            return Fq { p: 0, m: 1, c };
        }
        if a.m == 1 {
            c[0] = mul_mod_i64(a.c[0], b.c[0], a.p);
            return Fq { p: a.p, m: 1, c };
        }
        let m = a.m as usize;
        let mut prod = [0i64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + a.c[i] * b.c[j]) % a.p;
            }
        }
        // Reduce modulo the monic irreducible defining the field.
        let irr = irreducible_poly(a.p, a.m);
        for d in (m..2 * m - 1).rev() {
            let coeff = prod[d];
            if coeff == 0 {
                continue;
            }
            prod[d] = 0;
            for i in 0..m {
                // x^d = x^(d-m) * (x^m) = x^(d-m) * (-lower part of irr)
                prod[d - m + i] = (prod[d - m + i] - coeff * irr[i]).rem_euclid(a.p);
            }
        }
        c[..m].copy_from_slice(&prod[..m]);
        Fq { p: a.p, m: a.m, c }
    }
}

impl Zero for Fq {
    fn zero() -> Self {
        Fq { p: 0, m: 1, c: [0; MAX_EXT_DEGREE] }
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }
}

impl One for Fq {
    fn one() -> Self {
        let mut c = [0i64; MAX_EXT_DEGREE];
        c[0] = 1;
        Fq { p: 0, m: 1, c }
    }
}

impl Scalar for Fq {
    fn from_int(n: i64) -> Self {
        let mut c = [0i64; MAX_EXT_DEGREE];
        c[0] = n;
        Fq { p: 0, m: 1, c }
    }
}

impl Field for Fq {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.p == 0 {
            // An unattached integer is invertible only at +-1.
            return match self.c[0] {
                1 | -1 => Some(*self),
                _ => None,
            };
        }
        if self.m == 1 {
            let inv = mod_inverse(self.c[0], self.p)?;
            let mut c = [0i64; MAX_EXT_DEGREE];
            c[0] = inv;
            return Some(Fq { p: self.p, m: 1, c });
        }
        // q - 2 exponent; p < 2^15 and m <= 4 keep q inside u64.
        let q = (self.p as u64).pow(self.m as u32);
        Some(self.pow(q - 2))
    }
}

// ---------------------------------------------------------------------------
// Integer arithmetic helpers
// ---------------------------------------------------------------------------

fn mul_mod_i64(a: i64, b: i64, p: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(p as i128)) as i64
}

/// Inverse of `a` modulo prime `p` via the extended Euclidean algorithm.
pub fn mod_inverse(a: i64, p: i64) -> Option<i64> {
    let a = a.rem_euclid(p);
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p))
}

fn pow_mod_u64(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * a as u128) % n as u128) as u64;
        }
        a = ((a as u128 * a as u128) % n as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin primality test for `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The set of prime divisors of `n`.
pub fn prime_divisors(mut n: u64) -> std::collections::BTreeSet<u64> {
    let mut out = std::collections::BTreeSet::new();
    if n < 2 {
        return out;
    }
    for d in [2u64, 3, 5] {
        while n % d == 0 {
            out.insert(d);
            n /= d;
        }
    }
    let mut d = 7u64;
    while n > 1 {
        if is_prime(n) {
            out.insert(n);
            break;
        }
        while n % d != 0 {
            d += 2;
        }
        while n % d == 0 {
            out.insert(d);
            n /= d;
        }
    }
    out
}

/// Prime divisors of a big integer (used on denominators, which stay small).
pub fn prime_divisors_big(n: &BigInt) -> std::collections::BTreeSet<u64> {
    let n = n.abs();
    let as_u64 = u64::try_from(&n).expect("denominator exceeds u64");
    prime_divisors(as_u64)
}

// ---------------------------------------------------------------------------
// Irreducible polynomials for extension fields
// ---------------------------------------------------------------------------

/// Lower coefficients of the canonical monic irreducible of degree `m` over
/// `F_p`: the polynomial is `x^m + sum irr[i] x^i`.  "Canonical" means the
/// one of smallest value `sum irr[i] p^i`, which makes every run of the
/// library agree on the field presentation.
fn irreducible_poly(p: i64, m: u8) -> [i64; MAX_EXT_DEGREE] {
    static CACHE: OnceLock<Mutex<HashMap<(i64, u8), [i64; MAX_EXT_DEGREE]>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&(p, m)) {
        return *hit;
    }
    let md = m as usize;
    let total = (p as u64).pow(m as u32);
    let mut found = None;
    for v in 0..total {
        let mut lower = [0i64; MAX_EXT_DEGREE];
        let mut rest = v;
        for slot in lower.iter_mut().take(md) {
            *slot = (rest % p as u64) as i64;
            rest /= p as u64;
        }
        let mut poly = vec![0i64; md + 1];
        poly[..md].copy_from_slice(&lower[..md]);
        poly[md] = 1;
        if poly_is_irreducible(&poly, p) {
            found = Some(lower);
            break;
        }
    }
    let lower = found.expect("no irreducible polynomial found");
    cache.lock().unwrap().insert((p, m), lower);
    lower
}

// Dense polynomials over F_p, lowest coefficient first, trimmed.

fn poly_trim(a: &mut Vec<i64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut r: Vec<i64> = a.to_vec();
    poly_trim(&mut r);
    let mut b = b.to_vec();
    poly_trim(&mut b);
    assert!(!b.is_empty());
    let lead_inv = mod_inverse(*b.last().unwrap(), p).expect("noninvertible leading coefficient");
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = mul_mod_i64(*r.last().unwrap(), lead_inv, p);
        for i in 0..b.len() {
            r[shift + i] = (r[shift + i] - mul_mod_i64(factor, b[i], p)).rem_euclid(p);
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn poly_mul_mod(a: &[i64], b: &[i64], f: &[i64], p: i64) -> Vec<i64> {
    let mut prod = vec![0i64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj).rem_euclid(p);
        }
    }
    poly_rem(&prod, f, p)
}

fn poly_gcd(a: &[i64], b: &[i64], p: i64) -> Vec<i64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    poly_trim(&mut x);
    poly_trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `g(x)^p mod f` by binary powering.
fn poly_pow_p(g: &[i64], f: &[i64], p: i64) -> Vec<i64> {
    let mut acc = vec![1i64];
    let mut base = g.to_vec();
    let mut e = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(&acc, &base, f, p);
        }
        base = poly_mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility test for a monic polynomial over `F_p`.
fn poly_is_irreducible(f: &[i64], p: i64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    let x = vec![0i64, 1];
    // x^(p^k) mod f for k = 1..m, by iterated p-th powers.
    let mut frob = x.clone();
    let mut frob_at = Vec::with_capacity(m);
    for _ in 0..m {
        frob = poly_pow_p(&frob, f, p);
        frob_at.push(frob.clone());
    }
    // x^(p^m) must equal x mod f.
    let mut end = frob_at[m - 1].clone();
    if end.len() < 2 {
        end.resize(2, 0);
    }
    end[1] = (end[1] - 1).rem_euclid(p);
    poly_trim(&mut end);
    if !end.is_empty() {
        return false;
    }
    // gcd(x^(p^(m/r)) - x, f) must be 1 for every prime r | m.
    let mut primes = Vec::new();
    let mut rest = m;
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            primes.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    for r in primes {
        let k = m / r;
        let mut g = frob_at[k - 1].clone();
        if g.len() < 2 {
            g.resize(2, 0);
        }
        g[1] = (g[1] - 1).rem_euclid(p);
        poly_trim(&mut g);
        if g.is_empty() {
            return false; // x^(p^k) = x already: f divides a smaller field's vanishing polynomial
        }
        let gcd = poly_gcd(&g, f, p);
        if gcd.len() > 1 {
            return false;
        }
    }
    true
}
