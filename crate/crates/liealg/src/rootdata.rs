//! Root systems for the simple types A-G and their products.
//!
//! Roots live in simple-root integer coordinates throughout; pairings go
//! through the Cartan matrix, so no Euclidean embedding is ever constructed.
//! The Cartan convention is `A[i][j] = <alpha_j, alpha_i^v>`, i.e. row `i`
//! pairs every simple root against the `i`-th simple coroot.
//!
//! Positive roots carry a total order by (height, lexicographic coordinates).
//! This order is part of the structure-constant sign contract of the bracket
//! tables built on top of it, so it must never change.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{LieError, Result};
use crate::matrix::{clear_denominators, Mat};
use crate::scalar::{rat, Rat};

/// One simple factor of a (semi)simple type, e.g. `D4`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct SimpleType {
    pub series: char,
    pub rank: usize,
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

impl SimpleType {
    /// Ranks accepted per series; the lower bounds avoid duplicate
    /// presentations of the same isomorphism type (B1=A1, C2=B2, D3=A3, ...).
    pub fn admissible(&self) -> bool {
        match self.series {
            'A' => self.rank >= 1,
            'B' => self.rank >= 2,
            'C' => self.rank >= 3,
            'D' => self.rank >= 4,
            'E' => (6..=8).contains(&self.rank),
            'F' => self.rank == 4,
            'G' => self.rank == 2,
            _ => false,
        }
    }

    /// Cartan matrix in the standard (Bourbaki) numbering.
    fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut chain = |edges: &[(usize, usize)]| {
            for &(i, j) in edges {
                a[i][j] = -1;
                a[j][i] = -1;
            }
        };
        match self.series {
            'A' => chain(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()),
            'B' => {
                chain(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>());
                // Last simple root is short: it pairs to -2 against the
                // neighboring long coroot... precisely, row n-1 holds the -2.
                a[n - 1][n - 2] = -2;
            }
            'C' => {
                chain(&(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>());
                // Last simple root is long.
                a[n - 2][n - 1] = -2;
            }
            'D' => {
                chain(&(0..n - 2).map(|i| (i, i + 1)).collect::<Vec<_>>());
                chain(&[(n - 3, n - 1)]);
            }
            'E' => {
                // Bourbaki: node 2 hangs off node 4 of the chain 1-3-4-5-...
                let mut edges = vec![(0, 2), (1, 3), (2, 3)];
                for i in 3..n - 1 {
                    edges.push((i, i + 1));
                }
                chain(&edges);
            }
            'F' => {
                chain(&[(0, 1), (1, 2), (2, 3)]);
                a[2][1] = -2; // roots 3,4 short, roots 1,2 long
            }
            'G' => {
                a[0][1] = -3; // root 1 short, root 2 long
                a[1][0] = -1;
            }
            _ => unreachable!("validated before"),
        }
        a
    }

    /// Bad primes of the factor; everything else is good.
    pub fn bad_primes(&self) -> BTreeSet<u64> {
        match self.series {
            'A' => BTreeSet::new(),
            'B' | 'C' | 'D' => BTreeSet::from([2]),
            'G' | 'F' => BTreeSet::from([2, 3]),
            'E' => {
                if self.rank == 8 {
                    BTreeSet::from([2, 3, 5])
                } else {
                    BTreeSet::from([2, 3])
                }
            }
            _ => unreachable!(),
        }
    }
}

/// Parse a type label like `"A3"`, `"F4"`, or `"A2xA1"` (case-insensitive).
pub fn parse_type_label(label: &str) -> Result<Vec<SimpleType>> {
    let mut factors = Vec::new();
    for part in label.split(['x', 'X']) {
        let part = part.trim();
        let mut chars = part.chars();
        let series = chars
            .next()
            .ok_or_else(|| LieError::BadTypeLabel(label.to_string()))?
            .to_ascii_uppercase();
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| LieError::BadTypeLabel(label.to_string()))?;
        let t = SimpleType { series, rank };
        if !t.admissible() {
            return Err(LieError::BadTypeLabel(label.to_string()));
        }
        factors.push(t);
    }
    if factors.is_empty() {
        return Err(LieError::BadTypeLabel(label.to_string()));
    }
    Ok(factors)
}

/// Canonical display form of a factor list, in the given order.
pub fn format_type_label(factors: &[SimpleType]) -> String {
    factors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

/// A reduced crystallographic root system with a fixed total order on the
/// positive roots.
///
/// Roots are indexed `0..2N`: indices `0..N` are the positive roots in
/// (height, lex) order, and index `N + k` is the negative of root `k`.
#[derive(Clone)]
pub struct RootSystem {
    label: String,
    factors: Vec<SimpleType>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    /// Symmetrizers: `d[i] = (alpha_i, alpha_i)/2`, short roots normalized to
    /// `d = 1` within each component.
    d: Vec<i64>,
    /// Component index of each simple root.
    component: Vec<usize>,
    roots: Vec<Vec<i64>>,
    n_pos: usize,
    index: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    /// Build from a type label string such as `"B3"` or `"A2xA1"`.
    pub fn new(label: &str) -> Result<RootSystem> {
        let factors = parse_type_label(label)?;
        Self::from_factors(factors)
    }

    /// Build from an explicit factor list, in order.
    pub fn from_factors(factors: Vec<SimpleType>) -> Result<RootSystem> {
        for t in &factors {
            if !t.admissible() {
                return Err(LieError::BadTypeLabel(t.to_string()));
            }
        }
        let rank: usize = factors.iter().map(|t| t.rank).sum();
        let mut cartan = vec![vec![0i64; rank]; rank];
        let mut offset = 0;
        for t in &factors {
            let block = t.cartan();
            for i in 0..t.rank {
                for j in 0..t.rank {
                    cartan[offset + i][offset + j] = block[i][j];
                }
            }
            offset += t.rank;
        }
        let label = format_type_label(&factors);
        Self::from_cartan(cartan, factors, label)
    }

    /// Build from an arbitrary valid Cartan matrix (used for Levi
    /// subsystems, whose node order follows the ambient system).
    pub fn from_cartan(
        cartan: Vec<Vec<i64>>,
        factors: Vec<SimpleType>,
        label: String,
    ) -> Result<RootSystem> {
        let rank = cartan.len();
        let component = components_of(&cartan);
        let d = symmetrizers(&cartan, &component);

        // Positive roots by closure: a candidate beta + alpha_i is a root
        // exactly when the alpha_i-string through beta continues upward,
        // i.e. (steps down) - <beta, alpha_i^v> >= 1.
        let mut known: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut frontier: Vec<Vec<i64>> = Vec::new();
        for i in 0..rank {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            known.insert(e.clone());
            frontier.push(e);
        }
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..rank {
                    let c: i64 = (0..rank).map(|j| cartan[i][j] * beta[j]).sum();
                    let mut p = 0i64;
                    loop {
                        let mut down = beta.clone();
                        down[i] -= p + 1;
                        if down[i] < 0 || !known.contains(&down) {
                            break;
                        }
                        p += 1;
                    }
                    if p - c >= 1 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if known.insert(up.clone()) {
                            next.push(up);
                        }
                    }
                }
            }
            frontier = next;
        }

        let mut pos: Vec<Vec<i64>> = known.into_iter().collect();
        pos.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let n_pos = pos.len();
        let mut roots = pos;
        for k in 0..n_pos {
            let neg: Vec<i64> = roots[k].iter().map(|&c| -c).collect();
            roots.push(neg);
        }
        let index: HashMap<Vec<i64>, usize> =
            roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
        Ok(RootSystem { label, factors, rank, cartan, d, component, roots, n_pos, index })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &Vec<Vec<i64>> {
        &self.cartan
    }

    pub fn cartan_det(&self) -> i64 {
        let m = Mat::from_fn(self.rank, self.rank, |i, j| {
            num_bigint::BigInt::from(self.cartan[i][j])
        });
        i64::try_from(&m.int_det()).expect("Cartan determinant fits i64")
    }

    pub fn num_pos(&self) -> usize {
        self.n_pos
    }

    pub fn num_roots(&self) -> usize {
        2 * self.n_pos
    }

    /// Dimension of the Lie algebra this system generates.
    pub fn dim(&self) -> usize {
        self.rank + self.num_roots()
    }

    pub fn root(&self, idx: usize) -> &[i64] {
        &self.roots[idx]
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        idx < self.n_pos
    }

    /// Index of the negated root.
    pub fn negate(&self, idx: usize) -> usize {
        if idx < self.n_pos {
            idx + self.n_pos
        } else {
            idx - self.n_pos
        }
    }

    pub fn height(&self, idx: usize) -> i64 {
        self.roots[idx].iter().sum()
    }

    /// Index of the simple root `alpha_i`.
    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut e = vec![0i64; self.rank];
        e[i] = 1;
        self.index[&e]
    }

    /// `<beta, alpha_i^v>` for the root with index `idx`.
    pub fn pairing_with_simple_coroot(&self, idx: usize, i: usize) -> i64 {
        (0..self.rank).map(|j| self.cartan[i][j] * self.roots[idx][j]).sum()
    }

    /// Squared length of a root, with short roots normalized to 2 inside
    /// each component.
    pub fn norm2(&self, idx: usize) -> i64 {
        let beta = &self.roots[idx];
        let mut acc = 0i64;
        for i in 0..self.rank {
            if beta[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                acc += beta[i] * beta[j] * self.d[i] * self.cartan[i][j];
            }
        }
        acc
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.d
    }

    pub fn component_of_simple(&self, i: usize) -> usize {
        self.component[i]
    }

    /// Coordinates of the coroot `beta^v` in the basis of simple coroots.
    /// These are integers for every root of a crystallographic system.
    pub fn coroot_coords(&self, idx: usize) -> Vec<i64> {
        let beta = &self.roots[idx];
        let d_beta = self.norm2(idx);
        (0..self.rank)
            .map(|i| {
                let num = beta[i] * 2 * self.d[i];
                assert!(num % d_beta == 0, "coroot coordinates must be integral");
                num / d_beta
            })
            .collect()
    }

    /// Simple reflection `s_i` applied to a root, returning the image index.
    pub fn reflect_root(&self, idx: usize, i: usize) -> usize {
        let c = self.pairing_with_simple_coroot(idx, i);
        let mut image = self.roots[idx].clone();
        image[i] -= c;
        self.index[&image]
    }

    /// Number of downward steps in the `alpha`-string through `beta`:
    /// the largest `k >= 0` with `beta - k*alpha` a root.
    pub fn string_down(&self, beta: usize, alpha: usize) -> i64 {
        let a = &self.roots[alpha];
        let mut k = 0i64;
        let mut cur = self.roots[beta].clone();
        loop {
            for (c, ai) in cur.iter_mut().zip(a) {
                *c -= ai;
            }
            if cur.iter().all(|&x| x == 0) || !self.index.contains_key(&cur) {
                return k;
            }
            k += 1;
        }
    }

    /// Union of the factors' bad primes; a prime is good iff not listed.
    pub fn bad_primes(&self) -> BTreeSet<u64> {
        self.factors.iter().flat_map(SimpleType::bad_primes).collect()
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        !self.bad_primes().contains(&p)
    }

    /// The sub-root-system supported on the simple-root subset `J`, as a
    /// standalone root system (node order following `J` sorted ascending),
    /// classified by its induced Cartan matrix.
    pub fn levi_subsystem(&self, j_subset: &[usize]) -> Result<LeviSubsystem> {
        let mut j: Vec<usize> = j_subset.to_vec();
        j.sort_unstable();
        j.dedup();
        if j.iter().any(|&i| i >= self.rank) {
            return Err(LieError::DimensionMismatch(format!(
                "simple-root index out of range for rank {}",
                self.rank
            )));
        }
        let sub: Vec<Vec<i64>> = j
            .iter()
            .map(|&a| j.iter().map(|&b| self.cartan[a][b]).collect())
            .collect();
        let factors = classify_cartan(&sub);
        let label = if factors.is_empty() {
            "0".to_string()
        } else {
            format_type_label(&factors)
        };
        let system = if j.is_empty() {
            None
        } else {
            Some(RootSystem::from_cartan(sub, factors.clone(), label.clone())?)
        };
        Ok(LeviSubsystem { ambient_simples: j, factors, label, system })
    }
}

/// A Levi subsystem: the simple subset in ambient numbering, its
/// classification, and (when nonempty) a standalone root system whose `k`-th
/// simple root is the ambient simple root `ambient_simples[k]`.
pub struct LeviSubsystem {
    pub ambient_simples: Vec<usize>,
    pub factors: Vec<SimpleType>,
    pub label: String,
    pub system: Option<RootSystem>,
}

/// Connected components of the Dynkin graph of a Cartan matrix.
fn components_of(cartan: &[Vec<i64>]) -> Vec<usize> {
    let n = cartan.len();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if w != v && cartan[v][w] != 0 && comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Symmetrizers `d_i` with the short roots of each component at `d = 1`,
/// satisfying `d_i * A[i][j] = d_j * A[j][i]`.
fn symmetrizers(cartan: &[Vec<i64>], component: &[usize]) -> Vec<i64> {
    let n = cartan.len();
    let mut d = vec![0i64; n];
    for start in 0..n {
        if d[start] != 0 {
            continue;
        }
        // Propagate relative norms along edges of this component.
        let mut num = vec![Rat::zero(); n];
        num[start] = Rat::one();
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if w == v || cartan[v][w] == 0 || !num[w].is_zero() {
                    continue;
                }
                // d_w / d_v = A[v][w] / A[w][v]
                num[w] = num[v].clone() * rat(cartan[v][w]) / rat(cartan[w][v]);
                stack.push(w);
            }
        }
        let members: Vec<usize> = (0..n).filter(|&i| component[i] == component[start]).collect();
        let min = members.iter().map(|&i| num[i].clone()).min().unwrap();
        for &i in &members {
            let scaled = num[i].clone() / min.clone();
            assert!(scaled.is_integer(), "symmetrizer must be integral");
            d[i] = i64::try_from(&scaled.to_integer()).unwrap();
        }
    }
    d
}

/// Classify a valid Cartan matrix into simple factors by Dynkin-diagram
/// shape, returned in canonical order (descending rank, then series letter).
pub fn classify_cartan(cartan: &[Vec<i64>]) -> Vec<SimpleType> {
    let n = cartan.len();
    let component = components_of(cartan);
    let ncomp = component.iter().copied().max().map_or(0, |m| m + 1);
    let mut out = Vec::new();
    for c in 0..ncomp {
        let nodes: Vec<usize> = (0..n).filter(|&i| component[i] == c).collect();
        out.push(classify_component(cartan, &nodes));
    }
    out.sort_by(|a, b| b.rank.cmp(&a.rank).then(a.series.cmp(&b.series)));
    out
}

fn classify_component(cartan: &[Vec<i64>], nodes: &[usize]) -> SimpleType {
    let n = nodes.len();
    if n == 1 {
        return SimpleType { series: 'A', rank: 1 };
    }
    let edge = |a: usize, b: usize| cartan[nodes[a]][nodes[b]] * cartan[nodes[b]][nodes[a]];
    let degree = |a: usize| (0..n).filter(|&b| b != a && edge(a, b) != 0).count();
    let mut multis = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            match edge(a, b) {
                0 | 1 => {}
                m => multis.push((a, b, m)),
            }
        }
    }
    if let Some(&(a, b, m)) = multis.first() {
        assert!(multis.len() == 1, "unsupported diagram: several multiple edges");
        if m == 3 {
            return SimpleType { series: 'G', rank: 2 };
        }
        if n == 2 {
            return SimpleType { series: 'B', rank: 2 };
        }
        if degree(a) == 2 && degree(b) == 2 {
            assert!(n == 4, "interior double edge only occurs in F4");
            return SimpleType { series: 'F', rank: 4 };
        }
        // Double edge at a chain end; the endpoint's length decides B vs C.
        let end = if degree(a) == 1 { a } else { b };
        let other = if end == a { b } else { a };
        // A[end][other] = -2 means the endpoint root is the short one.
        let series = if cartan[nodes[end]][nodes[other]] == -2 { 'B' } else { 'C' };
        return SimpleType { series, rank: n };
    }
    // Simply laced: a path is A_n, a fork is D/E by branch lengths.
    let forks: Vec<usize> = (0..n).filter(|&a| degree(a) >= 3).collect();
    if forks.is_empty() {
        return SimpleType { series: 'A', rank: n };
    }
    assert!(forks.len() == 1 && degree(forks[0]) == 3, "unsupported branching");
    let fork = forks[0];
    let mut branch_lengths = Vec::new();
    for first in (0..n).filter(|&b| b != fork && edge(fork, b) != 0) {
        let mut len = 1;
        let mut prev = fork;
        let mut cur = first;
        while let Some(nxt) = (0..n).find(|&x| x != prev && x != cur && edge(cur, x) != 0) {
            prev = cur;
            cur = nxt;
            len += 1;
        }
        branch_lengths.push(len);
    }
    branch_lengths.sort_unstable();
    match branch_lengths.as_slice() {
        [1, 1, _] => SimpleType { series: 'D', rank: n },
        [1, 2, k @ 2..=4] => SimpleType { series: 'E', rank: k + 4 },
        other => panic!("unsupported branch profile {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// Coweights and dominance
// ---------------------------------------------------------------------------

/// An element of the coweight space, stored by its pairings with the simple
/// roots (equivalently: coordinates in the fundamental-coweight basis).
#[derive(Clone, PartialEq, Debug)]
pub struct CoweightVector {
    pub coords: Vec<Rat>,
}

impl CoweightVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        CoweightVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        CoweightVector { coords: coords.iter().map(|&c| rat(c)).collect() }
    }

    /// The fundamental coweight dual to the `i`-th simple root.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut coords = vec![Rat::zero(); rank];
        coords[i] = Rat::one();
        CoweightVector { coords }
    }

    pub fn zero(rank: usize) -> Self {
        CoweightVector { coords: vec![Rat::zero(); rank] }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.coords.len(), other.coords.len());
        CoweightVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    /// `<alpha, self>` for a root in simple-root coordinates.
    pub fn pairing(&self, alpha: &[i64]) -> Rat {
        assert_eq!(alpha.len(), self.coords.len(), "rank mismatch in pairing");
        let mut acc = Rat::zero();
        for (a, c) in alpha.iter().zip(&self.coords) {
            acc += rat(*a) * c.clone();
        }
        acc
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    /// Coordinates in the simple-coroot basis: the solution `m` of
    /// `A^T m = coords`.  `None` when the system is singular (never happens
    /// for a valid Cartan matrix).
    pub fn coroot_coords(&self, r: &RootSystem) -> Option<Vec<Rat>> {
        let n = r.rank();
        assert_eq!(self.coords.len(), n);
        let at = Mat::from_fn(n, n, |i, j| rat(r.cartan()[j][i]));
        let atz = clear_denominators(&at.map(Clone::clone));
        // Row scaling is trivial here (entries are integers already).
        let rhs_mat = Mat::from_fn(n, 1, |i, _| self.coords[i].clone());
        // Solve with exact rational elimination via the integer matrix and a
        // rational right-hand side: multiply through by the lcm of rhs
        // denominators.
        let mut lcm = num_bigint::BigInt::one();
        for c in &self.coords {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let rhs: Vec<num_bigint::BigInt> = (0..n)
            .map(|i| {
                let v = rhs_mat[(i, 0)].clone() * Rat::from_integer(lcm.clone());
                v.to_integer()
            })
            .collect();
        let sol = atz.int_solve_unique(&rhs).ok()?;
        Some(sol.into_iter().map(|x| x / Rat::from_integer(lcm.clone())).collect())
    }

    /// Whether the coweight lies in the lattice spanned by the simple
    /// coroots.
    pub fn is_integral_on_coroot_lattice(&self, r: &RootSystem) -> bool {
        self.coroot_coords(r)
            .map_or(false, |m| m.iter().all(Rat::is_integer))
    }

    /// Simple reflection `s_k` acting on the coweight, in place.
    fn reflect(&mut self, r: &RootSystem, k: usize) {
        // <alpha_i, s_k(h)> = <alpha_i, h> - <alpha_k, h> * A[k][i]
        let ck = self.coords[k].clone();
        for i in 0..self.coords.len() {
            self.coords[i] -= ck.clone() * rat(r.cartan()[k][i]);
        }
    }
}

/// The dominant Weyl-chamber representative of a coweight, plus a reflection
/// word: applying the listed simple reflections to the dominant vector, in
/// order, recovers the input.
pub fn dominant_representative(
    r: &RootSystem,
    v: &CoweightVector,
) -> (CoweightVector, Vec<usize>) {
    let mut cur = v.clone();
    let mut applied = Vec::new();
    loop {
        let Some(k) = cur.coords.iter().position(Signed::is_negative) else {
            break;
        };
        cur.reflect(r, k);
        applied.push(k);
    }
    applied.reverse();
    (cur, applied)
}

/// Apply a reflection word (leftmost entry applied first) to a coweight.
pub fn apply_word(r: &RootSystem, v: &CoweightVector, word: &[usize]) -> CoweightVector {
    let mut cur = v.clone();
    for &k in word {
        cur.reflect(r, k);
    }
    cur
}
