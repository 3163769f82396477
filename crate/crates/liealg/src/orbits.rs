//! Nilpotent orbit catalogue via Levi/distinguished-parabolic pairs.
//!
//! The catalogue sweeps all subsets `J` of the simple roots, pairs each Levi
//! subsystem with its distinguished parabolics, places the Levi's grading
//! cocharacter into the ambient coroot lattice, and takes the dominant Weyl
//! representative.  Records are deduplicated by their dominant weighted
//! diagram, which classifies the orbits.

use std::collections::{BTreeMap, BTreeSet};

use crate::chevalley::ChevalleyAlgebra;
use crate::error::{LieError, Result};
use crate::parabolic::{associated_cocharacter, enumerate_distinguished, grading, ParabolicGrading};
use crate::rootdata::{dominant_representative, CoweightVector, RootSystem};
use crate::scalar::{is_prime, Rat};
use crate::sl2::{richardson_candidate, solve_triple, Sl2Triple};

/// One nilpotent orbit: the Levi/parabolic pair that produced it, its
/// dominant weighted diagram, and per-prime order bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord {
    /// Subset of ambient simple roots spanning the Levi.
    pub levi_subset: Vec<usize>,
    /// Classification label of the Levi subsystem ("0" for the empty Levi).
    pub levi_type: String,
    /// Distinguished subset, indexed by the Levi's own simple roots
    /// (position `k` refers to ambient simple root `levi_subset[k]`).
    pub dist_parabolic: Vec<usize>,
    /// Dominant pairings of the cocharacter with the ambient simple roots.
    pub weighted_diagram: Vec<i64>,
    /// Maximum pairing of the dominant cocharacter with any root.
    pub grading_height: i64,
    /// For each good prime `p` up to the default bound: whether the grading
    /// height is below `2p`.
    pub order_p_good_primes: BTreeMap<u64, bool>,
    /// `dim g - dim g(0) - dim g(1)` for the dominant cocharacter grading.
    pub orbit_dim: usize,
}

/// Good primes up to 13, the default set recorded on catalogue entries.
pub fn default_flag_primes(rs: &RootSystem) -> Vec<u64> {
    [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|&p| rs.is_good_prime(p))
        .collect()
}

/// Number of partitions of `n` — the orbit count of the rank-(n-1) special
/// linear algebra, used as an independent check on the catalogue.
pub fn type_a_partition_oracle(n: usize) -> usize {
    // dp[k][m] = partitions of m into parts of size <= k.
    let mut dp = vec![vec![0usize; n + 1]; n + 1];
    for row in dp.iter_mut() {
        row[0] = 1;
    }
    for k in 1..=n {
        for m in 1..=n {
            dp[k][m] = dp[k - 1][m] + if m >= k { dp[k][m - k] } else { 0 };
        }
    }
    dp[n][n]
}

/// Dominant integer labels of a cocharacter at the simple roots.  The input
/// must lie in the coroot lattice (the Weyl sweep preserves that lattice, so
/// dominance can be reached without leaving it).
pub fn weighted_diagram(rs: &RootSystem, tau: &CoweightVector) -> Result<Vec<i64>> {
    if !tau.is_integral_on_coroot_lattice(rs) {
        return Err(LieError::NotIntegral);
    }
    let (dom, _) = dominant_representative(rs, tau);
    Ok(dom
        .coords
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            i64::try_from(&c.to_integer()).unwrap()
        })
        .collect())
}

/// Per-prime order flags for a record: true iff the record's grading height
/// is below `2p`.  Bad primes are refused.
pub fn order_p_flags(
    rs: &RootSystem,
    rec: &OrbitRecord,
    primes: &[u64],
) -> Result<BTreeMap<u64, bool>> {
    let mut out = BTreeMap::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(LieError::NotPrime(p));
        }
        if !rs.is_good_prime(p) {
            return Err(LieError::BadPrime {
                p,
                label: rs.label().to_string(),
            });
        }
        out.insert(p, rec.grading_height < 2 * p as i64);
    }
    Ok(out)
}

/// Places a cocharacter of the Levi on `j_subset` (given by its coordinates
/// in the Levi's simple-coroot basis) into the ambient coweight space.
fn place_in_ambient(rs: &RootSystem, j_subset: &[usize], m_levi: &[Rat]) -> CoweightVector {
    let rank = rs.rank();
    let mut coords = vec![Rat::from_integer(0.into()); rank];
    for (k, m_k) in m_levi.iter().enumerate() {
        let amb = j_subset[k];
        for (j, c) in coords.iter_mut().enumerate() {
            // <alpha_j, alpha_amb^vee> = cartan[amb][j]
            *c += m_k.clone() * Rat::from_integer(rs.cartan()[amb][j].into());
        }
    }
    CoweightVector::new(coords)
}

fn subsets_by_size_lex(rank: usize) -> Vec<Vec<usize>> {
    let mut subs: Vec<Vec<usize>> = (0u32..(1 << rank))
        .map(|mask| (0..rank).filter(|i| (mask >> i) & 1 == 1).collect())
        .collect();
    subs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    subs
}

fn record_for_tau(
    rs: &RootSystem,
    levi_subset: Vec<usize>,
    levi_type: String,
    dist_parabolic: Vec<usize>,
    tau_ambient: &CoweightVector,
) -> OrbitRecord {
    let diagram = weighted_diagram(rs, tau_ambient).expect("catalogue cocharacters are integral");
    let dom = CoweightVector::from_ints(&diagram);
    let mut height = 0i64;
    let mut dim0 = rs.rank();
    let mut dim1 = 0usize;
    for idx in 0..rs.num_roots() {
        let v = dom.pairing(rs.root(idx));
        assert!(v.is_integer());
        let v = i64::try_from(&v.to_integer()).unwrap();
        height = height.max(v);
        if v == 0 {
            dim0 += 1;
        } else if v == 1 {
            dim1 += 1;
        }
    }
    let orbit_dim = rs.dim() - dim0 - dim1;
    let mut rec = OrbitRecord {
        levi_subset,
        levi_type,
        dist_parabolic,
        weighted_diagram: diagram,
        grading_height: height,
        order_p_good_primes: BTreeMap::new(),
        orbit_dim,
    };
    rec.order_p_good_primes = order_p_flags(rs, &rec, &default_flag_primes(rs))
        .expect("default primes are good");
    rec
}

fn catalogue_with_order(alg: &ChevalleyAlgebra, reversed: bool) -> Vec<OrbitRecord> {
    let rs = alg.root_system();
    let mut records: Vec<OrbitRecord> = Vec::new();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();

    // The zero orbit: empty Levi, all-zero diagram.
    let zero = record_for_tau(
        rs,
        Vec::new(),
        "0".to_string(),
        Vec::new(),
        &CoweightVector::zero(rs.rank()),
    );
    seen.insert(zero.weighted_diagram.clone());
    records.push(zero);

    let mut subsets = subsets_by_size_lex(rs.rank());
    subsets.retain(|j| !j.is_empty());
    if reversed {
        subsets.reverse();
    }
    for j_subset in subsets {
        let levi = rs.levi_subsystem(&j_subset).expect("valid subset");
        let sub_rs = levi.system.expect("nonempty Levi");
        let sub_alg = ChevalleyAlgebra::new(sub_rs);
        for i_subset in enumerate_distinguished(&sub_alg) {
            let g = grading(&sub_alg, &i_subset).expect("valid subset");
            let tau_levi = associated_cocharacter(&sub_alg, &g).expect("distinguished");
            let m_levi = tau_levi
                .coroot_coords(sub_alg.root_system())
                .expect("cocharacter has coroot coordinates");
            assert!(m_levi.iter().all(Rat::is_integer));
            let tau_ambient = place_in_ambient(rs, &j_subset, &m_levi);
            let rec = record_for_tau(
                rs,
                j_subset.clone(),
                levi.label.clone(),
                i_subset,
                &tau_ambient,
            );
            if seen.insert(rec.weighted_diagram.clone()) {
                records.push(rec);
            }
        }
    }
    records.sort_by(|a, b| {
        a.weighted_diagram
            .cmp(&b.weighted_diagram)
            .then_with(|| a.levi_type.cmp(&b.levi_type))
    });
    records
}

/// The full orbit catalogue: one record per dominant weighted diagram found
/// in the sweep over (Levi, distinguished parabolic) pairs, plus the zero
/// orbit, sorted by (diagram, Levi type).
pub fn bala_carter_catalogue(alg: &ChevalleyAlgebra) -> Vec<OrbitRecord> {
    catalogue_with_order(alg, false)
}

/// Rebuilds the sl2-triple behind a (Levi, distinguished parabolic) pair:
/// the Levi's Chevalley algebra, the parabolic grading inside it, and the
/// triple for a deterministically chosen Richardson element.  The empty Levi
/// (zero orbit) carries no triple.
pub fn levi_triple(
    rs: &RootSystem,
    levi_subset: &[usize],
    dist_parabolic: &[usize],
) -> Result<(ChevalleyAlgebra, ParabolicGrading, Sl2Triple)> {
    let levi = rs.levi_subsystem(levi_subset)?;
    let Some(sub_rs) = levi.system else {
        return Err(LieError::Unsupported(
            "the zero orbit has no attached triple".to_string(),
        ));
    };
    let sub_alg = ChevalleyAlgebra::new(sub_rs);
    let g = grading(&sub_alg, dist_parabolic)?;
    let x = richardson_candidate(&sub_alg, &g, None)?;
    let t = solve_triple(&sub_alg, &g, &x)?;
    Ok((sub_alg, g, t))
}

/// Serializes a record with stable field names.
pub fn record_to_json(rec: &OrbitRecord) -> serde_json::Value {
    serde_json::json!({
        "levi_subset": rec.levi_subset,
        "levi_type": rec.levi_type,
        "dist_parabolic": rec.dist_parabolic,
        "weighted_diagram": rec.weighted_diagram,
        "grading_height": rec.grading_height,
        "order_p_good_primes": rec.order_p_good_primes
            .iter()
            .map(|(p, b)| (p.to_string(), *b))
            .collect::<BTreeMap<String, bool>>(),
        "orbit_dim": rec.orbit_dim,
    })
}
