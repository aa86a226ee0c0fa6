//! The arithmetic Chern-Simons vanishing criterion for cyclic
//! coefficients, the exhaustive norm-image oracle, and the corpus
//! scanner with its JSON-lines cache.
//!
//! For v in K* with zeta_n in K and L = K(v^{1/n}) unramified
//! everywhere, the invariant attached to the character cutting out L
//! vanishes iff the class of the ideal a with n a = -div(v) lies in the
//! image of the norm map Cl L -> Cl K; equivalently iff
//! Art_{L|K}(a) = 0; equivalently iff <x cup bockstein(x), zeta> = 0.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::io::Write as IoWrite;
use std::path::PathBuf;

use crate::arith::big;
use crate::classunit::ClassGroup;
use crate::cohomology::{bockstein, cup_12_kummer, CohomologyCtx, H1Class};
use crate::error::{Error, Result};
use crate::ext::CyclicExtension;
use crate::ideal::FractionalIdeal;
use crate::nf::{FieldElement, NumberField};
use crate::parse::{format_element, format_int_poly};
use crate::poly::IntPoly;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Version tag entering the cache key; bump on any change that affects
/// scan output.
pub const SCAN_VERSION: &str = "1";

/// Outcome of one invariant computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KimResult {
    /// The contractual output: whether the invariant vanishes.
    pub vanishes: bool,
    /// True when the extension is trivial (v already an n-th power).
    pub trivial: bool,
    /// Degree d of L over K.
    pub d: u64,
    /// Art_{L|K}(a) in Z/d (up to the normalization of the invariant
    /// map; the vanishing bit is normalization-free).
    pub artin_value: u64,
    /// Cross-check <x cup bockstein(x), zeta> in Z/n.
    pub cup_value: BigInt,
}

/// The full pipeline: Kummer extension, Artin symbol of the n-th root
/// ideal of div(v)^{-1}, and the cup-product cross-check.
pub fn kim_invariant(ctx: &CohomologyCtx, v: &FieldElement, _seed: u64) -> Result<KimResult> {
    let n = ctx.n;
    if ctx.mu_order != n {
        return Err(Error::RootOfUnityMissing(n));
    }
    if !ctx.field.is_totally_imaginary() && n % 2 == 0 {
        return Err(Error::ScopeViolation);
    }
    if v.is_zero() {
        return Err(Error::ZeroElement);
    }
    let ext = CyclicExtension::build_kummer(&ctx.field, n, v)?;
    let d = ext.rel_degree;
    if d == 1 {
        return Ok(KimResult {
            vanishes: true,
            trivial: true,
            d,
            artin_value: 0,
            cup_value: BigInt::zero(),
        });
    }
    if !ext.is_unramified_everywhere() {
        return Err(Error::RamifiedExtension);
    }
    // a with n a = -div(v).
    let div_v = ctx.field.principal_ideal(v)?;
    let a_ideal = ctx
        .field
        .nth_root_ideal(&ctx.field.ideal_inverse(&div_v), n)
        .map_err(|_| Error::NotDivisibleByN)?;
    let artin_value = ext.artin_of_ideal(&a_ideal)?;
    let x = H1Class { ext };
    let beta = bockstein(ctx, &x)?;
    let cup = cup_12_kummer(ctx, &x, &beta)?;
    // The shortcut witness carries the opposite ideal orientation, so
    // the two values are negatives of each other in Z/n.
    let expected = (n - (n / d) * artin_value % n) % n;
    assert_eq!(
        cup.value,
        big(expected as i64),
        "cup cross-check disagrees with the Artin value"
    );
    let vanishes = artin_value == 0;
    assert_eq!(vanishes, cup.value.is_zero());
    Ok(KimResult {
        vanishes,
        trivial: false,
        d,
        artin_value,
        cup_value: cup.value,
    })
}

/// Exhaustive norm-image oracle: does the class of `target` lie in
/// N_{L|K}(Cl L)? Enumerates Cl L through discrete logs of the norms of
/// its generators (the norm map is a homomorphism).
pub fn norm_image_contains(
    ctx: &CohomologyCtx,
    ext: &CyclicExtension,
    cls_top: &ClassGroup,
    target: &FractionalIdeal,
) -> Result<bool> {
    let t = ctx.cls.dlog(&ctx.field, target)?;
    let invs = &ctx.cls.invariants;
    let reduce = |v: &[BigInt]| -> Vec<BigInt> {
        v.iter()
            .zip(invs.iter())
            .map(|(x, m)| x.mod_floor(m))
            .collect()
    };
    let t = reduce(&t);
    if cls_top.invariants.is_empty() {
        return Ok(t.iter().all(|x| x.is_zero()));
    }
    let order: BigInt = cls_top.invariants.iter().product();
    if order > big(100_000) {
        return Err(Error::BoundsExceeded(
            "top class group too large for exhaustive enumeration".into(),
        ));
    }
    // dlog of the norm of each Cl L generator.
    let mut gen_norm_dlogs = Vec::new();
    for g in &cls_top.generators {
        let ng = ext.relative_norm_ideal(g)?;
        gen_norm_dlogs.push(reduce(&ctx.cls.dlog(&ctx.field, &ng)?));
    }
    // Enumerate all exponent tuples.
    let radices: Vec<u64> = cls_top
        .invariants
        .iter()
        .map(|m| m.to_u64().expect("small order"))
        .collect();
    let mut exps = vec![0u64; radices.len()];
    loop {
        let mut acc = vec![BigInt::zero(); invs.len()];
        for (e, gnd) in exps.iter().zip(&gen_norm_dlogs) {
            for (a, x) in acc.iter_mut().zip(gnd) {
                *a += big(*e as i64) * x;
            }
        }
        if reduce(&acc) == t {
            return Ok(true);
        }
        // Increment the mixed-radix counter.
        let mut i = 0;
        loop {
            if i == exps.len() {
                return Ok(false);
            }
            exps[i] += 1;
            if exps[i] < radices[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Corpus scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ScanConfig {
    /// Inclusive discriminant range (negative values; e.g. -500..-3).
    pub disc_lo: i64,
    pub disc_hi: i64,
    pub n: u64,
    pub seed: u64,
    pub cache: Option<PathBuf>,
}

/// One JSON-lines record of the scan. Big integers are decimal strings.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ScanRecord {
    pub key: String,
    pub poly: String,
    pub disc: String,
    pub n: u64,
    pub v: String,
    pub seed: u64,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vanishes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artin_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cup_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn cache_key(poly: &str, n: u64, v: &str, seed: u64) -> String {
    let mut h = Sha256::new();
    h.update(format!("{poly}|{n}|{v}|{seed}|{SCAN_VERSION}"));
    hex::encode(h.finalize())
}

/// Fundamental discriminants of imaginary quadratic fields in the range.
pub fn fundamental_discs(lo: i64, hi: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let squarefree = |m: i64| -> bool {
        let mut m = m.abs();
        let mut p = 2i64;
        while p * p <= m {
            if m % (p * p) == 0 {
                return false;
            }
            while m % p == 0 {
                m /= p;
            }
            p += 1;
        }
        true
    };
    let mut t = 3i64;
    loop {
        let d = -t;
        if d < lo.min(hi) {
            break;
        }
        if d <= hi.max(lo) {
            let fundamental = if d.rem_euclid(4) == 1 {
                squarefree(d)
            } else if d % 4 == 0 {
                let m = d / 4;
                squarefree(m) && (m.rem_euclid(4) == 2 || m.rem_euclid(4) == 3)
            } else {
                false
            };
            if fundamental {
                out.push(d);
            }
        }
        t += 1;
    }
    out
}

/// Defining polynomial of the imaginary quadratic field of fundamental
/// discriminant d.
pub fn quadratic_poly(d: i64) -> IntPoly {
    if d.rem_euclid(4) == 1 {
        IntPoly::from_i64(&[(1 - d) / 4, -1, 1])
    } else {
        IntPoly::from_i64(&[-d / 4, 0, 1])
    }
}

/// Candidate radicands for a fundamental discriminant: signed divisors
/// of the discriminant built as products of nonempty sets of its prime
/// discriminants (p* = (-1)^((p-1)/2) p, and the 2-part -4 or +-8).
/// These are exactly the radicands whose square root can generate an
/// extension unramified at the finite places; the build step still
/// verifies admissibility exactly.
pub fn v_candidates(disc: i64) -> Vec<i64> {
    let mut prime_discs: Vec<i64> = Vec::new();
    let mut m = disc.abs();
    while m % 2 == 0 {
        m /= 2;
    }
    let mut p = 3i64;
    let mut odd_part = 1i64;
    while p <= m {
        if m % p == 0 {
            let ps = if p % 4 == 1 { p } else { -p };
            prime_discs.push(ps);
            odd_part *= ps;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 2;
    }
    let two_part = disc / odd_part;
    debug_assert!(matches!(two_part, 1 | -4 | 8 | -8));
    if two_part != 1 {
        prime_discs.push(two_part);
    }
    let mut out = Vec::new();
    for mask in 1..(1u32 << prime_discs.len()) {
        let mut v = 1i64;
        for (i, d) in prime_discs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                v *= d;
            }
        }
        out.push(v);
    }
    out.sort_unstable_by_key(|v| (v.abs(), *v < 0));
    out.dedup();
    out
}

fn run_job(poly: &IntPoly, disc: &BigInt, n: u64, v_int: i64, seed: u64) -> Option<ScanRecord> {
    let poly_s = format_int_poly(poly);
    let base = ScanRecord {
        key: String::new(),
        poly: poly_s.clone(),
        disc: disc.to_string(),
        n,
        v: String::new(),
        seed,
        status: "error".into(),
        trivial: None,
        vanishes: None,
        d: None,
        artin_value: None,
        cup_value: None,
        error: None,
    };
    let ctx = match CohomologyCtx::new(
        match NumberField::make(poly.clone()) {
            Ok(k) => k,
            Err(e) => {
                let mut r = base;
                r.v = v_int.to_string();
                r.key = cache_key(&poly_s, n, &r.v, seed);
                r.error = Some(e.to_string());
                return Some(r);
            }
        },
        n,
        seed,
    ) {
        Ok(c) => c,
        Err(e) => {
            let mut r = base;
            r.v = v_int.to_string();
            r.key = cache_key(&poly_s, n, &r.v, seed);
            r.error = Some(e.to_string());
            return Some(r);
        }
    };
    let v = ctx.field.from_i64(v_int);
    let v_s = format_element(&ctx.field, &v);
    let mut rec = base;
    rec.v = v_s.clone();
    rec.key = cache_key(&poly_s, n, &v_s, seed);
    match kim_invariant(&ctx, &v, seed) {
        Ok(res) => {
            rec.status = "ok".into();
            rec.trivial = Some(res.trivial);
            rec.vanishes = Some(res.vanishes);
            rec.d = Some(res.d);
            rec.artin_value = Some(res.artin_value.to_string());
            rec.cup_value = Some(res.cup_value.to_string());
            Some(rec)
        }
        // Ramified candidates fail the admissibility filter and are
        // dropped from the stream; other failures are recorded.
        Err(Error::RamifiedExtension) => None,
        Err(e) => {
            rec.error = Some(e.to_string());
            Some(rec)
        }
    }
}

/// Run the scan: one record per admissible job, deterministic order
/// (|disc| ascending, then |v| ascending with positive sign first).
/// Cached records are reused; new records are appended to the cache.
pub fn scan(cfg: &ScanConfig) -> Result<Vec<ScanRecord>> {
    let mut cache: HashMap<String, ScanRecord> = HashMap::new();
    if let Some(path) = &cfg.cache {
        if let Ok(text) = std::fs::read_to_string(path) {
            for line in text.lines() {
                if line.trim().is_empty() {
                    continue;
                }
                let rec: ScanRecord = serde_json::from_str(line)
                    .map_err(|e| Error::Parse(format!("bad cache line: {e}")))?;
                cache.insert(rec.key.clone(), rec);
            }
        }
    }
    // Enumerate jobs deterministically.
    struct Job {
        poly: IntPoly,
        disc: BigInt,
        v_int: i64,
        key: String,
    }
    let mut jobs: Vec<Job> = Vec::new();
    for d in fundamental_discs(cfg.disc_lo, cfg.disc_hi) {
        let poly = quadratic_poly(d);
        let poly_s = format_int_poly(&poly);
        for v_int in v_candidates(d) {
            // The canonical v string for rational integers equals the
            // decimal form; the cache key uses the formatted element,
            // which for an integer is its decimal string.
            let key = cache_key(&poly_s, cfg.n, &v_int.to_string(), cfg.seed);
            jobs.push(Job {
                poly: poly.clone(),
                disc: big(d),
                v_int,
                key,
            });
        }
    }
    let compute = |job: &Job| -> Option<ScanRecord> {
        if let Some(hit) = cache.get(&job.key) {
            return Some(hit.clone());
        }
        run_job(&job.poly, &job.disc, cfg.n, job.v_int, cfg.seed)
    };
    #[cfg(feature = "parallel")]
    let results: Vec<Option<ScanRecord>> = jobs.par_iter().map(compute).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<Option<ScanRecord>> = jobs.iter().map(compute).collect();
    let records: Vec<ScanRecord> = results.into_iter().flatten().collect();
    if let Some(path) = &cfg.cache {
        let mut fresh = Vec::new();
        for r in &records {
            if !cache.contains_key(&r.key) {
                fresh.push(r.clone());
            }
        }
        if !fresh.is_empty() {
            let mut f = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .map_err(|e| Error::Parse(format!("cannot open cache: {e}")))?;
            for r in fresh {
                let line = serde_json::to_string(&r).expect("serializable record");
                writeln!(f, "{line}").map_err(|e| Error::Parse(format!("cache write: {e}")))?;
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classunit::class_group;

    #[test]
    fn fundamental_disc_list() {
        let ds = fundamental_discs(-24, -3);
        assert_eq!(ds, vec![-3, -4, -7, -8, -11, -15, -19, -20, -23, -24]);
    }

    #[test]
    fn kim_trivial_cases() {
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        let ctx = CohomologyCtx::new(k, 2, 1).unwrap();
        // v = -1: div(v) = 0, a = 0, vanishes.
        let r = kim_invariant(&ctx, &ctx.field.from_i64(-1), 1).unwrap();
        assert!(r.vanishes && !r.trivial && r.artin_value == 0);
        // v = 4 is a square: trivial extension.
        let r = kim_invariant(&ctx, &ctx.field.from_i64(4), 1).unwrap();
        assert!(r.vanishes && r.trivial);
        // v = 5: L = K(i), a = -p5 principal, vanishes.
        let r = kim_invariant(&ctx, &ctx.field.from_i64(5), 1).unwrap();
        assert!(r.vanishes && !r.trivial);
    }

    #[test]
    fn kim_scope_and_roots() {
        // No zeta_3 in Q(sqrt(-5)).
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        let ctx = CohomologyCtx::new(k, 3, 1).unwrap();
        assert!(matches!(
            kim_invariant(&ctx, &ctx.field.from_i64(2), 1),
            Err(Error::RootOfUnityMissing(3))
        ));
        // Real field with n = 2.
        let k = NumberField::make(IntPoly::from_i64(&[-2, 0, 0, 1])).unwrap();
        let ctx = CohomologyCtx::new(k, 2, 1).unwrap();
        assert!(matches!(
            kim_invariant(&ctx, &ctx.field.from_i64(-1), 1),
            Err(Error::ScopeViolation)
        ));
    }

    #[test]
    fn norm_image_oracle_matches_artin() {
        // Q(sqrt(-5)), L = K(i): N(Cl L) is trivial in Cl K = Z/2.
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        let ctx = CohomologyCtx::new(k, 2, 1).unwrap();
        let ext = CyclicExtension::build_kummer(&ctx.field, 2, &ctx.field.from_i64(-1)).unwrap();
        let cls_top = class_group(&ext.top, 1).unwrap();
        // Principal target: in the image.
        let tgt = ctx.field.principal_ideal(&ctx.field.from_i64(7)).unwrap();
        assert!(norm_image_contains(&ctx, &ext, &cls_top, &tgt).unwrap());
        // The nonprincipal p2: not a norm (Artin symbol 1).
        let p2 = &ctx.field.factor_rational_prime(&big(2)).unwrap()[0];
        assert!(!norm_image_contains(&ctx, &ext, &cls_top, &p2.ideal).unwrap());
        assert_eq!(ext.artin_of_ideal(&p2.ideal).unwrap(), 1);
    }

    #[test]
    fn scan_disc_20_includes_qm5_jobs() {
        let cfg = ScanConfig {
            disc_lo: -20,
            disc_hi: -20,
            n: 2,
            seed: 1,
            cache: None,
        };
        let recs = scan(&cfg).unwrap();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.poly == "x^2 + 5"));
        // v = -4 (the prime discriminant at 2) cuts out K(i): admissible,
        // vanishing invariant.
        let r = recs.iter().find(|r| r.v == "-4").unwrap();
        assert_eq!(r.status, "ok");
        assert_eq!(r.vanishes, Some(true));
        assert_eq!(r.d, Some(2));
        // v = disc is a square in K: the trivial job.
        let r = recs.iter().find(|r| r.v == "-20").unwrap();
        assert_eq!(r.trivial, Some(true));
    }

    #[test]
    fn scan_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let cfg = ScanConfig {
            disc_lo: -20,
            disc_hi: -15,
            n: 2,
            seed: 3,
            cache: Some(path.clone()),
        };
        let first = scan(&cfg).unwrap();
        let again = scan(&cfg).unwrap();
        assert_eq!(first, again);
        // The cache file holds exactly the emitted records.
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), first.len());
    }
}
