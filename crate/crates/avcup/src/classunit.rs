//! Class groups, principality testing and unit groups.
//!
//! The class group comes from a factor base of every prime above the
//! rational primes up to the Minkowski bound, relations harvested from
//! rational primes, short vectors of the base prime lattices, and random
//! smooth elements; the relation lattice is accepted once its Hermite
//! determinant has been stable across several batches. Structure and
//! discrete logarithms come from the Smith normal form with transforms.
//!
//! Units are gathered from the kernel of the relation matrix and from
//! direct short-vector searches, then reduced to a fundamental system
//! through the logarithmic embedding (floats guide the search; every
//! reduction step is an exact field operation).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::arith::big;
use crate::embed::Embeddings;
use crate::error::{Error, Result};
use crate::ideal::{FractionalIdeal, PrimeIdeal};
use crate::lll;
use crate::matz::{self, Mat};
use crate::nf::{FieldElement, NumberField};

/// A relation: the principal ideal of `elt` factors over the base with
/// the exponents in `exps`.
#[derive(Debug, Clone)]
struct Relation {
    exps: Vec<BigInt>,
    elt: FieldElement,
}

/// The class group of a number field.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub factor_base: Vec<PrimeIdeal>,
    /// Nontrivial invariant factors d_1 | d_2 | ... of the group.
    pub invariants: Vec<BigInt>,
    /// Ideal generators of the cyclic components, matching `invariants`.
    pub generators: Vec<FractionalIdeal>,
    pub h: BigInt,
    v: Mat,
    diag: Vec<BigInt>,
    nontrivial: Vec<usize>,
    relations: Vec<Relation>,
}

/// Evaluate one candidate element against the factor base.
/// A non-integral element of P^{-1}. Multiplying by it lowers the
/// valuation at P by exactly one and keeps every other valuation
/// nonnegative, so valuations of integral elements reduce to repeated
/// multiplication plus an integrality check.
fn anti_uniformizer(k: &NumberField, pr: &PrimeIdeal) -> FieldElement {
    let inv = k.ideal_inverse(&pr.ideal);
    for i in 0..k.degree {
        let c = k.elt(inv.num.row_vec(i), inv.den.clone());
        if !c.is_integral() {
            return c;
        }
    }
    unreachable!("P^{{-1}} strictly contains the maximal order");
}

fn fast_valuation(k: &NumberField, x: &FieldElement, anti: &FieldElement) -> i64 {
    debug_assert!(x.is_integral());
    let mut v = 0i64;
    let mut c = k.mul(x, anti);
    while c.is_integral() {
        v += 1;
        c = k.mul(&c, anti);
    }
    v
}

fn try_relation(
    k: &NumberField,
    base: &[PrimeIdeal],
    antis: &[FieldElement],
    rational_primes: &[BigInt],
    x: &FieldElement,
) -> Option<Relation> {
    if x.is_zero() {
        return None;
    }
    let n = k.norm(x);
    debug_assert!(n.is_integer());
    let mut n = n.to_integer().abs();
    if n.is_zero() {
        return None;
    }
    let mut support: Vec<&BigInt> = Vec::new();
    for p in rational_primes {
        let mut hit = false;
        while (n.mod_floor(p)).is_zero() {
            n /= p;
            hit = true;
        }
        if hit {
            support.push(p);
        }
    }
    if !n.is_one() {
        return None;
    }
    // Valuations vanish at every prime whose rational prime misses the norm.
    let exps: Vec<BigInt> = base
        .iter()
        .zip(antis)
        .map(|(pr, anti)| {
            if support.iter().any(|p| **p == pr.p) {
                big(fast_valuation(k, x, anti))
            } else {
                BigInt::zero()
            }
        })
        .collect();
    Some(Relation {
        exps,
        elt: x.clone(),
    })
}

fn eval_batch(
    k: &NumberField,
    base: &[PrimeIdeal],
    antis: &[FieldElement],
    rational_primes: &[BigInt],
    cands: Vec<FieldElement>,
) -> Vec<Relation> {
    #[cfg(feature = "parallel")]
    {
        cands
            .par_iter()
            .filter_map(|x| try_relation(k, base, antis, rational_primes, x))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        cands
            .iter()
            .filter_map(|x| try_relation(k, base, antis, rational_primes, x))
            .collect()
    }
}

/// Minkowski bound for the field, rounded up.
pub fn minkowski_bound(k: &NumberField) -> u64 {
    let m = k.degree as f64;
    let mut fact = 1.0f64;
    for i in 2..=k.degree {
        fact *= i as f64;
    }
    let (_, r2) = k.signature;
    let b = fact / m.powf(m)
        * (4.0 / std::f64::consts::PI).powi(r2 as i32)
        * k.disc.to_f64().unwrap().abs().sqrt();
    (b.ceil() as u64).max(2)
}

/// Gram matrix of the rows of an integral lattice under T2.
fn lattice_gram(k: &NumberField, emb: &Embeddings, num: &Mat) -> Vec<Vec<f64>> {
    let m = k.degree;
    let rows: Vec<Vec<crate::embed::Cpx>> = (0..m)
        .map(|i| emb.embed(&k.elt(num.row_vec(i), BigInt::one())))
        .collect();
    let mut g = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let mut s = 0.0;
            for r in 0..m {
                s += rows[i][r].mul(rows[j][r].conj()).re;
            }
            g[i][j] = s;
        }
    }
    g
}

/// LLL-reduce integer lattice rows in place under the T2 form. Row
/// operations are exact (BigInt) and the embeddings are recomputed from
/// the exact rows after every update, so the reduction stays correct
/// even for extremely skew bases (e.g. HNF bases of ideals with huge
/// norms) where a pure floating-point transform would drown in rounding
/// error.
fn reduce_basis(k: &NumberField, emb: &Embeddings, rows: &mut Vec<Vec<BigInt>>) {
    let n = rows.len();
    if n < 2 {
        return;
    }
    let embed_row = |r: &Vec<BigInt>| emb.embed(&k.elt(r.clone(), BigInt::one()));
    let mut er: Vec<Vec<crate::embed::Cpx>> = rows.iter().map(embed_row).collect();
    let gram = |er: &Vec<Vec<crate::embed::Cpx>>| -> Vec<Vec<f64>> {
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let mut s = 0.0;
                for r in 0..er[i].len() {
                    s += er[i][r].mul(er[j][r].conj()).re;
                }
                g[i][j] = s;
                g[j][i] = s;
            }
        }
        g
    };
    let gso = |g: &Vec<Vec<f64>>| -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut b = vec![0.0; n];
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut bi = g[i][i];
            for j in 0..i {
                let mut m = g[i][j];
                for l in 0..j {
                    m -= mu[i][l] * mu[j][l] * b[l];
                }
                mu[i][j] = if b[j] > 0.0 { m / b[j] } else { 0.0 };
                bi -= mu[i][j] * mu[i][j] * b[j];
            }
            b[i] = bi.max(0.0);
        }
        (b, mu)
    };
    let mut kk = 1usize;
    let mut guard = 0usize;
    while kk < n {
        guard += 1;
        if guard > 20_000 {
            break;
        }
        // Size-reduce row kk, refreshing the embedding after every exact
        // update so the next quotient is computed from true residuals.
        for j in (0..kk).rev() {
            for _ in 0..64 {
                let g = gram(&er);
                let (_, mu) = gso(&g);
                let q = mu[kk][j].round();
                if q == 0.0 || !q.is_finite() {
                    break;
                }
                let qb = BigInt::from_f64(q).expect("finite quotient");
                for l in 0..rows[kk].len() {
                    let t = &qb * &rows[j][l];
                    rows[kk][l] -= t;
                }
                er[kk] = embed_row(&rows[kk]);
            }
        }
        let g = gram(&er);
        let (b, mu) = gso(&g);
        if b[kk] >= (0.99 - mu[kk][kk - 1] * mu[kk][kk - 1]) * b[kk - 1] {
            kk += 1;
        } else {
            rows.swap(kk, kk - 1);
            er.swap(kk, kk - 1);
            kk = kk.saturating_sub(1).max(1);
        }
    }
}

/// Short elements of the lattice `num` (integral coordinates), guided by
/// LLL + enumeration with the given T2 bound.
pub(crate) fn short_elements(
    k: &NumberField,
    emb: &Embeddings,
    num: &Mat,
    bound: f64,
    cap: usize,
) -> Vec<FieldElement> {
    let m = k.degree;
    let mut rows: Vec<Vec<BigInt>> = (0..m).map(|i| num.row_vec(i)).collect();
    reduce_basis(k, emb, &mut rows);
    let red = Mat::from_rows(rows.clone());
    let gram = lattice_gram(k, emb, &red);
    let vecs = lll::short_vectors(&gram, bound, cap);
    vecs.into_iter()
        .map(|x| {
            let mut coords = vec![BigInt::zero(); m];
            for (i, &xi) in x.iter().enumerate() {
                if xi == 0 {
                    continue;
                }
                for l in 0..m {
                    coords[l] += big(xi) * &rows[i][l];
                }
            }
            k.elt(coords, BigInt::one())
        })
        .filter(|e| !e.is_zero())
        .collect()
}

/// Compute the class group with a deterministic seed.
pub fn class_group(k: &NumberField, seed: u64) -> Result<ClassGroup> {
    let emb = Embeddings::new(k);
    let mk = minkowski_bound(k);
    let rational_primes: Vec<BigInt> = crate::arith::primes_up_to(mk)
        .into_iter()
        .map(|p| big(p as i64))
        .collect();
    let mut base: Vec<PrimeIdeal> = Vec::new();
    let mut p_rows: Vec<Vec<BigInt>> = Vec::new();
    for p in &rational_primes {
        let primes = k.factor_rational_prime(p)?;
        let start = base.len();
        let es: Vec<u32> = primes.iter().map(|q| q.e).collect();
        base.extend(primes);
        let mut row = vec![BigInt::zero(); base.len()];
        for (i, e) in es.iter().enumerate() {
            row[start + i] = big(*e as i64);
        }
        p_rows.push(row);
    }
    let b = base.len();
    if b == 0 {
        // No primes below the bound: trivial class group.
        return Ok(ClassGroup {
            factor_base: vec![],
            invariants: vec![],
            generators: vec![],
            h: BigInt::one(),
            v: Mat::identity(0),
            diag: vec![],
            nontrivial: vec![],
            relations: vec![],
        });
    }
    let mut relations: Vec<Relation> = Vec::new();
    for (row, p) in p_rows.iter_mut().zip(&rational_primes) {
        row.resize(b, BigInt::zero());
        relations.push(Relation {
            exps: row.clone(),
            elt: k.from_int(p),
        });
    }
    let antis: Vec<FieldElement> = base.iter().map(|pr| anti_uniformizer(k, pr)).collect();
    let m = k.degree as f64;
    let disc_f = k.disc.to_f64().unwrap().abs();
    // Short vectors of each base prime lattice.
    let mut pending: Vec<FieldElement> = Vec::new();
    for pr in &base {
        let n = k.ideal_norm(&pr.ideal).to_integer().to_f64().unwrap();
        let bound = 1.5 * m * (n * n * disc_f).powf(1.0 / m);
        pending.extend(short_elements(k, &emb, &pr.ideal.num, bound, 25));
    }
    // And of the full ring.
    let bound0 = 2.0 * m * disc_f.powf(1.0 / m);
    pending.extend(short_elements(k, &emb, &Mat::identity(k.degree), bound0, 60));

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1a5_5e3d);
    let mut det: Option<BigInt> = None;
    let mut streak = 0;
    let mut round = 0usize;
    // Reduced row basis of the relation lattice, updated incrementally so
    // each round only reduces the new rows against at most b old ones.
    let mut hmat = Mat::from_rows(relations.iter().map(|r| r.exps.clone()).collect());
    hmat = matz::hnf(&hmat);
    let t0 = std::time::Instant::now();
    loop {
        let batch: Vec<FieldElement> = if !pending.is_empty() {
            std::mem::take(&mut pending)
        } else {
            // Short vectors of random products of factor-base primes:
            // such elements factor as the product times a cofactor of
            // norm O(sqrt |disc|), which is usually smooth over the
            // base, unlike blind random elements.
            let mut guided: Vec<FieldElement> = Vec::new();
            for _ in 0..6 {
                let mut idl = k.unit_ideal();
                let support = 1 + rng.gen_range(0..=1usize).min(b - 1);
                for _ in 0..support {
                    let j = rng.gen_range(0..b);
                    idl = k.ideal_mul(&idl, &base[j].ideal);
                }
                let nf = k.ideal_norm(&idl).to_integer().to_f64().unwrap_or(1e300);
                let bound = 1.5 * m * (nf * nf * disc_f).powf(1.0 / m);
                guided.extend(short_elements(k, &emb, &idl.num, bound, 24));
            }
            // A few blind candidates keep the sample decorrelated.
            let width = 2 + (round / 8) as i64;
            guided.extend((0..16).map(|_| {
                let coords: Vec<BigInt> = (0..k.degree)
                    .map(|_| big(rng.gen_range(-width..=width)))
                    .collect();
                k.elt(coords, BigInt::one())
            }));
            guided
        };
        round += 1;
        let batch_len = batch.len();
        let t_gen = t0.elapsed();
        let fresh = eval_batch(k, &base, &antis, &rational_primes, batch);
        let t_eval = t0.elapsed();
        // Fold the new rows into the reduced basis in small chunks so no
        // single reduction sees more than b + 64 rows.
        for chunk in fresh.chunks(64) {
            let mut rows: Vec<Vec<BigInt>> =
                (0..hmat.rows).map(|i| hmat.row_vec(i)).collect();
            rows.extend(chunk.iter().map(|r| r.exps.clone()));
            hmat = matz::hnf(&Mat::from_rows(rows));
        }
        relations.extend(fresh);
        if std::env::var_os("AVCUP_DEBUG").is_some() {
            eprintln!(
                "class_group round {round}: {batch_len} candidates, {} relations, basis {}x{}, gen@{:?} eval@{:?} hnf@{:?}",
                relations.len(),
                hmat.rows,
                hmat.cols,
                t_gen,
                t_eval,
                t0.elapsed()
            );
        }
        // Hermite determinant of the relation lattice.
        if hmat.rows == b {
            let mut d = BigInt::one();
            for i in 0..b {
                d *= &hmat[(i, i)];
            }
            let d = d.abs();
            if Some(&d) == det.as_ref() {
                streak += 1;
                if streak >= 4 {
                    break;
                }
            } else {
                det = Some(d);
                streak = 0;
            }
        }
        if round > 400 {
            return Err(Error::SearchExhausted(
                "class group relation search".into(),
            ));
        }
    }
    // Structure from the Smith normal form of the reduced basis; it has
    // the same row space as the full relation stack.
    let (d, _u, v, v_inv) = matz::snf(&hmat);
    let mut diag = vec![BigInt::zero(); b];
    for i in 0..b.min(d.rows) {
        diag[i] = d[(i, i)].abs();
    }
    // Size-reduce an exponent vector modulo the relation lattice: the
    // class is unchanged and the powers stay small enough for ideal
    // arithmetic even when the SNF transform has large entries.
    let pivots: Vec<(usize, usize)> = (0..hmat.rows)
        .filter_map(|r| (0..b).find(|&c| !hmat[(r, c)].is_zero()).map(|c| (r, c)))
        .collect();
    let reduce_exps = |mut w: Vec<BigInt>| -> Vec<BigInt> {
        for &(r, c) in pivots.iter().rev() {
            let p = &hmat[(r, c)];
            // Nearest-integer quotient (pivots are positive in HNF).
            let q = BigInt::div_floor(&(&w[c] * 2 + p), &(p * 2));
            if !q.is_zero() {
                for j in 0..b {
                    let t = &q * &hmat[(r, j)];
                    w[j] -= t;
                }
            }
        }
        w
    };
    let mut invariants = Vec::new();
    let mut generators = Vec::new();
    let mut nontrivial = Vec::new();
    let mut h = BigInt::one();
    for i in 0..b {
        if diag[i].is_zero() {
            return Err(Error::SearchExhausted(
                "relation lattice has deficient rank".into(),
            ));
        }
        h *= &diag[i];
        if !diag[i].is_one() {
            nontrivial.push(i);
            invariants.push(diag[i].clone());
            let w = reduce_exps((0..b).map(|j| v_inv[(i, j)].clone()).collect());
            let mut gen = k.unit_ideal();
            for (j, e) in w.iter().enumerate() {
                let e = e.to_i64().expect("small exponent");
                if e != 0 {
                    gen = k.ideal_mul(&gen, &k.ideal_pow(&base[j].ideal, e));
                }
            }
            generators.push(gen);
        }
    }
    Ok(ClassGroup {
        factor_base: base,
        invariants,
        generators,
        h,
        v,
        diag,
        nontrivial,
        relations,
    })
}

impl ClassGroup {
    pub fn is_trivial(&self) -> bool {
        self.h.is_one()
    }

    /// A class-group object carrying no class information. Discrete
    /// logs are empty and principality queries fall through to the
    /// exact-verified generator search, so it can never wrongly certify
    /// an ideal as non-principal — failures surface as search errors.
    /// For fields whose class group is out of computational reach when
    /// only verified principal splittings are required.
    pub fn assumed_trivial() -> ClassGroup {
        ClassGroup {
            factor_base: vec![],
            invariants: vec![],
            generators: vec![],
            h: BigInt::one(),
            v: Mat::identity(0),
            diag: vec![],
            nontrivial: vec![],
            relations: vec![],
        }
    }

    /// Discrete logarithm of an ideal class in the invariant coordinates.
    pub fn dlog(&self, k: &NumberField, ideal: &FractionalIdeal) -> Result<Vec<BigInt>> {
        if self.invariants.is_empty() {
            return Ok(vec![]);
        }
        let w = self.smooth_vector(k, ideal)?;
        Ok(self.reduce_vector(&w))
    }

    /// Reduce an exponent vector over the factor base to invariant
    /// coordinates.
    fn reduce_vector(&self, w: &[BigInt]) -> Vec<BigInt> {
        let t = Mat::vec_mul(w, &self.v);
        self.nontrivial
            .iter()
            .map(|&i| t[i].mod_floor(&self.diag[i]))
            .collect()
    }

    /// Express [ideal] over the factor base: find y in the numerator
    /// lattice with smooth (y)/num, giving [ideal] = [num] = -[(y)/num].
    fn smooth_vector(&self, k: &NumberField, ideal: &FractionalIdeal) -> Result<Vec<BigInt>> {
        let b = self.factor_base.len();
        let rational_primes: Vec<BigInt> = {
            let mut ps: Vec<BigInt> = self.factor_base.iter().map(|p| p.p.clone()).collect();
            ps.dedup();
            ps
        };
        // The denominator is principal, so only the numerator matters.
        let num_ideal = FractionalIdeal {
            num: ideal.num.clone(),
            den: BigInt::one(),
        };
        let num_norm = k.ideal_norm(&num_ideal).to_integer();
        // If the ideal is already smooth over the factor base, read the
        // exponent vector off directly — no search needed. This covers
        // the generator ideals themselves, whose norms can be far too
        // large for a short-vector hunt.
        {
            let mut rest = num_norm.clone();
            for p in &rational_primes {
                while (rest.mod_floor(p)).is_zero() {
                    rest /= p;
                }
            }
            if rest.is_one() {
                return Ok(self
                    .factor_base
                    .iter()
                    .map(|pr| big(k.valuation(&num_ideal, pr)))
                    .collect());
            }
        }
        let emb = Embeddings::new(k);
        let m = k.degree as f64;
        let disc_f = k.disc.to_f64().unwrap().abs();
        let nf = num_norm.to_f64().unwrap();
        let mut bound = 1.5 * m * (nf * nf * disc_f).powf(1.0 / m);
        for _ in 0..14 {
            if std::env::var_os("AVCUP_DEBUG").is_some() {
                eprintln!("smooth_vector: norm {num_norm}, bound {bound:e}");
            }
            let cands = short_elements(k, &emb, &ideal.num, bound, 4000);
            for y in cands {
                let ny = k.norm(&y).to_integer().abs();
                let (q, r) = ny.div_rem(&num_norm);
                if !r.is_zero() {
                    continue;
                }
                let mut rest = q;
                for p in &rational_primes {
                    while (rest.mod_floor(p)).is_zero() {
                        rest /= p;
                    }
                }
                if !rest.is_one() {
                    continue;
                }
                // (y) = num * J with J integral and smooth.
                let mut w = vec![BigInt::zero(); b];
                let mut ok = true;
                for (i, pr) in self.factor_base.iter().enumerate() {
                    let vy = k.element_valuation(&y, pr)?;
                    let vi = k.valuation(&num_ideal, pr);
                    w[i] = big(vy - vi);
                    if vy < vi {
                        ok = false;
                    }
                }
                if !ok {
                    continue;
                }
                // [num] = -[J]
                return Ok(w.iter().map(|x| -x).collect());
            }
            bound *= 2.0;
        }
        Err(Error::SearchExhausted("smooth class representative".into()))
    }

    /// Decide principality; returns a generator when the ideal is
    /// principal. The decision uses the class group; the generator comes
    /// from exact-verified short-vector search.
    pub fn is_principal(
        &self,
        k: &NumberField,
        ideal: &FractionalIdeal,
    ) -> Result<Option<FieldElement>> {
        if !self.invariants.is_empty() {
            let d = self.dlog(k, ideal)?;
            if d.iter().any(|x| !x.is_zero()) {
                return Ok(None);
            }
        }
        let num_ideal = FractionalIdeal {
            num: ideal.num.clone(),
            den: BigInt::one(),
        };
        let num_norm = k.ideal_norm(&num_ideal).to_integer();
        let emb = Embeddings::new(k);
        let m = k.degree as f64;
        let disc_f = k.disc.to_f64().unwrap().abs();
        let nf = num_norm.to_f64().unwrap();
        let mut bound = 1.2 * m * (nf * nf * disc_f).powf(1.0 / m);
        for _ in 0..16 {
            let cands = short_elements(k, &emb, &ideal.num, bound, 20000);
            for y in cands {
                if k.norm(&y).to_integer().abs() == num_norm {
                    let py = k.principal_ideal(&y)?;
                    if py == num_ideal {
                        // ideal = (y) / den.
                        let g = k.elt(y.coords.clone(), &y.den * &ideal.den);
                        return Ok(Some(g));
                    }
                }
            }
            bound *= 2.0;
        }
        Err(Error::SearchExhausted(
            "generator of a principal ideal".into(),
        ))
    }
}

/// The unit group modulo torsion plus the torsion part.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub torsion_order: u64,
    pub torsion_gen: FieldElement,
    /// Fundamental units (length = unit rank).
    pub fundamental: Vec<FieldElement>,
}

/// Compute the unit group. Supported unit ranks: 0 and 1 (and a
/// best-effort reduction for rank 2).
pub fn unit_group(k: &NumberField, cls: &ClassGroup, seed: u64) -> Result<UnitGroup> {
    let (r1, r2) = k.signature;
    let rank = r1 + r2 - 1;
    if rank > 2 {
        return Err(Error::RankTooLarge(rank));
    }
    let (w, zeta) = k.roots_of_unity()?;
    if rank == 0 {
        return Ok(UnitGroup {
            torsion_order: w,
            torsion_gen: zeta,
            fundamental: vec![],
        });
    }
    let emb = Embeddings::new(k);
    let mut units: Vec<FieldElement> = Vec::new();
    // Source 1: kernel of the relation matrix gives products of relation
    // elements with trivial divisor.
    if !cls.relations.is_empty() {
        let mat = Mat::from_rows(cls.relations.iter().map(|r| r.exps.clone()).collect());
        let ker = matz::left_kernel(&mat);
        for i in 0..ker.rows {
            let weight: BigInt = (0..ker.cols).map(|j| ker[(i, j)].abs()).sum();
            if weight > big(300) {
                continue;
            }
            let mut u = k.one();
            for j in 0..ker.cols {
                let e = ker[(i, j)].to_i64().unwrap();
                if e != 0 {
                    u = k.mul(&u, &k.pow(&cls.relations[j].elt, e)?);
                }
            }
            if is_unit(k, &u) && !is_torsion(k, &emb, &u) {
                units.push(u);
            }
        }
    }
    // Source 2: direct short-vector search for elements of norm +/- 1.
    let m = k.degree as f64;
    let disc_f = k.disc.to_f64().unwrap().abs();
    let mut bound = 2.0 * m * disc_f.powf(1.0 / m);
    let mut tries = 0;
    let _ = seed;
    while count_independent(k, &emb, &units) < rank && tries < 18 {
        for y in short_elements(k, &emb, &Mat::identity(k.degree), bound, 60000) {
            if is_unit(k, &y) && !is_torsion(k, &emb, &y) {
                units.push(y);
            }
        }
        bound *= 2.0;
        tries += 1;
    }
    if count_independent(k, &emb, &units) < rank {
        return Err(Error::SearchExhausted("fundamental units".into()));
    }
    let mut fundamental = reduce_units(k, &emb, units, rank)?;
    // Saturate: replace each unit by roots when they exist in K.
    for u in fundamental.iter_mut() {
        saturate_unit(k, &emb, u, w, &zeta)?;
    }
    Ok(UnitGroup {
        torsion_order: w,
        torsion_gen: zeta,
        fundamental,
    })
}

fn is_unit(k: &NumberField, x: &FieldElement) -> bool {
    if x.is_zero() || !x.is_integral() {
        return false;
    }
    let n = k.norm(x);
    n.is_integer() && n.to_integer().abs().is_one()
}

/// Logarithmic embedding: log |sigma_i(x)| for a set of embeddings
/// spanning the unit lattice (first r1 + r2 coordinates, one per place).
fn log_vector(_k: &NumberField, emb: &Embeddings, x: &FieldElement) -> Vec<f64> {
    // Group the complex roots into places: for a place keep one
    // representative root. Roots come in conjugate pairs for complex
    // places; pair them by comparing values.
    let images = emb.embed(x);
    let mut used = vec![false; images.len()];
    let mut logs = Vec::new();
    for i in 0..images.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let root = emb.roots[i];
        let mut mult = 1.0;
        if root.im.abs() > 1e-9 {
            // Find the conjugate root.
            for j in i + 1..images.len() {
                if !used[j] && (emb.roots[j].sub(root.conj())).abs() < 1e-6 {
                    used[j] = true;
                    mult = 2.0;
                    break;
                }
            }
        }
        logs.push(mult * images[i].abs().max(1e-300).ln());
    }
    logs
}

fn is_torsion(k: &NumberField, emb: &Embeddings, x: &FieldElement) -> bool {
    log_vector(k, emb, x).iter().all(|l| l.abs() < 1e-7)
}

/// Rank of the span of the log vectors (by Gram-Schmidt with a tolerance).
fn count_independent(k: &NumberField, emb: &Embeddings, units: &[FieldElement]) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for u in units {
        let mut v = log_vector(k, emb, u);
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            let nb: f64 = b.iter().map(|x| x * x).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= dot / nb * y;
            }
        }
        if v.iter().map(|x| x * x).sum::<f64>() > 1e-10 {
            basis.push(v);
        }
    }
    basis.len()
}

/// Reduce a generating set to `rank` fundamental units by Euclidean
/// reduction on the first log coordinate (exact multiplications only).
fn reduce_units(
    k: &NumberField,
    emb: &Embeddings,
    mut units: Vec<FieldElement>,
    rank: usize,
) -> Result<Vec<FieldElement>> {
    if rank != 1 {
        // Rank 2: return two log-independent units, reduced pairwise.
        units.sort_by(|a, b| {
            log_norm(emb, k, a)
                .partial_cmp(&log_norm(emb, k, b))
                .unwrap()
        });
        let mut out: Vec<FieldElement> = Vec::new();
        for u in units {
            if out.len() == 2 {
                break;
            }
            if out.iter().all(|v| independent(emb, k, v, &u)) {
                out.push(u);
            }
        }
        if out.len() < 2 {
            return Err(Error::SearchExhausted("rank-2 unit system".into()));
        }
        return Ok(out);
    }
    // Rank 1: real Euclid on the leading log coordinate.
    let lead = |x: &FieldElement| -> f64 {
        log_vector(k, emb, x)
            .into_iter()
            .find(|l| l.abs() > 1e-9)
            .unwrap_or(0.0)
    };
    let mut gen: Option<FieldElement> = None;
    for u in units {
        let mut u = u;
        loop {
            match &gen {
                None => {
                    gen = Some(u);
                    break;
                }
                Some(g) => {
                    let lg = lead(g);
                    let lu = lead(&u);
                    if lu.abs() < 1e-7 {
                        break; // torsion remainder
                    }
                    let q = (lu / lg).round();
                    let r = k.mul(&u, &k.pow(g, -(q as i64))?);
                    if lead(&r).abs() < 1e-7 {
                        break;
                    }
                    if lead(&r).abs() < lg.abs() {
                        u = r;
                        let taken = gen.take().unwrap();
                        let swap_back = u.clone();
                        gen = Some(swap_back);
                        u = taken;
                    } else {
                        u = r;
                    }
                }
            }
        }
    }
    let mut g = gen.ok_or_else(|| Error::SearchExhausted("fundamental unit".into()))?;
    // Prefer the representative with positive leading log.
    if lead(&g) < 0.0 {
        g = k.invert(&g)?;
    }
    Ok(vec![g])
}

fn log_norm(emb: &Embeddings, k: &NumberField, x: &FieldElement) -> f64 {
    log_vector(k, emb, x).iter().map(|l| l * l).sum::<f64>()
}

fn independent(emb: &Embeddings, k: &NumberField, a: &FieldElement, b: &FieldElement) -> bool {
    let la = log_vector(k, emb, a);
    let lb = log_vector(k, emb, b);
    let dot: f64 = la.iter().zip(&lb).map(|(x, y)| x * y).sum();
    let na: f64 = la.iter().map(|x| x * x).sum();
    let nb: f64 = lb.iter().map(|x| x * x).sum();
    (dot * dot) < 0.99 * na * nb
}

/// Replace u by a k-th root (possibly twisted by torsion) while one
/// exists in K, making it fundamental within its cyclic factor.
fn saturate_unit(
    k: &NumberField,
    emb: &Embeddings,
    u: &mut FieldElement,
    w: u64,
    zeta: &FieldElement,
) -> Result<()> {
    'outer: loop {
        let lu = log_norm(emb, k, u).sqrt();
        for p in [2u64, 3, 5, 7] {
            // A unit with tiny log cannot be a proper power of a
            // non-torsion unit of reasonable size; stop at the scale of
            // the smallest plausible regulator.
            if lu / p as f64 * 2.0 < 0.15 {
                continue;
            }
            for j in 0..w {
                let tw = k.mul(u, &k.pow(zeta, j as i64)?);
                let poly = {
                    let mut c = vec![k.neg(&tw)];
                    for _ in 0..p - 1 {
                        c.push(k.zero());
                    }
                    c.push(k.one());
                    k.kp_new(c)
                };
                let roots = k.roots_in_field(&poly)?;
                if let Some(r) = roots.into_iter().find(|r| !is_torsion(k, emb, r)) {
                    *u = r;
                    continue 'outer;
                }
            }
        }
        return Ok(());
    }
}

/// Generators (with their orders) of U / U^n.
pub fn units_mod_nth_powers(
    _k: &NumberField,
    units: &UnitGroup,
    n: u64,
) -> Vec<(FieldElement, u64)> {
    let mut out = Vec::new();
    let t = units.torsion_order.gcd(&n);
    if t > 1 {
        // The image of zeta itself generates the torsion part of U/U^n,
        // of order t = gcd(w, n): zeta^t = (zeta^s)^n for any s with
        // n s = t (mod w). A power of zeta can fail to generate (for
        // w = 4, n = 2 the element zeta^2 = -1 is already a square).
        out.push((units.torsion_gen.clone(), t));
    }
    for u in &units.fundamental {
        out.push((u.clone(), n));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    #[test]
    fn class_group_q_sqrt_minus_5() {
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        let cls = class_group(&k, 1).unwrap();
        assert_eq!(cls.h, big(2));
        assert_eq!(cls.invariants, vec![big(2)]);
        // The prime above 2 is nonprincipal; (1 + theta) is principal.
        let p2 = &k.factor_rational_prime(&big(2)).unwrap()[0];
        assert!(cls.is_principal(&k, &p2.ideal).unwrap().is_none());
        let x = k.add(&k.one(), &k.theta());
        let px = k.principal_ideal(&x).unwrap();
        let g = cls.is_principal(&k, &px).unwrap().expect("principal");
        assert_eq!(k.principal_ideal(&g).unwrap(), px);
        // dlog of p2 is the nontrivial class.
        assert_eq!(cls.dlog(&k, &p2.ideal).unwrap(), vec![big(1)]);
        // dlog of p2^2 is trivial.
        let sq = k.ideal_pow(&p2.ideal, 2);
        assert_eq!(cls.dlog(&k, &sq).unwrap(), vec![big(0)]);
    }

    #[test]
    fn class_numbers_imaginary_quadratics() {
        // (disc poly constant, expected h): h(-14) = 4, h(-23) = 3 over
        // x^2+14 and x^2+23 (the latter has disc -23 after index 1? no:
        // -23 = 1 mod 4, so x^2+23 gives disc -92... use x^2+x+6 for -23).
        let k = NumberField::make(IntPoly::from_i64(&[14, 0, 1])).unwrap();
        assert_eq!(class_group(&k, 7).unwrap().h, big(4));
        let k = NumberField::make(IntPoly::from_i64(&[6, 1, 1])).unwrap();
        assert_eq!(k.disc, big(-23));
        let cls = class_group(&k, 7).unwrap();
        assert_eq!(cls.h, big(3));
        assert_eq!(cls.invariants, vec![big(3)]);
    }

    #[test]
    fn trivial_class_group() {
        let k = NumberField::make(IntPoly::from_i64(&[1, 0, 1])).unwrap();
        let cls = class_group(&k, 3).unwrap();
        assert_eq!(cls.h, big(1));
    }

    #[test]
    fn unit_group_rank_zero() {
        let k = NumberField::make(IntPoly::from_i64(&[3, 0, 1])).unwrap();
        let cls = class_group(&k, 5).unwrap();
        let u = unit_group(&k, &cls, 5).unwrap();
        assert_eq!(u.torsion_order, 6);
        assert!(u.fundamental.is_empty());
    }

    #[test]
    fn unit_group_rank_one_quartic() {
        // Q(zeta_5): unit rank 1, torsion order 10; a fundamental unit is
        // (1+sqrt(5))/2 up to torsion.
        let k = NumberField::make(IntPoly::from_i64(&[1, 1, 1, 1, 1])).unwrap();
        let cls = class_group(&k, 5).unwrap();
        assert_eq!(cls.h, big(1));
        let u = unit_group(&k, &cls, 5).unwrap();
        assert_eq!(u.torsion_order, 10);
        assert_eq!(u.fundamental.len(), 1);
        let fu = &u.fundamental[0];
        assert!(is_unit(&k, fu));
        // Its regulator-scale log should match log((1+sqrt 5)/2).
        let emb = Embeddings::new(&k);
        let l = log_norm(&emb, &k, fu).sqrt();
        let golden = ((1.0 + 5.0f64.sqrt()) / 2.0f64).ln();
        // Log vector is (2 ln phi, -2 ln phi): norm sqrt(2) * 2 ln phi.
        let expected = 2.0f64.sqrt() * 2.0 * golden;
        assert!(
            (l - expected).abs() < 1e-4,
            "unexpected regulator scale: {} vs {}",
            l,
            expected
        );
    }
}
