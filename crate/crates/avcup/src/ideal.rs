//! Fractional ideals of the maximal order, prime splitting and divisors.
//!
//! An ideal is stored as a full-rank row lattice in Hermite normal form
//! with respect to the integral basis, over a positive denominator.
//! Rational primes split through Kummer-Dedekind when the prime does not
//! divide the index, and through direct decomposition of the finite
//! algebra O/pO otherwise.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::big;
use crate::error::{Error, Result};
use crate::fpoly::PolyModP;
use crate::matz::{self, Mat};
use crate::nf::{FieldElement, NumberField};

/// A nonzero fractional ideal: (1/den) times the row lattice of `num`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalIdeal {
    pub num: Mat,
    pub den: BigInt,
}

/// A prime ideal above the rational prime `p`, with its two-generator
/// form, ramification index and residue degree.
#[derive(Debug, Clone)]
pub struct PrimeIdeal {
    pub p: BigInt,
    pub gen2: FieldElement,
    pub e: u32,
    pub f_deg: u32,
    pub ideal: FractionalIdeal,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.ideal == other.ideal
    }
}
impl Eq for PrimeIdeal {}

/// A divisor: formal Z-linear combination of prime ideals.
pub type Divisor = Vec<(PrimeIdeal, i64)>;

impl NumberField {
    fn id_normalize(&self, num: Mat, den: BigInt) -> FractionalIdeal {
        let mut h = matz::hnf(&num);
        assert_eq!(h.rows, self.degree, "ideal lattice must have full rank");
        let mut g = den.abs();
        for i in 0..h.rows {
            for j in 0..h.cols {
                g = g.gcd(&h[(i, j)]);
            }
        }
        let mut d = den.abs();
        if !g.is_one() && !g.is_zero() {
            for i in 0..h.rows {
                for j in 0..h.cols {
                    let t = &h[(i, j)] / &g;
                    h[(i, j)] = t;
                }
            }
            d /= g;
        }
        FractionalIdeal { num: h, den: d }
    }

    pub fn unit_ideal(&self) -> FractionalIdeal {
        FractionalIdeal {
            num: Mat::identity(self.degree),
            den: BigInt::one(),
        }
    }

    /// The ideal generated by the given elements.
    pub fn ideal_from_elements(&self, gens: &[FieldElement]) -> Result<FractionalIdeal> {
        let nonzero: Vec<&FieldElement> = gens.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        let mut den = BigInt::one();
        for g in &nonzero {
            den = den.lcm(&g.den);
        }
        let mut rows = Vec::with_capacity(nonzero.len() * self.degree);
        for g in &nonzero {
            let r = self.rep_mat(g);
            let s = &den / &g.den;
            for i in 0..self.degree {
                rows.push((0..self.degree).map(|j| &r[(i, j)] * &s).collect());
            }
        }
        Ok(self.id_normalize(Mat::from_rows(rows), den))
    }

    pub fn principal_ideal(&self, x: &FieldElement) -> Result<FractionalIdeal> {
        self.ideal_from_elements(std::slice::from_ref(x))
    }

    /// Build an ideal from an HNF numerator and denominator, checking that
    /// the lattice really is a module over the maximal order.
    pub fn ideal_from_hnf(&self, num: Mat, den: BigInt) -> Result<FractionalIdeal> {
        if den.is_zero() || num.rows != self.degree || num.cols != self.degree {
            return Err(Error::Parse("bad ideal matrix shape".into()));
        }
        if num.det().is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let id = self.id_normalize(num, den);
        for i in 0..self.degree {
            let r = self.elt(id.num.row_vec(i), BigInt::one());
            for b in 0..self.degree {
                let mut bv = vec![BigInt::zero(); self.degree];
                bv[b] = BigInt::one();
                let be = self.elt(bv, BigInt::one());
                let prod = self.mul(&r, &be);
                assert!(prod.den.is_one());
                if !matz::in_hnf_lattice(&id.num, &prod.coords) {
                    return Err(Error::Parse(
                        "lattice is not a module over the maximal order".into(),
                    ));
                }
            }
        }
        Ok(id)
    }

    pub fn ideal_mul(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        let m = self.degree;
        let mut rows = Vec::with_capacity(m * m);
        for i in 0..m {
            let x = self.elt(a.num.row_vec(i), BigInt::one());
            let r = self.rep_mat(&x);
            for j in 0..m {
                let y = b.num.row(j);
                // coords of x * y = y * rep_mat(x)
                rows.push(Mat::vec_mul(y, &r));
            }
        }
        self.id_normalize(Mat::from_rows(rows), &a.den * &b.den)
    }

    /// The inverse fractional ideal {x : x I is integral}.
    pub fn ideal_inverse(&self, a: &FractionalIdeal) -> FractionalIdeal {
        let m = self.degree;
        let mut lats = Vec::with_capacity(m);
        for i in 0..m {
            let r = self.elt(a.num.row_vec(i), BigInt::one());
            let rm = self.rep_mat(&r);
            let rm_rat: Vec<Vec<BigRational>> = (0..m)
                .map(|x| {
                    (0..m)
                        .map(|y| BigRational::from_integer(rm[(x, y)].clone()))
                        .collect()
                })
                .collect();
            let inv = matz::invert_rat(&rm_rat).expect("nonzero row");
            // Lattice a.den * Z^m * rm^{-1}.
            let rows: Vec<Vec<BigRational>> = (0..m)
                .map(|x| {
                    (0..m)
                        .map(|y| &inv[x][y] * BigRational::from_integer(a.den.clone()))
                        .collect()
                })
                .collect();
            let mut den = BigInt::one();
            for row in &rows {
                for v in row {
                    den = den.lcm(v.denom());
                }
            }
            let int_rows: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|row| row.iter().map(|v| v.numer() * (&den / v.denom())).collect())
                .collect();
            lats.push((Mat::from_rows(int_rows), den));
        }
        let (num, den) = matz::rational_lattice_intersection(&lats);
        self.id_normalize(num, den)
    }

    pub fn ideal_quot(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        self.ideal_mul(a, &self.ideal_inverse(b))
    }

    pub fn ideal_pow(&self, a: &FractionalIdeal, e: i64) -> FractionalIdeal {
        let base = if e < 0 {
            self.ideal_inverse(a)
        } else {
            a.clone()
        };
        let mut k = e.unsigned_abs();
        let mut acc = self.unit_ideal();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.ideal_mul(&acc, &sq);
            }
            sq = self.ideal_mul(&sq, &sq);
            k >>= 1;
        }
        acc
    }

    pub fn ideal_sum(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        let den = a.den.lcm(&b.den);
        let sa = &den / &a.den;
        let sb = &den / &b.den;
        let mut rows = Vec::with_capacity(2 * self.degree);
        for i in 0..self.degree {
            rows.push((0..self.degree).map(|j| &a.num[(i, j)] * &sa).collect());
        }
        for i in 0..self.degree {
            rows.push((0..self.degree).map(|j| &b.num[(i, j)] * &sb).collect());
        }
        self.id_normalize(Mat::from_rows(rows), den)
    }

    pub fn ideal_norm(&self, a: &FractionalIdeal) -> BigRational {
        BigRational::new(
            a.num.det().abs(),
            a.den.pow(self.degree as u32),
        )
    }

    pub fn ideal_is_integral(&self, a: &FractionalIdeal) -> bool {
        // Normalized form: integral iff den = 1.
        a.den.is_one()
    }

    pub fn ideal_contains(&self, a: &FractionalIdeal, x: &FieldElement) -> bool {
        if x.is_zero() {
            return true;
        }
        // x in num/den  <=>  den*x.coords in x.den * num.
        let v: Vec<BigInt> = x.coords.iter().map(|c| c * &a.den).collect();
        let mut scaled = a.num.clone();
        for i in 0..scaled.rows {
            for j in 0..scaled.cols {
                scaled[(i, j)] = &a.num[(i, j)] * &x.den;
            }
        }
        matz::in_hnf_lattice(&scaled, &v)
    }

    pub fn ideal_is_unit(&self, a: &FractionalIdeal) -> bool {
        a == &self.unit_ideal()
    }

    // -- prime splitting -----------------------------------------------------

    /// The prime ideals above the rational prime p, ordered by residue
    /// degree and then lattice.
    pub fn factor_rational_prime(&self, p: &BigInt) -> Result<Vec<PrimeIdeal>> {
        let mut out = if (self.index.mod_floor(p)).is_zero() {
            self.split_via_algebra(p)?
        } else {
            self.split_kummer(p)?
        };
        out.sort_by(|a, b| {
            a.f_deg
                .cmp(&b.f_deg)
                .then_with(|| a.ideal.num.data.cmp(&b.ideal.num.data))
        });
        Ok(out)
    }

    fn split_kummer(&self, p: &BigInt) -> Result<Vec<PrimeIdeal>> {
        let fp = self.poly.mod_p(p);
        let mut out = Vec::new();
        for (g, e) in fp.factor(17) {
            let gen2 = self.eval_poly(&g.symmetric_lift());
            let p_ideal = self.principal_ideal(&self.from_int(p))?;
            // For an inert prime the lift of g can be f itself, so g(theta)
            // vanishes and the prime is just pO.
            let ideal = if gen2.is_zero() {
                p_ideal
            } else {
                self.ideal_sum(&p_ideal, &self.principal_ideal(&gen2)?)
            };
            out.push(PrimeIdeal {
                p: p.clone(),
                gen2,
                e,
                f_deg: g.degree() as u32,
                ideal,
            });
        }
        Ok(out)
    }

    /// Decompose O/pO directly: nilradical by Frobenius kernel, then split
    /// the semisimple quotient into fields with separating elements.
    fn split_via_algebra(&self, p: &BigInt) -> Result<Vec<PrimeIdeal>> {
        let m = self.degree;
        // Frobenius matrix on O/pO.
        let mut e_pow = 1u32;
        let mut pe = p.clone();
        while pe < big(m as i64) {
            pe *= p;
            e_pow += 1;
        }
        let frob = |v: &[BigInt]| -> Vec<BigInt> {
            let mut x = v.to_vec();
            for _ in 0..e_pow {
                let mut acc = self.one_coords.clone();
                let mut base = x.clone();
                let mut exp = p.clone();
                while !exp.is_zero() {
                    if exp.is_odd() {
                        acc = self.alg_mul_mod_p(&acc, &base, p);
                    }
                    base = self.alg_mul_mod_p(&base, &base, p);
                    exp >>= 1;
                }
                x = acc;
            }
            x
        };
        let frows: Vec<Vec<BigInt>> = (0..m)
            .map(|i| {
                let mut v = vec![BigInt::zero(); m];
                v[i] = BigInt::one();
                frob(&v)
            })
            .collect();
        let nil = matz::left_kernel_mod_p(&Mat::from_rows(frows), p);
        // Components: ideals of O/pO containing the nilradical whose
        // quotients are fields.
        let mut start = EchelonFp::new(p.clone(), m);
        for v in nil {
            start.insert(v);
        }
        // Close the nilradical span under multiplication by basis vectors.
        self.close_ideal(&mut start, p);
        let mut fields = Vec::new();
        let mut stack = vec![start];
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1dea);
        while let Some(comp) = stack.pop() {
            let dim = m - comp.rank();
            assert!(dim > 0);
            let mut split_done = false;
            for cand in candidate_elements(m, p, &mut rng) {
                let mu = self.min_poly_in_quotient(&comp, &cand, p);
                let facs = mu.factor(11);
                if facs.len() == 1 && facs[0].1 == 1 {
                    if facs[0].0.degree() == dim {
                        fields.push(comp);
                        split_done = true;
                        break;
                    }
                    continue; // does not generate; try another element
                }
                // Split by each irreducible factor.
                for (h, mult) in &facs {
                    let mut hp = h.clone();
                    for _ in 1..*mult {
                        hp = hp.mul(h);
                    }
                    let g = self.eval_polymod_at(&hp, &cand, p);
                    let mut sub = comp.clone();
                    sub.insert(g.clone());
                    for i in 0..m {
                        let mut bv = vec![BigInt::zero(); m];
                        bv[i] = BigInt::one();
                        sub.insert(self.alg_mul_mod_p(&g, &bv, p));
                    }
                    self.close_ideal(&mut sub, p);
                    stack.push(sub);
                }
                split_done = true;
                break;
            }
            if !split_done {
                return Err(Error::SearchExhausted(format!(
                    "splitting O/{}O",
                    p
                )));
            }
        }
        // Build the prime ideals.
        let mut out = Vec::new();
        for comp in fields {
            let f_deg = (m - comp.rank()) as u32;
            let mut rows: Vec<Vec<BigInt>> = comp.rows().to_vec();
            for i in 0..m {
                let mut v = vec![BigInt::zero(); m];
                v[i] = p.clone();
                rows.push(v);
            }
            let ideal = self.id_normalize(Mat::from_rows(rows), BigInt::one());
            let e = self.valuation_in_prime_lattice(p, &ideal);
            let gen2 = self.find_second_generator(p, &ideal)?;
            out.push(PrimeIdeal {
                p: p.clone(),
                gen2,
                e,
                f_deg,
                ideal,
            });
        }
        Ok(out)
    }

    /// Multiplication in O/pO on coordinate vectors.
    fn alg_mul_mod_p(&self, x: &[BigInt], y: &[BigInt], p: &BigInt) -> Vec<BigInt> {
        let m = self.degree;
        let mut z = vec![BigInt::zero(); m];
        for i in 0..m {
            if x[i].is_zero() {
                continue;
            }
            let ti = &self.mult_table[i];
            for j in 0..m {
                if y[j].is_zero() {
                    continue;
                }
                let c = (&x[i] * &y[j]).mod_floor(p);
                for k in 0..m {
                    z[k] += &c * &ti[(j, k)];
                }
            }
        }
        for zk in z.iter_mut() {
            *zk = zk.mod_floor(p);
        }
        z
    }

    fn close_ideal(&self, ech: &mut EchelonFp, p: &BigInt) {
        loop {
            let snapshot: Vec<Vec<BigInt>> = ech.rows().to_vec();
            let before = ech.rank();
            for r in &snapshot {
                for i in 0..self.degree {
                    let mut bv = vec![BigInt::zero(); self.degree];
                    bv[i] = BigInt::one();
                    ech.insert(self.alg_mul_mod_p(r, &bv, p));
                }
            }
            if ech.rank() == before {
                break;
            }
        }
    }

    /// Minimal polynomial of `a` acting on (O/pO)/I.
    fn min_poly_in_quotient(&self, ideal: &EchelonFp, a: &[BigInt], p: &BigInt) -> PolyModP {
        let m = self.degree;
        // Augmented echelon: pivots only in the first m (quotient)
        // coordinates; the tail carries the power-combination history.
        let mut span = EchelonFp::new(p.clone(), m);
        let mut cur = self.one_coords.clone();
        for k in 0..=m {
            let red = ideal.reduce(&cur);
            let mut aug = red.clone();
            let mut hist = vec![BigInt::zero(); m + 2];
            hist[k] = BigInt::one();
            aug.extend(hist);
            let leftover = span.insert(aug);
            if let Some(v) = leftover {
                // Reduced to zero on the quotient part: if the quotient
                // coordinates vanished, the history gives the min poly.
                if v[..m].iter().all(|x| x.is_zero()) {
                    return PolyModP::new(p.clone(), v[m..].to_vec());
                }
            }
            cur = self.alg_mul_mod_p(&cur, a, p);
        }
        unreachable!("minimal polynomial of degree <= dim");
    }

    fn eval_polymod_at(&self, h: &PolyModP, a: &[BigInt], p: &BigInt) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.degree];
        for c in h.coeffs.iter().rev() {
            acc = self.alg_mul_mod_p(&acc, a, p);
            for (k, oc) in self.one_coords.iter().enumerate() {
                acc[k] = (&acc[k] + c * oc).mod_floor(p);
            }
        }
        acc
    }

    fn valuation_in_prime_lattice(&self, p: &BigInt, prime: &FractionalIdeal) -> u32 {
        let p_ideal = self
            .principal_ideal(&self.from_int(p))
            .expect("nonzero prime");
        let inv = self.ideal_inverse(prime);
        let mut v = 0u32;
        let mut j = p_ideal;
        loop {
            let next = self.ideal_mul(&j, &inv);
            if self.ideal_is_integral(&next) {
                j = next;
                v += 1;
            } else {
                return v;
            }
        }
    }

    fn find_second_generator(
        &self,
        p: &BigInt,
        prime: &FractionalIdeal,
    ) -> Result<FieldElement> {
        let m = self.degree;
        let p_ideal = self.principal_ideal(&self.from_int(p))?;
        let check = |cand: &FieldElement| -> bool {
            if cand.is_zero() {
                return false;
            }
            let gen_ideal = self
                .principal_ideal(cand)
                .expect("nonzero candidate");
            &self.ideal_sum(&p_ideal, &gen_ideal) == prime
        };
        for i in 0..m {
            let cand = self.elt(prime.num.row_vec(i), BigInt::one());
            if check(&cand) {
                return Ok(cand);
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                let cand = self.elt(
                    prime
                        .num
                        .row(i)
                        .iter()
                        .zip(prime.num.row(j))
                        .map(|(a, b)| a + b)
                        .collect(),
                    BigInt::one(),
                );
                if check(&cand) {
                    return Ok(cand);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x2ece_55ed);
        for _ in 0..500 {
            let coeffs: Vec<BigInt> = (0..m)
                .map(|_| rng.gen_bigint_range(&BigInt::zero(), &(p * 2)))
                .collect();
            let mut acc = vec![BigInt::zero(); m];
            for (i, c) in coeffs.iter().enumerate() {
                for k in 0..m {
                    acc[k] += c * &prime.num[(i, k)];
                }
            }
            let cand = self.elt(acc, BigInt::one());
            if check(&cand) {
                return Ok(cand);
            }
        }
        Err(Error::SearchExhausted("two-generator form".into()))
    }

    // -- divisors ------------------------------------------------------------

    /// Valuation of a fractional ideal at a prime.
    pub fn valuation(&self, a: &FractionalIdeal, prime: &PrimeIdeal) -> i64 {
        // Split as (numerator lattice) / (den), valuations add.
        let den_val = {
            let mut d = a.den.clone();
            let mut v = 0i64;
            while (d.mod_floor(&prime.p)).is_zero() {
                d /= &prime.p;
                v += 1;
            }
            v * prime.e as i64
        };
        let num_ideal = FractionalIdeal {
            num: a.num.clone(),
            den: BigInt::one(),
        };
        let inv = self.ideal_inverse(&prime.ideal);
        let mut v = 0i64;
        let mut j = num_ideal;
        loop {
            let next = self.ideal_mul(&j, &inv);
            if self.ideal_is_integral(&next) {
                j = next;
                v += 1;
            } else {
                break;
            }
        }
        v - den_val
    }

    pub fn element_valuation(&self, x: &FieldElement, prime: &PrimeIdeal) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.valuation(&self.principal_ideal(x)?, prime))
    }

    /// Factor a fractional ideal into primes with nonzero exponents.
    pub fn factor_ideal(&self, a: &FractionalIdeal) -> Result<Divisor> {
        let mut rational_primes: Vec<BigInt> = Vec::new();
        let num_norm = a.num.det().abs();
        for p in crate::arith::prime_divisors(&num_norm)? {
            rational_primes.push(p);
        }
        if !a.den.is_one() {
            for p in crate::arith::prime_divisors(&a.den)? {
                if !rational_primes.contains(&p) {
                    rational_primes.push(p);
                }
            }
        }
        rational_primes.sort();
        let mut out: Divisor = Vec::new();
        for p in rational_primes {
            for prime in self.factor_rational_prime(&p)? {
                let v = self.valuation(a, &prime);
                if v != 0 {
                    out.push((prime, v));
                }
            }
        }
        Ok(out)
    }

    /// The divisor of a nonzero element.
    pub fn principal_divisor(&self, x: &FieldElement) -> Result<Divisor> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        self.factor_ideal(&self.principal_ideal(x)?)
    }

    pub fn divisor_to_ideal(&self, d: &Divisor) -> FractionalIdeal {
        let mut acc = self.unit_ideal();
        for (p, v) in d {
            acc = self.ideal_mul(&acc, &self.ideal_pow(&p.ideal, *v));
        }
        acc
    }

    /// The n-th root of a fractional ideal, when every valuation is
    /// divisible by n.
    pub fn nth_root_ideal(&self, a: &FractionalIdeal, n: u64) -> Result<FractionalIdeal> {
        if n == 0 {
            return Err(Error::Parse("zeroth root".into()));
        }
        let div = self.factor_ideal(a)?;
        let mut acc = self.unit_ideal();
        for (p, v) in &div {
            if v.rem_euclid(n as i64) != 0 {
                return Err(Error::NotAnNthPower(n));
            }
            acc = self.ideal_mul(&acc, &self.ideal_pow(&p.ideal, v / n as i64));
        }
        Ok(acc)
    }
}

/// Candidate elements of O/pO for the algebra-splitting search:
/// basis vectors, pairwise sums, then seeded random vectors.
fn candidate_elements(
    m: usize,
    p: &BigInt,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for i in 0..m {
        let mut v = vec![BigInt::zero(); m];
        v[i] = BigInt::one();
        out.push(v);
    }
    for i in 0..m {
        for j in i + 1..m {
            let mut v = vec![BigInt::zero(); m];
            v[i] = BigInt::one();
            v[j] = BigInt::one();
            out.push(v);
        }
    }
    for _ in 0..60 {
        out.push(
            (0..m)
                .map(|_| rng.gen_bigint_range(&BigInt::zero(), p))
                .collect(),
        );
    }
    out
}

/// Row echelon form over F_p with incremental insertion.
#[derive(Debug, Clone)]
struct EchelonFp {
    p: BigInt,
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl EchelonFp {
    fn new(p: BigInt, cols: usize) -> Self {
        EchelonFp {
            p,
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Reduce `v` against the echelon rows (first `cols` coordinates only
    /// drive the pivots; vectors may carry extra columns).
    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = v.iter().map(|x| x.mod_floor(&self.p)).collect();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            if v[piv].is_zero() {
                continue;
            }
            let c = v[piv].clone();
            for (j, rj) in row.iter().enumerate() {
                if j < v.len() {
                    v[j] = (&v[j] - &c * rj).mod_floor(&self.p);
                }
            }
        }
        v
    }

    /// Insert `v`; returns Some(reduced vector) if it reduced to zero in
    /// the pivot columns (i.e. was dependent), None if a new row was added.
    fn insert(&mut self, v: Vec<BigInt>) -> Option<Vec<BigInt>> {
        let red = self.reduce(&v);
        match (0..self.cols.min(red.len())).find(|&j| !red[j].is_zero()) {
            None => Some(red),
            Some(piv) => {
                let inv = crate::arith::inv_mod(&red[piv], &self.p).expect("p prime");
                let row: Vec<BigInt> = red.iter().map(|x| (x * &inv).mod_floor(&self.p)).collect();
                // Keep earlier rows reduced against the new pivot.
                for (r, &_pv) in self.rows.iter_mut().zip(&self.pivots) {
                    if r.len() > piv && !r[piv].is_zero() {
                        let c = r[piv].clone();
                        for (j, nj) in row.iter().enumerate() {
                            if j < r.len() {
                                r[j] = (&r[j] - &c * nj).mod_floor(&self.p);
                            }
                        }
                    }
                }
                self.rows.push(row);
                self.pivots.push(piv);
                None
            }
        }
    }
}
