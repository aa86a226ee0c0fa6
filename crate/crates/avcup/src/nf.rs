//! Number fields K = Q[x]/(f) with exact arithmetic in the maximal order.
//!
//! A field is built from a monic irreducible polynomial; the ring of
//! integers is found by the round-2 algorithm (Frobenius radical and
//! idealizer enlargement at each prime whose square divides the
//! polynomial discriminant). Elements carry integer coordinates with
//! respect to the integral basis plus a denominator, so all arithmetic
//! stays exact. Signatures come from Sturm sequences and roots of unity
//! from cyclotomic root-finding inside K.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{big, factor};
use crate::error::{Error, Result};
use crate::matz::{self, Mat};
use crate::poly::{cyclotomic, IntPoly, RatPoly};

/// A field element: integer coordinates w.r.t. the integral basis over a
/// positive denominator, in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<BigInt>,
    pub den: BigInt,
}

impl FieldElement {
    fn normalized(mut coords: Vec<BigInt>, mut den: BigInt) -> FieldElement {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for c in coords.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &coords {
            g = g.gcd(c);
        }
        if !g.is_one() && !g.is_zero() {
            den /= &g;
            for c in coords.iter_mut() {
                *c /= &g;
            }
        }
        FieldElement { coords, den }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }
}

/// Polynomial with coefficients in K, low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPoly {
    pub coeffs: Vec<FieldElement>,
}

/// A number field with a precomputed integral basis and multiplication
/// table. All element operations go through methods on this struct.
#[derive(Debug, Clone)]
pub struct NumberField {
    pub poly: IntPoly,
    pub degree: usize,
    /// Rows are the integral basis in power-basis coordinates, over `basis_den`.
    pub basis_num: Mat,
    pub basis_den: BigInt,
    /// Inverse of basis_num/basis_den: converts power coordinates to
    /// integral-basis coordinates.
    power_to_int: Vec<Vec<BigRational>>,
    /// mult_table[i] row j, col k: b_i * b_j = sum_k T b_k (integers).
    pub mult_table: Vec<Mat>,
    pub disc: BigInt,
    /// Index of Z[theta] in the maximal order.
    pub index: BigInt,
    /// (r1, r2): real embeddings and conjugate pairs.
    pub signature: (usize, usize),
    pub one_coords: Vec<BigInt>,
}

// ---------------------------------------------------------------------------
// Power-basis helpers (rational coordinates modulo f)
// ---------------------------------------------------------------------------

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(big(n))
}

fn rat_b(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Multiply two power-coordinate vectors modulo the monic polynomial f.
fn power_mul(f: &IntPoly, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let m = f.degree();
    let mut c = vec![BigRational::zero(); 2 * m - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            c[i + j] = &c[i + j] + &(x * y);
        }
    }
    for k in (m..c.len()).rev() {
        if c[k].is_zero() {
            continue;
        }
        let top = c[k].clone();
        c[k] = BigRational::zero();
        for j in 0..m {
            let t = &top * rat_b(&f.coeffs[j]);
            c[k - m + j] = &c[k - m + j] - &t;
        }
    }
    c.truncate(m);
    c
}

/// Collect a rational matrix into (integer matrix, common denominator).
fn rat_rows_to_int(rows: &[Vec<BigRational>]) -> (Mat, BigInt) {
    let mut den = BigInt::one();
    for r in rows {
        for x in r {
            den = den.lcm(x.denom());
        }
    }
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.numer() * (&den / x.denom()))
                .collect()
        })
        .collect();
    (Mat::from_rows(int_rows), den)
}

fn normalize_lattice(num: Mat, den: BigInt) -> (Mat, BigInt) {
    let h = matz::hnf(&num);
    let mut g = den.clone();
    for i in 0..h.rows {
        for j in 0..h.cols {
            g = g.gcd(&h[(i, j)]);
        }
    }
    if g.is_one() || g.is_zero() {
        return (h, den);
    }
    let mut out = h.clone();
    for i in 0..out.rows {
        for j in 0..out.cols {
            out[(i, j)] = &h[(i, j)] / &g;
        }
    }
    (out, den / g)
}

// ---------------------------------------------------------------------------
// Maximal order (round 2)
// ---------------------------------------------------------------------------

/// Multiplication table of an order given by basis rows `w`/`d` in power
/// coordinates: t[i][j] = integer coordinates of w_i * w_j in the order.
fn order_mult_table(f: &IntPoly, w: &Mat, d: &BigInt) -> Option<Vec<Vec<Vec<BigInt>>>> {
    let m = f.degree();
    let rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| &rat_b(&w[(i, j)]) / rat_b(d))
                .collect()
        })
        .collect();
    let inv = matz::invert_rat(&rows)?;
    let mut table = vec![vec![Vec::new(); m]; m];
    for i in 0..m {
        for j in 0..=i {
            let prod = power_mul(f, &rows[i], &rows[j]);
            // Coordinates of the product in the order basis.
            let mut coords = Vec::with_capacity(m);
            for k in 0..m {
                let mut acc = BigRational::zero();
                for (l, p) in prod.iter().enumerate() {
                    acc = acc + p * &inv[l][k];
                }
                if !acc.is_integer() {
                    return None;
                }
                coords.push(acc.to_integer());
            }
            table[i][j] = coords.clone();
            table[j][i] = coords;
        }
    }
    Some(table)
}

fn table_mul(
    t: &[Vec<Vec<BigInt>>],
    x: &[BigInt],
    y: &[BigInt],
    p: &BigInt,
) -> Vec<BigInt> {
    let m = x.len();
    let mut z = vec![BigInt::zero(); m];
    for i in 0..m {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..m {
            if y[j].is_zero() {
                continue;
            }
            let c = (&x[i] * &y[j]).mod_floor(p);
            for k in 0..m {
                z[k] += &c * &t[i][j][k];
            }
        }
    }
    for zk in z.iter_mut() {
        *zk = zk.mod_floor(p);
    }
    z
}

/// One round of radical/idealizer enlargement at p. Returns the new order
/// if it is strictly larger.
fn enlarge_at_p(f: &IntPoly, w: &Mat, d: &BigInt, p: &BigInt) -> Option<(Mat, BigInt)> {
    let m = f.degree();
    let t = order_mult_table(f, w, d).expect("order is closed under multiplication");
    // Frobenius x -> x^(p^e) on O/pO, e minimal with p^e >= m.
    let mut e = 1u32;
    let mut pe = p.clone();
    while pe < big(m as i64) {
        pe *= p;
        e += 1;
    }
    let one_coords = one_in_order(f, w, d);
    let frob = |v: &[BigInt]| -> Vec<BigInt> {
        let mut x = v.to_vec();
        for _ in 0..e {
            // x -> x^p by square and multiply.
            let mut acc = one_coords.clone();
            let mut base = x.clone();
            let mut exp = p.clone();
            while !exp.is_zero() {
                if exp.is_odd() {
                    acc = table_mul(&t, &acc, &base, p);
                }
                base = table_mul(&t, &base, &base, p);
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
    let fmat = Mat::from_rows(frows);
    let kernel = matz::left_kernel_mod_p(&fmat, p);
    // Radical lattice in order coordinates.
    let mut rad_rows: Vec<Vec<BigInt>> = kernel;
    for i in 0..m {
        let mut v = vec![BigInt::zero(); m];
        v[i] = p.clone();
        rad_rows.push(v);
    }
    let rad = matz::hnf(&Mat::from_rows(rad_rows));
    // Idealizer of the radical: intersect R * M_r^{-1} over radical
    // generators r, together with (1/p) O.
    let mut acc: Option<(Mat, BigInt)> = None;
    let mut meet = |num: Mat, den: BigInt| {
        acc = Some(match acc.take() {
            None => normalize_lattice(num, den),
            Some((anum, aden)) => {
                let l = den.lcm(&aden);
                let s1 = scale_mat(&anum, &(&l / &aden));
                let s2 = scale_mat(&num, &(&l / &den));
                normalize_lattice(matz::lattice_intersection(&s1, &s2), l)
            }
        });
    };
    // (1/p) O in order coordinates is (1/p) Z^m.
    meet(Mat::identity(m), p.clone());
    for ridx in 0..rad.rows {
        let r = rad.row_vec(ridx);
        // Multiplication-by-r matrix in order coordinates.
        let mut mr = Mat::zero(m, m);
        for i in 0..m {
            for k in 0..m {
                let mut s = BigInt::zero();
                for j in 0..m {
                    s += &r[j] * &t[j][i][k];
                }
                mr[(i, k)] = s;
            }
        }
        let mr_rat: Vec<Vec<BigRational>> = (0..m)
            .map(|i| (0..m).map(|j| rat_b(&mr[(i, j)])).collect())
            .collect();
        let inv = matz::invert_rat(&mr_rat).expect("nonzero element");
        let mut rows = Vec::with_capacity(rad.rows);
        for a in 0..rad.rows {
            let mut row = vec![BigRational::zero(); m];
            for b in 0..m {
                if rad[(a, b)].is_zero() {
                    continue;
                }
                let c = rat_b(&rad[(a, b)]);
                for j in 0..m {
                    row[j] = &row[j] + &(&c * &inv[b][j]);
                }
            }
            rows.push(row);
        }
        let (num, den) = rat_rows_to_int(&rows);
        meet(num, den);
    }
    let (onum, oden) = acc.unwrap();
    // Strictly larger than O (= identity lattice)?
    let (cnum, cden) = normalize_lattice(onum, oden);
    if cden.is_one() {
        return None; // idealizer equals the order
    }
    // New order in power coordinates: rows (cnum * w) / (cden * d).
    let prod = cnum.mul(w);
    Some(normalize_lattice(prod, &cden * d))
}

fn scale_mat(m: &Mat, k: &BigInt) -> Mat {
    let mut out = m.clone();
    for i in 0..m.rows {
        for j in 0..m.cols {
            out[(i, j)] = &m[(i, j)] * k;
        }
    }
    out
}

/// Coordinates of 1 in the order basis `w`/`d`.
fn one_in_order(f: &IntPoly, w: &Mat, d: &BigInt) -> Vec<BigInt> {
    let m = f.degree();
    let rows: Vec<Vec<BigRational>> = (0..m)
        .map(|i| (0..m).map(|j| &rat_b(&w[(i, j)]) / rat_b(d)).collect())
        .collect();
    let inv = matz::invert_rat(&rows).expect("basis");
    let mut out = Vec::with_capacity(m);
    for k in 0..m {
        let v = inv[0][k].clone();
        assert!(v.is_integer(), "1 lies in the order");
        out.push(v.to_integer());
    }
    out
}

impl NumberField {
    /// Build K = Q[x]/(poly) with its maximal order, factoring the
    /// polynomial discriminant to find the primes needing enlargement.
    pub fn make(poly: IntPoly) -> Result<NumberField> {
        let disc = poly_disc_checked(&poly)?;
        let primes: Vec<BigInt> = factor(&disc)?
            .into_iter()
            .filter(|(_, k)| *k >= 2)
            .map(|(p, _)| p)
            .collect();
        NumberField::make_with_primes(poly, &primes)
    }

    /// Build K maximalizing only at the given primes; correct whenever the
    /// list contains every prime whose square divides disc(poly).
    pub fn make_with_primes(poly: IntPoly, primes: &[BigInt]) -> Result<NumberField> {
        let m = poly.degree();
        NumberField::make_from_order_start(poly, Mat::identity(m), BigInt::one(), primes)
    }

    /// Build the field starting the round-2 enlargement from a known
    /// order (rows of `w` over `d`, power coordinates). Correct when
    /// `primes` covers every prime whose square divides the discriminant
    /// of that starting order.
    pub fn make_from_order_start(
        poly: IntPoly,
        start_num: Mat,
        start_den: BigInt,
        primes: &[BigInt],
    ) -> Result<NumberField> {
        poly_disc_checked(&poly)?;
        let mut w = start_num;
        let mut d = start_den;
        for p in primes {
            loop {
                match enlarge_at_p(&poly, &w, &d, p) {
                    Some((nw, nd)) => {
                        w = nw;
                        d = nd;
                    }
                    None => break,
                }
            }
        }
        NumberField::from_order(poly, w, d)
    }

    /// Assemble the field data from a basis of the maximal order given in
    /// power coordinates (rows of `w` over `d`).
    pub fn from_order(poly: IntPoly, w: Mat, d: BigInt) -> Result<NumberField> {
        let m = poly.degree();
        let (w, d) = normalize_lattice(w, d);
        let det = w.det();
        if det.is_zero() {
            return Err(Error::Parse("basis matrix is singular".into()));
        }
        let index = {
            let dm = d.pow(m as u32);
            let (q, r) = dm.div_rem(&det.abs());
            if !r.is_zero() {
                return Err(Error::Parse("order does not contain Z[theta]".into()));
            }
            q
        };
        let disc_f = poly.discriminant();
        let disc = &disc_f / (&index * &index);
        let rows: Vec<Vec<BigRational>> = (0..m)
            .map(|i| (0..m).map(|j| &rat_b(&w[(i, j)]) / rat_b(&d)).collect())
            .collect();
        let power_to_int =
            matz::invert_rat(&rows).ok_or_else(|| Error::Parse("singular basis".into()))?;
        // Integer multiplication table.
        let t = order_mult_table(&poly, &w, &d)
            .ok_or_else(|| Error::Parse("basis does not span a ring".into()))?;
        let mult_table: Vec<Mat> = t
            .into_iter()
            .map(|ti| Mat::from_rows(ti))
            .collect();
        let one_coords = one_in_order(&poly, &w, &d);
        let r1 = poly.count_real_roots();
        let signature = (r1, (m - r1) / 2);
        Ok(NumberField {
            poly,
            degree: m,
            basis_num: w,
            basis_den: d,
            power_to_int,
            mult_table,
            disc,
            index,
            signature,
            one_coords,
        })
    }

    pub fn is_totally_imaginary(&self) -> bool {
        self.signature.0 == 0
    }

    // -- element constructors ------------------------------------------------

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![BigInt::zero(); self.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            coords: self.one_coords.clone(),
            den: BigInt::one(),
        }
    }

    pub fn from_int(&self, n: &BigInt) -> FieldElement {
        FieldElement::normalized(
            self.one_coords.iter().map(|c| c * n).collect(),
            BigInt::one(),
        )
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        self.from_int(&big(n))
    }

    pub fn from_rational(&self, q: &BigRational) -> FieldElement {
        FieldElement::normalized(
            self.one_coords.iter().map(|c| c * q.numer()).collect(),
            q.denom().clone(),
        )
    }

    /// The class of x (the power-basis generator).
    pub fn theta(&self) -> FieldElement {
        let mut v = vec![BigRational::zero(); self.degree];
        if self.degree > 1 {
            v[1] = BigRational::one();
        } else {
            // Degree one: theta is the rational root.
            v[0] = -rat_b(&self.poly.coeffs[0]);
        }
        self.from_power_coords(&v)
    }

    pub fn elt(&self, coords: Vec<BigInt>, den: BigInt) -> FieldElement {
        assert_eq!(coords.len(), self.degree);
        FieldElement::normalized(coords, den)
    }

    pub fn from_power_coords(&self, v: &[BigRational]) -> FieldElement {
        assert_eq!(v.len(), self.degree);
        let mut out = vec![BigRational::zero(); self.degree];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for k in 0..self.degree {
                out[k] = &out[k] + &(x * &self.power_to_int[i][k]);
            }
        }
        let mut den = BigInt::one();
        for x in &out {
            den = den.lcm(x.denom());
        }
        let coords = out
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        FieldElement::normalized(coords, den)
    }

    pub fn to_power_coords(&self, a: &FieldElement) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.degree];
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.degree {
                let t = rat_b(c) * &rat_b(&self.basis_num[(i, j)]);
                out[j] = &out[j] + &t;
            }
        }
        let d = rat_b(&a.den) * rat_b(&self.basis_den);
        out.into_iter().map(|x| x / &d).collect()
    }

    /// Evaluate an integer polynomial at theta.
    pub fn eval_poly(&self, g: &IntPoly) -> FieldElement {
        let th = self.theta();
        let mut acc = self.zero();
        for c in g.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, &th), &self.from_int(c));
        }
        acc
    }

    // -- arithmetic ----------------------------------------------------------

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let den = a.den.lcm(&b.den);
        let fa = &den / &a.den;
        let fb = &den / &b.den;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x * &fa + y * &fb)
            .collect();
        FieldElement::normalized(coords, den)
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement {
            coords: a.coords.iter().map(|c| -c).collect(),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.degree;
        let mut z = vec![BigInt::zero(); m];
        for i in 0..m {
            if a.coords[i].is_zero() {
                continue;
            }
            let ti = &self.mult_table[i];
            for j in 0..m {
                if b.coords[j].is_zero() {
                    continue;
                }
                let c = &a.coords[i] * &b.coords[j];
                for k in 0..m {
                    z[k] += &c * &ti[(j, k)];
                }
            }
        }
        FieldElement::normalized(z, &a.den * &b.den)
    }

    pub fn mul_int(&self, a: &FieldElement, n: &BigInt) -> FieldElement {
        FieldElement::normalized(a.coords.iter().map(|c| c * n).collect(), a.den.clone())
    }

    /// Integer matrix of multiplication by a (to be divided by a.den):
    /// row i holds the coordinates of a * b_i.
    pub fn rep_mat(&self, a: &FieldElement) -> Mat {
        let m = self.degree;
        let mut r = Mat::zero(m, m);
        for i in 0..m {
            for k in 0..m {
                let mut s = BigInt::zero();
                for j in 0..m {
                    if a.coords[j].is_zero() {
                        continue;
                    }
                    s += &a.coords[j] * &self.mult_table[j][(i, k)];
                }
                r[(i, k)] = s;
            }
        }
        r
    }

    pub fn norm(&self, a: &FieldElement) -> BigRational {
        let r = self.rep_mat(a);
        rat_b(&r.det()) / rat_b(&a.den.pow(self.degree as u32))
    }

    pub fn trace(&self, a: &FieldElement) -> BigRational {
        let r = self.rep_mat(a);
        let mut t = BigInt::zero();
        for i in 0..self.degree {
            t += &r[(i, i)];
        }
        rat_b(&t) / rat_b(&a.den)
    }

    pub fn invert(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = self.rep_mat(a);
        let m = self.degree;
        // Solve c * (R / den) = 1, i.e. (R^T) c^T = den * one.
        let rt: Vec<Vec<BigRational>> = (0..m)
            .map(|i| (0..m).map(|j| rat_b(&r[(j, i)])).collect())
            .collect();
        let rhs: Vec<BigRational> = self
            .one_coords
            .iter()
            .map(|c| rat_b(c) * rat_b(&a.den))
            .collect();
        let sol = matz::solve_rat(&rt, &rhs).ok_or(Error::DivisionByZero)?;
        let mut den = BigInt::one();
        for x in &sol {
            den = den.lcm(x.denom());
        }
        let coords = sol
            .iter()
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        Ok(FieldElement::normalized(coords, den))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.invert(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.invert(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Minimal polynomial of a over Q (monic).
    pub fn min_poly(&self, a: &FieldElement) -> RatPoly {
        let m = self.degree;
        let mut pows: Vec<Vec<BigRational>> = vec![self.to_power_coords(&self.one())];
        let mut cur = self.one();
        for k in 1..=m {
            cur = self.mul(&cur, a);
            pows.push(self.to_power_coords(&cur));
            // Left kernel of the (k+1) x m matrix of powers.
            let transpose: Vec<Vec<BigRational>> = (0..m)
                .map(|j| pows.iter().map(|row| row[j].clone()).collect())
                .collect();
            let ker = matz::kernel_rat(&transpose);
            if let Some(v) = ker.first() {
                // Normalize monic: top nonzero coefficient is index k.
                let lead = v[k].clone();
                assert!(!lead.is_zero());
                let coeffs = v.iter().map(|c| c / &lead).collect();
                return RatPoly::new(coeffs);
            }
        }
        unreachable!("element of degree > [K:Q]");
    }

    // -- polynomials over K --------------------------------------------------

    pub fn kp_new(&self, mut coeffs: Vec<FieldElement>) -> KPoly {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(self.zero());
        }
        KPoly { coeffs }
    }

    pub fn kp_zero(&self) -> KPoly {
        self.kp_new(vec![])
    }

    pub fn kp_degree(&self, g: &KPoly) -> usize {
        if self.kp_is_zero(g) {
            0
        } else {
            g.coeffs.len() - 1
        }
    }

    pub fn kp_is_zero(&self, g: &KPoly) -> bool {
        g.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn kp_add(&self, a: &KPoly, b: &KPoly) -> KPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let mut c = vec![self.zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            c[i] = self.add(&c[i], x);
        }
        for (i, y) in b.coeffs.iter().enumerate() {
            c[i] = self.add(&c[i], y);
        }
        self.kp_new(c)
    }

    pub fn kp_sub(&self, a: &KPoly, b: &KPoly) -> KPoly {
        let nb = KPoly {
            coeffs: b.coeffs.iter().map(|c| self.neg(c)).collect(),
        };
        self.kp_add(a, &nb)
    }

    pub fn kp_mul(&self, a: &KPoly, b: &KPoly) -> KPoly {
        if self.kp_is_zero(a) || self.kp_is_zero(b) {
            return self.kp_zero();
        }
        let mut c = vec![self.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] = self.add(&c[i + j], &self.mul(x, y));
            }
        }
        self.kp_new(c)
    }

    pub fn kp_scale(&self, a: &KPoly, k: &FieldElement) -> KPoly {
        self.kp_new(a.coeffs.iter().map(|c| self.mul(c, k)).collect())
    }

    pub fn kp_derivative(&self, a: &KPoly) -> KPoly {
        if a.coeffs.len() <= 1 {
            return self.kp_zero();
        }
        self.kp_new(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.mul_int(c, &big(i as i64)))
                .collect(),
        )
    }

    pub fn kp_divrem(&self, a: &KPoly, b: &KPoly) -> Result<(KPoly, KPoly)> {
        if self.kp_is_zero(b) {
            return Err(Error::DivisionByZero);
        }
        let d = self.kp_degree(b);
        let lead_inv = self.invert(b.coeffs.last().unwrap())?;
        let mut rem = a.coeffs.clone();
        if rem.len() <= d {
            return Ok((self.kp_zero(), a.clone()));
        }
        let mut quot = vec![self.zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = self.mul(&rem[i], &lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c.clone();
            for (j, bc) in b.coeffs.iter().enumerate() {
                let t = self.mul(bc, &c);
                rem[i - d + j] = self.sub(&rem[i - d + j], &t);
            }
        }
        Ok((self.kp_new(quot), self.kp_new(rem)))
    }

    /// Monic gcd over K.
    pub fn kp_gcd(&self, a: &KPoly, b: &KPoly) -> Result<KPoly> {
        let mut x = a.clone();
        let mut y = b.clone();
        while !self.kp_is_zero(&y) {
            let r = self.kp_divrem(&x, &y)?.1;
            x = y;
            y = r;
        }
        if self.kp_is_zero(&x) {
            return Ok(x);
        }
        let inv = self.invert(x.coeffs.last().unwrap())?;
        Ok(self.kp_scale(&x, &inv))
    }

    pub fn kp_eval(&self, g: &KPoly, x: &FieldElement) -> FieldElement {
        let mut acc = self.zero();
        for c in g.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    /// Lift a rational polynomial to K[x].
    pub fn kp_from_rat(&self, g: &RatPoly) -> KPoly {
        self.kp_new(g.coeffs.iter().map(|c| self.from_rational(c)).collect())
    }

    pub fn kp_from_int(&self, g: &IntPoly) -> KPoly {
        self.kp_new(g.coeffs.iter().map(|c| self.from_int(c)).collect())
    }

    // -- root finding --------------------------------------------------------

    /// All roots in K of a monic polynomial over K (Trager's method:
    /// shift by a multiple of theta until the norm polynomial is
    /// squarefree, factor it over Z, and read roots off the linear gcds).
    pub fn roots_in_field(&self, g: &KPoly) -> Result<Vec<FieldElement>> {
        if self.kp_is_zero(g) {
            return Err(Error::ZeroElement);
        }
        let deg = self.kp_degree(g);
        if deg == 0 {
            return Ok(vec![]);
        }
        // Make monic and squarefree.
        let lead_inv = self.invert(g.coeffs.last().unwrap())?;
        let g = self.kp_scale(g, &lead_inv);
        let sf = {
            let d = self.kp_gcd(&g, &self.kp_derivative(&g))?;
            if self.kp_degree(&d) > 0 {
                self.kp_divrem(&g, &d)?.0
            } else {
                g.clone()
            }
        };
        let deg = self.kp_degree(&sf);
        if deg == 0 {
            return Ok(vec![]);
        }
        let theta = self.theta();
        let mut roots = Vec::new();
        'shift: for s in shift_sequence() {
            let s_theta = self.mul_int(&theta, &big(s));
            // g_s(x) = sf(x + s*theta)
            let shift = self.kp_new(vec![s_theta.clone(), self.one()]);
            let mut gs = self.kp_zero();
            for c in sf.coeffs.iter().rev() {
                gs = self.kp_add(
                    &self.kp_mul(&gs, &shift),
                    &self.kp_new(vec![c.clone()]),
                );
            }
            // Norm polynomial by evaluation/interpolation.
            let dtot = deg * self.degree;
            let mut points = Vec::with_capacity(dtot + 1);
            let mut values = Vec::with_capacity(dtot + 1);
            for x0 in 0..=(dtot as i64) {
                let v = self.kp_eval(&gs, &self.from_i64(x0));
                points.push(rat(x0));
                values.push(self.norm(&v));
            }
            let n_poly = lagrange_interpolate(&points, &values);
            // Need squarefree norm for the gcd step to split correctly.
            let d = n_poly.gcd(&n_poly.derivative());
            if d.degree() > 0 {
                continue 'shift;
            }
            let n_int = match n_poly.to_int() {
                Some(p) => p,
                None => {
                    // Denominators can only come from non-integral input;
                    // scale them away and retry through the same machinery.
                    return Err(Error::Parse("norm polynomial not integral".into()));
                }
            };
            for (h, _) in n_int.factor_monic()? {
                if h.degree() > self.degree {
                    continue;
                }
                let hk = self.kp_from_int(&h);
                let gg = self.kp_gcd(&gs, &hk)?;
                if self.kp_degree(&gg) == 1 {
                    // Monic linear factor x + c: root of g_s is -c.
                    let y = self.neg(&gg.coeffs[0]);
                    roots.push(self.add(&y, &s_theta));
                }
            }
            break 'shift;
        }
        roots.sort_by(|a, b| (&a.den, &a.coords).cmp(&(&b.den, &b.coords)));
        roots.dedup();
        Ok(roots)
    }

    /// The group of roots of unity in K: (order w, a primitive generator).
    pub fn roots_of_unity(&self) -> Result<(u64, FieldElement)> {
        let m = self.degree as u64;
        let mut w = 2u64;
        // Only prime powers q with phi(q) dividing [K:Q] can contribute.
        let bound = 2 * m * m + 4;
        for q in 3..=bound {
            if !is_prime_power(q) {
                continue;
            }
            let phi = crate::arith::euler_phi(q);
            if phi > m || m % phi != 0 {
                continue;
            }
            let phi_q = self.kp_from_int(&cyclotomic(q));
            if !self.roots_in_field(&phi_q)?.is_empty() {
                w = lcm_u64(w, q);
            }
        }
        let gen = if w == 2 {
            self.from_i64(-1)
        } else {
            let roots = self.roots_in_field(&self.kp_from_int(&cyclotomic(w)))?;
            roots
                .into_iter()
                .next()
                .ok_or(Error::RootOfUnityMissing(w))?
        };
        Ok((w, gen))
    }

    /// A primitive n-th root of unity in K, if K contains one.
    pub fn primitive_root_of_unity(&self, n: u64) -> Result<FieldElement> {
        let (w, zeta) = self.roots_of_unity()?;
        if n == 0 || w % n != 0 {
            return Err(Error::RootOfUnityMissing(n));
        }
        self.pow(&zeta, (w / n) as i64)
    }
}

fn shift_sequence() -> impl Iterator<Item = i64> {
    (0..).flat_map(|k| {
        if k == 0 {
            vec![0]
        } else {
            vec![k, -k]
        }
    })
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

fn is_prime_power(q: u64) -> bool {
    let f = factor(&big(q as i64)).expect("small integer");
    f.len() == 1
}

pub(crate) fn lagrange_interpolate(points: &[BigRational], values: &[BigRational]) -> RatPoly {
    assert_eq!(points.len(), values.len());
    let mut acc = RatPoly::zero();
    for (i, (xi, yi)) in points.iter().zip(values).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut term = RatPoly::new(vec![yi.clone()]);
        for (j, xj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let denom = xi - xj;
            let lin = RatPoly::new(vec![-xj / &denom, BigRational::one() / &denom]);
            term = term.mul(&lin);
        }
        acc = acc.add(&term);
    }
    acc
}

fn poly_disc_checked(poly: &IntPoly) -> Result<BigInt> {
    if !poly.is_monic() {
        return Err(Error::NonMonic);
    }
    if !poly.is_irreducible_monic()? {
        let mut s = String::new();
        for (i, c) in poly.coeffs.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&c.to_string());
        }
        return Err(Error::ReduciblePolynomial(s));
    }
    Ok(poly.discriminant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(coeffs: &[i64]) -> NumberField {
        NumberField::make(IntPoly::from_i64(coeffs)).unwrap()
    }

    #[test]
    fn quadratic_minus_five() {
        let k = field(&[5, 0, 1]);
        assert_eq!(k.disc, big(-20));
        assert_eq!(k.index, big(1));
        assert_eq!(k.signature, (0, 1));
    }

    #[test]
    fn gaussian_integers() {
        let k = field(&[1, 0, 1]);
        assert_eq!(k.disc, big(-4));
        let (w, zeta) = k.roots_of_unity().unwrap();
        assert_eq!(w, 4);
        let z2 = k.mul(&zeta, &zeta);
        assert_eq!(z2, k.from_i64(-1));
    }

    #[test]
    fn eisenstein_integers() {
        // x^2 + 3: maximal order is Z[(1+sqrt(-3))/2], disc -3, index 2.
        let k = field(&[3, 0, 1]);
        assert_eq!(k.disc, big(-3));
        assert_eq!(k.index, big(2));
        let (w, zeta) = k.roots_of_unity().unwrap();
        assert_eq!(w, 6);
        assert_eq!(k.pow(&zeta, 6).unwrap(), k.one());
        assert_ne!(k.pow(&zeta, 3).unwrap(), k.one());
    }

    #[test]
    fn dedekind_cubic() {
        // Dedekind's example: x^3 + x^2 - 2x + 8, index 2, disc -503.
        let k = field(&[8, -2, 1, 1]);
        assert_eq!(k.index, big(2));
        assert_eq!(k.disc, big(-503));
        assert_eq!(k.signature, (1, 1));
    }

    #[test]
    fn cyclotomic_five() {
        let k = field(&[1, 1, 1, 1, 1]);
        assert_eq!(k.disc, big(125));
        assert_eq!(k.signature, (0, 2));
        let (w, zeta) = k.roots_of_unity().unwrap();
        assert_eq!(w, 10);
        assert_eq!(k.pow(&zeta, 10).unwrap(), k.one());
        assert_ne!(k.pow(&zeta, 5).unwrap(), k.one());
    }

    #[test]
    fn element_arithmetic() {
        let k = field(&[5, 0, 1]);
        let t = k.theta();
        // theta^2 = -5.
        assert_eq!(k.mul(&t, &t), k.from_i64(-5));
        let a = k.add(&k.one(), &t); // 1 + sqrt(-5)
        assert_eq!(k.norm(&a), rat(6));
        assert_eq!(k.trace(&a), rat(2));
        let inv = k.invert(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), k.one());
        // min poly of 1 + sqrt(-5) is x^2 - 2x + 6.
        let mp = k.min_poly(&a);
        assert_eq!(
            mp,
            RatPoly::new(vec![rat(6), rat(-2), rat(1)])
        );
    }

    #[test]
    fn roots_in_field_basic() {
        let k = field(&[5, 0, 1]);
        // x^2 + 5 has roots +/- theta in K.
        let g = k.kp_from_int(&IntPoly::from_i64(&[5, 0, 1]));
        let roots = k.roots_in_field(&g).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(k.kp_eval(&g, r).is_zero());
        }
        // x^2 + 1 has no roots in Q(sqrt(-5)).
        let g = k.kp_from_int(&IntPoly::from_i64(&[1, 0, 1]));
        assert!(k.roots_in_field(&g).unwrap().is_empty());
    }

    #[test]
    fn quartic_with_index() {
        // Q(zeta_12) = Q[x]/(x^4 - x^2 + 1), disc 144.
        let k = field(&[1, 0, -1, 0, 1]);
        assert_eq!(k.disc, big(144));
        assert_eq!(k.signature, (0, 2));
        let (w, _) = k.roots_of_unity().unwrap();
        assert_eq!(w, 12);
    }
}
