//! Cyclic extensions L|K: Kummer construction, relative norms, Artin
//! symbols, and the constructive witness solvers (Hilbert 90 for elements
//! and ideals, Furtwangler splitting, norm-unit search).
//!
//! L is stored as an absolute field over Q together with an integer
//! matrix embedding O_K into O_L and the matrix of the chosen generator
//! sigma of Gal(L|K) on the integral basis of O_L, so every relative
//! computation reduces to absolute ones. All witness operations verify
//! their defining identity exactly before returning.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{big, factor};
use crate::classunit::{ClassGroup, UnitGroup};
use crate::error::{Error, Result};
use crate::ideal::{Divisor, FractionalIdeal, PrimeIdeal};
use crate::matz::{self, Mat};
use crate::nf::{lagrange_interpolate, FieldElement, NumberField};
use crate::poly::{IntPoly, RatPoly};

/// A cyclic extension L|K of degree d with a chosen generator sigma of
/// its Galois group, embedded in an ambient modulus n with d | n.
#[derive(Debug, Clone)]
pub struct CyclicExtension {
    pub base: NumberField,
    pub top: NumberField,
    /// d = [L : K].
    pub rel_degree: u64,
    /// Ambient modulus; rel_degree divides n.
    pub n: u64,
    /// Image of the base field's power-basis generator inside L.
    pub theta_in_top: FieldElement,
    /// For Kummer-built extensions: alpha in L with alpha^d = embed(w).
    pub alpha: Option<FieldElement>,
    /// Kummer radicand w in K with L = K(w^{1/d}).
    pub kummer_w: Option<FieldElement>,
    /// m x dm integer matrix: row i holds the O_L coordinates of the
    /// image of the i-th integral basis element of O_K.
    embed_mat: Mat,
    /// dm x dm integer matrix of sigma on the integral basis of O_L.
    sigma_mat: Mat,
    /// theta_in_top^0 .. theta_in_top^(m-1).
    theta_powers: Vec<FieldElement>,
}

fn rat_b(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

// ---------------------------------------------------------------------------
// Relative model: vectors of length d over K with alpha^d = w
// ---------------------------------------------------------------------------

fn rel_mul(
    base: &NumberField,
    w: &FieldElement,
    a: &[FieldElement],
    b: &[FieldElement],
) -> Vec<FieldElement> {
    let d = a.len();
    let mut c = vec![base.zero(); 2 * d - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            c[i + j] = base.add(&c[i + j], &base.mul(x, y));
        }
    }
    for k in (d..2 * d - 1).rev() {
        if !c[k].is_zero() {
            let t = base.mul(&c[k], w);
            c[k - d] = base.add(&c[k - d], &t);
        }
    }
    c.truncate(d);
    c
}

/// Flatten a relative element to rational coordinates over the Q-basis
/// {theta^j alpha^i} (i major, j minor).
fn rel_flatten(base: &NumberField, x: &[FieldElement]) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(x.len() * base.degree);
    for c in x {
        out.extend(base.to_power_coords(c));
    }
    out
}

/// Decide irreducibility of x^d - w over K: shift by s*theta until the
/// norm polynomial N_s(x) = N(g(x + s*theta)) is squarefree over Q; then
/// g is irreducible over K iff N_s is irreducible over Q (N_s is the
/// minimal polynomial of a root exactly in that case).
fn kummer_is_irreducible(base: &NumberField, d: u64, w: &FieldElement) -> Result<bool> {
    let dm = d as usize * base.degree;
    let theta = base.theta();
    for s in 0i64..40 {
        let shift = base.mul_int(&theta, &big(s));
        let mut points = Vec::with_capacity(dm + 1);
        let mut values = Vec::with_capacity(dm + 1);
        for x0 in 0..=(dm as i64) {
            let x = base.add(&base.from_i64(x0), &shift);
            let v = base.sub(&base.pow(&x, d as i64).expect("positive power"), w);
            points.push(BigRational::from_integer(big(x0)));
            values.push(base.norm(&v));
        }
        let n_poly = lagrange_interpolate(&points, &values);
        if n_poly.gcd(&n_poly.derivative()).degree() > 0 {
            continue;
        }
        let n_int = n_poly
            .to_int()
            .ok_or_else(|| Error::Parse("norm polynomial is not integral".into()))?;
        return n_int.is_irreducible_monic();
    }
    Err(Error::SearchExhausted("squarefree norm polynomial".into()))
}

impl CyclicExtension {
    // -----------------------------------------------------------------------
    // Construction
    // -----------------------------------------------------------------------

    /// Build L = K(v^{1/n}) as a cyclic extension of degree d = order of
    /// v in K*/(K*)^n, with sigma normalized by sigma(alpha) = zeta^{n/d}
    /// alpha. Requires a primitive n-th root of unity in K. A perfect
    /// n-th power yields the flagged trivial extension (d = 1).
    pub fn build_kummer(base: &NumberField, n: u64, v: &FieldElement) -> Result<CyclicExtension> {
        if n == 0 {
            return Err(Error::Parse("modulus n must be positive".into()));
        }
        if v.is_zero() {
            return Err(Error::ZeroElement);
        }
        let zeta = base.primitive_root_of_unity(n)?;
        // Integral representative of the same Kummer class.
        let v1 = if v.den.is_one() {
            v.clone()
        } else {
            base.mul(v, &base.from_int(&v.den.pow(n as u32)))
        };
        // Largest divisor t of n with v1 a t-th power in K.
        let mut t_found = 1u64;
        let mut w = v1.clone();
        'outer: for t in (2..=n).rev() {
            if n % t != 0 {
                continue;
            }
            let mut coeffs = vec![base.neg(&v1)];
            for _ in 0..t - 1 {
                coeffs.push(base.zero());
            }
            coeffs.push(base.one());
            let g = base.kp_new(coeffs);
            if let Some(r) = base.roots_in_field(&g)?.into_iter().next() {
                t_found = t;
                w = r;
                break 'outer;
            }
        }
        let d = n / t_found;
        if d > 1 {
            if !kummer_is_irreducible(base, d, &w)? {
                // Can only happen in the 4 | d radicand edge case; we do
                // not descend further.
                return Err(Error::NotAnNthPower(n));
            }
        }
        let zeta_d = base.pow(&zeta, (n / d) as i64)?;
        Self::assemble_kummer(base, n, d, w, zeta_d)
    }

    /// Shared construction from the degree-d Kummer data (w, zeta_d).
    fn assemble_kummer(
        base: &NumberField,
        n: u64,
        d: u64,
        w: FieldElement,
        zeta_d: FieldElement,
    ) -> Result<CyclicExtension> {
        let m = base.degree;
        let du = d as usize;
        let dm = du * m;
        let theta = base.theta();
        // Relative basis element alpha (the class of x in K[x]/(x^d - w)).
        // Search a primitive element t = alpha + c*theta.
        for c in 0i64.. {
            if c > 40 {
                return Err(Error::SearchExhausted("primitive element".into()));
            }
            let mut t_rel = vec![base.zero(); du];
            t_rel[0] = base.mul_int(&theta, &big(c));
            if du > 1 {
                t_rel[1] = base.one();
            } else {
                t_rel[0] = base.add(&t_rel[0], &w);
            }
            // Powers t^0 .. t^dm in the relative model.
            let mut pows_rel: Vec<Vec<FieldElement>> = Vec::with_capacity(dm + 1);
            let mut one_rel = vec![base.zero(); du];
            one_rel[0] = base.one();
            pows_rel.push(one_rel);
            for k in 1..=dm {
                let prev = &pows_rel[k - 1];
                pows_rel.push(rel_mul(base, &w, prev, &t_rel));
            }
            let flat: Vec<Vec<BigRational>> =
                pows_rel.iter().map(|x| rel_flatten(base, x)).collect();
            // Right kernel of the (dm+1) x dm matrix of powers: dimension
            // one exactly when t is primitive.
            let transpose: Vec<Vec<BigRational>> = (0..dm)
                .map(|j| flat.iter().map(|row| row[j].clone()).collect())
                .collect();
            let ker = matz::kernel_rat(&transpose);
            if ker.len() != 1 || ker[0][dm].is_zero() {
                continue;
            }
            let lead = ker[0][dm].clone();
            let mu_rat = RatPoly::new(ker[0].iter().map(|x| x / &lead).collect());
            let mu = mu_rat
                .to_int()
                .ok_or_else(|| Error::Parse("primitive element is not integral".into()))?;
            // Change of basis: row k of P = flat coordinates of t^k.
            let p_rows: Vec<Vec<BigRational>> = flat[..dm].to_vec();
            let p_inv = matz::invert_rat(&p_rows)
                .ok_or_else(|| Error::Parse("singular power matrix".into()))?;
            let rel_to_tpower = |x: &[FieldElement]| -> Vec<BigRational> {
                let f = rel_flatten(base, x);
                (0..dm)
                    .map(|j| {
                        let mut acc = BigRational::zero();
                        for (l, fl) in f.iter().enumerate() {
                            if !fl.is_zero() {
                                acc += fl * &p_inv[l][j];
                            }
                        }
                        acc
                    })
                    .collect()
            };
            // Starting order: the product order O_K[alpha] in t-coordinates.
            let mut order_rows = Vec::with_capacity(dm);
            for j in 0..du {
                for i in 0..m {
                    let mut e = vec![base.zero(); du];
                    let mut coords = vec![BigInt::zero(); m];
                    coords[i] = BigInt::one();
                    e[j] = base.elt(coords, BigInt::one());
                    order_rows.push(rel_to_tpower(&e));
                }
            }
            let (start_num, start_den) = rat_rows_to_int(&order_rows);
            // Primes where the product order can be non-maximal: those of
            // disc K, of d, and of N(w) (the discriminant of x^d - w is
            // up to sign d^d w^{d-1}).
            let mut hints: Vec<BigInt> = Vec::new();
            for src in [
                base.disc.abs(),
                big(d as i64),
                base.norm(&w).to_integer().abs(),
            ] {
                if src > BigInt::one() {
                    for (p, _) in factor(&src)? {
                        if !hints.contains(&p) {
                            hints.push(p);
                        }
                    }
                }
            }
            hints.sort();
            let top = NumberField::make_from_order_start(mu, start_num, start_den, &hints)?;
            // Images of theta, alpha and sigma(t) in the absolute model.
            let to_top = |x: &[FieldElement]| -> FieldElement {
                top.from_power_coords(&rel_to_tpower(x))
            };
            let mut theta_rel = vec![base.zero(); du];
            theta_rel[0] = theta.clone();
            let theta_in_top = to_top(&theta_rel);
            let mut alpha_rel = vec![base.zero(); du];
            if du > 1 {
                alpha_rel[1] = base.one();
            } else {
                alpha_rel[0] = w.clone();
            }
            let alpha_top = to_top(&alpha_rel);
            // sigma(t) = zeta_d * alpha + c * theta.
            let mut s_rel = vec![base.zero(); du];
            s_rel[0] = base.mul_int(&theta, &big(c));
            if du > 1 {
                s_rel[1] = zeta_d.clone();
            } else {
                s_rel[0] = base.add(&s_rel[0], &w);
            }
            let s_top = to_top(&s_rel);
            let sigma_mat = sigma_matrix(&top, &s_top)?;
            let ext = Self::finish(
                base.clone(),
                top,
                d,
                n,
                theta_in_top,
                Some(alpha_top),
                Some(w.clone()),
                sigma_mat,
            )?;
            // Normalization check: sigma(alpha) = zeta_d * alpha.
            let za = ext.top.mul(&ext.embed(&zeta_d), ext.alpha.as_ref().unwrap());
            assert_eq!(
                ext.apply_sigma(ext.alpha.as_ref().unwrap()),
                za,
                "sigma normalization"
            );
            return Ok(ext);
        }
        unreachable!()
    }

    /// Build from an explicit absolute model: a defining polynomial for L
    /// and the image of its generator under sigma (power coordinates).
    pub fn from_explicit(
        base: &NumberField,
        n: u64,
        top_poly: IntPoly,
        sigma_image: &RatPoly,
    ) -> Result<CyclicExtension> {
        let top = NumberField::make(top_poly)?;
        let m = base.degree;
        let dm = top.degree;
        if dm % m != 0 {
            return Err(Error::Parse(
                "top degree is not a multiple of the base degree".into(),
            ));
        }
        let d = (dm / m) as u64;
        if n == 0 || n % d != 0 {
            return Err(Error::Parse("extension degree does not divide n".into()));
        }
        // sigma(t) as an element of L, verified to be a root of the
        // defining polynomial.
        let s_top = {
            let t = top.theta();
            let mut acc = top.zero();
            for c in sigma_image.coeffs.iter().rev() {
                acc = top.add(&top.mul(&acc, &t), &top.from_rational(c));
            }
            acc
        };
        let check = {
            let mut acc = top.zero();
            for c in top.poly.coeffs.iter().rev() {
                acc = top.add(&top.mul(&acc, &s_top), &top.from_int(c));
            }
            acc
        };
        if !check.is_zero() {
            return Err(Error::Parse(
                "sigma image is not a root of the defining polynomial".into(),
            ));
        }
        let sigma_mat = sigma_matrix(&top, &s_top)?;
        // Embedding of K: a root of the base polynomial fixed by sigma.
        let roots = top.roots_in_field(&top.kp_from_int(&base.poly))?;
        let theta_in_top = roots
            .into_iter()
            .find(|r| {
                let img = top.elt(Mat::vec_mul(&r.coords, &sigma_mat), r.den.clone());
                img == *r
            })
            .ok_or_else(|| {
                Error::Parse("no sigma-fixed embedding of the base field".into())
            })?;
        Self::finish(
            base.clone(),
            top,
            d,
            n,
            theta_in_top,
            None,
            None,
            sigma_mat,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        base: NumberField,
        top: NumberField,
        d: u64,
        n: u64,
        theta_in_top: FieldElement,
        alpha: Option<FieldElement>,
        kummer_w: Option<FieldElement>,
        sigma_mat: Mat,
    ) -> Result<CyclicExtension> {
        let m = base.degree;
        let dm = top.degree;
        // Powers of the embedded generator.
        let mut theta_powers = Vec::with_capacity(m);
        let mut cur = top.one();
        for _ in 0..m {
            theta_powers.push(cur.clone());
            cur = top.mul(&cur, &theta_in_top);
        }
        // Embedding matrix for the integral basis of O_K.
        let mut embed_rows = Vec::with_capacity(m);
        for i in 0..m {
            let mut acc = vec![BigRational::zero(); dm];
            let pc = {
                let mut coords = vec![BigInt::zero(); m];
                coords[i] = BigInt::one();
                base.to_power_coords(&base.elt(coords, BigInt::one()))
            };
            for (j, q) in pc.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let tp = top.to_power_coords(&theta_powers[j]);
                for (k, tv) in tp.iter().enumerate() {
                    acc[k] += q * tv;
                }
            }
            let img = top.from_power_coords(&acc);
            if !img.is_integral() {
                return Err(Error::Parse(
                    "base integral basis does not embed integrally".into(),
                ));
            }
            embed_rows.push(img.coords);
        }
        let embed_mat = Mat::from_rows(embed_rows);
        // sigma has exact order d and fixes the embedded base field.
        let mut pow = Mat::identity(dm);
        for k in 1..=d {
            pow = pow.mul(&sigma_mat);
            let is_id = pow == Mat::identity(dm);
            if k < d && is_id {
                return Err(Error::Parse("sigma has order smaller than d".into()));
            }
            if k == d && !is_id {
                return Err(Error::Parse("sigma does not have order d".into()));
            }
        }
        let ext = CyclicExtension {
            base,
            top,
            rel_degree: d,
            n,
            theta_in_top,
            alpha,
            kummer_w,
            embed_mat,
            sigma_mat,
            theta_powers,
        };
        let fixed = ext.apply_sigma(&ext.theta_in_top);
        if fixed != ext.theta_in_top {
            return Err(Error::Parse("sigma does not fix the base field".into()));
        }
        Ok(ext)
    }

    // -----------------------------------------------------------------------
    // Basic maps
    // -----------------------------------------------------------------------

    /// Embed an element of K into L.
    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        self.top
            .elt(Mat::vec_mul(&x.coords, &self.embed_mat), x.den.clone())
    }

    /// Apply sigma to an element of L.
    pub fn apply_sigma(&self, x: &FieldElement) -> FieldElement {
        self.top
            .elt(Mat::vec_mul(&x.coords, &self.sigma_mat), x.den.clone())
    }

    pub fn apply_sigma_pow(&self, x: &FieldElement, k: u64) -> FieldElement {
        let mut y = x.clone();
        for _ in 0..k % self.rel_degree {
            y = self.apply_sigma(&y);
        }
        y
    }

    /// Express an element of L lying in the image of K as an element of K.
    pub fn to_base(&self, y: &FieldElement) -> Result<FieldElement> {
        let m = self.base.degree;
        let dm = self.top.degree;
        // Solve sum_j q_j theta^j = y over Q by elimination on the
        // dm x m coefficient matrix (full column rank).
        let mut rows: Vec<Vec<BigRational>> = (0..dm)
            .map(|i| {
                let mut r: Vec<BigRational> = (0..m)
                    .map(|j| rat_b(&self.theta_powers[j].coords[i]))
                    .collect();
                r.push(rat_b(&y.coords[i]) / rat_b(&y.den));
                r
            })
            .collect();
        let mut piv_rows = Vec::new();
        let mut r = 0usize;
        for c in 0..m {
            let Some(p) = (r..dm).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let lead = rows[r][c].clone();
            for j in c..=m {
                rows[r][j] = &rows[r][j] / &lead;
            }
            for i in 0..dm {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in c..=m {
                        let t = &rows[r][j] * &f;
                        rows[i][j] = &rows[i][j] - &t;
                    }
                }
            }
            piv_rows.push((r, c));
            r += 1;
        }
        // Consistency: non-pivot rows must have zero right-hand side.
        for i in r..dm {
            if !rows[i][m].is_zero() {
                return Err(Error::DescentFailure);
            }
        }
        let mut q = vec![BigRational::zero(); m];
        for (ri, c) in piv_rows {
            q[c] = rows[ri][m].clone();
        }
        let out = self.base.from_power_coords(&q);
        // Exactness check.
        let back = {
            let mut acc = vec![BigRational::zero(); self.top.degree];
            let pc = self.base.to_power_coords(&out);
            for (j, v) in pc.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let tp = self.top.to_power_coords(&self.theta_powers[j]);
                for (k, tv) in tp.iter().enumerate() {
                    acc[k] += v * tv;
                }
            }
            self.top.from_power_coords(&acc)
        };
        if back != *y {
            return Err(Error::DescentFailure);
        }
        Ok(out)
    }

    /// Relative norm of an element: product of its sigma-conjugates,
    /// verified to lie in the embedded base field.
    pub fn relative_norm(&self, x: &FieldElement) -> Result<FieldElement> {
        let mut prod = x.clone();
        let mut conj = x.clone();
        for _ in 1..self.rel_degree {
            conj = self.apply_sigma(&conj);
            prod = self.top.mul(&prod, &conj);
        }
        self.to_base(&prod)
    }

    // -----------------------------------------------------------------------
    // Ideals
    // -----------------------------------------------------------------------

    /// Extend an ideal of K to O_L.
    pub fn extend_ideal(&self, i: &FractionalIdeal) -> FractionalIdeal {
        let gens: Vec<FieldElement> = (0..self.base.degree)
            .map(|r| self.embed(&self.base.elt(i.num.row_vec(r), i.den.clone())))
            .collect();
        self.top
            .ideal_from_elements(&gens)
            .expect("nonzero ideal extends to a nonzero ideal")
    }

    /// Apply sigma to an ideal of L.
    pub fn sigma_ideal(&self, i: &FractionalIdeal) -> FractionalIdeal {
        let rows: Vec<Vec<BigInt>> = (0..i.num.rows)
            .map(|r| Mat::vec_mul(i.num.row(r), &self.sigma_mat))
            .collect();
        FractionalIdeal {
            num: matz::hnf(&Mat::from_rows(rows)),
            den: i.den.clone(),
        }
    }

    /// The prime of K below a prime of L.
    pub fn prime_below(&self, p_top: &PrimeIdeal) -> Result<PrimeIdeal> {
        let below = self.base.factor_rational_prime(&p_top.p)?;
        below
            .into_iter()
            .find(|q| {
                let g = self.embed(&q.gen2);
                g.is_zero() || self.top.ideal_contains(&p_top.ideal, &g)
            })
            .ok_or_else(|| Error::Parse("no prime of K below the given prime".into()))
    }

    /// All primes of L above a prime of K.
    pub fn primes_above(&self, p_base: &PrimeIdeal) -> Result<Vec<PrimeIdeal>> {
        let ext = self.extend_ideal(&p_base.ideal);
        let all = self.top.factor_rational_prime(&p_base.p)?;
        Ok(all
            .into_iter()
            .filter(|pp| {
                (0..ext.num.rows)
                    .all(|r| matz::in_hnf_lattice(&pp.ideal.num, ext.num.row(r)))
            })
            .collect())
    }

    /// Relative norm of an ideal, computed prime by prime via relative
    /// residue degrees.
    pub fn relative_norm_ideal(&self, i: &FractionalIdeal) -> Result<FractionalIdeal> {
        let fac = self.top.factor_ideal(i)?;
        let mut out: Divisor = Vec::new();
        for (pp, e) in fac {
            let below = self.prime_below(&pp)?;
            let f_rel = (pp.f_deg / below.f_deg) as i64;
            out.push((below, e * f_rel));
        }
        Ok(self.base.divisor_to_ideal(&out))
    }

    /// The ideal of K whose extension is the given sigma-invariant ideal
    /// of L; errors with DescentFailure if no such ideal exists.
    pub fn descend_ideal(&self, i: &FractionalIdeal) -> Result<FractionalIdeal> {
        let fac = self.top.factor_ideal(i)?;
        let mut out: Divisor = Vec::new();
        for (pp, _) in &fac {
            let below = self.prime_below(pp)?;
            if out.iter().any(|(q, _)| *q == below) {
                continue;
            }
            let e = self
                .top
                .valuation(i, pp);
            let e_rel = {
                // Ramification of pp over below.
                (pp.e / below.e) as i64
            };
            if e % e_rel != 0 {
                return Err(Error::DescentFailure);
            }
            out.push((below, e / e_rel));
        }
        let candidate = self.base.divisor_to_ideal(&out);
        let back = self.extend_ideal(&candidate);
        if back != *i {
            return Err(Error::DescentFailure);
        }
        Ok(candidate)
    }

    // -----------------------------------------------------------------------
    // Ramification and the Artin symbol
    // -----------------------------------------------------------------------

    /// True iff the relative discriminant is trivial and the infinite
    /// places impose no condition (always the case for totally imaginary
    /// K; for a base with real places only odd degree qualifies).
    pub fn is_unramified_everywhere(&self) -> bool {
        let d = self.rel_degree as u32;
        let finite = self.top.disc.abs() == self.base.disc.abs().pow(d);
        let infinite = self.base.is_totally_imaginary() || self.rel_degree % 2 == 1;
        finite && infinite
    }

    /// The Frobenius exponent k in Z/dZ with sigma^k acting as x -> x^{N p}
    /// on the residue field of a prime of L above the given prime of K.
    pub fn artin_symbol(&self, p_base: &PrimeIdeal) -> Result<u64> {
        if !self.is_unramified_everywhere() {
            return Err(Error::RamifiedExtension);
        }
        if self.rel_degree == 1 {
            return Ok(0);
        }
        let above = self.primes_above(p_base)?;
        let pp = above
            .first()
            .ok_or_else(|| Error::Parse("no prime above".into()))?;
        if pp.e != p_base.e {
            return Err(Error::RamifiedExtension);
        }
        let p = &p_base.p;
        let q = p.pow(p_base.f_deg);
        let dm = self.top.degree;
        // q-th powers of the integral basis, reduced mod p (p O_L is
        // inside pp, so this is enough for membership tests).
        let basis_q: Vec<Vec<BigInt>> = (0..dm)
            .map(|i| {
                let mut coords = vec![BigInt::zero(); dm];
                coords[i] = BigInt::one();
                let e = self.top.elt(coords, BigInt::one());
                pow_coords_mod_p(&self.top, &e, &q, p)
            })
            .collect();
        let mut s_pow = Mat::identity(dm);
        for k in 0..self.rel_degree {
            let ok = (0..dm).all(|i| {
                let diff: Vec<BigInt> = (0..dm)
                    .map(|j| &s_pow[(i, j)] - &basis_q[i][j])
                    .collect();
                matz::in_hnf_lattice(&pp.ideal.num, &diff)
            });
            if ok {
                return Ok(k);
            }
            s_pow = s_pow.mul(&self.sigma_mat);
        }
        Err(Error::Parse("Frobenius not a power of sigma".into()))
    }

    /// Artin symbol of a divisor of K, extended additively.
    pub fn artin_of_divisor(&self, div: &Divisor) -> Result<u64> {
        let d = self.rel_degree;
        let mut acc: i64 = 0;
        for (p, e) in div {
            let a = self.artin_symbol(p)? as i64;
            acc = (acc + a * (e.rem_euclid(d as i64))).rem_euclid(d as i64);
        }
        Ok(acc as u64)
    }

    /// Artin symbol of an arbitrary ideal of K (via its factorization).
    pub fn artin_of_ideal(&self, i: &FractionalIdeal) -> Result<u64> {
        let fac = self.base.factor_ideal(i)?;
        self.artin_of_divisor(&fac)
    }

    // -----------------------------------------------------------------------
    // Witness solvers
    // -----------------------------------------------------------------------

    /// Hilbert 90 for elements: given u with N(u) = 1, find b != 0 with
    /// sigma(b)/b = u, by the cocycle resolvent over small-height r.
    pub fn hilbert90_element(&self, u: &FieldElement, seed: u64) -> Result<FieldElement> {
        let norm = self.relative_norm(u)?;
        if norm != self.base.one() {
            return Err(Error::NormNotOne);
        }
        if self.rel_degree == 1 {
            return Ok(self.top.one());
        }
        let d = self.rel_degree as usize;
        // z_0 = 1, z_i = (u sigma(u) ... sigma^{i-1}(u))^{-1}.
        let mut z = Vec::with_capacity(d);
        z.push(self.top.one());
        let mut prod = self.top.one();
        let mut conj = u.clone();
        for i in 1..d {
            if i == 1 {
                prod = u.clone();
            } else {
                conj = self.apply_sigma(&conj);
                prod = self.top.mul(&prod, &conj);
            }
            z.push(self.top.invert(&prod)?);
        }
        let dm = self.top.degree;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9059_0e1e);
        let mut tries = 0u32;
        let mut candidates: Vec<FieldElement> = Vec::new();
        for i in 0..dm {
            let mut coords = vec![BigInt::zero(); dm];
            coords[i] = BigInt::one();
            candidates.push(self.top.elt(coords, BigInt::one()));
        }
        loop {
            let r = match candidates.pop() {
                Some(r) => r,
                None => {
                    if tries >= 200 {
                        return Err(Error::ResolventExhausted(tries));
                    }
                    let coords = (0..dm)
                        .map(|_| big(rng.gen_range(-3i64..=3)))
                        .collect();
                    self.top.elt(coords, BigInt::one())
                }
            };
            tries += 1;
            let mut b = self.top.zero();
            let mut sr = r.clone();
            for (i, zi) in z.iter().enumerate() {
                if i > 0 {
                    sr = self.apply_sigma(&sr);
                }
                b = self.top.add(&b, &self.top.mul(zi, &sr));
            }
            if b.is_zero() {
                continue;
            }
            let lhs = self.apply_sigma(&b);
            let rhs = self.top.mul(u, &b);
            assert_eq!(lhs, rhs, "resolvent identity");
            return Ok(b);
        }
    }

    /// Hilbert 90 for ideals: given J with trivial relative norm, find I
    /// with J = I - sigma(I) (additive divisor notation).
    pub fn hilbert90_ideal(&self, j: &FractionalIdeal) -> Result<FractionalIdeal> {
        let nj = self.relative_norm_ideal(j)?;
        if !self.base.ideal_is_unit(&nj) {
            return Err(Error::NormNotTrivialIdeal);
        }
        if self.rel_degree == 1 {
            // sigma = id forces J = (1).
            if !self.top.ideal_is_unit(j) {
                return Err(Error::NormNotTrivialIdeal);
            }
            return Ok(self.top.unit_ideal());
        }
        let fac = self.top.factor_ideal(j)?;
        // Pool of all primes above each rational prime in the support.
        let mut pool: Vec<PrimeIdeal> = Vec::new();
        for (pp, _) in &fac {
            if !pool.iter().any(|q| *q == *pp) {
                for q in self.top.factor_rational_prime(&pp.p)? {
                    if !pool.iter().any(|x| *x == q) {
                        pool.push(q);
                    }
                }
            }
        }
        let exp_of = |p: &PrimeIdeal| -> i64 {
            fac.iter()
                .find(|(q, _)| *q == *p)
                .map(|(_, e)| *e)
                .unwrap_or(0)
        };
        let mut result: Divisor = Vec::new();
        let mut used = vec![false; pool.len()];
        for start in 0..pool.len() {
            if used[start] {
                continue;
            }
            // Walk the sigma-orbit of this prime.
            let mut orbit_idx = vec![start];
            used[start] = true;
            let mut cur = self.sigma_ideal(&pool[start].ideal);
            while cur != pool[start].ideal {
                let next = pool
                    .iter()
                    .position(|q| q.ideal == cur)
                    .expect("sigma permutes the primes above p");
                used[next] = true;
                orbit_idx.push(next);
                cur = self.sigma_ideal(&pool[next].ideal);
            }
            let a: Vec<i64> = orbit_idx.iter().map(|&i| exp_of(&pool[i])).collect();
            if a.iter().sum::<i64>() != 0 {
                return Err(Error::NormNotTrivialIdeal);
            }
            // Solve b_i - b_{i-1} = a_i along the cycle.
            let mut b = vec![0i64; a.len()];
            for i in 1..a.len() {
                b[i] = b[i - 1] + a[i];
            }
            for (i, &bi) in b.iter().enumerate() {
                if bi != 0 {
                    result.push((pool[orbit_idx[i]].clone(), bi));
                }
            }
        }
        let i_ideal = self.top.divisor_to_ideal(&result);
        // Exact verification: J = I - sigma(I).
        let check = self
            .top
            .ideal_mul(&i_ideal, &self.top.ideal_inverse(&self.sigma_ideal(&i_ideal)));
        assert_eq!(check, *j, "Hilbert 90 ideal identity");
        Ok(i_ideal)
    }

    /// Furtwangler splitting: an ideal M of L whose class dies under the
    /// norm to Cl K decomposes as M = B - sigma(B) + div(a).
    pub fn furtwangler_split(
        &self,
        m_ideal: &FractionalIdeal,
        cls_top: &ClassGroup,
    ) -> Result<(FractionalIdeal, FieldElement)> {
        // Direct principality first (covers h(L) = 1 and capitulation).
        if let Some(g) = cls_top.is_principal(&self.top, m_ideal)? {
            return Ok((self.top.unit_ideal(), g));
        }
        // Solve x (Id - S) = dlog(M) modulo the invariant orders, where S
        // is the matrix of sigma on the class-group coordinates.
        let g = cls_top.invariants.len();
        let r = cls_top.dlog(&self.top, m_ideal)?;
        let mut rows = Vec::with_capacity(2 * g);
        for i in 0..g {
            let si = cls_top.dlog(&self.top, &self.sigma_ideal(&cls_top.generators[i]))?;
            let mut row = vec![BigInt::zero(); g];
            for jj in 0..g {
                row[jj] = -si[jj].clone();
            }
            row[i] += BigInt::one();
            rows.push(row);
        }
        for i in 0..g {
            let mut row = vec![BigInt::zero(); g];
            row[i] = cls_top.invariants[i].clone();
            rows.push(row);
        }
        let x = matz::solve_left(&Mat::from_rows(rows), &r)
            .ok_or(Error::ClassEquationUnsolvable)?;
        let mut b_ideal = self.top.unit_ideal();
        for i in 0..g {
            let e = (&x[i]).mod_floor(&cls_top.invariants[i]);
            let e64 = e.to_string().parse::<i64>().expect("small exponent");
            b_ideal = self
                .top
                .ideal_mul(&b_ideal, &self.top.ideal_pow(&cls_top.generators[i], e64));
        }
        // Residual M - B + sigma(B) is principal by construction.
        let rem = self.top.ideal_mul(
            m_ideal,
            &self
                .top
                .ideal_mul(&self.sigma_ideal(&b_ideal), &self.top.ideal_inverse(&b_ideal)),
        );
        let a = cls_top
            .is_principal(&self.top, &rem)?
            .ok_or(Error::ClassEquationUnsolvable)?;
        // Exact verification of the splitting identity.
        let recon = self.top.ideal_mul(
            &self
                .top
                .ideal_mul(&b_ideal, &self.top.ideal_inverse(&self.sigma_ideal(&b_ideal))),
            &self.top.principal_ideal(&a)?,
        );
        assert_eq!(recon, *m_ideal, "Furtwangler identity");
        Ok((b_ideal, a))
    }

    /// Solve N(v) = u for a unit u of K by bounded search over products
    /// of L-units, then small-height integral elements.
    pub fn solve_norm_unit(
        &self,
        u: &FieldElement,
        units_top: &UnitGroup,
        seed: u64,
    ) -> Result<FieldElement> {
        let _ = seed;
        if !u.is_integral() || !self.base.norm(u).to_integer().abs().is_one() {
            return Err(Error::Parse("norm target is not a unit".into()));
        }
        if *u == self.base.one() {
            return Ok(self.top.one());
        }
        let bound = 6i64;
        let rank = units_top.fundamental.len();
        let mut exps = vec![-bound; rank];
        loop {
            // Product of fundamental units at the current exponent vector.
            let mut base_prod = self.top.one();
            let mut ok = true;
            for (i, f) in units_top.fundamental.iter().enumerate() {
                match self.top.pow(f, exps[i]) {
                    Ok(p) => base_prod = self.top.mul(&base_prod, &p),
                    Err(_) => ok = false,
                }
            }
            if ok {
                let mut t = base_prod.clone();
                for _ in 0..units_top.torsion_order {
                    if self.relative_norm(&t).map(|n| n == *u).unwrap_or(false) {
                        return Ok(t);
                    }
                    t = self.top.mul(&t, &units_top.torsion_gen);
                }
            }
            // Advance the exponent vector; stop after the full box.
            let mut i = 0;
            loop {
                if i == rank {
                    // Box exhausted: fall through to the fractional
                    // phase. The solution need not be a unit of O_L:
                    // any w = y/z with N(y) = u N(z) works, so collect
                    // relative norms of small integral elements and look
                    // for collisions with ratio u. Every hit is verified
                    // exactly before it is returned.
                    let emb = crate::embed::Embeddings::new(&self.top);
                    let mf = self.top.degree as f64;
                    let disc_f = self.top.disc.to_f64().unwrap_or(1e300).abs();
                    let mut height = 2.0 * mf * disc_f.powf(1.0 / mf);
                    let key = |x: &FieldElement| format!("{:?}/{}", x.coords, x.den);
                    let mut seen: HashMap<String, FieldElement> = HashMap::new();
                    for _ in 0..7 {
                        let cands = crate::classunit::short_elements(
                            &self.top,
                            &emb,
                            &Mat::identity(self.top.degree),
                            height,
                            30000,
                        );
                        for t in cands {
                            if t.is_zero() {
                                continue;
                            }
                            let nt = match self.relative_norm(&t) {
                                Ok(n) => n,
                                Err(_) => continue,
                            };
                            if nt == *u {
                                return Ok(t);
                            }
                            // w = t / z with N(z) = N(t) / u.
                            if let Ok(want) = self.base.div(&nt, u) {
                                if let Some(z) = seen.get(&key(&want)) {
                                    let w = self.top.div(&t, z)?;
                                    if self.relative_norm(&w)? == *u {
                                        return Ok(w);
                                    }
                                }
                            }
                            // w = y / t with N(y) = u N(t).
                            let want = self.base.mul(u, &nt);
                            if let Some(y) = seen.get(&key(&want)) {
                                let w = self.top.div(y, &t)?;
                                if self.relative_norm(&w)? == *u {
                                    return Ok(w);
                                }
                            }
                            seen.entry(key(&nt)).or_insert(t);
                        }
                        height *= 2.0;
                    }
                    return Err(Error::SearchExhausted("norm-unit solution".into()));
                }
                exps[i] += 1;
                if exps[i] <= bound {
                    break;
                }
                exps[i] = -bound;
                i += 1;
            }
            if rank == 0 {
                // Only torsion: single pass through the loop body suffices.
                let mut t = self.top.one();
                for _ in 0..units_top.torsion_order {
                    if self.relative_norm(&t).map(|n| n == *u).unwrap_or(false) {
                        return Ok(t);
                    }
                    t = self.top.mul(&t, &units_top.torsion_gen);
                }
                return Err(Error::SearchExhausted("norm-unit solution".into()));
            }
        }
    }
}

/// The matrix of the field automorphism determined by t -> s on the
/// integral basis; errors if the basis is not mapped into the order.
fn sigma_matrix(top: &NumberField, s: &FieldElement) -> Result<Mat> {
    let dm = top.degree;
    let mut s_pows = Vec::with_capacity(dm);
    let mut cur = top.one();
    for _ in 0..dm {
        s_pows.push(top.to_power_coords(&cur));
        cur = top.mul(&cur, s);
    }
    let mut rows = Vec::with_capacity(dm);
    for i in 0..dm {
        let mut acc = vec![BigRational::zero(); dm];
        for j in 0..dm {
            let c = rat_b(&top.basis_num[(i, j)]) / rat_b(&top.basis_den);
            if c.is_zero() {
                continue;
            }
            for (k, v) in s_pows[j].iter().enumerate() {
                acc[k] += &c * v;
            }
        }
        let img = top.from_power_coords(&acc);
        if !img.is_integral() {
            return Err(Error::Parse(
                "automorphism does not preserve the maximal order".into(),
            ));
        }
        rows.push(img.coords);
    }
    Ok(Mat::from_rows(rows))
}

/// x^e with coordinates reduced mod p at every step (valid modulo p O).
fn pow_coords_mod_p(
    k: &NumberField,
    x: &FieldElement,
    e: &BigInt,
    p: &BigInt,
) -> Vec<BigInt> {
    assert!(x.den.is_one());
    let reduce = |v: &FieldElement| -> FieldElement {
        k.elt(v.coords.iter().map(|c| c.mod_floor(p)).collect(), BigInt::one())
    };
    let mut acc = k.one();
    let mut base = reduce(x);
    let mut exp = e.clone();
    while !exp.is_zero() {
        if exp.is_odd() {
            acc = reduce(&k.mul(&acc, &base));
        }
        base = reduce(&k.mul(&base, &base));
        exp >>= 1;
    }
    acc.coords
}

fn rat_rows_to_int(rows: &[Vec<BigRational>]) -> (Mat, BigInt) {
    let mut den = BigInt::one();
    for r in rows {
        for x in r {
            den = den.lcm(x.denom());
        }
    }
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    (Mat::from_rows(int_rows), den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classunit::{class_group, unit_group};

    fn qm5() -> NumberField {
        NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap()
    }

    fn ki_over_qm5() -> CyclicExtension {
        let k = qm5();
        let v = k.from_i64(-1);
        CyclicExtension::build_kummer(&k, 2, &v).unwrap()
    }

    #[test]
    fn kummer_hilbert_class_field_of_qm5() {
        let ext = ki_over_qm5();
        assert_eq!(ext.rel_degree, 2);
        assert_eq!(ext.top.degree, 4);
        // L = K(i) is the Hilbert class field: unramified everywhere.
        assert!(ext.is_unramified_everywhere());
        assert_eq!(ext.top.disc.abs(), big(400));
    }

    #[test]
    fn trivial_extension_for_perfect_square() {
        let k = qm5();
        let ext = CyclicExtension::build_kummer(&k, 2, &k.from_i64(4)).unwrap();
        assert_eq!(ext.rel_degree, 1);
        assert!(ext.is_unramified_everywhere());
        // Relative norm is the identity through the degree-1 model.
        let x = k.add(&k.one(), &k.theta());
        let nx = ext.relative_norm(&ext.embed(&x)).unwrap();
        assert_eq!(nx, x);
        let p2 = &k.factor_rational_prime(&big(2)).unwrap()[0];
        assert_eq!(ext.artin_symbol(p2).unwrap(), 0);
    }

    #[test]
    fn ramified_cubic_detected() {
        // Q(sqrt(-3))(2^{1/3}) ramifies above 2 and 3.
        let k = NumberField::make(IntPoly::from_i64(&[3, 0, 1])).unwrap();
        let ext = CyclicExtension::build_kummer(&k, 3, &k.from_i64(2)).unwrap();
        assert_eq!(ext.rel_degree, 3);
        assert_eq!(ext.top.degree, 6);
        assert!(!ext.is_unramified_everywhere());
    }

    #[test]
    fn relative_norms_of_elements() {
        let ext = ki_over_qm5();
        // i in L: a root of x^2 + 1.
        let i_roots = ext
            .top
            .roots_in_field(&ext.top.kp_from_int(&IntPoly::from_i64(&[1, 0, 1])))
            .unwrap();
        let i_elt = i_roots[0].clone();
        assert_eq!(ext.relative_norm(&i_elt).unwrap(), ext.base.one());
        let one_plus_i = ext.top.add(&ext.top.one(), &i_elt);
        assert_eq!(ext.relative_norm(&one_plus_i).unwrap(), ext.base.from_i64(2));
        // Norm of an embedded element is its d-th power.
        let x = ext.base.add(&ext.base.one(), &ext.base.theta());
        let nx = ext.relative_norm(&ext.embed(&x)).unwrap();
        assert_eq!(nx, ext.base.mul(&x, &x));
    }

    #[test]
    fn artin_symbol_detects_the_class_group() {
        let ext = ki_over_qm5();
        let k = &ext.base;
        // p2 is nonprincipal: Frobenius is the nontrivial element.
        let p2 = &k.factor_rational_prime(&big(2)).unwrap()[0];
        assert_eq!(ext.artin_symbol(p2).unwrap(), 1);
        // Additivity: p2^2 = (2) is principal.
        let fac = k.factor_ideal(&k.ideal_pow(&p2.ideal, 2)).unwrap();
        assert_eq!(ext.artin_of_divisor(&fac).unwrap(), 0);
        // Principal divisors die (Artin reciprocity).
        for t in [
            k.add(&k.one(), &k.theta()),
            k.add(&k.from_i64(3), &k.theta()),
            k.from_i64(7),
        ] {
            let d = k.principal_divisor(&t).unwrap();
            assert_eq!(ext.artin_of_divisor(&d).unwrap(), 0);
        }
        // p3 above the split prime 3 pairs with p2 inside div(1 + theta).
        let p3 = &k.factor_rational_prime(&big(3)).unwrap()[0];
        assert_eq!(ext.artin_symbol(p3).unwrap(), 1);
    }

    #[test]
    fn sigma_swaps_split_primes() {
        let ext = ki_over_qm5();
        // 29 = 3^2 + 5*2^2: its factors in K are principal, so they split
        // in the Hilbert class field L and sigma swaps the two primes.
        let p29 = &ext.base.factor_rational_prime(&big(29)).unwrap()[0];
        let above = ext.primes_above(p29).unwrap();
        assert_eq!(above.len(), 2);
        assert_eq!(ext.sigma_ideal(&above[0].ideal), above[1].ideal);
        // Relative norm of a prime above a split prime is the prime below.
        let n = ext.relative_norm_ideal(&above[0].ideal).unwrap();
        assert_eq!(n, p29.ideal);
        // The nonprincipal p3 stays inert instead.
        let p3 = &ext.base.factor_rational_prime(&big(3)).unwrap()[0];
        assert_eq!(ext.primes_above(p3).unwrap().len(), 1);
    }

    #[test]
    fn hilbert90_element_roundtrip() {
        let ext = ki_over_qm5();
        // u = -1 has norm 1; sigma(b)/b = -1 forces b ~ i.
        let u = ext.top.from_i64(-1);
        let b = ext.hilbert90_element(&u, 5).unwrap();
        assert_eq!(ext.apply_sigma(&b), ext.top.mul(&u, &b));
        // Construct-then-recover round trips.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let coords: Vec<BigInt> = (0..4).map(|_| big(rng.gen_range(-3i64..=3))).collect();
            let c = ext.top.elt(coords, BigInt::one());
            if c.is_zero() {
                continue;
            }
            let u = ext.top.div(&ext.apply_sigma(&c), &c).unwrap();
            let b = ext.hilbert90_element(&u, 3).unwrap();
            assert_eq!(ext.apply_sigma(&b), ext.top.mul(&u, &b));
        }
    }

    #[test]
    fn hilbert90_ideal_roundtrip() {
        let ext = ki_over_qm5();
        let p29 = &ext.base.factor_rational_prime(&big(29)).unwrap()[0];
        let above = ext.primes_above(p29).unwrap();
        let j = ext.top.ideal_mul(
            &above[0].ideal,
            &ext.top.ideal_inverse(&above[1].ideal),
        );
        let i = ext.hilbert90_ideal(&j).unwrap();
        let back = ext
            .top
            .ideal_mul(&i, &ext.top.ideal_inverse(&ext.sigma_ideal(&i)));
        assert_eq!(back, j);
    }

    #[test]
    fn furtwangler_capitulation() {
        let ext = ki_over_qm5();
        let cls_l = class_group(&ext.top, 3).unwrap();
        assert!(cls_l.is_trivial());
        // p2 of K capitulates in L = the Hilbert class field.
        let p2 = &ext.base.factor_rational_prime(&big(2)).unwrap()[0];
        let m = ext.extend_ideal(&p2.ideal);
        let (b, a) = ext.furtwangler_split(&m, &cls_l).unwrap();
        let recon = ext.top.ideal_mul(
            &ext
                .top
                .ideal_mul(&b, &ext.top.ideal_inverse(&ext.sigma_ideal(&b))),
            &ext.top.principal_ideal(&a).unwrap(),
        );
        assert_eq!(recon, m);
    }

    #[test]
    fn norm_unit_solver() {
        let ext = ki_over_qm5();
        let cls_l = class_group(&ext.top, 3).unwrap();
        let units_l = unit_group(&ext.top, &cls_l, 3).unwrap();
        // N(v) = -1 is solvable in the unramified extension.
        let u = ext.base.from_i64(-1);
        let v = ext.solve_norm_unit(&u, &units_l, 9).unwrap();
        assert_eq!(ext.relative_norm(&v).unwrap(), u);
        // Round trip through a random unit of L.
        let w = &units_l.fundamental[0];
        let target = ext.relative_norm(w).unwrap();
        let v2 = ext.solve_norm_unit(&target, &units_l, 10).unwrap();
        assert_eq!(ext.relative_norm(&v2).unwrap(), target);
    }

    #[test]
    fn explicit_model_round_trip() {
        let kummer = ki_over_qm5();
        // Rebuild the same extension from its absolute model and the
        // power coordinates of sigma(t).
        let s = kummer.apply_sigma(&kummer.top.theta());
        let sigma_image = RatPoly::new(kummer.top.to_power_coords(&s));
        let ext =
            CyclicExtension::from_explicit(&kummer.base, 2, kummer.top.poly.clone(), &sigma_image)
                .unwrap();
        assert_eq!(ext.rel_degree, 2);
        assert!(ext.is_unramified_everywhere());
        let p2 = &ext.base.factor_rational_prime(&big(2)).unwrap()[0];
        assert_eq!(ext.artin_symbol(p2).unwrap(), 1);
    }
}
