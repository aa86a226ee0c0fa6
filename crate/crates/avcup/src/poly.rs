//! Exact univariate polynomial arithmetic over Z and Q.
//!
//! Provides the primitives the field layer is built on: resultants and
//! discriminants through a subresultant-free rational route (degrees here
//! are tiny), Sturm-sequence real-root counting, and monic irreducibility
//! testing over Q by Hensel lifting and factor recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::big;
use crate::error::{Error, Result};
use crate::fpoly::PolyModP;

/// Polynomial over Z, coefficients stored low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| big(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly::new(vec![])
    }

    pub fn one() -> Self {
        IntPoly::new(vec![BigInt::one()])
    }

    pub fn x() -> Self {
        IntPoly::new(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            c[i] += b;
        }
        IntPoly::new(c)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPoly::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        if self.degree() == 0 {
            return IntPoly::zero();
        }
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * big(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact division; panics if not divisible (internal use only).
    pub fn div_exact(&self, divisor: &IntPoly) -> IntPoly {
        let (q, r) = self.to_rat().divrem(&divisor.to_rat());
        assert!(r.is_zero(), "division was not exact");
        q.to_int().expect("exact quotient over Z")
    }

    /// Remainder and quotient by a monic divisor stay in Z[x].
    pub fn divrem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic());
        let d = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate().take(d) {
                let t = dc * &c;
                rem[i - d + j] -= t;
            }
        }
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Reduce coefficients mod p.
    pub fn mod_p(&self, p: &BigInt) -> PolyModP {
        PolyModP::new(p.clone(), self.coeffs.iter().map(|c| c.mod_floor(p)).collect())
    }

    /// Resultant of self and other, computed over Q by Euclidean reduction.
    pub fn resultant(&self, other: &IntPoly) -> BigInt {
        let r = self.to_rat().resultant(&other.to_rat());
        assert!(r.is_integer());
        r.to_integer()
    }

    pub fn discriminant(&self) -> BigInt {
        assert!(self.is_monic());
        let n = self.degree();
        let res = self.resultant(&self.derivative());
        let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
        big(sign) * res
    }

    /// Number of distinct real roots, by Sturm's theorem.
    pub fn count_real_roots(&self) -> usize {
        let f = self.to_rat();
        let squarefree = f.divrem(&f.gcd(&f.derivative())).0;
        let mut seq = vec![squarefree.clone(), squarefree.derivative()];
        loop {
            let last = &seq[seq.len() - 1];
            if last.is_zero() || last.degree() == 0 {
                break;
            }
            let r = seq[seq.len() - 2].divrem(last).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        let sign_changes = |at_inf: i32| -> usize {
            let mut signs = Vec::new();
            for g in &seq {
                if g.is_zero() {
                    continue;
                }
                let lead = g.leading();
                let mut s = if lead.is_positive() { 1 } else { -1 };
                if at_inf < 0 && g.degree() % 2 == 1 {
                    s = -s;
                }
                signs.push(s);
            }
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        sign_changes(-1) - sign_changes(1)
    }

    /// Irreducibility over Q for monic integer polynomials.
    pub fn is_irreducible_monic(&self) -> Result<bool> {
        if !self.is_monic() {
            return Err(Error::NonMonic);
        }
        let n = self.degree();
        if n == 0 {
            return Ok(false);
        }
        if n == 1 {
            return Ok(true);
        }
        // Squarefree test: gcd(f, f') over Q.
        let g = self.to_rat().gcd(&self.derivative().to_rat());
        if g.degree() > 0 {
            return Ok(false);
        }
        // Rational (hence integer) roots.
        if self.has_integer_root() {
            return Ok(false);
        }
        if n <= 2 {
            return Ok(true);
        }
        // Try small primes: irreducible mod p implies irreducible over Q,
        // and the factor-degree patterns cut down recombination work.
        let mut best: Option<(BigInt, Vec<PolyModP>)> = None;
        let mut p = big(2);
        let mut tried = 0;
        while tried < 8 {
            if !(self.discriminant_mod_is_zero(&p)) {
                let fp = self.mod_p(&p);
                let factors = fp.factor_squarefree_monic(tried as u64);
                if factors.len() == 1 {
                    return Ok(true);
                }
                if best
                    .as_ref()
                    .map_or(true, |(_, fs)| factors.len() < fs.len())
                {
                    best = Some((p.clone(), factors));
                }
                tried += 1;
            }
            p = next_prime(&p);
        }
        let (p, factors) = best.expect("at least one good prime");
        Ok(self.find_factor_by_lifting(&p, factors)?.is_none())
    }

    /// Factor a monic polynomial into monic irreducibles over Z with
    /// multiplicities.
    pub fn factor_monic(&self) -> Result<Vec<(IntPoly, u32)>> {
        if !self.is_monic() {
            return Err(Error::NonMonic);
        }
        let mut out: Vec<(IntPoly, u32)> = Vec::new();
        for (part, mult) in self.squarefree_decomposition() {
            for irr in part.factor_squarefree_monic()? {
                if let Some(e) = out.iter_mut().find(|(g, _)| *g == irr) {
                    e.1 += mult;
                } else {
                    out.push((irr, mult));
                }
            }
        }
        out.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
        });
        Ok(out)
    }

    /// Yun's squarefree decomposition (characteristic zero):
    /// self = prod part_i^i with each part monic squarefree.
    pub fn squarefree_decomposition(&self) -> Vec<(IntPoly, u32)> {
        let f = self.to_rat();
        let mut out = Vec::new();
        let g = f.gcd(&f.derivative());
        if g.degree() == 0 {
            if self.degree() > 0 {
                out.push((self.clone(), 1));
            }
            return out;
        }
        let mut w = f.divrem(&g).0;
        let mut y = f.derivative().divrem(&g).0;
        let mut i = 1u32;
        while w.degree() > 0 {
            let z = y.sub(&w.derivative());
            let part = w.gcd(&z);
            if part.degree() > 0 {
                out.push((part.to_int().expect("monic factor over Z"), i));
            }
            w = w.divrem(&part).0;
            y = z.divrem(&part).0;
            i += 1;
        }
        out
    }

    fn factor_squarefree_monic(&self) -> Result<Vec<IntPoly>> {
        let n = self.degree();
        if n == 0 {
            return Ok(vec![]);
        }
        if n == 1 {
            return Ok(vec![self.clone()]);
        }
        let mut best: Option<(BigInt, Vec<PolyModP>)> = None;
        let mut p = big(2);
        let mut tried = 0;
        while tried < 8 {
            if !self.discriminant_mod_is_zero(&p) {
                let factors = self.mod_p(&p).factor_squarefree_monic(tried as u64);
                if factors.len() == 1 {
                    return Ok(vec![self.clone()]);
                }
                if best
                    .as_ref()
                    .map_or(true, |(_, fs)| factors.len() < fs.len())
                {
                    best = Some((p.clone(), factors));
                }
                tried += 1;
            }
            p = next_prime(&p);
        }
        let (p, factors) = best.expect("at least one good prime");
        match self.find_factor_by_lifting(&p, factors)? {
            None => Ok(vec![self.clone()]),
            Some(g) => {
                let h = self.div_exact(&g);
                let mut out = g.factor_squarefree_monic()?;
                out.extend(h.factor_squarefree_monic()?);
                Ok(out)
            }
        }
    }

    fn discriminant_mod_is_zero(&self, p: &BigInt) -> bool {
        (self.discriminant() % p).is_zero()
    }

    fn has_integer_root(&self) -> bool {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return true;
        }
        // Monic: any rational root is an integer dividing the constant term.
        let divisors = match crate::arith::factor(c0) {
            Ok(f) => all_divisors(&f),
            Err(_) => return false,
        };
        for d in divisors {
            if self.eval(&d).is_zero() || self.eval(&(-&d)).is_zero() {
                return true;
            }
        }
        false
    }

    /// Hensel-lift the mod-p factorization and search factor subsets.
    /// Returns a proper monic factor over Z if one exists.
    fn find_factor_by_lifting(
        &self,
        p: &BigInt,
        factors: Vec<PolyModP>,
    ) -> Result<Option<IntPoly>> {
        // Coefficient bound for monic factors (Mignotte-style, generous).
        let height: BigInt = self.coeffs.iter().map(|c| c.abs()).sum();
        let bound = (BigInt::one() << (self.degree() + 2)) * height;
        let mut modulus = p.clone();
        while modulus <= &bound * 2 {
            modulus *= p;
        }
        let lifted = hensel_lift_tree(&self.mod_p(&modulus), p, &factors)?;
        // Try all subsets of at most half the factors.
        let k = lifted.len();
        let half_deg = self.degree() / 2;
        for mask in 1u64..(1u64 << k) - 1 {
            let deg: usize = (0..k)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| lifted[i].degree())
                .sum();
            if deg == 0 || deg > half_deg {
                continue;
            }
            let mut g = PolyModP::constant(modulus.clone(), BigInt::one());
            for (i, f) in lifted.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    g = g.mul(&f.with_modulus(&modulus));
                }
            }
            let cand = g.symmetric_lift();
            let (_, r) = self.divrem_monic(&cand);
            if r.is_zero() {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    }
}

/// The k-th cyclotomic polynomial.
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k >= 1);
    let mut num = vec![BigInt::zero(); k as usize + 1];
    num[0] = big(-1);
    num[k as usize] = BigInt::one();
    let mut num = IntPoly::new(num);
    for d in 1..k {
        if k % d == 0 {
            num = num.div_exact(&cyclotomic(d));
        }
    }
    num
}

fn next_prime(p: &BigInt) -> BigInt {
    let mut q = p + 1u32;
    while !crate::arith::is_prime(&q) {
        q += 1u32;
    }
    q
}

fn all_divisors(f: &[(BigInt, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, k) in f {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=*k {
                next.push(d * &pk);
                pk *= p;
            }
        }
        out = next;
    }
    out
}

/// Hensel-lift a coprime factorization of the monic `f` (given mod a
/// power of the base prime `p`) from mod p up to f's modulus, by splitting
/// the factor list in half, lifting the pair, and recursing.
fn hensel_lift_tree(
    f: &PolyModP,
    p: &BigInt,
    factors: &[PolyModP],
) -> Result<Vec<PolyModP>> {
    if factors.len() == 1 {
        return Ok(vec![f.clone()]);
    }
    let target = f.p.clone();
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let mul_all = |fs: &[PolyModP]| {
        let mut acc = PolyModP::constant(p.clone(), BigInt::one());
        for g in fs {
            acc = acc.mul(g);
        }
        acc
    };
    let g0 = mul_all(left);
    let h0 = mul_all(right);
    // Bezout data mod the base prime only; with e divisible by the current
    // modulus m this still gives a valid update mod m*p (linear lifting).
    let (_s, t) = g0
        .bezout(&h0)
        .ok_or_else(|| Error::FactorizationStalled("hensel bezout".into()))?;
    let tm = t.with_modulus(&target);
    let mut g = g0.with_modulus(&target);
    let mut h = h0.with_modulus(&target);
    let mut m = p.clone();
    while m < target {
        let e = f.sub(&g.mul(&h));
        if e.is_zero() {
            break;
        }
        // e = a h + b g with deg a < deg g, deg b < deg h:
        // a = t e mod g, then b by exact monic division.
        let a = tm.mul(&e).divrem(&g).1;
        let (b, _r) = e.sub(&a.mul(&h)).divrem(&g);
        g = g.add(&a);
        h = h.add(&b);
        m *= p;
    }
    let mut out = hensel_lift_tree(&g, p, left)?;
    out.extend(hensel_lift_tree(&h, p, right)?);
    Ok(out)
}

/// Polynomial over Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    pub coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly::new(vec![])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().unwrap()
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i] = &c[i] + a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            c[i] = &c[i] + b;
        }
        RatPoly::new(c)
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        RatPoly::new(c)
    }

    pub fn derivative(&self) -> RatPoly {
        if self.degree() == 0 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(big(i as i64)))
                .collect(),
        )
    }

    pub fn divrem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero());
        let d = divisor.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d && !(d == 0) {
            return (RatPoly::zero(), self.clone());
        }
        if d == 0 {
            let inv = divisor.leading().recip();
            return (
                RatPoly::new(self.coeffs.iter().map(|c| c * &inv).collect()),
                RatPoly::zero(),
            );
        }
        let lead_inv = divisor.leading().recip();
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = &rem[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i - d + j] = &rem[i - d + j] - &(dc * &c);
            }
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let inv = a.leading().recip();
        RatPoly::new(a.coeffs.iter().map(|c| c * &inv).collect())
    }

    pub fn resultant(&self, other: &RatPoly) -> BigRational {
        // res(a, b) with Euclidean recursion:
        // res(a, b) = lc(b)^(deg a - deg r) * (-1)^(deg a * deg b) * res(b, r)
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = BigRational::one();
        let mut sign_pos = true;
        loop {
            if b.is_zero() {
                return BigRational::zero();
            }
            if b.degree() == 0 {
                let e = a.degree() as u32;
                let r = acc * pow_rat(b.leading(), e);
                return if sign_pos { r } else { -r };
            }
            let r = a.divrem(&b).1;
            let da = a.degree();
            let db = b.degree();
            let dr = if r.is_zero() { 0 } else { r.degree() };
            acc = acc * pow_rat(b.leading(), (da - dr) as u32);
            if da % 2 == 1 && db % 2 == 1 {
                sign_pos = !sign_pos;
            }
            a = b;
            b = r;
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_int(&self) -> Option<IntPoly> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(IntPoly::new(out))
    }
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discriminants() {
        // x^2 + 5 -> -20; x^2 + 1 -> -4; x^3 - 2 -> -108
        assert_eq!(IntPoly::from_i64(&[5, 0, 1]).discriminant(), big(-20));
        assert_eq!(IntPoly::from_i64(&[1, 0, 1]).discriminant(), big(-4));
        assert_eq!(IntPoly::from_i64(&[-2, 0, 0, 1]).discriminant(), big(-108));
    }

    #[test]
    fn sturm_counts() {
        assert_eq!(IntPoly::from_i64(&[5, 0, 1]).count_real_roots(), 0);
        assert_eq!(IntPoly::from_i64(&[-2, 0, 0, 1]).count_real_roots(), 1);
        assert_eq!(IntPoly::from_i64(&[-3, 1]).count_real_roots(), 1);
        assert_eq!(IntPoly::from_i64(&[-2, 0, 1]).count_real_roots(), 2);
        assert_eq!(IntPoly::from_i64(&[1, 0, -1, 0, 0, 1]).count_real_roots(), 1);
    }

    #[test]
    fn irreducibility() {
        assert!(IntPoly::from_i64(&[5, 0, 1]).is_irreducible_monic().unwrap());
        assert!(!IntPoly::from_i64(&[1, 2, 1]).is_irreducible_monic().unwrap());
        // (x^2+1)(x^2+2): squarefree, no rational roots, splits mod many p.
        assert!(!IntPoly::from_i64(&[2, 0, 3, 0, 1]).is_irreducible_monic().unwrap());
        assert!(IntPoly::from_i64(&[-2, 0, 0, 1]).is_irreducible_monic().unwrap());
        // x^4 + 1 is irreducible over Q but reducible mod every prime.
        assert!(IntPoly::from_i64(&[1, 0, 0, 0, 1]).is_irreducible_monic().unwrap());
        // Cyclotomic phi_12 = x^4 - x^2 + 1.
        assert!(IntPoly::from_i64(&[1, 0, -1, 0, 1]).is_irreducible_monic().unwrap());
    }

    #[test]
    fn full_factorization() {
        // (x^2+1)^2 (x-3) (x^2+x+1)
        let f = IntPoly::from_i64(&[1, 0, 1])
            .mul(&IntPoly::from_i64(&[1, 0, 1]))
            .mul(&IntPoly::from_i64(&[-3, 1]))
            .mul(&IntPoly::from_i64(&[1, 1, 1]));
        let facs = f.factor_monic().unwrap();
        let mut prod = IntPoly::one();
        for (g, m) in &facs {
            assert!(g.is_irreducible_monic().unwrap());
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, f);
        assert_eq!(facs.len(), 3);
        assert!(facs.iter().any(|(g, m)| *m == 2 && g.degree() == 2));
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn resultant_values() {
        let f = IntPoly::from_i64(&[5, 0, 1]);
        let g = IntPoly::from_i64(&[1, 1]); // x + 1
        // res(f, g) = f(-1) = 6 for monic linear g.
        assert_eq!(f.resultant(&g).abs(), big(6));
    }

    #[test]
    fn divrem_monic_roundtrip() {
        let f = IntPoly::from_i64(&[3, 1, 4, 1, 5]);
        let g = IntPoly::from_i64(&[2, 0, 1]);
        // Force monic divisor.
        let g = IntPoly::new(g.coeffs);
        let fg = f.mul(&g);
        let (q, r) = fg.divrem_monic(&g);
        assert!(r.is_zero());
        assert_eq!(q, f);
    }
}
