//! Polynomial arithmetic and factorization over prime fields F_p.
//!
//! The modulus is carried as a `BigInt` so the same code serves small
//! residue characteristics and the large moduli that appear during Hensel
//! lifting (where the "modulus" is a prime power and only ring operations
//! are used). Factorization is squarefree decomposition, distinct-degree
//! splitting by Frobenius powers, then Cantor-Zassenhaus equal-degree
//! splitting (a trace-map variant when p = 2).

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::inv_mod;

/// Polynomial with coefficients reduced mod `p`, low degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyModP {
    pub p: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl PolyModP {
    pub fn new(p: BigInt, coeffs: Vec<BigInt>) -> Self {
        let mut c: Vec<BigInt> = coeffs.into_iter().map(|x| x.mod_floor(&p)).collect();
        while c.len() > 1 && c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        if c.is_empty() {
            c.push(BigInt::zero());
        }
        PolyModP { p, coeffs: c }
    }

    pub fn constant(p: BigInt, c: BigInt) -> Self {
        PolyModP::new(p, vec![c])
    }

    pub fn x(p: BigInt) -> Self {
        PolyModP::new(p, vec![BigInt::zero(), BigInt::one()])
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

    /// Reinterpret the coefficients under another modulus.
    pub fn with_modulus(&self, m: &BigInt) -> PolyModP {
        PolyModP::new(m.clone(), self.coeffs.clone())
    }

    /// Lift to Z[x] with coefficients in (-p/2, p/2].
    pub fn symmetric_lift(&self) -> crate::poly::IntPoly {
        let half = &self.p >> 1;
        crate::poly::IntPoly::new(
            self.coeffs
                .iter()
                .map(|c| if c > &half { c - &self.p } else { c.clone() })
                .collect(),
        )
    }

    /// Drop coefficients above `deg` (used after a Hensel step).
    pub fn reduce_degree(&self, deg: usize) -> PolyModP {
        let mut c = self.coeffs.clone();
        c.truncate(deg + 1);
        PolyModP::new(self.p.clone(), c)
    }

    pub fn add(&self, other: &PolyModP) -> PolyModP {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            c[i] += b;
        }
        PolyModP::new(self.p.clone(), c)
    }

    pub fn sub(&self, other: &PolyModP) -> PolyModP {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i] += a;
        }
        for (i, b) in other.coeffs.iter().enumerate() {
            c[i] -= b;
        }
        PolyModP::new(self.p.clone(), c)
    }

    pub fn mul(&self, other: &PolyModP) -> PolyModP {
        if self.is_zero() || other.is_zero() {
            return PolyModP::constant(self.p.clone(), BigInt::zero());
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
        PolyModP::new(self.p.clone(), c)
    }

    pub fn scale(&self, k: &BigInt) -> PolyModP {
        PolyModP::new(self.p.clone(), self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Quotient and remainder; the divisor's leading coefficient must be
    /// invertible mod p.
    pub fn divrem(&self, divisor: &PolyModP) -> (PolyModP, PolyModP) {
        assert!(!divisor.is_zero());
        let inv = inv_mod(divisor.leading(), &self.p).expect("leading coefficient invertible");
        let d = divisor.degree();
        let mut rem: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&self.p))
            .collect();
        if rem.len() <= d {
            return (
                PolyModP::constant(self.p.clone(), BigInt::zero()),
                self.clone(),
            );
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = (&rem[i] * &inv).mod_floor(&self.p);
            if c.is_zero() {
                continue;
            }
            quot[i - d] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = (dc * &c).mod_floor(&self.p);
                rem[i - d + j] = (&rem[i - d + j] - t).mod_floor(&self.p);
            }
        }
        (
            PolyModP::new(self.p.clone(), quot),
            PolyModP::new(self.p.clone(), rem),
        )
    }

    pub fn make_monic(&self) -> PolyModP {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.leading(), &self.p).expect("leading coefficient invertible");
        self.scale(&inv)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &PolyModP) -> PolyModP {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended Euclid: (s, t) with s*self + t*other = 1, if coprime.
    pub fn bezout(&self, other: &PolyModP) -> Option<(PolyModP, PolyModP)> {
        let zero = || PolyModP::constant(self.p.clone(), BigInt::zero());
        let one = || PolyModP::constant(self.p.clone(), BigInt::one());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one(), zero());
        let (mut t0, mut t1) = (zero(), one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.degree() != 0 || r0.is_zero() {
            return None;
        }
        let inv = inv_mod(r0.leading(), &self.p)?;
        Some((s0.scale(&inv), t0.scale(&inv)))
    }

    pub fn derivative(&self) -> PolyModP {
        if self.degree() == 0 {
            return PolyModP::constant(self.p.clone(), BigInt::zero());
        }
        PolyModP::new(
            self.p.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// self^e mod modulus-polynomial f.
    pub fn pow_mod(&self, e: &BigInt, f: &PolyModP) -> PolyModP {
        let mut base = self.divrem(f).1;
        let mut acc = PolyModP::constant(self.p.clone(), BigInt::one());
        let mut e = e.clone();
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.mul(&base).divrem(f).1;
            }
            base = base.mul(&base).divrem(f).1;
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(&self.p);
        }
        acc
    }

    /// Full monic factorization with multiplicities, p prime.
    pub fn factor(&self, seed: u64) -> Vec<(PolyModP, u32)> {
        let f = self.make_monic();
        if f.degree() == 0 {
            return vec![];
        }
        let mut out: Vec<(PolyModP, u32)> = Vec::new();
        for (g, mult) in f.squarefree_decomposition() {
            for irr in g.factor_squarefree_monic(seed) {
                if let Some(e) = out.iter_mut().find(|(h, _)| *h == irr) {
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
        out
    }

    /// Squarefree decomposition in characteristic p:
    /// returns (g_i, i) with self = prod g_i^i and each g_i squarefree.
    fn squarefree_decomposition(&self) -> Vec<(PolyModP, u32)> {
        let mut out = Vec::new();
        let f = self.make_monic();
        let d = f.derivative();
        if d.is_zero() {
            // f = h(x^p); recurse on the p-th root and scale multiplicities.
            let root = f.pth_root();
            for (g, m) in root.squarefree_decomposition() {
                let p32 = crate::arith::to_u64(&self.p).expect("small characteristic") as u32;
                out.push((g, m * p32));
            }
            return out;
        }
        let mut c = f.gcd(&d);
        let mut w = f.divrem(&c).0;
        let mut i = 1u32;
        while w.degree() > 0 {
            let y = w.gcd(&c);
            let fac = w.divrem(&y).0;
            if fac.degree() > 0 {
                out.push((fac, i));
            }
            w = y.clone();
            c = c.divrem(&y).0;
            i += 1;
        }
        if c.degree() > 0 {
            // Remaining part is a p-th power.
            let root = c.pth_root();
            for (g, m) in root.squarefree_decomposition() {
                let p32 = crate::arith::to_u64(&self.p).expect("small characteristic") as u32;
                // Merge with existing entries when the factor repeats.
                if let Some(e) = out.iter_mut().find(|(h, _)| *h == g) {
                    e.1 += m * p32;
                } else {
                    out.push((g, m * p32));
                }
            }
        }
        out
    }

    /// For f with f' = 0: the unique g with g(x)^p = f(x) over F_p.
    fn pth_root(&self) -> PolyModP {
        let p = crate::arith::to_u64(&self.p).expect("small characteristic") as usize;
        let mut c = Vec::new();
        let mut i = 0;
        while i < self.coeffs.len() {
            c.push(self.coeffs[i].clone());
            i += p;
        }
        PolyModP::new(self.p.clone(), c)
    }

    /// Factor a squarefree monic polynomial into monic irreducibles.
    pub fn factor_squarefree_monic(&self, seed: u64) -> Vec<PolyModP> {
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ 1);
        let mut f = self.make_monic();
        if f.degree() == 0 {
            return out;
        }
        // Distinct-degree: h = x^(p^d) mod f, gcd(h - x, f) collects all
        // irreducible factors of degree dividing d that remain in f.
        let x = PolyModP::x(self.p.clone());
        let mut h = x.clone();
        let mut d = 0usize;
        while f.degree() > 0 {
            d += 1;
            if 2 * d > f.degree() {
                // What's left is irreducible.
                out.push(f.clone());
                break;
            }
            h = h.pow_mod(&self.p.clone(), &f);
            let g = h.sub(&x).gcd(&f);
            if g.degree() > 0 {
                equal_degree_split(&g, d, &self.p, &mut rng, &mut out);
                f = f.divrem(&g).0;
                h = h.divrem(&f).1;
            }
        }
        out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs.cmp(&b.coeffs)));
        out
    }
}

/// Cantor-Zassenhaus: split a product of distinct monic irreducibles, all
/// of degree `d`, into the individual factors.
fn equal_degree_split(
    f: &PolyModP,
    d: usize,
    p: &BigInt,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<PolyModP>,
) {
    if f.degree() == d {
        out.push(f.make_monic());
        return;
    }
    let two = BigInt::from(2u32);
    loop {
        let deg = f.degree();
        let coeffs: Vec<BigInt> = (0..deg)
            .map(|_| rng.gen_bigint_range(&BigInt::zero(), p))
            .collect();
        let u = PolyModP::new(p.clone(), coeffs);
        if u.degree() == 0 && u.is_zero() {
            continue;
        }
        let g = if p == &two {
            // Trace map over F_2: u + u^2 + u^4 + ... (d*? terms).
            let mut t = u.clone();
            let mut acc = u.clone();
            for _ in 1..d {
                t = t.mul(&t).divrem(f).1;
                acc = acc.add(&t);
            }
            acc.gcd(f)
        } else {
            // u^((p^d - 1)/2) - 1 splits the factors by quadratic residue.
            let e = (p.pow(d as u32) - 1u32) / &two;
            let w = u.pow_mod(&e, f);
            w.sub(&PolyModP::constant(p.clone(), BigInt::one())).gcd(f)
        };
        if g.degree() > 0 && g.degree() < f.degree() {
            equal_degree_split(&g, d, p, rng, out);
            equal_degree_split(&f.divrem(&g).0, d, p, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::big;
    use crate::poly::IntPoly;

    fn fac_degrees(f: &IntPoly, p: i64) -> Vec<(usize, u32)> {
        f.mod_p(&big(p))
            .factor(7)
            .into_iter()
            .map(|(g, m)| (g.degree(), m))
            .collect()
    }

    #[test]
    fn split_patterns_quadratic() {
        let f = IntPoly::from_i64(&[5, 0, 1]); // x^2 + 5
        // 5 ramifies: (x)^2 mod 5.
        assert_eq!(fac_degrees(&f, 5), vec![(1, 2)]);
        // 3 splits: two linear factors.
        assert_eq!(fac_degrees(&f, 3), vec![(1, 1), (1, 1)]);
        // 11 is inert.
        assert_eq!(fac_degrees(&f, 11), vec![(2, 1)]);
        // 2 ramifies: x^2 + 5 = (x+1)^2 mod 2.
        assert_eq!(fac_degrees(&f, 2), vec![(1, 2)]);
    }

    #[test]
    fn split_patterns_cubic() {
        let f = IntPoly::from_i64(&[-2, 0, 0, 1]); // x^3 - 2
        assert_eq!(fac_degrees(&f, 5), vec![(1, 1), (2, 1)]);
        assert_eq!(fac_degrees(&f, 7), vec![(3, 1)]);
        assert_eq!(fac_degrees(&f, 31), vec![(1, 1), (1, 1), (1, 1)]);
    }

    #[test]
    fn product_reconstructs() {
        let f = IntPoly::from_i64(&[3, 1, 4, 1, 5, 9, 2, 6, 1]);
        for p in [2i64, 3, 5, 13, 101] {
            let fp = f.mod_p(&big(p));
            let facs = fp.factor(3);
            let mut prod = PolyModP::constant(big(p), BigInt::one());
            for (g, m) in &facs {
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
            }
            assert_eq!(prod, fp.make_monic(), "mod {}", p);
        }
    }

    #[test]
    fn bezout_identity() {
        let p = big(7);
        let a = PolyModP::new(p.clone(), vec![big(1), big(2), big(1)]);
        let b = PolyModP::new(p.clone(), vec![big(3), big(1)]);
        let (s, t) = a.bezout(&b).unwrap();
        let lhs = s.mul(&a).add(&t.mul(&b));
        assert_eq!(lhs, PolyModP::constant(p, big(1)));
    }
}
