//! Floating-point complex embeddings of a number field.
//!
//! Used only to guide searches (short vectors, unit logarithms); every
//! candidate produced with the help of this module is verified exactly
//! before it is returned from public APIs.

use num_traits::ToPrimitive;

use crate::nf::{FieldElement, NumberField};

/// Minimal complex arithmetic; enough for root finding and embeddings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cpx {
    pub re: f64,
    pub im: f64,
}

impl Cpx {
    pub fn new(re: f64, im: f64) -> Self {
        Cpx { re, im }
    }

    pub fn zero() -> Self {
        Cpx::new(0.0, 0.0)
    }

    pub fn one() -> Self {
        Cpx::new(1.0, 0.0)
    }

    pub fn add(self, o: Cpx) -> Cpx {
        Cpx::new(self.re + o.re, self.im + o.im)
    }

    pub fn sub(self, o: Cpx) -> Cpx {
        Cpx::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(self, o: Cpx) -> Cpx {
        Cpx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn div(self, o: Cpx) -> Cpx {
        let d = o.re * o.re + o.im * o.im;
        Cpx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }

    pub fn conj(self) -> Cpx {
        Cpx::new(self.re, -self.im)
    }

    pub fn abs2(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(self) -> f64 {
        self.abs2().sqrt()
    }
}

/// All complex roots of a monic integer polynomial (Durand-Kerner).
pub fn poly_roots(coeffs: &[f64]) -> Vec<Cpx> {
    let m = coeffs.len() - 1;
    assert!(m >= 1);
    let eval = |z: Cpx| -> Cpx {
        let mut acc = Cpx::zero();
        for &c in coeffs.iter().rev() {
            acc = acc.mul(z).add(Cpx::new(c, 0.0));
        }
        acc
    };
    // Starting points on a spiral.
    let seed = Cpx::new(0.4, 0.9);
    let mut z: Vec<Cpx> = Vec::with_capacity(m);
    let mut cur = Cpx::one();
    for _ in 0..m {
        cur = cur.mul(seed);
        z.push(cur);
    }
    for _ in 0..600 {
        let mut max_step = 0.0f64;
        for i in 0..m {
            let mut denom = Cpx::one();
            for j in 0..m {
                if i != j {
                    denom = denom.mul(z[i].sub(z[j]));
                }
            }
            let step = eval(z[i]).div(denom);
            z[i] = z[i].sub(step);
            max_step = max_step.max(step.abs());
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// Precomputed complex embeddings of the integral basis and the T2 Gram
/// matrix of the maximal order.
#[derive(Debug, Clone)]
pub struct Embeddings {
    pub roots: Vec<Cpx>,
    /// basis_emb[i][r] = image of the i-th integral basis vector under
    /// the r-th embedding.
    pub basis_emb: Vec<Vec<Cpx>>,
    /// T2 inner products of the integral basis.
    pub gram: Vec<Vec<f64>>,
}

impl Embeddings {
    pub fn new(k: &NumberField) -> Embeddings {
        let m = k.degree;
        let coeffs: Vec<f64> = k
            .poly
            .coeffs
            .iter()
            .map(|c| c.to_f64().expect("coefficient fits in f64"))
            .collect();
        let roots = poly_roots(&coeffs);
        let den = k.basis_den.to_f64().unwrap();
        let mut basis_emb = vec![vec![Cpx::zero(); m]; m];
        for i in 0..m {
            for (r, &root) in roots.iter().enumerate() {
                let mut acc = Cpx::zero();
                for j in (0..m).rev() {
                    let c = k.basis_num[(i, j)].to_f64().unwrap();
                    acc = acc.mul(root).add(Cpx::new(c, 0.0));
                }
                basis_emb[i][r] = Cpx::new(acc.re / den, acc.im / den);
            }
        }
        let mut gram = vec![vec![0.0; m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut s = Cpx::zero();
                for r in 0..m {
                    s = s.add(basis_emb[i][r].mul(basis_emb[j][r].conj()));
                }
                gram[i][j] = s.re;
            }
        }
        Embeddings {
            roots,
            basis_emb,
            gram,
        }
    }

    /// Images of an element under all embeddings.
    pub fn embed(&self, x: &FieldElement) -> Vec<Cpx> {
        let den = x.den.to_f64().unwrap();
        let m = self.roots.len();
        let mut out = vec![Cpx::zero(); m];
        for (i, c) in x.coords.iter().enumerate() {
            let cf = c.to_f64().unwrap();
            if cf == 0.0 {
                continue;
            }
            for r in 0..m {
                let t = self.basis_emb[i][r];
                out[r] = out[r].add(Cpx::new(t.re * cf, t.im * cf));
            }
        }
        for o in out.iter_mut() {
            *o = Cpx::new(o.re / den, o.im / den);
        }
        out
    }

    /// T2 norm (sum of squared absolute values over all embeddings).
    pub fn t2(&self, x: &FieldElement) -> f64 {
        self.embed(x).iter().map(|z| z.abs2()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    #[test]
    fn roots_of_quadratic() {
        // x^2 + 5: roots +/- i sqrt(5).
        let r = poly_roots(&[5.0, 0.0, 1.0]);
        assert_eq!(r.len(), 2);
        for z in &r {
            assert!(z.re.abs() < 1e-9);
            assert!((z.im.abs() - 5.0f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn t2_of_integers() {
        let k = NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap();
        let e = Embeddings::new(&k);
        // T2(1) = 2, T2(sqrt(-5)) = 10.
        assert!((e.t2(&k.one()) - 2.0).abs() < 1e-9);
        assert!((e.t2(&k.theta()) - 10.0).abs() < 1e-9);
        // Gram determinant = |disc| for a totally imaginary field... up to
        // the standard factor: det(T2 gram) = |disc| here (disc -20).
        let g = &e.gram;
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        assert!((det - 20.0).abs() < 1e-6);
    }
}
