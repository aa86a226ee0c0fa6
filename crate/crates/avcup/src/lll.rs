//! Lattice reduction and short-vector enumeration on Gram matrices.
//!
//! Works in f64 throughout: the callers treat every vector coming out of
//! here as a candidate to be verified with exact arithmetic, so numerical
//! slack is harmless (it can only add candidates, and the enumeration
//! bound is widened on purpose).

/// LLL-reduce a positive definite Gram matrix in place; returns the
/// unimodular transform U (rows) with G' = U G U^T.
pub fn lll_gram(gram: &mut Vec<Vec<f64>>) -> Vec<Vec<i64>> {
    let n = gram.len();
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let delta = 0.99;
    // Gram-Schmidt data recomputed from the Gram matrix.
    let gso = |g: &Vec<Vec<f64>>| -> (Vec<f64>, Vec<Vec<f64>>) {
        let mut b = vec![0.0; n];
        let mut mu = vec![vec![0.0; n]; n];
        for i in 0..n {
            let mut bi = g[i][i];
            for j in 0..i {
                let mut m = g[i][j];
                for k in 0..j {
                    m -= mu[i][k] * mu[j][k] * b[k];
                }
                mu[i][j] = m / b[j];
                bi -= mu[i][j] * mu[i][j] * b[j];
            }
            b[i] = bi;
        }
        (b, mu)
    };
    let row_op = |g: &mut Vec<Vec<f64>>, u: &mut Vec<Vec<i64>>, i: usize, j: usize, q: i64| {
        // b_i <- b_i - q b_j
        if q == 0 {
            return;
        }
        let qf = q as f64;
        for k in 0..n {
            u[i][k] -= q * u[j][k];
        }
        for k in 0..n {
            let t = g[j][k];
            g[i][k] -= qf * t;
        }
        for k in 0..n {
            let t = g[k][j];
            g[k][i] -= qf * t;
        }
    };
    let swap = |g: &mut Vec<Vec<f64>>, u: &mut Vec<Vec<i64>>, i: usize| {
        u.swap(i, i - 1);
        g.swap(i, i - 1);
        for row in g.iter_mut() {
            row.swap(i, i - 1);
        }
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n {
        guard += 1;
        if guard > 10_000 {
            break;
        }
        let (b, mu) = gso(gram);
        // Size reduce b_k against b_{k-1}, ..., b_0.
        for j in (0..k).rev() {
            let (_, mu2) = gso(gram);
            let q = mu2[k][j].round() as i64;
            row_op(gram, &mut u, k, j, q);
        }
        let (b2, mu2) = gso(gram);
        let _ = (b, mu);
        if b2[k] >= (delta - mu2[k][k - 1] * mu2[k][k - 1]) * b2[k - 1] {
            k += 1;
        } else {
            swap(gram, &mut u, k);
            k = k.max(2) - 1;
            if k == 0 {
                k = 1;
            }
        }
    }
    u
}

/// Enumerate integer vectors x != 0 with x G x^T <= bound (one of each
/// +/- pair), via Cholesky and depth-first search. The result is capped.
pub fn short_vectors(gram: &[Vec<f64>], bound: f64, cap: usize) -> Vec<Vec<i64>> {
    let n = gram.len();
    // Cholesky: G = L D L^T (mu's and squared norms).
    let mut d = vec![0.0; n];
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut di = gram[i][i];
        for j in 0..i {
            let mut m = gram[i][j];
            for k in 0..j {
                m -= mu[i][k] * mu[j][k] * d[k];
            }
            mu[i][j] = m / d[j];
            di -= mu[i][j] * mu[i][j] * d[j];
        }
        d[i] = di.max(1e-12);
    }
    let slack = bound * 1.0000001 + 1e-9;
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    // Depth-first from the last coordinate down; center shifts from mu.
    fn dfs(
        level: isize,
        n: usize,
        d: &[f64],
        mu: &[Vec<f64>],
        x: &mut Vec<i64>,
        remaining: f64,
        out: &mut Vec<Vec<i64>>,
        cap: usize,
        nodes: &mut usize,
    ) {
        // Node budget: a numerically degenerate Cholesky must not turn
        // the search into an unbounded walk.
        *nodes += 1;
        if out.len() >= cap || *nodes > 5_000_000 {
            return;
        }
        if level < 0 {
            if x.iter().any(|&c| c != 0) {
                // Keep one representative of each +/- pair: first nonzero
                // coordinate positive.
                let first = x.iter().find(|&&c| c != 0).copied().unwrap();
                if first > 0 {
                    out.push(x.clone());
                }
            }
            return;
        }
        let i = level as usize;
        // Center of the allowed interval for x_i given x_{i+1..}.
        let mut center = 0.0;
        for j in i + 1..n {
            center -= mu[j][i] * x[j] as f64;
        }
        let radius = (remaining / d[i]).max(0.0).sqrt();
        let lo = (center - radius).floor() as i64;
        let hi = (center + radius).ceil() as i64;
        for xi in lo..=hi {
            let diff = xi as f64 - center;
            let used = d[i] * diff * diff;
            if used <= remaining + 1e-9 {
                x[i] = xi;
                dfs(level - 1, n, d, mu, x, remaining - used, out, cap, nodes);
                x[i] = 0;
            }
            if out.len() >= cap || *nodes > 5_000_000 {
                return;
            }
        }
    }
    let mut nodes = 0usize;
    dfs((n - 1) as isize, n, &d, &mu, &mut x, slack, &mut out, cap, &mut nodes);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_skewed_lattice() {
        // Basis (1, 0), (100, 1): Gram of it.
        let b: Vec<Vec<f64>> = vec![vec![1.0, 0.0], vec![100.0, 1.0]];
        let mut g = vec![vec![0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = b[i][0] * b[j][0] + b[i][1] * b[j][1];
            }
        }
        let u = lll_gram(&mut g);
        // Reduced Gram should have small diagonal (shortest vectors 1).
        assert!(g[0][0] <= 2.0 + 1e-6);
        assert!(g[1][1] <= 2.0 + 1e-6);
        // U is unimodular.
        let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn enumerate_z2() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = short_vectors(&g, 1.0, 100);
        // (1,0), (0,1), (1,-1)? no: norm 2 > 1. (1,0),(0,1) and sign reps.
        assert_eq!(v.len(), 2);
        let v = short_vectors(&g, 2.0, 100);
        // adds (1,1) and (1,-1)
        assert_eq!(v.len(), 4);
    }
}
