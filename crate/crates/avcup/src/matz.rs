//! Exact matrix algebra over Z and Q: Hermite and Smith normal forms,
//! fraction-free determinants, kernels and lattice operations.
//!
//! Matrices are row-major; lattices are represented by their rows. All
//! normal forms here are naive gcd-driven algorithms, which is the right
//! trade-off at the dimensions this crate works at (degree <= 12 fields).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense matrix over Z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let t = a * b;
                        out[(i, j)] += t;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[BigInt], m: &Mat) -> Vec<BigInt> {
        assert_eq!(v.len(), m.rows);
        (0..m.cols)
            .map(|j| (0..m.rows).map(|i| &v[i] * &m[(i, j)]).sum::<BigInt>())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_multiple_of_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self[(src, j)] * q;
            self[(dst, j)] += t;
        }
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Row Hermite normal form. Returns the echelon matrix with zero rows
/// removed: pivots positive, entries above each pivot reduced into
/// [0, pivot).
pub fn hnf(m: &Mat) -> Mat {
    let (h, _) = hnf_with_transform(m);
    let keep: Vec<usize> = (0..h.rows).filter(|&i| !h.is_zero_row(i)).collect();
    Mat::from_rows(keep.into_iter().map(|i| h.row_vec(i)).collect())
}

/// HNF together with a unimodular U such that U * m = h (zero rows kept).
pub fn hnf_with_transform(m: &Mat) -> (Mat, Mat) {
    let mut a = m.clone();
    let mut u = Mat::identity(m.rows);
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row >= a.rows {
            break;
        }
        // Clear entries below pivot_row in this column by gcd steps.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..a.rows {
                if !a[(i, col)].is_zero() {
                    match best {
                        None => best = Some(i),
                        Some(b) => {
                            if a[(i, col)].abs() < a[(b, col)].abs() {
                                best = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            let mut any = false;
            for i in pivot_row + 1..a.rows {
                if !a[(i, col)].is_zero() {
                    let q = -(&a[(i, col)] / &a[(pivot_row, col)]);
                    a.add_multiple_of_row(i, pivot_row, &q);
                    u.add_multiple_of_row(i, pivot_row, &q);
                    if !a[(i, col)].is_zero() {
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
        }
        if a[(pivot_row, col)].is_zero() {
            continue;
        }
        if a[(pivot_row, col)].is_negative() {
            a.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        // Reduce entries above the pivot.
        for i in 0..pivot_row {
            let q = -a[(i, col)].div_floor(&a[(pivot_row, col)]);
            a.add_multiple_of_row(i, pivot_row, &q);
            u.add_multiple_of_row(i, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (a, u)
}

/// Basis (as rows) of the left kernel {x : x * m = 0}.
pub fn left_kernel(m: &Mat) -> Mat {
    let (h, u) = hnf_with_transform(m);
    let rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.is_zero_row(i))
        .map(|i| u.row_vec(i))
        .collect();
    if rows.is_empty() {
        Mat::zero(0, m.rows)
    } else {
        Mat::from_rows(rows)
    }
}

/// Basis of the lattice {x in Z^m : x * a = 0 (mod q)}, q > 0.
/// Always contains q Z^m, so the result is a full-rank m x m HNF basis.
pub fn solutions_mod(a: &Mat, q: &BigInt) -> Mat {
    assert!(q.is_positive());
    let m = a.rows;
    let k = a.cols;
    let mut stacked = Mat::zero(m + k, k);
    for i in 0..m {
        for j in 0..k {
            stacked[(i, j)] = a[(i, j)].clone();
        }
    }
    for j in 0..k {
        stacked[(m + j, j)] = q.clone();
    }
    let ker = left_kernel(&stacked);
    let mut rows: Vec<Vec<BigInt>> = (0..ker.rows)
        .map(|i| ker.row(i)[..m].to_vec())
        .collect();
    // Guarantee full rank even if the kernel projection degenerates.
    for j in 0..m {
        let mut r = vec![BigInt::zero(); m];
        r[j] = q.clone();
        rows.push(r);
    }
    hnf(&Mat::from_rows(rows))
}

/// Smith normal form: returns (d, u, v, v_inv) with u * m * v = d diagonal,
/// d[i] | d[i+1], u and v unimodular.
pub fn snf(m: &Mat) -> (Mat, Mat, Mat, Mat) {
    let mut a = m.clone();
    let mut u = Mat::identity(m.rows);
    let mut v = Mat::identity(m.cols);
    let mut v_inv = Mat::identity(m.cols);

    let swap_cols = |a: &mut Mat, v: &mut Mat, vi: &mut Mat, x: usize, y: usize| {
        if x == y {
            return;
        }
        for i in 0..a.rows {
            a.data.swap(i * a.cols + x, i * a.cols + y);
        }
        for i in 0..v.rows {
            v.data.swap(i * v.cols + x, i * v.cols + y);
        }
        vi.swap_rows(x, y);
    };
    // col[y] += q * col[x]; inverse op on v_inv: row[x] -= q * row[y]
    let add_col = |a: &mut Mat, v: &mut Mat, vi: &mut Mat, y: usize, x: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for i in 0..a.rows {
            let t = &a[(i, x)] * q;
            a[(i, y)] += t;
        }
        for i in 0..v.rows {
            let t = &v[(i, x)] * q;
            v[(i, y)] += t;
        }
        let nq = -q;
        vi.add_multiple_of_row(x, y, &nq);
    };
    let negate_col = |a: &mut Mat, v: &mut Mat, vi: &mut Mat, x: usize| {
        for i in 0..a.rows {
            let t = -std::mem::take(&mut a[(i, x)]);
            a[(i, x)] = t;
        }
        for i in 0..v.rows {
            let t = -std::mem::take(&mut v[(i, x)]);
            v[(i, x)] = t;
        }
        vi.negate_row(x);
    };

    let n = a.rows.min(a.cols);
    let mut t = 0;
    while t < n {
        // Find a nonzero pivot in the submatrix starting at (t, t).
        let mut piv: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                if !a[(i, j)].is_zero() {
                    match piv {
                        None => piv = Some((i, j)),
                        Some((pi, pj)) => {
                            if a[(i, j)].abs() < a[(pi, pj)].abs() {
                                piv = Some((i, j));
                            }
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..a.rows {
                if !a[(i, t)].is_zero() {
                    let q = -(&a[(i, t)] / &a[(t, t)]);
                    a.add_multiple_of_row(i, t, &q);
                    u.add_multiple_of_row(i, t, &q);
                    if !a[(i, t)].is_zero() {
                        a.swap_rows(t, i);
                        u.swap_rows(t, i);
                        dirty = true;
                    }
                }
            }
            for j in t + 1..a.cols {
                if !a[(t, j)].is_zero() {
                    let q = -(&a[(t, j)] / &a[(t, t)]);
                    add_col(&mut a, &mut v, &mut v_inv, j, t, &q);
                    if !a[(t, j)].is_zero() {
                        swap_cols(&mut a, &mut v, &mut v_inv, t, j);
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // Enforce divisibility d[t] | a[i][j] for the rest of the matrix.
        let mut fixed = true;
        'outer: for i in t + 1..a.rows {
            for j in t + 1..a.cols {
                if !(&a[(i, j)] % &a[(t, t)]).is_zero() {
                    let one = BigInt::one();
                    a.add_multiple_of_row(t, i, &one);
                    u.add_multiple_of_row(t, i, &one);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            if a[(t, t)].is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
    }
    // Normalize signs of any remaining diagonal entries.
    for i in 0..n {
        if a[(i, i)].is_negative() {
            negate_col(&mut a, &mut v, &mut v_inv, i);
        }
    }
    (a, u, v, v_inv)
}

/// Intersection of two row lattices of the same ambient dimension.
pub fn lattice_intersection(l1: &Mat, l2: &Mat) -> Mat {
    assert_eq!(l1.cols, l2.cols);
    let mut stacked = Mat::zero(l1.rows + l2.rows, l1.cols);
    for i in 0..l1.rows {
        for j in 0..l1.cols {
            stacked[(i, j)] = l1[(i, j)].clone();
        }
    }
    for i in 0..l2.rows {
        for j in 0..l2.cols {
            stacked[(l1.rows + i, j)] = -l2[(i, j)].clone();
        }
    }
    let ker = left_kernel(&stacked);
    let rows: Vec<Vec<BigInt>> = (0..ker.rows)
        .map(|i| Mat::vec_mul(&ker.row(i)[..l1.rows], l1))
        .collect();
    if rows.is_empty() {
        Mat::zero(0, l1.cols)
    } else {
        hnf(&Mat::from_rows(rows))
    }
}

/// Membership of an integer vector in a row lattice given in HNF.
pub fn in_hnf_lattice(h: &Mat, v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    let mut row = 0;
    for col in 0..h.cols {
        if row < h.rows && !h[(row, col)].is_zero() {
            let (q, r) = v[col].div_rem(&h[(row, col)]);
            if r.is_zero() {
                for j in col..h.cols {
                    let t = &h[(row, j)] * &q;
                    v[j] -= t;
                }
            } else {
                return false;
            }
            row += 1;
        } else if !v[col].is_zero() {
            return false;
        }
    }
    v.iter().all(|x| x.is_zero())
}

/// Intersection of full-rank rational row lattices given as (numerator
/// matrix, denominator) pairs. Returns the result in the same form with
/// the numerator in HNF.
pub fn rational_lattice_intersection(lats: &[(Mat, BigInt)]) -> (Mat, BigInt) {
    assert!(!lats.is_empty());
    let mut acc = lats[0].clone();
    acc.0 = hnf(&acc.0);
    for (num, den) in &lats[1..] {
        let l = acc.1.lcm(den);
        let scale = |m: &Mat, k: &BigInt| {
            let mut out = m.clone();
            for i in 0..m.rows {
                for j in 0..m.cols {
                    out[(i, j)] = &m[(i, j)] * k;
                }
            }
            out
        };
        let s1 = scale(&acc.0, &(&l / &acc.1));
        let s2 = scale(num, &(&l / den));
        acc = (lattice_intersection(&s1, &s2), l);
    }
    // Reduce the common content into the denominator.
    let mut g = acc.1.clone();
    for i in 0..acc.0.rows {
        for j in 0..acc.0.cols {
            g = g.gcd(&acc.0[(i, j)]);
        }
    }
    if !g.is_one() && !g.is_zero() {
        for i in 0..acc.0.rows {
            for j in 0..acc.0.cols {
                let t = &acc.0[(i, j)] / &g;
                acc.0[(i, j)] = t;
            }
        }
        acc.1 /= g;
    }
    acc
}

/// Basis of the left kernel of `m` over F_p: vectors x with x*m = 0 mod p.
/// Entries of the basis are reduced to [0, p).
pub fn left_kernel_mod_p(m: &Mat, p: &BigInt) -> Vec<Vec<BigInt>> {
    // Row-reduce [m | I] mod p; rows whose m-part vanishes give the kernel.
    let rows = m.rows;
    let cols = m.cols;
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut r: Vec<BigInt> = m.row(i).iter().map(|x| x.mod_floor(p)).collect();
            for j in 0..rows {
                r.push(if i == j { BigInt::one() } else { BigInt::zero() });
            }
            r
        })
        .collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        let inv = crate::arith::inv_mod(&a[r][c], p).expect("p prime");
        for j in 0..cols + rows {
            a[r][j] = (&a[r][j] * &inv).mod_floor(p);
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols + rows {
                    let t = (&a[r][j] * &f).mod_floor(p);
                    a[i][j] = (&a[i][j] - t).mod_floor(p);
                }
            }
        }
        r += 1;
    }
    a.into_iter()
        .filter(|row| row[..cols].iter().all(|x| x.is_zero()))
        .map(|row| row[cols..].to_vec())
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect()
}

/// Solve x * m = rhs over Z (row-vector convention). Returns None when no
/// integer solution exists.
pub fn solve_left(m: &Mat, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(rhs.len(), m.cols);
    let (h, u) = hnf_with_transform(m);
    let mut r = rhs.to_vec();
    let mut w = vec![BigInt::zero(); h.rows];
    for i in 0..h.rows {
        let Some(col) = (0..h.cols).find(|&j| !h[(i, j)].is_zero()) else {
            continue;
        };
        // Columns left of the pivot must already be cleared.
        if r[..col].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, rem) = r[col].div_rem(&h[(i, col)]);
        if !rem.is_zero() {
            return None;
        }
        for j in col..h.cols {
            let t = &h[(i, j)] * &q;
            r[j] -= t;
        }
        w[i] = q;
    }
    if r.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(Mat::vec_mul(&w, &u))
}

// ---------------------------------------------------------------------------
// Rational linear algebra
// ---------------------------------------------------------------------------

/// Solve a * x = b over Q for square a given by rows. Returns None if singular.
pub fn solve_rat(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..=n {
            m[col][j] = &m[col][j] * &inv;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let t = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Inverse of a square rational matrix given by rows.
pub fn invert_rat(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = BigRational::one();
        cols.push(solve_rat(a, &e)?);
    }
    // cols[j] is the j-th column of the inverse.
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for (j, col) in cols.iter().enumerate() {
        for (i, val) in col.iter().enumerate() {
            out[i][j] = val.clone();
        }
    }
    Some(out)
}

/// Right kernel basis of a rectangular rational matrix (rows x cols).
pub fn kernel_rat(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if a.is_empty() {
        return vec![];
    }
    let rows = a.len();
    let cols = a[0].len();
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for c in 0..cols {
        if pivot_cols.contains(&c) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[c] = BigRational::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[ri][c].clone();
        }
        basis.push(v);
    }
    basis
}
