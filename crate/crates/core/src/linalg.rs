//! Dense complex small-matrix arithmetic.
//!
//! Everything here targets matrices of dimension <= 16: Kronecker products,
//! an LU solver, a nonsymmetric complex eigensolver (Hessenberg reduction
//! followed by shifted QR), Pauli(x)Pauli vectorization of 4x4 operators, and
//! the rank-one rearrangement used for nearest-Kronecker factorization.

use crate::error::{Error, Result};
use num_complex::Complex;
use std::sync::OnceLock;

pub type C64 = Complex<f64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const I: C64 = Complex::new(0.0, 1.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build from a row-major slice of entries.
    pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension {
                expected: format!("{} entries", rows * cols),
                got: format!("{}", entries.len()),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InternalConsistency(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self {
            rows,
            cols,
            data: entries.to_vec(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from its entries.
    pub fn diag(entries: &[C64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn scale(&self, z: C64) -> Self {
        let mut out = self.clone();
        for e in &mut out.data {
            *e *= z;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.data.iter_mut().zip(&other.data) {
            *e += o;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (e, o) in out.data.iter_mut().zip(&other.data) {
            *e -= o;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(self.cols, v.len());
        let mut out = vec![ZERO; self.rows];
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = ZERO;
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance to another matrix.
    pub fn max_dev(&self, other: &Self) -> f64 {
        self.sub(other).norm_max()
    }

    /// Max-norm deviation from the identity of `self*self^dagger`.
    pub fn unitarity_dev(&self) -> f64 {
        let n = self.rows;
        self.mul(&self.adjoint()).max_dev(&Self::identity(n))
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = ONE;
        for k in 0..n {
            let mut p = k;
            let mut best = a[k * n + k].norm();
            for i in k + 1..n {
                let v = a[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 {
                return ZERO;
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let pivot = a[k * n + k];
            det *= pivot;
            for i in k + 1..n {
                let f = a[i * n + k] / pivot;
                a[i * n + k] = f;
                for j in k + 1..n {
                    let upper = a[k * n + j];
                    a[i * n + j] -= f * upper;
                }
            }
        }
        det
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product, dimensions multiply.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
    for i1 in 0..a.rows() {
        for j1 in 0..a.cols() {
            let f = a[(i1, j1)];
            if f == ZERO {
                continue;
            }
            for i2 in 0..b.rows() {
                for j2 in 0..b.cols() {
                    out[(i1 * b.rows() + i2, j1 * b.cols() + j2)] = f * b[(i2, j2)];
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pauli basis and vectorization
// ---------------------------------------------------------------------------

/// The 2x2 Pauli matrices (identity, x, y, z).
pub fn pauli2() -> [CMatrix; 4] {
    let o = CMatrix::identity(2);
    let x = CMatrix::from_rows(2, 2, &[ZERO, ONE, ONE, ZERO]).unwrap();
    let y = CMatrix::from_rows(2, 2, &[ZERO, -I, I, ZERO]).unwrap();
    let z = CMatrix::from_rows(2, 2, &[ONE, ZERO, ZERO, -ONE]).unwrap();
    [o, x, y, z]
}

/// The 16 matrices `sigma_a (x) sigma_b` in lexicographic order, index `4a + b`.
///
/// They are Hermitian and orthogonal: `Tr(B_i B_j) = 4 delta_ij`.
pub fn pauli_basis16() -> &'static [CMatrix; 16] {
    static BASIS: OnceLock<[CMatrix; 16]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let p = pauli2();
        std::array::from_fn(|i| kron(&p[i / 4], &p[i % 4]))
    })
}

/// Coefficients of a 4x4 operator in the Pauli(x)Pauli basis, `r_i = Tr(B_i X) / 4`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector {
    pub coeffs: [C64; 16],
}

impl PauliVector {
    pub fn as_slice(&self) -> &[C64] {
        &self.coeffs
    }
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    debug_assert_eq!(a.cols(), b.rows());
    let mut acc = ZERO;
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Expand a 4x4 operator over the Pauli(x)Pauli basis.
pub fn op_to_pauli(x: &CMatrix) -> Result<PauliVector> {
    if x.rows() != 4 || x.cols() != 4 {
        return Err(Error::Dimension {
            expected: "4x4".into(),
            got: format!("{}x{}", x.rows(), x.cols()),
        });
    }
    let basis = pauli_basis16();
    let coeffs = std::array::from_fn(|i| trace_product(&basis[i], x) * 0.25);
    Ok(PauliVector { coeffs })
}

/// Reconstruct the operator `X = sum_i r_i B_i`.
pub fn pauli_to_op(v: &PauliVector) -> CMatrix {
    let basis = pauli_basis16();
    let mut out = CMatrix::zeros(4, 4);
    for (i, b) in basis.iter().enumerate() {
        let r = v.coeffs[i];
        if r == ZERO {
            continue;
        }
        out = out.add(&b.scale(r));
    }
    out
}

// ---------------------------------------------------------------------------
// Linear solves
// ---------------------------------------------------------------------------

struct Lu {
    n: usize,
    lu: Vec<C64>,
    perm: Vec<usize>,
    min_pivot: f64,
    max_pivot: f64,
}

fn lu_factor(a: &CMatrix) -> Lu {
    assert!(a.is_square());
    let n = a.rows();
    let mut lu = a.data().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut min_pivot = f64::INFINITY;
    let mut max_pivot: f64 = 0.0;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[k * n + k].norm();
        for i in k + 1..n {
            let v = lu[i * n + k].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
        }
        let pivot = lu[k * n + k];
        let pn = pivot.norm();
        min_pivot = min_pivot.min(pn);
        max_pivot = max_pivot.max(pn);
        if pn == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let f = lu[i * n + k] / pivot;
            lu[i * n + k] = f;
            for j in k + 1..n {
                let upper = lu[k * n + j];
                lu[i * n + j] -= f * upper;
            }
        }
    }
    Lu {
        n,
        lu,
        perm,
        min_pivot,
        max_pivot,
    }
}

impl Lu {
    fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let f = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= f * xj;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let f = self.lu[i * n + j];
                let xj = x[j];
                x[i] -= f * xj;
            }
            let pivot = self.lu[i * n + i];
            x[i] = if pivot.norm() == 0.0 {
                ZERO
            } else {
                x[i] / pivot
            };
        }
        x
    }

    fn pivot_ratio(&self) -> f64 {
        if self.max_pivot == 0.0 {
            0.0
        } else {
            self.min_pivot / self.max_pivot
        }
    }
}

/// Solve `a x = b`; errors out when the pivot ratio signals near-singularity.
pub fn solve(a: &CMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::Dimension {
            expected: "square system".into(),
            got: format!("{}x{} with rhs {}", a.rows(), a.cols(), b.len()),
        });
    }
    let lu = lu_factor(a);
    let ratio = lu.pivot_ratio();
    if ratio < 1e-13 {
        return Err(Error::NearSingular { pivot_ratio: ratio });
    }
    Ok(lu.solve(b))
}

// ---------------------------------------------------------------------------
// Eigenvalues: complex Hessenberg reduction + shifted QR
// ---------------------------------------------------------------------------

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Reduce `h` in place to upper Hessenberg form by unitary similarity.
fn hessenberg(h: &mut CMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        // Householder vector for column k below the subdiagonal.
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = norm2(&v);
        if alpha <= f64::EPSILON * h.norm_max() {
            continue;
        }
        let phase = if v[0].norm() > 0.0 {
            v[0] / v[0].norm()
        } else {
            ONE
        };
        v[0] += phase * alpha;
        let vn = norm2(&v);
        if vn == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        // H <- (I - 2 v v*) H, rows k+1.. of every column.
        for j in 0..n {
            let mut dot = ZERO;
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            let dot = dot * 2.0;
            for (t, vi) in v.iter().enumerate() {
                let d = dot * vi;
                h[(k + 1 + t, j)] -= d;
            }
        }
        // H <- H (I - 2 v v*), cols k+1.. of every row.
        for i in 0..n {
            let mut dot = ZERO;
            for (t, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + t)] * vi;
            }
            let dot = dot * 2.0;
            for (t, vi) in v.iter().enumerate() {
                let d = dot * vi.conj();
                h[(i, k + 1 + t)] -= d;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

/// Complex Givens rotation zeroing `b` in the pair `(a, b)`:
/// `G [a; b] = [r; 0]` with `G = [[c, s], [-conj(s), c]]`, `c` real.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, ZERO);
    }
    let r = (an * an + bn * bn).sqrt();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let c = an / r;
    let s = (a / an) * b.conj() / r;
    (c, s)
}

/// Eigenvalues (with multiplicity) of a square complex matrix.
///
/// Shifted QR on the Hessenberg form with Wilkinson shifts; ordering of the
/// returned list is unspecified.
pub fn eig(m: &CMatrix) -> Result<Vec<C64>> {
    if !m.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }
    let mut h = m.clone();
    hessenberg(&mut h);

    let scale = h.norm_max().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut eigs = Vec::with_capacity(n);
    let mut hi = n - 1; // active block is rows/cols 0..=hi
    let mut iter_since_deflation = 0usize;
    let mut total_iters = 0usize;
    let max_total = 60 * n;

    loop {
        // Zero out negligible subdiagonals.
        for i in 1..=hi {
            let s = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(i, i - 1)].norm() <= eps * s {
                h[(i, i - 1)] = ZERO;
            }
        }
        // Deflate converged trailing eigenvalues.
        while hi > 0 && h[(hi, hi - 1)] == ZERO {
            eigs.push(h[(hi, hi)]);
            hi -= 1;
            iter_since_deflation = 0;
        }
        if hi == 0 {
            eigs.push(h[(0, 0)]);
            break;
        }
        // Find the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 && h[(lo, lo - 1)] != ZERO {
            lo -= 1;
        }

        total_iters += 1;
        if total_iters > max_total {
            return Err(Error::EigConvergence {
                iterations: total_iters,
            });
        }

        // Wilkinson shift from the trailing 2x2 of the active block.
        let shift = {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let tr = a + d;
            let det = a * d - b * c;
            let disc = (tr * tr - det * 4.0).sqrt();
            let l1 = (tr + disc) * 0.5;
            let l2 = (tr - disc) * 0.5;
            let base = if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            };
            if iter_since_deflation > 0 && iter_since_deflation % 12 == 0 {
                // Exceptional shift to break rare stalls.
                base + Complex::new(h[(hi, hi - 1)].norm(), 0.0)
            } else {
                base
            }
        };
        iter_since_deflation += 1;

        // Explicit shifted QR sweep on the active block via Givens rotations.
        let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let a = if i == lo {
                h[(i, i)] - shift
            } else {
                h[(i, i - if i == lo { 0 } else { 1 })] // placeholder, replaced below
            };
            // After previous rotations, the element to zero is h[(i+1, i)]
            // against the updated h[(i, i)] (minus shift only in the first row).
            let a = if i == lo { a } else { h[(i, i - 1 + 1)] - ZERO };
            let _ = a;
            let x = if i == lo { h[(i, i)] - shift } else { h[(i, i)] };
            let y = h[(i + 1, i)];
            let (c, s) = givens(x, y);
            rots.push((c, s));
            // Apply G to rows i, i+1 over columns i..=hi (and the shifted
            // diagonal entry handled implicitly through x).
            for j in i..=hi {
                let mut top = h[(i, j)];
                if j == i && i == lo {
                    top -= shift;
                }
                let mut bot = h[(i + 1, j)];
                if j == i && i != lo {
                    // nothing: shift only enters through the first column of
                    // the sweep for the explicit single-shift variant below
                }
                let new_top = top * c + bot * s;
                let new_bot = -s.conj() * top + bot * c;
                if j == i && i == lo {
                    h[(i, j)] = new_top + shift;
                } else {
                    h[(i, j)] = new_top;
                }
                bot = new_bot;
                h[(i + 1, j)] = bot;
            }
        }
        let _ = &rots;
        // Right-multiply by the adjoints: columns i, i+1 over rows lo..=min(i+2, hi).
        for (t, (c, s)) in rots.iter().enumerate() {
            let i = lo + t;
            for r in lo..=hi.min(i + 2) {
                let left = h[(r, i)];
                let right = h[(r, i + 1)];
                h[(r, i)] = left * *c + right * s.conj();
                h[(r, i + 1)] = -(*s) * left + right * *c;
            }
        }
    }

    Ok(eigs)
}

/// Unit eigenvector for a computed eigenvalue, by inverse iteration.
pub fn eigenvector_for(m: &CMatrix, lambda: C64) -> Result<Vec<C64>> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::Dimension {
            expected: "square matrix".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let scale = m.norm_max().max(1.0);
    // Tiny shift keeps the factorization usable when lambda is exact.
    let mut shifted = m.clone();
    let jitter = Complex::new(scale * 1e-14, scale * 1e-14);
    for i in 0..n {
        shifted[(i, i)] -= lambda + jitter;
    }
    let lu = lu_factor(&shifted);
    // Deterministic start vector with nonzero overlap against anything.
    let mut v: Vec<C64> = (0..n)
        .map(|i| Complex::new(1.0 + 0.17 * i as f64, 0.37 - 0.11 * i as f64))
        .collect();
    let nv = norm2(&v);
    for z in &mut v {
        *z /= nv;
    }
    let mut best = v.clone();
    let mut best_res = f64::INFINITY;
    for _ in 0..5 {
        let w = lu.solve(&v);
        let nw = norm2(&w);
        if !nw.is_finite() || nw == 0.0 {
            break;
        }
        v = w.into_iter().map(|z| z / nw).collect();
        let res = residual(m, lambda, &v);
        if res < best_res {
            best_res = res;
            best = v.clone();
        }
        if best_res <= 1e-14 * scale {
            break;
        }
    }
    Ok(best)
}

/// `|| (m - lambda I) v ||_2` for a unit vector `v`.
pub fn residual(m: &CMatrix, lambda: C64, v: &[C64]) -> f64 {
    let mv = m.matvec(v);
    let mut acc = 0.0;
    for i in 0..v.len() {
        acc += (mv[i] - lambda * v[i]).norm_sqr();
    }
    acc.sqrt()
}

// ---------------------------------------------------------------------------
// Nearest Kronecker factorization (rank-one rearrangement)
// ---------------------------------------------------------------------------

/// Result of [`nearest_kron_factor`].
pub struct KronFactors {
    pub left: CMatrix,
    pub right: CMatrix,
    pub residual: f64,
}

/// Best `P (x) Q` approximation (Frobenius) of a 16x16 matrix viewed as 4x4
/// blocks of 4x4, via the rank-one reduction of the rearranged matrix.
pub fn nearest_kron_factor(m: &CMatrix) -> Result<KronFactors> {
    if m.rows() != 16 || m.cols() != 16 {
        return Err(Error::Dimension {
            expected: "16x16".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    // Rearrangement: R[(i1*4 + j1), (i2*4 + j2)] = m[i1*4 + i2, j1*4 + j2],
    // so m = P (x) Q  <=>  R = rvec(P) rvec(Q)^T (row-major vec, no conjugate).
    let r = CMatrix::from_fn(16, 16, |rr, cc| {
        let (i1, j1) = (rr / 4, rr % 4);
        let (i2, j2) = (cc / 4, cc % 4);
        m[(i1 * 4 + i2, j1 * 4 + j2)]
    });

    // Dominant singular triple of R by power iteration on R^dagger R.
    let rh = r.adjoint();
    let g = rh.mul(&r);
    let mut v: Vec<C64> = (0..16)
        .map(|i| Complex::new(1.0, 0.013 * (i as f64 + 1.0)))
        .collect();
    let nv = norm2(&v);
    for z in &mut v {
        *z /= nv;
    }
    for _ in 0..2000 {
        let w = g.matvec(&v);
        let nw = norm2(&w);
        if nw == 0.0 {
            // R is zero: both factors zero.
            return Ok(KronFactors {
                left: CMatrix::zeros(4, 4),
                right: CMatrix::zeros(4, 4),
                residual: 0.0,
            });
        }
        let w: Vec<C64> = w.into_iter().map(|z| z / nw).collect();
        let delta: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        v = w;
        if delta < 1e-16 {
            break;
        }
    }
    let rv = r.matvec(&v);
    let sigma = norm2(&rv);
    let u: Vec<C64> = if sigma == 0.0 {
        vec![ZERO; 16]
    } else {
        rv.iter().map(|z| z / sigma).collect()
    };

    // R ~ sigma u v^dagger = x y^T with x = sigma u, y = conj(v).
    let left = CMatrix::from_fn(4, 4, |i, j| u[i * 4 + j] * sigma);
    let right = CMatrix::from_fn(4, 4, |i, j| v[i * 4 + j].conj());
    let approx = kron(&left, &right);
    let residual = m.sub(&approx).norm_fro();
    Ok(KronFactors {
        left,
        right,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn kron_identity_cases() {
        let i2 = CMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4));

        let z = pauli2()[3].clone();
        let zz = kron(&z, &z);
        let expect = CMatrix::diag(&[ONE, -ONE, -ONE, ONE]);
        assert_eq!(zz, expect);

        let h2 = CMatrix::from_rows(2, 2, &[ONE, ONE, ONE, -ONE])
            .unwrap()
            .scale(Complex::new(1.0 / 2f64.sqrt(), 0.0));
        let h4 = kron(&h2, &h2);
        for e in h4.data() {
            assert!((e.norm() - 0.5).abs() < 1e-15);
            assert!(e.im == 0.0);
        }
    }

    #[test]
    fn kron_associativity_exact_on_pauli_family() {
        let p = pauli2();
        for a in &p {
            for b in &p {
                for c in &p {
                    let lhs = kron(&kron(a, b), c);
                    let rhs = kron(a, &kron(b, c));
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // Random matrices: associative to roundoff (complex products regroup).
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2);
            let b = random_matrix(&mut rng, 2);
            let c = random_matrix(&mut rng, 2);
            assert!(kron(&kron(&a, &b), &c).max_dev(&kron(&a, &kron(&b, &c))) < 1e-15);
        }
    }

    #[test]
    fn pauli_basis_orthogonality_exact() {
        let basis = pauli_basis16();
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                let t = trace_product(bi, bj);
                let expect = if i == j { 4.0 } else { 0.0 };
                assert_eq!(t, Complex::new(expect, 0.0), "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn pauli_basis_index_layout() {
        let basis = pauli_basis16();
        assert_eq!(basis[0], CMatrix::identity(4));
        assert_eq!(basis[3], CMatrix::diag(&[ONE, -ONE, ONE, -ONE]));
        assert_eq!(basis[15], CMatrix::diag(&[ONE, -ONE, -ONE, ONE]));
    }

    #[test]
    fn pauli_expansion_basics() {
        let v = op_to_pauli(&CMatrix::identity(4)).unwrap();
        assert!((v.coeffs[0] - ONE).norm() < 1e-15);
        for i in 1..16 {
            assert!(v.coeffs[i].norm() < 1e-15);
        }

        let zz = pauli_basis16()[15].clone();
        let v = op_to_pauli(&zz).unwrap();
        assert!((v.coeffs[15] - ONE).norm() < 1e-15);
        for i in 0..15 {
            assert!(v.coeffs[i].norm() < 1e-15);
        }
    }

    #[test]
    fn pauli_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let x = random_matrix(&mut rng, 4);
            let v = op_to_pauli(&x).unwrap();
            let back = pauli_to_op(&v);
            assert!(back.max_dev(&x) < 1e-13);
            let again = op_to_pauli(&back).unwrap();
            for i in 0..16 {
                assert!((again.coeffs[i] - v.coeffs[i]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn density_operator_has_quarter_trace_coefficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 4);
            let rho = a.mul(&a.adjoint());
            let rho = rho.scale(ONE / rho.trace());
            let v = op_to_pauli(&rho).unwrap();
            assert!((v.coeffs[0] - Complex::new(0.25, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn eig_diagonal_and_identity() {
        let m = CMatrix::diag(&[ONE, -ONE, I]);
        let mut got = eig(&m).unwrap();
        got.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let mut want = vec![ONE, -ONE, I];
        want.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-12);
        }

        let got = eig(&CMatrix::identity(16)).unwrap();
        assert_eq!(got.len(), 16);
        for g in got {
            assert!((g - ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_square() {
        let m = CMatrix::zeros(3, 4);
        assert!(matches!(eig(&m), Err(Error::Dimension { .. })));
    }

    #[test]
    fn eig_recovers_known_spectrum_under_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..20 {
            let n = 16;
            let diag: Vec<C64> = (0..n)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let d = CMatrix::diag(&diag);
            // Well-conditioned similarity: S = I + 0.4 R with ||R||_max <= ~0.5.
            let mut s = CMatrix::identity(n);
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] += Complex::new(
                        rng.gen_range(-0.02..0.02),
                        rng.gen_range(-0.02..0.02),
                    );
                }
            }
            let s_inv_cols: Vec<Vec<C64>> = (0..n)
                .map(|j| {
                    let mut e = vec![ZERO; n];
                    e[j] = ONE;
                    solve(&s, &e).unwrap()
                })
                .collect();
            let s_inv = CMatrix::from_fn(n, n, |i, j| s_inv_cols[j][i]);
            let m = s.mul(&d).mul(&s_inv);
            let mut got = eig(&m).unwrap();
            let mut want = diag.clone();
            // Greedy multiset match.
            let mut worst = 0.0f64;
            for w in want.drain(..) {
                let (idx, dist) = got
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (i, (g - w).norm()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                worst = worst.max(dist);
                got.swap_remove(idx);
            }
            assert!(worst < 1e-9, "trial {trial}: worst match {worst:.3e}");
        }
    }

    #[test]
    fn eig_residuals_meet_contract() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let m = random_matrix(&mut rng, 16);
            let scale = m.norm_max();
            for lambda in eig(&m).unwrap() {
                let v = eigenvector_for(&m, lambda).unwrap();
                let res = residual(&m, lambda, &v);
                assert!(res <= 1e-10 * scale, "residual {res:.3e} vs {scale:.3e}");
            }
        }
    }

    #[test]
    fn solve_round_trip_and_singularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..50 {
            let a = random_matrix(&mut rng, 16);
            let x: Vec<C64> = (0..16)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let b = a.matvec(&x);
            let got = solve(&a, &b).unwrap();
            for i in 0..16 {
                assert!((got[i] - x[i]).norm() < 1e-9);
            }
        }
        let singular = CMatrix::zeros(4, 4);
        assert!(matches!(
            solve(&singular, &[ONE, ONE, ONE, ONE]),
            Err(Error::NearSingular { .. })
        ));
    }

    #[test]
    fn nearest_kron_exact_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let p = random_matrix(&mut rng, 4);
            let q = random_matrix(&mut rng, 4);
            let m = kron(&p, &q);
            let f = nearest_kron_factor(&m).unwrap();
            assert!(f.residual <= 1e-12, "residual {:.3e}", f.residual);
            assert!(kron(&f.left, &f.right).max_dev(&m) < 1e-12);
        }
        let f = nearest_kron_factor(&CMatrix::identity(16)).unwrap();
        assert!(f.residual <= 1e-12);
        assert!(kron(&f.left, &f.right).max_dev(&CMatrix::identity(16)) < 1e-13);
    }

    #[test]
    fn nearest_kron_perturbation_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..10 {
            let p = random_matrix(&mut rng, 4);
            let q = random_matrix(&mut rng, 4);
            let mut m = kron(&p, &q);
            // Additive noise with Frobenius norm exactly 1e-3.
            let noise = random_matrix(&mut rng, 16);
            let noise = noise.scale(Complex::new(1e-3 / noise.norm_fro(), 0.0));
            m = m.add(&noise);
            let f = nearest_kron_factor(&m).unwrap();
            assert!(f.residual <= 2e-3, "residual {:.3e}", f.residual);
        }
    }
}
