//! Fixed-size dense complex matrices for one and two qubits.
//!
//! Only what the two-qubit problem needs: products, adjoints, Kronecker and
//! Hadamard products, traces, determinants and the eigenvalues of a general
//! 4×4 complex matrix.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Column vector in the computational basis `{|00⟩, |01⟩, |10⟩, |11⟩}`.
pub type CVec4 = [C64; 4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat2(pub [[C64; 2]; 2]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat4(pub [[C64; 4]; 4]);

impl CMat2 {
    pub fn zeros() -> Self {
        CMat2([[ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        CMat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        let mut m = Self::zeros();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.0[i][j] = C64::new(v, 0.0);
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        CMat2([
            [a[0][0].conj(), a[1][0].conj()],
            [a[0][1].conj(), a[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z *= s);
        out
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    /// `exp(-i θ/2 σ_x)`.
    pub fn rotation_x(theta: f64) -> Self {
        let (s, c) = (0.5 * theta).sin_cos();
        CMat2([
            [C64::new(c, 0.0), C64::new(0.0, -s)],
            [C64::new(0.0, -s), C64::new(c, 0.0)],
        ])
    }
}

impl Index<(usize, usize)> for CMat2 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl Mul for CMat2 {
    type Output = CMat2;
    fn mul(self, rhs: CMat2) -> CMat2 {
        let mut out = CMat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }
}

impl Add for CMat2 {
    type Output = CMat2;
    fn add(self, rhs: CMat2) -> CMat2 {
        let mut out = self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

pub fn pauli_x() -> CMat2 {
    CMat2::from_real([[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> CMat2 {
    CMat2([[ZERO, -I], [I, ZERO]])
}

pub fn pauli_z() -> CMat2 {
    CMat2::from_real([[1.0, 0.0], [0.0, -1.0]])
}

/// Kronecker product: `(A⊗B)[2i+k][2j+l] = A[i][j]·B[k][l]`.
pub fn tensor2(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.0[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    out
}

/// Entrywise product `C[m][n] = A[m][n]·B[m][n]`.
pub fn hadamard(a: &CMat4, b: &CMat4) -> CMat4 {
    let mut out = CMat4::zeros();
    for m in 0..4 {
        for n in 0..4 {
            out.0[m][n] = a.0[m][n] * b.0[m][n];
        }
    }
    out
}

/// `σ_z⊗1`, `1⊗σ_z`, `σ_z⊗σ_z` as diagonals.
pub const SZ_A: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
pub const SZ_B: [f64; 4] = [1.0, -1.0, 1.0, -1.0];
pub const SZ_AB: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

impl CMat4 {
    pub fn zeros() -> Self {
        CMat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_diag([ONE; 4])
    }

    pub fn filled(z: C64) -> Self {
        CMat4([[z; 4]; 4])
    }

    pub fn from_diag(d: [C64; 4]) -> Self {
        let mut m = Self::zeros();
        for (k, z) in d.into_iter().enumerate() {
            m.0[k][k] = z;
        }
        m
    }

    pub fn from_real_diag(d: [f64; 4]) -> Self {
        Self::from_diag(d.map(|x| C64::new(x, 0.0)))
    }

    pub fn from_real(rows: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = C64::new(rows[i][j], 0.0);
            }
        }
        m
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &CVec4) -> Self {
        let mut m = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn diag(&self) -> [C64; 4] {
        [self.0[0][0], self.0[1][1], self.0[2][2], self.0[3][3]]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|z| *z = f(*z));
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> C64 {
        self.diag().iter().sum()
    }

    pub fn apply(&self, v: &CVec4) -> CVec4 {
        let mut out = [ZERO; 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|j| self.0[i][j] * v[j]).sum();
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> C64 {
        let mut a = self.0;
        let mut det = ONE;
        for k in 0..4 {
            let p = (k..4)
                .max_by(|&x, &y| a[x][k].norm().total_cmp(&a[y][k].norm()))
                .unwrap_or(k);
            if a[p][k].norm() == 0.0 {
                return ZERO;
            }
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            det *= a[k][k];
            for i in k + 1..4 {
                let f = a[i][k] / a[k][k];
                for j in k..4 {
                    let t = a[k][j];
                    a[i][j] -= f * t;
                }
            }
        }
        det
    }

    /// `U ρ U†` for a diagonal `U = diag(u)`, written entrywise so the
    /// diagonal of `ρ` is reproduced bit-for-bit.
    pub fn conjugate_by_diagonal(&self, u: &[C64; 4]) -> Self {
        let mut out = *self;
        for m in 0..4 {
            for n in 0..4 {
                if m != n {
                    out.0[m][n] = u[m] * self.0[m][n] * u[n].conj();
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMat4 {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMat4 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.0[i][j]
    }
}

impl Mul for CMat4 {
    type Output = CMat4;
    fn mul(self, rhs: CMat4) -> CMat4 {
        let mut out = CMat4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = (0..4).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        out
    }
}

impl Add for CMat4 {
    type Output = CMat4;
    fn add(self, rhs: CMat4) -> CMat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }
}

impl Sub for CMat4 {
    type Output = CMat4;
    fn sub(self, rhs: CMat4) -> CMat4 {
        let mut out = self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }
}

/// Four eigenvalues, in no particular order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Spectrum4(pub [C64; 4]);

impl Spectrum4 {
    pub fn sum(&self) -> C64 {
        self.0.iter().sum()
    }

    pub fn product(&self) -> C64 {
        self.0.iter().product()
    }

    /// Real parts sorted in descending order.
    pub fn real_descending(&self) -> [f64; 4] {
        let mut re = self.0.map(|z| z.re);
        re.sort_by(|a, b| b.total_cmp(a));
        re
    }

    pub fn max_imag(&self) -> f64 {
        self.0.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Eigenvalues of a general complex 4×4 matrix.
///
/// Householder reduction to upper Hessenberg form followed by single-shift
/// complex QR iteration (one unshifted sweep per active block, then
/// Wilkinson shifts, with an exceptional shift every tenth sweep without
/// deflation).
pub fn eig4(m: &CMat4) -> Result<Spectrum4> {
    if !m.is_finite() {
        return Err(Error::Numerical("eig4 input has non-finite entries".into()));
    }
    let mut h = m.0;
    hessenberg(&mut h);

    let anorm = h
        .iter()
        .flatten()
        .map(|z| z.norm())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let mut eig = [ZERO; 4];
    let mut hi = 3usize;
    let mut total = 0usize;
    let mut since_deflation = 0usize;

    loop {
        if hi == 0 {
            eig[0] = h[0][0];
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let mut s = h[lo][lo].norm() + h[lo - 1][lo - 1].norm();
            if s == 0.0 {
                s = anorm;
            }
            if h[lo][lo - 1].norm() <= tolerances::DEFLATION * s {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            since_deflation = 0;
            continue;
        }

        total += 1;
        if total > tolerances::EIG_MAX_ITER {
            return Err(Error::NoConvergence {
                iterations: tolerances::EIG_MAX_ITER,
            });
        }
        since_deflation += 1;
        let shift = if since_deflation == 1 {
            ZERO
        } else if since_deflation.is_multiple_of(10) {
            let sub = h[hi][hi - 1].norm()
                + if hi >= 2 {
                    h[hi - 1][hi - 2].norm()
                } else {
                    0.0
                };
            h[hi][hi] + C64::new(0.75 * sub, 0.0)
        } else {
            wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }

    Ok(Spectrum4(eig))
}

/// Complex Jacobi rotation that diagonalizes `[[α, γ], [γ̄, β]]`, returned
/// as `(c, s, e^{-iφ})` with `γ = |γ| e^{iφ}`; `None` if already diagonal.
fn jacobi_rotation(alpha: f64, beta: f64, gamma: C64) -> Option<(f64, f64, C64)> {
    let g = gamma.norm();
    if g == 0.0 {
        return None;
    }
    let theta = (beta - alpha) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    Some((c, t * c, gamma.conj() / g))
}

/// `x_p ← c x_p − s e^{-iφ} x_q`, `x_q ← s x_p + c e^{-iφ} x_q` on columns.
fn rotate_columns(x: &mut [[C64; 4]; 4], p: usize, q: usize, (c, s, ph): (f64, f64, C64)) {
    for row in x.iter_mut() {
        let (a, b) = (row[p], row[q]);
        row[p] = a * c - b * ph * s;
        row[q] = a * s + b * ph * c;
    }
}

/// Eigenvalues (descending) and eigenvectors (columns) of a Hermitian
/// 4×4 matrix by cyclic Jacobi rotations.
pub fn hermitian_eigen4(m: &CMat4) -> Result<([f64; 4], CMat4)> {
    if !m.is_finite() {
        return Err(Error::Numerical(
            "hermitian_eigen4 input has non-finite entries".into(),
        ));
    }
    let mut a = m.0;
    let mut v = CMat4::identity().0;
    for _ in 0..tolerances::JACOBI_MAX_SWEEPS {
        let off: f64 = (0..4)
            .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum();
        let diag: f64 = (0..4).map(|i| a[i][i].norm_sqr()).sum();
        if off <= f64::EPSILON * f64::EPSILON * diag || off == 0.0 {
            let mut idx = [0, 1, 2, 3];
            idx.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
            let vals = idx.map(|i| a[i][i].re);
            let vecs = CMat4(std::array::from_fn(|r| {
                std::array::from_fn(|k| v[r][idx[k]])
            }));
            return Ok((vals, vecs));
        }
        for p in 0..3 {
            for q in p + 1..4 {
                let Some(rot) = jacobi_rotation(a[p][p].re, a[q][q].re, a[p][q]) else {
                    continue;
                };
                // A ← G† A G
                rotate_columns(&mut a, p, q, rot);
                let mut at = CMat4(a).adjoint().0;
                rotate_columns(&mut at, p, q, rot);
                a = CMat4(at).adjoint().0;
                a[p][q] = ZERO;
                a[q][p] = ZERO;
                rotate_columns(&mut v, p, q, rot);
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: tolerances::JACOBI_MAX_SWEEPS,
    })
}

/// Singular values (descending) of a complex 4×4 matrix by one-sided
/// Jacobi orthogonalization of its columns. Small singular values carry
/// absolute error of order `ε‖M‖`.
pub fn singular_values4(m: &CMat4) -> Result<[f64; 4]> {
    if !m.is_finite() {
        return Err(Error::Numerical(
            "singular_values4 input has non-finite entries".into(),
        ));
    }
    let mut x = m.0;
    let col = |x: &[[C64; 4]; 4], p: usize, q: usize| -> C64 {
        (0..4).map(|r| x[r][p].conj() * x[r][q]).sum()
    };
    for _ in 0..tolerances::JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..3 {
            for q in p + 1..4 {
                let (alpha, beta, gamma) = (col(&x, p, p).re, col(&x, q, q).re, col(&x, p, q));
                // rounding leaves |γ| near ε‖x_p‖‖x_q‖, so a bare ε test can cycle;
                // a column below ε of its partner may underflow to a zero norm
                let negligible = alpha.min(beta) <= f64::EPSILON * f64::EPSILON * alpha.max(beta);
                if negligible || gamma.norm() <= 4.0 * f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                if let Some(rot) = jacobi_rotation(alpha, beta, gamma) {
                    rotate_columns(&mut x, p, q, rot);
                    rotated = true;
                }
            }
        }
        if !rotated {
            let mut sv: [f64; 4] = std::array::from_fn(|k| col(&x, k, k).re.max(0.0).sqrt());
            sv.sort_by(|a, b| b.total_cmp(a));
            return Ok(sv);
        }
    }
    Err(Error::NoConvergence {
        iterations: tolerances::JACOBI_MAX_SWEEPS,
    })
}

fn hessenberg(a: &mut [[C64; 4]; 4]) {
    for k in 0..2 {
        let mut v = [ZERO; 4];
        let norm_x = (k + 1..4).map(|i| a[i][k].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = a[k + 1][k];
        let phase = if x0.norm() == 0.0 {
            ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        for i in k + 1..4 {
            v[i] = a[i][k];
        }
        v[k + 1] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // A ← (I - 2vv†) A
        for j in 0..4 {
            let dot: C64 = (k + 1..4).map(|i| v[i].conj() * a[i][j]).sum();
            for i in k + 1..4 {
                a[i][j] -= 2.0 * v[i] * dot;
            }
        }
        // A ← A (I - 2vv†)
        for row in a.iter_mut() {
            let dot: C64 = (k + 1..4).map(|j| row[j] * v[j]).sum();
            for j in k + 1..4 {
                row[j] -= 2.0 * dot * v[j].conj();
            }
        }
        for i in k + 2..4 {
            a[i][k] = ZERO;
        }
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = 0.5 * (a - d);
    let disc = (half * half + b * c).sqrt();
    let m = 0.5 * (a + d);
    let (l1, l2) = (m + disc, m - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step `H - σ = QR, H ← RQ + σ` on the block
/// `lo..=hi`, with Givens rotations.
fn qr_sweep(h: &mut [[C64; 4]; 4], lo: usize, hi: usize, shift: C64) {
    for k in lo..=hi {
        h[k][k] -= shift;
    }
    let mut rots = [(0.0f64, ZERO); 3];
    for k in lo..hi {
        let (x, y) = (h[k][k], h[k + 1][k]);
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (1.0, ZERO)
        } else if x.norm() == 0.0 {
            (0.0, (y / r).conj())
        } else {
            let phase = x / x.norm();
            (x.norm() / r, phase * y.conj() / r)
        };
        // G = [[c, s], [-s̄, c]] applied to rows k, k+1
        for j in k..=hi {
            let (a, b) = (h[k][j], h[k + 1][j]);
            h[k][j] = c * a + s * b;
            h[k + 1][j] = -s.conj() * a + c * b;
        }
        rots[k - lo] = (c, s);
    }
    for k in lo..hi {
        let (c, s) = rots[k - lo];
        // multiply by G† on the right, columns k, k+1
        for row in h.iter_mut().take((k + 2).min(hi) + 1).skip(lo) {
            let (a, b) = (row[k], row[k + 1]);
            row[k] = c * a + s.conj() * b;
            row[k + 1] = -s * a + c * b;
        }
    }
    for k in lo..=hi {
        h[k][k] += shift;
    }
}
