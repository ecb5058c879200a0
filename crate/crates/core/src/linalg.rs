//! Fixed-shape complex and Lorentzian linear algebra.
//!
//! Everything here is sized at compile time: complex 2-vectors (columns) and
//! 2-covectors (rows), 2×2 complex matrices, Minkowski 3-vectors with the
//! signature `(-, -, +)` and 3×3 real matrices. Complex numbers serialize as
//! `[re, im]`, matrices row-major.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tol::DEFAULT_TOL;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix determinant {det} is not 1")]
    NotUnimodular { det: Complex64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is singular")]
    Singular,
    #[error("|alpha|^2 - |beta|^2 = {value}, expected 1")]
    NotSu11 { value: f64 },
}

/// Column vector `(c, d)ᵗ ∈ ℂ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex2Vector(pub [Complex64; 2]);

/// Row covector `(a, b) ∈ (ℂ²)*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex2Covector(pub [Complex64; 2]);

impl Complex2Vector {
    pub const ZERO: Self = Self([ZERO, ZERO]);

    pub fn new(c: Complex64, d: Complex64) -> Self {
        Self([c, d])
    }

    pub fn from_re(c: f64, d: f64) -> Self {
        Self([Complex64::new(c, 0.0), Complex64::new(d, 0.0)])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self([self.0[0] * s, self.0[1] * s])
    }

    /// Conjugate transpose, a covector.
    pub fn adjoint(&self) -> Complex2Covector {
        Complex2Covector([self.0[0].conj(), self.0[1].conj()])
    }

    /// Plain transpose, a covector.
    pub fn transpose(&self) -> Complex2Covector {
        Complex2Covector(self.0)
    }

    /// `v v*`.
    pub fn outer_adjoint(&self) -> Matrix2C {
        self.outer(&self.adjoint())
    }

    /// `v w`: column times row.
    pub fn outer(&self, w: &Complex2Covector) -> Matrix2C {
        Matrix2C([
            [self.0[0] * w.0[0], self.0[0] * w.0[1]],
            [self.0[1] * w.0[0], self.0[1] * w.0[1]],
        ])
    }

    /// Hermitian inner product `⟨self, w⟩ = self* w`.
    pub fn dot(&self, w: &Complex2Vector) -> Complex64 {
        self.0[0].conj() * w.0[0] + self.0[1].conj() * w.0[1]
    }

    /// `c₁d₂ − c₂d₁`, zero iff the two vectors are proportional.
    pub fn cross_det(&self, w: &Complex2Vector) -> Complex64 {
        self.0[0] * w.0[1] - self.0[1] * w.0[0]
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }

    /// Unit representative of the line `⟨self⟩` whose first component of
    /// non-negligible size is real positive. `None` for the zero vector.
    pub fn normalized_line(&self) -> Option<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        let k = if self.0[0].norm() > 1e-12 * n { 0 } else { 1 };
        let pivot = self.0[k];
        let phase = pivot.conj() / pivot.norm();
        // exact on inputs that are already normalized, so the map is idempotent
        let s = if (n - 1.0).abs() <= 4.0 * f64::EPSILON { 1.0 } else { n };
        let mut v = self.scale(phase / s);
        v.0[k] = Complex64::new(pivot.norm() / s, 0.0);
        Some(v)
    }
}

impl Complex2Covector {
    pub const ZERO: Self = Self([ZERO, ZERO]);

    pub fn new(a: Complex64, b: Complex64) -> Self {
        Self([a, b])
    }

    pub fn from_re(a: f64, b: f64) -> Self {
        Self([Complex64::new(a, 0.0), Complex64::new(b, 0.0)])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self([self.0[0] * s, self.0[1] * s])
    }

    pub fn adjoint(&self) -> Complex2Vector {
        Complex2Vector([self.0[0].conj(), self.0[1].conj()])
    }

    pub fn transpose(&self) -> Complex2Vector {
        Complex2Vector(self.0)
    }

    /// `p* p`.
    pub fn adjoint_outer(&self) -> Matrix2C {
        self.adjoint().outer(self)
    }

    /// The scalar `p q`.
    pub fn apply(&self, q: &Complex2Vector) -> Complex64 {
        self.0[0] * q.0[0] + self.0[1] * q.0[1]
    }

    /// Row vector times matrix, `p M`.
    pub fn mul_mat(&self, m: &Matrix2C) -> Self {
        let [a, b] = self.0;
        Self([a * m.0[0][0] + b * m.0[1][0], a * m.0[0][1] + b * m.0[1][1]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.is_finite())
    }
}

/// A 2×2 complex matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2C(pub [[Complex64; 2]; 2]);

impl Matrix2C {
    pub const ZERO: Self = Self([[ZERO, ZERO], [ZERO, ZERO]]);
    pub const IDENTITY: Self = Self([[ONE, ZERO], [ZERO, ONE]]);

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self([[a, b], [c, d]])
    }

    pub fn from_re(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        Self::new(a, ZERO, ZERO, d)
    }

    pub fn scalar(s: Complex64) -> Self {
        Self::diag(s, s)
    }

    /// The three Pauli matrices σ₁, σ₂, σ₃.
    pub fn pauli() -> [Self; 3] {
        [
            Self::new(ZERO, ONE, ONE, ZERO),
            Self::new(ZERO, -I, I, ZERO),
            Self::new(ONE, ZERO, ZERO, -ONE),
        ]
    }

    /// `s₁σ₁ + s₂σ₂ + s₃σ₃`, a traceless Hermitian matrix.
    pub fn from_pauli(s: [f64; 3]) -> Self {
        Self::new(
            Complex64::new(s[2], 0.0),
            Complex64::new(s[0], -s[1]),
            Complex64::new(s[0], s[1]),
            Complex64::new(-s[2], 0.0),
        )
    }

    /// Pauli coordinates `sₖ = ½ tr(σₖ M)`; exact inverse of
    /// [`Matrix2C::from_pauli`] on traceless Hermitian matrices.
    pub fn pauli_coords(&self) -> [f64; 3] {
        let m = &self.0;
        [
            0.5 * (m[0][1].re + m[1][0].re),
            0.5 * (m[1][0].im - m[0][1].im),
            0.5 * (m[0][0].re - m[1][1].re),
        ]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0], m[1][0], m[0][1], m[1][1])
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Self::new(m[0][0].conj(), m[0][1].conj(), m[1][0].conj(), m[1][1].conj())
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Self::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    /// `M − ½ tr(M) Id`.
    pub fn traceless_part(&self) -> Self {
        *self - Self::scalar(self.trace() * 0.5)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return Err(LinalgError::Singular);
        }
        let m = &self.0;
        Ok(Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0]).scale(det.inv()))
    }

    /// Inverse of a determinant-one matrix (the adjugate), no division.
    pub fn sl2_inverse(&self) -> Self {
        let m = &self.0;
        Self::new(m[1][1], -m[0][1], -m[1][0], m[0][0])
    }

    pub fn mul_vec(&self, v: &Complex2Vector) -> Complex2Vector {
        let m = &self.0;
        Complex2Vector([
            m[0][0] * v.0[0] + m[0][1] * v.0[1],
            m[1][0] * v.0[0] + m[1][1] * v.0[1],
        ])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|z| z.norm_sqr()).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.is_finite())
    }

    fn scale_tol(&self, tol: f64) -> f64 {
        tol * self.norm().max(1.0)
    }

    pub fn is_traceless(&self, tol: f64) -> bool {
        self.trace().norm() <= self.scale_tol(tol)
    }

    pub fn is_nilpotent(&self, tol: f64) -> bool {
        (*self * *self).norm() <= tol * self.norm_sqr().max(1.0)
    }

    pub fn is_sl2(&self, tol: f64) -> bool {
        (self.det() - ONE).norm() <= tol * self.norm_sqr().max(1.0)
    }

    pub fn is_su2(&self, tol: f64) -> bool {
        self.is_sl2(tol) && (self.adjoint() * *self - Self::IDENTITY).norm() <= self.scale_tol(tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (*self - self.adjoint()).norm() <= self.scale_tol(tol)
    }

    /// `exp(H)` for a traceless matrix `H`, via `H² = −det(H) Id`.
    pub fn exp_traceless(&self) -> Self {
        let r2 = -self.det();
        let r = r2.sqrt();
        let (c, s) = if r.norm() < 1e-8 {
            // Taylor: cosh r ≈ 1 + r²/2, sinh r / r ≈ 1 + r²/6
            (ONE + r2 * 0.5 + r2 * r2 / 24.0, ONE + r2 / 6.0 + r2 * r2 / 120.0)
        } else {
            (r.cosh(), r.sinh() / r)
        };
        Self::scalar(c) + self.scale(s)
    }

    /// Spectral data of a traceless Hermitian matrix `H = U diag(x, −x) U*`
    /// with `x ≥ 0` and `U ∈ SU(2)`.
    pub fn hermitian_traceless_eig(&self) -> (f64, Self) {
        let [s1, s2, s3] = self.pauli_coords();
        let x = (s1 * s1 + s2 * s2 + s3 * s3).sqrt();
        if x == 0.0 {
            return (0.0, Self::IDENTITY);
        }
        // eigenvector for +x, using whichever of the two rows is better conditioned
        let v = if s3 >= 0.0 {
            Complex2Vector::new(Complex64::new(s3 + x, 0.0), Complex64::new(s1, s2))
        } else {
            Complex2Vector::new(Complex64::new(s1, -s2), Complex64::new(x - s3, 0.0))
        };
        let v = v.scale(Complex64::new(1.0 / v.norm(), 0.0));
        let u = Self::new(v.0[0], -v.0[1].conj(), v.0[1], v.0[0].conj());
        (x, u)
    }
}

impl Add for Matrix2C {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (m, n) = (&self.0, &o.0);
        Self::new(m[0][0] + n[0][0], m[0][1] + n[0][1], m[1][0] + n[1][0], m[1][1] + n[1][1])
    }
}

impl Sub for Matrix2C {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Matrix2C {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-ONE)
    }
}

impl Mul for Matrix2C {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (m, n) = (&self.0, &o.0);
        Self::new(
            m[0][0] * n[0][0] + m[0][1] * n[1][0],
            m[0][0] * n[0][1] + m[0][1] * n[1][1],
            m[1][0] * n[0][0] + m[1][1] * n[1][0],
            m[1][0] * n[0][1] + m[1][1] * n[1][1],
        )
    }
}

impl std::iter::Sum for Matrix2C {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, |acc, m| acc + m)
    }
}

/// Positive Hermitian square root of a positive-definite Hermitian 2×2 matrix.
fn hermitian_sqrt(m: &Matrix2C) -> Matrix2C {
    let sdet = m.det().re.max(0.0).sqrt();
    let denom = (m.trace().re + 2.0 * sdet).sqrt();
    (*m + Matrix2C::scalar(sdet.into())).scale((1.0 / denom).into())
}

/// Polar decomposition `A = H R` of `A ∈ SL(2,ℂ)`, with `H = √(AA*)`
/// Hermitian positive of determinant one and `R ∈ SU(2)`.
pub fn polar_decompose(a: &Matrix2C) -> Result<(Matrix2C, Matrix2C), LinalgError> {
    polar_decompose_tol(a, DEFAULT_TOL)
}

pub fn polar_decompose_tol(a: &Matrix2C, tol: f64) -> Result<(Matrix2C, Matrix2C), LinalgError> {
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    if !a.is_sl2(tol) {
        return Err(LinalgError::NotUnimodular { det: a.det() });
    }
    let h = hermitian_sqrt(&(*a * a.adjoint()));
    let r = h.sl2_inverse() * *a;
    Ok((h, r))
}

/// `log H` of a Hermitian positive determinant-one matrix, returned as the
/// Pauli coordinates of the traceless Hermitian logarithm.
pub fn hermitian_log_coords(h: &Matrix2C) -> [f64; 3] {
    let traceless = h.traceless_part();
    let (lam, _) = traceless.hermitian_traceless_eig();
    // eigenvalues of h are m ± lam with m = tr/2; det = 1 gives m² − lam² = 1
    let m = 0.5 * h.trace().re;
    let top = m + lam;
    if lam == 0.0 || top <= 0.0 {
        return [0.0; 3];
    }
    let x = top.ln();
    let s = traceless.pauli_coords();
    [s[0] * x / lam, s[1] * x / lam, s[2] * x / lam]
}

/// Vector `(x, y, t)` in Minkowski space ℝ^{2,1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct MinkVector {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl From<[f64; 3]> for MinkVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<MinkVector> for [f64; 3] {
    fn from(v: MinkVector) -> Self {
        [v.x, v.y, v.t]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalType {
    Null,
    TimeLike,
    SpaceLike,
}

impl MinkVector {
    pub const ZERO: Self = Self { x: 0.0, y: 0.0, t: 0.0 };

    pub fn new(x: f64, y: f64, t: f64) -> Self {
        Self { x, y, t }
    }

    pub fn euclidean_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.t * self.t).sqrt()
    }

    /// `√|v∘v|`.
    pub fn mink_norm(&self) -> f64 {
        mink_dot(self, self).abs().sqrt()
    }

    /// Null when `|v∘v| ≤ tol·|v|²` (Euclidean), otherwise by the sign of `v∘v`.
    pub fn causal_type(&self, tol: f64) -> CausalType {
        let q = mink_dot(self, self);
        let e2 = self.x * self.x + self.y * self.y + self.t * self.t;
        if q.abs() <= tol * e2 {
            CausalType::Null
        } else if q > 0.0 {
            CausalType::TimeLike
        } else {
            CausalType::SpaceLike
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.t * s)
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.x - o.x).abs().max((self.y - o.y).abs()).max((self.t - o.t).abs())
    }
}

impl Add for MinkVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.t + o.t)
    }
}

impl Sub for MinkVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.t - o.t)
    }
}

impl Neg for MinkVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.t)
    }
}

impl std::iter::Sum for MinkVector {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, |a, b| a + b)
    }
}

/// `v∘w = −v₁w₁ − v₂w₂ + v₃w₃`.
pub fn mink_dot(v: &MinkVector, w: &MinkVector) -> f64 {
    -v.x * w.x - v.y * w.y + v.t * w.t
}

/// Minkowski cross product, the formal determinant with first row
/// `(−e₁, −e₂, e₃)`.
pub fn mink_cross(v: &MinkVector, w: &MinkVector) -> MinkVector {
    MinkVector::new(
        -(v.y * w.t - v.t * w.y),
        v.x * w.t - v.t * w.x,
        v.x * w.y - v.y * w.x,
    )
}

/// Real 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Self = Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    /// Rotation by `angle` (counter-clockwise in the x-y plane) about the t-axis.
    pub fn rotation_t(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    }

    /// Boost `T_φ` mixing y and t.
    pub fn boost_y(phi: f64) -> Self {
        let (ch, sh) = (phi.cosh(), phi.sinh());
        Self([[1.0, 0.0, 0.0], [0.0, ch, sh], [0.0, sh, ch]])
    }

    pub fn apply(&self, v: &MinkVector) -> MinkVector {
        let m = &self.0;
        MinkVector::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.t,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.t,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.t,
        )
    }

    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| (self.0[i][j] - o.0[i][j]).abs())
            .fold(0.0, f64::max)
    }
}

impl Mul for Mat3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut r = [[0.0; 3]; 3];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        Self(r)
    }
}

/// Coadjoint action of `[[α, β], [β̄, ᾱ]] ∈ SU(1,1)` on ℝ^{2,1}.
pub fn su11_coadjoint_matrix(alpha: Complex64, beta: Complex64) -> Result<Mat3, LinalgError> {
    su11_coadjoint_matrix_tol(alpha, beta, DEFAULT_TOL)
}

pub fn su11_coadjoint_matrix_tol(
    alpha: Complex64,
    beta: Complex64,
    tol: f64,
) -> Result<Mat3, LinalgError> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let value = alpha.norm_sqr() - beta.norm_sqr();
    if (value - 1.0).abs() > tol * (alpha.norm_sqr() + beta.norm_sqr()) {
        return Err(LinalgError::NotSu11 { value });
    }
    let a2mb2 = alpha * alpha - beta * beta;
    let a2pb2 = alpha * alpha + beta * beta;
    let ab = alpha * beta;
    let abc = alpha * beta.conj();
    Ok(Mat3([
        [a2mb2.re, -a2pb2.im, -2.0 * ab.im],
        [a2mb2.im, a2pb2.re, 2.0 * ab.re],
        [2.0 * abc.im, 2.0 * abc.re, alpha.norm_sqr() + beta.norm_sqr()],
    ]))
}
