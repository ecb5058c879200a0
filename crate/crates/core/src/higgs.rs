//! Quasi-parabolic `SL(2,ℂ)`-Higgs data on `ℂP¹` with trivial bundle.
//!
//! A Higgs field with simple poles at the marked points is stored through
//! its residues; `Φ(z) = Σ Nᵢ/(z − xᵢ) dz` is regular at infinity because
//! the residues sum to zero.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Complex2Vector, Matrix2C};
use crate::moment::{is_stable, mu_complex, HyperpolygonPoint, PointError};
use crate::tol::{DEFAULT_TOL, RESIDUE_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HiggsError {
    #[error("marked points {0} and {1} coincide")]
    CoincidentMarkedPoints(usize, usize),
    #[error("marked point {0} is not finite")]
    NonFiniteMarkedPoint(usize),
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("residue {0} is not traceless and nilpotent")]
    NotNilpotent(usize),
    #[error("residue {0} vanishes")]
    ZeroResidue(usize),
    #[error("flag {0} is zero")]
    ZeroFlag(usize),
    #[error("residue {0} does not kill its flag")]
    FlagMismatch(usize),
    #[error("residues sum to {0:e}, not zero")]
    NonZeroSum(f64),
    #[error("data is unstable: all flags are equal or a residue vanishes")]
    Unstable,
    #[error("point is unstable or off the zero level of the complex moment map")]
    BadPoint,
    #[error("evaluation at the marked point x_{0}")]
    PoleEvaluation(usize),
    #[error(transparent)]
    Point(#[from] PointError),
}

/// Distinct points `x₁,…,xₙ` in the affine chart of `ℂP¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct MarkedPoints(Vec<Complex64>);

impl TryFrom<Vec<Complex64>> for MarkedPoints {
    type Error = HiggsError;
    fn try_from(v: Vec<Complex64>) -> Result<Self, HiggsError> {
        Self::new(v)
    }
}

impl From<MarkedPoints> for Vec<Complex64> {
    fn from(m: MarkedPoints) -> Self {
        m.0
    }
}

impl MarkedPoints {
    pub fn new(points: Vec<Complex64>) -> Result<Self, HiggsError> {
        if let Some(i) = points.iter().position(|z| !z.is_finite()) {
            return Err(HiggsError::NonFiniteMarkedPoint(i));
        }
        let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).norm() <= 1e-6 * scale {
                    return Err(HiggsError::CoincidentMarkedPoints(i, j));
                }
            }
        }
        Ok(Self(points))
    }

    /// `xⱼ = e^{2πij/n}`.
    pub fn roots_of_unity(n: usize) -> Self {
        Self((0..n).map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64)).collect())
    }

    pub fn points(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn scale(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(1.0, f64::max)
    }
}

/// Marked points, flag lines `⟨qᵢ⟩` and nilpotent residues `Nᵢ` with
/// `Nᵢqᵢ = 0` and `Σ Nᵢ = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawHiggs", into = "RawHiggs")]
pub struct HiggsData {
    marked: MarkedPoints,
    flags: Vec<Complex2Vector>,
    residues: Vec<Matrix2C>,
}

#[derive(Serialize, Deserialize)]
struct RawHiggs {
    marked: MarkedPoints,
    flags: Vec<Complex2Vector>,
    residues: Vec<Matrix2C>,
}

impl TryFrom<RawHiggs> for HiggsData {
    type Error = HiggsError;
    fn try_from(r: RawHiggs) -> Result<Self, HiggsError> {
        Self::new(r.marked, r.flags, r.residues)
    }
}

impl From<HiggsData> for RawHiggs {
    fn from(h: HiggsData) -> Self {
        RawHiggs { marked: h.marked, flags: h.flags, residues: h.residues }
    }
}

impl HiggsData {
    /// Validates the residue conditions and stores each flag as its unit
    /// representative with first non-negligible entry real positive.
    pub fn new(marked: MarkedPoints, flags: Vec<Complex2Vector>, residues: Vec<Matrix2C>) -> Result<Self, HiggsError> {
        let n = marked.len();
        for len in [flags.len(), residues.len()] {
            if len != n {
                return Err(HiggsError::LengthMismatch { expected: n, got: len });
            }
        }
        let mut lines = Vec::with_capacity(n);
        for (i, (f, m)) in flags.iter().zip(&residues).enumerate() {
            let line = f.normalized_line().ok_or(HiggsError::ZeroFlag(i))?;
            let size = m.norm();
            if !m.is_finite() || size == 0.0 {
                return Err(HiggsError::ZeroResidue(i));
            }
            if m.trace().norm() > RESIDUE_TOL * size || (*m * *m).norm() > RESIDUE_TOL * size * size {
                return Err(HiggsError::NotNilpotent(i));
            }
            if m.mul_vec(&line).norm() > RESIDUE_TOL * size {
                return Err(HiggsError::FlagMismatch(i));
            }
            lines.push(line);
        }
        let total: f64 = residues.iter().map(Matrix2C::norm).sum();
        let sum = residues.iter().copied().sum::<Matrix2C>().norm();
        if sum > RESIDUE_TOL * total.max(1.0) {
            return Err(HiggsError::NonZeroSum(sum));
        }
        Ok(Self { marked, flags: lines, residues })
    }

    pub fn n(&self) -> usize {
        self.marked.len()
    }

    pub fn marked(&self) -> &MarkedPoints {
        &self.marked
    }

    pub fn flags(&self) -> &[Complex2Vector] {
        &self.flags
    }

    pub fn residues(&self) -> &[Matrix2C] {
        &self.residues
    }

    /// `‖Σ Nᵢ‖` and `maxᵢ ‖Nᵢ²‖`.
    pub fn residue_defects(&self) -> (f64, f64) {
        let sum = self.residues.iter().copied().sum::<Matrix2C>().norm();
        let nil = self.residues.iter().map(|m| (*m * *m).norm()).fold(0.0, f64::max);
        (sum, nil)
    }

    /// Largest difference after matching flags projectively.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (a, b) in self.marked.0.iter().zip(&o.marked.0) {
            m = m.max((a - b).norm());
        }
        for (a, b) in self.flags.iter().zip(&o.flags) {
            m = m.max((a.0[0] - b.0[0]).norm()).max((a.0[1] - b.0[1]).norm());
        }
        for (a, b) in self.residues.iter().zip(&o.residues) {
            m = m.max(a.max_abs_diff(b));
        }
        m
    }
}

/// `x ↦ (flags ⟨qᵢ⟩, residues qᵢpᵢ)` at the given marked points.
pub fn from_hyperpolygon(x: &HyperpolygonPoint, marked: &MarkedPoints, tol: f64) -> Result<HiggsData, HiggsError> {
    if marked.len() != x.n() {
        return Err(HiggsError::LengthMismatch { expected: x.n(), got: marked.len() });
    }
    if !is_stable(x, tol) || mu_complex(x).norm() > tol.max(DEFAULT_TOL) * x.scale().powi(2) {
        return Err(HiggsError::BadPoint);
    }
    HiggsData::new(marked.clone(), x.q().to_vec(), x.residues())
}

/// Inverse correspondence: `qᵢ` the stored flag representative and
/// `pᵢ = qᵢ* Nᵢ / |qᵢ|²`, so that `qᵢpᵢ = Nᵢ`.
pub fn to_hyperpolygon(h: &HiggsData) -> Result<HyperpolygonPoint, HiggsError> {
    if !higgs_stable(h, DEFAULT_TOL) {
        return Err(HiggsError::Unstable);
    }
    let p = h
        .flags
        .iter()
        .zip(&h.residues)
        .map(|(q, m)| q.adjoint().mul_mat(m).scale((1.0 / q.norm_sqr()).into()))
        .collect();
    Ok(HyperpolygonPoint::new(p, h.flags.clone())?)
}

/// `Φ(z) = Σ Nᵢ/(z − xᵢ)`.
pub fn higgs_eval(h: &HiggsData, z: Complex64) -> Result<Matrix2C, HiggsError> {
    let scale = h.marked.scale().max(z.norm());
    let mut out = Matrix2C::ZERO;
    for (i, (x, m)) in h.marked.0.iter().zip(&h.residues).enumerate() {
        let d = z - x;
        if d.norm() <= 1e-9 * scale {
            return Err(HiggsError::PoleEvaluation(i));
        }
        out = out + m.scale(d.inv());
    }
    Ok(out)
}

/// Nonzero residues everywhere and flags not all equal.
pub fn higgs_stable(h: &HiggsData, tol: f64) -> bool {
    let size = h.residues.iter().map(Matrix2C::norm).fold(0.0, f64::max);
    if h.residues.iter().any(|m| m.norm() <= tol * size) || size == 0.0 {
        return false;
    }
    let f0 = h.flags[0];
    h.flags.iter().any(|f| f0.cross_det(f).norm() > tol * f0.norm() * f.norm())
}

/// `(E, Φ) ↦ (E*, Φᵗ)`: residues are transposed and each flag becomes the
/// line `⟨pᵢᵗ⟩` that `Nᵢᵗ` kills.
pub fn theta_involution(h: &HiggsData) -> Result<HiggsData, HiggsError> {
    let x = to_hyperpolygon(h)?;
    let flags = x.p().iter().map(|p| p.transpose()).collect();
    let residues = h.residues.iter().map(Matrix2C::transpose).collect();
    HiggsData::new(h.marked.clone(), flags, residues)
}

/// Gauge action of `g ∈ SL(2,ℂ)`: flags `f ↦ g f`, residues `N ↦ g N g⁻¹`.
/// On hyperpolygons this is the action of `[g⁻¹; 1,…,1]`.
pub fn transform(h: &HiggsData, g: &Matrix2C) -> Result<HiggsData, HiggsError> {
    let ginv = g.inverse().map_err(|_| HiggsError::Unstable)?;
    let flags = h.flags.iter().map(|f| g.mul_vec(f)).collect();
    let residues = h.residues.iter().map(|m| *g * *m * ginv).collect();
    HiggsData::new(h.marked.clone(), flags, residues)
}
