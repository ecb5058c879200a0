//! Points of `T*ℂ²ⁿ`, the hyperkähler moment map and stability.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Complex2Covector, Complex2Vector, Matrix2C, I};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error("n = {0} is too small, need n >= 3")]
    TooFewIndices(usize),
    #[error("declared n = {n} but got {p} covectors and {q} vectors")]
    LengthMismatch { n: usize, p: usize, q: usize },
    #[error("point has non-finite coordinates")]
    NonFinite,
}

/// A point `(p, q) ∈ T*ℂ²ⁿ`: rows `pᵢ = (aᵢ, bᵢ)` and columns `qᵢ = (cᵢ, dᵢ)ᵗ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct HyperpolygonPoint {
    p: Vec<Complex2Covector>,
    q: Vec<Complex2Vector>,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    n: usize,
    p: Vec<Complex2Covector>,
    q: Vec<Complex2Vector>,
}

impl TryFrom<RawPoint> for HyperpolygonPoint {
    type Error = PointError;
    fn try_from(raw: RawPoint) -> Result<Self, PointError> {
        if raw.p.len() != raw.n || raw.q.len() != raw.n {
            return Err(PointError::LengthMismatch { n: raw.n, p: raw.p.len(), q: raw.q.len() });
        }
        Self::new(raw.p, raw.q)
    }
}

impl From<HyperpolygonPoint> for RawPoint {
    fn from(x: HyperpolygonPoint) -> Self {
        RawPoint { n: x.n(), p: x.p, q: x.q }
    }
}

impl HyperpolygonPoint {
    pub fn new(p: Vec<Complex2Covector>, q: Vec<Complex2Vector>) -> Result<Self, PointError> {
        if p.len() != q.len() {
            return Err(PointError::LengthMismatch { n: p.len(), p: p.len(), q: q.len() });
        }
        if p.len() < 3 {
            return Err(PointError::TooFewIndices(p.len()));
        }
        if !p.iter().all(Complex2Covector::is_finite) || !q.iter().all(Complex2Vector::is_finite) {
            return Err(PointError::NonFinite);
        }
        Ok(Self { p, q })
    }

    /// The zero point of `T*ℂ²ⁿ`.
    pub fn zero(n: usize) -> Result<Self, PointError> {
        Self::new(vec![Complex2Covector::ZERO; n], vec![Complex2Vector::ZERO; n])
    }

    /// The four-edge fixture: `p = ((0,1),(0,−1),(1,0),(−1,0))`,
    /// `q = ((1,0),(1,0),(0,1),(0,1))`.
    pub fn p4() -> Self {
        Self {
            p: vec![
                Complex2Covector::from_re(0.0, 1.0),
                Complex2Covector::from_re(0.0, -1.0),
                Complex2Covector::from_re(1.0, 0.0),
                Complex2Covector::from_re(-1.0, 0.0),
            ],
            q: vec![
                Complex2Vector::from_re(1.0, 0.0),
                Complex2Vector::from_re(1.0, 0.0),
                Complex2Vector::from_re(0.0, 1.0),
                Complex2Vector::from_re(0.0, 1.0),
            ],
        }
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[Complex2Covector] {
        &self.p
    }

    pub fn q(&self) -> &[Complex2Vector] {
        &self.q
    }

    pub fn into_parts(self) -> (Vec<Complex2Covector>, Vec<Complex2Vector>) {
        (self.p, self.q)
    }

    /// `Σ |pᵢ|² + |qᵢ|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.p.iter().map(|v| v.norm_sqr()).sum::<f64>() + self.q.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Root-mean-square size of one index, `√(Σ|pᵢ|²+|qᵢ|²)/n)`, floored at 1.
    pub fn scale(&self) -> f64 {
        (self.norm_sqr() / self.n() as f64).sqrt().max(1.0)
    }

    /// Largest entrywise difference between two points of the same size.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (a, b) in self.p.iter().zip(&other.p) {
            m = m.max((a.0[0] - b.0[0]).norm()).max((a.0[1] - b.0[1]).norm());
        }
        for (a, b) in self.q.iter().zip(&other.q) {
            m = m.max((a.0[0] - b.0[0]).norm()).max((a.0[1] - b.0[1]).norm());
        }
        m
    }

    /// Residues `Nᵢ = qᵢ pᵢ`.
    pub fn residues(&self) -> Vec<Matrix2C> {
        self.q.iter().zip(&self.p).map(|(q, p)| q.outer(p)).collect()
    }
}

/// `μ_R(x) = (M, r)` with `M` traceless Hermitian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealMoment {
    pub su2_star: Matrix2C,
    pub r_n: Vec<f64>,
}

/// `μ_C(x) = (Z, c)` with `Z` traceless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMoment {
    pub sl2_star: Matrix2C,
    pub c_n: Vec<Complex64>,
}

impl RealMoment {
    pub fn norm(&self) -> f64 {
        (self.su2_star.norm_sqr() + self.r_n.iter().map(|r| r * r).sum::<f64>()).sqrt()
    }
}

impl ComplexMoment {
    pub fn norm(&self) -> f64 {
        (self.sl2_star.norm_sqr() + self.c_n.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }
}

pub fn mu_real(x: &HyperpolygonPoint) -> RealMoment {
    let sum: Matrix2C = x
        .q
        .iter()
        .zip(&x.p)
        .map(|(q, p)| q.outer_adjoint() - p.adjoint_outer())
        .sum();
    let r_n = x.q.iter().zip(&x.p).map(|(q, p)| -0.5 * (q.norm_sqr() - p.norm_sqr())).collect();
    RealMoment { su2_star: sum.traceless_part().scale(0.5.into()), r_n }
}

pub fn mu_complex(x: &HyperpolygonPoint) -> ComplexMoment {
    let sum: Matrix2C = x.residues().into_iter().sum();
    let c_n = x.q.iter().zip(&x.p).map(|(q, p)| I * p.apply(q)).collect();
    ComplexMoment { sl2_star: sum.traceless_part().scale(-I), c_n }
}

/// Whether `x` lies in `P₀ⁿ`: both moment maps vanish and no index is zero.
pub fn in_p0n(x: &HyperpolygonPoint, tol: f64) -> bool {
    let min_norm = x
        .q
        .iter()
        .zip(&x.p)
        .map(|(q, p)| q.norm_sqr() + p.norm_sqr())
        .fold(f64::INFINITY, f64::min);
    mu_real(x).norm() <= tol && mu_complex(x).norm() <= tol && min_norm > tol
}

/// Whether the vectors `qᵢ`, `i ∈ s`, are pairwise proportional. Indices are
/// 0-based.
pub fn is_straight(x: &HyperpolygonPoint, s: &[usize], tol: f64) -> bool {
    for (k, &i) in s.iter().enumerate() {
        for &j in &s[k + 1..] {
            let (qi, qj) = (&x.q[i], &x.q[j]);
            if qi.cross_det(qj).norm() > tol * qi.norm() * qj.norm() {
                return false;
            }
        }
    }
    true
}

/// Stability: every `pᵢ` and `qᵢ` is nonzero and `{1,…,n}` is not straight.
pub fn is_stable(x: &HyperpolygonPoint, tol: f64) -> bool {
    let floor = tol * x.scale();
    if x.p.iter().any(|p| p.norm() <= floor) || x.q.iter().any(|q| q.norm() <= floor) {
        return false;
    }
    let all: Vec<usize> = (0..x.n()).collect();
    !is_straight(x, &all, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{ONE, ZERO};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_point() {
        let z = HyperpolygonPoint::zero(4).unwrap();
        assert_eq!(mu_real(&z).norm(), 0.0);
        assert_eq!(mu_complex(&z).norm(), 0.0);
        assert!(!in_p0n(&z, 1e-9));
        assert!(!is_stable(&z, 1e-9));
    }

    #[test]
    fn p4_is_in_p0n_and_stable() {
        let x = HyperpolygonPoint::p4();
        assert_eq!(mu_real(&x).norm(), 0.0);
        assert_eq!(mu_complex(&x).norm(), 0.0);
        assert!(in_p0n(&x, 1e-9));
        assert!(is_stable(&x, 1e-9));
        assert!(is_straight(&x, &[0, 1], 1e-9));
        assert!(!is_straight(&x, &[0, 2], 1e-9));
        assert!(is_straight(&x, &[3], 1e-9));
    }

    #[test]
    fn p4_with_zeroed_index() {
        let (mut p, mut q) = HyperpolygonPoint::p4().into_parts();
        p[0] = Complex2Covector::ZERO;
        q[0] = Complex2Vector::ZERO;
        let x = HyperpolygonPoint::new(p, q).unwrap();
        assert!(!in_p0n(&x, 1e-9));

        let (mut p, q) = HyperpolygonPoint::p4().into_parts();
        p[1] = Complex2Covector::ZERO;
        assert!(!is_stable(&HyperpolygonPoint::new(p, q).unwrap(), 1e-9));
    }

    #[test]
    fn straight_configuration_is_unstable() {
        let p = vec![
            Complex2Covector::from_re(0.0, 1.0),
            Complex2Covector::from_re(0.0, 2.0),
            Complex2Covector::from_re(0.0, -3.0),
        ];
        let q = vec![Complex2Vector::from_re(1.0, 0.0); 3];
        assert!(!is_stable(&HyperpolygonPoint::new(p, q).unwrap(), 1e-9));
    }

    #[test]
    fn single_nilpotent_summand() {
        let mut p = vec![Complex2Covector::ZERO; 3];
        let mut q = vec![Complex2Vector::ZERO; 3];
        p[0] = Complex2Covector::from_re(0.0, 1.0);
        q[0] = Complex2Vector::from_re(1.0, 0.0);
        let m = mu_complex(&HyperpolygonPoint::new(p, q).unwrap());
        assert!(m.c_n.iter().all(|z| *z == ZERO));
        assert_eq!(m.sl2_star, Matrix2C::new(ZERO, -I, ZERO, ZERO));
    }

    #[test]
    fn moment_parts_are_traceless() {
        let p = vec![
            Complex2Covector::new(c(0.3, 1.0), c(-2.0, 0.5)),
            Complex2Covector::new(c(1.1, -0.2), c(0.0, 0.7)),
            Complex2Covector::new(c(-0.4, 0.4), c(0.9, 0.1)),
        ];
        let q = vec![
            Complex2Vector::new(c(0.5, 0.5), c(1.0, -1.0)),
            Complex2Vector::new(ONE, c(0.2, 0.3)),
            Complex2Vector::new(c(-0.1, 0.8), c(0.6, 0.0)),
        ];
        let x = HyperpolygonPoint::new(p, q).unwrap();
        assert!(mu_real(&x).su2_star.is_traceless(1e-12));
        assert!(mu_real(&x).su2_star.is_hermitian(1e-12));
        assert!(mu_complex(&x).sl2_star.is_traceless(1e-12));
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let x = HyperpolygonPoint::p4();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with("{\"n\":4,"));
        let y: HyperpolygonPoint = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
        let bad = s.replacen("\"n\":4", "\"n\":5", 1);
        assert!(serde_json::from_str::<HyperpolygonPoint>(&bad).is_err());
    }
}
