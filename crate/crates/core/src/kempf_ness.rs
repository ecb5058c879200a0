//! The Kempf–Ness function `d_x` on `Kᶜ` and a minimizer for it.
//!
//! Directions are pairs `(s, ξ) ∈ ℝ³ ⊕ ℝⁿ`. The vector `s` holds Pauli
//! coordinates of the Hermitian matrix `H = s₁σ₁ + s₂σ₂ + s₃σ₃`, which is
//! `√−1·S` for `S ∈ su(2)`. The one-parameter subgroup through a direction is
//! `t ↦ [e^{tH}; e^{−tξ₁}, …, e^{−tξₙ}]`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauge::{act, Flavor, GaugeElement, GaugeError};
use crate::linalg::Matrix2C;
use crate::moment::{is_stable, mu_complex, mu_real, HyperpolygonPoint};
use crate::tol::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("direction has {got} scalar components, point has n = {n}")]
    DimensionMismatch { n: usize, got: usize },
    #[error(transparent)]
    Gauge(#[from] Box<GaugeError>),
}

impl From<GaugeError> for SolveError {
    fn from(e: GaugeError) -> Self {
        SolveError::Gauge(Box::new(e))
    }
}

/// Tangent direction `(s, ξ)` at the identity of `Kᶜ/K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub s: [f64; 3],
    pub xi: Vec<f64>,
}

impl Direction {
    pub fn zero(n: usize) -> Self {
        Self { s: [0.0; 3], xi: vec![0.0; n] }
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.s.iter().zip(&o.s).map(|(a, b)| a * b).sum::<f64>()
            + self.xi.iter().zip(&o.xi).map(|(a, b)| a * b).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, t: f64) -> Self {
        Self { s: self.s.map(|v| v * t), xi: self.xi.iter().map(|v| v * t).collect() }
    }

    fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(3 + self.n(), self.s.iter().chain(&self.xi).copied())
    }

    fn from_vector(v: &DVector<f64>) -> Self {
        Self { s: [v[0], v[1], v[2]], xi: v.iter().skip(3).copied().collect() }
    }

    /// `[e^{tH}; e^{−tξ}]`.
    pub fn exp(&self, t: f64) -> GaugeElement {
        let a = Matrix2C::from_pauli(self.s.map(|v| v * t)).exp_traceless();
        let e = self.xi.iter().map(|x| Complex64::new((-t * x).exp(), 0.0)).collect();
        GaugeElement::from_parts_unchecked(a, e, Flavor::KC)
    }
}

fn check_dims(x: &HyperpolygonPoint, dir: &Direction) -> Result<(), SolveError> {
    if x.n() != dir.n() {
        return Err(SolveError::DimensionMismatch { n: x.n(), got: dir.n() });
    }
    Ok(())
}

/// `d_x(g) = ¼ Σ (|q̂ᵢ|² − |qᵢ|² + |p̂ᵢ|² − |pᵢ|²)` with `(p̂, q̂) = x·g`.
pub fn kn_value(x: &HyperpolygonPoint, g: &GaugeElement) -> Result<f64, SolveError> {
    let y = act(x, g)?;
    let mut sum = 0.0;
    for i in 0..x.n() {
        sum += (y.q()[i].norm_sqr() - x.q()[i].norm_sqr()) + (y.p()[i].norm_sqr() - x.p()[i].norm_sqr());
    }
    Ok(0.25 * sum)
}

/// `|d_x(g·h) − d_{x·g}(h) − d_x(g)|`.
pub fn kn_cocycle_check(x: &HyperpolygonPoint, g: &GaugeElement, h: &GaugeElement) -> Result<f64, SolveError> {
    let gh = g.compose(h)?;
    let xg = act(x, g)?;
    Ok((kn_value(x, &gh)? - kn_value(&xg, h)? - kn_value(x, g)?).abs())
}

/// The gradient of `d` at the identity, in `(s, ξ)` coordinates. Its
/// pairing with a direction is the first derivative along that direction,
/// and it vanishes exactly when `μ_R(x) = 0`.
pub fn gradient(x: &HyperpolygonPoint) -> Direction {
    let m = mu_real(x);
    let sigma = Matrix2C::pauli();
    let s = [0, 1, 2].map(|k| -(sigma[k] * m.su2_star).trace().re);
    Direction { s, xi: m.r_n }
}

/// `d/dt d_x([e^{tH}; e^{−tξ}])`, evaluated through `μ_R` at the flowed point.
pub fn kn_directional_derivative(x: &HyperpolygonPoint, dir: &Direction, t: f64) -> Result<f64, SolveError> {
    check_dims(x, dir)?;
    let xt = act(x, &dir.exp(t))?;
    Ok(gradient(&xt).dot(dir))
}

/// Closed form of the second derivative along a one-parameter subgroup:
/// with `H = U diag(λ, −λ) U*`, `(aᵢ, bᵢ) = pᵢU`, `(cᵢ, dᵢ) = U*qᵢ`,
///
/// `Σ (λ+ξᵢ)²(e^{2t(λ+ξᵢ)}|aᵢ|² + e^{−2t(λ+ξᵢ)}|cᵢ|²)
///   + (λ−ξᵢ)²(e^{−2t(λ−ξᵢ)}|bᵢ|² + e^{2t(λ−ξᵢ)}|dᵢ|²)`.
pub fn kn_second_derivative(x: &HyperpolygonPoint, dir: &Direction, t: f64) -> Result<f64, SolveError> {
    check_dims(x, dir)?;
    let (lam, u) = Matrix2C::from_pauli(dir.s).hermitian_traceless_eig();
    let ud = u.adjoint();
    let mut sum = 0.0;
    for ((p, q), xi) in x.p().iter().zip(x.q()).zip(&dir.xi) {
        let [a, b] = p.mul_mat(&u).0;
        let [c, d] = ud.mul_vec(q).0;
        let (plus, minus) = (lam + xi, lam - xi);
        sum += plus * plus * ((2.0 * t * plus).exp() * a.norm_sqr() + (-2.0 * t * plus).exp() * c.norm_sqr());
        sum += minus * minus * ((-2.0 * t * minus).exp() * b.norm_sqr() + (2.0 * t * minus).exp() * d.norm_sqr());
    }
    Ok(sum)
}

/// Hessian of `d` at the identity, a `(3+n)×(3+n)` Gram matrix. Its
/// quadratic form is [`kn_second_derivative`] at `t = 0`.
pub fn hessian(x: &HyperpolygonPoint) -> DMatrix<f64> {
    let n = x.n();
    let sigma = Matrix2C::pauli();
    let mut h = DMatrix::zeros(3 + n, 3 + n);
    for (i, (p, q)) in x.p().iter().zip(x.q()).enumerate() {
        let w = sigma.map(|s| s.mul_vec(q));
        let u = sigma.map(|s| p.mul_mat(&s));
        for j in 0..3 {
            for k in j..3 {
                let v = w[j].dot(&w[k]).re + u[j].adjoint().dot(&u[k].adjoint()).re;
                h[(j, k)] += v;
                if j != k {
                    h[(k, j)] += v;
                }
            }
            let v = w[j].dot(q).re + u[j].adjoint().dot(&p.adjoint()).re;
            h[(j, 3 + i)] = v;
            h[(3 + i, j)] = v;
        }
        h[(3 + i, 3 + i)] = q.norm_sqr() + p.norm_sqr();
    }
    h
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchDirection {
    /// Full Newton step from the exact Hessian, falling back to the negative
    /// gradient when the Hessian is not positive definite.
    Newton,
    /// Negative gradient with the one-dimensional Newton step length.
    Gradient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub direction: SearchDirection,
    /// Divergence is declared once the accumulated step length exceeds this.
    pub max_path_length: f64,
    pub armijo_c: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: 10_000,
            direction: SearchDirection::Newton,
            max_path_length: 50.0,
            armijo_c: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverReport {
    pub converged: bool,
    pub iterations: usize,
    /// `‖μ_R(x_out)‖`.
    pub final_residual: f64,
    /// `x_out = act(x_in, gauge)`.
    pub gauge: GaugeElement,
    /// `d_x(gauge)` after each accepted step, starting at 0.
    pub objective_trace: Vec<f64>,
    /// `‖μ_C(x_out)‖`.
    pub complex_residual: f64,
}

fn newton_direction(x: &HyperpolygonPoint, grad: &Direction) -> Option<Direction> {
    let chol = hessian(x).cholesky()?;
    let v = Direction::from_vector(&chol.solve(&(-grad.to_vector())));
    let finite = v.s.iter().chain(&v.xi).all(|c| c.is_finite());
    (finite && v.dot(grad) < 0.0).then_some(v)
}

/// Minimize `d_x` over `Kᶜ/K` starting from the identity, returning
/// `x_out = act(x, g)` with `μ_R(x_out) ≈ 0` and the report.
pub fn solve(x: &HyperpolygonPoint, opts: &SolverOptions) -> Result<(HyperpolygonPoint, SolverReport), SolveError> {
    if !is_stable(x, DEFAULT_TOL) {
        return Err(SolveError::PreconditionViolated("input point is not stable".into()));
    }
    let scale2 = x.scale().powi(2);
    let complex = mu_complex(x).norm();
    if complex > opts.tol.max(DEFAULT_TOL * scale2) {
        return Err(SolveError::PreconditionViolated(format!(
            "complex moment map is {complex:e}, not zero"
        )));
    }
    let n = x.n();
    let mut g = GaugeElement::identity(n).complexify();
    let mut xk = x.clone();
    let mut trace = vec![0.0];
    let mut path = 0.0;
    let mut residual = mu_real(&xk).norm();
    let mut iterations = 0;
    // rounding level of d, which is a difference of sums of size ‖x‖²
    let floor = 64.0 * f64::EPSILON * x.norm_sqr();

    while residual > opts.tol {
        if iterations == opts.max_iter {
            return Err(SolveError::NonConvergence { iterations, residual });
        }
        let grad = gradient(&xk);
        let (dir, alpha0) = match opts.direction {
            SearchDirection::Newton => match newton_direction(&xk, &grad) {
                Some(v) => (v, 1.0),
                None => gradient_step(&xk, &grad)?,
            },
            SearchDirection::Gradient => gradient_step(&xk, &grad)?,
        };
        let slope = grad.dot(&dir);
        let mut alpha = alpha0;
        let mut accepted = None;
        for _ in 0..80 {
            let step = dir.exp(alpha);
            let f = kn_value(&xk, &step)?;
            let armijo = f <= opts.armijo_c * alpha * slope;
            if armijo || f <= floor {
                let candidate = g.compose(&step)?;
                let next = act(x, &candidate)?;
                let next_residual = mu_real(&next).norm();
                if armijo || next_residual < residual {
                    accepted = Some((candidate, next, next_residual));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((candidate, next, next_residual)) = accepted else {
            return Err(SolveError::NonConvergence { iterations, residual });
        };
        path += alpha * dir.norm();
        if path > opts.max_path_length || !next_residual.is_finite() {
            return Err(SolveError::PreconditionViolated(format!(
                "accumulated step length {path:.3} exceeds {}; the orbit has no minimum",
                opts.max_path_length
            )));
        }
        g = candidate;
        xk = next;
        residual = next_residual;
        trace.push(kn_value(x, &g)?);
        iterations += 1;
    }
    let report = SolverReport {
        converged: true,
        iterations,
        final_residual: residual,
        gauge: g,
        objective_trace: trace,
        complex_residual: mu_complex(&xk).norm(),
    };
    Ok((xk, report))
}

fn gradient_step(x: &HyperpolygonPoint, grad: &Direction) -> Result<(Direction, f64), SolveError> {
    let v = grad.scale(-1.0);
    let q = kn_second_derivative(x, &v, 0.0)?;
    let alpha = if q > 0.0 { grad.dot(grad) / q } else { 1.0 };
    Ok((v, alpha))
}
