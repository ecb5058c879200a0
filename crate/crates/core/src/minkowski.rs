//! Closed null polygons in ℝ^{2,1} and their correspondence with the fixed
//! components `Z_S`.
//!
//! A polygon has `k₁` past-null edges followed by `k₂` future-null edges
//! summing to zero. Polygons are ordered tuples and are compared modulo
//! `SU(1,1)` acting on all edges at once.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauge::GaugeError;
use crate::involution::{self, InvolutionError};
use crate::linalg::{mink_dot, CausalType, Complex2Covector, Complex2Vector, Mat3, MinkVector, ZERO};
use crate::moment::HyperpolygonPoint;
use crate::tol::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinkowskiError {
    #[error("a polygon needs at least one past and one future edge")]
    EmptySide,
    #[error("edge {0} is not null")]
    NotNull(usize),
    #[error("edge {0} is not in the expected light cone")]
    WrongCone(usize),
    #[error("edges do not close up (|sum| = {0:e})")]
    ClosureViolated(f64),
    #[error("past edges are collinear")]
    CollinearPastEdges,
    #[error("future edges are collinear")]
    CollinearFutureEdges,
    #[error("edge {0} has zero length")]
    DegenerateEdge(usize),
    #[error("diagonal is not on the t-axis (offset {0:e})")]
    NotNormalized(f64),
    #[error("point is not fixed by the involution")]
    NotFixedPoint,
    #[error("point is not in block form for S")]
    NotBlockForm,
    #[error("edge order is not a permutation placing S first")]
    BadOrder,
    #[error("family needs m > 0 and k1, k2 >= 2")]
    BadFamily,
    #[error(transparent)]
    Involution(#[from] InvolutionError),
}

impl From<GaugeError> for MinkowskiError {
    fn from(e: GaugeError) -> Self {
        Self::Involution(e.into())
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
struct RawPolygon {
    k1: usize,
    k2: usize,
    edges: Vec<MinkVector>,
}

/// Past edges first, then future edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolygon")]
pub struct NullPolygon {
    k1: usize,
    k2: usize,
    edges: Vec<MinkVector>,
}

impl TryFrom<RawPolygon> for NullPolygon {
    type Error = MinkowskiError;
    fn try_from(r: RawPolygon) -> Result<Self, Self::Error> {
        if r.edges.len() != r.k1 + r.k2 {
            return Err(MinkowskiError::EmptySide);
        }
        Self::new(r.k1, r.edges)
    }
}

/// `max(1, max |uᵢ|)`, the length scale for absolute tolerances.
fn edge_scale(edges: &[MinkVector]) -> f64 {
    edges.iter().map(MinkVector::euclidean_norm).fold(1.0, f64::max)
}

impl NullPolygon {
    pub fn new(k1: usize, edges: Vec<MinkVector>) -> Result<Self, MinkowskiError> {
        Self::new_tol(k1, edges, DEFAULT_TOL)
    }

    /// Validates nullity (relative), cones, closure (absolute, scaled by
    /// the longest edge) and regularity of both halves.
    pub fn new_tol(k1: usize, edges: Vec<MinkVector>, tol: f64) -> Result<Self, MinkowskiError> {
        let n = edges.len();
        if k1 == 0 || k1 >= n {
            return Err(MinkowskiError::EmptySide);
        }
        for (i, u) in edges.iter().enumerate() {
            if !u.x.is_finite() || !u.y.is_finite() || !u.t.is_finite() || u.t == 0.0 {
                return Err(MinkowskiError::DegenerateEdge(i));
            }
            if u.causal_type(tol) != CausalType::Null {
                return Err(MinkowskiError::NotNull(i));
            }
            if (u.t < 0.0) != (i < k1) {
                return Err(MinkowskiError::WrongCone(i));
            }
        }
        let sum: MinkVector = edges.iter().copied().sum();
        if sum.euclidean_norm() > tol * edge_scale(&edges) {
            return Err(MinkowskiError::ClosureViolated(sum.euclidean_norm()));
        }
        let w: MinkVector = edges[..k1].iter().copied().sum();
        if w.causal_type(tol) != CausalType::TimeLike {
            return Err(MinkowskiError::CollinearPastEdges);
        }
        let v: MinkVector = edges[k1..].iter().copied().sum();
        if v.causal_type(tol) != CausalType::TimeLike {
            return Err(MinkowskiError::CollinearFutureEdges);
        }
        Ok(Self { k1, k2: n - k1, edges })
    }

    pub fn k1(&self) -> usize {
        self.k1
    }

    pub fn k2(&self) -> usize {
        self.k2
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[MinkVector] {
        &self.edges
    }

    /// `w = u₁ + ⋯ + u_{k₁}`.
    pub fn diagonal(&self) -> MinkVector {
        self.edges[..self.k1].iter().copied().sum()
    }

    pub fn closure_defect(&self) -> f64 {
        self.edges.iter().copied().sum::<MinkVector>().euclidean_norm()
    }

    /// Largest `|uᵢ∘uᵢ| / |uᵢ|²`.
    pub fn nullity_defect(&self) -> f64 {
        self.edges.iter().map(|u| mink_dot(u, u).abs() / u.euclidean_norm().powi(2)).fold(0.0, f64::max)
    }

    pub fn scale(&self) -> f64 {
        edge_scale(&self.edges)
    }

    /// Applies `g` to every edge, skipping validation.
    pub fn transform(&self, g: &Mat3) -> Self {
        Self { k1: self.k1, k2: self.k2, edges: self.edges.iter().map(|u| g.apply(u)).collect() }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.k1 != other.k1 || self.n() != other.n() {
            return f64::INFINITY;
        }
        self.edges.iter().zip(&other.edges).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }
}

fn is_block(x: &HyperpolygonPoint, s: &[usize], tol: f64) -> bool {
    (0..x.n()).all(|i| {
        let (p, q) = (x.p()[i].0, x.q()[i].0);
        let off = if s.contains(&i) { p[0].norm().max(q[1].norm()) } else { p[1].norm().max(q[0].norm()) };
        off <= tol * x.scale()
    })
}

/// Edges of a block point, reordered with `S` first: `(Re bc, Im bc, −|c|²)`
/// on `S` and `(Re ad, −Im ad, |a|²)` off `S`. The second value maps each
/// polygon position to its original index.
pub fn block_to_polygon(
    x: &HyperpolygonPoint,
    s: &[usize],
    tol: f64,
) -> Result<(NullPolygon, Vec<usize>), MinkowskiError> {
    involution::check_index_set(x.n(), s)?;
    if !is_block(x, s, 1e-6) {
        return Err(MinkowskiError::NotBlockForm);
    }
    let order: Vec<usize> = s.iter().copied().chain((0..x.n()).filter(|i| !s.contains(i))).collect();
    let edges = order
        .iter()
        .map(|&i| {
            let ([a, b], [c, d]) = (x.p()[i].0, x.q()[i].0);
            if s.contains(&i) {
                let z = b * c;
                MinkVector::new(z.re, z.im, -c.norm_sqr())
            } else {
                let z = a * d;
                MinkVector::new(z.re, -z.im, a.norm_sqr())
            }
        })
        .collect();
    Ok((NullPolygon::new_tol(s.len(), edges, tol)?, order))
}

/// The polygon of a fixed point `x ∈ Z_S`. A point already in block form is
/// used as is; otherwise its normal form from the classification is used.
pub fn zs_to_polygon(x: &HyperpolygonPoint, tol: f64) -> Result<(NullPolygon, Vec<usize>), MinkowskiError> {
    let c = involution::classify_fixed(x, tol)?;
    let w = c.witness.ok_or(MinkowskiError::NotFixedPoint)?;
    if is_block(x, &w.s, 1e-12) {
        block_to_polygon(x, &w.s, tol)
    } else {
        block_to_polygon(&w.normal_point, &w.s, tol)
    }
}

/// Inverse of [`zs_to_polygon`] with the past edges at indices `0..k₁`.
pub fn polygon_to_zs(p: &NullPolygon) -> Result<HyperpolygonPoint, MinkowskiError> {
    let order: Vec<usize> = (0..p.n()).collect();
    polygon_to_zs_ordered(p, &order)
}

/// Builds the block point, placing polygon edge `j` at index `order[j]`.
/// The polygon is first brought to normal position by [`normalize_diagonal`].
pub fn polygon_to_zs_ordered(p: &NullPolygon, order: &[usize]) -> Result<HyperpolygonPoint, MinkowskiError> {
    let n = p.n();
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(MinkowskiError::BadOrder);
        }
    }
    if order.len() != n {
        return Err(MinkowskiError::BadOrder);
    }
    let mut s = order[..p.k1].to_vec();
    s.sort_unstable();
    if s[..] != order[..p.k1] || s[0] != 0 {
        return Err(MinkowskiError::BadOrder);
    }
    let (p, _) = normalize_diagonal(p)?;
    let mut pv = vec![Complex2Covector::ZERO; n];
    let mut qv = vec![Complex2Vector::ZERO; n];
    for (j, u) in p.edges.iter().enumerate() {
        let l = u.t.abs().sqrt();
        if l == 0.0 {
            return Err(MinkowskiError::DegenerateEdge(j));
        }
        let (l_c, i) = (Complex64::new(l, 0.0), order[j]);
        if j < p.k1 {
            pv[i] = Complex2Covector::new(ZERO, Complex64::new(u.x, u.y) / l);
            qv[i] = Complex2Vector::new(l_c, ZERO);
        } else {
            pv[i] = Complex2Covector::new(Complex64::new(u.x, -u.y) / l, ZERO);
            qv[i] = Complex2Vector::new(ZERO, l_c);
        }
    }
    Ok(HyperpolygonPoint::new(pv, qv).expect("finite edges"))
}

/// Moves the diagonal `w` onto the negative t-axis by a rotation about the
/// t-axis followed by a boost along y. Returns the moved polygon and the
/// combined transformation.
pub fn normalize_diagonal(p: &NullPolygon) -> Result<(NullPolygon, Mat3), MinkowskiError> {
    let w = p.diagonal();
    if w.causal_type(DEFAULT_TOL) != CausalType::TimeLike || w.t >= 0.0 {
        return Err(MinkowskiError::CollinearPastEdges);
    }
    let r = w.x.hypot(w.y);
    let rot = if r <= 1e-15 * w.t.abs() {
        Mat3::IDENTITY
    } else {
        Mat3::rotation_t(std::f64::consts::FRAC_PI_2 - w.y.atan2(w.x))
    };
    let w1 = rot.apply(&w);
    let g = Mat3::boost_y((-w1.y / w1.t).atanh()) * rot;
    Ok((p.transform(&g), g))
}

/// Minkowski length of the diagonal.
pub fn diagonal_length(p: &NullPolygon) -> f64 {
    p.diagonal().mink_norm()
}

/// Rotates the future edges of a normalized polygon by `theta` about the
/// t-axis, counter-clockwise.
pub fn bend(p: &NullPolygon, theta: f64, tol: f64) -> Result<NullPolygon, MinkowskiError> {
    let w = p.diagonal();
    let off = w.x.hypot(w.y);
    if off > tol * p.scale() {
        return Err(MinkowskiError::NotNormalized(off));
    }
    let r = Mat3::rotation_t(theta);
    let mut edges = p.edges.clone();
    edges[p.k1..].iter_mut().for_each(|u| *u = r.apply(u));
    Ok(NullPolygon { k1: p.k1, k2: p.k2, edges })
}

/// Representative of the `SU(1,1)` class: diagonal normalized, then the
/// first past edge off the t-axis rotated onto the half-plane `y = 0, x > 0`.
pub fn canonical_polygon(p: &NullPolygon, tol: f64) -> Result<NullPolygon, MinkowskiError> {
    let (q, _) = normalize_diagonal(p)?;
    let scale = q.scale();
    let Some(u) = q.edges[..q.k1].iter().find(|u| u.x.hypot(u.y) > tol * scale) else {
        return Ok(q);
    };
    Ok(q.transform(&Mat3::rotation_t(-u.y.atan2(u.x))))
}

/// Equality in the moduli space, edgewise after canonicalization.
pub fn polygons_equivalent(a: &NullPolygon, b: &NullPolygon, tol: f64) -> Result<bool, MinkowskiError> {
    if a.k1 != b.k1 || a.n() != b.n() {
        return Ok(false);
    }
    let (ca, cb) = (canonical_polygon(a, tol)?, canonical_polygon(b, tol)?);
    Ok(ca.max_abs_diff(&cb) <= tol * ca.scale().max(cb.scale()))
}

/// Past edges `(0, m, −m)` and `(0, −m/(k₁−1), −m/(k₁−1))`, future edges
/// `(0, m, m)` and `(0, −m/(k₂−1), m/(k₂−1))`. The diagonal is `(0, 0, −2m)`.
pub fn scaling_family(m: f64, k1: usize, k2: usize) -> Result<NullPolygon, MinkowskiError> {
    if !m.is_finite() || m <= 0.0 || k1 < 2 || k2 < 2 {
        return Err(MinkowskiError::BadFamily);
    }
    let (a, b) = (m / (k1 - 1) as f64, m / (k2 - 1) as f64);
    let mut edges = vec![MinkVector::new(0.0, m, -m)];
    edges.extend(std::iter::repeat_n(MinkVector::new(0.0, -a, -a), k1 - 1));
    edges.push(MinkVector::new(0.0, m, m));
    edges.extend(std::iter::repeat_n(MinkVector::new(0.0, -b, b), k2 - 1));
    NullPolygon::new(k1, edges)
}

/// A bending flow sampled at `steps + 1` equally spaced angles, obtained by
/// applying the same small bend repeatedly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BendTrajectory {
    pub theta: f64,
    pub steps: usize,
    pub ell: f64,
    pub frames: Vec<NullPolygon>,
    pub max_ell_drift: f64,
    pub max_closure_defect: f64,
    pub max_nullity_defect: f64,
}

pub fn bend_trajectory(p: &NullPolygon, theta: f64, steps: usize, tol: f64) -> Result<BendTrajectory, MinkowskiError> {
    let steps = steps.max(1);
    let ell = diagonal_length(p);
    let mut frames = vec![p.clone()];
    for _ in 0..steps {
        let next = bend(frames.last().expect("nonempty"), theta / steps as f64, tol)?;
        frames.push(next);
    }
    let max_ell_drift = frames.iter().map(|f| (diagonal_length(f) - ell).abs()).fold(0.0, f64::max);
    let max_closure_defect = frames.iter().map(NullPolygon::closure_defect).fold(0.0, f64::max);
    let max_nullity_defect = frames.iter().map(NullPolygon::nullity_defect).fold(0.0, f64::max);
    Ok(BendTrajectory { theta, steps, ell, frames, max_ell_drift, max_closure_defect, max_nullity_defect })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::{act, orbit_equivalent_k, GaugeElement, Flavor};
    use crate::linalg::{su11_coadjoint_matrix, Matrix2C};
    use crate::sample;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: f64, y: f64, t: f64) -> MinkVector {
        MinkVector::new(x, y, t)
    }

    fn p4_polygon() -> NullPolygon {
        NullPolygon::new(2, vec![v(1.0, 0.0, -1.0), v(-1.0, 0.0, -1.0), v(1.0, 0.0, 1.0), v(-1.0, 0.0, 1.0)]).unwrap()
    }

    #[test]
    fn p4_maps_to_the_square() {
        let (p, order) = zs_to_polygon(&HyperpolygonPoint::p4(), 1e-9).unwrap();
        assert_eq!(p, p4_polygon());
        assert_eq!(order, vec![0, 1, 2, 3]);
        assert_eq!(diagonal_length(&p), 2.0);
    }

    #[test]
    fn p4_polygon_round_trip() {
        let x = polygon_to_zs(&p4_polygon()).unwrap();
        assert!(orbit_equivalent_k(&x, &HyperpolygonPoint::p4(), 1e-9).unwrap());
        let (_, g) = normalize_diagonal(&p4_polygon()).unwrap();
        assert_eq!(g, Mat3::IDENTITY);
    }

    #[test]
    fn validation() {
        let bad = |edges: Vec<MinkVector>| NullPolygon::new(2, edges).unwrap_err();
        assert_eq!(bad(vec![v(1.0, 0.0, -1.0), v(-1.0, 0.0, -1.0), v(1.0, 0.0, 1.0), v(-1.0, 0.0, 0.0)]),
            MinkowskiError::DegenerateEdge(3));
        assert_eq!(bad(vec![v(1.0, 0.0, -1.0), v(-1.0, 0.0, -1.0), v(1.0, 0.0, 1.0), v(-1.0, 0.5, 1.0)]),
            MinkowskiError::NotNull(3));
        assert_eq!(bad(vec![v(1.0, 0.0, 1.0), v(-1.0, 0.0, -1.0), v(1.0, 0.0, -1.0), v(-1.0, 0.0, 1.0)]),
            MinkowskiError::WrongCone(0));
        assert!(matches!(bad(vec![v(1.0, 0.0, -1.0), v(-1.0, 0.0, -1.0), v(1.0, 0.0, 1.0), v(0.0, 1.0, 1.0)]),
            MinkowskiError::ClosureViolated(_)));
        assert_eq!(bad(vec![v(1.0, 0.0, -1.0), v(1.0, 0.0, -1.0), v(-1.0, 0.0, 1.0), v(-1.0, 0.0, 1.0)]),
            MinkowskiError::CollinearPastEdges);
    }

    #[test]
    fn forced_nonzero_sum_is_flagged() {
        let one = Complex64::new(1.0, 0.0);
        let x = HyperpolygonPoint::new(
            vec![Complex2Covector::new(ZERO, one), Complex2Covector::new(ZERO, one),
                 Complex2Covector::new(one, ZERO), Complex2Covector::new(-one, ZERO)],
            vec![Complex2Vector::new(one, ZERO), Complex2Vector::new(one, ZERO),
                 Complex2Vector::new(ZERO, one), Complex2Vector::new(ZERO, one)],
        ).unwrap();
        assert!(matches!(block_to_polygon(&x, &[0, 1], 1e-9), Err(MinkowskiError::ClosureViolated(_))));
        assert!(zs_to_polygon(&x, 1e-9).is_err());
    }

    #[test]
    fn zero_edge_is_degenerate() {
        let p = NullPolygon { k1: 2, k2: 2, edges: vec![v(1.0, 0.0, -1.0), v(-1.0, 0.0, -1.0), v(0.0, 0.0, 0.0), v(0.0, 0.0, 2.0)] };
        assert_eq!(polygon_to_zs(&p).unwrap_err(), MinkowskiError::DegenerateEdge(2));
    }

    #[test]
    fn phases_do_not_change_the_polygon() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = sample::random_zs_point(&mut rng, 6, &[0, 2, 5]).unwrap();
        let e: Vec<Complex64> = (0..6).map(|_| sample::unit_phase(&mut rng)).collect();
        let y = act(&x, &GaugeElement::new(Matrix2C::scalar(Complex64::new(1.0, 0.0)), e, Flavor::K).unwrap()).unwrap();
        let (a, _) = block_to_polygon(&x, &[0, 2, 5], 1e-9).unwrap();
        let (b, _) = block_to_polygon(&y, &[0, 2, 5], 1e-9).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn diagonal_gauge_rotates_the_polygon() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = [0, 1, 3];
        let x = sample::random_zs_point(&mut rng, 6, &s).unwrap();
        let th: f64 = rng.random_range(0.0..6.0);
        let z = Complex64::from_polar(1.0, th);
        let e: Vec<Complex64> = (0..6).map(|_| sample::unit_phase(&mut rng)).collect();
        let k = GaugeElement::new(Matrix2C::diag(z, z.conj()), e, Flavor::K).unwrap();
        let (a, _) = block_to_polygon(&x, &s, 1e-9).unwrap();
        let (b, _) = block_to_polygon(&act(&x, &k).unwrap(), &s, 1e-9).unwrap();
        assert!(a.transform(&Mat3::rotation_t(-2.0 * th)).max_abs_diff(&b) < 1e-12);
        assert!(polygons_equivalent(&a, &b, 1e-9).unwrap());
    }

    #[test]
    fn zs_round_trip_all_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 4..=7 {
            for s in involution::component_census(n).unwrap().components {
                let x = sample::random_zs_point(&mut rng, n, &s).unwrap();
                let x = act(&x, &sample::random_k(&mut rng, n)).unwrap();
                let (p, order) = zs_to_polygon(&x, 1e-9).unwrap();
                let y = polygon_to_zs_ordered(&p, &order).unwrap();
                assert!(orbit_equivalent_k(&x, &y, 1e-8).unwrap(), "n = {n}, S = {s:?}");
            }
        }
    }

    #[test]
    fn normalization_puts_the_diagonal_on_the_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = sample::random_zs_point(&mut rng, 7, &[0, 3, 4]).unwrap();
            let (p, _) = block_to_polygon(&x, &[0, 3, 4], 1e-9).unwrap();
            let (q, g) = normalize_diagonal(&p).unwrap();
            let w = q.diagonal();
            assert!(w.x.abs() <= 1e-10 * p.scale() && w.y.abs() <= 1e-10 * p.scale());
            assert!((w.t + diagonal_length(&p)).abs() < 1e-10 * p.scale());
            assert!(g.apply(&p.diagonal()).max_abs_diff(&w) < 1e-12 * p.scale());
            assert!(q.closure_defect() < 1e-10 * p.scale() && q.nullity_defect() < 1e-10);
        }
    }

    #[test]
    fn bending_p4() {
        let p = p4_polygon();
        let b = bend(&p, std::f64::consts::FRAC_PI_2, 1e-9).unwrap();
        assert!(b.edges[2].max_abs_diff(&v(0.0, 1.0, 1.0)) < 1e-15);
        assert!(b.edges[3].max_abs_diff(&v(0.0, -1.0, 1.0)) < 1e-15);
        assert_eq!(b.closure_defect(), 0.0);
        assert!(bend(&p, std::f64::consts::TAU, 1e-9).unwrap().max_abs_diff(&p) < 1e-10);
        let off = NullPolygon::new(2, vec![v(1.0, 0.0, -1.0), v(0.0, 1.0, -1.0), v(-1.0, 0.0, 1.0), v(0.0, -1.0, 1.0)]).unwrap();
        assert!(matches!(bend(&off, 1.0, 1e-9), Err(MinkowskiError::NotNormalized(_))));
    }

    #[test]
    fn long_bending_flow() {
        let t = bend_trajectory(&p4_polygon(), std::f64::consts::TAU, 1000, 1e-9).unwrap();
        assert_eq!(t.frames.len(), 1001);
        assert!(t.max_ell_drift < 1e-10 && t.max_closure_defect < 1e-10 && t.max_nullity_defect < 1e-10);
        assert!(t.frames[1000].max_abs_diff(&t.frames[0]) < 1e-10);
    }

    #[test]
    fn family_lengths() {
        for m in 1..=1000 {
            let p = scaling_family(m as f64, 2, 2).unwrap();
            assert_eq!(p.diagonal(), v(0.0, 0.0, -2.0 * m as f64));
            assert_eq!(diagonal_length(&p), 2.0 * m as f64);
        }
        let p = scaling_family(3.0, 3, 5).unwrap();
        assert!(involution::classify_fixed(&polygon_to_zs(&p).unwrap(), 1e-9).unwrap().fixed);
        assert!(scaling_family(1.0, 1, 3).is_err());
    }

    #[test]
    fn json_round_trip_validates() {
        let s = serde_json::to_string(&p4_polygon()).unwrap();
        assert_eq!(s, r#"{"k1":2,"k2":2,"edges":[[1.0,0.0,-1.0],[-1.0,0.0,-1.0],[1.0,0.0,1.0],[-1.0,0.0,1.0]]}"#);
        assert_eq!(serde_json::from_str::<NullPolygon>(&s).unwrap(), p4_polygon());
        assert!(serde_json::from_str::<NullPolygon>(&s.replace("0.0,1.0]]", "0.0,2.0]]")).is_err());
    }

    proptest! {
        #[test]
        fn su11_preserves_polygons(ar in -2.0f64..2.0, ai in -2.0f64..2.0, br in -1.0f64..1.0, bi in -1.0f64..1.0) {
            let alpha = Complex64::new(ar, ai);
            let beta = Complex64::new(br, bi);
            prop_assume!(alpha.norm_sqr() - beta.norm_sqr() > 0.1);
            let r = (alpha.norm_sqr() - beta.norm_sqr()).sqrt();
            let g = su11_coadjoint_matrix(alpha / r, beta / r).unwrap();
            let p = p4_polygon().transform(&g);
            prop_assert!(p.closure_defect() < 1e-10 * p.scale());
            prop_assert!(p.nullity_defect() < 1e-10);
            prop_assert!((diagonal_length(&p) - 2.0).abs() < 1e-10 * p.scale());
            prop_assert!(polygons_equivalent(&p, &p4_polygon(), 1e-8).unwrap());
        }

        #[test]
        fn bending_composes(a in -7.0f64..7.0, b in -7.0f64..7.0) {
            let p = scaling_family(2.0, 3, 3).unwrap();
            let lhs = bend(&bend(&p, a, 1e-9).unwrap(), b, 1e-9).unwrap();
            let rhs = bend(&p, a + b, 1e-9).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
            prop_assert!((diagonal_length(&lhs) - 4.0).abs() < 1e-12);
        }
    }
}
