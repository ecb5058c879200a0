//! The `K` and `Kᶜ` actions, canonical gauge fixing and orbit tests.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kempf_ness::{self, SolveError, SolverOptions};
use crate::linalg::{Complex2Covector, Complex2Vector, Matrix2C, ONE};
use crate::moment::{in_p0n, is_stable, mu_complex, HyperpolygonPoint};
use crate::tol::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaugeError {
    #[error("gauge element has {got} scalars, point has n = {n}")]
    DimensionMismatch { n: usize, got: usize },
    #[error("matrix is not in {0}")]
    NotInGroup(&'static str),
    #[error("scalar e_{index} is zero or has wrong modulus")]
    BadScalar { index: usize },
    #[error("point is not stable")]
    Unstable,
    #[error("point is not on the zero level of the moment map")]
    NotInP0n,
    #[error(transparent)]
    Solver(#[from] Box<SolveError>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    /// `(SU(2) × U(1)ⁿ)/ℤ₂`.
    K,
    /// `(SL(2,ℂ) × (ℂ*)ⁿ)/ℤ₂`.
    KC,
}

/// An element `[A; e₁,…,eₙ]`, defined up to the overall sign `[−A; −e]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGauge", into = "RawGauge")]
pub struct GaugeElement {
    a: Matrix2C,
    e: Vec<Complex64>,
    flavor: Flavor,
}

#[derive(Serialize, Deserialize)]
struct RawGauge {
    #[serde(rename = "A")]
    a: Matrix2C,
    e: Vec<Complex64>,
    flavor: Flavor,
}

impl TryFrom<RawGauge> for GaugeElement {
    type Error = GaugeError;
    fn try_from(r: RawGauge) -> Result<Self, GaugeError> {
        Self::new(r.a, r.e, r.flavor)
    }
}

impl From<GaugeElement> for RawGauge {
    fn from(g: GaugeElement) -> Self {
        RawGauge { a: g.a, e: g.e, flavor: g.flavor }
    }
}

impl GaugeElement {
    pub fn new(a: Matrix2C, e: Vec<Complex64>, flavor: Flavor) -> Result<Self, GaugeError> {
        Self::new_tol(a, e, flavor, DEFAULT_TOL)
    }

    pub fn new_tol(a: Matrix2C, e: Vec<Complex64>, flavor: Flavor, tol: f64) -> Result<Self, GaugeError> {
        match flavor {
            Flavor::K => {
                if !a.is_su2(tol) {
                    return Err(GaugeError::NotInGroup("SU(2)"));
                }
                if let Some(index) = e.iter().position(|z| !z.is_finite() || (z.norm() - 1.0).abs() > tol) {
                    return Err(GaugeError::BadScalar { index });
                }
            }
            Flavor::KC => {
                if !a.is_finite() || !a.is_sl2(tol) {
                    return Err(GaugeError::NotInGroup("SL(2,C)"));
                }
                if let Some(index) = e.iter().position(|z| !z.is_finite() || z.norm() == 0.0) {
                    return Err(GaugeError::BadScalar { index });
                }
            }
        }
        Ok(Self { a, e, flavor })
    }

    /// Builds an element the caller has already checked, e.g. a product of
    /// exponentials.
    pub(crate) fn from_parts_unchecked(a: Matrix2C, e: Vec<Complex64>, flavor: Flavor) -> Self {
        Self { a, e, flavor }
    }

    pub fn identity(n: usize) -> Self {
        Self { a: Matrix2C::IDENTITY, e: vec![ONE; n], flavor: Flavor::K }
    }

    pub fn a(&self) -> &Matrix2C {
        &self.a
    }

    pub fn e(&self) -> &[Complex64] {
        &self.e
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn n(&self) -> usize {
        self.e.len()
    }

    /// Same element viewed in `Kᶜ`.
    pub fn complexify(mut self) -> Self {
        self.flavor = Flavor::KC;
        self
    }

    /// Group product `g·h = [A_g A_h; e_g e_h]`, so that
    /// `act(act(x, g), h) = act(x, g·h)`.
    pub fn compose(&self, h: &Self) -> Result<Self, GaugeError> {
        if self.n() != h.n() {
            return Err(GaugeError::DimensionMismatch { n: self.n(), got: h.n() });
        }
        let flavor = if self.flavor == Flavor::K && h.flavor == Flavor::K { Flavor::K } else { Flavor::KC };
        Ok(Self {
            a: self.a * h.a,
            e: self.e.iter().zip(&h.e).map(|(x, y)| x * y).collect(),
            flavor,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.a.sl2_inverse(),
            e: self.e.iter().map(|z| z.inv()).collect(),
            flavor: self.flavor,
        }
    }

    pub fn negate(&self) -> Self {
        Self { a: -self.a, e: self.e.iter().map(|z| -z).collect(), flavor: self.flavor }
    }

    fn max_abs_diff(&self, o: &Self) -> f64 {
        self.e
            .iter()
            .zip(&o.e)
            .map(|(x, y)| (x - y).norm())
            .fold(self.a.max_abs_diff(&o.a), f64::max)
    }

    /// Equality up to the `ℤ₂` sign.
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        self.n() == o.n() && self.max_abs_diff(o).min(self.negate().max_abs_diff(o)) <= tol
    }
}

/// `(p, q)·[A; e] = ((eᵢ⁻¹ pᵢ A)ᵢ, (A⁻¹ qᵢ eᵢ)ᵢ)`.
pub fn act(x: &HyperpolygonPoint, g: &GaugeElement) -> Result<HyperpolygonPoint, GaugeError> {
    if x.n() != g.n() {
        return Err(GaugeError::DimensionMismatch { n: x.n(), got: g.n() });
    }
    let ainv = g.a.sl2_inverse();
    let p: Vec<Complex2Covector> =
        x.p().iter().zip(&g.e).map(|(p, e)| p.mul_mat(&g.a).scale(e.inv())).collect();
    let q: Vec<Complex2Vector> = x.q().iter().zip(&g.e).map(|(q, e)| ainv.mul_vec(q).scale(*e)).collect();
    HyperpolygonPoint::new(p, q).map_err(|_| GaugeError::NotInGroup("finite range"))
}

/// Threshold below which a coordinate counts as zero during gauge fixing,
/// relative to the size of the vector it belongs to.
const PIVOT_TOL: f64 = 1e-7;

/// A `K`-invariant gauge fixing of a stable point of `P₀ⁿ`.
///
/// `A = R·D` where `R ∈ SU(2)` rotates `q₁` onto the positive first axis and
/// the diagonal `D = diag(e^{iφ}, e^{−iφ})` makes the first non-negligible
/// of the weight-two invariants `cᵢd̄ᵢ, bᵢcᵢ, āᵢd̄ᵢ, āᵢbᵢ` real positive.
/// The phases `eᵢ` then make the first non-negligible entry of each `qᵢ`
/// real positive. The two lifts of `D` differ by the `ℤ₂` sign, so the
/// representative is unique.
pub fn canonical_form(
    x: &HyperpolygonPoint,
    tol: f64,
) -> Result<(HyperpolygonPoint, GaugeElement), GaugeError> {
    if !is_stable(x, tol) {
        return Err(GaugeError::Unstable);
    }
    let scale2 = x.scale().powi(2);
    if !in_p0n(x, 1e-6f64.max(tol) * scale2) {
        return Err(GaugeError::NotInP0n);
    }
    let n = x.n();
    let q1 = x.q()[0];
    let u = q1.scale((1.0 / q1.norm()).into());
    let r = Matrix2C::new(u.0[0], -u.0[1].conj(), u.0[1], u.0[0].conj());
    let y = act(x, &GaugeElement { a: r, e: vec![ONE; n], flavor: Flavor::K })?;

    let mut phi = 0.0;
    'search: for (p, q) in y.p().iter().zip(y.q()) {
        let ([a, b], [c, d]) = (p.0, q.0);
        for z in [c * d.conj(), b * c, (a * d).conj(), a.conj() * b] {
            if z.norm() > PIVOT_TOL * scale2 {
                phi = 0.5 * z.arg();
                break 'search;
            }
        }
    }
    let a = r * Matrix2C::diag(Complex64::from_polar(1.0, phi), Complex64::from_polar(1.0, -phi));
    let ainv = a.sl2_inverse();
    let e = x
        .q()
        .iter()
        .map(|q| {
            let v = ainv.mul_vec(q);
            let pivot = if v.0[0].norm() > PIVOT_TOL * v.norm() { v.0[0] } else { v.0[1] };
            pivot.conj() / pivot.norm()
        })
        .collect();
    let g = GaugeElement { a, e, flavor: Flavor::K };
    Ok((act(x, &g)?, g))
}

/// `K`-invariant traces built from `Mᵢ = qᵢpᵢ` and `Hᵢ = qᵢqᵢ* − pᵢ*pᵢ`:
/// `tr(MᵢMⱼ)`, `tr(MᵢHⱼ)`, `tr(HᵢHⱼ)` and `tr(MᵢMⱼMₖ)`.
pub fn fingerprints(x: &HyperpolygonPoint) -> Vec<Complex64> {
    let m = x.residues();
    let h: Vec<Matrix2C> = x.q().iter().zip(x.p()).map(|(q, p)| q.outer_adjoint() - p.adjoint_outer()).collect();
    let n = x.n();
    let mut out = Vec::with_capacity(3 * n * n + n * n * n);
    for i in 0..n {
        for j in 0..n {
            out.push((m[i] * m[j]).trace());
            out.push((m[i] * h[j]).trace());
            out.push((h[i] * h[j]).trace());
        }
    }
    for i in 0..n {
        for j in 0..n {
            let mm = m[i] * m[j];
            for mk in &m {
                out.push((mm * *mk).trace());
            }
        }
    }
    out
}

/// Largest entrywise difference between the canonical forms of `x` and `y`,
/// or infinity for points of different size.
pub fn orbit_distance_k(x: &HyperpolygonPoint, y: &HyperpolygonPoint, tol: f64) -> Result<f64, GaugeError> {
    if x.n() != y.n() {
        return Ok(f64::INFINITY);
    }
    let (cx, _) = canonical_form(x, tol)?;
    let (cy, _) = canonical_form(y, tol)?;
    Ok(cx.max_abs_diff(&cy))
}

fn fingerprints_differ(x: &HyperpolygonPoint, y: &HyperpolygonPoint) -> bool {
    let s = x.scale().max(y.scale());
    fingerprints(x)
        .iter()
        .zip(&fingerprints(y))
        .any(|(a, b)| (a - b).norm() > 1e-6 * s.powi(6))
}

/// `K`-orbit equality of two stable points of `P₀ⁿ`, deciding on canonical
/// forms after a cheap rejection on trace invariants.
pub fn orbit_equivalent_k(x: &HyperpolygonPoint, y: &HyperpolygonPoint, tol: f64) -> Result<bool, GaugeError> {
    if x.n() != y.n() {
        return Ok(false);
    }
    for z in [x, y] {
        if !in_p0n(z, 1e-6f64.max(tol) * z.scale().powi(2)) {
            return Err(GaugeError::NotInP0n);
        }
    }
    if fingerprints_differ(x, y) {
        return Ok(false);
    }
    Ok(orbit_distance_k(x, y, tol)? <= tol * x.scale().max(y.scale()))
}

fn flow_to_p0n(x: &HyperpolygonPoint) -> Result<HyperpolygonPoint, GaugeError> {
    let opts = SolverOptions { tol: 1e-12 * x.scale().powi(2), ..SolverOptions::default() };
    let (out, _) = kempf_ness::solve(x, &opts).map_err(Box::new)?;
    Ok(out)
}

/// `K`-orbit distance of the two points after flowing each to `μ_R = 0`.
pub fn orbit_distance_kc(x: &HyperpolygonPoint, y: &HyperpolygonPoint, tol: f64) -> Result<f64, GaugeError> {
    if x.n() != y.n() {
        return Ok(f64::INFINITY);
    }
    orbit_distance_k(&flow_to_p0n(x)?, &flow_to_p0n(y)?, tol)
}

/// `Kᶜ`-orbit equality of two stable points of `μ_C⁻¹(0)`.
pub fn orbit_equivalent_kc(x: &HyperpolygonPoint, y: &HyperpolygonPoint, tol: f64) -> Result<bool, GaugeError> {
    if x.n() != y.n() {
        return Ok(false);
    }
    if mu_complex(x).norm() > 1e-6 * x.scale().powi(2) || mu_complex(y).norm() > 1e-6 * y.scale().powi(2) {
        return Err(GaugeError::NotInP0n);
    }
    let (fx, fy) = (flow_to_p0n(x)?, flow_to_p0n(y)?);
    orbit_equivalent_k(&fx, &fy, tol)
}

/// An element `g ∈ K` with `act(x, g) = y`, if the points are `K`-equivalent.
pub fn recover_gauge(
    x: &HyperpolygonPoint,
    y: &HyperpolygonPoint,
    tol: f64,
) -> Result<Option<GaugeElement>, GaugeError> {
    if x.n() != y.n() {
        return Ok(None);
    }
    let (cx, gx) = canonical_form(x, tol)?;
    let (cy, gy) = canonical_form(y, tol)?;
    if cx.max_abs_diff(&cy) > tol * x.scale().max(y.scale()) {
        return Ok(None);
    }
    Ok(Some(gx.compose(&gy.inverse())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ZERO};
    use crate::sample;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag_kc(n: usize) -> GaugeElement {
        GaugeElement::new(Matrix2C::from_re(2.0, 0.0, 0.0, 0.5), vec![ONE; n], Flavor::KC).unwrap()
    }

    #[test]
    fn identity_and_sign_act_trivially() {
        let x = HyperpolygonPoint::p4();
        assert_eq!(act(&x, &GaugeElement::identity(4)).unwrap(), x);
        let minus = GaugeElement::identity(4).negate();
        assert_eq!(act(&x, &minus).unwrap(), x);
    }

    #[test]
    fn p4_fixed_point_witness() {
        // A = [[0, i], [i, 0]], eᵢ = (bᵢ/cᵢ)·i on {1,2}, (aᵢ/dᵢ)·i on {3,4}
        let w = Matrix2C::new(ZERO, I, I, ZERO);
        let e = vec![I, -I, I, -I];
        let g = GaugeElement::new(w, e, Flavor::K).unwrap();
        let x = HyperpolygonPoint::p4();
        let y = act(&x, &g).unwrap();
        let iota = crate::involution::iota(&x);
        assert!(y.max_abs_diff(&iota) < 1e-15);
    }

    #[test]
    fn rejects_bad_elements() {
        assert!(GaugeElement::new(Matrix2C::from_re(2.0, 0.0, 0.0, 0.5), vec![ONE; 3], Flavor::K).is_err());
        assert!(GaugeElement::new(Matrix2C::IDENTITY, vec![ONE, ZERO, ONE], Flavor::KC).is_err());
        assert!(GaugeElement::new(Matrix2C::from_re(2.0, 0.0, 0.0, 2.0), vec![ONE; 3], Flavor::KC).is_err());
        let x = HyperpolygonPoint::p4();
        assert!(act(&x, &GaugeElement::identity(5)).is_err());
    }

    #[test]
    fn p4_is_canonical() {
        let x = HyperpolygonPoint::p4();
        let (c, g) = canonical_form(&x, 1e-9).unwrap();
        assert!(c.max_abs_diff(&x) < 1e-15);
        assert!(g.approx_eq(&GaugeElement::identity(4), 1e-15));
    }

    #[test]
    fn canonical_form_is_idempotent_and_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 4..8 {
            for _ in 0..20 {
                let x = sample::random_p0n_point(&mut rng, n).unwrap();
                let (c, _) = canonical_form(&x, 1e-9).unwrap();
                let (c2, g2) = canonical_form(&c, 1e-9).unwrap();
                assert!(c2.max_abs_diff(&c) < 1e-12);
                assert!(g2.approx_eq(&GaugeElement::identity(n), 1e-10));
                let k = sample::random_k(&mut rng, n);
                let (c3, _) = canonical_form(&act(&x, &k).unwrap(), 1e-9).unwrap();
                assert!(c3.max_abs_diff(&c) < 1e-10);
            }
        }
    }

    #[test]
    fn unstable_is_rejected() {
        let p = vec![Complex2Covector::from_re(0.0, 1.0); 4];
        let q = vec![Complex2Vector::from_re(1.0, 0.0); 4];
        let x = HyperpolygonPoint::new(p, q).unwrap();
        assert_eq!(canonical_form(&x, 1e-9).unwrap_err(), GaugeError::Unstable);
    }

    #[test]
    fn p4_orbit_examples() {
        let x = HyperpolygonPoint::p4();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let k = sample::random_k(&mut rng, 4);
        assert!(orbit_equivalent_k(&x, &act(&x, &k).unwrap(), 1e-8).unwrap());
        let y = act(&x, &diag_kc(4)).unwrap();
        assert!(orbit_equivalent_kc(&x, &y, 1e-8).unwrap());
        assert!(matches!(orbit_equivalent_k(&x, &y, 1e-8), Err(GaugeError::NotInP0n)));
        // a non-isometric deformation: scale the S-side edges of the polygon
        let z = crate::involution::construct_zs(
            4,
            &[0, 1],
            &[Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)],
            &[Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)],
            &[Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0)],
            &[Complex64::new(2.0, 0.0), Complex64::new(2.0, 0.0)],
        )
        .unwrap();
        assert!(!orbit_equivalent_k(&x, &z, 1e-8).unwrap());
    }

    #[test]
    fn free_action_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 4..7 {
            let x = sample::random_p0n_point(&mut rng, n).unwrap();
            let g = recover_gauge(&x, &x, 1e-9).unwrap().unwrap();
            assert!(g.approx_eq(&GaugeElement::identity(n), 1e-9));
        }
    }

    #[test]
    fn recover_gauge_maps_x_to_y() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = sample::random_p0n_point(&mut rng, 6).unwrap();
        let k = sample::random_k(&mut rng, 6);
        let y = act(&x, &k).unwrap();
        let g = recover_gauge(&x, &y, 1e-9).unwrap().unwrap();
        assert!(act(&x, &g).unwrap().max_abs_diff(&y) < 1e-10);
        assert!(g.approx_eq(&k, 1e-9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn action_is_a_group_action(seed in any::<u64>(), n in 3usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = sample::random_raw_point(&mut rng, n);
            let g = sample::random_kc(&mut rng, n, 0.5);
            let h = sample::random_kc(&mut rng, n, 0.5);
            let lhs = act(&x, &g.compose(&h).unwrap()).unwrap();
            let rhs = act(&act(&x, &g).unwrap(), &h).unwrap();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * x.scale().powi(1) * 10.0);
        }

        #[test]
        fn fingerprints_are_k_invariant(seed in any::<u64>(), n in 3usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = sample::random_raw_point(&mut rng, n);
            let k = sample::random_k(&mut rng, n);
            let fx = fingerprints(&x);
            let fy = fingerprints(&act(&x, &k).unwrap());
            let s = x.scale().powi(6);
            for (a, b) in fx.iter().zip(&fy) {
                prop_assert!((a - b).norm() <= 1e-10 * s);
            }
        }
    }
}
