//! Random instances for tests, verification suites and the `gen` command.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::gauge::{Flavor, GaugeElement};
use crate::higgs::{HiggsData, MarkedPoints};
use crate::involution;
use crate::kempf_ness::{self, SolverOptions};
use crate::linalg::{Complex2Covector, Complex2Vector, Matrix2C};
use crate::moment::{is_stable, HyperpolygonPoint};
use crate::tol::DEFAULT_TOL;

/// Attempts before a sampler gives up.
pub const RESAMPLE_CAP: usize = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("n = {n} is too small for this sampler, need n >= {min}")]
    TooSmall { n: usize, min: usize },
    #[error("no admissible sample after {0} attempts")]
    ResampleCapExceeded(usize),
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// A point of `T*ℂ²ⁿ` with independent complex Gaussian entries.
pub fn random_raw_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HyperpolygonPoint {
    let p = (0..n).map(|_| Complex2Covector::new(complex_gaussian(rng), complex_gaussian(rng))).collect();
    let q = (0..n).map(|_| Complex2Vector::new(complex_gaussian(rng), complex_gaussian(rng))).collect();
    HyperpolygonPoint::new(p, q).expect("finite sample")
}

/// Haar-random element of `SU(2)`.
pub fn random_su2<R: Rng + ?Sized>(rng: &mut R) -> Matrix2C {
    let v: [f64; 4] = [0; 4].map(|_| gaussian(rng));
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (a, b) = (Complex64::new(v[0], v[1]) / r, Complex64::new(v[2], v[3]) / r);
    Matrix2C::new(a, -b.conj(), b, a.conj())
}

pub fn random_k<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GaugeElement {
    let e = (0..n).map(|_| unit_phase(rng)).collect();
    GaugeElement::new(random_su2(rng), e, Flavor::K).expect("SU(2) sample")
}

/// `exp(H)` for a random traceless Hermitian `H` of Pauli size `spread`,
/// times a random `SU(2)` element.
pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> Matrix2C {
    let h = Matrix2C::from_pauli([0; 3].map(|_| spread * gaussian(rng)));
    let a = h.exp_traceless() * random_su2(rng);
    a.scale(a.det().sqrt().inv())
}

pub fn random_kc<R: Rng + ?Sized>(rng: &mut R, n: usize, spread: f64) -> GaugeElement {
    let a = random_sl2(rng, spread);
    let e = (0..n).map(|_| unit_phase(rng) * (spread * gaussian(rng)).exp()).collect();
    GaugeElement::new(a, e, Flavor::KC).expect("SL(2,C) sample")
}

/// A stable point with `μ_C = 0`.
///
/// Each `pᵢ = sᵢ(−dᵢ, cᵢ)` annihilates `qᵢ`; the scalars `s₄,…,sₙ` are
/// random and `s₁, s₂, s₃` solve the three equations `Σ qᵢpᵢ = 0`.
pub fn random_stable_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<HyperpolygonPoint, SampleError> {
    if n < 4 {
        return Err(SampleError::TooSmall { n, min: 4 });
    }
    for _ in 0..RESAMPLE_CAP {
        let q: Vec<Complex2Vector> =
            (0..n).map(|_| Complex2Vector::new(complex_gaussian(rng), complex_gaussian(rng))).collect();
        let column = |v: &Complex2Vector| {
            let [c, d] = v.0;
            Vector3::new(-c * d, c * c, -d * d)
        };
        let mut s: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); 3];
        s.extend((3..n).map(|_| complex_gaussian(rng)));
        let rhs = (3..n).fold(Vector3::zeros(), |acc, i| acc - column(&q[i]) * s[i]);
        let m = Matrix3::from_columns(&[column(&q[0]), column(&q[1]), column(&q[2])]);
        let Some(sol) = m.lu().solve(&rhs) else { continue };
        s[..3].copy_from_slice(sol.as_slice());
        if s.iter().any(|z| !z.is_finite() || z.norm() < 0.05 || z.norm() > 20.0) {
            continue;
        }
        let p = q.iter().zip(&s).map(|(v, si)| Complex2Covector::new(-v.0[1], v.0[0]).scale(*si)).collect();
        let x = HyperpolygonPoint::new(p, q).expect("finite sample");
        if is_stable(&x, 1e-3) {
            return Ok(x);
        }
    }
    Err(SampleError::ResampleCapExceeded(RESAMPLE_CAP))
}

/// A stable point of `P₀ⁿ`, obtained by flowing [`random_stable_point`].
pub fn random_p0n_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<HyperpolygonPoint, SampleError> {
    let opts = SolverOptions { tol: 1e-13, ..SolverOptions::default() };
    for _ in 0..RESAMPLE_CAP {
        let x = random_stable_point(rng, n)?;
        if let Ok((y, _)) = kempf_ness::solve(&x, &opts) {
            return Ok(y);
        }
    }
    Err(SampleError::ResampleCapExceeded(RESAMPLE_CAP))
}

/// `m` nonzero complex numbers summing to zero, each of modulus at least
/// `0.05` times the largest.
fn zero_sum_numbers<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<Complex64> {
    loop {
        let mut z: Vec<Complex64> = (0..m).map(|_| complex_gaussian(rng)).collect();
        let mean = z.iter().sum::<Complex64>() / m as f64;
        z.iter_mut().for_each(|v| *v -= mean);
        let max = z.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if z.iter().all(|v| v.norm() > 0.05 * max) {
            return z;
        }
    }
}

/// A point of `Z_S` in block form for the 0-based index set `s`.
///
/// Products `bᵢcᵢ` on `S` and `aᵢdᵢ` on `Sᶜ` are random with zero sum, the
/// moduli are balanced (`|bᵢ| = |cᵢ|`, `|aᵢ| = |dᵢ|`) and the two sides are
/// scaled so that `Σ_S |cᵢ|² = Σ_{Sᶜ} |aᵢ|²`.
pub fn random_zs_point<R: Rng + ?Sized>(rng: &mut R, n: usize, s: &[usize]) -> Result<HyperpolygonPoint, SampleError> {
    involution::check_index_set(n, s).map_err(|e| SampleError::InvalidIndexSet(e.to_string()))?;
    let sc: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
    let z = zero_sum_numbers(rng, s.len());
    let mut w = zero_sum_numbers(rng, sc.len());
    let ratio = z.iter().map(|v| v.norm()).sum::<f64>() / w.iter().map(|v| v.norm()).sum::<f64>();
    w.iter_mut().for_each(|v| *v *= ratio);
    let split = |rng: &mut R, v: Complex64| {
        let first = Complex64::from_polar(v.norm().sqrt(), rng.random_range(0.0..std::f64::consts::TAU));
        (first, v / first)
    };
    let (mut c, mut b) = (Vec::new(), Vec::new());
    for v in z {
        let (ci, bi) = split(rng, v);
        c.push(ci);
        b.push(bi);
    }
    let (mut a, mut d) = (Vec::new(), Vec::new());
    for v in w {
        let (ai, di) = split(rng, v);
        a.push(ai);
        d.push(di);
    }
    involution::construct_zs(n, s, &b, &c, &a, &d).map_err(|e| SampleError::InvalidIndexSet(e.to_string()))
}

/// Stable Higgs data from a random stable point, with `n`-th roots of unity
/// as marked points.
pub fn random_higgs<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<HiggsData, SampleError> {
    let x = random_stable_point(rng, n)?;
    crate::higgs::from_hyperpolygon(&x, &MarkedPoints::roots_of_unity(n), DEFAULT_TOL)
        .map_err(|_| SampleError::ResampleCapExceeded(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::{in_p0n, mu_complex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn stable_points_are_on_the_complex_level() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 4..12 {
            for _ in 0..20 {
                let x = random_stable_point(&mut rng, n).unwrap();
                assert!(is_stable(&x, 1e-9));
                assert!(mu_complex(&x).norm() < 1e-12 * x.norm_sqr());
            }
        }
        assert!(random_stable_point(&mut rng, 3).is_err());
    }

    #[test]
    fn samplers_are_deterministic() {
        let a = random_stable_point(&mut ChaCha8Rng::seed_from_u64(1), 6).unwrap();
        let b = random_stable_point(&mut ChaCha8Rng::seed_from_u64(1), 6).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zs_points_lie_in_p0n() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for s in [vec![0, 1], vec![0, 2, 3], vec![0, 4]] {
            let x = random_zs_point(&mut rng, 6, &s).unwrap();
            assert!(in_p0n(&x, 1e-12));
        }
    }
}
