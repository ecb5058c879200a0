//! The involution `ι[p, q] = [qᵗ, pᵗ]` and its fixed components `Z_S`.
//!
//! A fixed point has, after a `K` rotation, the block form
//! `pᵢ = (0, bᵢ)`, `qᵢ = (cᵢ, 0)ᵗ` for `i ∈ S` and `pᵢ = (aᵢ, 0)`,
//! `qᵢ = (0, dᵢ)ᵗ` for `i ∉ S`, with `1 ∈ S` and `2 ≤ |S| ≤ n − 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gauge::{act, canonical_form, orbit_equivalent_k, Flavor, GaugeElement, GaugeError};
use crate::io::one_based;
use crate::linalg::{Complex2Covector, Complex2Vector, Matrix2C, I, ZERO};
use crate::moment::HyperpolygonPoint;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvolutionError {
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("census needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error("fixed point does not reduce to block form (defect {0:e})")]
    BlockForm(f64),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

/// `pᵢ ↦ qᵢᵗ`, `qᵢ ↦ pᵢᵗ`.
pub fn iota(x: &HyperpolygonPoint) -> HyperpolygonPoint {
    let p = x.q().iter().map(Complex2Vector::transpose).collect();
    let q = x.p().iter().map(Complex2Covector::transpose).collect();
    HyperpolygonPoint::new(p, q).expect("swap preserves shape")
}

/// Checks that a 0-based index set is sorted, contains the first index and
/// has size between 2 and `n − 2`.
pub fn check_index_set(n: usize, s: &[usize]) -> Result<(), InvolutionError> {
    let bad = |m: &str| Err(InvolutionError::InvalidIndexSet(m.to_string()));
    if s.first() != Some(&0) {
        return bad("S must contain the first index");
    }
    if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&i| i >= n) {
        return bad("S must be strictly increasing and within range");
    }
    if s.len() < 2 || s.len() + 2 > n {
        return bad("S and its complement must each have at least two elements");
    }
    Ok(())
}

/// Evidence that `x` is fixed: `act(x, gauge) = ι(x)`, and
/// `normal_point = act(x, normal_gauge)` is in block form for `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointWitness {
    #[serde(rename = "S", with = "one_based::indices")]
    pub s: Vec<usize>,
    pub gauge: GaugeElement,
    pub normal_gauge: GaugeElement,
    pub normal_point: HyperpolygonPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub fixed: bool,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub witness: Option<FixedPointWitness>,
}

impl Classification {
    pub fn not_fixed() -> Self {
        Self { fixed: false, witness: None }
    }
}

/// Decides whether `x ∈ P₀ⁿ` is fixed by `ι` up to `K`, and if so returns
/// its component `S` and a witness gauge.
pub fn classify_fixed(x: &HyperpolygonPoint, tol: f64) -> Result<Classification, InvolutionError> {
    let ix = iota(x);
    if !orbit_equivalent_k(x, &ix, tol)? {
        return Ok(Classification::not_fixed());
    }
    let (y, gc) = canonical_form(x, tol)?;
    let n = x.n();
    let s: Vec<usize> = (0..n).filter(|&i| y.q()[i].0[1].norm() <= y.q()[i].0[0].norm()).collect();

    let mut defect: f64 = 0.0;
    for i in 0..n {
        let (p, q) = (y.p()[i], y.q()[i]);
        let size = p.norm() + q.norm();
        let off = if s.contains(&i) { p.0[0].norm().max(q.0[1].norm()) } else { p.0[1].norm().max(q.0[0].norm()) };
        defect = defect.max(off / size);
    }
    if defect > 1e-6 {
        return Err(InvolutionError::BlockForm(defect));
    }
    check_index_set(n, &s)?;

    // On the block form, ι is realized by W = [[0, i], [i, 0]] with
    // eᵢ = i·bᵢ/cᵢ on S and i·aᵢ/dᵢ off S.
    let w = Matrix2C::new(ZERO, I, I, ZERO);
    let e_w: Vec<Complex64> = (0..n)
        .map(|i| {
            let ([a, b], [c, d]) = (y.p()[i].0, y.q()[i].0);
            let r = if s.contains(&i) { b / c } else { a / d };
            I * r / r.norm()
        })
        .collect();
    // x = act(y, gc⁻¹) and ι(act(y, [B; f])) = act(ι(y), [B⁻ᵗ; f⁻¹])
    let a = *gc.a();
    let e = gc.e().iter().zip(&e_w).map(|(ec, ew)| ec * ec * ew).collect();
    let gauge = GaugeElement::new_tol(a * w * a.transpose(), e, Flavor::K, 1e-6)?;
    let witness = FixedPointWitness { s, gauge, normal_gauge: gc, normal_point: y };
    Ok(Classification { fixed: true, witness: Some(witness) })
}

/// Largest entry of the residues `qᵢpᵢ` of the normal point that violates
/// the pattern: strictly upper triangular on `S`, strictly lower off `S`.
pub fn triangular_defect(w: &FixedPointWitness) -> f64 {
    let mut m: f64 = 0.0;
    for (i, r) in w.normal_point.residues().iter().enumerate() {
        let off = if w.s.contains(&i) { r.0[1][0] } else { r.0[0][1] };
        m = m.max(off.norm()).max(r.0[0][0].norm()).max(r.0[1][1].norm());
    }
    m
}

/// The block point with `pᵢ = (0, bᵢ)`, `qᵢ = (cᵢ, 0)ᵗ` on `S` and
/// `pᵢ = (aᵢ, 0)`, `qᵢ = (0, dᵢ)ᵗ` off `S`. Slices `b`, `c` run over `S` and
/// `a`, `d` over the complement, in increasing index order.
pub fn construct_zs(
    n: usize,
    s: &[usize],
    b: &[Complex64],
    c: &[Complex64],
    a: &[Complex64],
    d: &[Complex64],
) -> Result<HyperpolygonPoint, InvolutionError> {
    check_index_set(n, s)?;
    let k = s.len();
    if b.len() != k || c.len() != k || a.len() != n - k || d.len() != n - k {
        return Err(InvolutionError::PreconditionViolated("coefficient list lengths do not match S".into()));
    }
    let fail = |m: &str| Err(InvolutionError::PreconditionViolated(m.to_string()));
    if b.iter().chain(c).chain(a).chain(d).any(|z| *z == ZERO || !z.is_finite()) {
        return fail("all entries must be nonzero and finite");
    }
    let scale: f64 = c.iter().chain(a).map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
    let tol = 1e-9;
    if b.iter().zip(c).any(|(x, y)| (x.norm() - y.norm()).abs() > tol * y.norm().max(1.0)) {
        return fail("|b_i| = |c_i| on S");
    }
    if a.iter().zip(d).any(|(x, y)| (x.norm() - y.norm()).abs() > tol * y.norm().max(1.0)) {
        return fail("|a_i| = |d_i| off S");
    }
    if b.iter().zip(c).map(|(x, y)| x * y).sum::<Complex64>().norm() > tol * scale {
        return fail("sum of b_i c_i over S vanishes");
    }
    if a.iter().zip(d).map(|(x, y)| x * y).sum::<Complex64>().norm() > tol * scale {
        return fail("sum of a_i d_i off S vanishes");
    }
    let lhs: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let rhs: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if (lhs - rhs).abs() > tol * scale {
        return fail("sum of |c_i|^2 over S equals sum of |a_i|^2 off S");
    }
    let (mut p, mut q) = (Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut js, mut jc) = (0, 0);
    for i in 0..n {
        if s.contains(&i) {
            p.push(Complex2Covector::new(ZERO, b[js]));
            q.push(Complex2Vector::new(c[js], ZERO));
            js += 1;
        } else {
            p.push(Complex2Covector::new(a[jc], ZERO));
            q.push(Complex2Vector::new(ZERO, d[jc]));
            jc += 1;
        }
    }
    Ok(HyperpolygonPoint::new(p, q).expect("finite entries"))
}

/// All admissible `S` for a given `n`, by increasing bitmask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    pub count: usize,
    #[serde(with = "one_based::index_sets")]
    pub components: Vec<Vec<usize>>,
}

pub fn component_census(n: usize) -> Result<Census, InvolutionError> {
    if n < 3 {
        return Err(InvolutionError::TooSmall(n));
    }
    let mut components = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        // bit j of the mask is index j + 1; index 0 is always in S
        let size = 1 + mask.count_ones() as usize;
        if size >= 2 && size + 2 <= n {
            let mut s = vec![0];
            s.extend((0..n - 1).filter(|j| mask >> j & 1 == 1).map(|j| j + 1));
            components.push(s);
        }
    }
    Ok(Census { n, count: components.len(), components })
}

/// `2ⁿ⁻¹ − (n + 1)`, the closed form of the census count for `n ≥ 3`.
pub fn census_formula(n: usize) -> usize {
    (1usize << (n - 1)) - (n + 1)
}

/// `act(x, gauge)` compared with `ι(x)`.
pub fn witness_defect(x: &HyperpolygonPoint, w: &FixedPointWitness) -> Result<f64, InvolutionError> {
    Ok(act(x, &w.gauge)?.max_abs_diff(&iota(x)))
}
