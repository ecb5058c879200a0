//! Holomorphic coordinate charts on the moduli of stable Higgs data.
//!
//! Fix a pivot pair `σ = (σ₁, σ₂)`. Up to `PSL(2,ℂ)` the data can be moved
//! so that the flag at `σ₁` is `[1:0]` with residue `[[0,1],[0,0]]` and the
//! flag at `σ₂` is `[0:1]`. Every other index `i` then has its flag either
//! in the chart `[1:wᵢ]` (side A) or `[zᵢ:1]` (side B), and its residue is
//!
//! * side A: `λᵢ [[−wᵢ, 1], [−wᵢ², wᵢ]]`,
//! * side B: `λᵢ [[−zᵢ, zᵢ²], [−1, zᵢ]]`.
//!
//! The zero-sum condition on residues is three scalar equations
//!
//! * `1 + Σ_{A∖σ₁} λ + Σ_{B∖σ₂} z²λ = 0`,
//! * `Σ_{A∖σ₁} wλ + Σ_{B∖σ₂} zλ = 0`,
//! * `Σ_{A∖σ₁} w²λ + Σ_B λ = 0`.
//!
//! The last one fixes `λ_{σ₂}`; the first two fix the coordinate and `λ` of
//! one further index `i₀`, leaving `n − 3` free coordinates and `n − 3`
//! nonzero scales.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::higgs::{HiggsData, HiggsError, MarkedPoints};
use crate::io::one_based;
use crate::linalg::{Complex2Vector, Matrix2C, ONE, ZERO};
use crate::tol::DEFAULT_TOL;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChartError {
    #[error("residue scale lambda must be nonzero")]
    ZeroLambda,
    #[error("pivot flags at {0} and {1} coincide")]
    PivotCollision(usize, usize),
    #[error("invalid pivot pair ({0}, {1})")]
    InvalidPivots(usize, usize),
    #[error("no index can be eliminated: every denominator vanishes")]
    DegenerateDenominator,
    #[error("index {0} cannot be placed on the requested side")]
    SideMismatch(usize),
    #[error("malformed chart: {0}")]
    Malformed(String),
    #[error("data violates the residue sum rule by {0:e}")]
    SumRuleViolated(f64),
    #[error(transparent)]
    Higgs(#[from] HiggsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Coordinate (`w` on side A, `z` on side B) and scale of one index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartEntry {
    #[serde(with = "one_based::index")]
    pub index: usize,
    pub side: Side,
    pub coord: Complex64,
    pub lambda: Complex64,
}

/// A point of `ℂⁿ⁻³ × (ℂ*)ⁿ⁻³` in the chart `U_{A,B}` with pivots `σ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartCoords {
    #[serde(rename = "A", with = "one_based::indices")]
    pub a: Vec<usize>,
    #[serde(rename = "B", with = "one_based::indices")]
    pub b: Vec<usize>,
    #[serde(with = "one_based::pair")]
    pub sigma: (usize, usize),
    /// The `n − 3` free entries, by increasing index.
    pub free: Vec<ChartEntry>,
    /// The index `i₀` solved from the sum rules.
    pub eliminated: ChartEntry,
    pub marked: MarkedPoints,
}

impl ChartCoords {
    pub fn n(&self) -> usize {
        self.marked.len()
    }

    /// Largest difference of free coordinates and scales; infinite if the
    /// charts differ combinatorially.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        if self.a != o.a || self.b != o.b || self.sigma != o.sigma || self.eliminated.index != o.eliminated.index {
            return f64::INFINITY;
        }
        self.free
            .iter()
            .zip(&o.free)
            .chain([(&self.eliminated, &o.eliminated)])
            .map(|(x, y)| (x.coord - y.coord).norm().max((x.lambda - y.lambda).norm()))
            .fold(0.0, f64::max)
    }
}

/// Optional constraints for [`chart_normalize_with`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChartOptions {
    /// Side-A index set to use instead of the magnitude rule.
    pub partition_a: Option<Vec<usize>>,
    /// Index to eliminate instead of the smallest admissible one.
    pub i0: Option<usize>,
}

pub fn chart_residue(coord: Complex64, lambda: Complex64, side: Side) -> Result<Matrix2C, ChartError> {
    if lambda == ZERO || !lambda.is_finite() {
        return Err(ChartError::ZeroLambda);
    }
    let m = match side {
        Side::A => Matrix2C::new(-coord, ONE, -coord * coord, coord),
        Side::B => Matrix2C::new(-coord, coord * coord, -ONE, coord),
    };
    Ok(m.scale(lambda))
}

fn chart_flag(coord: Complex64, side: Side) -> Complex2Vector {
    match side {
        Side::A => Complex2Vector::new(ONE, coord),
        Side::B => Complex2Vector::new(coord, ONE),
    }
}

/// Size used to judge whether an elimination denominator vanishes.
fn entry_scale(entries: &[ChartEntry]) -> f64 {
    1.0 + entries.iter().map(|e| e.lambda.norm() * (1.0 + e.coord.norm_sqr())).sum::<f64>()
}

/// Solves the first two sum rules for index `i0` given all other non-pivot
/// entries. Returns the eliminated entry and the size of its denominator.
fn eliminate(i0: usize, side: Side, others: &[ChartEntry]) -> (ChartEntry, f64) {
    match side {
        Side::A => {
            let mut d = ONE;
            let mut num = ZERO;
            for e in others {
                match e.side {
                    Side::A => {
                        d += e.lambda;
                        num += e.coord * e.lambda;
                    }
                    Side::B => {
                        d += e.coord * e.coord * e.lambda;
                        num += e.coord * e.lambda;
                    }
                }
            }
            (ChartEntry { index: i0, side, coord: num / d, lambda: -d }, d.norm())
        }
        Side::B => {
            let mut p = ONE;
            let mut q = ZERO;
            for e in others {
                p += e.coord * e.coord * e.lambda;
                q += e.coord * e.lambda;
            }
            (ChartEntry { index: i0, side, coord: p / q, lambda: -q * q / p }, p.norm().min(q.norm()))
        }
    }
}

/// `λ_{σ₂} = −Σ_{A∖σ₁} w²λ − Σ_{B∖σ₂} λ`.
fn pivot_lambda(entries: &[ChartEntry]) -> Complex64 {
    -entries
        .iter()
        .map(|e| match e.side {
            Side::A => e.coord * e.coord * e.lambda,
            Side::B => e.lambda,
        })
        .sum::<Complex64>()
}

pub fn chart_normalize(h: &HiggsData, sigma: (usize, usize)) -> Result<(ChartCoords, Matrix2C), ChartError> {
    chart_normalize_with(h, sigma, &ChartOptions::default())
}

/// Normalizes `h` at the pivots `σ` (0-based) and reads off chart
/// coordinates. Returns the coordinates and the normalizing `g ∈ SL(2,ℂ)`,
/// which acts by `f ↦ g f`, `N ↦ g N g⁻¹`.
pub fn chart_normalize_with(
    h: &HiggsData,
    sigma: (usize, usize),
    opts: &ChartOptions,
) -> Result<(ChartCoords, Matrix2C), ChartError> {
    let n = h.n();
    let (s1, s2) = sigma;
    if s1 == s2 || s1 >= n || s2 >= n {
        return Err(ChartError::InvalidPivots(s1, s2));
    }
    let (f1, f2) = (h.flags()[s1], h.flags()[s2]);
    let m = Matrix2C::new(f1.0[0], f2.0[0], f1.0[1], f2.0[1]);
    let det = m.det();
    if det.norm() <= DEFAULT_TOL * f1.norm() * f2.norm() {
        return Err(ChartError::PivotCollision(s1, s2));
    }
    // g₀ = M⁻¹ √det M sends f₁ to [1:0] and f₂ to [0:1]
    let g0 = m.sl2_inverse().scale(det.sqrt().inv());
    let mu = (g0 * h.residues()[s1] * g0.sl2_inverse()).0[0][1];
    let s = mu.sqrt().inv();
    let g = Matrix2C::diag(s, s.inv()) * g0;
    let ginv = g.sl2_inverse();

    let mut entries = Vec::with_capacity(n - 2);
    for i in (0..n).filter(|&i| i != s1 && i != s2) {
        let f = g.mul_vec(&h.flags()[i]);
        let r = g * h.residues()[i] * ginv;
        let side = match &opts.partition_a {
            Some(a) => {
                if a.contains(&i) {
                    Side::A
                } else {
                    Side::B
                }
            }
            None => {
                if f.0[1].norm() <= f.0[0].norm() {
                    Side::A
                } else {
                    Side::B
                }
            }
        };
        let entry = match side {
            Side::A => {
                if f.0[0].norm() <= DEFAULT_TOL * f.norm() {
                    return Err(ChartError::SideMismatch(i));
                }
                ChartEntry { index: i, side, coord: f.0[1] / f.0[0], lambda: r.0[0][1] }
            }
            Side::B => {
                if f.0[1].norm() <= DEFAULT_TOL * f.norm() {
                    return Err(ChartError::SideMismatch(i));
                }
                ChartEntry { index: i, side, coord: f.0[0] / f.0[1], lambda: -r.0[1][0] }
            }
        };
        if entry.lambda == ZERO {
            return Err(ChartError::ZeroLambda);
        }
        entries.push(entry);
    }

    let a_only_pivot = entries.iter().all(|e| e.side == Side::B);
    let elim_side = if a_only_pivot { Side::B } else { Side::A };
    let scale = entry_scale(&entries);
    let candidates: Vec<usize> = match opts.i0 {
        Some(i0) => {
            if !entries.iter().any(|e| e.index == i0 && e.side == elim_side) {
                return Err(ChartError::Malformed(format!("index {} cannot be eliminated", i0 + 1)));
            }
            vec![i0]
        }
        None => entries.iter().filter(|e| e.side == elim_side).map(|e| e.index).collect(),
    };
    let mut chosen = None;
    for i0 in candidates {
        let others: Vec<ChartEntry> = entries.iter().filter(|e| e.index != i0).copied().collect();
        let (elim, denom) = eliminate(i0, elim_side, &others);
        if denom > 1e-6 * scale {
            chosen = Some((elim, others));
            break;
        }
    }
    let (eliminated, free) = chosen.ok_or(ChartError::DegenerateDenominator)?;
    let dropped = entries.iter().find(|e| e.index == eliminated.index).expect("candidate is an entry");
    let defect = (dropped.coord - eliminated.coord).norm().max((dropped.lambda - eliminated.lambda).norm());
    if defect > 1e-6 * scale {
        return Err(ChartError::SumRuleViolated(defect));
    }

    let mut a = vec![s1];
    let mut b = vec![s2];
    for e in &entries {
        match e.side {
            Side::A => a.push(e.index),
            Side::B => b.push(e.index),
        }
    }
    a.sort_unstable();
    b.sort_unstable();
    let coords = ChartCoords { a, b, sigma, free, eliminated, marked: h.marked().clone() };
    Ok((coords, g))
}

fn validate(c: &ChartCoords) -> Result<(), ChartError> {
    let n = c.n();
    let (s1, s2) = c.sigma;
    if s1 == s2 || s1 >= n || s2 >= n || !c.a.contains(&s1) || !c.b.contains(&s2) {
        return Err(ChartError::InvalidPivots(s1, s2));
    }
    let mut seen = vec![false; n];
    for &i in c.a.iter().chain(&c.b) {
        if i >= n || seen[i] {
            return Err(ChartError::Malformed("A and B must partition the index set".into()));
        }
        seen[i] = true;
    }
    if seen.iter().any(|s| !s) {
        return Err(ChartError::Malformed("A and B must partition the index set".into()));
    }
    if c.free.len() + 3 != n {
        return Err(ChartError::Malformed(format!("expected {} free entries, got {}", n - 3, c.free.len())));
    }
    let mut covered = vec![s1, s2, c.eliminated.index];
    for e in &c.free {
        if e.lambda == ZERO || !e.lambda.is_finite() || !e.coord.is_finite() {
            return Err(ChartError::ZeroLambda);
        }
        let side_ok = match e.side {
            Side::A => c.a.contains(&e.index),
            Side::B => c.b.contains(&e.index),
        };
        if !side_ok {
            return Err(ChartError::SideMismatch(e.index));
        }
        covered.push(e.index);
    }
    covered.sort_unstable();
    covered.dedup();
    if covered.len() != n {
        return Err(ChartError::Malformed("entries must cover every index once".into()));
    }
    let expected = if c.a.len() == 1 { Side::B } else { Side::A };
    if c.eliminated.side != expected {
        return Err(ChartError::SideMismatch(c.eliminated.index));
    }
    Ok(())
}

/// Rebuilds Higgs data from chart coordinates. The eliminated entry stored
/// in `c` is ignored and recomputed from the free entries.
pub fn chart_reconstruct(c: &ChartCoords) -> Result<HiggsData, ChartError> {
    validate(c)?;
    let (elim, denom) = eliminate(c.eliminated.index, c.eliminated.side, &c.free);
    let scale = entry_scale(&c.free);
    if denom <= 1e-12 * scale || !elim.coord.is_finite() || !elim.lambda.is_finite() {
        return Err(ChartError::DegenerateDenominator);
    }
    let mut all = c.free.clone();
    all.push(elim);
    let lam2 = pivot_lambda(&all);
    if lam2.norm() <= 1e-12 * scale {
        return Err(ChartError::DegenerateDenominator);
    }
    let n = c.n();
    let (s1, s2) = c.sigma;
    let mut flags = vec![Complex2Vector::ZERO; n];
    let mut residues = vec![Matrix2C::ZERO; n];
    flags[s1] = chart_flag(ZERO, Side::A);
    residues[s1] = chart_residue(ZERO, ONE, Side::A)?;
    flags[s2] = chart_flag(ZERO, Side::B);
    residues[s2] = chart_residue(ZERO, lam2, Side::B)?;
    for e in &all {
        flags[e.index] = chart_flag(e.coord, e.side);
        residues[e.index] = chart_residue(e.coord, e.lambda, e.side)?;
    }
    Ok(HiggsData::new(c.marked.clone(), flags, residues)?)
}
