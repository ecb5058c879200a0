//! Randomized verification suites.
//!
//! Every instance draws from its own ChaCha stream derived from the seed,
//! the suite and the instance coordinates, so reports do not depend on
//! scheduling. Instances run in parallel and are merged in index order.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charts::{chart_normalize, chart_reconstruct};
use crate::gauge::{act, orbit_distance_k, orbit_distance_kc};
use crate::higgs::{from_hyperpolygon, higgs_stable, to_hyperpolygon, transform, MarkedPoints};
use crate::involution::{self, classify_fixed, component_census, iota};
use crate::kempf_ness::{self, SolverOptions};
use crate::minkowski::{self, bend_trajectory, normalize_diagonal};
use crate::moment::{mu_complex, mu_real};
use crate::sample;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Moment,
    Kempfness,
    HiggsRoundtrip,
    Involution,
    PolygonRoundtrip,
    Census,
    Charts,
    Bending,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Moment,
        Suite::Kempfness,
        Suite::HiggsRoundtrip,
        Suite::Involution,
        Suite::PolygonRoundtrip,
        Suite::Census,
        Suite::Charts,
        Suite::Bending,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moment => "moment",
            Suite::Kempfness => "kempfness",
            Suite::HiggsRoundtrip => "higgs-roundtrip",
            Suite::Involution => "involution",
            Suite::PolygonRoundtrip => "polygon-roundtrip",
            Suite::Census => "census",
            Suite::Charts => "charts",
            Suite::Bending => "bending",
        }
    }

    fn default_ns(self) -> Vec<usize> {
        match self {
            Suite::Census => (4..=12).collect(),
            Suite::Involution => vec![4, 6, 8],
            Suite::Kempfness => (4..=10).collect(),
            Suite::Bending => vec![4, 5, 6],
            _ => (4..=8).collect(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite \"{s}\""))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Worst value over all instances.
    pub measured: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub ns: Vec<usize>,
    pub count: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Sizes to test; `None` picks the suite default.
    pub ns: Option<Vec<usize>>,
    /// Instances per size.
    pub count: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 0, ns: None, count: 100 }
    }
}

/// Instance stream: the seed picks the key, `(suite, n, i)` the stream.
fn instance_rng(seed: u64, suite: Suite, n: usize, i: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((suite as u64) << 56) | ((n as u64) << 32) | i as u64);
    rng
}

/// Measured values per instance, one slot per metric; failures are recorded
/// as infinity.
type Metrics = Vec<f64>;

fn run_instances<F>(cfg: &VerifyConfig, suite: Suite, ns: &[usize], metrics: usize, f: F) -> Metrics
where
    F: Fn(&mut ChaCha8Rng, usize) -> Option<Metrics> + Sync,
{
    let jobs: Vec<(usize, usize)> = ns.iter().flat_map(|&n| (0..cfg.count).map(move |i| (n, i))).collect();
    let results: Vec<Metrics> = jobs
        .par_iter()
        .map(|&(n, i)| {
            let mut rng = instance_rng(cfg.seed, suite, n, i);
            f(&mut rng, n).unwrap_or_else(|| vec![f64::INFINITY; metrics])
        })
        .collect();
    results.iter().fold(vec![0.0; metrics], |acc, r| acc.iter().zip(r).map(|(a, b)| a.max(*b)).collect())
}

fn checks(names: &[(&str, f64)], measured: &[f64]) -> Vec<Check> {
    names
        .iter()
        .zip(measured)
        .map(|(&(name, threshold), &m)| Check { name: name.to_string(), passed: m <= threshold, measured: m, threshold })
        .collect()
}

fn flag(b: bool) -> f64 {
    if b { 0.0 } else { 1.0 }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Report {
    let ns = cfg.ns.clone().unwrap_or_else(|| suite.default_ns());
    let checks = match suite {
        Suite::Moment => moment_suite(cfg, &ns),
        Suite::Kempfness => kempfness_suite(cfg, &ns),
        Suite::HiggsRoundtrip => higgs_suite(cfg, &ns),
        Suite::Involution => involution_suite(cfg, &ns),
        Suite::PolygonRoundtrip => polygon_suite(cfg, &ns),
        Suite::Census => census_suite(&ns),
        Suite::Charts => charts_suite(cfg, &ns),
        Suite::Bending => bending_suite(cfg, &ns),
    };
    let passed = checks.iter().all(|c| c.passed);
    Report { suite, seed: cfg.seed, ns, count: cfg.count, checks, passed }
}

fn moment_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::Moment, ns, 3, |rng, n| {
        let x = sample::random_stable_point(rng, n).ok()?;
        let k = sample::random_k(rng, n);
        let y = act(&x, &k).ok()?;
        let scale = x.scale().powi(2);
        let (rx, ry) = (mu_real(&x), mu_real(&y));
        let rot = k.a().adjoint() * rx.su2_star * *k.a();
        let equivariance = (rot - ry.su2_star).norm().max(
            rx.r_n.iter().zip(&ry.r_n).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        );
        let complex = (mu_complex(&x).norm()).max(mu_complex(&y).norm()) / scale;
        let z = sample::random_p0n_point(rng, n).ok()?;
        let p0n = mu_real(&z).norm().max(mu_complex(&z).norm());
        Some(vec![equivariance / scale, complex, p0n])
    });
    checks(&[("real moment equivariance", 1e-10), ("complex level of samples", 1e-12), ("P0n samples", 1e-9)], &m)
}

fn kempfness_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::Kempfness, ns, 4, |rng, n| {
        let x = sample::random_stable_point(rng, n).ok()?;
        let x1 = act(&x, &sample::random_kc(rng, n, 0.5)).ok()?;
        let x2 = act(&x, &sample::random_kc(rng, n, 0.5)).ok()?;
        let opts = SolverOptions { tol: 1e-10, ..SolverOptions::default() };
        let (y1, r1) = kempf_ness::solve(&x1, &opts).ok()?;
        let (y2, r2) = kempf_ness::solve(&x2, &opts).ok()?;
        let monotone = r1.objective_trace.windows(2).all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0));
        Some(vec![
            r1.final_residual.max(r2.final_residual),
            r1.iterations.max(r2.iterations) as f64,
            orbit_distance_k(&y1, &y2, 1e-12).ok()?,
            flag(monotone),
        ])
    });
    checks(
        &[("moment residual", 1e-9), ("iterations", 1e4), ("orbit agreement", 1e-8), ("monotone objective", 0.0)],
        &m,
    )
}

fn higgs_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::HiggsRoundtrip, ns, 5, |rng, n| {
        let x = sample::random_stable_point(rng, n).ok()?;
        let h = from_hyperpolygon(&x, &MarkedPoints::roots_of_unity(n), 1e-9).ok()?;
        let y = to_hyperpolygon(&h).ok()?;
        let (sum, nil) = h.residue_defects();
        let recon = y.residues().iter().zip(h.residues()).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max);
        let theta = crate::higgs::theta_involution(&h).ok()?;
        let intertwine = orbit_distance_kc(&to_hyperpolygon(&theta).ok()?, &iota(&y), 1e-12).ok()?;
        Some(vec![orbit_distance_kc(&x, &y, 1e-12).ok()?, sum.max(nil), recon, flag(higgs_stable(&h, 1e-9)), intertwine])
    });
    checks(
        &[
            ("orbit round trip", 1e-8),
            ("residue sum and nilpotency", 1e-10),
            ("residue reconstruction", 1e-10),
            ("stability", 0.0),
            ("theta intertwines iota", 1e-8),
        ],
        &m,
    )
}

fn involution_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::Involution, ns, 5, |rng, n| {
        let census = component_census(n).ok()?;
        let s = &census.components[sample_index(rng, census.count)];
        let x = sample::random_zs_point(rng, n, s).ok()?;
        let x = act(&x, &sample::random_k(rng, n)).ok()?;
        let c = classify_fixed(&x, 1e-9).ok()?;
        let w = c.witness?;
        let generic = sample::random_p0n_point(rng, n).ok()?;
        Some(vec![
            flag(iota(&iota(&x)) == x),
            flag(&w.s == s),
            involution::witness_defect(&x, &w).ok()?,
            involution::triangular_defect(&w),
            flag(!classify_fixed(&generic, 1e-9).ok()?.fixed),
        ])
    });
    checks(
        &[
            ("iota is an involution", 0.0),
            ("recovered S", 0.0),
            ("witness gauge", 1e-9),
            ("triangular residues", 1e-10),
            ("generic points not fixed", 0.0),
        ],
        &m,
    )
}

fn sample_index(rng: &mut ChaCha8Rng, len: usize) -> usize {
    use rand::Rng;
    rng.random_range(0..len)
}

fn polygon_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::PolygonRoundtrip, ns, 3, |rng, n| {
        let census = component_census(n).ok()?;
        let s = &census.components[sample_index(rng, census.count)];
        let x = sample::random_zs_point(rng, n, s).ok()?;
        let x = act(&x, &sample::random_k(rng, n)).ok()?;
        let (p, order) = minkowski::zs_to_polygon(&x, 1e-9).ok()?;
        let y = minkowski::polygon_to_zs_ordered(&p, &order).ok()?;
        let scale = p.scale();
        let (q, _) = normalize_diagonal(&p).ok()?;
        let axis = q.diagonal().x.hypot(q.diagonal().y) / scale;
        Some(vec![orbit_distance_k(&x, &y, 1e-12).ok()?, p.closure_defect() / scale, axis])
    });
    checks(&[("orbit round trip", 1e-8), ("closure", 1e-10), ("normalized diagonal", 1e-10)], &m)
}

fn census_suite(ns: &[usize]) -> Vec<Check> {
    let worst = ns
        .iter()
        .map(|&n| match component_census(n) {
            Ok(c) if n >= 3 => (c.count as f64 - involution::census_formula(n) as f64).abs(),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    let n4 = component_census(4).map(|c| c.count as f64).unwrap_or(f64::INFINITY);
    checks(&[("count matches 2^(n-1) - (n+1)", 0.0), ("three components at n = 4", 0.0)], &[worst, (n4 - 3.0).abs()])
}

fn charts_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::Charts, ns, 3, |rng, n| {
        let h = sample::random_higgs(rng, n).ok()?;
        let (c, g) = chart_normalize(&h, (0, 1)).ok()?;
        let back = chart_reconstruct(&c).ok()?;
        let round = back.max_abs_diff(&transform(&h, &g).ok()?);
        let pre = transform(&h, &sample::random_sl2(rng, 0.5)).ok()?;
        let (c2, _) = chart_normalize(&pre, (0, 1)).ok()?;
        let sum = back.residues().iter().copied().sum::<crate::Matrix2C>().norm();
        Some(vec![round, c.max_abs_diff(&c2), sum])
    });
    checks(&[("round trip", 1e-8), ("gauge independence", 1e-8), ("residue sum", 1e-12)], &m)
}

fn bending_suite(cfg: &VerifyConfig, ns: &[usize]) -> Vec<Check> {
    let m = run_instances(cfg, Suite::Bending, ns, 4, |rng, n| {
        let census = component_census(n).ok()?;
        let s = &census.components[sample_index(rng, census.count)];
        let x = sample::random_zs_point(rng, n, s).ok()?;
        let (p, _) = minkowski::block_to_polygon(&x, s, 1e-9).ok()?;
        let (p, _) = normalize_diagonal(&p).ok()?;
        let scale = p.scale();
        let t = bend_trajectory(&p, std::f64::consts::TAU, 1000, 1e-9).ok()?;
        let back = t.frames.last()?.max_abs_diff(&p) / scale;
        Some(vec![t.max_ell_drift / scale, t.max_closure_defect / scale, t.max_nullity_defect, back])
    });
    checks(
        &[("diagonal length", 1e-10), ("closure", 1e-10), ("nullity", 1e-10), ("full turn returns", 1e-10)],
        &m,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn census_report() {
        let r = run(Suite::Census, &VerifyConfig::default());
        assert!(r.passed, "{r:?}");
        assert_eq!(r.ns, (4..=12).collect::<Vec<_>>());
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = VerifyConfig { seed: 9, ns: Some(vec![5]), count: 4 };
        let a = run(Suite::Involution, &cfg);
        let b = run(Suite::Involution, &cfg);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.passed, "{a:?}");
    }
}
