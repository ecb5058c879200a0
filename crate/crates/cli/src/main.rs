use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use nullhyp::charts::{chart_normalize, chart_reconstruct};
use nullhyp::higgs::{from_hyperpolygon, higgs_eval, higgs_stable, to_hyperpolygon, HiggsData, MarkedPoints};
use nullhyp::involution::{classify_fixed, component_census};
use nullhyp::io::{from_json, to_json, Tagged};
use nullhyp::kempf_ness::{self, SolverOptions};
use nullhyp::minkowski::{self, bend_trajectory, normalize_diagonal, NullPolygon};
use nullhyp::moment::{in_p0n, is_stable, mu_complex, mu_real, HyperpolygonPoint};
use nullhyp::sample;
use nullhyp::verify::{self, Suite, VerifyConfig};
use nullhyp::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Null hyperpolygons, Higgs bundles and null polygons.
#[derive(Parser, Debug)]
#[command(name = "nullhyp", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = nullhyp::tol::DEFAULT_TOL)]
    tol: f64,
    /// Output file; standard output if absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Machine-readable output for commands that otherwise print text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample a stable point with vanishing complex moment map.
    Gen(GenArgs),
    /// Report moment maps and stability of a point.
    Check { input: PathBuf },
    /// Flow a stable point to the zero level of the real moment map.
    Solve {
        input: PathBuf,
        /// Also write the solver report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Use gradient steps instead of Newton steps.
        #[arg(long)]
        gradient: bool,
    },
    /// Convert a point to Higgs data at the n-th roots of unity or given points.
    ToHiggs {
        input: PathBuf,
        /// Marked points as "re,im;re,im;...".
        #[arg(long)]
        marked: Option<String>,
    },
    /// Convert Higgs data back to a point.
    FromHiggs { input: PathBuf },
    /// Evaluate the Higgs field at a point of the sphere.
    HiggsEval {
        input: PathBuf,
        /// Evaluation point as "re,im".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Chart coordinates of Higgs data.
    Chart {
        input: PathBuf,
        /// Pivot indices, 1-based, as "i,j".
        #[arg(long, default_value = "1,2")]
        sigma: String,
    },
    /// Higgs data from chart coordinates.
    Unchart { input: PathBuf },
    /// Decide whether a point is fixed by the involution.
    Involution { input: PathBuf },
    /// List the fixed components for a given n.
    Census {
        #[arg(long)]
        n: usize,
    },
    /// The null polygon of a fixed point.
    ToPolygon { input: PathBuf },
    /// The fixed point of a null polygon, with the past edges first.
    FromPolygon { input: PathBuf },
    /// Bending flow of a polygon, sampled for plotting.
    Bend {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Run a randomized verification suite.
    Verify {
        suite: String,
        /// Sizes as "a..b", "a..=b" or "a,b,c".
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Flow the sample into the zero level of the real moment map.
    #[arg(long)]
    p0n: bool,
    /// Sample a fixed point of the involution instead.
    #[arg(long)]
    fixed_point: bool,
    /// Component for --fixed-point, 1-based, as "1,2"; random if absent.
    #[arg(long)]
    component: Option<String>,
}

/// Usage and schema problems exit with 2, failed checks with 1.
enum Failure {
    Usage(anyhow::Error),
    Check(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Check(e)
    }
}

fn usage<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Usage(e.into())
}

fn read<T: Tagged>(path: &Path) -> Result<T, Failure> {
    let s = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(usage)?;
    from_json(&s).with_context(|| format!("{} is not a valid {} document", path.display(), T::TAG)).map_err(usage)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())).map_err(usage),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_doc<T: Tagged>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    emit(out, &to_json(value).map_err(usage)?)
}

fn parse_complex(s: &str) -> anyhow::Result<Complex64> {
    let (re, im) = s.split_once(',').ok_or_else(|| anyhow!("expected \"re,im\", got \"{s}\""))?;
    Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
}

fn parse_one_based(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(|t| match t.trim().parse::<usize>()? {
            0 => bail!("indices are 1-based"),
            i => Ok(i - 1),
        })
        .collect()
}

fn parse_sizes(s: &str) -> anyhow::Result<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..=") {
        return Ok((a.parse()?..=b.parse()?).collect());
    }
    if let Some((a, b)) = s.split_once("..") {
        return Ok((a.parse()?..b.parse()?).collect());
    }
    s.split(',').map(|t| Ok(t.trim().parse()?)).collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    let tol = cli.tol;
    let out = &cli.out;
    match cli.cmd {
        Command::Gen(g) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let x = if g.fixed_point {
                let census = component_census(g.n).map_err(usage)?;
                let s = match g.component {
                    Some(c) => parse_one_based(&c).map_err(usage)?,
                    None if census.count == 0 => {
                        return Err(usage(anyhow!("no fixed components for n = {} (empty census)", g.n)))
                    }
                    None => census.components[rand::Rng::random_range(&mut rng, 0..census.count)].clone(),
                };
                sample::random_zs_point(&mut rng, g.n, &s).map_err(usage)?
            } else if g.p0n {
                sample::random_p0n_point(&mut rng, g.n).map_err(usage)?
            } else {
                sample::random_stable_point(&mut rng, g.n).map_err(usage)?
            };
            emit_doc(out, &x)
        }
        Command::Check { input } => {
            let x: HyperpolygonPoint = read(&input)?;
            let (r, c) = (mu_real(&x).norm(), mu_complex(&x).norm());
            let (stable, p0n) = (is_stable(&x, tol), in_p0n(&x, tol));
            let text = if cli.json {
                serde_json::to_string_pretty(&json!({
                    "type": "check", "n": x.n(), "mu_real": r, "mu_complex": c, "stable": stable, "in_p0n": p0n
                }))
                .map_err(usage)?
                    + "\n"
            } else {
                format!("n = {}\n|mu_R| = {r:e}\n|mu_C| = {c:e}\nstable: {stable}\nin P0n: {p0n}\n", x.n())
            };
            emit(out, &text)?;
            if stable && c <= tol * x.scale().powi(2) {
                Ok(())
            } else {
                Err(Failure::Check(anyhow!("point is not a stable point of the complex zero level")))
            }
        }
        Command::Solve { input, report, gradient } => {
            let x: HyperpolygonPoint = read(&input)?;
            let direction =
                if gradient { kempf_ness::SearchDirection::Gradient } else { kempf_ness::SearchDirection::Newton };
            let opts = SolverOptions { tol, direction, ..SolverOptions::default() };
            let (y, rep) = kempf_ness::solve(&x, &opts).map_err(anyhow::Error::from)?;
            if let Some(p) = report {
                emit_doc(&Some(p), &rep)?;
            }
            emit_doc(out, &y)
        }
        Command::ToHiggs { input, marked } => {
            let x: HyperpolygonPoint = read(&input)?;
            let marked = match marked {
                Some(m) => {
                    let pts = m.split(';').map(parse_complex).collect::<anyhow::Result<Vec<_>>>().map_err(usage)?;
                    MarkedPoints::new(pts).map_err(usage)?
                }
                None => MarkedPoints::roots_of_unity(x.n()),
            };
            let h = from_hyperpolygon(&x, &marked, tol).map_err(anyhow::Error::from)?;
            emit_doc(out, &h)
        }
        Command::FromHiggs { input } => {
            let h: HiggsData = read(&input)?;
            if !higgs_stable(&h, tol) {
                return Err(Failure::Check(anyhow!("Higgs data is not stable")));
            }
            emit_doc(out, &to_hyperpolygon(&h).map_err(anyhow::Error::from)?)
        }
        Command::HiggsEval { input, z } => {
            let h: HiggsData = read(&input)?;
            let z = parse_complex(&z).map_err(usage)?;
            let m = higgs_eval(&h, z).map_err(anyhow::Error::from)?;
            let text = if cli.json {
                serde_json::to_string_pretty(&json!({ "type": "matrix", "z": z, "value": m })).map_err(usage)? + "\n"
            } else {
                m.0.iter().map(|row| format!("{} {}\n", row[0], row[1])).collect()
            };
            emit(out, &text)
        }
        Command::Chart { input, sigma } => {
            let h: HiggsData = read(&input)?;
            let s = parse_one_based(&sigma).map_err(usage)?;
            let [a, b] = s[..] else { return Err(usage(anyhow!("--sigma takes two indices"))) };
            let (c, _) = chart_normalize(&h, (a, b)).map_err(anyhow::Error::from)?;
            emit_doc(out, &c)
        }
        Command::Unchart { input } => {
            let c = read(&input)?;
            emit_doc(out, &chart_reconstruct(&c).map_err(anyhow::Error::from)?)
        }
        Command::Involution { input } => {
            let x: HyperpolygonPoint = read(&input)?;
            let c = classify_fixed(&x, tol).map_err(anyhow::Error::from)?;
            if cli.json || out.is_some() {
                emit_doc(out, &c)
            } else {
                match &c.witness {
                    Some(w) => {
                        let s: Vec<String> = w.s.iter().map(|i| (i + 1).to_string()).collect();
                        emit(out, &format!("fixed, S = {{{}}}\n", s.join(", ")))
                    }
                    None => emit(out, "not fixed\n"),
                }
            }
        }
        Command::Census { n } => {
            let c = component_census(n).map_err(usage)?;
            if c.count == 0 {
                eprintln!("warning: no fixed components for n = {n}");
            }
            emit_doc(out, &c)
        }
        Command::ToPolygon { input } => {
            let x: HyperpolygonPoint = read(&input)?;
            let (p, order) = minkowski::zs_to_polygon(&x, tol).map_err(anyhow::Error::from)?;
            if order.iter().enumerate().any(|(j, &i)| i != j) {
                let o: Vec<String> = order.iter().map(|i| (i + 1).to_string()).collect();
                eprintln!("note: edges are listed in index order {}", o.join(","));
            }
            emit_doc(out, &p)
        }
        Command::FromPolygon { input } => {
            let p: NullPolygon = read(&input)?;
            emit_doc(out, &minkowski::polygon_to_zs(&p).map_err(anyhow::Error::from)?)
        }
        Command::Bend { input, theta, steps } => {
            let p: NullPolygon = read(&input)?;
            let (p, _) = normalize_diagonal(&p).map_err(anyhow::Error::from)?;
            emit_doc(out, &bend_trajectory(&p, theta, steps, tol).map_err(anyhow::Error::from)?)
        }
        Command::Verify { suite, n, count } => {
            let suite: Suite = suite.parse().map_err(|e: String| usage(anyhow!(e)))?;
            let ns = n.map(|s| parse_sizes(&s)).transpose().map_err(usage)?;
            let report = verify::run(suite, &VerifyConfig { seed: cli.seed, ns, count });
            emit_doc(out, &report)?;
            match report.first_failure() {
                None => Ok(()),
                Some(c) => Err(Failure::Check(anyhow!(
                    "check \"{}\" failed: measured {:e}, threshold {:e}",
                    c.name,
                    c.measured,
                    c.threshold
                ))),
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
