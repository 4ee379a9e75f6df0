//! `so3geo`: sample, verify and analyze sub-Riemannian geodesics on SO(3)
//! and their almost-Riemannian projections to S².
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 when a numerical
//! invariant is breached.

mod output;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use output::{emit, indexed, nums, Format, Num, Tabular};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use so3geo::exp_map::{sample_elliptic, GeodesicSample};
use so3geo::pendulum::{covector_at, to_elliptic, Covector, EllipticData, Region, SRParams};
use so3geo::periodic::{enumerate_periodic, enumerate_periodic_in, lift_parity, solve_periodic, verify_closure, PeriodicSpec};
use so3geo::special_functions::Modulus;
use so3geo::sphere::{cut_bound_ar, cut_bound_sr, first_singular_return, singular_set, ARGeodesic, SpherePoint};
use so3geo::symmetry::first_maxwell_time_elliptic;
use so3geo::verifier::{integrate_quat_at, integrate_so3_at, IntegratorConfig};
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Orthogonality defect above which a closed-form rotation is rejected.
const ORTHOGONALITY_LIMIT: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "so3geo", version, about = "Closed-form geodesics on SO(3), S^3 and S^2")]
struct Cli {
    /// Deviation tolerance used by `verify` and the closure checks of `periodic`.
    #[arg(long, global = true, env = "SO3GEO_TOL", default_value_t = 1e-8)]
    tol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample the exponential map on a time grid.
    Exp {
        #[command(flatten)]
        geodesic: GeodesicArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Compare the closed form with RK4 integration.
    Verify {
        #[command(flatten)]
        geodesic: GeodesicArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// RK4 step.
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
        /// Verify this many random covectors instead of the given one.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate periodic geodesics.
    Periodic {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 5)]
        max_n: u32,
        #[arg(long, default_value_t = 5)]
        max_m: u32,
        /// Restrict to C1 or C2.
        #[arg(long)]
        region: Option<Region>,
        /// Solve the single fraction n/m (needs --m and --region).
        #[arg(long, requires_all = ["m", "region"])]
        n: Option<u32>,
        #[arg(long, requires = "n")]
        m: Option<u32>,
        /// Phase of the trajectory used for the closure check.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        theta0: f64,
    },
    /// First Maxwell time of a geodesic.
    Maxwell {
        #[command(flatten)]
        geodesic: GeodesicArgs,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
    },
    /// Project a geodesic to S² and report its cut data.
    Sphere {
        #[command(flatten)]
        geodesic: GeodesicArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Initial point x,y,z on the unit sphere.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        gamma0: Vec<f64>,
    },
}

/// The initial covector, explicitly or through its pendulum chart.
#[derive(Args, Debug)]
struct GeodesicArgs {
    /// Metric invariant a in (0, 1).
    #[arg(long)]
    a: f64,
    /// Initial covector p1,p2,p3 with p1^2 + p2^2 = 1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "region")]
    p0: Option<Vec<f64>>,
    /// Region C1..C5 of the pendulum chart.
    #[arg(long)]
    region: Option<Region>,
    /// Elliptic modulus (C1, C2).
    #[arg(long)]
    k: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    theta0: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    s1: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    s2: f64,
    /// Index of the equilibrium (C4, C5).
    #[arg(long = "eq", default_value_t = 0, allow_hyphen_values = true)]
    eq: i64,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Comma-separated sample times.
    #[arg(long, value_delimiter = ',', conflicts_with = "t_end")]
    t: Option<Vec<f64>>,
    /// End of a uniform grid starting at 0.
    #[arg(long)]
    t_end: Option<f64>,
    /// Number of intervals of the uniform grid.
    #[arg(long, default_value_t = 100)]
    steps: usize,
}

/// A numerical invariant failed; reported with exit code 3.
#[derive(Debug)]
struct Breach(String);

impl fmt::Display for Breach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant breached: {}", self.0)
    }
}

impl std::error::Error for Breach {}

impl GeodesicArgs {
    fn params(&self) -> anyhow::Result<SRParams> {
        Ok(SRParams::new(self.a)?)
    }

    fn chart(&self, params: &SRParams) -> anyhow::Result<EllipticData> {
        match (&self.p0, self.region) {
            (Some(p), None) => {
                let [p1, p2, p3] = <[f64; 3]>::try_from(p.as_slice())
                    .map_err(|_| anyhow!("--p0 needs three components"))?;
                Ok(to_elliptic(&Covector::new(p1, p2, p3)?, params)?)
            }
            (None, Some(region @ (Region::C4 | Region::C5))) => Ok(EllipticData::equilibrium(region, self.eq)?),
            (None, Some(region)) => {
                let k = match region {
                    Region::C1 | Region::C2 => {
                        Modulus::new(self.k.ok_or_else(|| anyhow!("--k is required in {region}"))?)?
                    }
                    _ => Modulus::ZERO,
                };
                Ok(EllipticData::new(region, k, self.theta0, self.s1, self.s2)?)
            }
            _ => bail!("give either --p0 or --region"),
        }
    }
}

impl GridArgs {
    fn times(&self) -> anyhow::Result<Vec<f64>> {
        let times = match (&self.t, self.t_end) {
            (Some(t), _) => t.clone(),
            (None, Some(end)) => {
                if !(end >= 0.0) || self.steps == 0 {
                    bail!("--t-end must be non-negative and --steps positive");
                }
                (0..=self.steps).map(|i| end * i as f64 / self.steps as f64).collect()
            }
            (None, None) => bail!("give --t or --t-end"),
        };
        if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            bail!("times must be finite and non-negative");
        }
        if times.windows(2).any(|w| w[1] < w[0]) {
            bail!("times must be non-decreasing");
        }
        Ok(times)
    }
}

#[derive(Serialize)]
struct Meta {
    a: Num,
    region: Region,
    k: Num,
    theta0: Num,
    signs: [Num; 2],
}

impl Meta {
    fn new(params: &SRParams, ed: &EllipticData) -> Self {
        Self {
            a: Num(params.a()),
            region: ed.region,
            k: Num(ed.k.k()),
            theta0: Num(ed.theta0),
            signs: nums([ed.s1, ed.s2]),
        }
    }
}

#[derive(Serialize)]
struct Sample {
    t: Num,
    #[serde(rename = "R")]
    r: [Num; 9],
    q: [Num; 4],
    p: [Num; 3],
    phi3: Num,
}

impl From<&GeodesicSample> for Sample {
    fn from(s: &GeodesicSample) -> Self {
        Self {
            t: Num(s.t),
            r: nums(s.r.to_array()),
            q: nums(s.q.to_array()),
            p: nums(s.p.to_array()),
            phi3: Num(s.phi.phi3),
        }
    }
}

#[derive(Serialize)]
struct ExpOutput {
    meta: Meta,
    samples: Vec<Sample>,
}

fn matrix_header() -> impl Iterator<Item = String> {
    (1..=3).flat_map(|i| (1..=3).map(move |j| format!("R{i}{j}")))
}

impl Tabular for ExpOutput {
    fn header(&self) -> Vec<String> {
        std::iter::once("t".to_string())
            .chain(matrix_header())
            .chain(indexed("q", 4))
            .chain(["p1", "p2", "p3", "phi3"].map(String::from))
            .collect()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.samples
            .iter()
            .map(|s| {
                std::iter::once(&s.t)
                    .chain(&s.r)
                    .chain(&s.q)
                    .chain(&s.p)
                    .chain([&s.phi3])
                    .map(Num::text)
                    .collect()
            })
            .collect()
    }
}

fn cmd_exp(geodesic: &GeodesicArgs, grid: &GridArgs) -> anyhow::Result<ExpOutput> {
    let params = geodesic.params()?;
    let ed = geodesic.chart(&params)?;
    let samples = sample_elliptic(&ed, &params, &grid.times()?)?;
    for s in &samples {
        let defect = s.r.orthogonality_defect();
        if defect > ORTHOGONALITY_LIMIT {
            return Err(Breach(format!("rotation at t = {} is off SO(3) by {defect:e}", s.t)).into());
        }
    }
    Ok(ExpOutput {
        meta: Meta::new(&params, &ed),
        samples: samples.iter().map(Sample::from).collect(),
    })
}

#[derive(Serialize)]
struct Deviation {
    t: Num,
    rotation: Num,
    quaternion: Num,
    covector: Num,
}

#[derive(Serialize)]
struct VerifyDraw {
    meta: Meta,
    samples: Vec<Deviation>,
    max_deviation: Num,
}

#[derive(Serialize)]
struct VerifyReport {
    step: Num,
    tol: Num,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    draws: Vec<VerifyDraw>,
    max_deviation: Num,
    pass: bool,
}

impl Tabular for VerifyReport {
    fn header(&self) -> Vec<String> {
        ["draw", "region", "t", "rotation", "quaternion", "covector"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for (i, d) in self.draws.iter().enumerate() {
            for s in &d.samples {
                rows.push(vec![
                    i.to_string(),
                    d.meta.region.to_string(),
                    s.t.text(),
                    s.rotation.text(),
                    s.quaternion.text(),
                    s.covector.text(),
                ]);
            }
        }
        rows
    }
}

fn verify_one(ed: &EllipticData, params: &SRParams, times: &[f64], cfg: &IntegratorConfig) -> anyhow::Result<VerifyDraw> {
    let p0 = covector_at(ed, params, 0.0);
    let closed = sample_elliptic(ed, params, times)?;
    let so3 = integrate_so3_at(&p0, params, times, cfg)?;
    let quat = integrate_quat_at(&p0, params, times, cfg)?;
    let mut worst = 0.0f64;
    let samples = closed
        .iter()
        .zip(so3.iter().zip(&quat))
        .map(|(c, (r, q))| {
            let dev = [c.r.max_abs_diff(&r.r), c.q.max_abs_diff(&q.q), c.p.max_abs_diff(&r.p)];
            worst = dev.iter().fold(worst, |acc, x| acc.max(*x));
            Deviation {
                t: Num(c.t),
                rotation: Num(dev[0]),
                quaternion: Num(dev[1]),
                covector: Num(dev[2]),
            }
        })
        .collect();
    Ok(VerifyDraw {
        meta: Meta::new(params, ed),
        samples,
        max_deviation: Num(worst),
    })
}

fn cmd_verify(
    geodesic: &GeodesicArgs,
    grid: &GridArgs,
    step: f64,
    random: Option<usize>,
    seed: u64,
    tol: f64,
) -> anyhow::Result<VerifyReport> {
    let params = geodesic.params()?;
    let times = grid.times()?;
    let cfg = IntegratorConfig::with_step(step);
    let charts = match random {
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count)
                .map(|_| {
                    let p = Covector::from_psi(rng.gen_range(0.0..std::f64::consts::TAU), rng.gen_range(-1.5..1.5));
                    to_elliptic(&p, &params)
                })
                .collect::<Result<Vec<_>, _>>()?
        }
        None => vec![geodesic.chart(&params)?],
    };
    let draws = charts
        .iter()
        .map(|ed| verify_one(ed, &params, &times, &cfg))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let worst = draws.iter().fold(0.0f64, |acc, d| acc.max(d.max_deviation.0));
    Ok(VerifyReport {
        step: Num(step),
        tol: Num(tol),
        seed: random.map(|_| seed),
        draws,
        max_deviation: Num(worst),
        pass: worst <= tol,
    })
}

#[derive(Serialize)]
struct PeriodicRow {
    n: u32,
    m: u32,
    region: Region,
    k: Num,
    period: Num,
    total_time: Num,
    residual: Num,
    contractible: bool,
    closure_error: Num,
    lift_sign: i8,
}

#[derive(Serialize)]
struct PeriodicTable {
    a: Num,
    rows: Vec<PeriodicRow>,
}

impl Tabular for PeriodicTable {
    fn header(&self) -> Vec<String> {
        [
            "n", "m", "region", "k", "period", "total_time", "residual", "contractible", "closure_error", "lift_sign",
        ]
        .map(String::from)
        .to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.m.to_string(),
                    r.region.to_string(),
                    r.k.text(),
                    r.period.text(),
                    r.total_time.text(),
                    r.residual.text(),
                    r.contractible.to_string(),
                    r.closure_error.text(),
                    r.lift_sign.to_string(),
                ]
            })
            .collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_periodic(
    a: f64,
    max_n: u32,
    max_m: u32,
    region: Option<Region>,
    fraction: Option<(u32, u32)>,
    theta0: f64,
    tol: f64,
) -> anyhow::Result<PeriodicTable> {
    let params = SRParams::new(a)?;
    let solved = match (fraction, region) {
        (Some((n, m)), Some(region)) => solve_periodic(&PeriodicSpec::new(n, m, region)?, a)?.into_iter().collect(),
        (Some(_), None) => bail!("--n needs --region"),
        (None, Some(region)) => enumerate_periodic_in(region, a, max_n, max_m)?,
        (None, None) => enumerate_periodic(a, max_n, max_m)?,
    };
    let mut rows = Vec::with_capacity(solved.len());
    for pg in solved {
        let ed = pg.elliptic_data(theta0, 1.0, 1.0)?;
        let closure = verify_closure(&pg, &ed, &params)?;
        let label = format!("{} {}/{}", pg.spec.region, pg.spec.n, pg.spec.m);
        if closure.closure_error > tol {
            return Err(Breach(format!("{label} does not close: {:e}", closure.closure_error)).into());
        }
        if closure.lift_sign != lift_parity(&pg.spec) {
            return Err(Breach(format!("{label}: lift ends at {} against the parity rule", closure.lift_sign)).into());
        }
        rows.push(PeriodicRow {
            n: pg.spec.n,
            m: pg.spec.m,
            region: pg.spec.region,
            k: Num(pg.k.k()),
            period: Num(pg.period),
            total_time: Num(pg.total_time),
            residual: Num(pg.residual),
            contractible: pg.contractible,
            closure_error: Num(closure.closure_error),
            lift_sign: closure.lift_sign,
        });
    }
    Ok(PeriodicTable { a: Num(a), rows })
}

#[derive(Serialize)]
struct MaxwellHit {
    t: Num,
    condition: String,
    partner: String,
}

#[derive(Serialize)]
struct MaxwellOutput {
    meta: Meta,
    t_max: Num,
    maxwell: Option<MaxwellHit>,
}

impl Tabular for MaxwellOutput {
    fn header(&self) -> Vec<String> {
        ["t", "condition", "partner"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.maxwell
            .iter()
            .map(|h| vec![h.t.text(), h.condition.clone(), h.partner.clone()])
            .collect()
    }
}

fn cmd_maxwell(geodesic: &GeodesicArgs, t_max: f64) -> anyhow::Result<MaxwellOutput> {
    let params = geodesic.params()?;
    let ed = geodesic.chart(&params)?;
    let hit = first_maxwell_time_elliptic(&ed, &params, t_max)?;
    Ok(MaxwellOutput {
        meta: Meta::new(&params, &ed),
        t_max: Num(t_max),
        maxwell: hit.map(|(t, c)| MaxwellHit {
            t: Num(t),
            condition: c.to_string(),
            partner: c.partner().to_string(),
        }),
    })
}

#[derive(Serialize)]
struct SphereSample {
    t: Num,
    gamma: [Num; 3],
    p: [Num; 3],
}

#[derive(Serialize)]
struct CutData {
    singular_return: Option<Num>,
    cut_bound_ar: Num,
    cut_bound_sr: Num,
}

#[derive(Serialize)]
struct SphereOutput {
    meta: Meta,
    gamma0: [Num; 3],
    samples: Vec<SphereSample>,
    cut: CutData,
}

impl Tabular for SphereOutput {
    fn header(&self) -> Vec<String> {
        ["t", "x", "y", "z", "p1", "p2", "p3", "singular_return", "cut_bound_ar", "cut_bound_sr"]
            .map(String::from)
            .to_vec()
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let ret = self.cut.singular_return.map(|n| n.text()).unwrap_or_default();
        self.samples
            .iter()
            .map(|s| {
                std::iter::once(s.t.text())
                    .chain(s.gamma.iter().map(Num::text))
                    .chain(s.p.iter().map(Num::text))
                    .chain([ret.clone(), self.cut.cut_bound_ar.text(), self.cut.cut_bound_sr.text()])
                    .collect()
            })
            .collect()
    }
}

fn cmd_sphere(geodesic: &GeodesicArgs, grid: &GridArgs, gamma0: &[f64]) -> anyhow::Result<SphereOutput> {
    let params = geodesic.params()?;
    let ed = geodesic.chart(&params)?;
    let [x, y, z] = <[f64; 3]>::try_from(gamma0).map_err(|_| anyhow!("--gamma0 needs three components"))?;
    let g0 = SpherePoint::new(x, y, z)?;
    let ar = ARGeodesic::new(g0, covector_at(&ed, &params, 0.0), &params)?;
    let samples = grid
        .times()?
        .into_iter()
        .map(|t| {
            let g = ar.point_at(&params, t)?;
            Ok(SphereSample {
                t: Num(t),
                gamma: nums([g.x, g.y, g.z]),
                p: nums(covector_at(&ed, &params, t).to_array()),
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let singular_return = if singular_set(&g0) {
        Some(Num(first_singular_return(&ar, &params)?))
    } else {
        None
    };
    Ok(SphereOutput {
        meta: Meta::new(&params, &ed),
        gamma0: nums([x, y, z]),
        samples,
        cut: CutData {
            singular_return,
            cut_bound_ar: Num(cut_bound_ar(&ed, &params)),
            cut_bound_sr: Num(cut_bound_sr(&ed, &params)),
        },
    })
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    if !(cli.tol > 0.0) {
        bail!("tolerance must be positive, got {}", cli.tol);
    }
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let out = out.as_mut();
    match &cli.command {
        Command::Exp { geodesic, grid } => emit(out, cli.format, &cmd_exp(geodesic, grid)?),
        Command::Verify {
            geodesic,
            grid,
            step,
            random,
            seed,
        } => {
            let report = cmd_verify(geodesic, grid, *step, *random, *seed, cli.tol)?;
            emit(out, cli.format, &report)?;
            if !report.pass {
                return Err(Breach(format!(
                    "closed form deviates from RK4 by {:e} > {:e}",
                    report.max_deviation.0, cli.tol
                ))
                .into());
            }
            Ok(())
        }
        Command::Periodic {
            a,
            max_n,
            max_m,
            region,
            n,
            m,
            theta0,
        } => {
            let fraction = n.zip(*m);
            let table = cmd_periodic(*a, *max_n, *max_m, *region, fraction, *theta0, cli.tol)?;
            emit(out, cli.format, &table)
        }
        Command::Maxwell { geodesic, t_max } => emit(out, cli.format, &cmd_maxwell(geodesic, *t_max)?),
        Command::Sphere { geodesic, grid, gamma0 } => emit(out, cli.format, &cmd_sphere(geodesic, grid, gamma0)?),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let breach = err.chain().any(|e| {
        e.is::<Breach>() || matches!(e.downcast_ref::<so3geo::Error>(), Some(so3geo::Error::InvariantViolation(_)))
    });
    if breach {
        3
    } else {
        2
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    use std::io::ErrorKind::BrokenPipe;
    err.chain().any(|e| {
        e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == BrokenPipe)
            || e.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()) == Some(BrokenPipe)
            || e.downcast_ref::<csv::Error>().is_some_and(|c| matches!(c.kind(), csv::ErrorKind::Io(io) if io.kind() == BrokenPipe))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        // the reader went away, e.g. `so3geo exp ... | head`
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
