//! Command implementations behind the `phasedamp` binary.
//!
//! Each command reads its inputs, writes CSV or JSON and returns an
//! [`Outcome`]. Validation problems come back as [`Error`]; a run that
//! completes but fails its own cross-checks returns [`Outcome::Failed`].

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{robust_scan, robust_state, BoundCurve};
use crate::channels::{
    apply_channel, damping_matrix, noise_probabilities, single_sided_channel,
    two_qubit_dephasing_channel, GaussianFieldSpec, NoiseProbs, PhaseDampingChannel,
};
use crate::error::{Error, Result};
use crate::measures::{
    concurrence_general_noise, concurrence_separable_analytic, concurrence_wootters, purity,
    purity_analytic, two_qubit_dephasing_law, TwoQubitState,
};
use crate::montecarlo::{channel_estimate, ensemble_average, MCConfig};
use crate::qmath::C64;
use crate::states::{
    make_general_pure, make_separable, z_expectations, PureStateParams, SeparableParams,
    StateVector4,
};
use crate::tolerances;

/// Result of a command that ran to completion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    /// Output was written but a cross-check failed; one message per failure.
    Failed(Vec<String>),
}

impl Outcome {
    fn from_failures(failures: Vec<String>) -> Self {
        if failures.is_empty() {
            Outcome::Passed
        } else {
            Outcome::Failed(failures)
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Passed) => EXIT_OK,
        Ok(Outcome::Failed(_)) => EXIT_VERIFY_FAILED,
        Err(_) => EXIT_INVALID,
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Evenly spaced grid `start..=stop` with `count ≥ 2` points.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(Error::Config(format!(
                "grid bounds must be finite, got {start}:{stop}"
            )));
        }
        if count < 2 {
            return Err(Error::Config(format!(
                "grid count must be at least 2, got {count}"
            )));
        }
        Ok(Self { start, stop, count })
    }

    /// Parses `START:STOP:COUNT`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let bad = || Error::Config(format!("grid '{s}' is not START:STOP:COUNT"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].parse().map_err(|_| bad())?;
        let stop = parts[1].parse().map_err(|_| bad())?;
        let count = parts[2].parse().map_err(|_| bad())?;
        Self::new(start, stop, count)
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Polynomial in the sweep parameter, lowest order first.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(transparent)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }
}

/// A complex amplitude written either as a number or as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Amplitude> for C64 {
    fn from(a: Amplitude) -> Self {
        match a {
            Amplitude::Real(re) => C64::new(re, 0.0),
            Amplitude::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum StateSection {
    General {
        a: f64,
        #[serde(default)]
        chi: f64,
        #[serde(default)]
        theta1: f64,
        #[serde(default)]
        theta2: f64,
    },
    Separable {
        alpha1: Amplitude,
        beta1: Amplitude,
        alpha2: Amplitude,
        beta2: Amplitude,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeanSection {
    #[serde(default)]
    mu1: Poly,
    #[serde(default)]
    mu2: Poly,
    #[serde(default)]
    mu3: Poly,
}

/// Covariance entries `s_kl`; `varsigma_sq_k` adds `2 ς_k²` to `Σ_kk`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CovarianceSection {
    #[serde(default)]
    s11: Poly,
    #[serde(default)]
    s22: Poly,
    #[serde(default)]
    s33: Poly,
    #[serde(default)]
    s12: Poly,
    #[serde(default)]
    s13: Poly,
    #[serde(default)]
    s23: Poly,
    #[serde(default)]
    varsigma_sq1: Poly,
    #[serde(default)]
    varsigma_sq2: Poly,
    #[serde(default)]
    varsigma_sq3: Poly,
}

impl CovarianceSection {
    fn is_zero(&self) -> bool {
        [
            &self.s11,
            &self.s22,
            &self.s33,
            &self.s12,
            &self.s13,
            &self.s23,
            &self.varsigma_sq1,
            &self.varsigma_sq2,
            &self.varsigma_sq3,
        ]
        .iter()
        .all(|p| p.is_zero())
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FamilySection {
    Gaussian,
    SingleSided { q: Poly },
    TwoQubitDephasing { q: Poly },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct McSection {
    #[serde(default)]
    verify: bool,
    #[serde(default = "default_samples")]
    samples: usize,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    antithetic: bool,
}

fn default_samples() -> usize {
    100_000
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    state: StateSection,
    family: Option<FamilySection>,
    #[serde(default)]
    mean: MeanSection,
    #[serde(default)]
    covariance: CovarianceSection,
    grid: Grid,
    mc: Option<McSection>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialState {
    General(PureStateParams),
    Separable(SeparableParams),
}

impl InitialState {
    pub fn vector(&self) -> StateVector4 {
        match self {
            InitialState::General(p) => make_general_pure(p),
            InitialState::Separable(p) => make_separable(p),
        }
    }
}

/// One-parameter channel family swept over `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Gaussian {
        mean: [Poly; 3],
        cov: Box<[[Poly; 3]; 3]>,
    },
    SingleSided(Poly),
    TwoQubitDephasing(Poly),
}

/// The channel at one grid point, with its noise probabilities when they exist.
struct ChannelAt {
    channel: PhaseDampingChannel,
    probs: Option<NoiseProbs>,
    spec: Option<GaussianFieldSpec>,
    mu3: f64,
}

impl Family {
    fn at(&self, t: f64) -> Result<ChannelAt> {
        let with_t = |e: Error| Error::Config(format!("at t = {t}: {e}"));
        match self {
            Family::Gaussian { mean, cov } => {
                let mu = std::array::from_fn(|k| mean[k].eval(t));
                let sigma = std::array::from_fn(|i| std::array::from_fn(|j| cov[i][j].eval(t)));
                let spec = GaussianFieldSpec::new(mu, sigma).map_err(with_t)?;
                let probs = noise_probabilities(&spec).ok();
                Ok(ChannelAt {
                    channel: damping_matrix(&spec),
                    probs,
                    spec: Some(spec),
                    mu3: mu[2],
                })
            }
            Family::SingleSided(q) | Family::TwoQubitDephasing(q) => {
                let q = q.eval(t);
                let (channel, probs) = if matches!(self, Family::SingleSided(_)) {
                    single_sided_channel(q)
                } else {
                    two_qubit_dephasing_channel(q)
                }
                .map_err(with_t)?;
                Ok(ChannelAt {
                    channel,
                    probs: Some(probs),
                    spec: None,
                    mu3: 0.0,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub state: InitialState,
    pub family: Family,
    pub grid: Grid,
    pub mc: Option<MCConfig>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: SweepFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let field = |name: &'static str| move |e: Error| Error::Config(format!("{name}: {e}"));

        let state = match file.state {
            StateSection::General {
                a,
                chi,
                theta1,
                theta2,
            } => InitialState::General(
                PureStateParams::new(a, chi, theta1, theta2).map_err(field("state"))?,
            ),
            StateSection::Separable {
                alpha1,
                beta1,
                alpha2,
                beta2,
            } => InitialState::Separable(
                SeparableParams::new(alpha1.into(), beta1.into(), alpha2.into(), beta2.into())
                    .map_err(field("state"))?,
            ),
        };

        let gaussian_given = !(file.mean.mu1.is_zero()
            && file.mean.mu2.is_zero()
            && file.mean.mu3.is_zero()
            && file.covariance.is_zero());
        let family = match file.family.unwrap_or(FamilySection::Gaussian) {
            FamilySection::Gaussian => {
                let c = file.covariance;
                let diag = |s: Poly, v: Poly| add_poly(&s, &scale_poly(&v, 2.0));
                let s11 = diag(c.s11, c.varsigma_sq1);
                let s22 = diag(c.s22, c.varsigma_sq2);
                let s33 = diag(c.s33, c.varsigma_sq3);
                Family::Gaussian {
                    mean: [file.mean.mu1, file.mean.mu2, file.mean.mu3],
                    cov: Box::new([
                        [s11, c.s12.clone(), c.s13.clone()],
                        [c.s12, s22, c.s23.clone()],
                        [c.s13, c.s23, s33],
                    ]),
                }
            }
            other if gaussian_given => {
                let name = match other {
                    FamilySection::SingleSided { .. } => "single_sided",
                    _ => "two_qubit_dephasing",
                };
                return Err(Error::Config(format!(
                    "mean/covariance: not allowed with family.kind = {name}"
                )));
            }
            FamilySection::SingleSided { q } => Family::SingleSided(q),
            FamilySection::TwoQubitDephasing { q } => Family::TwoQubitDephasing(q),
        };

        let grid =
            Grid::new(file.grid.start, file.grid.stop, file.grid.count).map_err(field("grid"))?;

        let mc = match file.mc {
            Some(m) if m.verify => {
                if !matches!(family, Family::Gaussian { .. }) {
                    return Err(Error::Config(
                        "mc.verify: requires the gaussian family".into(),
                    ));
                }
                Some(
                    MCConfig::new(m.samples, m.seed)
                        .map_err(field("mc.samples"))?
                        .with_antithetic(m.antithetic),
                )
            }
            _ => None,
        };

        let cfg = Self {
            state,
            family,
            grid,
            mc,
        };
        for t in cfg.grid.points() {
            cfg.family.at(t)?;
        }
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

fn add_poly(a: &Poly, b: &Poly) -> Poly {
    let n = a.0.len().max(b.0.len());
    Poly(
        (0..n)
            .map(|i| a.0.get(i).unwrap_or(&0.0) + b.0.get(i).unwrap_or(&0.0))
            .collect(),
    )
}

fn scale_poly(a: &Poly, k: f64) -> Poly {
    Poly(a.0.iter().map(|c| c * k).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub c: f64,
    pub p: f64,
    pub c_analytic: Option<f64>,
    pub p_analytic: Option<f64>,
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CPTrajectory {
    pub rows: Vec<TrajectoryRow>,
}

impl CPTrajectory {
    pub fn min_purity(&self) -> f64 {
        self.rows.iter().map(|r| r.p).fold(f64::INFINITY, f64::min)
    }

    pub fn final_concurrence(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.c)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["t", "C", "P", "C_analytic", "P_analytic", "stderr"])?;
        for r in &self.rows {
            out.write_record([
                fmt_f64(r.t),
                fmt_f64(r.c),
                fmt_f64(r.p),
                fmt_opt(r.c_analytic),
                fmt_opt(r.p_analytic),
                fmt_opt(r.stderr),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Sweeps the configured family and checks every closed form that applies.
pub fn run_trajectory(cfg: &SweepConfig) -> Result<(CPTrajectory, Vec<String>)> {
    let psi = cfg.state.vector();
    let rho0 = TwoQubitState::pure(&psi);
    let z = z_expectations(&psi);

    let results: Vec<Result<(TrajectoryRow, Vec<String>)>> = cfg
        .grid
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| {
            let at = cfg.family.at(t)?;
            let rho = apply_channel(&at.channel, &rho0);
            let c = concurrence_wootters(&rho)?;
            let p = purity(&rho);

            let p_analytic = at.probs.as_ref().map(|pr| purity_analytic(pr, &z));
            let c_analytic = at.probs.as_ref().and_then(|pr| match cfg.state {
                InitialState::Separable(sep) => Some(concurrence_separable_analytic(&sep, pr, at.mu3)),
                // a local mean unitary leaves the noise-only law intact
                InitialState::General(_) if at.mu3.sin().abs() <= tolerances::STRUCTURAL => {
                    Some(concurrence_general_noise(&psi, pr))
                }
                InitialState::General(_) => None,
            });

            let mut failures = Vec::new();
            for (name, num, an) in [("C", c, c_analytic), ("P", p, p_analytic)] {
                if let Some(an) = an {
                    if (num - an).abs() > tolerances::ORACLE {
                        failures.push(format!("t = {t}: {name} numeric {num} vs analytic {an}"));
                    }
                }
            }

            let stderr = match (&cfg.mc, &at.spec) {
                (Some(mc), Some(spec)) => {
                    let mc = MCConfig {
                        seed: mc.seed.wrapping_add(i as u64),
                        ..*mc
                    };
                    let est = ensemble_average(spec, &rho0, &mc)?;
                    for m in 0..4 {
                        for n in 0..4 {
                            let dev = (est.rho[(m, n)] - rho.matrix()[(m, n)]).norm();
                            let tol = tolerances::MC_SIGMAS * est.entry_stderr[m][n] + tolerances::MC_ABS_FLOOR;
                            if dev > tol {
                                failures.push(format!(
                                    "t = {t}: Monte Carlo entry ({}, {}) deviates by {dev:e} > {tol:e}",
                                    m + 1,
                                    n + 1
                                ));
                            }
                        }
                    }
                    Some(est.stderr)
                }
                _ => None,
            };

            Ok((
                TrajectoryRow {
                    t,
                    c,
                    p,
                    c_analytic,
                    p_analytic,
                    stderr,
                },
                failures,
            ))
        })
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        let (row, f) = r?;
        rows.push(row);
        failures.extend(f);
    }
    Ok((CPTrajectory { rows }, failures))
}

pub fn cmd_trajectory(config: &Path, out: Option<&Path>) -> Result<Outcome> {
    let cfg = SweepConfig::from_path(config)?;
    let (traj, failures) = run_trajectory(&cfg)?;
    traj.write_csv(open_output(out)?)?;
    if out.is_some() {
        println!("rows = {}", traj.rows.len());
        println!("min_purity = {}", fmt_f64(traj.min_purity()));
        println!("final_concurrence = {}", fmt_f64(traj.final_concurrence()));
    }
    Ok(Outcome::from_failures(failures))
}

/// Parses a comma-separated list of curve names.
///
/// Accepted: `C2`, `C3`, `C4`, `Werner`, `Dephasing`, `Pure2QSep(zA,zB)`,
/// `Surface(z)` and `Surface(start:stop:count)`. Colon forms such as
/// `pure2qsep:0.3:0.5` and `surface:0:0.9:10` are also accepted.
pub fn parse_kinds(list: &str) -> Result<Vec<BoundCurve>> {
    let mut out = Vec::new();
    for token in split_top_level(list) {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let (name, args) = match token.find(['(', ':']) {
            Some(i) if token.as_bytes()[i] == b'(' => {
                let inner = token[i + 1..].strip_suffix(')').ok_or_else(|| {
                    Error::Config(format!("unbalanced parentheses in kind '{token}'"))
                })?;
                (
                    &token[..i],
                    inner
                        .split([',', ';', ':'])
                        .map(str::trim)
                        .collect::<Vec<_>>(),
                )
            }
            Some(i) => (
                &token[..i],
                token[i + 1..].split(':').map(str::trim).collect(),
            ),
            None => (token, Vec::new()),
        };
        let nums = args
            .iter()
            .map(|a| {
                a.parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad number '{a}' in kind '{token}'")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let arity = |n: usize| {
            if nums.len() == n {
                Ok(())
            } else {
                Err(Error::Config(format!(
                    "kind '{token}' takes {n} argument(s)"
                )))
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "c2" | "c3" | "c4" => {
                arity(0)?;
                out.push(BoundCurve::Cm(u32::from(name.as_bytes()[1] - b'0')));
            }
            "werner" => {
                arity(0)?;
                out.push(BoundCurve::Werner);
            }
            "dephasing" => {
                arity(0)?;
                out.push(BoundCurve::Dephasing);
            }
            "pure2qsep" => {
                arity(2)?;
                out.push(BoundCurve::Pure2QSeparable {
                    za: nums[0],
                    zb: nums[1],
                });
            }
            "surface" => match nums.len() {
                1 => out.push(BoundCurve::Surface { z: nums[0] }),
                3 => {
                    let count = nums[2];
                    if count.fract() != 0.0 || count < 0.0 {
                        return Err(Error::Config(format!(
                            "kind '{token}': count must be an integer"
                        )));
                    }
                    let g = Grid::new(nums[0], nums[1], count as usize)?;
                    out.extend(g.points().into_iter().map(|z| BoundCurve::Surface { z }));
                }
                _ => {
                    return Err(Error::Config(format!(
                        "kind '{token}' takes z or start:stop:count"
                    )))
                }
            },
            _ => return Err(Error::Config(format!("unknown kind '{name}'"))),
        }
    }
    if out.is_empty() {
        return Err(Error::Config("no curve kinds given".into()));
    }
    for c in &out {
        c.validate()
            .map_err(|e| Error::Config(format!("kind {c}: {e}")))?;
    }
    Ok(out)
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Header and rows of a bound-curve table. Cells below a curve's `P_min`
/// are `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundTable {
    pub curves: Vec<BoundCurve>,
    pub rows: Vec<(f64, Vec<Option<f64>>)>,
}

pub fn bound_table(curves: &[BoundCurve], grid: &Grid) -> Result<BoundTable> {
    let pts = grid.points();
    let (lo, hi) = (grid.start.min(grid.stop), grid.start.max(grid.stop));
    if lo < 0.25 || hi > 1.0 {
        return Err(Error::Config(format!(
            "--grid: purity must lie in [0.25, 1], got {lo}..{hi}"
        )));
    }
    let mut ps: Vec<f64> = pts;
    ps.extend(
        curves
            .iter()
            .map(|c| c.p_min())
            .filter(|p| (lo..=hi).contains(p)),
    );
    ps.sort_by(f64::total_cmp);
    ps.dedup();

    let rows = ps
        .into_iter()
        .map(|p| {
            let cells = curves
                .iter()
                .map(|c| {
                    if p >= c.p_min() {
                        c.value(p).ok()
                    } else {
                        None
                    }
                })
                .collect();
            (p, cells)
        })
        .collect();
    Ok(BoundTable {
        curves: curves.to_vec(),
        rows,
    })
}

impl BoundTable {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["P".to_string()];
        header.extend(self.curves.iter().map(|c| c.to_string()));
        out.write_record(&header)?;
        for (p, cells) in &self.rows {
            let mut rec = vec![fmt_f64(*p)];
            rec.extend(cells.iter().map(|c| fmt_opt(*c)));
            out.write_record(&rec)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn cmd_bounds(kinds: &str, grid: &str, out: Option<&Path>) -> Result<Outcome> {
    let curves = parse_kinds(kinds)?;
    let grid = Grid::parse(grid)?;
    let table = bound_table(&curves, &grid)?;
    table.write_csv(open_output(out)?)?;
    Ok(Outcome::Passed)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RobustRow {
    pub c0: f64,
    pub q: f64,
    pub c: f64,
    pub p: f64,
    pub c_numeric: f64,
    pub p_numeric: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustReport {
    pub theta1: f64,
    pub theta2: f64,
    pub threshold: f64,
    pub sign_changes: usize,
    pub rows: Vec<RobustRow>,
}

pub fn run_robust(
    theta1: f64,
    theta2: f64,
    q_grid: &Grid,
    c0s: &[f64],
) -> Result<(RobustReport, Vec<String>)> {
    if !(theta1.is_finite() && theta2.is_finite()) {
        return Err(Error::Config(format!(
            "angles must be finite, got {theta1}, {theta2}"
        )));
    }
    let scan = robust_scan(theta1, theta2);
    let qs = q_grid.points();
    if let Some(q) = qs.iter().find(|q| !(0.0..=1.0).contains(*q)) {
        return Err(Error::Config(format!("--grid: q = {q} is outside [0, 1]")));
    }

    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &c0 in c0s {
        let psi =
            robust_state(c0, theta1, theta2).map_err(|e| Error::Config(format!("--c0: {e}")))?;
        let rho0 = TwoQubitState::pure(&psi);
        let part: Vec<Result<RobustRow>> = qs
            .par_iter()
            .map(|&q| {
                let law = two_qubit_dephasing_law(&psi, q)?;
                let (ch, _) = two_qubit_dephasing_channel(q)?;
                let rho = apply_channel(&ch, &rho0);
                Ok(RobustRow {
                    c0,
                    q,
                    c: law.c,
                    p: law.p,
                    c_numeric: concurrence_wootters(&rho)?,
                    p_numeric: purity(&rho),
                })
            })
            .collect();
        for r in part {
            let r = r?;
            if (r.c - r.c_numeric).abs() > tolerances::ORACLE
                || (r.p - r.p_numeric).abs() > tolerances::ORACLE
            {
                failures.push(format!(
                    "c0 = {c0}, q = {}: law ({}, {}) vs numeric ({}, {})",
                    r.q, r.c, r.p, r.c_numeric, r.p_numeric
                ));
            }
            rows.push(r);
        }
    }
    if scan.sign_changes > 1 {
        failures.push(format!(
            "robustness margin changes sign {} times; threshold is not a single crossing",
            scan.sign_changes
        ));
    }
    Ok((
        RobustReport {
            theta1,
            theta2,
            threshold: scan.threshold,
            sign_changes: scan.sign_changes,
            rows,
        },
        failures,
    ))
}

impl RobustReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# theta1 = {}", fmt_f64(self.theta1))?;
        writeln!(w, "# theta2 = {}", fmt_f64(self.theta2))?;
        writeln!(w, "# c_threshold = {}", fmt_f64(self.threshold))?;
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["c0", "q", "C", "P", "C_numeric", "P_numeric"])?;
        for r in &self.rows {
            out.write_record([r.c0, r.q, r.c, r.p, r.c_numeric, r.p_numeric].map(fmt_f64))?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn cmd_robust(
    theta1: f64,
    theta2: f64,
    grid: &str,
    c0s: &[f64],
    out: Option<&Path>,
) -> Result<Outcome> {
    let grid = Grid::parse(grid)?;
    let (report, failures) = run_robust(theta1, theta2, &grid, c0s)?;
    report.write_csv(open_output(out)?)?;
    if out.is_some() {
        println!("c_threshold = {}", fmt_f64(report.threshold));
    }
    Ok(Outcome::from_failures(failures))
}

/// Field statistics checked by `verify`.
#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    pub mean: [f64; 3],
    pub covariance: [[f64; 3]; 3],
    #[serde(default)]
    pub antithetic: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyEntry {
    pub m: usize,
    pub n: usize,
    pub analytic_re: f64,
    pub analytic_im: f64,
    pub mc_re: f64,
    pub mc_im: f64,
    pub stderr: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub spec: VerifySpec,
    pub samples: usize,
    pub seed: u64,
    pub entries: Vec<VerifyEntry>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Compares the analytic damping matrix against Monte Carlo. `corrupt`
/// shifts one analytic entry (1-based) by 0.1 as a negative control.
pub fn run_verify(
    spec: &VerifySpec,
    samples: usize,
    seed: u64,
    corrupt: Option<(usize, usize)>,
) -> Result<VerifyReport> {
    let field = GaussianFieldSpec::new(spec.mean, spec.covariance)?;
    let cfg = MCConfig::new(samples, seed)?.with_antithetic(spec.antithetic);
    let mut analytic = *damping_matrix(&field).matrix();
    if let Some((m, n)) = corrupt {
        if !(1..=4).contains(&m) || !(1..=4).contains(&n) {
            return Err(Error::Config(format!(
                "--corrupt-entry: ({m}, {n}) is not an entry of a 4x4 matrix"
            )));
        }
        analytic[(m - 1, n - 1)] += C64::new(0.1, 0.0);
    }
    let est = channel_estimate(&field, &cfg)?;

    let mut entries = Vec::with_capacity(16);
    let mut max_deviation = 0.0f64;
    for m in 0..4 {
        for n in 0..4 {
            let (a, e, se) = (analytic[(m, n)], est.d[(m, n)], est.entry_stderr[m][n]);
            let dev = (a - e).norm();
            max_deviation = max_deviation.max(dev);
            entries.push(VerifyEntry {
                m: m + 1,
                n: n + 1,
                analytic_re: a.re,
                analytic_im: a.im,
                mc_re: e.re,
                mc_im: e.im,
                stderr: se,
                pass: dev <= tolerances::MC_SIGMAS * se + tolerances::MC_ABS_FLOOR,
            });
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(VerifyReport {
        spec: spec.clone(),
        samples,
        seed,
        entries,
        max_deviation,
        pass,
    })
}

pub fn cmd_verify(
    config: &Path,
    samples: usize,
    seed: u64,
    corrupt: Option<(usize, usize)>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let text = fs::read_to_string(config)?;
    let spec: VerifySpec =
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", config.display())))?;
    let report = run_verify(&spec, samples, seed, corrupt)?;
    let mut w = open_output(out)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    let failures = report
        .entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| {
            format!(
                "entry ({}, {}): |analytic - mc| exceeds {} stderr ({})",
                e.m,
                e.n,
                tolerances::MC_SIGMAS,
                fmt_f64(e.stderr)
            )
        })
        .collect();
    Ok(Outcome::from_failures(failures))
}

/// Parses `m,n` for the hidden corruption hook.
pub fn parse_entry(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Config(format!("entry '{s}' is not M,N"));
    let (m, n) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        m.trim().parse().map_err(|_| bad())?,
        n.trim().parse().map_err(|_| bad())?,
    ))
}

/// Parses a comma-separated list of initial concurrences.
pub fn parse_c0_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let v: f64 = x
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("--c0: '{x}' is not a number")))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(Error::Config(format!("--c0: {v} is outside [0, 1]")))
            }
        })
        .collect()
}
