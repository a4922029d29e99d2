//! Command-line front end: one TOML scenario in, one table (CSV or JSON) out,
//! plus a built-in reproduction manifest.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::darboux::{check_conditions, frame, transformed_potential, transformed_spinor, TransformSpec};
use crate::dirac_core::{psi1, psi2, spinor};
use crate::elementary::{admissible_n, condition_value, solve_ky, ConditionId};
use crate::error::Error;
use crate::potentials::{Family, ModeParams, PotentialSpec};
use crate::specfun::lambert_w0;
use crate::verify::{density_report, integrate_sse, DensityGrid, DensitySource, OdeSetup};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(std::io::Error),
    Numeric(Error),
    Repro(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numeric(Error::InvalidSpec(_) | Error::Grid(_)) => 1,
            CliError::Numeric(_) => 2,
            CliError::Repro(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::Repro(m) => write!(f, "reproduction failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ---------------------------------------------------------------- scenario

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputKind {
    Potential,
    Solution,
    TransformedPotential,
    TransformedSolution,
    Density,
    ElementaryRoots,
    ConditionReport,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum KyField {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    family: Family,
    #[serde(rename = "V0")]
    v0: f64,
    #[serde(rename = "V1")]
    v1: f64,
    sigma: f64,
    #[serde(default)]
    x1: f64,
    #[serde(default)]
    singular: bool,
    #[serde(default)]
    mirror: bool,
    #[serde(rename = "E", default)]
    e: f64,
    ky: Option<KyField>,
    lambda0: Option<f64>,
    lambda1: Option<f64>,
    x_lo: f64,
    x_hi: f64,
    n_points: usize,
    #[serde(default)]
    outputs: Vec<OutputKind>,
    condition: Option<String>,
    n_max: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n).map(|i| self.x_lo + (self.x_hi - self.x_lo) * i as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub spec: PotentialSpec,
    pub energy: f64,
    pub modes: Vec<ModeParams>,
    pub transform: Option<TransformSpec>,
    pub grid: GridSpec,
    pub outputs: Vec<OutputKind>,
    pub condition: Option<ConditionId>,
    pub n_max: Option<u64>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> CliResult<Scenario> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
        let spec = PotentialSpec::new(raw.family, raw.v0, raw.v1, raw.sigma, raw.x1, raw.singular, raw.mirror)
            .map_err(|e| CliError::Config(e.to_string()))?;
        if !raw.e.is_finite() {
            return Err(CliError::Config("E must be finite".into()));
        }
        let kys = match raw.ky {
            None => vec![],
            Some(KyField::One(k)) => vec![k],
            Some(KyField::Many(v)) => v,
        };
        if kys.iter().any(|k| !k.is_finite()) {
            return Err(CliError::Config("ky values must be finite".into()));
        }
        let transform = match (raw.lambda0, raw.lambda1) {
            (Some(a), Some(b)) => Some(TransformSpec::new(a, b).map_err(|e| CliError::Config(e.to_string()))?),
            (None, None) => None,
            _ => return Err(CliError::Config("lambda0 and lambda1 must be given together".into())),
        };
        if raw.n_points < 2 {
            return Err(CliError::Config(format!("n_points must be at least 2, got {}", raw.n_points)));
        }
        if !(raw.x_lo < raw.x_hi) {
            return Err(CliError::Config(format!("need x_lo < x_hi, got [{}, {}]", raw.x_lo, raw.x_hi)));
        }
        let grid = GridSpec { x_lo: raw.x_lo, x_hi: raw.x_hi, n_points: raw.n_points };
        let dom = spec.domain();
        if let Some(x) = grid.points().into_iter().find(|&x| !dom.contains(x)) {
            return Err(CliError::Config(format!("grid point x = {x} outside the domain {dom}")));
        }
        let condition = match raw.condition {
            None => None,
            Some(name) => {
                let c = ConditionId::parse(&name).ok_or_else(|| CliError::Config(format!("unknown condition {name:?}")))?;
                if c.family() != spec.family {
                    return Err(CliError::Config(format!("condition {name} does not belong to the {:?} family", spec.family)));
                }
                Some(c)
            }
        };
        Ok(Scenario {
            spec,
            energy: raw.e,
            modes: kys.into_iter().map(|k| ModeParams::new(raw.e, k)).collect(),
            transform,
            grid,
            outputs: raw.outputs,
            condition,
            n_max: raw.n_max,
        })
    }

    pub fn load(path: &Path) -> CliResult<Scenario> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    fn wants(&self, kind: OutputKind) -> bool {
        self.outputs.is_empty() || self.outputs.contains(&kind)
    }

    fn need_modes(&self) -> CliResult<&[ModeParams]> {
        if self.modes.is_empty() {
            return Err(CliError::Config("this subcommand needs at least one ky".into()));
        }
        Ok(&self.modes)
    }

    fn need_transform(&self) -> CliResult<TransformSpec> {
        self.transform.ok_or_else(|| CliError::Config("this subcommand needs lambda0 and lambda1".into()))
    }
}

// ---------------------------------------------------------------- tables

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    /// Gap (e.g. singular transformation frame); never interpolated.
    Null,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
                    Cell::Num(_) | Cell::Null => "null".to_string(),
                    Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, c) in self.columns.iter().zip(row) {
                    let v = match c {
                        Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Null => Value::Null,
                    };
                    m.insert(name.clone(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

fn cx_cells(z: crate::specfun::Cx) -> [Cell; 2] {
    [Cell::Num(z.re), Cell::Num(z.im)]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Writes the table to `out` atomically (temp file + rename), or to `stdout`.
pub fn emit(table: &Table, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult<()> {
    if table.rows.is_empty() {
        return Err(CliError::Config("nothing to emit: the table is empty".into()));
    }
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match out {
        None => stdout.write_all(text.as_bytes())?,
        Some(path) => {
            let name = path.file_name().ok_or_else(|| CliError::Config(format!("bad output path {}", path.display())))?;
            let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
            fs::write(&tmp, text)?;
            if let Err(e) = fs::rename(&tmp, path) {
                let _ = fs::remove_file(&tmp);
                return Err(e.into());
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- subcommands

pub fn potential_table(sc: &Scenario) -> CliResult<Table> {
    let mut t = Table::new(&["x", "u0", "u0_dx"]);
    for x in sc.grid.points() {
        t.rows.push(vec![Cell::Num(x), Cell::Num(sc.spec.eval_u0(x)?), Cell::Num(sc.spec.eval_u0_dx(x)?)]);
    }
    Ok(t)
}

pub fn solution_table(sc: &Scenario) -> CliResult<Table> {
    let mut cols = vec!["ky", "x", "psi1_re", "psi1_im", "psi2_re", "psi2_im", "psia_re", "psia_im", "psib_re", "psib_im"];
    let density = sc.wants(OutputKind::Density);
    if density {
        cols.push("density");
    }
    let mut t = Table::new(&cols);
    for &mode in sc.need_modes()? {
        for x in sc.grid.points() {
            let s = spinor(&sc.spec, mode, x)?;
            let mut row = vec![Cell::Num(mode.ky), Cell::Num(x)];
            for z in [s.psi1, s.psi2, s.psia, s.psib] {
                row.extend(cx_cells(z));
            }
            if density {
                row.push(Cell::Num(s.density()));
            }
            t.rows.push(row);
        }
    }
    Ok(t)
}

pub fn darboux_table(sc: &Scenario) -> CliResult<Table> {
    let tr = sc.need_transform()?;
    let mut cols: Vec<String> =
        ["x", "u1_11_re", "u1_11_im", "u1_22_re", "u1_22_im", "offdiag_max", "imag_max", "diag_gap", "det_re", "det_im"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let phi = sc.outputs.contains(&OutputKind::TransformedSolution);
    let dens = sc.outputs.contains(&OutputKind::Density) || phi;
    for m in &sc.modes {
        if phi {
            for c in ["phi_a_re", "phi_a_im", "phi_b_re", "phi_b_im"] {
                cols.push(format!("{c}@{}", m.ky));
            }
        }
        if dens {
            cols.push(format!("density@{}", m.ky));
        }
    }
    let width = cols.len();
    let mut t = Table { columns: cols, rows: vec![] };
    for x in sc.grid.points() {
        let mut row = vec![Cell::Num(x)];
        let f = match frame(&sc.spec, sc.energy, tr, x) {
            Ok(f) => f,
            Err(Error::SingularFrame { .. }) => {
                row.resize(width, Cell::Null);
                t.rows.push(row);
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let p = transformed_potential(&sc.spec, sc.energy, tr, x)?;
        row.extend(cx_cells(p.m11));
        row.extend(cx_cells(p.m22));
        row.extend([Cell::Num(p.offdiag_max), Cell::Num(p.imag_max), Cell::Num(p.diag_gap)]);
        row.extend(cx_cells(f.det_u));
        for &m in &sc.modes {
            let s = transformed_spinor(&sc.spec, sc.energy, tr, m, x)?;
            if phi {
                row.extend(cx_cells(s.phi_a));
                row.extend(cx_cells(s.phi_b));
            }
            if dens {
                row.push(Cell::Num(s.density()));
            }
        }
        t.rows.push(row);
    }
    Ok(t)
}

pub fn elementary_table(sc: &Scenario) -> CliResult<Table> {
    let conds = match sc.condition {
        Some(c) => vec![c],
        // Without an explicit condition, skip those whose σ sign rules out real roots.
        None => ConditionId::for_family(sc.spec.family)
            .into_iter()
            .filter(|c| c.required_sigma_sign().map_or(true, |s| s * sc.spec.sigma > 0.0))
            .collect(),
    };
    let mut t = Table::new(&["condition", "n", "ky", "residual"]);
    for c in conds {
        let range = admissible_n(&sc.spec, c)?;
        if range.is_empty() {
            continue;
        }
        let cap = sc.n_max.unwrap_or(range.n_min + 9);
        let top = range.n_max.map_or(cap, |m| m.min(cap));
        for n in range.n_min..=top {
            for k in solve_ky(&sc.spec, c, n)?.roots {
                let res = (condition_value(&sc.spec, c, k)? - c.target(n)).abs();
                t.rows.push(vec![Cell::Text(c.name().into()), Cell::Num(n as f64), Cell::Num(k), Cell::Num(res)]);
            }
        }
    }
    Ok(t)
}

pub fn check_table(sc: &Scenario) -> CliResult<Table> {
    let r = check_conditions(&sc.spec, sc.need_transform()?);
    let yes = |b: bool| Cell::Text(if b { "true" } else { "false" }.into());
    let mut t = Table::new(&["check", "holds", "detail"]);
    t.rows.push(vec![Cell::Text("reality".into()), yes(r.reality.holds), Cell::Text(r.reality.reason)]);
    t.rows.push(vec![Cell::Text("diagonal".into()), yes(r.diagonal), Cell::Text("lambda0 = -lambda1".into())]);
    t.rows.push(vec![Cell::Text("elementary".into()), yes(r.elementary), Cell::Text("both lambdas solve a degeneration condition".into())]);
    Ok(t)
}

/// Relative disagreement above which `verify` reports failure.
pub const ORACLE_THRESHOLD: f64 = 1e-6;

pub fn verify_table(sc: &Scenario, tol: f64) -> CliResult<(Table, bool)> {
    let mut t = Table::new(&["ky", "sign", "x_start", "x_end", "ode_re", "ode_im", "closed_re", "closed_im", "rel_err", "steps"]);
    let mut ok = true;
    let (a, b) = (sc.grid.x_lo, sc.grid.x_hi);
    for &m in sc.need_modes()? {
        for sign in [1.0, -1.0] {
            let run = integrate_sse(&sc.spec, m, sign, OdeSetup::new(a, b, tol))?;
            let (p, d) = psi1(&sc.spec, m, b)?;
            let exact = if sign > 0.0 { p } else { psi2(&sc.spec, m, b, p, d)?.0 };
            let err = (run.end.0 - exact).norm() / exact.norm();
            ok &= err <= ORACLE_THRESHOLD;
            let mut row = vec![Cell::Num(m.ky), Cell::Num(sign), Cell::Num(a), Cell::Num(b)];
            row.extend(cx_cells(run.end.0));
            row.extend(cx_cells(exact));
            row.extend([Cell::Num(err), Cell::Num((run.samples.len() - 1) as f64)]);
            t.rows.push(row);
        }
    }
    Ok((t, ok))
}

// ---------------------------------------------------------------- manifest

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    /// Stated numerically or in closed form in the source publication.
    Published,
    /// Follows from a published formula evaluated here (e.g. a root family).
    Derived,
}

#[derive(Debug, Clone)]
pub enum Expectation {
    /// Positive roots of the condition at this n.
    Roots { n: u64, ky: Vec<f64> },
    /// Pointwise (U1_11, U1_22) on the scenario grid; relative error.
    Partner(fn(f64) -> (f64, f64)),
    /// Every mode of the scenario (and its Darboux image, when a transform is
    /// given) has an integrable density.
    BoundStates,
}

#[derive(Debug, Clone)]
pub struct ReproCase {
    pub id: &'static str,
    pub config: &'static str,
    pub expected: Expectation,
    pub provenance: Provenance,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReproOutcome {
    pub id: String,
    pub measured: String,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl fmt::Display for ReproOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{}: {} (error {:.3e}, tol {:.1e}) {verdict}", self.id, self.measured, self.error, self.tolerance)
    }
}

const KYX: &str = include_str!("../configs/kyx.toml");
const KY2: &str = include_str!("../configs/ky2.toml");
const SETX1: &str = include_str!("../configs/setx1.toml");
const SETX2: &str = include_str!("../configs/setx2.toml");
const SETX3: &str = include_str!("../configs/setx3.toml");
const ALPHAEXP: &str = include_str!("../configs/alphaexp.toml");
const BETAEXP: &str = include_str!("../configs/betaexp.toml");
const SETX5: &str = include_str!("../configs/setx5.toml");
const BOUND_LAMBERT: &str = include_str!("../configs/bound_lambert.toml");
const BOUND_EXP: &str = include_str!("../configs/bound_exp.toml");

/// Shipped configs by file stem.
pub const CONFIGS: [(&str, &str); 10] = [
    ("kyx", KYX),
    ("ky2", KY2),
    ("setx1", SETX1),
    ("setx2", SETX2),
    ("setx3", SETX3),
    ("alphaexp", ALPHAEXP),
    ("betaexp", BETAEXP),
    ("setx5", SETX5),
    ("bound_lambert", BOUND_LAMBERT),
    ("bound_exp", BOUND_EXP),
];

fn u1x(x: f64) -> (f64, f64) {
    let w = lambert_w0((-x).exp()).expect("W0 of a positive argument");
    let u = (-1.0 + 16.0 * w + 10.0 * w * w - 200.0 * w.powi(3) - 125.0 * w.powi(4))
        / ((1.0 + w) * (1.0 - 12.0 * w + 30.0 * w * w + 100.0 * w.powi(3) + 125.0 * w.powi(4)));
    (u, u)
}

fn u1xx(x: f64) -> (f64, f64) {
    let w = lambert_w0(-(-4.0 * x).exp()).expect("W0 above the branch point");
    let u = (1.0 + 34.0 * w + 17.0 * w * w) / (1.0 + 3.0 * w + 19.0 * w * w + 17.0 * w.powi(3));
    (u, u)
}

fn u1x1(x: f64) -> (f64, f64) {
    let e = (4.0 * x / 3.0).exp();
    let u = (13.0 + 17.0 * e) / ((13.0 + 9.0 * e) * (1.0 + e).sqrt());
    (u, u)
}

fn u1x2(x: f64) -> (f64, f64) {
    let e = x.exp();
    (4.0 / (1.0 + e).sqrt(), (8.0 + 11.0 * e) / (8.0 * (1.0 + e).powf(1.5)))
}

fn u1_bound_exp(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let e = |k: f64| (k * ax).exp();
    let r = (3.0 - 3.0 * (-ax).exp()).sqrt();
    let s = (1.0 - (-ax).exp()).sqrt();
    let s3 = 3f64.sqrt();
    let num = -4725.0 + 420.0 * e(1.0) * (274.0 + 45.0 * r) - 128.0 * e(4.0) * (1933.0 + 1116.0 * r)
        - 120.0 * e(2.0) * (3803.0 + 1211.0 * r)
        + e(3.0) * (594816.0 + 272000.0 * r);
    let den = 3675.0 * (4.0 * s3 + s) - 100.0 * e(1.0) * (1321.0 * s3 + 906.0 * s) - 128.0 * e(3.0) * (2991.0 * s3 + 4214.0 * s)
        + 40.0 * e(2.0) * (8935.0 * s3 + 9507.0 * s)
        + e(4.0) * (142848.0 * s3 + 247424.0 * s);
    (num / den, num / den)
}

pub fn manifest() -> Vec<ReproCase> {
    use Expectation::*;
    use Provenance::*;
    let s3 = 3f64.sqrt();
    let mut cases = vec![
        ReproCase { id: "kyx_n2", config: KYX, expected: Roots { n: 2, ky: vec![1.25] }, provenance: Published, tolerance: 1e-10 },
        ReproCase {
            id: "ky2_n1",
            config: KY2,
            expected: Roots { n: 1, ky: vec![(2.0 - s3).sqrt(), (2.0 + s3).sqrt()] },
            provenance: Published,
            tolerance: 1e-10,
        },
        ReproCase { id: "setx2_n1", config: SETX2, expected: Roots { n: 1, ky: vec![17.0 / 8.0] }, provenance: Published, tolerance: 1e-10 },
        ReproCase { id: "setx3_n1", config: SETX3, expected: Roots { n: 1, ky: vec![13.0 / 12.0] }, provenance: Published, tolerance: 1e-10 },
        ReproCase { id: "alphaexp_n1", config: ALPHAEXP, expected: Roots { n: 1, ky: vec![2.5] }, provenance: Published, tolerance: 1e-10 },
        ReproCase { id: "betaexp_n4", config: BETAEXP, expected: Roots { n: 4, ky: vec![25.0 / 16.0] }, provenance: Published, tolerance: 1e-10 },
        ReproCase { id: "setx5_n1", config: SETX5, expected: Roots { n: 1, ky: vec![17.0 / 4.0] }, provenance: Published, tolerance: 1e-10 },
        ReproCase { id: "setx5_n2", config: SETX5, expected: Roots { n: 2, ky: vec![2.5] }, provenance: Published, tolerance: 1e-10 },
    ];
    for n in 1..=10u64 {
        cases.push(ReproCase {
            id: ["kybound_n1", "kybound_n2", "kybound_n3", "kybound_n4", "kybound_n5", "kybound_n6", "kybound_n7", "kybound_n8", "kybound_n9", "kybound_n10"]
                [n as usize - 1],
            config: BOUND_EXP,
            expected: Roots { n, ky: vec![0.5 * (n as f64 + 1.0)] },
            provenance: Derived,
            tolerance: 1e-10,
        });
    }
    cases.extend([
        ReproCase { id: "partner_u1x", config: SETX1, expected: Partner(u1x), provenance: Published, tolerance: 1e-8 },
        ReproCase { id: "partner_u1xx", config: SETX2, expected: Partner(u1xx), provenance: Published, tolerance: 1e-8 },
        ReproCase { id: "partner_u1x1", config: SETX3, expected: Partner(u1x1), provenance: Published, tolerance: 1e-8 },
        ReproCase { id: "partner_u1x2", config: SETX5, expected: Partner(u1x2), provenance: Published, tolerance: 1e-8 },
        ReproCase { id: "partner_u1bound_exp", config: BOUND_EXP, expected: Partner(u1_bound_exp), provenance: Published, tolerance: 1e-8 },
        ReproCase { id: "bound_lambert", config: BOUND_LAMBERT, expected: BoundStates, provenance: Published, tolerance: 0.0 },
        ReproCase { id: "bound_exp", config: BOUND_EXP, expected: BoundStates, provenance: Published, tolerance: 0.0 },
    ]);
    cases
}

pub fn run_case(case: &ReproCase, tol_override: Option<f64>) -> CliResult<ReproOutcome> {
    let sc = Scenario::from_toml(case.config)?;
    let tol = tol_override.unwrap_or(case.tolerance);
    let (measured, error, pass) = match &case.expected {
        Expectation::Roots { n, ky } => {
            let cond = sc.condition.ok_or_else(|| CliError::Config(format!("{}: config has no condition", case.id)))?;
            let r = solve_ky(&sc.spec, cond, *n)?;
            let err = if r.roots.len() == ky.len() {
                r.roots.iter().zip(ky).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
            } else {
                f64::INFINITY
            };
            let shown: Vec<String> = r.roots.iter().map(|k| format!("{k}")).collect();
            (format!("{} n={n}: ky = [{}]", cond.name(), shown.join(", ")), err, err <= tol)
        }
        Expectation::Partner(oracle) => {
            let tr = sc.need_transform()?;
            let mut worst: f64 = 0.0;
            let mut used = 0;
            for x in sc.grid.points() {
                let p = match transformed_potential(&sc.spec, sc.energy, tr, x) {
                    Ok(p) => p,
                    Err(Error::SingularFrame { .. }) => continue,
                    Err(e) => return Err(e.into()),
                };
                let (a, b) = oracle(x);
                worst = worst.max((p.m11.re - a).hypot(p.m11.im) / a.abs());
                worst = worst.max((p.m22.re - b).hypot(p.m22.im) / b.abs());
                used += 1;
            }
            (format!("max relative deviation over {used} points"), worst, worst <= tol && used >= 100)
        }
        Expectation::BoundStates => {
            let mut failures = Vec::new();
            let mut rates = Vec::new();
            for &m in sc.need_modes()? {
                let mut sources = vec![DensitySource::Original { spec: &sc.spec, mode: m }];
                // At |k_y| = |λ| the transformed spinor is a kernel column (Φ ≡ 0).
                if let Some(t) = sc.transform.filter(|t| t.lambdas().iter().all(|l| l.abs() != m.ky.abs())) {
                    sources.push(DensitySource::Transformed { spec: &sc.spec, transform: t, mode: m });
                }
                for src in sources {
                    let rep = density_report(src, DensityGrid::default())?;
                    rates.push(rep.tail_decay_rate);
                    let finite_origin = rep.value_at_origin.map_or(true, f64::is_finite);
                    if !(rep.integrable && finite_origin) {
                        failures.push(m.ky);
                    }
                }
            }
            let slowest = rates.iter().copied().fold(f64::INFINITY, f64::min);
            let msg = format!("{} densities, slowest tail decay rate {slowest:.4}", rates.len());
            (msg, failures.len() as f64, failures.is_empty())
        }
    };
    Ok(ReproOutcome { id: case.id.to_string(), measured, error, tolerance: tol, pass })
}

// ---------------------------------------------------------------- argv

#[derive(Debug, Parser)]
#[command(name = "dirac-darboux", version, about = "Exactly solvable Dirac potentials and their Darboux partners")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scenario file (TOML).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Integrator / comparison tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// u0 on the grid.
    Potential(Common),
    /// Ψ1, Ψ2, Ψa, Ψb for every ky.
    Solve(Common),
    /// Transformed potential U1 with diagnostics (and Φ when requested).
    Darboux(Common),
    /// Elementary k_y roots.
    Elementary(Common),
    /// Reality / diagonality / elementarity of the transformation.
    Check(Common),
    /// Closed form against adaptive Runge–Kutta integration.
    Verify(Common),
    /// Run built-in reproduction cases.
    Repro {
        case: Option<String>,
        #[arg(long, conflicts_with = "case")]
        all: bool,
        /// Override the case tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Accepted for uniformity; cases carry their own scenarios.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn table_command(cmd: &Command) -> Option<&Common> {
    match cmd {
        Command::Potential(c) | Command::Solve(c) | Command::Darboux(c) | Command::Elementary(c) | Command::Check(c) | Command::Verify(c) => Some(c),
        Command::Repro { .. } => None,
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    if let Command::Repro { case, all, tol, .. } = &cli.command {
        let cases = manifest();
        let selected: Vec<&ReproCase> = match (case, all) {
            (_, true) => cases.iter().collect(),
            (Some(id), false) => {
                let c = cases.iter().find(|c| c.id == id).ok_or_else(|| CliError::Config(format!("unknown case {id:?}")))?;
                vec![c]
            }
            (None, false) => return Err(CliError::Config("give a case id or --all".into())),
        };
        let mut failed = Vec::new();
        for c in selected {
            let o = run_case(c, *tol)?;
            writeln!(stdout, "{o}")?;
            if !o.pass {
                failed.push(o.id);
            }
        }
        return if failed.is_empty() { Ok(()) } else { Err(CliError::Repro(failed.join(", "))) };
    }
    let common = table_command(&cli.command).expect("table subcommand");
    if let Some(t) = common.tol {
        if !(t > 0.0) {
            return Err(CliError::Config(format!("--tol must be positive, got {t}")));
        }
    }
    let sc = Scenario::load(&common.config)?;
    let mut verdict = Ok(());
    let table = match &cli.command {
        Command::Potential(_) => potential_table(&sc)?,
        Command::Solve(_) => solution_table(&sc)?,
        Command::Darboux(_) => darboux_table(&sc)?,
        Command::Elementary(_) => {
            let t = elementary_table(&sc)?;
            if t.rows.is_empty() {
                writeln!(stderr, "no admissible n: no elementary roots")?;
                return Ok(());
            }
            t
        }
        Command::Check(_) => check_table(&sc)?,
        Command::Verify(_) => {
            let (t, ok) = verify_table(&sc, common.tol.unwrap_or(1e-10))?;
            if !ok {
                verdict = Err(CliError::Repro(format!("closed form and integration differ by more than {ORACLE_THRESHOLD:e}")));
            }
            t
        }
        Command::Repro { .. } => unreachable!(),
    };
    emit(&table, common.format, common.out.as_deref(), stdout)?;
    verdict
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
