//! The `gcoalg` command line: verification suites, universal invariants, `HV`, `HV'`,
//! integral tables and the representation cross-check.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{rngs::StdRng, SeedableRng};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{random_color, sample_grades};
use crate::diagrams::{BeadConvention, GDiagram, MovePair};
use crate::integrals::AxiomReport;
use crate::manifolds::{InvResult, SurgeryPresentation};
use crate::scalar::{set_tolerance, DEFAULT_TOLERANCE};
use crate::{Backend, Color, Error, GaussQ, Result, RootData, Scalar, Uq};

/// Largest `l` accepted without `--opt-in-large-l`.
pub const LARGE_ELL: u32 = 12;

#[derive(Parser, Debug)]
#[command(name = "gcoalg", version, about = "Unrolled quantum sl2 at a root of unity: universal invariants and 3-manifold invariants")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Order of the root of unity, at least 3.
    #[arg(long, global = true, default_value_t = 4)]
    pub ell: u32,
    /// Normalization of the integral, as an exact scalar such as `2` or `1/3`.
    #[arg(long, global = true, default_value = "1")]
    pub eta: String,
    #[arg(long, global = true, value_enum, default_value = "exact")]
    pub backend: BackendArg,
    /// Tolerance of the approximate backend.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Allow `l` above 12 and the Yang-Baxter check for `l' > 3`.
    #[arg(long = "opt-in-large-l", global = true)]
    pub opt_in_large_l: bool,
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Exact,
    Approx,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the verification suites.
    Check {
        /// Restrict to these suites; all of them by default.
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Directory of `*.left.txt` / `*.right.txt` move pairs.
        #[arg(long, default_value = "data/moves")]
        moves: PathBuf,
    },
    /// Universal invariant of a diagram.
    Jinv { file: PathBuf },
    /// `HV` of the surgery presentation in the file.
    Hv { file: PathBuf },
    /// `HV'` of the surgery presentation in the file, cutting component `cut`.
    Hvprime {
        file: PathBuf,
        #[arg(long)]
        cut: usize,
    },
    /// Tables of `mu`, `mu'`, the traces and `z_a` at one color.
    Integral {
        #[arg(long)]
        color: String,
    },
    /// Compare the module evaluation with the universal invariant on every choice of modules.
    Repcheck { file: PathBuf },
}

#[derive(clap::ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Hopf,
    Quasitriangular,
    Ribbon,
    Integrals,
    Ambidexterity,
    Moves,
    Delta,
}

const ALL_SUITES: [Suite; 7] = [Suite::Hopf, Suite::Quasitriangular, Suite::Ribbon, Suite::Integrals, Suite::Ambidexterity, Suite::Moves, Suite::Delta];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Serialize)]
pub struct SuiteStatus {
    pub suite: Suite,
    pub status: Status,
    pub checked: usize,
    pub failures: Vec<String>,
    pub note: Option<String>,
    pub seconds: f64,
}

/// What a command produced: a document for `--json`, text otherwise, and whether every
/// verification it ran succeeded.
#[derive(Debug)]
pub struct Outcome {
    pub doc: Value,
    pub text: String,
    pub ok: bool,
}

impl RunConfig {
    pub fn uq(&self) -> Result<Uq> {
        if self.ell > LARGE_ELL && !self.opt_in_large_l {
            return Err(Error::Input(format!("l = {} is above {LARGE_ELL}; pass --opt-in-large-l to run it", self.ell)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Input(format!("tolerance must be positive, got {}", self.tol)));
        }
        set_tolerance(self.tol);
        let eta: Scalar = self.eta.parse()?;
        let backend = match self.backend {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Approx => Backend::Approx,
        };
        Uq::new(RootData::new(self.ell, eta.to_backend(backend), backend)?)
    }

    fn rng(&self) -> StdRng {
        StdRng::seed_from_u64(self.seed)
    }
}

/// Exit status for an error: 1 for failed verifications, 2 for unusable input.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => 1,
        _ => 2,
    }
}

pub fn parse_color(s: &str) -> Result<Color> {
    Ok(Color::new(s.parse::<GaussQ>().map_err(|e| Error::Input(format!("color {s:?}: {e}")))?))
}

/// Reads a diagram in the text format, or in the JSON format when the name ends in `.json`.
pub fn load_diagram(path: &Path) -> Result<GDiagram> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    if path.extension().is_some_and(|x| x == "json") {
        GDiagram::from_json(&text)
    } else {
        GDiagram::parse(&text)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    let u = cfg.uq()?;
    match &cli.command {
        Command::Check { suite, samples, moves } => {
            let suites = if suite.is_empty() { ALL_SUITES.to_vec() } else { suite.clone() };
            check(cfg, &u, &suites, *samples, moves)
        }
        Command::Jinv { file } => jinv(&u, &load_diagram(file)?),
        Command::Hv { file } => manifold(&u, &load_diagram(file)?, None),
        Command::Hvprime { file, cut } => manifold(&u, &load_diagram(file)?, Some(*cut)),
        Command::Integral { color } => integral(&u, parse_color(color)?),
        Command::Repcheck { file } => repcheck(&u, &load_diagram(file)?),
    }
}

fn from_report(suite: Suite, r: AxiomReport) -> SuiteStatus {
    SuiteStatus {
        suite,
        status: if r.passed() { Status::Pass } else { Status::Fail },
        checked: r.checked,
        failures: r.failures,
        note: None,
        seconds: 0.0,
    }
}

fn skipped(suite: Suite, note: String) -> SuiteStatus {
    SuiteStatus { suite, status: Status::Skipped, checked: 0, failures: Vec::new(), note: Some(note), seconds: 0.0 }
}

fn run_suite(cfg: &RunConfig, u: &Uq, suite: Suite, samples: usize, moves: &Path) -> Result<SuiteStatus> {
    let mut rng = cfg.rng();
    let pairs = [(Color::frac(1, 3), Color::frac(1, 4)), (Color::frac(2, 3), Color::frac(6, 5))];
    Ok(match suite {
        Suite::Hopf => from_report(suite, u.check_hopf_axioms(&sample_grades(), samples, &mut rng)?),
        Suite::Quasitriangular => {
            let yang_baxter = u.ellp() <= 3 || cfg.opt_in_large_l;
            let colors = [Color::zero(), Color::frac(1, 2), Color::frac(7, 5)];
            let mut s = from_report(suite, u.check_quasitriangular(&colors, samples.min(2), yang_baxter, &mut rng)?);
            if !yang_baxter {
                s.note = Some("Yang-Baxter skipped for l' > 3 without --opt-in-large-l".into());
            }
            s
        }
        Suite::Ribbon => {
            let colors: Vec<Color> = (0..samples).map(|_| random_color(&mut rng)).collect();
            from_report(suite, u.check_ribbon(&colors)?)
        }
        Suite::Integrals => {
            let mut total = AxiomReport::default();
            for (a, b) in [(Color::zero(), Color::zero()), (Color::frac(1, 3), Color::frac(7, 5)), (Color::int(1), Color::frac(1, 2))] {
                let r = u.check_integral_axioms(a, b, samples, &mut rng)?;
                total.checked += r.checked;
                total.failures.extend(r.failures);
            }
            from_report(suite, total)
        }
        Suite::Ambidexterity => {
            let mut r = AxiomReport::default();
            for (a, b) in pairs {
                for xt in u.commutant_samples(a, b, samples, &mut rng)? {
                    for (name, ok) in [("ambidexterity", u.check_ambidexterity(a, b, &xt)?), ("compatibility", u.check_mod_compat(a, b, &xt)?)] {
                        r.checked += 1;
                        if !ok {
                            r.failures.push(format!("{name} at ({a}, {b})"));
                        }
                    }
                }
            }
            from_report(suite, r)
        }
        Suite::Moves => {
            if !moves.is_dir() {
                return Ok(skipped(suite, format!("no move pairs at {}", moves.display())));
            }
            let mut r = AxiomReport::default();
            for m in u.check_moves(&MovePair::load_dir(moves)?, BeadConvention::default())? {
                r.checked += m.evaluations;
                r.failures.extend(m.mismatches.into_iter().map(|x| format!("{}: {x}", m.name)));
            }
            from_report(suite, r)
        }
        Suite::Delta => {
            let d = u.deltas()?;
            if d.degenerate() {
                return Ok(skipped(suite, format!("twist is degenerate at l = {}: delta_+ = {}, delta_- = {}; HV is not defined", u.ell(), d.plus, d.minus)));
            }
            let mut r = AxiomReport { checked: 1, failures: Vec::new() };
            if d.plus != d.closed_form {
                r.failures.push(format!("delta_+ = {} but the Gauss sum gives {}", d.plus, d.closed_form));
            }
            let mut s = from_report(suite, r);
            s.note = Some(format!("delta_+ = {}, delta_- = {}", d.plus, d.minus));
            s
        }
    })
}

fn check(cfg: &RunConfig, u: &Uq, suites: &[Suite], samples: usize, moves: &Path) -> Result<Outcome> {
    let mut results = Vec::new();
    let mut text = String::new();
    for &suite in suites {
        let start = Instant::now();
        let mut s = run_suite(cfg, u, suite, samples, moves)?;
        s.seconds = start.elapsed().as_secs_f64();
        let label = serde_json::to_value(suite).unwrap();
        text += &format!("{:<16} {:<8} {:>6} checks {:>8.2}s", label.as_str().unwrap(), format!("{:?}", s.status).to_uppercase(), s.checked, s.seconds);
        if let Some(n) = &s.note {
            text += &format!("  ({n})");
        }
        text.push('\n');
        for f in s.failures.iter().take(10) {
            text += &format!("    {f}\n");
        }
        results.push(s);
    }
    let ok = results.iter().all(|s| s.status != Status::Fail);
    Ok(Outcome { doc: json!({ "config": cfg, "suites": results, "ok": ok }), text, ok })
}

fn jinv(u: &Uq, d: &GDiagram) -> Result<Outcome> {
    let j = u.universal_invariant(d)?;
    let text = format!("J = {j}\n");
    Ok(Outcome { doc: json!({ "ell": u.ell(), "colors": d.colors(), "invariant": j }), text, ok: true })
}

fn manifold(u: &Uq, d: &GDiagram, cut: Option<usize>) -> Result<Outcome> {
    let deltas = u.deltas()?;
    if deltas.degenerate() {
        return Err(Error::NotComputable(format!("twist is degenerate at l = {}: delta_+ = {}, delta_- = {}", u.ell(), deltas.plus, deltas.minus)));
    }
    let p = SurgeryPresentation::new(d.clone())?;
    let r: InvResult = match cut {
        None => p.hv(u)?,
        Some(j) => p.hv_mod(u, j)?,
    };
    let name = if cut.is_some() { "HV'" } else { "HV" };
    let z = r.value.to_complex();
    let text = format!("{name} = {}\n     ~ {:.12} {:+.12}i\n", r.value, z.re, z.im);
    Ok(Outcome { doc: serde_json::to_value(&r).expect("results serialize"), text, ok: true })
}

fn integral(u: &Uq, a: Color) -> Result<Outcome> {
    let traces = u.trace_table(a)?;
    let z = if a.in_gprime() { Some(u.solve_z(a)?) } else { None };
    let mut rows = Vec::new();
    let mut text = format!("color {a}, l = {}\n{:<24} {:<28} {:<28} {}\n", u.ell(), "monomial", "mu", "mu'", "trace");
    for m in u.tilde_basis() {
        let x = u.single(a, m);
        let mu = u.mu(&x);
        let mu_mod = match &z {
            Some(_) => Some(u.mu_mod(&x)?),
            None => None,
        };
        let tr = traces[&m].clone();
        if !(mu.is_zero() && tr.is_zero() && mu_mod.as_ref().is_none_or(Scalar::is_zero)) {
            let shown = mu_mod.as_ref().map_or("n/a".to_string(), ToString::to_string);
            text += &format!("{:<24} {:<28} {:<28} {}\n", m.to_string(), mu.to_string(), shown, tr);
        }
        rows.push(json!({ "monomial": m, "mu": mu, "mu_mod": mu_mod, "trace": tr }));
    }
    if let Some(z) = &z {
        text += &format!("z = {z}\n");
    }
    Ok(Outcome { doc: json!({ "ell": u.ell(), "color": a, "rows": rows, "z": z.as_deref().map(ToString::to_string) }), text, ok: true })
}

fn repcheck(u: &Uq, d: &GDiagram) -> Result<Outcome> {
    let sizes: Vec<u32> = d.colors().iter().map(|_| u.ellp()).collect();
    let total: u64 = sizes.iter().map(|&s| s as u64).product();
    if total > 256 {
        return Err(Error::Input(format!("{total} module assignments is too many to enumerate")));
    }
    let mut ks = vec![0u32; sizes.len()];
    let mut checked = Vec::new();
    let mut ok = true;
    let mut text = String::new();
    loop {
        let agree = u.rep_evaluate(d, &ks)?.sub(&u.universal_evaluate(d, &ks)?).is_zero();
        ok &= agree;
        text += &format!("modules {ks:?}: {}\n", if agree { "agree" } else { "DIFFER" });
        checked.push(json!({ "modules": ks, "agree": agree }));
        let Some(i) = (0..ks.len()).find(|&i| ks[i] + 1 < sizes[i]) else { break };
        ks[i] += 1;
        ks[..i].iter_mut().for_each(|k| *k = 0);
    }
    Ok(Outcome { doc: json!({ "ell": u.ell(), "assignments": checked, "ok": ok }), text, ok })
}
