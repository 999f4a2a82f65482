//! Verification suites. Each suite turns one family of library checks into report lines.

use clox_core::bargmann::{verify_sga_bargmann_on, verify_vector_bargmann};
use clox_core::cstates::{
    cs_norm, cs_norm_by_recursion, cs_norm_parameters, cs_residual, eigen_residual, perelomov_infidelity,
    CoherentState, EigenCs,
};
use clox_core::fock::{spectrum, FockRep};
use clox_core::measure::{sample_positivity, verify_nondiagonal, verify_resolution, Regime};
use clox_core::specfun::RESIDUE_TARGET;
use clox_core::{Complex64, Error};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::report::{Check, Observation, Sig17};

/// Threshold for operator identities that involve only products of known reals.
pub const EXACT_THRESHOLD: f64 = 1e-12;

/// Spectrum spacing is checked on n = 0..=SPACING_NMAX.
pub const SPACING_NMAX: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Algebra,
    Cs,
    Resolution,
    Nondiagonal,
    Bargmann,
    VectorBargmann,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Algebra,
                Suite::Cs,
                Suite::Resolution,
                Suite::Nondiagonal,
                Suite::Bargmann,
                Suite::VectorBargmann,
            ],
            s => vec![s],
        }
    }
}

/// Checks with thresholds plus quantities that are only reported.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
}

impl From<Vec<Check>> for Outcome {
    fn from(checks: Vec<Check>) -> Self {
        Self {
            checks,
            observations: Vec::new(),
        }
    }
}

type Task<'a> = Box<dyn Fn() -> Outcome + Send + Sync + 'a>;

/// Runs the selected suites concurrently; the order of checks is fixed by the task list.
pub fn run(cfg: &RunConfig, suite: Suite) -> Outcome {
    let mut tasks: Vec<Task> = Vec::new();
    for s in suite.members() {
        match s {
            Suite::Algebra => tasks.push(Box::new(|| algebra(cfg).into())),
            Suite::Cs => {
                for (mu, alpha) in cfg.labels() {
                    tasks.push(Box::new(move || coherent_states(cfg, mu, alpha).into()));
                }
                tasks.push(Box::new(|| eigenstates(cfg).into()));
                if cfg.lambda() == 2 {
                    tasks.push(Box::new(|| vec![perelomov(cfg)].into()));
                }
            }
            Suite::Resolution => {
                for (mu, alpha) in cfg.labels() {
                    tasks.push(Box::new(move || resolution(cfg, mu, alpha)));
                }
            }
            Suite::Nondiagonal => tasks.push(Box::new(|| vec![nondiagonal(cfg)].into())),
            Suite::Bargmann => tasks.push(Box::new(|| bargmann(cfg).into())),
            Suite::VectorBargmann => tasks.push(Box::new(|| vec![vector_bargmann(cfg)].into())),
            Suite::All => unreachable!(),
        }
    }
    let parts: Vec<Outcome> = tasks.par_iter().map(|t| t()).collect();
    let mut out = Outcome::default();
    for p in parts {
        out.checks.extend(p.checks);
        out.observations.extend(p.observations);
    }
    out
}

fn label_name(kind: &str, mu: usize, alpha: usize) -> String {
    format!("{kind} mu={mu} alpha={alpha}")
}

fn algebra(cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    match FockRep::new(&cfg.params, cfg.dim) {
        Ok(rep) => {
            for d in rep.check_algebra().checks {
                let c = Check::measured(format!("algebra.{}", d.name), d.max_deviation, EXACT_THRESHOLD);
                out.push(if d.relative {
                    c.with_note("relative to the largest |J±| entry on the checked block")
                } else {
                    c
                });
            }
        }
        Err(e) => out.push(Check::errored("algebra", EXACT_THRESHOLD, e)),
    }

    let lambda = cfg.lambda();
    let e = spectrum(&cfg.params, SPACING_NMAX + lambda);
    let worst = (0..=SPACING_NMAX)
        .map(|n| (e[n + lambda] - e[n] - lambda as f64).abs())
        .fold(0.0, f64::max);
    out.push(
        Check::measured("spectrum.spacing", worst, EXACT_THRESHOLD)
            .with_note(format!("|E(n+lambda) - E(n) - lambda| for n <= {SPACING_NMAX}")),
    );
    out
}

fn outside_disc(cfg: &RunConfig, alpha: usize, z: Complex64) -> bool {
    let (_, _, y) = cs_norm_parameters(&cfg.params, 0, alpha, z.norm());
    2 * alpha == cfg.lambda() && y >= 1.0
}

fn coherent_states(cfg: &RunConfig, mu: usize, alpha: usize) -> Vec<Check> {
    let tol = cfg.tol();
    let residual_name = label_name("cs.residual", mu, alpha);
    let norm_name = label_name("cs.norm", mu, alpha);
    let points: Vec<Complex64> = cfg
        .z_grid
        .iter()
        .copied()
        .filter(|z| !outside_disc(cfg, alpha, *z))
        .collect();
    let dropped = cfg.z_grid.len() - points.len();
    if points.is_empty() {
        let why = "every grid point lies outside the unit disc of this family";
        return vec![
            Check::skipped(residual_name, tol, why),
            Check::skipped(norm_name, tol, why),
        ];
    }

    let mut residual: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for z in &points {
        let state = CoherentState::new(&cfg.params, *z, mu, alpha).and_then(|cs| {
            let v = cs.vector(cs.required_dim())?;
            Ok(cs_residual(&cfg.params, &v, *z, alpha))
        });
        let sums = cs_norm(&cfg.params, mu, alpha, z.norm())
            .and_then(|closed| Ok((cs_norm_by_recursion(&cfg.params, mu, alpha, z.norm())?, closed)));
        match (state, sums) {
            (Ok(r), Ok((summed, closed))) => {
                residual = residual.max(r);
                norm = norm.max((summed / closed - 1.0).abs());
            }
            (Err(e), _) | (_, Err(e)) => {
                return vec![
                    Check::errored(residual_name, tol, &e),
                    Check::errored(norm_name, tol, &e),
                ];
            }
        }
    }
    let mut checks = vec![
        Check::measured(residual_name, residual, tol),
        Check::measured(norm_name, norm, tol).with_note("recursion sum against the hypergeometric closed form"),
    ];
    if dropped > 0 {
        let note = format!("{dropped} grid point(s) outside the unit disc of this family skipped");
        for c in checks.iter_mut() {
            c.note = Some(note.clone());
        }
    }
    checks
}

fn eigenstates(cfg: &RunConfig) -> Vec<Check> {
    let tol = cfg.tol();
    let mut residual: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for z in &cfg.z_grid {
        let run = || -> clox_core::Result<(f64, f64)> {
            let cs = EigenCs::new(&cfg.params, *z)?;
            let dim = cs.required_dim();
            let v = cs.vector(dim)?;
            let u = cs.unnormalized_vector(dim)?;
            let sq: f64 = u.iter().map(|x| x.norm_sqr()).sum();
            Ok((eigen_residual(&cfg.params, &v, *z), (sq / cs.norm - 1.0).abs()))
        };
        match run() {
            Ok((r, n)) => {
                residual = residual.max(r);
                norm = norm.max(n);
            }
            Err(e) => {
                return vec![
                    Check::errored("eigen.residual", tol, &e),
                    Check::errored("eigen.norm", tol, &e),
                ]
            }
        }
    }
    vec![
        Check::measured("eigen.residual", residual, tol),
        Check::measured("eigen.norm", norm, tol).with_note("assembled vector against the closed-form normalization"),
    ]
}

fn perelomov(cfg: &RunConfig) -> Check {
    let tol = cfg.tol();
    let points: Vec<Complex64> = cfg
        .z_grid
        .iter()
        .copied()
        .filter(|z| !outside_disc(cfg, 1, *z))
        .collect();
    if points.is_empty() {
        return Check::skipped("cs.perelomov", tol, "no grid point inside the unit disc");
    }
    let mut worst: f64 = 0.0;
    for z in points {
        match perelomov_infidelity(&cfg.params, z) {
            Ok(x) => worst = worst.max(x),
            Err(e) => return Check::errored("cs.perelomov", tol, e),
        }
    }
    Check::measured("cs.perelomov", worst, tol).with_note("1 - fidelity with exp(z J+)|0>")
}

fn resolution(cfg: &RunConfig, mu: usize, alpha: usize) -> Outcome {
    let tol = cfg.tol();
    let name = label_name("resolution", mu, alpha);
    let moments = match verify_resolution(&cfg.params, mu, alpha, cfg.kmax) {
        Ok(rep) => {
            let c = Check::measured(name, rep.max_rel_error, tol);
            if rep.regime == Regime::Conjecture {
                c.with_note("conjectured density form: numerical evidence only")
            } else {
                c
            }
        }
        Err(e) => Check::errored(name, tol, e),
    };
    Outcome {
        checks: vec![moments],
        observations: vec![positivity(cfg, mu, alpha)],
    }
}

/// Sampled sign of the radial density. Reported, not thresholded: the density is only
/// expected to be positive for suitable parameters, and the moments are the contract.
fn positivity(cfg: &RunConfig, mu: usize, alpha: usize) -> Observation {
    let name = label_name("positivity", mu, alpha);
    let disc = 2 * alpha == cfg.lambda();
    let ys: Vec<f64> = cfg
        .y_grid
        .iter()
        .copied()
        .filter(|&y| y > 0.0 && !(disc && y >= 1.0))
        .collect();
    let (value, note) = match sample_positivity(&cfg.params, mu, alpha, &ys) {
        Ok(s) if s.evaluated == 0 => (None, format!("none of {} samples reached {RESIDUE_TARGET:e} accuracy", ys.len())),
        Ok(s) => (
            Some(Sig17(s.relative_negativity())),
            format!(
                "largest negative value relative to the largest value; {} of {} samples negative, {} skipped for precision loss",
                s.negative, s.evaluated, s.skipped
            ),
        ),
        Err(Error::Degenerate { .. }) => (
            None,
            "degenerate Meijer-G parameters: pointwise positivity unverified, moments checked".to_string(),
        ),
        Err(e) => (None, format!("error: {e}")),
    };
    Observation { name, value, note }
}

fn nondiagonal(cfg: &RunConfig) -> Check {
    let tol = cfg.tol();
    match verify_nondiagonal(&cfg.params, cfg.kmax) {
        Ok(rep) => Check::measured("nondiagonal", rep.max_rel_error, tol).with_note(format!(
            "diagonal moments {:.3e}, phase leakage {:.3e}",
            rep.diagonal_mismatch, rep.fourier_leakage
        )),
        Err(e) => Check::errored("nondiagonal", tol, e),
    }
}

fn bargmann(cfg: &RunConfig) -> Vec<Check> {
    let rep = match FockRep::new(&cfg.params, cfg.dim) {
        Ok(rep) => rep,
        Err(e) => return vec![Check::errored("bargmann", EXACT_THRESHOLD, e)],
    };
    cfg.labels()
        .into_par_iter()
        .map(|(mu, alpha)| {
            let name = label_name("bargmann", mu, alpha);
            match verify_sga_bargmann_on(&rep, mu, alpha, cfg.kmax) {
                Ok(r) => Check::measured(name, r.max_mismatch(), EXACT_THRESHOLD),
                Err(e) => Check::errored(name, EXACT_THRESHOLD, e),
            }
        })
        .collect()
}

fn vector_bargmann(cfg: &RunConfig) -> Check {
    match verify_vector_bargmann(&cfg.params, cfg.kmax) {
        Ok(r) => Check::measured("vector-bargmann", r.max_mismatch(), EXACT_THRESHOLD),
        Err(e) => Check::errored("vector-bargmann", EXACT_THRESHOLD, e),
    }
}
