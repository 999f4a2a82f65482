//! The `spectrum`, `cs`, `density` and `sweep` commands. `verify` lives in [`crate::suites`].

use clox_core::cstates::{cs_residual, CoherentState};
use clox_core::fock::spectrum;
use clox_core::measure::{radial_measure, regime, Regime};
use clox_core::{Complex64, Error};
use serde::Serialize;

use crate::config::{ConfigEcho, Format, RunConfig};
use crate::report::{csv_row, to_json, Check, Observation, Report, Sig17};
use crate::suites::{self, Suite};
use crate::sweep::random_params;

#[derive(Debug, Serialize)]
struct Level {
    n: usize,
    energy: Sig17,
    grade: usize,
}

#[derive(Debug, Serialize)]
struct SpectrumOutput {
    config_echo: ConfigEcho,
    levels: Vec<Level>,
    version: &'static str,
}

/// Table of (n, E_n, grade) for n < dim.
pub fn spectrum_table(cfg: &RunConfig) -> String {
    let e = spectrum(&cfg.params, cfg.dim - 1);
    let levels: Vec<Level> = e
        .iter()
        .enumerate()
        .map(|(n, &energy)| Level {
            n,
            energy: Sig17(energy),
            grade: cfg.params.grade(n),
        })
        .collect();
    match cfg.format {
        Format::Json => to_json(&SpectrumOutput {
            config_echo: cfg.echo(),
            levels,
            version: env!("CARGO_PKG_VERSION"),
        }),
        Format::Csv => {
            let mut out = String::from("n,energy,grade\n");
            for l in levels {
                out.push_str(&csv_row(&[l.n.to_string(), l.energy.text(), l.grade.to_string()]));
            }
            out
        }
    }
}

#[derive(Debug, Serialize)]
struct CsDiagnostics {
    dim: usize,
    residual: Sig17,
    /// 1 − (truncated sum)/(closed-form norm).
    truncation_defect: Sig17,
}

#[derive(Debug, Serialize)]
struct CsOutput {
    config_echo: ConfigEcho,
    z: [Sig17; 2],
    mu: usize,
    alpha: usize,
    norm: Sig17,
    coefficients: Vec<Sig17>,
    diagnostics: CsDiagnostics,
    version: &'static str,
}

/// Serialized |z;μ;α⟩ for the first grid point and its residual. Domain errors propagate.
pub fn coherent_state(cfg: &RunConfig) -> clox_core::Result<String> {
    let z = cfg.z_grid.first().copied().unwrap_or(Complex64::new(0.0, 0.0));
    let (mu, alpha) = (cfg.mu.unwrap_or(0), cfg.alpha_cs.unwrap_or(0));
    let cs = CoherentState::new(&cfg.params, z, mu, alpha)?;
    let dim = cs.required_dim();
    let v = cs.vector(dim)?;
    let residual = cs_residual(&cfg.params, &v, z, alpha);
    let defect = 1.0 - cs.truncated_norm() / cs.norm;
    let out = CsOutput {
        config_echo: cfg.echo(),
        z: [Sig17(z.re), Sig17(z.im)],
        mu,
        alpha,
        norm: Sig17(cs.norm),
        coefficients: cs.cprime.iter().map(|&c| Sig17(c)).collect(),
        diagnostics: CsDiagnostics {
            dim,
            residual: Sig17(residual),
            truncation_defect: Sig17(defect),
        },
        version: env!("CARGO_PKG_VERSION"),
    };
    Ok(match cfg.format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let lambda = cfg.lambda();
            let mut text = String::from("k,n,coefficient\n");
            for (k, c) in out.coefficients.iter().enumerate() {
                text.push_str(&csv_row(&[k.to_string(), (k * lambda + mu).to_string(), c.text()]));
            }
            text
        }
    })
}

#[derive(Debug, Serialize)]
struct DensityRow {
    y: Sig17,
    h: Sig17,
}

#[derive(Debug, Serialize)]
struct DensityOutput {
    config_echo: ConfigEcho,
    mu: usize,
    alpha: usize,
    #[serde(rename = "logA")]
    log_a: Sig17,
    regime: Regime,
    rows: Vec<DensityRow>,
    notes: Vec<String>,
    version: &'static str,
}

/// Tabulates h^{(α)}_μ on the y grid. Points that cannot be evaluated are omitted and
/// explained in `notes`; degenerate parameters yield an empty table and a notice.
pub fn density(cfg: &RunConfig) -> clox_core::Result<(String, Vec<String>)> {
    let (mu, alpha) = (cfg.mu.unwrap_or(0), cfg.alpha_cs.unwrap_or(0));
    let measure = radial_measure(&cfg.params, mu, alpha)?;
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    let degenerate = match measure.mg.check_generic() {
        Ok(()) => false,
        Err(Error::Degenerate { .. }) => {
            notes.push("pointwise evaluation unavailable for degenerate parameters; moments verified".to_string());
            true
        }
        Err(e) => return Err(e),
    };
    if !degenerate {
        let mut lost = Vec::new();
        for &y in &cfg.y_grid {
            if y == 0.0 {
                notes.push("y = 0 omitted: the density may be singular at the origin".to_string());
                continue;
            }
            if 2 * alpha == cfg.lambda() && y >= 1.0 {
                continue;
            }
            match measure.density(y) {
                Ok(h) => rows.push(DensityRow {
                    y: Sig17(y),
                    h: Sig17(h),
                }),
                Err(Error::PrecisionLoss { .. }) => lost.push(y),
                Err(e) => return Err(e),
            }
        }
        if 2 * alpha == cfg.lambda() && cfg.y_grid.iter().any(|&y| y >= 1.0) {
            notes.push("points with y >= 1 omitted: the measure is supported on the unit disc".to_string());
        }
        if !lost.is_empty() {
            notes.push(format!(
                "{} point(s) omitted where the residue series lost precision, first at y = {}",
                lost.len(),
                Sig17(lost[0]).text()
            ));
        }
    }
    let out = DensityOutput {
        config_echo: cfg.echo(),
        mu,
        alpha,
        log_a: Sig17(measure.log_a),
        regime: regime(cfg.lambda(), alpha),
        rows,
        notes,
        version: env!("CARGO_PKG_VERSION"),
    };
    let text = match cfg.format {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut text = String::from("y,h\n");
            for r in &out.rows {
                text.push_str(&csv_row(&[r.y.text(), r.h.text()]));
            }
            text
        }
    };
    Ok((text, out.notes))
}

/// Runs `suite` on `cfg.sweep_count` seeded random parameter sets of the configured λ.
pub fn sweep(cfg: &RunConfig, suite: Suite) -> clox_core::Result<Report> {
    let sets = random_params(cfg.lambda(), cfg.sweep_count, cfg.seed, cfg.tol())?;
    let mut checks: Vec<Check> = Vec::new();
    let mut observations: Vec<Observation> = Vec::new();
    for (i, params) in sets.iter().enumerate() {
        let run = RunConfig {
            params: params.clone(),
            ..cfg.clone()
        };
        let out = suites::run(&run, suite);
        checks.extend(out.checks.into_iter().map(|mut c| {
            c.name = format!("sweep[{i}] {}", c.name);
            c
        }));
        observations.extend(out.observations.into_iter().map(|mut o| {
            o.name = format!("sweep[{i}] {}", o.name);
            o
        }));
    }
    let mut echo = cfg.echo();
    echo.sweep_sets = Some(
        sets.iter()
            .map(|p| p.alpha().iter().map(|&a| Sig17(a)).collect())
            .collect(),
    );
    Ok(Report::new(echo, checks).with_observations(observations))
}
