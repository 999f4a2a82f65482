//! Run configuration: a flat TOML file plus command-line overrides.

use std::path::{Path, PathBuf};

use clox_core::cstates::check_label;
use clox_core::{AlgebraParams, Complex64};
use serde::{Deserialize, Serialize};

use crate::report::Sig17;

pub const DEFAULT_KMAX: usize = 50;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SWEEP_COUNT: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid algebra parameters: {0}")]
    Params(#[from] clox_core::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Keys accepted in a config file; everything but `lambda` and `alpha` is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub lambda: usize,
    pub alpha: Vec<f64>,
    pub tol: Option<f64>,
    pub dim: Option<usize>,
    pub kmax: Option<usize>,
    #[serde(default)]
    pub z_grid: Vec<[f64; 2]>,
    pub y_grid: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub sweep_count: Option<usize>,
    pub mu: Option<usize>,
    pub alpha_cs: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Values given on the command line take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub z: Option<Complex64>,
    pub mu: Option<usize>,
    pub alpha_cs: Option<usize>,
    pub kmax: Option<usize>,
    pub dim: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: AlgebraParams,
    pub dim: usize,
    pub kmax: usize,
    pub z_grid: Vec<Complex64>,
    pub y_grid: Vec<f64>,
    pub seed: u64,
    pub sweep_count: usize,
    pub mu: Option<usize>,
    pub alpha_cs: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

/// Default density grid: 0.05, 0.1, …, 10.
pub fn default_y_grid() -> Vec<f64> {
    (1..=200).map(|i| 0.05 * i as f64).collect()
}

fn default_z_grid() -> Vec<Complex64> {
    [0.0, 0.5, 1.0, 1.5, 2.0]
        .iter()
        .map(|&r| Complex64::from_polar(r, 0.7))
        .collect()
}

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let mut parts = text.split(',');
    let (Some(re), Some(im), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(format!("expected RE,IM, got {text:?}"));
    };
    let re: f64 = re.trim().parse().map_err(|e| format!("bad real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("bad imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

impl RunConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let file: ConfigFile = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_file(file, overrides)
    }

    pub fn from_file(file: ConfigFile, o: &Overrides) -> Result<Self, ConfigError> {
        let tol = file.tol.unwrap_or(DEFAULT_TOL);
        if tol <= 0.0 || !tol.is_finite() {
            return Err(ConfigError::Invalid(format!("tol must be positive, got {tol}")));
        }
        let params = AlgebraParams::new(file.lambda, &file.alpha, tol)?;
        let lambda = params.lambda();
        let kmax = o.kmax.or(file.kmax).unwrap_or(DEFAULT_KMAX);
        let min_dim = (kmax + 2) * lambda;
        let dim = o.dim.or(file.dim).unwrap_or(min_dim);
        if dim < min_dim {
            return Err(ConfigError::Invalid(format!(
                "dim = {dim} is too small for kmax = {kmax}; need at least (kmax+2)·lambda = {min_dim}"
            )));
        }

        let mut z_grid: Vec<Complex64> = match o.z {
            Some(z) => vec![z],
            None => file.z_grid.iter().map(|[re, im]| Complex64::new(*re, *im)).collect(),
        };
        if z_grid.is_empty() {
            z_grid = default_z_grid();
        }
        if let Some(z) = z_grid.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ConfigError::Invalid(format!("non-finite grid point {z}")));
        }
        let y_grid = file.y_grid.clone().unwrap_or_else(default_y_grid);
        if let Some(y) = y_grid.iter().find(|y| **y < 0.0 || !y.is_finite()) {
            return Err(ConfigError::Invalid(format!(
                "y_grid entries must be finite and nonnegative, got {y}"
            )));
        }

        let mu = o.mu.or(file.mu);
        let alpha_cs = o.alpha_cs.or(file.alpha_cs);
        if mu.is_some() || alpha_cs.is_some() {
            check_label(&params, mu.unwrap_or(0), alpha_cs.unwrap_or(0))?;
        }

        Ok(Self {
            params,
            dim,
            kmax,
            z_grid,
            y_grid,
            seed: file.seed.unwrap_or(0),
            sweep_count: file.sweep_count.unwrap_or(DEFAULT_SWEEP_COUNT),
            mu,
            alpha_cs,
            output: o.out.clone().or(file.output),
            format: o.format.or(file.format).unwrap_or_default(),
        })
    }

    pub fn lambda(&self) -> usize {
        self.params.lambda()
    }

    /// Threshold for coherent-state and moment checks.
    pub fn tol(&self) -> f64 {
        self.params.tol()
    }

    /// (μ, α) labels selected by the config: the given ones, or every valid label.
    pub fn labels(&self) -> Vec<(usize, usize)> {
        let lambda = self.lambda();
        match (self.mu, self.alpha_cs) {
            (Some(mu), Some(alpha)) => vec![(mu, alpha)],
            (Some(mu), None) => (0..=lambda / 2).filter(|a| mu + a < lambda).map(|a| (mu, a)).collect(),
            (None, Some(alpha)) => (0..lambda - alpha).map(|mu| (mu, alpha)).collect(),
            (None, None) => (0..=lambda / 2)
                .flat_map(|alpha| (0..lambda - alpha).map(move |mu| (mu, alpha)))
                .collect(),
        }
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            lambda: self.lambda(),
            alpha: self.params.alpha().iter().map(|&a| Sig17(a)).collect(),
            tol: Sig17(self.tol()),
            dim: self.dim,
            kmax: self.kmax,
            z_grid: self.z_grid.iter().map(|z| [Sig17(z.re), Sig17(z.im)]).collect(),
            seed: self.seed,
            mu: self.mu,
            alpha_cs: self.alpha_cs,
            sweep_sets: None,
        }
    }
}

/// The effective configuration as written into reports.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub lambda: usize,
    pub alpha: Vec<Sig17>,
    pub tol: Sig17,
    pub dim: usize,
    pub kmax: usize,
    pub z_grid: Vec<[Sig17; 2]>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_cs: Option<usize>,
    /// α vectors generated by `sweep`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_sets: Option<Vec<Vec<Sig17>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(text: &str) -> ConfigFile {
        toml::from_str(text).unwrap()
    }

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::from_file(file("lambda = 3\nalpha = [1.0, 0.0, -1.0]"), &Overrides::default()).unwrap();
        assert_eq!(c.kmax, 50);
        assert_eq!(c.dim, 52 * 3);
        assert_eq!(c.tol(), 1e-10);
        assert_eq!(c.format, Format::Json);
        assert_eq!(c.labels().len(), 5);
        assert_eq!(c.z_grid.len(), 5);
    }

    #[test]
    fn overrides_win() {
        let o = Overrides {
            z: Some(Complex64::new(0.3, 0.1)),
            kmax: Some(10),
            mu: Some(1),
            format: Some(Format::Csv),
            ..Overrides::default()
        };
        let c = RunConfig::from_file(
            file("lambda = 2\nalpha = [0.0, 0.0]\nkmax = 40\nz_grid = [[1.0, 0.0]]"),
            &o,
        )
        .unwrap();
        assert_eq!(c.kmax, 10);
        assert_eq!(c.z_grid, vec![Complex64::new(0.3, 0.1)]);
        assert_eq!(c.labels(), vec![(1, 0)]);
        assert_eq!(c.format, Format::Csv);
    }

    #[test]
    fn rejects_bad_input() {
        let o = Overrides::default();
        assert!(matches!(
            RunConfig::from_file(file("lambda = 2\nalpha = [0.5, 0.0]"), &o),
            Err(ConfigError::Params(clox_core::Error::AlphaSum { .. }))
        ));
        assert!(matches!(
            RunConfig::from_file(file("lambda = 2\nalpha = [0.0, 0.0]\ndim = 10"), &o),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            RunConfig::from_file(file("lambda = 3\nalpha = [1.0, 0.0, -1.0]\nmu = 2\nalpha_cs = 1"), &o),
            Err(ConfigError::Params(clox_core::Error::InvalidLabel { .. }))
        ));
        assert!(toml::from_str::<ConfigFile>("lambda = 2\nalpha = [0.0, 0.0]\nbogus = 1").is_err());
    }

    #[test]
    fn complex_argument() {
        assert_eq!(parse_complex("0.5,-1").unwrap(), Complex64::new(0.5, -1.0));
        assert!(parse_complex("0.5").is_err());
        assert!(parse_complex("a,b").is_err());
    }
}
