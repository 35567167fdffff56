//! Run configuration: JSON file plus flag overrides (flags win), resolved
//! into a canonical record whose hash stamps every report.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

use voidstab_core::elasticity::{LameParams, SolverOptions};

/// Output format of the reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

/// On-disk configuration schema. Unknown keys are rejected so that typos
/// surface as config errors naming the offending key.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    #[serde(rename = "R0")]
    pub r0: Option<f64>,
    pub r: Option<f64>,
    pub profile_file: Option<PathBuf>,
    pub n_theta: Option<usize>,
    pub n_rho: Option<usize>,
    pub n_modes: Option<usize>,
    pub lambda_penalty: Option<f64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub steps: Option<usize>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub n_samples: Option<usize>,
    pub amplitude: Option<f64>,
    pub min_mode: Option<usize>,
    pub max_mode: Option<usize>,
    /// Area the descent holds its iterates to; defaults to the starting
    /// profile's cavity area.
    pub target_area: Option<f64>,
    /// Advanced: iteration cap of the linear solver.
    pub solver_max_iter: Option<usize>,
}

/// Shape source: exactly one of a round radius or a profile file.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeSource {
    Round { r: f64 },
    ProfileFile { path: String },
}

/// Fully resolved configuration; serialized canonically for the provenance
/// hash carried by every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub mu: f64,
    pub lambda: f64,
    pub alpha: f64,
    #[serde(rename = "R0")]
    pub r0: f64,
    /// Shape source; commands that act on a single profile require it, the
    /// sweep generates its own round shapes.
    pub shape: Option<ShapeSource>,
    pub n_theta: usize,
    pub n_rho: usize,
    pub n_modes: usize,
    pub lambda_penalty: Option<f64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub format: Format,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub steps: Option<usize>,
    pub max_iter: usize,
    pub tol: f64,
    pub n_samples: usize,
    pub amplitude: f64,
    pub min_mode: usize,
    pub max_mode: usize,
    pub target_area: Option<f64>,
    pub solver_max_iter: usize,
}

impl RunConfig {
    pub fn params(&self) -> Result<LameParams, String> {
        LameParams::new(self.mu, self.lambda).map_err(|e| e.to_string())
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            n_rho: self.n_rho,
            max_iter: self.solver_max_iter,
            ..SolverOptions::default()
        }
    }

    /// Hex-truncated SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(16);
        for b in digest.iter().take(8) {
            out.push_str(&format!("{b:02x}"));
        }
        out
    }
}

/// Flag-level overrides collected by the argument parser.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mu: Option<f64>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub r0: Option<f64>,
    pub r: Option<f64>,
    pub profile: Option<PathBuf>,
    pub n_theta: Option<usize>,
    pub n_rho: Option<usize>,
    pub n_modes: Option<usize>,
    pub lambda_penalty: Option<f64>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub steps: Option<usize>,
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub n_samples: Option<usize>,
    pub amplitude: Option<f64>,
    pub min_mode: Option<usize>,
    pub max_mode: Option<usize>,
}

/// Reads the config file (when given), merges the flag overrides on top and
/// validates the result.
pub fn resolve(config_path: Option<&Path>, ov: &Overrides) -> Result<RunConfig, String> {
    let file: FileConfig = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("config parse error: {e}"))?
        }
        None => FileConfig::default(),
    };
    let pick_f = |flag: Option<f64>, file_v: Option<f64>, dflt: f64| flag.or(file_v).unwrap_or(dflt);
    let pick_u = |flag: Option<usize>, file_v: Option<usize>, dflt: usize| flag.or(file_v).unwrap_or(dflt);

    let r = ov.r.or(file.r);
    let profile = ov.profile.clone().or(file.profile_file);
    let shape = match (r, &profile) {
        (Some(_), Some(_)) => {
            return Err("exactly one shape source allowed: both r and profile file given".into())
        }
        (None, None) => None,
        (Some(r), None) => Some(ShapeSource::Round { r }),
        (None, Some(p)) => Some(ShapeSource::ProfileFile {
            path: p.display().to_string(),
        }),
    };

    let cfg = RunConfig {
        mu: pick_f(ov.mu, file.mu, 1.0),
        lambda: pick_f(ov.lambda, file.lambda, 0.0),
        alpha: pick_f(ov.alpha, file.alpha, 1.0),
        r0: pick_f(ov.r0, file.r0, 1.0),
        shape,
        n_theta: pick_u(ov.n_theta, file.n_theta, 64),
        n_rho: pick_u(ov.n_rho, file.n_rho, 48),
        n_modes: 0, // filled below once n_theta is known
        lambda_penalty: ov.lambda_penalty.or(file.lambda_penalty),
        epsilon: ov.epsilon.or(file.epsilon),
        seed: ov.seed.or(file.seed),
        format: ov.format.or(file.format).unwrap_or(Format::Json),
        r_min: ov.r_min.or(file.r_min),
        r_max: ov.r_max.or(file.r_max),
        steps: ov.steps.or(file.steps),
        max_iter: pick_u(ov.max_iter, file.max_iter, 500),
        tol: pick_f(ov.tol, file.tol, 1e-8),
        n_samples: pick_u(ov.n_samples, file.n_samples, 50),
        amplitude: pick_f(ov.amplitude, file.amplitude, 1e-2),
        min_mode: pick_u(ov.min_mode, file.min_mode, 1),
        max_mode: pick_u(ov.max_mode, file.max_mode, 8),
        target_area: file.target_area,
        solver_max_iter: file.solver_max_iter.unwrap_or(600),
    };
    let mut cfg = cfg;
    if cfg.n_theta < 8 || cfg.n_theta % 2 != 0 {
        return Err(format!("n_theta = {} must be even and at least 8", cfg.n_theta));
    }
    cfg.n_modes = ov
        .n_modes
        .or(file.n_modes)
        .unwrap_or_else(|| 12usize.min(cfg.n_theta / 3));
    if cfg.n_rho < 6 {
        return Err(format!("n_rho = {} is too small", cfg.n_rho));
    }
    if cfg.n_modes == 0 || cfg.n_modes > cfg.n_theta / 3 {
        return Err(format!(
            "n_modes = {} outside 1..={} for n_theta = {}",
            cfg.n_modes,
            cfg.n_theta / 3,
            cfg.n_theta
        ));
    }
    Ok(cfg)
}
