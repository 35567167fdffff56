//! The five subcommands: solve, stability, evolve, sweep, probe.

use serde::Serialize;
use std::path::{Path, PathBuf};

use voidstab_core::disk::{g_threshold, r0_threshold, stability_window, GAlpha};
use voidstab_core::elasticity::{
    boundary_traces, solve_equilibrium, BoundaryData, DisplacementField, LameParams,
};
use voidstab_core::evolve::{descend, minimality_probe, EvolveConfig, ProbeConfig};
use voidstab_core::geometry::{cavity_area, RadialProfile};
use voidstab_core::numerics::PeriodicGrid;
use voidstab_core::variation::{
    assemble_with, criticality, mode_labels, stability_spectrum, SpectrumReport,
};

use crate::config::{Format, RunConfig, ShapeSource};
use crate::profile_io;
use crate::report::{self, fmt};

/// Loads the shape source of the configuration. Profile files carry their own
/// grid and outer radius; round shapes use the configured resolution.
pub fn load_profile(cfg: &RunConfig) -> Result<RadialProfile, String> {
    match &cfg.shape {
        Some(ShapeSource::Round { r }) => {
            let grid = PeriodicGrid::new(cfg.n_theta).map_err(|e| e.to_string())?;
            RadialProfile::round(grid, *r, cfg.r0).map_err(|e| e.to_string())
        }
        Some(ShapeSource::ProfileFile { path }) => profile_io::read_profile(Path::new(path)),
        None => Err("a shape source is required: give --r or a profile file".into()),
    }
}

fn solve(cfg: &RunConfig, h: &RadialProfile) -> Result<(DisplacementField, LameParams), CmdError> {
    let p = cfg.params().map_err(CmdError::Config)?;
    let bc = BoundaryData::radial_stretch(cfg.alpha, h.outer_radius())
        .map_err(|e| CmdError::Config(e.to_string()))?;
    let u = solve_equilibrium(h, &bc, &p, &cfg.solver_options()).map_err(CmdError::from_core)?;
    Ok((u, p))
}

/// Command failure paired with its process exit code.
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    Solver(String),
    NotCritical(String),
    Stalled(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Config(_) => 1,
            CmdError::Solver(_) => 2,
            CmdError::NotCritical(_) => 3,
            CmdError::Stalled(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CmdError::Config(m)
            | CmdError::Solver(m)
            | CmdError::NotCritical(m)
            | CmdError::Stalled(m) => m,
        }
    }

    fn from_core(e: voidstab_core::Error) -> Self {
        use voidstab_core::Error as E;
        match &e {
            E::SolverFailure { .. } => CmdError::Solver(e.to_string()),
            E::NotCritical { .. } => CmdError::NotCritical(e.to_string()),
            E::StalledDescent { .. } => CmdError::Stalled(e.to_string()),
            _ => CmdError::Config(e.to_string()),
        }
    }
}

#[derive(Serialize)]
struct SolveReport {
    config_hash: String,
    bulk_energy: f64,
    traction_residual: f64,
    solver_iterations: usize,
    solver_residual: f64,
    criticality_constant: f64,
    criticality_deviation: f64,
    boundary_q: Vec<f64>,
    boundary_dq_dnu: Vec<f64>,
}

pub fn cmd_solve(cfg: &RunConfig, out: Option<&Path>, dump_field: Option<&PathBuf>) -> Result<(), CmdError> {
    let h = load_profile(cfg).map_err(CmdError::Config)?;
    let (u, p) = solve(cfg, &h)?;
    let traces = boundary_traces(&u, &h, &p);
    let crit = criticality(&h, &u, &p);
    if let Some(path) = dump_field {
        let dump = profile_io::field_dump(&u, &p);
        report::write_json(Some(path), &dump).map_err(CmdError::Config)?;
    }
    let rep = SolveReport {
        config_hash: cfg.hash(),
        bulk_energy: traces.bulk_energy,
        traction_residual: traces.traction_residual,
        solver_iterations: u.iterations,
        solver_residual: u.residual,
        criticality_constant: crit.lagrange_constant,
        criticality_deviation: crit.deviation,
        boundary_q: traces.boundary_q.clone(),
        boundary_dq_dnu: traces.boundary_dq_dnu.clone(),
    };
    match cfg.format {
        Format::Json => report::write_json(out, &rep).map_err(CmdError::Config),
        Format::Csv => {
            let grid = h.grid();
            let rows: Vec<Vec<String>> = (0..grid.len())
                .map(|j| {
                    vec![
                        fmt(grid.node(j)),
                        fmt(rep.boundary_q[j]),
                        fmt(rep.boundary_dq_dnu[j]),
                        fmt(rep.bulk_energy),
                    ]
                })
                .collect();
            report::write_csv(
                out,
                &rep.config_hash,
                &["theta", "boundary_q", "boundary_dq_dnu", "bulk_energy"],
                &rows,
            )
            .map_err(CmdError::Config)
        }
    }
}

/// `-inf` is encoded as a JSON string so the sentinel survives serialization.
#[derive(Serialize)]
#[serde(untagged)]
enum GAlphaJson {
    Finite(f64),
    Sentinel(&'static str),
}

impl From<GAlpha> for GAlphaJson {
    fn from(g: GAlpha) -> Self {
        match g {
            GAlpha::Radius(v) => GAlphaJson::Finite(v),
            GAlpha::NegInfinity => GAlphaJson::Sentinel("-inf"),
        }
    }
}

#[derive(Serialize)]
struct StabilityJson {
    config_hash: String,
    modes: Vec<String>,
    min_eig: f64,
    c0: f64,
    eigvec_coeffs: Vec<f64>,
    verdict: String,
    eigenvalues: Vec<f64>,
    neutral: Vec<usize>,
    criticality_constant: f64,
    criticality_deviation: f64,
    r0: f64,
    #[serde(rename = "G_alpha")]
    g_alpha: GAlphaJson,
    window: Option<(f64, f64)>,
    condition_met: Option<bool>,
}

fn verdict_of(spectrum: &SpectrumReport) -> String {
    if spectrum.eigenvalues.iter().any(|v| *v < -spectrum.tol) {
        "unstable".into()
    } else {
        "stable".into()
    }
}

struct StabilityOutcome {
    spectrum: SpectrumReport,
    labels: Vec<String>,
    crit_constant: f64,
    crit_deviation: f64,
    r0: f64,
    g_alpha: GAlpha,
    window: Option<(f64, f64)>,
    condition_met: Option<bool>,
}

fn stability_pipeline(cfg: &RunConfig, h: &RadialProfile, force: bool) -> Result<(StabilityOutcome, Option<QDump>), CmdError> {
    let (u, p) = solve(cfg, h)?;
    let crit = criticality(h, &u, &p);
    let q = assemble_with(h, &u, &p, cfg.n_modes, force).map_err(CmdError::from_core)?;
    let spectrum = stability_spectrum(&q).map_err(CmdError::from_core)?;
    let r0 = r0_threshold(&p, h.outer_radius());
    let g_alpha = g_threshold(cfg.alpha, &p, h.outer_radius());
    let (window, condition_met) = match &cfg.shape {
        Some(ShapeSource::Round { r }) => {
            let rep = stability_window(cfg.alpha, &p, h.outer_radius(), *r);
            (rep.window, Some(rep.condition_met))
        }
        _ => {
            let lo = match g_alpha {
                GAlpha::NegInfinity => r0,
                GAlpha::Radius(t) => r0.max(t),
            };
            let window = if lo < h.outer_radius() {
                Some((lo, h.outer_radius()))
            } else {
                None
            };
            (window, None)
        }
    };
    let labels = mode_labels(&q);
    let dump = QDump {
        labels: labels.clone(),
        m: (0..q.n_raw())
            .map(|i| (0..q.n_raw()).map(|j| q.m.get(i, j)).collect())
            .collect(),
        g: (0..q.n_raw())
            .map(|i| (0..q.n_raw()).map(|j| q.g.get(i, j)).collect())
            .collect(),
    };
    Ok((
        StabilityOutcome {
            spectrum,
            labels,
            crit_constant: crit.lagrange_constant,
            crit_deviation: crit.deviation,
            r0,
            g_alpha,
            window,
            condition_met,
        },
        Some(dump),
    ))
}

struct QDump {
    labels: Vec<String>,
    m: Vec<Vec<f64>>,
    g: Vec<Vec<f64>>,
}

pub fn cmd_stability(
    cfg: &RunConfig,
    out: Option<&Path>,
    force: bool,
    dump_matrix: Option<&PathBuf>,
) -> Result<(), CmdError> {
    let h = load_profile(cfg).map_err(CmdError::Config)?;
    let (outcome, dump) = stability_pipeline(cfg, &h, force)?;
    if let (Some(path), Some(d)) = (dump_matrix, dump) {
        let headers: Vec<&str> = d.labels.iter().map(|s| s.as_str()).collect();
        let m_rows: Vec<Vec<String>> = d.m.iter().map(|r| r.iter().map(|v| fmt(*v)).collect()).collect();
        let g_rows: Vec<Vec<String>> = d.g.iter().map(|r| r.iter().map(|v| fmt(*v)).collect()).collect();
        report::write_csv_sections(
            Some(path),
            &cfg.hash(),
            &[("M", headers.clone(), m_rows), ("G", headers, g_rows)],
        )
        .map_err(CmdError::Config)?;
    }
    let rep = StabilityJson {
        config_hash: cfg.hash(),
        modes: outcome.labels,
        min_eig: outcome.spectrum.min_eig,
        c0: outcome.spectrum.c0,
        eigvec_coeffs: outcome.spectrum.eigvec_coeffs.clone(),
        verdict: verdict_of(&outcome.spectrum),
        eigenvalues: outcome.spectrum.eigenvalues.clone(),
        neutral: outcome.spectrum.neutral.clone(),
        criticality_constant: outcome.crit_constant,
        criticality_deviation: outcome.crit_deviation,
        r0: outcome.r0,
        g_alpha: outcome.g_alpha.into(),
        window: outcome.window,
        condition_met: outcome.condition_met,
    };
    match cfg.format {
        Format::Json => report::write_json(out, &rep).map_err(CmdError::Config),
        Format::Csv => {
            let r = match &cfg.shape {
                Some(ShapeSource::Round { r }) => *r,
                _ => f64::NAN,
            };
            let row = vec![
                fmt(r),
                fmt(rep.c0),
                fmt(rep.min_eig),
                fmt(rep.r0),
                fmt(outcome.g_alpha.as_f64()),
                rep.condition_met.map(|b| b.to_string()).unwrap_or_default(),
            ];
            report::write_csv(
                out,
                &rep.config_hash,
                &["r", "c0", "min_eig", "r0", "G_alpha", "condition_met"],
                &[row],
            )
            .map_err(CmdError::Config)
        }
    }
}

#[derive(Serialize)]
struct EvolveRow {
    iteration: usize,
    elastic: f64,
    perimeter: f64,
    penalty: f64,
    total: f64,
    grad_norm: f64,
    area: f64,
}

#[derive(Serialize)]
struct EvolveJson {
    config_hash: String,
    rows: Vec<EvolveRow>,
}

pub fn cmd_evolve(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CmdError> {
    let h = load_profile(cfg).map_err(CmdError::Config)?;
    let p = cfg.params().map_err(CmdError::Config)?;
    let mut ecfg = EvolveConfig::new(p, cfg.alpha, cfg.target_area.unwrap_or(cavity_area(&h)));
    ecfg.lambda_penalty = cfg.lambda_penalty;
    ecfg.epsilon = cfg.epsilon;
    if cfg.epsilon.is_some() {
        ecfg.reference = Some(h.clone());
    }
    ecfg.solver = cfg.solver_options();
    let trace = descend(&h, &ecfg, cfg.max_iter, cfg.tol).map_err(CmdError::from_core)?;
    let rows: Vec<EvolveRow> = trace
        .iter()
        .map(|st| EvolveRow {
            iteration: st.iteration,
            elastic: st.objective.elastic,
            perimeter: st.objective.perimeter,
            penalty: st.objective.penalty,
            total: st.objective.total,
            grad_norm: st.grad_norm,
            area: st.area,
        })
        .collect();
    match cfg.format {
        Format::Json => report::write_json(
            out,
            &EvolveJson {
                config_hash: cfg.hash(),
                rows,
            },
        )
        .map_err(CmdError::Config),
        Format::Csv => {
            let csv_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.iteration.to_string(),
                        fmt(r.elastic),
                        fmt(r.perimeter),
                        fmt(r.penalty),
                        fmt(r.total),
                        fmt(r.grad_norm),
                        fmt(r.area),
                    ]
                })
                .collect();
            report::write_csv(
                out,
                &cfg.hash(),
                &["iteration", "elastic", "perimeter", "penalty", "total", "grad_norm", "area"],
                &csv_rows,
            )
            .map_err(CmdError::Config)
        }
    }
}

#[derive(Serialize)]
struct SweepRow {
    r: f64,
    c0: f64,
    min_eig: f64,
    r0: f64,
    #[serde(rename = "G_alpha")]
    g_alpha: GAlphaJson,
    condition_met: bool,
}

#[derive(Serialize)]
struct SweepJson {
    config_hash: String,
    rows: Vec<SweepRow>,
}

pub fn cmd_sweep(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CmdError> {
    let (r_min, r_max, steps) = match (cfg.r_min, cfg.r_max, cfg.steps) {
        (Some(a), Some(b), Some(s)) if s >= 1 && a <= b => (a, b, s),
        _ => {
            return Err(CmdError::Config(
                "sweep requires --r-min ≤ --r-max and --steps ≥ 1".into(),
            ))
        }
    };
    let grid = PeriodicGrid::new(cfg.n_theta).map_err(|e| CmdError::Config(e.to_string()))?;
    let p = cfg.params().map_err(CmdError::Config)?;
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let r = if steps == 1 {
            r_min
        } else {
            r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64
        };
        let h = RadialProfile::round(grid, r, cfg.r0).map_err(|e| CmdError::Config(e.to_string()))?;
        let sub = RunConfig {
            shape: Some(ShapeSource::Round { r }),
            ..cfg.clone()
        };
        let (outcome, _) = stability_pipeline(&sub, &h, false)?;
        let wrep = stability_window(cfg.alpha, &p, cfg.r0, r);
        rows.push(SweepRow {
            r,
            c0: outcome.spectrum.c0,
            min_eig: outcome.spectrum.min_eig,
            r0: outcome.r0,
            g_alpha: outcome.g_alpha.into(),
            condition_met: wrep.condition_met,
        });
    }
    match cfg.format {
        Format::Json => report::write_json(
            out,
            &SweepJson {
                config_hash: cfg.hash(),
                rows,
            },
        )
        .map_err(CmdError::Config),
        Format::Csv => {
            let csv_rows: Vec<Vec<String>> = rows
                .iter()
                .map(|row| {
                    vec![
                        fmt(row.r),
                        fmt(row.c0),
                        fmt(row.min_eig),
                        fmt(row.r0),
                        match row.g_alpha {
                            GAlphaJson::Finite(v) => fmt(v),
                            GAlphaJson::Sentinel(s) => s.to_string(),
                        },
                        row.condition_met.to_string(),
                    ]
                })
                .collect();
            report::write_csv(
                out,
                &cfg.hash(),
                &["r", "c0", "min_eig", "r0", "G_alpha", "condition_met"],
                &csv_rows,
            )
            .map_err(CmdError::Config)
        }
    }
}

#[derive(Serialize)]
struct ProbeSampleJson {
    energy_excess: f64,
    sym_diff: f64,
    ratio: f64,
}

#[derive(Serialize)]
struct ProbeJson {
    config_hash: String,
    samples: Vec<ProbeSampleJson>,
    min_ratio: f64,
    fitted_c: f64,
    amplitude: f64,
}

pub fn cmd_probe(cfg: &RunConfig, out: Option<&Path>) -> Result<(), CmdError> {
    let seed = cfg.seed.ok_or_else(|| {
        CmdError::Config("probe requires an explicit --seed for reproducibility".into())
    })?;
    let h = load_profile(cfg).map_err(CmdError::Config)?;
    let p = cfg.params().map_err(CmdError::Config)?;
    let mut ecfg = EvolveConfig::new(p, cfg.alpha, cavity_area(&h));
    ecfg.lambda_penalty = cfg.lambda_penalty;
    ecfg.solver = cfg.solver_options();
    let mut probe = ProbeConfig::new(cfg.n_samples, cfg.amplitude, seed);
    probe.min_mode = cfg.min_mode;
    probe.max_mode = cfg.max_mode;
    let rep = minimality_probe(&h, &ecfg, &probe).map_err(CmdError::from_core)?;
    let samples: Vec<ProbeSampleJson> = rep
        .samples
        .iter()
        .map(|s| ProbeSampleJson {
            energy_excess: s.energy_excess,
            sym_diff: s.sym_diff,
            ratio: s.ratio,
        })
        .collect();
    match cfg.format {
        Format::Json => report::write_json(
            out,
            &ProbeJson {
                config_hash: cfg.hash(),
                samples,
                min_ratio: rep.min_ratio,
                fitted_c: rep.fitted_c,
                amplitude: rep.amplitude,
            },
        )
        .map_err(CmdError::Config),
        Format::Csv => {
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|s| vec![fmt(s.energy_excess), fmt(s.sym_diff), fmt(s.ratio)])
                .collect();
            report::write_csv(
                out,
                &cfg.hash(),
                &["energy_excess", "sym_diff", "ratio"],
                &rows,
            )
            .map_err(CmdError::Config)
        }
    }
}
