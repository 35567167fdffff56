//! Profile and field-dump file formats.

use serde::{Deserialize, Serialize};
use std::path::Path;

use voidstab_core::elasticity::{DisplacementField, LameParams};
use voidstab_core::geometry::RadialProfile;
use voidstab_core::numerics::PeriodicGrid;

/// Profile record `{R0, n_theta, values[]}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct ProfileRecord {
    #[serde(rename = "R0")]
    pub r0: f64,
    pub n_theta: usize,
    pub values: Vec<f64>,
}

pub fn read_profile(path: &Path) -> Result<RadialProfile, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read profile {}: {e}", path.display()))?;
    let rec: ProfileRecord =
        serde_json::from_str(&text).map_err(|e| format!("profile parse error: {e}"))?;
    let grid = PeriodicGrid::new(rec.n_theta).map_err(|e| e.to_string())?;
    RadialProfile::from_values(grid, &rec.values, rec.r0).map_err(|e| e.to_string())
}

/// Field dump `{n_theta, n_rho, R0, profile, components[2][n_theta][n_rho]}`.
#[derive(Debug, Serialize)]
pub struct FieldDump {
    pub n_theta: usize,
    pub n_rho: usize,
    #[serde(rename = "R0")]
    pub r0: f64,
    pub profile: Vec<f64>,
    pub components: [Vec<Vec<f64>>; 2],
}

pub fn field_dump(u: &DisplacementField, _p: &LameParams) -> FieldDump {
    let (nt, ns) = (u.n_theta(), u.n_rho());
    let mut components = [
        vec![vec![0.0; ns]; nt],
        vec![vec![0.0; ns]; nt],
    ];
    for j in 0..nt {
        for k in 0..ns {
            let v = u.at(j, k);
            components[0][j][k] = v[0];
            components[1][j][k] = v[1];
        }
    }
    FieldDump {
        n_theta: nt,
        n_rho: ns,
        r0: u.outer_radius(),
        profile: u.profile_values().to_vec(),
        components,
    }
}
