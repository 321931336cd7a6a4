//! Static piecewise-exponential atmosphere.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtmosphereRow {
    pub h0_km: f64,
    pub rho0_kg_m3: f64,
    pub scale_height_km: f64,
}

/// Rows sorted by base altitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AtmosphereTable(Vec<AtmosphereRow>);

impl AtmosphereTable {
    pub fn new(mut rows: Vec<AtmosphereRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidConfig("atmosphere table is empty".into()));
        }
        if rows.iter().any(|r| !(r.rho0_kg_m3 >= 0.0 && r.scale_height_km > 0.0)) {
            return Err(Error::InvalidConfig("atmosphere rows need rho0 >= 0 and H > 0".into()));
        }
        rows.sort_by(|a, b| a.h0_km.total_cmp(&b.h0_km));
        Ok(Self(rows))
    }

    pub fn rows(&self) -> &[AtmosphereRow] {
        &self.0
    }

    /// `rho0 exp(-(h - h0) / H)` using the highest row with `h0 <= h`.
    pub fn density(&self, altitude_km: f64) -> Result<f64> {
        atmospheric_density(self, altitude_km)
    }
}

pub fn atmospheric_density(table: &AtmosphereTable, altitude_km: f64) -> Result<f64> {
    if !(200.0..=2000.0).contains(&altitude_km) {
        return Err(Error::AltitudeOutOfRange(altitude_km));
    }
    let row = table.0.iter().rev().find(|r| r.h0_km <= altitude_km).unwrap_or(&table.0[0]);
    Ok(row.rho0_kg_m3 * (-(altitude_km - row.h0_km) / row.scale_height_km).exp())
}
