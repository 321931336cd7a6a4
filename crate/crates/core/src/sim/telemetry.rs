//! Telemetry records and their CSV form.

use std::io::{self, Write};

use serde::Serialize;

use crate::control::ModeKind;
use crate::Vec3;

pub const CSV_HEADER: &str = "t_s,q0,q1,q2,q3,wx_radps,wy_radps,wz_radps,roll_deg,pitch_deg,yaw_deg,tau_mx_Nm,tau_my_Nm,tau_mz_Nm,tau_rw_Nm,hw_Nms,mode";

/// State at `t` and the command held over the following step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelemetryRecord {
    pub t: f64,
    /// Scalar first.
    pub q: [f64; 4],
    pub omega: Vec3,
    /// Roll, pitch, yaw (3-2-1), deg.
    pub euler_deg: Vec3,
    pub tau_m: Vec3,
    pub tau_rw: f64,
    pub wheel_momentum: f64,
    pub mode: ModeKind,
}

impl Default for TelemetryRecord {
    fn default() -> Self {
        Self {
            t: 0.0,
            q: [1.0, 0.0, 0.0, 0.0],
            omega: Vec3::zeros(),
            euler_deg: Vec3::zeros(),
            tau_m: Vec3::zeros(),
            tau_rw: 0.0,
            wheel_momentum: 0.0,
            mode: ModeKind::Detumble,
        }
    }
}

/// Writes records as CSV. Floats use the shortest representation that
/// parses back to the same bits.
pub struct CsvWriter<W: Write> {
    out: W,
}

impl<W: Write> CsvWriter<W> {
    pub fn new(mut out: W) -> io::Result<Self> {
        writeln!(out, "{CSV_HEADER}")?;
        Ok(Self { out })
    }

    pub fn write(&mut self, r: &TelemetryRecord) -> io::Result<()> {
        let fields = [
            r.t,
            r.q[0],
            r.q[1],
            r.q[2],
            r.q[3],
            r.omega.x,
            r.omega.y,
            r.omega.z,
            r.euler_deg.x,
            r.euler_deg.y,
            r.euler_deg.z,
            r.tau_m.x,
            r.tau_m.y,
            r.tau_m.z,
            r.tau_rw,
            r.wheel_momentum,
        ];
        for v in fields {
            write!(self.out, "{v:?},")?;
        }
        writeln!(self.out, "{}", r.mode)
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_csv<W: Write>(out: W, records: &[TelemetryRecord]) -> io::Result<W> {
    let mut w = CsvWriter::new(out)?;
    for r in records {
        w.write(r)?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_round_trip() {
        let r = TelemetryRecord {
            t: 0.1,
            q: [0.5, -0.5, 0.5, 0.5],
            omega: Vec3::new(1.0 / 3.0, -2e-20, 6.02e23),
            tau_rw: 7.330382858376184e-4,
            mode: ModeKind::Despin,
            ..Default::default()
        };
        let bytes = write_csv(Vec::new(), &[r]).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), CSV_HEADER.split(',').count());
        assert_eq!(row[5].parse::<f64>().unwrap().to_bits(), (1.0f64 / 3.0).to_bits());
        assert_eq!(row[6].parse::<f64>().unwrap(), -2e-20);
        assert_eq!(row[14].parse::<f64>().unwrap(), 7.330382858376184e-4);
        assert_eq!(row[16], "despin");
    }
}
