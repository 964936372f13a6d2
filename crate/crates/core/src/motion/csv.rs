//! Trajectory CSV: header `t,x,y`, one sample per line.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::{Dwell, Sample, Trajectory};
use crate::error::{Error, Result};

pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t,x,y\n");
    for s in traj.samples() {
        out.push_str(&format!("{},{},{}\n", s.t, s.x, s.y));
    }
    out
}

/// Strict parser: exact header, three finite numbers per row, and the usual
/// trajectory invariants (strictly increasing `t` from 0 to 1).
pub fn trajectory_from_csv(input: impl Read, dwell: Dwell) -> Result<Trajectory> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::None)
        .from_reader(input);
    let header = reader.headers().map_err(csv_err)?;
    if header != vec!["t", "x", "y"] {
        return Err(Error::Format(format!(
            "expected header t,x,y, got {header:?}"
        )));
    }
    let mut samples = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse::<f64>()
                .map_err(|_| Error::Format(format!("row {}: cannot parse {:?}", line + 2, &rec[k])))
        };
        samples.push(Sample {
            t: num(0)?,
            x: num(1)?,
            y: num(2)?,
        });
    }
    Trajectory::new(samples, dwell).map_err(|e| Error::Format(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("trajectory csv: {e}"))
}

pub fn write_trajectory_csv(path: impl AsRef<Path>, traj: &Trajectory) -> Result<()> {
    File::create(path)?.write_all(trajectory_to_csv(traj).as_bytes())?;
    Ok(())
}

pub fn read_trajectory_csv(path: impl AsRef<Path>, dwell: Dwell) -> Result<Trajectory> {
    trajectory_from_csv(File::open(path)?, dwell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::{traj_vibration, VibrationParams};

    #[test]
    fn round_trip_preserves_values() {
        let tr = traj_vibration(&VibrationParams::default(), 333).unwrap();
        let text = trajectory_to_csv(&tr);
        assert!(text.starts_with("t,x,y\n0,"));
        let back = trajectory_from_csv(text.as_bytes(), Dwell::Linear).unwrap();
        assert_eq!(back, tr);
    }

    #[test]
    fn rejects_malformed_input() {
        let bad = [
            "x,y,t\n0,0,0\n",
            "t,x,y\n0,0\n",
            "t,x,y\n0,0,a\n",
            "t,x,y\n0,0,0\n0.5,1,1\n0.4,1,1\n1,0,0\n",
            "t,x,y\n0,0,0\n0.5,1,1\n",
            "t,x,y\n0.1,0,0\n1,0,0\n",
            "t,x,y\n0,0,NaN\n1,0,0\n",
            "t,x,y\n",
        ];
        for b in bad {
            assert!(
                trajectory_from_csv(b.as_bytes(), Dwell::Linear).is_err(),
                "{b:?}"
            );
        }
        assert!(trajectory_from_csv("t,x,y\n0,1.5,-2\n".as_bytes(), Dwell::Hold).is_ok());
    }
}
