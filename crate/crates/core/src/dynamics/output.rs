use std::fmt::Write as _;
use std::path::Path;

use super::moments::MomentSet;
use crate::error::{invalid, Result};

/// Moment columns of every trajectory file.
pub const MOMENT_COLUMNS: [&str; 16] = [
    "t", "rho", "Vx", "Vy", "Vz", "E", "T", "P11", "P22", "P33", "P12", "P13", "P23", "q1", "q2", "q3",
];

fn moment_row(m: &MomentSet) -> [f64; 16] {
    [
        m.time,
        m.rho,
        m.velocity[0],
        m.velocity[1],
        m.velocity[2],
        m.energy,
        m.temperature,
        m.stress[0][0],
        m.stress[1][1],
        m.stress[2][2],
        m.stress[0][1],
        m.stress[0][2],
        m.stress[1][2],
        m.heat_flux[0],
        m.heat_flux[1],
        m.heat_flux[2],
    ]
}

/// One row per time step: the moments and optional extra columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryTable {
    pub extra_columns: Vec<String>,
    pub rows: Vec<(MomentSet, Vec<f64>)>,
}

impl TrajectoryTable {
    pub fn new(extra_columns: &[&str]) -> Self {
        TrajectoryTable {
            extra_columns: extra_columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, moments: MomentSet, extra: Vec<f64>) -> Result<()> {
        if extra.len() != self.extra_columns.len() {
            return Err(invalid("extra values do not match the extra columns"));
        }
        self.rows.push((moments, extra));
        Ok(())
    }

    /// CSV text with a header line; numbers use shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = MOMENT_COLUMNS.join(",");
        for c in &self.extra_columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (m, extra) in &self.rows {
            let mut first = true;
            for v in moment_row(m).iter().chain(extra) {
                if !first {
                    out.push(',');
                }
                first = false;
                write!(out, "{v:?}").expect("writing to a string");
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parse CSV text produced by [`TrajectoryTable::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header: Vec<&str> = lines.next().ok_or_else(|| invalid("empty trajectory file"))?.split(',').collect();
        if header.len() < MOMENT_COLUMNS.len() || header[..MOMENT_COLUMNS.len()] != MOMENT_COLUMNS {
            return Err(invalid("trajectory header does not start with the moment columns"));
        }
        let mut table = TrajectoryTable {
            extra_columns: header[MOMENT_COLUMNS.len()..].iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        };
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let values: Vec<f64> = line
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| invalid(format!("trajectory line {}: {e}", i + 2)))?;
            if values.len() != header.len() {
                return Err(invalid(format!("trajectory line {} has {} fields", i + 2, values.len())));
            }
            let v = &values;
            let stress = [[v[7], v[10], v[11]], [v[10], v[8], v[12]], [v[11], v[12], v[9]]];
            let m = MomentSet {
                time: v[0],
                rho: v[1],
                velocity: [v[2], v[3], v[4]],
                energy: v[5],
                temperature: v[6],
                stress,
                heat_flux: [v[13], v[14], v[15]],
            };
            table.rows.push((m, v[16..].to_vec()));
        }
        Ok(table)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn moments(&self) -> Vec<MomentSet> {
        self.rows.iter().map(|(m, _)| *m).collect()
    }
}

/// Largest deviation of the closed-form entries between a trajectory and a
/// reference, over the times both contain (matched to `time_tol`).
pub fn max_moment_deviation(run: &[MomentSet], reference: &[MomentSet], time_tol: f64) -> Option<f64> {
    let mut worst: Option<f64> = None;
    let mut r = reference.iter().peekable();
    for m in run {
        while r.peek().is_some_and(|x| x.time < m.time - time_tol) {
            r.next();
        }
        if let Some(x) = r.peek() {
            if (x.time - m.time).abs() <= time_tol {
                let d = m.max_flow_deviation(x);
                worst = Some(worst.map_or(d, |w| w.max(d)));
            }
        }
    }
    worst
}
