use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimation::Foot;

pub const CSV_HEADER: &str = "t,c_x,c_y,cdot_x,cdot_y,zmp_x,zmp_y,p_ref_x,p_ref_y,support,phase,theta,phi,event";

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRow {
    pub t: f64,
    pub c: [f64; 2],
    pub c_dot: [f64; 2],
    pub zmp: [f64; 2],
    pub p_ref: [f64; 2],
    pub support: Foot,
    pub phase: f64,
    pub theta: f64,
    pub phi: f64,
    pub event: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Summary {
    pub v: u32,
    pub scenario: String,
    pub recovered: bool,
    pub fell: bool,
    pub aborted: bool,
    /// Ball travel after the kick, m.
    pub distance: f64,
    pub goals: u32,
    pub duration: f64,
    pub max_com_error: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub contact_speed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub kick_triggers: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub rows: Vec<TrajectoryRow>,
    pub summary: Summary,
}

/// `%.9g`-style formatting: 9 significant digits, trailing zeros trimmed.
pub(crate) fn fmt_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

impl TrajectoryLog {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.rows.len() * 160);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let nums = [
                r.t, r.c[0], r.c[1], r.c_dot[0], r.c_dot[1], r.zmp[0], r.zmp[1], r.p_ref[0], r.p_ref[1],
            ];
            for v in nums {
                out.push_str(&fmt_g9(v));
                out.push(',');
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.support.tag(),
                fmt_g9(r.phase),
                fmt_g9(r.theta),
                fmt_g9(r.phi),
                r.event
            );
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary serializes")
    }

    /// Writes `trajectory.csv` and `summary.json` into `dir`, creating it if needed.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("trajectory.csv"), self.to_csv())?;
        fs::write(dir.join("summary.json"), self.summary_json())?;
        Ok(())
    }

    pub fn events(&self) -> impl Iterator<Item = (f64, &str)> {
        self.rows.iter().filter(|r| !r.event.is_empty()).map(|r| (r.t, r.event.as_str()))
    }
}
