//! Serialization of trajectories and reports: CSV time series, JSON
//! summaries, and sweep tables. Floats carry 17 significant digits and
//! non-finite values become `NaN` in CSV and `null` in JSON.

use crate::scenarios::ComplexityReport;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use std::collections::BTreeMap;
use std::io::{self, Write};

/// Column order of the time-series CSV.
pub const SERIES_HEADER: [&str; 14] = [
    "t", "re_c0", "im_c0", "re_c1", "im_c1", "ax", "ay", "az", "theta", "phi", "deltaE", "k_t",
    "v_t", "kappa_sq",
];

/// Column order of the sweep CSV.
pub const SWEEP_HEADER: [&str; 8] = [
    "param_value",
    "avg_k",
    "c_igc",
    "eta_ge",
    "s",
    "l_c",
    "kappa_sq_t0",
    "sup_k",
];

/// Prefix of the trailing summary line in CSV output.
pub const SUMMARY_PREFIX: &str = "# summary: ";

/// `{:.16e}` for finite values, `NaN` otherwise.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".to_string()
    }
}

/// A float serialized to JSON with 17 significant digits, or `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

impl From<Option<f64>> for Num {
    fn from(x: Option<f64>) -> Self {
        Num(x.unwrap_or(f64::NAN))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(format!("{:.16e}", self.0))
                .map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

/// Scalar summary of a report.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub parameters: BTreeMap<String, Num>,
    pub samples: usize,
    pub t_a: Num,
    pub t_b: Num,
    pub propagator: String,
    pub avg_k: Num,
    pub avg_k_closed_form: Num,
    pub sup_k: Num,
    pub v_bar: Num,
    pub v_max: Num,
    pub c_igc: Num,
    pub eta_ge: Num,
    pub s: Num,
    pub s0: Num,
    pub l_c: Num,
    pub kappa_sq_t0: Num,
    pub k_route_gap: Num,
    pub expected: BTreeMap<String, Num>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub igc_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

impl Summary {
    pub fn from_report(r: &ComplexityReport) -> Self {
        Self {
            scenario: r.scenario.clone(),
            parameters: r
                .parameters
                .iter()
                .map(|(k, v)| (k.clone(), Num(*v)))
                .collect(),
            samples: r.trajectory.len(),
            t_a: r.trajectory.t_a().into(),
            t_b: r.trajectory.t_b().into(),
            propagator: format!("{:?}", r.propagator),
            avg_k: r.avg_k.into(),
            avg_k_closed_form: r.avg_k_closed_form.into(),
            sup_k: r.sup_k.into(),
            v_bar: r.v_bar.into(),
            v_max: r.v_max.into(),
            c_igc: r.c_igc.into(),
            eta_ge: r.eta_ge.into(),
            s: r.s.into(),
            s0: r.s0.into(),
            l_c: r.l_c.into(),
            kappa_sq_t0: r.kappa_sq_t0().into(),
            k_route_gap: r.k_route_gap.into(),
            expected: r
                .expected
                .iter()
                .map(|e| (e.quantity.to_string(), Num(e.value)))
                .collect(),
            igc_error: r.igc_error.clone(),
            generated_unix: None,
        }
    }
}

/// One time-series row in [`SERIES_HEADER`] order.
pub fn series_row(r: &ComplexityReport, i: usize) -> [f64; 14] {
    let s = &r.trajectory.samples()[i];
    let [c0, c1] = s.state.amplitudes();
    let a = s.bloch.vec();
    [
        s.t,
        c0.re,
        c0.im,
        c1.re,
        c1.im,
        a.x,
        a.y,
        a.z,
        s.angles.theta,
        s.angles.phi,
        s.delta_e,
        r.k_series[i],
        r.v_series.get(i).copied().unwrap_or(f64::NAN),
        r.kappa_sq[i].unwrap_or(f64::NAN),
    ]
}

/// Time series as CSV followed by a single `# summary: {json}` line.
pub fn write_series_csv<W: Write>(w: W, r: &ComplexityReport, summary: &Summary) -> io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SERIES_HEADER)?;
    for i in 0..r.trajectory.len() {
        wr.write_record(series_row(r, i).iter().map(|x| fmt_f64(*x)))?;
    }
    let mut w = wr.into_inner().map_err(|e| e.into_error())?;
    writeln!(
        w,
        "{SUMMARY_PREFIX}{}",
        serde_json::to_string(summary).map_err(io::Error::other)?
    )?;
    w.flush()
}

#[derive(Serialize)]
struct SeriesJson<'a> {
    summary: &'a Summary,
    columns: [&'static str; 14],
    rows: Vec<[Num; 14]>,
}

/// Summary plus the series as rows of numbers.
pub fn write_series_json<W: Write>(
    mut w: W,
    r: &ComplexityReport,
    summary: &Summary,
) -> io::Result<()> {
    let rows = (0..r.trajectory.len())
        .map(|i| series_row(r, i).map(Num))
        .collect();
    let doc = SeriesJson {
        summary,
        columns: SERIES_HEADER,
        rows,
    };
    serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::other)?;
    writeln!(w)?;
    w.flush()
}

/// One sweep row in [`SWEEP_HEADER`] order.
pub fn sweep_row(value: f64, r: &ComplexityReport) -> [f64; 8] {
    [
        value,
        r.avg_k,
        r.c_igc,
        r.eta_ge,
        r.s,
        r.l_c.unwrap_or(f64::NAN),
        r.kappa_sq_t0().unwrap_or(f64::NAN),
        r.sup_k,
    ]
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[[f64; 8]]) -> io::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(SWEEP_HEADER)?;
    for row in rows {
        wr.write_record(row.iter().map(|x| fmt_f64(*x)))?;
    }
    wr.flush()
}

#[derive(Serialize)]
struct SweepJson {
    columns: [&'static str; 8],
    rows: Vec<[Num; 8]>,
}

pub fn write_sweep_json<W: Write>(mut w: W, rows: &[[f64; 8]]) -> io::Result<()> {
    let doc = SweepJson {
        columns: SWEEP_HEADER,
        rows: rows.iter().map(|r| r.map(Num)).collect(),
    };
    serde_json::to_writer_pretty(&mut w, &doc).map_err(io::Error::other)?;
    writeln!(w)?;
    w.flush()
}
