//! CSV exchange formats.
//!
//! Numbers are written with 17 significant digits so a write/read cycle
//! reproduces every `f64` exactly.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::mc::{AllocationPlan, Binding, McResult};
use crate::phasor::{ComplexPhasor, PmuSample};
use crate::sim::TrajectoryRecord;
use crate::te::TheveninEstimate;

const PMU_HEADER: [&str; 5] = ["t", "v_re", "v_im", "i_re", "i_im"];
const TE_HEADER: [&str; 7] = ["t", "r", "x", "e_re", "e_im", "held_over", "n_window"];
const MC_HEADER: [&str; 4] = ["t", "mc_power", "binding", "i_d_at_mc"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        kind => Error::Csv {
            line,
            reason: format!("{kind:?}"),
        },
    }
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn field<'a>(rec: &'a csv::StringRecord, idx: usize, name: &str) -> Result<&'a str> {
    rec.get(idx).ok_or_else(|| Error::Csv {
        line: line_of(rec),
        reason: format!("missing column `{name}`"),
    })
}

fn num(rec: &csv::StringRecord, idx: usize, name: &str) -> Result<f64> {
    let raw = field(rec, idx, name)?;
    raw.trim().parse().map_err(|_| Error::Csv {
        line: line_of(rec),
        reason: format!("`{name}` is not a number: `{raw}`"),
    })
}

fn check_header(headers: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    for (k, name) in expected.iter().enumerate() {
        if headers.get(k).map(str::trim) != Some(*name) {
            return Err(Error::Csv {
                line: 1,
                reason: format!("expected header starting `{}`", expected.join(",")),
            });
        }
    }
    Ok(())
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r)
}

/// A PMU row plus any trailing `*_true` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PmuRecord {
    pub sample: PmuSample,
    pub truth: Vec<(String, f64)>,
}

impl PmuRecord {
    /// Ground-truth column by name, with or without the `_true` suffix.
    pub fn truth(&self, name: &str) -> Option<f64> {
        let full = if name.ends_with("_true") {
            name.to_owned()
        } else {
            format!("{name}_true")
        };
        self.truth.iter().find(|(k, _)| *k == full).map(|(_, v)| *v)
    }
}

pub fn read_pmu_csv<R: Read>(r: R, terminal_id: &str) -> Result<Vec<PmuRecord>> {
    let mut rdr = reader(r);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    check_header(&headers, &PMU_HEADER)?;
    let extra: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .skip(PMU_HEADER.len())
        .map(|(k, h)| {
            if h.ends_with("_true") {
                Ok((k, h.to_owned()))
            } else {
                Err(Error::Csv {
                    line: 1,
                    reason: format!("unexpected column `{h}`; extra columns must end in `_true`"),
                })
            }
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let v = ComplexPhasor::new(num(&rec, 1, "v_re")?, num(&rec, 2, "v_im")?);
        let i = ComplexPhasor::new(num(&rec, 3, "i_re")?, num(&rec, 4, "i_im")?);
        let sample = PmuSample::new(num(&rec, 0, "t")?, v, i, terminal_id);
        let truth = extra
            .iter()
            .map(|(k, name)| Ok((name.clone(), num(&rec, *k, name)?)))
            .collect::<Result<_>>()?;
        out.push(PmuRecord { sample, truth });
    }
    Ok(out)
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::Writer::from_writer(w)
}

pub fn write_pmu_csv<W: Write>(w: W, samples: &[PmuSample]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(PMU_HEADER).map_err(csv_err)?;
    for s in samples {
        wtr.write_record([s.t, s.v.re, s.v.im, s.i.re, s.i.im].map(fmt_f64))
            .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(w: W, records: &[TrajectoryRecord]) -> Result<()> {
    let mut wtr = writer(w);
    let mut header: Vec<&str> = PMU_HEADER.to_vec();
    header.extend([
        "e_re_true",
        "e_im_true",
        "r_true",
        "x_true",
        "zd_re_true",
        "zd_im_true",
        "i_d_true",
    ]);
    wtr.write_record(&header).map_err(csv_err)?;
    for r in records {
        let s = &r.sample;
        let row = [
            s.t,
            s.v.re,
            s.v.im,
            s.i.re,
            s.i.im,
            r.e_true.re,
            r.e_true.im,
            r.z_true.re,
            r.z_true.im,
            r.z_d_true.re,
            r.z_d_true.im,
            r.i_d_true,
        ];
        wtr.write_record(row.map(fmt_f64)).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_te_csv<W: Write>(w: W, estimates: &[TheveninEstimate]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(TE_HEADER).map_err(csv_err)?;
    for e in estimates {
        let mut row: Vec<String> = [e.t, e.r, e.x, e.e.re, e.e.im].map(fmt_f64).to_vec();
        row.push(u8::from(e.held_over).to_string());
        row.push(e.n_window.to_string());
        wtr.write_record(&row).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_te_csv<R: Read>(r: R) -> Result<Vec<TheveninEstimate>> {
    let mut rdr = reader(r);
    check_header(&rdr.headers().map_err(csv_err)?.clone(), &TE_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let held_over = match field(&rec, 5, "held_over")? {
            "1" | "true" => true,
            "0" | "false" => false,
            other => {
                return Err(Error::Csv {
                    line: line_of(&rec),
                    reason: format!("`held_over` must be 0 or 1, got `{other}`"),
                })
            }
        };
        let raw = field(&rec, 6, "n_window")?;
        let n_window = raw.parse().map_err(|_| Error::Csv {
            line: line_of(&rec),
            reason: format!("`n_window` is not a count: `{raw}`"),
        })?;
        out.push(TheveninEstimate {
            t: num(&rec, 0, "t")?,
            r: num(&rec, 1, "r")?,
            x: num(&rec, 2, "x")?,
            e: ComplexPhasor::new(num(&rec, 3, "e_re")?, num(&rec, 4, "e_im")?),
            held_over,
            n_window,
        });
    }
    Ok(out)
}

/// One line of the capacity time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRow {
    pub t: f64,
    pub mc_power: f64,
    pub binding: Binding,
    pub i_d_at_mc: f64,
}

impl From<&McResult> for McRow {
    fn from(r: &McResult) -> Self {
        McRow {
            t: r.t,
            mc_power: r.mc_power,
            binding: r.binding,
            i_d_at_mc: r.i_d_at_mc,
        }
    }
}

pub fn write_mc_csv<W: Write>(w: W, rows: &[McRow]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(MC_HEADER).map_err(csv_err)?;
    for r in rows {
        wtr.write_record([
            fmt_f64(r.t),
            fmt_f64(r.mc_power),
            r.binding.to_string(),
            fmt_f64(r.i_d_at_mc),
        ])
        .map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_mc_csv<R: Read>(r: R) -> Result<Vec<McRow>> {
    let mut rdr = reader(r);
    check_header(&rdr.headers().map_err(csv_err)?.clone(), &MC_HEADER)?;
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let binding = field(&rec, 2, "binding")?
            .parse()
            .map_err(|e: Error| Error::Csv {
                line: line_of(&rec),
                reason: e.to_string(),
            })?;
        out.push(McRow {
            t: num(&rec, 0, "t")?,
            mc_power: num(&rec, 1, "mc_power")?,
            binding,
            i_d_at_mc: num(&rec, 3, "i_d_at_mc")?,
        });
    }
    Ok(out)
}

pub fn write_allocation_csv<W: Write>(w: W, plan: &AllocationPlan) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record([
        "link",
        "initial",
        "mc",
        "margin",
        "target",
        "remaining_margin",
        "shortage",
        "deficit",
    ])
    .map_err(csv_err)?;
    for (k, e) in plan.entries.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(
            [
                e.initial,
                e.mc,
                e.margin,
                e.target,
                e.mc - e.target,
                plan.shortage,
                plan.deficit,
            ]
            .map(fmt_f64),
        );
        wtr.write_record(&row).map_err(csv_err)?;
    }
    wtr.flush()?;
    Ok(())
}
