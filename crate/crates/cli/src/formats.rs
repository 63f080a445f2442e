//! Text, CSV and JSON formats.
//!
//! QUBO text files start with a header line
//! `qubo q1=.. q2=.. l=.. rho=.. constant=.. variant=..` followed by `q1`
//! rows of `q1` whitespace-separated integers (the full square matrix, zero
//! below the diagonal). Lines starting with `#` are ignored.

use std::io::{Read, Write};

use cwc_gas_core::circuit::{Gate, GateList};
use cwc_gas_core::code::BitMatrix;
use cwc_gas_core::qubo::{QuboProblem, Variant};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn write_matrix(m: &BitMatrix) -> String {
    m.to_string()
}

pub fn read_matrix(text: &str) -> Result<BitMatrix> {
    let rows: Vec<&str> = content_lines(text).collect();
    Ok(BitMatrix::from_strs(&rows)?)
}

/// Assignment written as a `0`/`1` string with `x_0` first.
pub fn read_assignment(text: &str) -> Result<Vec<bool>> {
    let line = content_lines(text).next().ok_or_else(|| CliError::Format("empty assignment file".into()))?;
    line.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(CliError::Format(format!("unexpected character {c:?} in assignment"))),
        })
        .collect()
}

pub fn write_assignment(x: &[bool]) -> String {
    let mut s: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
    s.push('\n');
    s
}

pub fn write_qubo(q: &QuboProblem) -> String {
    let mut out = format!(
        "qubo q1={} q2={} l={} rho={} constant={} variant={}\n",
        q.q1, q.q2, q.l, q.rho, q.constant, q.variant
    );
    for r in 0..q.q1 {
        let row: Vec<String> = (0..q.q1).map(|c| q.get(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_qubo(text: &str) -> Result<QuboProblem> {
    let mut lines = content_lines(text);
    let header = lines.next().ok_or_else(|| CliError::Format("empty QUBO file".into()))?;
    let mut fields = header.split_whitespace();
    if fields.next() != Some("qubo") {
        return Err(CliError::Format("QUBO header must start with `qubo`".into()));
    }
    let (mut q1, mut q2, mut l, mut rho, mut constant, mut variant) = (None, None, 0, 0, 0, Variant::Custom);
    for field in fields {
        let (key, value) =
            field.split_once('=').ok_or_else(|| CliError::Format(format!("bad header field {field:?}")))?;
        let int = |v: &str| v.parse::<i64>().map_err(|_| CliError::Format(format!("bad integer in {field:?}")));
        match key {
            "q1" => q1 = Some(int(value)? as usize),
            "q2" => q2 = Some(int(value)? as u32),
            "l" => l = int(value)? as u32,
            "rho" => rho = int(value)?,
            "constant" => constant = int(value)?,
            "variant" => {
                variant = Variant::parse(value).ok_or_else(|| CliError::Format(format!("unknown variant {value:?}")))?
            }
            _ => return Err(CliError::Format(format!("unknown header field {key:?}"))),
        }
    }
    let q1 = q1.ok_or_else(|| CliError::Format("header is missing q1".into()))?;
    let q2 = q2.ok_or_else(|| CliError::Format("header is missing q2".into()))?;
    let mut coeffs = Vec::with_capacity(q1 * q1);
    for (r, line) in lines.by_ref().take(q1).enumerate() {
        let row = line
            .split_whitespace()
            .map(|v| v.parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CliError::Format(format!("bad integer in row {r}")))?;
        if row.len() != q1 {
            return Err(CliError::Format(format!("row {r} has {} entries, expected {q1}", row.len())));
        }
        coeffs.extend(row);
    }
    if coeffs.len() != q1 * q1 {
        return Err(CliError::Format(format!("expected {q1} matrix rows")));
    }
    if lines.next().is_some() {
        return Err(CliError::Format("trailing data after the matrix".into()));
    }
    Ok(QuboProblem::from_dense(q1, coeffs, constant, l, rho, q2, variant)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub query_index: u64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub queries: u64,
    pub cdf: f64,
}

fn write_rows<W: Write, T: Serialize>(w: W, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn read_rows<R: Read, T: for<'de> Deserialize<'de>>(r: R) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_reader(r);
    Ok(reader.deserialize().collect::<std::result::Result<Vec<T>, _>>()?)
}

/// `query_index,value` rows.
pub fn write_curve_csv<W: Write>(w: W, curve: &[(u64, f64)]) -> Result<()> {
    write_rows(w, curve.iter().map(|&(query_index, value)| CurvePoint { query_index, value }))
}

pub fn read_curve_csv<R: Read>(r: R) -> Result<Vec<(u64, f64)>> {
    Ok(read_rows::<_, CurvePoint>(r)?.into_iter().map(|p| (p.query_index, p.value)).collect())
}

/// `queries,cdf` rows.
pub fn write_cdf_csv<W: Write>(w: W, cdf: &[(u64, f64)]) -> Result<()> {
    write_rows(w, cdf.iter().map(|&(queries, cdf)| CdfPoint { queries, cdf }))
}

pub fn read_cdf_csv<R: Read>(r: R) -> Result<Vec<(u64, f64)>> {
    Ok(read_rows::<_, CdfPoint>(r)?.into_iter().map(|p| (p.queries, p.cdf)).collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct DistributionRow {
    assignment: String,
    probability: f64,
}

/// `assignment,probability` rows, assignments written with `x_0` first.
pub fn write_distribution_csv<W: Write>(w: W, q1: usize, dist: &[f64]) -> Result<()> {
    write_rows(
        w,
        dist.iter().enumerate().map(|(mask, &probability)| DistributionRow {
            assignment: (0..q1).map(|r| if mask >> r & 1 == 1 { '1' } else { '0' }).collect(),
            probability,
        }),
    )
}

/// One gate in the JSON dump; `turns` is the angle in units of `2 pi / 2^q2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRecord {
    pub gate: String,
    pub qubits: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub turns: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateListRecord {
    pub q1: u32,
    pub q2: u32,
    pub gates: Vec<GateRecord>,
}

pub fn gate_list_record(list: &GateList) -> GateListRecord {
    GateListRecord {
        q1: list.q1,
        q2: list.q2,
        gates: list
            .gates
            .iter()
            .map(|g: &Gate| GateRecord { gate: g.name().into(), qubits: g.qubits(list.n_qubits()), turns: g.turns() })
            .collect(),
    }
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(w: W, value: &T) -> Result<()> {
    let mut w = w;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    Ok(())
}
