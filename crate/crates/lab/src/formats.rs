//! Plain-text file formats for truth tables, spectra and distributions.

use std::path::Path;

use qnoise_core::boolean::{BooleanFunction, FourierExpansion};
use qnoise_core::gibbs::{HamiltonianDecomposition, SpinDistribution};
use qnoise_core::WeightSpectrum;

use crate::error::{LabError, LabResult};
use crate::table::format_real;

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ASCII output")
}

fn write_pairs<I: IntoIterator<Item = (String, String)>>(header: [&str; 2], rows: I) -> String {
    let mut w = csv_writer();
    w.write_record(header).expect("in-memory write");
    for (a, b) in rows {
        w.write_record([a, b]).expect("in-memory write");
    }
    finish(w)
}

/// `height,weight` rows.
pub fn spectrum_csv(ws: &WeightSpectrum) -> String {
    write_pairs(["height", "weight"], ws.w.iter().enumerate().map(|(k, w)| (k.to_string(), format_real(*w))))
}

/// `k,W_k` rows.
pub fn level_weights_csv(e: &FourierExpansion) -> String {
    write_pairs(["k", "W_k"], e.level_weights().iter().enumerate().map(|(k, w)| (k.to_string(), format_real(*w))))
}

/// `mask,value` rows for every subset.
pub fn fourier_coefficients_csv(e: &FourierExpansion) -> String {
    write_pairs(["mask", "value"], e.coefficients().iter().enumerate().map(|(s, c)| (s.to_string(), format_real(*c))))
}

/// `bitmask,probability` rows.
pub fn distribution_csv(mu: &SpinDistribution) -> String {
    write_pairs(
        ["bitmask", "probability"],
        mu.probabilities().iter().enumerate().map(|(x, p)| (x.to_string(), format_real(*p))),
    )
}

/// `mask,degree,coefficient` rows, constant term omitted.
pub fn decomposition_csv(h: &HamiltonianDecomposition) -> String {
    let mut w = csv_writer();
    w.write_record(["mask", "degree", "coefficient"]).expect("in-memory write");
    for (s, c) in h.coefficients().iter().enumerate().skip(1) {
        w.write_record([s.to_string(), s.count_ones().to_string(), format_real(*c)]).expect("in-memory write");
    }
    finish(w)
}

fn parse_rows(text: &str, width: usize) -> LabResult<Vec<Vec<String>>> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != width {
            return Err(LabError::Format(format!("expected {width} fields, found {}", rec.len())));
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok(rows)
}

fn parse_num<T: std::str::FromStr>(s: &str) -> LabResult<T> {
    s.trim().parse().map_err(|_| LabError::Format(format!("cannot parse `{s}`")))
}

/// Reads `bitmask,probability` rows. Every bitmask must appear once.
pub fn parse_distribution(text: &str) -> LabResult<SpinDistribution> {
    let rows = parse_rows(text, 2)?;
    let len = rows.len();
    if !len.is_power_of_two() {
        return Err(LabError::Format(format!("{len} rows is not a power of two")));
    }
    let mut probs = vec![f64::NAN; len];
    for row in rows {
        let x: usize = parse_num(&row[0])?;
        if x >= len || !probs[x].is_nan() {
            return Err(LabError::Format(format!("bitmask {x} out of range or repeated")));
        }
        probs[x] = parse_num(&row[1])?;
    }
    Ok(SpinDistribution::new(len.trailing_zeros() as usize, probs)?)
}

pub fn read_truth_table(path: &Path, n: usize) -> LabResult<BooleanFunction> {
    Ok(BooleanFunction::from_hex(n, &std::fs::read_to_string(path)?)?)
}

pub fn write_truth_table(path: &Path, f: &BooleanFunction) -> LabResult<()> {
    std::fs::write(path, format!("{}\n", f.to_hex()))?;
    Ok(())
}
