//! CSV artifacts. Floats are written in their shortest round-trip form.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use heavyball::Trace;
use serde::Serialize;

use crate::error::{io_err, Result};

pub const TRACE_HEADER: &str = "k,f_gap,cesaro_gap,best_gap,grad_norm,dist,alpha_k,beta_k";

/// Serializes `rows` with a header derived from their field names.
pub fn write_rows<W: Write, T: Serialize>(sink: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn trace_csv_string(trace: &Trace) -> Result<String> {
    let mut buf = Vec::new();
    write_rows(&mut buf, &trace.records)?;
    if trace.records.is_empty() {
        buf = format!("{TRACE_HEADER}\n").into_bytes();
    }
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn write_trace_csv(path: &Path, trace: &Trace) -> Result<()> {
    let text = trace_csv_string(trace)?;
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn write_rows_to(path: &Path, rows: &[impl Serialize]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    write_rows(file, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use heavyball::objectives::{make_moreau, MoreauEnvelopeSpec};
    use heavyball::{run, MethodConfig, RunSpec};

    fn trace() -> Trace {
        let oracle = make_moreau(MoreauEnvelopeSpec { c: 5.0, n: 3 }).unwrap();
        run(
            &oracle,
            &MethodConfig::HeavyBall {
                alpha: 0.7,
                beta: 0.2,
            },
            &RunSpec::new(vec![1.0, -0.5, 0.3], 50),
        )
        .unwrap()
    }

    #[test]
    fn header_and_round_trip() {
        let t = trace();
        let text = trace_csv_string(&t).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(TRACE_HEADER));
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        for (row, rec) in reader.records().zip(&t.records) {
            let row = row.unwrap();
            assert_eq!(row[0].parse::<usize>().unwrap(), rec.k);
            let vals = [
                rec.f_gap,
                rec.cesaro_gap,
                rec.best_gap,
                rec.grad_norm,
                rec.dist,
                rec.alpha_k,
                rec.beta_k,
            ];
            for (i, v) in vals.iter().enumerate() {
                assert_eq!(row[i + 1].parse::<f64>().unwrap().to_bits(), v.to_bits());
            }
        }
    }

    #[test]
    fn deterministic_bytes() {
        assert_eq!(
            trace_csv_string(&trace()).unwrap(),
            trace_csv_string(&trace()).unwrap()
        );
    }
}
