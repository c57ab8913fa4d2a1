//! Trace CSV: `t,f,gap,eta,step_norm,h,grad_dual_norm`, one row per
//! iterate. Reals are written with 17 significant digits so they read back
//! bit for bit; `h` is empty when `f*` is unknown.

use std::io::{Read, Write};

use strongfw::IterationRecord;

use crate::CliError;

pub const HEADER: [&str; 7] = ["t", "f", "gap", "eta", "step_norm", "h", "grad_dual_norm"];

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace<W: Write>(out: W, trace: &[IterationRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in trace {
        w.write_record([
            r.t.to_string(),
            real(r.f_value),
            real(r.duality_gap),
            real(r.eta),
            real(r.step_norm),
            r.h.map(real).unwrap_or_default(),
            real(r.grad_dual_norm),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<IterationRecord>, CliError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(CliError::Usage(format!(
            "trace header {:?} does not match {:?}",
            header.iter().collect::<Vec<_>>(),
            HEADER
        )));
    }
    let parse = |s: &str, line: usize| -> Result<f64, CliError> {
        s.parse()
            .map_err(|_| CliError::Usage(format!("trace line {line}: bad number {s:?}")))
    };
    let mut out = Vec::new();
    for (i, row) in rd.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let t = row[0]
            .parse()
            .map_err(|_| CliError::Usage(format!("trace line {line}: bad t {:?}", &row[0])))?;
        out.push(IterationRecord {
            t,
            f_value: parse(&row[1], line)?,
            duality_gap: parse(&row[2], line)?,
            eta: parse(&row[3], line)?,
            step_norm: parse(&row[4], line)?,
            h: if row[5].is_empty() {
                None
            } else {
                Some(parse(&row[5], line)?)
            },
            grad_dual_norm: parse(&row[6], line)?,
        });
    }
    Ok(out)
}
