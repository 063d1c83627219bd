use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

/// Parses `START:END:COUNT` into `COUNT` evenly spaced values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure::usage(format!("grid must be START:END:COUNT, got {spec:?}"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let end: f64 = end.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || !start.is_finite() || !end.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (end - start) / (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { end } else { start + step * i as f64 }).collect())
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::io(format!("cannot create {}: {e}", path.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(Failure::io)?;
    writeln!(w).map_err(Failure::io)?;
    w.flush().map_err(Failure::io)
}

/// Header plus rows, every field already formatted.
pub fn write_csv(header: &[&str], rows: &[Vec<String>], out: Option<&Path>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(header).map_err(Failure::io)?;
    for row in rows {
        w.write_record(row).map_err(Failure::io)?;
    }
    w.flush().map_err(Failure::io)
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
