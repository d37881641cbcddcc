//! Versioned text serialization of [`GridFunction`].
//!
//! ```text
//! # binary-euclid grid function
//! version 1
//! z_max 11
//! level 12
//! precision_bits 200
//! interpolation_r 4
//! iterations 23
//! converged true
//! last_change 3.1e-15
//! points 4097
//! <z_0> <value_0>
//! …
//! ```
//! Numbers are written with enough digits to read back bit-exactly at `precision_bits`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{Grid, GridFunction};
use crate::error::{Error, Result};
use crate::real::BigReal;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "# binary-euclid grid function";
const HEADER_KEYS: [&str; 9] = [
    "version",
    "z_max",
    "level",
    "precision_bits",
    "interpolation_r",
    "iterations",
    "converged",
    "last_change",
    "points",
];

pub fn write_grid_function<W: Write>(f: &GridFunction, mut out: W) -> Result<()> {
    writeln!(out, "{MAGIC}")?;
    writeln!(out, "version {FORMAT_VERSION}")?;
    writeln!(out, "z_max {}", f.grid.z_max.to_exact_string())?;
    writeln!(out, "level {}", f.grid.level)?;
    writeln!(out, "precision_bits {}", f.grid.prec())?;
    writeln!(out, "interpolation_r {}", f.r)?;
    writeln!(out, "iterations {}", f.iterations)?;
    writeln!(out, "converged {}", f.converged)?;
    match f.last_change {
        Some(c) => writeln!(out, "last_change {c:e}")?,
        None => writeln!(out, "last_change none")?,
    }
    writeln!(out, "points {}", f.values.len())?;
    for (i, v) in f.values.iter().enumerate() {
        writeln!(out, "{} {}", f.grid.z(i).to_exact_string(), v.to_exact_string())?;
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn read_grid_function<R: BufRead>(input: R) -> Result<GridFunction> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| bad("empty input"))??;
    if first.trim() != MAGIC {
        return Err(bad("missing grid function header"));
    }
    let mut header = HashMap::new();
    for key in HEADER_KEYS {
        let line = lines.next().ok_or_else(|| bad(format!("missing header field {key}")))??;
        let (k, v) = line.trim().split_once(' ').ok_or_else(|| bad(format!("malformed header line {line:?}")))?;
        if k != key {
            return Err(bad(format!("expected header field {key}, found {k}")));
        }
        header.insert(key, v.trim().to_string());
    }
    let int = |key: &str| -> Result<u64> {
        header[key].parse().map_err(|_| bad(format!("field {key} is not an integer")))
    };
    let version = int("version")?;
    if version != FORMAT_VERSION as u64 {
        return Err(bad(format!("unsupported format version {version}")));
    }
    let prec = int("precision_bits")? as u32;
    let z_max = BigReal::parse(prec, &header["z_max"]).ok_or_else(|| bad("z_max"))?;
    let grid = Grid::new(z_max, int("level")? as u32)?;
    let r = int("interpolation_r")? as usize;
    let points = int("points")? as usize;
    if points != grid.intervals() + 1 {
        return Err(bad(format!("{points} points do not match level {}", grid.level)));
    }
    let converged = match header["converged"].as_str() {
        "true" => true,
        "false" => false,
        other => return Err(bad(format!("converged must be true or false, got {other}"))),
    };
    let last_change = match header["last_change"].as_str() {
        "none" => None,
        s => Some(s.parse().map_err(|_| bad("last_change"))?),
    };

    let mut values = Vec::with_capacity(points);
    for i in 0..points {
        let line = lines.next().ok_or_else(|| bad(format!("missing data line {i}")))??;
        let mut parts = line.split_whitespace();
        let (Some(zs), Some(vs), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad(format!("data line {i} must hold two numbers")));
        };
        let z = BigReal::parse(prec, zs).ok_or_else(|| bad(format!("bad z on line {i}")))?;
        if z != grid.z(i) {
            return Err(bad(format!("z on data line {i} is not the grid node")));
        }
        values.push(BigReal::parse(prec, vs).ok_or_else(|| bad(format!("bad value on line {i}")))?);
    }
    Ok(GridFunction {
        grid,
        r,
        values,
        iterations: int("iterations")? as usize,
        last_change,
        converged,
    })
}
