//! CSV writers with 17-significant-digit floats and LF line endings.

use std::io::{self, Write};

use crate::bounds::BoundCurve;
use crate::nvm::NvmPath;
use crate::sde::SdePath;
use crate::subordinators::JumpSeries;

/// `{:.16e}`: round-trips every f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn row<W: Write>(w: &mut W, cells: impl IntoIterator<Item = String>) -> io::Result<()> {
    let line: Vec<String> = cells.into_iter().collect();
    w.write_all(line.join(",").as_bytes())?;
    w.write_all(b"\n")
}

pub fn write_jump_series<W: Write>(w: &mut W, s: &JumpSeries) -> io::Result<()> {
    writeln!(w, "v,z")?;
    for j in &s.jumps {
        row(w, [fmt_float(j.v), fmt_float(j.z)])?;
    }
    Ok(())
}

pub fn write_nvm_path<W: Write>(w: &mut W, p: &NvmPath) -> io::Result<()> {
    writeln!(w, "v,z,x")?;
    for e in &p.events {
        row(w, [fmt_float(e.v), fmt_float(e.z), fmt_float(e.x)])?;
    }
    Ok(())
}

pub fn write_sde_path<W: Write>(w: &mut W, p: &SdePath) -> io::Result<()> {
    let dim = p.states.first().map_or(0, Vec::len);
    row(w, std::iter::once("t".to_string()).chain((1..=dim).map(|i| format!("x{i}"))))?;
    for (t, x) in p.grid.iter().zip(&p.states) {
        row(w, std::iter::once(fmt_float(*t)).chain(x.iter().map(|v| fmt_float(*v))))?;
    }
    Ok(())
}

/// `epsilon,bound,asymptotic`; the last cell is empty when there is no
/// leading term.
pub fn write_bound_curve<W: Write>(w: &mut W, c: &BoundCurve) -> io::Result<()> {
    writeln!(w, "epsilon,bound,asymptotic")?;
    for p in &c.points {
        row(w, [fmt_float(p.epsilon), fmt_float(p.bound), p.asymptotic.map(fmt_float).unwrap_or_default()])?;
    }
    Ok(())
}

pub fn write_column<W: Write>(w: &mut W, name: &str, xs: &[f64]) -> io::Result<()> {
    writeln!(w, "{name}")?;
    for &x in xs {
        writeln!(w, "{}", fmt_float(x))?;
    }
    Ok(())
}

pub fn write_pairs<W: Write>(w: &mut W, names: (&str, &str), xs: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "{},{}", names.0, names.1)?;
    for &(a, b) in xs {
        row(w, [fmt_float(a), fmt_float(b)])?;
    }
    Ok(())
}
