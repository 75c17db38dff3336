//! CPLEX LP text format export and plain solution-file import.
//!
//! The writer emits, in this order and one item per line:
//!
//! ```text
//! \ deround model
//! Maximize | Minimize
//!  obj: <terms>
//! Subject To
//!  <row name>: <terms> <= | = | >= <rhs>      (one line per row, model order)
//! Bounds                                      (only if some bound is non-default)
//!  <bound line>                               (one per variable whose bounds differ from [0, +inf))
//! General                                     (only if non-binary integers exist)
//!  <name>
//! Binary                                      (only if integers with bounds [0, 1] exist)
//!  <name>
//! End
//! ```
//!
//! Terms are written as `c name` for the first and ` + c name` / ` - c name`
//! afterwards, with coefficients in Rust's shortest round-trip float form.
//! Binary variables appear only in the `Binary` section, never under `Bounds`.
//!
//! A solution file holds one `name value` pair per line; blank lines and lines
//! starting with `#` are ignored and unlisted variables read as zero.

use super::{LinearProgram, LpError, LpSolution, LpStatus, Sense};
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub fn export_model(lp: &LinearProgram, path: impl AsRef<Path>) -> Result<(), LpError> {
    let mut out = BufWriter::new(File::create(path)?);
    write_model(lp, &mut out)?;
    out.flush()?;
    Ok(())
}

fn write_terms<W: Write>(out: &mut W, lp: &LinearProgram, terms: &[(usize, f64)]) -> std::io::Result<()> {
    for (k, &(j, c)) in terms.iter().enumerate() {
        let name = &lp.vars[j].name;
        if k == 0 {
            write!(out, " {} {}", c, name)?;
        } else if c < 0.0 {
            write!(out, " - {} {}", -c, name)?;
        } else {
            write!(out, " + {} {}", c, name)?;
        }
    }
    Ok(())
}

fn is_binary(v: &super::Variable) -> bool {
    v.integer && v.lower == 0.0 && v.upper == 1.0
}

fn fmt_bound(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{}", v)
    }
}

pub fn write_model<W: Write>(lp: &LinearProgram, out: &mut W) -> Result<(), LpError> {
    lp.validate()?;
    writeln!(out, "\\ deround model")?;
    writeln!(
        out,
        "{}",
        match lp.sense {
            Sense::Maximize => "Maximize",
            Sense::Minimize => "Minimize",
        }
    )?;
    write!(out, " obj:")?;
    let obj: Vec<(usize, f64)> = lp
        .vars
        .iter()
        .enumerate()
        .filter(|(_, v)| v.objective != 0.0)
        .map(|(j, v)| (j, v.objective))
        .collect();
    if obj.is_empty() && !lp.vars.is_empty() {
        write!(out, " 0 {}", lp.vars[0].name)?;
    }
    write_terms(out, lp, &obj)?;
    writeln!(out)?;
    writeln!(out, "Subject To")?;
    for (i, row) in lp.rows.iter().enumerate() {
        if row.name.is_empty() {
            write!(out, " c{}:", i)?;
        } else {
            write!(out, " {}:", row.name)?;
        }
        if row.terms.is_empty() {
            write!(out, " 0 {}", lp.vars[0].name)?;
        }
        write_terms(out, lp, &row.terms)?;
        writeln!(out, " {} {}", row.relation, row.rhs)?;
    }
    let bounded: Vec<&super::Variable> = lp
        .vars
        .iter()
        .filter(|v| !is_binary(v) && !(v.lower == 0.0 && v.upper == f64::INFINITY))
        .collect();
    if !bounded.is_empty() {
        writeln!(out, "Bounds")?;
        for v in bounded {
            if v.lower == f64::NEG_INFINITY && v.upper == f64::INFINITY {
                writeln!(out, " {} free", v.name)?;
            } else if v.lower == v.upper {
                writeln!(out, " {} = {}", v.name, v.lower)?;
            } else {
                writeln!(out, " {} <= {} <= {}", fmt_bound(v.lower), v.name, fmt_bound(v.upper))?;
            }
        }
    }
    let general: Vec<&str> = lp.vars.iter().filter(|v| v.integer && !is_binary(v)).map(|v| v.name.as_str()).collect();
    if !general.is_empty() {
        writeln!(out, "General")?;
        for name in general {
            writeln!(out, " {}", name)?;
        }
    }
    let binary: Vec<&str> = lp.vars.iter().filter(|v| is_binary(v)).map(|v| v.name.as_str()).collect();
    if !binary.is_empty() {
        writeln!(out, "Binary")?;
        for name in binary {
            writeln!(out, " {}", name)?;
        }
    }
    writeln!(out, "End")?;
    Ok(())
}

/// Reads a `name value` solution file for `lp`. The status is `Optimal` when
/// the point is feasible within 1e-6 and `Infeasible` otherwise; optimality
/// itself is the external solver's claim.
pub fn import_solution(lp: &LinearProgram, path: impl AsRef<Path>) -> Result<LpSolution, LpError> {
    read_solution(lp, BufReader::new(File::open(path)?))
}

pub fn read_solution<R: BufRead>(lp: &LinearProgram, reader: R) -> Result<LpSolution, LpError> {
    let index: HashMap<&str, usize> = lp.vars.iter().enumerate().map(|(j, v)| (v.name.as_str(), j)).collect();
    let mut values = vec![0.0; lp.num_vars()];
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let (Some(name), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(LpError::Parse {
                line: k + 1,
                message: format!("expected `name value`, got `{}`", trimmed),
            });
        };
        let value: f64 = value.parse().map_err(|_| LpError::Parse {
            line: k + 1,
            message: format!("`{}` is not a number", value),
        })?;
        let &j = index.get(name).ok_or_else(|| LpError::UnknownVariable(name.to_string()))?;
        values[j] = value;
    }
    let status = if lp.is_feasible(&values, 1e-6) {
        LpStatus::Optimal
    } else {
        LpStatus::Infeasible
    };
    Ok(LpSolution {
        status,
        objective_value: lp.objective_value(&values),
        values,
    })
}
