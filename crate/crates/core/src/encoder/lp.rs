//! CPLEX LP text export.

use std::fmt::Write;

use super::{IpModel, LinExpr, Sense};

const LINE_WIDTH: usize = 200;

/// Writes `model` in LP format: sense, objective, `Subject To`, `Binary`, `End`.
///
/// Output is a pure function of the model, so re-exporting is byte-identical.
pub fn export_lp(model: &IpModel) -> String {
    let mut out = String::new();
    out.push_str(match model.sense {
        Sense::Maximize => "Maximize\n",
        Sense::Minimize => "Minimize\n",
    });
    out.push_str(" obj:");
    write_expr(&mut out, model, &model.objective, 5);
    out.push('\n');

    out.push_str("Subject To\n");
    for row in &model.rows {
        let name = row.kind.name();
        write!(out, " {name}:").unwrap();
        let col = write_expr(&mut out, model, &row.expr, name.len() + 2);
        if col > LINE_WIDTH {
            out.push_str("\n  ");
        }
        writeln!(out, " {} {}", row.cmp.symbol(), number(row.rhs)).unwrap();
    }

    out.push_str("Binary\n");
    for v in 0..model.var_count() {
        writeln!(out, " {}", model.var_name(v)).unwrap();
    }
    out.push_str("End\n");
    out
}

/// Appends ` c1 x1 + c2 x2 ...`, wrapping long lines; returns the final column.
fn write_expr(out: &mut String, model: &IpModel, expr: &LinExpr, mut col: usize) -> usize {
    if expr.terms.is_empty() {
        // An empty form still needs one term to be valid LP.
        let s = format!(" 0 {}", model.var_name(0));
        out.push_str(&s);
        return col + s.len();
    }
    for (k, &(v, c)) in expr.terms.iter().enumerate() {
        let mut term = String::new();
        let sign = if c < 0.0 { "-" } else { "+" };
        if k > 0 || c < 0.0 {
            write!(term, " {sign}").unwrap();
        }
        let mag = c.abs();
        if mag != 1.0 {
            write!(term, " {}", number(mag)).unwrap();
        }
        write!(term, " {}", model.var_name(v)).unwrap();
        if col + term.len() > LINE_WIDTH {
            out.push_str("\n ");
            col = 1;
        }
        col += term.len();
        out.push_str(&term);
    }
    col
}

fn number(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}
