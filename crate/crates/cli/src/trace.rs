use std::fmt::Display;

use weylks_core::certificate::{AssignmentSystem, ContradictionWitness, ValueRef};
use weylks_core::{Certificate, PhaseExp};

/// `1`, `-1`, `i`, `-i`, or `exp(i*pi*q)`.
pub fn phase_text(p: &PhaseExp) -> String {
    match p.to_string().as_str() {
        "0" => "1".into(),
        "1" => "-1".into(),
        "1/2" => "i".into(),
        "3/2" => "-i".into(),
        q => format!("exp(i*pi*{q})"),
    }
}

fn row_text<T: Display>(row: &[T]) -> String {
    let mut out = String::new();
    for (c, k) in row.iter().enumerate() {
        let k = k.to_string();
        if k == "0" {
            continue;
        }
        let (sign, mag) = match k.strip_prefix('-') {
            Some(m) => ("-", m.to_string()),
            None => ("+", k),
        };
        let coeff = if mag == "1" { String::new() } else { mag };
        if out.is_empty() {
            out.push_str(if sign == "-" { "-" } else { "" });
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&format!("{coeff}y{}", c + 1));
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// One line per context: the product rule instance and its compiled row.
pub fn context_lines(cert: &Certificate, sys: &AssignmentSystem) -> Vec<String> {
    sys.rows
        .iter()
        .zip(&sys.e)
        .map(|(row, e)| {
            let lhs: String = cert.contexts()[row.context]
                .members
                .iter()
                .map(|id| format!("[{}]", cert.monomials()[id]))
                .collect();
            let rhs = if row.product.is_scalar() {
                phase_text(row.product.phase())
            } else {
                format!("[{}]", row.product)
            };
            format!(
                "C{}: {lhs} = {rhs}    ({} = {} mod 2)",
                row.context + 1,
                row_text(e),
                row.phi
            )
        })
        .collect()
}

pub fn unknown_lines(sys: &AssignmentSystem) -> Vec<String> {
    sys.unknowns
        .iter()
        .enumerate()
        .map(|(c, m)| format!("v{0} = [{m}] = exp(i*pi*y{0})", c + 1))
        .collect()
}

pub fn class_lines(sys: &AssignmentSystem) -> Vec<String> {
    sys.refs
        .iter()
        .map(|(id, r)| match r {
            ValueRef::Scalar(p) => format!("[{id}] = {}", phase_text(p)),
            ValueRef::Class {
                column,
                sign,
                phase,
            } => {
                let pre = if phase.is_one() {
                    String::new()
                } else {
                    format!("{} * ", phase_text(phase))
                };
                let sign = if *sign < 0 { "^-1" } else { "" };
                format!("[{id}] = {pre}v{}{sign}", column + 1)
            }
        })
        .collect()
}

pub fn witness_line(w: &ContradictionWitness) -> String {
    let t: Vec<String> = w.t.iter().map(|x| x.to_string()).collect();
    format!(
        "t = ({}): unknowns cancel, phases sum to {} mod 2, so 1 = [I] = {}",
        t.join(", "),
        w.accumulated_phase,
        phase_text(&w.accumulated_phase)
    )
}
