//! Writer for the LP text format read by common MILP solvers.
//!
//! Constraint names are `<tag>_<n>` (tag with `-` mapped to `_`, `n` counting
//! per family), variables use their [`super::VarKey`] display names.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{IlpModel, Rational, VarKind};
use crate::num::format_decimal_lossy;

const TERMS_PER_LINE: usize = 8;

fn write_expr(out: &mut String, model: &IlpModel, terms: &[(Rational, super::VarId)]) {
    if terms.is_empty() {
        // An empty expression still needs one term to parse.
        if model.vars.is_empty() {
            return;
        }
        let _ = write!(out, " 0 {}", model.vars.name(super::VarId(0)));
        return;
    }
    for (i, (coeff, var)) in terms.iter().enumerate() {
        if i > 0 && i % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let negative = *coeff < Rational::from_integer(0);
        let magnitude = if negative { -coeff } else { *coeff };
        let sign = if negative {
            "-"
        } else if i == 0 {
            ""
        } else {
            "+"
        };
        let name = model.vars.name(*var);
        if !sign.is_empty() {
            let _ = write!(out, " {sign}");
        }
        if magnitude == Rational::from_integer(1) {
            let _ = write!(out, " {name}");
        } else {
            let _ = write!(out, " {} {name}", format_decimal_lossy(&magnitude));
        }
    }
}

/// Serialize a model. Output is a pure function of the model.
pub fn write_lp(model: &IlpModel) -> String {
    let stats = model.stats();
    let mut out = String::new();
    let _ = writeln!(out, "\\ sfc-placer model: {} variables, {} constraints", stats.variables, stats.constraints);
    out.push_str("Minimize\n obj:");
    write_expr(&mut out, model, &model.objective);
    out.push_str("\nSubject To\n");
    let mut counters: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &model.constraints {
        let tag = c.tag.as_str();
        let n = counters.entry(tag).or_insert(0);
        let _ = write!(out, " {}_{}:", tag.replace('-', "_"), n);
        *n += 1;
        write_expr(&mut out, model, &c.terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), format_decimal_lossy(&c.rhs));
    }

    let mut bounds = String::new();
    let mut binaries = Vec::new();
    for (i, kind) in model.vars.kinds().iter().enumerate() {
        let name = model.vars.name(super::VarId(i));
        match kind {
            VarKind::Binary => binaries.push(name),
            VarKind::Continuous { lower } => {
                let _ = writeln!(bounds, " {name} >= {}", format_decimal_lossy(lower));
            }
        }
    }
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        out.push_str(&bounds);
    }
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}
