//! Compile an [`IlpModel`] into pure-boolean integer rows.
//!
//! Continuous variables must be defined by an equality over booleans (the
//! hop-delay rows). They are substituted away; their values are recomputed
//! from the definition once the booleans are fixed. Every remaining row is
//! scaled to integer coefficients and normalized to `sum(a * x) <= b`.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::SolveError;
use crate::ilp::{IlpModel, Sense, VarKind};
use crate::num::Rational;

#[derive(Debug, Clone)]
pub(crate) struct IntRow {
    pub terms: Vec<(i64, usize)>,
    pub rhs: i64,
}

/// `var = constant + sum(coeff * binary)`.
#[derive(Debug, Clone)]
pub(crate) struct Definition {
    pub var: usize,
    pub constant: Rational,
    pub terms: Vec<(Rational, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub n: usize,
    pub binary: Vec<bool>,
    pub rows: Vec<IntRow>,
    /// Objective in scaled integer units: `(sum(obj) + obj_const) / obj_scale`.
    pub obj: Vec<(i64, usize)>,
    pub obj_const: i64,
    pub obj_scale: i64,
    pub defs: Vec<Definition>,
    /// A row with no variables is violated.
    pub trivially_infeasible: bool,
}

type Expr = BTreeMap<usize, Rational>;

fn add_term(expr: &mut Expr, var: usize, coeff: Rational) {
    let entry = expr.entry(var).or_insert_with(Rational::zero);
    *entry += coeff;
    if entry.is_zero() {
        expr.remove(&var);
    }
}

fn integerize(expr: &Expr, rhs: Rational) -> Result<(Vec<(i64, usize)>, i64), SolveError> {
    let mut scale: i64 = *rhs.denom();
    for c in expr.values() {
        scale = num_integer::lcm(scale, *c.denom());
    }
    let s = Rational::from_integer(scale);
    let to_int = |r: Rational| -> Result<i64, SolveError> {
        let v = r * s;
        debug_assert!(v.is_integer());
        Ok(v.to_integer())
    };
    let terms = expr.iter().map(|(&v, &c)| Ok((to_int(c)?, v))).collect::<Result<Vec<_>, SolveError>>()?;
    Ok((terms, to_int(rhs)?))
}

impl Compiled {
    pub fn new(model: &IlpModel) -> Result<Self, SolveError> {
        model.check_integrity().map_err(SolveError::Integrity)?;
        let n = model.vars.len();
        let binary: Vec<bool> = model.vars.kinds().iter().map(|k| matches!(k, VarKind::Binary)).collect();

        // Pick one defining equality per continuous variable.
        let mut def_row: BTreeMap<usize, usize> = BTreeMap::new();
        for var in (0..n).filter(|&v| !binary[v]) {
            let found = model.constraints.iter().enumerate().find(|(i, c)| {
                c.sense == Sense::Eq
                    && !def_row.values().any(|r| r == i)
                    && c.terms.iter().filter(|(_, v)| v.0 == var).count() == 1
                    && c.terms.iter().all(|(coef, v)| v.0 == var && !coef.is_zero() || binary[v.0])
            });
            match found {
                Some((i, _)) => {
                    def_row.insert(var, i);
                }
                None => {
                    return Err(SolveError::Unsupported(format!(
                        "continuous variable {} has no defining equality over booleans",
                        model.vars.name(crate::ilp::VarId(var))
                    )))
                }
            }
        }
        let mut defs = Vec::new();
        let mut def_of: BTreeMap<usize, usize> = BTreeMap::new();
        for (&var, &row) in &def_row {
            let c = &model.constraints[row];
            let a = c.terms.iter().find(|(_, v)| v.0 == var).map(|(a, _)| *a).expect("var in row");
            let mut terms: Expr = Expr::new();
            for (coef, v) in &c.terms {
                if v.0 != var {
                    add_term(&mut terms, v.0, -coef / a);
                }
            }
            def_of.insert(var, defs.len());
            defs.push(Definition { var, constant: c.rhs / a, terms: terms.into_iter().map(|(v, c)| (c, v)).collect() });
        }

        let substitute = |terms: &[(Rational, crate::ilp::VarId)]| -> (Expr, Rational) {
            let mut expr = Expr::new();
            let mut constant = Rational::zero();
            for (coef, v) in terms {
                match def_of.get(&v.0) {
                    Some(&d) => {
                        let def = &defs[d];
                        constant += coef * def.constant;
                        for (c2, x) in &def.terms {
                            add_term(&mut expr, *x, coef * c2);
                        }
                    }
                    None => add_term(&mut expr, v.0, *coef),
                }
            }
            (expr, constant)
        };

        let mut rows = Vec::new();
        let mut trivially_infeasible = false;
        let mut push = |expr: &Expr, sense: Sense, rhs: Rational| -> Result<(), SolveError> {
            if expr.is_empty() {
                if !sense.holds(Rational::zero(), rhs) {
                    trivially_infeasible = true;
                }
                return Ok(());
            }
            let (terms, b) = integerize(expr, rhs)?;
            if matches!(sense, Sense::Le | Sense::Eq) {
                rows.push(IntRow { terms: terms.clone(), rhs: b });
            }
            if matches!(sense, Sense::Ge | Sense::Eq) {
                rows.push(IntRow { terms: terms.iter().map(|&(a, v)| (-a, v)).collect(), rhs: -b });
            }
            Ok(())
        };
        for (i, c) in model.constraints.iter().enumerate() {
            if def_row.values().any(|&r| r == i) {
                continue;
            }
            let (expr, constant) = substitute(&c.terms);
            push(&expr, c.sense, c.rhs - constant)?;
        }
        for def in &defs {
            if let VarKind::Continuous { lower } = &model.vars.kinds()[def.var] {
                let expr: Expr = def.terms.iter().map(|&(c, v)| (v, c)).collect();
                push(&expr, Sense::Ge, lower - def.constant)?;
            }
        }

        let (obj_expr, obj_constant) = substitute(&model.objective);
        let mut obj_scale: i64 = *obj_constant.denom();
        for c in obj_expr.values() {
            obj_scale = num_integer::lcm(obj_scale, *c.denom());
        }
        let s = Rational::from_integer(obj_scale);
        let obj = obj_expr.iter().map(|(&v, &c)| ((c * s).to_integer(), v)).collect();
        let obj_const = (obj_constant * s).to_integer();

        Ok(Compiled { n, binary, rows, obj, obj_const, obj_scale, defs, trivially_infeasible })
    }

    /// Full assignment (continuous values included) from boolean values.
    pub fn expand(&self, bits: &[i8]) -> Vec<Rational> {
        let mut values: Vec<Rational> =
            bits.iter().map(|&b| Rational::from_integer(if b == 1 { 1 } else { 0 })).collect();
        for def in &self.defs {
            let mut v = def.constant;
            for (c, x) in &def.terms {
                v += c * values[*x];
            }
            values[def.var] = v;
        }
        values
    }

    pub fn objective_of(&self, scaled: i64) -> Rational {
        Rational::new(scaled, self.obj_scale)
    }
}
