//! Boolean linear program for chain placement.
//!
//! [`build_model`] turns a normalized [`Scenario`] into an [`IlpModel`]: a
//! registry of variables, a list of tagged linear constraints, and a cost
//! objective. The model is solver-agnostic; [`lp_format`] writes it in the
//! common LP text format and [`decode`] maps a solved assignment back to a
//! [`crate::oracle::Placement`].

pub mod decode;
mod emit;
pub mod lp_format;
mod registry;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Scenario;
use crate::num::Rational;

pub use decode::{decode_placement, DecodeError};
pub use emit::{
    emit_delay_constraints, emit_extensions, emit_objective, emit_resource_constraints,
    emit_security_constraints, emit_vnf_vnfi_constraints, emit_vnfi_cloud_constraints,
};
pub use registry::{Layout, VarId, VarKey, VarKind, VarRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Sense {
    pub fn holds(self, lhs: Rational, rhs: Rational) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Eq => lhs == rhs,
            Sense::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// Which constraint family a row belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    Eq1,
    Eq2,
    Eq3,
    Eq5,
    Eq6,
    Eq7,
    Eq8,
    Eq9,
    Eq10,
    Eq13,
    Eq14,
    Eq15,
    Eq16,
    Eq17,
    Eq18,
    Eq19,
    Eq21,
    Eq22,
    Eq23,
    Eq24,
    Eq26,
    Eq27,
    Eq28,
    Hopdef,
    Eq32,
    Eq33,
    Conflict,
    ExtSymbreak,
    ExtBandwidth,
    ExtEndpoints,
    /// Caps the deployment cost; added only when re-solving for delay.
    ExtCostcap,
}

impl Tag {
    pub const ALL: [Tag; 31] = [
        Tag::Eq1,
        Tag::Eq2,
        Tag::Eq3,
        Tag::Eq5,
        Tag::Eq6,
        Tag::Eq7,
        Tag::Eq8,
        Tag::Eq9,
        Tag::Eq10,
        Tag::Eq13,
        Tag::Eq14,
        Tag::Eq15,
        Tag::Eq16,
        Tag::Eq17,
        Tag::Eq18,
        Tag::Eq19,
        Tag::Eq21,
        Tag::Eq22,
        Tag::Eq23,
        Tag::Eq24,
        Tag::Eq26,
        Tag::Eq27,
        Tag::Eq28,
        Tag::Hopdef,
        Tag::Eq32,
        Tag::Eq33,
        Tag::Conflict,
        Tag::ExtSymbreak,
        Tag::ExtBandwidth,
        Tag::ExtEndpoints,
        Tag::ExtCostcap,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Eq1 => "eq1",
            Tag::Eq2 => "eq2",
            Tag::Eq3 => "eq3",
            Tag::Eq5 => "eq5",
            Tag::Eq6 => "eq6",
            Tag::Eq7 => "eq7",
            Tag::Eq8 => "eq8",
            Tag::Eq9 => "eq9",
            Tag::Eq10 => "eq10",
            Tag::Eq13 => "eq13",
            Tag::Eq14 => "eq14",
            Tag::Eq15 => "eq15",
            Tag::Eq16 => "eq16",
            Tag::Eq17 => "eq17",
            Tag::Eq18 => "eq18",
            Tag::Eq19 => "eq19",
            Tag::Eq21 => "eq21",
            Tag::Eq22 => "eq22",
            Tag::Eq23 => "eq23",
            Tag::Eq24 => "eq24",
            Tag::Eq26 => "eq26",
            Tag::Eq27 => "eq27",
            Tag::Eq28 => "eq28",
            Tag::Hopdef => "hopdef",
            Tag::Eq32 => "eq32",
            Tag::Eq33 => "eq33",
            Tag::Conflict => "conflict",
            Tag::ExtSymbreak => "ext-symbreak",
            Tag::ExtBandwidth => "ext-bandwidth",
            Tag::ExtEndpoints => "ext-endpoints",
            Tag::ExtCostcap => "ext-costcap",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        Tag::ALL.into_iter().find(|t| t.as_str() == s)
    }

    /// Families that model policy or capacity rather than variable
    /// definitions; dropping one of them is a meaningful relaxation.
    pub fn is_relaxable(self) -> bool {
        matches!(
            self,
            Tag::Eq24 | Tag::Eq32 | Tag::Eq33 | Tag::Conflict | Tag::ExtBandwidth | Tag::ExtEndpoints
        )
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub terms: Vec<(Rational, VarId)>,
    pub sense: Sense,
    pub rhs: Rational,
    pub tag: Tag,
}

impl LinearConstraint {
    pub fn new(terms: Vec<(Rational, VarId)>, sense: Sense, rhs: Rational, tag: Tag) -> Self {
        Self { terms, sense, rhs, tag }
    }

    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.terms.iter().map(|(c, v)| c * values[v.0]).sum()
    }

    pub fn is_satisfied(&self, values: &[Rational]) -> bool {
        self.sense.holds(self.lhs(values), self.rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildOptions {
    /// Order candidate instances so symmetric relabelings are excluded.
    pub symmetry_breaking: bool,
    /// Enforce link bandwidth against chain traffic.
    pub bandwidth: bool,
    /// Count user-ingress and IoT-egress hops in the delay budget.
    pub endpoints: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self { symmetry_breaking: true, bandwidth: false, endpoints: false }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("scenario types are not normalized; call Scenario::normalize_types first")]
    NotNormalized,
}

/// A minimization problem over boolean and continuous variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlpModel {
    pub vars: VarRegistry,
    pub constraints: Vec<LinearConstraint>,
    pub objective: Vec<(Rational, VarId)>,
    /// Set while the objective is the deployment-cost sum; solvers may then
    /// use placement-specific bounds.
    pub cost_objective: bool,
}

/// Size report of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelStats {
    pub variables: usize,
    pub binaries: usize,
    pub constraints: usize,
    pub per_tag: BTreeMap<Tag, usize>,
}

#[derive(Debug, thiserror::Error)]
#[error("constraint {row} references unregistered variable {var}")]
pub struct IntegrityError {
    pub row: usize,
    pub var: usize,
}

impl IlpModel {
    pub fn new(vars: VarRegistry) -> Self {
        Self { vars, constraints: Vec::new(), objective: Vec::new(), cost_objective: false }
    }

    pub fn add(&mut self, c: LinearConstraint) {
        self.constraints.push(c);
    }

    pub fn layout(&self) -> Option<&Layout> {
        self.vars.layout.as_ref()
    }

    pub fn stats(&self) -> ModelStats {
        let mut per_tag = BTreeMap::new();
        for c in &self.constraints {
            *per_tag.entry(c.tag).or_insert(0) += 1;
        }
        ModelStats {
            variables: self.vars.len(),
            binaries: self.vars.kinds().iter().filter(|k| matches!(k, VarKind::Binary)).count(),
            constraints: self.constraints.len(),
            per_tag,
        }
    }

    /// Every variable index used by a row or the objective must be registered.
    pub fn check_integrity(&self) -> Result<(), IntegrityError> {
        let n = self.vars.len();
        for (row, c) in self.constraints.iter().enumerate() {
            if let Some((_, v)) = c.terms.iter().find(|(_, v)| v.0 >= n) {
                return Err(IntegrityError { row, var: v.0 });
            }
        }
        if let Some((_, v)) = self.objective.iter().find(|(_, v)| v.0 >= n) {
            return Err(IntegrityError { row: usize::MAX, var: v.0 });
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[Rational]) -> Rational {
        self.objective.iter().map(|(c, v)| c * values[v.0]).sum()
    }

    /// Indices of rows violated by a full assignment, plus any binary
    /// variable outside {0, 1} reported as `usize::MAX`.
    pub fn violated_rows(&self, values: &[Rational]) -> Vec<usize> {
        let mut bad: Vec<usize> = self
            .constraints
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_satisfied(values))
            .map(|(i, _)| i)
            .collect();
        let zero = Rational::from_integer(0);
        let one = Rational::from_integer(1);
        for (i, kind) in self.vars.kinds().iter().enumerate() {
            let ok = match kind {
                VarKind::Binary => values[i] == zero || values[i] == one,
                VarKind::Continuous { lower } => values[i] >= *lower,
            };
            if !ok {
                bad.push(usize::MAX);
                break;
            }
        }
        bad
    }

    /// Copy of the model with another objective; placement-specific bounds
    /// no longer apply to it.
    pub fn with_objective(&self, objective: Vec<(Rational, VarId)>) -> Self {
        Self { objective, cost_objective: false, ..self.clone() }
    }

    /// Copy of the model without the rows of the given families.
    pub fn without_tags(&self, tags: &[Tag]) -> Self {
        Self {
            constraints: self.constraints.iter().filter(|c| !tags.contains(&c.tag)).cloned().collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("models always serialize")
    }
}

/// Build the full program for a normalized scenario.
pub fn build_model(scenario: &Scenario, options: &BuildOptions) -> Result<IlpModel, BuildError> {
    if !scenario.is_normalized() {
        return Err(BuildError::NotNormalized);
    }
    let mut model = IlpModel::new(VarRegistry::for_scenario(scenario));
    emit_vnf_vnfi_constraints(&mut model, scenario);
    emit_vnfi_cloud_constraints(&mut model, scenario);
    emit_resource_constraints(&mut model, scenario);
    emit_delay_constraints(&mut model, scenario);
    emit_security_constraints(&mut model, scenario);
    emit_extensions(&mut model, scenario, options);
    emit_objective(&mut model, scenario);
    Ok(model)
}

#[cfg(test)]
mod tests;
