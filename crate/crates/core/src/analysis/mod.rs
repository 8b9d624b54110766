//! Imperceptible change, changes of view, and the watching-gap guarantee.
//!
//! An object is *imperceptibly changing* (i.c.) with respect to a property
//! when no agent's support for the property differs between two adjacent
//! watched moments. For such objects every change of view must straddle an
//! unwatched moment; [`verify_prop33`] checks this and pairs each change with
//! the gaps that explain it.

mod scenario;

pub use scenario::{
    generate_scenario, random_structure, Crossing, CrossingSite, RandomStructureSpec, Scenario,
    ScenarioError, ScenarioKind, ScenarioSpec, PREDICATE_NAME, SCENARIO_OBJECT,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{bind, parse, BindError, BoundFormula, Formula, ParseError};
use crate::interval::{gaps_between, GapReport};
use crate::semantics::{supports, valuation, Context, EvalError, TruthValue};
use crate::structure::{AgentId, FluxingStructure, LookupError, ObjectId, TimePoint};

pub const DEFAULT_HOLE: &str = "x";

/// A property `φ(x)`: a formula template with one distinguished hole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertySlot {
    template: Formula,
    hole: String,
}

impl PropertySlot {
    pub fn new(template: Formula, hole: &str) -> Result<Self, AnalysisError> {
        if !template.mentions(hole) {
            return Err(AnalysisError::MissingHole {
                template: template.to_string(),
                hole: hole.to_owned(),
            });
        }
        Ok(Self {
            template,
            hole: hole.to_owned(),
        })
    }

    pub fn parse(text: &str, hole: &str) -> Result<Self, AnalysisError> {
        Self::new(parse(text)?, hole)
    }

    pub fn template(&self) -> &Formula {
        &self.template
    }

    pub fn hole(&self) -> &str {
        &self.hole
    }

    /// `φ(f)`.
    pub fn instantiate(&self, object: &str) -> Formula {
        self.template.substitute(&self.hole, object)
    }

    pub fn bind(
        &self,
        structure: &FluxingStructure,
        object: &str,
    ) -> Result<BoundFormula, AnalysisError> {
        structure.object_id(object)?;
        Ok(bind(&self.instantiate(object), structure)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("property `{template}` does not mention its hole `{hole}`")]
    MissingHole { template: String, hole: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcCounterexample {
    pub agent: String,
    /// Support differs between `time` and `time + 1`.
    pub time: TimePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IcCheck {
    pub object: String,
    pub holds: bool,
    pub counterexample: Option<IcCounterexample>,
}

/// Whether `object` is i.c. with respect to `property`, over every agent.
///
/// The condition compares *support* of `φ(f)` at `t` and `t + 1`, not truth
/// values: a step from F to U (or U to U) keeps support false on both sides
/// and so counts as no change, while T to U does not.
pub fn is_ic(
    structure: &FluxingStructure,
    object: &str,
    property: &PropertySlot,
) -> Result<IcCheck, AnalysisError> {
    let f = structure.object_id(object)?;
    let phi = property.bind(structure, object)?;
    ic_check(structure, f, &phi)
}

fn ic_check(
    structure: &FluxingStructure,
    f: ObjectId,
    phi: &BoundFormula,
) -> Result<IcCheck, AnalysisError> {
    for i in structure.agent_ids() {
        let watched = structure.object(f).watching_times(i);
        for w in watched.windows(2) {
            if w[1] != w[0] + 1 {
                continue;
            }
            let before = supports(&Context::new(structure, i, w[0]), phi)?;
            let after = supports(&Context::new(structure, i, w[1]), phi)?;
            if before != after {
                return Ok(IcCheck {
                    object: structure.object(f).name().to_owned(),
                    holds: false,
                    counterexample: Some(IcCounterexample {
                        agent: structure.agent_name(i).to_owned(),
                        time: w[0],
                    }),
                });
            }
        }
    }
    Ok(IcCheck {
        object: structure.object(f).name().to_owned(),
        holds: true,
        counterexample: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewChange {
    pub agent: String,
    pub object: String,
    pub from_time: TimePoint,
    pub to_time: TimePoint,
    pub from_value: TruthValue,
    pub to_value: TruthValue,
}

/// Changes of view of `agent` about `property` of `object`.
///
/// Only adjacent pairs of *decided* watched moments are reported: moments
/// where `φ(f)` is U are skipped, and a pair is kept when one end is T and
/// the other F. Every change of view between arbitrary watched moments
/// `t < s` contains one of these.
pub fn find_view_changes(
    structure: &FluxingStructure,
    agent: &str,
    object: &str,
    property: &PropertySlot,
) -> Result<Vec<ViewChange>, AnalysisError> {
    let i = structure.agent_id(agent)?;
    let f = structure.object_id(object)?;
    let phi = property.bind(structure, object)?;
    view_changes(structure, i, f, &phi)
}

fn view_changes(
    structure: &FluxingStructure,
    i: AgentId,
    f: ObjectId,
    phi: &BoundFormula,
) -> Result<Vec<ViewChange>, AnalysisError> {
    let mut out = Vec::new();
    let mut last: Option<(TimePoint, TruthValue)> = None;
    for t in structure.object(f).watching_times(i) {
        let v = valuation(&Context::new(structure, i, t), phi)?;
        if v == TruthValue::U {
            continue;
        }
        if let Some((s, prev)) = last {
            if prev != v {
                out.push(ViewChange {
                    agent: structure.agent_name(i).to_owned(),
                    object: structure.object(f).name().to_owned(),
                    from_time: s,
                    to_time: t,
                    from_value: prev,
                    to_value: v,
                });
            }
        }
        last = Some((t, v));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckedChange {
    pub change: ViewChange,
    pub gaps: GapReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prop33Report {
    pub ic_objects_checked: Vec<String>,
    /// Objects left out because they are not i.c., with the witness.
    pub excluded: Vec<IcCheck>,
    pub view_changes: Vec<CheckedChange>,
    /// Changes of view with no watching gap in between. Always empty unless
    /// something is broken.
    pub violations: Vec<ViewChange>,
}

impl Prop33Report {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every i.c. object and every agent, pairs each change of view with
/// the watching gaps between its endpoints.
pub fn verify_prop33(
    structure: &FluxingStructure,
    property: &PropertySlot,
) -> Result<Prop33Report, AnalysisError> {
    let mut report = Prop33Report {
        ic_objects_checked: Vec::new(),
        excluded: Vec::new(),
        view_changes: Vec::new(),
        violations: Vec::new(),
    };
    for f in structure.object_ids() {
        let name = structure.object(f).name();
        let phi = property.bind(structure, name)?;
        let ic = ic_check(structure, f, &phi)?;
        if !ic.holds {
            report.excluded.push(ic);
            continue;
        }
        report.ic_objects_checked.push(name.to_owned());
        for i in structure.agent_ids() {
            let watched = structure.object(f).watching_times(i);
            for change in view_changes(structure, i, f, &phi)? {
                let gaps = gaps_between(&watched, change.from_time, change.to_time);
                if gaps.is_empty() {
                    report.violations.push(change.clone());
                }
                report.view_changes.push(CheckedChange { change, gaps });
            }
        }
    }
    Ok(report)
}
