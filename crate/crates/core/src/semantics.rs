//! Gap-tolerant satisfaction and the three-valued logic it induces.
//!
//! [`supports`] is the inductive support relation: an atom is supported when
//! every argument is defined at the evaluation point and the tuple of forms
//! lies in the relation, and its negation when the forms are all defined and
//! the tuple lies outside it. Negations of compounds are pushed inward by De
//! Morgan and double negations cancel. [`valuation`] reads a truth value off
//! the relation; [`compose_valuation`] recomputes it bottom-up with the strong
//! Kleene tables. The two must agree everywhere.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{BoundFormula, Formula, Node};
use crate::structure::{
    rules, AgentId, FluxingStructure, LookupError, TimePoint, ValidationReport, Violation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TruthValue {
    T,
    U,
    F,
}

impl TruthValue {
    /// Table order: T, U, F.
    pub const ALL: [TruthValue; 3] = [TruthValue::T, TruthValue::U, TruthValue::F];

    pub fn is_designated(self) -> bool {
        self == TruthValue::T
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TruthValue::T => "T",
            TruthValue::U => "U",
            TruthValue::F => "F",
        }
    }
}

impl From<bool> for TruthValue {
    fn from(b: bool) -> Self {
        if b {
            TruthValue::T
        } else {
            TruthValue::F
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TruthValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "T" => Ok(TruthValue::T),
            "U" => Ok(TruthValue::U),
            "F" => Ok(TruthValue::F),
            other => Err(format!("not a truth value: `{other}`")),
        }
    }
}

pub fn kleene_not(v: TruthValue) -> TruthValue {
    match v {
        TruthValue::T => TruthValue::F,
        TruthValue::U => TruthValue::U,
        TruthValue::F => TruthValue::T,
    }
}

pub fn kleene_and(v: TruthValue, w: TruthValue) -> TruthValue {
    use TruthValue::*;
    match (v, w) {
        (F, _) | (_, F) => F,
        (T, T) => T,
        _ => U,
    }
}

pub fn kleene_or(v: TruthValue, w: TruthValue) -> TruthValue {
    use TruthValue::*;
    match (v, w) {
        (T, _) | (_, T) => T,
        (F, F) => F,
        _ => U,
    }
}

impl std::ops::Not for TruthValue {
    type Output = TruthValue;

    fn not(self) -> TruthValue {
        kleene_not(self)
    }
}

impl std::ops::BitAnd for TruthValue {
    type Output = TruthValue;

    fn bitand(self, rhs: TruthValue) -> TruthValue {
        kleene_and(self, rhs)
    }
}

impl std::ops::BitOr for TruthValue {
    type Output = TruthValue;

    fn bitor(self, rhs: TruthValue) -> TruthValue {
        kleene_or(self, rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connective {
    Not,
    And,
    Or,
}

impl Connective {
    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Not => "¬",
            Connective::And => "∧",
            Connective::Or => "∨",
        }
    }
}

impl FromStr for Connective {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "not" | "!" | "¬" => Ok(Connective::Not),
            "and" | "&" | "∧" => Ok(Connective::And),
            "or" | "|" | "∨" => Ok(Connective::Or),
            other => Err(format!(
                "unknown connective `{other}` (expected not, and, or)"
            )),
        }
    }
}

/// Renders the truth table of `connective` with rows (and for binary
/// connectives, columns) in the order T, U, F:
///
/// ```text
/// ∧ | T U F
/// --+------
/// T | T U F
/// U | U U F
/// F | F F F
/// ```
pub fn render_table(connective: Connective) -> String {
    let mut out = String::new();
    match connective {
        Connective::Not => {
            out.push_str(&format!("{} |\n--+--\n", connective.symbol()));
            for v in TruthValue::ALL {
                out.push_str(&format!("{v} | {}\n", kleene_not(v)));
            }
        }
        Connective::And | Connective::Or => {
            let op = if connective == Connective::And {
                kleene_and
            } else {
                kleene_or
            };
            out.push_str(&format!("{} | T U F\n--+------\n", connective.symbol()));
            for v in TruthValue::ALL {
                let row: Vec<&str> = TruthValue::ALL.iter().map(|&w| op(v, w).as_str()).collect();
                out.push_str(&format!("{v} | {}\n", row.join(" ")));
            }
        }
    }
    out
}

/// An evaluation point `(i, t)` in a structure.
#[derive(Debug, Clone, Copy)]
pub struct Context<'s> {
    pub structure: &'s FluxingStructure,
    pub agent: AgentId,
    pub time: TimePoint,
}

impl<'s> Context<'s> {
    pub fn new(structure: &'s FluxingStructure, agent: AgentId, time: TimePoint) -> Self {
        assert!(
            agent.index() < structure.agents().len(),
            "agent out of range"
        );
        Self {
            structure,
            agent,
            time,
        }
    }

    pub fn named(
        structure: &'s FluxingStructure,
        agent: &str,
        time: TimePoint,
    ) -> Result<Self, LookupError> {
        Ok(Self::new(structure, structure.agent_id(agent)?, time))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("formula `{0}` was not bound to this structure")]
    Unbound(String),
    #[error("soundness violated: `{formula}` and its negation are both supported at agent `{agent}`, time {time}")]
    Unsound {
        formula: String,
        agent: String,
        time: TimePoint,
    },
}

fn ensure_bound(ctx: &Context<'_>, phi: &BoundFormula) -> Result<(), EvalError> {
    if phi.token == ctx.structure.token() {
        Ok(())
    } else {
        Err(EvalError::Unbound(phi.formula().to_string()))
    }
}

/// `F, i, t ⊩ φ`.
pub fn supports(ctx: &Context<'_>, phi: &BoundFormula) -> Result<bool, EvalError> {
    ensure_bound(ctx, phi)?;
    Ok(support(ctx, &phi.root, true))
}

/// `F, i, t ⊩ ¬φ`, without building the negated formula.
pub fn supports_negation(ctx: &Context<'_>, phi: &BoundFormula) -> Result<bool, EvalError> {
    ensure_bound(ctx, phi)?;
    Ok(support(ctx, &phi.root, false))
}

// `positive == false` evaluates the negation of `node`.
fn support(ctx: &Context<'_>, node: &Node, positive: bool) -> bool {
    match node {
        Node::Atom { predicate, args } => {
            let mut forms = Vec::with_capacity(args.len());
            for &obj in args.iter() {
                match ctx.structure.object(obj).at(ctx.agent, ctx.time) {
                    Some(form) => forms.push(form),
                    None => return false,
                }
            }
            ctx.structure.base().holds(*predicate, &forms) == positive
        }
        Node::Not(inner) => support(ctx, inner, !positive),
        Node::And(a, b) if positive => support(ctx, a, true) && support(ctx, b, true),
        Node::And(a, b) => support(ctx, a, false) || support(ctx, b, false),
        Node::Or(a, b) if positive => support(ctx, a, true) || support(ctx, b, true),
        Node::Or(a, b) => support(ctx, a, false) && support(ctx, b, false),
    }
}

fn value_of(ctx: &Context<'_>, node: &Node, phi: &BoundFormula) -> Result<TruthValue, EvalError> {
    match (support(ctx, node, true), support(ctx, node, false)) {
        (true, true) => Err(EvalError::Unsound {
            formula: phi.formula().to_string(),
            agent: ctx.structure.agent_name(ctx.agent).to_owned(),
            time: ctx.time,
        }),
        (true, false) => Ok(TruthValue::T),
        (false, true) => Ok(TruthValue::F),
        (false, false) => Ok(TruthValue::U),
    }
}

/// T iff `⊩ φ`, F iff `⊩ ¬φ`, U otherwise.
pub fn valuation(ctx: &Context<'_>, phi: &BoundFormula) -> Result<TruthValue, EvalError> {
    ensure_bound(ctx, phi)?;
    value_of(ctx, &phi.root, phi)
}

/// Values the atoms through [`valuation`] and combines them with the Kleene
/// tables.
pub fn compose_valuation(ctx: &Context<'_>, phi: &BoundFormula) -> Result<TruthValue, EvalError> {
    ensure_bound(ctx, phi)?;
    compose(ctx, &phi.root, phi)
}

fn compose(ctx: &Context<'_>, node: &Node, phi: &BoundFormula) -> Result<TruthValue, EvalError> {
    Ok(match node {
        Node::Atom { .. } => value_of(ctx, node, phi)?,
        Node::Not(a) => kleene_not(compose(ctx, a, phi)?),
        Node::And(a, b) => kleene_and(compose(ctx, a, phi)?, compose(ctx, b, phi)?),
        Node::Or(a, b) => kleene_or(compose(ctx, a, phi)?, compose(ctx, b, phi)?),
    })
}

/// Every evaluation point `(i, t)` with `t` in `0..=horizon`.
pub fn contexts(structure: &FluxingStructure) -> impl Iterator<Item = Context<'_>> {
    let horizon = structure.horizon();
    structure
        .agent_ids()
        .flat_map(move |i| (0..=horizon).map(move |t| Context::new(structure, i, t)))
}

/// Checks that no formula is supported together with its negation at any
/// evaluation point up to the structure's horizon. Formulas that fail to
/// bind are reported as well.
pub fn check_soundness<'a, I>(structure: &FluxingStructure, formulas: I) -> ValidationReport
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut violations = Vec::new();
    for phi in formulas {
        let bound = match crate::formula::bind(phi, structure) {
            Ok(b) => b,
            Err(e) => {
                violations.push(Violation::new("bind", e.to_string(), vec![phi.to_string()]));
                continue;
            }
        };
        violations.extend(soundness_violations(structure, &bound));
    }
    ValidationReport::from_violations(violations)
}

/// Same as [`check_soundness`] for already bound formulas.
pub fn check_soundness_bound<'a, I>(structure: &FluxingStructure, formulas: I) -> ValidationReport
where
    I: IntoIterator<Item = &'a BoundFormula>,
{
    ValidationReport::from_violations(
        formulas
            .into_iter()
            .flat_map(|phi| soundness_violations(structure, phi))
            .collect(),
    )
}

fn soundness_violations(structure: &FluxingStructure, phi: &BoundFormula) -> Vec<Violation> {
    if phi.token != structure.token() {
        return vec![Violation::new(
            "bind",
            EvalError::Unbound(phi.formula().to_string()).to_string(),
            vec![phi.formula().to_string()],
        )];
    }
    contexts(structure)
        .filter(|ctx| support(ctx, &phi.root, true) && support(ctx, &phi.root, false))
        .map(|ctx| {
            let agent = structure.agent_name(ctx.agent).to_owned();
            Violation::new(
                rules::SOUNDNESS,
                format!(
                    "`{}` and its negation are both supported at agent `{agent}`, time {}",
                    phi.formula(),
                    ctx.time
                ),
                vec![phi.formula().to_string(), agent],
            )
        })
        .collect()
}
