//! Classical structures, fluxing objects and fluxing structures.
//!
//! A [`FluxingStructure`] is a finite relational structure over a universe of
//! object forms, a finite set of agents, and a family of *fluxing objects*:
//! finite partial maps from `(agent, time)` to a form. Structures are built
//! from a [`StructureDoc`] (the on-disk JSON shape), which is checked by
//! [`validate`] first. Once built, a structure is immutable and every name is
//! interned to a small integer handle.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point on the discrete time axis.
pub type TimePoint = u64;

/// Interned handle for an element of the universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormId(pub(crate) u32);

/// Interned handle for an agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub(crate) u32);

/// Interned handle for a fluxing object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub(crate) u32);

/// Interned handle for a predicate symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateId(pub(crate) u32);

impl FormId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl AgentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl PredicateId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Rule identifiers used in [`Violation::rule`].
pub mod rules {
    pub const DISJOINT_RANGES: &str = "disjoint-ranges";
    pub const ARITY_POSITIVE: &str = "arity-positive";
    pub const TUPLE_ARITY: &str = "tuple-arity";
    pub const TUPLE_FORM_IN_UNIVERSE: &str = "tuple-form-in-universe";
    pub const PREDICATE_UNIQUE: &str = "predicate-unique";
    pub const UNIVERSE_UNIQUE: &str = "universe-unique";
    pub const AGENTS_NONEMPTY: &str = "agents-nonempty";
    pub const AGENT_UNIQUE: &str = "agent-unique";
    pub const OBJECT_UNIQUE: &str = "object-unique";
    pub const OBJECT_FORM_IN_UNIVERSE: &str = "object-form-in-universe";
    pub const OBJECT_AGENT_KNOWN: &str = "object-agent-known";
    pub const DUPLICATE_ENTRY: &str = "duplicate-entry";
    pub const SOUNDNESS: &str = "soundness";
}

/// One broken invariant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub description: String,
    pub names: Vec<String>,
}

impl Violation {
    pub fn new(rule: &str, description: impl Into<String>, names: Vec<String>) -> Self {
        Self {
            rule: rule.to_owned(),
            description: description.into(),
            names,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rule={} names={}: {}",
            self.rule,
            self.names.join(","),
            self.description
        )
    }
}

/// Outcome of a check. `ok` is true iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            ok: violations.is_empty(),
            violations,
        }
    }
}

// ---------------------------------------------------------------------------
// External format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredicateDoc {
    pub name: String,
    pub arity: usize,
    pub tuples: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub agent: String,
    pub time: TimePoint,
    pub form: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDoc {
    pub name: String,
    pub entries: Vec<EntryDoc>,
}

/// The JSON structure file, as candidate data that has not been validated.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub universe: Vec<String>,
    pub predicates: Vec<PredicateDoc>,
    pub agents: Vec<String>,
    pub objects: Vec<ObjectDoc>,
}

impl StructureDoc {
    /// Parses a structure file. Duplicate `(agent, time)` keys inside one
    /// object are rejected here rather than reported.
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let doc: StructureDoc = serde_json::from_str(text).map_err(LoadError::Json)?;
        for object in &doc.objects {
            let mut seen = BTreeSet::new();
            for entry in &object.entries {
                if !seen.insert((entry.agent.as_str(), entry.time)) {
                    return Err(LoadError::DuplicateEntry {
                        object: object.name.clone(),
                        agent: entry.agent.clone(),
                        time: entry.time,
                    });
                }
            }
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("structure documents serialize");
        text.push('\n');
        text
    }

    pub fn with_forms<I, S>(mut self, forms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.universe.extend(forms.into_iter().map(Into::into));
        self
    }

    pub fn with_agents<I, S>(mut self, agents: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.agents.extend(agents.into_iter().map(Into::into));
        self
    }

    pub fn with_predicate<I, T, S>(mut self, name: &str, arity: usize, tuples: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.predicates.push(PredicateDoc {
            name: name.to_owned(),
            arity,
            tuples: tuples
                .into_iter()
                .map(|t| t.into_iter().map(Into::into).collect())
                .collect(),
        });
        self
    }

    /// Adds an entry, creating the object on first use.
    pub fn with_entry(mut self, object: &str, agent: &str, time: TimePoint, form: &str) -> Self {
        let entry = EntryDoc {
            agent: agent.to_owned(),
            time,
            form: form.to_owned(),
        };
        match self.objects.iter_mut().find(|o| o.name == object) {
            Some(o) => o.entries.push(entry),
            None => self.objects.push(ObjectDoc {
                name: object.to_owned(),
                entries: vec![entry],
            }),
        }
        self
    }

    /// Adds an object with no entries.
    pub fn with_object(mut self, object: &str) -> Self {
        self.objects.push(ObjectDoc {
            name: object.to_owned(),
            entries: Vec::new(),
        });
        self
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed structure JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error("object `{object}` has two entries for agent `{agent}` at time {time}")]
    DuplicateEntry {
        object: String,
        agent: String,
        time: TimePoint,
    },
    #[error("structure is invalid ({} violation(s)); first: {}", .0.violations.len(), .0.violations.first().map(ToString::to_string).unwrap_or_default())]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Checks every structural invariant of `doc` and reports all violations.
///
/// Distinct objects may share `(agent, time)` points; only shared forms
/// (condition (†)) are a violation.
pub fn validate(doc: &StructureDoc) -> ValidationReport {
    let mut out = Vec::new();

    let universe = unique_names(
        &doc.universe,
        rules::UNIVERSE_UNIQUE,
        "universe form",
        &mut out,
    );

    let mut predicate_names = BTreeSet::new();
    for p in &doc.predicates {
        if !predicate_names.insert(p.name.as_str()) {
            out.push(Violation::new(
                rules::PREDICATE_UNIQUE,
                format!("predicate `{}` is declared more than once", p.name),
                vec![p.name.clone()],
            ));
        }
        if p.arity == 0 {
            out.push(Violation::new(
                rules::ARITY_POSITIVE,
                format!(
                    "predicate `{}` has arity 0; arities must be positive",
                    p.name
                ),
                vec![p.name.clone()],
            ));
        }
        for tuple in &p.tuples {
            if tuple.len() != p.arity {
                out.push(Violation::new(
                    rules::TUPLE_ARITY,
                    format!(
                        "tuple ({}) of `{}` has length {}, expected {}",
                        tuple.join(","),
                        p.name,
                        tuple.len(),
                        p.arity
                    ),
                    vec![p.name.clone()],
                ));
            }
            for form in tuple {
                if !universe.contains(form.as_str()) {
                    out.push(Violation::new(
                        rules::TUPLE_FORM_IN_UNIVERSE,
                        format!(
                            "tuple of `{}` mentions `{form}`, which is not in the universe",
                            p.name
                        ),
                        vec![p.name.clone(), form.clone()],
                    ));
                }
            }
        }
    }

    if doc.agents.is_empty() {
        out.push(Violation::new(
            rules::AGENTS_NONEMPTY,
            "the agent set is empty",
            Vec::new(),
        ));
    }
    let agents = unique_names(&doc.agents, rules::AGENT_UNIQUE, "agent", &mut out);
    let object_names: Vec<String> = doc.objects.iter().map(|o| o.name.clone()).collect();
    unique_names(&object_names, rules::OBJECT_UNIQUE, "object", &mut out);

    let mut ranges: Vec<BTreeSet<&str>> = Vec::with_capacity(doc.objects.len());
    for object in &doc.objects {
        let mut seen = BTreeSet::new();
        for e in &object.entries {
            if !seen.insert((e.agent.as_str(), e.time)) {
                out.push(Violation::new(
                    rules::DUPLICATE_ENTRY,
                    format!(
                        "object `{}` has two entries for agent `{}` at time {}",
                        object.name, e.agent, e.time
                    ),
                    vec![object.name.clone(), e.agent.clone()],
                ));
            }
            if !agents.contains(e.agent.as_str()) {
                out.push(Violation::new(
                    rules::OBJECT_AGENT_KNOWN,
                    format!(
                        "object `{}` has an entry for unknown agent `{}`",
                        object.name, e.agent
                    ),
                    vec![object.name.clone(), e.agent.clone()],
                ));
            }
            if !universe.contains(e.form.as_str()) {
                out.push(Violation::new(
                    rules::OBJECT_FORM_IN_UNIVERSE,
                    format!(
                        "object `{}` takes form `{}` at ({}, {}), which is not in the universe",
                        object.name, e.form, e.agent, e.time
                    ),
                    vec![object.name.clone(), e.form.clone()],
                ));
            }
        }
        ranges.push(object.entries.iter().map(|e| e.form.as_str()).collect());
    }

    for (a, fa) in doc.objects.iter().enumerate() {
        for (b, fb) in doc.objects.iter().enumerate().skip(a + 1) {
            let shared: Vec<&str> = ranges[a].intersection(&ranges[b]).copied().collect();
            if !shared.is_empty() {
                out.push(Violation::new(
                    rules::DISJOINT_RANGES,
                    format!(
                        "(†) disjoint ranges: objects `{}` and `{}` share form(s) {}",
                        fa.name,
                        fb.name,
                        shared.join(",")
                    ),
                    vec![fa.name.clone(), fb.name.clone()],
                ));
            }
        }
    }

    ValidationReport::from_violations(out)
}

fn unique_names<'a>(
    names: &'a [String],
    rule: &str,
    what: &str,
    out: &mut Vec<Violation>,
) -> BTreeSet<&'a str> {
    let mut set = BTreeSet::new();
    for n in names {
        if !set.insert(n.as_str()) {
            out.push(Violation::new(
                rule,
                format!("{what} `{n}` is listed more than once"),
                vec![n.clone()],
            ));
        }
    }
    set
}

// ---------------------------------------------------------------------------
// Interned structures
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    name: String,
    arity: usize,
    tuples: BTreeSet<Vec<FormId>>,
}

impl Predicate {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn contains(&self, tuple: &[FormId]) -> bool {
        self.tuples.contains(tuple)
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[FormId]> {
        self.tuples.iter().map(Vec::as_slice)
    }
}

/// A finite first-order structure: a universe of forms and relations
/// interpreting the predicate symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalStructure {
    forms: Vec<String>,
    form_index: HashMap<String, FormId>,
    predicates: Vec<Predicate>,
    predicate_index: HashMap<String, PredicateId>,
}

impl ClassicalStructure {
    pub fn forms(&self) -> &[String] {
        &self.forms
    }

    pub fn form_name(&self, id: FormId) -> &str {
        &self.forms[id.index()]
    }

    pub fn form_id(&self, name: &str) -> Option<FormId> {
        self.form_index.get(name).copied()
    }

    pub fn predicates(&self) -> &[Predicate] {
        &self.predicates
    }

    pub fn predicate(&self, id: PredicateId) -> &Predicate {
        &self.predicates[id.index()]
    }

    pub fn predicate_id(&self, name: &str) -> Option<PredicateId> {
        self.predicate_index.get(name).copied()
    }

    /// Classical truth of `P(a_1, …, a_n)` in this structure.
    pub fn holds(&self, predicate: PredicateId, args: &[FormId]) -> bool {
        self.predicate(predicate).contains(args)
    }
}

/// A finite partial map `(agent, time) → form`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxingObject {
    name: String,
    entries: BTreeMap<(AgentId, TimePoint), FormId>,
}

impl FluxingObject {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// `f(i, t)`, if defined.
    pub fn at(&self, agent: AgentId, time: TimePoint) -> Option<FormId> {
        self.entries.get(&(agent, time)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (AgentId, TimePoint, FormId)> + '_ {
        self.entries.iter().map(|(&(a, t), &f)| (a, t, f))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `W_i(f)`: ascending, duplicate free.
    pub fn watching_times(&self, agent: AgentId) -> Vec<TimePoint> {
        self.entries
            .range((agent, 0)..=(agent, TimePoint::MAX))
            .map(|(&(_, t), _)| t)
            .collect()
    }

    pub fn range(&self) -> BTreeSet<FormId> {
        self.entries.values().copied().collect()
    }

    pub fn max_time(&self) -> Option<TimePoint> {
        self.entries.keys().map(|&(_, t)| t).max()
    }
}

static NEXT_STRUCTURE_ID: AtomicU64 = AtomicU64::new(1);

/// A validated fluxing structure. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FluxingStructure {
    id: u64,
    base: ClassicalStructure,
    agents: Vec<String>,
    agent_index: HashMap<String, AgentId>,
    objects: Vec<FluxingObject>,
    object_index: HashMap<String, ObjectId>,
}

impl PartialEq for FluxingStructure {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.agents == other.agents && self.objects == other.objects
    }
}

impl Eq for FluxingStructure {}

impl TryFrom<&StructureDoc> for FluxingStructure {
    type Error = LoadError;

    fn try_from(doc: &StructureDoc) -> Result<Self, Self::Error> {
        let report = validate(doc);
        if !report.ok {
            return Err(LoadError::Invalid(report));
        }
        Ok(Self::intern(doc))
    }
}

impl TryFrom<StructureDoc> for FluxingStructure {
    type Error = LoadError;

    fn try_from(doc: StructureDoc) -> Result<Self, Self::Error> {
        Self::try_from(&doc)
    }
}

impl FluxingStructure {
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        Self::try_from(StructureDoc::from_json(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    // Caller guarantees `doc` validated.
    fn intern(doc: &StructureDoc) -> Self {
        let form_index: HashMap<String, FormId> = doc
            .universe
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), FormId(i as u32)))
            .collect();
        let predicates: Vec<Predicate> = doc
            .predicates
            .iter()
            .map(|p| Predicate {
                name: p.name.clone(),
                arity: p.arity,
                tuples: p
                    .tuples
                    .iter()
                    .map(|t| t.iter().map(|f| form_index[f]).collect())
                    .collect(),
            })
            .collect();
        let predicate_index = predicates
            .iter()
            .enumerate()
            .map(|(i, p)| (p.name.clone(), PredicateId(i as u32)))
            .collect();
        let agent_index: HashMap<String, AgentId> = doc
            .agents
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), AgentId(i as u32)))
            .collect();
        let objects: Vec<FluxingObject> = doc
            .objects
            .iter()
            .map(|o| FluxingObject {
                name: o.name.clone(),
                entries: o
                    .entries
                    .iter()
                    .map(|e| ((agent_index[&e.agent], e.time), form_index[&e.form]))
                    .collect(),
            })
            .collect();
        let object_index = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.name.clone(), ObjectId(i as u32)))
            .collect();
        Self {
            id: NEXT_STRUCTURE_ID.fetch_add(1, Ordering::Relaxed),
            base: ClassicalStructure {
                forms: doc.universe.clone(),
                form_index,
                predicates,
                predicate_index,
            },
            agents: doc.agents.clone(),
            agent_index,
            objects,
            object_index,
        }
    }

    /// Identity token used to tie bound formulas to the structure they were
    /// checked against.
    pub(crate) fn token(&self) -> u64 {
        self.id
    }

    pub fn base(&self) -> &ClassicalStructure {
        &self.base
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len() as u32).map(AgentId)
    }

    pub fn agent_name(&self, id: AgentId) -> &str {
        &self.agents[id.index()]
    }

    pub fn agent_id(&self, name: &str) -> Result<AgentId, LookupError> {
        self.agent_index
            .get(name)
            .copied()
            .ok_or_else(|| LookupError::UnknownAgent(name.to_owned()))
    }

    pub fn objects(&self) -> &[FluxingObject] {
        &self.objects
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.objects.len() as u32).map(ObjectId)
    }

    pub fn object(&self, id: ObjectId) -> &FluxingObject {
        &self.objects[id.index()]
    }

    pub fn object_id(&self, name: &str) -> Result<ObjectId, LookupError> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| LookupError::UnknownObject(name.to_owned()))
    }

    /// `W_i(f)` by name.
    pub fn watching_set(&self, object: &str, agent: &str) -> Result<Vec<TimePoint>, LookupError> {
        let f = self.object_id(object)?;
        let i = self.agent_id(agent)?;
        Ok(self.object(f).watching_times(i))
    }

    /// One past the latest defined time of any object, so that the sweep
    /// `0..=horizon` always includes a moment where nothing is defined.
    pub fn horizon(&self) -> TimePoint {
        self.objects
            .iter()
            .filter_map(FluxingObject::max_time)
            .max()
            .map_or(0, |t| t.saturating_add(1))
    }

    /// Re-validates the interned data. Always ok for structures built
    /// through [`TryFrom`]; kept so callers can check loaded values uniformly.
    pub fn validate(&self) -> ValidationReport {
        validate(&self.to_doc())
    }

    pub fn to_doc(&self) -> StructureDoc {
        StructureDoc {
            universe: self.base.forms.clone(),
            predicates: self
                .base
                .predicates
                .iter()
                .map(|p| PredicateDoc {
                    name: p.name.clone(),
                    arity: p.arity,
                    tuples: p
                        .tuples
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(|&f| self.base.form_name(f).to_owned())
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
            agents: self.agents.clone(),
            objects: self
                .objects
                .iter()
                .map(|o| ObjectDoc {
                    name: o.name.clone(),
                    entries: o
                        .entries()
                        .map(|(a, t, f)| EntryDoc {
                            agent: self.agent_name(a).to_owned(),
                            time: t,
                            form: self.base.form_name(f).to_owned(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_doc().to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counter5_doc() -> StructureDoc {
        let mut doc = StructureDoc::default()
            .with_forms((0..10).map(|n| n.to_string()))
            .with_agents(["0"])
            .with_predicate("P", 1, (5..10).map(|n| [n.to_string()]));
        for t in [0u64, 1, 2, 3, 7, 8, 9] {
            doc = doc.with_entry("f", "0", t, &t.to_string());
        }
        doc
    }

    fn rules_of(report: &ValidationReport) -> Vec<&str> {
        report.violations.iter().map(|v| v.rule.as_str()).collect()
    }

    #[test]
    fn shared_range_violates_dagger() {
        let doc = StructureDoc::default()
            .with_forms(["a1", "a2", "a3"])
            .with_agents(["i"])
            .with_entry("f", "i", 0, "a1")
            .with_entry("f", "i", 1, "a3")
            .with_entry("g", "i", 0, "a2")
            .with_entry("g", "i", 1, "a3");
        let report = validate(&doc);
        assert!(!report.ok);
        assert_eq!(rules_of(&report), vec![rules::DISJOINT_RANGES]);
        assert!(report.violations[0]
            .description
            .contains("(†) disjoint ranges"));
        assert!(report.violations[0].description.contains("a3"));
        assert_eq!(report.violations[0].names, vec!["f", "g"]);
    }

    #[test]
    fn single_entry_object_is_valid() {
        let doc = StructureDoc::default()
            .with_forms(["a"])
            .with_agents(["i"])
            .with_entry("f", "i", 0, "a");
        assert!(validate(&doc).ok);
    }

    #[test]
    fn overlapping_domains_are_allowed() {
        let doc = StructureDoc::default()
            .with_forms(["a", "b"])
            .with_agents(["i"])
            .with_entry("f", "i", 4, "a")
            .with_entry("g", "i", 4, "b");
        let report = validate(&doc);
        assert!(report.ok, "{report:?}");
    }

    #[test]
    fn reports_every_broken_rule() {
        let doc = StructureDoc {
            universe: vec!["a".into(), "a".into(), "b".into()],
            predicates: vec![
                PredicateDoc {
                    name: "P".into(),
                    arity: 0,
                    tuples: vec![],
                },
                PredicateDoc {
                    name: "Q".into(),
                    arity: 2,
                    tuples: vec![vec!["a".into()], vec!["a".into(), "zz".into()]],
                },
                PredicateDoc {
                    name: "Q".into(),
                    arity: 1,
                    tuples: vec![],
                },
            ],
            agents: vec![],
            objects: vec![
                ObjectDoc {
                    name: "f".into(),
                    entries: vec![
                        EntryDoc {
                            agent: "ghost".into(),
                            time: 0,
                            form: "nowhere".into(),
                        },
                        EntryDoc {
                            agent: "ghost".into(),
                            time: 0,
                            form: "b".into(),
                        },
                    ],
                },
                ObjectDoc {
                    name: "f".into(),
                    entries: vec![],
                },
            ],
        };
        let report = validate(&doc);
        let got: BTreeSet<&str> = rules_of(&report).into_iter().collect();
        let want: BTreeSet<&str> = [
            rules::UNIVERSE_UNIQUE,
            rules::ARITY_POSITIVE,
            rules::TUPLE_ARITY,
            rules::TUPLE_FORM_IN_UNIVERSE,
            rules::PREDICATE_UNIQUE,
            rules::AGENTS_NONEMPTY,
            rules::OBJECT_UNIQUE,
            rules::DUPLICATE_ENTRY,
            rules::OBJECT_AGENT_KNOWN,
            rules::OBJECT_FORM_IN_UNIVERSE,
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);
        assert!(!report.ok);
    }

    #[test]
    fn validate_is_idempotent() {
        let doc = counter5_doc().with_entry("g", "0", 1, "3");
        assert_eq!(validate(&doc), validate(&doc));
    }

    #[test]
    fn duplicate_entry_is_a_load_error() {
        let text = r#"{"universe":["a","b"],"predicates":[],"agents":["0"],
            "objects":[{"name":"f","entries":[
                {"agent":"0","time":1,"form":"a"},{"agent":"0","time":1,"form":"b"}]}]}"#;
        match StructureDoc::from_json(text) {
            Err(LoadError::DuplicateEntry {
                object,
                agent,
                time,
            }) => {
                assert_eq!((object.as_str(), agent.as_str(), time), ("f", "0", 1));
            }
            other => panic!("expected duplicate entry error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_doc_does_not_load() {
        let doc = StructureDoc::default().with_forms(["a"]);
        assert!(matches!(
            FluxingStructure::try_from(&doc),
            Err(LoadError::Invalid(r)) if r.violations[0].rule == rules::AGENTS_NONEMPTY
        ));
    }

    #[test]
    fn watching_set_reads_the_domain() {
        let s = FluxingStructure::try_from(counter5_doc()).unwrap();
        assert_eq!(s.watching_set("f", "0").unwrap(), vec![0, 1, 2, 3, 7, 8, 9]);
        assert_eq!(s.horizon(), 10);
    }

    #[test]
    fn watching_set_edge_cases() {
        let doc = StructureDoc::default()
            .with_forms(["c", "d"])
            .with_agents(["0", "1"])
            .with_object("empty")
            .with_entry("k", "0", 4, "c")
            .with_entry("k", "0", 0, "c")
            .with_entry("k", "0", 2, "c")
            .with_entry("k", "0", 1, "c")
            .with_entry("k", "0", 3, "c")
            .with_entry("k", "1", 9, "c");
        let s = FluxingStructure::try_from(doc).unwrap();
        assert_eq!(
            s.watching_set("empty", "0").unwrap(),
            Vec::<TimePoint>::new()
        );
        assert_eq!(s.watching_set("k", "0").unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.watching_set("k", "1").unwrap(), vec![9]);
        assert_eq!(
            s.watching_set("nope", "0"),
            Err(LookupError::UnknownObject("nope".into()))
        );
        assert_eq!(
            s.watching_set("k", "7"),
            Err(LookupError::UnknownAgent("7".into()))
        );
    }

    #[test]
    fn json_round_trip_is_stable() {
        let s = FluxingStructure::try_from(counter5_doc()).unwrap();
        let text = s.to_json();
        let again = FluxingStructure::from_json(&text).unwrap();
        assert_eq!(s, again);
        assert_eq!(text, again.to_json());
        assert!(s.validate().ok);
    }
}
