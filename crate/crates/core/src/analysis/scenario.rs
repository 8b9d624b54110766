//! Deterministic generators for sorites scenarios and random structures.
//!
//! Every scenario has one object [`SCENARIO_OBJECT`] whose form advances by
//! exactly one elementary step per tick, and one unary predicate
//! [`PREDICATE_NAME`] with a sharp cutoff at `threshold`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{gaps_between, Interval};
use crate::structure::{FluxingStructure, StructureDoc, TimePoint};

pub const SCENARIO_OBJECT: &str = "f";
pub const PREDICATE_NAME: &str = "P";
const MAX_HORIZON: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    /// A counter displaying `offset + t` at time `t`; `P` is "large".
    Counter,
    /// A heap receiving one grain per tick; `P` is "is a heap".
    Heap,
    /// Snapshots of a head losing hair; `P` is "bald".
    Baldness,
    /// Growing numbers; `P` is "small", so the crossing goes from T to F.
    Horizon,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::Counter,
        ScenarioKind::Heap,
        ScenarioKind::Baldness,
        ScenarioKind::Horizon,
    ];

    fn form_name(self, step: u64) -> String {
        match self {
            ScenarioKind::Counter | ScenarioKind::Horizon => step.to_string(),
            ScenarioKind::Heap => format!("sand{step}"),
            ScenarioKind::Baldness => format!("snapshot{step}"),
        }
    }

    /// Whether `P` holds of the form at level `n`.
    fn holds(self, n: u64, threshold: u64) -> bool {
        match self {
            ScenarioKind::Horizon => n < threshold,
            _ => n >= threshold,
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioKind::Counter => "counter",
            ScenarioKind::Heap => "heap",
            ScenarioKind::Baldness => "baldness",
            ScenarioKind::Horizon => "horizon",
        })
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                format!("unknown scenario kind `{s}` (expected counter, heap, baldness, horizon)")
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub threshold: u64,
    /// Last time point.
    pub horizon: TimePoint,
    /// Watched moments per agent. When empty, a single agent `"0"` gets a
    /// pattern drawn from `seed`.
    #[serde(default)]
    pub watch_pattern: BTreeMap<String, Vec<TimePoint>>,
    #[serde(default)]
    pub offset: u64,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind, threshold: u64, horizon: TimePoint) -> Self {
        Self {
            kind,
            threshold,
            horizon,
            watch_pattern: BTreeMap::new(),
            offset: 0,
            seed: 0,
        }
    }

    pub fn watching<I>(mut self, agent: &str, times: I) -> Self
    where
        I: IntoIterator<Item = TimePoint>,
    {
        self.watch_pattern
            .entry(agent.to_owned())
            .or_default()
            .extend(times);
        self
    }

    pub fn with_offset(mut self, offset: u64) -> Self {
        self.offset = offset;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// A random counter, heap or horizon scenario with one or two agents and
    /// explicit random watch patterns.
    pub fn randomized(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kind = *[
            ScenarioKind::Counter,
            ScenarioKind::Heap,
            ScenarioKind::Horizon,
        ]
        .choose(&mut rng)
        .unwrap();
        let horizon = rng.gen_range(4..=30);
        let offset = rng.gen_range(0..=10);
        let threshold = rng.gen_range(offset..=offset + horizon + 1);
        let mut spec = ScenarioSpec::new(kind, threshold, horizon)
            .with_offset(offset)
            .with_seed(seed);
        for agent in 0..rng.gen_range(1..=2u32) {
            let pattern = random_pattern(&mut rng, horizon);
            spec = spec.watching(&agent.to_string(), pattern);
        }
        spec
    }

    fn check(&self) -> Result<(), ScenarioError> {
        if self.horizon > MAX_HORIZON {
            return Err(ScenarioError::HorizonTooLarge(self.horizon));
        }
        if self.offset.checked_add(self.horizon).is_none() {
            return Err(ScenarioError::Overflow);
        }
        for (agent, times) in &self.watch_pattern {
            if agent.is_empty() {
                return Err(ScenarioError::EmptyAgentName);
            }
            if let Some(&t) = times.iter().find(|&&t| t > self.horizon) {
                return Err(ScenarioError::BeyondHorizon {
                    agent: agent.clone(),
                    time: t,
                    horizon: self.horizon,
                });
            }
        }
        Ok(())
    }

    /// Watch pattern with duplicates removed; drawn from `seed` when none
    /// was given.
    pub fn resolved_pattern(&self) -> BTreeMap<String, Vec<TimePoint>> {
        if self.watch_pattern.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let mut out = BTreeMap::new();
            out.insert("0".to_owned(), random_pattern(&mut rng, self.horizon));
            return out;
        }
        self.watch_pattern
            .iter()
            .map(|(a, times)| {
                let mut times = times.clone();
                times.sort_unstable();
                times.dedup();
                (a.clone(), times)
            })
            .collect()
    }

    /// First time `t` at which `P` of the displayed form differs from its
    /// value at `t - 1`.
    pub fn crossing_time(&self) -> Option<TimePoint> {
        let t = self.threshold.checked_sub(self.offset)?;
        (t >= 1 && t <= self.horizon).then_some(t)
    }
}

// Alternating watched runs (1..=4 ticks) and gaps (1..=3 ticks).
fn random_pattern(rng: &mut ChaCha8Rng, horizon: TimePoint) -> Vec<TimePoint> {
    let mut out = Vec::new();
    let mut t: TimePoint = 0;
    let mut watching = rng.gen_bool(0.5);
    while t <= horizon {
        let len = if watching {
            rng.gen_range(1..=4)
        } else {
            rng.gen_range(1..=3)
        };
        let end = (t + len).min(horizon + 1);
        if watching {
            out.extend(t..end);
        }
        t = end;
        watching = !watching;
    }
    if out.is_empty() {
        out.push(0);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("agent `{agent}` watches at time {time}, beyond the horizon {horizon}")]
    BeyondHorizon {
        agent: String,
        time: TimePoint,
        horizon: TimePoint,
    },
    #[error("horizon {0} is too large")]
    HorizonTooLarge(TimePoint),
    #[error("offset + horizon overflows")]
    Overflow,
    #[error("agent names must be nonempty")]
    EmptyAgentName,
}

/// Where an agent stood relative to the threshold crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "site", rename_all = "kebab-case")]
pub enum CrossingSite {
    /// Both sides of the crossing step were watched.
    Witnessed,
    /// The crossing step falls in this watching gap.
    InGap { gap: Interval },
    /// The crossing is before the first or after the last watched moment.
    Unwatched,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub time: TimePoint,
    pub sites: BTreeMap<String, CrossingSite>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub structure: FluxingStructure,
    pub crossing: Option<Crossing>,
}

pub fn generate_scenario(spec: &ScenarioSpec) -> Result<Scenario, ScenarioError> {
    spec.check()?;
    let kind = spec.kind;
    let pattern = spec.resolved_pattern();
    let steps = spec.offset..=spec.offset + spec.horizon;

    let mut doc = StructureDoc::default()
        .with_forms(steps.clone().map(|n| kind.form_name(n)))
        .with_predicate(
            PREDICATE_NAME,
            1,
            steps
                .filter(|&n| kind.holds(n, spec.threshold))
                .map(|n| [kind.form_name(n)]),
        )
        .with_agents(pattern.keys().cloned())
        .with_object(SCENARIO_OBJECT);
    for (agent, times) in &pattern {
        for &t in times {
            doc = doc.with_entry(SCENARIO_OBJECT, agent, t, &kind.form_name(spec.offset + t));
        }
    }
    let structure =
        FluxingStructure::try_from(&doc).expect("scenario generator produces valid structures");

    let crossing = spec.crossing_time().map(|time| Crossing {
        time,
        sites: pattern
            .iter()
            .map(|(agent, watched)| (agent.clone(), crossing_site(watched, time)))
            .collect(),
    });
    Ok(Scenario {
        structure,
        crossing,
    })
}

// The crossing step is `time - 1 -> time`.
fn crossing_site(watched: &[TimePoint], time: TimePoint) -> CrossingSite {
    let seen = |t: TimePoint| watched.binary_search(&t).is_ok();
    if seen(time - 1) && seen(time) {
        return CrossingSite::Witnessed;
    }
    match (watched.first(), watched.last()) {
        (Some(&first), Some(&last)) if first < time && time - 1 < last => {
            gaps_between(watched, first, last)
                .gaps
                .into_iter()
                .find(|g| g.contains(time) || g.contains(time - 1))
                .map_or(CrossingSite::Unwatched, |gap| CrossingSite::InGap { gap })
        }
        _ => CrossingSite::Unwatched,
    }
}

/// Bounds for [`random_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomStructureSpec {
    pub seed: u64,
    pub max_objects: usize,
    pub max_agents: usize,
    pub max_horizon: TimePoint,
}

impl RandomStructureSpec {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            max_objects: 3,
            max_agents: 2,
            max_horizon: 12,
        }
    }
}

/// A random valid structure with objects `o0, o1, …`, a unary predicate `P`
/// and a binary predicate `R`. Each object draws its forms from its own
/// private pool, so ranges are disjoint.
pub fn random_structure(spec: &RandomStructureSpec) -> FluxingStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let objects = rng.gen_range(1..=spec.max_objects.max(1));
    let agents = rng.gen_range(1..=spec.max_agents.max(1));
    let horizon = rng.gen_range(0..=spec.max_horizon);
    let pool = 3;
    let forms: Vec<String> = (0..objects)
        .flat_map(|o| (0..pool).map(move |k| format!("o{o}_{k}")))
        .collect();
    let unary: Vec<[String; 1]> = forms
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .map(|f| [f.clone()])
        .collect();
    let mut binary = Vec::new();
    for a in &forms {
        for b in &forms {
            if rng.gen_bool(0.3) {
                binary.push([a.clone(), b.clone()]);
            }
        }
    }
    let mut doc = StructureDoc::default()
        .with_forms(forms)
        .with_predicate("P", 1, unary)
        .with_predicate("R", 2, binary)
        .with_agents((0..agents).map(|a| a.to_string()));
    for o in 0..objects {
        let name = format!("o{o}");
        doc = doc.with_object(&name);
        for a in 0..agents {
            for t in 0..=horizon {
                if rng.gen_bool(0.6) {
                    let form = format!("o{o}_{}", rng.gen_range(0..pool));
                    doc = doc.with_entry(&name, &a.to_string(), t, &form);
                }
            }
        }
    }
    FluxingStructure::try_from(&doc).expect("random structures are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{find_view_changes, is_ic, PropertySlot};

    fn px() -> PropertySlot {
        PropertySlot::parse("P(x)", "x").unwrap()
    }

    fn counter5_spec() -> ScenarioSpec {
        ScenarioSpec::new(ScenarioKind::Counter, 5, 9).watching("0", [0, 1, 2, 3, 7, 8, 9])
    }

    #[test]
    fn counter5_shape() {
        let s = generate_scenario(&counter5_spec()).unwrap().structure;
        assert_eq!(s.base().forms().len(), 10);
        assert_eq!(s.watching_set("f", "0").unwrap(), vec![0, 1, 2, 3, 7, 8, 9]);
        let p = s.base().predicate(s.base().predicate_id("P").unwrap());
        let ext: Vec<&str> = p.tuples().map(|t| s.base().form_name(t[0])).collect();
        assert_eq!(ext, vec!["5", "6", "7", "8", "9"]);
    }

    #[test]
    fn degenerate_heap_threshold() {
        let spec = ScenarioSpec::new(ScenarioKind::Heap, 0, 6).watching("0", 0..=6);
        let s = generate_scenario(&spec).unwrap();
        let p = s
            .structure
            .base()
            .predicate(s.structure.base().predicate_id("P").unwrap());
        assert_eq!(p.tuples().count(), 7);
        assert!(is_ic(&s.structure, "f", &px()).unwrap().holds);
        assert!(find_view_changes(&s.structure, "0", "f", &px())
            .unwrap()
            .is_empty());
        assert!(s.crossing.is_none());
    }

    #[test]
    fn horizon_crossing_falls_in_the_gap() {
        let spec =
            ScenarioSpec::new(ScenarioKind::Horizon, 6, 12).watching("0", (0..=3).chain(8..=12));
        let s = generate_scenario(&spec).unwrap();
        let crossing = s.crossing.unwrap();
        assert_eq!(crossing.time, 6);
        assert_eq!(
            crossing.sites["0"],
            CrossingSite::InGap {
                gap: Interval::new(4, 7)
            }
        );
        let changes = find_view_changes(&s.structure, "0", "f", &px()).unwrap();
        assert_eq!(changes.len(), 1);
        assert_eq!((changes[0].from_time, changes[0].to_time), (3, 8));
    }

    #[test]
    fn crossing_sites() {
        let watched = [2, 3, 4, 8, 9];
        assert_eq!(crossing_site(&watched, 3), CrossingSite::Witnessed);
        assert_eq!(
            crossing_site(&watched, 5),
            CrossingSite::InGap {
                gap: Interval::new(5, 7)
            }
        );
        assert_eq!(
            crossing_site(&watched, 8),
            CrossingSite::InGap {
                gap: Interval::new(5, 7)
            }
        );
        assert_eq!(crossing_site(&watched, 1), CrossingSite::Unwatched);
        assert_eq!(crossing_site(&watched, 2), CrossingSite::Unwatched);
        assert_eq!(crossing_site(&watched, 11), CrossingSite::Unwatched);
    }

    #[test]
    fn baldness_uses_snapshot_forms() {
        let spec = ScenarioSpec::new(ScenarioKind::Baldness, 4, 6).watching("0", [0, 1, 5, 6]);
        let s = generate_scenario(&spec).unwrap().structure;
        assert_eq!(s.base().forms()[0], "snapshot0");
        assert!(is_ic(&s, "f", &px()).unwrap().holds);
        assert_eq!(find_view_changes(&s, "0", "f", &px()).unwrap().len(), 1);
    }

    #[test]
    fn spec_errors() {
        let spec = ScenarioSpec::new(ScenarioKind::Counter, 5, 9).watching("0", [3, 10]);
        assert_eq!(
            generate_scenario(&spec).unwrap_err(),
            ScenarioError::BeyondHorizon {
                agent: "0".into(),
                time: 10,
                horizon: 9
            }
        );
        let spec = ScenarioSpec::new(ScenarioKind::Counter, 5, 9).with_offset(u64::MAX);
        assert_eq!(
            generate_scenario(&spec).unwrap_err(),
            ScenarioError::Overflow
        );
        let spec = ScenarioSpec::new(ScenarioKind::Counter, 5, u64::MAX);
        assert!(matches!(
            generate_scenario(&spec),
            Err(ScenarioError::HorizonTooLarge(_))
        ));
    }

    #[test]
    fn seeded_patterns_are_deterministic() {
        let a = ScenarioSpec::new(ScenarioKind::Counter, 7, 20).with_seed(42);
        let b = a.clone();
        let sa = generate_scenario(&a).unwrap().structure.to_json();
        let sb = generate_scenario(&b).unwrap().structure.to_json();
        assert_eq!(sa, sb);
        let other = generate_scenario(&a.clone().with_seed(43))
            .unwrap()
            .structure
            .to_json();
        assert_ne!(sa, other);
        assert_eq!(ScenarioSpec::randomized(9), ScenarioSpec::randomized(9));
    }

    #[test]
    fn random_structures_respect_bounds() {
        for seed in 0..50 {
            let s = random_structure(&RandomStructureSpec::new(seed));
            assert!(s.objects().len() <= 3);
            assert!(s.agents().len() <= 2);
            assert!(s.horizon() <= 13);
            assert!(s.validate().ok);
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = counter5_spec().with_offset(2).with_seed(5);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<ScenarioSpec>(&text).unwrap(), spec);
        let minimal: ScenarioSpec =
            serde_json::from_str(r#"{"kind":"heap","threshold":3,"horizon":8}"#).unwrap();
        assert_eq!(minimal, ScenarioSpec::new(ScenarioKind::Heap, 3, 8));
    }
}
