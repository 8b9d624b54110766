//! Canonical analysis of finite sets of time points into maximal runs, and
//! watching-gap detection on top of it.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structure::{FluxingStructure, LookupError, TimePoint};

/// Closed interval `[lo, hi]`; `lo == hi` is the one-point interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: TimePoint,
    pub hi: TimePoint,
}

impl Interval {
    pub fn new(lo: TimePoint, hi: TimePoint) -> Self {
        assert!(lo <= hi, "interval [{lo},{hi}] is empty");
        Self { lo, hi }
    }

    pub fn point(t: TimePoint) -> Self {
        Self { lo: t, hi: t }
    }

    pub fn contains(&self, t: TimePoint) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> impl Iterator<Item = TimePoint> {
        self.lo..=self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// The unique decomposition of a finite set into maximal consecutive runs,
/// ascending, with `runs[m].hi + 1 < runs[m + 1].lo`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CanonicalAnalysis {
    pub intervals: Vec<Interval>,
}

impl CanonicalAnalysis {
    /// Index of the constituent containing `t`.
    pub fn constituent_of(&self, t: TimePoint) -> Option<usize> {
        let idx = self.intervals.partition_point(|iv| iv.hi < t);
        self.intervals
            .get(idx)
            .filter(|iv| iv.contains(t))
            .map(|_| idx)
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }
}

/// Maximal unwatched runs strictly between two watched points.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GapReport {
    pub gaps: Vec<Interval>,
}

impl GapReport {
    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gaps.is_empty() {
            return f.write_str("none");
        }
        for (k, g) in self.gaps.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

pub fn canonical_analysis<I>(points: I) -> CanonicalAnalysis
where
    I: IntoIterator<Item = TimePoint>,
{
    let mut sorted: Vec<TimePoint> = points.into_iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    analyse_sorted(&sorted)
}

/// `points` must be strictly ascending.
pub(crate) fn analyse_sorted(points: &[TimePoint]) -> CanonicalAnalysis {
    let mut intervals: Vec<Interval> = Vec::new();
    for &t in points {
        match intervals.last_mut() {
            Some(last) if last.hi.checked_add(1) == Some(t) => last.hi = t,
            _ => intervals.push(Interval::point(t)),
        }
    }
    CanonicalAnalysis { intervals }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    End,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Start => "t",
            Endpoint::End => "s",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("{endpoint}={time} is not a watched moment of `{object}` for agent `{agent}`")]
    NotWatched {
        endpoint: Endpoint,
        time: TimePoint,
        object: String,
        agent: String,
    },
    #[error("t={t} must be strictly before s={s}")]
    NotOrdered { t: TimePoint, s: TimePoint },
}

fn checked_window(
    structure: &FluxingStructure,
    object: &str,
    agent: &str,
    t: TimePoint,
    s: TimePoint,
) -> Result<Vec<TimePoint>, GapError> {
    let watched = structure.watching_set(object, agent)?;
    for (endpoint, time) in [(Endpoint::Start, t), (Endpoint::End, s)] {
        if watched.binary_search(&time).is_err() {
            return Err(GapError::NotWatched {
                endpoint,
                time,
                object: object.to_owned(),
                agent: agent.to_owned(),
            });
        }
    }
    if t >= s {
        return Err(GapError::NotOrdered { t, s });
    }
    Ok(watched)
}

/// Whether some moment strictly between `t` and `s` is unwatched.
pub fn has_watching_gap(
    structure: &FluxingStructure,
    object: &str,
    agent: &str,
    t: TimePoint,
    s: TimePoint,
) -> Result<bool, GapError> {
    let watched = checked_window(structure, object, agent, t, s)?;
    Ok(gap_between(&watched, t, s))
}

/// Every maximal unwatched interval strictly between `t` and `s`.
pub fn locate_gaps(
    structure: &FluxingStructure,
    object: &str,
    agent: &str,
    t: TimePoint,
    s: TimePoint,
) -> Result<GapReport, GapError> {
    let watched = checked_window(structure, object, agent, t, s)?;
    Ok(gaps_between(&watched, t, s))
}

// Both endpoints are members of the ascending `watched`; the window has a
// hole iff it holds fewer points than the interval spans.
pub(crate) fn gap_between(watched: &[TimePoint], t: TimePoint, s: TimePoint) -> bool {
    let lo = watched.partition_point(|&w| w < t);
    let hi = watched.partition_point(|&w| w <= s);
    ((hi - lo) as u64) < s - t + 1
}

pub(crate) fn gaps_between(watched: &[TimePoint], t: TimePoint, s: TimePoint) -> GapReport {
    let lo = watched.partition_point(|&w| w < t);
    let hi = watched.partition_point(|&w| w <= s);
    let gaps = watched[lo..hi]
        .windows(2)
        .filter(|w| w[1] > w[0] + 1)
        .map(|w| Interval::new(w[0] + 1, w[1] - 1))
        .collect();
    GapReport { gaps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::StructureDoc;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn watched_object(times: &[TimePoint]) -> FluxingStructure {
        let mut doc = StructureDoc::default()
            .with_forms(times.iter().map(|t| t.to_string()))
            .with_agents(["0"])
            .with_predicate("P", 1, Vec::<[&str; 1]>::new());
        for &t in times {
            doc = doc.with_entry("f", "0", t, &t.to_string());
        }
        FluxingStructure::try_from(doc).unwrap()
    }

    fn counter5() -> FluxingStructure {
        watched_object(&[0, 1, 2, 3, 7, 8, 9])
    }

    /// Scan oracle straight from the definition of a watching gap.
    fn scan_gaps(watched: &BTreeSet<TimePoint>, t: TimePoint, s: TimePoint) -> Vec<Interval> {
        let mut out: Vec<Interval> = Vec::new();
        for p in (t + 1)..s {
            if watched.contains(&p) {
                continue;
            }
            match out.last_mut() {
                Some(g) if g.hi + 1 == p => g.hi = p,
                _ => out.push(Interval::point(p)),
            }
        }
        out
    }

    #[test]
    fn analysis_examples() {
        assert!(canonical_analysis([]).is_empty());
        assert_eq!(canonical_analysis([5]).intervals, vec![Interval::new(5, 5)]);
        assert_eq!(
            canonical_analysis([12, 1, 2, 3, 7, 8, 2]).intervals,
            vec![
                Interval::new(1, 3),
                Interval::new(7, 8),
                Interval::new(12, 12)
            ]
        );
    }

    #[test]
    fn analysis_at_the_top_of_the_axis() {
        let a = canonical_analysis([TimePoint::MAX - 1, TimePoint::MAX, 0]);
        assert_eq!(
            a.intervals,
            vec![
                Interval::point(0),
                Interval::new(TimePoint::MAX - 1, TimePoint::MAX)
            ]
        );
    }

    #[test]
    fn constituent_lookup() {
        let a = canonical_analysis([1, 2, 3, 7, 8, 12]);
        assert_eq!(a.constituent_of(2), Some(0));
        assert_eq!(a.constituent_of(8), Some(1));
        assert_eq!(a.constituent_of(12), Some(2));
        assert_eq!(a.constituent_of(5), None);
        assert_eq!(a.constituent_of(0), None);
        assert_eq!(a.constituent_of(13), None);
    }

    #[test]
    fn counter5_gaps() {
        let s = counter5();
        assert!(has_watching_gap(&s, "f", "0", 3, 7).unwrap());
        assert!(!has_watching_gap(&s, "f", "0", 1, 3).unwrap());
        assert_eq!(
            locate_gaps(&s, "f", "0", 3, 7).unwrap().gaps,
            vec![Interval::new(4, 6)]
        );
        assert!(locate_gaps(&s, "f", "0", 0, 3).unwrap().is_empty());
        assert_eq!(
            locate_gaps(&s, "f", "0", 0, 9).unwrap().gaps,
            vec![Interval::new(4, 6)]
        );
    }

    #[test]
    fn alternate_watching_has_point_gaps() {
        let s = watched_object(&[0, 2, 4]);
        assert_eq!(
            locate_gaps(&s, "f", "0", 0, 4).unwrap().gaps,
            vec![Interval::point(1), Interval::point(3)]
        );
    }

    #[test]
    fn precondition_failures_are_errors() {
        let s = counter5();
        assert_eq!(
            has_watching_gap(&s, "f", "0", 3, 4),
            Err(GapError::NotWatched {
                endpoint: Endpoint::End,
                time: 4,
                object: "f".into(),
                agent: "0".into()
            })
        );
        assert!(matches!(
            has_watching_gap(&s, "f", "0", 5, 7),
            Err(GapError::NotWatched {
                endpoint: Endpoint::Start,
                time: 5,
                ..
            })
        ));
        assert_eq!(
            locate_gaps(&s, "f", "0", 7, 3),
            Err(GapError::NotOrdered { t: 7, s: 3 })
        );
        assert_eq!(
            has_watching_gap(&s, "f", "0", 3, 3),
            Err(GapError::NotOrdered { t: 3, s: 3 })
        );
        assert!(matches!(
            has_watching_gap(&s, "g", "0", 0, 1),
            Err(GapError::Lookup(LookupError::UnknownObject(_)))
        ));
        assert!(matches!(
            locate_gaps(&s, "f", "9", 0, 1),
            Err(GapError::Lookup(LookupError::UnknownAgent(_)))
        ));
    }

    fn check_canonical(set: &BTreeSet<TimePoint>, a: &CanonicalAnalysis) {
        let union: BTreeSet<TimePoint> = a.intervals.iter().flat_map(|iv| iv.points()).collect();
        assert_eq!(&union, set);
        let total: u64 = a.intervals.iter().map(Interval::len).sum();
        assert_eq!(total, set.len() as u64, "intervals overlap");
        for w in a.intervals.windows(2) {
            assert!(w[0].lo <= w[0].hi);
            assert!(
                w[0].hi + 1 < w[1].lo,
                "{} and {} are not separated",
                w[0],
                w[1]
            );
        }
    }

    proptest! {
        #[test]
        fn analysis_is_canonical(set in prop::collection::btree_set(0u64..200, 0..=50)) {
            let a = canonical_analysis(set.iter().copied());
            check_canonical(&set, &a);
            // Merging neighbours breaks consecutiveness, splitting breaks maximality.
            for w in a.intervals.windows(2) {
                prop_assert!((w[0].hi + 1..w[1].lo).any(|p| !set.contains(&p)));
            }
            for iv in &a.intervals {
                prop_assert!(iv.lo == 0 || !set.contains(&(iv.lo - 1)));
                prop_assert!(!set.contains(&(iv.hi + 1)));
            }
        }

        #[test]
        fn gap_routes_agree(set in prop::collection::btree_set(0u64..40, 2..=25), a in 0usize..25, b in 0usize..25) {
            let times: Vec<TimePoint> = set.iter().copied().collect();
            let (a, b) = (a % times.len(), b % times.len());
            prop_assume!(a != b);
            let (t, s) = (times[a.min(b)], times[a.max(b)]);
            let st = watched_object(&times);
            let direct = has_watching_gap(&st, "f", "0", t, s).unwrap();
            let analysis = canonical_analysis(times.iter().copied());
            let via_constituents = analysis.constituent_of(t) != analysis.constituent_of(s);
            prop_assert_eq!(direct, via_constituents);

            let report = locate_gaps(&st, "f", "0", t, s).unwrap();
            prop_assert_eq!(&report.gaps, &scan_gaps(&set, t, s));
            prop_assert_eq!(report.is_empty(), !direct);
            for w in report.gaps.windows(2) {
                prop_assert!(w[0].hi + 1 < w[1].lo);
            }
            for g in &report.gaps {
                prop_assert!(t < g.lo && g.hi < s);
                prop_assert!(g.points().all(|p| !set.contains(&p)));
            }
        }
    }
}
