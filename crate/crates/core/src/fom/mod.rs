//! Coverage figures of merit.
//!
//! Per grid point, the merged coverage timeline over a window `[0, W]` is
//! split into coverage spans `T_c(i)`, `i = 1..N`, and gaps (its complement).
//!
//! * coverage time: total `Σ T_c(i)`, mean `total / N`, max `max T_c(i)`
//! * revisit: statistics over *interior* gaps, i.e. gaps bounded by coverage on both sides
//! * time-average gap: mean over *all* gaps, edge-bounded ones included
//! * response time: half the time-average gap
//!
//! Quantities that cannot be observed (no coverage, no interior gap) are
//! `None`, never zero.

mod aggregate;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::coverage::{merge_timeline, timeline_contains, AccessInterval, Span};
use crate::error::{Error, Result};

pub use aggregate::{
    aggregate_report, contour_triples, grid_stats, AggregateProfile, BandProfile, BandStats,
    ContourPoint, Metric,
};

/// Default sliding-window length for access separation, seconds.
pub const DEFAULT_SEPARATION_TAU_S: f64 = 3600.0;
/// Default sampling step of the percent-coverage series, seconds.
pub const DEFAULT_SERIES_STEP_S: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CoverageTimeStats {
    pub total_s: f64,
    pub mean_s: f64,
    pub max_s: f64,
    pub count: usize,
}

/// Total, mean and maximum coverage span duration, and the span count.
pub fn coverage_time_stats(timeline: &[Span]) -> CoverageTimeStats {
    if timeline.is_empty() {
        return CoverageTimeStats::default();
    }
    let total_s: f64 = timeline.iter().map(Span::duration_s).sum();
    let max_s = timeline.iter().map(Span::duration_s).fold(0.0, f64::max);
    CoverageTimeStats {
        total_s,
        mean_s: total_s / timeline.len() as f64,
        max_s,
        count: timeline.len(),
    }
}

/// An uncovered stretch of the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapInterval {
    pub start_s: f64,
    pub end_s: f64,
    /// Bounded by coverage on both sides rather than by a window edge.
    pub interior: bool,
}

impl GapInterval {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

/// Complement of a sorted, disjoint timeline within `[0, window_s]`.
pub fn extract_gaps(timeline: &[Span], window_s: f64) -> Vec<GapInterval> {
    let mut gaps = Vec::with_capacity(timeline.len() + 1);
    let mut cursor = 0.0;
    let mut after_coverage = false;
    for span in timeline {
        if span.start_s > cursor {
            gaps.push(GapInterval {
                start_s: cursor,
                end_s: span.start_s,
                interior: after_coverage,
            });
        }
        cursor = cursor.max(span.end_s);
        after_coverage = true;
    }
    if cursor < window_s {
        gaps.push(GapInterval {
            start_s: cursor,
            end_s: window_s,
            interior: false,
        });
    }
    gaps
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RevisitStats {
    pub min_s: f64,
    pub mean_s: f64,
    pub max_s: f64,
}

/// Revisit statistics over interior gaps; `None` when no revisit was observed.
pub fn revisit_stats(gaps: &[GapInterval]) -> Option<RevisitStats> {
    let interior: Vec<f64> = gaps
        .iter()
        .filter(|g| g.interior)
        .map(GapInterval::duration_s)
        .collect();
    if interior.is_empty() {
        return None;
    }
    Some(RevisitStats {
        min_s: interior.iter().copied().fold(f64::INFINITY, f64::min),
        mean_s: interior.iter().sum::<f64>() / interior.len() as f64,
        max_s: interior.iter().copied().fold(0.0, f64::max),
    })
}

/// Mean duration of all gaps, edge gaps included; 0 when there are none.
pub fn time_average_gap(gaps: &[GapInterval]) -> f64 {
    if gaps.is_empty() {
        return 0.0;
    }
    gaps.iter().map(GapInterval::duration_s).sum::<f64>() / gaps.len() as f64
}

/// Mean response time estimated as half the time-average gap.
pub fn response_time(t_avg_gap_s: f64) -> f64 {
    t_avg_gap_s / 2.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AccessCounts {
    pub total: usize,
    pub per_satellite: BTreeMap<String, usize>,
}

/// Raw access counts, before any merging across satellites.
pub fn access_counts(accesses: &[AccessInterval]) -> AccessCounts {
    let mut per_satellite = BTreeMap::new();
    for a in accesses {
        *per_satellite.entry(a.satellite_id.clone()).or_insert(0) += 1;
    }
    AccessCounts {
        total: accesses.len(),
        per_satellite,
    }
}

/// Largest number of distinct satellites with an access touching any window of length `tau_s`.
///
/// Access `[s, e]` touches `[t, t + tau]` iff `t ∈ [s - tau, e]`; the maximum
/// over `t` is attained at one of the left ends `s - tau`.
pub fn access_separation(accesses: &[AccessInterval], tau_s: f64) -> usize {
    let mut best = 0;
    for candidate in accesses {
        let t = candidate.start_s - tau_s;
        let sats: BTreeSet<&str> = accesses
            .iter()
            .filter(|a| a.start_s <= t + tau_s && a.end_s >= t)
            .map(|a| a.satellite_id.as_str())
            .collect();
        best = best.max(sats.len());
    }
    best
}

/// Per-point figure-of-merit bundle. Durations in seconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FomPointReport {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub t_c_total_s: f64,
    pub t_c_mean_s: Option<f64>,
    pub t_c_max_s: Option<f64>,
    pub n_coverage: usize,
    pub n_accesses: usize,
    pub n_gaps: usize,
    pub t_avg_gap_s: f64,
    pub revisit_min_s: Option<f64>,
    pub revisit_mean_s: Option<f64>,
    pub revisit_max_s: Option<f64>,
    pub response_mean_s: f64,
    pub access_separation_count: usize,
}

/// Everything computed for one point: the report plus the timeline it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointEvaluation {
    pub report: FomPointReport,
    pub timeline: Vec<Span>,
    pub gaps: Vec<GapInterval>,
}

pub fn evaluate_point(
    lat_deg: f64,
    lon_deg: f64,
    accesses: &[AccessInterval],
    window_s: f64,
    separation_tau_s: f64,
) -> PointEvaluation {
    let timeline = merge_timeline(accesses);
    let cov = coverage_time_stats(&timeline);
    let gaps = extract_gaps(&timeline, window_s);
    let revisit = revisit_stats(&gaps);
    let t_avg_gap_s = time_average_gap(&gaps);
    let covered = cov.count > 0;
    let report = FomPointReport {
        lat_deg,
        lon_deg,
        t_c_total_s: cov.total_s,
        t_c_mean_s: covered.then_some(cov.mean_s),
        t_c_max_s: covered.then_some(cov.max_s),
        n_coverage: cov.count,
        n_accesses: accesses.len(),
        n_gaps: gaps.len(),
        t_avg_gap_s,
        revisit_min_s: revisit.map(|r| r.min_s),
        revisit_mean_s: revisit.map(|r| r.mean_s),
        revisit_max_s: revisit.map(|r| r.max_s),
        response_mean_s: response_time(t_avg_gap_s),
        access_separation_count: access_separation(accesses, separation_tau_s),
    };
    PointEvaluation {
        report,
        timeline,
        gaps,
    }
}

/// Percentage of points covered at each sample instant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageSeries {
    pub times_s: Vec<f64>,
    pub percent: Vec<f64>,
}

impl CoverageSeries {
    /// Fraction of samples at which every point is covered.
    pub fn fraction_full(&self) -> f64 {
        if self.percent.is_empty() {
            return 0.0;
        }
        self.percent.iter().filter(|&&p| p >= 100.0).count() as f64 / self.percent.len() as f64
    }
}

/// Samples `0, step, 2·step, … ≤ window_s` and reports 100 · covered / total points.
pub fn percent_coverage_series(
    timelines: &[Vec<Span>],
    sample_step_s: f64,
    window_s: f64,
) -> Result<CoverageSeries> {
    if !(sample_step_s > 0.0) {
        return Err(Error::InvalidStep {
            name: "series_step_s",
            value: sample_step_s,
            reason: "must be positive",
        });
    }
    let samples = (window_s / sample_step_s + 1e-9).floor() as usize + 1;
    let times_s: Vec<f64> = (0..samples).map(|k| k as f64 * sample_step_s).collect();
    let percent = times_s
        .iter()
        .map(|&t| {
            if timelines.is_empty() {
                return 0.0;
            }
            let covered = timelines
                .iter()
                .filter(|tl| timeline_contains(tl, t))
                .count();
            100.0 * covered as f64 / timelines.len() as f64
        })
        .collect();
    Ok(CoverageSeries { times_s, percent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::merge_spans;
    use proptest::prelude::*;

    const MIN: f64 = 60.0;

    fn span(a: f64, b: f64) -> Span {
        Span::new(a, b)
    }

    fn acc(id: &str, a: f64, b: f64) -> AccessInterval {
        AccessInterval {
            satellite_id: id.into(),
            start_s: a,
            end_s: b,
        }
    }

    #[test]
    fn coverage_time_examples() {
        let tl = [
            span(0.0, 10.0 * MIN),
            span(30.0 * MIN, 50.0 * MIN),
            span(60.0 * MIN, 90.0 * MIN),
        ];
        let s = coverage_time_stats(&tl);
        assert_eq!(s.total_s, 60.0 * MIN);
        assert_eq!(s.mean_s, 20.0 * MIN);
        assert_eq!(s.max_s, 30.0 * MIN);
        assert_eq!(s.count, 3);
        assert_eq!(coverage_time_stats(&[]), CoverageTimeStats::default());
        let s = coverage_time_stats(&[span(0.0, 86_400.0)]);
        assert_eq!(
            (s.total_s, s.mean_s, s.max_s),
            (86_400.0, 86_400.0, 86_400.0)
        );
    }

    #[test]
    fn gap_examples() {
        assert!(extract_gaps(&[span(0.0, 100.0)], 100.0).is_empty());
        let g = extract_gaps(
            &[span(0.0, 10.0), span(40.0, 50.0), span(90.0, 100.0)],
            100.0,
        );
        assert_eq!(
            g,
            vec![
                GapInterval {
                    start_s: 10.0,
                    end_s: 40.0,
                    interior: true
                },
                GapInterval {
                    start_s: 50.0,
                    end_s: 90.0,
                    interior: true
                },
            ]
        );
        let g = extract_gaps(&[], 100.0);
        assert_eq!(
            g,
            vec![GapInterval {
                start_s: 0.0,
                end_s: 100.0,
                interior: false
            }]
        );
        let g = extract_gaps(&[span(20.0, 30.0)], 100.0);
        assert_eq!(g.len(), 2);
        assert!(g.iter().all(|g| !g.interior));
    }

    #[test]
    fn revisit_examples() {
        let gaps = [
            GapInterval {
                start_s: 0.0,
                end_s: 5.0 * MIN,
                interior: false,
            },
            GapInterval {
                start_s: 10.0 * MIN,
                end_s: 40.0 * MIN,
                interior: true,
            },
            GapInterval {
                start_s: 50.0 * MIN,
                end_s: 90.0 * MIN,
                interior: true,
            },
        ];
        let r = revisit_stats(&gaps).unwrap();
        assert_eq!(r.mean_s, 35.0 * MIN);
        assert_eq!(r.min_s, 30.0 * MIN);
        assert_eq!(r.max_s, 40.0 * MIN);
        let single = extract_gaps(&[span(100.0, 200.0)], 1000.0);
        assert_eq!(revisit_stats(&single), None);
    }

    #[test]
    fn average_gap_and_response() {
        let gaps: Vec<GapInterval> = [30.0, 40.0, 50.0]
            .iter()
            .scan(0.0, |t, d| {
                let g = GapInterval {
                    start_s: *t,
                    end_s: *t + d * MIN,
                    interior: true,
                };
                *t += d * MIN + MIN;
                Some(g)
            })
            .collect();
        assert_eq!(time_average_gap(&gaps), 40.0 * MIN);
        assert_eq!(time_average_gap(&[]), 0.0);
        assert_eq!(time_average_gap(&extract_gaps(&[], 86_400.0)), 86_400.0);
        assert_eq!(response_time(40.0 * MIN), 20.0 * MIN);
        assert_eq!(response_time(0.0), 0.0);
    }

    #[test]
    fn access_count_examples() {
        let c = access_counts(&[acc("A", 0.0, 1.0), acc("B", 2.0, 3.0), acc("A", 4.0, 5.0)]);
        assert_eq!(c.total, 3);
        assert_eq!(c.per_satellite.get("A"), Some(&2));
        assert_eq!(c.per_satellite.get("B"), Some(&1));
        assert_eq!(access_counts(&[]), AccessCounts::default());
    }

    #[test]
    fn access_separation_examples() {
        assert_eq!(
            access_separation(&[acc("A", 0.0, 10.0), acc("B", 5.0, 15.0)], 1.0),
            2
        );
        assert_eq!(
            access_separation(&[acc("A", 0.0, 10.0), acc("A", 50.0, 60.0)], 1e6),
            1
        );
        let two = [
            acc("A", 0.0, 10.0 * MIN),
            acc("B", 100.0 * MIN, 110.0 * MIN),
        ];
        assert_eq!(access_separation(&two, 30.0 * MIN), 1);
        assert_eq!(access_separation(&two, 120.0 * MIN), 2);
        assert_eq!(access_separation(&[], 60.0), 0);
    }

    #[test]
    fn no_access_point_has_absent_markers() {
        let e = evaluate_point(20.0, 80.0, &[], 86_400.0, DEFAULT_SEPARATION_TAU_S);
        assert_eq!(e.report.t_c_total_s, 0.0);
        assert_eq!(e.report.t_c_mean_s, None);
        assert_eq!(e.report.revisit_mean_s, None);
        assert_eq!(e.report.n_gaps, 1);
        assert_eq!(e.report.t_avg_gap_s, 86_400.0);
        assert_eq!(e.report.response_mean_s, 43_200.0);
    }

    #[test]
    fn series_examples() {
        let tls = vec![vec![span(0.0, 100.0)], vec![span(50.0, 100.0)]];
        let s = percent_coverage_series(&tls, 25.0, 100.0).unwrap();
        assert_eq!(s.times_s, vec![0.0, 25.0, 50.0, 75.0, 100.0]);
        assert_eq!(s.percent, vec![50.0, 50.0, 100.0, 100.0, 100.0]);
        assert_eq!(s.fraction_full(), 0.6);
        let none = percent_coverage_series(&[vec![], vec![]], 10.0, 20.0).unwrap();
        assert!(none.percent.iter().all(|&p| p == 0.0));
        assert!(percent_coverage_series(&tls, 0.0, 100.0).is_err());
    }

    fn accesses_strategy() -> impl Strategy<Value = Vec<AccessInterval>> {
        prop::collection::vec((0usize..4, 0.0f64..9000.0, 1.0f64..900.0), 0..30).prop_map(|v| {
            v.into_iter()
                .map(|(s, a, d)| acc(&format!("S{s}"), a, (a + d).min(10_000.0)))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn partition_and_identities(accesses in accesses_strategy()) {
            let window = 10_000.0;
            let e = evaluate_point(0.0, 0.0, &accesses, window, 600.0);
            let cov: f64 = e.timeline.iter().map(Span::duration_s).sum();
            let gap: f64 = e.gaps.iter().map(GapInterval::duration_s).sum();
            prop_assert!((cov + gap - window).abs() <= 1e-9 * window);
            if let Some(mean) = e.report.t_c_mean_s {
                let n = e.report.n_coverage as f64;
                prop_assert!((mean * n - e.report.t_c_total_s).abs() <= 1e-9 * e.report.t_c_total_s);
            }
            prop_assert_eq!(e.report.response_mean_s, e.report.t_avg_gap_s / 2.0);
            if let Some(max) = e.report.t_c_max_s {
                prop_assert!(max <= e.report.t_c_total_s);
            }
            prop_assert!(e.report.t_c_total_s <= window);
        }

        #[test]
        fn order_independent(mut accesses in accesses_strategy()) {
            let a = evaluate_point(1.0, 2.0, &accesses, 10_000.0, 600.0).report;
            accesses.reverse();
            let b = evaluate_point(1.0, 2.0, &accesses, 10_000.0, 600.0).report;
            prop_assert_eq!(a, b);
        }

        #[test]
        fn more_coverage_never_less_total(accesses in accesses_strategy(), extra in accesses_strategy()) {
            let base = merge_timeline(&accesses);
            let mut all = accesses.clone();
            all.extend(extra);
            let more = merge_timeline(&all);
            prop_assert!(coverage_time_stats(&more).total_s >= coverage_time_stats(&base).total_s - 1e-9);
            prop_assert_eq!(merge_spans(more.clone()), more);
        }

        #[test]
        fn series_bounded(accesses in accesses_strategy(), step in 1.0f64..500.0) {
            let tl = merge_timeline(&accesses);
            let s = percent_coverage_series(&[tl, Vec::new()], step, 10_000.0).unwrap();
            prop_assert!(s.percent.iter().all(|p| (0.0..=100.0).contains(p)));
            prop_assert!(s.times_s.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
