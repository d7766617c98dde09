use serde::{Deserialize, Serialize};

use super::access::AccessInterval;

/// A closed time span, seconds from window start.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Span {
    pub start_s: f64,
    pub end_s: f64,
}

impl Span {
    pub fn new(start_s: f64, end_s: f64) -> Self {
        Self { start_s, end_s }
    }

    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start_s <= t && t <= self.end_s
    }
}

/// Union of spans as a minimal sorted list of disjoint spans. Touching spans are joined.
pub fn merge_spans(mut spans: Vec<Span>) -> Vec<Span> {
    spans.sort_by(|a, b| {
        a.start_s
            .total_cmp(&b.start_s)
            .then(a.end_s.total_cmp(&b.end_s))
    });
    let mut merged: Vec<Span> = Vec::with_capacity(spans.len());
    for s in spans {
        match merged.last_mut() {
            Some(last) if s.start_s <= last.end_s => last.end_s = last.end_s.max(s.end_s),
            _ => merged.push(s),
        }
    }
    merged
}

/// Coverage timeline of one point: the union of all its access intervals.
pub fn merge_timeline(intervals: &[AccessInterval]) -> Vec<Span> {
    merge_spans(
        intervals
            .iter()
            .map(|a| Span::new(a.start_s, a.end_s))
            .collect(),
    )
}

/// Whether `t` falls inside any span of a sorted timeline.
pub fn timeline_contains(timeline: &[Span], t: f64) -> bool {
    let idx = timeline.partition_point(|s| s.end_s < t);
    timeline.get(idx).is_some_and(|s| s.contains(t))
}
