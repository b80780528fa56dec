use serde::Serialize;

use super::field::{Field, Sample};

/// Max and mean absolute value of a residual field over its valid points,
/// together with the grid spacing so refinement studies can be scripted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualStat {
    pub max: f64,
    pub mean: f64,
    pub h: f64,
    /// Number of grid points that entered the statistic.
    pub count: usize,
}

impl ResidualStat {
    /// Statistic of `|f|`, ignoring the `band` outermost rows and columns.
    ///
    /// Only the chart edge needs a band: stencils never reach across masked
    /// points, they mask their output instead.
    pub fn of<T: Sample>(f: &Field<T>, band: usize) -> Self {
        let chart = *f.chart();
        let (mut max, mut sum, mut count) = (0.0f64, 0.0, 0usize);
        for (i, j, v) in f.iter_valid() {
            if chart.edge_distance(i, j) < band {
                continue;
            }
            let m = v.magnitude();
            max = max.max(m);
            sum += m;
            count += 1;
        }
        let mean = if count > 0 { sum / count as f64 } else { 0.0 };
        Self { max, mean, h: chart.h(), count }
    }

    pub fn empty(h: f64) -> Self {
        Self { max: 0.0, mean: 0.0, h, count: 0 }
    }

    /// Worst case of two statistics on the same grid.
    pub fn merge(self, other: Self) -> Self {
        let count = self.count + other.count;
        let mean = if count > 0 {
            (self.mean * self.count as f64 + other.mean * other.count as f64) / count as f64
        } else {
            0.0
        };
        Self { max: self.max.max(other.max), mean, h: self.h.max(other.h), count }
    }
}

/// Named residual statistics for a family of identities.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ResidualReport {
    pub entries: Vec<(String, ResidualStat)>,
    /// Free-form facts about how the check was evaluated (orientation, branch, sign).
    pub notes: Vec<(String, String)>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, stat: ResidualStat) {
        self.entries.push((name.into(), stat));
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    pub fn get(&self, name: &str) -> Option<&ResidualStat> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn note_value(&self, key: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Largest max over all entries.
    pub fn max(&self) -> f64 {
        self.entries.iter().map(|(_, s)| s.max).fold(0.0, f64::max)
    }

    /// All entries merged into one statistic.
    pub fn overall(&self) -> ResidualStat {
        let h = self.entries.first().map(|(_, s)| s.h).unwrap_or(0.0);
        self.entries.iter().fold(ResidualStat::empty(h), |acc, (_, s)| acc.merge(*s))
    }
}
