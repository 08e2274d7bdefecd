//! Tabular experiment output: one row per (experiment, n, metric), emitted
//! as CSV with columns `experiment,n,metric,value,target,tolerance,pass`.

/// A single diagnostic value. Informational metrics carry an infinite
/// tolerance and always pass; checked metrics compare |value - target|
/// against the tolerance.
#[derive(Debug, Clone)]
pub struct MetricRow {
    pub experiment: String,
    pub n: u64,
    pub metric: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ExperimentReport {
    pub rows: Vec<MetricRow>,
}

impl ExperimentReport {
    pub fn new() -> Self {
        ExperimentReport { rows: Vec::new() }
    }

    /// Record a checked metric: passes when |value - target| ≤ tolerance.
    pub fn check(&mut self, experiment: &str, n: u64, metric: &str, value: f64, target: f64, tolerance: f64) {
        let pass = (value - target).abs() <= tolerance;
        self.rows.push(MetricRow {
            experiment: experiment.to_string(),
            n,
            metric: metric.to_string(),
            value,
            target,
            tolerance,
            pass,
        });
    }

    /// Record an informational metric (infinite tolerance, always passes).
    pub fn info(&mut self, experiment: &str, n: u64, metric: &str, value: f64) {
        self.rows.push(MetricRow {
            experiment: experiment.to_string(),
            n,
            metric: metric.to_string(),
            value,
            target: 0.0,
            tolerance: f64::INFINITY,
            pass: true,
        });
    }

    pub fn merge(&mut self, other: ExperimentReport) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Value of a metric at a given n, if present.
    pub fn value(&self, experiment: &str, n: u64, metric: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.experiment == experiment && r.n == n && r.metric == metric)
            .map(|r| r.value)
    }

    /// Values of a metric across the ladder, in ascending n.
    pub fn series_over_n(&self, experiment: &str, metric: &str) -> Vec<(u64, f64)> {
        let mut v: Vec<(u64, f64)> = self
            .rows
            .iter()
            .filter(|r| r.experiment == experiment && r.metric == metric)
            .map(|r| (r.n, r.value))
            .collect();
        v.sort_by_key(|&(n, _)| n);
        v
    }

    /// Deterministic CSV rendering, sorted by (experiment, n, metric).
    pub fn to_csv(&self) -> String {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| {
            (a.experiment.as_str(), a.n, a.metric.as_str())
                .cmp(&(b.experiment.as_str(), b.n, b.metric.as_str()))
        });
        let mut out = String::from("experiment,n,metric,value,target,tolerance,pass\n");
        for r in rows {
            out.push_str(&format!(
                "{},{},{},{:.12e},{:.12e},{:.3e},{}\n",
                r.experiment, r.n, r.metric, r.value, r.target, r.tolerance, r.pass
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_sorted_and_well_formed() {
        let mut rep = ExperimentReport::new();
        rep.info("b_exp", 100, "z_metric", 1.0);
        rep.check("a_exp", 10, "dist", 0.01, 0.0, 0.05);
        rep.check("a_exp", 10, "gap", 1.0, 0.0, 0.5);
        let csv = rep.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "experiment,n,metric,value,target,tolerance,pass");
        assert!(lines[1].starts_with("a_exp,10,dist"));
        assert!(lines[1].ends_with("true"));
        assert!(lines[2].starts_with("a_exp,10,gap"));
        assert!(lines[2].ends_with("false"));
        assert!(lines[3].starts_with("b_exp,100,z_metric"));
        assert!(!rep.all_pass());
    }

    #[test]
    fn lookup_helpers() {
        let mut rep = ExperimentReport::new();
        rep.check("e", 100, "dist", 0.3, 0.0, 1.0);
        rep.check("e", 10, "dist", 0.5, 0.0, 1.0);
        assert_eq!(rep.value("e", 10, "dist"), Some(0.5));
        assert_eq!(rep.series_over_n("e", "dist"), vec![(10, 0.5), (100, 0.3)]);
        assert!(rep.all_pass());
    }
}
