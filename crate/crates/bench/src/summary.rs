//! Per-group aggregates of run records.

use serde::Serialize;

use crate::runner::RunRecord;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation; 0 for a single value.
    pub std: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            0.5 * (sorted[mid - 1] + sorted[mid])
        };
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Stats { mean, median, std }
    }
}

/// Records sharing `(algo, n, k, epsilon, lambda)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub algo: String,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub lambda: Option<f64>,
    pub trials: usize,
    pub f_value: Stats,
    pub value_queries: Stats,
    pub independence_queries: Stats,
    /// Mean of `f_value / opt_value` over records with a positive optimum.
    pub ratio: Option<f64>,
    pub failure_rate: f64,
}

impl GroupSummary {
    fn key(&self) -> (&str, usize, usize, u64, Option<u64>) {
        (
            &self.algo,
            self.n,
            self.k,
            self.epsilon.to_bits(),
            self.lambda.map(f64::to_bits),
        )
    }
}

/// Groups in order of first appearance.
pub fn summarize(records: &[RunRecord]) -> Vec<GroupSummary> {
    let mut groups: Vec<(GroupSummary, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let key = (
            r.algo.as_str(),
            r.n,
            r.k,
            r.epsilon.to_bits(),
            r.lambda.map(f64::to_bits),
        );
        match groups.iter_mut().find(|(g, _)| g.key() == key) {
            Some((_, members)) => members.push(r),
            None => {
                let head = GroupSummary {
                    algo: r.algo.clone(),
                    n: r.n,
                    k: r.k,
                    epsilon: r.epsilon,
                    lambda: r.lambda,
                    trials: 0,
                    f_value: Stats::of(&[0.0]),
                    value_queries: Stats::of(&[0.0]),
                    independence_queries: Stats::of(&[0.0]),
                    ratio: None,
                    failure_rate: 0.0,
                };
                groups.push((head, vec![r]));
            }
        }
    }
    groups
        .into_iter()
        .map(|(mut g, members)| {
            let col = |get: fn(&RunRecord) -> f64| members.iter().map(|r| get(r)).collect::<Vec<_>>();
            g.trials = members.len();
            g.f_value = Stats::of(&col(|r| r.f_value));
            g.value_queries = Stats::of(&col(|r| r.value_queries as f64));
            g.independence_queries = Stats::of(&col(|r| r.independence_queries as f64));
            let ratios: Vec<f64> = members
                .iter()
                .filter_map(|r| r.opt_value.filter(|&o| o > 0.0).map(|o| r.f_value / o))
                .collect();
            g.ratio = (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64);
            g.failure_rate = members.iter().filter(|r| r.failed).count() as f64 / members.len() as f64;
            g
        })
        .collect()
}

pub const SUMMARY_HEADER: &str = "algo,n,k,epsilon,lambda,trials,f_mean,f_median,f_std,value_queries_mean,\
value_queries_median,value_queries_std,independence_queries_mean,independence_queries_median,\
independence_queries_std,ratio,failure_rate";

pub fn to_csv(groups: &[GroupSummary]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER.split(','))?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for g in groups {
        let mut row = vec![
            g.algo.clone(),
            g.n.to_string(),
            g.k.to_string(),
            g.epsilon.to_string(),
            opt(g.lambda),
        ];
        row.push(g.trials.to_string());
        for s in [g.f_value, g.value_queries, g.independence_queries] {
            row.extend([s.mean, s.median, s.std].map(|x| x.to_string()));
        }
        row.push(opt(g.ratio));
        row.push(g.failure_rate.to_string());
        w.write_record(&row)?;
    }
    w.into_inner()
        .map_err(|e| anyhow::anyhow!("flushing summary: {}", e.error()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(f: f64, lambda: Option<f64>, failed: bool) -> RunRecord {
        RunRecord {
            algo: "combined".into(),
            n: 5,
            k: 2,
            epsilon: 0.25,
            lambda,
            seed: 0,
            trial: 0,
            f_value: f,
            opt_value: Some(4.0),
            value_queries: 10,
            independence_queries: 3,
            failed,
            wall_ms: 0.0,
        }
    }

    #[test]
    fn single_record_mean_is_its_value() {
        let g = &summarize(&[record(2.5, None, false)])[0];
        assert_eq!(
            g.f_value,
            Stats {
                mean: 2.5,
                median: 2.5,
                std: 0.0
            }
        );
        assert_eq!(g.ratio, Some(0.625));
    }

    #[test]
    fn two_records_average() {
        let g = &summarize(&[record(2.0, None, false), record(4.0, None, false)])[0];
        assert_eq!(g.f_value.mean, 3.0);
        assert_eq!(g.f_value.median, 3.0);
        assert!((g.f_value.std - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn failure_rate_and_grouping() {
        let rs = [
            record(0.0, Some(1.0), true),
            record(4.0, Some(1.0), false),
            record(4.0, Some(2.0), false),
        ];
        let gs = summarize(&rs);
        assert_eq!(gs.len(), 2);
        assert_eq!((gs[0].trials, gs[0].failure_rate), (2, 0.5));
        assert_eq!(gs[1].failure_rate, 0.0);
        let text = String::from_utf8(to_csv(&gs).unwrap()).unwrap();
        assert_eq!(text.lines().count(), 3);
    }
}
