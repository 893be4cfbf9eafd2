//! Aggregation of independent replications into blocking reports.

use std::fmt;

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::engine::{CellCounts, ReplicationResult};
use crate::error::{logic, Result};
use crate::model::SchemeKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    NewCallBlocking,
    HandoffBlocking,
    ForcedTermination,
    /// Mean busy channels per cell.
    CarriedLoad,
    /// Time-averaged guard count per cell.
    MeanGuardCount,
}

impl Metric {
    pub const ALL: [Metric; 5] = [
        Metric::NewCallBlocking,
        Metric::HandoffBlocking,
        Metric::ForcedTermination,
        Metric::CarriedLoad,
        Metric::MeanGuardCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::NewCallBlocking => "new_call_blocking",
            Metric::HandoffBlocking => "handoff_blocking",
            Metric::ForcedTermination => "forced_termination",
            Metric::CarriedLoad => "carried_load",
            Metric::MeanGuardCount => "mean_guard_count",
        }
    }

    pub fn from_name(name: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name() == name)
    }

    pub fn is_probability(self) -> bool {
        matches!(
            self,
            Metric::NewCallBlocking | Metric::HandoffBlocking | Metric::ForcedTermination
        )
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `blocks / attempts`, zero when nothing was attempted.
pub fn blocking_probability(blocks: u64, attempts: u64) -> Result<f64> {
    if blocks > attempts {
        return Err(logic(format!("{blocks} blocks exceed {attempts} attempts")));
    }
    Ok(if attempts == 0 {
        0.0
    } else {
        blocks as f64 / attempts as f64
    })
}

/// Fraction of admitted new calls later lost at a handoff.
pub fn forced_termination_probability(r: &ReplicationResult) -> f64 {
    let t = r.totals();
    if t.new_admitted == 0 {
        0.0
    } else {
        (t.drops as f64 / t.new_admitted as f64).min(1.0)
    }
}

/// Per-replication values of every metric.
pub fn replication_metrics(r: &ReplicationResult) -> Result<[f64; 5]> {
    let t = r.totals();
    let cell_time = r.measured_time * r.cells.len() as f64;
    Ok([
        blocking_probability(t.new_blocks, t.new_attempts)?,
        blocking_probability(t.handoff_blocks, t.handoff_attempts)?,
        forced_termination_probability(r),
        t.carried_integral / cell_time,
        t.guard_count_integral / cell_time,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(n)`; undefined for one replication.
    pub stderr: Option<f64>,
    /// Two-sided 95% Student-t half-width.
    pub ci95_half: Option<f64>,
    pub replications: u32,
}

impl MetricSummary {
    pub fn from_samples(values: &[f64]) -> MetricSummary {
        let mut v = values.to_vec();
        // Fixed summation order makes the result independent of input order.
        v.sort_by(f64::total_cmp);
        let n = v.len();
        if n == 0 {
            return MetricSummary {
                mean: f64::NAN,
                stderr: None,
                ci95_half: None,
                replications: 0,
            };
        }
        // Shift by the first sample so equal samples give exactly zero spread.
        let origin = v[0];
        let shift = v.iter().map(|x| x - origin).sum::<f64>() / n as f64;
        let mean = origin + shift;
        if n < 2 {
            return MetricSummary {
                mean,
                stderr: None,
                ci95_half: None,
                replications: n as u32,
            };
        }
        let var = v.iter().map(|x| (x - origin - shift).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
            .expect("positive degrees of freedom")
            .inverse_cdf(0.975);
        MetricSummary {
            mean,
            stderr: Some(se),
            ci95_half: Some(t * se),
            replications: n as u32,
        }
    }
}

/// Raw counts summed over replications.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PooledCounts {
    pub counts: CellCounts,
    /// Sum over replications of measured time times cell count.
    pub cell_time: f64,
    pub replications: u32,
}

impl PooledCounts {
    pub fn merge(&mut self, o: &PooledCounts) {
        self.counts.merge(&o.counts);
        self.cell_time += o.cell_time;
        self.replications += o.replications;
    }

    pub fn new_call_blocking(&self) -> f64 {
        blocking_probability(self.counts.new_blocks, self.counts.new_attempts).unwrap_or(f64::NAN)
    }

    pub fn handoff_blocking(&self) -> f64 {
        blocking_probability(self.counts.handoff_blocks, self.counts.handoff_attempts)
            .unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockingReport {
    pub scheme: SchemeKind,
    pub fingerprint: u64,
    /// One summary per metric, in [`Metric::ALL`] order.
    pub metrics: Vec<(Metric, MetricSummary)>,
    pub pooled: PooledCounts,
}

impl BlockingReport {
    pub fn get(&self, metric: Metric) -> &MetricSummary {
        &self
            .metrics
            .iter()
            .find(|(m, _)| *m == metric)
            .expect("every metric is present")
            .1
    }

    pub fn replications(&self) -> u32 {
        self.pooled.replications
    }
}

/// Summarize replications of one scenario. Input order does not matter.
pub fn aggregate(results: &[ReplicationResult]) -> Result<BlockingReport> {
    let first = results
        .first()
        .ok_or_else(|| logic("cannot aggregate zero replications"))?;
    if let Some(odd) = results
        .iter()
        .find(|r| r.fingerprint != first.fingerprint || r.scheme != first.scheme)
    {
        return Err(logic(format!(
            "replication {} comes from a different scenario than replication {}",
            odd.replication_index, first.replication_index
        )));
    }

    let mut ordered: Vec<&ReplicationResult> = results.iter().collect();
    ordered.sort_by_key(|r| r.replication_index);

    let per_rep = ordered
        .iter()
        .map(|r| replication_metrics(r))
        .collect::<Result<Vec<_>>>()?;
    let metrics = Metric::ALL
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let column: Vec<f64> = per_rep.iter().map(|row| row[i]).collect();
            (m, MetricSummary::from_samples(&column))
        })
        .collect();

    let mut pooled = PooledCounts::default();
    for r in &ordered {
        pooled.merge(&PooledCounts {
            counts: r.totals(),
            cell_time: r.measured_time * r.cells.len() as f64,
            replications: 1,
        });
    }

    Ok(BlockingReport {
        scheme: first.scheme,
        fingerprint: first.fingerprint,
        metrics,
        pooled,
    })
}
