//! Scenario schema, cell topology, and input validation.
//!
//! A [`Scenario`] is the complete description of one experiment. It is loaded
//! from JSON whose field names mirror the struct fields, and must pass
//! [`validate_scenario`] before any simulation or oracle code will accept it.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

/// The four admission-control schemes under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SchemeKind {
    /// Fixed channel allocation: complete sharing, first come first served.
    #[serde(rename = "FCA")]
    Fca,
    /// Fixed number of guard channels reserved for handoffs.
    #[serde(rename = "StaticGC")]
    StaticGc,
    /// Guard count retuned by the periodic controller, no borrowing.
    #[serde(rename = "DynamicGC")]
    DynamicGc,
    /// Dynamic guard channels plus borrowing of idle guard channels by new calls.
    #[serde(rename = "DGCA_CBS")]
    DgcaCbs,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::Fca,
        SchemeKind::StaticGc,
        SchemeKind::DynamicGc,
        SchemeKind::DgcaCbs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::Fca => "FCA",
            SchemeKind::StaticGc => "StaticGC",
            SchemeKind::DynamicGc => "DynamicGC",
            SchemeKind::DgcaCbs => "DGCA_CBS",
        }
    }

    /// Whether the periodic guard-count controller runs for this scheme.
    pub fn is_dynamic(self) -> bool {
        matches!(self, SchemeKind::DynamicGc | SchemeKind::DgcaCbs)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scheme {s:?}; expected one of FCA, StaticGC, DynamicGC, DGCA_CBS"
                ))
            })
    }
}

/// Cells and their (undirected) neighbor relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topology {
    pub cell_count: usize,
    /// Unordered neighbor pairs. Duplicates and reversed pairs are harmless.
    pub adjacency: Vec<[usize; 2]>,
}

impl Topology {
    /// Ring with wraparound: cell i neighbors i-1 and i+1 (mod n).
    pub fn ring(cell_count: usize) -> Self {
        let adjacency = match cell_count {
            0 | 1 => Vec::new(),
            2 => vec![[0, 1]],
            n => (0..n).map(|i| [i, (i + 1) % n]).collect(),
        };
        Self {
            cell_count,
            adjacency,
        }
    }

    pub fn complete(cell_count: usize) -> Self {
        let mut adjacency = Vec::new();
        for a in 0..cell_count {
            for b in a + 1..cell_count {
                adjacency.push([a, b]);
            }
        }
        Self {
            cell_count,
            adjacency,
        }
    }

    /// A lone cell with no neighbors (exogenous mobility only).
    pub fn single() -> Self {
        Self {
            cell_count: 1,
            adjacency: Vec::new(),
        }
    }

    /// Neighbor lists for every cell, ascending, without duplicates.
    /// Out-of-range pairs and self-loops are skipped; validation reports them.
    pub fn neighbor_lists(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![BTreeSet::new(); self.cell_count];
        for &[a, b] in &self.adjacency {
            if a == b || a >= self.cell_count || b >= self.cell_count {
                continue;
            }
            sets[a].insert(b);
            sets[b].insert(a);
        }
        sets.into_iter().map(|s| s.into_iter().collect()).collect()
    }
}

/// Adjacency partners of `cell` in ascending order.
pub fn neighbors(topology: &Topology, cell: usize) -> Result<Vec<usize>> {
    if cell >= topology.cell_count {
        return Err(Error::Index {
            index: cell,
            count: topology.cell_count,
        });
    }
    let set: BTreeSet<usize> = topology
        .adjacency
        .iter()
        .filter(|[a, b]| a != b)
        .filter_map(|&[a, b]| match (a == cell, b == cell) {
            (true, _) => Some(b),
            (_, true) => Some(a),
            _ => None,
        })
        .filter(|&n| n < topology.cell_count)
        .collect();
    Ok(set.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MobilityMode {
    /// Handoffs arise from calls crossing into neighbor cells.
    Endogenous,
    /// Handoffs arrive as an independent Poisson stream per cell.
    Exogenous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficParams {
    /// Poisson rate of new call originations per cell.
    pub new_call_rate: f64,
    /// Poisson rate of handoff arrivals per cell; used in exogenous mode only.
    pub exogenous_handoff_rate: f64,
    pub mean_call_duration: f64,
    /// Mean time a mobile stays in one cell. `null` or absent means no
    /// movement (dwell rate zero).
    #[serde(default)]
    pub mean_cell_dwell: Option<f64>,
    pub mobility_mode: MobilityMode,
}

impl TrafficParams {
    /// Service rate: inverse of the mean call duration.
    pub fn service_rate(&self) -> f64 {
        1.0 / self.mean_call_duration
    }

    /// Cell-crossing rate; zero when no dwell time is configured.
    pub fn dwell_rate(&self) -> f64 {
        match self.mean_cell_dwell {
            Some(d) if d > 0.0 && d.is_finite() => 1.0 / d,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyParams {
    pub total_channels: u32,
    pub initial_guard: u32,
    pub guard_min: u32,
    pub guard_max: u32,
    /// Controller period.
    pub adjust_period: f64,
    /// Handoff blocking target the controller steers toward.
    pub handoff_block_target: f64,
    /// Guard utilization below which the controller releases guard channels.
    pub guard_util_floor: f64,
    pub adjust_step: u32,
    /// Guard channels that borrowing may never take from handoffs.
    pub borrow_reserve: u32,
}

impl PolicyParams {
    /// Controller and borrowing defaults for a cell of `total_channels` with
    /// `initial_guard` reserved channels.
    pub fn with_defaults(total_channels: u32, initial_guard: u32) -> Self {
        Self {
            total_channels,
            initial_guard,
            guard_min: 0,
            guard_max: total_channels / 2,
            adjust_period: 100.0,
            handoff_block_target: 0.02,
            guard_util_floor: 0.3,
            adjust_step: 1,
            borrow_reserve: initial_guard.div_ceil(2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub topology: Topology,
    pub traffic: TrafficParams,
    pub policy: PolicyParams,
    pub scheme: SchemeKind,
    pub sim_duration: f64,
    pub warmup: f64,
    pub replications: u32,
    pub base_seed: u64,
}

impl Scenario {
    /// The six-cell ring comparison scenario shipped in `scenarios/reference.json`.
    pub fn reference() -> Self {
        Self {
            topology: Topology::ring(6),
            traffic: TrafficParams {
                new_call_rate: 7.0,
                exogenous_handoff_rate: 0.0,
                mean_call_duration: 1.0,
                mean_cell_dwell: Some(1.0),
                mobility_mode: MobilityMode::Endogenous,
            },
            policy: PolicyParams::with_defaults(10, 2),
            scheme: SchemeKind::DgcaCbs,
            sim_duration: 5000.0,
            warmup: 500.0,
            replications: 10,
            base_seed: 20_240_601,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::Validation(vec![ValidationError::new("<document>", e.to_string())]))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// A scenario whose every invariant has been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedScenario(Scenario);

impl ValidatedScenario {
    pub fn into_inner(self) -> Scenario {
        self.0
    }

    /// Hash of everything that shapes a replication except the seed and the
    /// replication count. Results from different scenarios never aggregate.
    pub fn shape_fingerprint(&self) -> u64 {
        let mut shape = self.0.clone();
        shape.base_seed = 0;
        shape.replications = 0;
        let text = serde_json::to_string(&shape).expect("scenario serializes");
        fnv1a(text.as_bytes())
    }
}

impl Deref for ValidatedScenario {
    type Target = Scenario;

    fn deref(&self) -> &Scenario {
        &self.0
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Check every invariant of `s`, collecting all violations.
pub fn validate_scenario(s: Scenario) -> std::result::Result<ValidatedScenario, Vec<ValidationError>> {
    let mut errs = Vec::new();
    let mut fail = |field: &str, rule: &str| errs.push(ValidationError::new(field, rule));

    let topo = &s.topology;
    if topo.cell_count == 0 {
        fail("topology.cell_count", "cell_count must be positive");
    }
    for (i, &[a, b]) in topo.adjacency.iter().enumerate() {
        let field = format!("topology.adjacency[{i}]");
        if a >= topo.cell_count || b >= topo.cell_count {
            fail(&field, "adjacency references a cell index >= cell_count");
        } else if a == b {
            fail(&field, "adjacency contains a self-loop");
        }
    }

    let tr = &s.traffic;
    let nonneg = |x: f64| x.is_finite() && x >= 0.0;
    let positive = |x: f64| x.is_finite() && x > 0.0;
    if !nonneg(tr.new_call_rate) {
        fail("traffic.new_call_rate", "new_call_rate must be finite and >= 0");
    }
    if !nonneg(tr.exogenous_handoff_rate) {
        fail(
            "traffic.exogenous_handoff_rate",
            "exogenous_handoff_rate must be finite and >= 0",
        );
    }
    if !positive(tr.mean_call_duration) {
        fail(
            "traffic.mean_call_duration",
            "mean_call_duration must be finite and > 0 (service rate mu > 0)",
        );
    }
    if tr.mobility_mode == MobilityMode::Endogenous {
        if !tr.mean_cell_dwell.is_some_and(positive) {
            fail(
                "traffic.mean_cell_dwell",
                "endogenous mobility requires a finite mean_cell_dwell > 0 (dwell rate eta > 0)",
            );
        }
        let isolated: Vec<String> = topo
            .neighbor_lists()
            .iter()
            .enumerate()
            .filter(|(_, n)| n.is_empty())
            .map(|(i, _)| i.to_string())
            .collect();
        if !isolated.is_empty() {
            fail(
                "topology.adjacency",
                &format!(
                    "endogenous mobility requires every cell to have a neighbor; isolated: {}",
                    isolated.join(",")
                ),
            );
        }
    }

    let p = &s.policy;
    if p.total_channels == 0 {
        fail("policy.total_channels", "total_channels must be positive");
    }
    if p.initial_guard > p.total_channels {
        fail("policy.initial_guard", "initial_guard exceeds total_channels");
    }
    if p.guard_min > p.initial_guard {
        fail("policy.guard_min", "guard_min exceeds initial_guard");
    }
    if p.initial_guard > p.guard_max {
        fail("policy.initial_guard", "initial_guard exceeds guard_max");
    }
    if p.guard_max > p.total_channels {
        fail("policy.guard_max", "guard_max exceeds total_channels");
    }
    if p.borrow_reserve > p.guard_max {
        fail("policy.borrow_reserve", "borrow_reserve exceeds guard_max");
    }
    if !positive(p.adjust_period) {
        fail("policy.adjust_period", "adjust_period must be finite and > 0");
    }
    if !(p.handoff_block_target > 0.0 && p.handoff_block_target < 1.0) {
        fail(
            "policy.handoff_block_target",
            "handoff_block_target must lie strictly between 0 and 1",
        );
    }
    if !(0.0..=1.0).contains(&p.guard_util_floor) {
        fail("policy.guard_util_floor", "guard_util_floor must lie in [0, 1]");
    }
    if p.adjust_step == 0 {
        fail("policy.adjust_step", "adjust_step must be positive");
    }

    if !positive(s.sim_duration) {
        fail("sim_duration", "sim_duration must be finite and > 0");
    }
    if !nonneg(s.warmup) {
        fail("warmup", "warmup must be finite and >= 0");
    } else if s.warmup >= s.sim_duration {
        fail("warmup", "warmup must be less than sim_duration");
    }
    if s.replications == 0 {
        fail("replications", "replications must be at least 1");
    }

    if errs.is_empty() {
        Ok(ValidatedScenario(s))
    } else {
        Err(errs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(errs: &[ValidationError]) -> Vec<&str> {
        errs.iter().map(|e| e.field.as_str()).collect()
    }

    #[test]
    fn reference_scenario_is_valid() {
        let v = validate_scenario(Scenario::reference()).unwrap();
        assert_eq!(v.topology.cell_count, 6);
    }

    #[test]
    fn guard_above_channels_is_reported() {
        let mut s = Scenario::reference();
        s.policy.initial_guard = s.policy.total_channels + 1;
        let errs = validate_scenario(s).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| e.field == "policy.initial_guard" && e.rule == "initial_guard exceeds total_channels"));
    }

    #[test]
    fn zero_dwell_rate_names_mean_cell_dwell() {
        let mut s = Scenario::reference();
        s.traffic.mean_cell_dwell = None;
        let errs = validate_scenario(s).unwrap_err();
        assert_eq!(fields(&errs), vec!["traffic.mean_cell_dwell"]);
    }

    #[test]
    fn all_violations_are_collected() {
        let mut s = Scenario::reference();
        s.policy.handoff_block_target = 1.5;
        s.policy.adjust_step = 0;
        s.warmup = s.sim_duration;
        s.replications = 0;
        s.topology.adjacency.push([2, 2]);
        let errs = validate_scenario(s).unwrap_err();
        let f = fields(&errs);
        for want in [
            "topology.adjacency[6]",
            "policy.handoff_block_target",
            "policy.adjust_step",
            "warmup",
            "replications",
        ] {
            assert!(f.contains(&want), "missing {want} in {f:?}");
        }
    }

    #[test]
    fn isolated_cell_rejected_only_with_mobility() {
        let mut s = Scenario::reference();
        s.topology = Topology::single();
        assert!(validate_scenario(s.clone()).is_err());
        s.traffic.mobility_mode = MobilityMode::Exogenous;
        assert!(validate_scenario(s).is_ok());
    }

    #[test]
    fn validation_is_idempotent() {
        let v = validate_scenario(Scenario::reference()).unwrap();
        let again = validate_scenario(v.clone().into_inner()).unwrap();
        assert_eq!(v, again);
    }

    #[test]
    fn ring_neighbors() {
        let ring = Topology::ring(6);
        assert_eq!(neighbors(&ring, 0).unwrap(), vec![1, 5]);
        assert_eq!(neighbors(&ring, 3).unwrap(), vec![2, 4]);
        let k3 = Topology::complete(3);
        assert_eq!(neighbors(&k3, 1).unwrap(), vec![0, 2]);
        assert!(matches!(neighbors(&ring, 6), Err(Error::Index { index: 6, count: 6 })));
    }

    #[test]
    fn neighbor_lists_agree_with_neighbors() {
        let t = Topology {
            cell_count: 5,
            adjacency: vec![[0, 1], [1, 0], [3, 1], [4, 2], [2, 4]],
        };
        let lists = t.neighbor_lists();
        for (c, list) in lists.iter().enumerate() {
            assert_eq!(list, &neighbors(&t, c).unwrap());
        }
    }

    #[test]
    fn unknown_json_field_is_rejected() {
        let mut v: serde_json::Value = serde_json::to_value(Scenario::reference()).unwrap();
        v["policy"]["bogus"] = serde_json::json!(1);
        let err = Scenario::from_json_str(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn scheme_names_round_trip() {
        for k in SchemeKind::ALL {
            assert_eq!(k.name().parse::<SchemeKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
    }

    #[test]
    fn fingerprint_ignores_seed_only() {
        let a = validate_scenario(Scenario::reference()).unwrap();
        let mut s = Scenario::reference();
        s.base_seed = 7;
        s.replications = 99;
        let b = validate_scenario(s.clone()).unwrap();
        assert_eq!(a.shape_fingerprint(), b.shape_fingerprint());
        s.scheme = SchemeKind::Fca;
        let c = validate_scenario(s).unwrap();
        assert_ne!(a.shape_fingerprint(), c.shape_fingerprint());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn neighbor_relation_is_symmetric(
                n in 1usize..9,
                pairs in proptest::collection::vec((0usize..9, 0usize..9), 0..20),
            ) {
                let t = Topology {
                    cell_count: n,
                    adjacency: pairs.into_iter().filter(|(a, b)| a < &n && b < &n).map(|(a, b)| [a, b]).collect(),
                };
                for a in 0..n {
                    let na = neighbors(&t, a).unwrap();
                    prop_assert!(!na.contains(&a));
                    prop_assert!(na.windows(2).all(|w| w[0] < w[1]));
                    for b in 0..n {
                        let nb = neighbors(&t, b).unwrap();
                        prop_assert_eq!(na.contains(&b), nb.contains(&a));
                    }
                }
            }
        }
    }
}
