//! One replication of the cellular network: arrivals, lifecycles, handoff
//! routing, controller ticks and post-warmup statistics.

use std::collections::HashMap;

use crate::engine::queue::{EventKind, EventQueue};
use crate::engine::rng::{draw_exponential, RngStream};
use crate::error::{domain, logic, Error, Result};
use crate::model::{neighbors, MobilityMode, SchemeKind, Topology, ValidatedScenario};
use crate::policy::{
    admit, adjust_guard, guard_utilization, release, AdmitDecision, CallType, CellChannelState,
    WindowStats,
};

/// What happens next to an admitted call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifecycle {
    Completion(f64),
    OutboundHandoff(f64),
}

/// Draw the residual holding time and, with mobility, the dwell time; the
/// earlier of the two decides the call's next event.
pub fn plan_call_lifecycle(
    stream: &mut RngStream,
    service_rate: f64,
    dwell_rate: f64,
    mode: MobilityMode,
) -> Result<Lifecycle> {
    let duration = draw_exponential(stream, service_rate)?;
    match mode {
        MobilityMode::Exogenous => Ok(Lifecycle::Completion(duration)),
        MobilityMode::Endogenous => {
            if !(dwell_rate > 0.0) {
                return Err(domain("endogenous mobility requires a positive dwell rate"));
            }
            let dwell = draw_exponential(stream, dwell_rate)?;
            Ok(if dwell < duration {
                Lifecycle::OutboundHandoff(dwell)
            } else {
                Lifecycle::Completion(duration)
            })
        }
    }
}

/// Uniform choice of a neighbor of `from_cell`.
pub fn route_handoff(topology: &Topology, from_cell: usize, stream: &mut RngStream) -> Result<usize> {
    pick_neighbor(&neighbors(topology, from_cell)?, from_cell, stream)
}

fn pick_neighbor(candidates: &[usize], from_cell: usize, stream: &mut RngStream) -> Result<usize> {
    if candidates.is_empty() {
        return Err(Error::Config(format!("cell {from_cell} has no neighbor to hand off to")));
    }
    Ok(candidates[stream.index(candidates.len())])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CallRecord {
    pub call_id: u64,
    pub cell: usize,
    pub origin_type: CallType,
    pub borrowed: bool,
    pub admitted_at: f64,
    /// Cell where the call was first admitted as a new call.
    pub origin_cell: usize,
    /// Admitted as a new call after warmup; only such calls count toward
    /// forced termination.
    counted_origin: bool,
}

/// Post-warmup counters for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CellCounts {
    pub new_attempts: u64,
    pub new_blocks: u64,
    pub new_admitted: u64,
    pub borrowed_admissions: u64,
    pub handoff_attempts: u64,
    pub handoff_blocks: u64,
    pub completions: u64,
    /// Calls that originated here and were later lost at a handoff.
    pub drops: u64,
    /// Time integral of busy channels.
    pub carried_integral: f64,
    /// Time integral of the guard count.
    pub guard_count_integral: f64,
}

impl CellCounts {
    pub fn merge(&mut self, o: &CellCounts) {
        self.new_attempts += o.new_attempts;
        self.new_blocks += o.new_blocks;
        self.new_admitted += o.new_admitted;
        self.borrowed_admissions += o.borrowed_admissions;
        self.handoff_attempts += o.handoff_attempts;
        self.handoff_blocks += o.handoff_blocks;
        self.completions += o.completions;
        self.drops += o.drops;
        self.carried_integral += o.carried_integral;
        self.guard_count_integral += o.guard_count_integral;
    }
}

/// One evaluation of the guard controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerTick {
    pub time: f64,
    pub cell: usize,
    pub window: WindowStats,
    pub utilization: f64,
    pub guard_before: u32,
    pub guard_after: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationResult {
    pub replication_index: u32,
    pub scheme: SchemeKind,
    pub fingerprint: u64,
    /// Length of the measured interval, `sim_duration - warmup`.
    pub measured_time: f64,
    pub cells: Vec<CellCounts>,
    /// Post-warmup controller evaluations, in processing order.
    pub ticks: Vec<ControllerTick>,
    pub live_calls_at_end: u64,
}

impl ReplicationResult {
    pub fn totals(&self) -> CellCounts {
        let mut t = CellCounts::default();
        for c in &self.cells {
            t.merge(c);
        }
        t
    }

    /// `(time, cell, S_R)` for every tick that changed the guard count.
    pub fn guard_changes(&self) -> Vec<(f64, usize, u32)> {
        self.ticks
            .iter()
            .filter(|t| t.guard_before != t.guard_after)
            .map(|t| (t.time, t.cell, t.guard_after))
            .collect()
    }
}

/// One processed event, as written to a trace dump.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub time: f64,
    pub seq: u64,
    pub kind: &'static str,
    pub cell: usize,
    pub call_id: Option<u64>,
    pub decision: String,
}

impl TraceRecord {
    /// Tab-separated `time seq kind cell call_id decision`. Times use the
    /// shortest representation that parses back to the same `f64`.
    pub fn to_line(&self) -> String {
        let call = self.call_id.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.time, self.seq, self.kind, self.cell, call, self.decision
        )
    }
}

pub trait TraceSink {
    fn record(&mut self, rec: TraceRecord);
}

impl TraceSink for Vec<TraceRecord> {
    fn record(&mut self, rec: TraceRecord) {
        self.push(rec);
    }
}

struct CellSim {
    channels: CellChannelState,
    window: WindowStats,
    window_start: f64,
    window_mark: f64,
    last_update: f64,
    counts: CellCounts,
}

struct Streams {
    new_arrivals: Vec<RngStream>,
    handoff_arrivals: Vec<RngStream>,
    lifecycle: Vec<RngStream>,
    routing: Vec<RngStream>,
}

impl Streams {
    fn new(seed: u64, rep: u64, cells: usize) -> Self {
        let make = |prefix: &str| {
            (0..cells)
                .map(|c| RngStream::new(seed, rep, &format!("{prefix}.{c}")))
                .collect()
        };
        Self {
            new_arrivals: make("arrivals.new"),
            handoff_arrivals: make("arrivals.handoff"),
            lifecycle: make("lifecycle"),
            routing: make("routing"),
        }
    }
}

struct Simulation<'a> {
    s: &'a ValidatedScenario,
    queue: EventQueue,
    cells: Vec<CellSim>,
    neighbor_lists: Vec<Vec<usize>>,
    calls: HashMap<u64, CallRecord>,
    next_call_id: u64,
    streams: Streams,
    ticks: Vec<ControllerTick>,
    trace: Option<&'a mut dyn TraceSink>,
    service_rate: f64,
    dwell_rate: f64,
}

/// Run replication `replication_index` of `s`. The result depends only on
/// the scenario, its base seed and the index.
pub fn run_replication(s: &ValidatedScenario, replication_index: u32) -> Result<ReplicationResult> {
    Simulation::new(s, replication_index, None).run(replication_index)
}

/// As [`run_replication`], recording every processed event into `sink`.
pub fn run_replication_traced(
    s: &ValidatedScenario,
    replication_index: u32,
    sink: &mut dyn TraceSink,
) -> Result<ReplicationResult> {
    Simulation::new(s, replication_index, Some(sink)).run(replication_index)
}

impl<'a> Simulation<'a> {
    fn new(s: &'a ValidatedScenario, rep: u32, trace: Option<&'a mut dyn TraceSink>) -> Self {
        let n = s.topology.cell_count;
        let initial_guard = match s.scheme {
            SchemeKind::Fca => 0,
            _ => s.policy.initial_guard,
        };
        let cells = (0..n)
            .map(|_| CellSim {
                channels: CellChannelState::new(s.policy.total_channels, initial_guard),
                window: WindowStats::default(),
                window_start: 0.0,
                window_mark: 0.0,
                last_update: 0.0,
                counts: CellCounts::default(),
            })
            .collect();
        Self {
            s,
            queue: EventQueue::new(),
            cells,
            neighbor_lists: s.topology.neighbor_lists(),
            calls: HashMap::new(),
            next_call_id: 0,
            streams: Streams::new(s.base_seed, u64::from(rep), n),
            ticks: Vec::new(),
            trace,
            service_rate: s.traffic.service_rate(),
            dwell_rate: s.traffic.dwell_rate(),
        }
    }

    fn run(mut self, rep: u32) -> Result<ReplicationResult> {
        let s = self.s;
        let exogenous = s.traffic.mobility_mode == MobilityMode::Exogenous;
        for cell in 0..self.cells.len() {
            if s.traffic.new_call_rate > 0.0 {
                let dt = draw_exponential(&mut self.streams.new_arrivals[cell], s.traffic.new_call_rate)?;
                self.queue.schedule(dt, EventKind::NewArrival { cell })?;
            }
            if exogenous && s.traffic.exogenous_handoff_rate > 0.0 {
                let dt = draw_exponential(
                    &mut self.streams.handoff_arrivals[cell],
                    s.traffic.exogenous_handoff_rate,
                )?;
                self.queue.schedule(dt, EventKind::ExogenousHandoffArrival { cell })?;
            }
            if s.scheme.is_dynamic() {
                self.queue
                    .schedule(s.policy.adjust_period, EventKind::AdjustTick { cell })?;
            }
        }

        while let Some(t) = self.queue.peek_time() {
            if t > s.sim_duration {
                break;
            }
            let ev = self.queue.advance().expect("peeked");
            let decision = match ev.kind {
                EventKind::NewArrival { cell } => self.on_new_arrival(ev.time, cell)?,
                EventKind::ExogenousHandoffArrival { cell } => self.on_exogenous_handoff(ev.time, cell)?,
                EventKind::Completion { cell, call_id } => self.on_completion(ev.time, cell, call_id)?,
                EventKind::OutboundHandoff { cell, call_id } => {
                    self.on_outbound_handoff(ev.time, cell, call_id)?
                }
                EventKind::AdjustTick { cell } => self.on_tick(ev.time, cell)?,
            };
            if let Some(sink) = self.trace.as_deref_mut() {
                sink.record(TraceRecord {
                    time: ev.time,
                    seq: ev.seq,
                    kind: ev.kind.name(),
                    cell: ev.kind.cell(),
                    call_id: ev.kind.call_id(),
                    decision,
                });
            }
        }

        for cell in 0..self.cells.len() {
            self.touch(cell, s.sim_duration);
        }
        self.check_conservation()?;

        Ok(ReplicationResult {
            replication_index: rep,
            scheme: s.scheme,
            fingerprint: s.shape_fingerprint(),
            measured_time: s.sim_duration - s.warmup,
            cells: self.cells.iter().map(|c| c.counts).collect(),
            ticks: self.ticks,
            live_calls_at_end: self.calls.len() as u64,
        })
    }

    fn counted(&self, now: f64) -> bool {
        now >= self.s.warmup
    }

    /// Accumulate time integrals for `cell` up to `now`. Must run before
    /// any change to the cell's busy or guard count.
    fn touch(&mut self, cell: usize, now: f64) {
        self.touch_window(cell, now);
        let warmup = self.s.warmup;
        let c = &mut self.cells[cell];
        let dt = now - c.last_update;
        if dt > 0.0 {
            let from = c.last_update.max(warmup);
            if now > from {
                let measured = now - from;
                c.counts.carried_integral += f64::from(c.channels.busy) * measured;
                c.counts.guard_count_integral += f64::from(c.channels.guard) * measured;
            }
        }
        c.last_update = now;
    }

    /// Controller-window integral only. Kept apart from the report integrals
    /// so that a tick which leaves the state alone does not split their
    /// summation.
    fn touch_window(&mut self, cell: usize, now: f64) {
        let c = &mut self.cells[cell];
        let dt = now - c.window_mark;
        if dt > 0.0 {
            c.window.guard_busy_integral += f64::from(c.channels.guard_busy()) * dt;
        }
        c.window_mark = now;
    }

    fn try_admit(&mut self, now: f64, cell: usize, call: CallType) -> AdmitDecision {
        self.touch(cell, now);
        let counted = self.counted(now);
        let c = &mut self.cells[cell];
        let (decision, next) = admit(self.s.scheme, c.channels, call, &self.s.policy);
        c.channels = next;
        let blocked = !decision.is_admitted();
        match call {
            CallType::NewCall => {
                c.window.new_attempts += 1;
                c.window.new_blocks += u64::from(blocked);
                if counted {
                    c.counts.new_attempts += 1;
                    c.counts.new_blocks += u64::from(blocked);
                    if !blocked {
                        c.counts.new_admitted += 1;
                    }
                    if decision == AdmitDecision::AdmittedBorrowed {
                        c.counts.borrowed_admissions += 1;
                    }
                }
            }
            CallType::HandoffCall => {
                c.window.handoff_attempts += 1;
                c.window.handoff_blocks += u64::from(blocked);
                if counted {
                    c.counts.handoff_attempts += 1;
                    c.counts.handoff_blocks += u64::from(blocked);
                }
            }
        }
        decision
    }

    fn start_call(&mut self, now: f64, mut record: CallRecord) -> Result<()> {
        let cell = record.cell;
        let plan = plan_call_lifecycle(
            &mut self.streams.lifecycle[cell],
            self.service_rate,
            self.dwell_rate,
            self.s.traffic.mobility_mode,
        )?;
        let call_id = record.call_id;
        let kind = match plan {
            Lifecycle::Completion(dt) => (now + dt, EventKind::Completion { cell, call_id }),
            Lifecycle::OutboundHandoff(dt) => (now + dt, EventKind::OutboundHandoff { cell, call_id }),
        };
        record.admitted_at = now;
        self.calls.insert(call_id, record);
        self.queue.schedule(kind.0, kind.1)?;
        Ok(())
    }

    fn new_call_id(&mut self) -> u64 {
        let id = self.next_call_id;
        self.next_call_id += 1;
        id
    }

    fn on_new_arrival(&mut self, now: f64, cell: usize) -> Result<String> {
        let dt = draw_exponential(&mut self.streams.new_arrivals[cell], self.s.traffic.new_call_rate)?;
        self.queue.schedule(now + dt, EventKind::NewArrival { cell })?;

        let decision = self.try_admit(now, cell, CallType::NewCall);
        if decision.is_admitted() {
            let call_id = self.new_call_id();
            let counted_origin = self.counted(now);
            self.start_call(
                now,
                CallRecord {
                    call_id,
                    cell,
                    origin_type: CallType::NewCall,
                    borrowed: decision == AdmitDecision::AdmittedBorrowed,
                    admitted_at: now,
                    origin_cell: cell,
                    counted_origin,
                },
            )?;
        }
        Ok(decision.name().to_string())
    }

    fn on_exogenous_handoff(&mut self, now: f64, cell: usize) -> Result<String> {
        let dt = draw_exponential(
            &mut self.streams.handoff_arrivals[cell],
            self.s.traffic.exogenous_handoff_rate,
        )?;
        self.queue
            .schedule(now + dt, EventKind::ExogenousHandoffArrival { cell })?;

        let decision = self.try_admit(now, cell, CallType::HandoffCall);
        if decision.is_admitted() {
            let call_id = self.new_call_id();
            self.start_call(
                now,
                CallRecord {
                    call_id,
                    cell,
                    origin_type: CallType::HandoffCall,
                    borrowed: false,
                    admitted_at: now,
                    origin_cell: cell,
                    counted_origin: false,
                },
            )?;
        }
        Ok(decision.name().to_string())
    }

    fn take_call(&mut self, cell: usize, call_id: u64) -> Result<CallRecord> {
        let call = self
            .calls
            .remove(&call_id)
            .ok_or_else(|| logic(format!("event for unknown call {call_id}")))?;
        if call.cell != cell {
            return Err(logic(format!(
                "call {call_id} expected in cell {cell} but is in cell {}",
                call.cell
            )));
        }
        Ok(call)
    }

    fn free_channel(&mut self, now: f64, call: &CallRecord) -> Result<()> {
        self.touch(call.cell, now);
        let c = &mut self.cells[call.cell];
        c.channels = release(c.channels, call.borrowed)?;
        Ok(())
    }

    fn on_completion(&mut self, now: f64, cell: usize, call_id: u64) -> Result<String> {
        let call = self.take_call(cell, call_id)?;
        self.free_channel(now, &call)?;
        if self.counted(now) {
            self.cells[cell].counts.completions += 1;
        }
        Ok("Released".to_string())
    }

    fn on_outbound_handoff(&mut self, now: f64, cell: usize, call_id: u64) -> Result<String> {
        let call = self.take_call(cell, call_id)?;
        self.free_channel(now, &call)?;
        let target = pick_neighbor(&self.neighbor_lists[cell], cell, &mut self.streams.routing[cell])?;
        let decision = self.try_admit(now, target, CallType::HandoffCall);
        if decision.is_admitted() {
            self.start_call(
                now,
                CallRecord {
                    cell: target,
                    origin_type: CallType::HandoffCall,
                    borrowed: false,
                    ..call
                },
            )?;
        } else if call.counted_origin {
            self.cells[call.origin_cell].counts.drops += 1;
        }
        Ok(format!("{}@{target}", decision.name()))
    }

    fn on_tick(&mut self, now: f64, cell: usize) -> Result<String> {
        self.touch_window(cell, now);
        let period = self.s.policy.adjust_period;
        let counted = self.counted(now);
        let c = &mut self.cells[cell];
        c.window.window_length = now - c.window_start;
        let before = c.channels.guard;
        let after = adjust_guard(&c.window, &self.s.policy, before);
        if counted {
            self.ticks.push(ControllerTick {
                time: now,
                cell,
                window: c.window,
                utilization: guard_utilization(&c.window, before),
                guard_before: before,
                guard_after: after,
            });
        }
        if after != before {
            self.touch(cell, now);
        }
        let c = &mut self.cells[cell];
        c.channels.guard = after;
        c.window = WindowStats::default();
        c.window_start = now;
        self.queue.schedule(now + period, EventKind::AdjustTick { cell })?;
        Ok(format!("S_R={before}->{after}"))
    }

    fn check_conservation(&self) -> Result<()> {
        let mut live = vec![0u32; self.cells.len()];
        let mut borrowed = vec![0u32; self.cells.len()];
        for call in self.calls.values() {
            live[call.cell] += 1;
            borrowed[call.cell] += u32::from(call.borrowed);
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.channels.busy != live[i] || c.channels.busy_borrowed != borrowed[i] {
                return Err(logic(format!(
                    "cell {i}: busy={} borrowed={} but {} live calls ({} borrowed)",
                    c.channels.busy, c.channels.busy_borrowed, live[i], borrowed[i]
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_scenario, PolicyParams, Scenario, TrafficParams};

    fn single_cell(scheme: SchemeKind, s: u32, guard: u32, lambda_n: f64, lambda_h: f64) -> Scenario {
        let mut policy = PolicyParams::with_defaults(s, guard);
        policy.guard_min = guard;
        policy.guard_max = guard;
        policy.borrow_reserve = guard;
        Scenario {
            topology: Topology::single(),
            traffic: TrafficParams {
                new_call_rate: lambda_n,
                exogenous_handoff_rate: lambda_h,
                mean_call_duration: 1.0,
                mean_cell_dwell: None,
                mobility_mode: MobilityMode::Exogenous,
            },
            policy,
            scheme,
            sim_duration: 1000.0,
            warmup: 100.0,
            replications: 1,
            base_seed: 99,
        }
    }

    #[test]
    fn exogenous_lifecycle_always_completes() {
        let mut st = RngStream::new(1, 0, "l");
        for _ in 0..1000 {
            let plan = plan_call_lifecycle(&mut st, 1.0, 0.0, MobilityMode::Exogenous).unwrap();
            assert!(matches!(plan, Lifecycle::Completion(d) if d > 0.0));
        }
    }

    #[test]
    fn lifecycle_rejects_bad_rates() {
        let mut st = RngStream::new(1, 0, "l");
        assert!(plan_call_lifecycle(&mut st, 0.0, 1.0, MobilityMode::Exogenous).is_err());
        assert!(plan_call_lifecycle(&mut st, 1.0, 0.0, MobilityMode::Endogenous).is_err());
    }

    fn handoff_fraction(mu: f64, eta: f64) -> f64 {
        let mut st = RngStream::new(7, 0, "competing");
        let n = 1_000_000;
        let handoffs = (0..n)
            .filter(|_| {
                matches!(
                    plan_call_lifecycle(&mut st, mu, eta, MobilityMode::Endogenous).unwrap(),
                    Lifecycle::OutboundHandoff(_)
                )
            })
            .count();
        handoffs as f64 / n as f64
    }

    #[test]
    fn competing_exponentials_split() {
        // P(dwell < duration) = eta / (mu + eta)
        assert!((handoff_fraction(1.0, 1.0) - 0.5).abs() < 0.005);
        assert!((handoff_fraction(1.0, 3.0) - 0.75).abs() < 0.005);
    }

    #[test]
    fn routing_is_uniform_over_neighbors() {
        let ring = Topology::ring(6);
        let mut st = RngStream::new(3, 0, "route");
        let n = 1_000_000;
        let mut to_one = 0usize;
        for _ in 0..n {
            match route_handoff(&ring, 0, &mut st).unwrap() {
                1 => to_one += 1,
                5 => {}
                other => panic!("routed to non-neighbor {other}"),
            }
        }
        assert!((to_one as f64 / n as f64 - 0.5).abs() < 0.01);

        let pair = Topology { cell_count: 2, adjacency: vec![[0, 1]] };
        assert_eq!(route_handoff(&pair, 1, &mut st).unwrap(), 0);
        assert!(matches!(route_handoff(&Topology::single(), 0, &mut st), Err(Error::Config(_))));
    }

    #[test]
    fn no_traffic_no_attempts() {
        let v = validate_scenario(single_cell(SchemeKind::Fca, 4, 0, 0.0, 0.0)).unwrap();
        let r = run_replication(&v, 0).unwrap();
        let t = r.totals();
        assert_eq!((t.new_attempts, t.new_blocks, t.handoff_attempts, t.handoff_blocks), (0, 0, 0, 0));
        assert_eq!(r.live_calls_at_end, 0);
    }

    #[test]
    fn replication_is_deterministic() {
        let mut s = Scenario::reference();
        s.sim_duration = 300.0;
        s.warmup = 30.0;
        s.policy.adjust_period = 20.0;
        let v = validate_scenario(s).unwrap();
        let a = run_replication(&v, 3).unwrap();
        let b = run_replication(&v, 3).unwrap();
        assert_eq!(a, b);
        let c = run_replication(&v, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn endogenous_counts_are_consistent() {
        let mut s = Scenario::reference();
        s.sim_duration = 500.0;
        s.warmup = 50.0;
        s.traffic.new_call_rate = 9.0;
        s.policy.adjust_period = 25.0;
        for scheme in SchemeKind::ALL {
            s.scheme = scheme;
            let v = validate_scenario(s.clone()).unwrap();
            let r = run_replication(&v, 0).unwrap();
            let t = r.totals();
            assert!(t.new_blocks <= t.new_attempts);
            assert!(t.handoff_blocks <= t.handoff_attempts);
            assert!(t.drops <= t.handoff_blocks);
            assert!(t.new_blocks > 0 && t.handoff_attempts > 0, "{scheme}: {t:?}");
            if scheme != SchemeKind::DgcaCbs {
                assert_eq!(t.borrowed_admissions, 0);
            }
            if !scheme.is_dynamic() {
                assert!(r.ticks.is_empty());
            }
        }
    }

    #[test]
    fn trace_lines_cover_every_event() {
        let mut s = single_cell(SchemeKind::DgcaCbs, 3, 1, 2.0, 1.0);
        s.policy.guard_max = 2;
        s.policy.borrow_reserve = 0;
        s.sim_duration = 50.0;
        s.warmup = 0.0;
        s.policy.adjust_period = 10.0;
        let v = validate_scenario(s).unwrap();
        let mut trace = Vec::new();
        let r = run_replication_traced(&v, 0, &mut trace).unwrap();
        assert_eq!(r, run_replication(&v, 0).unwrap());
        assert!(trace.windows(2).all(|w| w[0].time <= w[1].time));
        let ticks = trace.iter().filter(|t| t.kind == "AdjustTick").count();
        assert_eq!(ticks, 5);
        let line = trace[0].to_line();
        assert_eq!(line.split('\t').count(), 6);
    }
}
