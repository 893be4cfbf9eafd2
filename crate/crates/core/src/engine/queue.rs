//! Pending-event set ordered by `(time, seq)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{logic, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    NewArrival { cell: usize },
    ExogenousHandoffArrival { cell: usize },
    OutboundHandoff { cell: usize, call_id: u64 },
    Completion { cell: usize, call_id: u64 },
    AdjustTick { cell: usize },
}

impl EventKind {
    pub fn cell(&self) -> usize {
        match *self {
            EventKind::NewArrival { cell }
            | EventKind::ExogenousHandoffArrival { cell }
            | EventKind::OutboundHandoff { cell, .. }
            | EventKind::Completion { cell, .. }
            | EventKind::AdjustTick { cell } => cell,
        }
    }

    pub fn call_id(&self) -> Option<u64> {
        match *self {
            EventKind::OutboundHandoff { call_id, .. } | EventKind::Completion { call_id, .. } => {
                Some(call_id)
            }
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EventKind::NewArrival { .. } => "NewArrival",
            EventKind::ExogenousHandoffArrival { .. } => "ExogenousHandoffArrival",
            EventKind::OutboundHandoff { .. } => "OutboundHandoff",
            EventKind::Completion { .. } => "Completion",
            EventKind::AdjustTick { .. } => "AdjustTick",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub time: f64,
    pub seq: u64,
    pub kind: EventKind,
}

// Min-heap adapter: the heap pops the greatest element, so invert the order.
struct Pending(Event);

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .time
            .total_cmp(&self.0.time)
            .then_with(|| other.0.seq.cmp(&self.0.seq))
    }
}

#[derive(Default)]
pub struct EventQueue {
    heap: BinaryHeap<Pending>,
    clock: f64,
    next_seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    /// Time of the last event returned by [`advance`](Self::advance).
    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Enqueue an event; its sequence number is assigned here.
    pub fn schedule(&mut self, time: f64, kind: EventKind) -> Result<u64> {
        if time.is_nan() || time < self.clock {
            return Err(logic(format!(
                "event {} scheduled at t={time} before clock t={}",
                kind.name(),
                self.clock
            )));
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Pending(Event { time, seq, kind }));
        Ok(seq)
    }

    pub fn peek_time(&self) -> Option<f64> {
        self.heap.peek().map(|p| p.0.time)
    }

    /// Remove and return the earliest event, advancing the clock to it.
    pub fn advance(&mut self) -> Option<Event> {
        let ev = self.heap.pop()?.0;
        self.clock = ev.time;
        Some(ev)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: EventKind = EventKind::NewArrival { cell: 0 };

    #[test]
    fn schedule_then_advance() {
        let mut q = EventQueue::new();
        let seq = q.schedule(1.5, A).unwrap();
        let ev = q.advance().unwrap();
        assert_eq!((ev.time, ev.seq, ev.kind), (1.5, seq, A));
        assert!(q.advance().is_none());
    }

    #[test]
    fn earliest_time_first() {
        let mut q = EventQueue::new();
        q.next_seq = 2;
        q.schedule(1.0, A).unwrap();
        q.schedule(0.5, A).unwrap();
        let first = q.advance().unwrap();
        assert_eq!((first.time, first.seq), (0.5, 3));
    }

    #[test]
    fn equal_times_break_ties_by_seq() {
        let mut q = EventQueue::new();
        q.next_seq = 7;
        q.schedule(2.0, EventKind::AdjustTick { cell: 1 }).unwrap();
        q.next_seq = 9;
        q.schedule(2.0, A).unwrap();
        assert_eq!(q.advance().unwrap().seq, 7);
        assert_eq!(q.advance().unwrap().seq, 9);
    }

    #[test]
    fn past_event_is_logic_error() {
        let mut q = EventQueue::new();
        q.schedule(3.0, A).unwrap();
        q.advance();
        assert!(q.schedule(2.0, A).is_err());
        assert!(q.schedule(3.0, A).is_ok());
    }

    #[test]
    fn clock_never_decreases() {
        let mut q = EventQueue::new();
        let times = [5.0, 1.0, 3.0, 3.0, 0.0, 9.5, 2.25];
        for t in times {
            q.schedule(t, A).unwrap();
        }
        let mut last = f64::NEG_INFINITY;
        while let Some(ev) = q.advance() {
            assert!(ev.time >= last);
            last = ev.time;
        }
    }
}
