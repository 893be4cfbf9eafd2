//! Admission control for the four schemes, the guard-channel borrowing rule,
//! and the periodic guard-count controller.
//!
//! Channels are occupancy counts measured against two thresholds: the shared
//! pool ends at `S - S_R` and the cell is full at `S`. Everything here is a
//! pure transition on explicit state.

use crate::error::{logic, Result};
use crate::model::{PolicyParams, SchemeKind};

/// Occupancy of one cell against its channel thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellChannelState {
    /// Total channels `S`.
    pub total: u32,
    /// Current guard count `S_R`.
    pub guard: u32,
    pub busy: u32,
    /// Busy channels held by new calls admitted through borrowing.
    pub busy_borrowed: u32,
}

impl CellChannelState {
    pub fn new(total: u32, guard: u32) -> Self {
        Self {
            total,
            guard,
            busy: 0,
            busy_borrowed: 0,
        }
    }

    /// Size of the pool shared by new and handoff calls, `S - S_R`.
    pub fn shared_capacity(&self) -> u32 {
        self.total.saturating_sub(self.guard)
    }

    /// Channels occupied beyond the shared pool, i.e. inside the guard band.
    pub fn guard_busy(&self) -> u32 {
        self.busy.saturating_sub(self.shared_capacity())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CallType {
    NewCall,
    HandoffCall,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdmitDecision {
    AdmittedShared,
    /// Handoff call placed on a guard channel.
    AdmittedGuard,
    /// New call placed on an idle guard channel (DGCA_CBS only).
    AdmittedBorrowed,
    Blocked,
}

impl AdmitDecision {
    pub fn is_admitted(self) -> bool {
        self != AdmitDecision::Blocked
    }

    pub fn name(self) -> &'static str {
        match self {
            AdmitDecision::AdmittedShared => "AdmittedShared",
            AdmitDecision::AdmittedGuard => "AdmittedGuard",
            AdmitDecision::AdmittedBorrowed => "AdmittedBorrowed",
            AdmitDecision::Blocked => "Blocked",
        }
    }
}

/// Decide whether `call` gets a channel in a cell in `state`.
///
/// Blocked calls leave the state untouched; admitted calls take one channel.
pub fn admit(
    scheme: SchemeKind,
    state: CellChannelState,
    call: CallType,
    params: &PolicyParams,
) -> (AdmitDecision, CellChannelState) {
    let s = state.total;
    let shared = state.shared_capacity();
    let decision = match (scheme, call) {
        (SchemeKind::Fca, _) => {
            if state.busy < s {
                AdmitDecision::AdmittedShared
            } else {
                AdmitDecision::Blocked
            }
        }
        (_, CallType::HandoffCall) => {
            if state.busy < shared {
                AdmitDecision::AdmittedShared
            } else if state.busy < s {
                AdmitDecision::AdmittedGuard
            } else {
                AdmitDecision::Blocked
            }
        }
        (SchemeKind::StaticGc | SchemeKind::DynamicGc, CallType::NewCall) => {
            if state.busy < shared {
                AdmitDecision::AdmittedShared
            } else {
                AdmitDecision::Blocked
            }
        }
        (SchemeKind::DgcaCbs, CallType::NewCall) => {
            if state.busy < shared {
                AdmitDecision::AdmittedShared
            } else if state.busy < s.saturating_sub(params.borrow_reserve) {
                AdmitDecision::AdmittedBorrowed
            } else {
                AdmitDecision::Blocked
            }
        }
    };

    let mut next = state;
    if decision.is_admitted() {
        next.busy += 1;
        if decision == AdmitDecision::AdmittedBorrowed {
            next.busy_borrowed += 1;
        }
    }
    (decision, next)
}

/// Free one channel after a completion or an outbound handoff.
pub fn release(state: CellChannelState, was_borrowed: bool) -> Result<CellChannelState> {
    if state.busy == 0 {
        return Err(logic("release on a cell with no busy channels"));
    }
    if was_borrowed && state.busy_borrowed == 0 {
        return Err(logic("release of a borrowed channel when none is held"));
    }
    let mut next = state;
    next.busy -= 1;
    if was_borrowed {
        next.busy_borrowed -= 1;
    }
    Ok(next)
}

/// Per-cell observations over one controller window.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WindowStats {
    pub handoff_attempts: u64,
    pub handoff_blocks: u64,
    pub new_attempts: u64,
    pub new_blocks: u64,
    /// Time integral of channels busy inside the guard band.
    pub guard_busy_integral: f64,
    pub window_length: f64,
}

impl WindowStats {
    /// Observed handoff blocking ratio, zero when there were no attempts.
    pub fn handoff_blocking(&self) -> f64 {
        if self.handoff_attempts == 0 {
            0.0
        } else {
            self.handoff_blocks as f64 / self.handoff_attempts as f64
        }
    }
}

/// Fraction of guard capacity that was occupied during the window.
/// With no guard channels there is no idle guard capacity, so this is 1.
pub fn guard_utilization(w: &WindowStats, guard: u32) -> f64 {
    if guard == 0 {
        return 1.0;
    }
    let u = w.guard_busy_integral / (f64::from(guard) * w.window_length);
    u.clamp(0.0, 1.0)
}

/// One controller step: grow the guard band while handoffs are blocked too
/// often, shrink it while it sits mostly idle.
pub fn adjust_guard(w: &WindowStats, params: &PolicyParams, guard: u32) -> u32 {
    let p_h = w.handoff_blocking();
    if p_h > params.handoff_block_target {
        guard.saturating_add(params.adjust_step).min(params.guard_max)
    } else if guard_utilization(w, guard) < params.guard_util_floor {
        guard.saturating_sub(params.adjust_step).max(params.guard_min)
    } else {
        guard
    }
}
