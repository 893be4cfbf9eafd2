//! Exact blocking probabilities for static guard-channel cells.
//!
//! A cell with `S` channels and `g` guard channels fed by Poisson new calls
//! and Poisson handoffs, with exponential holding times, is a birth-death
//! chain on the number of busy channels: both streams are admitted below
//! `S - g`, only handoffs between `S - g` and `S`. These closed forms are the
//! ground truth the simulator is validated against.

use crate::error::{domain, Result};

/// Parameters of a single-cell cutoff-priority chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainSpec {
    pub channels: u32,
    /// Guard count; new calls are admitted only while fewer than
    /// `channels - guard` channels are busy.
    pub guard: u32,
    pub new_rate: f64,
    pub handoff_rate: f64,
    /// Per-call service rate.
    pub service_rate: f64,
}

impl ChainSpec {
    pub fn validate(&self) -> Result<()> {
        let nonneg = |x: f64| x.is_finite() && x >= 0.0;
        if self.guard > self.channels {
            return Err(domain(format!(
                "guard count {} exceeds channel count {}",
                self.guard, self.channels
            )));
        }
        if !nonneg(self.new_rate) || !nonneg(self.handoff_rate) {
            return Err(domain("arrival rates must be finite and >= 0"));
        }
        if !(self.service_rate.is_finite() && self.service_rate > 0.0) {
            return Err(domain("service rate must be finite and > 0"));
        }
        if self.new_rate + self.handoff_rate <= 0.0 {
            return Err(domain("total arrival rate must be positive"));
        }
        Ok(())
    }

    /// Arrival rate seen in state `n` (channels busy).
    pub fn birth_rate(&self, n: u32) -> f64 {
        if n >= self.channels {
            0.0
        } else if n < self.channels - self.guard {
            self.new_rate + self.handoff_rate
        } else {
            self.handoff_rate
        }
    }
}

/// Stationary distribution `p[0..=S]` of the number of busy channels.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Blocking {
    pub new_call: f64,
    pub handoff: f64,
}

/// Erlang-B blocking for `channels` servers offered `load` Erlangs, by the
/// recursion `B_k = a B_{k-1} / (k + a B_{k-1})`.
pub fn erlang_b(channels: u32, load: f64) -> Result<f64> {
    if !(load.is_finite() && load >= 0.0) {
        return Err(domain(format!("offered load must be finite and >= 0, got {load}")));
    }
    let mut b = 1.0;
    for k in 1..=channels {
        let ab = load * b;
        b = ab / (f64::from(k) + ab);
    }
    Ok(b)
}

/// Solve the cutoff-priority chain. Products of birth/death ratios are
/// rescaled whenever the running sum grows large, so `S` in the tens of
/// thousands is fine.
pub fn cutoff_steady_state(spec: &ChainSpec) -> Result<SteadyState> {
    spec.validate()?;
    const RESCALE_AT: f64 = 1e250;
    let s = spec.channels as usize;
    let mut p = Vec::with_capacity(s + 1);
    p.push(1.0f64);
    let mut sum = 1.0f64;
    for n in 0..spec.channels {
        let ratio = spec.birth_rate(n) / (f64::from(n + 1) * spec.service_rate);
        let next = p[n as usize] * ratio;
        p.push(next);
        sum += next;
        if sum > RESCALE_AT {
            for x in p.iter_mut() {
                *x /= sum;
            }
            sum = 1.0;
        }
    }
    let total: f64 = p.iter().sum();
    for x in p.iter_mut() {
        *x /= total;
    }
    Ok(SteadyState { p })
}

/// Handoffs are lost only in the full state; new calls from `S - g` up.
pub fn blocking_probabilities(ss: &SteadyState, spec: &ChainSpec) -> Blocking {
    let s = spec.channels as usize;
    let cutoff = (spec.channels - spec.guard.min(spec.channels)) as usize;
    Blocking {
        new_call: ss.p[cutoff..=s].iter().sum::<f64>().min(1.0),
        handoff: ss.p[s],
    }
}

/// Solve and evaluate in one step.
pub fn cutoff_blocking(spec: &ChainSpec) -> Result<Blocking> {
    Ok(blocking_probabilities(&cutoff_steady_state(spec)?, spec))
}

/// Blocking under guard channels with borrowing and a fixed guard count.
///
/// Borrowing moves the new-call cutoff from `S - S_R` to `S - r`, so this is
/// the cutoff chain with `g = r`.
pub fn predicted_cbs_blocking(
    channels: u32,
    guard: u32,
    reserve: u32,
    new_rate: f64,
    handoff_rate: f64,
    service_rate: f64,
) -> Result<Blocking> {
    if reserve > guard || guard > channels {
        return Err(domain(format!(
            "need borrow_reserve <= guard <= channels, got {reserve} <= {guard} <= {channels}"
        )));
    }
    cutoff_blocking(&ChainSpec {
        channels,
        guard: reserve,
        new_rate,
        handoff_rate,
        service_rate,
    })
}
