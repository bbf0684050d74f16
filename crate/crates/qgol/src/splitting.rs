//! Split-step compositions over the three commuting term groups.
//!
//! The Hamiltonian is a sum over three groups (flip sites mod 3); within a
//! group all terms commute, so each group exponentiates exactly. A time step
//! is a product of group exponentials. Three compositions are provided:
//!
//! * order 1 — the plain product `A B C`,
//! * order 2 — the palindrome `A/2 B/2 C B/2 A/2`,
//! * order 4 — the 5-stage Suzuki composition of the order-2 palindrome,
//!   with stage weights `w, w, 1-4w, w, w` and `w = 1/(4 - 4^(1/3))`.
//!
//! Adjacent applications of the same group merge by summing their angles, so
//! palindromic compositions chain across steps at no extra cost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order of the split-step composition. Serializes as the integer order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum SplitOrder {
    First,
    Second,
    Fourth,
}

impl TryFrom<u8> for SplitOrder {
    type Error = Error;

    fn try_from(order: u8) -> Result<Self> {
        Self::from_u8(order)
    }
}

impl From<SplitOrder> for u8 {
    fn from(order: SplitOrder) -> u8 {
        order.as_u8()
    }
}

impl SplitOrder {
    pub fn from_u8(order: u8) -> Result<Self> {
        match order {
            1 => Ok(Self::First),
            2 => Ok(Self::Second),
            4 => Ok(Self::Fourth),
            other => Err(Error::InvalidParams(format!(
                "split order must be 1, 2, or 4, got {other}"
            ))),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Self::First => 1,
            Self::Second => 2,
            Self::Fourth => 4,
        }
    }
}

/// One group application: rotate every term in `group` by `weight * dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stage {
    pub group: usize,
    pub weight: f64,
}

fn second_order_palindrome(scale: f64, out: &mut Vec<Stage>) {
    let half = 0.5 * scale;
    out.push(Stage { group: 0, weight: half });
    out.push(Stage { group: 1, weight: half });
    out.push(Stage { group: 2, weight: scale });
    out.push(Stage { group: 1, weight: half });
    out.push(Stage { group: 0, weight: half });
}

/// Unmerged stage sequence of a single step.
pub fn step_stages(order: SplitOrder) -> Vec<Stage> {
    let mut stages = Vec::new();
    match order {
        SplitOrder::First => {
            for group in 0..3 {
                stages.push(Stage { group, weight: 1.0 });
            }
        }
        SplitOrder::Second => second_order_palindrome(1.0, &mut stages),
        SplitOrder::Fourth => {
            let w = 1.0 / (4.0 - 4f64.powf(1.0 / 3.0));
            for scale in [w, w, 1.0 - 4.0 * w, w, w] {
                second_order_palindrome(scale, &mut stages);
            }
        }
    }
    stages
}

/// Stage sequence for `steps` consecutive steps, with adjacent applications
/// of the same group merged (their angles add because the group commutes
/// with itself). Weights stay in units of one `dt`.
pub fn merged_schedule(order: SplitOrder, steps: usize) -> Vec<Stage> {
    let per_step = step_stages(order);
    let mut merged: Vec<Stage> = Vec::with_capacity(per_step.len() * steps);
    for _ in 0..steps {
        for &stage in &per_step {
            match merged.last_mut() {
                Some(last) if last.group == stage.group => last.weight += stage.weight,
                _ => merged.push(stage),
            }
        }
    }
    merged
}

/// Run parameters shared by the state-vector and tensor-network integrators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolutionParams {
    /// Step size of the split-step integrator.
    pub dt: f64,
    /// Target end time; the run stops at the nearest whole sample.
    pub t_final: f64,
    /// Composition order.
    pub order: SplitOrder,
    /// Spacing of observable samples; rounded to a whole number of steps.
    pub sample_interval: f64,
    /// Duration of one generation, used as the visibility window width.
    pub generation_time: f64,
}

impl EvolutionParams {
    /// Defaults: dt = 1e-2, t_final = 100, order 4, samples every 5 dt,
    /// generation time pi/2 (a constantly gated site flips completely in
    /// exactly that time).
    pub fn new(t_final: f64) -> Self {
        let dt = 1e-2;
        Self {
            dt,
            t_final,
            order: SplitOrder::Fourth,
            sample_interval: 5.0 * dt,
            generation_time: std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "t_final must be non-negative, got {}",
                self.t_final
            )));
        }
        if self.sample_interval.is_nan() || self.sample_interval < self.dt {
            return Err(Error::InvalidParams(format!(
                "sample_interval ({}) must be at least dt ({})",
                self.sample_interval, self.dt
            )));
        }
        if !(self.generation_time > 0.0 && self.generation_time.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "generation_time must be positive, got {}",
                self.generation_time
            )));
        }
        Ok(())
    }

    /// Steps between samples (at least 1) and the number of sample blocks,
    /// i.e. the sampling grid actually realised: samples land on multiples of
    /// `steps_per_sample * dt`, ending at the multiple nearest `t_final`.
    pub fn sampling_grid(&self) -> (usize, usize) {
        let steps_per_sample = (self.sample_interval / self.dt).round().max(1.0) as usize;
        let block = steps_per_sample as f64 * self.dt;
        let blocks = (self.t_final / block).round() as usize;
        (steps_per_sample, blocks)
    }

    /// Sample spacing actually realised after rounding to whole steps.
    pub fn effective_sample_interval(&self) -> f64 {
        let (steps_per_sample, _) = self.sampling_grid();
        steps_per_sample as f64 * self.dt
    }
}
