//! Average and instantaneous mixing times.
//!
//! The average mixing time is `M_ε = min{T | ∀t ≥ T : ‖P̄_t − π‖ ≤ ε}` and the
//! instantaneous one `I_ε = min{t | ‖P_t − π‖ ≤ ε}`, both in the
//! unnormalized total variation `Σ_v |A(v) − B(v)|`. At a finite horizon the
//! "for all t" part is checked on a trailing guard window.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Result, WalkError};
use crate::evolution::{MarkedCoinSpec, WalkOperator, Walker};
use crate::fit::{fit_sqrt_nlogn, power_law_fit, sqrt_n_log_n, FitResult};
use crate::lattice::{make_global_uniform, make_localized_uniform_coin, Distribution, LatticeGeometry, WalkState};
use crate::limiting::{limiting_distribution, RunningAverage};
use crate::search::stationary_reference_marked;
use crate::spectral::build_eigensystem;

/// Fraction of the horizon, at the end, that must stay below the threshold.
pub const GUARD_FRACTION: f64 = 0.2;

/// Safety factor applied to `ε` inside the guard window.
pub const GUARD_MARGIN: f64 = 0.9;

/// Averaging horizon used for the marked walk's reference distribution.
pub const MARKED_REFERENCE_STEPS: usize = 10_000;

/// `max(10⁴, ⌈50 √(N ln N)⌉)`.
pub fn default_horizon(geometry: LatticeGeometry) -> usize {
    let scaled = (50.0 * sqrt_n_log_n(geometry.vertices())).ceil() as usize;
    scaled.max(10_000)
}

/// Distances to the reference after `t` steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub t: usize,
    /// `‖P̄_t − π‖`, with `P̄_t` the mean of `P_0 … P_{t−1}`.
    pub tv_avg: f64,
    /// `‖P_t − π‖`.
    pub tv_inst: f64,
    /// `‖P̄_t − U‖` against the uniform distribution.
    pub tv_avg_uniform: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceTrace {
    /// `‖P_0 − π‖`.
    pub initial_inst: f64,
    /// Rows for `t = 1..=horizon`.
    pub points: Vec<TracePoint>,
}

impl DistanceTrace {
    pub fn horizon(&self) -> usize {
        self.points.len()
    }

    /// Average and instantaneous mixing times for one threshold.
    pub fn mixing_times(&self, epsilon: f64) -> Result<MixingTimes> {
        if !(epsilon > 0.0) {
            return Err(WalkError::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if epsilon >= 2.0 {
            log::warn!("epsilon {epsilon} >= 2: every distribution is within range, mixing is trivial");
            return Ok(MixingTimes {
                epsilon,
                average: Some(0),
                instantaneous: Some(0),
            });
        }
        let horizon = self.horizon();
        let average = match self.points.iter().rev().find(|p| p.tv_avg > epsilon) {
            None => Some(0),
            Some(last) => {
                let guard_start = ((1.0 - GUARD_FRACTION) * horizon as f64).floor() as usize;
                let guard_ok = self
                    .points
                    .iter()
                    .filter(|p| p.t > guard_start)
                    .all(|p| p.tv_avg < GUARD_MARGIN * epsilon);
                (guard_ok && last.t < horizon).then_some(last.t + 1)
            }
        };
        let instantaneous = if self.initial_inst <= epsilon {
            Some(0)
        } else {
            self.points.iter().find(|p| p.tv_inst <= epsilon).map(|p| p.t)
        };
        Ok(MixingTimes {
            epsilon,
            average,
            instantaneous,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingTimes {
    pub epsilon: f64,
    /// `None` when not reached within the horizon.
    pub average: Option<usize>,
    pub instantaneous: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingResult {
    pub times: MixingTimes,
    pub horizon: usize,
    pub trace: DistanceTrace,
}

/// Runs the walk for `horizon` steps and records distances to `reference`.
pub fn distance_trace(
    initial: &WalkState,
    op: &WalkOperator,
    reference: &Distribution,
    horizon: usize,
) -> Result<DistanceTrace> {
    let g = initial.geometry();
    if reference.geometry() != g {
        return Err(WalkError::ShapeMismatch {
            left: g.side(),
            right: reference.geometry().side(),
        });
    }
    if (reference.total_mass() - 1.0).abs() > crate::lattice::MASS_TOLERANCE {
        return Err(WalkError::InvalidDistribution("reference does not sum to 1".into()));
    }
    let pi = reference.probabilities();
    let uniform = vec![1.0 / g.vertices() as f64; g.vertices()];
    let mut walker = Walker::new(initial.clone(), op)?;
    let mut avg = RunningAverage::new(g);
    let mut probs = vec![0.0; g.vertices()];
    walker.measure_into(&mut probs);
    let initial_inst = crate::lattice::tv_slices(&probs, pi);
    let mut points = Vec::with_capacity(horizon);
    for t in 1..=horizon {
        avg.add(&probs);
        walker.advance();
        walker.measure_into(&mut probs);
        points.push(TracePoint {
            t,
            tv_avg: avg.distance_to(pi),
            tv_inst: crate::lattice::tv_slices(&probs, pi),
            tv_avg_uniform: avg.distance_to(&uniform),
        });
    }
    Ok(DistanceTrace { initial_inst, points })
}

/// Mixing times of a walk to a reference distribution.
pub fn mixing_time(
    initial: &WalkState,
    op: &WalkOperator,
    reference: &Distribution,
    epsilon: f64,
    horizon: usize,
) -> Result<MixingResult> {
    if !(epsilon > 0.0) {
        return Err(WalkError::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    if horizon == 0 {
        return Err(WalkError::Domain("horizon must be at least 1".into()));
    }
    let trace = distance_trace(initial, op, reference, horizon)?;
    Ok(MixingResult {
        times: trace.mixing_times(epsilon)?,
        horizon,
        trace,
    })
}

/// Upper bound `(π / (TΔ)) ln(N d / 2 + 1)` on `‖P̄_T − π‖` for degree `d = 4`.
pub fn aharonov_bound(geometry: LatticeGeometry, gap: f64, steps: usize) -> f64 {
    if steps == 0 || !(gap > 0.0) {
        return f64::INFINITY;
    }
    let nd = (geometry.vertices() * geometry.degree()) as f64;
    PI / (steps as f64 * gap) * (nd / 2.0 + 1.0).ln()
}

/// Power-law fit of `‖P̄_t − π‖` against `t` over `t_lo ≤ t ≤ t_hi`.
/// The slope is the decay exponent, close to `−1` for a coherent walk.
pub fn averaging_decay_fit(trace: &DistanceTrace, t_lo: usize, t_hi: usize) -> Result<FitResult> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = trace
        .points
        .iter()
        .filter(|p| p.t >= t_lo && p.t <= t_hi && p.tv_avg > 0.0)
        .map(|p| (p.t as f64, p.tv_avg))
        .unzip();
    power_law_fit(&xs, &ys)
}

/// Which walk a sweep measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    /// Grover coin from `|u⟩ ⊗ |0,0⟩` against the exact limit.
    Grover,
    /// Marked coin at `(0,0)` from the uniform state against `P̄(T = 10⁴)`.
    Marked,
}

impl WalkKind {
    pub fn name(&self) -> &'static str {
        match self {
            WalkKind::Grover => "grover",
            WalkKind::Marked => "marked",
        }
    }
}

/// Initial state, operator and reference distribution of a standard experiment.
pub fn standard_setup(
    geometry: LatticeGeometry,
    kind: WalkKind,
) -> Result<(WalkState, WalkOperator, Distribution)> {
    match kind {
        WalkKind::Grover => {
            let initial = make_localized_uniform_coin(geometry, 0, 0)?;
            let system = build_eigensystem(geometry)?;
            let reference = limiting_distribution(&system, &initial)?;
            Ok((initial, WalkOperator::grover(), reference))
        }
        WalkKind::Marked => {
            let op: WalkOperator = MarkedCoinSpec::grover(geometry, 0, 0)?.into();
            let reference = stationary_reference_marked(geometry, (0, 0), MARKED_REFERENCE_STEPS)?;
            Ok((make_global_uniform(geometry), op, reference))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub side: usize,
    pub vertices: usize,
    pub times: MixingTimes,
    pub horizon: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingSweep {
    pub kind: WalkKind,
    pub records: Vec<SweepRecord>,
    /// `M_ε` against `√(N ln N)`, one fit per `ε`.
    pub size_fits: Vec<(f64, FitResult)>,
    /// Exponent `c` of `M_ε ∝ ε^{−c}`, one fit per side.
    pub epsilon_fits: Vec<(usize, FitResult)>,
    /// Records excluded from fits because `M_ε` was not reached.
    pub unreached: Vec<(usize, f64)>,
}

impl ScalingSweep {
    /// Mean `ε`-exponent over all sides with a valid fit.
    pub fn mean_exponent(&self) -> Option<f64> {
        if self.epsilon_fits.is_empty() {
            return None;
        }
        let sum: f64 = self.epsilon_fits.iter().map(|(_, f)| -f.slope).sum();
        Some(sum / self.epsilon_fits.len() as f64)
    }
}

/// Measures `M_ε` over sides and thresholds. One trace per side serves every
/// threshold; sides run in parallel, results keep input order.
pub fn scaling_sweep(
    sides: &[usize],
    epsilons: &[f64],
    kind: WalkKind,
    horizon: Option<usize>,
) -> Result<ScalingSweep> {
    if sides.windows(2).any(|w| w[0] >= w[1]) {
        return Err(WalkError::Domain("sides must be strictly increasing".into()));
    }
    if let Some(s) = sides.iter().find(|s| *s % 2 == 0) {
        return Err(WalkError::Domain(format!("sweeps use odd sides only, got {s}")));
    }
    let per_side: Vec<Result<Vec<SweepRecord>>> = sides
        .par_iter()
        .map(|&side| {
            let g = LatticeGeometry::new(side)?;
            let horizon = horizon.unwrap_or_else(|| default_horizon(g));
            let (initial, op, reference) = standard_setup(g, kind)?;
            let trace = distance_trace(&initial, &op, &reference, horizon)?;
            epsilons
                .iter()
                .map(|&eps| {
                    Ok(SweepRecord {
                        side,
                        vertices: g.vertices(),
                        times: trace.mixing_times(eps)?,
                        horizon,
                    })
                })
                .collect()
        })
        .collect();
    let mut records = Vec::new();
    for r in per_side {
        records.extend(r?);
    }
    let unreached = records
        .iter()
        .filter(|r| r.times.average.is_none())
        .map(|r| (r.side, r.times.epsilon))
        .collect();

    let mut size_fits = Vec::new();
    for &eps in epsilons {
        let points: Vec<(usize, f64)> = records
            .iter()
            .filter(|r| r.times.epsilon == eps)
            .filter_map(|r| r.times.average.map(|m| (r.vertices, m as f64)))
            .collect();
        if let Ok(fit) = fit_sqrt_nlogn(&points) {
            size_fits.push((eps, fit));
        }
    }
    let mut epsilon_fits = Vec::new();
    for &side in sides {
        let (xs, ys): (Vec<f64>, Vec<f64>) = records
            .iter()
            .filter(|r| r.side == side)
            .filter_map(|r| r.times.average.filter(|m| *m > 0).map(|m| (r.times.epsilon, m as f64)))
            .unzip();
        if xs.len() >= 2 {
            if let Ok(fit) = power_law_fit(&xs, &ys) {
                epsilon_fits.push((side, fit));
            }
        }
    }
    Ok(ScalingSweep {
        kind,
        records,
        size_fits,
        epsilon_fits,
        unreached,
    })
}
