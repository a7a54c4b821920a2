//! Abstract search: the Grover walk with `−I` on a marked vertex.

use rayon::prelude::*;

use crate::error::{Result, WalkError};
use crate::evolution::{MarkedCoinSpec, WalkOperator, Walker};
use crate::fit::{fit_sqrt_nlogn, sqrt_n_log_n, FitResult};
use crate::lattice::{make_global_uniform, Distribution, LatticeGeometry};
use crate::limiting::average_distribution;
use crate::mixing::{distance_trace, DistanceTrace, MixingTimes, MARKED_REFERENCE_STEPS};

/// A maximum is confirmed once the signal falls below this fraction of it.
pub const PEAK_CONFIRM_DROP: f64 = 0.5;

/// A maximum only counts if its probability exceeds this multiple of `1/N`.
pub const PEAK_FLOOR_FACTOR: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchRunResult {
    pub side: usize,
    pub marked: (usize, usize),
    /// First confirmed maximum of the marked-vertex probability.
    pub first_max_step: Option<usize>,
    pub first_max_probability: Option<f64>,
    /// `p_m(t)` for `t = 0..=t_max`.
    pub trace: Vec<f64>,
}

/// Earliest time of the running maximum at the moment the trace first drops
/// below `drop` times that maximum. Values at or below `floor` never count.
/// The period-two ripple on top of the search hump is thus ignored, and a
/// later, taller hump cannot displace a maximum that was already confirmed.
pub fn first_confirmed_peak(trace: &[f64], floor: f64, drop: f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (t, &p) in trace.iter().enumerate() {
        match best {
            Some((_, m)) if p < drop * m => return best.map(|b| b.0),
            Some((_, m)) if p <= m => {}
            _ if p > floor => best = Some((t, p)),
            _ => {}
        }
    }
    None
}

/// Evolves the uniform state under the marked coin and locates the first
/// probability maximum at the marked vertex.
pub fn run_search(geometry: LatticeGeometry, marked: (usize, usize), t_max: usize) -> Result<SearchRunResult> {
    if t_max == 0 {
        return Err(WalkError::Domain("t_max must be at least 1".into()));
    }
    let op: WalkOperator = MarkedCoinSpec::grover(geometry, marked.0, marked.1)?.into();
    let mut walker = Walker::new(make_global_uniform(geometry), &op)?;
    let mut trace = Vec::with_capacity(t_max + 1);
    trace.push(walker.state().probability_at(marked.0, marked.1));
    for _ in 0..t_max {
        walker.advance();
        trace.push(walker.state().probability_at(marked.0, marked.1));
    }
    let floor = PEAK_FLOOR_FACTOR / geometry.vertices() as f64;
    let first_max_step = first_confirmed_peak(&trace, floor, PEAK_CONFIRM_DROP);
    Ok(SearchRunResult {
        side: geometry.side(),
        marked,
        first_max_probability: first_max_step.map(|t| trace[t]),
        first_max_step,
        trace,
    })
}

/// Distribution of the search walk after exactly `t` steps.
pub fn search_snapshot(geometry: LatticeGeometry, marked: (usize, usize), t: usize) -> Result<Distribution> {
    let op: WalkOperator = MarkedCoinSpec::grover(geometry, marked.0, marked.1)?.into();
    let mut walker = Walker::new(make_global_uniform(geometry), &op)?;
    for _ in 0..t {
        walker.advance();
    }
    Ok(walker.state().measure())
}

/// `P̄(·, T)` of the search walk from the uniform state; the walk's reference
/// stationary distribution.
pub fn stationary_reference_marked(
    geometry: LatticeGeometry,
    marked: (usize, usize),
    steps: usize,
) -> Result<Distribution> {
    let op: WalkOperator = MarkedCoinSpec::grover(geometry, marked.0, marked.1)?.into();
    average_distribution(&make_global_uniform(geometry), &op, steps)
}

/// Relative depth a local minimum needs below its neighbouring maxima.
pub const OSCILLATION_BAND: f64 = 0.05;

/// Half-width of the window in which neighbouring maxima are searched.
pub const OSCILLATION_WINDOW: usize = 50;

/// Counts local minima of `series` that sit more than `band` (relative) below
/// the smaller of the highest values within `window` steps on either side.
/// Smoothly decaying curves score zero; oscillating ones score once per dip.
pub fn count_sub_band_minima(series: &[f64], band: f64, window: usize) -> usize {
    let n = series.len();
    let mut count = 0;
    for t in 1..n.saturating_sub(1) {
        let v = series[t];
        if !(v < series[t - 1] && v <= series[t + 1]) {
            continue;
        }
        let left = series[t.saturating_sub(window)..t].iter().fold(f64::NEG_INFINITY, |m, x| m.max(*x));
        let right = series[t + 1..(t + 1 + window).min(n)]
            .iter()
            .fold(f64::NEG_INFINITY, |m, x| m.max(*x));
        if left.min(right) > v * (1.0 + band) {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchMixingReport {
    pub side: usize,
    pub marked: (usize, usize),
    pub search: SearchRunResult,
    pub reference: Distribution,
    pub times: MixingTimes,
    pub trace: DistanceTrace,
    /// Sub-band minima of the average-distance trace.
    pub oscillation_minima: usize,
}

/// Mixing of the search walk to its own `P̄(T = 10⁴)`, next to its first
/// probability maximum.
pub fn search_mixing_comparison(
    geometry: LatticeGeometry,
    marked: (usize, usize),
    epsilon: f64,
    horizon: usize,
) -> Result<SearchMixingReport> {
    let reference = stationary_reference_marked(geometry, marked, MARKED_REFERENCE_STEPS)?;
    let op: WalkOperator = MarkedCoinSpec::grover(geometry, marked.0, marked.1)?.into();
    let trace = distance_trace(&make_global_uniform(geometry), &op, &reference, horizon)?;
    let times = trace.mixing_times(epsilon)?;
    let search = run_search(geometry, marked, horizon)?;
    let avg: Vec<f64> = trace.points.iter().map(|p| p.tv_avg).collect();
    Ok(SearchMixingReport {
        side: geometry.side(),
        marked,
        oscillation_minima: count_sub_band_minima(&avg, OSCILLATION_BAND, OSCILLATION_WINDOW),
        search,
        reference,
        times,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchScalingRecord {
    pub side: usize,
    pub vertices: usize,
    pub first_max_step: Option<usize>,
    pub first_max_probability: Option<f64>,
    pub average_mixing: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchScaling {
    pub epsilon: f64,
    pub records: Vec<SearchScalingRecord>,
    /// `t*` against `√(N ln N)`.
    pub first_max_fit: Option<FitResult>,
    /// `M_ε` of the search walk against `√(N ln N)`.
    pub mixing_fit: Option<FitResult>,
}

impl SearchScaling {
    /// Slope of the mixing fit over the slope of the first-maximum fit.
    pub fn slope_ratio(&self) -> Option<f64> {
        Some(self.mixing_fit.as_ref()?.slope / self.first_max_fit.as_ref()?.slope)
    }

    /// `p* ln N` per side.
    pub fn success_times_log(&self) -> Vec<(usize, f64)> {
        self.records
            .iter()
            .filter_map(|r| {
                r.first_max_probability
                    .map(|p| (r.side, p * (r.vertices as f64).ln()))
            })
            .collect()
    }
}

/// Search running time and search-walk mixing time over several sides, with
/// the marked vertex at the origin.
pub fn search_scaling(sides: &[usize], epsilon: f64, horizon: Option<usize>) -> Result<SearchScaling> {
    let records: Vec<Result<SearchScalingRecord>> = sides
        .par_iter()
        .map(|&side| {
            let g = LatticeGeometry::new(side)?;
            let horizon = horizon.unwrap_or_else(|| crate::mixing::default_horizon(g));
            let report = search_mixing_comparison(g, (0, 0), epsilon, horizon)?;
            Ok(SearchScalingRecord {
                side,
                vertices: g.vertices(),
                first_max_step: report.search.first_max_step,
                first_max_probability: report.search.first_max_probability,
                average_mixing: report.times.average,
            })
        })
        .collect();
    let records: Vec<SearchScalingRecord> = records.into_iter().collect::<Result<_>>()?;
    let first: Vec<(usize, f64)> = records
        .iter()
        .filter_map(|r| r.first_max_step.map(|t| (r.vertices, t as f64)))
        .collect();
    let mixing: Vec<(usize, f64)> = records
        .iter()
        .filter_map(|r| r.average_mixing.map(|m| (r.vertices, m as f64)))
        .collect();
    Ok(SearchScaling {
        epsilon,
        first_max_fit: fit_sqrt_nlogn(&first).ok(),
        mixing_fit: fit_sqrt_nlogn(&mixing).ok(),
        records,
    })
}

/// Expected order of the first maximum, `√(N ln N)`.
pub fn expected_search_scale(geometry: LatticeGeometry) -> f64 {
    sqrt_n_log_n(geometry.vertices())
}
