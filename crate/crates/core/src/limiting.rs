//! Limiting (time-averaged) distributions.
//!
//! Unitary walks never converge pointwise, but the Cesàro mean
//! `P̄(v, T) = (1/T) Σ_{t<T} P(v, t)` does. Its limit only keeps the diagonal
//! terms of the spectral expansion within each eigenvalue class:
//!
//! ```text
//! π(v) = Σ_λ Σ_coin | Σ_{i : λ_i = λ} a_i ψ_i(coin, v) |²
//! ```
//!
//! where `a_i` are the coefficients of the initial state in the eigenbasis of
//! `U`. Each class is evaluated in momentum space: small classes through the
//! pair sum `Σ_{k,k'} a_k ā_{k'} ⟨ν_{k'}|ν_k⟩ ω^{(k−k')·v} / N`, which collapses
//! to one inverse transform for all of them, large classes through their own
//! position-space field.

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::evolution::{WalkOperator, Walker};
use crate::fourier::TorusFft;
use crate::lattice::{Distribution, LatticeGeometry, WalkState, NORM_TOLERANCE};
use crate::spectral::{inner, EigenRef, EigenSystem};

/// Coefficients below this modulus are dropped from the class sums.
const NEGLIGIBLE_COEFFICIENT: f64 = 1e-15;

/// An initial state expanded in the eigenbasis of the walk operator.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<'a> {
    system: &'a EigenSystem,
    coefficients: Vec<[Complex64; 4]>,
}

/// A term of the expansion that survives in the limit.
#[derive(Debug, Clone, Copy)]
pub struct ClassMember {
    pub eigen: EigenRef,
    pub coefficient: Complex64,
}

impl<'a> SpectralDecomposition<'a> {
    pub fn new(system: &'a EigenSystem, initial: &WalkState) -> Result<Self> {
        let norm = initial.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized(norm));
        }
        Ok(Self {
            system,
            coefficients: system.decompose(initial)?,
        })
    }

    pub fn coefficients(&self) -> &[[Complex64; 4]] {
        &self.coefficients
    }

    /// `Σ |a_i|²`; equals the squared norm of the initial state.
    pub fn weight(&self) -> f64 {
        self.coefficients.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    /// Non-negligible terms grouped by eigenvalue class.
    pub fn classes(&self) -> Vec<Vec<ClassMember>> {
        let mut classes = vec![Vec::new(); self.system.class_values().len()];
        for (block, coeffs) in self.coefficients.iter().enumerate() {
            for (pair, a) in coeffs.iter().enumerate() {
                if a.norm() < NEGLIGIBLE_COEFFICIENT {
                    continue;
                }
                let eigen = EigenRef { block, pair };
                classes[self.system.class_of(eigen)].push(ClassMember {
                    eigen,
                    coefficient: *a,
                });
            }
        }
        classes
    }

    /// The `T → ∞` limit of the time-averaged distribution.
    pub fn limiting_distribution(&self) -> Distribution {
        let g = self.system.geometry();
        let side = g.side();
        let n = g.vertices();
        let fft = TorusFft::new(g);
        let zero = Complex64::new(0.0, 0.0);

        let mut pair_sum = vec![zero; n];
        let mut dense = vec![0.0; n];
        for members in self.classes() {
            if members.len() * members.len() > 8 * n {
                let mut channels: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![zero; n]);
                for m in &members {
                    let pair = self.system.pair(m.eigen);
                    for (c, ch) in channels.iter_mut().enumerate() {
                        ch[m.eigen.block] += m.coefficient * pair.vector[c];
                    }
                }
                let field = fft.momentum_to_amplitudes(channels);
                for (p, coins) in dense.iter_mut().zip(field.chunks_exact(4)) {
                    *p += coins.iter().map(|a| a.norm_sqr()).sum::<f64>();
                }
                continue;
            }
            for a in &members {
                let (ax, ay) = g.vertex_coords(a.eigen.block);
                let va = &self.system.pair(a.eigen).vector;
                for b in &members {
                    let (bx, by) = g.vertex_coords(b.eigen.block);
                    let vb = &self.system.pair(b.eigen).vector;
                    let q = g.vertex_index((ax + side - bx) % side, (ay + side - by) % side);
                    pair_sum[q] += a.coefficient * b.coefficient.conj() * inner(vb, va);
                }
            }
        }
        fft.inverse(&mut pair_sum);
        let scale = 1.0 / (n as f64).sqrt();
        let probabilities = pair_sum
            .iter()
            .zip(&dense)
            .map(|(f, d)| (f.re * scale + d).max(0.0))
            .collect();
        Distribution::from_raw(g, probabilities)
    }
}

/// Exact limiting distribution of the Grover walk on an odd torus.
pub fn limiting_distribution(system: &EigenSystem, initial: &WalkState) -> Result<Distribution> {
    let g = system.geometry();
    if !g.is_odd() {
        return Err(WalkError::Domain(format!(
            "the analytic limiting distribution is only supported on odd lattices (side {})",
            g.side()
        )));
    }
    Ok(SpectralDecomposition::new(system, initial)?.limiting_distribution())
}

/// `π(0, 0) = (4N − 8√N + 5) / N²` for the walk started at `|u⟩ ⊗ |0, 0⟩`.
pub fn limiting_closed_form_origin(geometry: LatticeGeometry) -> Result<f64> {
    if !geometry.is_odd() {
        return Err(WalkError::Domain(format!(
            "closed form holds for odd lattices only (side {})",
            geometry.side()
        )));
    }
    let side = geometry.side() as f64;
    let n = side * side;
    Ok((4.0 * n - 8.0 * side + 5.0) / (n * n))
}

/// Running sum of distributions, for Cesàro means.
#[derive(Debug, Clone)]
pub struct RunningAverage {
    sum: Vec<f64>,
    count: usize,
}

impl RunningAverage {
    pub fn new(geometry: LatticeGeometry) -> Self {
        Self {
            sum: vec![0.0; geometry.vertices()],
            count: 0,
        }
    }

    pub fn add(&mut self, probabilities: &[f64]) {
        for (s, p) in self.sum.iter_mut().zip(probabilities) {
            *s += p;
        }
        self.count += 1;
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Total variation between the current mean and `reference`.
    pub fn distance_to(&self, reference: &[f64]) -> f64 {
        let inv = 1.0 / self.count as f64;
        self.sum
            .iter()
            .zip(reference)
            .map(|(s, r)| (s * inv - r).abs())
            .sum()
    }

    pub fn mean(&self, geometry: LatticeGeometry) -> Distribution {
        let inv = 1.0 / self.count as f64;
        Distribution::from_raw(geometry, self.sum.iter().map(|s| s * inv).collect())
    }
}

/// `P̄(·, T) = (1/T) Σ_{t=0}^{T−1} P(·, t)`.
pub fn average_distribution(initial: &WalkState, op: &WalkOperator, steps: usize) -> Result<Distribution> {
    if steps == 0 {
        return Err(WalkError::Domain("averaging horizon must be at least 1".into()));
    }
    let g = initial.geometry();
    let mut walker = Walker::new(initial.clone(), op)?;
    let mut avg = RunningAverage::new(g);
    let mut probs = vec![0.0; g.vertices()];
    for t in 0..steps {
        if t > 0 {
            walker.advance();
        }
        walker.measure_into(&mut probs);
        avg.add(&probs);
    }
    Ok(avg.mean(g))
}

/// Vertices strictly larger than all four torus neighbours.
pub fn peaks(dist: &Distribution) -> Vec<(usize, usize)> {
    let g = dist.geometry();
    let mut out = Vec::new();
    for x in 0..g.side() {
        for y in 0..g.side() {
            let p = dist.get(x, y);
            let neighbours = [
                dist.get(g.wrap(x, 1), y),
                dist.get(g.wrap(x, -1), y),
                dist.get(x, g.wrap(y, 1)),
                dist.get(x, g.wrap(y, -1)),
            ];
            if neighbours.iter().all(|q| p > *q) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Number of strict local maxima on the torus.
pub fn peak_count(dist: &Distribution) -> usize {
    peaks(dist).len()
}

/// Relative height a local maximum needs to count as dominant.
pub const DOMINANT_PEAK_FRACTION: f64 = 0.5;

/// Strict local maxima at least `DOMINANT_PEAK_FRACTION` times as tall as the
/// global maximum, tallest first. Interference ripples of coherent walks
/// produce many low strict maxima; these are the visible peaks.
pub fn dominant_peaks(dist: &Distribution) -> Vec<(usize, usize)> {
    let top = dist.probabilities().iter().fold(0.0f64, |m, p| m.max(*p));
    let mut out: Vec<(usize, usize)> = peaks(dist)
        .into_iter()
        .filter(|&(x, y)| dist.get(x, y) >= DOMINANT_PEAK_FRACTION * top)
        .collect();
    out.sort_by(|a, b| dist.get(b.0, b.1).total_cmp(&dist.get(a.0, a.1)));
    out
}

pub fn dominant_peak_count(dist: &Distribution) -> usize {
    dominant_peaks(dist).len()
}
