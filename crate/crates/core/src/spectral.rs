//! Momentum-space solution of the Grover walk.
//!
//! The evolution operator is block diagonal in the Fourier basis: for every
//! mode `(kx, ky)` it acts on the coin space as the 4×4 matrix
//!
//! ```text
//! G̃_{(d,s),(d',s')} = ω^{(−1)^s (δ_{d0} kx + δ_{d1} ky)} G_{(d,s⊕1),(d',s')}
//! ```
//!
//! For `(kx, ky) ≠ (0, 0)` its eigenvalues are `±1` and `e^{±iθ}` with
//! `cos θ = (cos k̃x + cos k̃y) / 2`, and the eigenvectors have closed forms.
//! Blocks where a closed-form normalization vanishes (`θ ∈ {0, π}`, which
//! only happens away from the origin on even lattices) are diagonalized
//! numerically instead.

use std::f64::consts::{PI, SQRT_2, TAU};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::evolution::grover_coin;
use crate::fourier::TorusFft;
use crate::lattice::{LatticeGeometry, WalkState};

/// Closed-form denominators below this magnitude trigger the numerical path.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Unit-circle distance below which two eigenvalues are treated as equal.
pub const EIGENVALUE_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A Fourier mode `(kx, ky)` of the torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MomentumMode {
    pub kx: usize,
    pub ky: usize,
    side: usize,
}

impl MomentumMode {
    pub fn new(geometry: LatticeGeometry, kx: usize, ky: usize) -> Result<Self> {
        if kx >= geometry.side() || ky >= geometry.side() {
            return Err(WalkError::Domain(format!(
                "mode ({kx}, {ky}) outside [0, {})",
                geometry.side()
            )));
        }
        Ok(Self {
            kx,
            ky,
            side: geometry.side(),
        })
    }

    /// `ω = e^{2πi/side}`.
    pub fn omega(&self) -> Complex64 {
        root_of_unity(1, self.side)
    }

    pub fn is_zero(&self) -> bool {
        self.kx == 0 && self.ky == 0
    }

    /// `2π kx / side`.
    pub fn angle_x(&self) -> f64 {
        TAU * self.kx as f64 / self.side as f64
    }

    pub fn angle_y(&self) -> f64 {
        TAU * self.ky as f64 / self.side as f64
    }

    /// The mode with each component folded into `[0, side/2]`.
    pub fn folded(&self) -> (usize, usize) {
        (
            self.kx.min(self.side - self.kx),
            self.ky.min(self.side - self.ky),
        )
    }
}

/// `ω^k` computed from the reduced exponent, so that `ω^side = 1` exactly.
pub fn root_of_unity(k: i64, side: usize) -> Complex64 {
    let r = k.rem_euclid(side as i64) as f64;
    let (s, c) = (TAU * r / side as f64).sin_cos();
    Complex64::new(c, s)
}

/// `(sin²(θ/2), cos²(θ/2))` for a mode, evaluated without cancellation.
fn half_angle_squares(mode: &MomentumMode) -> (f64, f64) {
    let (sx, cx) = (mode.angle_x() / 2.0).sin_cos();
    let (sy, cy) = (mode.angle_y() / 2.0).sin_cos();
    ((sx * sx + sy * sy) / 2.0, (cx * cx + cy * cy) / 2.0)
}

/// `θ ∈ (0, π]` with `cos θ = (cos(2πkx/side) + cos(2πky/side)) / 2`.
pub fn theta_of_mode(geometry: LatticeGeometry, kx: usize, ky: usize) -> Result<f64> {
    let mode = MomentumMode::new(geometry, kx, ky)?;
    if mode.is_zero() {
        return Err(WalkError::Domain(
            "θ is undefined for the (0, 0) mode".into(),
        ));
    }
    Ok(mode_theta(&mode))
}

fn mode_theta(mode: &MomentumMode) -> f64 {
    let (s2, c2) = half_angle_squares(mode);
    2.0 * s2.sqrt().atan2(c2.sqrt())
}

/// Which family an eigenpair belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EigenLabel {
    PlusOne,
    MinusOne,
    PlusTheta,
    MinusTheta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub label: EigenLabel,
    pub value: Complex64,
    /// Eigenvalue phase in `(−π, π]`.
    pub phase: f64,
    pub vector: [Complex64; 4],
}

impl EigenPair {
    fn new(label: EigenLabel, phase: f64, vector: [Complex64; 4]) -> Self {
        Self {
            label,
            value: Complex64::from_polar(1.0, phase),
            phase,
            vector,
        }
    }

    /// `λ^t`.
    pub fn power(&self, t: u64) -> Complex64 {
        match self.label {
            EigenLabel::PlusOne => Complex64::new(1.0, 0.0),
            EigenLabel::MinusOne => Complex64::new(if t % 2 == 0 { 1.0 } else { -1.0 }, 0.0),
            _ => Complex64::from_polar(1.0, self.phase * t as f64),
        }
    }
}

/// The reduced operator of one Fourier mode together with its eigenpairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedBlock {
    pub mode: MomentumMode,
    pub matrix: [[Complex64; 4]; 4],
    /// `None` for the `(0, 0)` mode.
    pub theta: Option<f64>,
    pub eigenpairs: [EigenPair; 4],
    /// Whether the eigenvectors came from the closed forms.
    pub closed_form: bool,
}

/// Builds `G̃(kx, ky)` in the canonical coin order.
pub fn reduced_matrix(mode: &MomentumMode) -> [[Complex64; 4]; 4] {
    let g = grover_coin();
    let k = [mode.kx as i64, mode.ky as i64];
    let mut m = [[ZERO; 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        let (d, s) = (r / 2, r % 2);
        let exponent = if s == 0 { k[d] } else { -k[d] };
        let phase = root_of_unity(exponent, mode.side);
        let source = 2 * d + (s ^ 1);
        for (c, entry) in row.iter_mut().enumerate() {
            *entry = phase * g.matrix()[source][c];
        }
    }
    m
}

fn mat_vec(m: &[[Complex64; 4]; 4], v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [ZERO; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl ReducedBlock {
    /// `‖G̃v − λv‖` for each eigenpair.
    pub fn residuals(&self) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (o, pair) in out.iter_mut().zip(&self.eigenpairs) {
            let gv = mat_vec(&self.matrix, &pair.vector);
            *o = gv
                .iter()
                .zip(&pair.vector)
                .map(|(a, b)| (a - pair.value * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
        }
        out
    }

    /// `max |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn orthonormality_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.eigenpairs.iter().enumerate() {
            for (j, b) in self.eigenpairs.iter().enumerate() {
                let mut ip = inner(&a.vector, &b.vector);
                if i == j {
                    ip -= 1.0;
                }
                worst = worst.max(ip.norm());
            }
        }
        worst
    }

    /// `max |Σ_j v_j v_j† − I|`.
    pub fn completeness_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                let mut acc: Complex64 = self
                    .eigenpairs
                    .iter()
                    .map(|p| p.vector[r] * p.vector[c].conj())
                    .sum();
                if r == c {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn pair(&self, label: EigenLabel) -> Option<&EigenPair> {
        self.eigenpairs.iter().find(|p| p.label == label)
    }
}

/// The uniform coin state `|u⟩ = (1,1,1,1)/2`.
pub fn uniform_coin() -> [Complex64; 4] {
    [Complex64::new(0.5, 0.0); 4]
}

/// Builds the reduced block for a mode and attaches its eigenpairs.
pub fn reduced_block(geometry: LatticeGeometry, kx: usize, ky: usize) -> Result<ReducedBlock> {
    let mode = MomentumMode::new(geometry, kx, ky)?;
    let matrix = reduced_matrix(&mode);
    if mode.is_zero() {
        return Ok(ReducedBlock {
            mode,
            matrix,
            theta: None,
            eigenpairs: origin_eigenpairs(),
            closed_form: true,
        });
    }
    let theta = mode_theta(&mode);
    let (s2, c2) = half_angle_squares(&mode);
    let sin_half = s2.sqrt();
    let cos_half = c2.sqrt();
    let sin_full = 2.0 * sin_half * cos_half;
    let degenerate = [sin_half, cos_half, sin_full]
        .iter()
        .any(|d| d.abs() < DEGENERACY_TOLERANCE);
    let (eigenpairs, closed_form) = if degenerate {
        (numerical_eigenpairs(&matrix, theta)?, false)
    } else {
        (closed_form_eigenpairs(&mode, theta, sin_half, cos_half, sin_full), true)
    };
    Ok(ReducedBlock {
        mode,
        matrix,
        theta: Some(theta),
        eigenpairs,
        closed_form,
    })
}

fn origin_eigenpairs() -> [EigenPair; 4] {
    let r = 1.0 / SQRT_2;
    let c = |a: f64, b: f64, x: f64, y: f64| {
        [
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(x, 0.0),
            Complex64::new(y, 0.0),
        ]
    };
    [
        EigenPair::new(EigenLabel::PlusOne, 0.0, c(r, -r, 0.0, 0.0)),
        EigenPair::new(EigenLabel::PlusOne, 0.0, c(0.0, 0.0, r, -r)),
        EigenPair::new(EigenLabel::PlusOne, 0.0, uniform_coin()),
        EigenPair::new(EigenLabel::MinusOne, PI, c(0.5, 0.5, -0.5, -0.5)),
    ]
}

fn closed_form_eigenpairs(
    mode: &MomentumMode,
    theta: f64,
    sin_half: f64,
    cos_half: f64,
    sin_full: f64,
) -> [EigenPair; 4] {
    let one = Complex64::new(1.0, 0.0);
    let wx = root_of_unity(mode.kx as i64, mode.side);
    let wy = root_of_unity(mode.ky as i64, mode.side);

    let plus = 1.0 / (4.0 * sin_half);
    let plus_one = [
        wx * (wy - one) * plus,
        (one - wy) * plus,
        wy * (one - wx) * plus,
        (wx - one) * plus,
    ];

    let minus = 1.0 / (4.0 * cos_half);
    let minus_one = [
        -wx * (one + wy) * minus,
        -(one + wy) * minus,
        wy * (one + wx) * minus,
        (one + wx) * minus,
    ];

    let rotating = |th: f64, sin_th: f64| {
        let pref = Complex64::new(0.0, 1.0 / (2.0 * SQRT_2 * sin_th));
        let e = Complex64::from_polar(1.0, -th);
        [
            pref * (e - wx),
            pref * (e - wx.conj()),
            pref * (e - wy),
            pref * (e - wy.conj()),
        ]
    };

    [
        EigenPair::new(EigenLabel::PlusOne, 0.0, plus_one),
        EigenPair::new(EigenLabel::MinusOne, PI, minus_one),
        EigenPair::new(EigenLabel::PlusTheta, theta, rotating(theta, sin_full)),
        EigenPair::new(EigenLabel::MinusTheta, -theta, rotating(-theta, -sin_full)),
    ]
}

/// Schur-based diagonalization. `G̃` is unitary, hence normal, so its complex
/// Schur form is diagonal and the Schur vectors are an orthonormal eigenbasis,
/// including inside degenerate eigenspaces.
fn numerical_eigenpairs(matrix: &[[Complex64; 4]; 4], theta: f64) -> Result<[EigenPair; 4]> {
    let m = Matrix4::from_fn(|r, c| matrix[r][c]);
    let (q, t) = nalgebra::Schur::new(m).unpack();
    let candidates = [
        (EigenLabel::PlusOne, 0.0),
        (EigenLabel::MinusOne, PI),
        (EigenLabel::PlusTheta, theta),
        (EigenLabel::MinusTheta, -theta),
    ];
    let mut pairs = Vec::with_capacity(4);
    for j in 0..4 {
        let lambda = t[(j, j)];
        let (label, phase) = candidates
            .iter()
            .copied()
            .min_by(|a, b| {
                let da = (lambda - Complex64::from_polar(1.0, a.1)).norm();
                let db = (lambda - Complex64::from_polar(1.0, b.1)).norm();
                da.total_cmp(&db)
            })
            .expect("non-empty candidates");
        let snapped = Complex64::from_polar(1.0, phase);
        if (lambda - snapped).norm() > 1e-8 {
            return Err(WalkError::Domain(format!(
                "numerical eigenvalue {lambda} is not in the expected spectrum"
            )));
        }
        // θ = π coincides with −1; keep the label that matches the value
        let label = if (snapped + 1.0).norm() < EIGENVALUE_TOLERANCE {
            EigenLabel::MinusOne
        } else {
            label
        };
        let phase = if label == EigenLabel::MinusOne { PI } else { phase };
        let vector = [q[(0, j)], q[(1, j)], q[(2, j)], q[(3, j)]];
        pairs.push(EigenPair::new(label, phase, vector));
    }
    Ok([pairs[0], pairs[1], pairs[2], pairs[3]])
}

/// Location of an eigenpair inside an [`EigenSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenRef {
    pub block: usize,
    pub pair: usize,
}

/// All reduced blocks of a torus, eigenvalue classes and the spectral gap.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    geometry: LatticeGeometry,
    blocks: Vec<ReducedBlock>,
    class_of: Vec<[usize; 4]>,
    class_values: Vec<Complex64>,
    gap: f64,
    gap_pair: (EigenRef, EigenRef),
}

/// Builds every block, groups equal eigenvalues and measures the gap.
pub fn build_eigensystem(geometry: LatticeGeometry) -> Result<EigenSystem> {
    let side = geometry.side();
    let mut blocks = Vec::with_capacity(geometry.vertices());
    for kx in 0..side {
        for ky in 0..side {
            blocks.push(reduced_block(geometry, kx, ky)?);
        }
    }

    let mut all: Vec<(f64, EigenRef)> = Vec::with_capacity(4 * blocks.len());
    for (b, block) in blocks.iter().enumerate() {
        for (p, pair) in block.eigenpairs.iter().enumerate() {
            all.push((pair.phase.rem_euclid(TAU), EigenRef { block: b, pair: p }));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));

    // cluster consecutive phases; angles are within the tolerance of chord length
    let mut cluster_start: Vec<usize> = vec![0];
    for i in 1..all.len() {
        if all[i].0 - all[i - 1].0 > EIGENVALUE_TOLERANCE {
            cluster_start.push(i);
        }
    }
    let mut class_of = vec![[usize::MAX; 4]; blocks.len()];
    let mut reps: Vec<(f64, EigenRef)> = Vec::with_capacity(cluster_start.len());
    for (c, &start) in cluster_start.iter().enumerate() {
        let end = cluster_start.get(c + 1).copied().unwrap_or(all.len());
        for (_, r) in &all[start..end] {
            class_of[r.block][r.pair] = c;
        }
        reps.push(all[start]);
    }
    // the last cluster may wrap around to the first one across phase 0
    if reps.len() > 1 && TAU - all[all.len() - 1].0 + all[0].0 <= EIGENVALUE_TOLERANCE {
        let last = reps.len() - 1;
        for row in class_of.iter_mut() {
            for c in row.iter_mut() {
                if *c == last {
                    *c = 0;
                }
            }
        }
        reps.pop();
    }
    let class_values = reps
        .iter()
        .map(|(_, r)| blocks[r.block].eigenpairs[r.pair].value)
        .collect();

    let mut gap = f64::INFINITY;
    let mut gap_pair = (reps[0].1, reps[0].1);
    if reps.len() > 1 {
        for i in 0..reps.len() {
            let j = (i + 1) % reps.len();
            let mut diff = reps[j].0 - reps[i].0;
            if j == 0 {
                diff += TAU;
            }
            let chord = 2.0 * (diff / 2.0).sin().abs();
            if chord < gap {
                gap = chord;
                gap_pair = (reps[i].1, reps[j].1);
            }
        }
    }

    Ok(EigenSystem {
        geometry,
        blocks,
        class_of,
        class_values,
        gap,
        gap_pair,
    })
}

impl EigenSystem {
    pub fn geometry(&self) -> LatticeGeometry {
        self.geometry
    }

    /// Blocks in row-major `(kx, ky)` order.
    pub fn blocks(&self) -> &[ReducedBlock] {
        &self.blocks
    }

    pub fn block(&self, kx: usize, ky: usize) -> &ReducedBlock {
        &self.blocks[self.geometry.vertex_index(kx, ky)]
    }

    /// Minimum unit-circle distance between distinct eigenvalues of `U`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    /// Two eigenpairs realizing [`EigenSystem::gap`].
    pub fn gap_pair(&self) -> (EigenRef, EigenRef) {
        self.gap_pair
    }

    pub fn pair(&self, r: EigenRef) -> &EigenPair {
        &self.blocks[r.block].eigenpairs[r.pair]
    }

    pub fn mode_of(&self, r: EigenRef) -> MomentumMode {
        self.blocks[r.block].mode
    }

    /// Eigenvalue class index of an eigenpair.
    pub fn class_of(&self, r: EigenRef) -> usize {
        self.class_of[r.block][r.pair]
    }

    /// One representative value per distinct eigenvalue, sorted by phase.
    pub fn class_values(&self) -> &[Complex64] {
        &self.class_values
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = (EigenRef, &EigenPair)> {
        self.blocks.iter().enumerate().flat_map(|(b, block)| {
            block
                .eigenpairs
                .iter()
                .enumerate()
                .map(move |(p, pair)| (EigenRef { block: b, pair: p }, pair))
        })
    }

    /// Coefficients `⟨ν_j, k | Ψ⟩` of a state in the eigenbasis of `U`.
    pub fn decompose(&self, state: &WalkState) -> Result<Vec<[Complex64; 4]>> {
        if state.geometry() != self.geometry {
            return Err(WalkError::ShapeMismatch {
                left: self.geometry.side(),
                right: state.geometry().side(),
            });
        }
        let fft = TorusFft::new(self.geometry);
        let channels = fft.state_to_momentum(state);
        Ok(self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, block)| {
                let local = [channels[0][k], channels[1][k], channels[2][k], channels[3][k]];
                let mut out = [ZERO; 4];
                for (o, pair) in out.iter_mut().zip(&block.eigenpairs) {
                    *o = inner(&pair.vector, &local);
                }
                out
            })
            .collect())
    }

    /// Coefficients of `|u⟩ ⊗ |0, 0⟩`: `⟨ν_j|u⟩ / √N` in every block.
    pub fn origin_coefficients(&self) -> Vec<[Complex64; 4]> {
        let scale = 1.0 / (self.geometry.vertices() as f64).sqrt();
        let u = uniform_coin();
        self.blocks
            .iter()
            .map(|block| {
                let mut out = [ZERO; 4];
                for (o, pair) in out.iter_mut().zip(&block.eigenpairs) {
                    *o = inner(&pair.vector, &u) * scale;
                }
                out
            })
            .collect()
    }

    /// `U^t` applied to a state given by its eigenbasis coefficients.
    pub fn evolve_coefficients(&self, coefficients: &[[Complex64; 4]], t: u64) -> WalkState {
        let n = self.geometry.vertices();
        let mut channels: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![ZERO; n]);
        for (k, (block, coeffs)) in self.blocks.iter().zip(coefficients).enumerate() {
            for (pair, a) in block.eigenpairs.iter().zip(coeffs) {
                let w = a * pair.power(t);
                for (c, ch) in channels.iter_mut().enumerate() {
                    ch[k] += w * pair.vector[c];
                }
            }
        }
        self.to_state(channels)
    }

    fn to_state(&self, channels: [Vec<Complex64>; 4]) -> WalkState {
        let fft = TorusFft::new(self.geometry);
        let amps = fft.momentum_to_amplitudes(channels);
        WalkState::from_amplitudes_unchecked(self.geometry, amps)
            .expect("channel sizes match the geometry")
    }

    /// `|Ψ(t)⟩` for the walk started at `|u⟩ ⊗ |0, 0⟩`, assembled mode by mode:
    /// `|u⟩/√N` on the zero mode and `(e^{iθt} ν⁺ + e^{−iθt} ν⁻)/√(2N)` elsewhere.
    pub fn fourier_evolve(&self, t: u64) -> WalkState {
        let n = self.geometry.vertices();
        let inv_sqrt_n = 1.0 / (n as f64).sqrt();
        let inv_sqrt_2n = 1.0 / (2.0 * n as f64).sqrt();
        let u = uniform_coin();
        let mut channels: [Vec<Complex64>; 4] = std::array::from_fn(|_| vec![ZERO; n]);
        for (k, block) in self.blocks.iter().enumerate() {
            let local: [Complex64; 4] = if block.mode.is_zero() {
                u.map(|c| c * inv_sqrt_n)
            } else if block.closed_form {
                let plus = block.pair(EigenLabel::PlusTheta).expect("closed form");
                let minus = block.pair(EigenLabel::MinusTheta).expect("closed form");
                let (ep, em) = (plus.power(t), minus.power(t));
                std::array::from_fn(|c| (ep * plus.vector[c] + em * minus.vector[c]) * inv_sqrt_2n)
            } else {
                let mut acc = [ZERO; 4];
                for pair in &block.eigenpairs {
                    let w = inner(&pair.vector, &u) * inv_sqrt_n * pair.power(t);
                    for (a, v) in acc.iter_mut().zip(&pair.vector) {
                        *a += w * v;
                    }
                }
                acc
            };
            for (c, ch) in channels.iter_mut().enumerate() {
                ch[k] = local[c];
            }
        }
        self.to_state(channels)
    }
}

/// Convenience wrapper: builds the eigensystem and evolves the origin state.
pub fn fourier_evolve(geometry: LatticeGeometry, t: u64) -> Result<WalkState> {
    Ok(build_eigensystem(geometry)?.fourier_evolve(t))
}

/// Small-momentum estimate of the distance between `e^{iθ(k)}` and
/// `e^{iθ(k')}`: `(√2 π / √N) |‖k‖ − ‖k'‖|` with both modes folded into
/// `[0, side/2]²`.
pub fn asymptotic_gap(a: &MomentumMode, b: &MomentumMode) -> f64 {
    let radius = |m: &MomentumMode| {
        let (x, y) = m.folded();
        ((x * x + y * y) as f64).sqrt()
    };
    SQRT_2 * PI / a.side as f64 * (radius(a) - radius(b)).abs()
}

/// Smallest value of [`asymptotic_gap`] over pairs of nonzero folded modes
/// with different radii.
pub fn asymptotic_min_gap(geometry: LatticeGeometry) -> f64 {
    let half = geometry.side() / 2;
    let mut r2: Vec<usize> = (0..=half)
        .flat_map(|x| (0..=half).map(move |y| x * x + y * y))
        .filter(|r| *r > 0)
        .collect();
    r2.sort_unstable();
    r2.dedup();
    let closest = r2
        .windows(2)
        .map(|w| (w[1] as f64).sqrt() - (w[0] as f64).sqrt())
        .fold(f64::INFINITY, f64::min);
    SQRT_2 * PI / geometry.side() as f64 * closest
}
