//! Unitary 2-D discrete Fourier transform on the torus `Z_side²`.
//!
//! Basis kets are `|k⟩ = N^{-1/2} Σ_x ω^{k·x} |x⟩` with `ω = e^{2πi/side}`, so
//! the forward transform (position → momentum) weights `ω^{−k·x}` and the
//! inverse weights `ω^{+k·x}`. Arrays are row-major in the first index.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::lattice::{LatticeGeometry, WalkState};

pub struct TorusFft {
    side: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl std::fmt::Debug for TorusFft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TorusFft").field("side", &self.side).finish()
    }
}

impl TorusFft {
    pub fn new(geometry: LatticeGeometry) -> Self {
        let side = geometry.side();
        let mut planner = FftPlanner::new();
        Self {
            side,
            forward: planner.plan_fft_forward(side),
            inverse: planner.plan_fft_inverse(side),
            scale: 1.0 / side as f64,
        }
    }

    /// Position amplitudes → momentum amplitudes, in place.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &*self.forward);
    }

    /// Momentum amplitudes → position amplitudes, in place.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &*self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], fft: &dyn Fft<f64>) {
        let n = self.side;
        assert_eq!(data.len(), n * n, "buffer does not match the torus size");
        fft.process(data);
        transpose_square(data, n);
        fft.process(data);
        transpose_square(data, n);
        for a in data.iter_mut() {
            *a *= self.scale;
        }
    }

    /// Momentum-space amplitudes of every coin channel, as four row-major
    /// `side × side` arrays.
    pub fn state_to_momentum(&self, state: &WalkState) -> [Vec<Complex64>; 4] {
        let mut channels = split_channels(state.amplitudes());
        for ch in channels.iter_mut() {
            self.forward(ch);
        }
        channels
    }

    /// Inverse of [`TorusFft::state_to_momentum`]; returns vertex-major amplitudes.
    pub fn momentum_to_amplitudes(&self, mut channels: [Vec<Complex64>; 4]) -> Vec<Complex64> {
        for ch in channels.iter_mut() {
            self.inverse(ch);
        }
        merge_channels(&channels)
    }
}

fn transpose_square(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

pub(crate) fn split_channels(amplitudes: &[Complex64]) -> [Vec<Complex64>; 4] {
    let n = amplitudes.len() / 4;
    let mut out: [Vec<Complex64>; 4] = Default::default();
    for (c, ch) in out.iter_mut().enumerate() {
        *ch = (0..n).map(|v| amplitudes[4 * v + c]).collect();
    }
    out
}

pub(crate) fn merge_channels(channels: &[Vec<Complex64>; 4]) -> Vec<Complex64> {
    let n = channels[0].len();
    let mut out = Vec::with_capacity(4 * n);
    for v in 0..n {
        for ch in channels {
            out.push(ch[v]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    /// Direct O(N²) evaluation of the forward transform.
    fn naive_forward(data: &[Complex64], n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for kx in 0..n {
            for ky in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..n {
                    for y in 0..n {
                        let phase = -TAU * ((kx * x + ky * y) % n) as f64 / n as f64;
                        acc += data[x * n + y] * Complex64::from_polar(1.0, phase);
                    }
                }
                out[kx * n + ky] = acc / n as f64;
            }
        }
        out
    }

    #[test]
    fn matches_naive_and_round_trips() {
        for n in [2, 3, 5, 6] {
            let g = LatticeGeometry::new(n).unwrap();
            let fft = TorusFft::new(g);
            let data: Vec<Complex64> = (0..n * n)
                .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let mut buf = data.clone();
            fft.forward(&mut buf);
            let want = naive_forward(&data, n);
            for (a, b) in buf.iter().zip(&want) {
                assert!((a - b).norm() < 1e-12);
            }
            fft.inverse(&mut buf);
            for (a, b) in buf.iter().zip(&data) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn point_at_origin_is_flat() {
        let g = LatticeGeometry::new(5).unwrap();
        let fft = TorusFft::new(g);
        let mut buf = vec![Complex64::new(0.0, 0.0); 25];
        buf[0] = Complex64::new(1.0, 0.0);
        fft.forward(&mut buf);
        for a in &buf {
            assert!((a - Complex64::new(0.2, 0.0)).norm() < 1e-15);
        }
    }
}
