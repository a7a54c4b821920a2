//! Walker state on the √N × √N torus and the probability distributions
//! extracted from it.
//!
//! Amplitudes are stored vertex-major: the four coin components of a vertex
//! are contiguous, vertices are ordered row-major in `x` then `y`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Result, WalkError};

/// Tolerance on the squared norm of a walk state.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A square torus with `side × side` vertices of degree four.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeGeometry {
    side: usize,
}

impl LatticeGeometry {
    pub const DEGREE: usize = 4;

    pub fn new(side: usize) -> Result<Self> {
        if side < 2 {
            return Err(WalkError::InvalidSide(side));
        }
        Ok(Self { side })
    }

    #[inline]
    pub fn side(&self) -> usize {
        self.side
    }

    /// Number of vertices `N = side²`.
    #[inline]
    pub fn vertices(&self) -> usize {
        self.side * self.side
    }

    #[inline]
    pub fn degree(&self) -> usize {
        Self::DEGREE
    }

    #[inline]
    pub fn is_odd(&self) -> bool {
        self.side % 2 == 1
    }

    /// Linear vertex index, row-major in `x` then `y`.
    #[inline]
    pub fn vertex_index(&self, x: usize, y: usize) -> usize {
        x * self.side + y
    }

    #[inline]
    pub fn vertex_coords(&self, index: usize) -> (usize, usize) {
        (index / self.side, index % self.side)
    }

    /// `(x + dx) mod side`, always non-negative.
    #[inline]
    pub fn wrap(&self, x: usize, dx: isize) -> usize {
        (x as isize + dx).rem_euclid(self.side as isize) as usize
    }

    pub fn check_vertex(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.side || y >= self.side {
            return Err(WalkError::OutOfRange {
                x,
                y,
                side: self.side,
            });
        }
        Ok(())
    }

    fn check_same(&self, other: &LatticeGeometry) -> Result<()> {
        if self != other {
            return Err(WalkError::ShapeMismatch {
                left: self.side,
                right: other.side,
            });
        }
        Ok(())
    }
}

/// One of the four coin basis states `|d, s⟩`.
///
/// `d` selects the axis (0 → x, 1 → y) and `s` the direction sign `(-1)^s`.
/// The linear order is (0,0), (0,1), (1,0), (1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoinIndex {
    d: u8,
    s: u8,
}

impl CoinIndex {
    pub const ALL: [CoinIndex; 4] = [
        CoinIndex { d: 0, s: 0 },
        CoinIndex { d: 0, s: 1 },
        CoinIndex { d: 1, s: 0 },
        CoinIndex { d: 1, s: 1 },
    ];

    pub fn new(d: u8, s: u8) -> Result<Self> {
        if d > 1 || s > 1 {
            return Err(WalkError::Domain(format!(
                "coin bits must be 0 or 1, got d={d}, s={s}"
            )));
        }
        Ok(Self { d, s })
    }

    pub fn from_linear(index: usize) -> Self {
        Self::ALL[index]
    }

    #[inline]
    pub fn linear(&self) -> usize {
        (2 * self.d + self.s) as usize
    }

    #[inline]
    pub fn axis(&self) -> u8 {
        self.d
    }

    #[inline]
    pub fn sign_bit(&self) -> u8 {
        self.s
    }

    /// The coin the flip-flop shift moves this component into.
    #[inline]
    pub fn flipped(&self) -> Self {
        Self {
            d: self.d,
            s: self.s ^ 1,
        }
    }

    /// Lattice displacement `(-1)^s` along axis `d`.
    #[inline]
    pub fn displacement(&self) -> (isize, isize) {
        let step = if self.s == 0 { 1 } else { -1 };
        if self.d == 0 {
            (step, 0)
        } else {
            (0, step)
        }
    }
}

/// Pure state of the walker: a complex amplitude for every (coin, vertex).
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    geometry: LatticeGeometry,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    /// Builds a state from vertex-major amplitudes, checking the norm.
    pub fn from_amplitudes(geometry: LatticeGeometry, amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amplitudes_unchecked(geometry, amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(WalkError::NotNormalized(norm));
        }
        Ok(state)
    }

    pub(crate) fn from_amplitudes_unchecked(
        geometry: LatticeGeometry,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if amplitudes.len() != 4 * geometry.vertices() {
            return Err(WalkError::Domain(format!(
                "expected {} amplitudes, got {}",
                4 * geometry.vertices(),
                amplitudes.len()
            )));
        }
        Ok(Self {
            geometry,
            amplitudes,
        })
    }

    pub(crate) fn zeros(geometry: LatticeGeometry) -> Self {
        Self {
            geometry,
            amplitudes: vec![Complex64::new(0.0, 0.0); 4 * geometry.vertices()],
        }
    }

    /// `|u⟩ ⊗ |x0, y0⟩`: localized at one vertex, uniform over the coin.
    pub fn localized_uniform_coin(geometry: LatticeGeometry, x0: usize, y0: usize) -> Result<Self> {
        geometry.check_vertex(x0, y0)?;
        let mut state = Self::zeros(geometry);
        let base = 4 * geometry.vertex_index(x0, y0);
        for a in &mut state.amplitudes[base..base + 4] {
            *a = Complex64::new(0.5, 0.0);
        }
        Ok(state)
    }

    /// Uniform superposition over every coin state and vertex.
    pub fn global_uniform(geometry: LatticeGeometry) -> Self {
        let amp = 1.0 / (2.0 * geometry.side() as f64);
        Self {
            geometry,
            amplitudes: vec![Complex64::new(amp, 0.0); 4 * geometry.vertices()],
        }
    }

    #[inline]
    pub fn geometry(&self) -> LatticeGeometry {
        self.geometry
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, coin: CoinIndex, x: usize, y: usize) -> Complex64 {
        self.amplitudes[4 * self.geometry.vertex_index(x, y) + coin.linear()]
    }

    /// The four coin amplitudes at a vertex.
    #[inline]
    pub fn coin_vector(&self, x: usize, y: usize) -> &[Complex64] {
        let base = 4 * self.geometry.vertex_index(x, y);
        &self.amplitudes[base..base + 4]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// Largest entrywise modulus of the difference between two states.
    pub fn max_abs_diff(&self, other: &WalkState) -> Result<f64> {
        self.geometry.check_same(&other.geometry)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Probability of finding the walker at each vertex.
    pub fn measure(&self) -> Distribution {
        let mut probabilities = vec![0.0; self.geometry.vertices()];
        self.measure_into(&mut probabilities);
        Distribution {
            geometry: self.geometry,
            probabilities,
        }
    }

    pub(crate) fn measure_into(&self, out: &mut [f64]) {
        for (p, coins) in out.iter_mut().zip(self.amplitudes.chunks_exact(4)) {
            *p = coins.iter().map(|a| a.norm_sqr()).sum();
        }
    }

    /// Probability at a single vertex.
    pub fn probability_at(&self, x: usize, y: usize) -> f64 {
        self.coin_vector(x, y).iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Convenience wrapper for [`WalkState::localized_uniform_coin`].
pub fn make_localized_uniform_coin(
    geometry: LatticeGeometry,
    x0: usize,
    y0: usize,
) -> Result<WalkState> {
    WalkState::localized_uniform_coin(geometry, x0, y0)
}

/// Convenience wrapper for [`WalkState::global_uniform`].
pub fn make_global_uniform(geometry: LatticeGeometry) -> WalkState {
    WalkState::global_uniform(geometry)
}

/// Probability mass over the vertices of a torus.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    geometry: LatticeGeometry,
    probabilities: Vec<f64>,
}

impl Distribution {
    /// Validates non-negativity and unit mass.
    pub fn new(geometry: LatticeGeometry, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != geometry.vertices() {
            return Err(WalkError::InvalidDistribution(format!(
                "expected {} entries, got {}",
                geometry.vertices(),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
            return Err(WalkError::InvalidDistribution(format!(
                "negative or non-finite entry {p}"
            )));
        }
        let mass: f64 = probabilities.iter().sum();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(WalkError::InvalidDistribution(format!(
                "entries sum to {mass}"
            )));
        }
        Ok(Self {
            geometry,
            probabilities,
        })
    }

    pub(crate) fn from_raw(geometry: LatticeGeometry, probabilities: Vec<f64>) -> Self {
        debug_assert_eq!(probabilities.len(), geometry.vertices());
        Self {
            geometry,
            probabilities,
        }
    }

    pub fn uniform(geometry: LatticeGeometry) -> Self {
        let n = geometry.vertices();
        Self {
            geometry,
            probabilities: vec![1.0 / n as f64; n],
        }
    }

    pub fn point_mass(geometry: LatticeGeometry, x: usize, y: usize) -> Result<Self> {
        geometry.check_vertex(x, y)?;
        let mut probabilities = vec![0.0; geometry.vertices()];
        probabilities[geometry.vertex_index(x, y)] = 1.0;
        Ok(Self {
            geometry,
            probabilities,
        })
    }

    #[inline]
    pub fn geometry(&self) -> LatticeGeometry {
        self.geometry
    }

    #[inline]
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.probabilities[self.geometry.vertex_index(x, y)]
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Vertex holding the largest probability (first in row-major order on ties).
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, p) in self.probabilities.iter().enumerate() {
            if *p > self.probabilities[best] {
                best = i;
            }
        }
        self.geometry.vertex_coords(best)
    }

    /// The same distribution with every vertex moved by `(dx, dy)`.
    pub fn translated(&self, dx: isize, dy: isize) -> Distribution {
        let g = self.geometry;
        let mut probabilities = vec![0.0; g.vertices()];
        for x in 0..g.side() {
            for y in 0..g.side() {
                probabilities[g.vertex_index(g.wrap(x, dx), g.wrap(y, dy))] = self.get(x, y);
            }
        }
        Distribution {
            geometry: g,
            probabilities,
        }
    }

    /// Serializes as CSV: header `x,y,p`, rows in row-major order with
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(32 * self.probabilities.len() + 8);
        out.push_str("x,y,p\n");
        for (i, p) in self.probabilities.iter().enumerate() {
            let (x, y) = self.geometry.vertex_coords(i);
            out.push_str(&format!("{x},{y},{p:.16e}\n"));
        }
        out
    }

    /// Parses the output of [`Distribution::to_csv`]. Lines starting with `#`
    /// are ignored.
    pub fn from_csv(geometry: LatticeGeometry, text: &str) -> Result<Self> {
        let bad = |msg: String| WalkError::InvalidDistribution(msg);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some("x,y,p") => {}
            other => return Err(bad(format!("expected header `x,y,p`, got {other:?}"))),
        }
        let mut probabilities = vec![f64::NAN; geometry.vertices()];
        for line in lines {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 3 {
                return Err(bad(format!("malformed row `{line}`")));
            }
            let x: usize = fields[0].parse().map_err(|_| bad(format!("bad x in `{line}`")))?;
            let y: usize = fields[1].parse().map_err(|_| bad(format!("bad y in `{line}`")))?;
            let p: f64 = fields[2].parse().map_err(|_| bad(format!("bad p in `{line}`")))?;
            geometry.check_vertex(x, y)?;
            probabilities[geometry.vertex_index(x, y)] = p;
        }
        if probabilities.iter().any(|p| p.is_nan()) {
            return Err(bad("missing vertices".into()));
        }
        Self::new(geometry, probabilities)
    }
}

impl fmt::Display for LatticeGeometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{0}x{0} torus", self.side)
    }
}

/// Total variation distance `Σ_v |a(v) − b(v)|`, in `[0, 2]`.
pub fn total_variation(a: &Distribution, b: &Distribution) -> Result<f64> {
    a.geometry.check_same(&b.geometry)?;
    Ok(tv_slices(&a.probabilities, &b.probabilities))
}

#[inline]
pub(crate) fn tv_slices(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q).abs()).sum()
}
