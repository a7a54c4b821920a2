//! Position-space evolution `U = S · (C ⊗ I)` with the flip-flop shift.

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::lattice::{Distribution, LatticeGeometry, WalkState};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A 4×4 coin acting on the canonical coin order (0,0),(0,1),(1,0),(1,1).
#[derive(Debug, Clone, PartialEq)]
pub struct CoinOperator {
    matrix: [[Complex64; 4]; 4],
    kind: CoinKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CoinKind {
    Grover,
    General,
}

impl CoinOperator {
    /// Builds a coin from an arbitrary matrix, rejecting non-unitary input.
    pub fn from_matrix(matrix: [[Complex64; 4]; 4]) -> Result<Self> {
        let coin = Self {
            matrix,
            kind: CoinKind::General,
        };
        let err = coin.unitarity_error();
        if err >= 1e-12 {
            return Err(WalkError::Domain(format!(
                "coin is not unitary (max |C†C - I| = {err:e})"
            )));
        }
        Ok(coin)
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.matrix
    }

    /// `max |C†C − I|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let m = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = ZERO;
                for (k, row) in m.iter().enumerate() {
                    acc += row[i].conj() * m[k][j];
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    #[inline]
    pub fn apply(&self, v: &[Complex64]) -> [Complex64; 4] {
        match self.kind {
            CoinKind::Grover => {
                let half = (v[0] + v[1] + v[2] + v[3]) * 0.5;
                [half - v[0], half - v[1], half - v[2], half - v[3]]
            }
            CoinKind::General => {
                let mut out = [ZERO; 4];
                for (o, row) in out.iter_mut().zip(&self.matrix) {
                    *o = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
                }
                out
            }
        }
    }
}

/// The Grover coin `G = 2|u⟩⟨u| − I`.
pub fn grover_coin() -> CoinOperator {
    let mut matrix = [[Complex64::new(0.5, 0.0); 4]; 4];
    for (i, row) in matrix.iter_mut().enumerate() {
        row[i] = Complex64::new(-0.5, 0.0);
    }
    CoinOperator {
        matrix,
        kind: CoinKind::Grover,
    }
}

/// Search coin: `−I` at the marked vertex, `base` everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedCoinSpec {
    pub base: CoinOperator,
    pub marked: (usize, usize),
}

impl MarkedCoinSpec {
    pub fn new(geometry: LatticeGeometry, base: CoinOperator, x0: usize, y0: usize) -> Result<Self> {
        geometry.check_vertex(x0, y0)?;
        Ok(Self {
            base,
            marked: (x0, y0),
        })
    }

    /// Grover coin with the given vertex marked.
    pub fn grover(geometry: LatticeGeometry, x0: usize, y0: usize) -> Result<Self> {
        Self::new(geometry, grover_coin(), x0, y0)
    }
}

/// Either a homogeneous coin or the marked search coin.
#[derive(Debug, Clone, PartialEq)]
pub enum WalkOperator {
    Coin(CoinOperator),
    Marked(MarkedCoinSpec),
}

impl WalkOperator {
    pub fn grover() -> Self {
        WalkOperator::Coin(grover_coin())
    }

    fn check(&self, geometry: LatticeGeometry) -> Result<()> {
        match self {
            WalkOperator::Coin(_) => Ok(()),
            WalkOperator::Marked(spec) => geometry.check_vertex(spec.marked.0, spec.marked.1),
        }
    }
}

impl From<CoinOperator> for WalkOperator {
    fn from(c: CoinOperator) -> Self {
        WalkOperator::Coin(c)
    }
}

impl From<MarkedCoinSpec> for WalkOperator {
    fn from(m: MarkedCoinSpec) -> Self {
        WalkOperator::Marked(m)
    }
}

/// Writes `S · (C ⊗ I) · src` into `dst`. `marked` is a vertex index that
/// receives `−I` instead of `coin`.
fn step_into(src: &WalkState, coin: &CoinOperator, marked: Option<usize>, dst: &mut WalkState) {
    let g = src.geometry();
    let side = g.side();
    let amps = src.amplitudes();
    let out = dst.amplitudes_mut();
    for x in 0..side {
        let xp = if x + 1 == side { 0 } else { x + 1 };
        let xm = if x == 0 { side - 1 } else { x - 1 };
        for y in 0..side {
            let yp = if y + 1 == side { 0 } else { y + 1 };
            let ym = if y == 0 { side - 1 } else { y - 1 };
            let v = x * side + y;
            let here = &amps[4 * v..4 * v + 4];
            let c = if marked == Some(v) {
                [-here[0], -here[1], -here[2], -here[3]]
            } else {
                coin.apply(here)
            };
            // (d,s) at (x,y) -> (d, s^1) at (x,y) + (-1)^s e_d
            out[4 * (xp * side + y) + 1] = c[0];
            out[4 * (xm * side + y)] = c[1];
            out[4 * (x * side + yp) + 3] = c[2];
            out[4 * (x * side + ym) + 2] = c[3];
        }
    }
}

/// Flip-flop shift alone: component `(d, s)` at `v` moves to `(d, s⊕1)` at
/// `v + (−1)^s e_d`.
pub fn apply_shift(state: &WalkState) -> WalkState {
    let g = state.geometry();
    let mut out = WalkState::zeros(g);
    let amps = state.amplitudes();
    let dst = out.amplitudes_mut();
    for v in 0..g.vertices() {
        let (x, y) = g.vertex_coords(v);
        dst[4 * g.vertex_index(g.wrap(x, 1), y) + 1] = amps[4 * v];
        dst[4 * g.vertex_index(g.wrap(x, -1), y)] = amps[4 * v + 1];
        dst[4 * g.vertex_index(x, g.wrap(y, 1)) + 3] = amps[4 * v + 2];
        dst[4 * g.vertex_index(x, g.wrap(y, -1)) + 2] = amps[4 * v + 3];
    }
    out
}

/// One step of the homogeneous walk.
pub fn step(state: &WalkState, coin: &CoinOperator) -> WalkState {
    let mut out = WalkState::zeros(state.geometry());
    step_into(state, coin, None, &mut out);
    out
}

/// One step of the search walk.
pub fn step_marked(state: &WalkState, spec: &MarkedCoinSpec) -> Result<WalkState> {
    let g = state.geometry();
    g.check_vertex(spec.marked.0, spec.marked.1)?;
    let mut out = WalkState::zeros(g);
    step_into(
        state,
        &spec.base,
        Some(g.vertex_index(spec.marked.0, spec.marked.1)),
        &mut out,
    );
    Ok(out)
}

/// Stateful stepper that reuses a scratch buffer between steps.
#[derive(Debug, Clone)]
pub struct Walker {
    current: WalkState,
    scratch: WalkState,
    coin: CoinOperator,
    marked: Option<usize>,
    time: usize,
}

impl Walker {
    pub fn new(initial: WalkState, op: &WalkOperator) -> Result<Self> {
        let g = initial.geometry();
        op.check(g)?;
        let (coin, marked) = match op {
            WalkOperator::Coin(c) => (c.clone(), None),
            WalkOperator::Marked(m) => (m.base.clone(), Some(g.vertex_index(m.marked.0, m.marked.1))),
        };
        Ok(Self {
            scratch: WalkState::zeros(g),
            current: initial,
            coin,
            marked,
            time: 0,
        })
    }

    pub fn advance(&mut self) {
        step_into(&self.current, &self.coin, self.marked, &mut self.scratch);
        std::mem::swap(&mut self.current, &mut self.scratch);
        self.time += 1;
    }

    #[inline]
    pub fn state(&self) -> &WalkState {
        &self.current
    }

    /// Number of steps applied so far.
    #[inline]
    pub fn time(&self) -> usize {
        self.time
    }

    /// Writes the current vertex probabilities into `out`.
    #[inline]
    pub fn measure_into(&self, out: &mut [f64]) {
        self.current.measure_into(out)
    }

    pub fn into_state(self) -> WalkState {
        self.current
    }
}

/// Applies `steps` steps, calling `observer(t, P_t)` after each one
/// (`t = 1..=steps`), and returns the final state.
pub fn evolve<F>(state: WalkState, op: &WalkOperator, steps: usize, mut observer: F) -> Result<WalkState>
where
    F: FnMut(usize, &Distribution),
{
    let mut walker = Walker::new(state, op)?;
    for _ in 0..steps {
        walker.advance();
        observer(walker.time(), &walker.state().measure());
    }
    Ok(walker.into_state())
}
