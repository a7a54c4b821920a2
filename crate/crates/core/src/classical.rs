//! Classical random walk baseline, by exact iteration of the distribution.

use rayon::prelude::*;

use crate::error::{Result, WalkError};
use crate::fit::{power_law_fit, FitResult};
use crate::lattice::{Distribution, LatticeGeometry};

/// Simple symmetric walk on the torus. Even sides are bipartite, so there the
/// walk stays put with probability 1/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalWalk {
    geometry: LatticeGeometry,
    lazy: bool,
}

impl ClassicalWalk {
    pub fn new(geometry: LatticeGeometry) -> Self {
        Self {
            geometry,
            lazy: !geometry.is_odd(),
        }
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    /// `p ↦ p K` for the transition kernel `K`.
    pub fn step(&self, p: &[f64], out: &mut [f64]) {
        let g = self.geometry;
        let side = g.side();
        let (stay, move_w) = if self.lazy { (0.5, 0.125) } else { (0.0, 0.25) };
        for x in 0..side {
            let xp = if x + 1 == side { 0 } else { x + 1 };
            let xm = if x == 0 { side - 1 } else { x - 1 };
            for y in 0..side {
                let yp = if y + 1 == side { 0 } else { y + 1 };
                let ym = if y == 0 { side - 1 } else { y - 1 };
                let neighbours = p[xp * side + y] + p[xm * side + y] + p[x * side + yp] + p[x * side + ym];
                out[x * side + y] = stay * p[x * side + y] + move_w * neighbours;
            }
        }
    }

    /// Distribution after `steps` steps from a point mass at `(x0, y0)`.
    pub fn distribution_after(&self, x0: usize, y0: usize, steps: usize) -> Result<Distribution> {
        let mut p = Distribution::point_mass(self.geometry, x0, y0)?.probabilities().to_vec();
        let mut scratch = vec![0.0; p.len()];
        for _ in 0..steps {
            self.step(&p, &mut scratch);
            std::mem::swap(&mut p, &mut scratch);
        }
        Ok(Distribution::from_raw(self.geometry, p))
    }

    /// First `t` with `‖P_t − U‖ ≤ ε` from a point mass at the origin.
    /// Total variation to the stationary law never increases, so this is also
    /// the time after which the walk stays within `ε`.
    pub fn mixing_time(&self, epsilon: f64, max_steps: usize) -> Result<Option<usize>> {
        if !(epsilon > 0.0) {
            return Err(WalkError::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        let n = self.geometry.vertices();
        let u = 1.0 / n as f64;
        let mut p = vec![0.0; n];
        p[0] = 1.0;
        let mut scratch = vec![0.0; n];
        for t in 0..=max_steps {
            let tv: f64 = p.iter().map(|q| (q - u).abs()).sum();
            if tv <= epsilon {
                return Ok(Some(t));
            }
            self.step(&p, &mut scratch);
            std::mem::swap(&mut p, &mut scratch);
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalRecord {
    pub side: usize,
    pub vertices: usize,
    pub mixing_time: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalBaseline {
    pub epsilon: f64,
    pub records: Vec<ClassicalRecord>,
    /// `t_mix ∝ N^β`; `slope` is `β`.
    pub fit: Option<FitResult>,
}

/// Classical mixing times to the uniform distribution over several sides.
pub fn classical_mixing_baseline(sides: &[usize], epsilon: f64) -> Result<ClassicalBaseline> {
    let records: Vec<Result<ClassicalRecord>> = sides
        .par_iter()
        .map(|&side| {
            let g = LatticeGeometry::new(side)?;
            let walk = ClassicalWalk::new(g);
            // generous cap: relaxation time is O(N)
            let cap = 200 * g.vertices() + 1000;
            Ok(ClassicalRecord {
                side,
                vertices: g.vertices(),
                mixing_time: walk.mixing_time(epsilon, cap)?,
            })
        })
        .collect();
    let records: Vec<ClassicalRecord> = records.into_iter().collect::<Result<_>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter_map(|r| r.mixing_time.filter(|t| *t > 0).map(|t| (r.vertices as f64, t as f64)))
        .unzip();
    let fit = if xs.len() >= 2 { power_law_fit(&xs, &ys).ok() } else { None };
    Ok(ClassicalBaseline {
        epsilon,
        records,
        fit,
    })
}
