//! Volume estimators that do not use the closed-form machinery: Monte Carlo
//! sampling of the sphere and integration of the Schläfli differential.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tetra::{EdgeLengths, Tetrahedron};
use crate::z2::{Z2Angles, Z2Lengths};

/// Number of independent random streams a Monte Carlo run is split into.
/// Fixed so that results do not depend on the thread count.
pub const MC_SHARDS: u64 = 64;
pub const MC_MIN_SAMPLES: u64 = 10_000;
pub const SCHLAFLI_MIN_STEPS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub volume: f64,
    pub std_error: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn brackets(&self, value: f64, k: f64) -> bool {
        (value - self.volume).abs() <= k * self.std_error
    }
}

/// Fraction of uniformly distributed points on `S^3` that land in the
/// tetrahedron, times `2 pi^2`.
///
/// A point `x` lies in the tetrahedron iff `x = sum lambda_k p_k` with all
/// `lambda_k >= 0`. Membership in the cone does not depend on `|x|`, so the
/// Gaussian samples are used without normalisation.
pub fn mc_volume(lengths: &EdgeLengths, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < MC_MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MC_MIN_SAMPLES} samples are required, got {samples}"
        )));
    }
    let t = Tetrahedron::from_lengths(*lengths)?;
    let factor = t.edge_matrix().sym_sqrt_factor()?;

    let hits: u64 = (0..MC_SHARDS)
        .into_par_iter()
        .map(|shard| {
            let n = samples / MC_SHARDS + u64::from(shard < samples % MC_SHARDS);
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(shard);
            let mut hits = 0u64;
            for _ in 0..n {
                let x: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
                let lambda = factor.solve_transpose(x);
                if lambda.iter().all(|&c| c >= 0.0) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    let p = hits as f64 / samples as f64;
    let total = 2.0 * PI * PI;
    Ok(McEstimate {
        volume: total * p,
        std_error: total * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        hits,
        seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathIntegral {
    pub volume: f64,
    pub steps: usize,
    pub start_volume: f64,
}

/// Integrates `dVol = (1/2) sum l d(angle)` along the straight line in
/// `(l_A, l_B, l_C, l_D)` from the right-angled tetrahedron (volume
/// `pi^2/8`) to `target`. Lengths are taken at step midpoints and angle
/// increments between step endpoints.
pub fn schlafli_volume(target: &Z2Lengths, steps: usize) -> Result<PathIntegral> {
    let start = PI * PI / 8.0;
    let goal = target.values();
    if goal.iter().all(|&l| l == FRAC_PI_2) {
        return Ok(PathIntegral {
            volume: start,
            steps: 0,
            start_volume: start,
        });
    }
    if steps < SCHLAFLI_MIN_STEPS {
        return Err(Error::InvalidArgument(format!(
            "at least {SCHLAFLI_MIN_STEPS} steps are required, got {steps}"
        )));
    }
    let at =
        |s: f64| -> [f64; 4] { std::array::from_fn(|k| FRAC_PI_2 + s * (goal[k] - FRAC_PI_2)) };
    let angles_at = |s: f64| -> Result<Z2Angles> {
        Z2Lengths::from_array(at(s))
            .and_then(|z| z.angles())
            .map_err(|_| Error::PathLeavesDomain { parameter: s })
    };

    let mut volume = start;
    let mut prev = angles_at(0.0)?;
    for j in 0..steps {
        let s1 = (j + 1) as f64 / steps as f64;
        let next = angles_at(s1)?;
        let l = at((j as f64 + 0.5) / steps as f64);
        volume += 0.5
            * (l[0] * (next.a - prev.a)
                + 2.0 * l[1] * (next.b - prev.b)
                + 2.0 * l[2] * (next.c - prev.c)
                + l[3] * (next.d - prev.d));
        prev = next;
    }
    Ok(PathIntegral {
        volume,
        steps,
        start_volume: start,
    })
}
