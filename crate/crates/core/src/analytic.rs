// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Closed-form predictions for the constrained process.
//!
//! Everything here is a function of the Poisson branching survival
//! probability `beta(c)`, the unique root in `(0, 1)` of `1 - x = exp(-c x)`,
//! and of the accepted-edge density `f(c) = 2 beta + c (1 - beta)^2`.

use crate::error::AnalyticError;

/// Smallest query density accepted by the solvers.
pub const MIN_DENSITY: f64 = 1.0 + 1e-9;

/// Bracket padding used by the survival probability bisection.
const ROOT_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute tolerance on the root.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tolerance: 1e-12,
            max_iterations: 200,
        }
    }
}

impl SolverConfig {
    pub fn new(tolerance: f64, max_iterations: usize) -> Result<Self, AnalyticError> {
        if !(tolerance > 0.0) || max_iterations == 0 {
            return Err(AnalyticError::InvalidConfig {
                tolerance,
                max_iterations,
            });
        }
        Ok(SolverConfig {
            tolerance,
            max_iterations,
        })
    }
}

fn check_density(c: f64) -> Result<(), AnalyticError> {
    if c.is_nan() || c < MIN_DENSITY {
        Err(AnalyticError::Domain {
            what: "query density c",
            value: c,
            range: "c > 1",
        })
    } else {
        Ok(())
    }
}

/// `1 - x - exp(-c x)`, written with `expm1` so that it keeps its sign for
/// tiny `x` when `c` is barely above one.
fn survival_residual(c: f64, x: f64) -> f64 {
    -(-c * x).exp_m1() - x
}

/// Survival probability of a Poisson(`c`) Galton-Watson tree.
///
/// Bisection on `(1e-15, 1 - 1e-15)`: the residual is positive left of the
/// root and negative right of it, so the bracket never needs checking. The
/// bracket is halved until it collapses to adjacent floats; the tolerance only
/// decides whether a run cut short by `max_iterations` still counts.
pub fn beta_with(c: f64, cfg: &SolverConfig) -> Result<f64, AnalyticError> {
    check_density(c)?;
    let mut lo = ROOT_EPS;
    let mut hi = 1.0 - ROOT_EPS;
    if survival_residual(c, hi) >= 0.0 {
        // root sits in the last ulps below one
        return Ok(hi);
    }
    for _ in 0..cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let g = survival_residual(c, mid);
        if g == 0.0 {
            return Ok(mid);
        }
        if g > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    if hi - lo <= cfg.tolerance && survival_residual(c, mid).abs() <= cfg.tolerance {
        return Ok(mid);
    }
    Err(AnalyticError::NoConvergence {
        iterations: cfg.max_iterations,
    })
}

pub fn beta(c: f64) -> Result<f64, AnalyticError> {
    beta_with(c, &SolverConfig::default())
}

fn f_from_beta(c: f64, b: f64) -> f64 {
    2.0 * b + c * (1.0 - b) * (1.0 - b)
}

/// Asymptotic value of `2 m / n` at query step `t = c n / 2`.
pub fn f_of(c: f64) -> Result<f64, AnalyticError> {
    let b = beta(c)?;
    Ok(f_from_beta(c, b))
}

/// Derivative of [`f_of`], which collapses to `1 - beta(c)^2`.
pub fn f_prime(c: f64) -> Result<f64, AnalyticError> {
    let b = beta(c)?;
    Ok(1.0 - b * b)
}

/// Inverse of [`f_of`] on `(1, 2)`.
///
/// `f` is strictly increasing, so bisection on `[1 + 1e-9, hi]` works once the
/// upper end is doubled far enough for `f(hi)` to pass `y`. As in
/// [`beta_with`] the bracket is halved to float resolution, since `f` is
/// nearly flat for large `c` and a residual test alone would stop early.
pub fn f_inverse_with(y: f64, cfg: &SolverConfig) -> Result<f64, AnalyticError> {
    if y.is_nan() || y <= 1.0 || y >= 2.0 {
        return Err(AnalyticError::Domain {
            what: "accepted-edge density y",
            value: y,
            range: "1 < y < 2",
        });
    }
    let mut lo = MIN_DENSITY;
    let mut hi = 2.0;
    let mut f_hi = f_of(hi)?;
    let mut doublings = 0;
    while f_hi < y {
        lo = hi;
        hi *= 2.0;
        f_hi = f_of(hi)?;
        doublings += 1;
        if doublings > 64 {
            // f(hi) stops moving once beta rounds to 1
            return Err(AnalyticError::NoConvergence {
                iterations: doublings,
            });
        }
    }
    if f_of(lo)? >= y {
        // y sits below f(1 + 1e-9)
        return Ok(lo);
    }
    for _ in 0..cfg.max_iterations {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let fm = f_of(mid)?;
        if fm < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    if hi - lo <= cfg.tolerance && (f_of(mid)? - y).abs() <= cfg.tolerance {
        return Ok(mid);
    }
    Err(AnalyticError::NoConvergence {
        iterations: cfg.max_iterations,
    })
}

pub fn f_inverse(y: f64) -> Result<f64, AnalyticError> {
    f_inverse_with(y, &SolverConfig::default())
}

/// Predictions at query step `t = c n / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub c: f64,
    pub beta: f64,
    pub f: f64,
    pub f_prime: f64,
    /// `r(t) / n`, i.e. `(c - f) / 2`.
    pub rejected_per_vertex: f64,
    /// `r(t) / t = 1 - f / c`.
    pub rejected_fraction: f64,
    /// Forbidden pairs over `n^2 / 2`, equal to `beta^2`.
    pub forbidden_density: f64,
    /// Giant order over `n` at step `t`; the process shares its components
    /// with the unconstrained graph, so this is `beta(c)`.
    pub giant_fraction_process: f64,
    /// `c - 1` clamped to `[0, 1]`: giant order over `n` of a uniform random
    /// planar graph with `c n / 2` edges. Reference curve only.
    pub uniform_giant_fraction: f64,
}

pub fn predictions(c: f64) -> Result<CurvePoint, AnalyticError> {
    let b = beta(c)?;
    let f = f_from_beta(c, b);
    Ok(CurvePoint {
        c,
        beta: b,
        f,
        f_prime: 1.0 - b * b,
        rejected_per_vertex: (c - f) / 2.0,
        rejected_fraction: 1.0 - f / c,
        forbidden_density: b * b,
        giant_fraction_process: b,
        uniform_giant_fraction: (c - 1.0).clamp(0.0, 1.0),
    })
}

/// Predictions for the graph stopped at `m0 = c n / 2` accepted edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcceptedPoint {
    pub c: f64,
    /// `2 S / n`, the number of queries needed, which is `f^{-1}(c)`.
    pub queries_per_half_n: f64,
    /// Giant order over `n`, `beta(f^{-1}(c))`.
    pub giant_fraction: f64,
    /// Uniform random planar graph reference, `c - 1`.
    pub uniform_giant_fraction: f64,
}

/// Accepted-edge parameterisation; only defined for `1 < c < 2`.
pub fn predictions_by_accepted(c: f64) -> Result<AcceptedPoint, AnalyticError> {
    let q = f_inverse(c)?;
    Ok(AcceptedPoint {
        c,
        queries_per_half_n: q,
        giant_fraction: beta(q)?,
        uniform_giant_fraction: c - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from an independent 40-digit bisection.
    const BETA_2: f64 = 0.796_812_130_020_02;
    const BETA_3: f64 = 0.940_479_790_707_36;
    const F_2: f64 = 1.676_194_881_054_04;
    const F_INV_1_5: f64 = 1.618_840_193_778_82;

    #[test]
    fn beta_reference_values() {
        assert!((beta(2.0).unwrap() - BETA_2).abs() < 1e-12);
        assert!((beta(3.0).unwrap() - BETA_3).abs() < 1e-12);
        assert!(beta(1.0 + 1e-6).unwrap() < 1e-3);
        assert!(beta(100.0).unwrap() > 0.999);
        assert!(beta(100.0).unwrap() < 1.0);
    }

    #[test]
    fn domain_errors() {
        assert!(beta(1.0).is_err());
        assert!(beta(0.5).is_err());
        assert!(beta(1.0 + 1e-10).is_err());
        assert!(beta(f64::NAN).is_err());
        assert!(f_inverse(1.0).is_err());
        assert!(f_inverse(2.0).is_err());
        assert!(predictions_by_accepted(2.5).is_err());
        assert!(SolverConfig::new(0.0, 10).is_err());
        assert!(SolverConfig::new(1e-9, 0).is_err());
    }

    #[test]
    fn iteration_budget_is_enforced() {
        let cfg = SolverConfig::new(1e-14, 3).unwrap();
        assert!(matches!(
            beta_with(2.0, &cfg),
            Err(AnalyticError::NoConvergence { .. })
        ));
    }

    #[test]
    fn f_reference_values() {
        assert!((f_of(2.0).unwrap() - F_2).abs() < 1e-12);
        assert!((f_of(F_INV_1_5).unwrap() - 1.5).abs() < 1e-3);
        assert!((f_of(100.0).unwrap() - 2.0).abs() < 1e-3);
        assert!((f_prime(2.0).unwrap() - 0.365_090_429_452_959).abs() < 1e-12);
    }

    #[test]
    fn f_prime_matches_central_difference() {
        let h = 1e-5;
        for c in [1.5, 2.0, 3.0] {
            let fd = (f_of(c + h).unwrap() - f_of(c - h).unwrap()) / (2.0 * h);
            assert!((f_prime(c).unwrap() - fd).abs() < 1e-6, "c = {c}");
        }
    }

    #[test]
    fn inverse_values() {
        assert!((f_inverse(1.5).unwrap() - 1.6188).abs() < 1e-3);
        assert!((f_inverse(1.5).unwrap() - F_INV_1_5).abs() < 1e-9);
        assert!((f_inverse(f_of(2.0).unwrap()).unwrap() - 2.0).abs() < 1e-9);
        assert!((f_inverse(1.67619).unwrap() - 2.0).abs() < 1e-3);
        // needs the upper bracket doubled a few times
        let c = f_inverse(f_of(9.0).unwrap()).unwrap();
        assert!((c - 9.0).abs() < 1e-8);
    }

    #[test]
    fn prediction_rows() {
        let p = predictions(3.0).unwrap();
        assert!((p.rejected_per_vertex - 0.554_206_226_321_281).abs() < 1e-10);
        let p2 = predictions(2.0).unwrap();
        assert!((p2.forbidden_density - 0.634_909_570_547_041).abs() < 1e-10);
        assert_eq!(p2.uniform_giant_fraction, 1.0);
        let a = predictions_by_accepted(1.5).unwrap();
        assert!((a.giant_fraction - 0.651_945_003_519_606).abs() < 1e-9);
        assert!((a.uniform_giant_fraction - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejected_fraction_increases_on_grid() {
        let mut prev = 0.0;
        let mut c = 1.01;
        while c <= 15.0 {
            let p = predictions(c).unwrap();
            assert!(p.rejected_fraction > prev && p.rejected_fraction < 1.0);
            prev = p.rejected_fraction;
            c += 0.01;
        }
    }
}
