//! The auxiliary function
//!
//! ```text
//! V(l, u) = int_l^{pi/2} Re asin(sin s / u) ds + (pi/2)(l - pi/2),   0 <= l <= pi,
//! ```
//!
//! extended to all `l` by `V(l + k pi, u) = V(l, u) - 2k V(0, u)` and to
//! negative `u` by evenness.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::beta::regularized_incomplete_beta;
use crate::error::{Error, Result};
use crate::quad::integrate;

/// Absolute tolerance of the quadrature path.
pub const V_TOL: f64 = 1e-11;

/// Default cap on series terms. Convergence is geometric with ratio
/// `sin^2(l) / u^2`, so only `u = 1` with `l` near `pi/2` gets close.
pub const DEFAULT_SERIES_TERMS: usize = 2_000_000;

const SERIES_TAIL: f64 = 1e-16;
const SERIES_FAIL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VMethod {
    Quadrature,
    Elementary,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VEval {
    pub value: f64,
    pub method: VMethod,
    pub est_error: f64,
}

/// `asin` extended by `+-pi/2` outside `[-1, 1]`, the real part of the
/// principal branch.
#[inline]
pub fn re_asin(x: f64) -> f64 {
    if x.abs() <= 1.0 {
        x.asin()
    } else {
        x.signum() * FRAC_PI_2
    }
}

#[inline]
fn integrand(s: f64, u: f64) -> f64 {
    re_asin(s.sin() / u)
}

fn check_finite(ell: f64, u: f64) -> Result<()> {
    if !ell.is_finite() || !u.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "V({ell}, {u}) needs finite arguments"
        )));
    }
    Ok(())
}

/// `V(l, u)` by adaptive quadrature.
pub fn v_eval(ell: f64, u: f64) -> Result<VEval> {
    check_finite(ell, u)?;
    let u = u.abs();
    if u == 0.0 {
        return Err(Error::NonPositiveU);
    }
    let k = (ell / PI).floor();
    let r = (ell - k * PI).clamp(0.0, PI);
    let (mut value, mut err) = v_reduced(r, u);
    if k != 0.0 {
        let (v0, e0) = v_reduced(0.0, u);
        value -= 2.0 * k * v0;
        err += 2.0 * k.abs() * e0;
    }
    Ok(VEval {
        value,
        method: VMethod::Quadrature,
        est_error: err,
    })
}

/// `V` for `0 <= l <= pi`, `u > 0`.
fn v_reduced(ell: f64, u: f64) -> (f64, f64) {
    let (int, err) = if ell <= FRAC_PI_2 {
        integral(ell, FRAC_PI_2, u)
    } else {
        let (v, e) = integral(FRAC_PI_2, ell, u);
        (-v, e)
    };
    (int + FRAC_PI_2 * (ell - FRAC_PI_2), err)
}

#[derive(Clone, Copy)]
enum Piece {
    Plain,
    /// Integrand is identically `pi/2`.
    Flat,
    /// Square-root kink at the right end; substitute `s = hi - w^2`.
    KinkRight,
    /// Square-root kink at the left end; substitute `s = lo + w^2`.
    KinkLeft,
}

/// `int_lo^hi Re asin(sin s / u) ds` for `0 <= lo <= hi <= pi`, split at the
/// points where `sin s = u` and at `pi/2`.
fn integral(lo: f64, hi: f64, u: f64) -> (f64, f64) {
    let mut pieces: Vec<(f64, f64, Piece)> = Vec::with_capacity(3);
    if u < 1.0 {
        let k1 = u.asin();
        let k2 = PI - k1;
        if lo < k1 {
            pieces.push((
                lo,
                hi.min(k1),
                if hi >= k1 {
                    Piece::KinkRight
                } else {
                    Piece::Plain
                },
            ));
        }
        if hi > k1 && lo < k2 {
            pieces.push((lo.max(k1), hi.min(k2), Piece::Flat));
        }
        if hi > k2 {
            pieces.push((
                lo.max(k2),
                hi,
                if lo <= k2 {
                    Piece::KinkLeft
                } else {
                    Piece::Plain
                },
            ));
        }
    } else if lo < FRAC_PI_2 && hi > FRAC_PI_2 {
        pieces.push((lo, FRAC_PI_2, Piece::Plain));
        pieces.push((FRAC_PI_2, hi, Piece::Plain));
    } else {
        pieces.push((lo, hi, Piece::Plain));
    }

    let tol = V_TOL / pieces.len().max(1) as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    for (a, b, kind) in pieces {
        if b <= a {
            continue;
        }
        let q = match kind {
            Piece::Flat => {
                value += FRAC_PI_2 * (b - a);
                continue;
            }
            Piece::Plain => integrate(|s| integrand(s, u), a, b, tol),
            Piece::KinkRight => integrate(
                |w| 2.0 * w * integrand(b - w * w, u),
                0.0,
                (b - a).sqrt(),
                tol,
            ),
            Piece::KinkLeft => integrate(
                |w| 2.0 * w * integrand(a + w * w, u),
                0.0,
                (b - a).sqrt(),
                tol,
            ),
        };
        value += q.value;
        err += q.est_error;
    }
    (value, err)
}

/// `dV/dl = pi/2 - Re asin(|sin l| / u)`.
pub fn v_derivative(ell: f64, u: f64) -> Result<f64> {
    check_finite(ell, u)?;
    if u == 0.0 {
        return Err(Error::NonPositiveU);
    }
    Ok(FRAC_PI_2 - re_asin(ell.sin().abs() / u.abs()))
}

/// `V(l, 1) = (l - pi/2) |l - pi/2| / 2` on `[0, pi]`.
pub fn v_elementary(ell: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&ell) {
        return Err(Error::OutOfRange {
            what: "l",
            value: ell,
            range: "[0, pi]",
        });
    }
    let d = ell - FRAC_PI_2;
    Ok(0.5 * d * d.abs())
}

/// Legendre chi function `chi_2(z) = sum z^(2k+1) / (2k+1)^2`, `0 <= z <= 1`.
pub fn legendre_chi2(z: f64) -> f64 {
    assert!(
        (0.0..=1.0).contains(&z),
        "chi_2 argument {z} outside [0, 1]"
    );
    if z <= 0.5 {
        return chi2_direct(z);
    }
    let y = (1.0 - z) / (1.0 + z);
    if y == 0.0 {
        return PI * PI / 8.0;
    }
    PI * PI / 8.0 - 0.5 * z.ln() * y.ln() - chi2_direct(y)
}

fn chi2_direct(z: f64) -> f64 {
    let z2 = z * z;
    let mut p = z;
    let mut s = 0.0;
    let mut k = 0u32;
    loop {
        let n = (2 * k + 1) as f64;
        let term = p / (n * n);
        s += term;
        if term < 1e-18 * s.max(1e-300) || p == 0.0 {
            return s;
        }
        p *= z2;
        k += 1;
    }
}

/// Series coefficient `p_k(l) = 1 - I_{sin^2 l}(k + 1, 1/2)` for `0 <= l <= pi/2`:
/// the fraction of `int_0^{pi/2} sin^(2k+1)` lying in `[l, pi/2]`.
pub fn series_coefficient(k: usize, ell: f64) -> f64 {
    let x = ell.sin().powi(2).min(1.0);
    1.0 - regularized_incomplete_beta(k as f64 + 1.0, 0.5, x)
}

/// `V(l, u)` for `u >= 1` from its power series in `1/u`.
///
/// For `l <= pi/2`
///
/// ```text
/// V(l, u) = (pi/2)(l - pi/2) + sum_k p_k(l) u^(-2k-1) / (2k+1)^2
/// ```
///
/// which is summed as `chi_2(1/u) - sum_k (1 - p_k) u^(-2k-1) / (2k+1)^2`
/// because `1 - p_k` decays geometrically. Coefficients follow from
/// `I_x(a + 1, 1/2) = I_x(a, 1/2) - x^a sqrt(1 - x) / (a B(a, 1/2))`.
/// For `l > pi/2` the integral part changes sign under `l -> pi - l`.
pub fn v_series(ell: f64, u: f64, max_terms: usize) -> Result<VEval> {
    check_finite(ell, u)?;
    if !(0.0..=PI).contains(&ell) {
        return Err(Error::OutOfRange {
            what: "l",
            value: ell,
            range: "[0, pi]",
        });
    }
    if u < 1.0 {
        return Err(Error::ULessThanOne { u });
    }
    let (s, err) = if ell <= FRAC_PI_2 {
        series_integral(ell, u, max_terms)?
    } else {
        let (s, e) = series_integral(PI - ell, u, max_terms)?;
        (-s, e)
    };
    Ok(VEval {
        value: s + FRAC_PI_2 * (ell - FRAC_PI_2),
        method: VMethod::Series,
        est_error: err,
    })
}

/// `int_l^{pi/2} asin(sin s / u) ds` for `0 <= l <= pi/2`, `u >= 1`.
fn series_integral(ell: f64, u: f64, max_terms: usize) -> Result<(f64, f64)> {
    let z = 1.0 / u;
    let z2 = z * z;
    let x = ell.sin().powi(2).min(1.0);
    let c = ell.cos().abs();
    if c < 1e-15 {
        // the integrand is at most pi/2 on an interval of length ~c
        return Ok((0.0, 2.0 * c));
    }
    // q_k = 1 - p_k = I_x(k+1, 1/2); q_0 = 1 - cos l
    let mut q = x / (1.0 + c);
    // d_k = q_k - q_{k+1}
    let mut d = 0.5 * x * c;
    let mut zp = z;
    let ratio = x * z2;
    let mut sum = 0.0;
    let mut tail = f64::INFINITY;
    let mut last = 0.0;
    for k in 0..max_terms {
        let n = (2 * k + 1) as f64;
        last = q * zp / (n * n);
        sum += last;
        tail = if ratio < 1.0 {
            last * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if last == 0.0 || tail < SERIES_TAIL {
            return Ok((legendre_chi2(z) - sum, tail));
        }
        q = (q - d).max(0.0);
        d *= x * (k as f64 + 1.5) / (k as f64 + 2.0);
        zp *= z2;
    }
    if tail > SERIES_FAIL {
        return Err(Error::NonConvergence {
            terms: max_terms,
            last,
        });
    }
    Ok((legendre_chi2(z) - sum, tail))
}

/// Residuals of the structural properties of `V`:
///
/// 0. continuity: `|V(l + h) - V(l - h)|` for `h = 1e-10`
/// 1. evenness in `u`: `V(l, u) - V(l, -u)`
/// 2. `V(pi - l, u) + V(l, u)`
/// 3. `V(l, u) + V(-l, u) - 2 V(0, u)`
/// 4. `V(l + k pi, u) - V(l, u) + 2k V(0, u)`
pub fn v_properties_residuals(ell: f64, u: f64, k: i32) -> Result<[f64; 5]> {
    let v = |l: f64, u: f64| v_eval(l, u).map(|e| e.value);
    let h = 1e-10;
    let base = v(ell, u)?;
    let v0 = v(0.0, u)?;
    Ok([
        (v(ell + h, u)? - v(ell - h, u)?).abs(),
        base - v(ell, -u)?,
        v(PI - ell, u)? + base,
        base + v(-ell, u)? - 2.0 * v0,
        v(ell + k as f64 * PI, u)? - base + 2.0 * k as f64 * v0,
    ])
}
