//! Adaptive Gauss–Legendre quadrature.

use std::sync::OnceLock;

const ORDER: usize = 20;
pub const MAX_DEPTH: u32 = 40;

struct Rule {
    nodes: [f64; ORDER],
    weights: [f64; ORDER],
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = [0.0; ORDER];
        let mut weights = [0.0; ORDER];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * d * d);
        }
        Rule { nodes, weights }
    })
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let r = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for k in 0..ORDER {
        s += r.weights[k] * f(mid + half * r.nodes[k]);
    }
    s * half
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Sum of the panel-versus-halves discrepancies of the accepted panels.
    pub est_error: f64,
    /// False if some panel hit [`MAX_DEPTH`] without meeting its tolerance.
    pub converged: bool,
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`, bisecting any
/// panel whose estimate disagrees with the sum over its two halves.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Quadrature {
    if a == b {
        return Quadrature {
            value: 0.0,
            est_error: 0.0,
            converged: true,
        };
    }
    let mut out = Quadrature {
        value: 0.0,
        est_error: 0.0,
        converged: true,
    };
    let whole = panel(&f, a, b);
    recurse(&f, a, b, whole, tol, 0, &mut out);
    out
}

fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    out: &mut Quadrature,
) {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let err = (left + right - whole).abs();
    // below this the discrepancy is rounding noise, not truncation error
    let noise = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    if err <= tol.max(noise) || depth >= MAX_DEPTH {
        if err > tol.max(noise) {
            out.converged = false;
        }
        out.value += left + right;
        out.est_error += err;
        return;
    }
    recurse(f, a, m, left, 0.5 * tol, depth + 1, out);
    recurse(f, m, b, right, 0.5 * tol, depth + 1, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_is_exact_for_polynomials() {
        let r = rule();
        assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // degree 2n - 1 = 39
        for deg in [0, 1, 2, 7, 20, 38, 39] {
            let got = panel(&|x: f64| x.powi(deg), 0.0, 1.0);
            let want = 1.0 / (deg as f64 + 1.0);
            assert!((got - want).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn smooth_integrals() {
        let q = integrate(f64::sin, 0.0, PI, 1e-12);
        assert!((q.value - 2.0).abs() < 1e-13 && q.converged);
        let q = integrate(|x: f64| (-x * x).exp(), -10.0, 10.0, 1e-12);
        assert!((q.value - PI.sqrt()).abs() < 1e-12);
        let q = integrate(|x: f64| 1.0 / x, 2.0, 1.0, 1e-12);
        assert!((q.value + 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity_is_refined() {
        let q = integrate(f64::sqrt, 0.0, 1.0, 1e-11);
        assert!((q.value - 2.0 / 3.0).abs() < 1e-10, "{q:?}");
        assert!(q.converged);
    }

    #[test]
    fn interior_kink_is_refined() {
        let q = integrate(|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12);
        assert!((q.value - (0.045 + 0.245)).abs() < 1e-11, "{q:?}");
    }
}
