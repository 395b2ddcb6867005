//! Adaptive Gauss–Legendre quadrature (15-point panels) plus the two
//! special-purpose integrators the crate needs: an infinite-tail map and a
//! per-period oscillatory summer with Euler (repeated averaging)
//! acceleration.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Absolute tolerance used per panel unless a caller overrides it.
pub const PANEL_TOL: f64 = 1e-10;

const MAX_DEPTH: usize = 48;
const MAX_PANELS: usize = 400_000;

/// 15-point Gauss–Legendre nodes (on [-1, 1]) and weights, generated once
/// by Newton iteration on P_15.
fn gl15() -> &'static ([f64; 15], [f64; 15]) {
    static RULE: OnceLock<([f64; 15], [f64; 15])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 15usize;
        let mut nodes = [0.0f64; 15];
        let mut weights = [0.0f64; 15];
        for k in 0..n {
            // Chebyshev-style initial guess for the k-th root of P_n
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                // evaluate P_n and P_n' by the three-term recurrence
                let (mut p0, mut p1) = (1.0f64, x);
                for j in 2..=n {
                    let jf = j as f64;
                    let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (mut p0, mut p1) = (1.0f64, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            nodes[n - 1 - k] = x;
            weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

/// Single 15-point panel on [a, b].
pub fn gl15_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl15();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..15 {
        s += weights[i] * f(c + h * nodes[i]);
    }
    s * h
}

struct Adaptive<'a, F> {
    f: &'a F,
    tol: f64,
    panels: usize,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn go(&mut self, a: f64, b: f64, whole: f64, depth: usize) -> Result<f64> {
        let m = 0.5 * (a + b);
        let left = gl15_panel(self.f, a, m);
        let right = gl15_panel(self.f, m, b);
        self.panels += 2;
        if self.panels > MAX_PANELS {
            return Err(Error::Convergence(format!(
                "adaptive quadrature exceeded {MAX_PANELS} panels on [{a}, {b}]"
            )));
        }
        let err = (left + right - whole).abs();
        if err <= self.tol || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH && err > 1e3 * self.tol {
                return Err(Error::Convergence(format!(
                    "panel [{a}, {b}] failed to converge (err {err:.3e})"
                )));
            }
            return Ok(left + right);
        }
        // halve the error budget per side
        self.tol *= 0.5;
        let l = self.go(a, m, left, depth + 1)?;
        self.tol *= 2.0;
        let r = self.go(m, b, right, depth + 1)?;
        Ok(l + r)
    }
}

/// Adaptive integral of `f` on [a, b] to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let whole = gl15_panel(&f, a, b);
    let mut ad = Adaptive { f: &f, tol, panels: 1 };
    ad.go(a, b, whole, 0)
}

/// Adaptive integral with interior breakpoints (kinks, bump edges).
/// Breakpoints outside (a, b) are ignored; each segment gets the full
/// tolerance divided by the segment count.
pub fn integrate_segmented<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<f64> {
    let mut pts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(a);
    edges.extend(pts);
    edges.push(b);
    let seg_tol = tol / edges.len() as f64;
    let mut total = 0.0;
    for w in edges.windows(2) {
        total += integrate(f, w[0], w[1], seg_tol)?;
    }
    Ok(total)
}

/// Integral of `f` on [a, ∞) via the map t = a + u/(1-u). The integrand
/// must decay faster than t^-2 for the mapped integrand to stay bounded.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: &F, a: f64, tol: f64) -> Result<f64> {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - u;
        let t = a + u / one_minus;
        let v = f(t) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(&g, 0.0, 1.0, tol)
}

/// Sum of ∫ f over consecutive half-period windows starting at `start`,
/// accelerated by repeated averaging of the partial sums. Intended for
/// integrands of the form (decaying envelope) × cos: the window integrals
/// alternate in sign and the averaging converges geometrically.
///
/// Returns (value, error_estimate).
pub fn oscillatory_tail<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    half_period: f64,
    n_windows: usize,
) -> Result<(f64, f64)> {
    if !(half_period > 0.0) || n_windows < 8 {
        return Err(Error::Domain(
            "oscillatory_tail needs a positive half-period and at least 8 windows".into(),
        ));
    }
    let mut partials = Vec::with_capacity(n_windows);
    let mut acc = 0.0;
    for k in 0..n_windows {
        let a = start + k as f64 * half_period;
        let b = a + half_period;
        acc += gl15_panel(f, a, b);
        partials.push(acc);
    }
    // repeated averaging; keep the tail of the triangle
    let mut prev_front = partials[partials.len() - 1];
    while partials.len() > 1 {
        for i in 0..partials.len() - 1 {
            partials[i] = 0.5 * (partials[i] + partials[i + 1]);
        }
        partials.pop();
        let front = partials[partials.len() - 1];
        if (front - prev_front).abs() < 1e-15 * (1.0 + front.abs()) && partials.len() < n_windows / 2
        {
            return Ok((front, (front - prev_front).abs()));
        }
        prev_front = front;
    }
    Ok((partials[0], f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl15_weights_sum_to_two() {
        let (_, w) = gl15();
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn polynomial_is_exact() {
        // GL15 integrates degree-29 polynomials exactly
        let f = |x: f64| x.powi(20) - 3.0 * x.powi(7) + 1.0;
        let v = integrate(&f, -1.0, 1.0, 1e-12).unwrap();
        assert!((v - (2.0 / 21.0 + 2.0)).abs() < 1e-13);
    }

    #[test]
    fn gaussian_on_half_line() {
        let v = integrate_to_inf(&|t: f64| (-t * t).exp(), 0.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-11);
    }

    #[test]
    fn oscillatory_cosine_tail() {
        // ∫_1^∞ cos(2πx)/x dx = -Ci(2π) ≈ 0.02256066174634607
        let f = |x: f64| (2.0 * std::f64::consts::PI * x).cos() / x;
        let (v, _) = oscillatory_tail(&f, 1.0, 0.5, 400).unwrap();
        assert!((v - 0.022_560_661_746_346_07).abs() < 1e-9, "got {v}");
    }

    #[test]
    fn log_singularity_with_breakpoints() {
        // ∫_0^1 ln(x) dx = -1 ; adaptive handles the integrable endpoint
        let v = integrate_segmented(&|x: f64| x.ln(), 0.0, 1.0, &[1e-4, 1e-2], 1e-10).unwrap();
        assert!((v + 1.0).abs() < 1e-8);
    }
}
