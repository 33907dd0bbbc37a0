//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (lm, flm, left) = simpson(f, a, fa, m, fm);
    let (rm, frm, right) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1)
        + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1)
}

/// Integrate `f` over `[a, b]` to roughly `rel_tol` relative accuracy.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Coarse pass over 16 panels sets the absolute scale for the tolerance.
    let panels = 16;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    let mut pieces = Vec::with_capacity(panels);
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i + 1 == panels { b } else { lo + h };
        let (flo, fhi) = (f(lo), f(hi));
        let (m, fm, s) = simpson(&f, lo, flo, hi, fhi);
        total += s.abs();
        pieces.push((lo, flo, hi, fhi, m, fm, s));
    }
    let abs_tol = (rel_tol * total).max(f64::MIN_POSITIVE) / panels as f64;
    pieces
        .into_iter()
        .map(|(lo, flo, hi, fhi, m, fm, s)| recurse(&f, lo, flo, hi, fhi, m, fm, s, abs_tol, 0))
        .sum()
}

/// Integrate `f` over `[a, ∞)` via the substitution `x = a + u / (1 - u)`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> f64 {
    let g = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - u;
        let x = a + u / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, rel_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, 1e-10);
        assert!((v - 8.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail() {
        for &a in &[0.0, 0.5, 3.0, 20.0] {
            let v = integrate_tail(|x: f64| (-x).exp(), a, 1e-10);
            let exact = (-a).exp();
            assert!(((v - exact) / exact).abs() < 1e-8, "{a}: {v} vs {exact}");
        }
    }

    #[test]
    fn power_tail() {
        // ∫_1^∞ x^{-3} dx = 1/2
        let v = integrate_tail(|x: f64| x.powi(-3), 1.0, 1e-10);
        assert!((v - 0.5).abs() < 1e-8);
    }
}
