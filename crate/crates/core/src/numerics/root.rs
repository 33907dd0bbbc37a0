use crate::error::{Error, Result};

/// Absolute argument tolerance used by every solve in the crate unless a
/// caller asks for something else.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap for [`find_root`].
pub const MAX_ITER: usize = 200;

/// A closed search interval `[lo, hi]` and an absolute tolerance on the
/// argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
    tol: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64, tol: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && tol > 0.0) {
            return Err(Error::InvalidBracket { lo, hi, tol });
        }
        Ok(Self { lo, hi, tol })
    }

    /// Bracket with the default tolerance of `1e-12`.
    pub fn with_default_tol(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, DEFAULT_TOL)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }
}

/// Outcome of a bracketed solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    /// The returned abscissa, always inside the initial bracket.
    pub x: f64,
    /// `|f(x)|`.
    pub residual: f64,
    /// Width of the bracket at termination.
    pub width: f64,
    pub iterations: usize,
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let fx = f(x);
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(Error::NonFinite { x, fx })
    }
}

/// Find a zero of `f` on `bracket` by bisection accelerated with
/// false-position steps.
///
/// A secant step is only accepted when the previous step at least halved
/// the bracket, so the width shrinks by a factor two at least every other
/// iteration. Iteration stops once the width is below the tolerance, `f`
/// hits zero exactly, or the bracket cannot be split any further in double
/// precision.
pub fn find_root<F: FnMut(f64) -> f64>(mut f: F, bracket: &Bracket) -> Result<Root> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = eval(&mut f, a)?;
    let mut fb = eval(&mut f, b)?;
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            width: b - a,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            width: b - a,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut iterations = 0;
    let mut bisect_next = false;
    while iterations < MAX_ITER && b - a > bracket.tol {
        iterations += 1;
        let width = b - a;
        let mid = a + 0.5 * width;
        if mid <= a || mid >= b {
            break;
        }
        let mut x = if bisect_next {
            mid
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = mid;
        }
        let fx = eval(&mut f, x)?;
        if fx == 0.0 {
            return Ok(Root {
                x,
                residual: 0.0,
                width: 0.0,
                iterations,
            });
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        bisect_next = b - a > 0.5 * width;
    }

    let (x, residual) = if fa.abs() <= fb.abs() {
        (a, fa.abs())
    } else {
        (b, fb.abs())
    };
    Ok(Root {
        x,
        residual,
        width: b - a,
        iterations,
    })
}
