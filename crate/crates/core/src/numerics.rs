//! Numerical oracles: adaptive quadrature, bracketed root finding and
//! central differences.
//!
//! Everything here is deterministic. The same inputs always evaluate the
//! integrand at the same abscissae in the same order, which keeps exported
//! numbers stable across runs.

use crate::error::{Error, Result};

/// Hard cap on bisection depth in [`integrate`], independent of the
/// iteration budget. Beyond this the subintervals approach machine spacing.
const MAX_DEPTH: usize = 60;

/// Stopping criteria shared by the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    abs_tol: f64,
    rel_tol: f64,
    max_iterations: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iterations: usize) -> Result<Self> {
        if !(abs_tol >= 0.0 && abs_tol.is_finite()) || !(rel_tol >= 0.0 && rel_tol.is_finite()) {
            return Err(Error::InvalidTolerance(format!(
                "tolerances must be finite and non-negative (abs {abs_tol}, rel {rel_tol})"
            )));
        }
        if abs_tol == 0.0 && rel_tol == 0.0 {
            return Err(Error::InvalidTolerance(
                "at least one of abs_tol, rel_tol must be positive".into(),
            ));
        }
        if max_iterations == 0 {
            return Err(Error::InvalidTolerance("max_iterations must be positive".into()));
        }
        Ok(Self { abs_tol, rel_tol, max_iterations })
    }

    /// Pure absolute tolerance with a generous iteration budget.
    pub fn absolute(abs_tol: f64) -> Result<Self> {
        Self::new(abs_tol, 0.0, 100_000)
    }

    pub fn abs_tol(&self) -> f64 {
        self.abs_tol
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }

    fn bound(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-12, max_iterations: 100_000 }
    }
}

struct Panel {
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

struct Quadrature<F> {
    f: F,
    subdivisions: usize,
    budget: usize,
    exhausted: bool,
}

impl<F: FnMut(f64) -> f64> Quadrature<F> {
    fn eval(&mut self, x: f64) -> Result<f64> {
        let y = (self.f)(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFiniteIntegrand { x })
        }
    }

    fn refine(&mut self, p: Panel, eps: f64, depth: usize) -> Result<f64> {
        let lm = 0.5 * (p.a + p.m);
        let rm = 0.5 * (p.m + p.b);
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = simpson(p.a, p.m, p.fa, flm, p.fm);
        let right = simpson(p.m, p.b, p.fm, frm, p.fb);
        let delta = left + right - p.whole;

        // Richardson extrapolation of the two Simpson levels.
        let extrapolated = left + right + delta / 15.0;
        if delta.abs() <= 15.0 * eps || depth >= MAX_DEPTH {
            return Ok(extrapolated);
        }
        if self.subdivisions >= self.budget {
            self.exhausted = true;
            return Ok(extrapolated);
        }
        self.subdivisions += 1;

        let lp = Panel { a: p.a, m: lm, b: p.m, fa: p.fa, fm: flm, fb: p.fm, whole: left };
        let rp = Panel { a: p.m, m: rm, b: p.b, fa: p.fm, fm: frm, fb: p.fb, whole: right };
        Ok(self.refine(lp, 0.5 * eps, depth + 1)? + self.refine(rp, 0.5 * eps, depth + 1)?)
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) * (fa + 4.0 * fm + fb) / 6.0
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// `a > b` is allowed and yields exactly the negated integral over `[b, a]`.
/// The error target is `max(abs_tol, rel_tol * |I|)`, with `|I|` taken from
/// the first Simpson estimate. Each panel split counts as one iteration; when
/// the budget runs out the best estimate is carried by
/// [`Error::NonConvergence`].
pub fn integrate<F>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integration bounds must be finite ({a}, {b})")));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }

    let mut q = Quadrature { f, subdivisions: 0, budget: tol.max_iterations, exhausted: false };
    let m = 0.5 * (a + b);
    let fa = q.eval(a)?;
    let fm = q.eval(m)?;
    let fb = q.eval(b)?;
    let whole = simpson(a, b, fa, fm, fb);
    let eps = tol.bound(whole);

    let value = q.refine(Panel { a, m, b, fa, fm, fb, whole }, eps, 0)?;
    if q.exhausted {
        return Err(Error::NonConvergence { best_estimate: value, iterations: q.subdivisions });
    }
    Ok(value)
}

/// Brent's method on a sign-changing bracket `[lo, hi]`.
///
/// Inverse quadratic interpolation and secant steps are only accepted when
/// they stay inside the current bracket and shrink it fast enough; otherwise
/// the step falls back to bisection, so the bracket is never lost.
/// Converges once the bracket half-width drops below
/// `max(abs_tol, rel_tol * |x|)` or `f(x)` is exactly zero.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !fa.is_finite() || !fb.is_finite() || fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
    }

    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..tol.max_iterations {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.bound(b);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * xm * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }

    Err(Error::NonConvergence { best_estimate: b, iterations: tol.max_iterations })
}

/// Central difference `(f(x + h) - f(x - h)) / 2h`.
pub fn derivative<F>(mut f: F, x: f64, h: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    debug_assert!(h > 0.0);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// `n` evenly spaced points from `a` to `b` inclusive; the last point is `b`
/// exactly.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let step = (b - a) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
                .collect()
        }
    }
}
