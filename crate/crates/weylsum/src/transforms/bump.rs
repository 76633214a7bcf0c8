//! Smooth compactly supported weight functions built from the standard
//! mollifier psi(t) = exp(-1/(t(1-t))).
//!
//! The transition profile is s(t) = phi(t)/(phi(t) + phi(1-t)) with
//! phi(t) = exp(-1/t) for t > 0; note phi(t) phi(1-t) = psi(t), s(t) + s(1-t) = 1,
//! and s is C-infinity with all derivatives vanishing at both ends. A bump
//! is 0 outside [lo, hi], exactly 1 on the plateau [lo+w, hi-w] (piecewise
//! definition, not a numerical limit), and rides s on the two transition
//! bands of width w.

/// A smoothstep bump on [lo, hi] with transition width w on both sides.
#[derive(Debug, Clone, Copy)]
pub struct BumpFunction {
    lo: f64,
    hi: f64,
    w: f64,
}

#[inline]
fn phi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Smooth step: 0 for t <= 0, 1 for t >= 1.
#[inline]
pub fn smoothstep(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = phi(t);
        a / (a + phi(1.0 - t))
    }
}

impl BumpFunction {
    pub fn new(lo: f64, hi: f64, w: f64) -> BumpFunction {
        assert!(hi > lo && w > 0.0 && 2.0 * w <= (hi - lo) + 1e-12);
        BumpFunction { lo, hi, w }
    }

    /// h1: supported on [1, 2]. The transition width 0.45 (plateau
    /// [1.45, 1.55]) keeps the Bessel-transformed tails short enough to
    /// certify truncations at desk scale; every identity checked here uses
    /// the same h1 on both sides, so the choice is free.
    pub fn h1() -> BumpFunction {
        BumpFunction::new(1.0, 2.0, 0.45)
    }

    /// h2: supported on [0.8, 2.2], identically 1 on [0.9, 2.1] and hence on
    /// all of supp h1 = [1, 2].
    pub fn h2() -> BumpFunction {
        BumpFunction::new(0.8, 2.2, 0.1)
    }

    /// Window on [-2, 2], identically 1 on [-1, 1].
    pub fn window() -> BumpFunction {
        BumpFunction::new(-2.0, 2.0, 1.0)
    }

    /// Bump scaled to [Y, 2Y] with no interior plateau (transitions of
    /// width Y/2 meeting at 3Y/2); used as the test function v in the
    /// Bessel-transform identity, where wide transitions mean fast dual
    /// decay.
    pub fn voronoi_weight(y_scale: f64) -> BumpFunction {
        BumpFunction::new(y_scale, 2.0 * y_scale, 0.5 * y_scale)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn plateau(&self) -> (f64, f64) {
        (self.lo + self.w, self.hi - self.w)
    }

    pub fn transition_width(&self) -> f64 {
        self.w
    }

    pub fn eval(&self, y: f64) -> f64 {
        if y <= self.lo || y >= self.hi {
            0.0
        } else if y >= self.lo + self.w && y <= self.hi - self.w {
            1.0
        } else if y < self.lo + self.w {
            smoothstep((y - self.lo) / self.w)
        } else {
            smoothstep((self.hi - y) / self.w)
        }
    }

    /// Exact integral: plateau length + 2 * (w/2), by the symmetry
    /// s(t) + s(1-t) = 1.
    pub fn integral_exact(&self) -> f64 {
        (self.hi - self.lo) - self.w
    }
}
