//! Closed real intervals with outward rounding.
//!
//! Every operation rounds the lower endpoint down and the upper endpoint up by
//! one representable number after the floating-point operation, so the result
//! contains the exact real result set. Tightness is not a goal; containment is.
//!
//! Operations that leave their domain (division by an interval containing zero,
//! logarithm of a non-positive interval, ...) return [`Interval::ENTIRE`] through
//! the operator interface and an [`Error::Domain`] through the `try_*` methods.
//! Downstream code treats a non-finite enclosure as a failed computation.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::Error;

/// A closed interval `[lo, hi]` with `lo <= hi` and no NaN endpoints.
#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

#[inline]
fn down(x: f64) -> f64 {
    if x == f64::INFINITY {
        f64::MAX
    } else {
        x.next_down()
    }
}

#[inline]
fn up(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        f64::MIN
    } else {
        x.next_up()
    }
}

/// Product with the convention `0 * inf = 0`, which is the correct limit for
/// interval endpoints.
#[inline]
fn emul(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.is_nan() {
        0.0
    } else {
        p
    }
}

impl Interval {
    /// The whole real line; the result of any failed operation.
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]`, rejecting NaN endpoints and reversed bounds.
    pub fn new(lo: f64, hi: f64) -> Result<Self, Error> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::InvalidInterval(format!("NaN endpoint in [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::InvalidInterval(format!("lo > hi in [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[x, x]`. Panics on NaN.
    pub fn point(x: f64) -> Self {
        assert!(!x.is_nan(), "NaN is not a valid interval endpoint");
        Interval { lo: x, hi: x }
    }

    /// Internal constructor for endpoints already known to be ordered.
    #[inline]
    pub(crate) fn raw(lo: f64, hi: f64) -> Self {
        if lo.is_nan() || hi.is_nan() {
            return Interval::ENTIRE;
        }
        debug_assert!(lo <= hi, "raw interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// `[x - ulp, x + ulp]`: encloses any real whose nearest double is `x`.
    pub fn around(x: f64) -> Self {
        Interval::raw(down(x), up(x))
    }

    /// Parses a decimal literal into an enclosure one ulp wide on each side.
    pub fn from_decimal(s: &str) -> Result<Self, Error> {
        let x: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not a decimal number: {s:?}")))?;
        if !x.is_finite() {
            return Err(Error::Parse(format!("non-finite decimal: {s:?}")));
        }
        Ok(Interval::around(x))
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Upper bound on the width, rounded up.
    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    /// Nearest double to the midpoint.
    pub fn mid(&self) -> f64 {
        if self.lo == f64::NEG_INFINITY || self.hi == f64::INFINITY {
            return 0.0;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains_zero() {
            0.0
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && 0.0 <= self.hi
    }

    /// `self ⊆ other`.
    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Interval::raw(lo, hi))
    }

    /// Splits at the rounded midpoint; both halves share it.
    pub fn midpoint_split(&self) -> (Interval, Interval) {
        let m = self.mid();
        (Interval::raw(self.lo, m), Interval::raw(m, self.hi))
    }

    /// Splits into `n` consecutive pieces covering the interval.
    pub fn split(&self, n: usize) -> Vec<Interval> {
        assert!(n > 0);
        let mut cuts = Vec::with_capacity(n + 1);
        cuts.push(self.lo);
        for k in 1..n {
            let t = k as f64 / n as f64;
            let c = (self.lo + (self.hi - self.lo) * t).clamp(self.lo, self.hi);
            cuts.push(c.max(*cuts.last().unwrap()));
        }
        cuts.push(self.hi);
        cuts.windows(2).map(|w| Interval::raw(w[0], w[1])).collect()
    }

    /// Symmetric box `[-m, m]` with `m = mag(self)`.
    pub fn symmetric(&self) -> Interval {
        let m = self.mag();
        Interval::raw(-m, m)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval::raw(0.0, self.mag())
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        Interval::raw(down(a.lo * a.lo).max(0.0), up(a.hi * a.hi))
    }

    /// Integer power; even powers use `|x|` so the result is the exact range.
    pub fn powi(&self, n: u32) -> Interval {
        match n {
            0 => Interval::ONE,
            1 => *self,
            _ if n % 2 == 0 => {
                let a = self.abs();
                let mut r = Interval::ONE;
                for _ in 0..n {
                    r = r * a;
                }
                Interval::raw(r.lo.max(0.0), r.hi)
            }
            _ => {
                // odd power is increasing
                let p = |x: f64| -> Interval {
                    let s = if x < 0.0 { -1.0 } else { 1.0 };
                    let base = Interval::point(x.abs());
                    let mut r = Interval::ONE;
                    for _ in 0..n {
                        r = r * base;
                    }
                    if s < 0.0 {
                        -r
                    } else {
                        r
                    }
                };
                Interval::raw(p(self.lo).lo, p(self.hi).hi)
            }
        }
    }

    pub fn try_sqrt(&self) -> Result<Interval, Error> {
        if self.lo < 0.0 {
            return Err(Error::Domain(format!("sqrt of {self}")));
        }
        Ok(Interval::raw(down(self.lo.sqrt()).max(0.0), up(self.hi.sqrt())))
    }

    pub fn sqrt(&self) -> Interval {
        self.try_sqrt().unwrap_or(Interval::ENTIRE)
    }

    pub fn try_ln(&self) -> Result<Interval, Error> {
        if self.lo <= 0.0 {
            return Err(Error::Domain(format!("log of {self}")));
        }
        Ok(Interval::raw(down(self.lo.ln()), up(self.hi.ln())))
    }

    pub fn ln(&self) -> Interval {
        self.try_ln().unwrap_or(Interval::ENTIRE)
    }

    pub fn exp(&self) -> Interval {
        Interval::raw(down(self.lo.exp()).max(0.0), up(self.hi.exp()))
    }

    /// `arcsinh(x) = log(x + sqrt(x^2 + 1))`, evaluated at the endpoints in
    /// interval arithmetic and made odd for negative arguments.
    pub fn asinh(&self) -> Interval {
        fn pos(x: f64) -> Interval {
            let xi = Interval::point(x);
            (xi + (xi.sqr() + Interval::ONE).sqrt()).ln()
        }
        let at = |x: f64| -> Interval {
            if x >= 0.0 {
                pos(x)
            } else {
                -pos(-x)
            }
        };
        if !self.is_finite() {
            return Interval::ENTIRE;
        }
        let l = at(self.lo);
        let h = at(self.hi);
        Interval::raw(l.lo, h.hi)
    }

    /// Reciprocal; `ENTIRE` when the interval contains zero.
    pub fn recip(&self) -> Interval {
        Interval::ONE / *self
    }

    pub fn try_div(&self, rhs: &Interval) -> Result<Interval, Error> {
        if rhs.contains_zero() {
            return Err(Error::Domain(format!("division of {self} by {rhs}")));
        }
        Ok(*self / *rhs)
    }

    /// Range of `x log|x|` (extended by 0 at the origin).
    pub fn xlogabsx(&self) -> Interval {
        // x log|x| is odd; on (0, 1/e] it decreases from 0 to -1/e, then increases.
        fn on_pos(l: f64, h: f64) -> Interval {
            // 0 <= l <= h
            let f = |x: f64| -> Interval {
                if x == 0.0 {
                    Interval::ZERO
                } else {
                    let xi = Interval::point(x);
                    xi * xi.ln()
                }
            };
            let inv_e = (-Interval::ONE).exp();
            let fl = f(l);
            let fh = f(h);
            let mut r = fl.hull(&fh);
            if l <= inv_e.hi() && h >= inv_e.lo() {
                // minimum -1/e lies inside
                let m = -inv_e;
                r = r.hull(&Interval::raw(m.lo, m.lo));
            }
            r
        }
        if !self.is_finite() {
            return Interval::ENTIRE;
        }
        let mut parts: Option<Interval> = None;
        if self.hi >= 0.0 {
            let p = on_pos(self.lo.max(0.0), self.hi);
            parts = Some(p);
        }
        if self.lo < 0.0 {
            let p = -on_pos((-self.hi).max(0.0), -self.lo);
            parts = Some(match parts {
                Some(q) => q.hull(&p),
                None => p,
            });
        }
        parts.unwrap()
    }

    pub fn min_with(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.min(other.lo), self.hi.min(other.hi))
    }

    pub fn max_with(&self, other: &Interval) -> Interval {
        Interval::raw(self.lo.max(other.lo), self.hi.max(other.hi))
    }

    /// Enclosure of pi.
    pub fn pi() -> Interval {
        Interval::around(std::f64::consts::PI)
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

impl FromStr for Interval {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Interval::from_decimal(s)
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    #[inline]
    fn neg(self) -> Interval {
        Interval::raw(-self.hi, -self.lo)
    }
}

impl Add for Interval {
    type Output = Interval;
    #[inline]
    fn add(self, rhs: Interval) -> Interval {
        Interval::raw(down(self.lo + rhs.lo), up(self.hi + rhs.hi))
    }
}

impl Sub for Interval {
    type Output = Interval;
    #[inline]
    fn sub(self, rhs: Interval) -> Interval {
        Interval::raw(down(self.lo - rhs.hi), up(self.hi - rhs.lo))
    }
}

impl Mul for Interval {
    type Output = Interval;
    #[inline]
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval::raw(down(emul(a, c)).max(0.0), up(emul(b, d)));
        }
        let p1 = emul(a, c);
        let p2 = emul(a, d);
        let p3 = emul(b, c);
        let p4 = emul(b, d);
        let lo = p1.min(p2).min(p3).min(p4);
        let hi = p1.max(p2).max(p3).max(p4);
        Interval::raw(down(lo), up(hi))
    }
}

impl Div for Interval {
    type Output = Interval;
    #[inline]
    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains_zero() {
            return Interval::ENTIRE;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let q = |x: f64, y: f64| -> f64 {
            let r = x / y;
            if r.is_nan() {
                0.0
            } else {
                r
            }
        };
        let p1 = q(a, c);
        let p2 = q(a, d);
        let p3 = q(b, c);
        let p4 = q(b, d);
        let lo = p1.min(p2).min(p3).min(p4);
        let hi = p1.max(p2).max(p3).max(p4);
        Interval::raw(down(lo), up(hi))
    }
}

impl Add<f64> for Interval {
    type Output = Interval;
    fn add(self, rhs: f64) -> Interval {
        self + Interval::point(rhs)
    }
}

impl Sub<f64> for Interval {
    type Output = Interval;
    fn sub(self, rhs: f64) -> Interval {
        self - Interval::point(rhs)
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self * Interval::point(rhs)
    }
}

impl Div<f64> for Interval {
    type Output = Interval;
    fn div(self, rhs: f64) -> Interval {
        self / Interval::point(rhs)
    }
}

impl AddAssign for Interval {
    fn add_assign(&mut self, rhs: Interval) {
        *self = *self + rhs;
    }
}

impl SubAssign for Interval {
    fn sub_assign(&mut self, rhs: Interval) {
        *self = *self - rhs;
    }
}

impl MulAssign for Interval {
    fn mul_assign(&mut self, rhs: Interval) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Interval {
    fn sum<I: Iterator<Item = Interval>>(iter: I) -> Interval {
        iter.fold(Interval::ZERO, |acc, x| acc + x)
    }
}

/// Arithmetic selector used by the generic [`arith`] entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Binary interval arithmetic; division by an interval containing zero is an error.
pub fn arith(x: Interval, y: Interval, op: ArithOp) -> Result<Interval, Error> {
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => x.try_div(&y),
    }
}

/// Elementary function selector used by the generic [`elem`] entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemFn {
    Sqrt,
    Log,
    Asinh,
    PowInt(u32),
    Abs,
    Exp,
}

/// Elementary functions with domain checking.
pub fn elem(x: Interval, f: ElemFn) -> Result<Interval, Error> {
    match f {
        ElemFn::Sqrt => x.try_sqrt(),
        ElemFn::Log => x.try_ln(),
        ElemFn::Asinh => Ok(x.asinh()),
        ElemFn::PowInt(n) => Ok(x.powi(n)),
        ElemFn::Abs => Ok(x.abs()),
        ElemFn::Exp => Ok(x.exp()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn add_contains_exact_sum() {
        let r = iv(1.0, 2.0) + iv(3.0, 4.0);
        assert!(r.contains(4.0) && r.contains(6.0));
        assert!(r.lo() > 3.999 && r.hi() < 6.001);
    }

    #[test]
    fn mul_mixed_signs() {
        let r = iv(-1.0, 2.0) * iv(3.0, 4.0);
        assert!(r.contains(-4.0) && r.contains(8.0));
        assert!(r.lo() > -4.001 && r.hi() < 8.001);
    }

    #[test]
    fn nan_rejected() {
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
    }

    #[test]
    fn division_by_zero_interval() {
        assert!(iv(1.0, 2.0).try_div(&iv(-1.0, 1.0)).is_err());
        assert!(!(iv(1.0, 2.0) / iv(-1.0, 1.0)).is_finite());
    }

    #[test]
    fn xlogx_contains_samples() {
        let x = iv(-0.5, 0.9);
        let r = x.xlogabsx();
        for k in 0..=1000 {
            let t = -0.5 + 1.4 * k as f64 / 1000.0;
            let v = if t == 0.0 { 0.0 } else { t * t.abs().ln() };
            assert!(r.contains(v), "{t} {v} {r}");
        }
    }

    #[test]
    fn zero_times_entire_is_zero() {
        let r = Interval::ZERO * Interval::ENTIRE;
        assert!(r.contains(0.0) && r.is_finite());
    }
}
