//! Fourth-order Taylor jets over interval coefficients, and the [`Scalar`]
//! abstraction shared by intervals and jets.
//!
//! A jet seeded with [`Jet4::var`] on an interval `X` carries coefficients
//! `c[k]` enclosing `f^(k)(ξ)/k!` for every `ξ ∈ X`, so `24·c[4]` encloses the
//! fourth derivative over `X`. This is what the two-point Gauss–Legendre
//! remainder needs.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::interval::Interval;

/// Values the kernel and profile formulas can be evaluated on.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Lifts a constant.
    fn cst(x: Interval) -> Self;
    /// Enclosure of the value itself.
    fn value(&self) -> Interval;
    fn sqrt(self) -> Self;
    fn ln(self) -> Self;
    fn asinh(self) -> Self;
    /// Absolute value; jets require a sign-definite base.
    fn abs(self) -> Self;
    fn sqr(self) -> Self;
    fn recip(self) -> Self;
    fn powi(self, n: u32) -> Self;
    /// Multiplication by a constant.
    fn scale(self, c: Interval) -> Self;
    fn is_valid(&self) -> bool;
    /// The value as a plain interval when `Self` carries no derivatives.
    fn as_interval(&self) -> Option<Interval> {
        None
    }

    fn add_cst(self, c: Interval) -> Self {
        self + Self::cst(c)
    }
    fn num(x: f64) -> Self {
        Self::cst(Interval::point(x))
    }
}

impl Scalar for Interval {
    #[inline]
    fn cst(x: Interval) -> Self {
        x
    }
    #[inline]
    fn value(&self) -> Interval {
        *self
    }
    fn sqrt(self) -> Self {
        Interval::sqrt(&self)
    }
    fn ln(self) -> Self {
        Interval::ln(&self)
    }
    fn asinh(self) -> Self {
        Interval::asinh(&self)
    }
    fn abs(self) -> Self {
        Interval::abs(&self)
    }
    fn sqr(self) -> Self {
        Interval::sqr(&self)
    }
    fn recip(self) -> Self {
        Interval::recip(&self)
    }
    fn powi(self, n: u32) -> Self {
        Interval::powi(&self, n)
    }
    #[inline]
    fn scale(self, c: Interval) -> Self {
        self * c
    }
    fn is_valid(&self) -> bool {
        self.is_finite()
    }
    fn as_interval(&self) -> Option<Interval> {
        Some(*self)
    }
}

/// Truncated Taylor series of order 4 with interval coefficients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet4 {
    pub c: [Interval; 5],
}

impl Jet4 {
    /// The independent variable ranging over `x`.
    pub fn var(x: Interval) -> Self {
        let mut c = [Interval::ZERO; 5];
        c[0] = x;
        c[1] = Interval::ONE;
        Jet4 { c }
    }

    pub fn constant(x: Interval) -> Self {
        let mut c = [Interval::ZERO; 5];
        c[0] = x;
        Jet4 { c }
    }

    fn invalid() -> Self {
        Jet4 {
            c: [Interval::ENTIRE; 5],
        }
    }

    /// Enclosure of the `k`-th derivative over the base interval.
    pub fn derivative(&self, k: usize) -> Interval {
        const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];
        self.c[k] * FACT[k]
    }

    fn div_k(x: Interval, k: usize) -> Interval {
        match k {
            1 => x,
            2 => x * 0.5,
            4 => x * 0.25,
            _ => x / (k as f64),
        }
    }
}

impl Neg for Jet4 {
    type Output = Jet4;
    fn neg(self) -> Jet4 {
        Jet4 {
            c: self.c.map(|x| -x),
        }
    }
}

impl Add for Jet4 {
    type Output = Jet4;
    fn add(self, rhs: Jet4) -> Jet4 {
        let mut c = self.c;
        for (ck, rk) in c.iter_mut().zip(rhs.c) {
            *ck = *ck + rk;
        }
        Jet4 { c }
    }
}

impl Sub for Jet4 {
    type Output = Jet4;
    fn sub(self, rhs: Jet4) -> Jet4 {
        let mut c = self.c;
        for (ck, rk) in c.iter_mut().zip(rhs.c) {
            *ck = *ck - rk;
        }
        Jet4 { c }
    }
}

impl Mul for Jet4 {
    type Output = Jet4;
    fn mul(self, rhs: Jet4) -> Jet4 {
        let a = &self.c;
        let b = &rhs.c;
        let mut c = [Interval::ZERO; 5];
        for k in 0..5 {
            let mut s = a[0] * b[k];
            for i in 1..=k {
                s += a[i] * b[k - i];
            }
            c[k] = s;
        }
        Jet4 { c }
    }
}

impl Div for Jet4 {
    type Output = Jet4;
    fn div(self, rhs: Jet4) -> Jet4 {
        let b0 = rhs.c[0];
        if b0.contains_zero() {
            return Jet4::invalid();
        }
        let mut q = [Interval::ZERO; 5];
        for k in 0..5 {
            let mut s = self.c[k];
            for j in 0..k {
                s -= q[j] * rhs.c[k - j];
            }
            q[k] = s / b0;
        }
        Jet4 { c: q }
    }
}

impl Scalar for Jet4 {
    fn cst(x: Interval) -> Self {
        Jet4::constant(x)
    }

    fn value(&self) -> Interval {
        self.c[0]
    }

    fn sqrt(self) -> Self {
        let a = &self.c;
        if a[0].lo() <= 0.0 {
            return Jet4::invalid();
        }
        let s0 = a[0].sqrt();
        let two_s0 = s0 * 2.0;
        let mut s = [Interval::ZERO; 5];
        s[0] = s0;
        for k in 1..5 {
            let mut acc = a[k];
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / two_s0;
        }
        Jet4 { c: s }
    }

    fn ln(self) -> Self {
        let a = &self.c;
        if a[0].lo() <= 0.0 {
            return Jet4::invalid();
        }
        let mut l = [Interval::ZERO; 5];
        l[0] = a[0].ln();
        for k in 1..5 {
            let mut acc = Interval::ZERO;
            for j in 1..k {
                acc += a[k - j] * l[j] * (j as f64);
            }
            l[k] = (a[k] - Jet4::div_k(acc, k)) / a[0];
        }
        Jet4 { c: l }
    }

    fn asinh(self) -> Self {
        // d/dx asinh(a) = a' w with w = (1 + a^2)^(-1/2)
        let w = (self.sqr() + Jet4::num(1.0)).sqrt().recip();
        if !w.is_valid() {
            return Jet4::invalid();
        }
        let a = &self.c;
        let mut l = [Interval::ZERO; 5];
        l[0] = a[0].asinh();
        for k in 1..5 {
            let mut acc = Interval::ZERO;
            for j in 1..=k {
                acc += a[j] * w.c[k - j] * (j as f64);
            }
            l[k] = Jet4::div_k(acc, k);
        }
        Jet4 { c: l }
    }

    fn abs(self) -> Self {
        if self.c[0].lo() > 0.0 {
            self
        } else if self.c[0].hi() < 0.0 {
            -self
        } else {
            Jet4::invalid()
        }
    }

    fn sqr(self) -> Self {
        let a = &self.c;
        let mut c = [Interval::ZERO; 5];
        c[0] = a[0].sqr();
        c[1] = a[0] * a[1] * 2.0;
        c[2] = a[0] * a[2] * 2.0 + a[1].sqr();
        c[3] = (a[0] * a[3] + a[1] * a[2]) * 2.0;
        c[4] = (a[0] * a[4] + a[1] * a[3]) * 2.0 + a[2].sqr();
        Jet4 { c }
    }

    fn recip(self) -> Self {
        Jet4::num(1.0) / self
    }

    fn powi(self, n: u32) -> Self {
        match n {
            0 => Jet4::num(1.0),
            1 => self,
            _ => {
                let half = self.powi(n / 2).sqr();
                if n % 2 == 1 {
                    half * self
                } else {
                    half
                }
            }
        }
    }

    fn scale(self, k: Interval) -> Self {
        Jet4 {
            c: self.c.map(|x| x * k),
        }
    }

    fn add_cst(self, k: Interval) -> Self {
        let mut c = self.c;
        c[0] = c[0] + k;
        Jet4 { c }
    }

    fn is_valid(&self) -> bool {
        self.c.iter().all(|x| x.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_fourth_derivative() {
        let x = Jet4::var(Interval::new(0.0, 1.0).unwrap());
        let f = x.powi(4).scale(Interval::point(3.0)) + x.sqr();
        assert!(f.derivative(4).contains(72.0));
        assert!(f.derivative(4).width() < 1e-12);
    }

    #[test]
    fn log_derivatives_at_point() {
        let x = Jet4::var(Interval::point(2.0));
        let f = x.ln();
        // d^4/dx^4 log x = -6/x^4
        assert!(f.derivative(4).contains(-6.0 / 16.0));
    }

    #[test]
    fn asinh_first_derivative() {
        let x = Jet4::var(Interval::point(0.5));
        let f = x.asinh();
        let d1 = 1.0 / (1.0f64 + 0.25).sqrt();
        assert!(f.derivative(1).contains(d1) || (f.derivative(1).mid() - d1).abs() < 1e-15);
    }
}
