//! Enclosures of the elliptic-type kernels
//! `X_m(r) = ∫_{-π}^{π} cos(mx) / sqrt(1 + r^2 - 2r cos x) dx` for `m = 1, 3, 6`.
//!
//! With `u = (1-r)/(1+r)` each kernel splits as
//! `X_m = 4/(1+r) · [P_m(u^2) + asinh(1/|u|) + θ1·E_m(u^2) + θ2·S_m(u^2)·asinh(1/|u|)]`
//! with `|θ1|, |θ2| ≤ 1`. `P_m` is the smooth explicit part, `E_m` the
//! nonsingular error radius and `S_m` the singular error coefficient. The
//! closed forms below are kept term by term as they were derived.

use crate::error::Error;
use crate::interval::Interval;
use crate::jet::Scalar;

/// Kernel order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `cos x`
    I,
    /// `cos 3x`
    J,
    /// `cos 6x`
    L,
}

impl KernelKind {
    pub fn from_m(m: u32) -> Result<Self, Error> {
        match m {
            1 => Ok(KernelKind::I),
            3 => Ok(KernelKind::J),
            6 => Ok(KernelKind::L),
            _ => Err(Error::Config(format!("no kernel for m = {m}; expected 1, 3 or 6"))),
        }
    }

    pub fn m(self) -> u32 {
        match self {
            KernelKind::I => 1,
            KernelKind::J => 3,
            KernelKind::L => 6,
        }
    }
}

/// Positivity hypotheses in the expansions are only used for `u^2 < 1/66`.
pub const U2_GUARD: f64 = 1.0 / 66.0;

/// Four-part kernel value. The true kernel lies in
/// `ho_ns + ho_s_coeff·A + [-e_ns_radius, e_ns_radius] + [-e_s_coeff, e_s_coeff]·A`
/// with `A = asinh(1/|u|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelEnclosure {
    pub ho_ns: Interval,
    pub ho_s_coeff: Interval,
    pub e_ns_radius: Interval,
    pub e_s_coeff: Interval,
}

impl KernelEnclosure {
    /// Full value given an enclosure of `asinh(1/|u|)`.
    pub fn reconstruct(&self, asinh_inv_u: Interval) -> Interval {
        self.ho_ns
            + self.ho_s_coeff * asinh_inv_u
            + self.e_ns_radius.symmetric()
            + (self.e_s_coeff * asinh_inv_u).symmetric()
    }

    /// All four parts multiplied by a constant.
    pub fn scaled(&self, k: Interval) -> KernelEnclosure {
        KernelEnclosure {
            ho_ns: self.ho_ns * k,
            ho_s_coeff: self.ho_s_coeff * k,
            e_ns_radius: (self.e_ns_radius * k).abs(),
            e_s_coeff: (self.e_s_coeff * k).abs(),
        }
    }
}

/// Shared constants in interval form.
#[derive(Clone, Copy, Debug)]
pub struct Consts {
    pub sqrt2: Interval,
    pub asinh1: Interval,
    pub log2: Interval,
}

impl Consts {
    pub fn new() -> Self {
        Consts {
            sqrt2: Interval::point(2.0).sqrt(),
            asinh1: Interval::ONE.asinh(),
            log2: Interval::point(2.0).ln(),
        }
    }
}

impl Default for Consts {
    fn default() -> Self {
        Consts::new()
    }
}

fn q_frac(n: f64, d: f64) -> Interval {
    Interval::point(n) / Interval::point(d)
}

/// Smooth part, nonsingular error radius and singular error coefficient, all
/// without the `4/(1+r)` factor, as functions of `w = u^2`.
#[derive(Clone, Copy, Debug)]
pub struct Parts<S> {
    pub p: S,
    pub e_ns: S,
    pub e_s: S,
}

/// Evaluates the unscaled parts of `kind` at `w = u^2`.
pub fn parts<S: Scalar>(kind: KernelKind, w: S, c: &Consts) -> Parts<S> {
    match kind {
        KernelKind::I => parts_i(w, c),
        KernelKind::J => parts_j(w, c),
        KernelKind::L => parts_l(w, c),
    }
}

/// Smooth part only.
pub fn smooth_part<S: Scalar>(kind: KernelKind, w: S, c: &Consts) -> S {
    match kind {
        KernelKind::I => smooth_i(w, c),
        KernelKind::J => smooth_j(w, c),
        KernelKind::L => smooth_l(w, c),
    }
}

/// Nonsingular error radius only.
pub fn error_ns<S: Scalar>(kind: KernelKind, w: S, c: &Consts) -> S {
    match kind {
        KernelKind::I => error_ns_i(w, c),
        KernelKind::J => error_ns_j(w, c),
        KernelKind::L => error_ns_l(w, c),
    }
}

/// Singular error coefficient `S_m(u^2)`.
pub fn error_s<S: Scalar>(kind: KernelKind, w: S) -> S {
    let k = match kind {
        KernelKind::I => q_frac(5.0, 4.0),
        KernelKind::J => q_frac(37.0, 4.0),
        KernelKind::L => q_frac(143.0, 4.0),
    };
    w.scale(k)
}

fn parts_i<S: Scalar>(w: S, c: &Consts) -> Parts<S> {
    Parts {
        p: smooth_i(w, c),
        e_ns: error_ns_i(w, c),
        e_s: error_s(KernelKind::I, w),
    }
}

fn parts_j<S: Scalar>(w: S, c: &Consts) -> Parts<S> {
    Parts {
        p: smooth_j(w, c),
        e_ns: error_ns_j(w, c),
        e_s: error_s(KernelKind::J, w),
    }
}

fn parts_l<S: Scalar>(w: S, c: &Consts) -> Parts<S> {
    Parts {
        p: smooth_l(w, c),
        e_ns: error_ns_l(w, c),
        e_s: error_s(KernelKind::L, w),
    }
}

/// `log((1 + sqrt(1+u^2))/2)`.
fn log_half_one_plus_q<S: Scalar>(q: S) -> S {
    q.add_cst(Interval::ONE).scale(Interval::point(0.5)).ln()
}

fn smooth_i<S: Scalar>(w: S, c: &Consts) -> S {
    let (s2, a1) = (S::cst(c.sqrt2), S::cst(c.asinh1));
    let q = w.add_cst(Interval::ONE).sqrt();
    let inv_q = q.recip();
    let t1 = log_half_one_plus_q(q) / s2
        + inv_q * (S::num(-2.0) + (q.add_cst(-Interval::ONE)) * a1 + S::cst(c.log2));
    let t2 = w * (s2.scale(Interval::point(-2.0)) + a1.scale(Interval::point(2.5)))
        - w.sqr().scale(q_frac(3.0, 16.0)) * (s2 - a1.scale(Interval::point(3.0)));
    t1 + t2
}

fn error_ns_i<S: Scalar>(w: S, c: &Consts) -> S {
    let (s2, a1) = (S::cst(c.sqrt2), S::cst(c.asinh1));
    let q = w.add_cst(Interval::ONE).sqrt();
    let inner = (s2 - q.recip().scale(Interval::point(2.0)) - a1.scale(Interval::point(2.0))).abs();
    w.sqr().scale(q_frac(9.0, 4.0)) + w.scale(q_frac(5.0, 8.0)) * inner
}

fn smooth_j<S: Scalar>(w: S, c: &Consts) -> S {
    let (s2, a1, l2) = (S::cst(c.sqrt2), S::cst(c.asinh1), S::cst(c.log2));
    let q = w.add_cst(Interval::ONE).sqrt();
    let q5 = q.powi(5);
    let inv_q5 = q5.recip();
    let w2 = w.sqr();
    let w3 = w2 * w;
    let t1 = -(inv_q5.scale(q_frac(46.0, 15.0)))
        - w3.scale(q_frac(1.0, 48.0))
            * (s2.scale(Interval::point(13.0)) - a1.scale(Interval::point(15.0)))
        + a1;
    let t2 = -(a1 * inv_q5)
        + w2 * (-(s2.recip().scale(q_frac(15.0, 4.0))) - inv_q5.scale(Interval::point(2.0))
            + a1.scale(q_frac(45.0, 8.0)));
    let t3 = w.scale(q_frac(1.0, 6.0))
        * (s2.scale(Interval::point(-45.0))
            + inv_q5.scale(Interval::point(8.0))
            + a1.scale(Interval::point(45.0)));
    let t4 = l2 * inv_q5 + log_half_one_plus_q(q) / s2.scale(Interval::point(4.0));
    t1 + t2 + t3 + t4
}

fn error_ns_j<S: Scalar>(w: S, c: &Consts) -> S {
    let (s2, a1) = (S::cst(c.sqrt2), S::cst(c.asinh1));
    let q = w.add_cst(Interval::ONE).sqrt();
    let inv_q = q.recip();
    let inv_q3 = q.powi(3).recip();
    let inv_q5 = q.powi(5).recip();
    let t0 = w.scale(q_frac(7.0, 2.0)) + w.scale(q_frac(3.0, 2.0));
    let t1 = w.scale(q_frac(1.0, 240.0))
        * (s2.scale(Interval::point(-7.0)) - inv_q5.scale(Interval::point(24.0))
            + inv_q3.scale(Interval::point(40.0)))
        .abs();
    let t2 = w.scale(q_frac(3.0, 16.0)) * (-s2 + inv_q5.scale(Interval::point(8.0))).abs();
    let h = s2.recip().scale(q_frac(73.0, 30.0))
        - inv_q.scale(Interval::point(2.0))
        - inv_q3.scale(q_frac(2.0, 3.0))
        - inv_q5.scale(q_frac(2.0, 5.0))
        - a1.scale(Interval::point(2.0));
    let t3 = w.scale(q_frac(37.0, 8.0)) * h.abs();
    t0 + t1 + t2 + t3
}

fn smooth_l<S: Scalar>(w: S, c: &Consts) -> S {
    let (s2, a1, l2) = (S::cst(c.sqrt2), S::cst(c.asinh1), S::cst(c.log2));
    let q = w.add_cst(Interval::ONE).sqrt();
    let inv_q11 = q.powi(11).recip();
    let w2 = w.sqr();
    let w3 = w2 * w;
    let w4 = w2.sqr();
    let w5 = w4 * w;
    let w6 = w3.sqr();
    let lin = |x: f64, y: f64| s2.scale(Interval::point(x)) - a1.scale(Interval::point(y));
    let t1 = a1 + w.scale(Interval::point(33.0)) * (a1 - s2)
        - w2.scale(q_frac(495.0, 8.0)) * lin(1.0, 3.0)
        - w3.scale(q_frac(77.0, 4.0)) * lin(13.0, 15.0);
    let t2 = -(w4.scale(q_frac(165.0, 128.0)) * lin(43.0, 105.0))
        - w5.scale(q_frac(33.0, 640.0)) * lin(257.0, 315.0)
        - w6.scale(q_frac(7.0, 15360.0)) * lin(221.0, 495.0);
    let poly = w.scale(Interval::point(945.0))
        .add_cst(Interval::point(-2268.0));
    let poly = (poly * w).add_cst(Interval::point(3366.0));
    let poly = (poly * w).add_cst(Interval::point(-604.0));
    let poly = (w.scale(Interval::point(11.0)) * poly).add_cst(Interval::point(1627.0));
    let t3 = -(inv_q11.scale(q_frac(8.0, 3465.0)) * poly);
    let t4 = (l2 - a1) * inv_q11 + log_half_one_plus_q(q) / s2.scale(Interval::point(32.0));
    t1 + t2 + t3 + t4
}

fn error_ns_l<S: Scalar>(w: S, c: &Consts) -> S {
    let (s2, a1) = (S::cst(c.sqrt2), S::cst(c.asinh1));
    let q = w.add_cst(Interval::ONE).sqrt();
    let q11 = q.powi(11);
    let inv_q11 = q11.recip();
    let inv = |k: u32| q.powi(k).recip();
    // polynomial Σ c_k u^(2k) by Horner
    let horner = |coef: &[f64]| -> S {
        let mut acc = S::num(*coef.last().unwrap());
        for &ck in coef.iter().rev().skip(1) {
            acc = (acc * w).add_cst(Interval::point(ck));
        }
        acc
    };
    let t0 = w.scale(q_frac(13.0, 2.0)) + w.scale(Interval::point(32.0));
    let f1 = (horner(&[8192.0, 45056.0, 101376.0, 118272.0, 73920.0])
        - s2.scale(Interval::point(5419.0)) * q11)
        * inv_q11;
    let t1 = w.scale(q_frac(1.0, 443520.0)) * f1.abs();
    let f2 = (horner(&[1024.0, 5632.0, 12672.0, 14784.0]) - s2.scale(Interval::point(533.0)) * q11)
        * inv_q11;
    let t2 = w.scale(q_frac(1.0, 2240.0)) * f2.abs();
    let f3 = (horner(&[512.0, 2816.0, 6336.0]) - s2.scale(Interval::point(151.0)) * q11) * inv_q11;
    let t3 = w.scale(q_frac(5.0, 896.0)) * f3.abs();
    let t4 = w.scale(q_frac(7.0, 96.0))
        * (s2.scale(Interval::point(-13.0)) - inv_q11.scale(Interval::point(576.0))
            + inv(9).scale(Interval::point(704.0)))
        .abs();
    let t5 = w.scale(q_frac(45.0, 128.0)) * (-s2 + inv_q11.scale(Interval::point(64.0))).abs();
    let h = s2.recip().scale(q_frac(137969.0, 55440.0))
        - inv_q11.scale(q_frac(2.0, 11.0))
        - inv(9).scale(q_frac(2.0, 9.0))
        - inv(7).scale(q_frac(2.0, 7.0))
        - inv(5).scale(q_frac(2.0, 5.0))
        - inv(3).scale(q_frac(2.0, 3.0))
        - q.recip().scale(Interval::point(2.0))
        - a1.scale(Interval::point(2.0));
    let t6 = w.scale(q_frac(143.0, 8.0)) * h.abs();
    t0 + t1 + t2 + t3 + t4 + t5 + t6
}

/// Enclosure of `u = (1-r)/(1+r)`.
pub fn u_of(r: Interval) -> Result<Interval, Error> {
    if r.lo() <= 0.0 {
        return Err(Error::Domain(format!("kernel radius ratio must be positive, got {r}")));
    }
    // (1-r)/(1+r) = 2/(1+r) - 1 is monotone in r, so evaluate at the endpoints.
    let f = |x: f64| Interval::point(2.0) / (Interval::point(x) + 1.0) - 1.0;
    let (a, b) = (f(r.hi()), f(r.lo()));
    Ok(Interval::raw(a.lo(), b.hi()))
}

/// Kernel enclosure for radius ratio `r`.
pub fn kernel(kind: KernelKind, r: Interval) -> Result<KernelEnclosure, Error> {
    let u = u_of(r)?;
    let w = u.sqr();
    if w.hi() >= U2_GUARD {
        return Err(Error::Domain(format!(
            "u^2 = {w} violates the small-u guard u^2 < 1/66 (r = {r})"
        )));
    }
    let c = Consts::new();
    let pr = parts(kind, w, &c);
    let scale = Interval::point(4.0) / (r + 1.0);
    let enc = KernelEnclosure {
        ho_ns: pr.p,
        ho_s_coeff: Interval::ONE,
        e_ns_radius: pr.e_ns,
        e_s_coeff: pr.e_s,
    }
    .scaled(scale);
    if !(enc.ho_ns.is_finite() && enc.e_ns_radius.is_finite()) {
        return Err(Error::Domain(format!("kernel evaluation overflowed at r = {r}")));
    }
    Ok(enc)
}

pub fn kernel_i(r: Interval) -> Result<KernelEnclosure, Error> {
    kernel(KernelKind::I, r)
}

pub fn kernel_j(r: Interval) -> Result<KernelEnclosure, Error> {
    kernel(KernelKind::J, r)
}

pub fn kernel_l(r: Interval) -> Result<KernelEnclosure, Error> {
    kernel(KernelKind::L, r)
}

/// `K^m(s) = X_m(s) / (2π s)`, all four parts scaled.
pub fn k_m(r: Interval, m: u32) -> Result<KernelEnclosure, Error> {
    let kind = KernelKind::from_m(m)?;
    let enc = kernel(kind, r)?;
    Ok(enc.scaled((Interval::pi() * 2.0 * r).recip()))
}

/// `asinh(1/|u|)` for an enclosure of `u` bounded away from zero.
pub fn asinh_inv_abs(u: Interval) -> Result<Interval, Error> {
    if u.contains_zero() {
        return Err(Error::Domain(format!(
            "asinh(1/|u|) is unbounded for u = {u}; use the singular integrator"
        )));
    }
    Ok(u.abs().recip().asinh())
}

/// Reconstructed full kernel value at `r` (requires `r` away from 1).
pub fn kernel_value(kind: KernelKind, r: Interval) -> Result<Interval, Error> {
    let enc = kernel(kind, r)?;
    let a = asinh_inv_abs(u_of(r)?)?;
    Ok(enc.reconstruct(a))
}

/// Closed form of `∫_c^d asinh(|ρ̃ + x - 2 + 4/a| / |ρ̃ - x|) dx`.
///
/// Uses the logarithmic antiderivative, in which `(x-ρ̃) log|x-ρ̃|` is extended
/// by zero at `x = ρ̃`, so `c`, `d` may touch or straddle `ρ̃`.
pub fn arcsinh_exact_integral(
    c: Interval,
    d: Interval,
    rho_t: Interval,
    a: Interval,
) -> Result<Interval, Error> {
    if c.lo() < -1.0 || d.hi() > 1.0 || c.lo() > d.hi() {
        return Err(Error::Domain(format!("integration range [{c}, {d}] not inside [-1,1]")));
    }
    let sqrt2 = Interval::point(2.0).sqrt();
    let four_a = Interval::point(4.0) / a;
    let anti = |x: Interval| -> Interval {
        let s = x + rho_t - 2.0;
        let diff = x - rho_t;
        let big = four_a + s;
        let t1 = x * (big + (diff.sqr() + big.sqr()).sqrt()).ln();
        let t2 = diff.xlogabsx();
        let rad = (Interval::point(8.0)
            + a * 4.0 * s
            + a.sqr() * (Interval::point(2.0) + (x - 2.0) * x + (rho_t - 2.0) * rho_t))
            .sqrt();
        let n = (Interval::point(2.0) + a * (x - 1.0) + rad).ln();
        let coef = sqrt2 / a * (Interval::point(-2.0) + a - a * rho_t);
        let m = (Interval::point(4.0) + a * s + sqrt2 * rad).ln();
        t1 - t2 - coef * n - rho_t * m
    };
    if c == d && c.lo() == c.hi() {
        return Ok(Interval::ZERO);
    }
    let r = anti(d) - anti(c);
    if !r.is_finite() {
        return Err(Error::Domain(format!(
            "arcsinh integral not finite on [{c}, {d}] with ρ̃ = {rho_t}"
        )));
    }
    // the integrand is nonnegative
    Ok(Interval::raw(r.lo().max(0.0), r.hi().max(0.0)))
}
