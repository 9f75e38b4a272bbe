//! The profile derivative on the reference interval `[-1, 1]`.
//!
//! Physical radius `ρ ∈ [1-a, 1]` and reference coordinate `ρ̃ ∈ [-1, 1]` are
//! related by `ρ = (a/2)(ρ̃ - 1) + 1`. The profile derivative is handled through
//! `g(ρ̃) = (a/2) f_ρ(ρ)`, which is `-1/2` on the middle region and a degree-9
//! polynomial ramp of width `β` at each end.

use crate::error::Error;
use crate::interval::Interval;
use crate::jet::Scalar;

/// Model parameters `a` (annulus width) and `β` (ramp width in `ρ̃`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub a: Interval,
    pub beta: Interval,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            a: Interval::from_decimal("0.05").expect("literal"),
            beta: Interval::point(1.0 / 256.0),
        }
    }
}

impl Params {
    pub fn new(a: Interval, beta: Interval) -> Result<Self, Error> {
        if !(a.lo() > 0.0 && a.hi() < 1.0) {
            return Err(Error::Config(format!("a must lie in (0,1), got {a}")));
        }
        if !(beta.lo() > 0.0 && beta.hi() < 1.0) {
            return Err(Error::Config(format!("beta must lie in (0,1), got {beta}")));
        }
        Ok(Params { a, beta })
    }

    /// Left joint `-1 + β` as a double. Exact when `β` is a point.
    pub fn left_joint(&self) -> f64 {
        -1.0 + self.beta.mid()
    }

    /// Right joint `1 - β` as a double.
    pub fn right_joint(&self) -> f64 {
        1.0 - self.beta.mid()
    }

    /// `a/2`.
    pub fn half_a(&self) -> Interval {
        self.a * 0.5
    }

    /// `4/a`.
    pub fn four_over_a(&self) -> Interval {
        Interval::point(4.0) / self.a
    }
}

/// Region of the reference interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionTag {
    LeftRamp,
    Middle,
    RightRamp,
}

impl RegionTag {
    pub const ALL: [RegionTag; 3] = [RegionTag::LeftRamp, RegionTag::Middle, RegionTag::RightRamp];

    /// Closed extent of the region in `ρ̃`.
    pub fn extent(self, p: &Params) -> Interval {
        match self {
            RegionTag::LeftRamp => Interval::raw(-1.0, p.left_joint()),
            RegionTag::Middle => Interval::raw(p.left_joint(), p.right_joint()),
            RegionTag::RightRamp => Interval::raw(p.right_joint(), 1.0),
        }
    }

    pub fn index(self) -> usize {
        match self {
            RegionTag::LeftRamp => 0,
            RegionTag::Middle => 1,
            RegionTag::RightRamp => 2,
        }
    }
}

/// Every region the interval intersects.
pub fn classify(rho_t: Interval, p: &Params) -> Result<Vec<RegionTag>, Error> {
    if rho_t.lo() < -1.0 || rho_t.hi() > 1.0 {
        return Err(Error::Region(format!("{rho_t} is not inside [-1,1]")));
    }
    Ok(RegionTag::ALL
        .into_iter()
        .filter(|r| r.extent(p).intersect(&rho_t).is_some())
        .collect())
}

/// Splits `x ⊆ [-1,1]` at the region joints, tagging each piece.
pub fn split_by_region(x: Interval, p: &Params) -> Vec<(RegionTag, Interval)> {
    let mut out = Vec::with_capacity(3);
    for r in RegionTag::ALL {
        if let Some(piece) = r.extent(p).intersect(&x) {
            // drop degenerate touches at a joint unless x itself is a point
            if piece.lo() < piece.hi() || x.lo() == x.hi() {
                out.push((r, piece));
            }
        }
    }
    if x.lo() == x.hi() && out.len() > 1 {
        out.truncate(1);
    }
    out
}

/// Integer coefficients of the ramp polynomial `q(t) = Σ c_k t^k`, `k = 5..9`.
const RAMP: [i64; 5] = [126, -420, 540, -315, 70];

/// Checks that `q'(t) = 630 t^4 (1-t)^4` exactly, so each ramp piece of `g` is
/// monotone and the endpoint hull is a valid range enclosure.
pub fn verify_ramp_monotone() -> bool {
    // derivative coefficients of t^4 .. t^8
    let deriv: Vec<i64> = RAMP
        .iter()
        .enumerate()
        .map(|(i, c)| (i as i64 + 5) * c)
        .collect();
    // 630 (1 - t)^4 = 630 (1 - 4t + 6t^2 - 4t^3 + t^4)
    let target = [630, -2520, 3780, -2520, 630];
    let q1 = RAMP.iter().sum::<i64>();
    deriv == target && q1 == 1
}

/// `q(t) = (126 - 420t + 540t^2 - 315t^3 + 70t^4) t^5` by Horner.
fn ramp_q<S: Scalar>(t: S) -> S {
    let mut acc = S::num(RAMP[4] as f64);
    for k in (0..4).rev() {
        acc = acc * t + S::num(RAMP[k] as f64);
    }
    acc * t.powi(5)
}

/// Ramp variable `t ∈ [0,1]`: `(1+ρ̃)/β` on the left, `(1-ρ̃)/β` on the right.
fn ramp_t<S: Scalar>(rho_t: S, region: RegionTag, p: &Params) -> S {
    let inv_beta = p.beta.recip();
    match region {
        RegionTag::LeftRamp => rho_t.add_cst(Interval::ONE).scale(inv_beta),
        RegionTag::RightRamp => (-rho_t).add_cst(Interval::ONE).scale(inv_beta),
        RegionTag::Middle => S::num(1.0),
    }
}

/// `g = (a/2) f_ρ` as a formula, valid for any [`Scalar`]; the caller
/// guarantees `rho_t` lies in `region`.
pub fn g_formula<S: Scalar>(rho_t: S, region: RegionTag, p: &Params) -> S {
    match region {
        RegionTag::Middle => S::num(-0.5),
        _ => ramp_q(ramp_t(rho_t, region, p)).scale(Interval::point(-0.5)),
    }
}

/// `g` for any [`Scalar`]: the monotone endpoint hull for plain intervals and
/// the polynomial formula for jets.
pub fn g_eval<S: Scalar>(rho_t: S, region: RegionTag, p: &Params) -> S {
    match rho_t.as_interval() {
        Some(x) => S::cst(g_on(x, region, p)),
        None => g_formula(rho_t, region, p),
    }
}

/// Enclosure of `(a/2) f_ρ` over `rho_t`, using monotonicity on the ramps.
pub fn f_rho_scaled(rho_t: Interval, region: RegionTag, p: &Params) -> Result<Interval, Error> {
    if !rho_t.subset_of(&region.extent(p)) {
        return Err(Error::Region(format!(
            "{rho_t} is not inside region {region:?} = {}",
            region.extent(p)
        )));
    }
    Ok(g_on(rho_t, region, p))
}

/// Unchecked variant of [`f_rho_scaled`] for hot loops.
#[inline]
pub fn g_on(rho_t: Interval, region: RegionTag, p: &Params) -> Interval {
    match region {
        RegionTag::Middle => Interval::point(-0.5),
        _ => {
            let at = |x: f64| g_formula(Interval::point(x), region, p);
            let l = at(rho_t.lo());
            let h = at(rho_t.hi());
            // g is in [-1/2, 0] on the ramps
            l.hull(&h)
                .max_with(&Interval::point(-0.5))
                .min_with(&Interval::ZERO)
        }
    }
}

/// `ρ = (a/2)(ρ̃ - 1) + 1`.
pub fn to_rho<S: Scalar>(rho_t: S, p: &Params) -> S {
    rho_t.add_cst(-Interval::ONE).scale(p.half_a()).add_cst(Interval::ONE)
}

/// `ρ̃ = (2/a)(ρ - 1) + 1`.
pub fn to_rho_t(rho: Interval, p: &Params) -> Interval {
    (rho - 1.0) * (Interval::point(2.0) / p.a) + 1.0
}

/// The normalized middle-region indicator.
#[derive(Clone, Copy, Debug)]
pub struct BsjProfile {
    pub height: Interval,
    pub support: Interval,
}

impl BsjProfile {
    pub fn new(p: &Params) -> Self {
        BsjProfile {
            height: (p.a - p.a * p.beta).sqrt().recip(),
            support: RegionTag::Middle.extent(p),
        }
    }

    /// Value on a piece lying in one region.
    pub fn on(&self, region: RegionTag) -> Interval {
        match region {
            RegionTag::Middle => self.height,
            _ => Interval::ZERO,
        }
    }

    /// `∫ height^2 dρ` over the support; encloses 1.
    pub fn l2_norm_sq(&self, p: &Params) -> Interval {
        self.height.sqr() * p.half_a() * (Interval::point(2.0) - p.beta * 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_is_monotone() {
        assert!(verify_ramp_monotone());
    }

    #[test]
    fn joints_are_continuous() {
        let p = Params::default();
        let l = g_on(Interval::point(p.left_joint()), RegionTag::LeftRamp, &p);
        assert!(l.contains(-0.5));
        let r = g_on(Interval::point(p.right_joint()), RegionTag::RightRamp, &p);
        assert!(r.contains(-0.5));
    }
}
