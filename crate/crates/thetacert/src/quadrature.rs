//! Adaptive rigorous integration in one variable.
//!
//! Segments live in a priority queue keyed on the width of their enclosure
//! (ties broken by insertion order). The widest segment is popped and either
//! accepted or bisected at its midpoint. After the evaluation budget is spent
//! the enclosure is the sum over accepted and pending segments.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::Error;
use crate::interval::Interval;
use crate::jet::{Jet4, Scalar};
use crate::kernels::arcsinh_exact_integral;
use crate::profile::{Params, RegionTag};

/// Default per-integral evaluation budget.
pub const MAX_ELEMENTS_EVALUATED: usize = 100_000;

/// Quadrature rule used on each segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Two-point Gauss–Legendre with a fourth-derivative remainder.
    Gl2,
    /// Interval evaluation over the whole segment.
    Order0,
}

/// Integration context.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub a: Interval,
    pub beta: Interval,
    pub left: Interval,
    pub right: Interval,
    pub region_rho: RegionTag,
    pub region_rhop: RegionTag,
    pub rho_normalized: Interval,
    /// Maximum number of queue pops.
    pub budget: usize,
    /// Flag budget exhaustion with unmet tolerances as a failure.
    pub strict: bool,
}

impl ParameterSet {
    pub fn new(params: &Params, abs_tol: f64, rel_tol: f64) -> Self {
        ParameterSet {
            abs_tol,
            rel_tol,
            a: params.a,
            beta: params.beta,
            left: Interval::point(-1.0),
            right: Interval::point(1.0),
            region_rho: RegionTag::Middle,
            region_rhop: RegionTag::Middle,
            rho_normalized: Interval::ZERO,
            budget: MAX_ELEMENTS_EVALUATED,
            strict: false,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.left.hi() > self.right.lo() {
            return Err(Error::Config(format!("left {} > right {}", self.left, self.right)));
        }
        if self.rho_normalized.lo() < -1.0 || self.rho_normalized.hi() > 1.0 {
            return Err(Error::Config(format!(
                "rho_normalized {} outside [-1,1]",
                self.rho_normalized
            )));
        }
        Ok(())
    }
}

/// Outcome flag of an integration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Ok,
    Failed,
}

/// Result of one adaptive integration.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationResult {
    pub params: ParameterSet,
    pub result: Interval,
    /// `[sum of node contributions, sum of remainder terms]`.
    pub error_by_coordinate: Vec<Interval>,
    pub flag: Flag,
    /// Number of queue pops.
    pub evaluations: usize,
    /// True when the budget ran out before every segment was accepted.
    pub exhausted: bool,
}

impl IntegrationResult {
    pub fn ok(&self) -> bool {
        self.flag == Flag::Ok
    }
}

/// A function that can be evaluated on intervals and on Taylor jets.
pub trait Integrand {
    fn eval<S: Scalar>(&self, x: S) -> S;
}

/// Segment enclosure with its two components.
#[derive(Clone, Copy, Debug)]
struct SegmentValue {
    total: Interval,
    nodes: Interval,
    remainder: Interval,
}

fn sqrt3_over_3() -> Interval {
    Interval::point(3.0).sqrt() / 3.0
}

/// `(b-a)/2 (f(x+) + f(x-)) + (b-a)^5/4320 f''''([a,b])`.
pub fn gl2_enclosure<F: Integrand>(f: &F, seg: Interval) -> Interval {
    gl2_parts(f, seg).total
}

fn gl2_parts<F: Integrand>(f: &F, seg: Interval) -> SegmentValue {
    let len = Interval::point(seg.hi()) - Interval::point(seg.lo());
    let half = len * 0.5;
    let mid = (Interval::point(seg.hi()) + Interval::point(seg.lo())) * 0.5;
    let off = half * sqrt3_over_3();
    let xp = (mid + off).intersect(&seg).unwrap_or(seg);
    let xm = (mid - off).intersect(&seg).unwrap_or(seg);
    let nodes = half * (f.eval(xp) + f.eval(xm));
    let jet = f.eval(Jet4::var(seg));
    let d4 = jet.derivative(4);
    let remainder = len.powi(5) / 4320.0 * d4;
    SegmentValue {
        total: nodes + remainder,
        nodes,
        remainder,
    }
}

/// `|seg| · f(seg)`.
pub fn order0_enclosure<F: Integrand>(f: &F, seg: Interval) -> Interval {
    let len = Interval::point(seg.hi()) - Interval::point(seg.lo());
    len * f.eval(seg)
}

fn segment_value<F: Integrand>(f: &F, seg: Interval, rule: Rule) -> SegmentValue {
    match rule {
        Rule::Gl2 => gl2_parts(f, seg),
        Rule::Order0 => {
            let v = order0_enclosure(f, seg);
            SegmentValue {
                total: v,
                nodes: v,
                remainder: Interval::ZERO,
            }
        }
    }
}

struct QueueItem {
    width: f64,
    seq: u64,
    seg: Interval,
    value: SegmentValue,
}

impl PartialEq for QueueItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for QueueItem {}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // widest first; earlier insertion first among equal widths
        self.width
            .total_cmp(&other.width)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn item_width(v: &SegmentValue) -> f64 {
    let w = v.total.width();
    if w.is_nan() {
        f64::INFINITY
    } else {
        w
    }
}

/// Adaptive integration of `f` over `domain` with the queue scheme.
pub fn adapt_integrate<F: Integrand>(
    f: &F,
    domain: Interval,
    ctx: &ParameterSet,
    rule: Rule,
) -> IntegrationResult {
    let mut params = ctx.clone();
    params.left = Interval::point(domain.lo());
    params.right = Interval::point(domain.hi());
    if domain.lo() == domain.hi() {
        return IntegrationResult {
            params,
            result: Interval::ZERO,
            error_by_coordinate: vec![Interval::ZERO, Interval::ZERO],
            flag: Flag::Ok,
            evaluations: 0,
            exhausted: false,
        };
    }
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let root = segment_value(f, domain, rule);
    heap.push(QueueItem {
        width: item_width(&root),
        seq,
        seg: domain,
        value: root,
    });
    let mut accepted = Interval::ZERO;
    let mut acc_nodes = Interval::ZERO;
    let mut acc_rem = Interval::ZERO;
    let mut pops = 0usize;
    while pops < ctx.budget {
        let Some(item) = heap.pop() else { break };
        pops += 1;
        let seg_len = item.seg.hi() - item.seg.lo();
        if item.width <= ctx.abs_tol && item.width <= ctx.rel_tol * seg_len {
            accepted += item.value.total;
            acc_nodes += item.value.nodes;
            acc_rem += item.value.remainder;
            continue;
        }
        let (l, r) = item.seg.midpoint_split();
        if l.lo() == l.hi() || r.lo() == r.hi() {
            // cannot split further in double precision
            accepted += item.value.total;
            acc_nodes += item.value.nodes;
            acc_rem += item.value.remainder;
            continue;
        }
        for s in [l, r] {
            seq += 1;
            let v = segment_value(f, s, rule);
            heap.push(QueueItem {
                width: item_width(&v),
                seq,
                seg: s,
                value: v,
            });
        }
    }
    let exhausted = !heap.is_empty();
    let mut result = accepted;
    let mut nodes = acc_nodes;
    let mut rem = acc_rem;
    for item in heap.into_iter() {
        result += item.value.total;
        nodes += item.value.nodes;
        rem += item.value.remainder;
    }
    let failed = !result.is_finite() || (ctx.strict && exhausted);
    IntegrationResult {
        params,
        result,
        error_by_coordinate: vec![nodes, rem],
        flag: if failed { Flag::Failed } else { Flag::Ok },
        evaluations: pops,
        exhausted,
    }
}

/// `bounds_of_a × ∫_cell asinh(|ρ̃ + x - 2 + 4/a| / |ρ̃ - x|) dx`.
pub fn integrate_singular(
    bounds_of_a: Interval,
    cell: Interval,
    rho_t: Interval,
    a: Interval,
) -> Result<Interval, Error> {
    if bounds_of_a == Interval::ZERO {
        return Ok(Interval::ZERO);
    }
    let w = arcsinh_exact_integral(
        Interval::point(cell.lo()),
        Interval::point(cell.hi()),
        rho_t,
        a,
    )?;
    Ok(bounds_of_a * w)
}

/// Cells `k` with `|j-k| <= 1` and the rest.
pub fn staircase_partition(j: usize, n: usize) -> (Vec<usize>, Vec<usize>) {
    assert!(j < n, "cell index {j} out of range for {n} cells");
    let lo = j.saturating_sub(1);
    let hi = (j + 1).min(n - 1);
    let singular: Vec<usize> = (lo..=hi).collect();
    let regular: Vec<usize> = (0..n).filter(|k| *k < lo || *k > hi).collect();
    (singular, regular)
}

/// Uniform cell `I_j` of `[-1,1]` split into `n` cells.
pub fn grid_cell(j: usize, n: usize) -> Interval {
    let h = 2.0 / n as f64;
    let lo = if j == 0 { -1.0 } else { -1.0 + h * j as f64 };
    let hi = if j + 1 == n { 1.0 } else { -1.0 + h * (j + 1) as f64 };
    Interval::raw(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Cube;
    impl Integrand for Cube {
        fn eval<S: Scalar>(&self, x: S) -> S {
            x.powi(3)
        }
    }

    #[test]
    fn gl2_exact_on_cubic() {
        let seg = Interval::new(0.0, 1.0).unwrap();
        let v = gl2_parts(&Cube, seg);
        assert!(v.total.contains(0.25));
        assert!(v.remainder.mag() < 1e-15);
    }

    #[test]
    fn staircase_small() {
        assert_eq!(staircase_partition(0, 4), (vec![0, 1], vec![2, 3]));
        assert_eq!(staircase_partition(2, 4), (vec![1, 2, 3], vec![0]));
    }
}
