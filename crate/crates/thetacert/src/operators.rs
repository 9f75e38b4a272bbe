//! Cell enclosures of `Ĩ`, of `T_S B`, `T_A B` for the order-3 and order-6
//! kernels, and of the residual vectors built from them.
//!
//! For an outer cell `X` every quantity is written as
//! `K(X) · ∫ W(X, ρ̃') · [P(u²) + asinh(1/|u|) ± E_ns(u²) ± S(u²) asinh(1/|u|)] dρ̃'`
//! with `u = (ρ̃' - ρ̃)/(ρ̃ + ρ̃' - 2 + 4/a)`, and the four pieces are integrated
//! separately. The smooth and nonsingular-error pieces are integrated over the
//! whole domain. The asinh pieces use the staircase split: on the three cells
//! next to `X` the cofactor is bounded and the asinh is integrated exactly.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::error::Error;
use crate::interval::Interval;
use crate::jet::Scalar;
use crate::kernels::{error_ns, error_s, smooth_part, Consts, KernelKind};
use crate::profile::{g_eval, g_on, split_by_region, to_rho, BsjProfile, Params, RegionTag};
use crate::quadrature::{
    adapt_integrate, grid_cell, Flag, Integrand, ParameterSet, Rule, MAX_ELEMENTS_EVALUATED,
};

/// Approximate eigenvalue used in the order-3 residual.
pub const LAMBDA_STAR: &str = "0.3482";
/// Approximate eigenvalue used in the order-6 residual.
pub const LAMBDA_6_APPROX: &str = "0.573";

/// Settings for the cell sweeps.
#[derive(Clone, Debug, PartialEq)]
pub struct OpConfig {
    pub params: Params,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Queue pops allowed per adaptive integral.
    pub budget: usize,
    /// Number of pieces the outer cell is cut into (results are hulled).
    pub rho_splits: usize,
    /// Number of pieces each singular inner cell is cut into.
    pub sing_splits: usize,
    /// Number of outer pieces used for the singular contribution only.
    pub sing_outer_splits: usize,
    /// Rule used on every adaptive segment.
    pub rule: Rule,
}

impl Default for OpConfig {
    fn default() -> Self {
        OpConfig {
            params: Params::default(),
            abs_tol: 1e-5,
            rel_tol: 1e-5,
            budget: MAX_ELEMENTS_EVALUATED,
            rho_splits: 1,
            sing_splits: 1,
            sing_outer_splits: 1,
            rule: Rule::Gl2,
        }
    }
}

impl OpConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("abs_tol and rel_tol must be positive".into()));
        }
        if self.budget == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        if self.rho_splits == 0 || self.sing_splits == 0 || self.sing_outer_splits == 0 {
            return Err(Error::Config("split counts must be positive".into()));
        }
        Ok(())
    }

    fn integration_params(&self) -> ParameterSet {
        let mut p = ParameterSet::new(&self.params, self.abs_tol, self.rel_tol);
        p.budget = self.budget;
        p
    }
}

/// A raw integral-operator quantity evaluated cell by cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    /// `Ĩ(ρ̃)`.
    Itilde,
    /// `(T_S B)(ρ̃)` with the given kernel.
    Sym(KernelKind),
    /// `(T_A B)(ρ̃)` with the given kernel.
    Anti(KernelKind),
}

impl Quantity {
    pub fn label(self) -> String {
        match self {
            Quantity::Itilde => "itilde".into(),
            Quantity::Sym(k) => format!("t_sym{}", k.m()),
            Quantity::Anti(k) => format!("t_anti{}", k.m()),
        }
    }

    fn kind(self) -> KernelKind {
        match self {
            Quantity::Itilde => KernelKind::I,
            Quantity::Sym(k) | Quantity::Anti(k) => k,
        }
    }
}

/// The named functions whose grid enclosures feed the certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorQuantity {
    ItildeMin,
    E3,
    ThetaA3,
    E6,
}

impl OperatorQuantity {
    /// `λ*` for `E3`, `λ_6` for `E6`, zero otherwise.
    pub fn lambda_ref(self) -> Interval {
        match self {
            OperatorQuantity::E3 => Interval::from_decimal(LAMBDA_STAR).expect("literal"),
            OperatorQuantity::E6 => Interval::from_decimal(LAMBDA_6_APPROX).expect("literal"),
            _ => Interval::ZERO,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OperatorQuantity::ItildeMin => "itilde",
            OperatorQuantity::E3 => "e3",
            OperatorQuantity::ThetaA3 => "theta_a3",
            OperatorQuantity::E6 => "e6",
        }
    }

    /// The raw quantity integrated besides `Ĩ`.
    pub fn operator_part(self) -> Quantity {
        match self {
            OperatorQuantity::ItildeMin => Quantity::Itilde,
            OperatorQuantity::E3 => Quantity::Sym(KernelKind::J),
            OperatorQuantity::ThetaA3 => Quantity::Anti(KernelKind::J),
            OperatorQuantity::E6 => Quantity::Sym(KernelKind::L),
        }
    }

    /// Whether the residual includes `(Ĩ - λ) B`.
    pub fn uses_itilde(self) -> bool {
        matches!(self, OperatorQuantity::E3 | OperatorQuantity::E6)
    }
}

/// Enclosure on one cell with bookkeeping.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellEnclosure {
    pub value: Interval,
    pub flag: Flag,
    /// Adaptive integrals that ran out of budget.
    pub warnings: usize,
    pub evaluations: usize,
}

impl CellEnclosure {
    fn hull(&self, other: &CellEnclosure) -> CellEnclosure {
        CellEnclosure {
            value: self.value.hull(&other.value),
            flag: if self.flag == Flag::Ok && other.flag == Flag::Ok {
                Flag::Ok
            } else {
                Flag::Failed
            },
            warnings: self.warnings + other.warnings,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

/// Per-cell enclosures over the uniform grid of `[-1,1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridEnclosures {
    pub n: usize,
    pub values: Vec<Interval>,
    pub flags: Vec<Flag>,
    pub label: String,
    pub warnings: usize,
}

impl GridEnclosures {
    pub fn new(label: impl Into<String>, values: Vec<Interval>) -> Self {
        let n = values.len();
        GridEnclosures {
            n,
            values,
            flags: vec![Flag::Ok; n],
            label: label.into(),
            warnings: 0,
        }
    }

    fn from_cells(label: impl Into<String>, cells: Vec<CellEnclosure>) -> Self {
        GridEnclosures {
            n: cells.len(),
            values: cells.iter().map(|c| c.value).collect(),
            flags: cells.iter().map(|c| c.flag).collect(),
            label: label.into(),
            warnings: cells.iter().map(|c| c.warnings).sum(),
        }
    }

    pub fn any_flagged(&self) -> bool {
        self.flags.iter().any(|f| *f != Flag::Ok)
    }

    /// Smallest lower endpoint and its cell.
    pub fn min_lower(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.lo()))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }

    /// One line per cell: `j lo hi flag`.
    pub fn to_report(&self) -> String {
        let mut s = format!("# {} N={} warnings={}\n", self.label, self.n, self.warnings);
        for (j, (v, f)) in self.values.iter().zip(&self.flags).enumerate() {
            let flag = if *f == Flag::Ok { "ok" } else { "failed" };
            let _ = writeln!(s, "{j} {:?} {:?} {flag}", v.lo(), v.hi());
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), Error> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(path, self.to_report()).map_err(|e| Error::io(path, e))
    }

    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut label = String::new();
        let mut warnings = 0;
        let mut values = Vec::new();
        let mut flags = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                for tok in h.split_whitespace() {
                    if let Some(w) = tok.strip_prefix("warnings=") {
                        warnings = w.parse().unwrap_or(0);
                    } else if !tok.starts_with("N=") && label.is_empty() {
                        label = tok.to_string();
                    }
                }
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            if tok.len() != 4 {
                return Err(Error::Parse(format!("line {}: expected `j lo hi flag`", ln + 1)));
            }
            let j: usize = tok[0]
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad index", ln + 1)))?;
            if j != values.len() {
                return Err(Error::Parse(format!("line {}: cell {j} out of order", ln + 1)));
            }
            let num = |t: &str| {
                t.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: bad number {t}", ln + 1)))
            };
            let (lo, hi) = (num(tok[1])?, num(tok[2])?);
            // infinite endpoints are legitimate for failed cells
            values.push(if lo <= hi { Interval::raw(lo, hi) } else { Interval::new(lo, hi)? });
            flags.push(match tok[3] {
                "ok" => Flag::Ok,
                "failed" => Flag::Failed,
                other => return Err(Error::Parse(format!("line {}: bad flag {other}", ln + 1))),
            });
        }
        if values.is_empty() {
            return Err(Error::Parse("no cells".into()));
        }
        Ok(GridEnclosures {
            n: values.len(),
            values,
            flags,
            label,
            warnings,
        })
    }

    pub fn read(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

/// Which bracket piece an integrand carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Smooth,
    ErrNs,
    Sing,
    ErrS,
}

/// Data fixed by the outer piece.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Outer {
    x: Interval,
    rho: Interval,
    gx: Interval,
    region_x: RegionTag,
    /// `ρ̃ - 2 + 4/a`, so that `ρ + ρ' = (a/2)(ρ̃' + shift)`.
    shift: Interval,
}

impl Outer {
    pub(crate) fn new(x: Interval, region_x: RegionTag, p: &Params) -> Self {
        Outer {
            x,
            rho: to_rho(x, p),
            gx: g_on(x, region_x, p),
            region_x,
            shift: x - 2.0 + p.four_over_a(),
        }
    }
}

struct CellIntegrand<'a> {
    q: Quantity,
    part: Part,
    outer: &'a Outer,
    region_y: RegionTag,
    p: &'a Params,
    c: &'a Consts,
}

impl CellIntegrand<'_> {
    /// Cofactor `W`; `mag` selects the majorant used with error radii.
    fn weight<S: Scalar>(&self, y: S, mag: bool) -> S {
        let o = self.outer;
        let p = self.p;
        let ys = y.add_cst(o.shift);
        match self.q {
            Quantity::Itilde => {
                // -g(ρ̃') · 4ρ'/(ρ+ρ'), with 4ρ'/(ρ+ρ') = 4(ρ̃' - 1 + 2/a)/(ρ̃' + shift)
                let c1 = Interval::point(2.0) / p.a - 1.0;
                let g = g_eval(y, self.region_y, p);
                -(g * y.add_cst(c1).scale(Interval::point(4.0)) / ys)
            }
            Quantity::Sym(_) | Quantity::Anti(_) => {
                let anti = matches!(self.q, Quantity::Anti(_));
                t_weight(y, self.region_y, o, p, anti, mag)
            }
        }
    }

    fn bracket<S: Scalar>(&self, y: S) -> S {
        let o = self.outer;
        let u = (y - S::cst(o.x)) / y.add_cst(o.shift);
        let w = u.sqr();
        let kind = self.q.kind();
        match self.part {
            Part::Smooth => smooth_part(kind, w, self.c),
            Part::ErrNs => error_ns(kind, w, self.c),
            Part::Sing => u.abs().recip().asinh(),
            Part::ErrS => error_s(kind, w) * u.abs().recip().asinh(),
        }
    }
}

impl Integrand for CellIntegrand<'_> {
    fn eval<S: Scalar>(&self, y: S) -> S {
        let mag = matches!(self.part, Part::ErrNs | Part::ErrS);
        self.weight(y, mag) * self.bracket(y)
    }
}

/// Cofactor of `T_S` (or `T_A` when `anti`) in the bracket form:
/// `4(g(ρ̃')ρ'^2/ρ^2 ± g(ρ̃)ρ^2/ρ'^2)/(ρ+ρ')`, or with both `g` replaced by
/// `-|g|` when `mag` is set.
pub(crate) fn t_weight<S: Scalar>(
    y: S,
    region_y: RegionTag,
    o: &Outer,
    p: &Params,
    anti: bool,
    mag: bool,
) -> S {
    let half_a = p.half_a();
    let sum = y.add_cst(o.shift).scale(half_a);
    let rp = to_rho(y, p);
    let r = S::cst(o.rho);
    let two = Interval::point(2.0);
    if o.region_x == RegionTag::Middle && region_y == RegionTag::Middle {
        // g = g' = -1/2 on both sides
        let diff = (y - S::cst(o.x)).scale(half_a);
        if anti && !mag {
            // -2 (ρ'-ρ)(ρ'^2+ρ^2)/(ρ^2 ρ'^2)
            let num = diff * (rp.sqr() + r.sqr());
            return -(num / (r * rp).sqr()).scale(two);
        }
        // ρ'^2/ρ^2 + ρ^2/ρ'^2 = 2 + ((ρ'-ρ)(ρ'+ρ)/(ρρ'))^2
        let d = diff * sum / (r * rp);
        let v = (d.sqr().add_cst(two) / sum).scale(two);
        return if mag { v } else { -v };
    }
    let a_term = (rp / r).sqr();
    let b_term = (r / rp).sqr();
    let gy = g_eval(y, region_y, p);
    let four = Interval::point(4.0);
    if mag {
        (b_term.scale(-o.gx) - a_term * gy).scale(four) / sum
    } else {
        let gb = b_term.scale(o.gx);
        let s = if anti { -gb } else { gb };
        (a_term * gy + s).scale(four) / sum
    }
}

/// Inner integration domain of a quantity.
fn inner_domain(q: Quantity, p: &Params) -> Interval {
    match q {
        Quantity::Itilde => Interval::raw(-1.0, 1.0),
        _ => RegionTag::Middle.extent(p),
    }
}

/// Outer prefactor `K(X)`.
fn outer_factor(q: Quantity, outer: &Outer, p: &Params) -> Interval {
    let two_pi = Interval::pi() * 2.0;
    match q {
        Quantity::Itilde => (two_pi * outer.rho).recip(),
        _ => BsjProfile::new(p).height / (two_pi * 2.0),
    }
}

struct Acc {
    rule: Rule,
    flag: Flag,
    warnings: usize,
    evaluations: usize,
}

impl Acc {
    fn integrate(
        &mut self,
        f: &CellIntegrand<'_>,
        seg: Interval,
        ctx: &ParameterSet,
    ) -> Interval {
        let r = adapt_integrate(f, seg, ctx, self.rule);
        if !r.ok() {
            self.flag = Flag::Failed;
        }
        if r.exhausted {
            self.warnings += 1;
        }
        self.evaluations += r.evaluations;
        r.result
    }
}

/// Enclosure of `q` over the outer piece `x` (inside `region_x`) for the
/// grid cell `j` of `n`.
fn piece_value(
    q: Quantity,
    x: Interval,
    region_x: RegionTag,
    j: usize,
    n: usize,
    cfg: &OpConfig,
) -> Result<CellEnclosure, Error> {
    let p = &cfg.params;
    let c = Consts::new();
    let ctx = cfg.integration_params();
    let outer = Outer::new(x, region_x, p);
    let dom = inner_domain(q, p);
    let mut acc = Acc {
        rule: cfg.rule,
        flag: Flag::Ok,
        warnings: 0,
        evaluations: 0,
    };
    let mk = |part, region_y, outer| CellIntegrand {
        q,
        part,
        outer,
        region_y,
        p,
        c: &c,
    };

    let mut smooth = Interval::ZERO;
    let mut err_ns = Interval::ZERO;
    for (ry, seg) in split_by_region(dom, p) {
        smooth += acc.integrate(&mk(Part::Smooth, ry, &outer), seg, &ctx);
        err_ns += acc.integrate(&mk(Part::ErrNs, ry, &outer), seg, &ctx);
    }

    // staircase split of the inner grid
    let lo_cell = grid_cell(j.saturating_sub(1), n);
    let hi_cell = grid_cell((j + 1).min(n - 1), n);
    let near = Interval::raw(lo_cell.lo(), hi_cell.hi());
    let mut regular = Vec::new();
    if dom.lo() < near.lo() {
        regular.push(Interval::raw(dom.lo(), near.lo().min(dom.hi())));
    }
    if near.hi() < dom.hi() {
        regular.push(Interval::raw(near.hi().max(dom.lo()), dom.hi()));
    }
    let mut sing = Interval::ZERO;
    let mut err_s = Interval::ZERO;
    for seg in regular {
        for (ry, piece) in split_by_region(seg, p) {
            if piece.lo() == piece.hi() {
                continue;
            }
            sing += acc.integrate(&mk(Part::Sing, ry, &outer), piece, &ctx);
            err_s += acc.integrate(&mk(Part::ErrS, ry, &outer), piece, &ctx);
        }
    }

    // singular cells: bounded cofactor times the exact asinh integral
    let mut near_pieces = Vec::new();
    if let Some(nd) = near.intersect(&dom) {
        for (ry, piece) in split_by_region(nd, p) {
            if piece.lo() == piece.hi() {
                continue;
            }
            for sub in piece.split(cfg.sing_splits) {
                near_pieces.push((ry, sub));
            }
        }
    }
    let mut sing_near: Option<(Interval, Interval)> = None;
    for xs in x.split(cfg.sing_outer_splits) {
        let o = Outer::new(xs, region_x, p);
        let mut s3 = Interval::ZERO;
        let mut s4 = Interval::ZERO;
        for &(ry, y) in &near_pieces {
            let exact = crate::kernels::arcsinh_exact_integral(
                Interval::point(y.lo()),
                Interval::point(y.hi()),
                xs,
                p.a,
            )?;
            let f_sig = CellIntegrand {
                q,
                part: Part::Sing,
                outer: &o,
                region_y: ry,
                p,
                c: &c,
            };
            let w_sig = f_sig.weight(y, false);
            let u = (y - xs) / (y + o.shift);
            let w_mag = f_sig.weight(y, true) * error_s(q.kind(), u.sqr());
            s3 += w_sig * exact;
            s4 += w_mag * exact;
        }
        sing_near = Some(match sing_near {
            None => (s3, s4),
            Some((a3, a4)) => (a3.hull(&s3), a4.hull(&s4)),
        });
    }
    let (s3, s4) = sing_near.unwrap_or((Interval::ZERO, Interval::ZERO));
    sing += s3;
    err_s += s4;

    let radius = (err_ns.max_with(&Interval::ZERO) + err_s.max_with(&Interval::ZERO)).hi();
    let value = outer_factor(q, &outer, p) * (smooth + sing + Interval::raw(-radius, radius));
    if !value.is_finite() {
        acc.flag = Flag::Failed;
    }
    Ok(CellEnclosure {
        value,
        flag: acc.flag,
        warnings: acc.warnings,
        evaluations: acc.evaluations,
    })
}

/// Enclosure of `q` over the whole grid cell `j` of `n`.
pub fn eval_cell(q: Quantity, j: usize, n: usize, cfg: &OpConfig) -> Result<CellEnclosure, Error> {
    eval_on(q, grid_cell(j, n), j, n, cfg)
}

/// Enclosure of `q` over `x ⊆ I_j`.
pub fn eval_on(
    q: Quantity,
    x: Interval,
    j: usize,
    n: usize,
    cfg: &OpConfig,
) -> Result<CellEnclosure, Error> {
    cfg.validate()?;
    if j >= n {
        return Err(Error::Config(format!("cell {j} out of range for N = {n}")));
    }
    if !x.subset_of(&grid_cell(j, n)) {
        return Err(Error::Region(format!("{x} is not inside cell {j} of {n}")));
    }
    let p = &cfg.params;
    let mut out: Option<CellEnclosure> = None;
    for (rx, piece) in split_by_region(x, p) {
        for sub in piece.split(cfg.rho_splits) {
            let v = piece_value(q, sub, rx, j, n, cfg)?;
            out = Some(match out {
                None => v,
                Some(o) => o.hull(&v),
            });
        }
    }
    out.ok_or_else(|| Error::Region(format!("{x} does not meet [-1,1]")))
}

/// `Ĩ` over the grid cell `j`.
pub fn eval_i_tilde(j: usize, n: usize, cfg: &OpConfig) -> Result<Interval, Error> {
    let c = eval_cell(Quantity::Itilde, j, n, cfg)?;
    if c.flag != Flag::Ok {
        return Err(Error::Integration(format!("Ĩ flagged on cell {j}")));
    }
    Ok(c.value)
}

/// Sweeps `q` over the chosen cells in parallel. Missing cells are left as
/// `ENTIRE` and flagged.
pub fn sweep_cells(
    q: Quantity,
    n: usize,
    cells: &[usize],
    cfg: &OpConfig,
) -> Result<GridEnclosures, Error> {
    let results: Vec<(usize, CellEnclosure)> = cells
        .par_iter()
        .map(|&j| eval_cell(q, j, n, cfg).map(|c| (j, c)))
        .collect::<Result<_, _>>()?;
    let mut all = vec![
        CellEnclosure {
            value: Interval::ENTIRE,
            flag: Flag::Failed,
            warnings: 0,
            evaluations: 0,
        };
        n
    ];
    for (j, c) in results {
        all[j] = c;
    }
    Ok(GridEnclosures::from_cells(q.label(), all))
}

/// Sweeps `q` over every cell.
pub fn sweep(q: Quantity, n: usize, cfg: &OpConfig) -> Result<GridEnclosures, Error> {
    let cells: Vec<usize> = (0..n).collect();
    sweep_cells(q, n, &cells, cfg)
}

/// Range of `B_sj` over the grid cell `j`.
pub fn bsj_on_cell(j: usize, n: usize, p: &Params) -> Interval {
    let b = BsjProfile::new(p);
    let cell = grid_cell(j, n);
    let mut out: Option<Interval> = None;
    for (r, _) in split_by_region(cell, p) {
        let v = b.on(r);
        out = Some(out.map_or(v, |o| o.hull(&v)));
    }
    out.unwrap_or(Interval::ZERO)
}

/// `(Ĩ - λ) B + T B` cell by cell; for `ThetaA3` just `T_A B`.
pub fn combine_error(
    which: OperatorQuantity,
    itilde: Option<&GridEnclosures>,
    t: &GridEnclosures,
    p: &Params,
) -> Result<GridEnclosures, Error> {
    let n = t.n;
    let lambda = which.lambda_ref();
    let mut values = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    let mut warnings = t.warnings;
    if let Some(it) = itilde {
        if it.n != n {
            return Err(Error::Misaligned(format!("Ĩ has {} cells, T has {n}", it.n)));
        }
        warnings += it.warnings;
    }
    for j in 0..n {
        let b = bsj_on_cell(j, n, p);
        let mut flag = t.flags[j];
        let mut v = t.values[j];
        if which.uses_itilde() && b != Interval::ZERO {
            let it = itilde.ok_or_else(|| Error::Config("Ĩ values required".into()))?;
            v = (it.values[j] - lambda) * b + v;
            if it.flags[j] != Flag::Ok {
                flag = Flag::Failed;
            }
        }
        values.push(v);
        flags.push(flag);
    }
    Ok(GridEnclosures {
        n,
        values,
        flags,
        label: which.label().into(),
        warnings,
    })
}

/// Full residual vector for `which` on `n` cells.
pub fn eval_error_vector(
    which: OperatorQuantity,
    n: usize,
    cfg: &OpConfig,
) -> Result<GridEnclosures, Error> {
    if which == OperatorQuantity::ItildeMin {
        return sweep(Quantity::Itilde, n, cfg);
    }
    let t = sweep(which.operator_part(), n, cfg)?;
    let it = if which.uses_itilde() {
        let p = &cfg.params;
        let cells: Vec<usize> = (0..n)
            .filter(|&j| bsj_on_cell(j, n, p) != Interval::ZERO)
            .collect();
        Some(sweep_cells(Quantity::Itilde, n, &cells, cfg)?)
    } else {
        None
    };
    combine_error(which, it.as_ref(), &t, &cfg.params)
}

fn reject_flagged(g: &GridEnclosures) -> Result<(), Error> {
    if g.any_flagged() {
        let bad = g.flags.iter().filter(|f| **f != Flag::Ok).count();
        return Err(Error::Integration(format!("{}: {bad} flagged cells", g.label)));
    }
    Ok(())
}

/// `((a/N) Σ E_j^2)^{1/2}`.
pub fn grid_l2_norm(g: &GridEnclosures, p: &Params) -> Result<Interval, Error> {
    reject_flagged(g)?;
    let s: Interval = g.values.iter().map(|v| v.sqr()).sum();
    Ok((p.a / g.n as f64 * s).sqrt())
}

/// `(a/N) Σ E_j B_sj(I_j)`; requires the joints to fall on cell edges.
pub fn grid_inner_bsj(g: &GridEnclosures, p: &Params) -> Result<Interval, Error> {
    reject_flagged(g)?;
    // β·N/2 is exact in binary arithmetic when β is a power of two
    let cells_per_ramp = p.beta.lo() * (g.n as f64 / 2.0);
    if p.beta.lo() != p.beta.hi() || cells_per_ramp.fract() != 0.0 || cells_per_ramp < 1.0 {
        return Err(Error::Misaligned(format!(
            "N = {} does not place the joints on cell edges",
            g.n
        )));
    }
    let s: Interval = g
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| *v * bsj_on_cell(j, g.n, p))
        .sum();
    Ok(p.a / g.n as f64 * s)
}

/// Cauchy–Schwarz fallback `|⟨e,B⟩| ≤ ‖e‖ ‖B‖` for grids not aligned with
/// the joints.
pub fn inner_bsj_or_bound(g: &GridEnclosures, p: &Params) -> Result<Interval, Error> {
    match grid_inner_bsj(g, p) {
        Ok(v) => Ok(v),
        Err(Error::Misaligned(_)) => {
            let norm = grid_l2_norm(g, p)?;
            let b = BsjProfile::new(p).l2_norm_sq(p).sqrt();
            let r = (norm * b).hi();
            Ok(Interval::raw(-r, r))
        }
        Err(e) => Err(e),
    }
}
