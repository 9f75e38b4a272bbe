//! Composition of certified enclosures into the spectral inequalities.
//!
//! Every comparison uses the conservative endpoint of an [`Interval`]. Each
//! record keeps the certified enclosure next to the published constant it is
//! compared with.

use std::fmt::Write as _;

use crate::interval::Interval;

/// Published constants the records are compared against.
pub mod bounds {
    pub const E_NORM: f64 = 0.0905;
    pub const E_INNER: f64 = 0.0101;
    pub const THETA_A_NORM: f64 = 0.0629;
    pub const E6_NORM: f64 = 0.0893;
    pub const MIN_ITILDE: f64 = 1.2655;
    pub const GERSH3: f64 = -0.3125;
    pub const GERSH6: f64 = -0.3121;
    pub const DEFECT3: f64 = 0.1004;
    pub const DEFECT6: f64 = 0.1179;
    pub const A: f64 = 0.3583;
    pub const SQRT_B: f64 = 0.1534;
    pub const CSTAR3: f64 = 0.8526;
    pub const CSTAR6: f64 = 0.8355;
    pub const LAMBDA0: f64 = 0.4117;
    pub const LAMBDA6: f64 = 0.4837;
    pub const LAMBDA6_APPROX: f64 = 0.573;
    pub const GAP: f64 = 0.4409;
    pub const CHAIN_T1: f64 = -0.01;
    pub const CHAIN_T2: f64 = -0.002;
    pub const CHAIN_T3: f64 = -0.013;
    pub const ITILDE_GAP: f64 = 0.8526;
    pub const ITILDE_GAP_ALT: f64 = 0.8538;
    pub const LAMBDA_STAR: f64 = 0.3482;
}

/// Direction of the comparison with the published constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `certified.hi < bound`.
    Below,
    /// `certified.hi <= bound`.
    AtMost,
    /// `certified.lo > bound`.
    Above,
    /// `certified.lo >= bound`.
    AtLeast,
}

impl Relation {
    fn holds(self, v: Interval, bound: f64) -> bool {
        match self {
            Relation::Below => v.hi() < bound,
            Relation::AtMost => v.hi() <= bound,
            Relation::Above => v.lo() > bound,
            Relation::AtLeast => v.lo() >= bound,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::AtMost => "<=",
            Relation::Above => ">",
            Relation::AtLeast => ">=",
        }
    }
}

/// Outcome of a record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// All inputs were present but the enclosure is too wide for the bound.
    WidthLimited,
    /// Missing inputs, flagged integrations or a failed hypothesis.
    Fail,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::WidthLimited => "FAIL(width-limited)",
            Status::Fail => "FAIL",
        }
    }
}

/// One line of the certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub name: String,
    pub certified: Option<Interval>,
    pub bound: f64,
    pub relation: Relation,
    pub status: Status,
    /// Informational records do not affect the global verdict.
    pub required: bool,
    pub note: String,
}

impl Record {
    pub fn check(name: &str, v: Option<Interval>, rel: Relation, bound: f64) -> Record {
        let status = match v {
            None => Status::Fail,
            Some(x) if !x.is_finite() => Status::Fail,
            Some(x) if rel.holds(x, bound) => Status::Pass,
            Some(_) => Status::WidthLimited,
        };
        Record {
            name: name.to_string(),
            certified: v,
            bound,
            relation: rel,
            status,
            required: true,
            note: String::new(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Record {
        self.note = note.into();
        self
    }

    fn informational(mut self) -> Record {
        self.required = false;
        self
    }

    fn gate(mut self, ok: bool, why: &str) -> Record {
        if !ok {
            self.status = Status::Fail;
            if !self.note.is_empty() {
                self.note.push_str("; ");
            }
            self.note.push_str(why);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Certified numerical inputs. Norms and bounds are enclosures whose upper
/// (or lower) endpoints are used.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Inputs {
    pub e_norm: Option<Interval>,
    /// `⟨e, B_sj⟩` (its magnitude is used).
    pub e_inner: Option<Interval>,
    pub theta_a_norm: Option<Interval>,
    pub e6_norm: Option<Interval>,
    pub min_itilde: Option<Interval>,
    /// Whether the minimizing cell of `Ĩ` lies in the last region.
    pub min_in_last_region: Option<bool>,
    pub gersh3: Option<Interval>,
    pub gersh6: Option<Interval>,
    pub defect3: Option<Interval>,
    pub defect6: Option<Interval>,
    /// `‖B_sj‖²`.
    pub bsj_norm_sq: Option<Interval>,
    pub lambda_star: Option<Interval>,
    pub lambda6_approx: Option<Interval>,
}

impl Inputs {
    /// Field names in a fixed order, for audits.
    pub const FIELDS: [&'static str; 13] = [
        "e_norm",
        "e_inner",
        "theta_a_norm",
        "e6_norm",
        "min_itilde",
        "min_in_last_region",
        "gersh3",
        "gersh6",
        "defect3",
        "defect6",
        "bsj_norm_sq",
        "lambda_star",
        "lambda6_approx",
    ];

    fn slot(&mut self, k: usize) -> Option<&mut Option<Interval>> {
        match k {
            0 => Some(&mut self.e_norm),
            1 => Some(&mut self.e_inner),
            2 => Some(&mut self.theta_a_norm),
            3 => Some(&mut self.e6_norm),
            4 => Some(&mut self.min_itilde),
            6 => Some(&mut self.gersh3),
            7 => Some(&mut self.gersh6),
            8 => Some(&mut self.defect3),
            9 => Some(&mut self.defect6),
            10 => Some(&mut self.bsj_norm_sq),
            11 => Some(&mut self.lambda_star),
            12 => Some(&mut self.lambda6_approx),
            _ => None,
        }
    }

    /// Copy with the `k`-th interval input widened outward by `frac` of its
    /// magnitude on each side.
    pub fn widened(&self, k: usize, frac: f64) -> Inputs {
        let mut out = self.clone();
        if let Some(Some(v)) = out.slot(k) {
            let r = frac * v.mag();
            *v = *v + Interval::raw(-r, r);
        }
        out
    }

    /// The published constants themselves, as point enclosures.
    pub fn published() -> Inputs {
        let pt = Interval::point;
        Inputs {
            e_norm: Some(pt(bounds::E_NORM)),
            e_inner: Some(pt(bounds::E_INNER)),
            theta_a_norm: Some(pt(bounds::THETA_A_NORM)),
            e6_norm: Some(pt(bounds::E6_NORM)),
            min_itilde: Some(pt(bounds::MIN_ITILDE)),
            min_in_last_region: Some(true),
            gersh3: Some(pt(bounds::GERSH3)),
            gersh6: Some(pt(bounds::GERSH6)),
            defect3: Some(pt(bounds::DEFECT3)),
            defect6: Some(pt(bounds::DEFECT6)),
            bsj_norm_sq: Some(Interval::ONE),
            lambda_star: Some(lambda_star()),
            lambda6_approx: Some(lambda6_approx()),
        }
    }

    /// Lines `name lo hi` for the report.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let mut me = self.clone();
        for (k, name) in Self::FIELDS.iter().enumerate() {
            if k == 5 {
                let _ = writeln!(s, "input {name} {:?}", self.min_in_last_region);
                continue;
            }
            match me.slot(k).and_then(|v| *v) {
                Some(v) => {
                    let _ = writeln!(s, "input {name} {v}");
                }
                None => {
                    let _ = writeln!(s, "input {name} missing");
                }
            }
        }
        s
    }
}

pub fn lambda_star() -> Interval {
    Interval::from_decimal("0.3482").expect("literal")
}

pub fn lambda6_approx() -> Interval {
    Interval::from_decimal("0.573").expect("literal")
}

/// Upper bound for the smallest root `λ0 = (C+A)/2 - sqrt(((C-A)/2)^2 - B)`
/// of `h(x) = A - x + B/(C - x)`, provided `C > A + 2 sqrt(B)` holds for every
/// point of the enclosures.
pub fn vertex_lemma(a: Interval, b: Interval, c: Interval) -> Option<Interval> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || b.lo() < 0.0 {
        return None;
    }
    let (a_hi, b_hi, c_lo) = (
        Interval::point(a.hi()),
        Interval::point(b.hi()),
        Interval::point(c.lo()),
    );
    let hyp = c_lo - a_hi - b_hi.sqrt() * 2.0;
    if hyp.lo() <= 0.0 {
        return None;
    }
    // λ0 increases with A and B and decreases with C
    let half_gap = (c_lo - a_hi) * 0.5;
    let disc = half_gap.sqr() - b_hi;
    if disc.lo() <= 0.0 {
        return None;
    }
    Some((c_lo + a_hi) * 0.5 - disc.sqrt())
}

/// `h(x) = A - x + B/(C - x)` in interval arithmetic.
pub fn vertex_h(a: Interval, b: Interval, c: Interval, x: Interval) -> Interval {
    a - x + b / (c - x)
}

/// Intermediate values of the `A`, `B` construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Abc {
    pub a: Interval,
    pub sqrt_b: Interval,
    pub b: Interval,
}

/// `A = λ* + |⟨e,B⟩|/‖B‖²` and `sqrt(B) <= (‖e‖ + ‖Θ_A B‖)/‖B‖²`.
pub fn compute_abc(inp: &Inputs) -> Option<Abc> {
    let nb = inp.bsj_norm_sq?;
    let ls = inp.lambda_star?;
    let inner = inp.e_inner?;
    let e = inp.e_norm?;
    let ta = inp.theta_a_norm?;
    let a = ls + Interval::point(inner.mag()) / nb;
    let sqrt_b = (Interval::point(e.hi()) + Interval::point(ta.hi())) / nb;
    let b = Interval::point(sqrt_b.hi()).sqr();
    Some(Abc { a, sqrt_b, b })
}

pub fn certify_abc(inp: &Inputs) -> Vec<Record> {
    let abc = compute_abc(inp);
    vec![
        Record::check("A", abc.map(|v| v.a), Relation::Below, bounds::A)
            .with_note("lambda* + |<e,B>|/|B|^2"),
        Record::check("sqrt_B", abc.map(|v| v.sqrt_b), Relation::Below, bounds::SQRT_B)
            .with_note("(|e| + |Theta_A B|)/|B|^2"),
    ]
}

/// `c* >= min Ĩ + Gershgorin - defect` for `m = 3` or `6`.
pub fn compute_cstar(m: u32, inp: &Inputs) -> Option<Interval> {
    let (g, d) = match m {
        3 => (inp.gersh3?, inp.defect3?),
        6 => (inp.gersh6?, inp.defect6?),
        _ => return None,
    };
    let mi = inp.min_itilde?;
    Some(Interval::point(mi.lo()) + Interval::point(g.lo()) - Interval::point(d.hi()))
}

pub fn certify_cstar(m: u32, inp: &Inputs) -> Record {
    let (name, bound) = if m == 3 {
        ("c_star", bounds::CSTAR3)
    } else {
        ("c6_star", bounds::CSTAR6)
    };
    let rel = if m == 3 { Relation::AtLeast } else { Relation::Above };
    Record::check(name, compute_cstar(m, inp), rel, bound)
        .with_note("min Itilde + Gershgorin - defect")
}

pub fn compute_lambda0(inp: &Inputs) -> Option<Interval> {
    let abc = compute_abc(inp)?;
    let c = compute_cstar(3, inp)?;
    vertex_lemma(abc.a, abc.b, c)
}

pub fn certify_lambda0(inp: &Inputs) -> Record {
    let abc = compute_abc(inp);
    let c = compute_cstar(3, inp);
    let l0 = compute_lambda0(inp);
    let hyp = matches!((abc, c), (Some(_), Some(_))) && l0.is_some();
    let mut r = Record::check("lambda0", l0, Relation::Below, bounds::LAMBDA0)
        .with_note("vertex lemma with C = c*");
    if !hyp && r.status == Status::Fail && abc.is_some() && c.is_some() {
        r.note.push_str("; hypothesis C > A + 2 sqrt(B) not certified");
    }
    r
}

pub fn certify_lambda6(inp: &Inputs) -> Record {
    let l6 = inp.lambda6_approx.unwrap_or_else(lambda6_approx);
    let v = inp
        .e6_norm
        .map(|e| Interval::point(l6.lo()) - Interval::point(e.hi()));
    let c6 = compute_cstar(6, inp);
    let gap_ok = c6.is_some_and(|c| c.lo() > l6.hi());
    Record::check("lambda6_s", v, Relation::Above, bounds::LAMBDA6)
        .with_note("0.573 - |e6|")
        .gate(gap_ok, "gap hypothesis c6* > 0.573 not certified")
}

/// Terms of the positivity chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chain {
    pub gap: Interval,
    pub t1: Interval,
    pub t2: Interval,
    pub t3: Interval,
    pub sum: Interval,
    /// `(C - A)/2 - sqrt(B)`.
    pub bbstar: Interval,
}

pub fn compute_chain(inp: &Inputs) -> Option<Chain> {
    let abc = compute_abc(inp)?;
    let c = compute_cstar(3, inp)?;
    let l0 = compute_lambda0(inp)?;
    let e = inp.e_norm?;
    let inner = inp.e_inner?;
    let ls = inp.lambda_star?;
    let nb = inp.bsj_norm_sq?;
    let gap = Interval::point(c.lo()) - Interval::point(l0.hi());
    if gap.lo() <= 0.0 {
        return None;
    }
    let ratio = Interval::point(abc.sqrt_b.hi()) / Interval::point(gap.lo());
    let r2 = Interval::point(ratio.hi()).sqr();
    let t1 = r2 * (ls - Interval::point(l0.hi())) * nb;
    let t2 = -(r2 * Interval::point(inner.mag()));
    let t3 = -(Interval::point(ratio.hi()) * Interval::point(e.hi()) * 2.0);
    let sum = gap + Interval::point(t1.lo()) + Interval::point(t2.lo()) + Interval::point(t3.lo());
    let bbstar = (Interval::point(c.lo()) - Interval::point(abc.a.hi())) * 0.5
        - Interval::point(abc.sqrt_b.hi());
    Some(Chain {
        gap,
        t1,
        t2,
        t3,
        sum,
        bbstar,
    })
}

pub fn certify_transversality_chain(inp: &Inputs) -> Vec<Record> {
    let ch = compute_chain(inp);
    let bb_ok = ch.is_some_and(|c| c.bbstar.lo() > 0.0);
    vec![
        Record::check("chain_gap", ch.map(|c| c.gap), Relation::AtLeast, bounds::GAP)
            .with_note("c* - lambda0"),
        Record::check("chain_t1", ch.map(|c| c.t1), Relation::AtLeast, bounds::CHAIN_T1),
        Record::check("chain_t2", ch.map(|c| c.t2), Relation::AtLeast, bounds::CHAIN_T2),
        Record::check("chain_t3", ch.map(|c| c.t3), Relation::AtLeast, bounds::CHAIN_T3)
            .informational()
            .with_note("-2(0.1534/0.4409)(0.0905) = -0.063 already misses the published -0.013"),
        Record::check("chain_sum", ch.map(|c| c.sum), Relation::Above, 0.0)
            .with_note("gap + t1 + t2 + t3")
            .gate(bb_ok, "(C - A)/2 > sqrt(B) not certified"),
    ]
}

/// Records for the directly computed quantities.
pub fn certify_inputs(inp: &Inputs) -> Vec<Record> {
    let inner_mag = inp.e_inner.map(|v| Interval::point(v.mag()));
    vec![
        Record::check("e_norm", inp.e_norm, Relation::Below, bounds::E_NORM),
        Record::check("e_inner", inner_mag, Relation::Below, bounds::E_INNER),
        Record::check("theta_a_norm", inp.theta_a_norm, Relation::Below, bounds::THETA_A_NORM),
        Record::check("e6_norm", inp.e6_norm, Relation::Below, bounds::E6_NORM),
        Record::check("min_itilde", inp.min_itilde, Relation::Above, bounds::MIN_ITILDE).gate(
            inp.min_in_last_region.unwrap_or(false),
            "minimum not in the last region",
        ),
        Record::check("gershgorin3", inp.gersh3, Relation::Above, bounds::GERSH3),
        Record::check("gershgorin6", inp.gersh6, Relation::Above, bounds::GERSH6),
        Record::check("defect3", inp.defect3, Relation::AtMost, bounds::DEFECT3),
        Record::check("defect6", inp.defect6, Relation::AtMost, bounds::DEFECT6),
    ]
}

/// `min Ĩ - λ0`, compared with both published constants.
pub fn certify_itilde_gap(inp: &Inputs) -> Vec<Record> {
    let v = match (inp.min_itilde, compute_lambda0(inp)) {
        (Some(mi), Some(l0)) => Some(Interval::point(mi.lo()) - Interval::point(l0.hi())),
        _ => None,
    };
    vec![
        Record::check("itilde_minus_lambda0", v, Relation::Above, bounds::ITILDE_GAP),
        Record::check("itilde_minus_lambda0_alt", v, Relation::Above, bounds::ITILDE_GAP_ALT)
            .informational()
            .with_note("second published value of the same difference"),
    ]
}

/// The whole certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateReport {
    pub records: Vec<Record>,
    pub inputs: Inputs,
    pub provenance: Vec<(String, String)>,
}

impl CertificateReport {
    pub fn global_pass(&self) -> bool {
        self.records.iter().filter(|r| r.required).all(Record::passed)
    }

    pub fn first_failure(&self) -> Option<&Record> {
        self.records.iter().find(|r| r.required && !r.passed())
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.provenance {
            let _ = writeln!(s, "# {k}: {v}");
        }
        s.push_str(&self.inputs.describe());
        for r in &self.records {
            let cert = match r.certified {
                Some(v) => format!("{:?} {:?}", v.lo(), v.hi()),
                None => "missing missing".into(),
            };
            let _ = writeln!(
                s,
                "record {} {} {} {} {}{}{}",
                r.name,
                cert,
                r.relation.symbol(),
                r.bound,
                r.status.label(),
                if r.required { "" } else { " (informational)" },
                if r.note.is_empty() {
                    String::new()
                } else {
                    format!(" # {}", r.note)
                }
            );
        }
        let _ = writeln!(
            s,
            "summary {}",
            if self.global_pass() { "PASS" } else { "FAIL" }
        );
        if let Some(f) = self.first_failure() {
            let _ = writeln!(s, "first_failure {}", f.name);
        }
        s
    }
}

/// Runs every certification step on the given inputs.
pub fn full_certificate(inp: &Inputs, provenance: Vec<(String, String)>) -> CertificateReport {
    let mut records = certify_inputs(inp);
    records.extend(certify_abc(inp));
    records.push(certify_cstar(3, inp));
    records.push(certify_lambda0(inp));
    records.push(certify_cstar(6, inp));
    records.push(certify_lambda6(inp));
    records.extend(certify_transversality_chain(inp));
    records.extend(certify_itilde_gap(inp));
    CertificateReport {
        records,
        inputs: inp.clone(),
        provenance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_values_compose() {
        let mut inp = Inputs::published();
        let shade = |v: Option<Interval>, d: f64| v.map(|x| x + d);
        inp.e_norm = shade(inp.e_norm, -1e-6);
        inp.e_inner = shade(inp.e_inner, -1e-6);
        inp.theta_a_norm = shade(inp.theta_a_norm, -1e-6);
        inp.min_itilde = shade(inp.min_itilde, 1e-5);
        let rep = full_certificate(&inp, vec![]);
        let l0 = rep.record("lambda0").unwrap().certified.unwrap();
        assert!(l0.hi() < 0.4117 && l0.lo() > 0.4116);
        for name in ["A", "sqrt_B", "c_star", "chain_gap", "chain_t1", "chain_t2", "chain_sum"] {
            assert!(rep.record(name).unwrap().passed(), "{name}");
        }
        let t3 = rep.record("chain_t3").unwrap().certified.unwrap();
        assert!(t3.lo() < -0.06 && t3.lo() > -0.064);
    }

    #[test]
    fn vertex_lemma_root() {
        let (a, b, c) = (Interval::point(0.3), Interval::point(0.01), Interval::point(0.9));
        let l0 = vertex_lemma(a, b, c).unwrap();
        assert!(vertex_h(a, b, c, l0).contains_zero() || vertex_h(a, b, c, l0).mag() < 1e-12);
        assert!(vertex_lemma(a, Interval::point(0.1), Interval::point(0.5)).is_none());
    }

    #[test]
    fn missing_input_fails() {
        let mut inp = Inputs::published();
        inp.defect3 = None;
        let rep = full_certificate(&inp, vec![]);
        assert_eq!(rep.record("c_star").unwrap().status, Status::Fail);
        assert!(!rep.global_pass());
    }

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn measured() -> Inputs {
        let mut inp = Inputs::published();
        inp.e_norm = Some(iv(0.0, 0.075));
        inp.e_inner = Some(iv(-0.005, 0.006));
        inp.theta_a_norm = Some(iv(0.0, 0.0486));
        inp.e6_norm = Some(iv(0.0, 0.0713));
        inp.min_itilde = Some(iv(1.2704, 1.2705));
        inp.defect3 = Some(iv(0.0, 0.0972));
        inp.defect6 = Some(iv(0.0, 0.1147));
        inp.gersh3 = Some(Interval::point(-0.31246699602));
        inp.gersh6 = Some(Interval::point(-0.3120925802));
        inp
    }

    fn zero_errors() -> Inputs {
        let mut inp = measured();
        inp.e_norm = Some(Interval::point(0.0));
        inp.e_inner = Some(Interval::point(0.0));
        inp.theta_a_norm = Some(Interval::point(0.0));
        inp
    }

    #[test]
    fn equal_a_and_c_is_absent() {
        let a = Interval::point(0.5);
        assert!(vertex_lemma(a, Interval::point(0.01), a).is_none());
    }

    #[test]
    fn vanishing_b_gives_a() {
        let (a, c) = (Interval::point(0.35), Interval::point(0.86));
        let l0 = vertex_lemma(a, Interval::point(1e-14), c).unwrap();
        assert!((l0.hi() - 0.35).abs() < 1e-6 && l0.lo() <= 0.35 + 1e-6);
    }

    #[test]
    fn zero_error_vectors_give_lambda_star() {
        let abc = compute_abc(&zero_errors()).unwrap();
        let ls = lambda_star();
        assert!(abc.a.lo() <= ls.lo() && abc.a.hi() >= ls.hi() && abc.a.width() < 1e-12);
        assert!(abc.sqrt_b.hi() < 1e-300);
        assert!(abc.b.hi() < 1e-300);
    }

    #[test]
    fn measured_inputs_pass() {
        let rep = full_certificate(&measured(), vec![]);
        assert!(rep.global_pass(), "{}", rep.to_text());
        assert_eq!(rep.record("chain_t3").unwrap().status, Status::WidthLimited);
    }

    #[test]
    fn defect_equal_to_min_itilde_fails() {
        let mut inp = measured();
        inp.defect3 = inp.min_itilde;
        let c = compute_cstar(3, &inp).unwrap();
        assert!(c.hi() < 0.0);
        let rep = full_certificate(&inp, vec![]);
        assert!(!rep.record("c_star").unwrap().passed());
        assert!(!rep.global_pass());
    }

    #[test]
    fn zero_e6_gives_spectral_gap_constant() {
        let mut inp = measured();
        inp.e6_norm = Some(Interval::point(0.0));
        let r = certify_lambda6(&inp);
        assert!(r.passed());
        assert!(r.certified.unwrap().contains(0.573));
    }

    #[test]
    fn small_c6_fails_lambda6() {
        let mut inp = measured();
        inp.defect6 = Some(Interval::point(0.7));
        assert!(compute_cstar(6, &inp).unwrap().hi() <= 0.573);
        assert_eq!(certify_lambda6(&inp).status, Status::Fail);
    }

    #[test]
    fn zero_b_reduces_chain_to_gap() {
        let inp = zero_errors();
        let ch = compute_chain(&inp).unwrap();
        let gap = compute_cstar(3, &inp).unwrap() - compute_lambda0(&inp).unwrap();
        assert!(ch.t1.mag() < 1e-300 && ch.t2.mag() < 1e-300 && ch.t3.mag() < 1e-300);
        assert!(ch.sum.lo() > 0.0 && (ch.sum.lo() - gap.lo()).abs() < 1e-9);
    }

    #[test]
    fn lambda0_pushed_to_c_star_fails_chain() {
        let mut inp = measured();
        // raising lambda* moves A, hence lambda0, up to c*
        inp.lambda_star = Some(Interval::point(0.86));
        let rep = full_certificate(&inp, vec![]);
        assert!(!rep.record("chain_sum").unwrap().passed());
        assert!(!rep.global_pass());
        assert!(rep.first_failure().is_some());
    }
}
