//! Enclosures against high-precision reference values in `tests/fixtures`.

use thetacert::kernels::{arcsinh_exact_integral, kernel_value, KernelKind};
use thetacert::operators::{eval_on, OpConfig, Quantity};
use thetacert::quadrature::grid_cell;
use thetacert::spectral::kernel_x_float;
use thetacert::{Interval, Params};

fn fixture(name: &str) -> Vec<Vec<String>> {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect()
}

fn exact(s: &str) -> Interval {
    Interval::from_decimal(s).unwrap()
}

/// Reference values carry 25 digits; allow for their last digit.
fn oracle(s: &str) -> Interval {
    let v = exact(s);
    let r = 1e-22 * v.mag().max(1.0);
    v + Interval::new(-r, r).unwrap()
}

fn overlaps(a: Interval, b: Interval) -> bool {
    a.lo() <= b.hi() && b.lo() <= a.hi()
}

#[test]
fn kernels_contain_oracle_at_200_radii_per_order() {
    let rows = fixture("kernels_sample.txt");
    assert_eq!(rows.len(), 600);
    for m in [1u32, 3, 6] {
        let kind = KernelKind::from_m(m).unwrap();
        let mine: Vec<_> = rows.iter().filter(|r| r[0] == m.to_string()).collect();
        assert_eq!(mine.len(), 200);
        for r in mine {
            let enc = kernel_value(kind, exact(&r[1])).unwrap();
            let want = oracle(&r[2]);
            assert!(overlaps(enc, want), "m={m} r={}: {enc} vs {want}", r[1]);
        }
    }
}

#[test]
fn kernels_contain_oracle_near_the_diagonal() {
    for r in fixture("kernels.txt") {
        let m: u32 = r[0].parse().unwrap();
        let enc = kernel_value(KernelKind::from_m(m).unwrap(), exact(&r[1])).unwrap();
        assert!(overlaps(enc, oracle(&r[2])), "m={m} r={}: {enc}", r[1]);
    }
}

#[test]
fn asinh_integral_contains_oracle_on_random_triples() {
    let a = Params::default().a;
    let rows = fixture("asinh_random.txt");
    assert_eq!(rows.len(), 50);
    for r in rows.iter().chain(fixture("asinh_integral.txt").iter()) {
        let unit = Interval::new(-1.0, 1.0).unwrap();
        let end = |t: &str| exact(t).intersect(&unit).unwrap();
        let v = arcsinh_exact_integral(end(&r[0]), end(&r[1]), exact(&r[2]), a).unwrap();
        assert!(overlaps(v, oracle(&r[3])), "{r:?}: {v}");
        assert!(v.width() < 1e-9 * v.mag().max(1.0), "{r:?}: {v} too wide");
    }
}

fn cfg() -> OpConfig {
    OpConfig {
        budget: 300,
        ..OpConfig::default()
    }
}

/// Encloses `q` at a single point by evaluating on the degenerate piece.
fn point_value(q: Quantity, x: f64) -> Interval {
    let n = 512;
    let j = (((x + 1.0) / 2.0 * n as f64) as usize).min(n - 1);
    assert!(grid_cell(j, n).contains(x));
    eval_on(q, Interval::point(x), j, n, &cfg()).unwrap().value
}

#[test]
fn itilde_point_values_contain_oracle() {
    for r in fixture("itilde.txt") {
        let x: f64 = r[0].parse().unwrap();
        let v = point_value(Quantity::Itilde, x);
        assert!(overlaps(v, oracle(&r[1])), "x={x}: {v} vs {}", r[1]);
        assert!(v.width() < 0.05, "x={x}: {v}");
    }
}

#[test]
fn t_times_bsj_point_values_contain_oracle() {
    for r in fixture("t_b.txt") {
        let m: u32 = r[0].parse().unwrap();
        let kind = KernelKind::from_m(m).unwrap();
        let q = if r[1] == "1" {
            Quantity::Sym(kind)
        } else {
            Quantity::Anti(kind)
        };
        let x: f64 = r[2].parse().unwrap();
        let v = point_value(q, x);
        assert!(overlaps(v, oracle(&r[3])), "{r:?}: {v}");
    }
}

#[test]
fn reflection_cubic_for_k_and_linear_for_x() {
    let two_pi = Interval::pi() * 2.0;
    for m in [1u32, 3, 6] {
        let kind = KernelKind::from_m(m).unwrap();
        for s in [0.85, 0.9, 0.95, 0.99, 0.999] {
            let s = Interval::point(s);
            let inv = s.recip();
            let x_s = kernel_value(kind, s).unwrap();
            let x_inv = kernel_value(kind, inv).unwrap();
            // X(1/s) = s X(s)
            assert!(overlaps(x_inv, s * x_s), "m={m} s={s}");
            // K(s) = X(s)/(2πs) satisfies K(1/s) = s^3 K(s)
            let k_s = x_s / (two_pi * s);
            let k_inv = x_inv / (two_pi * inv);
            assert!(overlaps(k_inv, s.powi(3) * k_s), "m={m} s={s}");
            // the cubic law fails for X itself away from s = 1
            let f = s.mid();
            let (a, b) = (kernel_x_float(m, 1.0 / f), f.powi(3) * kernel_x_float(m, f));
            assert!((a - f * kernel_x_float(m, f)).abs() < 1e-9 * a.abs());
            if f < 0.95 {
                assert!((a - b).abs() > 1e-2 * a.abs(), "m={m} s={f}");
            }
        }
    }
}
