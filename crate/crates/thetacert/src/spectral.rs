//! Finite-rank projection of the symmetric operator: the Legendre block basis,
//! the shipped coefficient matrices, the Gershgorin bound and the `L¹` bound
//! on the defect `‖T_S - T_fin‖`.

use std::path::Path;

use rayon::prelude::*;

use crate::error::Error;
use crate::interval::Interval;
use crate::kernels::{arcsinh_exact_integral, error_ns, error_s, smooth_part, Consts, KernelKind};
use crate::operators::{t_weight, Outer};
use crate::profile::{split_by_region, Params, RegionTag};

/// Basis size.
pub const DIM: usize = 24;

/// Index of the basis function equal to `B_sj`.
pub const BSJ_INDEX: usize = 1;

const T3_DATA: &str = include_str!("../data/t3_fin.txt");
const T6_DATA: &str = include_str!("../data/t6_fin.txt");

/// FNV-1a checksums of the whitespace-normalized shipped matrix files.
pub const T3_CHECKSUM: u64 = 0x5ec2_12ae_bc72_670b;
pub const T6_CHECKSUM: u64 = 0x806f_b89e_a548_7217;

/// `Leg(n, x)` by the three-term recurrence.
pub fn legendre(n: usize, x: Interval) -> Interval {
    let mut p0 = Interval::ONE;
    if n == 0 {
        return p0;
    }
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = (x * p1 * (2.0 * kf + 1.0) - p0 * kf) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Block of basis function `i`: left ramp, middle or right ramp.
pub fn basis_block(i: usize) -> RegionTag {
    match i % 3 {
        0 => RegionTag::LeftRamp,
        1 => RegionTag::Middle,
        _ => RegionTag::RightRamp,
    }
}

/// Legendre degree of basis function `i`.
pub fn basis_degree(i: usize) -> usize {
    i / 3
}

fn basis_norm(i: usize, p: &Params) -> Interval {
    let d = Interval::point((2 * basis_degree(i) + 1) as f64);
    match basis_block(i) {
        RegionTag::Middle => (d / (p.a - p.a * p.beta)).sqrt(),
        _ => (d * 2.0 / (p.a * p.beta)).sqrt(),
    }
}

/// Local Legendre variable of block `r` at `rho_t`, clamped to `[-1,1]`.
fn local_coord(r: RegionTag, rho_t: Interval, p: &Params) -> Interval {
    let two_over_beta = Interval::point(2.0) / p.beta;
    let s = match r {
        RegionTag::LeftRamp => (rho_t + 1.0) * two_over_beta - 1.0,
        RegionTag::Middle => rho_t / (Interval::ONE - p.beta),
        RegionTag::RightRamp => (rho_t - 1.0) * two_over_beta + 1.0,
    };
    s.intersect(&Interval::raw(-1.0, 1.0)).unwrap_or(s)
}

/// `u_i(ρ̃)`; zero away from the block's support.
pub fn basis_eval(i: usize, rho_t: Interval, p: &Params) -> Interval {
    assert!(i < DIM, "basis index {i} out of range");
    let block = basis_block(i);
    let mut out: Option<Interval> = None;
    for (r, piece) in split_by_region(rho_t, p) {
        let v = if r == block {
            basis_norm(i, p) * legendre(basis_degree(i), local_coord(r, piece, p))
        } else {
            Interval::ZERO
        };
        out = Some(out.map_or(v, |o| o.hull(&v)));
    }
    out.unwrap_or(Interval::ZERO)
}

/// A symmetric 24×24 coefficient matrix with one-ulp entry enclosures.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionMatrix {
    pub m: u32,
    pub entries: Vec<Vec<Interval>>,
    pub checksum: u64,
}

/// FNV-1a over the whitespace-separated tokens joined by single spaces.
pub fn token_checksum(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut first = true;
    for tok in text.split_whitespace() {
        if !first {
            h ^= b' ' as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        first = false;
        for b in tok.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

impl ProjectionMatrix {
    /// Parses 24 rows of 24 decimals; checks shape and symmetry.
    pub fn parse(m: u32, text: &str) -> Result<Self, Error> {
        let mut entries = Vec::with_capacity(DIM);
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Vec<Interval> = line
                .split_whitespace()
                .map(Interval::from_decimal)
                .collect::<Result<_, _>>()
                .map_err(|e| Error::Matrix(format!("line {}: {e}", ln + 1)))?;
            if row.len() != DIM {
                return Err(Error::Matrix(format!(
                    "line {}: expected {DIM} entries, found {}",
                    ln + 1,
                    row.len()
                )));
            }
            entries.push(row);
        }
        if entries.len() != DIM {
            return Err(Error::Matrix(format!("expected {DIM} rows, found {}", entries.len())));
        }
        for i in 0..DIM {
            for j in 0..i {
                let d = (entries[i][j].mid() - entries[j][i].mid()).abs();
                if d > 1e-10 {
                    return Err(Error::Matrix(format!("not symmetric at ({i},{j}): {d:e}")));
                }
            }
        }
        Ok(ProjectionMatrix {
            m,
            entries,
            checksum: token_checksum(text),
        })
    }

    /// The matrix shipped with the crate.
    pub fn shipped(m: u32) -> Result<Self, Error> {
        let (text, sum) = match m {
            3 => (T3_DATA, T3_CHECKSUM),
            6 => (T6_DATA, T6_CHECKSUM),
            _ => return Err(Error::Matrix(format!("no matrix for m = {m}"))),
        };
        let mat = Self::parse(m, text)?;
        if mat.checksum != sum {
            return Err(Error::Matrix(format!("checksum mismatch for m = {m}")));
        }
        Ok(mat)
    }

    /// Loads `t{m}_fin.txt` from `dir`.
    pub fn load(m: u32, dir: &Path) -> Result<Self, Error> {
        let path = dir.join(format!("t{m}_fin.txt"));
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::parse(m, &text)
    }

    pub fn from_f64(m: u32, rows: &[Vec<f64>]) -> Result<Self, Error> {
        if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
            return Err(Error::Matrix(format!("expected a {DIM}x{DIM} matrix")));
        }
        Ok(ProjectionMatrix {
            m,
            entries: rows
                .iter()
                .map(|r| r.iter().map(|&x| Interval::point(x)).collect())
                .collect(),
            checksum: 0,
        })
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.entries[i][j]
    }

    /// Plain-text form, one row per line.
    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| format!("{:.11e}", x.mid())).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    }
}

/// Gershgorin lower bound of the principal submatrix without row/column
/// `drop`, with the index of the leftmost disk in the full numbering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GershgorinBound {
    pub bound: Interval,
    pub disk: usize,
}

pub fn gershgorin_min(mat: &ProjectionMatrix, drop: usize) -> GershgorinBound {
    let n = mat.entries.len();
    let mut best: Option<GershgorinBound> = None;
    for i in (0..n).filter(|&i| i != drop) {
        let radius: Interval = (0..n)
            .filter(|&j| j != i && j != drop)
            .map(|j| mat.get(i, j).abs())
            .sum();
        let left = mat.get(i, i) - radius;
        if best.map_or(true, |b| left.lo() < b.bound.lo()) {
            best = Some(GershgorinBound {
                bound: left,
                disk: i,
            });
        }
    }
    best.expect("matrix has at least two rows")
}

/// Mesh for the defect bound: cells per left ramp, middle, right ramp.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mesh {
    pub left: usize,
    pub middle: usize,
    pub right: usize,
}

impl Mesh {
    pub const REFERENCE: Mesh = Mesh {
        left: 512,
        middle: 510 * 16,
        right: 512,
    };

    /// Cells with their region tags, left to right.
    pub fn cells(&self, p: &Params) -> Vec<(RegionTag, Interval)> {
        let mut out = Vec::with_capacity(self.left + self.middle + self.right);
        for (r, k) in [
            (RegionTag::LeftRamp, self.left),
            (RegionTag::Middle, self.middle),
            (RegionTag::RightRamp, self.right),
        ] {
            let ext = r.extent(p);
            let (lo, hi) = (ext.lo(), ext.hi());
            let h = (hi - lo) / k as f64;
            for c in 0..k {
                let a = if c == 0 { lo } else { lo + h * c as f64 };
                let b = if c + 1 == k { hi } else { lo + h * (c + 1) as f64 };
                out.push((r, Interval::raw(a, b)));
            }
        }
        out
    }
}

/// Outcome of the defect bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DefectBound {
    /// Upper bound on the operator norm (use `.hi()`).
    pub bound: Interval,
    /// Outer cell where the maximum was attained.
    pub argmax: usize,
    pub cells: usize,
}

/// Upper bound for `‖T_S - T_fin‖` through `max_x ∫ |k_S(x,y) - k_fin(x,y)| dy`.
pub fn op_norm_defect(
    mat: &ProjectionMatrix,
    mesh: Mesh,
    p: &Params,
) -> Result<DefectBound, Error> {
    let kind = KernelKind::from_m(mat.m)?;
    let cells = mesh.cells(p);
    let basis: Vec<[Interval; DIM]> = cells
        .iter()
        .map(|(_, c)| {
            let mut b = [Interval::ZERO; DIM];
            for (i, bi) in b.iter_mut().enumerate() {
                *bi = basis_eval(i, *c, p);
            }
            b
        })
        .collect();
    let consts = Consts::new();
    let half_a = p.half_a();
    let four_pi = Interval::pi() * 4.0;
    let n = cells.len();
    let rows: Vec<Result<Interval, Error>> = (0..n)
        .into_par_iter()
        .map(|ix| {
            let (rx, x) = cells[ix];
            let outer = Outer::new(x, rx, p);
            // v_j = Σ_i T_ij u_i(x), so k_fin(x,y) = (a/2) Σ_j v_j u_j(y)
            let mut v = [Interval::ZERO; DIM];
            for (j, vj) in v.iter_mut().enumerate() {
                *vj = (0..DIM).map(|i| mat.get(i, j) * basis[ix][i]).sum();
            }
            let mut total = Interval::ZERO;
            for (iy, &(ry, y)) in cells.iter().enumerate() {
                let fin: Interval = (0..DIM)
                    .filter(|&j| basis_block(j) == ry)
                    .map(|j| v[j] * basis[iy][j])
                    .sum::<Interval>()
                    * half_a;
                let len = Interval::point(y.hi()) - Interval::point(y.lo());
                let w_sig = t_weight(y, ry, &outer, p, false, false) / four_pi;
                let w_mag = t_weight(y, ry, &outer, p, false, true) / four_pi;
                let u = (y - x) / (y + x - 2.0 + p.four_over_a());
                let w = u.sqr();
                let smooth = smooth_part(kind, w, &consts);
                let ens = error_ns(kind, w, &consts).hi();
                let es = error_s(kind, w).hi();
                let sym = |r: f64| Interval::raw(-r, r);
                let rest = w_sig * smooth + w_mag * sym(ens) - fin;
                let near = ix.abs_diff(iy) <= 1;
                if near {
                    let coef = w_sig + w_mag * sym(es);
                    let exact = arcsinh_exact_integral(
                        Interval::point(y.lo()),
                        Interval::point(y.hi()),
                        x,
                        p.a,
                    )?;
                    total += Interval::point(rest.mag()) * len + Interval::point(coef.mag()) * exact;
                } else {
                    let a = u.abs().recip().asinh();
                    let full = rest + (w_sig + w_mag * sym(es)) * a;
                    total += Interval::point(full.mag()) * len;
                }
            }
            Ok(total)
        })
        .collect();
    let mut best = (0usize, Interval::ZERO);
    for (ix, r) in rows.into_iter().enumerate() {
        let r = r?;
        if !r.is_finite() {
            return Err(Error::Integration(format!("defect row {ix} is not finite")));
        }
        if r.hi() > best.1.hi() {
            best = (ix, r);
        }
    }
    Ok(DefectBound {
        bound: best.1,
        argmax: best.0,
        cells: n,
    })
}

/// Complete elliptic integrals `K(k)`, `E(k)` from the complementary modulus
/// `k' = sqrt(1-k^2)` by the arithmetic-geometric mean.
pub fn elliptic_ke(k_comp: f64) -> (f64, f64) {
    let mut a = 1.0f64;
    let mut b = k_comp;
    let k2 = 1.0 - k_comp * k_comp;
    let mut sum = k2 / 2.0;
    let mut pow = 0.5f64;
    for _ in 0..40 {
        let c = (a - b) / 2.0;
        let an = (a + b) / 2.0;
        let bn = (a * b).sqrt();
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
        if c.abs() < 1e-17 * a {
            break;
        }
    }
    let k = std::f64::consts::PI / (2.0 * a);
    (k, k * (1.0 - sum))
}

/// `X_m(s)` in floating point (nonrigorous).
pub fn kernel_x_float(m: u32, s: f64) -> f64 {
    let kc = (1.0 - s).abs() / (1.0 + s);
    let (kk, ee) = elliptic_ke(kc);
    let x0 = 4.0 * kk / (1.0 + s);
    if m == 0 {
        return x0;
    }
    let x1 = ((1.0 + s * s) * 4.0 * kk / (1.0 + s) - 4.0 * (1.0 + s) * ee) / (2.0 * s);
    let chi = (1.0 + s * s) / (2.0 * s);
    let (mut prev, mut cur) = (x0, x1);
    for n in 1..m {
        let nf = n as f64;
        let next = (2.0 * nf * chi * cur - (nf - 0.5) * prev) / (nf + 0.5);
        prev = cur;
        cur = next;
    }
    cur
}

fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    // Newton iteration on the Legendre polynomial
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 1..n {
                let kf = k as f64;
                let p2 = ((2.0 * kf + 1.0) * z * p1 - kf * p0) / (kf + 1.0);
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, z);
                for k in 1..n {
                    let kf = k as f64;
                    let q2 = ((2.0 * kf + 1.0) * z * q1 - kf * q0) / (kf + 1.0);
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                break;
            }
        }
    }
    (x, w)
}

/// Floating-point nodes and weights on `[lo, hi]`, graded geometrically
/// toward `sing` when it lies in the closed range.
fn graded_rule(lo: f64, hi: f64, sing: Option<f64>, gl: &(Vec<f64>, Vec<f64>), levels: usize) -> Vec<(f64, f64)> {
    let mut panels = Vec::new();
    let mut push_graded = |a: f64, b: f64, toward_a: bool| {
        if b <= a {
            return;
        }
        let len = b - a;
        let mut edges = vec![0.0f64];
        for k in (0..levels).rev() {
            edges.push(len * 0.5f64.powi(k as i32));
        }
        for w in edges.windows(2) {
            let (s, t) = if toward_a {
                (a + w[0], a + w[1])
            } else {
                (b - w[1], b - w[0])
            };
            panels.push((s, t));
        }
    };
    match sing {
        Some(s) if s >= lo && s <= hi => {
            push_graded(lo, s, false);
            push_graded(s, hi, true);
        }
        _ => push_graded(lo, hi, true),
    }
    let mut out = Vec::new();
    for (a, b) in panels {
        let h = (b - a) / 2.0;
        let c = (a + b) / 2.0;
        for (xi, wi) in gl.0.iter().zip(&gl.1) {
            out.push((c + h * xi, h * wi));
        }
    }
    out
}

/// Floating-point `u_i` at a point.
fn basis_float(i: usize, x: f64, p: &Params) -> f64 {
    let iv = basis_eval(i, Interval::point(x), p);
    iv.mid()
}

fn g_float(x: f64, p: &Params) -> f64 {
    let iv = Interval::point(x);
    let region = split_by_region(iv, p)[0].0;
    crate::profile::g_on(iv, region, p).mid()
}

/// Nonrigorous Galerkin matrix `(a/2) ∬ k_S(x,y) u_i(x) u_j(y) dy dx`.
/// `panels` is the number of outer panels per block.
pub fn regen_projection(m: u32, panels: usize, p: &Params) -> Result<ProjectionMatrix, Error> {
    KernelKind::from_m(m)?;
    if panels == 0 {
        return Err(Error::Config("panels must be positive".into()));
    }
    let a = p.a.mid();
    let gl = gauss_legendre(10);
    let blocks: Vec<(RegionTag, f64, f64)> = RegionTag::ALL
        .iter()
        .map(|r| {
            let e = r.extent(p);
            (*r, e.lo(), e.hi())
        })
        .collect();
    let rho = |t: f64| a / 2.0 * (t - 1.0) + 1.0;
    let pi = std::f64::consts::PI;
    let k_m = |s: f64| kernel_x_float(m, s) / (2.0 * pi * s);
    // k_S(x,y) = 1/2 (g(y) K(ρ/ρ')/ρ + g(x) K(ρ'/ρ)/ρ')
    let kernel = |x: f64, y: f64, gx: f64, gy: f64| {
        if x == y {
            return 0.0;
        }
        let (r, rp) = (rho(x), rho(y));
        0.5 * (gy * k_m(r / rp) / r + gx * k_m(rp / r) / rp)
    };
    let mut outer_nodes = Vec::new();
    for &(r, lo, hi) in &blocks {
        let h = (hi - lo) / panels as f64;
        for k in 0..panels {
            let (s, t) = (lo + h * k as f64, lo + h * (k + 1) as f64);
            for (xi, wi) in gl.0.iter().zip(&gl.1) {
                outer_nodes.push((r, (s + t) / 2.0 + (t - s) / 2.0 * xi, (t - s) / 2.0 * wi));
            }
        }
    }
    let partial: Vec<[[f64; DIM]; DIM]> = outer_nodes
        .par_iter()
        .map(|&(_, x, wx)| {
            let gx = g_float(x, p);
            let ux: Vec<f64> = (0..DIM).map(|i| basis_float(i, x, p)).collect();
            let mut acc = [[0.0f64; DIM]; DIM];
            for &(_, lo, hi) in &blocks {
                for (y, wy) in graded_rule(lo, hi, Some(x), &gl, 40) {
                    let gy = g_float(y, p);
                    let k = kernel(x, y, gx, gy) * wx * wy;
                    if k == 0.0 {
                        continue;
                    }
                    let uy: Vec<f64> = (0..DIM).map(|j| basis_float(j, y, p)).collect();
                    for i in 0..DIM {
                        if ux[i] == 0.0 {
                            continue;
                        }
                        for j in 0..DIM {
                            acc[i][j] += k * ux[i] * uy[j];
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut mat = vec![vec![0.0f64; DIM]; DIM];
    for acc in &partial {
        for i in 0..DIM {
            for j in 0..DIM {
                mat[i][j] += acc[i][j];
            }
        }
    }
    for row in mat.iter_mut() {
        for v in row.iter_mut() {
            *v *= a / 2.0;
        }
    }
    // symmetrize the quadrature noise
    for i in 0..DIM {
        for j in 0..i {
            let s = 0.5 * (mat[i][j] + mat[j][i]);
            mat[i][j] = s;
            mat[j][i] = s;
        }
    }
    ProjectionMatrix::from_f64(m, &mat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_at_one() {
        for n in 0..8 {
            assert!(legendre(n, Interval::ONE).contains(1.0));
        }
    }

    #[test]
    fn elliptic_at_zero_modulus() {
        let (k, e) = elliptic_ke(1.0);
        assert!((k - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((e - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }
}
