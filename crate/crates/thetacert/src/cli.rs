//! Command-line configuration and the pipelines behind each command.
//!
//! Every command writes its per-cell enclosures and a small summary file to
//! the output directory. `certify-all` reuses summaries that match the
//! requested configuration and computes the missing ones.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};

use crate::error::Error;
use crate::interval::Interval;
use crate::operators::{
    combine_error, grid_l2_norm, inner_bsj_or_bound, sweep, sweep_cells, bsj_on_cell,
    GridEnclosures, OpConfig, OperatorQuantity, Quantity,
};
use crate::profile::{BsjProfile, Params, RegionTag};
use crate::quadrature::{grid_cell, Rule};
use crate::spectral::{
    gershgorin_min, op_norm_defect, regen_projection, Mesh, ProjectionMatrix, BSJ_INDEX, DIM,
};
use crate::verifier::{full_certificate, Inputs};

/// Pipeline selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    MinI,
    E3,
    ThetaA3,
    E6,
    Gershgorin,
    Defect,
    CertifyAll,
    RegenMatrices,
}

/// Fully resolved run settings.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub budget: usize,
    /// Worker threads; zero lets the pool decide.
    pub threads: usize,
    pub out_dir: PathBuf,
    /// Directory with `t3_fin.txt` and `t6_fin.txt`; shipped data when unset.
    pub matrix_dir: Option<PathBuf>,
    pub fast: bool,
    pub rho_splits: usize,
    pub sing_splits: usize,
    pub sing_outer_splits: usize,
    pub mesh_left: usize,
    pub mesh_middle: usize,
    pub mesh_right: usize,
    pub regen_panels: usize,
    /// Ignore existing summaries in `certify-all`.
    pub recompute: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::CertifyAll,
            n: 512,
            abs_tol: 1e-5,
            rel_tol: 1e-5,
            budget: 1000,
            threads: 0,
            out_dir: PathBuf::from("results"),
            matrix_dir: None,
            fast: false,
            rho_splits: 1,
            sing_splits: 1,
            sing_outer_splits: 1,
            mesh_left: Mesh::REFERENCE.left,
            mesh_middle: Mesh::REFERENCE.middle,
            mesh_right: Mesh::REFERENCE.right,
            regen_panels: 16,
            recompute: false,
        }
    }
}

/// Keys accepted in a configuration file.
pub const CONFIG_KEYS: [&str; 16] = [
    "n",
    "abs_tol",
    "rel_tol",
    "budget",
    "threads",
    "out_dir",
    "matrix_dir",
    "fast",
    "rho_splits",
    "sing_splits",
    "sing_outer_splits",
    "mesh_left",
    "mesh_middle",
    "mesh_right",
    "regen_panels",
    "recompute",
];

fn parse_val<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, Error> {
    v.parse()
        .map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, Error> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!("bad value `{v}` for `{key}`"))),
    }
}

impl RunConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, v: &str) -> Result<(), Error> {
        match key {
            "n" => self.n = parse_val(key, v)?,
            "abs_tol" => self.abs_tol = parse_val(key, v)?,
            "rel_tol" => self.rel_tol = parse_val(key, v)?,
            "budget" => self.budget = parse_val(key, v)?,
            "threads" => self.threads = parse_val(key, v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            "matrix_dir" => self.matrix_dir = Some(PathBuf::from(v)),
            "fast" => self.fast = parse_bool(key, v)?,
            "rho_splits" => self.rho_splits = parse_val(key, v)?,
            "sing_splits" => self.sing_splits = parse_val(key, v)?,
            "sing_outer_splits" => self.sing_outer_splits = parse_val(key, v)?,
            "mesh_left" => self.mesh_left = parse_val(key, v)?,
            "mesh_middle" => self.mesh_middle = parse_val(key, v)?,
            "mesh_right" => self.mesh_right = parse_val(key, v)?,
            "regen_panels" => self.regen_panels = parse_val(key, v)?,
            "recompute" => self.recompute = parse_bool(key, v)?,
            _ => {
                return Err(Error::Config(format!(
                    "unknown key `{key}`; valid keys: {}",
                    CONFIG_KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Applies `key=value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), Error> {
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key=value", ln + 1))
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n < 2 || self.n % 2 != 0 {
            return Err(Error::Config(format!("n = {} must be even and at least 2", self.n)));
        }
        if self.mesh_left == 0 || self.mesh_middle == 0 || self.mesh_right == 0 {
            return Err(Error::Config("mesh sizes must be positive".into()));
        }
        if self.regen_panels == 0 {
            return Err(Error::Config("regen_panels must be positive".into()));
        }
        self.op_config().validate()
    }

    pub fn op_config(&self) -> OpConfig {
        OpConfig {
            params: Params::default(),
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            budget: self.budget,
            rho_splits: self.rho_splits,
            sing_splits: self.sing_splits,
            sing_outer_splits: self.sing_outer_splits,
            rule: if self.fast { Rule::Order0 } else { Rule::Gl2 },
        }
    }

    /// Defect mesh; fast mode divides every count by 16.
    pub fn mesh(&self) -> Mesh {
        let s = if self.fast { 16 } else { 1 };
        Mesh {
            left: (self.mesh_left / s).max(1),
            middle: (self.mesh_middle / s).max(1),
            right: (self.mesh_right / s).max(1),
        }
    }

    /// Tag identifying the settings that affect the cell sweeps.
    pub fn sweep_tag(&self) -> String {
        format!(
            "n={} abs_tol={:e} rel_tol={:e} budget={} rho_splits={} sing_splits={} sing_outer_splits={} fast={}",
            self.n,
            self.abs_tol,
            self.rel_tol,
            self.budget,
            self.rho_splits,
            self.sing_splits,
            self.sing_outer_splits,
            self.fast
        )
    }

    fn mesh_tag(&self) -> String {
        let m = self.mesh();
        format!("mesh={},{},{}{}", m.left, m.middle, m.right, self.matrix_source())
    }

    fn matrix_source(&self) -> String {
        match &self.matrix_dir {
            Some(d) => format!(" matrices={}", d.display()),
            None => String::new(),
        }
    }

    fn matrix(&self, m: u32) -> Result<ProjectionMatrix, Error> {
        match &self.matrix_dir {
            Some(d) => ProjectionMatrix::load(m, d),
            None => ProjectionMatrix::shipped(m),
        }
    }
}

/// Reads a configuration file on top of the defaults.
pub fn load_config(path: &Path) -> Result<RunConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut c = RunConfig::default();
    c.apply_text(&text)?;
    Ok(c)
}

/// Command-line arguments. Flags override the configuration file.
#[derive(Parser, Debug, Default)]
#[command(name = "thetacert", version, about = "Interval enclosures and certificate checks")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Option<Command>,
    /// key=value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Number of uniform cells on [-1,1].
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Queue pops per adaptive integral.
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub matrix_dir: Option<PathBuf>,
    /// Order-0 rule and coarser meshes.
    #[arg(long)]
    pub fast: bool,
    #[arg(long)]
    pub rho_splits: Option<usize>,
    #[arg(long)]
    pub sing_splits: Option<usize>,
    #[arg(long)]
    pub sing_outer_splits: Option<usize>,
    #[arg(long)]
    pub mesh_left: Option<usize>,
    #[arg(long)]
    pub mesh_middle: Option<usize>,
    #[arg(long)]
    pub mesh_right: Option<usize>,
    #[arg(long)]
    pub regen_panels: Option<usize>,
    /// Recompute every input of certify-all.
    #[arg(long)]
    pub recompute: bool,
}

impl Args {
    /// Defaults, then the configuration file, then explicit flags.
    pub fn resolve(&self) -> Result<RunConfig, Error> {
        let mut c = match &self.config {
            Some(p) => load_config(p)?,
            None => RunConfig::default(),
        };
        if let Some(cmd) = self.command {
            c.command = cmd;
        }
        macro_rules! over {
            ($($f:ident),*) => {$( if let Some(v) = self.$f.clone() { c.$f = v; } )*};
        }
        over!(n, abs_tol, rel_tol, budget, threads, out_dir, rho_splits, sing_splits,
              sing_outer_splits, mesh_left, mesh_middle, mesh_right, regen_panels);
        if let Some(d) = &self.matrix_dir {
            c.matrix_dir = Some(d.clone());
        }
        c.fast |= self.fast;
        c.recompute |= self.recompute;
        c.validate()?;
        Ok(c)
    }
}

/// Scalar results of one command, stored as `key value` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Summary {
    pub tag: String,
    pub entries: BTreeMap<String, String>,
}

impl Summary {
    fn new(tag: String) -> Self {
        Summary {
            tag,
            entries: BTreeMap::new(),
        }
    }

    fn put_interval(&mut self, key: &str, v: Interval) {
        self.entries
            .insert(key.into(), format!("{:?} {:?}", v.lo(), v.hi()));
    }

    fn put(&mut self, key: &str, v: impl ToString) {
        self.entries.insert(key.into(), v.to_string());
    }

    pub fn interval(&self, key: &str) -> Option<Interval> {
        let v = self.entries.get(key)?;
        let mut it = v.split_whitespace().map(|t| t.parse::<f64>());
        match (it.next(), it.next()) {
            (Some(Ok(lo)), Some(Ok(hi))) => Interval::new(lo, hi).ok(),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("# {}\n", self.tag);
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} {v}");
        }
        s
    }

    pub fn parse(text: &str) -> Summary {
        let mut out = Summary::default();
        for line in text.lines() {
            if let Some(t) = line.strip_prefix("# ") {
                out.tag = t.trim().to_string();
            } else if let Some((k, v)) = line.trim().split_once(' ') {
                out.entries.insert(k.into(), v.trim().into());
            }
        }
        out
    }

    fn write(&self, path: &Path) -> Result<(), Error> {
        write_file(path, &self.to_text())
    }

    fn read(path: &Path) -> Option<Summary> {
        std::fs::read_to_string(path).ok().map(|t| Summary::parse(&t))
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn grid_path(cfg: &RunConfig, label: &str) -> PathBuf {
    cfg.out_dir.join(format!("{label}_N{}.txt", cfg.n))
}

fn summary_path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(format!("{name}.summary"))
}

/// Loads a stored grid if its summary tag matches, else sweeps and stores.
fn cached_grid(
    cfg: &RunConfig,
    q: Quantity,
    cells: Option<&[usize]>,
    log: &mut Vec<String>,
) -> Result<GridEnclosures, Error> {
    let path = grid_path(cfg, &q.label());
    let tag_path = path.with_extension("tag");
    let tag = cfg.sweep_tag();
    if !cfg.recompute {
        if let (Ok(t), Ok(g)) = (std::fs::read_to_string(&tag_path), GridEnclosures::read(&path)) {
            let covers = match cells {
                Some(cs) => cs.iter().all(|&j| j < g.n && g.flags[j] == crate::quadrature::Flag::Ok),
                None => !g.any_flagged(),
            };
            if t.trim() == tag && g.n == cfg.n && covers {
                log.push(format!("reused {}", path.display()));
                return Ok(g);
            }
        }
    }
    let t0 = Instant::now();
    let op = cfg.op_config();
    let g = match cells {
        Some(cs) => sweep_cells(q, cfg.n, cs, &op)?,
        None => sweep(q, cfg.n, &op)?,
    };
    g.write(&path)?;
    write_file(&tag_path, &format!("{tag}\n"))?;
    log.push(format!(
        "{}: {} cells in {:.1?}, {} budget warnings",
        q.label(),
        cells.map_or(cfg.n, <[usize]>::len),
        t0.elapsed(),
        g.warnings
    ));
    Ok(g)
}

fn min_i(cfg: &RunConfig, log: &mut Vec<String>) -> Result<Summary, Error> {
    let g = cached_grid(cfg, Quantity::Itilde, None, log)?;
    let (j, lo) = g.min_lower();
    let p = Params::default();
    let last = grid_cell(j, cfg.n).hi() > RegionTag::RightRamp.extent(&p).lo();
    let mut s = Summary::new(cfg.sweep_tag());
    s.put_interval("min_itilde", Interval::point(lo));
    s.put("min_cell", j);
    s.put("min_in_last_region", last);
    s.put("flagged", g.any_flagged());
    Ok(s)
}

fn middle_cells(n: usize, p: &Params) -> Vec<usize> {
    (0..n)
        .filter(|&j| bsj_on_cell(j, n, p) != Interval::ZERO)
        .collect()
}

fn residual(
    cfg: &RunConfig,
    which: OperatorQuantity,
    log: &mut Vec<String>,
) -> Result<Summary, Error> {
    let p = Params::default();
    let t = cached_grid(cfg, which.operator_part(), None, log)?;
    let it = if which.uses_itilde() {
        let cells = middle_cells(cfg.n, &p);
        Some(cached_grid(cfg, Quantity::Itilde, Some(&cells), log)?)
    } else {
        None
    };
    let e = combine_error(which, it.as_ref(), &t, &p)?;
    e.write(&grid_path(cfg, which.label()))?;
    let mut s = Summary::new(cfg.sweep_tag());
    s.put("flagged", e.any_flagged());
    if e.any_flagged() {
        return Ok(s);
    }
    let norm = grid_l2_norm(&e, &p)?;
    match which {
        OperatorQuantity::E3 => {
            s.put_interval("e_norm", norm);
            s.put_interval("e_inner", inner_bsj_or_bound(&e, &p)?);
        }
        OperatorQuantity::ThetaA3 => s.put_interval("theta_a_norm", norm),
        OperatorQuantity::E6 => s.put_interval("e6_norm", norm),
        OperatorQuantity::ItildeMin => {}
    }
    Ok(s)
}

fn gershgorin(cfg: &RunConfig) -> Result<Summary, Error> {
    let mut s = Summary::new(format!("gershgorin{}", cfg.matrix_source()));
    for m in [3, 6] {
        let g = gershgorin_min(&cfg.matrix(m)?, BSJ_INDEX);
        s.put_interval(&format!("gersh{m}"), g.bound);
        s.put(&format!("gersh{m}_disk"), g.disk);
    }
    Ok(s)
}

fn defect(cfg: &RunConfig, m: u32) -> Result<Summary, Error> {
    let d = op_norm_defect(&cfg.matrix(m)?, cfg.mesh(), &Params::default())?;
    let mut s = Summary::new(cfg.mesh_tag());
    s.put_interval(&format!("defect{m}"), d.bound);
    s.put(&format!("defect{m}_argmax"), d.argmax);
    Ok(s)
}

fn regen(cfg: &RunConfig, log: &mut Vec<String>) -> Result<(), Error> {
    let p = Params::default();
    for m in [3, 6] {
        let r = regen_projection(m, cfg.regen_panels, &p)?;
        write_file(&cfg.out_dir.join(format!("t{m}_regen.txt")), &r.to_text())?;
        let shipped = cfg.matrix(m)?;
        let mut worst = (0.0f64, 0, 0);
        let mut diff = String::new();
        for i in 0..DIM {
            for j in 0..DIM {
                let d = (r.get(i, j).mid() - shipped.get(i, j).mid()).abs();
                if d > worst.0 {
                    worst = (d, i, j);
                }
                let _ = write!(diff, "{d:.3e}{}", if j + 1 == DIM { "\n" } else { " " });
            }
        }
        write_file(&cfg.out_dir.join(format!("t{m}_regen_diff.txt")), &diff)?;
        log.push(format!(
            "m={m}: max |regen - shipped| = {:.3e} at ({}, {})",
            worst.0, worst.1, worst.2
        ));
    }
    Ok(())
}

fn store(cfg: &RunConfig, name: &str, s: &Summary) -> Result<(), Error> {
    s.write(&summary_path(cfg, name))
}

/// Stored summary if it matches `tag`, else computed and stored.
fn cached_summary(
    cfg: &RunConfig,
    name: &str,
    tag: &str,
    log: &mut Vec<String>,
    f: impl FnOnce(&mut Vec<String>) -> Result<Summary, Error>,
) -> Result<Summary, Error> {
    if !cfg.recompute {
        if let Some(s) = Summary::read(&summary_path(cfg, name)) {
            if s.tag == tag {
                log.push(format!("reused {name}.summary"));
                return Ok(s);
            }
        }
    }
    let t0 = Instant::now();
    let mut s = f(log)?;
    s.put("elapsed_s", format!("{:.1}", t0.elapsed().as_secs_f64()));
    log.push(format!("{name}: {:.1?}", t0.elapsed()));
    store(cfg, name, &s)?;
    Ok(s)
}

fn inputs_from(
    mi: &Summary,
    e3: &Summary,
    ta: &Summary,
    e6: &Summary,
    gs: &Summary,
    d3: &Summary,
    d6: &Summary,
) -> Inputs {
    let p = Params::default();
    Inputs {
        e_norm: e3.interval("e_norm"),
        e_inner: e3.interval("e_inner"),
        theta_a_norm: ta.interval("theta_a_norm"),
        e6_norm: e6.interval("e6_norm"),
        min_itilde: mi.interval("min_itilde"),
        min_in_last_region: mi.get("min_in_last_region").map(|v| v == "true"),
        gersh3: gs.interval("gersh3"),
        gersh6: gs.interval("gersh6"),
        defect3: d3.interval("defect3"),
        defect6: d6.interval("defect6"),
        bsj_norm_sq: Some(BsjProfile::new(&p).l2_norm_sq(&p)),
        lambda_star: Some(crate::verifier::lambda_star()),
        lambda6_approx: Some(crate::verifier::lambda6_approx()),
    }
}

/// Summary names written by the pipelines.
pub const SUMMARIES: [&str; 7] = [
    "min_i",
    "e3",
    "theta_a3",
    "e6",
    "gershgorin",
    "defect3",
    "defect6",
];

/// Reads every stored summary in `dir` without computing anything.
/// Missing files give empty summaries.
pub fn read_summaries(dir: &Path) -> BTreeMap<String, Summary> {
    SUMMARIES
        .iter()
        .map(|n| {
            let s = Summary::read(&dir.join(format!("{n}.summary"))).unwrap_or_default();
            (n.to_string(), s)
        })
        .collect()
}

/// Certificate inputs from the summaries stored in `dir`.
pub fn read_inputs(dir: &Path) -> Inputs {
    let s = read_summaries(dir);
    inputs_from(
        &s["min_i"],
        &s["e3"],
        &s["theta_a3"],
        &s["e6"],
        &s["gershgorin"],
        &s["defect3"],
        &s["defect6"],
    )
}

/// Certificate inputs gathered from the summaries, plus provenance entries.
/// Matrix-dependent steps that fail leave their inputs missing and record the error.
pub fn gather_inputs(
    cfg: &RunConfig,
    log: &mut Vec<String>,
) -> Result<(Inputs, Vec<(String, String)>), Error> {
    let tag = cfg.sweep_tag();
    let mut prov = vec![
        ("sweeps".to_string(), tag.clone()),
        ("defect".to_string(), cfg.mesh_tag()),
    ];
    let mi = cached_summary(cfg, "min_i", &tag, log, |l| min_i(cfg, l))?;
    let e3 = cached_summary(cfg, "e3", &tag, log, |l| residual(cfg, OperatorQuantity::E3, l))?;
    let ta = cached_summary(cfg, "theta_a3", &tag, log, |l| {
        residual(cfg, OperatorQuantity::ThetaA3, l)
    })?;
    let e6 = cached_summary(cfg, "e6", &tag, log, |l| residual(cfg, OperatorQuantity::E6, l))?;
    let mut soft = |name: &str, r: Result<Summary, Error>| {
        r.unwrap_or_else(|e| {
            prov.push((format!("error {name}"), e.to_string()));
            Summary::default()
        })
    };
    let gtag = format!("gershgorin{}", cfg.matrix_source());
    let gs = soft("gershgorin", cached_summary(cfg, "gershgorin", &gtag, log, |_| gershgorin(cfg)));
    let mt = cfg.mesh_tag();
    let d3 = soft("defect3", cached_summary(cfg, "defect3", &mt, log, |_| defect(cfg, 3)));
    let d6 = soft("defect6", cached_summary(cfg, "defect6", &mt, log, |_| defect(cfg, 6)));
    Ok((inputs_from(&mi, &e3, &ta, &e6, &gs, &d3, &d6), prov))
}

/// Runs the configured command. Returns the process exit code.
pub fn run(cfg: &RunConfig) -> Result<i32, Error> {
    cfg.validate()?;
    if cfg.threads > 0 {
        // a second initialization in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    let t0 = Instant::now();
    let mut log = Vec::new();
    let mut code = 0;
    let single = |name: &str, mut s: Summary| -> Result<i32, Error> {
        s.put("elapsed_s", format!("{:.1}", t0.elapsed().as_secs_f64()));
        store(cfg, name, &s)?;
        print!("{}", s.to_text());
        Ok(if s.get("flagged") == Some("true") { 2 } else { 0 })
    };
    match cfg.command {
        Command::MinI => code = single("min_i", min_i(cfg, &mut log)?)?,
        Command::E3 => code = single("e3", residual(cfg, OperatorQuantity::E3, &mut log)?)?,
        Command::ThetaA3 => {
            code = single("theta_a3", residual(cfg, OperatorQuantity::ThetaA3, &mut log)?)?
        }
        Command::E6 => code = single("e6", residual(cfg, OperatorQuantity::E6, &mut log)?)?,
        Command::Gershgorin => code = single("gershgorin", gershgorin(cfg)?)?,
        Command::Defect => {
            for m in [3, 6] {
                let t = Instant::now();
                let mut s = defect(cfg, m)?;
                s.put("elapsed_s", format!("{:.1}", t.elapsed().as_secs_f64()));
                store(cfg, &format!("defect{m}"), &s)?;
                print!("{}", s.to_text());
            }
        }
        Command::RegenMatrices => regen(cfg, &mut log)?,
        Command::CertifyAll => {
            let (inputs, prov) = gather_inputs(cfg, &mut log)?;
            let rep = full_certificate(&inputs, prov);
            let text = rep.to_text();
            write_file(&cfg.out_dir.join("certificate.txt"), &text)?;
            print!("{text}");
            code = if rep.global_pass() { 0 } else { 1 };
        }
    }
    for l in &log {
        eprintln!("{l}");
    }
    eprintln!("total {:.1?}", t0.elapsed());
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default() {
        let mut c = RunConfig::default();
        c.apply_text("").unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn config_value_overrides_default() {
        let mut c = RunConfig::default();
        c.apply_text("abs_tol=1e-4\n# comment\n").unwrap();
        assert_eq!(c.abs_tol, 1e-4);
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let err = RunConfig::default().apply_text("tolerance=1").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("tolerance") && msg.contains("abs_tol") && msg.contains("rel_tol"));
    }

    #[test]
    fn flag_beats_file() {
        let dir = std::env::temp_dir().join(format!("thetacert_cfg_{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "abs_tol=1e-4\nn=64\n").unwrap();
        let args = Args::parse_from([
            "thetacert",
            "min-i",
            "--config",
            path.to_str().unwrap(),
            "--abs-tol",
            "1e-6",
        ]);
        let c = args.resolve().unwrap();
        assert_eq!(c.abs_tol, 1e-6);
        assert_eq!(c.n, 64);
        assert_eq!(c.command, Command::MinI);
    }

    #[test]
    fn odd_grid_rejected() {
        let c = RunConfig {
            n: 7,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn summary_roundtrip() {
        let mut s = Summary::new("tag x".into());
        s.put_interval("v", Interval::new(0.1, 0.2).unwrap());
        s.put("b", true);
        let back = Summary::parse(&s.to_text());
        assert_eq!(back, s);
        assert_eq!(back.interval("v"), Some(Interval::new(0.1, 0.2).unwrap()));
    }
}
