//! The `hhh` command: braid parsing, cached pipeline runs and artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::hochschild::{q_window, Convention, HHHTable, HHHTableJson, HochschildError};
use crate::multigrade::{AxisBound, Constraint, DimTable, Window};
use crate::rouquier::{
    rouquier_complex, rouquier_complex_simplified, BimoduleComplex, BimoduleComplexJson, BraidWord, Normalization,
    RouquierError,
};
use crate::supports::{support_report_from, SupportError, SupportReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("token {pos} (column {column}): zero is not a braid generator")]
    Zero { pos: usize, column: usize },
    #[error("token {pos} (column {column}): generator {value} out of range for {n} strands (need 1 <= |i| < {n})")]
    OutOfRange { pos: usize, column: usize, value: i64, n: usize },
    #[error("token {pos} (column {column}): `{token}` is not an integer")]
    NotInteger { pos: usize, column: usize, token: String },
    #[error("a braid needs at least one strand")]
    NoStrands,
}

impl ParseError {
    /// 1-based token index of the offending token.
    pub fn position(&self) -> Option<usize> {
        match self {
            Self::Zero { pos, .. } | Self::OutOfRange { pos, .. } | Self::NotInteger { pos, .. } => Some(*pos),
            Self::NoStrands => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Hochschild(#[from] HochschildError),
    #[error(transparent)]
    Rouquier(#[from] RouquierError),
    #[error(transparent)]
    Support(#[from] SupportError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Parse(_) => "parse",
            Self::Config(_) => "config",
            Self::Hochschild(_) | Self::Rouquier(_) => "compute",
            Self::Support(_) => "support",
            Self::Io { .. } => "io",
            Self::Json(_) => "json",
        }
    }
}

/// Whitespace-separated nonzero integers `i` with `|i| < n`; positions in
/// errors are 1-based token indices plus the byte column.
pub fn parse_braid(text: &str, n: usize) -> Result<BraidWord, ParseError> {
    if n == 0 {
        return Err(ParseError::NoStrands);
    }
    let mut letters = Vec::new();
    let mut pos = 0;
    let mut rest = text;
    let mut offset = 0;
    while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
        let tail = &rest[start..];
        let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
        let token = &tail[..len];
        pos += 1;
        let column = offset + start + 1;
        let value: i64 = token
            .parse()
            .map_err(|_| ParseError::NotInteger { pos, column, token: token.to_string() })?;
        if value == 0 {
            return Err(ParseError::Zero { pos, column });
        }
        if value.unsigned_abs() as usize >= n {
            return Err(ParseError::OutOfRange { pos, column, value, n });
        }
        letters.push(value as i32);
        offset += start + len;
        rest = &tail[len..];
    }
    Ok(BraidWord::new(n, letters).expect("letters checked"))
}

/// Bounds on rendered `(a, q, t)` exponents: `q <= q` always, `a` and `t`
/// optionally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cutoff {
    pub q: i64,
    pub a: Option<i64>,
    pub t: Option<i64>,
}

impl Default for Cutoff {
    fn default() -> Self {
        Self { q: 8, a: None, t: None }
    }
}

impl FromStr for Cutoff {
    type Err = String;

    /// `8` or `q=8,a=1,t=4`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(q) = s.trim().parse() {
            return Ok(Self { q, ..Self::default() });
        }
        let mut out = Self::default();
        for part in s.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| format!("`{part}`: expected axis=value"))?;
            let v: i64 = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
            match k.trim() {
                "q" => out.q = v,
                "a" => out.a = Some(v),
                "t" => out.t = Some(v),
                other => return Err(format!("unknown axis `{other}` (use q, a, t)")),
            }
        }
        Ok(out)
    }
}

impl Cutoff {
    /// The normalized `(a, X, C)` window.
    pub fn window(&self) -> Window {
        let mut w = q_window(self.q);
        if let Some(a) = self.a {
            w.set(0, AxisBound::at_most(a));
        }
        if let Some(t) = self.t {
            w.push(Constraint { coeffs: vec![-1, 0, 1], bound: AxisBound::at_most(2 * t) });
        }
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "hhh", version, about = "Triply graded homology of braid closures")]
pub struct Args {
    /// Number of strands
    #[arg(long, short = 'n')]
    pub strands: usize,
    /// Braid word, e.g. "1 -2 1"; empty for the identity
    #[arg(long, short = 'b', default_value = "", allow_hyphen_values = true)]
    pub braid: String,
    /// `q` bound, or per axis as `q=8,a=1,t=4`
    #[arg(long, default_value = "8")]
    pub cutoff: Cutoff,
    /// Rendering conventions (repeatable)
    #[arg(long, value_parser = ["qat", "QAT", "tilde"], default_values_t = ["qat".to_string()])]
    pub render: Vec<String>,
    /// Skip the Gaussian-elimination reduction
    #[arg(long)]
    pub no_simplify: bool,
    /// Also test the support bound
    #[arg(long)]
    pub support: bool,
    #[arg(long, default_value_t = 6)]
    pub power_bound: u32,
    /// Worker threads (default: all cores)
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Where artifacts go
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Per-crossing shift of (a, X, C) for positive crossings, e.g. "-1,-1,-2"
    #[arg(long, allow_hyphen_values = true)]
    pub positive_shift: Option<String>,
    /// Per-crossing shift of (a, X, C) for negative crossings
    #[arg(long, allow_hyphen_values = true)]
    pub negative_shift: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub braid: BraidWord,
    pub cutoff: Cutoff,
    pub renders: Vec<Convention>,
    pub simplify: bool,
    pub support: bool,
    pub power_bound: u32,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub format: Format,
    pub normalization: Normalization,
}

fn parse_shift(s: &str) -> Result<[i64; 3], CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Config(format!("shift `{s}`: expected a,X,C"))))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|_| CliError::Config(format!("shift `{s}`: expected three integers")))
}

impl Config {
    pub fn from_args(a: &Args) -> Result<Self, CliError> {
        let braid = parse_braid(&a.braid, a.strands)?;
        if a.cutoff.q < 0 || a.cutoff.t.is_some_and(|t| t < 0) {
            return Err(CliError::Config("cutoff bounds must be non-negative".into()));
        }
        if a.power_bound == 0 {
            return Err(CliError::Config("power bound must be positive".into()));
        }
        if a.jobs == Some(0) {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        let mut renders = Vec::new();
        for r in &a.render {
            let c: Convention = r.parse()?;
            if !renders.contains(&c) {
                renders.push(c);
            }
        }
        let mut normalization = Normalization::default();
        if let Some(s) = &a.positive_shift {
            normalization.positive = parse_shift(s)?;
        }
        if let Some(s) = &a.negative_shift {
            normalization.negative = parse_shift(s)?;
        }
        Ok(Self {
            braid,
            cutoff: a.cutoff,
            renders,
            simplify: !a.no_simplify,
            support: a.support,
            power_bound: a.power_bound,
            jobs: a.jobs,
            cache_dir: a.cache_dir.clone(),
            out_dir: a.out_dir.clone(),
            format: a.format,
            normalization,
        })
    }

    /// Hex digest naming this braid's artifacts.
    pub fn word_hash(&self) -> String {
        let digest = Sha256::digest(format!("{}:{}", self.braid.n(), self.braid).as_bytes());
        hex(&digest[..8])
    }

    fn cache_key(&self) -> String {
        let material = format!(
            "v{VERSION}|n={}|word={}|simplify={}|positive={:?}|negative={:?}",
            self.braid.n(),
            self.braid,
            self.simplify,
            self.normalization.positive,
            self.normalization.negative
        );
        hex(&Sha256::digest(material.as_bytes()))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CacheEntry {
    version: String,
    key: String,
    complex: BimoduleComplexJson,
}

/// The `.hhh.json` artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HhhArtifact {
    pub version: String,
    pub cutoff: Cutoff,
    pub hhh: HHHTableJson,
}

#[derive(Debug)]
pub struct Outcome {
    /// 0 on success, 2 when a support verdict is inconclusive.
    pub exit_code: i32,
    pub artifacts: Vec<PathBuf>,
    pub cache_hit: bool,
    pub hhh: HHHTable,
    pub support: Option<SupportReport>,
}

fn io<T>(path: &Path, r: std::io::Result<T>) -> Result<T, CliError> {
    r.map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    io(&tmp, fs::write(&tmp, text))?;
    io(path, fs::rename(&tmp, path))
}

fn load_cached(cfg: &Config) -> Option<BimoduleComplex> {
    let dir = cfg.cache_dir.as_ref()?;
    let key = cfg.cache_key();
    let text = fs::read_to_string(dir.join(format!("{key}.complex.json"))).ok()?;
    let entry: CacheEntry = serde_json::from_str(&text).ok()?;
    if entry.version != VERSION || entry.key != key {
        return None;
    }
    let cx = BimoduleComplex::from_json(&entry.complex).ok()?;
    (cx.n() == cfg.braid.n()).then_some(cx)
}

fn store_cached(cfg: &Config, cx: &BimoduleComplex) -> Result<(), CliError> {
    let Some(dir) = &cfg.cache_dir else { return Ok(()) };
    io(dir, fs::create_dir_all(dir))?;
    let key = cfg.cache_key();
    let entry = CacheEntry { version: VERSION.into(), key: key.clone(), complex: cx.to_json() };
    write_atomic(&dir.join(format!("{key}.complex.json")), &serde_json::to_string(&entry)?)
}

/// Builds (or loads) the complex, computes and renders `HHH`, optionally
/// runs the support report, and writes the artifacts.
pub fn run(cfg: &Config) -> Result<Outcome, CliError> {
    let (cx, cache_hit) = match load_cached(cfg) {
        Some(cx) => (cx, true),
        None => {
            let cx = if cfg.simplify {
                rouquier_complex_simplified(&cfg.braid)?
            } else {
                rouquier_complex(&cfg.braid)?
            };
            store_cached(cfg, &cx)?;
            (cx, false)
        }
    };
    log::info!("complex ranks {:?} (cache hit: {cache_hit})", cx.ranks());
    let hhh = HHHTable::from_complex(&cfg.braid, &cx, &cfg.cutoff.window(), &cfg.normalization)?;
    let mut json = hhh.to_json();
    json.renders.retain(|k, _| cfg.renders.iter().any(|c| c.to_string() == *k));
    let artifact = HhhArtifact { version: VERSION.into(), cutoff: cfg.cutoff, hhh: json };
    io(&cfg.out_dir, fs::create_dir_all(&cfg.out_dir))?;
    let stem = cfg.word_hash();
    let mut artifacts = Vec::new();
    let hhh_path = cfg.out_dir.join(format!("{stem}.hhh.json"));
    write_atomic(&hhh_path, &(serde_json::to_string_pretty(&artifact)? + "\n"))?;
    artifacts.push(hhh_path);
    let mut exit_code = 0;
    let support = if cfg.support {
        let r = support_report_from(&cfg.braid, &cx, cfg.cutoff.q, cfg.power_bound, &cfg.normalization)?;
        let path = cfg.out_dir.join(format!("{stem}.support.json"));
        write_atomic(&path, &(serde_json::to_string_pretty(&r)? + "\n"))?;
        artifacts.push(path);
        if r.inconclusive() {
            exit_code = 2;
        }
        Some(r)
    } else {
        None
    };
    Ok(Outcome { exit_code, artifacts, cache_hit, hhh, support })
}

/// Rows `a q t : dim` (or the convention's own axes) per requested render.
pub fn format_table(cfg: &Config, o: &Outcome) -> Result<String, CliError> {
    let mut out = String::new();
    let _ = writeln!(out, "braid [{}] on {} strands, writhe {}", cfg.braid, cfg.braid.n(), cfg.braid.writhe());
    for conv in &cfg.renders {
        let t: DimTable = o.hhh.render(*conv)?;
        let _ = writeln!(out, "\n{conv} {}", t.scheme());
        for (e, v) in t.entries() {
            if v > 0 {
                let cells: Vec<String> = e.iter().map(|x| format!("{x:>4}")).collect();
                let _ = writeln!(out, "{} : {v}", cells.join(" "));
            }
        }
    }
    if let Some(r) = &o.support {
        let _ = writeln!(out, "\nsupport {:?}: {}", r.cycle_type, r.status);
        for g in &r.generators {
            let _ = writeln!(out, "  {}: {:?}", g.generator, g.result);
        }
        if let Some(c) = &r.control {
            for g in &c.generators {
                let _ = writeln!(out, "  control {:?} {}: {:?}", c.cycle_type, g.generator, g.result);
            }
        }
    }
    Ok(out)
}

/// Full command: parse, configure threads, run, print. Returns the exit code.
pub fn main_with(args: &Args) -> i32 {
    let result = Config::from_args(args).and_then(|cfg| {
        if let Some(j) = cfg.jobs {
            // a second call in the same process keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
        }
        let o = run(&cfg)?;
        match cfg.format {
            Format::Json => {
                for p in &o.artifacts {
                    println!("{}", p.display());
                }
            }
            Format::Table => print!("{}", format_table(&cfg, &o)?),
        }
        Ok(o.exit_code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let b = parse_braid("1 1 1", 2).unwrap();
        assert_eq!((b.writhe(), b.cycle_type()), (3, vec![2]));
        let b = parse_braid("1 -1", 2).unwrap();
        assert_eq!((b.writhe(), b.cycle_type()), (0, vec![1, 1]));
        assert_eq!(parse_braid("", 3).unwrap(), BraidWord::identity(3));
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_braid("2", 2), Err(ParseError::OutOfRange { pos: 1, column: 1, value: 2, n: 2 }));
        assert_eq!(parse_braid("1  0", 3), Err(ParseError::Zero { pos: 2, column: 4 }));
        let e = parse_braid(" 1 x2", 3).unwrap_err();
        assert_eq!(e, ParseError::NotInteger { pos: 2, column: 4, token: "x2".into() });
        assert!(e.to_string().contains("token 2"));
        assert_eq!(parse_braid("-3", 3).unwrap_err().position(), Some(1));
    }

    #[test]
    fn cutoff_syntax() {
        assert_eq!("5".parse::<Cutoff>().unwrap(), Cutoff { q: 5, a: None, t: None });
        assert_eq!("q=4,t=2".parse::<Cutoff>().unwrap(), Cutoff { q: 4, a: None, t: Some(2) });
        assert!("z=1".parse::<Cutoff>().is_err());
    }

    #[test]
    fn args_parse() {
        let a = Args::try_parse_from(["hhh", "--strands", "2", "--braid", "-1 -1", "--render", "QAT", "--render", "qat"])
            .unwrap();
        let cfg = Config::from_args(&a).unwrap();
        assert_eq!(cfg.braid.letters(), &[-1, -1]);
        assert_eq!(cfg.renders, vec![Convention::BigQat, Convention::Qat]);
        assert!(Args::try_parse_from(["hhh", "--strands", "2", "--render", "bogus"]).is_err());
    }

    #[test]
    fn hashes_are_stable_hex() {
        let a = Args::try_parse_from(["hhh", "-n", "2", "-b", "1"]).unwrap();
        let cfg = Config::from_args(&a).unwrap();
        assert_eq!(cfg.word_hash().len(), 16);
        assert_eq!(cfg.word_hash(), Config::from_args(&a).unwrap().word_hash());
        assert_eq!(cfg.cache_key().len(), 64);
    }
}
