//! The `pongcert` command line: file formats, subcommands and the exit-code
//! contract (0 ok, 2 parse, 3 budget, 4 pipeline failure, 5 rejected).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use pongcert_core::cayley::{enumerate_ball, find_regular_pair, CayleyError, GrowthReport};
use pongcert_core::config::RunConfig;
use pongcert_core::exactnum::rational::to_f64;
use pongcert_core::exactnum::{parse_rational, s_support, GeneratorSet, Matrix, PlaceSet, Rational, Word};
use pongcert_core::pingpong::{verify_certificate, PingPongCertificate};
use pongcert_core::pipeline::certify;
use pongcert_core::spectra::{check_separation, eigen_report, l1_gap_report, EigenReport, GapGrid, SeparationReport};
use pongcert_core::wordforge::trace::write_json_lines;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_PIPELINE: i32 = 4;
pub const EXIT_REJECTED: i32 = 5;

/// Generators as grids of `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub n: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Extra primes to add to the places read off the denominators.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub primes: Vec<u64>,
}

impl GeneratorFile {
    pub fn from_matrices(mats: &[Matrix]) -> Self {
        GeneratorFile {
            n: mats.first().map_or(0, |m| m.dim()),
            generators: mats.iter().map(|m| m.to_string_rows()).collect(),
            labels: None,
            primes: Vec::new(),
        }
    }

    /// Parses and checks shape, determinant and the size caps.
    pub fn load(&self, cfg: &RunConfig) -> anyhow::Result<(GeneratorSet, PlaceSet)> {
        let count = self.generators.len();
        if count == 0 || count > cfg.max_generators {
            bail!("need 1..={} generators, got {count}", cfg.max_generators);
        }
        if self.n < 2 || self.n > cfg.max_dim {
            bail!("dimension must be in 2..={}, got {}", cfg.max_dim, self.n);
        }
        if let Some(l) = &self.labels {
            if l.len() != count {
                bail!("{} labels for {count} generators", l.len());
            }
        }
        let mut mats = Vec::with_capacity(count);
        for (i, g) in self.generators.iter().enumerate() {
            if g.len() != self.n || g.iter().any(|r| r.len() != self.n) {
                bail!("generator {i} is not {0}x{0}", self.n);
            }
            let m = Matrix::from_string_rows(g).with_context(|| format!("generator {i}"))?;
            if m.determinant() != Rational::from_integer(1.into()) {
                bail!("generator {i} does not have determinant 1");
            }
            mats.push(m);
        }
        let mut s = s_support(&mats)?;
        if !self.primes.is_empty() {
            let mut primes: Vec<u64> = s.primes().chain(self.primes.iter().copied()).collect();
            primes.sort();
            primes.dedup();
            s = PlaceSet::with_primes(primes)?;
        }
        Ok((GeneratorSet::new(mats)?, s))
    }
}

#[derive(Debug, Parser)]
#[command(name = "pongcert", version, about = "Growth, ping-pong certificates and their verification for subgroups of SL_n(Q)")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = "PONGCERT_CONFIG")]
    pub config: Option<PathBuf>,
    /// Also print decimal approximations to stderr.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Default, Args)]
pub struct Overrides {
    #[arg(long)]
    pub search_depth: Option<usize>,
    #[arg(long)]
    pub oracle_depth: Option<usize>,
    #[arg(long)]
    pub oracle_budget: Option<u64>,
    #[arg(long)]
    pub exponent_cap: Option<u32>,
    #[arg(long)]
    pub element_budget: Option<u64>,
    #[arg(long)]
    pub word_cap: Option<usize>,
    #[arg(long)]
    pub radius_steps: Option<u32>,
    /// Ratio between rungs of the almost-algebra ladder, as `p/q`.
    #[arg(long)]
    pub epsilon_ratio: Option<String>,
    /// Comma-separated working precisions in bits.
    #[arg(long, value_delimiter = ',')]
    pub precisions: Option<Vec<u32>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ball sizes, growth-rate lower bounds and a verdict.
    Growth {
        generators: PathBuf,
        #[arg(long, default_value_t = 6)]
        radius: usize,
        /// Where to write the `n,count` table.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Search a ball for a regular generic pair.
    FindPair {
        generators: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the whole pipeline and emit a validated certificate.
    Certify {
        generators: PathBuf,
        /// Write the certificate here as well as to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON-lines log of the pipeline steps.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Re-check a certificate against a generator file from scratch.
    Verify {
        certificate: PathBuf,
        generators: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Eigenvalue, separation and gap data for one word.
    Spectrum {
        generators: PathBuf,
        /// Word such as `"+0 -1"`; the first generator when omitted.
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub error: anyhow::Error,
}

fn parse_err(e: anyhow::Error) -> Exit {
    Exit { code: EXIT_PARSE, error: e }
}

pub fn load_config(path: Option<&Path>, o: &Overrides) -> anyhow::Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => RunConfig::default(),
    };
    macro_rules! set {
        ($($f:ident),*) => { $( if let Some(v) = o.$f.clone() { cfg.$f = v; } )* };
    }
    set!(search_depth, oracle_depth, oracle_budget, exponent_cap, element_budget, word_cap, radius_steps, precisions);
    if let Some(r) = &o.epsilon_ratio {
        cfg.epsilon_ratio = parse_rational(r)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn read_generators(path: &Path, cfg: &RunConfig) -> anyhow::Result<(GeneratorSet, PlaceSet)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: GeneratorFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.load(cfg)
}

/// Writes via a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| anyhow!("bad output path {}", path.display()))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("reports serialise") + "\n"
}

fn growth_csv(r: &GrowthReport) -> Vec<u8> {
    let mut buf = Vec::new();
    r.write_csv(&mut buf).expect("writing to memory");
    buf
}

fn pretty_growth(r: &GrowthReport, err: &mut dyn Write) {
    for o in &r.omega_estimates {
        let _ = writeln!(err, "n = {:>2}  |B(n)|^(1/n) >= {:.6}", o.n, to_f64(&o.lower_bound));
    }
    let _ = writeln!(err, "verdict: {:?}", r.verdict);
}

#[derive(Serialize)]
struct SpectrumReport {
    word: Word,
    matrix: Matrix,
    eigen: EigenReport,
    separation: SeparationReport,
    gaps: GapGrid,
}

fn run_growth(gens: &GeneratorSet, radius: usize, csv: Option<PathBuf>, cfg: &RunConfig, pretty: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Exit> {
    let csv = csv.or_else(|| cfg.csv_out.clone().map(PathBuf::from));
    let (report, code) = match enumerate_ball(gens.matrices(), radius, cfg.element_budget) {
        Ok(r) => (r, EXIT_OK),
        Err(CayleyError::BudgetExceeded { partial, .. }) => (*partial, EXIT_BUDGET),
        Err(e) => return Err(Exit { code: EXIT_PIPELINE, error: e.into() }),
    };
    if let Some(p) = csv {
        write_atomic(&p, &growth_csv(&report)).map_err(parse_err)?;
    }
    let _ = out.write_all(to_json(&report).as_bytes());
    if pretty {
        pretty_growth(&report, err);
    }
    if code == EXIT_BUDGET {
        return Err(Exit {
            code,
            error: anyhow!("element budget of {} exceeded; partial sizes reported", cfg.element_budget),
        });
    }
    Ok(())
}

fn run_certify(gens: &GeneratorSet, s: &PlaceSet, cfg: &RunConfig, dest: (Option<PathBuf>, Option<PathBuf>), pretty: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Exit> {
    let (cert_out, trace_out) = dest;
    let cert_out = cert_out.or_else(|| cfg.certificate_out.clone().map(PathBuf::from));
    let trace_out = trace_out.or_else(|| cfg.trace_out.clone().map(PathBuf::from));
    let write_trace = |records: &[_]| -> Result<(), Exit> {
        if let Some(p) = &trace_out {
            let mut buf = Vec::new();
            write_json_lines(records, &mut buf).map_err(|e| parse_err(e.into()))?;
            write_atomic(p, &buf).map_err(parse_err)?;
        }
        Ok(())
    };
    match certify(gens, s, cfg) {
        Ok(c) => {
            write_trace(&c.trace)?;
            let json = to_json(&c.certificate);
            if let Some(p) = &cert_out {
                write_atomic(p, json.as_bytes()).map_err(parse_err)?;
            }
            let _ = out.write_all(json.as_bytes());
            if pretty {
                let cert = &c.certificate;
                let _ = writeln!(
                    err,
                    "A = {}, B = {}, place {}, m = {}, e = {}, r = {:.3e}\nwords of length {} and {} generate a free semigroup; growth rate >= {:.6}",
                    cert.word_a,
                    cert.word_b,
                    cert.place,
                    cert.wedge_m,
                    cert.exponent,
                    to_f64(&cert.cone_radius),
                    cert.len_ab,
                    cert.len_a2b,
                    to_f64(&cert.growth_bound)
                );
            }
            Ok(())
        }
        Err(f) => {
            write_trace(&f.trace)?;
            let _ = out.write_all(to_json(&f.report()).as_bytes());
            let code = if f.budget_exceeded() { EXIT_BUDGET } else { EXIT_PIPELINE };
            Err(Exit {
                code,
                error: anyhow!("{:?} failed: {}", f.stage, f.error),
            })
        }
    }
}

/// Runs one command; the return value is the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {:#}", e.error);
            e.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Exit> {
    let config = cli.config.as_deref();
    let pretty = cli.pretty;
    let setup = |o: &Overrides, path: &Path| -> Result<(RunConfig, GeneratorSet, PlaceSet), Exit> {
        let cfg = load_config(config, o).map_err(parse_err)?;
        let (gens, s) = read_generators(path, &cfg).map_err(parse_err)?;
        Ok((cfg, gens, s))
    };
    match cli.command {
        Command::Growth {
            generators,
            radius,
            csv,
            overrides,
        } => {
            let (cfg, gens, _) = setup(&overrides, &generators)?;
            run_growth(&gens, radius, csv, &cfg, pretty, out, err)
        }
        Command::FindPair { generators, overrides } => {
            let (cfg, gens, s) = setup(&overrides, &generators)?;
            match find_regular_pair(&gens, cfg.search_depth, &s, cfg.element_budget) {
                Ok(p) => {
                    let _ = out.write_all(to_json(&p).as_bytes());
                    Ok(())
                }
                Err(e @ CayleyError::BudgetExceeded { .. }) => Err(Exit { code: EXIT_BUDGET, error: e.into() }),
                Err(e) => Err(Exit { code: EXIT_PIPELINE, error: e.into() }),
            }
        }
        Command::Certify {
            generators,
            out: cert_out,
            trace,
            overrides,
        } => {
            let (cfg, gens, s) = setup(&overrides, &generators)?;
            run_certify(&gens, &s, &cfg, (cert_out, trace), pretty, out, err)
        }
        Command::Verify {
            certificate,
            generators,
            overrides,
        } => {
            let (cfg, gens, _) = setup(&overrides, &generators)?;
            let text = fs::read_to_string(&certificate)
                .with_context(|| format!("reading {}", certificate.display()))
                .map_err(parse_err)?;
            let cert: PingPongCertificate = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", certificate.display()))
                .map_err(parse_err)?;
            let report = verify_certificate(&cert, &gens, cfg.oracle_budget);
            let _ = out.write_all(to_json(&report).as_bytes());
            if report.valid {
                Ok(())
            } else {
                Err(Exit {
                    code: EXIT_REJECTED,
                    error: anyhow!("certificate rejected: {}", report.failures.join("; ")),
                })
            }
        }
        Command::Spectrum { generators, word, overrides } => {
            let (cfg, gens, s) = setup(&overrides, &generators)?;
            let word: Word = match word {
                Some(w) => w.parse().map_err(|e: pongcert_core::exactnum::ExactError| parse_err(e.into()))?,
                None => Word::generator(0),
            };
            let m = gens.evaluate(&word).map_err(|e| parse_err(e.into()))?;
            let prec = cfg.precisions[0];
            let fail = |e: pongcert_core::spectra::SpectraError| Exit { code: EXIT_PIPELINE, error: e.into() };
            let report = SpectrumReport {
                eigen: eigen_report(&m, &s, prec).map_err(fail)?,
                separation: check_separation(&m, &s).map_err(fail)?,
                gaps: l1_gap_report(&m, &s).map_err(fail)?,
                word,
                matrix: m,
            };
            let _ = out.write_all(to_json(&report).as_bytes());
            if pretty {
                for iv in &report.eigen.archimedean_moduli {
                    let _ = writeln!(err, "|lambda| in [{:.9}, {:.9}]", to_f64(&iv.lo), to_f64(&iv.hi));
                }
                let _ = writeln!(err, "separation product {:.6}", to_f64(&report.separation.product_over_s));
            }
            Ok(())
        }
    }
}
