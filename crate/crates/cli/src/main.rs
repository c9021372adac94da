//! `semilocal`: command-line front end.
//!
//! Every flag can also be set through an environment variable named
//! `SEMILOCAL_<FLAG>` (for example `SEMILOCAL_BUDGET`); a flag given on the
//! command line always wins.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semilocal::batch::{parse_manifest, run_row};
use semilocal::closure::{compute_closure, last_fall_degree};
use semilocal::cryptosystem::{keygen_with_exponent, Ciphertext, KeyPair, PublicKey, Scheme};
use semilocal::instances::{random_instance, InstanceParams};
use semilocal::jacobian::attack_square_1local;
use semilocal::semilocal::{brute_zero_set, solve_closed, solve_rational, SemiLocalInstance, SolveReport, SolverConfig};
use semilocal::text::{format_matrix, format_vector, parse_vector};
use semilocal::weil::{dembowski_ostrom, weil_descent, WeilBasis};
use semilocal::{Error, Field, PolySystem};

#[derive(Parser)]
#[command(name = "semilocal", version, about = "Semi-local polynomial systems over finite fields")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output style: human-readable text or `key=value` lines.
    #[arg(long, global = true, value_enum, default_value = "text", env = "SEMILOCAL_FORMAT")]
    format: Format,
    /// Largest number of candidate points enumerated.
    #[arg(long, global = true, default_value_t = 1 << 24, env = "SEMILOCAL_BUDGET")]
    budget: u64,
    /// Largest monomial count of a closure built by a solver.
    #[arg(long, global = true, default_value_t = 200_000, env = "SEMILOCAL_CLOSURE_BUDGET")]
    closure_budget: u64,
    /// Largest extension degree of the point field.
    #[arg(long, global = true, default_value_t = 12, env = "SEMILOCAL_MAX_EXT")]
    max_ext: u32,
    /// Write the main artifact here instead of standard output.
    #[arg(long, global = true, env = "SEMILOCAL_OUT")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Square1,
    Nonsquare2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cube,
}

#[derive(Subcommand)]
enum Command {
    /// Basis of the degree-bounded closure V_{F,d}.
    Closure {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, visible_alias = "cap", env = "SEMILOCAL_CAP")]
        degree: usize,
    },
    /// Last fall degree, certified against a Gröbner basis.
    Lastfall {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, env = "SEMILOCAL_CAP")]
        cap: usize,
    },
    /// All zeros with coordinates in GF(q^N) by pruned enumeration.
    Brute {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
    /// Seeded random semi-local instance with radical blocks.
    Generate {
        #[arg(long, env = "SEMILOCAL_FIELD")]
        field: String,
        #[arg(long, default_value_t = 1)]
        c: usize,
        #[arg(long, default_value_t = 2)]
        blocks: usize,
        #[arg(long, default_value_t = 3)]
        max_points: usize,
        #[arg(long, default_value_t = 1)]
        min_points: usize,
        /// Every block gets exactly one rational point.
        #[arg(long)]
        unique_rational: bool,
        #[arg(long, env = "SEMILOCAL_SEED")]
        seed: Option<u64>,
    },
    /// Closed points of an instance.
    SolveClosed {
        #[arg(long)]
        instance: PathBuf,
        /// Closure degree; defaults to the largest block last fall degree.
        #[arg(long)]
        cprime: Option<usize>,
        /// Also compute d_G exactly and compare it with s + c' ceil(log2 s).
        #[arg(long)]
        check_bound: bool,
    },
    /// Rational points of an instance.
    SolveRational {
        #[arg(long)]
        instance: PathBuf,
        /// Closure degree; defaults to Δp.
        #[arg(long, env = "SEMILOCAL_CAP")]
        cap: Option<usize>,
        /// Close all the way to the cap instead of stopping once certified.
        #[arg(long)]
        full_cap: bool,
    },
    /// Weil descent of a system over GF(q^n) to GF(q).
    Descend {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long)]
        ext_degree: u32,
        /// File with n comma-separated elements of the extension.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Random extended Dembowski–Ostrom polynomial, as a system file.
    DoPoly {
        /// Field of the polynomial, GF(q^n).
        #[arg(long, env = "SEMILOCAL_FIELD")]
        field: String,
        /// Base field GF(q) whose Frobenius powers appear in the exponents.
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, env = "SEMILOCAL_SEED")]
        seed: Option<u64>,
    },
    /// Key pair; writes key.json and pub.json into the output directory.
    Keygen {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, env = "SEMILOCAL_FIELD")]
        field: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        exponent: u32,
        #[arg(long, env = "SEMILOCAL_SEED")]
        seed: Option<u64>,
    },
    /// Evaluates a public key at a plaintext.
    Encrypt {
        #[arg(long = "pub")]
        public: PathBuf,
        /// Comma-separated plaintext.
        #[arg(long)]
        msg: String,
    },
    /// Inverts a ciphertext with the private key; rejects values outside the image.
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        ct: PathBuf,
    },
    /// Determinant-of-Jacobian key recovery.
    Attack {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long, value_enum, default_value = "cube")]
        family: Family,
    },
    /// Runs a JSON manifest of experiment rows.
    Batch {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value_t = 1, env = "SEMILOCAL_JOBS")]
        jobs: usize,
        /// Add per-row wall-clock times (makes the table nondeterministic).
        #[arg(long)]
        timings: bool,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::Parse(_) | Error::InvalidField(_) | Error::Dimension(_) | Error::FieldMismatch(_) | Error::Io(_) => 2,
            Error::Precondition(_) | Error::DivisionByZero => 3,
            Error::Budget(_) => 4,
            Error::Internal(_) => 5,
            Error::NotApplicable(_) => 6,
            Error::InvalidCiphertext | Error::AttackFailed(_) => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })
}

fn with_path<T>(path: &Path, r: semilocal::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_system(path: &Path) -> Result<PolySystem, Failure> {
    with_path(path, PolySystem::parse(&read(path)?))
}

fn load_instance(path: &Path) -> Result<SemiLocalInstance, Failure> {
    with_path(path, SemiLocalInstance::from_json(&read(path)?))
}

/// Seed from the clock, printed so the run can be repeated.
fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let t = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap_or_default();
        let s = t.as_nanos() as u64 ^ 0x9e37_79b9_7f4a_7c15;
        eprintln!("seed={s}");
        s
    })
}

/// Collects `key=value` pairs and a text rendering.
struct Report {
    format: Format,
    text: String,
    machine: String,
}

impl Report {
    fn new(format: Format) -> Report {
        Report { format, text: String::new(), machine: String::new() }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.machine, "{key}={value}");
    }

    fn line(&mut self, s: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{s}");
    }

    /// Same content in both formats.
    fn both(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{key}: {value}");
        self.kv(key, value);
    }

    fn render(&self) -> &str {
        match self.format {
            Format::Text => &self.text,
            Format::Machine => &self.machine,
        }
    }
}

fn emit(common: &Common, report: &Report) -> CmdResult {
    match &common.out {
        Some(p) => write_file(p, report.render()),
        None => {
            print!("{}", report.render());
            Ok(())
        }
    }
}

fn solver_config(common: &Common) -> SolverConfig {
    SolverConfig {
        budget: common.budget,
        max_ext_degree: common.max_ext,
        closure_budget: common.closure_budget,
        ..Default::default()
    }
}

fn report_solution(r: &mut Report, rep: &SolveReport) {
    let f = &rep.point_field;
    r.both("point_field", f.spec());
    r.both("s", rep.s);
    if let Some(c) = rep.c_prime {
        r.both("c_prime", c);
    }
    if let Some(d) = rep.delta {
        r.both("delta", d);
    }
    r.both("cap", rep.cap);
    r.both("closure_degree", rep.closure_degree);
    r.both("eliminated", rep.eliminated);
    r.both("remaining", rep.remaining);
    if let Some(b) = &rep.bound {
        r.both("d_g", b.d_g);
        r.both("bound", b.bound);
        r.both("bound_certified", b.certified);
        r.both("bound_holds", b.holds);
    }
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    for p in &rep.points {
        r.line(format!("  ({})", format_vector(f, p)));
        r.kv("point", format_vector(f, p));
    }
}

fn run(cli: Cli) -> CmdResult {
    let common = &cli.common;
    let mut r = Report::new(common.format);
    match cli.command {
        Command::Closure { system, degree } => {
            let sys = load_system(&system)?;
            let basis = compute_closure(&sys, degree);
            r.both("degree", basis.degree());
            r.both("rank", basis.rank());
            r.line("rows:");
            for row in basis.rows() {
                r.line(format!("  {row}"));
                r.kv("row", row);
            }
            emit(common, &r)
        }
        Command::Lastfall { system, cap } => {
            let sys = load_system(&system)?;
            let lf = last_fall_degree(&sys, cap)?;
            r.line(lf.summary());
            r.kv("d_F", lf.d_f);
            r.kv("certified", lf.certified);
            r.kv("falls", lf.fall_degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","));
            r.kv("stabilization_degree", lf.stabilization_degree);
            emit(common, &r)
        }
        Command::Brute { system, ext } => {
            let sys = load_system(&system)?;
            let rep = brute_zero_set(&sys, ext, common.budget)?;
            report_solution(&mut r, &rep);
            emit(common, &r)
        }
        Command::Generate { field, c, blocks, max_points, min_points, unique_rational, seed } => {
            let field: Field = field.parse()?;
            let seed = resolve_seed(seed);
            let params = InstanceParams {
                c,
                blocks,
                max_block_points: max_points,
                min_points,
                unique_rational,
                ..Default::default()
            };
            let inst = random_instance(&field, &params, seed)?;
            match &common.out {
                Some(p) => write_file(p, &inst.to_json()),
                None => {
                    print!("{}", inst.to_json());
                    Ok(())
                }
            }
        }
        Command::SolveClosed { instance, cprime, check_bound } => {
            let inst = load_instance(&instance)?;
            let mut cfg = solver_config(common);
            cfg.check_bound = check_bound;
            let rep = solve_closed(&inst, cprime, &cfg)?;
            report_solution(&mut r, &rep);
            emit(common, &r)
        }
        Command::SolveRational { instance, cap, full_cap } => {
            let inst = load_instance(&instance)?;
            let mut cfg = solver_config(common);
            cfg.early_stop = !full_cap;
            let rep = solve_rational(&inst, cap, &cfg)?;
            report_solution(&mut r, &rep);
            emit(common, &r)
        }
        Command::Descend { poly, base, ext_degree, basis } => {
            let sys = load_system(&poly)?;
            let base: Field = base.parse()?;
            let wb = match basis {
                None => WeilBasis::standard(&base, ext_degree)?,
                Some(path) => {
                    let ext = base.extension(ext_degree)?;
                    if sys.field() != &ext {
                        return Err(Error::FieldMismatch(format!("system over {}, expected {ext}", sys.field())).into());
                    }
                    let theta = with_path(&path, parse_vector(&ext, &read(&path)?))?;
                    WeilBasis::new(&base, &ext, theta)?
                }
            };
            let res = weil_descent(&sys, &wb)?;
            let ext = wb.ext();
            r.both("theta", format_vector(ext, wb.theta()));
            r.both("verified", res.verify_semilocal()?);
            let hat = res.hat_f.to_string();
            r.line("hat_f:");
            r.line(hat.trim_end());
            for p in res.hat_f.polys() {
                r.kv("hat_f", p);
            }
            r.line("lam:");
            r.line(format_matrix(&res.lam).trim_end());
            r.line("mu:");
            r.line(format_matrix(&res.mu).trim_end());
            for row in res.lam.data() {
                r.kv("lam_row", format_vector(ext, row));
            }
            for row in res.mu.data() {
                r.kv("mu_row", format_vector(ext, row));
            }
            emit(common, &r)
        }
        Command::DoPoly { field, base, r: terms, seed } => {
            let ext: Field = field.parse()?;
            let base: Field = base.parse()?;
            let seed = resolve_seed(seed);
            let f = dembowski_ostrom(&ext, base.q(), terms, seed)?;
            let sys = PolySystem::new(vec![f])?;
            match &common.out {
                Some(p) => write_file(p, &sys.to_string()),
                None => {
                    print!("{sys}");
                    Ok(())
                }
            }
        }
        Command::Keygen { scheme, field, n, exponent, seed } => {
            let field: Field = field.parse()?;
            let seed = resolve_seed(seed);
            let scheme = match scheme {
                SchemeArg::Square1 => Scheme::Square1,
                SchemeArg::Nonsquare2 => Scheme::Nonsquare2,
            };
            let key = keygen_with_exponent(scheme, &field, n, exponent, seed)?;
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            fs::create_dir_all(&dir).map_err(|e| Failure { code: 1, message: format!("{}: {e}", dir.display()) })?;
            write_file(&dir.join("key.json"), &key.to_json())?;
            write_file(&dir.join("pub.json"), &key.public_json())?;
            r.both("fingerprint", key.fingerprint());
            r.both("seed", seed);
            print!("{}", r.render());
            Ok(())
        }
        Command::Encrypt { public, msg } => {
            let pk = with_path(&public, PublicKey::from_json(&read(&public)?))?;
            let field = pk.public.field().clone();
            let x = parse_vector(&field, &msg)?;
            let ct = semilocal::cryptosystem::encrypt(&pk.public, &x)?;
            match &common.out {
                Some(p) => write_file(p, &ct.to_json(&field)),
                None => {
                    print!("{}", ct.to_json(&field));
                    Ok(())
                }
            }
        }
        Command::Decrypt { key, ct } => {
            let kp = with_path(&key, KeyPair::from_json(&read(&key)?))?;
            let (field, c) = with_path(&ct, Ciphertext::from_json(&read(&ct)?))?;
            if field != kp.field {
                return Err(Error::FieldMismatch(format!("ciphertext over {field}, key over {}", kp.field)).into());
            }
            let x = kp.decrypt(&c)?;
            r.line(format_vector(&field, &x));
            r.kv("plaintext", format_vector(&field, &x));
            emit(common, &r)
        }
        Command::Attack { public, family } => {
            let pk = with_path(&public, PublicKey::from_json(&read(&public)?))?;
            let d = match family {
                Family::Cube => 3,
            };
            let rec = attack_square_1local(&pk.public, d)?;
            let json = rec.key.to_json();
            match &common.out {
                Some(p) => write_file(p, &json)?,
                None => print!("{json}"),
            }
            println!("equivalent={}", rec.certified);
            if rec.certified {
                Ok(())
            } else {
                Err(Failure { code: 1, message: "recovered key is not equivalent".into() })
            }
        }
        Command::Batch { manifest, jobs, timings } => {
            let rows = with_path(&manifest, parse_manifest(&read(&manifest)?))?;
            let cfg = solver_config(common);
            let results: Vec<Mutex<Option<String>>> = rows.iter().map(|_| Mutex::new(None)).collect();
            let next = AtomicUsize::new(0);
            let passed = AtomicUsize::new(0);
            let failed = AtomicUsize::new(0);
            std::thread::scope(|s| {
                for _ in 0..jobs.max(1).min(rows.len().max(1)) {
                    s.spawn(|| loop {
                        let i = next.fetch_add(1, Ordering::SeqCst);
                        let Some(row) = rows.get(i) else { break };
                        let t = Instant::now();
                        let mut line = format!(
                            "row={i} kind={} field={} c={} blocks={} seed={}",
                            serde_json::to_value(row.kind).unwrap().as_str().unwrap(),
                            row.field,
                            row.c,
                            row.blocks,
                            row.seed
                        );
                        match run_row(row, &cfg) {
                            Ok(res) => {
                                let _ = write!(line, " status=ok pass={}", res.pass);
                                for (k, v) in &res.fields {
                                    let _ = write!(line, " {k}={v}");
                                }
                                if res.pass { &passed } else { &failed }.fetch_add(1, Ordering::SeqCst);
                            }
                            Err(e) => {
                                let _ = write!(line, " status=error error={:?}", e.to_string());
                                failed.fetch_add(1, Ordering::SeqCst);
                            }
                        }
                        if timings {
                            let _ = write!(line, " ms={}", t.elapsed().as_millis());
                        }
                        *results[i].lock().unwrap() = Some(line);
                    });
                }
            });
            let mut out = String::new();
            for slot in results {
                out.push_str(&slot.into_inner().unwrap().unwrap());
                out.push('\n');
            }
            let (p, f) = (passed.load(Ordering::SeqCst), failed.load(Ordering::SeqCst));
            let rate = if rows.is_empty() { 100.0 } else { 100.0 * p as f64 / rows.len() as f64 };
            let _ = writeln!(out, "rows={} passed={p} failed={f} pass_rate={rate:.1}%", rows.len());
            match &common.out {
                Some(path) => write_file(path, &out),
                None => {
                    print!("{out}");
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
