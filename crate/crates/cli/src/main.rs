use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::{Level, LevelFilter, Metadata, Record};
use pertinv::finitetype::{
    alternating_sum_sublinks, shift_sum_delta_closed_form, shift_sum_invariant_closed_form,
    shift_sum_q_minus_6d, surgery_shift_alternating_sum, SumLevel,
};
use pertinv::io::{
    finite_type_report, format_rational, invariants_json, parse_presentation_file, read_grid_file,
    surgery_report_json, to_canonical_string, PresentationFile,
};
use pertinv::jones::unknot_grid;
use pertinv::rt::{lens_trivial_contribution, rt_unknot_surgery, z_sphere, RTLevel};
use pertinv::surgery::{
    denominator_bound_check, integerize, lens_space_invariants, perturbative_invariants,
    phi1_lambda_cw, phi1_s1, surgery_report,
};
use pertinv::{Error, RHSInvariants, SurgeryCoeff, SurgeryPresentation};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "pertinv",
    version,
    about = "Perturbative invariants of rational homology spheres"
)]
struct Cli {
    /// Log progress to standard error (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form invariants of the lens space L(p, q).
    Lens {
        #[arg(short, allow_negative_numbers = true)]
        p: i64,
        #[arg(short, allow_negative_numbers = true)]
        q: i64,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Surgery formula on a presentation file ("-" reads standard input).
    Surgery {
        file: PathBuf,
        /// Overrides the file's n_max.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// S_1 and the Casson-Walker invariant from φ_1 data, next to the full engine.
    Hoste { file: PathBuf },
    /// Alternating sum of S_n over all sublinks.
    AltSum {
        file: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Diagrammatic S_n together with the sublink alternating sum.
    DiagramSum {
        file: PathBuf,
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Alternating sum over surgery-coefficient shifts on a knot.
    ShiftSum {
        /// Knot grid fixture; the unknot when omitted.
        #[arg(long)]
        fixture: Option<PathBuf>,
        #[arg(short, allow_negative_numbers = true)]
        p: i64,
        #[arg(short, allow_negative_numbers = true)]
        q: i64,
        #[arg(short)]
        n: usize,
        #[arg(long)]
        n_prime: Option<usize>,
        #[arg(long, value_enum, default_value_t = LevelArg::Delta)]
        level: LevelArg,
    },
    /// Integerized invariants and the denominator bound, for a file or a lens space.
    Integerize {
        file: Option<PathBuf>,
        #[arg(
            short,
            allow_negative_numbers = true,
            requires = "q",
            conflicts_with = "file"
        )]
        p: Option<i64>,
        #[arg(short, allow_negative_numbers = true, requires = "p")]
        q: Option<i64>,
        #[arg(short, default_value_t = 1)]
        n: usize,
    },
    /// Finite-level RT sums for surgeries on an unlink, as CSV.
    RtEval {
        /// Surgery slopes "p/q", comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        surgeries: Vec<String>,
        #[arg(long, default_value_t = 1)]
        k_min: u32,
        #[arg(long, default_value_t = 48)]
        k_max: u32,
        /// Significant digits in the output.
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Runs the built-in consistency suites.
    Selfcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Delta,
    Invariant,
}

struct StderrLogger;

impl log::Log for StderrLogger {
    fn enabled(&self, metadata: &Metadata) -> bool {
        metadata.level() <= log::max_level()
    }

    fn log(&self, record: &Record) {
        if self.enabled(record.metadata()) {
            eprintln!(
                "[{}] {}",
                record.level().as_str().to_lowercase(),
                record.args()
            );
        }
    }

    fn flush(&self) {}
}

static LOGGER: StderrLogger = StderrLogger;

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    if log::set_logger(&LOGGER).is_ok() {
        log::set_max_level(level);
    }
}

/// Loads a presentation; relative fixture paths resolve against the file's directory.
fn load(path: &Path) -> Result<(PresentationFile, SurgeryPresentation), Error> {
    let (text, origin, dir) = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Io(format!("stdin: {e}")))?;
        (s, "<stdin>".to_string(), None)
    } else {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        (text, path.display().to_string(), path.parent())
    };
    let file = parse_presentation_file(&text, &origin)?;
    log::info!(
        "{origin}: {} components, class {}",
        file.components.len(),
        file.class
    );
    let sp = file.to_presentation(dir)?;
    Ok((file, sp))
}

fn parse_slope(s: &str) -> Result<SurgeryCoeff, Error> {
    let bad = || Error::Parse(format!("malformed surgery slope {s:?}, expected p/q"));
    let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
    SurgeryCoeff::new(
        p.trim().parse().map_err(|_| bad())?,
        q.trim().parse().map_err(|_| bad())?,
    )
}

fn integerize_json(inv: &RHSInvariants, n: usize) -> Result<Value, Error> {
    let r = integerize(inv, n)?;
    let d = denominator_bound_check(inv, n)?;
    Ok(json!({
        "n": n,
        "S_int": format_rational(&r.value),
        "integral": r.integral,
        "denominator_check": {
            "value": format_rational(&d.value),
            "primes": d.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "passed": d.passed,
        },
    }))
}

fn rt_csv(surgeries: &[String], k_min: u32, k_max: u32, precision: usize) -> Result<String, Error> {
    let coeffs = surgeries
        .iter()
        .map(|s| parse_slope(s))
        .collect::<Result<Vec<_>, _>>()?;
    if k_min == 0 || k_min > k_max {
        return Err(Error::LevelTooSmall(format!(
            "need 1 <= k-min <= k-max, got {k_min}..{k_max}"
        )));
    }
    let digits = precision.max(1) - 1;
    let mut out = String::from("k,K,re,im,residual\n");
    for k in k_min..=k_max {
        let level = RTLevel::new(k)?;
        let z = rt_unknot_surgery(&coeffs, level)?;
        // Trivial-connection value of the connected sum of lens spaces.
        let mut z_tr = pertinv::ComplexValue::new(1.0, 0.0);
        for c in &coeffs {
            z_tr *= lens_trivial_contribution(c.p(), c.q(), level)?;
        }
        z_tr /= z_sphere(level).powi(coeffs.len() as i32 - 1);
        let residual = (z - z_tr).norm();
        out.push_str(&format!(
            "{k},{},{:.digits$e},{:.digits$e},{:.digits$e}\n",
            level.big_k(),
            z.re,
            z.im,
            residual
        ));
    }
    Ok(out)
}

fn shift_sum_json(
    fixture: Option<&Path>,
    p: i64,
    q: i64,
    n: usize,
    n_prime: Option<usize>,
    level: LevelArg,
) -> Result<Value, Error> {
    let n_prime = n_prime.unwrap_or(n);
    let grid = match fixture {
        Some(path) => read_grid_file(path)?.to_grid()?,
        None => unknot_grid(n.max(n_prime).max(1)),
    };
    let (lvl, name) = match level {
        LevelArg::Delta => (SumLevel::Delta, "delta"),
        LevelArg::Invariant => (SumLevel::Invariant, "invariant"),
    };
    let value = surgery_shift_alternating_sum(&grid, p, q, n, n_prime, lvl)?;
    let mut v = json!({"n": n, "n_prime": n_prime, "p": p, "q": q, "level": name, "value": format_rational(&value)});
    if n_prime == n {
        let closed = match lvl {
            SumLevel::Delta => shift_sum_delta_closed_form(&grid, p, n),
            SumLevel::Invariant => shift_sum_invariant_closed_form(&grid, p, q, n)?,
        };
        v["closed_form"] = json!(format_rational(&closed));
        v["match"] = json!(closed == value);
        if n == 1 && p == 1 && matches!(lvl, SumLevel::Invariant) {
            v["q_minus_6d"] = json!(format_rational(&shift_sum_q_minus_6d(&grid, q)));
        }
    } else if n_prime < n {
        v["closed_form"] = json!("0");
        v["match"] = json!(value == pertinv::Rational::from_integer(0.into()));
    }
    Ok(v)
}

/// Each suite returns `Ok(description)` or `Err(description)`.
fn selfcheck() -> Vec<(&'static str, Result<String, String>)> {
    use pertinv::numtheory::dedekind_sum;
    use pertinv::scalar::{int, ratio};

    let reciprocity = || -> Result<String, String> {
        let mut count = 0;
        for p in 1..=60i64 {
            for q in 1..=60i64 {
                if num_integer_gcd(p, q) != 1 {
                    continue;
                }
                let lhs = dedekind_sum(p, q).map_err(|e| e.to_string())?
                    + dedekind_sum(q, p).map_err(|e| e.to_string())?;
                let rhs = ratio(-1, 4) + (ratio(p, q) + ratio(q, p) + ratio(1, p * q)) / int(12);
                if lhs != rhs {
                    return Err(format!("fails at ({p}, {q})"));
                }
                count += 1;
            }
        }
        Ok(format!("{count} pairs"))
    };
    let two_path = || -> Result<String, String> {
        let mut count = 0;
        for p in 2..=12i64 {
            for q in 1..p {
                if num_integer_gcd(p, q) != 1 {
                    continue;
                }
                let sp = SurgeryPresentation::new(
                    vec![pertinv::Component::new(p, q, 0).map_err(|e| e.to_string())?],
                    None,
                    pertinv::SlopeClass::Bl,
                    unknot_grid(6),
                    None,
                )
                .map_err(|e| e.to_string())?;
                let a = perturbative_invariants(&sp, 6).map_err(|e| e.to_string())?;
                let b = lens_space_invariants(p, q, 6).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!("L({p},{q}) differs"));
                }
                count += 1;
            }
        }
        Ok(format!("{count} lens spaces up to n = 6"))
    };
    let alternating = || -> Result<String, String> {
        let mut count = 0;
        for qs in [[1, 1, 1], [2, -1, 3], [-3, 2, -2]] {
            let mut m = pertinv::MilnorData::new(3);
            m.set_triple(0, 1, 2, 1).map_err(|e| e.to_string())?;
            let grid = pertinv::jones::asl_low_order_grid(&m, 1).map_err(|e| e.to_string())?;
            let comps = qs
                .iter()
                .map(|&q| pertinv::Component::new(1, q, 0))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| e.to_string())?;
            let sp = SurgeryPresentation::new(comps, None, pertinv::SlopeClass::Asl, grid, Some(m))
                .map_err(|e| e.to_string())?;
            let report = finite_type_report(&sp, 1).map_err(|e| e.to_string())?;
            let expected = format_rational(&int(-12 * qs.iter().product::<i64>()));
            if report["match"] != json!(true) || report["alternating_sum"] != json!(expected) {
                return Err(format!("Borromean {qs:?}: {report}"));
            }
            count += 1;
        }
        Ok(format!("{count} Borromean surgeries, both paths"))
    };
    vec![
        ("reciprocity", reciprocity()),
        ("lens two-path", two_path()),
        ("alternating sums", alternating()),
    ]
}

fn num_integer_gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

enum Failure {
    Validation(Error),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::Validation(e)
        }
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    let text = match command {
        Command::Lens { p, q, n_max } => {
            to_canonical_string(&invariants_json(&lens_space_invariants(p, q, n_max)?)?)
        }
        Command::Surgery { file, n_max } => {
            let (pf, sp) = load(&file)?;
            let report = surgery_report(&sp, n_max.unwrap_or(pf.n_max))?;
            to_canonical_string(&surgery_report_json(&report)?)
        }
        Command::Hoste { file } => {
            let (_, sp) = load(&file)?;
            let s1 = phi1_s1(&sp)?;
            let engine = perturbative_invariants(&sp, 1)?.s(1);
            to_canonical_string(&json!({
                "S1": format_rational(&s1),
                "lambda_cw": format_rational(&phi1_lambda_cw(&sp)?),
                "engine_S1": format_rational(&engine),
                "match": s1 == engine,
            }))
        }
        Command::AltSum { file, n } => {
            let (_, sp) = load(&file)?;
            let v = alternating_sum_sublinks(&sp, n)?;
            to_canonical_string(&json!({"order": n, "alternating_sum": format_rational(&v)}))
        }
        Command::DiagramSum { file, n } => {
            let (_, sp) = load(&file)?;
            to_canonical_string(&finite_type_report(&sp, n)?)
        }
        Command::ShiftSum {
            fixture,
            p,
            q,
            n,
            n_prime,
            level,
        } => to_canonical_string(&shift_sum_json(
            fixture.as_deref(),
            p,
            q,
            n,
            n_prime,
            level,
        )?),
        Command::Integerize { file, p, q, n } => {
            let inv = match (file, p, q) {
                (Some(file), _, _) => {
                    let (pf, sp) = load(&file)?;
                    perturbative_invariants(&sp, n.max(pf.n_max))?
                }
                (None, Some(p), Some(q)) => lens_space_invariants(p, q, n)?,
                _ => {
                    return Err(Failure::Validation(Error::Parse(
                        "give a presentation file or both -p and -q".into(),
                    )))
                }
            };
            to_canonical_string(&integerize_json(&inv, n)?)
        }
        Command::RtEval {
            surgeries,
            k_min,
            k_max,
            precision,
        } => rt_csv(&surgeries, k_min, k_max, precision)?,
        Command::Selfcheck => {
            let results = selfcheck();
            let mut out = serde_json::Map::new();
            let mut failed = Vec::new();
            for (name, r) in &results {
                let (ok, detail) = match r {
                    Ok(d) => (true, d.clone()),
                    Err(d) => (false, d.clone()),
                };
                if !ok {
                    failed.push(*name);
                }
                out.insert(name.to_string(), json!({"passed": ok, "detail": detail}));
            }
            let text = to_canonical_string(&Value::Object(out));
            if !failed.is_empty() {
                print!("{text}");
                return Err(Failure::Internal(format!(
                    "selfcheck failed: {}",
                    failed.join(", ")
                )));
            }
            text
        }
    };
    Ok(text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging(cli.verbose);
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Validation(e)) => {
            log::log!(Level::Error, "{e}");
            if log::max_level() < LevelFilter::Error {
                eprintln!("error: {e}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
