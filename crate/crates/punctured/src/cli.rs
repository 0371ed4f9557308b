use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use punctured_core::cocycles::MAX_HORIZON;
use punctured_core::*;
use serde_json::{json, Value as Json};

use crate::parse::{self, ErrorKind, ParseError};
use crate::verify::{self, SuiteReport, VerifyError};

/// Exact computations on the formal punctured disc.
#[derive(Parser, Debug)]
#[command(name = "punctured", version)]
struct Cli {
    /// Starting horizon (number of series terms) for computations that expand
    /// compositions; it is doubled on demand.
    #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(i64).range(1..=MAX_HORIZON))]
    prec: i64,
    /// Print results as JSON.
    #[arg(long)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    /// The closed product formula.
    Exact,
    /// `exp res(log f dg/g)`, after splitting off the constant and `t^nu` parts of `f`.
    Explog,
    /// Both, failing unless they agree.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "verbatim")]
enum CocycleName {
    LL,
    LO,
    OO,
    D,
}

impl CocycleName {
    fn cup_tags(self) -> Option<(OneTag, OneTag)> {
        match self {
            CocycleName::LL => Some((OneTag::Lambda, OneTag::Lambda)),
            CocycleName::LO => Some((OneTag::Lambda, OneTag::Omega)),
            CocycleName::OO => Some((OneTag::Omega, OneTag::Omega)),
            CocycleName::D => None,
        }
    }

    fn cocycle(self) -> TwoCocycle {
        match self {
            CocycleName::LL => TwoCocycle::cup(OneTag::Lambda, OneTag::Lambda),
            CocycleName::LO => TwoCocycle::cup(OneTag::Lambda, OneTag::Omega),
            CocycleName::OO => TwoCocycle::cup(OneTag::Omega, OneTag::Omega),
            CocycleName::D => TwoCocycle::det(),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Contou-Carrere symbol CC(f, g).
    Cc {
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
    },
    /// A 2-cocycle evaluated on two group elements `(h=...; phi=...)`.
    Cocycle {
        #[arg(long, value_enum)]
        pair: CocycleName,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "Q")]
        ring: String,
    },
    /// The determinant cocycle D(x, y) on G0, with the window sizes used.
    #[command(name = "detD")]
    DetD {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Lower bound on the size of the block whose determinant is taken.
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value = "Q")]
        ring: String,
    },
    /// The Lie algebra 2-cocycle induced by a group 2-cocycle, on `(s=...; r=...)` elements.
    Lie {
        #[arg(long, value_enum)]
        cocycle: CocycleName,
        #[arg(long)]
        z: String,
        #[arg(long)]
        w: String,
        #[arg(long, default_value = "Q")]
        ring: String,
    },
    /// Run verification suites.
    Verify {
        /// Suite name, or `all`.
        #[arg(long)]
        suite: String,
        /// Ring for the suite; defaults to the suite's own.
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random cases (the range bound for lie_tables).
        #[arg(long)]
        cases: Option<usize>,
        /// Write the report as JSON to this file.
        #[arg(long = "json", value_name = "PATH")]
        json_path: Option<PathBuf>,
    },
}

/// Failure of a command, with its exit code.
enum Failure {
    Usage(String),
    Compute(String),
    /// Verification ran but found failures; the report was already written.
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let hint = match &e {
            Error::InsufficientPrecision { needed, .. } => format!(" (retry with a larger --prec, at least {needed})"),
            _ => String::new(),
        };
        Failure::Compute(format!("{e}{hint}"))
    }
}

fn parsed<T>(what: &str, src: &str, r: Result<T, ParseError>) -> Result<T, Failure> {
    r.map_err(|e| {
        let text = format!("invalid {what}: {}", e.render(src));
        match e.kind {
            ErrorKind::Syntax | ErrorKind::UnboundGenerator => Failure::Usage(text),
            ErrorKind::Elaboration => Failure::Compute(text),
        }
    })
}

fn ring_arg(src: &str) -> Result<Ring, Failure> {
    parsed("--ring", src, parse::ring(src))
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Verification) => 1,
    }
}

fn emit(cli: &Cli, out: &mut dyn Write, plain: &str, value: Json) -> Result<(), Failure> {
    let text = if cli.json { serde_json::to_string_pretty(&value).expect("json values serialize") } else { plain.to_string() };
    writeln!(out, "{text}").map_err(|e| Failure::Compute(format!("cannot write output: {e}")))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Cc { ring, f, g, method } => {
            let r = ring_arg(ring)?;
            let fs = parsed("--f", f, parse::series(f, &r))?;
            let gs = parsed("--g", g, parse::series(g, &r))?;
            let value = match method {
                Method::Exact => cc_exact(&fs, &gs)?,
                Method::Explog => cc_reduced(&fs, &gs)?,
                Method::Both => {
                    let a = cc_exact(&fs, &gs)?;
                    let b = cc_reduced(&fs, &gs)?;
                    if a != b {
                        return Err(Failure::Compute(format!("algorithms disagree: exact gives {a}, explog gives {b}")));
                    }
                    a
                }
            };
            let m = format!("{method:?}").to_lowercase();
            emit(cli, out, &value.to_string(), json!({"command": "cc", "ring": r.to_string(), "f": fs.to_string(), "g": gs.to_string(), "method": m, "value": value.to_string()}))
        }
        Command::Cocycle { pair, x, y, ring } => {
            let r = ring_arg(ring)?;
            let xs = parsed("--x", x, parse::group(x, &r))?;
            let ys = parsed("--y", y, parse::group(y, &r))?;
            let value = match pair.cup_tags() {
                None => det_cocycle_d(&xs, &ys)?,
                Some((l1, l2)) => {
                    let f = eval_one_cocycle(l1, &xs);
                    let g = eval_one_cocycle(l2, &ys);
                    with_horizon(cli.prec, MAX_HORIZON, |upto| cc(&f, &g.compose(&xs.phi, upto)?))?
                }
            };
            emit(cli, out, &value.to_string(), json!({"command": "cocycle", "cocycle": pair.cocycle().tag.to_string(), "ring": r.to_string(), "x": xs.to_string(), "y": ys.to_string(), "value": value.to_string()}))
        }
        Command::DetD { x, y, window, ring } => {
            let r = ring_arg(ring)?;
            let xs = parsed("--x", x, parse::group(x, &r))?;
            let ys = parsed("--y", y, parse::group(y, &r))?;
            let d = det_cocycle_d_detailed(&xs, &ys, *window)?;
            let plain = format!("{}\nblock {} window {}", d.value, d.block, d.window);
            emit(cli, out, &plain, json!({"command": "detD", "ring": r.to_string(), "x": xs.to_string(), "y": ys.to_string(), "value": d.value.to_string(), "block": d.block, "window": d.window}))
        }
        Command::Lie { cocycle, z, w, ring } => {
            let r = ring_arg(ring)?;
            let zs = parsed("--z", z, parse::lie(z, &r))?;
            let ws = parsed("--w", w, parse::lie(w, &r))?;
            let value = lie_extract(&cocycle.cocycle(), &zs, &ws)?;
            let closed = match cocycle {
                CocycleName::D => lie_trace(&zs, &ws)?,
                CocycleName::LL => verify::cup_closed_forms(&zs, &ws)?[0].clone(),
                CocycleName::LO => verify::cup_closed_forms(&zs, &ws)?[1].clone(),
                CocycleName::OO => verify::cup_closed_forms(&zs, &ws)?[2].clone(),
            };
            if closed != value {
                return Err(Failure::Compute(format!("extracted value {value} differs from the closed form {closed}")));
            }
            emit(cli, out, &value.to_string(), json!({"command": "lie", "cocycle": cocycle.cocycle().tag.to_string(), "ring": r.to_string(), "z": zs.to_string(), "w": ws.to_string(), "value": value.to_string()}))
        }
        Command::Verify { suite, ring, seed, cases, json_path } => {
            let r = ring.as_deref().map(ring_arg).transpose()?;
            let names: Vec<&str> = if suite == "all" { verify::SUITES.iter().map(|s| s.name).collect() } else { vec![suite.as_str()] };
            let mut reports = Vec::new();
            for name in names {
                let report = verify::run_suite(name, r.as_ref(), *seed, *cases).map_err(|e| match e {
                    VerifyError::UnknownSuite(_) => Failure::Usage(e.to_string()),
                    VerifyError::Setup(_) => Failure::Compute(e.to_string()),
                })?;
                if !report.passed() {
                    let _ = writeln!(err, "{} failed", report.suite);
                }
                for f in report.failures.iter().take(5) {
                    let _ = writeln!(err, "  case {}: {:?}\n    lhs: {}\n    rhs: {}", f.index, f.inputs, f.lhs, f.rhs);
                }
                reports.push(report);
            }
            let doc = if reports.len() == 1 { serde_json::to_value(&reports[0]) } else { serde_json::to_value(&reports) }.expect("reports serialize");
            let text = serde_json::to_string_pretty(&doc).expect("reports serialize");
            if let Some(path) = json_path {
                std::fs::write(path, format!("{text}\n")).map_err(|e| Failure::Compute(format!("cannot write {}: {e}", path.display())))?;
            }
            let plain: Vec<String> = reports.iter().map(summary).collect();
            emit(cli, out, &plain.join("\n"), doc)?;
            if reports.iter().all(SuiteReport::passed) {
                Ok(())
            } else {
                Err(Failure::Verification)
            }
        }
    }
}

fn summary(r: &SuiteReport) -> String {
    format!("{} {r}", if r.passed() { "PASS" } else { "FAIL" })
}
