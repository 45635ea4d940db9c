//! `wittdeg` — exact Witt arithmetic, Hopf verification and degeneration
//! reports from the command line.
//!
//! Exit codes: 0 success, 2 unsupported regime or characteristic,
//! 3 verification failure, 64 usage error (bad flags, non-prime p,
//! malformed expressions).

use std::collections::BTreeSet;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use wittdeg::effmodel::degenerate;
use wittdeg::text::{collect_idents, parse_base, parse_mpoly};
use wittdeg::verify::run_verify;
use wittdeg::{
    frobenius, phi, w2_add, w2_neg, w2_sub, BaseElement, ConductorSpec, Error, HopfPresentation,
    MPoly, VarSet, WittPair,
};

const EXIT_OK: u8 = 0;
const EXIT_UNSUPPORTED: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "wittdeg",
    version,
    about = "Exact length-2 Witt vectors, twisted group schemes and effective models of degenerating Z/p^2 covers",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Length-2 Witt vector arithmetic on symbolic pairs
    Witt {
        #[command(subcommand)]
        op: WittCmd,
    },
    /// Verify the Hopf presentation of the rank-p^2 kernel K(lambda, nu)
    Hopf {
        #[command(subcommand)]
        op: HopfCmd,
    },
    /// Compute the effective model for one conductor pair
    Degenerate {
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        m1: i64,
        #[arg(long, allow_hyphen_values = true)]
        m2: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run degenerations over a grid and write a JSON report array
    Sweep {
        #[arg(long = "p-list", value_delimiter = ',', required = true)]
        p_list: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "A,B")]
        regimes: Vec<String>,
        #[arg(long = "n1-max", default_value_t = 1)]
        n1_max: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the per-prime identity and example suites
    Verify {
        #[arg(long = "p-list", value_delimiter = ',', default_value = "3,5,7")]
        p_list: Vec<u64>,
    },
}

#[derive(Args)]
struct WittCommon {
    #[arg(long)]
    p: u64,
    /// twist parameter, a base-ring expression in pi
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    lambda: String,
    /// scalar parameter of the isogeny
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    nu: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum WittCmd {
    /// (a1,a2) + (b1,b2) in W_2^lambda
    Add {
        #[command(flatten)]
        common: WittCommon,
        a1: String,
        a2: String,
        b1: String,
        b2: String,
    },
    /// -(a1,a2) in W_2^lambda
    Neg {
        #[command(flatten)]
        common: WittCommon,
        a1: String,
        a2: String,
    },
    /// (a1,a2) - (b1,b2) in W_2^lambda
    Sub {
        #[command(flatten)]
        common: WittCommon,
        a1: String,
        a2: String,
        b1: String,
        b2: String,
    },
    /// coordinate-wise p-th power W_2^lambda -> W_2^(lambda^p)
    Frobenius {
        #[command(flatten)]
        common: WittCommon,
        a1: String,
        a2: String,
    },
    /// the isogeny phi_(lambda,nu) = F - I, by group subtraction
    Phi {
        #[command(flatten)]
        common: WittCommon,
        a1: String,
        a2: String,
    },
}

#[derive(Subcommand)]
enum HopfCmd {
    /// Build K(lambda,nu) (or Z/p^2 at lambda=nu=1) and run the axiom suite
    Check {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        nu: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::NotPrime(_)
        | Error::Parse { .. }
        | Error::UnknownVariable(_)
        | Error::BinomialRange { .. } => EXIT_USAGE,
        Error::UnsupportedRegime { .. } | Error::UnsupportedCharTwo(_) | Error::KernelCharTwo => {
            EXIT_UNSUPPORTED
        }
        _ => EXIT_VERIFICATION,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code_for(&e))
}

#[derive(Serialize)]
struct PairOut {
    first: String,
    second: String,
}

fn parse_pair_ring(exprs: &[&String]) -> Result<wittdeg::Vars, Error> {
    let mut names: BTreeSet<String> = BTreeSet::new();
    for e in exprs {
        names.extend(collect_idents(e)?);
    }
    VarSet::new(names.into_iter().collect::<Vec<_>>())
}

fn print_pair(pair: &WittPair, format: Format) {
    match format {
        Format::Text => println!("({}, {})", pair.first, pair.second),
        Format::Json => {
            let out = PairOut {
                first: pair.first.to_string(),
                second: pair.second.to_string(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialize"));
        }
    }
}

fn run_witt(op: WittCmd) -> Result<(), Error> {
    let (common, exprs): (&WittCommon, Vec<&String>) = match &op {
        WittCmd::Add {
            common,
            a1,
            a2,
            b1,
            b2,
        }
        | WittCmd::Sub {
            common,
            a1,
            a2,
            b1,
            b2,
        } => (common, vec![a1, a2, b1, b2]),
        WittCmd::Neg { common, a1, a2 }
        | WittCmd::Frobenius { common, a1, a2 }
        | WittCmd::Phi { common, a1, a2 } => (common, vec![a1, a2]),
    };
    let p = common.p;
    wittdeg::PrimeCtx::new(p)?;
    let lambda = parse_base(p, &common.lambda)?;
    let nu = parse_base(p, &common.nu)?;
    let vars = parse_pair_ring(&exprs)?;
    let parse = |src: &String| -> Result<MPoly, Error> { parse_mpoly(p, &vars, src) };
    let result = match &op {
        WittCmd::Add { a1, a2, b1, b2, .. } => {
            let a = WittPair::new(parse(a1)?, parse(a2)?);
            let b = WittPair::new(parse(b1)?, parse(b2)?);
            w2_add(&lambda, &a, &b)
        }
        WittCmd::Sub { a1, a2, b1, b2, .. } => {
            let a = WittPair::new(parse(a1)?, parse(a2)?);
            let b = WittPair::new(parse(b1)?, parse(b2)?);
            w2_sub(&lambda, &a, &b)
        }
        WittCmd::Neg { a1, a2, .. } => {
            let a = WittPair::new(parse(a1)?, parse(a2)?);
            w2_neg(&lambda, &a)
        }
        WittCmd::Frobenius { a1, a2, .. } => {
            let a = WittPair::new(parse(a1)?, parse(a2)?);
            frobenius(&a)
        }
        WittCmd::Phi { a1, a2, .. } => {
            let a = WittPair::new(parse(a1)?, parse(a2)?);
            phi(&lambda, &nu, &a)
        }
    };
    print_pair(&result, common.format);
    Ok(())
}

#[derive(Serialize)]
struct HopfCheckOut {
    rank: u64,
    coassoc: bool,
    counit: bool,
    relations: bool,
    antipode: bool,
    fiber_class: Option<String>,
}

fn run_hopf_check(p: u64, lambda: &str, nu: &str, format: Format) -> Result<bool, Error> {
    wittdeg::PrimeCtx::new(p)?;
    let lambda = parse_base(p, lambda)?;
    let nu = parse_base(p, nu)?;
    let one = BaseElement::one(p);
    let h = if lambda == one && nu == one {
        HopfPresentation::make_zp2(p)?
    } else {
        HopfPresentation::make_kernel(&lambda, &nu, p)?
    };
    let coassoc = h.check_coassoc();
    let counit = h.check_counit();
    let relations = h.check_relations();
    let antipode = h.check_antipode();
    let fiber_class = h
        .special_fiber()
        .map(|f| f.classify_fiber().to_string())
        .ok();
    let out = HopfCheckOut {
        rank: h.rank(),
        coassoc: coassoc.ok,
        counit: counit.ok,
        relations: relations.ok,
        antipode: antipode.ok,
        fiber_class,
    };
    let all_ok = out.coassoc && out.counit && out.relations && out.antipode && out.rank == p * p;
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serialize")),
        Format::Text => {
            println!("presentation: rank {} (expected {})", out.rank, p * p);
            for (name, outcome) in [
                ("coassociativity", &coassoc),
                ("counit", &counit),
                ("relations", &relations),
                ("antipode", &antipode),
            ] {
                if outcome.ok {
                    println!("{name:16} ok");
                } else {
                    println!("{name:16} FAIL  {}", outcome.describe());
                }
            }
            match &out.fiber_class {
                Some(fc) => println!("{:16} {fc}", "special fibre"),
                None => println!("{:16} (not an integral model)", "special fibre"),
            }
        }
    }
    Ok(all_ok)
}

fn run_sweep(
    p_list: &[u64],
    regimes: &[String],
    n1_max: i64,
    out_path: &PathBuf,
) -> Result<(), Error> {
    let mut specs = Vec::new();
    for &p in p_list {
        wittdeg::PrimeCtx::new(p)?;
        for regime in regimes {
            match regime.as_str() {
                "A" | "a" => specs.push(ConductorSpec::new(p, 0, -(p as i64))?),
                "B" | "b" => {
                    for n1 in 1..=n1_max.max(1) {
                        specs.push(ConductorSpec::new(p, -((p * p) as i64) * n1, 0)?);
                    }
                }
                other => {
                    return Err(Error::Unsupported(format!(
                        "unknown regime `{other}` (supported: A, B)"
                    )))
                }
            }
        }
    }
    // runs are independent and pure; fan out, then emit in spec order
    let mut reports = vec![None; specs.len()];
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (i, spec) in specs.iter().enumerate() {
            handles.push((i, scope.spawn(move || degenerate(spec))));
        }
        for (i, handle) in handles {
            reports[i] = Some(handle.join().expect("report thread"));
        }
    });
    let mut collected = Vec::with_capacity(reports.len());
    for (spec, report) in specs.iter().zip(reports) {
        let report = report.unwrap()?;
        eprintln!(
            "degenerate p={} m1={} m2={}: {}",
            spec.p(),
            spec.m1(),
            spec.m2(),
            report.verdict
        );
        collected.push(report);
    }
    let json = serde_json::to_string_pretty(&collected).expect("serialize");
    let mut file = std::fs::File::create(out_path)
        .map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", out_path.display())))?;
    file.write_all(json.as_bytes())
        .and_then(|_| file.write_all(b"\n"))
        .map_err(|e| Error::Unsupported(format!("cannot write {}: {e}", out_path.display())))?;
    eprintln!(
        "wrote {} reports to {}",
        collected.len(),
        out_path.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match cli.cmd {
        Cmd::Witt { op } => match run_witt(op) {
            Ok(()) => ExitCode::from(EXIT_OK),
            Err(e) => fail(e),
        },
        Cmd::Hopf {
            op:
                HopfCmd::Check {
                    p,
                    lambda,
                    nu,
                    format,
                },
        } => match run_hopf_check(p, &lambda, &nu, format) {
            Ok(true) => ExitCode::from(EXIT_OK),
            Ok(false) => ExitCode::from(EXIT_VERIFICATION),
            Err(e) => fail(e),
        },
        Cmd::Degenerate { p, m1, m2, format } => {
            let spec = match ConductorSpec::new(p, m1, m2) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            match degenerate(&spec) {
                Ok(report) => {
                    match format {
                        Format::Text => print!("{}", report.to_text()),
                        Format::Json => println!("{}", report.to_json()),
                    }
                    ExitCode::from(EXIT_OK)
                }
                Err(e) => fail(e),
            }
        }
        Cmd::Sweep {
            p_list,
            regimes,
            n1_max,
            out,
        } => match run_sweep(&p_list, &regimes, n1_max, &out) {
            Ok(()) => ExitCode::from(EXIT_OK),
            Err(e) => fail(e),
        },
        Cmd::Verify { p_list } => match run_verify(&p_list) {
            Ok(summary) => {
                print!("{}", summary.to_text());
                if summary.all_pass() {
                    ExitCode::from(EXIT_OK)
                } else {
                    ExitCode::from(EXIT_VERIFICATION)
                }
            }
            Err(e) => fail(e),
        },
    }
}
