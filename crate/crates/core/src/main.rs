use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hermcodes::acceptance::{self, Status};
use hermcodes::bounds::{self, TABLE_QS};
use hermcodes::codes::{self, DistanceMethod, ENUM_GUARD};
use hermcodes::curve::{prime_power, Hermitian};
use hermcodes::ff::ConwayTable;
use hermcodes::gaps::{gap_set_formula, gap_set_oracle};
use hermcodes::witness7::{self, LiftSystem, WitnessInput};
use hermcodes::{Error, Result};

#[derive(Parser)]
#[command(name = "hermcodes", version, about = "AG codes on the Hermitian curve from a degree-3 place")]
struct Cli {
    /// Conway polynomial table to use instead of the bundled one
    #[arg(long, global = true)]
    conway_table: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct PlaceArgs {
    /// pick the degree-3 place at random with this seed (default: the first one)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weierstrass gaps at a degree-3 place
    Gaps {
        #[arg(long)]
        q: u32,
        /// compute by dimension jumps instead of the closed form
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        place: PlaceArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// All distance bounds for one m or a range of m
    Bounds {
        #[arg(long)]
        q: u32,
        #[arg(long, conflicts_with = "m_range")]
        m: Option<u32>,
        /// inclusive range `a..b`
        #[arg(long)]
        m_range: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Values of m where the three-case bound beats the one-point code, as CSV
    Table {
        /// comma-separated q values (default: 5,7,8,9,11,13,16)
        #[arg(long, value_delimiter = ',')]
        q: Vec<u32>,
    },
    /// Generator matrix of C_L(D, A_1), C_L(D, mP) or C_L(D, A_2)
    BuildCode {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "a1")]
        divisor: TagArg,
        #[command(flatten)]
        place: PlaceArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum distance of C_L(D, A_1) by enumeration
    MinDist {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        #[command(flatten)]
        place: PlaceArgs,
        /// lift the 2^26 enumeration limit
        #[arg(long)]
        guard_override: bool,
    },
    /// Solve for the q=7 witness curve and run its checks
    VerifyWitness {
        /// JSON witness input replacing the embedded constants
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "reduced")]
        system: SystemArg,
        /// skip the orthogonality check against C_L(D, mP)
        #[arg(long)]
        no_orthogonality: bool,
    },
    /// Run the acceptance checks
    Selftest {
        #[arg(long, default_value_t = 20240611)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TagArg {
    A1,
    Mp,
    A2,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Full,
    Dual,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    Reduced,
    Full,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_table(path: &Option<PathBuf>) -> Result<ConwayTable> {
    match path {
        Some(p) => ConwayTable::load(p),
        None => ConwayTable::from_env_or_builtin(),
    }
}

fn parse_range(s: &str) -> Result<(u32, u32)> {
    let (a, b) = s.split_once("..").ok_or_else(|| Error::Precondition(format!("range `{s}` is not of the form a..b")))?;
    let p = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Precondition(format!("bad number `{t}` in range")));
    let (a, b) = (p(a)?, p(b)?);
    if a > b {
        return Err(Error::Precondition(format!("empty range {a}..{b}")));
    }
    Ok((a, b))
}

fn emit(s: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(s.as_bytes())?;
    if !s.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)?)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Gaps { q, oracle, place, format } => {
            let gs = if oracle {
                let table = load_table(&cli.conway_table)?;
                let h = Hermitian::new(q, &table)?;
                gap_set_oracle(&h, &h.place_by_seed(place.seed)?)?
            } else {
                if prime_power(q).is_none() {
                    return Err(Error::Precondition(format!("q = {q} is not a prime power")));
                }
                gap_set_formula(q)
            };
            match format {
                Format::Json => emit(&json(&gs)?)?,
                _ => {
                    let gaps: Vec<String> = gs.gaps.iter().map(|g| g.to_string()).collect();
                    let runs: Vec<String> = gs.runs.iter().map(|r| format!("{}..{} (u={})", r.start, r.end, r.u)).collect();
                    emit(&format!("q={q}\ngaps: {}\nruns: {}\n", gaps.join(", "), runs.join(", ")))?;
                }
            }
        }
        Cmd::Bounds { q, m, m_range, format } => {
            let ms: Vec<u32> = match (m, m_range) {
                (Some(m), _) => vec![m],
                (None, Some(r)) => {
                    let (a, b) = parse_range(&r)?;
                    (a..=b).collect()
                }
                (None, None) => {
                    let (a, b) = bounds::code_m_range(q);
                    (a..=b).collect()
                }
            };
            let reports = ms.iter().map(|&m| bounds::report(q, m)).collect::<Result<Vec<_>>>()?;
            match format {
                Format::Json if reports.len() == 1 => emit(&json(&reports[0])?)?,
                Format::Json => emit(&json(&reports)?)?,
                _ => {
                    let opt = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
                    let mut s = String::from("q,m,m1,m0,n,k,delta,mm,main,dstar,one_point_true,xing_chen,singleton\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                            r.q,
                            r.m,
                            r.m1,
                            r.m0,
                            r.n,
                            r.k,
                            r.delta,
                            opt(r.mm.map(|x| x.bound)),
                            opt(r.main.map(|x| x.guaranteed)),
                            opt(r.dstar),
                            opt(r.one_point_true.map(|x| x.d_true)),
                            opt(r.xing_chen.as_ref().map(|x| x.eval.d_bound)),
                            r.singleton
                        ));
                    }
                    emit(&s)?;
                }
            }
        }
        Cmd::Table { q } => {
            let qs = if q.is_empty() { TABLE_QS.to_vec() } else { q };
            emit(&bounds::table_csv(&qs)?)?;
        }
        Cmd::BuildCode { q, m, divisor, place, format, out } => {
            let table = load_table(&cli.conway_table)?;
            let h = Hermitian::new(q, &table)?;
            let p = h.place_by_seed(place.seed)?;
            let code = match divisor {
                TagArg::A1 => codes::build_cl_a1(&h, &p, m)?,
                TagArg::Mp => codes::build_cl_mp(&h, &p, m)?,
                TagArg::A2 => codes::build_cl_a2(&h, &p, m)?,
            };
            let text = match format {
                Format::Json => json(&code.to_json())?,
                _ => code.to_grid(),
            };
            match out {
                Some(path) => {
                    std::fs::write(&path, text.as_bytes())?;
                    eprintln!("wrote {}x{} generator to {}", code.k(), code.n(), path.display());
                }
                None => emit(&text)?,
            }
        }
        Cmd::MinDist { q, m, method, place, guard_override } => {
            let table = load_table(&cli.conway_table)?;
            let h = Hermitian::new(q, &table)?;
            let p = h.place_by_seed(place.seed)?;
            let code = codes::build_cl_a1(&h, &p, m)?;
            let method = match method {
                MethodArg::Full => DistanceMethod::Full,
                MethodArg::Dual => DistanceMethod::Dual,
                MethodArg::Auto => DistanceMethod::Auto,
            };
            let guard = if guard_override { u64::MAX } else { ENUM_GUARD };
            let res = codes::min_distance_exact(&code.generator, method, guard)?;
            let rep = bounds::report(q, m)?;
            if (res.d as i64) < rep.best_lower() || res.d as i64 > rep.best_upper() {
                return Err(Error::Consistency(format!("exact distance {} outside [{}, {}]", res.d, rep.best_lower(), rep.best_upper())));
            }
            let v = serde_json::json!({
                "q": q, "m": m, "n": code.n(), "k": code.k(), "d": res.d,
                "method": res.method, "words_visited": res.words_visited,
                "lower_bound": rep.best_lower(), "upper_bound": rep.best_upper(),
                "weight_distribution": res.weight_distribution,
            });
            emit(&json(&v)?)?;
        }
        Cmd::VerifyWitness { input, system, no_orthogonality } => {
            let table = load_table(&cli.conway_table)?;
            let (h, inp) = match input {
                Some(path) => {
                    let inp = WitnessInput::from_json_file(&path)?;
                    (Hermitian::new(inp.q, &table)?, inp)
                }
                None => witness7::embedded_setup(&table)?,
            };
            let system = match system {
                SystemArg::Reduced => LiftSystem::Reduced,
                SystemArg::Full => LiftSystem::Full,
            };
            let rep = witness7::verify(&h, &inp, system, !no_orthogonality)?;
            emit(&json(&rep)?)?;
            eprintln!("{}", rep.conclusion);
            if rep.minimum_distance.is_none() && !(rep.multiplicity.passed && rep.infinity.passed) {
                return Ok(ExitCode::from(3));
            }
        }
        Cmd::Selftest { seed } => {
            let table = match load_table(&cli.conway_table) {
                Ok(t) => t,
                Err(e) => {
                    println!("conway table FAIL: {e}");
                    return Ok(ExitCode::from(e.exit_code() as u8));
                }
            };
            let outcomes = acceptance::run_all(&table, seed);
            for o in &outcomes {
                println!("{}", o.line());
            }
            let failed = outcomes.iter().filter(|o| o.status == Status::Fail).count();
            println!(
                "{} passed, {failed} failed, {} skipped",
                outcomes.iter().filter(|o| o.status == Status::Pass).count(),
                outcomes.iter().filter(|o| o.status == Status::Skip).count()
            );
            if failed > 0 {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
