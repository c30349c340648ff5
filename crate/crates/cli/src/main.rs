//! `aflt`: command-line front end.
//!
//! Exit status is 0 on success, 1 for bad input (arguments, files, pairs
//! outside the enumeration) and 2 when a computed object fails its own
//! re-verification.

use std::path::PathBuf;
use std::process::ExitCode;

use aflt::curvedb::CurveDb;
use aflt::diophantine::{
    lookup_solve, mordell_family, point_to_solution, s_point_search, solve_main_filtered, solve_qpow, solve_rn,
    Equation, Family, GammaFilter, MordellCurve,
};
use aflt::ellcurve::two_isogenous_curve;
use aflt::frey::{build_frey, frey_conductor, frey_discriminant, frey_two_structure_report, FreyInstance};
use aflt::pipeline::{
    check_pair, render_report, survey, PairTask, QpowBoundary, ReportFormat, SearchBox, SurveyParams, SurveyReport,
};
use aflt::{Error, Parity};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

const DB_ENV: &str = "AFLT_CURVE_DB";

#[derive(Parser)]
#[command(name = "aflt", version, about = "Condition checks for Cx^2 + q^k y^(2n) = z^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BoxArgs {
    #[arg(long, default_value_t = 200)]
    m_max: u32,
    #[arg(long, default_value_t = 200)]
    gamma_max: u32,
}

impl From<BoxArgs> for SearchBox {
    fn from(b: BoxArgs) -> Self {
        SearchBox {
            m_max: b.m_max,
            gamma_max: b.gamma_max,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Route one pair through the conditions.
    Check {
        #[arg(long = "C", visible_alias = "c")]
        c: u64,
        #[arg(long)]
        q: u64,
        /// `even`/`odd`; exclusive with --k.
        #[arg(long, conflicts_with = "k", required_unless_present = "k")]
        parity: Option<Parity>,
        /// Full exponent; only its parity is used.
        #[arg(long)]
        k: Option<u64>,
        #[command(flatten)]
        bx: BoxArgs,
        /// Curve table for the lookup cross-check [env: AFLT_CURVE_DB].
        #[arg(long)]
        db: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value = "strict")]
        qpow_boundary: QpowBoundary,
        /// Run RN and QPOW on path b as a diagnostic.
        #[arg(long)]
        diagnose_b: bool,
        /// Search Galois-sieve primes for curves behind witnesses.
        #[arg(long)]
        sieve: bool,
        #[arg(long, default_value_t = aflt::sieve::DEFAULT_WITNESS_BOUND)]
        witness_bound: u64,
    },
    /// Check every pair in a range.
    Survey {
        #[arg(long, default_value_t = 70)]
        c_max: u64,
        #[arg(long, default_value_t = 97)]
        q_max: u64,
        /// `even`, `odd` or `both`.
        #[arg(long, default_value = "both")]
        parity: String,
        #[command(flatten)]
        bx: BoxArgs,
        #[arg(long, default_value = "table")]
        format: String,
        #[arg(long, default_value = "strict")]
        qpow_boundary: QpowBoundary,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve one obstruction equation inside a box.
    Solve {
        #[arg(long)]
        equation: Equation,
        #[arg(long = "C", visible_alias = "c")]
        c: u64,
        #[arg(long)]
        q: u64,
        /// Parity of gamma for MAIN; omitted means both.
        #[arg(long)]
        gamma_parity: Option<Parity>,
        #[command(flatten)]
        bx: BoxArgs,
    },
    /// Inspect the Frey curve of C t^2 + q^gamma = 2^m (or of C t^2 + rest = 2^m without --q).
    Frey {
        #[arg(long = "C", visible_alias = "c")]
        c: u64,
        #[arg(long)]
        t: BigInt,
        #[arg(long)]
        m: u32,
        #[arg(long, requires = "gamma")]
        q: Option<u64>,
        #[arg(long, requires = "q")]
        gamma: Option<u32>,
    },
    /// Bounded point search on the Mordell curves of a pair.
    Mordell {
        #[arg(long = "C", visible_alias = "c")]
        c: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1000)]
        height_bound: u64,
        /// Restrict to one curve: b index.
        #[arg(long, requires = "d")]
        b: Option<u32>,
        /// Restrict to one curve: d index.
        #[arg(long, requires = "b")]
        d: Option<u32>,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<String, Failure>;

fn validate_pair(c: u64, q: u64) -> Result<(), Error> {
    if c == 0 || !aflt::intmath::squarefree_check(c) {
        return Err(Error::NotSquarefree(c));
    }
    if q == 2 || !aflt::intmath::is_prime_u64(q) {
        return Err(Error::NotOddPrime(q.to_string()));
    }
    Ok(())
}

fn load_db(path: Option<PathBuf>) -> Result<Option<CurveDb>, Error> {
    let path = path.or_else(|| std::env::var_os(DB_ENV).map(PathBuf::from));
    path.map(|p| CurveDb::load(&p)).transpose()
}

fn to_json(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    c: u64,
    q: u64,
    parity: Option<Parity>,
    k: Option<u64>,
    bx: BoxArgs,
    db: Option<PathBuf>,
    format: &str,
    qpow_boundary: QpowBoundary,
    diagnose_b: bool,
    sieve: bool,
    witness_bound: u64,
) -> CliResult {
    let format: ReportFormat = format.parse()?;
    let parity = parity.or(k.map(Parity::of)).expect("clap enforces one of --parity/--k");
    let mut task = PairTask::new(c, q, parity);
    task.search_box = bx.into();
    task.qpow_boundary = qpow_boundary;
    task.diagnose_b = diagnose_b;
    task.sieve_witnesses = sieve;
    task.witness_bound = witness_bound;
    let db = load_db(db)?;
    let mut verdict = check_pair(&task)?;
    if let Some(k) = k {
        verdict
            .notes
            .push(format!("k = {k} reduced to its parity; 0 <= k < 2n may be assumed"));
    }
    if let Some(db) = &db {
        let found = lookup_solve(c, q, parity, db);
        let list: Vec<String> = found.solutions.iter().map(|s| s.triple()).collect();
        verdict.notes.push(format!(
            "table lookup: [{}]{}",
            list.join(", "),
            if found.complete() { "" } else { " (coverage incomplete)" }
        ));
    }
    let report = SurveyReport {
        params: SurveyParams {
            c_max: c,
            q_max: q,
            search_box: task.search_box,
            parities: vec![parity],
            qpow_boundary,
            witness_bound,
        },
        rows: vec![verdict],
    };
    Ok(render_report(&report, format)?)
}

fn run_survey(
    c_max: u64,
    q_max: u64,
    parity: &str,
    bx: BoxArgs,
    format: &str,
    qpow_boundary: QpowBoundary,
    output: Option<PathBuf>,
) -> CliResult {
    let format: ReportFormat = format.parse()?;
    let parities = match parity {
        "both" => vec![Parity::Even, Parity::Odd],
        p => vec![p.parse::<Parity>()?],
    };
    let params = SurveyParams {
        c_max,
        q_max,
        search_box: bx.into(),
        parities,
        qpow_boundary,
        ..SurveyParams::default()
    };
    let text = render_report(&survey(&params)?, format)?;
    match output {
        Some(path) => {
            std::fs::write(&path, &text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn run_solve(equation: Equation, c: u64, q: u64, gamma_parity: Option<Parity>, bx: BoxArgs) -> CliResult {
    validate_pair(c, q)?;
    let (sols, off) = match equation {
        Equation::Main => {
            let filter = gamma_parity.map_or(GammaFilter::Any, GammaFilter::Only);
            (solve_main_filtered(c, q, filter, bx.m_max, bx.gamma_max), Vec::new())
        }
        Equation::Rn => (solve_rn(c, q, bx.m_max, bx.gamma_max), Vec::new()),
        Equation::Qpow => {
            let r = solve_qpow(c, q, bx.m_max, bx.gamma_max);
            (r.conforming, r.off_parity)
        }
    };
    Ok(to_json(&json!({
        "equation": equation,
        "C": c,
        "q": q,
        "box": SearchBox::from(bx),
        "solutions": sols,
        "off_parity": off,
    })))
}

fn run_frey(c: u64, t: BigInt, m: u32, q: Option<u64>, gamma: Option<u32>) -> CliResult {
    let inst = match (q, gamma) {
        (Some(q), Some(gamma)) => FreyInstance::adapted(c, q, t, gamma, m)?,
        _ => FreyInstance::pseudo(c, t, aflt::intmath::big_pow(2, m))?,
    };
    let frey = build_frey(&inst)?;
    let [a1, a2, a3, a4, a6] = frey.curve.coefficients();
    let conductor = match q {
        Some(_) => Some(frey_conductor(&inst)?.to_string()),
        None => None,
    };
    let disc = frey_discriminant(&inst)?;
    if disc != frey.invariants.disc {
        return Err(Failure::Internal(format!(
            "closed-form discriminant {disc} differs from computed {}",
            frey.invariants.disc
        )));
    }
    let two = frey_two_structure_report(&inst);
    let iso = two_isogenous_curve(&inst);
    Ok(to_json(&json!({
        "x": inst.x().to_string(),
        "sign_flipped": inst.sign_flipped(),
        "coefficients": [a1.to_string(), a2.to_string(), a3.to_string(), a4.to_string(), a6.to_string()],
        "c4": frey.invariants.c4.to_string(),
        "c6": frey.invariants.c6.to_string(),
        "discriminant": disc.to_string(),
        "conductor": conductor,
        "two_isogenous": iso.to_string(),
        "two_structure": {
            "passes": two.passes(),
            "notes": two.notes,
        },
    })))
}

fn run_mordell(c: u64, q: u64, family: Family, height_bound: u64, b: Option<u32>, d: Option<u32>) -> CliResult {
    validate_pair(c, q)?;
    if height_bound == 0 {
        return Err(Failure::Input("height bound must be at least 1".into()));
    }
    let curves = match (b, d) {
        (Some(b), Some(d)) => vec![MordellCurve::new(c, q, family, b, d)?],
        _ => mordell_family(c, q, family),
    };
    let mut out = Vec::new();
    for curve in &curves {
        let found = s_point_search(curve, height_bound);
        // (U, ±V) give the same triple.
        let mut solutions: Vec<_> = found
            .points
            .iter()
            .filter_map(|p| point_to_solution(p, curve, c, q))
            .collect();
        solutions.dedup();
        out.push(json!({
            "curve": curve,
            "points": found.points,
            "solutions": solutions,
            "max_den_exponent": found.max_den_exponent,
        }));
    }
    Ok(to_json(&json!({
        "height_bound": height_bound,
        "bounded": true,
        "curves": out,
    })))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Check {
            c,
            q,
            parity,
            k,
            bx,
            db,
            format,
            qpow_boundary,
            diagnose_b,
            sieve,
            witness_bound,
        } => run_check(
            c,
            q,
            parity,
            k,
            bx,
            db,
            &format,
            qpow_boundary,
            diagnose_b,
            sieve,
            witness_bound,
        ),
        Command::Survey {
            c_max,
            q_max,
            parity,
            bx,
            format,
            qpow_boundary,
            output,
        } => run_survey(c_max, q_max, &parity, bx, &format, qpow_boundary, output),
        Command::Solve {
            equation,
            c,
            q,
            gamma_parity,
            bx,
        } => run_solve(equation, c, q, gamma_parity, bx),
        Command::Frey { c, t, m, q, gamma } => run_frey(c, t, m, q, gamma),
        Command::Mordell {
            c,
            q,
            family,
            height_bound,
            b,
            d,
        } => run_mordell(c, q, family, height_bound, b, d),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            log::error!("{msg}");
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}
