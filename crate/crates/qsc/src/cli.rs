//! Command-line front end: argument parsing, dispatch, formatting and exit
//! codes (`0` success, `2` algorithm failure, `3` resource limit, `64` usage).

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cartan::{
    cofactor_det, deformed_cartan, det_specialized, inv_matrix_adjugate, specialized_cartan,
    twist_diagonal, verify_inverse, EpsilonSeq,
};
use crate::fixtures::{all_fixtures, check_fixture};
use crate::fm::{self, to_dot, FMStatus, Limits};
use crate::lweights::parse::parse_monomial;
use crate::lweights::{Monomial, QChar, VarKey};
use crate::rank1::{
    sl2_char_monomials, sl2_decompose, u01_normal_form, u01_qchar, Lattice, QString,
};
use crate::restriction::{beta, group_by_z, tau_qchar, Interval, YtTauConvention};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "qsc",
    about = "Exact q-characters for generalized quantum groups of type A(M|N)",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the deformed Cartan matrix, its specialization, determinant and inverse.
    Cartan(CartanArgs),
    /// Compute the q-character of a simple module by monomial expansion.
    Qchar(QcharArgs),
    /// Apply a restriction map to a monomial or a q-character.
    Restrict(RestrictArgs),
    /// Normal form and simple character of a rank-1 monomial.
    Rank1(Rank1Args),
    /// Run the embedded golden-data suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct CartanArgs {
    /// Standard sequence as "M,N".
    #[arg(long = "eps-std", value_name = "M,N", conflicts_with = "eps")]
    eps_std: Option<String>,
    /// Arbitrary (01)-sequence, comma-separated bits, e.g. "1,0,1".
    #[arg(long, value_name = "BITS")]
    eps: Option<String>,
    /// Also print the closed-form inverse matrix d * D^r C~^r.
    #[arg(long)]
    invert: bool,
    /// Evaluate the specialized matrix at a fixed integer r instead of symbolically.
    #[arg(long, value_name = "R")]
    r: Option<i64>,
    /// Emit JSON instead of aligned text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QcharArgs {
    #[arg(long = "eps-std", value_name = "M,N")]
    eps_std: String,
    /// Highest ell-weight, e.g. "Y[1,q^0]" or "Y[1,q^0] Yt[2,-q^-1]".
    #[arg(long)]
    hw: String,
    /// Write the result graph in DOT format to this file.
    #[arg(long, value_name = "FILE")]
    dot: Option<String>,
    /// Write the result (status, terms, edges) as JSON to this file.
    #[arg(long, value_name = "FILE")]
    json: Option<String>,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    #[arg(long, default_value_t = 100_000)]
    max_monomials: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum RestrictMode {
    Beta,
    Tau,
}

#[derive(Clone, Copy, ValueEnum)]
enum TauConventionArg {
    /// Swap the p-tables exactly on Yt[M,..] (passes all internal oracles).
    Eps,
    /// The two-case split by membership of the node in J.
    Interval,
}

#[derive(Args)]
struct RestrictArgs {
    #[arg(long = "eps-std", value_name = "M,N")]
    eps_std: String,
    /// Node interval "p..p'" (half-open, nodes p..p'-1) or a single node "j".
    #[arg(long = "J", value_name = "p..p'")]
    interval: String,
    #[arg(long, value_enum)]
    mode: RestrictMode,
    /// Input monomial (mutually exclusive with --qchar-json).
    #[arg(long, conflicts_with = "qchar_json")]
    monomial: Option<String>,
    /// Input q-character JSON file ({"terms":[{"m":..,"mult":..}]}).
    #[arg(long = "qchar-json", value_name = "FILE")]
    qchar_json: Option<String>,
    #[arg(long, value_enum, default_value = "eps")]
    convention: TauConventionArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum LatticeArg {
    Q2,
    Qt2,
    U01,
}

#[derive(Args)]
struct Rank1Args {
    /// Which rank-1 theory: q2 / qt2 (sl2 strings) or u01 (the (01) node).
    #[arg(long, value_enum)]
    lattice: LatticeArg,
    /// Rank-1 monomial over node 1: "Y[1,..]" (q2, u01), "Yt[1,..]" (qt2), "D" (u01).
    #[arg(long)]
    monomial: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Only run fixtures whose name contains this substring.
    #[arg(long)]
    filter: Option<String>,
}

fn usage_err(msg: impl AsRef<str>) -> i32 {
    eprintln!("error: {}", msg.as_ref());
    EXIT_USAGE
}

fn parse_eps_std(text: &str) -> Result<EpsilonSeq, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"M,N\", got '{text}'"));
    }
    let m: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| format!("bad M in '{text}'"))?;
    let n: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| format!("bad N in '{text}'"))?;
    EpsilonSeq::standard(m, n).map_err(|e| e.to_string())
}

fn parse_interval(text: &str) -> Result<Interval, String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| format!("bad interval '{text}'"))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| format!("bad interval '{text}'"))?;
        if hi <= lo {
            return Err(format!("empty interval '{text}'"));
        }
        // "p..p'" denotes the node set {p, .., p'-1}.
        Ok(Interval { lo, hi: hi - 1 })
    } else {
        let j: usize = text
            .trim()
            .parse()
            .map_err(|_| format!("bad interval '{text}'"))?;
        Ok(Interval::singleton(j))
    }
}

fn print_matrix(rows: &[Vec<String>]) {
    let cols = rows.first().map_or(0, |r| r.len());
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let line: Vec<String> = r
            .iter()
            .enumerate()
            .map(|(j, s)| format!("{s:>width$}", width = widths[j]))
            .collect();
        println!("[ {} ]", line.join("  "));
    }
}

fn cmd_cartan(args: &CartanArgs) -> i32 {
    let eps = if let Some(std) = &args.eps_std {
        match parse_eps_std(std) {
            Ok(e) => e,
            Err(e) => return usage_err(e),
        }
    } else if let Some(bits) = &args.eps {
        let parsed: Result<Vec<u8>, _> = bits.split(',').map(|b| b.trim().parse::<u8>()).collect();
        match parsed
            .map_err(|e| e.to_string())
            .and_then(|v| EpsilonSeq::new(v).map_err(|e| e.to_string()))
        {
            Ok(e) => e,
            Err(e) => return usage_err(e),
        }
    } else {
        return usage_err("one of --eps-std or --eps is required");
    };

    let cq = deformed_cartan(&eps);
    let cr = specialized_cartan(&eps);
    let render_r = |sl: &crate::ring::SignedLaurent| match args.r {
        None => sl.to_string(),
        Some(r) => sl.eval_at_r(r).to_string(),
    };
    let deformed: Vec<Vec<String>> = cq
        .entries
        .iter()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect();
    let specialized: Vec<Vec<String>> = cr
        .entries
        .iter()
        .map(|row| row.iter().map(render_r).collect())
        .collect();
    let standard = eps.is_standard() && eps.m() > 0 && eps.n1() > 0 && eps.m() != eps.n1();
    let det_info = if standard {
        Some(det_specialized(eps.m(), eps.n1()).expect("standard with M != N"))
    } else {
        None
    };
    let inverse: Option<Vec<Vec<String>>> = if args.invert {
        let adj = inv_matrix_adjugate(&eps);
        Some(
            adj.entries
                .iter()
                .map(|row| row.iter().map(render_r).collect())
                .collect(),
        )
    } else {
        None
    };

    if args.json {
        let mut obj = serde_json::json!({
            "eps": eps.bits(),
            "deformed": deformed,
            "specialized": specialized,
        });
        if let Some(d) = &det_info {
            obj["det"] = serde_json::json!(d.value.to_string());
            obj["det_matches_cofactor"] = serde_json::json!(d.matches_cofactor);
            obj["inverse_verified"] =
                serde_json::json!(verify_inverse(eps.m(), eps.n1()).unwrap_or(false));
        } else {
            let a = specialized_cartan(&eps).mul(&twist_diagonal(&eps));
            obj["det"] = serde_json::json!(cofactor_det(&a).to_string());
        }
        if let Some(inv) = inverse {
            obj["inverse"] = serde_json::json!(inv);
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&obj).expect("serializable")
        );
        return EXIT_OK;
    }

    println!("epsilon: {:?}", eps.bits());
    println!("C(q,qt):");
    print_matrix(&deformed);
    println!("C(q^r,(-q^-1)^r):");
    print_matrix(&specialized);
    if let Some(d) = det_info {
        println!(
            "det(C D^r) = {}   (cofactor check: {})",
            d.value,
            if d.matches_cofactor { "ok" } else { "MISMATCH" }
        );
        let ok = verify_inverse(eps.m(), eps.n1()).unwrap_or(false);
        println!(
            "closed-form inverse verified: {}",
            if ok { "ok" } else { "MISMATCH" }
        );
    } else {
        let a = specialized_cartan(&eps).mul(&twist_diagonal(&eps));
        println!("det(C D^r) = {}", cofactor_det(&a));
    }
    if let Some(inv) = inverse {
        println!("d * D^r C~^r:");
        print_matrix(&inv);
    }
    EXIT_OK
}

fn write_file(path: &str, contents: &str) -> Result<(), String> {
    let mut f = std::fs::File::create(path).map_err(|e| format!("cannot create {path}: {e}"))?;
    f.write_all(contents.as_bytes())
        .map_err(|e| format!("cannot write {path}: {e}"))
}

fn cmd_qchar(args: &QcharArgs) -> i32 {
    let eps = match parse_eps_std(&args.eps_std) {
        Ok(e) => e,
        Err(e) => return usage_err(e),
    };
    if eps.m() == eps.n1() {
        return usage_err("the expansion algorithm requires M != N");
    }
    let hw = match parse_monomial(&eps, &args.hw) {
        Ok(m) => m,
        Err(e) => return usage_err(format!("--hw: {e}")),
    };
    let limits = Limits {
        max_monomials: args.max_monomials,
        max_steps: args.max_steps,
    };
    let result = match fm::run(&eps, &hw, limits) {
        Ok(r) => r,
        Err(e) => return usage_err(e.to_string()),
    };
    match &result.status {
        FMStatus::Success => println!("status: success"),
        FMStatus::Failed { at, direction } => println!(
            "status: failed at {} in direction {direction}",
            at.format_canonical()
        ),
        FMStatus::LimitExceeded { steps } => println!("status: limit exceeded after {steps} steps"),
    }
    println!("highest: {}", hw.format_canonical());
    let terms = result.sorted_terms(&eps);
    println!(
        "terms ({} monomials, dimension {}):",
        terms.len(),
        result.qchar.dimension()
    );
    for (m, c) in &terms {
        println!("  {c}  {}", m.format_canonical());
    }
    println!("edges ({}):", result.edges.len());
    for e in &result.edges {
        println!(
            "  {} --({},{})--> {}",
            e.from.format_canonical(),
            e.node,
            e.a,
            e.to.format_canonical()
        );
    }
    if let Some(path) = &args.dot {
        if let Err(e) = write_file(path, &to_dot(&eps, &result)) {
            return usage_err(e);
        }
    }
    if let Some(path) = &args.json {
        let v = result.to_json(&eps);
        let text = serde_json::to_string_pretty(&v).expect("serializable");
        if let Err(e) = write_file(path, &(text + "\n")) {
            return usage_err(e);
        }
    }
    match result.status {
        FMStatus::Success => EXIT_OK,
        FMStatus::Failed { .. } => EXIT_FAILED,
        FMStatus::LimitExceeded { .. } => EXIT_LIMIT,
    }
}

fn cmd_restrict(args: &RestrictArgs) -> i32 {
    let eps = match parse_eps_std(&args.eps_std) {
        Ok(e) => e,
        Err(e) => return usage_err(e),
    };
    let interval = match parse_interval(&args.interval) {
        Ok(j) => j,
        Err(e) => return usage_err(e),
    };
    let convention = match args.convention {
        TauConventionArg::Eps => YtTauConvention::EpsilonBased,
        TauConventionArg::Interval => YtTauConvention::ByInterval,
    };
    let chi: QChar = if let Some(text) = &args.monomial {
        match parse_monomial(&eps, text) {
            Ok(m) => QChar::from_monomial(m),
            Err(e) => return usage_err(format!("--monomial: {e}")),
        }
    } else if let Some(path) = &args.qchar_json {
        let data = match std::fs::read_to_string(path) {
            Ok(d) => d,
            Err(e) => return usage_err(format!("cannot read {path}: {e}")),
        };
        let v: serde_json::Value = match serde_json::from_str(&data) {
            Ok(v) => v,
            Err(e) => return usage_err(format!("{path}: {e}")),
        };
        match QChar::from_json(&eps, &v) {
            Ok(c) => c,
            Err(e) => return usage_err(format!("{path}: {e}")),
        }
    } else {
        return usage_err("one of --monomial or --qchar-json is required");
    };

    match args.mode {
        RestrictMode::Beta => {
            let mut out = QChar::zero();
            for (m, c) in chi.terms() {
                match beta(&eps, interval, m) {
                    Ok(b) => out.add_term(b, *c),
                    Err(e) => return usage_err(e.to_string()),
                }
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&out.to_json()).expect("serializable")
            );
        }
        RestrictMode::Tau => {
            let image = match tau_qchar(&eps, interval, &chi, convention) {
                Ok(i) => i,
                Err(e) => return usage_err(e.to_string()),
            };
            let groups = group_by_z(&image);
            let v: Vec<serde_json::Value> = groups
                .iter()
                .map(|(inner, z)| {
                    let zstr = crate::restriction::RestrictedMonomial {
                        inner: Monomial::one(),
                        z: z.clone(),
                    }
                    .format_z();
                    serde_json::json!({"z": zstr, "inner": inner.to_json()})
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({"groups": v}))
                    .expect("serializable")
            );
        }
    }
    EXIT_OK
}

fn cmd_rank1(args: &Rank1Args) -> i32 {
    let (eps, lattice) = match args.lattice {
        LatticeArg::Q2 => (EpsilonSeq::new(vec![0, 0]).expect("valid"), Lattice::Q2),
        LatticeArg::Qt2 => (EpsilonSeq::new(vec![1, 1]).expect("valid"), Lattice::Qt2),
        LatticeArg::U01 => (EpsilonSeq::new(vec![0, 1]).expect("valid"), Lattice::Q2),
    };
    let mono = match parse_monomial(&eps, &args.monomial) {
        Ok(m) => m,
        Err(e) => return usage_err(format!("--monomial: {e}")),
    };
    let mut exps: BTreeMap<crate::lweights::Spec, i64> = BTreeMap::new();
    let mut d = 0i64;
    for (k, e) in mono.exps() {
        match k {
            VarKey::Y(1, a) | VarKey::Yt(1, a) => {
                exps.insert(*a, *e);
            }
            VarKey::D if matches!(args.lattice, LatticeArg::U01) => d = *e,
            other => return usage_err(format!("variable {other:?} not valid for this lattice")),
        }
    }
    match args.lattice {
        LatticeArg::U01 => {
            let nf = u01_normal_form(d, &exps);
            println!(
                "normal form: D^{} x {} Y-strings, {} Yt-strings",
                -nf.s,
                nf.ystrings.len(),
                nf.ytstrings.len()
            );
            let fmt_strings = |label: &str, ss: &[QString]| {
                for s in ss {
                    println!(
                        "  {label} start {} length {}  (A^-1 lift {})",
                        s.start,
                        s.len,
                        s.lift()
                    );
                }
            };
            fmt_strings("Y-string ", &nf.ystrings);
            fmt_strings("Yt-string", &nf.ytstrings);
            let chr = u01_qchar(&nf);
            println!("character ({} terms):", chr.terms.len());
            for (lifts, c) in &chr.terms {
                let lifts_str = if lifts.is_empty() {
                    "1".to_string()
                } else {
                    lifts
                        .iter()
                        .map(|l| format!("A[{l}]^-1"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                println!("  {c}  {lifts_str}");
            }
        }
        LatticeArg::Q2 | LatticeArg::Qt2 => {
            let strings = match sl2_decompose(&exps, lattice) {
                Ok(s) => s,
                Err(e) => return usage_err(e.to_string()),
            };
            println!("strings ({}):", strings.len());
            for s in &strings {
                println!("  start {} length {}", s.start, s.len);
            }
            let letter = if lattice == Lattice::Q2 { "Y" } else { "Yt" };
            let monos = sl2_char_monomials(&strings);
            println!("character ({} terms):", monos.len());
            for (m, c) in &monos {
                let text = if m.is_empty() {
                    "1".to_string()
                } else {
                    m.iter()
                        .map(|(a, e)| {
                            if *e == 1 {
                                format!("{letter}[{a}]")
                            } else {
                                format!("{letter}[{a}]^{e}")
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                println!("  {c}  {text}");
            }
        }
    }
    EXIT_OK
}

fn cmd_verify(args: &VerifyArgs) -> i32 {
    let mut all_ok = true;
    for f in all_fixtures() {
        if let Some(filter) = &args.filter {
            if !f.name.contains(filter.as_str()) {
                continue;
            }
        }
        let problems = check_fixture(&f);
        if problems.is_empty() {
            println!("PASS {}", f.name);
        } else {
            all_ok = false;
            println!("FAIL {}", f.name);
            for p in problems {
                println!("     {p}");
            }
        }
    }
    if all_ok {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Parse `argv` and run; returns the process exit code.
pub fn real_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // --help/--version are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Cartan(a) => cmd_cartan(a),
        Command::Qchar(a) => cmd_qchar(a),
        Command::Restrict(a) => cmd_restrict(a),
        Command::Rank1(a) => cmd_rank1(a),
        Command::Verify(a) => cmd_verify(a),
    }
}
