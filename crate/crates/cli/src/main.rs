//! `tdyn`: Reidemeister and Nielsen coincidence numbers of iterated
//! endomorphism pairs, their zeta functions, congruences, growth and
//! asymptotics.
//!
//! Exit codes: 0 success, 1 input or parse error, 2 pair not tame where
//! tameness is required, 3 unsupported eigenvalue pairing, 4 numeric
//! indeterminacy at the precision ceiling.

mod input;
mod report;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tdyn_core::asymptotics::{
    Classification,    classify_limit_points, dominant_spectrum, limit_points_sample, root_test_estimate,
};
use tdyn_core::congruence::{euler_check, gauss_check, prime_powers_up_to, CongruenceReport};
use tdyn_core::group::{builtin_example, tameness_check, validate, NilpotentSystem, BUILTIN_CATALOG};
use tdyn_core::growth::{growth_rate, verify_entropy_identity};
use tdyn_core::padic::{newton_polygon, padic_growth_factor};
use tdyn_core::reidemeister::{coincidence_sequence, nielsen_sequence, ReidemeisterSequence};
use tdyn_core::spectrum::paired_spectrum;
use tdyn_core::zeta::{realize_bouquet, zeta_from_sequence, ZetaData};
use tdyn_core::{Error, Result};

use report::{classification_json, congruence_json, growth_json, matrix_json, poly_json};

#[derive(Parser, Debug)]
#[command(name = "tdyn", version, about = "Coincidence Reidemeister and Nielsen numbers of iterated endomorphism pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reidemeister coincidence numbers R(phi^n, psi^n)
    Rseq(Common),
    /// Nielsen coincidence numbers N(f^n, g^n)
    Nseq(Common),
    /// Rational zeta function and exponential sum
    Zeta(Common),
    /// Lefschetz realization on a bouquet of circles and spheres
    Realize(Common),
    /// Gauss and Euler congruences
    Congruence {
        #[command(flatten)]
        common: Common,
        /// Comma-separated moduli (default 1..=N)
        #[arg(long, value_delimiter = ',')]
        moduli: Vec<u64>,
    },
    /// Growth rate closed form against R_n^(1/n)
    Growth(Common),
    /// Dual torus entropy and the growth identity
    Entropy(Common),
    /// Dominant spectrum and limit points of R_n / lambda^n
    Classify(Common),
    /// Newton polygon and p-adic growth factor of one section
    Padic {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: u64,
        /// 1-based section index
        #[arg(long, default_value_t = 1)]
        section: usize,
    },
    /// Check the structural invariants of a system
    Validate(Common),
    /// Tameness verdict
    Tame(Common),
    /// List the builtin systems
    Builtins {
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Builtin system `name:args`, e.g. `z_times_d:2`
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// JSON system descriptor
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Sequence length
    #[arg(long = "n", default_value_t = 40, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Working precision in bits for root enclosures
    #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u32).range(64..))]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Kind::Reidemeister)]
    kind: Kind,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Table,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Reidemeister,
    Nielsen,
}

struct Output {
    json: Value,
    table: String,
    /// Nonzero when a result is printed but the verdict is indeterminate.
    exit: u8,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotTame { .. } | Error::InfiniteEntry { .. } | Error::CyclotomicEigenvalue { .. } => 2,
        Error::UnsupportedPairing { .. } => 3,
        Error::Indeterminate { .. } => 4,
        _ => 1,
    }
}

fn load(c: &Common) -> Result<NilpotentSystem> {
    match (&c.builtin, &c.input) {
        (Some(key), _) => builtin_example(key),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            input::parse_system(&text)
        }
        (None, None) => Err(Error::Parse("one of --builtin or --input is required".into())),
    }
}

fn sequence(sys: &NilpotentSystem, kind: Kind, len: usize) -> Result<ReidemeisterSequence> {
    match kind {
        Kind::Reidemeister => coincidence_sequence(sys, len),
        Kind::Nielsen => nielsen_sequence(sys, len),
    }
}

fn with_header(sys: &NilpotentSystem, command: &str, mut body: Value) -> Value {
    let obj = body.as_object_mut().expect("object body");
    obj.insert("command".into(), json!(command));
    obj.insert("system".into(), json!(sys.name));
    body
}

fn seq_strings(seq: &ReidemeisterSequence) -> Vec<String> {
    seq.values.iter().map(|c| c.to_string()).collect()
}

fn zeta_data(sys: &NilpotentSystem, c: &Common) -> Result<(ReidemeisterSequence, ZetaData)> {
    let len = (c.n as usize).max(sys.recurrence_window());
    let seq = sequence(sys, c.kind, len)?;
    let values = seq.finite_values()?;
    let data = zeta_from_sequence(&values, sys.max_exponential_terms())?;
    Ok((seq, data))
}

fn zeta_json(seq: &ReidemeisterSequence, z: &ZetaData) -> Value {
    json!({
        "kind": seq.kind.to_string(),
        "sequence": seq_strings(seq),
        "zeta": {
            "num": poly_json(&z.rational_function.numerator),
            "den": poly_json(&z.rational_function.denominator),
        },
        "exponential_sum": report::exponential_sum_json(&z.exponential_sum),
        "recurrence": poly_json(&z.recurrence),
        "order": z.order,
        "roundtrip_verified": true,
        "verified_terms": z.verified_terms,
    })
}

fn zeta_table(z: &ZetaData) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "zeta(z) = {}", z.rational_function);
    let _ = writeln!(t, "recurrence order {}, roundtrip verified over {} terms", z.order, z.verified_terms);
    let _ = writeln!(t, "exponential sum R_n = sum chi * (power sums of roots):");
    for term in &z.exponential_sum.terms {
        let _ = writeln!(t, "  chi = {:>4}  roots of {}", term.chi, term.root_polynomial);
    }
    t
}

fn run(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Rseq(c) => seq_command(c, Kind::Reidemeister),
        Command::Nseq(c) => seq_command(c, Kind::Nielsen),
        Command::Zeta(c) => {
            let sys = load(&c)?;
            let (seq, z) = zeta_data(&sys, &c)?;
            Ok(Output { json: with_header(&sys, "zeta", zeta_json(&seq, &z)), table: zeta_table(&z), exit: 0 })
        }
        Command::Realize(c) => {
            let sys = load(&c)?;
            let (seq, z) = zeta_data(&sys, &c)?;
            let br = realize_bouquet(&z.exponential_sum)?;
            br.verify(&z.exponential_sum)?;
            let mut body = zeta_json(&seq, &z);
            body["realization"] = json!({
                "A_e": matrix_json(&br.a_e),
                "A_o": matrix_json(&br.a_o),
                "n1": br.n1,
                "n2": br.n2,
                "trace_check_range": br.check_range(),
                "verified": true,
            });
            let table = format!(
                "{}A_e = {}\nA_o = {}\nbouquet: {} circles, {} spheres; trace identity checked for n = 1..{}\n",
                zeta_table(&z),
                br.a_e,
                br.a_o,
                br.n1,
                br.n2,
                br.check_range()
            );
            Ok(Output { json: with_header(&sys, "realize", body), table, exit: 0 })
        }
        Command::Congruence { common: c, moduli } => {
            let sys = load(&c)?;
            let moduli: Vec<u64> = if moduli.is_empty() { (1..=c.n).collect() } else { moduli };
            if moduli.contains(&0) {
                return Err(Error::Parse("moduli must be positive".into()));
            }
            let top = moduli.iter().copied().max().unwrap_or(1);
            let seq = sequence(&sys, c.kind, top as usize)?;
            let gauss = moduli.iter().map(|&n| gauss_check(&seq, n)).collect::<Result<Vec<_>>>()?;
            let euler = prime_powers_up_to(top)
                .into_iter()
                .map(|(p, r)| euler_check(&seq, p, r).map(|rep| (p, r, rep)))
                .collect::<Result<Vec<_>>>()?;
            let all = gauss.iter().all(|r| r.passed) && euler.iter().all(|(_, _, r)| r.passed);
            let body = json!({
                "kind": seq.kind.to_string(),
                "congruences": {
                    "gauss": gauss.iter().map(congruence_json).collect::<Vec<_>>(),
                    "euler": euler.iter().map(|(p, r, rep)| {
                        let mut v = congruence_json(rep);
                        v["p"] = json!(p);
                        v["r"] = json!(r);
                        v
                    }).collect::<Vec<_>>(),
                    "all_passed": all,
                },
            });
            let mut t = String::new();
            let _ = writeln!(t, "{:>5}  {:>8}  {:>6}  combination", "n", "residue", "passed");
            let row = |t: &mut String, label: String, r: &CongruenceReport| {
                let _ = writeln!(t, "{label:>5}  {:>8}  {:>6}  {}", r.residue, r.passed, r.combination);
            };
            for r in &gauss {
                row(&mut t, r.n.to_string(), r);
            }
            for (p, r, rep) in &euler {
                row(&mut t, format!("{p}^{r}"), rep);
            }
            let _ = writeln!(t, "{}", if all { "all passed" } else { "FAILED" });
            Ok(Output { json: with_header(&sys, "congruence", body), table: t, exit: 0 })
        }
        Command::Growth(c) => {
            let sys = load(&c)?;
            let g = growth_rate(&sys, c.n as usize, c.precision)?;
            let mut t = String::new();
            match &g.exact {
                Some(x) => {
                    let _ = writeln!(t, "R^inf = {x} (exact)");
                }
                None => {
                    let _ = writeln!(t, "R^inf = {:.15}", g.closed_form);
                }
            }
            let _ = writeln!(t, "log R^inf in [{:.17}, {:.17}]", g.log_lower, g.log_upper);
            let _ = writeln!(t, "archimedean part {:.15}, p-adic part {:.15}", g.archimedean_part(), g.padic_part());
            if let Some(e) = g.empirical.last() {
                let _ = writeln!(t, "R_{}^(1/{}) = {:.15}, relative gap {:.3e}", g.empirical.len(), g.empirical.len(), e, g.agreement);
            }
            for a in &g.assumptions {
                let _ = writeln!(t, "assumed: {a}");
            }
            Ok(Output { json: with_header(&sys, "growth", json!({ "growth": growth_json(&g) })), table: t, exit: 0 })
        }
        Command::Entropy(c) => {
            let sys = load(&c)?;
            let e = verify_entropy_identity(&sys, c.n as usize, c.precision)?;
            let body = json!({
                "entropy": {
                    "sections": e.entropies.iter().enumerate().map(|(k, h)| json!({
                        "section": k + 1, "lower": h.lower, "upper": h.upper, "value": h.value(),
                    })).collect::<Vec<_>>(),
                    "sum": e.entropy_sum,
                    "log_growth": e.log_growth,
                    "gap": e.gap,
                    "assumptions": e.assumptions,
                }
            });
            let mut t = String::new();
            for (k, h) in e.entropies.iter().enumerate() {
                let _ = writeln!(t, "h(section {}) = {:.15}", k + 1, h.value());
            }
            let _ = writeln!(t, "sum h = {:.15}\nlog R^inf = {:.15}\ngap = {:.3e}", e.entropy_sum, e.log_growth, e.gap);
            for a in &e.assumptions {
                let _ = writeln!(t, "assumed: {a}");
            }
            Ok(Output { json: with_header(&sys, "entropy", body), table: t, exit: 0 })
        }
        Command::Classify(c) => {
            let sys = load(&c)?;
            let (seq, z) = zeta_data(&sys, &c)?;
            let ds = dominant_spectrum(&z.exponential_sum, c.precision)?;
            let class = classify_limit_points(&ds)?;
            let values = seq.finite_values()?;
            let samples = limit_points_sample(&values, &ds, c.n as usize);
            let estimate = root_test_estimate(&values[..(c.n as usize).min(values.len())], 5);
            let body = json!({
                "kind": seq.kind.to_string(),
                "exponential_sum": report::exponential_sum_json(&z.exponential_sum),
                "dominant": report::dominant_json(&ds),
                "classification": classification_json(&class),
                "samples": samples,
                "root_test_estimate": estimate,
            });
            let mut t = String::new();
            let _ = writeln!(t, "lambda = {:.15}{}", ds.lambda, ds.lambda_exact.as_ref().map_or(String::new(), |x| format!(" (exact {x})")));
            let _ = writeln!(t, "count = {}", ds.count.map_or("indeterminate".into(), |c| c.to_string()));
            let _ = writeln!(t, "verdict: {}", report::classification_line(&class));
            let _ = writeln!(t, "root test estimate {estimate:.6}");
            let shown: Vec<String> = samples.iter().take(12).map(|s| format!("{s:.6}")).collect();
            let _ = writeln!(t, "R_n / lambda^n: {} ...", shown.join(" "));
            let exit = if matches!(class, Classification::Indeterminate { .. }) { 4 } else { 0 };
            Ok(Output { json: with_header(&sys, "classify", body), table: t, exit })
        }
        Command::Padic { common: c, prime, section } => {
            let sys = load(&c)?;
            tdyn_core::group::validated(&sys)?;
            let sec = sys
                .sections
                .get(section.wrapping_sub(1))
                .ok_or_else(|| Error::Parse(format!("no section {section}")))?;
            let paired = paired_spectrum(sec, section)?;
            let polygon = newton_polygon(&paired.ratio_char_poly, prime)?;
            let factor = padic_growth_factor(sec, prime, section)?;
            let body = json!({
                "padic": {
                    "section": section,
                    "prime": prime,
                    "mode": report::mode_name(paired.mode),
                    "ratio_char_poly": poly_json(&paired.ratio_char_poly),
                    "segments": polygon.segments.iter().map(|s| json!({
                        "slope": s.slope.to_string(), "length": s.length,
                    })).collect::<Vec<_>>(),
                    "root_valuations": polygon.root_valuations().iter().map(|(v, k)| json!({
                        "valuation": v.to_string(), "count": k,
                    })).collect::<Vec<_>>(),
                    "exponent": factor.exponent.to_string(),
                    "factor": factor.value_f64(),
                }
            });
            let mut t = String::new();
            let _ = writeln!(t, "paired polynomial {} ({})", paired.ratio_char_poly, report::mode_name(paired.mode));
            for s in &polygon.segments {
                let _ = writeln!(t, "  slope {:>6}  length {}", s.slope, s.length);
            }
            let _ = writeln!(t, "{prime}-adic growth factor {prime}^{} = {}", factor.exponent, factor.value_f64());
            Ok(Output { json: with_header(&sys, "padic", body), table: t, exit: 0 })
        }
        Command::Validate(c) => {
            let sys = load(&c)?;
            match validate(&sys) {
                Ok(()) => Ok(Output {
                    json: with_header(&sys, "validate", json!({ "valid": true, "violations": [] })),
                    table: "ok\n".into(),
                    exit: 0,
                }),
                Err(v) => Err(Error::InvalidSystem(v)),
            }
        }
        Command::Tame(c) => {
            let sys = load(&c)?;
            let v = tameness_check(&sys)?;
            let body = json!({ "tame": v.tame, "witness_n": v.witness_n, "checked_up_to": v.checked_up_to });
            let table = match v.witness_n {
                Some(n) => format!("not tame: R(phi^{n}, psi^{n}) is infinite\n"),
                None => format!("tame (checked n = 1..{})\n", v.checked_up_to),
            };
            Ok(Output { json: with_header(&sys, "tame", body), table, exit: 0 })
        }
        Command::Builtins { .. } => Ok(Output {
            json: json!({ "command": "builtins", "builtins": BUILTIN_CATALOG }),
            table: BUILTIN_CATALOG.iter().map(|k| format!("{k}\n")).collect(),
            exit: 0,
        }),
    }
}

fn seq_command(c: Common, kind: Kind) -> Result<Output> {
    let sys = load(&c)?;
    let seq = sequence(&sys, kind, c.n as usize)?;
    let body = json!({ "kind": seq.kind.to_string(), "sequence": seq_strings(&seq) });
    let mut t = String::new();
    for (i, v) in seq.values.iter().enumerate() {
        let _ = writeln!(t, "{:>4}  {v}", i + 1);
    }
    let command = if kind == Kind::Reidemeister { "rseq" } else { "nseq" };
    Ok(Output { json: with_header(&sys, command, body), table: t, exit: 0 })
}

fn format_of(cmd: &Command) -> Format {
    match cmd {
        Command::Rseq(c)
        | Command::Nseq(c)
        | Command::Zeta(c)
        | Command::Realize(c)
        | Command::Growth(c)
        | Command::Entropy(c)
        | Command::Classify(c)
        | Command::Validate(c)
        | Command::Tame(c) => c.format,
        Command::Congruence { common, .. } | Command::Padic { common, .. } => common.format,
        Command::Builtins { format } => *format,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let format = format_of(&cli.command);
    match run(cli.command) {
        Ok(out) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Table => print!("{}", out.table),
            }
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
