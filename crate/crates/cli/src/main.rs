use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use vasreach_core::decider::{decide_reach, DeciderConfig, Verdict};
use vasreach_core::diophantine::IntVector;
use vasreach_core::format::{parse_ext_point, parse_mrgs, parse_point, parse_system};
use vasreach_core::invariant::{check_certificate, embed, Certificate, CertificateCheck};
use vasreach_core::mrgs::{
    check_large_acceptance, input_loop_condition, is_perfect, large_solution_condition,
    output_loop_condition, realize_accepted,
};
use vasreach_core::presburger;
use vasreach_core::semilinear::{dim_linear, intersect_linear, interior_contains, parse_linear, LinearSet};
use vasreach_core::vas::{karp_miller_covers, VassSystem};

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "vasreach", version, about = "Reachability, coverability and invariant certificates for VAS and VASS")]
struct Cli {
    /// Print one JSON record instead of text.
    #[arg(long, global = true)]
    porcelain: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide reachability, returning a witness or a certificate.
    Reach(ReachArgs),
    /// Validate a non-reachability certificate.
    CheckCert {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// File holding the invariant formula.
        #[arg(long)]
        cert: PathBuf,
    },
    /// Karp–Miller coverability; target entries may be `T`.
    Covers {
        file: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Operations on the linear sets listed in a file, one per line.
    Semilinear {
        #[command(subcommand)]
        op: SemilinearOp,
    },
    /// Report the perfectness conditions of an MRGS.
    MrgsCheck {
        file: PathBuf,
        /// Also build and validate an accepted sequence at this level.
        #[arg(long)]
        realize: Option<u64>,
    },
}

#[derive(Args)]
struct ReachArgs {
    file: PathBuf,
    /// Source, e.g. `0,2` or `p:1,0,0`.
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    /// Try half-space templates before formula enumeration.
    #[arg(long)]
    templates: bool,
    #[arg(long, default_value_t = 12)]
    rounds: u64,
    /// Node expansions per round.
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    /// Candidate formulas per round.
    #[arg(long, default_value_t = 20_000)]
    formulas: u64,
    /// Where to write the certificate formula (default: stdout only).
    #[arg(long)]
    cert_out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SemilinearOp {
    /// Intersect the first two sets.
    Intersect { file: PathBuf },
    /// Dimension of every set.
    Dim { file: PathBuf },
    /// Is the point in the interior of the first set's period monoid?
    Interior {
        file: PathBuf,
        #[arg(long)]
        point: String,
    },
}

struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(EXIT_USAGE, e.to_string())
    }
}

struct Outcome {
    code: u8,
    text: String,
    record: Value,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))
}

fn resolve_point(sys: &VassSystem, spec: &str) -> Result<(usize, IntVector), Failure> {
    let (state, cfg) = parse_point(spec)?;
    let q = match state {
        Some(name) => sys.state_index(&name)?,
        None => 0,
    };
    if cfg.len() != sys.dim() {
        return Err(Failure(
            EXIT_USAGE,
            format!("point `{spec}` has {} entries, the system has dimension {}", cfg.len(), sys.dim()),
        ));
    }
    Ok((q, cfg))
}

fn show(v: &[num_bigint::BigInt]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

fn reach(a: &ReachArgs) -> Result<Outcome, Failure> {
    let sys = parse_system(&read(&a.file)?)?;
    let from = resolve_point(&sys, &a.from)?;
    let to = resolve_point(&sys, &a.to)?;
    let cfg = DeciderConfig {
        max_rounds: Some(a.rounds),
        step_budget: a.steps,
        formula_budget: a.formulas,
        templates: a.templates,
        ..DeciderConfig::default()
    };
    Ok(match decide_reach(&sys, from, to, &cfg)? {
        Verdict::Reachable(w) => Outcome {
            code: EXIT_YES,
            text: format!("reachable\nwitness {}\nlength {}", w.word.concat(), w.word.len()),
            record: json!({"command": "reach", "verdict": "reachable", "witness": w.word, "length": w.word.len()}),
        },
        Verdict::Unreachable(cert) => {
            let formula = cert.formula.to_string();
            if let Some(path) = &a.cert_out {
                fs::write(path, format!("{formula}\n"))
                    .map_err(|e| Failure(EXIT_USAGE, format!("{}: {e}", path.display())))?;
            }
            Outcome {
                code: EXIT_NO,
                text: format!("unreachable\ncertificate {formula}"),
                record: json!({"command": "reach", "verdict": "unreachable", "certificate": formula}),
            }
        }
        Verdict::BudgetExhausted(s) => Outcome {
            code: EXIT_BUDGET,
            text: format!(
                "budget exhausted after {} rounds ({} nodes expanded, {} formulas and {} templates checked)",
                s.rounds, s.expanded, s.formulas_checked, s.templates_checked
            ),
            record: json!({
                "command": "reach", "verdict": "budget-exhausted", "rounds": s.rounds,
                "expanded": s.expanded, "formulas_checked": s.formulas_checked,
                "templates_checked": s.templates_checked,
            }),
        },
    })
}

fn check_cert(file: &Path, from: &str, to: &str, cert: &Path) -> Result<Outcome, Failure> {
    let sys = parse_system(&read(file)?)?;
    let (p, s) = resolve_point(&sys, from)?;
    let (q, t) = resolve_point(&sys, to)?;
    let text = read(cert)?;
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let formula = presburger::parse(&body.join(" "))?;
    let c = Certificate {
        formula,
        source: embed(&sys, p, &s),
        target: embed(&sys, q, &t),
    };
    Ok(match check_certificate(&c, &sys) {
        CertificateCheck::Valid => Outcome {
            code: EXIT_YES,
            text: "valid".into(),
            record: json!({"command": "check-cert", "valid": true}),
        },
        CertificateCheck::Invalid(reasons) => {
            let reasons: Vec<String> = reasons.iter().map(ToString::to_string).collect();
            Outcome {
                code: EXIT_NO,
                text: format!("invalid\n{}", reasons.join("\n")),
                record: json!({"command": "check-cert", "valid": false, "reasons": reasons}),
            }
        }
    })
}

fn covers(file: &Path, from: &str, to: &str) -> Result<Outcome, Failure> {
    let sys = parse_system(&read(file)?)?;
    let state = |name: Option<String>| -> Result<usize, Failure> {
        Ok(match name {
            Some(n) => sys.state_index(&n)?,
            None => 0,
        })
    };
    let (ps, init) = parse_ext_point(from)?;
    let (pt, target) = parse_ext_point(to)?;
    let (p, q) = (state(ps)?, state(pt)?);
    let yes = karp_miller_covers(&sys, (p, init.clone()), (q, target.clone()))?;
    let word = if yes { "coverable" } else { "not coverable" };
    Ok(Outcome {
        code: if yes { EXIT_YES } else { EXIT_NO },
        text: word.into(),
        record: json!({"command": "covers", "from": init.to_string(), "to": target.to_string(), "coverable": yes}),
    })
}

fn linear_sets(file: &Path) -> Result<Vec<LinearSet>, Failure> {
    read(file)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_linear(l).map_err(Failure::from))
        .collect()
}

fn semilinear(op: &SemilinearOp) -> Result<Outcome, Failure> {
    match op {
        SemilinearOp::Intersect { file } => {
            let sets = linear_sets(file)?;
            let [a, b, ..] = sets.as_slice() else {
                return Err(Failure(EXIT_USAGE, "need two linear sets".into()));
            };
            let s = intersect_linear(a, b)?;
            let dim = vasreach_core::semilinear::dim_semilinear(&s);
            let parts: Vec<String> = s.components.iter().map(ToString::to_string).collect();
            Ok(Outcome {
                code: EXIT_YES,
                text: format!("{}\ndim {dim}", if parts.is_empty() { "empty".into() } else { parts.join("\n") }),
                record: json!({"command": "semilinear-intersect", "components": parts, "dim": dim.to_string()}),
            })
        }
        SemilinearOp::Dim { file } => {
            let dims: Vec<usize> = linear_sets(file)?.iter().map(dim_linear).collect();
            let lines: Vec<String> = dims.iter().map(|d| format!("dim {d}")).collect();
            Ok(Outcome {
                code: EXIT_YES,
                text: lines.join("\n"),
                record: json!({"command": "semilinear-dim", "dims": dims}),
            })
        }
        SemilinearOp::Interior { file, point } => {
            let sets = linear_sets(file)?;
            let Some(first) = sets.first() else {
                return Err(Failure(EXIT_USAGE, "no linear set in file".into()));
            };
            let v = point
                .trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|w| w.trim().parse::<num_bigint::BigInt>())
                .collect::<Result<IntVector, _>>()?;
            let yes = interior_contains(&first.periods, &v)?;
            Ok(Outcome {
                code: if yes { EXIT_YES } else { EXIT_NO },
                text: if yes { "interior" } else { "not interior" }.into(),
                record: json!({"command": "semilinear-interior", "point": show(&v), "interior": yes}),
            })
        }
    }
}

fn mrgs_check(file: &Path, realize: Option<u64>) -> Result<Outcome, Failure> {
    let u = parse_mrgs(&read(file)?)?;
    let lsc = large_solution_condition(&u);
    let mut loops = Vec::new();
    for b in u.blocks() {
        loops.push((input_loop_condition(b)?, output_loop_condition(b)?));
    }
    let perfect = is_perfect(&u)?;
    let mut text = format!("large_solution={lsc}\n");
    for (j, (i, o)) in loops.iter().enumerate() {
        text += &format!("graph {j}: input_loop={i} output_loop={o}\n");
    }
    text += &format!("perfect={perfect}");
    let mut record = json!({
        "command": "mrgs-check", "large_solution": lsc, "perfect": perfect,
        "loops": loops.iter().map(|(i, o)| json!({"input": i, "output": o})).collect::<Vec<_>>(),
    });
    if let Some(c) = realize {
        match realize_accepted(&u, c)? {
            Some(seq) => {
                check_large_acceptance(&u, &seq, c).map_err(|e| Failure(EXIT_USAGE, e))?;
                let word = seq.word(&u);
                text += &format!("\nrealized level {c}: word length {}", word.len());
                for t in &seq.blocks {
                    text += &format!("\n  {} -> {} ({} steps)", show(&t.start), show(&t.end), t.path.len());
                }
                record["realized"] = json!({"level": c, "length": word.len()});
            }
            None => {
                text += "\nnot perfect: nothing to realize";
                record["realized"] = Value::Null;
            }
        }
    }
    Ok(Outcome {
        code: if perfect { EXIT_YES } else { EXIT_NO },
        text,
        record,
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Reach(a) => reach(a),
        Command::CheckCert { file, from, to, cert } => check_cert(file, from, to, cert),
        Command::Covers { file, from, to } => covers(file, from, to),
        Command::Semilinear { op } => semilinear(op),
        Command::MrgsCheck { file, realize } => mrgs_check(file, *realize),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(o) => {
            if cli.porcelain {
                println!("{}", o.record);
            } else {
                println!("{}", o.text);
            }
            ExitCode::from(o.code)
        }
        Err(Failure(code, msg)) => {
            if cli.porcelain {
                println!("{}", json!({"error": msg}));
            }
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
