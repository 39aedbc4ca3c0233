use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use pproduct::document::{format_word, parse_word, Document};
use pproduct::polyauto::{self, CommutativityReport, ZeroOptions, ZeronessCertificate};
use pproduct::rules::{self, Bilinear, Simple};
use pproduct::{Error, Limits, PolyAutomaton, ProductRule};

#[derive(Args, Clone)]
struct Common {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
    max_degree: u32,
    #[arg(long, global = true, default_value_t = 32, value_parser = clap::value_parser!(u32).range(1..))]
    max_ideal_levels: u32,
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_term_nodes: u64,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true, default_value_t = 60, value_parser = clap::value_parser!(u64).range(1..))]
    timeout: u64,
}

impl Common {
    fn limits(&self) -> Limits {
        Limits {
            max_degree: self.max_degree,
            max_ideal_levels: self.max_ideal_levels as usize,
            max_term_nodes: self.max_term_nodes,
            ..Limits::default()
        }
        .with_timeout(Duration::from_secs(self.timeout))
    }
}

#[derive(Args)]
struct RuleArg {
    /// Rule expression over x, xd, y, yd, or one of hadamard, shuffle,
    /// infiltration, trivial0.
    #[arg(long)]
    rule: String,
}

#[derive(Args)]
struct AutomatonArg {
    /// Automaton JSON document.
    #[arg(long)]
    automaton: PathBuf,
    /// Initial state, overriding the document's.
    #[arg(long)]
    initial: Option<String>,
}

#[derive(Args)]
struct DeciderArgs {
    /// Build the ideal chain from every word instead of pruning.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the rule defines a commutative algebra.
    CheckRule(RuleArg),
    /// Print the (α, β, γ) form of a special rule.
    Classify(RuleArg),
    /// Print the multiplicative identity parameter η.
    Unit(RuleArg),
    /// Coefficient of one word.
    Coeff {
        #[command(flatten)]
        input: AutomatonArg,
        /// Letters concatenated (single-character alphabets) or separated by
        /// spaces; "" or ε for the empty word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Coefficients of all words up to a length.
    Run {
        #[command(flatten)]
        input: AutomatonArg,
        #[arg(long)]
        max_length: usize,
    },
    /// Decide whether the series is zero.
    Zeroness {
        #[command(flatten)]
        input: AutomatonArg,
        #[command(flatten)]
        decider: DeciderArgs,
        /// Only accept a single variable as initial state.
        #[arg(long)]
        strict_initial: bool,
    },
    /// Decide whether two automata denote the same series.
    Equiv {
        #[command(flatten)]
        input: AutomatonArg,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        other_initial: Option<String>,
        #[command(flatten)]
        decider: DeciderArgs,
    },
    /// Decide whether the series is commutative.
    Commutative {
        #[command(flatten)]
        input: AutomatonArg,
        #[command(flatten)]
        decider: DeciderArgs,
    },
    /// Print an automaton that is commutative iff the input series is zero.
    ReduceEq2comm {
        #[command(flatten)]
        input: AutomatonArg,
        #[arg(long, default_value = "#a")]
        fresh_a: String,
        #[arg(long, default_value = "#b")]
        fresh_b: String,
    },
}

#[derive(Parser)]
#[command(name = "pproduct", version, about = "Product rules, P-automata and their decision procedures")]
struct Top {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

enum Failure {
    Input(String),
    Limit(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Limit(_) => 3,
            Failure::Precondition(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Limit(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ResourceLimit(_) => Failure::Limit(msg),
            Error::Precondition(_) | Error::Mismatch(_) => Failure::Precondition(msg),
            Error::Parse { .. }
            | Error::UnassignedVariable(_)
            | Error::UnknownVariable(_)
            | Error::ForeignVariable(_)
            | Error::UnknownLetter(_)
            | Error::Document(_) => Failure::Input(msg),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let top = Top::parse();
    let json_mode = top.common.json;
    match dispatch(&top.command, &top.common) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            if json_mode {
                let v = json!({
                    "error": f.message(),
                    "limits_hit": matches!(f, Failure::Limit(_)),
                });
                println!("{}", pretty(&v));
            }
            ExitCode::from(f.code())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn load(path: &Path, initial: Option<&str>) -> Result<Document, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let doc = Document::parse(&text)?;
    Ok(match initial {
        Some(i) => doc.with_initial(i)?,
        None => doc,
    })
}

fn shown(alphabet: &[String], w: &[String]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        format_word(alphabet, w)
    }
}

fn dispatch(cmd: &Command, common: &Common) -> Outcome {
    let limits = common.limits();
    let json_mode = common.json;
    match cmd {
        Command::CheckRule(r) => {
            let rule = ProductRule::parse(&r.rule)?;
            if json_mode {
                return Ok(pretty(&rule_json(&rule)) + "\n");
            }
            let s = rule.speciality();
            let mut out = String::new();
            match &s.simple {
                Some(simple) => {
                    out += &format!("special: yes; simple: {simple}; {}\n", unit_text(simple));
                }
                None => {
                    let (id, diff) = s.failing_identity.as_ref().expect("non-special rule has a failing identity");
                    out += &format!("special: no; failing: {id}\n");
                    out += &format!("witness: {diff}\n");
                }
            }
            Ok(out)
        }
        Command::Classify(r) => {
            let rule = ProductRule::parse(&r.rule)?;
            if json_mode {
                return Ok(pretty(&rule_json(&rule)) + "\n");
            }
            let s = rule.speciality();
            let mut out = String::new();
            match &s.simple {
                Some(simple) => out += &format!("simple: {simple}; {}\n", unit_text(simple)),
                None => {
                    let (id, _) = s.failing_identity.as_ref().expect("failing identity");
                    out += &format!("simple: none; failing: {id}\n");
                }
            }
            match Bilinear::of(rule.normal_form()) {
                Some(b) => {
                    out += &format!(
                        "bilinear: ({}, {}, {}, {})\n",
                        b.alpha, b.beta1, b.beta2, b.gamma
                    );
                    let res: Vec<String> = b.associativity_residues().iter().map(|r| r.to_string()).collect();
                    out += &format!("associativity residues: [{}]\n", res.join(", "));
                }
                None => out += "bilinear: no\n",
            }
            Ok(out)
        }
        Command::Unit(r) => {
            let rule = ProductRule::parse(&r.rule)?;
            let simple = rule.simple().ok_or_else(|| {
                Failure::Precondition(format!("rule `{rule}` is not special, so it has no simple form"))
            })?;
            if json_mode {
                let v = json!({
                    "rule": rule.to_string(),
                    "unit_eta": rule.unit_eta().map(|e| e.to_string()),
                    "degenerate": simple.is_degenerate(),
                });
                return Ok(pretty(&v) + "\n");
            }
            Ok(format!("{}\n", unit_text(simple)))
        }
        Command::Coeff { input, word } => {
            let doc = load(&input.automaton, input.initial.as_deref())?;
            let w = parse_word(doc.alphabet(), word)?;
            let c = doc.coefficient(&w, &limits)?;
            if json_mode {
                let v = json!({"word": format_word(doc.alphabet(), &w), "coefficient": c.to_string()});
                return Ok(pretty(&v) + "\n");
            }
            Ok(format!("{c}\n"))
        }
        Command::Run { input, max_length } => {
            let doc = load(&input.automaton, input.initial.as_deref())?;
            let table = doc.coefficients(*max_length, &limits)?;
            if json_mode {
                let rows: Vec<Value> = table
                    .iter()
                    .map(|(w, c)| json!({"word": format_word(doc.alphabet(), w), "coefficient": c.to_string()}))
                    .collect();
                return Ok(pretty(&json!({ "coefficients": rows })) + "\n");
            }
            Ok(table
                .iter()
                .map(|(w, c)| format!("{} {c}\n", shown(doc.alphabet(), w)))
                .collect())
        }
        Command::Zeroness {
            input,
            decider,
            strict_initial,
        } => {
            let doc = load(&input.automaton, input.initial.as_deref())?;
            let (a, p) = doc.to_poly()?;
            let opts = ZeroOptions {
                prune: !decider.no_prune,
                strict_initial: *strict_initial,
            };
            let cert = polyauto::zeroness(&a, &p, &opts, &limits)?;
            Ok(certificate_report(&a, &cert, json_mode))
        }
        Command::Equiv {
            input,
            other,
            other_initial,
            decider,
        } => {
            let da = load(&input.automaton, input.initial.as_deref())?;
            let db = load(other, other_initial.as_deref())?;
            let (a, p) = da.to_poly()?;
            let (b, q) = db.to_poly()?;
            let opts = ZeroOptions {
                prune: !decider.no_prune,
                strict_initial: false,
            };
            let cert = polyauto::equivalence(&a, &p, &b, &q, &opts, &limits)?;
            Ok(certificate_report(&a, &cert, json_mode))
        }
        Command::Commutative { input, decider } => {
            let doc = load(&input.automaton, input.initial.as_deref())?;
            let (a, p) = doc.to_poly()?;
            let opts = ZeroOptions {
                prune: !decider.no_prune,
                strict_initial: false,
            };
            let rep = polyauto::is_commutative(&a, &p, &opts, &limits)?;
            Ok(commutativity_report(&a, &rep, json_mode))
        }
        Command::ReduceEq2comm {
            input,
            fresh_a,
            fresh_b,
        } => {
            let doc = load(&input.automaton, input.initial.as_deref())?;
            let (a, p) = doc.to_poly()?;
            let (b, g) = polyauto::equivalence_to_commutativity(&a, &p, fresh_a, fresh_b)?;
            let out = Document::Poly {
                automaton: b,
                initial: g,
            };
            Ok(out.to_json_string() + "\n")
        }
    }
}

fn unit_text(s: &Simple) -> String {
    match rules::multiplicative_unit(s) {
        Some(eta) => format!("unit eta = {eta}"),
        None => "unit: none (degenerate)".to_string(),
    }
}

fn rule_json(rule: &ProductRule) -> Value {
    let s = rule.speciality();
    let nf = rule.normal_form();
    let bilinear = Bilinear::of(nf);
    json!({
        "rule": rule.to_string(),
        "normal_form": nf.to_string(),
        "special": s.is_special(),
        "add_ok": s.add_ok,
        "assoc_ok": s.assoc_ok,
        "comm_ok": s.comm_ok,
        "simple": s.simple.as_ref().map(|t| vec![t.alpha.to_string(), t.beta.to_string(), t.gamma.to_string()]),
        "unit_eta": s.unit_eta.as_ref().map(|e| e.to_string()),
        "failing_identity": s.failing_identity.as_ref().map(|(id, d)| json!({
            "identity": id.to_string(),
            "difference": d.to_string(),
        })),
        "bilinear": bilinear.as_ref().map(|b| vec![
            b.alpha.to_string(), b.beta1.to_string(), b.beta2.to_string(), b.gamma.to_string(),
        ]),
        "associativity_residues": bilinear.as_ref().map(|b| {
            b.associativity_residues().iter().map(|r| r.to_string()).collect::<Vec<_>>()
        }),
        "ideal_compatible": rules::ideal_compatible(nf),
    })
}

fn certificate_report(a: &PolyAutomaton, cert: &ZeronessCertificate, json_mode: bool) -> String {
    let alphabet = a.alphabet();
    if json_mode {
        return pretty(&cert.to_json(|w| format_word(alphabet, w))) + "\n";
    }
    let mut out = String::new();
    out += if cert.verdict { "YES\n" } else { "NO\n" };
    out += &format!("N = {}\n", cert.n);
    out += &format!("generators: {}\n", cert.generators.len());
    out += &format!("words checked: {}\n", cert.words_checked);
    if let Some((w, c)) = &cert.witness {
        out += &format!("witness: {} {c}\n", shown(alphabet, w));
    }
    out
}

fn commutativity_report(a: &PolyAutomaton, rep: &CommutativityReport, json_mode: bool) -> String {
    let alphabet = a.alphabet();
    if json_mode {
        let v = json!({
            "commutative": rep.commutative,
            "witness": rep.witness.as_ref().map(|(u, v)| vec![format_word(alphabet, u), format_word(alphabet, v)]),
            "certificate": rep.certificate.as_ref().map(|c| c.to_json(|w| format_word(alphabet, w))),
            "limits_hit": false,
        });
        return pretty(&v) + "\n";
    }
    let mut out = String::new();
    out += if rep.commutative { "YES\n" } else { "NO\n" };
    if let Some((u, v)) = &rep.witness {
        out += &format!("witness: {} vs {}\n", shown(alphabet, u), shown(alphabet, v));
    }
    out
}
