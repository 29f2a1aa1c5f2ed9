//! Command-line interface. Every command prints one JSON report on stdout.
//!
//! Exit status: 0 when the command ran (whatever the verdict), 2 for input
//! errors, 3 when an identity that must hold exactly fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::AlgebraElement;
use crate::certs::{
    self, decide, malnormality_scan, normalizer_check, ss_via_action, ss_witness, st_exceptional,
    st_via_action, view, wss_witness, Certificate, Condition, Method, Status, Verdict,
};
use crate::cosets::{coset_orbit, qn_membership};
use crate::elem::Elem;
use crate::error::{Error, Result};
use crate::experiments::{
    build_counterexample, corollary_hypotheses, decay_profile, free_product_mixing_check,
};
use crate::group::{Budget, SearchOutcome, Triple, DEFAULT_ELEMENT_CAP};
use crate::instances::{instance, specs};
use crate::literal::parse_list;
use crate::report::{
    map_outcome, ss_search, verify, Payload, Report, ReportBody, ReproEntry, Timing, SCHEMA_VERSION,
};

const LITERALS: &str = "Element literals depend on the instance:
  Z² ⋊ Z (rotation4, trivial-action)   ((1,0),2)   or a bare base vector (1,0) / 1,0
  Z/2 ≀ Z (wreath-z2-z)                (d0+d3,1)   base maps as d<point>, e for empty
  Z ∗ Z (free-zz, f2-cyclic)           a^2 b^-1    e for the empty word
  products (prod-wreath2)              [x, y]      one literal per factor
  Z² (z2-line)                         (0,5)
The canonical forms printed in reports, such as <(1,0),2>, are accepted too.
Sets separate elements with ';'. Algebra elements are ';'-separated terms
`coefficient*element` or `element`; coefficients are exact, e.g. 3, -1/2, i, 1/2-2i.";

#[derive(Parser, Debug)]
#[command(name = "mixlab", version, about = "Certificate-producing checks for mixing conditions on H ≤ K ≤ G", after_help = LITERALS)]
pub struct Cli {
    /// Cap on elements enumerated by any single ball or orbit.
    #[arg(long, global = true, env = "MIXLAB_MAX_ELEMENTS", default_value_t = DEFAULT_ELEMENT_CAP)]
    pub max_elements: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    #[arg(long)]
    pub instance: String,
    #[arg(long, default_value_t = 6)]
    pub radius: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Ss,
    St,
    Wss,
    Malnormal,
    Normalizer,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List built-in instances.
    Instances,
    /// Decide a condition, or search for a witness on given data.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        target: Target,
        /// A finite set F ⊆ G∖K (ss, st, wss).
        #[arg(long)]
        set: Option<String>,
        /// A finite set E ⊆ A∖{e} for the action criterion (ss).
        #[arg(long)]
        action_set: Option<String>,
        /// The element g of the one-sided check (wss).
        #[arg(long)]
        g: Option<String>,
        /// A base element a ≠ e whose stabilizer to sample (st).
        #[arg(long)]
        a: Option<String>,
    },
    /// One-sided quasi-normalizer membership of g.
    Qn {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
    },
    /// H-orbit of the coset gH.
    Orbit {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        g: String,
    },
    /// Profile of ‖E_H(x·λ_h·y)‖₂² over the H-ball.
    Decay {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Also check the free-product cancellation prediction.
        #[arg(long)]
        free_product: bool,
        /// Write the profile as TSV to this path.
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Build the finite-orbit element x = Σ λ_g and check it.
    Counterexample {
        #[command(flatten)]
        target: Target,
        #[arg(long, allow_hyphen_values = true)]
        a0: String,
    },
    /// Report whether the normalizer identity is licensed.
    Corollary {
        #[command(flatten)]
        target: Target,
    },
    /// Replay the certificates in a report file.
    Verify { file: PathBuf },
    /// Write the acceptance reports into a directory and verify them.
    Repro {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses arguments, runs, prints; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(report) => {
            // A closed pipe on stdout is not an error of the command.
            let _ = writeln!(std::io::stdout().lock(), "{}", report.to_json());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses a full argument list (program name first) and runs it. Usage
/// errors, `--help` included, come back as input errors.
pub fn run_args<I, T>(args: I) -> Result<Report>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::input(e.to_string()))?;
    run(&cli)
}

pub fn run(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let body = execute(&cli.command, cli.max_elements)?;
    Ok(Report {
        body,
        timing: Timing {
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

fn budget(target: &Target, cap: usize) -> Result<Budget> {
    Budget::new(target.radius, cap)
}

fn body(t: Option<&Triple>, command: &str, budget: Option<Budget>, payload: Payload) -> ReportBody {
    ReportBody {
        schema_version: SCHEMA_VERSION,
        instance: t.map(|t| t.id.clone()),
        command: command.to_string(),
        budget,
        payload,
    }
}

/// The instance's own literal syntax, or the canonical form used in reports.
fn parse_elem(t: &Triple, s: &str) -> Result<Elem> {
    t.g.parse(s).or_else(|e| match s.trim().parse::<Elem>() {
        Ok(x) if t.g.is_element(&x) => Ok(x),
        _ => Err(e),
    })
}

fn parse_set(t: &Triple, s: &str) -> Result<Vec<Elem>> {
    parse_list(s, |item| parse_elem(t, item))
}

fn parse_base(t: &Triple, s: &str) -> Result<Elem> {
    let v = view(t)?;
    v.group.base().parse(s)
}

fn execute(command: &Command, cap: usize) -> Result<ReportBody> {
    match command {
        Command::Instances => Ok(body(
            None,
            "instances",
            None,
            Payload::Instances { instances: specs() },
        )),
        Command::Check {
            kind,
            target,
            set,
            action_set,
            g,
            a,
        } => {
            let t = instance(&target.instance)?;
            let b = budget(target, cap)?;
            let name = format!(
                "check {}",
                kind.to_possible_value().expect("named").get_name()
            );
            let payload = check(
                &t,
                *kind,
                &b,
                set.as_deref(),
                action_set.as_deref(),
                g.as_deref(),
                a.as_deref(),
            )?;
            Ok(body(Some(&t), &name, Some(b), payload))
        }
        Command::Qn { target, g } => {
            let t = instance(&target.instance)?;
            let b = budget(target, cap)?;
            let report = qn_membership(&t, &parse_elem(&t, g)?, &b)?;
            Ok(body(Some(&t), "qn", Some(b), Payload::Qn { report }))
        }
        Command::Orbit { target, g } => {
            let t = instance(&target.instance)?;
            let b = budget(target, cap)?;
            let report = coset_orbit(&t, &parse_elem(&t, g)?, &b)?;
            Ok(body(Some(&t), "orbit", Some(b), Payload::Orbit { report }))
        }
        Command::Decay {
            target,
            x,
            y,
            free_product,
            tsv,
        } => {
            let t = instance(&target.instance)?;
            let b = budget(target, cap)?;
            let (x, y) = (
                AlgebraElement::parse(t.g.clone(), x)?,
                AlgebraElement::parse(t.g.clone(), y)?,
            );
            let profile = if *free_product {
                free_product_mixing_check(&t, &x, &y, &b)?
            } else {
                decay_profile(&t, &x, &y, &b)?
            };
            if let Some(path) = tsv {
                fs::write(path, profile.to_tsv())
                    .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(body(Some(&t), "decay", Some(b), Payload::Decay { profile }))
        }
        Command::Counterexample { target, a0 } => {
            let t = instance(&target.instance)?;
            let b = budget(target, cap)?;
            let report = build_counterexample(&t, &parse_base(&t, a0)?, &b)?;
            Ok(body(
                Some(&t),
                "counterexample",
                Some(b),
                Payload::Counterexample { report },
            ))
        }
        Command::Corollary { target } => {
            let t = instance(&target.instance)?;
            let b = budget(target, cap)?;
            let report = corollary_hypotheses(&t, &b)?;
            Ok(body(
                Some(&t),
                "corollary",
                Some(b),
                Payload::Corollary { report },
            ))
        }
        Command::Verify { file } => {
            let text = fs::read_to_string(file)
                .map_err(|e| Error::input(format!("cannot read {}: {e}", file.display())))?;
            let verified = verify(&Report::from_json(&text)?)?;
            Ok(body(None, "verify", None, Payload::Verify { verified }))
        }
        Command::Repro { out } => repro(out, cap),
    }
}

fn search_verdict(condition: Condition, certificate: Certificate, rule: &str) -> Verdict {
    Verdict {
        condition,
        status: Status::Fails { certificate },
        method: Method::ClosedForm {
            rule: rule.to_string(),
        },
    }
}

/// A refuted `ss_witness` search as a failing (SS) verdict: an invariant set
/// of base elements when `F` consists of them, else the finite coset orbit.
fn ss_refutation(t: &Triple, f: &[Elem], evidence: &[Elem], rule: &str) -> Verdict {
    if let Ok(v) = view(t) {
        let bases: Option<Vec<Elem>> = f
            .iter()
            .map(|g| {
                let (a, k) = v.group.split(g);
                (*k == v.group.acting().identity()).then(|| a.clone())
            })
            .collect();
        if let Some(set) = bases {
            let cert = Certificate::InvariantSet { set };
            if certs::replay(t, &cert) {
                return search_verdict(Condition::Ss, cert, rule);
            }
        }
    }
    let cert = Certificate::FiniteOrbit {
        g: evidence[0].clone(),
        cosets: evidence.to_vec(),
    };
    search_verdict(Condition::Ss, cert, rule)
}

#[allow(clippy::too_many_arguments)]
fn check(
    t: &Triple,
    kind: CheckKind,
    b: &Budget,
    set: Option<&str>,
    action_set: Option<&str>,
    g: Option<&str>,
    a: Option<&str>,
) -> Result<Payload> {
    let search = |outcome, verdict| Ok(Payload::Search { outcome, verdict });
    match kind {
        CheckKind::Ss => match (set, action_set) {
            (Some(_), Some(_)) => Err(Error::input("give either --set or --action-set")),
            (Some(s), None) => {
                let f = parse_set(t, s)?;
                let outcome = ss_witness(t, &f, b)?;
                let verdict = match &outcome {
                    SearchOutcome::RefutedWithin { evidence, rule, .. } => {
                        Some(ss_refutation(t, &f, evidence, rule))
                    }
                    _ => None,
                };
                search(ss_search(outcome), verdict)
            }
            (None, Some(s)) => {
                let e = parse_list(s, |item| parse_base(t, item))?;
                let outcome = ss_via_action(t, &e, b)?;
                let verdict = match &outcome {
                    SearchOutcome::RefutedWithin { rule, .. } => Some(search_verdict(
                        Condition::Ss,
                        Certificate::InvariantSet { set: e.clone() },
                        rule,
                    ))
                    .filter(|v| certs::replay_verdict(t, v)),
                    _ => None,
                };
                search(map_outcome(outcome, Certificate::Disjointness), verdict)
            }
            (None, None) => Ok(Payload::Verdict {
                verdict: decide(t, Condition::Ss, b)?,
            }),
        },
        CheckKind::St => match (set, a) {
            (Some(_), Some(_)) => Err(Error::input("give either --set or --a")),
            (Some(s), None) => {
                let f = parse_set(t, s)?;
                search(
                    map_outcome(st_exceptional(t, &f, b)?, Certificate::ExceptionalSet),
                    None,
                )
            }
            (None, Some(s)) => {
                let a = parse_base(t, s)?;
                search(
                    map_outcome(st_via_action(t, &a, b)?, Certificate::Stabilizer),
                    None,
                )
            }
            (None, None) => Ok(Payload::Verdict {
                verdict: decide(t, Condition::St, b)?,
            }),
        },
        CheckKind::Wss => {
            let (Some(s), Some(g)) = (set, g) else {
                return Err(Error::input("check wss needs --set and --g"));
            };
            let f = parse_set(t, s)?;
            let g = parse_elem(t, g)?;
            search(
                map_outcome(wss_witness(t, &f, &g, b)?, Certificate::WssWitness),
                None,
            )
        }
        CheckKind::Malnormal => Ok(Payload::Verdict {
            verdict: malnormality_scan(t, b)?,
        }),
        CheckKind::Normalizer => Ok(Payload::Verdict {
            verdict: normalizer_check(t, b)?,
        }),
    }
}

/// Argument lists of the reports written by `repro`, keyed by file stem.
pub const REPRO_COMMANDS: &[(&str, &[&str])] = &[
    (
        "check-st-wreath",
        &["check", "st", "--instance", "wreath-z2-z", "--radius", "6"],
    ),
    (
        "check-ss-wreath",
        &["check", "ss", "--instance", "wreath-z2-z", "--radius", "6"],
    ),
    (
        "ss-witness-wreath",
        &[
            "check",
            "ss",
            "--instance",
            "wreath-z2-z",
            "--set",
            "(d0,0)",
        ],
    ),
    (
        "check-ss-rotation4",
        &["check", "ss", "--instance", "rotation4", "--radius", "6"],
    ),
    (
        "check-st-rotation4",
        &["check", "st", "--instance", "rotation4", "--radius", "6"],
    ),
    (
        "ss-set-rotation4",
        &[
            "check",
            "ss",
            "--instance",
            "rotation4",
            "--set",
            "(1,0);(0,1);(-1,0);(0,-1)",
        ],
    ),
    (
        "stabilizer-rotation4",
        &[
            "check",
            "st",
            "--instance",
            "rotation4",
            "--a",
            "(1,0)",
            "--radius",
            "12",
        ],
    ),
    (
        "normalizer-rotation4",
        &[
            "check",
            "normalizer",
            "--instance",
            "rotation4",
            "--radius",
            "4",
        ],
    ),
    (
        "malnormal-rotation4",
        &[
            "check",
            "malnormal",
            "--instance",
            "rotation4",
            "--radius",
            "4",
        ],
    ),
    (
        "orbit-rotation4",
        &["orbit", "--instance", "rotation4", "--g", "((1,0),0)"],
    ),
    (
        "counterexample-rotation4",
        &["counterexample", "--instance", "rotation4", "--a0", "1,0"],
    ),
    (
        "decay-rotation4",
        &[
            "decay",
            "--instance",
            "rotation4",
            "--x",
            "(1,0)",
            "--y",
            "(1,0)",
            "--radius",
            "20",
        ],
    ),
    (
        "malnormal-free-zz",
        &[
            "check",
            "malnormal",
            "--instance",
            "free-zz",
            "--radius",
            "4",
        ],
    ),
    (
        "check-st-free-zz",
        &["check", "st", "--instance", "free-zz", "--radius", "6"],
    ),
    (
        "check-ss-free-zz",
        &["check", "ss", "--instance", "free-zz", "--radius", "6"],
    ),
    (
        "wss-free-zz",
        &[
            "check",
            "wss",
            "--instance",
            "free-zz",
            "--set",
            "b",
            "--g",
            "b",
        ],
    ),
    (
        "decay-free-zz",
        &[
            "decay",
            "--instance",
            "free-zz",
            "--x",
            "b^-1",
            "--y",
            "b",
            "--radius",
            "20",
            "--free-product",
        ],
    ),
    ("qn-free-zz-b", &["qn", "--instance", "free-zz", "--g", "b"]),
    (
        "qn-free-zz-a3",
        &["qn", "--instance", "free-zz", "--g", "a^3"],
    ),
    (
        "check-st-f2-cyclic",
        &["check", "st", "--instance", "f2-cyclic", "--radius", "4"],
    ),
    (
        "check-ss-prod-wreath2",
        &["check", "ss", "--instance", "prod-wreath2", "--radius", "4"],
    ),
    (
        "check-ss-z2-line",
        &["check", "ss", "--instance", "z2-line", "--radius", "3"],
    ),
    (
        "corollary-wreath",
        &["corollary", "--instance", "wreath-z2-z", "--radius", "4"],
    ),
    (
        "corollary-rotation4",
        &["corollary", "--instance", "rotation4", "--radius", "4"],
    ),
    (
        "corollary-trivial-action",
        &["corollary", "--instance", "trivial-action", "--radius", "4"],
    ),
];

fn repro(out: &Path, cap: usize) -> Result<ReportBody> {
    let io = |e: std::io::Error| Error::input(format!("cannot write under {}: {e}", out.display()));
    fs::create_dir_all(out).map_err(io)?;
    let mut entries = Vec::new();
    for (stem, args) in REPRO_COMMANDS {
        let cli = Cli::try_parse_from(std::iter::once("mixlab").chain(args.iter().copied()))
            .map_err(|e| Error::internal(format!("repro command {stem} does not parse: {e}")))?;
        let report = Report {
            body: execute(&cli.command, cap)?,
            timing: Timing { elapsed_ms: 0 },
        };
        let file = format!("{stem}.json");
        fs::write(out.join(&file), report.to_json()).map_err(io)?;
        entries.push(ReproEntry {
            file,
            command: args.join(" "),
            verified: verify(&report)?,
        });
    }
    Ok(body(None, "repro", None, Payload::Repro { entries }))
}
