mod expr;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use refmon::isystem::{parse_system, parse_system_unchecked};
use refmon::monoid::{elem_to_json, roundtrip_check};
use refmon::props::{run_props, PropConfig};
use refmon::surgery::{collapse_sequence, maximal_decomposition, verify_pushout};
use refmon::{dot, Budget, ElemClass, ISystem, MonElem, Monoid, MonoidError, Violation};

use expr::{eval, Command as Expr};

#[derive(Parser)]
#[command(name = "refmon", version, about = "Monoids of poset-indexed systems of abelian groups")]
struct Cli {
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Samples per property, or per surgery step.
    #[arg(long, global = true, default_value_t = 30)]
    samples: usize,
    /// Node budget for each feasibility search.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_NODES)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory for DOT files.
    #[arg(long, global = true)]
    dot_dir: Option<PathBuf>,
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
    /// Check the system conditions.
    Validate { file: PathBuf },
    /// Evaluate `eq`, `add`, `leq`, `refine`, `primes`, `gens` or `classify`.
    Eval {
        file: PathBuf,
        #[arg(required = true, num_args = 1.., allow_hyphen_values = true)]
        expr: Vec<String>,
    },
    /// Run the sampled property suites.
    Props { file: PathBuf },
    /// Collapse the chain tree below a maximal element, or the disjoint union of all
    /// maximal down-sets when no element is given.
    Surgery { file: PathBuf, element: Option<String> },
    /// Rebuild the system from the monoid and compare.
    Roundtrip { file: PathBuf },
}

/// Exit code 1 is reported through `Ok(1)`.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<MonoidError> for CliError {
    fn from(e: MonoidError) -> Self {
        match e {
            MonoidError::ResourceLimit => CliError::Resource(e.to_string()),
            MonoidError::BadCoordinate(_) | MonoidError::PreconditionViolated(_) | MonoidError::NotChainUp => {
                CliError::Input(e.to_string())
            }
            MonoidError::InternalInvariantViolation(_) => CliError::Internal(e.to_string()),
        }
    }
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, text: impl AsRef<str>, value: Value) {
        let body = match self.format {
            Format::Text => text.as_ref().to_string(),
            Format::Json => serde_json::to_string_pretty(&value).expect("serializable"),
        };
        // a closed pipe (`| head`) is not an error
        let _ = writeln!(std::io::stdout().lock(), "{body}");
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ISystem, CliError> {
    parse_system(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn write_dot(dir: &Option<PathBuf>, name: &str, text: &str) -> Result<(), CliError> {
    if let Some(d) = dir {
        std::fs::create_dir_all(d).map_err(|e| CliError::Input(format!("{}: {e}", d.display())))?;
        let p = d.join(format!("{name}.dot"));
        std::fs::write(&p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn cmd_validate(cli: &Cli, out: &Out, file: &Path) -> Result<u8, CliError> {
    let s = parse_system_unchecked(&read(file)?).map_err(|e| CliError::Input(format!("{}: {e}", file.display())))?;
    let v = s.validate_with(&mut Budget::new(cli.budget));
    write_dot(&cli.dot_dir, "system", &dot::system_dot("system", &s))?;
    let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
    let text = if v.is_empty() { format!("valid: {} elements", s.len()) } else { format!("invalid\n{}", lines.join("\n")) };
    out.emit(text, json!({"valid": v.is_empty(), "elements": s.len(), "violations": lines}));
    Ok(if v.is_empty() {
        0
    } else if v.iter().all(|x| matches!(x, Violation::Undecided { .. })) {
        3
    } else {
        1
    })
}

fn recheck(ok: bool, what: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Internal(format!("{what} did not re-validate")))
    }
}

fn elems_json(m: &Monoid, xs: &[MonElem]) -> Value {
    Value::Array(xs.iter().map(|x| elem_to_json(m, x)).collect())
}

fn cmd_eval(cli: &Cli, out: &Out, file: &Path, text: &str) -> Result<u8, CliError> {
    let m = Monoid::new(load(file)?).with_budget(cli.budget);
    let sys = m.system();
    let is_id = |w: &str| sys.index_of(w).is_ok();
    let cmd = expr::parse(text, &is_id).map_err(|e| CliError::Input(e.to_string()))?;
    let ev = |t: &expr::Term| eval(&m, t).map_err(|e| CliError::Input(e.to_string()));
    match cmd {
        Expr::Eq(a, b) => {
            let r = m.eq(&ev(&a)?, &ev(&b)?);
            out.emit(r.to_string(), json!({"op": "eq", "result": r}));
        }
        Expr::Add(ts) => {
            let xs = ts.iter().map(ev).collect::<Result<Vec<_>, _>>()?;
            let s = m.sum(&xs);
            recheck(m.eq(&s, &xs.iter().fold(m.zero(), |acc, x| m.add(&acc, x))), "sum")?;
            out.emit(render::elem(&m, &s), json!({"op": "add", "result": elem_to_json(&m, &s)}));
        }
        Expr::Leq(a, b) => {
            let (x, y) = (ev(&a)?, ev(&b)?);
            match m.leq(&x, &y)? {
                Some(z) => {
                    recheck(m.eq(&m.add(&x, &z), &y), "witness")?;
                    out.emit(
                        format!("true, witness {}", render::elem(&m, &z)),
                        json!({"op": "leq", "result": true, "witness": elem_to_json(&m, &z)}),
                    );
                }
                None => out.emit("NONE", json!({"op": "leq", "result": false, "witness": null})),
            }
        }
        Expr::Refine(ts) => {
            let [x1, x2, y1, y2] = ts;
            let (x1, x2, y1, y2) = (ev(&x1)?, ev(&x2)?, ev(&y1)?, ev(&y2)?);
            let s = m.refine(&x1, &x2, &y1, &y2)?;
            recheck(m.square_is_valid(&s, &x1, &x2, &y1, &y2), "refinement square")?;
            out.emit(
                render::square(&m, [&x1, &x2], [&y1, &y2], &s),
                json!({"op": "refine", "z11": elem_to_json(&m, &s.z11), "z12": elem_to_json(&m, &s.z12),
                       "z21": elem_to_json(&m, &s.z21), "z22": elem_to_json(&m, &s.z22)}),
            );
        }
        Expr::Primes => match m.primes() {
            Some(ps) => {
                let text: Vec<String> = ps.iter().map(|x| render::elem(&m, x)).collect();
                out.emit(text.join("\n"), json!({"op": "primes", "finite": true, "primes": elems_json(&m, &ps)}));
            }
            None => {
                let fams: Vec<(String, String, String)> = m
                    .prime_families()
                    .into_iter()
                    .map(|f| (sys.id(f.element).to_string(), f.kind.to_string(), f.group.to_string()))
                    .collect();
                let text: Vec<String> = std::iter::once("infinitely many; one family per element:".to_string())
                    .chain(fams.iter().map(|(i, k, g)| format!("{i} ({k}): {g}")))
                    .collect();
                let j: Vec<Value> = fams.iter().map(|(i, k, g)| json!({"element": i, "kind": k, "group": g})).collect();
                out.emit(text.join("\n"), json!({"op": "primes", "finite": false, "families": j}));
            }
        },
        Expr::Gens => {
            let gs = m.generators();
            let text: Vec<String> = gs.iter().map(|x| render::elem(&m, x)).collect();
            out.emit(text.join("\n"), json!({"op": "gens", "generators": elems_json(&m, &gs)}));
        }
        Expr::Classify(t) => {
            let c = match m.classify(&ev(&t)?) {
                ElemClass::Zero => "zero",
                ElemClass::FreeElt => "free",
                ElemClass::RegElt => "regular",
            };
            out.emit(c, json!({"op": "classify", "result": c}));
        }
    }
    Ok(0)
}

fn cmd_props(cli: &Cli, out: &Out, file: &Path) -> Result<u8, CliError> {
    let sys = load(file)?;
    let cfg = PropConfig { seed: cli.seed, samples: cli.samples, budget: cli.budget };
    let r = run_props(&sys, &cfg);
    let mut text = vec![format!("seed {} samples {}", r.seed, r.samples)];
    for p in &r.results {
        let status = if p.failed > 0 {
            "FAIL"
        } else if p.aborted > 0 {
            "LIMIT"
        } else {
            "pass"
        };
        text.push(format!(
            "{status:<5} {:<22} checked {:>4} failed {:>3} aborted {:>3}",
            p.name, p.checked, p.failed, p.aborted
        ));
        if let Some(f) = &p.first_failure {
            text.push(format!("      first failure: {f}"));
        }
    }
    text.push(
        if r.passed() { "all properties passed" } else { "some properties failed" }.to_string(),
    );
    out.emit(text.join("\n"), serde_json::to_value(&r).expect("serializable"));
    Ok(if !r.passed() {
        1
    } else if r.aborted() {
        3
    } else {
        0
    })
}

fn cmd_surgery(cli: &Cli, out: &Out, file: &Path, element: Option<&str>) -> Result<u8, CliError> {
    let sys = load(file)?;
    let trace = match element {
        Some(id) => {
            // the star may be typed as U+2217
            let id = if sys.index_of(id).is_err() && id == "\u{2217}" { "*" } else { id };
            let k = sys.index_of(id).map_err(|e| CliError::Input(e.to_string()))?;
            let tree = sys.restrict(sys.poset().down(k)).ok().and_then(|r| {
                let top = r.index_of(id).ok()?;
                r.poset().chain_tree(top).ok()
            });
            if let Some(t) = tree {
                write_dot(&cli.dot_dir, "chain_tree", &dot::chain_tree_dot("chain_tree", &t))?;
            }
            collapse_sequence(&sys, k)
        }
        None => maximal_decomposition(&sys),
    }
    .map_err(|e| match e {
        refmon::surgery::SurgeryError::NotMaximal(_) => CliError::Input(e.to_string()),
        other => CliError::Internal(other.to_string()),
    })?;
    for (name, text) in dot::trace_dot(&trace) {
        write_dot(&cli.dot_dir, &name, &text)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut text = vec![format!("initial system: {} elements", trace.initial.len())];
    let mut steps = Vec::new();
    let mut failures = 0;
    for (n, st) in trace.steps.iter().enumerate() {
        let ids = |l: refmon::LowerSet| l.iter().map(|i| st.before.id(i).to_string()).collect::<Vec<_>>();
        let rep = verify_pushout(st, cli.samples, &mut rng);
        failures += rep.failures.len();
        text.push(format!(
            "step {}: glue {{{}}} onto {{{}}}, {} -> {} elements, pushout checks {}/{}",
            n + 1,
            ids(st.pair.i2).join(", "),
            ids(st.pair.i1).join(", "),
            st.before.len(),
            st.after.len(),
            rep.checks - rep.failures.len(),
            rep.checks
        ));
        for f in rep.failures.iter().take(3) {
            text.push(format!("  failure: {f}"));
        }
        steps.push(json!({"glued": ids(st.pair.i2), "onto": ids(st.pair.i1), "before": st.before.len(),
                          "after": st.after.len(), "checks": rep.checks, "failures": rep.failures}));
    }
    let iso = trace.final_system.poset().is_isomorphic(trace.target.poset());
    text.push(format!("final system: {} elements, isomorphic to target: {iso}", trace.final_system.len()));
    out.emit(
        text.join("\n"),
        json!({"initial": trace.initial.len(), "steps": steps, "final": trace.final_system.len(), "isomorphic": iso}),
    );
    Ok(if failures == 0 && iso { 0 } else { 1 })
}

fn cmd_roundtrip(cli: &Cli, out: &Out, file: &Path) -> Result<u8, CliError> {
    let m = Monoid::new(load(file)?).with_budget(cli.budget);
    let ok = roundtrip_check(&m)?;
    out.emit(ok.to_string(), json!({"roundtrip": ok}));
    Ok(if ok { 0 } else { 1 })
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let out = Out { format: cli.format };
    match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(cli, &out, file),
        Cmd::Eval { file, expr } => cmd_eval(cli, &out, file, &expr.join(" ")),
        Cmd::Props { file } => cmd_props(cli, &out, file),
        Cmd::Surgery { file, element } => cmd_surgery(cli, &out, file, element.as_deref()),
        Cmd::Roundtrip { file } => cmd_roundtrip(cli, &out, file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
