use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use valsem::checks::{CheckContext, CheckOutcome, Registry, Status};
use valsem::dualgraph::{classify, h_set, to_dot};
use valsem::input::{BoxSpec, InputDocument};
use valsem::poincare::{alexander_general_curve, is_degenerate, limit_profile, poincare_series, vk_extend};
use valsem::report::{expanded_json, factored_json, factored_text, witness_json, ReportDocument};
use valsem::semigroup::contact::maximal_contact;
use valsem::semigroup::curve::{curve_generating_sequence, curve_indecomposables};
use valsem::semigroup::SemigroupHandle;
use valsem::{Error, ResolutionModel};

const DEFAULT_BOX: u64 = 24;
const DEFAULT_KMAX: usize = 3;

#[derive(Parser)]
#[command(name = "valsem", version, about = "Value semigroups and Poincaré series of divisorial valuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON input document.
    input: PathBuf,
    /// Truncation box: one size for every coordinate, or `a,b,c`
    /// (overrides the document's `box`).
    #[arg(long = "box", value_name = "N", value_delimiter = ',')]
    bound: Option<Vec<u64>>,
    /// Highest tower level (overrides the document's `kmax`).
    #[arg(long, value_name = "K")]
    kmax: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection matrix, value matrix and minimality.
    Model(Common),
    /// Degrees, dead ends and stars; `--format dot` draws the graph.
    Graph(Common),
    /// Generators, membership, decompositions and maximal contact values.
    Semigroup {
        #[command(flatten)]
        common: Common,
        #[arg(long, group = "query")]
        generators: bool,
        #[arg(long, group = "query", value_name = "a,b,c", value_delimiter = ',')]
        member: Option<Vec<u64>>,
        #[arg(long, group = "query", value_name = "a,b,c", value_delimiter = ',')]
        decompose: Option<Vec<u64>>,
        #[arg(long, group = "query")]
        contact: bool,
    },
    /// Poincaré series of the valuations.
    Poincare {
        #[command(flatten)]
        common: Common,
        #[arg(long, group = "form")]
        rational: bool,
        #[arg(long, group = "form")]
        expand: bool,
    },
    /// The general curve with one branch per marked divisor.
    Curve {
        #[command(flatten)]
        common: Common,
        #[arg(long, group = "query")]
        alexander: bool,
        #[arg(long, group = "query", value_name = "K")]
        vk: Option<usize>,
        #[arg(long, group = "query")]
        limit: bool,
    },
    /// Runs the named checks (all of them by default).
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long = "check", value_name = "NAME")]
        checks: Vec<String>,
        /// Lists the registered checks and exits.
        #[arg(long)]
        list: bool,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Model(_) => "model",
            Command::Graph(_) => "graph",
            Command::Semigroup { .. } => "semigroup",
            Command::Poincare { .. } => "poincare",
            Command::Curve { .. } => "curve",
            Command::Verify { .. } => "verify",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Model(c) | Command::Graph(c) => c,
            Command::Semigroup { common, .. }
            | Command::Poincare { common, .. }
            | Command::Curve { common, .. }
            | Command::Verify { common, .. } => common,
        }
    }
}

/// Failure modes of a run, mapped to exit codes 2 and 1.
enum Failure {
    Input(String),
    Computation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::NoStabilization { .. } | Error::Unstable { .. } | Error::MarginExceeded { .. } => {
                Failure::Computation(e.to_string())
            }
            other => Failure::Input(other.to_string()),
        }
    }
}

/// What a command produced: the `results` body, optional checks, and the
/// text shown for `--format text` / `--format dot`.
struct Output {
    results: Value,
    checks: Vec<CheckOutcome>,
    text: Option<String>,
}

struct Loaded {
    doc: InputDocument,
    model: ResolutionModel,
    bound: Vec<u64>,
    kmax: usize,
    digest: String,
}

fn load(common: &Common) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(&common.input)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", common.input.display())))?;
    let digest = format!("sha256:{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|e| Failure::Input(format!("input is not UTF-8: {e}")))?;
    let doc = InputDocument::parse(&text)?;
    let model = doc.model()?;
    let r = doc.marked.len();
    let bound = match (&common.bound, &doc.bound) {
        (Some(v), _) if v.len() == 1 => vec![v[0]; r],
        (Some(v), _) => BoxSpec::PerCoordinate(v.clone()).resolve(r)?,
        (None, Some(spec)) => spec.resolve(r)?,
        (None, None) => vec![DEFAULT_BOX; r],
    };
    let kmax = common.kmax.or(doc.kmax).unwrap_or(DEFAULT_KMAX);
    Ok(Loaded { doc, model, bound, kmax, digest })
}

fn parse_point(m: &[u64], r: usize) -> Result<(), Failure> {
    if m.len() != r {
        return Err(Error::ArityMismatch { expected: r, found: m.len() }.into());
    }
    Ok(())
}

fn matrix_text(rows: &[Vec<String>]) -> String {
    let width = rows.iter().flatten().map(String::len).max().unwrap_or(1);
    rows.iter()
        .map(|row| row.iter().map(|x| format!("{x:>width$}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn model_cmd(l: &Loaded) -> Output {
    let m = l.model.intersection_matrix();
    let a = l.model.value_matrix();
    let minimality = l.model.validate_minimality(&l.doc.marked);
    let rows: Vec<Vec<u64>> = l.model.vertices().map(|v| l.model.projected(v, &l.doc.marked)).collect();
    let results = json!({
        "centers": l.model.len(),
        "marked": l.doc.marked,
        "intersectionMatrix": m,
        "valueMatrix": a,
        "projectedValues": rows,
        "minimality": minimality,
        "singleBlowUp": is_degenerate(&l.model),
    });
    let mut text = String::new();
    text += "M =\n";
    text += &matrix_text(&m.iter().map(|r| r.iter().map(i64::to_string).collect()).collect::<Vec<_>>());
    text += "\nA =\n";
    text += &matrix_text(&a.iter().map(|r| r.iter().map(u64::to_string).collect()).collect::<Vec<_>>());
    text += "\nprojected values:\n";
    for (v, row) in rows.iter().enumerate() {
        text += &format!("  {}: {row:?}\n", v + 1);
    }
    text += &format!("minimal: {}", minimality.minimal);
    if !minimality.minimal {
        text += &format!(" (unmarked leaves {:?})", minimality.offending);
    }
    Output { results, checks: Vec::new(), text: Some(text) }
}

fn graph_cmd(l: &Loaded, dot: bool) -> Result<Output, Failure> {
    let g = classify(&l.model);
    let h = h_set(&l.model, &l.doc.marked)?;
    let marking = l.doc.curve_marking()?;
    let results = json!({
        "edges": l.model.edges(),
        "degree": g.degree,
        "deadEnds": g.dead_ends,
        "stars": g.stars,
        "indecomposableVertices": h,
    });
    let text = format!(
        "edges: {:?}\ndead ends: {:?}\nstars: {:?}\nindecomposable vertices: {:?}",
        l.model.edges(),
        g.dead_ends,
        g.stars,
        h.h
    );
    let dot_text = to_dot(&l.model, &l.doc.marked, &marking.arrows());
    Ok(Output { results, checks: Vec::new(), text: Some(if dot { dot_text } else { text }) })
}

fn semigroup_cmd(
    l: &Loaded,
    generators: bool,
    member: Option<&[u64]>,
    decompose: Option<&[u64]>,
    contact: bool,
) -> Result<Output, Failure> {
    let r = l.doc.marked.len();
    let handle = SemigroupHandle::new(l.model.clone(), &l.doc.marked)?;
    if let Some(m) = member {
        parse_point(m, r)?;
        let results = match handle.member(m)? {
            Some(lambda) => {
                let mut v = witness_json(&lambda);
                v["status"] = json!("member");
                v
            }
            None => json!({ "status": "absent" }),
        };
        let text = match &results["lambda"] {
            Value::Null => format!("{m:?}: absent"),
            w => format!("{m:?}: member, {w}"),
        };
        return Ok(Output { results, checks: Vec::new(), text: Some(text) });
    }
    if let Some(m) = decompose {
        parse_point(m, r)?;
        let d = handle.decompose(m)?;
        let dims: Vec<u64> = d.a.iter().map(|a| a + 1).collect();
        let text = format!("{m:?} = sum a_i B^i + n with a = {:?}, n = {:?}; d_i = {dims:?}", d.a, d.n);
        return Ok(Output { results: json!({ "a": d.a, "n": d.n, "d": dims }), checks: Vec::new(), text: Some(text) });
    }
    if contact {
        let mut per = Vec::new();
        let mut text = String::new();
        for &v in &l.doc.marked {
            let (sub, renumber) = l.model.minimal_submodel(&[v])?;
            let alpha = renumber[v - 1].expect("marked vertex survives");
            let data = maximal_contact(&sub, alpha)?;
            text += &format!(
                "vertex {v}: beta_bar {:?}, e {:?}, g {}, c {}, conductor {}\n",
                data.beta_bar, data.e, data.g, data.c, data.conductor
            );
            per.push(json!({ "vertex": v, "data": data }));
        }
        return Ok(Output { results: Value::Array(per), checks: Vec::new(), text: Some(text.trim_end().to_string()) });
    }
    // Generators (the default query).
    let _ = generators;
    let seq = handle.generating_sequence();
    let (vertices, values) = if r >= 2 {
        let h = h_set(&l.model, &l.doc.marked)?;
        let mut values: Vec<Vec<u64>> = h.h.iter().map(|&a| l.model.projected(a, &l.doc.marked)).collect();
        values.sort();
        values.dedup();
        (Some(h.h), values)
    } else {
        // One valuation: read the minimal generators off the box.
        (None, handle.indecomposables_bruteforce(&l.bound)?)
    };
    let seq_json = match &seq {
        Ok(s) => json!(s),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let text = format!("indecomposables: {values:?}\ngenerating sequence: {seq_json}");
    Ok(Output {
        results: json!({ "vertices": vertices, "indecomposables": values, "generatingSequence": seq_json }),
        checks: Vec::new(),
        text: Some(text),
    })
}

fn poincare_cmd(l: &Loaded, expand: bool) -> Result<Output, Failure> {
    let pv = poincare_series(&l.model, &l.doc.marked)?;
    if expand {
        let s = pv.expand(&l.bound)?;
        let text = s.terms().map(|(m, c)| format!("{m:?} {c}")).collect::<Vec<_>>().join("\n");
        return Ok(Output { results: json!({ "box": l.bound, "terms": expanded_json(&s) }), checks: Vec::new(), text: Some(text) });
    }
    let text = factored_text(&pv);
    let mut results = json!({ "factors": factored_json(&pv), "exponentSum": pv.exponent_sum() });
    if is_degenerate(&l.model) {
        results["note"] = json!("single blow-up model");
    }
    Ok(Output { results, checks: Vec::new(), text: Some(text) })
}

fn curve_cmd(l: &Loaded, vk: Option<usize>, limit: bool) -> Result<Output, Failure> {
    let marking = l.doc.curve_marking()?;
    if let Some(k) = vk {
        let ext = vk_extend(&marking, k)?;
        let pv = poincare_series(ext.marking.model(), ext.marking.branches())?;
        let text = format!(
            "level {k}: {} centers, branches at {:?}\nB = {:?}\nP = {}",
            ext.marking.model().len(),
            ext.marking.branches(),
            ext.marked_bs(),
            factored_text(&pv)
        );
        let results = json!({
            "k": k,
            "centers": ext.marking.model().centers(),
            "branches": ext.marking.branches(),
            "markedValues": ext.marked_bs(),
            "factors": factored_json(&pv),
        });
        return Ok(Output { results, checks: Vec::new(), text: Some(text) });
    }
    if limit {
        let p = limit_profile(&marking, &l.bound, l.kmax)?;
        let text = format!("disagreements by level: {:?}\nfirst agreeing level: {:?}", p.disagreements, p.k0);
        return Ok(Output { results: json!({ "box": l.bound, "profile": p }), checks: Vec::new(), text: Some(text) });
    }
    let pc = alexander_general_curve(&marking)?;
    let expanded = pc.expand(&l.bound)?;
    let polynomial = marking.r() > 1 && !expanded.touches_margin(1);
    let generators = curve_generating_sequence(&marking).map(|g| json!(g)).unwrap_or_else(|e| json!({ "error": e.to_string() }));
    let indecomposables = curve_indecomposables(&marking, &l.bound)?;
    let text = format!("P = {}\npolynomial on box: {polynomial}", factored_text(&pc));
    let results = json!({
        "factors": factored_json(&pc),
        "box": l.bound,
        "terms": expanded_json(&expanded),
        "polynomialOnBox": polynomial,
        "generatingSequence": generators,
        "indecomposables": indecomposables,
    });
    Ok(Output { results, checks: Vec::new(), text: Some(text) })
}

fn verify_cmd(l: &Loaded, names: &[String]) -> Result<Output, Failure> {
    let registry = Registry::default();
    let ctx = CheckContext::new(l.model.clone(), &l.doc.marked, l.bound.clone(), l.kmax)?;
    let checks = if names.is_empty() {
        registry.run_all(&ctx)
    } else {
        names
            .iter()
            .map(|n| {
                registry
                    .run_one(n, &ctx)
                    .ok_or_else(|| Failure::Input(format!("unknown check {n:?}; known: {}", registry.names().join(", "))))
            })
            .collect::<Result<_, _>>()?
    };
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let text = checks
        .iter()
        .map(|c| {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            let detail = match (&c.first_discrepancy, &c.detail) {
                (Some(d), _) => d.to_string(),
                (None, Some(d)) => d.clone(),
                (None, None) => String::new(),
            };
            format!("{:width$}  {status}  {detail}", c.name)
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Output { results: json!({ "box": l.bound, "kmax": l.kmax }), checks, text: Some(text) })
}

fn run(cli: &Cli) -> Result<(String, bool), Failure> {
    if let Command::Verify { list: true, .. } = &cli.command {
        let listing = Registry::default()
            .describe()
            .into_iter()
            .map(|(n, d)| format!("{n:28} {d}"))
            .collect::<Vec<_>>()
            .join("\n");
        return Ok((listing, true));
    }
    let common = cli.command.common();
    if common.format == Format::Dot && !matches!(cli.command, Command::Graph(_)) {
        return Err(Failure::Input("--format dot is only available for `graph`".into()));
    }
    let l = load(common)?;
    let out = match &cli.command {
        Command::Model(_) => model_cmd(&l),
        Command::Graph(_) => graph_cmd(&l, common.format == Format::Dot)?,
        Command::Semigroup { generators, member, decompose, contact, .. } => {
            semigroup_cmd(&l, *generators, member.as_deref(), decompose.as_deref(), *contact)?
        }
        Command::Poincare { expand, rational, .. } => {
            let _ = rational;
            poincare_cmd(&l, *expand)?
        }
        Command::Curve { vk, limit, .. } => curve_cmd(&l, *vk, *limit)?,
        Command::Verify { checks, .. } => verify_cmd(&l, checks)?,
    };
    let ok = out.checks.iter().all(|c| c.status != Status::Fail);
    let rendered = match common.format {
        Format::Json => {
            let report = ReportDocument {
                command: cli.command.name().to_string(),
                input_digest: l.digest.clone(),
                results: out.results,
                checks: out.checks,
            };
            serde_json::to_string_pretty(&report).expect("report serializes")
        }
        Format::Text | Format::Dot => out.text.unwrap_or_else(|| out.results.to_string()),
    };
    Ok((rendered, ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, ok)) => {
            println!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Computation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
