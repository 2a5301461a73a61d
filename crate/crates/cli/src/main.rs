use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use hopfalg::algebroid::{check_axioms, Algebroid, HopfAlgebroid};
use hopfalg::analysis::{
    cgk_pipeline, solve_grouplikes, solve_grouplikes_at, solve_primitives, spectral_from_grouplikes,
    DEFAULT_THETA_SAMPLES,
};
use hopfalg::model::{generate, Model, ModelFile, Preset, SCHEMA};

#[derive(Parser)]
#[command(name = "hopfalg", version, about = "Exact Hopf algebroids over finite bases")]
struct Cli {
    /// Emit JSON reports instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Print the model file JSON schema and exit.
    #[arg(long)]
    schema: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a model and check the groupoid, Lie and action laws.
    Validate { file: PathBuf },
    /// Check the Hopf algebroid axioms on seeded random samples.
    CheckAxioms {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solve for the primitive elements.
    Primitives { file: PathBuf },
    /// Solve for the grouplike elements at each point, or at one point.
    Grouplikes {
        file: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    /// Build the spectral groupoid.
    Spectral { file: PathBuf },
    /// Decide whether Θ is an isomorphism.
    Cgk {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THETA_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a preset or random model.
    Gen {
        #[arg(long)]
        preset: Preset,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the full pipeline and compare the reconstruction with the input.
    Roundtrip {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_THETA_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate an operation on elements, e.g. `eval m.json mul "X@s" "X@e"`.
    Eval {
        file: PathBuf,
        #[arg(value_parser = ["mul", "delta", "counit", "antipode", "anchor"])]
        op: String,
        a: String,
        b: Option<String>,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    /// Exit 1: a law violation or a negative verdict.
    Violation,
    /// Exit 2: unreadable, malformed or unsupported input.
    Input(String),
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.schema {
        print!("{SCHEMA}");
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: no subcommand given (see --help)");
        return ExitCode::from(2);
    };
    match run(command, cli.json) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn read_model(path: &Path) -> Result<Model, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    ModelFile::from_json(&text)
        .and_then(|f| f.resolve())
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Loads a model whose laws hold; law violations count as violations.
fn load(path: &Path) -> Result<HopfAlgebroid, Failure> {
    let model = read_model(path)?;
    let report = model.validate();
    if !report.is_valid() {
        for line in report.lines() {
            eprintln!("{line}");
        }
        return Err(Failure::Violation);
    }
    model.into_algebroid().map_err(input)
}

fn emit(json: bool, value: &Value, lines: Vec<String>) {
    if json {
        println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
    } else {
        for line in lines {
            println!("{line}");
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn run(command: Command, json: bool) -> Outcome {
    match command {
        Command::Validate { file } => validate(&file, json),
        Command::CheckAxioms { file, samples, seed } => {
            let alg = read_model(&file)?.into_algebroid_unchecked().map_err(input)?;
            let report = check_axioms(&alg, samples, seed);
            let mut lines = vec![format!(
                "mode: {}, samples: {}, seed: {}, overflow resamples: {}",
                report.mode, report.samples, report.seed, report.overflow_resamples
            )];
            for e in &report.entries {
                let status = serde_json::to_value(e.status).expect("status serializes");
                lines.push(format!(
                    "{:<22} {} ({} checked)",
                    e.axiom,
                    status.as_str().unwrap_or(""),
                    e.checked
                ));
                if let Some(w) = &e.witness {
                    lines.push(format!("  witness: {w}"));
                }
            }
            emit(json, &serde_json::to_value(&report).expect("report serializes"), lines);
            verdict(report.passed())
        }
        Command::Primitives { file } => primitives(&file, json),
        Command::Grouplikes { file, point } => grouplikes(&file, point.as_deref(), json),
        Command::Spectral { file } => spectral(&file, json),
        Command::Cgk { file, samples, seed } => {
            let alg = load(&file)?;
            let out = cgk_pipeline(&alg, samples, seed).map_err(input)?;
            emit(
                json,
                &serde_json::to_value(&out.report).expect("report serializes"),
                out.report.lines(),
            );
            verdict(out.report.is_iso())
        }
        Command::Gen { preset, seed, output } => {
            let text = generate(preset, seed).to_json();
            match output {
                Some(path) => fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Roundtrip { file, samples, seed } => roundtrip(&file, samples, seed, json),
        Command::Eval { file, op, a, b } => eval(&file, &op, &a, b.as_deref(), json),
    }
}

fn validate(file: &Path, json: bool) -> Outcome {
    let model = read_model(file)?;
    let kind = match &model {
        Model::Constructed { .. } => "constructed",
        Model::Table(_) => "table",
    };
    let report = model.validate();
    let mut lines = report.lines();
    let valid = report.is_valid();
    if valid {
        let alg = model.into_algebroid().map_err(input)?;
        lines.push(format!(
            "valid {kind} model: {} points, dim {}",
            alg.points(),
            alg.dim()
        ));
    }
    let value = json!({ "kind": kind, "valid": valid, "violations": report.lines() });
    emit(json, &value, lines);
    verdict(valid)
}

fn primitives(file: &Path, json: bool) -> Outcome {
    let alg = load(file)?;
    let prim = solve_primitives(&alg).map_err(input)?;
    let names = alg.base().names();
    let mut basis = serde_json::Map::new();
    let mut lines = Vec::new();
    for x in alg.base().points() {
        let elems: Vec<String> = prim.at(x).iter().map(|&k| alg.format(&prim.basis[k])).collect();
        lines.push(format!(
            "Prim at {} (rank {}): {}",
            names[x],
            elems.len(),
            elems.join(", ")
        ));
        basis.insert(names[x].clone(), json!(elems));
    }
    let f = &prim.flags;
    lines.push(format!("S(X) = -X: {}", f.s_is_minus));
    lines.push(format!("S-invariant: {}", f.s_invariant));
    lines.push(format!("anchor trivial: {}", f.anchor_trivial));
    let ranks: serde_json::Map<String, Value> = names
        .iter()
        .zip(&prim.per_point_rank)
        .map(|(p, r)| (p.clone(), json!(r)))
        .collect();
    let value = json!({ "primRank": ranks, "basis": basis, "flags": f });
    emit(json, &value, lines);
    Ok(())
}

fn grouplikes(file: &Path, point: Option<&str>, json: bool) -> Outcome {
    let alg = load(file)?;
    let points: Vec<usize> = match point {
        Some(p) => vec![alg
            .base()
            .index_of(p)
            .ok_or_else(|| Failure::Input(format!("unknown point {p:?}")))?],
        None => alg.base().points().collect(),
    };
    let mut out = serde_json::Map::new();
    let mut lines = Vec::new();
    for y in points {
        let name = alg.base().name(y).to_string();
        let found = solve_grouplikes_at(&alg, y).map_err(input)?;
        lines.push(format!("grouplikes at {name}: {}", found.len()));
        let mut items = Vec::new();
        for g in &found {
            let text = alg.format(&g.element);
            let mark = if g.s_invariant { "" } else { "  (not S-invariant)" };
            lines.push(format!("  {text}{mark}"));
            items.push(json!({ "element": text, "sInvariant": g.s_invariant }));
        }
        out.insert(name, Value::Array(items));
    }
    emit(json, &Value::Object(out), lines);
    Ok(())
}

fn spectral(file: &Path, json: bool) -> Outcome {
    let alg = load(file)?;
    let grouplikes = solve_grouplikes(&alg).map_err(input)?;
    let gsp = spectral_from_grouplikes(&alg, &grouplikes).map_err(input)?;
    let g = &gsp.groupoid;
    let iso = match alg.as_convolution() {
        Some(conv) => Some(gsp.isomorphic_to(conv.groupoid()).map_err(input)?),
        None => None,
    };
    let mut lines = vec![format!("spectral groupoid: {} arrows", g.len())];
    let mut arrows = Vec::new();
    for a in 0..g.len() {
        let (src, tgt) = (g.base().name(g.src(a)), g.base().name(g.tgt(a)));
        let rep = alg.format(gsp.representative(a));
        lines.push(format!("  {}: {src} -> {tgt}  represented by {rep}", g.id(a)));
        arrows.push(json!({ "id": g.id(a), "src": src, "tgt": tgt, "representative": rep }));
    }
    let composition: Vec<Value> = g
        .triples()
        .into_iter()
        .map(|(a, b, c)| json!([g.id(a), g.id(b), g.id(c)]))
        .collect();
    if let Some(iso) = iso {
        lines.push(format!("isomorphic to the input groupoid: {iso}"));
    }
    let mut value = json!({ "arrows": arrows, "composition": composition });
    if let Some(iso) = iso {
        value["isoToInput"] = json!(iso);
    }
    emit(json, &value, lines);
    Ok(())
}

fn roundtrip(file: &Path, samples: usize, seed: u64, json: bool) -> Outcome {
    let alg = load(file)?;
    let out = cgk_pipeline(&alg, samples, seed).map_err(input)?;
    let mut checks = serde_json::Map::new();
    let mut lines = Vec::new();
    let mut record = |name: &str, ok: bool| {
        lines.push(format!("{name}: {}", if ok { "ok" } else { "MISMATCH" }));
        checks.insert(name.to_string(), json!(ok));
        ok
    };
    let mut all = true;
    if let Some(conv) = alg.as_convolution() {
        let ranks = alg
            .base()
            .points()
            .all(|x| out.prim.per_point_rank[x] == conv.bundle().fiber(x).dim());
        all &= record("primRankMatchesFibers", ranks);
        all &= record("antipodeIsMinus", out.prim.flags.s_is_minus);
        all &= record("anchorTrivial", out.prim.flags.anchor_trivial);
        all &= record("spectralIsoToInput", out.report.spectral.iso_to_input == Some(true));
        let action = match (&out.action, &out.spectral.input_arrows) {
            (Some(action), Some(arrows)) => arrows
                .iter()
                .enumerate()
                .all(|(a, &g)| action.matrix(a) == conv.action().matrix(g)),
            _ => false,
        };
        all &= record("actionMatchesInput", action);
    }
    all &= record("thetaBijective", out.report.is_iso());
    let value = json!({ "checks": checks, "verdict": out.report.verdict });
    lines.push(format!("verdict: {}", out.report.verdict));
    emit(json, &value, lines);
    verdict(all)
}

fn eval(file: &Path, op: &str, a: &str, b: Option<&str>, json: bool) -> Outcome {
    let alg = load(file)?;
    let a = alg.parse(a).map_err(input)?;
    let second = || {
        b.ok_or_else(|| Failure::Input(format!("{op} needs a second argument")))
            .and_then(|b| alg.parse(b).map_err(input))
    };
    let result = match op {
        "mul" => alg.format(&alg.mul(&a, &second()?).map_err(input)?),
        "delta" => alg.format_tensor(&alg.delta(&a)),
        "counit" => alg.format_base(&alg.counit(&a)),
        "antipode" => alg.format(&alg.antipode(&a)),
        "anchor" => {
            let point = b.ok_or_else(|| Failure::Input("anchor needs a point".to_string()))?;
            let x = alg
                .base()
                .index_of(point)
                .ok_or_else(|| Failure::Input(format!("unknown point {point:?}")))?;
            let r = hopfalg::groupoid::BaseFun::indicator(alg.points(), x);
            alg.format_base(&alg.anchor(&a, &r).map_err(input)?)
        }
        _ => unreachable!("clap restricts the operation"),
    };
    emit(json, &json!({ "op": op, "result": result }), vec![result.clone()]);
    Ok(())
}
