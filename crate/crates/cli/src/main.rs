//! `jordanlab`: verify theorems, solve for map spaces, check and decompose
//! serialized maps, list quantified pairs.
//!
//! Exit status: 0 on success (verified or skipped), 1 when a theorem is
//! falsified or a map fails a check, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jordanlab_core::addmaps::AdditiveMap;
use jordanlab_core::lab::{
    check, decompose_inner_plus_lifted, decompose_theorem21, peirce_component_check, solve_all,
    verify_proof_steps, verify_trivial_extension_parts, CheckReport, Identity, IdentityKind,
};
use jordanlab_core::linalg::{ResidueMatrix, SolutionModule};
use jordanlab_core::rings::{
    condition_pairs, Bimodule, BimoduleDescriptor, PairCondition, PairMode, Ring, RingDescriptor,
};
use jordanlab_core::suite::{verify_theorem, Status, TheoremId, TheoremReport, VerifyOptions, CORRUPTED_TERM};
use jordanlab_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "jordanlab", version, about = "Exact workbench for zero-product characterizations of Jordan derivations")]
struct Cli {
    /// Worker threads for pair scans (default: all cores). Output does not
    /// depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a theorem verification procedure.
    Verify(VerifyArgs),
    /// Solve for the module of maps satisfying an identity.
    Solve(SolveArgs),
    /// Check a serialized map (or every map of a solve output).
    Check(CheckArgs),
    /// Decompose a serialized map.
    Decompose(DecomposeArgs),
    /// List the pairs an identity is quantified over.
    Pairs(PairsArgs),
}

#[derive(Args, Debug, Clone)]
struct RingArgs {
    /// Base ring: `zmod:M` or `dual:M`.
    #[arg(long, value_parser = parse_base)]
    base: RingDescriptor,
    /// Matrix size; the ring becomes M_n(base).
    #[arg(long)]
    n: Option<usize>,
    /// Wrap the ring as the trivial extension T(R, R).
    #[arg(long)]
    trivial_ext: bool,
}

impl RingArgs {
    fn descriptor(&self) -> Result<RingDescriptor, String> {
        let base = self.base.clone();
        let mut desc = match self.n {
            Some(n) => RingDescriptor::matrix(n, base),
            None => base,
        };
        if self.trivial_ext {
            desc = RingDescriptor::trivial_ext(desc);
        }
        desc.validate().map_err(|e| e.to_string())?;
        Ok(desc)
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Theorem id (thm2_1, thm2_2, cor2_3, lemma3_1, thm3_2i, thm3_2ii,
    /// thm4_2, thm4_4, remark1_1, remark1_2) or `all`.
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    ring: RingArgs,
    /// Pair mode for conditional identities.
    #[arg(long, default_value = "structured")]
    pairs: PairMode,
    /// Seed for whole-module spot checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled module elements.
    #[arg(long, default_value_t = jordanlab_core::suite::DEFAULT_SAMPLE_BOUND)]
    samples: usize,
    /// Rank of the zero-action summand used for the non-unital bimodule.
    #[arg(long, default_value_t = 4)]
    inflate: usize,
    /// Flip one term of the Jordan identity (negative control).
    #[arg(long)]
    corrupt: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Identity kind.
    #[arg(long)]
    kind: IdentityKind,
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, default_value = "structured")]
    pairs: PairMode,
    /// `regular` or `inflated:R` (adds a zero-action summand of rank R).
    #[arg(long, default_value = "regular")]
    bimodule: String,
    /// Flip the given term of the identity.
    #[arg(long)]
    flip_term: Option<usize>,
    /// Write the Howell basis and generator maps here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// A serialized map, or the output of `solve --out`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    kind: IdentityKind,
    #[arg(long, default_value = "structured")]
    pairs: PairMode,
    /// Check against the negative-control Jordan identity.
    #[arg(long)]
    corrupt: bool,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
enum Method {
    /// D = δ + right multiplication by D(1).
    ZeroProduct,
    /// δ = lifted base derivation + inner derivation.
    InnerLifted,
    /// Component maps on a trivial extension.
    TrivialExt,
    /// Peirce components into a possibly non-unital bimodule.
    Peirce,
    /// Every intermediate identity of the zero-product argument.
    Steps,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "zero-product")]
    method: Method,
    #[arg(long, default_value = "structured")]
    pairs: PairMode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PairsArgs {
    #[command(flatten)]
    ring: RingArgs,
    /// Hypothesis: zero_product, jordan_zero or left_zero.
    #[arg(long, default_value = "zero_product", value_parser = parse_condition)]
    condition: PairCondition,
    #[arg(long, default_value = "structured")]
    pairs: PairMode,
    /// Print only the number of pairs.
    #[arg(long)]
    count_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What `solve --out` writes.
#[derive(Serialize, Deserialize)]
struct SolveOutput {
    identity: Identity,
    ring: RingDescriptor,
    bimodule: BimoduleDescriptor,
    pairs: PairMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size: Option<u128>,
    basis: ResidueMatrix,
    maps: Vec<AdditiveMap>,
}

enum Failure {
    Usage(String),
    Failed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

type CmdResult = Result<(), Failure>;

fn parse_base(s: &str) -> Result<RingDescriptor, String> {
    let (kind, m) = s
        .split_once(':')
        .ok_or_else(|| format!("expected zmod:M or dual:M, got `{s}`"))?;
    let m: u64 = m.parse().map_err(|_| format!("bad modulus `{m}`"))?;
    let desc = match kind {
        "zmod" => RingDescriptor::zmod(m),
        "dual" => RingDescriptor::dual(m),
        other => return Err(format!("unknown base ring `{other}`")),
    };
    desc.validate().map_err(|e| e.to_string())?;
    Ok(desc)
}

fn parse_condition(s: &str) -> Result<PairCondition, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|_| format!("unknown condition `{s}`"))
}

fn parse_bimodule(s: &str, ring: &RingDescriptor) -> Result<BimoduleDescriptor, String> {
    let regular = BimoduleDescriptor::regular(ring.clone());
    let desc = match s.split_once(':') {
        None if s == "regular" => regular,
        Some(("inflated", r)) => {
            let r: usize = r.parse().map_err(|_| format!("bad rank `{r}`"))?;
            BimoduleDescriptor::inflated(regular, r)
        }
        _ => return Err(format!("expected regular or inflated:R, got `{s}`")),
    };
    desc.validate().map_err(|e| e.to_string())?;
    Ok(desc)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, value: &impl Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    fs::write(path, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn print_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

/// Maps from a file holding one map or a solve output.
fn read_maps(path: &Path) -> Result<Vec<AdditiveMap>, Failure> {
    let value = read_json(path)?;
    let parsed = if value.get("maps").is_some() {
        serde_json::from_value::<SolveOutput>(value).map(|s| s.maps)
    } else {
        serde_json::from_value::<AdditiveMap>(value).map(|m| vec![m])
    };
    parsed.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn bimodule_for(map: &AdditiveMap) -> Result<Bimodule, Failure> {
    let bm = Bimodule::new(map.codomain())?;
    if bm.ring().descriptor() != map.domain() {
        return Err(Failure::Usage(format!(
            "map domain {} does not act on {}",
            map.domain(),
            map.codomain()
        )));
    }
    Ok(bm)
}

fn report_line(r: &TheoremReport) -> String {
    let mut line = format!("{} on {}: {}", r.theorem_id, r.ring, r.status);
    if let Some(reason) = &r.reason {
        line += &format!(" ({reason})");
    }
    for (k, v) in &r.counts {
        line += &format!("\n  {k} = {v}");
    }
    for (k, v) in &r.findings {
        line += &format!("\n  {k}: {v}");
    }
    if let Some(cx) = &r.counterexample {
        line += &format!("\n  counterexample: {cx}");
    }
    line
}

fn cmd_verify(args: &VerifyArgs, json_out: bool) -> CmdResult {
    let ring = args.ring.descriptor()?;
    let ids: Vec<TheoremId> = if args.theorem == "all" {
        TheoremId::ALL.to_vec()
    } else {
        vec![args.theorem.parse::<TheoremId>()?]
    };
    let opts = VerifyOptions {
        pairs: args.pairs,
        seed: args.seed,
        sample_bound: args.samples,
        corrupt: args.corrupt,
        inflate_rank: args.inflate,
    };
    let mut falsified = false;
    let mut reports = Vec::new();
    for id in ids {
        let report = verify_theorem(id, &ring, &opts)?;
        falsified |= report.status == Status::Falsified;
        if !json_out {
            println!("{}", report_line(&report));
        }
        reports.push(report);
    }
    if json_out {
        if reports.len() == 1 {
            print_json(&reports[0]);
        } else {
            print_json(&reports);
        }
    }
    if falsified {
        Err(Failure::Failed)
    } else {
        Ok(())
    }
}

fn cmd_solve(args: &SolveArgs, json_out: bool) -> CmdResult {
    let ring = args.ring.descriptor()?;
    let bm_desc = parse_bimodule(&args.bimodule, &ring)?;
    let bm = Bimodule::new(&bm_desc)?;
    let identity = match args.flip_term {
        Some(t) => Identity::with_flipped_term(args.kind, t),
        None => args.kind.into(),
    };
    let module: SolutionModule = solve_all(identity, &bm, args.pairs)?;
    let maps = module
        .generator_rows()
        .map(|g| AdditiveMap::from_flat(bm.ring(), &bm, g))
        .collect::<Result<Vec<_>, _>>()?;
    let out = SolveOutput {
        identity,
        ring,
        bimodule: bm_desc,
        pairs: args.pairs,
        size: module.order(),
        basis: module.generators().clone(),
        maps,
    };
    if let Some(path) = &args.out {
        write_json(path, &out)?;
    }
    if json_out {
        print_json(&json!({
            "identity": out.identity,
            "ring": out.ring,
            "bimodule": out.bimodule,
            "pairs": out.pairs,
            "size": out.size,
            "generators": module.num_generators(),
            "basis": out.basis,
        }));
    } else {
        let size = out.size.map_or_else(|| "too large to count".into(), |s| s.to_string());
        println!("{} maps {} -> {}", args.kind, out.ring, out.bimodule);
        println!("  size = {size}");
        println!("  generators = {}", module.num_generators());
        for p in module.pivots() {
            println!("  pivot column {} value {}", p.0, p.1);
        }
    }
    Ok(())
}

fn cmd_check(args: &CheckArgs, json_out: bool) -> CmdResult {
    let maps = read_maps(&args.input)?;
    let identity = if args.corrupt {
        if args.kind != IdentityKind::Jordan {
            return Err(Failure::Usage("--corrupt only applies to --kind jordan".into()));
        }
        Identity::with_flipped_term(args.kind, CORRUPTED_TERM)
    } else {
        args.kind.into()
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for map in &maps {
        let bm = bimodule_for(map)?;
        reports.push(check(map, identity, &bm, args.pairs)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    if json_out {
        print_json(&json!({ "kind": args.kind, "passed": passed, "maps": reports }));
    } else {
        for (i, r) in reports.iter().enumerate() {
            match &r.witness {
                None => println!("map {i}: passed"),
                Some(w) => println!(
                    "map {i}: failed at a = {:?}, b = {:?}, residual {:?}",
                    w.a, w.b, w.residual
                ),
            }
        }
        println!("{}", if passed { "passed" } else { "failed" });
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn decompose_one(map: &AdditiveMap, method: Method, mode: PairMode) -> Result<(bool, Value), Error> {
    let bm = Bimodule::new(map.codomain())?;
    let value = match method {
        Method::ZeroProduct => serde_json::to_value(decompose_theorem21(map, &bm, mode)?)?,
        Method::InnerLifted => serde_json::to_value(decompose_inner_plus_lifted(map, &bm)?)?,
        Method::TrivialExt => serde_json::to_value(verify_trivial_extension_parts(map)?)?,
        Method::Peirce => {
            let r = peirce_component_check(map, &bm)?;
            return Ok((r.passed, serde_json::to_value(r)?));
        }
        Method::Steps => {
            let r = verify_proof_steps(map, &bm, mode)?;
            return Ok((r.passed, serde_json::to_value(r)?));
        }
    };
    Ok((true, value))
}

fn cmd_decompose(args: &DecomposeArgs, json_out: bool) -> CmdResult {
    let maps = read_maps(&args.input)?;
    let mut results = Vec::new();
    let mut ok = true;
    for map in &maps {
        bimodule_for(map)?;
        match decompose_one(map, args.method, args.pairs) {
            Ok((passed, value)) => {
                ok &= passed;
                results.push(json!({ "passed": passed, "result": value }));
            }
            Err(e @ (Error::Precondition { .. } | Error::Verification { .. })) => {
                ok = false;
                let detail = match &e {
                    Error::Precondition { report, .. } => serde_json::to_value(report).expect("serializable"),
                    Error::Verification { trace, .. } => (**trace).clone(),
                    _ => unreachable!(),
                };
                results.push(json!({ "passed": false, "error": e.to_string(), "detail": detail }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let out = json!({ "method": format!("{:?}", args.method), "results": results });
    if let Some(path) = &args.out {
        write_json(path, &out)?;
    }
    if json_out {
        print_json(&out);
    } else {
        for (i, r) in results.iter().enumerate() {
            let status = if r["passed"] == true { "ok" } else { "failed" };
            println!("map {i}: {status}");
            if let Some(err) = r.get("error") {
                println!("  {}", err.as_str().unwrap_or_default());
            }
            if let Some(res) = r.get("result") {
                for key in ["central", "g", "m"] {
                    if let Some(v) = res.get(key) {
                        println!("  {key} = {v}");
                    }
                }
                if let Some(checks) = res.get("checks").and_then(Value::as_array) {
                    for c in checks {
                        println!("  {} {}", c["name"].as_str().unwrap_or_default(), c["passed"]);
                    }
                }
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

fn cmd_pairs(args: &PairsArgs, json_out: bool) -> CmdResult {
    let ring = Ring::new(&args.ring.descriptor()?)?;
    let pairs = condition_pairs(&ring, args.condition, args.pairs)?;
    if let Some(path) = &args.out {
        write_json(path, &pairs)?;
    }
    if json_out {
        if args.count_only {
            print_json(&json!({ "count": pairs.len() }));
        } else {
            print_json(&json!({ "count": pairs.len(), "pairs": pairs }));
        }
    } else {
        println!("{} pairs", pairs.len());
        if !args.count_only {
            for (a, b) in &pairs {
                println!("{a:?} {b:?}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a, cli.json),
        Command::Solve(a) => cmd_solve(a, cli.json),
        Command::Check(a) => cmd_check(a, cli.json),
        Command::Decompose(a) => cmd_decompose(a, cli.json),
        Command::Pairs(a) => cmd_pairs(a, cli.json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
