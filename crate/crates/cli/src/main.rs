use std::process::ExitCode;

use ampleforge::amalgam::{parse_syllables, Amalgam, NormalFormElement, Tower, TowerVariant};
use ampleforge::autos::{
    anosov_candidate, extend_over_tower, genus2_candidate, growth_estimate, orbit_conjugacy, orbit_double_coset,
    orbit_left_coset, SurfacePreset,
};
use ampleforge::imaginaries::{ImaginaryClass, ImaginaryKind};
use ampleforge::witness::{run_all_with, witness_sequence, Bounds, CheckReport, Family, WitnessSequence};
use ampleforge::{Endo, Error, Word};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ample-forge", version, about = "Free group and amalgam calculator with bounded witness checks")]
struct Cli {
    /// One JSON record per result line.
    #[arg(long, global = true)]
    json: bool,
    /// Leave out timings so repeated runs print identical output.
    #[arg(long, global = true)]
    stable: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Freely reduce a word.
    Reduce { word: String },
    /// Cyclic core and conjugator, `w = conj core conj^-1`.
    Cyclic { word: String },
    /// Primitive root and exponent.
    Root { word: String },
    /// Decide a basic equivalence: `eq <kind> [m=<m>] [n=<n>] <tuple> <tuple>`.
    Eq {
        kind: EqKind,
        #[arg(num_args = 2.., allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Normal form in an amalgam (`amalgam L= R= u= v=` with syllables) or a
    /// tower (`tower i=<i> fig=<1|2> [layer=<k>]` with an ambient word).
    Nf { spec: String, input: String },
    /// Orbit counts and growth under an automorphism.
    Orbit(OrbitArgs),
    /// Run the witness checks.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum EqKind {
    Conj,
    Lcoset,
    Rcoset,
    Dcoset,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrbitKind {
    Conj,
    Lcoset,
    Dcoset,
    Growth,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Anosov,
    AnosovExt,
    Genus2,
}

#[derive(Args)]
struct OrbitArgs {
    kind: OrbitKind,
    #[arg(long, conflicts_with = "endo")]
    preset: Option<Preset>,
    /// Tower stage for `anosov-ext`.
    #[arg(long, default_value_t = 0)]
    i: usize,
    /// Endomorphism text, or `identity`.
    #[arg(long)]
    endo: Option<String>,
    #[arg(long)]
    elt: String,
    /// Second coordinate of the coset, defaults to the preset boundary.
    #[arg(long)]
    b: Option<String>,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long = "K", default_value_t = 8)]
    k: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    #[arg(long = "L", default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    l: u64,
    #[arg(long = "M", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long = "K", default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    k: u64,
    /// Run against a sequence with a wrong commutator in `a_2`.
    #[arg(long)]
    mutate: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ampleforge::ParseError> for Failure {
    fn from(e: ampleforge::ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Out {
    json: bool,
    stable: bool,
}

impl Out {
    fn emit(&self, human: impl AsRef<str>, record: Value) {
        if self.json {
            println!("{record}");
        } else {
            println!("{}", human.as_ref());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("AMPLE_FORGE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let out = Out { json: cli.json, stable: cli.stable };
    match run(cli.command, cli.seed, &out) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, seed: Option<u64>, out: &Out) -> Result<bool, Failure> {
    match command {
        Command::Reduce { word } => {
            let w = Word::parse(&word)?;
            out.emit(w.to_string(), json!({ "word": w }));
        }
        Command::Cyclic { word } => {
            let (core, conj) = Word::parse(&word)?.cyclic_reduce();
            out.emit(format!("core {core}\nconjugator {conj}"), json!({ "core": core, "conjugator": conj }));
        }
        Command::Root { word } => {
            let (root, e) = Word::parse(&word)?.primitive_root()?;
            out.emit(format!("{root} ^ {e}"), json!({ "root": root, "exponent": e }));
        }
        Command::Eq { kind, args } => return cmd_eq(kind, &args, out),
        Command::Nf { spec, input } => cmd_nf(&spec, &input, out)?,
        Command::Orbit(args) => cmd_orbit(&args, out)?,
        Command::Verify(args) => return cmd_verify(&args, seed, out),
    }
    Ok(true)
}

/// Splits `(w1, w2, ..)` at top-level commas; a bare word is a 1-tuple.
fn parse_tuple(text: &str) -> Result<Vec<Word>, Failure> {
    let t = text.trim();
    let inner = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) if split_top(inner).len() > 1 => inner,
        _ => return Ok(vec![Word::parse(t)?]),
    };
    split_top(inner).into_iter().map(|p| Ok(Word::parse(p)?)).collect()
}

fn split_top(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn cmd_eq(kind: EqKind, args: &[String], out: &Out) -> Result<bool, Failure> {
    let (mut m, mut n) = (1u32, 1u32);
    let mut tuples = Vec::new();
    for a in args {
        let modulus = |v: &str| v.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("bad modulus '{v}'")));
        if let Some(v) = a.strip_prefix("m=") {
            m = modulus(v)?;
        } else if let Some(v) = a.strip_prefix("n=") {
            n = modulus(v)?;
        } else {
            tuples.push(parse_tuple(a)?);
        }
    }
    let [x, y]: [Vec<Word>; 2] =
        tuples.try_into().map_err(|_| Failure::Usage("eq needs exactly two tuples".into()))?;
    let kind = match kind {
        EqKind::Conj => ImaginaryKind::Conjugacy,
        EqKind::Lcoset => ImaginaryKind::LeftCoset { m },
        EqKind::Rcoset => ImaginaryKind::RightCoset { m },
        EqKind::Dcoset => ImaginaryKind::DoubleCoset { m, n },
    };
    let result = ImaginaryClass::new(kind, x)?.equivalent(&ImaginaryClass::new(kind, y)?);
    out.emit(result.to_string(), json!({ "kind": kind, "equivalent": result }));
    Ok(result)
}

fn key_values(body: &str) -> Result<Vec<(&str, &str)>, Failure> {
    body.split_whitespace()
        .map(|tok| tok.split_once('=').ok_or_else(|| Failure::Usage(format!("expected key=value, got '{tok}'"))))
        .collect()
}

fn cmd_nf(spec: &str, input: &str, out: &Out) -> Result<(), Failure> {
    let nf: NormalFormElement = if let Some(body) = spec.trim().strip_prefix("tower") {
        let (mut i, mut variant, mut layer) = (0usize, TowerVariant::Fig1, None);
        for (k, v) in key_values(body)? {
            let num = v.parse::<usize>().map_err(|_| Failure::Usage(format!("bad value '{v}' for {k}")))?;
            match k {
                "i" => i = num,
                "fig" if num == 1 => variant = TowerVariant::Fig1,
                "fig" if num == 2 => variant = TowerVariant::Fig2,
                "layer" => layer = Some(num),
                _ => return Err(Failure::Usage(format!("unknown tower field '{k}={v}'"))),
            }
        }
        let tower = Tower::build(i, variant);
        let layer = layer.unwrap_or(tower.layers().len() - 1);
        tower.normal_form(layer, &Word::parse(input)?)?
    } else {
        let g = Amalgam::parse(spec)?;
        let syllables = parse_syllables(input)?;
        for (side, w) in &syllables {
            if w.max_generator() as usize > g.rank(*side) {
                return Err(Failure::Usage(format!("{w} is not in the {side} factor")));
            }
        }
        g.normal_form(&syllables)
    };
    let syllables: Vec<Value> = nf.syllables.iter().map(|(s, w)| json!({ "side": s, "word": w })).collect();
    out.emit(nf.to_string(), json!({ "c_exponent": nf.c_exponent, "syllables": syllables }));
    Ok(())
}

fn cmd_orbit(args: &OrbitArgs, out: &Out) -> Result<(), Failure> {
    let elt = Word::parse(&args.elt)?;
    let (f, boundary) = match (args.preset, args.endo.as_deref()) {
        (Some(Preset::Anosov), _) => (anosov_candidate(), Some(SurfacePreset::Torus1.boundary())),
        (Some(Preset::Genus2), _) => (genus2_candidate(), Some(SurfacePreset::Genus2_1.boundary())),
        (Some(Preset::AnosovExt), _) => {
            let tower = Tower::build(args.i, TowerVariant::Fig1);
            let f = extend_over_tower(&anosov_candidate(), &tower, 0)?;
            let (x, y) = (Word::generator(2 * args.i as u32 + 4), Word::generator(2 * args.i as u32 + 5));
            (f, Some(Word::commutator(&x, &y)))
        }
        (None, Some("identity")) => (Endo::identity(elt.max_generator().max(1) as usize), None),
        (None, Some(text)) => (Endo::parse(text)?, None),
        (None, None) => return Err(Failure::Usage("orbit needs --preset or --endo".into())),
    };
    let f = if (elt.max_generator() as usize) > f.rank() { f.widen(elt.max_generator() as usize) } else { f };
    let b = match (&args.b, boundary) {
        (Some(text), _) => Some(Word::parse(text)?),
        (None, bd) => bd,
    };
    let need_b = || b.clone().ok_or_else(|| Failure::Usage("coset orbits need --b".into()));
    match args.kind {
        OrbitKind::Conj => {
            let count = orbit_conjugacy(&f, &elt, args.k)?.1;
            out.emit(count.to_string(), json!({ "kind": "conj", "K": args.k, "distinct": count }));
        }
        OrbitKind::Lcoset => {
            let count = orbit_left_coset(&f, &elt, &need_b()?, args.m, args.k)?;
            out.emit(count.to_string(), json!({ "kind": "lcoset", "K": args.k, "distinct": count }));
        }
        OrbitKind::Dcoset => {
            let b = need_b()?;
            let count = orbit_double_coset(&f, &elt, &b, &b, args.m, args.n, args.k)?;
            out.emit(count.to_string(), json!({ "kind": "dcoset", "K": args.k, "distinct": count }));
        }
        OrbitKind::Growth => {
            let report = growth_estimate(&f, &elt, args.k)?;
            let record = serde_json::to_value(&report).expect("growth reports serialize");
            out.emit(format!("lambda {:.4} r2 {:.4}", report.lambda_estimate, report.r_squared), record);
        }
    }
    Ok(())
}

fn report_line(r: &CheckReport, stable: bool) -> String {
    let mut line = format!("{:<18} {} {}", verdict_text(r), r.check, r.params);
    if let Some(w) = &r.witness {
        line.push_str(&format!(" witness: {w}"));
    }
    if !stable {
        line.push_str(&format!(" ({} ms)", r.elapsed_ms));
    }
    line
}

fn verdict_text(r: &CheckReport) -> String {
    serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn cmd_verify(args: &VerifyArgs, seed: Option<u64>, out: &Out) -> Result<bool, Failure> {
    let terms = args.n_max.max(1) + 1;
    let seq: WitnessSequence =
        if args.mutate { WitnessSequence::mutant_main(terms)? } else { witness_sequence(Family::Main, terms)? };
    let bounds = Bounds { l: args.l as usize, m: args.m, k: args.k as usize };
    let reports = run_all_with(&seq, args.n_max, bounds, seed)?;
    for r in &reports {
        let mut record = serde_json::to_value(r).expect("reports serialize");
        if out.stable {
            record.as_object_mut().expect("reports are objects").remove("elapsed_ms");
        }
        out.emit(report_line(r, out.stable), record);
    }
    Ok(!reports.iter().any(CheckReport::is_refuted))
}
