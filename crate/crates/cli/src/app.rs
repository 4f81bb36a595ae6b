//! Command-line verbs.
//!
//! Exit status: 0 success or verified, 1 input fault (one JSON line on
//! stderr), 2 counterexample or invalid input configuration, 3 budget
//! exhausted. Every run prints a reproducibility header to stderr; JSON
//! outputs embed the same header.

use crate::render::{render, Art, Style};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use subshift::asymptotics::{
    bce_profile, check_witness, exchangeability_graph, exchangeable_with, Classification, ExchangeabilityParams, Layer,
    ObstructionRegistry, PairSelection, ShiftView, WitnessMode,
};
use subshift::claims::{
    torus_pool, verify_blue_sky, verify_good_wave, verify_pasting, verify_periodic_density, verify_weak_mixing_gluing,
    worm_chain, BlueSkyParams, ClaimReport, DensityParams, GoodWaveParams, Verdict,
};
use subshift::entropy::{entropy_upper_box, strip_table, StripOptions};
use subshift::format::{parse_pattern, parse_spec, parse_torus, write_pattern, write_spec, write_torus};
use subshift::solver::count_language;
use subshift::{box_support, compile_wang, zoo, Alphabet, Coord, Error, Pattern, SearchBudget, Shift, TorusConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_COUNTEREXAMPLE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Version of the JSON documents written by the tool.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "subshift", version, about = "Subshifts of finite type: languages, entropy, exchangeability, claims")]
pub struct Cli {
    /// Search node budget per solver call (0 = unlimited).
    #[arg(long, global = true, env = "SUBSHIFT_BUDGET_NODES", default_value_t = 20_000_000)]
    pub budget_nodes: u64,
    /// Wall-clock budget per solver call in milliseconds (0 = unlimited).
    /// Nonzero values make results timing dependent.
    #[arg(long, global = true, env = "SUBSHIFT_BUDGET_MILLIS", default_value_t = 0)]
    pub budget_millis: u64,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct ShiftArg {
    /// Built-in shift name (`worm-shift` is the factor of `worm-precursor`).
    #[arg(long, conflicts_with = "spec")]
    pub shift: Option<String>,
    /// Specification file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse a specification and optionally validate a pattern or torus.
    Validate {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, conflicts_with = "pattern")]
        torus: Option<PathBuf>,
        /// Write the compiled specification to `--out`.
        #[arg(long)]
        write_spec: bool,
    },
    /// List the m-extendable language on a box.
    Enumerate {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long = "box")]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        margin: u32,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
    /// Count the m-extendable language on a box.
    Count {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long = "box")]
        radius: u32,
        #[arg(long, default_value_t = 0)]
        margin: u32,
    },
    /// Entropy bounds: strip transfer up to width `--strip`, or box counts
    /// up to radius `--box`.
    Entropy {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long, conflicts_with = "radius")]
        strip: Option<u32>,
        #[arg(long = "box")]
        radius: Option<u32>,
        #[arg(long, default_value_t = 0)]
        margin: u32,
        #[arg(long)]
        json: bool,
    },
    /// Classify a pair of patterns.
    Exchange {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Directory for witness tori or patterns.
        #[arg(long)]
        artifacts: Option<PathBuf>,
    },
    /// Exchangeability graph of the language on a box.
    Graph {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long = "box")]
        radius: u32,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Classify this many random pairs instead of all.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 5_000)]
        cap: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Components and diameters of graphs on boxes of radius 0..=max.
    Bce {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long)]
        max_n: u32,
        #[command(flatten)]
        witness: WitnessArgs,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 5_000)]
        cap: usize,
    },
    /// Check one of the example claims.
    Claim {
        #[command(subcommand)]
        claim: ClaimCmd,
        /// Directory for counterexample tori, patterns and renders.
        #[arg(long, global = true)]
        artifacts: Option<PathBuf>,
    },
    /// Draw a pattern or torus.
    Render {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, conflicts_with = "pattern")]
        torus: Option<PathBuf>,
        /// svg, panels or ppm.
        #[arg(long, default_value = "svg")]
        style: Style,
    },
}

#[derive(Args, Debug, Clone)]
pub struct WitnessArgs {
    /// Radius of the box the pair may differ on (default: fit the support).
    #[arg(long)]
    pub r: Option<u32>,
    /// Margin around it (default: half the largest rule span).
    #[arg(long)]
    pub m: Option<u32>,
    /// torus, background, open or auto.
    #[arg(long, default_value = "auto")]
    pub mode: WitnessMode,
}

#[derive(Subcommand, Debug)]
pub enum ClaimCmd {
    /// Every wave on every torus with these periods is good.
    GoodWave {
        #[arg(long, value_delimiter = ',', default_value = "3,3,5")]
        torus: Vec<u32>,
        #[arg(long, default_value_t = 1_000_000)]
        max_tori: u64,
    },
    /// Blue sky completion of X_struct patterns on box(n).
    BlueSky {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ring: Option<u32>,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Patterns on box(n) complete to tori.
    Density {
        #[command(flatten)]
        shift: ShiftArg,
        #[arg(long)]
        n: u32,
        #[arg(long, value_delimiter = ',')]
        periods: Option<Vec<u32>>,
        #[arg(long, default_value_t = 2)]
        margin: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 100_000)]
        exhaustive_cap: usize,
    },
    /// Pastes Good Wave tori along a blank seam. Without `--lower` and
    /// `--upper`, pastes `--pairs` random pairs of tori with periods
    /// (3,3,5) and (3,3,6).
    Pasting {
        #[arg(long, requires = "upper")]
        lower: Option<PathBuf>,
        #[arg(long, requires = "lower")]
        upper: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        k: i32,
        #[arg(long, default_value_t = 10)]
        pairs: usize,
    },
    /// Glues two Good Wave pattern pairs into one pair of tori.
    WeakMixing {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long)]
        p2: PathBuf,
        #[arg(long)]
        q2: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Option<Vec<i32>>,
    },
    /// Moves a straight worm between columns, one witness per step.
    WormChain {
        #[arg(long, allow_hyphen_values = true)]
        from: i32,
        #[arg(long, allow_hyphen_values = true)]
        to: i32,
        #[arg(long, default_value_t = 3)]
        window: u32,
    },
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::BudgetExhausted { .. } => (EXIT_BUDGET, "budget-exhausted"),
            Error::Parse { .. } => (EXIT_INPUT, "parse"),
            Error::Io(_) => (EXIT_INPUT, "io"),
            Error::UnsupportedDimension(_) => (EXIT_INPUT, "unsupported-dimension"),
            Error::Precondition(_) => (EXIT_INPUT, "precondition"),
            Error::CapExceeded { .. } => (EXIT_INPUT, "cap-exceeded"),
            _ => (EXIT_INPUT, "invalid-input"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_INPUT, kind: "io", message: e.to_string() }
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, kind: "invalid-input", message: message.into() }
}

type Run<T> = std::result::Result<T, Failure>;

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)
}

fn read(path: &Path) -> Run<String> {
    std::fs::read_to_string(path).map_err(|e| Failure { code: EXIT_INPUT, kind: "io", message: format!("{}: {e}", path.display()) })
}

/// The shift and the view patterns are read in.
struct Loaded {
    view: ShiftView,
    /// Canonical text of the source specification.
    text: String,
}

impl Loaded {
    fn shift(&self) -> &Shift {
        self.view.source()
    }

    /// Alphabet of the patterns the user reads and writes.
    fn alphabet(&self) -> &Alphabet {
        self.view.alphabet()
    }

    fn hash(&self) -> String {
        Sha256::digest(self.text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn load(arg: &ShiftArg) -> Run<Loaded> {
    let view = match (&arg.shift, &arg.spec) {
        (Some(name), _) if name == "worm-shift" => {
            let (spec, code) = zoo::worm_shift();
            ShiftView::factor(Shift::new(spec)?, code)?
        }
        (Some(name), _) => ShiftView::Sft(zoo::builtin(name)?),
        (None, Some(path)) => {
            let spec = parse_spec(&read(path)?)?;
            let spec = if spec.wang_mode() { compile_wang(&spec)? } else { spec };
            ShiftView::Sft(Shift::new(spec)?)
        }
        (None, None) => return Err(input("give --shift or --spec")),
    };
    let text = write_spec(view.source().spec());
    Ok(Loaded { view, text })
}

fn load_gw() -> Run<Loaded> {
    load(&ShiftArg { shift: Some("good-wave".into()), spec: None })
}

struct Ctx {
    budget: SearchBudget,
    seed: u64,
    out: Option<PathBuf>,
}

impl Ctx {
    fn header(&self, spec_hash: Option<String>, verb: &str, params: Value) -> Value {
        json!({
            "tool": "subshift",
            "version": env!("CARGO_PKG_VERSION"),
            "schema": SCHEMA_VERSION,
            "verb": verb,
            "spec_sha256": spec_hash,
            "seed": self.seed,
            "budget_nodes": self.budget.max_nodes,
            "budget_millis": self.budget.max_millis,
            "params": params,
        })
    }

    fn emit(&self, bytes: &[u8]) -> Run<()> {
        match &self.out {
            Some(p) => write_atomic(p, bytes)?,
            None => {
                use std::io::Write;
                std::io::stdout().write_all(bytes)?;
            }
        }
        Ok(())
    }

    fn emit_json(&self, header: &Value, body: impl Serialize) -> Run<()> {
        let mut doc = serde_json::to_value(body).map_err(|e| input(e.to_string()))?;
        if let Value::Object(m) = &mut doc {
            m.insert("header".into(), header.clone());
        }
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| input(e.to_string()))?;
        s.push('\n');
        self.emit(s.as_bytes())
    }
}

fn announce(header: &Value) {
    eprintln!("# {header}");
}

fn params_for(view: &ShiftView, f: &subshift::Support, w: &WitnessArgs, budget: &SearchBudget) -> ExchangeabilityParams {
    let fit = ExchangeabilityParams::for_support(view.source(), f);
    let mut p = ExchangeabilityParams::new(w.r.unwrap_or(fit.r), w.m.unwrap_or(fit.m)).mode(w.mode).budget(budget.clone());
    p.r = p.r.max(fit.r);
    p
}

fn selection(sample: Option<usize>, seed: u64) -> PairSelection {
    match sample {
        Some(count) => PairSelection::Sample { count, seed },
        None => PairSelection::All,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Verified => EXIT_OK,
        Verdict::Counterexample => EXIT_COUNTEREXAMPLE,
        Verdict::BudgetExhausted => EXIT_BUDGET,
    }
}

/// Writes each artifact of a report as a torus or pattern file plus an SVG.
fn write_artifacts(dir: &Path, report: &ClaimReport, alphabet: &Alphabet) -> Run<()> {
    for (i, a) in report.artifacts.iter().enumerate() {
        let stem = format!("{}-{i:02}", report.claim);
        if let Some(t) = &a.torus {
            write_atomic(&dir.join(format!("{stem}.torus")), write_torus(t, alphabet).as_bytes())?;
            if (2..=3).contains(&t.dim()) {
                write_atomic(&dir.join(format!("{stem}.svg")), &render(alphabet, &Art::Torus(t), Style::Svg)?)?;
            }
        }
        if let Some(p) = &a.pattern {
            write_atomic(&dir.join(format!("{stem}.pattern")), write_pattern(p, alphabet).as_bytes())?;
            if (2..=3).contains(&p.dim()) {
                write_atomic(&dir.join(format!("{stem}.svg")), &render(alphabet, &Art::Pattern(p), Style::Svg)?)?;
            }
        }
    }
    Ok(())
}

fn run_claim(ctx: &Ctx, claim: &ClaimCmd, artifacts: Option<&Path>) -> Run<i32> {
    let budget = &ctx.budget;
    let (loaded, report) = match claim {
        ClaimCmd::GoodWave { torus, max_tori } => {
            let params = GoodWaveParams { max_tori: *max_tori, ..Default::default() };
            (load_gw()?, verify_good_wave(torus, &params, budget)?)
        }
        ClaimCmd::BlueSky { n, ring, samples } => {
            let params = BlueSkyParams { ring: *ring, samples: *samples, seed: ctx.seed, ..Default::default() };
            (load(&ShiftArg { shift: Some("x-struct".into()), spec: None })?, verify_blue_sky(*n, &params, budget)?)
        }
        ClaimCmd::Density { shift, n, periods, margin, samples, exhaustive_cap } => {
            let loaded = load(shift)?;
            let params = DensityParams {
                periods: periods.clone(),
                margin: *margin,
                exhaustive_cap: *exhaustive_cap,
                samples: *samples,
                seed: ctx.seed,
            };
            let r = verify_periodic_density(loaded.shift(), *n, &params, budget)?;
            (loaded, r)
        }
        ClaimCmd::Pasting { lower, upper, k, pairs } => {
            let loaded = load_gw()?;
            let r = match (lower, upper) {
                (Some(l), Some(u)) => {
                    let a = loaded.alphabet();
                    verify_pasting(&parse_torus(&read(l)?, a)?, &parse_torus(&read(u)?, a)?, *k, budget)?
                }
                _ => random_pastings(loaded.shift(), *pairs, *k, ctx.seed, budget)?,
            };
            (loaded, r)
        }
        ClaimCmd::WeakMixing { p, q, p2, q2, u } => {
            let loaded = load_gw()?;
            let a = loaded.alphabet();
            let read_p = |f: &PathBuf| -> Run<Pattern> { Ok(parse_pattern(&read(f)?, a)?) };
            let u = u.as_ref().map(|v| Coord::new(v));
            let r = verify_weak_mixing_gluing(&read_p(p)?, &read_p(q)?, &read_p(p2)?, &read_p(q2)?, u, budget)?;
            (loaded, r)
        }
        ClaimCmd::WormChain { from, to, window } => {
            let loaded = load(&ShiftArg { shift: Some("worm-shift".into()), spec: None })?;
            let chain = worm_chain(*from, *to, *window)?;
            let mut r = ClaimReport::new("worm-chain").param("from", from).param("to", to).param("window", window);
            r.exhaustive = true;
            let dir = (to - from).signum();
            for (i, w) in chain.iter().enumerate() {
                let n = from + dir * i as i32;
                let (p, q) = (subshift::claims::straight_worm(n, *window), subshift::claims::straight_worm(n + dir, *window));
                r.tested += 1;
                if check_witness(&loaded.view, w, &p, &q)? {
                    r.passed += 1;
                } else {
                    r.fail(Verdict::Counterexample, Some(subshift::claims::Artifact::pattern(format!("step {i}"), p)));
                }
            }
            r = r.param("steps", chain.len());
            (loaded, r)
        }
    };
    let header = ctx.header(Some(loaded.hash()), "claim", serde_json::to_value(&report.params).unwrap_or(Value::Null));
    announce(&header);
    if let Some(dir) = artifacts {
        // Artifacts live over the source alphabet.
        write_artifacts(dir, &report, loaded.shift().spec().alphabet())?;
    }
    ctx.emit_json(&header, &report)?;
    Ok(verdict_code(report.verdict))
}

/// Pastes `pairs` seeded random pairs from the pools of tori with periods
/// (3,3,5) and (3,3,6).
pub fn random_pastings(shift: &Shift, pairs: usize, k: i32, seed: u64, budget: &SearchBudget) -> Run<ClaimReport> {
    use rand::{Rng, SeedableRng};
    let pools = [torus_pool(shift, &[3, 3, 5], 2_000, budget)?, torus_pool(shift, &[3, 3, 6], 2_000, budget)?];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = ClaimReport::new("pasting").param("pairs", pairs).param("seed", seed).param("k", k);
    report = report.param("pool_sizes", [pools[0].len(), pools[1].len()]);
    report.exhaustive = false;
    for _ in 0..pairs {
        let (i, j) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let a = &pools[i][rng.gen_range(0..pools[i].len())];
        let b = &pools[j][rng.gen_range(0..pools[j].len())];
        let r = verify_pasting(a, b, k, budget)?;
        report.tested += 1;
        if r.verified() {
            report.passed += 1;
        } else {
            for art in r.artifacts {
                report.fail(r.verdict, Some(art));
            }
            if r.verdict == Verdict::BudgetExhausted {
                report.fail(Verdict::BudgetExhausted, None);
            }
        }
    }
    Ok(report)
}

/// A pattern or torus file, and whether it parsed over the source alphabet
/// (rather than the factor's).
type ArtFile = (std::result::Result<Pattern, TorusConfig>, bool);

fn read_art(loaded: &Loaded, pattern: &Option<PathBuf>, torus: &Option<PathBuf>) -> Run<Option<ArtFile>> {
    let (path, is_torus) = match (pattern, torus) {
        (Some(p), _) => (p, false),
        (_, Some(t)) => (t, true),
        _ => return Ok(None),
    };
    let text = read(path)?;
    let parse = |a: &Alphabet| -> subshift::Result<std::result::Result<Pattern, TorusConfig>> {
        if is_torus {
            parse_torus(&text, a).map(Err)
        } else {
            parse_pattern(&text, a).map(Ok)
        }
    };
    match parse(loaded.shift().spec().alphabet()) {
        Ok(x) => Ok(Some((x, true))),
        Err(e) => match parse(loaded.alphabet()) {
            Ok(x) if !is_torus => Ok(Some((x, false))),
            _ => Err(e.into()),
        },
    }
}

pub fn run(cli: Cli) -> Run<i32> {
    let budget = SearchBudget { max_nodes: cli.budget_nodes, max_millis: cli.budget_millis, seed: 0, trace: None };
    let ctx = Ctx { budget, seed: cli.seed, out: cli.out.clone() };
    let budget = &ctx.budget;
    match &cli.command {
        Command::Validate { shift, pattern, torus, write_spec: ws } => {
            let l = load(shift)?;
            let header = ctx.header(Some(l.hash()), "validate", json!({}));
            announce(&header);
            let spec = l.shift().spec();
            let (valid, subject) = match read_art(&l, pattern, torus)? {
                None => (true, "spec"),
                Some((Ok(p), true)) => (l.shift().validate(&p)?, "pattern"),
                Some((Ok(p), false)) => (l.view.validate(&p, budget)?, "pattern"),
                Some((Err(t), _)) => (l.shift().validate_torus(&t)?, "torus"),
            };
            let summary = json!({
                "subject": subject,
                "valid": valid,
                "shift": l.view.name(),
                "dimension": spec.dimension(),
                "symbols": spec.alphabet().len(),
                "rules": spec.forbidden().len(),
            });
            if *ws {
                ctx.emit(l.text.as_bytes())?;
            } else {
                ctx.emit_json(&header, summary)?;
            }
            Ok(if valid { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
        }
        Command::Enumerate { shift, radius, margin, cap } => {
            let l = load(shift)?;
            let header = ctx.header(Some(l.hash()), "enumerate", json!({"box": radius, "margin": margin, "cap": cap}));
            announce(&header);
            let f = box_support(l.shift().dimension(), *radius);
            let lang = l.view.language(&f, *margin, budget, *cap)?;
            let a = l.alphabet();
            let names: Vec<Vec<&str>> = lang.patterns.iter().map(|p| p.symbols().iter().map(|&s| a.name(s)).collect()).collect();
            let cells: Vec<Vec<i32>> = f.iter().map(|c| c.entries().to_vec()).collect();
            ctx.emit_json(&header, json!({"cells": cells, "count": names.len(), "truncated": lang.truncated, "patterns": names}))?;
            Ok(EXIT_OK)
        }
        Command::Count { shift, radius, margin } => {
            let l = load(shift)?;
            let header = ctx.header(Some(l.hash()), "count", json!({"box": radius, "margin": margin}));
            announce(&header);
            if !matches!(l.view, ShiftView::Sft(_)) {
                return Err(input("count needs a shift of finite type; use enumerate for factors"));
            }
            let f = box_support(l.shift().dimension(), *radius);
            let c = count_language(l.shift(), &f, *margin, budget)?;
            ctx.emit(format!("{}\n", c.count).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Entropy { shift, strip, radius, margin, json: as_json } => {
            let l = load(shift)?;
            let header = ctx.header(Some(l.hash()), "entropy", json!({"strip": strip, "box": radius, "margin": margin}));
            announce(&header);
            let table = match (strip, radius) {
                (Some(w), _) => {
                    let opts = StripOptions { budget: budget.clone(), ..Default::default() };
                    strip_table(l.shift(), *w, &opts)?
                }
                (None, Some(n)) => {
                    let mut rows = Vec::new();
                    for k in 0..=*n {
                        rows.push(entropy_upper_box(l.shift(), k, *margin, budget)?);
                    }
                    rows
                }
                (None, None) => return Err(input("give --strip or --box")),
            };
            if *as_json {
                ctx.emit_json(&header, json!({ "estimates": table }))?;
            } else {
                let mut s = String::from("window\tupper\tlower\n");
                for e in &table {
                    s.push_str(&format!("{}\t{:.10}\t{:.10}\n", e.window, e.upper, e.lower));
                }
                ctx.emit(s.as_bytes())?;
            }
            Ok(EXIT_OK)
        }
        Command::Exchange { shift, p, q, witness, artifacts } => {
            let l = load(shift)?;
            let a = l.alphabet();
            let (p, q) = (parse_pattern(&read(p)?, a)?, parse_pattern(&read(q)?, a)?);
            let params = params_for(&l.view, p.support(), witness, budget);
            let header = ctx.header(Some(l.hash()), "exchange", json!({"r": params.r, "m": params.m, "mode": params.mode}));
            announce(&header);
            let c = exchangeable_with(&l.view, &ObstructionRegistry::default(), &p, &q, &params)?;
            if let (Some(dir), Classification::Witness(w)) = (artifacts, &c) {
                let src = l.shift().spec().alphabet();
                for (name, layer) in [("left", &w.left), ("right", &w.right)] {
                    match layer {
                        Layer::Torus(t) => write_atomic(&dir.join(format!("{name}.torus")), write_torus(t, src).as_bytes())?,
                        Layer::Pattern(x) => write_atomic(&dir.join(format!("{name}.pattern")), write_pattern(x, src).as_bytes())?,
                    }
                }
            }
            let code = if matches!(c, Classification::BudgetExhausted) { EXIT_BUDGET } else { EXIT_OK };
            ctx.emit_json(&header, &c)?;
            Ok(code)
        }
        Command::Graph { shift, radius, witness, sample, cap, dot } => {
            let l = load(shift)?;
            let f = box_support(l.shift().dimension(), *radius);
            let params = params_for(&l.view, &f, witness, budget);
            let header = ctx.header(
                Some(l.hash()),
                "graph",
                json!({"box": radius, "r": params.r, "m": params.m, "mode": params.mode, "sample": sample, "cap": cap}),
            );
            announce(&header);
            let g = exchangeability_graph(&l.view, &ObstructionRegistry::default(), &f, None, &params, selection(*sample, ctx.seed), *cap)?;
            if *dot {
                let a = l.alphabet();
                let dot = g.to_dot(|p| p.symbols().iter().map(|&s| a.name(s)).collect::<Vec<_>>().join(" "));
                ctx.emit(dot.as_bytes())?;
            } else {
                ctx.emit_json(&header, &g)?;
            }
            Ok(if g.unknown().any(|e| e.class == subshift::asymptotics::EdgeClass::BudgetExhausted) { EXIT_BUDGET } else { EXIT_OK })
        }
        Command::Bce { shift, max_n, witness, sample, cap } => {
            let l = load(shift)?;
            let d = l.shift().dimension();
            let f0 = box_support(d, 0);
            let params = params_for(&l.view, &f0, witness, budget);
            let header = ctx.header(Some(l.hash()), "bce", json!({"max_n": max_n, "r": params.r, "m": params.m, "mode": params.mode}));
            announce(&header);
            let supports: Vec<_> = (0..=*max_n).map(|n| box_support(d, n)).collect();
            let prof = bce_profile(&l.view, &ObstructionRegistry::default(), &supports, &params, selection(*sample, ctx.seed), *cap)?;
            ctx.emit_json(&header, &prof)?;
            Ok(EXIT_OK)
        }
        Command::Claim { claim, artifacts } => run_claim(&ctx, claim, artifacts.as_deref()),
        Command::Render { shift, pattern, torus, style } => {
            let l = load(shift)?;
            let header = ctx.header(Some(l.hash()), "render", json!({"style": format!("{style:?}").to_lowercase()}));
            announce(&header);
            let (art, source) = read_art(&l, pattern, torus)?.ok_or_else(|| input("give --pattern or --torus"))?;
            let alphabet = if source { l.shift().spec().alphabet() } else { l.alphabet() };
            let bytes = match &art {
                Ok(p) => render(alphabet, &Art::Pattern(p), *style)?,
                Err(t) => render(alphabet, &Art::Torus(t), *style)?,
            };
            ctx.emit(&bytes)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the parsed command and reports faults on stderr.
pub fn main_with(cli: Cli) -> i32 {
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", json!({"error": f.kind, "message": f.message}));
            f.code
        }
    }
}
