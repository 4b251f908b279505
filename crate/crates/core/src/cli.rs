//! Command-line front end.
//!
//! Every command prints JSON on stdout and returns an exit code: `0` when the
//! checked property holds, `1` when it fails or a counterexample is found, `2`
//! on input errors.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::datum::{validate_with, CoxeterDatum, M_MAX};
use crate::dihedral::{braid_check, classify_gamma, order_of_ab, recurrence_deviation};
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::roots::{
    decomposition_check, generate_roots, Decomposition, RootPair, Side, SignClass, DEFAULT_ROOT_CAP,
};
use crate::subgroup::{
    canonical_generators_bruteforce, delta_reflections, random_seeds, same_reflections,
    subgroup_from_reflections, FiniteParent, SubgroupCaps, SubgroupReport,
};

pub const SCHEMA: &str = "paired-roots/1";

/// Largest deviation accepted by `dihedral --pcheck`.
const PCHECK_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "paired-roots",
    version,
    about = "Root systems and reflection subgroups of Coxeter data"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Numerical tolerance; overrides the datum file.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Worker threads for root and group enumeration.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized choices.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Largest finite bond order recognised.
    #[arg(long, global = true, default_value_t = M_MAX)]
    pub m_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check conditions D1-D5 of a datum file.
    Validate { file: PathBuf },
    /// Enumerate root pairs as JSON lines.
    Roots {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_ROOT_CAP)]
        cap: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
        /// Accept data that fail validation.
        #[arg(long)]
        force: bool,
    },
    /// Search for a root that is neither positive nor negative.
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_ROOT_CAP)]
        cap: usize,
    },
    /// Analyse the reflection subgroup generated by some roots.
    Subgroup {
        file: PathBuf,
        /// Side-1 coordinates of the generating roots, as a JSON list of lists.
        #[arg(long, conflicts_with = "random")]
        roots: Option<String>,
        /// Use this many random positive roots instead.
        #[arg(long)]
        random: Option<usize>,
        /// Depth of the parent root enumeration.
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// Include the canonical roots and their Coxeter matrix.
        #[arg(long)]
        canonical: bool,
        /// Compare with the brute-force canonical generators.
        #[arg(long)]
        oracle: bool,
        /// Include the pairwise canonical-root report.
        #[arg(long)]
        report: bool,
    },
    /// Rank-2 computations for a parameter gamma.
    Dihedral {
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<f64>,
        /// `k/m`, meaning gamma = cos(k pi / m).
        #[arg(long)]
        cos: Option<String>,
        #[arg(long)]
        order: bool,
        /// Check the braid relation; needs `--cos`.
        #[arg(long)]
        braid: bool,
        /// Compare recurrence and closed form up to this index.
        #[arg(long)]
        pcheck: Option<usize>,
    },
}

/// Exit code plus the JSON documents to print, one per line.
#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub exit_code: i32,
    pub payload: Vec<Value>,
}

impl CommandOutcome {
    fn done(exit_code: i32, doc: Value) -> Self {
        Self {
            exit_code,
            payload: vec![doc],
        }
    }

    fn input_error(message: impl std::fmt::Display) -> Self {
        Self::done(2, json!({ "schema": SCHEMA, "error": message.to_string() }))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for doc in &self.payload {
            out.push_str(&doc.to_string());
            out.push('\n');
        }
        out
    }
}

pub fn run(cli: &Cli) -> CommandOutcome {
    if let Some(n) = cli.global.threads {
        // a pool may already exist when run twice in one process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    if let Some(eps) = cli.global.eps {
        if !(eps > 0.0) {
            return CommandOutcome::input_error("--eps must be positive");
        }
    }
    let g = &cli.global;
    match &cli.command {
        Command::Validate { file } => cmd_validate(g, file),
        Command::Roots {
            file,
            depth,
            cap,
            side,
            force,
        } => cmd_roots(g, file, *depth, *cap, *side, *force),
        Command::Decompose { file, depth, cap } => cmd_decompose(g, file, *depth, *cap),
        Command::Subgroup {
            file,
            roots,
            random,
            depth,
            canonical,
            oracle,
            report,
        } => cmd_subgroup(
            g,
            file,
            SubgroupArgs {
                roots: roots.as_deref(),
                random: *random,
                depth: *depth,
                canonical: *canonical,
                oracle: *oracle,
                report: *report,
            },
        ),
        Command::Dihedral {
            gamma,
            cos,
            order,
            braid,
            pcheck,
        } => cmd_dihedral(g, *gamma, cos.as_deref(), *order, *braid, *pcheck),
    }
}

fn load(g: &GlobalOpts, file: &Path) -> Result<CoxeterDatum> {
    let text = std::fs::read_to_string(file)?;
    let datum = CoxeterDatum::from_json_str(&text)?;
    match g.eps {
        Some(eps) => datum.with_tolerance(eps),
        None => Ok(datum),
    }
}

macro_rules! load_or_exit {
    ($g:expr, $file:expr) => {
        match load($g, $file) {
            Ok(d) => d,
            Err(e) => return CommandOutcome::input_error(e),
        }
    };
}

pub fn cmd_validate(g: &GlobalOpts, file: &Path) -> CommandOutcome {
    let datum = load_or_exit!(g, file);
    let report = validate_with(&datum, g.m_max);
    let passed = report.passed();
    CommandOutcome::done(
        if passed { 0 } else { 1 },
        json!({
            "schema": SCHEMA,
            "command": "validate",
            "passed": passed,
            "failures": report.failures(),
            "report": report,
        }),
    )
}

fn word_labels(datum: &CoxeterDatum, word: &[usize]) -> Vec<String> {
    word.iter().map(|&s| datum.labels()[s].clone()).collect()
}

fn pair_json(datum: &CoxeterDatum, p: &RootPair) -> Value {
    json!({
        "x": p.x.as_slice(),
        "y": p.y.as_slice(),
        "depth": p.depth,
        "seed": datum.labels()[p.seed],
        "witness": word_labels(datum, &p.witness),
    })
}

pub fn cmd_roots(
    g: &GlobalOpts,
    file: &Path,
    depth: usize,
    cap: usize,
    side: SideArg,
    force: bool,
) -> CommandOutcome {
    let datum = load_or_exit!(g, file);
    let report = validate_with(&datum, g.m_max);
    if !report.passed() && !force {
        return CommandOutcome::input_error(format!(
            "datum fails {}; pass --force to enumerate anyway",
            report.failures().join(", ")
        ));
    }
    let set = generate_roots(&datum, depth, cap);
    let sides: &[Side] = match side {
        SideArg::One => &[Side::One],
        SideArg::Two => &[Side::Two],
        SideArg::Both => &[Side::One, Side::Two],
    };
    let mut payload = Vec::with_capacity(set.len() + 1);
    for (i, p) in set.pairs().iter().enumerate() {
        let mut doc = pair_json(&datum, p);
        for &s in sides {
            let key = if s == Side::One { "sign1" } else { "sign2" };
            doc[key] = json!(set.sign(i, s));
        }
        payload.push(doc);
    }
    let count = |sign: SignClass| {
        sides
            .iter()
            .map(|&s| (0..set.len()).filter(|&i| set.sign(i, s) == sign).count())
            .max()
    };
    payload.push(json!({
        "schema": SCHEMA,
        "command": "roots",
        "count": set.len(),
        "positive": count(SignClass::Positive),
        "negative": count(SignClass::Negative),
        "mixed": count(SignClass::Mixed),
        "depth_reached": set.depth_reached(),
        "complete": set.complete(),
        "stop_reason": set.stop_reason(),
    }));
    CommandOutcome {
        exit_code: 0,
        payload,
    }
}

pub fn cmd_decompose(g: &GlobalOpts, file: &Path, depth: usize, cap: usize) -> CommandOutcome {
    let datum = load_or_exit!(g, file);
    match decomposition_check(&datum, depth, cap) {
        Decomposition::Holds {
            depth_reached,
            complete,
        } => CommandOutcome::done(
            0,
            json!({
                "schema": SCHEMA,
                "command": "decompose",
                "holds": true,
                "depth_reached": depth_reached,
                "complete": complete,
            }),
        ),
        Decomposition::Counterexample { pair, side } => CommandOutcome::done(
            1,
            json!({
                "schema": SCHEMA,
                "command": "decompose",
                "holds": false,
                "side": if side == Side::One { 1 } else { 2 },
                "counterexample": pair_json(&datum, &pair),
            }),
        ),
    }
}

pub struct SubgroupArgs<'a> {
    pub roots: Option<&'a str>,
    pub random: Option<usize>,
    pub depth: usize,
    pub canonical: bool,
    pub oracle: bool,
    pub report: bool,
}

fn parse_roots(text: &str) -> Result<Vec<Vector>> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text)?;
    Ok(rows.into_iter().map(Vector::from_vec).collect())
}

pub fn cmd_subgroup(g: &GlobalOpts, file: &Path, args: SubgroupArgs) -> CommandOutcome {
    let datum = load_or_exit!(g, file);
    let report = validate_with(&datum, g.m_max);
    if !report.passed() {
        return CommandOutcome::input_error(format!(
            "datum fails {}",
            report.failures().join(", ")
        ));
    }
    let parent_roots = generate_roots(&datum, args.depth, DEFAULT_ROOT_CAP);
    let seeds: Vec<RootPair> = match (args.roots, args.random) {
        (Some(text), None) => {
            let vectors = match parse_roots(text) {
                Ok(v) => v,
                Err(e) => return CommandOutcome::input_error(format!("--roots: {e}")),
            };
            let mut seeds = Vec::new();
            for v in vectors {
                if v.len() != datum.dim1() {
                    return CommandOutcome::input_error(Error::DimensionMismatch {
                        expected: datum.dim1(),
                        found: v.len(),
                    });
                }
                match parent_roots.find(&v) {
                    Some(i) => seeds.push(parent_roots.pairs()[i].clone()),
                    None => {
                        return CommandOutcome::input_error(Error::RootNotFound(
                            v.as_slice().to_vec(),
                        ))
                    }
                }
            }
            seeds
        }
        (None, Some(k)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            random_seeds(&parent_roots, k, &mut rng)
        }
        _ => return CommandOutcome::input_error("give exactly one of --roots or --random"),
    };

    let sg = match subgroup_from_reflections(&datum, &seeds, &SubgroupCaps::default()) {
        Ok(sg) => sg,
        Err(e) => return CommandOutcome::input_error(e),
    };
    let full = SubgroupReport::new(&sg);
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "subgroup",
        "generators": full.generators,
        "order": full.order,
        "complete": full.complete,
        "phi_class_count": full.phi_class_count,
    });
    let mut exit_code = 0;
    if args.canonical {
        doc["delta"] = json!(full.delta);
        doc["coxeter_matrix_of_delta"] = json!(full.coxeter_matrix_of_delta);
    }
    if args.report {
        if !full.d34.consistent() {
            exit_code = 1;
        }
        doc["d34"] = json!(full.d34);
    }
    if args.oracle {
        let parent = match FiniteParent::new(&datum) {
            Ok(p) => p,
            Err(e) => {
                return CommandOutcome::input_error(format!("--oracle needs a finite parent: {e}"))
            }
        };
        let brute = match canonical_generators_bruteforce(&sg, &parent) {
            Ok(b) => b,
            Err(e) => return CommandOutcome::input_error(e),
        };
        let agree = delta_reflections(&sg).is_ok_and(|d| same_reflections(&brute, &d));
        if !agree {
            exit_code = 1;
        }
        doc["oracle"] = json!({
            "agree": agree,
            "bruteforce": brute.iter().map(|r| r.root_pair.x.as_slice().to_vec()).collect::<Vec<_>>(),
        });
    }
    CommandOutcome::done(exit_code, doc)
}

fn parse_fraction(text: &str) -> Option<(u32, u32)> {
    let (k, m) = text.split_once('/')?;
    let (k, m) = (k.trim().parse().ok()?, m.trim().parse().ok()?);
    (m > 0).then_some((k, m))
}

pub fn cmd_dihedral(
    g: &GlobalOpts,
    gamma: Option<f64>,
    cos: Option<&str>,
    order: bool,
    braid: bool,
    pcheck: Option<usize>,
) -> CommandOutcome {
    let eps = g.eps.unwrap_or(crate::datum::DEFAULT_TOLERANCE);
    let fraction = match cos.map(parse_fraction) {
        Some(None) => return CommandOutcome::input_error("--cos expects k/m"),
        Some(Some(f)) => Some(f),
        None => None,
    };
    let gamma = match (gamma, fraction) {
        (Some(v), None) => v,
        (None, Some((k, m))) => (k as f64 * PI / m as f64).cos(),
        (Some(_), Some(_)) => {
            return CommandOutcome::input_error("--gamma and --cos are exclusive")
        }
        (None, None) => return CommandOutcome::input_error("give --gamma or --cos"),
    };
    if !gamma.is_finite() {
        return CommandOutcome::input_error("gamma must be finite");
    }
    if braid && fraction.is_none() {
        return CommandOutcome::input_error("--braid needs --cos k/m");
    }

    let mut doc = json!({ "schema": SCHEMA, "command": "dihedral", "gamma": gamma });
    doc["classification"] = match classify_gamma(gamma, eps, g.m_max, 10_000) {
        Ok(c) => json!(c),
        Err(_) => json!({ "kind": "inconclusive" }),
    };
    let mut exit_code = 0;
    if order {
        doc["order"] = json!(order_of_ab(gamma, 1e-9, g.m_max.min(500), 500));
    }
    if let (true, Some((k, m))) = (braid, fraction) {
        let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
        let mut samples = vec![(1.0, 1.0)];
        samples.extend((0..4).map(|_| (rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0))));
        let mut holds = true;
        for (q, x) in samples {
            match braid_check(k, m, q, x) {
                Ok(ok) => holds &= ok,
                Err(e) => return CommandOutcome::input_error(e),
            }
        }
        if !holds {
            exit_code = 1;
        }
        doc["braid"] = json!(holds);
    }
    if let Some(n) = pcheck {
        let deviation = recurrence_deviation(gamma, n);
        if !(deviation <= PCHECK_TOL) {
            exit_code = 1;
        }
        doc["max_deviation"] = json!(deviation);
    }
    CommandOutcome::done(exit_code, doc)
}
