//! Command-line front end: stable JSON/TSV formats over the library
//! operations, with an optional persistent cache of enumeration and basis
//! tables.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cache::CacheFile;
use crate::elements::{enumerate_fc_strata_jobs, FcElement, Side};
use crate::graph::{classify_star_reducible, counterexample_word, CoxeterGraph, FamilySpec, GraphJson};
use crate::hinv::h_value;
use crate::star::{star_reduce_path, StarReducer};
use crate::tl::TlContext;
use crate::trace::{cartier_foata, Word};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser)]
#[command(name = "coxstar", version, about = "Star reducible Coxeter group combinatorics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a graph JSON file: {"rank": n, "edges": [[i, j, m], ...]}
    #[arg(long, conflicts_with = "family")]
    graph: Option<PathBuf>,
    /// Named family: A4, B3, D5, E6, F4, H3, I2(7), Atilde4, Ctilde3,
    /// Etilde6, Ftilde5, K3(3,4,5)
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Cache directory; the COXSTAR_CACHE environment variable overrides it
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Strategy seed for seeded rewriting
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// State cap for word-problem searches
    #[arg(long, default_value_t = 500_000)]
    cap: usize,
    /// Worker threads for enumerate and positivity
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Decide star reducibility and report per-component verdicts
    Classify(CommonArgs),
    /// Enumerate fully commutative elements up to a length
    Enumerate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_len: usize,
    },
    /// Star-reduce a fully commutative word to a commuting product
    StarReduce {
        #[command(flatten)]
        common: CommonArgs,
        /// Word as a JSON array, e.g. [0,1,0]
        #[arg(long)]
        word: String,
    },
    /// Cartier-Foata normal form of a word
    Cf {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        word: String,
    },
    /// The rewriting invariant h of a word, with the move log
    H {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        word: String,
    },
    /// Reduce a monomial in the generators to monomial-basis coordinates
    Reduce {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        word: String,
    },
    /// Canonical basis table up to a length
    Cbasis {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_len: usize,
    },
    /// Structure-constant positivity audit over all enumerated pairs
    Positivity {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_len: usize,
    },
    /// Report enumerated elements with no star reduction chain
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        max_len: usize,
    },
    /// The registry witness word for a rejected connected graph
    Counterexample(CommonArgs),
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn domain(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: msg.into(),
        }
    }
    fn verify(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_VERIFY,
            message: msg.into(),
        }
    }
    fn cap(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CAP,
            message: msg.into(),
        }
    }
}

fn classify_error(msg: String) -> Failure {
    if msg.contains("cap") && msg.contains("exceeded") {
        Failure::cap(msg)
    } else if msg.contains("defining property")
        || msg.contains("not reduced fully commutative")
        || msg.contains("no normal shape case")
    {
        Failure::verify(msg)
    } else {
        Failure::domain(msg)
    }
}

fn load_graph(common: &CommonArgs) -> Result<CoxeterGraph, Failure> {
    match (&common.graph, &common.family) {
        (Some(path), None) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| Failure::domain(format!("cannot read {}: {e}", path.display())))?;
            let parsed: GraphJson = serde_json::from_str(&raw)
                .map_err(|e| Failure::domain(format!("bad graph JSON: {e}")))?;
            parsed
                .to_graph()
                .map_err(|e| Failure::domain(e.to_string()))
        }
        (None, Some(name)) => FamilySpec::parse(name)
            .and_then(|f| f.graph())
            .map_err(|e| Failure::domain(e.to_string())),
        _ => Err(Failure::domain("exactly one of --graph or --family is required")),
    }
}

fn parse_word(g: &CoxeterGraph, raw: &str) -> Result<Word, Failure> {
    let word: Word = serde_json::from_str(raw)
        .map_err(|e| Failure::domain(format!("bad word JSON: {e}")))?;
    if let Some(&bad) = word.iter().find(|&&s| s >= g.rank()) {
        return Err(Failure::domain(format!(
            "generator {bad} out of range for rank {}",
            g.rank()
        )));
    }
    Ok(word)
}

fn cache_dir(common: &CommonArgs) -> Option<PathBuf> {
    std::env::var_os("COXSTAR_CACHE")
        .map(PathBuf::from)
        .or_else(|| common.cache.clone())
}

fn side_tag(side: Side) -> &'static str {
    match side {
        Side::Left => "L",
        Side::Right => "R",
    }
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(output) => {
            println!("{output}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Result<String, Failure> {
    match command {
        Command::Classify(common) => classify_cmd(&common),
        Command::Enumerate { common, max_len } => enumerate_cmd(&common, max_len),
        Command::StarReduce { common, word } => star_reduce_cmd(&common, &word),
        Command::Cf { common, word } => cf_cmd(&common, &word),
        Command::H { common, word } => h_cmd(&common, &word),
        Command::Reduce { common, word } => reduce_cmd(&common, &word),
        Command::Cbasis { common, max_len } => cbasis_cmd(&common, max_len),
        Command::Positivity { common, max_len } => positivity_cmd(&common, max_len),
        Command::Audit { common, max_len } => audit_cmd(&common, max_len),
        Command::Counterexample(common) => counterexample_cmd(&common),
    }
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON output")
}

fn classify_cmd(common: &CommonArgs) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let verdict = classify_star_reducible(&g);
    let components: Vec<serde_json::Value> = verdict
        .components
        .iter()
        .map(|c| {
            json!({
                "vertices": c.vertices,
                "family": c.family.as_ref().map(|f| f.to_string()),
                "counterexample": c.counterexample,
            })
        })
        .collect();
    let value = json!({
        "star_reducible": verdict.star_reducible,
        "components": components,
    });
    Ok(match common.format {
        Format::Json => pretty(&value),
        Format::Tsv => {
            let mut lines = vec![format!("star_reducible\t{}", verdict.star_reducible)];
            for c in &verdict.components {
                lines.push(format!(
                    "component\t{:?}\t{}",
                    c.vertices,
                    c.family.as_ref().map_or("unmatched".into(), |f| f.to_string())
                ));
            }
            lines.join("\n")
        }
    })
}

/// Enumerate with cache support; returns strata and exhaustiveness.
fn enumerate_with_cache(
    common: &CommonArgs,
    g: &CoxeterGraph,
    max_len: usize,
) -> (Vec<Vec<FcElement>>, bool) {
    let dir = cache_dir(common);
    if let Some(dir) = &dir {
        if let Some(cache) = CacheFile::load(dir, g) {
            if let Some(hit) = cache.fc_elements(max_len) {
                return hit;
            }
        }
    }
    let (strata, exhaustive) = enumerate_fc_strata_jobs(g, max_len, common.jobs);
    if let Some(dir) = &dir {
        let mut cache = CacheFile::load(dir, g).unwrap_or_else(|| CacheFile::new(g));
        cache.set_fc(max_len, &strata, exhaustive);
        let _ = cache.store(dir, g);
    }
    (strata, exhaustive)
}

fn enumerate_cmd(common: &CommonArgs, max_len: usize) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let (strata, exhaustive) = enumerate_with_cache(common, &g, max_len);
    let elements: Vec<&FcElement> = strata.iter().flatten().collect();
    Ok(match common.format {
        Format::Json => pretty(&json!({
            "count": elements.len(),
            "exhaustive": exhaustive,
            "elements": elements,
        })),
        Format::Tsv => {
            let mut lines = vec![format!("count\t{}\texhaustive\t{exhaustive}", elements.len())];
            for w in elements {
                lines.push(format!(
                    "{}\t{}",
                    w.len(),
                    serde_json::to_string(w.trace()).unwrap()
                ));
            }
            lines.join("\n")
        }
    })
}

fn fc_from_word(g: &CoxeterGraph, word: &[usize]) -> Result<FcElement, Failure> {
    FcElement::from_word(g, word).map_err(|e| Failure::domain(e.to_string()))
}

fn star_reduce_cmd(common: &CommonArgs, raw: &str) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let word = parse_word(&g, raw)?;
    let w = fc_from_word(&g, &word)?;
    let path = star_reduce_path(&g, &w);
    let value = match &path {
        None => json!({ "word": word, "irreducible": true, "path": null }),
        Some(steps) => {
            let steps: Vec<serde_json::Value> = steps
                .iter()
                .map(|s| {
                    json!({
                        "pair": [s.pair.0, s.pair.1],
                        "side": side_tag(s.side),
                        "result": s.result.trace(),
                    })
                })
                .collect();
            json!({ "word": word, "irreducible": false, "path": steps })
        }
    };
    Ok(match common.format {
        Format::Json => pretty(&value),
        Format::Tsv => match &path {
            None => "irreducible".to_string(),
            Some(steps) => steps
                .iter()
                .map(|s| {
                    format!(
                        "{}\t{}\t{}\t{}",
                        s.pair.0,
                        s.pair.1,
                        side_tag(s.side),
                        serde_json::to_string(s.result.trace()).unwrap()
                    )
                })
                .collect::<Vec<_>>()
                .join("\n"),
        },
    })
}

fn cf_cmd(common: &CommonArgs, raw: &str) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let word = parse_word(&g, raw)?;
    let trace = cartier_foata(&g, &word);
    Ok(match common.format {
        Format::Json => pretty(&json!({ "word": word, "trace": trace })),
        Format::Tsv => serde_json::to_string(&trace).unwrap(),
    })
}

fn h_cmd(common: &CommonArgs, raw: &str) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let word = parse_word(&g, raw)?;
    let outcome = h_value(&g, &word, common.seed).map_err(|e| classify_error(e.to_string()))?;
    Ok(match common.format {
        Format::Json => pretty(&json!({
            "h": outcome.h,
            "terminal": outcome.terminal,
            "log": outcome.log,
        })),
        Format::Tsv => format!(
            "h\t{}\tterminal\t{}",
            outcome.h,
            serde_json::to_string(&outcome.terminal).unwrap()
        ),
    })
}

fn reduce_cmd(common: &CommonArgs, raw: &str) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let word = parse_word(&g, raw)?;
    let ctx = TlContext::new(g);
    let reduced = ctx.reduce_b_monomial(&word);
    let as_json = serde_json::to_value(reduced.to_json()).expect("element JSON");
    Ok(match common.format {
        Format::Json => pretty(&as_json),
        Format::Tsv => reduced
            .terms()
            .map(|(w, c)| {
                format!(
                    "{}\t{}",
                    serde_json::to_string(w.trace()).unwrap(),
                    serde_json::to_string(c).unwrap()
                )
            })
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn cbasis_cmd(common: &CommonArgs, max_len: usize) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let (strata, exhaustive) = enumerate_with_cache(common, &g, max_len);
    let ctx = TlContext::new(g.clone());
    let dir = cache_dir(common);
    if let Some(dir) = &dir {
        if let Some(cache) = CacheFile::load(dir, &g) {
            cache.seed_context(&ctx);
        }
    }
    let mut rows = Vec::new();
    for w in strata.iter().flatten() {
        let c = ctx.c_of(w).map_err(|e| classify_error(e.to_string()))?;
        rows.push((w.clone(), c));
    }
    if let Some(dir) = &dir {
        let mut cache = CacheFile::load(dir, &g).unwrap_or_else(|| CacheFile::new(&g));
        cache.set_fc(max_len, &strata, exhaustive);
        cache.absorb_context(&ctx);
        let _ = cache.store(dir, &g);
    }
    Ok(match common.format {
        Format::Json => {
            let table: Vec<serde_json::Value> = rows
                .iter()
                .map(|(w, c)| {
                    json!({
                        "w": w.trace(),
                        "c": serde_json::to_value(c.to_json()).unwrap(),
                    })
                })
                .collect();
            pretty(&json!({
                "max_len": max_len,
                "exhaustive": exhaustive,
                "table": table,
            }))
        }
        Format::Tsv => {
            let mut lines = Vec::new();
            for (w, c) in &rows {
                for (y, coeff) in c.terms() {
                    lines.push(format!(
                        "{}\t{}\t{}",
                        serde_json::to_string(w.trace()).unwrap(),
                        serde_json::to_string(y.trace()).unwrap(),
                        serde_json::to_string(coeff).unwrap()
                    ));
                }
            }
            lines.join("\n")
        }
    })
}

fn positivity_cmd(common: &CommonArgs, max_len: usize) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let ctx = TlContext::new(g.clone());
    let dir = cache_dir(common);
    if let Some(dir) = &dir {
        if let Some(cache) = CacheFile::load(dir, &g) {
            cache.seed_context(&ctx);
        }
    }
    let report = ctx
        .positivity_report(max_len, common.jobs)
        .map_err(|e| classify_error(e.to_string()))?;
    if let Some(dir) = &dir {
        let mut cache = CacheFile::load(dir, &g).unwrap_or_else(|| CacheFile::new(&g));
        cache.absorb_context(&ctx);
        let _ = cache.store(dir, &g);
    }
    let output = match common.format {
        Format::Json => pretty(&json!({
            "pairs": report.pairs,
            "max_delta_power": report.max_delta_power,
            "violations": report.violations,
            "exhaustive": report.exhaustive,
        })),
        Format::Tsv => {
            let mut lines = Vec::new();
            for (x, y, w, f) in &report.table {
                lines.push(format!(
                    "{}\t{}\t{}\t{}",
                    serde_json::to_string(x.trace()).unwrap(),
                    serde_json::to_string(y.trace()).unwrap(),
                    serde_json::to_string(w.trace()).unwrap(),
                    serde_json::to_string(f).unwrap()
                ));
            }
            lines.join("\n")
        }
    };
    if report.violations.is_empty() {
        Ok(output)
    } else {
        Err(Failure::verify(format!(
            "{} positivity violations:\n{output}",
            report.violations.len()
        )))
    }
}

fn audit_cmd(common: &CommonArgs, max_len: usize) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let (strata, exhaustive) = enumerate_with_cache(common, &g, max_len);
    let reducer = StarReducer::new(std::sync::Arc::new(g.clone()));
    let witnesses: Vec<&FcElement> = strata
        .iter()
        .flatten()
        .filter(|w| reducer.reduce_path(w).is_none())
        .collect();
    let output = match common.format {
        Format::Json => pretty(&json!({
            "witness_count": witnesses.len(),
            "exhaustive": exhaustive,
            "witnesses": witnesses,
        })),
        Format::Tsv => witnesses
            .iter()
            .map(|w| serde_json::to_string(w.trace()).unwrap())
            .collect::<Vec<_>>()
            .join("\n"),
    };
    if !witnesses.is_empty() && classify_star_reducible(&g).star_reducible {
        return Err(Failure::verify(format!(
            "star reducible graph has {} irreducible witnesses:\n{output}",
            witnesses.len()
        )));
    }
    Ok(output)
}

fn counterexample_cmd(common: &CommonArgs) -> Result<String, Failure> {
    let g = load_graph(common)?;
    let word = counterexample_word(&g).map_err(|e| Failure::domain(e.to_string()))?;
    Ok(match common.format {
        Format::Json => pretty(&json!({ "word": word })),
        Format::Tsv => match word {
            Some(w) => serde_json::to_string(&w).unwrap(),
            None => "none".to_string(),
        },
    })
}
