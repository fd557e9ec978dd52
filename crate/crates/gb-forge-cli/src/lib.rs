//! Command-line front end. The binary is a thin wrapper around [`run`] so
//! integration tests and other tools can drive the interface in-process.
//! Stdout always carries machine-parseable JSON unless `--pretty` asks for
//! human-readable tables; diagnostics go to stderr.

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gb_forge::cayley::{export_dot, is_connected, is_three_connected, torus_graph, CayleyGraph};
use gb_forge::classify::{classify, emit, ClassifyOptions, TableFormat};
use gb_forge::code::{
    fam_even, fam_kp, fam_odd, fam_square, gb_dimension, parse_code_literal, CodeParams, GbCode,
};
use gb_forge::distance::{min_distance, SearchOptions, SearchStatus};
use gb_forge::equivalence::{canonical_triple, cgp_equivalent, EquivVerdict, Triple};
use gb_forge::lattice::theorem1_bound;

#[derive(Parser)]
#[command(name = "gb-forge", version, about = "Circulant-pair CSS codes: construction, \
distance certification, graph equivalence, and classification")]
struct Cli {
    /// Render human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block length and dimension of a code literal like "GB(0,1;0,3;9)".
    Params { code: String },
    /// Certified minimum distance of a code.
    Distance {
        /// Code literal like "GB(0,1;0,3;9)".
        #[arg(required_unless_present = "triple", conflicts_with = "triple")]
        code: Option<String>,
        /// Two-term shorthand a,b,n for GB(1+X^a, 1+X^b, n).
        #[arg(long)]
        triple: Option<String>,
        /// Hard cap on the searched cycle length.
        #[arg(long)]
        w_max: Option<usize>,
        /// Node budget before degrading to certified bounds.
        #[arg(long)]
        budget: Option<u64>,
        /// Worker threads for the search fan-out.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Lattice lower bound on the distance of a two-term code.
    Bound {
        #[arg(long)]
        triple: String,
    },
    /// Build one family member and check it against its claimed parameters.
    Family {
        family: FamilyName,
        /// Family parameter (n, r, or t).
        #[arg(long)]
        param: usize,
    },
    /// Export a graph as Graphviz dot or JSON.
    Graph {
        format: GraphFormat,
        #[command(flatten)]
        spec: GraphSpecArgs,
    },
    /// Equivalence verdict between two graph specs, each either "a,b,n" or
    /// "torus((x1,y1),(x2,y2))".
    Iso { first: String, second: String },
    /// Connectivity of a graph; --three tests 3-connectivity.
    Connectivity {
        #[command(flatten)]
        spec: GraphSpecArgs,
        #[arg(long)]
        three: bool,
    },
    /// Canonical representative of a parameter triple.
    Canon {
        #[arg(long)]
        triple: String,
    },
    /// Classify all two-term codes up to a circulant size.
    Classify {
        #[arg(long, default_value_t = 50)]
        n_max: usize,
        /// Cover the whole block-length range below 200 (n_max = 99).
        #[arg(long)]
        full: bool,
        /// JSON-lines record cache (falls back to env GB_FORGE_CACHE).
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Write the table to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Table format: csv, json, or md.
        #[arg(long, default_value = "json")]
        format: String,
        /// Worker threads.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Recompute the three published families and report pass/fail rows.
    VerifyFamilies {
        #[arg(long, default_value_t = 3)]
        max: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyName {
    Square,
    Even,
    Odd,
    Kp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct GraphSpecArgs {
    /// Circulant size of a cyclic Cayley graph.
    #[arg(long, requires = "a", requires = "b")]
    n: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    /// Two torus basis vectors "x,y" (quotient of the square lattice).
    #[arg(long, num_args = 2, value_name = "X,Y", allow_hyphen_values = true,
          conflicts_with_all = ["n", "a", "b"])]
    torus: Option<Vec<String>>,
}

impl GraphSpecArgs {
    fn build(&self) -> anyhow::Result<CayleyGraph> {
        if let Some(vectors) = &self.torus {
            let v1 = parse_vector(&vectors[0])?;
            let v2 = parse_vector(&vectors[1])?;
            return Ok(torus_graph(v1, v2)?);
        }
        match (self.n, self.a, self.b) {
            (Some(n), Some(a), Some(b)) => Ok(gb_forge::cayley::cayley_cyclic(n, a, b)?),
            _ => bail!("provide either --n/--a/--b or --torus V1 V2"),
        }
    }
}

fn parse_vector(s: &str) -> anyhow::Result<(i64, i64)> {
    let (x, y) = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split_once(',')
        .ok_or_else(|| anyhow!("expected x,y but got {s:?}"))?;
    Ok((x.trim().parse()?, y.trim().parse()?))
}

/// A graph given either as a triple "a,b,n" or as "torus((x,y),(x,y))".
fn parse_graph_spec(s: &str) -> anyhow::Result<CayleyGraph> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("torus") {
        let inner = rest
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| anyhow!("expected torus((x,y),(x,y)) but got {s:?}"))?;
        let parts: Vec<&str> = inner
            .split("),")
            .map(|p| p.trim().trim_start_matches('(').trim_end_matches(')'))
            .collect();
        if parts.len() != 2 {
            bail!("expected two torus basis vectors in {s:?}");
        }
        let v1 = parse_vector(parts[0])?;
        let v2 = parse_vector(parts[1])?;
        return Ok(torus_graph(v1, v2)?);
    }
    Ok(Triple::from_str(t)?.graph()?)
}

/// Parse `argv` (without the program name) and execute one subcommand.
/// Returns the process exit code: 0 on success, 1 on domain errors,
/// 2 on usage errors.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let args = std::iter::once("gb-forge".to_string()).chain(argv);
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": format!("{e:#}") }));
            1
        }
    }
}

fn search_options(
    w_max: Option<usize>,
    budget: Option<u64>,
    threads: Option<usize>,
) -> SearchOptions {
    let mut opts = SearchOptions::default();
    opts.w_max = w_max;
    if let Some(b) = budget {
        opts.node_budget = b;
    }
    opts.threads = threads;
    opts
}

fn code_from(code: &Option<String>, triple: &Option<String>) -> anyhow::Result<GbCode> {
    match (code, triple) {
        (Some(literal), None) => Ok(parse_code_literal(literal)?),
        (None, Some(t)) => Ok(Triple::from_str(t)?.code()?),
        _ => bail!("provide exactly one of a code literal or --triple"),
    }
}

#[derive(Serialize)]
struct FamilyReport {
    family: String,
    param: usize,
    #[serde(rename = "N")]
    block_length: usize,
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    status: SearchStatus,
    claimed_d: usize,
    pass: bool,
}

fn family_report(name: &str, param: usize, code: &GbCode, claimed: &CodeParams) -> anyhow::Result<FamilyReport> {
    let result = min_distance(code, &SearchOptions::default())?;
    let claimed_d = claimed.distance.expect("family constructors claim a distance");
    let pass = result.block_length == claimed.block_length
        && result.k == claimed.dimension
        && result.status == SearchStatus::Exact
        && result.d == Some(claimed_d);
    Ok(FamilyReport {
        family: name.to_string(),
        param,
        block_length: result.block_length,
        k: result.k,
        d: result.d,
        status: result.status,
        claimed_d,
        pass,
    })
}

fn verify_rows(max: usize) -> anyhow::Result<Vec<FamilyReport>> {
    let mut rows = Vec::new();
    for n in 2..=max {
        let (code, claimed) = fam_square(n)?;
        rows.push(family_report("square", n, &code, &claimed)?);
    }
    for r in 1..=max {
        let (code, claimed) = fam_even(r)?;
        rows.push(family_report("even", r, &code, &claimed)?);
    }
    for t in 1..max {
        let (code, claimed) = fam_odd(t)?;
        rows.push(family_report("odd", t, &code, &claimed)?);
    }
    Ok(rows)
}

fn dispatch(cli: &Cli) -> anyhow::Result<i32> {
    match &cli.command {
        Command::Params { code } => {
            let code = parse_code_literal(code)?;
            if cli.pretty {
                println!("N = {}", code.block_length());
                println!("k = {}", gb_dimension(&code));
            } else {
                println!(
                    "{}",
                    serde_json::json!({ "N": code.block_length(), "k": gb_dimension(&code) })
                );
            }
            Ok(0)
        }
        Command::Distance { code, triple, w_max, budget, threads } => {
            let code = code_from(code, triple)?;
            let result = min_distance(&code, &search_options(*w_max, *budget, *threads))?;
            if cli.pretty {
                println!("code        {code}");
                println!("[[N, k, d]] [[{}, {}, {}]]", result.block_length, result.k,
                    result.d.map_or("?".to_string(), |d| d.to_string()));
                println!("status      {:?}", result.status);
                println!("bounds      [{}, {}]", result.lower,
                    result.upper.map_or("?".to_string(), |u| u.to_string()));
                if let Some(support) = &result.certificate_support {
                    println!("certificate {support:?}");
                }
                println!("nodes       {}", result.nodes);
            } else {
                println!("{}", serde_json::to_string(&result)?);
            }
            Ok(0)
        }
        Command::Bound { triple } => {
            let code = Triple::from_str(triple)?.code()?;
            let bound = theorem1_bound(&code).ok_or_else(|| {
                anyhow!("the lattice bound needs an exponent coprime to n in {triple}")
            })?;
            if cli.pretty {
                println!("lambda = {bound}");
            } else {
                println!("{bound}");
            }
            Ok(0)
        }
        Command::Family { family, param } => {
            let (name, built) = match family {
                FamilyName::Square => ("square", fam_square(*param)?),
                FamilyName::Even => ("even", fam_even(*param)?),
                FamilyName::Odd => ("odd", fam_odd(*param)?),
                FamilyName::Kp => ("kp", fam_kp(*param)?),
            };
            let report = family_report(name, *param, &built.0, &built.1)?;
            if cli.pretty {
                println!(
                    "[[{}, {}, {}]] {name}({param}) {}",
                    report.block_length,
                    report.k,
                    report.d.map_or("?".to_string(), |d| d.to_string()),
                    if report.pass { "PASS" } else { "FAIL" }
                );
            } else {
                println!("{}", serde_json::to_string(&report)?);
            }
            Ok(if report.pass { 0 } else { 1 })
        }
        Command::Graph { format, spec } => {
            let graph = spec.build()?;
            match format {
                GraphFormat::Dot => print!("{}", export_dot(&graph)),
                GraphFormat::Json => {
                    if cli.pretty {
                        println!("{}", serde_json::to_string_pretty(&graph.to_json())?);
                    } else {
                        println!("{}", graph.to_json());
                    }
                }
            }
            Ok(0)
        }
        Command::Iso { first, second } => {
            let g1 = parse_graph_spec(first)?;
            let g2 = parse_graph_spec(second)?;
            let verdict = cgp_equivalent(&g1, &g2)?;
            if cli.pretty {
                match &verdict {
                    EquivVerdict::Equivalent { .. } => println!("equivalent"),
                    EquivVerdict::Distinct { reason, whitney_certified, .. } => println!(
                        "distinct ({reason:?}, whitney_certified = {whitney_certified})"
                    ),
                    EquivVerdict::Unknown { detail } => println!("unknown: {detail}"),
                }
            } else {
                println!("{}", serde_json::to_string(&verdict)?);
            }
            Ok(0)
        }
        Command::Connectivity { spec, three } => {
            let graph = spec.build()?;
            let answer = if *three {
                is_three_connected(&graph)?
            } else {
                is_connected(&graph)
            };
            println!("{answer}");
            Ok(0)
        }
        Command::Canon { triple } => {
            let canonical = canonical_triple(Triple::from_str(triple)?);
            if cli.pretty {
                println!("{canonical}");
            } else {
                println!("{}", serde_json::to_string(&canonical.to_string())?);
            }
            Ok(0)
        }
        Command::Classify { n_max, full, cache, out, format, jobs } => {
            let n_max = if *full { 99 } else { *n_max };
            let cache_path = cache
                .clone()
                .or_else(|| std::env::var_os("GB_FORGE_CACHE").map(PathBuf::from));
            let opts = ClassifyOptions {
                cache_path,
                jobs: *jobs,
                search: SearchOptions::default(),
            };
            let table = classify(n_max, &opts)?;
            let format = if cli.pretty && format == "json" {
                TableFormat::Markdown
            } else {
                TableFormat::from_str(format)?
            };
            let text = emit(&table, format);
            match out {
                Some(path) => std::fs::write(path, text)
                    .with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::VerifyFamilies { max } => {
            let rows = verify_rows(*max)?;
            let all_pass = rows.iter().all(|r| r.pass);
            if cli.pretty {
                for r in &rows {
                    println!(
                        "[[{}, {}, {}]] {}({}) {}",
                        r.block_length,
                        r.k,
                        r.d.map_or("?".to_string(), |d| d.to_string()),
                        r.family,
                        r.param,
                        if r.pass { "PASS" } else { "FAIL" }
                    );
                }
            } else {
                println!("{}", serde_json::to_string(&rows)?);
            }
            Ok(if all_pass { 0 } else { 1 })
        }
    }
}
