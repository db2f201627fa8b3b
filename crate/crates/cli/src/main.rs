use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use circlefix::classify::classify;
use circlefix::constraints::{default_pair_weights, run_all};
use circlefix::generators::{gen_blowup, gen_cp2, gen_cp3, gen_s6, gen_s6_pair};
use circlefix::io::{parse_any, to_json, to_text};
use circlefix::multigraph::{enumerate_admissible, match_figure1};
use circlefix::oracle::{run_oracle, OracleConfig, DEFAULT_WEIGHT_CAP};
use circlefix::rewrite::{reduce_to_empty, Reduction, SearchStrategy, DEFAULT_MAX_DEPTH};
use circlefix::series::{default_order, signature_exact, signature_series};
use circlefix::{Collection, Error, FixedPointData};

/// Exit status for usage and parse errors. Principled negative answers
/// (a failed check, an unclassified input, an exhausted search) use 1.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "circlefix", version)]
#[command(about = "Check, classify and reduce fixed-point data of circle actions")]
struct Cli {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,

    /// Print nothing; report through the exit status only
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every necessary condition on the data
    Check {
        /// Input file, or `-` for stdin
        input: PathBuf,
        /// Also print the signature series through this power of t
        #[arg(long)]
        order: Option<usize>,
        /// Comma-separated weights to test for congruence pairings
        /// [default: every weight occurring in the data]
        #[arg(long, value_delimiter = ',')]
        pair_weights: Option<Vec<u64>>,
    },
    /// Match the data against the known classifications
    Classify {
        /// Input file, or `-` for stdin
        input: PathBuf,
        /// Require weights with gcd 1 in dimension four
        #[arg(long)]
        effective: bool,
    },
    /// Enumerate the signed labeled multigraphs describing the data
    Graphs {
        /// Input file, or `-` for stdin
        input: PathBuf,
        /// Write the graphs to this file in text form
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Rewrite six-dimensional data to the empty collection
    Reduce {
        /// Input file, or `-` for stdin
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
        /// Write the moves as JSON lines to this file
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        /// Explore the first search level in parallel
        #[arg(long)]
        concurrent: bool,
    },
    /// Print the data of a standard example
    Gen {
        family: Family,
        /// Positive integer parameters of the family
        #[arg(required = true)]
        params: Vec<u64>,
    },
    /// Enumerate all small data and cross-check the classifier
    Oracle {
        #[arg(long, default_value_t = 4)]
        points: usize,
        #[arg(long, default_value_t = 3)]
        arity: usize,
        #[arg(long, default_value_t = 2)]
        max_weight: u64,
        /// Largest accepted --max-weight
        #[arg(long, default_value_t = DEFAULT_WEIGHT_CAP)]
        cap: u64,
        /// Write the CSV table here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Rotation of the six-sphere: a b c
    S6,
    /// Two rotated six-spheres: a b c d e f
    S6pair,
    /// Linear action on CP^3: a b c
    Cp3,
    /// Blown-up six-sphere: a b c
    Blowup,
    /// Linear action on CP^2: a b
    Cp2,
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

struct Out {
    json: bool,
    quiet: bool,
}

impl Out {
    fn line(&self, text: impl AsRef<str>) {
        if !self.quiet && !self.json {
            println!("{}", text.as_ref());
        }
    }

    fn value(&self, value: serde_json::Value) {
        if !self.quiet && self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        }
    }
}

fn read_input(path: &Path) -> Result<FixedPointData, Failure> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(parse_any(&text)?)
}

fn status(ok: bool) -> u8 {
    if ok {
        0
    } else {
        1
    }
}

fn cmd_check(out: &Out, input: &Path, order: Option<usize>, pair_weights: Option<Vec<u64>>) -> Result<u8, Failure> {
    let data = read_input(input)?;
    let weights = pair_weights.unwrap_or_else(|| default_pair_weights(&data));
    let suite = run_all(&data, &weights);
    let exact = signature_exact(&data);
    let series = order.map(|n| signature_series(&data, n));
    for r in &suite.reports {
        out.line(r.to_string());
    }
    if let Some(s) = &series {
        let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
        out.line(format!("series through t^{}: {}", s.order(), coeffs.join(" ")));
    }
    out.line(if suite.passed { "all checks passed" } else { "some checks failed" });
    out.value(json!({
        "passed": suite.passed,
        "reports": suite.reports,
        "signature": exact,
        "default_order": default_order(&data),
        "series": series.map(|s| s.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    }));
    Ok(status(suite.passed))
}

fn cmd_classify(out: &Out, input: &Path, effective: bool) -> Result<u8, Failure> {
    let data = read_input(input)?;
    let c = classify(&data, effective)?;
    for v in &c.matches {
        out.line(v.to_string());
        if let circlefix::Verdict::FourDimReachable { trace, .. } = v {
            for step in trace {
                out.line(format!("  {step}"));
            }
        }
        if let circlefix::Verdict::NotInClassification { failed_checks, .. } = v {
            for r in failed_checks {
                out.line(format!("  {r}"));
            }
        }
    }
    out.value(serde_json::to_value(&c).expect("json"));
    Ok(status(c.is_classified()))
}

fn cmd_graphs(out: &Out, input: &Path, emit: Option<PathBuf>) -> Result<u8, Failure> {
    let data = read_input(input)?;
    let graphs = match enumerate_admissible(&data) {
        Ok(g) => g,
        Err(e @ Error::NoMatching { .. }) => {
            out.line(e.to_string());
            out.value(json!({ "error": e.to_string(), "graphs": [] }));
            return Ok(1);
        }
        Err(e) => return Err(e.into()),
    };
    let shape = data.len() == 4 && data.arity() == Some(3);
    let mut rows = Vec::new();
    let mut text = String::new();
    for (i, g) in graphs.iter().enumerate() {
        let case = if shape { match_figure1(g)? } else { None };
        let tag = case.as_ref().map(|c| c.tag.to_string());
        out.line(format!("{i}: {g}  [{}]", tag.as_deref().unwrap_or("-")));
        text.push_str(&format!("# graph {i}\n{}\n", g.to_text()));
        rows.push(json!({ "graph": g, "figure1": case }));
    }
    out.line(format!("{} graphs", graphs.len()));
    out.value(json!({ "count": graphs.len(), "graphs": rows }));
    if let Some(path) = emit {
        fs::write(path, text)?;
    }
    Ok(0)
}

fn cmd_reduce(
    out: &Out,
    input: &Path,
    max_depth: usize,
    emit_trace: Option<PathBuf>,
    concurrent: bool,
) -> Result<u8, Failure> {
    let data = read_input(input)?;
    let strategy = if concurrent {
        SearchStrategy::Concurrent
    } else {
        SearchStrategy::Sequential
    };
    let reduction = reduce_to_empty(&Collection::from_data(&data), max_depth, strategy)?;
    match &reduction {
        Reduction::Reduced(trace) => {
            for (i, mv) in trace.moves.iter().enumerate() {
                out.line(format!("{}. {mv}", i + 1));
            }
            out.line(format!("reduced to the empty collection in {} moves", trace.moves.len()));
            if let Some(path) = emit_trace {
                fs::write(path, trace.to_json_lines())?;
            }
        }
        Reduction::Failed(f) => out.line(format!("no reduction: {f}")),
    }
    out.value(serde_json::to_value(&reduction).expect("json"));
    Ok(status(reduction.trace().is_some()))
}

fn cmd_gen(out: &Out, family: Family, p: &[u64]) -> Result<u8, Failure> {
    let want = match family {
        Family::S6 | Family::Cp3 | Family::Blowup => 3,
        Family::S6pair => 6,
        Family::Cp2 => 2,
    };
    if p.len() != want {
        return Err(Failure::Usage(format!("expected {want} parameters, got {}", p.len())));
    }
    let data = match family {
        Family::S6 => gen_s6(p[0], p[1], p[2]),
        Family::S6pair => gen_s6_pair(p[0], p[1], p[2], p[3], p[4], p[5]),
        Family::Cp3 => gen_cp3(p[0], p[1], p[2]),
        Family::Blowup => gen_blowup(p[0], p[1], p[2]),
        Family::Cp2 => gen_cp2(p[0], p[1]),
    }?;
    if !out.quiet {
        if out.json {
            println!("{}", to_json(&data));
        } else {
            print!("{}", to_text(&data));
        }
    }
    Ok(0)
}

fn cmd_oracle(out: &Out, config: OracleConfig, output: Option<PathBuf>) -> Result<u8, Failure> {
    let report = run_oracle(&config)?;
    let s = &report.summary;
    if out.json {
        out.value(serde_json::to_value(&report).expect("json"));
    } else if !out.quiet {
        let sink: Box<dyn Write> = match &output {
            Some(path) => Box::new(fs::File::create(path)?),
            None => Box::new(io::stdout().lock()),
        };
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(["data", "checks_passed", "figure1_tags", "classification"])
            .map_err(csv_error)?;
        for r in &report.rows {
            let tags: Vec<String> = r.figure1_tags.iter().map(|t| t.to_string()).collect();
            w.write_record([
                r.data.as_str(),
                if r.checks_passed { "true" } else { "false" },
                tags.join("").as_str(),
                r.classification.as_str(),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        eprintln!(
            "{} candidates, {} pass all checks, {} survivors, {} unclassified survivors",
            s.candidates, s.passed_checks, s.survivors, s.unclassified_survivors
        );
    }
    Ok(status(s.unclassified_survivors == 0))
}

fn csv_error(e: csv::Error) -> Failure {
    Failure::Io(io::Error::other(e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = Out {
        json: cli.json,
        quiet: cli.quiet,
    };
    let result = match cli.command {
        Command::Check {
            input,
            order,
            pair_weights,
        } => cmd_check(&out, &input, order, pair_weights),
        Command::Classify { input, effective } => cmd_classify(&out, &input, effective),
        Command::Graphs { input, emit } => cmd_graphs(&out, &input, emit),
        Command::Reduce {
            input,
            max_depth,
            emit_trace,
            concurrent,
        } => cmd_reduce(&out, &input, max_depth, emit_trace, concurrent),
        Command::Gen { family, params } => cmd_gen(&out, family, &params),
        Command::Oracle {
            points,
            arity,
            max_weight,
            cap,
            output,
        } => cmd_oracle(
            &out,
            OracleConfig {
                points,
                arity,
                max_weight,
                weight_cap: cap,
            },
            output,
        ),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
