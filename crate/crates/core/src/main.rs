use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mgame::instance::{
    gen_gap_family, gen_odd_cycle, gen_random, parse_imputation, parse_instance,
    serialize_instance, EdgeProbability,
};
use mgame::verification::{
    check_core, integrality_gap, BruteForceLimits, CheckMode, CoreCheckOptions, VerifyError,
};
use mgame::{run_mechanism, GameInstance, Money};

/// Approximate core imputations for matching games.
///
/// Exit status: 0 success, 1 verification violations, 2 usage or parse
/// error, 3 enumeration bound exceeded.
#[derive(Parser)]
#[command(name = "mgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the imputation for an instance file.
    Solve {
        instance: PathBuf,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
        /// Re-check every invariant and refuse to emit on failure.
        #[arg(long)]
        check: bool,
    },
    /// Check an imputation against the approximate core conditions.
    Verify {
        instance: PathBuf,
        imputation: PathBuf,
        #[arg(long, default_value = "2/3")]
        alpha: String,
        #[arg(long, default_value = "exhaustive")]
        mode: CheckMode,
        /// Largest vertex count for exhaustive mode.
        #[arg(long, default_value_t = 20)]
        max_n: usize,
        #[arg(long, default_value_t = 24)]
        brute_max_edges: usize,
    },
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Integral versus fractional optimum and core non-emptiness.
    Gap {
        instance: PathBuf,
        #[arg(long, default_value_t = 24)]
        brute_max_edges: usize,
    },
}

#[derive(Args)]
struct Output {
    /// Write the instance here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// 2n disjoint unit triangles.
    Gap {
        #[arg(long)]
        n: usize,
        /// Join the triangles with a clique of zero-weight edges.
        #[arg(long)]
        connected: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Odd cycle on 2k+1 vertices.
    Cycle {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        weight: u64,
        #[command(flatten)]
        out: Output,
    },
    /// Seeded random graph.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        p: EdgeProbability,
        #[arg(long, default_value_t = 10)]
        max_weight: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        bipartite: bool,
        #[command(flatten)]
        out: Output,
    },
}

enum Failure {
    Violations(String),
    Usage(String),
    Bound(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Violations(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Bound(_) => 3,
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::BoundExceeded { .. } => Failure::Bound(e.to_string()),
            VerifyError::Pipeline(_) => Failure::Violations(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<GameInstance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn print_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn solve(path: &Path, json: bool, check: bool) -> Result<(), Failure> {
    let g = load_instance(path)?;
    let result = run_mechanism(&g).map_err(|e| Failure::Violations(e.to_string()))?;
    if check {
        let problems = result.audit(&g);
        if !problems.is_empty() {
            let lines: Vec<_> = problems.iter().map(|p| p.to_string()).collect();
            return Err(Failure::Violations(lines.join("\n")));
        }
        eprintln!("all invariants hold");
    }
    if json {
        print_json(&result.report(&g));
        return Ok(());
    }
    println!(
        "{:>6}  {:>12}  {:>8}  {:>12}",
        "vertex", "cover", "factor", "imputation"
    );
    for i in 0..g.vertex_count() {
        println!(
            "{:>6}  {:>12}  {:>8}  {:>12}",
            i + 1,
            result.cover()[i].to_string(),
            result.profile.factor(i).to_string(),
            result.values[i].to_string()
        );
    }
    let pairs: Vec<_> = result
        .matching
        .iter()
        .map(|&e| {
            let (a, b) = g.edge(e).key();
            format!("{}-{}", a + 1, b + 1)
        })
        .collect();
    println!("matching T: {}", pairs.join(" "));
    println!("fractional optimum: {}", result.worth_fractional);
    println!("w(T): {}", result.matching_weight);
    println!("allocated: {}", result.allocated);
    println!("slack: {}", result.slack());
    println!("factor guarantee: {}", result.factor_guarantee);
    println!("half-integral odd cycles: {}", result.cycles.len());
    Ok(())
}

fn verify(
    instance: &Path,
    imputation: &Path,
    alpha: &str,
    opts: CoreCheckOptions,
) -> Result<(), Failure> {
    let g = load_instance(instance)?;
    let values = parse_imputation(&read(imputation)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", imputation.display())))?;
    let alpha: Money = alpha
        .parse()
        .map_err(|e: mgame::money::ParseMoneyError| Failure::Usage(e.to_string()))?;
    let report = check_core(&g, &values, &alpha, opts)?;
    print_json(&report);
    if report.passes() {
        Ok(())
    } else {
        Err(Failure::Violations(format!(
            "{} coalition violation(s); budget {}",
            report.violations.len(),
            if report.budget_ok { "ok" } else { "exceeded" }
        )))
    }
}

fn generate(family: Family) -> Result<(), Failure> {
    let usage = |e: mgame::InstanceError| Failure::Usage(e.to_string());
    let (g, out) = match family {
        Family::Gap { n, connected, out } => (gen_gap_family(n, connected).map_err(usage)?, out),
        Family::Cycle { k, weight, out } => (gen_odd_cycle(k, weight).map_err(usage)?, out),
        Family::Random {
            n,
            p,
            max_weight,
            seed,
            bipartite,
            out,
        } => (
            gen_random(n, p, max_weight, seed, bipartite).map_err(usage)?,
            out,
        ),
    };
    let text = serialize_instance(&g);
    let summary = format!(
        "{}: {} vertices, {} edges",
        g.name().unwrap_or("instance"),
        g.vertex_count(),
        g.edge_count()
    );
    match out.output {
        Some(path) => {
            fs::write(&path, text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            println!("{summary} -> {}", path.display());
        }
        None => {
            print!("{text}");
            eprintln!("{summary}");
        }
    }
    Ok(())
}

fn gap(path: &Path, brute_max_edges: usize) -> Result<(), Failure> {
    let g = load_instance(path)?;
    let report = integrality_gap(
        &g,
        BruteForceLimits {
            max_edges: brute_max_edges,
        },
    )?;
    print_json(&report);
    match report.refusal {
        Some(reason) => Err(Failure::Bound(reason)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve {
            instance,
            json,
            check,
        } => solve(&instance, json, check),
        Command::Verify {
            instance,
            imputation,
            alpha,
            mode,
            max_n,
            brute_max_edges,
        } => verify(
            &instance,
            &imputation,
            &alpha,
            CoreCheckOptions {
                mode,
                max_n,
                limits: BruteForceLimits {
                    max_edges: brute_max_edges,
                },
            },
        ),
        Command::Gen { family } => generate(family),
        Command::Gap {
            instance,
            brute_max_edges,
        } => gap(&instance, brute_max_edges),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Violations(msg) | Failure::Usage(msg) | Failure::Bound(msg) => {
                    eprintln!("mgame: {msg}")
                }
            }
            ExitCode::from(failure.code())
        }
    }
}
