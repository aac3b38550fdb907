//! `sumfree`: command-line front end for the sum-free and link-graph tools.

mod output;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sumfree_core::caps::caps_report;
use sumfree_core::constructions::{
    check_pairs, cyclic_construction, distinct_construction, generated_count, leading_term, product_lower_bound,
    type3_construction, verify_prop34, z2_type3_pairs, z3_type3_pairs,
};
use sumfree_core::loopgraph::{distinct_link_graph, link_graph, summarize, LoopGraph};
use sumfree_core::mis::{count_mis_with, fixture};
use sumfree_core::sumfree::{
    count, enumerate_maximal, mu_bruteforce, mu_formula_report, Quantity, SearchConfig, Variant,
    DEFAULT_ENUMERATION_GUARD,
};
use sumfree_core::verify::{
    verify_extension_lemma, verify_fmax_decomposition, verify_overcount, verify_structure_z2, verify_structure_z3,
    verify_z2_link_claims, verify_z3_degree_bounds, verify_z3_pairs, verify_z3_two_element, VerificationOutcome,
};
use sumfree_core::{Budget, Error, GroupSpec};

use output::{emit, stamp, Format};

#[derive(Parser, Debug)]
#[command(
    name = "sumfree",
    version,
    about = "Exact counts of maximal sum-free sets and link-graph tools"
)]
struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker count; results do not depend on it.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    /// Seed for randomized checks, recorded in every report.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[arg(long, env = "SUMFREE_MAX_NODES", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_nodes: Option<u64>,
    #[arg(long, env = "SUMFREE_MAX_SECONDS", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_seconds: Option<u64>,
    /// Include wall-clock timings (output is then no longer byte-stable).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type I(p), II or III of a group.
    Classify {
        #[arg(long)]
        group: String,
    },
    /// Largest sum-free set size, by formula and by search.
    Mu {
        #[arg(long)]
        group: String,
    },
    /// Exact count of a quantity: f, fmax, fstar, fstar_max, mu, mu_star.
    Count {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "fmax")]
        what: String,
    },
    /// Lists maximal (distinct) sum-free sets.
    Enumerate {
        #[arg(long)]
        group: String,
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Link graph of S on B.
    Linkgraph {
        #[arg(long)]
        group: String,
        #[arg(long, value_delimiter = ',')]
        b: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long)]
        distinct: bool,
        /// Graphviz output instead of the adjacency listing.
        #[arg(long)]
        dot: bool,
    },
    /// Counts maximal independent sets of a named or file graph.
    Mis {
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        fixture: Option<String>,
        /// Adjacency-list file.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Runs one of the constructions.
    Construct {
        #[arg(long, value_enum)]
        family: ConstructFamily,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Second factor for `product-bound`.
        #[arg(long)]
        lift: Option<String>,
    },
    /// Exhaustive structure checks; one JSON line per check.
    Verify {
        /// Only checks whose name starts with this.
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        list: bool,
        /// Run the extension-lemma check on this group instead.
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Complete caps of PG(k, 2) against maximal sum-free sets of Z2^{k+1}.
    Caps {
        #[arg(long)]
        k: usize,
    },
    /// Runs the acceptance criteria and prints a summary.
    Report {
        /// Smaller instances of the slowest criteria.
        #[arg(long)]
        quick: bool,
        /// Only these criteria (comma-separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstructFamily {
    Z2Type3,
    Z3Type3,
    CyclicInterval,
    ProductBound,
    PropArith,
    Type3Coset,
    Distinct,
    LeadingTerm,
}

/// Why a command failed, mapped to the exit code.
enum Failure {
    Lib(Error),
    Usage(String),
    Check,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<(), Failure>;

struct Ctx {
    format: Format,
    seed: u64,
    timings: bool,
    budget: Budget,
}

impl Ctx {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            budget: self.budget,
            max_order: DEFAULT_ENUMERATION_GUARD,
        }
    }

    fn emit(&self, v: Value, text: Option<String>) -> Outcome {
        let v = stamp(v, self.seed);
        emit(&mut io::stdout().lock(), self.format, &v, text)?;
        Ok(())
    }
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn group(s: &str) -> Result<GroupSpec, Failure> {
    Ok(GroupSpec::parse(s)?)
}

fn need<T>(v: Option<T>, flag: &str, family: ConstructFamily) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for {family:?}")))
}

fn run(cli: Cli) -> Outcome {
    let defaults = Budget::default();
    let ctx = Ctx {
        format: cli.format,
        seed: cli.seed,
        timings: cli.timings,
        budget: Budget::new(
            cli.max_nodes.unwrap_or(defaults.max_nodes),
            cli.max_seconds.unwrap_or(defaults.max_time.as_secs()),
        ),
    };
    match cli.command {
        Command::Classify { group: g } => {
            let g = group(&g)?;
            let t = g.classify();
            let v = json!({
                "group": g.label(),
                "orders": g.orders(),
                "order": g.order(),
                "exponent": g.exponent(),
                "type": t.to_string(),
                "mu": g.mu_formula()?,
            });
            ctx.emit(v, Some(t.to_string()))
        }
        Command::Mu { group: g } => {
            let g = group(&g)?;
            let formula = mu_formula_report(&g)?;
            let brute = mu_bruteforce(&g)?;
            let agree = formula.value == brute.value;
            let mut v = json!({
                "group": g.label(),
                "type": g.classify().to_string(),
                "formula": formula.value.to_string(),
                "bruteforce": brute.value.to_string(),
                "agree": agree,
            });
            if ctx.timings {
                v["elapsed_ms"] = to_value(&brute)["elapsed_ms"].clone();
            }
            ctx.emit(v, Some(formula.value.to_string()))?;
            if agree {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Count { group: g, what } => {
            let g = group(&g)?;
            let q = Quantity::parse(&what).ok_or_else(|| Failure::Usage(format!("unknown quantity '{what}'")))?;
            let r = count(&g, q, &ctx.config())?;
            let r = if ctx.timings { r } else { r.without_timing() };
            let text = r.value.to_string();
            ctx.emit(to_value(&r), Some(text))
        }
        Command::Enumerate {
            group: g,
            distinct,
            limit,
        } => {
            let g = group(&g)?;
            let variant = if distinct {
                Variant::DistinctSumFree
            } else {
                Variant::SumFree
            };
            let sets = enumerate_maximal(&g, variant, &ctx.config())?;
            let total = sets.len();
            let shown = &sets[..limit.unwrap_or(total).min(total)];
            match ctx.format {
                Format::Text => {
                    let mut out = io::stdout().lock();
                    for s in shown {
                        writeln!(out, "{}", s.to_line())?;
                    }
                    Ok(())
                }
                Format::Csv => {
                    let rows: Vec<Value> = shown.iter().map(|s| json!({"set": s.to_line()})).collect();
                    ctx.emit(Value::Array(rows), None)
                }
                Format::Json => ctx.emit(
                    json!({
                        "group": g.label(),
                        "variant": if distinct { "distinct" } else { "sumfree" },
                        "count": total.to_string(),
                        "sets": shown.iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
                    }),
                    None,
                ),
            }
        }
        Command::Linkgraph {
            group: g,
            b,
            s,
            distinct,
            dot,
        } => {
            let g = group(&g)?;
            let b = g.set(&b)?;
            let s = g.set(&s)?;
            let lg = if distinct {
                distinct_link_graph(&g, &s, &b)?
            } else {
                link_graph(&g, &s, &b)?
            };
            if dot {
                write!(io::stdout().lock(), "{}", lg.to_dot())?;
                return Ok(());
            }
            let v = json!({
                "group": g.label(),
                "b": b.to_vec(),
                "s": s.to_vec(),
                "vertices": lg.vertex_count(),
                "edges": lg.edge_count(),
                "loops": lg.loop_count(),
                "components": to_value(&summarize(&lg)),
                "adjacency": lg.to_adjacency_text(),
            });
            ctx.emit(v, Some(lg.to_adjacency_text().trim_end().to_string()))
        }
        Command::Mis { fixture: name, graph } => {
            let gr = match (name, graph) {
                (Some(name), _) => fixture(&name).ok_or_else(|| Failure::Usage(format!("unknown fixture '{name}'")))?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    LoopGraph::parse_adjacency_text(&text)?
                }
                (None, None) => unreachable!("clap requires one of --fixture, --graph"),
            };
            let r = count_mis_with(&gr, &ctx.budget)?;
            let text = r.count.to_string();
            ctx.emit(to_value(&r), Some(text))
        }
        Command::Construct {
            family,
            group: g,
            k,
            m,
            n,
            lift,
        } => construct(&ctx, family, g, k, m, n, lift),
        Command::Verify {
            check,
            list,
            group: g,
            trials,
        } => verify(&ctx, check, list, g, trials),
        Command::Caps { k } => {
            let r = caps_report(k)?;
            let ok = r.agree && r.bijection;
            let text = format!("{} complete caps (via sum-free sets: {})", r.geometric, r.via_sumfree);
            ctx.emit(to_value(&r), Some(text))?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
        Command::Report { quick, only } => {
            let (rows, all) = report::run(ctx.seed, quick, &only, ctx.timings);
            let text = report::table(&rows);
            ctx.emit(Value::Array(rows), Some(text))?;
            if all {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn construct(
    ctx: &Ctx,
    family: ConstructFamily,
    g: Option<String>,
    k: Option<usize>,
    m: Option<usize>,
    n: Option<usize>,
    lift: Option<String>,
) -> Outcome {
    use ConstructFamily::*;
    let (v, ok) = match family {
        Z2Type3 | Z3Type3 => {
            let k = need(k, "k", family)?;
            let (g, pairs) = if family == Z2Type3 {
                z2_type3_pairs(k)?
            } else {
                z3_type3_pairs(k)?
            };
            let check = check_pairs(&g, &pairs)?;
            let ok = check.mismatches.is_empty();
            let mut v = json!({"group": g.label(), "pairs": to_value(&check)});
            if g.order() <= 32 {
                let usable: Vec<_> = if family == Z3Type3 {
                    pairs.into_iter().filter(|p| p.s_in_subgroup).collect()
                } else {
                    pairs
                };
                v["generated"] = to_value(&generated_count(&g, &usable)?);
            }
            (v, ok)
        }
        CyclicInterval => {
            let r = cyclic_construction(need(m, "m", family)?)?;
            let ok = r.closed_form_match != Some(false);
            (to_value(&r), ok)
        }
        ProductBound => {
            let k = lift.as_deref().map(group).transpose()?;
            let r = product_lower_bound(need(m, "m", family)?, k.as_ref())?;
            let ok = r.holds != Some(false);
            (to_value(&r), ok)
        }
        PropArith => {
            let r = verify_prop34(need(m, "m", family)?, need(n, "n", family)?)?;
            (to_value(&r), true)
        }
        Type3Coset => {
            let r = type3_construction(&group(&need(g, "group", family)?)?)?;
            let ok = r.matches;
            (to_value(&r), ok)
        }
        Distinct => {
            let r = distinct_construction(&group(&need(g, "group", family)?)?)?;
            let ok = r.matches;
            (to_value(&r), ok)
        }
        LeadingTerm => {
            let g = group(&need(g, "group", family)?)?;
            let t = leading_term(&g)?;
            (json!({"group": g.label(), "leading_term": t.to_display_string()}), true)
        }
    };
    ctx.emit(v, None)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

type CheckFn = Box<dyn Fn(&Budget) -> sumfree_core::Result<Vec<VerificationOutcome>>>;

fn registry(seed: u64, trials: usize) -> Vec<(String, CheckFn)> {
    fn one(o: sumfree_core::Result<VerificationOutcome>) -> sumfree_core::Result<Vec<VerificationOutcome>> {
        o.map(|o| vec![o])
    }
    let parse = |s: &str| GroupSpec::parse(s).expect("registry groups parse");
    let mut r: Vec<(String, CheckFn)> = vec![
        (
            "structure-z2-k4".into(),
            Box::new(|b: &Budget| one(verify_structure_z2(4, b))),
        ),
        (
            "structure-z2-k5".into(),
            Box::new(|b: &Budget| one(verify_structure_z2(5, b))),
        ),
        (
            "structure-z3-k3".into(),
            Box::new(|b: &Budget| one(verify_structure_z3(3, b))),
        ),
    ];
    for g in ["Z7", "Z2^3", "Z2^4"] {
        let gs = parse(g);
        r.push((
            format!("extension-lemma-{}", gs.label()),
            Box::new(move |_: &Budget| one(verify_extension_lemma(&gs, trials, seed))),
        ));
    }
    for k in [3, 4] {
        r.push((
            format!("z2-link-k{k}"),
            Box::new(move |_: &Budget| verify_z2_link_claims(k)),
        ));
    }
    r.push((
        "z3-degrees-k2".into(),
        Box::new(|_: &Budget| one(verify_z3_degree_bounds(2))),
    ));
    for k in [2, 3] {
        r.push((
            format!("z3-two-element-k{k}"),
            Box::new(move |_: &Budget| one(verify_z3_two_element(k))),
        ));
    }
    r.push(("z3-pairs-k2".into(), Box::new(|_: &Budget| one(verify_z3_pairs(2)))));
    for g in ["Z2^2", "Z2^3", "Z2^4", "Z3^2"] {
        let gs = parse(g);
        r.push((
            format!("fmax-decomposition-{}", gs.label()),
            Box::new(move |_: &Budget| one(verify_fmax_decomposition(&gs))),
        ));
    }
    for g in ["Z2^3", "Z2^4", "Z3^2"] {
        let gs = parse(g);
        r.push((
            format!("overcount-{}", gs.label()),
            Box::new(move |_: &Budget| one(verify_overcount(&gs))),
        ));
    }
    r
}

fn verify(ctx: &Ctx, check: Option<String>, list: bool, g: Option<String>, trials: usize) -> Outcome {
    if let Some(g) = g {
        let o = verify_extension_lemma(&group(&g)?, trials, ctx.seed)?;
        return emit_outcomes(ctx, vec![o]);
    }
    let checks: Vec<_> = registry(ctx.seed, trials)
        .into_iter()
        .filter(|(name, _)| check.as_deref().is_none_or(|c| name.starts_with(c)))
        .collect();
    if checks.is_empty() {
        return Err(Failure::Usage(format!(
            "no check matches '{}'",
            check.unwrap_or_default()
        )));
    }
    if list {
        let mut out = io::stdout().lock();
        for (name, _) in &checks {
            writeln!(out, "{name}")?;
        }
        return Ok(());
    }
    let mut all = true;
    for (_, f) in checks {
        let outcomes = f(&ctx.budget)?;
        all &= outcomes.iter().all(|o| o.passed);
        emit_outcomes(ctx, outcomes).or_else(|e| match e {
            Failure::Check => Ok(()),
            e => Err(e),
        })?;
    }
    if all {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn emit_outcomes(ctx: &Ctx, outcomes: Vec<VerificationOutcome>) -> Outcome {
    let passed = outcomes.iter().all(|o| o.passed);
    for o in outcomes {
        let mut v = to_value(&o);
        if ctx.timings {
            v["elapsed_ms"] = json!(o.elapsed.as_secs_f64() * 1e3);
        }
        let text = format!(
            "{} {} ({} scanned, {} violations)",
            if o.passed { "ok  " } else { "FAIL" },
            o.check,
            o.scanned,
            o.violations
        );
        ctx.emit(v, Some(text))?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } | Error::TooLarge { .. } => 3,
                Error::Internal(_) => 1,
                _ => 2,
            })
        }
    }
}
