//! Command-line front end: algebra management, ad-hoc computations and the
//! verification suites.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use cyclovertex::coinv::{swap_reduce, TensorMono, TensorState};
use cyclovertex::config::{load_algebra, state_to_json, tensor_to_json, ReduceConfig};
use cyclovertex::fields::ope_table;
use cyclovertex::parse::{parse_loop_elem, parse_state, parse_vla_elem};
use cyclovertex::quasi::yw_apply;
use cyclovertex::suites::{run_suite, SuiteOptions, SUITE_NAMES};
use cyclovertex::verma::ModuleKind;
use cyclovertex::vla::{VlaPresentation, PRESET_NAMES};
use cyclovertex::{LoopElem, RatFun};

#[derive(Parser)]
#[command(
    name = "cyclovertex",
    about = "Exact engine for vertex Lie algebras and cyclotomic coinvariants",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    /// Preset name (affine_sl2, heisenberg_sl2, virasoro) or a config file.
    algebra: String,
    /// Group order T; defaults to CYCLOVERTEX_DEFAULT_T or 1.
    #[arg(long = "T")]
    t: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// List, show or validate algebra presentations.
    Algebra {
        #[command(subcommand)]
        action: AlgebraAction,
    },
    /// n-th product of two algebra elements.
    Nthprod {
        #[command(flatten)]
        alg: AlgebraArgs,
        x: String,
        y: String,
        n: i64,
    },
    /// Lie bracket of two mode elements.
    Bracket {
        #[command(flatten)]
        alg: AlgebraArgs,
        x: String,
        y: String,
    },
    /// Operator product Y(A, x)B as a table n -> state.
    Ope {
        #[command(flatten)]
        alg: AlgebraArgs,
        a: String,
        b: String,
        #[arg(long)]
        json: bool,
    },
    /// Quasi-module series Y_W(A, u)w truncated at the given order.
    Yw {
        #[command(flatten)]
        alg: AlgebraArgs,
        a: String,
        w: String,
        #[arg(long, default_value_t = 8)]
        order: i64,
        #[arg(long)]
        json: bool,
    },
    /// Coinvariant reduction of a state at the auxiliary point.
    Reduce {
        #[arg(long)]
        config: String,
        state: String,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        modes: Option<i64>,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long = "T")]
        t: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum AlgebraAction {
    /// List the builtin presets.
    List,
    /// Print the product table.
    Show {
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Validate a presentation (axioms are checked with n_max = 6).
    Check { file: String },
}

fn default_t() -> u32 {
    std::env::var("CYCLOVERTEX_DEFAULT_T")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(1)
}

fn load(args: &AlgebraArgs) -> Result<VlaPresentation> {
    let t = args.t.unwrap_or_else(default_t);
    load_algebra(&args.algebra, t, None).map_err(|e| anyhow!("{e}"))
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Algebra { action } => match action {
            AlgebraAction::List => {
                for name in PRESET_NAMES {
                    println!("{name}");
                }
                Ok(0)
            }
            AlgebraAction::Show { alg } => {
                let a = load(&alg)?;
                println!("algebra {} (T = {})", a.name, a.order);
                for g in &a.generators {
                    println!(
                        "  generator {} : degree {}, sigma exponent {}",
                        g.name, g.degree, g.sigma_exponent
                    );
                }
                println!("  central {}", a.central_name);
                for (&(x, y, n), v) in a.product_entries() {
                    if v.is_zero() {
                        continue;
                    }
                    println!(
                        "  {}_({}){}  =  {}",
                        a.generators[x].name,
                        n,
                        a.generators[y].name,
                        a.display_elem(v)
                    );
                }
                Ok(0)
            }
            AlgebraAction::Check { file } => {
                let t = default_t();
                match load_algebra(&file, t, None) {
                    Ok(a) => {
                        println!("{}: valid ({} axiom cases pass)", file, a.check_axioms(6).cases);
                        Ok(0)
                    }
                    Err(e) => {
                        eprintln!("{file}: INVALID\n{e}");
                        Ok(1)
                    }
                }
            }
        },
        Command::Nthprod { alg, x, y, n } => {
            let a = load(&alg)?;
            let xe = parse_vla_elem(&a, &x).map_err(|e| anyhow!("{e}"))?;
            let ye = parse_vla_elem(&a, &y).map_err(|e| anyhow!("{e}"))?;
            let out = a.nth_product(&xe, &ye, n).map_err(|e| anyhow!("{e}"))?;
            println!("{}", a.display_elem(&out));
            Ok(0)
        }
        Command::Bracket { alg, x, y } => {
            let a = load(&alg)?;
            let square = x.contains('[') && y.contains('[');
            let xe = parse_loop_elem(&a, &x).map_err(|e| anyhow!("{e}"))?;
            let ye = parse_loop_elem(&a, &y).map_err(|e| anyhow!("{e}"))?;
            let out = LoopElem::bracket(&a, &xe, &ye);
            println!("{}", out.display(&a, square));
            Ok(0)
        }
        Command::Ope { alg, a, b, json } => {
            let al = load(&alg)?;
            let sa = parse_state(&al, ModuleKind::Untwisted, &a).map_err(|e| anyhow!("{e}"))?;
            let sb = parse_state(&al, ModuleKind::Untwisted, &b).map_err(|e| anyhow!("{e}"))?;
            let table = ope_table(&al, &sa, &sb, 4);
            if json {
                let rows: Vec<serde_json::Value> = table
                    .iter()
                    .map(|(n, v)| serde_json::json!({"n": n, "state": state_to_json(&al, v)}))
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({"schema": 1, "ope": rows}))?
                );
            } else {
                for (n, v) in table {
                    println!("n = {:>3}  ->  {}", n, v.display(&al));
                }
            }
            Ok(0)
        }
        Command::Yw { alg, a, w, order, json } => {
            let al = load(&alg)?;
            let sa = parse_state(&al, ModuleKind::Untwisted, &a).map_err(|e| anyhow!("{e}"))?;
            let sw = parse_state(&al, ModuleKind::Twisted, &w).map_err(|e| anyhow!("{e}"))?;
            let series = yw_apply(&al, &sa, &sw, order).map_err(|e| anyhow!("{e}"))?;
            if json {
                let rows: Vec<serde_json::Value> = series
                    .support()
                    .iter()
                    .map(|&j| {
                        serde_json::json!({
                            "order": j,
                            "state": state_to_json(&al, &series.coeff(j).unwrap()),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "schema": 1, "truncation": order, "series": rows
                    }))?
                );
            } else {
                for j in series.support() {
                    println!("u^{:<4} ->  {}", j, series.coeff(j).unwrap().display(&al));
                }
                println!("(truncated at u^{order})");
            }
            Ok(0)
        }
        Command::Reduce { config, state, json } => {
            let rc = ReduceConfig::load(&config).map_err(|e| anyhow!("{e}"))?;
            let (al, cfg) = rc.build().map_err(|e| anyhow!("{e}"))?;
            let sa = parse_state(&al, ModuleKind::Untwisted, &state).map_err(|e| anyhow!("{e}"))?;
            let tensor = TensorState::monomial(TensorMono::vacuum(&cfg), RatFun::one());
            let out = swap_reduce(&al, &cfg, &sa, &tensor).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "schema": 1,
                        "reduced": tensor_to_json(&al, &out),
                    }))?
                );
            } else {
                println!("{}", out.display(&al));
            }
            Ok(0)
        }
        Command::Verify { suite, depth, modes, order, t, seed, cases, json } => {
            let mut opts = SuiteOptions::default();
            if let Some(d) = depth {
                opts.depth = d;
            }
            if let Some(m) = modes {
                opts.modes = m;
            }
            if let Some(k) = order {
                opts.order = k;
            }
            opts.t = t.or_else(|| {
                std::env::var("CYCLOVERTEX_DEFAULT_T").ok().and_then(|v| v.parse().ok())
            });
            if let Some(s) = seed {
                opts.seed = s;
            }
            if let Some(c) = cases {
                opts.cases = c;
            }
            if suite != "t1" && !SUITE_NAMES.contains(&suite.as_str()) {
                bail!("unknown suite '{suite}'; available: {} and t1", SUITE_NAMES.join(", "));
            }
            let report = run_suite(&suite, &opts).map_err(|e| anyhow!("{e}"))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).context("serialize report")?);
            } else {
                print!("{report}");
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}
