use clap::{Parser, Subcommand};

use lauricella::cli::{analyze, AnalyzeOptions};
use lauricella::error::Error;
use lauricella::monodromy::{all_generators, group_closure, ClosureResult};
use lauricella::periods::{
    closure_residual, identity_checks, lauricella_periods, parabolic_residual, schwarz_point,
    Configuration,
};
use lauricella::scanner::{census_csv, census_json, enumerate, ScanFilter};
use lauricella::weights::WeightSystem;

#[derive(Parser)]
#[command(
    name = "lauricella",
    about = "Discreteness, arithmeticity and period computations for Lauricella weight systems"
)]
struct Cli {
    /// cap the worker threads used by parallel subcommands
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a weight system and run every applicable exact analysis
    Analyze {
        /// comma-separated rational weights, e.g. "3/12,3/12,3/12,7/12"
        #[arg(long)]
        weights: String,
        /// emit JSON instead of text
        #[arg(long)]
        json: bool,
        /// include exact cyclotomic coefficients in Gram output
        #[arg(long)]
        exact: bool,
    },
    /// Evaluate the Lauricella period vector at a real configuration
    Periods {
        #[arg(long)]
        weights: String,
        /// comma-separated real points, e.g. "0,1,2,3"
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long)]
        json: bool,
    },
    /// Dump the Dehn-twist generators (and optionally the group closure)
    Monodromy {
        #[arg(long)]
        weights: String,
        /// run the bounded closure search
        #[arg(long)]
        closure: bool,
        /// element bound for the closure search
        #[arg(long, default_value_t = 100_000)]
        bound: usize,
        #[arg(long)]
        json: bool,
        /// include exact cyclotomic coefficients
        #[arg(long)]
        exact: bool,
    },
    /// Enumerate weight systems with bounded denominator and report a census
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long = "max-denom")]
        max_denom: u64,
        /// comma-separated filters: int|half-int|elliptic|parabolic|hyperbolic|nonarithmetic
        #[arg(long, default_value = "")]
        filter: String,
        /// output path ending in .csv or .json (stdout CSV when absent)
        #[arg(long)]
        out: Option<String>,
    },
}

fn parse_points(s: &str) -> Result<Vec<f64>, Error> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    for piece in s.split(',') {
        let t = piece.trim();
        let v: f64 = t.parse().map_err(|_| Error::Parse {
            pos,
            msg: format!("invalid real number `{t}`"),
        })?;
        out.push(v);
        pos += piece.len() + 1;
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze {
            weights,
            json,
            exact,
        } => {
            let report = analyze(&weights, AnalyzeOptions { exact })?;
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
        Command::Periods {
            weights,
            points,
            nodes,
            json,
        } => {
            let ws = WeightSystem::parse(&weights)?;
            let cfg = Configuration::new_real(parse_points(&points)?)?;
            let pv = lauricella_periods(&ws, &cfg, nodes)?;
            let idr = identity_checks(&ws, &cfg, 1e-4, nodes)?;
            let par_res = parabolic_residual(&ws, &pv);
            let clo_res = closure_residual(&ws, &pv);
            let sp = schwarz_point(&ws, &pv)?;
            if json {
                let value = serde_json::json!({
                    "F": pv.values.iter().map(|&(re, im)| vec![re, im]).collect::<Vec<_>>(),
                    "F_inf": pv.f_inf.map(|(re, im)| vec![re, im]),
                    "nodes": pv.nodes,
                    "est_error": pv.est_error,
                    "residuals": {
                        "parabolic_pi": par_res,
                        "closure": clo_res,
                        "pde": idr.pde,
                        "translation": idr.translation,
                    },
                    "ball_radius": sp.ball_radius,
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                for (k, &(re, im)) in pv.values.iter().enumerate() {
                    println!("F_{} = {re:.12} + {im:.12}i", k + 1);
                }
                if let Some((re, im)) = pv.f_inf {
                    println!("F_inf = {re:.12} + {im:.12}i");
                }
                println!("estimated quadrature error: {:.3e}", pv.est_error);
                if let Some(r) = par_res {
                    println!("parabolic pi-identity residual: {r:.3e}");
                }
                if let Some(r) = clo_res {
                    println!("hyperbolic closure residual: {r:.3e}");
                }
                println!("translation residual: {:.3e}", idr.translation);
                println!("PDE residual: {:.3e}", idr.pde);
                if let Some(r) = sp.ball_radius {
                    println!("ball radius: {r:.12}");
                }
            }
            Ok(())
        }
        Command::Monodromy {
            weights,
            closure,
            bound,
            json,
            exact,
        } => {
            let ws = WeightSystem::parse(&weights)?;
            let gens = all_generators(&ws)?;
            let closure_result = if closure {
                Some(group_closure(&gens, bound, false)?)
            } else {
                None
            };
            if json {
                let gens_json: Vec<serde_json::Value> = gens
                    .iter()
                    .map(|g| {
                        let mut v = g.to_json();
                        if !exact {
                            v.as_object_mut().unwrap().remove("entries");
                        }
                        v
                    })
                    .collect();
                let closure_json = match &closure_result {
                    Some(ClosureResult::Finite { order, .. }) => {
                        serde_json::json!({"finite": true, "order": order})
                    }
                    Some(ClosureResult::BoundExceeded) => {
                        serde_json::json!({"finite": false, "bound": bound})
                    }
                    None => serde_json::Value::Null,
                };
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({
                        "generators": gens_json,
                        "closure": closure_json,
                    }))
                    .unwrap()
                );
            } else {
                for (k, g) in gens.iter().enumerate() {
                    println!("T_{} ({}x{}, conductor {}):", k + 1, g.dimension(), g.dimension(), g.conductor());
                    for row in g.embed() {
                        let cells: Vec<String> = row
                            .iter()
                            .map(|(re, im)| format!("{re:+.6}{im:+.6}i"))
                            .collect();
                        println!("  [{}]", cells.join(", "));
                    }
                }
                match &closure_result {
                    Some(ClosureResult::Finite { order, .. }) => {
                        println!("closure: finite, order {order}")
                    }
                    Some(ClosureResult::BoundExceeded) => {
                        println!("closure: bound {bound} exceeded")
                    }
                    None => {}
                }
            }
            if matches!(closure_result, Some(ClosureResult::BoundExceeded)) {
                return Err(Error::Cap(format!(
                    "group closure exceeded the element bound {bound}"
                )));
            }
            Ok(())
        }
        Command::Scan {
            n,
            max_denom,
            filter,
            out,
        } => {
            let f = ScanFilter::parse(&filter)?;
            let entries = enumerate(n, max_denom, &f)?;
            let rendered_csv = census_csv(&entries);
            match out {
                None => print!("{rendered_csv}"),
                Some(path) => {
                    let data = if path.ends_with(".json") {
                        census_json(&entries)
                    } else {
                        rendered_csv
                    };
                    std::fs::write(&path, data)
                        .map_err(|e| Error::Invalid(format!("cannot write {path}: {e}")))?;
                    eprintln!("wrote {} entries to {path}", entries.len());
                }
            }
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    #[cfg(feature = "parallel")]
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = cli.threads;
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
