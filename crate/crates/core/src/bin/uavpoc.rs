use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use uavpoc::config::{ScenarioConfig, Scheme};
use uavpoc::experiment::{run_experiment, run_sweep, Experiment, RunRecord};
use uavpoc::output::{read_records, svg_line_chart, write_experiment, Series};
use uavpoc::stats::{convergence_cdf, summarize_experiment, throughput_stats};
use uavpoc::utility::Metric;
use uavpoc::Result;

#[derive(Parser)]
#[command(name = "uavpoc", version, about = "Fuzzy-payoff channel allocation for clustered UAV networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scheme over topologies x trials for one network size.
    Run(ScenarioArgs),
    /// Run the experiment for several network sizes.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Comma-separated network sizes.
        #[arg(long, value_delimiter = ',', default_values_t = [10, 20, 30, 40])]
        n_values: Vec<usize>,
    },
    /// Empirical CDF of iterations-to-converge from a runs CSV.
    Cdf(ReportArgs),
    /// Plot-ready CSV tables and SVG charts from a runs CSV.
    Report(ReportArgs),
}

#[derive(Args)]
struct ScenarioArgs {
    /// JSON scenario file; unknown keys are rejected.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    /// fuzzy, crisp, random or all.
    #[arg(long, default_value = "all")]
    scheme: String,
    #[arg(long)]
    metric: Option<Metric>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    topologies: Option<usize>,
}

#[derive(Args)]
struct ReportArgs {
    /// Runs CSV; defaults to `<out>/runs.csv`.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

impl ScenarioArgs {
    fn config(&self) -> Result<ScenarioConfig> {
        let mut cfg = match &self.config {
            Some(p) => ScenarioConfig::load(p)?,
            None => ScenarioConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.master_seed = s;
        }
        if let Some(n) = self.n {
            cfg.n_nodes = n;
        }
        if let Some(m) = self.metric {
            cfg.metric = m;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(t) = self.topologies {
            cfg.topologies = t;
        }
        if self.scheme != "all" {
            cfg.schemes = vec![self.scheme.parse::<Scheme>()?];
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ReportArgs {
    fn records(&self) -> Result<Vec<RunRecord>> {
        let path = self.input.clone().unwrap_or_else(|| self.out.join("runs.csv"));
        read_records(&path)
    }
}

fn print_summary(exp: &Experiment) {
    println!(
        "{:<8} {:>5} {:>6} {:>6} {:>10} {:>12} {:>12} {:>8}",
        "scheme", "N", "runs", "conv", "iters", "throughput", "tput var", "links"
    );
    for (scheme, by_n) in summarize_experiment(exp) {
        for (n, c) in by_n {
            let mean = |s: Option<uavpoc::stats::Summary>| s.map_or(f64::NAN, |s| s.mean);
            println!(
                "{:<8} {:>5} {:>6} {:>6} {:>10.2} {:>12.4} {:>12.4} {:>8.2}",
                scheme,
                n,
                c.runs,
                c.converged,
                mean(c.iterations),
                mean(c.throughput),
                c.throughput.and_then(|s| s.variance).unwrap_or(f64::NAN),
                mean(c.active_links),
            );
        }
    }
    if !exp.failures.is_empty() {
        println!("{} runs failed", exp.failures.len());
    }
}

fn write_cdf(out: &Path, records: &[RunRecord]) -> Result<BTreeMap<usize, Vec<(usize, f64)>>> {
    let fuzzy: Vec<RunRecord> = records.iter().filter(|r| r.scheme == Scheme::Fuzzy).cloned().collect();
    let cdf = convergence_cdf(if fuzzy.is_empty() { records } else { &fuzzy })?;
    let mut text = String::from("N,iters,cdf\n");
    for (n, steps) in &cdf {
        for (k, p) in steps {
            text.push_str(&format!("{n},{k},{p}\n"));
        }
    }
    fs::create_dir_all(out)?;
    fs::write(out.join("cdf.csv"), text)?;
    Ok(cdf)
}

fn report(out: &Path, records: &[RunRecord]) -> Result<()> {
    fs::create_dir_all(out)?;
    let stats = throughput_stats(records);
    let mut table = String::from("scheme,N,mean_throughput,var_throughput,mean_active_links\n");
    let mut links: BTreeMap<(Scheme, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        links.entry((r.scheme, r.n)).or_default().push(r.active_links as f64);
    }
    let mut tput_series: BTreeMap<Scheme, Vec<(f64, f64)>> = BTreeMap::new();
    let mut link_series: BTreeMap<Scheme, Vec<(f64, f64)>> = BTreeMap::new();
    for ((scheme, n), s) in &stats {
        let l = &links[&(*scheme, *n)];
        let lm = l.iter().sum::<f64>() / l.len() as f64;
        table.push_str(&format!(
            "{scheme},{n},{},{},{lm}\n",
            s.mean,
            s.variance.map_or(String::new(), |v| v.to_string())
        ));
        tput_series.entry(*scheme).or_default().push((*n as f64, s.mean));
        link_series.entry(*scheme).or_default().push((*n as f64, lm));
    }
    fs::write(out.join("by_n.csv"), table)?;
    let to_series = |m: BTreeMap<Scheme, Vec<(f64, f64)>>| -> Vec<Series> {
        m.into_iter()
            .map(|(s, points)| Series {
                name: s.to_string(),
                points,
            })
            .collect()
    };
    fs::write(
        out.join("throughput.svg"),
        svg_line_chart("Mean generalized throughput", "N", "throughput", &to_series(tput_series)),
    )?;
    fs::write(
        out.join("active_links.svg"),
        svg_line_chart("Mean active links", "N", "active links", &to_series(link_series)),
    )?;
    if let Ok(cdf) = write_cdf(out, records) {
        let series: Vec<Series> = cdf
            .into_iter()
            .map(|(n, steps)| Series {
                name: format!("N={n}"),
                points: steps.into_iter().map(|(k, p)| (k as f64, p)).collect(),
            })
            .collect();
        fs::write(
            out.join("cdf.svg"),
            svg_line_chart("Iterations to converge", "iterations", "CDF", &series),
        )?;
    }
    Ok(())
}

fn main_inner() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let cfg = args.config()?;
            let exp = run_experiment(&cfg)?;
            write_experiment(&args.out, &cfg, &exp)?;
            print_summary(&exp);
        }
        Command::Sweep { scenario, n_values } => {
            let cfg = scenario.config()?;
            let exp = run_sweep(&cfg, &n_values)?;
            write_experiment(&scenario.out, &cfg, &exp)?;
            print_summary(&exp);
        }
        Command::Cdf(args) => {
            let cdf = write_cdf(&args.out, &args.records()?)?;
            for (n, steps) in cdf {
                let line: Vec<String> = steps.iter().map(|(k, p)| format!("{k}:{p:.3}")).collect();
                println!("N={n}  {}", line.join(" "));
            }
        }
        Command::Report(args) => {
            report(&args.out, &args.records()?)?;
            println!(
                "wrote by_n.csv, throughput.svg, active_links.svg, cdf.csv, cdf.svg to {}",
                args.out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
