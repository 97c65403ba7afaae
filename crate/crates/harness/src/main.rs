//! `cubelab`: analyze functions, run registered conjectures, search
//! spaces, and run Gaussian estimates from the command line.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubelab_core::{
    and_f, dictator, fourier_stats, inner_product, majority, mod3, noise_profile, or_f, parity,
    sensitivity_stats, BooleanFunction, Dnf,
};
use cubelab_gaussian::{
    ball_radius, joint_prob, partition_stability, widths, GaussianRegion, CSV_HEADER,
};
use cubelab_harness::report::{load, render_csv, render_markdown};
use cubelab_harness::{
    entries, functional, run, run_search, Config, Direction, Functional, HarnessError, Params,
    Result, SearchSpace, Verdict,
};

#[derive(Parser)]
#[command(name = "cubelab", version, about = "Open problems in Boolean function analysis, by computation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunOptions {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 means all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Directory for reports.jsonl.
    #[arg(long)]
    run_dir: Option<PathBuf>,
    /// Do not append the report anywhere.
    #[arg(long)]
    no_persist: bool,
    /// Largest number of elements a search may evaluate.
    #[arg(long)]
    budget: Option<u64>,
    /// Monte Carlo draws.
    #[arg(long)]
    samples: Option<u64>,
}

impl RunOptions {
    fn config(&self) -> Result<Config> {
        let mut c = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config {
                run_dir: Some(PathBuf::from("runs")),
                ..Config::default()
            },
        }
        .with_env()?;
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(w) = self.workers {
            c.workers = (w > 0).then_some(w);
        }
        if let Some(d) = &self.run_dir {
            c.run_dir = Some(d.clone());
        }
        if self.no_persist {
            c.run_dir = None;
        }
        if let Some(b) = self.budget {
            c.node_budget = b;
        }
        if let Some(s) = self.samples {
            c.samples = s;
        }
        Ok(c)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier, noise and sensitivity statistics of one function.
    Analyze {
        /// maj5, and3, or3, parity4, dict3, mod3-6, ip2, tribes2x3, or n:hex.
        function: String,
        #[arg(long)]
        stats: bool,
        #[arg(long)]
        noise: bool,
        #[arg(long)]
        sens: bool,
    },
    /// Run a registered conjecture and print its report.
    Verify {
        id: String,
        /// Recipe parameter as key=value; repeatable.
        #[arg(long = "param", short = 'p')]
        params: Vec<String>,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Extremal search of a functional over a space.
    Search {
        /// all-n3, odd-n5, monotone-n4, ltf-n3, symmetric-n6, f2sets-n4[-sA-B],
        /// or random:<count>:<seed>:<space>.
        space: String,
        /// Functional id, with arguments as id@a,b.
        functional: String,
        #[arg(long, conflicts_with = "max")]
        min: bool,
        #[arg(long)]
        max: bool,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        options: RunOptions,
    },
    /// Gaussian-space Monte Carlo estimates as CSV rows.
    Gauss {
        #[command(subcommand)]
        command: GaussCommand,
    },
    /// Render or re-verify a reports.jsonl file.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "markdown")]
        format: Format,
        /// Only re-verify every report and witness.
        #[arg(long)]
        verify: bool,
    },
    /// List registered conjectures and functionals.
    List,
}

#[derive(Subcommand)]
enum GaussCommand {
    /// Pr[x in A, y in B] for rho-correlated Gaussians. Regions are JSON.
    JointProb {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Noise stability of the standard simplex partition, or of a JSON list of cells.
    Partition {
        #[arg(long, default_value_t = 3)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, conflicts_with_all = ["q", "n"])]
        cells: Option<String>,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Bernoulli and Gaussian widths of vectors given as "1,0;0,1".
    Widths {
        #[arg(long)]
        vectors: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Radius of the centered ball of Gaussian measure mu.
    BallRadius {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        mu: f64,
    },
}

fn named_function(text: &str) -> Result<BooleanFunction> {
    let arity = |rest: &str| -> Result<usize> {
        rest.parse()
            .map_err(|_| HarnessError::Config(format!("bad arity in {text:?}")))
    };
    let t = text.trim();
    let f = if let Some(r) = t.strip_prefix("maj") {
        majority(arity(r)?)?
    } else if let Some(r) = t.strip_prefix("and") {
        and_f(arity(r)?)?
    } else if let Some(r) = t.strip_prefix("or") {
        or_f(arity(r)?)?
    } else if let Some(r) = t.strip_prefix("parity") {
        let n = arity(r)?;
        parity(n, (1usize << n) - 1)?
    } else if let Some(r) = t.strip_prefix("dict") {
        dictator(arity(r)?, 0)?
    } else if let Some(r) = t.strip_prefix("mod3-") {
        mod3(arity(r)?)?
    } else if let Some(r) = t.strip_prefix("ip") {
        inner_product(arity(r)?)?
    } else if let Some(r) = t.strip_prefix("tribes") {
        let (w, c) = r
            .split_once('x')
            .ok_or_else(|| HarnessError::Config(format!("expected tribes<width>x<count>, got {t:?}")))?;
        Dnf::tribes(arity(w)?, arity(c)?)?.to_function()?
    } else {
        BooleanFunction::parse(t)?
    };
    Ok(f)
}

fn analyze(f: &BooleanFunction, stats: bool, noise: bool, sens: bool) -> Result<()> {
    let all = !(stats || noise || sens);
    println!("function {f}");
    if stats || all {
        let s = fourier_stats(f);
        println!(
            "Tinf={} H={} deg={} Var={} W1={} mean={}",
            s.total_influence, s.spectral_entropy, s.degree, s.variance, s.w1, s.mean
        );
        println!("influences {:?}", s.influences);
    }
    if noise || all {
        for p in noise_profile(f, &[0.1, 0.3, 0.5, 0.7, 0.9])? {
            println!("rho={} Stab={} NS={}", p.rho, p.stability, p.noise_sensitivity);
        }
    }
    if sens || all {
        let s = sensitivity_stats(f)?;
        println!(
            "s={} avg_s={} bs={}",
            s.max_sensitivity, s.avg_sensitivity, s.block_sensitivity
        );
    }
    Ok(())
}

fn region(text: &str) -> Result<GaussianRegion> {
    let r: GaussianRegion = serde_json::from_str(text)?;
    r.validate()?;
    Ok(r)
}

fn vectors(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|v| {
            v.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| HarnessError::Config(format!("bad coordinate {x:?}")))
                })
                .collect()
        })
        .collect()
}

fn gauss(cmd: GaussCommand) -> Result<()> {
    let e = match cmd {
        GaussCommand::JointProb { a, b, rho, samples, seed } => {
            joint_prob(&region(&a)?, &region(&b)?, rho, samples, seed)?
        }
        GaussCommand::Partition { q, n, cells, rho, samples, seed } => {
            let cells = match cells {
                Some(json) => {
                    let cells: Vec<GaussianRegion> = serde_json::from_str(&json)?;
                    cells.iter().try_for_each(|c| c.validate())?;
                    cells
                }
                None => GaussianRegion::standard_simplex(q, n)?,
            };
            partition_stability(&cells, rho, samples, seed)?
        }
        GaussCommand::Widths { vectors: v, samples, seed } => {
            let w = widths(&vectors(&v)?, samples, seed)?;
            println!("width,{CSV_HEADER}");
            match &w.b {
                cubelab_gaussian::Width::Exact { value } => println!("b,{value},0,0,{seed}"),
                cubelab_gaussian::Width::Estimate(b) => println!("b,{}", b.to_csv_row()),
            }
            println!("g,{}", w.g.to_csv_row());
            return Ok(());
        }
        GaussCommand::BallRadius { dim, mu } => {
            println!("dim,mu,radius");
            println!("{dim},{mu},{}", ball_radius(dim, mu)?);
            return Ok(());
        }
    };
    println!("{CSV_HEADER}");
    println!("{}", e.to_csv_row());
    Ok(())
}

fn execute(cli: Cli) -> Result<Verdict> {
    match cli.command {
        Command::Analyze { function, stats, noise, sens } => {
            analyze(&named_function(&function)?, stats, noise, sens)?;
        }
        Command::Verify { id, params, options } => {
            let report = run(&id, Params::parse(&params)?, &options.config()?)?;
            println!("{}", report.to_json()?);
            return Ok(report.verdict);
        }
        Command::Search { space, functional: f, min, max: _, json, options } => {
            let space: SearchSpace = space.parse()?;
            let f: Functional = f.parse()?;
            let direction = if min { Direction::Min } else { Direction::Max };
            let report = run_search(&space, &f, direction, &options.config()?)?;
            if json {
                println!("{}", report.to_json()?);
            } else {
                match &report.witness {
                    Some(w) => println!("{direction} {} = {} at {}", f, w.value, w.object),
                    None => println!("{direction} {f}: undefined on every element"),
                }
                println!("verdict {}", report.verdict.as_str());
            }
            return Ok(report.verdict);
        }
        Command::Gauss { command } => gauss(command)?,
        Command::Report { file, format, verify } => {
            let reports = load(&file)?;
            if verify {
                for r in &reports {
                    r.reverify()?;
                }
                println!("{} reports verified", reports.len());
            } else {
                match format {
                    Format::Csv => print!("{}", render_csv(&reports)?),
                    Format::Markdown => print!("{}", render_markdown(&reports)?),
                }
            }
        }
        Command::List => {
            println!("conjectures:");
            for e in entries() {
                println!("  {:<24} {}", e.id, e.title);
            }
            println!("functionals:");
            for (id, kind, args, doc) in functional::catalog() {
                let args = if args.is_empty() { String::new() } else { format!("@{}", args.join(",")) };
                println!("  {:<28} {kind:<8} {doc}", format!("{id}{args}"));
            }
        }
    }
    Ok(Verdict::ReportOnly)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(v) => ExitCode::from(v.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
