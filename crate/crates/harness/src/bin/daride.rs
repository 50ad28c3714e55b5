use clap::{Args, Parser, Subcommand, ValueEnum};
use daride_core::lower_bounds::lb_max;
use daride_core::multi::SolverConfig;
use daride_core::{validate, Instance, Time};
use daride_harness::bench::{bench, to_json, to_tsv, Algorithm, BenchConfig, BenchError};
use daride_harness::format::{read_instance_file, read_schedule_file, write_instance, write_schedule, write_schedule_file};
use daride_harness::gen::{gen, Cage, GenSpec, Load};
use daride_harness::oracle::{oracle_makespan, OracleError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_ERROR: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_TOO_LARGE: u8 = 3;

#[derive(Parser)]
#[command(name = "daride", version, about = "Preemptive multi-vehicle Dial-a-Ride solvers and tooling")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate an instance file.
    Gen {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the lower bounds of an instance.
    Lb {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Solve an instance and write the schedule.
    Solve {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Check a schedule against an instance.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Exact optimum of a tiny instance.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the optimal schedule here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run solvers over a suite and print a tab-separated table.
    Bench {
        /// Instance files; ids are the file stems.
        #[arg(long = "in", num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Additionally generate this many instances from the generator
        /// options, with seeds `gen-seed, gen-seed+1, …`.
        #[arg(long, default_value_t = 0)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        gen_seed: u64,
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algo::Uncap, Algo::Cap, Algo::Weighted])]
        algos: Vec<Algo>,
        /// Compute exact optima where the oracle's limits allow.
        #[arg(long)]
        oracle: bool,
        /// Leave the runtime column out.
        #[arg(long)]
        no_timing: bool,
        /// Also write the rows as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Uncap,
    UncapMf,
    Cap,
    Weighted,
}

impl From<Algo> for Algorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Uncap => Algorithm::Uncap,
            Algo::UncapMf => Algorithm::UncapMinorFree,
            Algo::Cap => Algorithm::Cap,
            Algo::Weighted => Algorithm::Weighted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    RandomMetric,
    RandomGraph,
    PlanarGrid,
    StarGap,
    GirthGap,
    File,
}

#[derive(Args)]
struct SpecArgs {
    #[arg(long, value_enum, default_value = "random-metric")]
    kind: Kind,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    q: usize,
    #[arg(long, default_value_t = 2)]
    k: u64,
    #[arg(long, default_value_t = 1)]
    max_weight: u64,
    /// Largest random distance or edge length.
    #[arg(long, default_value_t = 10)]
    max_dist: i64,
    /// Extra edges beyond a spanning tree for random graphs.
    #[arg(long, default_value_t = 0)]
    extra: usize,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long, default_value = "petersen")]
    cage: String,
    /// Source file for `--kind file`.
    #[arg(long)]
    from: Option<PathBuf>,
}

impl SpecArgs {
    fn spec(&self, seed: u64) -> Result<GenSpec, String> {
        let load = Load { m: self.m, q: self.q, capacity: self.k, max_weight: self.max_weight };
        Ok(match self.kind {
            Kind::RandomMetric => GenSpec::RandomMetric { n: self.n, max_dist: self.max_dist, load, seed },
            Kind::RandomGraph => GenSpec::RandomGraph { n: self.n, extra: self.extra, max_len: self.max_dist, load, seed },
            Kind::PlanarGrid => GenSpec::PlanarGrid { rows: self.rows, cols: self.cols, load, seed },
            Kind::StarGap => GenSpec::StarGap { q: self.q },
            Kind::GirthGap => GenSpec::GirthGap { cage: self.cage.parse::<Cage>().map_err(|e| e.to_string())? },
            Kind::File => GenSpec::File(self.from.clone().ok_or("--kind file needs --from")?),
        })
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    rho_c: u64,
    #[arg(long, default_value_t = 5)]
    r: usize,
    /// First makespan guess, an integer or `a/b`.
    #[arg(long)]
    bound: Option<Time>,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        let mut cfg = SolverConfig { seed: self.seed, rho_c: self.rho_c, r: self.r, bound: self.bound, ..Default::default() };
        cfg.tour.seed = self.seed;
        cfg
    }
}

struct Failure(u8, String);

fn fail(code: u8) -> impl Fn(&dyn std::fmt::Display) -> Failure {
    move |e| Failure(code, e.to_string())
}

fn load(path: &Path) -> Result<Instance, Failure> {
    read_instance_file(path).map_err(|e| fail(EXIT_ERROR)(&e))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Gen { spec, seed, out } => {
            let s = spec.spec(seed).map_err(|e| fail(EXIT_ERROR)(&e))?;
            let inst = gen(&s).map_err(|e| fail(EXIT_ERROR)(&e))?;
            let text = write_instance(&inst);
            match out {
                Some(p) => std::fs::write(&p, text).map_err(|e| fail(EXIT_ERROR)(&e))?,
                None => print!("{text}"),
            }
        }
        Cmd::Lb { input } => {
            let inst = load(&input)?;
            for (name, v) in lb_max(&inst).fields() {
                println!("{name}\t{v}");
            }
        }
        Cmd::Solve { algo, input, out, solver } => {
            let inst = load(&input)?;
            let algo = Algorithm::from(algo);
            if let Some(why) = algo.unsupported(&inst) {
                return Err(Failure(EXIT_ERROR, format!("{algo} cannot run on this instance: {why}")));
            }
            let (schedule, trace) = algo.run(&inst, &solver.config()).map_err(|e| fail(EXIT_ERROR)(&e))?;
            write_schedule_file(&out, &schedule).map_err(|e| fail(EXIT_ERROR)(&e))?;
            let report = validate(&inst, &schedule);
            println!("makespan\t{}\nlb_max\t{}\nrounds\t{}", report.makespan, trace.lower_bounds.combined, schedule.num_rounds());
            if !report.feasible {
                return Err(Failure(EXIT_INFEASIBLE, format!("infeasible schedule: {:?}", report.violations)));
            }
        }
        Cmd::Validate { input, schedule } => {
            let inst = load(&input)?;
            let s = read_schedule_file(&schedule, inst.q()).map_err(|e| fail(EXIT_ERROR)(&e))?;
            let r = validate(&inst, &s);
            println!("feasible\t{}\nmakespan\t{}\nmax_preemptions\t{}", r.feasible, r.makespan, r.max_preemptions());
            for v in &r.violations {
                println!("violation\t{v:?}");
            }
            if !r.feasible {
                return Err(Failure(EXIT_INFEASIBLE, "schedule is infeasible".into()));
            }
        }
        Cmd::Oracle { input, out } => {
            let inst = load(&input)?;
            let sol = oracle_makespan(&inst).map_err(|e| match e {
                OracleError::TooLarge(_) | OracleError::ZeroDistance(..) => fail(EXIT_TOO_LARGE)(&e),
            })?;
            println!("optimum\t{}\nnodes\t{}", sol.makespan, sol.nodes);
            if let Some(p) = out {
                std::fs::write(&p, write_schedule(&sol.witness)).map_err(|e| fail(EXIT_ERROR)(&e))?;
            }
        }
        Cmd::Bench { inputs, count, gen_seed, spec, algos, oracle, no_timing, json, solver } => {
            let mut suite = Vec::new();
            for p in &inputs {
                let id = p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned());
                suite.push((id, load(p)?));
            }
            for i in 0..count {
                let s = spec.spec(gen_seed + i).map_err(|e| fail(EXIT_ERROR)(&e))?;
                suite.push((format!("gen{i:05}"), gen(&s).map_err(|e| fail(EXIT_ERROR)(&e))?));
            }
            let algorithms: Vec<Algorithm> = algos.into_iter().map(Algorithm::from).collect();
            let cfg = BenchConfig { solver: solver.config(), oracle };
            let rows = bench(&suite, &algorithms, &cfg).map_err(|e| match e {
                BenchError::Infeasible { .. } => fail(EXIT_INFEASIBLE)(&e),
                BenchError::Solve { .. } => fail(EXIT_ERROR)(&e),
            })?;
            print!("{}", to_tsv(&rows, !no_timing));
            if let Some(p) = json {
                std::fs::write(&p, to_json(&rows)).map_err(|e| fail(EXIT_ERROR)(&e))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
