use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use huffpair::fields::{Field, OpCounter};
use huffpair::pairing::{EvalPoint, PairingError, Variant};
use huffpair::paramgen::{find_params, ParamError, PairingParams, SearchConfig};
use huffpair::params_io;
use huffpair::report::{cost_rows, loop_summary};
use huffpair::selftest::{self, SelftestConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_PARAMS: u8 = 2;
const EXIT_COLLISION: u8 = 3;
const EXIT_SELFTEST: u8 = 4;

#[derive(Parser)]
#[command(name = "huffpair", version, about = "Tate pairing on generalized Huff curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a parameter set and write it to a file.
    GenParams {
        #[arg(long, default_value_t = 200)]
        q_max: u64,
        #[arg(long, default_value_t = 7)]
        r_min: u64,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print e([i]P, [j]Q) as little-endian coefficients over F_q.
    Pair {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 1)]
        i: u64,
        #[arg(long, default_value_t = 1)]
        j: u64,
        /// Use the Miller loop without denominator elimination.
        #[arg(long)]
        full: bool,
    },
    /// Print measured operation counts next to the claimed costs.
    BenchOps {
        #[arg(long)]
        params: PathBuf,
    },
    /// Run the end-to-end checks on generated parameter sets.
    Selftest {
        #[arg(long, default_value_t = 60)]
        q_max: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Flip a sign in point addition to check that the suite notices.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Self { code, msg: msg.into() }
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        match e {
            ParamError::Pairing(PairingError::SupportCollision) => Failure::new(EXIT_COLLISION, e.to_string()),
            _ => Failure::new(EXIT_PARAMS, e.to_string()),
        }
    }
}

impl From<PairingError> for Failure {
    fn from(e: PairingError) -> Self {
        match e {
            PairingError::SupportCollision => Failure::new(EXIT_COLLISION, e.to_string()),
            _ => Failure::new(EXIT_PARAMS, e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.msg.is_empty() {
                eprintln!("error: {}", f.msg);
            }
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::GenParams {
            q_max,
            r_min,
            k,
            seed,
            out,
        } => gen_params(q_max, r_min, k, seed, &out),
        Command::Pair { params, i, j, full } => pair(&params, i, j, full),
        Command::BenchOps { params } => bench_ops(&params),
        Command::Selftest {
            q_max,
            seed,
            inject_fault,
        } => run_selftest(q_max, seed, inject_fault),
    }
}

fn load(path: &PathBuf) -> Result<PairingParams, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARAMS, format!("{}: {e}", path.display())))?;
    params_io::from_text(&text).map_err(|e| Failure::new(EXIT_PARAMS, format!("{}: {e}", path.display())))
}

fn gen_params(q_max: u64, r_min: u64, k: u64, seed: u64, out: &PathBuf) -> Result<(), Failure> {
    if k == 0 || !k.is_multiple_of(2) {
        return Err(Failure::new(EXIT_USAGE, format!("--k must be even, got {k}")));
    }
    let params = find_params(&SearchConfig::new(q_max, r_min, k, seed))?;
    fs::write(out, params_io::to_text(&params))
        .map_err(|e| Failure::new(EXIT_PARAMS, format!("{}: {e}", out.display())))?;
    println!(
        "q={} a={} b={} n={} r={} k={}",
        params.q, params.a, params.b, params.n, params.r, params.k
    );
    Ok(())
}

fn format_coeffs(c: &[u64]) -> String {
    let inner: Vec<String> = c.iter().map(u64::to_string).collect();
    format!("[{}]", inner.join(", "))
}

fn pair(path: &PathBuf, i: u64, j: u64, full: bool) -> Result<(), Failure> {
    let params = load(path)?;
    let engine = params.engine();
    let curve = engine.curve();
    let ext = engine.tower().ext();
    let ctr = OpCounter::new();
    let (i, j) = (i % params.r, j % params.r);
    if i == 0 || j == 0 {
        println!("{}", format_coeffs(&ext.coeffs(&ext.one())));
        return Ok(());
    }
    let pi = curve.scalar_mul(curve.field(), i, &params.p, &ctr).map_err(|e| Failure::new(EXIT_PARAMS, e.to_string()))?;
    let qj = curve
        .scalar_mul(ext, j, &engine.eval_to_point(&params.q_point), &ctr)
        .map_err(|e| Failure::new(EXIT_PARAMS, e.to_string()))?;
    let (q, variant) = if full {
        (EvalPoint::General(qj), Variant::Full)
    } else {
        match engine.as_special(&qj) {
            Some(s) => (EvalPoint::Special(s), Variant::Eliminated),
            None => (EvalPoint::General(qj), Variant::Full),
        }
    };
    let value = engine.reduced_tate(&pi, &q, params.r, variant)?.value;
    println!("{}", format_coeffs(&ext.coeffs(&value)));
    Ok(())
}

fn bench_ops(path: &PathBuf) -> Result<(), Failure> {
    let params = load(path)?;
    let q = params
        .q_special()
        .ok_or_else(|| Failure::new(EXIT_PARAMS, "bench-ops needs Q in the form (1 : y : z*alpha)"))?;
    let engine = params.engine();
    let costs = engine.measure_costs(&params.p, &q, params.r)?;
    println!("q={} a={} b={} r={} k={}", params.q, params.a, params.b, params.r, params.k);
    let rows = cost_rows(&costs);
    for row in &rows {
        println!("{row}");
    }
    println!("{}", loop_summary(&costs));
    let e = engine.final_exponent(params.r)?;
    println!("final-exponent: (q^k - 1)/r = {} ({} bits)", e, e.bits());
    if rows.iter().any(|r| !r.status.is_ok()) {
        return Err(Failure::new(EXIT_PARAMS, "operation counts differ from the claimed costs"));
    }
    Ok(())
}

fn run_selftest(q_max: u64, seed: u64, inject_fault: bool) -> Result<(), Failure> {
    let cfg = SelftestConfig {
        q_max,
        seed,
        ..SelftestConfig::default()
    };
    let adder: &selftest::Adder = if inject_fault {
        &selftest::faulty_adder
    } else {
        &selftest::standard_adder
    };
    let results = selftest::run(&cfg, adder);
    for r in &results {
        println!("{r}");
    }
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::new(EXIT_SELFTEST, ""))
    }
}
