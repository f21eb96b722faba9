//! `smarandache`: command-line front end for the fq-smarandache library.
//!
//! Exit status is 0 on success, 2 on parse errors, 3 when a cap is exceeded,
//! 4 on domain errors and 1 when `verify` reports a failing criterion.

mod render;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use fq_smarandache::census::{self, parse_r, CensusParams, Mode, CSV_HEADER};
use fq_smarandache::factor::{factorizers, CachedFactorizer, Factorizer, TrialDivision, DEFAULT_SEED};
use fq_smarandache::poly::{factorial_direct, factorial_product, valuation, valuation_of_factorial};
use fq_smarandache::registry::Registry;
use fq_smarandache::smarandache::{
    distance_to_fixed_with, fixed_points, inverse_image_prime_powers, s_with, strategies,
};
use fq_smarandache::verify::{self, Context};
use fq_smarandache::{Error, FieldSpec, Limits, Named, Nat, Poly, Result};
use num_bigint::BigUint;
use serde_json::json;

use render::{Format, Output};

#[derive(Parser)]
#[command(name = "smarandache", version, about = "Smarandache function and census for F_q[t]")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Field size (a prime power).
    #[arg(long, global = true, default_value_t = 2, env = "SMARANDACHE_Q")]
    q: u64,
    /// Modulus over F_p for non-prime q, e.g. "x^2+2x+2".
    #[arg(long, global = true)]
    modulus: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the census.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized factorization.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest δ(f) for which f! is materialized.
    #[arg(long, global = true)]
    delta_cap: Option<u64>,
    /// Largest number of polynomials a census or sieve level may enumerate.
    #[arg(long, global = true)]
    census_cap: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report elapsed times as zero so output is reproducible.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// δ(f).
    Delta { f: String },
    /// The polynomial with the given δ-index.
    DeltaInv { m: String },
    /// f! from the definition or the product formula.
    Factorial {
        f: String,
        #[arg(long, default_value = "product", value_parser = ["direct", "product"])]
        method: String,
    },
    /// v_P(h), or v_P(h!) with --factorial.
    Valuation {
        p: String,
        h: String,
        #[arg(long)]
        factorial: bool,
    },
    /// Factorization with ω, τ and the largest irreducible factor.
    Factor {
        f: String,
        #[arg(long, default_value = "cantor-zassenhaus")]
        method: String,
    },
    /// S(f).
    #[command(name = "S")]
    S {
        f: String,
        #[arg(long, default_value = "closed-form")]
        strategy: String,
        #[arg(long, default_value = "cantor-zassenhaus")]
        method: String,
        /// Also report the first N iterates.
        #[arg(long)]
        chain: Option<usize>,
    },
    /// S(f) by a brute-force oracle.
    #[command(name = "S-oracle")]
    SOracle {
        f: String,
        #[arg(long, default_value = "valuation", value_parser = ["definition", "valuation"])]
        oracle: String,
    },
    /// f, S(f), S(S(f)), …
    Iterate {
        f: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long, default_value = "cantor-zassenhaus")]
        method: String,
    },
    /// Number of S-steps until a fixed point.
    Distance {
        f: String,
        #[arg(long, default_value = "cantor-zassenhaus")]
        method: String,
    },
    /// Prime powers P^e with S(P^e) = f, grouped by deg P.
    InverseImage { f: String },
    /// Fixed points of S.
    FixedPoints,
    /// Classify every monic polynomial of degree n.
    Census {
        #[arg(long)]
        n: usize,
        /// Integer, decimal or a/b.
        #[arg(long, default_value = "1")]
        r: String,
        #[arg(long, default_value = "standard")]
        mode: Mode,
        #[arg(long, default_value_t = 8)]
        shards: usize,
        #[arg(long, default_value = "auto")]
        kernel: String,
    },
    /// Σ τ(f) over monic f of degree n.
    TauSum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "auto")]
        kernel: String,
    },
    /// Run the verification suites.
    Verify {
        /// Criterion ids to run; all when omitted.
        #[arg(long = "criterion", value_parser = clap::value_parser!(u8).range(1..=14))]
        criteria: Vec<u8>,
    },
}

/// The configured factorization method behind an `Arc`.
struct Selected {
    reg: Registry<dyn Factorizer>,
    name: &'static str,
}

impl Named for Selected {
    fn name(&self) -> &'static str {
        self.name
    }
}

impl Factorizer for Selected {
    fn factorize(&self, f: &Poly) -> Result<fq_smarandache::factor::Factorization> {
        self.reg.get(self.name)?.factorize(f)
    }
}

struct Env {
    field: FieldSpec,
    limits: Limits,
    seed: u64,
    no_timing: bool,
}

impl Env {
    fn poly(&self, src: &str) -> Result<Poly> {
        Poly::parse(&self.field, src)
    }

    fn factorizer(&self, name: &str) -> Result<Arc<dyn Factorizer>> {
        let mut reg = factorizers(self.seed);
        reg.register(Box::new(TrialDivision::new(self.limits)));
        let name = reg.get(name)?.name();
        Ok(Arc::new(CachedFactorizer::new(Selected { reg, name }, 1 << 12)))
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let wants_json = argv.windows(2).any(|w| w[0] == "--format" && w[1] == "json")
                || argv.iter().any(|a| a == "--format=json");
            if wants_json {
                eprintln!("{}", render::error_record("parse", e.to_string().trim()));
            } else {
                let _ = e.print();
            }
            return ExitCode::from(2);
        }
    };
    let format = cli.global.format;
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if format == Format::Json {
                eprintln!("{}", render::error_record(e.kind(), &e.to_string()));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(match e.kind() {
                "parse" => 2,
                "cap_exceeded" => 3,
                _ => 4,
            })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = cli.global;
    let mut limits = Limits::from_env();
    if let Some(c) = g.delta_cap {
        limits.factorial_delta_cap = positive("--delta-cap", c)?;
    }
    if let Some(c) = g.census_cap {
        limits.census_cap = positive("--census-cap", c)?;
    }
    if let Some(t) = g.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(positive("--threads", t as u64)? as usize)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    if g.q > limits.q_cap {
        return Err(Error::CapExceeded { what: "q", value: g.q.to_string(), cap: limits.q_cap });
    }
    let field = FieldSpec::from_q_and_modulus(g.q, g.modulus.as_deref())?;
    let env = Env { field, limits, seed: g.seed, no_timing: g.no_timing };

    let (output, ok) = match cli.command {
        Command::Verify { criteria } => verify_cmd(&env, &criteria),
        other => (dispatch(&env, other)?, true),
    };
    let rendered = output.render(g.format)?;
    match &g.out {
        Some(path) => fs::write(path, rendered).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(rendered.as_bytes());
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn positive(flag: &str, v: u64) -> Result<u64> {
    if v == 0 {
        return Err(Error::InvalidArgument(format!("{flag} must be positive")));
    }
    Ok(v)
}

fn dispatch(env: &Env, command: Command) -> Result<Output> {
    let field = &env.field;
    Ok(match command {
        Command::Delta { f } => {
            let f = env.poly(&f)?;
            let d = f.delta().to_string();
            Output::new(d.clone(), json!({ "input": render::poly(&f), "delta": d }))
        }
        Command::DeltaInv { m } => {
            let m: BigUint = m.trim().parse().map_err(|_| Error::Parse(format!("'{m}' is not a natural number")))?;
            let f = Poly::from_delta(field, &m);
            Output::new(f.to_literal(), render::poly(&f))
        }
        Command::Factorial { f, method } => {
            let f = env.poly(&f)?;
            let fact = match method.as_str() {
                "direct" => factorial_direct(&f, &env.limits)?,
                _ => factorial_product(&f, &env.limits)?,
            };
            Output::new(fact.to_literal(), json!({ "input": render::poly(&f), "method": method, "factorial": render::poly(&fact) }))
        }
        Command::Valuation { p, h, factorial } => {
            let p = env.poly(&p)?;
            let h = env.poly(&h)?;
            let v = if factorial {
                // Validates P through the direct valuation on P itself.
                valuation(&p, &p)?;
                let d = p.degree().expect("irreducible P is non-constant") as u32;
                valuation_of_factorial(d, &h.delta(), field.q())
            } else {
                valuation(&p, &h)?
            };
            let v = v.to_string();
            Output::new(
                v.clone(),
                json!({ "P": render::poly(&p), "h": render::poly(&h), "of_factorial": factorial, "valuation": v }),
            )
        }
        Command::Factor { f, method } => {
            let f = env.poly(&f)?;
            let fz = env.factorizer(&method)?.factorize(&f)?;
            let mut j = render::factorization(&fz);
            j["input"] = render::poly(&f);
            j["method"] = json!(method);
            Output::new(render::factorization_text(&fz), j)
        }
        Command::S { f, strategy, method, chain } => {
            let f = env.poly(&f)?;
            let factorizer = env.factorizer(&method)?;
            let reg = strategies(&env.limits, factorizer.clone());
            let value = reg.get(&strategy)?.s(&f)?;
            let mut j = json!({
                "input": render::poly(&f),
                "S": render::poly(&value),
                "delta_S": value.delta().to_string(),
            });
            let mut text = value.to_literal();
            if let Some(n) = chain {
                let mut links = vec![f.clone()];
                for _ in 0..n {
                    links.push(s_with(links.last().unwrap(), factorizer.as_ref())?);
                }
                text = links.iter().map(Poly::to_literal).collect::<Vec<_>>().join(" -> ");
                j["chain"] = links.iter().map(render::poly).collect();
            }
            Output::new(text, j)
        }
        Command::SOracle { f, oracle } => {
            let f = env.poly(&f)?;
            let reg = strategies(&env.limits, env.factorizer("cantor-zassenhaus")?);
            let value = reg.get(&format!("{oracle}-oracle"))?.s(&f)?;
            Output::new(
                value.to_literal(),
                json!({
                    "input": render::poly(&f),
                    "oracle": oracle,
                    "S": render::poly(&value),
                    "delta_S": value.delta().to_string(),
                }),
            )
        }
        Command::Iterate { f, steps, method } => {
            let f = env.poly(&f)?;
            let factorizer = env.factorizer(&method)?;
            let mut chain = vec![f];
            for _ in 0..steps {
                chain.push(s_with(chain.last().unwrap(), factorizer.as_ref())?);
            }
            let text = chain.iter().map(Poly::to_literal).collect::<Vec<_>>().join("\n");
            let rows: Vec<_> = chain.iter().map(render::poly).collect();
            Output::new(text, json!(rows))
        }
        Command::Distance { f, method } => {
            let f = env.poly(&f)?;
            let d = distance_to_fixed_with(&f, env.factorizer(&method)?.as_ref())?;
            Output::new(d.to_string(), json!({ "input": render::poly(&f), "distance": d }))
        }
        Command::InverseImage { f } => {
            let f = env.poly(&f)?;
            let images = inverse_image_prime_powers(&f);
            let text = if images.is_empty() {
                "none".to_string()
            } else {
                images
                    .iter()
                    .map(|i| format!("deg P = {}: {} <= e <= {}", i.d, i.e_lo, i.e_hi))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            Output::new(text, json!({ "input": render::poly(&f), "prime_powers": images }))
        }
        Command::FixedPoints => {
            let fps = fixed_points(field);
            let text = fps.iter().map(Poly::to_literal).collect::<Vec<_>>().join("\n");
            let rows: Vec<_> = fps.iter().map(render::poly).collect();
            Output::new(text, json!(rows))
        }
        Command::Census { n, r, mode, shards, kernel } => {
            let params = CensusParams::new(field, n, parse_r(&r)?, mode)?;
            let reg = census::kernels();
            let kernel = census::select_kernel(&reg, &kernel, field)?;
            let mut report = census::run_census(&params, positive("--shards", shards as u64)? as usize, kernel, &env.limits)?;
            if env.no_timing {
                report.wall_ms = 0;
            }
            let text = format!(
                "q={} n={} r={} mode={} kernel={}\ntotal {}  T {}  T1 {}  T2 {}  T3 {}  T4 {}\nB {:.6}  D {:.6}\nbound T1 {:.6} ({})\nbound T2 {:.6} ({})\nbound T3 {:.6} ({})\n{}  S4 violations {}  {} ms",
                report.q, report.n, report.r, report.mode, report.kernel,
                report.total, report.count_t, report.count_t1, report.count_t2, report.count_t3, report.count_t4,
                report.b, report.d,
                report.bound_t1.value, bound_state(&report.bound_t1),
                report.bound_t2.value, bound_state(&report.bound_t2),
                report.bound_t3.value, bound_state(&report.bound_t3),
                report.hyp_flags, report.s4_violations, report.wall_ms,
            );
            let csv = format!("{CSV_HEADER}\n{}\n", report.csv_row());
            Output::new(text, report.to_json()).with_csv(csv)
        }
        Command::TauSum { n, kernel } => {
            let reg = census::kernels();
            let kernel = census::select_kernel(&reg, &kernel, field)?;
            let sum = census::tau_sum(field, n, kernel, &env.limits)?;
            let expected = Nat::from(n as u64 + 1) * Nat::from(field.q()).pow(n as u32);
            Output::new(
                sum.to_string(),
                json!({ "q": field.q(), "n": n, "tau_sum": sum.to_string(), "expected": expected.to_string() }),
            )
        }
        Command::Verify { .. } => unreachable!("handled by run"),
    })
}

fn bound_state(b: &census::Bound) -> &'static str {
    match (b.applies, b.holds) {
        (false, _) => "n/a",
        (true, true) => "holds",
        (true, false) => "fails",
    }
}

fn verify_cmd(env: &Env, criteria: &[u8]) -> (Output, bool) {
    let ctx = Context::new(env.limits);
    let mut outcomes = if criteria.is_empty() {
        verify::run_all(&ctx, |_| {})
    } else {
        criteria.iter().map(|&id| verify::run_criterion(id, &ctx)).collect()
    };
    if env.no_timing {
        outcomes.iter_mut().for_each(|o| o.elapsed_ms = 0);
    }
    let ok = outcomes.iter().all(|o| o.passed);
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let mut text: Vec<String> = outcomes.iter().map(|o| o.line()).collect();
    text.push(format!("{passed}/{} criteria passed", outcomes.len()));
    (Output::new(text.join("\n"), json!(outcomes)), ok)
}
