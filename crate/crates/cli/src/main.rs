use std::path::PathBuf;
use std::process::ExitCode;

use aglsm::algebra::{pade_reconstruct, QSeries, Rational};
use aglsm::engines::{correlate, TargetSpec};
use aglsm::glsm;
use aglsm::ifunctions::{i_coeff_grassmannian, i_coeff_projective};
use clap::{Args, Parser, Subcommand, ValueEnum};
use itertools::Itertools;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use aglsm_cli::checks::{self, Suite};
use aglsm_cli::config::{self, Job, Loaded};

#[derive(Parser)]
#[command(name = "aglsm", version, about = "Exact A-twisted GLSM correlators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML job file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `cutoff` from the config
    #[arg(long)]
    cutoff: Option<u32>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Correlator series of the configured target and insertion
    Correlate {
        #[command(flatten)]
        common: Common,
    },
    /// I-function coefficients up to the cutoff (needs params.z)
    Ifunction {
        #[command(flatten)]
        common: Common,
    },
    /// Run an identity suite; exit status 1 if any check fails
    Check {
        suite: Option<Suite>,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1e-11)]
        float_tolerance: f64,
        /// Seed for the randomized parameters
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Padé reconstruction of a univariate series
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Comma-separated coefficients; otherwise the configured correlator is used
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        num_deg: usize,
        #[arg(long)]
        den_deg: usize,
    },
}

enum Failure {
    Config(String),
    Checks,
}

impl From<aglsm::Error> for Failure {
    fn from(e: aglsm::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &Common) -> Res<Loaded> {
    let path = common.config.as_ref().ok_or_else(|| Failure::Config("--config is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = config::parse(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    if let Some(c) = common.cutoff {
        cfg.cutoff = c;
    }
    cfg.load().map_err(|e| Failure::Config(format!("{}: {}", path.display(), e.anchored(&text))))
}

fn emit(value: &Value, common: &Common, loaded: Option<&Loaded>) -> Res<()> {
    let text = serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n";
    let target = common
        .output
        .clone()
        .or_else(|| loaded.and_then(|l| l.config.output.as_ref().map(PathBuf::from)));
    match target {
        Some(p) => std::fs::write(&p, text).map_err(|e| Failure::Config(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn series_json(s: &QSeries) -> Value {
    let degrees = s.order().iter().map(|&o| 0..=o).multi_cartesian_product();
    let entries: Vec<Value> = degrees
        .map(|d| json!({ "degree": d, "coefficient": s.coefficient(&d).to_string() }))
        .collect();
    json!({ "variables": s.vars(), "coefficients": entries })
}

fn correlator(l: &Loaded) -> Res<(QSeries, Value)> {
    let p = l.insertion().map_err(|e| Failure::Config(e.message))?;
    let cutoff = l.config.cutoff;
    let (series, dictionary) = match &l.job {
        Job::Target(spec) => {
            let s = correlate(spec, &p, cutoff, l.variant, &l.params)?;
            let d = spec.dictionary().describe(s.vars());
            (s, Value::String(d))
        }
        Job::Raw(model) => (glsm::correlator(model, &p, cutoff, l.variant)?, Value::Null),
    };
    Ok((series, dictionary))
}

fn run(cli: Cli) -> Res<()> {
    match cli.command {
        Command::Correlate { common } => {
            let l = load(&common)?;
            let (series, dictionary) = correlator(&l)?;
            let out = json!({
                "target": l.config.target,
                "insertion": l.insertion().map_err(|e| Failure::Config(e.message))?.to_string(),
                "variant": l.variant,
                "cutoff": l.config.cutoff,
                "series": series_json(&series),
                "dictionary": dictionary,
            });
            emit(&out, &common, Some(&l))
        }
        Command::Ifunction { common } => {
            let l = load(&common)?;
            let z = l.params.get("z").cloned().ok_or_else(|| Failure::Config("params.z is required".into()))?;
            let lambda: Vec<Rational> = l.params.iter().filter(|(k, _)| k.starts_with("lambda")).map(|(_, v)| v.clone()).collect();
            let lambda = (!lambda.is_empty()).then_some(lambda);
            let (r, n, bundle) = match &l.job {
                Job::Target(TargetSpec::Projective { n }) => (1, *n, vec![]),
                Job::Target(TargetSpec::Grassmannian { r, n }) => (*r, *n, vec![]),
                Job::Target(TargetSpec::GrassmannianCi { r, n, bundle }) => (*r, *n, bundle.clone()),
                _ => return Err(Failure::Config("ifunction supports projective, grassmannian and grassmannian-ci".into())),
            };
            let cutoff = l.config.cutoff as i64;
            let mut coefficients = Vec::new();
            for d in (0..r).map(|_| 0..=cutoff).multi_cartesian_product().filter(|d| d.iter().sum::<i64>() <= cutoff) {
                let c = if r == 1 {
                    i_coeff_projective(n, d[0], &z, lambda.as_deref())?
                } else {
                    i_coeff_grassmannian(r, n, &d, &z, lambda.as_deref(), &bundle)?
                };
                coefficients.push(json!({
                    "degree": c.degree,
                    "value": c.value.to_string(),
                    "vandermonde": c.vandermonde,
                }));
            }
            let ring = if lambda.is_some() { "equivariant" } else { "nilpotent" };
            let out = json!({ "target": l.config.target, "z": z.to_string(), "ring": ring, "coefficients": coefficients });
            emit(&out, &common, Some(&l))
        }
        Command::Check { suite, common, float_tolerance, seed } => {
            let loaded = common.config.as_ref().map(|_| load(&common)).transpose()?;
            let suites: Vec<Suite> = match (suite, &loaded) {
                (Some(s), _) => vec![s],
                (None, Some(l)) if !l.config.checks.is_empty() => l
                    .config
                    .checks
                    .iter()
                    .map(|c| {
                        Suite::from_str(c, false).map_err(|_| {
                            let names = Suite::value_variants().iter().map(|s| s.name()).join(", ");
                            Failure::Config(format!("unknown suite `{c}`; expected one of {names}"))
                        })
                    })
                    .collect::<Res<_>>()?,
                _ => return Err(Failure::Config("no suite given".into())),
            };
            let mut settings = checks::Settings { float_tolerance, rng: rand::rngs::StdRng::seed_from_u64(seed) };
            let mut results = Vec::new();
            for s in suites {
                results.extend(checks::run(s, &mut settings)?);
            }
            let pass = results.iter().all(|r| r.pass);
            #[derive(Serialize)]
            struct Summary<'a> {
                pass: bool,
                seed: u64,
                float_tolerance: f64,
                passed: usize,
                failed: usize,
                results: &'a [checks::CheckResult],
            }
            let passed = results.iter().filter(|r| r.pass).count();
            let summary = Summary { pass, seed, float_tolerance, passed, failed: results.len() - passed, results: &results };
            emit(&serde_json::to_value(&summary).expect("serializes"), &common, loaded.as_ref())?;
            if pass {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
        Command::Reconstruct { common, series, num_deg, den_deg } => {
            let (s, loaded) = match series {
                Some(text) => {
                    let coeffs = text
                        .split(',')
                        .map(|c| c.trim().parse::<Rational>())
                        .collect::<aglsm::Result<Vec<_>>>()
                        .map_err(|e| Failure::Config(format!("--series: {e}")))?;
                    if coeffs.is_empty() {
                        return Err(Failure::Config("--series is empty".into()));
                    }
                    (QSeries::univariate("q", coeffs.len() as u32 - 1, &coeffs), None)
                }
                None => {
                    let l = load(&common)?;
                    let (s, _) = correlator(&l)?;
                    if s.vars().len() != 1 {
                        return Err(Failure::Config("reconstruction needs a single series variable".into()));
                    }
                    (s, Some(l))
                }
            };
            let pade = pade_reconstruct(&s, num_deg, den_deg)?;
            let f = &pade.function;
            let out = json!({
                "variable": f.var(),
                "numerator": f.numerator().coeffs().iter().map(Rational::to_string).collect::<Vec<_>>(),
                "denominator": f.denominator().coeffs().iter().map(Rational::to_string).collect::<Vec<_>>(),
                "function": f.to_string(),
                "unique": pade.unique,
                "series": s.to_vec().iter().map(Rational::to_string).collect::<Vec<_>>(),
                "matches_all_terms": f.expand(s.order()[0])? == s,
            });
            emit(&out, &common, loaded.as_ref())
        }
    }
}
