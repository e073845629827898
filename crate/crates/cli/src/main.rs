//! Command-line front end: instance I/O, norm and certificate commands,
//! generators, and the randomized law suite.
//!
//! Exit codes: 0 on success, 1 when the law suite finds a counterexample,
//! 2 on malformed input (with a diagnostic naming the offending field).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use liptensor::cert::{Alpha, Exponent};
use liptensor::gen;
use liptensor::hulls::{a_max_lower_bound, default_subspace_samples, IdealKind};
use liptensor::ideal::{
    extremal_functional, p_summing_norm,
};
use liptensor::io::{
    certificate_to_json, check_certificate, instance_to_json, molecule_to_json,
    operator_to_json, parse_certificate, parse_instance, parse_molecule, parse_operator,
    report_to_json, NormCertificate,
};
use liptensor::laws::{law_suite, LawCaps, LawConfig, LawId};
use liptensor::molecule::Instance;
use liptensor::norms::{d_p_bounds, eps_norm, pi_norm, w_p_upper, NormConfig};
use liptensor::space::NormSpec;
use liptensor::{NormValue, Rat};

#[derive(Parser)]
#[command(
    name = "liptensor",
    version,
    about = "Exact Lipschitz cross-norms and operator-ideal norms on finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output style for values printed to stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlphaArg {
    Pi,
    Eps,
}

impl From<AlphaArg> for Alpha {
    fn from(a: AlphaArg) -> Alpha {
        match a {
            AlphaArg::Pi => Alpha::Pi,
            AlphaArg::Eps => Alpha::Eps,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NormArg {
    Pi,
    Eps,
    Dp,
    Wp,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate an instance file, and optionally a molecule, operator or
    /// certificate against it.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        molecule: Option<PathBuf>,
        #[arg(long)]
        operator: Option<PathBuf>,
        /// Re-check a previously emitted norm certificate (requires
        /// --molecule).
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Print the exact vertex list of the Lipschitz unit ball.
    Vertices {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = liptensor::lipball::DEFAULT_POINT_CAP)]
        cap: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compute a cross-norm of a molecule and write its certificate.
    Norm {
        #[arg(long, value_enum)]
        alpha: NormArg,
        /// Exponent for dp/wp: 1, 2 or inf.
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        molecule: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The functional norm of an operator against a cross-norm.
    Lipnorm {
        #[arg(long, value_enum)]
        alpha: AlphaArg,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// The Lipschitz p-summing norm of an operator.
    Summing {
        /// Exponent: a positive integer or inf.
        #[arg(long)]
        p: String,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// An extremal functional attaining the cross-norm of a molecule.
    Extremal {
        #[arg(long, value_enum)]
        alpha: AlphaArg,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        molecule: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the pairing of a molecule with an operator.
    Pairing {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        molecule: PathBuf,
        #[arg(long)]
        operator: PathBuf,
    },
    /// The maximal-hull lower bound of an operator ideal norm.
    Amax {
        /// lip, or a summing exponent like p1 / p2.
        #[arg(long, default_value = "lip")]
        ideal: String,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        operator: PathBuf,
    },
    /// Run the randomized law suite; exit 1 on a counterexample.
    LawSuite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        /// Comma-separated law names; defaults to the full suite.
        #[arg(long)]
        laws: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a reproducible random instance (and optional molecule and
    /// operator files).
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        n_points: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// l1, linf or random.
        #[arg(long, default_value = "random")]
        norm: String,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        molecule: Option<PathBuf>,
        #[arg(long)]
        operator: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn parse_exponent(s: &str) -> Result<Exponent> {
    match s {
        "inf" | "infinity" | "oo" => Ok(Exponent::Infinity),
        _ => {
            let v: u32 = s
                .parse()
                .map_err(|_| anyhow!("bad exponent `{s}`: expected a positive integer or inf"))?;
            if v == 0 {
                bail!("bad exponent `0`: must be at least 1");
            }
            Ok(Exponent::Finite(v))
        }
    }
}

fn print_value(format: Format, what: &str, value: &NormValue) {
    match (format, value) {
        (Format::Table, NormValue::Exact(v)) => println!("{what} = {v}"),
        (Format::Table, NormValue::Interval { lower, upper }) => {
            println!("{what} in [{lower}, {upper}]")
        }
        (Format::Json, v) => {
            println!(
                "{}",
                serde_json::json!({ "norm": what, "value": v })
            )
        }
    }
}

fn print_scalar(format: Format, what: &str, value: &Rat) {
    match format {
        Format::Table => println!("{what} = {value}"),
        Format::Json => println!("{}", serde_json::json!({ what: value })),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = NormConfig::default();
    match cli.cmd {
        Cmd::Validate {
            instance,
            molecule,
            operator,
            certificate,
        } => {
            let inst = load_instance(&instance)?;
            println!(
                "instance ok: {} points, dimension {}, {} facets",
                inst.n_points(),
                inst.dim(),
                inst.space.facets().len()
            );
            let mol = match &molecule {
                Some(path) => {
                    let u = parse_molecule(&read(path)?, &inst)
                        .map_err(|e| anyhow!("{}: {e}", path.display()))?;
                    println!("molecule ok: support {:?}", u.support());
                    Some(u)
                }
                None => None,
            };
            if let Some(path) = &operator {
                let f = parse_operator(&read(path)?, &inst)
                    .map_err(|e| anyhow!("{}: {e}", path.display()))?;
                println!("operator ok: Lipschitz norm {}", f.lip_norm());
            }
            if let Some(path) = &certificate {
                let cert = parse_certificate(&read(path)?)
                    .map_err(|e| anyhow!("{}: {e}", path.display()))?;
                let u = mol.ok_or_else(|| {
                    anyhow!("--certificate needs --molecule to check against")
                })?;
                check_certificate(&u, &cert)
                    .map_err(|e| anyhow!("certificate check failed: {e}"))?;
                println!("certificate ok: all embedded checks pass");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Vertices {
            instance,
            cap,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let verts = liptensor::lipball::lip_ball_vertices(&inst.metric, cap)?;
            match cli.format {
                Format::Table => {
                    for v in verts.iter() {
                        let joined: Vec<String> = v.iter().map(Rat::to_string).collect();
                        println!("({})", joined.join(", "));
                    }
                }
                Format::Json => {
                    println!("{}", serde_json::json!({ "vertices": *verts }));
                }
            }
            if let Some(path) = output {
                write_out(&path, &serde_json::json!({ "vertices": *verts }).to_string())?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Norm {
            alpha,
            p,
            instance,
            molecule,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let u = parse_molecule(&read(&molecule)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", molecule.display()))?;
            let (tag, result) = match alpha {
                NormArg::Pi => ("pi", pi_norm(&u)?),
                NormArg::Eps => ("eps", eps_norm(&u, &cfg)?),
                NormArg::Dp => {
                    let p = parse_exponent(p.as_deref().ok_or_else(|| anyhow!("dp needs --p"))?)?;
                    ("dp", d_p_bounds(&u, p, &cfg)?)
                }
                NormArg::Wp => {
                    let p = parse_exponent(p.as_deref().ok_or_else(|| anyhow!("wp needs --p"))?)?;
                    ("wp", w_p_upper(&u, p, &cfg)?)
                }
            };
            print_value(cli.format, tag, &result.value);
            let cert = NormCertificate {
                norm: tag.into(),
                result,
            };
            if let Some(path) = output {
                write_out(&path, &certificate_to_json(&cert))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Lipnorm {
            alpha,
            instance,
            operator,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let f = parse_operator(&read(&operator)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", operator.display()))?;
            let alpha: Alpha = alpha.into();
            let (value, lp_certificate) = match alpha {
                Alpha::Pi => (f.lip_norm(), None),
                Alpha::Eps => {
                    let (v, lp) = liptensor::ideal::eps_dual_decomposition(&f, &cfg)?;
                    (v, Some(lp))
                }
            };
            print_scalar(cli.format, "lipnorm", &value);
            if let Some(path) = output {
                let doc = serde_json::json!({
                    "norm": "lipnorm",
                    "alpha": alpha.name(),
                    "value": value,
                    "lp_certificate": lp_certificate,
                });
                write_out(&path, &serde_json::to_string_pretty(&doc)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Summing {
            p,
            instance,
            operator,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let f = parse_operator(&read(&operator)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", operator.display()))?;
            let p = parse_exponent(&p)?;
            let cert = p_summing_norm(&f, p, &cfg)?;
            match cert.exact_value() {
                Some(v) => print_scalar(cli.format, "summing", &v),
                None => {
                    let (lo, hi) = cert.value_bounds(cfg.root_digits);
                    print_value(
                        cli.format,
                        "summing",
                        &NormValue::Interval { lower: lo, upper: hi },
                    );
                    print_scalar(cli.format, "summing-pow", &cert.value_pow);
                }
            }
            if let Some(path) = output {
                let doc = serde_json::json!({ "norm": "summing", "certificate": cert });
                write_out(&path, &serde_json::to_string_pretty(&doc)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extremal {
            alpha,
            instance,
            molecule,
            output,
        } => {
            let inst = load_instance(&instance)?;
            let u = parse_molecule(&read(&molecule)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", molecule.display()))?;
            let f = extremal_functional(&u, alpha.into(), &cfg)?;
            let attained = u.pairing(&f)?;
            print_scalar(cli.format, "attained", &attained);
            if let Some(path) = output {
                write_out(&path, &operator_to_json(&f))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Pairing {
            instance,
            molecule,
            operator,
        } => {
            let inst = load_instance(&instance)?;
            let u = parse_molecule(&read(&molecule)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", molecule.display()))?;
            let f = parse_operator(&read(&operator)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", operator.display()))?;
            let value = u.pairing(&f)?;
            print_scalar(cli.format, "pairing", &value);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Amax {
            ideal,
            instance,
            operator,
        } => {
            let inst = load_instance(&instance)?;
            let f = parse_operator(&read(&operator)?, &inst)
                .map_err(|e| anyhow!("{}: {e}", operator.display()))?;
            let kind = match ideal.as_str() {
                "lip" => IdealKind::Lip,
                other => match other.strip_prefix('p') {
                    Some(rest) => IdealKind::PSumming(parse_exponent(rest)?),
                    None => bail!("unknown ideal `{other}`: expected lip or p<exponent>"),
                },
            };
            let samples = default_subspace_samples(&inst.space);
            let best = a_max_lower_bound(&f, kind, &samples, &cfg)?;
            print_scalar(cli.format, "a-max", &best.value_pow);
            match cli.format {
                Format::Table => println!(
                    "attained at points {:?} with subspace rank {}",
                    best.points,
                    best.subspace.len()
                ),
                Format::Json => {}
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::LawSuite {
            seed,
            trials,
            max_points,
            max_dim,
            laws,
            output,
        } => {
            let law_list = match laws {
                None => LawId::default_set(),
                Some(csv) => {
                    let mut out = Vec::new();
                    for name in csv.split(',') {
                        let name = name.trim();
                        out.push(
                            LawId::parse(name)
                                .ok_or_else(|| anyhow!("unknown law `{name}`"))?,
                        );
                    }
                    out
                }
            };
            let config = LawConfig {
                seed,
                trials,
                caps: LawCaps {
                    max_points,
                    max_dim,
                },
                laws: law_list,
                norm: cfg,
            };
            let report = law_suite(&config)?;
            match cli.format {
                Format::Table => {
                    for s in &report.stats {
                        println!(
                            "{:<24} pass {:>4}  fail {:>4}  skip {:>4}",
                            s.law.name(),
                            s.passes,
                            s.fails,
                            s.skipped
                        );
                    }
                    if let Some(v) = &report.first_counterexample {
                        println!(
                            "counterexample: law {} trial {}: {} {} {} ({})",
                            v.law.name(),
                            v.trial,
                            v.broke.lhs,
                            v.broke.relation,
                            v.broke.rhs,
                            v.broke.detail
                        );
                    }
                }
                Format::Json => println!("{}", report_to_json(&report)),
            }
            if let Some(path) = output {
                write_out(&path, &report_to_json(&report))?;
            }
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Gen {
            seed,
            n_points,
            dim,
            norm,
            output,
            molecule,
            operator,
        } => {
            if n_points < 2 {
                bail!("need at least 2 points");
            }
            if dim < 1 {
                bail!("dimension must be at least 1");
            }
            let mut rng = gen::rng_for(seed);
            let metric = gen::rand_metric(&mut rng, n_points);
            let space = match norm.as_str() {
                "l1" => liptensor::PolyhedralSpace::build_space(dim, &NormSpec::L1)?,
                "linf" => liptensor::PolyhedralSpace::build_space(dim, &NormSpec::LInf)?,
                "random" => gen::rand_space(&mut rng, dim),
                other => bail!("unknown norm `{other}`: expected l1, linf or random"),
            };
            let inst = Instance::new(metric, space);
            write_out(&output, &instance_to_json(&inst))?;
            println!("wrote {}", output.display());
            if let Some(path) = molecule {
                let u = gen::rand_nonzero_molecule(&mut rng, &inst);
                write_out(&path, &molecule_to_json(&u))?;
                println!("wrote {}", path.display());
            }
            if let Some(path) = operator {
                let f = gen::rand_operator(&mut rng, &inst);
                write_out(&path, &operator_to_json(&f))?;
                println!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
