use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use siegel3::checks::{find_check, run_check, run_tier, CheckConfig, CheckReport, Status};
use siegel3::conc::catalecticant::catalecticant;
use siegel3::conc::{concomitant, disc_order_along_dc, order_along_dc, Concomitant};
use siegel3::json::rat_to_string;
use siegel3::modp::DEFAULT_PRIME;
use siegel3::rep3::{plethysm_sym_sym4, WeightGL3};
use siegel3::siegel::form::FormJson;
use siegel3::siegel::gamma::{gamma_prime_quotient, PointwiseOptions, ThetaData};
use siegel3::siegel::hecke::{hecke2_eigenvalue, HeckeKind};
use siegel3::siegel::{HalfIntegralMatrix, VectorValuedForm};
use siegel3::theta3::{chi18, chi408, QKey};

#[derive(Parser)]
#[command(name = "siegel3", version, about = "Concomitants of ternary quartics and Siegel modular forms of degree 3")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Truncation box in quarter units: N or T1,T2,T3 (multiples of 4, at least 4).
    #[arg(long, global = true, env = "SIEGEL3_QORDER", default_value = "8")]
    qorder: String,
    /// Prime above 2^31 used for sampling along double conics.
    #[arg(long, global = true, env = "SIEGEL3_MODULUS", default_value_t = DEFAULT_PRIME)]
    modulus: u64,
    #[arg(long, global = true, env = "SIEGEL3_SEED", default_value_t = 11)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "SIEGEL3_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Output file; stdout if absent.
    #[arg(long, global = true, env = "SIEGEL3_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decomposition of Sym^d(Sym^4(W)) into irreducibles.
    Decompose { d: u32 },
    /// Concomitant of type (d, lambda) from the index-th highest weight vector.
    Concomitant {
        d: u32,
        /// l1,l2,l3
        lambda: String,
        #[arg(default_value_t = 0)]
        index: usize,
        /// Named combination instead of a basis element (only "catalecticant").
        #[arg(long)]
        which: Option<String>,
    },
    /// Order of vanishing along the locus of double conics.
    OrderDc {
        /// Concomitant JSON file.
        conc: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Use the discriminant (Macaulay resultant evaluation).
        #[arg(long)]
        discriminant: bool,
    },
    /// Fourier expansion of chi18 or chi_{4,0,8} from theta constants.
    Expand {
        #[arg(long)]
        form: String,
    },
    /// gamma'(c), optionally divided by chi18^m.
    GammaPrime {
        #[arg(long)]
        conc: PathBuf,
        #[arg(long, default_value_t = 0)]
        div_chi18: u32,
    },
    /// Fourier coefficient a(N) of a form, N = n11,n22,n33,2n12,2n13,2n23.
    Coeff {
        #[arg(long)]
        form: PathBuf,
        #[arg(long = "N")]
        n: String,
    },
    /// Eigenvalue of T(2) at the reference matrix of the given kind.
    Hecke2 {
        #[arg(long)]
        form: PathBuf,
        /// w408, w337 or template
        #[arg(long)]
        kind: String,
        /// Expected weight i,j,k.
        #[arg(long)]
        ijk: Option<String>,
    },
    /// Run the self-check suite up to a tier, or a single check.
    Selfcheck {
        #[arg(long, default_value_t = 1)]
        tier: u8,
        /// Run only this check id.
        #[arg(long)]
        check: Option<String>,
        /// Perturb the reference chi18 block (negative control).
        #[arg(long)]
        corrupt_chi18: bool,
    },
}

/// Errors in user input exit with 2, failed computations and checks with 1.
enum Failure {
    Check,
    Usage(anyhow::Error),
    Compute(anyhow::Error),
}

impl From<siegel3::Error> for Failure {
    fn from(e: siegel3::Error) -> Self {
        match e {
            siegel3::Error::Invalid(_)
            | siegel3::Error::Json(_)
            | siegel3::Error::NotDominant(_)
            | siegel3::Error::WeightSum { .. }
            | siegel3::Error::DegreeTooLarge { .. }
            | siegel3::Error::IndexOutOfRange { .. }
            | siegel3::Error::Truncation { .. } => Failure::Usage(e.into()),
            _ => Failure::Compute(e.into()),
        }
    }
}

fn usage<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn parse_ints(s: &str, n: usize) -> anyhow::Result<Vec<i64>> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("expected {n} comma-separated integers, got '{s}'"))?;
    if v.len() != n {
        bail!("expected {n} comma-separated integers, got '{s}'");
    }
    Ok(v)
}

/// The integral box of keys from a quarter-unit truncation.
fn qorder_box(s: &str) -> anyhow::Result<QKey> {
    let v = if s.contains(',') { parse_ints(s, 3)? } else { vec![parse_ints(s, 1)?[0]; 3] };
    let mut k = [0; 3];
    for (i, &x) in v.iter().enumerate() {
        if x < 4 || x % 4 != 0 {
            bail!("--qorder entries must be multiples of 4 and at least 4, got {x}");
        }
        k[i] = (x / 4) as i32;
    }
    Ok(k)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())).map_err(Failure::Compute),
        None => {
            let mut stdout = std::io::stdout().lock();
            match writeln!(stdout, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure::Compute(e.into())),
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Compute(e.into()))
}

fn read(p: &Path) -> Result<String, Failure> {
    usage(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
}

fn read_form(p: &Path) -> Result<VectorValuedForm, Failure> {
    let j: FormJson = usage(serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display())))?;
    Ok(VectorValuedForm::from_json(&j)?)
}

fn read_conc(p: &Path) -> Result<Concomitant, Failure> {
    Ok(Concomitant::from_json(&read(p)?)?)
}

fn print_outcome(o: &siegel3::checks::CheckOutcome) {
    let status = match o.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    };
    let mut line = format!("[{status}] {:<16} {:>7} ms  {}", o.id, o.runtime_ms, o.detail);
    if let Some(w) = &o.witness {
        line.push_str(&format!("  witness: {w}"));
    }
    eprintln!("{line}");
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    if g.workers > 0 {
        usage(rayon::ThreadPoolBuilder::new().num_threads(g.workers).build_global().map_err(|e| anyhow!(e)))?;
    }
    let cfg = CheckConfig { seed: g.seed, modulus: g.modulus, corrupt_chi18: false };
    cfg.validate()?;
    let opts = PointwiseOptions { seed: g.seed, ..PointwiseOptions::default() };
    match cli.cmd {
        Cmd::Decompose { d } => emit(&g.out, &to_json(&plethysm_sym_sym4(d)?)?),
        Cmd::Concomitant { d, lambda, index, which } => {
            let lam = usage(parse_ints(&lambda, 3))?;
            let c = match which.as_deref() {
                None => concomitant(d, &WeightGL3::new(lam[0], lam[1], lam[2]), index)?,
                Some("catalecticant") => {
                    if d != 6 || lam != [8, 8, 8] {
                        return Err(Failure::Usage(anyhow!("the catalecticant has type (6, [8,8,8])")));
                    }
                    catalecticant(g.seed)?
                }
                Some(other) => return Err(Failure::Usage(anyhow!("unknown concomitant '{other}'"))),
            };
            emit(&g.out, &c.to_json()?)
        }
        Cmd::OrderDc { conc, trials, discriminant } => {
            let v = match (discriminant, conc) {
                (true, None) => disc_order_along_dc(trials, g.seed, g.modulus)?,
                (false, Some(p)) => order_along_dc(&read_conc(&p)?, trials, g.seed, g.modulus)?,
                _ => return Err(Failure::Usage(anyhow!("give either a concomitant file or --discriminant"))),
            };
            emit(&g.out, &v.to_string())
        }
        Cmd::Expand { form } => {
            let n = usage(qorder_box(&g.qorder))?;
            let f = match form.as_str() {
                "chi18" => chi18(n)?,
                "chi408" => chi408(n)?.0,
                other => return Err(Failure::Usage(anyhow!("unknown form '{other}' (chi18 or chi408)"))),
            };
            emit(&g.out, &to_json(&f.to_json()?)?)
        }
        Cmd::GammaPrime { conc, div_chi18 } => {
            let out = usage(qorder_box(&g.qorder))?;
            let c = read_conc(&conc)?;
            let data = ThetaData::for_quotient(out, c.d, div_chi18)?;
            let f = gamma_prime_quotient(&c, &data, div_chi18, out, &opts)?;
            emit(&g.out, &to_json(&f.to_json()?)?)
        }
        Cmd::Coeff { form, n } => {
            let f = read_form(&form)?;
            let n: HalfIntegralMatrix = n.parse()?;
            let a: Vec<String> = f.fourier_coefficient(&n)?.iter().map(rat_to_string).collect();
            emit(&g.out, &to_json(&a)?)
        }
        Cmd::Hecke2 { form, kind, ijk } => {
            let f = read_form(&form)?;
            if let Some(s) = ijk {
                let w = usage(parse_ints(&s, 3))?;
                if w != f.weight {
                    return Err(Failure::Usage(anyhow!("form has weight {:?}, not {w:?}", f.weight)));
                }
            }
            let kind: HeckeKind = kind.parse()?;
            emit(&g.out, &rat_to_string(&hecke2_eigenvalue(&f, kind)?))
        }
        Cmd::Selfcheck { tier, check, corrupt_chi18 } => {
            let cfg = CheckConfig { corrupt_chi18, ..cfg };
            let report = match check {
                Some(id) => {
                    let spec = find_check(&id).ok_or_else(|| Failure::Usage(anyhow!("unknown check '{id}'")))?;
                    let o = run_check(&spec, &cfg);
                    print_outcome(&o);
                    CheckReport { tier: spec.tier, checks: vec![o] }
                }
                None => run_tier(tier, &cfg, print_outcome)?,
            };
            emit(&g.out, &to_json(&report)?)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
