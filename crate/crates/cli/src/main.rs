use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use velojet::{
    extract, orbit_equal, prolong, transform_grassmann, transform_velocity, ChartJet, JetError,
    Rational, Tolerance,
};
use velojet_cli::checks;
use velojet_cli::doc::{DocKind, JetDocument};
use velojet_cli::error::CliError;
use velojet_cli::random::Sampler;
use velojet_cli::wire::{ScalarMode, WireScalar};

/// Jets of maps into a fibered manifold: group arithmetic, invariants and
/// chart changes on JSON documents.
#[derive(Parser)]
#[command(name = "velojet", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Arithmetic used for the computation.
    #[arg(long, global = true, value_enum, default_value_t = ScalarMode::Rational)]
    scalar: ScalarMode,
    /// Zero threshold in float mode.
    #[arg(long, global = true, default_value_t = Tolerance::default().0)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Velocity,
    Group,
}

#[derive(Subcommand)]
enum Command {
    /// Grassmann coordinates of a regular velocity, with the chart used.
    Invariants {
        velocity: String,
    },
    /// Product a∘b of two group jets.
    Compose {
        a: String,
        b: String,
    },
    Invert {
        group: String,
    },
    /// Right action of a group jet on a velocity.
    Act {
        velocity: String,
        group: String,
    },
    /// Whether two velocities lie in one orbit, with a transporter if so.
    OrbitCheck {
        a: String,
        b: String,
    },
    /// Apply a chart jet or polynomial map to a velocity or Grassmann point.
    Transform {
        chart: String,
        target: String,
        /// Target chart of a Grassmann point, 1-based; defaults to the
        /// source chart.
        #[arg(long, value_delimiter = ',')]
        nu: Option<Vec<usize>>,
    },
    /// Velocity of a polynomial map at a point.
    Prolong {
        map: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<String>,
        #[arg(long)]
        order: usize,
    },
    /// Seeded regular velocity or invertible group jet.
    Random {
        #[arg(long, value_enum)]
        kind: RandomKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
    /// Number of Grassmann coordinates, m·C(n+r, n) + n.
    Dim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
    },
    /// Run the acceptance suite.
    Selftest,
}

#[derive(Serialize)]
struct OrbitOutput {
    equal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transporter: Option<JetDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn read_input(path: &str) -> Result<JetDocument, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?
    };
    JetDocument::parse(&text)
}

fn one_based(nu: &[usize]) -> Vec<usize> {
    nu.iter().map(|k| k + 1).collect()
}

fn zero_based(nu: &[usize]) -> Result<Vec<usize>, CliError> {
    nu.iter()
        .map(|&k| {
            k.checked_sub(1)
                .ok_or_else(|| CliError::Parse("chart entries are 1-based".into()))
        })
        .collect()
}

fn chart_for<S: WireScalar>(
    doc: &JetDocument,
    base: Vec<S>,
    r: usize,
) -> Result<ChartJet<S>, CliError> {
    match doc.kind {
        DocKind::Chart => Ok(doc.to_chart()?),
        DocKind::Polymap => Ok(ChartJet::from_polymap(&doc.to_polymap()?, base, r)?),
        other => Err(CliError::Parse(format!(
            "expected a chart or polymap document, got {other:?}"
        ))),
    }
}

fn execute<S: WireScalar>(command: &Command, global: &Global) -> Result<String, CliError> {
    let tol = Tolerance(global.tol);
    Ok(match command {
        Command::Invariants { velocity } => {
            let v = read_input(velocity)?.to_velocity::<S>()?;
            JetDocument::from_grassmann(&extract(&v, tol)?).to_json()
        }
        Command::Compose { a, b } => {
            let a = read_input(a)?.to_group::<S>()?;
            let b = read_input(b)?.to_group::<S>()?;
            JetDocument::from_group(&a.compose(&b)?).to_json()
        }
        Command::Invert { group } => {
            JetDocument::from_group(&read_input(group)?.to_group::<S>()?.inverse()?).to_json()
        }
        Command::Act { velocity, group } => {
            let v = read_input(velocity)?.to_velocity::<S>()?;
            let g = read_input(group)?.to_group::<S>()?;
            JetDocument::from_velocity(&v.act(&g)?).to_json()
        }
        Command::OrbitCheck { a, b } => {
            let a = read_input(a)?.to_velocity::<S>()?;
            let b = read_input(b)?.to_velocity::<S>()?;
            let verdict = orbit_equal(&a, &b, tol)?;
            let out = OrbitOutput {
                equal: verdict.equal,
                nu: verdict.nu.as_deref().map(one_based),
                transporter: verdict.transporter.as_ref().map(JetDocument::from_group),
                note: verdict.note,
            };
            serde_json::to_string(&out)?
        }
        Command::Transform { chart, target, nu } => {
            let chart_doc = read_input(chart)?;
            let target = read_input(target)?;
            match target.kind {
                DocKind::Velocity => {
                    let v = target.to_velocity::<S>()?;
                    let chart = chart_for(&chart_doc, v.base(), v.order())?;
                    JetDocument::from_velocity(&transform_velocity(&chart, &v, tol)?).to_json()
                }
                DocKind::Grassmann => {
                    let p = target.to_grassmann::<S>()?;
                    let chart = chart_for(&chart_doc, p.lift().base(), p.order())?;
                    let nu = nu.as_deref().map(zero_based).transpose()?;
                    JetDocument::from_grassmann(&transform_grassmann(
                        &chart,
                        &p,
                        nu.as_deref(),
                        tol,
                    )?)
                    .to_json()
                }
                other => {
                    return Err(CliError::Parse(format!(
                        "expected a velocity or grassmann document, got {other:?}"
                    )))
                }
            }
        }
        Command::Prolong { map, at, order } => {
            let map = read_input(map)?.to_polymap::<S>()?;
            let t = at
                .iter()
                .map(|x| S::parse_wire(x.trim(), global.scalar))
                .collect::<Result<Vec<S>, _>>()?;
            JetDocument::from_velocity(&prolong(&map, &t, *order)?).to_json()
        }
        Command::Random { kind, n, m, r } => {
            if *n == 0 || *r == 0 || (matches!(kind, RandomKind::Velocity) && *m == 0) {
                return Err(
                    JetError::DimensionMismatch("n, m and r must be positive".into()).into(),
                );
            }
            let mut sampler = Sampler::new(global.seed);
            match kind {
                RandomKind::Velocity => {
                    JetDocument::from_velocity(&sampler.velocity::<S>(*n, *m, *r)).to_json()
                }
                RandomKind::Group => JetDocument::from_group(&sampler.group::<S>(*n, *r)).to_json(),
            }
        }
        Command::Dim { n, m, r } => velojet::grassmann_dim(*n, *m, *r).to_string(),
        Command::Selftest => unreachable!("handled before dispatch"),
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "{text}")?;
            Ok(())
        }
    }
}

fn selftest(global: &Global) -> Result<bool, CliError> {
    let reports = checks::run_all(global.seed);
    let mut lines: Vec<String> = reports.iter().map(ToString::to_string).collect();
    lines.push("dilation report:".into());
    lines.extend(
        checks::nonextendability_table()?
            .into_iter()
            .map(|l| format!("  {l}")),
    );
    emit(&lines.join("\n"), global.out.as_ref())?;
    Ok(reports.iter().all(|r| r.passed))
}

fn fail(e: &CliError) -> ExitCode {
    let diagnostic = serde_json::to_string(&e.diagnostic()).expect("diagnostics serialize");
    eprintln!("{diagnostic}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return fail(&CliError::Parse(
                e.render().to_string().trim_end().to_string(),
            ))
        }
    };
    if let Command::Selftest = cli.command {
        return match selftest(&cli.global) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(3),
            Err(e) => fail(&e),
        };
    }
    let result = match cli.global.scalar {
        ScalarMode::Rational => execute::<Rational>(&cli.command, &cli.global),
        ScalarMode::Float => execute::<f64>(&cli.command, &cli.global),
    };
    match result.and_then(|text| emit(&text, cli.global.out.as_ref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}
