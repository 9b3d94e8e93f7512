use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use wedge_stark::density::density_grid;
use wedge_stark::variational::MinimizerOptions;
use wedge_stark::{Direction, FieldConfig, Wedge};
use wedge_stark_cli::density::{write_density_csv, DensitySidecar};
use wedge_stark_cli::oracle::{run_oracle, OracleConfig};
use wedge_stark_cli::sweep::{run_sweep, write_sweep_csv, SweepSpec, PRESETS};
use wedge_stark_cli::tables::{table1, write_table1_csv, write_zeros_csv, zeros};
use wedge_stark_cli::Aperture;

/// Stark shift of the ground state in a wedge-shaped quantum box.
#[derive(Parser)]
#[command(name = "wedge-stark", version)]
struct Cli {
    /// Worker threads for sweeps and oracle batches (default: all cores).
    #[arg(long, global = true, env = "WEDGE_STARK_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zero-field ground energies for the 90 tabulated geometries.
    Table1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First Bessel zero against aperture.
    Zeros {
        #[arg(long, default_value = "pi/20")]
        min: Aperture,
        #[arg(long, default_value = "7pi/4")]
        max: Aperture,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stark shift over a grid of radii, apertures, thicknesses and fields.
    Sweep(SweepArgs),
    /// Ground-state density in the z = 0 plane; writes a JSON sidecar next to the CSV.
    Density {
        #[arg(long)]
        d: f64,
        #[arg(long)]
        theta0: Aperture,
        #[arg(long, default_value_t = 0.0)]
        f: f64,
        #[arg(long, default_value = "wide")]
        direction: Direction,
        #[arg(long, default_value_t = 128)]
        resolution: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check variational energies against the finite-difference solver.
    Oracle {
        /// JSON batch file; the built-in 12-configuration batch when omitted.
        config: Option<PathBuf>,
        /// Mesh size for every configuration, overriding the file.
        #[arg(long)]
        mesh: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Named parameter set; explicit lists below replace its entries.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
    preset: Option<String>,
    #[arg(long = "d", value_delimiter = ',')]
    radii: Vec<f64>,
    #[arg(long = "theta0", value_delimiter = ',')]
    apertures: Vec<Aperture>,
    #[arg(long = "thickness", value_delimiter = ',')]
    thicknesses: Vec<f64>,
    #[arg(long = "f", value_delimiter = ',')]
    fields: Vec<f64>,
    #[arg(long)]
    direction: Option<Direction>,
    #[arg(long)]
    tol_beta: Option<f64>,
    #[arg(long)]
    tol_energy: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn spec(self) -> anyhow::Result<SweepSpec> {
        let mut spec = match &self.preset {
            Some(name) => SweepSpec::preset(name).with_context(|| format!("unknown preset {name}"))?,
            None => SweepSpec {
                radii: Vec::new(),
                apertures: Vec::new(),
                thicknesses: vec![1.0],
                fields: Vec::new(),
                direction: Direction::TowardWide,
                options: MinimizerOptions::default(),
            },
        };
        if !self.radii.is_empty() {
            spec.radii = self.radii;
        }
        if !self.apertures.is_empty() {
            spec.apertures = self.apertures;
        }
        if !self.thicknesses.is_empty() {
            spec.thicknesses = self.thicknesses;
        }
        if !self.fields.is_empty() {
            spec.fields = self.fields;
        }
        if let Some(dir) = self.direction {
            spec.direction = dir;
        }
        if let Some(t) = self.tol_beta {
            spec.options.tol_beta = t;
        }
        if let Some(t) = self.tol_energy {
            spec.options.tol_energy = t;
        }
        if spec.radii.is_empty() || spec.apertures.is_empty() || spec.fields.is_empty() {
            bail!("sweep needs --preset or all of --d, --theta0 and --f");
        }
        Ok(spec)
    }
}

fn output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring thread pool")?;
    }
    match cli.command {
        Command::Table1 { out } => write_table1_csv(&table1()?, output(out.as_deref())?)?,
        Command::Zeros { min, max, steps, out } => write_zeros_csv(&zeros(min, max, steps)?, output(out.as_deref())?)?,
        Command::Sweep(args) => {
            let out = args.out.clone();
            let rows = run_sweep(&args.spec()?);
            write_sweep_csv(&rows, output(out.as_deref())?)?;
            let failed = rows.iter().filter(|r| r.result.is_err()).count();
            if failed > 0 {
                eprintln!("{failed} of {} rows failed; see the error column", rows.len());
            }
        }
        Command::Density { d, theta0, f, direction, resolution, out } => {
            let wedge = Wedge::new(d, theta0.radians(), 1.0)?;
            let grid = density_grid(&wedge, FieldConfig::new(f, direction)?, resolution)?;
            write_density_csv(&grid, output(Some(&out))?)?;
            let sidecar = out.with_extension("json");
            let mut w = output(Some(&sidecar))?;
            serde_json::to_writer_pretty(&mut w, &DensitySidecar::new(&grid, theta0))?;
            writeln!(w)?;
        }
        Command::Oracle { config, mesh, out } => {
            let mut config = match config {
                Some(path) => OracleConfig::from_path(&path)?,
                None => OracleConfig::default_batch(),
            };
            if let Some(m) = mesh {
                config.mesh = m;
                config.configurations.iter_mut().for_each(|c| c.mesh = None);
            }
            let summary = run_oracle(&config)?;
            let mut w = output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &summary)?;
            writeln!(w)?;
            w.flush()?;
            if let Some(i) = summary.first_violation {
                let r = &summary.results[i];
                eprintln!(
                    "bound violated for configuration {i} (d={}, theta0={}, L={}, f={}, {}): \
                     E_var={} < E_fd={} - {}",
                    r.d, r.theta0, r.thickness, r.f, r.direction, r.variational_energy, r.fd_energy, r.error_estimate
                );
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
