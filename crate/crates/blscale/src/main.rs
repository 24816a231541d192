use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use blscale::pipeline::plotdata::emit_plotdata_profile;
use blscale::pipeline::table::{emit_table, TableFormat};
use blscale::pipeline::{
    analyze_parsed, batch_analyze, parse_fit_config, parse_run_file, parse_synth_spec,
    run_synth_job, BatchParams, ParsedRun, ScaleSkip,
};
use blscale::segfit::FitConfig;
use blscale::{nondimensionalize, ScaleReport, TwoLayerFit};

#[derive(Parser)]
#[command(
    name = "blscale",
    version,
    about = "Two-layer scaling-law analysis of turbulent boundary-layer velocity profiles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one run file: fit both scaling laws and report the scales.
    Analyze {
        /// Run file to analyze.
        file: PathBuf,
        /// Fit-config file (key = value lines).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write broken-line plot data to this path.
        #[arg(long)]
        plot_out: Option<PathBuf>,
    },
    /// Analyze every run file in a directory and print the batch table.
    Batch {
        /// Directory of run files.
        dir: PathBuf,
        /// Exclude runs with Re_theta below this from the aggregate.
        #[arg(long, default_value_t = 10000.0)]
        re_theta_min: f64,
        /// Exclude runs whose ln Re consistency gap exceeds this.
        #[arg(long, default_value_t = 0.03)]
        delta_max: f64,
        /// Table format.
        #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
        format: FormatArg,
        /// Fit-config file.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate synthetic run files from a spec file.
    Synth {
        /// Synth-spec file (key = value lines).
        spec: PathBuf,
        /// Output directory for the generated run files.
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FitConfig, String> {
    match path {
        None => Ok(FitConfig::default()),
        Some(p) => {
            let bytes = fs::read(p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse_fit_config(&bytes).map_err(|e| format!("{}: {e}", p.display()))
        }
    }
}

fn run(cli: Cli) -> Result<(), String> {
    match cli.command {
        Command::Analyze {
            file,
            config,
            plot_out,
        } => {
            let config = load_config(&config)?;
            let bytes = fs::read(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let parsed = parse_run_file(&bytes).map_err(|e| format!("{}: {e}", file.display()))?;
            let (fit, scales) = analyze_parsed(&parsed, &config).map_err(|e| e.to_string())?;

            print_fit(&parsed, &fit);
            if let Some(path) = plot_out {
                let profile = match &parsed {
                    ParsedRun::Dimensional(run) => nondimensionalize(run),
                    ParsedRun::WallUnits(w) => w.profile.clone(),
                };
                let text = emit_plotdata_profile(parsed.name(), &profile, &fit);
                fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            match scales {
                Ok(rep) => {
                    print_scales(&rep);
                    Ok(())
                }
                // A wall-units file without metadata has nothing more to report.
                Err(ScaleSkip::MissingMetadata) => {
                    println!("scales: skipped (no dimensional metadata)");
                    Ok(())
                }
                Err(ScaleSkip::NoInterface) => Err(format!(
                    "run '{}': no interface point; scales undefined",
                    parsed.name()
                )),
                Err(ScaleSkip::NonphysicalWallLaw) => Err(format!(
                    "run '{}': fitted wall law cannot be matched to the pipe-flow form",
                    parsed.name()
                )),
            }
        }
        Command::Batch {
            dir,
            re_theta_min,
            delta_max,
            format,
            config,
        } => {
            let config = load_config(&config)?;
            let params = BatchParams {
                re_theta_min,
                delta_max,
            };
            let summary = batch_analyze(&dir, &config, &params).map_err(|e| e.to_string())?;
            let format = match format {
                FormatArg::Tsv => TableFormat::Tsv,
                FormatArg::Json => TableFormat::Json,
            };
            print!("{}", emit_table(&summary, format));
            Ok(())
        }
        Command::Synth { spec, out } => {
            let bytes = fs::read(&spec).map_err(|e| format!("{}: {e}", spec.display()))?;
            let job = parse_synth_spec(&bytes).map_err(|e| format!("{}: {e}", spec.display()))?;
            let files = run_synth_job(&job).map_err(|e| e.to_string())?;
            fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
            for (name, contents) in &files {
                let path = out.join(name);
                fs::write(&path, contents).map_err(|e| format!("{}: {e}", path.display()))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn fmt6(x: f64) -> String {
    format!("{:.5e}", x)
}

fn print_fit(parsed: &ParsedRun, fit: &TwoLayerFit) {
    println!("run: {}", parsed.name());
    let total = match parsed {
        ParsedRun::Dimensional(run) => run.points().len(),
        ParsedRun::WallUnits(w) => w.profile.len(),
    };
    println!("points: {total}");
    println!("retained: {}", fit.n_used);
    println!(
        "eta_range: [{}, {}]",
        fmt6(fit.eta_range.0),
        fmt6(fit.eta_range.1)
    );
    println!(
        "wall_law: A = {}, alpha = {}, r2 = {}",
        fmt6(fit.wall_law.prefactor()),
        fmt6(fit.wall_law.exponent()),
        fmt6(fit.r2_wall)
    );
    println!(
        "outer_law: B = {}, beta = {}, r2 = {}",
        fmt6(fit.outer_law.prefactor()),
        fmt6(fit.outer_law.exponent()),
        fmt6(fit.r2_outer)
    );
    println!("break_index: {}", fit.break_index);
    println!("sse_total: {}", fmt6(fit.sse_total));
    match fit.eta_star {
        Some(es) => println!("eta_star: {}", fmt6(es)),
        None => println!("eta_star: -"),
    }
    if fit.flags.is_empty() {
        println!("flags: -");
    } else {
        let joined = fit
            .flags
            .iter()
            .map(|f| f.as_str())
            .collect::<Vec<_>>()
            .join(",");
        println!("flags: {joined}");
    }
}

fn print_scales(rep: &ScaleReport) {
    println!("ln_re1: {}", fmt6(rep.ln_re1));
    println!("ln_re2: {}", fmt6(rep.ln_re2));
    println!("delta: {}", fmt6(rep.delta));
    println!("ln_re: {}", fmt6(rep.ln_re_eff));
    println!("lambda: {} m", fmt6(rep.lambda_wall));
    println!("cap_lambda: {} m", fmt6(rep.lambda_cap));
    println!("lg_ratio: {}", fmt6(rep.lg_ratio));
    println!("u_star_over_u_inf: {}", fmt6(rep.u_star_over_u_inf));
}
