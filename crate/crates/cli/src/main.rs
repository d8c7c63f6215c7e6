use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use qimage::circuit::{CapabilityProfile, Circuit};
use qimage::emit::Dialect;
use qimage::imagepipe::{load_image, save_image, Raster, Synthetic};
use qimage_bench::{build_report, builtin_circuit, emit_circuit, roundtrip, teleport_test, write_json, BuiltinCircuit, Technique, GOLDEN_TILE};

#[derive(Parser)]
#[command(name = "qimage", version, about = "Quantum image representation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode an image, measure it, and write the recovered image plus a JSON report.
    Roundtrip {
        #[arg(long)]
        technique: Technique,
        /// Input PGM/PPM. Mutually exclusive with --gen.
        #[arg(long = "in", conflicts_with = "generator", required_unless_present = "generator")]
        input: Option<PathBuf>,
        /// Synthetic input: `gradient|checker|noise` followed by `NxN`.
        #[arg(long = "gen", num_args = 2, value_names = ["KIND", "NxN"])]
        generator: Option<Vec<String>>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the teleportation coupling test and write its JSON report.
    TeleportTest {
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit a circuit JSON file in a text dialect after a capability check.
    Emit {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        dialect: Dialect,
        /// Built-in profile name or path to a profile JSON file.
        #[arg(long, default_value = "permissive")]
        profile: String,
        /// Emit despite capability violations, listing them as comments.
        #[arg(long)]
        force: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate every round-trip report in a directory.
    Report {
        #[arg(long)]
        dir: PathBuf,
    },
    /// Write one of the built-in circuits as JSON.
    Circuit {
        #[arg(long)]
        kind: BuiltinCircuit,
        /// Four gray values for the NEQR-based circuits.
        #[arg(long, value_delimiter = ',')]
        tile: Option<Vec<u8>>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_side(spec: &str) -> Result<usize> {
    let (a, b) = spec.split_once(['x', 'X']).context("size must look like NxN")?;
    let (a, b): (usize, usize) = (a.parse()?, b.parse()?);
    if a != b || a == 0 {
        bail!("synthetic inputs are square, got {spec}");
    }
    Ok(a)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Roundtrip { technique, input, generator, out, seed } => {
            fs::create_dir_all(&out)?;
            let (raster, label) = match (input, generator) {
                (Some(path), _) => (load_image(&path)?, path.display().to_string()),
                (None, Some(g)) => {
                    let kind: Synthetic = g[0].parse().map_err(anyhow::Error::msg)?;
                    let side = parse_side(&g[1])?;
                    let path = out.join(format!("input-{kind}-{side}.pgm"));
                    let raster = Raster::Gray(kind.generate(side, seed));
                    save_image(&raster, &path)?;
                    (raster, path.display().to_string())
                }
                (None, None) => bail!("either --in or --gen is required"),
            };
            let report = roundtrip(technique, &raster, &label, &out, seed)?;
            write_json(&report, &out.join(format!("{technique}.json")))?;
            println!(
                "{technique}: agreement {:.4}, binarized {}, zero-fill {:.4}, {:.3} ms",
                report.pixel_agreement, report.binarized, report.zero_fill, report.wall_clock_ms
            );
            Ok(report.value_consistent != Some(false))
        }
        Command::TeleportTest { out } => {
            let outcome = teleport_test()?;
            write_json(&outcome, &out)?;
            println!(
                "teleport: destination P(1) = {:.10}, golden {}, negative control P(1) = {:.10}",
                outcome.golden.destination_p1,
                if outcome.golden.passed { "pass" } else { "FAIL" },
                outcome.negative_control.destination_p1
            );
            Ok(outcome.passed)
        }
        Command::Emit { circuit, dialect, profile, force, out } => {
            let text = fs::read_to_string(&circuit).with_context(|| format!("reading {}", circuit.display()))?;
            let circuit = Circuit::from_json(&text).context("parsing circuit JSON")?;
            let profile = CapabilityProfile::resolve(&profile)?;
            let outcome = emit_circuit(&circuit, dialect, &profile, force)?;
            for d in &outcome.diagnostics {
                eprintln!("{}: {d}", profile.name);
            }
            if let Some(t) = &outcome.text {
                match out {
                    Some(path) => fs::write(&path, t.to_text())?,
                    None => print!("{t}"),
                }
            }
            Ok(outcome.diagnostics.is_empty())
        }
        Command::Report { dir } => {
            let cmp = build_report(&dir)?;
            print!("{}", cmp.to_text());
            Ok(cmp.qbip_faster_than_neqr != Some(false))
        }
        Command::Circuit { kind, tile, out } => {
            let tile: [u8; 4] = match tile {
                Some(v) => v.try_into().map_err(|_| anyhow::anyhow!("--tile takes four values"))?,
                None => GOLDEN_TILE,
            };
            let mut json = builtin_circuit(kind, tile).to_json();
            json.push('\n');
            fs::write(&out, json)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
