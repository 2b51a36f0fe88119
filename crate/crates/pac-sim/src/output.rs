//! Files written by the CLI: results CSV, JSON run manifest, gnuplot script
//! and list traces.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pac_core::decoder::TraceEntry;
use pac_core::sim::{write_csv, DecoderKind, Simulation, StopRule, SweepRow};
use pac_core::LlrMode;
use serde::Serialize;

use crate::CodeArgs;

#[derive(Debug, Serialize)]
pub struct CodeManifest {
    pub block_len: usize,
    pub message_len: usize,
    pub profile: String,
    pub info_set: Vec<usize>,
    pub taps: String,
    pub list_size: usize,
    pub alpha: f64,
    pub max_flips: usize,
    pub llr_mode: LlrMode,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub code: CodeManifest,
    pub decoder: DecoderKind,
    pub noiseless: bool,
    pub snr_db: Vec<f64>,
    pub stop_rule: StopRule,
    pub seed: u64,
    pub rng: &'static str,
}

impl Manifest {
    pub fn new(sim: &Simulation, args: &CodeArgs, snr_db: &[f64], stop_rule: StopRule) -> Self {
        let code = &sim.code;
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            code: CodeManifest {
                block_len: code.block_len(),
                message_len: code.message_len(),
                profile: args.profile.clone(),
                info_set: code.info_set().to_vec(),
                taps: code.taps().to_string(),
                list_size: code.list_size(),
                alpha: code.alpha(),
                max_flips: code.max_flips(),
                llr_mode: code.llr_mode(),
            },
            decoder: sim.decoder,
            noiseless: sim.noiseless,
            snr_db: snr_db.to_vec(),
            stop_rule,
            seed: args.seed,
            rng: "ChaCha8 seeded from seed, stream = trial index; StandardNormal (ziggurat)",
        }
    }

    fn label(&self) -> String {
        let name = match self.decoder {
            DecoderKind::Sc => "PAC-SC",
            DecoderKind::Scl => "PAC-SCL",
            DecoderKind::Sclf => "PAC-SCLF",
        };
        match self.decoder {
            DecoderKind::Sc => {
                format!("{name} ({},{})", self.code.block_len, self.code.message_len)
            }
            DecoderKind::Scl => format!("{name} L={}", self.code.list_size),
            DecoderKind::Sclf => {
                format!("{name} L={} T={}", self.code.list_size, self.code.max_flips)
            }
        }
    }
}

/// `results.csv` -> `results.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    serde_json::to_writer_pretty(BufWriter::new(file), manifest)?;
    Ok(())
}

pub fn write_rows(rows: &[SweepRow], path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_csv(rows, BufWriter::new(file))?;
    Ok(())
}

/// Writes `<csv stem>.gp`, plotting FER and its Wilson interval on a log axis.
pub fn write_gnuplot(csv: &Path, manifest: &Manifest) -> Result<PathBuf> {
    let path = csv.with_extension("gp");
    let data = csv
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut w = BufWriter::new(
        File::create(&path).with_context(|| format!("creating {}", path.display()))?,
    );
    writeln!(
        w,
        "# run with: gnuplot -p {}",
        path.file_name().unwrap_or_default().to_string_lossy()
    )?;
    writeln!(w, "set datafile separator ','")?;
    writeln!(w, "set logscale y")?;
    writeln!(w, "set format y '10^{{%L}}'")?;
    writeln!(w, "set grid")?;
    writeln!(w, "set xlabel 'SNR (dB)'")?;
    writeln!(w, "set ylabel 'FER'")?;
    writeln!(w, "set key bottom left")?;
    writeln!(
        w,
        "plot '{data}' skip 1 using 1:5:7:8 with yerrorlines title '{}'",
        manifest.label()
    )?;
    Ok(path)
}

pub fn write_trace(trace: &[TraceEntry], path: &Path) -> Result<()> {
    let mut w =
        BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(w, "# index kind(F=frozen,I=info) survivor_pms")?;
    for entry in trace {
        writeln!(w, "{entry}")?;
    }
    Ok(())
}
