use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

use qimage::frqi::frqi_measure_recover;
use qimage::imagepipe::{bit_reassemble, bit_slice, msb_plane, save_image, tiles_2x2, BitPlane, Channel, GrayImage, Raster};
use qimage::neqr::{neqr_build, neqr_measure_recover, NeqrTile, NEQR_QUBITS};
use qimage::qbip::{cl2qu_simple, qu2cl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Technique {
    Frqi,
    Neqr,
    Qbip,
}

impl FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "frqi" => Ok(Self::Frqi),
            "neqr" => Ok(Self::Neqr),
            "qbip" => Ok(Self::Qbip),
            other => Err(format!("unknown technique `{other}`")),
        }
    }
}

impl fmt::Display for Technique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Frqi => "frqi",
            Self::Neqr => "neqr",
            Self::Qbip => "qbip",
        })
    }
}

/// Outcome of one round trip. Everything except `wall_clock_ms` is a pure
/// function of the input and the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub technique: Technique,
    pub input: String,
    pub output: String,
    pub rows: usize,
    pub cols: usize,
    pub channels: usize,
    pub seed: u64,
    /// Fraction of pixels recovered exactly. For QBIP this is taken over
    /// the MSB plane, the only plane it carries.
    pub pixel_agreement: f64,
    /// Fraction of pixels whose most significant bit survived.
    pub msb_agreement: f64,
    /// Output holds only the values 0 and 255.
    pub binarized: bool,
    pub samples_per_tile: usize,
    /// Every readout saw a basis state.
    pub cbs_integrity: bool,
    pub zero_fill: f64,
    /// NEQR only: every sample carried the input value at its position.
    pub value_consistent: Option<bool>,
    pub psnr_db: Option<f64>,
    pub gate_counts: BTreeMap<String, usize>,
    pub gate_total: usize,
    pub wall_clock_ms: f64,
}

impl ExperimentReport {
    /// The report with its timing zeroed, for determinism comparisons.
    pub fn untimed(&self) -> Self {
        Self { wall_clock_ms: 0.0, ..self.clone() }
    }
}

struct ChannelRun {
    output: GrayImage,
    agreement: f64,
    cbs_integrity: bool,
    value_consistent: Option<bool>,
    gate_counts: BTreeMap<String, usize>,
}

fn fraction(hits: usize, total: usize) -> f64 {
    hits as f64 / total as f64
}

fn exact_agreement(a: &GrayImage, b: &GrayImage) -> f64 {
    fraction(a.pixels().iter().zip(b.pixels()).filter(|(x, y)| x == y).count(), a.pixels().len())
}

fn run_frqi(image: &GrayImage, seed: u64) -> Result<ChannelRun> {
    let output = frqi_measure_recover(image, seed)?;
    Ok(ChannelRun {
        agreement: exact_agreement(image, &output),
        output,
        cbs_integrity: false,
        value_consistent: None,
        gate_counts: BTreeMap::from([("MEASURE".to_string(), image.pixels().len())]),
    })
}

fn run_neqr(image: &GrayImage, seed: u64) -> Result<ChannelRun> {
    let (output, log) = neqr_measure_recover(image, seed)?;
    let consistent = log
        .samples
        .iter()
        .all(|s| s.value == image.get(s.tile_row + s.y, s.tile_col + s.x));
    let mut gate_counts = BTreeMap::new();
    for tile in tiles_2x2(image)? {
        for (name, n) in neqr_build(&NeqrTile::from(tile)).gate_counts() {
            *gate_counts.entry(name).or_insert(0) += n;
        }
        *gate_counts.entry("MEASURE".to_string()).or_insert(0) += NEQR_QUBITS;
    }
    Ok(ChannelRun {
        agreement: exact_agreement(image, &output),
        output,
        cbs_integrity: false,
        value_consistent: Some(consistent),
        gate_counts,
    })
}

/// MSB plane through one classically controlled NOT and one readout per
/// bit, rebuilt with the lower planes left at zero.
fn run_qbip(image: &GrayImage) -> Result<ChannelRun> {
    let msb = msb_plane(image, Channel::Gray);
    let word: Vec<_> = msb.bits.iter().map(|&b| cl2qu_simple(b)).collect();
    let read = qu2cl(&word)?;
    let agreement = fraction(msb.bits.iter().zip(&read).filter(|(a, b)| a == b).count(), read.len());
    let mut planes = bit_slice(&GrayImage::filled(image.rows(), image.cols(), 0)?);
    planes[7] = BitPlane::new(image.rows(), image.cols(), read, 7, Channel::Gray)?;
    let n = image.pixels().len();
    Ok(ChannelRun {
        output: bit_reassemble(&planes)?,
        agreement,
        cbs_integrity: true,
        value_consistent: None,
        gate_counts: BTreeMap::from([("C-X".to_string(), n), ("MEASURE".to_string(), n)]),
    })
}

fn psnr(a: &GrayImage, b: &GrayImage) -> Option<f64> {
    let mse = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum::<f64>()
        / a.pixels().len() as f64;
    (mse > 0.0).then(|| 10.0 * (255.0f64.powi(2) / mse).log10())
}

/// Runs `technique` on every channel of `raster`, writes the recovered
/// image to `out_dir/<technique>.pgm` (or `.ppm`) and returns the report.
pub fn roundtrip(technique: Technique, raster: &Raster, input: &str, out_dir: &Path, seed: u64) -> Result<ExperimentReport> {
    let (rows, cols) = (raster.rows(), raster.cols());
    if rows != cols || !rows.is_power_of_two() || rows < 2 {
        bail!("{rows}x{cols} input: a power-of-two square of side at least 2 is required");
    }
    let channels = raster.channels();
    let start = Instant::now();
    let runs = channels
        .iter()
        .enumerate()
        .map(|(k, ch)| {
            let seed = seed.wrapping_add(k as u64);
            match technique {
                Technique::Frqi => run_frqi(ch, seed),
                Technique::Neqr => run_neqr(ch, seed),
                Technique::Qbip => run_qbip(ch),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let wall_clock_ms = start.elapsed().as_secs_f64() * 1e3;

    let outputs: Vec<GrayImage> = runs.iter().map(|r| r.output.clone()).collect();
    let mean = |f: &dyn Fn(usize) -> f64| (0..runs.len()).map(f).sum::<f64>() / runs.len() as f64;
    let msb_agreement = mean(&|k| {
        let (a, b) = (msb_plane(&channels[k], Channel::Gray), msb_plane(&outputs[k], Channel::Gray));
        fraction(a.bits.iter().zip(&b.bits).filter(|(x, y)| x == y).count(), a.bits.len())
    });
    let zero_fill = mean(&|k| fraction(outputs[k].pixels().iter().filter(|&&p| p == 0).count(), rows * cols));
    let mut gate_counts = BTreeMap::new();
    for r in &runs {
        for (name, n) in &r.gate_counts {
            *gate_counts.entry(name.clone()).or_insert(0) += n;
        }
    }
    let psnrs: Vec<Option<f64>> = channels.iter().zip(&outputs).map(|(a, b)| psnr(a, b)).collect();
    let psnr_db = psnrs
        .iter()
        .copied()
        .collect::<Option<Vec<f64>>>()
        .map(|v| v.iter().sum::<f64>() / v.len() as f64);

    let out_raster = match outputs.as_slice() {
        [g] => Raster::Gray(g.clone()),
        [r, g, b] => Raster::Color([r.clone(), g.clone(), b.clone()]),
        _ => bail!("unsupported channel count {}", outputs.len()),
    };
    let ext = if outputs.len() == 1 { "pgm" } else { "ppm" };
    let out_path = out_dir.join(format!("{technique}.{ext}"));
    save_image(&out_raster, &out_path)?;

    Ok(ExperimentReport {
        technique,
        input: input.to_string(),
        output: out_path.display().to_string(),
        rows,
        cols,
        channels: channels.len(),
        seed,
        pixel_agreement: mean(&|k| runs[k].agreement),
        msb_agreement,
        binarized: outputs.iter().all(|o| o.pixels().iter().all(|&p| p == 0 || p == 255)),
        samples_per_tile: match technique {
            Technique::Neqr => 1,
            Technique::Frqi | Technique::Qbip => 4,
        },
        cbs_integrity: runs.iter().all(|r| r.cbs_integrity),
        zero_fill,
        value_consistent: runs.iter().map(|r| r.value_consistent).collect::<Option<Vec<bool>>>().map(|v| v.iter().all(|&b| b)),
        psnr_db,
        gate_total: gate_counts.values().sum(),
        gate_counts,
        wall_clock_ms,
    })
}
