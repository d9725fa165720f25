//! Command implementations behind the `mcl` binary.
//!
//! Each command reads from `data_dir` and writes to `out_dir`:
//! `simulate` writes recordings, `prepare` turns recordings into sample
//! stores, `train` turns sample stores into a checkpoint, and `eval` scores
//! a checkpoint on a sample store.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::datagen::{default_profiles, recording_seed, simulate_background, simulate_walker, WalkerProfile};
use crate::error::{Error, Result};
use crate::features::{FeatureParams, FeatureRecord, DEFAULT_FEATURE_WINDOW, DEFAULT_REL_THRESHOLD_DB};
use crate::mcl::{
    build_model, build_samples, evaluate, load_checkpoint, read_samples, save_checkpoint, train, write_samples,
    Evaluation, MclConfig, Normalization, Sample, SampleParams, TrainConfig, CHECKPOINT_MAGIC, SAMPLE_STORE_MAGIC,
};
use crate::radar_io::{
    labels_path, read_header, read_labeled_recording, write_labels, write_recording, RadarConfig, MDF_MAGIC,
};
use crate::spectrogram::{
    assemble_tds, estimate_noise_model, FftMode, NoiseModel, SpectrogramPipeline, DEFAULT_DOPPLER_CELLS,
    DEFAULT_NOISE_MARGIN,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_DIVERGED: i32 = 4;

pub const MANIFEST_FILE: &str = "manifest.csv";
pub const CALIBRATION_FILE: &str = "calibration.mdf";
pub const CHECKPOINT_FILE: &str = "best.mcl";
pub const LOG_FILE: &str = "training_log.csv";
pub const SPLITS: [&str; 3] = ["train", "val", "test"];

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err.root() {
        Error::InvalidConfig(_) => EXIT_CONFIG,
        Error::DivergedLoss { .. } => EXIT_DIVERGED,
        _ => EXIT_DATA,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RadarPreset {
    /// 8 fast-time samples, IDRad slow-time timing.
    #[default]
    Desk,
    Idrad,
}

impl RadarPreset {
    pub fn config(self) -> RadarConfig {
        match self {
            RadarPreset::Desk => RadarConfig::desk(),
            RadarPreset::Idrad => RadarConfig::idrad(),
        }
    }
}

impl FromStr for RadarPreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desk" => Ok(Self::Desk),
            "idrad" => Ok(Self::Idrad),
            _ => Err(Error::InvalidConfig(format!("unknown radar preset {s:?} (desk, idrad)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data_dir: PathBuf,
    pub out_dir: PathBuf,
    /// Defaults to `<out_dir>/best.mcl` for `train` and `<data_dir>/best.mcl` for `eval`.
    pub checkpoint: Option<PathBuf>,
    pub seed: u64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub stop_at_val_accuracy: Option<f64>,
    pub train_stride: usize,
    pub eval_stride: usize,
    pub tds_window: usize,
    pub feature_window: usize,
    pub doppler_cells: usize,
    pub rel_threshold_db: f64,
    pub noise_margin: f64,
    /// Inferred from the training labels when unset.
    pub classes: Option<usize>,
    pub eval_split: String,
    pub export_tds: bool,
    pub radar: RadarPreset,
    pub profiles: Vec<WalkerProfile>,
    pub noise_floor: f64,
    pub train_seconds: f64,
    pub val_seconds: f64,
    pub test_seconds: f64,
    pub calibration_seconds: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            data_dir: PathBuf::from("data"),
            out_dir: PathBuf::from("out"),
            checkpoint: None,
            seed: 0,
            learning_rate: 0.001,
            epochs: 500,
            batch_size: 32,
            stop_at_val_accuracy: None,
            train_stride: 15,
            eval_stride: 45,
            tds_window: 45,
            feature_window: DEFAULT_FEATURE_WINDOW,
            doppler_cells: DEFAULT_DOPPLER_CELLS,
            rel_threshold_db: DEFAULT_REL_THRESHOLD_DB,
            noise_margin: DEFAULT_NOISE_MARGIN,
            classes: None,
            eval_split: "test".into(),
            export_tds: false,
            radar: RadarPreset::Desk,
            profiles: default_profiles(),
            noise_floor: crate::datagen::DEFAULT_NOISE_FLOOR,
            train_seconds: 60.0,
            val_seconds: 30.0,
            test_seconds: 60.0,
            calibration_seconds: 10.0,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("{key}: cannot parse {value:?}")))
}

fn parse_profile(value: &str) -> Result<WalkerProfile> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::InvalidConfig(format!(
            "profile: expected `id, torso_speed, limb_doppler_amplitude, gait_frequency`, got {value:?}"
        )));
    }
    let p = WalkerProfile::new(
        parse("profile id", parts[0])?,
        parse("profile torso_speed", parts[1])?,
        parse("profile limb_doppler_amplitude", parts[2])?,
        parse("profile gait_frequency", parts[3])?,
    );
    p.validate().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(p)
}

impl RunConfig {
    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "data_dir" => self.data_dir = value.into(),
            "out_dir" => self.out_dir = value.into(),
            "checkpoint" => self.checkpoint = Some(value.into()),
            "seed" => self.seed = parse(key, value)?,
            "learning_rate" | "lr" => self.learning_rate = parse(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "batch_size" => self.batch_size = parse(key, value)?,
            "stop_at_val_accuracy" => self.stop_at_val_accuracy = Some(parse(key, value)?),
            "stride" | "train_stride" => self.train_stride = parse(key, value)?,
            "eval_stride" => self.eval_stride = parse(key, value)?,
            "tds_window" => self.tds_window = parse(key, value)?,
            "feature_window" => self.feature_window = parse(key, value)?,
            "doppler_cells" => self.doppler_cells = parse(key, value)?,
            "rel_threshold_db" => self.rel_threshold_db = parse(key, value)?,
            "noise_margin" => self.noise_margin = parse(key, value)?,
            "classes" => self.classes = Some(parse(key, value)?),
            "eval_split" => self.eval_split = value.to_string(),
            "export_tds" => self.export_tds = parse(key, value)?,
            "radar" => self.radar = value.parse()?,
            "noise_floor" => self.noise_floor = parse(key, value)?,
            "train_seconds" => self.train_seconds = parse(key, value)?,
            "val_seconds" => self.val_seconds = parse(key, value)?,
            "test_seconds" => self.test_seconds = parse(key, value)?,
            "calibration_seconds" => self.calibration_seconds = parse(key, value)?,
            _ => return Err(Error::InvalidConfig(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines on top of the current values. Blank lines
    /// and `#` comments are skipped. `profile = id, speed, amplitude, gait`
    /// may repeat; the first one replaces the default walkers.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        let mut custom_profiles = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected `key = value`", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let applied = if key == "profile" {
                parse_profile(value).map(|p| custom_profiles.push(p))
            } else {
                self.set(key, value)
            };
            applied.map_err(|e| Error::InvalidConfig(format!("line {}: {}", n + 1, e.root())))?;
        }
        if !custom_profiles.is_empty() {
            self.profiles = custom_profiles;
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return bad("learning_rate must be finite and >= 0");
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return bad("epochs and batch_size must be positive");
        }
        if self.train_stride == 0 || self.eval_stride == 0 {
            return bad("strides must be positive");
        }
        if self.tds_window == 0 || self.feature_window < 2 || self.doppler_cells == 0 {
            return bad("tds_window, doppler_cells must be positive and feature_window >= 2");
        }
        if !(self.rel_threshold_db > 0.0) || !(self.noise_margin >= 0.0) {
            return bad("rel_threshold_db must be > 0 and noise_margin >= 0");
        }
        if self.classes.is_some_and(|c| c < 2) {
            return bad("classes must be at least 2");
        }
        if !SPLITS.contains(&self.eval_split.as_str()) {
            return bad("eval_split must be train, val or test");
        }
        let durations = [self.train_seconds, self.val_seconds, self.test_seconds, self.calibration_seconds];
        if durations.iter().any(|d| !(d.is_finite() && *d > 0.0)) || !(self.noise_floor >= 0.0) {
            return bad("durations must be positive and noise_floor >= 0");
        }
        if let Some(a) = self.stop_at_val_accuracy {
            if !(0.0..=1.0).contains(&a) {
                return bad("stop_at_val_accuracy must lie in [0, 1]");
            }
        }
        Ok(())
    }

    pub fn sample_params(&self, stride: usize) -> SampleParams {
        SampleParams {
            tds_window: self.tds_window,
            feature_window: self.feature_window,
            stride,
            features: FeatureParams {
                rel_threshold_db: self.rel_threshold_db,
                ..FeatureParams::default()
            },
        }
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            batch_size: self.batch_size,
            seed: self.seed,
            stop_at_val_accuracy: self.stop_at_val_accuracy,
        }
    }
}

/// One line of `manifest.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub file: String,
    pub split: String,
    pub label: Option<u32>,
    pub frames: usize,
    pub seed: u64,
}

pub fn write_manifest(entries: &[ManifestEntry], path: &Path) -> Result<()> {
    let mut s = String::from("file,split,label,frames,seed\n");
    for e in entries {
        let label = e.label.map(|l| l.to_string()).unwrap_or_default();
        writeln!(s, "{},{},{label},{},{}", e.file, e.split, e.frames, e.seed).unwrap();
    }
    std::fs::write(path, s).map_err(|e| Error::from(e).at(path))
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).at(path))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let err = || Error::Parse(format!("{}: line {}: bad manifest row", path.display(), n + 1));
        if f.len() != 5 {
            return Err(err());
        }
        out.push(ManifestEntry {
            file: f[0].to_string(),
            split: f[1].to_string(),
            label: if f[2].is_empty() { None } else { Some(f[2].parse().map_err(|_| err())?) },
            frames: f[3].parse().map_err(|_| err())?,
            seed: f[4].parse().map_err(|_| err())?,
        });
    }
    Ok(out)
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::from(e).at(dir))
}

/// Simulates train/val/test recordings for every configured walker plus a
/// target-free calibration recording, and writes `manifest.csv`.
pub fn cmd_simulate(cfg: &RunConfig) -> Result<Vec<ManifestEntry>> {
    cfg.validate()?;
    let radar = cfg.radar.config();
    create_dir(&cfg.out_dir)?;
    let durations = [cfg.train_seconds, cfg.val_seconds, cfg.test_seconds];
    let mut jobs = Vec::new();
    for (s, split) in SPLITS.iter().enumerate() {
        for (i, p) in cfg.profiles.iter().enumerate() {
            jobs.push((*split, durations[s], *p, recording_seed(cfg.seed, s * cfg.profiles.len() + i)));
        }
    }
    let calibration_seed = recording_seed(cfg.seed, jobs.len());
    let mut entries = Vec::with_capacity(jobs.len() + 1);
    for (split, duration, profile, seed) in jobs {
        let p = profile.with_noise(cfg.noise_floor);
        let rec = simulate_walker(&p, &radar, duration, seed)?;
        let file = format!("{split}_p{}.mdf", p.id);
        let path = cfg.out_dir.join(&file);
        write_recording(&rec, &path)?;
        write_labels(&rec.labels, labels_path(&path))?;
        log::info!("wrote {} ({} frames)", path.display(), rec.len());
        entries.push(ManifestEntry {
            file,
            split: split.to_string(),
            label: Some(p.id),
            frames: rec.len(),
            seed,
        });
    }
    let bg = simulate_background(&radar, cfg.noise_floor, cfg.calibration_seconds, calibration_seed)?;
    write_recording(&bg, cfg.out_dir.join(CALIBRATION_FILE))?;
    entries.push(ManifestEntry {
        file: CALIBRATION_FILE.into(),
        split: "calibration".into(),
        label: None,
        frames: bg.len(),
        seed: calibration_seed,
    });
    write_manifest(&entries, &cfg.out_dir.join(MANIFEST_FILE))?;
    Ok(entries)
}

/// Recordings to prepare, from `manifest.csv` when present and otherwise
/// from `<split>_*.mdf` file names.
fn discover(data_dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    let manifest = data_dir.join(MANIFEST_FILE);
    if manifest.exists() {
        return Ok(read_manifest(&manifest)?
            .into_iter()
            .filter(|e| SPLITS.contains(&e.split.as_str()))
            .map(|e| (e.split, data_dir.join(e.file)))
            .collect());
    }
    let mut found = Vec::new();
    for entry in std::fs::read_dir(data_dir).map_err(|e| Error::from(e).at(data_dir))? {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if !name.ends_with(".mdf") {
            continue;
        }
        if let Some(split) = SPLITS.iter().find(|s| name.starts_with(&format!("{s}_"))) {
            found.push((split.to_string(), path));
        }
    }
    found.sort();
    Ok(found)
}

fn noise_model_for(calibration: Option<&NoiseModel>, tds_raw: &crate::spectrogram::Tds, margin: f64) -> Result<NoiseModel> {
    match calibration {
        Some(nm) if nm.bins() == tds_raw.cols() => Ok(nm.clone()),
        _ => estimate_noise_model(tds_raw, margin),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrepareSummary {
    /// `(split, recordings, samples)`
    pub splits: Vec<(String, usize, usize)>,
    pub normalization: Normalization,
}

/// Recordings to spectrograms, gait features and sample windows. Writes
/// `<split>.mcs` and `<split>_features.csv` for every split; the
/// normalization fitted on the training split goes into every store.
pub fn cmd_prepare(cfg: &RunConfig) -> Result<PrepareSummary> {
    cfg.validate()?;
    let recordings = discover(&cfg.data_dir)?;
    if recordings.iter().all(|(s, _)| s != "train") {
        return Err(Error::EmptyDataset.at(&cfg.data_dir));
    }
    create_dir(&cfg.out_dir)?;
    let calib_path = cfg.data_dir.join(CALIBRATION_FILE);
    let calibration = if calib_path.exists() {
        let rec = read_labeled_recording(&calib_path)?;
        let raw = assemble_tds(&rec.frames, &rec.config, FftMode::Strict).map_err(|e| e.at(&calib_path))?;
        Some(estimate_noise_model(&raw, cfg.noise_margin).map_err(|e| e.at(&calib_path))?)
    } else {
        None
    };
    if cfg.export_tds {
        create_dir(&cfg.out_dir.join("tds"))?;
    }
    let mut per_split: BTreeMap<&str, (usize, Vec<Sample>)> = BTreeMap::new();
    for (split, path) in &recordings {
        let rec = read_labeled_recording(path)?;
        let ctx = |e: Error| e.at(path);
        let raw = assemble_tds(&rec.frames, &rec.config, FftMode::Strict).map_err(ctx)?;
        let nm = noise_model_for(calibration.as_ref(), &raw, cfg.noise_margin).map_err(ctx)?;
        let cleaned = crate::spectrogram::denoise_tds(&raw, &nm).map_err(ctx)?;
        let tds = crate::spectrogram::remove_zero_doppler_and_crop(&cleaned, cfg.doppler_cells).map_err(ctx)?;
        if cfg.export_tds {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("recording");
            tds.write_csv(cfg.out_dir.join("tds").join(format!("{stem}.csv")))?;
            tds.write_pgm(cfg.out_dir.join("tds").join(format!("{stem}.pgm")))?;
        }
        let stride = if split == "train" { cfg.train_stride } else { cfg.eval_stride };
        let samples = build_samples(&tds, &rec.config, &rec.labels, &cfg.sample_params(stride)).map_err(ctx)?;
        log::info!("{}: {} frames -> {} samples", path.display(), rec.len(), samples.len());
        let slot = per_split.entry(split.as_str()).or_default();
        slot.0 += 1;
        slot.1.extend(samples);
    }
    let normalization = Normalization::fit(&per_split["train"].1)?;
    let mut splits = Vec::new();
    for (split, (n_rec, samples)) in &per_split {
        write_samples(samples, &normalization, cfg.out_dir.join(format!("{split}.mcs")))?;
        let records: Vec<FeatureRecord> = samples
            .iter()
            .map(|s| FeatureRecord {
                window_start_frame: s.start_frame,
                features: s.features,
                label: s.label,
            })
            .collect();
        crate::features::write_feature_csv(&records, cfg.out_dir.join(format!("{split}_features.csv")))?;
        splits.push((split.to_string(), *n_rec, samples.len()));
    }
    Ok(PrepareSummary { splits, normalization })
}

fn load_split(dir: &Path, split: &str) -> Result<(Vec<Sample>, Normalization)> {
    read_samples(dir.join(format!("{split}.mcs")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainSummary {
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub best_val_accuracy: f64,
    pub final_train_accuracy: f64,
    pub checkpoint: PathBuf,
}

/// Trains on `<data_dir>/train.mcs`, selecting on `<data_dir>/val.mcs` when
/// present. Writes the best checkpoint, the per-epoch log and `train_summary.txt`.
pub fn cmd_train(cfg: &RunConfig) -> Result<TrainSummary> {
    cfg.validate()?;
    let (train_set, normalization) = load_split(&cfg.data_dir, "train")?;
    let val_path = cfg.data_dir.join("val.mcs");
    let val_set = if val_path.exists() {
        read_samples(&val_path)?.0
    } else {
        Vec::new()
    };
    let first = train_set.first().ok_or(Error::EmptyDataset)?;
    let max_label = train_set
        .iter()
        .map(Sample::labeled)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let classes = cfg.classes.unwrap_or(max_label + 1).max(2);
    let arch = MclConfig {
        tds_rows: first.rows,
        tds_cols: first.cols,
        ..MclConfig::full(classes)
    };
    let mut model = build_model::<f32>(&arch, cfg.seed)?;
    model.normalization = normalization;
    log::info!(
        "training {} parameters on {} samples ({} validation), {classes} classes",
        model.param_count(),
        train_set.len(),
        val_set.len()
    );
    let outcome = train(&mut model, &train_set, &val_set, &cfg.train_config())?;
    create_dir(&cfg.out_dir)?;
    let checkpoint = cfg.checkpoint.clone().unwrap_or_else(|| cfg.out_dir.join(CHECKPOINT_FILE));
    save_checkpoint(&outcome.best, &checkpoint)?;
    outcome.log.write_csv(cfg.out_dir.join(LOG_FILE))?;
    let best = outcome.log.epochs.iter().find(|r| r.epoch == outcome.best_epoch);
    let last = outcome.log.last();
    let summary = TrainSummary {
        best_epoch: outcome.best_epoch,
        epochs_run: outcome.log.epochs.len(),
        best_val_accuracy: best.map_or(f64::NAN, |r| r.val_acc),
        final_train_accuracy: last.map_or(f64::NAN, |r| r.train_acc),
        checkpoint,
    };
    let text = format!(
        "best_epoch = {}\nepochs_run = {}\nbest_val_accuracy = {}\nfinal_train_accuracy = {}\ncheckpoint = {}\n",
        summary.best_epoch,
        summary.epochs_run,
        summary.best_val_accuracy,
        summary.final_train_accuracy,
        summary.checkpoint.display()
    );
    let path = cfg.out_dir.join("train_summary.txt");
    std::fs::write(&path, text).map_err(|e| Error::from(e).at(&path))?;
    Ok(summary)
}

/// Scores a checkpoint on `<data_dir>/<eval_split>.mcs`; writes
/// `confusion.csv` and `metrics.txt`.
pub fn cmd_eval(cfg: &RunConfig) -> Result<Evaluation> {
    cfg.validate()?;
    let checkpoint = cfg.checkpoint.clone().unwrap_or_else(|| cfg.data_dir.join(CHECKPOINT_FILE));
    let model = load_checkpoint::<f32>(&checkpoint)?;
    let (samples, _) = load_split(&cfg.data_dir, &cfg.eval_split)?;
    let result = evaluate(&model, &samples)?;
    create_dir(&cfg.out_dir)?;
    result.confusion.write_csv(cfg.out_dir.join("confusion.csv"))?;
    let text = format!(
        "split = {}\nsamples = {}\naccuracy = {}\nloss = {}\n",
        cfg.eval_split,
        samples.len(),
        result.accuracy,
        result.loss
    );
    let path = cfg.out_dir.join("metrics.txt");
    std::fs::write(&path, text).map_err(|e| Error::from(e).at(&path))?;
    Ok(result)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct InspectOptions {
    pub pgm: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

/// Human-readable summary of an MDF1 recording, MCL1 checkpoint or MCS1
/// sample store. For recordings the raw cropped spectrogram can be exported.
pub fn cmd_inspect(path: &Path, opts: &InspectOptions) -> Result<String> {
    let mut magic = [0u8; 4];
    {
        use std::io::Read;
        let mut f = std::fs::File::open(path).map_err(|e| Error::from(e).at(path))?;
        f.read_exact(&mut magic).map_err(|e| Error::from(e).at(path))?;
    }
    let mut s = String::new();
    if magic == MDF_MAGIC {
        let h = read_header(path)?;
        let c = &h.config;
        writeln!(s, "MDF1 recording {}", path.display()).unwrap();
        writeln!(s, "samples_per_chirp = {}", c.samples_per_chirp).unwrap();
        writeln!(s, "chirps_per_frame = {}", c.chirps_per_frame).unwrap();
        writeln!(s, "chirp_duration = {}", c.chirp_duration).unwrap();
        writeln!(s, "carrier_frequency = {}", c.carrier_frequency).unwrap();
        writeln!(s, "frames = {}", h.frame_count).unwrap();
        writeln!(s, "frame_rate = {:.4}", c.frame_rate()).unwrap();
        writeln!(s, "doppler_resolution = {:.4}", c.doppler_resolution()).unwrap();
        if opts.pgm.is_some() || opts.csv.is_some() {
            let rec = read_labeled_recording(path)?;
            let tds = SpectrogramPipeline::default()
                .run(&rec.frames, &rec.config)
                .map_err(|e| e.at(path))?;
            if let Some(p) = &opts.pgm {
                tds.write_pgm(p)?;
                writeln!(s, "wrote {} ({}x{})", p.display(), tds.rows(), tds.cols()).unwrap();
            }
            if let Some(p) = &opts.csv {
                tds.write_csv(p)?;
                writeln!(s, "wrote {}", p.display()).unwrap();
            }
        }
    } else if magic == CHECKPOINT_MAGIC {
        let m = load_checkpoint::<f32>(path)?;
        let c = &m.config;
        writeln!(s, "MCL1 checkpoint {}", path.display()).unwrap();
        writeln!(s, "classes = {}", c.classes).unwrap();
        writeln!(s, "tds_window = {}x{}", c.tds_rows, c.tds_cols).unwrap();
        writeln!(s, "conv_channels = {:?}", c.conv_channels).unwrap();
        writeln!(s, "fn1_hidden = {:?}", c.fn1_hidden).unwrap();
        writeln!(s, "fn2_hidden = {:?}", c.fn2_hidden).unwrap();
        writeln!(s, "cn = {} -> {:?} -> {}", m.cn_input_size(), c.cn_hidden, m.cn_output_size()).unwrap();
        writeln!(s, "parameters = {}", m.param_count()).unwrap();
        writeln!(s, "normalization = {:?}", m.normalization).unwrap();
        for (name, t) in m.named_params() {
            writeln!(s, "  {name} {:?}", t.shape()).unwrap();
        }
    } else if magic == SAMPLE_STORE_MAGIC {
        let (samples, norm) = read_samples(path)?;
        let mut counts: BTreeMap<Option<u32>, usize> = BTreeMap::new();
        for x in &samples {
            *counts.entry(x.label).or_default() += 1;
        }
        writeln!(s, "MCS1 sample store {}", path.display()).unwrap();
        writeln!(s, "samples = {}", samples.len()).unwrap();
        if let Some(x) = samples.first() {
            writeln!(s, "window = {}x{}", x.rows, x.cols).unwrap();
        }
        writeln!(s, "labels = {counts:?}").unwrap();
        writeln!(s, "normalization = {norm:?}").unwrap();
    } else {
        return Err(Error::BadMagic {
            expected: MDF_MAGIC,
            found: magic,
        }
        .at(path));
    }
    Ok(s)
}
