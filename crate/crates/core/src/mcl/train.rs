use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::nn::{Scalar, PROB_FLOOR};

use super::{argmax, MclModel, Sample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    /// Stop once validation accuracy reaches this value.
    pub stop_at_val_accuracy: Option<f64>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            epochs: 500,
            batch_size: 32,
            seed: 0,
            stop_at_val_accuracy: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    /// NaN when there is no validation set.
    pub val_loss: f64,
    pub val_acc: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub epochs: Vec<EpochRecord>,
}

impl TrainingLog {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("epoch,train_loss,train_acc,val_loss,val_acc\n");
        for r in &self.epochs {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.epoch, r.train_loss, r.train_acc, r.val_loss, r.val_acc
            ));
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_csv()).map_err(|e| Error::from(e).at(path))
    }

    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<T> {
    pub log: TrainingLog,
    /// Parameters at the epoch with the best validation accuracy (lower
    /// validation loss breaks ties; training metrics stand in when there
    /// is no validation set).
    pub best: MclModel<T>,
    pub best_epoch: usize,
}

/// Counts with rows = true class, columns = predicted class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        Self {
            classes,
            counts: vec![0; classes * classes],
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn add(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.classes + predicted] += 1;
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.classes + predicted]
    }

    pub fn row_sum(&self, truth: usize) -> u64 {
        self.counts[truth * self.classes..(truth + 1) * self.classes].iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|i| self.get(i, i)).sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn accuracy(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            n => self.trace() as f64 / n as f64,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("true");
        for j in 0..self.classes {
            s.push_str(&format!(",pred_{j}"));
        }
        s.push('\n');
        for i in 0..self.classes {
            s.push_str(&i.to_string());
            for j in 0..self.classes {
                s.push_str(&format!(",{}", self.get(i, j)));
            }
            s.push('\n');
        }
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let inner = || -> Result<()> {
            let mut f = std::fs::File::create(path)?;
            f.write_all(self.to_csv().as_bytes())?;
            Ok(())
        };
        inner().map_err(|e| e.at(path))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub accuracy: f64,
    pub loss: f64,
    pub confusion: ConfusionMatrix,
    pub predictions: Vec<usize>,
}

const EVAL_CHUNK: usize = 32;

/// Argmax predictions, mean cross-entropy and confusion counts. Chunks run
/// in parallel; every sample is scored independently and results are
/// reduced in sample order, so the outcome does not depend on threading.
pub fn evaluate<T: Scalar>(model: &MclModel<T>, samples: &[Sample]) -> Result<Evaluation> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let x = model.classes();
    let labels = samples.iter().map(Sample::labeled).collect::<Result<Vec<_>>>()?;
    if let Some(&bad) = labels.iter().find(|&&l| l >= x) {
        return Err(Error::ShapeMismatch(format!("label {bad} out of {x} classes")));
    }
    let chunks: Vec<Vec<(usize, f64)>> = samples
        .par_chunks(EVAL_CHUNK)
        .zip(labels.par_chunks(EVAL_CHUNK))
        .map(|(chunk, labels)| -> Result<Vec<(usize, f64)>> {
            let refs: Vec<&Sample> = chunk.iter().collect();
            let probs = model.predict(&model.batch(&refs)?)?;
            Ok(probs
                .data()
                .chunks_exact(x)
                .zip(labels)
                .map(|(row, &l)| (argmax(row), -row[l].as_f64().max(PROB_FLOOR).ln()))
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut confusion = ConfusionMatrix::new(x);
    let mut predictions = Vec::with_capacity(samples.len());
    let mut loss = 0.0;
    for ((pred, l), &truth) in chunks.into_iter().flatten().zip(&labels) {
        confusion.add(truth, pred);
        predictions.push(pred);
        loss += l;
    }
    Ok(Evaluation {
        accuracy: confusion.accuracy(),
        loss: loss / samples.len() as f64,
        confusion,
        predictions,
    })
}

fn better(a: &EpochRecord, b: &EpochRecord, has_val: bool) -> bool {
    let (acc_a, loss_a, acc_b, loss_b) = if has_val {
        (a.val_acc, a.val_loss, b.val_acc, b.val_loss)
    } else {
        (a.train_acc, a.train_loss, b.train_acc, b.train_loss)
    };
    acc_a > acc_b || (acc_a == acc_b && loss_a < loss_b)
}

/// Mini-batch gradient descent over all three networks jointly. Each epoch
/// is one pass over a seeded shuffle of the training set.
pub fn train<T: Scalar>(
    model: &mut MclModel<T>,
    train_set: &[Sample],
    val_set: &[Sample],
    cfg: &TrainConfig,
) -> Result<TrainOutcome<T>> {
    if train_set.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if cfg.batch_size == 0 {
        return Err(Error::InvalidConfig("batch size must be positive".into()));
    }
    for s in train_set {
        let l = s.labeled()?;
        if l >= model.classes() {
            return Err(Error::ShapeMismatch(format!("label {l} out of {} classes", model.classes())));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let lr = T::lit(cfg.learning_rate);
    let x = model.classes();
    let has_val = !val_set.is_empty();
    let mut log = TrainingLog::default();
    let mut best: Option<(EpochRecord, MclModel<T>)> = None;

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let (mut loss_sum, mut correct) = (0.0, 0usize);
        for idx in order.chunks(cfg.batch_size) {
            let refs: Vec<&Sample> = idx.iter().map(|&i| &train_set[i]).collect();
            let batch = model.batch(&refs)?;
            model.zero_grad();
            let (loss, out) = model.loss_and_grad(&batch)?;
            let loss = loss.as_f64();
            if !loss.is_finite() {
                return Err(Error::DivergedLoss { epoch, loss });
            }
            loss_sum += loss * batch.len() as f64;
            correct += out
                .logits
                .data()
                .chunks_exact(x)
                .zip(&batch.labels)
                .filter(|(row, &l)| argmax(row) == l)
                .count();
            model.sgd_step(lr);
        }
        let (val_loss, val_acc) = if has_val {
            let e = evaluate(model, val_set)?;
            (e.loss, e.accuracy)
        } else {
            (f64::NAN, f64::NAN)
        };
        let record = EpochRecord {
            epoch,
            train_loss: loss_sum / train_set.len() as f64,
            train_acc: correct as f64 / train_set.len() as f64,
            val_loss,
            val_acc,
        };
        log::debug!(
            "epoch {epoch}: train loss {:.4} acc {:.3}, val loss {:.4} acc {:.3}",
            record.train_loss,
            record.train_acc,
            val_loss,
            val_acc
        );
        log.epochs.push(record);
        if best.as_ref().is_none_or(|(b, _)| better(&record, b, has_val)) {
            best = Some((record, model.clone()));
        }
        if let (Some(target), true) = (cfg.stop_at_val_accuracy, has_val) {
            if val_acc >= target {
                log::info!("validation accuracy {val_acc:.3} reached at epoch {epoch}");
                break;
            }
        }
    }
    let (best_epoch, best) = match best {
        Some((r, m)) => (r.epoch, m),
        None => (0, model.clone()),
    };
    Ok(TrainOutcome { log, best, best_epoch })
}
