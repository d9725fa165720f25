//! MCL1 checkpoint: little-endian header, architecture, normalization and
//! named f32 tensors.
//!
//! ```text
//! "MCL1" u32 version
//! u32 classes, u32 tds_rows, u32 tds_cols
//! 4 x (u32 n, n x u32)     conv channels, fn1/fn2/cn hidden widths
//! f64 tds_mean, f64 tds_std, 4 x f64 feature_mean, 4 x f64 feature_std
//! u32 tensor count
//! per tensor: u32 name_len, name, u32 rank, rank x u32 dims, f32 data
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::nn::Scalar;

use super::{build_model, MclConfig, MclModel, Normalization, FEATURE_COUNT};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"MCL1";
const VERSION: u32 = 1;

pub(crate) struct ByteReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> ByteReader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            Error::HeaderMismatch(format!("truncated at byte {} (wanted {n} more)", self.pos))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    pub(crate) fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let raw = self.take(n.checked_mul(4).ok_or_else(|| Error::HeaderMismatch("size overflow".into()))?)?;
        Ok(raw.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect())
    }

    pub(crate) fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }
}

fn put_u32(out: &mut Vec<u8>, v: usize) {
    out.extend_from_slice(&(v as u32).to_le_bytes());
}

fn put_list(out: &mut Vec<u8>, v: &[usize]) {
    put_u32(out, v.len());
    v.iter().for_each(|&x| put_u32(out, x));
}

pub fn encode_checkpoint<T: Scalar>(model: &MclModel<T>) -> Vec<u8> {
    let c = &model.config;
    let mut out = Vec::new();
    out.extend_from_slice(&CHECKPOINT_MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    put_u32(&mut out, c.classes);
    put_u32(&mut out, c.tds_rows);
    put_u32(&mut out, c.tds_cols);
    for list in [&c.conv_channels, &c.fn1_hidden, &c.fn2_hidden, &c.cn_hidden] {
        put_list(&mut out, list);
    }
    let n = &model.normalization;
    let scalars = [n.tds_mean, n.tds_std].into_iter().chain(n.feature_mean).chain(n.feature_std);
    for v in scalars {
        out.extend_from_slice(&v.to_le_bytes());
    }
    let params = model.named_params();
    put_u32(&mut out, params.len());
    for (name, t) in params {
        put_u32(&mut out, name.len());
        out.extend_from_slice(name.as_bytes());
        put_list(&mut out, t.shape());
        for v in t.data() {
            out.extend_from_slice(&(v.as_f64() as f32).to_le_bytes());
        }
    }
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadCheckpoint(msg.into())
}

fn read_list(r: &mut ByteReader) -> Result<Vec<usize>> {
    let n = r.u32()? as usize;
    if n > r.remaining() / 4 {
        return Err(bad(format!("list length {n} exceeds file")));
    }
    (0..n).map(|_| r.u32().map(|v| v as usize)).collect()
}

pub fn decode_checkpoint<T: Scalar>(bytes: &[u8]) -> Result<MclModel<T>> {
    let mut r = ByteReader::new(bytes);
    let magic: [u8; 4] = r.take(4).map_err(|_| bad("file too short"))?.try_into().unwrap();
    if magic != CHECKPOINT_MAGIC {
        return Err(Error::BadMagic {
            expected: CHECKPOINT_MAGIC,
            found: magic,
        });
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let classes = r.u32()? as usize;
    let tds_rows = r.u32()? as usize;
    let tds_cols = r.u32()? as usize;
    let config = MclConfig {
        classes,
        tds_rows,
        tds_cols,
        conv_channels: read_list(&mut r)?,
        fn1_hidden: read_list(&mut r)?,
        fn2_hidden: read_list(&mut r)?,
        cn_hidden: read_list(&mut r)?,
    };
    let mut normalization = Normalization {
        tds_mean: r.f64()?,
        tds_std: r.f64()?,
        ..Normalization::default()
    };
    for j in 0..FEATURE_COUNT {
        normalization.feature_mean[j] = r.f64()?;
    }
    for j in 0..FEATURE_COUNT {
        normalization.feature_std[j] = r.f64()?;
    }
    let mut model = build_model::<T>(&config, 0).map_err(|e| bad(e.to_string()))?;
    model.normalization = normalization;
    let count = r.u32()? as usize;
    let mut params = model.named_params_mut();
    if count != params.len() {
        return Err(bad(format!("{count} tensors, architecture has {}", params.len())));
    }
    for (expected, t) in params.iter_mut() {
        let len = r.u32()? as usize;
        let name = std::str::from_utf8(r.take(len)?).map_err(|_| bad("tensor name is not UTF-8"))?;
        if name != expected {
            return Err(bad(format!("expected tensor {expected}, found {name}")));
        }
        let shape = read_list(&mut r)?;
        if shape != t.shape() {
            return Err(bad(format!("{name}: shape {shape:?}, expected {:?}", t.shape())));
        }
        for (dst, v) in t.data_mut().iter_mut().zip(r.f32s(shape.iter().product())?) {
            *dst = T::lit(f64::from(v));
        }
    }
    if r.remaining() != 0 {
        return Err(bad(format!("{} trailing bytes", r.remaining())));
    }
    Ok(model)
}

pub fn save_checkpoint<T: Scalar>(model: &MclModel<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, encode_checkpoint(model)).map_err(|e| Error::from(e).at(path))
}

pub fn load_checkpoint<T: Scalar>(path: impl AsRef<Path>) -> Result<MclModel<T>> {
    let path = path.as_ref();
    let inner = || decode_checkpoint(&std::fs::read(path)?);
    inner().map_err(|e| e.at(path))
}
