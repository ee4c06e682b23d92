use crate::layers::{BatchNorm, Dense, Dropout};
use crate::model::{Mlp, DROPOUT_RATE};
use crate::NetError;
use ndarray::{Array1, Array2};
use std::io::{Read, Write};
use std::path::Path;

pub const MODEL_MAGIC: &[u8; 9] = b"SIREN-MLP";
const FORMAT_VERSION: u32 = 1;

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

struct RecordWriter {
    buf: Vec<u8>,
}

impl RecordWriter {
    fn new() -> RecordWriter {
        let mut buf = Vec::new();
        buf.extend_from_slice(MODEL_MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        buf.extend_from_slice(&siren_url_features::layout_hash().to_le_bytes());
        RecordWriter { buf }
    }

    fn record(&mut self, name: &str, shape: &[usize], values: impl Iterator<Item = f64>) {
        self.buf.extend_from_slice(&(name.len() as u32).to_le_bytes());
        self.buf.extend_from_slice(name.as_bytes());
        self.buf.extend_from_slice(&(shape.len() as u32).to_le_bytes());
        for &d in shape {
            self.buf.extend_from_slice(&(d as u32).to_le_bytes());
        }
        for v in values {
            self.buf.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }

    fn finish(mut self) -> Vec<u8> {
        let checksum = fnv1a64(&self.buf);
        self.buf.extend_from_slice(&checksum.to_le_bytes());
        self.buf
    }
}

/// Persist a model. Values are stored as row-major little-endian f32;
/// the file ends with an FNV-1a 64 checksum over all prior bytes.
pub fn save_model(model: &Mlp, path: &Path) -> Result<(), NetError> {
    let mut w = RecordWriter::new();
    w.record("norm_mean", &[model.norm_mean.len()], model.norm_mean.iter().copied());
    w.record("norm_std", &[model.norm_std.len()], model.norm_std.iter().copied());
    for (dense, idx) in [(&model.dense1, 1), (&model.dense2, 2), (&model.dense3, 3)] {
        write_dense(&mut w, dense, idx);
    }
    let bn = &model.batchnorm;
    w.record("batchnorm.gamma", &[bn.gamma.len()], bn.gamma.iter().copied());
    w.record("batchnorm.beta", &[bn.beta.len()], bn.beta.iter().copied());
    w.record("batchnorm.running_mean", &[bn.running_mean.len()], bn.running_mean.iter().copied());
    w.record("batchnorm.running_var", &[bn.running_var.len()], bn.running_var.iter().copied());
    write_dense(&mut w, &model.dense4, 4);

    let bytes = w.finish();
    let mut file = std::fs::File::create(path)?;
    file.write_all(&bytes)?;
    Ok(())
}

fn write_dense(w: &mut RecordWriter, dense: &Dense, idx: usize) {
    let (rows, cols) = dense.weights.dim();
    w.record(&format!("dense{idx}.weights"), &[rows, cols], dense.weights.iter().copied());
    w.record(&format!("dense{idx}.bias"), &[dense.bias.len()], dense.bias.iter().copied());
}

struct RecordReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> RecordReader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], NetError> {
        if self.pos + n > self.bytes.len() {
            return Err(NetError::Format("truncated model file".into()));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32(&mut self) -> Result<u32, NetError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn record(&mut self, expected_name: &str, expected_shape: &[usize]) -> Result<Vec<f64>, NetError> {
        let name_len = self.u32()? as usize;
        let name = std::str::from_utf8(self.take(name_len)?)
            .map_err(|_| NetError::Format("record name is not UTF-8".into()))?;
        if name != expected_name {
            return Err(NetError::Format(format!(
                "unexpected record {name:?} (expected {expected_name:?})"
            )));
        }
        let ndim = self.u32()? as usize;
        let mut shape = Vec::with_capacity(ndim);
        for _ in 0..ndim {
            shape.push(self.u32()? as usize);
        }
        if shape != expected_shape {
            return Err(NetError::Format(format!(
                "record {name}: shape {shape:?} does not match expected {expected_shape:?}"
            )));
        }
        let count: usize = shape.iter().product();
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            let v = f32::from_le_bytes(self.take(4)?.try_into().unwrap());
            values.push(v as f64);
        }
        Ok(values)
    }
}

/// Load a model written by `save_model`, validating magic, version,
/// feature-layout hash, shapes and checksum.
pub fn load_model(path: &Path) -> Result<Mlp, NetError> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < MODEL_MAGIC.len() + 4 + 8 + 8 {
        return Err(NetError::Format("file too short".into()));
    }
    let (body, checksum_bytes) = bytes.split_at(bytes.len() - 8);
    let stored = u64::from_le_bytes(checksum_bytes.try_into().unwrap());
    if fnv1a64(body) != stored {
        return Err(NetError::Format("checksum mismatch".into()));
    }

    let mut r = RecordReader { bytes: body, pos: 0 };
    if r.take(MODEL_MAGIC.len())? != MODEL_MAGIC {
        return Err(NetError::Format("bad magic header".into()));
    }
    let version = r.u32()?;
    if version != FORMAT_VERSION {
        return Err(NetError::Format(format!("unsupported format version {version}")));
    }
    let layout = u64::from_le_bytes(r.take(8)?.try_into().unwrap());
    if layout != siren_url_features::layout_hash() {
        return Err(NetError::Format("feature-layout hash mismatch".into()));
    }

    use crate::model::{CLASS_COUNT, HIDDEN_DIMS, INPUT_DIM};
    let [h1, h2, h3] = HIDDEN_DIMS;
    let vec1 = |v: Vec<f64>| Array1::from_vec(v);
    let mat = |v: Vec<f64>, r_: usize, c: usize| Array2::from_shape_vec((r_, c), v).unwrap();

    let norm_mean = vec1(r.record("norm_mean", &[INPUT_DIM])?);
    let norm_std = vec1(r.record("norm_std", &[INPUT_DIM])?);
    let read_dense = |r: &mut RecordReader, idx: usize, fan_in: usize, fan_out: usize| -> Result<Dense, NetError> {
        let w = r.record(&format!("dense{idx}.weights"), &[fan_in, fan_out])?;
        let b = r.record(&format!("dense{idx}.bias"), &[fan_out])?;
        Ok(Dense { weights: mat(w, fan_in, fan_out), bias: Array1::from_vec(b) })
    };
    let dense1 = read_dense(&mut r, 1, INPUT_DIM, h1)?;
    let dense2 = read_dense(&mut r, 2, h1, h2)?;
    let dense3 = read_dense(&mut r, 3, h2, h3)?;
    let gamma = vec1(r.record("batchnorm.gamma", &[h3])?);
    let beta = vec1(r.record("batchnorm.beta", &[h3])?);
    let running_mean = vec1(r.record("batchnorm.running_mean", &[h3])?);
    let running_var = vec1(r.record("batchnorm.running_var", &[h3])?);
    let dense4 = read_dense(&mut r, 4, h3, CLASS_COUNT)?;
    if r.pos != body.len() {
        return Err(NetError::Format("trailing bytes after final record".into()));
    }

    let defaults = BatchNorm::new(h3);
    Ok(Mlp {
        dense1,
        dense2,
        dense3,
        dense4,
        batchnorm: BatchNorm {
            gamma,
            beta,
            running_mean,
            running_var,
            eps: defaults.eps,
            momentum: defaults.momentum,
        },
        dropout: Dropout::new(DROPOUT_RATE),
        norm_mean,
        norm_std,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finalized_model(seed: u64) -> Mlp {
        let mut m = Mlp::new(seed);
        m.quantize_f32();
        m
    }

    #[test]
    fn round_trip_is_exact() {
        let model = finalized_model(21);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.bin");
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded, model);
    }

    #[test]
    fn corrupted_checksum_rejected() {
        let model = finalized_model(1);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.bin");
        save_model(&model, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0xFF;
        std::fs::write(&path, bytes).unwrap();
        match load_model(&path) {
            Err(NetError::Format(msg)) => assert!(msg.contains("checksum")),
            other => panic!("expected checksum error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_magic_rejected() {
        let model = finalized_model(2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.bin");
        save_model(&model, &path).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] = b'X';
        // keep the checksum consistent so only the magic is at fault
        let body_len = bytes.len() - 8;
        let sum = fnv1a64(&bytes[..body_len]);
        bytes[body_len..].copy_from_slice(&sum.to_le_bytes());
        std::fs::write(&path, bytes).unwrap();
        match load_model(&path) {
            Err(NetError::Format(msg)) => assert!(msg.contains("magic")),
            other => panic!("expected magic error, got {other:?}"),
        }
    }
}
