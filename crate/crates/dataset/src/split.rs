use crate::{DatasetError, UrlRecord, CLASS_COUNT};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A 3-way stratified split over record indices. Disjoint and exhaustive
/// over the input; reproducible from `seed` and `ratios`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSet {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub validation: Vec<usize>,
    pub seed: u64,
    pub ratios: [f64; 3],
}

impl SplitSet {
    pub fn save(&self, path: &Path) -> Result<(), DatasetError> {
        let json = serde_json::to_string_pretty(self).map_err(|e| DatasetError::Manifest(e.to_string()))?;
        std::fs::write(path, json).map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<SplitSet, DatasetError> {
        let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| DatasetError::Manifest(e.to_string()))
    }
}

fn indices_by_class(records: &[UrlRecord]) -> [Vec<usize>; CLASS_COUNT] {
    let mut by_class: [Vec<usize>; CLASS_COUNT] = Default::default();
    for (i, r) in records.iter().enumerate() {
        by_class[r.label.index()].push(i);
    }
    by_class
}

/// Largest-remainder apportionment of `n` items across `ratios`.
fn apportion(n: usize, ratios: &[f64]) -> Vec<usize> {
    let quotas: Vec<f64> = ratios.iter().map(|r| n as f64 * r).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..ratios.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for &i in order.iter().take(n - assigned) {
        counts[i] += 1;
    }
    counts
}

/// Seeded stratified shuffle-split into train/test/validation.
pub fn stratified_split(
    records: &[UrlRecord],
    ratios: [f64; 3],
    seed: u64,
) -> Result<SplitSet, DatasetError> {
    let sum: f64 = ratios.iter().sum();
    if ratios.iter().any(|&r| r <= 0.0) || (sum - 1.0).abs() > 1e-9 {
        return Err(DatasetError::BadRatios(ratios));
    }
    let by_class = indices_by_class(records);
    for (idx, members) in by_class.iter().enumerate() {
        if members.len() < 3 {
            return Err(DatasetError::ClassTooSmall {
                class: crate::UrlClass::from_index(idx).unwrap(),
                count: members.len(),
                needed: 3,
            });
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut split = SplitSet {
        train: Vec::new(),
        test: Vec::new(),
        validation: Vec::new(),
        seed,
        ratios,
    };
    for members in by_class {
        let mut members = members;
        members.shuffle(&mut rng);
        let counts = apportion(members.len(), &ratios);
        let (train_n, test_n) = (counts[0], counts[1]);
        split.train.extend(&members[..train_n]);
        split.test.extend(&members[train_n..train_n + test_n]);
        split.validation.extend(&members[train_n + test_n..]);
    }
    split.train.sort_unstable();
    split.test.sort_unstable();
    split.validation.sort_unstable();
    Ok(split)
}

/// Seeded stratified k-fold partition: k disjoint, exhaustive folds with
/// every class present in every fold.
pub fn stratified_kfold(
    records: &[UrlRecord],
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>, DatasetError> {
    if k < 2 {
        return Err(DatasetError::BadFoldCount(k));
    }
    let by_class = indices_by_class(records);
    for (idx, members) in by_class.iter().enumerate() {
        if members.len() < k {
            return Err(DatasetError::ClassTooSmall {
                class: crate::UrlClass::from_index(idx).unwrap(),
                count: members.len(),
                needed: k,
            });
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    for members in by_class {
        let mut members = members;
        members.shuffle(&mut rng);
        for (i, idx) in members.into_iter().enumerate() {
            folds[i % k].push(idx);
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// Seeded class-proportional subsample of `n` record indices. Returns
/// everything when `n` covers the corpus.
pub fn stratified_subsample(
    records: &[UrlRecord],
    n: usize,
    seed: u64,
) -> Result<Vec<usize>, DatasetError> {
    if n >= records.len() {
        return Ok((0..records.len()).collect());
    }
    let by_class = indices_by_class(records);
    let sizes: Vec<f64> =
        by_class.iter().map(|m| m.len() as f64 / records.len() as f64).collect();
    let counts = apportion(n, &sizes);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for (members, take) in by_class.into_iter().zip(counts) {
        let mut members = members;
        members.shuffle(&mut rng);
        out.extend(&members[..take.min(members.len())]);
    }
    out.sort_unstable();
    Ok(out)
}
