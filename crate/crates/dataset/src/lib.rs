//! Corpus handling for the URL classifier: CSV ingestion, class
//! statistics, seeded stratified splitting, and feature/label matrices.

mod ingest;
mod split;
pub mod synthetic;
mod vectorize;

pub use ingest::{class_distribution, load_csv, save_csv, ClassDistribution, IngestReport};
pub use split::{stratified_kfold, stratified_split, stratified_subsample, SplitSet};
pub use vectorize::{vectorize, VectorizeReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The four corpus classes, in listing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UrlClass {
    Benign = 0,
    Defacement = 1,
    Phishing = 2,
    Malware = 3,
}

pub const CLASS_COUNT: usize = 4;

impl UrlClass {
    pub const ALL: [UrlClass; CLASS_COUNT] =
        [UrlClass::Benign, UrlClass::Defacement, UrlClass::Phishing, UrlClass::Malware];

    pub fn from_label(label: &str) -> Option<UrlClass> {
        match label.trim().to_ascii_lowercase().as_str() {
            "benign" => Some(UrlClass::Benign),
            "defacement" => Some(UrlClass::Defacement),
            "phishing" => Some(UrlClass::Phishing),
            "malware" => Some(UrlClass::Malware),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(idx: usize) -> Option<UrlClass> {
        UrlClass::ALL.get(idx).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            UrlClass::Benign => "benign",
            UrlClass::Defacement => "defacement",
            UrlClass::Phishing => "phishing",
            UrlClass::Malware => "malware",
        }
    }

    pub fn one_hot(self) -> [f64; CLASS_COUNT] {
        let mut v = [0.0; CLASS_COUNT];
        v[self.index()] = 1.0;
        v
    }
}

impl std::fmt::Display for UrlClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrlRecord {
    pub url: String,
    pub label: UrlClass,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),
    #[error("missing required column {0:?} (need a url column and a type column)")]
    MissingColumn(&'static str),
    #[error("no usable rows after filtering")]
    EmptyDataset,
    #[error("split ratios must be positive and sum to 1 (got {0:?})")]
    BadRatios([f64; 3]),
    #[error("class {class} has only {count} records; need at least {needed}")]
    ClassTooSmall { class: UrlClass, count: usize, needed: usize },
    #[error("k must be at least 2 (got {0})")]
    BadFoldCount(usize),
    #[error("manifest error: {0}")]
    Manifest(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_mapping_follows_listing_order() {
        assert_eq!(UrlClass::from_label("Benign"), Some(UrlClass::Benign));
        assert_eq!(UrlClass::from_label(" phishing "), Some(UrlClass::Phishing));
        assert_eq!(UrlClass::from_label("unknown"), None);
        assert_eq!(UrlClass::Benign.index(), 0);
        assert_eq!(UrlClass::Malware.index(), 3);
    }

    #[test]
    fn one_hot_has_single_one() {
        for class in UrlClass::ALL {
            let v = class.one_hot();
            assert_eq!(v.iter().sum::<f64>(), 1.0);
            assert_eq!(v[class.index()], 1.0);
        }
    }
}
