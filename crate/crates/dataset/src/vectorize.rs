use crate::{UrlRecord, CLASS_COUNT};
use ndarray::Array2;
use siren_url_features::{extract_features, FEATURE_DIM};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VectorizeReport {
    pub retained: usize,
    pub dropped: usize,
}

/// Turn records into an n×68 feature matrix and an n×4 one-hot label
/// matrix. Rows whose feature extraction fails are dropped and counted;
/// row order follows retained record order.
pub fn vectorize(records: &[UrlRecord]) -> (Array2<f64>, Array2<f64>, VectorizeReport) {
    let mut features: Vec<f64> = Vec::with_capacity(records.len() * FEATURE_DIM);
    let mut labels: Vec<f64> = Vec::with_capacity(records.len() * CLASS_COUNT);
    let mut report = VectorizeReport::default();

    for record in records {
        match extract_features(&record.url) {
            Ok(v) => {
                features.extend_from_slice(v.values());
                labels.extend_from_slice(&record.label.one_hot());
                report.retained += 1;
            }
            Err(_) => report.dropped += 1,
        }
    }

    let x = Array2::from_shape_vec((report.retained, FEATURE_DIM), features).expect("row-major shape");
    let y = Array2::from_shape_vec((report.retained, CLASS_COUNT), labels).expect("row-major shape");
    (x, y, report)
}
