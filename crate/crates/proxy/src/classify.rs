use crate::ProxyError;
use serde::{Deserialize, Serialize};
use siren_dataset::UrlClass;
use siren_neuralnet::{load_model, Mlp};
use siren_url_features::{extract_features, layout_hash};
use std::path::Path;

pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Allow,
    Trap,
}

/// The scoring result for one URL.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub url: String,
    pub class: UrlClass,
    pub probabilities: [f64; 4],
    pub action: Action,
    pub model_version: String,
}

/// A URL the model cannot score is its own outcome: allowing it would
/// be unsafe and trapping it unjustified, so the caller decides.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum ClassifyOutcome {
    Scored(Verdict),
    Unscorable { url: String, reason: String },
}

/// Immutable trained model plus operating point; shareable across
/// threads once loaded.
pub struct Classifier {
    model: Mlp,
    pub threshold: f64,
    pub model_version: String,
}

impl Classifier {
    pub fn from_model(model: Mlp, threshold: f64) -> Classifier {
        let model_version = format!("mlp-68x300x200x100x4-{:016x}", layout_hash());
        Classifier { model, threshold, model_version }
    }

    pub fn from_file(path: &Path, threshold: f64) -> Result<Classifier, ProxyError> {
        Ok(Classifier::from_model(load_model(path)?, threshold))
    }

    pub fn classify_url(&self, raw: &str) -> ClassifyOutcome {
        let features = match extract_features(raw) {
            Ok(f) => f,
            Err(e) => {
                return ClassifyOutcome::Unscorable { url: raw.to_string(), reason: e.to_string() }
            }
        };
        let (probabilities, class_index) = match self.model.predict(features.as_ref()) {
            Ok(v) => v,
            Err(e) => {
                return ClassifyOutcome::Unscorable { url: raw.to_string(), reason: e.to_string() }
            }
        };
        let class = UrlClass::from_index(class_index).expect("class index in range");
        let top = probabilities[class_index];
        let action = if class != UrlClass::Benign && top >= self.threshold {
            Action::Trap
        } else {
            Action::Allow
        };
        ClassifyOutcome::Scored(Verdict {
            url: raw.to_string(),
            class,
            probabilities,
            action,
            model_version: self.model_version.clone(),
        })
    }
}
