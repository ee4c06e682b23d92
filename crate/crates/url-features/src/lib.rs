//! Lexical URL analysis: component splitting, per-component character
//! statistics, address-shape detection, and the fixed 68-entry feature
//! vector consumed by the classifier.

mod credentials;
mod features;
mod ip;
mod lists;
mod parts;
mod stats;

pub use credentials::detect_credentials;
pub use features::{extract_features, feature_names, layout_hash, layout_manifest, FeatureVector, FEATURE_DIM};
pub use ip::{detect_ip, IpFlags};
pub use lists::{bundled_shorteners, bundled_tlds, is_shortened, tld_count, TokenList};
pub use parts::{decompose_url, UrlParts};
pub use stats::{char_stats, count_symbols, CharStats, SYMBOLS, SYMBOL_COUNT};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum UrlFeatureError {
    #[error("input URL is empty or whitespace-only")]
    EmptyInput,
}
