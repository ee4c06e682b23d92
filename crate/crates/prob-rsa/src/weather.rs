use crate::entropy::{EntropyProvider, WeatherObservation};
use crate::RsaError;
use chrono::{NaiveDate, Utc};
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WeatherError {
    #[error("weather request failed: {0}")]
    Http(String),
    #[error("weather API rejected the key (HTTP 401)")]
    Auth,
    #[error("weather API quota exceeded (HTTP 429)")]
    Quota,
    #[error("unparseable weather payload: {0}")]
    Parse(String),
}

/// Extracts an observation from a current-weather JSON payload. The
/// payload carries Kelvin when requested with units=standard.
pub fn parse_current_weather(
    body: &str,
    date: NaiveDate,
) -> Result<WeatherObservation, WeatherError> {
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| WeatherError::Parse(e.to_string()))?;
    let field = |path: &str| -> Result<f64, WeatherError> {
        value
            .pointer(path)
            .and_then(serde_json::Value::as_f64)
            .ok_or_else(|| WeatherError::Parse(format!("missing field {path}")))
    };
    let temp_min = field("/main/temp_min")?;
    let temp_max = field("/main/temp_max")?;
    let city_name = value
        .pointer("/name")
        .and_then(serde_json::Value::as_str)
        .ok_or_else(|| WeatherError::Parse("missing field /name".into()))?
        .to_string();
    if !(temp_min > 0.0) || temp_max < temp_min {
        return Err(WeatherError::Parse(format!(
            "implausible Kelvin range {temp_min}..{temp_max}"
        )));
    }
    Ok(WeatherObservation { city_name, temp_min, temp_max, observed_date: date })
}

/// Fetches one city's current weather. Uses plain HTTP; the endpoint
/// serves the same payload on both schemes and this client stays TLS-free.
pub fn fetch_weather(city_name: &str, api_key: &str) -> Result<WeatherObservation, WeatherError> {
    let url = format!(
        "http://api.openweathermap.org/data/2.5/weather?q={}&appid={}&units=standard",
        city_name, api_key
    );
    let response = reqwest::blocking::get(&url).map_err(|e| WeatherError::Http(e.to_string()))?;
    if let Some(err) = status_error(response.status().as_u16()) {
        return Err(err);
    }
    let body = response.text().map_err(|e| WeatherError::Http(e.to_string()))?;
    parse_current_weather(&body, Utc::now().date_naive())
}

/// Maps a non-success HTTP status to its typed error.
pub(crate) fn status_error(code: u16) -> Option<WeatherError> {
    match code {
        200 => None,
        401 => Some(WeatherError::Auth),
        429 => Some(WeatherError::Quota),
        other => Some(WeatherError::Http(format!("HTTP {other}"))),
    }
}

/// Live entropy source over a fixed city list. Observations are cached
/// per (city, date) so repeated key generations stay within API quota.
pub struct LiveProvider {
    cities: Vec<String>,
    api_key: String,
    cache: Mutex<HashMap<(String, NaiveDate), WeatherObservation>>,
}

impl LiveProvider {
    pub fn new(cities: Vec<String>, api_key: String) -> Result<LiveProvider, RsaError> {
        if cities.len() < 2 {
            return Err(RsaError::KeyFile("live provider needs at least 2 cities".into()));
        }
        Ok(LiveProvider { cities, api_key, cache: Mutex::new(HashMap::new()) })
    }
}

impl EntropyProvider for LiveProvider {
    fn city_count(&self) -> usize {
        self.cities.len()
    }

    fn observe(&self, index: usize) -> Result<WeatherObservation, RsaError> {
        if index < 1 || index > self.cities.len() {
            return Err(RsaError::BadCityIndex { index, count: self.cities.len() });
        }
        let city = &self.cities[index - 1];
        let today = Utc::now().date_naive();
        let key = (city.clone(), today);
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some(hit) = cache.get(&key) {
            return Ok(hit.clone());
        }
        let obs = fetch_weather(city, &self.api_key)?;
        cache.insert(key, obs.clone());
        Ok(obs)
    }
}
