use crate::primes::nearest_prime;
use crate::RsaError;
use chrono::NaiveDate;
use rand::Rng;

const MAX_ZERO_DELTA_REDRAWS: usize = 16;

/// One day's temperature extremes for a city, in Kelvin.
#[derive(Debug, Clone, PartialEq)]
pub struct WeatherObservation {
    pub city_name: String,
    pub temp_min: f64,
    pub temp_max: f64,
    pub observed_date: NaiveDate,
}

impl WeatherObservation {
    pub fn delta(&self) -> f64 {
        self.temp_max - self.temp_min
    }
}

/// Source of per-city observations. Indices are 1-based to match the
/// "between 1 and the total number of cities" draw.
pub trait EntropyProvider {
    fn city_count(&self) -> usize;
    fn observe(&self, index: usize) -> Result<WeatherObservation, RsaError>;
}

/// Fixed observations loaded from a fixture file, one record per line:
/// `city,temp_min,temp_max,date`. Blank lines and `#` comments skipped.
#[derive(Debug, Clone)]
pub struct FixtureProvider {
    observations: Vec<WeatherObservation>,
}

impl FixtureProvider {
    pub fn parse(text: &str) -> Result<FixtureProvider, RsaError> {
        let mut observations = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |what: &str| {
                RsaError::KeyFile(format!("fixture line {}: {what}", lineno + 1))
            };
            if fields.len() != 4 {
                return Err(bad("expected city,temp_min,temp_max,date"));
            }
            let temp_min: f64 = fields[1].parse().map_err(|_| bad("bad temp_min"))?;
            let temp_max: f64 = fields[2].parse().map_err(|_| bad("bad temp_max"))?;
            let observed_date = NaiveDate::parse_from_str(fields[3], "%Y-%m-%d")
                .map_err(|_| bad("bad date"))?;
            if !(temp_min > 0.0) || temp_max < temp_min {
                return Err(bad("temperatures must be positive with max >= min"));
            }
            observations.push(WeatherObservation {
                city_name: fields[0].to_string(),
                temp_min,
                temp_max,
                observed_date,
            });
        }
        if observations.len() < 2 {
            return Err(RsaError::KeyFile("fixture needs at least 2 cities".into()));
        }
        Ok(FixtureProvider { observations })
    }

    pub fn from_file(path: &std::path::Path) -> Result<FixtureProvider, RsaError> {
        FixtureProvider::parse(&std::fs::read_to_string(path)?)
    }

    /// The 20-city fixture shipped with the crate.
    pub fn bundled() -> FixtureProvider {
        FixtureProvider::parse(include_str!("../data/cities.txt"))
            .expect("bundled fixture is well formed")
    }
}

impl EntropyProvider for FixtureProvider {
    fn city_count(&self) -> usize {
        self.observations.len()
    }

    fn observe(&self, index: usize) -> Result<WeatherObservation, RsaError> {
        if index < 1 || index > self.observations.len() {
            return Err(RsaError::BadCityIndex { index, count: self.observations.len() });
        }
        Ok(self.observations[index - 1].clone())
    }
}

/// Draws a city, scales its temperature delta by `x`, and snaps to the
/// nearest prime. Zero deltas are redrawn up to 16 times.
pub fn derive_prime<P: EntropyProvider, R: Rng>(
    provider: &P,
    rng: &mut R,
    x: u64,
) -> Result<u64, RsaError> {
    if x < 1 {
        return Err(RsaError::BadMultiplier);
    }
    let count = provider.city_count();
    for attempt in 0..=MAX_ZERO_DELTA_REDRAWS {
        let index = rng.random_range(1..=count);
        let obs = provider.observe(index)?;
        let value = (obs.delta() * x as f64).round();
        if value <= 0.0 {
            if attempt == MAX_ZERO_DELTA_REDRAWS {
                break;
            }
            continue;
        }
        return Ok(nearest_prime(value as u64));
    }
    Err(RsaError::EntropyExhausted(MAX_ZERO_DELTA_REDRAWS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn single_delta_provider(delta: f64) -> FixtureProvider {
        let text = format!(
            "a,290.0,{},2026-08-01\nb,290.0,{},2026-08-01\n",
            290.0 + delta,
            290.0 + delta
        );
        FixtureProvider::parse(&text).unwrap()
    }

    #[test]
    fn delta_7_3_at_x_1000_gives_7297() {
        let provider = single_delta_provider(7.3);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert_eq!(derive_prime(&provider, &mut rng, 1000).unwrap(), 7297);
    }

    #[test]
    fn zero_delta_everywhere_exhausts() {
        let provider = single_delta_provider(0.0);
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert!(matches!(
            derive_prime(&provider, &mut rng, 1000),
            Err(RsaError::EntropyExhausted(16))
        ));
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let provider = FixtureProvider::bundled();
        let a = derive_prime(&provider, &mut ChaCha20Rng::seed_from_u64(5), 10_000).unwrap();
        let b = derive_prime(&provider, &mut ChaCha20Rng::seed_from_u64(5), 10_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bundled_fixture_has_20_cities() {
        let provider = FixtureProvider::bundled();
        assert_eq!(provider.city_count(), 20);
        for i in 1..=20 {
            let obs = provider.observe(i).unwrap();
            assert!(obs.temp_max >= obs.temp_min);
            assert!(obs.temp_min > 0.0);
            assert!(obs.delta() > 0.0, "fixture deltas must be nonzero");
        }
    }

    #[test]
    fn index_bounds_enforced() {
        let provider = FixtureProvider::bundled();
        assert!(matches!(provider.observe(0), Err(RsaError::BadCityIndex { .. })));
        assert!(matches!(provider.observe(21), Err(RsaError::BadCityIndex { .. })));
    }

    #[test]
    fn malformed_fixture_lines_rejected() {
        assert!(FixtureProvider::parse("just-a-city\n").is_err());
        assert!(FixtureProvider::parse("a,x,300,2026-01-01\nb,290,300,2026-01-01\n").is_err());
        assert!(FixtureProvider::parse("a,300,290,2026-01-01\nb,290,300,2026-01-01\n").is_err());
        assert!(FixtureProvider::parse("a,290,300,2026-01-01\n").is_err());
    }
}
