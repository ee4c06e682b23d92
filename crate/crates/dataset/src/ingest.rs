use crate::{DatasetError, UrlClass, UrlRecord, CLASS_COUNT};
use std::collections::HashSet;
use std::path::Path;

/// What happened during ingestion: how many rows survived and why the
/// rest were dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub retained: usize,
    pub dropped_blank_url: usize,
    pub dropped_unknown_label: usize,
    pub dropped_duplicate: usize,
}

impl IngestReport {
    pub fn total_rows(&self) -> usize {
        self.retained + self.dropped_blank_url + self.dropped_unknown_label + self.dropped_duplicate
    }
}

/// Load the corpus CSV. Column names are matched case-insensitively
/// against `url` and `type`; rows with blank URLs or unknown labels are
/// dropped and counted, and exact-duplicate URLs are deduplicated.
pub fn load_csv(path: &Path) -> Result<(Vec<UrlRecord>, IngestReport), DatasetError> {
    let file = std::fs::File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);

    let headers = reader.headers()?.clone();
    let url_col = find_column(&headers, "url").ok_or(DatasetError::MissingColumn("url"))?;
    let type_col = find_column(&headers, "type").ok_or(DatasetError::MissingColumn("type"))?;

    let mut records = Vec::new();
    let mut report = IngestReport::default();
    let mut seen: HashSet<String> = HashSet::new();

    for row in reader.records() {
        let row = row?;
        let url = row.get(url_col).unwrap_or("").trim();
        let label = row.get(type_col).unwrap_or("");
        if url.is_empty() {
            report.dropped_blank_url += 1;
            continue;
        }
        let Some(label) = UrlClass::from_label(label) else {
            report.dropped_unknown_label += 1;
            continue;
        };
        if !seen.insert(url.to_string()) {
            report.dropped_duplicate += 1;
            continue;
        }
        records.push(UrlRecord { url: url.to_string(), label });
    }

    if records.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    report.retained = records.len();
    Ok((records, report))
}

/// Write records back out in the ingestion schema.
pub fn save_csv(path: &Path, records: &[UrlRecord]) -> Result<(), DatasetError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["url", "type"])?;
    for r in records {
        writer.write_record([r.url.as_str(), r.label.name()])?;
    }
    writer.flush().map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}

fn find_column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

#[derive(Debug, Clone)]
pub struct ClassDistribution {
    pub counts: [usize; CLASS_COUNT],
    pub fractions: [f64; CLASS_COUNT],
    pub total: usize,
}

impl ClassDistribution {
    pub fn majority_class(&self) -> UrlClass {
        let idx = self
            .counts
            .iter()
            .enumerate()
            .max_by_key(|(_, &c)| c)
            .map(|(i, _)| i)
            .unwrap_or(0);
        UrlClass::from_index(idx).unwrap()
    }
}

/// Per-class counts and fractions over a non-empty record list.
pub fn class_distribution(records: &[UrlRecord]) -> Result<ClassDistribution, DatasetError> {
    if records.is_empty() {
        return Err(DatasetError::EmptyDataset);
    }
    let mut counts = [0usize; CLASS_COUNT];
    for r in records {
        counts[r.label.index()] += 1;
    }
    let total = records.len();
    let fractions = counts.map(|c| c as f64 / total as f64);
    Ok(ClassDistribution { counts, fractions, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn fixture_with_blank_row() {
        let f = write_csv("url,type\nhttp://good.com,benign\nhttp://bad.com/x,phishing\n,malware\n");
        let (records, report) = load_csv(f.path()).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(report.retained, 2);
        assert_eq!(report.dropped_blank_url, 1);
    }

    #[test]
    fn missing_type_column_errors() {
        let f = write_csv("url,category\nhttp://a.com,benign\n");
        assert!(matches!(load_csv(f.path()), Err(DatasetError::MissingColumn("type"))));
    }

    #[test]
    fn missing_file_errors() {
        assert!(matches!(
            load_csv(Path::new("/nonexistent/corpus.csv")),
            Err(DatasetError::Io { .. })
        ));
    }

    #[test]
    fn duplicates_and_unknown_labels_dropped() {
        let f = write_csv(
            "URL,Type\nhttp://a.com,benign\nhttp://a.com,benign\nhttp://b.com,weird\nhttp://c.com,malware\n",
        );
        let (records, report) = load_csv(f.path()).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(report.dropped_duplicate, 1);
        assert_eq!(report.dropped_unknown_label, 1);
        assert_eq!(report.total_rows(), 4);
    }

    #[test]
    fn distribution_four_even_classes() {
        let records: Vec<UrlRecord> = UrlClass::ALL
            .iter()
            .map(|&label| UrlRecord { url: format!("http://{}.com", label.name()), label })
            .collect();
        let dist = class_distribution(&records).unwrap();
        assert_eq!(dist.counts, [1, 1, 1, 1]);
        for f in dist.fractions {
            assert!((f - 0.25).abs() < 1e-12);
        }
        assert!((dist.fractions.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn empty_distribution_errors() {
        assert!(class_distribution(&[]).is_err());
    }

    #[test]
    fn save_load_round_trip() {
        let records = vec![
            UrlRecord { url: "http://a.com".into(), label: UrlClass::Benign },
            UrlRecord { url: "http://b.com/x,y".into(), label: UrlClass::Phishing },
        ];
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        save_csv(&path, &records).unwrap();
        let (loaded, _) = load_csv(&path).unwrap();
        assert_eq!(loaded, records);
    }
}
