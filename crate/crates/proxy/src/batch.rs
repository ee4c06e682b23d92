use crate::classify::{Classifier, ClassifyOutcome};
use crate::ProxyError;
use std::io::{BufRead, Write};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BatchReport {
    pub rows: usize,
    pub skipped_blank: usize,
}

/// One CSV row per input URL, order preserved. Unscorable URLs get the
/// class column "unscorable" with empty probabilities so downstream
/// tooling cannot mistake them for allows.
pub fn batch_check<R: BufRead, W: Write>(
    classifier: &Classifier,
    input: R,
    output: &mut W,
) -> Result<BatchReport, ProxyError> {
    writeln!(output, "url,class,p_benign,p_defacement,p_phishing,p_malware,action")?;
    let mut report = BatchReport::default();
    for line in input.lines() {
        let line = line?;
        let url = line.trim();
        if url.is_empty() {
            report.skipped_blank += 1;
            continue;
        }
        match classifier.classify_url(url) {
            ClassifyOutcome::Scored(v) => {
                let p = v.probabilities;
                writeln!(
                    output,
                    "{},{},{:.6},{:.6},{:.6},{:.6},{}",
                    csv_field(url),
                    v.class.name(),
                    p[0],
                    p[1],
                    p[2],
                    p[3],
                    match v.action {
                        crate::classify::Action::Allow => "allow",
                        crate::classify::Action::Trap => "trap",
                    }
                )?;
            }
            ClassifyOutcome::Unscorable { .. } => {
                writeln!(output, "{},unscorable,,,,,unscorable", csv_field(url))?;
            }
        }
        report.rows += 1;
    }
    Ok(report)
}

fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use siren_neuralnet::Mlp;

    #[test]
    fn rows_preserve_order_and_blanks_are_counted() {
        let classifier = Classifier::from_model(Mlp::new(4), 0.5);
        let input = "http://a.com/1\n\nhttp://b.org/2\n   \nhttp://c.net/3\n";
        let mut out = Vec::new();
        let report = batch_check(&classifier, input.as_bytes(), &mut out).unwrap();
        assert_eq!(report.rows, 3);
        assert_eq!(report.skipped_blank, 2);
        let text = String::from_utf8(out).unwrap();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows.len(), 4); // header + 3
        assert!(rows[1].starts_with("http://a.com/1,"));
        assert!(rows[2].starts_with("http://b.org/2,"));
        assert!(rows[3].starts_with("http://c.net/3,"));
        // row count + skip count = input line count
        assert_eq!(report.rows + report.skipped_blank, input.lines().count());
    }

    #[test]
    fn header_names_all_columns() {
        let classifier = Classifier::from_model(Mlp::new(4), 0.5);
        let mut out = Vec::new();
        batch_check(&classifier, &b""[..], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap().trim_end(),
            "url,class,p_benign,p_defacement,p_phishing,p_malware,action"
        );
    }
}
