//! Deterministic CSV with `# key=value` metadata lines before the header.

use crate::error::{ReportError, Result};

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn parse_float(s: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| ReportError::Csv(format!("`{s}` is not a number")))
}

/// An in-memory CSV document.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvDoc {
    pub metadata: Vec<(String, String)>,
    pub header: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl CsvDoc {
    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.records {
            w.write_record(r)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| ReportError::Csv(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).expect("CSV writer emits UTF-8"));
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<CsvDoc> {
        let metadata = text
            .lines()
            .map_while(|l| l.strip_prefix('#'))
            .filter_map(|l| l.trim().split_once('='))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = r.headers()?.iter().map(str::to_string).collect();
        let records = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<std::result::Result<_, _>>()?;
        Ok(CsvDoc {
            metadata,
            header,
            records,
        })
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Checks the header against `expected`.
    pub(crate) fn expect_header(&self, expected: &[String]) -> Result<()> {
        if self.header != expected {
            return Err(ReportError::Csv(format!(
                "expected columns {}, found {}",
                expected.join(","),
                self.header.join(",")
            )));
        }
        Ok(())
    }
}
