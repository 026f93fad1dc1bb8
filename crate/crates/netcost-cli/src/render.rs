//! Deterministic table and CSV rendering.
//!
//! CSV output is byte-stable for identical inputs; table column widths are
//! derived from content only, never from locale or terminal state.

use crate::args::OutputFormat;

/// A rendered result: column headers plus rows of preformatted cells.
#[derive(Debug, Clone)]
pub struct Report {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(headers: &[&str]) -> Self {
        Self {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Convenience for two-column field/value reports.
    pub fn kv(&mut self, field: &str, value: impl Into<String>) {
        self.push(vec![field.to_string(), value.into()]);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Table => self.to_table(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn to_table(&self) -> String {
        let cols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        let mut line = |cells: &[String]| {
            let mut parts = Vec::with_capacity(cols);
            for (i, cell) in cells.iter().enumerate() {
                if i == 0 {
                    parts.push(format!("{:<width$}", cell, width = widths[i]));
                } else {
                    parts.push(format!("{:>width$}", cell, width = widths[i]));
                }
            }
            out.push_str(parts.join("  ").trim_end());
            out.push('\n');
        };
        line(&self.headers);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(&rule);
        for row in &self.rows {
            line(row);
        }
        out
    }
}

/// Currency with exactly two decimals, round-half-even.
pub fn currency(x: f64) -> String {
    let cents = (x * 100.0).round_ties_even() as i64;
    let sign = if cents < 0 { "-" } else { "" };
    let cents = cents.abs();
    format!("{sign}{}.{:02}", cents / 100, cents % 100)
}

/// Cost ratio truncated toward zero at two decimals.
pub fn ratio(x: f64) -> String {
    let hundredths = (x * 100.0 + 1e-9).trunc();
    format!("{:.2}", hundredths / 100.0)
}

/// Percentage share with two decimals.
pub fn percent(fraction: f64) -> String {
    format!("{:.2}", fraction * 100.0)
}

/// Bits-per-second figures with three decimals.
pub fn bps(x: f64) -> String {
    format!("{x:.3}")
}

/// Generic numeric value: shortest representation that round-trips.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn currency_rounds_half_even() {
        assert_eq!(currency(3.34_f64 * 1440.0), "4809.60");
        assert_eq!(currency(384.768), "384.77");
        assert_eq!(currency(176.66), "176.66");
        assert_eq!(currency(0.125), "0.12");
        assert_eq!(currency(0.135), "0.14");
        assert_eq!(currency(0.0), "0.00");
        assert_eq!(currency(-1.005), "-1.00");
    }

    #[test]
    fn ratio_truncates() {
        assert_eq!(ratio(27.225178), "27.22");
        assert_eq!(ratio(0.0), "0.00");
        assert_eq!(ratio(1.999), "1.99");
    }

    #[test]
    fn csv_is_plain() {
        let mut report = Report::new(&["field", "value"]);
        report.kv("a", "1");
        report.kv("b", "2");
        assert_eq!(report.render(OutputFormat::Csv), "field,value\na,1\nb,2\n");
    }

    #[test]
    fn table_widths_come_from_content() {
        let mut report = Report::new(&["class", "bytes"]);
        report.push(vec!["in-zone".into(), "100".into()]);
        report.push(vec!["internet-egress".into(), "39".into()]);
        let table = report.render(OutputFormat::Table);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines[0], "class            bytes");
        assert_eq!(lines[2], "in-zone            100");
        assert_eq!(lines[3], "internet-egress     39");
    }
}
