use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

/// One CSV table: a header and rows of preformatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Decimal with six significant digits.
pub fn ratio(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.00000".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn opt_ratio(x: Option<f64>) -> String {
    x.map(ratio).unwrap_or_default()
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv(out: &mut dyn Write, config: &str, deterministic: bool, table: &Table) -> std::io::Result<()> {
    writeln!(out, "# config: {config}")?;
    if !deterministic {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        writeln!(out, "# generated-unix-time: {secs}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(ratio(1.0 / 3.0), "0.333333");
        assert_eq!(ratio(2.0), "2.00000");
        assert_eq!(ratio(123.456789), "123.457");
        assert_eq!(ratio(0.00123456789), "0.00123457");
        assert_eq!(ratio(1234567.0), "1234567");
        assert_eq!(ratio(-0.5), "-0.500000");
    }

    #[test]
    fn writes_header_then_rows() {
        let mut t = Table::new(&["n", "q", "order"]);
        t.push(vec!["2".into(), "7".into(), "336".into()]);
        let mut buf = Vec::new();
        write_csv(&mut buf, "{}", true, &t).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "# config: {}\nn,q,order\n2,7,336\n");
    }

    #[test]
    fn quotes_cells_with_commas() {
        let mut t = Table::new(&["gens"]);
        t.push(vec!["1,1,0,1".into()]);
        let mut buf = Vec::new();
        write_csv(&mut buf, "{}", true, &t).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("\"1,1,0,1\"\n"));
    }
}
