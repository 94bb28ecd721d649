//! Minimal CSV support for the pinned interchange format: mandatory header
//! row, comma separators, `.` decimal point, line-feed newlines, no quoting.

use std::fs;
use std::path::Path;

/// A parsed CSV file: named columns of floats.
#[derive(Debug)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

pub fn read_table(path: &Path) -> Result<Table, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
    parse_table(&text).map_err(|e| format!("{}: {}", path.display(), e))
}

pub fn parse_table(text: &str) -> Result<Table, String> {
    let mut lines = text.lines();
    let header_line = lines.next().ok_or("empty file, expected a header row")?;
    let headers: Vec<String> = header_line.split(',').map(|h| h.trim().to_string()).collect();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != headers.len() {
            return Err(format!(
                "row {}: has {} fields, header has {}",
                lineno + 2,
                cells.len(),
                headers.len()
            ));
        }
        for (col, cell) in columns.iter_mut().zip(&cells) {
            let value: f64 = cell
                .trim()
                .parse()
                .map_err(|_| format!("row {}: cannot parse `{}` as a number", lineno + 2, cell))?;
            col.push(value);
        }
    }
    Ok(Table { headers, columns })
}

/// Shortest round-trip decimal representation; what every CSV cell uses.
pub fn fmt(value: f64) -> String {
    format!("{}", value)
}

/// Serialize rows of already formatted cells under a header.
pub fn render_csv(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&headers.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_columns_by_name() {
        let t = parse_table("k,y\n0,1.5\n1,-2\n").unwrap();
        assert_eq!(t.rows(), 2);
        assert_eq!(t.column("y"), Some(&[1.5, -2.0][..]));
        assert!(t.column("x").is_none());
    }

    #[test]
    fn reports_offending_row() {
        let err = parse_table("k,y\n0,1.5\n1,oops\n").unwrap_err();
        assert!(err.contains("row 3"), "{}", err);
        let err = parse_table("k,y\n0\n").unwrap_err();
        assert!(err.contains("row 2"), "{}", err);
    }

    #[test]
    fn round_trips_shortest_representation() {
        for v in [0.1, -3.25, 1.0 / 3.0, 123456.789, 1e-9] {
            let parsed: f64 = fmt(v).parse().unwrap();
            assert_eq!(parsed.to_bits(), v.to_bits());
        }
    }
}
