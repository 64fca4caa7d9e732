use std::fmt::Write;

use finality_core::WorldTable;

/// Right-aligned columns separated by two spaces, header first.
pub fn render(columns: &[String], rows: &[Vec<String>]) -> String {
    let width = |i: usize| {
        rows.iter()
            .map(|r| r[i].chars().count())
            .chain([columns[i].chars().count()])
            .max()
            .unwrap_or(0)
    };
    let widths: Vec<usize> = (0..columns.len()).map(width).collect();
    let mut out = String::new();
    for row in std::iter::once(columns).chain(rows.iter().map(Vec::as_slice)) {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            let pad = widths[i] - cell.chars().count();
            let _ = write!(out, "{}{cell}", " ".repeat(pad));
        }
        out.push('\n');
    }
    out
}

pub fn render_worlds(table: &WorldTable) -> String {
    let rows: Vec<Vec<String>> = table
        .worlds()
        .iter()
        .map(|w| w.values().iter().map(ToString::to_string).collect())
        .collect();
    render(table.columns(), &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_headers_and_subscripts() {
        let columns = ["W", "T₀", "count"].map(String::from).to_vec();
        let rows = vec![vec!["0".into(), "1".into(), "12".into()]];
        assert_eq!(render(&columns, &rows), "W  T₀  count\n0   1     12\n");
    }
}
