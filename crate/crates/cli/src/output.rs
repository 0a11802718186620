use clap::ValueEnum;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// Result of one command: a JSON document, a human rendering, and whether
/// every check it performed passed.
pub struct Report {
    pub json: Value,
    pub table: Table,
    /// Line printed above a table.
    pub title: Option<String>,
    pub ok: bool,
}

pub enum Table {
    /// A single value printed bare.
    Scalar(String),
    Rows { header: Vec<String>, rows: Vec<Vec<String>> },
}

impl Report {
    pub fn scalar(json: Value, text: String) -> Self {
        Report {
            json,
            table: Table::Scalar(text),
            title: None,
            ok: true,
        }
    }

    pub fn rows(json: Value, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report {
            json,
            table: Table::Rows {
                header: header.iter().map(|s| s.to_string()).collect(),
                rows,
            },
            title: None,
            ok: true,
        }
    }

    pub fn titled(mut self, title: String) -> Self {
        self.title = Some(title);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("JSON values serialize"),
            Format::Table => match &self.table {
                Table::Scalar(s) => s.clone(),
                Table::Rows { header, rows } => match &self.title {
                    Some(t) => format!("{t}\n{}", align(header, rows)),
                    None => align(header, rows),
                },
            },
        }
    }
}

fn align(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, cell) in r.iter().enumerate().take(cols) {
            width[i] = width[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{c:<w$}", w = width[i]))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = vec![line(header)];
    out.push(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "));
    out.extend(rows.iter().map(|r| line(r)));
    out.join("\n")
}
