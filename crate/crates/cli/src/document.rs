//! Output documents and their CSV/JSON encodings.
//!
//! CSV starts with a comment line `# cpn/<schema> schema_version=<v>`, then the column
//! header; metadata follows the rows as `# key=value` lines. JSON carries the same content
//! under `schema`, `schema_version`, `columns`, `rows` and `metadata`.

use std::io::Write;

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows under fixed columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub metadata: Vec<(String, Value)>,
}

impl Table {
    pub fn new(schema: &str, columns: Vec<String>) -> Self {
        Self { schema: schema.to_string(), columns, rows: Vec::new(), metadata: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len(), "row width for {}", self.schema);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    /// A single result object.
    Record { schema: String, fields: Map<String, Value> },
    Table(Table),
    /// Preformatted text, used when no format is requested.
    Text(String),
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl Document {
    pub fn write(&self, format: Format, w: &mut dyn Write) -> std::io::Result<()> {
        match (self, format) {
            (Document::Text(s), _) => writeln!(w, "{s}"),
            (Document::Record { schema, fields }, Format::Json) => {
                let mut obj = Map::new();
                obj.insert("schema".into(), json!(schema));
                obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
                obj.extend(fields.clone());
                writeln!(w, "{}", serde_json::to_string_pretty(&Value::Object(obj))?)
            }
            (Document::Record { schema, fields }, Format::Csv) => {
                writeln!(w, "# cpn/{schema} schema_version={SCHEMA_VERSION}")?;
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(fields.keys())?;
                csv.write_record(fields.values().map(cell))?;
                csv.flush()
            }
            (Document::Table(t), Format::Json) => {
                let meta: Map<String, Value> = t.metadata.iter().cloned().collect();
                let doc = json!({
                    "schema": t.schema,
                    "schema_version": SCHEMA_VERSION,
                    "columns": t.columns,
                    "rows": t.rows,
                    "metadata": meta,
                });
                writeln!(w, "{}", serde_json::to_string(&doc)?)
            }
            (Document::Table(t), Format::Csv) => {
                writeln!(w, "# cpn/{} schema_version={SCHEMA_VERSION}", t.schema)?;
                {
                    let mut csv = csv::Writer::from_writer(&mut *w);
                    csv.write_record(&t.columns)?;
                    for row in &t.rows {
                        csv.write_record(row.iter().map(cell))?;
                    }
                    csv.flush()?;
                }
                for (k, v) in &t.metadata {
                    writeln!(w, "# {k}={}", cell(v))?;
                }
                Ok(())
            }
        }
    }
}

/// Parsed CSV document: data rows and `# key=value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDocument {
    pub header_comment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub metadata: Vec<(String, String)>,
}

impl CsvDocument {
    /// Reads what [`Document::write`] produces in CSV mode.
    pub fn parse(text: &str) -> Result<Self, csv::Error> {
        let mut lines = text.lines();
        let header_comment = lines.next().unwrap_or_default().to_string();
        let (body, meta): (Vec<&str>, Vec<&str>) = lines.partition(|l| !l.starts_with('#'));
        let body = body.join("\n");
        let mut reader = csv::Reader::from_reader(body.as_bytes());
        let columns = reader.headers()?.iter().map(str::to_string).collect();
        let rows = reader.records().map(|r| r.map(|r| r.iter().map(str::to_string).collect())).collect::<Result<_, _>>()?;
        let metadata = meta
            .iter()
            .filter_map(|l| l.trim_start_matches('#').trim().split_once('='))
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        Ok(Self { header_comment, columns, rows, metadata })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}
