use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::{Format, OutputArgs};

/// Rows for CSV output.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// A command's result in every form it supports. The config is embedded as
/// a `config` field in JSON and as a leading `# config:` comment otherwise.
pub struct Report {
    pub config: Value,
    pub body: Value,
    pub table: Option<Table>,
    pub text: Option<String>,
}

impl Report {
    pub fn new(config: impl Serialize, body: impl Serialize) -> Result<Self> {
        Ok(Self {
            config: serde_json::to_value(config)?,
            body: serde_json::to_value(body)?,
            table: None,
            text: None,
        })
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    fn render(&self, format: Format) -> Result<String> {
        let comment = format!("# config: {}\n", serde_json::to_string(&self.config)?);
        match format {
            Format::Json => {
                let mut object = Map::new();
                object.insert("config".into(), self.config.clone());
                match &self.body {
                    Value::Object(fields) => object.extend(fields.clone()),
                    other => {
                        object.insert("result".into(), other.clone());
                    }
                }
                Ok(serde_json::to_string_pretty(&Value::Object(object))? + "\n")
            }
            Format::Csv => {
                let Some(table) = &self.table else {
                    bail!("this command has no CSV form");
                };
                let mut out = comment;
                out.push_str(&table.header.join(","));
                out.push('\n');
                for row in &table.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                Ok(out)
            }
            Format::Text => match &self.text {
                Some(text) => Ok(comment + text),
                None => bail!("this command has no text form"),
            },
        }
    }

    pub fn emit(&self, out: &OutputArgs) -> Result<()> {
        let rendered = self.render(out.format)?;
        write_to(out.output.as_deref(), rendered.as_bytes())
    }
}

pub fn write_to(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

/// Reads `arg` as a file when one exists at that path, otherwise as inline text.
pub fn inline_or_file(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading {arg}"))
    } else {
        Ok(arg.to_string())
    }
}

pub fn parse_json<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T> {
    let text = inline_or_file(arg)?;
    serde_json::from_str(&text).with_context(|| format!("parsing {what}"))
}
