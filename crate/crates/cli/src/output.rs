use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Tsv,
}

/// A cell of an output table. Integers are always written as decimal text.
#[derive(Debug, Clone)]
pub enum Field {
    Int(String),
    Text(String),
    Bool(bool),
    Null,
}

impl Field {
    pub fn int(v: impl ToString) -> Field {
        Field::Int(v.to_string())
    }

    fn plain(&self) -> String {
        match self {
            Field::Int(s) | Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(s) | Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
        }
    }
}

pub struct Table {
    pub command: &'static str,
    pub params: Vec<(&'static str, String)>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
    /// Extra top-level JSON members (e.g. a summary).
    pub extra: Vec<(&'static str, Value)>,
}

fn csv_escape(s: &str, sep: char) -> String {
    if s.contains(sep) || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn new(command: &'static str, header: Vec<&'static str>) -> Self {
        Table {
            command,
            params: Vec::new(),
            header,
            rows: Vec::new(),
            extra: Vec::new(),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl ToString) -> Self {
        self.params.push((key, value.to_string()));
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_delimited(',', out),
            Format::Tsv => self.write_delimited('\t', out),
            Format::Json => {
                let params: Map<String, Value> = self
                    .params
                    .iter()
                    .map(|(k, v)| (k.to_string(), Value::String(v.clone())))
                    .collect();
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(h, f)| (h.to_string(), f.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut doc = json!({
                    "meta": {
                        "command": self.command,
                        "params": params,
                        "version": env!("CARGO_PKG_VERSION"),
                    },
                    "rows": rows,
                });
                for (k, v) in &self.extra {
                    doc[*k] = v.clone();
                }
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
        }
    }

    fn write_delimited(&self, sep: char, out: &mut impl Write) -> io::Result<()> {
        let line = |cells: Vec<String>| {
            let escaped: Vec<String> = cells.iter().map(|c| csv_escape(c, sep)).collect();
            escaped.join(&sep.to_string())
        };
        writeln!(
            out,
            "{}",
            line(self.header.iter().map(|h| h.to_string()).collect())
        )?;
        for row in &self.rows {
            writeln!(out, "{}", line(row.iter().map(Field::plain).collect()))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("seq", vec!["n", "value"]).param("spec", "lin(1,a,2,b)");
        t.rows.push(vec![
            Field::int(1),
            Field::int("123456789012345678901234567890"),
        ]);
        t.rows.push(vec![Field::int(2), Field::Text("a,b".into())]);
        t
    }

    #[test]
    fn csv_quotes_separators() {
        let mut buf = Vec::new();
        sample().write(Format::Csv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n,value\n1,123456789012345678901234567890\n2,\"a,b\"\n"
        );
        let mut buf = Vec::new();
        sample().write(Format::Tsv, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "n\tvalue\n1\t123456789012345678901234567890\n2\ta,b\n"
        );
    }

    #[test]
    fn json_uses_strings_for_integers() {
        let mut buf = Vec::new();
        sample().write(Format::Json, &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["meta"]["command"], "seq");
        assert_eq!(v["meta"]["params"]["spec"], "lin(1,a,2,b)");
        assert_eq!(v["rows"][0]["value"], "123456789012345678901234567890");
        assert_eq!(v["rows"][0]["n"], "1");
    }
}
