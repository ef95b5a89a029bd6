//! Report emission: a `#` header, then CSV rows or one JSON document.

use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Display;
use std::io::Write;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A flat table; every cell is already rendered.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Render a cell. Floats use the shortest round-trip form.
pub fn cell(x: impl Display) -> String {
    x.to_string()
}

pub fn opt_cell<T: Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Which columns a gnuplot script should draw.
#[derive(Debug, Clone)]
pub struct Plot {
    pub x: &'static str,
    pub ys: Vec<&'static str>,
    pub logx: bool,
}

pub enum Body {
    /// A file in its own format (instances, graphs); `#` comments allowed.
    Text(String),
    Report { json: Value, table: Table, plot: Option<Plot> },
}

pub struct Output {
    pub command: &'static str,
    pub config: Value,
    pub seed: u64,
    /// All assertions of the command held.
    pub pass: bool,
    pub body: Body,
}

impl Output {
    pub fn report(command: &'static str, config: &impl Serialize, seed: u64, pass: bool, json: &impl Serialize, table: Table) -> Self {
        Output {
            command,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            seed,
            pass,
            body: Body::Report { json: serde_json::to_value(json).unwrap_or(Value::Null), table, plot: None },
        }
    }

    pub fn with_plot(mut self, plot: Plot) -> Self {
        if let Body::Report { plot: p, .. } = &mut self.body {
            *p = Some(plot);
        }
        self
    }

    fn header(&self) -> String {
        format!(
            "# ihplab {VERSION}\n# command: {}\n# seed: {}\n# config: {}\n",
            self.command,
            self.seed,
            serde_json::to_string(&self.config).unwrap_or_default()
        )
    }

    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match (&self.body, format) {
            (Body::Text(t), _) => Ok(format!("{}{t}", self.header()).into_bytes()),
            (Body::Report { table, .. }, Format::Csv) => {
                let mut out = self.header().into_bytes();
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&table.columns)?;
                for r in &table.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
                drop(w);
                Ok(out)
            }
            (Body::Report { json, .. }, Format::Json) => {
                let doc = json!({
                    "ihplab": VERSION,
                    "command": self.command,
                    "seed": self.seed,
                    "config": self.config,
                    "pass": self.pass,
                    "report": json,
                });
                let mut s = serde_json::to_string_pretty(&doc).map_err(std::io::Error::other)?;
                s.push('\n');
                Ok(s.into_bytes())
            }
        }
    }

    /// gnuplot script for a CSV written to `data`.
    pub fn gnuplot(&self, data: &Path) -> Option<String> {
        let Body::Report { table, plot: Some(p), .. } = &self.body else {
            return None;
        };
        let col = |name: &str| table.columns.iter().position(|c| *c == name).map(|i| i + 1);
        let x = col(p.x)?;
        let file = data.file_name()?.to_string_lossy().into_owned();
        let mut s = format!("# ihplab {VERSION}: {}\nset datafile separator ','\nset key autotitle columnhead\nset xlabel '{}'\n", self.command, p.x);
        if p.logx {
            s.push_str("set logscale x\n");
        }
        let series: Vec<String> = p
            .ys
            .iter()
            .filter_map(|y| col(y).map(|c| format!("'{file}' using {x}:{c} with linespoints title '{y}'")))
            .collect();
        s.push_str(&format!("plot {}\n", series.join(", \\\n     ")));
        Some(s)
    }
}

pub fn write(out: &Output, format: Format, path: Option<&Path>, plot: bool) -> std::io::Result<()> {
    let bytes = out.render(format)?;
    match path {
        Some(p) => {
            std::fs::write(p, &bytes)?;
            if plot && format == Format::Csv {
                if let Some(script) = out.gnuplot(p) {
                    std::fs::write(p.with_extension("gp"), script)?;
                }
            }
            Ok(())
        }
        None => std::io::stdout().lock().write_all(&bytes),
    }
}
