//! A computed table plus how to draw it, and the writers for each format.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use spdc_core::output::{fmt_sig, svg_plot, Series, Table};
use spdc_core::SetupConfig;

use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Svg,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Svg => "svg",
            Format::Json => "json",
        }
    }
}

/// A (x column, y column) pair drawn as one polyline.
#[derive(Debug, Clone, Serialize)]
pub struct Trace {
    pub x: String,
    pub y: String,
    pub label: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub stem: String,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub table: Table,
    /// Per-row status text, written as a trailing `status` column.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<Vec<String>>,
    #[serde(skip)]
    pub traces: Vec<Trace>,
}

impl Artifact {
    pub fn new(stem: impl Into<String>, title: impl Into<String>, table: Table) -> Self {
        Self {
            stem: stem.into(),
            title: title.into(),
            x_label: String::new(),
            y_label: String::new(),
            table,
            status: None,
            traces: Vec::new(),
        }
    }

    pub fn labels(mut self, x: &str, y: &str) -> Self {
        self.x_label = x.into();
        self.y_label = y.into();
        self
    }

    /// Plots every column against the first.
    pub fn trace_all(mut self) -> Self {
        let x = self.table.columns[0].clone();
        self.traces = self.table.columns[1..]
            .iter()
            .map(|y| Trace {
                x: x.clone(),
                y: y.clone(),
                label: y.clone(),
            })
            .collect();
        self
    }

    pub fn trace(mut self, x: &str, y: &str, label: &str) -> Self {
        self.traces.push(Trace {
            x: x.into(),
            y: y.into(),
            label: label.into(),
        });
        self
    }

    pub fn to_csv(&self) -> String {
        let Some(status) = &self.status else {
            return self.table.to_csv();
        };
        let mut out = String::new();
        for (k, v) in &self.table.meta {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.table.columns.join(","));
        out.push_str(",status\n");
        for (row, s) in self.table.rows.iter().zip(status) {
            for c in row {
                out.push_str(&c.map(fmt_sig).unwrap_or_default());
                out.push(',');
            }
            out.push_str(s);
            out.push('\n');
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let columns: Vec<(Vec<f64>, Vec<f64>, &str)> = self
            .traces
            .iter()
            .filter_map(|t| {
                let get = |name: &str| -> Option<Vec<f64>> {
                    Some(self.table.column(name)?.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
                };
                Some((get(&t.x)?, get(&t.y)?, t.label.as_str()))
            })
            .collect();
        let series: Vec<Series<'_>> = columns
            .iter()
            .map(|(x, y, label)| Series {
                label: label.to_string(),
                x,
                y,
            })
            .collect();
        svg_plot(&self.title, &self.x_label, &self.y_label, &series)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes")
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Svg => self.to_svg(),
            Format::Json => self.to_json(),
        }
    }
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes each artifact in each format plus `<stem>.manifest.json`; returns
/// the written paths.
pub fn emit(
    dir: &Path,
    artifacts: &[Artifact],
    formats: &[Format],
    command: &str,
    parameters: &Value,
    setup: &SetupConfig,
) -> CliResult<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for a in artifacts {
        let mut manifest = RunManifest::new(command, parameters.clone(), setup);
        for &f in formats {
            let name = format!("{}.{}", a.stem, f.extension());
            let path = dir.join(&name);
            write_file(&path, &a.render(f))?;
            manifest.outputs.push(name);
            written.push(path);
        }
        let path = dir.join(format!("{}.manifest.json", a.stem));
        write_file(&path, &serde_json::to_string_pretty(&manifest).expect("manifest serializes"))?;
        written.push(path);
    }
    Ok(written)
}
