use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub trait Report: Serialize {
    fn text(&self) -> String;
    fn csv(&self) -> String;
}

/// Render `report` in the chosen format to `out` or standard output. With
/// `out` set, the text summary still goes to standard output.
pub fn emit<R: Report>(report: &R, format: Format, out: Option<&Path>) -> Result<()> {
    let rendered = match format {
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
        Format::Csv => report.csv(),
        Format::Text => report.text(),
    };
    match out {
        Some(path) => {
            std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
            if format != Format::Text {
                print!("{}", report.text());
            }
        }
        None => print!("{rendered}"),
    }
    Ok(())
}
