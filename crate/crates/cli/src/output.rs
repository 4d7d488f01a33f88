//! Output assembly: every command renders to text, JSON, or CSV, written to
//! standard output or a file. All renderings are deterministic: map keys are
//! sorted, row orders are fixed by the computation, and fractions use the
//! canonical reduced form.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use rcd_core::report::VerificationReport;
use rcd_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, clap::Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write output to a file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl OutputArgs {
    pub fn emit(&self, content: String) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, content).map_err(|source| Error::Io {
                path: path.display().to_string(),
                source,
            }),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes()).map_err(|source| Error::Io {
                    path: "<stdout>".to_string(),
                    source,
                })
            }
        }
    }
}

pub fn json_line(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
    text.push('\n');
    text
}

pub fn report_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("check: {}\n", report.check()));
    for (key, value) in report.params() {
        out.push_str(&format!("  {key} = {value}\n"));
    }
    out.push_str(&format!(
        "indices: {} checked, {} failed\n",
        report.per_index().len(),
        report.failures()
    ));
    for check in report.per_index().iter().filter(|c| !c.pass) {
        out.push_str(&format!(
            "  FAIL n={}: lhs = {}, rhs = {}\n",
            check.index,
            rcd_core::rational::format_rational(&check.lhs),
            rcd_core::rational::format_rational(&check.rhs)
        ));
    }
    if !report.coefficient_table().is_empty() {
        out.push_str("coefficients (printed vs derived):\n");
        for row in report.coefficient_table() {
            out.push_str(&format!(
                "  l={}: printed = {}, derived = {}, agree = {}\n",
                row.l,
                rcd_core::rational::format_rational(&row.printed),
                rcd_core::rational::format_rational(&row.derived),
                row.agree()
            ));
        }
    }
    out.push_str(&format!(
        "result: {}\n",
        if report.passed() { "PASS" } else { "FAIL" }
    ));
    out
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from("n,lhs,rhs,pass\n");
    for check in report.per_index() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            check.index,
            rcd_core::rational::format_rational(&check.lhs),
            rcd_core::rational::format_rational(&check.rhs),
            check.pass
        ));
    }
    out
}

pub fn render_report(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => report_text(report),
        Format::Json => json_line(report.to_json()),
        Format::Csv => report_csv(report),
    }
}
