//! `rcd` — exact q-expansions, Rankin-Cohen brackets, decomposition
//! coefficient tables, and the identity verification suites.
//!
//! Exit status: 0 success (all checks pass), 1 file errors or verification
//! failure, 2 bad arguments or violated preconditions, 3 internal grading
//! inconsistency.

mod output;

use std::collections::BTreeMap;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{json_line, render_report, Format, OutputArgs};
use rcd_core::brackets::{a_coefficient, rankin_cohen, BracketSpec, CoefficientRoute};
use rcd_core::dirichlet::{verify_prop31, verify_section5, verify_section6, verify_theorem};
use rcd_core::forms::{delta, eisenstein, load_form, FormDescriptor};
use rcd_core::jets::{
    equivariance_harness, roundtrip_harness, EquivarianceConfig, ModularPolynomial,
    QuasimodularPolynomial, RoundtripConfig, DEFAULT_SEED,
};
use rcd_core::qseries::PiGradedSeries;
use rcd_core::rational::format_rational;
use rcd_core::{Error, ErrorClass, Result};

#[derive(Parser)]
#[command(
    name = "rcd",
    version,
    about = "Exact Rankin-Cohen bracket and Dirichlet-coefficient toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the q-expansion of a form or one of its derivatives
    Expand {
        /// Builtin form name (E2, E4, E6, Delta) or @path to a form file
        #[arg(long = "f")]
        form: String,
        /// Order of the z-derivative to apply
        #[arg(long, default_value_t = 0)]
        deriv: u32,
        /// Series precision N (expansion through q^N)
        #[arg(short = 'N', long = "precision", default_value_t = 10)]
        precision: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a Rankin-Cohen bracket expansion
    Bracket {
        /// First depth-0 form (builtin name or @path)
        #[arg(long = "f")]
        form_f: String,
        /// Second depth-0 form (builtin name or @path)
        #[arg(long = "g")]
        form_g: String,
        /// Bracket index w
        #[arg(short = 'w', default_value_t = 0)]
        w: u32,
        /// Series precision N
        #[arg(short = 'N', long = "precision", default_value_t = 10)]
        precision: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the decomposition coefficient table for given (m, n, mu, nu)
    Coeffs {
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        #[arg(long)]
        mu: u32,
        #[arg(long)]
        nu: u32,
        /// Restrict the table to a single shift l
        #[arg(short = 'l')]
        l: Option<u32>,
        /// Evaluation route(s)
        #[arg(long, value_enum, default_value_t = RouteSelect::Derived)]
        route: RouteSelect,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        target: VerifyTarget,
    },
}

#[derive(Subcommand)]
enum VerifyTarget {
    /// Coefficientwise bracket decomposition of f^(m) g^(n)
    Theorem {
        #[arg(long = "f")]
        form_f: String,
        #[arg(long = "g")]
        form_g: String,
        #[arg(short = 'm')]
        m: u32,
        #[arg(short = 'n')]
        n: u32,
        /// Number of Fourier indices to compare
        #[arg(short = 'N', long = "precision", default_value_t = 50)]
        precision: usize,
        #[arg(long, value_enum, default_value_t = RouteOnly::Derived)]
        route: RouteOnly,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Coefficientwise reconstruction of a form from its polynomial's
    /// modular projections; checks the image of --f (and optionally the
    /// product with the image of --g)
    Prop31 {
        #[arg(long = "f")]
        form_f: String,
        /// Degree bound for the image of --f
        #[arg(short = 'm', default_value_t = 1)]
        m: usize,
        /// Optional second form; the product polynomial is checked instead
        #[arg(long = "g")]
        form_g: Option<String>,
        /// Degree bound for the image of --g
        #[arg(short = 'n', default_value_t = 1)]
        n: usize,
        #[arg(short = 'N', long = "precision", default_value_t = 50)]
        precision: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Derived coefficients against the closed-form triples on a weight grid
    Section5 {
        #[arg(long, default_value_t = 20)]
        mu_max: u32,
        #[arg(long, default_value_t = 20)]
        nu_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Binomial-sum identities of the decomposition coefficients
    Section6 {
        #[arg(long, default_value_t = 8)]
        w_max: u32,
        #[arg(long, default_value_t = 12)]
        mu_max: u32,
        #[arg(long, default_value_t = 12)]
        nu_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric invariance of pipeline polynomials under the slash actions
    Equivariance {
        /// Series truncation used for the numeric sums
        #[arg(short = 'N', long = "precision", default_value_t = 40)]
        precision: usize,
        /// Residual tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact round trip of the two weight maps on seeded random polynomials
    Roundtrip {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteSelect {
    Derived,
    Printed,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteOnly {
    Derived,
    Printed,
}

impl From<RouteOnly> for CoefficientRoute {
    fn from(route: RouteOnly) -> Self {
        match route {
            RouteOnly::Derived => CoefficientRoute::Derived,
            RouteOnly::Printed => CoefficientRoute::Printed,
        }
    }
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli.command));
}

fn run(command: Command) -> i32 {
    match execute(command) {
        Ok(status) => status,
        Err(error) => {
            eprintln!("rcd: error: {error}");
            match error.class() {
                ErrorClass::Usage => 2,
                ErrorClass::File => 1,
                ErrorClass::Internal => 3,
            }
        }
    }
}

/// Resolves a form selector: a builtin name or `@path`.
fn resolve_form(selector: &str, precision: usize) -> Result<FormDescriptor> {
    if let Some(path) = selector.strip_prefix('@') {
        let fd = load_form(path)?;
        if fd.precision() < precision {
            return Err(Error::PrecisionTooLow {
                needed: precision,
                got: fd.precision(),
            });
        }
        return FormDescriptor::new(
            fd.name(),
            fd.weight(),
            fd.depth(),
            fd.series().truncated(precision),
        );
    }
    match selector.to_ascii_lowercase().as_str() {
        "e2" => eisenstein(2, precision),
        "e4" => eisenstein(4, precision),
        "e6" => eisenstein(6, precision),
        "delta" => Ok(delta(precision)),
        other => Err(Error::UnknownForm(other.to_string())),
    }
}

fn series_slices_json(series: &PiGradedSeries) -> serde_json::Value {
    let slices: BTreeMap<String, Vec<String>> = series
        .grades()
        .into_iter()
        .map(|grade| {
            (
                grade.to_string(),
                series
                    .slice(grade)
                    .expect("listed grade")
                    .iter()
                    .map(format_rational)
                    .collect(),
            )
        })
        .collect();
    json!(slices)
}

fn series_text_lines(series: &PiGradedSeries) -> String {
    if series.is_zero() {
        return "  (zero series)\n".to_string();
    }
    let mut out = String::new();
    for grade in series.grades() {
        let coeffs: Vec<String> = series
            .slice(grade)
            .expect("listed grade")
            .iter()
            .map(format_rational)
            .collect();
        out.push_str(&format!("  grade {grade}: [{}]\n", coeffs.join(", ")));
    }
    out
}

fn series_csv(series: &PiGradedSeries) -> String {
    let mut out = String::from("grade,k,coefficient\n");
    for grade in series.grades() {
        for (k, c) in series.slice(grade).expect("listed grade").iter().enumerate() {
            out.push_str(&format!("{grade},{k},{}\n", format_rational(c)));
        }
    }
    out
}

fn cmd_expand(form: &str, deriv: u32, precision: usize, output: &OutputArgs) -> Result<i32> {
    let fd = resolve_form(form, precision)?.derivative(deriv);
    let content = match output.format {
        Format::Text => format!(
            "{}  weight {}  depth {}  h = {}  N = {}\n{}",
            fd.name(),
            fd.weight(),
            fd.depth(),
            format_rational(fd.width()),
            fd.precision(),
            series_text_lines(fd.series())
        ),
        Format::Json => json_line(json!({
            "name": fd.name(),
            "weight": fd.weight(),
            "depth": fd.depth(),
            "width_h": format_rational(fd.width()),
            "precision": fd.precision(),
            "slices": series_slices_json(fd.series()),
        })),
        Format::Csv => series_csv(fd.series()),
    };
    output.emit(content)?;
    Ok(0)
}

fn cmd_bracket(
    form_f: &str,
    form_g: &str,
    w: u32,
    precision: usize,
    output: &OutputArgs,
) -> Result<i32> {
    let phi = resolve_form(form_f, precision)?;
    let psi = resolve_form(form_g, precision)?;
    let spec = BracketSpec::new(phi.weight(), psi.weight(), w)?;
    let series = rankin_cohen(&phi, &psi, &spec)?;
    let name = format!("[{},{}]_{w}", phi.name(), psi.name());
    let weight = phi.weight() + psi.weight() + 2 * w;
    let content = match output.format {
        Format::Text => format!(
            "{name}  weight {weight}  grade {w}  h = {}  N = {}\n{}",
            format_rational(series.width()),
            series.precision(),
            series_text_lines(&series)
        ),
        Format::Json => {
            let coefficients: Vec<String> = (0..=series.precision())
                .map(|k| format_rational(&series.coefficient(w as usize, k)))
                .collect();
            json_line(json!({
                "name": name,
                "weight": weight,
                "grade": w,
                "width_h": format_rational(series.width()),
                "precision": series.precision(),
                "coefficients": coefficients,
            }))
        }
        Format::Csv => series_csv(&series),
    };
    output.emit(content)?;
    Ok(0)
}

fn cmd_coeffs(
    m: u32,
    n: u32,
    mu: u32,
    nu: u32,
    l: Option<u32>,
    route: RouteSelect,
    output: &OutputArgs,
) -> Result<i32> {
    let shifts: Vec<u32> = match l {
        Some(l) => {
            if l > m + n {
                return Err(Error::IndexRange {
                    index: l as i64,
                    max: (m + n) as i64,
                });
            }
            vec![l]
        }
        None => (0..=(m + n)).collect(),
    };

    struct Row {
        l: u32,
        printed: Option<String>,
        derived: Option<String>,
    }

    let mut rows = Vec::with_capacity(shifts.len());
    for l in shifts {
        let printed = match route {
            RouteSelect::Printed | RouteSelect::Both => Some(format_rational(
                &a_coefficient(m, n, mu, nu, l, CoefficientRoute::Printed)?.value,
            )),
            RouteSelect::Derived => None,
        };
        let derived = match route {
            RouteSelect::Derived | RouteSelect::Both => Some(format_rational(
                &a_coefficient(m, n, mu, nu, l, CoefficientRoute::Derived)?.value,
            )),
            RouteSelect::Printed => None,
        };
        rows.push(Row { l, printed, derived });
    }

    let both = route == RouteSelect::Both;
    let content = match output.format {
        Format::Text => {
            let mut out = format!("coefficients for m={m} n={n} mu={mu} nu={nu}\n");
            for row in &rows {
                out.push_str(&format!("  l={}:", row.l));
                if let Some(p) = &row.printed {
                    out.push_str(&format!(" printed = {p}"));
                }
                if let Some(d) = &row.derived {
                    out.push_str(&format!(" derived = {d}"));
                }
                if both {
                    out.push_str(&format!(" agree = {}", row.printed == row.derived));
                }
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let table: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut object = serde_json::Map::new();
                    object.insert("l".to_string(), json!(row.l));
                    if let Some(p) = &row.printed {
                        object.insert("printed".to_string(), json!(p));
                    }
                    if let Some(d) = &row.derived {
                        object.insert("derived".to_string(), json!(d));
                    }
                    if both {
                        object.insert("agree".to_string(), json!(row.printed == row.derived));
                    }
                    serde_json::Value::Object(object)
                })
                .collect();
            json_line(json!({
                "m": m,
                "n": n,
                "mu": mu,
                "nu": nu,
                "coefficient_table": table,
            }))
        }
        Format::Csv => {
            let mut out = String::new();
            match route {
                RouteSelect::Derived => {
                    out.push_str("l,derived\n");
                    for row in &rows {
                        out.push_str(&format!("{},{}\n", row.l, row.derived.as_ref().unwrap()));
                    }
                }
                RouteSelect::Printed => {
                    out.push_str("l,printed\n");
                    for row in &rows {
                        out.push_str(&format!("{},{}\n", row.l, row.printed.as_ref().unwrap()));
                    }
                }
                RouteSelect::Both => {
                    out.push_str("l,printed,derived,agree\n");
                    for row in &rows {
                        out.push_str(&format!(
                            "{},{},{},{}\n",
                            row.l,
                            row.printed.as_ref().unwrap(),
                            row.derived.as_ref().unwrap(),
                            row.printed == row.derived
                        ));
                    }
                }
            }
            out
        }
    };
    output.emit(content)?;
    Ok(0)
}

fn lambda_image(fd: &FormDescriptor, degree: usize) -> Result<QuasimodularPolynomial> {
    ModularPolynomial::embed_modular(fd, degree)?
        .lambda_map(fd.weight() as i64 + 2 * degree as i64)
}

fn cmd_verify(target: VerifyTarget) -> Result<i32> {
    let (report, output) = match target {
        VerifyTarget::Theorem {
            form_f,
            form_g,
            m,
            n,
            precision,
            route,
            output,
        } => {
            let phi = resolve_form(&form_f, precision)?;
            let psi = resolve_form(&form_g, precision)?;
            (
                verify_theorem(&phi, &psi, m, n, precision, route.into())?,
                output,
            )
        }
        VerifyTarget::Prop31 {
            form_f,
            m,
            form_g,
            n,
            precision,
            output,
        } => {
            let phi = resolve_form(&form_f, precision)?;
            let poly = match form_g {
                Some(selector) => {
                    let psi = resolve_form(&selector, precision)?;
                    lambda_image(&phi, m)?.mul(&lambda_image(&psi, n)?)?
                }
                None => lambda_image(&phi, m)?,
            };
            let lambda = poly.weight();
            (verify_prop31(&poly, lambda, precision)?, output)
        }
        VerifyTarget::Section5 {
            mu_max,
            nu_max,
            output,
        } => (verify_section5(mu_max, nu_max)?, output),
        VerifyTarget::Section6 {
            w_max,
            mu_max,
            nu_max,
            output,
        } => (verify_section6(w_max, mu_max, nu_max)?, output),
        VerifyTarget::Equivariance {
            precision,
            tol,
            output,
        } => (
            equivariance_harness(&EquivarianceConfig {
                precision,
                tolerance: tol,
            })?,
            output,
        ),
        VerifyTarget::Roundtrip {
            seed,
            count,
            output,
        } => (
            roundtrip_harness(&RoundtripConfig {
                count,
                seed,
                ..RoundtripConfig::default()
            }),
            output,
        ),
    };
    output.emit(render_report(&report, output.format))?;
    Ok(if report.passed() { 0 } else { 1 })
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Expand {
            form,
            deriv,
            precision,
            output,
        } => cmd_expand(&form, deriv, precision, &output),
        Command::Bracket {
            form_f,
            form_g,
            w,
            precision,
            output,
        } => cmd_bracket(&form_f, &form_g, w, precision, &output),
        Command::Coeffs {
            m,
            n,
            mu,
            nu,
            l,
            route,
            output,
        } => cmd_coeffs(m, n, mu, nu, l, route, &output),
        Command::Verify { target } => cmd_verify(target),
    }
}
