//! `exterior`: command-line access to sparse forms and the verification
//! checks.
//!
//! Object arguments are file paths or inline text in the same format, with
//! `;` standing for a line break (`"kform k=1; 3 : 1"`). Frames, vectors and
//! matrices are whitespace-separated rows.

use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use exterior_core::derivative::demo;
use exterior_core::stokes::{dphi_example, phi_field_form, DEFAULT_ORDER};
use exterior_core::text::{parse_matrix, parse_vector};
use exterior_core::verify::run_suite;
use exterior_core::{
    dd_check, form_symbolic, hat, omega_gradient, parse_object, tensor_symbolic, verify_det_proportionality,
    verify_stokes, Contraction, Error, FieldForm64, KForm64, Matrix64, MultiIndex, Parsed, SplitMix64, SymbolStyle,
};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "exterior", version, about = "Sparse alternating forms: algebra and verification checks")]
struct Cli {
    /// Coefficients at or below this magnitude are dropped from printed forms.
    #[arg(long, global = true, env = "EXTERIOR_TOL", default_value_t = 1e-11)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a form or tensor on a frame (n rows, one column per argument).
    Eval { object: String, frame: String },
    /// Wedge product of two or more forms.
    Wedge {
        #[arg(required = true, num_args = 2..)]
        forms: Vec<String>,
    },
    /// Sum of two objects of the same kind and arity.
    Add { a: String, b: String },
    /// Contract a form with the columns of a matrix, left to right.
    Contract {
        form: String,
        vectors: String,
        /// Print a full contraction as a 0-form instead of a bare number.
        #[arg(long)]
        keep_zero_form: bool,
    },
    /// Pull a form back along dx_i = sum_r M[i, r] dy_r.
    Pullback { form: String, matrix: String },
    /// Alternating projection of a tensor.
    Alt { object: String },
    /// Exterior derivative of a built-in form at a point.
    D {
        #[arg(value_enum)]
        which: Builtin,
        /// Comma- or space-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Use finite differences even where analytic derivatives exist.
        #[arg(long)]
        numeric: bool,
    },
    /// Symbolic rendering.
    Print {
        object: String,
        #[arg(long, value_enum, default_value = "d")]
        style: Style,
        /// Comma-separated symbol names replacing the default alphabet.
        #[arg(long, value_delimiter = ',')]
        symbols: Option<Vec<String>>,
    },
    /// Run a verification check and print a JSON report.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Builtin {
    /// f1 dw^dx + f2 dw^dy + f3 dy^dz on R^4.
    Phi,
    /// The (n-1)-form omega_n = sum (-1)^(i-1) x_i / |x|^n dx_1^..(omit i)..^dx_n.
    Omega,
    /// The cube example (x_1 - x_2^2 + ...) * sum of hat terms.
    Stokes,
}

#[derive(Clone, Copy, ValueEnum)]
enum Style {
    Letters,
    D,
}

#[derive(Subcommand)]
enum Check {
    /// Boundary integral, volume integral and closed form on [0, a]^n.
    Stokes {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        m: usize,
        /// Largest acceptable relative disagreement.
        #[arg(long, default_value_t = 1e-8)]
        max_err: f64,
    },
    /// d(d phi) for the built-in f1, f2, f3 with analytic and numeric Hessians.
    Ddzero {
        #[arg(long, default_value = "1,2,3,4", allow_hyphen_values = true)]
        at: String,
    },
    /// omega(E) = det(E) omega(I) for the top form d phi at 1..n and a seeded random E.
    Det46 {
        #[arg(long, default_value_t = 9)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Every randomized identity check, with seeded cases.
    Suite {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

enum Failure {
    /// Bad input or arguments: exit 2.
    Usage(String),
    /// A check ran but exceeded its tolerance: exit 1.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn read_text(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{arg}: {e}")));
    }
    Ok(arg.replace(';', "\n"))
}

fn read_object(arg: &str) -> Result<Parsed<f64>, Failure> {
    parse_object(&read_text(arg)?).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn read_form(arg: &str) -> Result<KForm64, Failure> {
    read_object(arg)?.into_form().map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn read_matrix(arg: &str) -> Result<Matrix64, Failure> {
    parse_matrix(&read_text(arg)?).map_err(|e| Failure::Usage(format!("{arg}: {e}")))
}

fn read_point(arg: &str) -> Result<Vec<f64>, Failure> {
    let x = parse_vector(&read_text(arg)?).map_err(|e| Failure::Usage(format!("point: {e}")))?;
    if x.is_empty() {
        return Err(Failure::Usage("point has no coordinates".into()));
    }
    Ok(x)
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn run(cli: Cli) -> Outcome {
    let tol = cli.tol;
    match cli.command {
        Command::Eval { object, frame } => {
            let frame = read_matrix(&frame)?;
            let value = match read_object(&object)? {
                Parsed::Form(f) => f.evaluate(&frame)?,
                Parsed::Tensor(t) => t.evaluate(&frame)?,
            };
            println!("{value}");
        }
        Command::Wedge { forms } => {
            let forms = forms.iter().map(|f| read_form(f)).collect::<Result<Vec<_>, _>>()?;
            print!("{}", KForm64::wedge_all(&forms).zap(tol));
        }
        Command::Add { a, b } => match (read_object(&a)?, read_object(&b)?) {
            (Parsed::Form(x), Parsed::Form(y)) => print!("{}", x.add(&y)?.zap(tol)),
            (Parsed::Tensor(x), Parsed::Tensor(y)) => print!("{}", x.add(&y)?.zap(tol)),
            _ => return Err(Failure::Usage("cannot add a kform and a ktensor".into())),
        },
        Command::Contract { form, vectors, keep_zero_form } => {
            let form = read_form(&form)?;
            match form.contract_matrix(&read_matrix(&vectors)?, !keep_zero_form)? {
                Contraction::Scalar(x) => println!("{x}"),
                Contraction::Form(f) => print!("{}", f.zap(tol)),
            }
        }
        Command::Pullback { form, matrix } => {
            print!("{}", read_form(&form)?.pullback(&read_matrix(&matrix)?)?.zap(tol));
        }
        Command::Alt { object } => {
            print!("{}", read_object(&object)?.into_tensor().alt()?.zap(tol));
        }
        Command::D { which, at, numeric } => {
            let x = read_point(&at)?;
            let field_form: FieldForm64 = match which {
                Builtin::Phi => {
                    if x.len() != 4 {
                        return Err(Failure::Usage(format!("phi lives on R^4, got a point in R^{}", x.len())));
                    }
                    demo::phi()
                }
                Builtin::Omega => {
                    if !numeric {
                        print!("{}", omega_gradient(&x)?.wedge(&hat(x.len())?).zap(tol));
                        return Ok(());
                    }
                    exterior_core::derivative::omega_field_form(x.len())?
                }
                Builtin::Stokes => {
                    if !numeric {
                        print!("{}", dphi_example(&x)?.zap(tol));
                        return Ok(());
                    }
                    phi_field_form(x.len())?
                }
            };
            let field_form = if numeric { field_form.numeric_only() } else { field_form };
            print!("{}", field_form.exterior_d(&x)?.zap(tol));
        }
        Command::Print { object, style, symbols } => {
            let style = match style {
                Style::Letters => SymbolStyle::Letters,
                Style::D => SymbolStyle::DNames,
            };
            let text = match read_object(&object)? {
                Parsed::Form(f) => form_symbolic(&f, style, symbols.as_deref())?,
                Parsed::Tensor(t) => tensor_symbolic(&t, style, symbols.as_deref())?,
            };
            println!("{text}");
        }
        Command::Verify { check } => return run_check(check),
    }
    Ok(())
}

#[derive(Serialize)]
struct DdReport {
    point: Vec<f64>,
    analytic_max_abs: f64,
    analytic_tolerance: f64,
    numeric_max_abs: f64,
    numeric_tolerance: f64,
    passed: bool,
}

#[derive(Serialize)]
struct Det46Report {
    n: usize,
    seed: u64,
    lhs: f64,
    rhs: f64,
    diff: f64,
    tolerance: f64,
    passed: bool,
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run_check(check: Check) -> Outcome {
    match check {
        Check::Stokes { n, a, m, max_err } => {
            let report = verify_stokes(n, a, m)?;
            print_json(&report);
            verdict(report.max_relative_error() <= max_err)
        }
        Check::Ddzero { at } => {
            let x = read_point(&at)?;
            if x.len() != 4 {
                return Err(Failure::Usage(format!("the built-in fields live on R^4, got R^{}", x.len())));
            }
            let fields = [demo::f1::<f64>(), demo::f2(), demo::f3()];
            let numeric: Vec<_> = fields.iter().map(|f| f.numeric_only()).collect();
            let wedges = demo::phi_wedges().map(|w| MultiIndex::new(w.to_vec()).expect("valid wedge"));
            let analytic_max_abs = dd_check(&fields, &wedges, &x)?.max_abs();
            let numeric_max_abs = dd_check(&numeric, &wedges, &x)?.max_abs();
            let (analytic_tolerance, numeric_tolerance) = (1e-12, 1e-4);
            let passed = analytic_max_abs <= analytic_tolerance && numeric_max_abs <= numeric_tolerance;
            print_json(&DdReport {
                point: x,
                analytic_max_abs,
                analytic_tolerance,
                numeric_max_abs,
                numeric_tolerance,
                passed,
            });
            verdict(passed)
        }
        Check::Det46 { n, seed } => {
            if n < 2 {
                return Err(Failure::Usage("det46 needs n >= 2".into()));
            }
            let x: Vec<f64> = (1..=n).map(|i| i as f64).collect();
            let omega = dphi_example(&x)?;
            let frame = SplitMix64::new(seed).normal_matrix::<f64>(n, n);
            let r = verify_det_proportionality(&omega, &frame)?;
            let tolerance = 1e-6;
            let passed = r.diff.abs() <= tolerance * r.lhs.abs().max(f64::MIN_POSITIVE);
            print_json(&Det46Report { n, seed, lhs: r.lhs, rhs: r.rhs, diff: r.diff, tolerance, passed });
            verdict(passed)
        }
        Check::Suite { seed, cases } => {
            let report = run_suite(seed, cases)?;
            print_json(&report);
            verdict(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
