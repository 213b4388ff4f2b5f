mod args;

use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use padic_fermionic::{
    additivity_check, congruence_check, decompose, euler_number, fermionic_sum, integrate,
    measure_combine, measure_value, rn_derivative, strong_delta, verify_theorem1, CheckReport,
    Cylinder, Error, Execution, FermionicMeasure, MeasureTable, PAdicContext, PAdicScalar,
    UDFunction,
};
use serde_json::{json, Value};

use args::{Check, Cli, Command, Field, MeasureSource};

/// Failures reported with exit code 2.
struct Usage(String);

impl<E: Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

enum Output {
    Text(String),
    Record(Value),
    Report(CheckReport),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli.command, cli.structured) {
        Ok(Output::Text(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Output::Record(value)) => {
            println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
            ExitCode::SUCCESS
        }
        Ok(Output::Report(report)) => {
            if cli.structured {
                println!("{}", report.to_json());
            } else {
                println!("{report}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn context(field: &Field) -> Result<PAdicContext, Usage> {
    Ok(PAdicContext::new(field.p, field.prec)?)
}

fn function(literal: &str, ctx: &PAdicContext) -> Result<UDFunction, Usage> {
    Ok(UDFunction::parse(literal, ctx)?)
}

fn scalar_record(x: &PAdicScalar) -> Value {
    json!({
        "value": x.to_string(),
        "valuation": x.valuation(),
        "unit": x.unit().map(|u| u.to_string()),
        "digits": x.relative_precision(),
        "absolute_precision": x.absolute_precision(),
    })
}

fn scalar_output(quantity: &str, x: &PAdicScalar, structured: bool) -> Output {
    if structured {
        let mut record = scalar_record(x);
        record["quantity"] = json!(quantity);
        Output::Record(record)
    } else {
        Output::Text(format!("{x}\n"))
    }
}

/// Reads a table, which must be over the requested prime.
fn load_table(path: &Path, ctx: &PAdicContext) -> Result<MeasureTable, Usage> {
    let text = fs::read_to_string(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let table = MeasureTable::parse(&text)?;
    if table.context().p() != ctx.p() {
        return Err(Usage(format!(
            "table is over p = {}, not p = {}",
            table.context().p(),
            ctx.p()
        )));
    }
    Ok(table)
}

/// `mu_f`, the tabulated measure, or their sum when both are given. A
/// table's own precision takes over from `--prec`.
fn measure(source: &MeasureSource, ctx: &PAdicContext) -> Result<FermionicMeasure, Usage> {
    match (&source.f, &source.table) {
        (Some(f), None) => Ok(FermionicMeasure::induced(function(f, ctx)?)),
        (None, Some(path)) => Ok(FermionicMeasure::Tabulated(load_table(path, ctx)?)),
        (Some(f), Some(path)) => {
            let table = load_table(path, ctx)?;
            let tctx = table.context().clone();
            let induced = FermionicMeasure::induced(function(f, &tctx)?);
            let tabulated = FermionicMeasure::Tabulated(table);
            Ok(measure_combine(tctx.one(), induced, tctx.one(), tabulated)?)
        }
        (None, None) => Err(Usage("one of --f or --table is required".into())),
    }
}

fn run(command: Command, structured: bool) -> Result<Output, Usage> {
    match command {
        Command::Euler { field, upto } => {
            let ctx = context(&field)?;
            let values = (0..=upto)
                .map(|k| euler_number(k, &ctx))
                .collect::<Result<Vec<_>, Error>>()?;
            if structured {
                let records: Vec<_> = values.iter().map(scalar_record).collect();
                return Ok(Output::Record(json!({
                    "p": ctx.p(),
                    "precision": ctx.precision(),
                    "euler": records,
                })));
            }
            let text = values
                .iter()
                .enumerate()
                .map(|(k, e)| format!("E_{k} = {e}\n"))
                .collect();
            Ok(Output::Text(text))
        }
        Command::Integrate { field, f } => {
            let ctx = context(&field)?;
            let value = integrate(&function(&f, &ctx)?)?;
            Ok(scalar_output("integral", &value, structured))
        }
        Command::Sum { field, f, m, budget } => {
            let ctx = context(&field)?;
            let value = fermionic_sum(&function(&f, &ctx)?, m, budget)?;
            Ok(scalar_output("partial_sum", &value, structured))
        }
        Command::Measure { field, f, cyl } => {
            let ctx = context(&field)?;
            let mu = FermionicMeasure::induced(function(&f, &ctx)?);
            let value = measure_value(&mu, Cylinder::parse(&cyl, &ctx)?)?;
            Ok(scalar_output("measure", &value, structured))
        }
        Command::Tabulate { field, f, depth } => {
            let ctx = context(&field)?;
            let mu = FermionicMeasure::induced(function(&f, &ctx)?);
            Ok(Output::Text(mu.tabulate(depth, Execution::default())?.to_text()))
        }
        Command::Derivative { field, source, point, level } => {
            let ctx = context(&field)?;
            let (value, bound) = rn_derivative(&measure(&source, &ctx)?, point, level)?;
            if structured {
                let mut record = scalar_record(&value);
                record["quantity"] = json!("derivative");
                record["bound"] = json!(bound);
                return Ok(Output::Record(record));
            }
            Ok(Output::Text(format!("value: {value}\nbound: {bound:e}\n")))
        }
        Command::Check { check } => run_check(check).map(Output::Report),
    }
}

fn run_check(check: Check) -> Result<CheckReport, Usage> {
    let report = match check {
        Check::Theorem1 { field, f, g, level, slack } => {
            let ctx = context(&field)?;
            let poly = function(&f, &ctx)?.to_polynomial()?;
            let mut report = verify_theorem1(&poly, &function(&g, &ctx)?, level, slack)?;
            report.params.insert("f".into(), f);
            report.params.insert("g".into(), g);
            report
        }
        Check::Congruence { field, f, cyl } => {
            let ctx = context(&field)?;
            let poly = function(&f, &ctx)?.to_polynomial()?;
            let mut report = congruence_check(&poly, Cylinder::parse(&cyl, &ctx)?)?;
            report.params.insert("f".into(), f);
            report
        }
        Check::Additivity { field, source, cyl } => {
            let mu = measure(&source, &context(&field)?)?;
            let cyl = Cylinder::parse(&cyl, mu.context())?;
            additivity_check(&mu, cyl)?
        }
        Check::Strong { field, source, level } => {
            strong_delta(&measure(&source, &context(&field)?)?, 0..=level)?
        }
        Check::Decompose { field, source, level } => {
            decompose(&measure(&source, &context(&field)?)?, level)?.report
        }
    };
    Ok(report)
}
