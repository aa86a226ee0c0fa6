//! Command-line interface: field invariants, class groups, cohomology
//! tables, cup products, the Chern-Simons vanishing criterion and the
//! corpus scanner. JSON on standard output (big integers as decimal
//! strings); a short human summary on standard error when attached to a
//! terminal; exit 0 on success, 1 on a mathematical precondition
//! failure, 2 on a usage error.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use avcup::classunit::class_group;
use avcup::cohomology::{bockstein, cup_11, cup_12, top_data, CohomologyCtx, H1Class, H2Class};
use avcup::error::Error;
use avcup::ext::CyclicExtension;
use avcup::kim::{kim_invariant, scan, ScanConfig};
use avcup::nf::NumberField;
use avcup::parse::{format_element, format_int_poly, parse_element, parse_int_poly, parse_rat_poly};

#[derive(Parser)]
#[command(name = "avcup", version, about = "Etale cohomology of number rings: duality tables, cup products and the Chern-Simons vanishing criterion")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArgs {
    /// Defining polynomial, e.g. "x^2+5".
    #[arg(long)]
    poly: String,
    /// Random seed for the relation and witness searches.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit JSON only (suppress the terminal summary).
    #[arg(long, default_value_t = false)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integral basis, discriminant and signature of a number field.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Class group invariants and class number.
    ClassGroup {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// The four cohomology groups H^i(X, Z/n) and their duals.
    Cohomology {
        #[command(flatten)]
        field: FieldArgs,
        /// Coefficient modulus n.
        #[arg(long)]
        n: u64,
    },
    /// Cup product: x from an extension spec; y an extension spec
    /// (degree-1 class, computes x cup y in H^2) or a functional table
    /// (degree-2 class, computes the pairing <x cup y, zeta> in H^3).
    Cup {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u64,
        /// JSON: {"base_poly","n","v"} or {"top_poly","sigma_image"}.
        #[arg(long)]
        x: String,
        /// JSON as for --x, or {"values": ["0","1",...]},
        /// or {"bockstein_of": <extension JSON>}.
        #[arg(long)]
        y: String,
    },
    /// The vanishing criterion for the invariant attached to
    /// L = K(v^{1/n}).
    Kim {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u64,
        /// The radicand v, an element of K, e.g. "-1" or "x+2".
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Scan imaginary quadratic fields in a discriminant range; one
    /// JSON-lines record per admissible job.
    Scan {
        /// Discriminant range "a..b" (inclusive, negative), e.g.
        /// "-500..-3".
        #[arg(long, value_name = "a..b", allow_hyphen_values = true)]
        disc_range: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// JSON-lines cache file for incremental reruns.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, default_value_t = false)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::ReduciblePolynomial(_) | Error::NonMonic => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}

fn emit(doc: &Value, json_only: bool, summary: String) {
    println!("{doc}");
    if !json_only && std::io::stderr().is_terminal() {
        eprintln!("{summary}");
    }
}

fn invariant_strings(invs: &[num_bigint::BigInt]) -> Vec<String> {
    invs.iter().map(|d| d.to_string()).collect()
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.cmd {
        Cmd::FieldInfo { field } => {
            let k = NumberField::make(parse_int_poly(&field.poly)?)?;
            let basis: Vec<String> = (0..k.degree)
                .map(|i| {
                    let coords: Vec<num_bigint::BigInt> = (0..k.degree)
                        .map(|j| if i == j { 1.into() } else { 0.into() })
                        .collect();
                    format_element(&k, &k.elt(coords, 1.into()))
                })
                .collect();
            let (r1, r2) = k.signature;
            let doc = json!({
                "poly": format_int_poly(&k.poly),
                "degree": k.degree,
                "discriminant": k.disc.to_string(),
                "signature": [r1, r2],
                "totally_imaginary": k.is_totally_imaginary(),
                "integral_basis": basis,
            });
            emit(
                &doc,
                field.json,
                format!(
                    "degree {} field, discriminant {}, signature ({}, {})",
                    k.degree, k.disc, r1, r2
                ),
            );
        }
        Cmd::ClassGroup { field } => {
            let k = NumberField::make(parse_int_poly(&field.poly)?)?;
            let cls = class_group(&k, field.seed)?;
            let doc = json!({
                "poly": format_int_poly(&k.poly),
                "class_number": cls.h.to_string(),
                "invariants": invariant_strings(&cls.invariants),
            });
            emit(
                &doc,
                field.json,
                format!("class number {}, invariants {:?}", cls.h, cls.invariants),
            );
        }
        Cmd::Cohomology { field, n } => {
            let k = NumberField::make(parse_int_poly(&field.poly)?)?;
            let ctx = CohomologyCtx::new(k, n, field.seed)?;
            let mut h = Vec::new();
            let mut ext = Vec::new();
            for i in 0..=3 {
                h.push(invariant_strings(&ctx.h_group(i)?.invariants));
                ext.push(invariant_strings(&ctx.ext_group(i)?.invariants));
            }
            let orders: Vec<String> = (0..=3)
                .map(|i| ctx.h_group(i).map(|g| g.order().to_string()))
                .collect::<Result<_, _>>()?;
            let doc = json!({
                "poly": format_int_poly(&ctx.field.poly),
                "n": n,
                "h": h,
                "ext": ext,
                "h_orders": orders,
            });
            emit(
                &doc,
                field.json,
                format!("|H^i(X, Z/{n})| for i = 0..3: {orders:?}"),
            );
        }
        Cmd::Cup { field, n, x, y } => {
            let k = NumberField::make(parse_int_poly(&field.poly)?)?;
            let ctx = CohomologyCtx::new(k, n, field.seed)?;
            let x1 = parse_h1(&ctx, n, &x)?;
            let yv: Value = serde_json::from_str(&y)
                .map_err(|e| Error::Parse(format!("--y is not valid JSON: {e}")))?;
            let doc = if yv.get("values").is_some() || yv.get("bockstein_of").is_some() {
                let y2 = parse_h2(&ctx, n, &yv)?;
                let z = cup_12(&ctx, &x1, &y2, field.seed)?;
                json!({
                    "kind": "cup_12",
                    "n": n,
                    "value": z.value.to_string(),
                })
            } else {
                let y1 = parse_h1(&ctx, n, &y)?;
                let top = top_data(&x1.ext, field.seed)?;
                let z = cup_11(&ctx, &x1, &y1, &top, field.seed)?;
                json!({
                    "kind": "cup_11",
                    "n": n,
                    "values": invariant_strings(&z.values),
                })
            };
            emit(&doc, field.json, format!("cup product: {doc}"));
        }
        Cmd::Kim { field, n, v } => {
            let k = NumberField::make(parse_int_poly(&field.poly)?)?;
            let ctx = CohomologyCtx::new(k, n, field.seed)?;
            let velt = parse_element(&ctx.field, &v)?;
            let r = kim_invariant(&ctx, &velt, field.seed)?;
            let doc = json!({
                "poly": format_int_poly(&ctx.field.poly),
                "n": n,
                "v": format_element(&ctx.field, &velt),
                "vanishes": r.vanishes,
                "trivial": r.trivial,
                "d": r.d,
                "artin_value": r.artin_value.to_string(),
                "cup_value": r.cup_value.to_string(),
            });
            emit(
                &doc,
                field.json,
                format!(
                    "invariant {} (d = {}, Artin value {})",
                    if r.vanishes { "vanishes" } else { "does not vanish" },
                    r.d,
                    r.artin_value
                ),
            );
        }
        Cmd::Scan {
            disc_range,
            n,
            seed,
            cache,
            json: json_only,
        } => {
            let (lo, hi) = parse_range(&disc_range)?;
            let cfg = ScanConfig {
                disc_lo: lo,
                disc_hi: hi,
                n,
                seed,
                cache,
            };
            let records = scan(&cfg)?;
            for r in &records {
                println!("{}", serde_json::to_string(r).expect("serializable record"));
            }
            if !json_only && std::io::stderr().is_terminal() {
                let nonvan = records
                    .iter()
                    .filter(|r| r.vanishes == Some(false))
                    .count();
                eprintln!(
                    "{} admissible jobs, {} non-vanishing",
                    records.len(),
                    nonvan
                );
            }
        }
    }
    Ok(())
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("range must be 'a..b', got '{s}'")))?;
    let lo: i64 = a
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound '{a}'")))?;
    let hi: i64 = b
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range bound '{b}'")))?;
    Ok((lo, hi))
}

fn parse_h1(ctx: &CohomologyCtx, n: u64, spec: &str) -> Result<H1Class, Error> {
    let v: Value = serde_json::from_str(spec)
        .map_err(|e| Error::Parse(format!("class spec is not valid JSON: {e}")))?;
    parse_h1_value(ctx, n, &v)
}

fn parse_h1_value(ctx: &CohomologyCtx, n: u64, v: &Value) -> Result<H1Class, Error> {
    let get_str = |key: &str| -> Option<&str> { v.get(key).and_then(Value::as_str) };
    if let Some(radicand) = get_str("v") {
        if let Some(bp) = get_str("base_poly") {
            let declared = parse_int_poly(bp)?;
            if declared.coeffs != ctx.field.poly.coeffs {
                return Err(Error::Parse(
                    "base_poly of the class spec does not match --poly".into(),
                ));
            }
        }
        let spec_n = v.get("n").and_then(Value::as_u64).unwrap_or(n);
        if spec_n != n {
            return Err(Error::Parse("class spec modulus does not match --n".into()));
        }
        let velt = parse_element(&ctx.field, radicand)?;
        return Ok(H1Class {
            ext: CyclicExtension::build_kummer(&ctx.field, n, &velt)?,
        });
    }
    if let (Some(tp), Some(si)) = (get_str("top_poly"), get_str("sigma_image")) {
        let top_poly = parse_int_poly(tp)?;
        let sigma = parse_rat_poly(si)?;
        return Ok(H1Class {
            ext: CyclicExtension::from_explicit(&ctx.field, n, top_poly, &sigma)?,
        });
    }
    Err(Error::Parse(
        "class spec needs either {\"base_poly\",\"n\",\"v\"} or {\"top_poly\",\"sigma_image\"}"
            .into(),
    ))
}

fn parse_h2(ctx: &CohomologyCtx, n: u64, v: &Value) -> Result<H2Class, Error> {
    if let Some(vals) = v.get("values").and_then(Value::as_array) {
        let mut values = Vec::with_capacity(vals.len());
        for item in vals {
            let s = item
                .as_str()
                .ok_or_else(|| Error::Parse("values must be decimal strings".into()))?;
            values.push(
                s.parse::<num_bigint::BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer '{s}'")))?,
            );
        }
        return H2Class::new(ctx, values);
    }
    if let Some(inner) = v.get("bockstein_of") {
        let x = parse_h1_value(ctx, n, inner)?;
        return bockstein(ctx, &x);
    }
    Err(Error::Parse(
        "functional spec needs {\"values\": [...]} or {\"bockstein_of\": {...}}".into(),
    ))
}
