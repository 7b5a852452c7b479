use std::path::Path;
use std::thread;

use qcrb_core::checks::{run_suite, SuiteOutcome, SUITES};
use qcrb_core::logderiv::fisher_sld;
use qcrb_core::model::{example_dim2, example_dim4, load_model};
use qcrb_core::{
    bound_report, BoundReport, Error, ModelPoint, RMatrix, ReportOptions, Result, WeightMatrix,
};

use crate::args::{BoundsArgs, Builtin, CheckArgs, Format, SweepArgs};
use crate::format::{csv, num, table};

/// Rendered output plus whether every check passed.
pub struct Rendered {
    pub text: String,
    pub failure: Option<String>,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered {
            text,
            failure: None,
        }
    }
}

fn builtin_model(b: Builtin, a: f64, r: f64) -> Result<ModelPoint> {
    match b {
        Builtin::Dim2 => example_dim2(a, r),
        Builtin::Dim4 => example_dim4(a, r),
    }
}

/// Resolves `identity`, `sld`, or a path to a JSON real matrix.
pub fn resolve_weight(spec: &str, m: &ModelPoint) -> Result<WeightMatrix> {
    match spec {
        "identity" => Ok(WeightMatrix::identity(m.d())),
        "sld" => WeightMatrix::new(fisher_sld(m).real_part()),
        path => {
            let g = load_weight(Path::new(path))?;
            if g.nrows() != m.d() {
                return Err(Error::InvalidWeight(format!(
                    "weight is {}x{} but the model has {} parameters",
                    g.nrows(),
                    g.ncols(),
                    m.d()
                )));
            }
            WeightMatrix::new(g)
        }
    }
}

fn load_weight(path: &Path) -> Result<RMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::FormatError(format!("{}: {e}", path.display())))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| Error::FormatError(format!("{}: {e}", path.display())))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(Error::FormatError(format!(
            "{}: weight must be a square matrix",
            path.display()
        )));
    }
    Ok(RMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Parses `LO:HI:STEP` into an inclusive grid.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidInput(format!("r-range `{spec}` is not LO:HI:STEP"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(bad());
    };
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || step <= 0.0 || hi < lo {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

pub fn bounds(args: &BoundsArgs) -> Result<Rendered> {
    let m = match (&args.source.model, args.source.builtin) {
        (Some(path), _) => load_model(path)?,
        (None, Some(b)) => builtin_model(b, args.source.a, args.r)?,
        (None, None) => {
            return Err(Error::InvalidInput(
                "one of --model or --builtin is required".into(),
            ))
        }
    };
    let g = resolve_weight(&args.weight, &m)?;
    let opts = ReportOptions {
        betas: args.beta.clone(),
        ..Default::default()
    };
    let report = bound_report(&g, &m, &opts)?;
    Ok(render_report(&report, args.format).into())
}

fn report_rows(rep: &BoundReport) -> Vec<Vec<String>> {
    let tag = |k: &str| rep.method_tags.get(k).copied().unwrap_or("").to_string();
    let mut rows = vec![
        vec!["c_sld".into(), num(rep.c_sld), tag("c_sld")],
        vec!["c_rld".into(), num(rep.c_rld), tag("c_rld")],
    ];
    for bv in &rep.c_beta {
        rows.push(vec![
            format!("c_beta({})", num(bv.beta)),
            num(bv.value),
            tag("c_beta"),
        ]);
    }
    rows.push(vec![
        "beta_star".into(),
        num(rep.beta_star),
        tag("c_beta_star"),
    ]);
    rows.push(vec![
        "c_max_beta".into(),
        num(rep.c_beta_star),
        tag("c_beta_star"),
    ]);
    if let Some(h) = rep.c_holevo {
        rows.push(vec!["c_holevo".into(), num(h), tag("c_holevo")]);
    }
    if let Some(h) = rep.c_holevo_sdp {
        rows.push(vec!["c_holevo_sdp".into(), num(h), tag("c_holevo_sdp")]);
    }
    rows.push(vec!["c_upper".into(), num(rep.c_upper), tag("c_upper")]);
    rows.push(vec![
        "extension_dim".into(),
        rep.extension_dim.to_string(),
        String::new(),
    ]);
    rows.push(vec![
        "dinv_tangent_residual".into(),
        num(rep.dinv.tangent_residual),
        String::new(),
    ]);
    rows.push(vec![
        "dinv_sld_residual".into(),
        num(rep.dinv.sld_residual),
        String::new(),
    ]);
    rows.push(vec![
        "dinv_fisher_identity_error".into(),
        num(rep.dinv.fisher_identity_error),
        String::new(),
    ]);
    rows.push(vec![
        "dinv_invariant".into(),
        rep.dinv.invariant.to_string(),
        String::new(),
    ]);
    rows
}

fn render_report(rep: &BoundReport, format: Format) -> String {
    let header = ["quantity", "value", "method"];
    match format {
        Format::Table => {
            let mut out = format!("model {} (dim {}, d {})\n", rep.label, rep.dim, rep.d);
            out.push_str(&table(&header, &report_rows(rep)));
            out
        }
        Format::Csv => csv(&header, &report_rows(rep)),
        Format::Json => serde_json::to_string_pretty(rep).expect("report serializes") + "\n",
    }
}

const SWEEP_COLUMNS: [&str; 6] = ["r", "beta_star", "c_max_beta", "c_holevo", "c_sld", "c_rld"];

fn sweep_row(args: &SweepArgs, r: f64) -> Result<Vec<String>> {
    let m = builtin_model(args.builtin, args.a, r)?;
    let g = resolve_weight(&args.weight, &m)?;
    let opts = ReportOptions {
        skip_sdp: true,
        ..Default::default()
    };
    let rep = bound_report(&g, &m, &opts)?;
    let h = rep.c_holevo.expect("holevo bound requested");
    Ok(vec![
        num(r),
        num(rep.beta_star),
        num(rep.c_beta_star),
        num(h),
        num(rep.c_sld),
        num(rep.c_rld),
    ])
}

pub fn sweep(args: &SweepArgs) -> Result<Rendered> {
    let grid = parse_range(&args.r_range)?;
    let rows = thread::scope(|s| {
        let handles: Vec<_> = grid
            .iter()
            .map(|&r| s.spawn(move || sweep_row(args, r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let text = match args.format {
        Format::Csv => csv(&SWEEP_COLUMNS, &rows),
        Format::Table => table(&SWEEP_COLUMNS, &rows),
        Format::Json => {
            let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|row| {
                    SWEEP_COLUMNS
                        .iter()
                        .zip(row)
                        .map(|(k, v)| {
                            let x: f64 = v.parse().expect("formatted number parses");
                            (k.to_string(), serde_json::json!(x))
                        })
                        .collect()
                })
                .collect();
            serde_json::to_string_pretty(&objs).expect("rows serialize") + "\n"
        }
    };
    Ok(text.into())
}

pub fn check(args: &CheckArgs) -> Result<Rendered> {
    let names: Vec<&str> = match &args.suite {
        Some(name) => vec![name.as_str()],
        None => SUITES.to_vec(),
    };
    let outcomes = names
        .iter()
        .map(|n| run_suite(n, args.seed))
        .collect::<Result<Vec<SuiteOutcome>>>()?;
    let failure = outcomes.iter().find(|o| !o.passed).map(|o| {
        format!(
            "suite {} failed: {}",
            o.name,
            o.failure.as_deref().unwrap_or("tolerance exceeded")
        )
    });
    let header = ["suite", "status", "cases", "worst", "tolerance", "note"];
    let rows: Vec<Vec<String>> = outcomes
        .iter()
        .map(|o| {
            vec![
                o.name.to_string(),
                if o.passed { "pass" } else { "FAIL" }.to_string(),
                o.cases.to_string(),
                num(o.worst),
                num(o.tolerance),
                o.note.clone(),
            ]
        })
        .collect();
    let text = match args.format {
        Format::Table => {
            let passed = outcomes.iter().filter(|o| o.passed).count();
            let mut t = format!("seed {}\n", args.seed);
            t.push_str(&table(&header, &rows));
            t.push_str(&format!("{passed} of {} suites passed\n", outcomes.len()));
            t
        }
        Format::Csv => csv(&header, &rows),
        Format::Json => serde_json::to_string_pretty(&outcomes).expect("outcomes serialize") + "\n",
    };
    Ok(Rendered { text, failure })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_is_inclusive() {
        let g = parse_range("0:0.9:0.1").unwrap();
        assert_eq!(g.len(), 10);
        assert!((g[9] - 0.9).abs() < 1e-12);
        assert_eq!(parse_range("0.3:0.3:0.1").unwrap(), vec![0.3]);
    }

    #[test]
    fn bad_ranges() {
        for spec in ["0:1", "0:1:0", "1:0:0.1", "a:b:c", "0:1:-0.1"] {
            assert!(
                matches!(parse_range(spec), Err(Error::InvalidInput(_))),
                "{spec}"
            );
        }
    }

    #[test]
    fn weight_names() {
        let m = example_dim2(0.95, 0.1).unwrap();
        assert_eq!(
            resolve_weight("identity", &m).unwrap().entries(),
            &RMatrix::identity(2, 2)
        );
        let g = resolve_weight("sld", &m).unwrap();
        assert_eq!(g.entries(), &fisher_sld(&m).real_part());
        assert!(matches!(
            resolve_weight("/nonexistent/w.json", &m),
            Err(Error::FormatError(_))
        ));
    }
}
