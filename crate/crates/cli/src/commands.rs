use std::path::Path;

use measdep_core::bounds::bound_hall;
use measdep_core::measures::correlation;
use measdep_core::model::JointSetting;
use measdep_core::oracle::Branch;
use measdep_core::{
    banik_model, bound_banik, bound_four_param, bound_two_param, chsh_s, four_param_model, hall_model, interp_model,
    load_model, max_s_four_param, max_s_two_param, measurement_dependence, mutual_information, run_suite, save_model,
    sweep, AnyModel, HiddenVariableModel, ModelParams, Number, Rational, Scalar, SuiteOptions,
};
use serde_json::Value;

use crate::output::{emit, json_value, render_table};
use crate::{Command, Failure, Family, Format, ParamFlags};

/// Float results count as saturating within this slack.
const SATURATION_TOL: f64 = 1e-9;

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Eval { model, format } => eval(&model, format),
        Command::Construct { family, params, out } => construct(family, &params, out.as_deref()),
        Command::Sweep { figure, format, out } => {
            let grid = sweep(figure)?;
            let text = match format {
                Format::Csv => grid.to_csv(),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&grid.to_json()).expect("JSON serializes");
                    s.push('\n');
                    s
                }
            };
            Ok(emit(&text, out.as_deref())?)
        }
        Command::Oracle { params, witness, format } => oracle(&params, witness.as_deref(), format),
        Command::Verify { level, seed, format } => verify(SuiteOptions::new(level, seed), format),
    }
}

fn eval(path: &Path, format: Option<Format>) -> Result<(), Failure> {
    let loaded = load_model(path).map_err(|e| match e {
        measdep_core::Error::Io(io) => {
            let context = std::io::Error::new(io.kind(), format!("{}: {io}", path.display()));
            Failure::Core(context.into())
        }
        other => Failure::Core(other),
    })?;
    let (rows, saturates) = match loaded {
        AnyModel::Exact(m) => eval_rows(&m)?,
        AnyModel::Float(m) => eval_rows(&m)?,
    };
    let mut text = render_table(&rows, format);
    if format.is_none() {
        text.push_str(&format!("saturates: {}\n", if saturates { "yes" } else { "no" }));
    }
    Ok(emit(&text, None)?)
}

fn same<T: Scalar>(a: &T, b: &T) -> bool {
    if T::EXACT {
        a == b
    } else {
        (a.to_f64() - b.to_f64()).abs() <= SATURATION_TOL
    }
}

fn yes_no(b: bool) -> Value {
    Value::String(if b { "yes" } else { "no" }.to_string())
}

/// Every quantity reported by `eval`, in print order, plus whether `S`
/// reaches the two-parameter bound of the measured `M1`, `M2`.
fn eval_rows<T: Scalar>(model: &HiddenVariableModel<T>) -> Result<(Vec<(String, Value)>, bool), Failure> {
    let s = chsh_s(model)?;
    let rep = measurement_dependence(model)?;
    let info = mutual_information(model)?;
    let two = bound_two_param(&rep.m1, &rep.m2)?;
    let params = ModelParams::four(rep.m1.clone(), rep.m2.clone(), rep.mhat1.clone(), rep.mhat2.clone());
    let four = bound_four_param(&params)?;
    let (sat_two, sat_four) = (same(&s, &two), same(&s, &four));

    let mut rows: Vec<(String, Value)> = vec![
        ("label".into(), Value::String(model.label().to_string())),
        ("lambda_count".into(), model.lambda_count().into()),
        ("exact".into(), T::EXACT.into()),
        ("S".into(), json_value(&s)),
    ];
    for js in JointSetting::ALL {
        rows.push((format!("E({})", js.label()), json_value(&correlation(model, js)?)));
    }
    let measures: [(&str, &T); 12] = [
        ("M", &rep.m),
        ("M1", &rep.m1),
        ("M2", &rep.m2),
        ("Mhat1", &rep.mhat1),
        ("Mhat2", &rep.mhat2),
        ("M1[y]", &rep.m1_given[0]),
        ("M1[y']", &rep.m1_given[1]),
        ("M2[x]", &rep.m2_given[0]),
        ("M2[x']", &rep.m2_given[1]),
        ("F", &rep.f),
        ("F1", &rep.f1),
        ("F2", &rep.f2),
    ];
    rows.extend(measures.iter().map(|(k, v)| (k.to_string(), json_value(*v))));
    rows.push(("mutual_information_bits".into(), serde_json::json!(info)));
    rows.push(("bound_two_param".into(), json_value(&two)));
    rows.push(("saturates_two_param".into(), yes_no(sat_two)));
    rows.push(("bound_four_param".into(), json_value(&four)));
    rows.push(("saturates_four_param".into(), yes_no(sat_four)));
    rows.push(("bound_hall(M)".into(), json_value(&bound_hall(&rep.m)?)));
    rows.push(("bound_banik(M1)".into(), json_value(&bound_banik(&rep.m1)?)));
    Ok((rows, sat_two))
}

fn flag_error(family: &str, flag: &str) -> Failure {
    Failure::Usage(format!("{family} requires --{flag}"))
}

/// The supplied flags, checked against the ones `family` uses.
fn collect(
    params: &ParamFlags,
    family: &str,
    wanted: &[&'static str],
    optional: &[&'static str],
) -> Result<Vec<Option<Number>>, Failure> {
    let all = [
        ("m1", &params.m1),
        ("m2", &params.m2),
        ("mhat1", &params.mhat1),
        ("mhat2", &params.mhat2),
        ("p", &params.p),
    ];
    for (name, value) in &all {
        if value.is_some() && !wanted.contains(name) && !optional.contains(name) {
            return Err(Failure::Usage(format!("--{name} is not used by {family}")));
        }
    }
    let mut out = Vec::new();
    for name in wanted.iter().chain(optional) {
        let value = all.iter().find(|(n, _)| n == name).and_then(|(_, v)| (*v).clone());
        if value.is_none() && wanted.contains(name) {
            return Err(flag_error(family, name));
        }
        out.push(value);
    }
    Ok(out)
}

fn exact_all(values: &[Number]) -> Option<Vec<Rational>> {
    values.iter().map(|v| v.as_exact().cloned()).collect()
}

fn construct(family: Family, params: &ParamFlags, out: Option<&Path>) -> Result<(), Failure> {
    let (name, wanted): (&str, &[&'static str]) = match family {
        Family::TwoParam => ("two-param", &["m1", "m2"]),
        Family::FourParam => ("four-param", &["m1", "m2", "mhat1", "mhat2"]),
        Family::Interp => ("interp", &["m1", "m2"]),
        Family::Hall => ("hall", &["p"]),
        Family::Banik => ("banik", &["p"]),
    };
    let values: Vec<Number> = collect(params, name, wanted, &[])?.into_iter().flatten().collect();
    let model = match exact_all(&values) {
        Some(v) => AnyModel::Exact(build(family, &v)?),
        None => {
            let v: Vec<f64> = values.iter().map(Number::to_f64).collect();
            AnyModel::Float(build(family, &v)?)
        }
    };
    let mut text = model.to_json_string();
    text.push('\n');
    Ok(emit(&text, out)?)
}

fn build<T: Scalar>(family: Family, v: &[T]) -> measdep_core::Result<HiddenVariableModel<T>> {
    match family {
        Family::TwoParam => measdep_core::two_param_model(&v[0], &v[1]),
        Family::FourParam => four_param_model(&ModelParams::four(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone())),
        Family::Interp => interp_model(&v[0], &v[1]),
        Family::Hall => hall_model(&v[0]),
        Family::Banik => banik_model(&v[0]),
    }
}

fn branch_name(b: &Branch) -> String {
    let side = |primed: bool, base: &str| if primed { format!("{base}'") } else { base.to_string() };
    format!(
        "M1[{}]<=Mhat1 & M2[{}]<=Mhat2",
        side(b.alice == measdep_core::model::Variant::Primed, "y"),
        side(b.bob == measdep_core::model::Variant::Primed, "x")
    )
}

fn oracle(params: &ParamFlags, witness: Option<&Path>, format: Option<Format>) -> Result<(), Failure> {
    let values = collect(params, "oracle", &["m1", "m2"], &["mhat1", "mhat2"])?;
    let mut exact = Vec::new();
    for (name, value) in ["m1", "m2", "mhat1", "mhat2"].iter().zip(&values) {
        match value {
            Some(Number::Exact(r)) => exact.push(Some(r.clone())),
            Some(Number::Float(x)) => {
                return Err(Failure::Usage(format!(
                    "the oracle solves exact rational LPs; give --{name} as a fraction such as 1/5 (got {x})"
                )))
            }
            None => exact.push(None),
        }
    }
    let (m1, m2) = (exact[0].clone().unwrap(), exact[1].clone().unwrap());
    let four = exact[2].is_some() || exact[3].is_some();
    let mut rows: Vec<(String, Value)> = Vec::new();
    let (result, bound) = if four {
        let h1 = exact[2].clone().unwrap_or_else(|| m1.clone());
        let h2 = exact[3].clone().unwrap_or_else(|| m2.clone());
        let p = ModelParams::four(m1, m2, h1, h2);
        let bound = bound_four_param(&p)?;
        (max_s_four_param(&p)?, bound)
    } else {
        let bound = bound_two_param(&m1, &m2)?;
        (max_s_two_param(&m1, &m2)?, bound)
    };
    let tight = result.s_max == bound;
    rows.push(("s_max".into(), json_value(&result.s_max)));
    rows.push(("bound".into(), json_value(&bound)));
    rows.push(("tight".into(), yes_no(tight)));
    if four {
        let names: Vec<String> = result.branches.iter().map(branch_name).collect();
        rows.push(("maximizing_branches".into(), Value::String(names.join("; "))));
    }
    rows.push(("witness_S".into(), json_value(&chsh_s(&result.witness)?)));
    emit(&render_table(&rows, format), None)?;
    if let Some(path) = witness {
        save_model(&AnyModel::Exact(result.witness), path)?;
    }
    if tight {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn verify(opts: SuiteOptions, format: Option<Format>) -> Result<(), Failure> {
    let report = run_suite(&opts);
    let text = match format {
        Some(Format::Json) => {
            let mut s = serde_json::to_string_pretty(&report).expect("JSON serializes");
            s.push('\n');
            s
        }
        Some(Format::Csv) => {
            let mut s = String::from("section,status,checks,failures\n");
            for sec in &report.sections {
                let status = if sec.passed() { "PASS" } else { "FAIL" };
                s.push_str(&format!("{},{status},{},{}\n", sec.name, sec.checks, sec.failures.len()));
            }
            s
        }
        None => {
            const SHOWN: usize = 10;
            let mut s = format!("verify level={} seed={}\n", report.level, report.seed);
            for sec in &report.sections {
                if sec.passed() {
                    s.push_str(&format!("PASS {} ({} checks)\n", sec.name, sec.checks));
                } else {
                    s.push_str(&format!("FAIL {} ({} of {} checks failed)\n", sec.name, sec.failures.len(), sec.checks));
                    for f in sec.failures.iter().take(SHOWN) {
                        s.push_str(&format!("    {f}\n"));
                    }
                    if sec.failures.len() > SHOWN {
                        s.push_str(&format!("    ... {} more\n", sec.failures.len() - SHOWN));
                    }
                }
            }
            let passed = report.sections.iter().filter(|s| s.passed()).count();
            let checks: usize = report.sections.iter().map(|s| s.checks).sum();
            s.push_str(&format!("{passed}/{} sections passed, {checks} checks\n", report.sections.len()));
            s
        }
    };
    emit(&text, None)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
