//! Self-check suite behind `measdep verify`.
//!
//! Each section re-derives one family of results (saturation, LP tightness,
//! round trips, information values, orderings, closed forms, randomized
//! soundness, reductions) and reports every failing point by name.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    bound_banik, bound_four_param, bound_hall, bound_two_param, check_inequality_chain, check_param_feasible,
    ModelParams,
};
use crate::constructors::{banik_model, four_param_model, hall_model, interp_model, interp_yellow_rows, two_param_model};
use crate::error::{Error, Result};
use crate::info::{
    i_banik, i_banik_closed_form, i_four, i_four_direct, i_g, i_g_direct, i_g_min, i_g_min_numeric, i_hall,
    i_interp, i_interp_direct, i_interp_min, i_interp_slice, i_interp_slice_closed_form, mutual_information, V_T,
};
use crate::measures::{chsh_s, measurement_dependence};
use crate::model::{validate_model, HiddenVariableModel};
use crate::oracle::{max_s_four_param, max_s_two_param};
use crate::sampling::random_models;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Level::Quick),
            "full" => Ok(Level::Full),
            other => Err(Error::Parse(format!("unknown level '{other}' (expected quick or full)"))),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Quick => "quick",
            Level::Full => "full",
        })
    }
}

/// Four-parameter constructor under test. Replaceable so that tests can
/// inject a faulty table and confirm the suite catches it.
pub type FourParamConstructor = fn(&ModelParams<Rational>) -> Result<HiddenVariableModel<Rational>>;

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub level: Level,
    pub seed: u64,
    pub four_param: FourParamConstructor,
}

impl SuiteOptions {
    pub fn new(level: Level, seed: u64) -> Self {
        SuiteOptions { level, seed, four_param: four_param_model::<Rational> }
    }

    fn two_param_den(&self) -> i64 {
        match self.level {
            Level::Quick => 2,
            Level::Full => 5,
        }
    }

    /// Four-parameter grid step is `2 / den`.
    fn four_param_den(&self) -> i64 {
        match self.level {
            Level::Quick => 2,
            Level::Full => 5,
        }
    }

    fn random_count(&self) -> usize {
        match self.level {
            Level::Quick => 100,
            Level::Full => 1000,
        }
    }

    fn closed_form_step(&self) -> f64 {
        match self.level {
            Level::Quick => 0.1,
            Level::Full => 0.02,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectionReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub level: Level,
    pub seed: u64,
    pub sections: Vec<SectionReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(SectionReport::passed)
    }

    pub fn section(&self, name: &str) -> Option<&SectionReport> {
        self.sections.iter().find(|s| s.name == name)
    }
}

/// Collects check outcomes for one section.
struct Section {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Section {
    fn new(name: &'static str) -> Self {
        Section { name, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    fn close(&mut self, label: &str, got: f64, want: f64, tol: f64) {
        self.check((got - want).abs() <= tol, || {
            format!("{label}: got {got:.10}, expected {want:.10} ± {tol:e}")
        });
    }

    fn absorb(&mut self, results: Vec<Option<String>>) {
        self.checks += results.len();
        self.failures.extend(results.into_iter().flatten());
    }

    fn error(&mut self, label: &str, e: &Error) {
        self.checks += 1;
        self.failures.push(format!("{label}: {e}"));
    }

    fn finish(self) -> SectionReport {
        SectionReport { name: self.name, checks: self.checks, failures: self.failures }
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn grid(den: i64) -> Vec<Rational> {
    (0..=2 * den).map(|k| r(k, den)).collect()
}

/// Feasible `(M1, M2, M̂1, M̂2)` with every value in `{0, 2/den, ..., 2}`.
pub fn four_param_grid(den: i64) -> Vec<ModelParams<Rational>> {
    let g: Vec<Rational> = (0..=den).map(|k| r(2 * k, den)).collect();
    let mut out = Vec::new();
    for m1 in &g {
        for m2 in &g {
            for h1 in &g {
                for h2 in &g {
                    let p = ModelParams::four(m1.clone(), m2.clone(), h1.clone(), h2.clone());
                    if check_param_feasible(&p).is_feasible() {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn describe(p: &ModelParams<Rational>) -> String {
    format!("(M1={}, M2={}, M̂1={}, M̂2={})", p.m1, p.m2, p.mhat1(), p.mhat2())
}

/// Rational approximation of `√2` from the Pell convergents `p/q`, accurate
/// to about `5.8^-n`.
pub fn sqrt2_convergent(n: usize) -> Rational {
    let (mut p, mut q) = (BigInt::from(1), BigInt::from(1));
    for _ in 0..n {
        let next_p = &p + BigInt::from(2) * &q;
        q += &p;
        p = next_p;
    }
    Rational::new(p, q)
}

/// Runs every section.
pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let sections = vec![
        tsirelson(opts),
        two_param_tightness(opts),
        four_param_tightness(opts),
        round_trip(opts),
        information_values(),
        interp_minimum(),
        orderings(),
        closed_forms(opts),
        soundness(opts),
        reductions(opts),
    ];
    SuiteReport { level: opts.level, seed: opts.seed, sections }
}

fn tsirelson(opts: &SuiteOptions) -> SectionReport {
    let mut s = Section::new("tsirelson");
    let target = 2.0 * std::f64::consts::SQRT_2;
    let t = V_T / 3.0;
    match two_param_model(&t, &t).and_then(|m| chsh_s(&m)) {
        Ok(v) => s.close("S at M1 = M2 = V_T/3 (float)", v, target, 1e-12),
        Err(e) => s.error("float model", &e),
    }
    // With M = (2/3)(√2 − 1) approximated rationally, S = 2 + 3M exactly.
    let m = (sqrt2_convergent(40) - r(1, 1)) * r(2, 3);
    match two_param_model(&m, &m).and_then(|model| chsh_s(&model)) {
        Ok(v) => {
            let exact = r(2, 1) + r(3, 1) * m.clone();
            s.check(v == exact, || format!("rational proxy: S = {v}, expected {exact}"));
            s.close("S at rational proxy of V_T/3", v.to_f64(), target, 1e-12);
        }
        Err(e) => s.error("rational proxy model", &e),
    }
    for m1 in grid(opts.two_param_den()) {
        for m2 in grid(opts.two_param_den()) {
            let got = two_param_model(&m1, &m2).and_then(|m| chsh_s(&m));
            let want = bound_two_param(&m1, &m2);
            s.check(matches!((&got, &want), (Ok(a), Ok(b)) if a == b), || {
                format!("(M1={m1}, M2={m2}): S = {got:?}, bound {want:?}")
            });
        }
    }
    s.finish()
}

fn two_param_tightness(opts: &SuiteOptions) -> SectionReport {
    let mut s = Section::new("two-param tightness");
    let pairs: Vec<(Rational, Rational)> = grid(opts.two_param_den())
        .into_iter()
        .flat_map(|a| grid(opts.two_param_den()).into_iter().map(move |b| (a.clone(), b)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|(m1, m2)| {
            let want = bound_two_param(m1, m2).ok()?;
            match max_s_two_param(m1, m2) {
                Ok(res) if res.s_max == want => None,
                Ok(res) => Some(format!("(M1={m1}, M2={m2}): oracle {}, bound {want}", res.s_max)),
                Err(e) => Some(format!("(M1={m1}, M2={m2}): {e}")),
            }
        })
        .collect();
    s.absorb(results);
    s.finish()
}

fn four_param_tightness(opts: &SuiteOptions) -> SectionReport {
    let mut s = Section::new("four-param tightness");
    let construct = opts.four_param;
    let results = four_param_grid(opts.four_param_den())
        .par_iter()
        .map(|p| {
            let want = match bound_four_param(p) {
                Ok(v) => v,
                Err(e) => return Some(format!("{}: {e}", describe(p))),
            };
            let oracle = max_s_four_param(p).map(|res| res.s_max);
            let built = construct(p).and_then(|m| chsh_s(&m));
            match (oracle, built) {
                (Ok(o), Ok(b)) if o == want && b == want => None,
                (o, b) => Some(format!(
                    "{}: bound {want}, oracle {}, constructed S {}",
                    describe(p),
                    o.map_or_else(|e| e.to_string(), |v| v.to_string()),
                    b.map_or_else(|e| e.to_string(), |v| v.to_string()),
                )),
            }
        })
        .collect();
    s.absorb(results);
    s.finish()
}

fn round_trip(opts: &SuiteOptions) -> SectionReport {
    let mut s = Section::new("round-trip");
    let construct = opts.four_param;
    let mut points: Vec<ModelParams<Rational>> = grid(opts.two_param_den())
        .into_iter()
        .flat_map(|a| grid(opts.two_param_den()).into_iter().map(move |b| ModelParams::two(a.clone(), b)))
        .collect();
    let two_count = points.len();
    points.extend(four_param_grid(opts.four_param_den()));
    let results = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let model = if i < two_count { two_param_model(&p.m1, &p.m2) } else { construct(p) };
            let model = match model {
                Ok(m) => m,
                Err(e) => return Some(format!("{}: {e}", describe(p))),
            };
            let validation = validate_model(&model);
            if !validation.is_valid() {
                return Some(format!("{}: invalid table ({validation})", describe(p)));
            }
            let rep = measurement_dependence(&model).ok()?;
            let want_1 = [p.m1.clone(), p.mhat1().clone()];
            let want_2 = [p.m2.clone(), p.mhat2().clone()];
            if rep.m1_given != want_1 || rep.m2_given != want_2 {
                return Some(format!(
                    "{}: measured M1[y]={}, M1[y']={}, M2[x]={}, M2[x']={}",
                    describe(p),
                    rep.m1_given[0],
                    rep.m1_given[1],
                    rep.m2_given[0],
                    rep.m2_given[1]
                ));
            }
            None
        })
        .collect();
    s.absorb(results);
    s.finish()
}

fn information_values() -> SectionReport {
    let mut s = Section::new("information values");
    let t = V_T / 3.0;
    let sqrt2 = std::f64::consts::SQRT_2;
    let values: [(&str, Result<f64>, f64, f64); 5] = [
        ("I of two-param model at (V_T/3, V_T/3)", two_param_model(&t, &t).and_then(|m| mutual_information(&m)), 0.0462738, 1e-6),
        ("i_hall(V_T)", i_hall(V_T), 0.17192, 5e-4),
        ("I of banik_model(√2 − 1)", banik_model(&(sqrt2 - 1.0)).and_then(|m| mutual_information(&m)), 0.2466, 5e-4),
        ("i_four(V_T/3)", i_four(V_T / 3.0), 0.1423, 5e-4),
        ("i_four(0)", i_four(0.0), i_g_min(V_T).map(|p| p.i).unwrap_or(f64::NAN), 1e-9),
    ];
    for (label, got, want, tol) in values {
        match got {
            Ok(v) => s.close(label, v, want, tol),
            Err(e) => s.error(label, &e),
        }
    }
    s.finish()
}

fn interp_minimum() -> SectionReport {
    let mut s = Section::new("interp minimum");
    match i_interp_min(V_T) {
        Ok(p) => {
            s.close("argmin M2", p.argmin_m2.unwrap_or(f64::NAN), 0.2063, 5e-4);
            s.close("argmin M1", p.argmin_m1().unwrap_or(f64::NAN), 0.4158, 1e-3);
            s.close("minimum I", p.i, 0.1616, 5e-4);
        }
        Err(e) => s.error("minimization", &e),
    }
    s.finish()
}

fn orderings() -> SectionReport {
    let mut s = Section::new("orderings");
    let vs: Vec<f64> = (1..=39).map(|k| k as f64 * 0.05).collect();
    let results = vs
        .par_iter()
        .map(|&v| {
            let vals = (|| Ok::<_, Error>((i_g_min(v)?.i, i_hall(v)?, i_banik(v)?, i_interp_min(v)?.i)))();
            match vals {
                Ok((g, h, b, i)) if g < h && h < b && i < h => None,
                Ok((g, h, b, i)) => Some(format!(
                    "V={v:.2}: Ĩ_G={g:.6}, I_H={h:.6}, I_B={b:.6}, Ĩ_I={i:.6}"
                )),
                Err(e) => Some(format!("V={v:.2}: {e}")),
            }
        })
        .collect();
    s.absorb(results);
    s.finish()
}

fn closed_forms(opts: &SuiteOptions) -> SectionReport {
    const TOL: f64 = 1e-9;
    let mut s = Section::new("closed forms");
    let step = opts.closed_form_step();
    let n = (2.0 / step).round() as usize;
    let axis: Vec<f64> = (0..=n).map(|k| k as f64 * step).collect();
    let compare = |label: String, a: Result<f64>, b: Result<f64>| match (a, b) {
        (Ok(x), Ok(y)) if (x - y).abs() <= TOL => None,
        (Ok(x), Ok(y)) => Some(format!("{label}: closed form {x:.12}, direct {y:.12}")),
        (a, b) => Some(format!("{label}: {a:?} / {b:?}")),
    };
    let region: Vec<(f64, f64)> = axis
        .iter()
        .flat_map(|&m1| axis.iter().map(move |&m2| (m1, m2)))
        .filter(|&(m1, m2)| m2 <= m1 + 1e-12 && m1 + 2.0 * m2 <= 2.0 + 1e-12)
        .collect();
    let results: Vec<Option<String>> = region
        .par_iter()
        .flat_map_iter(|&(m1, m2)| {
            [
                compare(format!("i_g({m1:.2}, {m2:.2})"), i_g(m1, m2), i_g_direct(m1, m2)),
                compare(format!("i_interp({m1:.2}, {m2:.2})"), i_interp(m1, m2), i_interp_direct(m1, m2)),
            ]
        })
        .collect();
    s.absorb(results);
    let results: Vec<Option<String>> = axis
        .par_iter()
        .flat_map_iter(|&v| {
            let slice: Vec<Option<String>> = (0..=10)
                .map(|k| {
                    let m2 = v / 3.0 * (k as f64 / 10.0);
                    compare(
                        format!("interp slice (V={v:.2}, M2={m2:.4})"),
                        i_interp_slice_closed_form(v, m2),
                        i_interp_slice(v, m2),
                    )
                })
                .collect();
            let hall_direct = hall_model(&(v / 6.0)).and_then(|m| mutual_information(&m));
            let numeric_min = i_g_min_numeric(v).map(|p| p.i);
            [
                compare(format!("i_banik({v:.2})"), i_banik_closed_form(v), i_banik(v)),
                compare(format!("i_hall({v:.2})"), i_hall(v), hall_direct),
                compare(format!("i_g_min({v:.2})"), i_g_min(v).map(|p| p.i), numeric_min),
            ]
            .into_iter()
            .chain(slice)
        })
        .collect();
    s.absorb(results);
    let zs: Vec<f64> = (0..=50).map(|k| V_T / 3.0 * k as f64 / 50.0).collect();
    let results = zs
        .par_iter()
        .map(|&z| compare(format!("i_four({z:.4})"), i_four(z), i_four_direct(z)))
        .collect();
    s.absorb(results);
    s.finish()
}

fn soundness(opts: &SuiteOptions) -> SectionReport {
    let mut s = Section::new("soundness");
    let models = random_models(opts.seed, opts.random_count(), 4);
    let results = models
        .par_iter()
        .enumerate()
        .map(|(i, model)| {
            let value = chsh_s(model).ok()?;
            let rep = measurement_dependence(model).ok()?;
            if !check_inequality_chain(&rep) {
                return Some(format!("model {i}: M1={}, M2={}, M={} breaks the chain", rep.m1, rep.m2, rep.m));
            }
            let params = ModelParams::four(rep.m1, rep.m2, rep.mhat1, rep.mhat2);
            match bound_four_param(&params) {
                Ok(bound) if value <= bound => None,
                Ok(bound) => Some(format!("model {i} {}: S = {value} > {bound}", describe(&params))),
                Err(e) => Some(format!("model {i}: {e}")),
            }
        })
        .collect();
    s.absorb(results);
    s.finish()
}

fn reductions(opts: &SuiteOptions) -> SectionReport {
    let mut s = Section::new("reductions");
    for m in grid(5) {
        let (two, hall) = (bound_two_param(&m, &m), bound_hall(&m));
        s.check(matches!((&two, &hall), (Ok(a), Ok(b)) if a == b), || format!("Hall reduction at M={m}"));
        let (two, banik) = (bound_two_param(&m, &r(0, 1)), bound_banik(&m));
        s.check(matches!((&two, &banik), (Ok(a), Ok(b)) if a == b), || format!("Banik reduction at M={m}"));
    }
    for m1 in grid(opts.two_param_den()) {
        for m2 in grid(opts.two_param_den()) {
            let four = (opts.four_param)(&ModelParams::two(m1.clone(), m2.clone()));
            let two = two_param_model(&m1, &m2);
            s.check(matches!((&four, &two), (Ok(a), Ok(b)) if a.same_tables(b)), || {
                format!("four-param with M̂ = M differs from two-param at (M1={m1}, M2={m2})")
            });
        }
    }
    for k in 0..=10 {
        let p = r(k, 30);
        let twice = r(2, 1) * p.clone();
        let ok = matches!((hall_model(&p), interp_model(&twice, &twice)), (Ok(a), Ok(b)) if a.same_tables(&b));
        s.check(ok, || format!("hall_model({p}) differs from interp_model"));
        let p = r(k, 10);
        let twice = r(2, 1) * p.clone();
        let ok = matches!((banik_model(&p), interp_model(&twice, &r(0, 1))), (Ok(a), Ok(b)) if a.same_tables(&b));
        s.check(ok, || format!("banik_model({p}) differs from interp_model"));
    }
    // Yellow tables are the mixture w·(p2 = p1) + (1 − w)·(p2 = 0), w = p2/p1.
    for a in 1..=20 {
        for b in 0..=a {
            let (m1, m2) = (r(a, 10), r(b, 10));
            if m1.clone() + r(2, 1) * m2.clone() > r(2, 1) {
                continue;
            }
            let (p1, p2) = (m1.clone() / r(2, 1), m2.clone() / r(2, 1));
            let w = p2.clone() / p1.clone();
            let table = interp_yellow_rows(&p1, &p2);
            let sym = interp_yellow_rows(&p1, &p1);
            let one = interp_yellow_rows(&p1, &r(0, 1));
            let ok = table.iter().zip(sym.iter().zip(&one)).all(|(row, (rs, ro))| {
                (0..4).all(|j| row[j] == w.clone() * rs[j].clone() + (r(1, 1) - w.clone()) * ro[j].clone())
            });
            s.check(ok, || format!("mixture identity fails at (M1={m1}, M2={m2})"));
        }
    }
    s.finish()
}
