//! Parameter sweeps that regenerate the figure data as CSV or JSON.
//!
//! A sweep is a list of panels. Each panel is a Cartesian grid over one or
//! two axes with one row per grid point, so its row count is the product of
//! the axis point counts. Cells outside a function's valid region are
//! written as `NA` (CSV) or `null` (JSON) rather than dropped.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::bounds::v_g;
use crate::error::{Error, Result};
use crate::info::{
    four_param_family, i_banik, i_four, i_g, i_g_min, i_hall, i_interp, i_interp_min, i_interp_slice, V_T,
};
use crate::scalar::format_sig;

/// Significant digits written for every float.
pub const SIG_DIGITS: usize = 10;

/// Relative slack used when deciding whether a grid point reaches the axis end.
const GRID_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3,
        Figure::Fig4,
        Figure::Fig7,
        Figure::Fig8,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
        }
    }

    /// Column headers, fixed per figure.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Figure::Fig1 => &["m1", "m2", "v_g"],
            Figure::Fig2 => &["m1", "m2", "i_g"],
            Figure::Fig3 => &["v", "i_g_min", "i_hall", "i_banik"],
            Figure::Fig4 => &["z", "m1", "mhat1", "i_four"],
            Figure::Fig7 => &["m1", "m2", "i_interp"],
            Figure::Fig8 => &["panel", "v", "m2", "m1", "i_interp", "i_hall", "i_banik"],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.id() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Figure::ALL.iter().map(|f| f.id()).collect();
                Error::Parse(format!("unknown figure id '{s}' (expected one of {})", known.join(", ")))
            })
    }
}

/// One sweep axis: `min, min + step, ...` up to `max`, closed at `max`,
/// plus optional marked points (such as `V_T`) merged in sorted order.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub step: f64,
    pub marks: Vec<f64>,
}

impl Axis {
    pub fn new(name: &'static str, min: f64, max: f64, step: f64) -> Self {
        assert!(step > 0.0 && max >= min);
        Axis { name, min, max, step, marks: Vec::new() }
    }

    pub fn with_mark(mut self, x: f64) -> Self {
        self.marks.push(x);
        self
    }

    pub fn points(&self) -> Vec<f64> {
        let steps = ((self.max - self.min) / self.step * (1.0 + GRID_SLACK)).floor() as usize;
        let mut pts: Vec<f64> = (0..=steps).map(|i| self.min + i as f64 * self.step).collect();
        let last = *pts.last().expect("at least one point");
        if (self.max - last).abs() > GRID_SLACK * self.step {
            pts.push(self.max);
        } else {
            *pts.last_mut().unwrap() = self.max;
        }
        for &m in &self.marks {
            if pts.iter().all(|p| (p - m).abs() > GRID_SLACK * self.step) {
                pts.push(m);
            }
        }
        pts.sort_by(f64::total_cmp);
        pts
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    /// Outside the valid region.
    Na,
    Text(&'static str),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_sig(*x, SIG_DIGITS),
            Cell::Na => "NA".to_string(),
            Cell::Text(s) => s.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Round through the CSV text so both formats carry identical values.
            Cell::Num(x) => json!(format_sig(*x, SIG_DIGITS).parse::<f64>().expect("formatted float")),
            Cell::Na => Value::Null,
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Panel {
    pub name: &'static str,
    pub axes: Vec<Axis>,
    pub rows: Vec<Vec<Cell>>,
}

impl Panel {
    pub fn expected_rows(&self) -> usize {
        self.axes.iter().map(|a| a.points().len()).product()
    }
}

/// Output of one figure sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub figure: Figure,
    pub panels: Vec<Panel>,
}

impl SweepGrid {
    pub fn columns(&self) -> &'static [&'static str] {
        self.figure.columns()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vec<Cell>> {
        self.panels.iter().flat_map(|p| p.rows.iter())
    }

    pub fn row_count(&self) -> usize {
        self.panels.iter().map(|p| p.rows.len()).sum()
    }

    /// Every panel has one full-width row per grid point.
    pub fn is_complete(&self) -> bool {
        let width = self.columns().len();
        self.panels
            .iter()
            .all(|p| p.rows.len() == p.expected_rows() && p.rows.iter().all(|r| r.len() == width))
    }

    pub fn write_csv(&self, out: &mut impl Write) -> Result<()> {
        writeln!(out, "{}", self.columns().join(","))?;
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns()
                    .iter()
                    .zip(row)
                    .map(|(c, cell)| (c.to_string(), cell.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let axes: Vec<Value> = self
            .panels
            .iter()
            .map(|p| {
                let specs: Vec<Value> = p
                    .axes
                    .iter()
                    .map(|a| json!({"name": a.name, "min": a.min, "max": a.max, "step": a.step, "points": a.points().len()}))
                    .collect();
                json!({"panel": p.name, "axes": specs})
            })
            .collect();
        json!({"figure": self.figure.id(), "columns": self.columns(), "panels": axes, "rows": rows})
    }
}

/// Region errors become `NA`; anything else is a real failure.
fn cell(r: Result<f64>) -> Result<Cell> {
    match r {
        Ok(x) => Ok(Cell::Num(x)),
        Err(Error::Region(_)) => Ok(Cell::Na),
        Err(e) => Err(e),
    }
}

fn square_axes(step: f64) -> Vec<Axis> {
    vec![Axis::new("m1", 0.0, 2.0, step), Axis::new("m2", 0.0, 2.0, step)]
}

fn grid2(
    name: &'static str,
    axes: Vec<Axis>,
    f: impl Fn(f64, f64) -> Result<Vec<Cell>> + Sync,
) -> Result<Panel> {
    let (xs, ys) = (axes[0].points(), axes[1].points());
    let pairs: Vec<(f64, f64)> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
    let rows = pairs.par_iter().map(|&(x, y)| f(x, y)).collect::<Result<Vec<_>>>()?;
    Ok(Panel { name, axes, rows })
}

fn grid1(name: &'static str, axis: Axis, f: impl Fn(f64) -> Result<Vec<Cell>> + Sync) -> Result<Panel> {
    let rows = axis.points().par_iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    Ok(Panel { name, axes: vec![axis], rows })
}

/// Steps of the default sweeps.
pub const SQUARE_STEP: f64 = 0.01;
pub const V_STEP: f64 = 0.005;
pub const Z_STEP: f64 = 0.002;
pub const SLICE_STEP: f64 = 0.002;

/// Runs the sweep for `figure` on the current rayon pool.
pub fn sweep(figure: Figure) -> Result<SweepGrid> {
    sweep_with_step(figure, None)
}

/// As [`sweep`], overriding the primary step (used for coarse checks).
pub fn sweep_with_step(figure: Figure, step: Option<f64>) -> Result<SweepGrid> {
    let num = Cell::Num;
    let panels = match figure {
        Figure::Fig1 => vec![grid2("", square_axes(step.unwrap_or(SQUARE_STEP)), |m1, m2| {
            Ok(vec![num(m1), num(m2), num(v_g(&m1, &m2)?)])
        })?],
        Figure::Fig2 => vec![grid2("", square_axes(step.unwrap_or(SQUARE_STEP)), |m1, m2| {
            Ok(vec![num(m1), num(m2), cell(i_g(m1, m2))?])
        })?],
        Figure::Fig7 => vec![grid2("", square_axes(step.unwrap_or(SQUARE_STEP)), |m1, m2| {
            Ok(vec![num(m1), num(m2), cell(i_interp(m1, m2))?])
        })?],
        Figure::Fig3 => {
            let axis = Axis::new("v", 0.0, 2.0, step.unwrap_or(V_STEP)).with_mark(V_T);
            vec![grid1("", axis, |v| {
                Ok(vec![num(v), num(i_g_min(v)?.i), num(i_hall(v)?), num(i_banik(v)?)])
            })?]
        }
        Figure::Fig4 => {
            let axis = Axis::new("z", 0.0, V_T / 3.0, step.unwrap_or(Z_STEP));
            vec![grid1("", axis, |z| {
                let p = four_param_family(z);
                Ok(vec![num(z), num(p.m1), num(*p.mhat1()), num(i_four(z)?)])
            })?]
        }
        Figure::Fig8 => {
            let (hall_t, banik_t) = (i_hall(V_T)?, i_banik(V_T)?);
            let slice_axis = Axis::new("m2", 0.0, V_T / 3.0, step.unwrap_or(SLICE_STEP));
            let slice = grid1("slice", slice_axis, |m2| {
                Ok(vec![
                    Cell::Text("slice"),
                    num(V_T),
                    num(m2),
                    num(V_T - 2.0 * m2),
                    num(i_interp_slice(V_T, m2)?),
                    num(hall_t),
                    num(banik_t),
                ])
            })?;
            let min_axis = Axis::new("v", 0.0, 2.0, step.unwrap_or(V_STEP)).with_mark(V_T);
            let min = grid1("min", min_axis, |v| {
                let point = i_interp_min(v)?;
                Ok(vec![
                    Cell::Text("min"),
                    num(v),
                    num(point.argmin_m2.expect("minimized curve")),
                    num(point.argmin_m1().expect("minimized curve")),
                    num(point.i),
                    num(i_hall(v)?),
                    num(i_banik(v)?),
                ])
            })?;
            vec![slice, min]
        }
    };
    Ok(SweepGrid { figure, panels })
}
