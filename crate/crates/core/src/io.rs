//! CSV serialization of signals and phase-space functions with JSON sidecars.
//!
//! A sampled function is stored as a CSV table with one integer index column
//! per lattice axis followed by `re` and `im` columns, plus a JSON sidecar
//! (same path with the extension replaced by `.json`) recording the grid
//! parameters `{d, N, L, axis_order}`. Spatial axes are named `x0, x1, ...`
//! and frequency axes `w0, w1, ...`; a [`Signal`] has only spatial axes while
//! a [`PhaseFn`] lists its x-block axes first, matching the in-memory layout.
//!
//! Floating-point values are written with 17 significant digits, enough to
//! round-trip every finite `f64` exactly, so write → read → write is
//! byte-stable.

use crate::admissibility::{
    check_convolution_thm, check_localization_thm, check_weyl_bound_thm, check_wigner_thm,
    parse_rational, ConvParams, ExtExp, LocParams, Verdict,
};
use crate::fft;
use crate::grid::{make_grid, PhaseFn, Signal};
use crate::{Result, TfError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Grid metadata stored next to each CSV file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sidecar {
    /// Spatial dimension of the underlying grid.
    pub d: usize,
    /// Samples per axis.
    #[serde(rename = "N")]
    pub n: usize,
    /// Period length per axis.
    #[serde(rename = "L")]
    pub l: f64,
    /// Axis names in storage order, e.g. `["x0"]` or `["x0", "w0"]`.
    pub axis_order: Vec<String>,
}

fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn write_sidecar(csv_path: &Path, sidecar: &Sidecar) -> Result<()> {
    let text = serde_json::to_string_pretty(sidecar)?;
    std::fs::write(sidecar_path(csv_path), text + "\n")?;
    Ok(())
}

fn read_sidecar(csv_path: &Path) -> Result<Sidecar> {
    let text = std::fs::read_to_string(sidecar_path(csv_path))?;
    Ok(serde_json::from_str(&text)?)
}

fn write_table(
    path: &Path,
    axis_names: &[String],
    n: usize,
    values: &[Complex64],
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header: Vec<String> = axis_names.to_vec();
    header.push("re".into());
    header.push("im".into());
    w.write_record(&header)?;
    let axes = axis_names.len();
    let mut idx = vec![0usize; axes];
    let mut record = vec![String::new(); axes + 2];
    for (flat, v) in values.iter().enumerate() {
        fft::unravel(flat, n, axes, &mut idx);
        for (a, &i) in idx.iter().enumerate() {
            record[a] = i.to_string();
        }
        record[axes] = format!("{:.17e}", v.re);
        record[axes + 1] = format!("{:.17e}", v.im);
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

fn read_table(path: &Path, axes: usize, n: usize) -> Result<Vec<Complex64>> {
    let len = fft::tensor_len(n, axes);
    let mut values = vec![Complex64::new(f64::NAN, f64::NAN); len];
    let mut seen = vec![false; len];
    let mut r = csv::Reader::from_path(path)?;
    let mut idx = vec![0usize; axes];
    for row in r.records() {
        let row = row?;
        if row.len() != axes + 2 {
            return Err(TfError::Parse(format!(
                "row has {} fields, expected {}",
                row.len(),
                axes + 2
            )));
        }
        for a in 0..axes {
            let i: usize = row[a]
                .trim()
                .parse()
                .map_err(|_| TfError::Parse(format!("bad index `{}`", &row[a])))?;
            if i >= n {
                return Err(TfError::Parse(format!("index {i} out of range (N = {n})")));
            }
            idx[a] = i;
        }
        let re: f64 = row[axes]
            .trim()
            .parse()
            .map_err(|_| TfError::Parse(format!("bad value `{}`", &row[axes])))?;
        let im: f64 = row[axes + 1]
            .trim()
            .parse()
            .map_err(|_| TfError::Parse(format!("bad value `{}`", &row[axes + 1])))?;
        let flat = fft::ravel(&idx, n);
        if seen[flat] {
            return Err(TfError::Parse(format!("duplicate lattice index {idx:?}")));
        }
        seen[flat] = true;
        values[flat] = Complex64::new(re, im);
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        let mut idx = vec![0usize; axes];
        fft::unravel(missing, n, axes, &mut idx);
        return Err(TfError::Parse(format!("missing lattice index {idx:?}")));
    }
    Ok(values)
}

fn spatial_axis_names(d: usize) -> Vec<String> {
    (0..d).map(|a| format!("x{a}")).collect()
}

/// Write a signal as CSV plus its JSON sidecar.
pub fn write_signal(path: impl AsRef<Path>, f: &Signal) -> Result<()> {
    let path = path.as_ref();
    let names = spatial_axis_names(f.grid.d);
    write_table(path, &names, f.grid.n, &f.values)?;
    write_sidecar(
        path,
        &Sidecar {
            d: f.grid.d,
            n: f.grid.n,
            l: f.grid.l,
            axis_order: names,
        },
    )
}

/// Read a signal written by [`write_signal`].
pub fn read_signal(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let sc = read_sidecar(path)?;
    let want = spatial_axis_names(sc.d);
    if sc.axis_order != want {
        return Err(TfError::Parse(format!(
            "expected signal axes {want:?}, sidecar lists {:?}",
            sc.axis_order
        )));
    }
    let grid = make_grid(sc.d, sc.n, sc.l)?;
    let values = read_table(path, sc.d, sc.n)?;
    Signal::new(grid, values)
}

fn phase_axis_names(d: usize) -> Vec<String> {
    let mut names = spatial_axis_names(d);
    names.extend((0..d).map(|a| format!("w{a}")));
    names
}

/// Write a phase-space function as CSV plus its JSON sidecar; the sidecar
/// records the spatial grid, with the axis order making the ω-block explicit.
pub fn write_phasefn(path: impl AsRef<Path>, f: &PhaseFn) -> Result<()> {
    let path = path.as_ref();
    let names = phase_axis_names(f.xgrid.d);
    write_table(path, &names, f.xgrid.n, &f.values)?;
    write_sidecar(
        path,
        &Sidecar {
            d: f.xgrid.d,
            n: f.xgrid.n,
            l: f.xgrid.l,
            axis_order: names,
        },
    )
}

/// Read a phase-space function written by [`write_phasefn`].
pub fn read_phasefn(path: impl AsRef<Path>) -> Result<PhaseFn> {
    let path = path.as_ref();
    let sc = read_sidecar(path)?;
    let want = phase_axis_names(sc.d);
    if sc.axis_order != want {
        return Err(TfError::Parse(format!(
            "expected phase-space axes {want:?}, sidecar lists {:?}",
            sc.axis_order
        )));
    }
    let grid = make_grid(sc.d, sc.n, sc.l)?;
    let values = read_table(path, 2 * sc.d, sc.n)?;
    PhaseFn::new(grid, values)
}

/// Parameter file for the convolution theorem: exponents and weight powers
/// as exact strings (`"2"`, `"3/2"`, `"inf"`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvParamsFile {
    /// Exponent triple (p0, p1, p2).
    pub p: [String; 3],
    /// Exponent triple (q0, q1, q2).
    pub q: [String; 3],
    /// Frequency-weight powers (s0, s1, s2).
    pub s: [String; 3],
    /// Space-weight powers (t0, t1, t2).
    pub t: [String; 3],
    /// Dimension d.
    pub d: i64,
}

/// Parameter file for the cross-Wigner theorem.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WignerParamsFile {
    /// First-factor exponents.
    pub p1: String,
    /// First-factor exponents.
    pub q1: String,
    /// Second-factor exponents.
    pub p2: String,
    /// Second-factor exponents.
    pub q2: String,
    /// Target exponents.
    pub p: String,
    /// Target exponents.
    pub q: String,
}

/// Parameter file for the extended Weyl boundedness theorem.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeylParamsFile {
    /// Input-space exponents.
    pub p1: String,
    /// Input-space exponents.
    pub q1: String,
    /// Output-space exponents.
    pub p2: String,
    /// Output-space exponents.
    pub q2: String,
    /// Symbol exponents.
    pub p: String,
    /// Symbol exponents.
    pub q: String,
    /// Symbol frequency weight.
    pub s: String,
}

/// Parameter file for the localization boundedness theorem.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LocParamsFile {
    /// Input-space exponents.
    pub p1: String,
    /// Input-space exponents.
    pub q1: String,
    /// Output-space exponents.
    pub p2: String,
    /// Output-space exponents.
    pub q2: String,
    /// Weyl-symbol exponents.
    pub p: String,
    /// Weyl-symbol exponents.
    pub q: String,
    /// Localization-symbol exponents.
    pub p0: String,
    /// Localization-symbol exponents.
    pub q0: String,
    /// Window exponents.
    pub r1: String,
    /// Window exponents.
    pub r2: String,
    /// Weyl-symbol frequency weight.
    pub s: String,
    /// Localization-symbol frequency weight.
    pub s0: String,
    /// Localization-symbol space weight.
    pub t0: String,
    /// Dimension d.
    pub d: i64,
    /// Enforce the strict inequality at p0 = p (defaults to true).
    #[serde(default = "default_true")]
    pub strict_at_equality: bool,
}

fn default_true() -> bool {
    true
}

/// Parse a theorem's JSON parameter text and run the matching exact check.
/// Accepted theorem names: `convolution`, `wigner`, `weyl`, `localization`.
pub fn admissibility_check_from_json(theorem: &str, json: &str) -> Result<Verdict> {
    match theorem {
        "convolution" => {
            let f: ConvParamsFile = serde_json::from_str(json)?;
            let parse3 = |v: &[String; 3]| -> Result<[ExtExp; 3]> {
                Ok([
                    ExtExp::parse(&v[0])?,
                    ExtExp::parse(&v[1])?,
                    ExtExp::parse(&v[2])?,
                ])
            };
            let parse3r = |v: &[String; 3]| -> Result<[num_rational::Rational64; 3]> {
                Ok([
                    parse_rational(&v[0])?,
                    parse_rational(&v[1])?,
                    parse_rational(&v[2])?,
                ])
            };
            Ok(check_convolution_thm(&ConvParams {
                p: parse3(&f.p)?,
                q: parse3(&f.q)?,
                s: parse3r(&f.s)?,
                t: parse3r(&f.t)?,
                d: f.d,
            }))
        }
        "wigner" => {
            let f: WignerParamsFile = serde_json::from_str(json)?;
            Ok(check_wigner_thm(
                ExtExp::parse(&f.p1)?,
                ExtExp::parse(&f.q1)?,
                ExtExp::parse(&f.p2)?,
                ExtExp::parse(&f.q2)?,
                ExtExp::parse(&f.p)?,
                ExtExp::parse(&f.q)?,
            ))
        }
        "weyl" => {
            let f: WeylParamsFile = serde_json::from_str(json)?;
            Ok(check_weyl_bound_thm(
                ExtExp::parse(&f.p1)?,
                ExtExp::parse(&f.q1)?,
                ExtExp::parse(&f.p2)?,
                ExtExp::parse(&f.q2)?,
                ExtExp::parse(&f.p)?,
                ExtExp::parse(&f.q)?,
                parse_rational(&f.s)?,
            ))
        }
        "localization" => {
            let f: LocParamsFile = serde_json::from_str(json)?;
            Ok(check_localization_thm(&LocParams {
                p1: ExtExp::parse(&f.p1)?,
                q1: ExtExp::parse(&f.q1)?,
                p2: ExtExp::parse(&f.p2)?,
                q2: ExtExp::parse(&f.q2)?,
                p: ExtExp::parse(&f.p)?,
                q: ExtExp::parse(&f.q)?,
                p0: ExtExp::parse(&f.p0)?,
                q0: ExtExp::parse(&f.q0)?,
                r1: ExtExp::parse(&f.r1)?,
                r2: ExtExp::parse(&f.r2)?,
                s: parse_rational(&f.s)?,
                s0: parse_rational(&f.s0)?,
                t0: parse_rational(&f.t0)?,
                d: f.d,
                strict_at_equality: f.strict_at_equality,
            }))
        }
        other => Err(TfError::InvalidArgument(format!(
            "unknown theorem `{other}`; expected convolution, wigner, weyl, or localization"
        ))),
    }
}
