//! Weighted Lebesgue, mixed-norm, and modulation-space norms, plus periodic
//! convolution on signals and phase-space symbols.
//!
//! The weight is the polynomial bracket ⟨x⟩ = (1 + |x|²)^{1/2}; norms use
//! w(x,ω) = ⟨x⟩^t ⟨ω⟩^s. Exponents live in [1, ∞] with ∞ represented
//! exactly; every norm branches to suprema at ∞ and all exponent arithmetic
//! uses 1/∞ = 0. Modulation norms of phase-space symbols are computed with an
//! anisotropic STFT that treats the (x, ω) box as a flat 2D-dimensional
//! domain with per-axis extents (L, ..., N/L, ...).

use crate::fft;
use crate::grid::{PhaseFn, Signal};
use crate::tf_transforms::{gaussian_window, stft, stft_tensor, SignalVector, WindowVector};
use crate::{Result, TfError};
use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::PI;

/// Extended-real Lebesgue exponent in [1, ∞].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    /// A finite exponent ≥ 1.
    Finite(f64),
    /// The essential-supremum exponent.
    Inf,
}

impl Exponent {
    /// Validate and wrap a finite exponent.
    pub fn finite(v: f64) -> Result<Exponent> {
        if !(v >= 1.0) || !v.is_finite() {
            return Err(TfError::InvalidArgument(format!(
                "exponent must lie in [1, inf], got {v}"
            )));
        }
        Ok(Exponent::Finite(v))
    }

    /// Parse "inf" or a finite number.
    pub fn parse(s: &str) -> Result<Exponent> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Exponent::Inf);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| TfError::Parse(format!("bad exponent `{s}`")))?;
        Exponent::finite(v)
    }

    /// The reciprocal with 1/∞ = 0.
    pub fn recip(&self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Inf => 0.0,
        }
    }
}

impl std::fmt::Display for Exponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Inf => write!(f, "inf"),
        }
    }
}

/// A mixed-norm exponent pair (p, q).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentPair {
    /// Inner (space) exponent.
    pub p: Exponent,
    /// Outer (frequency) exponent.
    pub q: Exponent,
}

/// Weight powers: s on the frequency bracket, t on the space bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightParams {
    /// Frequency power in ⟨ω⟩^s.
    pub s: f64,
    /// Space power in ⟨x⟩^t.
    pub t: f64,
}

/// Which polynomial bracket to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// ⟨(x,ω)⟩^s = (1 + |x|² + |ω|²)^{s/2}.
    Bracket2d,
    /// ⟨x⟩^t = (1 + |x|²)^{t/2}.
    BracketSpace,
    /// ⟨ω⟩^s = (1 + |ω|²)^{s/2}.
    BracketFreq,
}

/// Evaluate a polynomial bracket weight at the phase-space point (x, ω).
pub fn weight_eval(kind: WeightKind, params: &WeightParams, x: &[f64], w: &[f64]) -> f64 {
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let w2: f64 = w.iter().map(|v| v * v).sum();
    match kind {
        WeightKind::Bracket2d => (1.0 + x2 + w2).powf(params.s / 2.0),
        WeightKind::BracketSpace => (1.0 + x2).powf(params.t / 2.0),
        WeightKind::BracketFreq => (1.0 + w2).powf(params.s / 2.0),
    }
}

fn bracket(r2: f64, power: f64) -> f64 {
    if power == 0.0 {
        1.0
    } else {
        (1.0 + r2).powf(power / 2.0)
    }
}

/// An L^p accumulator that branches to the supremum at p = ∞.
struct LpAcc {
    p: Exponent,
    cell: f64,
    acc: f64,
}

impl LpAcc {
    fn new(p: Exponent, cell: f64) -> LpAcc {
        LpAcc { p, cell, acc: 0.0 }
    }

    fn add(&mut self, v: f64) {
        match self.p {
            Exponent::Finite(p) => self.acc += v.powf(p),
            Exponent::Inf => self.acc = self.acc.max(v),
        }
    }

    fn finish(self) -> f64 {
        match self.p {
            Exponent::Finite(p) => (self.cell * self.acc).powf(1.0 / p),
            Exponent::Inf => self.acc,
        }
    }
}

/// Weighted Lebesgue norm ‖f ⟨·⟩^t‖_{L^p} by quadrature; p = ∞ is the
/// weighted maximum.
pub fn lp_weighted_norm(f: &Signal, p: Exponent, t: f64) -> f64 {
    let grid = &f.grid;
    let mut acc = LpAcc::new(p, grid.cell());
    let mut idx = vec![0usize; grid.d];
    for (flat, v) in f.values.iter().enumerate() {
        fft::unravel(flat, grid.n, grid.d, &mut idx);
        let r2: f64 = idx.iter().map(|&j| grid.point1(j).powi(2)).sum();
        acc.add(v.norm() * bracket(r2, t));
    }
    acc.finish()
}

/// Weighted mixed norm of a phase function: inner L^p over the x-block, outer
/// L^q over the ω-block, with weight ⟨x⟩^t ⟨ω⟩^s.
pub fn mixed_norm(f: &PhaseFn, p: Exponent, q: Exponent, s: f64, t: f64) -> f64 {
    let grid = &f.xgrid;
    let d = grid.d;
    let m = grid.len();
    let xcell = grid.cell();
    let wcell = grid.dual_cell();
    let mut idx = vec![0usize; d];
    let mut xw = Vec::with_capacity(m);
    let mut ww = Vec::with_capacity(m);
    for flat in 0..m {
        fft::unravel(flat, grid.n, d, &mut idx);
        let x2: f64 = idx.iter().map(|&j| grid.point1(j).powi(2)).sum();
        xw.push(bracket(x2, t));
        fft::unravel(flat, grid.n, d, &mut idx);
        let w2: f64 = idx.iter().map(|&k| grid.dual_point1(k).powi(2)).sum();
        ww.push(bracket(w2, s));
    }
    let mut outer = LpAcc::new(q, wcell);
    for wf in 0..m {
        let mut inner = LpAcc::new(p, xcell);
        for xf in 0..m {
            inner.add(f.values[xf * m + wf].norm() * xw[xf]);
        }
        outer.add(inner.finish() * ww[wf]);
    }
    outer.finish()
}

/// Modulation norm ‖f‖_{M^{p,q}_{s,t}}: the mixed norm of V_g f with the
/// L²-normalized Gaussian as the default window.
pub fn modulation_norm(
    f: &Signal,
    p: Exponent,
    q: Exponent,
    s: f64,
    t: f64,
    window: Option<&Signal>,
) -> Result<f64> {
    let default_window;
    let g = match window {
        Some(w) => {
            if w.max_abs() <= 1e-14 {
                return Err(TfError::InvalidArgument("zero window".into()));
            }
            w
        }
        None => {
            default_window = gaussian_window(&f.grid);
            &default_window
        }
    };
    let v = stft(f, g)?;
    Ok(mixed_norm(&v, p, q, s, t))
}

/// Multilinear modulation norm: the mixed norm of the tensor STFT over the
/// 2nd-dimensional phase lattice; brackets are taken over the full blocks.
pub fn modulation_norm_multi(
    fv: &SignalVector,
    p: Exponent,
    q: Exponent,
    s: f64,
    t: f64,
    wv: &WindowVector,
) -> Result<f64> {
    let v = stft_tensor(fv, wv)?;
    Ok(mixed_norm(&v, p, q, s, t))
}

fn shift_half_all_axes(values: &[Complex64], shape: &[usize]) -> Vec<Complex64> {
    let mut out = values.to_vec();
    for axis in 0..shape.len() {
        out = fft::roll_axis(&out, shape, axis, (shape[axis] / 2) as i64);
    }
    out
}

/// Periodic convolution of two signals with cell-volume scaling,
/// (f ∗ g)(x_m) = Δ^d Σ_j f(x_j) g(x_m - x_j), FFT-based.
pub fn convolve(f: &Signal, g: &Signal) -> Result<Signal> {
    if f.grid != g.grid {
        return Err(TfError::GridMismatch("convolution operands differ".into()));
    }
    let shape = f.grid.shape();
    let values = circular_convolve(&f.values, &g.values, &shape, f.grid.cell());
    Signal::new(f.grid.clone(), values)
}

/// Periodic convolution of two phase-space symbols with cell volume
/// (Δ·Δω)^{nd}; the FFT path, cross-validated by
/// [`symbol_convolve_direct`].
pub fn symbol_convolve(a: &PhaseFn, b: &PhaseFn) -> Result<PhaseFn> {
    if a.xgrid != b.xgrid {
        return Err(TfError::GridMismatch(
            "symbol convolution lattices differ".into(),
        ));
    }
    let shape = a.shape();
    let values = circular_convolve(&a.values, &b.values, &shape, a.cell());
    PhaseFn::new(a.xgrid.clone(), values)
}

/// Centered circular convolution: out[m] = cell · Σ_j a[j] b[m - j], indices
/// measured from the box center N/2 on every axis.
fn circular_convolve(
    a: &[Complex64],
    b: &[Complex64],
    shape: &[usize],
    cell: f64,
) -> Vec<Complex64> {
    // Rotate the center to index 0, convolve plainly via FFT, rotate back.
    let mut fa = shift_half_all_axes(a, shape);
    let mut fb = shift_half_all_axes(b, shape);
    for axis in 0..shape.len() {
        fa = fft::plain_fft_axis(&fa, shape, axis, FftDirection::Forward);
        fb = fft::plain_fft_axis(&fb, shape, axis, FftDirection::Forward);
    }
    let norm: f64 = shape.iter().map(|&n| n as f64).product();
    let mut prod: Vec<Complex64> = fa
        .iter()
        .zip(&fb)
        .map(|(x, y)| x * y * (cell / norm))
        .collect();
    for axis in 0..shape.len() {
        prod = fft::plain_fft_axis(&prod, shape, axis, FftDirection::Inverse);
    }
    shift_half_all_axes(&prod, shape)
}

/// Direct-summation centered circular convolution of symbols; O(M²).
pub fn symbol_convolve_direct(a: &PhaseFn, b: &PhaseFn) -> Result<PhaseFn> {
    if a.xgrid != b.xgrid {
        return Err(TfError::GridMismatch(
            "symbol convolution lattices differ".into(),
        ));
    }
    let shape = a.shape();
    let axes = shape.len();
    let n = shape[0];
    let total = a.values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); total];
    let mut mi = vec![0usize; axes];
    let mut ji = vec![0usize; axes];
    let mut ki = vec![0usize; axes];
    for (mflat, o) in out.iter_mut().enumerate() {
        fft::unravel(mflat, n, axes, &mut mi);
        let mut acc = Complex64::new(0.0, 0.0);
        for (jflat, av) in a.values.iter().enumerate() {
            fft::unravel(jflat, n, axes, &mut ji);
            for ax in 0..axes {
                ki[ax] = (mi[ax] + n + n / 2 - ji[ax]) % n;
            }
            acc += av * b.values[fft::ravel(&ki, n)];
        }
        *o = acc * a.cell();
    }
    PhaseFn::new(a.xgrid.clone(), out)
}

/// Modulation norm of a phase-space symbol, treating the (x, ω) box as a flat
/// 2D-dimensional anisotropic domain. The window is the quadrature-normalized
/// phase-space Gaussian e^{-π(|x|² + |ω|²)}; the weight is ⟨z⟩^t ⟨ζ⟩^s in the
/// phase-plane position z and frequency ζ.
pub fn symbol_modulation_norm(f: &PhaseFn, p: Exponent, q: Exponent, s: f64, t: f64) -> f64 {
    let xg = &f.xgrid;
    let d = xg.d;
    let axes = 2 * d;
    let n = xg.n;
    // Per-axis geometry: extent and spacing for x-axes then ω-axes.
    let mut spacing = Vec::with_capacity(axes);
    let mut extent = Vec::with_capacity(axes);
    for _ in 0..d {
        spacing.push(xg.spacing());
        extent.push(xg.l);
    }
    for _ in 0..d {
        spacing.push(xg.dual_spacing());
        extent.push(xg.dual_extent());
    }
    let shape = vec![n; axes];
    let total: usize = f.values.len();
    let pos_cell: f64 = spacing.iter().product();
    let dual_cell: f64 = extent.iter().map(|e| 1.0 / e).product();

    // 1-d window factors per axis, quadrature-normalized as a product.
    let mut wins: Vec<Vec<f64>> = Vec::with_capacity(axes);
    for ax in 0..axes {
        let w: Vec<f64> = (0..n)
            .map(|j| {
                let x = -extent[ax] / 2.0 + j as f64 * spacing[ax];
                (-PI * x * x).exp()
            })
            .collect();
        wins.push(w);
    }
    let mut nrm2 = 1.0;
    for (ax, w) in wins.iter().enumerate() {
        nrm2 *= spacing[ax] * w.iter().map(|v| v * v).sum::<f64>();
    }
    let wscale = 1.0 / nrm2.sqrt();

    // Weights per flat dual index and per-position bracket.
    let mut pos_weight = Vec::with_capacity(total);
    let mut dual_weight = Vec::with_capacity(total);
    let mut idx = vec![0usize; axes];
    for flat in 0..total {
        fft::unravel(flat, n, axes, &mut idx);
        let mut z2 = 0.0;
        let mut zeta2 = 0.0;
        for ax in 0..axes {
            let x = -extent[ax] / 2.0 + idx[ax] as f64 * spacing[ax];
            let zf = (idx[ax] as f64 - n as f64 / 2.0) / extent[ax];
            z2 += x * x;
            zeta2 += zf * zf;
        }
        pos_weight.push(bracket(z2, t));
        dual_weight.push(bracket(zeta2, s));
    }

    // Stream over translates z, accumulating the inner L^p per frequency ζ.
    let mut acc: Vec<f64> = vec![0.0; total];
    let mut zidx = vec![0usize; axes];
    let mut h = vec![Complex64::new(0.0, 0.0); total];
    let mut jidx = vec![0usize; axes];
    for zflat in 0..total {
        fft::unravel(zflat, n, axes, &mut zidx);
        for (flat, hv) in h.iter_mut().enumerate() {
            fft::unravel(flat, n, axes, &mut jidx);
            let mut w = 1.0;
            for ax in 0..axes {
                w *= wins[ax][(jidx[ax] + n + n / 2 - zidx[ax]) % n];
            }
            *hv = f.values[flat] * (w * wscale);
        }
        let mut v = h.clone();
        for ax in 0..axes {
            v = fft::centered_forward_axis(&v, &shape, ax, spacing[ax]);
        }
        let zw = pos_weight[zflat];
        match p {
            Exponent::Finite(pv) => {
                for (zeta, vv) in v.iter().enumerate() {
                    acc[zeta] += (vv.norm() * zw).powf(pv);
                }
            }
            Exponent::Inf => {
                for (zeta, vv) in v.iter().enumerate() {
                    acc[zeta] = acc[zeta].max(vv.norm() * zw);
                }
            }
        }
    }
    let mut outer = LpAcc::new(q, dual_cell);
    for zeta in 0..total {
        let inner = match p {
            Exponent::Finite(pv) => (pos_cell * acc[zeta]).powf(1.0 / pv),
            Exponent::Inf => acc[zeta],
        };
        outer.add(inner * dual_weight[zeta]);
    }
    outer.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{inner, make_grid, random_test_signal, Grid};
    use crate::tf_transforms::{modulate_cells, translate_cells};

    fn g64() -> Grid {
        make_grid(1, 64, 8.0).unwrap()
    }

    #[test]
    fn weight_eval_examples() {
        let params = WeightParams { s: 2.0, t: 3.0 };
        assert_eq!(
            weight_eval(WeightKind::Bracket2d, &WeightParams { s: 5.0, t: 0.0 }, &[0.0], &[0.0]),
            1.0
        );
        assert!((weight_eval(WeightKind::Bracket2d, &params, &[3.0], &[4.0]) - 26.0).abs() < 1e-12);
        let a = weight_eval(WeightKind::BracketSpace, &params, &[0.0], &[2.0])
            * weight_eval(WeightKind::BracketFreq, &params, &[0.0], &[2.0]);
        let b = weight_eval(WeightKind::BracketFreq, &params, &[0.0], &[2.0]);
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn lp_norm_examples() {
        let g = g64();
        assert_eq!(
            lp_weighted_norm(&Signal::zeros(&g), Exponent::Finite(2.0), 1.0),
            0.0
        );
        let phi = gaussian_window(&g);
        let n2 = lp_weighted_norm(&phi, Exponent::Finite(2.0), 0.0);
        assert!((n2 - 1.0).abs() < 1e-10);
        let ninf = lp_weighted_norm(&phi, Exponent::Inf, 0.0);
        assert!((ninf - phi.max_abs()).abs() < 1e-15);
    }

    #[test]
    fn mixed_norm_examples() {
        let g = make_grid(1, 32, 8.0).unwrap();
        let f = random_test_signal(1, &g);
        let v = stft(&f, &gaussian_window(&g)).unwrap();
        // p = q collapses to a plain weighted norm over the whole lattice.
        let a = mixed_norm(&v, Exponent::Finite(3.0), Exponent::Finite(3.0), 0.7, -0.4);
        let mut acc = 0.0;
        let m = g.len();
        for xf in 0..m {
            for wf in 0..m {
                let x = g.point1(xf);
                let w = g.dual_point1(wf);
                let wt = bracket(x * x, -0.4) * bracket(w * w, 0.7);
                acc += (v.values[xf * m + wf].norm() * wt).powf(3.0) * v.cell();
            }
        }
        assert!((a - acc.powf(1.0 / 3.0)).abs() < 1e-12 * a);

        // Tensor separability.
        let u = random_test_signal(2, &g);
        let w = random_test_signal(3, &g);
        let ten = PhaseFn::new(
            g.clone(),
            (0..m * m)
                .map(|i| u.values[i / m] * w.values[i % m])
                .collect(),
        )
        .unwrap();
        let lhs = mixed_norm(&ten, Exponent::Finite(2.0), Exponent::Finite(1.0), 0.5, 1.5);
        let nu = lp_weighted_norm(&u, Exponent::Finite(2.0), 1.5);
        // The ω-factor norm with the dual lattice weight ⟨ω⟩^{0.5}.
        let mut nv = 0.0;
        for k in 0..m {
            let om = g.dual_point1(k);
            nv += w.values[k].norm() * bracket(om * om, 0.5) * g.dual_spacing();
        }
        assert!((lhs - nu * nv).abs() < 1e-10 * lhs.max(1.0));

        assert_eq!(
            mixed_norm(&PhaseFn::zeros(&g), Exponent::Inf, Exponent::Finite(1.0), 0.0, 0.0),
            0.0
        );
    }

    #[test]
    fn modulation_norm_moyal_and_covariance() {
        let g = g64();
        for seed in 0..6u64 {
            let f = random_test_signal(seed, &g);
            let m2 = modulation_norm(&f, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.0, 0.0, None)
                .unwrap();
            let l2 = inner(&f, &f).unwrap().re.sqrt();
            assert!((m2 - l2).abs() < 1e-8, "seed {seed}: {:e}", (m2 - l2).abs());
        }
        let f = random_test_signal(9, &g);
        let shifted = modulate_cells(&translate_cells(&f, &[5]), &[-7]);
        for (p, q) in [(1.0, 2.0), (2.0, 1.0)] {
            let a = modulation_norm(&f, Exponent::Finite(p), Exponent::Finite(q), 0.0, 0.0, None)
                .unwrap();
            let b = modulation_norm(&shifted, Exponent::Finite(p), Exponent::Finite(q), 0.0, 0.0, None)
                .unwrap();
            assert!((a - b).abs() < 1e-8 * a.max(1.0));
        }
        assert_eq!(
            modulation_norm(&Signal::zeros(&g), Exponent::Finite(1.0), Exponent::Inf, 0.0, 0.0, None)
                .unwrap(),
            0.0
        );
        assert!(modulation_norm(
            &f,
            Exponent::Finite(2.0),
            Exponent::Finite(2.0),
            0.0,
            0.0,
            Some(&Signal::zeros(&g))
        )
        .is_err());
    }

    #[test]
    fn modulation_norm_multi_cases() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let f1 = random_test_signal(20, &g);
        let f2 = random_test_signal(21, &g);
        let gw = gaussian_window(&g);
        let wv1 = WindowVector::new(vec![gw.clone()]).unwrap();
        let fv1 = SignalVector::new(vec![f1.clone()]).unwrap();
        let a = modulation_norm_multi(&fv1, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.3, -0.2, &wv1)
            .unwrap();
        let b = modulation_norm(&f1, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.3, -0.2, Some(&gw))
            .unwrap();
        assert!((a - b).abs() < 1e-12 * a.max(1.0));

        // Unweighted p = q factorizes over the tensor product.
        let wv2 = WindowVector::new(vec![gw.clone(), gw.clone()]).unwrap();
        let fv2 = SignalVector::new(vec![f1.clone(), f2.clone()]).unwrap();
        let joint = modulation_norm_multi(&fv2, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.0, 0.0, &wv2)
            .unwrap();
        let n1 = modulation_norm(&f1, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.0, 0.0, Some(&gw))
            .unwrap();
        let n2 = modulation_norm(&f2, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.0, 0.0, Some(&gw))
            .unwrap();
        assert!((joint - n1 * n2).abs() < 1e-8 * joint.max(1.0));

        let fz = SignalVector::new(vec![f1.clone(), Signal::zeros(&g)]).unwrap();
        let z = modulation_norm_multi(&fz, Exponent::Finite(1.0), Exponent::Finite(1.0), 0.0, 0.0, &wv2)
            .unwrap();
        assert_eq!(z, 0.0);
    }

    #[test]
    fn norm_homogeneity() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let f = random_test_signal(30, &g);
        let c = Complex64::new(-2.3, 1.1);
        let fc = f.scaled(c);
        let cases: [(Exponent, Exponent); 3] = [
            (Exponent::Finite(1.0), Exponent::Inf),
            (Exponent::Finite(2.0), Exponent::Finite(2.0)),
            (Exponent::Inf, Exponent::Finite(1.0)),
        ];
        for (p, q) in cases {
            let a = modulation_norm(&fc, p, q, 0.5, -0.5, None).unwrap();
            let b = modulation_norm(&f, p, q, 0.5, -0.5, None).unwrap();
            assert!((a - c.norm() * b).abs() < 1e-12 * a.max(1.0));
            let la = lp_weighted_norm(&fc, p, 0.7);
            let lb = lp_weighted_norm(&f, p, 0.7);
            assert!((la - c.norm() * lb).abs() < 1e-12 * la.max(1.0));
        }
    }

    #[test]
    fn symbol_convolution_paths_and_delta() {
        let g = make_grid(1, 8, 4.0).unwrap();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let m = g.len();
        let rnd = |rng: &mut rand_chacha::ChaCha8Rng| {
            PhaseFn::new(
                g.clone(),
                (0..m * m)
                    .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .unwrap()
        };
        let a = rnd(&mut rng);
        let b = rnd(&mut rng);
        let fast = symbol_convolve(&a, &b).unwrap();
        let slow = symbol_convolve_direct(&a, &b).unwrap();
        for (x, y) in fast.values.iter().zip(&slow.values) {
            assert!((x - y).norm() < 1e-11);
        }
        // Commutativity.
        let ba = symbol_convolve(&b, &a).unwrap();
        for (x, y) in fast.values.iter().zip(&ba.values) {
            assert!((x - y).norm() < 1e-10);
        }
        // Scaled discrete delta at the phase-space origin is the identity.
        let mut delta = PhaseFn::zeros(&g);
        let c = g.n / 2;
        delta.values[(c * m) + c] = Complex64::new(1.0 / delta.cell(), 0.0);
        let idd = symbol_convolve(&a, &delta).unwrap();
        for (x, y) in idd.values.iter().zip(&a.values) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn gaussian_convolution_closed_form() {
        // [DERIVED] e^{-π|z|²/a²} ∗ e^{-π|z|²/b²} =
        //   (ab/√(a²+b²))^{2} e^{-π|z|²/(a²+b²)} on the (x,ω) plane (d = 1).
        let g = g64();
        let (wa, wb) = (0.8, 1.0);
        let mk = |w: f64| {
            PhaseFn::from_fn(&g, |x, om| {
                let r2 = x[0] * x[0] + om[0] * om[0];
                Complex64::new((-PI * r2 / (w * w)).exp(), 0.0)
            })
        };
        let conv = symbol_convolve(&mk(wa), &mk(wb)).unwrap();
        let c2 = wa * wa + wb * wb;
        let amp = (wa * wb) * (wa * wb) / c2;
        let m = g.len();
        let mut err: f64 = 0.0;
        for xf in 0..g.n {
            for wf in 0..g.n {
                let x = g.point1(xf);
                let om = g.dual_point1(wf);
                let want = amp * (-PI * (x * x + om * om) / c2).exp();
                err = err.max((conv.values[xf * m + wf] - Complex64::new(want, 0.0)).norm());
            }
        }
        assert!(err < 1e-7, "gaussian convolution error {err:e}");
    }

    #[test]
    fn signal_convolution_matches_direct() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let f = random_test_signal(40, &g);
        let h = random_test_signal(41, &g);
        let c = convolve(&f, &h).unwrap();
        let n = g.n;
        for mi in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += f.values[j] * h.values[(mi + n + n / 2 - j) % n];
            }
            acc *= g.cell();
            assert!((c.values[mi] - acc).norm() < 1e-12);
        }
    }

    #[test]
    fn symbol_modulation_norm_sanity() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let f = random_test_signal(50, &g);
        let v = stft(&f, &gaussian_window(&g)).unwrap();
        // Homogeneity and positivity.
        let a = symbol_modulation_norm(&v, Exponent::Inf, Exponent::Finite(1.0), 0.0, 0.0);
        assert!(a.is_finite() && a > 0.0);
        let vs = v.scaled(Complex64::new(0.0, -3.0));
        let b = symbol_modulation_norm(&vs, Exponent::Inf, Exponent::Finite(1.0), 0.0, 0.0);
        assert!((b - 3.0 * a).abs() < 1e-10 * b.max(1.0));
        // M² of the phase function equals its L² norm (Moyal on the flat
        // anisotropic plane).
        let m2 = symbol_modulation_norm(&v, Exponent::Finite(2.0), Exponent::Finite(2.0), 0.0, 0.0);
        let l2 = v.pair(&v).unwrap().re.sqrt();
        assert!((m2 - l2).abs() < 1e-8 * l2.max(1.0), "{m2} vs {l2}");
    }
}
