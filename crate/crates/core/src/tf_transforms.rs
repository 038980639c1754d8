//! Time-frequency transforms: translation, modulation, involution, the
//! short-time Fourier transform (STFT), the cross-Wigner distribution, and
//! their tensor-product multilinear variants.
//!
//! Shifts are restricted to lattice points and modulations to dual-lattice
//! points so that every covariance identity is exact on the grid. The Wigner
//! half-shifts f(x ± t/2) are realized by factor-2 trigonometric upsampling,
//! preserving spectral accuracy. Fast paths use FFTs; direct-summation
//! counterparts (`*_direct`) exist for cross-validation at small N.

use crate::fft;
use crate::grid::{upsample2, Grid, PhaseFn, Signal};
use crate::{Result, TfError};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Ordered list of n nonzero windows φ_1..φ_n on a common grid.
#[derive(Clone, Debug)]
pub struct WindowVector {
    /// The windows.
    pub windows: Vec<Signal>,
}

impl WindowVector {
    /// Validate non-emptiness, common grid, and nonzero windows.
    pub fn new(windows: Vec<Signal>) -> Result<WindowVector> {
        if windows.is_empty() {
            return Err(TfError::InvalidArgument("empty window vector".into()));
        }
        for w in &windows {
            if w.grid != windows[0].grid {
                return Err(TfError::GridMismatch(
                    "windows live on different grids".into(),
                ));
            }
            if w.max_abs() <= 1e-14 {
                return Err(TfError::InvalidArgument("zero window".into()));
            }
        }
        Ok(WindowVector { windows })
    }

    /// Number of factors n.
    pub fn len(&self) -> usize {
        self.windows.len()
    }

    /// Always false: construction rejects empty vectors.
    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    /// The common grid.
    pub fn grid(&self) -> &Grid {
        &self.windows[0].grid
    }
}

/// Ordered list of n signals f_1..f_n on a common grid, read as the tensor
/// product f_1 ⊗ ··· ⊗ f_n where required.
#[derive(Clone, Debug)]
pub struct SignalVector {
    /// The signals.
    pub signals: Vec<Signal>,
}

impl SignalVector {
    /// Validate non-emptiness and a common grid.
    pub fn new(signals: Vec<Signal>) -> Result<SignalVector> {
        if signals.is_empty() {
            return Err(TfError::InvalidArgument("empty signal vector".into()));
        }
        for s in &signals {
            if s.grid != signals[0].grid {
                return Err(TfError::GridMismatch(
                    "signals live on different grids".into(),
                ));
            }
        }
        Ok(SignalVector { signals })
    }

    /// Number of factors n.
    pub fn len(&self) -> usize {
        self.signals.len()
    }

    /// Always false: construction rejects empty vectors.
    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    /// The common grid.
    pub fn grid(&self) -> &Grid {
        &self.signals[0].grid
    }

    /// Flattened tensor product on the nd-dimensional lattice.
    pub fn tensor(&self) -> Signal {
        tensor_product(&self.signals)
    }
}

/// Tensor product of signals on a common grid, laid out on the stacked
/// (n·d)-dimensional lattice.
pub fn tensor_product(parts: &[Signal]) -> Signal {
    let mut values = vec![Complex64::new(1.0, 0.0)];
    let mut d_total = 0;
    for p in parts {
        let mut next = Vec::with_capacity(values.len() * p.values.len());
        for v in &values {
            for w in &p.values {
                next.push(v * w);
            }
        }
        values = next;
        d_total += p.grid.d;
    }
    Signal {
        grid: Grid {
            d: d_total,
            n: parts[0].grid.n,
            l: parts[0].grid.l,
        },
        values,
    }
}

fn cells_from_point(grid: &Grid, x0: &[f64], spacing: f64, what: &str) -> Result<Vec<i64>> {
    if x0.len() != grid.d {
        return Err(TfError::InvalidArgument(format!(
            "{what} has {} coordinates for a {}-dimensional grid",
            x0.len(),
            grid.d
        )));
    }
    let mut cells = Vec::with_capacity(grid.d);
    for &c in x0 {
        let m = c / spacing;
        if (m - m.round()).abs() > 1e-9 {
            return Err(TfError::InvalidArgument(format!(
                "{what} coordinate {c} is off-lattice (spacing {spacing})"
            )));
        }
        cells.push(m.round() as i64);
    }
    Ok(cells)
}

/// Cyclic translation by whole cells per axis: (T f)[j] = f[j - shift].
pub fn translate_cells(f: &Signal, shift: &[i64]) -> Signal {
    let shape = f.grid.shape();
    let mut values = f.values.clone();
    for (axis, &s) in shift.iter().enumerate() {
        values = fft::roll_axis(&values, &shape, axis, s);
    }
    Signal {
        grid: f.grid.clone(),
        values,
    }
}

/// Translation T_{x0} f = f(· - x0) for a lattice point x0; off-lattice
/// shifts are rejected.
pub fn translate(f: &Signal, x0: &[f64]) -> Result<Signal> {
    let cells = cells_from_point(&f.grid, x0, f.grid.spacing(), "translation")?;
    Ok(translate_cells(f, &cells))
}

/// Modulation by whole dual cells per axis: (M f)(x) = e^{2πi (k/L)·x} f(x).
pub fn modulate_cells(f: &Signal, kshift: &[i64]) -> Signal {
    let grid = &f.grid;
    let mut out = f.clone();
    let mut idx = vec![0usize; grid.d];
    for flat in 0..grid.len() {
        fft::unravel(flat, grid.n, grid.d, &mut idx);
        let mut ph = 0.0;
        for (a, &j) in idx.iter().enumerate() {
            ph += 2.0 * PI * kshift[a] as f64 / grid.l * grid.point1(j);
        }
        out.values[flat] *= Complex64::from_polar(1.0, ph);
    }
    out
}

/// Modulation M_{ω0} f = e^{2πi ω0·x} f for a dual-lattice point ω0;
/// off-lattice frequencies are rejected.
pub fn modulate(f: &Signal, w0: &[f64]) -> Result<Signal> {
    let cells = cells_from_point(&f.grid, w0, f.grid.dual_spacing(), "modulation")?;
    Ok(modulate_cells(f, &cells))
}

/// Involution f*(x) = conj(f(-x)) via the periodic index reflection
/// j ↦ (N - j) mod N, which fixes x = 0.
pub fn involution(f: &Signal) -> Signal {
    let grid = &f.grid;
    let n = grid.n;
    let mut out = Signal::zeros(grid);
    let mut idx = vec![0usize; grid.d];
    let mut ridx = vec![0usize; grid.d];
    for flat in 0..grid.len() {
        fft::unravel(flat, grid.n, grid.d, &mut idx);
        for a in 0..grid.d {
            ridx[a] = (n - idx[a]) % n;
        }
        out.values[flat] = f.values[fft::ravel(&ridx, n)].conj();
    }
    out
}

/// Periodic reflection without conjugation, f(-x).
pub fn reflect(f: &Signal) -> Signal {
    let mut out = involution(f);
    for v in out.values.iter_mut() {
        *v = v.conj();
    }
    out
}

/// The default test window: the L²-normalized Gaussian 2^{d/4} e^{-π|t|²}.
pub fn gaussian_window(grid: &Grid) -> Signal {
    let c = 2f64.powf(grid.d as f64 / 4.0);
    Signal::from_fn(grid, |pt| {
        let r2: f64 = pt.iter().map(|x| x * x).sum();
        Complex64::new(c * (-PI * r2).exp(), 0.0)
    })
}

fn check_pair(f: &Signal, g: &Signal, op: &str) -> Result<()> {
    if f.grid != g.grid {
        return Err(TfError::GridMismatch(format!(
            "{op}: operands live on different grids"
        )));
    }
    Ok(())
}

/// Short-time Fourier transform V_g f(x_m, ω_k) = Δ^d Σ_t f(t)
/// conj(g(t - x_m)) e^{-2πi ω_k·t}, computed with one centered FFT per
/// translate.
pub fn stft(f: &Signal, g: &Signal) -> Result<PhaseFn> {
    check_pair(f, g, "stft")?;
    if g.max_abs() <= 1e-14 {
        return Err(TfError::InvalidArgument("stft: zero window".into()));
    }
    let grid = &f.grid;
    let d = grid.d;
    let n = grid.n;
    let m = grid.len();
    let shape = grid.shape();
    let half = (n / 2) as i64;
    let mut values = Vec::with_capacity(m * m);
    let mut midx = vec![0usize; d];
    let mut shift = vec![0i64; d];
    for mflat in 0..m {
        fft::unravel(mflat, n, d, &mut midx);
        for a in 0..d {
            shift[a] = midx[a] as i64 - half;
        }
        let tg = translate_cells(g, &shift);
        let mut h: Vec<Complex64> = f
            .values
            .iter()
            .zip(&tg.values)
            .map(|(a, b)| a * b.conj())
            .collect();
        for axis in 0..d {
            h = fft::centered_forward_axis(&h, &shape, axis, grid.spacing());
        }
        values.extend_from_slice(&h);
    }
    PhaseFn::new(grid.clone(), values)
}

/// Direct-summation STFT oracle (no FFT); O(N^{3d}).
pub fn stft_direct(f: &Signal, g: &Signal) -> Result<PhaseFn> {
    check_pair(f, g, "stft_direct")?;
    let grid = f.grid.clone();
    let d = grid.d;
    let n = grid.n;
    let m = grid.len();
    let cell = grid.cell();
    let half = n / 2;
    let mut values = vec![Complex64::new(0.0, 0.0); m * m];
    let mut midx = vec![0usize; d];
    let mut kidx = vec![0usize; d];
    let mut tidx = vec![0usize; d];
    let mut gidx = vec![0usize; d];
    for mflat in 0..m {
        fft::unravel(mflat, n, d, &mut midx);
        for kflat in 0..m {
            fft::unravel(kflat, n, d, &mut kidx);
            let mut acc = Complex64::new(0.0, 0.0);
            for tflat in 0..m {
                fft::unravel(tflat, n, d, &mut tidx);
                let mut ph = 0.0;
                for a in 0..d {
                    gidx[a] =
                        ((tidx[a] + n + half - midx[a]) % n + n) % n;
                    ph -= 2.0 * PI * grid.dual_point1(kidx[a]) * grid.point1(tidx[a]);
                }
                acc += f.values[tflat]
                    * g.values[fft::ravel(&gidx, n)].conj()
                    * Complex64::from_polar(1.0, ph);
            }
            values[mflat * m + kflat] = cell * acc;
        }
    }
    PhaseFn::new(grid, values)
}

/// Tensor-product multilinear STFT: the outer product of the per-factor
/// STFTs, laid out on the 2nd-dimensional phase lattice (x-block then
/// ω-block).
pub fn stft_tensor(fv: &SignalVector, wv: &WindowVector) -> Result<PhaseFn> {
    if fv.len() != wv.len() {
        return Err(TfError::InvalidArgument(format!(
            "stft_tensor: {} signals vs {} windows",
            fv.len(),
            wv.len()
        )));
    }
    let parts: Vec<PhaseFn> = fv
        .signals
        .iter()
        .zip(&wv.windows)
        .map(|(f, g)| stft(f, g))
        .collect::<Result<_>>()?;
    Ok(outer_phase(&parts))
}

/// Outer product of per-factor phase functions V_j[x_j, ω_j] onto the joint
/// lattice V[x_1..x_n, ω_1..ω_n].
pub(crate) fn outer_phase(parts: &[PhaseFn]) -> PhaseFn {
    let n_factors = parts.len();
    let base = &parts[0].xgrid;
    let m = base.len();
    let joint = Grid {
        d: base.d * n_factors,
        n: base.n,
        l: base.l,
    };
    let mtot = joint.len();
    let mut values = vec![Complex64::new(0.0, 0.0); mtot * mtot];
    let mut xdig = vec![0usize; n_factors];
    let mut wdig = vec![0usize; n_factors];
    for xf in 0..mtot {
        fft::unravel(xf, m, n_factors, &mut xdig);
        for wf in 0..mtot {
            fft::unravel(wf, m, n_factors, &mut wdig);
            let mut v = Complex64::new(1.0, 0.0);
            for j in 0..n_factors {
                v *= parts[j].values[xdig[j] * m + wdig[j]];
            }
            values[xf * mtot + wf] = v;
        }
    }
    PhaseFn::new(joint, values).expect("outer product has consistent size")
}

/// Cross-Wigner distribution W(f,g)(x_m, ω_k) = Δ^d Σ_j f₂[2m+j-N/2]
/// conj(g₂[2m-j+N/2]) e^{-2πi ω_k·t_j} with t_j = (j-N/2)Δ, where f₂, g₂ are
/// the factor-2 upsampled inputs.
pub fn wigner(f: &Signal, g: &Signal) -> Result<PhaseFn> {
    check_pair(f, g, "wigner")?;
    let grid = f.grid.clone();
    let d = grid.d;
    let n = grid.n;
    let n2 = 2 * n;
    let m = grid.len();
    let shape = grid.shape();
    let f2 = upsample2(f);
    let g2 = upsample2(g);
    let mut values = Vec::with_capacity(m * m);
    let mut midx = vec![0usize; d];
    let mut jidx = vec![0usize; d];
    let mut aidx = vec![0usize; d];
    let mut bidx = vec![0usize; d];
    for mflat in 0..m {
        fft::unravel(mflat, n, d, &mut midx);
        let mut h = vec![Complex64::new(0.0, 0.0); m];
        for (jflat, hv) in h.iter_mut().enumerate() {
            fft::unravel(jflat, n, d, &mut jidx);
            for a in 0..d {
                aidx[a] = (2 * midx[a] + jidx[a] + n2 - n / 2) % n2;
                bidx[a] = (2 * midx[a] + n2 + n / 2 - jidx[a]) % n2;
            }
            *hv = f2.values[fft::ravel(&aidx, n2)] * g2.values[fft::ravel(&bidx, n2)].conj();
        }
        for axis in 0..d {
            h = fft::centered_forward_axis(&h, &shape, axis, grid.spacing());
        }
        values.extend_from_slice(&h);
    }
    PhaseFn::new(grid, values)
}

/// Direct-summation Wigner oracle (naive transform sums); O(N^{3d}).
pub fn wigner_direct(f: &Signal, g: &Signal) -> Result<PhaseFn> {
    check_pair(f, g, "wigner_direct")?;
    let grid = f.grid.clone();
    let d = grid.d;
    let n = grid.n;
    let n2 = 2 * n;
    let m = grid.len();
    let cell = grid.cell();
    let f2 = upsample2(f);
    let g2 = upsample2(g);
    let mut values = vec![Complex64::new(0.0, 0.0); m * m];
    let mut midx = vec![0usize; d];
    let mut kidx = vec![0usize; d];
    let mut jidx = vec![0usize; d];
    let mut aidx = vec![0usize; d];
    let mut bidx = vec![0usize; d];
    for mflat in 0..m {
        fft::unravel(mflat, n, d, &mut midx);
        for kflat in 0..m {
            fft::unravel(kflat, n, d, &mut kidx);
            let mut acc = Complex64::new(0.0, 0.0);
            for jflat in 0..m {
                fft::unravel(jflat, n, d, &mut jidx);
                let mut ph = 0.0;
                for a in 0..d {
                    aidx[a] = (2 * midx[a] + jidx[a] + n2 - n / 2) % n2;
                    bidx[a] = (2 * midx[a] + n2 + n / 2 - jidx[a]) % n2;
                    let tj = (jidx[a] as f64 - n as f64 / 2.0) * grid.spacing();
                    ph -= 2.0 * PI * grid.dual_point1(kidx[a]) * tj;
                }
                acc += f2.values[fft::ravel(&aidx, n2)]
                    * g2.values[fft::ravel(&bidx, n2)].conj()
                    * Complex64::from_polar(1.0, ph);
            }
            values[mflat * m + kflat] = cell * acc;
        }
    }
    PhaseFn::new(grid, values)
}

/// Multilinear Wigner transform: the outer product Π_j W(f_j, g_j) on the
/// 2nd-dimensional phase lattice.
pub fn wigner_multi(fv: &SignalVector, gv: &SignalVector) -> Result<PhaseFn> {
    if fv.len() != gv.len() {
        return Err(TfError::InvalidArgument(format!(
            "wigner_multi: {} vs {} factors",
            fv.len(),
            gv.len()
        )));
    }
    let parts: Vec<PhaseFn> = fv
        .signals
        .iter()
        .zip(&gv.signals)
        .map(|(f, g)| wigner(f, g))
        .collect::<Result<_>>()?;
    Ok(outer_phase(&parts))
}
