//! Weyl quantization, multilinear localization operators, weak forms, dense
//! kernels, the Weyl-symbol connection, and the diagonal trace map.
//!
//! The Weyl operator is realized as the exact algebraic adjoint of the
//! phase-space pairing ⟨L_σ f⃗, g⃗⟩ = ⟨σ, W(g⃗, f⃗)⟩ over the discrete
//! lattice: with S[m⃗, j⃗] = Δω^D Σ_k σ[m⃗, k⃗] e^{2πi ω_k·t_j} and U the
//! factor-2 upsampling, the scattered fine-lattice accumulation
//! v[2m+j-N/2] += S[m,j]·(U f)[2m-j+N/2] followed by Δ^D·U† reproduces the
//! pairing identity to machine precision, so σ ≡ 1 acts as the identity and
//! x-only / ω-only symbols act as the corresponding pointwise and Fourier
//! multipliers. Localization operators are discrete quadratures of their
//! defining phase-space synthesis; all weak-form chains (direct quadrature,
//! STFT pairing, kernel pairing) are algebraically identical discretizations.

use crate::fft;
use crate::grid::{inner, upsample2, Grid, PhaseFn, Signal};
use crate::tf_transforms::{stft_direct, stft_tensor, tensor_product, wigner_multi, SignalVector, WindowVector};
use crate::{modspaces, Result, TfError};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default cap on dense-kernel size, in complex entries.
pub const KERNEL_ENTRY_CAP: u128 = 1 << 26;

/// A phase-space symbol on the 2nd-dimensional lattice with its factor count.
#[derive(Clone, Debug)]
pub struct Symbol {
    /// Number of multilinear factors n.
    pub n: usize,
    /// Underlying phase-space samples; `phase.xgrid.d = n·d`.
    pub phase: PhaseFn,
}

impl Symbol {
    /// Wrap a phase function as an n-factor symbol; the spatial block
    /// dimension must be divisible by n.
    pub fn new(n: usize, phase: PhaseFn) -> Result<Symbol> {
        if n == 0 || phase.xgrid.d % n != 0 {
            return Err(TfError::InvalidArgument(format!(
                "symbol block dimension {} incompatible with n = {n}",
                phase.xgrid.d
            )));
        }
        Ok(Symbol { n, phase })
    }

    /// Per-factor spatial dimension d.
    pub fn factor_dim(&self) -> usize {
        self.phase.xgrid.d / self.n
    }

    /// The constant symbol σ ≡ 1 on the phase lattice of `grid` with n
    /// factors.
    pub fn one(grid: &Grid, n: usize) -> Symbol {
        let joint = Grid {
            d: grid.d * n,
            n: grid.n,
            l: grid.l,
        };
        let len = joint.len() * joint.len();
        Symbol {
            n,
            phase: PhaseFn::new(joint, vec![Complex64::new(1.0, 0.0); len])
                .expect("constant symbol has consistent size"),
        }
    }
}

/// Dense operator kernel k(t, s) over the nd-dimensional lattice, stored
/// t-major; the operator acts by (A f)(s) = Δ^D Σ_t k(t, s) f(t).
#[derive(Clone, Debug)]
pub struct Kernel {
    /// Lattice of both the t and s axes (dimension D = nd).
    pub grid: Grid,
    /// N^D × N^D complex entries, k[t·M + s].
    pub values: Vec<Complex64>,
}

impl Kernel {
    /// Apply the kernel to a (tensor-product) input on the D-lattice.
    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        if f.grid != self.grid {
            return Err(TfError::GridMismatch(
                "kernel and input live on different grids".into(),
            ));
        }
        let m = self.grid.len();
        let cell = self.grid.cell();
        let mut out = Signal::zeros(&self.grid);
        for t in 0..m {
            let ft = f.values[t];
            if ft == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &self.values[t * m..(t + 1) * m];
            for (s, k) in row.iter().enumerate() {
                out.values[s] += cell * k * ft;
            }
        }
        Ok(out)
    }
}

/// A multilinear localization operator: symbol, analysis windows φ⃗, and
/// synthesis windows ψ⃗.
#[derive(Clone, Debug)]
pub struct LocalizationSpec {
    /// Phase-space symbol a.
    pub symbol: Symbol,
    /// Analysis windows φ⃗ (length n).
    pub analysis: WindowVector,
    /// Synthesis windows ψ⃗ (length n).
    pub synthesis: WindowVector,
}

impl LocalizationSpec {
    /// Validate the factor counts and grid compatibility.
    pub fn new(symbol: Symbol, analysis: WindowVector, synthesis: WindowVector) -> Result<LocalizationSpec> {
        if analysis.len() != symbol.n || synthesis.len() != symbol.n {
            return Err(TfError::InvalidArgument(format!(
                "window vectors of lengths {}/{} for an n = {} symbol",
                analysis.len(),
                synthesis.len(),
                symbol.n
            )));
        }
        let g = analysis.grid();
        if g != synthesis.grid() {
            return Err(TfError::GridMismatch(
                "analysis and synthesis windows live on different grids".into(),
            ));
        }
        if g.d != symbol.factor_dim() || g.n != symbol.phase.xgrid.n {
            return Err(TfError::GridMismatch(
                "windows incompatible with the symbol's phase lattice".into(),
            ));
        }
        Ok(LocalizationSpec {
            symbol,
            analysis,
            synthesis,
        })
    }

    /// Number of factors n.
    pub fn n(&self) -> usize {
        self.symbol.n
    }

    /// The underlying signal grid.
    pub fn grid(&self) -> &Grid {
        self.analysis.grid()
    }
}

fn check_symbol_signal(sigma: &Symbol, grid: &Grid, n_factors: usize) -> Result<()> {
    if sigma.n != n_factors {
        return Err(TfError::InvalidArgument(format!(
            "symbol has n = {}, input has n = {n_factors}",
            sigma.n
        )));
    }
    if sigma.factor_dim() != grid.d || sigma.phase.xgrid.n != grid.n {
        return Err(TfError::GridMismatch(
            "symbol phase lattice incompatible with the signal grid".into(),
        ));
    }
    Ok(())
}

/// Core Weyl application on the D-dimensional lattice: input is the (already
/// tensorized) signal F on R^D, σ the symbol over the same block structure.
fn weyl_apply_core(sigma: &PhaseFn, f: &Signal) -> Signal {
    let dd = sigma.xgrid.d;
    let n = sigma.xgrid.n;
    let n2 = 2 * n;
    let dx = sigma.xgrid.spacing();
    let dw = sigma.xgrid.dual_spacing();

    // S[m⃗, j⃗] = Δω^D Σ_k σ[m⃗, k⃗] e^{2πi ω_k·t_j}, one centered inverse
    // transform per ω-axis.
    let shape = sigma.shape();
    let mut s = sigma.values.clone();
    for axis in dd..2 * dd {
        s = fft::centered_inverse_axis(&s, &shape, axis, dw);
    }

    // Scatter onto the refined lattice against the upsampled input.
    let f2 = upsample2(f);
    let m = fft::tensor_len(n, dd);
    let m2 = fft::tensor_len(n2, dd);
    let mut v = vec![Complex64::new(0.0, 0.0); m2];
    let mut midx = vec![0usize; dd];
    let mut jidx = vec![0usize; dd];
    let mut aidx = vec![0usize; dd];
    let mut bidx = vec![0usize; dd];
    for mflat in 0..m {
        fft::unravel(mflat, n, dd, &mut midx);
        for jflat in 0..m {
            let sv = s[mflat * m + jflat];
            fft::unravel(jflat, n, dd, &mut jidx);
            for a in 0..dd {
                aidx[a] = (2 * midx[a] + jidx[a] + n2 - n / 2) % n2;
                bidx[a] = (2 * midx[a] + n2 + n / 2 - jidx[a]) % n2;
            }
            v[fft::ravel(&aidx, n2)] += sv * f2.values[fft::ravel(&bidx, n2)];
        }
    }

    // Project back: L_σ f = Δ^D · U† v.
    let mut shape2 = vec![n2; dd];
    let mut out = v;
    for axis in 0..dd {
        out = fft::upsample2_adjoint_axis(&out, &shape2, axis);
        shape2[axis] = n;
    }
    let scale = dx.powi(dd as i32);
    for x in out.iter_mut() {
        *x *= scale;
    }
    Signal {
        grid: sigma.xgrid.clone(),
        values: out,
    }
}

/// Linear (n = 1) Weyl operator L_σ applied to a signal.
pub fn weyl_apply(sigma: &Symbol, f: &Signal) -> Result<Signal> {
    if sigma.n != 1 {
        return Err(TfError::InvalidArgument(
            "weyl_apply requires an n = 1 symbol; use weyl_apply_multi".into(),
        ));
    }
    check_symbol_signal(sigma, &f.grid, 1)?;
    Ok(weyl_apply_core(&sigma.phase, f))
}

/// Multilinear Weyl operator applied to the tensor product of `fv`; the
/// result is a function on the nd-lattice (not a tensor product in general).
pub fn weyl_apply_multi(sigma: &Symbol, fv: &SignalVector) -> Result<Signal> {
    check_symbol_signal(sigma, fv.grid(), fv.len())?;
    Ok(weyl_apply_core(&sigma.phase, &fv.tensor()))
}

/// Direct-summation Weyl path for cross-validation: identical operator, but
/// with naive DFT sums in place of every FFT stage. O(N^{2D}·N^D); small N
/// only.
pub fn weyl_apply_direct(sigma: &Symbol, fv: &SignalVector) -> Result<Signal> {
    check_symbol_signal(sigma, fv.grid(), fv.len())?;
    let phase = &sigma.phase;
    let dd = phase.xgrid.d;
    let n = phase.xgrid.n;
    let n2 = 2 * n;
    let grid = &phase.xgrid;
    let dx = grid.spacing();
    let dw = grid.dual_spacing();
    let m = grid.len();
    let f = fv.tensor();

    // Naive per-axis upsampling matrix U[u, j] (2N × N) from the zero-padding
    // spectrum: U = (2/(2N)) F₂ᴺ⁻¹ P Fᴺ evaluated by direct sums.
    let mut u_mat = vec![Complex64::new(0.0, 0.0); n2 * n];
    for u in 0..n2 {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for kc in 0..n {
                // Centered frequency kc - N/2 acts on both lattices.
                let kf = kc as f64 - n as f64 / 2.0;
                let ph = 2.0 * PI * kf * (u as f64 / n2 as f64 - j as f64 / n as f64);
                acc += Complex64::from_polar(1.0, ph);
            }
            u_mat[u * n + j] = acc / n as f64;
        }
    }
    let up_axis = |vals: &[Complex64], shape: &[usize], axis: usize| {
        fft::map_axis(vals, shape, axis, n2, |line, out| {
            for (u, o) in out.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, l) in line.iter().enumerate() {
                    acc += u_mat[u * n + j] * l;
                }
                *o = acc;
            }
        })
    };
    let up_adj_axis = |vals: &[Complex64], shape: &[usize], axis: usize| {
        fft::map_axis(vals, shape, axis, n, |line, out| {
            for (j, o) in out.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (u, l) in line.iter().enumerate() {
                    acc += u_mat[u * n + j].conj() * l;
                }
                *o = acc;
            }
        })
    };

    // S by naive inverse sums over the ω-block.
    let shape = phase.shape();
    let mut s = phase.values.clone();
    for axis in dd..2 * dd {
        s = fft::map_axis(&s, &shape, axis, n, |line, out| {
            for (j, o) in out.iter_mut().enumerate() {
                let tj = (j as f64 - n as f64 / 2.0) * dx;
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, l) in line.iter().enumerate() {
                    let wk = (k as f64 - n as f64 / 2.0) / grid.l;
                    acc += l * Complex64::from_polar(1.0, 2.0 * PI * wk * tj);
                }
                *o = acc * dw;
            }
        });
    }

    let mut f2 = f.values.clone();
    let mut fshape = vec![n; dd];
    for axis in 0..dd {
        f2 = up_axis(&f2, &fshape, axis);
        fshape[axis] = n2;
    }

    let m2 = fft::tensor_len(n2, dd);
    let mut v = vec![Complex64::new(0.0, 0.0); m2];
    let mut midx = vec![0usize; dd];
    let mut jidx = vec![0usize; dd];
    let mut aidx = vec![0usize; dd];
    let mut bidx = vec![0usize; dd];
    for mflat in 0..m {
        fft::unravel(mflat, n, dd, &mut midx);
        for jflat in 0..m {
            fft::unravel(jflat, n, dd, &mut jidx);
            for a in 0..dd {
                aidx[a] = (2 * midx[a] + jidx[a] + n2 - n / 2) % n2;
                bidx[a] = (2 * midx[a] + n2 + n / 2 - jidx[a]) % n2;
            }
            v[fft::ravel(&aidx, n2)] += s[mflat * m + jflat] * f2[fft::ravel(&bidx, n2)];
        }
    }

    let mut out = v;
    let mut shape2 = vec![n2; dd];
    for axis in 0..dd {
        out = up_adj_axis(&out, &shape2, axis);
        shape2[axis] = n;
    }
    let scale = dx.powi(dd as i32);
    for x in out.iter_mut() {
        *x *= scale;
    }
    Signal::new(grid.clone(), out)
}

/// Weak form ⟨L_σ f⃗, g⃗⟩ computed as the phase-space pairing
/// Δ^{nd} Δω^{nd} Σ σ · conj(W(g⃗, f⃗)); the reference value for
/// `weyl_apply_multi`.
pub fn weyl_weak(sigma: &Symbol, fv: &SignalVector, gv: &SignalVector) -> Result<Complex64> {
    check_symbol_signal(sigma, fv.grid(), fv.len())?;
    if fv.len() != gv.len() {
        return Err(TfError::InvalidArgument(
            "weyl_weak: factor count mismatch".into(),
        ));
    }
    let w = wigner_multi(gv, fv)?;
    sigma.phase.pair(&w)
}

/// Localization operator A f⃗ = Σ_z cell · a(z) V_{φ⃗}f⃗(z) M_ω T_x ψ⃗,
/// evaluated with one centered inverse FFT over the ω-block followed by the
/// translate accumulation.
pub fn localization_apply(spec: &LocalizationSpec, fv: &SignalVector) -> Result<Signal> {
    let v = stft_tensor(fv, &spec.analysis)?;
    localization_synthesize(spec, &v)
}

/// Shared synthesis stage: given the analysis STFT V, return
/// Σ_z cell a(z) V(z) M_ω T_x ψ⃗.
fn localization_synthesize(spec: &LocalizationSpec, v: &PhaseFn) -> Result<Signal> {
    let phase = &spec.symbol.phase;
    if phase.values.len() != v.values.len() {
        return Err(TfError::GridMismatch(
            "symbol and STFT lattices disagree".into(),
        ));
    }
    let dd = phase.xgrid.d;
    let n = phase.xgrid.n;
    let grid = &phase.xgrid;
    let dx = grid.spacing();
    let dw = grid.dual_spacing();
    let m = grid.len();

    let mut av: Vec<Complex64> = phase
        .values
        .iter()
        .zip(&v.values)
        .map(|(a, b)| a * b)
        .collect();
    // H[m⃗, t⃗] = Δω^D Σ_k (aV)[m⃗, k⃗] e^{2πi ω_k·t}: the ω-axes transform
    // onto the spatial lattice (t_j = x_j since e^{2πiω_k x_j} matches the
    // centered kernel).
    let shape = phase.shape();
    for axis in dd..2 * dd {
        av = fft::centered_inverse_axis(&av, &shape, axis, dw);
    }

    let psi = tensor_product(&spec.synthesis.windows);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let mut midx = vec![0usize; dd];
    let mut tidx = vec![0usize; dd];
    let mut pidx = vec![0usize; dd];
    let half = n / 2;
    for mflat in 0..m {
        fft::unravel(mflat, n, dd, &mut midx);
        for tflat in 0..m {
            fft::unravel(tflat, n, dd, &mut tidx);
            for a in 0..dd {
                pidx[a] = (tidx[a] + n + half - midx[a]) % n;
            }
            out[tflat] += av[mflat * m + tflat] * psi.values[fft::ravel(&pidx, n)];
        }
    }
    let scale = dx.powi(dd as i32);
    for x in out.iter_mut() {
        *x *= scale;
    }
    Signal::new(grid.clone(), out)
}

/// Direct-summation localization path: brute-force quadrature of the
/// synthesis formula with a direct-summation analysis STFT. O(N^{3D}).
pub fn localization_apply_direct(spec: &LocalizationSpec, fv: &SignalVector) -> Result<Signal> {
    let ften = fv.tensor();
    let phiten = tensor_product(&spec.analysis.windows);
    let v = stft_direct(&ften, &phiten)?;
    let phase = &spec.symbol.phase;
    if phase.values.len() != v.values.len() {
        return Err(TfError::GridMismatch(
            "symbol and STFT lattices disagree".into(),
        ));
    }
    let dd = phase.xgrid.d;
    let n = phase.xgrid.n;
    let grid = &phase.xgrid;
    let m = grid.len();
    let cell = phase.cell();
    let psi = tensor_product(&spec.synthesis.windows);
    let half = n / 2;
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let mut midx = vec![0usize; dd];
    let mut kidx = vec![0usize; dd];
    let mut tidx = vec![0usize; dd];
    let mut pidx = vec![0usize; dd];
    for mflat in 0..m {
        fft::unravel(mflat, n, dd, &mut midx);
        for kflat in 0..m {
            fft::unravel(kflat, n, dd, &mut kidx);
            let w = phase.values[mflat * m + kflat] * v.values[mflat * m + kflat] * cell;
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            for tflat in 0..m {
                fft::unravel(tflat, n, dd, &mut tidx);
                let mut ph = 0.0;
                for a in 0..dd {
                    pidx[a] = (tidx[a] + n + half - midx[a]) % n;
                    ph += 2.0 * PI * grid.dual_point1(kidx[a]) * grid.point1(tidx[a]);
                }
                out[tflat] +=
                    w * Complex64::from_polar(1.0, ph) * psi.values[fft::ravel(&pidx, n)];
            }
        }
    }
    Signal::new(grid.clone(), out)
}

/// Both phase-space pairings of the weak form: ⟨a V_{φ⃗}f⃗, V_{ψ⃗}g⃗⟩ and
/// ⟨a, conj(V_{φ⃗}f⃗)·V_{ψ⃗}g⃗⟩.
pub fn localization_weak_forms(
    spec: &LocalizationSpec,
    fv: &SignalVector,
    gv: &SignalVector,
) -> Result<(Complex64, Complex64)> {
    let vf = stft_tensor(fv, &spec.analysis)?;
    let vg = stft_tensor(gv, &spec.synthesis)?;
    let a = &spec.symbol.phase;
    let av = PhaseFn::new(
        a.xgrid.clone(),
        a.values
            .iter()
            .zip(&vf.values)
            .map(|(s, v)| s * v)
            .collect(),
    )?;
    let form1 = av.pair(&vg)?;
    let prod = PhaseFn::new(
        a.xgrid.clone(),
        vf.values
            .iter()
            .zip(&vg.values)
            .map(|(f, g)| f.conj() * g)
            .collect(),
    )?;
    let form2 = a.pair(&prod)?;
    Ok((form1, form2))
}

/// Weak form ⟨A f⃗, g⃗⟩ via the STFT pairing.
pub fn localization_weak(
    spec: &LocalizationSpec,
    fv: &SignalVector,
    gv: &SignalVector,
) -> Result<Complex64> {
    Ok(localization_weak_forms(spec, fv, gv)?.0)
}

/// Dense kernel k(t, s) = Σ_z cell · a(z) conj(Φ_z(t)) Ψ_z(s) of the
/// localization operator, subject to the entry cap.
pub fn localization_kernel(spec: &LocalizationSpec) -> Result<Kernel> {
    localization_kernel_capped(spec, KERNEL_ENTRY_CAP)
}

/// Kernel assembly with an explicit memory cap in complex entries.
pub fn localization_kernel_capped(spec: &LocalizationSpec, cap: u128) -> Result<Kernel> {
    let phase = &spec.symbol.phase;
    let grid = &phase.xgrid;
    let dd = grid.d;
    let n = grid.n;
    let m = grid.len();
    let entries = (m as u128) * (m as u128);
    if entries > cap {
        return Err(TfError::KernelTooLarge { entries, cap });
    }
    // H[m⃗, j⃗] = Δω^D Σ_k a[m⃗, k⃗] e^{2πi ω_k·t_j}; then
    // k(t, s) = Δ^D Σ_m H[m, s - t + N/2] conj(φ⃗(t - x_m)) ψ⃗(s - x_m).
    let dw = grid.dual_spacing();
    let shape = phase.shape();
    let mut h = phase.values.clone();
    for axis in dd..2 * dd {
        h = fft::centered_inverse_axis(&h, &shape, axis, dw);
    }
    let phi = tensor_product(&spec.analysis.windows);
    let psi = tensor_product(&spec.synthesis.windows);
    let half = n / 2;
    let scale = grid.cell();
    let mut values = vec![Complex64::new(0.0, 0.0); m * m];
    let mut midx = vec![0usize; dd];
    let mut tidx = vec![0usize; dd];
    let mut sidx = vec![0usize; dd];
    let mut didx = vec![0usize; dd];
    let mut pidx = vec![0usize; dd];
    let mut qidx = vec![0usize; dd];
    for tflat in 0..m {
        fft::unravel(tflat, n, dd, &mut tidx);
        for sflat in 0..m {
            fft::unravel(sflat, n, dd, &mut sidx);
            for a in 0..dd {
                didx[a] = (sidx[a] + n + half - tidx[a]) % n;
            }
            let dflat = fft::ravel(&didx, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for mflat in 0..m {
                fft::unravel(mflat, n, dd, &mut midx);
                for a in 0..dd {
                    pidx[a] = (tidx[a] + n + half - midx[a]) % n;
                    qidx[a] = (sidx[a] + n + half - midx[a]) % n;
                }
                acc += h[mflat * m + dflat]
                    * phi.values[fft::ravel(&pidx, n)].conj()
                    * psi.values[fft::ravel(&qidx, n)];
            }
            values[tflat * m + sflat] = scale * acc;
        }
    }
    Ok(Kernel {
        grid: grid.clone(),
        values,
    })
}

/// Kernel pairing ⟨A f⃗, g⃗⟩ = Δ^{2D} Σ_{t,s} k(t,s) f⃗(t) conj(g⃗(s)).
pub fn kernel_pairing(kernel: &Kernel, fv: &SignalVector, gv: &SignalVector) -> Result<Complex64> {
    let af = kernel.apply(&fv.tensor())?;
    inner(&af, &gv.tensor())
}

/// Weyl symbol of a localization operator: the periodic phase-space
/// convolution σ = a ∗ W(ψ⃗, φ⃗) with cell volume (Δ·Δω)^{nd}.
pub fn weyl_symbol_of_localization(spec: &LocalizationSpec) -> Result<Symbol> {
    let w = wigner_multi(
        &SignalVector::new(spec.synthesis.windows.clone())?,
        &SignalVector::new(spec.analysis.windows.clone())?,
    )?;
    let conv = modspaces::symbol_convolve(&spec.symbol.phase, &w)?;
    Symbol::new(spec.symbol.n, conv)
}

/// Diagonal trace map ℛ: restrict F on the nd-lattice to t_1 = ⋯ = t_n.
pub fn trace_restrict(f: &Signal, n_factors: usize) -> Result<Signal> {
    if n_factors == 0 || f.grid.d % n_factors != 0 {
        return Err(TfError::InvalidArgument(format!(
            "cannot split a {}-dimensional lattice into {n_factors} equal factors",
            f.grid.d
        )));
    }
    let d = f.grid.d / n_factors;
    let sub = Grid {
        d,
        n: f.grid.n,
        l: f.grid.l,
    };
    let m = sub.len();
    let mut out = Signal::zeros(&sub);
    let mut idx = vec![0usize; d];
    for flat in 0..m {
        fft::unravel(flat, sub.n, d, &mut idx);
        let mut full = Vec::with_capacity(f.grid.d);
        for _ in 0..n_factors {
            full.extend_from_slice(&idx);
        }
        out.values[flat] = f.values[fft::ravel(&full, f.grid.n)];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{fourier, inverse_fourier, make_grid, random_test_signal};
    use crate::tf_transforms::gaussian_window;

    fn sv(signals: Vec<Signal>) -> SignalVector {
        SignalVector::new(signals).unwrap()
    }

    fn wv(windows: Vec<Signal>) -> WindowVector {
        WindowVector::new(windows).unwrap()
    }

    fn random_symbol(grid: &Grid, n_factors: usize, seed: u64) -> Symbol {
        // Arbitrary (non-smooth) dense symbol; fine for algebraic identities.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let joint = Grid {
            d: grid.d * n_factors,
            n: grid.n,
            l: grid.l,
        };
        let len = joint.len() * joint.len();
        let values = (0..len)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Symbol::new(n_factors, PhaseFn::new(joint, values).unwrap()).unwrap()
    }

    #[test]
    fn weyl_identity_and_multipliers() {
        let g = make_grid(1, 16, 4.0).unwrap();
        let f = random_test_signal(1, &g);

        // σ ≡ 1 acts as the identity.
        let one = Symbol::one(&g, 1);
        let lf = weyl_apply(&one, &f).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in lf.values.iter().zip(&f.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-12, "identity symbol error {err:e}");

        // x-only symbols act by pointwise multiplication.
        let u = random_test_signal(2, &g);
        let sx = PhaseFn::from_fn(&g, |x, _| {
            let j = ((x[0] + g.l / 2.0) / g.spacing()).round() as usize;
            u.values[j]
        });
        let lx = weyl_apply(&Symbol::new(1, sx).unwrap(), &f).unwrap();
        let mut err: f64 = 0.0;
        for i in 0..g.n {
            err = err.max((lx.values[i] - u.values[i] * f.values[i]).norm());
        }
        assert!(err < 1e-12, "x-multiplier error {err:e}");

        // ω-only symbols act as Fourier multipliers.
        let v = random_test_signal(3, &g);
        let sw = PhaseFn::from_fn(&g, |_, w| {
            let k = (w[0] * g.l + g.n as f64 / 2.0).round() as usize;
            v.values[k]
        });
        let lw = weyl_apply(&Symbol::new(1, sw).unwrap(), &f).unwrap();
        let mut fhat = fourier(&f);
        for (k, h) in fhat.values.iter_mut().enumerate() {
            *h *= v.values[k];
        }
        let want = inverse_fourier(&fhat);
        let mut err: f64 = 0.0;
        for i in 0..g.n {
            err = err.max((lw.values[i] - want.values[i]).norm());
        }
        assert!(err < 1e-12, "fourier multiplier error {err:e}");
    }

    #[test]
    fn weyl_weak_is_adjoint_of_apply() {
        // Machine-exact for arbitrary data by construction.
        let g = make_grid(1, 8, 4.0).unwrap();
        for seed in 0..5u64 {
            let f = random_test_signal(seed, &g);
            let h = random_test_signal(seed + 100, &g);
            let fv = sv(vec![f.clone(), h.clone()]);
            let gv = sv(vec![
                random_test_signal(seed + 200, &g),
                random_test_signal(seed + 300, &g),
            ]);
            let sigma = random_symbol(&g, 2, seed);
            let weak = weyl_weak(&sigma, &fv, &gv).unwrap();
            let lf = weyl_apply_multi(&sigma, &fv).unwrap();
            let strong = inner(&lf, &gv.tensor()).unwrap();
            assert!(
                (weak - strong).norm() < 1e-10 * weak.norm().max(1.0),
                "seed {seed}: {:e}",
                (weak - strong).norm()
            );
        }
        // σ ≡ 0 pairs to zero; σ = W(g⃗,f⃗) pairs to its squared norm.
        let fv = sv(vec![random_test_signal(7, &g), random_test_signal(8, &g)]);
        let gv = sv(vec![random_test_signal(9, &g), random_test_signal(10, &g)]);
        let zero = Symbol::new(2, PhaseFn::zeros(&Grid { d: 2, n: 8, l: 4.0 })).unwrap();
        assert_eq!(
            weyl_weak(&zero, &fv, &gv).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let w = wigner_multi(&gv, &fv).unwrap();
        let sig = Symbol::new(2, w.clone()).unwrap();
        let val = weyl_weak(&sig, &fv, &gv).unwrap();
        let want = w.pair(&w).unwrap();
        assert!((val - want).norm() < 1e-12 * want.norm().max(1.0));
        assert!(val.im.abs() < 1e-12 && val.re >= 0.0);
    }

    #[test]
    fn weyl_tensor_factorization() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let s1 = random_symbol(&g, 1, 40);
        let s2 = random_symbol(&g, 1, 41);
        let f1 = random_test_signal(42, &g);
        let f2 = random_test_signal(43, &g);
        // Tensor symbol σ = σ1 ⊗ σ2 on the joint lattice.
        let joint = Grid { d: 2, n: 8, l: 4.0 };
        let m = g.len();
        let mtot = joint.len();
        let mut values = vec![Complex64::new(0.0, 0.0); mtot * mtot];
        for x1 in 0..m {
            for x2 in 0..m {
                for k1 in 0..m {
                    for k2 in 0..m {
                        values[(x1 * m + x2) * mtot + (k1 * m + k2)] =
                            s1.phase.values[x1 * m + k1] * s2.phase.values[x2 * m + k2];
                    }
                }
            }
        }
        let sigma = Symbol::new(2, PhaseFn::new(joint, values).unwrap()).unwrap();
        let lf = weyl_apply_multi(&sigma, &sv(vec![f1.clone(), f2.clone()])).unwrap();
        let l1 = weyl_apply(&s1, &f1).unwrap();
        let l2 = weyl_apply(&s2, &f2).unwrap();
        let want = tensor_product(&[l1, l2]);
        let mut err: f64 = 0.0;
        for (a, b) in lf.values.iter().zip(&want.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-10, "tensor weyl factorization {err:e}");

        // σ ≡ 1 at n = 2 reproduces the tensor product.
        let one = Symbol::one(&g, 2);
        let id = weyl_apply_multi(&one, &sv(vec![f1.clone(), f2.clone()])).unwrap();
        let ften = tensor_product(&[f1, f2]);
        let mut err: f64 = 0.0;
        for (a, b) in id.values.iter().zip(&ften.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-12, "n=2 identity {err:e}");
    }

    #[test]
    fn weyl_direct_path_matches_fft_path() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let sigma = random_symbol(&g, 2, 50);
        let fv = sv(vec![random_test_signal(51, &g), random_test_signal(52, &g)]);
        let fast = weyl_apply_multi(&sigma, &fv).unwrap();
        let slow = weyl_apply_direct(&sigma, &fv).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in fast.values.iter().zip(&slow.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-9, "weyl fft vs direct {err:e}");
    }

    #[test]
    fn localization_weak_chain_is_exact() {
        let g = make_grid(1, 8, 4.0).unwrap();
        for seed in 0..4u64 {
            let spec = LocalizationSpec::new(
                random_symbol(&g, 2, seed + 60),
                wv(vec![
                    random_test_signal(seed + 70, &g),
                    random_test_signal(seed + 71, &g),
                ]),
                wv(vec![
                    random_test_signal(seed + 80, &g),
                    random_test_signal(seed + 81, &g),
                ]),
            )
            .unwrap();
            let fv = sv(vec![
                random_test_signal(seed + 90, &g),
                random_test_signal(seed + 91, &g),
            ]);
            let gv = sv(vec![
                random_test_signal(seed + 95, &g),
                random_test_signal(seed + 96, &g),
            ]);
            let (f1, f2) = localization_weak_forms(&spec, &fv, &gv).unwrap();
            let af = localization_apply(&spec, &fv).unwrap();
            let f3 = inner(&af, &gv.tensor()).unwrap();
            let kern = localization_kernel(&spec).unwrap();
            let f4 = kernel_pairing(&kern, &fv, &gv).unwrap();
            let scale = f1.norm().max(1.0);
            assert!((f1 - f2).norm() < 1e-10 * scale, "forms 1-2");
            assert!((f1 - f3).norm() < 1e-10 * scale, "forms 1-3 {:e}", (f1 - f3).norm());
            assert!((f1 - f4).norm() < 1e-10 * scale, "forms 1-4 {:e}", (f1 - f4).norm());
        }
    }

    #[test]
    fn localization_direct_and_kernel_paths() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let spec = LocalizationSpec::new(
            random_symbol(&g, 2, 100),
            wv(vec![random_test_signal(101, &g), random_test_signal(102, &g)]),
            wv(vec![random_test_signal(103, &g), random_test_signal(104, &g)]),
        )
        .unwrap();
        let fv = sv(vec![random_test_signal(105, &g), random_test_signal(106, &g)]);
        let fast = localization_apply(&spec, &fv).unwrap();
        let slow = localization_apply_direct(&spec, &fv).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in fast.values.iter().zip(&slow.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-9, "localization fft vs direct {err:e}");

        let kern = localization_kernel(&spec).unwrap();
        let viak = kern.apply(&fv.tensor()).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in fast.values.iter().zip(&viak.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-9, "localization kernel apply {err:e}");

        // a ≡ 0 → zero kernel and zero output.
        let zspec = LocalizationSpec::new(
            Symbol::new(2, PhaseFn::zeros(&Grid { d: 2, n: 8, l: 4.0 })).unwrap(),
            spec.analysis.clone(),
            spec.synthesis.clone(),
        )
        .unwrap();
        let zk = localization_kernel(&zspec).unwrap();
        assert!(zk.values.iter().all(|v| v.norm() == 0.0));
        let za = localization_apply(&zspec, &fv).unwrap();
        assert!(za.max_abs() < 1e-15);
    }

    #[test]
    fn localization_inversion_formula() {
        // n = 1, a ≡ 1, Gaussian windows: A is STFT inversion, i.e. the
        // identity; the kernel is a reproducing kernel ≈ discrete delta / Δ.
        let g = make_grid(1, 32, 8.0).unwrap();
        let phi = gaussian_window(&g);
        let spec = LocalizationSpec::new(
            Symbol::one(&g, 1),
            wv(vec![phi.clone()]),
            wv(vec![phi.clone()]),
        )
        .unwrap();
        let f = random_test_signal(110, &g);
        let af = localization_apply(&spec, &sv(vec![f.clone()])).unwrap();
        let mut err: f64 = 0.0;
        for (a, b) in af.values.iter().zip(&f.values) {
            err = err.max((a - b).norm());
        }
        assert!(err < 1e-6, "stft inversion error {err:e}");

        let kern = localization_kernel(&spec).unwrap();
        let m = g.len();
        let mut offdiag: f64 = 0.0;
        for t in 0..m {
            for s in 0..m {
                if (t as i64 - s as i64).abs() > 6 && (t as i64 - s as i64).abs() < (m as i64 - 6) {
                    offdiag = offdiag.max(kern.values[t * m + s].norm());
                }
            }
        }
        assert!(offdiag < 1e-6, "reproducing kernel off-diagonal {offdiag:e}");
    }

    #[test]
    fn kernel_cap_is_enforced() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let spec = LocalizationSpec::new(
            random_symbol(&g, 2, 120),
            wv(vec![random_test_signal(121, &g), random_test_signal(122, &g)]),
            wv(vec![random_test_signal(123, &g), random_test_signal(124, &g)]),
        )
        .unwrap();
        match localization_kernel_capped(&spec, 100) {
            Err(TfError::KernelTooLarge { entries, cap }) => {
                assert_eq!(entries, 4096);
                assert_eq!(cap, 100);
            }
            other => panic!("expected size error, got {other:?}"),
        }
    }

    #[test]
    fn trace_restrict_cases() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let f = random_test_signal(130, &g);
        let id = trace_restrict(&f, 1).unwrap();
        assert_eq!(id.values, f.values);

        let h = random_test_signal(131, &g);
        let ten = tensor_product(&[f.clone(), h.clone()]);
        let diag = trace_restrict(&ten, 2).unwrap();
        for j in 0..g.n {
            let want = f.values[j] * h.values[j];
            assert!((diag.values[j] - want).norm() < 1e-14);
        }

        // Random nd-tensor: matches index-wise diagonal extraction.
        let joint = Grid { d: 2, n: 8, l: 4.0 };
        let big = random_test_signal(132, &joint);
        let dg = trace_restrict(&big, 2).unwrap();
        for j in 0..g.n {
            assert_eq!(dg.values[j], big.values[j * 8 + j]);
        }
        assert!(trace_restrict(&big, 3).is_err());
    }

    #[test]
    fn localization_linearity() {
        let g = make_grid(1, 8, 4.0).unwrap();
        let a1 = random_symbol(&g, 1, 140);
        let a2 = random_symbol(&g, 1, 141);
        let phi = wv(vec![random_test_signal(142, &g)]);
        let psi = wv(vec![random_test_signal(143, &g)]);
        let f = sv(vec![random_test_signal(144, &g)]);
        let c1 = Complex64::new(0.7, -0.2);
        let c2 = Complex64::new(-0.1, 1.3);
        let comb = Symbol::new(
            1,
            PhaseFn::new(
                a1.phase.xgrid.clone(),
                a1.phase
                    .values
                    .iter()
                    .zip(&a2.phase.values)
                    .map(|(x, y)| c1 * x + c2 * y)
                    .collect(),
            )
            .unwrap(),
        )
        .unwrap();
        let lhs = localization_apply(
            &LocalizationSpec::new(comb, phi.clone(), psi.clone()).unwrap(),
            &f,
        )
        .unwrap();
        let r1 = localization_apply(&LocalizationSpec::new(a1, phi.clone(), psi.clone()).unwrap(), &f)
            .unwrap();
        let r2 = localization_apply(&LocalizationSpec::new(a2, phi, psi).unwrap(), &f).unwrap();
        let mut err: f64 = 0.0;
        for i in 0..g.n {
            let want = c1 * r1.values[i] + c2 * r2.values[i];
            err = err.max((lhs.values[i] - want).norm());
        }
        assert!(err < 1e-10, "linearity in the symbol {err:e}");
    }
}
