//! Internal centered discrete Fourier transforms and axis-wise tensor helpers.
//!
//! All public transforms of the crate use the symmetric lattice convention:
//! sample points x_j = -L/2 + jΔ and frequencies ω_k = (k - N/2)/L. The
//! centered transform pair
//!
//!   F[k] = Δ  Σ_j f[j] e^{-2πi x_j ω_k},
//!   f[j] = Δω Σ_k F[k] e^{+2πi x_j ω_k},
//!
//! reduces to a plain FFT conjugated by (-1)^j / (-1)^k sign flips because
//! x_j ω_k = (j - N/2)(k - N/2)/N. The same kernel applies verbatim to dual
//! (frequency) axes, whose "points" are ω_k and whose "frequencies" are x_j.
//!
//! The module also provides factor-2 trigonometric upsampling along an axis
//! (Fourier zero-padding) together with its exact adjoint under plain
//! (unweighted) sums; the adjoint underpins the Weyl quantization routines.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// Flat length of a tensor with `axes` axes of size `n` each.
pub(crate) fn tensor_len(n: usize, axes: usize) -> usize {
    n.pow(axes as u32)
}

/// Decompose `flat` into `axes` digits, slowest axis first, all of size `n`.
pub(crate) fn unravel(mut flat: usize, n: usize, axes: usize, out: &mut [usize]) {
    debug_assert_eq!(out.len(), axes);
    for a in (0..axes).rev() {
        out[a] = flat % n;
        flat /= n;
    }
}

/// Inverse of [`unravel`].
pub(crate) fn ravel(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}

fn run_fft(buf: &mut [Complex64], direction: FftDirection) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft(buf.len(), direction);
    fft.process(buf);
}

/// Apply `op` to every 1-d line of `values` along `axis`; the line length may
/// change from `shape[axis]` to `out_len`, in which case a new tensor with the
/// updated shape is returned.
pub(crate) fn map_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    out_len: usize,
    mut op: impl FnMut(&[Complex64], &mut [Complex64]),
) -> Vec<Complex64> {
    let in_len = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * out_len * stride];
    let mut line_in = vec![Complex64::new(0.0, 0.0); in_len];
    let mut line_out = vec![Complex64::new(0.0, 0.0); out_len];
    for o in 0..outer {
        for i in 0..stride {
            let base_in = o * in_len * stride + i;
            let base_out = o * out_len * stride + i;
            for t in 0..in_len {
                line_in[t] = values[base_in + t * stride];
            }
            op(&line_in, &mut line_out);
            for t in 0..out_len {
                out[base_out + t * stride] = line_out[t];
            }
        }
    }
    out
}

fn half_sign(n: usize) -> f64 {
    if (n / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn sign(j: usize) -> f64 {
    if j % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Centered forward transform along `axis` with quadrature scale `scale`
/// (the axis spacing Δ): out[k] = scale Σ_j in[j] e^{-2πi (j-N/2)(k-N/2)/N}.
pub(crate) fn centered_forward_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    scale: f64,
) -> Vec<Complex64> {
    let n = shape[axis];
    let s = half_sign(n) * scale;
    map_axis(values, shape, axis, n, |line, out| {
        for (j, v) in line.iter().enumerate() {
            out[j] = v * sign(j);
        }
        run_fft(out, FftDirection::Forward);
        for (k, v) in out.iter_mut().enumerate() {
            *v *= s * sign(k);
        }
    })
}

/// Centered inverse transform along `axis` with dual quadrature scale `scale`
/// (the dual spacing Δω): out[j] = scale Σ_k in[k] e^{+2πi (j-N/2)(k-N/2)/N}.
pub(crate) fn centered_inverse_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    scale: f64,
) -> Vec<Complex64> {
    let n = shape[axis];
    let s = half_sign(n) * scale;
    map_axis(values, shape, axis, n, |line, out| {
        for (k, v) in line.iter().enumerate() {
            out[k] = v * sign(k);
        }
        run_fft(out, FftDirection::Inverse);
        for (j, v) in out.iter_mut().enumerate() {
            *v *= s * sign(j);
        }
    })
}

/// Factor-2 trigonometric upsampling along `axis` (N even): exact Fourier
/// zero-padding interpolation onto the refined lattice of 2N points.
pub(crate) fn upsample2_axis(values: &[Complex64], shape: &[usize], axis: usize) -> Vec<Complex64> {
    let n = shape[axis];
    debug_assert!(n % 2 == 0);
    map_axis(values, shape, axis, 2 * n, |line, out| {
        let mut spec = line.to_vec();
        run_fft(&mut spec, FftDirection::Forward);
        for v in out.iter_mut() {
            *v = Complex64::new(0.0, 0.0);
        }
        // Plain-FFT bin j < N/2 holds frequency j; bin j >= N/2 holds j - N.
        out[..n / 2].copy_from_slice(&spec[..n / 2]);
        out[3 * n / 2..].copy_from_slice(&spec[n / 2..]);
        run_fft(out, FftDirection::Inverse);
        let c = 1.0 / n as f64;
        for v in out.iter_mut() {
            *v *= c;
        }
    })
}

/// Adjoint of [`upsample2_axis`] under plain (unweighted) sums: maps a line of
/// 2N values back to N values via spectral central cropping.
pub(crate) fn upsample2_adjoint_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
) -> Vec<Complex64> {
    let n2 = shape[axis];
    debug_assert!(n2 % 2 == 0);
    let n = n2 / 2;
    map_axis(values, shape, axis, n, |line, out| {
        let mut spec = line.to_vec();
        run_fft(&mut spec, FftDirection::Forward);
        out[..n / 2].copy_from_slice(&spec[..n / 2]);
        out[n / 2..].copy_from_slice(&spec[3 * n / 2..]);
        run_fft(out, FftDirection::Inverse);
        let c = 1.0 / n as f64;
        for v in out.iter_mut() {
            *v *= c;
        }
    })
}

/// Plain (unshifted, unnormalized) FFT along `axis`.
pub(crate) fn plain_fft_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    direction: FftDirection,
) -> Vec<Complex64> {
    let n = shape[axis];
    map_axis(values, shape, axis, n, |line, out| {
        out.copy_from_slice(line);
        run_fft(out, direction);
    })
}

/// Cyclic roll by `shift` cells along `axis`: out[j] = in[(j - shift) mod N].
pub(crate) fn roll_axis(
    values: &[Complex64],
    shape: &[usize],
    axis: usize,
    shift: i64,
) -> Vec<Complex64> {
    let n = shape[axis];
    let s = shift.rem_euclid(n as i64) as usize;
    map_axis(values, shape, axis, n, |line, out| {
        for j in 0..n {
            out[(j + s) % n] = line[j];
        }
    })
}
