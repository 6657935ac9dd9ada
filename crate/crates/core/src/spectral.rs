//! Real fields on the torus held as Fourier coefficients on the dual
//! lattice sqrt2 Z^2.
//!
//! A field is f(x, y) = sum c_{j,l} exp(i sqrt2 (j x + l y)); the modes are
//! eigenfunctions of the flat Laplacian with eigenvalue -2(j^2 + l^2), so
//! the Jacobi operator Delta + 4 acts by 4 - 2(j^2 + l^2). Kernel modes are
//! the four diagonals j^2 + l^2 = 2.

use crate::chart::{ChartPoint, TorusIsometry, Vec2, CHART_PERIOD, SQRT_2};
use crate::error::{CoreError, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

pub const KERNEL_MODES: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Relative tolerance on kernel components of a right-hand side.
pub const KERNEL_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid_n: usize,
    /// Row-major coefficients, index (il * grid_n + ij) with standard FFT
    /// frequency order per axis.
    pub coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zero(grid_n: usize) -> Self {
        assert!(grid_n >= 4 && grid_n % 2 == 0, "grid_n must be even, >= 4");
        SpectralField {
            grid_n,
            coeffs: vec![Complex64::new(0.0, 0.0); grid_n * grid_n],
        }
    }

    pub fn freq_of_index(&self, idx: usize) -> i64 {
        let n = self.grid_n as i64;
        let idx = idx as i64;
        if idx <= n / 2 {
            idx
        } else {
            idx - n
        }
    }

    pub fn index_of_freq(&self, j: i64) -> usize {
        let n = self.grid_n as i64;
        debug_assert!(j.abs() <= n / 2);
        j.rem_euclid(n) as usize
    }

    pub fn coeff(&self, j: i64, l: i64) -> Complex64 {
        self.coeffs[self.index_of_freq(l) * self.grid_n + self.index_of_freq(j)]
    }

    pub fn coeff_mut(&mut self, j: i64, l: i64) -> &mut Complex64 {
        let idx = self.index_of_freq(l) * self.grid_n + self.index_of_freq(j);
        &mut self.coeffs[idx]
    }

    /// Forward transform of real grid samples (row-major, x fastest).
    pub fn from_samples(grid_n: usize, samples: &[f64]) -> Self {
        assert_eq!(samples.len(), grid_n * grid_n);
        let mut data: Vec<Complex64> = samples
            .iter()
            .map(|&s| Complex64::new(s, 0.0))
            .collect();
        fft2_forward(grid_n, &mut data);
        let scale = 1.0 / (grid_n * grid_n) as f64;
        for c in &mut data {
            *c *= scale;
        }
        SpectralField {
            grid_n,
            coeffs: data,
        }
    }

    pub fn from_fn<F: Fn(ChartPoint) -> f64 + Sync>(grid_n: usize, f: F) -> Self {
        let h = CHART_PERIOD / grid_n as f64;
        let samples: Vec<f64> = (0..grid_n * grid_n)
            .into_par_iter()
            .map(|idx| {
                let ix = idx % grid_n;
                let iy = idx / grid_n;
                f(ChartPoint::new(ix as f64 * h, iy as f64 * h))
            })
            .collect();
        Self::from_samples(grid_n, &samples)
    }

    /// Inverse transform to real grid samples on this field's grid.
    pub fn to_samples(&self) -> Vec<f64> {
        self.samples_on_grid(self.grid_n)
    }

    /// Synthesize on an n_out grid (zero-padding or cropping the band).
    pub fn samples_on_grid(&self, n_out: usize) -> Vec<f64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n_out * n_out];
        let half = (self.grid_n / 2).min(n_out / 2) as i64;
        for l in -half..=half {
            for j in -half..=half {
                let c = self.coeff(j, l);
                if c.norm_sq() == 0.0 {
                    continue;
                }
                let oj = j.rem_euclid(n_out as i64) as usize;
                let ol = l.rem_euclid(n_out as i64) as usize;
                out[ol * n_out + oj] += c;
            }
        }
        fft2_inverse(n_out, &mut out);
        out.into_iter().map(|c| c.re).collect()
    }

    /// Point evaluation by direct mode summation.
    pub fn evaluate(&self, p: ChartPoint) -> f64 {
        let n = self.grid_n;
        let px = axis_phases(n, p.x);
        let py = axis_phases(n, p.y);
        let mut total = Complex64::new(0.0, 0.0);
        for il in 0..n {
            let row = &self.coeffs[il * n..(il + 1) * n];
            let mut rowsum = Complex64::new(0.0, 0.0);
            for (ij, c) in row.iter().enumerate() {
                if c.norm_sq() != 0.0 {
                    rowsum += c * px[ij];
                }
            }
            total += rowsum * py[il];
        }
        total.re
    }

    pub fn evaluate_many(&self, pts: &[ChartPoint]) -> Vec<f64> {
        pts.par_iter().map(|&p| self.evaluate(p)).collect()
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sup_norm_on_grid(&self) -> f64 {
        self.to_samples()
            .iter()
            .fold(0.0_f64, |acc, &s| acc.max(s.abs()))
    }

    /// Enforce conjugate symmetry (project onto real fields).
    pub fn realize(&mut self) {
        let n = self.grid_n as i64;
        for l in 0..self.grid_n as i64 {
            for j in 0..self.grid_n as i64 {
                let jj = (-j).rem_euclid(n) as usize;
                let ll = (-l).rem_euclid(n) as usize;
                let idx = l as usize * self.grid_n + j as usize;
                let ridx = ll * self.grid_n + jj;
                if idx <= ridx {
                    let avg = 0.5 * (self.coeffs[idx] + self.coeffs[ridx].conj());
                    self.coeffs[idx] = avg;
                    self.coeffs[ridx] = avg.conj();
                }
            }
        }
    }

    /// The four kernel-mode coefficients.
    pub fn kernel_components(&self) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (i, &(j, l)) in KERNEL_MODES.iter().enumerate() {
            out[i] = self.coeff(j, l);
        }
        out
    }

    /// Apply the Jacobi operator Delta + 4 coefficient-wise.
    pub fn apply_jacobi(&self) -> SpectralField {
        self.apply_multiplier(|j, l| 4.0 - 2.0 * ((j * j + l * l) as f64))
    }

    /// Scaled operator (Delta + 4)/m^2.
    pub fn apply_jacobi_scaled(&self, m: u32) -> SpectralField {
        let m2 = (m as f64) * (m as f64);
        self.apply_multiplier(|j, l| (4.0 - 2.0 * ((j * j + l * l) as f64)) / m2)
    }

    fn apply_multiplier<F: Fn(i64, i64) -> f64>(&self, mult: F) -> SpectralField {
        let mut out = self.clone();
        let n = self.grid_n;
        for il in 0..n {
            let l = out.freq_of_index(il);
            for ij in 0..n {
                let j = out.freq_of_index(ij);
                out.coeffs[il * n + ij] *= mult(j, l);
            }
        }
        out
    }

    /// Projection onto modes constant along the knot parallels (xi . v = 0).
    pub fn knot_average(&self, v: crate::chart::KnotVector) -> SpectralField {
        let (a, b) = (v.a as i64, v.b as i64);
        let mut out = self.clone();
        let n = self.grid_n;
        for il in 0..n {
            let l = out.freq_of_index(il);
            for ij in 0..n {
                let j = out.freq_of_index(ij);
                if j * a + l * b != 0 {
                    out.coeffs[il * n + ij] = Complex64::new(0.0, 0.0);
                }
            }
        }
        out
    }

    /// Complement of `knot_average`; average + oscillation = field.
    pub fn knot_oscillation(&self, v: crate::chart::KnotVector) -> SpectralField {
        let avg = self.knot_average(v);
        let mut out = self.clone();
        for (c, a) in out.coeffs.iter_mut().zip(avg.coeffs.iter()) {
            *c -= a;
        }
        out
    }

    /// Group-average over torus isometries.
    pub fn symmetrize(&self, group: &[TorusIsometry]) -> SpectralField {
        let n = self.grid_n;
        let inv = 1.0 / group.len() as f64;
        let mut out = SpectralField::zero(n);
        let half = (n / 2) as i64;
        for g in group {
            let s = g.sign as i64;
            let t = g.offset;
            for il in 0..n {
                let l = out.freq_of_index(il);
                for ij in 0..n {
                    let j = out.freq_of_index(ij);
                    // coefficient of f(g q) at mode (j, l)
                    let (sj, sl) = (s * j, s * l);
                    if sj.abs() > half || sl.abs() > half {
                        continue;
                    }
                    let src = self.coeff(sj, sl);
                    if src.norm_sq() == 0.0 {
                        continue;
                    }
                    let phase = SQRT_2 * (sj as f64 * t.x + sl as f64 * t.y);
                    let rot = Complex64::new(phase.cos(), phase.sin());
                    out.coeffs[il * n + ij] += src * rot;
                }
            }
        }
        for c in &mut out.coeffs {
            *c *= inv;
        }
        out.realize();
        out
    }

    /// Invert Delta + 4 on the complement of its kernel.
    ///
    /// Fails when the right-hand side carries kernel components above
    /// KERNEL_TOL relative to its l2 norm.
    pub fn solve_jacobi(&self) -> Result<SpectralField> {
        let norm = self.norm_l2();
        let tol = KERNEL_TOL * norm.max(f64::MIN_POSITIVE);
        for &(j, l) in KERNEL_MODES.iter() {
            let c = self.coeff(j, l);
            if c.norm() > tol {
                return Err(CoreError::KernelObstruction(c.norm(), tol));
            }
        }
        let mut out = self.clone();
        let n = self.grid_n;
        for il in 0..n {
            let l = out.freq_of_index(il);
            for ij in 0..n {
                let j = out.freq_of_index(ij);
                let q = j * j + l * l;
                let idx = il * n + ij;
                if q == 2 {
                    out.coeffs[idx] = Complex64::new(0.0, 0.0);
                } else {
                    out.coeffs[idx] /= 4.0 - 2.0 * q as f64;
                }
            }
        }
        Ok(out)
    }
}

fn axis_phases(n: usize, coord: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (idx, slot) in out.iter_mut().enumerate() {
        let f = if idx <= n / 2 {
            idx as i64
        } else {
            idx as i64 - n as i64
        };
        let phase = SQRT_2 * f as f64 * coord;
        *slot = Complex64::new(phase.cos(), phase.sin());
    }
    out
}

fn fft2_with(planner_forward: bool, n: usize, data: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    let fft = if planner_forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    };
    // rows
    data.par_chunks_mut(n).for_each(|row| {
        fft.process(row);
    });
    // columns via transpose
    transpose(n, data);
    data.par_chunks_mut(n).for_each(|row| {
        fft.process(row);
    });
    transpose(n, data);
}

/// Forward DFT with e^{-2 pi i jk/n} kernel (unnormalized).
fn fft2_forward(n: usize, data: &mut [Complex64]) {
    fft2_with(true, n, data);
}

/// Inverse DFT with e^{+2 pi i jk/n} kernel (unnormalized).
fn fft2_inverse(n: usize, data: &mut [Complex64]) {
    fft2_with(false, n, data);
}

fn transpose(n: usize, data: &mut [Complex64]) {
    for i in 0..n {
        for j in 0..i {
            data.swap(i * n + j, j * n + i);
        }
    }
}
