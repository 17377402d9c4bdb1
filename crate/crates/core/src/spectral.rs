//! Orthonormal 2D DCT-II/III transforms and DCT-domain Gaussian blur masks.
//!
//! The transform pair is the orthonormal convention, so the forward matrix is
//! orthogonal and Parseval holds exactly (up to rounding). Blurring is a
//! diagonal operator in this basis: each coefficient is attenuated by the
//! heat-kernel frequency response of a Gaussian of std `alpha` pixels, with
//! Neumann boundary conditions implied by the DCT-II extension.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// DCT-II coefficients of a [`Grid`], same shape, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid("spectrum dimensions must be at least 1x1"));
        }
        if values.len() != height * width {
            return Err(Error::invalid(format!(
                "expected {} coefficients for a {}x{} spectrum, got {}",
                height * width,
                height,
                width,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("spectral coefficients".into()));
        }
        Ok(SpectralGrid {
            height,
            width,
            values,
        })
    }

    pub(crate) fn from_raw(height: usize, width: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), height * width);
        SpectralGrid {
            height,
            width,
            values,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Coefficient at frequency pair `(k1, k2)`; `(0, 0)` is the DC term.
    pub fn coeff(&self, k1: usize, k2: usize) -> f64 {
        self.values[k1 * self.width + k2]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }
}

/// Diagonal DCT-domain attenuation realizing Gaussian blur of std `alpha`.
///
/// Entry `(k1, k2)` is `exp(-(pi^2/2) * alpha^2 * (k1^2/H^2 + k2^2/W^2))`,
/// the frequency response of the heat semigroup at time `alpha^2 / 2`. The DC
/// entry is exactly 1, so blurring preserves the grid mean.
#[derive(Debug, Clone, PartialEq)]
pub struct BlurMask {
    height: usize,
    width: usize,
    alpha: f64,
    entries: Vec<f64>,
}

impl BlurMask {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn entry(&self, k1: usize, k2: usize) -> f64 {
        self.entries[k1 * self.width + k2]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }
}

/// Attenuation of a Gaussian blur of std `alpha` at radial frequency `f`
/// (cycles per pixel scaled by pi; `f = k/N` for DCT index `k` of an N-long
/// axis). Shared by [`make_blur_mask`] and the BNR selection rule.
pub fn blur_attenuation(alpha: f64, radial_freq: f64) -> f64 {
    let e = (-(PI * PI / 2.0) * alpha * alpha * radial_freq * radial_freq).exp();
    // Guard against underflow to keep mask entries strictly positive.
    e.max(f64::MIN_POSITIVE)
}

pub fn make_blur_mask(height: usize, width: usize, alpha: f64) -> Result<BlurMask> {
    if height == 0 || width == 0 {
        return Err(Error::invalid("mask dimensions must be at least 1x1"));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(Error::invalid(format!(
            "blur level must be a finite nonnegative real, got {alpha}"
        )));
    }
    let mut entries = Vec::with_capacity(height * width);
    for k1 in 0..height {
        let f1 = k1 as f64 / height as f64;
        for k2 in 0..width {
            let f2 = k2 as f64 / width as f64;
            entries.push(blur_attenuation(alpha, (f1 * f1 + f2 * f2).sqrt()));
        }
    }
    Ok(BlurMask {
        height,
        width,
        alpha,
        entries,
    })
}

/// Precomputed orthonormal DCT-II basis for one grid shape.
///
/// The 2D transform is separable: rows through the width-sized basis, then
/// columns through the height-sized basis. A brute-force O(N^2) reference
/// path exists in the test suite; this plan is the production path.
#[derive(Debug, Clone)]
pub struct DctPlan {
    height: usize,
    width: usize,
    // basis[k * n_len + n] = s(k) * cos(pi * (2n + 1) * k / (2 * n_len))
    row_basis: Vec<f64>,
    col_basis: Vec<f64>,
}

fn dct_basis(n_len: usize) -> Vec<f64> {
    let mut basis = vec![0.0; n_len * n_len];
    let norm0 = (1.0 / n_len as f64).sqrt();
    let norm = (2.0 / n_len as f64).sqrt();
    for k in 0..n_len {
        let s = if k == 0 { norm0 } else { norm };
        for n in 0..n_len {
            basis[k * n_len + n] =
                s * (PI * (2.0 * n as f64 + 1.0) * k as f64 / (2.0 * n_len as f64)).cos();
        }
    }
    basis
}

impl DctPlan {
    pub fn new(height: usize, width: usize) -> Self {
        DctPlan {
            height,
            width,
            row_basis: dct_basis(width),
            col_basis: dct_basis(height),
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn check(&self, height: usize, width: usize) -> Result<()> {
        if height == self.height && width == self.width {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected_height: self.height,
                expected_width: self.width,
                height,
                width,
            })
        }
    }

    pub fn forward(&self, g: &Grid) -> Result<SpectralGrid> {
        self.check(g.height(), g.width())?;
        Ok(SpectralGrid::from_raw(
            self.height,
            self.width,
            self.transform(g.as_slice(), false),
        ))
    }

    pub fn inverse(&self, s: &SpectralGrid) -> Result<Grid> {
        self.check(s.height(), s.width())?;
        Ok(Grid::from_raw(
            self.height,
            self.width,
            self.transform(s.as_slice(), true),
        ))
    }

    // Separable transform; `inverse` applies the transposed basis (DCT-III).
    fn transform(&self, data: &[f64], inverse: bool) -> Vec<f64> {
        let (h, w) = (self.height, self.width);
        let mut rows = vec![0.0; h * w];
        for r in 0..h {
            let src = &data[r * w..(r + 1) * w];
            let dst = &mut rows[r * w..(r + 1) * w];
            for k in 0..w {
                let mut acc = 0.0;
                if inverse {
                    for (n, v) in src.iter().enumerate() {
                        acc += self.row_basis[n * w + k] * v;
                    }
                } else {
                    for (n, v) in src.iter().enumerate() {
                        acc += self.row_basis[k * w + n] * v;
                    }
                }
                dst[k] = acc;
            }
        }
        let mut out = vec![0.0; h * w];
        for c in 0..w {
            for k in 0..h {
                let mut acc = 0.0;
                if inverse {
                    for n in 0..h {
                        acc += self.col_basis[n * h + k] * rows[n * w + c];
                    }
                } else {
                    for n in 0..h {
                        acc += self.col_basis[k * h + n] * rows[n * w + c];
                    }
                }
                out[k * w + c] = acc;
            }
        }
        out
    }

    /// Blur a grid by attenuating its spectrum with `mask`.
    pub fn apply_blur(&self, g: &Grid, mask: &BlurMask) -> Result<Grid> {
        self.check(g.height(), g.width())?;
        self.check(mask.height(), mask.width())?;
        let mut spec = self.forward(g)?;
        for (c, m) in spec.as_mut_slice().iter_mut().zip(mask.as_slice()) {
            *c *= m;
        }
        self.inverse(&spec)
    }
}

/// Orthonormal 2D DCT-II of a grid.
pub fn dct_forward(g: &Grid) -> SpectralGrid {
    DctPlan::new(g.height(), g.width())
        .forward(g)
        .expect("plan built for this shape")
}

/// Exact inverse of [`dct_forward`] (orthonormal DCT-III).
pub fn dct_inverse(s: &SpectralGrid) -> Grid {
    DctPlan::new(s.height(), s.width())
        .inverse(s)
        .expect("plan built for this shape")
}

/// Convenience one-shot blur; hot paths should hold a [`DctPlan`].
pub fn apply_blur(g: &Grid, mask: &BlurMask) -> Result<Grid> {
    DctPlan::new(g.height(), g.width()).apply_blur(g, mask)
}
