use crate::error::{Error, Result};

/// A 2D real-valued field stored row-major.
///
/// This is the basic sample type: a clean image, a toy sample reshaped to a
/// grid, or any intermediate state of the diffusion process. Values are
/// always finite; constructors reject NaN and infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl Grid {
    pub fn new(height: usize, width: usize, values: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid("grid dimensions must be at least 1x1"));
        }
        if values.len() != height * width {
            return Err(Error::invalid(format!(
                "expected {} values for a {}x{} grid, got {}",
                height * width,
                height,
                width,
                values.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("grid values".into()));
        }
        Ok(Grid {
            height,
            width,
            values,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Grid {
            height,
            width,
            values: vec![0.0; height * width],
        }
    }

    pub fn constant(height: usize, width: usize, value: f64) -> Self {
        Grid {
            height,
            width,
            values: vec![value; height * width],
        }
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                values.push(f(r, c));
            }
        }
        Grid {
            height,
            width,
            values,
        }
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_raw(height: usize, width: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), height * width);
        Grid {
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

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn same_shape(&self, other: &Grid) -> bool {
        self.height == other.height && self.width == other.width
    }

    pub(crate) fn check_shape(&self, other: &Grid) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected_height: self.height,
                expected_width: self.width,
                height: other.height,
                width: other.width,
            })
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum()
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn linf_distance(&self, other: &Grid) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, factor: f64) -> Grid {
        Grid {
            height: self.height,
            width: self.width,
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn add(&self, other: &Grid) -> Grid {
        debug_assert!(self.same_shape(other));
        Grid {
            height: self.height,
            width: self.width,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Grid) -> Grid {
        debug_assert!(self.same_shape(other));
        Grid {
            height: self.height,
            width: self.width,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `self += factor * other`, elementwise.
    pub fn axpy(&mut self, factor: f64, other: &Grid) {
        debug_assert!(self.same_shape(other));
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += factor * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_wrong_lengths() {
        assert!(Grid::new(0, 3, vec![]).is_err());
        assert!(Grid::new(2, 2, vec![0.0; 3]).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Grid::new(1, 2, vec![0.0, f64::NAN]).is_err());
        assert!(Grid::new(1, 2, vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn arithmetic_helpers() {
        let a = Grid::new(1, 2, vec![1.0, 2.0]).unwrap();
        let b = Grid::new(1, 2, vec![10.0, 20.0]).unwrap();
        let mut c = a.add(&b);
        assert_eq!(c.as_slice(), &[11.0, 22.0]);
        c.axpy(-1.0, &b);
        assert_eq!(c.as_slice(), &[1.0, 2.0]);
        assert_eq!(a.sub(&b).as_slice(), &[-9.0, -18.0]);
        assert_eq!(a.scaled(2.0).as_slice(), &[2.0, 4.0]);
        assert_eq!(b.mean(), 15.0);
    }
}
