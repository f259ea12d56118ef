use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::Metric4;

/// Finite-difference accuracy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    #[default]
    Second,
    Fourth,
}

impl Stencil {
    pub fn radius(self) -> usize {
        match self {
            Stencil::Second => 1,
            Stencil::Fourth => 2,
        }
    }
}

/// Shape of a sampled 4-D field: axis 0 is time (not periodic), axes 1–3
/// are periodic spatial coordinates. Storage is row-major with axis 3 fastest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridGeometry {
    pub dims: [usize; 4],
    pub spacing: [f64; 4],
    pub metric: Metric4,
    pub stencil: Stencil,
}

impl GridGeometry {
    pub fn new(dims: [usize; 4], spacing: [f64; 4]) -> Result<Self> {
        let g = GridGeometry { dims, spacing, metric: Metric4::minkowski(), stencil: Stencil::Second };
        if spacing.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::Config(format!("grid spacing must be positive: {spacing:?}")));
        }
        g.check_resolution()?;
        Ok(g)
    }

    /// Every axis needs enough points for a composed centred stencil.
    pub fn check_resolution(&self) -> Result<()> {
        let needed = (4 * self.stencil.radius() + 1).max(5);
        for (axis, &points) in self.dims.iter().enumerate() {
            if points < needed {
                return Err(Error::GridTooCoarse { axis, points, needed });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: [usize; 4]) -> usize {
        ((i[0] * self.dims[1] + i[1]) * self.dims[2] + i[2]) * self.dims[3] + i[3]
    }

    pub fn coords(&self, mut k: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for axis in (0..4).rev() {
            out[axis] = k % self.dims[axis];
            k /= self.dims[axis];
        }
        out
    }

    fn strides(&self) -> [usize; 4] {
        [self.dims[1] * self.dims[2] * self.dims[3], self.dims[2] * self.dims[3], self.dims[3], 1]
    }

    /// Time slices on which composed stencils use only centred values.
    pub fn valid_slices(&self) -> (usize, usize) {
        let r = 2 * self.stencil.radius();
        (r, self.dims[0] - 1 - r)
    }

    /// Flat indices of all points in the valid time slices.
    pub fn valid_points(&self) -> std::ops::Range<usize> {
        let (a, b) = self.valid_slices();
        let per = self.strides()[0];
        a * per..(b + 1) * per
    }

    /// Maximum absolute value over the valid points.
    pub fn max_abs(&self, f: &[f64]) -> f64 {
        f[self.valid_points()].iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Neighbour offset along `axis` with periodic wrap for spatial axes.
    fn shift(&self, k: usize, axis: usize, off: isize) -> usize {
        let c = self.coords(k)[axis] as isize;
        let n = self.dims[axis] as isize;
        let target = (c + off).rem_euclid(n);
        (k as isize + (target - c) * self.strides()[axis] as isize) as usize
    }

    /// First derivative along `axis`.
    pub fn diff(&self, f: &[f64], axis: usize) -> Vec<f64> {
        let h = self.spacing[axis];
        let r = self.stencil.radius() as isize;
        let n = self.dims[axis] as isize;
        (0..f.len())
            .map(|k| {
                let c = self.coords(k)[axis] as isize;
                let at = |o: isize| f[self.shift(k, axis, o)];
                let interior = axis != 0 || (c - r >= 0 && c + r < n);
                if interior {
                    match self.stencil {
                        Stencil::Second => (at(1) - at(-1)) / (2.0 * h),
                        Stencil::Fourth => {
                            (8.0 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12.0 * h)
                        }
                    }
                } else {
                    // One-sided at the ends of the (non-periodic) time axis.
                    let s: isize = if c - r < 0 { 1 } else { -1 };
                    let sf = s as f64;
                    match self.stencil {
                        Stencil::Second => {
                            sf * (4.0 * (at(s) - at(0)) - (at(2 * s) - at(0))) / (2.0 * h)
                        }
                        Stencil::Fourth => {
                            sf * (48.0 * (at(s) - at(0)) - 36.0 * (at(2 * s) - at(0))
                                + 16.0 * (at(3 * s) - at(0))
                                - 3.0 * (at(4 * s) - at(0)))
                                / (12.0 * h)
                        }
                    }
                }
            })
            .collect()
    }

    /// Second derivative `∂_a ∂_b f`; a direct centred stencil on the
    /// diagonal, composed first derivatives off it.
    pub fn diff2(&self, f: &[f64], a: usize, b: usize) -> Vec<f64> {
        if a != b {
            return self.diff(&self.diff(f, a), b);
        }
        let composed = self.diff(&self.diff(f, a), a);
        let h2 = self.spacing[a] * self.spacing[a];
        let r = self.stencil.radius() as isize;
        let n = self.dims[a] as isize;
        (0..f.len())
            .map(|k| {
                let c = self.coords(k)[a] as isize;
                if a == 0 && (c - r < 0 || c + r >= n) {
                    return composed[k];
                }
                let at = |o: isize| f[self.shift(k, a, o)];
                match self.stencil {
                    Stencil::Second => ((at(1) - at(0)) + (at(-1) - at(0))) / h2,
                    Stencil::Fourth => {
                        (16.0 * ((at(1) - at(0)) + (at(-1) - at(0)))
                            - ((at(2) - at(0)) + (at(-2) - at(0))))
                            / (12.0 * h2)
                    }
                }
            })
            .collect()
    }

    /// `grad[a][k] = ∂_a f` at point `k`.
    pub fn gradient(&self, f: &[f64]) -> [Vec<f64>; 4] {
        [self.diff(f, 0), self.diff(f, 1), self.diff(f, 2), self.diff(f, 3)]
    }
}
