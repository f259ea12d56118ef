//! Four-dimensional tensor helpers with index-position tags.

use nalgebra::{Matrix4, SymmetricEigen, Vector3, Vector4};

use crate::error::{Error, Result};

pub type Vec4 = Vector4<f64>;
pub type Mat4 = Matrix4<f64>;

/// Position of a tensor index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Up,
    Down,
}

impl Slot {
    fn label(self) -> &'static str {
        match self {
            Slot::Up => "contravariant",
            Slot::Down => "covariant",
        }
    }
}

/// A rank-one tensor carrying the position of its index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor1 {
    pub comps: Vec4,
    pub slot: Slot,
}

impl Tensor1 {
    pub fn up(comps: Vec4) -> Self {
        Tensor1 { comps, slot: Slot::Up }
    }

    pub fn down(comps: Vec4) -> Self {
        Tensor1 { comps, slot: Slot::Down }
    }

    pub fn expect(&self, slot: Slot) -> Result<Vec4> {
        if self.slot == slot {
            Ok(self.comps)
        } else {
            Err(Error::IndexPosition { expected: slot.label(), found: self.slot.label() })
        }
    }

    pub fn to_slot(&self, slot: Slot, metric: &Metric4) -> Tensor1 {
        match (self.slot, slot) {
            (Slot::Up, Slot::Down) => Tensor1::down(metric.lower(&self.comps)),
            (Slot::Down, Slot::Up) => Tensor1::up(metric.raise(&self.comps)),
            _ => *self,
        }
    }

    /// Full contraction with another vector, raising or lowering as needed.
    pub fn contract(&self, other: &Tensor1, metric: &Metric4) -> f64 {
        match (self.slot, other.slot) {
            (Slot::Up, Slot::Down) | (Slot::Down, Slot::Up) => self.comps.dot(&other.comps),
            (Slot::Up, Slot::Up) => metric.dot_up(&self.comps, &other.comps),
            (Slot::Down, Slot::Down) => metric.dot_down(&self.comps, &other.comps),
        }
    }
}

/// A rank-two tensor carrying both index positions (row index first).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tensor2 {
    pub comps: Mat4,
    pub slots: (Slot, Slot),
}

impl Tensor2 {
    pub fn new(comps: Mat4, slots: (Slot, Slot)) -> Self {
        Tensor2 { comps, slots }
    }

    pub fn expect(&self, slots: (Slot, Slot)) -> Result<Mat4> {
        if self.slots == slots {
            Ok(self.comps)
        } else {
            let found = if self.slots.0 != slots.0 { self.slots.0 } else { self.slots.1 };
            let expected = if self.slots.0 != slots.0 { slots.0 } else { slots.1 };
            Err(Error::IndexPosition { expected: expected.label(), found: found.label() })
        }
    }
}

/// A constant-coefficient Lorentzian metric with its inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric4 {
    g: Mat4,
    ginv: Mat4,
}

impl Default for Metric4 {
    fn default() -> Self {
        Metric4::minkowski()
    }
}

impl Metric4 {
    pub fn minkowski() -> Self {
        let g = Mat4::from_diagonal(&Vec4::new(-1.0, 1.0, 1.0, 1.0));
        Metric4 { g, ginv: g }
    }

    /// Validates symmetry, invertibility and signature (-,+,+,+).
    pub fn new(g: Mat4) -> Result<Self> {
        let asym = (g - g.transpose()).abs().max();
        if asym > 1e-14 * (1.0 + g.abs().max()) {
            return Err(Error::BadMetric(format!("asymmetric by {asym:e}")));
        }
        let eig = SymmetricEigen::new(g).eigenvalues;
        let neg = eig.iter().filter(|&&l| l < 0.0).count();
        let pos = eig.iter().filter(|&&l| l > 0.0).count();
        if neg != 1 || pos != 3 {
            return Err(Error::BadMetric(format!("eigenvalues {:?}", eig.as_slice())));
        }
        let ginv = g.try_inverse().ok_or_else(|| Error::BadMetric("singular".into()))?;
        let ginv = 0.5 * (ginv + ginv.transpose());
        let id_err = (g * ginv - Mat4::identity()).abs().max();
        if id_err > 1e-12 {
            return Err(Error::BadMetric(format!("inverse residual {id_err:e}")));
        }
        Ok(Metric4 { g, ginv })
    }

    pub fn g(&self) -> &Mat4 {
        &self.g
    }

    pub fn ginv(&self) -> &Mat4 {
        &self.ginv
    }

    pub fn is_minkowski(&self) -> bool {
        self.g == Metric4::minkowski().g
    }

    pub fn det(&self) -> f64 {
        self.g.determinant()
    }

    pub fn lower(&self, v: &Vec4) -> Vec4 {
        self.g * v
    }

    pub fn raise(&self, w: &Vec4) -> Vec4 {
        self.ginv * w
    }

    pub fn dot_up(&self, a: &Vec4, b: &Vec4) -> f64 {
        a.dot(&(self.g * b))
    }

    pub fn dot_down(&self, a: &Vec4, b: &Vec4) -> f64 {
        a.dot(&(self.ginv * b))
    }

    /// The 24 nonzero entries of [`Metric4::epsilon_up`].
    pub fn epsilon_entries(&self) -> Vec<([usize; 4], f64)> {
        let scale = 1.0 / self.det().abs().sqrt();
        let mut out = Vec::with_capacity(24);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let e = levi_civita([a, b, c, d]);
                        if e != 0.0 {
                            out.push(([a, b, c, d], e * scale));
                        }
                    }
                }
            }
        }
        out
    }

    /// Levi-Civita tensor with upper indices, normalised so that
    /// `eps^{0123} = 1/sqrt|det g|` (equal to 1 for Minkowski).
    pub fn epsilon_up(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        levi_civita([a, b, c, d]) / self.det().abs().sqrt()
    }
}

/// Permutation sign of four indices (0 when any repeat).
pub fn levi_civita(idx: [usize; 4]) -> f64 {
    let mut p = idx;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if p[i] == p[j] {
                return 0.0;
            }
        }
    }
    let mut sign = 1.0;
    for i in 0..4 {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            sign = -sign;
        }
    }
    sign
}

/// Lorentz boost `Λ^μ_ν` taking the rest frame to a frame moving with
/// three-velocity `beta` (|beta| < 1). Contravariant vectors map as `Λ v`.
pub fn boost(beta: &Vector3<f64>) -> Mat4 {
    let b2 = beta.norm_squared();
    let mut m = Mat4::identity();
    if b2 == 0.0 {
        return m;
    }
    let gamma = 1.0 / (1.0 - b2).sqrt();
    m[(0, 0)] = gamma;
    for i in 0..3 {
        m[(0, i + 1)] = gamma * beta[i];
        m[(i + 1, 0)] = gamma * beta[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] += (gamma - 1.0) * beta[i] * beta[j] / b2;
        }
    }
    m
}

/// Inverse-transpose of a boost, acting on covariant components.
pub fn boost_covector(beta: &Vector3<f64>) -> Mat4 {
    boost(&(-beta)).transpose()
}
