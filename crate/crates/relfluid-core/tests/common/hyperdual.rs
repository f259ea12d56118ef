//! Hyper-dual numbers `v + a ε₁ + b ε₂ + ab ε₁ε₂` with `ε₁² = ε₂² = 0`:
//! one evaluation yields a value, two directional first derivatives and
//! their mixed second derivative, all exact to rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HD {
    pub v: f64,
    pub a: f64,
    pub b: f64,
    pub ab: f64,
}

impl HD {
    pub fn c(v: f64) -> Self {
        HD { v, a: 0.0, b: 0.0, ab: 0.0 }
    }

    /// Applies a scalar function given `f, f', f''` at `self.v`.
    fn chain(self, f: f64, d1: f64, d2: f64) -> Self {
        HD { v: f, a: d1 * self.a, b: d1 * self.b, ab: d1 * self.ab + d2 * self.a * self.b }
    }

    pub fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos(), -self.v.sin())
    }
    pub fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin(), -self.v.cos())
    }
    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    pub fn ln(self) -> Self {
        self.chain(self.v.ln(), 1.0 / self.v, -1.0 / (self.v * self.v))
    }
    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    pub fn powf(self, p: f64) -> Self {
        self.chain(self.v.powf(p), p * self.v.powf(p - 1.0), p * (p - 1.0) * self.v.powf(p - 2.0))
    }
}

impl Add for HD {
    type Output = HD;
    fn add(self, o: HD) -> HD {
        HD { v: self.v + o.v, a: self.a + o.a, b: self.b + o.b, ab: self.ab + o.ab }
    }
}

impl Sub for HD {
    type Output = HD;
    fn sub(self, o: HD) -> HD {
        HD { v: self.v - o.v, a: self.a - o.a, b: self.b - o.b, ab: self.ab - o.ab }
    }
}

impl Neg for HD {
    type Output = HD;
    fn neg(self) -> HD {
        HD { v: -self.v, a: -self.a, b: -self.b, ab: -self.ab }
    }
}

impl Mul for HD {
    type Output = HD;
    fn mul(self, o: HD) -> HD {
        HD {
            v: self.v * o.v,
            a: self.a * o.v + self.v * o.a,
            b: self.b * o.v + self.v * o.b,
            ab: self.ab * o.v + self.a * o.b + self.b * o.a + self.v * o.ab,
        }
    }
}

impl Div for HD {
    type Output = HD;
    fn div(self, o: HD) -> HD {
        self * o.chain(1.0 / o.v, -1.0 / (o.v * o.v), 2.0 / (o.v * o.v * o.v))
    }
}

impl Add<f64> for HD {
    type Output = HD;
    fn add(self, o: f64) -> HD {
        self + HD::c(o)
    }
}

impl Mul<f64> for HD {
    type Output = HD;
    fn mul(self, o: f64) -> HD {
        self * HD::c(o)
    }
}

impl Mul<HD> for f64 {
    type Output = HD;
    fn mul(self, o: HD) -> HD {
        HD::c(self) * o
    }
}

/// Per-component value, gradient and Hessian.
pub type Jet<const K: usize> = ([f64; K], [[f64; 4]; K], [[[f64; 4]; 4]; K]);

/// Value, gradient and Hessian of `f` at `x` (four coordinates), from
/// the ten symmetric direction pairs.
pub fn jet<const K: usize>(f: impl Fn([HD; 4]) -> [HD; K], x: [f64; 4]) -> Jet<K> {
    let mut val = [0.0; K];
    let mut grad = [[0.0; 4]; K];
    let mut hess = [[[0.0; 4]; 4]; K];
    for p in 0..4 {
        for q in p..4 {
            let args: [HD; 4] = std::array::from_fn(|i| HD {
                v: x[i],
                a: if i == p { 1.0 } else { 0.0 },
                b: if i == q { 1.0 } else { 0.0 },
                ab: 0.0,
            });
            let out = f(args);
            for k in 0..K {
                val[k] = out[k].v;
                grad[k][p] = out[k].a;
                grad[k][q] = out[k].b;
                hess[k][p][q] = out[k].ab;
                hess[k][q][p] = out[k].ab;
            }
        }
    }
    (val, grad, hess)
}

#[test]
fn hyperdual_matches_closed_form() {
    // f = sin(x) e^{xy} / sqrt(1 + y²)
    let f = |x: [HD; 4]| [x[0].sin() * (x[0] * x[1]).exp() / (x[1] * x[1] + 1.0).sqrt()];
    let (x, y) = (0.7, -0.4);
    let (_, g, h) = jet(f, [x, y, 0.0, 0.0]);
    let e = (x * y).exp();
    let s = (1.0 + y * y).sqrt();
    let fx = (x.cos() + y * x.sin()) * e / s;
    let fxy_num = {
        let d = 1e-5;
        let fx_at = |y: f64| (x.cos() + y * x.sin()) * (x * y).exp() / (1.0 + y * y).sqrt();
        (fx_at(y + d) - fx_at(y - d)) / (2.0 * d)
    };
    assert!((g[0][0] - fx).abs() < 1e-14);
    assert!((h[0][0][1] - fxy_num).abs() < 1e-8);
}
