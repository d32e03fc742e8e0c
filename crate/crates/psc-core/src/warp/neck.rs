//! Bulb necks: decreasing profiles that solve `eta'' = k (1 - eta'^2) / eta`.
//!
//! Along such a curve `1 - eta'^2 = (eta_end / eta)^(2k)`, so the slope
//! reaches zero at `eta_end = eta0 * (1 - slope0^2)^(1/(2k))` and the scalar
//! curvature is `(n-1) (1 - eta'^2) (n - 2 - 2k) / eta^2`, positive whenever
//! `k < (n-2)/2`.

use std::sync::Arc;

use super::profile::Jet;
use super::quad::integrate;

const BASIS: [[f64; 6]; 6] = [
    [1.0, 0.0, 0.0, -10.0, 15.0, -6.0],
    [0.0, 1.0, 0.0, -6.0, 8.0, -3.0],
    [0.0, 0.0, 0.5, -1.5, 1.5, -0.5],
    [0.0, 0.0, 0.0, 10.0, -15.0, 6.0],
    [0.0, 0.0, 0.0, -4.0, 7.0, -3.0],
    [0.0, 0.0, 0.0, 0.5, -1.0, 0.5],
];

fn basis(i: usize, u: f64) -> (f64, f64, f64) {
    let c = &BASIS[i];
    let mut v = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    for p in (0..6).rev() {
        v = v * u + c[p];
    }
    for p in (1..6).rev() {
        d1 = d1 * u + p as f64 * c[p];
    }
    for p in (2..6).rev() {
        d2 = d2 * u + (p * (p - 1)) as f64 * c[p];
    }
    (v, d1, d2)
}

#[derive(Debug, Clone, PartialEq)]
struct Knots {
    x: Vec<f64>,
    value: Vec<f64>,
    d1: Vec<f64>,
    d2: Vec<f64>,
}

/// Quintic Hermite interpolant of the neck through knots where value and
/// both derivatives are exact. Local coordinate runs from 0 (the head side)
/// to [`Neck::width`].
#[derive(Debug, Clone, PartialEq)]
pub struct Neck {
    knots: Arc<Knots>,
    bend: f64,
}

impl Neck {
    /// Neck leaving height `h0` with slope `slope0` in (-1, 0).
    pub fn solve(h0: f64, slope0: f64, bend: f64, panels: usize) -> Neck {
        let a = (1.0 - slope0) * (1.0 + slope0);
        let end = h0 * a.powf(0.5 / bend);
        let span = h0 - end;
        let one_minus_p2 = |eta: f64| (end / eta).powf(2.0 * bend);
        // speed at height end + rise; -expm1 keeps precision near the end
        let speed = |rise: f64| (-(-2.0 * bend * (rise / end).ln_1p()).exp_m1()).sqrt();
        // eta = end + span * s^2 removes the square-root singularity at s = 0
        let integrand = |s: f64| {
            if s == 0.0 {
                2.0 * (span * end / (2.0 * bend)).sqrt()
            } else {
                2.0 * span * s / speed(span * s * s)
            }
        };
        let mut x = Vec::with_capacity(panels + 1);
        let mut value = Vec::with_capacity(panels + 1);
        let mut d1 = Vec::with_capacity(panels + 1);
        let mut d2 = Vec::with_capacity(panels + 1);
        let mut acc = 0.0;
        for i in 0..=panels {
            let s = 1.0 - i as f64 / panels as f64;
            if i > 0 {
                acc += integrate(integrand, s, s + 1.0 / panels as f64);
            }
            let eta = if i == panels { end } else { end + span * s * s };
            let q = one_minus_p2(eta);
            x.push(acc);
            value.push(eta);
            d1.push(if i == 0 { slope0 } else { -speed(span * s * s) });
            d2.push(bend * q / eta);
        }
        Neck {
            knots: Arc::new(Knots { x, value, d1, d2 }),
            bend,
        }
    }

    pub fn width(&self) -> f64 {
        *self.knots.x.last().expect("knots")
    }

    pub fn end_value(&self) -> f64 {
        *self.knots.value.last().expect("knots")
    }

    pub fn bend(&self) -> f64 {
        self.bend
    }

    pub(crate) fn jet(&self, x: f64) -> Jet {
        let k = &self.knots;
        let last = k.x.len() - 1;
        let i = k.x.partition_point(|&xi| xi <= x).clamp(1, last) - 1;
        let h = k.x[i + 1] - k.x[i];
        let u = (x - k.x[i]) / h;
        let coeff = [
            k.value[i],
            h * k.d1[i],
            h * h * k.d2[i],
            k.value[i + 1],
            h * k.d1[i + 1],
            h * h * k.d2[i + 1],
        ];
        let (mut v, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for (b, c) in coeff.iter().enumerate() {
            let (bv, b1, b2) = basis(b, u);
            v += c * bv;
            d1 += c * b1;
            d2 += c * b2;
        }
        let d1 = d1 / h;
        Jet {
            value: v,
            d1,
            d2: d2 / (h * h),
            one_minus_slope_sq: (1.0 - d1) * (1.0 + d1),
        }
    }

    pub(crate) fn scaled(&self, s: f64) -> Neck {
        let k = &self.knots;
        Neck {
            knots: Arc::new(Knots {
                x: k.x.iter().map(|x| x * s).collect(),
                value: k.value.iter().map(|v| v * s).collect(),
                d1: k.d1.clone(),
                d2: k.d2.iter().map(|d| d / s).collect(),
            }),
            bend: self.bend,
        }
    }
}
