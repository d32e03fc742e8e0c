use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1], found by Newton iteration
/// on the Legendre recurrence.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// Integral of `f` over [a, b] with the 16-point rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (x, w) = gl16();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    x.iter()
        .zip(w)
        .map(|(xi, wi)| wi * f(mid + half * xi))
        .sum::<f64>()
        * half
}

/// Root of a continuous `f` on [lo, hi] with a sign change, by bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The flat-ending bump `exp(-a u^2 / (1 - u))` on [0, 1], zero at 1.
pub fn bump(a: f64, u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        (-a * u * u / (1.0 - u)).exp()
    }
}

/// Derivative of [`bump`] in `u`.
pub fn bump_d1(a: f64, u: f64) -> f64 {
    if u >= 1.0 {
        0.0
    } else {
        let v = 1.0 - u;
        -bump(a, u) * a * u * (2.0 - u) / (v * v)
    }
}

/// Cumulative integral of [`bump`] tabulated on uniform panels, so that
/// point evaluations only integrate one partial panel.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpTable {
    steepness: f64,
    cumulative: Vec<f64>,
}

impl BumpTable {
    pub fn new(steepness: f64, panels: usize) -> Self {
        let h = 1.0 / panels as f64;
        let mut cumulative = Vec::with_capacity(panels + 1);
        cumulative.push(0.0);
        let mut acc = 0.0;
        for k in 0..panels {
            let a = k as f64 * h;
            acc += integrate(|u| bump(steepness, u), a, a + h);
            cumulative.push(acc);
        }
        BumpTable {
            steepness,
            cumulative,
        }
    }

    pub fn steepness(&self) -> f64 {
        self.steepness
    }

    pub fn panels(&self) -> usize {
        self.cumulative.len() - 1
    }

    /// Tabulated value at panel edge `k`.
    pub fn at_edge(&self, k: usize) -> f64 {
        self.cumulative[k]
    }

    pub fn total(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Integral of the bump over [0, u] for u in [0, 1].
    pub fn integral(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let panels = self.panels();
        if u >= 1.0 {
            return self.total();
        }
        let h = 1.0 / panels as f64;
        let k = ((u / h) as usize).min(panels - 1);
        let a = k as f64 * h;
        if u == a {
            return self.cumulative[k];
        }
        self.cumulative[k] + integrate(|x| bump(self.steepness, x), a, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_on_polynomials() {
        let (x, w) = gauss_legendre(16);
        let wsum: f64 = w.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // degree 30 monomial integrates to 2/31
        let m: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(30)).sum();
        assert!((m - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn integrate_matches_closed_form() {
        let v = integrate(f64::sin, 0.0, PI);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0).is_none());
    }

    #[test]
    fn bump_table_agrees_with_direct_quadrature() {
        for a in [0.01, 1.0, 100.0] {
            let t = BumpTable::new(a, 512);
            for u in [0.1, 0.37, 0.5, 0.93, 0.999] {
                // fine direct composite rule
                let n = 4096;
                let direct: f64 = (0..n)
                    .map(|k| {
                        let lo = u * k as f64 / n as f64;
                        integrate(|x| bump(a, x), lo, lo + u / n as f64)
                    })
                    .sum();
                assert!((t.integral(u) - direct).abs() < 1e-13, "a={a} u={u}");
            }
        }
    }

    #[test]
    fn bump_derivative_matches_difference_quotient() {
        let h = 1e-6;
        for u in [0.2, 0.6, 0.9] {
            let fd = (bump(1.0, u + h) - bump(1.0, u - h)) / (2.0 * h);
            assert!((fd - bump_d1(1.0, u)).abs() < 1e-8);
        }
    }
}
