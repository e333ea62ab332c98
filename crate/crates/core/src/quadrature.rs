//! One-dimensional rules and the compensated reduction used by every integral.

use crate::liealg::C64;

/// Gauss-Legendre nodes and weights on `[a, b]`, nodes ascending.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = (b - a) / 2.0;
    let mid = (a + b) / 2.0;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wt = 2.0 / ((1.0 - z * z) * dp * dp);
        // z runs from near +1 downwards
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = wt * half;
        w[n - 1 - i] = wt * half;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Periodic trapezoid rule on `[0, 2π)`.
pub fn trapezoid_periodic(n: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    ((0..n).map(|k| k as f64 * h).collect(), vec![h; n])
}

/// Neumaier-compensated sum in the given order.
pub fn neumaier(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn neumaier_complex(values: &[C64]) -> C64 {
    C64::new(
        neumaier(values.iter().map(|z| z.re)),
        neumaier(values.iter().map(|z| z.im)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(8, -1.0, 2.0);
        for deg in 0..16 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = (2f64.powi(deg + 1) - (-1f64).powi(deg + 1)) / (deg as f64 + 1.0);
            assert!((got - exact).abs() < 1e-11 * exact.abs().max(1.0), "deg {deg}");
        }
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn gauss_legendre_sine() {
        let (x, w) = gauss_legendre(32, 0.0, PI);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.sin()).sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_exact_for_trig() {
        let (x, w) = trapezoid_periodic(16);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * (3.0 * x).cos().powi(2)).sum();
        assert!((s - PI).abs() < 1e-14);
    }

    #[test]
    fn neumaier_recovers_cancellation() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier(v), 2.0);
    }
}
