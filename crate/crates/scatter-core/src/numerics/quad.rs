//! Composite Simpson quadrature and fourth-order running integrals on uniform nodes.

use crate::{Result, ScatterError, C64};

/// Composite Simpson weights for `n` unit-spaced nodes (`n` odd, `n >= 3`).
pub fn simpson_weights(n: usize) -> Result<Vec<f64>> {
    if n < 3 || n % 2 == 0 {
        return Err(ScatterError::Config(format!(
            "simpson rule needs an odd node count >= 3, got {n}"
        )));
    }
    let mut w = vec![0.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = if i == 0 || i == n - 1 {
            1.0 / 3.0
        } else if i % 2 == 1 {
            4.0 / 3.0
        } else {
            2.0 / 3.0
        };
    }
    Ok(w)
}

/// Fourth-order weights for any `n >= 2` unit-spaced nodes: Simpson when `n` is odd,
/// Simpson followed by one three-eighths panel when `n` is even (`n = 2` falls back
/// to the trapezoid rule).
pub fn composite_weights(n: usize) -> Vec<f64> {
    match n {
        0 | 1 => vec![0.0; n],
        2 => vec![0.5, 0.5],
        _ if n % 2 == 1 => simpson_weights(n).expect("odd count"),
        _ => {
            let mut w = vec![0.0; n];
            let m = n - 3;
            if m >= 3 {
                for (i, s) in simpson_weights(m).expect("odd count").into_iter().enumerate() {
                    w[i] += s;
                }
            }
            for (o, c) in [3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0].into_iter().enumerate() {
                w[n - 4 + o] += c;
            }
            w
        }
    }
}

/// Composite Simpson integral of complex samples with spacing `h`.
pub fn quadrature(values: &[C64], h: f64) -> Result<C64> {
    let w = simpson_weights(values.len())?;
    Ok(values.iter().zip(&w).map(|(v, wi)| v * *wi).sum::<C64>() * h)
}

/// Composite Simpson integral of real samples with spacing `h`.
pub fn quadrature_real(values: &[f64], h: f64) -> Result<f64> {
    let w = simpson_weights(values.len())?;
    Ok(values.iter().zip(&w).map(|(v, wi)| v * wi).sum::<f64>() * h)
}

/// Unit-spacing weights `(node, weight)` for the integral from node 0 to node `i`.
///
/// Even `i` uses Simpson, odd `i >= 3` closes with a three-eighths panel, and `i = 1`
/// uses the four-point Adams-Moulton rule (nodes 0..=3), so callers need at least four nodes.
pub fn prefix_rule(i: usize) -> Vec<(usize, f64)> {
    match i {
        0 => Vec::new(),
        1 => vec![(0, 9.0 / 24.0), (1, 19.0 / 24.0), (2, -5.0 / 24.0), (3, 1.0 / 24.0)],
        _ if i % 2 == 0 => simpson_weights(i + 1)
            .expect("odd count")
            .into_iter()
            .enumerate()
            .collect(),
        _ => composite_weights(i + 1).into_iter().enumerate().collect(),
    }
}

/// Running integrals `F[i] = ∫_{x_0}^{x_i} f` with local fourth-order accuracy.
pub fn cumulative(values: &[C64], h: f64) -> Vec<C64> {
    let n = values.len();
    let mut out = vec![C64::new(0.0, 0.0); n];
    if n < 2 {
        return out;
    }
    let f = values;
    out[1] = if n >= 4 {
        (f[0] * 9.0 + f[1] * 19.0 - f[2] * 5.0 + f[3]) * (h / 24.0)
    } else if n == 3 {
        (f[0] * 5.0 + f[1] * 8.0 - f[2]) * (h / 12.0)
    } else {
        (f[0] + f[1]) * (h / 2.0)
    };
    for i in 2..n {
        out[i] = out[i - 2] + (f[i - 2] + f[i - 1] * 4.0 + f[i]) * (h / 3.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, lo: f64, hi: f64, f: impl Fn(f64) -> C64) -> (Vec<C64>, f64) {
        let h = (hi - lo) / (n - 1) as f64;
        ((0..n).map(|i| f(lo + i as f64 * h)).collect(), h)
    }

    #[test]
    fn constant_is_exact() {
        let (v, h) = sample(101, 0.0, 1.0, |_| C64::new(1.0, 0.0));
        let q = quadrature(&v, h).unwrap();
        assert!((q - 1.0).norm() < 1e-14);
    }

    #[test]
    fn cubic_is_exact() {
        let (v, h) = sample(101, 0.0, 1.0, |x| C64::new(x * x * x, 0.0));
        assert!((quadrature(&v, h).unwrap() - 0.25).norm() < 1e-15);
    }

    #[test]
    fn oscillatory_exponential() {
        let (v, h) = sample(101, 0.0, std::f64::consts::PI, |x| C64::new(0.0, x).exp());
        let q = quadrature(&v, h).unwrap();
        // leading Simpson error h^4/180 (f'''(π) - f'''(0)) = h^4/90 here
        let leading = h.powi(4) / 90.0;
        assert!(((q - C64::new(0.0, 2.0)).norm() - leading).abs() < 1e-2 * leading);
        let (v, h) = sample(201, 0.0, std::f64::consts::PI, |x| C64::new(0.0, x).exp());
        assert!((quadrature(&v, h).unwrap() - C64::new(0.0, 2.0)).norm() < 1e-8);
    }

    #[test]
    fn even_count_rejected() {
        assert!(quadrature(&[C64::new(1.0, 0.0); 4], 0.1).is_err());
    }

    #[test]
    fn composite_weights_exact_for_cubics() {
        for n in 2..12 {
            let w = composite_weights(n);
            let exact_deg = if n == 2 { 1 } else { 3 };
            for p in 0..=exact_deg {
                let s: f64 = w.iter().enumerate().map(|(i, wi)| wi * (i as f64).powi(p)).sum();
                let want = ((n - 1) as f64).powi(p + 1) / (p + 1) as f64;
                assert!((s - want).abs() < 1e-10 * want.max(1.0), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn prefix_rule_exact_for_cubics() {
        for i in 1..10 {
            for p in 0..=3 {
                let s: f64 = prefix_rule(i).iter().map(|(j, w)| w * (*j as f64).powi(p)).sum();
                let want = (i as f64).powi(p + 1) / (p + 1) as f64;
                assert!((s - want).abs() < 1e-12 * want.max(1.0), "i={i} p={p}");
            }
        }
    }

    #[test]
    fn cumulative_matches_antiderivative() {
        let (v, h) = sample(201, 0.0, 2.0, |x| C64::new(x.cos(), x.sin()));
        let c = cumulative(&v, h);
        for (i, ci) in c.iter().enumerate() {
            let x = i as f64 * h;
            let exact = C64::new(x.sin(), 1.0 - x.cos());
            assert!((ci - exact).norm() < 1e-9, "i={i}");
        }
    }

    #[test]
    fn refinement_error_is_fourth_order() {
        let f = |x: f64| C64::new((3.0 * x).sin() * x.exp(), 0.0);
        let exact = {
            let (v, h) = sample(4001, 0.0, 1.0, f);
            quadrature(&v, h).unwrap()
        };
        let (v1, h1) = sample(11, 0.0, 1.0, f);
        let (v2, h2) = sample(21, 0.0, 1.0, f);
        let e1 = (quadrature(&v1, h1).unwrap() - exact).norm();
        let e2 = (quadrature(&v2, h2).unwrap() - exact).norm();
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }
}
