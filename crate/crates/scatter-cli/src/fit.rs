use serde::Serialize;

/// Least-squares fit of `log y = p log x + log c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeFit {
    pub exponent: f64,
    pub prefactor: f64,
}

pub fn log_slope(xs: &[f64], ys: &[f64]) -> SlopeFit {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let exponent = num / den;
    SlopeFit { exponent, prefactor: (my - exponent * mx).exp() }
}
