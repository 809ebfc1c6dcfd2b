use serde::{Deserialize, Serialize};

use crate::entropy::{renyi_entropy, RenyiOrder};
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, MeasurementKind};

/// Which entropy bounds the extractable length: the optimized family gives
/// `H_{α/(2α−1)}(A)`, the marginal-conditioned family `H_{1/α}(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Up,
    Down,
}

#[derive(Debug, Clone)]
pub struct RateQuery {
    pub rho: DensityMatrix,
    pub epsilon: f64,
    pub n: u64,
    pub class: MeasurementKind,
    pub bound: Bound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub alpha_star: f64,
    pub rate_bits_per_copy: f64,
    pub total_bits: u64,
    pub asymptotic_rate: f64,
    pub at_boundary: bool,
}

const GRID_POINTS: usize = 256;
const S_MIN: f64 = 1e-7;
const GOLDEN_TOL: f64 = 1e-12;
const BOUNDARY_TOL: f64 = 1e-9;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(format!("α = {alpha} is outside (1, 2]")))
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("ε = {epsilon} is outside (0, 1]")))
    }
}

/// Right-hand side of the leftover-hash bound for 2-universal families:
/// `2^{2/α−2} · 2^{((α−1)/α)(out − h)}`. Not clamped to `[0, 1]`.
pub fn dupuis_bound(alpha: f64, out_bits: f64, h_up: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok((2.0 / alpha - 2.0 + (alpha - 1.0) / alpha * (out_bits - h_up)).exp2())
}

/// Largest `l ≥ 0` with `l ≤ h_up + (α/(α−1)) log₂ ε`.
pub fn output_length(h_up: f64, epsilon: f64, alpha: f64) -> u64 {
    let bound = h_up + alpha / (alpha - 1.0) * epsilon.log2();
    if bound.is_finite() && bound >= 1.0 {
        bound.floor() as u64
    } else {
        0
    }
}

fn source_order(alpha: f64, bound: Bound) -> Result<RenyiOrder> {
    RenyiOrder::new(match bound {
        Bound::Up => alpha / (2.0 * alpha - 1.0),
        Bound::Down => 1.0 / alpha,
    })
}

/// `H_γ(A) − (α/(n(α−1))) log₂ ε` with `γ` set by the bound.
pub fn objective(rho: &DensityMatrix, alpha: f64, epsilon: f64, n: u64, bound: Bound) -> Result<f64> {
    check_alpha(alpha)?;
    check_epsilon(epsilon)?;
    if n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let h = renyi_entropy(rho.spectrum(), source_order(alpha, bound)?)?;
    Ok(h - alpha / (n as f64 * (alpha - 1.0)) * epsilon.log2())
}

/// Minimizes `f` over `α ∈ (1, 2]`: a geometric grid in `α − 1 ∈ [1e-7, 1]`,
/// golden-section refinement around the best grid point, and an explicit
/// check of the endpoint `α = 2`. Returns `(α*, f(α*))`.
pub fn minimize_over_alpha(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let ratio = (1.0 / S_MIN).powf(1.0 / (GRID_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|k| if k == GRID_POINTS - 1 { 1.0 } else { S_MIN * ratio.powi(k as i32) })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&s| f(1.0 + s)).collect();
    let k = (0..GRID_POINTS)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("grid is non-empty");
    let mut best = (1.0 + grid[k], values[k]);

    let mut lo = 1.0 + grid[k.saturating_sub(1)];
    let mut hi = 1.0 + grid[(k + 1).min(GRID_POINTS - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    while hi - lo > GOLDEN_TOL {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    for cand in [(c, fc), (d, fd), (2.0, f(2.0))] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    best
}

/// Best ε-secure rate over `α ∈ (1, 2]` for `n` copies of `rho`.
pub fn optimize_alpha(query: &RateQuery) -> Result<RateReport> {
    check_epsilon(query.epsilon)?;
    if query.n == 0 {
        return Err(Error::OutOfRange("n must be positive".into()));
    }
    let d = query.rho.dim() as f64;
    let capacity = match query.class {
        MeasurementKind::Pvm => d.log2(),
        MeasurementKind::Povm => 2.0 * d.log2(),
    };
    let f = |alpha: f64| {
        objective(&query.rho, alpha, query.epsilon, query.n, query.bound)
            .expect("α stays inside (1, 2]")
    };
    let (alpha_star, min) = minimize_over_alpha(f);
    let rate = capacity - min;
    let total = rate * query.n as f64;
    let total_bits = if total > 0.0 { (total.ceil() - 1.0).max(0.0) as u64 } else { 0 };
    let h = renyi_entropy(query.rho.spectrum(), RenyiOrder::One)?;
    Ok(RateReport {
        alpha_star,
        rate_bits_per_copy: rate,
        total_bits,
        asymptotic_rate: capacity - h,
        at_boundary: (alpha_star - 2.0).abs() <= BOUNDARY_TOL,
    })
}
