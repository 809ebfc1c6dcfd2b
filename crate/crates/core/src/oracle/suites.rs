use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::entropy::{
    cq_divergence_beta, cq_divergence_numeric, cq_down_entropy_closed, cq_down_entropy_numeric,
    cq_up_entropy_bounds, cq_up_entropy_closed, petz_conditional_entropy, EntropyFamily, RenyiOrder,
};
use crate::error::{Error, Result};
use crate::extraction::{dupuis_bound, toeplitz_extract, Bits, HashSeed};
use crate::intrinsic::{fourier_vectors, max_intrinsic_pvm, mub_pvm};
use crate::linalg::{self, block_diagonal, eigh, identity, kron, psd_power, real, ComplexMatrix, ComplexVector};
use crate::oracle::random::{density_with_spectrum, random_density, random_pure, random_pvm, stream};
use crate::quantum::{post_measurement_cq, trace_distance, CqState, DensityMatrix, Measurement, MeasurementKind};

pub const GENERIC_TOL: f64 = 1e-8;
pub const NEAR_SINGULAR_TOL: f64 = 1e-6;
pub const SUPREMUM_TOL: f64 = 1e-9;
pub const SECURITY_TOL: f64 = 1e-10;
pub const PETZ_TOL: f64 = 1e-9;
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Outcome of one oracle suite.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub trials: usize,
    pub max_deviation: f64,
    pub worst_case: String,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
}

struct Tracker {
    suite: &'static str,
    tolerance: f64,
    trials: usize,
    max_deviation: f64,
    worst_case: String,
    values: BTreeMap<String, f64>,
}

impl Tracker {
    fn new(suite: &'static str, tolerance: f64) -> Self {
        Self {
            suite,
            tolerance,
            trials: 0,
            max_deviation: 0.0,
            worst_case: String::new(),
            values: BTreeMap::new(),
        }
    }

    fn record(&mut self, deviation: f64, case: impl FnOnce() -> String) {
        let deviation = if deviation.is_nan() { f64::INFINITY } else { deviation };
        if deviation > self.max_deviation || self.worst_case.is_empty() {
            self.max_deviation = self.max_deviation.max(deviation);
            self.worst_case = case();
        }
    }

    fn value(&mut self, key: &str, v: f64) {
        self.values.insert(key.to_string(), v);
    }

    fn value_max(&mut self, key: &str, v: f64) {
        let slot = self.values.entry(key.to_string()).or_insert(v);
        *slot = slot.max(v);
    }

    fn finish(self) -> VerificationReport {
        VerificationReport {
            suite: self.suite.to_string(),
            trials: self.trials,
            passed: self.max_deviation <= self.tolerance,
            max_deviation: self.max_deviation,
            worst_case: self.worst_case,
            tolerance: self.tolerance,
            values: self.values,
        }
    }
}

fn order(a: f64) -> RenyiOrder {
    RenyiOrder::new(a).expect("suite orders are valid")
}

/// `D̃_α(ρ_XE ‖ I ⊗ ρ_E^β / tr ρ_E^β)` on the explicit cq matrix.
///
/// The sandwiching power of `σ` is taken in the eigenbasis of `ρ_E` on its
/// support, so that `σ` keeps the support of `ρ_E` even when `λ_min^β`
/// falls below the eigenvalue resolution.
pub fn brute_divergence_beta(rho: &DensityMatrix, meas: &Measurement, alpha: f64, beta: f64) -> Result<f64> {
    let cq = post_measurement_cq(rho, meas)?;
    let marginal = eigh(&cq.marginal_e());
    let thr = marginal.support_threshold();
    let norm: f64 = marginal.values.iter().filter(|&&l| l > thr).map(|l| l.powf(beta)).sum();
    let gamma = (1.0 - alpha) / (2.0 * alpha);
    let s = marginal.apply(|l| if l > thr { (l.powf(beta) / norm).powf(gamma) } else { 0.0 });
    let s_xe = kron(&identity(cq.outcomes()), &s);
    let sandwiched = &s_xe * cq.to_matrix() * &s_xe;
    let inner = eigh(&sandwiched);
    let cut = inner.support_threshold();
    let q: f64 = inner.values.iter().filter(|&&m| m > cut).map(|m| m.powf(alpha)).sum();
    Ok(q.log2() / (alpha - 1.0))
}

const DIVERGENCE_ALPHAS: [f64; 4] = [0.6, 1.3, 2.0, 4.0];

fn betas(alpha: f64) -> [f64; 4] {
    [0.5, alpha / (2.0 * alpha - 1.0), 1.0, 2.0]
}

fn divergence_cases(t: &mut Tracker, rho: &DensityMatrix, meas: &Measurement, label: &str) -> Result<()> {
    for alpha in DIVERGENCE_ALPHAS {
        for beta in betas(alpha) {
            let closed = cq_divergence_beta(rho, meas, order(alpha), beta)?;
            let brute = brute_divergence_beta(rho, meas, alpha, beta)?;
            t.record((closed - brute).abs(), || {
                format!("{label} d={} alpha={alpha} beta={beta} closed={closed} brute={brute}", rho.dim())
            });
        }
    }
    t.trials += 1;
    Ok(())
}

/// Closed-form cq divergence against direct matrix evaluation, random `(ρ, PVM, α, β)`.
pub fn verify_divergence_closed_form(trials: usize, max_dim: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = stream("divergence", seed);
    let mut t = Tracker::new("divergence", GENERIC_TOL);
    let mixed = DensityMatrix::maximally_mixed(2);
    let fixed = cq_divergence_beta(&mixed, &mub_pvm(&mixed), order(2.0), 1.0)?;
    t.value("maximally_mixed_mub_alpha2_beta1", fixed);
    for trial in 0..trials {
        let d = rng.random_range(2..=max_dim.max(2));
        let rho = random_density(d, d, &mut rng);
        let meas = random_pvm(d, &mut rng);
        divergence_cases(&mut t, &rho, &meas, &format!("trial={trial}"))?;
    }
    Ok(t.finish())
}

/// Same comparison on states with smallest eigenvalue `1e-8`, looser tolerance.
pub fn verify_divergence_near_singular(trials: usize, max_dim: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = stream("divergence_near_singular", seed);
    let mut t = Tracker::new("divergence_near_singular", NEAR_SINGULAR_TOL);
    for trial in 0..trials {
        let d = rng.random_range(2..=max_dim.max(2));
        let mut spectrum: Vec<f64> = (0..d - 1).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = spectrum.iter().sum();
        spectrum.iter_mut().for_each(|p| *p *= (1.0 - 1e-8) / total);
        spectrum.push(1e-8);
        let rho = density_with_spectrum(&spectrum, &mut rng);
        let meas = random_pvm(d, &mut rng);
        divergence_cases(&mut t, &rho, &meas, &format!("trial={trial}"))?;
    }
    Ok(t.finish())
}

/// Checks `lower = closed ≤ upper` for the optimized family: the closed form
/// must equal the divergence at `σ ∝ ρ_E^{α/(2α−1)}` and stay below
/// `H̃↓_{2−1/α}`, both evaluated on explicit matrices; for unbiased
/// measurements all three must coincide.
pub fn verify_up_entropy_sandwich(trials: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = stream("up_sandwich", seed);
    let mut t = Tracker::new("up_sandwich", GENERIC_TOL);
    let check = |t: &mut Tracker, rho: &DensityMatrix, meas: &Measurement, alpha: f64, tight: bool, label: &str| -> Result<f64> {
        let beta = alpha / (2.0 * alpha - 1.0);
        let closed = cq_up_entropy_closed(rho, meas, order(alpha))?;
        let lower = -brute_divergence_beta(rho, meas, alpha, beta)?;
        let cq = post_measurement_cq(rho, meas)?;
        let upper = cq_down_entropy_numeric(&cq, order(2.0 - 1.0 / alpha))?;
        let mut dev = (closed - lower).abs().max(closed - upper);
        if tight {
            dev = dev.max((upper - closed).abs());
        } else {
            t.value_max("max_bracket_width_random_pvm", upper - closed);
        }
        t.record(dev, || {
            format!("{label} d={} alpha={alpha} lower={lower} closed={closed} upper={upper}", rho.dim())
        });
        Ok(closed)
    };

    let mixed = DensityMatrix::maximally_mixed(3);
    let v = check(&mut t, &mixed, &mub_pvm(&mixed), 2.0, true, "maximally_mixed")?;
    t.record(v.abs(), || format!("maximally mixed gives {v}"));
    let pure = random_pure(3, &mut rng);
    let v = check(&mut t, &pure, &mub_pvm(&pure), 2.0, true, "pure")?;
    t.record((v - 3f64.log2()).abs(), || format!("pure state gives {v}"));

    for trial in 0..trials {
        let d = rng.random_range(2..=5);
        let rho = random_density(d, d, &mut rng);
        let alpha = 1.0 + rng.random_range(0.05..4.0);
        check(&mut t, &rho, &random_pvm(d, &mut rng), alpha, false, &format!("trial={trial} random"))?;
        check(&mut t, &rho, &mub_pvm(&rho), alpha, true, &format!("trial={trial} unbiased"))?;
        t.trials += 1;
    }
    Ok(t.finish())
}

/// Upper estimate of `H̃_α(X|E)` for one measurement: the down family is exact;
/// for the optimized family the `H̃↓_{2−1/α}` bound is used, which dominates it.
fn entropy_upper(rho: &DensityMatrix, meas: &Measurement, family: EntropyFamily, alpha: RenyiOrder) -> Result<f64> {
    match (family, alpha) {
        (EntropyFamily::SandwichedUp, RenyiOrder::Finite(_)) => Ok(cq_up_entropy_bounds(rho, meas, alpha)?.1),
        (EntropyFamily::SandwichedUp, RenyiOrder::Infinity) => cq_down_entropy_closed(rho, meas, order(2.0)),
        (EntropyFamily::SandwichedUp, _) => cq_up_entropy_closed(rho, meas, alpha),
        _ => cq_down_entropy_closed(rho, meas, alpha),
    }
}

fn attained(rho: &DensityMatrix, meas: &Measurement, family: EntropyFamily, alpha: RenyiOrder) -> Result<f64> {
    match family {
        EntropyFamily::SandwichedUp => cq_up_entropy_closed(rho, meas, alpha),
        _ => cq_down_entropy_closed(rho, meas, alpha),
    }
}

/// Haar-random rank-one PVMs never beat the closed-form maximum, which the
/// unbiased PVM attains.
pub fn random_pvm_supremum_search(
    rho: &DensityMatrix,
    family: EntropyFamily,
    alpha: RenyiOrder,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = stream("pvm_supremum", seed);
    let mut t = Tracker::new("pvm_supremum", SUPREMUM_TOL);
    supremum_case(&mut t, rho, family, alpha, trials, &mut rng, "")?;
    Ok(t.finish())
}

fn supremum_case(
    t: &mut Tracker,
    rho: &DensityMatrix,
    family: EntropyFamily,
    alpha: RenyiOrder,
    trials: usize,
    rng: &mut impl Rng,
    prefix: &str,
) -> Result<()> {
    let value = max_intrinsic_pvm(rho, family, alpha)?.value_bits;
    let mub = attained(rho, &mub_pvm(rho), family, alpha)?;
    t.record((mub - value).abs(), || format!("{prefix}unbiased PVM gives {mub}, closed form {value}"));
    let mut best = f64::NEG_INFINITY;
    for trial in 0..trials {
        let meas = random_pvm(rho.dim(), rng);
        let sample = entropy_upper(rho, &meas, family, alpha)?;
        best = best.max(attained(rho, &meas, family, alpha)?);
        t.record(sample - value, || format!("{prefix}trial={trial} sampled={sample} closed={value}"));
        t.trials += 1;
    }
    t.value(&format!("{prefix}closed_form"), value);
    t.value(&format!("{prefix}empirical_max"), best);
    t.value(&format!("{prefix}empirical_gap"), value - best);
    Ok(())
}

fn example_qubit() -> DensityMatrix {
    DensityMatrix::new(ComplexMatrix::from_row_slice(2, 2, &[real(0.75), real(0.25), real(0.25), real(0.25)]))
        .expect("valid state")
}

/// Default supremum workload: the qubit example state across both families,
/// the maximally mixed ququart and a random qutrit.
pub fn verify_pvm_supremum(trials: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = stream("pvm_supremum", seed);
    let mut t = Tracker::new("pvm_supremum", SUPREMUM_TOL);
    let qubit = example_qubit();
    supremum_case(&mut t, &qubit, EntropyFamily::SandwichedUp, order(2.0), trials, &mut rng, "qubit_up_2/")?;
    for a in [0.5, 1.0, 2.0, 4.0, f64::INFINITY] {
        let prefix = format!("qubit_down_{a}/");
        supremum_case(&mut t, &qubit, EntropyFamily::SandwichedDown, order(a), trials / 10, &mut rng, &prefix)?;
    }
    let mixed = DensityMatrix::maximally_mixed(4);
    for trial in 0..trials / 10 {
        let meas = random_pvm(4, &mut rng);
        let v = cq_down_entropy_closed(&mixed, &meas, order(2.0))?;
        t.record(v.abs(), || format!("maximally mixed trial={trial} gives {v}"));
        t.trials += 1;
    }
    let qutrit = random_density(3, 3, &mut rng);
    supremum_case(&mut t, &qutrit, EntropyFamily::SandwichedUp, order(1.5), trials / 2, &mut rng, "qutrit_up_1.5/")?;
    Ok(t.finish())
}

/// `½‖ρ_{ZSE} − I_Z/2^l ⊗ ρ_{SE}‖₁` for one copy of a two-outcome cq state
/// hashed by the Toeplitz family with `m = 1`, averaged over all seeds.
pub fn exact_security_distance(cq: &CqState, out_len: usize) -> Result<f64> {
    if cq.outcomes() != 2 {
        return Err(Error::Unsupported("exact security is implemented for one input bit".into()));
    }
    let de = cq.dim_e();
    let rho_e = cq.marginal_e();
    let seed_len = out_len; // m + l − 1 with m = 1
    let n_seeds = 1usize << seed_len;
    let n_out = 1usize << out_len;
    let mut real_blocks = Vec::new();
    let mut ideal_blocks = Vec::new();
    for z in 0..n_out {
        for s in 0..n_seeds {
            let seed = HashSeed::from_bits(Bits::from_bools(&(0..seed_len).map(|i| s >> i & 1 == 1).collect::<Vec<_>>()));
            let mut block = ComplexMatrix::zeros(de, de);
            for x in 0..2 {
                let hashed = toeplitz_extract(&Bits::from_bools(&[x == 1]), &seed, out_len)?;
                let value = (0..out_len).fold(0, |acc, i| acc | (hashed.get(i) as usize) << i);
                if value == z {
                    block += &cq.blocks()[x];
                }
            }
            real_blocks.push(block / real(n_seeds as f64));
            ideal_blocks.push(&rho_e / real((n_seeds * n_out) as f64));
        }
    }
    trace_distance(&block_diagonal(&real_blocks), &block_diagonal(&ideal_blocks))
}

/// Exhaustive collision probabilities of the Toeplitz family, as the largest
/// deviation from `2^{−l}` over distinct input pairs.
pub fn toeplitz_universality_deviation(m: usize, l: usize) -> Result<f64> {
    let bits = |v: usize, n: usize| Bits::from_bools(&(0..n).map(|i| v >> i & 1 == 1).collect::<Vec<_>>());
    let seed_len = m + l - 1;
    let seeds: Vec<HashSeed> = (0..1usize << seed_len).map(|s| HashSeed::from_bits(bits(s, seed_len))).collect();
    let mut worst: f64 = 0.0;
    for x in 0..1usize << m {
        for xp in x + 1..1usize << m {
            let mut hits = 0usize;
            for seed in &seeds {
                if toeplitz_extract(&bits(x, m), seed, l)? == toeplitz_extract(&bits(xp, m), seed, l)? {
                    hits += 1;
                }
            }
            worst = worst.max((hits as f64 / seeds.len() as f64 - (-(l as f64)).exp2()).abs());
        }
    }
    Ok(worst)
}

/// Exact trace distance of the hashed qubit against the leftover-hash bound.
pub fn verify_exact_security(seed: u64) -> Result<VerificationReport> {
    let mut rng = stream("exact_security", seed);
    let mut t = Tracker::new("exact_security", SECURITY_TOL);
    let mixed = DensityMatrix::maximally_mixed(2);
    let pure = random_pure(2, &mut rng);
    let generic = random_density(2, 2, &mut rng);
    let cases = [
        ("maximally_mixed_unbiased", mixed.clone(), mub_pvm(&mixed)),
        ("pure_random_pvm", pure.clone(), random_pvm(2, &mut rng)),
        ("mixed_unbiased", generic.clone(), mub_pvm(&generic)),
        ("mixed_random_pvm", generic.clone(), random_pvm(2, &mut rng)),
    ];
    for (name, rho, meas) in &cases {
        let cq = post_measurement_cq(rho, meas)?;
        let lhs = exact_security_distance(&cq, 1)?;
        t.value(&format!("{name}/trace_distance"), lhs);
        for alpha in [1.5, 2.0] {
            let h = cq_up_entropy_closed(rho, meas, order(alpha))?;
            let bound = dupuis_bound(alpha, 1.0, h)?;
            t.value(&format!("{name}/bound_alpha_{alpha}"), bound);
            t.record(lhs - bound, || format!("{name} alpha={alpha} distance={lhs} bound={bound}"));
            t.trials += 1;
        }
        let empty = exact_security_distance(&cq, 0)?;
        t.record(empty, || format!("{name} l=0 distance={empty}"));
    }
    let universality = toeplitz_universality_deviation(3, 2)?;
    t.value("toeplitz_m3_l2_collision_deviation", universality);
    t.record(universality, || format!("Toeplitz m=3 l=2 collision deviation {universality}"));
    Ok(t.finish())
}

pub fn petz_expected_unbiased() -> f64 {
    3f64.log2() - 2.0 * ((1.0 + 3f64.sqrt()) / 2.0).log2()
}

pub fn petz_expected_second() -> f64 {
    2.0 * (4.0 * 2f64.sqrt() / (2f64.sqrt() + 3.0)).log2()
}

/// Petz entropies at `α = 3/2` of the qutrit `¼|0⟩⟨0| + ¾|1⟩⟨1|` measured in
/// an unbiased basis and in `{|0⟩, (|1⟩ ± |2⟩)/√2}`.
pub fn petz_values() -> Result<(f64, f64)> {
    let rho = DensityMatrix::diagonal(&[0.25, 0.75, 0.0])?;
    let e = |k: usize| ComplexVector::from_fn(3, |i, _| real(if i == k { 1.0 } else { 0.0 }));
    let unbiased = Measurement::from_vectors(&fourier_vectors(&[e(0), e(1), e(2)]), MeasurementKind::Pvm)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let second = Measurement::from_vectors(
        &[e(0), (e(1) + e(2)) * real(s), (e(1) - e(2)) * real(s)],
        MeasurementKind::Pvm,
    )?;
    let a = order(1.5);
    Ok((
        petz_conditional_entropy(&post_measurement_cq(&rho, &unbiased)?, a)?,
        petz_conditional_entropy(&post_measurement_cq(&rho, &second)?, a)?,
    ))
}

pub fn petz_counterexample() -> Result<VerificationReport> {
    let mut t = Tracker::new("petz", PETZ_TOL);
    let (unbiased, second) = petz_values()?;
    let (e1, e2) = (petz_expected_unbiased(), petz_expected_second());
    t.value("unbiased", unbiased);
    t.value("unbiased_expected", e1);
    t.value("second_basis", second);
    t.value("second_basis_expected", e2);
    t.record((unbiased - e1).abs(), || format!("unbiased basis {unbiased} vs {e1}"));
    t.record((second - e2).abs(), || format!("second basis {second} vs {e2}"));
    let rounded = |v: f64| (v * 1000.0).round() / 1000.0;
    if rounded(unbiased) != 0.685 || rounded(second) != 0.716 {
        t.record(1.0, || format!("three-decimal values {:.3} / {:.3}", unbiased, second));
    }
    if second - unbiased < 0.03 {
        t.record(1.0, || format!("second basis only {} above unbiased", second - unbiased));
    }
    t.trials = 2;
    Ok(t.finish())
}

fn flagged(cq0: &CqState, cq1: &CqState, lambda: f64) -> Result<CqState> {
    let blocks = cq0
        .blocks()
        .iter()
        .zip(cq1.blocks())
        .map(|(a, b)| block_diagonal(&[a * real(lambda), b * real(1.0 - lambda)]))
        .collect();
    CqState::new(blocks)
}

fn normalized_power(m: &ComplexMatrix, beta: f64) -> ComplexMatrix {
    let p = psd_power(m, beta);
    let tr = linalg::trace(&p).re;
    p / real(tr)
}

/// `H̃↑_α(X|EF)` of a flagged mixture of two cq states whose components are
/// optimized by `σ_i ∝ ρ_{E,i}^{α/(2α−1)}`: the optimal conditioning state is
/// block diagonal, leaving a one-dimensional search over the flag weight.
fn flagged_up_entropy(cq0: &CqState, cq1: &CqState, lambda: f64, alpha: f64) -> Result<f64> {
    let beta = alpha / (2.0 * alpha - 1.0);
    let mix = flagged(cq0, cq1, lambda)?;
    let s0 = normalized_power(&cq0.marginal_e(), beta);
    let s1 = normalized_power(&cq1.marginal_e(), beta);
    let value = |mu: f64| -> Result<f64> {
        let sigma = block_diagonal(&[&s0 * real(mu), &s1 * real(1.0 - mu)]);
        Ok(-cq_divergence_numeric(&mix, &sigma, order(alpha))?)
    };
    if lambda == 0.0 || lambda == 1.0 {
        return value(lambda);
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (value(c)?, value(d)?);
    while hi - lo > 1e-13 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = value(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = value(d)?;
        }
    }
    Ok(fc.max(fd))
}

const LAMBDAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// `2^{H̃(X|EF)} ≤ λ 2^{H̃(X|E)_ρ} + (1−λ) 2^{H̃(X|E)_σ}` for flagged mixtures.
pub fn verify_convexity_exponential(trials: usize, seed: u64) -> Result<VerificationReport> {
    let mut rng = stream("convexity", seed);
    let mut t = Tracker::new("convexity", CONVEXITY_TOL);
    let check = |t: &mut Tracker, h_mix: f64, h0: f64, h1: f64, lambda: f64, label: &str| {
        let rhs = lambda * h0.exp2() + (1.0 - lambda) * h1.exp2();
        let lhs = h_mix.exp2();
        t.record(lhs - rhs, || format!("{label} lambda={lambda} lhs={lhs} rhs={rhs}"));
        if lambda == 0.0 || lambda == 1.0 {
            t.record((lhs - rhs).abs(), || format!("{label} endpoint lambda={lambda} lhs={lhs} rhs={rhs}"));
        }
        t.trials += 1;
    };

    for trial in 0..trials {
        let d = rng.random_range(2..=3);
        let (r0, r1) = (random_density(d, d, &mut rng), random_density(d, d, &mut rng));
        let cq0 = post_measurement_cq(&r0, &random_pvm(d, &mut rng))?;
        let cq1 = post_measurement_cq(&r1, &random_pvm(d, &mut rng))?;
        let alpha = [0.6, 0.8, 1.5, 2.0, 3.0][trial % 5];
        let h0 = cq_down_entropy_numeric(&cq0, order(alpha))?;
        let h1 = cq_down_entropy_numeric(&cq1, order(alpha))?;
        for lambda in LAMBDAS {
            let h = cq_down_entropy_numeric(&flagged(&cq0, &cq1, lambda)?, order(alpha))?;
            check(&mut t, h, h0, h1, lambda, &format!("down trial={trial} d={d} alpha={alpha}"));
        }

        let (m0, m1) = (mub_pvm(&r0), mub_pvm(&r1));
        let (u0, u1) = (post_measurement_cq(&r0, &m0)?, post_measurement_cq(&r1, &m1)?);
        let alpha = [1.5, 2.0, 3.0][trial % 3];
        let h0 = cq_up_entropy_closed(&r0, &m0, order(alpha))?;
        let h1 = cq_up_entropy_closed(&r1, &m1, order(alpha))?;
        for lambda in LAMBDAS {
            let h = flagged_up_entropy(&u0, &u1, lambda, alpha)?;
            check(&mut t, h, h0, h1, lambda, &format!("up trial={trial} d={d} alpha={alpha}"));
        }
        let same = flagged_up_entropy(&u0, &u0, 0.5, alpha)?;
        t.record((same - h0).abs(), || format!("up equal-state mixture {same} vs {h0}"));
    }
    Ok(t.finish())
}

/// Names accepted by [`run_suite`].
pub const SUITE_NAMES: [&str; 7] = [
    "divergence",
    "divergence_near_singular",
    "up_sandwich",
    "pvm_supremum",
    "exact_security",
    "petz",
    "convexity",
];

/// Runs a suite by name with its default workload.
pub fn run_suite(name: &str, seed: u64) -> Result<VerificationReport> {
    match name {
        "divergence" => verify_divergence_closed_form(200, 5, seed),
        "divergence_near_singular" => verify_divergence_near_singular(50, 5, seed),
        "up_sandwich" => verify_up_entropy_sandwich(200, seed),
        "pvm_supremum" => verify_pvm_supremum(1000, seed),
        "exact_security" => verify_exact_security(seed),
        "petz" => petz_counterexample(),
        "convexity" => verify_convexity_exponential(40, seed),
        other => Err(Error::Parse(format!("unknown suite {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_suite_passes() {
        let r = verify_divergence_closed_form(20, 4, 0).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.values["maximally_mixed_mub_alpha2_beta1"].abs() < 1e-12);
    }

    #[test]
    fn near_singular_suite_passes() {
        let r = verify_divergence_near_singular(10, 4, 1).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn sandwich_suite_passes() {
        let r = verify_up_entropy_sandwich(20, 2).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn supremum_qubit_saturates() {
        let r = random_pvm_supremum_search(&example_qubit(), EntropyFamily::SandwichedUp, order(2.0), 1000, 0)
            .unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.values["empirical_gap"] < 0.02);
    }

    #[test]
    fn exact_security_passes() {
        let r = verify_exact_security(0).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.values["maximally_mixed_unbiased/trace_distance"] > 0.0);
    }

    #[test]
    fn petz_passes() {
        let r = petz_counterexample().unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.values["unbiased"] - 0.684993873768).abs() < 1e-9);
        assert!((r.values["second_basis"] - 0.715687140437).abs() < 1e-9);
    }

    #[test]
    fn convexity_passes() {
        let r = verify_convexity_exponential(6, 3).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("nope", 0), Err(Error::Parse(_))));
    }
}
