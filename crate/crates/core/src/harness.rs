//! Ratio series against their predicted limits, exceptional-set density
//! profiles, translation-covariance identities, and the small-function
//! feasibility witnesses.
//!
//! Every series is an n-indexed sequence r_n together with a target limit L,
//! a threshold ε, the empirical exceptional set 𝒩_ε = {n : |r_n − L| > ε},
//! and the density profile d_n = q_n(𝒩_ε)/n where q_n counts exceptional
//! indices ≤ n. The limit theorems only promise convergence outside a set of
//! density zero; the theorems' 𝒩 is not constructed, so the harness detects
//! it empirically per scenario and judges the density profile against a
//! threshold. Thresholds are supplied relative to |L| so that scaling a
//! function by c > 0 scales r_n, L, and ε together and leaves 𝒩_ε unchanged;
//! undefined ratios (zero denominators before the support has spread) count
//! as exceptional, which keeps d_n well-defined from n = 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Element;
use crate::measure::{
    convolve, integrate_scaled, PowerIteration, WeightedSupport,
};
use crate::spectral::{nu_integral, ExponentialSpec};

/// Acceptance thresholds for one series: every index from `tail_start` on
/// must sit within `tail_epsilon_rel`·|L| of the target, and the final
/// exceptional density may not exceed `max_density`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictSpec {
    pub tail_start: usize,
    pub tail_epsilon_rel: f64,
    pub max_density: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub tail_ok: bool,
    /// One-sided (liminf) half of the tail comparison: r_n may not fall below
    /// L − ε on the tail. Implied by `tail_ok`; reported separately because
    /// the integrated-ratio theorem proves this half first.
    pub tail_liminf_ok: bool,
    pub density_ok: bool,
    pub max_tail_abs_err: f64,
    pub final_density: f64,
}

/// An n-indexed ratio series with its exceptional-set bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatioSeries {
    pub scenario: String,
    /// Index of `values[0]`; indices run start_n, start_n+1, …
    pub start_n: usize,
    pub values: Vec<f64>,
    pub target: f64,
    /// Where the target comes from (formula or oracle name).
    pub target_note: String,
    /// Absolute threshold used for 𝒩_ε (derived from the relative input).
    pub epsilon: f64,
    pub exceptional: Vec<bool>,
    pub q_profile: Vec<usize>,
    pub density: Vec<f64>,
    pub verdict: Verdict,
    /// Cumulative truncation-mass audit for grid runs.
    pub truncation: Option<Vec<f64>>,
}

impl RatioSeries {
    pub fn final_density(&self) -> f64 {
        self.density.last().copied().unwrap_or(0.0)
    }

    pub fn value_at(&self, n: usize) -> Option<f64> {
        n.checked_sub(self.start_n).and_then(|k| self.values.get(k)).copied()
    }
}

/// 𝒩_ε membership flags, the running count q_n, and the density profile
/// d_n = q_n/n for a series starting at index `start_n`. NaN (undefined)
/// entries are exceptional.
pub fn exceptional_density(
    values: &[f64],
    start_n: usize,
    target: f64,
    epsilon: f64,
) -> (Vec<bool>, Vec<usize>, Vec<f64>) {
    let mut flags = Vec::with_capacity(values.len());
    let mut q = Vec::with_capacity(values.len());
    let mut d = Vec::with_capacity(values.len());
    let mut count = 0usize;
    for (k, &r) in values.iter().enumerate() {
        let exceptional = !r.is_finite() || (r - target).abs() > epsilon;
        if exceptional {
            count += 1;
        }
        flags.push(exceptional);
        q.push(count);
        d.push(count as f64 / (start_n + k) as f64);
    }
    (flags, q, d)
}

/// Converts a relative threshold to the absolute one used for 𝒩_ε.
/// A zero target leaves no scale, so the relative value is used as absolute.
pub fn absolute_epsilon(epsilon_rel: f64, target: f64) -> f64 {
    if target == 0.0 {
        epsilon_rel
    } else {
        epsilon_rel * target.abs()
    }
}

pub fn assemble_series(
    scenario: &str,
    start_n: usize,
    values: Vec<f64>,
    target: f64,
    target_note: &str,
    epsilon_rel: f64,
    verdict_spec: &VerdictSpec,
    truncation: Option<Vec<f64>>,
) -> RatioSeries {
    let epsilon = absolute_epsilon(epsilon_rel, target);
    let (exceptional, q_profile, density) =
        exceptional_density(&values, start_n, target, epsilon);
    let tail_eps = absolute_epsilon(verdict_spec.tail_epsilon_rel, target);
    let mut tail_ok = true;
    let mut tail_liminf_ok = true;
    let mut max_tail_abs_err = 0.0_f64;
    for (k, &r) in values.iter().enumerate() {
        let n = start_n + k;
        if n < verdict_spec.tail_start {
            continue;
        }
        if !r.is_finite() {
            tail_ok = false;
            tail_liminf_ok = false;
            max_tail_abs_err = f64::INFINITY;
            continue;
        }
        let err = (r - target).abs();
        max_tail_abs_err = max_tail_abs_err.max(err);
        if err > tail_eps {
            tail_ok = false;
        }
        if r < target - tail_eps {
            tail_liminf_ok = false;
        }
    }
    let final_density = density.last().copied().unwrap_or(0.0);
    let density_ok = final_density <= verdict_spec.max_density;
    let verdict = Verdict {
        pass: tail_ok && density_ok,
        tail_ok,
        tail_liminf_ok,
        density_ok,
        max_tail_abs_err,
        final_density,
    };
    RatioSeries {
        scenario: scenario.to_string(),
        start_n,
        values,
        target,
        target_note: target_note.to_string(),
        epsilon,
        exceptional,
        q_profile,
        density,
        verdict,
        truncation,
    }
}

/// Signed ratio of two ledgered values; NaN when the denominator vanishes.
fn ledgered_ratio(num: f64, num_ls: f64, den: f64, den_ls: f64) -> f64 {
    if den == 0.0 {
        f64::NAN
    } else if num == 0.0 {
        0.0
    } else {
        let sign = num.signum() * den.signum();
        sign * ((num.abs().ln() + num_ls) - (den.abs().ln() + den_ls)).exp()
    }
}

/// Pointwise ratio series r_n = Pⁿf(x)/Pⁿg(y) with target
/// ν(f)φ(x)/(ν(g)φ(y)), ν = φ⁻¹π.
#[allow(clippy::too_many_arguments)]
pub fn ratio_pointwise(
    scenario: &str,
    f: &WeightedSupport,
    g: &WeightedSupport,
    x: &Element,
    y: &Element,
    v: &WeightedSupport,
    phi: &ExponentialSpec,
    n_max: usize,
    epsilon_rel: f64,
    verdict_spec: &VerdictSpec,
) -> Result<RatioSeries> {
    let nu_g = nu_integral(phi, g)?;
    if nu_g == 0.0 {
        return Err(Error::NullDenominator);
    }
    let nu_f = nu_integral(phi, f)?;
    let target = nu_f * phi.value(x)? / (nu_g * phi.value(y)?);

    let mut fi = PowerIteration::new(f.clone(), v.clone());
    let mut gi = PowerIteration::new(g.clone(), v.clone());
    let mut values = Vec::with_capacity(n_max);
    for _ in 1..=n_max {
        fi.step()?;
        gi.step()?;
        let fc = fi.current();
        let gc = gi.current();
        values.push(ledgered_ratio(
            fc.value(x),
            fc.log_scale,
            gc.value(y),
            gc.log_scale,
        ));
    }
    Ok(assemble_series(
        scenario,
        1,
        values,
        target,
        "nu(f)*phi(x) / (nu(g)*phi(y)) with nu = phi^-1*pi",
        epsilon_rel,
        verdict_spec,
        None,
    ))
}

/// Shift ratio series r_n = Pⁿ⁺ᵐg(y)/Pⁿg(y) with target 1/Rᵐ.
#[allow(clippy::too_many_arguments)]
pub fn ratio_shift(
    scenario: &str,
    g: &WeightedSupport,
    y: &Element,
    m: usize,
    v: &WeightedSupport,
    r: f64,
    n_max: usize,
    epsilon_rel: f64,
    verdict_spec: &VerdictSpec,
) -> Result<RatioSeries> {
    let mut gi = PowerIteration::new(g.clone(), v.clone());
    let mut track: Vec<(f64, f64)> = Vec::with_capacity(n_max + m);
    for _ in 1..=(n_max + m) {
        gi.step()?;
        let gc = gi.current();
        track.push((gc.value(y), gc.log_scale));
    }
    let values: Vec<f64> = (0..n_max)
        .map(|k| {
            let (num, num_ls) = track[k + m];
            let (den, den_ls) = track[k];
            ledgered_ratio(num, num_ls, den, den_ls)
        })
        .collect();
    Ok(assemble_series(
        scenario,
        1,
        values,
        r.powi(-(m as i32)),
        "1/R^m",
        epsilon_rel,
        verdict_spec,
        None,
    ))
}

/// Integrated ratio series (Theorem-2 form): r_n = κ(Pⁿf)/μ(Pⁿg) with target
/// κ(φ)ν(f)/(μ(φ)ν(g)), plus the shifted variant κ(Pⁿ⁺ᵐg)/μ(Pⁿg) with target
/// 1/Rᵐ. The one-sided (liminf) half of the comparison is reported in each
/// verdict as `tail_liminf_ok`.
#[allow(clippy::too_many_arguments)]
pub fn ratio_integrated(
    scenario: &str,
    kappa: &WeightedSupport,
    mu: &WeightedSupport,
    f: &WeightedSupport,
    g: &WeightedSupport,
    m: usize,
    v: &WeightedSupport,
    phi: &ExponentialSpec,
    r: f64,
    n_max: usize,
    epsilon_rel: f64,
    verdict_spec: &VerdictSpec,
) -> Result<(RatioSeries, RatioSeries)> {
    let nu_g = nu_integral(phi, g)?;
    if nu_g == 0.0 {
        return Err(Error::NullDenominator);
    }
    let nu_f = nu_integral(phi, f)?;
    let kappa_phi = {
        let support: Vec<Element> = kappa.support().cloned().collect();
        let phi_f = phi.as_function(&support)?;
        let (raw, ls) = integrate_scaled(kappa, &phi_f);
        raw * ls.exp()
    };
    let mu_phi = {
        let support: Vec<Element> = mu.support().cloned().collect();
        let phi_f = phi.as_function(&support)?;
        let (raw, ls) = integrate_scaled(mu, &phi_f);
        raw * ls.exp()
    };
    let target11 = kappa_phi * nu_f / (mu_phi * nu_g);

    let mut fi = PowerIteration::new(f.clone(), v.clone());
    let mut gi = PowerIteration::new(g.clone(), v.clone());
    let mut num11: Vec<(f64, f64)> = Vec::with_capacity(n_max);
    let mut gk: Vec<(f64, f64)> = Vec::with_capacity(n_max + m); // κ(Pⁿg)
    let mut gm: Vec<(f64, f64)> = Vec::with_capacity(n_max); // μ(Pⁿg)
    for step in 1..=(n_max + m) {
        gi.step()?;
        let gc = gi.current();
        gk.push(integrate_scaled(kappa, gc));
        if step <= n_max {
            gm.push(integrate_scaled(mu, gc));
            fi.step()?;
            num11.push(integrate_scaled(kappa, fi.current()));
        }
    }
    let values11: Vec<f64> = (0..n_max)
        .map(|k| {
            let (num, nls) = num11[k];
            let (den, dls) = gm[k];
            ledgered_ratio(num, nls, den, dls)
        })
        .collect();
    let values12: Vec<f64> = (0..n_max)
        .map(|k| {
            let (num, nls) = gk[k + m];
            let (den, dls) = gm[k];
            ledgered_ratio(num, nls, den, dls)
        })
        .collect();
    let eq11 = assemble_series(
        &format!("{scenario}/integrated"),
        1,
        values11,
        target11,
        "kappa(phi)*nu(f) / (mu(phi)*nu(g))",
        epsilon_rel,
        verdict_spec,
        None,
    );
    let eq12 = assemble_series(
        &format!("{scenario}/integrated-shift"),
        1,
        values12,
        r.powi(-(m as i32)),
        "1/R^m",
        epsilon_rel,
        verdict_spec,
        None,
    );
    Ok((eq11, eq12))
}

/// Twisted-walk ratio series r_n = P̃ⁿf(x)/P̃ⁿg(y) with target π(f)/π(g);
/// the twisted walk has convergence parameter 1 and π itself is invariant.
#[allow(clippy::too_many_arguments)]
pub fn ratio_twisted(
    scenario: &str,
    f: &WeightedSupport,
    g: &WeightedSupport,
    x: &Element,
    y: &Element,
    twisted_law: &WeightedSupport,
    n_max: usize,
    epsilon_rel: f64,
    verdict_spec: &VerdictSpec,
) -> Result<RatioSeries> {
    let haar_integral = |h: &WeightedSupport| -> Result<f64> {
        let mut acc = 0.0;
        for (e, w) in &h.atoms {
            acc += w * h.group.haar_weight(e)?;
        }
        Ok(acc * h.log_scale.exp())
    };
    let pi_g = haar_integral(g)?;
    if pi_g == 0.0 {
        return Err(Error::NullDenominator);
    }
    let target = haar_integral(f)? / pi_g;

    let mut fi = PowerIteration::new(f.clone(), twisted_law.clone());
    let mut gi = PowerIteration::new(g.clone(), twisted_law.clone());
    let mut values = Vec::with_capacity(n_max);
    for _ in 1..=n_max {
        fi.step()?;
        gi.step()?;
        let fc = fi.current();
        let gc = gi.current();
        values.push(ledgered_ratio(
            fc.value(x),
            fc.log_scale,
            gc.value(y),
            gc.log_scale,
        ));
    }
    Ok(assemble_series(
        scenario,
        1,
        values,
        target,
        "pi(f)/pi(g) (counting measure)",
        epsilon_rel,
        verdict_spec,
        None,
    ))
}

/// Exact translation-covariance check. With z = y·x⁻¹ and g_z(u) = g(zu):
/// Pⁿg_z(x) = Pⁿg(y) exactly for all n, ν(g_z) = φ(z)ν(g), and the
/// translated-target formula coincides with the pointwise-ratio target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslationCheck {
    /// max over n ≤ n_max of |Pⁿg_z(x) − Pⁿg(y)| on the renormalized ledgers;
    /// zero when the covariance holds bitwise.
    pub max_abs_diff: f64,
    /// relative error of ν(g_z) against φ(z)ν(g)
    pub nu_translate_residual: f64,
    /// relative gap between the two target formulas
    pub target_residual: f64,
}

pub fn ratio_translation(
    g: &WeightedSupport,
    x: &Element,
    y: &Element,
    v: &WeightedSupport,
    phi: &ExponentialSpec,
    n_max: usize,
) -> Result<TranslationCheck> {
    let group = g.group.clone();
    let z = group.mul(y, &group.inv(x)?)?;
    let z_inv = group.inv(&z)?;
    // g_z(u) = g(zu): the atom of g at s moves to z⁻¹s, value unchanged.
    let mut entries = Vec::with_capacity(g.len());
    for (s, w) in &g.atoms {
        entries.push((group.mul(&z_inv, s)?, *w));
    }
    let g_z = WeightedSupport::function(group.clone(), &entries)?;

    let mut left = PowerIteration::new(g_z.clone(), v.clone());
    let mut right = PowerIteration::new(g.clone(), v.clone());
    let mut max_abs_diff = 0.0_f64;
    for _ in 1..=n_max {
        left.step()?;
        right.step()?;
        let lv = left.current().value(x);
        let rv = right.current().value(y);
        max_abs_diff = max_abs_diff.max((lv - rv).abs());
        let ls_diff = (left.current().log_scale - right.current().log_scale).abs();
        max_abs_diff = max_abs_diff.max(ls_diff);
    }

    let nu_g = nu_integral(phi, g)?;
    let nu_gz = nu_integral(phi, &g_z)?;
    let expected = phi.value(&z)? * nu_g;
    let nu_translate_residual = (nu_gz - expected).abs() / expected.abs().max(1e-300);

    // The pointwise-ratio target φ(x)/φ(y) (f = g, the ν's cancel) against
    // the translated route ν(g)/ν(g_z): the same number through two sums.
    let target_eq4 = phi.value(x)? / phi.value(y)?;
    let target_eq10 = nu_g / nu_gz;
    let target_residual =
        (target_eq4 - target_eq10).abs() / target_eq4.abs().max(1e-300);

    Ok(TranslationCheck {
        max_abs_diff,
        nu_translate_residual,
        target_residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    ConditionA,
    SmallDomination,
}

/// A verified feasibility witness: either (j, γ) with vʲ ≥ γ(fπ) atomwise, or
/// (m, a) with a·(g-mass transported m steps) ≥ f atomwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionWitness {
    pub kind: WitnessKind,
    /// j (convolution power) or m (transport steps)
    pub steps: usize,
    /// γ (largest) or a (smallest)
    pub coefficient: f64,
    /// min over the support of the verified inequality slack; ≥ 0 up to
    /// float rounding by construction
    pub margin: f64,
}

/// Smallest j ≤ j_max and largest γ with vʲ({x}) ≥ γ·f(x)·haar(x) for all x
/// in supp(f). Exhausting j_max is "not witnessed", not a disproof.
pub fn check_condition_a(
    v: &WeightedSupport,
    f: &WeightedSupport,
    j_max: usize,
) -> Result<ConditionWitness> {
    let group = v.group.clone();
    let mut power = v.clone();
    for j in 1..=j_max {
        if j > 1 {
            power = convolve(&power, v)?;
        }
        let mut gamma = f64::INFINITY;
        let mut covered = true;
        for (x, fw) in &f.atoms {
            if *fw <= 0.0 {
                continue;
            }
            let bound = power.value(x) * power.log_scale.exp();
            let density = fw * group.haar_weight(x)?;
            if bound <= 0.0 {
                covered = false;
                break;
            }
            gamma = gamma.min(bound / density);
        }
        if covered && gamma.is_finite() {
            let mut margin = f64::INFINITY;
            for (x, fw) in &f.atoms {
                if *fw <= 0.0 {
                    continue;
                }
                let slack = power.value(x) * power.log_scale.exp()
                    - gamma * fw * group.haar_weight(x)?;
                margin = margin.min(slack);
            }
            return Ok(ConditionWitness {
                kind: WitnessKind::ConditionA,
                steps: j,
                coefficient: gamma,
                margin,
            });
        }
    }
    Err(Error::NotWitnessed { bound: j_max })
}

/// Smallest m ≥ 1 ≤ m_max and minimal a such that a times the m-step mass
/// transport of g covers f atomwise: a·(g ∗ vᵐ)(x) ≥ f(x) on supp(f).
/// Treating g as an initial mass and pushing it m steps along the walk is the
/// measure-side domination that the small-function witnesses reduce to on
/// discrete groups. f = 0 is witnessed trivially by (m, a) = (1, 0).
pub fn check_small_domination(
    f: &WeightedSupport,
    g: &WeightedSupport,
    v: &WeightedSupport,
    m_max: usize,
) -> Result<ConditionWitness> {
    if f.atoms.values().all(|&w| w == 0.0) {
        return Ok(ConditionWitness {
            kind: WitnessKind::SmallDomination,
            steps: 1,
            coefficient: 0.0,
            margin: 0.0,
        });
    }
    let mut transported = g.clone();
    for m in 1..=m_max {
        transported = convolve(&transported, v)?;
        let mut a = 0.0_f64;
        let mut covered = true;
        for (x, fw) in &f.atoms {
            if *fw <= 0.0 {
                continue;
            }
            let t = transported.value(x) * transported.log_scale.exp();
            if t <= 0.0 {
                covered = false;
                break;
            }
            a = a.max(fw / t);
        }
        if covered {
            let mut margin = f64::INFINITY;
            for (x, fw) in &f.atoms {
                if *fw <= 0.0 {
                    continue;
                }
                let slack =
                    a * transported.value(x) * transported.log_scale.exp() - fw;
                margin = margin.min(slack);
            }
            return Ok(ConditionWitness {
                kind: WitnessKind::SmallDomination,
                steps: m,
                coefficient: a,
                margin,
            });
        }
    }
    Err(Error::NotWitnessed { bound: m_max })
}
