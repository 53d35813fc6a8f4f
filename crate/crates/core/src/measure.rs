//! Weighted-atom representation of laws, measures, and compactly supported
//! functions, plus the transition-operator machinery built on them.
//!
//! A [`WeightedSupport`] is a finite map element → weight together with a
//! log-scale offset. With role `Measure` the weights are atom masses (Haar
//! weighting folded in at construction); with role `Function` they are
//! pointwise values. Both integrals κ(Pⁿf) and π(φ⁻¹f) are then one-line
//! dot products.
//!
//! The transition operator of the walk with law v acts by
//! Pf(x) = ∫ f(xy) v(dy), computed by direct summation on discrete groups.
//! Long iterations renormalize the max atom to 1 each step and fold the
//! factor into the log-scale ledger: with R ≈ 1.12 the raw values at
//! n = 2000 are around e⁻²²⁶, and every ratio-limit statement is scale-free,
//! so only the ledger needs to be exact.
//!
//! Grid-lie (affine) supports are rejected here; the quadrature path in
//! [`crate::grid`] replaces atom convolution on that group.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpace};

/// Default cap on atom counts. Exceeding the budget is an error, never a
/// silent pruning: pruned tails would corrupt ratio series invisibly.
pub const DEFAULT_SUPPORT_BUDGET: usize = 5_000_000;

/// Tolerance on Σ masses for a probability law.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Measure,
    Function,
}

/// A finite collection of (element, weight) atoms with a log-scale offset.
#[derive(Clone, Debug)]
pub struct WeightedSupport {
    pub group: GroupSpace,
    pub role: Role,
    pub atoms: BTreeMap<Element, f64>,
    /// Cumulative renormalization exponent, base e: the represented object is
    /// e^{log_scale} · atoms.
    pub log_scale: f64,
    pub nonnegative: bool,
    pub budget: usize,
}

impl WeightedSupport {
    pub fn new(group: GroupSpace, role: Role, entries: &[(Element, f64)]) -> Result<Self> {
        let mut atoms = BTreeMap::new();
        for (x, w) in entries {
            group.validate(x)?;
            if *w != 0.0 {
                *atoms.entry(x.clone()).or_insert(0.0) += w;
            }
        }
        if atoms.len() > DEFAULT_SUPPORT_BUDGET {
            return Err(Error::BudgetExceeded {
                required: atoms.len(),
                budget: DEFAULT_SUPPORT_BUDGET,
                step: None,
            });
        }
        let nonnegative = atoms.values().all(|&w| w >= 0.0);
        Ok(WeightedSupport {
            group,
            role,
            atoms,
            log_scale: 0.0,
            nonnegative,
            budget: DEFAULT_SUPPORT_BUDGET,
        })
    }

    pub fn measure(group: GroupSpace, entries: &[(Element, f64)]) -> Result<Self> {
        Self::new(group, Role::Measure, entries)
    }

    pub fn function(group: GroupSpace, entries: &[(Element, f64)]) -> Result<Self> {
        Self::new(group, Role::Function, entries)
    }

    /// A probability law: measure with total mass 1 within `PROBABILITY_TOLERANCE`.
    pub fn probability(group: GroupSpace, entries: &[(Element, f64)]) -> Result<Self> {
        let m = Self::measure(group, entries)?;
        let mass = m.mass();
        if (mass - 1.0).abs() > PROBABILITY_TOLERANCE {
            return Err(Error::NotProbability { mass });
        }
        Ok(m)
    }

    /// Point mass at `x`.
    pub fn dirac(group: GroupSpace, x: &Element) -> Result<Self> {
        Self::measure(group, &[(x.clone(), 1.0)])
    }

    /// Indicator function of a finite set.
    pub fn indicator(group: GroupSpace, support: &[Element]) -> Result<Self> {
        let entries: Vec<(Element, f64)> =
            support.iter().map(|x| (x.clone(), 1.0)).collect();
        Self::function(group, &entries)
    }

    pub fn value(&self, x: &Element) -> f64 {
        self.atoms.get(x).copied().unwrap_or(0.0)
    }

    /// Total of the raw weights times the scale factor.
    pub fn mass(&self) -> f64 {
        self.raw_mass() * self.log_scale.exp()
    }

    pub fn raw_mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.atoms.keys()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Scales the raw atoms so the largest magnitude is 1, folding the factor
    /// into the ledger. No-op on an empty or all-zero support.
    pub fn renormalize(&mut self) {
        let max = self
            .atoms
            .values()
            .fold(0.0_f64, |acc, &w| acc.max(w.abs()));
        if max > 0.0 && max != 1.0 {
            for w in self.atoms.values_mut() {
                *w /= max;
            }
            self.log_scale += max.ln();
        }
    }

    /// Pointwise scaling by a positive constant (exact for powers of two).
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for w in out.atoms.values_mut() {
            *w *= c;
        }
        out.nonnegative = self.nonnegative && c >= 0.0;
        out
    }

    /// log(value at x) + ledger, or None when the value is not positive.
    pub fn log_value(&self, x: &Element) -> Option<f64> {
        let v = self.value(x);
        if v > 0.0 {
            Some(v.ln() + self.log_scale)
        } else {
            None
        }
    }

    fn require_discrete(&self) -> Result<()> {
        if self.group.is_discrete() {
            Ok(())
        } else {
            Err(Error::GridKindUnsupported)
        }
    }
}

/// Convolution of finite measures: (μ*ν)(z) = Σ_{xy=z} μ(x)ν(y).
/// Log-scale offsets add; masses multiply.
pub fn convolve(mu: &WeightedSupport, nu: &WeightedSupport) -> Result<WeightedSupport> {
    if mu.group != nu.group {
        return Err(Error::MismatchedGroups);
    }
    mu.require_discrete()?;
    let group = &mu.group;
    let budget = mu.budget.min(nu.budget);

    // Enumerate the product support, then accumulate per target atom in a
    // fixed order so results are deterministic.
    let mut candidates: BTreeSet<Element> = BTreeSet::new();
    for x in mu.support() {
        for y in nu.support() {
            candidates.insert(group.mul(x, y)?);
            if candidates.len() > budget {
                return Err(Error::BudgetExceeded {
                    required: candidates.len(),
                    budget,
                    step: None,
                });
            }
        }
    }
    let mut atoms = BTreeMap::new();
    for z in candidates {
        let mut acc = 0.0;
        for (y, wy) in &nu.atoms {
            let x = group.mul(&z, &group.inv(y)?)?;
            if let Some(wx) = mu.atoms.get(&x) {
                acc += wx * wy;
            }
        }
        if acc != 0.0 {
            atoms.insert(z, acc);
        }
    }
    Ok(WeightedSupport {
        group: group.clone(),
        role: Role::Measure,
        atoms,
        log_scale: mu.log_scale + nu.log_scale,
        nonnegative: mu.nonnegative && nu.nonnegative,
        budget,
    })
}

/// One application of the transition operator: Pf(x) = Σ_y f(xy) v({y}).
///
/// The per-atom sum runs over the law's atoms in their canonical order, so
/// translates of `f` produce bitwise-identical translated outputs.
pub fn apply_p(f: &WeightedSupport, v: &WeightedSupport) -> Result<WeightedSupport> {
    if f.group != v.group {
        return Err(Error::MismatchedGroups);
    }
    f.require_discrete()?;
    let mass = v.mass();
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::NotProbability { mass });
    }
    let group = &f.group;
    let budget = f.budget.min(v.budget);

    let mut candidates: BTreeSet<Element> = BTreeSet::new();
    for z in f.support() {
        for y in v.support() {
            candidates.insert(group.mul(z, &group.inv(y)?)?);
            if candidates.len() > budget {
                return Err(Error::BudgetExceeded {
                    required: candidates.len(),
                    budget,
                    step: None,
                });
            }
        }
    }
    let mut atoms = BTreeMap::new();
    for x in candidates {
        let mut acc = 0.0;
        for (y, wy) in &v.atoms {
            let xy = group.mul(&x, y)?;
            if let Some(fv) = f.atoms.get(&xy) {
                acc += fv * wy;
            }
        }
        if acc != 0.0 {
            atoms.insert(x, acc);
        }
    }
    Ok(WeightedSupport {
        group: group.clone(),
        role: Role::Function,
        atoms,
        log_scale: f.log_scale + v.log_scale,
        nonnegative: f.nonnegative && v.nonnegative,
        budget,
    })
}

/// Streaming renormalized power iteration: yields P¹f, P²f, … one at a time
/// with the max atom scaled to 1 after each step. Underflow-free for n well
/// past 10⁴; the ratio of any two entries equals the unnormalized ratio
/// because the common ledger factor cancels.
pub struct PowerIteration {
    current: WeightedSupport,
    law: WeightedSupport,
    steps_done: usize,
}

impl PowerIteration {
    pub fn new(f: WeightedSupport, law: WeightedSupport) -> Self {
        PowerIteration {
            current: f,
            law,
            steps_done: 0,
        }
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    pub fn current(&self) -> &WeightedSupport {
        &self.current
    }

    pub fn step(&mut self) -> Result<&WeightedSupport> {
        let mut next = apply_p(&self.current, &self.law).map_err(|e| match e {
            Error::BudgetExceeded {
                required, budget, ..
            } => Error::BudgetExceeded {
                required,
                budget,
                step: Some(self.steps_done + 1),
            },
            other => other,
        })?;
        next.renormalize();
        self.current = next;
        self.steps_done += 1;
        Ok(&self.current)
    }
}

/// P¹f … Pⁿf with per-step renormalization. Materializes the whole sequence;
/// use [`PowerIteration`] directly when only running extracts are needed.
pub fn iterate_p(
    f: &WeightedSupport,
    v: &WeightedSupport,
    n: usize,
) -> Result<Vec<WeightedSupport>> {
    let mut iter = PowerIteration::new(f.clone(), v.clone());
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        iter.step()?;
        out.push(iter.current.clone());
    }
    Ok(out)
}

/// κ(f) = Σ κ({x}) f(x), including both ledgers.
pub fn integrate(kappa: &WeightedSupport, f: &WeightedSupport) -> f64 {
    let (raw, ls) = integrate_scaled(kappa, f);
    raw * ls.exp()
}

/// The dot product in mantissa/exponent form: (Σ κ({x})f(x), combined ledger).
pub fn integrate_scaled(kappa: &WeightedSupport, f: &WeightedSupport) -> (f64, f64) {
    let (small, large) = if kappa.len() <= f.len() {
        (kappa, f)
    } else {
        (f, kappa)
    };
    let mut acc = 0.0;
    for (x, w) in &small.atoms {
        if let Some(v) = large.atoms.get(x) {
            acc += w * v;
        }
    }
    (acc, kappa.log_scale + f.log_scale)
}

/// Exact return probabilities P(Xₙ = e) for the lazy simple random walk on
/// F_k, via the radial birth–death chain on word length: from length ℓ ≥ 1
/// the walk goes up with probability (1−s)(2k−1)/(2k), down with (1−s)/(2k),
/// holds with s; from length 0 it goes up with probability 1−s.
///
/// Dense convolution on F_k is infeasible past a handful of steps (the
/// support grows like (2k−1)ⁿ); word length is a lumpable coordinate, so the
/// radial chain gives vⁿ(e) exactly at O(n²) cost.
pub fn radial_return_probabilities(rank: usize, laziness: f64, n: usize) -> Vec<f64> {
    assert!(rank >= 1, "free group rank must be at least 1");
    assert!((0.0..1.0).contains(&laziness));
    let two_k = (2 * rank) as f64;
    let up_from_zero = 1.0 - laziness;
    let up = (1.0 - laziness) * (two_k - 1.0) / two_k;
    let down = (1.0 - laziness) / two_k;

    let mut dist = vec![0.0_f64; n + 2];
    dist[0] = 1.0;
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    let mut reach = 0usize;
    for _ in 1..=n {
        let mut next = vec![0.0_f64; n + 2];
        next[0] = laziness * dist[0] + down * dist[1];
        let top = (reach + 1).min(n);
        for l in 1..=top {
            let from_below = if l == 1 { up_from_zero } else { up };
            next[l] = from_below * dist[l - 1] + laziness * dist[l] + down * dist[l + 1];
        }
        reach = top;
        dist = next;
        out.push(dist[0]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Element, GroupSpace};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn z() -> GroupSpace {
        GroupSpace::Lattice { dim: 1 }
    }

    /// The lazy biased walk used throughout: q=0.2 at −1, s=0.2 at 0, p=0.6 at +1.
    fn biased_law() -> WeightedSupport {
        WeightedSupport::probability(
            z(),
            &[
                (Element::lattice(&[-1]), 0.2),
                (Element::lattice(&[0]), 0.2),
                (Element::lattice(&[1]), 0.6),
            ],
        )
        .unwrap()
    }

    #[test]
    fn dirac_convolution_is_identity() {
        let v = biased_law();
        let delta = WeightedSupport::dirac(z(), &Element::lattice(&[0])).unwrap();
        let conv = convolve(&delta, &v).unwrap();
        assert_eq!(conv.atoms, v.atoms);
    }

    #[test]
    fn two_step_return_probability_matches_enumeration() {
        // Oracle: enumerate all ordered pairs of steps summing to zero.
        let steps = [(-1i64, 0.2f64), (0, 0.2), (1, 0.6)];
        let mut oracle = 0.0f64;
        for (a, wa) in steps {
            for (b, wb) in steps {
                if a + b == 0 {
                    oracle += wa * wb;
                }
            }
        }
        assert!((oracle - 0.28).abs() < 1e-15);

        let v = biased_law();
        let v2 = convolve(&v, &v).unwrap();
        assert!((v2.value(&Element::lattice(&[0])) - oracle).abs() < 1e-15);
    }

    #[test]
    fn convolution_mass_is_multiplicative() {
        let mu = WeightedSupport::measure(
            z(),
            &[(Element::lattice(&[0]), 0.3), (Element::lattice(&[2]), 0.5)],
        )
        .unwrap();
        let nu = biased_law();
        let conv = convolve(&mu, &nu).unwrap();
        assert!((conv.mass() - mu.mass() * nu.mass()).abs() < 1e-14);
    }

    #[test]
    fn convolution_associativity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let mut triple = Vec::new();
            for _ in 0..3 {
                let entries: Vec<(Element, f64)> = (0..4)
                    .map(|_| {
                        (
                            Element::lattice(&[rng.gen_range(-4..=4)]),
                            rng.gen_range(0.05..1.0),
                        )
                    })
                    .collect();
                triple.push(WeightedSupport::measure(z(), &entries).unwrap());
            }
            let left = convolve(&convolve(&triple[0], &triple[1]).unwrap(), &triple[2]).unwrap();
            let right = convolve(&triple[0], &convolve(&triple[1], &triple[2]).unwrap()).unwrap();
            for (x, w) in &left.atoms {
                assert!((w - right.value(x)).abs() <= 1e-12);
            }
            assert_eq!(left.len(), right.len());
        }
    }

    #[test]
    fn apply_p_on_constant_window() {
        let v = biased_law();
        let window: Vec<Element> = (-10..=10).map(|i| Element::lattice(&[i])).collect();
        let f = WeightedSupport::indicator(z(), &window).unwrap();
        let pf = apply_p(&f, &v).unwrap();
        for i in -9..=9 {
            assert!((pf.value(&Element::lattice(&[i])) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn apply_p_single_atom() {
        let v = biased_law();
        let f = WeightedSupport::indicator(z(), &[Element::lattice(&[0])]).unwrap();
        let pf = apply_p(&f, &v).unwrap();
        assert!((pf.value(&Element::lattice(&[0])) - 0.2).abs() < 1e-15);
        // Pf(x) = v({-x})
        assert!((pf.value(&Element::lattice(&[1])) - 0.2).abs() < 1e-15);
        assert!((pf.value(&Element::lattice(&[-1])) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn apply_p_is_linear_and_positive() {
        let v = biased_law();
        let f = WeightedSupport::function(
            z(),
            &[(Element::lattice(&[0]), 1.5), (Element::lattice(&[2]), 0.25)],
        )
        .unwrap();
        let g = WeightedSupport::function(
            z(),
            &[(Element::lattice(&[0]), 0.5), (Element::lattice(&[-1]), 2.0)],
        )
        .unwrap();
        let alpha = 2.0;
        let beta = 0.5;
        let mut combo_atoms: Vec<(Element, f64)> = Vec::new();
        for (x, w) in &f.atoms {
            combo_atoms.push((x.clone(), alpha * w));
        }
        for (x, w) in &g.atoms {
            combo_atoms.push((x.clone(), beta * w));
        }
        let combo = WeightedSupport::function(z(), &combo_atoms).unwrap();
        let lhs = apply_p(&combo, &v).unwrap();
        let pf = apply_p(&f, &v).unwrap();
        let pg = apply_p(&g, &v).unwrap();
        for (x, w) in &lhs.atoms {
            let rhs = alpha * pf.value(x) + beta * pg.value(x);
            assert!((w - rhs).abs() <= 1e-15 * rhs.abs().max(1.0));
        }
        assert!(pf.nonnegative && pg.nonnegative);
        assert!(pf.atoms.values().all(|&w| w >= 0.0));
    }

    #[test]
    fn iterate_matches_single_application() {
        let v = biased_law();
        let f = WeightedSupport::indicator(z(), &[Element::lattice(&[0])]).unwrap();
        let seq = iterate_p(&f, &v, 1).unwrap();
        let mut direct = apply_p(&f, &v).unwrap();
        direct.renormalize();
        assert_eq!(seq[0].atoms, direct.atoms);
        assert_eq!(seq[0].log_scale, direct.log_scale);
    }

    #[test]
    fn support_grows_by_at_most_two_per_step() {
        let v = biased_law();
        let f = WeightedSupport::indicator(z(), &[Element::lattice(&[0])]).unwrap();
        let seq = iterate_p(&f, &v, 30).unwrap();
        let mut prev = 1usize;
        for step in &seq {
            assert!(step.len() <= prev + 2);
            prev = step.len();
        }
    }

    #[test]
    fn renormalized_ratios_equal_unnormalized_ratios() {
        let v = biased_law();
        let f = WeightedSupport::indicator(z(), &[Element::lattice(&[0])]).unwrap();
        // Unnormalized chain, safe for small n.
        let mut raw = f.clone();
        let mut raws = Vec::new();
        for _ in 0..10 {
            raw = apply_p(&raw, &v).unwrap();
            raws.push(raw.clone());
        }
        let seq = iterate_p(&f, &v, 10).unwrap();
        let x = Element::lattice(&[1]);
        let y = Element::lattice(&[0]);
        for (renorm, raw) in seq.iter().zip(&raws) {
            let lhs = renorm.value(&x) / renorm.value(&y);
            let rhs = raw.value(&x) / raw.value(&y);
            assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn operator_power_equals_convolution_power() {
        // Pⁿf(x) = Σ_y f(xy) vⁿ({y}) to 1e-10 relative, n ≤ 12.
        let v = biased_law();
        let f = WeightedSupport::function(
            z(),
            &[(Element::lattice(&[0]), 1.0), (Element::lattice(&[3]), 0.5)],
        )
        .unwrap();
        let mut vn = v.clone();
        let mut pf = f.clone();
        for _ in 0..12 {
            pf = apply_p(&pf, &v).unwrap();
        }
        for _ in 1..12 {
            vn = convolve(&vn, &v).unwrap();
        }
        for x in -14..=14 {
            let xe = Element::lattice(&[x]);
            let mut direct = 0.0;
            for (y, wy) in &vn.atoms {
                let xy = z().mul(&xe, y).unwrap();
                direct += f.value(&xy) * wy;
            }
            let got = pf.value(&xe);
            assert!(
                (got - direct).abs() <= 1e-10 * direct.abs().max(1e-30),
                "x={x}: {got} vs {direct}"
            );
        }
    }

    #[test]
    fn underflow_free_iteration_to_ten_thousand() {
        let v = biased_law();
        let f = WeightedSupport::indicator(z(), &[Element::lattice(&[0])]).unwrap();
        let mut iter = PowerIteration::new(f, v);
        for _ in 0..10_000 {
            iter.step().unwrap();
        }
        let max = iter
            .current()
            .atoms
            .values()
            .fold(0.0_f64, |a, &w| a.max(w));
        assert!((max - 1.0).abs() < 1e-12);
        assert!(iter.current().log_scale.is_finite());
        assert!(iter.current().atoms.values().all(|w| w.is_finite()));
    }

    #[test]
    fn integrate_examples() {
        let f = WeightedSupport::function(
            z(),
            &[(Element::lattice(&[0]), 4.0), (Element::lattice(&[1]), 2.0)],
        )
        .unwrap();
        let delta = WeightedSupport::dirac(z(), &Element::lattice(&[1])).unwrap();
        assert!((integrate(&delta, &f) - 2.0).abs() < 1e-15);

        // counting measure of an indicator window
        let window: Vec<Element> = (0..7).map(|i| Element::lattice(&[i])).collect();
        let pi = WeightedSupport::measure(
            z(),
            &window.iter().map(|x| (x.clone(), 1.0)).collect::<Vec<_>>(),
        )
        .unwrap();
        let ind = WeightedSupport::indicator(z(), &window).unwrap();
        assert!((integrate(&pi, &ind) - 7.0).abs() < 1e-15);

        // κ = ½(δ₀+δ₁), φ(x) = (1/3)^{x/2}: κ(φ) = ½(1 + 3^{-1/2})
        let kappa = WeightedSupport::measure(
            z(),
            &[(Element::lattice(&[0]), 0.5), (Element::lattice(&[1]), 0.5)],
        )
        .unwrap();
        let phi = WeightedSupport::function(
            z(),
            &[
                (Element::lattice(&[0]), 1.0),
                (Element::lattice(&[1]), (1.0f64 / 3.0).sqrt()),
            ],
        )
        .unwrap();
        assert!((integrate(&kappa, &phi) - 0.7886751345948129).abs() < 1e-12);
    }

    #[test]
    fn radial_chain_small_cases() {
        let probs = radial_return_probabilities(2, 0.5, 2);
        assert_eq!(probs[0], 1.0);
        assert!((probs[1] - 0.5).abs() < 1e-15);
        // hold·hold + up·down = 1/4 + 1/2·1/8
        assert!((probs[2] - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn radial_chain_matches_dense_free_group_convolution() {
        // Exact cross-check against dense convolution on F₂ for n ≤ 8.
        let rank = 2;
        let laziness = 0.5;
        let f2 = GroupSpace::Free { rank };
        let step = (1.0 - laziness) / (2.0 * rank as f64);
        let mut entries = vec![(Element::word(&[]), laziness)];
        for g in 1..=rank as i32 {
            entries.push((Element::word(&[g]), step));
            entries.push((Element::word(&[-g]), step));
        }
        let v = WeightedSupport::probability(f2.clone(), &entries).unwrap();
        let radial = radial_return_probabilities(rank, laziness, 8);
        let mut vn = v.clone();
        let e = Element::word(&[]);
        for n in 1..=8 {
            if n > 1 {
                vn = convolve(&vn, &v).unwrap();
            }
            assert!(
                (vn.value(&e) - radial[n]).abs() <= 1e-12,
                "n={n}: dense {} vs radial {}",
                vn.value(&e),
                radial[n]
            );
        }
    }

    #[test]
    fn budget_exceeded_reports_requirement() {
        let mut mu = WeightedSupport::measure(
            z(),
            &(0..40)
                .map(|i| (Element::lattice(&[i]), 1.0))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        mu.budget = 50;
        let nu = mu.clone();
        match convolve(&mu, &nu) {
            Err(Error::BudgetExceeded { required, budget, .. }) => {
                assert!(required > 50);
                assert_eq!(budget, 50);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn grid_kind_is_rejected() {
        let spec = crate::group::GridAffineSpec {
            levels_per_side: 2,
            a_step: 1.0,
            b_step: 1.0,
            b_halfwidth_steps: 4,
        };
        let g = GroupSpace::GridAffine(spec);
        let e = g.identity();
        let mu = WeightedSupport::measure(g.clone(), &[(e.clone(), 1.0)]).unwrap();
        assert!(matches!(
            convolve(&mu, &mu),
            Err(Error::GridKindUnsupported)
        ));
        let f = WeightedSupport::function(g, &[(e, 1.0)]).unwrap();
        assert!(matches!(apply_p(&f, &mu), Err(Error::GridKindUnsupported)));
    }
}
