//! Scalar systems gamma(S, T; lambda) over a finite weight window: the
//! construction from a regular toric parameter, the six-axiom verification
//! suite, expansion from singleton data, the projective-line solver, and the
//! classification map back to the toric parameter (quantum and classical).

use crate::rootdata::{type_a_root, RootDataError, RootSystem, ToricPoint, TupleWeight};
use crate::scalar::{bracket_ratio, q_integer, LaurentScalar, ProjParam, ScalarError};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("chi is not regular: {0:?}")]
    NotRegular(Vec<String>),
    #[error("recovered parameters are not multiplicative at ({0}, {1}, {2})")]
    NotMultiplicative(usize, usize, usize),
    #[error("axiom verification failed: {0}")]
    AxiomFailure(String),
    #[error("two samples disagree for the same bracket index: {0}")]
    InconsistentSequence(String),
    #[error("the recurrence z_n + 1/z_{{n+1}} = [2] fails at n = {0}")]
    RecurrenceViolated(i64),
    #[error("singleton data violates the axioms: {0}")]
    InconsistentSingletons(String),
    #[error("no entries available for the pair ({0}, {1})")]
    MissingPair(usize, usize),
    #[error("zero value in a scalar system entry")]
    ZeroEntry,
    #[error("root data error: {0}")]
    RootData(#[from] RootDataError),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaMode {
    Quantum,
    Classical,
}

/// A finite table gamma(S, T; lambda) for disjoint nonempty subsets of
/// {1..n} and lambda in a translation-window of integral weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarSystem {
    pub n: usize,
    pub mode: GammaMode,
    window: BTreeSet<TupleWeight>,
    entries: BTreeMap<(u32, u32, TupleWeight), LaurentScalar>,
}

/// The rectangular weight window: all classes of tuples with coordinates in
/// [-bound, bound].
pub fn weight_window(n: usize, bound: i64) -> BTreeSet<TupleWeight> {
    let mut out = BTreeSet::new();
    let mut stack = vec![Vec::<i64>::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            out.insert(TupleWeight::canonical(prefix));
            continue;
        }
        for c in -bound..=bound {
            let mut v = prefix.clone();
            v.push(c);
            stack.push(v);
        }
    }
    out
}

fn mask_of(indices: &[usize]) -> u32 {
    indices.iter().fold(0u32, |acc, &i| acc | (1 << (i - 1)))
}

fn indices_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask & (1 << b) != 0).map(|b| b + 1).collect()
}

/// All (S, T) index pairs: disjoint, nonempty, |S| + |T| <= n.
pub fn subset_pairs(n: usize) -> Vec<(u32, u32)> {
    let full = (1u32 << n) - 1;
    let mut out = Vec::new();
    for s in 1..=full {
        for t in 1..=full {
            if t & s != 0 {
                continue;
            }
            if (s | t).count_ones() as usize > n {
                continue;
            }
            out.push((s, t));
        }
    }
    out
}

impl ScalarSystem {
    pub fn new(
        n: usize,
        mode: GammaMode,
        window: BTreeSet<TupleWeight>,
        entries: BTreeMap<(u32, u32, TupleWeight), LaurentScalar>,
    ) -> Self {
        ScalarSystem { n, mode, window, entries }
    }

    pub fn window(&self) -> &BTreeSet<TupleWeight> {
        &self.window
    }

    pub fn entry(&self, s: u32, t: u32, lambda: &TupleWeight) -> Option<LaurentScalar> {
        self.entries.get(&(s, t, lambda.clone())).cloned()
    }

    pub fn set_entry(&mut self, s: u32, t: u32, lambda: TupleWeight, value: LaurentScalar) {
        self.entries.insert((s, t, lambda), value);
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32, TupleWeight), &LaurentScalar)> {
        self.entries.iter()
    }

    fn two(&self) -> LaurentScalar {
        match self.mode {
            GammaMode::Quantum => q_integer(2),
            GammaMode::Classical => LaurentScalar::from_int(2),
        }
    }

    fn three(&self) -> LaurentScalar {
        match self.mode {
            GammaMode::Quantum => q_integer(3),
            GammaMode::Classical => LaurentScalar::from_int(3),
        }
    }
}

// ---------------------------------------------------------------------------
// Construction from a toric parameter
// ---------------------------------------------------------------------------

/// The singleton value gamma(i, j; lambda) of the parameter chi:
/// [(lambda, e_i - e_j) - 1; chi_{2(e_i - e_j)}] / [(lambda, e_i - e_j); ...].
pub fn gamma_singleton(
    chi: &ToricPoint,
    n: usize,
    i: usize,
    j: usize,
    lambda: &TupleWeight,
) -> Result<LaurentScalar, ClassifyError> {
    let root = type_a_root(n, i, j);
    let m = lambda.pair_eij(i, j);
    let chi_at = chi.entry(&root);
    bracket_ratio(m - 1, m, &chi_at, 1).map_err(|_| ClassifyError::ZeroEntry)
}

/// Build the scalar system of a regular toric parameter on the given window:
/// singletons from the bracket ratio, general entries by the product formula
/// gamma(S, T; lambda) = prod_{i in S, j in T} gamma(i, j; lambda + [e_T] - [e_j]).
pub fn gamma_from_toric(
    rs: &RootSystem,
    chi: &ToricPoint,
    window: &BTreeSet<TupleWeight>,
    n: usize,
) -> Result<ScalarSystem, ClassifyError> {
    let report = chi.validate(rs, true);
    if !report.ok {
        let mut all = report.cocycle_violations;
        all.extend(report.regularity_violations);
        return Err(ClassifyError::NotRegular(all));
    }
    let mut entries = BTreeMap::new();
    for &(s, t) in &subset_pairs(n) {
        for lambda in window {
            let value = gamma_pair_product(chi, n, s, t, lambda)?;
            entries.insert((s, t, lambda.clone()), value);
        }
    }
    Ok(ScalarSystem { n, mode: GammaMode::Quantum, window: window.clone(), entries })
}

fn gamma_pair_product(
    chi: &ToricPoint,
    n: usize,
    s: u32,
    t: u32,
    lambda: &TupleWeight,
) -> Result<LaurentScalar, ClassifyError> {
    let mut value = LaurentScalar::one();
    let shifted_base = lambda.add_indicator(t);
    for i in indices_of(s) {
        for j in indices_of(t) {
            let mu = shifted_base.sub_indicator(mask_of(&[j]));
            value = &value * &gamma_singleton(chi, n, i, j, &mu)?;
        }
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Axiom verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomReport {
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    fn record(&mut self, outcome: Option<bool>, witness: impl FnOnce() -> String) {
        match outcome {
            None => self.skipped += 1,
            Some(true) => self.passed += 1,
            Some(false) => {
                self.failed += 1;
                if self.violations.len() < 32 {
                    self.violations.push(witness());
                }
            }
        }
    }
}

/// Verify the six defining axioms plus the derived product and translation
/// identities on every in-window instance; instances whose shifted weight
/// leaves the window are counted as skipped.
pub fn verify_scalar_axioms(gamma: &ScalarSystem) -> AxiomReport {
    let n = gamma.n;
    let mut report = AxiomReport::default();
    let two = gamma.two();
    let three = gamma.three();
    let pairs = subset_pairs(n);
    let singles: Vec<usize> = (1..=n).collect();

    for lambda in &gamma.window {
        // (i) inversion: gamma(S,T;lambda) gamma(T,S;lambda - [e_S]) = 1.
        for &(s, t) in &pairs {
            let outcome = (|| {
                let a = gamma.entry(s, t, lambda)?;
                let b = gamma.entry(t, s, &lambda.sub_indicator(s))?;
                Some((&a * &b).is_one())
            })();
            report.record(outcome, || {
                format!(
                    "axiom i at S={:?} T={:?} lambda={:?}",
                    indices_of(s),
                    indices_of(t),
                    lambda
                )
            });
        }
        // (v) pair sum.
        for &i in &singles {
            for &j in &singles {
                if i == j {
                    continue;
                }
                let (si, sj) = (mask_of(&[i]), mask_of(&[j]));
                let outcome = (|| {
                    let a = gamma.entry(si, sj, lambda)?;
                    let b = gamma.entry(sj, si, lambda)?;
                    Some(&a + &b == two)
                })();
                report.record(outcome, || format!("axiom v at ({}, {}) lambda={:?}", i, j, lambda));
            }
        }
        // (vi) triple sum.
        if n >= 3 {
            for &i in &singles {
                for &j in &singles {
                    for &k in &singles {
                        if i >= j || j >= k {
                            continue;
                        }
                        let outcome = (|| {
                            let a = gamma.entry(mask_of(&[i]), mask_of(&[j, k]), lambda)?;
                            let b = gamma.entry(mask_of(&[j]), mask_of(&[k, i]), lambda)?;
                            let c = gamma.entry(mask_of(&[k]), mask_of(&[i, j]), lambda)?;
                            Some(&(&a + &b) + &c == three)
                        })();
                        report.record(outcome, || {
                            format!("axiom vi at ({}, {}, {}) lambda={:?}", i, j, k, lambda)
                        });
                    }
                }
            }
        }
        // (ii), (iii), the product law, and translation invariance.
        for s in 1u32..(1 << n) {
            for &i in &singles {
                for &j in &singles {
                    if i == j {
                        continue;
                    }
                    let (bi, bj) = (mask_of(&[i]), mask_of(&[j]));
                    if s & bi != 0 || s & bj != 0 {
                        continue;
                    }
                    if ((s | bi | bj).count_ones() as usize) > n {
                        continue;
                    }
                    let outcome = (|| {
                        let a1 = gamma.entry(s | bi, bj, lambda)?;
                        let a2 = gamma.entry(bj, s, &lambda.sub_indicator(s))?;
                        let b1 = gamma.entry(s | bj, bi, lambda)?;
                        let b2 = gamma.entry(bi, s, &lambda.sub_indicator(s))?;
                        Some(&(&a1 * &a2) + &(&b1 * &b2) == two)
                    })();
                    report.record(outcome, || {
                        format!(
                            "axiom ii at S={:?} i={} j={} lambda={:?}",
                            indices_of(s),
                            i,
                            j,
                            lambda
                        )
                    });
                    let outcome = (|| {
                        let l_sj = lambda.sub_indicator(s | bj);
                        let a1 = gamma.entry(s, bi, lambda)?;
                        let a2 = gamma.entry(bi, s | bj, &l_sj)?;
                        let b1 = gamma.entry(s | bi, bj, &lambda.sub_indicator(bj))?;
                        let b2 = gamma.entry(bj, s, &l_sj)?;
                        Some(&a1 * &a2 == &b1 * &b2)
                    })();
                    report.record(outcome, || {
                        format!(
                            "axiom iii at S={:?} i={} j={} lambda={:?}",
                            indices_of(s),
                            i,
                            j,
                            lambda
                        )
                    });
                    let outcome = (|| {
                        let a = gamma.entry(s | bi, bj, lambda)?;
                        let b = gamma.entry(s, bj, lambda)?;
                        let c = gamma.entry(bi, bj, lambda)?;
                        Some(a == &b * &c)
                    })();
                    report.record(outcome, || {
                        format!(
                            "product law at S={:?} i={} j={} lambda={:?}",
                            indices_of(s),
                            i,
                            j,
                            lambda
                        )
                    });
                    let outcome = (|| {
                        let a = gamma.entry(bi, bj, lambda)?;
                        let b = gamma.entry(bi, bj, &lambda.sub_indicator(s))?;
                        Some(a == b)
                    })();
                    report.record(outcome, || {
                        format!(
                            "translation invariance at i={} j={} S={:?} lambda={:?}",
                            i,
                            j,
                            indices_of(s),
                            lambda
                        )
                    });
                }
            }
        }
        // (iv) cocycle.
        for &(s, t) in &pairs {
            for u in 1u32..(1 << n) {
                if u & (s | t) != 0 {
                    continue;
                }
                if ((s | t | u).count_ones() as usize) > n {
                    continue;
                }
                let outcome = (|| {
                    let a1 = gamma.entry(s, t, &lambda.add_indicator(u))?;
                    let a2 = gamma.entry(s | t, u, lambda)?;
                    let b1 = gamma.entry(s, t | u, lambda)?;
                    let b2 = gamma.entry(t, u, lambda)?;
                    Some(&a1 * &a2 == &b1 * &b2)
                })();
                report.record(outcome, || {
                    format!(
                        "axiom iv at S={:?} T={:?} U={:?} lambda={:?}",
                        indices_of(s),
                        indices_of(t),
                        indices_of(u),
                        lambda
                    )
                });
            }
        }
        // Invertibility: no stored entry is zero.
        for &(s, t) in &pairs {
            if let Some(v) = gamma.entry(s, t, lambda) {
                report.record(Some(!v.is_zero()), || {
                    format!(
                        "zero entry at S={:?} T={:?} lambda={:?}",
                        indices_of(s),
                        indices_of(t),
                        lambda
                    )
                });
            }
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Expansion from singleton data
// ---------------------------------------------------------------------------

/// Expand singleton data to a full scalar system by the product formula.
/// The singletons must satisfy the inversion, pair-sum, triple-sum, and
/// translation-invariance constraints on the window.
pub fn expand_gamma(
    n: usize,
    mode: GammaMode,
    singletons: &BTreeMap<(usize, usize, TupleWeight), LaurentScalar>,
    window: &BTreeSet<TupleWeight>,
) -> Result<ScalarSystem, ClassifyError> {
    let get = |i: usize, j: usize, lam: &TupleWeight| -> Option<LaurentScalar> {
        singletons.get(&(i, j, lam.clone())).cloned()
    };
    let two = match mode {
        GammaMode::Quantum => q_integer(2),
        GammaMode::Classical => LaurentScalar::from_int(2),
    };
    let three = match mode {
        GammaMode::Quantum => q_integer(3),
        GammaMode::Classical => LaurentScalar::from_int(3),
    };
    for lambda in window {
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    continue;
                }
                if let (Some(a), Some(b)) = (get(i, j, lambda), get(j, i, lambda)) {
                    if &a + &b != two {
                        return Err(ClassifyError::InconsistentSingletons(format!(
                            "pair sum at ({}, {}) lambda={:?}",
                            i, j, lambda
                        )));
                    }
                }
                if let (Some(a), Some(b)) =
                    (get(i, j, lambda), get(j, i, &lambda.sub_indicator(mask_of(&[i]))))
                {
                    if !(&a * &b).is_one() {
                        return Err(ClassifyError::InconsistentSingletons(format!(
                            "inversion at ({}, {}) lambda={:?}",
                            i, j, lambda
                        )));
                    }
                }
                for s in 1u32..(1 << n) {
                    if s & mask_of(&[i]) != 0 || s & mask_of(&[j]) != 0 {
                        continue;
                    }
                    if let (Some(a), Some(b)) =
                        (get(i, j, lambda), get(i, j, &lambda.sub_indicator(s)))
                    {
                        if a != b {
                            return Err(ClassifyError::InconsistentSingletons(format!(
                                "translation invariance at ({}, {}) S={:?}",
                                i,
                                j,
                                indices_of(s)
                            )));
                        }
                    }
                }
            }
        }
        // Triple sums through the singleton-derived pair entries.
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    if i >= j || j >= k {
                        continue;
                    }
                    let tri = (|| {
                        let a1 = get(i, j, &lambda.add_indicator(mask_of(&[k])))?;
                        let a2 = get(i, k, &lambda.add_indicator(mask_of(&[j])))?;
                        let b1 = get(j, k, &lambda.add_indicator(mask_of(&[i])))?;
                        let b2 = get(j, i, &lambda.add_indicator(mask_of(&[k])))?;
                        let c1 = get(k, i, &lambda.add_indicator(mask_of(&[j])))?;
                        let c2 = get(k, j, &lambda.add_indicator(mask_of(&[i])))?;
                        Some(&(&(&a1 * &a2) + &(&b1 * &b2)) + &(&c1 * &c2))
                    })();
                    if let Some(sum) = tri {
                        if sum != three {
                            return Err(ClassifyError::InconsistentSingletons(format!(
                                "triple sum at ({}, {}, {}) lambda={:?}",
                                i, j, k, lambda
                            )));
                        }
                    }
                }
            }
        }
    }
    let mut entries = BTreeMap::new();
    for &(s, t) in &subset_pairs(n) {
        'lam: for lambda in window {
            let shifted_base = lambda.add_indicator(t);
            let mut value = LaurentScalar::one();
            for i in indices_of(s) {
                for j in indices_of(t) {
                    let mu = shifted_base.sub_indicator(mask_of(&[j]));
                    match get(i, j, &mu) {
                        Some(v) => value = &value * &v,
                        None => continue 'lam,
                    }
                }
            }
            entries.insert((s, t, lambda.clone()), value);
        }
    }
    Ok(ScalarSystem { n, mode, window: window.clone(), entries })
}

/// Restrict a system to its singleton entries.
pub fn restrict_to_singletons(
    gamma: &ScalarSystem,
) -> BTreeMap<(usize, usize, TupleWeight), LaurentScalar> {
    let mut out = BTreeMap::new();
    for ((s, t, lam), v) in gamma.entries() {
        let si = indices_of(*s);
        let ti = indices_of(*t);
        if si.len() == 1 && ti.len() == 1 {
            out.insert((si[0], ti[0], lam.clone()), v.clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The projective solver
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolvedParam {
    /// x in P^1 over Q(q) with z_n = [n-1; x]/[n; x].
    Quantum(ProjParam),
    /// x in P^1 over Q with z_n = (x + n - 1)/(x + n); None is infinity.
    Classical(Option<BigRational>),
}

/// Solve for x from samples n -> z_n: derive x from one sample, cross-check
/// every other sample, and check the defining recurrence on consecutive
/// samples.
pub fn solve_projective(
    z: &BTreeMap<i64, LaurentScalar>,
    mode: GammaMode,
) -> Result<SolvedParam, ClassifyError> {
    let (&n0, z0) = z.iter().next().ok_or(ClassifyError::MissingPair(0, 0))?;
    let two = match mode {
        GammaMode::Quantum => q_integer(2),
        GammaMode::Classical => LaurentScalar::from_int(2),
    };
    for (&n, zn) in z.iter() {
        if let Some(znext) = z.get(&(n + 1)) {
            if znext.is_zero() {
                return Err(ClassifyError::ZeroEntry);
            }
            let lhs = zn + &znext.inverse().expect("nonzero");
            if lhs != two {
                return Err(ClassifyError::RecurrenceViolated(n));
            }
        }
    }
    match mode {
        GammaMode::Quantum => {
            // x = [q^{1-n} - z_n q^{-n} : q^{n-1} - z_n q^n].
            let from_sample = |n: i64, zn: &LaurentScalar| -> Result<ProjParam, ClassifyError> {
                let xc = &LaurentScalar::q_power(1 - n) - &(zn * &LaurentScalar::q_power(-n));
                let yc = &LaurentScalar::q_power(n - 1) - &(zn * &LaurentScalar::q_power(n));
                ProjParam::new(xc, yc).map_err(ClassifyError::Scalar)
            };
            let x = from_sample(n0, z0)?;
            for (&n, zn) in z.iter().skip(1) {
                let other = from_sample(n, zn)?;
                if other != x {
                    return Err(ClassifyError::InconsistentSequence(format!(
                        "n = {} gives {} but n = {} gives {}",
                        n0, x, n, other
                    )));
                }
            }
            Ok(SolvedParam::Quantum(x))
        }
        GammaMode::Classical => {
            let from_sample =
                |n: i64, zn: &LaurentScalar| -> Result<Option<BigRational>, ClassifyError> {
                    let z = zn.as_rational().ok_or_else(|| {
                        ClassifyError::AxiomFailure(
                            "classical entries must be rational constants".into(),
                        )
                    })?;
                    if z.is_one() {
                        return Ok(None);
                    }
                    let n_r = BigRational::from_integer(n.into());
                    let one = BigRational::one();
                    Ok(Some((&n_r - &one - &n_r * &z) / (&z - &one)))
                };
            let x = from_sample(n0, z0)?;
            for (&n, zn) in z.iter().skip(1) {
                let other = from_sample(n, zn)?;
                if other != x {
                    return Err(ClassifyError::InconsistentSequence(format!(
                        "classical samples at n = {} and n = {} disagree",
                        n0, n
                    )));
                }
            }
            Ok(SolvedParam::Classical(x))
        }
    }
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyCertificate {
    pub n: usize,
    pub parameters: Vec<ParameterEntry>,
    pub axioms_passed: u64,
    pub axioms_skipped: u64,
    pub multiplicative: bool,
    pub regular: bool,
    pub round_trip: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParameterEntry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

/// Recover the unique regular toric parameter of an axiom-passing scalar
/// system: solve x_{ij} from the singleton entries read along the direction
/// in which (lambda, e_i - e_j) varies by one per step, check projective
/// multiplicativity and regularity, assemble the toric point, and confirm
/// the round trip on the window.
pub fn classify(
    rs: &RootSystem,
    gamma: &ScalarSystem,
) -> Result<(ToricPoint, ClassifyCertificate), ClassifyError> {
    let n = gamma.n;
    let axioms = verify_scalar_axioms(gamma);
    if !axioms.ok() {
        return Err(ClassifyError::AxiomFailure(
            axioms.violations.first().cloned().unwrap_or_default(),
        ));
    }
    let mut params: BTreeMap<(usize, usize), ProjParam> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let mut samples: BTreeMap<i64, LaurentScalar> = BTreeMap::new();
            for lambda in gamma.window.iter() {
                if let Some(v) = gamma.entry(mask_of(&[i]), mask_of(&[j]), lambda) {
                    let idx = lambda.pair_eij(i, j);
                    if let Some(prev) = samples.get(&idx) {
                        if prev != &v {
                            return Err(ClassifyError::InconsistentSequence(format!(
                                "gamma({}, {}) is not a function of the pairing at index {}",
                                i, j, idx
                            )));
                        }
                    } else {
                        samples.insert(idx, v);
                    }
                }
            }
            if samples.is_empty() {
                return Err(ClassifyError::MissingPair(i, j));
            }
            match solve_projective(&samples, gamma.mode)? {
                SolvedParam::Quantum(x) => {
                    params.insert((i, j), x);
                }
                SolvedParam::Classical(_) => {
                    return Err(ClassifyError::AxiomFailure(
                        "classical systems are classified by classify_classical".into(),
                    ))
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                let ok = params[&(i, j)]
                    .mul(&params[&(j, k)])
                    .map(|p| p == params[&(i, k)])
                    .unwrap_or(false);
                if !ok {
                    return Err(ClassifyError::NotMultiplicative(i, j, k));
                }
            }
        }
    }
    let mut entries = BTreeMap::new();
    for i in 1..=n {
        for j in i + 1..=n {
            entries.insert(type_a_root(n, i, j), params[&(i, j)].clone());
        }
    }
    let chi = ToricPoint::from_positive_entries(rs, entries)?;
    let report = chi.validate(rs, true);
    if !report.ok {
        let mut all = report.cocycle_violations;
        all.extend(report.regularity_violations);
        return Err(ClassifyError::NotRegular(all));
    }
    let rebuilt = gamma_from_toric(rs, &chi, &gamma.window, n)?;
    let round_trip = rebuilt == *gamma;
    let certificate = ClassifyCertificate {
        n,
        parameters: params
            .iter()
            .map(|(&(i, j), x)| ParameterEntry { i, j, value: x.to_string() })
            .collect(),
        axioms_passed: axioms.passed,
        axioms_skipped: axioms.skipped,
        multiplicative: true,
        regular: true,
        round_trip,
    };
    if !round_trip {
        return Err(ClassifyError::AxiomFailure(
            "recovered parameter does not reproduce the system".into(),
        ));
    }
    Ok((chi, certificate))
}

/// Classical classification: recover the additive family x_{ij} in P^1(Q)
/// with x_ij + x_jk = x_ik on the finite part.
pub fn classify_classical(
    gamma: &ScalarSystem,
) -> Result<BTreeMap<(usize, usize), Option<BigRational>>, ClassifyError> {
    let n = gamma.n;
    let mut out = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            let mut samples: BTreeMap<i64, LaurentScalar> = BTreeMap::new();
            for lambda in gamma.window.iter() {
                if let Some(v) = gamma.entry(mask_of(&[i]), mask_of(&[j]), lambda) {
                    samples.insert(lambda.pair_eij(i, j), v);
                }
            }
            if samples.is_empty() {
                return Err(ClassifyError::MissingPair(i, j));
            }
            match solve_projective(&samples, GammaMode::Classical)? {
                SolvedParam::Classical(x) => {
                    out.insert((i, j), x);
                }
                SolvedParam::Quantum(_) => unreachable!(),
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i == j || j == k || i == k {
                    continue;
                }
                if let (Some(a), Some(b), Some(c)) =
                    (out[&(i, j)].clone(), out[&(j, k)].clone(), out[&(i, k)].clone())
                {
                    if &a + &b != c {
                        return Err(ClassifyError::NotMultiplicative(i, j, k));
                    }
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GammaEntryJson {
    #[serde(rename = "S")]
    s: Vec<usize>,
    #[serde(rename = "T")]
    t: Vec<usize>,
    lambda: Vec<i64>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct GammaTableJson {
    n: usize,
    mode: GammaMode,
    entries: Vec<GammaEntryJson>,
}

impl ScalarSystem {
    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|((s, t, lam), v)| GammaEntryJson {
                s: indices_of(*s),
                t: indices_of(*t),
                lambda: lam.0.clone(),
                value: v.to_string(),
            })
            .collect();
        serde_json::to_value(GammaTableJson { n: self.n, mode: self.mode, entries })
            .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<ScalarSystem, ClassifyError> {
        let parsed: GammaTableJson =
            serde_json::from_value(value.clone()).map_err(|e| RootDataError::Serde(e.to_string()))?;
        let mut entries = BTreeMap::new();
        let mut window = BTreeSet::new();
        for e in parsed.entries {
            let lam = TupleWeight::canonical(e.lambda);
            let v: LaurentScalar = e.value.parse().map_err(RootDataError::Scalar)?;
            window.insert(lam.clone());
            entries.insert((mask_of(&e.s), mask_of(&e.t), lam), v);
        }
        Ok(ScalarSystem { n: parsed.n, mode: parsed.mode, window, entries })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::phi_all_ones;
    use crate::scalar::q_integer;

    fn a_rs(n: usize) -> RootSystem {
        RootSystem::new('A', n - 1).unwrap()
    }

    fn regular_chi(rs: &RootSystem) -> ToricPoint {
        let values: Vec<LaurentScalar> = (0..rs.rank()).map(|i| q_integer(2 + i as i64)).collect();
        ToricPoint::from_character(rs, &values)
    }

    #[test]
    fn gamma_of_phi_one_point() {
        // chi of phi = 1 has chi = infinity for i < j, so gamma(i+1, i) = q
        // and gamma(i, i+1) = q^{-1} for all lambda.
        let n = 3;
        let rs = a_rs(n);
        let chi = phi_all_ones(&rs).to_toric(&rs).unwrap();
        let window = weight_window(n, 2);
        let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
        let lam = TupleWeight::canonical(vec![1, 0, -1]);
        for i in 1..n {
            assert_eq!(
                gamma.entry(1 << i, 1 << (i - 1), &lam).unwrap(),
                LaurentScalar::q_power(1),
                "gamma({}, {})",
                i + 1,
                i
            );
            assert_eq!(
                gamma.entry(1 << (i - 1), 1 << i, &lam).unwrap(),
                LaurentScalar::q_power(-1)
            );
        }
        let report = verify_scalar_axioms(&gamma);
        assert!(report.ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn axioms_pass_for_regular_characters() {
        for n in [3usize, 4] {
            let rs = a_rs(n);
            let chi = regular_chi(&rs);
            let window = weight_window(n, 2);
            let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
            let report = verify_scalar_axioms(&gamma);
            assert!(report.ok(), "n = {}: {:?}", n, report.violations);
            assert!(report.passed > 0);
        }
    }

    #[test]
    fn perturbed_entry_fails_pair_sum() {
        let n = 3;
        let rs = a_rs(n);
        let chi = regular_chi(&rs);
        let window = weight_window(n, 1);
        let mut gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
        let lam = TupleWeight::canonical(vec![0, 0, 0]);
        let old = gamma.entry(mask_of(&[1]), mask_of(&[2]), &lam).unwrap();
        gamma.set_entry(
            mask_of(&[1]),
            mask_of(&[2]),
            lam,
            &old * &LaurentScalar::q_power(1),
        );
        let report = verify_scalar_axioms(&gamma);
        assert!(!report.ok());
        assert!(report.violations.iter().any(|v| v.contains("axiom v")));
    }

    #[test]
    fn solver_examples() {
        // z == q gives x = [0 : 1].
        let mut z = BTreeMap::new();
        for n in -2..=2 {
            z.insert(n, LaurentScalar::q_power(1));
        }
        match solve_projective(&z, GammaMode::Quantum).unwrap() {
            SolvedParam::Quantum(x) => assert_eq!(x, ProjParam::zero()),
            _ => panic!(),
        }
        // z_n = [n-1]/[n] gives x = [1 : 1].
        let mut z = BTreeMap::new();
        for n in 2..=4 {
            z.insert(n, &q_integer(n - 1) / &q_integer(n));
        }
        match solve_projective(&z, GammaMode::Quantum).unwrap() {
            SolvedParam::Quantum(x) => assert_eq!(x, ProjParam::finite(LaurentScalar::one())),
            _ => panic!(),
        }
        // Classical: z_n = (x0 + n - 1)/(x0 + n) recovers x0.
        let x0 = BigRational::new(7.into(), 3.into());
        let mut z = BTreeMap::new();
        for n in 0..=3 {
            let nr = BigRational::from_integer(n.into());
            let v = (&x0 + &nr - BigRational::one()) / (&x0 + &nr);
            let s: LaurentScalar = format!("{}/{}", v.numer(), v.denom()).parse().unwrap();
            z.insert(n, s);
        }
        match solve_projective(&z, GammaMode::Classical).unwrap() {
            SolvedParam::Classical(Some(x)) => assert_eq!(x, x0),
            _ => panic!(),
        }
        // A broken recurrence is rejected.
        let mut z = BTreeMap::new();
        z.insert(0, q_integer(2));
        z.insert(1, q_integer(3));
        assert!(matches!(
            solve_projective(&z, GammaMode::Quantum),
            Err(ClassifyError::RecurrenceViolated(0))
        ));
    }

    #[test]
    fn classify_round_trip_characters() {
        for n in [3usize, 4] {
            let rs = a_rs(n);
            let chi = regular_chi(&rs);
            let window = weight_window(n, 2);
            let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
            let (recovered, cert) = classify(&rs, &gamma).unwrap();
            assert_eq!(recovered, chi, "n = {}", n);
            assert!(cert.round_trip && cert.multiplicative && cert.regular);
        }
    }

    #[test]
    fn classify_phi_one_gives_infinity() {
        let n = 3;
        let rs = a_rs(n);
        let chi = phi_all_ones(&rs).to_toric(&rs).unwrap();
        let window = weight_window(n, 2);
        let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
        let (recovered, _) = classify(&rs, &gamma).unwrap();
        for i in 1..=n {
            for j in i + 1..=n {
                assert!(recovered.entry(&type_a_root(n, i, j)).is_infinity());
            }
        }
    }

    #[test]
    fn classify_rejects_monomial_parameter() {
        // x_{12} = q^2 breaks regularity.
        let n = 2;
        let rs = a_rs(n);
        let chi = ToricPoint::from_character(&rs, &[LaurentScalar::q_power(2)]);
        let window = weight_window(n, 2);
        assert!(matches!(
            gamma_from_toric(&rs, &chi, &window, n),
            Err(ClassifyError::NotRegular(_))
        ));
        let mut entries = BTreeMap::new();
        for lambda in &window {
            for (i, j) in [(1usize, 2usize), (2, 1)] {
                let m = lambda.pair_eij(i, j);
                let root = type_a_root(n, i, j);
                let v = bracket_ratio(m - 1, m, &chi.entry(&root), 1).unwrap();
                entries.insert((mask_of(&[i]), mask_of(&[j]), lambda.clone()), v);
            }
        }
        let gamma = ScalarSystem::new(n, GammaMode::Quantum, window, entries);
        assert!(matches!(classify(&rs, &gamma), Err(ClassifyError::NotRegular(_))));
    }

    #[test]
    fn expansion_matches_direct_construction() {
        let n = 3;
        let rs = a_rs(n);
        let chi = regular_chi(&rs);
        let window = weight_window(n, 2);
        let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
        let singles = restrict_to_singletons(&gamma);
        let expanded = expand_gamma(n, GammaMode::Quantum, &singles, &window).unwrap();
        let mut compared = 0;
        for (key, v) in expanded.entries() {
            assert_eq!(Some(v.clone()), gamma.entry(key.0, key.1, &key.2));
            compared += 1;
        }
        assert!(compared > 0);
        let again = restrict_to_singletons(&expanded);
        for (key, v) in &again {
            assert_eq!(singles.get(key), Some(v));
        }
        let report = verify_scalar_axioms(&expanded);
        assert!(report.ok(), "violations: {:?}", report.violations);
    }

    #[test]
    fn expansion_rejects_inconsistent_singletons() {
        let n = 3;
        let rs = a_rs(n);
        let chi = regular_chi(&rs);
        let window = weight_window(n, 1);
        let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
        let mut singles = restrict_to_singletons(&gamma);
        let key = (1usize, 2usize, TupleWeight::canonical(vec![0, 0, 0]));
        let old = singles.get(&key).unwrap().clone();
        singles.insert(key, &old * &LaurentScalar::q_power(1));
        assert!(matches!(
            expand_gamma(n, GammaMode::Quantum, &singles, &window),
            Err(ClassifyError::InconsistentSingletons(_))
        ));
    }

    #[test]
    fn classical_family_round_trip() {
        // gamma(i, j; lambda) = (x_ij + m - 1)/(x_ij + m) with additive x.
        let n = 3;
        let window = weight_window(n, 2);
        let x12 = BigRational::new(5.into(), 2.into());
        let x23 = BigRational::new((-7).into(), 3.into());
        let x13 = &x12 + &x23;
        let xs: BTreeMap<(usize, usize), BigRational> = [
            ((1usize, 2usize), x12.clone()),
            ((2, 3), x23.clone()),
            ((1, 3), x13.clone()),
            ((2, 1), -&x12),
            ((3, 2), -&x23),
            ((3, 1), -&x13),
        ]
        .into();
        let mut singles = BTreeMap::new();
        for lambda in &window {
            for (&(i, j), x) in &xs {
                let m = BigRational::from_integer(lambda.pair_eij(i, j).into());
                let v = (x + &m - BigRational::one()) / (x + &m);
                let s: LaurentScalar = format!("{}/{}", v.numer(), v.denom()).parse().unwrap();
                singles.insert((i, j, lambda.clone()), s);
            }
        }
        let gamma = expand_gamma(n, GammaMode::Classical, &singles, &window).unwrap();
        let report = verify_scalar_axioms(&gamma);
        assert!(report.ok(), "violations: {:?}", report.violations);
        let solved = classify_classical(&gamma).unwrap();
        assert_eq!(solved[&(1, 2)], Some(x12));
        assert_eq!(solved[&(2, 3)], Some(x23));
        assert_eq!(solved[&(1, 3)], Some(x13));
    }

    #[test]
    fn json_round_trip() {
        let n = 3;
        let rs = a_rs(n);
        let chi = regular_chi(&rs);
        let window = weight_window(n, 1);
        let gamma = gamma_from_toric(&rs, &chi, &window, n).unwrap();
        let json = gamma.to_json();
        let back = ScalarSystem::from_json(&json).unwrap();
        assert_eq!(back, gamma);
    }
}
