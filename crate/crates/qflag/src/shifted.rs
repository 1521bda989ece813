//! Shifted category-O computations: the chi-shifted dot action, dominance
//! and antidominance tests, strong regularity, the Shapovalov determinant
//! factorization, invariant coefficients, an exact sl_2 rewriting engine for
//! the deformed enveloping algebra, the weight-reversing S(x) operator, and
//! the q-binomial fraction identity.

use crate::rootdata::{
    kostant_partition, Root, RootDataError, RootSystem, ToricPoint, TupleWeight, Weight, WeylElt,
};
use crate::scalar::{
    bracket, bracket_ratio, q_binomial, q_factorial, q_integer, LaurentScalar, ProjParam,
    ScalarError,
};
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiftedError {
    #[error("chi is not an even q_alpha-power at root {0:?}; the shift leaves the stratum")]
    NonIntegralShift(Root),
    #[error("chi_2eps is infinite; use the chart-flipped generators")]
    InfiniteParameter,
    #[error("a required denominator vanishes: {0}")]
    SingularParameter(String),
    #[error("zero denominator in a bracket ratio")]
    ZeroDenominator,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("root data error: {0}")]
    RootData(#[from] RootDataError),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
}

/// A weight on the integral-plus-toric-twist stratum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedWeight {
    pub integral: Weight,
    pub twist: ToricPoint,
}

// ---------------------------------------------------------------------------
// Integral roots and the shifted dot action
// ---------------------------------------------------------------------------

/// R_chi = {alpha : chi_{2 alpha} != 0, infinity} and the reflections in its
/// positive part, which generate W_chi.
pub fn integral_roots_of_param(rs: &RootSystem, chi: &ToricPoint) -> (Vec<Root>, Vec<WeylElt>) {
    let mut roots = Vec::new();
    for alpha in rs.roots() {
        let p = chi.entry(alpha);
        if !p.is_infinity() && !p.is_zero_point() {
            roots.push(alpha.clone());
        }
    }
    let generators = roots
        .iter()
        .filter(|r| crate::rootdata::root_is_positive(r))
        .map(|r| WeylElt::reflection(rs, r).expect("alpha is a root"))
        .collect();
    (roots, generators)
}

/// c_alpha with chi_{2 alpha} = q_alpha^{2 c_alpha}, when defined.
pub fn integral_exponent(rs: &RootSystem, chi: &ToricPoint, alpha: &Root) -> Option<i64> {
    chi.entry(alpha).monomial_lattice_test(rs.d_root(alpha))
}

/// One chi-shifted reflection:
/// s_alpha ._chi lambda = lambda - ((lambda + rho, alpha^vee) + c_alpha) alpha.
pub fn shifted_dot_reflection(
    rs: &RootSystem,
    chi: &ToricPoint,
    alpha: &Root,
    lambda: &Weight,
) -> Result<Weight, ShiftedError> {
    let c = integral_exponent(rs, chi, alpha)
        .ok_or_else(|| ShiftedError::NonIntegralShift(alpha.clone()))?;
    let pairing = rs.pairing_weight_coroot(&lambda.add(&rs.rho()), alpha) + c;
    let alpha_w = rs.root_to_weight(alpha);
    Ok(Weight(
        lambda
            .0
            .iter()
            .zip(&alpha_w.0)
            .map(|(l, a)| l - pairing * a)
            .collect(),
    ))
}

/// The chi-shifted dot action of a word of reflections (roots, applied
/// right-to-left).
pub fn shifted_dot_action(
    rs: &RootSystem,
    chi: &ToricPoint,
    word: &[Root],
    lambda: &Weight,
) -> Result<Weight, ShiftedError> {
    let mut out = lambda.clone();
    for alpha in word.iter().rev() {
        out = shifted_dot_reflection(rs, chi, alpha, &out)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dominance and regularity
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DominanceMode {
    Dominant,
    Antidominant,
    Simple,
    ProjectiveSufficient,
    SemisimpleCategory,
    StronglyRegular(Vec<Weight>),
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceReport {
    pub holds: bool,
    /// Violating roots with the offending lattice exponent.
    pub witnesses: Vec<(Vec<i64>, i64)>,
}

/// q^{(lambda + rho, 2 alpha)} chi_{2 alpha} as a projective point.
fn shifted_value(rs: &RootSystem, chi: &ToricPoint, lambda: &Weight, alpha: &Root) -> ProjParam {
    let e = rs.pairing_weight_two_root(&lambda.add(&rs.rho()), alpha);
    chi.entry(alpha).scale_q_power(e)
}

/// The lattice-membership dominance conditions, evaluated exactly.
pub fn dominance_test(
    rs: &RootSystem,
    chi: &ToricPoint,
    lambda: &Weight,
    mode: &DominanceMode,
) -> DominanceReport {
    let mut witnesses = Vec::new();
    match mode {
        DominanceMode::Dominant | DominanceMode::ProjectiveSufficient => {
            for alpha in rs.positive_roots() {
                let d = rs.d_root(alpha);
                if let Some(m) = shifted_value(rs, chi, lambda, alpha).monomial_lattice_test(d) {
                    if m < 0 {
                        witnesses.push((alpha.clone(), m));
                    }
                }
            }
        }
        DominanceMode::Antidominant | DominanceMode::Simple => {
            for alpha in rs.positive_roots() {
                let d = rs.d_root(alpha);
                if let Some(m) = shifted_value(rs, chi, lambda, alpha).monomial_lattice_test(d) {
                    if m > 0 {
                        witnesses.push((alpha.clone(), m));
                    }
                }
            }
        }
        DominanceMode::SemisimpleCategory => {
            if !chi.validate(rs, true).ok {
                witnesses.push((vec![], 0));
            }
        }
        DominanceMode::StronglyRegular(weights) => {
            for beta in rs.positive_roots() {
                let d = rs.d_root(beta);
                let ms: Vec<i64> = weights
                    .iter()
                    .filter_map(|w| shifted_value(rs, chi, w, beta).monomial_lattice_test(d))
                    .collect();
                let meets_nonneg = ms.iter().any(|&m| m >= 0);
                let meets_nonpos = ms.iter().any(|&m| m <= 0);
                if meets_nonneg && meets_nonpos {
                    witnesses.push((beta.clone(), *ms.iter().find(|&&m| m >= 0).unwrap()));
                }
            }
        }
    }
    DominanceReport { holds: witnesses.is_empty(), witnesses }
}

/// Orbit of lambda under the chi-shifted action of W_chi, together with
/// maximality and minimality of lambda in the Q+-order, by enumeration.
pub fn shifted_orbit_maximality(
    rs: &RootSystem,
    chi: &ToricPoint,
    lambda: &Weight,
) -> Result<(Vec<Weight>, bool, bool), ShiftedError> {
    let (roots, _) = integral_roots_of_param(rs, chi);
    let positive: Vec<Root> = roots
        .into_iter()
        .filter(|r| crate::rootdata::root_is_positive(r))
        .collect();
    let mut orbit = vec![lambda.clone()];
    let mut frontier = orbit.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for mu in &frontier {
            for alpha in &positive {
                let nu = shifted_dot_reflection(rs, chi, alpha, mu)?;
                if !orbit.contains(&nu) {
                    orbit.push(nu.clone());
                    next.push(nu);
                }
            }
        }
        frontier = next;
    }
    let maximal = !orbit.iter().any(|mu| dominates(rs, mu, lambda));
    let minimal = !orbit.iter().any(|mu| dominates(rs, lambda, mu));
    Ok((orbit, maximal, minimal))
}

/// a > b in the root order: a - b lies in Q+ \ {0}. Solved exactly through
/// the (invertible) Cartan matrix.
fn dominates(rs: &RootSystem, a: &Weight, b: &Weight) -> bool {
    use num_rational::BigRational;
    use num_traits::Zero;
    let rank = rs.rank();
    let diff = a.sub(b);
    let mut m: Vec<Vec<BigRational>> = (0..rank)
        .map(|r| {
            (0..rank)
                .map(|c| BigRational::from_integer(rs.cartan()[r][c].into()))
                .collect()
        })
        .collect();
    let mut rhs: Vec<BigRational> = diff
        .0
        .iter()
        .map(|&x| BigRational::from_integer(x.into()))
        .collect();
    for col in 0..rank {
        let pivot = (col..rank)
            .find(|&r| !m[r][col].is_zero())
            .expect("invertible Cartan matrix");
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col].clone();
        for r in 0..rank {
            if r == col {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in 0..rank {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    let coords: Vec<BigRational> = (0..rank).map(|r| &rhs[r] / &m[r][r]).collect();
    let zero = BigRational::zero();
    coords.iter().all(|c| c >= &zero) && coords.iter().any(|c| c > &zero)
}

// ---------------------------------------------------------------------------
// Shapovalov determinant factorization
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct ShapovalovFactor {
    pub beta: Vec<i64>,
    pub level: i64,
    pub exponent: u64,
    /// Whether beta lies in the chosen positive system (plain chart) or its
    /// complement (chart-flipped factor).
    pub plain_chart: bool,
    pub description: String,
}

/// The closed factorization of the contravariant pairing determinant on the
/// nu-weight space, up to an invertible element: factors
/// (q_b^{2(rho, b^vee)} chi_{2b} K_{2b} - q_b^{2m})^{P(nu - m b)} over
/// b in R+ cap R0+ and levels m >= 1, and the chart-flipped factor
/// (q_b^{2(rho, b^vee)} K_{2b} - q_b^{2m} chi_{-2b})^{P(nu - m b)} for
/// b in R+ \ R0+. Exponent-0 factors are omitted.
pub fn shapovalov_determinant(
    rs: &RootSystem,
    nu: &Root,
    chi: &ToricPoint,
    r0_plus: &[Root],
) -> Vec<ShapovalovFactor> {
    let mut out = Vec::new();
    if nu.iter().any(|&c| c < 0) {
        return out;
    }
    let height: i64 = nu.iter().sum();
    for beta in rs.positive_roots() {
        let beta_height: i64 = beta.iter().sum();
        let plain = r0_plus.contains(beta);
        let rho_pair = rs.pairing_weight_coroot(&rs.rho(), beta);
        for m in 1..=height / beta_height {
            let scaled: Root = beta.iter().map(|c| c * m).collect();
            let rest: Root = nu.iter().zip(&scaled).map(|(a, b)| a - b).collect();
            let exponent = kostant_partition(rs, &rest);
            if exponent == 0 {
                continue;
            }
            let d = rs.d_root(beta);
            let chi_str = chi.entry(beta).to_string();
            let description = if plain {
                format!(
                    "(q^{} * {} * K_2b - q^{})^{}",
                    2 * d * rho_pair,
                    chi_str,
                    2 * d * m,
                    exponent
                )
            } else {
                format!(
                    "(q^{} * K_2b - q^{} * chi_{{-2b}})^{}",
                    2 * d * rho_pair,
                    2 * d * m,
                    exponent
                )
            };
            out.push(ShapovalovFactor {
                beta: beta.clone(),
                level: m,
                exponent,
                plain_chart: plain,
                description,
            });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Invariant coefficients
// ---------------------------------------------------------------------------

/// The closed invariant coefficient
///   c = ([(nu, eps^vee)] / [(mu + nu, eps^vee)])
///       * [(mu + nu + w^{-1}.lambda, eps^vee); chi_{w^{-1}(2 eps)}]
///       / [(nu + w^{-1}.lambda, eps^vee); chi_{w^{-1}(2 eps)}],
/// with the brackets in the variable q_eps and w^{-1}.lambda the plain dot
/// action.
pub fn invariant_coefficient(
    rs: &RootSystem,
    mu: &Weight,
    nu: &Weight,
    w: &WeylElt,
    eps_index: usize,
    chi: &ToricPoint,
    lambda: &Weight,
) -> Result<LaurentScalar, ShiftedError> {
    let eps = rs.simple_root(eps_index);
    let d = rs.d_simple(eps_index);
    let mu_pair = rs.pairing_weight_coroot(mu, &eps);
    let nu_pair = rs.pairing_weight_coroot(nu, &eps);
    if mu_pair < 1 || nu_pair < 1 {
        return Err(ShiftedError::Precondition(format!(
            "(mu, eps^vee) = {} and (nu, eps^vee) = {} must both be >= 1",
            mu_pair, nu_pair
        )));
    }
    let winv = w.inverse(rs);
    let dotted = winv.apply_weight(rs, &lambda.add(&rs.rho())).sub(&rs.rho());
    let chi_at = chi.entry(&winv.apply_root(&eps));
    let num_pair = rs.pairing_weight_coroot(&mu.add(nu).add(&dotted), &eps);
    let den_pair = rs.pairing_weight_coroot(&nu.add(&dotted), &eps);
    let prefactor = &q_integer(nu_pair).substitute_power(d)
        / &q_integer(mu_pair + nu_pair).substitute_power(d);
    let ratio =
        bracket_ratio(num_pair, den_pair, &chi_at, d).map_err(|_| ShiftedError::ZeroDenominator)?;
    Ok(&prefactor * &ratio)
}

// ---------------------------------------------------------------------------
// The rank-one deformed algebra: rewriting engine and Verma modules
// ---------------------------------------------------------------------------

/// Generators of the rank-one deformed enveloping algebra; AK(m) is
/// aK_{m alpha} (the Cartan generators are indexed by 2P = Z alpha).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sl2Gen {
    AE,
    AF,
    AK(i64),
}

/// An element of the rank-one deformed algebra in PBW order aF^i z^j aE^k,
/// where z = aK_alpha, over the field with the scalar chi at e_{2 eps}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2AlgebraElement {
    chi: LaurentScalar,
    terms: BTreeMap<(u32, i64, u32), LaurentScalar>,
}

impl Sl2AlgebraElement {
    pub fn one(chi: LaurentScalar) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0), LaurentScalar::one());
        Sl2AlgebraElement { chi, terms }
    }

    fn add_term(&mut self, key: (u32, i64, u32), coeff: LaurentScalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let new = &*o.get() + &coeff;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    /// Right-multiply by a generator, renormalizing to PBW order via
    ///   aE aF - q^{-2} aF aE = (chi z^2 - 1)/(q - q^{-1}),
    ///   z aE = q^2 aE z,  z aF = q^{-2} aF z.
    pub fn mul_right(&self, gen: Sl2Gen) -> Sl2AlgebraElement {
        let mut out = Sl2AlgebraElement { chi: self.chi.clone(), terms: BTreeMap::new() };
        let t = &LaurentScalar::q_power(1) - &LaurentScalar::q_power(-1);
        for (&(i, j, k), coeff) in &self.terms {
            match gen {
                Sl2Gen::AE => {
                    out.add_term((i, j, k + 1), coeff.clone());
                }
                Sl2Gen::AK(m) => {
                    // Move z^m left through E^k: E z = q^{-2} z E per E, so
                    // E^k z^m = q^{-2km} z^m E^k.
                    let c = coeff * &LaurentScalar::q_power(-2 * k as i64 * m);
                    out.add_term((i, j + m, k), c);
                }
                Sl2Gen::AF => {
                    // E^k aF = q^{-2k} aF E^k
                    //   + sum_{s=0}^{k-1} q^{-2s} E^{k-1-s} beta E^s
                    // with beta = (chi z^2 - 1)/(q - q^{-1}); the z^2 then
                    // moves left through E^{k-1-s} with q^{-4(k-1-s)}, and
                    // the stray aF passes z^j with q^{-2j}.
                    let main = coeff * &LaurentScalar::q_power(-2 * (k as i64) - 2 * j);
                    out.add_term((i + 1, j, k), main);
                    for s in 0..k as i64 {
                        let chi_coeff = &(coeff * &self.chi)
                            * &LaurentScalar::q_power(2 * s - 4 * (k as i64 - 1));
                        out.add_term((i, j + 2, k - 1), &chi_coeff / &t);
                        let const_coeff = coeff * &LaurentScalar::q_power(-2 * s);
                        out.add_term((i, j, k - 1), &(-&const_coeff) / &t);
                    }
                }
            }
        }
        out
    }

    /// The triangular projection onto the Cartan part: the aF^0 aE^0 block,
    /// as a Laurent polynomial in z.
    pub fn cartan_projection(&self) -> BTreeMap<i64, LaurentScalar> {
        self.terms
            .iter()
            .filter(|(&(i, _, k), _)| i == 0 && k == 0)
            .map(|(&(_, j, _), c)| (j, c.clone()))
            .collect()
    }
}

/// P(aE^n aF^n) in the rank-one deformed algebra, as a z-polynomial.
pub fn pairing_value(chi: &LaurentScalar, n: u32) -> BTreeMap<i64, LaurentScalar> {
    let mut x = Sl2AlgebraElement::one(chi.clone());
    for _ in 0..n {
        x = x.mul_right(Sl2Gen::AE);
    }
    for _ in 0..n {
        x = x.mul_right(Sl2Gen::AF);
    }
    x.cartan_projection()
}

/// An element of the rank-one shifted Verma module with highest weight
/// exponent a = (lambda, eps^vee) and finite parameter chi_{2 eps} = [c : 1]:
/// coefficients over the basis aF^p (x) 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sl2VermaElement {
    pub highest_weight_exponent: i64,
    pub chi_value: LaurentScalar,
    pub coefficients: BTreeMap<u32, LaurentScalar>,
}

impl Sl2VermaElement {
    pub fn highest_vector(a: i64, chi_value: LaurentScalar) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(0, LaurentScalar::one());
        Sl2VermaElement { highest_weight_exponent: a, chi_value, coefficients }
    }

    fn add_term(&mut self, p: u32, coeff: LaurentScalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coefficients.entry(p) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let new = &*o.get() + &coeff;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// aE . (aF^p (x) 1) = beta_p aF^{p-1} (x) 1 with
/// beta_{p+1} = q^{-2} beta_p + (c q^{2a - 4p} - 1)/(q - q^{-1}), beta_0 = 0.
pub fn verma_ae_eigen(a: i64, c: &LaurentScalar, p: u32) -> LaurentScalar {
    let t = &LaurentScalar::q_power(1) - &LaurentScalar::q_power(-1);
    let mut beta = LaurentScalar::zero();
    for m in 0..p {
        let step =
            &(&(c * &LaurentScalar::q_power(2 * a - 4 * m as i64)) - &LaurentScalar::one()) / &t;
        beta = &(&LaurentScalar::q_power(-2) * &beta) + &step;
    }
    beta
}

/// Fully normal-ordered action of a word over {aE, aF, aK} on a Verma
/// element; the word acts as written (rightmost generator first).
pub fn sl2_normal_order(
    word: &[Sl2Gen],
    v: &Sl2VermaElement,
) -> Result<Sl2VermaElement, ShiftedError> {
    let a = v.highest_weight_exponent;
    let c = v.chi_value.clone();
    let mut current = v.clone();
    for gen in word.iter().rev() {
        let mut next = Sl2VermaElement {
            highest_weight_exponent: a,
            chi_value: c.clone(),
            coefficients: BTreeMap::new(),
        };
        for (&p, coeff) in &current.coefficients {
            match gen {
                Sl2Gen::AF => next.add_term(p + 1, coeff.clone()),
                Sl2Gen::AK(m) => {
                    // aK_{m alpha} on the weight lambda - p eps: q^{m(a - 2p)}.
                    let e = m * (a - 2 * p as i64);
                    next.add_term(p, coeff * &LaurentScalar::q_power(e));
                }
                Sl2Gen::AE => {
                    if p > 0 {
                        let beta = verma_ae_eigen(a, &c, p);
                        next.add_term(p - 1, coeff * &beta);
                    }
                }
            }
        }
        current = next;
    }
    Ok(current)
}

// ---------------------------------------------------------------------------
// Tensor products of finite sl_2 modules with a shifted Verma module
// ---------------------------------------------------------------------------

/// The (k+1)-dimensional irreducible of U_q(sl_2) in the standard basis
/// (v_l): F v_l = [l+1] v_{l+1}, E v_l = [k+1-l] v_{l-1}, K v_l = q^{k-2l} v_l.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Irrep {
    pub k: u32,
}

impl Sl2Irrep {
    fn e_coeff(&self, l: u32) -> LaurentScalar {
        if l == 0 {
            LaurentScalar::zero()
        } else {
            q_integer(self.k as i64 + 1 - l as i64)
        }
    }

    fn f_coeff(&self, l: u32) -> LaurentScalar {
        if l >= self.k {
            LaurentScalar::zero()
        } else {
            q_integer(l as i64 + 1)
        }
    }

    fn k_exp(&self, l: u32) -> i64 {
        self.k as i64 - 2 * l as i64
    }
}

/// An element of V_1 (x) ... (x) V_m (x) M_chi(a): keys are the levels in
/// the finite factors plus the aF-power in the Verma factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVermaElement {
    pub reps: Vec<Sl2Irrep>,
    pub a: i64,
    pub chi_value: LaurentScalar,
    pub terms: BTreeMap<(Vec<u32>, u32), LaurentScalar>,
}

impl TensorVermaElement {
    pub fn zero(reps: Vec<Sl2Irrep>, a: i64, chi_value: LaurentScalar) -> Self {
        TensorVermaElement { reps, a, chi_value, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, levels: Vec<u32>, p: u32, coeff: LaurentScalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((levels, p)) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                let new = &*o.get() + &coeff;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &LaurentScalar) -> TensorVermaElement {
        let mut out = TensorVermaElement::zero(self.reps.clone(), self.a, self.chi_value.clone());
        for ((levels, p), coeff) in &self.terms {
            out.add_term(levels.clone(), *p, coeff * c);
        }
        out
    }

    pub fn sub(&self, other: &TensorVermaElement) -> TensorVermaElement {
        let mut out = self.clone();
        for ((levels, p), coeff) in &other.terms {
            out.add_term(levels.clone(), *p, -coeff);
        }
        out
    }

    /// Total weight exponent of a key: sum (k_j - 2 l_j) + (a - 2p).
    fn weight_of(&self, levels: &[u32], p: u32) -> i64 {
        let finite: i64 = self
            .reps
            .iter()
            .zip(levels)
            .map(|(rep, &l)| rep.k_exp(l))
            .sum();
        finite + self.a - 2 * p as i64
    }

    /// Delta-iterated aE: E in one finite slot with K to the left, plus
    /// K...K (x) aE on the Verma factor.
    pub fn act_ae(&self) -> TensorVermaElement {
        let m = self.reps.len();
        let mut out = TensorVermaElement::zero(self.reps.clone(), self.a, self.chi_value.clone());
        for ((levels, p), coeff) in &self.terms {
            for j in 0..m {
                let l = levels[j];
                let e = self.reps[j].e_coeff(l);
                if e.is_zero() {
                    continue;
                }
                let mut c = coeff * &e;
                for (slot, &ls) in levels.iter().enumerate().take(j) {
                    c = &c * &LaurentScalar::q_power(self.reps[slot].k_exp(ls));
                }
                let mut nl = levels.clone();
                nl[j] = l - 1;
                out.add_term(nl, *p, c);
            }
            if *p > 0 {
                let beta = verma_ae_eigen(self.a, &self.chi_value, *p);
                let mut c = coeff * &beta;
                for (slot, &ls) in levels.iter().enumerate() {
                    c = &c * &LaurentScalar::q_power(self.reps[slot].k_exp(ls));
                }
                out.add_term(levels.clone(), p - 1, c);
            }
        }
        out
    }

    /// Delta-iterated aF: (F K) in one finite slot with K to the left, plus
    /// K...K (x) aF on the Verma factor.
    pub fn act_af(&self) -> TensorVermaElement {
        let m = self.reps.len();
        let mut out = TensorVermaElement::zero(self.reps.clone(), self.a, self.chi_value.clone());
        for ((levels, p), coeff) in &self.terms {
            for j in 0..m {
                let l = levels[j];
                let f = self.reps[j].f_coeff(l);
                if f.is_zero() {
                    continue;
                }
                // (F K) v_l = q^{k - 2l} F v_l.
                let mut c = &(coeff * &f) * &LaurentScalar::q_power(self.reps[j].k_exp(l));
                for (slot, &ls) in levels.iter().enumerate().take(j) {
                    c = &c * &LaurentScalar::q_power(self.reps[slot].k_exp(ls));
                }
                let mut nl = levels.clone();
                nl[j] = l + 1;
                out.add_term(nl, *p, c);
            }
            {
                let mut c = coeff.clone();
                for (slot, &ls) in levels.iter().enumerate() {
                    c = &c * &LaurentScalar::q_power(self.reps[slot].k_exp(ls));
                }
                out.add_term(levels.clone(), p + 1, c);
            }
        }
        out
    }

    /// Divided power aF^{(m)} = aF^m / [m]!.
    pub fn act_af_divided(&self, m: u32) -> TensorVermaElement {
        let mut out = self.clone();
        for _ in 0..m {
            out = out.act_af();
        }
        out.scale(&q_factorial(m as i64).inverse().expect("nonzero factorial"))
    }
}

/// Solve for the highest weight vector in V_1 (x) ... (x) M_chi(a) whose
/// leading term is the given key with coefficient one. The aE-kernel on the
/// weight component is computed by exact elimination.
pub fn tensor_highest_weight(
    reps: Vec<Sl2Irrep>,
    a: i64,
    chi_value: LaurentScalar,
    leading: (Vec<u32>, u32),
) -> Result<TensorVermaElement, ShiftedError> {
    let probe =
        TensorVermaElement { reps: reps.clone(), a, chi_value: chi_value.clone(), terms: BTreeMap::new() };
    let target_weight = probe.weight_of(&leading.0, leading.1);
    // Enumerate the weight component.
    let mut level_choices: Vec<Vec<u32>> = vec![vec![]];
    for rep in &reps {
        let mut next = Vec::new();
        for prefix in &level_choices {
            for l in 0..=rep.k {
                let mut v = prefix.clone();
                v.push(l);
                next.push(v);
            }
        }
        level_choices = next;
    }
    let mut keys = Vec::new();
    for levels in &level_choices {
        let finite: i64 = reps.iter().zip(levels).map(|(r, &l)| r.k_exp(l)).sum();
        let rem = finite + a - target_weight;
        if rem >= 0 && rem % 2 == 0 {
            keys.push((levels.clone(), (rem / 2) as u32));
        }
    }
    keys.sort();
    let lead_pos = keys
        .iter()
        .position(|k| *k == leading)
        .ok_or_else(|| ShiftedError::Precondition("leading key not in component".into()))?;
    // aE-matrix over the component.
    let mut image_keys: Vec<(Vec<u32>, u32)> = Vec::new();
    let mut columns: Vec<BTreeMap<(Vec<u32>, u32), LaurentScalar>> = Vec::new();
    for key in &keys {
        let mut v = TensorVermaElement::zero(reps.clone(), a, chi_value.clone());
        v.add_term(key.0.clone(), key.1, LaurentScalar::one());
        let image = v.act_ae();
        for (ik, _) in image.terms.iter() {
            if !image_keys.contains(ik) {
                image_keys.push(ik.clone());
            }
        }
        columns.push(image.terms);
    }
    image_keys.sort();
    let rows = image_keys.len();
    let cols = keys.len();
    let mut mat: Vec<Vec<LaurentScalar>> = vec![vec![LaurentScalar::zero(); cols]; rows];
    for (cidx, col) in columns.iter().enumerate() {
        for (ik, val) in col {
            let ridx = image_keys.binary_search(ik).expect("indexed");
            mat[ridx][cidx] = val.clone();
        }
    }
    // Kernel by Gaussian elimination over the exact field.
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let pivot_row = (r..rows).find(|&rr| !mat[rr][c].is_zero());
        if let Some(pr) = pivot_row {
            mat.swap(r, pr);
            let inv = mat[r][c].inverse().expect("pivot nonzero");
            for cc in 0..cols {
                mat[r][cc] = &mat[r][cc] * &inv;
            }
            for rr in 0..rows {
                if rr != r && !mat[rr][c].is_zero() {
                    let factor = mat[rr][c].clone();
                    for cc in 0..cols {
                        let delta = &factor * &mat[r][cc];
                        mat[rr][cc] = &mat[rr][cc] - &delta;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    for &fc in &free_cols {
        let mut x = vec![LaurentScalar::zero(); cols];
        x[fc] = LaurentScalar::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = -&mat[row][fc];
        }
        if !x[lead_pos].is_zero() {
            let scale = x[lead_pos].inverse().expect("nonzero");
            let mut out = TensorVermaElement::zero(reps.clone(), a, chi_value.clone());
            for (i, key) in keys.iter().enumerate() {
                out.add_term(key.0.clone(), key.1, &x[i] * &scale);
            }
            debug_assert!(out.act_ae().is_zero());
            return Ok(out);
        }
    }
    Err(ShiftedError::SingularParameter(
        "no highest weight vector with the requested leading term".into(),
    ))
}

// ---------------------------------------------------------------------------
// Highest weight vectors in the vector representation (type A, general rank)
// ---------------------------------------------------------------------------

/// The two-term highest weight vector in L^1 (x) M_chi(lambda) of weight
/// lambda + [e_i]: x_i-leading with correction coefficient
///   -q^{-1}(q - q^{-1}) / (chi_{2(e_{i-1} - e_i)} q^{(lambda, 2(e_{i-1} - e_i))} - 1)
/// on x_{i-1} (x) (aF_{i-1} (x) 1); no correction for i = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorHwVector {
    pub i: usize,
    pub correction: Option<LaurentScalar>,
}

pub fn tensor_hw_vector_closed(
    chi: &ToricPoint,
    lambda: &TupleWeight,
    i: usize,
) -> Result<VectorHwVector, ShiftedError> {
    if i == 1 {
        return Ok(VectorHwVector { i, correction: None });
    }
    let n = lambda.n();
    let eps = crate::rootdata::type_a_root(n, i - 1, i);
    let chi_val = chi.entry(&eps).value().ok_or(ShiftedError::InfiniteParameter)?;
    let exponent = 2 * lambda.pair_eij(i - 1, i);
    let den = &(&chi_val * &LaurentScalar::q_power(exponent)) - &LaurentScalar::one();
    if den.is_zero() {
        return Err(ShiftedError::SingularParameter(format!(
            "chi q^{} = 1 at eps_{}",
            exponent,
            i - 1
        )));
    }
    let t = &LaurentScalar::q_power(1) - &LaurentScalar::q_power(-1);
    let coeff = &(-&(&LaurentScalar::q_power(-1) * &t)) / &den;
    Ok(VectorHwVector { i, correction: Some(coeff) })
}

/// The same coefficient computed by brute force through the rank-one solver
/// in the eps_{i-1} direction.
pub fn tensor_hw_vector_solved(
    chi: &ToricPoint,
    lambda: &TupleWeight,
    i: usize,
) -> Result<VectorHwVector, ShiftedError> {
    if i == 1 {
        return Ok(VectorHwVector { i, correction: None });
    }
    let n = lambda.n();
    let eps = crate::rootdata::type_a_root(n, i - 1, i);
    let chi_val = chi.entry(&eps).value().ok_or(ShiftedError::InfiniteParameter)?;
    let a = lambda.pair_eij(i - 1, i);
    let hw = tensor_highest_weight(vec![Sl2Irrep { k: 1 }], a, chi_val, (vec![1], 0))?;
    let correction = hw
        .terms
        .get(&(vec![0], 1))
        .cloned()
        .unwrap_or_else(LaurentScalar::zero);
    Ok(VectorHwVector { i, correction: Some(correction) })
}

// ---------------------------------------------------------------------------
// The invariant-coefficient oracle through the Verma machinery (rank one)
// ---------------------------------------------------------------------------

/// gamma(2,1; lambda) for sl_2 assembled from two tensor highest weight
/// vectors and the M' M matrix entry, following the route through the second
/// summand of the Hom-space decomposition. The parameter a is (lambda, e1 - e2)
/// and chi_value is the finite chart value of chi_{2(e1 - e2)}.
pub fn gamma_21_oracle(a: i64, chi_value: &LaurentScalar) -> Result<LaurentScalar, ShiftedError> {
    let v = Sl2Irrep { k: 1 };
    // Route through X_{lambda + [e1]}: the outer highest weight vector has
    // leading v_1 (= x_2) at parameter (lambda + e1, alpha^vee) = a + 1.
    let outer = tensor_highest_weight(vec![v], a + 1, chi_value.clone(), (vec![1], 0))?;
    // Push through the inner [e1]-map, whose generator image is the exact
    // leading vector x_1 (level 0).
    let h0 = {
        let mut e = TensorVermaElement::zero(vec![v], a, chi_value.clone());
        e.add_term(vec![0], 0, LaurentScalar::one());
        e
    };
    let mut u_b = TensorVermaElement::zero(vec![v, v], a, chi_value.clone());
    for ((levels, p), coeff) in &outer.terms {
        let mut pushed = h0.clone();
        for _ in 0..*p {
            pushed = pushed.act_af();
        }
        for ((inner_levels, ip), ic) in &pushed.terms {
            let mut nl = levels.clone();
            nl.extend_from_slice(inner_levels);
            u_b.add_term(nl, *ip, coeff * ic);
        }
    }
    debug_assert!(u_b.act_ae().is_zero());
    // Route through X_{lambda + [e2]}: outer x_1-leading vector is exact,
    // inner is the [e2]-vector at parameter a.
    let inner_a = tensor_highest_weight(vec![v], a, chi_value.clone(), (vec![1], 0))?;
    let mut u_a = TensorVermaElement::zero(vec![v, v], a, chi_value.clone());
    for ((levels, p), coeff) in &inner_a.terms {
        let mut nl = vec![0u32];
        nl.extend_from_slice(levels);
        u_a.add_term(nl, *p, coeff.clone());
    }
    debug_assert!(u_a.act_ae().is_zero());
    // M'_{1,1} M_{1,1} (x) id on the two finite slots (x_i = v_{i-1}):
    // x_1 (x) x_2 -> -x_2 (x) x_1 + q^{-1} x_1 (x) x_2,
    // x_2 (x) x_1 ->  q x_2 (x) x_1 -       x_1 (x) x_2,
    // equal slots -> 0.
    let mm = |e: &TensorVermaElement| -> TensorVermaElement {
        let q = LaurentScalar::q_power(1);
        let qi = LaurentScalar::q_power(-1);
        let mut out = TensorVermaElement::zero(e.reps.clone(), e.a, e.chi_value.clone());
        for ((levels, p), coeff) in &e.terms {
            match (levels[0], levels[1]) {
                (0, 1) => {
                    out.add_term(vec![1, 0], *p, -coeff);
                    out.add_term(vec![0, 1], *p, coeff * &qi);
                }
                (1, 0) => {
                    out.add_term(vec![1, 0], *p, coeff * &q);
                    out.add_term(vec![0, 1], *p, -coeff);
                }
                _ => {}
            }
        }
        out
    };
    let image = mm(&u_b);
    // image = c_a u_a + gamma u_b; u_a vanishes at (levels [1,0], p = 0)
    // where u_b has coefficient one.
    let coord = |e: &TensorVermaElement, l0: u32, l1: u32| -> LaurentScalar {
        e.terms
            .get(&(vec![l0, l1], 0))
            .cloned()
            .unwrap_or_else(LaurentScalar::zero)
    };
    debug_assert!(coord(&u_b, 1, 0).is_one());
    let gamma = coord(&image, 1, 0);
    let c_a = &coord(&image, 0, 1) - &(&gamma * &coord(&u_b, 0, 1));
    let residual = image.sub(&u_b.scale(&gamma)).sub(&u_a.scale(&c_a));
    if !residual.is_zero() {
        return Err(ShiftedError::Precondition(
            "matrix entry extraction failed: image escapes the highest weight plane".into(),
        ));
    }
    Ok(gamma)
}

// ---------------------------------------------------------------------------
// The S(x) operator and the fraction identity
// ---------------------------------------------------------------------------

/// Scalars of the weight-reversing operator on the (k+1)-dimensional
/// irreducible: S(x) v_l = sigma_l v_{k-l} with
/// sigma_l = (-1)^l q^{k-l} prod_{j=0}^{l-1} [1+k-l-j; x]/[-j; x].
pub fn s_operator_scalars(x: &ProjParam, k: u32) -> Result<Vec<LaurentScalar>, ShiftedError> {
    let mut out = Vec::new();
    for l in 0..=k {
        let mut sigma = &LaurentScalar::from_int(if l % 2 == 0 { 1 } else { -1 })
            * &LaurentScalar::q_power(k as i64 - l as i64);
        for j in 0..l {
            let num = bracket(1 + k as i64 - l as i64 - j as i64, x, 1);
            let den = bracket(-(j as i64), x, 1);
            if den.is_zero() {
                return Err(ShiftedError::SingularParameter(format!("[-{}; x] vanishes", j)));
            }
            sigma = &sigma * &(&num / &den);
        }
        out.push(sigma);
    }
    Ok(out)
}

/// S(x) as a (k+1) x (k+1) matrix in the v-basis: column l is supported on
/// row k - l.
pub fn s_operator_matrix(x: &ProjParam, k: u32) -> Result<Vec<Vec<LaurentScalar>>, ShiftedError> {
    let scalars = s_operator_scalars(x, k)?;
    let dim = (k + 1) as usize;
    let mut m = vec![vec![LaurentScalar::zero(); dim]; dim];
    for (l, sigma) in scalars.into_iter().enumerate() {
        m[dim - 1 - l][l] = sigma;
    }
    Ok(m)
}

/// The diagram-calibrated scalars: the rank-one commutative diagram pins the
/// parameterized-binomial ratio only up to normalization, and direct
/// computation shows the commuting choice is q^{-l} times the bare
/// product-of-brackets value at every l.
pub fn s_operator_scalars_calibrated(
    x: &ProjParam,
    k: u32,
) -> Result<Vec<LaurentScalar>, ShiftedError> {
    let bare = s_operator_scalars(x, k)?;
    Ok(bare
        .into_iter()
        .enumerate()
        .map(|(l, sigma)| &sigma * &LaurentScalar::q_power(-(l as i64)))
        .collect())
}

/// The q-binomial fraction identity:
/// sum_n (-1)^n ([m-l]/[m-n]) qbin(k, l-n) qbin(k+n, k)
///   = (-1)^l qbin(m+k, l) / qbin(m, l),
/// for k, l >= 0 and admissible m (outside [0, l]).
pub fn verify_fraction_identity(k: i64, l: i64, m: i64) -> Result<bool, ShiftedError> {
    assert!(k >= 0 && l >= 0);
    if m >= 0 && m <= l {
        return Err(ShiftedError::ZeroDenominator);
    }
    let mut lhs = LaurentScalar::zero();
    for n in 0..=l {
        let sign = LaurentScalar::from_int(if n % 2 == 0 { 1 } else { -1 });
        let frac = &q_integer(m - l) / &q_integer(m - n);
        let term = &(&sign * &frac) * &(&q_binomial(k, l - n) * &q_binomial(k + n, k));
        lhs = &lhs + &term;
    }
    let rhs_den = q_binomial(m, l);
    if rhs_den.is_zero() {
        return Err(ShiftedError::ZeroDenominator);
    }
    let sign = LaurentScalar::from_int(if l % 2 == 0 { 1 } else { -1 });
    let rhs = &(&sign * &q_binomial(m + k, l)) / &rhs_den;
    Ok(lhs == rhs)
}

// ---------------------------------------------------------------------------
// The rank-one commutative diagram for S(x)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SDiagramReport {
    pub k: u32,
    pub a: i64,
    pub c: i64,
    /// Whether the diagram commutes with the bare product-of-brackets S(x).
    pub ok_bare: bool,
    /// Per-l ratio (true scalar)/(bare scalar), when the two paths are
    /// proportional; the diagnostic for the normalization discrepancy.
    pub discrepancies: Vec<String>,
    /// Whether the diagram commutes after the q^{-l} calibration.
    pub ok_calibrated: bool,
    pub failures: Vec<String>,
}

/// The rank-one commutative diagram comparing, on every basis line of the
/// (k+1)-dimensional irreducible, the Verma embedding by divided aF-powers
/// against the S(x)-twisted embedding, at x = q^{2(a+c)} for the integral
/// parameter chi = q^{2c}. Hypothesis: a + c >= k.
///
/// The report distinguishes the bare product-of-brackets normalization of
/// S(x) from the calibrated one: the two paths are always proportional, and
/// the measured ratio is recorded per basis line.
pub fn verify_s_diagram(k: u32, a: i64, c: i64) -> Result<SDiagramReport, ShiftedError> {
    if a + c < k as i64 {
        return Err(ShiftedError::Precondition(format!(
            "hypothesis a + c >= k fails: {} + {} < {}",
            a, c, k
        )));
    }
    let chi_value = LaurentScalar::q_power(2 * c);
    let v = Sl2Irrep { k };
    let x = ProjParam::finite(LaurentScalar::q_power(2 * (a + c)));
    let sigma_bare = s_operator_scalars(&x, k)?;
    let sigma_cal = s_operator_scalars_calibrated(&x, k)?;
    let m_total = a + c + 1;
    let a_second = -a - 2 * c - 2;
    let mut ok_bare = true;
    let mut ok_calibrated = true;
    let mut discrepancies = Vec::new();
    let mut failures = Vec::new();
    for l in 0..=k {
        // Lower path: divided power aF^{(m_l)} applied to the highest weight
        // vector with leading v_l in V (x) M_chi(a), m_l = a + (k - 2l) + c + 1.
        let m_l = a + (k as i64 - 2 * l as i64) + c + 1;
        assert!(m_l >= 0);
        let u_l = tensor_highest_weight(vec![v], a, chi_value.clone(), (vec![l], 0))?;
        let path_b = u_l.act_af_divided(m_l as u32);
        // Upper path: the image of the v_{k-l}-leading vector over the second
        // parameter under the Verma embedding aF^p -> aF^{p+m}/[m]!, scaled by
        // the S(x) entry.
        let u_prime =
            tensor_highest_weight(vec![v], a_second, chi_value.clone(), (vec![k - l], 0))?;
        let mfac = q_factorial(m_total).inverse().expect("nonzero");
        let mut embedded = TensorVermaElement::zero(vec![v], a, chi_value.clone());
        for ((levels, p), coeff) in &u_prime.terms {
            embedded.add_term(levels.clone(), p + m_total as u32, coeff * &mfac);
        }
        if path_b != embedded.scale(&sigma_bare[l as usize]) {
            ok_bare = false;
        }
        if path_b != embedded.scale(&sigma_cal[l as usize]) {
            ok_calibrated = false;
            failures.push(format!("calibrated paths differ at l = {}", l));
        }
        // Measure the true scalar against the bare one when proportional.
        let first = embedded.terms.iter().next().map(|((kk, pp), cc)| ((kk.clone(), *pp), cc.clone()));
        if let Some((key, base)) = first {
            let got = path_b
                .terms
                .get(&key)
                .cloned()
                .unwrap_or_else(LaurentScalar::zero);
            let sigma_true = &got / &base;
            if path_b == embedded.scale(&sigma_true) {
                let ratio = &sigma_true / &sigma_bare[l as usize];
                discrepancies.push(format!("l = {}: true/bare = {}", l, ratio));
            } else {
                discrepancies.push(format!("l = {}: paths not proportional", l));
            }
        }
    }
    Ok(SDiagramReport { k, a, c, ok_bare, discrepancies, ok_calibrated, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_integer;

    fn a1() -> RootSystem {
        RootSystem::new('A', 1).unwrap()
    }

    fn a2() -> RootSystem {
        RootSystem::new('A', 2).unwrap()
    }

    fn integral_chi(rs: &RootSystem, cs: &[i64]) -> ToricPoint {
        let values: Vec<LaurentScalar> =
            cs.iter().map(|&c| LaurentScalar::q_power(2 * c)).collect();
        ToricPoint::from_character(rs, &values)
    }

    #[test]
    fn integral_roots_examples() {
        let rs = a2();
        let chi = ToricPoint::from_character(&rs, &[q_integer(2), q_integer(3)]);
        let (roots, gens) = integral_roots_of_param(&rs, &chi);
        assert_eq!(roots.len(), rs.roots().len());
        assert_eq!(gens.len(), 3);

        let phi = crate::poisson::phi_all_ones(&rs);
        let chi = phi.to_toric(&rs).unwrap();
        let (roots, _) = integral_roots_of_param(&rs, &chi);
        assert!(roots.is_empty());

        // chi finite nonzero at eps1, zero at eps2: the cocycle forces the
        // eps1+eps2 entry into {0, infinity}, leaving R_chi = {eps1, -eps1}.
        let mut entries = std::collections::BTreeMap::new();
        entries.insert(vec![1, 0], ProjParam::finite(q_integer(2)));
        entries.insert(vec![0, 1], ProjParam::zero());
        entries.insert(vec![1, 1], ProjParam::zero());
        let chi = ToricPoint::from_positive_entries(&rs, entries).unwrap();
        assert!(chi.validate(&rs, false).ok);
        let (roots, _) = integral_roots_of_param(&rs, &chi);
        assert_eq!(roots, vec![vec![-1, 0], vec![1, 0]]);
    }

    #[test]
    fn shifted_dot_examples() {
        let rs = a1();
        let alpha = rs.simple_root(0);
        let chi = integral_chi(&rs, &[3]);
        let lam = Weight(vec![5]);
        assert_eq!(shifted_dot_action(&rs, &chi, &[], &lam).unwrap(), lam);
        // s ._chi lambda = lambda - ((lambda + rho, a^vee) + c) a:
        // pairing 6 + 3 = 9; alpha = 2 varpi: 5 - 18 = -13.
        let moved = shifted_dot_reflection(&rs, &chi, &alpha, &lam).unwrap();
        assert_eq!(moved, Weight(vec![-13]));
        let chi = ToricPoint::from_character(&rs, &[q_integer(2)]);
        assert!(matches!(
            shifted_dot_reflection(&rs, &chi, &alpha, &lam),
            Err(ShiftedError::NonIntegralShift(_))
        ));
    }

    #[test]
    fn shifted_dot_matches_plain_shift_on_a2() {
        // lambda -> lambda + tau intertwines the chi-shifted action with the
        // plain dot action when chi = q^{2(tau, .)} is a full character.
        let rs = a2();
        let tau = Weight(vec![2, -1]);
        let values: Vec<LaurentScalar> = (0..2)
            .map(|i| LaurentScalar::q_power(rs.pairing_weight_two_root(&tau, &rs.simple_root(i))))
            .collect();
        let chi = ToricPoint::from_character(&rs, &values);
        for w in rs.weyl_elements() {
            let word: Vec<Root> = w.word().iter().map(|&i| rs.simple_root(i)).collect();
            for lam in [Weight(vec![0, 0]), Weight(vec![1, -2]), Weight(vec![-3, 2])] {
                let shifted = shifted_dot_action(&rs, &chi, &word, &lam).unwrap();
                let plain = w
                    .apply_weight(&rs, &lam.add(&tau).add(&rs.rho()))
                    .sub(&rs.rho())
                    .sub(&tau);
                assert_eq!(shifted, plain, "w = {}", w);
            }
        }
    }

    #[test]
    fn shifted_dot_word_independence_on_a2() {
        let rs = a2();
        let chi = integral_chi(&rs, &[1, -2]);
        let lam = Weight(vec![2, 1]);
        let e1 = rs.simple_root(0);
        let e2 = rs.simple_root(1);
        let lhs =
            shifted_dot_action(&rs, &chi, &[e1.clone(), e2.clone(), e1.clone()], &lam).unwrap();
        let rhs = shifted_dot_action(&rs, &chi, &[e2.clone(), e1, e2], &lam).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dominance_examples() {
        let rs = a2();
        let chi = ToricPoint::from_character(&rs, &[q_integer(2), q_integer(3)]);
        for lam in [Weight(vec![0, 0]), Weight(vec![3, -5])] {
            for mode in [
                DominanceMode::Dominant,
                DominanceMode::Antidominant,
                DominanceMode::Simple,
                DominanceMode::ProjectiveSufficient,
            ] {
                assert!(dominance_test(&rs, &chi, &lam, &mode).holds);
            }
        }
        assert!(
            dominance_test(&rs, &chi, &Weight(vec![0, 0]), &DominanceMode::SemisimpleCategory)
                .holds
        );
        assert!(dominance_test(
            &rs,
            &chi,
            &Weight(vec![0, 0]),
            &DominanceMode::StronglyRegular(vec![Weight(vec![0, 0])])
        )
        .holds);

        // sl_2 with chi = q^{-6}, lambda = 0: 1 - 3 < 0: not dominant,
        // antidominant holds.
        let rs = a1();
        let chi = integral_chi(&rs, &[-3]);
        let lam = Weight(vec![0]);
        let dom = dominance_test(&rs, &chi, &lam, &DominanceMode::Dominant);
        assert!(!dom.holds);
        assert_eq!(dom.witnesses, vec![(vec![1], -2)]);
        assert!(dominance_test(&rs, &chi, &lam, &DominanceMode::Antidominant).holds);
    }

    #[test]
    fn dominance_matches_orbit_maximality_on_a2() {
        let rs = a2();
        for cs in [[0, 0], [1, -1], [-2, 1]] {
            let chi = integral_chi(&rs, &cs);
            for l1 in -2..=2 {
                for l2 in -2..=2 {
                    let lam = Weight(vec![l1, l2]);
                    let (orbit, maximal, minimal) =
                        shifted_orbit_maximality(&rs, &chi, &lam).unwrap();
                    assert!(orbit.len() <= 6);
                    let dom = dominance_test(&rs, &chi, &lam, &DominanceMode::Dominant).holds;
                    let anti = dominance_test(&rs, &chi, &lam, &DominanceMode::Antidominant).holds;
                    assert_eq!(dom, maximal, "lam={:?} cs={:?}", lam, cs);
                    assert_eq!(anti, minimal, "lam={:?} cs={:?}", lam, cs);
                }
            }
        }
    }

    #[test]
    fn shapovalov_examples() {
        let rs = a1();
        let chi = ToricPoint::from_character(&rs, &[q_integer(2)]);
        let r0: Vec<Root> = rs.positive_roots().cloned().collect();
        let fs = shapovalov_determinant(&rs, &vec![1], &chi, &r0);
        assert_eq!(fs.len(), 1);
        assert_eq!((fs[0].level, fs[0].exponent), (1, 1));
        assert!(shapovalov_determinant(&rs, &vec![0], &chi, &r0).is_empty());

        let rs = a2();
        let chi = ToricPoint::from_character(&rs, &[q_integer(2), q_integer(3)]);
        let r0: Vec<Root> = rs.positive_roots().cloned().collect();
        let fs = shapovalov_determinant(&rs, &vec![1, 1], &chi, &r0);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().all(|f| f.level == 1 && f.exponent == 1));
    }

    #[test]
    fn sl2_normal_order_examples() {
        let c = q_integer(2);
        let v = Sl2VermaElement::highest_vector(3, c.clone());
        let out = sl2_normal_order(&[Sl2Gen::AE], &v).unwrap();
        assert!(out.is_zero());
        // aE aF (1 (x) 1) = ((c q^{2a} - 1)/(q - q^{-1})) (1 (x) 1), a = 3.
        let out = sl2_normal_order(&[Sl2Gen::AE, Sl2Gen::AF], &v).unwrap();
        let t = &LaurentScalar::q_power(1) - &LaurentScalar::q_power(-1);
        let expect = &(&(&c * &LaurentScalar::q_power(6)) - &LaurentScalar::one()) / &t;
        assert_eq!(out.coefficients.get(&0).unwrap(), &expect);
        let out = sl2_normal_order(&[Sl2Gen::AK(1)], &v).unwrap();
        assert_eq!(out.coefficients.get(&0).unwrap(), &LaurentScalar::q_power(3));
    }

    #[test]
    fn algebra_engine_matches_verma_recursion() {
        // Two independent routes to the pairing values: ring-level normal
        // ordering evaluated at the weight, and the module-level recursion.
        for c in [LaurentScalar::zero(), q_integer(2)] {
            for a in [-1i64, 0, 2] {
                for n in 1..=4u32 {
                    let pairing = pairing_value(&c, n);
                    let mut ring_value = LaurentScalar::zero();
                    for (zpow, coeff) in &pairing {
                        ring_value = &ring_value + &(coeff * &LaurentScalar::q_power(zpow * a));
                    }
                    let mut module_value = LaurentScalar::one();
                    for p in 1..=n {
                        module_value = &module_value * &verma_ae_eigen(a, &c, p);
                    }
                    assert_eq!(ring_value, module_value, "c={} a={} n={}", c, a, n);
                }
            }
        }
    }

    #[test]
    fn degenerate_norms_derived_values() {
        // At chi = 0 the rewriting gives
        // P((aF^n)* aF^n) = (-1)^n q^{-n(n-1)/2} [n]!/(q - q^{-1})^n,
        // which follows from
        // aE aF^n - q^{-2n} aF^n aE = -q^{1-n}[n]/(q - q^{-1}) aF^{n-1}.
        let zero = LaurentScalar::zero();
        let t = &LaurentScalar::q_power(1) - &LaurentScalar::q_power(-1);
        for n in 1..=4i64 {
            let pairing = pairing_value(&zero, n as u32);
            assert_eq!(pairing.len(), 1);
            let value = pairing.get(&0).unwrap().clone();
            let sign = LaurentScalar::from_int(if n % 2 == 0 { 1 } else { -1 });
            let expect = &(&(&sign * &LaurentScalar::q_power(-n * (n - 1) / 2)) * &q_factorial(n))
                / &t.pow(n).unwrap();
            assert_eq!(value, expect, "n = {}", n);
        }
        let pairing = pairing_value(&zero, 1);
        let expect = &(-&LaurentScalar::one()) / &t;
        assert_eq!(pairing.get(&0).unwrap(), &expect);
    }

    #[test]
    fn sl2_pairing_matches_shapovalov_factorization_up_to_unit() {
        // det S_{n alpha} = unit * prod_{m=1}^n (q^2 c z^2 - q^{2m}) with the
        // unit an invertible element of the Cartan part: a nonzero element of
        // the scalar field times a power of z. The scalar part carries the
        // inherent [n]!/(q - q^{-1})^n content of the plain PBW basis.
        let c = q_integer(3);
        let t = &LaurentScalar::q_power(1) - &LaurentScalar::q_power(-1);
        for n in 1..=4u32 {
            let pairing = pairing_value(&c, n);
            let closed = closed_sl2_factorization(&c, n as i64);
            let unit = zpoly_unit_ratio(&pairing, &closed);
            let unit = unit.unwrap_or_else(|| panic!("n = {}: quotient is not a unit", n));
            // The measured unit is q^{-n(3n+1)/2} [n]! / (q - q^{-1})^n.
            let nn = n as i64;
            let expect = &(&LaurentScalar::q_power(-nn * (3 * nn + 1) / 2) * &q_factorial(nn))
                / &t.pow(nn).unwrap();
            assert_eq!(unit, expect, "n = {}", n);
        }
    }

    pub(super) fn closed_sl2_factorization(
        c: &LaurentScalar,
        n: i64,
    ) -> BTreeMap<i64, LaurentScalar> {
        let mut closed: BTreeMap<i64, LaurentScalar> = BTreeMap::new();
        closed.insert(0, LaurentScalar::one());
        for m in 1..=n {
            let mut next: BTreeMap<i64, LaurentScalar> = BTreeMap::new();
            let mut push = |key: i64, val: LaurentScalar, next: &mut BTreeMap<i64, LaurentScalar>| {
                let cur = next.get(&key).cloned().unwrap_or_else(LaurentScalar::zero);
                let sum = &cur + &val;
                if sum.is_zero() {
                    next.remove(&key);
                } else {
                    next.insert(key, sum);
                }
            };
            for (zp, coeff) in &closed {
                push(zp + 2, &(coeff * c) * &LaurentScalar::q_power(2), &mut next);
                push(*zp, -&(coeff * &LaurentScalar::q_power(2 * m)), &mut next);
            }
            closed = next;
        }
        closed
    }

    /// Divide a by b as z-polynomials; when the quotient is a single
    /// z-monomial (with any nonzero scalar coefficient), return it.
    pub(super) fn zpoly_unit_ratio(
        a: &BTreeMap<i64, LaurentScalar>,
        b: &BTreeMap<i64, LaurentScalar>,
    ) -> Option<LaurentScalar> {
        if a.is_empty() || b.is_empty() || a.len() != b.len() {
            return None;
        }
        let (la, lb) = (*a.keys().min().unwrap(), *b.keys().min().unwrap());
        let u = &a.get(&la).cloned().unwrap() / &b.get(&lb).cloned().unwrap();
        for (zp, coeff) in b {
            let expect = &u * coeff;
            let got = a.get(&(zp + la - lb)).cloned().unwrap_or_else(LaurentScalar::zero);
            if got != expect {
                return None;
            }
        }
        Some(u)
    }

    #[test]
    fn tensor_hw_vector_closed_and_solved_agree() {
        let rs = a2();
        let chi = ToricPoint::from_character(&rs, &[q_integer(2), q_integer(3)]);
        for i in 1..=3usize {
            for lam in [
                TupleWeight::canonical(vec![0, 0, 0]),
                TupleWeight::canonical(vec![2, -1, 0]),
                TupleWeight::canonical(vec![-1, 3, 1]),
            ] {
                let closed = tensor_hw_vector_closed(&chi, &lam, i).unwrap();
                let solved = tensor_hw_vector_solved(&chi, &lam, i).unwrap();
                assert_eq!(closed, solved, "i = {} lam = {:?}", i, lam);
            }
        }
        let hw = tensor_hw_vector_closed(&chi, &TupleWeight::canonical(vec![1, 0, 0]), 1).unwrap();
        assert!(hw.correction.is_none());
    }

    #[test]
    fn gamma_oracle_matches_invariant_coefficient() {
        // The assembled gamma(2,1;lambda) equals the closed bracket form
        // [(lambda, a^vee) + 2; chi]/[(lambda, a^vee) + 1; chi], i.e.
        // ([2]/[1]) times the invariant coefficient at mu = nu = rho, w = 1.
        let rs = a1();
        for c in [q_integer(2), &q_integer(3) * &LaurentScalar::q_power(1)] {
            let chi = ToricPoint::from_character(&rs, &[c.clone()]);
            for a in [-2i64, 0, 1, 3] {
                let gamma = gamma_21_oracle(a, &c).unwrap();
                let closed =
                    bracket_ratio(a + 2, a + 1, &chi.entry(&rs.simple_root(0)), 1).unwrap();
                assert_eq!(gamma, closed, "a = {} c = {}", a, c);
                let rho = rs.rho();
                let cval = invariant_coefficient(
                    &rs,
                    &rho,
                    &rho,
                    &WeylElt::identity(1),
                    0,
                    &chi,
                    &Weight(vec![a]),
                )
                .unwrap();
                let expect = &(&q_integer(1) / &q_integer(2)) * &closed;
                assert_eq!(cval, expect);
            }
        }
    }

    #[test]
    fn invariant_coefficient_examples() {
        // chi = infinity at eps, w = identity:
        // c = q^{(mu, eps^vee)} [(nu, eps^vee)]/[(mu + nu, eps^vee)].
        let rs = a2();
        let phi = crate::poisson::phi_all_ones(&rs);
        let chi = phi.to_toric(&rs).unwrap();
        let mu = Weight(vec![2, 1]);
        let nu = Weight(vec![1, 1]);
        let lam = Weight(vec![1, -1]);
        let c =
            invariant_coefficient(&rs, &mu, &nu, &WeylElt::identity(2), 0, &chi, &lam).unwrap();
        let mu_pair = rs.pairing_weight_coroot(&mu, &rs.simple_root(0));
        let nu_pair = rs.pairing_weight_coroot(&nu, &rs.simple_root(0));
        let expect = &(&LaurentScalar::q_power(mu_pair) * &q_integer(nu_pair))
            / &q_integer(mu_pair + nu_pair);
        assert_eq!(c, expect);

        // w-twist consistency for a simple reflection:
        // c_{mu,nu;s,eps}(chi; lambda) = c_{mu,nu;1,eps}(s.chi; s(lambda)).
        let chi = ToricPoint::from_character(&rs, &[q_integer(2), q_integer(3)]);
        let s = WeylElt::simple(&rs, 0);
        let lhs = invariant_coefficient(&rs, &mu, &nu, &s, 0, &chi, &lam).unwrap();
        let twisted = chi.shifted_weyl(&rs, &s);
        let rhs = invariant_coefficient(
            &rs,
            &mu,
            &nu,
            &WeylElt::identity(2),
            0,
            &twisted,
            &s.apply_weight(&rs, &lam),
        )
        .unwrap();
        assert_eq!(lhs, rhs);

        assert!(invariant_coefficient(
            &rs,
            &Weight(vec![0, 1]),
            &nu,
            &WeylElt::identity(2),
            0,
            &chi,
            &lam
        )
        .is_err());
    }

    #[test]
    fn s_operator_examples() {
        // l = 0: S(x) v_0 = q^k v_k.
        let x = ProjParam::finite(q_integer(2));
        for k in 0..=3u32 {
            let s = s_operator_scalars(&x, k).unwrap();
            assert_eq!(s[0], LaurentScalar::q_power(k as i64));
        }
        // Weight reversal shape: the matrix is purely antidiagonal. The point
        // x = [1:1] itself makes [0; x] vanish (B(0; x, 1) = 0, excluded by
        // the precondition), so probe at a nearby nonsingular x.
        let x11 = ProjParam::finite(LaurentScalar::q_power(1));
        let m = s_operator_matrix(&x11, 1).unwrap();
        assert!(!m[1][0].is_zero() && !m[0][1].is_zero());
        assert!(m[0][0].is_zero() && m[1][1].is_zero());
        assert!(matches!(
            s_operator_scalars(&ProjParam::finite(LaurentScalar::one()), 1),
            Err(ShiftedError::SingularParameter(_))
        ));
        // x = q^{2m}: brackets reduce to shifted q-integers.
        let shift = 3i64;
        let x = ProjParam::finite(LaurentScalar::q_power(2 * shift));
        let k = 3u32;
        let s = s_operator_scalars(&x, k).unwrap();
        for l in 0..=k {
            let mut expect = &LaurentScalar::from_int(if l % 2 == 0 { 1 } else { -1 })
                * &LaurentScalar::q_power(k as i64 - l as i64);
            for j in 0..l as i64 {
                expect = &expect
                    * &(&q_integer(1 + k as i64 - l as i64 - j + shift) / &q_integer(shift - j));
            }
            assert_eq!(s[l as usize], expect, "l = {}", l);
        }
        // S(x) squared is diagonal with the symmetric entries sigma_l sigma_{k-l}.
        let x = ProjParam::finite(q_integer(3));
        for k in 1..=3u32 {
            let s = s_operator_scalars(&x, k).unwrap();
            for l in 0..=k {
                let fwd = &s[l as usize] * &s[(k - l) as usize];
                let bwd = &s[(k - l) as usize] * &s[l as usize];
                assert_eq!(fwd, bwd);
            }
        }
        // Singular parameter: [-1; x] vanishes at x = q^2.
        let xq = ProjParam::finite(LaurentScalar::q_power(2));
        assert!(matches!(
            s_operator_scalars(&xq, 2),
            Err(ShiftedError::SingularParameter(_))
        ));
    }

    #[test]
    fn fraction_identity_examples() {
        assert!(verify_fraction_identity(0, 0, 5).unwrap());
        assert!(verify_fraction_identity(1, 1, 2).unwrap());
        assert!(verify_fraction_identity(3, 2, -4).unwrap());
        assert!(verify_fraction_identity(1, 1, 1).is_err());
    }

    #[test]
    fn s_diagram_small() {
        // The bare product-of-brackets normalization misses commutativity by
        // exactly q^{-l} on the l-th line; the calibrated scalars commute.
        for (k, a, c) in [(1u32, 1i64, 0i64), (1, 2, -1), (2, 2, 0), (2, 0, 3), (3, 3, 0)] {
            let report = verify_s_diagram(k, a, c).unwrap();
            assert!(
                report.ok_calibrated,
                "k={} a={} c={} failures={:?}",
                k, a, c, report.failures
            );
            assert_eq!(report.ok_bare, k == 0);
            for (l, line) in report.discrepancies.iter().enumerate() {
                let expect = format!("l = {}: true/bare = {}", l, LaurentScalar::q_power(-(l as i64)));
                assert_eq!(line, &expect);
            }
        }
        assert!(verify_s_diagram(2, 0, 0).is_err());
    }
}
