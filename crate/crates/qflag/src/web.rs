//! The quantum exterior algebra for sl_n and its morphism calculus: the
//! irreducible summands of the exterior powers and their duals, wedge
//! multiplication and comultiplication, evaluations and coevaluations, the
//! quantum-group generator actions, the defining relation suite, and the
//! unitary structure.
//!
//! Weights of sl_n pair with denominator n and the determinant normalization
//! involves q^{n(n+1)/4}, so all scalars in this module live in the rescaled
//! variable t with t^D = q for a context-wide denominator D. The context
//! exposes q-powers with rational exponents; exactness is preserved because
//! every exponent that occurs has denominator dividing D.

use crate::scalar::{q_binomial, LaurentScalar};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WebError {
    #[error("exterior power size {size} exceeds the rank bound {n}")]
    SizeOverflow { size: i64, n: usize },
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
}

fn lcm(a: i64, b: i64) -> i64 {
    fn gcd(mut a: i64, mut b: i64) -> i64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    a / gcd(a, b) * b
}

/// Ambient parameters: the rank n of sl_n and the exponent scale D (t^D = q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WebContext {
    n: usize,
    scale: i64,
}

impl WebContext {
    pub fn new(n: usize) -> Self {
        assert!((1..=16).contains(&n));
        WebContext { n, scale: lcm(2 * n as i64, 4) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// q^e as an element of the rescaled coefficient field.
    pub fn q_pow(&self, e: i64) -> LaurentScalar {
        LaurentScalar::q_power(e * self.scale)
    }

    /// q^{num/den}; the exponent must be representable at the scale.
    pub fn q_pow_frac(&self, num: i64, den: i64) -> LaurentScalar {
        assert!(den != 0);
        let e = num * self.scale;
        assert!(e % den == 0, "exponent {}/{} not representable at scale {}", num, den, self.scale);
        LaurentScalar::q_power(e / den)
    }

    /// (-q)^e for integer e (negative exponents allowed).
    fn neg_q_pow(&self, e: i64) -> LaurentScalar {
        let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
        &LaurentScalar::from_int(sign) * &self.q_pow(e)
    }

    pub fn q_int(&self, n: i64) -> LaurentScalar {
        crate::scalar::q_integer(n).substitute_power(self.scale)
    }

    pub fn q_bin(&self, n: i64, k: i64) -> LaurentScalar {
        q_binomial(n, k).substitute_power(self.scale)
    }

    /// (2 rho, [e_S]) = sum_{j in S} (n + 1 - 2j).
    fn two_rho_pairing(&self, mask: u32) -> i64 {
        let n = self.n as i64;
        mask_iter(mask).map(|j| n + 1 - 2 * j as i64).sum()
    }

    /// The determinant normalization exponent n(n+1)/4 in t-units.
    fn det_exponent(&self) -> i64 {
        let n = self.n as i64;
        let e = n * (n + 1) * self.scale;
        debug_assert!(e % 4 == 0);
        e / 4
    }
}

/// Iterate the 1-based elements of a subset mask in increasing order.
fn mask_iter(mask: u32) -> impl Iterator<Item = u32> {
    (0..32u32).filter(move |i| mask & (1 << i) != 0).map(|i| i + 1)
}

fn mask_len(mask: u32) -> usize {
    mask.count_ones() as usize
}

fn full_mask(n: usize) -> u32 {
    (1u32 << n) - 1
}

/// ell(S, T) = #{(i, j) in S x T : i < j}.
fn ell(s: u32, t: u32) -> i64 {
    let mut count = 0i64;
    for i in mask_iter(s) {
        for j in mask_iter(t) {
            if i < j {
                count += 1;
            }
        }
    }
    count
}

fn subsets_of(mask: u32, size: usize) -> Vec<u32> {
    let elements: Vec<u32> = (0..32).filter(|i| mask & (1 << i) != 0).collect();
    let mut out = Vec::new();
    let m = elements.len();
    if size > m {
        return out;
    }
    if size == 0 {
        return vec![0];
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let sub = idx.iter().fold(0u32, |acc, &i| acc | (1 << elements[i]));
        out.push(sub);
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + m - size {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn masks_of_size(n: usize, size: usize) -> Vec<u32> {
    subsets_of(full_mask(n), size)
}

/// An ordered tensor product of exterior powers and duals: positive entries
/// are primal factors, negative entries duals; 0 is the trivial factor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TensorSpace {
    n: usize,
    factors: Vec<i8>,
}

impl TensorSpace {
    pub fn new(ctx: &WebContext, factors: Vec<i8>) -> Result<Self, WebError> {
        for &k in &factors {
            if (k.unsigned_abs() as usize) > ctx.n {
                return Err(WebError::SizeOverflow { size: k as i64, n: ctx.n });
            }
        }
        Ok(TensorSpace { n: ctx.n, factors })
    }

    pub fn factors(&self) -> &[i8] {
        &self.factors
    }

    pub fn scalar(ctx: &WebContext) -> Self {
        TensorSpace { n: ctx.n, factors: vec![] }
    }

    /// Basis multi-indices: one subset mask per factor, sizes matching.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        let mut out: Vec<Vec<u32>> = vec![vec![]];
        for &k in &self.factors {
            let size = k.unsigned_abs() as usize;
            let masks = masks_of_size(self.n, size);
            let mut next = Vec::with_capacity(out.len() * masks.len());
            for prefix in &out {
                for &m in &masks {
                    let mut v = prefix.clone();
                    v.push(m);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    pub fn tensor(&self, other: &TensorSpace) -> TensorSpace {
        assert_eq!(self.n, other.n);
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        TensorSpace { n: self.n, factors }
    }

    pub fn dim(&self) -> usize {
        self.factors
            .iter()
            .map(|&k| binom(self.n, k.unsigned_abs() as usize))
            .product()
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl fmt::Display for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&k| {
                if k < 0 {
                    format!("(L^{})*", -k)
                } else {
                    format!("L^{}", k)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" (x) "))
    }
}

/// A vector in a tensor space: sparse map from basis multi-indices to scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeVector {
    pub space: TensorSpace,
    terms: BTreeMap<Vec<u32>, LaurentScalar>,
}

impl WedgeVector {
    pub fn zero(space: TensorSpace) -> Self {
        WedgeVector { space, terms: BTreeMap::new() }
    }

    pub fn basis_vector(space: TensorSpace, index: Vec<u32>) -> Self {
        let mut v = WedgeVector::zero(space);
        v.add_term(index, LaurentScalar::one());
        v
    }

    pub fn add_term(&mut self, index: Vec<u32>, coeff: LaurentScalar) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(index.len(), self.space.factors.len());
        use std::collections::btree_map::Entry;
        match self.terms.entry(index) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &LaurentScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: &[u32]) -> LaurentScalar {
        self.terms.get(index).cloned().unwrap_or_else(LaurentScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &LaurentScalar) -> WedgeVector {
        if c.is_zero() {
            return WedgeVector::zero(self.space.clone());
        }
        WedgeVector {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &WedgeVector) -> WedgeVector {
        assert_eq!(self.space, other.space);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &WedgeVector) -> WedgeVector {
        self.add(&other.scale(&LaurentScalar::from_int(-1)))
    }

    pub fn tensor(&self, other: &WedgeVector) -> WedgeVector {
        let space = self.space.tensor(&other.space);
        let mut out = WedgeVector::zero(space);
        for (k1, v1) in &self.terms {
            for (k2, v2) in &other.terms {
                let mut k = k1.clone();
                k.extend_from_slice(k2);
                out.add_term(k, v1 * v2);
            }
        }
        out
    }
}

/// A sparse linear map, stored by columns over the source basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMor {
    pub source: TensorSpace,
    pub target: TensorSpace,
    columns: BTreeMap<Vec<u32>, WedgeVector>,
}

impl SparseMor {
    pub fn zero(source: TensorSpace, target: TensorSpace) -> Self {
        SparseMor { source, target, columns: BTreeMap::new() }
    }

    pub fn identity(space: TensorSpace) -> Self {
        let mut m = SparseMor::zero(space.clone(), space.clone());
        for idx in space.basis() {
            m.set_column(idx.clone(), WedgeVector::basis_vector(space.clone(), idx));
        }
        m
    }

    pub fn set_column(&mut self, index: Vec<u32>, value: WedgeVector) {
        assert_eq!(value.space, self.target);
        if value.is_zero() {
            self.columns.remove(&index);
        } else {
            self.columns.insert(index, value);
        }
    }

    pub fn column(&self, index: &[u32]) -> WedgeVector {
        self.columns
            .get(index)
            .cloned()
            .unwrap_or_else(|| WedgeVector::zero(self.target.clone()))
    }

    pub fn apply(&self, v: &WedgeVector) -> WedgeVector {
        assert_eq!(v.space, self.source, "apply: space mismatch");
        let mut out = WedgeVector::zero(self.target.clone());
        for (idx, c) in &v.terms {
            let col = self.column(idx);
            out = out.add(&col.scale(c));
        }
        out
    }

    /// self after other: (self.compose(other))(v) = self(other(v)).
    pub fn compose(&self, other: &SparseMor) -> SparseMor {
        assert_eq!(
            other.target, self.source,
            "compose: inner spaces differ: {} vs {}",
            other.target, self.source
        );
        let mut out = SparseMor::zero(other.source.clone(), self.target.clone());
        for (idx, col) in &other.columns {
            out.set_column(idx.clone(), self.apply(col));
        }
        out
    }

    pub fn tensor(&self, other: &SparseMor) -> SparseMor {
        let source = self.source.tensor(&other.source);
        let target = self.target.tensor(&other.target);
        let mut out = SparseMor::zero(source.clone(), target);
        for idx in source.basis() {
            let (a, b) = idx.split_at(self.source.factors.len());
            let va = self.column(a);
            let vb = other.column(b);
            let v = va.tensor(&vb);
            if !v.is_zero() {
                out.set_column(idx, v);
            }
        }
        out
    }

    pub fn add(&self, other: &SparseMor) -> SparseMor {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let mut out = self.clone();
        for (idx, col) in &other.columns {
            let sum = out.column(idx).add(col);
            out.set_column(idx.clone(), sum);
        }
        out
    }

    pub fn sub(&self, other: &SparseMor) -> SparseMor {
        self.add(&other.scale(&LaurentScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &LaurentScalar) -> SparseMor {
        let mut out = SparseMor::zero(self.source.clone(), self.target.clone());
        if c.is_zero() {
            return out;
        }
        for (idx, col) in &self.columns {
            out.set_column(idx.clone(), col.scale(c));
        }
        out
    }

    /// The scalar c with self = c * id, if the map is such a multiple.
    pub fn as_scalar_multiple_of_identity(&self) -> Option<LaurentScalar> {
        if self.source != self.target {
            return None;
        }
        let basis = self.source.basis();
        let mut c: Option<LaurentScalar> = None;
        for idx in &basis {
            let col = self.column(idx);
            let diag = col.coeff(idx);
            for (other, v) in col.terms() {
                if other != idx && !v.is_zero() {
                    return None;
                }
            }
            match &c {
                None => c = Some(diag),
                Some(prev) => {
                    if *prev != diag {
                        return None;
                    }
                }
            }
        }
        c
    }

    /// First basis index where the two maps differ, with both images.
    pub fn first_difference(&self, other: &SparseMor) -> Option<(Vec<u32>, WedgeVector, WedgeVector)> {
        if self.source != other.source || self.target != other.target {
            return None;
        }
        for idx in self.source.basis() {
            let a = self.column(&idx);
            let b = other.column(&idx);
            if a != b {
                return Some((idx, a, b));
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------
// Generating morphisms
// ---------------------------------------------------------------------------

/// Wedge multiplication M_{k,l}: L^k (x) L^l -> L^{k+l},
/// (x_T, x_S) -> (-q)^{ell(S,T)} x_{S cup T} on disjoint pairs.
/// The first tensor factor carries the subset named T.
pub fn wedge_multiply(ctx: &WebContext, k: usize, l: usize) -> Result<SparseMor, WebError> {
    if k + l > ctx.n {
        return Err(WebError::SizeOverflow { size: (k + l) as i64, n: ctx.n });
    }
    let source = TensorSpace::new(ctx, vec![k as i8, l as i8])?;
    let target = TensorSpace::new(ctx, vec![(k + l) as i8])?;
    let mut m = SparseMor::zero(source, target.clone());
    for t_mask in masks_of_size(ctx.n, k) {
        for s_mask in masks_of_size(ctx.n, l) {
            if t_mask & s_mask != 0 {
                continue;
            }
            let coeff = ctx.neg_q_pow(ell(s_mask, t_mask));
            let mut col = WedgeVector::zero(target.clone());
            col.add_term(vec![s_mask | t_mask], coeff);
            m.set_column(vec![t_mask, s_mask], col);
        }
    }
    Ok(m)
}

/// Wedge comultiplication M'_{k,l}: L^{k+l} -> L^k (x) L^l,
/// x_S -> (-1)^{kl} sum_{T subset S, |T| = l} (-q)^{-ell(S\T, T)} x_{S\T} (x) x_T.
pub fn wedge_comultiply(ctx: &WebContext, k: usize, l: usize) -> Result<SparseMor, WebError> {
    if k + l > ctx.n {
        return Err(WebError::SizeOverflow { size: (k + l) as i64, n: ctx.n });
    }
    let source = TensorSpace::new(ctx, vec![(k + l) as i8])?;
    let target = TensorSpace::new(ctx, vec![k as i8, l as i8])?;
    let sign = LaurentScalar::from_int(if (k * l) % 2 == 0 { 1 } else { -1 });
    let mut m = SparseMor::zero(source, target.clone());
    for s_mask in masks_of_size(ctx.n, k + l) {
        let mut col = WedgeVector::zero(target.clone());
        for t_mask in subsets_of(s_mask, l) {
            let rest = s_mask & !t_mask;
            let coeff = &sign * &ctx.neg_q_pow(-ell(rest, t_mask));
            col.add_term(vec![rest, t_mask], coeff);
        }
        m.set_column(vec![s_mask], col);
    }
    Ok(m)
}

/// The identification L^n ~ 1 via x_{1..n} -> q^{n(n+1)/4}.
pub fn det_to_scalar(ctx: &WebContext) -> SparseMor {
    let source = TensorSpace::new(ctx, vec![ctx.n as i8]).unwrap();
    let target = TensorSpace::scalar(ctx);
    let mut m = SparseMor::zero(source, target.clone());
    let mut col = WedgeVector::zero(target);
    col.add_term(vec![], LaurentScalar::q_power(ctx.det_exponent()));
    m.set_column(vec![full_mask(ctx.n)], col);
    m
}

pub fn scalar_to_det(ctx: &WebContext) -> SparseMor {
    let source = TensorSpace::scalar(ctx);
    let target = TensorSpace::new(ctx, vec![ctx.n as i8]).unwrap();
    let mut m = SparseMor::zero(source, target.clone());
    let mut col = WedgeVector::zero(target);
    col.add_term(vec![full_mask(ctx.n)], LaurentScalar::q_power(-ctx.det_exponent()));
    m.set_column(vec![], col);
    m
}

/// M_{k, n-k} followed by the determinant identification: L^k (x) L^{n-k} -> 1.
pub fn wedge_multiply_to_scalar(ctx: &WebContext, k: usize) -> Result<SparseMor, WebError> {
    Ok(det_to_scalar(ctx).compose(&wedge_multiply(ctx, k, ctx.n - k)?))
}

/// The determinant identification followed by M'_{k, n-k}: 1 -> L^k (x) L^{n-k}.
pub fn wedge_comultiply_from_scalar(ctx: &WebContext, k: usize) -> Result<SparseMor, WebError> {
    Ok(wedge_comultiply(ctx, k, ctx.n - k)?.compose(&scalar_to_det(ctx)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum EvalCoevKind {
    EpsPlus,
    EtaPlus,
    EpsMinus,
    EtaMinus,
}

/// Evaluations and coevaluations with the K_{2 rho} twists:
/// eps+ : (L^k)* (x) L^k -> 1, f (x) v -> f(v);
/// eta+ : 1 -> (L^k)* (x) L^k, 1 -> sum e^S (x) K_{2 rho} x_S;
/// eps- : L^k (x) (L^k)* -> 1, v (x) f -> f(K_{-2 rho} v);
/// eta- : 1 -> L^k (x) (L^k)*, 1 -> sum x_S (x) e^S.
///
/// The rho-signs in eta+ and eps- are the ones forced by equivariance under
/// the coproduct Delta(E) = E (x) 1 + K (x) E together with the antipode
/// action on duals (the square of the antipode is conjugation by K_{-2 rho}).
pub fn eval_coev(ctx: &WebContext, kind: EvalCoevKind, k: usize) -> Result<SparseMor, WebError> {
    if k > ctx.n {
        return Err(WebError::SizeOverflow { size: k as i64, n: ctx.n });
    }
    let primal = k as i8;
    let dual = -(k as i8);
    let scalar = TensorSpace::scalar(ctx);
    match kind {
        EvalCoevKind::EpsPlus => {
            let source = TensorSpace::new(ctx, vec![dual, primal])?;
            let mut m = SparseMor::zero(source, scalar.clone());
            for s in masks_of_size(ctx.n, k) {
                let mut col = WedgeVector::zero(scalar.clone());
                col.add_term(vec![], LaurentScalar::one());
                m.set_column(vec![s, s], col);
            }
            Ok(m)
        }
        EvalCoevKind::EtaPlus => {
            let target = TensorSpace::new(ctx, vec![dual, primal])?;
            let mut m = SparseMor::zero(scalar, target.clone());
            let mut col = WedgeVector::zero(target);
            for s in masks_of_size(ctx.n, k) {
                col.add_term(vec![s, s], ctx.q_pow(ctx.two_rho_pairing(s)));
            }
            m.set_column(vec![], col);
            Ok(m)
        }
        EvalCoevKind::EpsMinus => {
            let source = TensorSpace::new(ctx, vec![primal, dual])?;
            let mut m = SparseMor::zero(source, scalar.clone());
            for s in masks_of_size(ctx.n, k) {
                let mut col = WedgeVector::zero(scalar.clone());
                col.add_term(vec![], ctx.q_pow(-ctx.two_rho_pairing(s)));
                m.set_column(vec![s, s], col);
            }
            Ok(m)
        }
        EvalCoevKind::EtaMinus => {
            let target = TensorSpace::new(ctx, vec![primal, dual])?;
            let mut m = SparseMor::zero(scalar, target.clone());
            let mut col = WedgeVector::zero(target);
            for s in masks_of_size(ctx.n, k) {
                col.add_term(vec![s, s], LaurentScalar::one());
            }
            m.set_column(vec![], col);
            Ok(m)
        }
    }
}

// ---------------------------------------------------------------------------
// Generator actions
// ---------------------------------------------------------------------------

/// A quantum-group generator of U_q(sl_n): E_i, F_i (1 <= i <= n-1), or
/// K_lambda for an integral weight written as an n-tuple modulo all-ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
    K(Vec<i64>),
}

/// Action on a single primal factor basis element.
fn act_primal(ctx: &WebContext, gen: &Generator, mask: u32) -> Vec<(u32, LaurentScalar)> {
    match gen {
        Generator::E(i) => {
            let (bi, bi1) = (1u32 << (i - 1), 1u32 << *i);
            if mask & bi1 != 0 && mask & bi == 0 {
                vec![((mask & !bi1) | bi, LaurentScalar::one())]
            } else {
                vec![]
            }
        }
        Generator::F(i) => {
            let (bi, bi1) = (1u32 << (i - 1), 1u32 << *i);
            if mask & bi != 0 && mask & bi1 == 0 {
                vec![((mask & !bi) | bi1, LaurentScalar::one())]
            } else {
                vec![]
            }
        }
        Generator::K(lambda) => {
            vec![(mask, ctx.q_pow_frac(k_exponent_numer(ctx, lambda, mask), ctx.n as i64))]
        }
    }
}

/// n * (lambda, [e_S]) for the centered representative of lambda.
fn k_exponent_numer(ctx: &WebContext, lambda: &[i64], mask: u32) -> i64 {
    let n = ctx.n as i64;
    let total: i64 = lambda.iter().sum();
    let size = mask_len(mask) as i64;
    let on_set: i64 = mask_iter(mask).map(|j| lambda[(j - 1) as usize]).sum();
    n * on_set - size * total
}

/// Action on a dual factor, through the antipode: (x f)(v) = f(S(x) v).
fn act_dual(ctx: &WebContext, gen: &Generator, mask: u32) -> Vec<(u32, LaurentScalar)> {
    match gen {
        // E_i e^T = -q^{-1} e^{(T\i) cup {i+1}} when i in T, i+1 not in T.
        Generator::E(i) => {
            let (bi, bi1) = (1u32 << (i - 1), 1u32 << *i);
            if mask & bi != 0 && mask & bi1 == 0 {
                let c = &LaurentScalar::from_int(-1) * &ctx.q_pow(-1);
                vec![((mask & !bi) | bi1, c)]
            } else {
                vec![]
            }
        }
        // F_i e^T = -q e^{(T\{i+1}) cup {i}} when i+1 in T, i not in T.
        Generator::F(i) => {
            let (bi, bi1) = (1u32 << (i - 1), 1u32 << *i);
            if mask & bi1 != 0 && mask & bi == 0 {
                let c = &LaurentScalar::from_int(-1) * &ctx.q_pow(1);
                vec![((mask & !bi1) | bi, c)]
            } else {
                vec![]
            }
        }
        Generator::K(lambda) => {
            vec![(mask, ctx.q_pow_frac(-k_exponent_numer(ctx, lambda, mask), ctx.n as i64))]
        }
    }
}

fn act_factor(
    ctx: &WebContext,
    gen: &Generator,
    factor: i8,
    mask: u32,
) -> Vec<(u32, LaurentScalar)> {
    if factor < 0 {
        act_dual(ctx, gen, mask)
    } else {
        act_primal(ctx, gen, mask)
    }
}

/// K_{eps_i}-eigenvalue exponent on one factor; always an integer since
/// (eps_i, [e_S]) = [i in S] - [i+1 in S].
fn k_simple_exponent(factor: i8, i: usize, mask: u32) -> i64 {
    let (bi, bi1) = (1u32 << (i - 1), 1u32 << i);
    let e = i64::from(mask & bi != 0) - i64::from(mask & bi1 != 0);
    if factor < 0 {
        -e
    } else {
        e
    }
}

/// Action of a generator on a tensor-product vector via the iterated
/// coproduct: Delta(E) = E (x) 1 + K (x) E, Delta(F) = F (x) K^{-1} + 1 (x) F,
/// Delta(K) = K (x) K.
pub fn generator_action(ctx: &WebContext, gen: &Generator, v: &WedgeVector) -> WedgeVector {
    let factors = v.space.factors().to_vec();
    let m = factors.len();
    let mut out = WedgeVector::zero(v.space.clone());
    for (idx, coeff) in v.terms() {
        match gen {
            Generator::K(_) => {
                let mut c = coeff.clone();
                for (slot, &f) in factors.iter().enumerate() {
                    let acts = act_factor(ctx, gen, f, idx[slot]);
                    debug_assert_eq!(acts.len(), 1);
                    c = &c * &acts[0].1;
                }
                out.add_term(idx.clone(), c);
            }
            Generator::E(i) => {
                // Slot j gets E; slots before j get K_i.
                for j in 0..m {
                    for (new_mask, c_act) in act_factor(ctx, gen, factors[j], idx[j]) {
                        let mut c = &*coeff * &c_act;
                        for slot in 0..j {
                            let e = k_simple_exponent(factors[slot], *i, idx[slot]);
                            if e != 0 {
                                c = &c * &ctx.q_pow(e);
                            }
                        }
                        let mut new_idx = idx.clone();
                        new_idx[j] = new_mask;
                        out.add_term(new_idx, c);
                    }
                }
            }
            Generator::F(i) => {
                // Slot j gets F; slots after j get K_i^{-1}.
                for j in 0..m {
                    for (new_mask, c_act) in act_factor(ctx, gen, factors[j], idx[j]) {
                        let mut c = &*coeff * &c_act;
                        for slot in j + 1..m {
                            let e = k_simple_exponent(factors[slot], *i, idx[slot]);
                            if e != 0 {
                                c = &c * &ctx.q_pow(-e);
                            }
                        }
                        let mut new_idx = idx.clone();
                        new_idx[j] = new_mask;
                        out.add_term(new_idx, c);
                    }
                }
            }
        }
    }
    out
}

/// The generator action as a morphism on a whole space.
pub fn generator_matrix(ctx: &WebContext, gen: &Generator, space: &TensorSpace) -> SparseMor {
    let mut m = SparseMor::zero(space.clone(), space.clone());
    for idx in space.basis() {
        let v = WedgeVector::basis_vector(space.clone(), idx.clone());
        let image = generator_action(ctx, gen, &v);
        if !image.is_zero() {
            m.set_column(idx, image);
        }
    }
    m
}

/// The tensor-embedding oracle for the closed-form action on L^k: embed via
/// iterated comultiplication into (L^1)^(x k), act there, project back via
/// iterated multiplication, divide by the bubble scalar.
pub fn embedding_oracle_action(
    ctx: &WebContext,
    gen: &Generator,
    k: usize,
) -> Result<SparseMor, WebError> {
    let mut emb = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
    let mut proj = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
    for step in 0..k.saturating_sub(1) {
        // After `step` peels the shape is L^1 (x) ... (x) L^1 (step copies)
        // followed by L^{k-step}.
        let mut layer_comul: Option<SparseMor> = None;
        let mut layer_mul: Option<SparseMor> = None;
        for piece in 0..=step {
            let (c, m) = if piece < step {
                let id = SparseMor::identity(TensorSpace::new(ctx, vec![1])?);
                (id.clone(), id)
            } else {
                (
                    wedge_comultiply(ctx, 1, k - step - 1)?,
                    wedge_multiply(ctx, 1, k - step - 1)?,
                )
            };
            layer_comul = Some(match layer_comul {
                None => c,
                Some(acc) => acc.tensor(&c),
            });
            layer_mul = Some(match layer_mul {
                None => m,
                Some(acc) => acc.tensor(&m),
            });
        }
        emb = layer_comul.unwrap().compose(&emb);
        proj = proj.compose(&layer_mul.unwrap());
    }
    let bubble = proj
        .compose(&emb)
        .as_scalar_multiple_of_identity()
        .expect("projection of the embedding is a scalar");
    let tensor_space = emb.target.clone();
    let g = generator_matrix(ctx, gen, &tensor_space);
    let composed = proj.compose(&g).compose(&emb);
    Ok(composed.scale(&bubble.inverse().expect("nonzero bubble")))
}

// ---------------------------------------------------------------------------
// Inner products and adjoints
// ---------------------------------------------------------------------------

/// Squared norm of a basis element of one factor. Primal factors carry
/// <x_S, x_S> = q^{sum S}; dual factors carry the induced pairing
/// <e^S, e^S> = q^{-(2 rho, [e_S]) - sum S} = q^{sum S - k(n+1)}, which is
/// the unique form (up to scale) that is unitary for the star structure and
/// makes the evaluation/coevaluation pairs mutually adjoint.
fn factor_norm(ctx: &WebContext, factor: i8, mask: u32) -> LaurentScalar {
    let sum: i64 = mask_iter(mask).map(|j| j as i64).sum();
    if factor >= 0 {
        ctx.q_pow(sum)
    } else {
        ctx.q_pow(-ctx.two_rho_pairing(mask) - sum)
    }
}

fn basis_norm(ctx: &WebContext, space: &TensorSpace, idx: &[u32]) -> LaurentScalar {
    let mut out = LaurentScalar::one();
    for (slot, &f) in space.factors().iter().enumerate() {
        out = &out * &factor_norm(ctx, f, idx[slot]);
    }
    out
}

/// Exact inner product of two vectors in the same space.
pub fn inner_product(
    ctx: &WebContext,
    a: &WedgeVector,
    b: &WedgeVector,
) -> Result<LaurentScalar, WebError> {
    if a.space != b.space {
        return Err(WebError::SpaceMismatch(format!("{} vs {}", a.space, b.space)));
    }
    let mut out = LaurentScalar::zero();
    for (idx, ca) in a.terms() {
        let cb = b.coeff(idx);
        if cb.is_zero() {
            continue;
        }
        out = &out + &(&(&*ca * &cb) * &basis_norm(ctx, &a.space, idx));
    }
    Ok(out)
}

/// Adjoint with respect to the inner products on source and target.
pub fn adjoint(ctx: &WebContext, m: &SparseMor) -> SparseMor {
    let mut out = SparseMor::zero(m.target.clone(), m.source.clone());
    // <m(v), u>_target = <v, m*(u)>_source
    // => m*(u) = sum_v <m(v), u> / <v, v> * v.
    for u in m.target.basis() {
        let nu = basis_norm(ctx, &m.target, &u);
        let mut col = WedgeVector::zero(m.source.clone());
        for (v_idx, v_col) in &m.columns {
            let entry = v_col.coeff(&u);
            if entry.is_zero() {
                continue;
            }
            let nv = basis_norm(ctx, &m.source, v_idx);
            col.add_term(v_idx.clone(), &(&entry * &nu) / &nv);
        }
        out.set_column(u, col);
    }
    out
}

/// The star structure on generators: E_i^* = K_i F_i, F_i^* = E_i K_i^{-1},
/// K^* = K, as a morphism on the given space.
pub fn generator_star_matrix(ctx: &WebContext, gen: &Generator, space: &TensorSpace) -> SparseMor {
    match gen {
        Generator::K(lambda) => generator_matrix(ctx, &Generator::K(lambda.clone()), space),
        Generator::E(i) => {
            let eps = eps_tuple(ctx, *i);
            let f = generator_matrix(ctx, &Generator::F(*i), space);
            let k = generator_matrix(ctx, &Generator::K(eps), space);
            k.compose(&f)
        }
        Generator::F(i) => {
            let eps = eps_tuple(ctx, *i).iter().map(|c| -c).collect();
            let e = generator_matrix(ctx, &Generator::E(*i), space);
            let k = generator_matrix(ctx, &Generator::K(eps), space);
            e.compose(&k)
        }
    }
}

fn eps_tuple(ctx: &WebContext, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; ctx.n];
    v[i - 1] = 1;
    v[i] = -1;
    v
}

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RelationId {
    Conjugation1,
    Conjugation2,
    Rotation,
    AssociativityM,
    AssociativityMPrime,
    BubblePopping,
    FlippingN,
    SquareSwitch,
}

impl RelationId {
    pub fn all() -> [RelationId; 8] {
        [
            RelationId::Conjugation1,
            RelationId::Conjugation2,
            RelationId::Rotation,
            RelationId::AssociativityM,
            RelationId::AssociativityMPrime,
            RelationId::BubblePopping,
            RelationId::FlippingN,
            RelationId::SquareSwitch,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            RelationId::Conjugation1 => "conjugation1",
            RelationId::Conjugation2 => "conjugation2",
            RelationId::Rotation => "rotation",
            RelationId::AssociativityM => "associativity-m",
            RelationId::AssociativityMPrime => "associativity-mprime",
            RelationId::BubblePopping => "bubble",
            RelationId::FlippingN => "flipping",
            RelationId::SquareSwitch => "squareSwitch",
        }
    }

    pub fn from_name(name: &str) -> Option<RelationId> {
        RelationId::all().into_iter().find(|r| r.name() == name)
    }

    /// All admissible size parameters at rank n.
    pub fn admissible_params(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        match self {
            RelationId::Conjugation1 | RelationId::Conjugation2 | RelationId::Rotation => {
                for k in 0..=n {
                    out.push(vec![k]);
                }
            }
            RelationId::AssociativityM | RelationId::AssociativityMPrime => {
                for k in 0..=n {
                    for l in 0..=n - k {
                        for m in 0..=n - k - l {
                            out.push(vec![k, l, m]);
                        }
                    }
                }
            }
            RelationId::BubblePopping | RelationId::FlippingN => {
                for k in 0..=n {
                    for l in 0..=n - k {
                        out.push(vec![k, l]);
                    }
                }
            }
            RelationId::SquareSwitch => {
                // (k, l, r, s) with source L^l (x) L^k.
                for k in 0..=n {
                    for l in 0..=n {
                        for s in 0..=k {
                            if l + s > n {
                                continue;
                            }
                            for r in 0..=l + s {
                                if r + k < s || r + k - s > n {
                                    continue;
                                }
                                out.push(vec![k, l, r, s]);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationWitness {
    #[serde(rename = "sourceIndex")]
    pub source_index: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub relation: String,
    pub params: Vec<usize>,
    pub n: usize,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<RelationWitness>,
}

/// Build both sides of a relation instance.
pub fn relation_sides(
    ctx: &WebContext,
    relation: RelationId,
    params: &[usize],
) -> Result<(SparseMor, SparseMor), WebError> {
    let n = ctx.n;
    match relation {
        RelationId::Conjugation1 => {
            // (eps_k^- (x) id) o (id (x) eta_k^+) = id on L^k.
            let k = params[0];
            let idk = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
            let lhs = eval_coev(ctx, EvalCoevKind::EpsMinus, k)?
                .tensor(&idk)
                .compose(&idk.tensor(&eval_coev(ctx, EvalCoevKind::EtaPlus, k)?));
            Ok((
                strip_scalar_factors(ctx, &lhs),
                strip_scalar_factors(ctx, &idk),
            ))
        }
        RelationId::Conjugation2 => {
            // (id (x) eps_k^+) o (eta_k^- (x) id) = id on L^k.
            let k = params[0];
            let idk = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
            let lhs = idk
                .tensor(&eval_coev(ctx, EvalCoevKind::EpsPlus, k)?)
                .compose(&eval_coev(ctx, EvalCoevKind::EtaMinus, k)?.tensor(&idk));
            Ok((
                strip_scalar_factors(ctx, &lhs),
                strip_scalar_factors(ctx, &idk),
            ))
        }
        RelationId::Rotation => {
            // (M_{k,n-k} (x) id) o (id (x) eta^-_{n-k})
            //   = (-1)^{k(n-k)} (id (x) M_{n-k,k}) o (eta^+_{n-k} (x) id)
            // as maps L^k -> (L^{n-k})*.
            let k = params[0];
            let idk = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
            let id_dual = SparseMor::identity(TensorSpace::new(ctx, vec![-((n - k) as i8)])?);
            let lhs = wedge_multiply_to_scalar(ctx, k)?
                .tensor(&id_dual)
                .compose(&idk.tensor(&eval_coev(ctx, EvalCoevKind::EtaMinus, n - k)?));
            let rhs = id_dual
                .tensor(&wedge_multiply_to_scalar(ctx, n - k)?)
                .compose(&eval_coev(ctx, EvalCoevKind::EtaPlus, n - k)?.tensor(&idk));
            let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
            Ok((
                strip_scalar_factors(ctx, &lhs),
                strip_scalar_factors(ctx, &rhs).scale(&LaurentScalar::from_int(sign)),
            ))
        }
        RelationId::AssociativityM => {
            let (k, l, m) = (params[0], params[1], params[2]);
            let idk = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
            let idm = SparseMor::identity(TensorSpace::new(ctx, vec![m as i8])?);
            let lhs = wedge_multiply(ctx, k, l + m)?
                .compose(&idk.tensor(&wedge_multiply(ctx, l, m)?));
            let rhs = wedge_multiply(ctx, k + l, m)?
                .compose(&wedge_multiply(ctx, k, l)?.tensor(&idm));
            Ok((lhs, rhs))
        }
        RelationId::AssociativityMPrime => {
            let (k, l, m) = (params[0], params[1], params[2]);
            let idk = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
            let idm = SparseMor::identity(TensorSpace::new(ctx, vec![m as i8])?);
            let lhs = idk
                .tensor(&wedge_comultiply(ctx, l, m)?)
                .compose(&wedge_comultiply(ctx, k, l + m)?);
            let rhs = wedge_comultiply(ctx, k, l)?
                .tensor(&idm)
                .compose(&wedge_comultiply(ctx, k + l, m)?);
            Ok((lhs, rhs))
        }
        RelationId::BubblePopping => {
            let (k, l) = (params[0], params[1]);
            let lhs = wedge_multiply(ctx, k, l)?.compose(&wedge_comultiply(ctx, k, l)?);
            let id = SparseMor::identity(TensorSpace::new(ctx, vec![(k + l) as i8])?);
            let rhs = id.scale(&ctx.q_bin((k + l) as i64, k as i64));
            Ok((lhs, rhs))
        }
        RelationId::FlippingN => {
            // (M_{n-k,k}-collapse (x) id) o (id (x) M'_{k,l})
            //   = (-1)^{l(n-l)} (id (x) M_{n-k-l,k+l}-collapse) o (M'_{l,n-k-l} (x) id)
            // on L^{n-k} (x) L^{k+l} -> L^l.
            let (k, l) = (params[0], params[1]);
            let id_nk = SparseMor::identity(TensorSpace::new(ctx, vec![(n - k) as i8])?);
            let id_kl = SparseMor::identity(TensorSpace::new(ctx, vec![(k + l) as i8])?);
            let idl = SparseMor::identity(TensorSpace::new(ctx, vec![l as i8])?);
            let lhs = wedge_multiply_to_scalar(ctx, n - k)?
                .tensor(&idl)
                .compose(&id_nk.tensor(&wedge_comultiply(ctx, k, l)?));
            let rhs = idl
                .tensor(&wedge_multiply_to_scalar(ctx, n - k - l)?)
                .compose(&wedge_comultiply(ctx, l, n - k - l)?.tensor(&id_kl));
            let sign = if (l * (n - l)) % 2 == 0 { 1 } else { -1 };
            Ok((
                strip_scalar_factors(ctx, &lhs),
                strip_scalar_factors(ctx, &rhs).scale(&LaurentScalar::from_int(sign)),
            ))
        }
        RelationId::SquareSwitch => {
            // (id (x) M_{r,k-s}) o (M'_{l+s-r,r} o M_{l,s} (x) id) o (id (x) M'_{s,k-s})
            //   = sum_t qbin(k-l+r-s, t) (M_{l-r+t,s-t} (x) id)
            //       o (id (x) M'_{s-t,k-s+r} o M_{r-t,k}) o (M'_{l-r+t,r-t} (x) id)
            // on L^l (x) L^k.
            let (k, l, r, s) = (params[0], params[1], params[2], params[3]);
            let idl = SparseMor::identity(TensorSpace::new(ctx, vec![l as i8])?);
            let id_ks = SparseMor::identity(TensorSpace::new(ctx, vec![(k - s) as i8])?);
            let id_lsr = SparseMor::identity(TensorSpace::new(ctx, vec![(l + s - r) as i8])?);
            let inner = wedge_comultiply(ctx, l + s - r, r)?.compose(&wedge_multiply(ctx, l, s)?);
            let lhs = id_lsr
                .tensor(&wedge_multiply(ctx, r, k - s)?)
                .compose(&inner.tensor(&id_ks))
                .compose(&idl.tensor(&wedge_comultiply(ctx, s, k - s)?));

            let source = TensorSpace::new(ctx, vec![l as i8, k as i8])?;
            let target = TensorSpace::new(ctx, vec![(l + s - r) as i8, (k - s + r) as i8])?;
            let mut rhs = SparseMor::zero(source, target);
            let t_min = 0i64
                .max(r as i64 - l as i64)
                .max(k as i64 + r as i64 - n as i64);
            let t_max = (r as i64).min(s as i64);
            let mut t = t_min;
            while t <= t_max {
                let tu = t as usize;
                let id_kr = SparseMor::identity(TensorSpace::new(ctx, vec![(k - s + r) as i8])?);
                let id_lrt = SparseMor::identity(TensorSpace::new(ctx, vec![(l - r + tu) as i8])?);
                let idk = SparseMor::identity(TensorSpace::new(ctx, vec![k as i8])?);
                let term = wedge_multiply(ctx, l - r + tu, s - tu)?
                    .tensor(&id_kr)
                    .compose(&id_lrt.tensor(
                        &wedge_comultiply(ctx, s - tu, k - s + r)?
                            .compose(&wedge_multiply(ctx, r - tu, k)?),
                    ))
                    .compose(&wedge_comultiply(ctx, l - r + tu, r - tu)?.tensor(&idk));
                let coeff = ctx.q_bin(k as i64 - l as i64 + r as i64 - s as i64, t);
                rhs = rhs.add(&term.scale(&coeff));
                t += 1;
            }
            Ok((lhs, rhs))
        }
    }
}

/// Remove trivial (size-0) factors born from scalar collapses so maps with
/// the same mathematical content compare equal.
fn strip_scalar_factors(ctx: &WebContext, m: &SparseMor) -> SparseMor {
    let keep_src: Vec<usize> = m
        .source
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, &f)| f != 0)
        .map(|(i, _)| i)
        .collect();
    let keep_tgt: Vec<usize> = m
        .target
        .factors()
        .iter()
        .enumerate()
        .filter(|(_, &f)| f != 0)
        .map(|(i, _)| i)
        .collect();
    let src = TensorSpace::new(ctx, keep_src.iter().map(|&i| m.source.factors()[i]).collect())
        .expect("valid");
    let tgt = TensorSpace::new(ctx, keep_tgt.iter().map(|&i| m.target.factors()[i]).collect())
        .expect("valid");
    let mut out = SparseMor::zero(src, tgt.clone());
    for (idx, col) in &m.columns {
        let new_idx: Vec<u32> = keep_src.iter().map(|&i| idx[i]).collect();
        let mut new_col = out.column(&new_idx);
        for (tidx, c) in col.terms() {
            let nt: Vec<u32> = keep_tgt.iter().map(|&i| tidx[i]).collect();
            new_col.add_term(nt, c.clone());
        }
        if !new_col.is_zero() {
            out.set_column(new_idx, new_col);
        }
    }
    out
}

/// Verify one relation instance; the report carries the first differing
/// matrix entry on failure.
pub fn verify_relation(ctx: &WebContext, relation: RelationId, params: &[usize]) -> RelationReport {
    match relation_sides(ctx, relation, params) {
        Err(e) => RelationReport {
            relation: relation.name().to_string(),
            params: params.to_vec(),
            n: ctx.n,
            ok: false,
            witness: Some(RelationWitness {
                source_index: vec![],
                lhs: format!("construction error: {}", e),
                rhs: String::new(),
            }),
        },
        Ok((lhs, rhs)) => {
            if lhs.source != rhs.source || lhs.target != rhs.target {
                return RelationReport {
                    relation: relation.name().to_string(),
                    params: params.to_vec(),
                    n: ctx.n,
                    ok: false,
                    witness: Some(RelationWitness {
                        source_index: vec![],
                        lhs: format!("{} -> {}", lhs.source, lhs.target),
                        rhs: format!("{} -> {}", rhs.source, rhs.target),
                    }),
                };
            }
            match lhs.first_difference(&rhs) {
                None => RelationReport {
                    relation: relation.name().to_string(),
                    params: params.to_vec(),
                    n: ctx.n,
                    ok: true,
                    witness: None,
                },
                Some((idx, a, b)) => RelationReport {
                    relation: relation.name().to_string(),
                    params: params.to_vec(),
                    n: ctx.n,
                    ok: false,
                    witness: Some(RelationWitness {
                        source_index: idx,
                        lhs: format!("{:?}", a.terms().collect::<Vec<_>>()),
                        rhs: format!("{:?}", b.terms().collect::<Vec<_>>()),
                    }),
                },
            }
        }
    }
}

/// All generating morphisms at rank n, for the equivariance sweep.
pub fn generating_morphisms(ctx: &WebContext) -> Vec<(String, SparseMor)> {
    let n = ctx.n;
    let mut out = Vec::new();
    for k in 0..=n {
        for l in 0..=n - k {
            out.push((
                format!("M_{{{},{}}}", k, l),
                wedge_multiply(ctx, k, l).expect("sizes validated"),
            ));
            out.push((
                format!("M'_{{{},{}}}", k, l),
                wedge_comultiply(ctx, k, l).expect("sizes validated"),
            ));
        }
    }
    for k in 1..=n {
        for kind in [
            EvalCoevKind::EpsPlus,
            EvalCoevKind::EtaPlus,
            EvalCoevKind::EpsMinus,
            EvalCoevKind::EtaMinus,
        ] {
            out.push((
                format!("{:?}_{}", kind, k),
                eval_coev(ctx, kind, k).expect("sizes validated"),
            ));
        }
    }
    out
}

/// All quantum-group generators, with a spanning set of K-weights.
pub fn all_generators(ctx: &WebContext) -> Vec<Generator> {
    let mut out = Vec::new();
    for i in 1..ctx.n {
        out.push(Generator::E(i));
        out.push(Generator::F(i));
    }
    for i in 1..=ctx.n {
        let mut lam = vec![0i64; ctx.n];
        for entry in lam.iter_mut().take(i) {
            *entry = 1;
        }
        out.push(Generator::K(lam));
    }
    out
}

/// Equivariance of a morphism: f o g = g o f with g acting by the iterated
/// coproduct on source and target.
pub fn check_equivariance(ctx: &WebContext, f: &SparseMor, gen: &Generator) -> bool {
    let g_src = generator_matrix(ctx, gen, &f.source);
    let g_tgt = generator_matrix(ctx, gen, &f.target);
    f.compose(&g_src) == g_tgt.compose(f)
}
