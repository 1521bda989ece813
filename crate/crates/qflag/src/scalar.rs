//! Exact arithmetic in Q(q): integer-coefficient Laurent polynomials, their
//! field of fractions, q-combinatorial symbols, and projective-line parameters.
//!
//! Every value is kept in a canonical reduced form so that equality is a
//! structural comparison. Coefficients are arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("denominator vanishes identically")]
    ZeroDenominator,
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("projective point must have a nonzero coordinate")]
    ZeroPoint,
}

/// Integer-coefficient Laurent polynomial in the indeterminate q.
///
/// Terms are stored sparsely, keyed by exponent; zero coefficients are never
/// kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), 0)
    }

    pub fn monomial(coeff: BigInt, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::monomial(BigInt::from(n), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute q -> q^d.
    pub fn substitute_power(&self, d: i64) -> Self {
        assert!(d >= 1, "substitution exponent must be positive");
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e * d, c.clone())).collect(),
        }
    }

    /// gcd of all coefficients, as a positive integer; zero for the zero poly.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    fn divide_content(&self, c: &BigInt) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k / c)).collect(),
        }
    }

    /// Coefficient vector starting at `min_deg`, for dense algorithms.
    fn dense(&self) -> (i64, Vec<BigInt>) {
        if self.is_zero() {
            return (0, vec![]);
        }
        let lo = self.min_deg().unwrap();
        let hi = self.max_deg().unwrap();
        let mut v = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i64, v: Vec<BigInt>) -> Self {
        let mut p = Self::zero();
        for (i, c) in v.into_iter().enumerate() {
            p.insert_term(lo + i as i64, c);
        }
        p
    }

    /// Evaluate at a floating-point value of q.
    pub fn eval_f64(&self, q0: f64) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_f64().unwrap_or(f64::NAN) * q0.powi(*e as i32))
            .sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.insert_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

/// Primitive part of a dense integer polynomial (content removed, sign of the
/// leading coefficient preserved).
fn primitive_part(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / &g).collect()
}

fn dense_deg(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn dense_trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

/// Pseudo-remainder of a by b (both dense, b nonzero).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = dense_deg(b).expect("pseudo_rem by zero");
    let lb = b[db].clone();
    let mut r = a.to_vec();
    loop {
        let dr = match dense_deg(&r) {
            Some(d) if d >= db => d,
            _ => return dense_trim(r),
        };
        let lead = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            let delta = &lead * bc;
            r[i + shift] -= delta;
        }
        r = dense_trim(r);
    }
}

/// gcd of two ordinary integer polynomials via a primitive remainder sequence.
fn poly_gcd_dense(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = primitive_part(&dense_trim(a.to_vec()));
    let mut b = primitive_part(&dense_trim(b.to_vec()));
    if dense_deg(&a).is_none() {
        return b;
    }
    if dense_deg(&b).is_none() {
        return a;
    }
    if dense_deg(&a) < dense_deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while dense_deg(&b).is_some() {
        let r = pseudo_rem(&a, &b);
        a = b;
        b = primitive_part(&r);
    }
    if a.last().map(|c| c.is_negative()).unwrap_or(false) {
        a = a.iter().map(|c| -c).collect();
    }
    a
}

fn poly_div_exact_dense(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let da = match dense_deg(a) {
        Some(d) => d,
        None => return Some(vec![]),
    };
    let db = dense_deg(b)?;
    if da < db {
        return None;
    }
    let mut r = a.to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let top = r[k + db].clone();
        if top.is_zero() {
            continue;
        }
        let (c, rem) = top.div_rem(&b[db]);
        if !rem.is_zero() {
            return None;
        }
        quot[k] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let delta = &c * bc;
            r[i + k] -= delta;
        }
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(quot)
}

impl LaurentPoly {
    /// Exact division by another Laurent polynomial; None if not divisible.
    pub fn div_exact(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let (la, va) = self.dense();
        let (lb, vb) = other.dense();
        let q = poly_div_exact_dense(&va, &vb)?;
        Some(LaurentPoly::from_dense(la - lb, q))
    }

    fn gcd_poly(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (_, va) = self.dense();
        let (_, vb) = other.dense();
        let g = poly_gcd_dense(&va, &vb);
        LaurentPoly::from_dense(0, g)
    }
}

/// Element of Q(q): a reduced fraction of integer Laurent polynomials.
///
/// Canonical form: no common polynomial factor, no common integer content,
/// the denominator is an ordinary polynomial with nonzero constant term whose
/// lowest-degree coefficient is positive. Equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl LaurentScalar {
    fn reduced(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(LaurentScalar { num: LaurentPoly::zero(), den: LaurentPoly::one() });
        }
        // Split off powers of q: keep the denominator an ordinary polynomial
        // with nonzero constant term.
        let b = den.min_deg().unwrap();
        let num = num.shift(-b);
        let den = den.shift(-b);
        // Remove the common integer content.
        let g = num.content().gcd(&den.content());
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.divide_content(&g), den.divide_content(&g))
        };
        // Remove the common polynomial factor. The gcd ignores q-power
        // offsets, which is fine: den has constant term != 0.
        let g = num.gcd_poly(&den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
            let b = den.min_deg().unwrap();
            if b != 0 {
                num = num.shift(-b);
                den = den.shift(-b);
            }
        }
        // Sign normalization: lowest coefficient of the denominator positive.
        if den.terms.values().next().map(|c| c.is_negative()).unwrap_or(false) {
            num = -&num;
            den = -&den;
        }
        Ok(LaurentScalar { num, den })
    }

    pub fn from_polys(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        Self::reduced(num, den)
    }

    pub fn zero() -> Self {
        LaurentScalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        LaurentScalar { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        LaurentScalar { num: LaurentPoly::from_int(n), den: LaurentPoly::one() }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        LaurentScalar { num: LaurentPoly::monomial(n, 0), den: LaurentPoly::one() }
    }

    pub fn from_rational(num: i64, den: i64) -> Self {
        assert!(den != 0);
        Self::reduced(LaurentPoly::from_int(num), LaurentPoly::from_int(den)).unwrap()
    }

    /// q^k.
    pub fn q_power(k: i64) -> Self {
        LaurentScalar { num: LaurentPoly::monomial(BigInt::one(), k), den: LaurentPoly::one() }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroInverse);
        }
        Self::reduced(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, k: i64) -> Result<Self, ScalarError> {
        if k == 0 {
            return Ok(Self::one());
        }
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Substitute q -> q^d (d >= 1).
    pub fn substitute_power(&self, d: i64) -> Self {
        if d == 1 {
            return self.clone();
        }
        LaurentScalar {
            num: self.num.substitute_power(d),
            den: self.den.substitute_power(d),
        }
    }

    /// If the value is exactly r*q^e with r a nonzero rational, return (r_num, r_den, e).
    pub fn as_monomial(&self) -> Option<(BigInt, BigInt, i64)> {
        if self.num.terms.len() != 1 || self.den.terms.len() != 1 {
            return None;
        }
        let (en, cn) = self.num.terms.iter().next().unwrap();
        let (ed, cd) = self.den.terms.iter().next().unwrap();
        Some((cn.clone(), cd.clone(), en - ed))
    }

    /// If the value is a rational constant (degree zero), return it.
    pub fn as_rational(&self) -> Option<num_rational::BigRational> {
        match self.as_monomial() {
            Some((n, d, 0)) => Some(num_rational::BigRational::new(n, d)),
            None if self.is_zero() => Some(num_rational::BigRational::zero()),
            _ => None,
        }
    }

    /// Decide membership in q^{2dZ}: returns m when self == q^{2dm}.
    pub fn monomial_lattice_test(&self, d: i64) -> Option<i64> {
        assert!(d >= 1);
        let (cn, cd, e) = self.as_monomial()?;
        if cn != cd {
            return None;
        }
        if e.rem_euclid(2 * d) != 0 {
            return None;
        }
        Some(e / (2 * d))
    }

    pub fn eval_f64(&self, q0: f64) -> f64 {
        self.num.eval_f64(q0) / self.den.eval_f64(q0)
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        LaurentScalar::reduced(num, den).expect("nonzero denominator")
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        LaurentScalar::reduced(num, den).expect("nonzero denominator")
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        LaurentScalar::reduced(num, den).expect("nonzero denominator")
    }
}

impl Div for &LaurentScalar {
    type Output = LaurentScalar;
    fn div(self, rhs: &LaurentScalar) -> LaurentScalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        let num = &self.num * &rhs.den;
        let den = &self.den * &rhs.num;
        LaurentScalar::reduced(num, den).expect("nonzero denominator")
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($($trait:ident, $method:ident);*) => {$(
        impl $trait for LaurentScalar {
            type Output = LaurentScalar;
            fn $method(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$method(&rhs)
            }
        }
    )*};
}
owned_ops!(Add, add; Sub, sub; Mul, mul; Div, div);

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

// ---------------------------------------------------------------------------
// q-combinatorics
// ---------------------------------------------------------------------------

/// [n]_q = (q^n - q^{-n})/(q - q^{-1}).
pub fn q_integer(n: i64) -> LaurentScalar {
    if n == 0 {
        return LaurentScalar::zero();
    }
    // [n] = q^{n-1} + q^{n-3} + ... + q^{1-n}, with [-n] = -[n].
    let sign = if n < 0 { -1 } else { 1 };
    let m = n.abs();
    let mut p = LaurentPoly::zero();
    let mut e = m - 1;
    for _ in 0..m {
        p.insert_term(e, BigInt::from(sign));
        e -= 2;
    }
    LaurentScalar { num: p, den: LaurentPoly::one() }
}

/// [n]_q! = [1][2]...[n]; n must be nonnegative.
pub fn q_factorial(n: i64) -> LaurentScalar {
    assert!(n >= 0, "q-factorial of a negative integer");
    let mut out = LaurentScalar::one();
    for j in 1..=n {
        out = &out * &q_integer(j);
    }
    out
}

/// Gaussian binomial: [n][n-1]...[n-k+1]/[k]! for k >= 0, and 0 for k < 0.
pub fn q_binomial(n: i64, k: i64) -> LaurentScalar {
    if k < 0 {
        return LaurentScalar::zero();
    }
    let mut num = LaurentScalar::one();
    for j in 0..k {
        num = &num * &q_integer(n - j);
    }
    &num / &q_factorial(k)
}

// ---------------------------------------------------------------------------
// Projective parameters
// ---------------------------------------------------------------------------

/// Point of P^1 over Q(q), written [x : y].
///
/// Canonical form divides by the first nonzero coordinate, so projective
/// equality is structural equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjParam {
    x: LaurentScalar,
    y: LaurentScalar,
}

impl ProjParam {
    pub fn new(x: LaurentScalar, y: LaurentScalar) -> Result<Self, ScalarError> {
        if x.is_zero() && y.is_zero() {
            return Err(ScalarError::ZeroPoint);
        }
        if !x.is_zero() {
            let y = &y / &x;
            Ok(ProjParam { x: LaurentScalar::one(), y })
        } else {
            Ok(ProjParam { x: LaurentScalar::zero(), y: LaurentScalar::one() })
        }
    }

    /// [c : 1] for a finite value c.
    pub fn finite(c: LaurentScalar) -> Self {
        Self::new(c, LaurentScalar::one()).expect("finite point")
    }

    /// [1 : 0].
    pub fn infinity() -> Self {
        ProjParam { x: LaurentScalar::one(), y: LaurentScalar::zero() }
    }

    /// [0 : 1].
    pub fn zero() -> Self {
        ProjParam { x: LaurentScalar::zero(), y: LaurentScalar::one() }
    }

    pub fn x(&self) -> &LaurentScalar {
        &self.x
    }

    pub fn y(&self) -> &LaurentScalar {
        &self.y
    }

    pub fn is_infinity(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_zero_point(&self) -> bool {
        self.x.is_zero()
    }

    /// The finite value x/y, if y != 0.
    pub fn value(&self) -> Option<LaurentScalar> {
        if self.y.is_zero() {
            None
        } else {
            Some(&self.x / &self.y)
        }
    }

    /// [x : y] -> [y : x].
    pub fn invert(&self) -> Self {
        Self::new(self.y.clone(), self.x.clone()).expect("nonzero point")
    }

    /// Componentwise product; defined unless it would produce [0 : 0].
    pub fn mul(&self, other: &ProjParam) -> Result<Self, ScalarError> {
        Self::new(&self.x * &other.x, &self.y * &other.y)
    }

    /// [q^k x : y].
    pub fn scale_q_power(&self, k: i64) -> Self {
        Self::new(&self.x * &LaurentScalar::q_power(k), self.y.clone()).expect("nonzero point")
    }

    /// Decide membership in q^{2dZ}: x/y = q^{2dm} with both coordinates nonzero.
    pub fn monomial_lattice_test(&self, d: i64) -> Option<i64> {
        if self.x.is_zero() || self.y.is_zero() {
            return None;
        }
        (&self.x / &self.y).monomial_lattice_test(d)
    }
}

/// Numerator bracket [n; chi] = x q_d^n - y q_d^{-n} where q_d = q^d.
pub fn bracket(n: i64, chi: &ProjParam, d: i64) -> LaurentScalar {
    assert!(d >= 1);
    let qn = LaurentScalar::q_power(d * n);
    let qmn = LaurentScalar::q_power(-d * n);
    &(chi.x() * &qn) - &(chi.y() * &qmn)
}

/// The exact ratio [n; chi]_q / [m; chi]_q, with q -> q^d applied throughout.
pub fn bracket_ratio(n: i64, m: i64, chi: &ProjParam, d: i64) -> Result<LaurentScalar, ScalarError> {
    let den = bracket(m, chi, d);
    if den.is_zero() {
        return Err(ScalarError::ZeroDenominator);
    }
    Ok(&bracket(n, chi, d) / &den)
}

// ---------------------------------------------------------------------------
// Textual serialization
// ---------------------------------------------------------------------------

fn fmt_poly(p: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    // Highest degree first.
    for (e, c) in p.terms.iter().rev() {
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if *e == 0 {
            write!(f, "{}", abs)?;
        } else {
            if !abs.is_one() {
                write!(f, "{}*", abs)?;
            }
            if *e == 1 {
                write!(f, "q")?;
            } else {
                write!(f, "q^{}", e)?;
            }
        }
    }
    Ok(())
}

struct PolyDisplay<'a>(&'a LaurentPoly);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self.0, f)
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.terms.len() > 1 {
                write!(f, "({})", PolyDisplay(&self.num))
            } else {
                write!(f, "{}", PolyDisplay(&self.num))
            }
        } else {
            write!(f, "({})/({})", PolyDisplay(&self.num), PolyDisplay(&self.den))
        }
    }
}

impl fmt::Display for ProjParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.x, self.y)
    }
}

// A small recursive-descent parser for the "poly / poly" language with terms
// "c*q^k", "q^k", "q", and integer constants.
struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ScalarError> {
        match self.bump() {
            Some(b) if b == c => Ok(()),
            other => Err(ScalarError::Parse(format!(
                "expected '{}', found {:?}",
                c as char,
                other.map(|b| b as char)
            ))),
        }
    }

    fn parse_integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ScalarError::Parse("expected integer".into()));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        s.parse::<BigInt>()
            .map_err(|e| ScalarError::Parse(e.to_string()))
    }

    /// term := [sign] (int ["*"? q-part] | q-part)
    fn parse_term(&mut self, acc: &mut LaurentPoly, leading_sign: i64) -> Result<(), ScalarError> {
        let mut sign = leading_sign;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.bump();
                }
                b'-' => {
                    self.bump();
                    sign = -sign;
                }
                _ => break,
            }
        }
        let coeff;
        match self.peek() {
            Some(b'q') => {
                coeff = BigInt::one();
            }
            Some(c) if c.is_ascii_digit() => {
                coeff = self.parse_integer()?;
                if self.peek() == Some(b'*') {
                    self.bump();
                }
            }
            other => {
                return Err(ScalarError::Parse(format!(
                    "expected term, found {:?}",
                    other.map(|b| b as char)
                )))
            }
        }
        let mut exp = 0i64;
        if self.peek() == Some(b'q') {
            self.bump();
            if self.peek() == Some(b'^') {
                self.bump();
                let e = self.parse_integer()?;
                exp = e
                    .to_i64()
                    .ok_or_else(|| ScalarError::Parse("exponent too large".into()))?;
            } else {
                exp = 1;
            }
        }
        acc.insert_term(exp, coeff * BigInt::from(sign));
        Ok(())
    }

    /// poly := term (("+"|"-") term)*, with optional outer parentheses.
    fn parse_poly(&mut self) -> Result<LaurentPoly, ScalarError> {
        if self.peek() == Some(b'(') {
            self.bump();
            let p = self.parse_poly_bare()?;
            self.expect(b')')?;
            Ok(p)
        } else {
            self.parse_poly_bare()
        }
    }

    fn parse_poly_bare(&mut self) -> Result<LaurentPoly, ScalarError> {
        let mut acc = LaurentPoly::zero();
        self.parse_term(&mut acc, 1)?;
        while let Some(c) = self.peek() {
            match c {
                b'+' | b'-' => {
                    self.parse_term(&mut acc, 1)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }
}

impl FromStr for LaurentScalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let num = p.parse_poly()?;
        let den = if p.peek() == Some(b'/') {
            p.bump();
            p.parse_poly()?
        } else {
            LaurentPoly::one()
        };
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(ScalarError::Parse(format!(
                "trailing input at byte {}",
                p.pos
            )));
        }
        LaurentScalar::reduced(num, den)
    }
}

impl FromStr for ProjParam {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| ScalarError::Parse("projective point must be bracketed".into()))?;
        let mut depth = 0i32;
        let mut split = None;
        for (i, c) in inner.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                ':' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let i = split.ok_or_else(|| ScalarError::Parse("missing ':' separator".into()))?;
        let x: LaurentScalar = inner[..i].parse()?;
        let y: LaurentScalar = inner[i + 1..].parse()?;
        ProjParam::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentScalar {
        LaurentScalar::q_power(1)
    }

    #[test]
    fn q_integer_examples() {
        assert!(q_integer(0).is_zero());
        let expect = &q() + &LaurentScalar::q_power(-1);
        assert_eq!(q_integer(2), expect);
        // [-3] = -(q^2 + 1 + q^{-2}); oracle: direct polynomial division.
        let direct = {
            let num = &LaurentScalar::q_power(-3) - &LaurentScalar::q_power(3);
            let den = &q() - &LaurentScalar::q_power(-1);
            &num / &den
        };
        assert_eq!(q_integer(-3), direct);
        let neg = -&(&(&LaurentScalar::q_power(2) + &LaurentScalar::one())
            + &LaurentScalar::q_power(-2));
        assert_eq!(q_integer(-3), neg);
    }

    #[test]
    fn q_binomial_examples() {
        assert!(q_binomial(5, 0).is_one());
        assert!(q_binomial(3, -1).is_zero());
        // [4 choose 2] = q^4 + q^2 + 2 + q^-2 + q^-4, oracle by expansion.
        let oracle = &(&q_integer(4) * &q_integer(3)) / &(&q_integer(2) * &q_integer(1));
        assert_eq!(q_binomial(4, 2), oracle);
        let mut expect = LaurentScalar::q_power(4);
        expect = &expect + &LaurentScalar::q_power(2);
        expect = &expect + &LaurentScalar::from_int(2);
        expect = &expect + &LaurentScalar::q_power(-2);
        expect = &expect + &LaurentScalar::q_power(-4);
        assert_eq!(q_binomial(4, 2), expect);
    }

    #[test]
    fn q_binomial_symmetry() {
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(q_binomial(n, k), q_binomial(n, n - k));
            }
        }
    }

    #[test]
    fn bracket_ratio_specializations() {
        // chi = [q^{2l} : 1] gives [n+l]/[m+l].
        for l in -3..=3i64 {
            let chi = ProjParam::finite(LaurentScalar::q_power(2 * l));
            for n in -4..=4i64 {
                for m in -4..=4i64 {
                    if m + l == 0 {
                        continue;
                    }
                    let lhs = bracket_ratio(n, m, &chi, 1).unwrap();
                    let rhs = &q_integer(n + l) / &q_integer(m + l);
                    assert_eq!(lhs, rhs, "n={} m={} l={}", n, m, l);
                }
            }
        }
        // chi = infinity gives q^{n-m}.
        let inf = ProjParam::infinity();
        for n in -4..=4i64 {
            for m in -4..=4i64 {
                assert_eq!(bracket_ratio(n, m, &inf, 1).unwrap(), LaurentScalar::q_power(n - m));
            }
        }
        // chi = [1:1] reduces to [n]/[m].
        let one = ProjParam::finite(LaurentScalar::one());
        assert_eq!(
            bracket_ratio(3, 2, &one, 1).unwrap(),
            &q_integer(3) / &q_integer(2)
        );
        // m-bracket vanishing is an error.
        assert_eq!(bracket_ratio(1, 0, &one, 1), Err(ScalarError::ZeroDenominator));
    }

    #[test]
    fn bracket_ratio_inverse_pairs() {
        let chi = ProjParam::finite(&LaurentScalar::from_int(3) * &LaurentScalar::q_power(2));
        for n in -3..=3 {
            for m in -3..=3 {
                let ab = bracket_ratio(n, m, &chi, 2);
                let ba = bracket_ratio(m, n, &chi, 2);
                if let (Ok(ab), Ok(ba)) = (ab, ba) {
                    assert!( (&ab * &ba).is_one());
                }
            }
        }
    }

    #[test]
    fn monomial_lattice_examples() {
        assert_eq!(LaurentScalar::q_power(4).monomial_lattice_test(1), Some(2));
        assert_eq!(LaurentScalar::q_power(3).monomial_lattice_test(1), None);
        let s = &q() + &LaurentScalar::one();
        assert_eq!(s.monomial_lattice_test(1), None);
        // 2*q^4 is a monomial but not in q^{2Z}.
        let t = &LaurentScalar::from_int(2) * &LaurentScalar::q_power(4);
        assert_eq!(t.monomial_lattice_test(1), None);
        // d = 2: q^4 = q^{2*2*1}.
        assert_eq!(LaurentScalar::q_power(4).monomial_lattice_test(2), Some(1));
        assert_eq!(LaurentScalar::q_power(6).monomial_lattice_test(2), None);
    }

    #[test]
    fn reduction_and_equality() {
        // (q^2 - 1)/(q^3 + q) reduces against common factors when present.
        let a: LaurentScalar = "(q^2 - 1)/(q^3 + q)".parse().unwrap();
        let b = &(&q() - &LaurentScalar::q_power(-1)) / &(&LaurentScalar::q_power(2) + &LaurentScalar::one());
        assert_eq!(a, b);
        // Content reduction keeps rational information.
        let half: LaurentScalar = "2/4".parse().unwrap();
        assert_eq!(half, LaurentScalar::from_rational(1, 2));
        // Sign normalization.
        let c: LaurentScalar = "(1)/(-q + 1)".parse().unwrap();
        let d: LaurentScalar = "(-1)/(q - 1)".parse().unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn display_round_trip() {
        let samples = [
            LaurentScalar::zero(),
            LaurentScalar::one(),
            LaurentScalar::from_int(-7),
            LaurentScalar::q_power(-3),
            q_binomial(5, 2),
            &q_integer(3) / &q_integer(2),
            LaurentScalar::from_rational(-3, 7),
            &(&LaurentScalar::from_int(2) * &LaurentScalar::q_power(5)) / &(&q() + &LaurentScalar::from_int(3)),
        ];
        for s in &samples {
            let text = s.to_string();
            let back: LaurentScalar = text.parse().unwrap();
            assert_eq!(&back, s, "round trip failed for {}", text);
        }
        let p = ProjParam::new(&q() + &LaurentScalar::one(), q_integer(2)).unwrap();
        let back: ProjParam = p.to_string().parse().unwrap();
        assert_eq!(back, p);
        let inf: ProjParam = "[1 : 0]".parse().unwrap();
        assert!(inf.is_infinity());
    }

    #[test]
    fn projective_canonicalization() {
        let a = ProjParam::new(q_integer(2), LaurentScalar::one()).unwrap();
        let b = ProjParam::new(
            &q_integer(2) * &q_integer(5),
            q_integer(5),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(ProjParam::new(LaurentScalar::zero(), LaurentScalar::one()), Ok(ProjParam::zero()));
        assert!(ProjParam::new(LaurentScalar::zero(), LaurentScalar::zero()).is_err());
    }

    #[test]
    fn numeric_bridge() {
        let q0 = 0.37;
        let a = &q_binomial(4, 2) * &q_integer(-3);
        let b = &q_integer(5) / &(&q_integer(2) + &LaurentScalar::from_int(1));
        let sum = &a + &b;
        let lhs = sum.eval_f64(q0);
        let rhs = a.eval_f64(q0) + b.eval_f64(q0);
        assert!((lhs - rhs).abs() < 1e-12);
    }
}
