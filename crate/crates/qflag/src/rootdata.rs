//! Finite root systems, Weyl groups, weights, toric points over a root
//! system, the shifted Weyl action, and the Kostant partition function.
//!
//! Types A, B, C, D, and G2 are constructed from their Cartan matrices; the
//! normalization keeps (alpha, alpha) = 2 for short roots. Weyl elements are
//! stored through their action on simple-root coordinates together with a
//! reduced word, so both the length function and exact equality are available.

use crate::scalar::{LaurentScalar, ProjParam, ScalarError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("unsupported type {0}")]
    UnsupportedType(char),
    #[error("rank {rank} is not valid for type {letter}")]
    InvalidRank { letter: char, rank: usize },
    #[error("the sign pattern does not induce a parabolic subset: {0}")]
    NotParabolic(String),
    #[error("{0} is not a root of the system")]
    NotARoot(String),
    #[error("toric point is missing an entry for root {0}")]
    MissingEntry(String),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
    #[error("serialization error: {0}")]
    Serde(String),
}

/// A root written in simple-root coordinates.
pub type Root = Vec<i64>;

/// An integral weight written in fundamental-weight coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// A finite root system with enumerated roots and Weyl generators.
#[derive(Debug, Clone)]
pub struct RootSystem {
    letter: char,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    d: Vec<i64>,
    roots: Vec<Root>,
    positive: Vec<usize>,
    index: BTreeMap<Root, usize>,
}

fn cartan_matrix(letter: char, rank: usize) -> Result<Vec<Vec<i64>>, RootDataError> {
    let r = rank;
    let valid = match letter {
        'A' => r >= 1,
        'B' | 'C' => r >= 2,
        'D' => r >= 3,
        'G' => r == 2,
        other => return Err(RootDataError::UnsupportedType(other)),
    };
    if !valid {
        return Err(RootDataError::InvalidRank { letter, rank });
    }
    let mut a = vec![vec![0i64; r]; r];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let chain = |a: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match letter {
        'A' => {
            for i in 0..r - 1 {
                chain(&mut a, i, i + 1);
            }
        }
        'B' => {
            // Last simple root short; a_ij = (eps_i^vee, eps_j).
            for i in 0..r - 1 {
                chain(&mut a, i, i + 1);
            }
            a[r - 2][r - 1] = -1;
            a[r - 1][r - 2] = -2;
        }
        'C' => {
            // Last simple root long.
            for i in 0..r - 1 {
                chain(&mut a, i, i + 1);
            }
            a[r - 2][r - 1] = -2;
            a[r - 1][r - 2] = -1;
        }
        'D' => {
            for i in 0..r - 2 {
                chain(&mut a, i, i + 1);
            }
            chain(&mut a, r - 3, r - 1);
        }
        'G' => {
            // First root short (d = 1), second long (d = 3).
            a[0][1] = -3;
            a[1][0] = -1;
        }
        _ => unreachable!(),
    }
    Ok(a)
}

/// Minimal positive symmetrizer: d_i a_ij = d_j a_ji with min d_i = 1.
/// Propagation is rational; denominators are cleared at the end.
fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    fn gcd(a: i64, b: i64) -> i64 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    let r = cartan.len();
    let mut d: Vec<Option<(i64, i64)>> = vec![None; r]; // (num, den), both positive
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some((1, 1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (ni, di) = d[i].unwrap();
            for j in 0..r {
                if i == j || cartan[i][j] == 0 {
                    continue;
                }
                // d_j = d_i a_ij / a_ji; both entries are negative off-diagonal.
                let num = ni * cartan[i][j].abs();
                let den = di * cartan[j][i].abs();
                let g = gcd(num, den);
                let val = (num / g, den / g);
                match d[j] {
                    None => {
                        d[j] = Some(val);
                        stack.push(j);
                    }
                    Some(old) => assert_eq!(old, val, "non-symmetrizable Cartan matrix"),
                }
            }
        }
    }
    let lcm_den = d
        .iter()
        .map(|x| x.unwrap().1)
        .fold(1i64, |acc, v| acc / gcd(acc, v) * v);
    let mut out: Vec<i64> = d
        .into_iter()
        .map(|x| {
            let (n, den) = x.unwrap();
            n * (lcm_den / den)
        })
        .collect();
    let min = *out.iter().min().unwrap();
    if min > 1 {
        let g = out.iter().fold(0i64, |acc, &v| gcd(acc, v));
        if g > 1 {
            for x in out.iter_mut() {
                *x /= g;
            }
        }
    }
    out
}

fn reflect_simple(cartan: &[Vec<i64>], i: usize, root: &Root) -> Root {
    // s_i(v) = v - (sum_j a_ij v_j) eps_i.
    let r = cartan.len();
    let mut out = root.clone();
    let mut pair = 0i64;
    for j in 0..r {
        pair += cartan[i][j] * root[j];
    }
    out[i] -= pair;
    out
}

fn is_positive(root: &Root) -> bool {
    root.iter().all(|&c| c >= 0) && root.iter().any(|&c| c > 0)
}

pub fn negate(root: &Root) -> Root {
    root.iter().map(|c| -c).collect()
}

pub fn root_is_positive(root: &Root) -> bool {
    is_positive(root)
}

impl RootSystem {
    pub fn new(letter: char, rank: usize) -> Result<Self, RootDataError> {
        let cartan = cartan_matrix(letter, rank)?;
        Ok(Self::from_cartan(letter, cartan))
    }

    /// Build from an explicit Cartan matrix (the data-query surface).
    pub fn from_cartan(letter: char, cartan: Vec<Vec<i64>>) -> Self {
        let rank = cartan.len();
        let d = symmetrizer(&cartan);
        let mut set: BTreeSet<Root> = BTreeSet::new();
        for i in 0..rank {
            let mut e = vec![0i64; rank];
            e[i] = 1;
            set.insert(e);
        }
        loop {
            let mut next = set.clone();
            for root in &set {
                for i in 0..rank {
                    next.insert(reflect_simple(&cartan, i, root));
                }
            }
            if next.len() == set.len() {
                break;
            }
            set = next;
        }
        let mut roots: Vec<Root> = set.into_iter().collect();
        roots.sort();
        let positive = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| is_positive(r))
            .map(|(i, _)| i)
            .collect();
        let index = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        RootSystem { letter, rank, cartan, d, roots, positive, index }
    }

    pub fn letter(&self) -> char {
        self.letter
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.positive.iter().map(|&i| &self.roots[i])
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut e = vec![0i64; self.rank];
        e[i] = 1;
        e
    }

    /// d_alpha = (alpha, alpha)/2.
    pub fn d_root(&self, alpha: &Root) -> i64 {
        let two_d = self.pairing_roots(alpha, alpha);
        debug_assert!(two_d % 2 == 0);
        two_d / 2
    }

    pub fn d_simple(&self, i: usize) -> i64 {
        self.d[i]
    }

    /// The invariant form (a, b) on the root lattice: (eps_i, eps_j) = d_i a_ij.
    pub fn pairing_roots(&self, a: &Root, b: &Root) -> i64 {
        let mut s = 0;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] == 0 {
                    continue;
                }
                s += a[i] * b[j] * self.d[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// (lambda, alpha^vee) for an integral weight and a root; always an integer.
    pub fn pairing_weight_coroot(&self, lambda: &Weight, alpha: &Root) -> i64 {
        let num: i64 = (0..self.rank).map(|j| lambda.0[j] * self.d[j] * alpha[j]).sum();
        let da = self.d_root(alpha);
        debug_assert!(num % da == 0, "non-integral coroot pairing");
        num / da
    }

    /// (lambda, 2 alpha); always an integer for integral lambda.
    pub fn pairing_weight_two_root(&self, lambda: &Weight, alpha: &Root) -> i64 {
        let num: i64 = (0..self.rank).map(|j| lambda.0[j] * self.d[j] * alpha[j]).sum();
        2 * num
    }

    /// rho: the half-sum of positive roots, i.e. the all-ones fundamental vector.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    /// A root-lattice vector in fundamental-weight coordinates.
    pub fn root_to_weight(&self, alpha: &Root) -> Weight {
        let mut c = vec![0i64; self.rank];
        for (j, cj) in c.iter_mut().enumerate() {
            for i in 0..self.rank {
                *cj += alpha[i] * self.cartan[j][i];
            }
        }
        Weight(c)
    }

    pub fn simple_reflections(&self) -> Vec<WeylElt> {
        (0..self.rank).map(|i| WeylElt::simple(self, i)).collect()
    }

    /// All Weyl group elements (desk scale only).
    pub fn weyl_elements(&self) -> Vec<WeylElt> {
        let id = WeylElt::identity(self.rank);
        let mut seen = BTreeMap::new();
        seen.insert(id.matrix.clone(), id);
        let mut frontier: Vec<WeylElt> = seen.values().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for w in &frontier {
                for i in 0..self.rank {
                    let ws = w.mul_simple_right(self, i);
                    if !seen.contains_key(&ws.matrix) {
                        seen.insert(ws.matrix.clone(), ws.clone());
                        next.push(ws);
                    }
                }
            }
            frontier = next;
        }
        seen.into_values().collect()
    }

    pub fn longest_element(&self) -> WeylElt {
        self.weyl_elements()
            .into_iter()
            .max_by_key(|w| w.length(self))
            .expect("nonempty Weyl group")
    }
}

/// A Weyl group element: the action matrix on simple-root coordinates
/// (entry j is the image of eps_j) plus a canonical reduced word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElt {
    matrix: Vec<Root>,
    word: Vec<usize>,
}

impl WeylElt {
    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank)
            .map(|j| {
                let mut e = vec![0i64; rank];
                e[j] = 1;
                e
            })
            .collect();
        WeylElt { matrix, word: vec![] }
    }

    pub fn simple(rs: &RootSystem, i: usize) -> Self {
        let matrix = (0..rs.rank)
            .map(|j| reflect_simple(&rs.cartan, i, &rs.simple_root(j)))
            .collect();
        WeylElt { matrix, word: vec![i] }
    }

    /// Reflection in an arbitrary root.
    pub fn reflection(rs: &RootSystem, alpha: &Root) -> Result<Self, RootDataError> {
        if !rs.is_root(alpha) {
            return Err(RootDataError::NotARoot(format!("{:?}", alpha)));
        }
        let da = rs.d_root(alpha);
        let matrix: Vec<Root> = (0..rs.rank)
            .map(|j| {
                let e = rs.simple_root(j);
                // s_alpha(v) = v - (v, alpha^vee) alpha with (v, alpha^vee) = (v, alpha)/d_alpha.
                let pair = rs.pairing_roots(&e, alpha) / da;
                e.iter().zip(alpha).map(|(v, a)| v - pair * a).collect()
            })
            .collect();
        let mut w = WeylElt { matrix, word: vec![] };
        w.word = w.compute_reduced_word(rs);
        Ok(w)
    }

    pub fn from_word(rs: &RootSystem, word: &[usize]) -> WeylElt {
        let mut w = WeylElt::identity(rs.rank);
        for &i in word {
            w = w.mul_simple_right(rs, i);
        }
        w
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().enumerate().all(|(i, &c)| c == i64::from(i == j)))
    }

    /// Image of a root-lattice vector.
    pub fn apply_root(&self, v: &Root) -> Root {
        let rank = self.matrix.len();
        let mut out = vec![0i64; rank];
        for (j, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for i in 0..rank {
                out[i] += c * self.matrix[j][i];
            }
        }
        out
    }

    /// Image of an integral weight in fundamental coordinates.
    pub fn apply_weight(&self, rs: &RootSystem, lambda: &Weight) -> Weight {
        let mut mu = lambda.clone();
        for &i in self.word.iter().rev() {
            let pair = mu.0[i];
            let eps = rs.root_to_weight(&rs.simple_root(i));
            mu = Weight(
                mu.0.iter()
                    .zip(&eps.0)
                    .map(|(c, e)| c - pair * e)
                    .collect(),
            );
        }
        mu
    }

    pub fn mul_simple_right(&self, rs: &RootSystem, i: usize) -> WeylElt {
        let s = WeylElt::simple(rs, i);
        self.mul(rs, &s)
    }

    pub fn mul(&self, rs: &RootSystem, other: &WeylElt) -> WeylElt {
        let matrix: Vec<Root> = (0..rs.rank)
            .map(|j| self.apply_root(&other.matrix[j]))
            .collect();
        let mut w = WeylElt { matrix, word: vec![] };
        w.word = w.compute_reduced_word(rs);
        w
    }

    pub fn inverse(&self, rs: &RootSystem) -> WeylElt {
        let mut w = WeylElt::identity(rs.rank);
        for &i in self.word.iter().rev() {
            w = w.mul_simple_right(rs, i);
        }
        w
    }

    /// Number of positive roots sent negative.
    pub fn length(&self, rs: &RootSystem) -> usize {
        rs.positive_roots()
            .filter(|alpha| !is_positive(&self.apply_root(alpha)))
            .count()
    }

    /// Canonical reduced word: repeatedly peel the least left descent.
    fn compute_reduced_word(&self, rs: &RootSystem) -> Vec<usize> {
        let mut word = Vec::new();
        let mut current = self.clone();
        loop {
            let mut descent = None;
            for i in 0..rs.rank {
                // s_i * current is shorter iff current^{-1}(eps_i) < 0.
                let pre = preimage_of_simple(rs, &current, i);
                if !is_positive(&pre) {
                    descent = Some(i);
                    break;
                }
            }
            match descent {
                None => break,
                Some(i) => {
                    word.push(i);
                    let s = WeylElt::simple(rs, i);
                    let matrix: Vec<Root> = (0..rs.rank)
                        .map(|j| s.apply_root(&current.matrix[j]))
                        .collect();
                    current = WeylElt { matrix, word: vec![] };
                }
            }
        }
        debug_assert!(current.is_identity());
        word
    }

    /// w(rho) - rho as a root-lattice vector.
    pub fn rho_shift(&self, rs: &RootSystem) -> Root {
        // rho - w(rho) = sum of positive alpha with w^{-1}(alpha) negative.
        let winv = self.inverse(rs);
        let mut acc = vec![0i64; rs.rank];
        for alpha in rs.positive_roots() {
            if !is_positive(&winv.apply_root(alpha)) {
                for (a, b) in acc.iter_mut().zip(alpha) {
                    *a -= b;
                }
            }
        }
        acc
    }
}

fn preimage_of_simple(rs: &RootSystem, w: &WeylElt, i: usize) -> Root {
    for alpha in rs.roots() {
        if w.apply_root(alpha) == rs.simple_root(i) {
            return alpha.clone();
        }
    }
    unreachable!("a Weyl element hits every simple root");
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e")
        } else {
            let parts: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
            write!(f, "{}", parts.join("*"))
        }
    }
}

// ---------------------------------------------------------------------------
// Toric points
// ---------------------------------------------------------------------------

/// A point of the toric variety attached to the root system: a root-indexed
/// family of projective parameters chi_{2 alpha} with inversion symmetry.
/// Only positive-root entries are stored; negatives are derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricPoint {
    entries: BTreeMap<Root, ProjParam>,
}

/// Validation report; violations are data, not errors.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ToricReport {
    pub ok: bool,
    pub cocycle_violations: Vec<String>,
    pub regularity_violations: Vec<String>,
}

impl ToricPoint {
    pub fn from_positive_entries(
        rs: &RootSystem,
        entries: BTreeMap<Root, ProjParam>,
    ) -> Result<Self, RootDataError> {
        for alpha in rs.positive_roots() {
            if !entries.contains_key(alpha) {
                return Err(RootDataError::MissingEntry(format!("{:?}", alpha)));
            }
        }
        Ok(ToricPoint { entries })
    }

    /// The point induced by a multiplicative character via its simple-root
    /// values: chi_{2 alpha} = prod_i c_i^{alpha_i}.
    pub fn from_character(rs: &RootSystem, simple_values: &[LaurentScalar]) -> Self {
        assert_eq!(simple_values.len(), rs.rank());
        let mut entries = BTreeMap::new();
        for alpha in rs.positive_roots() {
            let mut v = LaurentScalar::one();
            for (i, &c) in alpha.iter().enumerate() {
                for _ in 0..c {
                    v = &v * &simple_values[i];
                }
            }
            entries.insert(alpha.clone(), ProjParam::finite(v));
        }
        ToricPoint { entries }
    }

    /// chi_{2 alpha} for any root; negative roots via inversion symmetry.
    pub fn entry(&self, alpha: &Root) -> ProjParam {
        if let Some(p) = self.entries.get(alpha) {
            return p.clone();
        }
        self.entries
            .get(&negate(alpha))
            .map(|p| p.invert())
            .expect("entry defined on all roots")
    }

    pub fn positive_entries(&self) -> &BTreeMap<Root, ProjParam> {
        &self.entries
    }

    /// (w . chi)_{2 beta} = q^{(w rho - rho, 2 beta)} chi_{w^{-1}(2 beta)}.
    pub fn shifted_weyl(&self, rs: &RootSystem, w: &WeylElt) -> ToricPoint {
        let winv = w.inverse(rs);
        let shift = w.rho_shift(rs);
        let mut entries = BTreeMap::new();
        for beta in rs.positive_roots() {
            let e = 2 * rs.pairing_roots(&shift, beta);
            let pre = winv.apply_root(beta);
            let p = self.entry(&pre).scale_q_power(e);
            entries.insert(beta.clone(), p);
        }
        ToricPoint { entries }
    }

    /// Check the cocycle identity and, optionally, regularity.
    pub fn validate(&self, rs: &RootSystem, require_regular: bool) -> ToricReport {
        let mut report = ToricReport { ok: true, ..Default::default() };
        for a in rs.roots() {
            for b in rs.roots() {
                let sum: Root = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
                if !rs.is_root(&sum) {
                    continue;
                }
                let pa = self.entry(a);
                let pb = self.entry(b);
                let pc = self.entry(&sum);
                let lhs = &(pa.x() * pb.x()) * pc.y();
                let rhs = &(pa.y() * pb.y()) * pc.x();
                if lhs != rhs {
                    report.ok = false;
                    report
                        .cocycle_violations
                        .push(format!("({:?}, {:?}, {:?})", a, b, sum));
                }
            }
        }
        if require_regular {
            for alpha in rs.positive_roots() {
                let d = rs.d_root(alpha);
                if let Some(m) = self.entry(alpha).monomial_lattice_test(d) {
                    report.ok = false;
                    report
                        .regularity_violations
                        .push(format!("chi at {:?} equals q^{}", alpha, 2 * d * m));
                }
            }
        }
        report
    }

    pub fn is_regular(&self, rs: &RootSystem) -> bool {
        rs.positive_roots()
            .all(|alpha| self.entry(alpha).monomial_lattice_test(rs.d_root(alpha)).is_none())
    }

    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|(root, p)| ToricEntryJson {
                root: root.clone(),
                x: p.x().to_string(),
                y: p.y().to_string(),
            })
            .collect();
        serde_json::to_value(ToricPointJson {
            letter: rs.letter().to_string(),
            rank: rs.rank(),
            entries,
        })
        .expect("serializable")
    }

    /// Parse from JSON. Negative-root entries are folded in by inversion.
    pub fn from_json(value: &serde_json::Value) -> Result<(RootSystem, ToricPoint), RootDataError> {
        let parsed: ToricPointJson =
            serde_json::from_value(value.clone()).map_err(|e| RootDataError::Serde(e.to_string()))?;
        let letter = parsed
            .letter
            .chars()
            .next()
            .ok_or_else(|| RootDataError::Serde("empty type".into()))?;
        let rs = RootSystem::new(letter, parsed.rank)?;
        let mut entries = BTreeMap::new();
        for e in parsed.entries {
            let x: LaurentScalar = e.x.parse()?;
            let y: LaurentScalar = e.y.parse()?;
            let p = ProjParam::new(x, y)?;
            if !rs.is_root(&e.root) {
                return Err(RootDataError::NotARoot(format!("{:?}", e.root)));
            }
            if is_positive(&e.root) {
                entries.insert(e.root, p);
            } else {
                entries.insert(negate(&e.root), p.invert());
            }
        }
        let point = ToricPoint::from_positive_entries(&rs, entries)?;
        Ok((rs, point))
    }
}

#[derive(Serialize, Deserialize)]
struct ToricEntryJson {
    root: Vec<i64>,
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct ToricPointJson {
    #[serde(rename = "type")]
    letter: String,
    rank: usize,
    entries: Vec<ToricEntryJson>,
}

// ---------------------------------------------------------------------------
// Kostant partition function
// ---------------------------------------------------------------------------

/// Number of multisets of positive roots summing to nu (root coordinates),
/// by dynamic programming over the positive roots.
pub fn kostant_partition(rs: &RootSystem, nu: &Root) -> u64 {
    if nu.iter().any(|&c| c < 0) {
        return 0;
    }
    let positives: Vec<&Root> = rs.positive_roots().collect();
    let mut table: BTreeMap<Root, u64> = BTreeMap::new();
    table.insert(vec![0; rs.rank()], 1);
    for beta in positives {
        let mut next: BTreeMap<Root, u64> = BTreeMap::new();
        for (v, count) in &table {
            let mut target = v.clone();
            loop {
                if target.iter().zip(nu).any(|(a, b)| a > b) {
                    break;
                }
                *next.entry(target.clone()).or_insert(0) += count;
                for (t, b) in target.iter_mut().zip(beta) {
                    *t += b;
                }
            }
        }
        table = next;
    }
    table.get(nu).copied().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Parabolic subsets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

/// From a sign pattern on all roots, form P = {sign +} cup {alpha in R+ :
/// sign 0}, check that P is parabolic, and return the minimal-length w whose
/// positive system w(R+) lies inside P, together with that positive system.
pub fn positive_system_from_parabolic(
    rs: &RootSystem,
    signs: &BTreeMap<Root, Sign>,
) -> Result<(WeylElt, Vec<Root>), RootDataError> {
    let mut p: BTreeSet<Root> = BTreeSet::new();
    for root in rs.roots() {
        let s = signs
            .get(root)
            .ok_or_else(|| RootDataError::NotParabolic(format!("missing sign for {:?}", root)))?;
        match s {
            Sign::Plus => {
                p.insert(root.clone());
            }
            Sign::Zero => {
                if is_positive(root) {
                    p.insert(root.clone());
                }
            }
            Sign::Minus => {}
        }
    }
    for root in rs.roots() {
        if !p.contains(root) && !p.contains(&negate(root)) {
            return Err(RootDataError::NotParabolic(format!(
                "neither {:?} nor its negative lies in P",
                root
            )));
        }
    }
    for a in &p {
        for b in &p {
            let sum: Root = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if rs.is_root(&sum) && !p.contains(&sum) {
                return Err(RootDataError::NotParabolic(format!(
                    "{:?} + {:?} escapes P",
                    a, b
                )));
            }
        }
    }
    let mut best: Option<WeylElt> = None;
    for w in rs.weyl_elements() {
        let image_ok = rs
            .positive_roots()
            .all(|alpha| p.contains(&w.apply_root(alpha)));
        if image_ok {
            let better = match &best {
                None => true,
                Some(b) => {
                    let (lw, lb) = (w.length(rs), b.length(rs));
                    lw < lb || (lw == lb && w.word() < b.word())
                }
            };
            if better {
                best = Some(w);
            }
        }
    }
    let w = best.ok_or_else(|| {
        RootDataError::NotParabolic("no positive system inside P".into())
    })?;
    let image = rs.positive_roots().map(|alpha| w.apply_root(alpha)).collect();
    Ok((w, image))
}

// ---------------------------------------------------------------------------
// Type A weight views
// ---------------------------------------------------------------------------

/// Type-A view of an integral weight: an integer n-tuple modulo the all-ones
/// vector; the canonical representative has last coordinate zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleWeight(pub Vec<i64>);

impl TupleWeight {
    pub fn canonical(mut v: Vec<i64>) -> Self {
        let last = *v.last().expect("nonempty tuple");
        for c in v.iter_mut() {
            *c -= last;
        }
        TupleWeight(v)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// (lambda, e_i - e_j) = lambda_i - lambda_j (1-based).
    pub fn pair_eij(&self, i: usize, j: usize) -> i64 {
        self.0[i - 1] - self.0[j - 1]
    }

    /// lambda + [e_S] for a subset bitmask (bit i-1 represents i).
    pub fn add_indicator(&self, mask: u32) -> TupleWeight {
        let mut v = self.0.clone();
        for (idx, c) in v.iter_mut().enumerate() {
            if mask & (1 << idx) != 0 {
                *c += 1;
            }
        }
        TupleWeight::canonical(v)
    }

    pub fn sub_indicator(&self, mask: u32) -> TupleWeight {
        let mut v = self.0.clone();
        for (idx, c) in v.iter_mut().enumerate() {
            if mask & (1 << idx) != 0 {
                *c -= 1;
            }
        }
        TupleWeight::canonical(v)
    }

    /// Fundamental-weight coordinates of A_{n-1}: c_i = lambda_i - lambda_{i+1}.
    pub fn to_fundamental(&self) -> Weight {
        Weight(self.0.windows(2).map(|w| w[0] - w[1]).collect())
    }

    pub fn from_fundamental(w: &Weight) -> TupleWeight {
        let r = w.0.len();
        let mut v = vec![0i64; r + 1];
        for i in (0..r).rev() {
            v[i] = v[i + 1] + w.0[i];
        }
        TupleWeight::canonical(v)
    }
}

/// The type-A root e_i - e_j (1-based) in simple-root coordinates of A_{n-1}.
pub fn type_a_root(n: usize, i: usize, j: usize) -> Root {
    assert!(i != j && 1 <= i && i <= n && 1 <= j && j <= n);
    let mut v = vec![0i64; n - 1];
    let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
    for c in v.iter_mut().take(hi - 1).skip(lo - 1) {
        *c = sign;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_integer;

    #[test]
    fn build_examples() {
        let a2 = RootSystem::new('A', 2).unwrap();
        assert_eq!(a2.num_positive(), 3);
        assert_eq!(a2.rho(), Weight(vec![1, 1]));
        for alpha in a2.roots() {
            assert_eq!(a2.d_root(alpha), 1);
        }

        let b2 = RootSystem::new('B', 2).unwrap();
        let mut ds: Vec<i64> = b2.roots().iter().map(|r| b2.d_root(r)).collect();
        ds.sort();
        ds.dedup();
        assert_eq!(ds, vec![1, 2]);
        assert_eq!(b2.num_positive(), 4);

        let g2 = RootSystem::new('G', 2).unwrap();
        assert_eq!(g2.num_positive(), 6);
        let mut ds: Vec<i64> = g2.roots().iter().map(|r| g2.d_root(r)).collect();
        ds.sort();
        ds.dedup();
        assert_eq!(ds, vec![1, 3]);

        assert_eq!(RootSystem::new('A', 3).unwrap().num_positive(), 6);
        assert_eq!(RootSystem::new('B', 3).unwrap().num_positive(), 9);
        assert_eq!(RootSystem::new('C', 3).unwrap().num_positive(), 9);
        assert_eq!(RootSystem::new('D', 4).unwrap().num_positive(), 12);
        assert!(RootSystem::new('E', 6).is_err());
    }

    #[test]
    fn reflections_are_involutions() {
        for (letter, rank) in [('A', 2), ('B', 2), ('A', 3), ('G', 2)] {
            let rs = RootSystem::new(letter, rank).unwrap();
            for i in 0..rank {
                let s = WeylElt::simple(&rs, i);
                assert!(s.mul(&rs, &s).is_identity());
                let eps = rs.simple_root(i);
                assert_eq!(s.apply_root(&eps), negate(&eps));
                for alpha in rs.roots() {
                    assert!(rs.is_root(&s.apply_root(alpha)));
                }
                // Involution on weights too.
                let lam = Weight((0..rank as i64).map(|k| k - 1).collect());
                assert_eq!(s.apply_weight(&rs, &s.apply_weight(&rs, &lam)), lam);
            }
        }
    }

    #[test]
    fn weyl_group_sizes_and_longest() {
        let a2 = RootSystem::new('A', 2).unwrap();
        assert_eq!(a2.weyl_elements().len(), 6);
        let w0 = a2.longest_element();
        assert_eq!(w0.length(&a2), 3);
        for alpha in a2.positive_roots() {
            assert!(!is_positive(&w0.apply_root(alpha)));
        }
        let b2 = RootSystem::new('B', 2).unwrap();
        assert_eq!(b2.weyl_elements().len(), 8);
        let g2 = RootSystem::new('G', 2).unwrap();
        assert_eq!(g2.weyl_elements().len(), 12);
    }

    #[test]
    fn shifted_action_examples() {
        let a1 = RootSystem::new('A', 1).unwrap();
        let c = q_integer(2);
        let chi = ToricPoint::from_character(&a1, &[c.clone()]);
        let id = WeylElt::identity(1);
        assert_eq!(chi.shifted_weyl(&a1, &id), chi);

        let s = WeylElt::simple(&a1, 0);
        let moved = chi.shifted_weyl(&a1, &s);
        let alpha = a1.simple_root(0);
        // (s . chi)_{2 alpha} = [1 : c q^4].
        let expect =
            ProjParam::new(LaurentScalar::one(), &c * &LaurentScalar::q_power(4)).unwrap();
        assert_eq!(moved.entry(&alpha), expect);
    }

    #[test]
    fn shifted_action_is_group_action_on_a2() {
        let a2 = RootSystem::new('A', 2).unwrap();
        let chi = ToricPoint::from_character(
            &a2,
            &[q_integer(2), &q_integer(3) * &LaurentScalar::q_power(1)],
        );
        let elements = a2.weyl_elements();
        for w1 in &elements {
            for w2 in &elements {
                let composed = w1.mul(&a2, w2);
                let lhs = chi.shifted_weyl(&a2, &composed);
                let rhs = chi.shifted_weyl(&a2, w2).shifted_weyl(&a2, w1);
                assert_eq!(lhs, rhs, "w1={} w2={}", w1, w2);
            }
        }
    }

    #[test]
    fn toric_validate_examples() {
        let a2 = RootSystem::new('A', 2).unwrap();
        let chi = ToricPoint::from_character(&a2, &[q_integer(2), q_integer(5)]);
        assert!(chi.validate(&a2, false).ok);
        for w in a2.weyl_elements() {
            assert!(chi.shifted_weyl(&a2, &w).validate(&a2, false).ok);
        }
        let bad = ToricPoint::from_character(&a2, &[LaurentScalar::q_power(2), q_integer(5)]);
        let report = bad.validate(&a2, true);
        assert!(!report.ok);
        assert!(!report.regularity_violations.is_empty());
        // Perturbing one entry breaks the cocycle, witnessed by a triple.
        let mut entries = chi.positive_entries().clone();
        entries.insert(vec![1, 1], ProjParam::finite(q_integer(7)));
        let perturbed = ToricPoint { entries };
        let report = perturbed.validate(&a2, false);
        assert!(!report.ok);
        assert!(!report.cocycle_violations.is_empty());
    }

    #[test]
    fn shifted_action_preserves_validity_on_b2() {
        let b2 = RootSystem::new('B', 2).unwrap();
        let chi = ToricPoint::from_character(&b2, &[q_integer(2), q_integer(3)]);
        assert!(chi.validate(&b2, false).ok);
        for w in b2.weyl_elements() {
            assert!(chi.shifted_weyl(&b2, &w).validate(&b2, false).ok);
        }
    }

    #[test]
    fn toric_json_round_trip() {
        let a2 = RootSystem::new('A', 2).unwrap();
        let chi = ToricPoint::from_character(&a2, &[q_integer(2), q_integer(5)]);
        let json = chi.to_json(&a2);
        let (rs2, back) = ToricPoint::from_json(&json).unwrap();
        assert_eq!(rs2.rank(), 2);
        assert_eq!(back, chi);
    }

    fn kostant_brute(rs: &RootSystem, nu: &Root) -> u64 {
        fn rec(positives: &[&Root], nu: &Root) -> u64 {
            if nu.iter().all(|&c| c == 0) {
                return 1;
            }
            if nu.iter().any(|&c| c < 0) {
                return 0;
            }
            match positives.split_first() {
                None => 0,
                Some((beta, rest)) => {
                    let mut total = 0;
                    let mut current = nu.clone();
                    loop {
                        total += rec(rest, &current);
                        if current.iter().zip(beta.iter()).any(|(c, b)| c < b) {
                            break;
                        }
                        for (c, b) in current.iter_mut().zip(beta.iter()) {
                            *c -= b;
                        }
                    }
                    total
                }
            }
        }
        let positives: Vec<&Root> = rs.positive_roots().collect();
        rec(&positives, nu)
    }

    #[test]
    fn kostant_examples_and_oracle() {
        let a2 = RootSystem::new('A', 2).unwrap();
        assert_eq!(kostant_partition(&a2, &vec![0, 0]), 1);
        assert_eq!(kostant_partition(&a2, &vec![1, 1]), 2);
        assert_eq!(kostant_partition(&a2, &vec![-1, 2]), 0);

        for rs in [RootSystem::new('A', 2).unwrap(), RootSystem::new('A', 3).unwrap()] {
            let r = rs.rank();
            let mut all = vec![vec![0i64; r]];
            let mut frontier = all.clone();
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for v in &frontier {
                    for i in 0..r {
                        let mut w = v.clone();
                        w[i] += 1;
                        if w.iter().sum::<i64>() <= 6 && !all.contains(&w) {
                            all.push(w.clone());
                            next.push(w);
                        }
                    }
                }
                frontier = next;
            }
            for nu in all {
                assert_eq!(kostant_partition(&rs, &nu), kostant_brute(&rs, &nu), "nu={:?}", nu);
            }
        }
    }

    #[test]
    fn parabolic_examples() {
        let a2 = RootSystem::new('A', 2).unwrap();
        let sign_by = |f: &dyn Fn(&Root) -> Sign| -> BTreeMap<Root, Sign> {
            a2.roots().iter().map(|r| (r.clone(), f(r))).collect()
        };
        let all_plus = sign_by(&|r| if is_positive(r) { Sign::Plus } else { Sign::Minus });
        let (w, image) = positive_system_from_parabolic(&a2, &all_plus).unwrap();
        assert!(w.is_identity());
        assert_eq!(image.len(), 3);

        let all_minus = sign_by(&|r| if is_positive(r) { Sign::Minus } else { Sign::Plus });
        let (w, image) = positive_system_from_parabolic(&a2, &all_minus).unwrap();
        assert_eq!(w.length(&a2), 3);
        for alpha in &image {
            assert!(!is_positive(alpha));
        }

        let mixed = sign_by(&|r| {
            if r == &vec![1i64, 0] || r == &vec![-1i64, 0] {
                Sign::Zero
            } else if is_positive(r) {
                Sign::Plus
            } else {
                Sign::Minus
            }
        });
        let (w, image) = positive_system_from_parabolic(&a2, &mixed).unwrap();
        assert!(w.length(&a2) <= 1);
        for (alpha, beta) in a2.positive_roots().zip(image.iter()) {
            assert_eq!(&w.apply_root(alpha), beta);
        }

        // A non-closed pattern is rejected.
        let broken = sign_by(&|r| {
            if r == &vec![1i64, 1] {
                Sign::Minus
            } else if is_positive(r) {
                Sign::Plus
            } else {
                Sign::Minus
            }
        });
        assert!(positive_system_from_parabolic(&a2, &broken).is_err());
    }

    #[test]
    fn type_a_views() {
        let n = 4;
        let lam = TupleWeight::canonical(vec![3, 1, 0, -2]);
        assert_eq!(lam.pair_eij(1, 2), 2);
        assert_eq!(lam.pair_eij(4, 1), -5);
        let fw = lam.to_fundamental();
        assert_eq!(TupleWeight::from_fundamental(&fw), lam);
        assert_eq!(type_a_root(n, 2, 4), vec![0, 1, 1]);
        assert_eq!(type_a_root(n, 4, 2), vec![0, -1, -1]);
        let a3 = RootSystem::new('A', 3).unwrap();
        let root = type_a_root(n, 2, 4);
        assert_eq!(a3.pairing_weight_coroot(&fw, &root), lam.pair_eij(2, 4));
    }

    #[test]
    fn weight_action_consistency() {
        // w acting on a root through weight coordinates matches the root action.
        for (letter, rank) in [('A', 2), ('B', 2)] {
            let rs = RootSystem::new(letter, rank).unwrap();
            for w in rs.weyl_elements() {
                for alpha in rs.roots() {
                    let via_root = rs.root_to_weight(&w.apply_root(alpha));
                    let via_weight = w.apply_weight(&rs, &rs.root_to_weight(alpha));
                    assert_eq!(via_root, via_weight);
                }
            }
        }
    }
}
