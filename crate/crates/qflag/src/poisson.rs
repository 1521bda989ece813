//! Membership, conversion, and normalization for the Poisson parameter
//! spaces: the solution set of the quadratic relations on root-indexed
//! families phi, its regular locus, the quotient-type locus over the
//! rationals, and the classical (q = 1) analogues.

use crate::rootdata::{
    negate, positive_system_from_parabolic, root_is_positive, Root, RootDataError, RootSystem,
    Sign, ToricPoint, WeylElt,
};
use crate::scalar::{LaurentScalar, ProjParam, ScalarError};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PoissonError {
    #[error("entries must be rational constants for this space: {0}")]
    ModeMismatch(String),
    #[error("phi is not a member of the requested space: {0:?}")]
    NotMember(Vec<String>),
    #[error("chi has x = y at roots {0:?}; outside the image of the phi-embedding")]
    NonFinite(Vec<String>),
    #[error("phi is not of quotient type: {0:?}")]
    NotQuot(Vec<String>),
    #[error("root data error: {0}")]
    RootData(#[from] RootDataError),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMode {
    Quantum,
    Classical,
}

/// Which parameter space to test membership in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiSpace {
    /// Solutions of phi_a phi_b + 1 = phi_{a+b} (phi_a + phi_b).
    Fssorb,
    /// The regular locus: chi_{phi, 2a} avoids q_a^{2Z}.
    Circ,
    /// Rational entries with -1 <= phi_a <= 1.
    Quot,
    /// Classical solutions of phi_a phi_b = phi_{a+b}(phi_a + phi_b).
    Zero,
    /// Classical regular locus: phi_a avoids {1/(n d_a)}, n != 0.
    ZeroCirc,
}

/// A root-indexed family of scalars with antisymmetry phi_{-a} = -phi_a.
/// Positive-root entries are stored; the rest are derived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiParam {
    pub mode: PhiMode,
    entries: BTreeMap<Root, LaurentScalar>,
}

/// Membership report: every violated relation, with witnesses.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PhiReport {
    pub ok: bool,
    pub violations: Vec<String>,
}

impl PhiParam {
    pub fn from_positive_entries(
        rs: &RootSystem,
        mode: PhiMode,
        entries: BTreeMap<Root, LaurentScalar>,
    ) -> Result<Self, RootDataError> {
        for alpha in rs.positive_roots() {
            if !entries.contains_key(alpha) {
                return Err(RootDataError::MissingEntry(format!("{:?}", alpha)));
            }
        }
        Ok(PhiParam { mode, entries })
    }

    /// phi_alpha for any root, using antisymmetry.
    pub fn entry(&self, alpha: &Root) -> LaurentScalar {
        if let Some(v) = self.entries.get(alpha) {
            return v.clone();
        }
        self.entries
            .get(&negate(alpha))
            .map(|v| -v)
            .expect("entry defined on all roots")
    }

    pub fn positive_entries(&self) -> &BTreeMap<Root, LaurentScalar> {
        &self.entries
    }

    /// The family phi_a = (a_val + 1)/(a_val - 1) induced by a multiplicative
    /// character with the given simple-root values (all products must avoid 1).
    pub fn from_character(rs: &RootSystem, simple_values: &[LaurentScalar]) -> Self {
        let chi = ToricPoint::from_character(rs, simple_values);
        let mut entries = BTreeMap::new();
        for alpha in rs.positive_roots() {
            let a = chi.entry(alpha).value().expect("finite character value");
            let num = &a + &LaurentScalar::one();
            let den = &a - &LaurentScalar::one();
            assert!(!den.is_zero(), "character value 1 not allowed");
            entries.insert(alpha.clone(), &num / &den);
        }
        PhiParam { mode: PhiMode::Quantum, entries }
    }

    /// The classical family phi_a = 1/chi(a) for a linear functional chi
    /// (given by its simple-root values) nonvanishing on all roots.
    pub fn from_linear_functional(rs: &RootSystem, simple_values: &[BigRational]) -> Self {
        let mut entries = BTreeMap::new();
        for alpha in rs.positive_roots() {
            let mut v = BigRational::zero();
            for (i, &c) in alpha.iter().enumerate() {
                v += BigRational::from_integer(c.into()) * &simple_values[i];
            }
            assert!(!v.is_zero(), "functional vanishes on a root");
            let inv = v.recip();
            entries.insert(alpha.clone(), rational_to_scalar(&inv));
        }
        PhiParam { mode: PhiMode::Classical, entries }
    }

    pub fn check_membership(&self, rs: &RootSystem, space: PhiSpace) -> PhiReport {
        let mut report = PhiReport { ok: true, ..Default::default() };
        let quantum_rel = matches!(space, PhiSpace::Fssorb | PhiSpace::Circ | PhiSpace::Quot);
        let one = LaurentScalar::one();
        for a in rs.roots() {
            for b in rs.roots() {
                let sum: Root = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if !rs.is_root(&sum) {
                    continue;
                }
                let pa = self.entry(a);
                let pb = self.entry(b);
                let pc = self.entry(&sum);
                let lhs = if quantum_rel { &(&pa * &pb) + &one } else { &pa * &pb };
                let rhs = &pc * &(&pa + &pb);
                if lhs != rhs {
                    report.ok = false;
                    report
                        .violations
                        .push(format!("relation fails at ({:?}, {:?}, {:?})", a, b, sum));
                }
            }
        }
        match space {
            PhiSpace::Fssorb | PhiSpace::Zero => {}
            PhiSpace::Circ => {
                // (phi_a + 1) not in (phi_a - 1) q_a^{2Z}, tested projectively.
                for alpha in rs.positive_roots() {
                    let phi = self.entry(alpha);
                    let num = &phi + &one;
                    let den = &phi - &one;
                    if let Ok(p) = ProjParam::new(num, den) {
                        if let Some(m) = p.monomial_lattice_test(rs.d_root(alpha)) {
                            report.ok = false;
                            report.violations.push(format!(
                                "(phi+1)/(phi-1) = q^{} at {:?}",
                                2 * rs.d_root(alpha) * m,
                                alpha
                            ));
                        }
                    }
                }
            }
            PhiSpace::Quot => {
                for alpha in rs.positive_roots() {
                    let phi = self.entry(alpha);
                    match phi.as_rational() {
                        None => {
                            report.ok = false;
                            report
                                .violations
                                .push(format!("entry at {:?} is not a rational constant", alpha));
                        }
                        Some(r) => {
                            if r.abs() > BigRational::one() {
                                report.ok = false;
                                report
                                    .violations
                                    .push(format!("|phi| > 1 at {:?}: {}", alpha, r));
                            }
                        }
                    }
                }
            }
            PhiSpace::ZeroCirc => {
                for alpha in rs.positive_roots() {
                    let phi = self.entry(alpha);
                    match phi.as_rational() {
                        None => {
                            report.ok = false;
                            report
                                .violations
                                .push(format!("entry at {:?} is not a rational constant", alpha));
                        }
                        Some(r) => {
                            // phi in {1/(n d_a) : n != 0} iff 1/phi is a
                            // nonzero integer multiple of d_a.
                            if !r.is_zero() {
                                let inv = r.recip();
                                if inv.is_integer() {
                                    let da = BigRational::from_integer(rs.d_root(alpha).into());
                                    if (inv / da).is_integer() {
                                        report.ok = false;
                                        report.violations.push(format!(
                                            "phi = 1/(n d) resonance at {:?}: {}",
                                            alpha, r
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        report
    }

    /// The embedding into toric points: chi_{phi, 2a} = [phi_a + 1 : phi_a - 1].
    pub fn to_toric(&self, rs: &RootSystem) -> Result<ToricPoint, PoissonError> {
        let membership = self.check_membership(rs, PhiSpace::Fssorb);
        if !membership.ok {
            return Err(PoissonError::NotMember(membership.violations));
        }
        let one = LaurentScalar::one();
        let mut entries = BTreeMap::new();
        for alpha in rs.positive_roots() {
            let phi = self.entry(alpha);
            let p = ProjParam::new(&phi + &one, &phi - &one)?;
            entries.insert(alpha.clone(), p);
        }
        Ok(ToricPoint::from_positive_entries(rs, entries)?)
    }
}

/// Inverse of the embedding: phi_a = (x + y)/(x - y) for chi_{2a} = [x : y].
/// Roots with x = y are outside the image and reported as NonFinite.
pub fn toric_to_phi(rs: &RootSystem, chi: &ToricPoint) -> Result<PhiParam, PoissonError> {
    let mut bad = Vec::new();
    let mut entries = BTreeMap::new();
    for alpha in rs.positive_roots() {
        let p = chi.entry(alpha);
        let num = p.x() + p.y();
        let den = p.x() - p.y();
        if den.is_zero() {
            bad.push(format!("{:?}", alpha));
            continue;
        }
        entries.insert(alpha.clone(), &num / &den);
    }
    if !bad.is_empty() {
        return Err(PoissonError::NonFinite(bad));
    }
    Ok(PhiParam { mode: PhiMode::Quantum, entries })
}

/// Result of the quotient-type normalization.
#[derive(Debug, Clone)]
pub struct QuotNormalization {
    pub w: WeylElt,
    pub phi: PhiParam,
    /// Consistency audit of the component structure; a consequence of
    /// membership, surfaced as data.
    pub component_audit: ComponentAudit,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ComponentAudit {
    pub ok: bool,
    pub components: Vec<ComponentInfo>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentInfo {
    /// Simple-root indices of the component of {eps : phi'_eps != 1}.
    pub simple_indices: Vec<usize>,
    /// Indices inside the component with phi'_eps not in {0, 1}.
    pub deformed_indices: Vec<usize>,
    /// At most one deformed index, with coefficient 1 in the highest root.
    pub ok: bool,
}

/// Normalize a quotient-type parameter to nonnegative values on the positive
/// roots: w comes from the parabolic subset of the sign pattern and
/// phi'_a = phi_{w(a)}.
pub fn normalize_quotient(
    rs: &RootSystem,
    phi: &PhiParam,
) -> Result<QuotNormalization, PoissonError> {
    let membership = phi.check_membership(rs, PhiSpace::Quot);
    if !membership.ok {
        return Err(PoissonError::NotQuot(membership.violations));
    }
    let mut signs = BTreeMap::new();
    for root in rs.roots() {
        let r = phi
            .entry(root)
            .as_rational()
            .expect("quot entries are rational");
        let s = if r.is_zero() {
            Sign::Zero
        } else if r.is_positive() {
            Sign::Plus
        } else {
            Sign::Minus
        };
        signs.insert(root.clone(), s);
    }
    let (w, _image) = positive_system_from_parabolic(rs, &signs)?;
    let mut entries = BTreeMap::new();
    for alpha in rs.positive_roots() {
        entries.insert(alpha.clone(), phi.entry(&w.apply_root(alpha)));
    }
    let normalized = PhiParam { mode: phi.mode, entries };
    let component_audit = audit_components(rs, &normalized);
    Ok(QuotNormalization { w, phi: normalized, component_audit })
}

/// Component audit: on the Dynkin subdiagram {eps : phi'_eps != 1}, each
/// connected component may contain at most one simple root with
/// phi'_eps not in {0, 1}, and that root must have coefficient 1 in the
/// highest root of the component's subsystem.
fn audit_components(rs: &RootSystem, phi: &PhiParam) -> ComponentAudit {
    let one = LaurentScalar::one();
    let rank = rs.rank();
    let in_set: Vec<bool> = (0..rank)
        .map(|i| phi.entry(&rs.simple_root(i)) != one)
        .collect();
    let mut seen = vec![false; rank];
    let mut audit = ComponentAudit { ok: true, components: vec![] };
    for start in 0..rank {
        if !in_set[start] || seen[start] {
            continue;
        }
        let mut comp = vec![];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..rank {
                if in_set[j] && !seen[j] && rs.cartan()[i][j] != 0 && i != j {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort();
        let deformed: Vec<usize> = comp
            .iter()
            .copied()
            .filter(|&i| !phi.entry(&rs.simple_root(i)).is_zero())
            .collect();
        let mut ok = deformed.len() <= 1;
        if ok {
            if let Some(&eps) = deformed.first() {
                let highest = rs
                    .roots()
                    .iter()
                    .filter(|r| {
                        root_is_positive(r)
                            && r.iter().enumerate().all(|(i, &c)| c == 0 || comp.contains(&i))
                    })
                    .max_by_key(|r| r.iter().sum::<i64>())
                    .cloned();
                if let Some(h) = highest {
                    ok = h[eps] == 1;
                }
            }
        }
        if !ok {
            audit.ok = false;
        }
        audit.components.push(ComponentInfo {
            simple_indices: comp,
            deformed_indices: deformed,
            ok,
        });
    }
    audit
}

fn rational_to_scalar(r: &BigRational) -> LaurentScalar {
    let num = LaurentScalar::from_bigint(r.numer().clone());
    let den = LaurentScalar::from_bigint(r.denom().clone());
    &num / &den
}

// JSON: { "type": "A", "rank": r, "mode": "quantum",
//         "entries": [ { "root": [...], "value": "<scalar>" } ] }
#[derive(Serialize, Deserialize)]
struct PhiEntryJson {
    root: Vec<i64>,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct PhiParamJson {
    #[serde(rename = "type")]
    letter: String,
    rank: usize,
    mode: PhiMode,
    entries: Vec<PhiEntryJson>,
}

impl PhiParam {
    pub fn to_json(&self, rs: &RootSystem) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|(root, v)| PhiEntryJson { root: root.clone(), value: v.to_string() })
            .collect();
        serde_json::to_value(PhiParamJson {
            letter: rs.letter().to_string(),
            rank: rs.rank(),
            mode: self.mode,
            entries,
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<(RootSystem, PhiParam), PoissonError> {
        let parsed: PhiParamJson = serde_json::from_value(value.clone())
            .map_err(|e| RootDataError::Serde(e.to_string()))?;
        let letter = parsed
            .letter
            .chars()
            .next()
            .ok_or_else(|| RootDataError::Serde("empty type".into()))?;
        let rs = RootSystem::new(letter, parsed.rank)?;
        let mut entries = BTreeMap::new();
        for e in parsed.entries {
            if !rs.is_root(&e.root) {
                return Err(RootDataError::NotARoot(format!("{:?}", e.root)).into());
            }
            let v: LaurentScalar = e.value.parse().map_err(RootDataError::Scalar)?;
            if root_is_positive(&e.root) {
                entries.insert(e.root, v);
            } else {
                entries.insert(negate(&e.root), -&v);
            }
        }
        let phi = PhiParam::from_positive_entries(&rs, parsed.mode, entries)?;
        Ok((rs, phi))
    }
}

/// The constant family phi = 1 on the positive roots.
pub fn phi_all_ones(rs: &RootSystem) -> PhiParam {
    let entries = rs
        .positive_roots()
        .map(|alpha| (alpha.clone(), LaurentScalar::one()))
        .collect();
    PhiParam { mode: PhiMode::Quantum, entries }
}

/// One-parameter quotient family for type A: phi = t at one simple root,
/// 1 everywhere else on the positive roots.
pub fn phi_simple_deformation(rs: &RootSystem, simple: usize, t: &BigRational) -> PhiParam {
    let mut entries = BTreeMap::new();
    for alpha in rs.positive_roots() {
        let height: i64 = alpha.iter().sum();
        let v = if height == 1 && alpha[simple] == 1 {
            rational_to_scalar(t)
        } else {
            LaurentScalar::one()
        };
        entries.insert(alpha.clone(), v);
    }
    PhiParam { mode: PhiMode::Quantum, entries }
}

/// Relabel by a Weyl element: phi'_a = phi_{w(a)}.
pub fn phi_pullback(rs: &RootSystem, phi: &PhiParam, w: &WeylElt) -> PhiParam {
    let mut entries = BTreeMap::new();
    for alpha in rs.positive_roots() {
        entries.insert(alpha.clone(), phi.entry(&w.apply_root(alpha)));
    }
    PhiParam { mode: phi.mode, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q_integer;

    fn a2() -> RootSystem {
        RootSystem::new('A', 2).unwrap()
    }

    #[test]
    fn constant_solution_is_fssorb_and_quot() {
        let rs = a2();
        let phi = phi_all_ones(&rs);
        assert!(phi.check_membership(&rs, PhiSpace::Fssorb).ok);
        assert!(phi.check_membership(&rs, PhiSpace::Quot).ok);
    }

    #[test]
    fn character_induced_family_is_member() {
        for rs in [
            RootSystem::new('A', 2).unwrap(),
            RootSystem::new('A', 3).unwrap(),
            RootSystem::new('B', 2).unwrap(),
        ] {
            let values: Vec<LaurentScalar> =
                (0..rs.rank()).map(|i| q_integer(2 + i as i64)).collect();
            let phi = PhiParam::from_character(&rs, &values);
            assert!(phi.check_membership(&rs, PhiSpace::Fssorb).ok, "{}", rs.letter());
            assert!(phi.check_membership(&rs, PhiSpace::Circ).ok);
        }
    }

    #[test]
    fn classical_functional_family() {
        let rs = a2();
        let vals = [
            BigRational::new(2.into(), 1.into()),
            BigRational::new(3.into(), 1.into()),
        ];
        let phi = PhiParam::from_linear_functional(&rs, &vals);
        assert!(phi.check_membership(&rs, PhiSpace::Zero).ok);
        // 1/2 and 1/3 are 1/(n d) resonances with d = 1.
        assert!(!phi.check_membership(&rs, PhiSpace::ZeroCirc).ok);
        let vals = [
            BigRational::new(2.into(), 5.into()),
            BigRational::new(3.into(), 7.into()),
        ];
        let phi = PhiParam::from_linear_functional(&rs, &vals);
        assert!(phi.check_membership(&rs, PhiSpace::Zero).ok);
        assert!(phi.check_membership(&rs, PhiSpace::ZeroCirc).ok);
    }

    #[test]
    fn phi_to_toric_examples() {
        let rs = a2();
        let phi = phi_all_ones(&rs);
        let chi = phi.to_toric(&rs).unwrap();
        for alpha in rs.positive_roots() {
            assert!(chi.entry(alpha).is_infinity());
        }
        let values = [q_integer(2), q_integer(5)];
        let phi = PhiParam::from_character(&rs, &values);
        let chi = phi.to_toric(&rs).unwrap();
        let expect = ToricPoint::from_character(&rs, &values);
        assert_eq!(chi, expect);
        assert!(chi.validate(&rs, false).ok);
    }

    #[test]
    fn toric_to_phi_examples() {
        let rs = RootSystem::new('A', 1).unwrap();
        let alpha = rs.simple_root(0);

        let inf = ToricPoint::from_positive_entries(
            &rs,
            [(alpha.clone(), ProjParam::infinity())].into(),
        )
        .unwrap();
        let phi = toric_to_phi(&rs, &inf).unwrap();
        assert!(phi.entry(&alpha).is_one());

        let zero = ToricPoint::from_positive_entries(
            &rs,
            [(alpha.clone(), ProjParam::zero())].into(),
        )
        .unwrap();
        let phi = toric_to_phi(&rs, &zero).unwrap();
        assert_eq!(phi.entry(&alpha), LaurentScalar::from_int(-1));

        let q2 = ToricPoint::from_positive_entries(
            &rs,
            [(alpha.clone(), ProjParam::finite(LaurentScalar::q_power(2)))].into(),
        )
        .unwrap();
        let phi = toric_to_phi(&rs, &q2).unwrap();
        let expect = &(&LaurentScalar::q_power(2) + &LaurentScalar::one())
            / &(&LaurentScalar::q_power(2) - &LaurentScalar::one());
        assert_eq!(phi.entry(&alpha), expect);
        assert_eq!(phi.to_toric(&rs).unwrap(), q2);

        let ones = ToricPoint::from_positive_entries(
            &rs,
            [(alpha.clone(), ProjParam::finite(LaurentScalar::one()))].into(),
        )
        .unwrap();
        assert!(matches!(toric_to_phi(&rs, &ones), Err(PoissonError::NonFinite(_))));
    }

    #[test]
    fn round_trip_phi_toric_phi() {
        let rs = RootSystem::new('A', 3).unwrap();
        let values = [q_integer(2), q_integer(3), q_integer(4)];
        let phi = PhiParam::from_character(&rs, &values);
        let chi = phi.to_toric(&rs).unwrap();
        let back = toric_to_phi(&rs, &chi).unwrap();
        assert_eq!(back, phi);
    }

    #[test]
    fn circ_matches_toric_regularity() {
        let rs = a2();
        let phi = PhiParam::from_character(&rs, &[q_integer(2), q_integer(5)]);
        let chi = phi.to_toric(&rs).unwrap();
        assert_eq!(
            phi.check_membership(&rs, PhiSpace::Circ).ok,
            chi.validate(&rs, true).ok
        );
        let phi = PhiParam::from_character(&rs, &[LaurentScalar::q_power(2), q_integer(5)]);
        let chi = phi.to_toric(&rs).unwrap();
        assert!(!phi.check_membership(&rs, PhiSpace::Circ).ok);
        assert_eq!(
            phi.check_membership(&rs, PhiSpace::Circ).ok,
            chi.validate(&rs, true).ok
        );
    }

    #[test]
    fn normalize_quotient_examples() {
        let rs = a2();
        let phi = phi_all_ones(&rs);
        let norm = normalize_quotient(&rs, &phi).unwrap();
        assert!(norm.w.is_identity());
        assert_eq!(norm.phi, phi);
        assert!(norm.component_audit.ok);

        let minus = PhiParam::from_positive_entries(
            &rs,
            PhiMode::Quantum,
            rs.positive_roots()
                .map(|a| (a.clone(), LaurentScalar::from_int(-1)))
                .collect(),
        )
        .unwrap();
        let norm = normalize_quotient(&rs, &minus).unwrap();
        assert_eq!(norm.w.length(&rs), 3);
        assert_eq!(norm.phi, phi_all_ones(&rs));

        // Mixed signs: (-1, 1, 1) satisfies the quadratic relations and quot;
        // a single reflection renders it nonnegative.
        let mut entries = BTreeMap::new();
        entries.insert(vec![1, 0], LaurentScalar::from_int(-1));
        entries.insert(vec![0, 1], LaurentScalar::one());
        entries.insert(vec![1, 1], LaurentScalar::one());
        let mixed = PhiParam::from_positive_entries(&rs, PhiMode::Quantum, entries).unwrap();
        assert!(mixed.check_membership(&rs, PhiSpace::Quot).ok);
        let norm = normalize_quotient(&rs, &mixed).unwrap();
        assert_eq!(norm.w.length(&rs), 1);
        for alpha in rs.positive_roots() {
            let r = norm.phi.entry(alpha).as_rational().unwrap();
            assert!(!r.is_negative());
        }
    }

    #[test]
    fn quot_rejects_out_of_range() {
        let rs = a2();
        let mut entries = BTreeMap::new();
        entries.insert(vec![1, 0], LaurentScalar::from_int(3));
        entries.insert(vec![0, 1], LaurentScalar::one());
        entries.insert(vec![1, 1], LaurentScalar::one());
        let phi = PhiParam::from_positive_entries(&rs, PhiMode::Quantum, entries).unwrap();
        let report = phi.check_membership(&rs, PhiSpace::Quot);
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.contains("|phi| > 1")));

        let phi = PhiParam::from_character(&rs, &[q_integer(2), q_integer(3)]);
        let report = phi.check_membership(&rs, PhiSpace::Quot);
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| v.contains("not a rational constant")));
    }

    #[test]
    fn json_round_trip() {
        let rs = a2();
        let phi = PhiParam::from_character(&rs, &[q_integer(2), q_integer(3)]);
        let json = phi.to_json(&rs);
        let (rs2, back) = PhiParam::from_json(&json).unwrap();
        assert_eq!(rs2.rank(), 2);
        assert_eq!(back, phi);
    }

    #[test]
    fn simple_deformation_family() {
        for n in [2usize, 3] {
            let rs = RootSystem::new('A', n).unwrap();
            for simple in 0..n {
                for t in [
                    BigRational::new((-1).into(), 1.into()),
                    BigRational::new(1.into(), 2.into()),
                    BigRational::zero(),
                ] {
                    let phi = phi_simple_deformation(&rs, simple, &t);
                    assert!(
                        phi.check_membership(&rs, PhiSpace::Quot).ok,
                        "n={} simple={} t={}",
                        n,
                        simple,
                        t
                    );
                }
            }
        }
    }
}
