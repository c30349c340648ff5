//! Curves `E: Y² = X(X² + AX + B)` that could share a mod-`p`
//! representation with a Frey curve.
//!
//! The conductor of `E` pins down how `2`, `q` and the primes of `C` split
//! between `B` and `A² − 4B`. Each admissible split is a [`ShapeDescriptor`];
//! subtracting the two sides gives `A²`, and `A²` being a square is exactly
//! one of the obstruction equations. Going the other way, a solution of
//! that equation produces the curve, which is then checked against its shape.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::diophantine::{Equation, ObstructionSolution, THRESHOLD_M};
use crate::ellcurve::{invariants_ab, CurveAB};
use crate::error::{Error, Result};
use crate::intmath::{big_pow, is_perfect_square, prime_divisors_u64, valuation};
use crate::Parity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ShapeCase {
    A,
    B,
    #[serde(rename = "A'")]
    APrime,
    #[serde(rename = "B'")]
    BPrime,
    #[serde(rename = "C'")]
    CPrime,
    #[serde(rename = "D'")]
    DPrime,
    #[serde(rename = "E'")]
    EPrime,
    #[serde(rename = "F'")]
    FPrime,
    /// `k` odd, `B = −2^α q^γ P`, `A² − 4B = P`: forces `A² < 0`, so it never
    /// yields a curve. Never enumerated; kept so the dead end is checkable.
    OddNegative,
}

impl ShapeCase {
    pub const ODD: [ShapeCase; 2] = [ShapeCase::A, ShapeCase::B];
    pub const EVEN: [ShapeCase; 6] = [
        ShapeCase::APrime,
        ShapeCase::BPrime,
        ShapeCase::CPrime,
        ShapeCase::DPrime,
        ShapeCase::EPrime,
        ShapeCase::FPrime,
    ];

    pub fn label(self) -> &'static str {
        match self {
            ShapeCase::A => "A",
            ShapeCase::B => "B",
            ShapeCase::APrime => "A'",
            ShapeCase::BPrime => "B'",
            ShapeCase::CPrime => "C'",
            ShapeCase::DPrime => "D'",
            ShapeCase::EPrime => "E'",
            ShapeCase::FPrime => "F'",
            ShapeCase::OddNegative => "odd-negative",
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            ShapeCase::A | ShapeCase::B | ShapeCase::OddNegative => Parity::Odd,
            _ => Parity::Even,
        }
    }
}

impl std::fmt::Display for ShapeCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Which of `B` and `A² − 4B` carries a factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    B,
    Disc,
}

/// `B = sign_b·2^{α or 0}·q^{γ or 0}·P` and likewise for `A² − 4B`, where
/// `P = ∏_{r|C} r^{β_r}`, `β_r ∈ {1, 3}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShapeDescriptor {
    pub case: ShapeCase,
    pub c: u64,
    pub q: u64,
    pub sign_b: i8,
    pub sign_disc: i8,
    pub two_side: Side,
    /// `α` must exceed this.
    pub two_bound: u32,
    pub two_even: bool,
    pub q_side: Side,
    pub q_parity: Option<Parity>,
    /// `(r, β_r)` for every prime `r | C`.
    pub betas: Vec<(u64, u8)>,
}

/// The equation a shape reduces to, with the constraints on its solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ObstructionSpec {
    pub equation: Equation,
    pub min_m: u32,
    pub m_even: bool,
    pub gamma_parity: Option<Parity>,
    pub gamma_positive: bool,
}

impl ObstructionSpec {
    pub fn admits(&self, sol: &ObstructionSolution) -> bool {
        sol.equation == self.equation
            && sol.m >= self.min_m
            && (!self.m_even || sol.m % 2 == 0)
            && self.gamma_parity.map_or(true, |p| p.matches(sol.gamma as u64))
            && (!self.gamma_positive || sol.gamma > 0)
    }
}

impl ShapeDescriptor {
    /// Product of the primes with `β_r = 3`; `P = C·s²`.
    pub fn s_factor(&self) -> u64 {
        self.betas.iter().filter(|(_, b)| *b == 3).map(|(r, _)| r).product()
    }

    pub fn p_factor(&self) -> BigInt {
        self.betas.iter().map(|&(r, b)| big_pow(r, b as u32)).product()
    }

    /// `α` in terms of `m`: the 2-power on `B` is `2^{m−2}`, on `A² − 4B`
    /// it is `2^{m+2}`.
    pub fn alpha_for(&self, m: u32) -> Option<u32> {
        match self.two_side {
            Side::B => m.checked_sub(2),
            Side::Disc => Some(m + 2),
        }
    }

    pub fn m_for(&self, alpha: u32) -> Option<u32> {
        match self.two_side {
            Side::B => Some(alpha + 2),
            Side::Disc => alpha.checked_sub(2),
        }
    }

    /// Whether `(α, γ)` obey the shape's own constraints.
    pub fn exponents_allowed(&self, alpha: u32, gamma: u32) -> bool {
        alpha > self.two_bound
            && (!self.two_even || alpha % 2 == 0)
            && self.q_parity.map_or(true, |p| p.matches(gamma as u64))
    }

    /// `(B, A² − 4B)` prescribed by the shape.
    pub fn values(&self, alpha: u32, gamma: u32) -> (BigInt, BigInt) {
        let p = self.p_factor();
        let side = |s: Side, sign: i8| {
            let mut v = p.clone();
            if self.two_side == s {
                v *= big_pow(2, alpha);
            }
            if self.q_side == s {
                v *= big_pow(self.q, gamma);
            }
            if sign < 0 {
                -v
            } else {
                v
            }
        };
        (side(Side::B, self.sign_b), side(Side::Disc, self.sign_disc))
    }

    /// `A = √(D + 4B)` with `A ≥ 0`, if the shape values give a square.
    /// The twist by `−1` has the same `B` and `A² − 4B`.
    pub fn curve_from_exponents(&self, alpha: u32, gamma: u32) -> Option<CurveAB> {
        let (b, d) = self.values(alpha, gamma);
        let a = is_perfect_square(&(&d + &b * 4u32))?;
        CurveAB::new(a, b).ok()
    }
}

fn descriptor(case: ShapeCase, c: u64, q: u64, betas: Vec<(u64, u8)>) -> ShapeDescriptor {
    use Parity::*;
    use ShapeCase::*;
    use Side::{Disc, B as OnB};
    // (sign_b, sign_disc, two_side, two_bound, two_even, q_side, q_parity)
    let (sb, sd, ts, tb, te, qs, qp) = match case {
        A => (-1, 1, Disc, 8, false, OnB, Some(Odd)),
        B => (1, -1, OnB, 4, false, Disc, Some(Odd)),
        APrime => (-1, 1, OnB, 4, true, Disc, None),
        BPrime => (-1, 1, Disc, 8, false, OnB, Some(Even)),
        CPrime => (-1, 1, Disc, 8, false, Disc, None),
        DPrime => (1, -1, OnB, 4, false, OnB, None),
        EPrime => (1, -1, OnB, 4, false, Disc, Some(Even)),
        FPrime => (1, -1, Disc, 8, true, OnB, None),
        OddNegative => (-1, 1, OnB, 4, true, OnB, Some(Odd)),
    };
    ShapeDescriptor {
        case,
        c,
        q,
        sign_b: sb,
        sign_disc: sd,
        two_side: ts,
        two_bound: tb,
        two_even: te,
        q_side: qs,
        q_parity: qp,
        betas,
    }
}

/// Every `β` assignment, as a list of `(r, β_r)`; the all-ones choice first.
fn beta_choices(c: u64) -> Vec<Vec<(u64, u8)>> {
    let primes = prime_divisors_u64(c);
    (0..1u32 << primes.len())
        .map(|mask| {
            primes
                .iter()
                .enumerate()
                .map(|(i, &r)| (r, if mask >> i & 1 == 1 { 3 } else { 1 }))
                .collect()
        })
        .collect()
}

/// Descriptors of one case, one per `β` choice.
pub fn shapes_for_case(c: u64, q: u64, case: ShapeCase) -> Vec<ShapeDescriptor> {
    beta_choices(c)
        .into_iter()
        .map(|betas| descriptor(case, c, q, betas))
        .collect()
}

/// Two case families for odd `k`, six for even `k`, each times the `β`
/// choices.
pub fn enumerate_shapes(c: u64, q: u64, parity: Parity) -> Vec<ShapeDescriptor> {
    let cases: &[ShapeCase] = match parity {
        Parity::Odd => &ShapeCase::ODD,
        Parity::Even => &ShapeCase::EVEN,
    };
    cases.iter().flat_map(|&case| shapes_for_case(c, q, case)).collect()
}

/// MAIN for `A`, `B`, `B′`, `E′`; QPOW for `A′`, `F′`; RN for `C′`, `D′`.
/// `None` for the case that never produces a curve.
pub fn obstruction_for_shape(shape: &ShapeDescriptor) -> Option<ObstructionSpec> {
    use ShapeCase::*;
    let spec = |equation, m_even, gamma_parity, gamma_positive| ObstructionSpec {
        equation,
        min_m: THRESHOLD_M,
        m_even,
        gamma_parity,
        gamma_positive,
    };
    match shape.case {
        A | B | BPrime | EPrime => Some(spec(Equation::Main, false, Some(shape.case_gamma_parity()), false)),
        APrime | FPrime => Some(spec(Equation::Qpow, true, Some(Parity::Odd), true)),
        CPrime | DPrime => Some(spec(Equation::Rn, false, None, false)),
        OddNegative => None,
    }
}

impl ShapeDescriptor {
    fn case_gamma_parity(&self) -> Parity {
        self.q_parity.unwrap_or(self.case.parity())
    }
}

/// `ν_r(B) = ν_r(A² − 4B)` for every prime `r | C`.
pub fn inertia_check(curve: &CurveAB, c: u64) -> bool {
    let d = curve.disc_core();
    prime_divisors_u64(c)
        .into_iter()
        .all(|r| match (valuation(curve.b(), r), valuation(&d, r)) {
            (Ok(vb), Ok(vd)) => vb.exponent == vd.exponent,
            _ => false,
        })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateCurve {
    #[serde(serialize_with = "ser_curve")]
    pub curve: CurveAB,
    pub shape: ShapeDescriptor,
    pub source: ObstructionSolution,
    pub s_factor: u64,
}

fn ser_curve<S: serde::Serializer>(c: &CurveAB, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("CurveAB", 2)?;
    st.serialize_field("A", &c.a().to_string())?;
    st.serialize_field("B", &c.b().to_string())?;
    st.end()
}

/// Curves accepted and `(s, reason)` for each rejected `β` choice.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Realization {
    pub accepted: Vec<CandidateCurve>,
    pub rejected: Vec<(u64, String)>,
}

/// Closed form of the curve attached to `sol`, before any checking.
fn closed_form(shape: &ShapeDescriptor, sol: &ObstructionSolution) -> Option<(BigInt, BigInt)> {
    use ShapeCase::*;
    let c = BigInt::from(shape.c);
    let s = BigInt::from(shape.s_factor());
    let cs2 = &c * &s * &s;
    let cst = &c * &s * &sol.t;
    let q_g = big_pow(shape.q, sol.gamma);
    let two_m2 = || big_pow(2, sol.m - 2);
    Some(match shape.case {
        A | BPrime => (cst * 2u32, -(q_g * cs2)),
        B | EPrime => (cst, two_m2() * cs2),
        APrime => (cst, -(two_m2() * cs2)),
        FPrime => (cst * 2u32, q_g * cs2),
        CPrime => (cst * 2u32, -cs2),
        DPrime => (cst, two_m2() * q_g * cs2),
        OddNegative => return None,
    })
}

/// Builds and re-verifies the curve for one `β` choice. The inner `Err`
/// carries the reason a curve was dropped.
pub fn realize_shape(
    shape: &ShapeDescriptor,
    sol: &ObstructionSolution,
) -> Result<std::result::Result<CandidateCurve, String>> {
    if !sol.verify(shape.c, shape.q) {
        return Err(Error::OutsideShape(format!("{sol} is not a solution")));
    }
    let alpha = shape.alpha_for(sol.m);
    let Some(spec) = obstruction_for_shape(shape) else {
        // No closed form: go through A² = D + 4B, which is negative here.
        let built = alpha.and_then(|a| shape.curve_from_exponents(a, sol.gamma));
        return Ok(Err(match built {
            Some(_) => return Err(Error::Invariant(format!("case {} produced a curve", shape.case))),
            None => "A^2 is negative".to_string(),
        }));
    };
    if !spec.admits(sol) {
        return Err(Error::OutsideShape(format!(
            "{sol} does not meet the constraints of case {}",
            shape.case
        )));
    }
    let alpha = alpha.expect("m > 6");
    let (a, b) = closed_form(shape, sol).expect("closed form exists");
    let curve = match CurveAB::new(a, b) {
        Ok(c) => c,
        Err(e) => return Ok(Err(e.to_string())),
    };
    if !shape.exponents_allowed(alpha, sol.gamma) {
        return Ok(Err(format!(
            "exponents (alpha, gamma) = ({alpha}, {}) outside the case",
            sol.gamma
        )));
    }
    let (b_exp, d_exp) = shape.values(alpha, sol.gamma);
    if curve.b() != &b_exp || curve.disc_core() != d_exp {
        return Ok(Err(format!("{curve} does not factor as case {}", shape.case)));
    }
    if !inertia_check(&curve, shape.c) {
        return Ok(Err("inertia valuations differ".into()));
    }
    if let Err(e) = invariants_ab(&curve) {
        return Ok(Err(e.to_string()));
    }
    Ok(Ok(CandidateCurve {
        curve,
        s_factor: shape.s_factor(),
        shape: shape.clone(),
        source: sol.clone(),
    }))
}

/// One curve per divisor `s` of `C` for the given case.
pub fn realize_candidates(case: ShapeCase, sol: &ObstructionSolution, c: u64, q: u64) -> Result<Realization> {
    let mut out = Realization::default();
    for shape in shapes_for_case(c, q, case) {
        match realize_shape(&shape, sol)? {
            Ok(cand) => out.accepted.push(cand),
            Err(reason) => {
                log::debug!("case {case}, s = {}: dropped: {reason}", shape.s_factor());
                out.rejected.push((shape.s_factor(), reason));
            }
        }
    }
    Ok(out)
}

/// Reads `(t, γ, m)` back from a candidate's `A` and `B`.
pub fn recover_solution(curve: &CurveAB, shape: &ShapeDescriptor) -> Option<ObstructionSolution> {
    let spec = obstruction_for_shape(shape)?;
    let p = shape.p_factor();
    let strip = |n: &BigInt, side: Side| -> Option<(u32, u32)> {
        let (mut rest, r) = n.abs().div_rem(&p);
        if !r.is_zero() {
            return None;
        }
        let mut take = |prime: u64| {
            let mut e = 0;
            let pb = BigInt::from(prime);
            while !rest.is_zero() && (&rest % &pb).is_zero() {
                rest /= &pb;
                e += 1;
            }
            e
        };
        let a = if shape.two_side == side { take(2) } else { 0 };
        let g = if shape.q_side == side { take(shape.q) } else { 0 };
        rest.is_one().then_some((a, g))
    };
    let (ab, gb) = strip(curve.b(), Side::B)?;
    let (ad, gd) = strip(&curve.disc_core(), Side::Disc)?;
    let alpha = ab + ad;
    let gamma = gb + gd;
    let m = shape.m_for(alpha)?;
    let mult = BigInt::from(shape.c * shape.s_factor()) * if shape.two_side == Side::Disc { 2u32 } else { 1 };
    let (t, r) = curve.a().abs().div_rem(&mult);
    if !r.is_zero() {
        return None;
    }
    let sol = ObstructionSolution::new(shape.c, shape.q, t, gamma, m, spec.equation).ok()?;
    spec.admits(&sol).then_some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn inertia_examples() {
        assert!(inertia_check(&CurveAB::new(7, -7).unwrap(), 7));
        assert!(!inertia_check(&CurveAB::new(2, -3).unwrap(), 3));
        assert!(inertia_check(&CurveAB::new(2, -3).unwrap(), 1));
    }

    #[test]
    fn shape_counts() {
        assert_eq!(enumerate_shapes(7, 3, Parity::Odd).len(), 4);
        assert_eq!(enumerate_shapes(7, 3, Parity::Even).len(), 12);
        assert_eq!(enumerate_shapes(1, 3, Parity::Even).len(), 6);
        assert_eq!(enumerate_shapes(15, 7, Parity::Even).len(), 24);
    }

    #[test]
    fn shape_invariants() {
        for parity in [Parity::Odd, Parity::Even] {
            for s in enumerate_shapes(105, 11, parity) {
                assert_eq!(s.case.parity(), parity);
                assert!(s.betas.iter().all(|(_, b)| *b == 1 || *b == 3));
                assert_eq!((s.two_side == Side::B), s.two_bound == 4);
                assert_eq!(s.p_factor(), BigInt::from(105 * s.s_factor() * s.s_factor()));
            }
        }
    }

    #[test]
    fn obstruction_tags() {
        let shape = |case| descriptor(case, 7, 3, vec![(7, 1)]);
        let b = obstruction_for_shape(&shape(ShapeCase::BPrime)).unwrap();
        assert_eq!((b.equation, b.gamma_parity), (Equation::Main, Some(Parity::Even)));
        let a = obstruction_for_shape(&shape(ShapeCase::A)).unwrap();
        assert_eq!((a.equation, a.gamma_parity), (Equation::Main, Some(Parity::Odd)));
        assert_eq!(
            obstruction_for_shape(&shape(ShapeCase::CPrime)).unwrap().equation,
            Equation::Rn
        );
        assert_eq!(
            obstruction_for_shape(&shape(ShapeCase::DPrime)).unwrap().equation,
            Equation::Rn
        );
        let a = obstruction_for_shape(&shape(ShapeCase::APrime)).unwrap();
        assert_eq!((a.equation, a.m_even, a.gamma_positive), (Equation::Qpow, true, true));
        assert_eq!(
            obstruction_for_shape(&shape(ShapeCase::FPrime)).unwrap().equation,
            Equation::Qpow
        );
        assert!(obstruction_for_shape(&shape(ShapeCase::OddNegative)).is_none());
    }

    #[test]
    fn realization_example() {
        let sol = ObstructionSolution::new(7, 11, bi(1), 2, 7, Equation::Main).unwrap();
        let r = realize_candidates(ShapeCase::BPrime, &sol, 7, 11).unwrap();
        let got: Vec<_> = r
            .accepted
            .iter()
            .map(|c| {
                (
                    c.s_factor,
                    c.curve.a().clone(),
                    c.curve.b().clone(),
                    c.curve.disc_core(),
                )
            })
            .collect();
        assert_eq!(
            got,
            vec![
                (1, bi(14), bi(-847), bi(512 * 7)),
                (7, bi(98), bi(-41503), bi(512 * 343)),
            ]
        );
        for c in &r.accepted {
            assert_eq!(recover_solution(&c.curve, &c.shape), Some(sol.clone()));
        }
    }

    #[test]
    fn below_threshold_is_an_error() {
        let sol = ObstructionSolution::new(7, 3, bi(3), 0, 6, Equation::Main).unwrap();
        assert!(matches!(
            realize_candidates(ShapeCase::BPrime, &sol, 7, 3),
            Err(Error::OutsideShape(_))
        ));
        // Wrong γ parity for the case.
        let sol = ObstructionSolution::new(7, 3, bi(5), 4, 8, Equation::Main).unwrap();
        assert!(realize_candidates(ShapeCase::A, &sol, 7, 3).is_err());
        assert!(realize_candidates(ShapeCase::CPrime, &sol, 7, 3).is_err());
    }

    #[test]
    fn closed_form_matches_generic_route() {
        let sol = ObstructionSolution::new(7, 3, bi(5), 4, 8, Equation::Main).unwrap();
        for case in [ShapeCase::BPrime, ShapeCase::EPrime] {
            for shape in shapes_for_case(7, 3, case) {
                let alpha = shape.alpha_for(sol.m).unwrap();
                let generic = shape.curve_from_exponents(alpha, sol.gamma);
                let cand = realize_shape(&shape, &sol).unwrap();
                assert_eq!(cand.ok().map(|c| c.curve), generic, "case {case}");
            }
        }
    }

    #[test]
    fn odd_negative_branch_is_empty() {
        let sol = ObstructionSolution::new(7, 3, bi(5), 4, 8, Equation::Main).unwrap();
        let r = realize_candidates(ShapeCase::OddNegative, &sol, 7, 3).unwrap();
        assert!(r.accepted.is_empty());
        assert_eq!(r.rejected.len(), 2);
    }

    #[test]
    fn rn_and_qpow_cases() {
        // 127·1² + 1 = 2⁷.
        let sol = ObstructionSolution::new(127, 3, bi(1), 0, 7, Equation::Rn).unwrap();
        for case in [ShapeCase::CPrime, ShapeCase::DPrime] {
            let r = realize_candidates(case, &sol, 127, 3).unwrap();
            assert_eq!(r.accepted.len(), 2, "case {case}: {:?}", r.rejected);
            for c in &r.accepted {
                assert_eq!(recover_solution(&c.curve, &c.shape), Some(sol.clone()));
            }
        }
        // 7·1² + 2⁸ = 263.
        let sol = ObstructionSolution::new(7, 263, bi(1), 1, 8, Equation::Qpow).unwrap();
        for case in [ShapeCase::APrime, ShapeCase::FPrime] {
            let r = realize_candidates(case, &sol, 7, 263).unwrap();
            assert_eq!(r.accepted.len(), 2, "case {case}: {:?}", r.rejected);
            for c in &r.accepted {
                assert_eq!(recover_solution(&c.curve, &c.shape), Some(sol.clone()));
            }
        }
    }
}
