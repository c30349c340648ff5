//! Congruence machinery that bounds the exponent `p`.
//!
//! The Frey curve always has a rational 2-torsion point, which pins its
//! traces modulo 4; a competing curve whose reductions lack a subgroup of
//! order four lands in a disjoint residue class. The products below turn
//! those incompatibilities into explicit nonzero integers that `p` must
//! divide, and the witness searches look for primes `ℓ` where the
//! incompatibility actually occurs.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::ellcurve::CurveAB;
use crate::error::{Error, Result};
use crate::intmath::{big_pow, is_perfect_square, legendre_residue, primes_up_to, residue, same_square_class};
use crate::Parity;

/// Default prime search bound for witness scans.
pub const DEFAULT_WITNESS_BOUND: u64 = 1_000_000;

/// `A_ℓ` (traces ≡ ℓ+3 mod 4) and `B_ℓ` (traces ≡ ℓ+1 mod 4) inside the
/// open Hasse interval `|a| < 2√ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceSets {
    pub ell: u64,
    pub set_a: Vec<i64>,
    pub set_b: Vec<i64>,
}

/// Integers strictly inside the Hasse interval: `a² < 4ℓ`.
fn hasse_open(ell: u64) -> impl Iterator<Item = i64> {
    let r = crate::intmath::isqrt_u64(4 * ell) as i64 + 1;
    (-r..=r).filter(move |a| ((a * a) as u64) < 4 * ell)
}

pub fn admissible_traces(ell: u64) -> TraceSets {
    let class_a = ((ell + 3) % 4) as i64;
    let class_b = ((ell + 1) % 4) as i64;
    let set_a = hasse_open(ell).filter(|a| a.rem_euclid(4) == class_a).collect();
    let set_b = hasse_open(ell).filter(|b| b.rem_euclid(4) == class_b).collect();
    TraceSets { ell, set_a, set_b }
}

/// Monic integer polynomial, coefficients from the constant term upwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPoly {
    coeffs: Vec<BigInt>,
}

impl MinPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        match coeffs.last() {
            Some(lead) if coeffs.len() >= 2 && lead.is_one() => Ok(MinPoly { coeffs }),
            _ => Err(Error::Hypothesis(
                "minimal polynomial must be monic and nonconstant".into(),
            )),
        }
    }

    /// `x − c`.
    pub fn linear(c: impl Into<BigInt>) -> Self {
        MinPoly {
            coeffs: vec![-c.into(), BigInt::one()],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// All complex roots by Durand–Kerner iteration.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect();
        let eval = |z: Complex64| {
            coeffs
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
        };
        let radius = 1.0 + coeffs[..n].iter().map(|c| c.abs()).fold(0.0_f64, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * (radius / 2.0).max(1.0)).collect();
        for _ in 0..2000 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                break;
            }
        }
        roots
    }

    pub fn real_roots(&self) -> Vec<f64> {
        self.complex_roots()
            .into_iter()
            .filter(|z| z.im.abs() <= 1e-7 * (1.0 + z.re.abs()))
            .map(|z| z.re)
            .collect()
    }
}

/// The `ℓ`-th Fourier coefficient of a newform, given by its minimal
/// polynomial over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewformCoefficient {
    ell: u64,
    minpoly: MinPoly,
}

const DELIGNE_TOLERANCE: f64 = 1e-9;

impl NewformCoefficient {
    /// Rejects coefficients with a real conjugate outside `[−2√ℓ, 2√ℓ]`.
    pub fn new(ell: u64, minpoly: MinPoly) -> Result<Self> {
        let bound = 2.0 * (ell as f64).sqrt() + DELIGNE_TOLERANCE;
        if let Some(r) = minpoly.real_roots().into_iter().find(|r| r.abs() > bound) {
            return Err(Error::Hypothesis(format!(
                "root {r} exceeds the Deligne bound 2*sqrt({ell})"
            )));
        }
        Ok(NewformCoefficient { ell, minpoly })
    }

    pub fn rational(ell: u64, c: i64) -> Result<Self> {
        Self::new(ell, MinPoly::linear(c))
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn minpoly(&self) -> &MinPoly {
        &self.minpoly
    }
}

/// `B_ℓ(f)`: `Norm((ℓ+1)² − c²) · ∏_{|a|<2√ℓ, 2|a} Norm(a − c)`, times `ℓ`
/// for irrational forms. Norms come from evaluating the monic minimal
/// polynomial: `Norm(a − c) = P(a)`.
pub fn newform_bound(coeff: &NewformCoefficient, rational: bool) -> BigInt {
    let ell = coeff.ell;
    let poly = &coeff.minpoly;
    let l1 = BigInt::from(ell + 1);
    let sign = if poly.degree() % 2 == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let mut bound = poly.eval(&l1) * sign * poly.eval(&-&l1);
    for a in hasse_open(ell).filter(|a| a % 2 == 0) {
        bound *= poly.eval(&BigInt::from(a));
    }
    if rational {
        bound
    } else {
        bound * ell
    }
}

/// `∏_{a∈A_ℓ, b∈B_ℓ} (a − b) · ∏_{b∈B_ℓ} (b² − (ℓ+1)²)`.
pub fn kraus_product(ell: u64) -> BigInt {
    let sets = admissible_traces(ell);
    let l1 = (ell + 1) as i128;
    let mut prod = BigInt::one();
    for &a in &sets.set_a {
        for &b in &sets.set_b {
            prod *= a - b;
        }
    }
    for &b in &sets.set_b {
        prod *= BigInt::from((b as i128) * (b as i128) - l1 * l1);
    }
    prod
}

/// Which clause of the trace congruence applies at `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CongruenceCase {
    /// Both curves have good reduction: `a_ℓ(F) ≡ c_ℓ`.
    GoodBoth,
    /// `ℓ` divides the Frey conductor but not the level: `c_ℓ ≡ ±(ℓ+1)`.
    MultiplicativeOnly,
}

/// An integer that `p` must divide; zero carries no information.
pub fn congruence_divisor(a_f: i64, c: i64, ell: u64, case: CongruenceCase) -> BigInt {
    match case {
        CongruenceCase::GoodBoth => BigInt::from(a_f) - c,
        CongruenceCase::MultiplicativeOnly => {
            let l1 = BigInt::from(ell + 1);
            &l1 * &l1 - BigInt::from(c) * c
        }
    }
}

/// Result of a prime search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found {
        ell: u64,
    },
    /// No such prime can exist; the reason names the obstruction.
    Impossible {
        reason: String,
    },
    /// None below the bound, which proves nothing.
    Exhausted {
        bound: u64,
    },
}

impl WitnessOutcome {
    pub fn prime(&self) -> Option<u64> {
        match self {
            WitnessOutcome::Found { ell } => Some(*ell),
            _ => None,
        }
    }
}

fn impossible(reason: &str) -> WitnessOutcome {
    WitnessOutcome::Impossible {
        reason: reason.to_string(),
    }
}

/// Least prime `ℓ` where `−Cq^s` is a square mod `ℓ` while both `A² − 4B`
/// and `B` are not. At such a prime the Frey curve has full 2-torsion and
/// `E` has no subgroup of order four, which bounds `p`.
pub fn galois_witness(
    c: u64,
    q: u64,
    parity: Parity,
    curve: &CurveAB,
    search_bound: u64,
    excluded: &[u64],
) -> WitnessOutcome {
    let frey_class = -(BigInt::from(c) * big_pow(q, parity.bit()));
    let b = curve.b();
    let disc = curve.disc_core();
    if is_perfect_square(b).is_some() {
        return impossible("B is a rational square");
    }
    if is_perfect_square(&disc).is_some() {
        return impossible("discriminant is a rational square");
    }
    if same_square_class(b, &frey_class) {
        return impossible("B is equivalent to -Cq^s up to squares");
    }
    if same_square_class(&disc, &frey_class) {
        return impossible("A^2 - 4B is equivalent to -Cq^s up to squares");
    }
    let bad = BigInt::from(2 * c) * q * b * &disc;
    for ell in primes_up_to(search_bound).iter().skip(1) {
        if excluded.contains(&ell) || residue(&bad, ell) == 0 {
            continue;
        }
        if legendre_residue(residue(&frey_class, ell), ell) == 1
            && legendre_residue(residue(&disc, ell), ell) == -1
            && legendre_residue(residue(b, ell), ell) == -1
        {
            return WitnessOutcome::Found { ell };
        }
    }
    WitnessOutcome::Exhausted { bound: search_bound }
}

/// Least prime `ℓ ∤ 2xyz` with `x`, `y` non-squares and `z` a square mod `ℓ`.
pub fn chebotarev_witness(x: &BigInt, y: &BigInt, z: &BigInt, search_bound: u64) -> Result<WitnessOutcome> {
    if x.is_zero() || y.is_zero() || z.is_zero() {
        return Err(Error::Hypothesis("inputs must be nonzero".into()));
    }
    if is_perfect_square(x).is_some() {
        return Err(Error::Hypothesis("x is a rational square".into()));
    }
    if is_perfect_square(y).is_some() {
        return Err(Error::Hypothesis("y is a rational square".into()));
    }
    if same_square_class(z, x) {
        return Err(Error::Hypothesis("z equivalent to x".into()));
    }
    if same_square_class(z, y) {
        return Err(Error::Hypothesis("z equivalent to y".into()));
    }
    let bad = BigInt::from(2) * x * y * z;
    for ell in primes_up_to(search_bound).iter().skip(1) {
        if residue(&bad, ell) == 0 {
            continue;
        }
        if legendre_residue(residue(x, ell), ell) == -1
            && legendre_residue(residue(y, ell), ell) == -1
            && legendre_residue(residue(z, ell), ell) == 1
        {
            return Ok(WitnessOutcome::Found { ell });
        }
    }
    Ok(WitnessOutcome::Exhausted { bound: search_bound })
}

/// `|a| ≤ 2√ℓ`, for callers that need to validate traces.
pub fn within_hasse(a: i64, ell: u64) -> bool {
    (a.unsigned_abs() as u128).pow(2) <= 4 * ell as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn trace_set_examples() {
        let t = admissible_traces(5);
        assert_eq!((t.set_a, t.set_b), (vec![-4, 0, 4], vec![-2, 2]));
        let t = admissible_traces(3);
        assert_eq!((t.set_a, t.set_b), (vec![-2, 2], vec![0]));
        let t = admissible_traces(7);
        assert_eq!((t.set_a, t.set_b), (vec![-2, 2], vec![-4, 0, 4]));
    }

    #[test]
    fn hasse_interval_is_open() {
        // ℓ = 4 is not prime but shows the strictness: 2√4 = 4 is excluded.
        assert_eq!(hasse_open(4).collect::<Vec<_>>(), vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn newform_bound_examples() {
        let c = NewformCoefficient::rational(3, 3).unwrap();
        assert_eq!(newform_bound(&c, true), bi(-105));
        let c = NewformCoefficient::rational(3, 0).unwrap();
        assert_eq!(newform_bound(&c, true), bi(0));
        let p = MinPoly::new(vec![bi(-2), bi(0), bi(1)]).unwrap();
        let c = NewformCoefficient::new(3, p).unwrap();
        assert_eq!(newform_bound(&c, false), bi(-4704));
    }

    #[test]
    fn deligne_bound_enforced() {
        assert!(NewformCoefficient::rational(3, 4).is_err());
        assert!(NewformCoefficient::rational(5, 4).is_ok());
        // x² − 20: roots ±2√5 sit exactly on the bound for ℓ = 5.
        let p = MinPoly::new(vec![bi(-20), bi(0), bi(1)]).unwrap();
        assert!(NewformCoefficient::new(5, p).is_ok());
        let p = MinPoly::new(vec![bi(-21), bi(0), bi(1)]).unwrap();
        assert!(NewformCoefficient::new(5, p).is_err());
        // x² + 1 has no real roots at all.
        let p = MinPoly::new(vec![bi(1), bi(0), bi(1)]).unwrap();
        assert!(NewformCoefficient::new(3, p).is_ok());
        assert!(MinPoly::new(vec![bi(3)]).is_err());
        assert!(MinPoly::new(vec![bi(3), bi(2)]).is_err());
    }

    #[test]
    fn kraus_examples() {
        assert_eq!(kraus_product(3), bi(64));
        // ℓ = 5 by hand: ∏(a−b) over {−4,0,4}×{−2,2} = (−2)(−6)(2)(−2)(6)(2) = −576,
        // ∏(b²−36) = (−32)(−32) = 1024.
        assert_eq!(kraus_product(5), bi(-576 * 1024));
    }

    #[test]
    fn congruence_examples() {
        assert_eq!(congruence_divisor(2, -2, 5, CongruenceCase::GoodBoth), bi(4));
        assert_eq!(congruence_divisor(0, 6, 5, CongruenceCase::MultiplicativeOnly), bi(0));
        assert_eq!(congruence_divisor(1, 1, 7, CongruenceCase::GoodBoth), bi(0));
    }

    #[test]
    fn galois_witness_examples() {
        let curve = CurveAB::new(1, 2).unwrap();
        let w = galois_witness(7, 3, Parity::Odd, &curve, 1000, &[2, 3, 7]);
        assert_eq!(w, WitnessOutcome::Found { ell: 5 });

        let curve = CurveAB::new(1, 9).unwrap();
        let w = galois_witness(7, 3, Parity::Odd, &curve, 1000, &[]);
        assert_eq!(w, impossible("B is a rational square"));

        // A² − 4B = 25 − 16 = 9.
        let curve = CurveAB::new(5, 4).unwrap();
        assert!(is_perfect_square(&curve.disc_core()).is_some());
        let curve = CurveAB::new(5, 6).unwrap(); // 25 − 24 = 1
        let w = galois_witness(7, 3, Parity::Odd, &curve, 1000, &[]);
        assert_eq!(w, impossible("discriminant is a rational square"));
    }

    #[test]
    fn chebotarev_examples() {
        let w = chebotarev_witness(&bi(2), &bi(3), &bi(5), 1000).unwrap();
        assert_eq!(w.prime(), Some(19));
        assert_eq!(
            chebotarev_witness(&bi(4), &bi(3), &bi(5), 1000),
            Err(Error::Hypothesis("x is a rational square".into()))
        );
        assert_eq!(
            chebotarev_witness(&bi(2), &bi(3), &bi(2), 1000),
            Err(Error::Hypothesis("z equivalent to x".into()))
        );
        // z ~ xy is allowed by the hypotheses.
        assert!(chebotarev_witness(&bi(2), &bi(3), &bi(6), 1000)
            .unwrap()
            .prime()
            .is_some());
    }

    #[test]
    fn exhausted_is_distinct_from_impossible() {
        let w = chebotarev_witness(&bi(2), &bi(3), &bi(5), 17).unwrap();
        assert_eq!(w, WitnessOutcome::Exhausted { bound: 17 });
    }
}
