//! The three obstruction equations and their Mordell-curve reformulation.
//!
//! ```text
//! MAIN  Ct² + q^γ = 2^m
//! RN    Ct² + 1   = 2^m q^γ
//! QPOW  Ct² + 2^m = q^γ
//! ```
//!
//! Each solver walks the `(m, γ)` grid of a box and solves for `t` with an
//! exact square test, so the search is exhaustive inside the box and says
//! nothing outside it. A residue filter modulo `C·SQUARE_FILTER_MODULUS`
//! discards almost every grid point before any big-integer work.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::curvedb::{Coverage, CurveDb};
use crate::error::{Error, Result};
use crate::intmath::{big_pow, is_perfect_square, may_be_square_residue, pow_mod, SQUARE_FILTER_MODULUS};
use crate::Parity;

/// Smallest `m` that counts as an obstruction.
pub const THRESHOLD_M: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    Main,
    Rn,
    Qpow,
}

impl Equation {
    pub fn as_str(self) -> &'static str {
        match self {
            Equation::Main => "main",
            Equation::Rn => "rn",
            Equation::Qpow => "qpow",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Equation::Main),
            "rn" => Ok(Equation::Rn),
            "qpow" => Ok(Equation::Qpow),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

fn ser_display<S: Serializer, T: fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

// JSON numbers of any size; the report writers rely on this.
fn ser_number<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n: serde_json::Number = v.to_string().parse().map_err(serde::ser::Error::custom)?;
    n.serialize(s)
}

/// A triple `(t, γ, m)` solving one of the equations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ObstructionSolution {
    #[serde(serialize_with = "ser_number")]
    pub t: BigInt,
    pub gamma: u32,
    pub m: u32,
    pub equation: Equation,
    pub meets_threshold: bool,
}

impl ObstructionSolution {
    /// Builds a solution after checking the identity exactly.
    pub fn new(c: u64, q: u64, t: BigInt, gamma: u32, m: u32, equation: Equation) -> Result<Self> {
        let sol = ObstructionSolution {
            t,
            gamma,
            m,
            equation,
            meets_threshold: false,
        };
        if !sol.verify(c, q) {
            return Err(Error::InvalidInstance(format!(
                "({}, {gamma}, {m}) does not solve {equation} for C = {c}, q = {q}",
                sol.t
            )));
        }
        let met = sol.meets(THRESHOLD_M);
        Ok(ObstructionSolution {
            meets_threshold: met,
            ..sol
        })
    }

    /// Re-checks the defining identity.
    pub fn verify(&self, c: u64, q: u64) -> bool {
        if self.t.is_negative() {
            return false;
        }
        let ct2 = BigInt::from(c) * &self.t * &self.t;
        let (p2, pq) = (big_pow(2, self.m), big_pow(q, self.gamma));
        match self.equation {
            Equation::Main => ct2 + pq == p2,
            Equation::Rn => ct2 + 1u32 == p2 * pq,
            Equation::Qpow => ct2 + p2 == pq,
        }
    }

    /// Threshold test with a configurable least `m`. QPOW additionally needs
    /// `m` even and `γ` odd.
    pub fn meets(&self, min_m: u32) -> bool {
        self.m >= min_m
            && match self.equation {
                Equation::Qpow => self.m % 2 == 0 && self.gamma % 2 == 1,
                _ => true,
            }
    }

    /// `(t;γ;m)`, the compact form used in reports.
    pub fn triple(&self) -> String {
        format!("({};{};{})", self.t, self.gamma, self.m)
    }

    fn order_key(&self) -> (u32, u32, &BigInt) {
        (self.m, self.gamma, &self.t)
    }
}

impl fmt::Display for ObstructionSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (t, gamma, m) = ({}, {}, {})",
            self.equation, self.t, self.gamma, self.m
        )
    }
}

/// Which `γ` values a MAIN search visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaFilter {
    Only(Parity),
    Any,
}

impl GammaFilter {
    fn admits(self, gamma: u32) -> bool {
        match self {
            GammaFilter::Only(p) => p.matches(gamma as u64),
            GammaFilter::Any => true,
        }
    }
}

/// Powers of 2 and `q`, as big integers and as residues modulo
/// `C·SQUARE_FILTER_MODULUS`.
struct Grid {
    c: u64,
    q: u64,
    modulus: u64,
    p2: Vec<BigInt>,
    pq: Vec<BigInt>,
    r2: Vec<u64>,
    rq: Vec<u64>,
}

impl Grid {
    fn new(c: u64, q: u64, m_max: u32, gamma_max: u32) -> Self {
        let modulus = c * SQUARE_FILTER_MODULUS;
        let powers = |base: u64, n: u32| {
            let mut big = Vec::with_capacity(n as usize + 1);
            let mut acc = BigInt::one();
            for _ in 0..=n {
                big.push(acc.clone());
                acc *= base;
            }
            let res = (0..=n as u64).map(|e| pow_mod(base, e, modulus)).collect();
            (big, res)
        };
        let (p2, r2) = powers(2, m_max);
        let (pq, rq) = powers(q, gamma_max);
        Grid {
            c,
            q,
            modulus,
            p2,
            pq,
            r2,
            rq,
        }
    }

    /// `t` with `C·t² = n`, given `n mod modulus = r`.
    fn root(&self, r: u64, n: impl FnOnce() -> BigInt) -> Option<BigInt> {
        if r % self.c != 0 || !may_be_square_residue((r / self.c) % SQUARE_FILTER_MODULUS) {
            return None;
        }
        let n = n();
        if !n.is_positive() && !n.is_zero() {
            return None;
        }
        let (quot, rem) = n.div_rem(&BigInt::from(self.c));
        if !rem.is_zero() {
            return None;
        }
        is_perfect_square(&quot)
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    fn push(&self, out: &mut Vec<ObstructionSolution>, t: BigInt, gamma: u32, m: u32, eq: Equation) {
        // Construction re-verifies the identity; a failure here is a solver bug.
        let sol =
            ObstructionSolution::new(self.c, self.q, t, gamma, m, eq).expect("grid solution satisfies its identity");
        out.push(sol);
    }
}

fn finish(mut v: Vec<ObstructionSolution>) -> Vec<ObstructionSolution> {
    v.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    v
}

/// MAIN over `0 ≤ m ≤ m_max`, `0 ≤ γ ≤ gamma_max` with `γ` in the filter.
pub fn solve_main_filtered(
    c: u64,
    q: u64,
    gammas: GammaFilter,
    m_max: u32,
    gamma_max: u32,
) -> Vec<ObstructionSolution> {
    let g = Grid::new(c, q, m_max, gamma_max);
    let mut out = Vec::new();
    for m in 0..=m_max {
        for gamma in (0..=gamma_max).filter(|&e| gammas.admits(e)) {
            let (p2, pq) = (&g.p2[m as usize], &g.pq[gamma as usize]);
            if pq > p2 {
                break;
            }
            let r = g.sub(g.r2[m as usize], g.rq[gamma as usize]);
            if let Some(t) = g.root(r, || p2 - pq) {
                g.push(&mut out, t, gamma, m, Equation::Main);
            }
        }
    }
    finish(out)
}

/// MAIN with `γ ≡ gamma_parity (mod 2)`.
pub fn solve_main(c: u64, q: u64, gamma_parity: Parity, m_max: u32, gamma_max: u32) -> Vec<ObstructionSolution> {
    solve_main_filtered(c, q, GammaFilter::Only(gamma_parity), m_max, gamma_max)
}

/// RN over the full box. Solutions with `u = Ct` are the solutions of
/// `u² + C = Cv` with `v = 2^m q^γ`.
pub fn solve_rn(c: u64, q: u64, m_max: u32, gamma_max: u32) -> Vec<ObstructionSolution> {
    let g = Grid::new(c, q, m_max, gamma_max);
    let mut out = Vec::new();
    for m in 0..=m_max {
        for gamma in 0..=gamma_max {
            let r = g.sub(
                crate::intmath::mul_mod(g.r2[m as usize], g.rq[gamma as usize], g.modulus),
                1,
            );
            let n = || &g.p2[m as usize] * &g.pq[gamma as usize] - 1u32;
            if let Some(t) = g.root(r, n) {
                g.push(&mut out, t, gamma, m, Equation::Rn);
            }
        }
    }
    finish(out)
}

/// QPOW solutions split by whether `m` is even and `γ` odd.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QpowSearch {
    pub conforming: Vec<ObstructionSolution>,
    /// Kept for diagnostics; the parity constraint on `γ` is derived from
    /// `C ≡ 7 (mod 8)`, which callers check separately.
    pub off_parity: Vec<ObstructionSolution>,
}

pub fn solve_qpow(c: u64, q: u64, m_max: u32, gamma_max: u32) -> QpowSearch {
    let g = Grid::new(c, q, m_max, gamma_max);
    let mut all = Vec::new();
    for gamma in 0..=gamma_max {
        for m in 0..=m_max {
            let (p2, pq) = (&g.p2[m as usize], &g.pq[gamma as usize]);
            if p2 > pq {
                break;
            }
            let r = g.sub(g.rq[gamma as usize], g.r2[m as usize]);
            if let Some(t) = g.root(r, || pq - p2) {
                g.push(&mut all, t, gamma, m, Equation::Qpow);
            }
        }
    }
    let (conforming, off_parity) = finish(all).into_iter().partition(|s| s.m % 2 == 0 && s.gamma % 2 == 1);
    QpowSearch { conforming, off_parity }
}

/// The two families of Mordell curves `V² = U³ + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `E_{b,d}`: `k = −C³2^{2b}q^d`, carrying MAIN solutions.
    E,
    /// `F_{b′,d′}`: `k = −C³2^{b′}q^{2d′}`, carrying QPOW solutions.
    F,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" | "e" => Ok(Family::E),
            "F" | "f" => Ok(Family::F),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MordellCurve {
    pub family: Family,
    pub b_index: u32,
    pub d_index: u32,
    #[serde(serialize_with = "ser_display")]
    pub coefficient: BigInt,
    /// Denominators of points of interest are powers of this prime.
    pub allowed_prime: u64,
}

impl MordellCurve {
    pub fn new(c: u64, q: u64, family: Family, b: u32, d: u32) -> Result<Self> {
        let c3 = num_traits::pow(BigInt::from(c), 3);
        let (coefficient, allowed_prime) = match family {
            Family::E if b <= 2 && d <= 5 => (-(c3 * big_pow(2, 2 * b) * big_pow(q, d)), q),
            Family::F if b <= 5 && d <= 2 => (-(c3 * big_pow(2, b) * big_pow(q, 2 * d)), 2),
            _ => {
                return Err(Error::Hypothesis(format!(
                    "index ({b}, {d}) outside the {family:?} family"
                )))
            }
        };
        Ok(MordellCurve {
            family,
            b_index: b,
            d_index: d,
            coefficient,
            allowed_prime,
        })
    }

    pub fn contains(&self, pt: &SPoint) -> bool {
        let k = BigRational::from_integer(self.coefficient.clone());
        &pt.v * &pt.v == &pt.u * &pt.u * &pt.u + k
    }
}

impl fmt::Display for MordellCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?}_{{{},{}}}: V^2 = U^3 - {}",
            self.family, self.b_index, self.d_index, -&self.coefficient
        )
    }
}

/// All 18 curves of a family, in index order.
pub fn mordell_family(c: u64, q: u64, family: Family) -> Vec<MordellCurve> {
    let (bs, ds) = match family {
        Family::E => (0..=2, 0..=5),
        Family::F => (0..=5, 0..=2),
    };
    bs.flat_map(|b| ds.clone().map(move |d| (b, d)))
        .map(|(b, d)| MordellCurve::new(c, q, family, b, d).expect("index in range"))
        .collect()
}

/// A rational point `(U, V)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SPoint {
    pub u: BigRational,
    pub v: BigRational,
}

impl SPoint {
    pub fn new(u: BigRational, v: BigRational) -> Self {
        SPoint { u, v }
    }

    pub fn integral(u: impl Into<BigInt>, v: impl Into<BigInt>) -> Self {
        SPoint {
            u: BigRational::from_integer(u.into()),
            v: BigRational::from_integer(v.into()),
        }
    }

    pub fn u_num(&self) -> &BigInt {
        self.u.numer()
    }

    pub fn u_den(&self) -> &BigInt {
        self.u.denom()
    }

    pub fn v_num(&self) -> &BigInt {
        self.v.numer()
    }

    pub fn v_den(&self) -> &BigInt {
        self.v.denom()
    }
}

impl fmt::Display for SPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

impl Serialize for SPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SPoint", 2)?;
        st.serialize_field("u", &self.u.to_string())?;
        st.serialize_field("v", &self.v.to_string())?;
        st.end()
    }
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Sends a MAIN solution to `E_{b,d}` and a QPOW solution to `F_{b′,d′}`.
///
/// MAIN: `m = 3a + b`, `γ = 6c + d`, point `(C·2^{a+b}/q^{2c}, C²2^b t/q^{3c})`.
/// QPOW: `m = 6a′ + b′`, `γ = 3c′ + d′`, point
/// `(C·q^{c′+d′}/2^{2a′}, C²q^{d′}t/2^{3a′})`.
pub fn solution_to_point(sol: &ObstructionSolution, c: u64, q: u64) -> Result<(MordellCurve, SPoint)> {
    let cc = BigInt::from(c);
    let (curve, pt) = match sol.equation {
        Equation::Main => {
            let (a, b) = (sol.m / 3, sol.m % 3);
            let (cq, d) = (sol.gamma / 6, sol.gamma % 6);
            let curve = MordellCurve::new(c, q, Family::E, b, d)?;
            let u = ratio(&cc * big_pow(2, a + b), big_pow(q, 2 * cq));
            let v = ratio(&cc * &cc * big_pow(2, b) * &sol.t, big_pow(q, 3 * cq));
            (curve, SPoint::new(u, v))
        }
        Equation::Qpow => {
            let (a, b) = (sol.m / 6, sol.m % 6);
            let (cq, d) = (sol.gamma / 3, sol.gamma % 3);
            let curve = MordellCurve::new(c, q, Family::F, b, d)?;
            let u = ratio(&cc * big_pow(q, cq + d), big_pow(2, 2 * a));
            let v = ratio(&cc * &cc * big_pow(q, d) * &sol.t, big_pow(2, 3 * a));
            (curve, SPoint::new(u, v))
        }
        Equation::Rn => return Err(Error::Hypothesis("RN solutions have no Mordell-curve image".into())),
    };
    if !curve.contains(&pt) {
        return Err(Error::Invariant(format!("{pt} is not on {curve}")));
    }
    Ok((curve, pt))
}

/// `n = base^e` exactly.
fn exact_log(n: &BigInt, base: u64) -> Option<u32> {
    if !n.is_positive() {
        return None;
    }
    let mut e = 0;
    let mut r = n.clone();
    let b = BigInt::from(base);
    while !r.is_one() {
        let (quot, rem) = r.div_rem(&b);
        if !rem.is_zero() {
            return None;
        }
        r = quot;
        e += 1;
    }
    Some(e)
}

/// Inverse of [`solution_to_point`]; `None` when the point is not of the
/// prescribed shape or `t = 0`.
pub fn point_to_solution(pt: &SPoint, curve: &MordellCurve, c: u64, q: u64) -> Option<ObstructionSolution> {
    if !curve.contains(pt) || pt.v.is_zero() {
        return None;
    }
    let cc = BigInt::from(c);
    let (b, d) = (curve.b_index, curve.d_index);
    let (num_prime, den_prime) = match curve.family {
        Family::E => (2, q),
        Family::F => (q, 2),
    };
    let (quot, rem) = pt.u_num().div_rem(&cc);
    if !rem.is_zero() {
        return None;
    }
    let num_exp = exact_log(&quot, num_prime)?;
    let den_exp = exact_log(pt.u_den(), den_prime)?;
    if den_exp % 2 != 0
        || num_exp
            < match curve.family {
                Family::E => b,
                Family::F => d,
            }
    {
        return None;
    }
    let e = den_exp / 2;
    let (scale, shift) = match curve.family {
        Family::E => (&cc * &cc * big_pow(2, b), big_pow(q, 3 * e)),
        Family::F => (&cc * &cc * big_pow(q, d), big_pow(2, 3 * e)),
    };
    let t_rat = &pt.v * BigRational::from_integer(shift) / BigRational::from_integer(scale);
    if !t_rat.is_integer() {
        return None;
    }
    let t = t_rat.to_integer().abs();
    let (gamma, m, eq) = match curve.family {
        Family::E => (6 * e + d, 3 * (num_exp - b) + b, Equation::Main),
        Family::F => (3 * (num_exp - d) + d, 6 * e + b, Equation::Qpow),
    };
    ObstructionSolution::new(c, q, t, gamma, m, eq).ok()
}

/// Points found by [`s_point_search`]. Completeness holds only inside the
/// window described by the bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SPointSearch {
    pub points: Vec<SPoint>,
    pub height_bound: u64,
    pub max_den_exponent: u32,
    pub bounded: bool,
}

/// Least `e` with `ℓ^e ≥ h`.
fn ceil_log(h: u64, ell: u64) -> u32 {
    let mut e = 0;
    let mut acc: u128 = 1;
    while acc < h as u128 {
        acc *= ell as u128;
        e += 1;
    }
    e
}

/// Every point with `U = n/ℓ^{2e}`, `|n| ≤ height_bound`, `ℓ ∤ n` when
/// `e > 0`, and `e ≤ ⌈log_ℓ height_bound⌉`. `V` then has denominator
/// `ℓ^{3e}` and is found by an exact square root of `n³ + kℓ^{6e}`.
pub fn s_point_search(curve: &MordellCurve, height_bound: u64) -> SPointSearch {
    let ell = curve.allowed_prime;
    let max_e = ceil_log(height_bound.max(1), ell);
    let h = height_bound as i64;
    let mut points = Vec::new();
    for e in 0..=max_e {
        let den2 = big_pow(ell, 2 * e);
        let den3 = big_pow(ell, 3 * e);
        let shift = &curve.coefficient * big_pow(ell, 6 * e);
        for n in -h..=h {
            if e > 0 && (n.rem_euclid(ell as i64) == 0) {
                continue;
            }
            let nb = BigInt::from(n);
            let rhs = &nb * &nb * &nb + &shift;
            if let Some(w) = is_perfect_square(&rhs) {
                let u = ratio(nb.clone(), den2.clone());
                for v in [-w.clone(), w.clone()] {
                    points.push(SPoint::new(u.clone(), ratio(v, den3.clone())));
                    if w.is_zero() {
                        break;
                    }
                }
            }
        }
    }
    points.sort();
    SPointSearch {
        points,
        height_bound,
        max_den_exponent: max_e,
        bounded: true,
    }
}

/// Solutions read off a curve table, with the coverage of each conductor
/// consulted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LookupResult {
    pub solutions: Vec<ObstructionSolution>,
    pub coverage: Vec<(u64, Coverage)>,
}

impl LookupResult {
    /// False when some conductor lies beyond the table's declared coverage.
    pub fn complete(&self) -> bool {
        self.coverage.iter().all(|(_, c)| *c == Coverage::Complete)
    }
}

/// Decodes `Δ = −2^{2m−12}C³q^γ` and recovers `t` from `Ct² = 2^m − q^γ`.
fn decode_discriminant(disc: &BigInt, c: u64, q: u64, parity: Parity) -> Option<ObstructionSolution> {
    if !disc.is_negative() {
        return None;
    }
    let (rest, rem) = (-disc).div_rem(&num_traits::pow(BigInt::from(c), 3));
    if !rem.is_zero() {
        return None;
    }
    let mut rest = rest;
    let count = |n: &mut BigInt, p: u64| {
        let mut e = 0u32;
        let pb = BigInt::from(p);
        loop {
            let (quot, r) = n.div_rem(&pb);
            if !r.is_zero() {
                return e;
            }
            *n = quot;
            e += 1;
        }
    };
    let e2 = count(&mut rest, 2);
    let gamma = count(&mut rest, q);
    if !rest.is_one() || e2 % 2 != 0 || !parity.matches(gamma as u64) {
        return None;
    }
    let m = (e2 + 12) / 2;
    let n = big_pow(2, m) - big_pow(q, gamma);
    let (quot, r) = n.div_rem(&BigInt::from(c));
    if !n.is_positive() || !r.is_zero() {
        return None;
    }
    let t = is_perfect_square(&quot)?;
    ObstructionSolution::new(c, q, t, gamma, m, Equation::Main).ok()
}

/// MAIN solutions with `m ≥ 6` recovered from the minimal discriminants of
/// the curves of conductor `2C²` and `2C²q`.
pub fn lookup_solve(c: u64, q: u64, parity: Parity, db: &CurveDb) -> LookupResult {
    let n0 = 2 * c * c;
    let mut solutions = Vec::new();
    let mut coverage = Vec::new();
    for n in [n0, n0 * q] {
        let (records, cov) = db.by_conductor(n);
        coverage.push((n, cov));
        solutions.extend(
            records
                .into_iter()
                .filter_map(|r| decode_discriminant(&r.min_disc, c, q, parity)),
        );
    }
    solutions = finish(solutions);
    solutions.dedup();
    LookupResult { solutions, coverage }
}

/// `t ≤ 2^{m/2} + 1`, as a `u64` when it fits.
pub fn t_bound(m: u32) -> Option<u64> {
    (BigInt::one() << (m / 2 + 1)).to_u64()
}
