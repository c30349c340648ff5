//! The Frey–Hellegouarch curve of a (pseudo-)solution of
//! `Cx² + qᵏy²ᵖ = zᵖ` with `z` even.
//!
//! Genuine solutions are not expected to exist, so in practice instances come
//! from obstruction solutions `Ct² + q^γ = 2^m` read as `x = t`, `y = 1`,
//! `z = 2`, `p = m` ([`FreyInstance::adapted`]). [`FreyInstance::pseudo`]
//! accepts any `(C, x, zᵖ)` so the structural checks can be exercised on
//! inputs that are not solutions at all.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ellcurve::{general_invariants, CurveGeneral, InvariantTriple};
use crate::error::{Error, Result};
use crate::intmath::{big_pow, is_perfect_square, is_prime_u64, radical_excluding, squarefree_check};
use crate::Parity;

/// Where the instance came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreyMode {
    /// `Cx² + qᵏy²ᵖ = zᵖ` with `p ≥ 7` prime.
    Genuine { z: BigInt, p: u32 },
    /// `Ct² + q^γ = 2^m`, i.e. `y = 1`, `z = 2`, exponent `m`.
    Adapted { m: u32 },
    /// Arbitrary `(C, x, zᵖ)`; `qᵏy²ᵖ` is whatever `zᵖ − Cx²` is.
    Pseudo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyInstance {
    c: u64,
    q: u64,
    k: u32,
    x: BigInt,
    y: BigInt,
    zp: BigInt,
    mode: FreyMode,
    sign_flipped: bool,
}

fn check_c(c: u64) -> Result<()> {
    if c == 0 || !squarefree_check(c) {
        return Err(Error::NotSquarefree(c));
    }
    Ok(())
}

fn check_q(q: u64) -> Result<()> {
    if q == 2 || !is_prime_u64(q) {
        return Err(Error::NotOddPrime(q.to_string()));
    }
    Ok(())
}

/// Flips `x` when `Cx ≡ 3 (mod 4)`; fails for even `Cx`.
fn normalize(c: u64, x: BigInt) -> Result<(BigInt, bool)> {
    let cx = BigInt::from(c) * &x;
    match cx.mod_floor(&BigInt::from(4)).to_u8() {
        Some(1) => Ok((x, false)),
        Some(3) => Ok((-x, true)),
        _ => Err(Error::Unnormalizable(cx.to_string())),
    }
}

impl FreyInstance {
    /// A solution of `Cx² + qᵏy²ᵖ = zᵖ`, `gcd(Cx, qy, z) = 1`, `2 | z`.
    pub fn genuine(c: u64, q: u64, k: u32, x: BigInt, y: BigInt, z: BigInt, p: u32) -> Result<Self> {
        check_c(c)?;
        check_q(q)?;
        if p < 7 || !is_prime_u64(p as u64) {
            return Err(Error::InvalidInstance(format!("exponent {p} is not a prime >= 7")));
        }
        if y.is_zero() {
            return Err(Error::InvalidInstance("y = 0 is not a nonzero solution".into()));
        }
        if z.is_odd() {
            return Err(Error::InvalidInstance("z must be even".into()));
        }
        let cb = BigInt::from(c);
        let zp = num_traits::pow(z.clone(), p as usize);
        let lhs = &cb * &x * &x + big_pow(q, k) * num_traits::pow(y.clone(), 2 * p as usize);
        if lhs != zp {
            return Err(Error::InvalidInstance(format!(
                "C x^2 + q^k y^(2p) = {lhs} differs from z^p = {zp}"
            )));
        }
        let g = (&cb * &x).gcd(&(BigInt::from(q) * &y)).gcd(&z);
        if !g.is_one() {
            return Err(Error::InvalidInstance(format!("gcd(Cx, qy, z) = {g}")));
        }
        let (x, sign_flipped) = normalize(c, x)?;
        Ok(FreyInstance {
            c,
            q,
            k,
            x,
            y,
            zp,
            mode: FreyMode::Genuine { z, p },
            sign_flipped,
        })
    }

    /// The instance attached to a solution of `Ct² + q^γ = 2^m`.
    pub fn adapted(c: u64, q: u64, t: BigInt, gamma: u32, m: u32) -> Result<Self> {
        check_c(c)?;
        check_q(q)?;
        let zp = big_pow(2, m);
        let q_gamma = big_pow(q, gamma);
        if BigInt::from(c) * &t * &t + &q_gamma != zp {
            return Err(Error::InvalidInstance(format!("{c}*{t}^2 + {q}^{gamma} != 2^{m}")));
        }
        let (x, sign_flipped) = normalize(c, t)?;
        Ok(FreyInstance {
            c,
            q,
            k: gamma,
            x,
            y: BigInt::one(),
            zp,
            mode: FreyMode::Adapted { m },
            sign_flipped,
        })
    }

    /// Structural inspection only; `zᵖ − Cx²` plays the role of `qᵏy²ᵖ`.
    pub fn pseudo(c: u64, x: BigInt, zp: BigInt) -> Result<Self> {
        check_c(c)?;
        if !zp.is_positive() {
            return Err(Error::InvalidInstance("z^p must be positive".into()));
        }
        let (x, sign_flipped) = normalize(c, x)?;
        Ok(FreyInstance {
            c,
            q: 0,
            k: 0,
            x,
            y: BigInt::zero(),
            zp,
            mode: FreyMode::Pseudo,
            sign_flipped,
        })
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.k as u64)
    }

    /// `x` after sign normalization.
    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn zp(&self) -> &BigInt {
        &self.zp
    }

    pub fn mode(&self) -> &FreyMode {
        &self.mode
    }

    /// Whether `x` was negated to reach `Cx ≡ 1 (mod 4)`.
    pub fn sign_flipped(&self) -> bool {
        self.sign_flipped
    }

    /// `z`, when known.
    pub fn z(&self) -> Option<BigInt> {
        match &self.mode {
            FreyMode::Genuine { z, .. } => Some(z.clone()),
            FreyMode::Adapted { .. } => Some(BigInt::from(2)),
            FreyMode::Pseudo => None,
        }
    }

    /// `qᵏy²ᵖ` computed from its parts (not from `zᵖ − Cx²`).
    pub fn q_part(&self) -> BigInt {
        match &self.mode {
            FreyMode::Genuine { p, .. } => big_pow(self.q, self.k) * num_traits::pow(self.y.clone(), 2 * *p as usize),
            FreyMode::Adapted { .. } => big_pow(self.q, self.k),
            FreyMode::Pseudo => &self.zp - BigInt::from(self.c) * &self.x * &self.x,
        }
    }
}

/// Frey curve with its invariants cached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyCurve {
    pub curve: CurveGeneral,
    pub invariants: InvariantTriple,
}

/// `Y² + XY = X³ + ((Cx − 1)/4)X² + (C·zᵖ/64)X`.
pub fn build_frey(inst: &FreyInstance) -> Result<FreyCurve> {
    let c = BigInt::from(inst.c);
    let (a2, r2) = (&c * inst.x() - 1u32).div_rem(&BigInt::from(4));
    if !r2.is_zero() {
        return Err(Error::Unnormalizable((&c * inst.x()).to_string()));
    }
    let (a4, r4) = (&c * inst.zp()).div_rem(&BigInt::from(64));
    if !r4.is_zero() {
        return Err(Error::InvalidInstance(format!(
            "64 does not divide C*z^p = {}",
            &c * inst.zp()
        )));
    }
    let curve = CurveGeneral::new(1, a2, 0, a4, 0);
    let invariants = general_invariants(&curve)?;
    Ok(FreyCurve { curve, invariants })
}

/// Minimal discriminant `−2⁻¹²C³qᵏ(yz)²ᵖ`; for adapted instances
/// `−2^(2m−12)C³q^γ`.
pub fn frey_discriminant(inst: &FreyInstance) -> Result<BigInt> {
    let c3 = num_traits::pow(BigInt::from(inst.c), 3);
    match &inst.mode {
        FreyMode::Adapted { m } => {
            if *m < 6 {
                return Err(Error::InvalidInstance(format!("2^(2m-12) is not integral for m = {m}")));
            }
            Ok(-(c3 * big_pow(inst.q, inst.k) * big_pow(2, 2 * m - 12)))
        }
        FreyMode::Genuine { z, p } => {
            let yz = &inst.y * z;
            let full = c3 * big_pow(inst.q, inst.k) * num_traits::pow(yz, 2 * *p as usize);
            let (d, r) = full.div_rem(&BigInt::from(4096));
            if !r.is_zero() {
                return Err(Error::InvalidInstance("discriminant is not integral".into()));
            }
            Ok(-d)
        }
        FreyMode::Pseudo => {
            let full = c3 * inst.q_part() * &inst.zp * &inst.zp;
            let (d, r) = full.div_rem(&BigInt::from(4096));
            if !r.is_zero() {
                return Err(Error::InvalidInstance("discriminant is not integral".into()));
            }
            Ok(-d)
        }
    }
}

/// `2C²q·Rad_{2,q}(yz)` when `k ≠ 0`, `2C²·Rad_2(yz)` when `k = 0`.
pub fn conductor_from_parts(c: u64, q: u64, k: u32, yz: &BigInt) -> Result<BigInt> {
    if yz.is_zero() {
        return Err(Error::Zero("yz in the conductor"));
    }
    let two_c2 = BigInt::from(2) * BigInt::from(c) * BigInt::from(c);
    Ok(if k != 0 {
        two_c2 * BigInt::from(q) * radical_excluding(yz, &[2, q])?
    } else {
        two_c2 * radical_excluding(yz, &[2])?
    })
}

pub fn frey_conductor(inst: &FreyInstance) -> Result<BigInt> {
    let z = inst
        .z()
        .ok_or_else(|| Error::InvalidInstance("conductor needs y and z".into()))?;
    conductor_from_parts(inst.c, inst.q, inst.k, &(&inst.y * z))
}

/// Level after level lowering: `2C²q` if `k ∉ {0, p}`, else `2C²`.
pub fn lowered_level(c: u64, q: u64, k: u32, p: u32) -> BigInt {
    let two_c2 = BigInt::from(2) * BigInt::from(c) * BigInt::from(c);
    if k == 0 || k == p {
        two_c2
    } else {
        two_c2 * BigInt::from(q)
    }
}

/// Outcome of the rational 2-torsion checks on the Frey curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreyTwoStructure {
    /// `C²x² − C·zᵖ`.
    pub aux: BigInt,
    /// `aux = −C·qᵏy²ᵖ` with the right side computed from its parts.
    pub aux_identity: bool,
    /// `aux < 0`: the 2-division cubic has the single rational root `(0,0)`.
    pub no_full_two_torsion: bool,
    /// `C·zᵖ` is not a square: no rational point of order four.
    pub no_order_four: bool,
    pub notes: Vec<String>,
}

impl FreyTwoStructure {
    pub fn passes(&self) -> bool {
        self.aux_identity && self.no_full_two_torsion && self.no_order_four
    }
}

pub fn frey_two_structure_report(inst: &FreyInstance) -> FreyTwoStructure {
    let c = BigInt::from(inst.c);
    let aux = &c * &c * inst.x() * inst.x() - &c * inst.zp();
    let aux_identity = aux == -(&c * inst.q_part());
    let no_full_two_torsion = aux.is_negative();
    let czp = &c * inst.zp();
    let no_order_four = is_perfect_square(&czp).is_none();
    let mut notes = Vec::new();
    if !aux_identity {
        notes.push(format!(
            "C^2 x^2 - C z^p = {aux} but -C q^k y^(2p) = {}",
            -(&c * inst.q_part())
        ));
    }
    if !no_full_two_torsion {
        notes.push(format!(
            "C^2 x^2 - C z^p = {aux} >= 0: extra rational 2-torsion possible"
        ));
    }
    if !no_order_four {
        let why = match inst.mode {
            FreyMode::Genuine { .. } => "impossible for a genuine solution (C squarefree, gcd(C, z) = 1, p odd)",
            FreyMode::Adapted { .. } => "possible for adapted instances because m may be even",
            FreyMode::Pseudo => "input is not a genuine solution",
        };
        notes.push(format!("C z^p = {czp} is a perfect square: {why}"));
    }
    FreyTwoStructure {
        aux,
        aux_identity,
        no_full_two_torsion,
        no_order_four,
        notes,
    }
}
