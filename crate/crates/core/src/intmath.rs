//! Exact integer utilities: valuations, radicals, Legendre symbols, square
//! testing, primality and prime generation.
//!
//! Everything here is a pure function of its arguments. Small moduli (the
//! primes `ℓ` used by the sieves) travel as `u64`; anything that can grow
//! with the exponents under search is a [`BigInt`].

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `n = ℓ^exponent · cofactor` with `ℓ ∤ cofactor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Valuation {
    pub exponent: u32,
    pub cofactor: BigInt,
}

/// Strictly increasing list of primes together with the bound that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSet {
    primes: Vec<u64>,
    bound: u64,
}

impl PrimeSet {
    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.primes.iter().copied()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.binary_search(&p).is_ok()
    }
}

impl IntoIterator for PrimeSet {
    type Item = u64;
    type IntoIter = std::vec::IntoIter<u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.primes.into_iter()
    }
}

/// `ℓ`-adic valuation of a nonzero integer. The sign stays on the cofactor.
pub fn valuation(n: &BigInt, ell: u64) -> Result<Valuation> {
    if n.is_zero() {
        return Err(Error::ValuationAtZero);
    }
    if !is_prime_u64(ell) {
        return Err(Error::NotPrime(ell.to_string()));
    }
    let ell_big = BigInt::from(ell);
    let mut exponent = 0;
    let mut cofactor = n.clone();
    loop {
        let (q, r) = cofactor.div_rem(&ell_big);
        if !r.is_zero() {
            break;
        }
        cofactor = q;
        exponent += 1;
    }
    Ok(Valuation { exponent, cofactor })
}

/// Exponent of `ℓ` in a nonzero integer; `None` at zero.
pub fn nu(n: &BigInt, ell: u64) -> Option<u32> {
    valuation(n, ell).ok().map(|v| v.exponent)
}

/// Product of the distinct primes dividing `n`, skipping those in `excluded`.
pub fn radical_excluding(n: &BigInt, excluded: &[u64]) -> Result<BigInt> {
    if n.is_zero() {
        return Err(Error::Zero("radical of zero"));
    }
    let mut rad = BigInt::one();
    for (p, _) in factor(n)? {
        let skip = p.to_u64().is_some_and(|p| excluded.contains(&p));
        if !skip {
            rad *= p;
        }
    }
    Ok(rad)
}

/// Legendre symbol `(a/ℓ)` for an odd prime `ℓ`.
pub fn legendre(a: &BigInt, ell: u64) -> Result<i8> {
    if ell == 2 || !is_prime_u64(ell) {
        return Err(Error::NotOddPrime(ell.to_string()));
    }
    Ok(legendre_residue(residue(a, ell), ell))
}

/// Legendre symbol of a residue already reduced into `[0, ℓ)`. The caller
/// guarantees `ℓ` is an odd prime.
pub fn legendre_residue(a: u64, ell: u64) -> i8 {
    let a = a % ell;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (ell - 1) / 2, ell) {
        1 => 1,
        _ => -1,
    }
}

/// `a mod ℓ` in `[0, ℓ)` for a signed big integer.
pub fn residue(a: &BigInt, ell: u64) -> u64 {
    a.mod_floor(&BigInt::from(ell))
        .to_u64()
        .expect("residue is below the modulus")
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Square root of `a` modulo an odd prime (Tonelli–Shanks). `None` for
/// non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if legendre_residue(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while legendre_residue(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Modulus of the cheap pre-filter: 64 · 63 · 65 · 11.
pub const SQUARE_FILTER_MODULUS: u64 = 64 * 63 * 65 * 11;

fn residue_table(m: u64) -> Vec<bool> {
    let mut table = vec![false; m as usize];
    for x in 0..m {
        table[((x * x) % m) as usize] = true;
    }
    table
}

struct SquareFilter {
    m64: Vec<bool>,
    m63: Vec<bool>,
    m65: Vec<bool>,
    m11: Vec<bool>,
}

fn square_filter() -> &'static SquareFilter {
    static FILTER: std::sync::OnceLock<SquareFilter> = std::sync::OnceLock::new();
    FILTER.get_or_init(|| SquareFilter {
        m64: residue_table(64),
        m63: residue_table(63),
        m65: residue_table(65),
        m11: residue_table(11),
    })
}

/// False only when `r` (a residue mod [`SQUARE_FILTER_MODULUS`]) proves the
/// number it came from is not a square.
pub fn may_be_square_residue(r: u64) -> bool {
    let f = square_filter();
    f.m64[(r % 64) as usize] && f.m63[(r % 63) as usize] && f.m65[(r % 65) as usize] && f.m11[(r % 11) as usize]
}

/// Exact square root when `n` is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    match n.sign() {
        Sign::Minus => return None,
        Sign::NoSign => return Some(BigInt::zero()),
        Sign::Plus => {}
    }
    if !may_be_square_residue(residue(n, SQUARE_FILTER_MODULUS)) {
        return None;
    }
    let root = n.sqrt();
    (&root * &root == *n).then_some(root)
}

/// `u64` square root for small values; used by the sieves.
pub fn isqrt_u64(n: u64) -> u64 {
    n.sqrt()
}

/// Primes `≤ bound` by a plain sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> PrimeSet {
    if bound < 2 {
        return PrimeSet {
            primes: Vec::new(),
            bound,
        };
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    PrimeSet { primes, bound }
}

/// True iff no prime square divides `n`.
pub fn squarefree_check(n: u64) -> bool {
    prime_factors_u64(n).iter().all(|&(_, e)| e == 1)
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for the whole `u64` range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary integers: exact below 2^64, Miller–Rabin with a
/// fixed base set above it.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    const EXTRA_BASES: [u64; 8] = [41, 43, 47, 53, 59, 61, 67, 71];
    'witness: for &a in MR_BASES.iter().chain(EXTRA_BASES.iter()) {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of a machine integer by trial division.
pub fn prime_factors_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Distinct primes dividing `n`.
pub fn prime_divisors_u64(n: u64) -> Vec<u64> {
    prime_factors_u64(n).into_iter().map(|(p, _)| p).collect()
}

const TRIAL_LIMIT: u64 = 1 << 16;

/// Factorization of `|n|` for `n ≠ 0`, ascending by prime. Trial division
/// handles the small part; Pollard–Brent splits whatever remains.
pub fn factor(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::Zero("factorization of zero"));
    }
    let mut rest = n.abs();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes_up_to(TRIAL_LIMIT).iter() {
        if rest.is_one() {
            break;
        }
        let pb = BigInt::from(p);
        if &pb * &pb > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !rest.is_one() {
        let mut large = Vec::new();
        split_large(rest, &mut large)?;
        large.sort();
        for p in large {
            match out.last_mut() {
                Some((last, e)) if *last == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    Ok(out)
}

fn split_large(n: BigInt, out: &mut Vec<BigInt>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if is_probable_prime(&n) {
        out.push(n);
        return Ok(());
    }
    if let Some(r) = is_perfect_square(&n) {
        split_large(r.clone(), out)?;
        return split_large(r, out);
    }
    let d = pollard_brent(&n).ok_or_else(|| Error::Factorization(n.to_string()))?;
    let other = &n / &d;
    split_large(d, out)?;
    split_large(other, out)
}

fn pollard_brent(n: &BigInt) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let one = BigInt::one();
    for c in 1u64..64 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
            if r > 1 << 26 {
                break;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g > one && &g != n {
            return Some(g);
        }
    }
    None
}

/// True iff `x` and `y` differ by a nonzero rational square factor, i.e.
/// `x·y` is a nonzero perfect square.
pub fn same_square_class(x: &BigInt, y: &BigInt) -> bool {
    if x.is_zero() || y.is_zero() {
        return false;
    }
    is_perfect_square(&(x * y)).is_some()
}

/// `base^exp` as a big integer.
pub fn big_pow(base: u64, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}
