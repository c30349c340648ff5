//! Brute-force oracles shared by the integration suites. Nothing here calls
//! into the library's arithmetic; everything runs on machine integers.

#![allow(dead_code)]

pub fn isqrt_u128(n: u128) -> u128 {
    let (mut lo, mut hi) = (0u128, 1u128 << 64);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        match mid.checked_mul(mid) {
            Some(sq) if sq <= n => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}

pub fn squarefree_upto(n: u64) -> Vec<u64> {
    (1..=n)
        .filter(|&c| (2..=c).all(|d| d * d > c || c % (d * d) != 0))
        .collect()
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `e` with `n = base^e`, `e ≤ max`.
fn exact_power(mut n: u128, base: u128, max: u32) -> Option<u32> {
    let mut e = 0;
    while n % base == 0 && n > 1 {
        n /= base;
        e += 1;
    }
    (n == 1 && e <= max).then_some(e)
}

/// Triples `(t, γ, m)` sorted by `(m, γ, t)`.
pub type Triples = Vec<(u128, u32, u32)>;

fn sorted(mut v: Triples) -> Triples {
    v.sort_by_key(|&(t, g, m)| (m, g, t));
    v
}

/// `Ct² + q^γ = 2^m`: loop over `m` and every `t` with `Ct² < 2^m`, read `γ` off.
pub fn oracle_main(c: u64, q: u64, m_max: u32, g_max: u32) -> Triples {
    let (c, q) = (c as u128, q as u128);
    let mut out = Vec::new();
    for m in 0..=m_max {
        let p = 1u128 << m;
        for t in 0u128.. {
            let ct2 = c * t * t;
            if ct2 >= p {
                break;
            }
            if let Some(g) = exact_power(p - ct2, q, g_max) {
                out.push((t, g, m));
            }
        }
    }
    sorted(out)
}

/// `Ct² + 2^m = q^γ`: loop over `γ` and `t`, read `m` off.
pub fn oracle_qpow(c: u64, q: u64, m_max: u32, g_max: u32) -> Triples {
    let (c, q) = (c as u128, q as u128);
    let mut out = Vec::new();
    for g in 0..=g_max {
        let p = q.pow(g);
        for t in 0.. {
            let ct2 = c * t * t;
            if ct2 >= p {
                break;
            }
            if let Some(m) = exact_power(p - ct2, 2, m_max) {
                out.push((t, g, m));
            }
        }
    }
    sorted(out)
}

/// `Ct² + 1 = 2^m q^γ`. Here `t` can reach `√(2^m q^γ)`, so each grid point
/// is solved by a bisection square root; a direct triple loop over small `t`
/// cross-checks the low end.
pub fn oracle_rn(c: u64, q: u64, m_max: u32, g_max: u32) -> Triples {
    let (c, q) = (c as u128, q as u128);
    let mut out = Vec::new();
    for m in 0..=m_max {
        for g in 0..=g_max {
            let v = (1u128 << m) * q.pow(g) - 1;
            if v % c == 0 {
                let t = isqrt_u128(v / c);
                if t * t == v / c {
                    out.push((t, g, m));
                }
            }
        }
    }
    for t in 0..=1u128 << 12 {
        let v = c * t * t + 1;
        let mut rest = v;
        let mut m = 0;
        while rest % 2 == 0 {
            rest /= 2;
            m += 1;
        }
        if m <= m_max {
            if let Some(g) = exact_power(rest, q, g_max) {
                assert!(out.contains(&(t, g, m)), "grid root missed t = {t}");
            }
        }
    }
    sorted(out)
}

/// Points of `y² = x³ + ax² + bx` over `F_ℓ`, `None` standing for infinity.
pub type Pt = Option<(i64, i64)>;

pub fn points(a: i64, b: i64, ell: i64) -> Vec<Pt> {
    let mut pts = vec![None];
    for x in 0..ell {
        let rhs = (x * x % ell * x + a * x % ell * x + b * x).rem_euclid(ell);
        for y in 0..ell {
            if y * y % ell == rhs {
                pts.push(Some((x, y)));
            }
        }
    }
    pts
}

fn inv(x: i64, ell: i64) -> i64 {
    let mut r = 1;
    let (mut base, mut e) = (x.rem_euclid(ell), ell - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % ell;
        }
        base = base * base % ell;
        e >>= 1;
    }
    r
}

/// Group law on `y² = x³ + ax² + bx`.
pub fn add_ab(p: Pt, r: Pt, a: i64, b: i64, ell: i64) -> Pt {
    let (Some((x1, y1)), Some((x2, y2))) = (p, r) else {
        return p.or(r);
    };
    if x1 == x2 && (y1 + y2) % ell == 0 {
        return None;
    }
    let lam = if x1 == x2 {
        (3 * x1 * x1 + 2 * a * x1 + b).rem_euclid(ell) * inv(2 * y1, ell) % ell
    } else {
        (y2 - y1).rem_euclid(ell) * inv(x2 - x1, ell) % ell
    };
    let x3 = (lam * lam - a - x1 - x2).rem_euclid(ell);
    let y3 = (lam * (x1 - x3) - y1).rem_euclid(ell);
    Some((x3, y3))
}

/// Roots of `x(x² + ax + b)` in `F_ℓ`.
pub fn cubic_roots(a: i64, b: i64, ell: i64) -> usize {
    (0..ell)
        .filter(|&x| (x * x % ell * x + a * x % ell * x + b * x).rem_euclid(ell) == 0)
        .count()
}

/// A subgroup of order four: three points of order two, or a point of
/// order four.
pub fn has_order4_by_inspection(a: i64, b: i64, ell: i64) -> bool {
    let pts = points(a, b, ell);
    let order2 = pts.iter().filter(|p| matches!(p, Some((_, 0)))).count();
    if order2 == 3 {
        return true;
    }
    pts.iter().any(|&p| {
        let d = add_ab(p, p, a, b, ell);
        d.is_some() && add_ab(d, d, a, b, ell).is_none()
    })
}
