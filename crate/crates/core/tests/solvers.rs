mod common;

use aflt::diophantine::{solve_main, solve_qpow, solve_rn, ObstructionSolution};
use aflt::Parity;
use num_traits::ToPrimitive;
use proptest::prelude::*;

const PRIMES: [u64; 11] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn triples(v: &[ObstructionSolution]) -> common::Triples {
    v.iter().map(|s| (s.t.to_u128().unwrap(), s.gamma, s.m)).collect()
}

fn squarefree() -> impl Strategy<Value = u64> {
    (1u64..300).prop_filter("squarefree", |&c| aflt::intmath::squarefree_check(c))
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn main_matches_brute_force(c in squarefree(), q in prop::sample::select(&PRIMES[..]), p in parity()) {
        let want: common::Triples = common::oracle_main(c, q, 32, 8)
            .into_iter()
            .filter(|&(_, g, _)| p.matches(g as u64))
            .collect();
        prop_assert_eq!(triples(&solve_main(c, q, p, 32, 8)), want);
    }

    #[test]
    fn rn_matches_brute_force(c in squarefree(), q in prop::sample::select(&PRIMES[..])) {
        prop_assert_eq!(triples(&solve_rn(c, q, 32, 6)), common::oracle_rn(c, q, 32, 6));
    }

    #[test]
    fn qpow_matches_brute_force(c in squarefree(), q in prop::sample::select(&PRIMES[..6])) {
        let all = common::oracle_qpow(c, q, 40, 7);
        let (conf, off): (common::Triples, common::Triples) =
            all.into_iter().partition(|&(_, g, m)| m % 2 == 0 && g % 2 == 1);
        let got = solve_qpow(c, q, 40, 7);
        prop_assert_eq!(triples(&got.conforming), conf);
        prop_assert_eq!(triples(&got.off_parity), off);
    }

    #[test]
    fn shrinking_the_box_filters(
        c in squarefree(),
        q in prop::sample::select(&PRIMES[..]),
        p in parity(),
        m_small in 0u32..40,
        g_small in 0u32..10,
    ) {
        let big = solve_main(c, q, p, 60, 20);
        let small = solve_main(c, q, p, m_small, g_small);
        let filtered: Vec<_> = big
            .into_iter()
            .filter(|s| s.m <= m_small && s.gamma <= g_small)
            .collect();
        prop_assert_eq!(small, filtered);

        let big = solve_rn(c, q, 60, 12);
        let small = solve_rn(c, q, m_small, g_small);
        let filtered: Vec<_> = big
            .into_iter()
            .filter(|s| s.m <= m_small && s.gamma <= g_small)
            .collect();
        prop_assert_eq!(small, filtered);
    }

    #[test]
    fn every_solution_verifies(c in squarefree(), q in prop::sample::select(&PRIMES[..])) {
        let qp = solve_qpow(c, q, 80, 12);
        let all = solve_main(c, q, Parity::Even, 80, 30)
            .into_iter()
            .chain(solve_main(c, q, Parity::Odd, 80, 30))
            .chain(solve_rn(c, q, 80, 30))
            .chain(qp.conforming)
            .chain(qp.off_parity);
        for s in all {
            prop_assert!(s.verify(c, q), "{} fails for C={} q={}", s, c, q);
        }
    }
}

#[test]
fn known_sporadic_solutions_are_found() {
    // 1·181² + 7 = 2¹⁵ and 1·11² + 7 = 2⁷.
    let found = triples(&solve_main(1, 7, Parity::Odd, 20, 3));
    assert!(found.contains(&(181, 1, 15)));
    assert!(found.contains(&(11, 1, 7)));
    // 127·1² + 1 = 2⁷.
    assert!(triples(&solve_rn(127, 3, 10, 2)).contains(&(1, 0, 7)));
}

#[test]
fn large_box_stays_exact() {
    // 2^m − q^γ is a square multiple of C only rarely; everything found in a
    // large box must still satisfy the identity exactly.
    for s in solve_main(7, 3, Parity::Even, 400, 200) {
        assert!(s.verify(7, 3));
    }
}
