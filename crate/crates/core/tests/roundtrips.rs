use aflt::candidates::{obstruction_for_shape, realize_shape, recover_solution, shapes_for_case, ShapeCase};
use aflt::curvedb::{parse_db, CurveDb, CurveRecord};
use aflt::diophantine::{point_to_solution, solution_to_point, solve_main, solve_qpow, solve_rn, Equation};
use aflt::ellcurve::CurveAB;
use aflt::Parity;
use proptest::prelude::*;

const PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

fn squarefree() -> impl Strategy<Value = u64> {
    (1u64..400).prop_filter("squarefree", |&c| aflt::intmath::squarefree_check(c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_map_inverts(c in squarefree(), q in prop::sample::select(&PRIMES[..])) {
        let sols = solve_main(c, q, Parity::Even, 60, 12)
            .into_iter()
            .chain(solve_main(c, q, Parity::Odd, 60, 12))
            .chain(solve_qpow(c, q, 60, 12).conforming)
            // t = 0 lands on V = 0, which the inverse map rejects.
            .filter(|s| s.t.sign() != num_bigint::Sign::NoSign);
        for sol in sols {
            let (curve, pt) = solution_to_point(&sol, c, q).unwrap();
            prop_assert!(curve.contains(&pt));
            prop_assert_eq!(point_to_solution(&pt, &curve, c, q), Some(sol));
        }
    }

    #[test]
    fn candidates_recover_their_solution(c in squarefree(), q in prop::sample::select(&PRIMES[..])) {
        let qp = solve_qpow(c, q, 60, 12);
        let sols: Vec<_> = solve_main(c, q, Parity::Even, 60, 12)
            .into_iter()
            .chain(solve_main(c, q, Parity::Odd, 60, 12))
            .chain(solve_rn(c, q, 60, 12))
            .chain(qp.conforming)
            .chain(qp.off_parity)
            .collect();
        for case in ShapeCase::ODD.iter().chain(ShapeCase::EVEN.iter()) {
            for shape in shapes_for_case(c, q, *case) {
                let Some(spec) = obstruction_for_shape(&shape) else { continue };
                for sol in sols.iter().filter(|s| spec.admits(s)) {
                    if let Ok(cand) = realize_shape(&shape, sol).unwrap() {
                        prop_assert_eq!(recover_solution(&cand.curve, &shape), Some(sol.clone()));
                    }
                }
            }
        }
    }

    #[test]
    fn database_text_round_trips(
        curves in prop::collection::vec((-500i64..500, -500i64..500, 1u64..5000), 0..12),
        bound in prop::option::of(1u64..10_000),
    ) {
        let records: Vec<CurveRecord> = curves
            .into_iter()
            .enumerate()
            .filter_map(|(i, (a, b, n))| {
                let curve = CurveAB::new(a, b).ok()?.to_general();
                CurveRecord::new(n, format!("x{i}"), curve).ok()
            })
            .collect();
        let db = CurveDb::from_records(records, bound);
        let text = db.serialize();
        let back = parse_db(&text).unwrap();
        prop_assert_eq!(back.records().len(), db.records().len());
        for (x, y) in back.records().iter().zip(db.records()) {
            prop_assert_eq!((x.conductor, &x.label, &x.curve), (y.conductor, &y.label, &y.curve));
        }
        prop_assert_eq!(back.coverage_bound(), db.coverage_bound());
        prop_assert_eq!(back.serialize(), text);
    }
}

#[test]
fn rn_solutions_have_no_mordell_point() {
    // 127·1² + 1 = 2⁷.
    let sol = aflt::diophantine::ObstructionSolution::new(127, 3, 1.into(), 0, 7, Equation::Rn).unwrap();
    assert!(solution_to_point(&sol, 127, 3).is_err());
}
