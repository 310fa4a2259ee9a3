use proptest::prelude::*;

use vdeform::algebra::{
    integrate_x, parse_jet_function, variational_derivative, DiffPoly, EpsSeries, JetFunction, ParamPoly, Rational,
};
use vdeform::virasoro::{commutator, virasoro, OperatorSpec};

const CUT: usize = 12;

/// Sums of `c · Π w_k^{e_k}` with small jets and exponents.
fn diffpoly() -> impl Strategy<Value = DiffPoly> {
    let term = (-20i64..20, 1i64..6, prop::collection::vec((0usize..4, 1u32..3), 1..3));
    prop::collection::vec(term, 1..4).prop_map(|terms| {
        terms.into_iter().fold(DiffPoly::zero(), |acc, (n, d, factors)| {
            let m = factors.into_iter().fold(DiffPoly::int(1), |p, (k, e)| p.mul(&DiffPoly::jet(k).pow(e)));
            acc.add(&m.scale(&Rational::new(n, d)))
        })
    })
}

fn combo(coeffs: &[i64]) -> OperatorSpec {
    coeffs
        .iter()
        .enumerate()
        .fold(OperatorSpec::zero(), |acc, (i, c)| acc.add(&virasoro(i as i32 - 1).unwrap().scale(&ParamPoly::int(*c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dx_is_a_derivation(f in diffpoly(), g in diffpoly()) {
        let lhs = f.mul(&g).dx(CUT).unwrap();
        let rhs = f.dx(CUT).unwrap().mul(&g).add(&f.mul(&g.dx(CUT).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivatives_have_zero_variational_derivative(f in diffpoly()) {
        let d = JetFunction::poly(f.dx(CUT).unwrap());
        prop_assert!(variational_derivative(&d, CUT).unwrap().is_zero());
    }

    #[test]
    fn integration_inverts_dx(f in diffpoly()) {
        let d = f.dx(CUT).unwrap();
        let back = integrate_x(&d, CUT).unwrap();
        prop_assert_eq!(back.dx(CUT).unwrap(), d);
    }

    #[test]
    fn dx_raises_degree_by_one(k in 0usize..5, e in 1u32..4) {
        let f = JetFunction::poly(DiffPoly::jet(k).pow(e));
        let d = f.dx(CUT).unwrap();
        prop_assert_eq!(d.homogeneous_deg(), f.homogeneous_deg().map(|x| x + 1));
    }

    #[test]
    fn display_parses_back(f in diffpoly(), d in 1i64..4) {
        let g = JetFunction::poly(f).div(&JetFunction::jet(1).pow(d as u32).unwrap()).unwrap();
        prop_assert_eq!(parse_jet_function(&g.to_string()).unwrap(), g.clone());
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<JetFunction>(&json).unwrap(), g);
    }

    #[test]
    fn eps_rescaling_inverts(f in diffpoly(), g in diffpoly(), n in 1i64..9, d in 1i64..9) {
        let s = EpsSeries::from_coeffs(vec![JetFunction::poly(f), JetFunction::poly(g)]);
        let r = Rational::new(n, d);
        prop_assert_eq!(s.rescale_eps(&r).rescale_eps(&r.recip()), s);
    }

    #[test]
    fn bracket_is_antisymmetric_and_satisfies_jacobi(
        x in prop::collection::vec(-3i64..4, 4),
        y in prop::collection::vec(-3i64..4, 4),
        z in prop::collection::vec(-3i64..4, 4),
    ) {
        let (x, y, z) = (combo(&x), combo(&y), combo(&z));
        prop_assert!(commutator(&x, &y).add(&commutator(&y, &x)).is_zero());
        let j = commutator(&x, &commutator(&y, &z))
            .add(&commutator(&y, &commutator(&z, &x)))
            .add(&commutator(&z, &commutator(&x, &y)));
        prop_assert!(j.is_zero());
    }
}
