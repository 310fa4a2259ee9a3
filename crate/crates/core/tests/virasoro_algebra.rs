use vdeform::algebra::{ParamPoly, Rational};
use vdeform::virasoro::{build_l, check_genus0, commutator, extract_like, virasoro, OperatorSpec};

#[test]
fn virasoro_commutation_relations() {
    for i in -1..=4 {
        for j in (i + 1)..=4 {
            let lhs = commutator(&virasoro(i).unwrap(), &virasoro(j).unwrap());
            let rhs = virasoro(i + j).unwrap().scale(&ParamPoly::int((i - j) as i64));
            assert_eq!(lhs, rhs, "[L_{i}, L_{j}]");
        }
    }
}

#[test]
fn odd_like_operators_commute() {
    let ops: Vec<OperatorSpec> = (1..=3).map(|j| extract_like(2 * j - 1, j as usize).unwrap()).collect();
    for a in &ops {
        for b in &ops {
            assert!(commutator(a, b).is_zero());
        }
    }
}

#[test]
fn antisymmetry_and_jacobi() {
    let x = virasoro(0).unwrap();
    let y = virasoro(1).unwrap();
    let z = extract_like(2, 1).unwrap();
    assert!(commutator(&z, &z).is_zero());
    let j = commutator(&x, &commutator(&y, &z))
        .add(&commutator(&y, &commutator(&z, &x)))
        .add(&commutator(&z, &commutator(&x, &y)));
    assert!(j.is_zero());
}

#[test]
fn build_is_even_in_nu() {
    for i in -1..=6 {
        let op = build_l(i).unwrap();
        assert_eq!(op.parts.len(), ((i + 1) / 2) as usize + 1);
    }
}

#[test]
fn genus_zero_constraints() {
    for i in -1..=3 {
        let nu = build_l(i).unwrap();
        for (j, op) in nu.parts.iter().enumerate() {
            let c = check_genus0(op, 5, 5);
            assert!(c.passed(), "L_{{{i},{}}}: {:?}", 2 * j, c.residual);
        }
    }
    let mut broken = extract_like(2, 1).unwrap();
    broken.add_quad_c(0, 0, &ParamPoly::constant(Rational::ONE));
    assert!(!check_genus0(&broken, 4, 4).passed());
}
