use cnlse_verify::{
    ComplexValue, EllipticInvariants, QuarticCurve, QuarticSolution, Sign, Weierstrass,
};
use proptest::prelude::*;

fn point() -> impl Strategy<Value = ComplexValue> {
    (0.05f64..0.9, 0.0f64..std::f64::consts::TAU).prop_map(|(r, a)| ComplexValue::from_polar(r, a))
}

fn invariants() -> impl Strategy<Value = EllipticInvariants> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_filter_map("singular curve", |(g2, g3)| {
        EllipticInvariants::new(g2, g3).ok()
    })
}

fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #[test]
    fn wp_is_even_and_its_derivative_odd(inv in invariants(), u in point()) {
        let wp = Weierstrass::new(inv);
        let (a, b) = (wp.eval(u).unwrap(), wp.eval(-u).unwrap());
        prop_assert!(rel(a.value, b.value) < 1e-12);
        prop_assert!(rel(a.derivative, -b.derivative) < 1e-12);
    }

    #[test]
    fn wp_satisfies_its_differential_equation(inv in invariants(), u in point()) {
        let v = Weierstrass::new(inv).eval(u).unwrap();
        let rhs = inv.cubic(v.value);
        prop_assert!(rel(v.derivative * v.derivative, rhs) < 1e-10);
    }

    #[test]
    fn zero_invariants_reduce_to_inverse_square(u in point()) {
        let wp = Weierstrass::new(EllipticInvariants::new(0.0, 0.0).unwrap());
        let v = wp.eval(u).unwrap();
        prop_assert!(rel(v.value, u.powi(-2)) < 1e-13);
        prop_assert!(rel(v.derivative, -2.0 * u.powi(-3)) < 1e-13);
    }

    #[test]
    fn flipping_the_branch_mirrors_the_coordinate(
        c in prop::array::uniform5(-1.0f64..1.0),
        y0 in -1.0f64..1.0,
        xi in 0.05f64..0.6,
    ) {
        let curve = QuarticCurve::new(c[0], c[1], c[2], c[3], 1.0 + c[4].abs());
        prop_assume!(curve.eval(y0) > 1e-3);
        let Ok(plus) = QuarticSolution::new(curve, y0, Sign::Plus) else {
            return Err(TestCaseError::reject("singular curve"));
        };
        let minus = QuarticSolution::new(curve, y0, Sign::Minus).unwrap();
        match (plus.value(xi), minus.value(-xi)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{a} vs {b}"),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "mismatch {a:?} vs {b:?}"),
        }
    }
}
