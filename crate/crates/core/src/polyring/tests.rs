use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;

fn xyz() -> Arc<PolyRing> {
    PolyRing::degrevlex(VarTable::new(["x", "y", "z"], [1, 1, 2], -1).unwrap())
}

fn abc() -> Arc<PolyRing> {
    PolyRing::degrevlex(VarTable::new(["a", "b", "c"], [1, 1, 1], -1).unwrap())
}

fn p(ring: &Arc<PolyRing>, text: &str) -> Poly {
    Poly::parse(text, ring).unwrap()
}

#[test]
fn add_examples() {
    let r = abc();
    let q = p(&r, "a + b*c^2");
    assert!((&q + &q).is_zero());
    assert_eq!(&q + &Poly::zero(&r), q);
    assert_eq!(&p(&r, "a + b") + &p(&r, "b + c"), p(&r, "a + c"));
}

#[test]
fn mul_examples() {
    let r = xyz();
    let s = p(&r, "x + y");
    assert_eq!(&s * &s, p(&r, "x^2 + y^2"));
    assert_eq!(&s * &Poly::one(&r), s);
    let r = abc();
    let ab = p(&r, "a + b");
    // coefficients 1, 3, 3, 1 reduce to 1, 1, 1, 1
    assert_eq!(&(&ab * &ab) * &ab, p(&r, "a^3 + a^2*b + a*b^2 + b^3"));
}

#[test]
fn mul_rejects_other_ring() {
    let q = p(&abc(), "a");
    let w = p(&xyz(), "x");
    assert_eq!(q.try_mul(&w), Err(PolyError::RingMismatch));
    assert_eq!(q.try_add(&w), Err(PolyError::RingMismatch));
}

#[test]
fn mul_overflow_is_an_error() {
    let r = abc();
    let big = Poly::from_monomial(&r, Monomial::from_exponents(&[u16::MAX, 0, 0]));
    assert_eq!(big.try_mul(&p(&r, "a")), Err(PolyError::ExponentOverflow));
}

#[test]
fn parse_examples() {
    let r = PolyRing::degrevlex(VarTable::new(["a", "b", "c", "T"], [1, 1, 1, 2], -1).unwrap());
    let ct = p(&r, "c*T");
    assert_eq!(ct.terms(), &[Monomial::from_exponents(&[0, 0, 1, 1])]);
    assert!(p(&r, "0").is_zero());
    let two = p(&r, "v^-1*a^3 + b");
    assert_eq!(two.len(), 2);
    let first = two.terms().iter().find(|m| m.exp(0) == 3).unwrap();
    assert_eq!(first.v_exp(), -1);
    assert_eq!(p(&r, " 1 + a*a "), p(&r, "a^2 + 1"));
    assert!(p(&r, "2*a").is_zero());
}

#[test]
fn parse_errors_carry_positions() {
    let r = abc();
    let err = Poly::parse("a + q", &r).unwrap_err();
    assert_eq!(err.pos, 4);
    assert!(err.message.contains("unknown variable"));
    assert!(Poly::parse("", &r).is_err());
    assert!(Poly::parse("   ", &r).is_err());
    assert!(Poly::parse("a^", &r).is_err());
    assert!(Poly::parse("a^-2", &r).is_err());
    assert!(Poly::parse("a + ", &r).is_err());
    assert!(Poly::parse("a b", &r).is_err());
}

#[test]
fn compare_examples() {
    let vars = VarTable::ungraded(["x", "y"]).unwrap();
    let deg = MonomialOrder::degrevlex(vec![0, 1]);
    let x2 = Monomial::from_exponents(&[2, 0]);
    let xy = Monomial::from_exponents(&[1, 1]);
    assert_eq!(deg.compare(&x2, &xy), Ordering::Greater);
    assert_eq!(deg.compare(&xy, &xy), Ordering::Equal);
    let elim = MonomialOrder::block_elimination(vec![0, 1], vec![0]);
    let x = Monomial::from_exponents(&[1, 0]);
    let y3 = Monomial::from_exponents(&[0, 3]);
    assert_eq!(elim.compare(&x, &y3), Ordering::Greater);
    assert_eq!(deg.compare(&x, &y3), Ordering::Less);
    assert!(PolyRing::new(vars, elim).is_ok());
}

#[test]
fn degrevlex_breaks_ties_on_last_variable() {
    // x*z vs y^2 with x > y > z: last variable z differs, smaller exponent wins
    let deg = MonomialOrder::degrevlex(vec![0, 1, 2]);
    let xz = Monomial::from_exponents(&[1, 0, 1]);
    let y2 = Monomial::from_exponents(&[0, 2, 0]);
    assert_eq!(deg.compare(&y2, &xz), Ordering::Greater);
    // v never decides
    assert_eq!(deg.compare(&y2.with_v(5), &y2), Ordering::Equal);
}

#[test]
fn order_spec_roundtrip() {
    let vars = VarTable::ungraded(["x1", "y1", "a", "b"]).unwrap();
    let prec = vec![0, 1, 2, 3];
    let e = MonomialOrder::block_elimination(vec![2, 0, 1, 3], vec![0, 1]);
    let text = e.spec(&vars);
    assert_eq!(text, "elim(x1,y1|a,b)");
    let back = MonomialOrder::parse_spec(&text, &vars, &prec).unwrap();
    assert_eq!(back.spec(&vars), text);
    let short = MonomialOrder::parse_spec("elim(y1)", &vars, &prec).unwrap();
    assert_eq!(short.spec(&vars), "elim(y1|x1,a,b)");
    assert_eq!(MonomialOrder::parse_spec("degrevlex", &vars, &prec).unwrap().spec(&vars), "degrevlex(x1,y1,a,b)");
    assert!(MonomialOrder::parse_spec("lex", &vars, &prec).is_err());
    assert!(MonomialOrder::parse_spec("degrevlex(x1,x1,a,b)", &vars, &prec).is_err());
}

#[test]
fn halved_degree_examples() {
    let r = PolyRing::degrevlex(
        VarTable::new(["a", "b", "c", "x2", "T"], [1, 1, 1, 2, 2], -3).unwrap(),
    );
    assert_eq!(p(&r, "c*T").halved_degree(), Homogeneity::Degree(3));
    // s = 2: v (bc)^2 + b has degree -3 + 4 = 1
    assert_eq!(p(&r, "v*b^2*c^2 + b").halved_degree(), Homogeneity::Degree(1));
    match p(&r, "a + x2").halved_degree() {
        Homogeneity::Inhomogeneous { first_degree, second_degree, .. } => {
            let mut ds = [first_degree, second_degree];
            ds.sort();
            assert_eq!(ds, [1, 2]);
        }
        other => panic!("expected inhomogeneous, got {other:?}"),
    }
    assert_eq!(Poly::zero(&r).halved_degree(), Homogeneity::Zero);
}

#[test]
fn substitute_examples() {
    let r = PolyRing::degrevlex(VarTable::ungraded(["a", "b", "c", "T", "x1", "x2"]).unwrap());
    let zero = HashMap::from([("c".to_string(), Poly::zero(&r))]);
    assert!(p(&r, "c*T").substitute(&zero).unwrap().is_zero());
    let ca = HashMap::from([("c".to_string(), p(&r, "a"))]);
    assert!(p(&r, "a + c").substitute(&ca).unwrap().is_zero());
    let xb = HashMap::from([("x1".to_string(), p(&r, "b"))]);
    assert_eq!(p(&r, "x1 + x2*x1").substitute(&xb).unwrap(), p(&r, "b + x2*b"));
}

#[test]
fn substitute_is_simultaneous() {
    let r = abc();
    let swap = HashMap::from([("a".to_string(), p(&r, "b")), ("b".to_string(), p(&r, "a"))]);
    assert_eq!(p(&r, "a^2*b + c").substitute(&swap).unwrap(), p(&r, "b^2*a + c"));
}

#[test]
fn forget_v_detects_collisions() {
    let r = xyz();
    assert_eq!(p(&r, "v*z + x").forget_v().unwrap(), p(&r, "z + x"));
    assert!(p(&r, "v^2*z^2 + v^2*z^2").forget_v().unwrap().is_zero());
    assert!(matches!(p(&r, "v*x + x").forget_v(), Err(PolyError::VCollision(_))));
}

#[test]
fn transfer_maps_by_name() {
    let big = abc();
    let small = PolyRing::degrevlex(VarTable::ungraded(["b", "a"]).unwrap());
    let q = p(&big, "a^2*b + b");
    let moved = q.transfer(&small).unwrap();
    assert_eq!(moved.to_string(), "b*a^2 + b");
    assert_eq!(p(&big, "c").transfer(&small), Err(PolyError::MissingVariable("c".into())));
}

#[test]
fn var_table_validation() {
    assert!(VarTable::new(["a", "a"], [1, 1], 0).is_err());
    assert!(VarTable::new(["a", "1b"], [1, 1], 0).is_err());
    assert!(VarTable::new(["a", "v"], [1, 1], 0).is_err());
    assert!(VarTable::new(["a"], [0], 0).is_err());
    assert!(VarTable::new(Vec::<String>::new(), [], 0).is_err());
}

#[test]
fn printing_is_descending_and_readable() {
    let r = xyz();
    let q = p(&r, "1 + x + v^-1*y^2 + v*x*z");
    // y^2 > x*z: the last variable z breaks the tie
    assert_eq!(q.to_string(), "v^-1*y^2 + v*x*z + x + 1");
    assert_eq!(Poly::zero(&r).to_string(), "0");
}

fn arb_poly(ring: Arc<PolyRing>) -> impl Strategy<Value = Poly> {
    let mono = (0u16..4, 0u16..4, 0u16..3, -2i32..3)
        .prop_map(|(a, b, c, v)| Monomial::from_exponents(&[a, b, c]).with_v(v));
    prop::collection::vec(mono, 0..7).prop_map(move |ms| Poly::from_terms(&ring, ms))
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (0u16..5, 0u16..5, 0u16..5).prop_map(|(a, b, c)| Monomial::from_exponents(&[a, b, c]))
}

proptest! {
    #[test]
    fn add_is_a_vector_space(a in arb_poly(xyz()), b in arb_poly(xyz()), c in arb_poly(xyz())) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a + &a).is_zero());
        prop_assert_eq!(&a + &Poly::zero(&xyz()), a.clone());
    }

    #[test]
    fn mul_is_a_commutative_ring(a in arb_poly(xyz()), b in arb_poly(xyz()), c in arb_poly(xyz())) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a * &Poly::zero(&xyz())).is_zero());
    }

    #[test]
    fn frobenius(a in arb_poly(xyz()), b in arb_poly(xyz())) {
        let sum = &a + &b;
        prop_assert_eq!(&sum * &sum, &(&a * &a) + &(&b * &b));
        prop_assert_eq!(sum.frobenius(1).unwrap(), &sum * &sum);
        prop_assert_eq!(sum.pow(4).unwrap(), sum.frobenius(2).unwrap());
    }

    #[test]
    fn print_parse_roundtrip(a in arb_poly(xyz())) {
        let text = a.to_string();
        prop_assert_eq!(Poly::parse(&text, &xyz()).unwrap(), a.clone());
        let ring = xyz();
        prop_assert!(a.terms().windows(2).all(|w| ring.cmp_terms(&w[0], &w[1]) == Ordering::Greater));
    }

    #[test]
    fn order_is_total_and_multiplicative(
        m1 in arb_monomial(), m2 in arb_monomial(), m3 in arb_monomial(), n in arb_monomial(),
        front in prop::sample::subsequence(vec![0usize, 1, 2], 1..3),
    ) {
        for ord in [MonomialOrder::degrevlex(vec![2, 0, 1]), MonomialOrder::block_elimination(vec![0, 1, 2], front.clone())] {
            let c12 = ord.compare(&m1, &m2);
            prop_assert_eq!(c12, ord.compare(&m2, &m1).reverse());
            prop_assert_eq!(c12 == Ordering::Equal, m1 == m2);
            if c12 == Ordering::Greater && ord.compare(&m2, &m3) == Ordering::Greater {
                prop_assert_eq!(ord.compare(&m1, &m3), Ordering::Greater);
            }
            let (a, b) = (m1.checked_mul(&n).unwrap(), m2.checked_mul(&n).unwrap());
            prop_assert_eq!(ord.compare(&a, &b), c12);
            prop_assert_ne!(ord.compare(&Monomial::one(), &m1), Ordering::Greater);
        }
    }

    #[test]
    fn degree_is_additive(a in arb_poly(xyz()), b in arb_poly(xyz())) {
        if let (Some(da), Some(db)) = (a.halved_degree().degree(), b.halved_degree().degree()) {
            let prod = &a * &b;
            if !prod.is_zero() {
                prop_assert_eq!(prod.halved_degree().degree(), Some(da + db));
            }
        }
    }
}
