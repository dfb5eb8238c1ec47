use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::polyring::{MonomialOrder, VarTable};

fn ring_xy() -> Arc<PolyRing> {
    PolyRing::degrevlex(VarTable::ungraded(["x", "y"]).unwrap())
}

fn polys(ring: &Arc<PolyRing>, texts: &[&str]) -> Vec<Poly> {
    texts.iter().map(|t| Poly::parse(t, ring).unwrap()).collect()
}

fn gb(ring: &Arc<PolyRing>, texts: &[&str]) -> ReducedGB {
    buchberger(&polys(ring, texts), GbBudget::default()).unwrap()
}

#[test]
fn hand_worked_basis() {
    let r = ring_xy();
    let g = gb(&r, &["x^2", "x*y + y^2"]);
    assert_eq!(g.basis(), polys(&r, &["y^3", "x^2", "x*y + y^2"]).as_slice());
    assert!(g.is_autoreduced());
    assert!(g.s_pairs_reduce_to_zero());
}

#[test]
fn principal_and_autoreduced_inputs() {
    let r = ring_xy();
    assert_eq!(gb(&r, &["x"]).basis(), polys(&r, &["x"]).as_slice());
    let elim = r.with_order(MonomialOrder::block_elimination(vec![0, 1], vec![0])).unwrap();
    assert_eq!(gb(&elim, &["x"]).basis(), polys(&elim, &["x"]).as_slice());
    assert_eq!(gb(&r, &["x + y", "y"]).basis(), polys(&r, &["x", "y"]).as_slice());
}

#[test]
fn normal_form_examples() {
    let r = ring_xy();
    let g = gb(&r, &["x^2", "x*y + y^2"]);
    for b in g.basis() {
        assert!(g.normal_form(b).unwrap().is_zero());
    }
    assert!(g.normal_form(&Poly::one(&r)).unwrap().is_one());
    // x*y^2 = y*(x*y + y^2) + y^3
    assert!(g.normal_form(&Poly::parse("x*y^2", &r).unwrap()).unwrap().is_zero());
    assert_eq!(
        g.normal_form(&Poly::parse("x*y + x + 1", &r).unwrap()).unwrap(),
        Poly::parse("y^2 + x + 1", &r).unwrap()
    );
}

#[test]
fn membership_examples() {
    let r = ring_xy();
    let g = gb(&r, &["x^2", "x*y + y^2"]);
    assert!(g.member(&Poly::zero(&r)).unwrap());
    assert!(!g.member(&Poly::one(&r)).unwrap());
}

#[test]
fn staircase_examples() {
    let r = ring_xy();
    let g = gb(&r, &["x^2", "x*y + y^2"]);
    let st = g.staircase(10);
    assert_eq!(st.status(), StaircaseStatus::Certified);
    let mut got: Vec<String> = st.monomials().iter().map(|m| r.fmt_monomial(m)).collect();
    got.sort();
    assert_eq!(got, ["1", "x", "y", "y^2"]);
    assert_eq!(g.dimension(), Ok(4));

    let point = gb(&r, &["x", "y"]);
    assert_eq!(point.staircase(5).monomials(), &[Monomial::one()]);
    assert_eq!(point.dimension(), Ok(1));

    let line = gb(&r, &["x^2"]);
    assert_eq!(line.staircase(6).status(), StaircaseStatus::PossiblyInfinite);
    assert_eq!(line.dimension(), Err(GbError::Infinite));
}

#[test]
fn low_cap_is_indeterminate() {
    let r = ring_xy();
    let g = gb(&r, &["x^3", "y^3"]);
    let st = g.staircase(2);
    assert_eq!(st.status(), StaircaseStatus::Indeterminate);
    assert_eq!(st.dimension(), Err(GbError::CapReached { cap: 2 }));
    assert_eq!(g.dimension(), Ok(9));
}

#[test]
fn unit_ideal_has_dimension_zero() {
    let r = ring_xy();
    let g = gb(&r, &["x + 1", "x"]);
    assert!(g.is_unit_ideal());
    assert_eq!(g.dimension(), Ok(0));
}

#[test]
fn rejects_bad_input() {
    let r = ring_xy();
    assert_eq!(buchberger(&[], GbBudget::default()), Err(GbError::EmptyInput));
    let with_v = polys(&r, &["v*x + y"]);
    assert_eq!(buchberger(&with_v, GbBudget::default()), Err(GbError::VNotForgotten(0)));
}

#[test]
fn tiny_budget_is_a_resource_error() {
    let r = PolyRing::degrevlex(VarTable::ungraded(["x", "y", "z"]).unwrap());
    let rels = polys(&r, &["x^2 + y", "x*y + z", "y^2 + x*z"]);
    let budget = GbBudget { max_basis: 2, ..GbBudget::default() };
    let err = buchberger(&rels, budget).unwrap_err();
    assert!(err.is_resource(), "{err:?}");
}

#[test]
fn oracle_examples() {
    let r = ring_xy();
    assert_eq!(dimension_oracle(&polys(&r, &["x^2", "x*y + y^2", "y^3"]), 3), Ok(4));
    assert_eq!(dimension_oracle(&polys(&r, &["x^2", "x*y + y^2"]), 3), Ok(4));
    assert_eq!(dimension_oracle(&polys(&r, &["x", "y"]), 2), Ok(1));
    // standard monomials reach degree 4, so bound 2 is caught
    assert!(matches!(
        dimension_oracle(&polys(&r, &["x^3", "y^3"]), 2),
        Err(OracleError::Indeterminate { .. })
    ));
}

#[test]
fn elimination_order_basis() {
    let vars = VarTable::ungraded(["t", "x", "y"]).unwrap();
    let ring = PolyRing::new(vars, MonomialOrder::block_elimination(vec![0, 1, 2], vec![0])).unwrap();
    let g = gb(&ring, &["t*y + x^2*y", "t + x^2 + t*x", "y^2", "x^3"]);
    // t*x = x^3 + t*x^2 = ... = 0, so t + x^2 survives with leading term t
    assert!(g.basis().contains(&Poly::parse("t + x^2", &ring).unwrap()));
    assert!(g.s_pairs_reduce_to_zero());
}

#[test]
fn cache_roundtrip_and_rejections() {
    let r = ring_xy();
    let g = gb(&r, &["x^2", "x*y + y^2"]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub/g.gb");
    let header = CacheHeader { group: "G39".into(), s: 1, order: r.order().spec(r.vars()), tool_version: "0.1.0".into() };
    save_gb(&g, &header, &path).unwrap();
    assert_eq!(load_gb(&path, &header, &r).unwrap(), g);

    let wrong_s = CacheHeader { s: 2, ..header.clone() };
    assert!(matches!(load_gb(&path, &wrong_s, &r), Err(CacheError::HeaderMismatch { key: "s", .. })));

    let empty = dir.path().join("empty.gb");
    std::fs::write(&empty, "").unwrap();
    assert!(matches!(load_gb(&empty, &header, &r), Err(CacheError::Empty)));

    let corrupt = dir.path().join("corrupt.gb");
    std::fs::write(&corrupt, "group=G39\ns=1\n").unwrap();
    assert!(matches!(load_gb(&corrupt, &header, &r), Err(CacheError::MissingHeader("order"))));
}

/// Zero-dimensional ideals: a pure power of every variable plus random extras.
fn arb_ideal() -> impl Strategy<Value = (usize, Vec<u16>, Vec<Vec<Vec<u16>>>)> {
    (2usize..=4).prop_flat_map(|n| {
        let powers = prop::collection::vec(1u16..=4, n);
        let mono = prop::collection::vec(0u16..=2, n).prop_filter("degree <= 4", |e| e.iter().sum::<u16>() <= 4);
        let extras = prop::collection::vec(prop::collection::vec(mono, 1..=4), 0..=3);
        (Just(n), powers, extras)
    })
}

fn materialize(n: usize, powers: &[u16], extras: &[Vec<Vec<u16>>]) -> (Arc<PolyRing>, Vec<Poly>, u32) {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let ring = PolyRing::degrevlex(VarTable::ungraded(names).unwrap());
    let mut rels = Vec::new();
    for (i, &k) in powers.iter().enumerate() {
        let mut e = vec![0u16; n];
        e[i] = k;
        rels.push(Poly::from_monomial(&ring, Monomial::from_exponents(&e)));
    }
    for terms in extras {
        let p = Poly::from_terms(&ring, terms.iter().map(|e| Monomial::from_exponents(e)));
        if !p.is_zero() {
            rels.push(p);
        }
    }
    let bound = powers.iter().map(|&k| k as u32 - 1).sum::<u32>();
    (ring, rels, bound)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dimension_matches_linear_algebra((n, powers, extras) in arb_ideal()) {
        let (_, rels, bound) = materialize(n, &powers, &extras);
        let g = buchberger(&rels, GbBudget::default()).unwrap();
        prop_assert!(g.s_pairs_reduce_to_zero());
        prop_assert!(g.is_autoreduced());
        let dim = g.dimension().unwrap();
        prop_assert_eq!(dimension_oracle(&rels, bound.max(1)), Ok(dim));
    }

    #[test]
    fn normal_form_is_idempotent_and_linear(
        (n, powers, extras) in arb_ideal(),
        p_terms in prop::collection::vec(prop::collection::vec(0u16..=5, 4), 0..6),
        q_terms in prop::collection::vec(prop::collection::vec(0u16..=5, 4), 0..6),
    ) {
        let (ring, rels, _) = materialize(n, &powers, &extras);
        let g = buchberger(&rels, GbBudget::default()).unwrap();
        let mk = |ts: &[Vec<u16>]| Poly::from_terms(&ring, ts.iter().map(|e| Monomial::from_exponents(&e[..n])));
        let (p, q) = (mk(&p_terms), mk(&q_terms));
        let np = g.normal_form(&p).unwrap();
        prop_assert_eq!(g.normal_form(&np).unwrap(), np.clone());
        let nq = g.normal_form(&q).unwrap();
        prop_assert_eq!(g.normal_form(&(&p + &q)).unwrap(), &np + &nq);
        for r in &rels {
            prop_assert!(g.member(r).unwrap());
        }
    }

    #[test]
    fn reduced_basis_ignores_input_order((n, powers, extras) in arb_ideal(), seed in any::<u64>()) {
        let (_, mut rels, _) = materialize(n, &powers, &extras);
        let reference = buchberger(&rels, GbBudget::default()).unwrap();
        rels.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(buchberger(&rels, GbBudget::default()).unwrap(), reference);
    }
}
