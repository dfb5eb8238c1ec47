//! Solving the implicit definitions of `x1` and `y1`.
//!
//! Two independent routes: fixed-point iteration in the quotient ring
//! (the correction terms carry nilpotent factors, so iteration from 0
//! stabilizes) and a block-elimination Gröbner basis with `{x1, y1}` in
//! front. Agreement of the two modulo the ideal is checked by the caller.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::groebner::{buchberger, GbBudget, GbError, ReducedGB};
use crate::polyring::{Monomial, MonomialOrder, Poly, PolyError, PolyRing};
use crate::presentations::{default_order_ring, default_precedence, Presentation, PresentationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NilsolveError {
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("presentation has no relation `{0}`")]
    MissingRelation(&'static str),
    #[error("`{0}` is not nilpotent in the quotient")]
    NotNilpotent(&'static str),
    #[error("no basis element of the form {0} + (terms free of x1, y1)")]
    NoEliminant(Implicit),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Implicit {
    X1,
    Y1,
}

impl Implicit {
    pub fn var_name(self) -> &'static str {
        match self {
            Implicit::X1 => "x1",
            Implicit::Y1 => "y1",
        }
    }

    fn relation_name(self) -> &'static str {
        match self {
            Implicit::X1 => "def_x1",
            Implicit::Y1 => "def_y1",
        }
    }
}

impl fmt::Display for Implicit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.var_name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointResult {
    /// Polynomial in `a, b, c, x2, y2, T` only.
    pub solution: Poly,
    pub iterations: usize,
    pub stabilized: bool,
}

/// Iteration cap: `4 · 2^s`.
pub fn iteration_limit(s: u32) -> usize {
    4usize << s
}

/// Right-hand sides `x1 = f(x1)`, `y1 = g(y1)` read off the defining relations.
fn right_hand_sides(p: &Presentation) -> Result<(Poly, Poly), NilsolveError> {
    let mut out = Vec::with_capacity(2);
    for which in [Implicit::X1, Implicit::Y1] {
        let def = p
            .relation(which.relation_name())
            .ok_or(NilsolveError::MissingRelation(which.relation_name()))?
            .forget_v()?;
        out.push(&def + &Poly::var(&p.ring, which.var_name())?);
    }
    let y = out.pop().unwrap();
    let x = out.pop().unwrap();
    Ok((x, y))
}

/// Variables whose nilpotency bounds the size of the iterates.
const TRUNCATED_VARS: [&str; 6] = ["a", "b", "c", "x2", "y2", "T"];

/// The iteration map `u ↦ f(u)` taken modulo the monomial ideal of pure
/// powers `w^N` lying in the relation ideal.
///
/// Iterates never contain `x1` or `y1`. Reducing them to normal form would
/// bring `x1` back (it is a standard monomial), so only the pure powers are
/// dropped; that ideal is contained in the relation ideal, so every iterate
/// is a correct representative.
pub struct FixedPointMap<'a> {
    gb: &'a ReducedGB,
    rhs_x: Poly,
    rhs_y: Poly,
    vanishing: Vec<Monomial>,
}

impl<'a> FixedPointMap<'a> {
    /// `gb` must be the Gröbner basis of the full presentation with `v = 1`.
    pub fn new(p: &Presentation, gb: &'a ReducedGB) -> Result<Self, NilsolveError> {
        let (rhs_x, rhs_y) = right_hand_sides(p)?;
        let limit = nilpotency_search_limit(p.s);
        let mut vanishing = Vec::new();
        for name in TRUNCATED_VARS {
            let Some(i) = gb.ring().vars().index_of(name) else { continue };
            let n = nilpotency_exponent(name, gb, limit)?.ok_or(NilsolveError::NotNilpotent(name))?;
            let mut m = Monomial::one();
            m.set_exp(i, n as u16);
            vanishing.push(m);
        }
        Ok(Self { gb, rhs_x, rhs_y, vanishing })
    }

    fn truncate(&self, p: Poly) -> Poly {
        let kept = p.terms().iter().copied().filter(|t| !self.vanishing.iter().any(|m| m.divides(t)));
        Poly::from_terms(p.ring(), kept)
    }

    fn apply(&self, rhs: &Poly, var: &str, value: &Poly) -> Result<Poly, NilsolveError> {
        let subst = HashMap::from([(var.to_string(), value.clone())]);
        Ok(self.truncate(rhs.substitute(&subst)?))
    }

    /// One application of the map to the candidate pair.
    pub fn step(&self, (cx, cy): (&Poly, &Poly)) -> Result<(Poly, Poly), NilsolveError> {
        Ok((self.apply(&self.rhs_x, "x1", cx)?, self.apply(&self.rhs_y, "y1", cy)?))
    }

    /// Iterates from `(0, 0)` until consecutive normal forms repeat.
    pub fn solve(&self, limit: usize) -> Result<(FixedPointResult, FixedPointResult), NilsolveError> {
        let gb = self.gb;
        let zero = Poly::zero(gb.ring());
        let mut cur = (zero.clone(), zero);
        let mut nf_cur = (gb.normal_form(&cur.0)?, gb.normal_form(&cur.1)?);
        let mut done: [Option<usize>; 2] = [None, None];
        for k in 1..=limit {
            let next = self.step((&cur.0, &cur.1))?;
            let nf_next = (gb.normal_form(&next.0)?, gb.normal_form(&next.1)?);
            if done[0].is_none() && nf_next.0 == nf_cur.0 {
                done[0] = Some(k);
            }
            if done[1].is_none() && nf_next.1 == nf_cur.1 {
                done[1] = Some(k);
            }
            let both_stable = nf_next == nf_cur;
            cur = next;
            nf_cur = nf_next;
            if both_stable {
                break;
            }
        }
        let result = |solution: Poly, at: Option<usize>| FixedPointResult {
            solution,
            iterations: at.unwrap_or(limit),
            stabilized: at.is_some(),
        };
        Ok((result(cur.0, done[0]), result(cur.1, done[1])))
    }
}

/// Nilpotency exponents are searched up to `4^s + 1`.
fn nilpotency_search_limit(s: u32) -> u32 {
    (1u32 << (2 * s)) + 1
}

/// One application of the iteration map to the candidate pair.
pub fn fixed_point_step(
    p: &Presentation,
    gb: &ReducedGB,
    current: (&Poly, &Poly),
) -> Result<(Poly, Poly), NilsolveError> {
    FixedPointMap::new(p, gb)?.step(current)
}

/// Iterates from 0 until consecutive candidates agree modulo the ideal.
///
/// `gb` must be the Gröbner basis of the full presentation (with `v = 1`).
pub fn solve_fixed_point(which: Implicit, p: &Presentation, gb: &ReducedGB) -> Result<FixedPointResult, NilsolveError> {
    let (x, y) = solve_both(p, gb)?;
    Ok(match which {
        Implicit::X1 => x,
        Implicit::Y1 => y,
    })
}

/// Runs the iteration once and returns both results.
pub fn solve_both(p: &Presentation, gb: &ReducedGB) -> Result<(FixedPointResult, FixedPointResult), NilsolveError> {
    FixedPointMap::new(p, gb)?.solve(iteration_limit(p.s))
}

/// True if substituting `value` for the variable in its defining relation gives an ideal member.
pub fn satisfies_definition(which: Implicit, value: &Poly, p: &Presentation, gb: &ReducedGB) -> Result<bool, NilsolveError> {
    let def = p
        .relation(which.relation_name())
        .ok_or(NilsolveError::MissingRelation(which.relation_name()))?
        .forget_v()?;
    let subst = HashMap::from([(which.var_name().to_string(), value.clone())]);
    Ok(gb.member(&def.substitute(&subst)?)?)
}

/// Ring with the same variables and a block order eliminating `{x1, y1}`.
pub fn elimination_ring(p: &Presentation) -> Result<Arc<PolyRing>, NilsolveError> {
    let vars = p.ring.vars();
    let front = vec![p.ring.var_index("x1")?, p.ring.var_index("y1")?];
    let order = MonomialOrder::block_elimination(default_precedence(vars), front);
    Ok(p.ring.with_order(order)?)
}

/// Gröbner basis of the presentation (with `v = 1`) in the elimination order.
pub fn elimination_basis(p: &Presentation, budget: GbBudget) -> Result<ReducedGB, NilsolveError> {
    let ring = elimination_ring(p)?;
    let rels = p
        .relations
        .iter()
        .map(|r| r.poly.forget_v()?.transfer(&ring))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(buchberger(&rels, budget)?)
}

/// Reads `x1 ≡ r` (or `y1 ≡ r`) off an elimination basis; `r` is returned in `target`.
pub fn eliminant_from(which: Implicit, elim: &ReducedGB, target: &Arc<PolyRing>) -> Result<Poly, NilsolveError> {
    let ring = elim.ring();
    let idx = ring.var_index(which.var_name())?;
    let front = [ring.var_index("x1")?, ring.var_index("y1")?];
    let var = Monomial::var(idx);
    for g in elim.basis() {
        if g.leading() == Some(&var) {
            let rest = Poly::from_terms(ring, g.terms()[1..].iter().copied());
            if rest.avoids(&front) {
                return Ok(rest.transfer(target)?);
            }
        }
    }
    Err(NilsolveError::NoEliminant(which))
}

/// Expression for `x1` or `y1` in `a, b, c, x2, y2, T`, via elimination.
pub fn eliminate(which: Implicit, p: &Presentation) -> Result<Poly, NilsolveError> {
    let elim = elimination_basis(p, GbBudget::default())?;
    eliminant_from(which, &elim, &p.ring)
}

/// Dimension after substituting the eliminated `x1`, `y1` and dropping both
/// defining relations and both variables.
pub fn substituted_dimension(p: &Presentation, x1: &Poly, y1: &Poly, budget: GbBudget) -> Result<usize, NilsolveError> {
    let vars = p.ring.vars().without(&["x1", "y1"])?;
    let ring = default_order_ring(vars)?;
    let subst = HashMap::from([("x1".to_string(), x1.clone()), ("y1".to_string(), y1.clone())]);
    let mut rels = Vec::new();
    for r in p.relations.iter().filter(|r| r.name != "def_x1" && r.name != "def_y1") {
        let q = r.poly.forget_v()?.substitute(&subst)?.transfer(&ring)?;
        if !q.is_zero() {
            rels.push(q);
        }
    }
    let gb = buchberger(&rels, budget)?;
    Ok(gb.dimension()?)
}

/// Least `N <= limit` with `var^N` in the ideal.
pub fn nilpotency_exponent(var: &str, gb: &ReducedGB, limit: u32) -> Result<Option<u32>, NilsolveError> {
    let x = Poly::var(gb.ring(), var)?;
    let mut power = Poly::one(gb.ring());
    for n in 1..=limit {
        power = gb.normal_form(&(&power * &x))?;
        if power.is_zero() {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
