//! Buchberger's algorithm over F₂, normal forms and quotient dimensions.

mod cache;
mod oracle;
mod staircase;

pub use cache::{load_gb, save_gb, CacheError, CacheHeader};
pub use oracle::{dimension_oracle, dimension_oracle_with_slack, OracleError};
pub use staircase::{Staircase, StaircaseStatus};

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::sync::Arc;

use log::debug;
use thiserror::Error;

use crate::polyring::{merge_terms, Monomial, Poly, PolyError, PolyRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbError {
    #[error("no relations given")]
    EmptyInput,
    #[error("relation {0} still carries v-exponents; forget v first")]
    VNotForgotten(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("resource budget exceeded ({reason}): basis size {basis_len}, {pending_pairs} pairs pending")]
    Resource {
        reason: String,
        basis_len: usize,
        pending_pairs: usize,
    },
    #[error("stored basis is not a reduced Gröbner basis")]
    NotReduced,
    #[error("quotient is not finite-dimensional")]
    Infinite,
    #[error("degree cap {cap} reached before the staircase closed")]
    CapReached { cap: u32 },
}

impl GbError {
    pub fn is_resource(&self) -> bool {
        matches!(self, GbError::Resource { .. })
    }
}

/// Limits on a Buchberger run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GbBudget {
    pub max_basis: usize,
    pub max_pending_pairs: usize,
    pub max_terms: usize,
}

impl Default for GbBudget {
    fn default() -> Self {
        Self { max_basis: 50_000, max_pending_pairs: 20_000_000, max_terms: 5_000_000 }
    }
}

/// Reduced Gröbner basis: autoreduced, monic, sorted by descending leading term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedGB {
    ring: Arc<PolyRing>,
    basis: Vec<Poly>,
}

/// Bit `i` set iff variable `i` occurs; a cheap divisibility prefilter.
#[inline]
fn divmask(m: &Monomial) -> u16 {
    m.exponents()
        .iter()
        .enumerate()
        .fold(0u16, |acc, (i, &e)| if e > 0 { acc | (1 << i) } else { acc })
}

/// Leading-term index for repeated divisor lookups.
struct Divisors {
    lts: Vec<Monomial>,
    masks: Vec<u16>,
}

impl Divisors {
    fn new() -> Self {
        Self { lts: Vec::new(), masks: Vec::new() }
    }

    fn push(&mut self, lt: Monomial) {
        self.masks.push(divmask(&lt));
        self.lts.push(lt);
    }

    /// First basis index (list order) whose leading term divides `m`.
    #[inline]
    fn find(&self, m: &Monomial, active: Option<&[bool]>) -> Option<usize> {
        let mask = divmask(m);
        (0..self.lts.len()).find(|&k| {
            active.map_or(true, |a| a[k]) && self.masks[k] & !mask == 0 && self.lts[k].divides(m)
        })
    }
}

/// Full reduction of `terms` (descending) by the basis; the order-largest
/// reducible term is eliminated first, using the first applicable divisor.
fn reduce_terms(
    ring: &PolyRing,
    terms: Vec<Monomial>,
    basis: &[Vec<Monomial>],
    divisors: &Divisors,
    active: Option<&[bool]>,
    max_terms: usize,
) -> Result<Vec<Monomial>, GbError> {
    let cmp = |a: &Monomial, b: &Monomial| ring.cmp_terms(a, b);
    let mut rem = Vec::new();
    let mut cur = terms;
    let mut start = 0;
    while start < cur.len() {
        let m = cur[start];
        match divisors.find(&m, active) {
            None => {
                rem.push(m);
                start += 1;
            }
            Some(k) => {
                let q = divisors.lts[k].quotient_of(&m).expect("divisor found");
                let g = &basis[k];
                let mut shifted = Vec::with_capacity(g.len());
                for t in g {
                    shifted.push(t.checked_mul(&q).ok_or(PolyError::ExponentOverflow)?);
                }
                cur = merge_terms(&cur[start..], &shifted, cmp);
                start = 0;
                if cur.len() > max_terms {
                    return Err(GbError::Resource {
                        reason: format!("intermediate polynomial with {} terms", cur.len()),
                        basis_len: basis.len(),
                        pending_pairs: 0,
                    });
                }
            }
        }
    }
    Ok(rem)
}

struct Engine<'a> {
    ring: &'a Arc<PolyRing>,
    basis: Vec<Vec<Monomial>>,
    divisors: Divisors,
    queue: BinaryHeap<Reverse<(u32, usize, usize)>>,
    pending: HashSet<(usize, usize)>,
    budget: GbBudget,
}

impl<'a> Engine<'a> {
    fn resource(&self, reason: impl Into<String>) -> GbError {
        GbError::Resource {
            reason: reason.into(),
            basis_len: self.basis.len(),
            pending_pairs: self.pending.len(),
        }
    }

    fn reduce(&self, terms: Vec<Monomial>) -> Result<Vec<Monomial>, GbError> {
        reduce_terms(self.ring, terms, &self.basis, &self.divisors, None, self.budget.max_terms).map_err(|e| match e {
            GbError::Resource { reason, .. } => self.resource(reason),
            other => other,
        })
    }

    fn insert(&mut self, g: Vec<Monomial>) -> Result<(), GbError> {
        let n = self.basis.len();
        let lt = g[0];
        for k in 0..n {
            let other = self.divisors.lts[k];
            // product criterion
            if other.is_coprime(&lt) {
                continue;
            }
            let deg = other.lcm(&lt).total_degree();
            self.queue.push(Reverse((deg, n, k)));
            self.pending.insert((k, n));
        }
        self.basis.push(g);
        self.divisors.push(lt);
        if self.basis.len() > self.budget.max_basis {
            return Err(self.resource("basis size"));
        }
        if self.pending.len() > self.budget.max_pending_pairs {
            return Err(self.resource("pair queue size"));
        }
        Ok(())
    }

    /// Buchberger's chain criterion: some `k` with LT(k) | lcm whose pairs
    /// with `i` and `j` have both left the queue.
    fn chain_criterion(&self, i: usize, j: usize, lcm: &Monomial) -> bool {
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        (0..self.basis.len()).any(|k| {
            k != i
                && k != j
                && self.divisors.lts[k].divides(lcm)
                && !self.pending.contains(&key(i, k))
                && !self.pending.contains(&key(j, k))
        })
    }

    fn s_polynomial(&self, i: usize, j: usize) -> Result<Vec<Monomial>, GbError> {
        let (li, lj) = (self.divisors.lts[i], self.divisors.lts[j]);
        let lcm = li.lcm(&lj);
        let shift = |g: &[Monomial], q: Monomial| -> Result<Vec<Monomial>, GbError> {
            g[1..]
                .iter()
                .map(|t| t.checked_mul(&q).ok_or(GbError::Poly(PolyError::ExponentOverflow)))
                .collect()
        };
        let a = shift(&self.basis[i], li.quotient_of(&lcm).unwrap())?;
        let b = shift(&self.basis[j], lj.quotient_of(&lcm).unwrap())?;
        Ok(merge_terms(&a, &b, |x, y| self.ring.cmp_terms(x, y)))
    }
}

/// Computes the reduced Gröbner basis of the ideal generated by `relations`
/// in the order of their (common) ring.
pub fn buchberger(relations: &[Poly], budget: GbBudget) -> Result<ReducedGB, GbError> {
    let first = relations.first().ok_or(GbError::EmptyInput)?;
    let ring = first.ring().clone();
    for (idx, r) in relations.iter().enumerate() {
        if **r.ring() != *ring {
            return Err(PolyError::RingMismatch.into());
        }
        if r.has_v() {
            return Err(GbError::VNotForgotten(idx));
        }
    }
    let mut engine = Engine {
        ring: &ring,
        basis: Vec::new(),
        divisors: Divisors::new(),
        queue: BinaryHeap::new(),
        pending: HashSet::new(),
        budget,
    };
    for r in relations {
        let g = engine.reduce(r.terms().to_vec())?;
        if !g.is_empty() {
            engine.insert(g)?;
        }
    }
    let mut processed = 0usize;
    while let Some(Reverse((_, j, i))) = engine.queue.pop() {
        engine.pending.remove(&(i, j));
        processed += 1;
        if processed % 2000 == 0 {
            debug!(
                "buchberger: {processed} pairs processed, basis {}, queue {}",
                engine.basis.len(),
                engine.pending.len()
            );
        }
        let lcm = engine.divisors.lts[i].lcm(&engine.divisors.lts[j]);
        if engine.chain_criterion(i, j, &lcm) {
            continue;
        }
        let s = engine.s_polynomial(i, j)?;
        let g = engine.reduce(s)?;
        if !g.is_empty() {
            engine.insert(g)?;
        }
    }
    debug!("buchberger: done after {processed} pairs, raw basis {}", engine.basis.len());
    Ok(autoreduce(&ring, engine.basis, budget))
}

/// Minimalizes and tail-reduces a Gröbner basis.
fn autoreduce(ring: &Arc<PolyRing>, basis: Vec<Vec<Monomial>>, budget: GbBudget) -> ReducedGB {
    let lts: Vec<Monomial> = basis.iter().map(|g| g[0]).collect();
    let keep: Vec<bool> = (0..basis.len())
        .map(|i| !(0..basis.len()).any(|k| k != i && lts[k].divides(&lts[i]) && (lts[k] != lts[i] || k < i)))
        .collect();
    let mut divisors = Divisors::new();
    for lt in &lts {
        divisors.push(*lt);
    }
    let mut out: Vec<Vec<Monomial>> = Vec::new();
    for i in (0..basis.len()).filter(|&i| keep[i]) {
        // Leading terms of the kept set never divide each other, so only the tail changes.
        let tail = reduce_terms(ring, basis[i][1..].to_vec(), &basis, &divisors, Some(&keep), budget.max_terms)
            .expect("tail reduction of a Gröbner basis stays within budget");
        let mut g = vec![basis[i][0]];
        g.extend(tail);
        out.push(g);
    }
    out.sort_by(|a, b| ring.cmp_terms(&b[0], &a[0]));
    ReducedGB {
        ring: ring.clone(),
        basis: out.into_iter().map(|t| Poly::from_sorted(ring, t)).collect(),
    }
}

impl ReducedGB {
    /// Wraps a basis read from storage, re-checking the reduced-basis shape.
    pub fn from_reduced_basis(ring: &Arc<PolyRing>, basis: Vec<Poly>) -> Result<Self, GbError> {
        let mut basis = basis;
        for g in &basis {
            if **g.ring() != **ring {
                return Err(PolyError::RingMismatch.into());
            }
        }
        basis.sort_by(|a, b| match (a.leading(), b.leading()) {
            (Some(x), Some(y)) => ring.cmp_terms(y, x),
            _ => Ordering::Equal,
        });
        let gb = Self { ring: ring.clone(), basis };
        if !gb.is_autoreduced() {
            return Err(GbError::NotReduced);
        }
        Ok(gb)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_terms(&self) -> Vec<Monomial> {
        self.basis.iter().filter_map(|g| g.leading().copied()).collect()
    }

    /// True when the ideal is the whole ring.
    pub fn is_unit_ideal(&self) -> bool {
        self.basis.iter().any(Poly::is_one)
    }

    fn raw_basis(&self) -> (Vec<Vec<Monomial>>, Divisors) {
        let raw: Vec<Vec<Monomial>> = self.basis.iter().map(|g| g.terms().to_vec()).collect();
        let mut divisors = Divisors::new();
        for g in &raw {
            divisors.push(g[0]);
        }
        (raw, divisors)
    }

    /// Remainder of `p` on division by the basis. `v` is specialized to 1 first.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly, GbError> {
        let p = if **p.ring() == *self.ring { p.clone() } else { return Err(PolyError::RingMismatch.into()) };
        let p = p.forget_v()?;
        let (raw, divisors) = self.raw_basis();
        let rem = reduce_terms(&self.ring, p.into_terms(), &raw, &divisors, None, GbBudget::default().max_terms)?;
        Ok(Poly::from_sorted(&self.ring, rem))
    }

    pub fn member(&self, p: &Poly) -> Result<bool, GbError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// No term of any element is divisible by another element's leading term.
    pub fn is_autoreduced(&self) -> bool {
        let lts = self.leading_terms();
        self.basis.iter().enumerate().all(|(i, g)| {
            !g.is_zero()
                && g.terms()
                    .iter()
                    .all(|t| lts.iter().enumerate().all(|(k, lt)| k == i || !lt.divides(t)))
        })
    }

    /// Every S-polynomial of the basis reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let (raw, divisors) = self.raw_basis();
        let ring = &self.ring;
        for i in 0..raw.len() {
            for j in i + 1..raw.len() {
                let (li, lj) = (raw[i][0], raw[j][0]);
                let lcm = li.lcm(&lj);
                let qi = li.quotient_of(&lcm).unwrap();
                let qj = lj.quotient_of(&lcm).unwrap();
                let a: Vec<Monomial> = raw[i][1..].iter().map(|t| t.checked_mul(&qi).unwrap()).collect();
                let b: Vec<Monomial> = raw[j][1..].iter().map(|t| t.checked_mul(&qj).unwrap()).collect();
                let s = merge_terms(&a, &b, |x, y| ring.cmp_terms(x, y));
                match reduce_terms(ring, s, &raw, &divisors, None, usize::MAX) {
                    Ok(r) if r.is_empty() => {}
                    _ => return false,
                }
            }
        }
        true
    }

    pub fn staircase(&self, cap: u32) -> Staircase {
        Staircase::enumerate(self, cap)
    }

    /// Dimension of the quotient ring over F₂.
    pub fn dimension(&self) -> Result<usize, GbError> {
        let cap = staircase::certificate_degree(self).ok_or(GbError::Infinite)?;
        self.staircase(cap).dimension()
    }
}

#[cfg(test)]
mod tests;
