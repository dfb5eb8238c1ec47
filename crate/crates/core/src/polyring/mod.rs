//! Sparse multivariate polynomials over the two-element field.
//!
//! A [`Poly`] is a set of [`Monomial`]s kept strictly descending in the
//! order of its [`PolyRing`]. Each monomial also carries an integer
//! exponent of the periodicity class `v`; the monomial order ignores it, so
//! `v` is never a leading variable. Arithmetic is characteristic two:
//! addition is symmetric difference of the term sets.

mod monomial;
mod order;
mod parse;

pub use monomial::{Exponent, Monomial, MAX_VARS};
pub use order::{MonomialOrder, OrderKind};
pub use parse::ParseError;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings")]
    RingMismatch,
    #[error("exponent overflow while multiplying monomials")]
    ExponentOverflow,
    #[error("invalid variable table: {0}")]
    InvalidVars(String),
    #[error("invalid monomial order: {0}")]
    InvalidOrder(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no counterpart in the target ring")]
    MissingVariable(String),
    #[error("v-exponent collision on monomial {0} while forgetting v")]
    VCollision(String),
}

/// Variable names with their halved degrees, plus the halved degree of `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    halved_degrees: Vec<i64>,
    v_weight: i64,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarTable {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        halved_degrees: impl IntoIterator<Item = i64>,
        v_weight: i64,
    ) -> Result<Self, PolyError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let halved_degrees: Vec<i64> = halved_degrees.into_iter().collect();
        if names.len() != halved_degrees.len() {
            return Err(PolyError::InvalidVars(format!(
                "{} names but {} degrees",
                names.len(),
                halved_degrees.len()
            )));
        }
        if names.is_empty() || names.len() > MAX_VARS {
            return Err(PolyError::InvalidVars(format!(
                "between 1 and {MAX_VARS} variables supported, got {}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if !valid_identifier(name) {
                return Err(PolyError::InvalidVars(format!("bad identifier `{name}`")));
            }
            // `v` is the periodicity class and is spelled out by the grammar.
            if name == "v" {
                return Err(PolyError::InvalidVars("`v` is reserved".into()));
            }
            if names[..i].contains(name) {
                return Err(PolyError::InvalidVars(format!("duplicate name `{name}`")));
            }
        }
        if let Some(d) = halved_degrees.iter().find(|&&d| d <= 0) {
            return Err(PolyError::InvalidVars(format!("non-positive degree {d}")));
        }
        Ok(Self { names, halved_degrees, v_weight })
    }

    /// Unit-degree table, used for auxiliary rings such as power-series variables.
    pub fn ungraded<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, PolyError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        Self::new(names, std::iter::repeat(1).take(n), 0)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn halved_degree(&self, i: usize) -> i64 {
        self.halved_degrees[i]
    }

    pub fn v_weight(&self) -> i64 {
        self.v_weight
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Copy of the table with the named variables removed.
    pub fn without(&self, drop: &[&str]) -> Result<Self, PolyError> {
        let (names, degs): (Vec<_>, Vec<_>) = self
            .names
            .iter()
            .zip(&self.halved_degrees)
            .filter(|(n, _)| !drop.contains(&n.as_str()))
            .map(|(n, d)| (n.clone(), *d))
            .unzip();
        Self::new(names, degs, self.v_weight)
    }

    /// Weighted degree of a monomial, counting `v` with its (negative) weight.
    pub fn weighted_degree(&self, m: &Monomial) -> i64 {
        let body: i64 = (0..self.len())
            .map(|i| m.exp(i) as i64 * self.halved_degrees[i])
            .sum();
        body + m.v_exp() as i64 * self.v_weight
    }
}

/// A variable table together with the monomial order used to sort terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    vars: VarTable,
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(vars: VarTable, order: MonomialOrder) -> Result<Arc<Self>, PolyError> {
        order.check_against(&vars)?;
        Ok(Arc::new(Self { vars, order }))
    }

    /// Degrevlex with precedence following the table order (first variable largest).
    pub fn degrevlex(vars: VarTable) -> Arc<Self> {
        let order = MonomialOrder::degrevlex((0..vars.len()).collect());
        Arc::new(Self { vars, order })
    }

    pub fn vars(&self) -> &VarTable {
        &self.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Same variables, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<Self>, PolyError> {
        Self::new(self.vars.clone(), order)
    }

    /// Total comparison used for storage: the monomial order, then the v-exponent.
    #[inline]
    pub(crate) fn cmp_terms(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order
            .compare(a, b)
            .then_with(|| a.v_exp().cmp(&b.v_exp()))
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        let mut factors = Vec::new();
        match m.v_exp() {
            0 => {}
            1 => factors.push("v".to_string()),
            e => factors.push(format!("v^{e}")),
        }
        for i in 0..self.nvars() {
            match m.exp(i) {
                0 => {}
                1 => factors.push(self.vars.name(i).to_string()),
                e => factors.push(format!("{}^{e}", self.vars.name(i))),
            }
        }
        if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        }
    }
}

/// Result of the weighted-degree audit of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Inhomogeneous {
        first: Monomial,
        first_degree: i64,
        second: Monomial,
        second_degree: i64,
    },
}

impl Homogeneity {
    pub fn degree(&self) -> Option<i64> {
        match self {
            Homogeneity::Degree(d) => Some(*d),
            _ => None,
        }
    }
}

/// Canonical polynomial over F₂: distinct monomials, strictly descending.
#[derive(Clone)]
pub struct Poly {
    ring: Arc<PolyRing>,
    terms: Vec<Monomial>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
            && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&self.ring.fmt_monomial(m))?;
        }
        Ok(())
    }
}

/// Symmetric difference of two sorted term lists.
pub(crate) fn merge_terms<F>(a: &[Monomial], b: &[Monomial], cmp: F) -> Vec<Monomial>
where
    F: Fn(&Monomial, &Monomial) -> Ordering,
{
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match cmp(&a[i], &b[j]) {
            Ordering::Greater => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Poly {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Self { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::from_monomial(ring, Monomial::one())
    }

    pub fn from_monomial(ring: &Arc<PolyRing>, m: Monomial) -> Self {
        Self { ring: ring.clone(), terms: vec![m] }
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Result<Self, PolyError> {
        let i = ring.var_index(name)?;
        Ok(Self::from_monomial(ring, Monomial::var(i)))
    }

    /// `v^k` as a polynomial.
    pub fn v_power(ring: &Arc<PolyRing>, k: i32) -> Self {
        Self::from_monomial(ring, Monomial::one().with_v(k))
    }

    /// Builds a canonical polynomial from arbitrary terms; repeated terms cancel in pairs.
    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        terms.sort_unstable_by(|a, b| ring.cmp_terms(b, a));
        let mut out: Vec<Monomial> = Vec::with_capacity(terms.len());
        for m in terms {
            if out.last() == Some(&m) {
                out.pop();
            } else {
                out.push(m);
            }
        }
        Self { ring: ring.clone(), terms: out }
    }

    /// Wraps terms already sorted strictly descending in `ring`'s order.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<Monomial>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp_terms(&w[0], &w[1]) == Ordering::Greater));
        Self { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Monomial> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == Monomial::one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(Monomial::total_degree).max()
    }

    fn same_ring(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let ring = &self.ring;
        let terms = merge_terms(&self.terms, &other.terms, |a, b| ring.cmp_terms(a, b));
        Ok(Self { ring: ring.clone(), terms })
    }

    /// Product by a single monomial; multiplicativity of the order keeps terms sorted.
    pub fn mul_monomial(&self, m: &Monomial) -> Result<Self, PolyError> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.checked_mul(m))
            .collect::<Option<Vec<_>>>()
            .ok_or(PolyError::ExponentOverflow)?;
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let mut products = Vec::with_capacity(self.len() * other.len());
        for m in &self.terms {
            for t in &other.terms {
                products.push(m.checked_mul(t).ok_or(PolyError::ExponentOverflow)?);
            }
        }
        Ok(Self::from_terms(&self.ring, products))
    }

    /// Raises to the power `2^k` termwise (Frobenius).
    pub fn frobenius(&self, k: u32) -> Result<Self, PolyError> {
        let factor = 1u32.checked_shl(k).ok_or(PolyError::ExponentOverflow)?;
        let terms = self
            .terms
            .iter()
            .map(|t| t.checked_pow(factor))
            .collect::<Option<Vec<_>>>()
            .ok_or(PolyError::ExponentOverflow)?;
        Ok(Self { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, mut e: u32) -> Result<Self, PolyError> {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.frobenius(1)?;
            }
        }
        Ok(result)
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .copied()
            .filter(|m| m.total_degree() <= max_degree)
            .collect();
        Self { ring: self.ring.clone(), terms }
    }

    pub fn mul_truncated(&self, other: &Self, max_degree: u32) -> Result<Self, PolyError> {
        self.same_ring(other)?;
        let ring = &self.ring;
        let mut acc: Vec<Monomial> = Vec::new();
        for m in &self.terms {
            let mut shifted = Vec::new();
            for t in &other.terms {
                if m.total_degree() + t.total_degree() <= max_degree {
                    shifted.push(t.checked_mul(m).ok_or(PolyError::ExponentOverflow)?);
                }
            }
            acc = merge_terms(&acc, &shifted, |a, b| ring.cmp_terms(a, b));
        }
        Ok(Self { ring: ring.clone(), terms: acc })
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, assignments: &HashMap<String, Poly>) -> Result<Self, PolyError> {
        self.substitute_impl(assignments, None)
    }

    /// Substitution into a different ring (e.g. power-series composition), truncated by total degree.
    pub fn substitute_truncated(
        &self,
        assignments: &HashMap<String, Poly>,
        max_degree: u32,
    ) -> Result<Self, PolyError> {
        self.substitute_impl(assignments, Some(max_degree))
    }

    fn substitute_impl(
        &self,
        assignments: &HashMap<String, Poly>,
        max_degree: Option<u32>,
    ) -> Result<Self, PolyError> {
        let mut targets: Vec<Option<&Poly>> = vec![None; self.ring.nvars()];
        for (name, value) in assignments {
            let i = self.ring.var_index(name)?;
            targets[i] = Some(value);
        }
        let out_ring = assignments
            .values()
            .next()
            .map(|p| p.ring.clone())
            .unwrap_or_else(|| self.ring.clone());
        for p in assignments.values() {
            if !(Arc::ptr_eq(&p.ring, &out_ring) || *p.ring == *out_ring) {
                return Err(PolyError::RingMismatch);
            }
        }
        // Unassigned variables must exist in the output ring.
        let mut identity: Vec<Option<Poly>> = vec![None; self.ring.nvars()];
        for i in 0..self.ring.nvars() {
            if targets[i].is_none() {
                let name = self.ring.vars.name(i);
                identity[i] = Some(if Arc::ptr_eq(&out_ring, &self.ring) {
                    Poly::from_monomial(&out_ring, Monomial::var(i))
                } else {
                    match Poly::var(&out_ring, name) {
                        Ok(p) => p,
                        Err(_) => {
                            if self.terms.iter().any(|m| m.exp(i) > 0) {
                                return Err(PolyError::MissingVariable(name.to_string()));
                            }
                            Poly::zero(&out_ring)
                        }
                    }
                });
            }
        }
        let mul = |a: &Poly, b: &Poly| match max_degree {
            Some(d) => a.mul_truncated(b, d),
            None => a.try_mul(b),
        };
        let mut power_cache: HashMap<(usize, Exponent), Poly> = HashMap::new();
        let mut result = Poly::zero(&out_ring);
        for m in &self.terms {
            let mut term = Poly::v_power(&out_ring, m.v_exp());
            for i in 0..self.ring.nvars() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                let base = targets[i].unwrap_or_else(|| identity[i].as_ref().unwrap());
                let factor = match power_cache.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = match max_degree {
                            None => base.pow(e as u32)?,
                            Some(_) => {
                                let mut p = Poly::one(&out_ring);
                                for _ in 0..e {
                                    p = mul(&p, base)?;
                                }
                                p
                            }
                        };
                        power_cache.insert((i, e), p.clone());
                        p
                    }
                };
                term = mul(&term, &factor)?;
                if term.is_zero() {
                    break;
                }
            }
            result = result.try_add(&term)?;
        }
        Ok(result)
    }

    /// Weighted-degree audit with `v` counted at the table's `v_weight`.
    pub fn halved_degree(&self) -> Homogeneity {
        let vars = &self.ring.vars;
        let mut iter = self.terms.iter();
        let Some(first) = iter.next() else {
            return Homogeneity::Zero;
        };
        let d0 = vars.weighted_degree(first);
        for m in iter {
            let d = vars.weighted_degree(m);
            if d != d0 {
                return Homogeneity::Inhomogeneous {
                    first: *first,
                    first_degree: d0,
                    second: *m,
                    second_degree: d,
                };
            }
        }
        Homogeneity::Degree(d0)
    }

    /// Specializes `v = 1`. Two terms that differ only in their v-exponent would
    /// collide; that is reported rather than silently cancelled.
    pub fn forget_v(&self) -> Result<Self, PolyError> {
        let mut stripped: Vec<Monomial> = self.terms.iter().map(|m| m.with_v(0)).collect();
        stripped.sort_unstable_by(|a, b| self.ring.cmp_terms(b, a));
        if let Some(w) = stripped.windows(2).find(|w| w[0] == w[1]) {
            return Err(PolyError::VCollision(self.ring.fmt_monomial(&w[0])));
        }
        Ok(Self { ring: self.ring.clone(), terms: stripped })
    }

    pub fn has_v(&self) -> bool {
        self.terms.iter().any(|m| m.v_exp() != 0)
    }

    /// Re-expresses the polynomial in another ring, matching variables by name.
    pub fn transfer(&self, target: &Arc<PolyRing>) -> Result<Self, PolyError> {
        if Arc::ptr_eq(target, &self.ring) {
            return Ok(self.clone());
        }
        let src = &self.ring.vars;
        let mut map: Vec<Option<usize>> = Vec::with_capacity(src.len());
        for i in 0..src.len() {
            map.push(target.vars.index_of(src.name(i)));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for m in &self.terms {
            let mut out = Monomial::one().with_v(m.v_exp());
            for (i, slot) in map.iter().enumerate() {
                let e = m.exp(i);
                if e == 0 {
                    continue;
                }
                match slot {
                    Some(j) => out.set_exp(*j, e),
                    None => return Err(PolyError::MissingVariable(src.name(i).to_string())),
                }
            }
            terms.push(out);
        }
        Ok(Self::from_terms(target, terms))
    }

    /// True if no term involves any of the given variable indices.
    pub fn avoids(&self, vars: &[usize]) -> bool {
        self.terms.iter().all(|m| vars.iter().all(|&i| m.exp(i) == 0))
    }

    pub fn parse(text: &str, ring: &Arc<PolyRing>) -> Result<Self, ParseError> {
        parse::parse_poly(text, ring)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;

    /// Panics if the operands live in different rings.
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("adding polynomials from different rings")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;

    /// Panics on ring mismatch or exponent overflow.
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial multiplication failed")
    }
}

#[cfg(test)]
mod tests;
