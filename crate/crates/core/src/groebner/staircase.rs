use std::collections::HashSet;

use super::{GbError, ReducedGB};
use crate::polyring::Monomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaircaseStatus {
    /// A whole degree level was empty, so nothing lies above it.
    Certified,
    /// Some variable has no pure power among the leading terms.
    PossiblyInfinite,
    /// Pure powers exist for every variable but the cap was too low to close the staircase.
    Indeterminate,
}

/// Standard monomials (not divisible by any leading term) up to a degree cap.
#[derive(Debug, Clone)]
pub struct Staircase {
    monomials: Vec<Monomial>,
    status: StaircaseStatus,
    cap: u32,
}

/// Degree at which the staircase is guaranteed to have closed, if every
/// variable has a pure power `x_i^{k_i}` among the leading terms.
pub(super) fn certificate_degree(gb: &ReducedGB) -> Option<u32> {
    let n = gb.ring().nvars();
    let mut min_power: Vec<Option<u32>> = vec![None; n];
    for lt in gb.leading_terms() {
        if lt == Monomial::one() {
            return Some(1);
        }
        if let Some(i) = lt.pure_power_var() {
            let k = lt.exp(i) as u32;
            min_power[i] = Some(min_power[i].map_or(k, |old| old.min(k)));
        }
    }
    let mut total = 0u32;
    for k in min_power {
        total += k? - 1;
    }
    Some(total + 1)
}

impl Staircase {
    pub(super) fn enumerate(gb: &ReducedGB, cap: u32) -> Self {
        let n = gb.ring().nvars();
        let lts = gb.leading_terms();
        let standard = |m: &Monomial| !lts.iter().any(|lt| lt.divides(m));
        let mut monomials = Vec::new();
        let mut level: Vec<Monomial> = if standard(&Monomial::one()) { vec![Monomial::one()] } else { Vec::new() };
        let mut status = None;
        for _ in 1..=cap {
            if level.is_empty() {
                status = Some(StaircaseStatus::Certified);
                break;
            }
            monomials.extend_from_slice(&level);
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for m in &level {
                for i in 0..n {
                    let mut up = *m;
                    up.set_exp(i, m.exp(i) + 1);
                    if seen.insert(up) && standard(&up) {
                        next.push(up);
                    }
                }
            }
            level = next;
        }
        let status = match status {
            Some(s) => s,
            None if level.is_empty() => StaircaseStatus::Certified,
            None => {
                monomials.extend_from_slice(&level);
                let has_pure_power = |i: usize| lts.iter().any(|lt| lt.pure_power_var() == Some(i));
                if (0..n).all(has_pure_power) {
                    StaircaseStatus::Indeterminate
                } else {
                    StaircaseStatus::PossiblyInfinite
                }
            }
        };
        Self { monomials, status, cap }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn status(&self) -> StaircaseStatus {
        self.status
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.monomials.iter().map(Monomial::total_degree).max()
    }

    pub fn dimension(&self) -> Result<usize, GbError> {
        match self.status {
            StaircaseStatus::Certified => Ok(self.monomials.len()),
            StaircaseStatus::PossiblyInfinite => Err(GbError::Infinite),
            StaircaseStatus::Indeterminate => Err(GbError::CapReached { cap: self.cap }),
        }
    }
}
