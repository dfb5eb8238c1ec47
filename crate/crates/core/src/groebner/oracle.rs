//! Quotient dimension by plain linear algebra, without Gröbner bases.
//!
//! All multiples `m·r` of the relations up to a working degree are put into
//! an F₂ matrix whose columns are monomials sorted descending in degrevlex.
//! After row reduction the pivot columns are leading monomials of ideal
//! elements; the remaining monomials up to the bound are counted.

use std::collections::HashMap;

use thiserror::Error;

use crate::polyring::{Monomial, MonomialOrder, Poly, PolyError, MAX_VARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("no relations given")]
    EmptyInput,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("degree bound {bound} too small: {low} standard monomials up to it, {high} up to the next degree")]
    Indeterminate { bound: u32, low: usize, high: usize },
    #[error("working degree {0} needs too many columns")]
    TooLarge(u32),
}

const MAX_COLUMNS: usize = 200_000;

fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(i: usize, nvars: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<Monomial>) {
        if i == nvars {
            out.push(Monomial::from_exponents(&cur[..nvars]));
            return;
        }
        for e in 0..=left {
            cur[i] = e as u16;
            rec(i + 1, nvars, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, nvars, degree, &mut [0; MAX_VARS], &mut out);
    out
}

/// Row words from `offset` on; everything left of the pivot column is zero.
struct Pivot {
    offset: usize,
    words: Vec<u64>,
}

fn count_standard(relations: &[Poly], bound: u32, working: u32) -> Result<usize, OracleError> {
    let ring = relations[0].ring();
    let nvars = ring.nvars();
    let order = if ring.order().is_degree_compatible() {
        ring.order().clone()
    } else {
        MonomialOrder::degrevlex(ring.order().precedence().to_vec())
    };
    let mut columns = monomials_up_to(nvars, working);
    if columns.len() > MAX_COLUMNS {
        return Err(OracleError::TooLarge(working));
    }
    columns.sort_unstable_by(|a, b| order.compare(b, a));
    let index: HashMap<Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let nwords = columns.len().div_ceil(64);
    let mut pivots: Vec<Option<Pivot>> = (0..columns.len()).map(|_| None).collect();

    let stripped: Vec<Poly> = relations.iter().map(Poly::forget_v).collect::<Result<_, _>>()?;
    for r in stripped.iter().filter(|r| !r.is_zero()) {
        let rdeg = r.total_degree().unwrap_or(0);
        if rdeg > working {
            continue;
        }
        for m in monomials_up_to(nvars, working - rdeg) {
            let mut row = vec![0u64; nwords];
            for t in r.terms() {
                let c = index[&t.checked_mul(&m).expect("degree-bounded product")];
                row[c / 64] ^= 1 << (c % 64);
            }
            // reduce against existing pivots, leftmost column first
            let mut w = 0;
            loop {
                while w < nwords && row[w] == 0 {
                    w += 1;
                }
                if w == nwords {
                    break;
                }
                let c = w * 64 + row[w].trailing_zeros() as usize;
                match &pivots[c] {
                    Some(p) => {
                        for (dst, src) in row[p.offset..].iter_mut().zip(&p.words) {
                            *dst ^= *src;
                        }
                    }
                    None => {
                        let offset = c / 64;
                        pivots[c] = Some(Pivot { offset, words: row[offset..].to_vec() });
                        break;
                    }
                }
            }
        }
    }
    Ok(columns
        .iter()
        .enumerate()
        .filter(|(c, m)| m.total_degree() <= bound && pivots[*c].is_none())
        .count())
}

/// Dimension of the quotient with an explicit working-degree slack.
pub fn dimension_oracle_with_slack(relations: &[Poly], degree_bound: u32, slack: u32) -> Result<usize, OracleError> {
    if relations.is_empty() {
        return Err(OracleError::EmptyInput);
    }
    let low = count_standard(relations, degree_bound, degree_bound + slack)?;
    let high = count_standard(relations, degree_bound + 1, degree_bound + 1 + slack)?;
    if low != high {
        return Err(OracleError::Indeterminate { bound: degree_bound, low, high });
    }
    Ok(low)
}

/// Largest slack tried by [`dimension_oracle`] beyond the largest relation degree.
const MAX_EXTRA_SLACK: u32 = 6;

/// Dimension of the quotient, assuming every standard monomial has degree at
/// most `degree_bound`.
///
/// The working degree starts at the bound plus the largest relation degree
/// and grows until two consecutive working degrees give the same count; the
/// result is then confirmed at `degree_bound + 1`.
pub fn dimension_oracle(relations: &[Poly], degree_bound: u32) -> Result<usize, OracleError> {
    let base = relations
        .iter()
        .filter_map(Poly::total_degree)
        .max()
        .ok_or(OracleError::EmptyInput)?
        .max(1);
    let mut slack = base;
    let mut prev = count_standard(relations, degree_bound, degree_bound + slack)?;
    loop {
        let next = count_standard(relations, degree_bound, degree_bound + slack + 1)?;
        if next == prev {
            break;
        }
        if slack >= base + MAX_EXTRA_SLACK {
            return Err(OracleError::Indeterminate { bound: degree_bound, low: next, high: prev });
        }
        slack += 1;
        prev = next;
    }
    dimension_oracle_with_slack(relations, degree_bound, slack)
}
