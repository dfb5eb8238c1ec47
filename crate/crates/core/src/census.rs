//! Rank bookkeeping in exact integer arithmetic.
//!
//! Each basis family is a monomial label with index ranges whose bounds are
//! closed forms in `s`. The family size is the product of the range lengths.
//! Where a cardinality was printed alongside the family, it is kept and
//! compared with the range count.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::presentations::GroupTag;

/// `2^k`.
fn p2(k: u32) -> BigUint {
    BigUint::one() << k
}

/// `(16^s + 2·8^s − 4^s) / 2`.
pub fn chi(s: u32) -> BigUint {
    (p2(4 * s) + p2(3 * s + 1) - p2(2 * s)) >> 1
}

/// `(16^s + 4^s) / 2`.
pub fn chi_restriction(s: u32) -> BigUint {
    (p2(4 * s) + p2(2 * s)) >> 1
}

/// `(16^s − 4^s)/2 + 4^s · 2^s = χ(s)`: the invariant part plus the trivial
/// part tensored with `F₂[c]/c^{2^s}`.
pub fn reassembly_identity(s: u32) -> bool {
    let trivial = p2(2 * s);
    let invariant = chi_restriction(s) - &trivial;
    invariant + trivial * p2(s) == chi(s)
}

/// One index `lower <= i < upper`.
#[derive(Clone, Copy)]
pub struct IndexRange {
    pub index: &'static str,
    pub lower: u32,
    pub upper_text: &'static str,
    pub upper: fn(u32) -> BigUint,
}

impl IndexRange {
    pub fn len(&self, s: u32) -> BigUint {
        let upper = (self.upper)(s);
        let lower = BigUint::from(self.lower);
        if upper > lower {
            upper - lower
        } else {
            BigUint::default()
        }
    }

    pub fn is_empty(&self, s: u32) -> bool {
        self.len(s) == BigUint::default()
    }
}

impl fmt::Display for IndexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lower == 0 {
            write!(f, "{}<{}", self.index, self.upper_text)
        } else {
            write!(f, "{}<{}<{}", self.lower - 1, self.index, self.upper_text)
        }
    }
}

#[derive(Clone)]
pub struct BasisFamily {
    pub label: &'static str,
    pub ranges: Vec<IndexRange>,
    pub stated_text: Option<&'static str>,
    pub stated: Option<fn(u32) -> BigUint>,
}

impl BasisFamily {
    pub fn range_count(&self, s: u32) -> BigUint {
        self.ranges.iter().map(|r| r.len(s)).product()
    }
}

impl fmt::Debug for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for BasisFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ranges: Vec<String> = self.ranges.iter().map(ToString::to_string).collect();
        write!(f, "{{{} | {}}}", self.label, ranges.join(", "))
    }
}

fn range(index: &'static str, lower: u32, upper_text: &'static str, upper: fn(u32) -> BigUint) -> IndexRange {
    IndexRange { index, lower, upper_text, upper }
}

fn family(
    label: &'static str,
    ranges: Vec<IndexRange>,
    stated_text: &'static str,
    stated: fn(u32) -> BigUint,
) -> BasisFamily {
    BasisFamily { label, ranges, stated_text: Some(stated_text), stated: Some(stated) }
}

fn abelian_families(first: &'static str, second: &'static str) -> Vec<BasisFamily> {
    vec![
        family(
            "x^i*y^j",
            vec![range("i", 0, "2^(2s-1)", |s| p2(2 * s - 1)), range("j", 0, "2^(2s-1)", |s| p2(2 * s - 1))],
            "2^(4s-2)",
            |s| p2(4 * s - 2),
        ),
        family(
            first,
            vec![range("i", 0, "2^s", p2), range("j", 0, "2^(s-1)", |s| p2(s - 1))],
            "2^(2s-1)",
            |s| p2(2 * s - 1),
        ),
        family(
            second,
            vec![range("i", 0, "2^(2s-1)", |s| p2(2 * s - 1)), range("j", 0, "2^(s-1)", |s| p2(s - 1))],
            "2^(3s-2)",
            |s| p2(3 * s - 2),
        ),
        family(
            "T*x^i*y^j",
            vec![
                range("i", 0, "2^(2s-1)", |s| p2(2 * s - 1)),
                range("j", 0, "2^(s-1)(2^s-1)", |s| p2(s - 1) * (p2(s) - 1u32)),
            ],
            "2^(3s-2)(2^s-1)",
            |s| p2(3 * s - 2) * (p2(s) - 1u32),
        ),
    ]
}

/// The listed basis of the restriction ring (trivial part first for `G38`).
pub fn families(group: GroupTag) -> Vec<BasisFamily> {
    match group {
        GroupTag::G39 | GroupTag::G40 => abelian_families("a*x^i*y^j", "b*x^i*y^j"),
        GroupTag::G41 => abelian_families("b*x^i*y^j", "a*x^i*y^j"),
        GroupTag::G38 => vec![
            family("x^i*y^j", vec![range("i", 0, "2^s", p2), range("j", 0, "2^s", p2)], "4^s", |s| p2(2 * s)),
            family(
                "w^i*x^j*y^k",
                vec![range("i", 1, "2^s", p2), range("j", 0, "2^s", p2), range("k", 0, "2^(s-1)", |s| p2(s - 1))],
                "(2^s-1)2^s2^(s-1)",
                |s| (p2(s) - 1u32) * p2(2 * s - 1),
            ),
            family(
                "w^i*o^j*x^k*y^l",
                vec![
                    range("i", 0, "2^s", p2),
                    range("j", 1, "2^s", p2),
                    range("k", 0, "2^(s-1)", |s| p2(s - 1)),
                    range("l", 0, "2^(s-1)", |s| p2(s - 1)),
                ],
                "2^s(2^s-1)2^s2^(s-1)",
                |s| (p2(s) - 1u32) * p2(3 * s - 1),
            ),
            family(
                "w^i*o^j*x^k*y^l*T",
                vec![
                    range("i", 0, "2^s", p2),
                    range("j", 0, "2^s-1", |s| p2(s) - 1u32),
                    range("k", 0, "2^(s-1)", |s| p2(s - 1)),
                    range("l", 0, "2^(s-1)", |s| p2(s - 1)),
                ],
                "2^s(2^s-1)2^s2^(s-1)",
                |s| (p2(s) - 1u32) * p2(3 * s - 1),
            ),
        ],
    }
}

/// Serialization of big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(de)?;
        text.parse().map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(n: &Option<BigUint>, ser: S) -> Result<S::Ok, S::Error> {
            match n {
                Some(n) => ser.serialize_some(&n.to_string()),
                None => ser.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigUint>, D::Error> {
            let text = Option::<String>::deserialize(de)?;
            text.map(|t| t.parse().map_err(D::Error::custom)).transpose()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyCount {
    pub family: String,
    #[serde(with = "decimal")]
    pub range_count: BigUint,
    #[serde(with = "decimal::option")]
    pub stated: Option<BigUint>,
    pub stated_text: Option<String>,
    pub mismatch: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTotals {
    pub group: GroupTag,
    pub s: u32,
    pub families: Vec<FamilyCount>,
    #[serde(with = "decimal")]
    pub total: BigUint,
    #[serde(with = "decimal")]
    pub chi_restriction: BigUint,
    pub total_matches: bool,
}

impl FamilyTotals {
    pub fn mismatches(&self) -> impl Iterator<Item = &FamilyCount> {
        self.families.iter().filter(|f| f.mismatch)
    }
}

pub fn family_totals(group: GroupTag, s: u32) -> FamilyTotals {
    assert!(s >= 1, "height must be positive");
    let families: Vec<FamilyCount> = families(group)
        .iter()
        .map(|f| {
            let range_count = f.range_count(s);
            let stated = f.stated.map(|g| g(s));
            FamilyCount {
                family: f.to_string(),
                mismatch: stated.as_ref().is_some_and(|n| *n != range_count),
                range_count,
                stated,
                stated_text: f.stated_text.map(str::to_string),
            }
        })
        .collect();
    let total: BigUint = families.iter().map(|f| &f.range_count).sum();
    let chi_restriction = chi_restriction(s);
    FamilyTotals { group, s, total_matches: total == chi_restriction, families, total, chi_restriction }
}

/// Rank identities at one height, across all groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRow {
    pub s: u32,
    #[serde(with = "decimal")]
    pub chi: BigUint,
    #[serde(with = "decimal")]
    pub chi_restriction: BigUint,
    pub reassembly_ok: bool,
    pub groups: Vec<FamilyTotals>,
}

impl CensusRow {
    /// Totals and reassembly; printed-cardinality mismatches are findings, not failures.
    pub fn identities_hold(&self) -> bool {
        self.reassembly_ok && self.groups.iter().all(|g| g.total_matches)
    }
}

pub fn census_row(s: u32) -> CensusRow {
    CensusRow {
        s,
        chi: chi(s),
        chi_restriction: chi_restriction(s),
        reassembly_ok: reassembly_identity(s),
        groups: GroupTag::ALL.iter().map(|&g| family_totals(g, s)).collect(),
    }
}

/// Census for `1..=s_max`.
pub fn census(s_max: u32) -> Vec<CensusRow> {
    (1..=s_max).map(census_row).collect()
}

/// Identities for one group at one height, as used by the verification report.
pub fn census_ok(group: GroupTag, s: u32) -> bool {
    reassembly_identity(s) && family_totals(group, s).total_matches
}
