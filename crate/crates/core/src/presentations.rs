//! Generators of the relation ideal for `K(s)^*(BG)`, `G = G38..G41`.
//!
//! The ring is `F₂[a, b, c, x1, x2, y1, y2, T]` with `x1`, `y1` adjoined
//! together with their implicit defining equations. Every relation is
//! homogeneous once `v` gets halved degree `-(2^s - 1)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{Homogeneity, MonomialOrder, ParseError, Poly, PolyError, PolyRing, VarTable};

/// Variable table order; this is also the storage order of exponents.
pub const VAR_NAMES: [&str; 8] = ["a", "b", "c", "x1", "x2", "y1", "y2", "T"];
pub const HALVED_DEGREES: [i64; 8] = [1, 1, 1, 1, 2, 1, 2, 2];
/// Default degrevlex precedence, largest first.
pub const DEFAULT_PRECEDENCE: [&str; 8] = ["T", "x1", "y1", "x2", "y2", "a", "b", "c"];

/// Stable relation identifiers, in construction order.
pub const RELATION_NAMES: [&str; 17] = [
    "nil_a", "nil_b", "nil_c", "c_x", "c_y", "a_x", "b_y", "cross_bx", "cross_ay", "t_quad", "t_a", "t_b", "ct",
    "pow_x2", "pow_y2", "def_x1", "def_y1",
];

/// Largest height for which exponents such as `x2^(2^s)` fit comfortably.
pub const MAX_HEIGHT: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("height s must be between 1 and {MAX_HEIGHT}, got {0}")]
    InvalidHeight(u32),
    #[error("unknown group `{0}` (expected one of G38, G39, G40, G41)")]
    UnknownGroup(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("presentation file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("presentation file line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: ParseError,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupTag {
    G38,
    G39,
    G40,
    G41,
}

impl GroupTag {
    pub const ALL: [GroupTag; 4] = [GroupTag::G38, GroupTag::G39, GroupTag::G40, GroupTag::G41];
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GroupTag::G38 => "G38",
            GroupTag::G39 => "G39",
            GroupTag::G40 => "G40",
            GroupTag::G41 => "G41",
        };
        f.write_str(s)
    }
}

impl FromStr for GroupTag {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "G38" => Ok(GroupTag::G38),
            "G39" => Ok(GroupTag::G39),
            "G40" => Ok(GroupTag::G40),
            "G41" => Ok(GroupTag::G41),
            _ => Err(PresentationError::UnknownGroup(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Full,
    /// `c` specialized to zero and removed from the variables.
    RestrictedC0,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedRelation {
    pub name: String,
    pub poly: Poly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub group: GroupTag,
    pub s: u32,
    pub variant: Variant,
    pub ring: Arc<PolyRing>,
    pub relations: Vec<NamedRelation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditEntry {
    pub name: String,
    pub homogeneity: Homogeneity,
}

impl AuditEntry {
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self.homogeneity, Homogeneity::Inhomogeneous { .. })
    }
}

/// Halved degree of `v` at height `s`.
pub fn v_weight(s: u32) -> i64 {
    -((1i64 << s) - 1)
}

/// Ring over [`VAR_NAMES`] ordered by degrevlex with [`DEFAULT_PRECEDENCE`].
pub fn standard_ring(s: u32) -> Result<Arc<PolyRing>, PolyError> {
    let vars = VarTable::new(VAR_NAMES, HALVED_DEGREES, v_weight(s))?;
    default_order_ring(vars)
}

/// Degrevlex ring with [`DEFAULT_PRECEDENCE`] restricted to the table's variables.
pub fn default_order_ring(vars: VarTable) -> Result<Arc<PolyRing>, PolyError> {
    let precedence = default_precedence(&vars);
    PolyRing::new(vars, MonomialOrder::degrevlex(precedence))
}

pub fn default_precedence(vars: &VarTable) -> Vec<usize> {
    DEFAULT_PRECEDENCE.iter().filter_map(|n| vars.index_of(n)).collect()
}

/// Term builder over the standard ring.
struct Builder {
    ring: Arc<PolyRing>,
    s: u32,
}

impl Builder {
    fn var(&self, name: &str) -> Poly {
        Poly::var(&self.ring, name).expect("standard variable")
    }

    fn v(&self, k: i32) -> Poly {
        Poly::v_power(&self.ring, k)
    }

    fn q(&self) -> u32 {
        1 << self.s
    }

    fn pow(&self, p: &Poly, e: u32) -> Result<Poly, PolyError> {
        p.pow(e)
    }

    fn sum(&self, parts: &[&Poly]) -> Poly {
        parts.iter().fold(Poly::zero(&self.ring), |acc, p| &acc + p)
    }

    /// `u + first + v Σ_{i=1}^{s-1} u^{2^s - 2^i} second^{2^{i-1}}`.
    fn shift(&self, u: &Poly, first: &str, second: &str) -> Result<Poly, PolyError> {
        let mut acc = u + &self.var(first);
        let second = self.var(second);
        for i in 1..self.s {
            let term = &self.pow(u, self.q() - (1 << i))? * &self.pow(&second, 1 << (i - 1))?;
            acc = &acc + &(&self.v(1) * &term);
        }
        Ok(acc)
    }
}

/// The 17 named generators of the relation ideal.
pub fn build(group: GroupTag, s: u32) -> Result<Presentation, PresentationError> {
    if s == 0 || s > MAX_HEIGHT {
        return Err(PresentationError::InvalidHeight(s));
    }
    let ring = standard_ring(s)?;
    let bld = Builder { ring: ring.clone(), s };
    let (a, b, c) = (bld.var("a"), bld.var("b"), bld.var("c"));
    let (x1, x2, y1, y2, t) = (bld.var("x1"), bld.var("x2"), bld.var("y1"), bld.var("y2"), bld.var("T"));
    let q = bld.q();
    let h = q / 2;
    let v = |k| bld.v(k);

    let xa = bld.shift(&a, "x1", "x2")?;
    let xc = bld.shift(&c, "x1", "x2")?;
    let yb = bld.shift(&b, "y1", "y2")?;
    let yc = bld.shift(&c, "y1", "y2")?;
    let a_top = a.pow(q - 1)?;
    let b_top = b.pow(q - 1)?;
    let abc_term = &v(1) * &(&(&a * &b) * &c.pow(q - 1)?);

    let pow_x2_tail = match group {
        GroupTag::G38 => &c.pow(2)? + &(&a * &c),
        _ => bld.sum(&[&a.pow(2)?, &b.pow(2)?, &(&a * &c), &abc_term]),
    };
    let pow_y2_tail = match group {
        GroupTag::G38 | GroupTag::G41 => bld.sum(&[&a.pow(2)?, &(&b * &c), &abc_term]),
        GroupTag::G39 => &b.pow(2)? + &(&b * &c),
        GroupTag::G40 => bld.sum(&[&b.pow(2)?, &c.pow(2)?, &(&b * &c)]),
    };
    let def_x1_tail = match group {
        GroupTag::G38 => a.clone(),
        _ => bld.sum(&[&b, &c, &(&v(1) * &(&b * &c).pow(h)?)]),
    };
    let def_y1_tail = match group {
        GroupTag::G39 => c.clone(),
        GroupTag::G40 => Poly::zero(&ring),
        GroupTag::G38 | GroupTag::G41 => {
            let sym = bld.sum(&[&(&a * &b), &(&b * &c), &(&a * &c)]);
            bld.sum(&[&a, &b, &c, &(&v(1) * &sym.pow(h)?)])
        }
    };
    // x1 = v (x2 + v x1 x2^{2^{s-1}})^{2^{s-1}} + tail, moved to one side.
    let implicit = |lhs: &Poly, second: &Poly| -> Result<Poly, PolyError> {
        let inner = second + &(&v(1) * &(lhs * &second.pow(h)?));
        Ok(&(&v(1) * &inner.frobenius(s - 1)?) + lhs)
    };

    let polys: [Poly; 17] = [
        a.pow(q)?,
        b.pow(q)?,
        c.pow(q)?,
        &c * &xc,
        &c * &yc,
        &a * &xa,
        &b * &yb,
        &(&xc * &yb) + &(&v(1) * &(&b_top * &t)),
        &(&yc * &xa) + &(&v(1) * &(&a_top * &t)),
        bld.sum(&[&t.pow(2)?, &(&t * &(&x1 * &y1)), &(&(&x2 * &y1) * &yc), &(&(&x1 * &y2) * &xc)]),
        &(&t * &xa) + &(&v(1) * &(&(&a_top * &x2) * &(&c + &y1))),
        &(&t * &yb) + &(&v(1) * &(&(&b_top * &y2) * &(&c + &x1))),
        &c * &t,
        &(&v(2) * &x2.pow(q)?) + &pow_x2_tail,
        &(&v(2) * &y2.pow(q)?) + &pow_y2_tail,
        &implicit(&x1, &x2)? + &def_x1_tail,
        &implicit(&y1, &y2)? + &def_y1_tail,
    ];
    let relations = RELATION_NAMES
        .iter()
        .zip(polys)
        .map(|(name, poly)| NamedRelation { name: name.to_string(), poly })
        .collect();
    Ok(Presentation { group, s, variant: Variant::Full, ring, relations })
}

impl Presentation {
    pub fn relation(&self, name: &str) -> Option<&Poly> {
        self.relations.iter().find(|r| r.name == name).map(|r| &r.poly)
    }

    pub fn polys(&self) -> Vec<Poly> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }

    /// Sets `c = 0`, drops vanishing relations and removes `c` from the variables.
    pub fn restrict_c0(&self) -> Result<Presentation, PresentationError> {
        let vars = self.ring.vars().without(&["c"])?;
        let ring = default_order_ring(vars)?;
        let zero = HashMap::from([("c".to_string(), Poly::zero(&self.ring))]);
        let mut relations = Vec::new();
        for r in &self.relations {
            let p = r.poly.substitute(&zero)?;
            if !p.is_zero() {
                relations.push(NamedRelation { name: r.name.clone(), poly: p.transfer(&ring)? });
            }
        }
        Ok(Presentation { group: self.group, s: self.s, variant: Variant::RestrictedC0, ring, relations })
    }

    /// Specializes `v = 1` in every relation.
    pub fn forget_v(&self) -> Result<Presentation, PresentationError> {
        let relations = self
            .relations
            .iter()
            .map(|r| Ok(NamedRelation { name: r.name.clone(), poly: r.poly.forget_v()? }))
            .collect::<Result<_, PolyError>>()?;
        Ok(Presentation { relations, ..self.clone() })
    }

    pub fn homogeneity_audit(&self) -> Vec<AuditEntry> {
        self.relations
            .iter()
            .map(|r| AuditEntry { name: r.name.clone(), homogeneity: r.poly.halved_degree() })
            .collect()
    }

    /// Text interchange form: headers, then one `name: polynomial` line per relation.
    pub fn dump(&self) -> String {
        let mut out = format!("group={}\ns={}\nvweight={}\n", self.group, self.s, self.ring.vars().v_weight());
        if self.variant == Variant::RestrictedC0 {
            out.push_str("variant=c0\n");
        }
        for r in &self.relations {
            out.push_str(&format!("{}: {}\n", r.name, r.poly));
        }
        out
    }

    pub fn load(text: &str) -> Result<Presentation, PresentationError> {
        let mut group = None;
        let mut s = None;
        let mut vweight = None;
        let mut variant = Variant::Full;
        let mut body = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let format_err = |message: String| PresentationError::Format { line: line_no, message };
            if let Some((k, val)) = trimmed.split_once('=').filter(|(k, _)| !k.contains(':')) {
                let val = val.trim();
                match k.trim() {
                    "group" => group = Some(val.parse::<GroupTag>()?),
                    "s" => s = Some(val.parse::<u32>().map_err(|e| format_err(format!("bad s: {e}")))?),
                    "vweight" => {
                        vweight = Some(val.parse::<i64>().map_err(|e| format_err(format!("bad vweight: {e}")))?)
                    }
                    "variant" if val == "c0" => variant = Variant::RestrictedC0,
                    other => return Err(format_err(format!("unknown header `{other}`"))),
                }
            } else if let Some((name, poly)) = trimmed.split_once(':') {
                body.push((line_no, name.trim().to_string(), poly.to_string()));
            } else {
                return Err(format_err("expected `key=value` or `name: polynomial`".into()));
            }
        }
        let missing = |what: &str| PresentationError::Format { line: 0, message: format!("missing `{what}=` header") };
        let group = group.ok_or_else(|| missing("group"))?;
        let s = s.ok_or_else(|| missing("s"))?;
        if s == 0 || s > MAX_HEIGHT {
            return Err(PresentationError::InvalidHeight(s));
        }
        let vweight = vweight.ok_or_else(|| missing("vweight"))?;
        if vweight != v_weight(s) {
            return Err(PresentationError::Format {
                line: 0,
                message: format!("vweight {vweight} inconsistent with s={s}"),
            });
        }
        let mut ring = standard_ring(s)?;
        if variant == Variant::RestrictedC0 {
            ring = default_order_ring(ring.vars().without(&["c"])?)?;
        }
        let relations = body
            .into_iter()
            .map(|(line, name, text)| {
                let poly = Poly::parse(&text, &ring).map_err(|source| PresentationError::Parse { line, source })?;
                Ok(NamedRelation { name, poly })
            })
            .collect::<Result<_, PresentationError>>()?;
        Ok(Presentation { group, s, variant, ring, relations })
    }
}
