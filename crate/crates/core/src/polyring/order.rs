use std::cmp::Ordering;
use std::fmt;

use super::{Monomial, PolyError, VarTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderKind {
    DegRevLex,
    /// Front block compared first (degrevlex), then the rest (degrevlex).
    BlockElimination { front: Vec<usize> },
}

/// Total multiplicative monomial order; ignores the v-exponent.
///
/// `precedence` lists variable indices from largest to smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
    blocks: Vec<Vec<usize>>,
}

fn degrevlex_on(vars: &[usize], a: &Monomial, b: &Monomial) -> Ordering {
    let da: u32 = vars.iter().map(|&i| a.exp(i) as u32).sum();
    let db: u32 = vars.iter().map(|&i| b.exp(i) as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    for &i in vars.iter().rev() {
        let (ea, eb) = (a.exp(i), b.exp(i));
        if ea != eb {
            // smaller exponent in the last differing variable wins
            return eb.cmp(&ea);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn degrevlex(precedence: Vec<usize>) -> Self {
        let blocks = vec![precedence.clone()];
        Self { kind: OrderKind::DegRevLex, precedence, blocks }
    }

    pub fn block_elimination(precedence: Vec<usize>, front: Vec<usize>) -> Self {
        let head: Vec<usize> = precedence.iter().copied().filter(|i| front.contains(i)).collect();
        let tail: Vec<usize> = precedence.iter().copied().filter(|i| !front.contains(i)).collect();
        let mut front_sorted = front;
        front_sorted.sort_unstable();
        Self {
            kind: OrderKind::BlockElimination { front: front_sorted },
            precedence,
            blocks: vec![head, tail],
        }
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn is_degree_compatible(&self) -> bool {
        matches!(self.kind, OrderKind::DegRevLex)
    }

    #[inline]
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        for block in &self.blocks {
            match degrevlex_on(block, a, b) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    pub(crate) fn check_against(&self, vars: &VarTable) -> Result<(), PolyError> {
        let n = vars.len();
        let mut seen = vec![false; n];
        for &i in &self.precedence {
            if i >= n || seen[i] {
                return Err(PolyError::InvalidOrder(format!(
                    "precedence is not a permutation of {n} variables"
                )));
            }
            seen[i] = true;
        }
        if self.precedence.len() != n {
            return Err(PolyError::InvalidOrder(format!(
                "precedence has {} entries for {n} variables",
                self.precedence.len()
            )));
        }
        if let OrderKind::BlockElimination { front } = &self.kind {
            if front.is_empty() || front.len() == n {
                return Err(PolyError::InvalidOrder("front block must be a proper nonempty subset".into()));
            }
        }
        Ok(())
    }

    /// Textual form, e.g. `degrevlex(T,x1,a)` or `elim(x1,y1|T,x2,a)`.
    pub fn spec(&self, vars: &VarTable) -> String {
        let names = |ids: &[usize]| ids.iter().map(|&i| vars.name(i)).collect::<Vec<_>>().join(",");
        match &self.kind {
            OrderKind::DegRevLex => format!("degrevlex({})", names(&self.precedence)),
            OrderKind::BlockElimination { .. } => {
                format!("elim({}|{})", names(&self.blocks[0]), names(&self.blocks[1]))
            }
        }
    }

    /// Parses the output of [`MonomialOrder::spec`]. The shorthands `degrevlex`
    /// and `elim(x1,y1)` use `default_precedence` for the unspecified part.
    pub fn parse_spec(text: &str, vars: &VarTable, default_precedence: &[usize]) -> Result<Self, PolyError> {
        let text = text.trim();
        let bad = || PolyError::InvalidOrder(format!("cannot parse order `{text}`"));
        let lookup = |list: &str| -> Result<Vec<usize>, PolyError> {
            list.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| vars.index_of(s).ok_or_else(|| PolyError::UnknownVariable(s.to_string())))
                .collect()
        };
        let (head, args) = match text.find('(') {
            Some(p) if text.ends_with(')') => (&text[..p], Some(&text[p + 1..text.len() - 1])),
            Some(_) => return Err(bad()),
            None => (text, None),
        };
        let order = match (head, args) {
            ("degrevlex", None) => Self::degrevlex(default_precedence.to_vec()),
            ("degrevlex", Some(list)) => Self::degrevlex(lookup(list)?),
            ("elim", Some(list)) => match list.split_once('|') {
                Some((front, rest)) => {
                    let front = lookup(front)?;
                    let mut prec = front.clone();
                    prec.extend(lookup(rest)?);
                    Self::block_elimination(prec, front)
                }
                None => Self::block_elimination(default_precedence.to_vec(), lookup(list)?),
            },
            _ => return Err(bad()),
        };
        order.check_against(vars)?;
        Ok(order)
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderKind::DegRevLex => f.write_str("degrevlex"),
            OrderKind::BlockElimination { .. } => f.write_str("elim"),
        }
    }
}
