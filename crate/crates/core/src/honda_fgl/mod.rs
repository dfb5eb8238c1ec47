//! The height-`s` Honda formal group law at the prime 2.
//!
//! Over the rationals the law is `F(x, y) = exp(log x + log y)` with
//! `log x = Σ_i x^{2^{si}} / 2^i`. Every coefficient turns out to be
//! 2-integral, so `F` reduces mod 2; the reduction is graded once the
//! degree-`d` coefficient is given the factor `v^{(d-1)/(2^s-1)}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyring::{Monomial, Poly, PolyError, PolyRing, VarTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FglError {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),
    #[error("coefficient {value} of x^{}*y^{} is not 2-integral", .exponents.0, .exponents.1)]
    NotTwoIntegral { exponents: (u32, u32), value: String },
    #[error("odd coefficient in degree {degree}, which carries no integral power of v")]
    Ungraded { degree: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Truncated power series in one or two variables with rational coefficients.
///
/// Univariate series use exponent pairs `(d, 0)`. Zero coefficients are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    truncation: u32,
    coefficients: BTreeMap<(u32, u32), BigRational>,
}

impl RationalSeries {
    pub fn zero(truncation: u32) -> Self {
        Self { truncation, coefficients: BTreeMap::new() }
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn coefficient(&self, i: u32, j: u32) -> BigRational {
        self.coefficients.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> {
        self.coefficients.iter().map(|(k, v)| (*k, v))
    }

    fn add_term(&mut self, exps: (u32, u32), c: BigRational) {
        if exps.0 + exps.1 > self.truncation || c.is_zero() {
            return;
        }
        let slot = self.coefficients.entry(exps).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coefficients.remove(&exps);
        }
    }

    fn set(&mut self, exps: (u32, u32), c: BigRational) {
        self.coefficients.remove(&exps);
        self.add_term(exps, c);
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coefficients {
            out.add_term(k, c.clone());
        }
        out
    }

    fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.truncation);
        for (&k, a) in &self.coefficients {
            out.add_term(k, a * c);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.truncation.min(other.truncation));
        for (&(i, j), a) in &self.coefficients {
            for (&(k, l), b) in &other.coefficients {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }

    /// `Σ_d c_d · inner^d` for a univariate `self` and `inner` without constant term.
    fn compose(&self, inner: &Self) -> Self {
        let n = self.truncation.min(inner.truncation);
        let mut out = Self::zero(n);
        let mut power = Self::zero(n);
        power.add_term((0, 0), BigRational::one());
        for d in 1..=n {
            power = power.mul(inner);
            if power.coefficients.is_empty() {
                break;
            }
            let c = self.coefficient(d, 0);
            if !c.is_zero() {
                out = out.add(&power.scale(&c));
            }
        }
        out
    }

    /// Swaps the two variables.
    fn swapped(&self) -> Self {
        let mut out = Self::zero(self.truncation);
        for (&(i, j), c) in &self.coefficients {
            out.add_term((j, i), c.clone());
        }
        out
    }

    pub fn is_two_integral(&self) -> bool {
        self.coefficients.values().all(|c| c.denom().is_odd())
    }
}

fn check_height(s: u32) -> Result<(), FglError> {
    if s == 0 || s > 8 {
        return Err(FglError::InvalidArguments(format!("height {s} outside 1..=8")));
    }
    Ok(())
}

/// `Σ_{i ≥ 0} x^{2^{si}} / 2^i` up to degree `n`.
pub fn honda_log(s: u32, n: u32) -> Result<RationalSeries, FglError> {
    check_height(s)?;
    if n == 0 {
        return Err(FglError::InvalidArguments("truncation must be at least 1".into()));
    }
    let mut out = RationalSeries::zero(n);
    let mut i = 0u32;
    while let Some(d) = 1u64.checked_shl(s * i).filter(|&d| d <= n as u64) {
        let denom = BigInt::one() << i;
        out.add_term((d as u32, 0), BigRational::new(BigInt::one(), denom));
        i += 1;
    }
    Ok(out)
}

/// Compositional inverse of [`honda_log`], solved one degree at a time.
///
/// `exp` itself has even denominators (the `x^2` coefficient is `-1/2`);
/// only the composites `exp(log x + log y)` and `exp(2 log x)` are integral.
pub fn honda_exp(s: u32, n: u32) -> Result<RationalSeries, FglError> {
    let log = honda_log(s, n)?;
    let mut exp = RationalSeries::zero(n);
    exp.add_term((1, 0), BigRational::one());
    for d in 2..=n {
        // log(exp(x)) must have no x^d term; exp's own x^d enters linearly.
        let mut probe = exp.clone();
        probe.truncation = d;
        let mut log_d = log.clone();
        log_d.truncation = d;
        let c = log_d.compose(&probe).coefficient(d, 0);
        exp.set((d, 0), -c);
    }
    Ok(exp)
}

/// The law and its 2-series reduced mod 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FglMod2 {
    pub s: u32,
    pub truncation: u32,
    /// In variables `x, y`, each of halved degree 1.
    pub law: Poly,
    /// In the variable `x`.
    pub two_series: Poly,
}

fn series_ring(s: u32, names: &[&str]) -> Result<Arc<PolyRing>, FglError> {
    let v_weight = -((1i64 << s) - 1);
    let vars = VarTable::new(names.iter().copied(), names.iter().map(|_| 1), v_weight)?;
    Ok(PolyRing::degrevlex(vars))
}

/// Reduces a 2-integral series mod 2, attaching `v^{(d-1)/(2^s-1)}` in degree `d`.
fn reduce_mod2(series: &RationalSeries, s: u32, ring: &Arc<PolyRing>) -> Result<Poly, FglError> {
    let period = (1u32 << s) - 1;
    let two = BigInt::from(2);
    let mut terms = Vec::new();
    for ((i, j), c) in series.coefficients() {
        if c.denom().is_even() {
            return Err(FglError::NotTwoIntegral { exponents: (i, j), value: c.to_string() });
        }
        if c.numer().mod_floor(&two).is_zero() {
            continue;
        }
        let d = i + j;
        if (d - 1) % period != 0 {
            return Err(FglError::Ungraded { degree: d });
        }
        let exps: Vec<u16> = [i, j][..ring.nvars()].iter().map(|&e| e as u16).collect();
        terms.push(Monomial::from_exponents(&exps).with_v(((d - 1) / period) as i32));
    }
    Ok(Poly::from_terms(ring, terms))
}

/// Default truncation `2^{s+1}`.
pub fn default_truncation(s: u32) -> u32 {
    2u32 << s
}

/// `exp(log x + log y)` over the rationals, truncated at total degree `n`.
pub fn rational_law(s: u32, n: u32) -> Result<RationalSeries, FglError> {
    let exp = honda_exp(s, n)?;
    let log_x = honda_log(s, n)?;
    let sum = log_x.add(&log_x.swapped());
    Ok(exp.compose(&sum))
}

/// `exp(2 log x)` over the rationals.
pub fn rational_two_series(s: u32, n: u32) -> Result<RationalSeries, FglError> {
    let exp = honda_exp(s, n)?;
    let doubled = honda_log(s, n)?.scale(&BigRational::from_integer(BigInt::from(2)));
    Ok(exp.compose(&doubled))
}

pub fn fgl(s: u32, n: u32) -> Result<FglMod2, FglError> {
    if n < 2 {
        return Err(FglError::InvalidArguments("truncation must be at least 2".into()));
    }
    let law = reduce_mod2(&rational_law(s, n)?, s, &series_ring(s, &["x", "y"])?)?;
    let two_series = two_series(s, n)?;
    Ok(FglMod2 { s, truncation: n, law, two_series })
}

/// `[2](x)` reduced mod 2.
pub fn two_series(s: u32, n: u32) -> Result<Poly, FglError> {
    reduce_mod2(&rational_two_series(s, n)?, s, &series_ring(s, &["x"])?)
}

impl FglMod2 {
    pub fn is_symmetric(&self) -> Result<bool, FglError> {
        let ring = self.law.ring();
        let swap = HashMap::from([
            ("x".to_string(), Poly::var(ring, "y")?),
            ("y".to_string(), Poly::var(ring, "x")?),
        ]);
        Ok(self.law.substitute(&swap)? == self.law)
    }

    /// `F(x, 0) = x`.
    pub fn is_unital(&self) -> Result<bool, FglError> {
        let ring = self.law.ring();
        let at_zero = HashMap::from([("y".to_string(), Poly::zero(ring))]);
        Ok(self.law.substitute(&at_zero)? == Poly::var(ring, "x")?)
    }

    /// `F(F(x, y), z) = F(x, F(y, z))` up to the truncation.
    pub fn is_associative(&self) -> Result<bool, FglError> {
        let ring3 = series_ring(self.s, &["x", "y", "z"])?;
        let var = |n: &str| Poly::var(&ring3, n);
        let law_at = |p: Poly, q: Poly| {
            let assign = HashMap::from([("x".to_string(), p), ("y".to_string(), q)]);
            self.law.substitute_truncated(&assign, self.truncation)
        };
        let left = law_at(law_at(var("x")?, var("y")?)?, var("z")?)?;
        let right = law_at(var("x")?, law_at(var("y")?, var("z")?)?)?;
        Ok(left == right)
    }

    /// True if `[2](x) = v x^{2^s}` within the truncation.
    pub fn two_series_is_pure(&self) -> Result<bool, FglError> {
        let ring = self.two_series.ring();
        let q = 1u32 << self.s;
        let expected = if q <= self.truncation {
            Poly::from_monomial(ring, Monomial::from_exponents(&[q as u16]).with_v(1))
        } else {
            Poly::zero(ring)
        };
        Ok(self.two_series == expected)
    }
}

/// Outcome of [`associativity_check`] and friends for one height.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglChecks {
    pub s: u32,
    pub truncation: u32,
    pub two_integral: bool,
    pub two_series_pure: bool,
    pub symmetric: bool,
    pub unital: bool,
    pub associative: bool,
}

impl FglChecks {
    pub fn all_pass(&self) -> bool {
        self.two_integral && self.two_series_pure && self.symmetric && self.unital && self.associative
    }
}

pub fn associativity_check(s: u32, n: u32) -> Result<bool, FglError> {
    if n < 3 {
        return Err(FglError::InvalidArguments("associativity needs truncation at least 3".into()));
    }
    fgl(s, n)?.is_associative()
}

/// Every structural check at height `s` and truncation `n`.
///
/// A non-integral coefficient is reported as a failed check rather than an error.
pub fn run_checks(s: u32, n: u32) -> Result<FglChecks, FglError> {
    let failed = FglChecks {
        s,
        truncation: n,
        two_integral: false,
        two_series_pure: false,
        symmetric: false,
        unital: false,
        associative: false,
    };
    let law = match fgl(s, n) {
        Ok(law) => law,
        Err(FglError::NotTwoIntegral { .. } | FglError::Ungraded { .. }) => return Ok(failed),
        Err(e) => return Err(e),
    };
    Ok(FglChecks {
        two_integral: true,
        two_series_pure: law.two_series_is_pure()?,
        symmetric: law.is_symmetric()?,
        unital: law.is_unital()?,
        associative: law.is_associative()?,
        ..failed
    })
}

/// Renders a rational series with `x`, `y` as variables.
pub fn format_series(series: &RationalSeries) -> String {
    let mut parts = Vec::new();
    for ((i, j), c) in series.coefficients() {
        let mut factors = Vec::new();
        let magnitude = c.abs();
        if !magnitude.is_one() || (i == 0 && j == 0) {
            factors.push(magnitude.to_string());
        }
        for (name, e) in [("x", i), ("y", j)] {
            match e {
                0 => {}
                1 => factors.push(name.to_string()),
                e => factors.push(format!("{name}^{e}")),
            }
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        parts.push((sign, factors.join("*")));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (sign, body)) in parts.iter().enumerate() {
        match (k, *sign) {
            (0, "-") => out.push('-'),
            (0, _) => {}
            (_, sign) => out.push_str(&format!(" {sign} ")),
        }
        out.push_str(body);
    }
    out
}
