pub const MAX_VARS: usize = 9;

pub type Exponent = u16;

/// Dense exponent vector plus the Laurent exponent of `v`.
///
/// Slots beyond the owning ring's variable count stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: [Exponent; MAX_VARS],
    v: i32,
}

impl Monomial {
    pub const fn one() -> Self {
        Self { exps: [0; MAX_VARS], v: 0 }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[Exponent]) -> Self {
        assert!(exps.len() <= MAX_VARS, "too many exponents");
        let mut m = Self::one();
        m.exps[..exps.len()].copy_from_slice(exps);
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> Exponent {
        self.exps[i]
    }

    #[inline]
    pub fn exponents(&self) -> &[Exponent; MAX_VARS] {
        &self.exps
    }

    pub fn set_exp(&mut self, i: usize, e: Exponent) {
        self.exps[i] = e;
    }

    #[inline]
    pub fn v_exp(&self) -> i32 {
        self.v
    }

    pub fn with_v(mut self, v: i32) -> Self {
        self.v = v;
        self
    }

    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        let mut out = Self::one();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].checked_add(other.exps[i])?;
        }
        out.v = self.v.checked_add(other.v)?;
        Some(out)
    }

    pub fn checked_pow(&self, k: u32) -> Option<Self> {
        let k16 = Exponent::try_from(k).ok();
        let mut out = Self::one();
        for i in 0..MAX_VARS {
            out.exps[i] = if self.exps[i] == 0 { 0 } else { self.exps[i].checked_mul(k16?)? };
        }
        out.v = self.v.checked_mul(i32::try_from(k).ok()?)?;
        Some(out)
    }

    /// Divisibility of the exponent vectors; `v` is a unit and does not matter.
    #[inline]
    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` on exponent vectors (v-exponents subtract), if `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        let mut out = Self::one();
        for i in 0..MAX_VARS {
            out.exps[i] = other.exps[i] - self.exps[i];
        }
        out.v = other.v - self.v;
        Some(out)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = Self::one();
        for i in 0..MAX_VARS {
            out.exps[i] = self.exps[i].max(other.exps[i]);
        }
        out
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `Some(i)` if this is a pure power `x_i^k` with `k >= 1`.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }
}
