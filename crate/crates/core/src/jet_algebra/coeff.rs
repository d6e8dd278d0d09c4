//! Laurent polynomials in the coupling `a` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A finite sum `Σ c_z a^z` with `z ∈ ℤ` and `c_z ∈ ℚ`.
///
/// The map never stores a zero rational; the empty map is the zero element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<i32, BigRational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `num/den · a^exp`.
    pub fn ratio(num: i64, den: i64, exp: i32) -> Self {
        Self::monomial(BigRational::new(num.into(), den.into()), exp)
    }

    pub fn monomial(c: BigRational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    /// The coupling itself raised to `exp`.
    pub fn a_pow(exp: i32) -> Self {
        Self::monomial(BigRational::one(), exp)
    }

    pub(crate) fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigRational)>,
    {
        let mut out = Laurent::zero();
        for (z, c) in iter {
            out.add_term(z, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Returns the rational value if the element has no `a` dependence.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, exp: i32) -> BigRational {
        self.terms.get(&exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> + '_ {
        self.terms.iter().map(|(z, c)| (*z, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, z: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(z) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(z, v)| (*z, v * c)).collect(),
        }
    }

    /// Multiplies by `a^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(z, v)| (z + shift, v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Laurent::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Evaluates at `a = value`. `value` must be nonzero whenever a negative
    /// exponent is present.
    pub fn evaluate(&self, value: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (z, c) in &self.terms {
            let p = if *z >= 0 {
                rational_pow(value, *z as u32)
            } else {
                rational_pow(&value.recip(), z.unsigned_abs())
            };
            acc += c * p;
        }
        acc
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }
}

pub(crate) fn rational_pow(base: &BigRational, n: u32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..n {
        out *= base;
    }
    out
}

/// `1/n!` as an exact rational.
pub fn inverse_factorial(n: u32) -> BigRational {
    let mut f = BigInt::one();
    for k in 2..=n {
        f *= k;
    }
    BigRational::new(BigInt::one(), f)
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.add_term(*z, c.clone());
        }
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        for (z, c) in rhs.terms {
            self.add_term(z, c);
        }
        self
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(z, c)| (*z, -c)).collect(),
        }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (z1, c1) in &self.terms {
            for (z2, c2) in &rhs.terms {
                out.add_term(z1 + z2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl fmt::Display for Laurent {
    /// Plain-text rendering such as `2/a^3 + 1/3 a`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (z, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let c = c.abs();
            write!(f, "{}", text_monomial(&c, *z))?;
        }
        Ok(())
    }
}

/// Renders `c · a^z` for positive `c`.
fn text_monomial(c: &BigRational, z: i32) -> String {
    let num = c.numer();
    let den = c.denom();
    let a_part = match z.abs() {
        0 => String::new(),
        1 => "a".to_string(),
        k => format!("a^{k}"),
    };
    if z >= 0 {
        let top = if a_part.is_empty() {
            num.to_string()
        } else if num.is_one() {
            a_part
        } else {
            format!("{num}{a_part}")
        };
        if den.is_one() {
            top
        } else {
            format!("{top}/{den}")
        }
    } else {
        let bottom = if den.is_one() {
            a_part
        } else {
            format!("({den}{a_part})")
        };
        format!("{num}/{bottom}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        assert_eq!(Laurent::ratio(2, 1, -3).to_string(), "2/a^3");
        assert_eq!(Laurent::ratio(1, 3, -1).to_string(), "1/(3a)");
        assert_eq!(Laurent::ratio(-1, 4, 2).to_string(), "-a^2/4");
        assert_eq!(Laurent::zero().to_string(), "0");
    }

    #[test]
    fn evaluation_handles_negative_powers() {
        let x = &Laurent::ratio(1, 1, -2) + &Laurent::ratio(3, 1, 1);
        let v = x.evaluate(&BigRational::from_integer(2.into()));
        assert_eq!(v, BigRational::new(25.into(), 4.into()));
    }

    #[test]
    fn cancellation_leaves_empty_map() {
        let x = Laurent::ratio(2, 3, -1);
        assert!((&x - &x).is_zero());
        assert_eq!(inverse_factorial(5), BigRational::new(1.into(), 120.into()));
    }
}
