use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::jet_algebra::{inverse_factorial, Expr, Laurent};

/// Power series `Σ_{k ≤ V} c_k α^k` with [`Expr`] coefficients, truncated at order `V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSeries {
    coeffs: Vec<Expr>,
}

impl AlphaSeries {
    /// Series from explicit coefficients; the order is `coeffs.len() − 1`.
    pub fn new(coeffs: Vec<Expr>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Expr::zero(); order + 1])
    }

    pub fn constant(c: Expr, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Expr {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Expr> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Expr::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        Self::new(self.coeffs[..=order].to_vec())
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::new((0..=order).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        Self::new((0..=order).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect())
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.scale_rational(c)).collect())
    }

    /// Multiplies every coefficient by a fixed expression.
    pub fn mul_expr(&self, x: &Expr) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * x).collect())
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Expr::zero(); order + 1];
        for (i, x) in self.coeffs.iter().enumerate().take(order + 1) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        Self::new(out)
    }

    /// Coefficient-wise ξ-derivative.
    pub fn d_xi(&self) -> Self {
        Self::new(self.coeffs.iter().map(Expr::d_xi).collect())
    }

    /// The series in `−α`.
    pub fn negate_alpha(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Divides by `α^shift`; the `shift` lowest coefficients must vanish.
    pub fn shift_down(&self, shift: usize) -> Result<Self> {
        if shift > self.order() {
            return Err(Error::Truncation {
                required: shift,
                available: self.order(),
            });
        }
        if let Some(index) = self.coeffs[..shift].iter().position(|c| !c.is_zero()) {
            return Err(Error::Shift { index, shift });
        }
        Ok(Self::new(self.coeffs[shift..].to_vec()))
    }

    fn require_no_constant(&self, what: &str) -> Result<()> {
        if self.coeffs[0].is_zero() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} of a series with nonzero constant term is not a finite expansion"
            )))
        }
    }

    /// `Σ_j c_j X^j` for a series `X` without constant term, keeping the
    /// powers `j ≡ parity (mod 2)` and `c_j = sign_j / j!`.
    fn taylor(&self, parity: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        let mut power = Self::constant(Expr::one(), order);
        for j in 0..=order {
            if j > 0 {
                power = power.mul(self);
            }
            if j % 2 != parity {
                continue;
            }
            let mut c = inverse_factorial(j as u32);
            if (j / 2) % 2 == 1 {
                c = -c;
            }
            out = out.add(&power.scale_rational(&c));
        }
        out
    }

    /// `sin X` for `X` without constant term.
    pub fn sin(&self) -> Result<Self> {
        self.require_no_constant("sin")?;
        Ok(self.taylor(1))
    }

    /// `cos X` for `X` without constant term.
    pub fn cos(&self) -> Result<Self> {
        self.require_no_constant("cos")?;
        Ok(self.taylor(0))
    }
}
