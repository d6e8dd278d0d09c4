use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::partitions::{enumerate_partitions, PartitionConstraint};
use super::series::AlphaSeries;
use crate::error::{Error, Result};
use crate::jet_algebra::{inverse_factorial, rational_pow, Expr, JetMonomial, Laurent, TrigMode};

/// How the coupling enters coefficients: as the formal variable `a`, or fixed to a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coupling {
    Symbolic,
    Fixed(BigRational),
}

impl Coupling {
    /// `a^k` as a coefficient.
    pub fn a_pow(&self, k: i32) -> Laurent {
        match self {
            Coupling::Symbolic => Laurent::a_pow(k),
            Coupling::Fixed(v) => {
                let p = if k >= 0 {
                    rational_pow(v, k as u32)
                } else {
                    rational_pow(&v.recip(), k.unsigned_abs())
                };
                Laurent::constant(p)
            }
        }
    }

    /// `(a/2)^k`.
    pub fn half_a_pow(&self, k: u32) -> Laurent {
        let half = BigRational::new(1.into(), 2.into());
        self.a_pow(k as i32).scale(&rational_pow(&half, k))
    }
}

/// Memoized coefficients `A₀ … A_V` of `φ' = Σ A_ν α^ν`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BacklundTable {
    coupling: Coupling,
    coeffs: Vec<Expr>,
}

impl BacklundTable {
    /// Table with only `A₀ = φ`.
    pub fn new(coupling: Coupling) -> Self {
        if let Coupling::Fixed(v) = &coupling {
            assert!(!v.is_zero(), "the coupling must be nonzero");
        }
        Self {
            coupling,
            coeffs: vec![Expr::phi()],
        }
    }

    /// Symbolic table filled through `A_{max_nu}`.
    pub fn build(max_nu: usize) -> Self {
        Self::build_with(Coupling::Symbolic, max_nu)
    }

    pub fn build_with(coupling: Coupling, max_nu: usize) -> Self {
        let mut t = Self::new(coupling);
        t.extend_to(max_nu);
        t
    }

    /// Rebuilds a table from stored coefficients, e.g. a cache.
    pub fn from_coefficients(coupling: Coupling, coeffs: Vec<Expr>) -> Result<Self> {
        if coeffs.first() != Some(&Expr::phi()) {
            return Err(Error::domain("a table must start with A₀ = φ"));
        }
        Ok(Self { coupling, coeffs })
    }

    pub fn coupling(&self) -> &Coupling {
        &self.coupling
    }

    pub fn max_nu(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficients(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn get(&self, nu: usize) -> Result<&Expr> {
        self.coeffs.get(nu).ok_or(Error::Truncation {
            required: nu,
            available: self.max_nu(),
        })
    }

    pub fn extend_to(&mut self, max_nu: usize) {
        while self.coeffs.len() <= max_nu {
            let nu = self.coeffs.len();
            let next = compute_a(nu, self).expect("lower orders are present");
            self.coeffs.push(next);
        }
    }

    /// Applies `a = value` to every coefficient of a symbolic table.
    pub fn substitute_coupling(&self, value: &BigRational) -> Result<Self> {
        if self.coupling != Coupling::Symbolic {
            return Err(Error::domain("table coupling is already fixed"));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute_coupling(value))
            .collect::<Result<_>>()?;
        Ok(Self {
            coupling: Coupling::Fixed(value.clone()),
            coeffs,
        })
    }

    /// `φ' − φ = Σ_{ν ≥ 1} A_ν α^ν` truncated at `order`.
    pub(crate) fn difference_series(&self, order: usize) -> Result<AlphaSeries> {
        if order > self.max_nu() {
            return Err(Error::Truncation {
                required: order,
                available: self.max_nu(),
            });
        }
        let mut c = self.coeffs[..=order].to_vec();
        c[0] = Expr::zero();
        Ok(AlphaSeries::new(c))
    }
}

/// `A_ν` from `A₀ … A_{ν−1}` held in `table`.
pub fn compute_a(nu: usize, table: &BacklundTable) -> Result<Expr> {
    let c = &table.coupling;
    match nu {
        0 => return Ok(Expr::phi()),
        1 => return Ok(Expr::jet(1).scale(&c.a_pow(-1).scale(&BigRational::from_integer(2.into())))),
        2 => return Ok(Expr::jet(2).scale(&c.a_pow(-2).scale(&BigRational::from_integer(2.into())))),
        _ => {}
    }
    if table.max_nu() + 1 < nu {
        return Err(Error::Truncation {
            required: nu - 1,
            available: table.max_nu(),
        });
    }
    // A_{ν+1} with ν = nu − 1 ≥ 2.
    let v = nu - 1;
    let mut out = table.coeffs[v].d_xi().scale(&c.a_pow(-1));
    let mut powers = PowerCache::new(&table.coeffs);
    // Partitions need ν − 2 − 2β ≥ 0, so β ≤ ⌊ν/2⌋ − 1.
    for beta in 0..=(v - 2) / 2 {
        let r = (v - 2 - 2 * beta) as u32;
        let cons = PartitionConstraint::new(r, 2 * beta as u32 + 3, r);
        let mut inner = Expr::zero();
        for n in enumerate_partitions(cons) {
            inner = &inner + &powers.weighted_product(&n, 1);
        }
        let mut pre = c.half_a_pow(2 * (beta as u32 + 1));
        if beta % 2 == 1 {
            pre = -pre;
        }
        out = &out + &inner.scale(&pre);
    }
    Ok(out)
}

/// Memoizes `A_i^n` for the partition sums.
pub(crate) struct PowerCache<'a> {
    coeffs: &'a [Expr],
    cache: HashMap<(usize, u32), Expr>,
}

impl<'a> PowerCache<'a> {
    pub(crate) fn new(coeffs: &'a [Expr]) -> Self {
        Self {
            coeffs,
            cache: HashMap::new(),
        }
    }

    fn power(&mut self, i: usize, n: u32) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if let Some(x) = self.cache.get(&(i, n)) {
            return x.clone();
        }
        let x = &self.power(i, n - 1) * &self.coeffs[i];
        self.cache.insert((i, n), x.clone());
        x
    }

    /// `Π_i A_{i+offset}^{n_i} / n_i!`.
    pub(crate) fn weighted_product(&mut self, n: &[u32], offset: usize) -> Expr {
        let mut acc = Expr::one();
        let mut w = BigRational::one();
        for (i, &ni) in n.iter().enumerate() {
            if ni > 0 {
                acc = &acc * &self.power(i + offset, ni);
                w *= inverse_factorial(ni);
            }
        }
        acc.scale_rational(&w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityViolation {
    pub nu: usize,
    pub monomial: String,
    pub trig: String,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    /// `Some(d)` when `A_ν` is homogeneous of degree `d`.
    pub degrees: Vec<Option<u64>>,
    pub violations: Vec<HomogeneityViolation>,
    /// Orders `ν ≥ 1` whose `A_ν` holds bare `φ` or a trig factor.
    pub structural_violations: Vec<usize>,
}

impl HomogeneityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.structural_violations.is_empty()
    }
}

/// Checks `deg A_ν = ν` for every stored order.
pub fn verify_homogeneity(table: &BacklundTable) -> HomogeneityReport {
    let mut degrees = Vec::new();
    let mut violations = Vec::new();
    let mut structural = Vec::new();
    for (nu, a) in table.coefficients().iter().enumerate() {
        degrees.push(a.degree().ok().and_then(|h| h.degree()));
        for (m, t) in a.degree_violations(nu as u64) {
            violations.push(HomogeneityViolation {
                nu,
                monomial: m.to_string(),
                trig: t.to_string(),
                degree: m.degree(),
            });
        }
        if a.is_zero() {
            violations.push(HomogeneityViolation {
                nu,
                monomial: JetMonomial::one().to_string(),
                trig: TrigMode::UNIT.to_string(),
                degree: 0,
            });
        }
        if nu >= 1 && (!a.is_trig_free() || a.min_jet_order() == Some(0)) {
            structural.push(nu);
        }
    }
    HomogeneityReport {
        degrees,
        violations,
        structural_violations: structural,
    }
}

/// Residual `½(φ'+φ)_ξ − (1/α) sin(½a(φ'−φ))` through `α^order`.
pub fn verify_pde_series(table: &BacklundTable, order: usize) -> Result<AlphaSeries> {
    if table.max_nu() < order + 1 {
        return Err(Error::Truncation {
            required: order + 1,
            available: table.max_nu(),
        });
    }
    let half = BigRational::new(1.into(), 2.into());
    let diff = table.difference_series(order + 1)?;
    let x = diff.scale(&table.coupling.a_pow(1)).scale_rational(&half);
    let rhs = x.sin()?.shift_down(1)?;
    let mut sum = table.coeffs[..=order].to_vec();
    sum[0] = Expr::phi().scale_rational(&BigRational::from_integer(2.into()));
    let lhs = AlphaSeries::new(sum).d_xi().scale_rational(&half);
    Ok(lhs.sub(&rhs))
}
