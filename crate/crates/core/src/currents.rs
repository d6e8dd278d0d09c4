//! Conserved-current components `s₁ᴺ`, `s₂ᴺ` built from the Bäcklund coefficients.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::backlund::{enumerate_partitions, AlphaSeries, BacklundTable, Coupling, PartitionConstraint, PowerCache};
use crate::error::{Error, Result};
use crate::jet_algebra::{Expr, Laurent, TrigMode};

/// Lower limit of the β-sum in the `cos(aφ)` coefficient of `s₁ᴺ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CosSumStart {
    /// β runs from 0, which produces the `N = 0` value `2cos(aφ)`.
    Zero,
    /// β runs from 1.
    One,
}

fn require_depth(table: &BacklundTable, depth: usize) -> Result<()> {
    if table.max_nu() < depth {
        Err(Error::Truncation {
            required: depth,
            available: table.max_nu(),
        })
    } else {
        Ok(())
    }
}

fn signed(x: Laurent, negative: bool) -> Laurent {
    if negative {
        -x
    } else {
        x
    }
}

/// `Σ Π A_{j+1}^{m_j}/m_j!` over `m_0..m_{2N−1}` with `Σ m = count`, `Σ (j+1) m_j = 2N`.
fn jet_partition_sum(n: usize, count: u32, powers: &mut PowerCache<'_>) -> Expr {
    if n == 0 {
        return if count == 0 { Expr::one() } else { Expr::zero() };
    }
    let two_n = 2 * n as u32;
    if count > two_n {
        return Expr::zero();
    }
    let c = PartitionConstraint::new(two_n - 1, count, two_n - count);
    enumerate_partitions(c)
        .into_iter()
        .map(|m| powers.weighted_product(&m, 1))
        .sum()
}

/// Coefficient of `cos(aφ)` in `s₁ᴺ`.
pub fn s1_cos_coefficient(n: usize, table: &BacklundTable, start: CosSumStart) -> Result<Expr> {
    require_depth(table, 2 * n)?;
    let c = table.coupling();
    let mut powers = PowerCache::new(table.coefficients());
    let first = match start {
        CosSumStart::Zero => 0,
        CosSumStart::One => 1,
    };
    let mut out = Expr::zero();
    for beta in first..=n {
        let inner = jet_partition_sum(n, 2 * beta as u32, &mut powers);
        let pre = signed(c.half_a_pow(2 * beta as u32), beta % 2 == 1).scale(&two());
        out = &out + &inner.scale(&pre);
    }
    Ok(out)
}

/// Coefficient of `sin(aφ)` in `s₁ᴺ`; zero at `N = 0`.
pub fn s1_sin_coefficient(n: usize, table: &BacklundTable) -> Result<Expr> {
    require_depth(table, 2 * n)?;
    let c = table.coupling();
    let mut powers = PowerCache::new(table.coefficients());
    let mut out = Expr::zero();
    for beta in 0..n {
        let inner = jet_partition_sum(n, 2 * beta as u32 + 1, &mut powers);
        let pre = signed(c.half_a_pow(2 * beta as u32 + 1), beta % 2 == 0).scale(&two());
        out = &out + &inner.scale(&pre);
    }
    Ok(out)
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

pub fn compute_s1(n: usize, table: &BacklundTable) -> Result<Expr> {
    let q = s1_cos_coefficient(n, table, CosSumStart::Zero)?;
    let r = s1_sin_coefficient(n, table)?;
    Ok(&(&q * &Expr::cos_a()) + &(&r * &Expr::sin_a()))
}

pub fn compute_s2(n: usize, table: &BacklundTable) -> Result<Expr> {
    require_depth(table, 2 * n + 1)?;
    let c = table.coupling();
    let mut powers = PowerCache::new(table.coefficients());
    let mut out = Expr::zero();
    for mu in 0..=n {
        let r = 2 * (n - mu) as u32;
        let cons = PartitionConstraint::new(r, 2 * (mu as u32 + 1), r);
        let inner: Expr = enumerate_partitions(cons)
            .into_iter()
            .map(|m| powers.weighted_product(&m, 1))
            .sum();
        let pre = signed(c.half_a_pow(2 * (mu as u32 + 1)), mu % 2 == 1).scale(&two());
        out = &out + &inner.scale(&pre);
    }
    Ok(out)
}

/// Splits `s₁` into its `cos(aφ)` and `sin(aφ)` coefficients.
pub fn decompose_s1(s1: &Expr) -> Result<(Expr, Expr)> {
    for (_, t, _) in s1.terms() {
        if t.is_unit() {
            return Err(Error::domain("s₁ has a term without trig factor"));
        }
        if t.mode() != 1 {
            return Err(Error::domain(format!("s₁ has a higher trig mode: {t}")));
        }
    }
    let cos = TrigMode::cos(1);
    let sin = TrigMode::sin(1).expect("mode 1");
    Ok((s1.trig_component(cos), s1.trig_component(sin)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentPair {
    pub n: usize,
    pub coupling: Coupling,
    pub s1: Expr,
    pub s2: Expr,
    pub q1: Expr,
    pub r1: Expr,
}

impl CurrentPair {
    pub fn compute(n: usize, table: &BacklundTable) -> Result<Self> {
        let s1 = compute_s1(n, table)?;
        let s2 = compute_s2(n, table)?;
        let (q1, r1) = decompose_s1(&s1)?;
        Ok(Self {
            n,
            coupling: table.coupling().clone(),
            s1,
            s2,
            q1,
            r1,
        })
    }

    /// `cos(aφ)·q₁ + sin(aφ)·r₁ − s₁`.
    pub fn reassembly_residual(&self) -> Expr {
        let back = &(&self.q1 * &Expr::cos_a()) + &(&self.r1 * &Expr::sin_a());
        &back - &self.s1
    }
}

/// Pairs `0..=max_n`, computed in parallel from a shared table.
pub fn compute_pairs(max_n: usize, table: &BacklundTable) -> Result<Vec<CurrentPair>> {
    (0..=max_n)
        .into_par_iter()
        .map(|n| CurrentPair::compute(n, table))
        .collect()
}

/// `∂ξ s₁ + ∂τ s₂` on shell. For a fixed coupling the `a` produced by
/// differentiating trig factors is evaluated at that value.
pub fn divergence_onshell(pair: &CurrentPair) -> Result<Expr> {
    let div = &pair.s1.d_xi() + &pair.s2.d_tau_onshell()?;
    match &pair.coupling {
        Coupling::Symbolic => Ok(div),
        Coupling::Fixed(v) => div.substitute_coupling(v),
    }
}

/// Coefficients of the two current series, from the defining cosine formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurrentSeries {
    /// `s₁(α)` through `α^{2N+1}`.
    pub s1: AlphaSeries,
    /// `s₂(α)` through `α^{2N}`, after division by `α²`.
    pub s2: AlphaSeries,
}

impl CurrentSeries {
    /// Odd orders carrying a nonzero coefficient in either series.
    pub fn odd_order_violations(&self) -> Vec<(u8, usize)> {
        let mut out = Vec::new();
        for (which, s) in [(1u8, &self.s1), (2u8, &self.s2)] {
            for (k, c) in s.coeffs().iter().enumerate() {
                if k % 2 == 1 && !c.is_zero() {
                    out.push((which, k));
                }
            }
        }
        out
    }
}

/// Expands both current components in `α` to the depth needed for index `N`.
pub fn current_series(n: usize, table: &BacklundTable) -> Result<CurrentSeries> {
    require_depth(table, 2 * n + 1)?;
    let c = table.coupling();
    let half = BigRational::new(1.into(), 2.into());
    let order = 2 * n + 1;

    // s₁: cos(aφ + Y(α)) + cos(aφ + Y(−α)), Y = ½a Σ_{ν≥1} A_ν α^ν.
    let y = table.difference_series(order)?.scale(&c.a_pow(1)).scale_rational(&half);
    let one_side = |y: &AlphaSeries| -> Result<AlphaSeries> {
        let cos_part = y.cos()?.mul_expr(&Expr::cos_a());
        let sin_part = y.sin()?.mul_expr(&Expr::sin_a());
        Ok(cos_part.sub(&sin_part))
    };
    let s1 = one_side(&y)?.add(&one_side(&y.negate_alpha())?);

    // s₂: α⁻² [2 − cos Z(α) − cos Z(−α)], Z = −Y. The bracket is needed
    // through α^{2N+2}; A_{2N+2} cannot reach that order since cos Z starts at Z².
    let mut zc = table.difference_series(order)?.into_coeffs();
    zc.push(Expr::zero());
    let z = AlphaSeries::new(zc).scale(&c.a_pow(1)).scale_rational(&(-half));
    let two = AlphaSeries::constant(Expr::constant(Laurent::from_int(2)), order + 1);
    let bracket = two.sub(&z.cos()?).sub(&z.negate_alpha().cos()?);
    let s2 = bracket.shift_down(2)?;
    Ok(CurrentSeries { s1, s2 })
}

/// `(s₁ᴺ, s₂ᴺ)` read off the `α^{2N}` coefficients of [`current_series`].
pub fn series_oracle(n: usize, table: &BacklundTable) -> Result<(Expr, Expr)> {
    let s = current_series(n, table)?;
    Ok((s.s1.coeff(2 * n).clone(), s.s2.coeff(2 * n).clone()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurrentDegreeReport {
    pub n: usize,
    pub q1_degree: Option<u64>,
    /// Absent at `N = 0`, where the `sin(aφ)` coefficient is not defined.
    pub r1_degree: Option<u64>,
    pub s2_degree: Option<u64>,
    pub violations: Vec<String>,
}

impl CurrentDegreeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn homogeneous_degree(x: &Expr) -> Option<u64> {
    x.degree().ok().and_then(|h| h.degree())
}

/// Checks `deg q₁ = deg r₁ = 2N` and `deg s₂ = 2(N+1)`.
pub fn verify_current_degrees(pair: &CurrentPair) -> CurrentDegreeReport {
    let n = pair.n as u64;
    let mut violations = Vec::new();
    let check = |name: &str, x: &Expr, want: u64, violations: &mut Vec<String>| {
        let got = homogeneous_degree(x);
        if got != Some(want) {
            violations.push(format!("{name}: expected degree {want}, got {got:?}"));
        }
        got
    };
    let q1_degree = check("q1", &pair.q1, 2 * n, &mut violations);
    let r1_degree = if pair.n == 0 {
        if !pair.r1.is_zero() {
            violations.push("r1: nonzero at N = 0".into());
        }
        None
    } else {
        check("r1", &pair.r1, 2 * n, &mut violations)
    };
    let s2_degree = check("s2", &pair.s2, 2 * (n + 1), &mut violations);
    for (name, x) in [("q1", &pair.q1), ("r1", &pair.r1), ("s2", &pair.s2)] {
        if !x.is_trig_free() || x.min_jet_order() == Some(0) {
            violations.push(format!("{name}: not a polynomial in φ_ξ, φ_ξξ, …"));
        }
    }
    CurrentDegreeReport {
        n: pair.n,
        q1_degree,
        r1_degree,
        s2_degree,
        violations,
    }
}

/// Indices `N ≤ max_n` where starting the `cos(aφ)` β-sum at 0 or at 1 gives different `s₁ᴺ`.
pub fn cos_sum_start_differences(max_n: usize, table: &BacklundTable) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for n in 0..=max_n {
        let zero = s1_cos_coefficient(n, table, CosSumStart::Zero)?;
        let one = s1_cos_coefficient(n, table, CosSumStart::One)?;
        if zero != one {
            out.push(n);
        }
    }
    Ok(out)
}
