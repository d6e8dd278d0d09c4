use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coeff::Laurent;
use super::monomial::{JetMonomial, TrigMode, TrigProduct};
use crate::error::{Error, Result};

/// Degree of a nonzero [`Expr`] under `deg φ_{kξ} = k`, trig factors counting 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(u64),
    Mixed,
}

impl Homogeneity {
    pub fn degree(self) -> Option<u64> {
        match self {
            Homogeneity::Homogeneous(d) => Some(d),
            Homogeneity::Mixed => None,
        }
    }

    pub fn is_homogeneous(self) -> bool {
        matches!(self, Homogeneity::Homogeneous(_))
    }
}

/// Exact element of `ℚ[a, a⁻¹] ⊗ ℚ[φ, φ_ξ, φ_ξξ, …] ⊗ span{1, sin(maφ), cos(maφ)}`.
///
/// Canonical: no key maps to a zero coefficient, so structural equality is
/// mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Expr {
    terms: BTreeMap<(JetMonomial, TrigMode), Laurent>,
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Laurent::one())
    }

    pub fn constant(c: Laurent) -> Self {
        Self::term(c, JetMonomial::one(), TrigMode::UNIT)
    }

    pub fn term(c: Laurent, jets: JetMonomial, trig: TrigMode) -> Self {
        let mut out = Expr::zero();
        out.add_term(jets, trig, c);
        out
    }

    /// `φ_{kξ}`.
    pub fn jet(k: u32) -> Self {
        Self::term(Laurent::one(), JetMonomial::var(k, 1), TrigMode::UNIT)
    }

    /// The configuration `φ` itself.
    pub fn phi() -> Self {
        Self::jet(0)
    }

    pub fn cos_a() -> Self {
        Self::cos_mode(1)
    }

    pub fn sin_a() -> Self {
        Self::sin_mode(1)
    }

    pub fn cos_mode(m: u32) -> Self {
        Self::term(Laurent::one(), JetMonomial::one(), TrigMode::cos(m))
    }

    pub fn sin_mode(m: u32) -> Self {
        match TrigMode::sin(m) {
            Some(t) => Self::term(Laurent::one(), JetMonomial::one(), t),
            None => Self::zero(),
        }
    }

    pub(crate) fn from_raw_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = ((JetMonomial, TrigMode), Laurent)>,
    {
        let mut out = Expr::zero();
        for ((j, t), c) in iter {
            out.add_term(j, t, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&JetMonomial, &TrigMode, &Laurent)> + '_ {
        self.terms.iter().map(|((j, t), c)| (j, t, c))
    }

    pub fn coefficient(&self, jets: &JetMonomial, trig: TrigMode) -> Laurent {
        self.terms
            .get(&(jets.clone(), trig))
            .cloned()
            .unwrap_or_default()
    }

    fn add_term(&mut self, jets: JetMonomial, trig: TrigMode, c: Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((jets, trig)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Laurent) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr::from_raw_terms(self.terms.iter().map(|(k, v)| (k.clone(), v * c)))
    }

    pub fn scale_rational(&self, c: &BigRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v.scale(c)))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut out = Expr::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = &out * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// True when every key carries the `Unit` trig mode.
    pub fn is_trig_free(&self) -> bool {
        self.terms.keys().all(|(_, t)| t.is_unit())
    }

    /// Lowest jet order over all monomials, `None` if no jet variable occurs.
    pub fn min_jet_order(&self) -> Option<u32> {
        self.terms.keys().filter_map(|(j, _)| j.min_order()).min()
    }

    pub fn max_jet_order(&self) -> Option<u32> {
        self.terms.keys().filter_map(|(j, _)| j.max_order()).max()
    }

    pub fn max_trig_mode(&self) -> u32 {
        self.terms.keys().map(|(_, t)| t.mode()).max().unwrap_or(0)
    }

    /// The trig-free polynomial multiplying `trig`.
    pub fn trig_component(&self, trig: TrigMode) -> Expr {
        Expr::from_raw_terms(
            self.terms
                .iter()
                .filter(|((_, t), _)| *t == trig)
                .map(|((j, _), c)| ((j.clone(), TrigMode::UNIT), c.clone())),
        )
    }

    /// Degree under `deg φ_{kξ} = k` with trig factors of degree 0.
    pub fn degree(&self) -> Result<Homogeneity> {
        let mut degrees = self.terms.keys().map(|(j, _)| j.degree());
        let first = degrees
            .next()
            .ok_or_else(|| Error::domain("degree of the zero expression is undefined"))?;
        if degrees.all(|d| d == first) {
            Ok(Homogeneity::Homogeneous(first))
        } else {
            Ok(Homogeneity::Mixed)
        }
    }

    /// Monomials whose degree differs from `expected`.
    pub fn degree_violations(&self, expected: u64) -> Vec<(JetMonomial, TrigMode)> {
        self.terms
            .keys()
            .filter(|(j, _)| j.degree() != expected)
            .cloned()
            .collect()
    }

    /// Total ξ-derivative: `∂ξ φ_{kξ} = φ_{(k+1)ξ}`, `∂ξ cos(maφ) = −m a φ_ξ sin(maφ)`,
    /// `∂ξ sin(maφ) = m a φ_ξ cos(maφ)`.
    pub fn d_xi(&self) -> Expr {
        let mut out = Expr::zero();
        for ((jets, trig), c) in &self.terms {
            for &(k, e) in jets.factors() {
                let rest = jets.remove_one(k).expect("factor present");
                let new_jets = rest.mul(&JetMonomial::var(k + 1, 1));
                out.add_term(new_jets, *trig, c.scale(&BigRational::from_integer(e.into())));
            }
            let m = trig.mode() as i64;
            let jets_xi = jets.mul(&JetMonomial::var(1, 1));
            match trig.kind() {
                super::TrigKind::Unit => {}
                super::TrigKind::Cos => {
                    let t = TrigMode::sin(trig.mode()).expect("mode > 0");
                    let coeff = c.shift(1).scale(&BigRational::from_integer((-m).into()));
                    out.add_term(jets_xi, t, coeff);
                }
                super::TrigKind::Sin => {
                    let t = TrigMode::cos(trig.mode());
                    let coeff = c.shift(1).scale(&BigRational::from_integer(m.into()));
                    out.add_term(jets_xi, t, coeff);
                }
            }
        }
        out
    }

    /// On-shell τ-derivative using `φ_{ξτ} = a sin(aφ)`, so that
    /// `∂τ φ_{kξ} = ∂ξ^{k−1}(a sin(aφ))`.
    ///
    /// Only defined for trig-free expressions without bare `φ`.
    pub fn d_tau_onshell(&self) -> Result<Expr> {
        if !self.is_trig_free() {
            return Err(Error::domain(
                "on-shell ∂τ is only closed on trig-free expressions",
            ));
        }
        if self.min_jet_order() == Some(0) {
            return Err(Error::domain(
                "on-shell ∂τ of bare φ is not expressible without a τ-jet",
            ));
        }
        let max_k = self.max_jet_order().unwrap_or(0);
        // eom[k] = ∂τ φ_{kξ}
        let mut eom = vec![Expr::zero(); max_k as usize + 1];
        if max_k >= 1 {
            eom[1] = Expr::sin_a().scale(&Laurent::a_pow(1));
            for k in 2..=max_k as usize {
                eom[k] = eom[k - 1].d_xi();
            }
        }
        let mut out = Expr::zero();
        for ((jets, _), c) in &self.terms {
            for &(k, e) in jets.factors() {
                let rest = jets.remove_one(k).expect("factor present");
                let coeff = c.scale(&BigRational::from_integer(e.into()));
                let rest = Expr::term(coeff, rest, TrigMode::UNIT);
                out = &out + &(&rest * &eom[k as usize]);
            }
        }
        Ok(out)
    }

    /// Evaluates every Laurent coefficient at `a = value`.
    pub fn substitute_coupling(&self, value: &BigRational) -> Result<Expr> {
        if value.is_zero() {
            return Err(Error::domain("cannot substitute a = 0"));
        }
        Ok(Expr::from_raw_terms(self.terms.iter().map(|(k, c)| {
            (k.clone(), Laurent::constant(c.evaluate(value)))
        })))
    }

    /// True if no coefficient depends on `a`.
    pub fn is_coupling_free(&self) -> bool {
        self.terms.values().all(|c| c.as_constant().is_some())
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let (big, small) = if self.len() >= rhs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for ((j, t), c) in &small.terms {
            out.add_term(j.clone(), *t, c.clone());
        }
        out
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(mut self, rhs: Expr) -> Expr {
        for ((j, t), c) in rhs.terms {
            self.add_term(j, t, c);
        }
        self
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for ((j, t), c) in &rhs.terms {
            out.add_term(j.clone(), *t, -c);
        }
        out
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let half = BigRational::new(1.into(), 2.into());
        let mut out = Expr::zero();
        for ((j1, t1), c1) in &self.terms {
            for ((j2, t2), c2) in &rhs.terms {
                let jets = j1.mul(j2);
                let c = c1 * c2;
                match t1.product(*t2) {
                    TrigProduct::Single(t) => out.add_term(jets, t, c),
                    TrigProduct::Half(parts) => {
                        let c = c.scale(&half);
                        for (t, sign) in parts.into_iter().flatten() {
                            let ct = if sign < 0 { -&c } else { c.clone() };
                            out.add_term(jets.clone(), t, ct);
                        }
                    }
                }
            }
        }
        out
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &self * &rhs
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |acc, x| acc + x)
    }
}

impl From<Laurent> for Expr {
    fn from(c: Laurent) -> Expr {
        Expr::constant(c)
    }
}

impl One for Expr {
    fn one() -> Self {
        Expr::one()
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}
