//! Term-family bookkeeping for the ħ-expansion of products of vertex operators
//! and the power-counting bounds on renormalization ambiguities.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet_algebra::{inverse_factorial, Laurent};

pub const LEDGER_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropagatorKind {
    Feynman,
    AntiFeynman,
    Wightman,
}

/// A propagator line with `derivative_order` ξ-derivatives applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Propagator {
    pub kind: PropagatorKind,
    pub derivative_order: u32,
}

impl Propagator {
    /// All three kinds scale with degree 0; each derivative adds at most one.
    pub fn scaling_degree_bound(&self) -> u32 {
        self.derivative_order
    }
}

/// Derivative orders `i_{r,s}` of the legs ending at argument `r`, nonincreasing per argument.
pub type DerivativeProfile = BTreeMap<usize, Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermFamily {
    pub hbar_order: u32,
    /// Exponent of the propagator between arguments `i < j`.
    pub pair_powers: BTreeMap<(usize, usize), u32>,
    /// `(−1)^p ∏ (a_i a_j)^{p_ij} / ∏ p_ij!` with `a_i = ±a`.
    pub multinomial_weight: Laurent,
    pub coupling_signs: Vec<i8>,
    pub derivative_profile: DerivativeProfile,
}

fn pairs(l: usize) -> Vec<(usize, usize)> {
    (0..l).flat_map(|i| (i + 1..l).map(move |j| (i, j))).collect()
}

/// Weak compositions of `total` into `parts` parts, descending lexicographic order.
pub fn weak_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(rem: u32, cur: &mut Vec<u32>, parts: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == parts {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=rem).rev() {
            cur.push(x);
            go(rem - x, cur, parts, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, &mut Vec::new(), parts, &mut out);
    out
}

/// Number of weak compositions of `total` into `parts` parts.
pub fn weak_composition_count(total: u32, parts: usize) -> u128 {
    if parts == 0 {
        return u128::from(total == 0);
    }
    num_integer::binomial(u128::from(total) + parts as u128 - 1, parts as u128 - 1)
}

/// The families making up the coefficient of `ħ^p` in the time-ordered product of
/// `l` vertex operators with couplings `signs[i]·a`.
pub fn hbar_coefficient_terms(l: usize, p: u32, signs: &[i8]) -> Result<Vec<TermFamily>> {
    if signs.len() != l {
        return Err(Error::domain(format!("{} signs for {l} arguments", signs.len())));
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::domain("coupling signs must be ±1"));
    }
    let pair_list = pairs(l);
    let families = weak_compositions(p, pair_list.len())
        .into_iter()
        .map(|powers| {
            let mut sign = if p.is_multiple_of(2) { 1i64 } else { -1 };
            let mut weight = BigRational::one();
            let mut pair_powers = BTreeMap::new();
            for (&(i, j), &e) in pair_list.iter().zip(&powers) {
                if e == 0 {
                    continue;
                }
                if e % 2 == 1 {
                    sign *= i64::from(signs[i] * signs[j]);
                }
                weight *= inverse_factorial(e);
                pair_powers.insert((i, j), e);
            }
            TermFamily {
                hbar_order: p,
                pair_powers,
                multinomial_weight: Laurent::monomial(weight * BigRational::from_integer(sign.into()), 2 * p as i32),
                coupling_signs: signs.to_vec(),
                derivative_profile: DerivativeProfile::new(),
            }
        })
        .collect();
    Ok(families)
}

/// Terms of `(δ/δφ₁ + ⋯ + δ/δφ_l)^j / j!` as `(j₁,…,j_l)` with weight `1/(j₁!⋯j_l!)`.
pub fn functional_derivative_splits(l: usize, j: u32) -> Result<Vec<(Vec<u32>, BigRational)>> {
    if l == 0 {
        return Err(Error::domain("need at least one argument"));
    }
    Ok(weak_compositions(j, l)
        .into_iter()
        .map(|c| {
            let w = c.iter().fold(BigRational::one(), |acc, &x| acc * inverse_factorial(x));
            (c, w)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurrentPart {
    S2,
    Q1,
    R1,
}

/// Highest order of a nonvanishing functional derivative of the current part.
pub fn max_derivative_order(part: CurrentPart, n: u32) -> u32 {
    match part {
        CurrentPart::S2 => 2 * (n + 1),
        CurrentPart::Q1 | CurrentPart::R1 => 2 * n,
    }
}

/// Subadditive bound: the propagators themselves contribute 0, each derivative 1.
pub fn scaling_degree_bound(family: &TermFamily) -> u32 {
    family.derivative_profile.values().flatten().sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambiguity {
    Unique,
    DeltaDerivativesUpTo(u32),
}

/// Freedom in extending a distribution of scaling degree `sd` across the diagonal in 2D.
pub fn ambiguity_bound(sd: u32) -> Ambiguity {
    if sd < 2 {
        Ambiguity::Unique
    } else {
        Ambiguity::DeltaDerivativesUpTo(sd - 2)
    }
}

/// All profiles over `arguments` arguments with every order ≥ 1 and total at most `budget`.
pub fn derivative_profiles(arguments: usize, budget: u32) -> Vec<DerivativeProfile> {
    fn partitions(total: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if total == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=max.min(total)).rev() {
            cur.push(k);
            partitions(total - k, k, cur, out);
            cur.pop();
        }
    }
    let mut per_total: Vec<Vec<Vec<u32>>> = Vec::new();
    for s in 0..=budget {
        let mut out = Vec::new();
        partitions(s, s, &mut Vec::new(), &mut out);
        per_total.push(out);
    }
    let mut out = Vec::new();
    fn go(
        r: usize,
        arguments: usize,
        rem: u32,
        per_total: &[Vec<Vec<u32>>],
        cur: &mut DerivativeProfile,
        out: &mut Vec<DerivativeProfile>,
    ) {
        if r == arguments {
            out.push(cur.clone());
            return;
        }
        for s in 0..=rem {
            for legs in &per_total[s as usize] {
                if !legs.is_empty() {
                    cur.insert(r, legs.clone());
                }
                go(r + 1, arguments, rem - s, per_total, cur, out);
                cur.remove(&r);
            }
        }
    }
    go(0, arguments, budget, &per_total, &mut DerivativeProfile::new(), &mut out);
    out
}

/// Count of [`derivative_profiles`] by generating functions.
pub fn derivative_profile_count(arguments: usize, budget: u32) -> Option<u128> {
    let b = budget as usize;
    // Partition numbers p(0..=b).
    let mut part = vec![0u128; b + 1];
    part[0] = 1;
    for k in 1..=b {
        for s in k..=b {
            part[s] = part[s].checked_add(part[s - k])?;
        }
    }
    let mut acc = vec![0u128; b + 1];
    acc[0] = 1;
    for _ in 0..arguments {
        let mut next = vec![0u128; b + 1];
        for (s, &x) in acc.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (t, &y) in part.iter().enumerate().take(b + 1 - s) {
                next[s + t] = next[s + t].checked_add(x.checked_mul(y)?)?;
            }
        }
        acc = next;
    }
    acc.into_iter().try_fold(0u128, |a, x| a.checked_add(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LedgerComponent {
    /// The trig-free current `s₂ᴺ`.
    S2,
    /// The parts `q₁ᴺ`, `r₁ᴺ` of `s₁ᴺ`, which carry one extra vertex-operator argument.
    S1,
}

impl LedgerComponent {
    pub fn degree_budget(self, n: u32) -> u32 {
        match self {
            LedgerComponent::S2 => max_derivative_order(CurrentPart::S2, n),
            LedgerComponent::S1 => max_derivative_order(CurrentPart::Q1, n),
        }
    }

    /// Arguments among which vertex-operator pairs are contracted, for `l` interaction vertices.
    pub fn vertex_arguments(self, l: usize) -> usize {
        match self {
            LedgerComponent::S2 => l,
            LedgerComponent::S1 => l + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub l: usize,
    pub p: u32,
    pub vertex_arguments: usize,
    pub pair_families: u128,
    pub derivative_profiles: u128,
    pub term_count: u128,
    pub max_scaling_degree: u32,
    pub ambiguity: Ambiguity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerReport {
    pub schema_version: u32,
    pub component: LedgerComponent,
    #[serde(rename = "N")]
    pub n: u32,
    pub t: usize,
    pub max_p: u32,
    pub degree_budget: u32,
    /// Bound on the counterterm freedom of the component as a whole.
    pub ambiguity_bound: Ambiguity,
    pub max_scaling_degree: u32,
    pub term_count: u128,
    pub breakdown: Vec<LedgerEntry>,
}

impl LedgerReport {
    /// No entry exceeds the component bound, and every nonempty entry with
    /// interaction vertices attains it.
    pub fn verify(&self) -> bool {
        self.max_scaling_degree <= self.degree_budget
            && self.breakdown.iter().all(|e| {
                e.max_scaling_degree <= self.degree_budget
                    && e.ambiguity <= self.ambiguity_bound
                    && (e.l == 0 || e.term_count == 0 || e.ambiguity == self.ambiguity_bound)
            })
    }
}

/// Power-counting ledger of the retarded products of the current component with
/// `l = 0…t` interaction vertices, up to `ħ^max_p`.
///
/// Derivative legs run from the current to the `l` interaction vertices and are
/// enumerated over every profile within the component's degree budget.
pub fn build_ledger(n: u32, t: usize, component: LedgerComponent, max_p: u32) -> Result<LedgerReport> {
    let budget = component.degree_budget(n);
    let overflow = || Error::domain("ledger count overflows u128");
    let mut breakdown = Vec::new();
    let mut total: u128 = 0;
    let mut max_sd = 0;
    for l in 0..=t {
        let args = component.vertex_arguments(l);
        let pair_count = args * args.saturating_sub(1) / 2;
        let profiles = derivative_profile_count(l, budget).ok_or_else(overflow)?;
        for p in 0..=max_p {
            let pair_families = weak_composition_count(p, pair_count);
            let term_count = pair_families.checked_mul(profiles).ok_or_else(overflow)?;
            total = total.checked_add(term_count).ok_or_else(overflow)?;
            let sd = if l == 0 || term_count == 0 { 0 } else { budget };
            max_sd = max_sd.max(sd);
            breakdown.push(LedgerEntry {
                l,
                p,
                vertex_arguments: args,
                pair_families,
                derivative_profiles: profiles,
                term_count,
                max_scaling_degree: sd,
                ambiguity: ambiguity_bound(sd),
            });
        }
    }
    Ok(LedgerReport {
        schema_version: LEDGER_SCHEMA_VERSION,
        component,
        n,
        t,
        max_p,
        degree_budget: budget,
        ambiguity_bound: ambiguity_bound(budget),
        max_scaling_degree: max_sd,
        term_count: total,
        breakdown,
    })
}

/// Materializes the families of one ledger entry: pair families times derivative profiles.
pub fn ledger_families(n: u32, l: usize, p: u32, component: LedgerComponent) -> Result<Vec<TermFamily>> {
    let args = component.vertex_arguments(l);
    let signs = vec![1i8; args];
    let base = hbar_coefficient_terms(args, p, &signs)?;
    let profiles = derivative_profiles(l, component.degree_budget(n));
    let mut out = Vec::with_capacity(base.len() * profiles.len());
    for f in &base {
        for prof in &profiles {
            out.push(TermFamily {
                derivative_profile: prof.clone(),
                ..f.clone()
            });
        }
    }
    Ok(out)
}

/// Sum of the weights of all families, which must equal the ħ^p coefficient of
/// `exp(−Σ_{i<j} a_i a_j x_ij)` at `x_ij = 1`.
pub fn total_weight(families: &[TermFamily]) -> Laurent {
    families
        .iter()
        .fold(Laurent::zero(), |acc, f| acc + f.multinomial_weight.clone())
}

impl TermFamily {
    pub fn is_trivial(&self) -> bool {
        self.pair_powers.is_empty() && self.derivative_profile.is_empty()
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn brute_compositions(total: u32, parts: usize) -> usize {
        fn go(k: usize, parts: usize, rem: u32, total: u32) -> usize {
            if k == parts {
                return usize::from(rem == 0);
            }
            (0..=total).filter(|&x| x <= rem).map(|x| go(k + 1, parts, rem - x, total)).sum()
        }
        go(0, parts, total, total)
    }

    #[test]
    fn hbar_examples() {
        let f = hbar_coefficient_terms(2, 1, &[1, 1]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].pair_powers, BTreeMap::from([((0, 1), 1)]));
        assert_eq!(f[0].multinomial_weight, Laurent::ratio(-1, 1, 2));
        let g = hbar_coefficient_terms(2, 1, &[1, -1]).unwrap();
        assert_eq!(g[0].multinomial_weight, Laurent::ratio(1, 1, 2));

        assert_eq!(hbar_coefficient_terms(3, 2, &[1, 1, 1]).unwrap().len(), 6);
        for l in 0..=1 {
            let signs = vec![1; l];
            let f = hbar_coefficient_terms(l, 0, &signs).unwrap();
            assert_eq!(f.len(), 1);
            assert!(f[0].is_trivial());
            assert!(f[0].multinomial_weight.is_one());
            assert!(hbar_coefficient_terms(l, 2, &signs).unwrap().is_empty());
        }
        assert!(hbar_coefficient_terms(2, 1, &[1]).is_err());
        assert!(hbar_coefficient_terms(1, 1, &[2]).is_err());
    }

    #[test]
    fn hbar_counts_match_closed_form_and_brute_force() {
        for l in 0..=6usize {
            let pc = l * l.saturating_sub(1) / 2;
            for p in 0..=6 {
                let n = hbar_coefficient_terms(l, p, &vec![1; l]).unwrap().len();
                assert_eq!(n as u128, weak_composition_count(p, pc), "l={l} p={p}");
                if pc <= 6 {
                    assert_eq!(n, brute_compositions(p, pc), "l={l} p={p}");
                }
            }
        }
    }

    #[test]
    fn weights_sum_to_exponential_coefficient() {
        // With all couplings equal, Σ weights = (−a² C(l,2))^p / p!.
        for l in 0..=4usize {
            let pc = (l * l.saturating_sub(1) / 2) as i64;
            for p in 0..=4u32 {
                let fams = hbar_coefficient_terms(l, p, &vec![1; l]).unwrap();
                let expect = Laurent::monomial(
                    BigRational::from_integer((-pc).pow(p).into()) * inverse_factorial(p),
                    2 * p as i32,
                );
                assert_eq!(total_weight(&fams), expect, "l={l} p={p}");
            }
        }
    }

    #[test]
    fn split_examples() {
        let s = functional_derivative_splits(2, 2).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            s,
            vec![
                (vec![2, 0], half.clone()),
                (vec![1, 1], BigRational::one()),
                (vec![0, 2], half)
            ]
        );
        assert_eq!(
            functional_derivative_splits(1, 5).unwrap(),
            vec![(vec![5], BigRational::new(1.into(), 120.into()))]
        );
        assert_eq!(functional_derivative_splits(3, 2).unwrap().len(), 6);
        assert!(functional_derivative_splits(0, 1).is_err());
    }

    #[test]
    fn derivative_order_examples() {
        assert_eq!(max_derivative_order(CurrentPart::S2, 1), 4);
        assert_eq!(max_derivative_order(CurrentPart::R1, 2), 4);
        assert_eq!(max_derivative_order(CurrentPart::Q1, 0), 0);
    }

    #[test]
    fn scaling_degree_examples() {
        let mut f = hbar_coefficient_terms(2, 3, &[1, 1]).unwrap().remove(0);
        assert_eq!(scaling_degree_bound(&f), 0);
        f.derivative_profile.insert(1, vec![1, 1]);
        assert_eq!(scaling_degree_bound(&f), 2);
        assert_eq!(ambiguity_bound(0), Ambiguity::Unique);
        assert_eq!(ambiguity_bound(1), Ambiguity::Unique);
        assert_eq!(ambiguity_bound(4), Ambiguity::DeltaDerivativesUpTo(2));
        let p = Propagator {
            kind: PropagatorKind::Wightman,
            derivative_order: 3,
        };
        assert_eq!(p.scaling_degree_bound(), 3);
    }

    #[test]
    fn profile_count_matches_enumeration() {
        for args in 0..=3 {
            for budget in 0..=6 {
                let profiles = derivative_profiles(args, budget);
                assert_eq!(Some(profiles.len() as u128), derivative_profile_count(args, budget));
                assert!(profiles.iter().all(|p| p.values().flatten().sum::<u32>() <= budget));
                assert!(profiles.iter().all(|p| p.values().all(|v| !v.is_empty() && v.windows(2).all(|w| w[0] >= w[1]))));
            }
        }
        assert_eq!(derivative_profile_count(1, 4), Some(1 + 1 + 2 + 3 + 5));
    }

    #[test]
    fn ledger_examples() {
        let r = build_ledger(0, 1, LedgerComponent::S2, 2).unwrap();
        assert_eq!(r.max_scaling_degree, 2);
        assert_eq!(r.ambiguity_bound, Ambiguity::DeltaDerivativesUpTo(0));
        for t in 0..=8 {
            let r = build_ledger(1, t, LedgerComponent::S2, 3).unwrap();
            assert_eq!(r.ambiguity_bound, Ambiguity::DeltaDerivativesUpTo(2));
            assert!(r.verify());
        }
        let r = build_ledger(1, 3, LedgerComponent::S1, 3).unwrap();
        assert_eq!(r.ambiguity_bound, Ambiguity::DeltaDerivativesUpTo(0));
        assert_eq!(build_ledger(0, 2, LedgerComponent::S1, 1).unwrap().ambiguity_bound, Ambiguity::Unique);
    }

    #[test]
    fn ledger_counts_match_materialized_families() {
        for component in [LedgerComponent::S2, LedgerComponent::S1] {
            let r = build_ledger(1, 3, component, 2).unwrap();
            for e in &r.breakdown {
                let fams = ledger_families(1, e.l, e.p, component).unwrap();
                assert_eq!(fams.len() as u128, e.term_count);
                let sd = fams.iter().map(scaling_degree_bound).max().unwrap_or(0);
                assert_eq!(sd, e.max_scaling_degree);
            }
        }
    }

    #[test]
    fn tampered_ledger_fails_verification() {
        let mut r = build_ledger(2, 2, LedgerComponent::S2, 1).unwrap();
        assert!(r.verify());
        r.breakdown.last_mut().unwrap().ambiguity = Ambiguity::DeltaDerivativesUpTo(5);
        assert!(!r.verify());
    }

    proptest! {
        #[test]
        fn split_weights_sum_to_multinomial_total(l in 1usize..=5, j in 0u32..=6) {
            let sum = functional_derivative_splits(l, j)
                .unwrap()
                .into_iter()
                .fold(BigRational::zero(), |a, (_, w)| a + w);
            let expect = BigRational::from_integer((l as i64).pow(j).into()) * inverse_factorial(j);
            prop_assert_eq!(sum, expect);
        }

        #[test]
        fn compositions_are_valid_and_distinct(total in 0u32..=6, parts in 0usize..=5) {
            let c = weak_compositions(total, parts);
            prop_assert_eq!(c.len() as u128, weak_composition_count(total, parts));
            prop_assert!(c.iter().all(|v| v.len() == parts && v.iter().sum::<u32>() == total));
            prop_assert!(c.windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn generated_families_stay_within_budget(n in 0u32..=2, l in 0usize..=2, p in 0u32..=2) {
            for component in [LedgerComponent::S2, LedgerComponent::S1] {
                let budget = component.degree_budget(n);
                for f in ledger_families(n, l, p, component).unwrap() {
                    prop_assert!(scaling_degree_bound(&f) <= budget);
                }
            }
        }
    }
}
