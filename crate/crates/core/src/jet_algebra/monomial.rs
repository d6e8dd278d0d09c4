use std::fmt;

use serde::{Deserialize, Serialize};

/// A product `Π φ_{kξ}^{e_k}` of ξ-jet variables, `k = 0` being the field itself.
///
/// Stored as `(k, e)` pairs sorted by `k` with every `e > 0`; the derived
/// ordering is therefore lexicographic by order then exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JetMonomial {
    factors: Vec<(u32, u32)>,
}

impl JetMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `φ_{kξ}^e`.
    pub fn var(k: u32, e: u32) -> Self {
        Self::from_pairs([(k, e)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut factors: Vec<(u32, u32)> = Vec::new();
        for (k, e) in pairs {
            if e == 0 {
                continue;
            }
            match factors.binary_search_by_key(&k, |(kk, _)| *kk) {
                Ok(pos) => factors[pos].1 += e,
                Err(pos) => factors.insert(pos, (k, e)),
            }
        }
        JetMonomial { factors }
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, k: u32) -> u32 {
        self.factors
            .binary_search_by_key(&k, |(kk, _)| *kk)
            .map(|pos| self.factors[pos].1)
            .unwrap_or(0)
    }

    /// `Σ k · e_k`.
    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|(k, e)| *k as u64 * *e as u64).sum()
    }

    /// Lowest jet order present.
    pub fn min_order(&self) -> Option<u32> {
        self.factors.first().map(|(k, _)| *k)
    }

    pub fn max_order(&self) -> Option<u32> {
        self.factors.last().map(|(k, _)| *k)
    }

    /// Number of jet factors counted with multiplicity.
    pub fn total_exponent(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &JetMonomial) -> JetMonomial {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (ka, ea) = self.factors[i];
            let (kb, eb) = other.factors[j];
            match ka.cmp(&kb) {
                std::cmp::Ordering::Less => {
                    out.push((ka, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((kb, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((ka, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.factors[i..]);
        out.extend_from_slice(&other.factors[j..]);
        JetMonomial { factors: out }
    }

    /// Removes one factor `φ_{kξ}`; `None` if absent.
    pub fn remove_one(&self, k: u32) -> Option<JetMonomial> {
        let pos = self.factors.binary_search_by_key(&k, |(kk, _)| *kk).ok()?;
        let mut factors = self.factors.clone();
        if factors[pos].1 == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some(JetMonomial { factors })
    }
}

impl fmt::Display for JetMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", jet_symbol(*k))?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn jet_symbol(k: u32) -> String {
    match k {
        0 => "φ".to_string(),
        1..=3 => format!("φ_{}", "ξ".repeat(k as usize)),
        _ => format!("φ_{k}ξ"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrigKind {
    Unit,
    Sin,
    Cos,
}

/// `1`, `sin(m·aφ)` or `cos(m·aφ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrigMode {
    kind: TrigKind,
    mode: u32,
}

impl TrigMode {
    pub const UNIT: TrigMode = TrigMode {
        kind: TrigKind::Unit,
        mode: 0,
    };

    pub fn sin(m: u32) -> Option<TrigMode> {
        (m > 0).then_some(TrigMode {
            kind: TrigKind::Sin,
            mode: m,
        })
    }

    pub fn cos(m: u32) -> TrigMode {
        if m == 0 {
            Self::UNIT
        } else {
            TrigMode {
                kind: TrigKind::Cos,
                mode: m,
            }
        }
    }

    /// Validating constructor used by the parser.
    pub fn new(kind: TrigKind, mode: u32) -> Option<TrigMode> {
        match kind {
            TrigKind::Unit => (mode == 0).then_some(Self::UNIT),
            TrigKind::Sin => Self::sin(mode),
            TrigKind::Cos => (mode > 0).then(|| Self::cos(mode)),
        }
    }

    pub fn kind(&self) -> TrigKind {
        self.kind
    }

    pub fn mode(&self) -> u32 {
        self.mode
    }

    pub fn is_unit(&self) -> bool {
        self.kind == TrigKind::Unit
    }

    /// Product-to-sum expansion; each entry is `(mode, sign)` and the whole sum
    /// carries an overall factor `1/2` unless one side is `Unit`.
    pub(crate) fn product(self, other: TrigMode) -> TrigProduct {
        use TrigKind::*;
        let (m, n) = (self.mode as i64, other.mode as i64);
        match (self.kind, other.kind) {
            (Unit, _) => TrigProduct::Single(other),
            (_, Unit) => TrigProduct::Single(self),
            // cos m cos n = ½[cos(m−n) + cos(m+n)]
            (Cos, Cos) => TrigProduct::Half(vec![cos_signed(m - n, 1), cos_signed(m + n, 1)]),
            // sin m sin n = ½[cos(m−n) − cos(m+n)]
            (Sin, Sin) => TrigProduct::Half(vec![cos_signed(m - n, 1), cos_signed(m + n, -1)]),
            // sin m cos n = ½[sin(m+n) + sin(m−n)]
            (Sin, Cos) => TrigProduct::Half(vec![sin_signed(m + n, 1), sin_signed(m - n, 1)]),
            // cos m sin n = ½[sin(m+n) − sin(m−n)]
            (Cos, Sin) => TrigProduct::Half(vec![sin_signed(m + n, 1), sin_signed(m - n, -1)]),
        }
    }
}

pub(crate) enum TrigProduct {
    Single(TrigMode),
    /// Terms with a relative sign, all scaled by `1/2`; `None` marks a vanishing `sin 0`.
    Half(Vec<Option<(TrigMode, i64)>>),
}

fn cos_signed(m: i64, sign: i64) -> Option<(TrigMode, i64)> {
    Some((TrigMode::cos(m.unsigned_abs() as u32), sign))
}

fn sin_signed(m: i64, sign: i64) -> Option<(TrigMode, i64)> {
    let s = if m < 0 { -sign } else { sign };
    TrigMode::sin(m.unsigned_abs() as u32).map(|t| (t, s))
}

impl fmt::Display for TrigMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arg = if self.mode == 1 {
            "aφ".to_string()
        } else {
            format!("{}aφ", self.mode)
        };
        match self.kind {
            TrigKind::Unit => Ok(()),
            TrigKind::Sin => write!(f, "sin({arg})"),
            TrigKind::Cos => write!(f, "cos({arg})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_merge_exponents() {
        let x = JetMonomial::from_pairs([(2, 1), (1, 2)]);
        let y = JetMonomial::var(1, 1);
        let p = x.mul(&y);
        assert_eq!(p.factors(), &[(1, 3), (2, 1)]);
        assert_eq!(p.degree(), 5);
        assert_eq!(p.remove_one(2).unwrap(), JetMonomial::var(1, 3));
        assert!(p.remove_one(7).is_none());
    }

    #[test]
    fn trig_normalization() {
        assert_eq!(TrigMode::cos(0), TrigMode::UNIT);
        assert!(TrigMode::sin(0).is_none());
        assert!(TrigMode::new(TrigKind::Cos, 0).is_none());
        assert!(TrigMode::UNIT < TrigMode::sin(3).unwrap());
        assert!(TrigMode::sin(5).unwrap() < TrigMode::cos(1));
    }

    #[test]
    fn jet_symbols() {
        assert_eq!(JetMonomial::from_pairs([(1, 2), (2, 1)]).to_string(), "φ_ξ^2 φ_ξξ");
        assert_eq!(JetMonomial::var(4, 1).to_string(), "φ_4ξ");
    }
}
