//! Canonical JSON form and text/LaTeX rendering of [`Expr`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coeff::Laurent;
use super::expr::Expr;
use super::monomial::{JetMonomial, TrigKind, TrigMode};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct TrigRepr {
    kind: TrigKind,
    mode: u32,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: Laurent,
    jets: Vec<(u32, u32)>,
    trig: TrigRepr,
}

impl Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms()
            .map(|(jets, trig, c)| TermRepr {
                coeff: c.clone(),
                jets: jets.factors().to_vec(),
                trig: TrigRepr {
                    kind: trig.kind(),
                    mode: trig.mode(),
                },
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        from_terms(terms).map_err(serde::de::Error::custom)
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    s.parse::<BigInt>()
        .map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
}

/// A Laurent polynomial serializes as `[[exponent, "numerator", "denominator"], …]`.
impl Serialize for Laurent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(i32, String, String)> = self
            .terms()
            .map(|(z, q)| (z, q.numer().to_string(), q.denom().to_string()))
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<(i32, String, String)>::deserialize(d)?;
        let mut coeff = Vec::with_capacity(terms.len());
        for (z, num, den) in terms {
            let den = parse_int(&den).map_err(serde::de::Error::custom)?;
            if den.is_zero() {
                return Err(serde::de::Error::custom(Error::Parse("zero denominator".into())));
            }
            let num = parse_int(&num).map_err(serde::de::Error::custom)?;
            coeff.push((z, BigRational::new(num, den)));
        }
        Ok(Laurent::from_terms(coeff))
    }
}

fn from_terms(terms: Vec<TermRepr>) -> Result<Expr> {
    let mut raw = Vec::with_capacity(terms.len());
    for t in terms {
        let trig = TrigMode::new(t.trig.kind, t.trig.mode).ok_or_else(|| {
            Error::Parse(format!("invalid trig mode {:?} {}", t.trig.kind, t.trig.mode))
        })?;
        let jets = JetMonomial::from_pairs(t.jets);
        raw.push(((jets, trig), t.coeff));
    }
    Ok(Expr::from_raw_terms(raw))
}

impl Expr {
    /// Canonical JSON text; byte-identical for equal expressions.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("Expr serialization is infallible")
    }

    /// Parses the canonical JSON form, canonicalizing non-canonical input.
    pub fn from_json(s: &str) -> Result<Expr> {
        let terms: Vec<TermRepr> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        from_terms(terms)
    }

    /// LaTeX math-mode rendering with `\varphi_{\xi\xi}`-style jets.
    pub fn to_latex(&self) -> String {
        render(self, &LATEX)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self, &TEXT))
    }
}

struct Style {
    laurent: fn(&BigRational, i32) -> String,
    jet: fn(u32, u32) -> String,
    trig: fn(TrigMode) -> String,
    open: &'static str,
    close: &'static str,
    sep: &'static str,
}

const TEXT: Style = Style {
    laurent: text_coeff,
    jet: text_jet,
    trig: text_trig,
    open: "(",
    close: ")",
    sep: " ",
};

const LATEX: Style = Style {
    laurent: latex_coeff,
    jet: latex_jet,
    trig: latex_trig,
    open: "\\left(",
    close: "\\right)",
    sep: "",
};

fn render(x: &Expr, st: &Style) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (jets, trig, c)) in x.terms().enumerate() {
        let mut body: Vec<String> = jets.factors().iter().map(|&(k, e)| (st.jet)(k, e)).collect();
        if !trig.is_unit() {
            body.push((st.trig)(*trig));
        }
        let (negative, coeff) = if c.len() == 1 {
            let (z, q) = c.terms().next().expect("one term");
            let unit = q.abs().is_one() && z == 0 && !body.is_empty();
            let text = if unit { String::new() } else { (st.laurent)(&q.abs(), z) };
            (q.is_negative(), text)
        } else {
            (false, format!("{}{}{}", st.open, laurent_body(c, st), st.close))
        };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let mut parts = Vec::new();
        if !coeff.is_empty() {
            parts.push(coeff);
        }
        parts.extend(body);
        out.push_str(&parts.join(st.sep));
    }
    out
}

fn laurent_body(c: &Laurent, st: &Style) -> String {
    let mut out = String::new();
    for (i, (z, q)) in c.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        match (i, q.is_negative()) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&(st.laurent)(&q.abs(), z));
    }
    out
}

fn text_coeff(q: &BigRational, z: i32) -> String {
    Laurent::monomial(q.clone(), z).to_string()
}

fn text_jet(k: u32, e: u32) -> String {
    JetMonomial::var(k, e).to_string()
}

fn text_trig(t: TrigMode) -> String {
    t.to_string()
}

fn latex_a(z: u32) -> String {
    match z {
        0 => String::new(),
        1 => "a".into(),
        k => format!("a^{{{k}}}"),
    }
}

/// Positive `q · a^z` as LaTeX.
fn latex_coeff(q: &BigRational, z: i32) -> String {
    let num = q.numer();
    let den = q.denom();
    let a = latex_a(z.unsigned_abs());
    let (top, bottom) = if z >= 0 {
        let top = if a.is_empty() {
            num.to_string()
        } else if num.is_one() {
            a
        } else {
            format!("{num}{a}")
        };
        (top, if den.is_one() { String::new() } else { den.to_string() })
    } else {
        let bottom = if den.is_one() { a } else { format!("{den}{a}") };
        (num.to_string(), bottom)
    };
    if bottom.is_empty() {
        top
    } else {
        format!("\\frac{{{top}}}{{{bottom}}}")
    }
}

fn latex_jet(k: u32, e: u32) -> String {
    let base = match k {
        0 => "\\varphi".to_string(),
        1..=3 => format!("\\varphi_{{{}}}", "\\xi".repeat(k as usize)),
        _ => format!("\\varphi_{{{k}\\xi}}"),
    };
    if e == 1 {
        base
    } else {
        format!("{base}^{{{e}}}")
    }
}

fn latex_trig(t: TrigMode) -> String {
    let arg = if t.mode() == 1 {
        "a\\varphi".to_string()
    } else {
        format!("{}a\\varphi", t.mode())
    };
    match t.kind() {
        TrigKind::Unit => String::new(),
        TrigKind::Sin => format!("\\sin({arg})"),
        TrigKind::Cos => format!("\\cos({arg})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Expr {
        &Expr::jet(3).scale(&Laurent::ratio(2, 1, -3)) + &Expr::jet(1).pow(3).scale(&Laurent::ratio(1, 3, -1))
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let x = &a3() + &Expr::cos_mode(2).scale(&(&Laurent::ratio(-5, 7, 2) + &Laurent::from_int(1)));
        let s = x.to_json();
        let y = Expr::from_json(&s).unwrap();
        assert_eq!(x, y);
        assert_eq!(s, y.to_json());
    }

    #[test]
    fn json_shape() {
        let s = Expr::jet(1).scale(&Laurent::ratio(2, 1, -1)).to_json();
        assert_eq!(s, r#"[{"coeff":[[-1,"2","1"]],"jets":[[1,1]],"trig":{"kind":"Unit","mode":0}}]"#);
        assert_eq!(Expr::zero().to_json(), "[]");
    }

    #[test]
    fn parse_canonicalizes_and_rejects_bad_input() {
        let dup = r#"[{"coeff":[[0,"1","2"]],"jets":[[1,1]],"trig":{"kind":"Unit","mode":0}},
                     {"coeff":[[0,"-1","2"]],"jets":[[1,1]],"trig":{"kind":"Unit","mode":0}}]"#;
        assert!(Expr::from_json(dup).unwrap().is_zero());
        let bad_trig = r#"[{"coeff":[[0,"1","1"]],"jets":[],"trig":{"kind":"Sin","mode":0}}]"#;
        assert!(matches!(Expr::from_json(bad_trig), Err(Error::Parse(_))));
        let bad_den = r#"[{"coeff":[[0,"1","0"]],"jets":[],"trig":{"kind":"Unit","mode":0}}]"#;
        assert!(matches!(Expr::from_json(bad_den), Err(Error::Parse(_))));
    }

    #[test]
    fn text_rendering() {
        assert_eq!(a3().to_string(), "1/(3a) φ_ξ^3 + 2/a^3 φ_ξξξ");
        let s11 = &(&Expr::jet(1).pow(2) * &Expr::cos_a()).scale(&Laurent::from_int(-1))
            + &(&Expr::jet(2) * &Expr::sin_a()).scale(&Laurent::ratio(-2, 1, -1));
        assert_eq!(s11.to_string(), "-φ_ξ^2 cos(aφ) - 2/a φ_ξξ sin(aφ)");
        assert_eq!(Expr::cos_a().scale(&Laurent::from_int(2)).to_string(), "2 cos(aφ)");
        assert_eq!(Expr::one().to_string(), "1");
    }

    #[test]
    fn latex_rendering() {
        assert_eq!(a3().to_latex(), "\\frac{1}{3a}\\varphi_{\\xi}^{3} + \\frac{2}{a^{3}}\\varphi_{\\xi\\xi\\xi}");
        assert_eq!(Expr::jet(4).to_latex(), "\\varphi_{4\\xi}");
        let mixed = Expr::jet(1).scale(&(&Laurent::a_pow(1) - &Laurent::ratio(1, 2, -1)));
        assert_eq!(mixed.to_latex(), "\\left(a - \\frac{1}{2a}\\right)\\varphi_{\\xi}");
    }
}
