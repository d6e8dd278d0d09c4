//! Exact feasibility of rational linear systems by Gaussian elimination of the
//! equalities followed by Fourier–Motzkin elimination of the inequalities.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `coeffs · x (= or ≥) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<BigRational>,
    pub rhs: BigRational,
}

impl Row {
    pub fn new(coeffs: Vec<BigRational>, rhs: BigRational) -> Self {
        Self { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Self {
        Self::new(
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            BigRational::from_integer(rhs.into()),
        )
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `self − f · other`.
    fn sub_scaled(&self, f: &BigRational, other: &Row) -> Row {
        Row {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - f * b)
                .collect(),
            rhs: &self.rhs - f * &other.rhs,
        }
    }

    /// Divides by the absolute value of the first nonzero coefficient.
    fn normalized(self) -> Row {
        let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
            return self;
        };
        Row {
            coeffs: self.coeffs.iter().map(|c| c / &lead).collect(),
            rhs: &self.rhs / &lead,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub nvars: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        Self {
            nvars,
            ..Default::default()
        }
    }

    pub fn add_eq(&mut self, row: Row) {
        debug_assert_eq!(row.coeffs.len(), self.nvars);
        self.equalities.push(row);
    }

    pub fn add_ge(&mut self, row: Row) {
        debug_assert_eq!(row.coeffs.len(), self.nvars);
        self.inequalities.push(row);
    }

    /// Exact decision: is there `x ∈ ℚⁿ` meeting every row?
    pub fn is_feasible(&self) -> bool {
        let mut eqs = self.equalities.clone();
        let mut ineqs = self.inequalities.clone();
        while let Some(eq) = eqs.pop() {
            let Some(j) = eq.coeffs.iter().position(|c| !c.is_zero()) else {
                if !eq.rhs.is_zero() {
                    return false;
                }
                continue;
            };
            let pivot = eq.coeffs[j].clone();
            for row in eqs.iter_mut().chain(ineqs.iter_mut()) {
                if !row.coeffs[j].is_zero() {
                    let f = &row.coeffs[j] / &pivot;
                    *row = row.sub_scaled(&f, &eq);
                }
            }
        }
        fourier_motzkin(ineqs, self.nvars)
    }
}

/// Keeps the tightest bound per normalized direction; `None` on a `0 ≥ c > 0` row.
fn tidy(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut best: HashMap<Vec<BigRational>, BigRational> = HashMap::new();
    let mut order = Vec::new();
    for row in rows {
        let row = row.normalized();
        if row.is_trivial() {
            if row.rhs.is_positive() {
                return None;
            }
            continue;
        }
        match best.get_mut(&row.coeffs) {
            Some(rhs) => {
                if row.rhs > *rhs {
                    *rhs = row.rhs;
                }
            }
            None => {
                order.push(row.coeffs.clone());
                best.insert(row.coeffs, row.rhs);
            }
        }
    }
    Some(
        order
            .into_iter()
            .map(|c| {
                let rhs = best.remove(&c).expect("recorded");
                Row::new(c, rhs)
            })
            .collect(),
    )
}

fn fourier_motzkin(rows: Vec<Row>, nvars: usize) -> bool {
    let Some(mut rows) = tidy(rows) else {
        return false;
    };
    loop {
        if rows.is_empty() {
            return true;
        }
        // Variable with the fewest generated combinations.
        let mut choice: Option<(usize, usize)> = None;
        for j in 0..nvars {
            let pos = rows.iter().filter(|r| r.coeffs[j].is_positive()).count();
            let neg = rows.iter().filter(|r| r.coeffs[j].is_negative()).count();
            if pos + neg == 0 {
                continue;
            }
            let cost = pos * neg;
            if choice.is_none_or(|(_, c)| cost < c) {
                choice = Some((j, cost));
            }
        }
        let Some((j, _)) = choice else {
            // Only trivial rows could remain, and tidy removed those.
            return true;
        };
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in rows {
            if r.coeffs[j].is_positive() {
                pos.push(r);
            } else if r.coeffs[j].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                // p/p_j + q/|q_j| cancels x_j with positive multipliers.
                let f = &q.coeffs[j] / &p.coeffs[j];
                rest.push(q.sub_scaled(&f, p));
            }
        }
        match tidy(rest) {
            Some(r) => rows = r,
            None => return false,
        }
    }
}
