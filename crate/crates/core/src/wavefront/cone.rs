//! Per-slot light-cone estimates over products of 2D cotangent spaces and the
//! exact check that two of them cannot sum to the zero section.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlotCone {
    /// Closed forward cone `V̄₊`.
    Forward,
    /// Closed backward cone `V̄₋`.
    Backward,
    Free,
    /// Only the zero covector.
    Zero,
}

/// The four pieces a 2D covector falls into; every slot condition is a union of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Atom {
    Zero,
    Forward,
    Backward,
    Spacelike,
}

const ATOMS: [Atom; 4] = [Atom::Zero, Atom::Forward, Atom::Backward, Atom::Spacelike];

impl Atom {
    fn negate(self) -> Atom {
        match self {
            Atom::Forward => Atom::Backward,
            Atom::Backward => Atom::Forward,
            a => a,
        }
    }
}

impl SlotCone {
    fn contains(self, a: Atom) -> bool {
        match self {
            SlotCone::Free => true,
            SlotCone::Zero => a == Atom::Zero,
            SlotCone::Forward => matches!(a, Atom::Zero | Atom::Forward),
            SlotCone::Backward => matches!(a, Atom::Zero | Atom::Backward),
        }
    }
}

/// A set of covector tuples described by product cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConeRegion {
    /// Union of the listed product cells.
    Cells(Vec<Vec<SlotCone>>),
    /// Complement of the union of the listed product cells.
    Excluding(Vec<Vec<SlotCone>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeEstimate {
    slots: usize,
    region: ConeRegion,
    /// The zero tuple is removed from the region.
    not_all_zero: bool,
}

impl ConeEstimate {
    /// The single product cell `slots[0] × … × slots[m−1]`.
    pub fn product(slots: Vec<SlotCone>, not_all_zero: bool) -> Self {
        Self {
            slots: slots.len(),
            region: ConeRegion::Cells(vec![slots]),
            not_all_zero,
        }
    }

    pub fn new(slots: usize, region: ConeRegion, not_all_zero: bool) -> Result<Self> {
        let cells = match &region {
            ConeRegion::Cells(c) | ConeRegion::Excluding(c) => c,
        };
        if let Some(bad) = cells.iter().find(|c| c.len() != slots) {
            return Err(Error::SlotMismatch {
                left: slots,
                right: bad.len(),
            });
        }
        Ok(Self {
            slots,
            region,
            not_all_zero,
        })
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn region(&self) -> &ConeRegion {
        &self.region
    }

    pub fn not_all_zero(&self) -> bool {
        self.not_all_zero
    }

    /// Membership depends only on the atom of each slot.
    fn contains(&self, atoms: &[Atom]) -> bool {
        if self.not_all_zero && atoms.iter().all(|&a| a == Atom::Zero) {
            return false;
        }
        let in_cell = |cell: &Vec<SlotCone>| cell.iter().zip(atoms).all(|(s, &a)| s.contains(a));
        match &self.region {
            ConeRegion::Cells(cells) => cells.iter().any(in_cell),
            ConeRegion::Excluding(cells) => !cells.iter().any(in_cell),
        }
    }
}

/// True iff no `r ∈ a`, `s ∈ b` satisfy `r + s = 0` slot-wise.
///
/// `r + s = 0` means `s = −r`, and negation permutes the atoms, so it
/// suffices to search atom tuples `α` with `α ∈ a` and `−α ∈ b`.
pub fn hormander_compose(a: &ConeEstimate, b: &ConeEstimate) -> Result<bool> {
    if a.slots != b.slots {
        return Err(Error::SlotMismatch {
            left: a.slots,
            right: b.slots,
        });
    }
    let m = a.slots;
    let mut atoms = vec![Atom::Zero; m];
    let mut neg = vec![Atom::Zero; m];
    let total = 4usize.pow(m as u32);
    for code in 0..total {
        let mut c = code;
        for i in 0..m {
            atoms[i] = ATOMS[c % 4];
            neg[i] = atoms[i].negate();
            c /= 4;
        }
        if a.contains(&atoms) && b.contains(&neg) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Estimate with slots `1..=l+1` backward and `l+2..=t+1` forward, zero tuple removed.
pub fn wightman_bipartite_estimate(l: usize, t: usize) -> ConeEstimate {
    assert!(l <= t, "need 0 ≤ l ≤ t");
    let mut slots = vec![SlotCone::Backward; l + 1];
    slots.extend(std::iter::repeat_n(SlotCone::Forward, t - l));
    ConeEstimate::product(slots, true)
}

/// Tuples over `first + second` slots avoiding every cell that is one closed
/// cone on the first block times one closed cone on the second block.
pub fn microlocal_excluded(first: usize, second: usize) -> ConeEstimate {
    let mut cells = Vec::new();
    for x in [SlotCone::Backward, SlotCone::Forward] {
        for y in [SlotCone::Backward, SlotCone::Forward] {
            let mut cell = vec![x; first];
            cell.extend(std::iter::repeat_n(y, second));
            cells.push(cell);
        }
    }
    ConeEstimate {
        slots: first + second,
        region: ConeRegion::Excluding(cells),
        not_all_zero: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use SlotCone::*;

    #[test]
    fn bipartite_shapes() {
        assert_eq!(wightman_bipartite_estimate(0, 1), ConeEstimate::product(vec![Backward, Forward], true));
        assert_eq!(wightman_bipartite_estimate(2, 2), ConeEstimate::product(vec![Backward; 3], true));
        assert_eq!(
            wightman_bipartite_estimate(1, 3),
            ConeEstimate::product(vec![Backward, Backward, Forward, Forward], true)
        );
    }

    #[test]
    fn composition_examples() {
        for t in 0..=4 {
            for l in 0..=t {
                let a = microlocal_excluded(l + 1, t - l);
                let b = wightman_bipartite_estimate(l, t);
                assert!(hormander_compose(&a, &b).unwrap(), "l={l} t={t}");
            }
        }
        let free = ConeEstimate::product(vec![Free; 3], false);
        assert!(!hormander_compose(&free, &free).unwrap());
        // r ∈ V̄₊ nonzero has −r ∈ V̄₋ nonzero.
        let f = ConeEstimate::product(vec![Forward; 2], true);
        let b = ConeEstimate::product(vec![Backward; 2], true);
        assert!(!hormander_compose(&f, &b).unwrap());
        // Forward on both sides cancels only at zero, which the flag removes.
        assert!(hormander_compose(&f, &f).unwrap());
        let f0 = ConeEstimate::product(vec![Forward; 2], false);
        assert!(!hormander_compose(&f0, &f0).unwrap());
    }

    #[test]
    fn zero_slot_and_mismatch() {
        let z = ConeEstimate::product(vec![Zero, Free], true);
        let s = ConeEstimate::product(vec![Forward, Forward], false);
        assert!(!hormander_compose(&z, &s).unwrap());
        let short = ConeEstimate::product(vec![Free], false);
        assert!(matches!(hormander_compose(&z, &short), Err(Error::SlotMismatch { left: 2, right: 1 })));
        assert!(matches!(
            ConeEstimate::new(2, ConeRegion::Cells(vec![vec![Free]]), false),
            Err(Error::SlotMismatch { .. })
        ));
    }

    #[test]
    fn dropping_one_excluded_cell_breaks_the_criterion() {
        let mut cells = Vec::new();
        for (x, y) in [(Backward, Backward), (Backward, Forward), (Forward, Forward)] {
            cells.push(vec![x, x, y]);
        }
        let weakened = ConeEstimate::new(3, ConeRegion::Excluding(cells), false).unwrap();
        assert!(!hormander_compose(&weakened, &wightman_bipartite_estimate(1, 2)).unwrap());
    }
}
