use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of 2D Minkowski space in integer null coordinates, `t = u − v`, `x = u + v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NullPoint {
    pub u: i64,
    pub v: i64,
}

impl NullPoint {
    pub fn new(u: i64, v: i64) -> Self {
        Self { u, v }
    }

    pub fn time(&self) -> i64 {
        self.u - self.v
    }

    pub fn space(&self) -> i64 {
        self.u + self.v
    }

    pub fn translate(&self, du: i64, dv: i64) -> Self {
        Self::new(self.u + du, self.v + dv)
    }

    pub fn swap_null(&self) -> Self {
        Self::new(self.v, self.u)
    }
}

impl fmt::Display for NullPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// How `p − q` sits relative to the light cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Separation {
    Coincident,
    /// `Δv = 0`, `Δu = d ≠ 0`.
    AlongU(i64),
    /// `Δu = 0`, `Δv = d ≠ 0`.
    AlongV(i64),
    NotNull,
}

pub fn separation(p: NullPoint, q: NullPoint) -> Separation {
    let (du, dv) = (p.u - q.u, p.v - q.v);
    match (du == 0, dv == 0) {
        (true, true) => Separation::Coincident,
        (false, true) => Separation::AlongU(du),
        (true, false) => Separation::AlongV(dv),
        (false, false) => Separation::NotNull,
    }
}

/// `η♭(p − q)` in covector components `(k_t, k_x)` for `η = diag(−1, 1)`.
pub fn flat(p: NullPoint, q: NullPoint) -> [i64; 2] {
    let (du, dv) = (p.u - q.u, p.v - q.v);
    [-(du - dv), du + dv]
}

/// Covector propagation rule of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeRule {
    Feynman,
    AntiFeynman,
    Wightman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub rule: EdgeRule,
}

/// A multigraph with vertices placed on the null grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ImmersedGraph {
    pub placement: Vec<NullPoint>,
    pub edges: Vec<Edge>,
}

impl ImmersedGraph {
    pub fn new(placement: Vec<NullPoint>, edges: Vec<Edge>) -> Self {
        Self { placement, edges }
    }

    /// Orients each unordered pair by the rule's convention: smaller index as
    /// source for Feynman and anti-Feynman edges, larger index for Wightman edges.
    pub fn from_pairs(placement: Vec<NullPoint>, pairs: &[(usize, usize)], rule: EdgeRule) -> Self {
        let edges = pairs
            .iter()
            .map(|&(i, j)| {
                let (lo, hi) = (i.min(j), i.max(j));
                let (source, target) = match rule {
                    EdgeRule::Wightman => (hi, lo),
                    _ => (lo, hi),
                };
                Edge { source, target, rule }
            })
            .collect();
        Self::new(placement, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.placement.len()
    }

    /// Checks vertex indices and the null-or-coincident condition on every edge.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        for (idx, e) in self.edges.iter().enumerate() {
            if e.source >= n || e.target >= n {
                return Err(Error::InvalidImmersion(format!("edge {idx} refers to a missing vertex")));
            }
            if e.source == e.target {
                return Err(Error::InvalidImmersion(format!("edge {idx} is a self-loop")));
            }
            let (p, q) = (self.placement[e.source], self.placement[e.target]);
            if separation(p, q) == Separation::NotNull {
                return Err(Error::InvalidImmersion(format!(
                    "edge {idx} joins {p} and {q}, which are not null-separated"
                )));
            }
        }
        Ok(())
    }

    pub fn translate(&self, du: i64, dv: i64) -> Self {
        Self::new(
            self.placement.iter().map(|p| p.translate(du, dv)).collect(),
            self.edges.clone(),
        )
    }

    /// Exchanges the two null directions of every placement.
    pub fn swap_null(&self) -> Self {
        Self::new(
            self.placement.iter().map(NullPoint::swap_null).collect(),
            self.edges.clone(),
        )
    }

    pub fn with_rule(&self, rule: EdgeRule) -> Self {
        Self::new(
            self.placement.clone(),
            self.edges.iter().map(|e| Edge { rule, ..*e }).collect(),
        )
    }

    /// True if there are edges and each joins two coincident vertices.
    pub fn is_fully_coincident(&self) -> bool {
        !self.edges.is_empty()
            && self
                .edges
                .iter()
                .all(|e| self.placement[e.source] == self.placement[e.target])
    }
}

/// Identifies vertices placed at the same point and deletes the edges between them.
pub fn collapse_coincident(g: &ImmersedGraph) -> ImmersedGraph {
    let mut points: Vec<NullPoint> = Vec::new();
    let mut class = Vec::with_capacity(g.vertex_count());
    for p in &g.placement {
        let idx = match points.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                points.push(*p);
                points.len() - 1
            }
        };
        class.push(idx);
    }
    let edges = g
        .edges
        .iter()
        .filter(|e| class[e.source] != class[e.target])
        .map(|e| Edge {
            source: class[e.source],
            target: class[e.target],
            rule: e.rule,
        })
        .collect();
    ImmersedGraph::new(points, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: i64, v: i64) -> NullPoint {
        NullPoint::new(u, v)
    }

    #[test]
    fn separations_and_flat() {
        assert_eq!(separation(p(3, 1), p(1, 1)), Separation::AlongU(2));
        assert_eq!(separation(p(1, 0), p(1, 2)), Separation::AlongV(-2));
        assert_eq!(separation(p(1, 1), p(1, 1)), Separation::Coincident);
        assert_eq!(separation(p(1, 2), p(0, 0)), Separation::NotNull);
        assert_eq!(flat(p(1, 0), p(0, 0)), [-1, 1]);
        assert_eq!(flat(p(0, 1), p(0, 0)), [1, 1]);
        assert_eq!(p(2, 1).time(), 1);
    }

    #[test]
    fn validation() {
        let ok = ImmersedGraph::from_pairs(vec![p(0, 0), p(2, 0)], &[(0, 1)], EdgeRule::Feynman);
        assert!(ok.validate().is_ok());
        let bad = ImmersedGraph::from_pairs(vec![p(0, 0), p(1, 1)], &[(0, 1)], EdgeRule::Feynman);
        assert!(matches!(bad.validate(), Err(Error::InvalidImmersion(_))));
        let w = ImmersedGraph::from_pairs(vec![p(0, 0), p(2, 0)], &[(0, 1)], EdgeRule::Wightman);
        assert_eq!((w.edges[0].source, w.edges[0].target), (1, 0));
    }

    #[test]
    fn collapse_examples() {
        // Two coincident vertices joined by an edge, one of them linked outward.
        let g = ImmersedGraph::from_pairs(vec![p(0, 0), p(0, 0), p(0, 3)], &[(0, 1), (1, 2)], EdgeRule::Feynman);
        let c = collapse_coincident(&g);
        assert_eq!(c.placement, vec![p(0, 0), p(0, 3)]);
        assert_eq!(c.edges, vec![Edge { source: 0, target: 1, rule: EdgeRule::Feynman }]);

        let loop_free = ImmersedGraph::from_pairs(vec![p(0, 0), p(1, 0)], &[(0, 1)], EdgeRule::Feynman);
        assert_eq!(collapse_coincident(&loop_free), loop_free);
    }
}
