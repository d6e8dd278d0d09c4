use serde::{Deserialize, Serialize};

use super::grid::{flat, separation, EdgeRule, ImmersedGraph, Separation};
use super::lp::{LinearSystem, Row};
use crate::error::Result;

/// Which covector configuration over the vertices is asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Target {
    /// Every `k_i = 0`.
    AllZero,
    /// Every `k_i ∈ V̄₊`, not all zero.
    AllForward,
    /// Every `k_i ∈ V̄₋`, not all zero.
    AllBackward,
}

impl Target {
    pub const ALL: [Target; 3] = [Target::AllZero, Target::AllForward, Target::AllBackward];
}

/// Forward null rays `(k_t, k_x)` along the two axes.
pub const RAY_ALONG_U: [i64; 2] = [1, -1];
pub const RAY_ALONG_V: [i64; 2] = [1, 1];

/// Parametrization of one edge covector `k_e` by the unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeCovector {
    /// `k_e = λ · dir` with `λ > 0`.
    Ray { lambda: usize, dir: [i64; 2] },
    /// `k_e = (c_t, c_x) ≠ 0`.
    Free { t: usize, x: usize },
    /// `k_e = λ · r` with `λ > 0` and `r` either forward null ray.
    ForwardNull { lambda: usize },
}

/// `k_i = Σ_{σ(e)=i} k_e − Σ_{τ(e)=i} k_e` as linear forms in the unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CovectorSystem {
    pub nvars: usize,
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize, EdgeCovector)>,
}

pub fn induced_covector_system(g: &ImmersedGraph) -> Result<CovectorSystem> {
    g.validate()?;
    let mut nvars = 0;
    let mut next = || {
        nvars += 1;
        nvars - 1
    };
    let mut edges = Vec::with_capacity(g.edges.len());
    for e in &g.edges {
        let (p, q) = (g.placement[e.source], g.placement[e.target]);
        let sep = separation(p, q);
        let cov = match (e.rule, sep) {
            (EdgeRule::Wightman, Separation::Coincident) => EdgeCovector::ForwardNull { lambda: next() },
            (EdgeRule::Wightman, Separation::AlongU(_)) => EdgeCovector::Ray { lambda: next(), dir: RAY_ALONG_U },
            (EdgeRule::Wightman, Separation::AlongV(_)) => EdgeCovector::Ray { lambda: next(), dir: RAY_ALONG_V },
            (_, Separation::Coincident) => {
                let t = next();
                EdgeCovector::Free { t, x: next() }
            }
            (rule, _) => {
                let [a, b] = flat(p, q);
                let s = if rule == EdgeRule::AntiFeynman { -1 } else { 1 };
                EdgeCovector::Ray { lambda: next(), dir: [s * a.signum(), s * b.signum()] }
            }
        };
        edges.push((e.source, e.target, cov));
    }
    Ok(CovectorSystem {
        nvars,
        vertex_count: g.vertex_count(),
        edges,
    })
}

impl CovectorSystem {
    /// Number of edges whose forward null ray must be chosen.
    pub fn ray_choice_count(&self) -> usize {
        self.edges
            .iter()
            .filter(|(_, _, c)| matches!(c, EdgeCovector::ForwardNull { .. }))
            .count()
    }

    /// Integer forms `[k_t, k_x]` per vertex, with `rays` resolving the
    /// `ForwardNull` edges in order.
    pub fn vertex_forms(&self, rays: &[[i64; 2]]) -> Vec<[Vec<i64>; 2]> {
        let mut forms = vec![[vec![0i64; self.nvars], vec![0i64; self.nvars]]; self.vertex_count];
        let mut ray_iter = rays.iter();
        for &(s, t, cov) in &self.edges {
            let mut add = |var: usize, comp: usize, c: i64| {
                forms[s][comp][var] += c;
                forms[t][comp][var] -= c;
            };
            match cov {
                EdgeCovector::Ray { lambda, dir } => {
                    add(lambda, 0, dir[0]);
                    add(lambda, 1, dir[1]);
                }
                EdgeCovector::Free { t: vt, x: vx } => {
                    add(vt, 0, 1);
                    add(vx, 1, 1);
                }
                EdgeCovector::ForwardNull { lambda } => {
                    let r = ray_iter.next().expect("one ray per choice");
                    add(lambda, 0, r[0]);
                    add(lambda, 1, r[1]);
                }
            }
        }
        forms
    }

    fn positive_vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(|(_, _, c)| match c {
            EdgeCovector::Ray { lambda, .. } | EdgeCovector::ForwardNull { lambda } => Some(*lambda),
            EdgeCovector::Free { .. } => None,
        })
    }

    fn free_pairs(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .filter_map(|(_, _, c)| match c {
                EdgeCovector::Free { t, x } => Some((*t, *x)),
                _ => None,
            })
            .collect()
    }
}

fn unit(nvars: usize, var: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; nvars];
    v[var] = c;
    v
}

fn row(coeffs: &[i64], rhs: i64) -> Row {
    Row::from_ints(coeffs, rhs)
}

fn combine(a: &[i64], sa: i64, b: &[i64], sb: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| sa * x + sb * y).collect()
}

/// Convex pieces of the target region, each as extra rows on the unknowns.
/// Strict conditions are homogenized to `≥ 1`, which is exact because the
/// whole system is invariant under positive scaling.
fn target_cases(forms: &[[Vec<i64>; 2]], target: Target, nvars: usize) -> Vec<LinearSystem> {
    let mut base = LinearSystem::new(nvars);
    let sign = match target {
        Target::AllZero => {
            for [kt, kx] in forms {
                base.add_eq(row(kt, 0));
                base.add_eq(row(kx, 0));
            }
            return vec![base];
        }
        Target::AllForward => 1,
        Target::AllBackward => -1,
    };
    for [kt, kx] in forms {
        // sign·k_t ≥ |k_x|
        base.add_ge(row(&combine(kt, sign, kx, -1), 0));
        base.add_ge(row(&combine(kt, sign, kx, 1), 0));
    }
    // Inside a closed half cone, k_i ≠ 0 iff sign·k_{i,t} > 0.
    forms
        .iter()
        .map(|[kt, _]| {
            let mut s = base.clone();
            s.add_ge(row(&kt.iter().map(|c| sign * c).collect::<Vec<_>>(), 1));
            s
        })
        .collect()
}

/// Decides whether the vertex covectors of `g` can realize `target`.
///
/// A graph without edges carries no covectors and is infeasible for every target.
pub fn feasible(g: &ImmersedGraph, target: Target) -> Result<bool> {
    let sys = induced_covector_system(g)?;
    Ok(decide(&sys, target))
}

pub(crate) fn decide(sys: &CovectorSystem, target: Target) -> bool {
    if sys.edges.is_empty() {
        return false;
    }
    let m = sys.ray_choice_count();
    let free = sys.free_pairs();
    (0u32..1 << m).any(|mask| {
        let rays: Vec<[i64; 2]> = (0..m)
            .map(|b| if mask >> b & 1 == 1 { RAY_ALONG_V } else { RAY_ALONG_U })
            .collect();
        let forms = sys.vertex_forms(&rays);
        target_cases(&forms, target, sys.nvars).into_iter().any(|mut case| {
            for v in sys.positive_vars() {
                case.add_ge(row(&unit(sys.nvars, v, 1), 1));
            }
            nonzero_free_feasible(&case, &free)
        })
    })
}

/// With `P` the convex set cut out by `case`, a point of `P` where every free
/// pair is nonzero exists iff each pair is nonzero somewhere in `P`: finitely
/// many proper affine subspaces cannot cover a convex set spanning them.
fn nonzero_free_feasible(case: &LinearSystem, free: &[(usize, usize)]) -> bool {
    if !case.is_feasible() {
        return false;
    }
    let n = case.nvars;
    free.iter().all(|&(t, x)| {
        [(t, 1), (t, -1), (x, 1), (x, -1)].into_iter().any(|(var, s)| {
            let mut c = case.clone();
            c.add_ge(row(&unit(n, var, s), 1));
            c.is_feasible()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::super::grid::NullPoint;
    use super::*;

    fn p(u: i64, v: i64) -> NullPoint {
        NullPoint::new(u, v)
    }

    fn fey(placement: Vec<NullPoint>, pairs: &[(usize, usize)]) -> ImmersedGraph {
        ImmersedGraph::from_pairs(placement, pairs, EdgeRule::Feynman)
    }

    #[test]
    fn single_edge() {
        let g = fey(vec![p(0, 0), p(2, 0)], &[(0, 1)]);
        let sys = induced_covector_system(&g).unwrap();
        assert_eq!(sys.nvars, 1);
        let forms = sys.vertex_forms(&[]);
        // x₀ − x₁ = (Δu = −2): η♭ ∝ (1, −1).
        assert_eq!(forms[0], [vec![1], vec![-1]]);
        assert_eq!(forms[1], [vec![-1], vec![1]]);
        for t in Target::ALL {
            assert!(!feasible(&g, t).unwrap(), "{t:?}");
        }
    }

    #[test]
    fn coincident_pair_is_free() {
        let g = fey(vec![p(1, 1), p(1, 1)], &[(0, 1)]);
        let sys = induced_covector_system(&g).unwrap();
        assert_eq!(sys.edges[0].2, EdgeCovector::Free { t: 0, x: 1 });
        assert!(!feasible(&g, Target::AllZero).unwrap());
        // k₀ = c, k₁ = −c cannot both lie in one closed cone unless c = 0.
        assert!(!feasible(&g, Target::AllForward).unwrap());
    }

    #[test]
    fn triangle_on_one_null_line() {
        let g = fey(vec![p(0, 0), p(1, 0), p(3, 0)], &[(0, 1), (1, 2), (0, 2)]);
        let sys = induced_covector_system(&g).unwrap();
        assert_eq!(sys.nvars, 3);
        let forms = sys.vertex_forms(&[]);
        for [kt, kx] in &forms {
            // Every k_i lies on the ray spanned by (1, −1).
            assert_eq!(kt.iter().map(|c| -c).collect::<Vec<_>>(), *kx);
        }
        for t in Target::ALL {
            assert!(!feasible(&g, t).unwrap());
        }
    }

    #[test]
    fn coincident_triangle_admits_zero_sum() {
        let g = fey(vec![p(0, 0); 3], &[(0, 1), (1, 2), (0, 2)]);
        assert!(feasible(&g, Target::AllZero).unwrap());
        assert!(!feasible(&g, Target::AllForward).unwrap());
        assert!(!feasible(&g, Target::AllBackward).unwrap());
    }

    #[test]
    fn spacelike_edge_is_rejected() {
        let g = fey(vec![p(0, 0), p(1, 1)], &[(0, 1)]);
        assert!(feasible(&g, Target::AllZero).is_err());
    }

    #[test]
    fn edgeless_graph_is_infeasible() {
        let g = fey(vec![p(0, 0)], &[]);
        for t in Target::ALL {
            assert!(!feasible(&g, t).unwrap());
        }
    }

    #[test]
    fn wightman_rays() {
        // Larger index is the source; the ray follows the axis only.
        let g = ImmersedGraph::from_pairs(vec![p(0, 0), p(0, 2)], &[(0, 1)], EdgeRule::Wightman);
        let sys = induced_covector_system(&g).unwrap();
        assert_eq!(sys.edges[0], (1, 0, EdgeCovector::Ray { lambda: 0, dir: RAY_ALONG_V }));
        let c = ImmersedGraph::from_pairs(vec![p(0, 0), p(0, 0)], &[(0, 1)], EdgeRule::Wightman);
        assert_eq!(induced_covector_system(&c).unwrap().ray_choice_count(), 1);
        for t in Target::ALL {
            assert!(!feasible(&g, t).unwrap());
            assert!(!feasible(&c, t).unwrap());
        }
    }
}
