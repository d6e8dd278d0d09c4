//! Exhaustive sweep over small connected graphs immersed in a null-grid window.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{collapse_coincident, separation, EdgeRule, ImmersedGraph, NullPoint, Separation};
use super::system::{decide, induced_covector_system, Target};

pub type EdgeList = Vec<(usize, usize)>;

fn all_pairs(n: usize) -> EdgeList {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Connected simple graphs on `n` vertices, either all labeled ones or one
/// representative per isomorphism class (the one with the smallest edge mask).
pub fn connected_graphs(n: usize, up_to_isomorphism: bool) -> Vec<EdgeList> {
    if n == 0 {
        return Vec::new();
    }
    let pairs = all_pairs(n);
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let perms = if up_to_isomorphism { permutations(n) } else { Vec::new() };
    // Image of each pair index under each permutation.
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            pairs
                .iter()
                .map(|&(i, j)| index[&(p[i].min(p[j]), p[i].max(p[j]))])
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: EdgeList = (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
        if !is_connected(n, &edges) {
            continue;
        }
        if up_to_isomorphism {
            let minimal = images.iter().all(|img| {
                let m: u64 = (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| 1u64 << img[k]).sum();
                m >= mask
            });
            if !minimal {
                continue;
            }
        }
        out.push(edges);
    }
    out
}

/// Placements of the vertices in `[0, window)²` with every edge null or
/// coincident, normalized so that the minimal `u` and minimal `v` are 0.
pub fn placements(n: usize, edges: &[(usize, usize)], window: i64) -> Vec<Vec<NullPoint>> {
    // Visit order in which each vertex after the first has an earlier neighbour.
    let mut order = vec![0usize];
    let mut parent = vec![usize::MAX; n];
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        for &(a, b) in edges {
            let w = if a == v { b } else if b == v { a } else { continue };
            if w != 0 && parent[w] == usize::MAX {
                parent[w] = v;
                order.push(w);
            }
        }
        k += 1;
    }
    assert_eq!(order.len(), n, "graph must be connected");
    let mut out = Vec::new();
    let mut pos = vec![NullPoint::new(0, 0); n];
    let mut placed = vec![false; n];

    fn consistent(v: usize, pos: &[NullPoint], placed: &[bool], edges: &[(usize, usize)]) -> bool {
        edges.iter().all(|&(a, b)| {
            let w = if a == v { b } else if b == v { a } else { return true };
            !placed[w] || separation(pos[v], pos[w]) != Separation::NotNull
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        order: &[usize],
        parent: &[usize],
        edges: &[(usize, usize)],
        window: i64,
        pos: &mut Vec<NullPoint>,
        placed: &mut Vec<bool>,
        out: &mut Vec<Vec<NullPoint>>,
    ) {
        if k == order.len() {
            let min_u = pos.iter().map(|p| p.u).min().unwrap_or(0);
            let min_v = pos.iter().map(|p| p.v).min().unwrap_or(0);
            if min_u == 0 && min_v == 0 {
                out.push(pos.clone());
            }
            return;
        }
        let v = order[k];
        let candidates: Vec<NullPoint> = if k == 0 {
            (0..window).flat_map(|u| (0..window).map(move |w| NullPoint::new(u, w))).collect()
        } else {
            let p = pos[parent[v]];
            let mut c: Vec<NullPoint> = (0..window).map(|u| NullPoint::new(u, p.v)).collect();
            c.extend((0..window).filter(|&w| w != p.v).map(|w| NullPoint::new(p.u, w)));
            c.sort();
            c
        };
        for q in candidates {
            pos[v] = q;
            placed[v] = true;
            if consistent(v, pos, placed, edges) {
                go(k + 1, order, parent, edges, window, pos, placed, out);
            }
            placed[v] = false;
        }
    }

    go(0, &order, &parent, edges, window, &mut pos, &mut placed, &mut out);
    out
}

/// Geometry of each edge relative to its endpoints; verdicts depend only on this.
fn edge_pattern(g: &ImmersedGraph) -> Vec<u8> {
    g.edges
        .iter()
        .map(|e| match separation(g.placement[e.source], g.placement[e.target]) {
            Separation::Coincident => 0,
            Separation::AlongU(d) if d > 0 => 1,
            Separation::AlongU(_) => 2,
            Separation::AlongV(d) if d > 0 => 3,
            Separation::AlongV(_) => 4,
            Separation::NotNull => unreachable!("placements are null"),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Verdicts([bool; 3]);

impl Verdicts {
    fn of(g: &ImmersedGraph) -> Verdicts {
        let sys = induced_covector_system(g).expect("enumerated immersions are valid");
        Verdicts(Target::ALL.map(|t| decide(&sys, t)))
    }

    fn get(&self, t: Target) -> bool {
        self.0[t as usize]
    }

    fn feasible_targets(&self) -> Vec<Target> {
        Target::ALL.into_iter().filter(|&t| self.get(t)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConfigurationClass {
    /// Every edge joins coincident vertices.
    FullyCoincident,
    /// At least one edge joins distinct points.
    Separated,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Counterexample {
    pub class: ConfigurationClass,
    pub feasible_targets: Vec<Target>,
    pub immersion: ImmersedGraph,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub configurations: u64,
    pub counterexamples: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_max: usize,
    pub window: i64,
    pub rule: EdgeRule,
    pub configurations_checked: u64,
    /// Configurations for which every target is infeasible.
    pub infeasible_count: u64,
    pub counterexamples: Vec<Counterexample>,
    pub fully_coincident: ClassCounts,
    pub separated: ClassCounts,
    /// Immersions whose quotient by coincident vertices changes the all-zero verdict.
    pub collapse_mismatches: Vec<ImmersedGraph>,
    /// Anti-Feynman immersions whose verdicts differ from the Feynman ones with
    /// forward and backward exchanged.
    pub sign_flip_mismatches: Vec<ImmersedGraph>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Default)]
struct Partial {
    checked: u64,
    infeasible: u64,
    counterexamples: Vec<Counterexample>,
    fully_coincident: ClassCounts,
    separated: ClassCounts,
    collapse_mismatches: Vec<ImmersedGraph>,
    sign_flip_mismatches: Vec<ImmersedGraph>,
}

fn sweep_graph(n: usize, edges: &[(usize, usize)], window: i64, rule: EdgeRule) -> Partial {
    let mut part = Partial::default();
    let mut cache: HashMap<Vec<u8>, Verdicts> = HashMap::new();
    let mut feynman_cache: HashMap<Vec<u8>, Verdicts> = HashMap::new();
    let mut collapse_cache: HashMap<(EdgeList, Vec<u8>), bool> = HashMap::new();
    let check_collapse = rule != EdgeRule::Wightman;

    for placement in placements(n, edges, window) {
        let g = ImmersedGraph::from_pairs(placement, edges, rule);
        let key = edge_pattern(&g);
        let v = *cache.entry(key.clone()).or_insert_with(|| Verdicts::of(&g));
        part.checked += 1;
        let class = if g.is_fully_coincident() {
            ConfigurationClass::FullyCoincident
        } else {
            ConfigurationClass::Separated
        };
        let counts = match class {
            ConfigurationClass::FullyCoincident => &mut part.fully_coincident,
            ConfigurationClass::Separated => &mut part.separated,
        };
        counts.configurations += 1;
        let feasible = v.feasible_targets();
        if feasible.is_empty() {
            part.infeasible += 1;
        } else {
            counts.counterexamples += 1;
            part.counterexamples.push(Counterexample {
                class,
                feasible_targets: feasible,
                immersion: g.clone(),
            });
        }
        if check_collapse {
            let q = collapse_coincident(&g);
            let qkey = (q.edges.iter().map(|e| (e.source, e.target)).collect(), edge_pattern(&q));
            let collapsed = *collapse_cache
                .entry(qkey)
                .or_insert_with(|| Verdicts::of(&q).get(Target::AllZero));
            if collapsed != v.get(Target::AllZero) {
                part.collapse_mismatches.push(g.clone());
            }
        }
        if rule == EdgeRule::AntiFeynman {
            let f = *feynman_cache
                .entry(key)
                .or_insert_with(|| Verdicts::of(&g.with_rule(EdgeRule::Feynman)));
            let flipped = f.get(Target::AllZero) == v.get(Target::AllZero)
                && f.get(Target::AllForward) == v.get(Target::AllBackward)
                && f.get(Target::AllBackward) == v.get(Target::AllForward);
            if !flipped {
                part.sign_flip_mismatches.push(g);
            }
        }
    }
    part
}

/// Runs every connected graph with at most `n_max` vertices through every
/// placement in a `window × window` grid under a uniform edge rule.
///
/// Feynman and anti-Feynman runs use one graph per isomorphism class, since
/// their verdicts do not depend on vertex labels; Wightman edges are oriented
/// by label, so Wightman runs use all labeled graphs.
pub fn enumerate_and_verify(n_max: usize, window: i64, rule: EdgeRule) -> SweepReport {
    let iso = rule != EdgeRule::Wightman;
    let jobs: Vec<(usize, EdgeList)> = (1..=n_max)
        .flat_map(|n| connected_graphs(n, iso).into_iter().map(move |g| (n, g)))
        .collect();
    let parts: Vec<Partial> = jobs
        .par_iter()
        .map(|(n, edges)| sweep_graph(*n, edges, window, rule))
        .collect();
    let mut report = SweepReport {
        n_max,
        window,
        rule,
        configurations_checked: 0,
        infeasible_count: 0,
        counterexamples: Vec::new(),
        fully_coincident: ClassCounts::default(),
        separated: ClassCounts::default(),
        collapse_mismatches: Vec::new(),
        sign_flip_mismatches: Vec::new(),
    };
    for p in parts {
        report.configurations_checked += p.checked;
        report.infeasible_count += p.infeasible;
        report.counterexamples.extend(p.counterexamples);
        for (dst, src) in [
            (&mut report.fully_coincident, p.fully_coincident),
            (&mut report.separated, p.separated),
        ] {
            dst.configurations += src.configurations;
            dst.counterexamples += src.counterexamples;
        }
        report.collapse_mismatches.extend(p.collapse_mismatches);
        report.sign_flip_mismatches.extend(p.sign_flip_mismatches);
    }
    report.counterexamples.sort();
    report
}
