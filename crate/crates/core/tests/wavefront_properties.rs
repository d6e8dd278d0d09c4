use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use sg_core::wavefront::lp::{LinearSystem, Row};
use sg_core::wavefront::{
    collapse_coincident, connected_graphs, enumerate_and_verify, feasible, placements, ConfigurationClass,
    EdgeRule, ImmersedGraph, NullPoint, Target,
};

/// A valid immersion picked by index from the exhaustive lists.
fn immersion(rule: EdgeRule) -> impl Strategy<Value = ImmersedGraph> {
    (2usize..=4, any::<prop::sample::Index>(), any::<prop::sample::Index>()).prop_map(move |(n, gi, pi)| {
        let graphs = connected_graphs(n, false);
        let edges = gi.get(&graphs).clone();
        let pl = placements(n, &edges, 4);
        ImmersedGraph::from_pairs(pi.get(&pl).clone(), &edges, rule)
    })
}

fn any_rule() -> impl Strategy<Value = EdgeRule> {
    prop_oneof![Just(EdgeRule::Feynman), Just(EdgeRule::AntiFeynman), Just(EdgeRule::Wightman)]
}

fn verdicts(g: &ImmersedGraph) -> [bool; 3] {
    Target::ALL.map(|t| feasible(g, t).unwrap())
}

fn swap_time(v: [bool; 3]) -> [bool; 3] {
    [v[0], v[2], v[1]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_are_translation_invariant(
        (rule, g) in any_rule().prop_flat_map(|r| (Just(r), immersion(r))),
        du in -5i64..=5,
        dv in -5i64..=5,
    ) {
        let _ = rule;
        prop_assert_eq!(verdicts(&g), verdicts(&g.translate(du, dv)));
    }

    #[test]
    fn exchanging_null_directions_reverses_time(g in immersion(EdgeRule::Feynman)) {
        // u ↔ v maps t to −t, exchanging the forward and backward cones.
        prop_assert_eq!(swap_time(verdicts(&g)), verdicts(&g.swap_null()));
        let af = g.with_rule(EdgeRule::AntiFeynman);
        prop_assert_eq!(swap_time(verdicts(&af)), verdicts(&af.swap_null()));
    }

    #[test]
    fn wightman_verdicts_survive_exchanging_null_directions(g in immersion(EdgeRule::Wightman)) {
        prop_assert_eq!(verdicts(&g), verdicts(&g.swap_null()));
    }

    #[test]
    fn anti_feynman_flips_the_cones(g in immersion(EdgeRule::Feynman)) {
        let af = g.with_rule(EdgeRule::AntiFeynman);
        prop_assert_eq!(swap_time(verdicts(&g)), verdicts(&af));
    }

    #[test]
    fn collapse_preserves_all_zero_off_the_fully_coincident_case(g in immersion(EdgeRule::Feynman)) {
        prop_assume!(!g.is_fully_coincident());
        let q = collapse_coincident(&g);
        prop_assert_eq!(feasible(&g, Target::AllZero).unwrap(), feasible(&q, Target::AllZero).unwrap());
    }

    #[test]
    fn fourier_motzkin_agrees_with_vertex_enumeration(
        nvars in 1usize..=3,
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), -5i64..=5, any::<bool>()), 0..=5),
    ) {
        let mut sys = LinearSystem::new(nvars);
        let mut ineqs = Vec::new();
        for (c, r, is_eq) in rows {
            let row = Row::from_ints(&c[..nvars], r);
            if is_eq {
                sys.add_eq(row.clone());
                ineqs.push(row.clone());
                ineqs.push(negate(&row));
            } else {
                sys.add_ge(row.clone());
                ineqs.push(row);
            }
        }
        // Bounding box |x_i| ≤ 10⁶ so that a nonempty feasible set has a vertex.
        for i in 0..nvars {
            for s in [1, -1] {
                let mut c = vec![0i64; nvars];
                c[i] = s;
                let row = Row::from_ints(&c, -1_000_000);
                sys.add_ge(row.clone());
                ineqs.push(row);
            }
        }
        prop_assert_eq!(sys.is_feasible(), has_feasible_vertex(nvars, &ineqs));
    }
}

fn negate(r: &Row) -> Row {
    Row::new(r.coeffs.iter().map(|c| -c).collect(), -&r.rhs)
}

/// Brute force: try every choice of `nvars` tight constraints.
fn has_feasible_vertex(nvars: usize, rows: &[Row]) -> bool {
    let m = rows.len();
    let mut idx: Vec<usize> = (0..nvars).collect();
    if m < nvars {
        return false;
    }
    loop {
        if let Some(x) = solve(idx.iter().map(|&i| &rows[i]).collect()) {
            let ok = rows.iter().all(|r| {
                let lhs = r.coeffs.iter().zip(&x).fold(BigRational::zero(), |a, (c, v)| a + c * v);
                lhs >= r.rhs
            });
            if ok {
                return true;
            }
        }
        // Next combination.
        let mut k = nvars;
        loop {
            if k == 0 {
                return false;
            }
            k -= 1;
            if idx[k] < m - nvars + k {
                idx[k] += 1;
                for j in k + 1..nvars {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Unique solution of the square system `rows` taken as equalities.
fn solve(rows: Vec<&Row>) -> Option<Vec<BigRational>> {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(r.rhs.clone());
            v
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, piv);
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = &a[i][col] / &a[col][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some((0..n).map(|i| &a[i][n] / &a[i][i]).collect())
}

#[test]
fn sweep_examples() {
    let r = enumerate_and_verify(2, 3, EdgeRule::Feynman);
    assert!(r.passed());
    assert_eq!(r.infeasible_count, r.configurations_checked);

    let r = enumerate_and_verify(1, 5, EdgeRule::Wightman);
    assert_eq!(r.configurations_checked, 1);
    assert!(r.passed());
}

#[test]
fn anti_feynman_sweep_fails_only_on_fully_coincident_cycles() {
    let r = enumerate_and_verify(4, 4, EdgeRule::AntiFeynman);
    assert!(r.sign_flip_mismatches.is_empty());
    assert_eq!(r.separated.counterexamples, 0);
    assert!(r
        .counterexamples
        .iter()
        .all(|c| c.class == ConfigurationClass::FullyCoincident && c.feasible_targets == vec![Target::AllZero]));
    // Triangle, square, diamond and K₄ stacked on one point.
    assert_eq!(r.counterexamples.len(), 4);
    assert_eq!(r.collapse_mismatches.len(), 4);
}

#[test]
fn wightman_sweep_is_clean() {
    let r = enumerate_and_verify(4, 3, EdgeRule::Wightman);
    assert!(r.passed());
}

#[test]
fn report_is_deterministic_and_serializable() {
    let a = enumerate_and_verify(3, 4, EdgeRule::Feynman);
    let b = enumerate_and_verify(3, 4, EdgeRule::Feynman);
    let sa = serde_json::to_string(&a).unwrap();
    assert_eq!(sa, serde_json::to_string(&b).unwrap());
    let back: sg_core::wavefront::SweepReport = serde_json::from_str(&sa).unwrap();
    assert_eq!(back, a);
    assert!(sa.contains("\"rule\":\"feynman\""));
}

#[test]
fn spacelike_edge_is_rejected() {
    let g = ImmersedGraph::from_pairs(vec![NullPoint::new(0, 0), NullPoint::new(1, 1)], &[(0, 1)], EdgeRule::Feynman);
    assert!(feasible(&g, Target::AllZero).is_err());
}
