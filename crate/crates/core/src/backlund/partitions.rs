use serde::{Deserialize, Serialize};

/// Tuples `(n₀, …, n_R)` of nonnegative integers with `Σ nᵢ = S` and `Σ i·nᵢ = W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionConstraint {
    /// Largest index `R`; tuples have `R + 1` entries.
    pub max_index: u32,
    pub count_sum: u32,
    pub weighted_sum: u32,
}

impl PartitionConstraint {
    pub fn new(max_index: u32, count_sum: u32, weighted_sum: u32) -> Self {
        Self {
            max_index,
            count_sum,
            weighted_sum,
        }
    }

    pub fn is_satisfied_by(&self, n: &[u32]) -> bool {
        n.len() == self.max_index as usize + 1
            && n.iter().map(|&x| x as u64).sum::<u64>() == self.count_sum as u64
            && n
                .iter()
                .enumerate()
                .map(|(i, &x)| i as u64 * x as u64)
                .sum::<u64>()
                == self.weighted_sum as u64
    }
}

pub type PartitionSolution = Vec<u32>;

/// All solutions in descending lexicographic order.
pub fn enumerate_partitions(c: PartitionConstraint) -> Vec<PartitionSolution> {
    let mut out = Vec::new();
    let mut current = vec![0u32; c.max_index as usize + 1];
    if feasible(0, c.max_index, c.count_sum as u64, c.weighted_sum as u64) {
        dfs(0, c.max_index, c.count_sum as u64, c.weighted_sum as u64, &mut current, &mut out);
    }
    out
}

/// Whether indices `i..=r` can absorb `count` items of total weight `weight`.
fn feasible(i: u32, r: u32, count: u64, weight: u64) -> bool {
    if count == 0 {
        weight == 0
    } else {
        i as u64 * count <= weight && weight <= r as u64 * count
    }
}

fn dfs(i: u32, r: u32, count: u64, weight: u64, cur: &mut [u32], out: &mut Vec<PartitionSolution>) {
    if i == r {
        // Only n_r is left; it must absorb the whole remainder.
        if r as u64 * count == weight {
            cur[i as usize] = count as u32;
            out.push(cur.to_vec());
            cur[i as usize] = 0;
        }
        return;
    }
    let cap = if i == 0 { count } else { count.min(weight / i as u64) };
    for n in (0..=cap).rev() {
        let (c2, w2) = (count - n, weight - n * i as u64);
        if feasible(i + 1, r, c2, w2) {
            cur[i as usize] = n as u32;
            dfs(i + 1, r, c2, w2, cur, out);
        }
    }
    cur[i as usize] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Every tuple with `nᵢ ≤ S`, pruned only on the running count, filtered on both sums.
    fn brute_force(c: PartitionConstraint) -> Vec<PartitionSolution> {
        fn go(n: &mut Vec<u32>, len: usize, c: PartitionConstraint, out: &mut Vec<PartitionSolution>) {
            if n.len() == len {
                if c.is_satisfied_by(n) {
                    out.push(n.clone());
                }
                return;
            }
            let used: u32 = n.iter().sum();
            for x in 0..=c.count_sum - used {
                n.push(x);
                go(n, len, c, out);
                n.pop();
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), c.max_index as usize + 1, c, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    #[test]
    fn small_examples() {
        assert_eq!(enumerate_partitions(PartitionConstraint::new(1, 3, 1)), vec![vec![2, 1]]);
        assert_eq!(enumerate_partitions(PartitionConstraint::new(0, 0, 0)), vec![vec![0]]);
        assert_eq!(
            enumerate_partitions(PartitionConstraint::new(2, 2, 2)),
            vec![vec![1, 0, 1], vec![0, 2, 0]]
        );
        assert!(enumerate_partitions(PartitionConstraint::new(1, 1, 2)).is_empty());
        assert!(enumerate_partitions(PartitionConstraint::new(0, 1, 1)).is_empty());
    }

    #[test]
    fn matches_brute_force_on_full_grid() {
        for r in 0..=8 {
            for s in 0..=8 {
                for w in 0..=12 {
                    let c = PartitionConstraint::new(r, s, w);
                    assert_eq!(enumerate_partitions(c), brute_force(c), "{c:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn every_solution_satisfies_constraint(r in 0u32..=10, s in 0u32..=10, w in 0u32..=20) {
            let c = PartitionConstraint::new(r, s, w);
            let sols = enumerate_partitions(c);
            for pair in sols.windows(2) {
                prop_assert!(pair[0] > pair[1]);
            }
            for n in &sols {
                prop_assert!(c.is_satisfied_by(n));
            }
        }
    }
}
