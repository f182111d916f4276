#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cosphere::{IsotropyPoset, OrbitType, TorusActionSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random poset passing validation: one identity type at the bottom,
/// further types ordered only upward in stabilizer dimension, each with its
/// own finite tag so equal-dimension comparisons are allowed.
pub fn random_valid_poset(rng: &mut impl Rng, max_types: usize) -> IsotropyPoset {
    let dim_g = rng.gen_range(1..=3);
    let dim_q = rng.gen_range(dim_g + 1..=dim_g + 5);
    let count = rng.gen_range(1..=max_types);
    let mut types = vec![(
        OrbitType {
            label: "e".into(),
            dim_h: 0,
            finite_tag: None,
            is_identity: true,
        },
        dim_q,
    )];
    let mut extra: Vec<(usize, usize)> = (1..count)
        .map(|_| {
            let dim_h = rng.gen_range(0..=dim_g);
            (dim_h, rng.gen_range(dim_g - dim_h..=dim_q))
        })
        .collect();
    extra.sort();
    for (i, (dim_h, dq)) in extra.into_iter().enumerate() {
        types.push((
            OrbitType {
                label: format!("H{}", i + 1),
                dim_h,
                finite_tag: Some(format!("Z{}", i + 2)),
                is_identity: false,
            },
            dq,
        ));
    }
    let mut rel = BTreeSet::new();
    for j in 1..types.len() {
        rel.insert((0, j));
        for i in 1..j {
            if rng.gen_bool(0.4) {
                rel.insert((i, j));
            }
        }
    }
    let closed = floyd_closure(types.len(), &rel);
    let labels: Vec<String> = types.iter().map(|(t, _)| t.label.clone()).collect();
    let order: Vec<(String, String)> = closed
        .iter()
        .map(|&(a, b)| (labels[a].clone(), labels[b].clone()))
        .collect();
    IsotropyPoset::new(dim_q, dim_g, types, &order).expect("generated poset is structurally sound")
}

/// Transitive closure by boolean matrix iteration.
pub fn floyd_closure(n: usize, rel: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let mut m = vec![vec![false; n]; n];
    for &(a, b) in rel {
        m[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] && m[k][j] {
                    m[i][j] = true;
                }
            }
        }
    }
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| m[i][j])
        .collect()
}

/// Hasse edges of a DAG: pairs whose longest connecting path has length one.
pub fn hasse_by_longest_path<T: Ord + Clone>(rel: &BTreeSet<(T, T)>) -> BTreeSet<(T, T)> {
    let nodes: BTreeSet<T> = rel
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    let idx: BTreeMap<T, usize> = nodes
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let n = nodes.len();
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in rel {
        adj[idx[a]][idx[b]] = true;
    }
    // longest[i][j]: length of the longest path, 0 when none
    let mut longest = vec![vec![0usize; n]; n];
    for _ in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut best = usize::from(adj[i][j]);
                for k in 0..n {
                    if adj[i][k] && longest[k][j] > 0 {
                        best = best.max(longest[k][j] + 1);
                    }
                }
                longest[i][j] = best;
            }
        }
    }
    let back: Vec<T> = nodes.into_iter().collect();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if longest[i][j] == 1 {
                out.insert((back[i].clone(), back[j].clone()));
            }
        }
    }
    out
}

pub fn random_spec(
    rng: &mut impl Rng,
    max_k: usize,
    max_n: usize,
    max_weight: i64,
) -> TorusActionSpec {
    let k = rng.gen_range(1..=max_k);
    let n = rng.gen_range(1..=max_n);
    let mut weights = vec![vec![0i64; n]; k];
    for j in 0..n {
        loop {
            for row in weights.iter_mut() {
                row[j] = rng.gen_range(-max_weight..=max_weight);
            }
            if weights.iter().any(|row| row[j] != 0) {
                break;
            }
        }
    }
    TorusActionSpec::new(weights).expect("nonzero columns")
}

/// Fraction-free determinant of a small square integer matrix.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0..1usize << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `(rank, d_rank)` of the `k × |S|` matrix of columns in `support`, where
/// `d_rank` is the gcd of the maximal nonvanishing minors.
pub fn minors_oracle(spec: &TorusActionSpec, support: &BTreeSet<usize>) -> (usize, i128) {
    let cols: Vec<usize> = support.iter().copied().collect();
    let k = spec.k;
    for r in (1..=k.min(cols.len())).rev() {
        let mut g = 0i128;
        for rows in subsets(k, r) {
            for cs in subsets(cols.len(), r) {
                let m: Vec<Vec<i128>> = rows
                    .iter()
                    .map(|&i| {
                        cs.iter()
                            .map(|&c| spec.weights[i][cols[c]] as i128)
                            .collect()
                    })
                    .collect();
                g = gcd(g, det(&m));
            }
        }
        if g != 0 {
            return (r, g);
        }
    }
    (0, 1)
}

/// Whether column `j` lies in the integer span of the columns in `support`:
/// adding it must keep both the rank and the maximal-minor gcd.
pub fn column_in_span(spec: &TorusActionSpec, support: &BTreeSet<usize>, j: usize) -> bool {
    let mut bigger = support.clone();
    bigger.insert(j);
    minors_oracle(spec, support) == minors_oracle(spec, &bigger)
}

pub fn all_supports(n: usize) -> Vec<BTreeSet<usize>> {
    (0..1usize << n)
        .map(|m| (0..n).filter(|j| m >> j & 1 == 1).collect())
        .collect()
}
