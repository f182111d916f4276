//! Integer linear algebra for character lattices of torus actions.
//!
//! A closed subgroup of a torus `T^k` is the annihilator of a subgroup of the
//! character lattice `Z^k`, so stabilizers are compared through the lattices
//! spanned by the weight vectors of the planes they fix. Lattices are kept in
//! row Hermite normal form, which is unique and makes equality structural.

use std::fmt;

fn gcd_ext(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, s, t) with g = s*a + t*b, g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Row Hermite normal form of the lattice spanned by `rows`, zero rows dropped.
///
/// Pivots are positive and entries above a pivot lie in `0..pivot`.
pub fn hermite_normal_form(rows: &[Vec<i64>], width: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), width, "generator length mismatch");
            r.iter().map(|&v| v as i128).collect()
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..width {
        if pivot_row >= m.len() {
            break;
        }
        // Fold every entry of this column below pivot_row into the pivot by
        // unimodular 2x2 row operations.
        for i in pivot_row + 1..m.len() {
            let a = m[pivot_row][col];
            let b = m[i][col];
            if b == 0 {
                continue;
            }
            let (g, s, t) = gcd_ext(a, b);
            let (ag, bg) = (a / g, b / g);
            for c in 0..width {
                let p = m[pivot_row][c];
                let q = m[i][c];
                m[pivot_row][c] = s * p + t * q;
                m[i][c] = -bg * p + ag * q;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            for c in 0..width {
                m[pivot_row][c] = -m[pivot_row][c];
            }
        }
        let pivot = m[pivot_row][col];
        for i in 0..pivot_row {
            let q = m[i][col].div_euclid(pivot);
            if q != 0 {
                for c in 0..width {
                    m[i][c] -= q * m[pivot_row][c];
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| i64::try_from(v).expect("hermite form entry overflow"))
                .collect()
        })
        .collect()
}

/// Nonzero diagonal of the Smith normal form of the matrix with the given rows.
///
/// The result has length equal to the rank and each entry divides the next.
pub fn smith_invariants(rows: &[Vec<i64>], width: usize) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let h = a.len();
    let mut diag = Vec::new();
    for t in 0..h.min(width) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 && best.map_or(true, |(bi, bj)| v.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return finish(diag);
            };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..h {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..width {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..width {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let offender = (t + 1..h).find(|&i| (t + 1..width).any(|j| a[i][j] % p != 0));
            if let Some(i) = offender {
                for j in t..width {
                    a[t][j] += a[i][j];
                }
                continue;
            }
            diag.push(p.abs());
            break;
        }
    }
    finish(diag)
}

fn finish(diag: Vec<i128>) -> Vec<i64> {
    diag.into_iter().map(|v| v as i64).collect()
}

/// Rank over the rationals of the matrix with the given rows.
pub fn rank(rows: &[Vec<i64>], width: usize) -> usize {
    hermite_normal_form(rows, width).len()
}

/// A subgroup of `Z^k`, stored by its Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntLattice {
    width: usize,
    basis: Vec<Vec<i64>>,
}

impl IntLattice {
    pub fn span(generators: &[Vec<i64>], width: usize) -> Self {
        Self {
            width,
            basis: hermite_normal_form(generators, width),
        }
    }

    pub fn full(width: usize) -> Self {
        let id: Vec<Vec<i64>> = (0..width)
            .map(|i| (0..width).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::span(&id, width)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let mut gens = self.basis.clone();
        gens.push(v.to_vec());
        hermite_normal_form(&gens, self.width) == self.basis
    }

    pub fn is_sublattice_of(&self, other: &IntLattice) -> bool {
        self.width == other.width && self.basis.iter().all(|b| other.contains(b))
    }

    /// Elementary divisors greater than one: the torsion of `saturation / self`.
    pub fn torsion(&self) -> Vec<i64> {
        smith_invariants(&self.basis, self.width)
            .into_iter()
            .filter(|&d| d > 1)
            .collect()
    }

    /// True when the lattice is spanned by `d_i e_i` for some coordinate subset.
    pub fn diagonal_entries(&self) -> Option<Vec<Option<i64>>> {
        let mut out = vec![None; self.width];
        for row in &self.basis {
            let nz: Vec<usize> = (0..self.width).filter(|&c| row[c] != 0).collect();
            if nz.len() != 1 {
                return None;
            }
            out[nz[0]] = Some(row[nz[0]]);
        }
        Some(out)
    }
}

impl fmt::Display for IntLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, ">")
    }
}
