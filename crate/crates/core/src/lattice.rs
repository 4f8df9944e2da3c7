//! Integer lattices: membership by row echelon form, quotient invariants by
//! Smith normal form.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Extended gcd: returns (g, x, y) with a x + b y = g ≥ 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1, 0);
    let (mut y0, mut y1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-r0, -x0, -y0)
    } else {
        (r0, x0, y0)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    ext_gcd(a, b).0
}

/// Row echelon basis of the row lattice, pivots positive and entries above
/// each pivot reduced into [0, pivot).
#[allow(clippy::needless_range_loop)]
pub fn hermite_rows(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut out_rank = 0;
    for col in 0..ncols {
        // fold every row below out_rank into the pivot row via gcd steps
        for i in out_rank + 1..m.len() {
            if m[i][col] == 0 {
                continue;
            }
            if m[out_rank][col] == 0 {
                m.swap(out_rank, i);
                continue;
            }
            let (a, b) = (m[out_rank][col], m[i][col]);
            let (g, x, y) = ext_gcd(a, b);
            let (p, q) = (a / g, b / g);
            let top: Vec<i64> = (0..ncols).map(|j| x * m[out_rank][j] + y * m[i][j]).collect();
            let bottom: Vec<i64> = (0..ncols).map(|j| -q * m[out_rank][j] + p * m[i][j]).collect();
            m[out_rank] = top;
            m[i] = bottom;
        }
        if out_rank < m.len() && m[out_rank][col] != 0 {
            if m[out_rank][col] < 0 {
                m[out_rank].iter_mut().for_each(|x| *x = -*x);
            }
            let piv = m[out_rank][col];
            for i in 0..out_rank {
                let f = m[i][col].div_euclid(piv);
                if f != 0 {
                    for j in 0..ncols {
                        m[i][j] -= f * m[out_rank][j];
                    }
                }
            }
            out_rank += 1;
        }
    }
    m.truncate(out_rank);
    m
}

/// Nonzero diagonal of the Smith normal form, each dividing the next.
#[allow(clippy::needless_range_loop)]
pub fn smith_invariants(rows: &[Vec<i64>], ncols: usize) -> Vec<i64> {
    let mut m: Vec<Vec<i64>> = rows.to_vec();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the remaining block becomes the pivot
        let Some((pi, pj)) = (t..nrows)
            .flat_map(|i| (t..ncols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs())
        else {
            break;
        };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let f = m[i][t] / m[t][t];
            for j in t..ncols {
                m[i][j] -= f * m[t][j];
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..ncols {
            let f = m[t][j] / m[t][t];
            for i in t..nrows {
                m[i][j] -= f * m[i][t];
            }
            clean &= m[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // the pivot must divide the rest of the block
        let p = m[t][t];
        if let Some(i) = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| m[i][j] % p != 0)) {
            for j in t..ncols {
                m[t][j] += m[i][j];
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// A finitely generated abelian group ℤ^free ⊕ ⊕ ℤ/tᵢ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than 1, each dividing the next.
    pub torsion: Vec<i64>,
}

impl GroupInvariants {
    pub fn new(free_rank: usize, mut torsion: Vec<i64>) -> Self {
        torsion.retain(|&t| t != 1);
        torsion.sort();
        GroupInvariants { free_rank, torsion }
    }
}

impl fmt::Display for GroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = vec!["Z".to_string(); self.free_rank];
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A sublattice of ℤ^rank given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianLattice {
    rank: usize,
    gens: Vec<Vec<i64>>,
    echelon: Vec<Vec<i64>>,
}

impl AbelianLattice {
    pub fn new(rank: usize, gens: Vec<Vec<i64>>) -> Self {
        assert!(gens.iter().all(|g| g.len() == rank), "generator length must equal the lattice rank");
        let echelon = hermite_rows(&gens, rank);
        AbelianLattice { rank, gens, echelon }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.gens
    }

    pub fn join(&self, other: &AbelianLattice) -> AbelianLattice {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        AbelianLattice::new(self.rank, gens)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coefficients of `v` in the echelon basis, when `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let mut rest = v.to_vec();
        let mut coefs = Vec::with_capacity(self.echelon.len());
        for row in &self.echelon {
            let col = row.iter().position(|&x| x != 0).expect("echelon rows are nonzero");
            if rest[col] % row[col] != 0 {
                return None;
            }
            let f = rest[col] / row[col];
            for j in 0..self.rank {
                rest[j] -= f * row[j];
            }
            coefs.push(f);
        }
        rest.iter().all(|&x| x == 0).then_some(coefs)
    }

    /// Rank of the lattice itself.
    pub fn dimension(&self) -> usize {
        self.echelon.len()
    }

    /// `a` and `b` lie in the same coset.
    pub fn congruent(&self, a: &[i64], b: &[i64]) -> bool {
        let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.contains(&diff)
    }

    /// ℤ^rank modulo the lattice.
    pub fn quotient(&self) -> GroupInvariants {
        let diag = smith_invariants(&self.gens, self.rank);
        GroupInvariants::new(self.rank - diag.len(), diag)
    }
}

/// Invariants of ⟨numerator⟩ / ⟨relators⟩; `None` when a relator lies
/// outside the numerator.
pub fn quotient_invariants(numerator: &AbelianLattice, relators: &AbelianLattice) -> Option<GroupInvariants> {
    if numerator.rank != relators.rank {
        return None;
    }
    let coords: Vec<Vec<i64>> = relators.gens.iter().map(|r| numerator.coordinates(r)).collect::<Option<_>>()?;
    let m = numerator.dimension();
    let diag = smith_invariants(&coords, m);
    Some(GroupInvariants::new(m - diag.len(), diag))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_identity() {
        for (a, b) in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0), (-3, -9)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert!(g >= 0);
        }
    }

    #[test]
    fn membership() {
        let l = AbelianLattice::new(2, vec![vec![2, 0], vec![1, 3]]);
        assert!(l.contains(&[3, 3]));
        assert!(l.contains(&[0, 6]));
        assert!(!l.contains(&[0, 3]));
        assert!(l.congruent(&[1, 1], &[3, 1]));
    }

    #[test]
    fn smith_small() {
        assert_eq!(smith_invariants(&[vec![2, 4], vec![6, 8]], 2), vec![2, 4]);
        assert_eq!(smith_invariants(&[vec![0, 0]], 2), Vec::<i64>::new());
        let q = AbelianLattice::new(3, vec![vec![2, 0, 0], vec![0, 3, 0]]).quotient();
        assert_eq!(q, GroupInvariants::new(1, vec![6]));
        assert_eq!(q.to_string(), "Z + Z/6");
    }

    #[test]
    fn quotient_of_sublattice() {
        let num = AbelianLattice::new(2, vec![vec![2, 0], vec![0, 1]]);
        let rel = AbelianLattice::new(2, vec![vec![4, 0]]);
        assert_eq!(quotient_invariants(&num, &rel), Some(GroupInvariants::new(1, vec![2])));
        let outside = AbelianLattice::new(2, vec![vec![1, 0]]);
        assert_eq!(quotient_invariants(&num, &outside), None);
    }
}
