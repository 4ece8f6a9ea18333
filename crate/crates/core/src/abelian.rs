//! Finitely generated abelian groups from integer relation matrices.

use std::fmt;

/// `Z^free_rank ⊕ Z_{d1} ⊕ ... ⊕ Z_{dk}` with `1 < d1 | d2 | ... | dk`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    /// Order of the group, `None` if infinite.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Invariant factors of a finite abelian group given by its cyclic factor orders.
    pub fn from_cyclic_factors(orders: &[u64]) -> Self {
        let rows: Vec<Vec<i64>> = orders
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                (0..orders.len())
                    .map(|j| if i == j { n as i64 } else { 0 })
                    .collect()
            })
            .collect();
        abelianize(&rows, orders.len())
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Diagonal of the Smith normal form of `rows`, an `m x n` matrix.
pub fn smith_diagonal(rows: &[Vec<i64>], n: usize) -> Vec<i64> {
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let m = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // pivot: nonzero entry of least absolute value in the remaining block
        let pivot = (t..m)
            .flat_map(|i| (t..n).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..n {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // the pivot must divide the rest of the block
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..n {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let (bi, bj) = (t..m)
                .map(|i| (i, t))
                .chain((t..n).map(|j| (t, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
                .unwrap();
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].abs() as i64);
        t += 1;
    }
    diag
}

/// The abelian group with `n` generators and the given relation rows.
pub fn abelianize(rows: &[Vec<i64>], n: usize) -> AbelianInvariants {
    let diag = smith_diagonal(rows, n);
    let torsion = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    AbelianInvariants {
        free_rank: n - diag.len(),
        torsion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_examples() {
        assert_eq!(abelianize(&[vec![2, 0], vec![0, 3]], 2).to_string(), "Z6");
        assert_eq!(
            abelianize(&[vec![2, 0], vec![0, 4]], 2).to_string(),
            "Z2 + Z4"
        );
        assert_eq!(abelianize(&[], 1).to_string(), "Z");
        assert_eq!(
            abelianize(&[vec![4, 0], vec![0, 6], vec![2, -3]], 2).to_string(),
            "Z12"
        );
        assert_eq!(abelianize(&[vec![1, 1]], 2).to_string(), "Z");
        assert!(abelianize(&[vec![1]], 1).is_trivial());
        assert_eq!(
            AbelianInvariants::from_cyclic_factors(&[6, 4]).torsion,
            vec![2, 12]
        );
    }
}
