//! Permutations of `{0, .., n-1}` in one-line form.
//!
//! Products are read left to right: `p.then(&q)` applies `p` first. Cycle
//! notation in text is 1-based, `(1 2 3)` sends 1 to 2, 2 to 3 and 3 to 1.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidAction(format!(
                    "{images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        Perm(images)
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let bad = |msg: String| Error::Syntax {
            line: 1,
            column: 1,
            message: msg,
        };
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = vec![false; degree];
        let mut rest = text.trim();
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(bad(format!("expected `(` in cycle `{text}`")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| bad(format!("unclosed cycle in `{text}`")))?;
            let inner = &rest[1..close];
            let mut points = Vec::new();
            for tok in inner.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: usize = tok
                    .parse()
                    .map_err(|_| bad(format!("bad point `{tok}` in `{text}`")))?;
                if p == 0 || p > degree {
                    return Err(bad(format!("point {p} outside 1..={degree}")));
                }
                if seen[p - 1] {
                    return Err(bad(format!("point {p} repeated in `{text}`")));
                }
                seen[p - 1] = true;
                points.push(p - 1);
            }
            for (i, &p) in points.iter().enumerate() {
                images[p] = points[(i + 1) % points.len()] as u32;
            }
            rest = rest[close + 1..].trim_start();
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0[point] as usize
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.apply(start);
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.apply(p);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Concatenation acting on disjoint point sets: `self` on the first
    /// `self.degree()` points, `other` shifted after them.
    pub fn disjoint_sum(&self, other: &Perm) -> Perm {
        let shift = self.0.len() as u32;
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&i| i + shift));
        Perm(v)
    }
}

impl fmt::Display for Perm {
    /// 1-based cycle notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
