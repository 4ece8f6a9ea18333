//! Balls in the Bass–Serre tree.
//!
//! A tree vertex over `v` is a coset `γ G_v` and is named by the normal
//! form `s0 y1 s1 ... yn` of `γ`, each `si` a coset representative at the
//! origin of `y(i+1)` and no `y ȳ` with the identity in between. Its
//! neighbours are the one-step extensions, so the degree over `v` is
//! `Σ [G_v : α_y(G_e)]` over the oriented edges `y` leaving `v`.

use crate::error::{Error, Result};
use crate::group::Elem;

use super::{Dir, GraphOfGroups, VertexId};

pub use crate::limits::{ball_cap, DEFAULT_BALL_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallVertex {
    /// The vertex of the graph of groups this tree vertex lies over.
    pub orbit: VertexId,
    pub depth: usize,
    /// Normal form of a coset representative; the stabilizer is its
    /// conjugate of the group at `orbit`.
    pub path: Vec<(Elem, Dir)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeBall {
    pub vertices: Vec<BallVertex>,
    /// `(parent, child, edge crossed)`, in discovery order.
    pub edges: Vec<(usize, usize, Dir)>,
}

impl TreeBall {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == i || b == i)
            .count()
    }
}

pub fn bass_serre_ball(g: &GraphOfGroups, basepoint: VertexId, radius: usize) -> Result<TreeBall> {
    bass_serre_ball_with_cap(g, basepoint, radius, ball_cap())
}

/// Breadth-first ball of the given radius around the vertex `G_basepoint`.
pub fn bass_serre_ball_with_cap(
    g: &GraphOfGroups,
    basepoint: VertexId,
    radius: usize,
    cap: usize,
) -> Result<TreeBall> {
    if basepoint >= g.vertices().len() {
        return Err(Error::InvalidGraph(format!("no vertex {basepoint}")));
    }
    if cap == 0 {
        return Err(Error::BallTooLarge { radius, cap });
    }
    let tables = g.tables();
    let mut vertices = vec![BallVertex {
        orbit: basepoint,
        depth: 0,
        path: Vec::new(),
    }];
    let mut edges = Vec::new();
    let mut head = 0;
    while head < vertices.len() {
        let (v, depth, last) = {
            let b = &vertices[head];
            (b.orbit, b.depth, b.path.last().map(|&(_, d)| d))
        };
        if depth == radius {
            head += 1;
            continue;
        }
        for d in g.dirs_from(v) {
            for &s in &tables.at_origin(d).reps {
                if s == 0 && last == Some(d.reverse()) {
                    continue;
                }
                if vertices.len() >= cap {
                    return Err(Error::BallTooLarge { radius, cap });
                }
                let mut path = vertices[head].path.clone();
                path.push((s, d));
                edges.push((head, vertices.len(), d));
                vertices.push(BallVertex {
                    orbit: g.terminus(d),
                    depth: depth + 1,
                    path,
                });
            }
        }
        head += 1;
    }
    Ok(TreeBall { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_ball_sizes() {
        let g = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        let sizes: Vec<usize> = (0..4)
            .map(|r| bass_serre_ball(&g, 0, r).unwrap().len())
            .collect();
        assert_eq!(sizes, vec![1, 3, 7, 11]);
        let b = bass_serre_ball(&g, 0, 2).unwrap();
        assert_eq!(b.degree(0), 2);
        assert_eq!(b.degree(1), 3);
    }

    #[test]
    fn ball_cap_is_enforced() {
        let g = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        assert!(matches!(
            bass_serre_ball_with_cap(&g, 0, 3, 10),
            Err(Error::BallTooLarge { radius: 3, cap: 10 })
        ));
    }
}
