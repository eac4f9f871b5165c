//! Integer simplicial H1 for a 2-complex: fundamental cycles from a spanning
//! tree, triangle boundary relations, Smith normal form over the integers.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Class of a 1-cycle in `H1 ≅ Z^r ⊕ torsion`, in the coordinates fixed by
/// the complex's Smith decomposition. All-zero coordinates mean the cycle
/// bounds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct H1Class {
    coords: Vec<i128>,
}

impl H1Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }
}

/// H1 data of one complex: spanning tree, fundamental-cycle coordinates, and
/// the Smith form of the triangle-boundary relations.
pub struct H1 {
    edge_index: HashMap<(usize, usize), usize>,
    tree_edge: Vec<bool>,
    cycle_index: Vec<Option<usize>>,
    cycle_count: usize,
    u: Vec<Vec<i128>>,
    diag: Vec<i128>,
}

impl H1 {
    pub fn new(
        num_vertices: usize,
        basepoint: usize,
        edges: &[(usize, usize)],
        triangles: &[(usize, usize, usize)],
    ) -> H1 {
        let mut edge_index = HashMap::new();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); num_vertices];
        for (i, &(a, b)) in edges.iter().enumerate() {
            edge_index.insert((a, b), i);
            adj[a].push((b, i));
            adj[b].push((a, i));
        }

        // BFS spanning tree from the basepoint
        let mut tree_edge = vec![false; edges.len()];
        let mut seen = vec![false; num_vertices];
        seen[basepoint] = true;
        let mut queue = std::collections::VecDeque::from([basepoint]);
        while let Some(v) = queue.pop_front() {
            for &(u, e) in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    tree_edge[e] = true;
                    queue.push_back(u);
                }
            }
        }

        let mut cycle_index = vec![None; edges.len()];
        let mut cycle_count = 0;
        for (e, &t) in tree_edge.iter().enumerate() {
            if !t {
                cycle_index[e] = Some(cycle_count);
                cycle_count += 1;
            }
        }

        let h1 = H1 { edge_index, tree_edge, cycle_index, cycle_count, u: Vec::new(), diag: Vec::new() };

        // relation matrix: one column per triangle boundary
        let mut mat = vec![vec![0i128; triangles.len()]; cycle_count];
        for (t, &(a, b, c)) in triangles.iter().enumerate() {
            let z = h1.cycle_coords(&[a, b, c, a]);
            for (r, &v) in z.iter().enumerate() {
                mat[r][t] = v;
            }
        }
        let (u, diag) = smith(mat, cycle_count, triangles.len());
        H1 { u, diag, ..h1 }
    }

    /// Coordinates of a closed edge path in the fundamental-cycle basis:
    /// tree edges contribute nothing, each non-tree edge its signed count.
    fn cycle_coords(&self, path: &[usize]) -> Vec<i128> {
        let mut z = vec![0i128; self.cycle_count];
        for step in path.windows(2) {
            let (a, b) = (step[0], step[1]);
            if a == b {
                continue;
            }
            let (key, sgn) = if a < b { ((a, b), 1) } else { ((b, a), -1) };
            let e = *self.edge_index.get(&key).expect("path step is not an edge");
            if !self.tree_edge[e] {
                z[self.cycle_index[e].unwrap()] += sgn;
            }
        }
        z
    }

    /// The H1 class of a closed edge path.
    pub fn class_of_path(&self, path: &[usize]) -> Result<H1Class> {
        if path.len() < 1 || path.first() != path.last() {
            return Err(Error::OpenEdgePath);
        }
        for step in path.windows(2) {
            let (a, b) = (step[0], step[1]);
            if a != b {
                let key = if a < b { (a, b) } else { (b, a) };
                if !self.edge_index.contains_key(&key) {
                    return Err(Error::OpenEdgePath);
                }
            }
        }
        let z = self.cycle_coords(path);
        // y = U z, reduced modulo the invariant factors
        let mut coords = vec![0i128; self.cycle_count];
        for (r, row) in self.u.iter().enumerate() {
            let mut acc = 0i128;
            for (c, &val) in row.iter().enumerate() {
                acc += val * z[c];
            }
            coords[r] = acc;
        }
        for (r, &d) in self.diag.iter().enumerate() {
            coords[r] = coords[r].rem_euclid(d);
        }
        Ok(H1Class { coords })
    }

    /// Free rank of H1.
    pub fn rank(&self) -> usize {
        self.cycle_count - self.diag.len()
    }

    /// Nontrivial invariant factors.
    pub fn torsion(&self) -> Vec<i128> {
        self.diag.iter().copied().filter(|&d| d > 1).collect()
    }
}

/// Smith normal form of an integer matrix, tracking left transforms only:
/// returns `(U, diag)` with `U M V = diag(d_1, ..., d_t)`, the `d_i`
/// positive with `d_1 | d_2 | ...`.
pub(crate) fn smith(
    mut m: Vec<Vec<i128>>,
    rows: usize,
    cols: usize,
) -> (Vec<Vec<i128>>, Vec<i128>) {
    let mut u: Vec<Vec<i128>> = (0..rows)
        .map(|i| (0..rows).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diag = Vec::new();
    let mut p = 0;
    while p < rows && p < cols {
        // smallest nonzero pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in p..rows {
            for j in p..cols {
                if m[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(p, pi);
        u.swap(p, pi);
        for row in m.iter_mut() {
            row.swap(p, pj);
        }

        let mut clean = true;
        for i in p + 1..rows {
            if m[i][p] != 0 {
                let q = m[i][p].div_euclid(m[p][p]);
                for j in p..cols {
                    m[i][j] -= q * m[p][j];
                }
                for j in 0..rows {
                    u[i][j] -= q * u[p][j];
                }
                if m[i][p] != 0 {
                    clean = false;
                }
            }
        }
        for j in p + 1..cols {
            if m[p][j] != 0 {
                let q = m[p][j].div_euclid(m[p][p]);
                for i in 0..rows {
                    m[i][j] -= q * m[i][p];
                }
                if m[p][j] != 0 {
                    clean = false;
                }
            }
        }
        if !clean {
            continue;
        }
        // divisibility: fold any non-multiple into the pivot's column
        let bad = (p + 1..rows)
            .flat_map(|i| (p + 1..cols).map(move |j| (i, j)))
            .find(|&(i, j)| m[i][j] % m[p][p] != 0);
        if let Some((i, _)) = bad {
            for j in p..cols {
                let add = m[i][j];
                m[p][j] += add;
            }
            for j in 0..rows {
                let add = u[i][j];
                u[p][j] += add;
            }
            continue;
        }
        if m[p][p] < 0 {
            for j in p..cols {
                m[p][j] = -m[p][j];
            }
            for j in 0..rows {
                u[p][j] = -u[p][j];
            }
        }
        diag.push(m[p][p]);
        p += 1;
    }
    (u, diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_small_matrices() {
        let (_, diag) = smith(vec![vec![2, 4], vec![6, 8]], 2, 2);
        assert_eq!(diag, vec![2, 4]);
        let (_, diag) = smith(vec![vec![2, 0], vec![0, 3]], 2, 2);
        assert_eq!(diag, vec![1, 6]);
        let (_, diag) = smith(vec![vec![0, 0], vec![0, 0]], 2, 2);
        assert!(diag.is_empty());
    }

    #[test]
    fn four_cycle_has_rank_one() {
        let edges = [(0, 1), (1, 2), (2, 3), (0, 3)];
        let h1 = H1::new(4, 0, &edges, &[]);
        assert_eq!(h1.rank(), 1);
        let class = h1.class_of_path(&[0, 1, 2, 3, 0]).unwrap();
        assert!(!class.is_zero());
        let back_and_forth = h1.class_of_path(&[0, 1, 0]).unwrap();
        assert!(back_and_forth.is_zero());
        assert!(h1.class_of_path(&[0, 1, 2]).is_err());
    }

    #[test]
    fn filled_triangle_is_trivial() {
        let edges = [(0, 1), (0, 2), (1, 2)];
        let h1 = H1::new(3, 0, &edges, &[(0, 1, 2)]);
        assert_eq!(h1.rank(), 0);
        assert!(h1.torsion().is_empty());
        let class = h1.class_of_path(&[0, 1, 2, 0]).unwrap();
        assert!(class.is_zero());
    }

    #[test]
    fn torus_like_relations_leave_torsion() {
        // one cycle, one relation of multiplicity two: Z/2
        let (u, diag) = smith(vec![vec![2]], 1, 1);
        assert_eq!(diag, vec![2]);
        assert_eq!(u, vec![vec![1]]);
    }
}
