//! The prime graph G(n), its GF(2) Laplace matrix, and even partitions.
//!
//! Vertices are the prime factors of n in ascending order; an edge joins p
//! and q exactly when the Legendre symbol (p/q) is −1 (symmetric here since
//! all factors are ≡ 1 mod 4, by quadratic reciprocity).

use crate::arithmetic::{legendre_symbol, FactoredInteger, RationalSquareClass};
use crate::f2linalg::{F2Matrix, F2Vector};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeGraph {
    /// Prime factors of n, strictly increasing.
    pub vertices: Vec<u64>,
    /// Symmetric adjacency matrix with zero diagonal.
    pub adjacency: F2Matrix,
}

/// A 2-coloring of the vertices, identified with its complement.
///
/// Canonical form assigns the first vertex to side 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    pub assignment: F2Vector,
}

impl PrimeGraph {
    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency.get(i, j)
    }

    /// Edges as (p, q) prime pairs with p < q.
    pub fn edges(&self) -> Vec<(u64, u64)> {
        let k = self.num_vertices();
        let mut out = Vec::new();
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(i, j) {
                    out.push((self.vertices[i], self.vertices[j]));
                }
            }
        }
        out
    }

    /// DOT-format rendering (undirected; vertex labels are the primes).
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for &p in &self.vertices {
            s.push_str(&format!("  {p};\n"));
        }
        for (p, q) in self.edges() {
            s.push_str(&format!("  {p} -- {q};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Build G(n) for squarefree n > 1 with all prime factors ≡ 1 (mod 4).
pub fn build_graph(n: &FactoredInteger) -> Result<PrimeGraph> {
    if !n.is_graph_admissible() {
        return Err(Error::InadmissibleInput {
            n: n.value,
            why: "graph needs squarefree n > 1 with all prime factors ≡ 1 mod 4".into(),
        });
    }
    let vertices: Vec<u64> = n.primes().collect();
    let k = vertices.len();
    let mut adjacency = F2Matrix::zero(k, k);
    for i in 0..k {
        for j in i + 1..k {
            let s = legendre_symbol(&RationalSquareClass::new(vertices[i] as i64), vertices[j])?;
            if s == -1 {
                adjacency.set(i, j, true);
                adjacency.set(j, i, true);
            }
        }
    }
    Ok(PrimeGraph {
        vertices,
        adjacency,
    })
}

/// Laplace matrix over GF(2): degree diagonal plus adjacency.
///
/// (Subtraction in the usual definition diag(d) − M is addition over F₂.)
pub fn laplace_matrix(g: &PrimeGraph) -> F2Matrix {
    let k = g.num_vertices();
    let mut l = g.adjacency.clone();
    for i in 0..k {
        let degree = (0..k).filter(|&j| g.has_edge(i, j)).count();
        l.set(i, i, degree % 2 == 1);
    }
    l
}

/// G is odd iff its Laplace matrix has rank k − 1.
pub fn is_odd_graph(g: &PrimeGraph) -> bool {
    let k = g.num_vertices();
    k >= 1 && laplace_matrix(g).rank() == k - 1
}

/// Number of even partitions: 2^(k − 1 − rank L).
pub fn count_even_partitions(g: &PrimeGraph) -> u64 {
    let k = g.num_vertices();
    debug_assert!(k >= 1);
    // rank L ≤ k − 1: the all-ones vector lies in the left kernel.
    let r = laplace_matrix(g).rank();
    1u64 << (k - 1 - r)
}

/// All even partitions in canonical form, by exhaustive search over the
/// 2^(k−1) colorings with vertex 0 on side 0.
pub fn enumerate_even_partitions(g: &PrimeGraph) -> Result<Vec<Partition>> {
    let k = g.num_vertices();
    if k > 20 {
        return Err(Error::TooLarge(format!(
            "exhaustive partition enumeration capped at 20 vertices, got {k}"
        )));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for mask in 0u32..1 << (k - 1) {
        // vertex 0 fixed to side 0; bit i of mask colors vertex i+1
        let color = |v: usize| -> bool { v > 0 && mask >> (v - 1) & 1 == 1 };
        let even = (0..k).all(|i| {
            let cross = (0..k)
                .filter(|&j| g.has_edge(i, j) && color(j) != color(i))
                .count();
            cross % 2 == 0
        });
        if even {
            let mut assignment = F2Vector::zero(k);
            for v in 0..k {
                assignment.set(v, color(v));
            }
            out.push(Partition { assignment });
        }
    }
    Ok(out)
}
