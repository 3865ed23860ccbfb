//! Square bit matrices over GF(2): adjacency forms of intersection graphs,
//! rank and determinant by elimination, and the explicit congruence witness
//! for the vertex-slide move.

use std::fmt;

use thiserror::Error;

use crate::graph::{GraphError, IntersectionGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("line {line}: invalid character {ch:?} (expected '0' or '1')")]
    InvalidChar { line: usize, ch: char },
    #[error("matrix is not square: row {row} has {got} columns, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix order {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
}

/// An n-by-n matrix over GF(2), one `u64` row bitmask per row (n <= 64).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2Matrix {
    n: usize,
    rows: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zero(n: usize) -> Self {
        assert!(n <= 64);
        Self {
            n,
            rows: vec![0; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i] = 1 << i;
        }
        m
    }

    pub fn from_rows(rows: Vec<u64>) -> Self {
        let n = rows.len();
        assert!(n <= 64);
        Self { n, rows }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        (self.rows[i] >> j & 1) as u8
    }

    pub fn set(&mut self, i: usize, j: usize, bit: u8) {
        if bit & 1 == 1 {
            self.rows[i] |= 1 << j;
        } else {
            self.rows[i] &= !(1 << j);
        }
    }

    /// The adjacency matrix of an intersection graph: off-diagonal entry
    /// (u, v) is the directed-edge bit u -> v; diagonal entry (v, v) is 1
    /// iff the two label colors of v differ.
    pub fn adjacency(g: &IntersectionGraph) -> Self {
        let n = g.vertex_count();
        assert!(n <= 64, "adjacency matrices support up to 64 vertices");
        let mut m = Self::zero(n);
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    m.set(u, u, u8::from(!g.label(u).is_diagonal()));
                } else {
                    m.set(u, v, u8::from(g.directed(u, v)));
                }
            }
        }
        m
    }

    /// Rank over GF(2) by row elimination.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.n {
            let Some(pivot) = (rank..self.n).find(|&r| rows[r] >> col & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            for r in 0..self.n {
                if r != rank && rows[r] >> col & 1 == 1 {
                    rows[r] ^= rows[rank];
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant mod 2: 1 iff the matrix has full rank. The order-0
    /// matrix has determinant 1 (empty product).
    pub fn det(&self) -> u8 {
        u8::from(self.rank() == self.n)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            let mut acc = 0u64;
            for j in 0..self.n {
                if self.rows[i] >> j & 1 == 1 {
                    acc ^= other.rows[j];
                }
            }
            m.rows[i] = acc;
        }
        m
    }

    /// Reorders rows and columns so position `i` holds old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(perm[i], perm[j]));
            }
        }
        m
    }

    /// The elementary matrix that adds row 2 to row 1: the identity with an
    /// extra 1 in position (0, 1).
    pub fn add_second_row_to_first(n: usize) -> Self {
        let mut p = Self::identity(n);
        if n >= 2 {
            p.set(0, 1, 1);
        }
        p
    }

    /// Semisymmetry for matrices: whenever a diagonal entry is 0, that row
    /// and column agree.
    pub fn is_semisymmetric(&self) -> bool {
        for i in 0..self.n {
            if self.get(i, i) == 0 {
                for j in 0..self.n {
                    if self.get(i, j) != self.get(j, i) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Parses `n` lines of `0`/`1` characters.
    pub fn parse(text: &str) -> Result<Self, MatrixError> {
        let lines: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        let n = lines.len();
        if n > 64 {
            return Err(MatrixError::TooLarge(n));
        }
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines.iter().enumerate() {
            if line.chars().count() != n {
                return Err(MatrixError::NotSquare {
                    row: i + 1,
                    expected: n,
                    got: line.chars().count(),
                });
            }
            let mut row = 0u64;
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => row |= 1 << j,
                    _ => return Err(MatrixError::InvalidChar { line: i + 1, ch }),
                }
            }
            rows.push(row);
        }
        Ok(Self { n, rows })
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.n {
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// Checks the explicit congruence between the adjacency matrices before and
/// after a vertex slide: with vertices reordered so `a` and `b` sit in
/// positions 1 and 2, it verifies `adj(slide(G)) = P · adj(G) · Pᵀ` exactly,
/// where `P` adds the second row to the first.
pub fn congruence_witness_check(
    g: &IntersectionGraph,
    a: usize,
    b: usize,
    color: usize,
) -> Result<bool, GraphError> {
    let slid = g.slide_vertex(a, b, color)?;
    let n = g.vertex_count();
    let mut perm = vec![a, b];
    perm.extend((0..n).filter(|&v| v != a && v != b));
    let before = Gf2Matrix::adjacency(&g.permuted(&perm));
    let after = Gf2Matrix::adjacency(&slid.permuted(&perm));
    let p = Gf2Matrix::add_second_row_to_first(n);
    Ok(after == p.mul(&before).mul(&p.transpose()))
}
