#![allow(clippy::needless_range_loop)]

use crate::scalar::Scalar;

/// Rank of a matrix over the scalar field, by Gaussian elimination.
pub fn scalar_rank(rows: &[Vec<Scalar>]) -> usize {
    let Some(width) = rows.first().map(|r| r.len()) else {
        return 0;
    };
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let mut rank = 0;
    for col in 0..width {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for c in col..width {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..width {
                    let sub = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Solves the linear system `rows * x = rhs` over the scalar field.
/// Returns `None` if inconsistent; otherwise a particular solution with
/// free variables set to zero, together with the column ranks, so callers
/// can detect underdetermined systems.
pub fn solve_linear(rows: &[Vec<Scalar>], rhs: &[Scalar]) -> Option<(Vec<Scalar>, usize)> {
    assert_eq!(rows.len(), rhs.len());
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut m: Vec<Vec<Scalar>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let pivot = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let inv = m[rank][col].inv().expect("nonzero pivot");
        for c in col..=width {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=width {
                    let sub = &m[rank][c] * &factor;
                    m[r][c] = &m[r][c] - &sub;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    // inconsistent if a zero row has nonzero rhs
    for r in rank..m.len() {
        if !m[r][width].is_zero() {
            return None;
        }
    }
    let mut x = vec![Scalar::zero(); width];
    for (row, col) in pivots.iter().enumerate() {
        x[*col] = m[row][width].clone();
    }
    Some((x, rank))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_and_solve() {
        let rows = vec![vec![s(1), s(2)], vec![s(2), s(4)], vec![s(0), s(1)]];
        assert_eq!(scalar_rank(&rows), 2);
        let (x, rank) = solve_linear(
            &[vec![s(2), s(0)], vec![s(1), s(1)]],
            &[s(6), s(5)],
        )
        .unwrap();
        assert_eq!(rank, 2);
        assert_eq!(x, vec![s(3), s(2)]);
        assert!(solve_linear(&[vec![s(1)], vec![s(1)]], &[s(1), s(2)]).is_none());
    }
}
