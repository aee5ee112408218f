use crate::rational::Rat;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Sparse exact matrix with Scalar entries. No zero entries are stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        let cur = self.entries.remove(&(r, c)).unwrap_or_else(Scalar::zero);
        let next = &cur + v;
        if !next.is_zero() {
            self.entries.insert((r, c), next);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.entries
            .get(&(r, c))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for ((r, c), v) in &rhs.entries {
            out.add_to(*r, *c, v);
        }
        out
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.add(&rhs.scale(&-&Scalar::one()))
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        if k.is_zero() {
            return Matrix::zero(self.rows, self.cols);
        }
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(rc, v)| (*rc, v * k))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zero(self.rows, rhs.cols);
        for ((r, k), a) in &self.entries {
            for c in 0..rhs.cols {
                if let Some(b) = rhs.entries.get(&(*k, c)) {
                    out.add_to(*r, c, &(a * b));
                }
            }
        }
        out
    }

    /// Coefficients of the characteristic polynomial det(t I - M), highest
    /// degree first, by the Faddeev-LeVerrier recursion over the exact
    /// scalar field. The algebraic object behind spectral questions; no
    /// root-finding is attempted.
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let n = self.rows;
        let mut coeffs = vec![Scalar::one()];
        let mut m = Matrix::zero(n, n);
        for k in 1..=n {
            // M_k = A (M_{k-1} + c_{k-1} I)
            let mut shifted = m.clone();
            for i in 0..n {
                shifted.add_to(i, i, coeffs.last().unwrap());
            }
            m = self.mul(&shifted);
            let mut trace = Scalar::zero();
            for i in 0..n {
                trace = &trace + &m.get(i, i);
            }
            let c = &(-&trace) * &Scalar::from_rat(Rat::new(1, k as i64));
            coeffs.push(c);
        }
        coeffs
    }

    /// Exact evaluation of every entry at a rational parameter point.
    pub fn substitute(
        &self,
        assign: &BTreeMap<crate::param::Param, Rat>,
    ) -> crate::error::Result<Matrix> {
        let mut out = Matrix::zero(self.rows, self.cols);
        for ((r, c), v) in &self.entries {
            out.set(*r, *c, Scalar::from_rat(v.substitute(assign)?));
        }
        Ok(out)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row = (0..self.cols)
                .map(|c| self.get(r, c).to_string())
                .collect::<Vec<_>>()
                .join(", ");
            writeln!(f, "[{row}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_multiplication() {
        let mut a = Matrix::zero(2, 2);
        a.set(0, 1, Scalar::from_int(3));
        a.set(1, 0, Scalar::from_int(-2));
        let i = Matrix::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
    }

    #[test]
    fn characteristic_polynomial() {
        // [[2, 1], [0, 3]]: det(tI - M) = t^2 - 5t + 6
        let mut a = Matrix::zero(2, 2);
        a.set(0, 0, Scalar::from_int(2));
        a.set(0, 1, Scalar::from_int(1));
        a.set(1, 1, Scalar::from_int(3));
        assert_eq!(
            a.char_poly(),
            vec![Scalar::from_int(1), Scalar::from_int(-5), Scalar::from_int(6)]
        );
        // nilpotent: t^2
        let mut v = Matrix::zero(2, 2);
        v.set(1, 0, Scalar::one());
        assert_eq!(
            v.char_poly(),
            vec![Scalar::from_int(1), Scalar::zero(), Scalar::zero()]
        );
    }

    #[test]
    fn product_and_difference() {
        let mut a = Matrix::zero(2, 2);
        a.set(0, 0, Scalar::from_int(1));
        a.set(0, 1, Scalar::from_int(2));
        a.set(1, 1, Scalar::from_int(3));
        let b = a.mul(&a);
        assert_eq!(b.get(0, 1), Scalar::from_int(8));
        assert!(a.sub(&a).is_zero());
    }
}
