//! The one-parameter deformation of osp(1,2): the two fermionic matrices
//! V_-, V_+ on P(n-1) (+) P(n) built from the Jackson operator at base q^2,
//! the three bosonic operators derived through q-anticommutators, and the
//! Casimir value.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::param::Param;
use crate::rational::Rat;
use crate::rep::QValue;
use crate::scalar::{q_number_of, Scalar};
use crate::space::GradedSpace;

/// Generators of the deformed osp(1,2) in its matrix realization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Osp12Gen {
    VMinus,
    VPlus,
    H,
    JMinus,
    JPlus,
}

#[derive(Clone, Debug)]
pub struct Osp12Rep {
    pub space: GradedSpace,
    pub v_minus: Matrix,
    pub v_plus: Matrix,
    pub h: Matrix,
    pub j_minus: Matrix,
    pub j_plus: Matrix,
    pub point: QValue,
}

impl Osp12Rep {
    pub fn matrix(&self, g: Osp12Gen) -> &Matrix {
        match g {
            Osp12Gen::VMinus => &self.v_minus,
            Osp12Gen::VPlus => &self.v_plus,
            Osp12Gen::H => &self.h,
            Osp12Gen::JMinus => &self.j_minus,
            Osp12Gen::JPlus => &self.j_plus,
        }
    }
}

/// Builds the osp(1,2)_q representation on P(n-1) (+) P(n):
///   V_- = (0, D_{q^2}; 1, 0),
///   V_+ = (0, q^{-2n} (x D_{q^2} - [n]_{q^2}); x, 0),
/// and H = {V_-,V_+}_q, J_- = {V_-,V_-}_q, J_+ = {V_+,V_+}_q.
pub fn build_osp12_rep(n: usize, q: QValue) -> Result<Osp12Rep> {
    if n < 1 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let qs = q.scalar();
    if qs.is_zero() {
        return Err(Error::InvalidParameter("q must be nonzero".into()));
    }
    let space = GradedSpace::new(n - 1, n);
    let dim = space.dim();
    let q2num = |k: usize| q_number_of(k as i64, &qs, 2);
    let qpow = |e: i64| qs.pow(e).expect("nonzero q");

    let mut v_minus = Matrix::zero(dim, dim);
    let mut v_plus = Matrix::zero(dim, dim);
    // lower-left blocks: inclusion and multiplication by x
    for k in 0..=space.upper.degree {
        v_minus.set(space.lower_index(k), space.upper_index(k), Scalar::one());
        v_plus.set(space.lower_index(k + 1), space.upper_index(k), Scalar::one());
    }
    // upper-right blocks: D_{q^2} and q^{-2n} (x D_{q^2} - [n]_{q^2})
    for k in 0..=space.lower.degree {
        if k >= 1 {
            v_minus.set(
                space.upper_index(k - 1),
                space.lower_index(k),
                q2num(k),
            );
        }
        let coeff = &qpow(-2 * (n as i64)) * &(&q2num(k) - &q2num(n));
        if !coeff.is_zero() {
            v_plus.set(space.upper_index(k), space.lower_index(k), coeff);
        }
    }

    let anti_q = |a: &Matrix, b: &Matrix| -> Matrix { a.mul(b).add(&b.mul(a).scale(&qs)) };
    let h = anti_q(&v_minus, &v_plus);
    let j_minus = anti_q(&v_minus, &v_minus);
    let j_plus = anti_q(&v_plus, &v_plus);

    Ok(Osp12Rep {
        space,
        v_minus,
        v_plus,
        h,
        j_minus,
        j_plus,
        point: q,
    })
}

/// The Casimir value C = -(1/2) [-n - 1/2]_{q^2}
///               = -(1/2) (1 - q^{-2n-1}) / (1 - q^2).
///
/// Exponents stay integral in q since 2(-n - 1/2) = -2n - 1. At q = 1 the
/// polynomial-limit form (2n+1)/4 is returned; q = 0 and q = -1 are poles.
pub fn casimir_value(n: usize, q: &QValue) -> Result<Scalar> {
    let exponent = -(2 * n as i64) - 1;
    match q {
        QValue::Symbolic => {
            let qs = Scalar::param(Param::Q);
            let num = &Scalar::one() - &qs.pow(exponent).expect("nonzero");
            let den = &Scalar::one() - &qs.pow(2).expect("nonzero");
            let half = Scalar::from_rat(Rat::new(-1, 2));
            Ok(&half * &(&num / &den))
        }
        QValue::At(v) => {
            if v.is_zero() {
                return Err(Error::InvalidParameter("q must be nonzero".into()));
            }
            if v.is_one() {
                // [-n - 1/2]_{q^2} -> -n - 1/2 as q -> 1
                return Ok(Scalar::from_rat(Rat::new(2 * n as i64 + 1, 4)));
            }
            let q2 = &v.pow(2)?;
            if q2.is_one() {
                return Err(Error::SubstitutionPole(format!("q = {v}")));
            }
            let num = &Rat::one() - &v.pow(exponent)?;
            let den = &Rat::one() - q2;
            Ok(Scalar::from_rat(&(&num / &den) * &Rat::new(-1, 2)))
        }
    }
}

#[derive(Clone, Debug)]
pub struct Osp12Report {
    pub failures: Vec<String>,
    pub dimension: usize,
}

impl Osp12Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn block_diagonal(space: &GradedSpace, m: &Matrix) -> bool {
    m.entries()
        .all(|((r, c), _)| space.is_upper(*r) == space.is_upper(*c))
}

fn block_off_diagonal(space: &GradedSpace, m: &Matrix) -> bool {
    m.entries()
        .all(|((r, c), _)| space.is_upper(*r) != space.is_upper(*c))
}

/// The structural checks of the deformed osp(1,2) realization:
/// J_+- = (1+q) V_+-^2, H and J_+- block-diagonal, V_+- block-off-diagonal,
/// and the overall space invariance implied by the square storage.
pub fn osp12_checks(rep: &Osp12Rep) -> Osp12Report {
    let mut failures = Vec::new();
    let q = rep.point.scalar();
    let one_plus_q = &Scalar::one() + &q;
    let jm = rep.v_minus.mul(&rep.v_minus).scale(&one_plus_q);
    if jm != rep.j_minus {
        failures.push("J_- != (1+q) V_-^2".into());
    }
    let jp = rep.v_plus.mul(&rep.v_plus).scale(&one_plus_q);
    if jp != rep.j_plus {
        failures.push("J_+ != (1+q) V_+^2".into());
    }
    for (name, m) in [("H", &rep.h), ("J_-", &rep.j_minus), ("J_+", &rep.j_plus)] {
        if !block_diagonal(&rep.space, m) {
            failures.push(format!("{name} is not block-diagonal"));
        }
    }
    for (name, m) in [("V_-", &rep.v_minus), ("V_+", &rep.v_plus)] {
        if !block_off_diagonal(&rep.space, m) {
            failures.push(format!("{name} is not block-off-diagonal"));
        }
    }
    Osp12Report {
        failures,
        dimension: rep.space.dim(),
    }
}

/// Evaluates a word in the osp(1,2) generators as a matrix.
pub fn evaluate_osp12_word(rep: &Osp12Rep, word: &[Osp12Gen]) -> Matrix {
    let mut m = Matrix::identity(rep.space.dim());
    for g in word {
        m = m.mul(rep.matrix(*g));
    }
    m
}

/// Optional hook: checks that a user-supplied operator expression (a linear
/// combination of words in the osp(1,2) generators) acts as the Casimir
/// value times the identity.
pub fn check_casimir_operator(
    rep: &Osp12Rep,
    terms: &[(Scalar, Vec<Osp12Gen>)],
    n: usize,
) -> Result<bool> {
    let mut acc = Matrix::zero(rep.space.dim(), rep.space.dim());
    for (c, word) in terms {
        acc = acc.add(&evaluate_osp12_word(rep, word).scale(c));
    }
    let expected = Matrix::identity(rep.space.dim()).scale(&casimir_value(n, &rep.point)?);
    Ok(acc == expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_minus_lower_left_is_inclusion() {
        let rep = build_osp12_rep(3, QValue::Symbolic).unwrap();
        for k in 0..=2usize {
            assert_eq!(
                rep.v_minus
                    .get(rep.space.lower_index(k), rep.space.upper_index(k)),
                Scalar::one()
            );
        }
    }

    #[test]
    fn structural_checks_pass() {
        for n in 1..=4usize {
            let rep = build_osp12_rep(n, QValue::Symbolic).unwrap();
            let report = osp12_checks(&rep);
            assert!(report.passed(), "n = {n}: {:?}", report.failures);
        }
        let rep = build_osp12_rep(2, QValue::At(Rat::new(7, 3))).unwrap();
        assert!(osp12_checks(&rep).passed());
    }

    #[test]
    fn casimir_examples() {
        // n = 0, q = 2: [-1/2]_4 = (1 - 1/2)/(1 - 4) = -1/6, so C = 1/12
        let c = casimir_value(0, &QValue::At(Rat::from_int(2))).unwrap();
        assert_eq!(c, Scalar::from_rat(Rat::new(1, 12)));
        // q -> 1 limit: C = (2n+1)/4
        for n in 0..4usize {
            let c = casimir_value(n, &QValue::At(Rat::one())).unwrap();
            assert_eq!(c, Scalar::from_rat(Rat::new(2 * n as i64 + 1, 4)));
        }
        // symbolic form equals -(1/2)(1 - q^{-2n-1})/(1 - q^2) structurally
        let c = casimir_value(2, &QValue::Symbolic).unwrap();
        let q = Scalar::param(Param::Q);
        let num = &Scalar::one() - &q.pow(-5).unwrap();
        let den = &Scalar::one() - &q.pow(2).unwrap();
        let direct = &Scalar::from_rat(Rat::new(-1, 2)) * &(&num / &den);
        assert_eq!(c, direct);
        // q = -1 is a pole of the quotient form
        assert!(casimir_value(1, &QValue::At(Rat::from_int(-1))).is_err());
    }

    #[test]
    fn casimir_hook_detects_scalar_action() {
        // the zero operator acts as the Casimir only if the value is zero
        let rep = build_osp12_rep(1, QValue::At(Rat::from_int(2))).unwrap();
        assert!(!check_casimir_operator(&rep, &[], 1).unwrap());
        // the identity scaled by the Casimir value passes
        let c = casimir_value(1, &rep.point).unwrap();
        let terms = vec![(c, vec![])];
        assert!(check_casimir_operator(&rep, &terms, 1).unwrap());
    }
}
