//! Quasi-exactly-solvable operators: elements of the enveloping algebra in a
//! verified representation, certified to preserve the graded polynomial
//! space.

use crate::error::Result;
use crate::generator::{Expression, Word};
use crate::linalg::scalar_rank;
use crate::matrix::Matrix;
use crate::rep::{evaluate_in_rep, preserves_subspace, Representation};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::space::GradedSpace;
use crate::table::StructureTable;

/// An enveloping-algebra element paired with its exact matrix.
#[derive(Clone, Debug)]
pub struct QesOperator {
    pub expr: Expression,
    pub matrix: Matrix,
}

/// All canonical normal-ordered monomials in the generators up to the
/// degree bound: letters non-decreasing in the table order with no nilpotent
/// letter repeated. Degree counts generator letters with weight one.
pub fn canonical_monomials(table: &StructureTable, max_degree: usize) -> Vec<Word> {
    let gens = table.generators();
    let mut out = vec![Word::unit()];
    let mut layer: Vec<Word> = vec![Word::unit()];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for w in &layer {
            let start = w
                .0
                .last()
                .map(|g| table.rank(*g).expect("generator in table"))
                .unwrap_or(0);
            for g in &gens[start..] {
                if w.0.last() == Some(g) && table.nilpotents.contains(g) {
                    continue;
                }
                let mut v = w.0.clone();
                v.push(*g);
                next.push(Word(v));
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All normal-ordered monomials up to the degree bound, each paired with its
/// exact matrix in the representation.
pub fn enveloping_monomials(
    rep: &Representation,
    table: &StructureTable,
    max_degree: usize,
) -> Result<Vec<QesOperator>> {
    let words = canonical_monomials(table, max_degree);
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        let expr = Expression::from_word(w);
        let matrix = evaluate_in_rep(&expr, rep)?;
        out.push(QesOperator { expr, matrix });
    }
    Ok(out)
}

/// Certifies that a matrix on the ambient graded space preserves the
/// embedded subspace P(m) (+) P(n). Enveloping elements of a verified
/// representation always do; externally supplied operators may not.
pub fn certify_qes(
    ambient: &GradedSpace,
    matrix: &Matrix,
    upper_degree: usize,
    lower_degree: usize,
) -> bool {
    preserves_subspace(ambient, matrix, upper_degree, lower_degree)
}

/// Deterministic pseudo-random scalar combination of the enveloping
/// monomials up to the degree bound; reproducible from the seed.
pub fn random_qes_operator(
    rep: &Representation,
    table: &StructureTable,
    degree: usize,
    seed: u64,
) -> Result<QesOperator> {
    let monomials = canonical_monomials(table, degree);
    let mut rng = Rng::new(seed);
    let mut expr = Expression::zero();
    for w in monomials {
        let c = rng.rational();
        expr.insert_add(w, Scalar::from_rat(c));
    }
    let matrix = evaluate_in_rep(&expr, rep)?;
    Ok(QesOperator { expr, matrix })
}

/// Dimension of the linear span of the operators' matrices over the
/// rationals (entries must be parameter-free, i.e. the representation sits
/// at a concrete point).
pub fn span_dimension(ops: &[QesOperator]) -> usize {
    let rows: Vec<Vec<Scalar>> = ops
        .iter()
        .map(|op| {
            let m = &op.matrix;
            let mut row = Vec::with_capacity(m.rows * m.cols);
            for r in 0..m.rows {
                for c in 0..m.cols {
                    row.push(m.get(r, c));
                }
            }
            row
        })
        .collect();
    scalar_rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::build_osp22_q;
    use crate::generator::Generator;
    use crate::rational::Rat;
    use crate::rep::{build_osp22_rep, QValue};
    use crate::rewrite::normal_form;

    fn setup(n: usize) -> (Representation, StructureTable) {
        let table = build_osp22_q();
        let rep = build_osp22_rep(n, QValue::At(Rat::new(5, 3))).unwrap();
        (rep, table)
    }

    #[test]
    fn degree_one_monomials_are_the_generators() {
        let (rep, table) = setup(2);
        let ops = enveloping_monomials(&rep, &table, 1).unwrap();
        // the unit plus the 8 generators of spl(2,1)
        assert_eq!(ops.len(), 9);
        assert_eq!(ops[0].expr, Expression::unit());
        assert_eq!(ops[0].matrix, Matrix::identity(rep.space.dim()));
    }

    #[test]
    fn fermion_squares_are_excluded() {
        // canonical degree-2 words in {V(1), V(2)} alone: only V(1)V(2)
        let table = build_osp22_q();
        let words = canonical_monomials(&table, 2);
        let fermion_only: Vec<&Word> = words
            .iter()
            .filter(|w| {
                w.len() == 2 && w.0.iter().all(|g| matches!(g, Generator::V(_)))
            })
            .collect();
        assert_eq!(fermion_only.len(), 1);
        assert_eq!(
            *fermion_only[0],
            Word::of(&[Generator::V(1), Generator::V(2)])
        );
    }

    #[test]
    fn closure_certifies_to_degree_three() {
        for n in 1..=2usize {
            let (rep, table) = setup(n);
            let ops = enveloping_monomials(&rep, &table, 3).unwrap();
            for op in &ops {
                assert!(
                    certify_qes(
                        &rep.space,
                        &op.matrix,
                        rep.space.upper.degree,
                        rep.space.lower.degree
                    ),
                    "monomial {} fails certification",
                    op.expr
                );
            }
        }
    }

    #[test]
    fn certification_rejects_overflow() {
        let ambient = GradedSpace::new(1, 2);
        let mut m = Matrix::zero(ambient.dim(), ambient.dim());
        m.set(ambient.lower_index(2), ambient.lower_index(1), Scalar::one());
        assert!(!certify_qes(&ambient, &m, 0, 1));
        // the zero operator certifies trivially
        let z = Matrix::zero(ambient.dim(), ambient.dim());
        assert!(certify_qes(&ambient, &z, 0, 1));
    }

    #[test]
    fn random_operator_is_deterministic_and_closed() {
        let (rep, table) = setup(2);
        let a = random_qes_operator(&rep, &table, 2, 42).unwrap();
        let b = random_qes_operator(&rep, &table, 2, 42).unwrap();
        assert_eq!(a.expr, b.expr);
        assert_eq!(a.matrix, b.matrix);
        let c = random_qes_operator(&rep, &table, 2, 43).unwrap();
        assert!(c.expr != a.expr);
        assert!(certify_qes(
            &rep.space,
            &a.matrix,
            rep.space.upper.degree,
            rep.space.lower.degree
        ));
    }

    #[test]
    fn product_matrices_respect_normalization() {
        // the matrix of a product word equals the product of the factor
        // matrices and the matrix of its normal form
        let (rep, table) = setup(2);
        let w = Word::of(&[Generator::V(2), Generator::E(1, 2), Generator::Vb(1)]);
        let e = Expression::from_word(w);
        let direct = evaluate_in_rep(&e, &rep).unwrap();
        let nf = normal_form(&e, &table).unwrap();
        let via_nf = evaluate_in_rep(&nf, &rep).unwrap();
        assert_eq!(direct, via_nf);
    }

    #[test]
    fn seed_varied_operators_span_at_most_the_monomial_count() {
        let (rep, table) = setup(2);
        let monomial_count = canonical_monomials(&table, 2).len();
        let ops: Vec<QesOperator> = (0..12)
            .map(|seed| random_qes_operator(&rep, &table, 2, seed).unwrap())
            .collect();
        let dim = span_dimension(&ops);
        assert!(dim <= monomial_count);
        assert!(dim > 1);
    }
}
