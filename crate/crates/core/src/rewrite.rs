use crate::error::{Error, Result};
use crate::generator::{Expression, Generator, Word};
use crate::scalar::Scalar;
use crate::table::StructureTable;
use rayon::prelude::*;
use serde::Serialize;

/// Which reducible position to rewrite first inside a word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    LeftmostFirst,
    RightmostFirst,
}

/// One rewrite step: the rule for `pair` was applied to `before` at
/// `position`, producing `after`.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub position: usize,
    pub pair: (Generator, Generator),
    pub before: Word,
    pub after: Expression,
}

#[derive(Clone, Debug, Default)]
pub struct RewriteTrace {
    pub steps: Vec<TraceStep>,
}

/// The quommutator [A,B]_q = AB - qBA or anti-quommutator AB + qBA, as an
/// unreduced expression.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

pub fn quommutator(a: &Expression, b: &Expression, q: &Scalar, kind: BracketKind) -> Expression {
    let ab = a.mul(b);
    let ba = b.mul(a).scale(q);
    match kind {
        BracketKind::Commutator => ab.sub(&ba),
        BracketKind::Anticommutator => ab.add(&ba),
    }
}

fn reducible_position(table: &StructureTable, w: &Word, strategy: Strategy) -> Option<usize> {
    let positions: Box<dyn Iterator<Item = usize>> = match strategy {
        Strategy::LeftmostFirst => Box::new(0..w.len().saturating_sub(1)),
        Strategy::RightmostFirst => Box::new((0..w.len().saturating_sub(1)).rev()),
    };
    for i in positions {
        let (a, b) = (w.0[i], w.0[i + 1]);
        if a == b && table.nilpotents.contains(&a) {
            return Some(i);
        }
        match (table.rank(a), table.rank(b)) {
            (Some(ra), Some(rb)) if ra > rb => return Some(i),
            _ => {}
        }
    }
    None
}

/// Step budget for reducing a single word of the given degree, per the
/// non-termination guard: 10 * degree^2 * (inversion bound + 1).
fn word_budget(degree: usize) -> usize {
    let inversions = degree * degree.saturating_sub(1) / 2;
    (10 * degree * degree * (inversions + 1)).max(64)
}

struct Reduction<'a> {
    table: &'a StructureTable,
    strategy: Strategy,
    steps_left: usize,
    trace: RewriteTrace,
    want_trace: bool,
    check_monotone: bool,
}

impl<'a> Reduction<'a> {
    /// Measure used for the termination assertion: rewriting must strictly
    /// decrease (length, rank sequence) lexicographically for every produced
    /// word.
    fn measure_lt(&self, new: &Word, old: &Word) -> bool {
        if new.len() != old.len() {
            return new.len() < old.len();
        }
        let rank = |g: Generator| self.table.rank(g).unwrap_or(usize::MAX);
        let a = new.0.iter().map(|g| rank(*g));
        let b = old.0.iter().map(|g| rank(*g));
        a.cmp(b) == std::cmp::Ordering::Less
    }

    fn reduce_word(&mut self, word: Word, coeff: Scalar, out: &mut Expression) -> Result<()> {
        let mut stack: Vec<(Word, Scalar)> = vec![(word, coeff)];
        while let Some((w, c)) = stack.pop() {
            let Some(i) = reducible_position(self.table, &w, self.strategy) else {
                out.insert_add(w, c);
                continue;
            };
            if self.steps_left == 0 {
                return Err(Error::NonTermination {
                    steps: 0,
                    word: w.to_string(),
                });
            }
            self.steps_left -= 1;

            let (g1, g2) = (w.0[i], w.0[i + 1]);
            let prefix = &w.0[..i];
            let suffix = &w.0[i + 2..];
            let glue = |mid: &Word| -> Word {
                let mut v = Vec::with_capacity(prefix.len() + mid.len() + suffix.len());
                v.extend_from_slice(prefix);
                v.extend_from_slice(&mid.0);
                v.extend_from_slice(suffix);
                Word(v)
            };

            let mut produced = Expression::zero();
            if g1 == g2 && self.table.nilpotents.contains(&g1) {
                // nilpotent square: the pair vanishes
            } else {
                let rule = self
                    .table
                    .rule(g1, g2)
                    .expect("reducible pair has a rule by table validation");
                produced.insert_add(glue(&Word::of(&[g2, g1])), rule.swap.clone());
                for (rw, rc) in rule.remainder.terms() {
                    produced.insert_add(glue(rw), rc.clone());
                }
            }

            if self.check_monotone {
                for (nw, _) in produced.terms() {
                    debug_assert!(
                        self.measure_lt(nw, &w),
                        "rewrite step does not decrease the termination measure: {w} -> {nw}"
                    );
                }
            }
            if self.want_trace {
                self.trace.steps.push(TraceStep {
                    position: i,
                    pair: (g1, g2),
                    before: w.clone(),
                    after: produced.clone(),
                });
            }
            for (nw, nc) in produced.terms() {
                stack.push((nw.clone(), nc * &c));
            }
        }
        Ok(())
    }
}

/// Rewrites an expression to canonical normal-ordered form, returning the
/// reduction trace.
pub fn normalize(e: &Expression, table: &StructureTable) -> Result<(Expression, RewriteTrace)> {
    normalize_with(e, table, Strategy::LeftmostFirst, true)
}

/// Normal form only, without trace bookkeeping.
pub fn normal_form(e: &Expression, table: &StructureTable) -> Result<Expression> {
    Ok(normalize_with(e, table, Strategy::LeftmostFirst, false)?.0)
}

pub fn normalize_with(
    e: &Expression,
    table: &StructureTable,
    strategy: Strategy,
    want_trace: bool,
) -> Result<(Expression, RewriteTrace)> {
    for (w, _) in e.terms() {
        for g in &w.0 {
            if table.rank(*g).is_none() {
                return Err(Error::UnknownGenerator(g.to_string()));
            }
        }
    }
    let mut red = Reduction {
        table,
        strategy,
        steps_left: 0,
        trace: RewriteTrace::default(),
        want_trace,
        check_monotone: table.is_degree_monotone(),
    };
    let mut out = Expression::zero();
    for (w, c) in e.terms() {
        red.steps_left = word_budget(w.len());
        red.reduce_word(w.clone(), c.clone(), &mut out)?;
    }
    Ok((out, red.trace))
}

/// Per-overlap failure: the triple whose two reduction orders disagree,
/// with the nonzero residual.
#[derive(Clone, Debug)]
pub struct OverlapFailure {
    pub triple: (Generator, Generator, Generator),
    pub residual: Expression,
}

/// Result of the associativity (diamond) check of a structure table.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub algebra_id: String,
    pub total_overlaps: usize,
    pub failures: Vec<OverlapFailure>,
    pub corrected_rules_used: Vec<String>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Serializable form of a consistency report.
#[derive(Serialize)]
pub struct ConsistencyReportDoc {
    pub algebra: String,
    pub overlaps_checked: usize,
    pub failures: Vec<FailureDoc>,
    pub corrected_rules_used: Vec<String>,
}

#[derive(Serialize)]
pub struct FailureDoc {
    pub triple: String,
    pub residual: String,
}

impl ConsistencyReport {
    pub fn to_doc(&self) -> ConsistencyReportDoc {
        ConsistencyReportDoc {
            algebra: self.algebra_id.clone(),
            overlaps_checked: self.total_overlaps,
            failures: self
                .failures
                .iter()
                .map(|f| FailureDoc {
                    triple: format!("({}, {}, {})", f.triple.0, f.triple.1, f.triple.2),
                    residual: f.residual.to_string(),
                })
                .collect(),
            corrected_rules_used: self.corrected_rules_used.clone(),
        }
    }
}

/// Reduces every length-3 word with at least one reducible adjacent pair by
/// leftmost-first and rightmost-first strategies and compares the normal
/// forms. Zero residuals for every triple certify associativity consistency
/// of the rewrite table.
pub fn check_overlaps(table: &StructureTable) -> Result<ConsistencyReport> {
    let gens = table.generators();
    let mut triples = Vec::new();
    for g1 in gens {
        for g2 in gens {
            for g3 in gens {
                let w = Word::of(&[*g1, *g2, *g3]);
                if reducible_position(table, &w, Strategy::LeftmostFirst).is_some() {
                    triples.push((*g1, *g2, *g3));
                }
            }
        }
    }
    let total = triples.len();
    let results: Result<Vec<Option<OverlapFailure>>> = triples
        .into_par_iter()
        .map(|t| {
            let w = Expression::from_word(Word::of(&[t.0, t.1, t.2]));
            let left = normalize_with(&w, table, Strategy::LeftmostFirst, false)?.0;
            let right = normalize_with(&w, table, Strategy::RightmostFirst, false)?.0;
            let residual = left.sub(&right);
            if residual.is_zero() {
                Ok(None)
            } else {
                Ok(Some(OverlapFailure { triple: t, residual }))
            }
        })
        .collect();
    let mut failures: Vec<OverlapFailure> = results?.into_iter().flatten().collect();
    failures.sort_by_key(|f| f.triple);
    Ok(ConsistencyReport {
        algebra_id: table.name.clone(),
        total_overlaps: total,
        failures,
        corrected_rules_used: table.corrected_rules.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build_classical, build_spl_n1};
    use crate::param::Param;
    use crate::rational::Rat;
    use std::collections::BTreeMap;

    fn symbolic_spl(n: u8) -> StructureTable {
        build_spl_n1(n, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn nilpotent_square_vanishes() {
        let t = symbolic_spl(2);
        let e = Expression::from_word(Word::of(&[Generator::V(1), Generator::V(1)]));
        let (nf, _) = normalize(&e, &t).unwrap();
        assert!(nf.is_zero());
    }

    #[test]
    fn fermion_pair_reorders_with_swap() {
        // V(2) V(1) -> -q21 V(1) V(2)
        let t = symbolic_spl(2);
        let e = Expression::from_word(Word::of(&[Generator::V(2), Generator::V(1)]));
        let (nf, _) = normalize(&e, &t).unwrap();
        assert_eq!(nf.num_terms(), 1);
        let (w, c) = nf.terms().next().unwrap();
        assert_eq!(*w, Word::of(&[Generator::V(1), Generator::V(2)]));
        let q21 = Scalar::param(Param::QPair(1, 2)).inv().unwrap();
        assert_eq!(c, &-&q21);
    }

    #[test]
    fn mixed_fermion_pair_produces_boson() {
        // V(1) Vb(1) -> E(1,1) - Vb(1) V(1)
        let t = symbolic_spl(2);
        let e = Expression::from_word(Word::of(&[Generator::V(1), Generator::Vb(1)]));
        let (nf, _) = normalize(&e, &t).unwrap();
        let mut expected = Expression::zero();
        expected.insert_add(Word::single(Generator::E(1, 1)), Scalar::one());
        expected.insert_add(
            Word::of(&[Generator::Vb(1), Generator::V(1)]),
            -&Scalar::one(),
        );
        assert_eq!(nf, expected);
    }

    #[test]
    fn unit_word_is_fixed() {
        let t = symbolic_spl(2);
        let (nf, trace) = normalize(&Expression::unit(), &t).unwrap();
        assert_eq!(nf, Expression::unit());
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn normalize_is_idempotent() {
        let t = symbolic_spl(2);
        let e = Expression::from_word(Word::of(&[
            Generator::V(2),
            Generator::E(1, 2),
            Generator::Vb(1),
            Generator::V(1),
        ]));
        let (nf1, _) = normalize(&e, &t).unwrap();
        let (nf2, _) = normalize(&nf1, &t).unwrap();
        assert_eq!(nf1, nf2);
    }

    #[test]
    fn charge_is_conserved_on_every_step() {
        let t = symbolic_spl(2);
        let e = Expression::from_word(Word::of(&[
            Generator::V(1),
            Generator::Vb(1),
            Generator::V(2),
            Generator::Vb(2),
        ]));
        let (_, trace) = normalize(&e, &t).unwrap();
        assert!(!trace.steps.is_empty());
        for step in &trace.steps {
            let before = step.before.fermion_charge();
            for (w, _) in step.after.terms() {
                assert_eq!(w.fermion_charge(), before);
                assert_eq!(w.parity(), step.before.parity());
            }
        }
    }

    #[test]
    fn quommutator_shapes() {
        let a = Expression::from_generator(Generator::E(1, 1));
        let b = Expression::from_generator(Generator::E(2, 2));
        // [A,B]_1 with A = B is zero before any normalization
        let z = quommutator(&a, &a, &Scalar::one(), BracketKind::Commutator);
        assert!(z.is_zero());
        // [E11, E22]_1 has the two concatenations
        let c = quommutator(&a, &b, &Scalar::one(), BracketKind::Commutator);
        assert_eq!(c.num_terms(), 2);
    }

    #[test]
    fn classical_overlaps_pass() {
        let t = build_classical(2).unwrap();
        let report = check_overlaps(&t).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures.first());
        assert!(report.total_overlaps > 0);
    }

    #[test]
    fn numeric_spl3_overlaps_pass() {
        let mut q = BTreeMap::new();
        q.insert((1u8, 2u8), Scalar::from_rat(Rat::from_int(2)));
        q.insert((1u8, 3u8), Scalar::from_rat(Rat::new(3, 5)));
        q.insert((2u8, 3u8), Scalar::from_rat(Rat::from_int(7)));
        let t = build_spl_n1(3, &q).unwrap();
        let report = check_overlaps(&t).unwrap();
        assert!(report.passed(), "failures: {:?}", report.failures.first());
    }
}
