//! Malformed-table behavior: the non-termination guard and mutation
//! regressions for the overlap checker.

use splq_core::builders::build_spl21_at;
use splq_core::error::Error;
use splq_core::generator::{Expression, Generator, Word};
use splq_core::rational::Rat;
use splq_core::rewrite::{check_overlaps, normalize};
use splq_core::scalar::Scalar;
use splq_core::table::{Rule, StructureTable};
use std::collections::{BTreeMap, BTreeSet};

/// A custom table that passes schema validation but whose rewriting loops:
/// with A < B < C, the remainders send B A -> B C and C B -> A B, so the
/// word B A B cycles through B C B back to itself.
fn looping_table() -> StructureTable {
    let a = Generator::E(1, 1);
    let b = Generator::E(1, 2);
    let c = Generator::E(2, 1);
    let mut rules = BTreeMap::new();
    rules.insert(
        (b, a),
        Rule {
            swap: Scalar::one(),
            remainder: Expression::term(Word::of(&[b, c]), Scalar::one()),
        },
    );
    rules.insert(
        (c, a),
        Rule {
            swap: Scalar::one(),
            remainder: Expression::zero(),
        },
    );
    rules.insert(
        (c, b),
        Rule {
            swap: Scalar::one(),
            remainder: Expression::term(Word::of(&[a, b]), Scalar::one()),
        },
    );
    StructureTable::new("looping", 2, vec![a, b, c], rules, BTreeSet::new())
        .expect("schema-valid")
}

#[test]
fn non_termination_guard_fires() {
    let t = looping_table();
    assert!(!t.is_degree_monotone());
    let e = Expression::from_word(Word::of(&[
        Generator::E(1, 2),
        Generator::E(1, 1),
        Generator::E(1, 2),
    ]));
    match normalize(&e, &t) {
        Err(Error::NonTermination { .. }) => {}
        other => panic!("expected the non-termination guard, got {other:?}"),
    }
    // the overlap checker surfaces the same failure instead of hanging
    assert!(matches!(
        check_overlaps(&t),
        Err(Error::NonTermination { .. })
    ));
}

#[test]
fn mutated_remainder_fails_overlap_check() {
    // spl(2,1) at (2, 3, 5) with the remainder of the mixed E-pair rule
    // doubled must produce nonzero residuals on triples containing the pair
    let good = build_spl21_at(Rat::from_int(2), Rat::from_int(3), Rat::from_int(5)).unwrap();
    assert!(check_overlaps(&good).unwrap().passed());

    let mut rules = good.rules.clone();
    let key = (Generator::E(2, 1), Generator::E(1, 2));
    let rule = rules.get_mut(&key).unwrap();
    rule.remainder = rule.remainder.scale(&Scalar::from_int(2));
    let mutated = StructureTable::new(
        "mutated spl(2,1)",
        2,
        good.generators().to_vec(),
        rules,
        good.nilpotents.clone(),
    )
    .unwrap();
    let report = check_overlaps(&mutated).unwrap();
    assert!(!report.passed());
    assert!(report.failures.iter().any(|f| {
        let gens = [f.triple.0, f.triple.1, f.triple.2];
        gens.contains(&Generator::E(2, 1)) && gens.contains(&Generator::E(1, 2))
    }));
}
