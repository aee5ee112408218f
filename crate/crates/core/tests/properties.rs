//! Property tests for the exact scalar field and the rewrite engine.

use proptest::prelude::*;
use splq_core::builders::build_spl_n1;
use splq_core::generator::{Expression, Generator, Word};
use splq_core::param::Param;
use splq_core::rational::Rat;
use splq_core::rewrite::{normalize, normal_form};
use splq_core::scalar::{LaurentPoly, Monomial, Scalar};
use std::collections::BTreeMap;

const PARAMS: [Param; 3] = [Param::P, Param::Q, Param::QPair(1, 2)];

fn arb_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=12).prop_map(|(n, d)| Rat::new(n, d))
}

fn arb_monomial() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec((0usize..PARAMS.len(), -3i64..=3), 0..3).prop_map(|entries| {
        let mut m = Monomial::one();
        for (i, e) in entries {
            m = m.mul(&Monomial::var(PARAMS[i], e));
        }
        m
    })
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    proptest::collection::vec((arb_monomial(), arb_rat()), 0..4).prop_map(|terms| {
        let mut p = LaurentPoly::zero();
        for (m, c) in terms {
            p = p.add(&LaurentPoly::term(m, c));
        }
        p
    })
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (arb_poly(), arb_poly())
        .prop_filter_map("nonzero denominator", |(n, d)| Scalar::make(n, d).ok())
}

fn assignment(rng_vals: &[Rat]) -> BTreeMap<Param, Rat> {
    PARAMS.iter().copied().zip(rng_vals.iter().cloned()).collect()
}

fn arb_point() -> impl Strategy<Value = Vec<Rat>> {
    proptest::collection::vec(
        (1i64..=9, 1i64..=9).prop_map(|(n, d)| Rat::new(n, d)),
        PARAMS.len(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
        // associativity and commutativity
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        // distributivity
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        // additive inverse
        prop_assert!((&a + &(-&a)).is_zero());
        // multiplicative inverse
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        // neutral elements
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(
        a in arb_scalar(),
        b in arb_scalar(),
        point in arb_point(),
    ) {
        let at = assignment(&point);
        // skip pole assignments
        let (Ok(va), Ok(vb)) = (a.substitute(&at), b.substitute(&at)) else {
            return Ok(());
        };
        let sum = (&a + &b).substitute(&at).unwrap();
        prop_assert_eq!(sum, &va + &vb);
        let prod = (&a * &b).substitute(&at).unwrap();
        prop_assert_eq!(prod, &va * &vb);
    }

    #[test]
    fn normal_form_is_idempotent_and_charge_preserving(
        letters in proptest::collection::vec(0usize..8, 1..5),
        seed in 0u64..1000,
    ) {
        let table = build_spl_n1(2, &BTreeMap::new()).unwrap();
        let gens = table.generators().to_vec();
        let word = Word(letters.iter().map(|i| gens[*i]).collect());
        let charge = word.fermion_charge();
        let parity = word.parity();
        let coeff = Scalar::from_rat(Rat::new((seed % 13) as i64 + 1, 3));
        let e = Expression::term(word, coeff);

        let (nf, trace) = normalize(&e, &table).unwrap();
        let again = normal_form(&nf, &table).unwrap();
        prop_assert_eq!(&nf, &again);
        for (w, _) in nf.terms() {
            prop_assert!(table.is_canonical_word(w));
            prop_assert_eq!(w.fermion_charge(), charge);
            prop_assert_eq!(w.parity(), parity);
        }
        for step in &trace.steps {
            let c = step.before.fermion_charge();
            for (w, _) in step.after.terms() {
                prop_assert_eq!(w.fermion_charge(), c);
            }
        }
    }
}
