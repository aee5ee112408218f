use crate::error::{Error, Result};
use crate::generator::{Expression, Generator, Word};
use crate::param::Param;
use crate::rational::Rat;
use crate::scalar::{Monomial, Scalar};
use crate::table::{integer_rank, Rule, StructureTable};
use std::collections::{BTreeMap, BTreeSet};

fn delta(a: u8, b: u8) -> bool {
    a == b
}

/// Validates that a supplied parameter value is a nonzero unit monomial.
fn check_unit_monomial(s: &Scalar, what: &str) -> Result<()> {
    if s.is_zero() {
        return Err(Error::InvalidParameter(format!("{what} must be nonzero")));
    }
    if s.as_unit_monomial().is_none() {
        return Err(Error::InvalidParameter(format!(
            "{what} must be a unit monomial, got {s}"
        )));
    }
    Ok(())
}

/// The deformed spl(N,1) family with parameters q_{ab} for a < b.
///
/// The supplied map assigns pairs nonzero unit monomials (symbolic
/// parameters or rationals). Missing pairs default to the symbolic
/// parameter q_{ab}.
pub fn build_spl_n1(n: u8, q: &BTreeMap<(u8, u8), Scalar>) -> Result<StructureTable> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("N must be >= 2, got {n}")));
    }
    if n > 9 {
        return Err(Error::InvalidParameter(format!(
            "N must be <= 9 for parameter naming, got {n}"
        )));
    }
    for ((a, b), s) in q {
        if !(a < b && *b <= n) {
            return Err(Error::InvalidParameter(format!(
                "parameter pair ({a},{b}) is not within 1 <= a < b <= {n}"
            )));
        }
        check_unit_monomial(s, &format!("q{a}{b}"))?;
    }
    // q_{ab} with q_{aa} = 1 and q_{ba} = 1/q_{ab}
    let qm = |a: u8, b: u8| -> Scalar {
        match Param::q_pair(a, b) {
            None => Scalar::one(),
            Some((p, sign)) => {
                let (lo, hi) = match p {
                    Param::QPair(lo, hi) => (lo, hi),
                    _ => unreachable!(),
                };
                let base = q
                    .get(&(lo, hi))
                    .cloned()
                    .unwrap_or_else(|| Scalar::param(p));
                base.pow(sign).expect("nonzero monomial")
            }
        }
    };

    let order = Generator::all(n);
    let mut rules: BTreeMap<(Generator, Generator), Rule> = BTreeMap::new();
    let mut put = |g1: Generator, g2: Generator, swap: Scalar, rem: Expression| {
        rules.insert((g1, g2), Rule { swap, remainder: rem });
    };

    // V_a V_b = -q_{ab} V_b V_a for a > b, and the Vbar analog
    for a in 1..=n {
        for b in 1..a {
            put(
                Generator::V(a),
                Generator::V(b),
                -&qm(a, b),
                Expression::zero(),
            );
            put(
                Generator::Vb(a),
                Generator::Vb(b),
                -&qm(a, b),
                Expression::zero(),
            );
        }
    }
    // V_a Vb^b = -q_{ba} Vb^b V_a + E_a^b
    for a in 1..=n {
        for b in 1..=n {
            put(
                Generator::V(a),
                Generator::Vb(b),
                -&qm(b, a),
                Expression::from_generator(Generator::E(a, b)),
            );
        }
    }
    // V_c E_a^b = q_{ca} q_{bc} (E_a^b V_c - delta_c^b V_a + delta_a^b V_c)
    for c in 1..=n {
        for a in 1..=n {
            for b in 1..=n {
                let swap = &qm(c, a) * &qm(b, c);
                let mut rem = Expression::zero();
                if delta(c, b) {
                    rem.insert_add(Word::single(Generator::V(a)), -&swap);
                }
                if delta(a, b) {
                    rem.insert_add(Word::single(Generator::V(c)), swap.clone());
                }
                put(Generator::V(c), Generator::E(a, b), swap, rem);
            }
        }
    }
    // E_a^b Vb^c = q_{bc} q_{ca} Vb^c E_a^b + delta_a^b Vb^c - q_{ba} delta_a^c Vb^b
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                let swap = &qm(b, c) * &qm(c, a);
                let mut rem = Expression::zero();
                if delta(a, b) {
                    rem.insert_add(Word::single(Generator::Vb(c)), Scalar::one());
                }
                if delta(a, c) {
                    rem.insert_add(Word::single(Generator::Vb(b)), -&qm(b, a));
                }
                put(Generator::E(a, b), Generator::Vb(c), swap, rem);
            }
        }
    }
    // E_a^b E_c^d = q_{ac} q_{cb} q_{bd} q_{da} E_c^d E_a^b
    //              + delta_b^c E_a^d - q_{ba} q_{ac} q_{cb} delta_a^d E_c^b
    for a in 1..=n {
        for b in 1..=n {
            for c in 1..=n {
                for d in 1..=n {
                    if (a, b) <= (c, d) {
                        continue;
                    }
                    let swap = &(&qm(a, c) * &qm(c, b)) * &(&qm(b, d) * &qm(d, a));
                    let mut rem = Expression::zero();
                    if delta(b, c) {
                        rem.insert_add(Word::single(Generator::E(a, d)), Scalar::one());
                    }
                    if delta(a, d) {
                        let coeff = &(&qm(b, a) * &qm(a, c)) * &qm(c, b);
                        rem.insert_add(Word::single(Generator::E(c, b)), -&coeff);
                    }
                    put(Generator::E(a, b), Generator::E(c, d), swap, rem);
                }
            }
        }
    }

    let nilpotents: BTreeSet<Generator> = (1..=n)
        .flat_map(|a| [Generator::V(a), Generator::Vb(a)])
        .collect();

    StructureTable::new(format!("spl({n},1)_q"), n, order, rules, nilpotents)
}

/// Classical spl(N,1): the q = 1 point of the generic family.
pub fn build_classical(n: u8) -> Result<StructureTable> {
    let mut q = BTreeMap::new();
    for a in 1..=n {
        for b in a + 1..=n {
            q.insert((a, b), Scalar::one());
        }
    }
    let mut t = build_spl_n1(n, &q)?;
    t.name = format!("spl({n},1)");
    Ok(t)
}

/// Misprint handling for the three-parameter spl(2,1) table. The two
/// corrected entries mirror the source lines whose printed left-hand
/// generators repeat within their block; each literal variant keeps the
/// printed reading for one of them and is expected to fail the overlap
/// check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Spl21Variant {
    Corrected,
    LiteralVbarBlock,
    LiteralB1pm,
}

/// The three-parameter deformation of spl(2,1).
///
/// Parameters must be nonzero unit monomials; mixed symbolic and rational
/// values are allowed, e.g. (p, 1, 1/p) for the one-parameter osp(2,2)
/// slice. In the limit s = p = 1 the table coincides with the generic N = 2
/// family at q12 = r, and at parameters 1 with classical spl(2,1).
pub fn build_spl21(p: &Scalar, r: &Scalar, s: &Scalar) -> Result<StructureTable> {
    build_spl21_variant(p, r, s, Spl21Variant::Corrected)
}

pub fn build_spl21_variant(
    p: &Scalar,
    r: &Scalar,
    s: &Scalar,
    variant: Spl21Variant,
) -> Result<StructureTable> {
    check_unit_monomial(p, "p")?;
    check_unit_monomial(r, "r")?;
    check_unit_monomial(s, "s")?;
    let one = Scalar::one();
    let e = Generator::E;
    let v = Generator::V;
    let vb = Generator::Vb;
    let gen1 = |g: Generator| Expression::from_generator(g);
    let rem1 = |g: Generator, c: &Scalar| Expression::term(Word::single(g), c.clone());
    let w2 = |g1: Generator, g2: Generator| Word::of(&[g1, g2]);

    // monomial shorthand: c * p^a r^b s^c
    let pw = |x: &Scalar, k: i64| x.pow(k).expect("nonzero monomial");
    let m = |pp: i64, rr: i64, ss: i64| -> Scalar { &(&pw(p, pp) * &pw(r, rr)) * &pw(s, ss) };

    let mut rules: BTreeMap<(Generator, Generator), Rule> = BTreeMap::new();
    let mut put = |g1: Generator, g2: Generator, swap: Scalar, rem: Expression| {
        rules.insert((g1, g2), Rule { swap, remainder: rem });
    };

    // Fermion-fermion sector: {V1,V2} and {Vb1,Vb2} quommute with the
    // inverse bracket parameters pr/s and rs/p; the mixed pairs produce the
    // bosonic generators.
    put(v(2), v(1), -&m(-1, -1, 1), Expression::zero());
    put(vb(2), vb(1), -&m(1, -1, -1), Expression::zero());
    put(v(1), vb(1), -&one, gen1(e(1, 1)));
    put(v(2), vb(2), -&one, gen1(e(2, 2)));
    put(v(1), vb(2), -&m(0, -1, 0), gen1(e(1, 2)));
    put(v(2), vb(1), -&m(0, 1, 0), gen1(e(2, 1)));

    // Bosonic action on the fermions.
    put(v(1), e(1, 1), one.clone(), Expression::zero());
    put(v(2), e(2, 2), one.clone(), Expression::zero());
    put(v(1), e(1, 2), m(0, -1, 0), Expression::zero());
    put(v(2), e(2, 1), m(0, 1, 0), Expression::zero());
    put(v(1), e(2, 2), m(1, 0, -1), rem1(v(1), &m(-1, 0, 1)));
    put(v(2), e(1, 1), m(-1, 0, 1), rem1(v(2), &m(-2, 0, 0)));
    put(v(1), e(2, 1), m(1, 1, -1), rem1(v(2), &-&m(-1, 1, -1)));
    put(v(2), e(1, 2), m(-1, -1, 1), rem1(v(1), &-&m(-2, -1, 2)));

    // Bosonic action on the anti-fermions.
    put(e(1, 1), vb(1), one.clone(), Expression::zero());
    put(e(2, 2), vb(2), one.clone(), Expression::zero());
    put(e(1, 2), vb(2), m(0, -1, 0), Expression::zero());
    put(e(2, 1), vb(1), m(0, 1, 0), Expression::zero());
    let e22_vb1 = (m(1, 0, -1), rem1(vb(1), &m(-1, 0, 1)));
    match variant {
        Spl21Variant::LiteralVbarBlock => {
            // literal reading of the repeated Vbar-block line: the bracket
            // of E(2,2) with Vb(1) at parameter 1/(psr) with zero remainder
            put(e(2, 2), vb(1), m(-1, -1, -1), Expression::zero());
        }
        _ => {
            put(e(2, 2), vb(1), e22_vb1.0, e22_vb1.1);
        }
    }
    put(e(1, 1), vb(2), m(-1, 0, 1), rem1(vb(2), &m(-2, 0, 0)));
    put(e(1, 2), vb(1), m(1, -1, -1), rem1(vb(2), &-&m(-1, -1, -1)));
    put(e(2, 1), vb(2), m(-1, 1, 1), rem1(vb(1), &-&m(-2, 1, 2)));

    // Bosonic sector.
    put(e(2, 2), e(1, 1), one.clone(), Expression::zero());
    let e12_e11 = (m(1, 0, -1), rem1(e(1, 2), &-&m(-1, 0, -1)));
    match variant {
        Spl21Variant::LiteralB1pm => {
            // literal reading of the second b1pm bracket: the pair
            // (E(1,2), E(1,1)) at parameter 1/s^2 with the printed remainder
            put(e(1, 2), e(1, 1), m(0, 0, -2), rem1(e(1, 2), &-&m(0, 0, -2)));
        }
        _ => {
            put(e(1, 2), e(1, 1), e12_e11.0, e12_e11.1);
        }
    }
    put(e(2, 1), e(1, 1), m(-1, 0, 1), rem1(e(2, 1), &m(-2, 0, 0)));
    put(e(2, 2), e(1, 2), m(-1, 0, 1), rem1(e(1, 2), &-&m(-2, 0, 2)));
    put(e(2, 2), e(2, 1), m(1, 0, -1), rem1(e(2, 1), &m(-1, 0, 1)));

    // The mixed E pair with its quadratic fermion terms.
    {
        let mut rem = Expression::zero();
        rem.insert_add(Word::single(e(1, 1)), -&m(-3, 0, 3));
        rem.insert_add(Word::single(e(2, 2)), m(-2, 0, 0));
        rem.insert_add(w2(vb(1), v(1)), &m(-3, 0, 3) - &m(-2, 0, 2));
        rem.insert_add(w2(vb(2), v(2)), &m(-3, 0, 1) - &m(-2, 0, 0));
        put(e(2, 1), e(1, 2), m(-2, 0, 2), rem);
    }

    let nilpotents: BTreeSet<Generator> = [v(1), v(2), vb(1), vb(2)].into_iter().collect();
    let mut table = StructureTable::new(
        "spl(2,1)_{p,r,s}",
        2,
        Generator::all(2),
        rules,
        nilpotents,
    )?;
    if variant == Spl21Variant::Corrected {
        table.corrected_rules = vec![
            "E(1,2)|Vb(1): corrected (mirrored Vbar-block entry)".into(),
            "E(1,2)|E(1,1): corrected (mirrored b1pm entry)".into(),
        ];
    }
    Ok(table)
}

/// The one-parameter osp(2,2) deformation: the spl(2,1) slice
/// (p, r, s) = (p, 1, 1/p), re-expressed in q = p^2. Every exponent on p is
/// even on this slice, so the table is Laurent in q.
pub fn build_osp22_q() -> StructureTable {
    let p = Scalar::param(Param::P);
    let table = build_spl21(&p, &Scalar::one(), &p.inv().expect("nonzero"))
        .expect("slice of a valid table");
    table
        .halve_exponents(Param::P, Param::Q, "osp(2,2)_q".into())
        .expect("even exponents on the osp(2,2) slice")
}

/// Effective number of parameters in the gl(N) sector: the rank of the
/// integer matrix of exponent vectors of the E-E swap and remainder
/// monomials over the q_{ab} basis.
pub fn effective_parameter_rank(n: u8) -> Result<usize> {
    let table = build_spl_n1(n, &BTreeMap::new())?;
    let gl = table.bosonic_truncation();
    let basis: Vec<Param> = (1..=n)
        .flat_map(|a| (a + 1..=n).map(move |b| Param::QPair(a, b)))
        .collect();
    let rows = gl.exponent_rows(&basis);
    Ok(integer_rank(&rows))
}

/// Builds the spl(2,1) table with rational parameter values.
pub fn build_spl21_at(p: Rat, r: Rat, s: Rat) -> Result<StructureTable> {
    build_spl21(
        &Scalar::from_rat(p),
        &Scalar::from_rat(r),
        &Scalar::from_rat(s),
    )
}

/// The N = 2 generic family at a given q12 monomial, used for the
/// s = p = 1 limit comparison.
pub fn build_spl_n1_2_with(q12: Scalar) -> Result<StructureTable> {
    let mut q = BTreeMap::new();
    q.insert((1u8, 2u8), q12);
    build_spl_n1(2, &q)
}

pub fn unit_monomial(c: Rat, pairs: &[(Param, i64)]) -> Scalar {
    let mut m = Monomial::one();
    for (p, e) in pairs {
        m = m.mul(&Monomial::var(*p, *e));
    }
    Scalar::monomial(c, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::check_overlaps;

    fn sym(p: Param) -> Scalar {
        Scalar::param(p)
    }

    #[test]
    fn spl_n1_rejects_bad_input() {
        assert!(build_spl_n1(1, &BTreeMap::new()).is_err());
        let mut q = BTreeMap::new();
        q.insert((1u8, 2u8), Scalar::zero());
        assert!(build_spl_n1(2, &q).is_err());
        let mut q = BTreeMap::new();
        q.insert((2u8, 1u8), Scalar::one());
        assert!(build_spl_n1(2, &q).is_err());
        // a two-term scalar is not a unit monomial
        let mut q = BTreeMap::new();
        q.insert(
            (1u8, 2u8),
            &Scalar::one() + &Scalar::param(Param::QPair(1, 2)),
        );
        assert!(build_spl_n1(2, &q).is_err());
    }

    #[test]
    fn spl_n1_examples() {
        // At q = 1 the table is classical spl(2,1).
        let mut q = BTreeMap::new();
        q.insert((1u8, 2u8), Scalar::one());
        let t = build_spl_n1(2, &q).unwrap();
        assert_eq!(t, build_classical(2).unwrap());

        // rule(V2, V1) has swap -q21 = -1/q12 and no remainder.
        let t = build_spl_n1(2, &BTreeMap::new()).unwrap();
        let rule = t.rule(Generator::V(2), Generator::V(1)).unwrap();
        let q21 = sym(Param::QPair(1, 2)).inv().unwrap();
        assert_eq!(rule.swap, -&q21);
        assert!(rule.remainder.is_zero());

        // N = 3 rule for the (E(2,1), E(1,2)) pair: swap 1 and remainder
        // E(2,2) - E(1,1), the inverse-solved form of the printed relation.
        let t3 = build_spl_n1(3, &BTreeMap::new()).unwrap();
        let rule = t3.rule(Generator::E(2, 1), Generator::E(1, 2)).unwrap();
        assert!(rule.swap.is_one());
        let mut expected = Expression::zero();
        expected.insert_add(Word::single(Generator::E(2, 2)), Scalar::one());
        expected.insert_add(Word::single(Generator::E(1, 1)), -&Scalar::one());
        assert_eq!(rule.remainder, expected);
    }

    #[test]
    fn swap_monomials_of_paired_orientations_cancel() {
        // the swap monomial q_ac q_cb q_bd q_da for (a,b) against (c,d),
        // times the same formula with the roles exchanged, is 1 -- the two
        // orderings of the E-E relation are mutually consistent
        let mut rng = crate::rng::Rng::new(11);
        let mut q: BTreeMap<(u8, u8), Scalar> = BTreeMap::new();
        for a in 1..=4u8 {
            for b in a + 1..=4u8 {
                q.insert((a, b), Scalar::from_rat(rng.parameter()));
            }
        }
        let qm = |a: u8, b: u8| -> Scalar {
            match a.cmp(&b) {
                std::cmp::Ordering::Equal => Scalar::one(),
                std::cmp::Ordering::Less => q[&(a, b)].clone(),
                std::cmp::Ordering::Greater => q[&(b, a)].inv().unwrap(),
            }
        };
        let swap = |a: u8, b: u8, c: u8, d: u8| -> Scalar {
            &(&qm(a, c) * &qm(c, b)) * &(&qm(b, d) * &qm(d, a))
        };
        let t = build_spl_n1(4, &q).unwrap();
        for a in 1..=4u8 {
            for b in 1..=4u8 {
                for c in 1..=4u8 {
                    for d in 1..=4u8 {
                        let prod = &swap(a, b, c, d) * &swap(c, d, a, b);
                        assert!(prod.is_one(), "({a},{b}) vs ({c},{d})");
                        // and the stored rule uses exactly this monomial
                        if (a, b) > (c, d) {
                            let rule = t.rule(Generator::E(a, b), Generator::E(c, d)).unwrap();
                            assert_eq!(rule.swap, swap(a, b, c, d));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn classical_limit_is_idempotent_and_signed() {
        let t = build_spl_n1(2, &BTreeMap::new()).unwrap();
        let c = t.classical_limit();
        assert_eq!(c, c.classical_limit());
        for rule in c.rules.values() {
            let s = rule.swap.constant_value().expect("numeric swap");
            assert!(s == Rat::one() || s == Rat::from_int(-1));
        }
        assert_eq!(c, build_classical(2).unwrap());
    }

    #[test]
    fn spl21_limits() {
        // p = r = s = 1 reproduces classical spl(2,1) table-exactly
        let t = build_spl21_at(Rat::one(), Rat::one(), Rat::one()).unwrap();
        assert_eq!(t, build_classical(2).unwrap());

        // p = s = 1 with symbolic r matches the generic family at q12 = r
        let t = build_spl21(&Scalar::one(), &sym(Param::R), &Scalar::one()).unwrap();
        let generic = build_spl_n1_2_with(sym(Param::R)).unwrap();
        assert_eq!(t, generic);
    }

    #[test]
    fn spl21_symbolic_overlaps_pass() {
        let t = build_spl21(&sym(Param::P), &sym(Param::R), &sym(Param::S)).unwrap();
        let report = check_overlaps(&t).unwrap();
        assert!(
            report.passed(),
            "first failure: {:?}",
            report.failures.first().map(|f| (f.triple, f.residual.to_string()))
        );
    }

    #[test]
    fn spl21_literal_misprint_variants_fail() {
        for variant in [Spl21Variant::LiteralVbarBlock, Spl21Variant::LiteralB1pm] {
            let t = build_spl21_variant(
                &sym(Param::P),
                &sym(Param::R),
                &sym(Param::S),
                variant,
            )
            .unwrap();
            let report = check_overlaps(&t).unwrap();
            assert!(
                !report.passed(),
                "literal variant {variant:?} unexpectedly passes"
            );
        }
    }

    #[test]
    fn osp22_equals_spl21_slice() {
        let p = sym(Param::P);
        let slice = build_spl21(&p, &Scalar::one(), &p.inv().unwrap()).unwrap();
        let osp = build_osp22_q();
        let again = slice
            .halve_exponents(Param::P, Param::Q, "osp(2,2)_q".into())
            .unwrap();
        assert_eq!(osp, again);
        // classical limits agree as well
        assert_eq!(osp.classical_limit(), build_classical(2).unwrap());
        // swap of rule(V2, V1): bracket parameter p^2 = q, i.e. swap -1/q
        let rule = osp.rule(Generator::V(2), Generator::V(1)).unwrap();
        let q = sym(Param::Q);
        assert_eq!(rule.swap, -&q.inv().unwrap());
        // mixed pair (V1, Vb2) carries bracket parameter 1 on this slice
        let rule = osp.rule(Generator::V(1), Generator::Vb(2)).unwrap();
        assert_eq!(rule.swap, -&Scalar::one());
    }

    #[test]
    fn effective_parameter_rank_matches_formula() {
        for n in 2..=5u8 {
            let expected = ((n as usize) - 1) * ((n as usize) - 2) / 2;
            assert_eq!(effective_parameter_rank(n).unwrap(), expected, "N = {n}");
        }
    }

    #[test]
    fn bosonic_truncation_of_spl21() {
        let t = build_spl21(&sym(Param::P), &sym(Param::R), &sym(Param::S)).unwrap();
        let gl = t.bosonic_truncation();
        // remainder of the mixed E pair keeps only the two E terms
        let rule = gl.rule(Generator::E(2, 1), Generator::E(1, 2)).unwrap();
        assert_eq!(rule.remainder.num_terms(), 2);
        for (w, _) in rule.remainder.terms() {
            assert!(w.0.iter().all(|g| !g.is_fermion()));
        }
        // the truncated table is overlap-consistent on its own
        let report = check_overlaps(&gl).unwrap();
        assert!(report.passed());
        // and depends on exactly two parameter combinations
        let rows = gl.exponent_rows(&[Param::P, Param::R, Param::S]);
        assert_eq!(integer_rank(&rows), 2);
        // truncating the generic family keeps the E-E sector unchanged
        let t3 = build_spl_n1(3, &BTreeMap::new()).unwrap();
        let gl3 = t3.bosonic_truncation();
        for ((g1, g2), rule) in &gl3.rules {
            assert_eq!(t3.rule(*g1, *g2).unwrap(), rule);
        }
    }
}
