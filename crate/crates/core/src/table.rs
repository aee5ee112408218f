use crate::error::{Error, Result};
use crate::generator::{Expression, Generator, Word};
use crate::param::Param;
use crate::rational::Rat;
use crate::scalar::{Monomial, Scalar};
use std::collections::{BTreeMap, BTreeSet};

/// One rewrite rule: G1 * G2 = swap * G2 * G1 + remainder, stored for the
/// ordered pair (G1, G2) with G1 strictly after G2 in the table's generator
/// order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub swap: Scalar,
    pub remainder: Expression,
}

/// The complete rewrite-rule set of one deformed algebra.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub name: String,
    pub n: u8,
    pub params: BTreeSet<Param>,
    order: Vec<Generator>,
    rank: BTreeMap<Generator, usize>,
    pub rules: BTreeMap<(Generator, Generator), Rule>,
    pub nilpotents: BTreeSet<Generator>,
    /// Rule ids that were encoded with a documented correction of the
    /// source table; copied into consistency reports.
    pub corrected_rules: Vec<String>,
}

impl PartialEq for StructureTable {
    fn eq(&self, other: &StructureTable) -> bool {
        self.n == other.n
            && self.order == other.order
            && self.rules == other.rules
            && self.nilpotents == other.nilpotents
    }
}

impl StructureTable {
    pub fn new(
        name: impl Into<String>,
        n: u8,
        order: Vec<Generator>,
        rules: BTreeMap<(Generator, Generator), Rule>,
        nilpotents: BTreeSet<Generator>,
    ) -> Result<StructureTable> {
        let rank: BTreeMap<Generator, usize> =
            order.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        if rank.len() != order.len() {
            return Err(Error::InvalidTable("duplicate generator in order".into()));
        }
        let mut params = BTreeSet::new();
        for rule in rules.values() {
            params.extend(rule.swap.params());
            for (_, c) in rule.remainder.terms() {
                params.extend(c.params());
            }
        }
        let table = StructureTable {
            name: name.into(),
            n,
            params,
            order,
            rank,
            rules,
            nilpotents,
            corrected_rules: Vec::new(),
        };
        table.validate()?;
        Ok(table)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.order
    }

    pub fn rank(&self, g: Generator) -> Option<usize> {
        self.rank.get(&g).copied()
    }

    pub fn rule(&self, g1: Generator, g2: Generator) -> Option<&Rule> {
        self.rules.get(&(g1, g2))
    }

    /// A word is canonical when its letters are non-decreasing in the table
    /// order and no nilpotent letter repeats adjacently.
    pub fn is_canonical_word(&self, w: &Word) -> bool {
        w.0.windows(2).all(|pair| {
            let (a, b) = (pair[0], pair[1]);
            match (self.rank(a), self.rank(b)) {
                (Some(ra), Some(rb)) => {
                    if ra > rb {
                        false
                    } else {
                        !(a == b && self.nilpotents.contains(&a))
                    }
                }
                _ => false,
            }
        }) && w.0.iter().all(|g| self.rank.contains_key(g))
    }

    fn validate(&self) -> Result<()> {
        // every out-of-order pair has a rule
        for (i, g1) in self.order.iter().enumerate() {
            for g2 in &self.order[..i] {
                if !self.rules.contains_key(&(*g1, *g2)) {
                    return Err(Error::IncompleteRuleCoverage(
                        g1.to_string(),
                        g2.to_string(),
                    ));
                }
            }
        }
        for ((g1, g2), rule) in &self.rules {
            let (r1, r2) = match (self.rank(*g1), self.rank(*g2)) {
                (Some(a), Some(b)) => (a, b),
                _ => {
                    return Err(Error::InvalidTable(format!(
                        "rule ({g1}, {g2}) names a generator outside the order"
                    )))
                }
            };
            if r1 <= r2 {
                return Err(Error::InvalidTable(format!(
                    "rule ({g1}, {g2}) is not for an out-of-order pair"
                )));
            }
            if rule.swap.is_zero() {
                return Err(Error::ZeroSwap(g1.to_string(), g2.to_string()));
            }
            for (w, _) in rule.remainder.terms() {
                if !self.is_canonical_word(w) {
                    return Err(Error::InvalidTable(format!(
                        "rule ({g1}, {g2}) has non-canonical remainder word {w}"
                    )));
                }
                if w.len() > 2 {
                    return Err(Error::InvalidTable(format!(
                        "rule ({g1}, {g2}) has remainder word {w} of degree > 2"
                    )));
                }
            }
        }
        for g in &self.nilpotents {
            if !g.is_fermion() {
                return Err(Error::InvalidTable(format!(
                    "nilpotent {g} is not a fermion"
                )));
            }
        }
        Ok(())
    }

    /// Degree-monotone tables are guaranteed terminating: every remainder
    /// word of full degree two starts strictly below the rule's left
    /// generator, so rewriting strictly decreases (length, rank sequence).
    pub fn is_degree_monotone(&self) -> bool {
        self.rules.iter().all(|((g1, _), rule)| {
            rule.remainder.terms().all(|(w, _)| {
                w.len() < 2 || self.rank(w.0[0]).unwrap() < self.rank(*g1).unwrap()
            })
        })
    }

    /// Substitute every parameter by 1 in every coefficient. The result of a
    /// builder table is a graded Lie superalgebra table (all swaps +-1).
    pub fn classical_limit(&self) -> StructureTable {
        let map: BTreeMap<Param, (Rat, Monomial)> = self
            .params
            .iter()
            .map(|p| (*p, (Rat::one(), Monomial::one())))
            .collect();
        self.substitute_monomials(&map, format!("classical limit of {}", self.name))
    }

    /// Substitute parameters by nonzero unit monomials in every coefficient.
    pub fn substitute_monomials(
        &self,
        map: &BTreeMap<Param, (Rat, Monomial)>,
        name: String,
    ) -> StructureTable {
        let rules = self
            .rules
            .iter()
            .map(|(k, rule)| {
                let swap = rule.swap.substitute_monomials(map);
                let mut rem = Expression::zero();
                for (w, c) in rule.remainder.terms() {
                    rem.insert_add(w.clone(), c.substitute_monomials(map));
                }
                (*k, Rule { swap, remainder: rem })
            })
            .collect();
        let mut t = StructureTable::new(name, self.n, self.order.clone(), rules, self.nilpotents.clone())
            .expect("substitution preserves table validity");
        t.corrected_rules = self.corrected_rules.clone();
        t
    }

    /// Rewrite every coefficient that is Laurent in `from` with even
    /// exponents only as Laurent in `to` with halved exponents. Errors if an
    /// odd exponent occurs.
    pub fn halve_exponents(&self, from: Param, to: Param, name: String) -> Result<StructureTable> {
        let halve_scalar = |s: &Scalar| -> Result<Scalar> {
            let halve_poly = |poly: &crate::scalar::LaurentPoly| -> Result<crate::scalar::LaurentPoly> {
                let mut out = crate::scalar::LaurentPoly::zero();
                for (m, c) in poly.terms() {
                    let mut mono = Monomial::one();
                    for (p, e) in m.exponents() {
                        if *p == from {
                            if e % 2 != 0 {
                                return Err(Error::InvalidParameter(format!(
                                    "odd exponent {e} on {from} cannot be halved"
                                )));
                            }
                            mono = mono.mul(&Monomial::var(to, e / 2));
                        } else {
                            mono = mono.mul(&Monomial::var(*p, *e));
                        }
                    }
                    out = out.add(&crate::scalar::LaurentPoly::term(mono, c.clone()));
                }
                Ok(out)
            };
            Scalar::make(halve_poly(s.numerator())?, halve_poly(s.denominator())?)
        };
        let mut rules = BTreeMap::new();
        for (k, rule) in &self.rules {
            let swap = halve_scalar(&rule.swap)?;
            let mut rem = Expression::zero();
            for (w, c) in rule.remainder.terms() {
                rem.insert_add(w.clone(), halve_scalar(c)?);
            }
            rules.insert(*k, Rule { swap, remainder: rem });
        }
        let mut t = StructureTable::new(name, self.n, self.order.clone(), rules, self.nilpotents.clone())?;
        t.corrected_rules = self.corrected_rules.clone();
        Ok(t)
    }

    /// Restrict to the bosonic E sector, dropping every remainder term that
    /// contains a fermion.
    pub fn bosonic_truncation(&self) -> StructureTable {
        let order: Vec<Generator> = self
            .order
            .iter()
            .copied()
            .filter(|g| !g.is_fermion())
            .collect();
        let keep: BTreeSet<Generator> = order.iter().copied().collect();
        let rules: BTreeMap<(Generator, Generator), Rule> = self
            .rules
            .iter()
            .filter(|((g1, g2), _)| keep.contains(g1) && keep.contains(g2))
            .map(|(k, rule)| {
                let mut rem = Expression::zero();
                for (w, c) in rule.remainder.terms() {
                    if w.0.iter().all(|g| !g.is_fermion()) {
                        rem.insert_add(w.clone(), c.clone());
                    }
                }
                (
                    *k,
                    Rule {
                        swap: rule.swap.clone(),
                        remainder: rem,
                    },
                )
            })
            .collect();
        let mut t = StructureTable::new(
            format!("bosonic truncation of {}", self.name),
            self.n,
            order,
            rules,
            BTreeSet::new(),
        )
        .expect("truncation preserves validity");
        t.corrected_rules = self.corrected_rules.clone();
        t
    }

    /// Exponent vectors (over the given parameter basis) of every swap and
    /// remainder-coefficient monomial in the table, one row per monomial.
    pub fn exponent_rows(&self, basis: &[Param]) -> Vec<Vec<i64>> {
        let mut rows = Vec::new();
        let mut push_scalar = |s: &Scalar| {
            for poly in [s.numerator(), s.denominator()] {
                for (m, _) in poly.terms() {
                    let row: Vec<i64> = basis.iter().map(|p| m.exponent(*p)).collect();
                    rows.push(row);
                }
            }
        };
        for rule in self.rules.values() {
            push_scalar(&rule.swap);
            for (_, c) in rule.remainder.terms() {
                push_scalar(c);
            }
        }
        rows
    }
}

/// Rank of an integer matrix, by fraction-free (Bareiss) elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|x| *x as i128).collect())
        .collect();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        let pivot = (rank..nrows).find(|&r| m[r][col] != 0);
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                m[r][c] = (m[rank][col] * m[r][c] - m[r][col] * m[rank][c]) / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_rank_basics() {
        assert_eq!(integer_rank(&[]), 0);
        assert_eq!(integer_rank(&[vec![0, 0]]), 0);
        assert_eq!(integer_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(integer_rank(&[vec![1, 0, 3], vec![0, 5, -1], vec![1, 5, 2]]), 2);
        assert_eq!(
            integer_rank(&[vec![2, 0, 0], vec![0, -3, 0], vec![0, 0, 7]]),
            3
        );
    }
}
