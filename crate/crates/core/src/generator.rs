use crate::error::{Error, Result};
use crate::rational::Rat;
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Grading {
    Boson,
    Fermion,
}

/// A generator of spl(N,1): bosonic E(a,b), fermionic V(a) and
/// anti-fermionic Vb(a), indices 1..=N.
///
/// The derived `Ord` is the canonical generator order used for normal
/// ordering: Vb(1) < ... < Vb(N) < E(1,1) < E(1,2) < ... < E(N,N) < V(1) <
/// ... < V(N), with the E block lexicographic in (a,b).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Vb(u8),
    E(u8, u8),
    V(u8),
}

impl Generator {
    pub fn grading(&self) -> Grading {
        match self {
            Generator::E(_, _) => Grading::Boson,
            _ => Grading::Fermion,
        }
    }

    pub fn is_fermion(&self) -> bool {
        self.grading() == Grading::Fermion
    }

    /// Fermion charge: f(V) = +1, f(Vb) = -1, f(E) = 0. Conserved by every
    /// structure relation and used as a rewrite invariant.
    pub fn fermion_charge(&self) -> i64 {
        match self {
            Generator::V(_) => 1,
            Generator::Vb(_) => -1,
            Generator::E(_, _) => 0,
        }
    }

    pub fn indices_within(&self, n: u8) -> bool {
        match self {
            Generator::E(a, b) => (1..=n).contains(a) && (1..=n).contains(b),
            Generator::V(a) | Generator::Vb(a) => (1..=n).contains(a),
        }
    }

    /// All generators of spl(N,1) in canonical order.
    pub fn all(n: u8) -> Vec<Generator> {
        let mut out = Vec::new();
        for a in 1..=n {
            out.push(Generator::Vb(a));
        }
        for a in 1..=n {
            for b in 1..=n {
                out.push(Generator::E(a, b));
            }
        }
        for a in 1..=n {
            out.push(Generator::V(a));
        }
        out
    }

    pub fn parse(s: &str) -> Result<Generator> {
        let err = || Error::UnknownGenerator(s.to_string());
        let s = s.trim();
        let (head, rest) = s.split_once('(').ok_or_else(err)?;
        let rest = rest.strip_suffix(')').ok_or_else(err)?;
        let parse_idx = |t: &str| -> Result<u8> {
            t.trim().parse::<u8>().map_err(|_| err())
        };
        match head.trim() {
            "E" => {
                let (a, b) = rest.split_once(',').ok_or_else(err)?;
                Ok(Generator::E(parse_idx(a)?, parse_idx(b)?))
            }
            "V" => Ok(Generator::V(parse_idx(rest)?)),
            "Vb" => Ok(Generator::Vb(parse_idx(rest)?)),
            _ => Err(err()),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::E(a, b) => write!(f, "E({a},{b})"),
            Generator::V(a) => write!(f, "V({a})"),
            Generator::Vb(a) => write!(f, "Vb({a})"),
        }
    }
}

/// A product of generators; the empty word is the unit of the enveloping
/// algebra. Ordered by (length, letter sequence) for deterministic storage.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<Generator>);

impl Word {
    pub fn unit() -> Word {
        Word(Vec::new())
    }

    pub fn single(g: Generator) -> Word {
        Word(vec![g])
    }

    pub fn of(gs: &[Generator]) -> Word {
        Word(gs.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, rhs: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&rhs.0);
        Word(v)
    }

    pub fn fermion_charge(&self) -> i64 {
        self.0.iter().map(|g| g.fermion_charge()).sum()
    }

    /// Z2 grading: parity of the number of fermionic letters.
    pub fn parity(&self) -> u8 {
        (self.0.iter().filter(|g| g.is_fermion()).count() % 2) as u8
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let joined = self
            .0
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join("*");
        write!(f, "{joined}")
    }
}

/// A finite linear combination of words with Scalar coefficients. No zero
/// coefficients are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Expression {
    terms: BTreeMap<Word, Scalar>,
}

impl Expression {
    pub fn zero() -> Expression {
        Expression {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit() -> Expression {
        Expression::from_word(Word::unit())
    }

    pub fn from_word(w: Word) -> Expression {
        Expression::term(w, Scalar::one())
    }

    pub fn from_generator(g: Generator) -> Expression {
        Expression::from_word(Word::single(g))
    }

    pub fn term(w: Word, c: Scalar) -> Expression {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        Expression { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    pub fn insert_add(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Expression) -> Expression {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.insert_add(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Expression) -> Expression {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Expression {
        Expression {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Expression {
        if c.is_zero() {
            return Expression::zero();
        }
        Expression {
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), v * c))
                .collect(),
        }
    }

    /// Bilinear product: words concatenate, coefficients multiply.
    pub fn mul(&self, rhs: &Expression) -> Expression {
        let mut out = Expression::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.insert_add(wa.concat(wb), ca * cb);
            }
        }
        out
    }

    /// Substitute parameters at a rational point in every coefficient.
    pub fn substitute(&self, assign: &BTreeMap<crate::param::Param, Rat>) -> Result<Expression> {
        let mut out = Expression::zero();
        for (w, c) in &self.terms {
            out.insert_add(w.clone(), Scalar::from_rat(c.substitute(assign)?));
        }
        Ok(out)
    }

    /// Every term must carry the same fermion charge for a homogeneous
    /// expression; returns the charge if so.
    pub fn homogeneous_charge(&self) -> Option<i64> {
        let mut it = self.terms.keys();
        let first = it.next()?.fermion_charge();
        if it.all(|w| w.fermion_charge() == first) {
            Some(first)
        } else {
            None
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = format!("{c:#}");
            if w.is_empty() {
                write!(f, "{coeff}")?;
            } else {
                let word = w
                    .0
                    .iter()
                    .map(|g| g.to_string())
                    .collect::<Vec<_>>()
                    .join("*");
                if c.is_one() {
                    write!(f, "{word}")?;
                } else {
                    write!(f, "{coeff}*{word}")?;
                }
            }
        }
        Ok(())
    }
}
