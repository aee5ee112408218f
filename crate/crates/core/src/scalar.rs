use crate::error::{Error, Result};
use crate::param::Param;
use crate::rational::{content, Rat};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A power product of parameters with integer (possibly negative) exponents.
/// Stored sorted by parameter with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Param, i64)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(p: Param, e: i64) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(p, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, p: Param) -> i64 {
        self.0
            .iter()
            .find(|(v, _)| *v == p)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn exponents(&self) -> &[(Param, i64)] {
        &self.0
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + rhs.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < rhs.0.len() {
            let pick = match (self.0.get(i), rhs.0.get(j)) {
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => (*a, *ea, true, false),
                    Ordering::Greater => (*b, *eb, false, true),
                    Ordering::Equal => (*a, *ea + *eb, true, true),
                },
                (Some((a, ea)), None) => (*a, *ea, true, false),
                (None, Some((b, eb))) => (*b, *eb, false, true),
                (None, None) => unreachable!(),
            };
            if pick.2 {
                i += 1;
            }
            if pick.3 {
                j += 1;
            }
            if pick.1 != 0 {
                out.push((pick.0, pick.1));
            }
        }
        Monomial(out)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(p, e)| (*p, -e)).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(
            self.0
                .iter()
                .map(|(p, e)| (*p, e * k))
                .filter(|(_, e)| *e != 0)
                .collect(),
        )
    }

    /// Whether every exponent of `rhs` is dominated, i.e. self/rhs has only
    /// nonnegative exponents. Used by the exact-division loop on shifted
    /// (ordinary) polynomials.
    pub fn divisible_by(&self, rhs: &Monomial) -> bool {
        rhs.0.iter().all(|(p, e)| self.exponent(*p) >= *e)
    }
}

/// Fixed total monomial order: compare exponent vectors parameter by
/// parameter in `Param` order, missing entries read as zero.
impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some((_, ea)), None) => return ea.cmp(&0),
                (None, Some((_, eb))) => return 0.cmp(eb),
                (Some((a, ea)), Some((b, eb))) => match a.cmp(b) {
                    Ordering::Less => {
                        if *ea != 0 {
                            return ea.cmp(&0);
                        }
                        i += 1;
                    }
                    Ordering::Greater => {
                        if *eb != 0 {
                            return 0.cmp(eb);
                        }
                        j += 1;
                    }
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate Laurent polynomial over exact rationals.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        LaurentPoly { terms }
    }

    pub fn term(m: Monomial, c: Rat) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(p: Param) -> LaurentPoly {
        LaurentPoly::term(Monomial::var(p, 1), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The single (monomial, coefficient) pair if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Monomial, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    fn insert_add(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert_add(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_add(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(mm, v)| (mm.mul(m), v * c))
                .collect(),
        }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        self.terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|(p, _)| *p))
            .collect()
    }

    /// Per-parameter minimum exponent over all terms (the monomial gcd).
    fn mono_gcd(&self) -> Monomial {
        let mut mins: BTreeMap<Param, i64> = BTreeMap::new();
        let params = self.params();
        for p in &params {
            let min = self
                .terms
                .keys()
                .map(|m| m.exponent(*p))
                .min()
                .unwrap_or(0);
            if min != 0 {
                mins.insert(*p, min);
            }
        }
        Monomial(mins.into_iter().collect())
    }

    fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact division: `Some(q)` with `self == q * d` or `None`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // Shift both to ordinary polynomials so that leading-term division
        // terminates, then shift the quotient back.
        let sf = self.mono_gcd();
        let sg = d.mono_gcd();
        let f0 = self.mul_monomial(&sf.inv(), &Rat::one());
        let g0 = d.mul_monomial(&sg.inv(), &Rat::one());
        let (gm, gc) = g0.leading().expect("nonzero");
        let (gm, gc) = (gm.clone(), gc.clone());
        let mut rem = f0;
        let mut quo = LaurentPoly::zero();
        while !rem.is_zero() {
            let (fm, fc) = rem.leading().expect("nonzero");
            if !fm.divisible_by(&gm) {
                return None;
            }
            let qm = fm.mul(&gm.inv());
            let qc = fc / &gc;
            quo.insert_add(qm.clone(), qc.clone());
            rem = rem.sub(&g0.mul_monomial(&qm, &qc));
        }
        Some(quo.mul_monomial(&sf.mul(&sg.inv()), &Rat::one()))
    }

    /// Positive rational content of the coefficients.
    pub fn content(&self) -> Rat {
        content(self.terms.values())
    }

    /// Substitute parameters by unit monomials (target = coeff * monomial).
    pub fn substitute_monomials(&self, map: &BTreeMap<Param, (Rat, Monomial)>) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut mono = Monomial::one();
            for (p, e) in m.exponents() {
                match map.get(p) {
                    Some((tc, tm)) => {
                        // tc is nonzero for a valid unit monomial target
                        coeff = &coeff * &tc.pow(*e).expect("nonzero monomial target");
                        mono = mono.mul(&tm.pow(*e));
                    }
                    None => mono = mono.mul(&Monomial::var(*p, *e)),
                }
            }
            out.insert_add(mono, coeff);
        }
        out
    }

    /// Exact evaluation at a full rational assignment.
    pub fn eval(&self, assign: &BTreeMap<Param, Rat>) -> Result<Rat> {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (p, e) in m.exponents() {
                let x = assign
                    .get(p)
                    .ok_or_else(|| Error::MissingAssignment(p.name()))?;
                if x.is_zero() && *e < 0 {
                    return Err(Error::SubstitutionPole(format!("{p} = 0")));
                }
                v = &v * &x.pow(*e).map_err(|_| Error::SubstitutionPole(format!("{p} = 0")))?;
            }
            acc += &v;
        }
        Ok(acc)
    }
}

/// An element of the field of rational functions in the deformation
/// parameters: a quotient of Laurent polynomials over exact rationals.
///
/// Canonical form: if the numerator divides exactly the denominator is 1;
/// otherwise the denominator is a primitive integer polynomial with minimum
/// exponent zero in every parameter and positive leading coefficient under
/// the fixed monomial order. Zero is 0/1. Equality is decided by
/// cross-multiplication, so it is exact without requiring full multivariate
/// gcd reduction.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn make(num: LaurentPoly, den: LaurentPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            });
        }
        if let Some(q) = num.exact_div(&den) {
            return Ok(Scalar {
                num: q,
                den: LaurentPoly::one(),
            });
        }
        // Normalize the denominator: strip its monomial gcd and content and
        // fix the sign of its leading coefficient, moving the unit into the
        // numerator.
        let shift = den.mono_gcd();
        let den0 = den.mul_monomial(&shift.inv(), &Rat::one());
        let mut c = den0.content();
        if den0.leading().expect("nonzero").1.is_negative() {
            c = -c;
        }
        let unit_inv = c.recip().expect("content nonzero");
        let den1 = den0.scale(&unit_inv);
        let num1 = num.mul_monomial(&shift.inv(), &unit_inv);
        Ok(Scalar {
            num: num1,
            den: den1,
        })
    }

    pub fn zero() -> Scalar {
        Scalar {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            num: LaurentPoly::one(),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_rat(c: Rat) -> Scalar {
        Scalar {
            num: LaurentPoly::constant(c),
            den: LaurentPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rat(Rat::from_int(n))
    }

    pub fn param(p: Param) -> Scalar {
        Scalar {
            num: LaurentPoly::var(p),
            den: LaurentPoly::one(),
        }
    }

    pub fn monomial(c: Rat, m: Monomial) -> Scalar {
        Scalar {
            num: LaurentPoly::term(m, c),
            den: LaurentPoly::one(),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The (monomial, coefficient) view when this scalar is a nonzero unit
    /// monomial: a single Laurent term over denominator 1.
    pub fn as_unit_monomial(&self) -> Option<(Rat, Monomial)> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_monomial().map(|(m, c)| (c.clone(), m.clone()))
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut s = self.num.params();
        s.extend(self.den.params());
        s
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::make(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        if e == 0 {
            return Ok(Scalar::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational parameter point.
    pub fn substitute(&self, assign: &BTreeMap<Param, Rat>) -> Result<Rat> {
        let d = self.den.eval(assign)?;
        if d.is_zero() {
            let point = assign
                .iter()
                .map(|(p, v)| format!("{p} = {v}"))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::SubstitutionPole(point));
        }
        let n = self.num.eval(assign)?;
        Ok(&n / &d)
    }

    /// Substitute parameters by nonzero unit monomials; parameters not in
    /// the map are left untouched.
    pub fn substitute_monomials(&self, map: &BTreeMap<Param, (Rat, Monomial)>) -> Scalar {
        let num = self.num.substitute_monomials(map);
        let den = self.den.substitute_monomials(map);
        Scalar::make(num, den).expect("nonzero denominator under unit-monomial substitution")
    }

    /// Substitute every parameter by 1.
    pub fn at_unity(&self) -> Scalar {
        let map: BTreeMap<Param, (Rat, Monomial)> = self
            .params()
            .into_iter()
            .map(|p| (p, (Rat::one(), Monomial::one())))
            .collect();
        self.substitute_monomials(&map)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for Scalar {}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar {
                num: self.num.add(&rhs.num),
                den: LaurentPoly::one(),
            };
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Scalar::make(num, den).expect("nonzero denominator")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar {
                num: self.num.mul(&rhs.num),
                den: LaurentPoly::one(),
            };
        }
        Scalar::make(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero denominator")
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        if rhs.is_zero() {
            panic!("division by zero scalar");
        }
        Scalar::make(self.num.mul(&rhs.den), self.den.mul(&rhs.num)).expect("checked nonzero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

fn fmt_poly(poly: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if poly.is_zero() {
        return write!(f, "0");
    }
    for (i, (m, c)) in poly.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let c = c.abs();
        if m.is_one() {
            write!(f, "{c}")?;
        } else {
            let mut lead = true;
            if !c.is_one() {
                write!(f, "{c}")?;
                lead = false;
            }
            for (p, e) in m.exponents() {
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                if *e == 1 {
                    write!(f, "{p}")?;
                } else {
                    write!(f, "{p}^{e}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.num_terms() > 1 && f.alternate() {
                write!(f, "(")?;
                fmt_poly(&self.num, f)?;
                write!(f, ")")
            } else {
                fmt_poly(&self.num, f)
            }
        } else {
            write!(f, "(")?;
            fmt_poly(&self.num, f)?;
            write!(f, ")/(")?;
            fmt_poly(&self.den, f)?;
            write!(f, ")")
        }
    }
}

/// q-number [n]_{base^power} = (1 - base^{power*n}) / (1 - base^{power}),
/// returned in closed Laurent-polynomial form: for n >= 0 this is the
/// geometric sum over base^{power*k}, and [-n] = -base^{-power*n} [n].
pub fn q_number(n: i64, base: Param, power: i64) -> Scalar {
    assert!(power != 0, "q_number requires a nonzero power");
    q_number_of(n, &Scalar::param(base), power)
}

/// q-number with an arbitrary nonzero scalar base.
pub fn q_number_of(n: i64, base: &Scalar, power: i64) -> Scalar {
    assert!(power != 0, "q_number requires a nonzero power");
    assert!(!base.is_zero(), "q_number requires a nonzero base");
    let step = base.pow(power).expect("nonzero base");
    if n >= 0 {
        let mut acc = Scalar::zero();
        let mut term = Scalar::one();
        for _ in 0..n {
            acc = &acc + &term;
            term = &term * &step;
        }
        acc
    } else {
        let m = -n;
        let shift = step.pow(-m).expect("nonzero base");
        let pos = q_number_of(m, base, power);
        -&(&shift * &pos)
    }
}
