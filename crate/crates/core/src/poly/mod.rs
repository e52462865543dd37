//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Variables are positional: x_1 is index 0. Monomials keep no trailing
//! zeros and are totally ordered by graded lexicographic order (degree
//! first, then lex with x_1 most significant), so term iteration and every
//! serialization is deterministic. Coefficients are exact `BigRational`s;
//! no floating point ever enters a symbolic path.

mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use text::parse_polynomial;

/// Exact rational scalar: reduced, denominator positive (guaranteed by `num-rational`).
pub type Rational = num_rational::BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("no value supplied for variable x{0}")]
    MissingValue(usize),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DivError {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("not exactly divisible")]
    NotDivisible,
}

/// Exponent vector, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: Vec<u16>,
}

impl Monomial {
    pub fn new(mut exps: Vec<u16>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial { exps }
    }

    /// x_k, 1-based.
    pub fn var(k: usize) -> Self {
        assert!(k >= 1);
        let mut exps = vec![0; k];
        exps[k - 1] = 1;
        Monomial { exps }
    }

    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp_of(&self, var: usize) -> u16 {
        self.exps.get(var).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Index count of the highest variable used (x_k -> k), 0 for the empty monomial.
    pub fn max_var(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().max(other.exps.len());
        let exps = (0..n)
            .map(|i| self.exp_of(i) + other.exp_of(i))
            .collect();
        // no trailing zero can appear from adding nonnegatives with one side nonzero
        Monomial { exps }
    }

    /// self / other, or None when some exponent would go negative.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.exps.len() > self.exps.len() {
            return None;
        }
        let mut exps = self.exps.clone();
        for (i, &e) in other.exps.iter().enumerate() {
            exps[i] = exps[i].checked_sub(e)?;
        }
        Some(Monomial::new(exps))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let n = self.exps.len().min(other.exps.len());
        Monomial::new((0..n).map(|i| self.exps[i].min(other.exps[i])).collect())
    }

    /// Pure lexicographic comparison, x_1 most significant.
    pub fn cmp_lex(&self, other: &Monomial) -> Ordering {
        let n = self.exps.len().max(other.exps.len());
        for i in 0..n {
            match self.exp_of(i).cmp(&other.exp_of(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    fn swap_vars(&self, i: usize, j: usize) -> Monomial {
        let n = self.exps.len().max(i).max(j);
        let mut exps: Vec<u16> = (0..n).map(|k| self.exp_of(k)).collect();
        exps.swap(i - 1, j - 1);
        Monomial::new(exps)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: degree first, then lex with x_1 most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.cmp_lex(other))
    }
}

/// Sparse polynomial: monomial -> nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    /// The variable x_k, 1-based.
    pub fn var(k: usize) -> Self {
        Polynomial::from_monomial(Monomial::var(k), Rational::one())
    }

    pub fn from_monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&Rational> {
        self.terms.get(m)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Highest variable index used (x_k -> k).
    pub fn max_var(&self) -> usize {
        self.terms.keys().map(|m| m.max_var()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
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

    /// Leading term in graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// The term minimal in pure lexicographic order (x_1 most significant).
    pub fn min_monomial_lex(&self) -> Result<(Monomial, Rational), PolyError> {
        let (m, c) = self
            .terms
            .iter()
            .min_by(|(a, _), (b, _)| a.cmp_lex(b))
            .ok_or(PolyError::ZeroPolynomial)?;
        Ok((m.clone(), c.clone()))
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Divide every term by a monomial; None if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut terms = BTreeMap::new();
        for (t, c) in &self.terms {
            terms.insert(t.div(m)?, c.clone());
        }
        Some(Polynomial { terms })
    }

    /// Largest monomial dividing every term (componentwise minimum of exponents).
    pub fn monomial_gcd(&self) -> Result<Monomial, PolyError> {
        let mut it = self.terms.keys();
        let first = it.next().ok_or(PolyError::ZeroPolynomial)?;
        let mut g = first.clone();
        for m in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        Ok(g)
    }

    /// gcd of numerators over lcm of denominators; dividing by it leaves
    /// coprime integer coefficients. Zero polynomial -> error.
    pub fn rational_content(&self) -> Result<Rational, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Ok(Rational::new(num, den))
    }

    /// Exact quotient self / d, or `NotDivisible`. Multivariate long division
    /// against the graded-lex leading term of d; succeeds iff the remainder
    /// vanishes.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial, DivError> {
        let (dm, dc) = d.leading_term().ok_or(DivError::ZeroDivisor)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dm).ok_or(DivError::NotDivisible)?;
            let qc = rc / dc;
            // rem -= (qc x^qm) * d
            for (m, c) in &d.terms {
                rem.add_term(m.mul(&qm), -(c * &qc));
            }
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Exact rational evaluation; the point must supply a value for every
    /// variable appearing in the polynomial.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let need = self.max_var();
        if point.len() < need {
            return Err(PolyError::MissingValue(point.len() + 1));
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= rat_pow(&point[i], e as u32);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Some(degree) when all terms share the same total degree.
    pub fn is_homogeneous(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    pub fn has_nonnegative_integer_coeffs(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.denom().is_one() && !c.numer().is_negative())
    }

    /// Swap the variables x_i and x_j in every term (1-based).
    pub fn swap_vars(&self, i: usize, j: usize) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.swap_vars(i, j), c.clone()))
                .collect(),
        }
    }

    /// JSON form: list of {"exps": [..], "coef": "num/den"} in descending
    /// graded-lex order.
    pub fn to_json(&self) -> serde_json::Value {
        let list: Vec<serde_json::Value> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                serde_json::json!({
                    "exps": m.exps(),
                    "coef": c.to_string(),
                })
            })
            .collect();
        serde_json::Value::Array(list)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Polynomial, PolyError> {
        let arr = v
            .as_array()
            .ok_or_else(|| PolyError::Parse("expected array of terms".into()))?;
        let mut p = Polynomial::zero();
        for t in arr {
            let exps = t
                .get("exps")
                .and_then(|e| e.as_array())
                .ok_or_else(|| PolyError::Parse("term missing exps".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|u| u as u16)
                        .ok_or_else(|| PolyError::Parse("bad exponent".into()))
                })
                .collect::<Result<Vec<u16>, _>>()?;
            let coef = t
                .get("coef")
                .and_then(|c| c.as_str())
                .ok_or_else(|| PolyError::Parse("term missing coef".into()))?;
            let coef: Rational = coef
                .parse()
                .map_err(|_| PolyError::Parse(format!("bad coefficient {coef:?}")))?;
            p.add_term(Monomial::new(exps), coef);
        }
        Ok(p)
    }
}

fn rat_pow(r: &Rational, e: u32) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    // numerator and denominator are coprime, so their powers are too
    Rational::new_raw(r.numer().pow(e), r.denom().pow(e))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        // iterate the shorter side outermost
        let (a, b) = if self.num_terms() <= rhs.num_terms() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = Polynomial::zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&p("x1+x2") + &p("-x2"), p("x1"));
        assert_eq!(&p("x1+x2") + &Polynomial::zero(), p("x1+x2"));
        assert!((&p("x1+x2") - &p("x1+x2")).is_zero());
        assert_eq!(&p("a+b") * &p("a-b"), p("a^2-b^2"));
        assert_eq!(&p("x1*x2") * &Polynomial::one(), p("x1*x2"));
    }

    #[test]
    fn mul_matches_table_expansion() {
        // (a^2+ab+b^2)(ab+ac+bc), expanded monomial by monomial:
        //   a^2*(ab+ac+bc) = a^3b + a^3c + a^2bc
        //   ab *(ab+ac+bc) = a^2b^2 + a^2bc + ab^2c
        //   b^2*(ab+ac+bc) = ab^3 + ab^2c + b^3c
        let lhs = &p("a^2+a*b+b^2") * &p("a*b+a*c+b*c");
        let expect = p("a^3*b + a^3*c + a^2*b^2 + 2*a^2*b*c + a*b^3 + 2*a*b^2*c + b^3*c");
        assert_eq!(lhs, expect);
        assert_eq!(lhs.num_terms(), 7);
        assert_eq!(lhs.is_homogeneous(), Some(4));
    }

    #[test]
    fn exact_div_examples() {
        let z4231 = &p("a^2*b+a^2*c+a*b^2+a*b*c+b^2*c") * &p("a");
        assert_eq!(
            z4231.exact_div(&p("a")).unwrap(),
            p("a^2*b+a^2*c+a*b^2+a*b*c+b^2*c")
        );
        assert_eq!(p("x1+x2").exact_div(&Polynomial::one()).unwrap(), p("x1+x2"));
        assert_eq!(
            p("a^2+b^2").exact_div(&p("a+b")),
            Err(DivError::NotDivisible)
        );
        assert_eq!(
            p("a").exact_div(&Polynomial::zero()),
            Err(DivError::ZeroDivisor)
        );
        // zero dividend divides by anything nonzero
        assert!(Polynomial::zero().exact_div(&p("a+b")).unwrap().is_zero());
    }

    #[test]
    fn monomial_gcd_examples() {
        assert_eq!(p("a^3*b").monomial_gcd().unwrap(), Monomial::new(vec![3, 1]));
        let q = &p("a^2*b+a^2*c+a*b^2+a*b*c+b^2*c") * &p("a");
        assert_eq!(q.monomial_gcd().unwrap(), Monomial::var(1));
        assert_eq!(p("a+b").monomial_gcd().unwrap(), Monomial::one());
        assert_eq!(
            Polynomial::zero().monomial_gcd(),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn evaluate_examples() {
        let v = p("x1+x2").evaluate(&[rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(v, rat(2, 3));
        assert_eq!(
            Polynomial::one().evaluate(&[]).unwrap(),
            Rational::one()
        );
        let v = p("a^3*b").evaluate(&[rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(v, rat(1, 1024));
        assert_eq!(
            p("x1+x3").evaluate(&[rat_int(1)]),
            Err(PolyError::MissingValue(2))
        );
    }

    #[test]
    fn homogeneity_examples() {
        assert_eq!(p("x1+x2").is_homogeneous(), Some(1));
        assert_eq!(Polynomial::one().is_homogeneous(), Some(0));
        assert_eq!(p("x1+x1*x2").is_homogeneous(), None);
        assert!(p("2*x1+3").has_nonnegative_integer_coeffs());
        assert!(!p("x1-x2").has_nonnegative_integer_coeffs());
        assert!(!p("1/2*x1").has_nonnegative_integer_coeffs());
    }

    #[test]
    fn min_monomial_lex_examples() {
        let (m, c) = p("a*b+a*c+b*c").min_monomial_lex().unwrap();
        assert_eq!(m, Monomial::new(vec![0, 1, 1]));
        assert_eq!(c, Rational::one());
        let (m, _) = p("3*a^2*b").min_monomial_lex().unwrap();
        assert_eq!(m, Monomial::new(vec![2, 1]));
        let (m, _) = p("a^2+a*b+b^2").min_monomial_lex().unwrap();
        assert_eq!(m, Monomial::new(vec![0, 2]));
        assert!(Polynomial::zero().min_monomial_lex().is_err());
    }

    #[test]
    fn grlex_order() {
        // ascending: 1 < b < a < b^2 < ab < a^2 < ...
        let m = |v: &[u16]| Monomial::new(v.to_vec());
        assert!(m(&[]) < m(&[0, 1]));
        assert!(m(&[0, 1]) < m(&[1]));
        assert!(m(&[1]) < m(&[0, 2]));
        assert!(m(&[0, 2]) < m(&[1, 1]));
        assert!(m(&[1, 1]) < m(&[2]));
        // leading term of a+b^2 is b^2
        assert_eq!(
            p("a+b^2").leading_term().unwrap().0,
            &Monomial::new(vec![0, 2])
        );
    }

    #[test]
    fn json_roundtrip() {
        for s in ["0", "1", "-5/3", "x1^2*x2 - 7*x3 + 1/2"] {
            let q = p(s);
            assert_eq!(Polynomial::from_json(&q.to_json()).unwrap(), q);
        }
    }

    #[test]
    fn content_and_monomial_ops() {
        let q = p("6*a^2*b + 4*a*b^2");
        assert_eq!(q.rational_content().unwrap(), rat_int(2));
        assert_eq!(q.monomial_gcd().unwrap(), Monomial::new(vec![1, 1]));
        let r = q.div_monomial(&Monomial::new(vec![1, 1])).unwrap();
        assert_eq!(r, p("6*a + 4*b"));
        assert_eq!(q.div_monomial(&Monomial::new(vec![2, 0])), None);
        let half = p("1/2*a + 1/3*b");
        assert_eq!(half.rational_content().unwrap(), rat(1, 6));
        assert_eq!(half.scale(&rat_int(6)), p("3*a+2*b"));
    }

    #[test]
    fn swap_vars_is_involution() {
        let q = p("x1^2*x2 + x3");
        assert_eq!(q.swap_vars(1, 2), p("x1*x2^2 + x3"));
        assert_eq!(q.swap_vars(2, 3).swap_vars(2, 3), q);
        // swap with a variable beyond the support
        assert_eq!(p("x1").swap_vars(1, 4), p("x4"));
    }
}
