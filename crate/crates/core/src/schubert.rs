//! Schubert polynomials via divided differences, and expansion of
//! polynomials in the Schubert basis.
//!
//! Schub_{w_0} = x_1^{n-1} x_2^{n-2} ... x_{n-1} for the longest element,
//! and Schub_w = ∂_{i_1} ... ∂_{i_l} Schub_{w_0} along a reduced word of
//! w^{-1} w_0. The memoized construction walks ascents upward instead
//! (Schub_w = ∂_i Schub_{w s_i} when w_i < w_{i+1}), which caches every
//! intermediate permutation; `schubert_via_reduced_word` keeps the direct
//! reduced-word route as an independent path for cross-checking.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::One;
use thiserror::Error;

use crate::perm::{LehmerCode, Permutation};
use crate::poly::{Monomial, Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error("expansion did not terminate within {0} rounds (leading-monomial law violated?)")]
    IterationCap(u64),
}

/// ∂_i f = (f - s_i f) / (x_i - x_{i+1}), i >= 1.
///
/// The numerator is antisymmetric in x_i, x_{i+1}, so the division is exact;
/// a failure would signal an arithmetic bug, not a user error.
pub fn divided_difference(i: usize, f: &Polynomial) -> Polynomial {
    assert!(i >= 1, "divided difference index is 1-based");
    let swapped = f.swap_vars(i, i + 1);
    let num = f - &swapped;
    if num.is_zero() {
        return Polynomial::zero();
    }
    let denom = &Polynomial::var(i) - &Polynomial::var(i + 1);
    num.exact_div(&denom)
        .expect("divided-difference numerator must be divisible by x_i - x_{i+1}")
}

/// Schub_{w_0} in S_m: the staircase monomial x_1^{m-1} x_2^{m-2} ... x_{m-1}.
pub fn staircase(m: usize) -> Polynomial {
    let exps: Vec<u16> = (0..m.saturating_sub(1)).map(|i| (m - 1 - i) as u16).collect();
    Polynomial::from_monomial(Monomial::new(exps), Rational::one())
}

/// Direct route: peel a reduced word of w^{-1} w_0 in ambient S_m and apply
/// the divided differences to the staircase, rightmost operator first.
/// No caching; used to cross-check the memoized construction.
pub fn schubert_via_reduced_word(w: &Permutation, ambient: usize) -> Polynomial {
    let w = w.embed(ambient);
    let u = w.inverse().compose(&Permutation::longest(ambient));
    let word = u.reduced_word();
    let mut f = staircase(ambient);
    for &i in word.iter().rev() {
        f = divided_difference(i, &f);
    }
    f
}

/// Memoizing table of Schubert polynomials, keyed by canonical permutation
/// (trailing fixed points stripped). Insert-only; concurrent lookups may
/// duplicate work but always insert equal values.
#[derive(Default)]
pub struct SchubertTable {
    cache: Mutex<HashMap<Permutation, Arc<Polynomial>>>,
}

impl SchubertTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schubert(&self, w: &Permutation) -> Arc<Polynomial> {
        let w = w.canonical();
        if let Some(p) = self.cache.lock().unwrap().get(&w) {
            return Arc::clone(p);
        }
        // climb ascents until a cached permutation or w_0 is reached
        let mut pending: Vec<(Permutation, usize)> = Vec::new();
        let mut cur = w.clone();
        let m = cur.n();
        let mut poly: Arc<Polynomial> = loop {
            if let Some(p) = self.cache.lock().unwrap().get(&cur) {
                break Arc::clone(p);
            }
            if cur == Permutation::longest(m) {
                let p = Arc::new(staircase(m));
                self.insert(cur.clone(), Arc::clone(&p));
                break p;
            }
            let i = (1..m)
                .find(|&i| cur.apply(i) < cur.apply(i + 1))
                .expect("only w_0 has no ascent");
            let mut word = cur.word().to_vec();
            word.swap(i - 1, i);
            let next = Permutation::new(word).expect("swap keeps a permutation");
            pending.push((cur, i));
            cur = next;
        };
        while let Some((perm, i)) = pending.pop() {
            poly = Arc::new(divided_difference(i, &poly));
            self.insert(perm, Arc::clone(&poly));
        }
        poly
    }

    fn insert(&self, w: Permutation, p: Arc<Polynomial>) {
        self.cache.lock().unwrap().entry(w).or_insert(p);
    }

    pub fn cached_count(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    /// Expand f in the Schubert basis by greedy peeling: take the lex-minimal
    /// term c x^m of the remainder, subtract c Schub_u where u has Lehmer
    /// code m, and repeat. Terminates because x^{code(u)} is the unique
    /// lex-minimal monomial of Schub_u, with coefficient 1.
    pub fn expand(&self, f: &Polynomial) -> Result<SchubertExpansion, ExpandError> {
        let cap = monomial_count_cap(f.degree(), f.max_var());
        let mut rem = f.clone();
        let mut terms: BTreeMap<Permutation, Rational> = BTreeMap::new();
        let mut rounds = 0u64;
        while !rem.is_zero() {
            rounds += 1;
            if rounds > cap {
                return Err(ExpandError::IterationCap(cap));
            }
            let (m, c) = rem.min_monomial_lex().expect("nonzero remainder");
            let code = LehmerCode::new(m.exps().iter().map(|&e| e as u32).collect());
            let u = Permutation::from_code(&code);
            let schub = self.schubert(&u);
            rem = &rem - &schub.scale(&c);
            *terms.entry(u).or_insert_with(num_traits::Zero::zero) += c;
        }
        terms.retain(|_, c| !num_traits::Zero::is_zero(c));
        Ok(SchubertExpansion { terms })
    }
}

/// Number of monomials of degree <= d in v variables: C(d + v, v).
fn monomial_count_cap(d: usize, v: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 1..=v {
        c = c.saturating_mul((d + i) as u64) / i as u64;
    }
    c.max(1)
}

/// A polynomial written in the Schubert basis: permutation -> coefficient,
/// sorted by one-line notation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchubertExpansion {
    terms: BTreeMap<Permutation, Rational>,
}

impl SchubertExpansion {
    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Permutation) -> Option<&Rational> {
        self.terms.get(w)
    }

    /// Sum of coeff * Schub_u; must reproduce the expanded polynomial.
    pub fn reconstruct(&self, tbl: &SchubertTable) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (u, c) in &self.terms {
            acc = &acc + &tbl.schubert(u).scale(c);
        }
        acc
    }

    /// All coefficients nonnegative integers (Conjecture-1(3) shape).
    pub fn is_nonnegative_integral(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.denom().is_one() && !num_traits::Signed::is_negative(c.numer()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(w, c)| {
                    serde_json::json!({ "perm": w.to_string(), "coef": c.to_string() })
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn divided_difference_examples() {
        assert_eq!(divided_difference(1, &p("x1")), Polynomial::one());
        // (x1^2 x2 - x1^2 x3) / (x2 - x3) = x1^2
        assert_eq!(divided_difference(2, &p("x1^2*x2")), p("x1^2"));
        // symmetric input vanishes
        assert_eq!(
            divided_difference(1, &p("x1*x2 + x1 + x2")),
            Polynomial::zero()
        );
        assert_eq!(divided_difference(3, &p("x1+x2")), Polynomial::zero());
    }

    #[test]
    fn nilpotence_and_braid_on_samples() {
        let samples = [
            p("x1^3*x2 - 2*x2*x3 + x4"),
            p("x1*x2*x3 + x2^2 + 5"),
            p("x1^4 - x3^2*x4 + 1/2*x2"),
        ];
        for f in &samples {
            for i in 1..=4 {
                let once = divided_difference(i, f);
                assert!(divided_difference(i, &once).is_zero());
            }
            let lhs = divided_difference(1, &divided_difference(2, &divided_difference(1, f)));
            let rhs = divided_difference(2, &divided_difference(1, &divided_difference(2, f)));
            assert_eq!(lhs, rhs);
            let lhs = divided_difference(1, &divided_difference(3, f));
            let rhs = divided_difference(3, &divided_difference(1, f));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase(3), p("x1^2*x2"));
        assert_eq!(staircase(1), Polynomial::one());
    }

    #[test]
    fn schubert_small_values() {
        let tbl = SchubertTable::new();
        assert_eq!(*tbl.schubert(&perm("321")), p("x1^2*x2"));
        assert_eq!(*tbl.schubert(&perm("123")), Polynomial::one());
        assert_eq!(*tbl.schubert(&perm("132")), p("x1+x2"));
        assert_eq!(*tbl.schubert(&perm("213")), p("x1"));
        assert_eq!(*tbl.schubert(&perm("231")), p("x1*x2"));
        assert_eq!(*tbl.schubert(&perm("312")), p("x1^2"));
        assert_eq!(*tbl.schubert(&perm("1423")), p("a^2+ab+b^2"));
        assert_eq!(*tbl.schubert(&perm("1342")), p("ab+ac+bc"));
        // table row 4132: Schub_1423 * Schub_231 = (a^2+ab+b^2)ab
        let prod = &*tbl.schubert(&perm("1423")) * &*tbl.schubert(&perm("231"));
        assert_eq!(prod, &p("a^2+ab+b^2") * &p("ab"));
    }

    #[test]
    fn matches_reduced_word_route_on_s4() {
        let tbl = SchubertTable::new();
        for w in crate::perm::enumerate(4) {
            assert_eq!(
                *tbl.schubert(&w),
                schubert_via_reduced_word(&w, 4),
                "w = {w}"
            );
        }
    }

    #[test]
    fn stability_under_embedding() {
        let tbl = SchubertTable::new();
        for w in crate::perm::enumerate(4) {
            let in_s4 = schubert_via_reduced_word(&w, 4);
            let in_s5 = schubert_via_reduced_word(&w, 5);
            assert_eq!(in_s4, in_s5, "w = {w}");
            assert_eq!(*tbl.schubert(&w.embed(5)), in_s4);
        }
    }

    #[test]
    fn dominant_permutations_are_monomials() {
        let tbl = SchubertTable::new();
        // weakly decreasing code => single monomial x^code
        let w = Permutation::from_code(&LehmerCode::new(vec![3, 1]));
        assert_eq!(w, perm("4213"));
        assert_eq!(*tbl.schubert(&w), p("a^3*b"));
        let w = Permutation::from_code(&LehmerCode::new(vec![6, 3, 1]));
        assert_eq!(*tbl.schubert(&w), p("a^6*b^3*c"));
    }

    #[test]
    fn expand_examples() {
        let tbl = SchubertTable::new();
        let e = tbl.expand(&p("ab+ac+bc")).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e.coeff(&perm("1342")), Some(&Rational::one()));
        // basis round-trip on all of S_4
        for u in crate::perm::enumerate(4) {
            let e = tbl.expand(&tbl.schubert(&u)).unwrap();
            assert_eq!(e.len(), 1, "u = {u}");
            assert_eq!(e.coeff(&u), Some(&Rational::one()), "u = {u}");
        }
        // zero expands to nothing and reconstructs to zero
        let e = tbl.expand(&Polynomial::zero()).unwrap();
        assert!(e.is_empty());
        assert!(e.reconstruct(&tbl).is_zero());
    }

    #[test]
    fn expand_reconstructs_and_reports_rationals_verbatim() {
        let tbl = SchubertTable::new();
        let f = &p("3*a^2*b - 1/2*a*b + a^3") + &p("x1*x2*x3");
        let e = tbl.expand(&f).unwrap();
        assert_eq!(e.reconstruct(&tbl), f);
        assert!(!e.is_nonnegative_integral());
        let g = &p("2*a*b") + &*tbl.schubert(&perm("1342"));
        let e = tbl.expand(&g).unwrap();
        assert_eq!(e.reconstruct(&tbl), g);
        assert!(e.is_nonnegative_integral());
    }

    #[test]
    fn leading_monomial_law_s4() {
        let tbl = SchubertTable::new();
        for u in crate::perm::enumerate(4) {
            let s = tbl.schubert(&u);
            let (m, c) = s.min_monomial_lex().unwrap();
            let code: Vec<u32> = m.exps().iter().map(|&e| e as u32).collect();
            assert_eq!(LehmerCode::new(code), u.code(), "u = {u}");
            assert_eq!(c, Rational::one(), "u = {u}");
        }
    }

    #[test]
    fn expansion_json_sorted() {
        let tbl = SchubertTable::new();
        let f = &*tbl.schubert(&perm("321")) + &*tbl.schubert(&perm("132"));
        let e = tbl.expand(&f).unwrap();
        let j = e.to_json();
        let arr = j.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["perm"], "132");
        assert_eq!(arr[0]["coef"], "1");
        assert_eq!(arr[1]["perm"], "321");
    }
}
