//! Sparse fraction-free Gaussian elimination (Bareiss) over an exact ring,
//! generic over the entry type so the same engine serves the symbolic
//! polynomial system, rational rank probes and numeric stationary solves.
//!
//! Classical one-step Bareiss: at step k with pivot p and previous pivot q,
//! every active entry updates as e' = (p*e - e_ic*e_cj) / q, and the division
//! is exact (the entries are minors of the original matrix). Pivots are
//! chosen by a Markowitz-style rule (least fill, then cheapest entry), with
//! index tie-breaks so elimination is bit-for-bit deterministic.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElimError {
    #[error("fraction-free division failed: elimination invariant broken")]
    DivisionFailed,
    #[error("nullspace dimension is {0}, expected 1")]
    Nullity(usize),
}

/// Ring operations the elimination needs.
pub trait Entry: Clone {
    /// Fields skip the Bareiss cross-multiply: rows without a pivot-column
    /// entry are left untouched and no division by the previous pivot runs.
    const IS_FIELD: bool = false;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn exact_div(&self, other: &Self) -> Option<Self>;
    /// (degree, size) used to prefer cheap pivots.
    fn complexity(&self) -> (usize, usize);
    /// Divide a common content out of a candidate nullvector; optional.
    fn strip_common(_vec: &mut [Self]) {}
}

impl Entry for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        Polynomial::exact_div(self, other).ok()
    }
    fn complexity(&self) -> (usize, usize) {
        (self.degree(), self.num_terms())
    }
    fn strip_common(vec: &mut [Self]) {
        let mut mono: Option<crate::poly::Monomial> = None;
        let mut content: Option<Rational> = None;
        for p in vec.iter().filter(|p| !p.is_zero()) {
            let m = p.monomial_gcd().expect("nonzero");
            mono = Some(match mono {
                None => m,
                Some(g) => g.gcd(&m),
            });
            let c = p.rational_content().expect("nonzero");
            content = Some(match content {
                None => c,
                Some(g) => rational_gcd(&g, &c),
            });
        }
        let (Some(mono), Some(content)) = (mono, content) else {
            return;
        };
        if mono.is_one() && content.is_one() {
            return;
        }
        let inv = content.recip();
        for p in vec.iter_mut() {
            if !p.is_zero() {
                *p = p
                    .div_monomial(&mono)
                    .expect("joint monomial content divides")
                    .scale(&inv);
            }
        }
    }
}

/// gcd(a, b) in Q: gcd of numerators over lcm of denominators.
fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    use num_integer::Integer;
    Rational::new(
        a.numer().gcd(b.numer()),
        a.denom().lcm(b.denom()),
    )
}

impl Entry for Rational {
    const IS_FIELD: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
    fn complexity(&self) -> (usize, usize) {
        let bits = self.numer().abs().bits() + self.denom().bits();
        (0, bits as usize)
    }
}

/// Rows over column indices; absent entries are zero.
#[derive(Debug, Clone)]
pub struct SparseMatrix<T> {
    pub ncols: usize,
    pub rows: Vec<BTreeMap<usize, T>>,
}

impl<T: Entry> SparseMatrix<T> {
    pub fn new(ncols: usize, nrows: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: vec![BTreeMap::new(); nrows],
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }
}

pub struct PivotStep<T> {
    /// Snapshot of the pivot row at elimination time.
    pub row: BTreeMap<usize, T>,
    pub col: usize,
}

pub struct Echelon<T> {
    pub steps: Vec<PivotStep<T>>,
    pub ncols: usize,
    pub free_cols: Vec<usize>,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.steps.len()
    }

    pub fn nullity(&self) -> usize {
        self.free_cols.len()
    }
}

/// Reduce to echelon form. Consumes the matrix.
pub fn eliminate<T: Entry>(mut mat: SparseMatrix<T>) -> Result<Echelon<T>, ElimError> {
    let ncols = mat.ncols;
    let nrows = mat.rows.len();
    let mut row_active = vec![true; nrows];
    let mut col_active = vec![true; ncols];
    let mut prev_pivot = T::one();
    let mut steps: Vec<PivotStep<T>> = Vec::new();

    loop {
        // column fill counts
        let mut col_count = vec![0usize; ncols];
        for (r, row) in mat.rows.iter().enumerate() {
            if row_active[r] {
                for &c in row.keys() {
                    col_count[c] += 1;
                }
            }
        }
        // Markowitz pivot: least (row_nnz-1)*(col_nnz-1), then cheapest entry,
        // then smallest (col, row)
        let mut best: Option<((usize, usize, usize, usize, usize), usize, usize)> = None;
        for (r, row) in mat.rows.iter().enumerate() {
            if !row_active[r] || row.is_empty() {
                continue;
            }
            let rn = row.len();
            for (&c, e) in row {
                let (deg, size) = e.complexity();
                let key = ((rn - 1) * (col_count[c] - 1), deg, size, c, r);
                if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                    best = Some((key, r, c));
                }
            }
        }
        let Some((_, pr, pc)) = best else {
            break;
        };

        let snapshot = std::mem::take(&mut mat.rows[pr]);
        let pivot = snapshot.get(&pc).expect("pivot nonzero").clone();
        row_active[pr] = false;
        col_active[pc] = false;

        for r in 0..nrows {
            if !row_active[r] {
                continue;
            }
            let coef = mat.rows[r].remove(&pc);
            if T::IS_FIELD {
                // plain sparse Gaussian elimination: row_r -= (coef/pivot) row_p
                let Some(coef) = coef else { continue };
                let factor = coef.exact_div(&pivot).expect("field division");
                for (&c, s) in &snapshot {
                    if c == pc {
                        continue;
                    }
                    let num = match mat.rows[r].get(&c) {
                        Some(e) => e.sub(&factor.mul(s)),
                        None => T::zero().sub(&factor.mul(s)),
                    };
                    if num.is_zero() {
                        mat.rows[r].remove(&c);
                    } else {
                        mat.rows[r].insert(c, num);
                    }
                }
                continue;
            }
            if mat.rows[r].is_empty() && coef.is_none() {
                continue;
            }
            let mut cols: Vec<usize> = mat.rows[r].keys().copied().collect();
            if coef.is_some() {
                for &c in snapshot.keys() {
                    if c != pc && col_active[c] && !mat.rows[r].contains_key(&c) {
                        cols.push(c);
                    }
                }
            }
            for c in cols {
                let mut num = match mat.rows[r].get(&c) {
                    Some(e) => pivot.mul(e),
                    None => T::zero(),
                };
                if let (Some(coef), Some(s)) = (&coef, snapshot.get(&c)) {
                    num = num.sub(&coef.mul(s));
                }
                if num.is_zero() {
                    mat.rows[r].remove(&c);
                } else {
                    let q = num.exact_div(&prev_pivot).ok_or(ElimError::DivisionFailed)?;
                    mat.rows[r].insert(c, q);
                }
            }
        }

        prev_pivot = pivot;
        steps.push(PivotStep { row: snapshot, col: pc });
    }

    let free_cols = (0..ncols).filter(|&c| col_active[c]).collect();
    Ok(Echelon {
        steps,
        ncols,
        free_cols,
    })
}

/// Back-substitute a spanning vector of a one-dimensional nullspace.
///
/// Walks the pivot steps in reverse; when the pivot does not divide the
/// accumulated combination exactly, the whole partial vector is scaled up
/// instead (the result is only defined up to a scalar), and common content
/// is stripped as it appears.
pub fn nullspace_vector<T: Entry>(ech: &Echelon<T>) -> Result<Vec<T>, ElimError> {
    if ech.nullity() != 1 {
        return Err(ElimError::Nullity(ech.nullity()));
    }
    let free = ech.free_cols[0];
    let zero = T::zero();
    let mut z: Vec<T> = vec![zero.clone(); ech.ncols];
    let mut known = vec![false; ech.ncols];
    z[free] = T::one();
    known[free] = true;
    for step in ech.steps.iter().rev() {
        let pivot = step.row.get(&step.col).expect("pivot");
        let mut acc = zero.clone();
        for (&c, e) in &step.row {
            if c == step.col {
                continue;
            }
            debug_assert!(known[c], "echelon column order");
            if !z[c].is_zero() {
                acc = acc.sub(&e.mul(&z[c]));
            }
        }
        match acc.exact_div(pivot) {
            Some(q) if !acc.is_zero() => z[step.col] = q,
            _ if acc.is_zero() => z[step.col] = zero.clone(),
            _ => {
                for (c, v) in z.iter_mut().enumerate() {
                    if known[c] && !v.is_zero() {
                        *v = v.mul(pivot);
                    }
                }
                z[step.col] = acc;
            }
        }
        known[step.col] = true;
        T::strip_common(&mut z);
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, rat_int};

    fn poly(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn rank_of_numeric_matrices() {
        // [[1,2],[2,4]] has rank 1
        let mut m = SparseMatrix::<Rational>::new(2, 2);
        m.set(0, 0, rat_int(1));
        m.set(0, 1, rat_int(2));
        m.set(1, 0, rat_int(2));
        m.set(1, 1, rat_int(4));
        let e = eliminate(m).unwrap();
        assert_eq!(e.rank(), 1);
        assert_eq!(e.nullity(), 1);
        let z = nullspace_vector(&e).unwrap();
        // z proportional to (2, -1)
        let lhs = z[0].mul(&rat_int(1)).sub(&z[1].mul(&rat_int(-2)));
        assert!(lhs.is_zero());
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let mut m = SparseMatrix::<Rational>::new(3, 3);
        for i in 0..3 {
            m.set(i, i, rat_int(1));
        }
        let e = eliminate(m).unwrap();
        assert_eq!(e.rank(), 3);
        assert_eq!(nullspace_vector(&e), Err(ElimError::Nullity(0)));
    }

    #[test]
    fn polynomial_nullspace() {
        // rows: (x1, -x2) and (x1^2, -x1*x2): nullspace spanned by (x2, x1)
        let mut m = SparseMatrix::<Polynomial>::new(2, 2);
        m.set(0, 0, poly("x1"));
        m.set(0, 1, poly("-x2"));
        m.set(1, 0, poly("x1^2"));
        m.set(1, 1, poly("-x1*x2"));
        let e = eliminate(m).unwrap();
        assert_eq!(e.rank(), 1);
        let z = nullspace_vector(&e).unwrap();
        assert!((&z[0].mul(&poly("x1"))).sub(&z[1].mul(&poly("x2"))).is_zero());
        // content-stripped: entries are the minimal pair up to sign
        let pair = (z[0].to_string(), z[1].to_string());
        assert!(pair == ("x2".into(), "x1".into()) || pair == ("-x2".into(), "-x1".into()));
    }

    #[test]
    fn bareiss_stays_integral() {
        // integer matrix: all intermediate entries stay integers
        let mut m = SparseMatrix::<Polynomial>::new(3, 3);
        let vals = [[3, 1, 4], [1, 5, 9], [2, 6, 5]];
        for r in 0..3 {
            for c in 0..3 {
                m.set(r, c, Polynomial::constant(rat_int(vals[r][c])));
            }
        }
        let e = eliminate(m).unwrap();
        assert_eq!(e.rank(), 3);
        for s in &e.steps {
            for v in s.row.values() {
                assert!(v.has_nonnegative_integer_coeffs() || (-v).has_nonnegative_integer_coeffs());
            }
        }
    }
}
