//! Independent recomputation of the stationary vector from point evaluations.
//!
//! ζ is homogeneous of the degree of the normalization monomial, so after
//! setting the last variable to 1 it is an (n-2)-variable polynomial of total
//! degree at most D. We solve the (full or χ-quotient) system exactly at the
//! simplex grid {α : |α| <= D} of deterministic integer nodes, normalize each
//! pointwise nullvector at w_0, run triangular multivariate Newton
//! interpolation, and rehomogenize. Degenerate nodes (nullspace dimension not
//! 1) shift the whole grid and restart. The caller re-verifies the result
//! exactly, so this route carries no numerical trust assumptions.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::perm::Permutation;
use crate::poly::{Monomial, Polynomial, Rational};

use super::elim::{eliminate, nullspace_vector, SparseMatrix};
use super::{normalization_target, ChainError, ChiQuotient, TransitionMatrix};

const MAX_GRID_SHIFTS: u64 = 10;

pub(crate) fn solve(
    tm: &TransitionMatrix,
    quotient: Option<&ChiQuotient>,
) -> Result<Vec<Polynomial>, ChainError> {
    let n = tm.n();
    let nvars = n - 1;
    let inner = nvars - 1;
    let degree = normalization_target(n).degree();

    let w0_full = tm
        .index_of(&Permutation::longest(n))
        .expect("w_0 in state list");
    let (nstates, w0_state) = match quotient {
        Some(q) => (q.reps.len(), q.orbit_of[w0_full]),
        None => (tm.size(), w0_full),
    };

    let grid = simplex_indices(inner, degree);
    let target = Polynomial::from_monomial(normalization_target(n), Rational::one());

    'shift: for shift in 1..=MAX_GRID_SHIFTS {
        let nodes: Vec<Rational> = (0..=degree as u64)
            .map(|j| Rational::from_integer((shift + j).into()))
            .collect();
        // per-state values on the grid
        let mut vals: Vec<HashMap<Vec<u16>, Rational>> =
            vec![HashMap::with_capacity(grid.len()); nstates];
        for alpha in &grid {
            let mut point: Vec<Rational> = alpha.iter().map(|&a| nodes[a as usize].clone()).collect();
            point.push(Rational::one());
            let sys = match quotient {
                Some(q) => substitute(&q.mat, &point)?,
                None => tm.numeric_system(&point)?,
            };
            let ech = eliminate(sys)?;
            if ech.nullity() != 1 {
                continue 'shift;
            }
            let z = nullspace_vector(&ech)?;
            if z[w0_state].is_zero() {
                continue 'shift;
            }
            let scale = target
                .evaluate(&point)
                .expect("full point")
                / &z[w0_state];
            for (s, v) in z.into_iter().enumerate() {
                vals[s].insert(alpha.clone(), v * &scale);
            }
        }
        let mut out_states = Vec::with_capacity(nstates);
        for v in vals {
            let inner_poly = newton_interpolate(inner, degree, &nodes, &v, 1);
            out_states.push(rehomogenize(&inner_poly, nvars, degree)?);
        }
        let full: Vec<Polynomial> = match quotient {
            Some(q) => q.orbit_of.iter().map(|&o| out_states[o].clone()).collect(),
            None => out_states,
        };
        return Ok(full);
    }
    Err(ChainError::DegeneratePoint(0))
}

/// All α in Z^k with |α| <= d, lexicographic.
fn simplex_indices(k: usize, d: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; k];
    fn rec(out: &mut Vec<Vec<u16>>, cur: &mut Vec<u16>, pos: usize, left: usize) {
        if pos == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left as u16 {
            cur[pos] = v;
            rec(out, cur, pos + 1, left - v as usize);
        }
        cur[pos] = 0;
    }
    rec(&mut out, &mut cur, 0, d);
    out
}

fn substitute(
    mat: &SparseMatrix<Polynomial>,
    point: &[Rational],
) -> Result<SparseMatrix<Rational>, ChainError> {
    let mut out = SparseMatrix::new(mat.ncols, mat.rows.len());
    for (r, row) in mat.rows.iter().enumerate() {
        for (&c, p) in row {
            let v = p
                .evaluate(point)
                .map_err(|e| ChainError::InvariantViolation(e.to_string()))?;
            out.set(r, c, v);
        }
    }
    Ok(out)
}

/// Triangular Newton interpolation on the simplex grid: `vals` holds f at the
/// nodes (t_{α_1}, ..., t_{α_k}) for |α| <= d; returns the unique polynomial
/// of total degree <= d through them, in variables first_var, first_var+1, ...
fn newton_interpolate(
    k: usize,
    d: usize,
    nodes: &[Rational],
    vals: &HashMap<Vec<u16>, Rational>,
    first_var: usize,
) -> Polynomial {
    if k == 0 {
        return Polynomial::constant(vals[&Vec::new()].clone());
    }
    // Newton (divided-difference) coefficients along the first axis, per tail β
    let mut layers: Vec<HashMap<Vec<u16>, Rational>> = vec![HashMap::new(); d + 1];
    let mut lines: HashMap<Vec<u16>, Vec<Rational>> = HashMap::new();
    for (alpha, v) in vals {
        let beta = alpha[1..].to_vec();
        let j = alpha[0] as usize;
        let line = lines.entry(beta).or_default();
        if line.len() <= j {
            line.resize(j + 1, Rational::zero());
        }
        line[j] = v.clone();
    }
    for (beta, mut line) in lines {
        let len = line.len();
        for lvl in 1..len {
            for j in (lvl..len).rev() {
                let dt = &nodes[j] - &nodes[j - lvl];
                line[j] = (&line[j] - &line[j - 1]) / dt;
            }
        }
        for (i, c) in line.into_iter().enumerate() {
            layers[i].insert(beta.clone(), c);
        }
    }
    let mut acc = Polynomial::zero();
    let mut basis = Polynomial::one(); // prod_{j<i} (x - t_j)
    let x = Polynomial::var(first_var);
    for (i, layer) in layers.into_iter().enumerate() {
        if !layer.is_empty() {
            let sub = newton_interpolate(k - 1, d - i, nodes, &layer, first_var + 1);
            acc = &acc + &(&basis * &sub);
        }
        let lin = &x - &Polynomial::constant(nodes[i].clone());
        basis = &basis * &lin;
    }
    acc
}

/// Reinstate x_{nvars} so every term reaches total degree `degree`.
fn rehomogenize(inner: &Polynomial, nvars: usize, degree: usize) -> Result<Polynomial, ChainError> {
    let mut out = Polynomial::zero();
    for (m, c) in inner.terms() {
        let total = m.degree();
        if total > degree {
            return Err(ChainError::InvariantViolation(format!(
                "interpolation produced degree {total} > {degree}; the stationary vector is not homogeneous of the expected degree"
            )));
        }
        let mut exps: Vec<u16> = (0..nvars).map(|i| m.exp_of(i)).collect();
        exps[nvars - 1] = (degree - total) as u16;
        out.add_term(Monomial::new(exps), c.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    #[test]
    fn simplex_count() {
        // C(d + k, k) points
        assert_eq!(simplex_indices(2, 4).len(), 15);
        assert_eq!(simplex_indices(3, 4).len(), 35);
        assert_eq!(simplex_indices(0, 4), vec![Vec::<u16>::new()]);
    }

    #[test]
    fn newton_recovers_known_polynomial() {
        // f(x1,x2,x3) of total degree 4
        let f = parse_polynomial("x1^2*x2*x3 - 3*x1*x3 + 2*x2^2 - x3^4 + 7 + 1/2*x1*x2").unwrap();
        let d = 4;
        let nodes: Vec<Rational> = (1..=(d as i64 + 1)).map(crate::poly::rat_int).collect();
        let mut vals = HashMap::new();
        for alpha in simplex_indices(3, d) {
            let point: Vec<Rational> = alpha.iter().map(|&a| nodes[a as usize].clone()).collect();
            vals.insert(alpha, f.evaluate(&point).unwrap());
        }
        let g = newton_interpolate(3, d, &nodes, &vals, 1);
        assert_eq!(g, f);
    }

    #[test]
    fn rehomogenize_pads_last_variable() {
        let inner = parse_polynomial("x1^2 + x2 + 5").unwrap();
        let out = rehomogenize(&inner, 3, 2).unwrap();
        assert_eq!(out, parse_polynomial("x1^2 + x2*x3 + 5*x3^2").unwrap());
        assert!(rehomogenize(&inner, 3, 1).is_err());
    }
}
