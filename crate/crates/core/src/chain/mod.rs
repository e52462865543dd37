//! The multivariate chain on S_n: transition matrix, exact symbolic
//! stationary vector, numeric stationary law, and rank probes.
//!
//! Row w of the matrix has one entry per down-move (i,i+1)w < w, weighted by
//! the variable at the position of the value i+1, one entry for the up-move
//! (1,n)w > w weighted by the variable at the position of the value 1, and a
//! diagonal entry completing the row sum to 1. The stationary vector ζ spans
//! the nullspace of P^T - I, normalized so that ζ(w_0) is the staircase-like
//! monomial x_1^{1+2+...+(n-2)} x_2^{1+...+(n-3)} ... x_{n-2}.
//!
//! Solving strategy (see `Method`): straight fraction-free elimination on the
//! full system for n <= 4; for n = 5 the same elimination on the χ-quotient
//! (ζ is χ-invariant by Proposition 2, and the result is re-verified against
//! the full system exactly, so the shortcut carries no trust); for n >= 6 a
//! homogeneous ansatz interpolated from exact pointwise nullspace solves of
//! the quotient. Every route ends in the same exact verification gate.

pub mod elim;
mod ansatz;

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::perm::{enumerate, Permutation};
use crate::poly::{Monomial, Polynomial, Rational};
use elim::{eliminate, nullspace_vector, ElimError, SparseMatrix};

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("chain needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error("n = {n} exceeds the size cap {max} (pass force to override)")]
    CapExceeded { n: usize, max: usize },
    #[error("invalid probabilities: {0}")]
    BadProbabilities(String),
    #[error("no unique stationary distribution at this point (nullspace dimension {0})")]
    DegeneratePoint(usize),
    #[error("internal invariant violation: {0}")]
    InvariantViolation(String),
}

impl From<ElimError> for ChainError {
    fn from(e: ElimError) -> Self {
        match e {
            ElimError::Nullity(d) => ChainError::InvariantViolation(format!(
                "symbolic nullspace dimension is {d}, expected 1 (contradicts the rank-(n!-1) property)"
            )),
            ElimError::DivisionFailed => {
                ChainError::InvariantViolation("fraction-free division failed".into())
            }
        }
    }
}

/// The normalization monomial x_1^{1+2+...+(n-2)} x_2^{1+...+(n-3)} ... x_{n-2}.
pub fn normalization_target(n: usize) -> Monomial {
    let exps: Vec<u16> = (0..n.saturating_sub(2))
        .map(|i| {
            let top = n - 2 - i;
            (top * (top + 1) / 2) as u16
        })
        .collect();
    Monomial::new(exps)
}

/// Sparse transition matrix P of the chain on S_n, diagonal included.
pub struct TransitionMatrix {
    n: usize,
    perms: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    /// rows[w] = sorted (column, entry) pairs, diagonal included
    rows: Vec<Vec<(usize, Polynomial)>>,
}

impl TransitionMatrix {
    /// Build P for S_n, n >= 3.
    pub fn build(n: usize) -> Result<Self, ChainError> {
        if n < 3 {
            return Err(ChainError::TooSmall(n));
        }
        let perms = enumerate(n);
        let index: HashMap<Permutation, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut rows = Vec::with_capacity(perms.len());
        for w in &perms {
            let mut row: Vec<(usize, Polynomial)> = Vec::new();
            let mut off_sum = Polynomial::zero();
            for (v, k) in chain_moves(w) {
                let x = Polynomial::var(k);
                off_sum = &off_sum + &x;
                row.push((index[&v], x));
            }
            let diag = &Polynomial::one() - &off_sum;
            row.push((index[w], diag));
            row.sort_by_key(|(c, _)| *c);
            rows.push(row);
        }
        Ok(TransitionMatrix {
            n,
            perms,
            index,
            rows,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.perms.len()
    }

    /// States in lexicographic one-line order; this is the row/column order.
    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn index_of(&self, w: &Permutation) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn row(&self, w_idx: usize) -> &[(usize, Polynomial)] {
        &self.rows[w_idx]
    }

    pub fn entry(&self, w: &Permutation, v: &Permutation) -> Option<&Polynomial> {
        let wi = self.index_of(w)?;
        let vi = self.index_of(v)?;
        self.rows[wi]
            .iter()
            .find(|(c, _)| *c == vi)
            .map(|(_, p)| p)
    }

    pub fn row_sum(&self, w_idx: usize) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (_, p) in &self.rows[w_idx] {
            acc = &acc + p;
        }
        acc
    }

    /// Off-diagonal entries of a row.
    pub fn off_diagonal(&self, w_idx: usize) -> impl Iterator<Item = &(usize, Polynomial)> {
        self.rows[w_idx].iter().filter(move |(c, _)| *c != w_idx)
    }

    /// P^T - I as a sparse system over any entry substitution.
    fn transposed_minus_identity(&self) -> SparseMatrix<Polynomial> {
        let nn = self.size();
        let mut m = SparseMatrix::new(nn, nn);
        for (w_idx, row) in self.rows.iter().enumerate() {
            for (v_idx, p) in row {
                let e = if *v_idx == w_idx {
                    p - &Polynomial::one()
                } else {
                    p.clone()
                };
                if !e.is_zero() {
                    m.set(*v_idx, w_idx, e);
                }
            }
        }
        m
    }

    /// P^T - I evaluated at a rational point.
    fn numeric_system(&self, x: &[Rational]) -> Result<SparseMatrix<Rational>, ChainError> {
        let nn = self.size();
        let mut m = SparseMatrix::new(nn, nn);
        for (w_idx, row) in self.rows.iter().enumerate() {
            for (v_idx, p) in row {
                let mut val = p
                    .evaluate(x)
                    .map_err(|e| ChainError::BadProbabilities(e.to_string()))?;
                if *v_idx == w_idx {
                    val -= Rational::one();
                }
                if !val.is_zero() {
                    m.set(*v_idx, w_idx, val);
                }
            }
        }
        Ok(m)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let order: Vec<String> = self.perms.iter().map(|w| w.to_string()).collect();
        let mut entries = Vec::new();
        for (w_idx, row) in self.rows.iter().enumerate() {
            for (v_idx, p) in row {
                entries.push(serde_json::json!({
                    "from": order[w_idx],
                    "to": order[*v_idx],
                    "poly": p.to_string(),
                }));
            }
        }
        serde_json::json!({ "n": self.n, "order": order, "entries": entries })
    }
}

/// Off-diagonal moves of the chain from w: (target, weight variable index).
///
/// Down-moves: (i,i+1)w for every i whose value i+1 sits left of i, weighted
/// by that position; up-move: (1,n)w when the value 1 sits left of n,
/// weighted by the position of 1. Distinct moves have distinct targets.
pub fn chain_moves(w: &Permutation) -> Vec<(Permutation, usize)> {
    let n = w.n();
    let mut out = Vec::new();
    for i in 1..n as u8 {
        let pos_hi = w.position_of(i + 1);
        if pos_hi < w.position_of(i) {
            out.push((w.swap_values(i, i + 1).expect("valid swap"), pos_hi));
        }
    }
    let pos1 = w.position_of(1);
    if pos1 < w.position_of(n as u8) {
        out.push((w.swap_values(1, n as u8).expect("valid swap"), pos1));
    }
    out
}

/// The symbolic stationary vector ζ, normalized at w_0.
pub struct StationaryVector {
    n: usize,
    perms: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    values: Vec<Polynomial>,
    target: Monomial,
}

impl StationaryVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn get(&self, w: &Permutation) -> Option<&Polynomial> {
        self.index.get(w).map(|&i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &Polynomial)> {
        self.perms.iter().zip(self.values.iter())
    }

    pub fn normalization_target(&self) -> &Monomial {
        &self.target
    }

    /// Exact stationarity: for every column v, sum_w ζ(w) p_{w,v} = ζ(v).
    pub fn verify_stationarity(&self, tm: &TransitionMatrix) -> Result<(), ChainError> {
        let mut acc: Vec<Polynomial> = vec![Polynomial::zero(); self.values.len()];
        for (w_idx, row) in tm.rows.iter().enumerate() {
            let zw = &self.values[w_idx];
            if zw.is_zero() {
                continue;
            }
            for (v_idx, p) in row {
                acc[*v_idx] = &acc[*v_idx] + &(zw * p);
            }
        }
        for (v_idx, a) in acc.iter().enumerate() {
            if a != &self.values[v_idx] {
                return Err(ChainError::InvariantViolation(format!(
                    "stationarity fails at column {}: sum_w zeta(w) p_(w,v) = {} but zeta(v) = {}",
                    self.perms[v_idx], a, self.values[v_idx]
                )));
            }
        }
        Ok(())
    }

    /// ζ(χ(w)) = ζ(w) for all w.
    pub fn verify_chi_invariance(&self) -> Result<(), ChainError> {
        for (w, z) in self.iter() {
            let c = w.cyclic_shift();
            let zc = self.get(&c).expect("chi stays in S_n");
            if zc != z {
                return Err(ChainError::InvariantViolation(format!(
                    "chi-invariance fails: zeta({c}) = {zc} but zeta({w}) = {z}"
                )));
            }
        }
        Ok(())
    }

    /// Every ζ(w) homogeneous of the degree of ζ(w_0); fails loudly with the
    /// offending entry.
    pub fn verify_homogeneity(&self) -> Result<(), ChainError> {
        let d = self.target.degree();
        for (w, z) in self.iter() {
            if z.is_homogeneous() != Some(d) {
                return Err(ChainError::InvariantViolation(format!(
                    "homogeneity fails: zeta({w}) = {z} is not homogeneous of degree {d}"
                )));
            }
        }
        Ok(())
    }

    fn verify_normalization(&self) -> Result<(), ChainError> {
        let w0 = Permutation::longest(self.n);
        let z = self.get(&w0).expect("w_0 present");
        let want = Polynomial::from_monomial(self.target.clone(), Rational::one());
        if z != &want {
            return Err(ChainError::InvariantViolation(format!(
                "normalization fails: zeta(w_0) = {z}, expected {want}"
            )));
        }
        Ok(())
    }

    /// The full verification gate run by `stationary_symbolic`.
    pub fn verify(&self, tm: &TransitionMatrix) -> Result<(), ChainError> {
        self.verify_normalization()?;
        self.verify_stationarity(tm)?;
        self.verify_chi_invariance()?;
        self.verify_homogeneity()?;
        Ok(())
    }

    /// Evaluate ζ at a rational point and normalize to a probability vector.
    pub fn law_at(&self, x: &[Rational]) -> Result<Vec<Rational>, ChainError> {
        let vals: Vec<Rational> = self
            .values
            .iter()
            .map(|p| p.evaluate(x))
            .collect::<Result<_, _>>()
            .map_err(|e| ChainError::BadProbabilities(e.to_string()))?;
        let total: Rational = vals.iter().fold(Rational::zero(), |a, b| a + b);
        if total.is_zero() {
            return Err(ChainError::DegeneratePoint(0));
        }
        Ok(vals.into_iter().map(|v| v / &total).collect())
    }

    /// JSON map word -> polynomial string, plus the normalization monomial.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (w, z) in self.iter() {
            map.insert(w.to_string(), serde_json::Value::String(z.to_string()));
        }
        serde_json::json!({
            "n": self.n,
            "normalization": Polynomial::from_monomial(self.target.clone(), Rational::one()).to_string(),
            "zeta": serde_json::Value::Object(map),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<StationaryVector, ChainError> {
        let bad = |m: &str| ChainError::InvariantViolation(format!("bad stationary JSON: {m}"));
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let zeta = v["zeta"].as_object().ok_or_else(|| bad("missing zeta"))?;
        let perms = enumerate(n);
        let index: HashMap<Permutation, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut values = vec![Polynomial::zero(); perms.len()];
        if zeta.len() != perms.len() {
            return Err(bad("wrong number of entries"));
        }
        for (k, val) in zeta {
            let w: Permutation = k.parse().map_err(|_| bad("bad permutation key"))?;
            let s = val.as_str().ok_or_else(|| bad("value not a string"))?;
            let p: Polynomial = s.parse().map_err(|_| bad("bad polynomial"))?;
            let i = *index.get(&w).ok_or_else(|| bad("permutation outside S_n"))?;
            values[i] = p;
        }
        Ok(StationaryVector {
            n,
            perms,
            index,
            values,
            target: normalization_target(n),
        })
    }
}

/// How to produce the raw spanning vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Fraction-free elimination on the full n! x n! system.
    FullElimination,
    /// Fraction-free elimination on the χ-quotient system.
    QuotientElimination,
    /// Homogeneous ansatz interpolated from pointwise solves of the full system.
    FullAnsatz,
    /// Homogeneous ansatz interpolated from pointwise solves of the quotient.
    QuotientAnsatz,
}

impl Method {
    /// Default choice per n: exact elimination as long as it is tractable,
    /// quotient shortcuts beyond.
    pub fn default_for(n: usize) -> Method {
        match n {
            0..=4 => Method::FullElimination,
            5 => Method::QuotientElimination,
            _ => Method::QuotientAnsatz,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Hard cap on n unless `force` is set.
    pub max_n: usize,
    pub force: bool,
    /// Override the per-n default method.
    pub method: Option<Method>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_n: 6,
            force: false,
            method: None,
        }
    }
}

/// Result of `stationary_symbolic`: either the normalized vector, or — if a
/// normalization division failed, which would witness a failure of the
/// polynomiality conjecture — the raw spanning vector with the failures.
pub enum StationaryOutcome {
    Normalized(StationaryVector),
    NonPolynomialNormalization {
        raw: Vec<(Permutation, Polynomial)>,
        failures: Vec<Permutation>,
    },
}

impl StationaryOutcome {
    pub fn normalized(self) -> Result<StationaryVector, ChainError> {
        match self {
            StationaryOutcome::Normalized(v) => Ok(v),
            StationaryOutcome::NonPolynomialNormalization { failures, .. } => {
                Err(ChainError::InvariantViolation(format!(
                    "normalization produced non-polynomial entries at {} permutations (first: {}); \
                     this would be a counterexample to the polynomiality conjecture",
                    failures.len(),
                    failures[0]
                )))
            }
        }
    }
}

/// χ-orbit structure of S_n with the quotient of P^T - I.
pub(crate) struct ChiQuotient {
    /// Orbit representatives (lexicographically least member), sorted.
    pub reps: Vec<Permutation>,
    /// For each full-state index, the index of its orbit.
    pub orbit_of: Vec<usize>,
    pub mat: SparseMatrix<Polynomial>,
}

pub(crate) fn build_quotient(tm: &TransitionMatrix) -> ChiQuotient {
    let nn = tm.size();
    let mut orbit_of = vec![usize::MAX; nn];
    let mut reps: Vec<Permutation> = Vec::new();
    for (i, w) in tm.perms().iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let orbit_idx = reps.len();
        // w is the lex-least member because states are visited in lex order
        reps.push(w.clone());
        let mut u = w.clone();
        loop {
            let ui = tm.index_of(&u).expect("chi stays in S_n");
            orbit_of[ui] = orbit_idx;
            u = u.cyclic_shift();
            if &u == w {
                break;
            }
        }
    }
    let k = reps.len();
    let mut mat = SparseMatrix::new(k, k);
    let rep_row: HashMap<usize, usize> = reps
        .iter()
        .enumerate()
        .map(|(r, w)| (tm.index_of(w).unwrap(), r))
        .collect();
    // rows: the balance equation at each representative v;
    // columns: orbits (sum of p_{w,v} over w in the orbit)
    for (w_idx, row) in tm.rows.iter().enumerate() {
        for (v_idx, p) in row {
            if let Some(&r) = rep_row.get(v_idx) {
                let cur = mat.rows[r].remove(&orbit_of[w_idx]);
                let e = match cur {
                    Some(e) => &e + p,
                    None => p.clone(),
                };
                mat.set(r, orbit_of[w_idx], e);
            }
        }
    }
    for (r, w) in reps.iter().enumerate() {
        let c = orbit_of[tm.index_of(w).unwrap()];
        let cur = mat.rows[r].remove(&c).unwrap_or_else(Polynomial::zero);
        mat.set(r, c, &cur - &Polynomial::one());
    }
    ChiQuotient {
        reps,
        orbit_of,
        mat,
    }
}

/// Compute the normalized symbolic stationary vector of the chain on S_n.
pub fn stationary_symbolic(n: usize, opts: &SolveOptions) -> Result<StationaryOutcome, ChainError> {
    if n < 3 {
        return Err(ChainError::TooSmall(n));
    }
    if n > opts.max_n && !opts.force {
        return Err(ChainError::CapExceeded { n, max: opts.max_n });
    }
    let tm = TransitionMatrix::build(n)?;
    let method = opts.method.unwrap_or_else(|| Method::default_for(n));
    let raw: Vec<Polynomial> = match method {
        Method::FullElimination => {
            let ech = eliminate(tm.transposed_minus_identity())?;
            nullspace_vector(&ech)?
        }
        Method::QuotientElimination => {
            let q = build_quotient(&tm);
            let ech = eliminate(q.mat)?;
            let orbit_vec = nullspace_vector(&ech)?;
            q.orbit_of.iter().map(|&o| orbit_vec[o].clone()).collect()
        }
        Method::FullAnsatz => ansatz::solve(&tm, None)?,
        Method::QuotientAnsatz => {
            let q = build_quotient(&tm);
            ansatz::solve(&tm, Some(&q))?
        }
    };
    normalize_and_verify(&tm, raw)
}

/// Normalize a raw spanning vector at w_0 and run the exact verification gate.
fn normalize_and_verify(
    tm: &TransitionMatrix,
    mut raw: Vec<Polynomial>,
) -> Result<StationaryOutcome, ChainError> {
    let n = tm.n();
    elim::Entry::strip_common(&mut raw[..]);
    let w0_idx = tm
        .index_of(&Permutation::longest(n))
        .expect("w_0 in state list");
    let u0 = raw[w0_idx].clone();
    if u0.is_zero() {
        return Err(ChainError::InvariantViolation(
            "spanning vector vanishes at w_0".into(),
        ));
    }
    let target = normalization_target(n);
    let mut values = Vec::with_capacity(raw.len());
    let mut failures = Vec::new();
    for (i, u) in raw.iter().enumerate() {
        match u.mul_monomial(&target).exact_div(&u0) {
            Ok(q) => values.push(q),
            Err(_) => {
                failures.push(tm.perms()[i].clone());
                values.push(Polynomial::zero());
            }
        }
    }
    if !failures.is_empty() {
        return Ok(StationaryOutcome::NonPolynomialNormalization {
            raw: tm.perms().iter().cloned().zip(raw).collect(),
            failures,
        });
    }
    let sv = StationaryVector {
        n,
        perms: tm.perms().to_vec(),
        index: tm.index.clone(),
        values,
        target,
    };
    sv.verify(tm)?;
    Ok(StationaryOutcome::Normalized(sv))
}

/// Exact stationary probability vector at a rational point in the probability
/// region (x_i >= 0, sum <= 1, length n-1).
pub fn stationary_numeric(
    n: usize,
    x: &[Rational],
) -> Result<Vec<(Permutation, Rational)>, ChainError> {
    if n < 3 {
        return Err(ChainError::TooSmall(n));
    }
    if x.len() != n - 1 {
        return Err(ChainError::BadProbabilities(format!(
            "expected {} probabilities, got {}",
            n - 1,
            x.len()
        )));
    }
    if x.iter().any(|v| v.is_negative()) {
        return Err(ChainError::BadProbabilities(
            "probabilities must be nonnegative".into(),
        ));
    }
    let total: Rational = x.iter().fold(Rational::zero(), |a, b| a + b);
    if total > Rational::one() {
        return Err(ChainError::BadProbabilities(
            "probabilities must sum to at most 1".into(),
        ));
    }
    let tm = TransitionMatrix::build(n)?;
    let sys = tm.numeric_system(x)?;
    let ech = eliminate(sys)?;
    if ech.nullity() != 1 {
        return Err(ChainError::DegeneratePoint(ech.nullity()));
    }
    let z = nullspace_vector(&ech)?;
    let total: Rational = z.iter().fold(Rational::zero(), |a, b| a + b);
    if total.is_zero() {
        return Err(ChainError::DegeneratePoint(1));
    }
    Ok(tm
        .perms()
        .iter()
        .cloned()
        .zip(z.into_iter().map(|v| v / &total))
        .collect())
}

/// Rank of P^T - I at sampled rational points.
pub struct RankReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub expected_rank: usize,
    /// (point, rank) per trial
    pub points: Vec<(Vec<Rational>, usize)>,
}

impl RankReport {
    pub fn all_full_rank(&self) -> bool {
        self.points.iter().all(|(_, r)| *r == self.expected_rank)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "expected_rank": self.expected_rank,
            "all_full_rank": self.all_full_rank(),
            "points": self.points.iter().map(|(x, r)| serde_json::json!({
                "x": x.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "rank": r,
            })).collect::<Vec<_>>(),
        })
    }
}

const PRIMES: [i64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// Sample pseudo-random rational points (distinct primes as numerators and
/// denominators) and report the exact rank of P^T - I at each.
pub fn verify_nullspace_rank(n: usize, trials: usize, seed: u64) -> Result<RankReport, ChainError> {
    if n < 3 {
        return Err(ChainError::TooSmall(n));
    }
    let tm = TransitionMatrix::build(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut pool = PRIMES.to_vec();
        pool.shuffle(&mut rng);
        let x: Vec<Rational> = (0..n - 1)
            .map(|i| {
                crate::poly::rat(pool[2 * i], pool[2 * i + 1])
            })
            .collect();
        let sys = tm.numeric_system(&x)?;
        let ech = eliminate(sys)?;
        points.push((x, ech.rank()));
    }
    Ok(RankReport {
        n,
        trials,
        seed,
        expected_rank: tm.size() - 1,
        points,
    })
}

#[cfg(test)]
mod tests;
