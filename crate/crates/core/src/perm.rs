//! Permutations of S_n in one-line notation, and the combinatorial
//! statistics the chain and the Schubert engine need (length, Lehmer
//! codes, descents, reduced words, cyclic shift).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("word {0:?} is not a permutation of 1..={1}")]
    NotBijection(Vec<u8>, usize),
    #[error("swap_values({i}, {j}) invalid for n = {n}: need 1 <= i < j <= n")]
    BadSwap { i: u8, j: u8, n: usize },
    #[error("cannot parse permutation from {0:?}")]
    Parse(String),
}

/// A permutation w of {1,...,n} stored as its one-line word w_1 w_2 ... w_n.
///
/// Equality, ordering and hashing ignore trailing fixed points, so `132`
/// and `1324` compare equal; display always shows the ambient-n word.
#[derive(Debug, Clone)]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    pub fn new(word: Vec<u8>) -> Result<Self, PermError> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x as usize > n || seen[x as usize] {
                return Err(PermError::NotBijection(word, n));
            }
            seen[x as usize] = true;
        }
        if n == 0 {
            return Err(PermError::NotBijection(word, 0));
        }
        Ok(Permutation { word })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u8).collect(),
        }
    }

    /// The longest element w_0 = n (n-1) ... 2 1.
    pub fn longest(n: usize) -> Self {
        Permutation {
            word: (1..=n as u8).rev().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// w(k), 1-based.
    pub fn apply(&self, k: usize) -> u8 {
        self.word[k - 1]
    }

    /// Position of a value in the word, 1-based: w^{-1}(v).
    pub fn position_of(&self, v: u8) -> usize {
        self.word.iter().position(|&x| x == v).expect("value in range") + 1
    }

    /// Number of inversions #{(i,j) : i < j, w_i > w_j}.
    pub fn length(&self) -> usize {
        let w = &self.word;
        let mut c = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// The inverse permutation: u with u_{w_i} = i.
    pub fn inverse(&self) -> Permutation {
        let mut u = vec![0u8; self.word.len()];
        for (i, &x) in self.word.iter().enumerate() {
            u[x as usize - 1] = (i + 1) as u8;
        }
        Permutation { word: u }
    }

    /// (w ∘ v)(k) = w(v(k)); both sides are embedded into the larger ambient size.
    pub fn compose(&self, v: &Permutation) -> Permutation {
        let n = self.n().max(v.n());
        let a = self.embed(n);
        let b = v.embed(n);
        let word = (1..=n).map(|k| a.apply(b.apply(k) as usize)).collect();
        Permutation { word }
    }

    /// Left multiplication by the transposition (i, j): exchanges the letters i and j.
    pub fn swap_values(&self, i: u8, j: u8) -> Result<Permutation, PermError> {
        let n = self.n();
        if i == 0 || j == 0 || i >= j || j as usize > n {
            return Err(PermError::BadSwap { i, j, n });
        }
        let word = self
            .word
            .iter()
            .map(|&x| {
                if x == i {
                    j
                } else if x == j {
                    i
                } else {
                    x
                }
            })
            .collect();
        Ok(Permutation { word })
    }

    /// χ(w): every letter incremented, n+1 wrapping to 1.
    pub fn cyclic_shift(&self) -> Permutation {
        let n = self.n() as u8;
        Permutation {
            word: self.word.iter().map(|&x| x % n + 1).collect(),
        }
    }

    /// Lehmer code c_i = #{j > i : w_j < w_i}, length n (trailing zeros kept).
    pub fn code(&self) -> LehmerCode {
        let w = &self.word;
        let entries = (0..w.len())
            .map(|i| (i + 1..w.len()).filter(|&j| w[j] < w[i]).count() as u32)
            .collect();
        LehmerCode { entries }
    }

    /// The unique permutation with Lehmer code `c`, of minimal ambient size.
    pub fn from_code(c: &LehmerCode) -> Permutation {
        let trimmed = c.trimmed();
        let m = trimmed
            .iter()
            .enumerate()
            .map(|(i, &ci)| i + 1 + ci as usize)
            .max()
            .unwrap_or(1);
        let mut avail: Vec<u8> = (1..=m as u8).collect();
        let mut word = Vec::with_capacity(m);
        for i in 0..m {
            let ci = *trimmed.get(i).unwrap_or(&0) as usize;
            word.push(avail.remove(ci));
        }
        Permutation { word }
    }

    /// Descent positions: i with w_i > w_{i+1}, 1-based.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.n())
            .filter(|&i| self.word[i - 1] > self.word[i])
            .collect()
    }

    /// A reduced word i_1 ... i_l (l = length) with w = s_{i_1} s_{i_2} ... s_{i_l}.
    ///
    /// Deterministic rule: repeatedly peel the smallest descent position from
    /// the right, so the same word is produced on every run.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.word.clone();
        let mut rev = Vec::new();
        loop {
            let Some(p) = (1..w.len()).find(|&p| w[p - 1] > w[p]) else {
                break;
            };
            w.swap(p - 1, p);
            rev.push(p);
        }
        rev.reverse();
        rev
    }

    /// Strip trailing fixed points (w_k = k); at least one letter is kept.
    pub fn canonical(&self) -> Permutation {
        let mut len = self.word.len();
        while len > 1 && self.word[len - 1] as usize == len {
            len -= 1;
        }
        Permutation {
            word: self.word[..len].to_vec(),
        }
    }

    /// Length of the canonical word.
    pub fn canonical_len(&self) -> usize {
        let mut len = self.word.len();
        while len > 1 && self.word[len - 1] as usize == len {
            len -= 1;
        }
        len
    }

    /// Extend with fixed points up to ambient size m.
    pub fn embed(&self, m: usize) -> Permutation {
        assert!(m >= self.canonical_len(), "embed would truncate");
        if m == self.n() {
            return self.clone();
        }
        let mut word = self.canonical().word;
        while word.len() < m {
            word.push(word.len() as u8 + 1);
        }
        Permutation { word }
    }

    fn letter_or_fixed(&self, i: usize) -> u8 {
        if i < self.word.len() {
            self.word[i]
        } else {
            (i + 1) as u8
        }
    }
}

impl PartialEq for Permutation {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Permutation {}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Permutation {
    /// Lexicographic on one-line notation, after extending both words with
    /// fixed points; canonically equal permutations compare equal.
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.word.len().max(other.word.len());
        for i in 0..n {
            match self.letter_or_fixed(i).cmp(&other.letter_or_fixed(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl Hash for Permutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut len = self.word.len();
        while len > 1 && self.word[len - 1] as usize == len {
            len -= 1;
        }
        self.word[..len].hash(state);
    }
}

impl fmt::Display for Permutation {
    /// "4123" for n <= 9, "10,1,2,..." (comma separated) for n >= 10.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n() <= 9 {
            for &x in &self.word {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(PermError::Parse(s.to_string()));
        }
        let word: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| t.trim().parse::<u8>().map_err(|_| PermError::Parse(s.to_string())))
                .collect::<Result<_, _>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .filter(|&d| d >= 1)
                        .map(|d| d as u8)
                        .ok_or_else(|| PermError::Parse(s.to_string()))
                })
                .collect::<Result<_, _>>()?
        };
        Permutation::new(word).map_err(|_| PermError::Parse(s.to_string()))
    }
}

/// Lehmer code (c_1, ..., c_m); trailing zeros permitted and ignored by equality.
#[derive(Debug, Clone)]
pub struct LehmerCode {
    entries: Vec<u32>,
}

impl LehmerCode {
    pub fn new(entries: Vec<u32>) -> Self {
        LehmerCode { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Sum of the entries; equals the length of the corresponding permutation.
    pub fn sum(&self) -> usize {
        self.entries.iter().map(|&c| c as usize).sum()
    }

    fn trimmed(&self) -> &[u32] {
        let mut len = self.entries.len();
        while len > 0 && self.entries[len - 1] == 0 {
            len -= 1;
        }
        &self.entries[..len]
    }
}

impl PartialEq for LehmerCode {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for LehmerCode {}

/// All of S_n in lexicographic order of one-line notation.
pub fn enumerate(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut word: Vec<u8> = (1..=n as u8).collect();
    loop {
        out.push(Permutation { word: word.clone() });
        // next lexicographic word
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| word[i] < word[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| word[j] > word[i]).unwrap();
        word.swap(i, j);
        word[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn length_examples() {
        assert_eq!(p("123").length(), 0);
        assert_eq!(p("321").length(), 3);
        // direct enumeration oracle for 4231
        let w = p("4231");
        let mut brute = 0;
        for i in 1..=4 {
            for j in i + 1..=4 {
                if w.apply(i) > w.apply(j) {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 5);
        assert_eq!(w.length(), 5);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("123").inverse(), p("123"));
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("4123").inverse(), p("2341"));
        for w in enumerate(5) {
            assert_eq!(w.inverse().inverse(), w);
        }
    }

    #[test]
    fn swap_values_examples() {
        assert_eq!(p("123").swap_values(1, 3).unwrap(), p("321"));
        // Figure-style edge 321 -> 231 via (2,3)
        assert_eq!(p("321").swap_values(2, 3).unwrap(), p("231"));
        for w in enumerate(4) {
            for i in 1..4u8 {
                for j in i + 1..=4u8 {
                    let v = w.swap_values(i, j).unwrap();
                    assert_eq!(v.swap_values(i, j).unwrap(), w);
                }
            }
        }
        assert!(p("123").swap_values(2, 2).is_err());
        assert!(p("123").swap_values(1, 4).is_err());
        assert!(p("123").swap_values(0, 2).is_err());
    }

    #[test]
    fn cyclic_shift_examples() {
        assert_eq!(p("123").cyclic_shift(), p("231"));
        assert_eq!(p("4123").cyclic_shift(), p("1234"));
    }

    #[test]
    fn chi_is_bijection_of_order_n() {
        let all = enumerate(5);
        let mut seen = std::collections::HashSet::new();
        for w in &all {
            let c = w.cyclic_shift();
            assert!(seen.insert(c.to_string()));
            let mut u = w.clone();
            for _ in 0..5 {
                u = u.cyclic_shift();
            }
            assert_eq!(&u, w);
        }
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn code_examples() {
        assert_eq!(p("12345").code(), LehmerCode::new(vec![0, 0, 0, 0, 0]));
        assert_eq!(p("15234").code(), LehmerCode::new(vec![0, 3, 0, 0, 0]));
        // brute force over S_3: 231 is the unique permutation with code (1,1,0)
        let target = LehmerCode::new(vec![1, 1, 0]);
        let hits: Vec<_> = enumerate(3).into_iter().filter(|w| w.code() == target).collect();
        assert_eq!(hits, vec![p("231")]);
        assert_eq!(Permutation::from_code(&target), p("231"));
    }

    #[test]
    fn code_roundtrip_and_length() {
        for n in 1..=6 {
            for w in enumerate(n) {
                assert_eq!(w.code().sum(), w.length());
            }
        }
        for w in enumerate(5) {
            assert_eq!(Permutation::from_code(&w.code()), w);
        }
    }

    #[test]
    fn from_code_minimal_ambient() {
        // code (0,3) forces ambient size 5
        let w = Permutation::from_code(&LehmerCode::new(vec![0, 3]));
        assert_eq!(w, p("15234"));
        assert_eq!(w.n(), 5);
        let id = Permutation::from_code(&LehmerCode::new(vec![0, 0]));
        assert_eq!(id, Permutation::identity(1));
    }

    #[test]
    fn reduced_word_examples() {
        assert!(Permutation::identity(4).reduced_word().is_empty());
        assert_eq!(p("321").reduced_word().len(), 3);
        for w in enumerate(4) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.length());
            let mut acc = Permutation::identity(4);
            for i in word {
                // acc * s_i swaps positions i, i+1
                let mut v = acc.word.clone();
                v.swap(i - 1, i);
                acc = Permutation::new(v).unwrap();
            }
            assert_eq!(acc, w);
        }
    }

    #[test]
    fn adjacent_value_swap_changes_length_by_one() {
        for w in enumerate(5) {
            for i in 1..5u8 {
                let v = w.swap_values(i, i + 1).unwrap();
                let d = v.length() as i64 - w.length() as i64;
                assert!(d == 1 || d == -1);
            }
        }
    }

    #[test]
    fn canonical_equality_strips_trailing_fixed_points() {
        assert_eq!(p("132"), p("1324"));
        assert_eq!(p("21"), p("2134"));
        assert_ne!(p("132"), p("1342"));
        let mut set = std::collections::HashSet::new();
        set.insert(p("1324"));
        assert!(set.contains(&p("132")));
        assert_eq!(p("132").embed(5), p("13245"));
        assert_eq!(p("1324").canonical().n(), 3);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(p("4123").to_string(), "4123");
        let big = Permutation::new((1..=10).rev().collect()).unwrap();
        assert_eq!(big.to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert_eq!(big.to_string().parse::<Permutation>().unwrap(), big);
        assert!("".parse::<Permutation>().is_err());
        assert!("104".parse::<Permutation>().is_err());
        assert!("122".parse::<Permutation>().is_err());
    }

    #[test]
    fn enumerate_is_lexicographic() {
        let all = enumerate(3);
        let words: Vec<String> = all.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, vec!["123", "132", "213", "231", "312", "321"]);
        assert_eq!(enumerate(6).len(), 720);
    }

    #[test]
    fn compose_and_positions() {
        let w = p("231");
        assert_eq!(w.position_of(1), 3);
        assert_eq!(w.compose(&w.inverse()), Permutation::identity(3));
        // left-multiplication convention: (u ∘ v)(k) = u(v(k))
        let u = p("312");
        assert_eq!(u.compose(&w), Permutation::identity(3));
    }
}
