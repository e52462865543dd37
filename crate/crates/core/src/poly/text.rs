//! Text grammar for polynomials.
//!
//! Terms are joined by `+`/`-`; a term is an optional rational coefficient
//! and a monomial of `*`-joined factors `x<k>[^e]`. The aliases a=x1, b=x2,
//! c=x3, d=x4 are accepted on input, and juxtaposition (`2ab`, `a^2b`) is
//! read as multiplication. Output uses explicit `*` and either raw `x<k>`
//! names or the letter aliases (when no variable beyond x4 occurs).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Monomial, PolyError, Polynomial, Rational};

const ALIASES: [char; 4] = ['a', 'b', 'c', 'd'];

#[derive(Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Var(usize), // 1-based
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(s: &str) -> Result<Vec<Token>, PolyError> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().expect("digits");
                out.push(Token::Int(n));
            }
            'x' => {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if start == i {
                    return Err(PolyError::Parse(format!("bare 'x' at byte {start} in {s:?}")));
                }
                let k: usize = s[start..i]
                    .parse()
                    .map_err(|_| PolyError::Parse(format!("bad variable index in {s:?}")))?;
                if k == 0 {
                    return Err(PolyError::Parse("variable index starts at x1".into()));
                }
                out.push(Token::Var(k));
            }
            'a'..='d' => {
                out.push(Token::Var(c as usize - 'a' as usize + 1));
                i += 1;
            }
            _ => return Err(PolyError::Parse(format!("unexpected {c:?} in {s:?}"))),
        }
    }
    Ok(out)
}

/// Parse the textual polynomial grammar.
pub fn parse_polynomial(s: &str) -> Result<Polynomial, PolyError> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(PolyError::Parse("empty input".into()));
    }
    let mut p = Polynomial::zero();
    let mut i = 0;
    loop {
        // sign
        let mut neg = false;
        while i < toks.len() {
            match toks[i] {
                Token::Plus => i += 1,
                Token::Minus => {
                    neg = !neg;
                    i += 1;
                }
                _ => break,
            }
        }
        if i >= toks.len() {
            return Err(PolyError::Parse(format!("dangling sign in {s:?}")));
        }
        let (m, c, next) = parse_term(&toks, i, s)?;
        i = next;
        p.add_term(m, if neg { -c } else { c });
        if i >= toks.len() {
            break;
        }
        match toks[i] {
            Token::Plus | Token::Minus => {}
            _ => return Err(PolyError::Parse(format!("expected + or - in {s:?}"))),
        }
    }
    Ok(p)
}

fn parse_term(toks: &[Token], mut i: usize, src: &str) -> Result<(Monomial, Rational, usize), PolyError> {
    let mut coef = Rational::one();
    let mut exps: Vec<u16> = Vec::new();
    let mut any = false;
    while i < toks.len() {
        match &toks[i] {
            Token::Int(n) => {
                let mut c = Rational::from_integer(n.clone());
                i += 1;
                if i < toks.len() && toks[i] == Token::Slash {
                    i += 1;
                    match toks.get(i) {
                        Some(Token::Int(d)) if !d.is_zero() => {
                            c = Rational::new(c.numer().clone(), d.clone());
                            i += 1;
                        }
                        _ => return Err(PolyError::Parse(format!("bad rational in {src:?}"))),
                    }
                }
                coef *= c;
                any = true;
            }
            Token::Var(k) => {
                let k = *k;
                i += 1;
                let mut e: u16 = 1;
                if i < toks.len() && toks[i] == Token::Caret {
                    i += 1;
                    match toks.get(i) {
                        Some(Token::Int(n)) => {
                            e = u16::try_from(n.clone())
                                .map_err(|_| PolyError::Parse(format!("exponent too large in {src:?}")))?;
                            i += 1;
                        }
                        _ => return Err(PolyError::Parse(format!("bad exponent in {src:?}"))),
                    }
                }
                if exps.len() < k {
                    exps.resize(k, 0);
                }
                exps[k - 1] += e;
                any = true;
            }
            Token::Star => {
                i += 1;
                // a factor must follow
                match toks.get(i) {
                    Some(Token::Int(_)) | Some(Token::Var(_)) => {}
                    _ => return Err(PolyError::Parse(format!("dangling '*' in {src:?}"))),
                }
            }
            Token::Plus | Token::Minus => break,
            Token::Caret | Token::Slash => {
                return Err(PolyError::Parse(format!("misplaced operator in {src:?}")))
            }
        }
    }
    if !any {
        return Err(PolyError::Parse(format!("empty term in {src:?}")));
    }
    Ok((Monomial::new(exps), coef, i))
}

impl Monomial {
    fn write(&self, f: &mut fmt::Formatter<'_>, aliased: bool) -> fmt::Result {
        let mut first = true;
        for (idx, &e) in self.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if aliased && idx < 4 {
                write!(f, "{}", ALIASES[idx])?;
            } else {
                write!(f, "x{}", idx + 1)?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        self.write(f, f.alternate())
    }
}

impl Polynomial {
    fn write(&self, f: &mut fmt::Formatter<'_>, aliased: bool) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // descending graded-lex, the order the tables use
        for (pos, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                m.write(f, aliased)?;
            }
        }
        Ok(())
    }

    /// Render with a..d letter aliases when no variable beyond x4 occurs,
    /// mirroring the tables' notation; falls back to raw names otherwise.
    pub fn to_aliased_string(&self) -> String {
        if self.max_var() <= 4 {
            format!("{self:#}")
        } else {
            format!("{self}")
        }
    }
}

/// `{}` prints raw `x<k>` names; `{:#}` prints a..d aliases for x1..x4.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, f.alternate())
    }
}

impl std::str::FromStr for Polynomial {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse_polynomial(s)
    }
}
