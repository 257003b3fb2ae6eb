//! Sparse multivariate polynomials over the rationals.
//!
//! `RawPoly` is the ambient representation: a map from exponent vectors to
//! nonzero rational coefficients.  No quotient-ring reduction happens here;
//! that is the job of [`crate::ring`].  This module also owns the canonical
//! text form used by the JSON interfaces: a sum of terms `c * v1^e1 * ...`
//! with `c` printed as `num` or `num/den`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::{BigInt, BigRational, One, Zero};

use crate::error::Error;

/// Arbitrary-precision rational scalar.  Always stored reduced, with a
/// positive denominator.
pub type Rational = BigRational;

/// Convenience constructor for small integer scalars.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Convenience constructor for small fractions.  Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// An exponent vector.  The ordering is graded: lower total degree first,
/// ties broken by comparing exponent tuples left to right, smaller first.
/// Reverse iteration therefore yields the usual "leading term first" order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comparison used when enumerating monomial bases: degree ascending, and
/// within a degree the exponent tuples descending, so that for three
/// variables the degree-two block reads `x^2, xy, xz, y^2, yz, z^2`.
pub fn basis_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| b.0.cmp(&a.0))
}

/// A polynomial in the ambient ring `Q[v_1, ..., v_n]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RawPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl RawPoly {
    pub fn zero(nvars: usize) -> Self {
        RawPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = RawPoly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        RawPoly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut p = RawPoly::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rational::one());
        p
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = RawPoly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
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

    /// Total degree of the polynomial; zero for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest exponent of variable `v` appearing in any term.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.0[v]).max().unwrap_or(0)
    }

    /// Adds `c * m`, dropping the term if the coefficient cancels to zero.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
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

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &RawPoly) -> RawPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> RawPoly {
        RawPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &RawPoly) -> RawPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> RawPoly {
        if c.is_zero() {
            return RawPoly::zero(self.nvars);
        }
        RawPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &RawPoly) -> RawPoly {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut out = RawPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> RawPoly {
        if c.is_zero() {
            return RawPoly::zero(self.nvars);
        }
        RawPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> RawPoly {
        let mut out = RawPoly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn partial(&self, v: usize) -> RawPoly {
        let mut out = RawPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut em = m.clone();
            em.0[v] = e - 1;
            out.add_term(em, c * rat(e as i64));
        }
        out
    }

    /// Evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point arity mismatch");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[v];
                }
            }
            acc += term;
        }
        acc
    }

    /// Coefficients of `self` viewed as a dense univariate polynomial in
    /// variable `v`; entry `k` collects every term with `v`-exponent `k`,
    /// with that exponent cleared.
    pub fn univariate_in(&self, v: usize) -> Vec<RawPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![RawPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut mm = m.clone();
            mm.0[v] = 0;
            out[k].add_term(mm, c.clone());
        }
        out
    }

    /// Canonical text form: terms in descending order (degree, then exponent
    /// tuple), each printed `c * v1^e1 * ...` with exponent-one factors
    /// written bare and the coefficient always present.
    pub fn display(&self, vars: &[String]) -> String {
        assert_eq!(vars.len(), self.nvars, "variable name arity mismatch");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "{}", c);
            for (v, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => {
                        let _ = write!(out, " * {}", vars[v]);
                    }
                    _ => {
                        let _ = write!(out, " * {}^{}", vars[v], e);
                    }
                }
            }
        }
        out
    }

    /// Parses the canonical text form (and modest generalizations of it:
    /// parentheses, `-` both unary and binary, multi-character variable
    /// names).  Variable names must come from `vars`.
    pub fn parse(src: &str, vars: &[String]) -> Result<RawPoly, Error> {
        Parser::new(src, vars)?.parse_expr_eof()
    }
}

// ---------------------------------------------------------------------------
// Text-form parser
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Debug)]
enum Token {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn new(src: &str, vars: &[String]) -> Result<Self, Error> {
        let mut tokens = Vec::new();
        let chars: Vec<char> = src.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad integer `{text}`")))?;
                tokens.push(Token::Num(n));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                let idx = vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                tokens.push(Token::Var(idx));
            } else {
                tokens.push(match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    _ => {
                        return Err(Error::Parse(format!(
                            "unexpected character `{c}`"
                        )))
                    }
                });
                i += 1;
            }
        }
        Ok(Parser { tokens, pos: 0, nvars: vars.len() })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_expr_eof(&mut self) -> Result<RawPoly, Error> {
        let p = self.parse_expr()?;
        if self.pos != self.tokens.len() {
            return Err(Error::Parse("trailing input after expression".into()));
        }
        Ok(p)
    }

    fn parse_expr(&mut self) -> Result<RawPoly, Error> {
        let mut acc = self.parse_signed_term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let t = self.parse_signed_term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.next();
                    let t = self.parse_signed_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_signed_term(&mut self) -> Result<RawPoly, Error> {
        let mut negate = false;
        while let Some(tok) = self.peek() {
            match tok {
                Token::Minus => {
                    negate = !negate;
                    self.next();
                }
                Token::Plus => {
                    self.next();
                }
                _ => break,
            }
        }
        let t = self.parse_term()?;
        Ok(if negate { t.neg() } else { t })
    }

    fn parse_term(&mut self) -> Result<RawPoly, Error> {
        let mut acc = self.parse_factor()?;
        while let Some(Token::Star) = self.peek() {
            self.next();
            let f = self.parse_factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<RawPoly, Error> {
        let base = self.parse_atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.next();
            match self.next() {
                Some(Token::Num(n)) => {
                    let e = u32::try_from(&n).map_err(|_| {
                        Error::Parse(format!("exponent `{n}` out of range"))
                    })?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("expected integer exponent after `^`".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn parse_atom(&mut self) -> Result<RawPoly, Error> {
        match self.next() {
            Some(Token::Num(n)) => {
                // Optional `/ den` for a rational literal.
                if let Some(Token::Slash) = self.peek() {
                    self.next();
                    match self.next() {
                        Some(Token::Num(d)) => {
                            if d.is_zero() {
                                return Err(Error::Parse(
                                    "zero denominator in rational literal".into(),
                                ));
                            }
                            Ok(RawPoly::constant(self.nvars, Rational::new(n, d)))
                        }
                        _ => Err(Error::Parse(
                            "expected integer denominator after `/`".into(),
                        )),
                    }
                } else {
                    Ok(RawPoly::constant(self.nvars, Rational::from_integer(n)))
                }
            }
            Some(Token::Var(i)) => Ok(RawPoly::var(self.nvars, i)),
            Some(Token::LParen) => {
                let inner = self.parse_expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Parse("unbalanced parenthesis".into())),
                }
            }
            other => Err(Error::Parse(format!(
                "unexpected token {other:?} where a term was expected"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars3() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn monomial_order_is_graded() {
        let x2 = Monomial(vec![2, 0, 0]);
        let xy = Monomial(vec![1, 1, 0]);
        let z = Monomial(vec![0, 0, 1]);
        assert!(z < x2);
        assert!(xy < x2 || xy > x2); // total order
        assert!(Monomial(vec![0, 0, 0]) < z);
    }

    #[test]
    fn basis_cmp_orders_degree_then_tuple_descending() {
        let mut ms = vec![
            Monomial(vec![0, 1, 1]),
            Monomial(vec![1, 0, 0]),
            Monomial(vec![2, 0, 0]),
            Monomial(vec![0, 0, 1]),
            Monomial(vec![1, 1, 0]),
            Monomial(vec![0, 0, 0]),
        ];
        ms.sort_by(basis_cmp);
        let degs: Vec<Vec<u32>> = ms.into_iter().map(|m| m.0).collect();
        assert_eq!(
            degs,
            vec![
                vec![0, 0, 0],
                vec![1, 0, 0],
                vec![0, 0, 1],
                vec![2, 0, 0],
                vec![1, 1, 0],
                vec![0, 1, 1],
            ]
        );
    }

    #[test]
    fn arithmetic_and_partial() {
        let v = vars3();
        let p = RawPoly::parse("x^2 + 2 * x * y + y^2", &v).unwrap();
        let q = RawPoly::parse("x + y", &v).unwrap();
        assert_eq!(q.mul(&q), p);
        let px = p.partial(0);
        assert_eq!(px, RawPoly::parse("2 * x + 2 * y", &v).unwrap());
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn display_round_trips_and_is_canonical() {
        let v = vars3();
        let p = RawPoly::parse("1 - x^2 - y^2", &v).unwrap();
        let text = p.display(&v);
        assert_eq!(text, "-1 * x^2 + -1 * y^2 + 1");
        let back = RawPoly::parse(&text, &v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_handles_fractions_and_zero() {
        let v = vars3();
        let p = RawPoly::parse("-1/3 * z", &v).unwrap();
        assert_eq!(p.display(&v), "-1/3 * z");
        assert_eq!(RawPoly::zero(3).display(&v), "0");
    }

    #[test]
    fn parse_rejects_unknown_variables_and_garbage() {
        let v = vars3();
        assert!(RawPoly::parse("w + 1", &v).is_err());
        assert!(RawPoly::parse("x +", &v).is_err());
        assert!(RawPoly::parse("x ^ y", &v).is_err());
        assert!(RawPoly::parse("1/0", &v).is_err());
    }

    #[test]
    fn eval_matches_expansion() {
        let v = vars3();
        let p = RawPoly::parse("x^2 * y - 3 * z + 1/2", &v).unwrap();
        let pt = [ratio(1, 2), rat(3), rat(-1)];
        // (1/4)*3 + 3 + 1/2 = 3/4 + 7/2 = 17/4
        assert_eq!(p.eval(&pt), ratio(17, 4));
    }

    #[test]
    fn univariate_view_reassembles() {
        let v = vars3();
        let p = RawPoly::parse("z^3 + x * z + y", &v).unwrap();
        let coeffs = p.univariate_in(2);
        assert_eq!(coeffs.len(), 4);
        assert_eq!(coeffs[0], RawPoly::parse("y", &v).unwrap());
        assert_eq!(coeffs[1], RawPoly::parse("x", &v).unwrap());
        assert!(coeffs[2].is_zero());
        assert_eq!(coeffs[3], RawPoly::one(3));
    }
}
