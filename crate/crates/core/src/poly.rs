//! Sparse multivariate polynomials over F_p, with a small text grammar.
//!
//! Terms are kept sorted in decreasing ring order with no zero coefficients,
//! so equality of polynomials is equality of term lists.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Coef;
use crate::monomial::Monomial;
use crate::ring::PolyRing;

#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: Vec<(Monomial, Coef)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// `f op g`, failing when the operands belong to different rings.
pub fn poly_arith(f: &Polynomial, g: &Polynomial, op: ArithOp) -> Result<Polynomial> {
    match op {
        ArithOp::Add => f.add(g),
        ArithOp::Sub => f.sub(g),
        ArithOp::Mul => f.mul(g),
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Polynomial {
    pub fn zero(ring: Arc<PolyRing>) -> Self {
        Polynomial {
            ring,
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: Arc<PolyRing>, c: i64) -> Self {
        let c = ring.field().from_i64(c);
        let terms = if c == 0 {
            vec![]
        } else {
            vec![(Monomial::ONE, c)]
        };
        Polynomial { ring, terms }
    }

    pub fn variable(ring: Arc<PolyRing>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        Polynomial {
            ring,
            terms: vec![(Monomial::var(i), 1)],
        }
    }

    pub fn monomial(ring: Arc<PolyRing>, m: Monomial, c: Coef) -> Self {
        let c = c % ring.characteristic();
        let terms = if c == 0 { vec![] } else { vec![(m, c)] };
        Polynomial { ring, terms }
    }

    /// Builds a polynomial from arbitrary terms (duplicates combined).
    pub fn from_terms(ring: Arc<PolyRing>, mut terms: Vec<(Monomial, Coef)>) -> Self {
        let ord = ring.order().clone();
        let f = ring.field();
        terms.sort_by(|a, b| ord.compare(&b.0, &a.0));
        let mut out: Vec<(Monomial, Coef)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            let c = c % f.characteristic();
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Polynomial { ring, terms: out }
    }

    /// Trusts the caller: terms already sorted and nonzero.
    pub(crate) fn from_sorted(ring: Arc<PolyRing>, terms: Vec<(Monomial, Coef)>) -> Self {
        Polynomial { ring, terms }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coef)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_term(&self) -> Coef {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map_or(0, |t| t.1)
    }

    pub fn leading_term(&self) -> Option<(Monomial, Coef)> {
        self.terms.first().copied()
    }

    /// Largest weighted degree of a term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        let w = self.ring.weights();
        self.terms
            .iter()
            .map(|(m, _)| m.weighted_degree(w))
            .max()
            .unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let w = self.ring.weights();
        let mut degs = self.terms.iter().map(|(m, _)| m.weighted_degree(w));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let ord = self.ring.order();
        let f = self.ring.field();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match ord.compare(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { f.neg(b[j].1) } else { b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        f.sub(a[i].1, b[j].1)
                    } else {
                        f.add(a[i].1, b[j].1)
                    };
                    if c != 0 {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for &(m, c) in &b[j..] {
            out.push((m, if negate { f.neg(c) } else { c }));
        }
        Polynomial::from_sorted(self.ring.clone(), out)
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        Ok(self.merge(other, true))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let f = self.ring.field();
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                terms.push((ma.checked_mul(&mb)?, f.mul(ca, cb)));
            }
        }
        Ok(Polynomial::from_terms(self.ring.clone(), terms))
    }

    pub fn neg(&self) -> Polynomial {
        let f = self.ring.field();
        let terms = self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect();
        Polynomial::from_sorted(self.ring.clone(), terms)
    }

    pub fn scale(&self, c: Coef) -> Polynomial {
        let f = self.ring.field();
        let c = c % f.characteristic();
        if c == 0 {
            return Polynomial::zero(self.ring.clone());
        }
        let terms = self.terms.iter().map(|&(m, d)| (m, f.mul(c, d))).collect();
        Polynomial::from_sorted(self.ring.clone(), terms)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|&(t, c)| Ok((t.checked_mul(m)?, c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_sorted(self.ring.clone(), terms))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, c)) => self.scale(self.ring.field().inv(c)),
        }
    }

    pub fn pow(&self, mut e: u64) -> Result<Polynomial> {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(self.ring.clone(), 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `f^q` for `q = p^n`: exponents scale by `q` and coefficients are
    /// fixed because `c^p = c` in F_p.
    pub fn frobenius_power(&self, q: u64) -> Result<Polynomial> {
        self.ring.frobenius_exponent(q)?;
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| Ok((m.scale(q)?, c)))
            .collect::<Result<Vec<_>>>()?;
        // scaling exponents preserves any weighted grevlex or lex order
        Ok(Polynomial::from_sorted(self.ring.clone(), terms))
    }

    /// Exact quotient `self / d`; fails if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Polynomial) -> Result<Polynomial> {
        self.check(d)?;
        let Some((lm, lc)) = d.leading_term() else {
            return Err(Error::ZeroDivisor);
        };
        let f = self.ring.field();
        let inv = f.inv(lc);
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(&m) {
                return Err(Error::InexactDivision);
            }
            let qm = m.div(&lm);
            let qc = f.mul(c, inv);
            quot.push((qm, qc));
            let step = d.mul_monomial(&qm)?.scale(qc);
            rem = rem.merge(&step, true);
        }
        Ok(Polynomial::from_sorted(self.ring.clone(), quot))
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

pub(crate) fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, name) in names.iter().enumerate() {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ring.var_names();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, "+")?;
            }
            if m.is_one() {
                write!(f, "{c}")?;
            } else if *c == 1 {
                write!(f, "{}", fmt_monomial(m, names))?;
            } else {
                write!(f, "{c}*{}", fmt_monomial(m, names))?;
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// parser

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((col, Token::Num(chars[start..i].iter().collect())));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((col, Token::Ident(chars[start..i].iter().collect())));
            continue;
        }
        let tok = match c {
            '+' => Token::Plus,
            '-' | '−' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            _ => {
                return Err(Error::Parse {
                    column: col,
                    message: format!("unexpected character {c:?}"),
                })
            }
        };
        out.push((col, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    toks: Vec<(usize, Token)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len + 1, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.column(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return self.err("division only by nonzero constants");
                    }
                    let f = self.ring.field();
                    acc = acc.scale(f.inv(d.constant_term()));
                }
                // juxtaposition: 3x, 2(x+y)
                Some(Token::Ident(_)) | Some(Token::Num(_)) | Some(Token::LParen) => {
                    acc = acc.mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let Some(Token::Num(digits)) = self.peek().cloned() else {
                return self.err("expected a non-negative integer exponent");
            };
            let e: u64 = match digits.parse() {
                Ok(e) if e <= u16::MAX as u64 => e,
                _ => return self.err("exponent too large"),
            };
            self.pos += 1;
            return base.pow(e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let ring = self.ring;
        match self.peek().cloned() {
            Some(Token::Num(digits)) => {
                self.pos += 1;
                let p = ring.characteristic() as u64;
                let v = digits
                    .bytes()
                    .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(Polynomial::constant(ring.clone(), v as i64))
            }
            Some(Token::Ident(name)) => match ring.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(ring.var(i))
                }
                None => self.err(format!("unknown variable {name}")),
            },
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub(crate) fn parse(ring: &Arc<PolyRing>, text: &str) -> Result<Polynomial> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            column: 1,
            message: "empty polynomial".into(),
        });
    }
    let mut parser = Parser {
        ring,
        toks,
        pos: 0,
        len: text.chars().count(),
    };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return parser.err("trailing input");
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring(p: u64, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(p, vars).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = ring(5, &["x", "y"]);
        let a = r.parse("x+y").unwrap();
        let b = r.parse("x-y").unwrap();
        assert_eq!(
            poly_arith(&a, &b, ArithOp::Add).unwrap(),
            r.parse("2*x").unwrap()
        );
        assert!(a.mul(&r.zero()).unwrap().is_zero());

        let r3 = ring(3, &["x", "y"]);
        let prod = r3
            .parse("x+y")
            .unwrap()
            .mul(&r3.parse("x-y").unwrap())
            .unwrap();
        assert_eq!(prod.to_string(), "x^2+2*y^2");
    }

    #[test]
    fn ring_mismatch() {
        let a = ring(5, &["x", "y"]).parse("x").unwrap();
        let b = ring(7, &["x", "y"]).parse("x").unwrap();
        assert_eq!(a.add(&b), Err(Error::RingMismatch));
        assert_eq!(poly_arith(&a, &b, ArithOp::Mul), Err(Error::RingMismatch));
    }

    #[test]
    fn frobenius_examples() {
        let r2 = ring(2, &["x", "y", "z"]);
        let f = r2.parse("x+y").unwrap();
        assert_eq!(f.frobenius_power(2).unwrap(), r2.parse("x^2+y^2").unwrap());
        let g = r2.parse("x^2*y+z").unwrap();
        assert_eq!(
            g.frobenius_power(4).unwrap(),
            r2.parse("x^8*y^4+z^4").unwrap()
        );
        assert!(matches!(
            g.frobenius_power(3),
            Err(Error::NotPowerOfP { .. })
        ));

        let r3 = ring(3, &["x", "y"]);
        let h = r3.parse("x+2*y").unwrap();
        assert_eq!(
            h.frobenius_power(3).unwrap(),
            r3.parse("x^3+2*y^3").unwrap()
        );
        // agrees with repeated multiplication
        assert_eq!(h.frobenius_power(9).unwrap(), h.pow(9).unwrap());
    }

    #[test]
    fn grammar() {
        let r = ring(7, &["x", "y", "z"]);
        assert_eq!(
            r.parse(" 3 x^2 * y - z ").unwrap(),
            r.parse("3*x^2*y+6*z").unwrap()
        );
        assert_eq!(
            r.parse("(y+z)^2").unwrap(),
            r.parse("y^2+2*y*z+z^2").unwrap()
        );
        assert_eq!(r.parse("x/2").unwrap(), r.parse("4*x").unwrap());
        assert_eq!(r.parse("-1").unwrap(), r.parse("6").unwrap());
        assert_eq!(
            r.parse("x^4+y^4−z^4").unwrap(),
            r.parse("x^4+y^4-z^4").unwrap()
        );
        for bad in ["", "x+", "w", "x^y", "(x", "x)", "x/y", "x % y"] {
            assert!(matches!(r.parse(bad), Err(Error::Parse { .. })), "{bad}");
        }
        let Err(Error::Parse { column, .. }) = r.parse("x + w") else {
            panic!()
        };
        assert_eq!(column, 5);
    }

    #[test]
    fn display_roundtrip() {
        let r = ring(5, &["x", "y", "z"]);
        for s in ["x^3+y^3+z^3", "4*x*y+3", "0", "1", "x^2*y^3*z+2*z"] {
            let f = r.parse(s).unwrap();
            assert_eq!(r.parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn exact_division() {
        let r = ring(5, &["x", "y"]);
        let f = r.parse("(x+y)*(x-2*y)").unwrap();
        assert_eq!(
            f.exact_div(&r.parse("x+y").unwrap()).unwrap(),
            r.parse("x-2*y").unwrap()
        );
        assert_eq!(
            r.parse("x+1").unwrap().exact_div(&r.parse("y").unwrap()),
            Err(Error::InexactDivision)
        );
    }

    fn arb_poly(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((prop::array::uniform3(0u32..4), 0u32..7), 0..6).prop_map(move |ts| {
            let terms = ts
                .into_iter()
                .map(|(e, c)| (Monomial::from_exponents(&e).unwrap(), c))
                .collect();
            Polynomial::from_terms(r.clone(), terms)
        })
    }

    proptest! {
        #[test]
        fn frobenius_is_additive(f in arb_poly(ring(7, &["x","y","z"])), g in arb_poly(ring(7, &["x","y","z"]))) {
            let lhs = f.add(&g).unwrap().frobenius_power(7).unwrap();
            let rhs = f.frobenius_power(7).unwrap().add(&g.frobenius_power(7).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn frobenius_composes(f in arb_poly(ring(2, &["x","y","z"]))) {
            let twice = f.frobenius_power(2).unwrap().frobenius_power(4).unwrap();
            prop_assert_eq!(twice, f.frobenius_power(8).unwrap());
        }

        #[test]
        fn frobenius_matches_power(f in arb_poly(ring(3, &["x","y","z"]))) {
            prop_assert_eq!(f.frobenius_power(3).unwrap(), f.pow(3).unwrap());
        }
    }
}
