//! Text grammar for polynomials and lex orders.
//!
//! ```text
//! poly   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' int]
//! atom   := int ['/' int] | x[i][j] | y[j] | t[k] | name ['[' int ']'] | '(' poly ')'
//! order  := 'order' 'lex' ':' var ('>' var)* ['>' '...rest']
//! ```
//!
//! Named atoms (`det`, `minor[2]`, `g[1]`, ...) are resolved through
//! caller-supplied [`Bindings`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{ExponentVector, MonomialOrder, Polynomial, Ring, RingError, Variable};

/// Named polynomials usable as atoms, keyed like `det` or `minor[2]`.
pub type Bindings = HashMap<String, Polynomial>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Poly(Polynomial),
    Order(MonomialOrder),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Ellipsis,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, RingError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            col += 1;
            continue;
        }
        let start = k;
        let tok = if c.is_ascii_digit() {
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            Tok::Int(s.parse().expect("digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            Tok::Ident(chars[start..k].iter().collect())
        } else if c == '.' && chars[k..].starts_with(&['.', '.', '.']) {
            k += 3;
            Tok::Ellipsis
        } else if "+-*^/()[],;:>".contains(c) {
            k += 1;
            Tok::Sym(c)
        } else {
            return Err(RingError::Syntax {
                line,
                col,
                msg: format!("unexpected character `{c}`"),
            });
        };
        col += k - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

fn max_exponents(p: &Polynomial) -> HashMap<usize, u32> {
    let mut out = HashMap::new();
    for (m, _) in p.terms() {
        for (i, e) in m.iter() {
            let slot = out.entry(i).or_insert(0);
            *slot = (*slot).max(e as u32);
        }
    }
    out
}

fn product_fits(a: &Polynomial, b: &Polynomial) -> bool {
    let mb = max_exponents(b);
    max_exponents(a)
        .into_iter()
        .all(|(i, e)| e + mb.get(&i).copied().unwrap_or(0) <= u16::MAX as u32)
}

struct Parser<'a> {
    ring: &'a Ring,
    bindings: &'a Bindings,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Ring, bindings: &'a Bindings, text: &str) -> Result<Self, RingError> {
        Ok(Parser {
            ring,
            bindings,
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, RingError> {
        let (line, col) = self.here();
        Err(RingError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), RingError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn int(&mut self) -> Result<BigInt, RingError> {
        match self.bump() {
            Tok::Int(v) => Ok(v),
            _ => {
                self.pos -= 1;
                self.err("expected an integer")
            }
        }
    }

    fn index(&mut self) -> Result<u16, RingError> {
        self.expect('[')?;
        let v = self.int()?;
        self.expect(']')?;
        u16::try_from(v.clone()).map_err(|_| RingError::UnknownVariable(format!("index {v}")))
    }

    fn end(&mut self) -> Result<(), RingError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.err("unexpected trailing input (implicit multiplication is not allowed)")
        }
    }

    fn poly(&mut self) -> Result<Polynomial, RingError> {
        self.eat('+');
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, RingError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            let (line, col) = self.here();
            let rhs = self.unary()?;
            if !product_fits(&acc, &rhs) {
                return Err(RingError::ExponentOverflow { line, col });
            }
            acc = acc.checked_mul(&rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, RingError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Polynomial, RingError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (line, col) = self.here();
        let e = self.int()?;
        let e = u16::try_from(e).map_err(|_| RingError::ExponentOverflow { line, col })?;
        if base.len() == 1 {
            // monomial powers are checked for overflow term by term
            let (m, c) = &base.terms()[0];
            let mono = ExponentVector::from_pairs(m.iter().map(|(i, k)| (i, k as u32 * e as u32)))
                .ok_or(RingError::ExponentOverflow { line, col })?;
            let mut coef = c.field().one();
            for _ in 0..e {
                coef = &coef * c;
            }
            return Ok(Polynomial::monomial(coef, mono));
        }
        if base.total_degree() as u64 * e as u64 > u16::MAX as u64 {
            return Err(RingError::ExponentOverflow { line, col });
        }
        Ok(base.pow(e as u32))
    }

    fn variable(&self, v: Variable) -> Result<Polynomial, RingError> {
        if self.ring.index_of(v).is_none() {
            return Err(RingError::UnknownVariable(v.to_string()));
        }
        Ok(self.ring.var(v))
    }

    fn atom(&mut self) -> Result<Polynomial, RingError> {
        match self.bump() {
            Tok::Int(n) => {
                let d = if self.eat('/') { self.int()? } else { BigInt::one() };
                let c = self.ring.field().from_ratio(&n, &d)?;
                Ok(Polynomial::constant(c))
            }
            Tok::Sym('(') => {
                let p = self.poly()?;
                self.expect(')')?;
                Ok(p)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    let i = self.index()?;
                    let j = self.index()?;
                    self.variable(Variable::X(i, j))
                }
                "y" => {
                    let j = self.index()?;
                    self.variable(Variable::Y(j))
                }
                "t" => {
                    let k = self.index()?;
                    self.variable(Variable::Aux(k))
                }
                _ => {
                    let key = if *self.peek() == Tok::Sym('[') {
                        format!("{name}[{}]", self.index()?)
                    } else {
                        name
                    };
                    self.bindings
                        .get(&key)
                        .cloned()
                        .ok_or(RingError::UnknownVariable(key))
                }
            },
            _ => {
                self.pos -= 1;
                self.err("expected a number, variable or `(`")
            }
        }
    }

    fn var_name(&mut self) -> Result<Variable, RingError> {
        let v = match self.bump() {
            Tok::Ident(n) if n == "x" => {
                let i = self.index()?;
                Variable::X(i, self.index()?)
            }
            Tok::Ident(n) if n == "y" => Variable::Y(self.index()?),
            Tok::Ident(n) if n == "t" => Variable::Aux(self.index()?),
            _ => {
                self.pos -= 1;
                return self.err("expected a variable");
            }
        };
        match self.ring.index_of(v) {
            Some(_) => Ok(v),
            None => Err(RingError::UnknownVariable(v.to_string())),
        }
    }

    fn order(&mut self) -> Result<MonomialOrder, RingError> {
        for kw in ["order", "lex"] {
            if *self.peek() != Tok::Ident(kw.to_string()) {
                return self.err(format!("expected `{kw}`"));
            }
            self.bump();
        }
        self.expect(':')?;
        let mut head = vec![self.var_name()?];
        let mut rest = false;
        while self.eat('>') {
            if *self.peek() == Tok::Ellipsis {
                self.bump();
                if self.bump() != Tok::Ident("rest".into()) {
                    self.pos -= 1;
                    return self.err("expected `...rest`");
                }
                rest = true;
                break;
            }
            head.push(self.var_name()?);
        }
        self.end()?;
        if rest {
            MonomialOrder::lex_completed(self.ring, &head)
        } else {
            MonomialOrder::lex(self.ring, &head)
        }
    }
}

impl Ring {
    pub fn parse_poly(&self, text: &str) -> Result<Polynomial, RingError> {
        self.parse_poly_with(text, &Bindings::new())
    }

    pub fn parse_poly_with(&self, text: &str, bindings: &Bindings) -> Result<Polynomial, RingError> {
        let mut p = Parser::new(self, bindings, text)?;
        let out = p.poly()?;
        p.end()?;
        Ok(out)
    }

    /// Comma-, semicolon- or newline-separated list of polynomials. Blank
    /// lines and `#` comments are skipped.
    pub fn parse_poly_list(&self, text: &str, bindings: &Bindings) -> Result<Vec<Polynomial>, RingError> {
        let cleaned: String = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join("\n");
        let mut p = Parser::new(self, bindings, &cleaned)?;
        let mut out = Vec::new();
        loop {
            while p.eat(',') || p.eat(';') {}
            if *p.peek() == Tok::End {
                return Ok(out);
            }
            let line = p.here().0;
            out.push(p.poly()?);
            let next = &p.toks[p.pos];
            let separated = next.tok == Tok::End
                || next.tok == Tok::Sym(',')
                || next.tok == Tok::Sym(';')
                || next.line > line;
            if !separated {
                return p.err("expected `,` between polynomials");
            }
        }
    }

    pub fn parse_order(&self, text: &str) -> Result<MonomialOrder, RingError> {
        let empty = Bindings::new();
        Parser::new(self, &empty, text)?.order()
    }

    /// Parses either an order (text starting with `order`) or a polynomial.
    pub fn parse(&self, text: &str, bindings: &Bindings) -> Result<Parsed, RingError> {
        if text.trim_start().starts_with("order") {
            self.parse_order(text).map(Parsed::Order)
        } else {
            self.parse_poly_with(text, bindings).map(Parsed::Poly)
        }
    }
}
