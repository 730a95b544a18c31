//! Parser for parameter expressions: `r`, `q`, integers, `+ - * / ^`,
//! unary minus, and `zeta(l)` for a primitive l-th root of unity.
//! Examples: `q^2`, `-q^3`, `5/7`, `zeta(10)`, `(q - q^-1)/2`.

use std::collections::BTreeSet;

use super::cyclotomic::CycElem;
use super::ratfunc::RatFunc;
use super::unipoly::{q_from, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    R,
    Q,
    Int(i64),
    Zeta(u32),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// All orders l appearing as zeta(l).
    pub fn zeta_orders(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_zeta(&mut out);
        out
    }

    fn collect_zeta(&self, out: &mut BTreeSet<u32>) {
        match self {
            Expr::Zeta(l) => {
                out.insert(*l);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_zeta(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_zeta(out);
                b.collect_zeta(out);
            }
            _ => {}
        }
    }

    pub fn uses_r(&self) -> bool {
        match self {
            Expr::R => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_r(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_r() || b.uses_r()
            }
            _ => false,
        }
    }

    pub fn uses_q(&self) -> bool {
        match self {
            Expr::Q => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_q(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_q() || b.uses_q()
            }
            _ => false,
        }
    }

    /// Evaluate as a rational function of r and q; `zeta` is rejected.
    pub fn eval_sym(&self) -> Result<RatFunc> {
        match self {
            Expr::R => Ok(RatFunc::var_r()),
            Expr::Q => Ok(RatFunc::var_q()),
            Expr::Int(n) => Ok(RatFunc::from_i64(*n)),
            Expr::Zeta(_) => Err(Error::MalformedExpression(
                "zeta(l) is not allowed in a symbolic expression".into(),
            )),
            Expr::Neg(a) => Ok(a.eval_sym()?.neg()),
            Expr::Add(a, b) => Ok(a.eval_sym()?.add(&b.eval_sym()?)),
            Expr::Sub(a, b) => Ok(a.eval_sym()?.sub(&b.eval_sym()?)),
            Expr::Mul(a, b) => Ok(a.eval_sym()?.mul(&b.eval_sym()?)),
            Expr::Div(a, b) => a.eval_sym()?.div(&b.eval_sym()?),
            Expr::Pow(a, e) => a.eval_sym()?.pow(*e),
        }
    }

    /// Evaluate as a rational constant; `r`, `q` and `zeta` are rejected.
    pub fn eval_rational(&self) -> Result<Q> {
        let f = self.eval_sym()?;
        f.as_rational().ok_or_else(|| {
            Error::MalformedExpression("expected a constant expression".into())
        })
    }

    /// Evaluate in Q(zeta_order) with q bound to `q_val`; each zeta(l)
    /// requires l to divide the ambient order. `r` is rejected.
    pub fn eval_cyc(&self, order: u32, q_val: &CycElem) -> Result<CycElem> {
        match self {
            Expr::R => Err(Error::MalformedExpression(
                "r is not allowed in this expression".into(),
            )),
            Expr::Q => Ok(q_val.clone()),
            Expr::Int(n) => Ok(CycElem::from_rational(order, q_from(*n))),
            Expr::Zeta(l) => {
                if *l == 0 || order % *l != 0 {
                    return Err(Error::MalformedExpression(format!(
                        "zeta({}) does not live in the cyclotomic field of order {}",
                        l, order
                    )));
                }
                Ok(CycElem::zeta_pow(order, (order / *l) as i64))
            }
            Expr::Neg(a) => Ok(a.eval_cyc(order, q_val)?.neg()),
            Expr::Add(a, b) => a.eval_cyc(order, q_val)?.add(&b.eval_cyc(order, q_val)?),
            Expr::Sub(a, b) => a.eval_cyc(order, q_val)?.sub(&b.eval_cyc(order, q_val)?),
            Expr::Mul(a, b) => a.eval_cyc(order, q_val)?.mul(&b.eval_cyc(order, q_val)?),
            Expr::Div(a, b) => {
                let d = b.eval_cyc(order, q_val)?;
                a.eval_cyc(order, q_val)?.mul(&d.inv()?)
            }
            Expr::Pow(a, e) => {
                let base = a.eval_cyc(order, q_val)?;
                let b = if *e >= 0 { base } else { base.inv()? };
                let mut acc = CycElem::one(order);
                for _ in 0..e.unsigned_abs() {
                    acc = acc.mul(&b)?;
                }
                Ok(acc)
            }
        }
    }
}

pub fn parse(input: &str) -> Result<Expr> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        input,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    input: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::MalformedExpression(format!(
            "{} at position {} in `{}`",
            msg, self.pos, self.input
        ))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = Expr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    acc = Expr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = Expr::Mul(Box::new(acc), Box::new(self.factor()?));
                }
                Some('/') => {
                    self.pos += 1;
                    acc = Expr::Div(Box::new(acc), Box::new(self.factor()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let atom = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(atom), e));
        }
        Ok(atom)
    }

    fn exponent(&mut self) -> Result<i64> {
        if self.eat('(') {
            let neg = self.eat('-');
            let n = self.integer()?;
            if !self.eat(')') {
                return Err(self.err("expected `)` after exponent"));
            }
            return Ok(if neg { -n } else { n });
        }
        let neg = self.eat('-');
        let n = self.integer()?;
        Ok(if neg { -n } else { n })
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>()
            .map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while self
                    .chars
                    .get(self.pos)
                    .map_or(false, |c| c.is_alphanumeric())
                {
                    self.pos += 1;
                }
                let word: String = self.chars[start..self.pos].iter().collect();
                match word.as_str() {
                    "r" => Ok(Expr::R),
                    "q" => Ok(Expr::Q),
                    "zeta" => {
                        if !self.eat('(') {
                            return Err(self.err("expected `(` after zeta"));
                        }
                        let l = self.integer()?;
                        if !self.eat(')') {
                            return Err(self.err("expected `)` after zeta order"));
                        }
                        if l < 1 || l > u32::MAX as i64 {
                            return Err(self.err("zeta order out of range"));
                        }
                        Ok(Expr::Zeta(l as u32))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.err("unknown symbol"))
                    }
                }
            }
            _ => {
                self.bump();
                Err(self.err("unexpected character"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signed_power() {
        let e = parse("-q^3").unwrap();
        let f = e.eval_sym().unwrap();
        assert_eq!(f, RatFunc::q_pow(3).neg());
        let g = parse("q^-1").unwrap().eval_sym().unwrap();
        assert_eq!(g, RatFunc::q_pow(-1));
    }

    #[test]
    fn parses_rational_constant() {
        let v = parse("5/7").unwrap().eval_rational().unwrap();
        assert_eq!(v, q_from(5) / q_from(7));
        assert_eq!(parse("-2").unwrap().eval_rational().unwrap(), q_from(-2));
    }

    #[test]
    fn parses_compound_expression() {
        let e = parse("(q - q^-1)/2").unwrap();
        let f = e.eval_sym().unwrap();
        let expect = RatFunc::var_q()
            .sub(&RatFunc::q_pow(-1))
            .div(&RatFunc::from_i64(2))
            .unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn zeta_in_cyclotomic_context() {
        let e = parse("zeta(5)^2").unwrap();
        assert_eq!(e.zeta_orders().into_iter().collect::<Vec<_>>(), vec![5]);
        let v = e.eval_cyc(10, &CycElem::zeta_pow(10, 1)).unwrap();
        assert_eq!(v, CycElem::zeta_pow(10, 4));
        // zeta(3) does not live in Q(zeta_10)
        assert!(parse("zeta(3)")
            .unwrap()
            .eval_cyc(10, &CycElem::zeta_pow(10, 1))
            .is_err());
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("q +").is_err());
        assert!(parse("foo").is_err());
        assert!(parse("q^x").is_err());
        assert!(parse("(q").is_err());
    }
}
