use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::real::{BigComplex, Real};
use crate::error::{Error, Result};

/// Exact scalar in the cyclotomic expression language.
///
/// ```text
/// expr   := term   (('+' | '-') term)*
/// term   := factor (('*' | '/') factor)*
/// factor := '-'? atom
/// atom   := INT | INT '/' INT | 'i' | 'sqrt(' INT ')' | 'e(' '-'? INT ',' INT ')' | '(' expr ')'
/// ```
///
/// `e(p,q)` is `exp(2πi p/q)`. An integer immediately followed by `/` and
/// another integer is a rational atom, so `1/2*x` is `(1/2)*x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ScalarExpr {
    Int(u64),
    Rational(u64, u64),
    ImagUnit,
    Sqrt(u64),
    RootOfUnity(i64, u64),
    Neg(Box<ScalarExpr>),
    Add(Box<ScalarExpr>, Box<ScalarExpr>),
    Sub(Box<ScalarExpr>, Box<ScalarExpr>),
    Mul(Box<ScalarExpr>, Box<ScalarExpr>),
    Div(Box<ScalarExpr>, Box<ScalarExpr>),
}

impl ScalarExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser::new(src)?;
        let e = p.expr()?;
        match p.peek() {
            Tok::End => Ok(e),
            t => Err(p.err_at(p.offset(), format!("unexpected {}", t.describe()))),
        }
    }

    /// Evaluates at `prec` bits. Division by anything of modulus `<= eps` fails.
    pub fn eval(&self, prec: usize, eps: f64) -> Result<BigComplex> {
        let guard = prec + 16;
        let eps = Real::from_f64(eps, guard);
        Ok(self.eval_inner(guard, &eps)?.with_precision(prec))
    }

    fn eval_inner(&self, p: usize, eps: &Real) -> Result<BigComplex> {
        use ScalarExpr::*;
        Ok(match self {
            Int(n) => BigComplex::from_real(Real::from_u64(*n, p)),
            Rational(a, b) => {
                BigComplex::from_real(Real::from_u64(*a, p) / Real::from_u64(*b, p))
            }
            ImagUnit => BigComplex::i(p),
            Sqrt(n) => BigComplex::from_real(Real::from_u64(*n, p).sqrt()),
            RootOfUnity(a, b) => BigComplex::root_of_unity(*a, *b, p),
            Neg(x) => -x.eval_inner(p, eps)?,
            Add(a, b) => a.eval_inner(p, eps)? + b.eval_inner(p, eps)?,
            Sub(a, b) => a.eval_inner(p, eps)? - b.eval_inner(p, eps)?,
            Mul(a, b) => a.eval_inner(p, eps)? * b.eval_inner(p, eps)?,
            Div(a, b) => {
                let den = b.eval_inner(p, eps)?;
                let m = den.abs();
                if m <= *eps {
                    return Err(Error::Singular {
                        modulus: m.to_f64(),
                    });
                }
                a.eval_inner(p, eps)? / den
            }
        })
    }

    fn level(&self) -> u8 {
        use ScalarExpr::*;
        match self {
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) => 2,
            Neg(_) => 3,
            _ => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_level: u8) -> fmt::Result {
        if self.level() < min_level {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        use ScalarExpr::*;
        match self {
            Int(n) => write!(f, "{n}"),
            Rational(a, b) => write!(f, "{a}/{b}"),
            ImagUnit => f.write_str("i"),
            Sqrt(n) => write!(f, "sqrt({n})"),
            RootOfUnity(a, b) => write!(f, "e({a},{b})"),
            Neg(x) => {
                f.write_str("-")?;
                x.write_at(f, 4)
            }
            Add(a, b) | Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(if matches!(self, Add(..)) { "+" } else { "-" })?;
                b.write_at(f, 2)
            }
            Mul(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("*")?;
                b.write_at(f, 3)
            }
            Div(a, b) => {
                a.write_at(f, 2)?;
                f.write_str("/")?;
                // A leading integer here would re-parse as a rational atom.
                if matches!(**b, Int(_) | Rational(..)) {
                    f.write_str("(")?;
                    b.write_at(f, 0)?;
                    f.write_str(")")
                } else {
                    b.write_at(f, 3)
                }
            }
        }
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl FromStr for ScalarExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ScalarExpr::parse(s)
    }
}

impl Serialize for ScalarExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ScalarExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        ScalarExpr::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        let bytes = src.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = src[start..i].parse::<u64>().map_err(|_| Error::Syntax {
                    offset: start,
                    message: "integer literal out of range".into(),
                })?;
                toks.push((Tok::Int(n), start));
            } else if c.is_ascii_alphabetic() || c == b'_' {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            } else if b"+-*/(),".contains(&c) {
                toks.push((Tok::Sym(c as char), i));
                i += 1;
            } else {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: i,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        }
        toks.push((Tok::End, src.len()));
        Ok(Parser { toks, pos: 0 })
    }

    fn peek(&self) -> Tok {
        self.toks[self.pos].0.clone()
    }

    fn peek_at(&self, k: usize) -> Tok {
        self.toks
            .get(self.pos + k)
            .map(|t| t.0.clone())
            .unwrap_or(Tok::End)
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, offset: usize, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        let (t, off) = self.bump();
        if t == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.err_at(off, format!("expected `{c}`, found {}", t.describe())))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.bump() {
            (Tok::Int(n), _) => Ok(n),
            (t, off) => Err(self.err_at(off, format!("expected integer, found {}", t.describe()))),
        }
    }

    fn expr(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = ScalarExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = ScalarExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ScalarExpr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    lhs = ScalarExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Sym('/') => {
                    self.bump();
                    lhs = ScalarExpr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<ScalarExpr> {
        if self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(ScalarExpr::Neg(Box::new(self.atom()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<ScalarExpr> {
        let (t, off) = self.bump();
        match t {
            Tok::Int(n) => {
                if self.peek() == Tok::Sym('/') {
                    if let Tok::Int(d) = self.peek_at(1) {
                        let doff = self.toks[self.pos + 1].1;
                        self.bump();
                        self.bump();
                        if d == 0 {
                            return Err(self.err_at(doff, "zero denominator"));
                        }
                        return Ok(ScalarExpr::Rational(n, d));
                    }
                }
                Ok(ScalarExpr::Int(n))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "i" => Ok(ScalarExpr::ImagUnit),
                "sqrt" => {
                    self.expect('(')?;
                    let n = self.int()?;
                    self.expect(')')?;
                    Ok(ScalarExpr::Sqrt(n))
                }
                "e" => {
                    self.expect('(')?;
                    let neg = if self.peek() == Tok::Sym('-') {
                        self.bump();
                        true
                    } else {
                        false
                    };
                    let poff = self.offset();
                    let p = self.int()?;
                    let p = i64::try_from(p)
                        .map_err(|_| self.err_at(poff, "root-of-unity numerator out of range"))?;
                    self.expect(',')?;
                    let qoff = self.offset();
                    let q = self.int()?;
                    if q == 0 || q > i64::MAX as u64 {
                        return Err(self.err_at(qoff, "root-of-unity order must be positive"));
                    }
                    self.expect(')')?;
                    Ok(ScalarExpr::RootOfUnity(if neg { -p } else { p }, q))
                }
                _ => Err(Error::UnknownAtom { name, offset: off }),
            },
            other => Err(self.err_at(off, format!("expected operand, found {}", other.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use ScalarExpr as E;

    fn b(e: E) -> Box<E> {
        Box::new(e)
    }

    #[test]
    fn rational_atom_takes_priority() {
        assert_eq!(E::parse("1/2").unwrap(), E::Rational(1, 2));
        assert_eq!(
            E::parse("1/2*i").unwrap(),
            E::Mul(b(E::Rational(1, 2)), b(E::ImagUnit))
        );
        assert_eq!(
            E::parse("i/2").unwrap(),
            E::Div(b(E::ImagUnit), b(E::Int(2)))
        );
    }

    #[test]
    fn printer_disambiguates_integer_divisors() {
        let e = E::Div(b(E::Int(1)), b(E::Int(2)));
        assert_eq!(e.to_string(), "1/(2)");
        assert_eq!(E::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn printer_parenthesizes_right_operands() {
        let e = E::Sub(
            b(E::Int(1)),
            b(E::Sub(b(E::Int(2)), b(E::Int(3)))),
        );
        assert_eq!(e.to_string(), "1-(2-3)");
        let e = E::Neg(b(E::Add(b(E::Int(1)), b(E::Sqrt(3)))));
        assert_eq!(e.to_string(), "-(1+sqrt(3))");
        assert_eq!(E::parse("-(1+sqrt(3))").unwrap(), e);
    }

    #[test]
    fn signed_roots_of_unity() {
        assert_eq!(E::parse("e(-1,6)").unwrap(), E::RootOfUnity(-1, 6));
        assert_eq!(E::RootOfUnity(-1, 6).to_string(), "e(-1,6)");
    }

    #[test]
    fn errors_carry_offsets() {
        match E::parse("1+foo") {
            Err(Error::UnknownAtom { name, offset }) => {
                assert_eq!(name, "foo");
                assert_eq!(offset, 2);
            }
            other => panic!("{other:?}"),
        }
        match E::parse("1+") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(E::parse("e(1,0)"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(E::parse("3/0"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(E::parse("(1"), Err(Error::Syntax { .. })));
        assert!(matches!(E::parse("1 $"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn evaluates_cyclotomic_identities() {
        let z = E::parse("e(1,8)*e(1,8)").unwrap().eval(192, 1e-24).unwrap();
        assert!(z.dist(&BigComplex::i(192)) < 1e-50);
        let z = E::parse("(e(1,8)-e(-1,8))/(2*i)*sqrt(2)")
            .unwrap()
            .eval(192, 1e-24)
            .unwrap();
        assert!(z.dist(&BigComplex::one(192)) < 1e-50);
    }

    #[test]
    fn singular_division_is_reported() {
        let err = E::parse("1/(sqrt(4)-2)").unwrap().eval(192, 1e-24).unwrap_err();
        assert!(matches!(err, Error::Singular { .. }));
    }

    fn arb_expr() -> impl Strategy<Value = E> {
        let leaf = prop_oneof![
            (0u64..1000).prop_map(E::Int),
            (0u64..50, 1u64..50).prop_map(|(p, q)| E::Rational(p, q)),
            Just(E::ImagUnit),
            (0u64..30).prop_map(E::Sqrt),
            (-40i64..40, 1u64..40).prop_map(|(p, q)| E::RootOfUnity(p, q)),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| E::Neg(b(a))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| E::Add(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| E::Sub(b(x), b(y))),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| E::Mul(b(x), b(y))),
                (inner.clone(), inner).prop_map(|(x, y)| E::Div(b(x), b(y))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            prop_assert_eq!(E::parse(&printed).unwrap(), e, "{}", printed);
        }

        #[test]
        fn roots_of_unity_have_unit_modulus(p in -200i64..200, q in 1u64..200) {
            let z = E::RootOfUnity(p, q).eval(192, 1e-24).unwrap();
            let r = (z.norm_sqr() - Real::one(192)).abs().to_f64();
            prop_assert!(r < 1e-50);
        }
    }
}
