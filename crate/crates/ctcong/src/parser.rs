//! Text syntax for Laurent polynomials.
//!
//! Grammar (no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := atom ('^' signed-integer)?
//! atom   := '(' expr ')' | identifier | integer
//! ```
//!
//! `^` binds tighter than unary minus (so `-x^2` is `-(x^2)`), and unary
//! minus binds tighter than `*` and `/`. A divisor must reduce to a single
//! nonzero term whose coefficient divides every numerator coefficient; a
//! negative power requires a single-term base with coefficient ±1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::laurent::{LaurentPoly, Var};

/// Parse failures, with byte positions into the source text.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("divisor at byte {pos} is not a single-term monomial")]
    NonMonomialDivisor { pos: usize },
    #[error("division by zero at byte {pos}")]
    ZeroDivisor { pos: usize },
    #[error("division at byte {pos} is not exact over the integers")]
    NonExactDivision { pos: usize },
    #[error("negative power at byte {pos} needs a single-term base with coefficient 1 or -1")]
    NonInvertiblePower { pos: usize },
}

/// Abstract syntax for a polynomial expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Int(BigInt),
    Var(String),
    Neg(Box<PolyExpr>),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Div {
        num: Box<PolyExpr>,
        den: Box<PolyExpr>,
        op_pos: usize,
    },
    Pow {
        base: Box<PolyExpr>,
        exp: i64,
        op_pos: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(n) => write!(f, "integer {n}"),
            Token::Ident(s) => write!(f, "identifier {s}"),
            Token::Plus => f.write_str("'+'"),
            Token::Minus => f.write_str("'-'"),
            Token::Star => f.write_str("'*'"),
            Token::Slash => f.write_str("'/'"),
            Token::Caret => f.write_str("'^'"),
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
            }
            b'+' => {
                tokens.push((start, Token::Plus));
                i += 1;
            }
            b'-' => {
                tokens.push((start, Token::Minus));
                i += 1;
            }
            b'*' => {
                tokens.push((start, Token::Star));
                i += 1;
            }
            b'/' => {
                tokens.push((start, Token::Slash));
                i += 1;
            }
            b'^' => {
                tokens.push((start, Token::Caret));
                i += 1;
            }
            b'(' => {
                tokens.push((start, Token::LParen));
                i += 1;
            }
            b')' => {
                tokens.push((start, Token::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::parse_bytes(&bytes[start..i], 10).expect("digits");
                tokens.push((start, Token::Int(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push((start, Token::Ident(src[start..i].to_owned())));
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: start,
                    message: format!("unexpected character {:?}", src[start..].chars().next().unwrap()),
                })
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    src_len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Token)> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.term()?;
        while let Some((_, tok)) = self.peek() {
            match tok {
                Token::Plus => {
                    self.bump();
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<PolyExpr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(&(op_pos, ref tok)) = self.peek() {
            match tok {
                Token::Star => {
                    self.bump();
                    lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Token::Slash => {
                    self.bump();
                    lhs = PolyExpr::Div {
                        num: Box::new(lhs),
                        den: Box::new(self.unary()?),
                        op_pos,
                    };
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<PolyExpr, ParseError> {
        if let Some((_, Token::Minus)) = self.peek() {
            self.bump();
            return Ok(PolyExpr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<PolyExpr, ParseError> {
        let atom = self.atom()?;
        if matches!(self.peek(), Some((_, Token::Caret))) {
            let (op_pos, _) = self.bump().expect("peeked");
            let negative = if matches!(self.peek(), Some((_, Token::Minus))) {
                self.bump();
                true
            } else {
                false
            };
            let (int_pos, tok) = self.bump().ok_or(ParseError::Syntax {
                pos: self.src_len,
                message: "expected integer exponent after '^'".to_owned(),
            })?;
            let magnitude = match tok {
                Token::Int(n) => n,
                other => {
                    return Err(ParseError::Syntax {
                        pos: int_pos,
                        message: format!("expected integer exponent after '^', found {other}"),
                    })
                }
            };
            let magnitude: i64 = magnitude.try_into().ok().filter(|&m| m <= 10_000).ok_or(
                ParseError::Syntax {
                    pos: int_pos,
                    message: "exponent magnitude limit is 10000".to_owned(),
                },
            )?;
            let exp = if negative { -magnitude } else { magnitude };
            return Ok(PolyExpr::Pow {
                base: Box::new(atom),
                exp,
                op_pos,
            });
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<PolyExpr, ParseError> {
        let (pos, tok) = self.bump().ok_or(ParseError::Syntax {
            pos: self.src_len,
            message: "unexpected end of input".to_owned(),
        })?;
        match tok {
            Token::Int(n) => Ok(PolyExpr::Int(n)),
            Token::Ident(name) => Ok(PolyExpr::Var(name)),
            Token::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Token::RParen)) => Ok(inner),
                    Some((p, other)) => Err(ParseError::Syntax {
                        pos: p,
                        message: format!("expected ')', found {other}"),
                    }),
                    None => Err(ParseError::Syntax {
                        pos: self.src_len,
                        message: "expected ')', found end of input".to_owned(),
                    }),
                }
            }
            other => Err(ParseError::Syntax {
                pos,
                message: format!("expected '(', identifier, or integer, found {other}"),
            }),
        }
    }
}

/// Parse source text into an abstract syntax tree.
pub fn parse_expr(src: &str) -> Result<PolyExpr, ParseError> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        src_len: src.len(),
    };
    let expr = parser.expr()?;
    if let Some((pos, tok)) = parser.peek() {
        return Err(ParseError::Syntax {
            pos: *pos,
            message: format!("unexpected {tok} (implicit multiplication is not supported)"),
        });
    }
    Ok(expr)
}

/// Evaluate an abstract syntax tree to a Laurent polynomial.
pub fn eval_expr(expr: &PolyExpr) -> Result<LaurentPoly, ParseError> {
    match expr {
        PolyExpr::Int(n) => Ok(LaurentPoly::constant(n.clone())),
        PolyExpr::Var(name) => Ok(LaurentPoly::variable(Var::new(name))),
        PolyExpr::Neg(inner) => Ok(-&eval_expr(inner)?),
        PolyExpr::Add(a, b) => Ok(&eval_expr(a)? + &eval_expr(b)?),
        PolyExpr::Sub(a, b) => Ok(&eval_expr(a)? - &eval_expr(b)?),
        PolyExpr::Mul(a, b) => Ok(&eval_expr(a)? * &eval_expr(b)?),
        PolyExpr::Div { num, den, op_pos } => {
            let den = eval_expr(den)?;
            if den.is_zero() {
                return Err(ParseError::ZeroDivisor { pos: *op_pos });
            }
            let (den_exp, den_coeff) = match den.as_single_term() {
                Some(t) => t,
                None => return Err(ParseError::NonMonomialDivisor { pos: *op_pos }),
            };
            let num = eval_expr(num)?;
            let inv_exp = den_exp.neg();
            let mut terms = Vec::new();
            for (e, c) in num.terms() {
                let (q, rem) = num_integer::Integer::div_rem(c, den_coeff);
                if !rem.is_zero() {
                    return Err(ParseError::NonExactDivision { pos: *op_pos });
                }
                terms.push((e.add(&inv_exp), q));
            }
            Ok(LaurentPoly::from_terms(terms))
        }
        PolyExpr::Pow { base, exp, op_pos } => {
            let base = eval_expr(base)?;
            if *exp >= 0 {
                return Ok(base.pow(*exp as u64));
            }
            let (e, c) = match base.as_single_term() {
                Some(t) => t,
                None => return Err(ParseError::NonInvertiblePower { pos: *op_pos }),
            };
            if !c.magnitude().is_one() {
                return Err(ParseError::NonInvertiblePower { pos: *op_pos });
            }
            let coeff = if c.is_negative() && exp % 2 != 0 {
                BigInt::from(-1)
            } else {
                BigInt::from(1)
            };
            Ok(LaurentPoly::monomial(e.scale(*exp), coeff))
        }
    }
}

/// Parse source text into a Laurent polynomial.
pub fn parse_poly(src: &str) -> Result<LaurentPoly, ParseError> {
    eval_expr(&parse_expr(src)?)
}

/// Canonical rendering; `parse_poly(render_poly(p)) == p`.
pub fn render_poly(p: &LaurentPoly) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::ExponentVector;
    use proptest::prelude::*;

    fn poly(terms: &[(i64, &[(&str, i64)])]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(c, pairs)| {
            let ev = ExponentVector::of(
                &pairs
                    .iter()
                    .map(|&(name, e)| (Var::new(name), e))
                    .collect::<Vec<_>>(),
            );
            (ev, BigInt::from(c))
        }))
    }

    #[test]
    fn worked_examples() {
        assert_eq!(
            parse_poly("2+x+1/x").unwrap(),
            poly(&[(2, &[]), (1, &[("x", 1)]), (1, &[("x", -1)])])
        );
        assert_eq!(
            parse_poly("(1+y)*(1+1/x)").unwrap(),
            poly(&[
                (1, &[]),
                (1, &[("y", 1)]),
                (1, &[("x", -1)]),
                (1, &[("x", -1), ("y", 1)]),
            ])
        );
        assert_eq!(
            parse_poly("1/(1+x)"),
            Err(ParseError::NonMonomialDivisor { pos: 1 })
        );
    }

    #[test]
    fn precedence_examples() {
        assert_eq!(
            parse_poly("1+2*x^2").unwrap(),
            poly(&[(1, &[]), (2, &[("x", 2)])])
        );
        // '^' binds tighter than unary minus.
        assert_eq!(parse_poly("-x^2").unwrap(), poly(&[(-1, &[("x", 2)])]));
        assert!((&parse_poly("-x^2").unwrap() + &parse_poly("x^2").unwrap()).is_zero());
        // unary minus binds tighter than '*'.
        assert_eq!(parse_poly("2*-x").unwrap(), poly(&[(-2, &[("x", 1)])]));
        assert_eq!(parse_poly("2^3").unwrap(), LaurentPoly::constant(8));
        assert_eq!(parse_poly("(1+x)^0").unwrap(), LaurentPoly::one());
        assert_eq!(
            parse_poly("x^-2*y").unwrap(),
            poly(&[(1, &[("x", -2), ("y", 1)])])
        );
    }

    #[test]
    fn division_is_exact_monomial_division() {
        assert_eq!(parse_poly("6/2").unwrap(), LaurentPoly::constant(3));
        assert_eq!(
            parse_poly("(2+2*x)/2").unwrap(),
            poly(&[(1, &[]), (1, &[("x", 1)])])
        );
        assert_eq!(
            parse_poly("(x*y+x)/x").unwrap(),
            poly(&[(1, &[]), (1, &[("y", 1)])])
        );
        assert_eq!(parse_poly("x/0"), Err(ParseError::ZeroDivisor { pos: 1 }));
        assert_eq!(
            parse_poly("x/(2-2)"),
            Err(ParseError::ZeroDivisor { pos: 1 })
        );
        assert_eq!(
            parse_poly("x/2"),
            Err(ParseError::NonExactDivision { pos: 1 })
        );
    }

    #[test]
    fn negative_powers_require_unit_monomials() {
        assert_eq!(
            parse_poly("(x*y)^-1").unwrap(),
            poly(&[(1, &[("x", -1), ("y", -1)])])
        );
        assert_eq!(
            parse_poly("(-x)^-1").unwrap(),
            poly(&[(-1, &[("x", -1)])])
        );
        assert_eq!(
            parse_poly("(-x)^-2").unwrap(),
            poly(&[(1, &[("x", -2)])])
        );
        assert_eq!(
            parse_poly("(1+x)^-1"),
            Err(ParseError::NonInvertiblePower { pos: 5 })
        );
        assert_eq!(
            parse_poly("(2*x)^-1"),
            Err(ParseError::NonInvertiblePower { pos: 5 })
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(
            parse_poly(""),
            Err(ParseError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_poly("1+"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("(1+x"),
            Err(ParseError::Syntax { pos: 4, .. })
        ));
        assert!(matches!(
            parse_poly(")"),
            Err(ParseError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_poly("x y"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("x^y"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
        assert!(matches!(
            parse_poly("x$"),
            Err(ParseError::Syntax { pos: 1, .. })
        ));
        assert!(matches!(
            parse_poly("x^2^3"),
            Err(ParseError::Syntax { pos: 3, .. })
        ));
        assert!(matches!(
            parse_poly("x^99999"),
            Err(ParseError::Syntax { pos: 2, .. })
        ));
    }

    #[test]
    fn render_examples() {
        assert_eq!(render_poly(&LaurentPoly::zero()), "0");
        assert_eq!(
            render_poly(&poly(&[(2, &[]), (1, &[("x", 1)]), (1, &[("x", -1)])])),
            "x^-1 + 2 + x"
        );
        assert_eq!(
            render_poly(&poly(&[
                (1, &[]),
                (1, &[("y", 1)]),
                (1, &[("x", 1), ("y", 1)]),
            ])),
            "1 + y + x*y"
        );
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        let term = (
            prop_oneof![Just("x"), Just("y"), Just("z")],
            -3i64..=3,
            prop_oneof![Just("x"), Just("y"), Just("z")],
            -3i64..=3,
            -99i64..=99,
        );
        proptest::collection::vec(term, 0..6).prop_map(|terms| {
            LaurentPoly::from_terms(terms.into_iter().map(|(v1, e1, v2, e2, c)| {
                (
                    ExponentVector::of(&[(Var::new(v1), e1), (Var::new(v2), e2)]),
                    BigInt::from(c),
                )
            }))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn round_trip(p in arb_poly()) {
            prop_assert_eq!(parse_poly(&render_poly(&p)).unwrap(), p);
        }
    }
}
