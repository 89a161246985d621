//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := factor ("*" factor)*
//! factor  := atom ("^" natural)?
//! atom    := natural | "(" expr ")"
//! natural := digit+   with "," or "_" allowed between digits
//! ```

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::ast::{Expr, MAX_EXPONENT};
use super::ExprError;

pub fn parse(text: &str) -> Result<Expr, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected {:?}", p.src[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' {
                Expr::add(lhs, rhs)
            } else {
                Expr::sub(lhs, rhs)
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            lhs = Expr::mul(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        if self.peek() == Some(b'(') {
            return Err(self.error("exponent must be a literal"));
        }
        let at = self.pos;
        let exponent = self.natural()?;
        let exponent = exponent
            .to_u64()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or(ExprError::ExponentOverflow { pos: at })?;
        if self.peek() == Some(b'^') {
            return Err(self.error("chained exponent; parenthesize the base"));
        }
        Ok(Expr::pow(base, exponent))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Literal(self.natural()?)),
            Some(c) => Err(self.error(format!("unexpected {:?}", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn natural(&mut self) -> Result<BigUint, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let mut digits = Vec::new();
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                digits.push(c);
                self.pos += 1;
            } else if (c == b',' || c == b'_')
                && !digits.is_empty()
                && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
            {
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        Ok(BigUint::parse_bytes(&digits, 10).expect("ascii digits"))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn flagship_expression() {
        let e = parse("12^1000001 + 7^442").unwrap();
        assert_eq!(
            e,
            Expr::add(
                Expr::pow(Expr::lit(12u8), 1_000_001),
                Expr::pow(Expr::lit(7u8), 442)
            )
        );
        assert_eq!(parse("12^1,000,001 + 7^442").unwrap(), e);
        assert_eq!(parse("12^1_000_001+7^442").unwrap(), e);
    }

    #[test]
    fn literals_and_precedence() {
        assert_eq!(parse("0").unwrap(), Expr::lit(0u8));
        assert_eq!(
            parse("1 + 2 * 3^2").unwrap(),
            Expr::add(Expr::lit(1u8), Expr::mul(Expr::lit(2u8), Expr::pow(Expr::lit(3u8), 2)))
        );
        assert_eq!(
            parse("8 - 2 - 1").unwrap(),
            Expr::sub(Expr::sub(Expr::lit(8u8), Expr::lit(2u8)), Expr::lit(1u8))
        );
        assert_eq!(
            parse("(2^3)^4").unwrap(),
            Expr::pow(Expr::pow(Expr::lit(2u8), 3), 4)
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse("2^3^4"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("2^(3)"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse(""), Err(ExprError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("1 +"), Err(ExprError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(1 + 2"), Err(ExprError::Syntax { pos: 6, .. })));
        assert!(matches!(parse("1 2"), Err(ExprError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("-1"), Err(ExprError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("1,"), Err(ExprError::Syntax { pos: 1, .. })));
    }

    #[test]
    fn exponent_cap() {
        assert!(parse("2^4294967296").is_ok());
        assert_eq!(
            parse("2^4294967297"),
            Err(ExprError::ExponentOverflow { pos: 2 })
        );
    }

    pub(crate) fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = (0u64..1_000_000).prop_map(Expr::lit);
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
                (inner, 0u64..6).prop_map(|(a, e)| Expr::pow(a, e)),
            ]
        })
    }

    proptest! {
        #[test]
        fn parse_render_identity(e in arb_expr()) {
            prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
        }
    }
}
