//! Parser for object expressions.
//!
//! ```text
//! obj     := term ("+" term)*
//! term    := primary ( "[" int "]" | "(" int ")" | "^" nat )*
//! primary := "cone(" obj "->" obj ")" | "(" obj ")" | "0"
//!          | "j*" sheaf | "t*" sheaf | "s*t*" sheaf | "OY" ["(" pic ")"]
//!          | sheaf | name
//! sheaf   := ("O" | "S" | "S'" | "S''") ["(" int ")"]
//! pic     := ["-"] [nat] ("h" | "H") (("+" | "-") [nat] ("h" | "H"))*
//! ```
//!
//! Columns in errors are 1-based character positions. `−` (U+2212) is
//! accepted as a minus sign.

use crate::error::{Error, Result};
use crate::formalcat::{Gen, ObjExpr};
use crate::quadric::{QuadricSheaf, SheafKind};

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

impl Parser {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.chars().count();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        self.skip_ws();
        if self.eat(s) {
            Ok(())
        } else {
            match self.peek() {
                Some(c) => self.err(format!("expected '{s}', found '{c}'")),
                None => self.err(format!("expected '{s}', found end of input")),
            }
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits.parse().or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let negative = if self.peek().is_some_and(is_minus) {
            self.pos += 1;
            true
        } else {
            self.eat("+");
            false
        };
        let start = self.pos;
        let v = self.nat()?;
        let v = i64::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })?;
        Ok(if negative { -v } else { v })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn obj(&mut self) -> Result<ObjExpr> {
        let mut terms = vec![self.term()?];
        loop {
            self.skip_ws();
            if self.eat("+") {
                terms.push(self.term()?);
            } else {
                break;
            }
        }
        Ok(ObjExpr::sum(terms.into_iter().map(|t| (t, 1))))
    }

    fn term(&mut self) -> Result<ObjExpr> {
        let mut e = self.primary()?;
        loop {
            self.skip_ws();
            if self.eat("[") {
                let m = self.int()?;
                self.expect("]")?;
                e = e.shift(m);
            } else if self.peek() == Some('(') {
                self.pos += 1;
                let k = self.int()?;
                self.expect(")")?;
                e = e.twist(k);
            } else if self.eat("^") {
                let start = self.pos;
                let m = self.nat()?;
                let m = u32::try_from(m).or_else(|_| {
                    self.pos = start;
                    self.err("multiplicity out of range")
                })?;
                e = e.times(m);
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> Result<ObjExpr> {
        self.skip_ws();
        let Some(c) = self.peek() else {
            return self.err("expected an object, found end of input");
        };
        if self.eat("cone(") {
            let a = self.obj()?;
            self.expect("->")?;
            let b = self.obj()?;
            self.expect(")")?;
            return Ok(ObjExpr::cone(&a, &b));
        }
        if c == '(' {
            self.pos += 1;
            let e = self.obj()?;
            self.expect(")")?;
            return Ok(e);
        }
        if c == '0' && !self.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
            self.pos += 1;
            return Ok(ObjExpr::zero());
        }
        if self.eat("j*") {
            return Ok(ObjExpr::gen(Gen::Push(self.sheaf()?)));
        }
        if self.eat("s*t*") {
            return Ok(ObjExpr::gen(Gen::PushPull(self.sheaf()?)));
        }
        if self.eat("t*") {
            return Ok(ObjExpr::gen(Gen::Pull(self.sheaf()?)));
        }
        if !(c.is_ascii_alphabetic() || c == '_') {
            return self.err(format!("unexpected '{c}'"));
        }
        let start = self.pos;
        let word = self.ident();
        match word.as_str() {
            "O" | "S" => {
                self.pos = start;
                Ok(ObjExpr::sheaf(self.sheaf()?))
            }
            "OY" => self.ambient(),
            _ => Ok(ObjExpr::named(&word)),
        }
    }

    fn sheaf(&mut self) -> Result<QuadricSheaf> {
        self.skip_ws();
        let kind = if self.eat("O") {
            SheafKind::LineBundle
        } else if self.eat("S''") {
            SheafKind::SpinorDoublePrime
        } else if self.eat("S'") {
            SheafKind::SpinorPrime
        } else if self.eat("S") {
            SheafKind::Spinor
        } else {
            return self.err("expected O, S, S' or S''");
        };
        if self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            return self.err("unexpected character after sheaf name");
        }
        Ok(QuadricSheaf::new(kind, 0))
    }

    /// `OY` with an optional Picard class `a·h + b·H`.
    fn ambient(&mut self) -> Result<ObjExpr> {
        let save = self.pos;
        self.skip_ws();
        if self.peek() != Some('(') {
            self.pos = save;
            return Ok(ObjExpr::gen(Gen::AmbientLine { h: 0, big_h: 0 }));
        }
        // a parenthesised integer is an ordinary twist, handled by `term`
        let mut probe = self.pos + 1;
        while self.chars.get(probe).is_some_and(|c| c.is_whitespace()) {
            probe += 1;
        }
        let mut scan = probe;
        while self.chars.get(scan).is_some_and(|&c| c.is_ascii_digit() || is_minus(c) || c == '+' || c.is_whitespace()) {
            scan += 1;
        }
        if self.chars.get(scan) == Some(&')') {
            self.pos = save;
            return Ok(ObjExpr::gen(Gen::AmbientLine { h: 0, big_h: 0 }));
        }
        self.pos += 1;
        let (mut a, mut b) = (0i64, 0i64);
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = if self.peek().is_some_and(is_minus) {
                self.pos += 1;
                -1
            } else if self.eat("+") || first {
                1
            } else {
                break;
            };
            self.skip_ws();
            let coef = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.int()?
            } else {
                1
            };
            self.skip_ws();
            if self.eat("h") {
                a += sign * coef;
            } else if self.eat("H") {
                b += sign * coef;
            } else {
                return self.err("expected h or H");
            }
            first = false;
        }
        self.expect(")")?;
        Ok(ObjExpr::gen(Gen::AmbientLine { h: a, big_h: b }))
    }
}

/// Parses an object expression into normal form.
pub fn parse_expr(text: &str) -> Result<ObjExpr> {
    let mut p = Parser::new(text);
    let e = p.obj()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return p.err(format!("unexpected '{c}'"));
    }
    Ok(e)
}

/// Parses a single sheaf on a quadric, such as `S'(1)` or `O(-2)`.
pub fn parse_sheaf(text: &str) -> Result<QuadricSheaf> {
    match parse_expr(text)? {
        ObjExpr::Gen(Gen::Sheaf(f)) => Ok(f),
        other => Err(Error::Parse {
            column: 1,
            message: format!("expected a sheaf on a quadric, got {}", other.render()),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cones_and_sheaves() {
        let e = parse_expr("cone(j*S' -> j*S''[2])").unwrap();
        let expected = ObjExpr::cone(
            &ObjExpr::push(QuadricSheaf::s1(0)),
            &ObjExpr::push(QuadricSheaf::s2(0)).shift(2),
        );
        assert_eq!(e, expected);
        assert_eq!(parse_sheaf("S(1)").unwrap(), QuadricSheaf::s(1));
        assert_eq!(parse_sheaf("O(−2)").unwrap(), QuadricSheaf::o(-2));
        assert_eq!(parse_sheaf(" S'' ").unwrap(), QuadricSheaf::s2(0));
    }

    #[test]
    fn reports_columns() {
        match parse_expr("cone(j*S' ->") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 13),
            other => panic!("{other:?}"),
        }
        match parse_expr("j*S(1") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_expr("").is_err());
        assert!(parse_expr("j*Q").is_err());
    }

    #[test]
    fn extensions() {
        assert_eq!(parse_expr("0").unwrap(), ObjExpr::zero());
        assert_eq!(parse_expr("j*O^3").unwrap(), ObjExpr::push(QuadricSheaf::o(0)).times(3));
        assert_eq!(
            parse_expr("OY(h+H)").unwrap(),
            ObjExpr::gen(Gen::AmbientLine { h: 1, big_h: 1 })
        );
        assert_eq!(
            parse_expr("OY(-2H)").unwrap(),
            ObjExpr::gen(Gen::AmbientLine { h: 0, big_h: -2 })
        );
        assert_eq!(parse_expr("OY").unwrap(), ObjExpr::gen(Gen::AmbientLine { h: 0, big_h: 0 }));
        assert_eq!(parse_expr("t*S").unwrap().render(), "t*S");
        assert_eq!(parse_expr("s*t*S(1)").unwrap().render(), "s*t*S(1)");
        assert_eq!(parse_expr("T(2)[1]").unwrap().render(), "T(2)[1]");
    }
}
