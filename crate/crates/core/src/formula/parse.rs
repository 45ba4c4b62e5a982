//! Recursive descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := iff
//! iff     := imp ('<=>' iff)?      right associative
//! imp     := disj ('=>' imp)?      right associative
//! disj    := conj ('|' conj)*
//! conj    := neg ('&' neg)*
//! neg     := '!' neg | atom
//! atom    := 'A'..'Z' | '0' | '1' | '(' formula ')'
//! ```

use thiserror::Error;

use super::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: expected {expected}, found {found}")]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Not,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
    Var(char),
    Const(bool),
    End,
}

impl Token {
    fn describe(self) -> String {
        match self {
            Token::Not => "'!'".into(),
            Token::And => "'&'".into(),
            Token::Or => "'|'".into(),
            Token::Imp => "'=>'".into(),
            Token::Iff => "'<=>'".into(),
            Token::LParen => "'('".into(),
            Token::RParen => "')'".into(),
            Token::Var(v) => format!("'{v}'"),
            Token::Const(b) => format!("'{}'", u8::from(b)),
            Token::End => "end of input".into(),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    peeked: Option<(Token, usize, usize)>,
}

pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, peeked: None };
    let f = p.iff()?;
    let (tok, at, _) = p.peek()?;
    if tok != Token::End {
        return Err(SyntaxError {
            offset: at,
            expected: "operator or end of input".into(),
            found: tok.describe(),
        });
    }
    Ok(f)
}

impl Parser<'_> {
    /// Next token with its start and end offsets.
    fn peek(&mut self) -> Result<(Token, usize, usize), SyntaxError> {
        if let Some(t) = self.peeked {
            return Ok(t);
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let rest = &self.src[start..];
        let (tok, len) = match rest.first() {
            None => (Token::End, 0),
            Some(b'!') => (Token::Not, 1),
            Some(b'&') => (Token::And, 1),
            Some(b'|') => (Token::Or, 1),
            Some(b'(') => (Token::LParen, 1),
            Some(b')') => (Token::RParen, 1),
            Some(b'0') => (Token::Const(false), 1),
            Some(b'1') => (Token::Const(true), 1),
            Some(c @ b'A'..=b'Z') => (Token::Var(*c as char), 1),
            Some(b'=') if rest.starts_with(b"=>") => (Token::Imp, 2),
            Some(b'<') if rest.starts_with(b"<=>") => (Token::Iff, 3),
            Some(_) => {
                let found = std::str::from_utf8(rest)
                    .ok()
                    .and_then(|s| s.chars().next())
                    .map(|c| format!("'{c}'"))
                    .unwrap_or_else(|| "invalid byte".into());
                return Err(SyntaxError { offset: start, expected: "a token".into(), found });
            }
        };
        let t = (tok, start, start + len);
        self.peeked = Some(t);
        Ok(t)
    }

    fn bump(&mut self) {
        if let Some((_, _, end)) = self.peeked.take() {
            self.pos = end;
        }
    }

    fn eat(&mut self, want: Token) -> Result<bool, SyntaxError> {
        if self.peek()?.0 == want {
            self.bump();
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.imp()?;
        if self.eat(Token::Iff)? {
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disj()?;
        if self.eat(Token::Imp)? {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, SyntaxError> {
        let mut members = vec![self.conj()?];
        while self.eat(Token::Or)? {
            members.push(self.conj()?);
        }
        Ok(Formula::or(members))
    }

    fn conj(&mut self) -> Result<Formula, SyntaxError> {
        let mut members = vec![self.neg()?];
        while self.eat(Token::And)? {
            members.push(self.neg()?);
        }
        Ok(Formula::and(members))
    }

    fn neg(&mut self) -> Result<Formula, SyntaxError> {
        if self.eat(Token::Not)? {
            return Ok(Formula::not(self.neg()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let (tok, at, _) = self.peek()?;
        match tok {
            Token::Var(v) => {
                self.bump();
                Ok(Formula::Var(v))
            }
            Token::Const(b) => {
                self.bump();
                Ok(Formula::Const(b))
            }
            Token::LParen => {
                self.bump();
                let inner = self.iff()?;
                let (close, at, _) = self.peek()?;
                if close != Token::RParen {
                    return Err(SyntaxError {
                        offset: at,
                        expected: "')'".into(),
                        found: close.describe(),
                    });
                }
                self.bump();
                Ok(inner)
            }
            other => Err(SyntaxError {
                offset: at,
                expected: "a variable, constant, '!' or '('".into(),
                found: other.describe(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula::*;

    fn v(c: char) -> Formula {
        Var(c)
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse("!(X&Y)|Z").unwrap(),
            Or(vec![Formula::not(And(vec![v('X'), v('Y')])), v('Z')])
        );
        assert_eq!(
            parse("X=>Y=>Z").unwrap(),
            Formula::imp(v('X'), Formula::imp(v('Y'), v('Z')))
        );
        assert_eq!(
            parse("X<=>Y<=>Z").unwrap(),
            Formula::iff(v('X'), Formula::iff(v('Y'), v('Z')))
        );
    }

    #[test]
    fn empty_operand_is_reported_at_its_offset() {
        let err = parse("X&&Y").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.found, "'&'");
    }

    #[test]
    fn whitespace_is_ignored_and_chains_flatten() {
        assert_eq!(
            parse(" ( X & Y ) & Z ").unwrap(),
            And(vec![v('X'), v('Y'), v('Z')])
        );
        assert_eq!(parse("0 | 1").unwrap(), Or(vec![Const(false), Const(true)]));
    }

    #[test]
    fn malformed_inputs() {
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("(X|Y").unwrap_err().offset, 4);
        assert_eq!(parse("X Y").unwrap_err().offset, 2);
        assert_eq!(parse("x").unwrap_err().offset, 0);
        assert_eq!(parse("X=Y").unwrap_err().offset, 1);
        assert_eq!(parse("X<>Y").unwrap_err().offset, 1);
    }
}
