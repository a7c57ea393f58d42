//! Recursive-descent parser for the calculator expression syntax.
//!
//! Grammar (precedence low to high):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom | 'x' '^' '{' NUMBER 'a' '}'
//! atom   := NUMBER | 'x' | 'E_a' '(' expr ')' | 'sin_a' '(' expr ')'
//!         | 'cos_a' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Whitespace is insignificant. Subtraction desugars to `l + (-1) * r`, the
//! form the printer recognizes, so `print(parse(s))` reparses to an
//! identical tree. The exponent suffix applies to `x` only: the node set has
//! no general power, and `x^{ka}` is the fractional monomial.

use fractal_calc::ExprNode;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Byte offset of the offending token.
    pub offset: usize,
    /// Tokens that would have been accepted here.
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(v) => format!("number {v}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lex = Lexer { src: src.as_bytes(), pos: 0 };
        let mut out = Vec::new();
        loop {
            lex.skip_ws();
            let start = lex.pos;
            let Some(&c) = lex.src.get(lex.pos) else {
                out.push((Tok::Eof, start));
                return Ok(out);
            };
            let tok = match c {
                b'+' => {
                    lex.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lex.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lex.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lex.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lex.pos += 1;
                    Tok::Caret
                }
                b'{' => {
                    lex.pos += 1;
                    Tok::LBrace
                }
                b'}' => {
                    lex.pos += 1;
                    Tok::RBrace
                }
                b'(' => {
                    lex.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lex.pos += 1;
                    Tok::RParen
                }
                b'0'..=b'9' | b'.' => {
                    while lex
                        .src
                        .get(lex.pos)
                        .is_some_and(|&c| c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E')
                    {
                        // Exponent sign belongs to the number.
                        if (lex.src[lex.pos] == b'e' || lex.src[lex.pos] == b'E')
                            && lex.src.get(lex.pos + 1).is_some_and(|&s| s == b'+' || s == b'-')
                            && lex.src.get(lex.pos + 2).is_some_and(|&d| d.is_ascii_digit())
                        {
                            lex.pos += 2;
                        }
                        lex.pos += 1;
                    }
                    let text = std::str::from_utf8(&lex.src[start..lex.pos]).unwrap();
                    let value = text.parse::<f64>().map_err(|_| ParseError {
                        offset: start,
                        expected: vec!["number"],
                        found: format!("'{text}'"),
                    })?;
                    Tok::Number(value)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while lex
                        .src
                        .get(lex.pos)
                        .is_some_and(|&c| c.is_ascii_alphanumeric() || c == b'_')
                    {
                        lex.pos += 1;
                    }
                    Tok::Ident(String::from_utf8(lex.src[start..lex.pos].to_vec()).unwrap())
                }
                other => {
                    return Err(ParseError {
                        offset: start,
                        expected: vec!["expression"],
                        found: format!("'{}'", other as char),
                    })
                }
            };
            out.push((tok, start));
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

/// Parse the calculator syntax into an expression tree.
pub fn parse_expr(src: &str) -> Result<ExprNode, ParseError> {
    if src.trim().is_empty() {
        return Err(ParseError {
            offset: 0,
            expected: vec!["expression"],
            found: "end of input".into(),
        });
    }
    let mut parser = Parser { tokens: Lexer::tokens(src)?, pos: 0 };
    let expr = parser.expr()?;
    parser.expect_eof()?;
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> (Tok, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let (tok, offset) = self.peek();
        ParseError { offset: *offset, expected, found: tok.describe() }
    }

    fn expect(&mut self, want: Tok, label: &'static str) -> Result<(), ParseError> {
        if self.peek().0 == want {
            self.advance();
            Ok(())
        } else {
            Err(self.error(vec![label]))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if self.peek().0 == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(vec!["'+'", "'-'", "'*'", "'/'", "end of input"]))
        }
    }

    fn expr(&mut self) -> Result<ExprNode, ParseError> {
        let mut node = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.advance();
                    let rhs = self.term()?;
                    node = ExprNode::Add(Box::new(node), Box::new(rhs));
                }
                Tok::Minus => {
                    self.advance();
                    let rhs = self.term()?;
                    node = ExprNode::Add(
                        Box::new(node),
                        Box::new(ExprNode::Mul(
                            Box::new(ExprNode::Const(-1.0)),
                            Box::new(rhs),
                        )),
                    );
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode, ParseError> {
        let mut node = self.factor()?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.advance();
                    let rhs = self.factor()?;
                    node = ExprNode::Mul(Box::new(node), Box::new(rhs));
                }
                Tok::Slash => {
                    self.advance();
                    let rhs = self.factor()?;
                    node = ExprNode::Div(Box::new(node), Box::new(rhs));
                }
                _ => return Ok(node),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprNode, ParseError> {
        let is_var = matches!(&self.peek().0, Tok::Ident(s) if s == "x");
        let atom = self.atom()?;
        if self.peek().0 == Tok::Caret {
            if !is_var {
                return Err(self.error(vec!["'*'", "'/'", "'+'", "'-'"]));
            }
            self.advance();
            self.expect(Tok::LBrace, "'{'")?;
            let k = match self.peek().0 {
                Tok::Number(v) => {
                    self.advance();
                    v
                }
                _ => return Err(self.error(vec!["number"])),
            };
            match &self.peek().0 {
                Tok::Ident(s) if s == "a" => {
                    self.advance();
                }
                _ => return Err(self.error(vec!["'a'"])),
            }
            self.expect(Tok::RBrace, "'}'")?;
            return Ok(if k == 0.0 {
                ExprNode::Const(1.0)
            } else {
                ExprNode::FracMonomial(k)
            });
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<ExprNode, ParseError> {
        match self.peek().0.clone() {
            Tok::Number(v) => {
                self.advance();
                Ok(ExprNode::Const(v))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => match name.as_str() {
                "x" => {
                    self.advance();
                    Ok(ExprNode::Var)
                }
                "E_a" | "sin_a" | "cos_a" => {
                    self.advance();
                    self.expect(Tok::LParen, "'('")?;
                    let inner = self.expr()?;
                    self.expect(Tok::RParen, "')'")?;
                    let head = match name.as_str() {
                        "E_a" => ExprNode::MlExp,
                        "sin_a" => ExprNode::SinA,
                        _ => ExprNode::CosA,
                    };
                    // Application to the first monomial is the primitive
                    // itself; anything else is a composition.
                    Ok(if inner == ExprNode::FracMonomial(1.0) {
                        head
                    } else {
                        ExprNode::Compose(Box::new(head), Box::new(inner))
                    })
                }
                _ => Err(self.error(vec!["number", "'x'", "'E_a'", "'sin_a'", "'cos_a'", "'('"])),
            },
            _ => Err(self.error(vec!["number", "'x'", "'E_a'", "'sin_a'", "'cos_a'", "'('"])),
        }
    }
}

/// Parse a series literal `[c0, c1, ...]` with an optional `@alpha` suffix.
pub fn parse_series_literal(src: &str) -> Result<(Vec<f64>, Option<f64>), ParseError> {
    let src = src.trim();
    let err = |offset: usize, expected: Vec<&'static str>, found: String| ParseError {
        offset,
        expected,
        found,
    };
    let Some(rest) = src.strip_prefix('[') else {
        return Err(err(0, vec!["'['"], src.chars().next().map_or("end of input".into(), |c| format!("'{c}'"))));
    };
    let Some(close) = rest.find(']') else {
        return Err(err(src.len(), vec!["']'"], "end of input".into()));
    };
    let body = &rest[..close];
    let mut coeffs = Vec::new();
    if !body.trim().is_empty() {
        for part in body.split(',') {
            let trimmed = part.trim();
            let value = trimmed.parse::<f64>().map_err(|_| {
                err(1, vec!["number"], format!("'{trimmed}'"))
            })?;
            coeffs.push(value);
        }
    }
    let tail = rest[close + 1..].trim();
    if tail.is_empty() {
        return Ok((coeffs, None));
    }
    let Some(alpha_text) = tail.strip_prefix('@') else {
        return Err(err(close + 2, vec!["'@'", "end of input"], format!("'{tail}'")));
    };
    let alpha = alpha_text.trim().parse::<f64>().map_err(|_| {
        err(close + 2, vec!["number"], format!("'{}'", alpha_text.trim()))
    })?;
    Ok((coeffs, Some(alpha)))
}

/// Render a series as the literal syntax.
pub fn format_series_literal(coeffs: &[f64], alpha: f64) -> String {
    let body: Vec<String> = coeffs.iter().map(|c| format!("{c}")).collect();
    format!("[{}]@{alpha}", body.join(", "))
}

/// Parse the textual rendering of a fractional complex value:
/// `a`, `a + i^a b`, or `a - i^a b`. Inverse of the core Display form;
/// consumers of the transform output can round-trip values through it.
pub fn parse_fractional_complex(src: &str) -> Result<(f64, f64), ParseError> {
    let s = src.trim();
    let fail = || ParseError {
        offset: 0,
        expected: vec!["'a + i^a b'"],
        found: format!("'{s}'"),
    };
    for (sep, sign) in [(" + i^a ", 1.0), (" - i^a ", -1.0)] {
        if let Some(idx) = s.find(sep) {
            let a = s[..idx].trim().parse::<f64>().map_err(|_| fail())?;
            let b = s[idx + sep.len()..].trim().parse::<f64>().map_err(|_| fail())?;
            return Ok((a, sign * b));
        }
    }
    s.parse::<f64>().map(|a| (a, 0.0)).map_err(|_| fail())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitives_collapse() {
        assert_eq!(parse_expr("E_a(x^{1a})").unwrap(), ExprNode::MlExp);
        assert_eq!(parse_expr("sin_a(x^{1a})").unwrap(), ExprNode::SinA);
        assert_eq!(parse_expr("x^{3a}").unwrap(), ExprNode::FracMonomial(3.0));
        assert_eq!(parse_expr("x").unwrap(), ExprNode::Var);
    }

    #[test]
    fn precedence() {
        let e = parse_expr("sin_a(x^{1a}) * cos_a(x^{1a}) + 2").unwrap();
        match e {
            ExprNode::Add(l, r) => {
                assert!(matches!(*l, ExprNode::Mul(..)));
                assert_eq!(*r, ExprNode::Const(2.0));
            }
            other => panic!("expected Add, got {other:?}"),
        }
    }

    #[test]
    fn unterminated_exponent_reports_offset_five() {
        let err = parse_expr("x^{2a").unwrap_err();
        assert_eq!(err.offset, 5);
        assert_eq!(err.expected, vec!["'}'"]);
    }

    #[test]
    fn composition_of_non_monomial_inner() {
        let e = parse_expr("E_a(2 * x)").unwrap();
        assert!(matches!(e, ExprNode::Compose(..)));
    }

    #[test]
    fn exponent_only_on_x() {
        assert!(parse_expr("2^{3a}").is_err());
        assert!(parse_expr("E_a(x^{1a})^{2a}").is_err());
    }

    #[test]
    fn series_literals() {
        assert_eq!(
            parse_series_literal("[1, 0, 2.5]@0.5").unwrap(),
            (vec![1.0, 0.0, 2.5], Some(0.5))
        );
        assert_eq!(parse_series_literal("[3]").unwrap(), (vec![3.0], None));
        assert!(parse_series_literal("1, 2").is_err());
        assert!(parse_series_literal("[1, spam]").is_err());
    }

    #[test]
    fn fractional_complex_rendering_round_trip() {
        assert_eq!(parse_fractional_complex("3 + i^a 4").unwrap(), (3.0, 4.0));
        assert_eq!(parse_fractional_complex("3 - i^a 4").unwrap(), (3.0, -4.0));
        assert_eq!(parse_fractional_complex("2.5").unwrap(), (2.5, 0.0));
        assert!(parse_fractional_complex("i^a").is_err());
    }
}
