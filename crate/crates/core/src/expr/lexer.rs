use super::ExprError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    /// Byte offset of the first character in the source.
    pub offset: usize,
}

impl Token {
    /// Numeric value of a `Number` token.
    pub fn number(&self) -> Option<f64> {
        match self.kind {
            TokenKind::Number => self.lexeme.parse().ok(),
            _ => None,
        }
    }
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = match c {
            b'+' => Some(TokenKind::Plus),
            b'-' => Some(TokenKind::Minus),
            b'*' => Some(TokenKind::Star),
            b'/' => Some(TokenKind::Slash),
            b'^' => Some(TokenKind::Caret),
            b'(' => Some(TokenKind::LParen),
            b')' => Some(TokenKind::RParen),
            b',' => Some(TokenKind::Comma),
            _ => None,
        };
        if let Some(kind) = single {
            i += 1;
            out.push(Token {
                kind,
                lexeme: src[start..i].to_string(),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            i = scan_number(bytes, i);
            let lexeme = &src[start..i];
            match lexeme.parse::<f64>() {
                Ok(x) if x.is_finite() => {}
                _ => return Err(ExprError::Lex { offset: start }),
            }
            out.push(Token {
                kind: TokenKind::Number,
                lexeme: lexeme.to_string(),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            i += 1;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: TokenKind::Ident,
                lexeme: src[start..i].to_string(),
                offset: start,
            });
            continue;
        }
        return Err(ExprError::Lex { offset: start });
    }
    Ok(out)
}

fn scan_number(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    if i < b.len() && b[i] == b'.' {
        i += 1;
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
    }
    // exponent only if digits follow, otherwise `e` starts an identifier
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            while j < b.len() && b[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use TokenKind::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn simple_sum() {
        let t = tokenize("1+z^2").unwrap();
        assert_eq!(kinds("1+z^2"), vec![Number, Plus, Ident, Caret, Number]);
        assert_eq!(t[2].lexeme, "z");
        assert_eq!(t[4].number(), Some(2.0));
    }

    #[test]
    fn nested_call() {
        assert_eq!(
            kinds("cos(sqrt(2)*u)"),
            vec![Ident, LParen, Ident, LParen, Number, RParen, Star, Ident, RParen]
        );
    }

    #[test]
    fn scientific_notation() {
        let t = tokenize("1.5e-3 + 2E4 + .5").unwrap();
        assert_eq!(t[0].number(), Some(1.5e-3));
        assert_eq!(t[2].number(), Some(2e4));
        assert_eq!(t[4].number(), Some(0.5));
        // `2e` is a number followed by the identifier `e`
        assert_eq!(kinds("2e"), vec![Number, Ident]);
    }

    #[test]
    fn illegal_character() {
        assert_eq!(tokenize("1 @ 2"), Err(ExprError::Lex { offset: 2 }));
        assert_eq!(tokenize("x_1 $"), Err(ExprError::Lex { offset: 4 }));
    }

    #[test]
    fn identifiers_with_digits_and_underscores() {
        let t = tokenize("c_2 + x1").unwrap();
        assert_eq!(t[0].lexeme, "c_2");
        assert_eq!(t[2].lexeme, "x1");
        assert_eq!(t[2].offset, 6);
    }
}
