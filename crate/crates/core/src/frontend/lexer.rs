use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
    Ne,
    And,
    Or,
    Not,
    Implies,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Prime => "'",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Le => "<=",
            Tok::Lt => "<",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Not => "!",
            Tok::Implies => "->",
            _ => "",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

/// `#` starts a comment running to the end of the line. The Unicode
/// connectives and relations used in pretty output are accepted too.
pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut take = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            take(&mut chars);
            continue;
        }
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                take(&mut chars);
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
            {
                s.push(take(&mut chars));
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() || c == '.' {
            let mut s = String::new();
            while chars
                .peek()
                .is_some_and(|c| c.is_ascii_digit() || *c == '.')
            {
                s.push(take(&mut chars));
            }
            if chars.peek().is_some_and(|c| *c == 'e' || *c == 'E') {
                // Exponent only when digits follow, so `2e` stays an error downstream.
                let mut look = chars.clone();
                look.next();
                if look.peek() == Some(&'-') || look.peek() == Some(&'+') {
                    look.next();
                }
                if look.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(take(&mut chars));
                    if chars.peek().is_some_and(|c| *c == '-' || *c == '+') {
                        s.push(take(&mut chars));
                    }
                    while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        s.push(take(&mut chars));
                    }
                }
            }
            if s.matches('.').count() > 1 || s == "." {
                return Err(ParseError::at(pos, format!("malformed number `{s}`")));
            }
            Tok::Number(s)
        } else {
            take(&mut chars);
            let next = chars.peek().copied();
            let mut two = |t: Tok, chars: &mut std::iter::Peekable<std::str::Chars>| {
                take(chars);
                t
            };
            match (c, next) {
                ('>', Some('=')) => two(Tok::Ge, &mut chars),
                ('<', Some('=')) => two(Tok::Le, &mut chars),
                ('!', Some('=')) => two(Tok::Ne, &mut chars),
                ('-', Some('>')) => two(Tok::Implies, &mut chars),
                ('=', Some('=')) => two(Tok::Eq, &mut chars),
                ('&', Some('&')) => two(Tok::And, &mut chars),
                ('|', Some('|')) => two(Tok::Or, &mut chars),
                ('>', _) => Tok::Gt,
                ('<', _) => Tok::Lt,
                ('=', _) => Tok::Eq,
                ('!', _) | ('¬', _) => Tok::Not,
                ('&', _) | ('∧', _) => Tok::And,
                ('|', _) | ('∨', _) => Tok::Or,
                ('→', _) => Tok::Implies,
                ('≥', _) => Tok::Ge,
                ('≤', _) => Tok::Le,
                ('≠', _) => Tok::Ne,
                ('\'', _) => Tok::Prime,
                ('+', _) => Tok::Plus,
                ('-', _) | ('−', _) => Tok::Minus,
                ('*', _) | ('·', _) => Tok::Star,
                ('/', _) => Tok::Slash,
                ('^', _) => Tok::Caret,
                ('(', _) => Tok::LParen,
                (')', _) => Tok::RParen,
                (',', _) => Tok::Comma,
                (';', _) => Tok::Semi,
                (':', _) => Tok::Colon,
                _ => return Err(ParseError::at(pos, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Token { tok, pos });
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}
