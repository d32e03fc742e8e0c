//! Tokenizer shared by the disk-config and tree text formats.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Word(String),
    Name(String),
    Num(f64),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Name(n) => write!(f, "`@{n}`"),
            Tok::Num(x) => write!(f, "number {x}"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

fn is_word_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

pub fn tokenize(src: &str) -> Result<Vec<Spanned>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        let err = |message: String| LexError { line, col, message };
        let (tok, len) = match c {
            '(' => (Tok::Sym("("), 1),
            ')' => (Tok::Sym(")"), 1),
            ';' => (Tok::Sym(";"), 1),
            ',' => (Tok::Sym(","), 1),
            '=' => (Tok::Sym("="), 1),
            '[' => (Tok::Sym("["), 1),
            ']' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                (Tok::Sym("]->"), 3)
            }
            ']' => (Tok::Sym("]"), 1),
            '-' if chars.get(i + 1) == Some(&'[') => (Tok::Sym("-["), 2),
            '@' => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err("expected a name after `@`".into()));
                }
                (Tok::Name(chars[i + 1..j].iter().collect()), j - i)
            }
            c if c.is_ascii_digit() || matches!(c, '.' | '-' | '+') => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_ascii_digit()
                        || matches!(chars[j], '.' | 'e' | 'E' | '+' | '-'))
                {
                    // a sign only continues a number right after an exponent
                    if matches!(chars[j], '+' | '-') && !matches!(chars[j - 1], 'e' | 'E') {
                        break;
                    }
                    j += 1;
                }
                let text: String = chars[i..j].iter().collect();
                let value: f64 = text
                    .parse()
                    .map_err(|_| err(format!("malformed number `{text}`")))?;
                if !value.is_finite() {
                    return Err(err(format!("non-finite number `{text}`")));
                }
                (Tok::Num(value), j - i)
            }
            c if is_word_start(c) => {
                let mut j = i + 1;
                while j < chars.len() && is_word_char(chars[j]) {
                    j += 1;
                }
                (Tok::Word(chars[i..j].iter().collect()), j - i)
            }
            other => return Err(err(format!("unexpected character {other:?}"))),
        };
        out.push(Spanned { tok, line, col });
        i += len;
        col += len;
    }
    Ok(out)
}

/// Cursor over a token stream with position-aware errors.
pub struct Cursor {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Spanned>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    pub fn error(&self, message: impl Into<String>) -> LexError {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map_or((1, 1), |s| (s.line, s.col));
        let (line, col) = if self.pos >= self.toks.len() && !self.toks.is_empty() {
            (line, col + 1)
        } else {
            (line, col)
        };
        LexError {
            line,
            col,
            message: message.into(),
        }
    }

    fn describe(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    pub fn expect_sym(&mut self, s: &'static str) -> Result<(), LexError> {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`, found {}", self.describe())))
        }
    }

    pub fn eat_sym(&mut self, s: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<(), LexError> {
        match self.peek() {
            Some(Tok::Word(x)) if x == w => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected `{w}`, found {}", self.describe()))),
        }
    }

    pub fn expect_num(&mut self) -> Result<f64, LexError> {
        match self.peek() {
            Some(Tok::Num(x)) => {
                let x = *x;
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.error(format!("expected a number, found {}", self.describe()))),
        }
    }

    pub fn expect_index(&mut self) -> Result<usize, LexError> {
        let x = self.expect_num()?;
        if x < 0.0 || x.fract() != 0.0 || x > 1e9 {
            self.pos -= 1;
            return Err(self.error(format!("expected a non-negative integer, found {x}")));
        }
        Ok(x as usize)
    }

    pub fn expect_name(&mut self) -> Result<String, LexError> {
        match self.peek() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error(format!("expected `@name`, found {}", self.describe()))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_tree_arrows_and_signed_numbers() {
        let toks: Vec<Tok> = tokenize("(vertex @a -[0.5]-> leaf 1) -1.5e-3")
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Sym("("),
                Tok::Word("vertex".into()),
                Tok::Name("a".into()),
                Tok::Sym("-["),
                Tok::Num(0.5),
                Tok::Sym("]->"),
                Tok::Word("leaf".into()),
                Tok::Num(1.0),
                Tok::Sym(")"),
                Tok::Num(-1.5e-3),
            ]
        );
    }

    #[test]
    fn reports_position_of_bad_characters() {
        let e = tokenize("leaf 1\n  $").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }

    #[test]
    fn rejects_non_finite_numbers() {
        assert!(tokenize("1e999").is_err());
        assert!(tokenize("1.2.3").is_err());
    }
}
