use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(x) => format!("number {x}"),
            Tok::Punct(c) => format!("'{c}'"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

const PUNCT: &[char] = &[';', '=', ':', '+', '-', '*', '(', ')', '[', ']', ','];

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    while i < chars.len() {
        let ch = chars[i];
        let span = Span { line, col };
        if ch == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if ch == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            out.push(Token {
                tok: Tok::Ident(word),
                span,
            });
            continue;
        }
        if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let value: f64 = text.parse().map_err(|_| ParseError::BadNumber {
                text: text.clone(),
                span,
            })?;
            if !value.is_finite() {
                return Err(ParseError::BadNumber { text, span });
            }
            out.push(Token {
                tok: Tok::Number(value),
                span,
            });
            continue;
        }
        if PUNCT.contains(&ch) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Punct(ch),
                span,
            });
            continue;
        }
        return Err(ParseError::UnexpectedChar { ch, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_and_positions() {
        let toks = tokenize("param b = 1.5e-3;\n  x").unwrap();
        assert_eq!(toks[3].tok, Tok::Number(1.5e-3));
        assert_eq!(toks[5].span, Span { line: 2, col: 3 });
    }

    #[test]
    fn comments_are_skipped() {
        let toks = tokenize("# header\nparam b = 0; # trailing\n").unwrap();
        assert_eq!(toks.len(), 6);
    }

    #[test]
    fn stray_character() {
        let err = tokenize("let x = 2 / 3;").unwrap_err();
        assert!(matches!(err, ParseError::UnexpectedChar { ch: '/', .. }));
    }
}
