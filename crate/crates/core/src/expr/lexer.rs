//! Tokens of the expression language.

use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Real(f64),
    /// `2.5i`, or `1` for a bare `i`.
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Real(x) => format!("number {x}"),
            Tok::Imag(x) => format!("imaginary number {x}i"),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

/// Token with its starting byte offset.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Spanned { tok, pos: start });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            i = number_end(b, i)?;
            let text = &src[start..i];
            let x: f64 = text
                .parse()
                .map_err(|_| ParseError::new(start, format!("malformed number '{text}'"), Some("a number")))?;
            if !x.is_finite() {
                return Err(ParseError::new(start, format!("number '{text}' is out of range"), None));
            }
            // `2.5i`: an `i` glued to the number, not the start of a longer name
            let glued = b.get(i) == Some(&b'i') && !b.get(i + 1).is_some_and(|&n| is_ident(n));
            let tok = if glued {
                i += 1;
                Tok::Imag(x)
            } else {
                Tok::Real(x)
            };
            out.push(Spanned { tok, pos: start });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && is_ident(b[i]) {
                i += 1;
            }
            let name = &src[start..i];
            let tok = if name == "i" { Tok::Imag(1.0) } else { Tok::Ident(name.to_string()) };
            out.push(Spanned { tok, pos: start });
            continue;
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(ParseError::new(start, format!("unexpected character '{ch}'"), None));
    }
    out.push(Spanned { tok: Tok::End, pos: b.len() });
    Ok(out)
}

fn is_ident(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

fn digits(b: &[u8], mut i: usize) -> usize {
    while i < b.len() && b[i].is_ascii_digit() {
        i += 1;
    }
    i
}

/// End of a decimal or scientific literal starting at `start`.
fn number_end(b: &[u8], start: usize) -> Result<usize, ParseError> {
    let mut i = digits(b, start);
    let int_len = i - start;
    let mut frac_len = 0;
    if b.get(i) == Some(&b'.') {
        let j = digits(b, i + 1);
        frac_len = j - i - 1;
        i = j;
    }
    if int_len == 0 && frac_len == 0 {
        return Err(ParseError::new(start, "a lone '.' is not a number", Some("digits")));
    }
    if matches!(b.get(i), Some(b'e' | b'E')) {
        let mut j = i + 1;
        if matches!(b.get(j), Some(b'+' | b'-')) {
            j += 1;
        }
        let k = digits(b, j);
        if k == j {
            return Err(ParseError::new(j.min(b.len()), "exponent has no digits", Some("digits")));
        }
        i = k;
    }
    Ok(i)
}
