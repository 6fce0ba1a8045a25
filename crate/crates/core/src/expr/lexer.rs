use super::ParseError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    /// Bare identifier or number; which one is decided by the parser.
    Word(String),
    /// Double-quoted name.
    Str(String),
    /// `?name` metavariable.
    Meta(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Prime,
    Dot,
    Amp,
    Plus,
    Star,
    Eq,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Meta(m) => format!("`?{m}`"),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Prime => "`'`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == ':'
}

/// Splits `src` into tokens paired with their byte offsets. The last token
/// is always `Eof`.
pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some(&(pos, c)) = it.peek() {
        if c.is_whitespace() {
            it.next();
            continue;
        }
        if c == '#' {
            while it.peek().is_some_and(|&(_, c)| c != '\n') {
                it.next();
            }
            continue;
        }
        let single = match c {
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '\'' => Some(Tok::Prime),
            '.' => Some(Tok::Dot),
            '&' => Some(Tok::Amp),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            it.next();
            out.push((t, pos));
            continue;
        }
        if c == '"' {
            it.next();
            let mut s = String::new();
            loop {
                match it.next() {
                    None => return Err(ParseError::new(pos, "unterminated string")),
                    Some((_, '"')) => break,
                    Some((epos, '\\')) => match it.next() {
                        Some((_, c @ ('"' | '\\'))) => s.push(c),
                        _ => return Err(ParseError::new(epos, "invalid escape in string")),
                    },
                    Some((_, c)) => s.push(c),
                }
            }
            out.push((Tok::Str(s), pos));
            continue;
        }
        if c == '?' {
            it.next();
            let name = take_ident(src, &mut it);
            if name.is_empty() {
                return Err(ParseError::new(pos, "expected a name after `?`"));
            }
            out.push((Tok::Meta(name), pos));
            continue;
        }
        if is_ident_char(c) {
            let mut word = take_ident(src, &mut it);
            // decimal point inside a number, e.g. `0.6`
            if word.bytes().all(|b| b.is_ascii_digit()) {
                let rest = &src[pos + word.len()..];
                let mut chars = rest.chars();
                if chars.next() == Some('.') && chars.next().is_some_and(|d| d.is_ascii_digit()) {
                    it.next();
                    word.push('.');
                    word.push_str(&take_ident(src, &mut it));
                }
            }
            out.push((Tok::Word(word), pos));
            continue;
        }
        return Err(ParseError::new(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

fn take_ident(
    src: &str,
    it: &mut std::iter::Peekable<std::str::CharIndices<'_>>,
) -> String {
    let start = match it.peek() {
        Some(&(p, _)) => p,
        None => return String::new(),
    };
    let mut end = start;
    while let Some(&(p, c)) = it.peek() {
        if !is_ident_char(c) {
            break;
        }
        end = p + c.len_utf8();
        it.next();
    }
    src[start..end].to_string()
}
