use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(u32),
    /// Punctuation, including the two-character `|-`.
    Sym(&'static str),
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// No whitespace separates this token from the previous one.
    pub glued: bool,
}

const SYMS: [&str; 17] = ["|-", "(", ")", "[", "]", "{", "}", ",", ".", ":", "|", "~", "*", "&", "!", "?", "@"];

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '$' | '-')
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (ln, text) in src.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = text.chars().collect();
        let mut i = 0;
        let mut glued = false;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                glued = false;
                i += 1;
                continue;
            }
            if ident_start(c) {
                let start = i;
                while i < chars.len() && ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, col, glued });
                glued = true;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| ParseError::at(line, col, format!("number {s} is too large")))?;
                out.push(Token { tok: Tok::Num(n), line, col, glued });
                glued = true;
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let Some(sym) = SYMS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(ParseError::at(line, col, format!("unexpected character {c:?}")));
            };
            i += sym.chars().count();
            out.push(Token { tok: Tok::Sym(sym), line, col, glued });
            glued = true;
        }
    }
    Ok(out)
}
