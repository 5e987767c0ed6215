use crate::syntax::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    /// `op@k`, a partially applied primitive.
    Partial(String, i64),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(k) => write!(f, "integer `{k}`"),
            Tok::Partial(s, k) => write!(f, "`{s}@{k}`"),
            Tok::Kw(s) => write!(f, "keyword `{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: [&str; 10] = ["let", "in", "if", "then", "else", "type", "true", "false", "number", "boolean"];

// Longest match first.
const SYMBOLS: [&str; 26] = [
    "<=>", "=>", "->", "/\\", "\\/", "<=", ">=", "!=", "&&", "||", "\\", "(", ")", "{", "}", ":", "|", "=", "<",
    ">", "+", "-", "*", "!", ";", ",",
];

#[derive(Clone, Debug)]
pub struct Lexed {
    pub tok: Tok,
    pub span: Span,
}

pub fn lex(text: &str) -> Result<Vec<Lexed>, (Span, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    let advance = |i: &mut usize, line: &mut u32, col: &mut u32, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let span = Span { line, col };
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            i = start;
            advance(&mut i, &mut line, &mut col, s.len());
            let k = s.parse::<u64>().map_err(|_| (span, format!("integer literal `{s}` is too large")))?;
            out.push(Lexed { tok: Tok::Int(k), span });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let len = i - start;
            i = start;
            advance(&mut i, &mut line, &mut col, len);
            if chars.get(i) == Some(&'@') {
                let mut j = i + 1;
                let neg = chars.get(j) == Some(&'-');
                if neg {
                    j += 1;
                }
                let ds = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == ds {
                    return Err((Span { line, col }, "expected an integer after `@`".into()));
                }
                let digits: String = chars[ds..j].iter().collect();
                let mag: i128 = digits.parse().map_err(|_| (span, "literal too large".to_string()))?;
                let k = if neg { -mag } else { mag };
                let k = i64::try_from(k).map_err(|_| (span, "literal too large".to_string()))?;
                let n = j - i;
                advance(&mut i, &mut line, &mut col, n);
                out.push(Lexed { tok: Tok::Partial(word, k), span });
                continue;
            }
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            };
            out.push(Lexed { tok, span });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                advance(&mut i, &mut line, &mut col, s.chars().count());
                out.push(Lexed { tok: Tok::Sym(s), span });
            }
            None => return Err((span, format!("unexpected character `{c}`"))),
        }
    }
    out.push(Lexed { tok: Tok::Eof, span: Span { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_symbols_longest_first() {
        let toks: Vec<Tok> = lex("\\x => x /\\ y \\/ z <=> w").unwrap().into_iter().map(|l| l.tok).collect();
        assert_eq!(
            toks,
            vec![
                Tok::Sym("\\"),
                Tok::Ident("x".into()),
                Tok::Sym("=>"),
                Tok::Ident("x".into()),
                Tok::Sym("/\\"),
                Tok::Ident("y".into()),
                Tok::Sym("\\/"),
                Tok::Ident("z".into()),
                Tok::Sym("<=>"),
                Tok::Ident("w".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn partial_and_positions() {
        let l = lex("let\n  f = add@-2").unwrap();
        assert_eq!(l[1].span, Span { line: 2, col: 3 });
        assert_eq!(l[3].tok, Tok::Partial("add".into(), -2));
    }
}
