use num_bigint::BigInt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Sym(&'static str),
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
    /// Source text of the token; empty for newline and end of input.
    pub text: String,
}

impl Token {
    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.tok, Tok::Sym(t) if t == s)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(&self.tok, Tok::Ident(t) if t == w)
    }

    pub fn is_line_end(&self) -> bool {
        matches!(self.tok, Tok::Newline | Tok::Eof)
    }

    pub fn describe(&self) -> String {
        match self.tok {
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
            _ => format!("'{}'", self.text),
        }
    }
}

// Longest match first.
const SYMBOLS: [&str; 19] = [
    "->", "=>", "<=", ">=", "{", "}", "(", ")", ",", ":", "|", "<", ">", "=", "+", "-", "*", "/", "@",
];

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in src.split('\n').enumerate() {
        let line_no = li + 1;
        let chars: Vec<char> = line.strip_suffix('\r').unwrap_or(line).chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let tok = |tok, text: String| Token {
                tok,
                line: line_no,
                column,
                text,
            };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(tok(Tok::Ident(s.clone()), s));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_' || chars[i] == '.') {
                    let end = (i + 1..chars.len())
                        .find(|&j| !(chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '.'))
                        .unwrap_or(chars.len());
                    let text: String = chars[start..end].iter().collect();
                    return Err(ParseError::new(
                        line_no,
                        column,
                        "malformed number (only integers and p/q fractions are allowed)",
                        &text,
                    ));
                }
                let s: String = chars[start..i].iter().collect();
                let n: BigInt = s.parse().expect("ascii digits");
                out.push(tok(Tok::Int(n), s));
                continue;
            }
            if c == '"' {
                let mut value = String::new();
                let mut j = i + 1;
                loop {
                    match chars.get(j) {
                        None => {
                            let text: String = chars[i..].iter().collect();
                            return Err(ParseError::new(line_no, column, "unterminated string", &text));
                        }
                        Some('"') => break,
                        Some('\\') => {
                            let esc = match chars.get(j + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                _ => {
                                    let text: String = chars[j..(j + 2).min(chars.len())].iter().collect();
                                    return Err(ParseError::new(line_no, j + 1, "unknown escape in string", &text));
                                }
                            };
                            value.push(esc);
                            j += 2;
                        }
                        Some(ch) => {
                            value.push(*ch);
                            j += 1;
                        }
                    }
                }
                let text: String = chars[i..=j].iter().collect();
                out.push(tok(Tok::Str(value), text));
                i = j + 1;
                continue;
            }
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(tok(Tok::Sym(s), s.to_string()));
                    i += s.chars().count();
                }
                None => {
                    return Err(ParseError::new(line_no, column, "unexpected character", &c.to_string()));
                }
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            line: line_no,
            column: chars.len() + 1,
            text: String::new(),
        });
    }
    let last = out.last().map(|t| (t.line, t.column)).unwrap_or((1, 1));
    out.push(Token {
        tok: Tok::Eof,
        line: last.0,
        column: last.1,
        text: String::new(),
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_and_symbols() {
        let toks = lex("constraint a >= 1/2 # note\n  map (x, y) -> {} @ 1").unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(
            texts,
            ["constraint", "a", ">=", "1", "/", "2", "", "map", "(", "x", ",", "y", ")", "->", "{", "}", "@", "1", "", ""]
        );
        assert_eq!((toks[2].line, toks[2].column), (1, 14));
        assert_eq!((toks[7].line, toks[7].column), (2, 3));
    }

    #[test]
    fn strings_and_errors() {
        let toks = lex(r#"note "say \"hi\"""#).unwrap();
        assert_eq!(toks[1].tok, Tok::Str("say \"hi\"".into()));
        let e = lex("param x\nparam $y").unwrap_err();
        assert_eq!((e.line, e.column, e.token.as_str()), (2, 7, "$"));
        let e = lex("constraint x < 1.5").unwrap_err();
        assert_eq!((e.column, e.token.as_str()), (16, "1.5"));
        assert!(lex("note \"open").is_err());
    }
}
