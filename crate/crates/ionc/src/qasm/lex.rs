//! Tokenizer for OpenQASM 2.0.

use crate::error::QasmError;

use super::Pos;

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Int(usize),
    Str(String),
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Arrow,
    EqEq,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, QasmError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0usize;
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            if bytes[i] == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }

    while i < bytes.len() {
        let b = bytes[i];
        let pos = Pos { line, col };
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => bump!(),
            b'/' if i + 1 < bytes.len() && bytes[i + 1] == b'/' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    bump!();
                }
            }
            b';' => {
                out.push(Token { tok: Tok::Semi, pos });
                bump!();
            }
            b',' => {
                out.push(Token { tok: Tok::Comma, pos });
                bump!();
            }
            b'(' => {
                out.push(Token { tok: Tok::LParen, pos });
                bump!();
            }
            b')' => {
                out.push(Token { tok: Tok::RParen, pos });
                bump!();
            }
            b'{' => {
                out.push(Token { tok: Tok::LBrace, pos });
                bump!();
            }
            b'}' => {
                out.push(Token { tok: Tok::RBrace, pos });
                bump!();
            }
            b'[' => {
                out.push(Token { tok: Tok::LBracket, pos });
                bump!();
            }
            b']' => {
                out.push(Token { tok: Tok::RBracket, pos });
                bump!();
            }
            b'+' => {
                out.push(Token { tok: Tok::Plus, pos });
                bump!();
            }
            b'*' => {
                out.push(Token { tok: Tok::Star, pos });
                bump!();
            }
            b'/' => {
                out.push(Token { tok: Tok::Slash, pos });
                bump!();
            }
            b'^' => {
                out.push(Token { tok: Tok::Caret, pos });
                bump!();
            }
            b'-' => {
                bump!();
                if i < bytes.len() && bytes[i] == b'>' {
                    bump!();
                    out.push(Token { tok: Tok::Arrow, pos });
                } else {
                    out.push(Token { tok: Tok::Minus, pos });
                }
            }
            b'=' => {
                bump!();
                if i < bytes.len() && bytes[i] == b'=' {
                    bump!();
                    out.push(Token { tok: Tok::EqEq, pos });
                } else {
                    return Err(QasmError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: "stray `=` (did you mean `==`?)".into(),
                    });
                }
            }
            b'"' => {
                bump!();
                let start = i;
                while i < bytes.len() && bytes[i] != b'"' {
                    bump!();
                }
                if i >= bytes.len() {
                    return Err(QasmError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: "unterminated string literal".into(),
                    });
                }
                let s = String::from_utf8_lossy(&bytes[start..i]).into_owned();
                bump!();
                out.push(Token { tok: Tok::Str(s), pos });
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                let mut is_float = false;
                while i < bytes.len() {
                    match bytes[i] {
                        b'0'..=b'9' => bump!(),
                        b'.' => {
                            is_float = true;
                            bump!();
                        }
                        b'e' | b'E' => {
                            is_float = true;
                            bump!();
                            if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                                bump!();
                            }
                        }
                        _ => break,
                    }
                }
                let text = std::str::from_utf8(&bytes[start..i]).unwrap();
                if is_float {
                    let v: f64 = text.parse().map_err(|_| QasmError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: format!("bad number literal `{text}`"),
                    })?;
                    out.push(Token { tok: Tok::Number(v), pos });
                } else {
                    let v: usize = text.parse().map_err(|_| QasmError::Syntax {
                        line: pos.line,
                        col: pos.col,
                        msg: format!("integer literal `{text}` out of range"),
                    })?;
                    out.push(Token { tok: Tok::Int(v), pos });
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    bump!();
                }
                let text = std::str::from_utf8(&bytes[start..i]).unwrap().to_owned();
                out.push(Token {
                    tok: Tok::Ident(text),
                    pos,
                });
            }
            _ => {
                return Err(QasmError::Syntax {
                    line: pos.line,
                    col: pos.col,
                    msg: format!("unexpected character `{}`", b as char),
                });
            }
        }
    }
    Ok(out)
}
