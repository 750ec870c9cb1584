use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Amp,
    Pipe,
    Bang,
    Dot,
    Comma,
    LParen,
    RParen,
    Strict,
    Defeasible,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Strict => write!(f, "`=>`"),
            Tok::Defeasible => write!(f, "`~>`"),
        }
    }
}

/// A token with its 1-based column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub col: usize,
}

/// Column and offending character of a lexing failure.
#[derive(Debug, PartialEq, Eq)]
pub struct LexError {
    pub col: usize,
    pub found: char,
}

/// Tokenizes one line. Everything from `#` on is a comment.
pub fn lex_line(line: &str) -> Result<Vec<Spanned>, LexError> {
    let mut out = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        let col = line[..i].chars().count() + 1;
        let single = |tok| Spanned { tok, col };
        match c {
            '#' => break,
            c if c.is_whitespace() => {
                chars.next();
            }
            '&' => {
                chars.next();
                out.push(single(Tok::Amp));
            }
            '|' => {
                chars.next();
                out.push(single(Tok::Pipe));
            }
            '!' => {
                chars.next();
                out.push(single(Tok::Bang));
            }
            '.' => {
                chars.next();
                out.push(single(Tok::Dot));
            }
            ',' => {
                chars.next();
                out.push(single(Tok::Comma));
            }
            '(' => {
                chars.next();
                out.push(single(Tok::LParen));
            }
            ')' => {
                chars.next();
                out.push(single(Tok::RParen));
            }
            '=' | '~' => {
                chars.next();
                match chars.peek() {
                    Some(&(_, '>')) => {
                        chars.next();
                        out.push(single(if c == '=' { Tok::Strict } else { Tok::Defeasible }));
                    }
                    _ => return Err(LexError { col, found: c }),
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = j + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(single(Tok::Ident(line[start..end].to_string())));
            }
            other => return Err(LexError { col, found: other }),
        }
    }
    Ok(out)
}
