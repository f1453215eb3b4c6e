use crate::error::{Error, Result, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Zero,
    One,
    Amp,
    Pipe,
    Tilde,
    LParen,
    RParen,
    EqEq,
    NotEq,
    Comma,
    Assign,
    And,
    Or,
    Not,
    True,
    False,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::NotEq => "`!=`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::And => "`and`".into(),
            Tok::Or => "`or`".into(),
            Tok::Not => "`not`".into(),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Maps byte offsets of a source text to line/column positions.
pub(crate) struct LineMap {
    starts: Vec<usize>,
}

impl LineMap {
    pub(crate) fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        Self { starts }
    }

    pub(crate) fn span(&self, text: &str, begin: usize, end: usize) -> SourceSpan {
        let line = self.starts.partition_point(|&s| s <= begin);
        let line_start = self.starts[line - 1];
        let column = text.get(line_start..begin).map_or(begin - line_start, |s| s.chars().count()) + 1;
        SourceSpan::new(begin, end, line, column)
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes `text[begin..end]`; spans refer to positions in `text`.
pub(crate) fn tokenize(text: &str, begin: usize, end: usize, lines: &LineMap) -> Result<Vec<Token>> {
    let src = &text[begin..end];
    let mut out = Vec::new();
    let mut iter = src.char_indices().peekable();
    while let Some((i, c)) = iter.next() {
        let start = begin + i;
        let single = |tok: Tok| Token {
            tok,
            span: lines.span(text, start, start + c.len_utf8()),
        };
        match c {
            c if c.is_whitespace() => continue,
            '&' => out.push(single(Tok::Amp)),
            '|' => out.push(single(Tok::Pipe)),
            '~' => out.push(single(Tok::Tilde)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            ',' => out.push(single(Tok::Comma)),
            '=' | '!' | ':' => {
                if let Some(&(_, '=')) = iter.peek() {
                    iter.next();
                    let tok = match c {
                        '=' => Tok::EqEq,
                        '!' => Tok::NotEq,
                        _ => Tok::Assign,
                    };
                    out.push(Token {
                        tok,
                        span: lines.span(text, start, start + 2),
                    });
                } else {
                    return Err(Error::Syntax {
                        span: lines.span(text, start, start + 1),
                        message: format!("unexpected character `{c}`"),
                    });
                }
            }
            c if c.is_ascii_digit() => {
                let mut stop = i + 1;
                while let Some(&(j, d)) = iter.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        stop = j + d.len_utf8();
                        iter.next();
                    } else {
                        break;
                    }
                }
                let word = &src[i..stop];
                let tok = match word {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    _ => {
                        return Err(Error::Syntax {
                            span: lines.span(text, start, begin + stop),
                            message: format!("unknown token `{word}`: only the constants 0 and 1 are allowed"),
                        })
                    }
                };
                out.push(Token {
                    tok,
                    span: lines.span(text, start, begin + stop),
                });
            }
            c if is_ident_start(c) => {
                let mut stop = i + 1;
                while let Some(&(j, d)) = iter.peek() {
                    if is_ident_continue(d) {
                        stop = j + d.len_utf8();
                        iter.next();
                    } else {
                        break;
                    }
                }
                let word = &src[i..stop];
                let tok = match word {
                    "and" => Tok::And,
                    "or" => Tok::Or,
                    "not" => Tok::Not,
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push(Token {
                    tok,
                    span: lines.span(text, start, begin + stop),
                });
            }
            other => {
                return Err(Error::Syntax {
                    span: lines.span(text, start, start + other.len_utf8()),
                    message: format!("unknown token `{other}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: lines.span(text, end, end),
    });
    Ok(out)
}
