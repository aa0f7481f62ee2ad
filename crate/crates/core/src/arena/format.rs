//! PGSolver-compatible text formats.
//!
//! ```text
//! parity <max-id> ;
//! <id> <priority> <owner> <succ>(,<succ>)* ["name"] ;
//!
//! generalized-parity <max-id> <k> ;
//! <id> <p1>(,<pl>)* <owner> <succ>(,<succ>)* ["name"] ;
//! ```
//!
//! Lines starting with `#` are comments. A PGSolver `start <id> ;` statement
//! is accepted and ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{GameArena, Player, PriorityProfile, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameKind {
    Parity,
    Generalized,
}

#[derive(Clone, Debug)]
pub struct ParsedGame {
    pub kind: GameKind,
    pub arena: GameArena,
    pub profile: PriorityProfile,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate vertex id {vertex}")]
    DuplicateVertex { vertex: VertexId, line: usize },
    #[error("line {line}: vertex id {vertex} exceeds declared maximum {max}")]
    VertexOutOfRange {
        vertex: VertexId,
        max: VertexId,
        line: usize,
    },
    #[error("line {line}: vertex {vertex} has successor {successor} out of range")]
    SuccessorOutOfRange {
        vertex: VertexId,
        successor: VertexId,
        line: usize,
    },
    #[error("line {line}: vertex {vertex} has no successor (deadlock)")]
    Deadlock { vertex: VertexId, line: usize },
    #[error("line {line}: vertex {vertex} lists {found} priorities, header declares {expected}")]
    DimensionMismatch {
        vertex: VertexId,
        expected: usize,
        found: usize,
        line: usize,
    },
    #[error("vertex {0} is declared by the header but never defined")]
    MissingVertex(VertexId),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(u64),
    Comma,
    Semi,
    Str(String),
    Word(String),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == ',' {
                out.push(Token { tok: Tok::Comma, line, column });
                i += 1;
            } else if c == ';' {
                out.push(Token { tok: Tok::Semi, line, column });
                i += 1;
            } else if c == '"' {
                let start = i + 1;
                let end = (start..chars.len())
                    .find(|&j| chars[j] == '"')
                    .ok_or_else(|| syntax(line, column, "unterminated name"))?;
                let name: String = chars[start..end].iter().collect();
                out.push(Token { tok: Tok::Str(name), line, column });
                i = end + 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits
                    .parse::<u64>()
                    .map_err(|_| syntax(line, column, format!("number {digits} too large")))?;
                out.push(Token { tok: Tok::Num(n), line, column });
            } else if c.is_alphabetic() || c == '-' || c == '_' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '-' || chars[i] == '_')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Word(word), line, column });
            } else {
                return Err(syntax(line, column, format!("unexpected character {c:?}")));
            }
        }
    }
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end_line: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eof_error(&self, what: &str) -> ParseError {
        syntax(self.end_line, 1, format!("unexpected end of input, expected {what}"))
    }

    fn number(&mut self, what: &str) -> Result<(u64, usize, usize), ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Num(n), line, column }) => Ok((n, line, column)),
            Some(t) => Err(syntax(t.line, t.column, format!("expected {what}"))),
            None => Err(self.eof_error(what)),
        }
    }

    fn semi(&mut self) -> Result<(), ParseError> {
        match self.next() {
            Some(Token { tok: Tok::Semi, .. }) => Ok(()),
            Some(t) => Err(syntax(t.line, t.column, "expected ';'")),
            None => Err(self.eof_error("';'")),
        }
    }

    fn eat_comma(&mut self) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Comma, .. })) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `<num>(,<num>)*`, possibly empty when `allow_empty`.
    fn number_list(&mut self, what: &str, allow_empty: bool) -> Result<Vec<u64>, ParseError> {
        let mut out = Vec::new();
        if allow_empty && !matches!(self.peek(), Some(Token { tok: Tok::Num(_), .. })) {
            return Ok(out);
        }
        out.push(self.number(what)?.0);
        while self.eat_comma() {
            out.push(self.number(what)?.0);
        }
        Ok(out)
    }
}

struct Entry {
    priorities: Vec<u32>,
    owner: Player,
    successors: Vec<VertexId>,
    name: Option<String>,
    line: usize,
}

fn to_index(n: u64, line: usize, column: usize) -> Result<usize, ParseError> {
    usize::try_from(n).map_err(|_| syntax(line, column, "vertex id too large"))
}

/// Parses a game, requiring the header to name `expected` when given.
pub fn parse_with(text: &str, expected: Option<GameKind>) -> Result<ParsedGame, ParseError> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor {
        tokens,
        pos: 0,
        end_line: text.lines().count().max(1),
    };

    let (kind, line, column) = match cur.next() {
        Some(Token { tok: Tok::Word(w), line, column }) => match w.as_str() {
            "parity" => (GameKind::Parity, line, column),
            "generalized-parity" => (GameKind::Generalized, line, column),
            _ => return Err(syntax(line, column, format!("unknown header keyword {w:?}"))),
        },
        Some(t) => return Err(syntax(t.line, t.column, "expected header keyword")),
        None => return Err(cur.eof_error("header")),
    };
    if let Some(want) = expected {
        if want != kind {
            return Err(syntax(line, column, format!("expected a {want:?} game header")));
        }
    }
    let (max_id, line, column) = cur.number("maximum vertex id")?;
    let max_id = to_index(max_id, line, column)?;
    let k = match kind {
        GameKind::Parity => 1,
        GameKind::Generalized => {
            let (k, line, column) = cur.number("dimension count")?;
            if k == 0 || k > 64 {
                return Err(syntax(line, column, "dimension count must be in 1..=64"));
            }
            k as usize
        }
    };
    cur.semi()?;

    let mut entries: BTreeMap<VertexId, Entry> = BTreeMap::new();
    while let Some(first) = cur.peek().cloned() {
        if let Tok::Word(w) = &first.tok {
            if w == "start" {
                cur.next();
                cur.number("start vertex")?;
                cur.semi()?;
                continue;
            }
        }
        let (id, line, column) = cur.number("vertex id")?;
        let id = to_index(id, line, column)?;
        if id > max_id {
            return Err(ParseError::VertexOutOfRange {
                vertex: id,
                max: max_id,
                line,
            });
        }
        let priorities = cur.number_list("priority", false)?;
        if priorities.len() != k {
            return Err(ParseError::DimensionMismatch {
                vertex: id,
                expected: k,
                found: priorities.len(),
                line,
            });
        }
        let priorities = priorities
            .into_iter()
            .map(|p| u32::try_from(p).map_err(|_| syntax(line, column, "priority too large")))
            .collect::<Result<Vec<_>, _>>()?;
        let owner = match cur.number("owner")? {
            (0, ..) => Player::Zero,
            (1, ..) => Player::One,
            (_, l, c) => return Err(syntax(l, c, "owner must be 0 or 1")),
        };
        let succ_raw = cur.number_list("successor", true)?;
        let mut successors = Vec::with_capacity(succ_raw.len());
        for s in succ_raw {
            let s = usize::try_from(s).unwrap_or(usize::MAX);
            if s > max_id {
                return Err(ParseError::SuccessorOutOfRange {
                    vertex: id,
                    successor: s,
                    line,
                });
            }
            successors.push(s);
        }
        let name = match cur.peek() {
            Some(Token { tok: Tok::Str(s), .. }) => {
                let s = s.clone();
                cur.next();
                Some(s)
            }
            _ => None,
        };
        cur.semi()?;
        if successors.is_empty() {
            return Err(ParseError::Deadlock { vertex: id, line });
        }
        if entries.contains_key(&id) {
            return Err(ParseError::DuplicateVertex { vertex: id, line });
        }
        entries.insert(
            id,
            Entry {
                priorities,
                owner,
                successors,
                name,
                line,
            },
        );
    }

    // Dense ids: 0..=max_id must all be defined.
    for (expected, &id) in entries.keys().enumerate() {
        if id != expected {
            return Err(ParseError::MissingVertex(expected));
        }
    }
    if entries.len() != max_id + 1 {
        return Err(ParseError::MissingVertex(entries.len()));
    }

    let n = entries.len();
    let mut owners = Vec::with_capacity(n);
    let mut successors = Vec::with_capacity(n);
    let mut names = Vec::with_capacity(n);
    let mut dims = vec![Vec::with_capacity(n); k];
    for (_, e) in entries {
        debug_assert!(e.line > 0);
        owners.push(e.owner);
        successors.push(e.successors);
        names.push(e.name);
        for (d, p) in dims.iter_mut().zip(e.priorities) {
            d.push(p);
        }
    }
    let arena = GameArena::with_names(owners, successors, names)
        .expect("successors validated while parsing");
    let profile = PriorityProfile::new(dims).expect("dimensions validated while parsing");
    Ok(ParsedGame {
        kind,
        arena,
        profile,
    })
}

/// Parses a `parity` file into an arena and a one-dimensional profile.
pub fn parse_parity(text: &str) -> Result<(GameArena, PriorityProfile), ParseError> {
    parse_with(text, Some(GameKind::Parity)).map(|g| (g.arena, g.profile))
}

/// Parses a `generalized-parity` file.
pub fn parse_generalized(text: &str) -> Result<(GameArena, PriorityProfile), ParseError> {
    parse_with(text, Some(GameKind::Generalized)).map(|g| (g.arena, g.profile))
}

/// Parses either format, dispatching on the header keyword.
pub fn parse_game(text: &str) -> Result<ParsedGame, ParseError> {
    parse_with(text, None)
}

fn write_body(out: &mut String, arena: &GameArena, profile: &PriorityProfile) {
    for v in arena.vertices() {
        let prios: Vec<String> = profile.vector(v).iter().map(u32::to_string).collect();
        let succs: Vec<String> = arena.successors(v).iter().map(usize::to_string).collect();
        let _ = write!(
            out,
            "{} {} {} {}",
            v,
            prios.join(","),
            arena.owner(v),
            succs.join(",")
        );
        if let Some(name) = arena.name(v) {
            let _ = write!(out, " \"{}\"", name.replace('"', "'"));
        }
        out.push_str(";\n");
    }
}

/// Serializes a game in the parity format. Only the first dimension is written.
pub fn write_parity(arena: &GameArena, profile: &PriorityProfile) -> String {
    let mut out = format!("parity {};\n", arena.vertex_count().saturating_sub(1));
    write_body(&mut out, arena, &profile.single(0));
    out
}

pub fn write_generalized(arena: &GameArena, profile: &PriorityProfile) -> String {
    let mut out = format!(
        "generalized-parity {} {};\n",
        arena.vertex_count().saturating_sub(1),
        profile.k()
    );
    write_body(&mut out, arena, profile);
    out
}
