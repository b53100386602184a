//! Hand-written lexer and recursive-descent parser for `.elp` text.
//!
//! ```text
//! program   ::= statement*
//! statement ::= head '.' | head ':-' body '.' | ':-' body '.'
//! head      ::= atom (('|' | 'v') atom)* | '#false'
//! body      ::= literal (',' literal)*
//! literal   ::= 'not'? ('K' | 'M') objective | objective
//! objective ::= 'not'{0,2} (atom | '#true' | '#false')
//! atom      ::= '-'? pred ('(' term (',' term)* ')')?
//! ```
//!
//! Predicates and constants start lowercase (or are numbers); variables start
//! uppercase or with `_`. `⊤`/`⊥` are accepted for `#true`/`#false`. `%`
//! comments run to end of line.

use std::collections::BTreeSet;

use super::{
    Atom, Base, Literal, Modality, ObjectiveLiteral, Program, Rule, SourcePos, SubjectiveLiteral,
    Term,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    If,
    Dot,
    Comma,
    LParen,
    RParen,
    Bar,
    Minus,
    True,
    False,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::If => "`:-`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Minus => "`-`".into(),
            Tok::True => "`#true`".into(),
            Tok::False => "`#false`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourcePos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1usize, 1usize);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = SourcePos { line, column };
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        let tok = match c {
            '.' => {
                bump!();
                Tok::Dot
            }
            ',' => {
                bump!();
                Tok::Comma
            }
            '(' => {
                bump!();
                Tok::LParen
            }
            ')' => {
                bump!();
                Tok::RParen
            }
            '|' => {
                bump!();
                Tok::Bar
            }
            '-' => {
                bump!();
                Tok::Minus
            }
            '⊤' => {
                bump!();
                Tok::True
            }
            '⊥' => {
                bump!();
                Tok::False
            }
            ':' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    Tok::If
                } else {
                    return Err(Error::Syntax {
                        pos,
                        message: "expected `:-`".into(),
                    });
                }
            }
            '#' => {
                bump!();
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => {
                        return Err(Error::Syntax {
                            pos,
                            message: format!("unknown directive `#{word}`"),
                        })
                    }
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        word.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                Tok::Ident(word)
            }
            other => {
                return Err(Error::Syntax {
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, SourcePos { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourcePos)>,
    at: usize,
}

fn is_modality(word: &str) -> Option<Modality> {
    match word {
        "K" => Some(Modality::K),
        "M" => Some(Modality::M),
        _ => None,
    }
}

fn starts_lower(word: &str) -> bool {
    word.chars()
        .next()
        .is_some_and(|c| c.is_lowercase() || c.is_ascii_digit())
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.at + offset).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> SourcePos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().describe()
            ))
        }
    }

    fn program(&mut self) -> Result<Program> {
        let mut program = Program::default();
        while *self.peek() != Tok::Eof {
            program.push(self.statement()?);
        }
        Ok(program)
    }

    fn statement(&mut self) -> Result<Rule> {
        let pos = self.pos();
        let head = if *self.peek() == Tok::If {
            BTreeSet::new()
        } else {
            self.head()?
        };
        let body = match self.peek() {
            Tok::If => {
                self.next();
                self.body()?
            }
            Tok::Dot => Vec::new(),
            other => {
                return self.error(format!("expected `:-` or `.`, found {}", other.describe()));
            }
        };
        self.expect(Tok::Dot)?;
        Ok(Rule {
            head,
            body,
            pos: Some(pos),
        })
    }

    fn head(&mut self) -> Result<BTreeSet<Atom>> {
        if *self.peek() == Tok::False {
            self.next();
            return Ok(BTreeSet::new());
        }
        if *self.peek() == Tok::True {
            return self.error("`#true` cannot appear in a rule head");
        }
        let mut head = BTreeSet::new();
        head.insert(self.atom()?);
        loop {
            let separator = match self.peek() {
                Tok::Bar => true,
                Tok::Ident(w) if w == "v" => {
                    matches!(self.peek_at(1), Tok::Ident(_) | Tok::Minus)
                }
                _ => false,
            };
            if !separator {
                break;
            }
            self.next();
            head.insert(self.atom()?);
        }
        Ok(head)
    }

    fn body(&mut self) -> Result<Vec<Literal>> {
        let mut body = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.next();
            body.push(self.literal()?);
        }
        Ok(body)
    }

    fn count_nots(&mut self) -> usize {
        let mut n = 0;
        while matches!(self.peek(), Tok::Ident(w) if w == "not") {
            self.next();
            n += 1;
        }
        n
    }

    fn literal(&mut self) -> Result<Literal> {
        let start = self.pos();
        let nots = self.count_nots();
        if let Tok::Ident(w) = self.peek() {
            if let Some(modality) = is_modality(w) {
                if nots > 1 {
                    return Err(Error::Syntax {
                        pos: start,
                        message: "negation depth > 2: at most one `not` may precede a modality"
                            .into(),
                    });
                }
                self.next();
                if matches!(self.peek(), Tok::Dot | Tok::Comma | Tok::Eof | Tok::If) {
                    return self.error(format!("modality `{modality}` needs an argument"));
                }
                let inner_pos = self.pos();
                let inner = self.objective()?;
                if inner.get_atom().is_none() {
                    return Err(Error::Syntax {
                        pos: inner_pos,
                        message: format!("modality `{modality}` applied to a truth constant"),
                    });
                }
                return Ok(Literal::Subjective(SubjectiveLiteral {
                    negated: nots == 1,
                    modality,
                    inner,
                }));
            }
        }
        let mut obj = self.objective()?;
        let total = nots + obj.negations as usize;
        if total > 2 {
            return Err(Error::Syntax {
                pos: start,
                message: "negation depth > 2".into(),
            });
        }
        obj.negations = total as u8;
        Ok(Literal::Objective(obj))
    }

    fn objective(&mut self) -> Result<ObjectiveLiteral> {
        let start = self.pos();
        let nots = self.count_nots();
        if nots > 2 {
            return Err(Error::Syntax {
                pos: start,
                message: "negation depth > 2".into(),
            });
        }
        let base = match self.peek() {
            Tok::True => {
                self.next();
                Base::True
            }
            Tok::False => {
                self.next();
                Base::False
            }
            Tok::Ident(w) if is_modality(w).is_some() => {
                return self.error("nested modalities are not supported");
            }
            _ => Base::Atom(self.atom()?),
        };
        Ok(ObjectiveLiteral {
            negations: nots as u8,
            base,
        })
    }

    fn atom(&mut self) -> Result<Atom> {
        let strong_neg = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let name = match self.peek().clone() {
            Tok::Ident(w) if starts_lower(&w) && w != "not" => {
                self.next();
                w
            }
            Tok::Ident(w) => {
                return self.error(format!(
                    "expected a predicate name, found `{w}` (predicates start lowercase)"
                ));
            }
            other => return self.error(format!("expected an atom, found {}", other.describe())),
        };
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                args.push(self.term()?);
                match self.next() {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    other => {
                        self.at -= 1;
                        return self
                            .error(format!("expected `,` or `)`, found {}", other.describe()));
                    }
                }
            }
        }
        Ok(Atom {
            name,
            args,
            strong_neg,
        })
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Ident(w) => {
                self.next();
                if starts_lower(&w) {
                    Ok(Term::Const(w))
                } else {
                    Ok(Term::Var(w))
                }
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }
}

/// Parses program text into rules, keeping source positions. No grounding
/// or normalization is performed.
pub fn parse_program(text: &str) -> Result<Program> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
    };
    parser.program()
}

/// Parses a single atom such as `-plugged(l2)`.
pub fn parse_atom(text: &str) -> Result<Atom> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let atom = parser.atom()?;
    parser.expect(Tok::Eof)?;
    Ok(atom)
}

/// Parses a comma-separated list of atoms; commas inside argument lists do
/// not split. An empty string yields an empty list.
pub fn parse_atom_list(text: &str) -> Result<Vec<Atom>> {
    let mut parser = Parser {
        toks: lex(text)?,
        at: 0,
    };
    let mut out = Vec::new();
    if *parser.peek() == Tok::Eof {
        return Ok(out);
    }
    loop {
        out.push(parser.atom()?);
        match parser.next() {
            Tok::Comma => continue,
            Tok::Eof => break,
            other => {
                parser.at -= 1;
                return parser.error(format!("expected `,`, found {}", other.describe()));
            }
        }
    }
    Ok(out)
}
