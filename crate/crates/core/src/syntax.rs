//! Text syntax for specifications: parsing and minimal-parenthesis printing.
//!
//! ```text
//! Fifo = a . b . Fifo;
//! P    = block{x}(comm{x|y->z}(a . x || y . b));
//! ```
//!
//! Binding strength, tightest first: `|` (inside a multi-action), `.`, `||`,
//! `+`. Binary operators nest to the right. Names that are keywords or contain
//! characters outside `[A-Za-z0-9_]` are written between backticks.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiactions::{is_identifier, Action, ActionSet, MultiAction};
use crate::process::{AllowSet, CommRule, CommSet, Definition, ProcName, ProcessTerm, RenameMap, Specification};

const KEYWORDS: &[&str] = &[
    "tau", "delta", "allow", "block", "rename", "comm", "hide", "lmerge", "sync",
];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Quoted(s) => write!(f, "quoted name `{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    const SYMBOLS: &[&str] = &["||", "->", "=", ";", "+", ".", "|", "(", ")", "{", "}", ","];
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
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
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        if c == '%' || rest == "//" {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        let (l, cl) = (line, col);
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut line, &mut col, 1);
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l,
                col: cl,
            });
            continue;
        }
        if c == '`' {
            advance(&mut i, &mut line, &mut col, 1);
            let start = i;
            while i < chars.len() && chars[i] != '`' && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            if i == chars.len() || chars[i] != '`' {
                return Err(syntax(l, cl, "unterminated quoted name"));
            }
            let name: String = chars[start..i].iter().collect();
            advance(&mut i, &mut line, &mut col, 1);
            out.push(Token {
                tok: Tok::Quoted(name),
                line: l,
                col: cl,
            });
            continue;
        }
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                advance(&mut i, &mut line, &mut col, s.len());
                out.push(Token {
                    tok: Tok::Sym(s),
                    line: l,
                    col: cl,
                });
            }
            None => return Err(syntax(l, cl, &format!("unexpected character `{c}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

fn syntax(line: usize, col: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        col,
        message: message.to_string(),
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    proc_names: BTreeSet<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: &str) -> Error {
        let t = &self.toks[self.pos];
        syntax(t.line, t.col, message)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        self.error_here(&format!("expected {wanted}, found {}", self.peek()))
    }

    fn at(&self, sym: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == sym)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if self.at(sym) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    /// A user-level name: a non-keyword identifier or a quoted name.
    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok(s)
            }
            Tok::Quoted(s) => {
                self.next();
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn action(&mut self) -> Result<Action> {
        let t = self.toks[self.pos].clone();
        let name = self.name()?;
        if self.proc_names.contains(&name) {
            return Err(syntax(t.line, t.col, &format!("`{name}` is a process, not an action")));
        }
        Action::quoted(&name).map_err(|e| syntax(t.line, t.col, &e.to_string()))
    }

    /// `a|b|c` or `tau`.
    fn multi_action(&mut self) -> Result<MultiAction> {
        let mut actions = Vec::new();
        loop {
            if matches!(self.peek(), Tok::Ident(s) if s == "tau") {
                self.next();
            } else {
                actions.push(self.action()?);
            }
            if !self.eat("|") {
                break;
            }
        }
        Ok(MultiAction::from_actions(actions))
    }

    fn spec(&mut self) -> Result<Specification> {
        let mut defs = Vec::new();
        let mut seen = BTreeSet::new();
        while *self.peek() != Tok::Eof {
            let t = self.toks[self.pos].clone();
            let name = self.name()?;
            if !seen.insert(name.clone()) {
                return Err(syntax(t.line, t.col, &format!("process `{name}` is defined more than once")));
            }
            self.expect("=")?;
            let body = self.term()?;
            self.expect(";")?;
            let name = ProcName::quoted(&name).map_err(|e| syntax(t.line, t.col, &e.to_string()))?;
            defs.push(Definition::new(name, body));
        }
        let Some(root) = defs.first().map(|d| d.name.clone()) else {
            return Err(self.error_here("expected at least one definition"));
        };
        Specification::new(defs, root)
    }

    fn term(&mut self) -> Result<ProcessTerm> {
        let left = self.par()?;
        if self.eat("+") {
            Ok(ProcessTerm::alt(left, self.term()?))
        } else {
            Ok(left)
        }
    }

    fn par(&mut self) -> Result<ProcessTerm> {
        let left = self.seq()?;
        if self.eat("||") {
            Ok(ProcessTerm::par(left, self.par()?))
        } else {
            Ok(left)
        }
    }

    fn seq(&mut self) -> Result<ProcessTerm> {
        let left = self.primary()?;
        if self.eat(".") {
            Ok(ProcessTerm::seq(left, self.seq()?))
        } else {
            Ok(left)
        }
    }

    fn primary(&mut self) -> Result<ProcessTerm> {
        match self.peek().clone() {
            Tok::Sym("(") => {
                self.next();
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Tok::Ident(k) if k == "delta" => {
                self.next();
                Ok(ProcessTerm::Delta)
            }
            Tok::Ident(k) if k == "tau" => Ok(ProcessTerm::act(self.multi_action()?)),
            Tok::Ident(k) if k == "lmerge" || k == "sync" => {
                self.next();
                self.expect("(")?;
                let p = self.term()?;
                self.expect(",")?;
                let q = self.term()?;
                self.expect(")")?;
                Ok(if k == "lmerge" {
                    ProcessTerm::left_merge(p, q)
                } else {
                    ProcessTerm::sync(p, q)
                })
            }
            Tok::Ident(k) if ["allow", "block", "rename", "comm", "hide"].contains(&k.as_str()) => {
                self.next();
                self.unary(&k)
            }
            Tok::Ident(s) | Tok::Quoted(s) if self.proc_names.contains(&s) => {
                self.next();
                if self.at("|") {
                    return Err(self.error_here("a process reference cannot be part of a multi-action"));
                }
                Ok(ProcessTerm::Ref(ProcName::quoted(&s)?))
            }
            Tok::Ident(_) | Tok::Quoted(_) => Ok(ProcessTerm::act(self.multi_action()?)),
            _ => Err(self.unexpected("a process term")),
        }
    }

    fn braced_list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect("{")?;
        let mut out = Vec::new();
        if !self.eat("}") {
            loop {
                out.push(item(self)?);
                if self.eat("}") {
                    break;
                }
                self.expect(",")?;
            }
        }
        Ok(out)
    }

    fn unary(&mut self, kind: &str) -> Result<ProcessTerm> {
        let make: Box<dyn FnOnce(ProcessTerm) -> ProcessTerm> = match kind {
            "allow" => {
                let v: AllowSet = self.braced_list(Self::multi_action)?.into_iter().collect();
                Box::new(move |p| ProcessTerm::allow(v, p))
            }
            "block" | "hide" => {
                let s: ActionSet = self.braced_list(Self::action)?.into_iter().collect();
                if kind == "block" {
                    Box::new(move |p| ProcessTerm::block(s, p))
                } else {
                    Box::new(move |p| ProcessTerm::hide(s, p))
                }
            }
            "rename" => {
                let pairs = self.braced_list(|p| {
                    let from = p.action()?;
                    p.expect("->")?;
                    Ok((from, p.action()?))
                })?;
                let mut r = RenameMap::new();
                for (from, to) in pairs {
                    if r.insert(from.clone(), to).is_some() {
                        return Err(Error::RenameNotFunction(from.to_string()));
                    }
                }
                Box::new(move |p| ProcessTerm::rename(r, p))
            }
            "comm" => {
                let rules = self.braced_list(|p| {
                    let lhs = p.multi_action()?;
                    p.expect("->")?;
                    let rhs = p.action()?;
                    CommRule::new(lhs, rhs)
                })?;
                let c: CommSet = rules.into_iter().collect();
                Box::new(move |p| ProcessTerm::comm(c, p))
            }
            _ => unreachable!(),
        };
        self.expect("(")?;
        let p = self.term()?;
        self.expect(")")?;
        Ok(make(p))
    }
}

fn defined_names(toks: &[Token]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut at_start = true;
    for (i, t) in toks.iter().enumerate() {
        if at_start {
            if let Tok::Ident(s) | Tok::Quoted(s) = &t.tok {
                if matches!(toks.get(i + 1).map(|t| &t.tok), Some(Tok::Sym("="))) {
                    out.insert(s.clone());
                }
            }
        }
        at_start = matches!(t.tok, Tok::Sym(";"));
    }
    out
}

/// Parses and validates a specification; the first definition is the root.
pub fn parse(text: &str) -> Result<Specification> {
    let toks = tokenize(text)?;
    let proc_names = defined_names(&toks);
    let mut parser = Parser {
        toks,
        pos: 0,
        proc_names,
    };
    parser.spec()
}

/// Parses a single term against the process names of `spec`.
pub fn parse_term(text: &str, proc_names: &BTreeSet<String>) -> Result<ProcessTerm> {
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
        proc_names: proc_names.clone(),
    };
    let t = parser.term()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    Ok(t)
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_identifier(name) && !KEYWORDS.contains(&name) {
        f.write_str(name)
    } else {
        write!(f, "`{name}`")
    }
}

struct NameDisplay<'a>(&'a str);

impl fmt::Display for NameDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_name(f, self.0)
    }
}

fn write_multi_action(f: &mut fmt::Formatter<'_>, alpha: &MultiAction) -> fmt::Result {
    if alpha.is_tau() {
        return f.write_str("tau");
    }
    for (i, a) in alpha.actions().iter().enumerate() {
        if i > 0 {
            f.write_str("|")?;
        }
        write_name(f, a.name())?;
    }
    Ok(())
}

fn level(p: &ProcessTerm) -> u8 {
    match p {
        ProcessTerm::Alt(..) => 1,
        ProcessTerm::Par(..) => 2,
        ProcessTerm::Seq(..) => 3,
        _ => 4,
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, p: &ProcessTerm) -> fmt::Result {
    use ProcessTerm::*;
    let binary = |f: &mut fmt::Formatter<'_>, op: &str, l: &ProcessTerm, r: &ProcessTerm, lv: u8| {
        write_child(f, l, level(l) <= lv)?;
        write!(f, " {op} ")?;
        write_child(f, r, level(r) < lv)
    };
    match p {
        Act(alpha) => write_multi_action(f, alpha),
        Delta => f.write_str("delta"),
        Ref(n) => write_name(f, n.as_str()),
        Alt(l, r) => binary(f, "+", l, r, 1),
        Par(l, r) => binary(f, "||", l, r, 2),
        Seq(l, r) => binary(f, ".", l, r, 3),
        LeftMerge(l, r) | Sync(l, r) => {
            f.write_str(if matches!(p, LeftMerge(..)) { "lmerge(" } else { "sync(" })?;
            write_term(f, l)?;
            f.write_str(", ")?;
            write_term(f, r)?;
            f.write_str(")")
        }
        Allow(v, q) => {
            f.write_str("allow{")?;
            for (i, alpha) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_multi_action(f, alpha)?;
            }
            write_operand(f, q)
        }
        Block(s, q) | Hide(s, q) => {
            f.write_str(if matches!(p, Block(..)) { "block{" } else { "hide{" })?;
            for (i, a) in s.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_name(f, a.name())?;
            }
            write_operand(f, q)
        }
        Rename(r, q) => {
            f.write_str("rename{")?;
            for (i, (a, b)) in r.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}->{}", NameDisplay(a.name()), NameDisplay(b.name()))?;
            }
            write_operand(f, q)
        }
        Comm(c, q) => {
            f.write_str("comm{")?;
            for (i, rule) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write_multi_action(f, rule.lhs())?;
                write!(f, "->{}", NameDisplay(rule.rhs().name()))?;
            }
            write_operand(f, q)
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, q: &ProcessTerm) -> fmt::Result {
    f.write_str("}(")?;
    write_term(f, q)?;
    f.write_str(")")
}

fn write_child(f: &mut fmt::Formatter<'_>, p: &ProcessTerm, parens: bool) -> fmt::Result {
    if parens {
        f.write_str("(")?;
        write_term(f, p)?;
        f.write_str(")")
    } else {
        write_term(f, p)
    }
}

impl fmt::Display for ProcessTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self)
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_name(f, self.name.as_str())?;
        write!(f, " = {};", self.body)
    }
}

/// Root definition first, the rest ordered by name; one per line.
impl fmt::Display for Specification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.root_definition())?;
        for (name, def) in self.definitions() {
            if name != self.root() {
                writeln!(f, "{def}")?;
            }
        }
        Ok(())
    }
}

pub fn format(spec: &Specification) -> String {
    spec.to_string()
}

/// Collects the process names of `spec` (for [`parse_term`]).
pub fn process_names(spec: &Specification) -> BTreeSet<String> {
    spec.definitions().keys().map(|n| n.as_str().to_string()).collect()
}
