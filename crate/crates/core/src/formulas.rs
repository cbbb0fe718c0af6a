//! MSO₁/MSO₂ formulas with global-constraint atoms: AST, parser, printer and
//! pre-evaluations.
//!
//! Text syntax: atoms `E(x,y)`, `I(x,e)`, `x = y`, `x in X`, `x in C1`, `R1`,
//! `true`, `false`; connectives `~ & | -> <->` (tightest first); quantifiers
//! `exists <binder>. <f>` and `forall <binder>. <f>` whose bodies extend as far
//! right as possible. A bare lowercase binder is a vertex, a bare uppercase one
//! a vertex set; `e:y` binds an edge, `F:Y` an edge set, and `v:`/`V:` spell out
//! the vertex sorts. Colors `Cn` and globals `Rn` are 1-based in text and
//! 0-based in the AST.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sort {
    Vertex,
    VertexSet,
    Edge,
    EdgeSet,
}

impl Sort {
    pub fn is_set(self) -> bool {
        matches!(self, Sort::VertexSet | Sort::EdgeSet)
    }

    pub fn is_edge_sorted(self) -> bool {
        matches!(self, Sort::Edge | Sort::EdgeSet)
    }

    /// Element sort of a set sort.
    pub fn element(self) -> Sort {
        match self {
            Sort::VertexSet => Sort::Vertex,
            Sort::EdgeSet => Sort::Edge,
            other => other,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Vertex => "vertex",
            Sort::VertexSet => "vertex-set",
            Sort::Edge => "edge",
            Sort::EdgeSet => "edge-set",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Var {
    pub name: String,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: impl Into<String>, sort: Sort) -> Self {
        Var {
            name: name.into(),
            sort,
        }
    }

    pub fn vertex(name: impl Into<String>) -> Self {
        Self::new(name, Sort::Vertex)
    }

    pub fn vertex_set(name: impl Into<String>) -> Self {
        Self::new(name, Sort::VertexSet)
    }

    pub fn edge(name: impl Into<String>) -> Self {
        Self::new(name, Sort::Edge)
    }

    pub fn edge_set(name: impl Into<String>) -> Self {
        Self::new(name, Sort::EdgeSet)
    }
}

/// Formula AST. Variables are referenced by name; the innermost binder wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `E(x,y)`: adjacency of two vertices.
    Adj(String, String),
    /// `I(x,y)`: incidence of a vertex and an edge, in either order.
    Incident(String, String),
    Equal(String, String),
    InSet(String, String),
    /// `x in C_{i+1}`.
    InColor(String, usize),
    /// The atom `R_{i+1}`.
    Global(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn adj(x: &str, y: &str) -> Formula {
        Formula::Adj(x.into(), y.into())
    }

    pub fn in_set(x: &str, set: &str) -> Formula {
        Formula::InSet(x.into(), set.into())
    }

    pub fn in_color(x: &str, color: usize) -> Formula {
        Formula::InColor(x.into(), color)
    }

    /// Conjunction of all items, `true` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Number of quantifier nodes, vertex and set quantifiers alike.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Formula::Not(a) => a.quantifier_count(),
            Formula::And(a, b) | Formula::Or(a, b) => a.quantifier_count() + b.quantifier_count(),
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.quantifier_count(),
            _ => 0,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }

    /// Largest global index plus one, or 0 when there are no global atoms.
    pub fn global_arity(&self) -> usize {
        match self {
            Formula::Global(i) => i + 1,
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.global_arity(),
            Formula::And(a, b) | Formula::Or(a, b) => a.global_arity().max(b.global_arity()),
            _ => 0,
        }
    }

    /// Largest color index plus one.
    pub fn color_arity(&self) -> usize {
        match self {
            Formula::InColor(_, c) => c + 1,
            Formula::Not(a) | Formula::Exists(_, a) | Formula::Forall(_, a) => a.color_arity(),
            Formula::And(a, b) | Formula::Or(a, b) => a.color_arity().max(b.color_arity()),
            _ => 0,
        }
    }

    /// True if the formula uses incidence or binds an edge-sorted variable.
    pub fn uses_edge_sorts(&self) -> bool {
        match self {
            Formula::Incident(..) => true,
            Formula::Not(a) => a.uses_edge_sorts(),
            Formula::And(a, b) | Formula::Or(a, b) => a.uses_edge_sorts() || b.uses_edge_sorts(),
            Formula::Exists(v, a) | Formula::Forall(v, a) => {
                v.sort.is_edge_sorted() || a.uses_edge_sorts()
            }
            _ => false,
        }
    }

    pub fn has_globals(&self) -> bool {
        self.global_arity() > 0
    }

    /// Replaces each `R_i` by its truth value under `gamma`.
    pub fn pre_evaluate(&self, gamma: &PreEvaluation) -> Result<Formula, FormulaError> {
        Ok(match self {
            Formula::Global(i) => match gamma.0.get(*i) {
                Some(true) => Formula::True,
                Some(false) => Formula::False,
                None => {
                    return Err(FormulaError::GlobalOutOfRange {
                        index: i + 1,
                        arity: gamma.len(),
                    })
                }
            },
            Formula::Not(a) => Formula::not(a.pre_evaluate(gamma)?),
            Formula::And(a, b) => Formula::and(a.pre_evaluate(gamma)?, b.pre_evaluate(gamma)?),
            Formula::Or(a, b) => Formula::or(a.pre_evaluate(gamma)?, b.pre_evaluate(gamma)?),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.pre_evaluate(gamma)?),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.pre_evaluate(gamma)?),
            atom => atom.clone(),
        })
    }

    /// Folds `true`/`false` through connectives and set quantifiers. Element
    /// quantifiers stay, since their domain may be empty.
    pub fn simplify(&self) -> Formula {
        use Formula::{And, Exists, False, Forall, Not, Or, True};
        match self {
            Not(a) => match a.simplify() {
                True => False,
                False => True,
                a => Formula::not(a),
            },
            And(a, b) => match (a.simplify(), b.simplify()) {
                (False, _) | (_, False) => False,
                (True, x) | (x, True) => x,
                (a, b) => Formula::and(a, b),
            },
            Or(a, b) => match (a.simplify(), b.simplify()) {
                (True, _) | (_, True) => True,
                (False, x) | (x, False) => x,
                (a, b) => Formula::or(a, b),
            },
            Exists(v, a) | Forall(v, a) => {
                let body = a.simplify();
                if v.sort.is_set() && matches!(body, True | False) {
                    return body;
                }
                if matches!(self, Exists(..)) {
                    Formula::exists(v.clone(), body)
                } else {
                    Formula::forall(v.clone(), body)
                }
            }
            atom => atom.clone(),
        }
    }

    /// Checks that every variable is bound or free and that atoms are well sorted.
    pub fn check(&self, free: &[Var]) -> Result<(), FormulaError> {
        let mut scope: Vec<Var> = free.to_vec();
        check_rec(self, &mut scope)
    }
}

fn lookup<'a>(scope: &'a [Var], name: &str) -> Result<&'a Var, FormulaError> {
    scope
        .iter()
        .rev()
        .find(|v| v.name == name)
        .ok_or_else(|| FormulaError::Unbound {
            name: name.to_string(),
            pos: None,
        })
}

fn mismatch(atom: &str, detail: String) -> FormulaError {
    FormulaError::SortMismatch {
        atom: atom.to_string(),
        detail,
        pos: None,
    }
}

fn check_rec(f: &Formula, scope: &mut Vec<Var>) -> Result<(), FormulaError> {
    match f {
        Formula::True | Formula::False | Formula::Global(_) => Ok(()),
        Formula::Adj(x, y) => {
            let (a, b) = (lookup(scope, x)?.sort, lookup(scope, y)?.sort);
            if a != Sort::Vertex || b != Sort::Vertex {
                return Err(mismatch("E", format!("expected two vertices, got {a} and {b}")));
            }
            Ok(())
        }
        Formula::Incident(x, y) => {
            let (a, b) = (lookup(scope, x)?.sort, lookup(scope, y)?.sort);
            let ok = matches!(
                (a, b),
                (Sort::Vertex, Sort::Edge) | (Sort::Edge, Sort::Vertex)
            );
            if !ok {
                return Err(mismatch("I", format!("expected a vertex and an edge, got {a} and {b}")));
            }
            Ok(())
        }
        Formula::Equal(x, y) => {
            let (a, b) = (lookup(scope, x)?.sort, lookup(scope, y)?.sort);
            if a != b || a.is_set() {
                return Err(mismatch("=", format!("cannot compare {a} with {b}")));
            }
            Ok(())
        }
        Formula::InSet(x, set) => {
            let (a, b) = (lookup(scope, x)?.sort, lookup(scope, set)?.sort);
            if !b.is_set() || b.element() != a {
                return Err(mismatch("in", format!("{a} cannot be a member of {b}")));
            }
            Ok(())
        }
        Formula::InColor(x, _) => {
            let a = lookup(scope, x)?.sort;
            if a != Sort::Vertex {
                return Err(mismatch("in", format!("only vertices carry colors, got {a}")));
            }
            Ok(())
        }
        Formula::Not(a) => check_rec(a, scope),
        Formula::And(a, b) | Formula::Or(a, b) => {
            check_rec(a, scope)?;
            check_rec(b, scope)
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            scope.push(v.clone());
            let r = check_rec(body, scope);
            scope.pop();
            r
        }
    }
}

/// A formula with its ordered free set variables `X_1..X_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsoFormula {
    pub free: Vec<Var>,
    pub body: Formula,
}

impl MsoFormula {
    pub fn new(free: Vec<Var>, body: Formula) -> Result<Self, FormulaError> {
        validate_free(&free)?;
        body.check(&free)?;
        Ok(MsoFormula { free, body })
    }

    pub fn closed(body: Formula) -> Result<Self, FormulaError> {
        Self::new(vec![], body)
    }

    pub fn arity(&self) -> usize {
        self.free.len()
    }

    pub fn quantifier_count(&self) -> usize {
        self.body.quantifier_count()
    }

    pub fn is_mso2(&self) -> bool {
        self.body.uses_edge_sorts() || self.free.iter().any(|v| v.sort.is_edge_sorted())
    }

    pub fn free_index(&self, name: &str) -> Option<usize> {
        self.free.iter().position(|v| v.name == name)
    }
}

impl fmt::Display for MsoFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.body)
    }
}

fn validate_free(free: &[Var]) -> Result<(), FormulaError> {
    for (i, v) in free.iter().enumerate() {
        if !v.sort.is_set() {
            return Err(FormulaError::FreeVertexVariable(v.name.clone()));
        }
        if reserved(&v.name) || !is_identifier(&v.name) {
            return Err(FormulaError::Reserved {
                name: v.name.clone(),
                pos: None,
            });
        }
        if free[..i].iter().any(|w| w.name == v.name) {
            return Err(FormulaError::DuplicateFree(v.name.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound variable `{name}`{}", at(*pos))]
    Unbound { name: String, pos: Option<usize> },
    #[error("sort mismatch in `{atom}`{}: {detail}", at(*pos))]
    SortMismatch {
        atom: String,
        detail: String,
        pos: Option<usize>,
    },
    #[error("free variable `{0}` is not a set variable; encode it as a singleton set")]
    FreeVertexVariable(String),
    #[error("`{name}` is reserved{}", at(*pos))]
    Reserved { name: String, pos: Option<usize> },
    #[error("free variable `{0}` declared twice")]
    DuplicateFree(String),
    #[error("global atom R{index} out of range (γ has {arity} entries)")]
    GlobalOutOfRange { index: usize, arity: usize },
}

fn at(pos: Option<usize>) -> String {
    pos.map(|p| format!(" at {p}")).unwrap_or_default()
}

impl FormulaError {
    fn with_pos(self, p: usize) -> Self {
        match self {
            FormulaError::Unbound { name, pos: None } => FormulaError::Unbound { name, pos: Some(p) },
            FormulaError::SortMismatch {
                atom,
                detail,
                pos: None,
            } => FormulaError::SortMismatch {
                atom,
                detail,
                pos: Some(p),
            },
            other => other,
        }
    }
}

/// A truth value for each global atom `R_1..R_g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreEvaluation(pub Vec<bool>);

impl PreEvaluation {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }
}

/// All `2^g` pre-evaluations in binary counting order, `R_1` least significant.
pub fn enumerate_pre_evaluations(g: usize) -> Vec<PreEvaluation> {
    assert!(g < 32, "too many global constraints");
    (0u32..1 << g)
        .map(|bits| PreEvaluation((0..g).map(|i| bits & (1 << i) != 0).collect()))
        .collect()
}

pub fn parse(text: &str, free: &[Var]) -> Result<MsoFormula, FormulaError> {
    validate_free(free)?;
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        at: 0,
        scope: free.to_vec(),
        end: text.len(),
    };
    let body = p.formula()?;
    if p.at < p.tokens.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(MsoFormula {
        free: free.to_vec(),
        body,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Tilde,
    Amp,
    Bar,
    Arrow,
    Iff,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, FormulaError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b':' => Tok::Colon,
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'=' => Tok::Eq,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 2;
                Tok::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(FormulaError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

const KEYWORDS: [&str; 7] = ["exists", "forall", "in", "true", "false", "E", "I"];

fn numbered(name: &str, prefix: char) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn reserved(name: &str) -> bool {
    KEYWORDS.contains(&name) || numbered(name, 'C').is_some() || numbered(name, 'R').is_some()
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    at: usize,
    scope: Vec<Var>,
    end: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.tokens.get(self.at).map_or(self.end, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.at).map(|t| &t.0)
    }

    fn error(&self, msg: &str) -> FormulaError {
        FormulaError::Syntax {
            pos: self.pos(),
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), FormulaError> {
        match self.tokens.get(self.at) {
            Some((Tok::Ident(s), p)) => {
                let out = (s.clone(), *p);
                self.at += 1;
                Ok(out)
            }
            _ => Err(self.error("expected identifier")),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.implication()?;
        while self.eat(&Tok::Iff) {
            let right = self.implication()?;
            left = Formula::or(
                Formula::and(left.clone(), right.clone()),
                Formula::and(Formula::not(left), Formula::not(right)),
            );
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            return Ok(Formula::or(Formula::not(left), right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            left = Formula::or(left, self.conjunction()?);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut left = self.unary()?;
        while self.eat(&Tok::Amp) {
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        if self.eat(&Tok::Tilde) {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat(&Tok::LParen) {
            let inner = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(inner);
        }
        match self.peek() {
            Some(Tok::Ident(k)) if k == "exists" || k == "forall" => {
                let exists = k == "exists";
                self.at += 1;
                let var = self.binder()?;
                self.expect(Tok::Dot, "`.` after binder")?;
                self.scope.push(var.clone());
                let body = self.formula();
                self.scope.pop();
                let body = body?;
                Ok(if exists {
                    Formula::exists(var, body)
                } else {
                    Formula::forall(var, body)
                })
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => Err(self.error("expected formula")),
        }
    }

    fn binder(&mut self) -> Result<Var, FormulaError> {
        let (first, pos) = self.ident()?;
        let (name, pos, sort) = if self.eat(&Tok::Colon) {
            let sort = match first.as_str() {
                "v" => Sort::Vertex,
                "V" => Sort::VertexSet,
                "e" => Sort::Edge,
                "F" => Sort::EdgeSet,
                _ => {
                    return Err(FormulaError::Syntax {
                        pos,
                        msg: format!("unknown sort prefix `{first}`"),
                    })
                }
            };
            let (name, pos) = self.ident()?;
            (name, pos, sort)
        } else {
            let sort = if first.starts_with(|c: char| c.is_ascii_uppercase()) {
                Sort::VertexSet
            } else {
                Sort::Vertex
            };
            (first, pos, sort)
        };
        if reserved(&name) {
            return Err(FormulaError::Reserved {
                name,
                pos: Some(pos),
            });
        }
        Ok(Var { name, sort })
    }

    fn atom(&mut self) -> Result<Formula, FormulaError> {
        let (name, pos) = self.ident()?;
        match name.as_str() {
            "true" => return Ok(Formula::True),
            "false" => return Ok(Formula::False),
            "E" | "I" if self.peek() == Some(&Tok::LParen) => {
                self.at += 1;
                let (x, _) = self.ident()?;
                self.expect(Tok::Comma, "`,`")?;
                let (y, _) = self.ident()?;
                self.expect(Tok::RParen, "`)`")?;
                let f = if name == "E" {
                    Formula::Adj(x, y)
                } else {
                    Formula::Incident(x, y)
                };
                return self.checked(f, pos);
            }
            _ => {}
        }
        if let Some(i) = numbered(&name, 'R') {
            if i == 0 {
                return Err(FormulaError::Syntax {
                    pos,
                    msg: "global atoms are numbered from R1".into(),
                });
            }
            return Ok(Formula::Global(i - 1));
        }
        if reserved(&name) {
            return Err(FormulaError::Reserved {
                name,
                pos: Some(pos),
            });
        }
        if self.eat(&Tok::Eq) {
            let (y, _) = self.ident()?;
            return self.checked(Formula::Equal(name, y), pos);
        }
        if matches!(self.peek(), Some(Tok::Ident(k)) if k == "in") {
            self.at += 1;
            let (set, set_pos) = self.ident()?;
            if let Some(c) = numbered(&set, 'C') {
                if c == 0 {
                    return Err(FormulaError::Syntax {
                        pos: set_pos,
                        msg: "colors are numbered from C1".into(),
                    });
                }
                return self.checked(Formula::InColor(name, c - 1), pos);
            }
            return self.checked(Formula::InSet(name, set), pos);
        }
        Err(self.error("expected `=` or `in`"))
    }

    fn checked(&self, f: Formula, pos: usize) -> Result<Formula, FormulaError> {
        check_rec(&f, &mut self.scope.clone()).map_err(|e| e.with_pos(pos))?;
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

/// Deterministic printer; `parse` of the output rebuilds the same AST.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn binder_text(v: &Var) -> String {
    let upper = v.name.starts_with(|c: char| c.is_ascii_uppercase());
    match v.sort {
        Sort::Vertex if !upper => v.name.clone(),
        Sort::Vertex => format!("v:{}", v.name),
        Sort::VertexSet if upper => v.name.clone(),
        Sort::VertexSet => format!("V:{}", v.name),
        Sort::Edge => format!("e:{}", v.name),
        Sort::EdgeSet => format!("F:{}", v.name),
    }
}

fn is_quantifier(f: &Formula) -> bool {
    matches!(f, Formula::Exists(..) | Formula::Forall(..))
}

fn write_operand(f: &Formula, parens: bool, out: &mut String) {
    if parens || is_quantifier(f) {
        out.push('(');
        write_formula(f, out);
        out.push(')');
    } else {
        write_formula(f, out);
    }
}

fn write_formula(f: &Formula, out: &mut String) {
    use std::fmt::Write;
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Adj(x, y) => {
            let _ = write!(out, "E({x},{y})");
        }
        Formula::Incident(x, y) => {
            let _ = write!(out, "I({x},{y})");
        }
        Formula::Equal(x, y) => {
            let _ = write!(out, "{x} = {y}");
        }
        Formula::InSet(x, s) => {
            let _ = write!(out, "{x} in {s}");
        }
        Formula::InColor(x, c) => {
            let _ = write!(out, "{x} in C{}", c + 1);
        }
        Formula::Global(i) => {
            let _ = write!(out, "R{}", i + 1);
        }
        Formula::Not(a) => {
            out.push('~');
            let binary = matches!(**a, Formula::And(..) | Formula::Or(..));
            write_operand(a, binary, out);
        }
        Formula::And(a, b) => {
            write_operand(a, matches!(**a, Formula::Or(..)), out);
            out.push_str(" & ");
            write_operand(b, matches!(**b, Formula::Or(..) | Formula::And(..)), out);
        }
        Formula::Or(a, b) => {
            write_operand(a, false, out);
            out.push_str(" | ");
            write_operand(b, matches!(**b, Formula::Or(..)), out);
        }
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let q = if matches!(f, Formula::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            let _ = write!(out, "{q} {}. ", binder_text(v));
            write_formula(body, out);
        }
    }
}

/// Fresh names that avoid every name already used in `f` or `taken`.
pub(crate) struct FreshNames {
    used: HashSet<String>,
    next: usize,
}

impl FreshNames {
    pub fn new(f: &Formula, taken: &[Var]) -> Self {
        let mut used = HashSet::new();
        collect_names(f, &mut used);
        for v in taken {
            used.insert(v.name.clone());
        }
        FreshNames { used, next: 0 }
    }

    pub fn fresh(&mut self, stem: &str) -> String {
        loop {
            let name = format!("{stem}{}", self.next);
            self.next += 1;
            if !self.used.contains(&name) && !reserved(&name) {
                self.used.insert(name.clone());
                return name;
            }
        }
    }
}

fn collect_names(f: &Formula, out: &mut HashSet<String>) {
    match f {
        Formula::Adj(x, y) | Formula::Incident(x, y) | Formula::Equal(x, y) | Formula::InSet(x, y) => {
            out.insert(x.clone());
            out.insert(y.clone());
        }
        Formula::InColor(x, _) => {
            out.insert(x.clone());
        }
        Formula::Not(a) => collect_names(a, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Formula::Exists(v, a) | Formula::Forall(v, a) => {
            out.insert(v.name.clone());
            collect_names(a, out);
        }
        _ => {}
    }
}
