//! The restricted norm language: atoms, literals, conditions and the three
//! norm kinds, together with a line-oriented parser and a canonical printer.
//!
//! Surface grammar, one norm per line:
//!
//! ```text
//! O(<lit>)            P(<lit>)            L(<lit>)
//! O(<lit> IF <lit> [AND <lit>]...)       (same for P and L)
//! ATOMS <name> [, <name>]...             declares atoms without norms
//! <lit> := name | not name
//! ```
//!
//! `#` starts a comment and blank lines are ignored. Unconditional norms get
//! an empty (always true) condition.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Words that can never be used as atom names.
pub const RESERVED_WORDS: &[&str] = &["IF", "AND", "OR", "or", "not", "NOT", "ATOMS"];

/// An atomic proposition. Names start with an ASCII letter followed by
/// letters, digits or underscores; they are case-sensitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Atom(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("atom name is empty")]
    Empty,
    #[error("invalid atom name `{0}`")]
    Invalid(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
}

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, AtomError> {
        let name = name.into();
        let mut chars = name.chars();
        match chars.next() {
            None => return Err(AtomError::Empty),
            Some(c) if !c.is_ascii_alphabetic() => return Err(AtomError::Invalid(name)),
            Some(_) => {}
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(AtomError::Invalid(name));
        }
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(AtomError::Reserved(name));
        }
        Ok(Atom(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An atom or its negation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn pos(atom: Atom) -> Self {
        Literal::new(atom, true)
    }

    pub fn neg(atom: Atom) -> Self {
        Literal::new(atom, false)
    }

    pub fn negate(&self) -> Literal {
        Literal::new(self.atom.clone(), !self.positive)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "not {}", self.atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("condition contains both `{0}` and `not {0}`")]
pub struct InconsistentCondition(pub Atom);

/// A consistent conjunction of literals. The empty conjunction is the always
/// true condition. Literal order is kept as written; use [`Condition::same_set`]
/// for order-insensitive comparison.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Condition {
    literals: Vec<Literal>,
}

impl Condition {
    pub fn top() -> Self {
        Condition::default()
    }

    /// Builds a condition, dropping repeated literals and rejecting `p AND not p`.
    pub fn new(literals: impl IntoIterator<Item = Literal>) -> Result<Self, InconsistentCondition> {
        let mut out: Vec<Literal> = Vec::new();
        for lit in literals {
            match out.iter().find(|l| l.atom == lit.atom) {
                Some(existing) if existing.positive == lit.positive => {}
                Some(_) => return Err(InconsistentCondition(lit.atom)),
                None => out.push(lit),
            }
        }
        Ok(Condition { literals: out })
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn is_top(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// The value this condition forces on `atom`, if any.
    pub fn value_of(&self, atom: &Atom) -> Option<bool> {
        self.literals.iter().find(|l| &l.atom == atom).map(|l| l.positive)
    }

    pub fn mentions(&self, atom: &Atom) -> bool {
        self.value_of(atom).is_some()
    }

    pub fn contains(&self, lit: &Literal) -> bool {
        self.value_of(&lit.atom) == Some(lit.positive)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.literals.iter().map(|l| &l.atom)
    }

    pub fn is_consistent_with(&self, other: &Condition) -> bool {
        other
            .literals
            .iter()
            .all(|l| self.value_of(&l.atom).is_none_or(|v| v == l.positive))
    }

    /// Conjunction of both conditions, or `None` when they clash.
    pub fn union(&self, other: &Condition) -> Option<Condition> {
        Condition::new(self.literals.iter().chain(&other.literals).cloned()).ok()
    }

    pub fn same_set(&self, other: &Condition) -> bool {
        self.len() == other.len() && self.literals.iter().all(|l| other.contains(l))
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("TRUE");
        }
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" AND ")?;
            }
            write!(f, "{lit}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Obligation,
    Permission,
    /// Bilateral permission: both the consequent and its negation are permitted.
    Liberty,
}

impl NormKind {
    pub fn letter(self) -> char {
        match self {
            NormKind::Obligation => 'O',
            NormKind::Permission => 'P',
            NormKind::Liberty => 'L',
        }
    }

    pub fn from_letter(s: &str) -> Option<Self> {
        match s {
            "O" => Some(NormKind::Obligation),
            "P" => Some(NormKind::Permission),
            "L" => Some(NormKind::Liberty),
            _ => None,
        }
    }
}

/// A conditional norm: under `condition`, `consequent` is obligatory,
/// permitted or at liberty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Norm {
    pub kind: NormKind,
    pub condition: Condition,
    pub consequent: Literal,
}

impl Norm {
    pub fn new(kind: NormKind, condition: Condition, consequent: Literal) -> Self {
        Norm { kind, condition, consequent }
    }

    pub fn obligation(condition: Condition, consequent: Literal) -> Self {
        Norm::new(NormKind::Obligation, condition, consequent)
    }

    pub fn permission(condition: Condition, consequent: Literal) -> Self {
        Norm::new(NormKind::Permission, condition, consequent)
    }

    pub fn liberty(condition: Condition, consequent: Literal) -> Self {
        Norm::new(NormKind::Liberty, condition, consequent)
    }

    /// Same norm up to the order of condition literals.
    pub fn equivalent(&self, other: &Norm) -> bool {
        self.kind == other.kind
            && self.consequent == other.consequent
            && self.condition.same_set(&other.condition)
    }

    pub fn is_self_conditioned(&self) -> bool {
        self.condition.mentions(&self.consequent.atom)
    }

    /// Atoms in textual order: consequent first, then condition literals.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        std::iter::once(&self.consequent.atom).chain(self.condition.atoms())
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_norm(self))
    }
}

/// A norm as written: the unconditional forms carry no condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceNorm {
    pub kind: NormKind,
    pub consequent: Literal,
    pub condition: Option<Condition>,
}

impl From<Norm> for SurfaceNorm {
    fn from(n: Norm) -> Self {
        SurfaceNorm { kind: n.kind, consequent: n.consequent, condition: Some(n.condition) }
    }
}

/// Lowers a surface norm to its conditional form. `O(p)` becomes `O(p IF TRUE)`,
/// and liberties stay a single node (read as `P(p IF c) AND P(not p IF c)`).
pub fn desugar(norm: SurfaceNorm) -> Norm {
    Norm::new(norm.kind, norm.condition.unwrap_or_default(), norm.consequent)
}

/// Canonical text for a norm, accepted back by [`parse_norms`].
pub fn format_norm(norm: &Norm) -> String {
    if norm.condition.is_top() {
        format!("{}({})", norm.kind.letter(), norm.consequent)
    } else {
        format!("{}({} IF {})", norm.kind.letter(), norm.consequent, norm.condition)
    }
}

/// Error returned when building a [`NormSet`] programmatically.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormSetError {
    #[error("atom `{0}` is listed twice")]
    DuplicateAtom(Atom),
    #[error("norm {index} mentions undeclared atom `{atom}`")]
    UndeclaredAtom { index: usize, atom: Atom },
    #[error("norm {0} conditions on its own consequent")]
    SelfConditioning(usize),
}

/// An ordered, duplicate-free list of norms plus the atoms they range over.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct NormSet {
    atoms: Vec<Atom>,
    norms: Vec<Norm>,
}

impl NormSet {
    pub fn new() -> Self {
        NormSet::default()
    }

    /// Atoms are taken in order of first appearance. Duplicates are dropped.
    pub fn from_norms(norms: impl IntoIterator<Item = Norm>) -> Result<Self, NormSetError> {
        let mut set = NormSet::new();
        for norm in norms {
            set.push(norm)?;
        }
        Ok(set)
    }

    /// Uses `atoms` as the variable order; every atom mentioned by a norm must
    /// be among them.
    pub fn with_atoms(
        atoms: impl IntoIterator<Item = Atom>,
        norms: impl IntoIterator<Item = Norm>,
    ) -> Result<Self, NormSetError> {
        let mut set = NormSet::new();
        for atom in atoms {
            if set.atoms.contains(&atom) {
                return Err(NormSetError::DuplicateAtom(atom));
            }
            set.atoms.push(atom);
        }
        for norm in norms {
            if let Some(atom) = norm.atoms().find(|a| !set.atoms.contains(a)) {
                return Err(NormSetError::UndeclaredAtom { index: set.norms.len(), atom: atom.clone() });
            }
            set.push(norm)?;
        }
        Ok(set)
    }

    pub fn declare_atom(&mut self, atom: Atom) {
        if !self.atoms.contains(&atom) {
            self.atoms.push(atom);
        }
    }

    /// Appends a norm, registering new atoms. Returns `Ok(false)` when an
    /// equivalent norm is already present.
    pub fn push(&mut self, norm: Norm) -> Result<bool, NormSetError> {
        if norm.is_self_conditioned() {
            return Err(NormSetError::SelfConditioning(self.norms.len()));
        }
        if self.norms.iter().any(|n| n.equivalent(&norm)) {
            return Ok(false);
        }
        for atom in norm.atoms() {
            if !self.atoms.contains(atom) {
                self.atoms.push(atom.clone());
            }
        }
        self.norms.push(norm);
        Ok(true)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn norms(&self) -> &[Norm] {
        &self.norms
    }

    pub fn atom_index(&self, atom: &Atom) -> Option<usize> {
        self.atoms.iter().position(|a| a == atom)
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    fn derived_atom_order(&self) -> Vec<&Atom> {
        let mut order: Vec<&Atom> = Vec::new();
        for atom in self.norms.iter().flat_map(Norm::atoms) {
            if !order.contains(&atom) {
                order.push(atom);
            }
        }
        order
    }
}

/// Canonical text for a whole norm set. An `ATOMS` header is emitted only
/// when the atom order is not already implied by the norms.
pub fn format_norm_set(set: &NormSet) -> String {
    let mut out = String::new();
    let derived = set.derived_atom_order();
    if derived.len() != set.atoms.len() || derived.iter().zip(&set.atoms).any(|(a, b)| *a != b) {
        out.push_str("ATOMS ");
        let names: Vec<&str> = set.atoms.iter().map(Atom::as_str).collect();
        out.push_str(&names.join(", "));
        out.push('\n');
    }
    for norm in &set.norms {
        out.push_str(&format_norm(norm));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: &'static str, found: String },
    #[error("disjunction is not allowed in norms")]
    Disjunction,
    #[error("consequent must be a single literal")]
    NonLiteralConsequent,
    #[error("deontic operators cannot be nested")]
    NestedOperator,
    #[error("condition contains both `{0}` and `not {0}`")]
    InconsistentCondition(String),
    #[error("consequent atom `{0}` also appears in its own condition")]
    SelfConditioning(String),
    #[error("`|` is not supported, write `O(<consequent> IF <condition>)`")]
    PipeNotation,
    #[error("`{0}` is a reserved word")]
    ReservedWord(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParseWarning {
    /// The norm on `line` repeats the one first seen on `first_line`.
    DuplicateNorm { line: usize, first_line: usize, norm: String },
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::DuplicateNorm { line, first_line, norm } => {
                write!(f, "line {line}: duplicate of line {first_line} `{norm}` ignored")
            }
        }
    }
}

/// Parses a norm file. Duplicate norms are silently dropped; use
/// [`parse_norms_with_warnings`] to see them.
pub fn parse_norms(source: &str) -> Result<NormSet, ParseError> {
    parse_norms_with_warnings(source).map(|(set, _)| set)
}

pub fn parse_norms_with_warnings(source: &str) -> Result<(NormSet, Vec<ParseWarning>), ParseError> {
    let mut set = NormSet::new();
    let mut lines_of: Vec<usize> = Vec::new();
    let mut warnings = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let text = raw.split('#').next().unwrap_or("");
        let tokens = lex(text, line_no)?;
        if tokens.is_empty() {
            continue;
        }
        let mut parser = Parser::new(&tokens, line_no, text);
        match parser.line()? {
            Line::Atoms(atoms) => {
                for atom in atoms {
                    set.declare_atom(atom);
                }
            }
            Line::Norm(surface, column) => {
                let norm = desugar(surface);
                if norm.is_self_conditioned() {
                    return Err(ParseError {
                        line: line_no,
                        column,
                        kind: ParseErrorKind::SelfConditioning(norm.consequent.atom.to_string()),
                    });
                }
                if let Some(i) = set.norms.iter().position(|n| n.equivalent(&norm)) {
                    warnings.push(ParseWarning::DuplicateNorm {
                        line: line_no,
                        first_line: lines_of[i],
                        norm: format_norm(&norm),
                    });
                    continue;
                }
                set.push(norm).expect("self-conditioning checked above");
                lines_of.push(line_no);
            }
        }
    }
    Ok((set, warnings))
}

/// Parses a single literal such as `d` or `not d`.
pub fn parse_literal(text: &str) -> Result<Literal, ParseError> {
    let tokens = lex(text, 1)?;
    let mut parser = Parser::new(&tokens, 1, text);
    let lit = parser.literal()?;
    parser.expect_end()?;
    Ok(lit)
}

/// Parses a comma-separated list of literals, e.g. `d, not f, w`.
pub fn parse_literal_list(text: &str) -> Result<Vec<Literal>, ParseError> {
    let tokens = lex(text, 1)?;
    let mut parser = Parser::new(&tokens, 1, text);
    let mut out = Vec::new();
    if parser.at_end() {
        return Ok(out);
    }
    loop {
        out.push(parser.literal()?);
        if parser.at_end() {
            return Ok(out);
        }
        parser.expect(&Tok::Comma, "`,`")?;
    }
}

/// Parses an `AND`-joined condition, e.g. `d AND not f`. Empty text is the
/// always-true condition.
pub fn parse_condition(text: &str) -> Result<Condition, ParseError> {
    let tokens = lex(text, 1)?;
    let mut parser = Parser::new(&tokens, 1, text);
    if parser.at_end() {
        return Ok(Condition::top());
    }
    let column = parser.column();
    let expr = parser.disjunction()?;
    parser.expect_end()?;
    parser.to_condition(expr, column)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Pipe,
    OrSym,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::OrSym => "`||`".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn lex(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '(' | ')' | ',' => {
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => Tok::Comma,
                };
                tokens.push(Token { tok, column });
                i += 1;
            }
            '|' => {
                if chars.get(i + 1) == Some(&'|') {
                    tokens.push(Token { tok: Tok::OrSym, column });
                    i += 2;
                } else {
                    tokens.push(Token { tok: Tok::Pipe, column });
                    i += 1;
                }
            }
            '∨' => {
                tokens.push(Token { tok: Tok::OrSym, column });
                i += 1;
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                tokens.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), column });
            }
            other => {
                return Err(ParseError { line, column, kind: ParseErrorKind::UnexpectedChar(other) })
            }
        }
    }
    Ok(tokens)
}

enum Line {
    Atoms(Vec<Atom>),
    /// Norm plus the column of its operator letter.
    Norm(SurfaceNorm, usize),
}

/// Intermediate expression: a disjunction of conjunctions of literals.
/// Only the single-disjunct case survives validation.
struct Expr {
    disjuncts: Vec<Vec<Literal>>,
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    fn new(tokens: &'a [Token], line: usize, text: &str) -> Self {
        Parser { tokens, pos: 0, line, end_column: text.chars().count() + 1 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.column(), kind }
    }

    fn error_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column, kind }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let found = self.peek().map_or_else(|| "end of line".to_string(), Tok::describe);
        match self.peek() {
            Some(Tok::Pipe) => self.error(ParseErrorKind::PipeNotation),
            Some(Tok::OrSym) => self.error(ParseErrorKind::Disjunction),
            _ => self.error(ParseErrorKind::Unexpected { expected, found }),
        }
    }

    fn expect(&mut self, tok: &Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == word)
    }

    fn line(&mut self) -> Result<Line, ParseError> {
        if self.is_keyword("ATOMS") {
            self.pos += 1;
            let mut atoms = vec![self.atom()?];
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                atoms.push(self.atom()?);
            }
            self.expect_end()?;
            return Ok(Line::Atoms(atoms));
        }
        let column = self.column();
        let kind = match self.peek() {
            Some(Tok::Ident(s)) => NormKind::from_letter(s),
            _ => None,
        };
        let Some(kind) = kind else {
            return Err(self.unexpected("`O`, `P`, `L` or `ATOMS`"));
        };
        self.pos += 1;
        self.expect(&Tok::LParen, "`(`")?;
        let consequent_column = self.column();
        let consequent = self.disjunction()?;
        let condition = if self.is_keyword("IF") {
            self.pos += 1;
            let cond_column = self.column();
            let expr = self.disjunction()?;
            Some(self.to_condition(expr, cond_column)?)
        } else {
            None
        };
        self.expect(&Tok::RParen, "`)`")?;
        self.expect_end()?;
        let consequent = self.to_literal(consequent, consequent_column)?;
        Ok(Line::Norm(SurfaceNorm { kind, consequent, condition }, column))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let atom = Atom::new(name.clone()).map_err(|e| match e {
                    AtomError::Reserved(w) => self.error(ParseErrorKind::ReservedWord(w)),
                    _ => self.unexpected("an atom name"),
                })?;
                self.pos += 1;
                Ok(atom)
            }
            _ => Err(self.unexpected("an atom name")),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let mut positive = true;
        while self.is_keyword("not") || self.is_keyword("NOT") {
            self.pos += 1;
            positive = !positive;
        }
        if let Some(Tok::Ident(s)) = self.peek() {
            if NormKind::from_letter(s).is_some() && self.peek_at(1) == Some(&Tok::LParen) {
                return Err(self.error(ParseErrorKind::NestedOperator));
            }
        }
        let atom = self.atom()?;
        Ok(Literal::new(atom, positive))
    }

    fn conjunction(&mut self) -> Result<Vec<Literal>, ParseError> {
        let mut lits = vec![self.literal()?];
        while self.is_keyword("AND") {
            self.pos += 1;
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn disjunction(&mut self) -> Result<Expr, ParseError> {
        let mut disjuncts = vec![self.conjunction()?];
        while self.is_keyword("or") || self.is_keyword("OR") || self.peek() == Some(&Tok::OrSym) {
            self.pos += 1;
            disjuncts.push(self.conjunction()?);
        }
        Ok(Expr { disjuncts })
    }

    fn to_literal(&self, expr: Expr, column: usize) -> Result<Literal, ParseError> {
        if expr.disjuncts.len() > 1 {
            return Err(self.error_at(column, ParseErrorKind::Disjunction));
        }
        let mut conj = expr.disjuncts.into_iter().next().expect("at least one disjunct");
        if conj.len() != 1 {
            return Err(self.error_at(column, ParseErrorKind::NonLiteralConsequent));
        }
        Ok(conj.remove(0))
    }

    fn to_condition(&self, expr: Expr, column: usize) -> Result<Condition, ParseError> {
        if expr.disjuncts.len() > 1 {
            return Err(self.error_at(column, ParseErrorKind::Disjunction));
        }
        let conj = expr.disjuncts.into_iter().next().expect("at least one disjunct");
        Condition::new(conj).map_err(|InconsistentCondition(atom)| {
            self.error_at(column, ParseErrorKind::InconsistentCondition(atom.to_string()))
        })
    }
}
