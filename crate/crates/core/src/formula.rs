//! Propositional sentences over fluxing objects: AST, concrete syntax,
//! binding against a structure, and exhaustive enumeration.
//!
//! Grammar (`!` binds tighter than `&`, which binds tighter than `|`; both
//! binary connectives associate to the left):
//!
//! ```text
//! formula := conj ( "|" conj )*
//! conj    := unary ( "&" unary )*
//! unary   := "!" unary | "(" formula ")" | atom
//! atom    := ident "(" ident ( "," ident )* ")"
//! ident   := [A-Za-z0-9_]+
//! ```

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::structure::{FluxingStructure, ObjectId, PredicateId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom {
        predicate: String,
        args: Vec<String>,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom<I, S>(predicate: &str, args: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Formula::Atom {
            predicate: predicate.to_owned(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    /// Connective nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Not(a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Replaces every argument equal to `hole` by `object`.
    pub fn substitute(&self, hole: &str, object: &str) -> Formula {
        match self {
            Formula::Atom { predicate, args } => Formula::Atom {
                predicate: predicate.clone(),
                args: args
                    .iter()
                    .map(|a| {
                        if a == hole {
                            object.to_owned()
                        } else {
                            a.clone()
                        }
                    })
                    .collect(),
            },
            Formula::Not(a) => a.substitute(hole, object).not(),
            Formula::And(a, b) => a.substitute(hole, object).and(b.substitute(hole, object)),
            Formula::Or(a, b) => a.substitute(hole, object).or(b.substitute(hole, object)),
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().any(|a| a == name),
            Formula::Not(a) => a.mentions(name),
            Formula::And(a, b) | Formula::Or(a, b) => a.mentions(name) || b.mentions(name),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(_) => 3,
            Formula::Atom { .. } => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, needs_parens: bool) -> fmt::Result {
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom { predicate, args } => write!(f, "{predicate}({})", args.join(",")),
            Formula::Not(a) => {
                f.write_str("!")?;
                a.fmt_child(f, a.precedence() < 3)
            }
            Formula::And(a, b) => {
                a.fmt_child(f, a.precedence() < 2)?;
                f.write_str(" & ")?;
                b.fmt_child(f, b.precedence() <= 2)
            }
            Formula::Or(a, b) => {
                a.fmt_child(f, a.precedence() < 1)?;
                f.write_str(" | ")?;
                b.fmt_child(f, b.precedence() <= 1)
            }
        }
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {}, found {found}", expected_list(.expected))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<&'static str>,
}

fn expected_list(expected: &[&'static str]) -> String {
    match expected {
        [one] => one.to_string(),
        many => format!("one of {}", many.join(", ")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Bar,
    Arrow,
    Unknown(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Amp => f.write_str("`&`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::Arrow => f.write_str("implication (not supported)"),
            Tok::Unknown(c) => write!(f, "`{c}`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Spanned> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let tok = match c {
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if !(c.is_ascii_alphanumeric() || c == '_') {
                        break;
                    }
                    ident.push(c);
                    bump(&mut chars);
                }
                out.push(Spanned {
                    tok: Tok::Ident(ident),
                    line: l,
                    column: col,
                });
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '→' => Tok::Arrow,
            '-' => {
                bump(&mut chars);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars);
                    out.push(Spanned {
                        tok: Tok::Arrow,
                        line: l,
                        column: col,
                    });
                } else {
                    out.push(Spanned {
                        tok: Tok::Unknown('-'),
                        line: l,
                        column: col,
                    });
                }
                continue;
            }
            other => Tok::Unknown(other),
        };
        bump(&mut chars);
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    out
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let here = &self.toks[self.pos];
        ParseError {
            line: here.line,
            column: here.column,
            found: here.tok.to_string(),
            expected: expected.to_vec(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Tok::Ident(_) => match self.advance() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.advance();
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.advance();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.advance();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.advance();
                let inner = self.disjunction()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(_) => self.atom(),
            _ => Err(self.error(&["`!`", "`(`", "identifier"])),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let predicate = self.ident()?;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.ident()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                    args.push(self.ident()?);
                }
                Tok::RParen => {
                    self.advance();
                    break;
                }
                _ => return Err(self.error(&["`,`", "`)`"])),
            }
        }
        Ok(Formula::Atom { predicate, args })
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text),
        pos: 0,
    };
    let formula = p.disjunction()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["`&`", "`|`", "end of input"]));
    }
    Ok(formula)
}

// ---------------------------------------------------------------------------
// Binding
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BindError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("arity mismatch for `{predicate}`: expected {expected}, got {actual}")]
    Arity {
        predicate: String,
        expected: usize,
        actual: usize,
    },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Node {
    Atom {
        predicate: PredicateId,
        args: Box<[ObjectId]>,
    },
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
}

/// A formula whose predicates, arities and object names have been checked
/// against one particular structure.
#[derive(Debug, Clone)]
pub struct BoundFormula {
    formula: Formula,
    pub(crate) root: Node,
    pub(crate) token: u64,
}

impl BoundFormula {
    pub fn formula(&self) -> &Formula {
        &self.formula
    }
}

impl fmt::Display for BoundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.formula.fmt(f)
    }
}

pub fn bind(formula: &Formula, structure: &FluxingStructure) -> Result<BoundFormula, BindError> {
    Ok(BoundFormula {
        formula: formula.clone(),
        root: compile(formula, structure)?,
        token: structure.token(),
    })
}

fn compile(formula: &Formula, structure: &FluxingStructure) -> Result<Node, BindError> {
    Ok(match formula {
        Formula::Atom { predicate, args } => {
            let base = structure.base();
            let id = base
                .predicate_id(predicate)
                .ok_or_else(|| BindError::UnknownPredicate(predicate.clone()))?;
            let expected = base.predicate(id).arity();
            if expected != args.len() {
                return Err(BindError::Arity {
                    predicate: predicate.clone(),
                    expected,
                    actual: args.len(),
                });
            }
            let args = args
                .iter()
                .map(|a| {
                    structure
                        .object_id(a)
                        .map_err(|_| BindError::UnknownObject(a.clone()))
                })
                .collect::<Result<_, _>>()?;
            Node::Atom {
                predicate: id,
                args,
            }
        }
        Formula::Not(a) => Node::Not(Box::new(compile(a, structure)?)),
        Formula::And(a, b) => Node::And(
            Box::new(compile(a, structure)?),
            Box::new(compile(b, structure)?),
        ),
        Formula::Or(a, b) => Node::Or(
            Box::new(compile(a, structure)?),
            Box::new(compile(b, structure)?),
        ),
    })
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Lazily yields every formula over `atoms` with depth at most `max_depth`,
/// by increasing depth, each exactly once.
pub fn enumerate_formulas(atoms: &[Formula], max_depth: usize) -> FormulaEnumerator {
    let mut seen = HashSet::new();
    let atoms: Vec<Formula> = atoms.iter().filter(|a| seen.insert(*a)).cloned().collect();
    FormulaEnumerator {
        below: Vec::new(),
        first_exact: 0,
        current: atoms,
        max_depth,
        depth: 0,
        phase: Phase::Emit(0),
    }
}

#[derive(Debug, Clone, Copy)]
enum Phase {
    // Yielding `current` (the atoms) verbatim.
    Emit(usize),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Done,
}

/// Iterator returned by [`enumerate_formulas`].
///
/// Formulas of depth below `max_depth` are retained to build the next level;
/// the deepest level is produced on demand.
#[derive(Debug, Clone)]
pub struct FormulaEnumerator {
    // All formulas of depth < `depth`, in yield order.
    below: Vec<Formula>,
    // Index in `below` where depth `depth - 1` starts.
    first_exact: usize,
    // Formulas of exactly `depth` yielded so far (kept only when needed).
    current: Vec<Formula>,
    max_depth: usize,
    depth: usize,
    phase: Phase,
}

impl FormulaEnumerator {
    fn start_level(&mut self) -> bool {
        if self.depth >= self.max_depth || self.current.is_empty() {
            return false;
        }
        self.first_exact = self.below.len();
        self.below.append(&mut self.current);
        self.depth += 1;
        self.phase = Phase::Not(self.first_exact);
        true
    }

    fn keep(&mut self, f: &Formula) {
        if self.depth < self.max_depth {
            self.current.push(f.clone());
        }
    }

    // First valid partner for left operand `a`: at least one side must have
    // depth exactly `depth - 1`.
    fn pair_start(&self, a: usize) -> usize {
        if a >= self.first_exact {
            0
        } else {
            self.first_exact
        }
    }

    fn next_pair(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let n = self.below.len();
        if b + 1 < n {
            Some((a, b + 1))
        } else if a + 1 < n {
            Some((a + 1, self.pair_start(a + 1)))
        } else {
            None
        }
    }
}

impl Iterator for FormulaEnumerator {
    type Item = Formula;

    fn next(&mut self) -> Option<Formula> {
        loop {
            match self.phase {
                Phase::Emit(k) => {
                    if let Some(f) = self.current.get(k) {
                        self.phase = Phase::Emit(k + 1);
                        return Some(f.clone());
                    }
                    if !self.start_level() {
                        self.phase = Phase::Done;
                    }
                }
                Phase::Not(k) => {
                    if k < self.below.len() {
                        self.phase = Phase::Not(k + 1);
                        let f = self.below[k].clone().not();
                        self.keep(&f);
                        return Some(f);
                    }
                    self.phase = Phase::And(0, self.pair_start(0));
                }
                Phase::And(a, b) | Phase::Or(a, b) => {
                    let is_and = matches!(self.phase, Phase::And(..));
                    if a < self.below.len() && b < self.below.len() {
                        self.phase = match (self.next_pair(a, b), is_and) {
                            (Some((x, y)), true) => Phase::And(x, y),
                            (Some((x, y)), false) => Phase::Or(x, y),
                            (None, true) => Phase::Or(0, self.pair_start(0)),
                            (None, false) => Phase::Or(usize::MAX, usize::MAX),
                        };
                        let (l, r) = (self.below[a].clone(), self.below[b].clone());
                        let f = if is_and { l.and(r) } else { l.or(r) };
                        self.keep(&f);
                        return Some(f);
                    }
                    if is_and {
                        self.phase = Phase::Or(0, self.pair_start(0));
                    } else if !self.start_level() {
                        self.phase = Phase::Done;
                    }
                }
                Phase::Done => return None,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::StructureDoc;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(p("P(f)"), Formula::atom("P", ["f"]));
        assert_eq!(
            p("!(P(f) & Q(f,g))"),
            Formula::atom("P", ["f"])
                .and(Formula::atom("Q", ["f", "g"]))
                .not()
        );
        assert_eq!(
            p("P(f) & Q(g) | R(h)"),
            Formula::atom("P", ["f"])
                .and(Formula::atom("Q", ["g"]))
                .or(Formula::atom("R", ["h"]))
        );
    }

    #[test]
    fn binary_connectives_fold_left() {
        let (a, b, c) = (
            Formula::atom("A", ["x"]),
            Formula::atom("B", ["x"]),
            Formula::atom("C", ["x"]),
        );
        assert_eq!(
            p("A(x) & B(x) & C(x)"),
            a.clone().and(b.clone()).and(c.clone())
        );
        assert_eq!(
            p("A(x) | B(x) | C(x)"),
            a.clone().or(b.clone()).or(c.clone())
        );
        assert_eq!(
            p("A(x) | B(x) & C(x)"),
            a.clone().or(b.clone().and(c.clone()))
        );
        assert_eq!(p("!!A(x)"), a.clone().not().not());
        assert_eq!(p("!A(x) & B(x)"), a.not().and(b));
    }

    #[test]
    fn printing_uses_minimal_parentheses() {
        for (src, printed) in [
            ("((P(f)))", "P(f)"),
            ("(P(f) & Q(g)) | R(h)", "P(f) & Q(g) | R(h)"),
            ("P(f) & (Q(g) | R(h))", "P(f) & (Q(g) | R(h))"),
            ("P(f) & (Q(g) & R(h))", "P(f) & (Q(g) & R(h))"),
            ("(P(f) & Q(g)) & R(h)", "P(f) & Q(g) & R(h)"),
            ("!(!P(f))", "!!P(f)"),
            ("!(P(f) | Q(g , h))", "!(P(f) | Q(g,h))"),
        ] {
            assert_eq!(p(src).to_string(), printed, "printing {src}");
        }
    }

    #[test]
    fn syntax_errors_carry_position_and_expectations() {
        let e = parse("P(f) &").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert_eq!(e.found, "end of input");
        assert!(e.expected.contains(&"identifier"));

        let e = parse("P(f)\n  & Q(,)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        assert_eq!(e.expected, vec!["identifier"]);

        let e = parse("P(f) Q(g)").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));

        let e = parse("P()").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));

        let e = parse("P(f").unwrap_err();
        assert_eq!(e.expected, vec!["`,`", "`)`"]);

        assert!(parse("").is_err());
        assert!(parse("P(f) # Q(g)").unwrap_err().found.contains('#'));
    }

    #[test]
    fn implication_is_rejected() {
        for src in ["P(f) -> Q(f)", "P(f) → Q(f)"] {
            let e = parse(src).unwrap_err();
            assert_eq!((e.line, e.column), (1, 6));
            assert!(e.found.contains("implication"), "{e}");
        }
    }

    fn counter5() -> FluxingStructure {
        let mut doc = StructureDoc::default()
            .with_forms((0..10).map(|n| n.to_string()))
            .with_agents(["0"])
            .with_predicate("P", 1, (5..10).map(|n| [n.to_string()]));
        for t in [0u64, 1, 2, 3, 7, 8, 9] {
            doc = doc.with_entry("f", "0", t, &t.to_string());
        }
        FluxingStructure::try_from(doc).unwrap()
    }

    #[test]
    fn bind_checks_context() {
        let s = counter5();
        let bound = bind(&p("P(f)"), &s).unwrap();
        assert_eq!(bound.formula(), &p("P(f)"));
        assert_eq!(
            bind(&p("P(f,g)"), &s).unwrap_err(),
            BindError::Arity {
                predicate: "P".into(),
                expected: 1,
                actual: 2
            }
        );
        assert!(bind(&p("P(f,g)"), &s)
            .unwrap_err()
            .to_string()
            .contains("expected 1, got 2"));
        assert_eq!(
            bind(&p("Q(f)"), &s).unwrap_err(),
            BindError::UnknownPredicate("Q".into())
        );
        assert_eq!(
            bind(&p("P(f) & !P(g)"), &s).unwrap_err(),
            BindError::UnknownObject("g".into())
        );
    }

    #[test]
    fn enumeration_small_cases() {
        let a = Formula::atom("P", ["f"]);
        let got: Vec<Formula> = enumerate_formulas(std::slice::from_ref(&a), 0).collect();
        assert_eq!(got, vec![a.clone()]);
        let got: Vec<Formula> = enumerate_formulas(std::slice::from_ref(&a), 1).collect();
        assert_eq!(
            got,
            vec![
                a.clone(),
                a.clone().not(),
                a.clone().and(a.clone()),
                a.clone().or(a.clone())
            ]
        );
        assert_eq!(enumerate_formulas(&[a.clone(), a.clone()], 1).count(), 4);
        assert_eq!(enumerate_formulas(&[], 3).count(), 0);
    }

    // Closure-based oracle: S_0 = atoms, S_d = S_{d-1} ∪ ¬S_{d-1} ∪ S_{d-1}∘S_{d-1}.
    fn closure(atoms: &[Formula], depth: usize) -> HashSet<Formula> {
        let mut set: HashSet<Formula> = atoms.iter().cloned().collect();
        for _ in 0..depth {
            let prev: Vec<Formula> = set.iter().cloned().collect();
            for x in &prev {
                set.insert(x.clone().not());
                for y in &prev {
                    set.insert(x.clone().and(y.clone()));
                    set.insert(x.clone().or(y.clone()));
                }
            }
        }
        set
    }

    // Number of formulas of depth <= d: N(0) = a, N(d) = a + N(d-1) + 2 N(d-1)^2.
    fn count_up_to(atoms: u64, depth: usize) -> u64 {
        (0..depth).fold(atoms, |n, _| atoms + n + 2 * n * n)
    }

    #[test]
    fn enumeration_matches_closure_oracle() {
        let atoms = [Formula::atom("P", ["f"]), Formula::atom("Q", ["f", "g"])];
        for depth in 0..=2 {
            let listed: Vec<Formula> = enumerate_formulas(&atoms, depth).collect();
            let unique: HashSet<Formula> = listed.iter().cloned().collect();
            assert_eq!(listed.len(), unique.len(), "duplicates at depth {depth}");
            assert_eq!(unique, closure(&atoms, depth), "depth {depth}");
            assert!(listed.iter().all(|f| f.depth() <= depth));
            assert!(listed.windows(2).all(|w| w[0].depth() <= w[1].depth()));
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(count_up_to(1, 1), 4);
        assert_eq!(count_up_to(2, 2), 302);
        for atoms in 1..=3u64 {
            let list: Vec<Formula> = (0..atoms)
                .map(|k| Formula::atom("P", [format!("o{k}")]))
                .collect();
            for depth in 0..=2 {
                assert_eq!(
                    enumerate_formulas(&list, depth).count() as u64,
                    count_up_to(atoms, depth),
                    "{atoms} atoms, depth {depth}"
                );
            }
        }
        let two = [Formula::atom("P", ["f"]), Formula::atom("P", ["g"])];
        assert_eq!(
            enumerate_formulas(&two, 3).count() as u64,
            count_up_to(2, 3)
        );
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = (
            prop::sample::select(vec!["P", "Q", "Big"]),
            prop::collection::vec(prop::sample::select(vec!["f", "g", "x1"]), 1..=3),
        )
            .prop_map(|(p, args)| Formula::atom(p, args));
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
                (inner.clone(), inner).prop_map(|(a, b)| a.or(b)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in arb_formula()) {
            let printed = f.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert_eq!(&reparsed, &f);
            prop_assert_eq!(reparsed.to_string(), printed);
        }
    }
}
