//! Verification plan files: a small block-structured text format declaring
//! instances, Dirac candidates, and runner settings.
//!
//! ```text
//! # settings
//! seed = 7
//! trials = 100
//! degree = 2
//! coeff_bound = 3
//! suites = [axioms, lemmas, shla]
//!
//! courant {
//!   kind = "bialgebroid_double"
//!   pair = "poisson"
//!   dim = 3
//!   pi = { (1,2): "x3", (2,3): "x1", (3,1): "x2" }
//! }
//!
//! dirac {
//!   kind = "graph_2form"
//!   dim = 3
//!   omega = { (1,2): "x3" }
//! }
//! ```
//!
//! Values are integers, rationals `p/q`, quoted strings, bare identifiers,
//! lists `[...]`, and maps `{ (i,j): "poly", ... }` with 1-based index
//! tuples. Structure constants are triple-nested lists `c[i][j][k]` for
//! `[e_i, e_j] = sum_k c_ijk e_k`. Parse errors carry line and column.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::algebroid::LieBialgebroidPair;
use crate::cartan::{DiffForm, Multivector};
use crate::courant::{Corruption, CourantInstance, Section};
use crate::algebroid::Coords;
use crate::exact_poly::{Poly, Rational};

#[derive(Debug, Error)]
#[error("{line}:{col}: {msg}")]
pub struct PlanError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

fn err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T, PlanError> {
    Err(PlanError {
        line,
        col,
        msg: msg.into(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Suite {
    Axioms,
    Lemmas,
    Shla,
    Dirac,
    Bialgebroid,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        vec![
            Suite::Axioms,
            Suite::Lemmas,
            Suite::Shla,
            Suite::Dirac,
            Suite::Bialgebroid,
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Lemmas => "lemmas",
            Suite::Shla => "shla",
            Suite::Dirac => "dirac",
            Suite::Bialgebroid => "bialgebroid",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "axioms" => Ok(Suite::Axioms),
            "lemmas" => Ok(Suite::Lemmas),
            "shla" => Ok(Suite::Shla),
            "dirac" => Ok(Suite::Dirac),
            "bialgebroid" => Ok(Suite::Bialgebroid),
            other => Err(format!(
                "unknown suite `{other}` (expected axioms, lemmas, shla, dirac, bialgebroid)"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Instance declaration, interpreted but not yet constructed (construction
/// can fail, e.g. a non-Poisson bivector, and is reported per instance).
#[derive(Clone, Debug)]
pub enum InstanceDecl {
    Standard {
        dim: usize,
    },
    DoubleStandardPair {
        dim: usize,
    },
    DoublePoisson {
        dim: usize,
        pi: Vec<((usize, usize), String)>,
    },
    DoublePointBialgebra {
        g: Vec<Vec<Vec<Rational>>>,
        gstar: Vec<Vec<Vec<Rational>>>,
    },
    DrinfeldDouble {
        g: Vec<Vec<Vec<Rational>>>,
        gstar: Vec<Vec<Vec<Rational>>>,
    },
    Quadratic {
        c: Vec<Vec<Vec<Rational>>>,
        pairing: Vec<Vec<Rational>>,
    },
}

impl InstanceDecl {
    pub fn label(&self) -> String {
        match self {
            InstanceDecl::Standard { dim } => format!("standard(dim={dim})"),
            InstanceDecl::DoubleStandardPair { dim } => format!("double(standard,dim={dim})"),
            InstanceDecl::DoublePoisson { dim, .. } => format!("double(poisson,dim={dim})"),
            InstanceDecl::DoublePointBialgebra { g, .. } => {
                format!("double(bialgebra,dim={})", g.len())
            }
            InstanceDecl::DrinfeldDouble { g, .. } => format!("drinfeld(dim={})", g.len()),
            InstanceDecl::Quadratic { c, .. } => format!("quadratic(dim={})", c.len()),
        }
    }

    fn parse_bivector(
        dim: usize,
        comps: &[((usize, usize), String)],
    ) -> Result<Multivector, String> {
        let mut parsed = Vec::new();
        for ((i, j), src) in comps {
            if *i == 0 || *j == 0 || *i > dim || *j > dim {
                return Err(format!("bivector index ({i},{j}) out of range for dim {dim}"));
            }
            let p = Poly::parse(src, dim).map_err(|e| e.to_string())?;
            parsed.push((vec![i - 1, j - 1], p));
        }
        Ok(Multivector::from_components(dim, 2, parsed))
    }

    pub fn build(&self, corruption: Option<Corruption>) -> Result<CourantInstance, String> {
        let instance = match self {
            InstanceDecl::Standard { dim } => CourantInstance::standard(*dim),
            InstanceDecl::DoubleStandardPair { dim } => {
                CourantInstance::bialgebroid_double(LieBialgebroidPair::standard(*dim))
            }
            InstanceDecl::DoublePoisson { dim, pi } => {
                let pi = Self::parse_bivector(*dim, pi)?;
                let pair = LieBialgebroidPair::poisson(&pi).map_err(|e| e.to_string())?;
                CourantInstance::bialgebroid_double(pair)
            }
            InstanceDecl::DoublePointBialgebra { g, gstar } => {
                let pair =
                    LieBialgebroidPair::point_bialgebra(g, gstar).map_err(|e| e.to_string())?;
                CourantInstance::bialgebroid_double(pair)
            }
            InstanceDecl::DrinfeldDouble { g, gstar } => {
                CourantInstance::drinfeld_double(g, gstar).map_err(|e| e.to_string())?
            }
            InstanceDecl::Quadratic { c, pairing } => {
                CourantInstance::quadratic(c, pairing.clone()).map_err(|e| e.to_string())?
            }
        };
        Ok(match corruption {
            Some(c) => instance.with_corruption(c),
            None => instance,
        })
    }
}

/// Dirac candidate declaration over the standard instance of its dimension.
#[derive(Clone, Debug)]
pub enum DiracDecl {
    Graph2Form {
        dim: usize,
        omega: Vec<((usize, usize), String)>,
    },
    GraphBivector {
        dim: usize,
        pi: Vec<((usize, usize), String)>,
    },
    Frame {
        dim: usize,
        sections: Vec<Vec<String>>,
    },
}

impl DiracDecl {
    pub fn label(&self) -> String {
        match self {
            DiracDecl::Graph2Form { dim, .. } => format!("graph_2form(dim={dim})"),
            DiracDecl::GraphBivector { dim, .. } => format!("graph_bivector(dim={dim})"),
            DiracDecl::Frame { dim, .. } => format!("frame(dim={dim})"),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DiracDecl::Graph2Form { dim, .. }
            | DiracDecl::GraphBivector { dim, .. }
            | DiracDecl::Frame { dim, .. } => *dim,
        }
    }

    pub fn two_form(&self) -> Result<Option<DiffForm>, String> {
        match self {
            DiracDecl::Graph2Form { dim, omega } => {
                let mut parsed = Vec::new();
                for ((i, j), src) in omega {
                    if *i == 0 || *j == 0 || *i > *dim || *j > *dim {
                        return Err(format!("index ({i},{j}) out of range"));
                    }
                    let p = Poly::parse(src, *dim).map_err(|e| e.to_string())?;
                    parsed.push((vec![i - 1, j - 1], p));
                }
                Ok(Some(DiffForm::from_components(*dim, 2, parsed)))
            }
            _ => Ok(None),
        }
    }

    pub fn bivector(&self) -> Result<Option<Multivector>, String> {
        match self {
            DiracDecl::GraphBivector { dim, pi } => {
                InstanceDecl::parse_bivector(*dim, pi).map(Some)
            }
            _ => Ok(None),
        }
    }

    pub fn frame_sections(&self) -> Result<Option<Vec<Section>>, String> {
        match self {
            DiracDecl::Frame { dim, sections } => {
                let mut out = Vec::new();
                for entry in sections {
                    if entry.len() != 2 * dim {
                        return Err(format!(
                            "frame section needs {} coordinates, got {}",
                            2 * dim,
                            entry.len()
                        ));
                    }
                    let coords: Result<Vec<Poly>, String> = entry
                        .iter()
                        .map(|s| Poly::parse(s, *dim).map_err(|e| e.to_string()))
                        .collect();
                    let coords = coords?;
                    let (a, astar) = coords.split_at(*dim);
                    out.push(Section::new(Coords(a.to_vec()), Coords(astar.to_vec())));
                }
                Ok(Some(out))
            }
            _ => Ok(None),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationPlan {
    pub seed: u64,
    pub trials: u32,
    pub degree: u32,
    pub coeff_bound: i64,
    pub suites: Vec<Suite>,
    pub instances: Vec<InstanceDecl>,
    pub dirac: Vec<DiracDecl>,
    pub corruption: Option<Corruption>,
}

impl Default for VerificationPlan {
    fn default() -> Self {
        VerificationPlan {
            seed: 0,
            trials: 100,
            degree: 2,
            coeff_bound: 3,
            suites: Suite::all(),
            instances: Vec::new(),
            dirac: Vec::new(),
            corruption: None,
        }
    }
}

// ---------------------------------------------------------------------------
// tokenizer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(Rational),
    Eq,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Colon,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>, PlanError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match ch {
            ' ' | '\t' | '\r' | '\n' => {
                chars.next();
                bump(ch, &mut line, &mut col);
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    chars.next();
                    bump(c, &mut line, &mut col);
                    if c == '\n' {
                        break;
                    }
                }
            }
            '=' | '{' | '}' | '[' | ']' | '(' | ')' | ',' | ':' => {
                chars.next();
                bump(ch, &mut line, &mut col);
                let tok = match ch {
                    '=' => Tok::Eq,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    _ => Tok::Colon,
                };
                out.push(Token {
                    tok,
                    line: tline,
                    col: tcol,
                });
            }
            '"' => {
                chars.next();
                bump('"', &mut line, &mut col);
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => {
                            bump('"', &mut line, &mut col);
                            break;
                        }
                        Some(c) => {
                            bump(c, &mut line, &mut col);
                            s.push(c);
                        }
                        None => return err(tline, tcol, "unterminated string"),
                    }
                }
                out.push(Token {
                    tok: Tok::Str(s),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_digit() || c == '-' => {
                let mut s = String::new();
                s.push(c);
                chars.next();
                bump(c, &mut line, &mut col);
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() || d == '/' {
                        s.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let num = parse_rational(&s)
                    .ok_or(())
                    .or_else(|_| err(tline, tcol, format!("malformed number `{s}`")))?;
                out.push(Token {
                    tok: Tok::Num(num),
                    line: tline,
                    col: tcol,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: tline,
                    col: tcol,
                });
            }
            other => return err(tline, tcol, format!("unexpected character `{other}`")),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((num, den)) = s.split_once('/') {
        let n: i64 = num.parse().ok()?;
        let d: i64 = den.parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Rational::new(n.into(), d.into()))
    } else {
        let n: i64 = s.parse().ok()?;
        Some(Rational::from_integer(n.into()))
    }
}

// ---------------------------------------------------------------------------
// generic values

#[derive(Clone, Debug)]
enum Value {
    Num(Rational),
    Str(String),
    Ident(String),
    List(Vec<Value>),
    /// `{ (i,j): "poly", ... }`
    IndexMap(Vec<((usize, usize), String)>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<Token, PlanError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            err(t.line, t.col, format!("expected {what}, found {:?}", t.tok))
        }
    }

    fn value(&mut self) -> Result<Value, PlanError> {
        let t = self.next();
        match t.tok {
            Tok::Num(r) => Ok(Value::Num(r)),
            Tok::Str(s) => Ok(Value::Str(s)),
            Tok::Ident(s) => Ok(Value::Ident(s)),
            Tok::LBracket => {
                let mut items = Vec::new();
                loop {
                    if self.peek().tok == Tok::RBracket {
                        self.next();
                        break;
                    }
                    items.push(self.value()?);
                    match self.peek().tok {
                        Tok::Comma => {
                            self.next();
                        }
                        Tok::RBracket => {}
                        _ => {
                            let t = self.peek().clone();
                            return err(t.line, t.col, "expected `,` or `]` in list");
                        }
                    }
                }
                Ok(Value::List(items))
            }
            Tok::LBrace => {
                let mut items = Vec::new();
                loop {
                    if self.peek().tok == Tok::RBrace {
                        self.next();
                        break;
                    }
                    self.expect(Tok::LParen, "`(` starting an index pair")?;
                    let i = self.index()?;
                    self.expect(Tok::Comma, "`,` between indices")?;
                    let j = self.index()?;
                    self.expect(Tok::RParen, "`)` closing the index pair")?;
                    self.expect(Tok::Colon, "`:` after the index pair")?;
                    let t = self.next();
                    let src = match t.tok {
                        Tok::Str(s) => s,
                        Tok::Num(r) => r.to_string(),
                        _ => return err(t.line, t.col, "expected a polynomial string"),
                    };
                    items.push(((i, j), src));
                    if self.peek().tok == Tok::Comma {
                        self.next();
                    }
                }
                Ok(Value::IndexMap(items))
            }
            other => err(t.line, t.col, format!("expected a value, found {other:?}")),
        }
    }

    fn index(&mut self) -> Result<usize, PlanError> {
        let t = self.next();
        match t.tok {
            Tok::Num(r) if r.is_integer() && r >= Rational::zero() => {
                Ok(r.to_integer().to_usize().unwrap_or(usize::MAX))
            }
            _ => err(t.line, t.col, "expected a nonnegative integer index"),
        }
    }
}

fn as_usize(v: &Value, line: usize, col: usize, what: &str) -> Result<usize, PlanError> {
    match v {
        Value::Num(r) if r.is_integer() && *r >= Rational::zero() => {
            Ok(r.to_integer().to_usize().unwrap_or(usize::MAX))
        }
        _ => err(line, col, format!("{what} must be a nonnegative integer")),
    }
}

fn as_string(v: &Value, line: usize, col: usize, what: &str) -> Result<String, PlanError> {
    match v {
        Value::Str(s) | Value::Ident(s) => Ok(s.clone()),
        _ => err(line, col, format!("{what} must be a string")),
    }
}

fn as_constants3(v: &Value, line: usize, col: usize) -> Result<Vec<Vec<Vec<Rational>>>, PlanError> {
    let fail = || {
        err(
            line,
            col,
            "structure constants must be a triple-nested list of rationals",
        )
    };
    let Value::List(outer) = v else { return fail() };
    let mut out = Vec::new();
    for row in outer {
        let Value::List(mid) = row else { return fail() };
        let mut r = Vec::new();
        for cell in mid {
            let Value::List(inner) = cell else {
                return fail();
            };
            let mut c = Vec::new();
            for x in inner {
                let Value::Num(q) = x else { return fail() };
                c.push(q.clone());
            }
            r.push(c);
        }
        out.push(r);
    }
    Ok(out)
}

fn as_matrix(v: &Value, line: usize, col: usize) -> Result<Vec<Vec<Rational>>, PlanError> {
    let fail = || err(line, col, "matrix must be a nested list of rationals");
    let Value::List(outer) = v else { return fail() };
    let mut out = Vec::new();
    for row in outer {
        let Value::List(inner) = row else {
            return fail();
        };
        let mut r = Vec::new();
        for x in inner {
            let Value::Num(q) = x else { return fail() };
            r.push(q.clone());
        }
        out.push(r);
    }
    Ok(out)
}

fn as_index_map(
    v: &Value,
    line: usize,
    col: usize,
    what: &str,
) -> Result<Vec<((usize, usize), String)>, PlanError> {
    match v {
        Value::IndexMap(m) => Ok(m.clone()),
        _ => err(line, col, format!("{what} must be an index map {{ (i,j): \"poly\" }}")),
    }
}

type Fields = Vec<(String, Value, usize, usize)>;

fn field<'f>(fields: &'f Fields, name: &str) -> Option<&'f (String, Value, usize, usize)> {
    fields.iter().find(|(k, ..)| k == name)
}

fn required<'f>(
    fields: &'f Fields,
    name: &str,
    bline: usize,
    bcol: usize,
    block: &str,
) -> Result<&'f (String, Value, usize, usize), PlanError> {
    field(fields, name)
        .ok_or(())
        .or_else(|_| err(bline, bcol, format!("{block} block is missing `{name}`")))
}

/// Parses the plan text. Settings omitted from the file keep their
/// defaults.
pub fn parse_plan(src: &str) -> Result<VerificationPlan, PlanError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut plan = VerificationPlan::default();
    loop {
        let t = p.next();
        let (line, col) = (t.line, t.col);
        match t.tok {
            Tok::Eof => break,
            Tok::Ident(key) if key == "courant" || key == "dirac" => {
                p.expect(Tok::LBrace, "`{` opening the block")?;
                let mut fields: Fields = Vec::new();
                loop {
                    let t = p.next();
                    match t.tok {
                        Tok::RBrace => break,
                        Tok::Ident(name) => {
                            p.expect(Tok::Eq, "`=` after a field name")?;
                            let v = p.value()?;
                            fields.push((name, v, t.line, t.col));
                            if p.peek().tok == Tok::Comma {
                                p.next();
                            }
                        }
                        other => {
                            return err(
                                t.line,
                                t.col,
                                format!("expected a field name or `}}`, found {other:?}"),
                            )
                        }
                    }
                }
                if key == "courant" {
                    plan.instances
                        .push(interpret_courant(&fields, line, col)?);
                } else {
                    plan.dirac.push(interpret_dirac(&fields, line, col)?);
                }
            }
            Tok::Ident(key) => {
                p.expect(Tok::Eq, "`=` after a setting name")?;
                let v = p.value()?;
                match key.as_str() {
                    "seed" => {
                        plan.seed = as_usize(&v, line, col, "seed")? as u64;
                    }
                    "trials" => {
                        let n = as_usize(&v, line, col, "trials")?;
                        if n == 0 {
                            return err(line, col, "trials must be >= 1");
                        }
                        plan.trials = n as u32;
                    }
                    "degree" => {
                        plan.degree = as_usize(&v, line, col, "degree")? as u32;
                    }
                    "coeff_bound" => {
                        let n = as_usize(&v, line, col, "coeff_bound")?;
                        if n == 0 {
                            return err(line, col, "coeff_bound must be >= 1");
                        }
                        plan.coeff_bound = n as i64;
                    }
                    "suites" => {
                        let Value::List(items) = &v else {
                            return err(line, col, "suites must be a list of suite names");
                        };
                        let mut suites = Vec::new();
                        for item in items {
                            let name = as_string(item, line, col, "suite")?;
                            let s: Suite = name
                                .parse()
                                .or_else(|e: String| err(line, col, e))?;
                            if !suites.contains(&s) {
                                suites.push(s);
                            }
                        }
                        if suites.is_empty() {
                            return err(line, col, "suites must be nonempty");
                        }
                        plan.suites = suites;
                    }
                    "corruption" => {
                        let name = as_string(&v, line, col, "corruption")?;
                        let c: Corruption =
                            name.parse().or_else(|e: String| err(line, col, e))?;
                        plan.corruption = Some(c);
                    }
                    other => {
                        return err(line, col, format!("unknown setting `{other}`"));
                    }
                }
            }
            other => {
                return err(
                    line,
                    col,
                    format!("expected a setting or block, found {other:?}"),
                )
            }
        }
    }
    Ok(plan)
}

fn interpret_courant(fields: &Fields, bline: usize, bcol: usize) -> Result<InstanceDecl, PlanError> {
    let (_, kind, kline, kcol) = required(fields, "kind", bline, bcol, "courant")?;
    let kind = as_string(kind, *kline, *kcol, "kind")?;
    let dim = match field(fields, "dim") {
        Some((_, v, l, c)) => as_usize(v, *l, *c, "dim")?,
        None => 3,
    };
    match kind.as_str() {
        "standard" => Ok(InstanceDecl::Standard { dim }),
        "bialgebroid_double" => {
            let (_, pair, pline, pcol) = required(fields, "pair", bline, bcol, "courant")?;
            let pair = as_string(pair, *pline, *pcol, "pair")?;
            match pair.as_str() {
                "standard" => Ok(InstanceDecl::DoubleStandardPair { dim }),
                "poisson" => {
                    let (_, pi, l, c) = required(fields, "pi", bline, bcol, "courant")?;
                    Ok(InstanceDecl::DoublePoisson {
                        dim,
                        pi: as_index_map(pi, *l, *c, "pi")?,
                    })
                }
                "point" => {
                    let (_, g, l1, c1) = required(fields, "g", bline, bcol, "courant")?;
                    let (_, gs, l2, c2) = required(fields, "gstar", bline, bcol, "courant")?;
                    Ok(InstanceDecl::DoublePointBialgebra {
                        g: as_constants3(g, *l1, *c1)?,
                        gstar: as_constants3(gs, *l2, *c2)?,
                    })
                }
                other => err(
                    *pline,
                    *pcol,
                    format!("unknown pair `{other}` (expected standard, poisson, point)"),
                ),
            }
        }
        "drinfeld_double" => {
            let (_, g, l1, c1) = required(fields, "g", bline, bcol, "courant")?;
            let (_, gs, l2, c2) = required(fields, "gstar", bline, bcol, "courant")?;
            Ok(InstanceDecl::DrinfeldDouble {
                g: as_constants3(g, *l1, *c1)?,
                gstar: as_constants3(gs, *l2, *c2)?,
            })
        }
        "quadratic" => {
            let (_, c, l1, c1) = required(fields, "c", bline, bcol, "courant")?;
            let (_, pairing, l2, c2) = required(fields, "pairing", bline, bcol, "courant")?;
            Ok(InstanceDecl::Quadratic {
                c: as_constants3(c, *l1, *c1)?,
                pairing: as_matrix(pairing, *l2, *c2)?,
            })
        }
        other => err(
            *kline,
            *kcol,
            format!(
                "unknown courant kind `{other}` (expected standard, bialgebroid_double, drinfeld_double, quadratic)"
            ),
        ),
    }
}

fn interpret_dirac(fields: &Fields, bline: usize, bcol: usize) -> Result<DiracDecl, PlanError> {
    let (_, kind, kline, kcol) = required(fields, "kind", bline, bcol, "dirac")?;
    let kind = as_string(kind, *kline, *kcol, "kind")?;
    let dim = match field(fields, "dim") {
        Some((_, v, l, c)) => as_usize(v, *l, *c, "dim")?,
        None => 3,
    };
    match kind.as_str() {
        "graph_2form" => {
            let (_, omega, l, c) = required(fields, "omega", bline, bcol, "dirac")?;
            Ok(DiracDecl::Graph2Form {
                dim,
                omega: as_index_map(omega, *l, *c, "omega")?,
            })
        }
        "graph_bivector" => {
            let (_, pi, l, c) = required(fields, "pi", bline, bcol, "dirac")?;
            Ok(DiracDecl::GraphBivector {
                dim,
                pi: as_index_map(pi, *l, *c, "pi")?,
            })
        }
        "frame" => {
            let (_, sections, l, c) = required(fields, "sections", bline, bcol, "dirac")?;
            let Value::List(rows) = sections else {
                return err(*l, *c, "sections must be a list of coordinate lists");
            };
            let mut out = Vec::new();
            for row in rows {
                let Value::List(cells) = row else {
                    return err(*l, *c, "each frame section must be a list of polynomials");
                };
                let mut coords = Vec::new();
                for cell in cells {
                    match cell {
                        Value::Str(s) => coords.push(s.clone()),
                        Value::Num(q) => coords.push(q.to_string()),
                        _ => return err(*l, *c, "frame coordinates must be polynomial strings"),
                    }
                }
                out.push(coords);
            }
            Ok(DiracDecl::Frame { dim, sections: out })
        }
        other => err(
            *kline,
            *kcol,
            format!("unknown dirac kind `{other}` (expected graph_2form, graph_bivector, frame)"),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_plan() {
        let src = r#"
            # demo plan
            seed = 42
            trials = 10
            degree = 2
            coeff_bound = 3
            suites = [axioms, shla]

            courant {
              kind = "standard"
              dim = 3
            }

            courant {
              kind = "bialgebroid_double"
              pair = "poisson"
              dim = 3
              pi = { (1,2): "x3", (2,3): "x1", (3,1): "x2" }
            }

            courant {
              kind = "drinfeld_double"
              g = [ [[0,0],[0,1]], [[0,-1],[0,0]] ]
              gstar = [ [[0,0],[0,0]], [[0,0],[0,0]] ]
            }

            dirac {
              kind = "graph_2form"
              omega = { (1,2): "x3" }
            }
        "#;
        let plan = parse_plan(src).unwrap();
        assert_eq!(plan.seed, 42);
        assert_eq!(plan.trials, 10);
        assert_eq!(plan.suites, vec![Suite::Axioms, Suite::Shla]);
        assert_eq!(plan.instances.len(), 3);
        assert_eq!(plan.dirac.len(), 1);
        for decl in &plan.instances {
            decl.build(None).unwrap();
        }
    }

    #[test]
    fn defaults_applied() {
        let plan = parse_plan("courant { kind = \"standard\" }").unwrap();
        assert_eq!(plan.trials, 100);
        assert_eq!(plan.degree, 2);
        assert_eq!(plan.coeff_bound, 3);
        assert_eq!(plan.seed, 0);
        assert_eq!(plan.suites, Suite::all());
        assert_eq!(plan.instances[0].label(), "standard(dim=3)");
    }

    #[test]
    fn reports_line_and_column() {
        let e = parse_plan("seed = 1\ntrials = x\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("trials"));
        let e = parse_plan("courant {\n  kind = \"wat\"\n}").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("unknown courant kind"));
    }

    #[test]
    fn rejects_zero_trials_and_empty_suites() {
        assert!(parse_plan("trials = 0").is_err());
        assert!(parse_plan("suites = []").is_err());
    }

    #[test]
    fn non_poisson_pi_fails_at_build_not_parse() {
        let src = r#"
            courant {
              kind = "bialgebroid_double"
              pair = "poisson"
              pi = { (1,2): "x2", (2,3): "1" }
            }
        "#;
        let plan = parse_plan(src).unwrap();
        let e = match plan.instances[0].build(None) {
            Err(e) => e,
            Ok(_) => panic!("expected a construction error"),
        };
        assert!(e.contains("not Poisson"), "{e}");
    }

    #[test]
    fn corruption_setting() {
        let plan = parse_plan("corruption = \"flip-d-term\"").unwrap();
        assert_eq!(plan.corruption, Some(Corruption::FlipDTerm));
        assert!(parse_plan("corruption = \"nope\"").is_err());
    }

    #[test]
    fn rational_tokens() {
        let plan = parse_plan(
            "courant { kind = \"quadratic\", c = [[[0]]], pairing = [[-1/2]] }",
        );
        // 1x1 abelian algebra with pairing -1/2 is fine
        plan.unwrap().instances[0].build(None).unwrap();
    }
}
