//! Reader for the CLP-style clause syntax.
//!
//! ```text
//! % comment
//! %% group s11 s12           provenance group for the pairing heuristic
//! :- pred p(int, real).      optional signature (default: all int)
//! p(X, Y) :- X < Y, q(X, Y).
//! false :- X1 =\= X2, s11(A, B, X1), s21(A, B, X2).
//! ```
//!
//! Relations: `=<` (or `<=`), `>=`, `=`, `<`, `>`, `=\=` (or `\=`). Atom
//! arguments may be linear expressions; they are replaced by fresh
//! variables plus equalities. Strict integer inequalities become `≤ … − 1`
//! and goal disequalities are split before the system is returned.

use std::collections::BTreeMap;

use num::{BigInt, Integer, One, Zero};

use crate::chc::clause::{Atom, Clause, Head, VarInfo};
use crate::chc::system::ChcSystem;
use crate::error::{Error, Result};
use crate::linear::{AtomicConstraint, Constraint, LinExpr, Rat, Rel, Sort, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Num(BigInt),
    LParen,
    RParen,
    Comma,
    Dot,
    If,
    Plus,
    Minus,
    Star,
    Slash,
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
    Ne,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<(Vec<Token>, Vec<Vec<String>>)> {
    let mut toks = Vec::new();
    let mut groups = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            toks.push(Token { tok, line: tl, col: tc });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '%' => {
                let start = i;
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                let comment: String = chars[start..i].iter().collect();
                if let Some(rest) = comment.strip_prefix("%%") {
                    let mut words = rest.split_whitespace();
                    if words.next() == Some("group") {
                        groups.push(words.map(String::from).collect());
                    }
                }
                col += i - start;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '.' => push(Tok::Dot, 1, &mut i, &mut col),
            '+' => push(Tok::Plus, 1, &mut i, &mut col),
            '-' => push(Tok::Minus, 1, &mut i, &mut col),
            '*' => push(Tok::Star, 1, &mut i, &mut col),
            '/' => push(Tok::Slash, 1, &mut i, &mut col),
            ':' if chars.get(i + 1) == Some(&'-') => push(Tok::If, 2, &mut i, &mut col),
            '=' => {
                let next: String = chars[i + 1..chars.len().min(i + 3)].iter().collect();
                if next.starts_with("\\=") {
                    push(Tok::Ne, 3, &mut i, &mut col)
                } else if next.starts_with('<') {
                    push(Tok::Le, 2, &mut i, &mut col)
                } else {
                    push(Tok::Eq, 1, &mut i, &mut col)
                }
            }
            '\\' if chars.get(i + 1) == Some(&'=') => push(Tok::Ne, 2, &mut i, &mut col),
            '<' if chars.get(i + 1) == Some(&'=') => push(Tok::Le, 2, &mut i, &mut col),
            '<' => push(Tok::Lt, 1, &mut i, &mut col),
            '>' if chars.get(i + 1) == Some(&'=') => push(Tok::Ge, 2, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Token {
                    tok: Tok::Num(s.parse().expect("digits")),
                    line: tl,
                    col: tc,
                });
                col += i - start;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let tok = if c.is_uppercase() || c == '_' {
                    Tok::Var(s)
                } else {
                    Tok::Ident(s)
                };
                toks.push(Token { tok, line: tl, col: tc });
                col += i - start;
            }
            other => return Err(syntax(line, col, format!("unexpected character {other:?}"))),
        }
    }
    Ok((toks, groups))
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum CmpOp {
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
    Ne,
}

#[derive(Clone, Debug)]
struct RawAtom {
    pred: String,
    args: Vec<LinExpr>,
}

#[derive(Clone, Debug)]
enum RawGoal {
    Atom(RawAtom),
    Cmp(LinExpr, CmpOp, LinExpr, usize, usize),
    False,
}

#[derive(Clone, Debug)]
struct RawClause {
    head: Option<RawAtom>,
    body: Vec<RawGoal>,
    names: Vec<String>,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: Vec<String>,
    by_name: BTreeMap<String, Var>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos).or(self.toks.last()) {
            Some(t) => (t.line, t.col),
            None => (1, 1),
        }
    }

    fn next(&mut self) -> Result<Tok> {
        let (l, c) = self.here();
        let t = self
            .toks
            .get(self.pos)
            .map(|t| t.tok.clone())
            .ok_or_else(|| syntax(l, c, "unexpected end of input"))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let (l, c) = self.here();
        let t = self.next()?;
        if t == want {
            Ok(())
        } else {
            Err(syntax(l, c, format!("expected {what}, found {t:?}")))
        }
    }

    fn var(&mut self, name: &str) -> Var {
        if name == "_" {
            let v = Var(self.names.len() as u32);
            self.names.push(format!("_G{}", v.0));
            return v;
        }
        if let Some(v) = self.by_name.get(name) {
            return *v;
        }
        let v = Var(self.names.len() as u32);
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), v);
        v
    }

    fn item(&mut self) -> Result<Item> {
        if self.peek() == Some(&Tok::If) {
            return self.directive();
        }
        self.names.clear();
        self.by_name.clear();
        let (line, col) = self.here();
        let head = match self.next()? {
            Tok::Ident(s) if s == "false" => None,
            Tok::Ident(s) => Some(self.atom_rest(s)?),
            t => return Err(syntax(line, col, format!("expected clause head, found {t:?}"))),
        };
        let mut body = Vec::new();
        match self.next()? {
            Tok::Dot => {}
            Tok::If => {
                loop {
                    if let Some(g) = self.goal()? {
                        body.push(g);
                    }
                    let (l, c) = self.here();
                    match self.next()? {
                        Tok::Comma => continue,
                        Tok::Dot => break,
                        t => return Err(syntax(l, c, format!("expected ',' or '.', found {t:?}"))),
                    }
                }
            }
            t => return Err(syntax(line, col, format!("expected ':-' or '.', found {t:?}"))),
        }
        Ok(Item::Clause(RawClause {
            head,
            body,
            names: std::mem::take(&mut self.names),
            line,
            col,
        }))
    }

    fn directive(&mut self) -> Result<Item> {
        self.expect(Tok::If, "':-'")?;
        let (l, c) = self.here();
        match self.next()? {
            Tok::Ident(s) if s == "pred" => {}
            t => return Err(syntax(l, c, format!("unknown directive {t:?}"))),
        }
        let (l, c) = self.here();
        let name = match self.next()? {
            Tok::Ident(s) => s,
            t => return Err(syntax(l, c, format!("expected predicate name, found {t:?}"))),
        };
        let mut sorts = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.next()?;
            loop {
                let (l, c) = self.here();
                match self.next()? {
                    Tok::Ident(s) if s == "int" => sorts.push(Sort::Int),
                    Tok::Ident(s) if s == "real" => sorts.push(Sort::Real),
                    t => return Err(syntax(l, c, format!("expected sort, found {t:?}"))),
                }
                let (l, c) = self.here();
                match self.next()? {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    t => return Err(syntax(l, c, format!("expected ',' or ')', found {t:?}"))),
                }
            }
        }
        self.expect(Tok::Dot, "'.'")?;
        Ok(Item::Pred(name, sorts, l, c))
    }

    fn atom_rest(&mut self, pred: String) -> Result<RawAtom> {
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.next()?;
            loop {
                args.push(self.expr()?);
                let (l, c) = self.here();
                match self.next()? {
                    Tok::Comma => continue,
                    Tok::RParen => break,
                    t => return Err(syntax(l, c, format!("expected ',' or ')', found {t:?}"))),
                }
            }
        }
        Ok(RawAtom { pred, args })
    }

    fn goal(&mut self) -> Result<Option<RawGoal>> {
        let (line, col) = self.here();
        if let Some(Tok::Ident(s)) = self.peek().cloned() {
            self.next()?;
            return Ok(match s.as_str() {
                "true" => None,
                "false" => Some(RawGoal::False),
                _ => Some(RawGoal::Atom(self.atom_rest(s)?)),
            });
        }
        let lhs = self.expr()?;
        let (l, c) = self.here();
        let op = match self.next()? {
            Tok::Le => CmpOp::Le,
            Tok::Ge => CmpOp::Ge,
            Tok::Eq => CmpOp::Eq,
            Tok::Lt => CmpOp::Lt,
            Tok::Gt => CmpOp::Gt,
            Tok::Ne => CmpOp::Ne,
            t => return Err(syntax(l, c, format!("expected comparison operator, found {t:?}"))),
        };
        let rhs = self.expr()?;
        Ok(Some(RawGoal::Cmp(lhs, op, rhs, line, col)))
    }

    fn expr(&mut self) -> Result<LinExpr> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next()?;
                    e = e.plus(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next()?;
                    e = e.minus(&self.term()?);
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<LinExpr> {
        let mut e = self.factor()?;
        loop {
            let (l, c) = self.here();
            match self.peek() {
                Some(Tok::Star) => {
                    self.next()?;
                    let f = self.factor()?;
                    e = if e.is_constant() {
                        f.scaled(e.constant_part())
                    } else if f.is_constant() {
                        e.scaled(f.constant_part())
                    } else {
                        return Err(syntax(l, c, "nonlinear product"));
                    };
                }
                Some(Tok::Slash) => {
                    self.next()?;
                    let f = self.factor()?;
                    if !f.is_constant() || f.constant_part().is_zero() {
                        return Err(syntax(l, c, "division by a non-constant or zero"));
                    }
                    e = e.scaled(&(Rat::one() / f.constant_part()));
                }
                _ => return Ok(e),
            }
        }
    }

    fn factor(&mut self) -> Result<LinExpr> {
        let (l, c) = self.here();
        match self.next()? {
            Tok::Num(n) => Ok(LinExpr::constant(Rat::from_integer(n))),
            Tok::Var(name) => Ok(LinExpr::var(self.var(&name))),
            Tok::Minus => Ok(self.factor()?.scaled(&-Rat::one())),
            Tok::Plus => self.factor(),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            t => Err(syntax(l, c, format!("expected expression, found {t:?}"))),
        }
    }
}

enum Item {
    Clause(RawClause),
    Pred(String, Vec<Sort>, usize, usize),
}

/// A clause as written, before disequalities are split. Each disequality
/// reads `expr ≠ 0`.
#[derive(Clone, Debug)]
pub struct SurfaceClause {
    pub clause: Clause,
    pub disequalities: Vec<LinExpr>,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SurfaceSystem {
    pub clauses: Vec<SurfaceClause>,
    pub sigs: BTreeMap<String, Vec<Sort>>,
    pub provenance: BTreeMap<String, String>,
}

pub fn parse_clp(text: &str) -> Result<ChcSystem> {
    let surface = parse_surface(text)?;
    let split = split_disequalities(&surface)?;
    let mut sys = ChcSystem {
        clauses: Vec::new(),
        sigs: split.sigs,
        provenance: split.provenance,
    };
    for c in &split.clauses {
        sys.push(&c.clause);
    }
    sys.validate()?;
    Ok(sys)
}

/// Replaces each goal clause carrying disequalities `e ≠ 0` by the product
/// of its `e ≤ −1` / `−e ≤ −1` cases over integer-scaled `e`.
pub fn split_disequalities(s: &SurfaceSystem) -> Result<SurfaceSystem> {
    let mut out = SurfaceSystem {
        clauses: Vec::new(),
        sigs: s.sigs.clone(),
        provenance: s.provenance.clone(),
    };
    for sc in &s.clauses {
        if sc.disequalities.is_empty() {
            out.clauses.push(sc.clone());
            continue;
        }
        if !sc.clause.is_goal() {
            return Err(Error::Disequality {
                line: sc.line,
                col: sc.col,
                msg: "outside a goal clause".into(),
            });
        }
        for e in &sc.disequalities {
            if let Some(v) = e.vars().find(|v| sc.clause.sort_of(*v) == Sort::Real) {
                return Err(Error::Disequality {
                    line: sc.line,
                    col: sc.col,
                    msg: format!("over real-sorted variable {}", sc.clause.name_of(v)),
                });
            }
        }
        let mut cases = vec![sc.clause.constraint.clone()];
        for e in &sc.disequalities {
            let e = integral(e);
            let below = strict_below_zero(&e);
            let above = strict_below_zero(&e.scaled(&-Rat::one()));
            cases = cases
                .into_iter()
                .flat_map(|c| {
                    let mut lo = c.clone();
                    lo.push(below.clone());
                    let mut hi = c;
                    hi.push(above.clone());
                    [lo, hi]
                })
                .collect();
        }
        for c in cases {
            let mut clause = sc.clause.clone();
            clause.constraint = c;
            out.clauses.push(SurfaceClause {
                clause,
                disequalities: Vec::new(),
                line: sc.line,
                col: sc.col,
            });
        }
    }
    Ok(out)
}

/// Scales `e` by a positive factor so every coefficient and the constant
/// are integers.
fn integral(e: &LinExpr) -> LinExpr {
    let mut den = BigInt::one();
    for c in e.terms().values().chain(std::iter::once(e.constant_part())) {
        den = den.lcm(c.denom());
    }
    e.scaled(&Rat::from_integer(den))
}

/// `e < 0` over integers, i.e. `e ≤ −1` for integral `e`.
fn strict_below_zero(e: &LinExpr) -> AtomicConstraint {
    AtomicConstraint::from_expr(&e.plus(&LinExpr::constant(Rat::one())), Rel::Le)
}

pub fn parse_surface(text: &str) -> Result<SurfaceSystem> {
    let (toks, groups) = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        names: Vec::new(),
        by_name: BTreeMap::new(),
    };
    let mut raw = Vec::new();
    let mut declared: BTreeMap<String, Vec<Sort>> = BTreeMap::new();
    while p.pos < p.toks.len() {
        match p.item()? {
            Item::Clause(c) => raw.push(c),
            Item::Pred(name, sorts, l, c) => {
                if let Some(prev) = declared.get(&name) {
                    if prev != &sorts {
                        return Err(syntax(l, c, format!("conflicting declarations of {name}")));
                    }
                }
                declared.insert(name, sorts);
            }
        }
    }
    let mut sigs = declared;
    for c in &raw {
        let atoms = c.head.iter().chain(c.body.iter().filter_map(|g| match g {
            RawGoal::Atom(a) => Some(a),
            _ => None,
        }));
        for a in atoms {
            match sigs.get(&a.pred) {
                None => {
                    sigs.insert(a.pred.clone(), vec![Sort::Int; a.args.len()]);
                }
                Some(s) if s.len() != a.args.len() => {
                    return Err(Error::ArityMismatch {
                        pred: a.pred.clone(),
                        expected: s.len(),
                        found: a.args.len(),
                    })
                }
                _ => {}
            }
        }
    }
    let mut provenance = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        for pred in g {
            provenance.insert(pred.clone(), format!("group{}", i + 1));
        }
    }
    let clauses = raw
        .into_iter()
        .map(|c| lower(c, &sigs))
        .collect::<Result<Vec<_>>>()?;
    Ok(SurfaceSystem {
        clauses,
        sigs,
        provenance,
    })
}

fn lower(raw: RawClause, sigs: &BTreeMap<String, Vec<Sort>>) -> Result<SurfaceClause> {
    let mut clause = Clause {
        head: Head::False,
        constraint: Constraint::truth(),
        body: Vec::new(),
        vars: raw
            .names
            .iter()
            .map(|n| VarInfo {
                name: n.clone(),
                sort: Sort::Int,
            })
            .collect(),
    };
    // Sorts from argument positions.
    let mut sort_of: BTreeMap<Var, Sort> = BTreeMap::new();
    let atoms: Vec<&RawAtom> = raw
        .head
        .iter()
        .chain(raw.body.iter().filter_map(|g| match g {
            RawGoal::Atom(a) => Some(a),
            _ => None,
        }))
        .collect();
    for a in &atoms {
        for (arg, sort) in a.args.iter().zip(&sigs[&a.pred]) {
            if let Some(v) = plain_var(arg) {
                if let Some(prev) = sort_of.insert(v, *sort) {
                    if prev != *sort {
                        return Err(Error::SortConflict {
                            var: raw.names[v.index()].clone(),
                        });
                    }
                }
            }
        }
    }
    for (v, s) in &sort_of {
        clause.vars[v.index()].sort = *s;
    }

    let lower_atom = |a: &RawAtom, clause: &mut Clause| -> Atom {
        let sorts = &sigs[&a.pred];
        let args = a
            .args
            .iter()
            .zip(sorts)
            .map(|(e, s)| match plain_var(e) {
                Some(v) => v,
                None => {
                    let v = clause.fresh_var("T", *s);
                    clause
                        .constraint
                        .push(AtomicConstraint::eq(&LinExpr::var(v), e));
                    v
                }
            })
            .collect();
        Atom::new(a.pred.clone(), args)
    };
    if let Some(h) = &raw.head {
        clause.head = Head::Atom(lower_atom(h, &mut clause));
    }
    let mut disequalities = Vec::new();
    for g in &raw.body {
        match g {
            RawGoal::Atom(a) => {
                let atom = lower_atom(a, &mut clause);
                clause.body.push(atom);
            }
            RawGoal::False => clause.constraint = Constraint::falsity(),
            RawGoal::Cmp(lhs, op, rhs, line, col) => {
                let strict = matches!(op, CmpOp::Lt | CmpOp::Gt | CmpOp::Ne);
                if strict && *op != CmpOp::Ne {
                    let diff = lhs.minus(rhs);
                    let real = diff.vars().find(|v| clause.sort_of(*v) == Sort::Real);
                    if let Some(v) = real {
                        return Err(Error::StrictOverReal {
                            line: *line,
                            col: *col,
                            var: clause.name_of(v),
                        });
                    }
                }
                let atom = match op {
                    CmpOp::Le => AtomicConstraint::le(lhs, rhs),
                    CmpOp::Ge => AtomicConstraint::le(rhs, lhs),
                    CmpOp::Eq => AtomicConstraint::eq(lhs, rhs),
                    CmpOp::Lt => strict_below_zero(&integral(&lhs.minus(rhs))),
                    CmpOp::Gt => strict_below_zero(&integral(&rhs.minus(lhs))),
                    CmpOp::Ne => {
                        disequalities.push(lhs.minus(rhs));
                        continue;
                    }
                };
                clause.constraint.push(atom);
            }
        }
    }
    // Ground disequalities are decided here.
    let mut kept = Vec::new();
    for e in disequalities {
        if e.is_constant() {
            if e.constant_part().is_zero() {
                clause.constraint = Constraint::falsity();
            }
        } else {
            kept.push(e);
        }
    }
    Ok(SurfaceClause {
        clause,
        disequalities: kept,
        line: raw.line,
        col: raw.col,
    })
}

fn plain_var(e: &LinExpr) -> Option<Var> {
    if !e.constant_part().is_zero() || e.terms().len() != 1 {
        return None;
    }
    let (v, c) = e.terms().iter().next()?;
    c.is_one().then_some(*v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rat;

    #[test]
    fn goal_with_strict_difference() {
        let s = parse_clp("false :- X1 =< X2-1, s11(A,B,X,Y,X1,Y1), s21(A,B,X,Y,X2,Y2).").unwrap();
        assert_eq!(s.clauses.len(), 1);
        let c = &s.clauses[0];
        assert!(c.is_goal());
        assert_eq!(c.body.len(), 2);
        let first = &c.constraint.atoms()[0];
        assert_eq!(first.rel(), Rel::Le);
        assert_eq!(first.bound(), &rat(-1));
        assert_eq!(first.coeffs().len(), 2);
        let x1 = c.body[0].args[4];
        let x2 = c.body[1].args[4];
        assert_eq!(first.coeff(x1), rat(1));
        assert_eq!(first.coeff(x2), rat(-1));
    }

    #[test]
    fn constrained_fact_with_true_body() {
        let s = parse_clp("p(X) :- true.").unwrap();
        assert_eq!(s.clauses.len(), 1);
        assert!(s.clauses[0].body.is_empty());
        assert!(s.clauses[0].constraint.is_true());
    }

    #[test]
    fn strict_int_inequality_is_shifted() {
        let s = parse_clp("p(X,Y) :- X < Y, q(X,Y).").unwrap();
        let c = &s.clauses[0];
        let a = &c.constraint.atoms()[0];
        assert_eq!(a.bound(), &rat(-1));
        assert_eq!(a.coeff(c.head.atom().unwrap().args[0]), rat(1));
        assert_eq!(a.coeff(c.head.atom().unwrap().args[1]), rat(-1));
    }

    #[test]
    fn strict_with_rational_coefficients_scales_first() {
        // X/2 < Y  ->  X - 2Y <= -1
        let s = parse_clp("p(X,Y) :- X/2 < Y.").unwrap();
        let a = &s.clauses[0].constraint.atoms()[0];
        assert_eq!(a.coeff(Var(0)), rat(1));
        assert_eq!(a.coeff(Var(1)), rat(-2));
        assert_eq!(a.bound(), &rat(-1));
    }

    #[test]
    fn strict_over_real_is_rejected() {
        let err = parse_clp(":- pred p(real).\np(X) :- X < 1.").unwrap_err();
        assert!(matches!(err, Error::StrictOverReal { line: 2, .. }), "{err}");
    }

    #[test]
    fn arity_mismatch_is_rejected() {
        let err = parse_clp("p(X) :- q(X).\nq(X,Y) :- true.").unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { .. }));
        let err = parse_clp(":- pred q(int).\nq(X,Y) :- true.").unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { expected: 1, found: 2, .. }));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_clp("p(X) :- X =< .").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, col: 14, .. }), "{err}");
        let err = parse_clp("p(X) :- X * X =< 1.").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }));
    }

    #[test]
    fn disequality_in_goal_is_split() {
        let s = parse_clp("false :- X =\\= Y, p(X,Y).\np(X,Y) :- true.").unwrap();
        let goals: Vec<_> = s.goals().collect();
        assert_eq!(goals.len(), 2);
        assert_eq!(goals[0].constraint.atoms()[0].bound(), &rat(-1));
    }

    #[test]
    fn two_disequalities_give_four_goals() {
        let s = parse_clp("false :- X =\\= Y, Y \\= Z, p(X,Y,Z).\np(X,Y,Z) :- true.").unwrap();
        assert_eq!(s.goals().count(), 4);
    }

    #[test]
    fn disequality_outside_goal_is_rejected() {
        let err = parse_clp("p(X,Y) :- X =\\= Y.").unwrap_err();
        assert!(matches!(err, Error::Disequality { .. }));
        let err = parse_clp(":- pred p(real,real).\nfalse :- X =\\= Y, p(X,Y).").unwrap_err();
        assert!(matches!(err, Error::Disequality { .. }));
    }

    #[test]
    fn group_directive_sets_provenance() {
        let s = parse_clp("%% group p\n%% group q\n% plain comment\nfalse :- p(X), q(Y).\np(X) :- X >= 0.\nq(Y) :- Y >= 0.").unwrap();
        assert_eq!(s.provenance["p"], "group1");
        assert_eq!(s.provenance["q"], "group2");
    }

    #[test]
    fn expression_arguments_become_equalities() {
        let s = parse_clp("p(X+1, 3) :- q(X).\nq(X) :- true.").unwrap();
        let c = &s.clauses[0];
        assert_eq!(c.constraint.atoms().len(), 2);
        assert!(c.constraint.atoms().iter().all(|a| a.rel() == Rel::Eq));
    }
}
