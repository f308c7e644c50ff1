//! Algebraic decision and computation trees, their s-expression syntax and
//! their graphing interpretations.
//!
//! ```text
//! adt  := (adt (vars n) (order d) node)
//! node := yes | no | (test poly node node node)          ; sons for < 0, = 0, > 0
//! poly := rational | xI | (+ poly ...) | (- poly ...) | (* poly ...) | (^ poly e)
//! act  := (act (vars n) vertex)
//! vertex := yes | no
//!         | (let xK (op arg arg) vertex)                  ; op in + - * /
//!         | (let xK (sqrt xI) vertex)
//!         | (if (cmp xI) vertex vertex)                   ; cmp in > = >=
//! arg  := xI | rational                                   ; a constant only on the left
//! ```

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;

use crate::amc::{Amc, BinOp, Gen, Loc, Operand, Reg, Step, ValueKind};
use crate::error::{Error, Result};
use crate::graphings::{cell, loc_var, var_loc, Edge, GraphingRep, Region};
use crate::realalg::{fmt_rat, int, parse_rat, rat, Cmp, Monomial, MultiPoly, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn offset(&self) -> usize {
        match self {
            Sexp::Atom(_, o) | Sexp::List(_, o) => *o,
        }
    }
}

fn parse_sexp(text: &str) -> Result<Sexp> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0;
    let position = |offset: usize| {
        let before = &text[..offset];
        let line = before.matches('\n').count() + 1;
        let column = offset - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        (line, column)
    };
    fn skip_ws(chars: &[(usize, char)], pos: &mut usize) {
        while *pos < chars.len() {
            let c = chars[*pos].1;
            if c == ';' {
                while *pos < chars.len() && chars[*pos].1 != '\n' {
                    *pos += 1;
                }
            } else if c.is_whitespace() {
                *pos += 1;
            } else {
                break;
            }
        }
    }
    fn read(chars: &[(usize, char)], pos: &mut usize, end: usize) -> std::result::Result<Sexp, (usize, String)> {
        skip_ws(chars, pos);
        let Some(&(off, c)) = chars.get(*pos) else {
            return Err((end, "unexpected end of input".into()));
        };
        match c {
            '(' => {
                *pos += 1;
                let mut items = Vec::new();
                loop {
                    skip_ws(chars, pos);
                    match chars.get(*pos) {
                        None => return Err((end, "unclosed `(`".into())),
                        Some((_, ')')) => {
                            *pos += 1;
                            return Ok(Sexp::List(items, off));
                        }
                        _ => items.push(read(chars, pos, end)?),
                    }
                }
            }
            ')' => Err((off, "unexpected `)`".into())),
            _ => {
                let start = *pos;
                while *pos < chars.len() && !chars[*pos].1.is_whitespace() && !matches!(chars[*pos].1, '(' | ')' | ';') {
                    *pos += 1;
                }
                Ok(Sexp::Atom(chars[start..*pos].iter().map(|c| c.1).collect(), off))
            }
        }
    }
    let result = read(&chars, &mut pos, text.len()).and_then(|s| {
        skip_ws(&chars, &mut pos);
        match chars.get(pos) {
            Some(&(off, _)) => Err((off, "trailing input".into())),
            None => Ok(s),
        }
    });
    result.map_err(|(off, msg)| {
        let (line, column) = position(off);
        Error::Parse {
            line: Some(line),
            column: Some(column),
            msg,
        }
    })
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn err(&self, s: &Sexp, msg: impl Into<String>) -> Error {
        let off = s.offset();
        let before = &self.text[..off];
        let line = before.matches('\n').count() + 1;
        let column = off - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        Error::Parse {
            line: Some(line),
            column: Some(column),
            msg: msg.into(),
        }
    }

    fn atom<'s>(&self, s: &'s Sexp) -> Result<&'s str> {
        match s {
            Sexp::Atom(a, _) => Ok(a),
            _ => Err(self.err(s, "expected an atom")),
        }
    }

    fn list<'s>(&self, s: &'s Sexp, head: &str) -> Result<&'s [Sexp]> {
        match s {
            Sexp::List(items, _) if matches!(items.first(), Some(Sexp::Atom(h, _)) if h == head) => Ok(&items[1..]),
            _ => Err(self.err(s, format!("expected `({head} ...)`"))),
        }
    }

    fn number(&self, s: &Sexp) -> Result<u64> {
        self.atom(s)?.parse().map_err(|_| self.err(s, "expected a natural number"))
    }

    fn var(&self, s: &Sexp) -> Result<u64> {
        let a = self.atom(s)?;
        a.strip_prefix('x')
            .and_then(|i| i.parse().ok())
            .filter(|&i| i >= 1)
            .ok_or_else(|| self.err(s, format!("expected a variable `xI`, found `{a}`")))
    }

    fn header(&self, items: &[Sexp], key: &str) -> Result<u64> {
        items
            .iter()
            .find_map(|s| match s {
                Sexp::List(l, _) if matches!(l.first(), Some(Sexp::Atom(h, _)) if h == key) && l.len() == 2 => Some(self.number(&l[1])),
                _ => None,
            })
            .unwrap_or_else(|| Err(Error::parse(format!("missing `({key} N)`"))))
    }

    fn poly(&self, s: &Sexp) -> Result<MultiPoly> {
        match s {
            Sexp::Atom(a, _) if a.starts_with('x') => Ok(cell(Loc::shared(self.var(s)?))),
            Sexp::Atom(a, _) => parse_rat(a)
                .map(MultiPoly::constant)
                .map_err(|_| self.err(s, format!("bad constant `{a}`"))),
            Sexp::List(items, _) => {
                let head = items.first().ok_or_else(|| self.err(s, "empty list"))?;
                let args = &items[1..];
                let ps = || args.iter().map(|a| self.poly(a)).collect::<Result<Vec<_>>>();
                match self.atom(head)? {
                    "+" => Ok(ps()?.iter().fold(MultiPoly::zero(), |a, b| &a + b)),
                    "*" => Ok(ps()?.iter().fold(MultiPoly::constant(int(1)), |a, b| &a * b)),
                    "-" => {
                        let ps = ps()?;
                        match ps.split_first() {
                            Some((f, [])) => Ok(-f),
                            Some((f, rest)) => Ok(rest.iter().fold(f.clone(), |a, b| &a - b)),
                            None => Err(self.err(s, "`-` needs an argument")),
                        }
                    }
                    "^" if args.len() == 2 => Ok(self.poly(&args[0])?.pow(self.number(&args[1])? as u32)),
                    h => Err(self.err(head, format!("unknown polynomial operator `{h}`"))),
                }
            }
        }
    }
}

fn poly_sexp(p: &MultiPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let terms: Vec<String> = p
        .terms()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            if m.degree() == 0 || c != &int(1) {
                factors.push(fmt_rat(c));
            }
            for (v, e) in m.iter() {
                let Loc { index, .. } = var_loc(v);
                factors.push(if e == 1 { format!("x{index}") } else { format!("(^ x{index} {e})") });
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    if terms.len() == 1 {
        terms[0].clone()
    } else {
        format!("(+ {})", terms.join(" "))
    }
}

/// Ternary tree of polynomial sign tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AdtNode {
    Leaf(bool),
    Test {
        poly: MultiPoly,
        lt: Box<AdtNode>,
        eq: Box<AdtNode>,
        gt: Box<AdtNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgDecisionTree {
    pub vars: u64,
    pub order: u32,
    pub root: AdtNode,
}

impl AdtNode {
    pub fn height(&self) -> usize {
        match self {
            AdtNode::Leaf(_) => 0,
            AdtNode::Test { lt, eq, gt, .. } => 1 + lt.height().max(eq.height()).max(gt.height()),
        }
    }

    fn max_degree(&self) -> u32 {
        match self {
            AdtNode::Leaf(_) => 0,
            AdtNode::Test { poly, lt, eq, gt } => poly
                .total_degree()
                .max(lt.max_degree())
                .max(eq.max_degree())
                .max(gt.max_degree()),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            AdtNode::Leaf(b) => out.push_str(if *b { "yes" } else { "no" }),
            AdtNode::Test { poly, lt, eq, gt } => {
                out.push_str(&format!("(test {} ", poly_sexp(poly)));
                lt.write(out);
                out.push(' ');
                eq.write(out);
                out.push(' ');
                gt.write(out);
                out.push(')');
            }
        }
    }
}

impl AlgDecisionTree {
    pub fn height(&self) -> usize {
        self.root.height()
    }

    pub fn validate(&self) -> Result<()> {
        if self.root.max_degree() > self.order {
            return Err(Error::invalid(format!(
                "node degree {} exceeds declared order {}",
                self.root.max_degree(),
                self.order
            )));
        }
        Ok(())
    }

    /// Whether `x` is accepted.
    pub fn decide(&self, x: &[Rat]) -> bool {
        let mut node = &self.root;
        loop {
            match node {
                AdtNode::Leaf(b) => return *b,
                AdtNode::Test { poly, lt, eq, gt } => {
                    let v = poly.eval(&|v| {
                        let i = var_loc(v).index as usize;
                        x.get(i - 1).cloned().unwrap_or_default()
                    });
                    node = match crate::realalg::sign(&v) {
                        -1 => lt,
                        0 => eq,
                        _ => gt,
                    };
                }
            }
        }
    }

    /// Sign conditions of every accepting root-to-leaf path.
    pub fn yes_paths(&self) -> Vec<Vec<(MultiPoly, Cmp)>> {
        fn walk(n: &AdtNode, acc: &mut Vec<(MultiPoly, Cmp)>, out: &mut Vec<Vec<(MultiPoly, Cmp)>>) {
            match n {
                AdtNode::Leaf(true) => out.push(acc.clone()),
                AdtNode::Leaf(false) => {}
                AdtNode::Test { poly, lt, eq, gt } => {
                    for (child, c) in [(lt, Cmp::Lt), (eq, Cmp::Eq), (gt, Cmp::Gt)] {
                        acc.push((poly.clone(), c));
                        walk(child, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for AlgDecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(&mut s);
        write!(f, "(adt (vars {}) (order {}) {s})", self.vars, self.order)
    }
}

fn adt_node(cx: &Ctx, s: &Sexp) -> Result<AdtNode> {
    match s {
        Sexp::Atom(a, _) if a == "yes" => Ok(AdtNode::Leaf(true)),
        Sexp::Atom(a, _) if a == "no" => Ok(AdtNode::Leaf(false)),
        _ => {
            let args = cx.list(s, "test")?;
            if args.len() != 4 {
                return Err(cx.err(s, "`test` takes a polynomial and three sons"));
            }
            Ok(AdtNode::Test {
                poly: cx.poly(&args[0])?,
                lt: Box::new(adt_node(cx, &args[1])?),
                eq: Box::new(adt_node(cx, &args[2])?),
                gt: Box::new(adt_node(cx, &args[3])?),
            })
        }
    }
}

pub fn parse_adt(text: &str) -> Result<AlgDecisionTree> {
    let cx = Ctx { text };
    let s = parse_sexp(text)?;
    let items = cx.list(&s, "adt")?;
    let body = items.last().ok_or_else(|| cx.err(&s, "missing tree"))?;
    let t = AlgDecisionTree {
        vars: cx.header(items, "vars")?,
        order: cx.header(items, "order")? as u32,
        root: adt_node(&cx, body)?,
    };
    t.validate()?;
    Ok(t)
}

/// Graphing with one state per test node plus `⊤` and `⊥`; each test node
/// has three identity edges whose sources split on the sign of its polynomial.
pub fn interpret_adt(t: &AlgDecisionTree) -> GraphingRep {
    let mut g = GraphingRep::new(Amc::trivial(ValueKind::Real), vec!["top".into(), "bottom".into()]);
    fn walk(g: &mut GraphingRep, n: &AdtNode) -> usize {
        match n {
            AdtNode::Leaf(true) => 0,
            AdtNode::Leaf(false) => 1,
            AdtNode::Test { poly, lt, eq, gt } => {
                let id = g.states.len();
                g.states.push(format!("n{id}"));
                for (child, c) in [(lt, Cmp::Lt), (eq, Cmp::Eq), (gt, Cmp::Gt)] {
                    let to = walk(g, child);
                    g.edges.push(Edge::new(Region::poly_atom(poly, c), id, Vec::new(), to));
                }
                id
            }
        }
    }
    let root = walk(&mut g, &t.root);
    g.init = Some(root);
    g.top = Some(0);
    g.bottom = Some(1);
    g
}

/// Comparison tested at a branch vertex of a computation tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActTest {
    Gt,
    Eq,
    Ge,
}

impl ActTest {
    fn cmp(self) -> Cmp {
        match self {
            ActTest::Gt => Cmp::Gt,
            ActTest::Eq => Cmp::Eq,
            ActTest::Ge => Cmp::Ge,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActOp {
    /// `f_k = a op f_j`, where `a` is an earlier value or a constant.
    Bin { op: BinOp, lhs: Operand, rhs: u64 },
    Sqrt(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ActNode {
    Leaf(bool),
    Op {
        target: u64,
        op: ActOp,
        next: Box<ActNode>,
    },
    Branch {
        test: ActTest,
        value: u64,
        yes: Box<ActNode>,
        no: Box<ActNode>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgComputationTree {
    pub vars: u64,
    pub root: ActNode,
}

impl ActNode {
    pub fn depth(&self) -> usize {
        match self {
            ActNode::Leaf(_) => 0,
            ActNode::Op { next, .. } => 1 + next.depth(),
            ActNode::Branch { yes, no, .. } => 1 + yes.depth().max(no.depth()),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            ActNode::Leaf(b) => out.push_str(if *b { "yes" } else { "no" }),
            ActNode::Op { target, op, next } => {
                let op = match op {
                    ActOp::Bin { op, lhs, rhs } => {
                        let lhs = match lhs {
                            Operand::Reg(r) => format!("x{}", r.index),
                            Operand::Const(c) => fmt_rat(c),
                        };
                        format!("({} {lhs} x{rhs})", op.symbol())
                    }
                    ActOp::Sqrt(i) => format!("(sqrt x{i})"),
                };
                out.push_str(&format!("(let x{target} {op} "));
                next.write(out);
                out.push(')');
            }
            ActNode::Branch { test, value, yes, no } => {
                out.push_str(&format!("(if ({} x{value}) ", test.cmp().symbol()));
                yes.write(out);
                out.push(' ');
                no.write(out);
                out.push(')');
            }
        }
    }
}

impl AlgComputationTree {
    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// Checks that every operand is an input or was computed on the path.
    pub fn validate(&self) -> Result<()> {
        fn walk(n: &ActNode, vars: u64, defined: &mut BTreeSet<u64>) -> Result<()> {
            let check = |i: u64, defined: &BTreeSet<u64>| {
                if (1..=vars).contains(&i) || defined.contains(&i) {
                    Ok(())
                } else {
                    Err(Error::invalid(format!("x{i} is used before it is computed")))
                }
            };
            match n {
                ActNode::Leaf(_) => Ok(()),
                ActNode::Op { target, op, next } => {
                    if *target <= vars {
                        return Err(Error::invalid(format!("vertex x{target} overwrites an input")));
                    }
                    match op {
                        ActOp::Bin { op, lhs, rhs } => {
                            if *op == BinOp::Euclid {
                                return Err(Error::invalid("computation trees use real division"));
                            }
                            if let Operand::Reg(r) = lhs {
                                check(r.index, defined)?;
                            }
                            check(*rhs, defined)?;
                        }
                        ActOp::Sqrt(i) => check(*i, defined)?,
                    }
                    let fresh = defined.insert(*target);
                    let r = walk(next, vars, defined);
                    if fresh {
                        defined.remove(target);
                    }
                    r
                }
                ActNode::Branch { value, yes, no, .. } => {
                    check(*value, defined)?;
                    walk(yes, vars, defined)?;
                    walk(no, vars, defined)
                }
            }
        }
        walk(&self.root, self.vars, &mut BTreeSet::new())
    }
}

impl fmt::Display for AlgComputationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.write(&mut s);
        write!(f, "(act (vars {}) {s})", self.vars)
    }
}

fn act_node(cx: &Ctx, s: &Sexp) -> Result<ActNode> {
    match s {
        Sexp::Atom(a, _) if a == "yes" => Ok(ActNode::Leaf(true)),
        Sexp::Atom(a, _) if a == "no" => Ok(ActNode::Leaf(false)),
        Sexp::List(items, _) if matches!(items.first(), Some(Sexp::Atom(h, _)) if h == "let") => {
            let args = &items[1..];
            if args.len() != 3 {
                return Err(cx.err(s, "`let` takes a target, an operation and a continuation"));
            }
            let target = cx.var(&args[0])?;
            let Sexp::List(op, _) = &args[1] else {
                return Err(cx.err(&args[1], "expected an operation"));
            };
            let head = cx.atom(op.first().ok_or_else(|| cx.err(&args[1], "empty operation"))?)?;
            let op = match (head, &op[1..]) {
                ("sqrt", [a]) => ActOp::Sqrt(cx.var(a)?),
                (h @ ("+" | "-" | "*" | "/"), [a, b]) => {
                    let op = match h {
                        "+" => BinOp::Add,
                        "-" => BinOp::Sub,
                        "*" => BinOp::Mul,
                        _ => BinOp::Div,
                    };
                    let lhs = match cx.atom(a)? {
                        v if v.starts_with('x') => Operand::Reg(Reg::x(cx.var(a)?)),
                        c => Operand::Const(parse_rat(c).map_err(|_| cx.err(a, format!("bad constant `{c}`")))?),
                    };
                    ActOp::Bin { op, lhs, rhs: cx.var(b)? }
                }
                _ => return Err(cx.err(&args[1], format!("unknown operation `{head}`"))),
            };
            Ok(ActNode::Op {
                target,
                op,
                next: Box::new(act_node(cx, &args[2])?),
            })
        }
        _ => {
            let args = cx.list(s, "if")?;
            if args.len() != 3 {
                return Err(cx.err(s, "`if` takes a test and two branches"));
            }
            let Sexp::List(t, _) = &args[0] else {
                return Err(cx.err(&args[0], "expected a test such as `(> x4)`"));
            };
            let test = match (t.first().map(|a| cx.atom(a)).transpose()?, t.len()) {
                (Some(">"), 2) => ActTest::Gt,
                (Some("="), 2) => ActTest::Eq,
                (Some(">="), 2) => ActTest::Ge,
                _ => return Err(cx.err(&args[0], "tests are `(> xI)`, `(= xI)` or `(>= xI)`")),
            };
            Ok(ActNode::Branch {
                test,
                value: cx.var(&t[1])?,
                yes: Box::new(act_node(cx, &args[1])?),
                no: Box::new(act_node(cx, &args[2])?),
            })
        }
    }
}

pub fn parse_act(text: &str) -> Result<AlgComputationTree> {
    let cx = Ctx { text };
    let s = parse_sexp(text)?;
    let items = cx.list(&s, "act")?;
    let body = items.last().ok_or_else(|| cx.err(&s, "missing tree"))?;
    let t = AlgComputationTree {
        vars: cx.header(items, "vars")?,
        root: act_node(&cx, body)?,
    };
    t.validate()?;
    Ok(t)
}

fn act_gen(target: u64, op: &ActOp) -> Gen {
    match op {
        ActOp::Bin { op, lhs, rhs } => Gen::Bin {
            op: *op,
            dst: Reg::x(target),
            lhs: lhs.clone(),
            rhs: Reg::x(*rhs),
        },
        ActOp::Sqrt(i) => Gen::Sqrt {
            dst: Reg::x(target),
            arg: Reg::x(*i),
        },
    }
}

/// Computational treeing with one state per vertex plus `⊤` and `⊥`.
/// Divisions act on `{x_k != 0}`, square roots on `{x_k >= 0}`, and each
/// branch vertex has two identity edges.
pub fn interpret_act(t: &AlgComputationTree) -> Result<GraphingRep> {
    t.validate()?;
    let mut gens = Vec::new();
    fn collect(n: &ActNode, gens: &mut Vec<Gen>) {
        match n {
            ActNode::Leaf(_) => {}
            ActNode::Op { target, op, next } => {
                gens.push(act_gen(*target, op));
                collect(next, gens);
            }
            ActNode::Branch { yes, no, .. } => {
                collect(yes, gens);
                collect(no, gens);
            }
        }
    }
    collect(&t.root, &mut gens);
    let amc = Amc::act(gens)?;
    let mut g = GraphingRep::new(amc, vec!["top".into(), "bottom".into()]);
    fn walk(g: &mut GraphingRep, n: &ActNode) -> usize {
        match n {
            ActNode::Leaf(true) => 0,
            ActNode::Leaf(false) => 1,
            ActNode::Op { target, op, next } => {
                let id = g.states.len();
                g.states.push(format!("v{id}"));
                let source = match op {
                    ActOp::Bin { op: BinOp::Div, rhs, .. } => Region::atom(Loc::shared(*rhs), Cmp::Ne),
                    ActOp::Sqrt(i) => Region::atom(Loc::shared(*i), Cmp::Ge),
                    _ => Region::whole(),
                };
                let sym = g.amc.symbol_for(&act_gen(*target, op), 1);
                let to = walk(g, next);
                g.edges.push(Edge::new(source, id, vec![Step::single(sym)], to));
                id
            }
            ActNode::Branch { test, value, yes, no } => {
                let id = g.states.len();
                g.states.push(format!("v{id}"));
                let c = test.cmp();
                let y = walk(g, yes);
                let n = walk(g, no);
                g.edges.push(Edge::new(Region::atom(Loc::shared(*value), c), id, Vec::new(), y));
                g.edges.push(Edge::new(Region::atom(Loc::shared(*value), c.negate()), id, Vec::new(), n));
                id
            }
        }
    }
    let root = walk(&mut g, &t.root);
    g.init = Some(root);
    g.top = Some(0);
    g.bottom = Some(1);
    g.validate()?;
    Ok(g)
}

/// The element-distinctness tree on three inputs.
pub fn element_distinctness_act() -> AlgComputationTree {
    parse_act(
        "(act (vars 3)
           (let x4 (- x1 x2)
           (let x5 (- x1 x3)
           (let x6 (- x2 x3)
           (let x7 (* x4 x5)
           (let x8 (* x7 x6)
           (if (= x8) no yes)))))))",
    )
    .expect("built-in tree parses")
}

fn random_poly(rng: &mut impl Rng, vars: u64, degree: u32) -> MultiPoly {
    let mut p = MultiPoly::zero();
    let monomials: Vec<Monomial> = if vars == 1 {
        (0..=degree).map(|e| Monomial::from_pairs([(loc_var(Loc::shared(1)), e)])).collect()
    } else {
        let mut out = vec![Monomial::one()];
        for v in 1..=vars {
            for e in 1..=degree {
                out.push(Monomial::from_pairs([(loc_var(Loc::shared(v)), e)]));
            }
        }
        out
    };
    for m in monomials {
        let c = rng.gen_range(-4i64..=4);
        if c != 0 {
            p.add_term(m, rat(c, rng.gen_range(1..=2)));
        }
    }
    if p.total_degree() < degree {
        p.add_term(Monomial::from_pairs([(loc_var(Loc::shared(1)), degree)]), int(1));
    }
    p
}

/// Random decision tree of height at most `h` over `vars` inputs with node
/// polynomials of degree at most `d`.
pub fn random_adt(rng: &mut impl Rng, vars: u64, h: usize, d: u32) -> AlgDecisionTree {
    fn node(rng: &mut impl Rng, vars: u64, h: usize, d: u32) -> AdtNode {
        if h == 0 || rng.gen_bool(0.25) {
            return AdtNode::Leaf(rng.gen_bool(0.5));
        }
        let deg = rng.gen_range(1..=d);
        AdtNode::Test {
            poly: random_poly(rng, vars, deg),
            lt: Box::new(node(rng, vars, h - 1, d)),
            eq: Box::new(node(rng, vars, h - 1, d)),
            gt: Box::new(node(rng, vars, h - 1, d)),
        }
    }
    AlgDecisionTree {
        vars,
        order: d,
        root: node(rng, vars, h, d),
    }
}

/// Random computation tree of depth at most `k` over `vars` inputs, using
/// `+ - * /` and branch tests.
pub fn random_act(rng: &mut impl Rng, vars: u64, k: usize) -> AlgComputationTree {
    fn node(rng: &mut impl Rng, vars: u64, k: usize, defined: &mut Vec<u64>) -> ActNode {
        if k == 0 || rng.gen_bool(0.15) {
            return ActNode::Leaf(rng.gen_bool(0.5));
        }
        let pick = |rng: &mut dyn rand::RngCore, d: &[u64]| d[rng.gen_range(0..d.len())];
        if rng.gen_bool(0.4) {
            let test = [ActTest::Gt, ActTest::Eq, ActTest::Ge][rng.gen_range(0..3)];
            let value = pick(rng, defined);
            return ActNode::Branch {
                test,
                value,
                yes: Box::new(node(rng, vars, k - 1, defined)),
                no: Box::new(node(rng, vars, k - 1, defined)),
            };
        }
        let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][rng.gen_range(0..4)];
        let lhs = if rng.gen_bool(0.3) {
            Operand::Const(int(rng.gen_range(-3..=3)))
        } else {
            Operand::Reg(Reg::x(pick(rng, defined)))
        };
        let rhs = pick(rng, defined);
        let target = defined.iter().max().unwrap() + 1;
        defined.push(target);
        let next = node(rng, vars, k - 1, defined);
        defined.pop();
        ActNode::Op {
            target,
            op: ActOp::Bin { op, lhs, rhs },
            next: Box::new(next),
        }
    }
    let mut defined: Vec<u64> = (1..=vars).collect();
    AlgComputationTree {
        vars,
        root: node(rng, vars, k, &mut defined),
    }
}
