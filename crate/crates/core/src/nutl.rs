//! Vectorial alternation-free linear-time μ-calculus.
//!
//! Formulas live in a [`NutlTuple`]: an arena of hash-consed nodes and
//! fixed-point blocks together with a list of root formulas. Structurally equal
//! subformulas are the same node, and a block `σ (X0, …).(φ0; …)` is identified
//! by its kind, variables and bodies. A variable may occur in several places of
//! the text as long as every occurrence of its binder is the same block.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};

use petgraph::graph::{DiGraph, NodeIndex};

use crate::alphabet::{is_identifier, Alphabet, LetterId, LetterSet};
use crate::condition::Condition;
use crate::error::{Error, Result};
use crate::lasso::LassoWord;
use crate::lex::{Lexer, Tok};
use crate::waa::{StateId, Waa};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixKind {
    Mu,
    Nu,
}

impl FixKind {
    pub fn dual(self) -> FixKind {
        match self {
            FixKind::Mu => FixKind::Nu,
            FixKind::Nu => FixKind::Mu,
        }
    }
}

impl fmt::Display for FixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixKind::Mu => "mu",
            FixKind::Nu => "nu",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Node {
    Letter(LetterId),
    NegLetter(LetterId),
    Var(VarId),
    Next(NodeId),
    Or(NodeId, NodeId),
    And(NodeId, NodeId),
    /// Component `i` of the block's vectorial fixed point.
    Fix(BlockId, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Block {
    pub kind: FixKind,
    pub vars: Vec<VarId>,
    pub bodies: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct NutlTuple {
    alphabet: Alphabet,
    var_names: Vec<String>,
    var_index: HashMap<String, VarId>,
    binder: Vec<Option<(BlockId, usize)>>,
    nodes: Vec<Node>,
    node_index: HashMap<Node, NodeId>,
    blocks: Vec<Block>,
    block_index: HashMap<Block, BlockId>,
    roots: Vec<NodeId>,
}

impl NutlTuple {
    pub fn new(alphabet: Alphabet) -> Self {
        NutlTuple {
            alphabet,
            var_names: Vec::new(),
            var_index: HashMap::new(),
            binder: Vec::new(),
            nodes: Vec::new(),
            node_index: HashMap::new(),
            blocks: Vec::new(),
            block_index: HashMap::new(),
            roots: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    pub fn push_root(&mut self, node: NodeId) {
        self.roots.push(node);
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id.0]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id.0]
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.var_names[v.0]
    }

    /// The block binding `v` and the position of `v` in it.
    pub fn binder(&self, v: VarId) -> Option<(BlockId, usize)> {
        self.binder[v.0]
    }

    fn intern(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.node_index.get(&node) {
            return id;
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(node);
        self.node_index.insert(node, id);
        id
    }

    pub fn letter(&mut self, a: LetterId) -> NodeId {
        self.intern(Node::Letter(a))
    }

    pub fn neg_letter(&mut self, a: LetterId) -> NodeId {
        self.intern(Node::NegLetter(a))
    }

    pub fn next(&mut self, n: NodeId) -> NodeId {
        self.intern(Node::Next(n))
    }

    pub fn or(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::Or(l, r))
    }

    pub fn and(&mut self, l: NodeId, r: NodeId) -> NodeId {
        self.intern(Node::And(l, r))
    }

    /// Right-nested disjunction, `None` when empty.
    pub fn any(&mut self, items: Vec<NodeId>) -> Option<NodeId> {
        items.into_iter().rev().reduce(|acc, n| self.or(n, acc))
    }

    /// Right-nested conjunction, `None` when empty.
    pub fn all(&mut self, items: Vec<NodeId>) -> Option<NodeId> {
        items.into_iter().rev().reduce(|acc, n| self.and(n, acc))
    }

    /// The variable with this name, created on first use.
    pub fn variable(&mut self, name: &str) -> Result<VarId> {
        if let Some(&v) = self.var_index.get(name) {
            return Ok(v);
        }
        if !is_identifier(name) || name == "O" || fix_prefix(name).is_some() {
            return Err(Error::Invalid(format!("`{name}` is not a valid variable name")));
        }
        if self.alphabet.lookup(name).is_some() {
            return Err(Error::Invalid(format!("variable `{name}` clashes with a letter")));
        }
        let v = VarId(self.var_names.len());
        self.var_names.push(name.to_string());
        self.var_index.insert(name.to_string(), v);
        self.binder.push(None);
        Ok(v)
    }

    pub fn var(&mut self, v: VarId) -> NodeId {
        self.intern(Node::Var(v))
    }

    /// Interns a block. Fails if the variables are not distinct, if the arity
    /// is off, or if a variable is already bound by a different block.
    pub fn fix_block(&mut self, kind: FixKind, vars: Vec<VarId>, bodies: Vec<NodeId>) -> Result<BlockId> {
        if vars.is_empty() || vars.len() != bodies.len() {
            return Err(Error::Invalid("a fixed-point block needs one body per variable".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!(
                    "variable `{}` occurs twice in one block",
                    self.var_name(*v)
                )));
            }
        }
        let block = Block { kind, vars, bodies };
        if let Some(&id) = self.block_index.get(&block) {
            return Ok(id);
        }
        for v in &block.vars {
            if self.binder[v.0].is_some() {
                return Err(Error::Invalid(format!("variable `{}` is bound twice", self.var_name(*v))));
            }
        }
        let id = BlockId(self.blocks.len());
        for (i, v) in block.vars.iter().enumerate() {
            self.binder[v.0] = Some((id, i));
        }
        let arity = block.vars.len();
        self.blocks.push(block.clone());
        self.block_index.insert(block, id);
        for i in 0..arity {
            self.intern(Node::Fix(id, i));
        }
        Ok(id)
    }

    pub fn fix(&mut self, block: BlockId, i: usize) -> Result<NodeId> {
        if i >= self.block(block).vars.len() {
            return Err(Error::Invalid(format!(
                "fixed-point index {i} out of range for a block of {} variables",
                self.block(block).vars.len()
            )));
        }
        Ok(self.intern(Node::Fix(block, i)))
    }

    fn children(&self, id: NodeId) -> Vec<NodeId> {
        match self.node(id) {
            Node::Letter(_) | Node::NegLetter(_) | Node::Var(_) => vec![],
            Node::Next(c) => vec![c],
            Node::Or(l, r) | Node::And(l, r) => vec![l, r],
            Node::Fix(b, _) => self.block(b).bodies.clone(),
        }
    }

    /// Free variables of every node, indexed by [`NodeId`].
    pub fn free_vars(&self) -> Vec<BTreeSet<VarId>> {
        let mut fv: Vec<BTreeSet<VarId>> = Vec::with_capacity(self.nodes.len());
        for (i, node) in self.nodes.iter().enumerate() {
            let set = match *node {
                Node::Var(v) => BTreeSet::from([v]),
                Node::Fix(b, _) => {
                    let block = self.block(b);
                    let mut s: BTreeSet<VarId> =
                        block.bodies.iter().flat_map(|c| fv[c.0].iter().copied()).collect();
                    for v in &block.vars {
                        s.remove(v);
                    }
                    s
                }
                _ => self.children(NodeId(i)).iter().flat_map(|c| fv[c.0].iter().copied()).collect(),
            };
            fv.push(set);
        }
        fv
    }

    pub fn is_closed(&self, id: NodeId) -> bool {
        self.free_vars()[id.0].is_empty()
    }

    fn check_roots_closed(&self) -> Result<()> {
        let fv = self.free_vars();
        for (j, r) in self.roots.iter().enumerate() {
            if let Some(v) = fv[r.0].iter().next() {
                return Err(Error::Check(format!(
                    "formula {j} is not closed: `{}` is free",
                    self.var_name(*v)
                )));
            }
        }
        Ok(())
    }

    pub fn display(&self, id: NodeId) -> String {
        let mut out = String::new();
        self.write(&mut out, id, 0);
        out
    }

    fn write(&self, out: &mut String, id: NodeId, level: u8) {
        let node = self.node(id);
        let own = match node {
            Node::Or(..) => 0,
            Node::And(..) => 1,
            _ => 2,
        };
        if own < level {
            out.push('(');
        }
        match node {
            Node::Letter(a) => out.push_str(self.alphabet.name(a)),
            Node::NegLetter(a) => {
                out.push('!');
                out.push_str(self.alphabet.name(a));
            }
            Node::Var(v) => out.push_str(self.var_name(v)),
            Node::Next(c) => {
                out.push_str("O ");
                self.write(out, c, 2);
            }
            Node::Or(l, r) => {
                self.write(out, l, 0);
                out.push_str(" | ");
                self.write(out, r, 1);
            }
            Node::And(l, r) => {
                self.write(out, l, 1);
                out.push_str(" & ");
                self.write(out, r, 2);
            }
            Node::Fix(b, i) => {
                let block = self.block(b);
                let vars: Vec<&str> = block.vars.iter().map(|v| self.var_name(*v)).collect();
                let _ = write!(out, "{}_{i} ({}).(", block.kind, vars.join(", "));
                for (k, body) in block.bodies.iter().enumerate() {
                    if k > 0 {
                        out.push_str("; ");
                    }
                    self.write(out, *body, 0);
                }
                out.push(')');
            }
        }
        if own < level {
            out.push(')');
        }
    }

    /// `to_text` preceded by an `alphabet:` line.
    pub fn to_file(&self) -> String {
        format!("alphabet: {}\n{}", self.alphabet, self.to_text())
    }

    /// One root formula per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.roots {
            out.push_str(&self.display(*r));
            out.push('\n');
        }
        out
    }

    /// Parses one formula and appends it as a root.
    pub fn parse_root(&mut self, text: &str, line: usize) -> Result<NodeId> {
        if self.alphabet.lookup("O").is_some() {
            return Err(Error::Invalid("letter `O` clashes with the next operator".into()));
        }
        let mut p = Parser {
            lx: Lexer::new(text, line)?,
            t: self,
            scope: Vec::new(),
        };
        let root = p.or()?;
        p.lx.finish()?;
        self.roots.push(root);
        Ok(root)
    }

    /// One closed formula per non-empty line, `#` comments.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let mut t = NutlTuple::new(alphabet.clone());
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            if line.trim_start().starts_with("alphabet:") {
                continue;
            }
            if !line.trim().is_empty() {
                t.parse_root(line, i + 1)?;
            }
        }
        if t.roots.is_empty() {
            return Err(Error::parse(1, 1, "no formula given"));
        }
        Ok(t)
    }
}

/// A tuple file whose alphabet is given by an `alphabet:` line, unless
/// `alphabet` overrides it.
pub fn parse_tuple_file(text: &str, alphabet: Option<&Alphabet>) -> Result<NutlTuple> {
    let header = text.lines().enumerate().find_map(|(i, l)| {
        l.split('#').next().unwrap_or("").trim().strip_prefix("alphabet:").map(|rest| (i + 1, rest))
    });
    let alphabet = match (alphabet, header) {
        (Some(a), _) => a.clone(),
        (None, Some((line, rest))) => {
            Alphabet::new(rest.split_whitespace()).map_err(|e| Error::parse(line, 1, e.to_string()))?
        }
        (None, None) => return Err(Error::parse(1, 1, "missing `alphabet:` line")),
    };
    NutlTuple::parse(text, &alphabet)
}

/// A single formula.
pub fn parse_nutl(text: &str, alphabet: &Alphabet) -> Result<NutlTuple> {
    let mut t = NutlTuple::new(alphabet.clone());
    t.parse_root(text, 1)?;
    Ok(t)
}

fn fix_prefix(name: &str) -> Option<(FixKind, &str)> {
    if let Some(rest) = name.strip_prefix("mu_") {
        Some((FixKind::Mu, rest))
    } else {
        name.strip_prefix("nu_").map(|rest| (FixKind::Nu, rest))
    }
}

struct Parser<'a> {
    lx: Lexer,
    t: &'a mut NutlTuple,
    scope: Vec<Vec<String>>,
}

impl Parser<'_> {
    fn or(&mut self) -> Result<NodeId> {
        let mut n = self.and()?;
        while self.lx.eat('|') {
            let r = self.and()?;
            n = self.t.or(n, r);
        }
        Ok(n)
    }

    fn and(&mut self) -> Result<NodeId> {
        let mut n = self.unary()?;
        while self.lx.eat('&') {
            let r = self.unary()?;
            n = self.t.and(n, r);
        }
        Ok(n)
    }

    fn unary(&mut self) -> Result<NodeId> {
        match self.lx.next() {
            Some(Tok::Sym('(')) => {
                let n = self.or()?;
                self.lx.expect(')')?;
                Ok(n)
            }
            Some(Tok::Sym('!')) => match self.lx.next() {
                Some(Tok::Ident(s)) => match self.t.alphabet.lookup(&s) {
                    Some(a) => Ok(self.t.neg_letter(a)),
                    None => Err(self.lx.error_prev("negation is only allowed in front of a letter")),
                },
                _ => Err(self.lx.error_prev("negation is only allowed in front of a letter")),
            },
            Some(Tok::Ident(s)) if s == "O" => {
                let c = self.unary()?;
                Ok(self.t.next(c))
            }
            Some(Tok::Ident(s)) => {
                if let Some((kind, index)) = fix_prefix(&s) {
                    let index: usize = index
                        .parse()
                        .map_err(|_| self.lx.error_prev(format!("bad fixed-point index in `{s}`")))?;
                    return self.fix(kind, index);
                }
                if self.scope.iter().any(|frame| frame.contains(&s)) {
                    let v = self.t.variable(&s).map_err(|e| self.lx.error_prev(e.to_string()))?;
                    return Ok(self.t.var(v));
                }
                match self.t.alphabet.lookup(&s) {
                    Some(a) => Ok(self.t.letter(a)),
                    None => Err(self.lx.error_prev(format!("unknown letter or unbound variable `{s}`"))),
                }
            }
            Some(Tok::Sym(c)) => Err(self.lx.error_prev(format!("unexpected `{c}`"))),
            None => Err(self.lx.error("unexpected end of formula")),
        }
    }

    fn fix(&mut self, kind: FixKind, index: usize) -> Result<NodeId> {
        let start = self.lx.column();
        self.lx.expect('(')?;
        let mut names = vec![self.lx.ident()?];
        while self.lx.eat(',') {
            names.push(self.lx.ident()?);
        }
        self.lx.expect(')')?;
        self.lx.expect('.')?;
        let mut vars = Vec::new();
        for name in &names {
            vars.push(self.t.variable(name).map_err(|e| self.lx.error_prev(e.to_string()))?);
        }
        self.scope.push(names);
        self.lx.expect('(')?;
        let mut bodies = vec![self.or()?];
        while self.lx.eat(';') {
            bodies.push(self.or()?);
        }
        self.lx.expect(')')?;
        self.scope.pop();
        let at = |e: Error| match e {
            Error::Invalid(m) => Error::parse(self.lx.line(), start, m),
            e => e,
        };
        let block = self.t.fix_block(kind, vars, bodies).map_err(at)?;
        self.t.fix(block, index).map_err(at)
    }
}

/// Dependence graph over the subformulas reachable from the roots. Besides the
/// syntactic edges, a variable has an edge to the fixed-point node it names.
#[derive(Debug, Clone)]
pub struct DependenceGraph {
    vertices: Vec<NodeId>,
    succ: HashMap<NodeId, Vec<NodeId>>,
    /// SCCs successors-first, each sorted.
    sccs: Vec<Vec<NodeId>>,
    scc_of: HashMap<NodeId, usize>,
}

impl DependenceGraph {
    pub fn new(t: &NutlTuple) -> Self {
        let mut succ: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        let mut stack: Vec<NodeId> = t.roots.clone();
        while let Some(n) = stack.pop() {
            if succ.contains_key(&n) {
                continue;
            }
            let out = match t.node(n) {
                Node::Letter(_) | Node::NegLetter(_) => vec![],
                Node::Var(v) => match t.binder(v) {
                    Some((b, i)) => vec![t.node_index[&Node::Fix(b, i)]],
                    None => vec![],
                },
                Node::Next(c) => vec![c],
                Node::Or(l, r) | Node::And(l, r) => vec![l, r],
                Node::Fix(b, i) => vec![t.block(b).bodies[i]],
            };
            stack.extend(out.iter().copied());
            succ.insert(n, out);
        }
        let mut vertices: Vec<NodeId> = succ.keys().copied().collect();
        vertices.sort();
        let mut graph: DiGraph<NodeId, ()> = DiGraph::new();
        let index: HashMap<NodeId, NodeIndex> = vertices.iter().map(|&v| (v, graph.add_node(v))).collect();
        for (v, outs) in &succ {
            for w in outs {
                graph.add_edge(index[v], index[w], ());
            }
        }
        let mut sccs = Vec::new();
        let mut scc_of = HashMap::new();
        for comp in petgraph::algo::tarjan_scc(&graph) {
            let mut members: Vec<NodeId> = comp.into_iter().map(|ix| graph[ix]).collect();
            members.sort();
            for m in &members {
                scc_of.insert(*m, sccs.len());
            }
            sccs.push(members);
        }
        DependenceGraph {
            vertices,
            succ,
            sccs,
            scc_of,
        }
    }

    pub fn vertices(&self) -> &[NodeId] {
        &self.vertices
    }

    pub fn successors(&self, v: NodeId) -> &[NodeId] {
        &self.succ[&v]
    }

    pub fn sccs(&self) -> &[Vec<NodeId>] {
        &self.sccs
    }

    pub fn scc_of(&self, v: NodeId) -> usize {
        self.scc_of[&v]
    }

    fn is_cyclic(&self, scc: usize) -> bool {
        let members = &self.sccs[scc];
        members.len() > 1 || self.succ[&members[0]].contains(&members[0])
    }

    /// A shortest path from `from` to `to` using only vertices accepted by `keep`.
    fn path(&self, from: NodeId, to: NodeId, keep: &dyn Fn(NodeId) -> bool) -> Option<Vec<NodeId>> {
        let mut prev: HashMap<NodeId, NodeId> = HashMap::new();
        let mut queue = std::collections::VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.succ[&v] {
                if w == to {
                    let mut path = vec![to, v];
                    let mut cur = v;
                    while cur != from {
                        cur = prev[&cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if keep(w) && seen.insert(w) {
                    prev.insert(w, v);
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// A cycle not passing through any `O` node, if there is one.
    pub fn unguarded_cycle(&self, t: &NutlTuple) -> Option<Vec<NodeId>> {
        let not_next = |v: NodeId| !matches!(t.node(v), Node::Next(_));
        self.vertices
            .iter()
            .filter(|&&v| not_next(v))
            .find_map(|&v| self.path(v, v, &not_next))
    }

    /// A cycle through both a least and a greatest fixed-point node.
    pub fn alternating_cycle(&self, t: &NutlTuple) -> Option<Vec<NodeId>> {
        for members in &self.sccs {
            let find = |kind| {
                members
                    .iter()
                    .copied()
                    .find(|&v| matches!(t.node(v), Node::Fix(b, _) if t.block(b).kind == kind))
            };
            if let (Some(m), Some(n)) = (find(FixKind::Mu), find(FixKind::Nu)) {
                let scc = self.scc_of[&m];
                let inside = |v: NodeId| self.scc_of[&v] == scc;
                let mut cycle = self.path(m, n, &inside)?;
                let back = self.path(n, m, &inside)?;
                cycle.extend(back.into_iter().skip(1));
                return Some(cycle);
            }
        }
        None
    }

    /// Non-recurring for vertices on a cycle through a least fixed point and for
    /// acyclic vertices; recurring on cycles through a greatest fixed point.
    pub fn is_recurring(&self, t: &NutlTuple, v: NodeId) -> bool {
        let scc = self.scc_of[&v];
        self.is_cyclic(scc)
            && self.sccs[scc]
                .iter()
                .any(|&m| matches!(t.node(m), Node::Fix(b, _) if t.block(b).kind == FixKind::Nu))
    }
}

fn show_cycle(t: &NutlTuple, cycle: &[NodeId]) -> String {
    cycle
        .iter()
        .map(|&v| {
            let s = t.display(v);
            if s.chars().count() > 40 {
                format!("{}…", s.chars().take(40).collect::<String>())
            } else {
                s
            }
        })
        .collect::<Vec<_>>()
        .join("  ->  ")
}

pub fn check_guarded(t: &NutlTuple) -> Result<()> {
    let g = DependenceGraph::new(t);
    match g.unguarded_cycle(t) {
        None => Ok(()),
        Some(c) => Err(Error::Check(format!("unguarded cycle: {}", show_cycle(t, &c)))),
    }
}

pub fn check_alternation_free(t: &NutlTuple) -> Result<()> {
    let g = DependenceGraph::new(t);
    match g.alternating_cycle(t) {
        None => Ok(()),
        Some(c) => Err(Error::Check(format!(
            "cycle through least and greatest fixed points: {}",
            show_cycle(t, &c)
        ))),
    }
}

/// A translated tuple: the automaton and the state standing for each root.
#[derive(Debug, Clone)]
pub struct NutlAutomaton {
    pub waa: Waa,
    pub root_states: Vec<StateId>,
    /// The subformula behind every state.
    pub labels: Vec<String>,
}

fn letter_condition(t: &NutlTuple, node: Node) -> Option<Condition> {
    match node {
        Node::Letter(a) => Some(Condition::letter(a)),
        Node::NegLetter(a) => Some(Condition::Letters(LetterSet::singleton(a).complement(&t.alphabet))),
        _ => None,
    }
}

fn check_translatable(t: &NutlTuple) -> Result<DependenceGraph> {
    t.check_roots_closed()?;
    check_guarded(t)?;
    check_alternation_free(t)?;
    Ok(DependenceGraph::new(t))
}

/// One state per vertex of the dependence graph.
pub fn nutl_to_waa(t: &NutlTuple) -> Result<NutlAutomaton> {
    let g = check_translatable(t)?;
    let state: HashMap<NodeId, StateId> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, StateId(i)))
        .collect();
    let mut memo: HashMap<NodeId, Condition> = HashMap::new();
    fn delta(
        t: &NutlTuple,
        n: NodeId,
        state: &HashMap<NodeId, StateId>,
        memo: &mut HashMap<NodeId, Condition>,
    ) -> Condition {
        if let Some(c) = memo.get(&n) {
            return c.clone();
        }
        let node = t.node(n);
        let c = match node {
            Node::Letter(_) | Node::NegLetter(_) => letter_condition(t, node).unwrap(),
            Node::Next(c) => Condition::Next(state[&c]),
            Node::Or(l, r) => delta(t, l, state, memo).or(delta(t, r, state, memo)),
            Node::And(l, r) => delta(t, l, state, memo).and(delta(t, r, state, memo)),
            Node::Fix(b, i) => delta(t, t.block(b).bodies[i], state, memo),
            Node::Var(v) => {
                let (b, i) = t.binder(v).expect("closed formulas bind every variable");
                delta(t, t.block(b).bodies[i], state, memo)
            }
        };
        memo.insert(n, c.clone());
        c
    }
    let conds = g.vertices().iter().map(|&v| delta(t, v, &state, &mut memo)).collect();
    let recurring = g.vertices().iter().map(|&v| g.is_recurring(t, v)).collect();
    let names = (0..g.vertices().len()).map(|i| format!("q{i}")).collect();
    let root_states: Vec<StateId> = t.roots.iter().map(|r| state[r]).collect();
    let waa = Waa::new(t.alphabet.clone(), names, conds, recurring, Some(root_states.clone()))?;
    waa.validate_weak()?;
    Ok(NutlAutomaton {
        waa,
        root_states,
        labels: g.vertices().iter().map(|&v| t.display(v)).collect(),
    })
}

/// One state per fixed-point variable. Applicable when every root is a
/// fixed-point node and every `O` is applied to a variable or a fixed-point
/// node, so that every path between two `O` nodes passes a fixed point.
pub fn nutl_to_waa_optimized(t: &NutlTuple) -> Result<NutlAutomaton> {
    let g = check_translatable(t)?;
    let not_applicable =
        |why: String| Error::Check(format!("{why}; the optimized translation does not apply, use nutl_to_waa"));
    for (j, r) in t.roots.iter().enumerate() {
        if !matches!(t.node(*r), Node::Fix(..)) {
            return Err(not_applicable(format!("formula {j} is not a fixed-point formula")));
        }
    }
    for &v in g.vertices() {
        if let Node::Next(c) = t.node(v) {
            if !matches!(t.node(c), Node::Var(_) | Node::Fix(..)) {
                return Err(not_applicable(format!(
                    "`{}` reaches another next operator without passing a fixed point",
                    t.display(v)
                )));
            }
        }
    }
    let mut blocks: Vec<BlockId> = g
        .vertices()
        .iter()
        .filter_map(|&v| match t.node(v) {
            Node::Fix(b, _) => Some(b),
            _ => None,
        })
        .collect();
    blocks.sort();
    blocks.dedup();
    let vars: Vec<VarId> = blocks.iter().flat_map(|b| t.block(*b).vars.iter().copied()).collect();
    let state: HashMap<VarId, StateId> = vars.iter().enumerate().map(|(i, &v)| (v, StateId(i))).collect();
    let target = |n: NodeId| match t.node(n) {
        Node::Var(v) => state[&v],
        Node::Fix(b, i) => state[&t.block(b).vars[i]],
        _ => unreachable!("checked above"),
    };
    fn inline(t: &NutlTuple, n: NodeId, target: &dyn Fn(NodeId) -> StateId) -> Condition {
        let node = t.node(n);
        match node {
            Node::Letter(_) | Node::NegLetter(_) => letter_condition(t, node).unwrap(),
            Node::Next(c) => Condition::Next(target(c)),
            Node::Or(l, r) => inline(t, l, target).or(inline(t, r, target)),
            Node::And(l, r) => inline(t, l, target).and(inline(t, r, target)),
            Node::Fix(b, i) => inline(t, t.block(b).bodies[i], target),
            Node::Var(v) => {
                let (b, i) = t.binder(v).expect("closed formulas bind every variable");
                inline(t, t.block(b).bodies[i], target)
            }
        }
    }
    let mut conds = Vec::with_capacity(vars.len());
    let mut recurring = Vec::with_capacity(vars.len());
    for &v in &vars {
        let (b, i) = t.binder(v).expect("block variables are bound");
        conds.push(inline(t, t.block(b).bodies[i], &target));
        recurring.push(t.block(b).kind == FixKind::Nu);
    }
    let names = vars.iter().map(|v| t.var_name(*v).to_string()).collect();
    let root_states: Vec<StateId> = t.roots.iter().map(|&r| target(r)).collect();
    let waa = Waa::new(t.alphabet.clone(), names, conds, recurring, Some(root_states.clone()))?;
    waa.validate_weak()?;
    Ok(NutlAutomaton {
        waa,
        root_states,
        labels: vars
            .iter()
            .map(|&v| {
                let (b, i) = t.binder(v).unwrap();
                t.display(t.block(b).bodies[i])
            })
            .collect(),
    })
}

/// The De Morgan dual of every root, in a fresh tuple: letters and negated
/// letters, `|` and `&`, `mu` and `nu` are exchanged.
pub fn dual_nutl(t: &NutlTuple) -> NutlTuple {
    let mut d = NutlTuple::new(t.alphabet.clone());
    let mut map: HashMap<NodeId, NodeId> = HashMap::new();
    let mut block_map: HashMap<BlockId, BlockId> = HashMap::new();
    // Node ids are topologically ordered: children and bodies come first.
    for i in 0..t.nodes.len() {
        let n = NodeId(i);
        let m = match t.node(n) {
            Node::Letter(a) => d.neg_letter(a),
            Node::NegLetter(a) => d.letter(a),
            Node::Var(v) => {
                let w = d.variable(t.var_name(v)).expect("names were valid in the source");
                d.var(w)
            }
            Node::Next(c) => d.next(map[&c]),
            Node::Or(l, r) => d.and(map[&l], map[&r]),
            Node::And(l, r) => d.or(map[&l], map[&r]),
            Node::Fix(b, k) => {
                let db = match block_map.get(&b) {
                    Some(&db) => db,
                    None => {
                        let block = t.block(b);
                        let vars = block
                            .vars
                            .iter()
                            .map(|v| d.variable(t.var_name(*v)).expect("valid name"))
                            .collect();
                        let bodies = block.bodies.iter().map(|x| map[x]).collect();
                        let db = d
                            .fix_block(block.kind.dual(), vars, bodies)
                            .expect("dual blocks bind the same variables once");
                        block_map.insert(b, db);
                        db
                    }
                };
                d.fix(db, k).expect("index in range")
            }
        };
        map.insert(n, m);
    }
    d.roots = t.roots.iter().map(|r| map[r]).collect();
    d
}

/// Evaluates subformulas of a tuple on the quotient positions of a lasso by
/// Kleene iteration. Results of closed subformulas are cached.
pub struct Evaluator<'a> {
    t: &'a NutlTuple,
    w: &'a LassoWord,
    closed: Vec<bool>,
    env: HashMap<VarId, Vec<bool>>,
    cache: HashMap<NodeId, Vec<bool>>,
    block_cache: HashMap<BlockId, Vec<Vec<bool>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(t: &'a NutlTuple, w: &'a LassoWord) -> Self {
        let closed = t.free_vars().iter().map(BTreeSet::is_empty).collect();
        Evaluator {
            t,
            w,
            closed,
            env: HashMap::new(),
            cache: HashMap::new(),
            block_cache: HashMap::new(),
        }
    }

    /// Truth of a closed node at every quotient position.
    pub fn eval_closed(&mut self, n: NodeId) -> Result<Vec<bool>> {
        if !self.closed[n.0] {
            return Err(Error::Check(format!("`{}` is not closed", self.t.display(n))));
        }
        Ok(self.eval(n))
    }

    fn eval(&mut self, n: NodeId) -> Vec<bool> {
        if let Some(v) = self.cache.get(&n) {
            return v.clone();
        }
        let len = self.w.len();
        let w = self.w;
        let value = match self.t.node(n) {
            Node::Letter(a) => (0..len).map(|p| w.letter(p) == a).collect(),
            Node::NegLetter(a) => (0..len).map(|p| w.letter(p) != a).collect(),
            Node::Var(v) => self.env[&v].clone(),
            Node::Next(c) => {
                let inner = self.eval(c);
                (0..len).map(|p| inner[w.succ(p)]).collect()
            }
            Node::Or(l, r) => {
                let (x, y) = (self.eval(l), self.eval(r));
                x.iter().zip(&y).map(|(a, b)| *a || *b).collect()
            }
            Node::And(l, r) => {
                let (x, y) = (self.eval(l), self.eval(r));
                x.iter().zip(&y).map(|(a, b)| *a && *b).collect()
            }
            Node::Fix(b, i) => self.eval_block(b).swap_remove(i),
        };
        if self.closed[n.0] {
            self.cache.insert(n, value.clone());
        }
        value
    }

    fn eval_block(&mut self, b: BlockId) -> Vec<Vec<bool>> {
        if let Some(v) = self.block_cache.get(&b) {
            return v.clone();
        }
        let block = self.t.block(b).clone();
        let init = block.kind == FixKind::Nu;
        let mut values = vec![vec![init; self.w.len()]; block.vars.len()];
        loop {
            for (v, val) in block.vars.iter().zip(&values) {
                self.env.insert(*v, val.clone());
            }
            let next: Vec<Vec<bool>> = block.bodies.iter().map(|&body| self.eval(body)).collect();
            if next == values {
                break;
            }
            values = next;
        }
        for v in &block.vars {
            self.env.remove(v);
        }
        let closed = block.vars.iter().enumerate().all(|(i, _)| {
            let fix = self.t.node_index[&Node::Fix(b, i)];
            self.closed[fix.0]
        });
        if closed {
            self.block_cache.insert(b, values.clone());
        }
        values
    }
}

/// `f(w)(i)`: the indices of the roots true at quotient position `i`.
pub fn nutl_eval_lasso(t: &NutlTuple, w: &LassoWord) -> Result<Vec<BTreeSet<usize>>> {
    t.check_roots_closed()?;
    let mut ev = Evaluator::new(t, w);
    let mut sets = vec![BTreeSet::new(); w.len()];
    for (j, &r) in t.roots.iter().enumerate() {
        for (p, holds) in ev.eval_closed(r)?.into_iter().enumerate() {
            if holds {
                sets[p].insert(j);
            }
        }
    }
    Ok(sets)
}
