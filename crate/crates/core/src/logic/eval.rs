//! Tarskian evaluation by exhaustive quantifier enumeration.
//!
//! Formulas are compiled to slot-indexed trees. A run of like quantifiers is
//! one block; the conjuncts of an existential block (disjuncts of a universal
//! one) are tested as soon as the variables they mention are bound.

use std::collections::BTreeMap;

use super::Formula;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Values for free variables, as 1-based vertices.
pub type Assignment = BTreeMap<String, usize>;

enum Node {
    Edge(usize, usize),
    Eq(usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Block(Box<Block>),
}

struct Block {
    exists: bool,
    slots: Vec<usize>,
    /// `levels[i]` holds the parts whose deepest block variable is `slots[i - 1]`.
    levels: Vec<Vec<Node>>,
}

/// A formula compiled for repeated evaluation.
pub struct CompiledFormula {
    root: Node,
    free: Vec<String>,
    slots: usize,
}

struct Compiler {
    scope: Vec<(String, usize)>,
    next: usize,
}

fn flatten<'a>(f: &'a Formula, conj: bool, out: &mut Vec<(bool, &'a Formula)>) {
    match (f, conj) {
        (Formula::And(a, b), true) => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        (Formula::Or(a, b), false) => {
            flatten(a, conj, out);
            flatten(b, conj, out);
        }
        (Formula::Implies(a, b), false) => {
            out.push((true, a));
            flatten(b, conj, out);
        }
        _ => out.push((false, f)),
    }
}

fn max_slot_in(node: &Node, lo: usize, hi: usize) -> Option<usize> {
    let pick = |s: usize| (lo..hi).contains(&s).then_some(s);
    match node {
        Node::Edge(a, b) | Node::Eq(a, b) => pick(*a).max(pick(*b)),
        Node::Not(g) => max_slot_in(g, lo, hi),
        Node::And(v) | Node::Or(v) => v.iter().filter_map(|g| max_slot_in(g, lo, hi)).max(),
        Node::Block(b) => b
            .levels
            .iter()
            .flatten()
            .filter_map(|g| max_slot_in(g, lo, hi))
            .max(),
    }
}

impl Compiler {
    fn lookup(&self, x: &str) -> Result<usize> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == x)
            .map(|&(_, s)| s)
            .ok_or_else(|| Error::MissingAssignment(x.to_owned()))
    }

    fn compile(&mut self, f: &Formula) -> Result<Node> {
        Ok(match f {
            Formula::Edge(x, y) => Node::Edge(self.lookup(x)?, self.lookup(y)?),
            Formula::Eq(x, y) => Node::Eq(self.lookup(x)?, self.lookup(y)?),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(a, b) => Node::And(vec![self.compile(a)?, self.compile(b)?]),
            Formula::Or(a, b) => Node::Or(vec![self.compile(a)?, self.compile(b)?]),
            Formula::Implies(a, b) => Node::Or(vec![
                Node::Not(Box::new(self.compile(a)?)),
                self.compile(b)?,
            ]),
            Formula::Exists(..) | Formula::Forall(..) => self.block(f)?,
        })
    }

    fn block(&mut self, f: &Formula) -> Result<Node> {
        let exists = matches!(f, Formula::Exists(..));
        let base = self.next;
        let mut body = f;
        let mut slots = Vec::new();
        loop {
            match (body, exists) {
                (Formula::Exists(x, g), true) | (Formula::Forall(x, g), false) => {
                    slots.push(self.next);
                    self.scope.push((x.clone(), self.next));
                    self.next += 1;
                    body = g;
                }
                _ => break,
            }
        }
        let hi = self.next;
        let mut parts = Vec::new();
        flatten(body, exists, &mut parts);
        let mut levels: Vec<Vec<Node>> = (0..=slots.len()).map(|_| Vec::new()).collect();
        for (neg, part) in parts {
            let mut node = self.compile(part)?;
            if neg {
                node = Node::Not(Box::new(node));
            }
            let level = max_slot_in(&node, base, hi).map_or(0, |s| s - base + 1);
            levels[level].push(node);
        }
        self.scope.truncate(self.scope.len() - slots.len());
        Ok(Node::Block(Box::new(Block {
            exists,
            slots,
            levels,
        })))
    }
}

fn eval(node: &Node, g: &Graph, env: &mut [usize]) -> bool {
    match node {
        Node::Edge(a, b) => g.adj(env[*a], env[*b]),
        Node::Eq(a, b) => env[*a] == env[*b],
        Node::Not(f) => !eval(f, g, env),
        Node::And(v) => v.iter().all(|f| eval(f, g, env)),
        Node::Or(v) => v.iter().any(|f| eval(f, g, env)),
        Node::Block(b) => eval_block(b, g, env),
    }
}

fn eval_block(b: &Block, g: &Graph, env: &mut [usize]) -> bool {
    if b.exists {
        b.levels[0].iter().all(|f| eval(f, g, env)) && exists_from(b, 0, g, env)
    } else {
        b.levels[0].iter().any(|f| eval(f, g, env)) || forall_from(b, 0, g, env)
    }
}

fn exists_from(b: &Block, i: usize, g: &Graph, env: &mut [usize]) -> bool {
    for v in 0..g.n() {
        env[b.slots[i]] = v;
        if b.levels[i + 1].iter().all(|f| eval(f, g, env))
            && (i + 1 == b.slots.len() || exists_from(b, i + 1, g, env))
        {
            return true;
        }
    }
    false
}

fn forall_from(b: &Block, i: usize, g: &Graph, env: &mut [usize]) -> bool {
    for v in 0..g.n() {
        env[b.slots[i]] = v;
        if !b.levels[i + 1].iter().any(|f| eval(f, g, env))
            && (i + 1 == b.slots.len() || !forall_from(b, i + 1, g, env))
        {
            return false;
        }
    }
    true
}

impl CompiledFormula {
    pub fn new(phi: &Formula) -> Result<CompiledFormula> {
        let free: Vec<String> = phi.free_vars().into_iter().collect();
        let mut c = Compiler {
            scope: free.iter().cloned().zip(0..).collect(),
            next: free.len(),
        };
        let root = c.compile(phi)?;
        Ok(CompiledFormula {
            root,
            free,
            slots: c.next,
        })
    }

    /// Free variables in sorted order; `eval` takes values in this order.
    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    /// Evaluates with 1-based vertex values for the free variables.
    pub fn eval(&self, g: &Graph, values: &[usize]) -> Result<bool> {
        if values.len() != self.free.len() {
            return Err(crate::error::invalid(format!(
                "expected {} values, got {}",
                self.free.len(),
                values.len()
            )));
        }
        let mut idx = Vec::with_capacity(values.len());
        for &v in values {
            g.check_vertex(v)?;
            idx.push(v - 1);
        }
        Ok(self.eval_index(g, &idx))
    }

    pub(crate) fn eval_index(&self, g: &Graph, values: &[usize]) -> bool {
        let mut env = vec![0usize; self.slots.max(1)];
        env[..values.len()].copy_from_slice(values);
        eval(&self.root, g, &mut env)
    }
}

/// Truth value of `phi` in `g` under `a`. Cost is `O(n^rank · |phi|)`.
pub fn evaluate(g: &Graph, phi: &Formula, a: &Assignment) -> Result<bool> {
    let c = CompiledFormula::new(phi)?;
    let mut values = Vec::with_capacity(c.free.len());
    for x in &c.free {
        let v = *a
            .get(x)
            .ok_or_else(|| Error::MissingAssignment(x.clone()))?;
        values.push(v);
    }
    c.eval(g, &values)
}

/// Truth value of a sentence.
pub fn holds(g: &Graph, phi: &Formula) -> Result<bool> {
    evaluate(g, phi, &Assignment::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sat(g: &Graph, text: &str) -> bool {
        holds(g, &parse_formula(text).unwrap()).unwrap()
    }

    /// Direct recursive semantics with no block scheduling.
    fn naive(g: &Graph, f: &Formula, env: &mut Vec<(String, usize)>) -> bool {
        let get = |env: &Vec<(String, usize)>, x: &str| {
            env.iter().rev().find(|(n, _)| n == x).unwrap().1
        };
        match f {
            Formula::Edge(x, y) => g.adj(get(env, x), get(env, y)),
            Formula::Eq(x, y) => get(env, x) == get(env, y),
            Formula::Not(a) => !naive(g, a, env),
            Formula::And(a, b) => naive(g, a, env) && naive(g, b, env),
            Formula::Or(a, b) => naive(g, a, env) || naive(g, b, env),
            Formula::Implies(a, b) => !naive(g, a, env) || naive(g, b, env),
            Formula::Exists(x, a) | Formula::Forall(x, a) => {
                let ex = matches!(f, Formula::Exists(..));
                for v in 0..g.n() {
                    env.push((x.clone(), v));
                    let r = naive(g, a, env);
                    env.pop();
                    if r == ex {
                        return ex;
                    }
                }
                !ex
            }
        }
    }

    #[test]
    fn dominating_vertex_examples() {
        let s = "exists x. forall y. (E(x,y) | x = y)";
        assert!(sat(&Graph::complete(3), s));
        assert!(!sat(&Graph::empty(2), s));
        assert!(sat(&Graph::cycle(5), "forall x. x = x"));
        assert!(sat(&Graph::empty(0), "forall x. x = x"));
        assert!(!sat(&Graph::empty(0), "exists x. x = x"));
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let f = parse_formula("E(x,y)").unwrap();
        let mut a = Assignment::new();
        a.insert("x".into(), 1);
        assert_eq!(
            evaluate(&Graph::path(2), &f, &a),
            Err(Error::MissingAssignment("y".into()))
        );
        a.insert("y".into(), 2);
        assert_eq!(evaluate(&Graph::path(2), &f, &a), Ok(true));
        a.insert("y".into(), 3);
        assert!(matches!(
            evaluate(&Graph::path(2), &f, &a),
            Err(Error::InvalidVertex { .. })
        ));
    }

    #[test]
    fn shadowed_variables_resolve_innermost() {
        // inner x rebinds, so the edge test refers to the inner one
        let g = Graph::path(3);
        assert!(sat(&g, "forall x. exists x. E(x,x) | x = x"));
        assert!(!sat(&g, "exists x. forall y. exists x. E(x,y) & !(exists x. E(y,x))"));
    }

    #[test]
    fn scheduling_agrees_with_naive_semantics() {
        let sentences = [
            "exists x. forall y. (E(x,y) | x = y)",
            "forall x. forall y. (E(x,y) -> exists z. E(x,z) & E(y,z))",
            "exists x. exists y. exists z. E(x,y) & E(y,z) & E(z,x)",
            "forall x. exists y. E(x,y) & !(exists z. !(z = x) & E(y,z))",
            "forall x. forall y. x = y | E(x,y) | exists z. E(x,z) & E(z,y)",
            "!(forall x. exists y. E(x,y)) -> exists x. forall y. !E(x,y)",
            "exists x. exists y. !(x = y) & forall z. (E(z,x) -> E(z,y))",
        ];
        let parsed: Vec<Formula> = sentences.iter().map(|s| parse_formula(s).unwrap()).collect();
        for n in 1..=5usize {
            let pairs = n * (n - 1) / 2;
            for code in 0..(1u64 << pairs) {
                let g = Graph::from_edge_code(n, code);
                for f in &parsed {
                    let fast = holds(&g, f).unwrap();
                    assert_eq!(fast, naive(&g, f, &mut Vec::new()), "{f} on {g:?}");
                    let neg = holds(&g, &Formula::not(f.clone())).unwrap();
                    assert_eq!(neg, !fast);
                }
            }
        }
    }
}
