use std::collections::BTreeSet;
use std::fmt;

/// First-order formula over the vocabulary `{E, =}` with named variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Edge(String, String),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn edge(x: &str, y: &str) -> Formula {
        Formula::Edge(x.to_owned(), y.to_owned())
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.to_owned(), y.to_owned())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, body: Formula) -> Formula {
        Formula::Exists(x.to_owned(), Box::new(body))
    }

    pub fn forall(x: &str, body: Formula) -> Formula {
        Formula::Forall(x.to_owned(), Box::new(body))
    }

    /// Left-nested conjunction; `None` for an empty iterator.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Option<Formula> {
        parts.into_iter().reduce(Formula::and)
    }

    /// `exists v1. exists v2. … body`, innermost quantifier last.
    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: Formula) -> Formula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::exists(v.as_ref(), acc))
    }

    /// Maximum nesting depth of quantifiers.
    pub fn quantifier_rank(&self) -> usize {
        match self {
            Formula::Edge(..) | Formula::Eq(..) => 0,
            Formula::Not(f) => f.quantifier_rank(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.quantifier_rank().max(b.quantifier_rank())
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.quantifier_rank(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Edge(x, y) | Formula::Eq(x, y) => {
                for v in [x, y] {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Edge(..) | Formula::Eq(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }
}

// Binding strength used by the printer; quantifiers sit below everything
// and extend as far right as possible.
const P_QUANT: u8 = 0;
const P_IMPLIES: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_UNARY: u8 = 4;

fn write_formula(f: &Formula, ctx: u8, open_right: bool, out: &mut String) {
    let own = match f {
        Formula::Edge(..) | Formula::Eq(..) | Formula::Not(_) => P_UNARY,
        Formula::And(..) => P_AND,
        Formula::Or(..) => P_OR,
        Formula::Implies(..) => P_IMPLIES,
        Formula::Exists(..) | Formula::Forall(..) => P_QUANT,
    };
    let paren = if own == P_QUANT {
        !open_right
    } else {
        own < ctx
    };
    let open = open_right || paren;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Edge(x, y) => {
            out.push_str("E(");
            out.push_str(x);
            out.push(',');
            out.push_str(y);
            out.push(')');
        }
        Formula::Eq(x, y) => {
            out.push_str(x);
            out.push_str(" = ");
            out.push_str(y);
        }
        Formula::Not(g) => {
            out.push('!');
            write_formula(g, P_UNARY, open, out);
        }
        Formula::And(a, b) => {
            write_formula(a, P_AND, false, out);
            out.push_str(" & ");
            write_formula(b, P_UNARY, open, out);
        }
        Formula::Or(a, b) => {
            write_formula(a, P_OR, false, out);
            out.push_str(" | ");
            write_formula(b, P_AND, open, out);
        }
        Formula::Implies(a, b) => {
            write_formula(a, P_OR, false, out);
            out.push_str(" -> ");
            write_formula(b, P_IMPLIES, open, out);
        }
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            out.push_str(if matches!(f, Formula::Exists(..)) {
                "exists "
            } else {
                "forall "
            });
            out.push_str(x);
            out.push_str(". ");
            write_formula(g, P_QUANT, true, out);
        }
    }
    if paren {
        out.push(')');
    }
}

/// Prints in the concrete syntax accepted by [`crate::logic::parse_formula`],
/// with the fewest parentheses that parse back to the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_formula(self, P_QUANT, true, &mut s);
        f.write_str(&s)
    }
}
