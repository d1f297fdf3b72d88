use super::{parse_sentence, Formula};

const SENTENCES: &[(&str, &str)] = &[
    ("nonempty", "exists x. x = x"),
    ("at-least-two-vertices", "exists x. exists y. !(x = y)"),
    ("at-least-three-vertices", "exists x. exists y. exists z. !(x = y) & !(x = z) & !(y = z)"),
    ("has-edge", "exists x. exists y. E(x,y)"),
    ("no-isolated-vertex", "forall x. exists y. E(x,y)"),
    ("isolated-vertex", "exists x. forall y. !E(x,y)"),
    ("dominating-vertex", "exists x. forall y. (E(x,y) | x = y)"),
    ("complete", "forall x. forall y. (x = y | E(x,y))"),
    ("triangle", "exists x. exists y. exists z. E(x,y) & E(y,z) & E(z,x)"),
    ("path-of-two-edges", "exists x. exists y. exists z. E(x,y) & E(y,z) & !(x = z)"),
    ("induced-path-of-two-edges", "exists x. exists y. exists z. E(x,y) & E(y,z) & !(x = z) & !E(x,z)"),
    ("independent-triple", "exists x. exists y. exists z. !(x = y) & !(x = z) & !(y = z) & !E(x,y) & !E(x,z) & !E(y,z)"),
    ("leaf", "exists x. exists y. E(x,y) & forall z. (E(x,z) -> z = y)"),
    ("max-degree-at-most-one", "forall x. forall y. forall z. (E(x,y) & E(x,z) -> y = z)"),
    ("diameter-at-most-two", "forall x. forall y. (x = y | E(x,y) | exists z. E(x,z) & E(z,y))"),
    ("every-edge-in-triangle", "forall x. forall y. (E(x,y) -> exists z. E(x,z) & E(y,z))"),
    ("dominating-pair", "exists x. exists y. forall z. (z = x | z = y | E(x,z) | E(y,z))"),
    ("edge-with-private-neighbour", "exists x. exists y. E(x,y) & exists z. E(x,z) & !E(y,z) & !(z = y)"),
];

/// A named sentence of quantifier rank at most 3.
#[derive(Clone, Debug)]
pub struct LibrarySentence {
    pub name: &'static str,
    pub text: &'static str,
    pub formula: Formula,
}

/// Bundled sentences used to cross-check elementary equivalence.
pub fn sentence_library() -> Vec<LibrarySentence> {
    SENTENCES
        .iter()
        .map(|&(name, text)| LibrarySentence {
            name,
            text,
            formula: parse_sentence(text).expect("library sentences parse"),
        })
        .collect()
}
