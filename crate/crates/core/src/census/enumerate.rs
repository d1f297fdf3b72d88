use crate::error::{check_cap, Result};
use crate::graph::Graph;

/// Largest order accepted by [`enumerate_class`].
pub const MAX_ENUMERATION_ORDER: usize = 8;

/// All labelled graphs on `n` vertices satisfying `pred`, in increasing
/// edge-code order (bit `i` is the `i`-th vertex pair in lexicographic order).
pub fn enumerate_class<F>(n: usize, mut pred: F) -> Result<impl Iterator<Item = Graph>>
where
    F: FnMut(&Graph) -> bool,
{
    check_cap("enumeration order", n, MAX_ENUMERATION_ORDER)?;
    let pairs = n * n.saturating_sub(1) / 2;
    Ok((0..1u64 << pairs)
        .map(move |c| Graph::from_edge_code(n, c))
        .filter(move |g| pred(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::in_pld;

    #[test]
    fn small_classes() {
        assert_eq!(enumerate_class(3, |g| in_pld(g, 2, 0)).unwrap().count(), 7);
        assert_eq!(enumerate_class(3, |g| g.max_degree() <= 1).unwrap().count(), 4);
        assert_eq!(enumerate_class(2, |_| true).unwrap().count(), 2);
        assert_eq!(enumerate_class(0, |_| true).unwrap().count(), 1);
        assert!(enumerate_class(9, |_| true).is_err());
    }

    #[test]
    fn order_is_by_edge_code() {
        let codes: Vec<u64> = enumerate_class(3, |_| true)
            .unwrap()
            .map(|g| g.edge_code().unwrap())
            .collect();
        assert_eq!(codes, (0..8).collect::<Vec<_>>());
    }
}
