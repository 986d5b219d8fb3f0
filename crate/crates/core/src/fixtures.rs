//! Canonical small posets used by examples, tests and the shipped fixture files.

use crate::constructions::{lex_sum, ordinal_sum};
use crate::poset::Poset;

fn build(labels: &[&str], rel: &[(&str, &str)]) -> Poset {
    Poset::from_relations(labels, rel).expect("fixture is a valid poset")
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

/// `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> Poset {
    let rel: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    Poset::from_index_relations(numbered(n), &rel).expect("chain")
}

pub fn antichain(n: usize) -> Poset {
    Poset::from_index_relations(numbered(n), &[]).expect("antichain")
}

pub fn point() -> Poset {
    chain(1)
}

/// `1 < 3`, `2 < 3`.
pub fn v3() -> Poset {
    build(&["1", "2", "3"], &[("1", "3"), ("2", "3")])
}

/// `t < l < b`, `t < r < b`.
pub fn diamond() -> Poset {
    build(
        &["t", "l", "r", "b"],
        &[("t", "l"), ("t", "r"), ("l", "b"), ("r", "b")],
    )
}

/// APR tilt of the diamond: two minima under `m`, then `b`.
pub fn apr_r() -> Poset {
    build(&["l", "r", "m", "b"], &[("l", "m"), ("r", "m"), ("m", "b")])
}

/// Two minima below two maxima; its order complex is a circle.
pub fn crown4() -> Poset {
    build(
        &["a", "b", "c", "d"],
        &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
    )
}

/// `p < q` with `r` isolated.
pub fn yp() -> Poset {
    build(&["p", "q", "r"], &[("p", "q")])
}

/// `ANTICHAIN(3) + YP` as an ordinal sum.
pub fn z_sum() -> Poset {
    ordinal_sum(&[antichain(3), yp()]).expect("nonempty")
}

/// `X + Y + Z` with `X = ANTICHAIN(3)`, `Y = YP`, `Z = X + Y`.
pub fn fig1_left() -> Poset {
    ordinal_sum(&[antichain(3), yp(), z_sum()]).expect("nonempty")
}

/// `Y + X + Z`, the reordered sum.
pub fn fig1_right() -> Poset {
    ordinal_sum(&[yp(), antichain(3), z_sum()]).expect("nonempty")
}

/// Bipartite `{1,2} < {3,4,5}` with `1<3, 1<4, 2<4, 2<5`.
pub fn exs() -> Poset {
    build(
        &["1", "2", "3", "4", "5"],
        &[("1", "3"), ("1", "4"), ("2", "4"), ("2", "5")],
    )
}

/// Components attached to the elements of [`exs`], in index order.
pub fn exx() -> Vec<Poset> {
    vec![
        build(&["m", "a", "b"], &[("m", "a"), ("m", "b")]),
        chain(2),
        point(),
        build(&["a", "b", "m"], &[("a", "m"), ("b", "m")]),
        crown4(),
    ]
}

pub fn exs_sum() -> Poset {
    lex_sum(&exs(), &exx()).expect("one component per element")
}

pub fn exs_op_sum() -> Poset {
    lex_sum(&exs().opposite(), &exx()).expect("one component per element")
}

/// Looks up a fixture by its canonical name (case-insensitive).
pub fn by_name(name: &str) -> Option<Poset> {
    let upper = name.to_ascii_uppercase();
    let sized = |prefix: &str| -> Option<usize> {
        upper
            .strip_prefix(prefix)?
            .strip_prefix('(')?
            .strip_suffix(')')?
            .parse()
            .ok()
            .filter(|&n| n > 0)
    };
    if let Some(n) = sized("CHAIN") {
        return Some(chain(n));
    }
    if let Some(n) = sized("ANTICHAIN") {
        return Some(antichain(n));
    }
    Some(match upper.as_str() {
        "POINT" => point(),
        "V3" => v3(),
        "DIAMOND" => diamond(),
        "APR_R" => apr_r(),
        "CROWN4" => crown4(),
        "YP" => yp(),
        "Z" => z_sum(),
        "FIG1L" => fig1_left(),
        "FIG1R" => fig1_right(),
        "EXS" => exs(),
        "EXS_SUM" => exs_sum(),
        "EXS_OP_SUM" => exs_op_sum(),
        _ => return None,
    })
}

/// Names accepted by [`by_name`] that have a fixed size.
pub const NAMED: &[&str] = &[
    "POINT", "V3", "DIAMOND", "APR_R", "CROWN4", "YP", "Z", "FIG1L", "FIG1R", "EXS", "EXS_SUM",
    "EXS_OP_SUM",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(v3().relation_count(), 5);
        assert_eq!(z_sum().len(), 6);
        assert_eq!(fig1_left().len(), 12);
        assert_eq!(fig1_right().len(), 12);
        assert_eq!(fig1_left().longest_chain(), 5);
        assert_eq!(exs_sum().len(), 13);
        for name in NAMED {
            assert!(by_name(name).unwrap().check_axioms().is_ok(), "{name}");
        }
        assert_eq!(by_name("chain(4)"), Some(chain(4)));
        assert_eq!(by_name("ANTICHAIN(0)"), None);
        assert_eq!(by_name("nope"), None);
    }

    #[test]
    fn yp_is_chain_plus_point() {
        let p = Poset::from_relations(&["x"], &[]).unwrap();
        let u = chain(2).disjoint_union(&p).unwrap();
        assert!(u.is_isomorphic(&yp()).is_some());
        let comps = yp().connected_components();
        assert_eq!(comps, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn figure_hasse_diagrams() {
        // Edge counts read off the two 13-point Hasse diagrams.
        assert_eq!(exs_sum().covers().covers.len(), 19);
        assert_eq!(exs_op_sum().covers().covers.len(), 14);
        let minima = |p: &Poset| (0..p.len()).filter(|&j| (0..p.len()).all(|i| !p.lt(i, j))).count();
        assert_eq!(minima(&exs_sum()), 2);
        assert_eq!(minima(&exs_op_sum()), 5);
        assert_eq!(fig1_left().covers().covers.len(), 20);
        assert_eq!(fig1_right().covers().covers.len(), 23);
    }
}
