//! Test corpus: every simple matroid on at most five elements (up to
//! isomorphism, via canonical rank tables), plus a few named examples used
//! throughout the test suite.

use crate::lattice::RawLattice;
use crate::matroid::Matroid;
use std::collections::BTreeSet;

/// All simple matroids on exactly n elements, up to isomorphism, found by
/// brute-force enumeration of basis families with the exchange check.
/// Counts for n = 1..5 are 1, 1, 2, 4, 9.
pub fn simple_matroids(n: usize) -> Vec<Matroid> {
    assert!(n <= 5, "corpus enumeration is desk-scale only");
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out = Vec::new();
    for r in 1..=n {
        // families of r-subsets of [n]
        let subsets: Vec<u32> = (0u32..1 << n)
            .filter(|s| s.count_ones() as usize == r)
            .collect();
        let k = subsets.len();
        for mask in 1u64..(1 << k) {
            let bases: Vec<u32> = subsets
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &s)| s)
                .collect();
            let m = match Matroid::from_bases(n, &bases) {
                Ok(m) => m,
                Err(_) => continue,
            };
            if !m.is_simple() {
                continue;
            }
            let canon = m.canonical_rank_table();
            if seen.insert(canon.clone()) {
                out.push(Matroid::from_rank_table(n, canon).expect("canonical table"));
            }
        }
    }
    out
}

/// Simple matroids on 1..=n_max elements.
pub fn simple_matroids_up_to(n_max: usize) -> Vec<Matroid> {
    (1..=n_max).flat_map(simple_matroids).collect()
}

/// The rank-4 matroid realized by the columns e1, e2, e3, e1+e2+e3, e4:
/// its lattice of flats is the running lattice example with coatom chain
/// 1234 ≻ 125 ≻ 135 ≻ 235 ≻ 145 ≻ 245 ≻ 345.
pub fn figure_lattice_matroid() -> Matroid {
    use crate::field::{Field, Q};
    let cols: Vec<Vec<Q>> = vec![
        vec![Q::from_i64(1), Q::from_i64(0), Q::from_i64(0), Q::from_i64(0)],
        vec![Q::from_i64(0), Q::from_i64(1), Q::from_i64(0), Q::from_i64(0)],
        vec![Q::from_i64(0), Q::from_i64(0), Q::from_i64(1), Q::from_i64(0)],
        vec![Q::from_i64(1), Q::from_i64(1), Q::from_i64(1), Q::from_i64(0)],
        vec![Q::from_i64(0), Q::from_i64(0), Q::from_i64(0), Q::from_i64(1)],
    ];
    Matroid::linear(&cols).expect("realizable")
}

/// Graphic matroid of the 4-cycle (≅ U_{3,4}).
pub fn four_cycle() -> Matroid {
    Matroid::graphic(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).expect("graph")
}

/// Non-geometric raw lattice: atoms a,b,c,d; e covers a,b; f covers c,d;
/// the top covers e,f. Atomic but not semimodular.
pub fn pinched_lattice() -> RawLattice {
    RawLattice::from_covers(
        vec![
            "0".into(),
            "a".into(),
            "b".into(),
            "c".into(),
            "d".into(),
            "e".into(),
            "f".into(),
            "1".into(),
        ],
        &[
            (0, 1),
            (0, 2),
            (0, 3),
            (0, 4),
            (1, 5),
            (2, 5),
            (3, 6),
            (4, 6),
            (5, 7),
            (6, 7),
        ],
    )
    .expect("covers form a lattice")
}

/// The named corpus for exhaustive invariant checks: all simple matroids
/// with n ≤ 5, the running lattice example, and U_{5,6}.
pub fn full_corpus() -> Vec<(String, Matroid)> {
    let mut out: Vec<(String, Matroid)> = simple_matroids_up_to(5)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (format!("simple#{:02}(n={})", i, m.n()), m))
        .collect();
    out.push(("figure-lattice".into(), figure_lattice_matroid()));
    out.push(("U(5,6)".into(), Matroid::uniform(5, 6)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_counts_match_known_values() {
        assert_eq!(simple_matroids(1).len(), 1);
        assert_eq!(simple_matroids(2).len(), 1);
        assert_eq!(simple_matroids(3).len(), 2);
        assert_eq!(simple_matroids(4).len(), 4);
        assert_eq!(simple_matroids(5).len(), 9);
        assert_eq!(simple_matroids_up_to(5).len(), 17);
    }

    #[test]
    fn corpus_members_are_simple_and_distinct() {
        let corpus = simple_matroids_up_to(5);
        let mut canons = BTreeSet::new();
        for m in &corpus {
            assert!(m.is_simple());
            assert!(canons.insert(m.canonical_rank_table()));
        }
    }

    #[test]
    fn named_members() {
        let f = figure_lattice_matroid();
        assert_eq!(f.n(), 5);
        assert_eq!(f.rank_full(), 4);
        let c4 = four_cycle();
        assert_eq!(c4.rank_full(), 3);
        assert_eq!(
            c4.canonical_rank_table(),
            Matroid::uniform(3, 4).canonical_rank_table()
        );
        let l = pinched_lattice();
        assert!(l.is_atomic().is_ok());
        assert!(l.is_semimodular().is_err());
    }
}
