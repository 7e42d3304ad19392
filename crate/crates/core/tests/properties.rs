use std::collections::BTreeSet;

use proptest::prelude::*;
use retwords::beta::{dominant_root, validate};
use retwords::returns::{conjugate_left, reduce_right};
use retwords::rm::{check_rm, Method};
use retwords::source::BUILTINS;
use retwords::{build_factor_table, builtin, return_set, GrowingTable, Word, WordSource};

fn any_builtin() -> impl Strategy<Value = &'static str> {
    prop::sample::select(BUILTINS.to_vec())
}

/// A factor of length `len` read at `pos` from a long prefix.
fn factor_at(src: &WordSource, pos: usize, len: usize) -> Word {
    let p = src.prefix(pos + len).unwrap();
    Word::from(&p[pos..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prefixes_are_monotone(name in any_builtin(), a in 0usize..3000, b in 0usize..3000) {
        let src = builtin(name).unwrap();
        let (short, long) = (a.min(b), a.max(b));
        let p = src.prefix(long).unwrap();
        prop_assert_eq!(&src.prefix(short).unwrap()[..], &p[..short]);
    }

    #[test]
    fn fixed_point_is_fixed(name in any_builtin(), n in 1usize..2000) {
        let src = builtin(name).unwrap();
        let s = src.substitution().unwrap();
        let p = src.prefix(n).unwrap();
        let image = s.apply(&p).unwrap();
        prop_assert_eq!(&image[..n], &p[..]);
    }

    #[test]
    fn reduction_rules(name in any_builtin(), pos in 0usize..500, len in 1usize..10) {
        let src = builtin(name).unwrap();
        let w = factor_at(&src, pos, len);
        let mut g = GrowingTable::build(&src, len + 1).unwrap();
        let direct = return_set(&src, &w).unwrap().as_set();
        if g.right_extensions(&w).unwrap().only().is_some() {
            prop_assert_eq!(reduce_right(&mut g, &w).unwrap().as_set(), direct.clone());
        }
        if let Some(a) = g.left_extensions(&w).unwrap().only() {
            let conj = conjugate_left(&mut g, a, &w).unwrap().as_set();
            prop_assert_eq!(conj, return_set(&src, &w.push_front(a)).unwrap().as_set());
        }
    }

    #[test]
    fn kirchhoff_identity(name in any_builtin(), pos in 0usize..500, len in 0usize..12) {
        let src = builtin(name).unwrap();
        let w = factor_at(&src, pos, len);
        let t = build_factor_table(&src, 12).unwrap();
        prop_assert!(t.kirchhoff_identity(&w).unwrap());
    }

    #[test]
    fn r4_phi_equivariance(pos in 0usize..2000, len in 1usize..=10) {
        let src = builtin("r4_example").unwrap();
        let w = factor_at(&src, pos, len);
        let phi = |v: &Word| v.map_letters(|l| 3 - l);
        let image: BTreeSet<Word> = return_set(&src, &w).unwrap().as_set().iter().map(phi).collect();
        prop_assert_eq!(return_set(&src, &phi(&w)).unwrap().as_set(), image);
    }

    #[test]
    fn methods_agree(name in any_builtin(), max_len in 1usize..9) {
        let src = builtin(name).unwrap();
        let m = return_set(&src, &Word::empty()).unwrap().len();
        let full = check_rm(&src, m, max_len, Method::FullScan).unwrap();
        let reduced = check_rm(&src, m, max_len, Method::BispecialReduction).unwrap();
        prop_assert_eq!(full.status, reduced.status);
        prop_assert_eq!(full.witness, reduced.witness);
        prop_assert_eq!(full.per_length, reduced.per_length);
    }

    #[test]
    fn sturmian_words_have_two_returns(directives in prop::collection::vec(1u32..4, 1..4), max_len in 1usize..16) {
        let src = WordSource::sturmian(directives).unwrap();
        let t = build_factor_table(&src, max_len).unwrap();
        for n in 0..=max_len {
            prop_assert_eq!(t.complexity(n).unwrap(), n + 1);
        }
        prop_assert!(check_rm(&src, 2, max_len, Method::FullScan).unwrap().holds());
    }

    #[test]
    fn beta_is_monotone(t in prop::collection::vec(0u32..4, 2..5), j in 0usize..4) {
        prop_assume!(validate(&t).is_ok());
        let j = j % t.len();
        let mut bigger = t.clone();
        bigger[j] += 1;
        prop_assert!(dominant_root(&bigger).unwrap().beta > dominant_root(&t).unwrap().beta);
    }
}
