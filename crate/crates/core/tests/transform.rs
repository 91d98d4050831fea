mod common;

use std::cmp::Ordering;

use common::*;
use ftpda::measure::symb;
use ftpda::oracle::{brute_force_contexts, generate_upto};
use ftpda::transform::borders::{compare_borders, compute_borders, self_embedding_contexts, Border};
use ftpda::transform::normal::{binarize, eliminate_units};
use ftpda::transform::trees::{enumerate_short_trees, TreeOptions};
use ftpda::transform::useless::trim;
use proptest::prelude::*;

fn borders_upto(m: usize) -> Vec<Border> {
    (1..=m).flat_map(|l| (l..=m).map(move |r| Border::new(l, r))).collect()
}

#[test]
fn border_order_is_total() {
    for m in 1..=5 {
        let all = borders_upto(m);
        for &x in &all {
            assert_eq!(compare_borders(x, x), Ordering::Equal);
            for &y in &all {
                let xy = compare_borders(x, y);
                assert_eq!(xy, compare_borders(y, x).reverse());
                if xy == Ordering::Equal {
                    assert_eq!(x, y);
                }
                for &z in &all {
                    if xy != Ordering::Greater && compare_borders(y, z) != Ordering::Greater {
                        assert_ne!(compare_borders(x, z), Ordering::Greater, "{x} {y} {z}");
                    }
                }
            }
        }
    }
}

fn nested_or_right(a: Border, b: Border) -> bool {
    let nested = a.l <= b.l && b.l <= b.r && b.r <= a.r;
    let right = a.l < b.l && a.r < b.r && a.r <= b.l;
    nested || right
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn binarize_bound_and_language(seed in any::<u64>(), vars in 1usize..5) {
        let g = random_grammar(&mut rng(seed), vars, 2);
        let b = binarize(&g);
        prop_assert!(b.variables().len() <= symb(&g));
        prop_assert!(b.max_body_len() <= 2);
        prop_assert_eq!(generate_upto(&b, 6), generate_upto(&g, 6));
    }

    #[test]
    fn borders_match_brute_force(seed in any::<u64>(), vars in 2usize..5) {
        let g = trim(&random_cnf(&mut rng(seed), vars, 3));
        let alphabet = letters(3);
        let fast = self_embedding_contexts(&g, &alphabet).unwrap();
        let brute = brute_force_contexts(&g, &alphabet, 10).unwrap();
        prop_assert_eq!(fast, brute);
    }

    #[test]
    fn short_tree_borders_nest(seed in any::<u64>(), m in 2usize..4) {
        let g = random_letter_bounded(&mut rng(seed), m, 4);
        let g = trim(&eliminate_units(&binarize(&g)));
        let alphabet = letters(m);
        let borders = compute_borders(&g, &alphabet).unwrap();
        for t in enumerate_short_trees(&g, &alphabet, TreeOptions::default()).unwrap() {
            let defined: Vec<Border> = t.varset.iter().filter_map(|v| borders.get(v)).collect();
            for &a in &defined {
                for &b in &defined {
                    prop_assert!(
                        a == b || nested_or_right(a, b) || nested_or_right(b, a),
                        "{} {}", a, b
                    );
                }
            }
        }
    }
}
