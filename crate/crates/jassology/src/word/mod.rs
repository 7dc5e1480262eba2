//! Words over the 16-token alphabet and the four validation rules.

pub mod grammar;
pub mod rules;
pub mod token;

pub use grammar::{classify, stratajo_factors, GrammarClass};
pub use rules::{
    rule1, rule3, rule4, sigma_table, validate, word_skeleton, Rule1Violation, Rule2Violation,
    Rule3Violation, Rule4Violation, WordAnalysis, WordViolation,
};
pub use token::{tokenize, JassoWord, LexError, PairKind, Token, TokenClass};


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::seq::Stratino;
    use std::collections::BTreeSet;

    fn st(s: &str) -> Stratino {
        s.parse().unwrap()
    }

    #[test]
    fn rule1_pair_trace() {
        let w = example();
        let pairs = rule1(&w).unwrap();
        assert_eq!(pairs.len(), 11);
        let by_opener: std::collections::BTreeMap<usize, usize> =
            pairs.iter().copied().collect();
        // The closer trace of the worked example.
        assert_eq!(by_opener[&1], 34);
        assert_eq!(by_opener[&2], 33);
        assert_eq!(by_opener[&3], 8);
        assert_eq!(by_opener[&4], 7);
        assert_eq!(by_opener[&9], 30);
        assert_eq!(by_opener[&11], 21);
        assert_eq!(by_opener[&12], 13);
        assert_eq!(by_opener[&14], 20);
        assert_eq!(by_opener[&15], 17);
        assert_eq!(by_opener[&22], 28);
        assert_eq!(by_opener[&23], 26);
    }

    #[test]
    fn rule1_rejections() {
        assert!(matches!(
            rule1(&tokenize("").unwrap()),
            Err(Rule1Violation::TooFewOpeners { count: 0 })
        ));
        // zc pair not outermost.
        let w = tokenize("mr+ zc+ sn+ sn- zc- mr-").unwrap();
        assert!(matches!(rule1(&w), Err(Rule1Violation::BadOuterPair)));
        // A tg opener closed by a tc closer.
        let w = tokenize("zc+ mr+ tg+ tc- mr- zc-").unwrap();
        assert!(matches!(
            rule1(&w),
            Err(Rule1Violation::PairKindMismatch { opener: 3, closer: 4 })
        ));
        // Unbalanced skeleton.
        let w = tokenize("zc+ mr+ sn+ sn+ sn- mr- zc-").unwrap();
        assert!(matches!(rule1(&w), Err(Rule1Violation::BadSkeleton { .. })));
    }

    #[test]
    fn skeleton_tables() {
        let w = example();
        let pairs = rule1(&w).unwrap();
        let (e_of_m, tree) = word_skeleton(&w, &pairs);
        assert_eq!(
            e_of_m,
            vec![
                1, 2, 3, 4, 5, 6, 9, 10, 11, 12, 14, 15, 16, 18, 19, 22, 23, 24, 25, 27,
                29, 31, 32
            ]
        );
        assert_eq!(tree.children(&9), &[10, 11, 22, 29]);
        assert_eq!(tree.children(&11), &[12, 14]);
        assert_eq!(tree.children(&14), &[15, 18, 19]);
        assert_eq!(tree.children(&2), &[3, 9, 31, 32]);
        assert_eq!(tree.parent(&27), Some(&22));
        assert_eq!(tree.parent(&5), Some(&4));
        assert!(tree.validate().is_empty());
        // |E(M)| = η − (N + 1).
        assert_eq!(e_of_m.len(), 34 - 11);
    }

    #[test]
    fn sigma_golden() {
        let w = example();
        let pairs = rule1(&w).unwrap();
        let (e_of_m, tree) = word_skeleton(&w, &pairs);
        let st_tables = sigma_table(&w, &e_of_m, &tree).unwrap();
        let sig = &st_tables.sigma;
        let expect = [
            (1, ""),
            (2, "1"),
            (3, "2"),
            (4, "2,1"),
            (5, "2#"),
            (6, "2#"),
            (9, "1#,1"),
            (10, "2"),
            (11, "2"),
            (12, "3"),
            (14, "2#,1"),
            (15, "2#,2"),
            (16, "3"),
            (18, "2#,2"),
            (19, "3"),
            (22, "1#,2"),
            (23, "2"),
            (24, "2#,1"),
            (25, "3"),
            (27, "2"),
            (29, "1#,2"),
            (31, "1#,1"),
            (32, "2"),
        ];
        for (pos, s) in expect {
            assert_eq!(sig[&pos], st(s), "sigma({pos})");
        }
        assert_eq!(st_tables.rows[&st("2")], vec![3, 10, 11, 23, 27, 32]);
        assert_eq!(st_tables.rows[&st("3")], vec![12, 16, 19, 25]);
        assert_eq!(st_tables.rows[&st("1#,1")], vec![9, 31]);
        assert_eq!(st_tables.rows[&st("2#")], vec![5, 6]);
        assert_eq!(st_tables.rows[&st("2#,1")], vec![14, 24]);
        assert_eq!(st_tables.s_rows[&st("2")], vec![3, 11, 23]);
        // NJ(M), ascending.
        let nj: Vec<Stratino> = st_tables.rows.keys().cloned().collect();
        let expect_nj: Vec<Stratino> = [
            "", "1", "1#,1", "1#,2", "2", "2,1", "2#", "2#,1", "2#,2", "3",
        ]
        .iter()
        .map(|s| st(s))
        .collect();
        assert_eq!(nj, expect_nj);
    }

    #[test]
    fn rule2_rejection() {
        // A ba monomial directly under the mr pair: its stratino is ε.
        let w = tokenize("zc+ mr+ ba sn+ sn- ch mr- zc-").unwrap();
        let pairs = rule1(&w).unwrap();
        let (e_of_m, tree) = word_skeleton(&w, &pairs);
        let err = sigma_table(&w, &e_of_m, &tree).unwrap_err();
        assert_eq!(err.position, 3);
    }

    #[test]
    fn rule3_golden() {
        let w = example();
        let a = validate(&w).unwrap();
        let cg: BTreeSet<usize> = [2, 3, 4, 9, 12, 14, 15, 22].into_iter().collect();
        let cd: BTreeSet<usize> = [2, 4, 9, 12, 14, 15, 22, 23].into_iter().collect();
        assert_eq!(a.cg, cg);
        assert_eq!(a.cd, cd);
        assert_eq!(a.g[&3], vec![4]);
        assert!(a.g.iter().all(|(k, v)| *k == 3 || v.is_empty()));
        assert_eq!(a.r[&2], vec![3, 9, 31, 32]);
        assert_eq!(a.r_k[&2], vec![vec![3, 9, 31, 32]]);
        assert_eq!(a.v[&2], 1);
        assert_eq!(a.rd[&11], vec![12, 14]);
        assert_eq!(a.rg[&23], vec![24, 25]);
        assert_eq!(a.r_k[&9], vec![vec![22, 29]]);
        assert_eq!(a.r_k[&14], vec![vec![15, 18]]);
        assert_eq!(a.rd[&2], Vec::<usize>::new());
        assert_eq!(a.r_prime[&2], vec![3, 9, 31, 32]);
        // Δ blocks.
        assert_eq!(a.delta_k[&4], vec![vec![5, 6]]);
        assert_eq!(a.delta_k[&9], vec![vec![10, 11], vec![]]);
        assert_eq!(a.delta_k[&14], vec![vec![], vec![19]]);
        assert_eq!(a.delta_k[&22], vec![vec![23, 27]]);
        assert_eq!(a.delta_k[&15], vec![vec![16]]);
    }

    #[test]
    fn rule4_golden() {
        let w = example();
        let a = validate(&w).unwrap();
        let zoucs: BTreeSet<usize> = [4, 9, 14].into_iter().collect();
        assert_eq!(a.zoucs, zoucs);
        assert_eq!(a.fans[&4], vec![5, 6]);
        assert_eq!(a.fans[&9], vec![10, 11, 23, 27]);
        assert_eq!(a.fans[&14], vec![16, 19]);
        let zm: BTreeSet<usize> = [14].into_iter().collect();
        assert_eq!(a.zm, zm);
    }

    #[test]
    fn derived_golden() {
        let w = example();
        let a = validate(&w).unwrap();
        assert_eq!(a.s[&2], vec![3, 10, 11, 23, 27, 32]);
        assert_eq!(a.s[&11], vec![12, 16, 19]);
        assert_eq!(a.s[&23], vec![25]);
        assert_eq!(a.t[&2], vec![9, 31]);
        assert_eq!(a.t[&11], vec![14]);
        assert_eq!(a.t[&23], vec![24]);
        assert_eq!(a.delta_g[&3], vec![5, 6]);
        // The four stratajo factors.
        let st2 = &a.stratajos[&st("2")];
        assert_eq!(st2, &vec![vec![3, 10, 11, 23, 27, 32]]);
        assert_eq!(a.stratajos[&st("3")], vec![vec![12, 16, 19, 25]]);
        assert_eq!(a.stratajos[&st("1#,2")], vec![vec![22, 29]]);
        assert_eq!(a.stratajos[&st("2#,2")], vec![vec![15, 18]]);
    }

    #[test]
    fn skeleton_nesting_relations() {
        let a = validate(&example()).unwrap();
        // 9 encloses 23 through two parent steps; 12 and 14 are ordered
        // siblings under 11.
        assert!(a.tree.emboite(&9, &23));
        assert!(!a.tree.emboite(&14, &12));
        assert!(a.tree.precede(&12, &14));
        assert!(!a.tree.emboite(&14, &25));
        assert_eq!(a.tree.order_cmp(&9, &9), std::cmp::Ordering::Equal);
    }

    #[test]
    fn validate_counts() {
        let w = example();
        let a = validate(&w).unwrap();
        assert_eq!(a.eta(), 34);
        assert_eq!(a.pair_count(), 11);
        assert_eq!(a.e_of_m.len(), 34 - 11);
        // η = 2(N+1) + monomial count.
        let monomials = a
            .e_of_m
            .iter()
            .filter(|&&p| a.word.at(p).is_monomial())
            .count();
        assert_eq!(a.eta(), 2 * a.pair_count() + monomials);
        // Strict stratino growth along the tree.
        for &gamma in &a.e_of_m {
            if gamma == 1 {
                continue;
            }
            let p = a.tree.parent(&gamma).unwrap();
            assert!(a.sigma[p] < a.sigma[&gamma], "sigma({p}) < sigma({gamma})");
        }
    }

    #[test]
    fn theta_word_is_valid() {
        let a = validate(&theta()).unwrap();
        assert_eq!(a.pair_count(), 3);
        assert_eq!(a.rows[&st("2")], vec![3, 5]);
    }

    #[test]
    fn mutations_are_invalid() {
        let w = example();
        // Deleting the fan of the tg zouc (tokens 5 and 6) breaks rule 4.
        let mut cut = w.tokens.clone();
        cut.drain(4..6);
        let verdict = validate(&JassoWord::new(cut));
        assert!(
            matches!(verdict, Err(WordViolation::Rule4(Rule4Violation { condition: 1, .. }))),
            "{verdict:?}"
        );
        // Deleting the chain terminator at position 32 breaks validity.
        let mut cut = w.tokens.clone();
        cut.remove(31);
        assert!(validate(&JassoWord::new(cut)).is_err());
        // The intact word stays valid.
        assert!(validate(&w).is_ok());
    }
}
