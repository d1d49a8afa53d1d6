use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use lgdual::harness::FixtureSet;
use lgdual::pencil::{assemble_gram, build_ls, galois_invariant, radical_quotient, PencilConfig};
use lgdual::{genus_equal, IntMatrix, Matrix, DEFAULT_BOUND};

fn fixtures() -> &'static FixtureSet {
    static SET: OnceLock<FixtureSet> = OnceLock::new();
    SET.get_or_init(|| FixtureSet::load(&PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures"), true).unwrap())
}

fn all_configs() -> Vec<&'static PencilConfig> {
    let s = fixtures();
    s.families.values().chain(s.parametrized.values()).collect()
}

#[test]
fn every_fixture_has_complementary_rank() {
    for cfg in all_configs() {
        let ls = build_ls(cfg).unwrap_or_else(|e| panic!("{}: {e}", cfg.family_id));
        assert_eq!(ls.rank() + cfg.rank_pic(), 20, "{}", cfg.family_id);
        assert!(ls.is_nondegenerate() && ls.is_even(), "{}", cfg.family_id);
    }
}

#[test]
fn galois_step_is_idempotent() {
    for cfg in all_configs() {
        let (m, labels) = assemble_gram(cfg).unwrap();
        let (same, same_labels) = galois_invariant(&m, &labels, &[]).unwrap();
        assert_eq!((&same, &same_labels), (&m, &labels));
        let (g, names) = galois_invariant(&m, &labels, &cfg.galois_orbits).unwrap();
        assert_eq!(galois_invariant(&g, &names, &[]).unwrap(), (g.clone(), names.clone()));
    }
}

/// Move singular point `perm[i]` to position `i`, relabelling everything that mentions it.
fn permute_points(cfg: &PencilConfig, perm: &[usize]) -> PencilConfig {
    let mut out = cfg.clone();
    out.singularities = perm.iter().map(|&i| cfg.singularities[i].clone()).collect();
    let offsets: Vec<usize> = cfg
        .singularities
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.ade.rank();
            Some(o)
        })
        .collect();
    let cols: Vec<usize> = perm.iter().flat_map(|&i| (0..cfg.singularities[i].ade.rank()).map(|j| offsets[i] + j).collect::<Vec<_>>()).collect();
    let rows: Vec<usize> = (0..cfg.mixed_b.rows()).collect();
    out.mixed_b = cfg.mixed_b.select(&rows, &cols);
    let rename: HashMap<String, String> = perm
        .iter()
        .enumerate()
        .flat_map(|(new, &old)| {
            (1..=cfg.singularities[old].ade.rank()).map(move |j| (format!("E{}^{}", old + 1, j), format!("E{}^{}", new + 1, j)))
        })
        .collect();
    out.galois_orbits = cfg
        .galois_orbits
        .iter()
        .map(|o| o.iter().map(|l| rename.get(l).cloned().unwrap_or_else(|| l.clone())).collect())
        .collect();
    out
}

fn config_and_permutation() -> impl Strategy<Value = (usize, Vec<usize>)> {
    let n = all_configs().len();
    (0..n).prop_flat_map(|k| {
        let m = all_configs()[k].singularities.len();
        (Just(k), Just((0..m).collect::<Vec<usize>>()).prop_shuffle())
    })
}

fn sym(max_rank: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rank, 1..=5usize)
        .prop_flat_map(|(k, n)| {
            (
                prop::collection::vec(prop::collection::vec(-2i64..=2, n), k),
                prop::collection::vec(-4i64..=4, k * k),
            )
        })
        .prop_map(|(b, d)| {
            let k = b.len();
            let n = b[0].len();
            let big = |x: i64| BigInt::from(x);
            let bm = Matrix::from_fn(k, n, |i, j| big(b[i][j]));
            let dm = Matrix::from_fn(k, k, |i, j| big(d[i.min(j) * k + i.max(j)]));
            dm.congruence(&bm)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reordering_singular_points_conjugates_the_gram((k, perm) in config_and_permutation()) {
        let cfg = all_configs()[k];
        let moved = permute_points(cfg, &perm);
        let (m, labels) = assemble_gram(cfg).unwrap();
        let (m2, labels2) = assemble_gram(&moved).unwrap();
        // old label of each new position
        let back: HashMap<String, String> = perm
            .iter()
            .enumerate()
            .flat_map(|(new, &old)| (1..=cfg.singularities[old].ade.rank()).map(move |j| (format!("E{}^{}", new + 1, j), format!("E{}^{}", old + 1, j))))
            .collect();
        let pos: HashMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let sigma: Vec<usize> = labels2.iter().map(|l| pos[back.get(l).unwrap_or(l)]).collect();
        prop_assert_eq!(m.select(&sigma, &sigma), m2);
        let (a, b) = (build_ls(cfg).unwrap(), build_ls(&moved).unwrap());
        prop_assert!(genus_equal(&a, &b, DEFAULT_BOUND).unwrap(), "{}", cfg.family_id);
    }

    #[test]
    fn radical_quotient_is_nondegenerate(m in sym(4)) {
        let l = radical_quotient(&m).unwrap();
        prop_assert_eq!(l.rank(), m.rank());
        prop_assume!(l.rank() > 0);
        prop_assert!(!l.determinant().is_zero());
        let prod: BigInt = m.smith_normal_form().nonzero_diagonal().iter().product();
        prop_assert!((prod.abs() % l.determinant().abs()).is_zero());
    }
}
