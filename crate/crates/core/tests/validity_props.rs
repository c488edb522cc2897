use cshape::validity::{entropy_cols, entropy_rows, mutual_information};
use cshape::{
    adjusted_rand, nmi_max, pair_counts, rand_index, variation_of_information, ContingencyTable,
    CviReport,
};
use cshape_testkit::{brute_pair_counts, random_labels, rng, vi_entropy_identity};
use proptest::prelude::*;
use rand::Rng;

fn table(u: &[usize], q: &[usize]) -> ContingencyTable {
    ContingencyTable::from_labels(u, q).unwrap()
}

fn choose2(x: u64) -> f64 {
    (x * x.saturating_sub(1)) as f64 / 2.0
}

/// Hubert-Arabie ARI written from contingency-table binomials.
fn ari_from_binomials(u: &[usize], q: &[usize]) -> f64 {
    let t = table(u, q);
    let index: f64 = t.counts().iter().flatten().map(|&x| choose2(x)).sum();
    let rows: f64 = t.row_sums().iter().map(|&x| choose2(x)).sum();
    let cols: f64 = t.col_sums().iter().map(|&x| choose2(x)).sum();
    let expected = rows * cols / choose2(t.total());
    (index - expected) / ((rows + cols) / 2.0 - expected)
}

fn pair() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (2usize..60, 1usize..6, 1usize..6).prop_flat_map(|(n, r, c)| {
        (
            prop::collection::vec(0..r, n),
            prop::collection::vec(0..c, n),
        )
    })
}

#[test]
fn fifty_pairs_match_brute_force() {
    let mut r = rng(21);
    for _ in 0..50 {
        let n = r.gen_range(2..=60);
        let ku = r.gen_range(1..6);
        let u = random_labels(&mut r, n, ku);
        let kq = r.gen_range(1..6);
        let q = random_labels(&mut r, n, kq);
        let p = pair_counts(&table(&u, &q));
        assert_eq!((p.a, p.b, p.c, p.d), brute_pair_counts(&u, &q));
    }
}

#[test]
fn ari_matches_binomial_form() {
    let mut r = rng(22);
    for _ in 0..200 {
        let n = r.gen_range(4..=40);
        let ku = r.gen_range(2..5);
        let u = random_labels(&mut r, n, ku);
        let kq = r.gen_range(2..5);
        let q = random_labels(&mut r, n, kq);
        let direct = adjusted_rand(&pair_counts(&table(&u, &q)));
        assert!((direct - ari_from_binomials(&u, &q)).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn pair_counts_are_exact((u, q) in pair()) {
        let p = pair_counts(&table(&u, &q));
        prop_assert_eq!((p.a, p.b, p.c, p.d), brute_pair_counts(&u, &q));
        let n = u.len() as u64;
        prop_assert_eq!(p.total(), n * (n - 1) / 2);
    }

    #[test]
    fn indices_are_symmetric((u, q) in pair()) {
        let a = CviReport::compare(&u, &q).unwrap();
        let b = CviReport::compare(&q, &u).unwrap();
        prop_assert!((a.ri - b.ri).abs() < 1e-12);
        prop_assert!((a.ari - b.ari).abs() < 1e-12);
        prop_assert!((a.nmi - b.nmi).abs() < 1e-12);
        prop_assert!((a.vi - b.vi).abs() < 1e-12);
    }

    #[test]
    fn relabeling_changes_nothing((u, q) in pair(), offset in 1usize..5) {
        let relabeled: Vec<usize> = u.iter().map(|l| (l + offset) * 3).collect();
        let a = CviReport::compare(&u, &q).unwrap();
        let b = CviReport::compare(&relabeled, &q).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ranges_and_self_agreement((u, q) in pair()) {
        let t = table(&u, &q);
        let r = CviReport::from_table(&t);
        prop_assert!((0.0..=1.0).contains(&r.ri));
        prop_assert!(r.ari <= 1.0 + 1e-12);
        prop_assert!((0.0..=1.0).contains(&r.nmi));
        prop_assert!(r.vi >= 0.0 && r.vi <= (u.len() as f64).ln() + 1e-12);
        let same = CviReport::compare(&u, &u).unwrap();
        prop_assert_eq!((same.ri, same.ari, same.vi), (1.0, 1.0, 0.0));
        prop_assert_eq!(same.nmi, 1.0);
    }

    #[test]
    fn vi_matches_entropy_identity((u, q) in pair()) {
        let t = table(&u, &q);
        prop_assert!((variation_of_information(&t) - vi_entropy_identity(&u, &q)).abs() < 1e-12);
        let mi = mutual_information(&t);
        prop_assert!(mi <= entropy_rows(&t).min(entropy_cols(&t)) + 1e-12);
    }

    #[test]
    fn vi_triangle_inequality(
        n in 2usize..20,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let a = random_labels(&mut r, n, 4);
        let b = random_labels(&mut r, n, 3);
        let c = random_labels(&mut r, n, 5);
        let vi = |x: &[usize], y: &[usize]| variation_of_information(&table(x, y));
        prop_assert!(vi(&a, &c) <= vi(&a, &b) + vi(&b, &c) + 1e-10);
    }
}

#[test]
fn rand_index_of_worked_pairs() {
    let p = pair_counts(&table(&[1, 1, 2, 2], &[1, 1, 1, 2]));
    assert_eq!(rand_index(&p), 0.5);
    assert_eq!(nmi_max(&table(&[0, 0, 0, 0], &[0, 0, 0, 0])), 1.0);
}
