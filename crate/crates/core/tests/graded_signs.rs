use multisym::graded::*;

/// Koszul sign by realizing σ with adjacent swaps (insertion sort) on
/// the sequence of degrees; each swap of neighbours a,b contributes (-1)^{ab}.
fn koszul_by_adjacent_swaps(sigma: &Permutation, degs: &[i64]) -> i64 {
    // start from the target order and sort back to the identity
    let mut seq: Vec<usize> = sigma.images().to_vec();
    let mut sign = 1;
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            if (degs[seq[j - 1] - 1] * degs[seq[j] - 1]).rem_euclid(2) == 1 {
                sign = -sign;
            }
            seq.swap(j - 1, j);
            j -= 1;
        }
    }
    sign
}

fn degree_vectors(k: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |d| {
                    let mut w = v.clone();
                    w.push(d);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn koszul_sign_matches_adjacent_swap_count() {
    for k in 1..=5 {
        for sigma in all_permutations(k) {
            for degs in degree_vectors(k, -1, 2) {
                assert_eq!(
                    koszul_sign(&sigma, &degs).unwrap().to_i64(),
                    koszul_by_adjacent_swaps(&sigma, &degs),
                    "{sigma} {degs:?}"
                );
            }
        }
    }
}

#[test]
fn decalage_sign_equals_koszul_on_shifted_degrees_exhaustively() {
    for k in 1..=5 {
        let perms = all_permutations(k);
        for degs in degree_vectors(k, -2, 2) {
            let shifted: Vec<i64> = degs.iter().map(|d| d - 1).collect();
            for sigma in &perms {
                assert_eq!(
                    decalage_koszul(sigma, &degs).unwrap(),
                    koszul_sign(sigma, &shifted).unwrap(),
                    "{sigma} {degs:?}"
                );
            }
        }
    }
}

#[test]
fn koszul_composition_law() {
    for k in 1..=4 {
        let perms = all_permutations(k);
        for degs in degree_vectors(k, 0, 1) {
            for sigma in &perms {
                for tau in &perms {
                    let lhs = koszul_sign(&sigma.after(tau), &degs).unwrap();
                    let rhs = koszul_sign(sigma, &tau.permute(&degs)).unwrap() * koszul_sign(tau, &degs).unwrap();
                    assert_eq!(lhs, rhs, "{sigma} {tau} {degs:?}");
                }
            }
        }
    }
}

#[test]
fn unshuffles_are_the_block_monotone_permutations() {
    for n in 1..=6 {
        for p in 0..=n {
            let sh = unshuffles(p, n - p);
            let expected: Vec<Permutation> = all_permutations(n)
                .into_iter()
                .filter(|s| {
                    let im = s.images();
                    im[..p].windows(2).all(|w| w[0] < w[1]) && im[p..].windows(2).all(|w| w[0] < w[1])
                })
                .collect();
            // both lists are in lexicographic order of the image list
            assert_eq!(sh, expected, "({p},{})", n - p);
        }
    }
}

#[test]
fn parity_is_multiplicative() {
    let perms = all_permutations(4);
    for s in &perms {
        for t in &perms {
            assert_eq!(s.after(t).parity(), s.parity() * t.parity());
        }
        assert_eq!(s.after(&s.inverse()), Permutation::identity(4));
    }
}
