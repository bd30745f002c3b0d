use cliffordlab::rudin_shapiro::{
    autocorr_growth_exponent, autocorr_growth_exponent_of, autocorr_spectrum, autocorrelation,
    direct_sign, generate, Branch,
};
use cliffordlab::Error;
use proptest::prelude::*;

fn brute_force_autocorr(values: &[i8], beta: usize) -> i64 {
    (0..values.len() - beta)
        .map(|j| values[j] as i64 * values[j + beta] as i64)
        .sum()
}

#[test]
fn generate_unrolls_the_recursion() {
    assert_eq!(generate(1, Branch::P).unwrap().values(), &[1]);
    assert_eq!(generate(4, Branch::P).unwrap().values(), &[1, 1, 1, -1]);
    assert_eq!(
        generate(8, Branch::Q).unwrap().values(),
        &[1, 1, 1, -1, -1, -1, 1, -1]
    );
}

#[test]
fn generate_rejects_zero_length() {
    assert!(matches!(
        generate(0, Branch::P),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn generated_sequences_start_at_one_with_unit_entries() {
    for branch in [Branch::P, Branch::Q] {
        for n in [1usize, 2, 3, 5, 16, 100, 1 << 12] {
            let seq = generate(n, branch).unwrap();
            assert_eq!(seq.len(), n);
            assert_eq!(seq.values()[0], 1);
            assert!(seq.values().iter().all(|&v| v == 1 || v == -1));
        }
    }
}

#[test]
fn p_branch_prefixes_are_stable_under_doubling() {
    let full = generate(1 << 19, Branch::P).unwrap();
    for m in 0..19 {
        let short = generate(1 << m, Branch::P).unwrap();
        assert_eq!(short.values(), &full.values()[..1 << m], "m = {m}");
    }
}

#[test]
fn q_branch_doubles_by_prepending_the_p_snapshot() {
    // Q_{m+1} = P_m ++ (-Q_m): the first half of each Q snapshot is the
    // same-size P snapshot, NOT the previous Q snapshot, so Q prefixes are
    // only stable inside one covering dyadic block.
    for m in 1..16 {
        let half = 1usize << (m - 1);
        let q = generate(2 * half, Branch::Q).unwrap();
        let p = generate(half, Branch::P).unwrap();
        let q_prev = generate(half, Branch::Q).unwrap();
        assert_eq!(&q.values()[..half], p.values(), "m = {m}");
        let neg: Vec<i8> = q_prev.values().iter().map(|&v| -v).collect();
        assert_eq!(&q.values()[half..], &neg[..], "m = {m}");
    }
}

#[test]
fn non_dyadic_lengths_are_prefixes_of_the_covering_snapshot() {
    for n in [1usize, 3, 17, 100, 1000, 2049, 4095] {
        let covering = n.next_power_of_two();
        for branch in [Branch::P, Branch::Q] {
            let long = generate(covering, branch).unwrap();
            assert_eq!(
                generate(n, branch).unwrap().values(),
                &long.values()[..n],
                "branch {branch:?}, n = {n}"
            );
        }
    }
    // on the P branch the prefix property holds across block boundaries too
    let long = generate(4096, Branch::P).unwrap();
    for n in [1usize, 3, 17, 100, 1000, 2049, 4095] {
        assert_eq!(generate(n, Branch::P).unwrap().values(), &long.values()[..n]);
    }
}

#[test]
fn direct_sign_formula_matches_the_recursion() {
    let seq = generate(1 << 20, Branch::P).unwrap();
    for (j, &v) in seq.values().iter().enumerate() {
        assert_eq!(direct_sign(j as u64), v, "index {j}");
    }
}

#[test]
fn autocorrelation_worked_examples() {
    let four = generate(4, Branch::P).unwrap();
    assert_eq!(autocorrelation(&four, 0).unwrap(), 4);
    assert_eq!(autocorrelation(&four, 1).unwrap(), 1);
    let eight = generate(8, Branch::P).unwrap();
    assert_eq!(eight.values(), &[1, 1, 1, -1, 1, 1, -1, 1]);
    assert_eq!(autocorrelation(&eight, 1).unwrap(), -1);
}

#[test]
fn autocorrelation_rejects_out_of_range_offsets() {
    let seq = generate(4, Branch::P).unwrap();
    for beta in [4i64, -4, 5, 100] {
        assert!(matches!(
            autocorrelation(&seq, beta),
            Err(Error::InvalidArgument(_))
        ));
    }
    assert!(autocorrelation(&seq, 3).is_ok());
    assert!(autocorrelation(&seq, -3).is_ok());
}

#[test]
fn spectrum_worked_examples() {
    let four = generate(4, Branch::P).unwrap();
    assert_eq!(autocorr_spectrum(&four).unwrap(), vec![4, 1, 0, -1]);
    let one = generate(1, Branch::P).unwrap();
    assert_eq!(autocorr_spectrum(&one).unwrap(), vec![1]);
}

#[test]
fn spectrum_matches_brute_force_for_assorted_lengths() {
    for branch in [Branch::P, Branch::Q] {
        for n in [1usize, 2, 3, 4, 5, 7, 8, 13, 64, 100, 255, 256, 257, 1000, 1024] {
            let seq = generate(n, branch).unwrap();
            let spectrum = autocorr_spectrum(&seq).unwrap();
            assert_eq!(spectrum.len(), n);
            for beta in 0..n {
                assert_eq!(
                    spectrum[beta],
                    brute_force_autocorr(seq.values(), beta),
                    "branch {branch:?}, n = {n}, beta = {beta}"
                );
            }
        }
    }
}

#[test]
fn spectrum_agrees_with_single_offset_queries() {
    let seq = generate(777, Branch::Q).unwrap();
    let spectrum = autocorr_spectrum(&seq).unwrap();
    for beta in [0i64, 1, 2, 100, 776] {
        assert_eq!(spectrum[beta as usize], autocorrelation(&seq, beta).unwrap());
    }
}

/// The per-length maxima of |autocorrelation| over beta >= 1 for the P
/// branch at dyadic lengths 2^6..2^15. These are exact integers fixed by
/// the sequence definition; any drift means the generator or the FFT
/// rounding changed.
#[test]
fn dyadic_autocorrelation_maxima_are_stable() {
    let expected: [(usize, i64); 10] = [
        (1 << 6, 13),
        (1 << 7, 19),
        (1 << 8, 33),
        (1 << 9, 53),
        (1 << 10, 85),
        (1 << 11, 153),
        (1 << 12, 217),
        (1 << 13, 373),
        (1 << 14, 557),
        (1 << 15, 961),
    ];
    for (n, want) in expected {
        let seq = generate(n, Branch::P).unwrap();
        let spectrum = autocorr_spectrum(&seq).unwrap();
        let max = spectrum[1..].iter().map(|v| v.abs()).max().unwrap();
        assert_eq!(max, want, "length {n}");
    }
}

#[test]
fn growth_exponent_sits_below_the_flatness_threshold() {
    let lengths: Vec<usize> = (6..=15).map(|m| 1usize << m).collect();
    for branch in [Branch::P, Branch::Q] {
        let (slope, _) = autocorr_growth_exponent(&lengths, branch).unwrap();
        assert!(
            (0.4..0.74).contains(&slope),
            "branch {branch:?} exponent {slope}"
        );
    }
}

#[test]
fn growth_exponent_of_constant_sequences_is_linear() {
    // all-ones control: autocorrelation at offset beta is n - beta, so the
    // maximum grows like n and the fitted exponent must sit near 1
    let lengths: Vec<usize> = (6..=15).map(|m| 1usize << m).collect();
    let (slope, _) =
        autocorr_growth_exponent_of(&lengths, |n| Ok(vec![1i8; n])).unwrap();
    assert!((slope - 1.0).abs() < 0.05, "exponent {slope}");
}

#[test]
fn growth_exponent_needs_three_distinct_lengths() {
    assert!(matches!(
        autocorr_growth_exponent(&[64, 64, 64], Branch::P),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(
        autocorr_growth_exponent(&[64, 128], Branch::P),
        Err(Error::InvalidArgument(_))
    ));
}

proptest! {
    #[test]
    fn autocorrelation_is_symmetric(n in 1usize..600, flip in any::<bool>()) {
        let branch = if flip { Branch::P } else { Branch::Q };
        let seq = generate(n, branch).unwrap();
        for beta in 0..n as i64 {
            prop_assert_eq!(
                autocorrelation(&seq, beta).unwrap(),
                autocorrelation(&seq, -beta).unwrap()
            );
        }
    }

    #[test]
    fn spectrum_matches_brute_force_on_random_lengths(n in 1usize..700) {
        let seq = generate(n, Branch::Q).unwrap();
        let spectrum = autocorr_spectrum(&seq).unwrap();
        for beta in (0..n).step_by(1 + n / 13) {
            prop_assert_eq!(spectrum[beta], brute_force_autocorr(seq.values(), beta));
        }
    }

    #[test]
    fn direct_sign_is_plus_minus_one(j in any::<u64>()) {
        let s = direct_sign(j);
        prop_assert!(s == 1 || s == -1);
    }
}
