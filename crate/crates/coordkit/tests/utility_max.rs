//! End-to-end tests of the expected-utility maximizer.

mod common;

use coordkit::closed_form::game_family;
use coordkit::constraint::{rate_margin, MaximizeOpts, Verdict};
use coordkit::prob::Axis::{U, V, X, Y};
use coordkit::prob::{FiniteDist, Kernel};
use coordkit::region::{
    channel_capacity, expected_utility, max_utility_generic, MaxUtilityOpts, UtilitySpec,
};

fn alignment_utility() -> UtilitySpec {
    game_family(0.5).unwrap().1
}

fn copy_utility() -> UtilitySpec {
    // phi = 1{v = u}.
    let mut phi = vec![0.0; 16];
    for u in 0..2 {
        for x in 0..2 {
            for y in 0..2 {
                phi[((u * 2 + x) * 2 + y) * 2 + u] = 1.0;
            }
        }
    }
    UtilitySpec::new(2, 2, 2, 2, phi).unwrap()
}

#[test]
fn coordination_game_over_a_perfect_channel() {
    // The optimum sits near the boundary parameter 0.81; the search must
    // reach at least 0.79.
    let source = FiniteDist::uniform(vec![(U, 2)]);
    let channel = Kernel::identity(X, Y, 2);
    let result = max_utility_generic(
        &source,
        &channel,
        &alignment_utility(),
        &MaxUtilityOpts::default(),
    )
    .unwrap();
    assert!(
        result.utility >= 0.79,
        "utility {} below the reference optimum",
        result.utility
    );
    assert_eq!(result.report.verdict, Verdict::Achievable);
    // The reported utility is the expectation of the reported target.
    let check = expected_utility(&result.target_star, &source, &channel, &alignment_utility())
        .unwrap();
    assert!((check - result.utility).abs() < 1e-9);
}

#[test]
fn coordination_game_over_pure_noise_decouples_the_decoder() {
    // Over pure noise the achievable set pins V independent of U, which
    // caps the alignment utility at 1/2: the encoder may still copy the
    // source into X and the decoder output matches half the time. The
    // search must find that exact optimum; the symmetric one-parameter
    // family (whose only achievable member here scores 0.25) is strictly
    // suboptimal.
    let source = FiniteDist::uniform(vec![(U, 2)]);
    let channel = Kernel::bsc(0.5).unwrap();
    let result = max_utility_generic(
        &source,
        &channel,
        &alignment_utility(),
        &MaxUtilityOpts::default(),
    )
    .unwrap();
    assert!(
        result.utility >= 0.49 && result.utility <= 0.5 + 1e-9,
        "utility {} should reach the pure-noise optimum 1/2",
        result.utility
    );
    assert_eq!(result.report.verdict, Verdict::Achievable);
}

#[test]
fn lossless_copy_through_an_adequate_channel() {
    // capacity 1 exceeds H(U) for a skewed source, so the separation
    // seed certifies utility one.
    let source = FiniteDist::new(vec![(U, 2)], vec![0.7, 0.3]).unwrap();
    let channel = Kernel::identity(X, Y, 2);
    let result =
        max_utility_generic(&source, &channel, &copy_utility(), &MaxUtilityOpts::default())
            .unwrap();
    assert!(
        result.utility >= 1.0 - 1e-3,
        "utility {} below lossless",
        result.utility
    );
}

#[test]
fn copy_utility_feasibility_tracks_the_capacity_gap() {
    // Over a weak channel the copy utility cannot reach one.
    let source = FiniteDist::uniform(vec![(U, 2)]);
    let channel = Kernel::bsc(0.25).unwrap();
    let result =
        max_utility_generic(&source, &channel, &copy_utility(), &MaxUtilityOpts::default())
            .unwrap();
    let cap = channel_capacity(&channel, 1e-10).unwrap().capacity;
    assert!(cap < 1.0 - 1e-6);
    assert!(
        result.utility < 1.0 - 1e-3,
        "utility {} should fall short of lossless",
        result.utility
    );
    assert_eq!(result.report.verdict, Verdict::Achievable);
}

#[test]
fn rate_margin_vanishes_on_the_boundary() {
    // The uniform family member over pure noise sits exactly on the
    // achievability boundary, leaving no rate margin.
    let inst = common::uniform_product_instance(Kernel::bsc(0.5).unwrap());
    let margin = rate_margin(&inst, &MaximizeOpts::default()).unwrap();
    assert!(margin.abs() < 1e-9, "margin {margin}");
    // A positive-capacity product instance leaves the full channel
    // information as margin.
    let inst = common::uniform_product_instance(Kernel::bsc(0.25).unwrap());
    let margin = rate_margin(&inst, &MaximizeOpts::default()).unwrap();
    let expect = 1.0 - coordkit::prob::hb(0.25).unwrap();
    assert!((margin - expect).abs() < 1e-6);
}

#[test]
fn fallback_is_deterministic_and_achievable() {
    // A utility that rewards disagreement plus a zero-capacity channel:
    // the winner must still be certified achievable.
    let mut phi = vec![0.0; 16];
    for u in 0..2 {
        for x in 0..2 {
            for y in 0..2 {
                phi[((u * 2 + x) * 2 + y) * 2 + (1 - u)] = 1.0;
            }
        }
    }
    let util = UtilitySpec::new(2, 2, 2, 2, phi).unwrap();
    let source = FiniteDist::new(vec![(U, 2)], vec![0.9, 0.1]).unwrap();
    let channel = Kernel::bsc(0.5).unwrap();
    let result = max_utility_generic(&source, &channel, &util, &MaxUtilityOpts::default())
        .unwrap();
    assert_eq!(result.report.verdict, Verdict::Achievable);
    // Pointing the decoder at the majority-complement symbol earns 0.9
    // without any information flow.
    assert!(result.utility >= 0.9 - 1e-9, "utility {}", result.utility);
    let _ = V;
}
