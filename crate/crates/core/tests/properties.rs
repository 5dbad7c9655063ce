mod support;

use rainbow_lab::coloring::residue_palettes;
use rainbow_lab::{is_rainbow_free, Coloring};

fn check(result: support::Check) {
    match result {
        Ok(summary) => println!("{summary}"),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn triple_count_is_n_squared() {
    check(support::triple_counts());
}

#[test]
fn no_triple_has_exactly_two_multiples_of_a_coprime_prime() {
    check(support::divisibility_counts());
}

#[test]
fn dilation_preserves_rainbow_freeness_and_class_sizes() {
    check(support::dilation_invariance());
}

#[test]
fn color_of_one_is_dominant() {
    check(support::dominance());
}

#[test]
fn at_most_one_minor_color_repeats_adjacently() {
    check(support::no_two_doubled_minor_colors());
}

#[test]
fn prime_three_colorings_have_a_singleton_class() {
    check(support::singleton_class_in_prime_3colorings());
}

#[test]
fn prime_colorings_with_three_colors_are_symmetric() {
    check(support::prime_symmetry());
}

#[test]
fn residue_palettes_gain_at_most_one_color_over_p0() {
    check(support::limited_colors());
}

#[test]
fn residue_palettes_gain_at_most_one_color_over_the_largest() {
    check(support::not_too_big());
}

#[test]
fn prime_power_palettes_pair_up_and_p0_collapses() {
    check(support::prime_power_palette_suite());
}

#[test]
fn projections_stay_rainbow_free() {
    check(support::projections());
}

#[test]
fn palette_pairing_needs_a_third_color() {
    // 2-colorings are rainbow-free by definition, and this one breaks P_1 = P_2 mod 3
    let c = Coloring::new(vec![0, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
    assert!(is_rainbow_free(&c, 3));
    let ps = residue_palettes(&c, 3).unwrap();
    assert_ne!(ps[1], ps[2]);
}
