use std::collections::BTreeSet;

use skein_core::algebra::StrandsAlgebra;
use skein_core::axioms::{self, ProductTable, J_PRIME};

// Arcs and matching of the skein diagram, restated here so the counts below
// do not go through the library's diagram code.
const ARCS: [&[u32]; 4] = [&[1], &[2, 3, 4, 5], &[6, 7, 8, 9], &[10, 11, 12]];
const MATCHING: [u32; 12] = [1, 2, 1, 3, 2, 4, 3, 5, 4, 6, 5, 6];

fn class(p: u32) -> u32 {
    MATCHING[p as usize - 1]
}

fn binom(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Number of 5-strand generators: sets of upward chords with distinct start
/// classes and distinct end classes, completed by horizontal classes that
/// avoid both.
fn basis_size_oracle(k: u32) -> u64 {
    let chords: Vec<(u32, u32)> = ARCS
        .iter()
        .flat_map(|arc| arc.iter().enumerate().flat_map(move |(i, &a)| arc[i + 1..].iter().map(move |&b| (a, b))))
        .collect();
    let mut total = 0;
    for mask in 0u32..1 << chords.len() {
        let chosen: Vec<(u32, u32)> = (0..chords.len()).filter(|i| mask >> i & 1 == 1).map(|i| chords[i]).collect();
        if chosen.len() as u32 > k {
            continue;
        }
        let starts: BTreeSet<u32> = chosen.iter().map(|c| class(c.0)).collect();
        let ends: BTreeSet<u32> = chosen.iter().map(|c| class(c.1)).collect();
        if starts.len() != chosen.len() || ends.len() != chosen.len() {
            continue;
        }
        let used = starts.union(&ends).count() as u32;
        total += binom(6 - used, k - chosen.len() as u32);
    }
    total
}

#[test]
fn chord_count_matches_labels() {
    let alg = StrandsAlgebra::skein();
    assert_eq!(alg.diagram().reeb_chords().len(), J_PRIME.len());
}

#[test]
fn basis_size_agrees_with_counting_oracle() {
    let alg = StrandsAlgebra::skein();
    let basis = alg.enumerate_basis();
    assert_eq!(basis_size_oracle(5), 430);
    assert_eq!(basis.len() as u64, basis_size_oracle(5));
    let distinct: BTreeSet<_> = basis.iter().collect();
    assert_eq!(distinct.len(), basis.len());
    for g in &basis {
        alg.check_generator(g).unwrap();
        assert_eq!(g.strand_count(), 5);
    }
}

#[test]
fn axioms_hold_exhaustively() {
    let alg = StrandsAlgebra::skein();
    let t = ProductTable::new(&alg);
    assert_eq!(t.len(), 430);
    assert_eq!(t.compatible_pairs(), 30226);
    assert_eq!(t.nonzero_products(), 3699);
    assert!(axioms::d_squared(&t).passed());
    assert!(axioms::leibniz(&alg, &t).passed());
    assert!(axioms::associativity(&alg, &t).passed());
    assert!(axioms::idempotent_laws(&alg).passed());
}

#[test]
fn nonzero_words_respect_digit_rule() {
    let alg = StrandsAlgebra::skein();
    let (count, report) = axioms::digit_rule(&alg, &J_PRIME);
    assert!(report.passed(), "{:?}", report.violations);
    assert_eq!(count, 2535);
}

#[test]
fn overlapping_labels_annihilate() {
    let alg = StrandsAlgebra::skein();
    let (pairs, report) = axioms::overlap_rule(&alg, &J_PRIME);
    assert!(report.passed(), "{:?}", report.violations);
    assert_eq!(pairs, 26);
    for w in [["123", "1"], ["3", "123"], ["456", "4"], ["78", "7"], ["8", "78"]] {
        assert!(alg.chord_word(&w).unwrap().is_zero(), "{w:?}");
    }
}

#[test]
fn single_chords_are_nonzero() {
    let alg = StrandsAlgebra::skein();
    for l in J_PRIME {
        let a = alg.chord_word(&[l]).unwrap();
        // completions pick the 4 horizontal classes from those the chord avoids
        let used = if J.contains(&l) { 2 } else { 1 };
        let expected = binom(6 - used, 4) as usize;
        assert_eq!(a.len(), expected, "{l}");
    }
}

#[test]
fn different_words_for_one_element() {
    let alg = StrandsAlgebra::skein();
    let w = |s: &str| alg.parse_word(s).unwrap();
    assert!(!w("12,3,2").is_zero());
    assert_eq!(w("12,3,2"), w("2,1,23"));
    assert!(!w("45,6,5").is_zero());
    assert_eq!(w("45,6,5"), w("5,4,56"));
    assert!(w("45,4").is_zero());
}

const J: [&str; 12] = ["1", "2", "3", "12", "23", "4", "5", "6", "45", "56", "7", "8"];

/// d of a word over J: split one two-digit label ab and swap it to (b, a).
fn comma_rule(alg: &StrandsAlgebra, word: &[&str]) -> skein_core::AlgebraElement {
    let mut out = skein_core::AlgebraElement::zero();
    for (i, l) in word.iter().enumerate() {
        if l.len() != 2 {
            continue;
        }
        let (a, b) = l.split_at(1);
        let mut w: Vec<&str> = word[..i].to_vec();
        w.extend([b, a]);
        w.extend(&word[i + 1..]);
        for g in alg.chord_word(&w).unwrap().iter() {
            out.toggle(g.clone());
        }
    }
    out
}

#[test]
fn differential_follows_comma_rule() {
    let alg = StrandsAlgebra::skein();
    let w = |s: &str| alg.parse_word(s).unwrap();
    let mut expected = w("2,1,3,4,56,2");
    for g in w("12,3,4,6,5,2").iter() {
        expected.toggle(g.clone());
    }
    assert_eq!(alg.diff(&w("12,3,4,56,2")), expected);

    let words = axioms::nonzero_words(&alg, &J);
    assert!(words.len() > 100);
    for (word, value) in &words {
        assert_eq!(alg.diff(value), comma_rule(&alg, word), "d({})", word.join(","));
    }
}

#[test]
fn parse_word_round_trips_labels() {
    let alg = StrandsAlgebra::skein();
    assert_eq!(alg.parse_word("4,56").unwrap(), alg.chord_word(&["4", "56"]).unwrap());
    assert_eq!(alg.parse_word("I").unwrap(), alg.unit());
    assert!(alg.parse_word("4,9").is_err());
}
