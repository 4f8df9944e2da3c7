use proptest::prelude::*;
use skein_core::campaign;
use skein_core::dmod::{self, DMorphism};
use skein_core::homlab::{self, mor_basis, solve_boundary, BitMatrix, BitVec, Solution, TriangleData};
use skein_core::models::{SkeinFixtures, SkeinIndex, Table, Transcription};

fn fixtures() -> SkeinFixtures {
    SkeinFixtures::standard()
}

#[test]
fn triangle_holds_for_transcribed_maps() {
    let fx = fixtures();
    let report = homlab::verify_triangle(&fx.alg, &campaign::triangle_data(&fx));
    assert_eq!(report.checks.len(), 9);
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
}

#[test]
fn zero_maps_fail_only_condition_three() {
    let fx = fixtures();
    let zero = |a: SkeinIndex, b: SkeinIndex| DMorphism::zero(fx.bsd(a).clone(), fx.bsd(b).clone());
    let data = TriangleData {
        fs: SkeinIndex::ALL.map(|k| zero(k, k.succ())),
        phis: SkeinIndex::ALL.map(|k| zero(k, k.succ().succ())),
        kappas: SkeinIndex::ALL.map(|k| zero(k, k)),
    };
    let report = homlab::verify_triangle(&fx.alg, &data);
    assert_eq!(report.failed_conditions(), vec![3]);
    assert_eq!(report.failures().count(), 3);
}

#[test]
fn deleting_a_map_row_breaks_condition_one_or_two() {
    let t = Transcription::standard();
    let mut tried = 0;
    for (i, (table, _)) in t.rows.iter().enumerate() {
        if !matches!(table, Table::Map(..)) {
            continue;
        }
        tried += 1;
        let fx = SkeinFixtures::build(&t.without_row(i)).unwrap();
        let failed = homlab::verify_triangle(&fx.alg, &campaign::triangle_data(&fx)).failed_conditions();
        assert!(failed.contains(&1) || failed.contains(&2), "row {i} ({table}): {failed:?}");
    }
    assert!(tried >= 10);
}

#[test]
fn deleting_a_homotopy_row_breaks_condition_two_or_three() {
    let t = Transcription::standard();
    for (i, (table, _)) in t.rows.iter().enumerate() {
        if !matches!(table, Table::Homotopy(..)) {
            continue;
        }
        let fx = SkeinFixtures::build(&t.without_row(i)).unwrap();
        let failed = homlab::verify_triangle(&fx.alg, &campaign::triangle_data(&fx)).failed_conditions();
        assert!(failed.contains(&2) || failed.contains(&3), "row {i} ({table}): {failed:?}");
        assert!(!failed.contains(&1));
    }
}

#[test]
fn sample_boundary_of_f_infty_0_at_y1() {
    let fx = fixtures();
    let [delta_f, f_delta, d_f] = campaign::sample_pieces(&fx).unwrap();
    assert!(!delta_f.is_zero());
    assert!(!f_delta.is_zero());
    let mut total = delta_f.clone();
    total += &f_delta;
    total += &d_f;
    assert!(total.is_zero());
    let w = |s: &str| fx.alg.parse_word(s).unwrap();
    assert_eq!(w("45,6,5,2"), w("5,4,56,2"));
}

#[test]
fn mor_dimensions() {
    let fx = fixtures();
    let expected = [[24, 54, 30], [50, 160, 110], [26, 106, 80]];
    for a in SkeinIndex::ALL {
        for b in SkeinIndex::ALL {
            let c = mor_basis(&fx.alg, fx.bsd(a).clone(), fx.bsd(b).clone());
            assert_eq!(c.dim(), expected[a.slot()][b.slot()], "Mor({a}, {b})");
            assert!(c.squares_to_zero());
        }
    }
}

#[test]
fn boundaries_are_solved_and_identity_is_not() {
    let fx = fixtures();
    for k in SkeinIndex::ALL {
        let m = fx.bsd(k).clone();
        let complex = mor_basis(&fx.alg, m.clone(), m.clone());
        for n in (0..complex.dim()).step_by(7) {
            let target = complex.boundary_of(&complex.elementary(n)).unwrap();
            match solve_boundary(&complex, &target).unwrap() {
                Solution::Solved(h) => assert_eq!(dmod::morphism_boundary(&fx.alg, &h), target),
                Solution::NoSolution(c) => panic!("∂e{n} reported unsolvable: {c:?}"),
            }
        }
        match homlab::identity_obstruction(&fx.alg, m).unwrap() {
            Solution::NoSolution(c) => assert!(c.rank < c.augmented_rank),
            Solution::Solved(_) => panic!("Id is null-homotopic on BSD(B_{k})"),
        }
    }
}

#[test]
fn cycles_decompose_and_round_trip() {
    let fx = fixtures();
    for k in SkeinIndex::ALL {
        let f = fx.skein_map(k);
        let complex = mor_basis(&fx.alg, f.source().clone(), f.target().clone());
        let v = complex.decompose(&f).unwrap();
        assert_eq!(complex.assemble(&v), f);
        assert!(complex.boundary_matrix().mul_vec(&v).is_zero());
    }
}

#[test]
fn cone_equivalences() {
    let fx = fixtures();
    let data = campaign::triangle_data(&fx);
    for (k, cone_size, h_terms) in [(SkeinIndex::One, 5, 5), (SkeinIndex::Infty, 3, 0), (SkeinIndex::Zero, 4, 3)] {
        let eq = homlab::skein_equivalence(&fx.alg, &data, k).unwrap();
        assert_eq!(eq.cone.len(), cone_size, "k={k}");
        assert_eq!(eq.h.term_count(), h_terms, "k={k}");
        assert!(eq.certificates.iter().all(|c| c.holds));
        assert_eq!(eq.certificates.len(), 4);
        assert!(dmod::structure_check(&fx.alg, &eq.cone).passed());
    }
}

#[test]
fn corrupted_map_has_no_cone_equivalence() {
    let t = Transcription::standard();
    let i = t.rows.iter().position(|(table, _)| matches!(table, Table::Map(SkeinIndex::Infty, _))).unwrap();
    let fx = SkeinFixtures::build(&t.without_row(i)).unwrap();
    let data = campaign::triangle_data(&fx);
    assert!(SkeinIndex::ALL.iter().any(|k| homlab::skein_equivalence(&fx.alg, &data, *k).is_err()));
}

fn bit_matrix(rows: &[Vec<bool>], ncols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows.len(), ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            m.set(r, c, v);
        }
    }
    m
}

proptest! {
    #[test]
    fn solve_returns_preimage_or_rank_certificate(
        rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 9), 1..12),
        rhs in prop::collection::vec(any::<bool>(), 12),
    ) {
        let m = bit_matrix(&rows, 9);
        let mut b = BitVec::zeros(rows.len());
        for (i, &v) in rhs.iter().take(rows.len()).enumerate() {
            b.set(i, v);
        }
        match m.solve(&b) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x), b),
            Err(cert) => {
                prop_assert_eq!(cert.rank, m.rank());
                prop_assert_eq!(cert.augmented_rank, cert.rank + 1);
            }
        }
    }

    #[test]
    fn image_vectors_are_always_solvable(
        rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 7), 1..10),
        x in prop::collection::vec(any::<bool>(), 7),
    ) {
        let m = bit_matrix(&rows, 7);
        let mut v = BitVec::zeros(7);
        for (i, &b) in x.iter().enumerate() {
            v.set(i, b);
        }
        let b = m.mul_vec(&v);
        let solved = m.solve(&b).unwrap();
        prop_assert_eq!(m.mul_vec(&solved), b);
    }

    #[test]
    fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 1..8)) {
        let m = bit_matrix(&rows, 6);
        let mut t = BitMatrix::zeros(6, rows.len());
        for r in 0..rows.len() {
            for c in 0..6 {
                t.set(c, r, m.get(r, c));
            }
        }
        prop_assert_eq!(m.rank(), t.rank());
    }
}
