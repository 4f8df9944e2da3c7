use skein_core::dmod::{self, DMorphism, TermSpec, TypeDStructure};
use skein_core::error::ModuleError;
use skein_core::models::{SkeinFixtures, SkeinIndex, Table, Transcription};

#[test]
fn transcribed_modules_are_type_d_structures() {
    let fx = SkeinFixtures::standard();
    for (k, size, terms) in [(SkeinIndex::One, 1, 1), (SkeinIndex::Infty, 3, 4), (SkeinIndex::Zero, 2, 5)] {
        let m = fx.bsd(k);
        assert_eq!(m.len(), size, "k={k}");
        assert_eq!(m.term_count(), terms, "k={k}");
        let r = dmod::structure_check(&fx.alg, m);
        assert!(r.passed(), "k={k}: {:?}", r.violations);
    }
}

#[test]
fn delta_y2_vanishes() {
    let fx = SkeinFixtures::standard();
    let m = fx.bsd(SkeinIndex::Infty);
    assert!(m.delta(m.index("y2").unwrap()).is_zero());
}

#[test]
fn delta_squared_of_x_is_zero_term_by_term() {
    let fx = SkeinFixtures::standard();
    let m = fx.bsd(SkeinIndex::One);
    assert!(dmod::delta_squared(&fx.alg, m, 0).is_zero());
    // the single coefficient is a cycle and squares to zero
    let x = fx.alg.parse_word("4,6,7,8,5").unwrap();
    assert!(fx.alg.diff(&x).is_zero());
    assert!(fx.alg.mul(&x, &x).unwrap().is_zero());
}

#[test]
fn wrong_idempotent_is_rejected() {
    let fx = SkeinFixtures::standard();
    let alg = &fx.alg;
    let err = TypeDStructure::new(
        alg,
        vec![("x".into(), alg.occ(1).occupied)],
        &[TermSpec { from: "x".into(), coef: alg.parse_word("4,6,7,8,5").unwrap(), to: "x".into() }],
    )
    .unwrap_err();
    assert!(matches!(err, ModuleError::Idempotent { .. }), "{err:?}");
}

#[test]
fn unknown_and_duplicate_generators_are_rejected() {
    let fx = SkeinFixtures::standard();
    let alg = &fx.alg;
    let idem = alg.occ(3).occupied;
    let dup = TypeDStructure::new(alg, vec![("x".into(), idem), ("x".into(), idem)], &[]);
    assert!(matches!(dup, Err(ModuleError::DuplicateGenerator(_))));
    let unknown = TypeDStructure::new(
        alg,
        vec![("x".into(), idem)],
        &[TermSpec { from: "w".into(), coef: alg.unit(), to: "x".into() }],
    );
    assert!(matches!(unknown, Err(ModuleError::UnknownGenerator(_))));
}

#[test]
fn deleting_a_delta_row_is_caught() {
    let t = Transcription::standard();
    for (i, (table, _)) in t.rows.iter().enumerate() {
        if !matches!(table, Table::Delta(_)) {
            continue;
        }
        let broken = match SkeinFixtures::build(&t.without_row(i)) {
            Err(_) => true,
            Ok(fx) => {
                let modules_fail = SkeinIndex::ALL.iter().any(|k| !dmod::structure_check(&fx.alg, fx.bsd(*k)).passed());
                let data = skein_core::campaign::triangle_data(&fx);
                modules_fail || !skein_core::homlab::verify_triangle(&fx.alg, &data).passed()
            }
        };
        assert!(broken, "deleting row {i} ({table}) went unnoticed");
    }
}

#[test]
fn mapping_cone_needs_a_cycle() {
    let fx = SkeinFixtures::standard();
    let f = fx.skein_map(SkeinIndex::Zero);
    let cone = dmod::mapping_cone(&fx.alg, &f).unwrap();
    assert_eq!(cone.len(), f.source().len() + f.target().len());
    assert!(dmod::structure_check(&fx.alg, &cone).passed());

    let complex = skein_core::homlab::mor_basis(&fx.alg, f.source().clone(), f.target().clone());
    let e = (0..complex.dim())
        .map(|i| complex.elementary(i))
        .find(|e| !dmod::morphism_boundary(&fx.alg, e).is_zero())
        .unwrap();
    assert!(matches!(dmod::mapping_cone(&fx.alg, &e), Err(ModuleError::NotACycle(_))));
}

#[test]
fn map_parts_sum_to_map() {
    let fx = SkeinFixtures::standard();
    for k in SkeinIndex::ALL {
        let sum = fx.skein_map_part(k, 0).add(fx.skein_map_part(k, 1)).unwrap();
        assert_eq!(sum, fx.skein_map(k));
        let phi = [0, 1, 10, 11]
            .iter()
            .fold(DMorphism::zero(fx.bsd(k).clone(), fx.bsd(k.succ().succ()).clone()), |acc, ij| {
                acc.add(fx.skein_homotopy_part(k, *ij)).unwrap()
            });
        assert_eq!(phi, fx.skein_homotopy(k));
    }
}

#[test]
fn shifts() {
    let fx = SkeinFixtures::standard();
    let r = fx.refinement.clone().unwrap();
    let shift = |f: &DMorphism, from: SkeinIndex, to: SkeinIndex| {
        dmod::morphism_shift(&fx.alg, f, fx.gradings(from), fx.gradings(to), &r, &fx.basis).unwrap()
    };
    for (k, s) in [(SkeinIndex::Zero, -1), (SkeinIndex::One, 0), (SkeinIndex::Infty, 0)] {
        assert_eq!(shift(&fx.skein_map(k), k, k.succ()), Some(s), "f{k}");
        for i in [0, 1] {
            let part = shift(fx.skein_map_part(k, i), k, k.succ());
            assert!(part.is_none() || part == Some(s), "f{k},{i}: {part:?}");
        }
    }
    assert_eq!(shift(&fx.skein_homotopy(SkeinIndex::One), SkeinIndex::One, SkeinIndex::Zero), None);
    for k in [SkeinIndex::Infty, SkeinIndex::Zero] {
        assert_eq!(shift(&fx.skein_homotopy(k), k, k.succ().succ()), Some(0), "phi{k}");
    }
}

#[test]
fn gradings_are_consistent_with_delta() {
    let fx = SkeinFixtures::standard();
    let r = fx.refinement.clone().unwrap();
    for k in SkeinIndex::ALL {
        let report = dmod::graded_check(&fx.alg, fx.bsd(k), fx.gradings(k), &r, &fx.basis);
        assert!(report.passed(), "k={k}: {:?}", report.violations);
    }
}
