mod common;

use chebias_core::dirichlet::{characters, hurwitz_zeta, l_half, DirichletCharacter};
use chebias_core::quadratic::FundamentalDiscriminant;
use common::{central_value_by_periods, zeta_via_eta};

#[test]
fn zeta_at_one_half() {
    let oracle = zeta_via_eta(0.5);
    assert!((oracle - (-1.460_354_508_809_586_8)).abs() < 1e-12);
    assert!((hurwitz_zeta(0.5, 1.0).unwrap() - oracle).abs() < 1e-12);
    for s in [0.3, 0.7, 2.0, 3.5] {
        assert!((hurwitz_zeta(s, 1.0).unwrap() - zeta_via_eta(s)).abs() < 1e-11, "s={s}");
    }
}

#[test]
fn central_value_mod_four() {
    let chi = DirichletCharacter::parse("4:1").unwrap();
    let oracle = central_value_by_periods(4, |n| chi.real_value(n).unwrap_or(0));
    assert!((oracle - 0.667_691_457_2).abs() < 1e-8);
    assert!((l_half(&chi).unwrap().re - oracle).abs() < 1e-9);
}

#[test]
fn real_primitive_characters_up_to_conductor_100() {
    let mut checked = 0;
    for d in -100i64..=100 {
        let Ok(disc) = FundamentalDiscriminant::new(d) else {
            continue;
        };
        if d == 1 {
            continue;
        }
        let chi = disc.character().unwrap();
        assert!(chi.is_primitive());
        let oracle = central_value_by_periods(d.unsigned_abs(), |n| chi.real_value(n).unwrap_or(0));
        let got = l_half(&chi).unwrap();
        assert!((got.re - oracle).abs() < 1e-9, "D={d}: {} vs {oracle}", got.re);
        assert!(got.im.abs() < 1e-12);
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn complex_characters_satisfy_conjugation() {
    for chi in characters(13).unwrap().into_iter().filter(|c| !c.is_principal) {
        let a = l_half(&chi).unwrap();
        let b = l_half(&chi.conj()).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }
}
