use chebias_core::primes_up_to;
use chebias_core::quadratic::{
    class_group, kronecker, prime_ideal_classes, BinaryQuadraticForm, FundamentalDiscriminant,
};
use proptest::prelude::*;

fn represents(f: &BinaryQuadraticForm, n: i64) -> bool {
    // (2ax + by)² + |D| y² = 4an
    let d = -f.discriminant();
    let mut y = 0i64;
    while d * y * y <= 4 * f.a * n {
        let rest = 4 * f.a * n - d * y * y;
        let s = (rest as f64).sqrt().round() as i64;
        if s * s == rest {
            for sy in [y, -y] {
                for root in [s, -s] {
                    let num = root - f.b * sy;
                    if num % (2 * f.a) == 0 && f.eval(num / (2 * f.a), sy) == n {
                        return true;
                    }
                }
            }
        }
        y += 1;
    }
    false
}

#[test]
fn class_group_of_minus_twenty() {
    let g = class_group(-20).unwrap();
    let forms: Vec<String> = g.forms.iter().map(|f| f.to_string()).collect();
    assert_eq!(forms, ["1,0,5", "2,2,3"]);
}

#[test]
fn ambiguous_forms_count_genera() {
    let mut seen = 0;
    for d in -10_000i64..0 {
        let Ok(disc) = FundamentalDiscriminant::new(d) else {
            continue;
        };
        let g = class_group(d).unwrap();
        assert_eq!(g.ambiguous_count(), 1 << (disc.t - 1), "D={d}");
        assert_eq!(g.two_rank_order(), 1 << (disc.t - 1), "D={d}");
        seen += 1;
    }
    assert!(seen > 3000);
}

#[test]
fn prime_ideals_land_in_representing_classes() {
    for d in [-20i64, -23, -56, -84, -104, -231] {
        let g = class_group(d).unwrap();
        for p in primes_up_to(10_000) {
            let k = kronecker(d, p as i64);
            let ideals = prime_ideal_classes(d, p).unwrap();
            if k == -1 {
                assert!(ideals.iter().all(|(_, n)| *n == p * p), "D={d} p={p}");
                continue;
            }
            for (form, norm) in &ideals {
                assert_eq!(*norm, p);
                assert!(represents(form, p as i64), "D={d} p={p} {form}");
                // p is represented by no class other than the ideal's and its inverse
                let inverse = BinaryQuadraticForm::new(form.a, -form.b, form.c);
                for other in &g.forms {
                    let same = other == form || chebias_core::quadratic::reduce_form(inverse).unwrap() == *other;
                    if !same {
                        assert!(!represents(other, p as i64), "D={d} p={p} also by {other}");
                    }
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn kronecker_is_multiplicative(d in -5000i64..5000, m in 1i64..3000, n in 1i64..3000) {
        prop_assume!(d.rem_euclid(4) <= 1 && d != 0);
        prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
    }
}
