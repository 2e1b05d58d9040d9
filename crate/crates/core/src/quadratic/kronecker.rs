use serde::{Deserialize, Serialize};

use crate::arith::{factorize, jacobi};
use crate::dirichlet::DirichletCharacter;
use crate::error::{invalid, Error, Result};
use crate::summation::PrimeClassifier;

/// Kronecker symbol `(D/n)`.
pub fn kronecker(d: i64, n: i64) -> i32 {
    if n == 0 {
        return (d.abs() == 1) as i32;
    }
    let mut sign = 1;
    if n < 0 && d < 0 {
        sign = -1;
    }
    let mut m = n.unsigned_abs();
    let twos = m.trailing_zeros();
    m >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        if matches!(d.rem_euclid(8), 3 | 5) && twos % 2 == 1 {
            sign = -sign;
        }
    }
    sign * jacobi(d, m).expect("odd positive modulus")
}

/// A validated fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalDiscriminant {
    pub d: i64,
    /// Number of distinct primes dividing `D`.
    pub t: u32,
}

fn squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

impl FundamentalDiscriminant {
    pub fn new(d: i64) -> Result<Self> {
        let abs = d.unsigned_abs();
        let ok = match d.rem_euclid(4) {
            1 => d != 1 && squarefree(abs),
            0 => {
                let m = d / 4;
                matches!(m.rem_euclid(4), 2 | 3) && squarefree(m.unsigned_abs())
            }
            _ => false,
        };
        if !ok || d == 0 {
            return invalid(format!("{d} is not a fundamental discriminant"));
        }
        Ok(FundamentalDiscriminant {
            d,
            t: factorize(abs).len() as u32,
        })
    }

    pub fn negative(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::UnsupportedDiscriminant(d));
        }
        Self::new(d)
    }

    pub fn is_negative(&self) -> bool {
        self.d < 0
    }

    /// Factorization into prime discriminants (`−4`, `±8`, `p* = ±p`).
    pub fn prime_discriminants(&self) -> Vec<i64> {
        let mut out = Vec::new();
        let mut rest = self.d;
        for (p, _) in factorize(self.d.unsigned_abs()) {
            if p == 2 {
                continue;
            }
            let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            out.push(p_star);
            rest /= p_star;
        }
        if rest != 1 {
            out.insert(0, rest);
        }
        out
    }

    /// `χ_D` as a Dirichlet character modulo `|D|`.
    pub fn character(&self) -> Result<DirichletCharacter> {
        let d = self.d;
        DirichletCharacter::from_real_values(self.d.unsigned_abs(), |n| kronecker(d, n as i64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SplittingType {
    Split,
    Inert,
    Ramified,
}

pub fn splitting_type(d: i64, p: u64) -> SplittingType {
    match kronecker(d, p as i64) {
        1 => SplittingType::Split,
        -1 => SplittingType::Inert,
        _ => SplittingType::Ramified,
    }
}

/// Labels `split` and `inert`; ramified primes are excluded.
#[derive(Debug, Clone, Copy)]
pub struct SplittingClassifier {
    pub disc: FundamentalDiscriminant,
}

impl PrimeClassifier for SplittingClassifier {
    fn label_count(&self) -> usize {
        2
    }

    #[inline]
    fn classify(&self, p: u64) -> Option<usize> {
        match splitting_type(self.disc.d, p) {
            SplittingType::Split => Some(0),
            SplittingType::Inert => Some(1),
            SplittingType::Ramified => None,
        }
    }

    fn label_name(&self, label: usize) -> String {
        ["split", "inert"][label].into()
    }

    fn expected_density(&self, _label: usize) -> (u64, u64) {
        (1, 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_prime;
    use proptest::prelude::*;

    #[test]
    fn minus_four() {
        for p in (3..500u64).filter(|&p| is_prime(p)) {
            assert_eq!(kronecker(-4, p as i64) == 1, p % 4 == 1);
        }
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn minus_twenty() {
        assert_eq!(kronecker(-20, 3), 1);
        assert_eq!(kronecker(-20, 11), -1);
        assert_eq!(kronecker(-20, 5), 0);
        // brute force: -20 is a square mod 3
        assert!((0..3).any(|y: i64| (y * y - (-20)).rem_euclid(3) == 0));
    }

    #[test]
    fn fundamental() {
        for d in [-3, -4, -7, -8, -20, -23, -84, 5, 8, 12, 13] {
            assert!(FundamentalDiscriminant::new(d).is_ok(), "{d}");
        }
        for d in [-1, -12, -16, 1, 0, 4, 9, -27] {
            assert!(FundamentalDiscriminant::new(d).is_err(), "{d}");
        }
        assert_eq!(FundamentalDiscriminant::new(-84).unwrap().t, 3);
        assert!(matches!(
            FundamentalDiscriminant::negative(5),
            Err(Error::UnsupportedDiscriminant(5))
        ));
    }

    #[test]
    fn prime_discriminant_factorization() {
        for d in [-4i64, -8, 8, -20, -84, -23, 60, -120, 105] {
            let f = FundamentalDiscriminant::new(d).unwrap();
            let pd = f.prime_discriminants();
            assert_eq!(pd.iter().product::<i64>(), d);
            assert_eq!(pd.len() as u32, f.t);
            assert!(pd.iter().all(|&q| FundamentalDiscriminant::new(q).is_ok()));
        }
    }

    #[test]
    fn ramified_count() {
        for d in [-20i64, -23, -84, -3, -4, -8, -15] {
            let f = FundamentalDiscriminant::new(d).unwrap();
            let ramified = (2..=d.unsigned_abs())
                .filter(|&p| is_prime(p) && splitting_type(d, p) == SplittingType::Ramified)
                .count();
            assert_eq!(ramified as u32, f.t);
        }
    }

    #[test]
    fn character_agrees() {
        let f = FundamentalDiscriminant::new(-20).unwrap();
        let chi = f.character().unwrap();
        for n in 0..200u64 {
            assert_eq!(chi.real_value(n).unwrap(), kronecker(-20, n as i64));
        }
    }

    proptest! {
        #[test]
        fn multiplicative(n in 1i64..100_000, m in 1i64..100_000, idx in 0usize..6) {
            let d = [-4i64, -20, -23, -84, 5, 12][idx];
            prop_assert_eq!(kronecker(d, n) * kronecker(d, m), kronecker(d, n * m));
        }

        #[test]
        fn periodic(n in 1i64..100_000, idx in 0usize..6) {
            let d = [-4i64, -20, -23, -84, -7, -8][idx];
            prop_assert_eq!(kronecker(d, n), kronecker(d, n + d.abs()));
        }
    }
}
