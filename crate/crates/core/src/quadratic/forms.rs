use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::kronecker::{splitting_type, FundamentalDiscriminant, SplittingType};
use crate::arith::{is_prime, sqrt_mod_prime};
use crate::error::{invalid, Error, Result};

/// `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryQuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        BinaryQuadraticForm { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_ambiguous(&self) -> bool {
        self.b == 0 || self.a == self.b || self.a == self.c
    }

    /// Principal form of discriminant `d`.
    pub fn principal(d: i64) -> Self {
        let b = d.rem_euclid(2);
        BinaryQuadraticForm::new(1, b, (b * b - d) / 4)
    }

    /// Value at `(x, y)`.
    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    /// Substitution `(x, y) ↦ (px + qy, rx + sy)`.
    pub fn transform(&self, p: i64, q: i64, r: i64, s: i64) -> Self {
        let (a, b, c) = (self.a, self.b, self.c);
        BinaryQuadraticForm {
            a: a * p * p + b * p * r + c * r * r,
            b: 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            c: a * q * q + b * q * s + c * s * s,
        }
    }
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

/// Reduced form properly equivalent to `f`.
pub fn reduce_form(f: BinaryQuadraticForm) -> Result<BinaryQuadraticForm> {
    let d = f.discriminant();
    if d >= 0 {
        return Err(Error::UnsupportedDiscriminant(d));
    }
    if f.a <= 0 {
        return invalid(format!("form {f} is not positive definite"));
    }
    let (mut a, mut b, mut c) = (f.a as i128, f.b as i128, f.c as i128);
    let d = d as i128;
    loop {
        if b > a || b <= -a {
            let mut r = b.rem_euclid(2 * a);
            if r > a {
                r -= 2 * a;
            }
            b = r;
            c = (b * b - d) / (4 * a);
        }
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    Ok(BinaryQuadraticForm::new(a as i64, b as i64, c as i64))
}

/// Reduced forms of a negative fundamental discriminant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassGroup {
    pub disc: FundamentalDiscriminant,
    /// Principal form first, then by `(a, b)`.
    pub forms: Vec<BinaryQuadraticForm>,
    pub h: usize,
    #[serde(skip)]
    index: HashMap<BinaryQuadraticForm, usize>,
}

impl ClassGroup {
    pub fn principal(&self) -> BinaryQuadraticForm {
        self.forms[0]
    }

    pub fn index_of(&self, f: &BinaryQuadraticForm) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn ambiguous_count(&self) -> usize {
        self.forms.iter().filter(|f| f.is_ambiguous()).count()
    }

    /// `|Cl/Cl²|`, equal to the number of ambiguous classes.
    pub fn two_rank_order(&self) -> usize {
        self.ambiguous_count()
    }

    /// Checks the genus-theory count `2^{t_D − 1}`.
    pub fn check_genus(&self) -> Result<()> {
        let expected = 1usize << (self.disc.t - 1);
        if self.ambiguous_count() != expected {
            return Err(Error::Internal(format!(
                "discriminant {} has {} ambiguous forms, genus theory expects {expected}",
                self.disc.d,
                self.ambiguous_count()
            )));
        }
        Ok(())
    }
}

pub fn class_group(d: i64) -> Result<ClassGroup> {
    let disc = FundamentalDiscriminant::negative(d)?;
    let mut forms = Vec::new();
    let bound = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=bound {
        if 3 * a * a > -d {
            break;
        }
        for b in (-a + 1)..=a {
            if (b - d).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = BinaryQuadraticForm::new(a, b, num / (4 * a));
            if f.is_reduced() {
                forms.push(f);
            }
        }
    }
    let index = forms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    debug_assert_eq!(forms[0], BinaryQuadraticForm::principal(d));
    Ok(ClassGroup {
        disc,
        h: forms.len(),
        forms,
        index,
    })
}

/// Prime ideals above `p` as `(reduced form of the class, norm)`.
pub fn prime_ideal_classes(d: i64, p: u64) -> Result<Vec<(BinaryQuadraticForm, u64)>> {
    FundamentalDiscriminant::negative(d)?;
    if !is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    let kind = splitting_type(d, p);
    if kind == SplittingType::Inert {
        return Ok(vec![(BinaryQuadraticForm::principal(d), p * p)]);
    }
    let b = ideal_b(d, p).ok_or_else(|| Error::Internal(format!("no square root of {d} modulo 4*{p}")))?;
    let pi = p as i64;
    let c = (b * b - d) / (4 * pi);
    let first = reduce_form(BinaryQuadraticForm::new(pi, b, c))?;
    if kind == SplittingType::Ramified {
        return Ok(vec![(first, p)]);
    }
    let second = reduce_form(BinaryQuadraticForm::new(pi, -b, c))?;
    Ok(vec![(first, p), (second, p)])
}

/// Some `b` with `b² ≡ D (mod 4p)`.
fn ideal_b(d: i64, p: u64) -> Option<i64> {
    let pi = p as i64;
    if p == 2 {
        return (0..4).find(|&b| (b * b - d).rem_euclid(8) == 0);
    }
    let r = sqrt_mod_prime(d.rem_euclid(pi) as u64, p)? as i64;
    // of r and p − r exactly one has the parity of D, unless r = 0
    let b = if (r - d).rem_euclid(2) == 0 { r } else { pi - r };
    ((b * b - d).rem_euclid(4 * pi) == 0).then_some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_reductions() {
        assert_eq!(
            reduce_form(BinaryQuadraticForm::new(3, 2, 2)).unwrap(),
            BinaryQuadraticForm::new(2, 2, 3)
        );
        let f = BinaryQuadraticForm::new(1, 0, 5);
        assert_eq!(reduce_form(f).unwrap(), f);
        assert!(matches!(
            reduce_form(BinaryQuadraticForm::new(1, 3, 1)),
            Err(Error::UnsupportedDiscriminant(5))
        ));
    }

    #[test]
    fn class_groups() {
        let g = class_group(-20).unwrap();
        assert_eq!(
            g.forms,
            vec![BinaryQuadraticForm::new(1, 0, 5), BinaryQuadraticForm::new(2, 2, 3)]
        );
        assert_eq!(g.h, 2);
        assert_eq!(class_group(-4).unwrap().forms, vec![BinaryQuadraticForm::new(1, 0, 1)]);
        assert_eq!(class_group(-23).unwrap().h, 3);
        assert_eq!(class_group(-84).unwrap().h, 4);
        assert!(class_group(-12).is_err());
        assert!(matches!(class_group(5), Err(Error::UnsupportedDiscriminant(5))));
    }

    #[test]
    fn ideals_mod_minus_twenty() {
        let nonprincipal = BinaryQuadraticForm::new(2, 2, 3);
        let principal = BinaryQuadraticForm::new(1, 0, 5);
        assert_eq!(
            prime_ideal_classes(-20, 3).unwrap(),
            vec![(nonprincipal, 3), (nonprincipal, 3)]
        );
        assert_eq!(
            prime_ideal_classes(-20, 29).unwrap(),
            vec![(principal, 29), (principal, 29)]
        );
        assert_eq!(prime_ideal_classes(-20, 11).unwrap(), vec![(principal, 121)]);
        assert_eq!(prime_ideal_classes(-20, 2).unwrap(), vec![(nonprincipal, 2)]);
        assert_eq!(prime_ideal_classes(-20, 5).unwrap(), vec![(principal, 5)]);
    }
}
