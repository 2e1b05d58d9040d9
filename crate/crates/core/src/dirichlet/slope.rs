use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::character::{characters_trivial_on, DirichletCharacter};
use super::group::{t_of_q, unit_group};
use super::lvalue::central_values;
use crate::arith::mul_mod;
use crate::error::{invalid, Error, Result};

/// Predicted `log log x` slope of `π_{1/2,Q}(x) − [G:H]·π_{1/2}(x; class)`,
/// split into the character term and the central-vanishing term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopePrediction {
    pub character_part: f64,
    pub vanishing_part: f64,
    pub total: f64,
}

impl SlopePrediction {
    fn from_character_part(character_part: f64) -> Self {
        SlopePrediction {
            character_part,
            vanishing_part: 0.0,
            total: character_part,
        }
    }
}

/// Bias predictions for the classes of `(Z/qZ)^× / H` where `H` is a
/// subgroup given together with its cosets.
#[derive(Debug, Clone)]
pub struct CosetBias {
    q: u64,
    cosets: Vec<Vec<u64>>,
    /// Nonprincipal characters trivial on `H`, with their central values.
    characters: Vec<(DirichletCharacter, Complex64)>,
}

impl CosetBias {
    /// `cosets` must partition the units modulo `q` into the cosets of the
    /// subgroup containing 1.
    pub fn new(q: u64, cosets: Vec<Vec<u64>>) -> Result<Self> {
        let group = unit_group(q)?;
        let sets: Vec<BTreeSet<u64>> = cosets.iter().map(|c| c.iter().map(|a| a % q).collect()).collect();
        let mut seen = BTreeSet::new();
        for (set, raw) in sets.iter().zip(&cosets) {
            if set.len() != raw.len() {
                return invalid("repeated residue inside a class");
            }
            for &a in set {
                if !group.is_unit(a) {
                    return invalid(format!("{a} is not a unit modulo {q}"));
                }
                if !seen.insert(a) {
                    return invalid(format!("residue {a} appears in two classes"));
                }
            }
        }
        if seen.len() as u64 != group.phi {
            return invalid(format!(
                "classes cover {} of the {} units modulo {q}",
                seen.len(),
                group.phi
            ));
        }
        let kernel = sets
            .iter()
            .find(|s| s.contains(&(1 % q)))
            .expect("classes cover the units")
            .clone();
        for &h in &kernel {
            for &k in &kernel {
                if !kernel.contains(&mul_mod(h, k, q)) {
                    return invalid("the class of 1 is not a subgroup");
                }
            }
        }
        for set in &sets {
            let a = *set.iter().next().unwrap();
            let coset: BTreeSet<u64> = kernel.iter().map(|&h| mul_mod(a, h, q)).collect();
            if &coset != set {
                return invalid(format!("class containing {a} is not a coset of the class of 1"));
            }
        }
        let kernel: Vec<u64> = kernel.into_iter().collect();
        let mut chars: Vec<DirichletCharacter> = characters_trivial_on(q, &kernel)?
            .into_iter()
            .filter(|c| !c.is_principal)
            .collect();
        let values = central_values(&mut chars)?;
        Ok(CosetBias {
            q,
            cosets: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
            characters: chars.into_iter().zip(values).collect(),
        })
    }

    /// Every unit its own class.
    pub fn cyclotomic(q: u64) -> Result<Self> {
        let group = unit_group(q)?;
        Self::new(q, group.units().into_iter().map(|a| vec![a]).collect())
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    /// Index `[G:H]`, the multiplier of the class sum in the bias combination.
    pub fn index(&self) -> u64 {
        self.cosets.len() as u64
    }

    pub fn central_values(&self) -> &[(DirichletCharacter, Complex64)] {
        &self.characters
    }

    /// `½ Σ χ(a) ν(χ)` over nonprincipal characters trivial on `H`.
    pub fn class_slope(&self, a: u64) -> Result<SlopePrediction> {
        if !self.cosets.iter().any(|c| c.contains(&(a % self.q))) {
            return invalid(format!("{a} is not a unit modulo {}", self.q));
        }
        let sum: i64 = self
            .characters
            .iter()
            .filter(|(c, _)| c.nu == 1)
            .map(|(c, _)| c.real_value(a).expect("real character") as i64)
            .sum();
        Ok(SlopePrediction::from_character_part(sum as f64 / 2.0))
    }

    /// Slope of every class, in the order the classes were given.
    pub fn slopes(&self) -> Result<Vec<SlopePrediction>> {
        self.cosets.iter().map(|c| self.class_slope(c[0])).collect()
    }

    /// Slope of `π_{1/2}(x; b) − π_{1/2}(x; a)`.
    pub fn pair_slope(&self, a: u64, b: u64) -> Result<f64> {
        let ma = self.class_slope(a)?.total;
        let mb = self.class_slope(b)?.total;
        Ok((ma - mb) / self.units() as f64)
    }

    fn units(&self) -> u64 {
        self.cosets.iter().map(|c| c.len() as u64).sum()
    }
}

/// Slopes for single residue classes modulo `q`, with the closed form
/// `(2^t − 1)/2` for squares and `−1/2` otherwise checked against the
/// character sum.
#[derive(Debug, Clone)]
pub struct CyclotomicBias {
    inner: CosetBias,
    t: u32,
}

impl CyclotomicBias {
    pub fn new(q: u64) -> Result<Self> {
        let t = t_of_q(q)?;
        Ok(CyclotomicBias {
            inner: CosetBias::cyclotomic(q)?,
            t,
        })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn coset_bias(&self) -> &CosetBias {
        &self.inner
    }

    pub fn class_slope(&self, a: u64) -> Result<SlopePrediction> {
        let by_characters = self.inner.class_slope(a)?;
        let square = unit_group(self.inner.q)?.is_square(a).expect("unit checked above");
        let closed = if square {
            ((1u64 << self.t) as f64 - 1.0) / 2.0
        } else {
            -0.5
        };
        if closed != by_characters.character_part {
            return Err(Error::Internal(format!(
                "slope of {a} mod {}: closed form {closed}, character sum {}",
                self.inner.q, by_characters.character_part
            )));
        }
        Ok(by_characters)
    }

    /// Slope of `π_{1/2}(x;q,b) − π_{1/2}(x;q,a)`: `2^{t−1}/φ(q)` when `a` is
    /// a square and `b` is not, its negative in the opposite case, 0 when
    /// both have the same type.
    pub fn pair_slope(&self, a: u64, b: u64) -> Result<f64> {
        let diff = self.class_slope(a)?.total - self.class_slope(b)?.total;
        Ok(diff / self.inner.units() as f64)
    }
}

pub fn predict_class_slope(q: u64, a: u64) -> Result<SlopePrediction> {
    CyclotomicBias::new(q)?.class_slope(a)
}

pub fn predict_pair_slope(q: u64, a: u64, b: u64) -> Result<f64> {
    CyclotomicBias::new(q)?.pair_slope(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_slopes() {
        assert_eq!(predict_class_slope(4, 1).unwrap().total, 0.5);
        assert_eq!(predict_class_slope(60, 1).unwrap().total, 3.5);
        assert_eq!(predict_class_slope(60, 7).unwrap().total, -0.5);
        assert_eq!(predict_pair_slope(4, 1, 3).unwrap(), 0.5);
        assert_eq!(predict_pair_slope(8, 1, 3).unwrap(), 0.5);
        assert_eq!(predict_pair_slope(8, 3, 5).unwrap(), 0.0);
        assert_eq!(predict_pair_slope(4, 3, 1).unwrap(), -0.5);
    }

    #[test]
    fn mod7_cubic_classes_are_flat() {
        let b = CosetBias::new(7, vec![vec![1, 6], vec![2, 5], vec![3, 4]]).unwrap();
        assert_eq!(b.index(), 3);
        for s in b.slopes().unwrap() {
            assert_eq!(s.total, 0.0);
        }
        assert_eq!(b.central_values().len(), 2);
    }

    #[test]
    fn rejects_non_cosets() {
        assert!(CosetBias::new(7, vec![vec![1, 2], vec![3, 4], vec![5, 6]]).is_err());
        assert!(CosetBias::new(7, vec![vec![1, 6], vec![2, 5]]).is_err());
    }

    #[test]
    fn quadratic_subfield_mod7() {
        let b = CosetBias::new(7, vec![vec![1, 2, 4], vec![3, 5, 6]]).unwrap();
        assert_eq!(b.class_slope(2).unwrap().total, 0.5);
        assert_eq!(b.class_slope(3).unwrap().total, -0.5);
    }
}
