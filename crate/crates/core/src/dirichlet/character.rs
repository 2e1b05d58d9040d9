use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::group::{unit_group, UnitGroupStructure};
use crate::arith::gcd;
use crate::error::{invalid, Error, Result};

/// A Dirichlet character modulo `q`, given by its exponents on the unit-group
/// generators: `χ(g_i) = exp(2πi·e_i/o_i)`.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroupStructure>,
    pub exponents: Vec<u64>,
    pub is_principal: bool,
    pub is_real: bool,
    /// 1 for real nonprincipal characters, else 0.
    pub nu: u32,
    /// Order of vanishing at the centre; `Some(0)` once nonvanishing has been
    /// checked numerically.
    pub m: Option<u32>,
    /// Values are powers of a primitive `root_order`-th root of unity.
    root_order: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.q == other.group.q && self.exponents == other.exponents
    }
}

impl DirichletCharacter {
    pub fn new(group: Arc<UnitGroupStructure>, exponents: Vec<u64>) -> Result<Self> {
        if exponents.len() != group.generators.len() {
            return invalid(format!(
                "modulus {} needs {} exponents, got {}",
                group.q,
                group.generators.len(),
                exponents.len()
            ));
        }
        let exponents: Vec<u64> = exponents
            .iter()
            .zip(&group.generators)
            .map(|(&e, &(_, o))| e % o)
            .collect();
        let is_principal = exponents.iter().all(|&e| e == 0);
        let is_real = exponents
            .iter()
            .zip(&group.generators)
            .all(|(&e, &(_, o))| (2 * e) % o == 0);
        let root_order = group.exponent();
        Ok(DirichletCharacter {
            group,
            exponents,
            is_principal,
            is_real,
            nu: (is_real && !is_principal) as u32,
            m: None,
            root_order,
        })
    }

    pub fn principal(q: u64) -> Result<Self> {
        let group = Arc::new(unit_group(q)?);
        let n = group.generators.len();
        Self::new(group, vec![0; n])
    }

    /// The character modulo `q` whose values on units are `f`, which must be
    /// a real character.
    pub fn from_real_values(q: u64, f: impl Fn(u64) -> i32) -> Result<Self> {
        let group = Arc::new(unit_group(q)?);
        let mut exponents = Vec::new();
        for &(g, o) in &group.generators {
            match f(g) {
                1 => exponents.push(0),
                -1 if o % 2 == 0 => exponents.push(o / 2),
                v => return invalid(format!("value {v} at generator {g} is not a real character value")),
            }
        }
        let chi = Self::new(group, exponents)?;
        for a in chi.group.units() {
            if chi.real_value(a) != Some(f(a)) {
                return invalid(format!("values modulo {q} are not multiplicative at {a}"));
            }
        }
        Ok(chi)
    }

    /// Parses a label `q:e1,e2,...`.
    pub fn parse(label: &str) -> Result<Self> {
        let (q, exps) = label
            .split_once(':')
            .ok_or_else(|| Error::InvalidArgument(format!("character label {label:?} lacks ':'")))?;
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad modulus in character label {label:?}")))?;
        let exponents = if exps.trim().is_empty() {
            Vec::new()
        } else {
            exps.split(',')
                .map(|e| e.trim().parse::<u64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidArgument(format!("bad exponent in character label {label:?}")))?
        };
        let group = Arc::new(unit_group(q)?);
        for (&e, &(_, o)) in exponents.iter().zip(&group.generators) {
            if e >= o {
                return invalid(format!("exponent {e} out of range 0..{o} in {label:?}"));
            }
        }
        Self::new(group, exponents)
    }

    pub fn label(&self) -> String {
        let e: Vec<String> = self.exponents.iter().map(|e| e.to_string()).collect();
        format!("{}:{}", self.group.q, e.join(","))
    }

    pub fn modulus(&self) -> u64 {
        self.group.q
    }

    pub fn group(&self) -> &Arc<UnitGroupStructure> {
        &self.group
    }

    pub fn root_order(&self) -> u64 {
        self.root_order
    }

    /// `χ(a) = ζ^k` with `ζ = exp(2πi/root_order)`; `None` when `gcd(a,q) > 1`.
    pub fn value_index(&self, a: u64) -> Option<u64> {
        let idx = self.group.index(a)?;
        let x = self.group.decode(idx);
        let n = self.root_order;
        let k = x
            .iter()
            .zip(&self.exponents)
            .zip(&self.group.generators)
            .map(|((&x, &e), &(_, o))| (x * e % o) * (n / o))
            .sum::<u64>();
        Some(k % n)
    }

    pub fn value(&self, a: u64) -> Complex64 {
        match self.value_index(a) {
            None => Complex64::new(0.0, 0.0),
            Some(k) => root_of_unity(k, self.root_order),
        }
    }

    /// Exact value for real characters.
    pub fn real_value(&self, a: u64) -> Option<i32> {
        if !self.is_real {
            return None;
        }
        Some(match self.value_index(a) {
            None => 0,
            Some(0) => 1,
            Some(_) => -1,
        })
    }

    /// Table of `χ(a)` for `a` in `0..q`.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.group.q).map(|a| self.value(a)).collect()
    }

    /// Smallest `d | q` such that `χ` is trivial on units `≡ 1 (mod d)`.
    pub fn conductor(&self) -> u64 {
        let q = self.group.q;
        let units = self.group.units();
        (1..=q)
            .filter(|d| q.is_multiple_of(*d))
            .find(|&d| {
                units
                    .iter()
                    .filter(|&&a| a % d == 1 % d)
                    .all(|&a| self.value_index(a) == Some(0))
            })
            .unwrap_or(q)
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.group.q
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.group.q != other.group.q {
            return invalid("characters to different moduli");
        }
        let e = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .map(|(a, b)| a + b)
            .collect();
        Self::new(self.group.clone(), e)
    }

    pub fn conj(&self) -> Self {
        let e = self
            .exponents
            .iter()
            .zip(&self.group.generators)
            .map(|(&e, &(_, o))| (o - e) % o)
            .collect();
        Self::new(self.group.clone(), e).expect("same group")
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `exp(2πik/n)`, exact for the real values ±1 and ±i.
pub fn root_of_unity(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * k == n {
        return Complex64::new(-1.0, 0.0);
    }
    if 4 * k == n {
        return Complex64::new(0.0, 1.0);
    }
    if 4 * k == 3 * n {
        return Complex64::new(0.0, -1.0);
    }
    Complex64::from_polar(1.0, TAU * k as f64 / n as f64)
}

/// All `φ(q)` characters modulo `q`, principal first, in mixed-radix order
/// of the exponent vectors.
pub fn characters(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(unit_group(q)?);
    (0..group.phi as usize)
        .map(|i| DirichletCharacter::new(group.clone(), group.decode(i)))
        .collect()
}

/// Characters modulo `q` trivial on every residue in `kernel`.
pub fn characters_trivial_on(q: u64, kernel: &[u64]) -> Result<Vec<DirichletCharacter>> {
    Ok(characters(q)?
        .into_iter()
        .filter(|chi| kernel.iter().all(|&h| gcd(h, q) == 1 && chi.value_index(h) == Some(0)))
        .collect())
}
