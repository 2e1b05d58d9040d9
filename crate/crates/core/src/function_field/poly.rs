use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, pow_mod};
use crate::error::{invalid, Result};

/// Largest supported field size.
pub const MAX_FIELD: u64 = 1 << 16;

/// Polynomial over the prime field `F_q`, coefficients lowest degree first,
/// without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyFq {
    q: u64,
    coeffs: Vec<u64>,
}

pub fn check_field(q: u64) -> Result<()> {
    if !is_prime(q) || q > MAX_FIELD {
        return invalid(format!("field size must be a prime up to {MAX_FIELD}, got {q}"));
    }
    Ok(())
}

impl PolyFq {
    pub fn new(q: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_field(q)?;
        Ok(Self::raw(q, coeffs.into_iter().map(|c| c % q).collect()))
    }

    /// Trusted constructor: `q` prime and coefficients already reduced.
    pub(crate) fn raw(q: u64, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFq { q, coeffs }
    }

    pub fn zero(q: u64) -> Result<Self> {
        Self::new(q, vec![])
    }

    pub fn one(q: u64) -> Result<Self> {
        Self::new(q, vec![1])
    }

    /// The indeterminate `T`.
    pub fn t(q: u64) -> Result<Self> {
        Self::new(q, vec![0, 1])
    }

    pub fn field(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return invalid(format!("polynomials over F_{} and F_{}", self.q, other.q));
        }
        Ok(())
    }

    fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.q - 2, self.q)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| (self.coeffs.get(i).unwrap_or(&0) + other.coeffs.get(i).unwrap_or(&0)) % self.q)
            .collect();
        Ok(Self::raw(self.q, c))
    }

    pub fn neg(&self) -> Self {
        Self::raw(self.q, self.coeffs.iter().map(|&c| (self.q - c) % self.q).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: u64) -> Self {
        Self::raw(self.q, self.coeffs.iter().map(|&c| c * (k % self.q) % self.q).collect())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::raw(self.q, vec![]));
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + a * b) % self.q;
            }
        }
        Ok(Self::raw(self.q, c))
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.same_field(divisor)?;
        let Some(dd) = divisor.degree() else {
            return invalid("division by the zero polynomial");
        };
        let q = self.q;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::raw(q, vec![]), self.clone()));
        }
        let inv = self.inv(divisor.leading());
        let mut quot = vec![0u64; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let f = r[i] * inv % q;
            if f == 0 {
                continue;
            }
            quot[i - dd] = f;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let k = i - dd + j;
                r[k] = (r[k] + q - f * b % q) % q;
            }
        }
        r.truncate(dd);
        Ok((Self::raw(q, quot), Self::raw(q, r)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Result<Self> {
        self.mul(other)?.rem(m)
    }

    pub fn powmod(&self, mut exp: u64, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = Self::new(self.q, vec![1])?.rem(m)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mulmod(&base, m)?;
            }
            base = base.mulmod(&base, m)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.inv(self.leading()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Base-`q` index of the coefficients below degree `len`.
    pub fn index_below(&self, len: usize) -> u64 {
        let mut idx = 0u64;
        for i in (0..len.min(self.coeffs.len())).rev() {
            idx = idx * self.q + self.coeffs[i];
        }
        idx
    }

    /// Polynomial of degree below `len` with base-`q` digits `index`.
    pub fn from_index(q: u64, mut index: u64, len: usize) -> Self {
        let mut c = Vec::with_capacity(len);
        for _ in 0..len {
            c.push(index % q);
            index /= q;
        }
        Self::raw(q, c)
    }

    /// Monic polynomial of degree `d` whose lower coefficients are the digits
    /// of `index`.
    pub fn monic_from_index(q: u64, index: u64, d: usize) -> Self {
        let mut p = Self::from_index(q, index, d);
        p.coeffs.resize(d, 0);
        p.coeffs.push(1);
        p
    }

    /// `"c0 c1 ... cd"`.
    pub fn coefficient_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        parts.join(" ")
    }

    pub fn parse_coefficients(q: u64, s: &str) -> Result<Self> {
        let coeffs = s
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| crate::error::Error::InvalidArgument(format!("bad coefficient string {s:?}")))?;
        if let Some(&c) = coeffs.iter().find(|&&c| c >= q) {
            return invalid(format!("coefficient {c} is not below {q}"));
        }
        Self::new(q, coeffs)
    }
}

impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}T"),
                _ => format!("{coef}T^{i}"),
            });
        }
        f.write_str(&terms.join("+"))
    }
}
