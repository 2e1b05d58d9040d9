use super::poly::{check_field, PolyFq};
use crate::error::{Error, Result};

/// Largest `q^max_deg` the enumeration accepts.
/// Each degree is materialized before it is yielded, so this also bounds
/// memory.
pub const ENUMERATION_BUDGET: u64 = 1 << 25;

/// Monic irreducible polynomials over `F_q` in degree order, ascending by
/// coefficients from the top down within each degree.
///
/// Degree `d` is found by a sieve over all `q^d` monic polynomials, crossing
/// out products of irreducibles of degree at most `d/2`.
#[derive(Debug, Clone)]
pub struct Irreducibles {
    q: u64,
    max_deg: usize,
    degree: usize,
    batch: Vec<PolyFq>,
    pos: usize,
    /// Irreducibles of degree `≤ max_deg/2`, kept as sieving factors.
    factors: Vec<PolyFq>,
}

pub fn enumerate_irreducibles(q: u64, max_deg: usize) -> Result<Irreducibles> {
    check_field(q)?;
    let within = (q as f64).powi(max_deg as i32) <= ENUMERATION_BUDGET as f64;
    if !within {
        return Err(Error::Budget(format!(
            "{q}^{max_deg} monic polynomials exceed the enumeration budget {ENUMERATION_BUDGET}"
        )));
    }
    Ok(Irreducibles {
        q,
        max_deg,
        degree: 0,
        batch: Vec::new(),
        pos: 0,
        factors: Vec::new(),
    })
}

impl Irreducibles {
    fn sieve_degree(&self, d: usize) -> Vec<PolyFq> {
        let q = self.q;
        let size = q.pow(d as u32);
        let mut composite = vec![0u64; (size as usize).div_ceil(64)];
        let pw: Vec<i64> = (0..d).map(|k| q.pow(k as u32) as i64).collect();
        for f in self.factors.iter().take_while(|f| 2 * f.degree().unwrap() <= d) {
            let e = f.degree().unwrap();
            let m = d - e;
            let fc = f.coeffs();
            // product T^m·f, then walk every monic cofactor of degree m
            let mut prod = vec![0u64; d + 1];
            prod[m..].copy_from_slice(fc);
            let mut index: i64 = (0..d).map(|k| prod[k] as i64 * pw[k]).sum();
            let mut digits = vec![0u64; m];
            loop {
                composite[index as usize >> 6] |= 1 << (index & 63);
                let mut j = 0;
                loop {
                    if j == m {
                        break;
                    }
                    // raising cofactor digit j by one adds T^j·f
                    for (k, &c) in fc.iter().enumerate() {
                        let pos = j + k;
                        let old = prod[pos];
                        let new = (old + c) % q;
                        prod[pos] = new;
                        if pos < d {
                            index += (new as i64 - old as i64) * pw[pos];
                        }
                    }
                    digits[j] += 1;
                    if digits[j] < q {
                        break;
                    }
                    digits[j] = 0;
                    j += 1;
                }
                if j == m {
                    break;
                }
            }
        }
        (0..size)
            .filter(|&i| composite[(i >> 6) as usize] >> (i & 63) & 1 == 0)
            .map(|i| PolyFq::monic_from_index(q, i, d))
            .collect()
    }
}

impl Iterator for Irreducibles {
    type Item = PolyFq;

    fn next(&mut self) -> Option<PolyFq> {
        while self.pos == self.batch.len() {
            if self.degree == self.max_deg {
                return None;
            }
            self.degree += 1;
            self.batch = self.sieve_degree(self.degree);
            self.pos = 0;
            if 2 * self.degree <= self.max_deg {
                self.factors.extend(self.batch.iter().cloned());
            }
        }
        self.pos += 1;
        Some(self.batch[self.pos - 1].clone())
    }
}

/// `(1/d) Σ_{e|d} μ(e) q^{d/e}`.
pub fn irreducible_count(q: u64, d: usize) -> u64 {
    let d64 = d as u64;
    let mut total: i128 = 0;
    for e in (1..=d64).filter(|e| d64.is_multiple_of(*e)) {
        total += crate::arith::mobius(e) as i128 * (q as i128).pow((d64 / e) as u32);
    }
    (total / d as i128) as u64
}

/// Monic irreducible factors of `m` with multiplicities.
pub fn factor_poly(m: &PolyFq) -> Result<Vec<(PolyFq, u32)>> {
    let Some(deg) = m.degree() else {
        return crate::error::invalid("cannot factor the zero polynomial");
    };
    let mut rest = m.monic();
    let mut out = Vec::new();
    for p in enumerate_irreducibles(m.field(), deg)? {
        if rest.degree() == Some(0) {
            break;
        }
        let mut e = 0;
        loop {
            let (quot, r) = rest.div_rem(&p)?;
            if !r.is_zero() {
                break;
            }
            rest = quot;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    Ok(out)
}
