use num_complex::Complex64;

use super::poly::PolyFq;
use super::units::{FfCharacter, UnitClassTable};
use crate::dirichlet::{root_of_unity, CENTRAL_ZERO_TOL};
use crate::error::{Error, Result};

/// `L(u, χ) = Σ_{d < deg M} c_d u^d` with
/// `c_d = Σ_{f monic, deg f = d, gcd(f, M) = 1} χ(f)`.
#[derive(Debug, Clone)]
pub struct LPolynomial {
    pub q: u64,
    /// `counts[d][k]`: monic `f` of degree `d` with `χ(f) = ζ^k`.
    pub counts: Vec<Vec<u64>>,
    pub coefficients: Vec<Complex64>,
    /// Exact coefficients when `χ` is real.
    pub integer_coefficients: Option<Vec<i64>>,
    /// `L` at `u = q^{-1/2}`.
    pub central: Complex64,
    pub vanishing_order: u32,
}

/// Number of monic polynomials of degree `d` in each unit class, indexed by
/// residue code (non-units stay 0).
pub fn class_histogram(table: &UnitClassTable, d: usize) -> Result<Vec<u64>> {
    let q = table.q;
    let size = q.pow(table.deg as u32) as usize;
    let mut hist = vec![0u64; size];
    if d < table.deg {
        let base = q.pow(d as u32);
        for low in 0..base {
            let code = (low + base) as u32;
            if table.is_unit_code(code) {
                hist[code as usize] += 1;
            }
        }
    } else {
        for low in 0..q.pow(d as u32) {
            let code = table.code_of(&PolyFq::monic_from_index(q, low, d))?;
            if table.is_unit_code(code) {
                hist[code as usize] += 1;
            }
        }
    }
    Ok(hist)
}

/// Distribution of `χ(f)` over monic `f` of degree `d` coprime to `M`.
pub fn coefficient_counts(chi: &FfCharacter, hist: &[u64]) -> Vec<u64> {
    let mut counts = vec![0u64; chi.root_order() as usize];
    for (code, &n) in hist.iter().enumerate() {
        if n > 0 {
            let k = chi.value_exponent(code as u32).expect("histogram holds units only");
            counts[k as usize] += n;
        }
    }
    counts
}

fn count_sum(counts: &[u64]) -> Complex64 {
    let n = counts.len() as u64;
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| root_of_unity(k as u64, n) * c as f64)
        .sum()
}

/// Order of vanishing of an integer polynomial at `u = q^{-1/2}`, decided in
/// `Q(√q)`: the k-th derivative there is `(A + B/√q)·q^{-J}` with integers
/// `A`, `B`.
fn exact_vanishing_order(c: &[i64], q: u64) -> Result<u32> {
    let overflow = || Error::Internal("exact central-value test overflowed".into());
    let deg = c.len();
    let j_max = deg.div_ceil(2) as u32 + 1;
    for k in 0..deg {
        let (mut a, mut b) = (0i128, 0i128);
        for (d, &cd) in c.iter().enumerate().skip(k) {
            let mut ff: i128 = cd as i128;
            for i in 0..k {
                ff = ff.checked_mul((d - i) as i128).ok_or_else(overflow)?;
            }
            let j = (d - k) as u32;
            if j.is_multiple_of(2) {
                let w = (q as i128).checked_pow(j_max - j / 2).ok_or_else(overflow)?;
                a = a
                    .checked_add(ff.checked_mul(w).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            } else {
                let w = (q as i128).checked_pow(j_max - j.div_ceil(2)).ok_or_else(overflow)?;
                b = b
                    .checked_add(ff.checked_mul(w).ok_or_else(overflow)?)
                    .ok_or_else(overflow)?;
            }
        }
        if a != 0 || b != 0 {
            return Ok(k as u32);
        }
    }
    Ok(deg as u32)
}

impl LPolynomial {
    /// Builds the L-polynomial from per-degree class histograms
    /// (`hists[d]` for `d < deg M`).
    pub fn from_histograms(chi: &FfCharacter, hists: &[Vec<u64>]) -> Result<Self> {
        if chi.is_principal {
            return Err(Error::Precondition(
                "L-polynomial of the principal character has a pole".into(),
            ));
        }
        let q = chi.table().q;
        let counts: Vec<Vec<u64>> = hists.iter().map(|h| coefficient_counts(chi, h)).collect();
        let coefficients: Vec<Complex64> = counts.iter().map(|c| count_sum(c)).collect();
        let u = (q as f64).sqrt().recip();
        let central = coefficients
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c);
        let n = chi.root_order() as usize;
        let (integer_coefficients, vanishing_order) = if chi.is_real {
            let ints: Vec<i64> = counts
                .iter()
                .map(|c| c[0] as i64 - if n.is_multiple_of(2) { c[n / 2] as i64 } else { 0 })
                .collect();
            let m = exact_vanishing_order(&ints, q)?;
            (Some(ints), m)
        } else {
            if central.norm() <= CENTRAL_ZERO_TOL {
                return Err(Error::CentralZero {
                    label: chi.label(),
                    modulus: central.norm(),
                });
            }
            (None, 0)
        };
        Ok(LPolynomial {
            q,
            counts,
            coefficients,
            integer_coefficients,
            central,
            vanishing_order,
        })
    }
}

pub fn l_polynomial(chi: &FfCharacter) -> Result<LPolynomial> {
    let table = chi.table();
    let hists = (0..table.deg)
        .map(|d| class_histogram(table, d))
        .collect::<Result<Vec<_>>>()?;
    LPolynomial::from_histograms(chi, &hists)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_field::unit_class_table;

    #[test]
    fn mod_t_over_f3_is_constant() {
        let table = unit_class_table(&PolyFq::t(3).unwrap()).unwrap();
        let chi = table.characters().into_iter().find(|c| !c.is_principal).unwrap();
        let l = l_polynomial(&chi).unwrap();
        assert_eq!(l.integer_coefficients, Some(vec![1]));
        assert_eq!(l.central, Complex64::new(1.0, 0.0));
        assert_eq!(l.vanishing_order, 0);
    }

    #[test]
    fn mod_t_squared_over_f2() {
        let table = unit_class_table(&PolyFq::new(2, vec![0, 0, 1]).unwrap()).unwrap();
        let chi = table.characters().into_iter().find(|c| !c.is_principal).unwrap();
        let l = l_polynomial(&chi).unwrap();
        assert_eq!(l.integer_coefficients, Some(vec![1, -1]));
        assert!((l.central.re - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
        assert_eq!(l.vanishing_order, 0);
    }

    #[test]
    fn exact_root_detection() {
        // (1 − 3u²) vanishes once at 3^{-1/2}; its square twice
        assert_eq!(exact_vanishing_order(&[1, 0, -3], 3).unwrap(), 1);
        assert_eq!(exact_vanishing_order(&[1, 0, -6, 0, 9], 3).unwrap(), 2);
        assert_eq!(exact_vanishing_order(&[1, 1], 3).unwrap(), 0);
    }

    #[test]
    fn principal_rejected() {
        let table = unit_class_table(&PolyFq::t(3).unwrap()).unwrap();
        let chi = table.characters().into_iter().next().unwrap();
        assert!(l_polynomial(&chi).is_err());
    }

    #[test]
    fn high_degree_coefficients_vanish() {
        let table = unit_class_table(&PolyFq::new(3, vec![1, 0, 1, 1]).unwrap()).unwrap();
        for chi in table.characters().into_iter().filter(|c| !c.is_principal) {
            for d in table.deg..table.deg + 2 {
                let counts = coefficient_counts(&chi, &class_histogram(&table, d).unwrap());
                assert!(count_sum(&counts).norm() < 1e-9, "{} d={d}", chi.label());
                // exactly: every value of χ is hit equally often
                let image: Vec<u64> = counts.iter().copied().filter(|&c| c > 0).collect();
                assert!(image.windows(2).all(|w| w[0] == w[1]));
            }
        }
    }
}
