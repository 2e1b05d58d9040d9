use num_complex::Complex64;

use super::character::DirichletCharacter;
use crate::error::{invalid, Error, Result};

/// `|L(1/2)|` at or below this is treated as a central zero.
pub const CENTRAL_ZERO_TOL: f64 = 1e-8;

/// Euler–Maclaurin truncation point.
const EM_TERMS: u32 = 50;

/// `B_2, B_4, ..., B_16`.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{n≥0} (n+a)^{-s}` for real `s > 0`, `s ≠ 1`,
/// `a ∈ (0, 1]`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) || s == 1.0 {
        return invalid(format!("hurwitz zeta needs s > 0, s != 1; got {s}"));
    }
    if !(a > 0.0 && a <= 1.0) {
        return invalid(format!("hurwitz zeta needs a in (0, 1]; got {a}"));
    }
    let mut head = 0.0;
    for n in (0..EM_TERMS).rev() {
        head += (n as f64 + a).powf(-s);
    }
    let big = EM_TERMS as f64 + a;
    let mut tail = big.powf(1.0 - s) / (s - 1.0) + 0.5 * big.powf(-s);
    // (s)_{2k-1} / (2k)! * big^{-s-2k+1}, built incrementally
    let mut factor = s / big.powf(s + 1.0) / 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let k = k as f64 + 1.0;
        tail += b * factor;
        factor *= (s + 2.0 * k - 1.0) * (s + 2.0 * k) / ((2.0 * k + 1.0) * (2.0 * k + 2.0) * big * big);
    }
    Ok(head + tail)
}

/// `L(1/2, χ)` via `q^{-1/2} Σ_a χ(a) ζ(1/2, a/q)`, without the
/// nonvanishing check.
pub fn l_half_value(chi: &DirichletCharacter) -> Result<Complex64> {
    if chi.is_principal {
        return Err(Error::Precondition(
            "central value of the principal character diverges".into(),
        ));
    }
    let q = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 1..=q {
        let v = chi.value(a);
        if v.norm_sqr() > 0.0 {
            acc += v * hurwitz_zeta(0.5, a as f64 / q as f64)?;
        }
    }
    Ok(acc / (q as f64).sqrt())
}

/// `L(1/2, χ)`; errors with [`Error::CentralZero`] when it is numerically zero.
pub fn l_half(chi: &DirichletCharacter) -> Result<Complex64> {
    let v = l_half_value(chi)?;
    require_nonzero(chi, v)?;
    Ok(v)
}

fn require_nonzero(chi: &DirichletCharacter, v: Complex64) -> Result<()> {
    if v.norm() <= CENTRAL_ZERO_TOL {
        return Err(Error::CentralZero {
            label: chi.label(),
            modulus: v.norm(),
        });
    }
    Ok(())
}

impl DirichletCharacter {
    /// Computes `L(1/2, χ)`, and on success fixes the vanishing order to 0.
    pub fn assert_nonvanishing(&mut self) -> Result<Complex64> {
        let v = l_half(self)?;
        self.m = Some(0);
        Ok(v)
    }
}

/// Central values of every character in `chars`, sharing one table of
/// Hurwitz values per modulus. Fails on the first central zero.
pub fn central_values(chars: &mut [DirichletCharacter]) -> Result<Vec<Complex64>> {
    let mut cache: Option<(u64, Vec<f64>)> = None;
    let mut out = Vec::with_capacity(chars.len());
    for chi in chars.iter_mut() {
        if chi.is_principal {
            return Err(Error::Precondition(
                "central value of the principal character diverges".into(),
            ));
        }
        let q = chi.modulus();
        if cache.as_ref().map(|c| c.0) != Some(q) {
            let table = (1..=q)
                .map(|a| hurwitz_zeta(0.5, a as f64 / q as f64))
                .collect::<Result<Vec<_>>>()?;
            cache = Some((q, table));
        }
        let table = &cache.as_ref().unwrap().1;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..=q {
            let v = chi.value(a);
            if v.norm_sqr() > 0.0 {
                acc += v * table[(a - 1) as usize];
            }
        }
        let v = acc / (q as f64).sqrt();
        require_nonzero(chi, v)?;
        chi.m = Some(0);
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_half_identity() {
        let z = hurwitz_zeta(0.5, 1.0).unwrap();
        let z_half = hurwitz_zeta(0.5, 0.5).unwrap();
        assert!((z_half - (2f64.sqrt() - 1.0) * z).abs() < 1e-10);
    }

    #[test]
    fn zeta_two_is_basel() {
        let z = hurwitz_zeta(2.0, 1.0).unwrap();
        assert!((z - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
    }

    #[test]
    fn domain() {
        assert!(hurwitz_zeta(1.0, 0.5).is_err());
        assert!(hurwitz_zeta(0.5, 0.0).is_err());
        assert!(hurwitz_zeta(0.5, 1.5).is_err());
        assert!(hurwitz_zeta(-0.5, 0.5).is_err());
    }

    #[test]
    fn principal_rejected() {
        let chi = DirichletCharacter::principal(5).unwrap();
        assert!(matches!(l_half(&chi), Err(Error::Precondition(_))));
    }
}
