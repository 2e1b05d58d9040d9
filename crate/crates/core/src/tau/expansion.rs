use crate::error::{invalid, Error, Result};

/// Largest truncation order accepted.
pub const MAX_ORDER: usize = 1 << 17;

/// Largest order for which the pentagonal cross-check route is offered.
pub const PENTAGONAL_MAX_ORDER: usize = 5000;

/// Coefficients `τ(n)` of `Δ = q Π (1 − q^k)^24` for `1 ≤ n ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaExpansion {
    /// `tau[0] = 0`, `tau[n] = τ(n)`.
    tau: Vec<i128>,
}

/// `(exponent, coefficient)` pairs of a sparse series below `len`.
type Sparse = Vec<(usize, i128)>;

/// `Π (1 − q^k)^3 = Σ_{k≥0} (−1)^k (2k+1) q^{k(k+1)/2}`.
fn eta_cubed(len: usize) -> Sparse {
    let mut out = Vec::new();
    for k in 0usize.. {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i128;
        out.push((e, if k % 2 == 0 { c } else { -c }));
    }
    out
}

/// `Π (1 − q^k) = Σ_{k∈Z} (−1)^k q^{k(3k−1)/2}`.
fn pentagonal(len: usize) -> Sparse {
    let mut out = vec![(0usize, 1i128)];
    for k in 1usize.. {
        let a = k * (3 * k - 1) / 2;
        if a >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out.push((a, sign));
        let b = k * (3 * k + 1) / 2;
        if b < len {
            out.push((b, sign));
        }
    }
    out.sort_unstable();
    out
}

/// `dense · sparse` truncated to `dense.len()`, with checked arithmetic.
fn mul_sparse(dense: &[i128], sparse: &Sparse) -> Result<Vec<i128>> {
    let len = dense.len();
    let mut out = vec![0i128; len];
    for (n, slot) in out.iter_mut().enumerate() {
        let mut acc: i128 = 0;
        for &(e, c) in sparse.iter().take_while(|(e, _)| *e <= n) {
            acc = c
                .checked_mul(dense[n - e])
                .and_then(|t| acc.checked_add(t))
                .ok_or(Error::Overflow { index: n + 1 })?;
        }
        *slot = acc;
    }
    Ok(out)
}

fn check_order(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return invalid(format!("truncation order must lie in 1..={max}, got {n}"));
    }
    Ok(())
}

/// Number of divisors of every `n ≤ len`.
fn divisor_counts(len: usize) -> Vec<u32> {
    let mut d = vec![0u32; len + 1];
    for a in 1..=len {
        for m in (a..=len).step_by(a) {
            d[m] += 1;
        }
    }
    d
}

impl DeltaExpansion {
    /// Builds `τ(n)` for `n ≤ order` as `(Π(1 − q^k)^3)^8`, multiplying by the
    /// sparse cube seven times.
    pub fn new(order: usize) -> Result<Self> {
        check_order(order, MAX_ORDER)?;
        let cube = eta_cubed(order);
        let mut series = vec![0i128; order];
        for &(e, c) in &cube {
            series[e] = c;
        }
        for _ in 1..8 {
            series = mul_sparse(&series, &cube)?;
        }
        Self::from_shifted(series)
    }

    /// Independent route: 24 multiplications by the pentagonal series.
    pub fn by_pentagonal(order: usize) -> Result<Self> {
        check_order(order, PENTAGONAL_MAX_ORDER)?;
        let pent = pentagonal(order);
        let mut series = vec![0i128; order];
        series[0] = 1;
        for _ in 0..24 {
            series = mul_sparse(&series, &pent)?;
        }
        Self::from_shifted(series)
    }

    /// `series[n]` is the coefficient of `q^{n+1}` in `Δ`.
    fn from_shifted(series: Vec<i128>) -> Result<Self> {
        let mut tau = Vec::with_capacity(series.len() + 1);
        tau.push(0);
        tau.extend(series);
        let out = DeltaExpansion { tau };
        if let Some(n) = out.first_deligne_violation(2.0) {
            return Err(Error::Overflow { index: n });
        }
        Ok(out)
    }

    pub(crate) fn from_values(tau: Vec<i128>) -> Result<Self> {
        if tau.len() < 2 || tau[0] != 0 || tau[1] != 1 {
            return invalid("coefficient table must start 0, 1");
        }
        Ok(DeltaExpansion { tau })
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.tau.len() - 1
    }

    /// `τ(n)` for `1 ≤ n ≤ N`.
    pub fn tau(&self, n: usize) -> Option<i128> {
        (n >= 1).then(|| self.tau.get(n).copied()).flatten()
    }

    /// Coefficients indexed from 0 (`values()[0] = 0`).
    pub fn values(&self) -> &[i128] {
        &self.tau
    }

    /// `τ(n) n^{-11/2}`.
    pub fn normalized(&self, n: usize) -> Option<f64> {
        self.tau(n).map(|t| t as f64 / (n as f64).powf(5.5))
    }

    /// First `n` with `|τ(n)| > slack·d(n)·n^{11/2}`.
    pub fn first_deligne_violation(&self, slack: f64) -> Option<usize> {
        let d = divisor_counts(self.order());
        (1..=self.order()).find(|&n| {
            let bound = slack * d[n] as f64 * (n as f64).powf(5.5);
            (self.tau[n] as f64).abs() > bound * (1.0 + 1e-12)
        })
    }
}

/// `τ(n)` for `n ≤ order`.
pub fn delta_coefficients(order: usize) -> Result<DeltaExpansion> {
    DeltaExpansion::new(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let d = delta_coefficients(10).unwrap();
        let want = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        for (n, &w) in want.iter().enumerate() {
            assert_eq!(d.tau(n + 1), Some(w));
        }
        assert_eq!(d.tau(0), None);
        assert_eq!(d.tau(11), None);
    }

    #[test]
    fn sparse_series_shapes() {
        assert_eq!(eta_cubed(11), vec![(0, 1), (1, -3), (3, 5), (6, -7), (10, 9)]);
        assert_eq!(pentagonal(13), vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)]);
    }

    #[test]
    fn routes_agree() {
        assert_eq!(
            DeltaExpansion::new(600).unwrap(),
            DeltaExpansion::by_pentagonal(600).unwrap()
        );
    }

    #[test]
    fn order_limits() {
        assert!(delta_coefficients(0).is_err());
        assert!(delta_coefficients(MAX_ORDER + 1).is_err());
        assert!(DeltaExpansion::by_pentagonal(PENTAGONAL_MAX_ORDER + 1).is_err());
    }

    #[test]
    fn deligne_within_bound() {
        let d = delta_coefficients(2000).unwrap();
        assert_eq!(d.first_deligne_violation(1.0), None);
    }
}
