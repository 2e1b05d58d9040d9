//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Plain unsegmented sieve of Eratosthenes.
pub fn simple_sieve(n: usize) -> Vec<u64> {
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `L(1/2, χ)` for a real character of period `q` by summing whole periods
/// and Richardson-extrapolating the partial sums in `K^{-1/2-j}`.
pub fn central_value_by_periods(q: u64, chi: impl Fn(u64) -> i32) -> f64 {
    let values: Vec<f64> = (1..=q).map(|a| chi(a) as f64).collect();
    let levels = 6;
    let base = 1u64 << 9;
    let mut partial = Vec::new();
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut k = 0u64;
    for level in 0..levels {
        let target = base << level;
        while k < target {
            let mut block = 0.0;
            for (i, &v) in values.iter().enumerate() {
                if v != 0.0 {
                    block += v / ((k * q + i as u64 + 1) as f64).sqrt();
                }
            }
            let y = block - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            k += 1;
        }
        partial.push(sum);
    }
    // eliminate K^{-1/2}, K^{-3/2}, ... one exponent per pass
    for j in 0..levels - 1 {
        let f = 2f64.powf(0.5 + j as f64);
        partial = partial.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    partial[0]
}

/// `ζ(s)` for real `s ≠ 1` through the alternating eta series, accelerated
/// with the Cohen–Villegas–Zagier weights.
pub fn zeta_via_eta(s: f64) -> f64 {
    let n = 60;
    let d = (3.0 + 8f64.sqrt()).powi(n);
    let d = (d + 1.0 / d) / 2.0;
    let mut b = -1.0f64;
    let mut c = -d;
    let mut acc = 0.0;
    for k in 0..n {
        c = b - c;
        acc += c / ((k + 1) as f64).powf(s);
        let kf = k as f64;
        let nf = n as f64;
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    let eta = acc / d;
    eta / (1.0 - 2f64.powf(1.0 - s))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
