/// Neumaier's variant of Kahan summation.
///
/// The carry keeps the rounding error of every addition, so a sum of ~10^10
/// positive terms stays within a few ulps of the exact value.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub const fn new() -> Self {
        Compensated { sum: 0.0, carry: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }

    pub fn carry(&self) -> f64 {
        self.carry
    }

    pub fn to_bits(&self) -> [u64; 2] {
        [self.sum.to_bits(), self.carry.to_bits()]
    }

    pub fn from_bits(bits: [u64; 2]) -> Self {
        Compensated {
            sum: f64::from_bits(bits[0]),
            carry: f64::from_bits(bits[1]),
        }
    }
}

/// How a prime's weight `p^{-s}` is computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weight {
    Count,
    InvSqrt,
    Inv,
    Power(f64),
}

impl Weight {
    pub fn from_exponent(s: f64) -> Self {
        if s == 0.0 {
            Weight::Count
        } else if s == 0.5 {
            Weight::InvSqrt
        } else if s == 1.0 {
            Weight::Inv
        } else {
            Weight::Power(s)
        }
    }

    pub fn exponent(&self) -> f64 {
        match *self {
            Weight::Count => 0.0,
            Weight::InvSqrt => 0.5,
            Weight::Inv => 1.0,
            Weight::Power(s) => s,
        }
    }

    #[inline]
    pub fn of(&self, n: u64) -> f64 {
        match *self {
            Weight::Count => 1.0,
            Weight::InvSqrt => 1.0 / (n as f64).sqrt(),
            Weight::Inv => 1.0 / n as f64,
            Weight::Power(s) => (n as f64).powf(-s),
        }
    }
}

/// Running sum of `N(p)^{-s}` over a stream of norms.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSum {
    pub s: f64,
    acc: Compensated,
    count: u64,
    weight: Weight,
}

impl WeightedSum {
    pub fn new(s: f64) -> Self {
        WeightedSum {
            s,
            acc: Compensated::new(),
            count: 0,
            weight: Weight::from_exponent(s),
        }
    }

    #[inline]
    pub fn add_norm(&mut self, norm: u64) {
        self.acc.add(self.weight.of(norm));
        self.count += 1;
    }

    pub fn value(&self) -> f64 {
        self.acc.value()
    }

    pub fn compensation(&self) -> f64 {
        self.acc.carry()
    }

    pub fn count(&self) -> u64 {
        self.count
    }
}
