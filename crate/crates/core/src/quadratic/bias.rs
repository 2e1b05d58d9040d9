use std::collections::VecDeque;

use super::forms::{class_group, prime_ideal_classes, ClassGroup};
use super::kronecker::{kronecker, FundamentalDiscriminant, SplittingClassifier};
use crate::dirichlet::l_half;
use crate::error::{Error, Result};
use crate::grid::CheckpointGrid;
use crate::sieve::PrimeConsumer;
use crate::summation::{
    residual_series, AccumulatorState, CheckpointBank, CheckpointSeries, LinearCombo, Scale, SeriesAccumulator,
    SeriesConsumer, EXCLUDED_COLUMN,
};

/// `L(1/2, χ_{D'})` for every product `D'` of a nonempty set of the prime
/// discriminants dividing `D`. The genus characters of the class group have
/// L-functions `L(s, χ_{D1}) L(s, χ_{D/D1})`, so these cover their central
/// values.
pub fn genus_central_values(disc: &FundamentalDiscriminant) -> Result<Vec<(i64, f64)>> {
    let primes = disc.prime_discriminants();
    let mut out = Vec::new();
    for mask in 1u32..(1 << primes.len()) {
        let d1: i64 = (0..primes.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| primes[i])
            .product();
        let chi = FundamentalDiscriminant::new(d1)?.character()?;
        out.push((d1, l_half(&chi)?.re));
    }
    Ok(out)
}

/// Streams `Σ 1/√p` over split, inert and ramified primes and forms the
/// nonsplit-minus-split combination.
#[derive(Debug, Clone)]
pub struct SplittingBias {
    disc: FundamentalDiscriminant,
    central: f64,
    inner: SeriesAccumulator<SplittingClassifier>,
}

impl SplittingBias {
    pub fn new(d: i64, grid: CheckpointGrid) -> Result<Self> {
        let disc = FundamentalDiscriminant::new(d)?;
        let central = l_half(&disc.character()?)?.re;
        Ok(SplittingBias {
            disc,
            central,
            inner: SeriesAccumulator::new(SplittingClassifier { disc }, 0.5, grid)?,
        })
    }
}

impl PrimeConsumer for SplittingBias {
    #[inline]
    fn prime(&mut self, p: u64) {
        self.inner.prime(p)
    }
}

impl SeriesConsumer for SplittingBias {
    fn column_names(&self) -> Vec<String> {
        self.inner.column_names()
    }

    fn recorded_rows(&self) -> &[Vec<f64>] {
        self.inner.recorded_rows()
    }

    fn snapshot(&self) -> AccumulatorState {
        self.inner.snapshot()
    }

    fn restore(&mut self, state: &AccumulatorState) -> Result<()> {
        self.inner.restore(state)
    }

    fn finish(&mut self) -> Result<CheckpointSeries> {
        let mut series = self.inner.finish()?;
        let nonsplit = LinearCombo::new("nonsplit")
            .term("inert", 1.0)
            .term(EXCLUDED_COLUMN, 1.0);
        let values = nonsplit.eval(&series)?;
        series.push_column("nonsplit", values)?;
        // [L:K] − 1 = 1 for a quadratic extension
        let combo = LinearCombo::difference("bias", "nonsplit", "split");
        let mut out = residual_series(&series, &combo, 0.5, Scale::LogLog)?;
        out.set_meta("discriminant", self.disc.d);
        out.set_meta("central_value", self.central);
        Ok(out)
    }
}

pub fn splitting_bias_series(
    d: i64,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    let mut acc = SplittingBias::new(d, grid.clone())?;
    for p in primes {
        acc.prime(p);
    }
    acc.finish()
}

/// Streams `Σ N(𝔭)^{-1/2}` over prime ideals of an imaginary quadratic
/// field, per ideal class, together with ideal counts.
///
/// Inert primes contribute an ideal of norm `p²`, queued until the stream
/// passes it.
#[derive(Debug, Clone)]
pub struct PrincipalBias {
    group: ClassGroup,
    grid: CheckpointGrid,
    bank: CheckpointBank,
    inert: VecDeque<u64>,
    central: Vec<(i64, f64)>,
}

impl PrincipalBias {
    pub fn new(d: i64, grid: CheckpointGrid) -> Result<Self> {
        let group = class_group(d)?;
        group.check_genus()?;
        let central = genus_central_values(&group.disc)?;
        Ok(PrincipalBias {
            bank: CheckpointBank::new(grid.points.clone(), 2 * group.h),
            group,
            grid,
            inert: VecDeque::new(),
            central,
        })
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.group
    }

    /// `(|Cl/Cl²| − 1)/2`.
    pub fn predicted_slope(&self) -> f64 {
        (self.group.two_rank_order() as f64 - 1.0) / 2.0
    }

    #[inline]
    fn ideal(&mut self, class: usize, norm: u64) {
        self.bank.add(class, 1.0 / (norm as f64).sqrt());
        self.bank.add(self.group.h + class, 1.0);
    }

    fn drain_inert_below(&mut self, bound: u64) {
        while let Some(&n) = self.inert.front() {
            if n >= bound {
                break;
            }
            self.inert.pop_front();
            if self.bank.advance(n) {
                self.ideal(0, n);
            }
        }
    }

    fn class_name(&self, i: usize) -> String {
        format!("class:{}", self.group.forms[i])
    }
}

impl PrimeConsumer for PrincipalBias {
    fn prime(&mut self, p: u64) {
        self.drain_inert_below(p);
        if !self.bank.advance(p) {
            return;
        }
        let d = self.group.disc.d;
        if kronecker(d, p as i64) == -1 {
            if let Some(n) = p.checked_mul(p).filter(|&n| n <= self.grid.x_max) {
                self.inert.push_back(n);
            }
            return;
        }
        match prime_ideal_classes(d, p) {
            Ok(ideals) => {
                for (form, norm) in ideals {
                    match self.group.index_of(&form) {
                        Some(c) => self.ideal(c, norm),
                        None => self
                            .bank
                            .fail(Error::Internal(format!("form {form} missing from the class group"))),
                    }
                }
            }
            Err(e) => self.bank.fail(e),
        }
    }
}

impl SeriesConsumer for PrincipalBias {
    fn column_names(&self) -> Vec<String> {
        let h = self.group.h;
        (0..h)
            .map(|i| self.class_name(i))
            .chain((0..h).map(|i| format!("count:{}", self.group.forms[i])))
            .collect()
    }

    fn recorded_rows(&self) -> &[Vec<f64>] {
        self.bank.rows()
    }

    fn snapshot(&self) -> AccumulatorState {
        AccumulatorState {
            bank: self.bank.snapshot(),
            extra: self.inert.iter().copied().collect(),
        }
    }

    fn restore(&mut self, state: &AccumulatorState) -> Result<()> {
        self.bank.restore(&state.bank)?;
        self.inert = state.extra.iter().copied().collect();
        Ok(())
    }

    fn finish(&mut self) -> Result<CheckpointSeries> {
        self.drain_inert_below(u64::MAX);
        let raw = self.bank.finish()?;
        let h = self.group.h;
        let n = self.grid.points.len();
        let mut series = CheckpointSeries::new(self.grid.clone(), "x");
        for (name, values) in self.column_names().into_iter().zip(raw.iter().cloned()) {
            series.push_column(name, values)?;
        }
        let nonprincipal: Vec<f64> = (0..n).map(|i| (1..h).map(|c| raw[c][i]).sum()).collect();
        series.push_column("principal", raw[0].clone())?;
        series.push_column("nonprincipal", nonprincipal)?;
        let fraction = (0..n)
            .map(|i| {
                let total: f64 = (0..h).map(|c| raw[h + c][i]).sum();
                if total > 0.0 {
                    raw[h][i] / total
                } else {
                    f64::NAN
                }
            })
            .collect();
        series.push_column("principal_fraction", fraction)?;
        let combo = LinearCombo::new("bias")
            .term("nonprincipal", 1.0)
            .term("principal", -((h - 1) as f64));
        let mut out = residual_series(&series, &combo, self.predicted_slope(), Scale::LogLog)?;
        out.set_meta("discriminant", self.group.disc.d);
        out.set_meta("class_number", h);
        let forms: Vec<String> = self.group.forms.iter().map(|f| format!("({f})")).collect();
        out.set_meta("forms", forms.join(" "));
        let central: Vec<String> = self.central.iter().map(|(d, v)| format!("{d}:{v:.12}")).collect();
        out.set_meta("genus_central_values", central.join(" "));
        Ok(out)
    }
}

pub fn principal_bias_series(
    d: i64,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    let mut acc = PrincipalBias::new(d, grid.clone())?;
    for p in primes {
        acc.prime(p);
    }
    acc.finish()
}
