use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::classify::PrimeClassifier;
use super::compensated::{Compensated, Weight};
use super::series::{residual_column, residual_series, CheckpointSeries, LabelInfo, LinearCombo, Scale};
use crate::error::{invalid, Error, Result};
use crate::grid::CheckpointGrid;
use crate::sieve::{drive, PrimeConsumer, SieveConfig};

/// Running compensated sums sampled at checkpoints.
///
/// A checkpoint `x` is recorded as soon as a value larger than `x` arrives,
/// so each row holds the sums over everything `≤ x`.
#[derive(Debug, Clone)]
pub struct CheckpointBank {
    points: Vec<u64>,
    next: usize,
    last: u64,
    sums: Vec<Compensated>,
    rows: Vec<Vec<f64>>,
    error: Option<Error>,
}

/// Bit-exact image of a [`CheckpointBank`], for resuming interrupted runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankSnapshot {
    pub next: usize,
    pub last: u64,
    pub sums: Vec<[u64; 2]>,
    pub rows: Vec<Vec<u64>>,
}

impl CheckpointBank {
    pub fn new(points: Vec<u64>, columns: usize) -> Self {
        CheckpointBank {
            points,
            next: 0,
            last: 0,
            sums: vec![Compensated::new(); columns],
            rows: Vec::new(),
            error: None,
        }
    }

    /// Records every checkpoint below `v`. Returns `false` once `v` lies past
    /// the last checkpoint or the stream has been rejected.
    #[inline]
    pub fn advance(&mut self, v: u64) -> bool {
        if self.error.is_some() {
            return false;
        }
        if v <= self.last && self.last != 0 {
            self.error = Some(Error::Unordered {
                previous: self.last,
                got: v,
            });
            return false;
        }
        self.last = v;
        while self.next < self.points.len() && self.points[self.next] < v {
            self.record();
        }
        self.next < self.points.len()
    }

    #[inline]
    pub fn add(&mut self, column: usize, term: f64) {
        self.sums[column].add(term);
    }

    pub fn value(&self, column: usize) -> f64 {
        self.sums[column].value()
    }

    pub fn columns(&self) -> usize {
        self.sums.len()
    }

    /// Next checkpoint still waiting for its row.
    pub fn pending(&self) -> Option<u64> {
        self.points.get(self.next).copied()
    }

    /// Stores the current sums as the row of the pending checkpoint.
    pub fn record(&mut self) {
        self.rows.push(self.sums.iter().map(|s| s.value()).collect());
        self.next += 1;
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn fail(&mut self, error: Error) {
        if self.error.is_none() {
            self.error = Some(error);
        }
    }

    /// Flushes the remaining checkpoints and returns column-major values.
    pub fn finish(&mut self) -> Result<Vec<Vec<f64>>> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        while self.next < self.points.len() {
            self.record();
        }
        Ok((0..self.sums.len())
            .map(|c| self.rows.iter().map(|r| r[c]).collect())
            .collect())
    }

    pub fn snapshot(&self) -> BankSnapshot {
        BankSnapshot {
            next: self.next,
            last: self.last,
            sums: self.sums.iter().map(|s| s.to_bits()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v.to_bits()).collect())
                .collect(),
        }
    }

    pub fn restore(&mut self, snap: &BankSnapshot) -> Result<()> {
        if snap.sums.len() != self.sums.len()
            || snap.rows.len() != snap.next
            || snap.next > self.points.len()
            || snap.rows.iter().any(|r| r.len() != self.sums.len())
        {
            return invalid("saved accumulator state does not match this experiment");
        }
        self.next = snap.next;
        self.last = snap.last;
        self.sums = snap.sums.iter().map(|&b| Compensated::from_bits(b)).collect();
        self.rows = snap
            .rows
            .iter()
            .map(|r| r.iter().map(|&b| f64::from_bits(b)).collect())
            .collect();
        self.error = None;
        Ok(())
    }
}

/// Saved state of a streaming experiment: its bank plus any private data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccumulatorState {
    pub bank: BankSnapshot,
    pub extra: Vec<u64>,
}

/// A prime consumer that ends in a [`CheckpointSeries`] and can be paused.
pub trait SeriesConsumer: PrimeConsumer + Send {
    /// Names of the raw columns, in row order.
    fn column_names(&self) -> Vec<String>;
    /// Raw rows recorded so far, one per completed checkpoint.
    fn recorded_rows(&self) -> &[Vec<f64>];
    fn snapshot(&self) -> AccumulatorState;
    fn restore(&mut self, state: &AccumulatorState) -> Result<()>;
    /// Flushes pending checkpoints and builds the series with derived columns.
    fn finish(&mut self) -> Result<CheckpointSeries>;
}

/// Accumulates `Σ p^{-s}` per classifier label, plus `excluded` and `all`.
#[derive(Debug, Clone)]
pub struct SeriesAccumulator<C> {
    classifier: C,
    s: f64,
    weight: Weight,
    grid: CheckpointGrid,
    bank: CheckpointBank,
}

pub const EXCLUDED_COLUMN: &str = "excluded";
pub const ALL_COLUMN: &str = "all";

impl<C: PrimeClassifier> SeriesAccumulator<C> {
    pub fn new(classifier: C, s: f64, grid: CheckpointGrid) -> Result<Self> {
        if !s.is_finite() {
            return invalid(format!("weight exponent must be finite, got {s}"));
        }
        let columns = classifier.label_count() + 2;
        Ok(SeriesAccumulator {
            classifier,
            s,
            weight: Weight::from_exponent(s),
            bank: CheckpointBank::new(grid.points.clone(), columns),
            grid,
        })
    }

    pub fn classifier(&self) -> &C {
        &self.classifier
    }

    fn names(&self) -> Vec<String> {
        let n = self.classifier.label_count();
        let mut names: Vec<String> = (0..n).map(|l| self.classifier.label_name(l)).collect();
        names.push(EXCLUDED_COLUMN.into());
        names.push(ALL_COLUMN.into());
        names
    }
}

impl<C: PrimeClassifier> PrimeConsumer for SeriesAccumulator<C> {
    #[inline]
    fn prime(&mut self, p: u64) {
        if !self.bank.advance(p) {
            return;
        }
        let w = self.weight.of(p);
        let n = self.classifier.label_count();
        let col = self.classifier.classify(p).unwrap_or(n);
        self.bank.add(col, w);
        self.bank.add(n + 1, w);
    }
}

impl<C: PrimeClassifier + Send> SeriesConsumer for SeriesAccumulator<C> {
    fn column_names(&self) -> Vec<String> {
        self.names()
    }

    fn recorded_rows(&self) -> &[Vec<f64>] {
        self.bank.rows()
    }

    fn snapshot(&self) -> AccumulatorState {
        AccumulatorState {
            bank: self.bank.snapshot(),
            extra: Vec::new(),
        }
    }

    fn restore(&mut self, state: &AccumulatorState) -> Result<()> {
        self.bank.restore(&state.bank)
    }

    fn finish(&mut self) -> Result<CheckpointSeries> {
        self.finish_series()
    }
}

/// Per-label sums `Σ_{p ≤ x, class(p) = ℓ} p^{-s}` at every checkpoint.
pub fn accumulate_series<C: PrimeClassifier>(
    classifier: C,
    s: f64,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    let mut acc = SeriesAccumulator::new(classifier, s, grid.clone())?;
    for p in primes {
        acc.prime(p);
    }
    acc.finish_series()
}

impl<C: PrimeClassifier> SeriesAccumulator<C> {
    fn finish_series(&mut self) -> Result<CheckpointSeries> {
        let values = self.bank.finish()?;
        let mut series = CheckpointSeries::new(self.grid.clone(), "x");
        for (name, v) in self.names().into_iter().zip(values) {
            series.push_column(name, v)?;
        }
        series.labels = (0..self.classifier.label_count())
            .map(|l| LabelInfo {
                column: self.classifier.label_name(l),
                density: self.classifier.expected_density(l),
            })
            .collect();
        series.set_meta("s", self.s);
        Ok(series)
    }
}

/// Runs the sieve up to `config.limit` into `consumer` and finishes it.
pub fn run_sieved<S: SeriesConsumer + ?Sized>(
    consumer: &mut S,
    grid: &CheckpointGrid,
    config: &SieveConfig,
) -> Result<CheckpointSeries> {
    if grid.x_max > config.limit {
        return invalid(format!(
            "grid reaches {} beyond the sieve limit {}",
            grid.x_max, config.limit
        ));
    }
    config.validate()?;
    drive(config, 2, consumer);
    consumer.finish()
}

/// `Σ_{p ≤ x, class(p) = label} 1/p − density·log log x`.
pub fn mertens_residual<C: PrimeClassifier>(
    classifier: C,
    label: usize,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    if label >= classifier.label_count() {
        return invalid(format!("label {label} out of range"));
    }
    let name = classifier.label_name(label);
    let (num, den) = classifier.expected_density(label);
    let series = accumulate_series(classifier, 1.0, grid, primes)?;
    let combo = LinearCombo::new(format!("mertens:{name}")).term(name, 1.0);
    let out = residual_series(&series, &combo, num as f64 / den as f64, Scale::LogLog)?;
    debug_assert!(out.has_column(&residual_column(&combo.name)));
    Ok(out)
}

/// Exact prime-counting race between residues `a` and `b` modulo `q`.
///
/// Records every prime at which the sign of `π(x;q,b) − π(x;q,a)` changes.
#[derive(Debug, Clone)]
pub struct PrimeRace {
    q: u64,
    a: u64,
    b: u64,
    count_a: u64,
    count_b: u64,
    state: Ordering,
    changes: Vec<(u64, Ordering)>,
}

impl PrimeRace {
    pub fn new(q: u64, a: u64, b: u64) -> Result<Self> {
        if q < 2 || a % q == b % q {
            return invalid(format!("race needs distinct residues modulo {q}"));
        }
        Ok(PrimeRace {
            q,
            a: a % q,
            b: b % q,
            count_a: 0,
            count_b: 0,
            state: Ordering::Equal,
            changes: Vec::new(),
        })
    }

    pub fn counts(&self) -> (u64, u64) {
        (self.count_a, self.count_b)
    }

    /// `(prime, ordering of π(x;q,b) against π(x;q,a) from that prime on)`.
    pub fn changes(&self) -> &[(u64, Ordering)] {
        &self.changes
    }

    /// First prime after `after` where the ordering becomes `state`.
    pub fn first(&self, state: Ordering, after: u64) -> Option<u64> {
        self.changes
            .iter()
            .find(|&&(p, s)| p > after && s == state)
            .map(|&(p, _)| p)
    }
}

impl PrimeConsumer for PrimeRace {
    #[inline]
    fn prime(&mut self, p: u64) {
        let r = p % self.q;
        if r == self.a {
            self.count_a += 1;
        } else if r == self.b {
            self.count_b += 1;
        } else {
            return;
        }
        let state = self.count_b.cmp(&self.count_a);
        if state != self.state {
            self.state = state;
            self.changes.push((p, state));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::sieve::primes_up_to;
    use crate::summation::{AllPrimes, ResidueClassifier};

    #[test]
    fn checkpoint_semantics_include_x() {
        let grid = CheckpointGrid::from_points(vec![2, 5, 6, 7, 20]).unwrap();
        let s = accumulate_series(AllPrimes, 0.0, &grid, primes_up_to(20)).unwrap();
        assert_eq!(s.column("all").unwrap(), &[1.0, 3.0, 3.0, 4.0, 8.0]);
    }

    #[test]
    fn unordered_stream_rejected() {
        let grid = CheckpointGrid::from_points(vec![10, 20]).unwrap();
        let e = accumulate_series(AllPrimes, 0.5, &grid, [2, 5, 3, 7]);
        assert!(matches!(e, Err(Error::Unordered { previous: 5, got: 3 })));
    }

    #[test]
    fn excluded_and_total() {
        let grid = make_grid(10, 1000, 2.0).unwrap();
        let s = accumulate_series(ResidueClassifier::units(4).unwrap(), 0.0, &grid, primes_up_to(1000)).unwrap();
        assert_eq!(s.column(EXCLUDED_COLUMN).unwrap().last(), Some(&1.0));
        assert_eq!(s.column(ALL_COLUMN).unwrap().last(), Some(&168.0));
    }

    #[test]
    fn snapshot_resume_is_bit_exact() {
        let grid = make_grid(16, 100_000, 1.3).unwrap();
        let primes = primes_up_to(100_000);
        let classifier = ResidueClassifier::units(8).unwrap();
        let straight = accumulate_series(classifier.clone(), 0.5, &grid, primes.iter().copied()).unwrap();

        let mut first = SeriesAccumulator::new(classifier.clone(), 0.5, grid.clone()).unwrap();
        let cut = primes.partition_point(|&p| p < 40_000);
        for &p in &primes[..cut] {
            first.prime(p);
        }
        let state = first.snapshot();
        let json = serde_json::to_string(&state).unwrap();
        let mut second = SeriesAccumulator::new(classifier, 0.5, grid).unwrap();
        second.restore(&serde_json::from_str(&json).unwrap()).unwrap();
        for &p in &primes[cut..] {
            second.prime(p);
        }
        assert_eq!(second.finish().unwrap(), straight);
    }

    #[test]
    fn race_mod4_small() {
        let mut race = PrimeRace::new(4, 1, 3).unwrap();
        for p in primes_up_to(30_000) {
            race.prime(p);
        }
        assert_eq!(race.first(Ordering::Less, 0), Some(26861));
        assert_eq!(race.first(Ordering::Equal, 26861), Some(26863));
    }
}
