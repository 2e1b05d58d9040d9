use num_complex::Complex64;

use super::character::DirichletCharacter;
use crate::error::{Error, Result};
use crate::grid::CheckpointGrid;
use crate::sieve::PrimeConsumer;
use crate::summation::{AccumulatorState, CheckpointBank, CheckpointSeries, Scale, SeriesConsumer};

/// Highest power kept in the expansion `−log(1−z) = Σ z^k/k`.
pub const MAX_LOG_POWER: u32 = 64;

const RAW_COLUMNS: [&str; 8] = [
    "log_re",
    "log_im",
    "sum_re",
    "sum_im",
    "square_re",
    "square_im",
    "tail_re",
    "tail_im",
];
const LOG: usize = 0;
const SUM: usize = 2;
const SQUARE: usize = 4;
const TAIL: usize = 6;

/// Streams `Π_{p≤x} (1 − χ(p)p^{-1/2})^{-1}` in log space together with the
/// pieces of its log expansion: `Σ χ(p)/√p`, `Σ χ(p)²/(2p)` and the `k ≥ 3`
/// tail.
#[derive(Debug, Clone)]
pub struct EulerProductAccumulator {
    chi: DirichletCharacter,
    values: Vec<Complex64>,
    central: Complex64,
    grid: CheckpointGrid,
    bank: CheckpointBank,
    with_residual: bool,
}

impl EulerProductAccumulator {
    /// With `with_residual`, every checkpoint must be at least 16 so that
    /// `log log x` is usable.
    pub fn new(mut chi: DirichletCharacter, grid: CheckpointGrid, with_residual: bool) -> Result<Self> {
        let central = chi.assert_nonvanishing()?;
        if with_residual {
            if let Some(&x) = grid.points.first() {
                Scale::LogLog.apply(x)?;
            }
        }
        Ok(EulerProductAccumulator {
            values: chi.value_table(),
            chi,
            central,
            bank: CheckpointBank::new(grid.points.clone(), RAW_COLUMNS.len()),
            grid,
            with_residual,
        })
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.chi
    }

    /// `√2^ν · L(1/2, χ)`, the limit predicted for the partial products.
    pub fn target(&self) -> Complex64 {
        self.central * 2f64.sqrt().powi(self.chi.nu as i32)
    }

    fn build(&mut self) -> Result<CheckpointSeries> {
        let raw = self.bank.finish()?;
        let target = self.target();
        let n = self.grid.points.len();
        let mut series = CheckpointSeries::new(self.grid.clone(), "x");
        let product: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new(raw[LOG][i], raw[LOG + 1][i]).exp())
            .collect();
        series.push_column("product_re", product.iter().map(|z| z.re).collect())?;
        series.push_column("product_im", product.iter().map(|z| z.im).collect())?;
        series.push_column("target_re", vec![target.re; n])?;
        series.push_column("target_im", vec![target.im; n])?;
        series.push_column(
            "relative_deviation",
            product.iter().map(|z| (z - target).norm() / target.norm()).collect(),
        )?;
        if self.with_residual {
            let slope = self.chi.nu as f64 / 2.0 + self.chi.m.unwrap_or(0) as f64;
            let prediction = self
                .grid
                .points
                .iter()
                .map(|&x| Ok(-slope * Scale::LogLog.apply(x)?))
                .collect::<Result<Vec<f64>>>()?;
            let residual = raw[SUM].iter().zip(&prediction).map(|(s, p)| s - p).collect();
            series.push_column("prediction", prediction)?;
            series.push_column("residual_re", residual)?;
            series.push_column("residual_im", raw[SUM + 1].clone())?;
        }
        for (name, values) in RAW_COLUMNS.iter().zip(raw) {
            series.push_column(*name, values)?;
        }
        series.set_meta("character", self.chi.label());
        series.set_meta("nu", self.chi.nu);
        series.set_meta("m", self.chi.m.unwrap_or(0));
        series.set_meta("central_re", self.central.re);
        series.set_meta("central_im", self.central.im);
        Ok(series)
    }
}

impl PrimeConsumer for EulerProductAccumulator {
    #[inline]
    fn prime(&mut self, p: u64) {
        if !self.bank.advance(p) {
            return;
        }
        let v = self.values[(p % self.chi.modulus()) as usize];
        if v.norm_sqr() == 0.0 {
            return;
        }
        let z = v / (p as f64).sqrt();
        let log = -(Complex64::new(1.0, 0.0) - z).ln();
        self.bank.add(LOG, log.re);
        self.bank.add(LOG + 1, log.im);
        self.bank.add(SUM, z.re);
        self.bank.add(SUM + 1, z.im);
        let z2 = z * z;
        self.bank.add(SQUARE, z2.re / 2.0);
        self.bank.add(SQUARE + 1, z2.im / 2.0);
        let mut power = z2;
        let mut tail = Complex64::new(0.0, 0.0);
        for k in 3..=MAX_LOG_POWER {
            power *= z;
            if power.norm_sqr() < 1e-40 {
                break;
            }
            tail += power / k as f64;
        }
        self.bank.add(TAIL, tail.re);
        self.bank.add(TAIL + 1, tail.im);
    }
}

impl SeriesConsumer for EulerProductAccumulator {
    fn column_names(&self) -> Vec<String> {
        RAW_COLUMNS.iter().map(|s| s.to_string()).collect()
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
        self.build()
    }
}

fn run(
    chi: &DirichletCharacter,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
    with_residual: bool,
) -> Result<CheckpointSeries> {
    if chi.is_principal {
        return Err(Error::Precondition(
            "Euler product of the principal character diverges".into(),
        ));
    }
    let mut acc = EulerProductAccumulator::new(chi.clone(), grid.clone(), with_residual)?;
    for p in primes {
        acc.prime(p);
    }
    acc.build()
}

/// Partial products at every checkpoint, with the predicted limit.
pub fn partial_euler_product(
    chi: &DirichletCharacter,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    run(chi, grid, primes, false)
}

/// Adds `residual = Σ_{p≤x} χ(p)/√p + (ν/2 + m)·log log x` to the
/// partial-product columns.
pub fn drh_residual(
    chi: &DirichletCharacter,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    run(chi, grid, primes, true)
}
