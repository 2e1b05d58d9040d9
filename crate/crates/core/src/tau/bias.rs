use std::sync::Arc;

use super::expansion::DeltaExpansion;
use crate::error::{invalid, Error, Result};
use crate::grid::CheckpointGrid;
use crate::sieve::PrimeConsumer;
use crate::summation::{
    residual_series, AccumulatorState, CheckpointBank, CheckpointSeries, LinearCombo, Scale, SeriesConsumer,
};

pub const TAU_COLUMN: &str = "tau";
pub const SYM2_COLUMN: &str = "sym2";

/// Streams `Σ_{p≤x} τ(p)/p^6` and the symmetric-square sum
/// `Σ_{p≤x} τ(p²) p^{-23/2}`, the latter via `τ(p²) = τ(p)² − p^11`.
#[derive(Debug, Clone)]
pub struct TauBias {
    delta: Arc<DeltaExpansion>,
    grid: CheckpointGrid,
    bank: CheckpointBank,
}

impl TauBias {
    pub fn new(delta: Arc<DeltaExpansion>, grid: CheckpointGrid) -> Result<Self> {
        Scale::LogLog.apply(grid.x_min)?;
        if grid.x_max > delta.order() as u64 {
            return invalid(format!(
                "grid reaches {} beyond the tau table order {}",
                grid.x_max,
                delta.order()
            ));
        }
        Ok(TauBias {
            bank: CheckpointBank::new(grid.points.clone(), 2),
            delta,
            grid,
        })
    }
}

impl PrimeConsumer for TauBias {
    fn prime(&mut self, p: u64) {
        if !self.bank.advance(p) {
            return;
        }
        let Some(a) = self.delta.normalized(p as usize) else {
            self.bank
                .fail(Error::Precondition(format!("tau({p}) is beyond the table")));
            return;
        };
        let r = (p as f64).sqrt().recip();
        self.bank.add(0, a * r);
        self.bank.add(1, (a * a - 1.0) * r);
    }
}

impl SeriesConsumer for TauBias {
    fn column_names(&self) -> Vec<String> {
        vec![TAU_COLUMN.into(), SYM2_COLUMN.into()]
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
        let raw = self.bank.finish()?;
        let mut series = CheckpointSeries::new(self.grid.clone(), "x");
        for (name, values) in self.column_names().into_iter().zip(raw) {
            series.push_column(name, values)?;
        }
        let tau = LinearCombo::new(TAU_COLUMN).term(TAU_COLUMN, 1.0);
        let sym2 = LinearCombo::new(SYM2_COLUMN).term(SYM2_COLUMN, 1.0);
        let series = residual_series(&series, &tau, 0.5, Scale::LogLog)?;
        let mut series = residual_series(&series, &sym2, -0.5, Scale::LogLog)?;
        series.set_meta("tau_order", self.delta.order());
        Ok(series)
    }
}

pub fn tau_bias_series(
    delta: Arc<DeltaExpansion>,
    grid: &CheckpointGrid,
    primes: impl IntoIterator<Item = u64>,
) -> Result<CheckpointSeries> {
    let mut acc = TauBias::new(delta, grid.clone())?;
    for p in primes {
        acc.prime(p);
    }
    acc.finish()
}
