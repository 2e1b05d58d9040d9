use num_complex::Complex64;

use super::irreducible::{enumerate_irreducibles, factor_poly};
use super::lpoly::{class_histogram, LPolynomial};
use super::poly::PolyFq;
use super::units::{unit_class_table, FfCharacter, UnitClassTable};
use crate::error::{Error, Result};
use crate::grid::CheckpointGrid;
use crate::summation::{
    residual_series, CheckpointSeries, Compensated, LinearCombo, Scale, ALL_COLUMN, EXCLUDED_COLUMN,
};

/// Largest unit group whose characters all get a central-value check.
pub const CENTRAL_CHECK_BUDGET: u64 = 4096;

/// Running `Σ_{deg P ≤ n} χ(P)·q^{-deg P/2}` style sums over monic
/// irreducibles, one row per degree in `grid`.
fn degree_sums(
    q: u64,
    grid: &CheckpointGrid,
    ncols: usize,
    mut visit: impl FnMut(&PolyFq, &mut [Compensated]) -> Result<()>,
) -> Result<Vec<Vec<f64>>> {
    let n_max = grid.x_max as usize;
    let mut sums = vec![Compensated::new(); ncols];
    let mut rows = vec![Vec::with_capacity(grid.len()); ncols];
    let mut next = 0usize;
    let mut flush_through = |deg: u64, sums: &[Compensated], rows: &mut Vec<Vec<f64>>| {
        while next < grid.points.len() && grid.points[next] <= deg {
            for (row, s) in rows.iter_mut().zip(sums) {
                row.push(s.value());
            }
            next += 1;
        }
    };
    for p in enumerate_irreducibles(q, n_max)? {
        let deg = p.degree().unwrap() as u64;
        // rows for degrees below this one are complete
        flush_through(deg - 1, &sums, &mut rows);
        visit(&p, &mut sums)?;
    }
    flush_through(u64::MAX, &sums, &mut rows);
    Ok(rows)
}

/// The displayed case formula for `t` with squarefree `M`: 1 in
/// characteristic 2, otherwise `2^r` for `r` distinct prime factors. Kept as
/// a cross-check only; `t` itself is computed from the unit group.
fn case_formula_t(q: u64, modulus: &PolyFq) -> Result<Option<u32>> {
    let factors = factor_poly(modulus)?;
    if factors.iter().any(|(_, e)| *e > 1) {
        return Ok(None);
    }
    Ok(Some(if q == 2 { 1 } else { 1 << factors.len() }))
}

/// L-polynomials of every nonprincipal character. Fails with `CentralZero`
/// when one vanishes at the central point.
pub fn ff_central_values(table: &std::sync::Arc<UnitClassTable>) -> Result<Vec<(FfCharacter, LPolynomial)>> {
    if table.phi > CENTRAL_CHECK_BUDGET {
        return Err(Error::Budget(format!(
            "{} characters exceed the central-check budget {CENTRAL_CHECK_BUDGET}",
            table.phi
        )));
    }
    let hists = (0..table.deg)
        .map(|d| class_histogram(table, d))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for chi in table.characters().into_iter().filter(|c| !c.is_principal) {
        let l = LPolynomial::from_histograms(&chi, &hists)?;
        if l.vanishing_order > 0 {
            return Err(Error::CentralZero {
                label: chi.label(),
                modulus: l.central.norm(),
            });
        }
        out.push((chi, l));
    }
    Ok(out)
}

/// Per-class sums `Σ_{deg P ≤ n, P ≡ A} q^{-deg P/2}` for `n = 1..=n_max`,
/// with `S_A = all − Φ·class_A` and its predicted slope in `log n`:
/// `(|G/G²| − 1)/2` for a square class, `−1/2` otherwise.
pub fn ff_bias_series(modulus: &PolyFq, n_max: u64) -> Result<CheckpointSeries> {
    let q = modulus.field();
    let table = unit_class_table(modulus)?;
    let central = ff_central_values(&table)?;
    let t = table.t()?;
    let formula = case_formula_t(q, &table.modulus)?;
    let grid = CheckpointGrid::degrees(1, n_max)?;

    let h = table.units.len();
    let mut slot = vec![usize::MAX; table.code_count()];
    for (i, &u) in table.units.iter().enumerate() {
        slot[u as usize] = i;
    }
    let rows = degree_sums(q, &grid, h + 2, |p, sums| {
        let w = (q as f64).powf(-(p.degree().unwrap() as f64) / 2.0);
        let code = table.code_of(p)?;
        let col = if table.is_unit_code(code) {
            slot[code as usize]
        } else {
            h
        };
        sums[col].add(w);
        sums[h + 1].add(w);
        Ok(())
    })?;

    let class_names: Vec<String> = table
        .units
        .iter()
        .map(|&u| format!("class:{}", table.residue(u)))
        .collect();
    let mut series = CheckpointSeries::new(grid, "n");
    for (name, values) in class_names
        .iter()
        .cloned()
        .chain([EXCLUDED_COLUMN.to_string(), ALL_COLUMN.to_string()])
        .zip(rows)
    {
        series.push_column(name, values)?;
    }
    let phi = table.phi as f64;
    let square_slope = ((1u64 << t) as f64 - 1.0) / 2.0;
    for (&u, name) in table.units.iter().zip(&class_names) {
        let combo = LinearCombo::new(format!("bias:{}", table.residue(u)))
            .term(ALL_COLUMN, 1.0)
            .term(name.clone(), -phi);
        let slope = if table.is_square_code(u) { square_slope } else { -0.5 };
        series = residual_series(&series, &combo, slope, Scale::LogN)?;
    }
    series.set_meta("q", q);
    series.set_meta("modulus", table.modulus.coefficient_string());
    series.set_meta("phi", table.phi);
    series.set_meta("t", t);
    match formula {
        Some(f) => {
            series.set_meta("t_case_formula", f);
            series.set_meta("t_formula_disagrees", f != t);
        }
        None => series.set_meta("t_case_formula", "n/a"),
    }
    let min_central = central
        .iter()
        .map(|(_, l)| l.central.norm())
        .fold(f64::INFINITY, f64::min);
    if min_central.is_finite() {
        series.set_meta("min_central_modulus", min_central);
    }
    Ok(series)
}

/// Partial Euler products `Π_{deg P ≤ n} (1 − χ(P) q^{-deg P/2})^{-1}` for
/// `n = 0..=n_max`, computed in log space, against `√2^ν · L(1/2, χ)`.
///
/// When `L` vanishes at the centre the product is scaled by `n^m` and no
/// target column is written.
pub fn ff_euler_product(chi: &FfCharacter, n_max: u64) -> Result<CheckpointSeries> {
    let l = LPolynomial::from_histograms(
        chi,
        &(0..chi.table().deg)
            .map(|d| class_histogram(chi.table(), d))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let table = chi.table();
    let q = table.q;
    let grid = CheckpointGrid::degrees(0, n_max)?;
    let rows = degree_sums(q, &grid, 2, |p, sums| {
        let code = table.code_of(p)?;
        if let Some(k) = chi.value_exponent(code) {
            let z =
                crate::dirichlet::root_of_unity(k, table.phi) * (q as f64).powf(-(p.degree().unwrap() as f64) / 2.0);
            let log = -(Complex64::new(1.0, 0.0) - z).ln();
            sums[0].add(log.re);
            sums[1].add(log.im);
        }
        Ok(())
    })?;
    let m = l.vanishing_order;
    let product: Vec<Complex64> = grid
        .points
        .iter()
        .enumerate()
        .map(|(i, &n)| Complex64::new(rows[0][i], rows[1][i]).exp() * (n as f64).powi(m as i32))
        .collect();
    let n = grid.len();
    let mut series = CheckpointSeries::new(grid, "n");
    series.push_column("product_re", product.iter().map(|z| z.re).collect())?;
    series.push_column("product_im", product.iter().map(|z| z.im).collect())?;
    series.push_column("log_re", rows[0].clone())?;
    series.push_column("log_im", rows[1].clone())?;
    if m == 0 {
        let target = l.central * 2f64.sqrt().powi(chi.nu as i32);
        series.push_column("target_re", vec![target.re; n])?;
        series.push_column("target_im", vec![target.im; n])?;
        series.push_column(
            "relative_deviation",
            product.iter().map(|z| (z - target).norm() / target.norm()).collect(),
        )?;
        series.set_meta("target", format!("{} {}", target.re, target.im));
    }
    series.set_meta("character", chi.label());
    series.set_meta("nu", chi.nu);
    series.set_meta("vanishing_order", m);
    series.set_meta("central_re", l.central.re);
    series.set_meta("central_im", l.central.im);
    Ok(series)
}
