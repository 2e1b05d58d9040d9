use chebias_core::dirichlet::{drh_residual, partial_euler_product, DirichletCharacter};
use chebias_core::quadratic::splitting_bias_series;
use chebias_core::summation::residual_column;
use chebias_core::{make_grid, primes_up_to};

#[test]
fn drh_residual_is_minus_the_mod4_bias_residual() {
    let grid = make_grid(16, 1_000_000, 1.25).unwrap();
    let primes = primes_up_to(1_000_000);
    let chi = DirichletCharacter::parse("4:1").unwrap();
    let drh = drh_residual(&chi, &grid, primes.iter().copied()).unwrap();
    let bias = splitting_bias_series(-4, &grid, primes.iter().copied()).unwrap();
    let r = drh.column("residual_re").unwrap();
    // the splitting sums include the ramified prime 2 on the nonsplit side
    let b = bias.column(&residual_column("bias")).unwrap();
    for i in 0..grid.len() {
        assert!((r[i] + b[i] - 0.5f64.sqrt()).abs() < 1e-9, "x={}", grid.points[i]);
    }
}

#[test]
fn euler_product_approaches_target() {
    let grid = make_grid(16, 2_000_000, 2.0).unwrap();
    let chi = DirichletCharacter::parse("4:1").unwrap();
    let s = partial_euler_product(&chi, &grid, primes_up_to(2_000_000)).unwrap();
    let dev = s.column("relative_deviation").unwrap();
    assert!(*dev.last().unwrap() < 0.05);
    let t = s.column("target_re").unwrap()[0];
    assert!((t - 2f64.sqrt() * 0.667_691_457).abs() < 1e-8);
}
