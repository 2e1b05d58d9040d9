//! Executes a validated [`Plan`] and writes its CSVs and manifest.

use std::path::PathBuf;
use std::sync::Arc;

use chebias_core::dirichlet::{CosetBias, CyclotomicBias, EulerProductAccumulator};
use chebias_core::function_field::{ff_bias_series, ff_euler_product, unit_class_table};
use chebias_core::quadratic::{PrincipalBias, SplittingBias};
use chebias_core::summation::{
    density_report, prediction_column, residual_column, ResidueClassifier, SeriesAccumulator, SeriesConsumer,
    ALL_COLUMN,
};
use chebias_core::tau::{load_or_compute, DeltaExpansion, TauBias};
use chebias_core::{residual_series, CheckpointGrid, CheckpointSeries, LinearCombo, Scale};

use crate::emit::{write_outputs, EngineRecord, GridRecord, RunManifest, SeriesOutput};
use crate::error::{CliError, CliResult};
use crate::resume::ResumableRun;
use crate::spec::{parse_character, DirichletMode, ExperimentSpec, Plan, Task};

/// Result of a run: the manifest path and the emitted series.
#[derive(Debug)]
pub struct RunReport {
    pub manifest: PathBuf,
    pub outputs: Vec<SeriesOutput>,
}

fn combo_columns(name: &str) -> Vec<String> {
    vec![name.to_string(), prediction_column(name), residual_column(name)]
}

fn class_column(a: u64) -> String {
    format!("a={a}")
}

/// Everything that has to be set up before the sieve starts, so that
/// invalid characters or central zeros surface before any work.
enum Prepared {
    Dirichlet {
        q: u64,
        mode: DirichletMode,
        bias: CyclotomicBias,
    },
    Euler(Box<EulerProductAccumulator>),
    Split(Box<SplittingBias>),
    Class(Box<PrincipalBias>),
    Tau(Box<TauBias>),
    Density {
        q: u64,
        groups: Vec<Vec<u64>>,
        bias: CosetBias,
    },
}

fn prepare(plan: &Plan, grid: &CheckpointGrid) -> CliResult<Prepared> {
    Ok(match &plan.task {
        Task::DirichletBias { q, mode } => Prepared::Dirichlet {
            q: *q,
            mode: mode.clone(),
            bias: CyclotomicBias::new(*q)?,
        },
        Task::EulerProduct { character } => {
            let chi = parse_character(character)?;
            Prepared::Euler(Box::new(EulerProductAccumulator::new(chi, grid.clone(), true)?))
        }
        Task::SplitBias { d } => Prepared::Split(Box::new(SplittingBias::new(*d, grid.clone())?)),
        Task::ClassBias { d } => Prepared::Class(Box::new(PrincipalBias::new(*d, grid.clone())?)),
        Task::TauBias { cache } => {
            let order = plan.sieve.limit as usize;
            let delta = match cache {
                Some(path) => load_or_compute(order, path)?,
                None => DeltaExpansion::new(order)?,
            };
            Prepared::Tau(Box::new(TauBias::new(Arc::new(delta), grid.clone())?))
        }
        Task::Density { q, groups } => Prepared::Density {
            q: *q,
            groups: groups.clone(),
            bias: CosetBias::new(*q, groups.clone())?,
        },
        Task::FfBias { .. } | Task::FfEuler { .. } => unreachable!("function-field kinds do not sieve"),
    })
}

type Consumers = Vec<(String, Box<dyn SeriesConsumer>)>;

fn consumers(prepared: &Prepared, grid: &CheckpointGrid) -> CliResult<Consumers> {
    let one = |name: &str, c: Box<dyn SeriesConsumer>| vec![(name.to_string(), c)];
    Ok(match prepared {
        Prepared::Dirichlet { q, .. } => one(
            "weighted",
            Box::new(SeriesAccumulator::new(
                ResidueClassifier::units(*q)?,
                0.5,
                grid.clone(),
            )?),
        ),
        Prepared::Euler(acc) => one("euler", Box::new((**acc).clone())),
        Prepared::Split(acc) => one("split", Box::new((**acc).clone())),
        Prepared::Class(acc) => one("class", Box::new((**acc).clone())),
        Prepared::Tau(acc) => one("tau", Box::new((**acc).clone())),
        Prepared::Density { q, groups, .. } => {
            let classifier = ResidueClassifier::grouped(*q, groups.clone())?;
            vec![
                (
                    "weighted".to_string(),
                    Box::new(SeriesAccumulator::new(classifier.clone(), 0.5, grid.clone())?) as Box<dyn SeriesConsumer>,
                ),
                (
                    "counts".to_string(),
                    Box::new(SeriesAccumulator::new(classifier, 0.0, grid.clone())?),
                ),
            ]
        }
    })
}

fn finish(prepared: Prepared, mut series: Vec<(String, CheckpointSeries)>) -> CliResult<Vec<SeriesOutput>> {
    let mut take = |name: &str| -> CheckpointSeries {
        let i = series.iter().position(|(n, _)| n == name).expect("consumer present");
        series.remove(i).1
    };
    Ok(match prepared {
        Prepared::Dirichlet { q, mode, bias } => {
            let weighted = take("weighted");
            match mode {
                DirichletMode::Pair(a, b) => {
                    let name = format!("diff:{b}-{a}");
                    let combo = LinearCombo::difference(&name, &class_column(b), &class_column(a));
                    let mut s = residual_series(&weighted, &combo, bias.pair_slope(a, b)?, Scale::LogLog)?;
                    s.set_meta("q", q);
                    s.set_meta("t", bias.t());
                    let mut columns = vec![class_column(a), class_column(b)];
                    columns.extend(combo_columns(&name));
                    vec![SeriesOutput {
                        stem: format!("dirichlet-bias_q{q}_pair{b}-{a}"),
                        series: s,
                        columns,
                    }]
                }
                DirichletMode::Classes(classes) => {
                    let phi = bias.coset_bias().cosets().len() as f64;
                    classes
                        .into_iter()
                        .map(|a| {
                            let name = format!("S:{a}");
                            let combo = LinearCombo::new(&name)
                                .term(ALL_COLUMN, 1.0)
                                .term(class_column(a), -phi);
                            let slope = bias.class_slope(a)?.total;
                            let mut s = residual_series(&weighted, &combo, slope, Scale::LogLog)?;
                            s.set_meta("q", q);
                            s.set_meta("class", a);
                            s.set_meta("t", bias.t());
                            Ok(SeriesOutput {
                                stem: format!("dirichlet-bias_q{q}_a{a}"),
                                series: s,
                                columns: combo_columns(&name),
                            })
                        })
                        .collect::<CliResult<Vec<_>>>()?
                }
            }
        }
        Prepared::Euler(acc) => {
            let label = acc.character().label().replace([':', ','], "_");
            vec![SeriesOutput {
                stem: format!("euler-product_{label}"),
                series: take("euler"),
                columns: vec![],
            }]
        }
        Prepared::Split(_) => {
            let s = take("split");
            let d = s.metadata["discriminant"].clone();
            vec![SeriesOutput {
                stem: format!("split-bias_d{d}"),
                series: s,
                columns: vec![],
            }]
        }
        Prepared::Class(_) => {
            let s = take("class");
            let d = s.metadata["discriminant"].clone();
            vec![SeriesOutput {
                stem: format!("class-bias_d{d}"),
                series: s,
                columns: vec![],
            }]
        }
        Prepared::Tau(_) => vec![SeriesOutput {
            stem: "tau-bias".into(),
            series: take("tau"),
            columns: vec![],
        }],
        Prepared::Density { q, groups, bias } => {
            let weighted = take("weighted");
            let counts = take("counts");
            let report = density_report(&counts)?;
            let index = bias.index() as f64;
            let mut out = weighted.clone();
            let mut columns = Vec::new();
            for (label, group) in weighted.labels.clone().iter().zip(&groups) {
                let tag = label.column.trim_start_matches("a=").to_string();
                let name = format!("S:{tag}");
                let combo = LinearCombo::new(&name)
                    .term(ALL_COLUMN, 1.0)
                    .term(label.column.clone(), -index);
                out = residual_series(&out, &combo, bias.class_slope(group[0])?.total, Scale::LogLog)?;
                columns.extend(combo_columns(&name));
            }
            for (i, label) in report.labels.iter().enumerate() {
                let name = format!("share:{}", label.trim_start_matches("a="));
                out.push_column(&name, report.ratios[i].iter().map(|r| r.unwrap_or(f64::NAN)).collect())?;
                out.set_meta(format!("{name}.expected"), report.expected[i]);
                columns.push(name);
            }
            out.set_meta("q", q);
            out.set_meta("index", bias.index());
            vec![SeriesOutput {
                stem: format!("density_q{q}"),
                series: out,
                columns,
            }]
        }
    })
}

fn function_field_outputs(task: &Task) -> CliResult<Vec<SeriesOutput>> {
    Ok(match task {
        Task::FfBias { modulus, n_max } => {
            let s = ff_bias_series(modulus, *n_max)?;
            vec![SeriesOutput {
                stem: format!(
                    "ff-bias_q{}_m{}",
                    modulus.field(),
                    modulus.coefficient_string().replace(' ', "")
                ),
                series: s,
                columns: vec![],
            }]
        }
        Task::FfEuler {
            modulus,
            character,
            n_max,
        } => {
            let table = unit_class_table(modulus)?;
            let chars = table.characters();
            let chi = match character {
                Some(i) => chars
                    .get(*i)
                    .filter(|c| !c.is_principal)
                    .ok_or_else(|| CliError::param("character", format!("no nonprincipal character with index {i}")))?,
                None => chars
                    .iter()
                    .find(|c| c.is_real && !c.is_principal)
                    .or_else(|| chars.iter().find(|c| !c.is_principal))
                    .ok_or_else(|| CliError::param("modulus", "unit group is trivial; no nonprincipal character"))?,
            };
            let s = ff_euler_product(chi, *n_max)?;
            vec![SeriesOutput {
                stem: format!(
                    "ff-euler_q{}_m{}",
                    modulus.field(),
                    modulus.coefficient_string().replace(' ', "")
                ),
                series: s,
                columns: vec![],
            }]
        }
        _ => unreachable!("sieved kinds are handled by the prime stream"),
    })
}

/// Runs the experiment and writes CSVs plus the manifest into `plan.out`.
pub fn run(spec: &ExperimentSpec) -> CliResult<RunReport> {
    let plan = spec.plan()?;
    let started = chrono::Utc::now().to_rfc3339();
    let (outputs, engine) = match &plan.grid {
        None => (function_field_outputs(&plan.task)?, None),
        Some(grid) => {
            let prepared = prepare(&plan, grid)?;
            let mut run = ResumableRun::new(&plan.out, spec.fingerprint(), consumers(&prepared, grid)?);
            let start = if plan.resume { run.restore()? } else { 2 };
            let (series, last) = run.run(&plan.sieve, start)?;
            let engine = EngineRecord {
                limit: plan.sieve.limit,
                segment_size: plan.sieve.segment_size,
                threads: plan.sieve.thread_count,
                resumed_from: plan.resume.then_some(start),
                last_boundary: last,
            };
            (finish(prepared, series)?, Some(engine))
        }
    };
    let grid = plan.grid.as_ref().map(|g| GridRecord {
        x_min: g.x_min,
        x_max: g.x_max,
        ratio: g.ratio,
        points: g.len(),
    });
    let manifest = write_outputs(&plan.out, &outputs, |records| RunManifest {
        schema: crate::emit::SCHEMA_VERSION,
        tool: "chebias".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        spec: spec.clone(),
        started,
        finished: chrono::Utc::now().to_rfc3339(),
        grid,
        engine,
        outputs: records,
    })?;
    Ok(RunReport { manifest, outputs })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::fs;
    use std::path::Path;

    use chebias_core::SieveConfig;

    use super::*;
    use crate::spec::Kind;

    fn spec(kind: Kind, out: &Path, extra: &[(&str, &str)]) -> ExperimentSpec {
        let mut flags = vec![("out", Some(out.display().to_string()))];
        flags.extend(extra.iter().map(|(k, v)| (*k, Some(v.to_string()))));
        ExperimentSpec::new(kind, BTreeMap::new(), flags).unwrap()
    }

    /// Feeds the first part of the prime stream and stops without
    /// finishing, as an interrupted run would.
    fn interrupt(spec: &ExperimentSpec, stop: u64) {
        let plan = spec.plan().unwrap();
        let grid = plan.grid.as_ref().unwrap();
        let prepared = prepare(&plan, grid).unwrap();
        let mut run = ResumableRun::new(&plan.out, spec.fingerprint(), consumers(&prepared, grid).unwrap());
        let partial = SieveConfig {
            limit: stop,
            ..plan.sieve
        };
        run.advance(&partial, 2).unwrap();
    }

    fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
        fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "csv"))
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().into_owned(),
                    fs::read(&p).unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn resumed_run_matches_fresh_run() {
        let dir = tempfile::tempdir().unwrap();
        let cases: [(Kind, &[(&str, &str)]); 3] = [
            (
                Kind::DirichletBias,
                &[("q", "8"), ("limit", "2000000"), ("segment-size", "65536")],
            ),
            (
                Kind::ClassBias,
                &[("d", "-20"), ("limit", "1000000"), ("segment-size", "65536")],
            ),
            (
                Kind::Density,
                &[("q", "7"), ("groups", "1,6;2,5;3,4"), ("limit", "1000000")],
            ),
        ];
        for (i, (kind, extra)) in cases.into_iter().enumerate() {
            let fresh = dir.path().join(format!("fresh{i}"));
            run(&spec(kind, &fresh, extra)).unwrap();

            let resumed = dir.path().join(format!("resumed{i}"));
            interrupt(&spec(kind, &resumed, extra), 400_000);
            assert!(resumed.join(crate::resume::STATE_NAME).exists());
            let mut flags = extra.to_vec();
            flags.extend([("resume", "true"), ("threads", "3")]);
            let report = run(&spec(kind, &resumed, &flags)).unwrap();
            assert!(!resumed.join(crate::resume::STATE_NAME).exists());

            let manifest = fs::read_to_string(report.manifest).unwrap();
            assert!(manifest.contains("\"resumed_from\": 4"), "{manifest}");
            assert_eq!(csv_files(&fresh), csv_files(&resumed), "{kind}");
        }
    }

    #[test]
    fn resume_rejects_other_parameters() {
        let dir = tempfile::tempdir().unwrap();
        interrupt(
            &spec(Kind::DirichletBias, dir.path(), &[("q", "4"), ("limit", "100000")]),
            50_000,
        );
        let other = spec(
            Kind::DirichletBias,
            dir.path(),
            &[("q", "5"), ("limit", "100000"), ("resume", "true")],
        );
        assert!(matches!(run(&other), Err(CliError::Resume(_))));
    }

    #[test]
    fn resume_without_state_fails() {
        let dir = tempfile::tempdir().unwrap();
        let s = spec(
            Kind::SplitBias,
            dir.path(),
            &[("d", "-4"), ("limit", "10000"), ("resume", "true")],
        );
        assert!(matches!(run(&s), Err(CliError::Resume(_))));
    }
}
