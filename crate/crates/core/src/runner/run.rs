use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use ndarray::{Array1, Array2};
use rayon::prelude::*;

use super::config::{Backend, ExperimentConfig, ExperimentKind, ScheduleKind, SweepParamName, TopologySpec};
use super::csv::{population_csv, render_table, sweep_csv, write_file, format_number};
use super::manifest::{CheckRecord, RunManifest, MANIFEST_FILE};
use super::plot::line_plot_svg;
use super::verify::verify_suite;
use super::RunnerError;
use crate::analysis::{
    concurrence, dfs_report, populations, von_neumann_entropy, DfsVerdict, DFS_TOL_LINDBLAD, DFS_TOL_STRUCTURAL,
};
use crate::bath::{
    build_coupling_operators, dephasing_rate, dominant_gap, BathSpec, SpectralDensity,
};
use crate::dynamics::{
    evolve_annealing, evolve_closed, evolve_exact_bath, evolve_lindblad, DensityMatrix, Schedule, ScheduleFamily,
    Trajectory, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
use crate::linalg::{HermitianOperator, C64};
use crate::model::{
    build_ising_hamiltonian, build_rwa_hamiltonian, ground_manifold, parse_basis_label, spins_to_index,
    transverse_driver, IsingProblem, QubitNetwork, Topology, TopologyClass, MAX_BRUTE_FORCE_SPINS,
};
use crate::spectra::{eigh, linspace, sweep_spectrum, SweepParam};
use crate::symmetry::{bell_basis, default_basis, group_basis_3, BasisTransform};

/// Tolerance for the closed-run energy drift, relative to `‖H‖`.
const ENERGY_DRIFT_REL: f64 = 1e-8;
const PURITY_DRIFT_TOL: f64 = 1e-8;
const COMPLETENESS_TOL: f64 = 1e-8;
/// Slack for discrete purity monotonicity between samples.
const PURITY_STEP_TOL: f64 = 1e-12;

/// Files and findings accumulated while a run executes.
#[derive(Default)]
struct Outcome {
    files: Vec<(String, String)>,
    checks: Vec<CheckRecord>,
    results: BTreeMap<String, f64>,
    warnings: Vec<String>,
}

impl Outcome {
    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }
}

/// Executes `config`, writing every output into `output_dir` and the
/// manifest last. A manifest is written for failed runs too, before the
/// error is returned.
pub fn run(config: &ExperimentConfig, output_dir: &Path) -> Result<RunManifest, RunnerError> {
    config.validate()?;
    let start = Instant::now();
    let executed = execute(config);
    let mut manifest = RunManifest {
        config: config.clone(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_s: 0.0,
        outputs: Vec::new(),
        checks: Vec::new(),
        results: BTreeMap::new(),
        warnings: Vec::new(),
        passed: false,
        error: None,
    };
    let result = match executed {
        Ok(outcome) => {
            for (name, contents) in &outcome.files {
                write_file(&output_dir.join(name), contents)?;
                manifest.outputs.push(name.clone());
            }
            manifest.passed = outcome.checks.iter().all(|c| c.passed);
            manifest.checks = outcome.checks;
            manifest.results = outcome.results;
            manifest.warnings = outcome.warnings;
            if manifest.passed {
                Ok(())
            } else {
                let failed: Vec<&str> =
                    manifest.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Err(RunnerError::ChecksFailed(failed.join(", ")))
            }
        }
        Err(e) => {
            manifest.error = Some(e.to_string());
            Err(e)
        }
    };
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_file(&output_dir.join(MANIFEST_FILE), &(json + "\n"))?;
    result.map(|()| manifest)
}

fn execute(config: &ExperimentConfig) -> Result<Outcome, RunnerError> {
    let mut out = Outcome::default();
    match config.kind {
        ExperimentKind::SpectrumSweep => spectrum_sweep(config, &mut out)?,
        ExperimentKind::Evolve => {
            let topology = build_topology(config)?;
            let report = evolve_one(config, &topology)?;
            if config.plot {
                let series = &report.populations;
                let cols: Vec<(String, Vec<f64>)> =
                    series.labels.iter().map(|l| (l.clone(), series.column(l).unwrap_or_default())).collect();
                out.file("populations.svg", line_plot_svg("populations", &series.times, &cols));
            }
            out.file("populations.csv", population_csv(&report.populations));
            out.file("observables.csv", report.observables);
            out.file("dfs_report.csv", dfs_table(&[("", &report.dfs)]));
            out.checks.extend(report.checks);
            out.results.extend(report.results);
            out.warnings.extend(report.warnings);
        }
        ExperimentKind::DfsScan => dfs_scan(config, &mut out)?,
        ExperimentKind::Anneal => anneal(config, &mut out)?,
        ExperimentKind::Verify => {
            let checks = verify_suite()?;
            let rows = checks.iter().map(|c| {
                vec![c.name.clone(), format!("{:e}", c.value), format!("{:e}", c.limit), c.passed.to_string()]
            });
            let header = ["check", "value", "limit", "passed"].map(String::from);
            out.file("verify.csv", render_table(&header, rows));
            out.checks = checks;
        }
    }
    Ok(out)
}

fn spectrum_sweep(config: &ExperimentConfig, out: &mut Outcome) -> Result<(), RunnerError> {
    let s = config.sweep.expect("validated");
    let topology = build_topology(config)?;
    let (param, fixed) = match s.param {
        SweepParamName::K => (SweepParam::K, config.system.j),
        SweepParamName::J => (SweepParam::J, config.system.k),
    };
    let grid = linspace(s.from, s.to, s.points);
    let table = sweep_spectrum(&topology, param, fixed, &grid)?;
    if config.plot {
        let levels = table.rows.first().map_or(0, Vec::len);
        let cols: Vec<(String, Vec<f64>)> =
            (0..levels).map(|k| (format!("E{}", k + 1), table.rows.iter().map(|r| r[k]).collect())).collect();
        out.file("spectrum.svg", line_plot_svg("spectrum", &table.grid, &cols));
    }
    out.file("spectrum.csv", sweep_csv(&table));
    Ok(())
}

pub(crate) fn build_topology(config: &ExperimentConfig) -> Result<Topology, RunnerError> {
    let n = config.n_qubits();
    Ok(match &config.topology {
        Some(TopologySpec::Label(l)) => Topology::representative(TopologyClass::from_label(l).ok_or_else(|| {
            RunnerError::Validation { path: "topology".into(), message: format!("unknown topology '{l}'") }
        })?),
        Some(TopologySpec::Edges { edges }) => Topology::new(n, edges.iter().copied())?,
        None => Topology::complete(n),
    })
}

fn build_network(config: &ExperimentConfig, topology: &Topology) -> Result<QubitNetwork, RunnerError> {
    let n = topology.n_qubits();
    let delta = config.system.delta.clone().unwrap_or_else(|| vec![0.0; n]);
    Ok(QubitNetwork::new(delta, vec![config.system.k; n], topology.coupling_matrix(config.system.j))?)
}

fn basis_for(n: usize) -> BasisTransform {
    default_basis(n)
}

/// Density matrix for a named initial state.
///
/// Accepts the Bell labels `e1..e4` (two qubits), the group-basis labels
/// `f0..f7` and the quartet states `f32p12 = (|0XX⟩+|X0X⟩+|XX0⟩)/√3`,
/// `f32m12 = (|00X⟩+|0X0⟩+|X00⟩)/√3` (three qubits), `ground` (lowest
/// eigenstate of `h`) and computational strings such as `"0X0"`.
pub fn resolve_initial_state(name: &str, n_qubits: usize, h: &HermitianOperator) -> crate::Result<DensityMatrix> {
    let invalid = |msg: String| crate::Error::InvalidArgument(msg);
    let from_basis = |b: BasisTransform| -> Option<crate::Result<DensityMatrix>> {
        b.index_of(name).map(|k| DensityMatrix::from_pure(&b.vector(k)))
    };
    match name {
        "ground" => return DensityMatrix::from_pure(&eigh(h)?.ground_state()),
        "f32p12" | "f32m12" if n_qubits == 3 => {
            let idx: [usize; 3] = if name == "f32p12" { [3, 5, 6] } else { [1, 2, 4] };
            let mut v = Array1::<C64>::zeros(8);
            for i in idx {
                v[i] = C64::new(1.0 / 3f64.sqrt(), 0.0);
            }
            return DensityMatrix::from_pure(&v);
        }
        _ => {}
    }
    if n_qubits == 2 {
        if let Some(r) = from_basis(bell_basis()) {
            return r;
        }
    }
    if n_qubits == 3 {
        if let Some(r) = from_basis(group_basis_3()) {
            return r;
        }
    }
    if name.chars().all(|c| c == '0' || c == 'X') && !name.is_empty() {
        let (idx, n) = parse_basis_label(name)?;
        if n != n_qubits {
            return Err(invalid(format!("state '{name}' has {n} qubits, system has {n_qubits}")));
        }
        return DensityMatrix::basis_state(idx, 1 << n);
    }
    Err(invalid(format!("unknown initial state '{name}' for {n_qubits} qubits")))
}

struct EvolveReport {
    populations: crate::analysis::PopulationSeries,
    observables: String,
    dfs: Vec<crate::analysis::DfsReport>,
    checks: Vec<CheckRecord>,
    results: BTreeMap<String, f64>,
    warnings: Vec<String>,
}

fn evolve_one(config: &ExperimentConfig, topology: &Topology) -> Result<EvolveReport, RunnerError> {
    let n = topology.n_qubits();
    let net = build_network(config, topology)?;
    let h = build_rwa_hamiltonian(&net)?;
    let name = config.initial_state.as_deref().expect("validated");
    let rho0 = resolve_initial_state(name, n, &h).map_err(|e| RunnerError::Validation {
        path: "initial_state".into(),
        message: e.to_string(),
    })?;
    let time = config.time.expect("validated");
    let bath = config.bath.clone().unwrap_or_default();
    let mut results = BTreeMap::new();

    let traj: Trajectory = match config.backend {
        Backend::Closed => evolve_closed(&h, &rho0, time.t_end, time.dt)?,
        Backend::Lindblad => {
            let gamma = match bath.gamma {
                Some(g) => g,
                None => {
                    let spec = BathSpec::new(
                        SpectralDensity::new(bath.family, bath.alpha, bath.omega_c)?,
                        bath.temperature,
                        bath.coupling_mode,
                        bath.coupling_scale,
                    )?;
                    let omega_ref = match bath.omega_ref {
                        Some(w) => w,
                        None => dominant_gap(&eigh(&h)?.eigenvalues).ok_or_else(|| RunnerError::Validation {
                            path: "bath.omega_ref".into(),
                            message: "spectrum is fully degenerate; give omega_ref explicitly".into(),
                        })?,
                    };
                    results.insert("omega_ref".to_string(), omega_ref);
                    dephasing_rate(&spec, omega_ref)?
                }
            };
            results.insert("gamma".to_string(), gamma);
            let ops: Vec<_> = build_coupling_operators(bath.coupling_mode, n)?
                .into_iter()
                .map(|b| (b.as_operator(), gamma))
                .collect();
            evolve_lindblad(&h, &ops, &rho0, time.t_end, time.dt)?
        }
        Backend::ExactBath => {
            evolve_exact_bath(&net, &bath.modes, bath.coupling_mode, &rho0, bath.temperature, time.t_end, time.dt)?
        }
    };

    let basis = basis_for(n);
    let pops = populations(&traj, &basis)?;
    let mut checks = state_checks(&traj);
    checks.push(CheckRecord::at_most("population completeness", pops.completeness_error(), COMPLETENESS_TOL));
    match config.backend {
        Backend::Closed => {
            let limit = ENERGY_DRIFT_REL * h.norm();
            checks.push(CheckRecord::at_most("energy drift", traj.energy_drift(&h)?, limit));
            checks.push(CheckRecord::at_most("purity drift", traj.purity_drift(), PURITY_DRIFT_TOL));
        }
        Backend::Lindblad => {
            let non_increasing = traj.purity_non_increasing(PURITY_STEP_TOL);
            checks.push(CheckRecord::at_most("purity increase", if non_increasing { 0.0 } else { 1.0 }, 0.0));
        }
        Backend::ExactBath => {}
    }

    let mut obs_header = vec!["t".to_string(), "purity".to_string(), "entropy_nats".to_string()];
    if n == 2 {
        obs_header.push("concurrence".to_string());
    }
    let mut rows = Vec::with_capacity(traj.len());
    for (s, &t) in traj.states().iter().zip(traj.times()) {
        let mut row = vec![format_number(t), format_number(s.purity()), format_number(von_neumann_entropy(s)?)];
        if n == 2 {
            row.push(format_number(concurrence(s)?));
        }
        rows.push(row);
    }
    let observables = render_table(&obs_header, rows);

    let default_tol = if config.backend == Backend::Closed { DFS_TOL_STRUCTURAL } else { DFS_TOL_LINDBLAD };
    let dfs_cfg = config.dfs.clone().unwrap_or(super::config::DfsConfig { groups: Vec::new(), tol: None });
    let tol = dfs_cfg.tol.unwrap_or(default_tol);
    let groups: Vec<String> = if dfs_cfg.groups.is_empty() {
        basis.partition().iter().map(|(g, _)| g.clone()).collect()
    } else {
        dfs_cfg.groups.clone()
    };
    let dfs = groups
        .iter()
        .map(|g| {
            dfs_report(&traj, &basis, g, tol).map_err(|e| match e {
                crate::Error::UnknownGroup(_) => RunnerError::Validation { path: "dfs.groups".into(), message: e.to_string() },
                e => e.into(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    for r in &dfs {
        results.insert(format!("max_leakage.{}", r.group), r.max_leakage);
    }

    Ok(EvolveReport { populations: pops, observables, dfs, checks, results, warnings: traj.warnings().to_vec() })
}

fn state_checks(traj: &Trajectory) -> Vec<CheckRecord> {
    let c = traj.checks();
    vec![
        CheckRecord::at_most("trace", c.max_trace_error, TRACE_TOL),
        CheckRecord::at_most("hermiticity", c.max_hermiticity_error, HERMITICITY_TOL),
        CheckRecord::at_least("positivity", c.min_eigenvalue, -POSITIVITY_TOL),
    ]
}

fn dfs_table(sets: &[(&str, &Vec<crate::analysis::DfsReport>)]) -> String {
    let scan = sets.iter().any(|(t, _)| !t.is_empty());
    let mut header: Vec<String> = Vec::new();
    if scan {
        header.push("topology".into());
    }
    header.extend(["group", "max_leakage", "verdict", "violation_time", "tol"].map(String::from));
    let rows = sets.iter().flat_map(|(topo, reports)| {
        reports.iter().map(move |r| {
            let (verdict, time) = match r.verdict {
                DfsVerdict::Held => ("held".to_string(), "-".to_string()),
                DfsVerdict::Violated { time } => ("violated".to_string(), format_number(time)),
            };
            let mut row = Vec::new();
            if scan {
                row.push(topo.to_string());
            }
            row.extend([r.group.clone(), format!("{:.6e}", r.max_leakage), verdict, time, format!("{:e}", r.tol)]);
            row
        })
    });
    render_table(&header, rows)
}

fn dfs_scan(config: &ExperimentConfig, out: &mut Outcome) -> Result<(), RunnerError> {
    let classes = [TopologyClass::A, TopologyClass::B, TopologyClass::C, TopologyClass::D];
    let reports = classes
        .par_iter()
        .map(|&class| evolve_one(config, &Topology::representative(class)).map(|r| (class, r)))
        .collect::<Result<Vec<_>, _>>()?;
    let sets: Vec<(&str, &Vec<_>)> = reports.iter().map(|(c, r)| (c.label(), &r.dfs)).collect();
    out.file("dfs_scan.csv", dfs_table(&sets));
    for (class, r) in reports {
        let tag = class.label();
        out.checks.extend(r.checks.into_iter().map(|mut c| {
            c.name = format!("{tag}: {}", c.name);
            c
        }));
        out.results.extend(r.results.into_iter().map(|(k, v)| (format!("{tag}.{k}"), v)));
        out.warnings.extend(r.warnings);
    }
    Ok(())
}

fn anneal(config: &ExperimentConfig, out: &mut Outcome) -> Result<(), RunnerError> {
    let n = config.n_qubits();
    let h = config.system.h.clone().expect("validated");
    let rows = config.system.ising_j.as_ref().expect("validated");
    let j = Array2::from_shape_fn((n, n), |(a, b)| rows[a][b]);
    let problem = IsingProblem::classical(h, j)?;
    let h_f = transverse_driver(n)?;
    let h_p = build_ising_hamiltonian(&problem)?;
    let sc = config.schedule.clone().expect("validated");
    let family = match sc.family {
        ScheduleKind::Linear => ScheduleFamily::Linear,
        ScheduleKind::Cosine => ScheduleFamily::Cosine,
    };
    let schedule = Schedule::new(sc.total_time, family)?;
    let dt = config.time.map_or(crate::dynamics::DEFAULT_DT, |t| t.dt);
    let traj = evolve_annealing(&h_f, &h_p, &schedule, None, dt)?;

    let manifold: Vec<usize> = if n <= MAX_BRUTE_FORCE_SPINS {
        ground_manifold(&problem, 1e-9)?.iter().map(|s| spins_to_index(s)).collect()
    } else {
        Vec::new()
    };
    let header = ["t", "gamma", "lambda", "energy", "ground_population"].map(String::from);
    let mut table = Vec::with_capacity(traj.len());
    let mut final_pop = 0.0;
    for (s, &t) in traj.states().iter().zip(traj.times()) {
        let (g, l) = schedule.weights(t);
        let e = g * s.expectation(&h_f)? + l * s.expectation(&h_p)?;
        final_pop = manifold.iter().map(|&i| s.matrix()[[i, i]].re).sum();
        table.push(vec![format_number(t), format_number(g), format_number(l), format_number(e), format_number(final_pop)]);
    }
    out.file("anneal.csv", render_table(&header, table));
    let pops = populations(&traj, &BasisTransform::computational(n))?;
    out.file("populations.csv", population_csv(&pops));
    out.results.insert("final_ground_population".into(), final_pop);
    out.checks.extend(state_checks(&traj));
    out.checks.push(CheckRecord::at_most("population completeness", pops.completeness_error(), COMPLETENESS_TOL));
    Ok(())
}
