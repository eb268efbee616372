use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::json;
use symsep::ground::{assemble_weighted, definetti_convergence, mean_field_minimize, KLocalSpec, MeanFieldConfig};
use symsep::io::{
    DecompositionJson, DensityMatrixJson, KLocalSpecJson, ObservableTupleJson, SymmetricDecompositionJson,
};
use symsep::ops::PureState;
use symsep::range::{detect_flat_segments, sample_pi_sym, theta_sym_sweep};
use symsep::separable::{ppt_min_eigenvalue, swap_witness, symmetrize_decomposition, DEFAULT_SYMMETRY_TOL};
use symsep::symmetric::{is_symmetric_state, Parity};
use symsep::Error;

use crate::output::{num, write_json, Csv, Manifest};
use crate::Common;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(String),
    Validation(String),
    Consistency(String),
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Consistency(_) => 4,
            CliError::Precondition(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Consistency(m) => write!(f, "internal consistency failure: {m}"),
            CliError::Precondition(m) => write!(f, "precondition violated: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Consistency(_) => CliError::Consistency(e.to_string()),
            Error::NonSymmetricState { .. } | Error::NonSymmetricTerm { .. } => CliError::Precondition(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn prepare_out(common: &Common) -> Result<()> {
    fs::create_dir_all(&common.out).map_err(|e| CliError::Io(format!("{}: {e}", common.out.display())))
}

fn mean_field_config(common: &Common, restarts: usize) -> Result<MeanFieldConfig> {
    let cfg = MeanFieldConfig {
        restarts,
        seed: common.seed,
        tol: common.tol.unwrap_or(MeanFieldConfig::default().tol),
        ..Default::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn record_config(manifest: &mut Manifest, cfg: &MeanFieldConfig) {
    manifest.set("restarts", cfg.restarts);
    manifest.set("max_iter", cfg.max_iter);
    manifest.set("damping", cfg.damping);
    manifest.set("mean_field_tol", cfg.tol);
}

pub fn range(
    common: &Common,
    directions: usize,
    samples: usize,
    restarts: usize,
    gap_tol: f64,
    length_tol: f64,
) -> Result<()> {
    let obs = read_json::<ObservableTupleJson>(&common.input)?.into_tuple()?;
    if obs.m() != 2 {
        return Err(CliError::Validation(format!("range needs exactly 2 observables, got {}", obs.m())));
    }
    if directions < 3 || samples == 0 {
        return Err(CliError::Validation("need at least 3 directions and 1 sample".into()));
    }
    let cfg = mean_field_config(common, restarts)?;
    prepare_out(common)?;
    let mut manifest = Manifest::new("range", &common.input, &common.out, common.seed);
    manifest.set("directions", directions);
    manifest.set("samples", samples);
    record_config(&mut manifest, &cfg);
    manifest.set("gap_tol", gap_tol);
    manifest.set("length_tol", length_tol);

    let names = obs.names();
    let mut cloud = Csv::new(vec!["index".to_string(), names[0].clone(), names[1].clone()]);
    for (i, p) in sample_pi_sym(&obs, samples, common.seed).iter().enumerate() {
        cloud.push(vec![i.to_string(), num(p.coords[0]), num(p.coords[1])]);
    }
    cloud.write(&manifest, &common.out.join("pi_sym_points.csv"))?;

    let sweep = theta_sym_sweep(&obs, directions, &cfg)?;
    let mut support = Csv::new(["theta", "x1", "x2", "h", "p1", "p2", "converged"]);
    for (i, s) in sweep.iter().enumerate() {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / directions as f64;
        support.push(vec![
            num(theta),
            num(s.direction[0]),
            num(s.direction[1]),
            num(s.value),
            num(s.point.coords[0]),
            num(s.point.coords[1]),
            s.converged.to_string(),
        ]);
    }
    support.write(&manifest, &common.out.join("theta_support.csv"))?;

    let mut flats = Csv::new(["theta_start", "theta_end", "start1", "start2", "end1", "end2", "length"]);
    for seg in detect_flat_segments(&sweep, gap_tol, length_tol) {
        flats.push(vec![
            num(seg.theta_start),
            num(seg.theta_end),
            num(seg.start.coords[0]),
            num(seg.start.coords[1]),
            num(seg.end.coords[0]),
            num(seg.end.coords[1]),
            num(seg.length()),
        ]);
    }
    flats.write(&manifest, &common.out.join("flat_segments.csv"))?;
    Ok(())
}

fn parse_sweep(text: &str, spec: &KLocalSpec) -> Result<(usize, Vec<f64>)> {
    let bad = |m: &str| CliError::Parse(format!("--sweep {text:?}: {m}"));
    let (term, values) = text.split_once('=').ok_or_else(|| bad("expected TERM=VALUES"))?;
    let index = match term.parse::<usize>() {
        Ok(i) => i,
        Err(_) => spec
            .terms()
            .iter()
            .position(|t| t.name == term)
            .ok_or_else(|| CliError::Validation(format!("--sweep names unknown term {term:?}")))?,
    };
    if index >= spec.terms().len() {
        return Err(CliError::Validation(format!("--sweep index {index} is out of range")));
    }
    let parse_f = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("{s:?} is not a number")));
    let points = if values.contains(':') {
        let parts: Vec<&str> = values.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected START:STOP:STEPS"));
        }
        let (start, stop) = (parse_f(parts[0])?, parse_f(parts[1])?);
        let steps: usize = parts[2].trim().parse().map_err(|_| bad("STEPS must be a positive integer"))?;
        match steps {
            0 => return Err(bad("STEPS must be a positive integer")),
            1 => vec![start],
            _ => (0..steps).map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64).collect(),
        }
    } else {
        values.split(',').map(parse_f).collect::<Result<_>>()?
    };
    Ok((index, points))
}

fn minimizer_columns(n: usize) -> Vec<String> {
    if n == 2 {
        vec!["bloch_x".into(), "bloch_y".into(), "bloch_z".into()]
    } else {
        (0..n).flat_map(|i| [format!("re{i}"), format!("im{i}")]).collect()
    }
}

fn minimizer_values(psi: &PureState) -> Vec<String> {
    match psi.bloch_vector() {
        Some(b) => b.iter().map(|&v| num(v)).collect(),
        None => psi.amplitudes().iter().flat_map(|z| [num(z.re), num(z.im)]).collect(),
    }
}

pub fn ground(common: &Common, sweep: Option<&str>, restarts: usize) -> Result<()> {
    let spec = read_json::<KLocalSpecJson>(&common.input)?.into_spec()?;
    let cfg = mean_field_config(common, restarts)?;
    let sweep = sweep.map(|s| parse_sweep(s, &spec)).transpose()?;
    prepare_out(common)?;
    let mut manifest = Manifest::new("ground", &common.input, &common.out, common.seed);
    record_config(&mut manifest, &cfg);
    if let Some((index, values)) = &sweep {
        manifest.set("sweep_term", &spec.terms()[*index].name);
        manifest.set("sweep_points", values.len());
    }

    let points: Vec<Vec<f64>> = match &sweep {
        None => vec![spec.coefficients().to_vec()],
        Some((index, values)) => values
            .iter()
            .map(|&v| {
                let mut x = spec.coefficients().to_vec();
                x[*index] = v;
                x
            })
            .collect(),
    };
    let mut columns: Vec<String> = spec.terms().iter().map(|t| format!("x_{}", t.name)).collect();
    columns.extend(["energy", "converged", "iterations"].map(String::from));
    columns.extend(minimizer_columns(spec.n()));
    let mut csv = Csv::new(columns);
    for x in points {
        let a = assemble_weighted(&spec.with_coefficients(x.clone())?);
        let r = mean_field_minimize(&a, spec.k(), &cfg)?;
        let mut row: Vec<String> = x.iter().map(|&v| num(v)).collect();
        row.extend([num(r.energy), r.converged.to_string(), r.iterations.to_string()]);
        row.extend(minimizer_values(&r.minimizer));
        csv.push(row);
    }
    csv.write(&manifest, &common.out.join("ground.csv"))?;
    Ok(())
}

pub fn definetti(common: &Common, n_max: usize, restarts: usize) -> Result<()> {
    let spec = read_json::<KLocalSpecJson>(&common.input)?.into_spec()?;
    let cfg = mean_field_config(common, restarts)?;
    let report = definetti_convergence(&spec, n_max, &cfg)?;
    prepare_out(common)?;
    let mut manifest = Manifest::new("definetti", &common.input, &common.out, common.seed);
    manifest.set("n_max", n_max);
    record_config(&mut manifest, &cfg);
    let mut csv = Csv::new(["N", "e_N", "gap_to_mean_field"]);
    for e in &report.entries {
        csv.push(vec![e.particle_count.to_string(), num(e.energy_per_subset), num(e.gap)]);
    }
    csv.push(vec!["inf".into(), num(report.mean_field.energy), num(0.0)]);
    csv.write(&manifest, &common.out.join("definetti.csv"))?;
    Ok(())
}

pub fn decompose(common: &Common) -> Result<()> {
    let d = read_json::<DecompositionJson>(&common.input)?.into_decomposition()?;
    let eps = common.tol.unwrap_or(DEFAULT_SYMMETRY_TOL);
    if eps.is_nan() || eps <= 0.0 {
        return Err(CliError::Validation("--tol must be positive".into()));
    }
    let sym = symmetrize_decomposition(&d, eps)?;
    prepare_out(common)?;
    let mut manifest = Manifest::new("decompose", &common.input, &common.out, common.seed);
    manifest.set("symmetry_tol", eps);
    let body = json!({
        "decomposition": SymmetricDecompositionJson::from(&sym.decomposition),
        "verification": {
            "reassembly_error": sym.reassembly_error,
            "term_residuals": sym.term_residuals,
            "marginal_impurities": sym.marginal_impurities,
        },
    });
    write_json(&manifest, body, &common.out.join("decomposition.json"))?;
    Ok(())
}

/// Subsets containing particle 0 and missing at least one particle: one per
/// bipartition.
fn bipartitions(count: usize) -> Vec<Vec<usize>> {
    (0..(1usize << (count - 1)) - 1)
        .map(|mask| std::iter::once(0).chain((1..count).filter(|i| mask >> (i - 1) & 1 == 1)).collect())
        .collect()
}

pub fn witness(common: &Common) -> Result<()> {
    let (n, count, rho) = read_json::<DensityMatrixJson>(&common.input)?.into_state()?;
    let tol = common.tol.unwrap_or(1e-10);
    if count < 2 {
        return Err(CliError::Validation("witnesses need at least 2 particles".into()));
    }
    let swap = if count == 2 { Some(swap_witness(&rho, n)?) } else { None };
    let mut ppt = Vec::new();
    let mut negative = swap.is_some_and(|s| s < -tol);
    for subset in bipartitions(count) {
        let v = ppt_min_eigenvalue(&rho, n, count, &subset)?;
        negative |= v < -tol;
        ppt.push(json!({ "subset": subset, "min_eigenvalue": v }));
    }
    let symmetric = is_symmetric_state(&rho, n, count, Parity::Symmetric, DEFAULT_SYMMETRY_TOL)?;
    let antisymmetric = is_symmetric_state(&rho, n, count, Parity::Antisymmetric, DEFAULT_SYMMETRY_TOL)?;
    prepare_out(common)?;
    let mut manifest = Manifest::new("witness", &common.input, &common.out, common.seed);
    manifest.set("witness_tol", tol);
    manifest.set("support_tol", DEFAULT_SYMMETRY_TOL);
    let body = json!({
        "n": n,
        "N": count,
        "swap": swap,
        "ppt": ppt,
        "symmetric_support": symmetric,
        "antisymmetric_support": antisymmetric,
        "entangled": if negative { "certified" } else { "unknown" },
    });
    write_json(&manifest, body, &common.out.join("witness.json"))?;
    Ok(())
}
