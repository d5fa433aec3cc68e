use num_complex::Complex64;
use serde_json::json;

use super::matrix_file::{parse_complex_list, MatrixFile};
use super::report::{matrix_value, Report};
use super::{
    BackendArg, Cli, CliError, CliResult, Command, Experiment, GlobalOpts, RayleighArgs, StratifyArgs, ThresholdArgs,
    VerifyArgs, WhichIdentity,
};
use crate::hadamard::SparsePoly;
use crate::identities::{run_identity_batch, Backend, IdentityKind};
use crate::matrix::CMatrix;
use crate::psd::{discontinuity_probe, rayleigh_constant, rayleigh_rank_one, rayleigh_variational};
use crate::strata::{
    closure_probe, kernel_for_partition, rank_bound_check, simultaneous_kernel, stratify,
    verify_offdiagonal_structure, GroupTag, IndexPartition, SubspaceBasis,
};
use crate::threshold::{
    cross_dim_sweep, empirical_sharpness, horn_necessity_witness, power_nonpreservation_search,
    preserves_positivity_check, threshold_constant, threshold_report, CoefficientTuple, Witness,
};

pub(super) fn dispatch(cli: &Cli) -> CliResult<Report> {
    let g = &cli.global;
    if !(g.tol > 0.0 && g.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", g.tol)));
    }
    match &cli.command {
        Command::Threshold(a) => threshold(g, a),
        Command::VerifyIdentity(a) => verify_identity(g, a),
        Command::Rayleigh(a) => rayleigh(g, a),
        Command::Stratify(a) => stratify_cmd(g, a),
        Command::Experiment(e) => experiment(g, e),
    }
}

fn parse_reals(s: &str, flag: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::Usage(format!("{flag}: cannot parse {x:?} as a real number")))
        })
        .collect()
}

fn parse_group(s: &str) -> CliResult<GroupTag> {
    s.parse().map_err(|_| CliError::Usage(format!("--group: unknown group {s:?}")))
}

fn parse_partition(s: &str, n: usize, flag: &str) -> CliResult<IndexPartition> {
    IndexPartition::parse(s, n).map_err(|e| CliError::Usage(format!("{flag}: {e}")))
}

fn read_matrix(path: &std::path::Path) -> CliResult<MatrixFile> {
    MatrixFile::read(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn common(r: &mut Report, g: &GlobalOpts) {
    r.input("seed", g.seed);
    r.tolerance("tol", g.tol);
}

fn witness_value(w: &Witness) -> serde_json::Value {
    json!({
        "index": w.index,
        "kind": w.kind,
        "min_eigenvalue": w.min_eigenvalue,
        "matrix": matrix_value(&w.matrix),
    })
}

fn basis_value(b: &SubspaceBasis) -> serde_json::Value {
    let cols: Vec<Vec<[f64; 2]>> = (0..b.dim())
        .map(|c| b.basis().column(c).iter().map(|z| [z.re, z.im]).collect())
        .collect();
    json!(cols)
}

fn threshold(g: &GlobalOpts, a: &ThresholdArgs) -> CliResult<Report> {
    let c = parse_reals(&a.c, "--c")?;
    if let Some(n) = a.n {
        if n != c.len() {
            return Err(CliError::Usage(format!("--N {n} does not match {} coefficients", c.len())));
        }
    }
    let mut coeffs = CoefficientTuple::new(c.clone(), None)?;
    if let Some(cp) = a.cprime {
        coeffs = coeffs.with_cprime(cp);
    }
    let mut r = Report::new("threshold");
    r.input("c", &c).input("M", a.m).input("N", c.len()).input("rho", a.rho).input("cprime", a.cprime);
    if a.empirical {
        r.input("grid", a.grid);
    }
    if a.samples > 0 {
        r.input("samples", a.samples);
    }
    common(&mut r, g);
    let t = threshold_report(&coeffs, a.m, a.rho)?;
    r.result("constant", t.constant);
    r.result("bound", -1.0 / t.constant);
    if !t.partials.is_empty() {
        r.result("partial_constants", &t.partials);
    }
    if let Some(v) = t.admissibility {
        r.result("admissibility", v.as_str());
    }
    if a.empirical {
        let e = empirical_sharpness(&coeffs, a.m, a.rho, a.grid)?;
        r.result("empirical", json!({"estimate": e, "gap": t.constant - e}));
    }
    if a.samples > 0 {
        if a.cprime.is_none() {
            return Err(CliError::Usage("--samples needs --cprime".into()));
        }
        let v = preserves_positivity_check(&coeffs.preserver(a.m), c.len(), a.rho, a.samples, g.seed, g.tol)?;
        r.result(
            "positivity_check",
            json!({
                "samples": v.trials,
                "witness_found": v.witness.is_some(),
                "witness": v.witness.as_ref().map(witness_value),
            }),
        );
    }
    Ok(r)
}

fn verify_identity(g: &GlobalOpts, a: &VerifyArgs) -> CliResult<Report> {
    let kinds: Vec<IdentityKind> = match a.which {
        WhichIdentity::Pencil => vec![IdentityKind::Pencil],
        WhichIdentity::CauchyBinet => vec![IdentityKind::CauchyBinet],
        WhichIdentity::Decomposition => vec![IdentityKind::Decomposition],
        WhichIdentity::Moments => vec![IdentityKind::Moments],
        WhichIdentity::All => IdentityKind::ALL.to_vec(),
    };
    let backend = match g.backend {
        BackendArg::Exact => Backend::Exact,
        BackendArg::Float => Backend::Float,
    };
    let mut r = Report::new("verify-identity");
    r.input("which", kinds.iter().map(|k| k.as_str()).collect::<Vec<_>>())
        .input("max_N", a.max_n)
        .input("max_M", a.max_m)
        .input("trials", a.trials)
        .input("backend", backend);
    common(&mut r, g);
    let mut total_failures = 0;
    for kind in kinds {
        let max_m = if kind == IdentityKind::CauchyBinet { a.max_m.min(6) } else { a.max_m };
        let rep = run_identity_batch(kind, backend, a.max_n, max_m, a.trials, g.seed, g.tol)?;
        total_failures += rep.failures;
        r.result(
            kind.as_str(),
            json!({
                "cases": rep.cases.len(),
                "trials": rep.total_trials,
                "failures": rep.failures,
                "counterexamples": rep.counterexamples,
            }),
        );
    }
    r.result("total_failures", total_failures);
    Ok(r)
}

fn rel_gap(x: f64, y: f64) -> f64 {
    (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE)
}

fn rayleigh(g: &GlobalOpts, a: &RayleighArgs) -> CliResult<Report> {
    let c = parse_reals(&a.c, "--c")?;
    let coeffs = CoefficientTuple::new(c.clone(), None)?;
    let mut r = Report::new("rayleigh");
    r.input("c", &c).input("M", a.m);
    if a.probe_discontinuity {
        let rho = a.rho.unwrap_or(1.0);
        let eps = parse_reals(&a.epsilons, "--epsilons")?;
        r.input("rho", rho).input("epsilons", &eps).input("probe_discontinuity", true);
        common(&mut r, g);
        let t = discontinuity_probe(&coeffs, a.m, rho, &eps)?;
        r.result("on_point", t.on_point)
            .result("limit_estimate", t.limit_estimate)
            .result("threshold_constant", t.threshold)
            .result("relative_gap", t.relative_gap)
            .result("table", &t.rows);
        return Ok(r);
    }
    let (matrix, u, file_rho) = match (&a.matrix, &a.rank_one) {
        (Some(path), None) => {
            let f = read_matrix(path)?;
            r.input("matrix", path.display().to_string());
            (f.to_matrix()?, None, f.rho)
        }
        (None, Some(list)) => {
            let u = parse_complex_list(list).map_err(|e| CliError::Usage(format!("--rank-one: {e}")))?;
            r.input("rank_one", u.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>());
            (CMatrix::gram_rank_one(&u), Some(u), None)
        }
        _ => return Err(CliError::Usage("give exactly one of --matrix, --rank-one or --probe-discontinuity".into())),
    };
    let rho = a.rho.or(file_rho);
    r.input("rho", rho);
    common(&mut r, g);
    let spec = rayleigh_constant(&coeffs, a.m, &matrix, g.tol)?;
    let var = rayleigh_variational(&coeffs, a.m, &matrix, g.tol)?;
    let mut values = vec![spec.value, var.value];
    r.result("spectral_radius", spec.value).result("variational", var.value);
    if let Some(u) = &u {
        let closed = rayleigh_rank_one(&coeffs, a.m, u)?;
        values.push(closed);
        r.result("rank_one_closed_form", closed);
    }
    let gap = values
        .iter()
        .flat_map(|&x| values.iter().map(move |&y| rel_gap(x, y)))
        .fold(0.0, f64::max);
    r.result("max_relative_gap", gap);
    if let Some(rho) = rho {
        r.result("threshold_constant", threshold_constant(&coeffs, a.m, rho)?);
    }
    let maximizer: Vec<[f64; 2]> =
        spec.maximizer.unwrap_or_default().iter().map(|z: &Complex64| [z.re, z.im]).collect();
    r.result("maximizer", maximizer);
    Ok(r)
}

fn stratify_cmd(g: &GlobalOpts, a: &StratifyArgs) -> CliResult<Report> {
    let group = parse_group(&a.group)?;
    let f = read_matrix(&a.matrix)?;
    let m = f.to_matrix()?;
    let mut r = Report::new("stratify");
    r.input("matrix", a.matrix.display().to_string()).input("group", group.as_str());
    common(&mut r, g);
    let pi = stratify(&m, group, g.tol)?;
    let k = simultaneous_kernel(&m, g.tol)?;
    let kp = kernel_for_partition(&stratify(&m, GroupTag::Trivial, g.tol)?);
    let rank = rank_bound_check(&m, g.tol)?;
    r.result("partition", pi.to_string())
        .result("blocks", pi.len())
        .result("offdiagonal_verified", verify_offdiagonal_structure(&m, &pi, group, g.tol))
        .result("kernel_dim", k.dim())
        .result("kernel_basis", basis_value(&k))
        .result("partition_kernel_dim", kp.dim())
        .result("max_principal_angle", k.max_principal_angle(&kp))
        .result("rank", rank.rank)
        .result("rank_bound", rank.blocks)
        .result("rank_bound_holds", rank.holds);
    Ok(r)
}

fn experiment(g: &GlobalOpts, e: &Experiment) -> CliResult<Report> {
    let mut r;
    match e {
        Experiment::Sharpness { c, m, rho, grid } => {
            let cv = parse_reals(c, "--c")?;
            let coeffs = CoefficientTuple::new(cv.clone(), None)?;
            r = Report::new("experiment sharpness");
            r.input("c", &cv).input("M", m).input("rho", rho).input("grid", grid);
            common(&mut r, g);
            let exact = threshold_constant(&coeffs, *m, *rho)?;
            let est = empirical_sharpness(&coeffs, *m, *rho, *grid)?;
            r.result("constant", exact).result("empirical", est).result("relative_gap", rel_gap(exact, est));
        }
        Experiment::HornWitness { f, n, rho, budget } => {
            let fv = parse_reals(f, "--f")?;
            let poly = SparsePoly::from_dense(&fv.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>());
            r = Report::new("experiment horn-witness");
            r.input("f", &fv).input("N", n).input("rho", rho).input("budget", budget);
            common(&mut r, g);
            match horn_necessity_witness(&poly, *n, *rho, *budget, g.seed, g.tol)? {
                Some(w) => {
                    r.result("verdict", "witness-found")
                        .result("u", &w.u)
                        .result("geometric", w.geometric)
                        .result("min_eigenvalue", w.min_eigenvalue)
                        .result("matrix", matrix_value(&w.matrix));
                }
                None => {
                    r.result("verdict", "inconclusive");
                }
            }
        }
        Experiment::PowerNonpreservation { n, alpha, rho, budget } => {
            r = Report::new("experiment power-nonpreservation");
            r.input("N", n).input("alpha", alpha).input("rho", rho).input("budget", budget);
            common(&mut r, g);
            let v = power_nonpreservation_search(*n, *alpha, *rho, *budget, g.seed, g.tol)?;
            match &v.witness {
                Some(w) => {
                    r.result("verdict", "witness-found").result("witness", witness_value(w));
                }
                None => {
                    r.result("verdict", "inconclusive");
                }
            }
        }
        Experiment::ClosureProbe { target, source, n, group, steps } => {
            let gt = parse_group(group)?;
            let t = parse_partition(target, *n, "--target")?;
            let s = parse_partition(source, *n, "--source")?;
            r = Report::new("experiment closure-probe");
            r.input("target", t.to_string())
                .input("source", s.to_string())
                .input("N", n)
                .input("group", gt.as_str())
                .input("steps", steps);
            common(&mut r, g);
            let table = closure_probe(&t, &s, gt, *steps, g.seed)?;
            r.result("path", &table.rows)
                .result("limit_label", &table.limit_label)
                .result("consistent", table.consistent);
        }
        Experiment::CrossDim { draws, max_n, max_m } => {
            r = Report::new("experiment cross-dim");
            r.input("draws", draws).input("max_N", max_n).input("max_M", max_m);
            common(&mut r, g);
            let s = cross_dim_sweep(*draws, *max_n, *max_m, g.seed)?;
            r.result("all_hold", s.all_hold).result("min_ratio", s.min_ratio).result("argmin", &s.argmin);
        }
    }
    Ok(r)
}
