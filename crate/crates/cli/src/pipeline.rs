//! Stage orchestration and output files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use num_complex::Complex64;
use qd_core::hardy::self_commutator_rank;
use qd_core::numkernel::Backend;
use qd_core::quaddom::defining::sample_residual;
use qd_core::quaddom::example2::roots_paired;
use qd_core::quaddom::{
    defining_equation, schwartz_nodes_weights, univalence_check, verify_quadrature_identity, CurveScenario,
    TestFunction,
};
use qd_core::subnormal::{discriminant_poly, matrix_parameters};
use qd_core::symbols::classify_symbol;
use qd_core::winding::{trace_with, verify_with_trace, CurveTrace, DomainReport, TraceOptions, WindingContext};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{CommandKind, RunConfig};
use crate::error::CliError;
use crate::registry::Loaded;
use crate::svg::emit_svg;

/// Relative residual allowed in the quadrature identity.
pub const QUADRATURE_TOL: f64 = 1e-3;
/// Normalized `|Q|` allowed on curve samples.
pub const CURVE_RESIDUAL_TOL: f64 = 1e-6;
/// Random winding spot checks per verification.
const SPOT_CHECKS: usize = 32;
/// Section order for the self-commutator rank cross-check.
const COMMUTATOR_ORDER: usize = 32;

/// Result of a run: the report and the files written.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Value,
    pub failures: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Run<'a> {
    cfg: &'a RunConfig,
    sections: BTreeMap<&'static str, Value>,
    failures: Vec<String>,
    files: Vec<PathBuf>,
}

impl Run<'_> {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn write(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let path = self.cfg.output_dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        self.files.push(path);
        Ok(())
    }

    fn write_json(&mut self, name: &str, v: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
        text.push('\n');
        self.write(name, &text)
    }
}

/// Runs the configured stages, writing `report.json` and the stage files
/// into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| CliError::io(&cfg.output_dir, e))?;
    let loaded = Loaded::load(cfg)?;
    let f = loaded.symbol();
    let mut run = Run { cfg, sections: BTreeMap::new(), failures: Vec::new(), files: Vec::new() };

    let class = classify_symbol(f);
    run.sections.insert("classification", serde_json::to_value(&class).expect("classification serializes"));
    if cfg.command == CommandKind::SymbolBuild {
        run.write("symbol.json", &(loaded.symbol_spec().to_json() + "\n"))?;
    }
    run.sections.insert("scenario", scenario_section(&loaded, cfg, &mut run.failures)?);

    let mut trace = None;
    let mut domain = None;
    if cfg.stages.trace {
        let t = trace_stage(&mut run, &loaded)?;
        if cfg.stages.verify {
            if class.ndarn_member.is_true() {
                domain = Some(verify_stage(&mut run, &loaded, t.clone())?);
            } else {
                run.failures.push("domain verification needs a non-degenerate analytic rational normal symbol".into());
            }
        }
        trace = Some(t);
    }
    if let Some(t) = &trace {
        let path = cfg.output_dir.join("curve.svg");
        emit_svg(t, domain.as_ref(), &path)?;
        run.files.push(path);
    }
    if cfg.stages.params {
        params_stage(&mut run, &loaded)?;
    }
    if cfg.stages.quadrature {
        quadrature_stage(&mut run, &loaded)?;
    }
    if cfg.stages.defining_eq {
        defining_stage(&mut run, &loaded, trace.as_ref())?;
    }

    let report = json!({
        "command": cfg.command,
        "input": cfg.input,
        "config": {
            "stages": cfg.stages,
            "tolerances": cfg.tolerances,
            "backend": cfg.backend,
            "seed": cfg.seed,
            "samples": cfg.samples,
            "grid": cfg.grid,
        },
        "sections": run.sections,
        "failures": run.failures,
        "ok": run.failures.is_empty(),
    });
    run.write_json("report.json", &report)?;
    Ok(RunOutcome { report, failures: run.failures, files: run.files })
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn scenario_section(loaded: &Loaded, cfg: &RunConfig, failures: &mut Vec<String>) -> Result<Value, CliError> {
    let mut v = json!({ "parameters": loaded.parameters() });
    if let Loaded::Ex2(s) = loaded {
        let tol = cfg.tolerances.root;
        let scale = s.polys.d.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let root_residual = s.roots.iter().map(|&r| s.polys.d.eval(&r).norm() / scale).fold(0.0, f64::max);
        let paired = roots_paired(&s.roots, tol);
        if root_residual > tol {
            failures.push(format!("roots of D have residual {root_residual:.3e}"));
        }
        if !paired {
            failures.push("roots of D are not closed under reflection in the circle".into());
        }
        v["gamma1"] = json!([s.gamma1.re, s.gamma1.im]);
        v["roots_of_D"] = json!(pairs(&s.roots));
        v["root_residual"] = json!(root_residual);
        v["roots_paired"] = json!(paired);
    }
    Ok(v)
}

fn trace_stage(run: &mut Run, loaded: &Loaded) -> Result<CurveTrace, CliError> {
    let f = loaded.symbol();
    let opts = TraceOptions { n_init: run.cfg.samples, ..TraceOptions::default() };
    let t = trace_with(f, &opts)?;
    let defect = t.multiset_defect(f)?;
    run.check(t.unresolved_intervals == 0, format!("{} unresolved branch intervals", t.unresolved_intervals));
    run.check(defect < 1e-8, format!("traced branches deviate from the spectrum by {defect:.3e}"));
    let mut section = json!({
        "samples": t.thetas.len(),
        "branch_count": t.branch_count(),
        "closure_perm": t.closure_perm,
        "orbits": t.orbits,
        "components": t.components,
        "component_count": t.component_count,
        "unresolved_intervals": t.unresolved_intervals,
        "multiset_defect": defect,
        "bounding_box": t.bounding_box(),
        "orbit_signed_areas": t.orbit_signed_areas(),
    });
    if let Loaded::Ex2(s) = loaded {
        let br = qd_core::quaddom::trace_z_branches(s, qd_core::quaddom::example2::UNIVALENCE_SAMPLES)?;
        run.check(br.product_defect < 1e-8, format!("z+ z- deviates from 1 by {:.3e}", br.product_defect));
        section["z_product_defect"] = json!(br.product_defect);
    }
    run.write("trace.csv", &t.to_csv())?;
    run.sections.insert("trace", section);
    Ok(t)
}

fn verify_stage(run: &mut Run, loaded: &Loaded, trace: CurveTrace) -> Result<DomainReport, CliError> {
    let f = loaded.symbol();
    let rep = verify_with_trace(trace.clone(), run.cfg.grid)?;
    run.check(rep.passes(), format!("domain conditions fail: {:?}", rep.conditions));
    let mut section = rep.to_json();
    section.as_object_mut().expect("object").remove("labels_rle");
    section["spot_checks"] = spot_checks(run, f, trace, &rep)?;
    match loaded {
        Loaded::Ex1(s) => {
            run.check(s.univalence.univalent, "boundary curve is not a positively oriented Jordan curve");
            section["univalence"] = serde_json::to_value(&s.univalence).expect("serializes");
        }
        Loaded::Ex2(s) => {
            let u = univalence_check(s)?;
            run.check(u.pass, format!("univalence fails (pole free: {}, min arg step {:.3e})", u.pole_free, u.min_arg_step));
            section["univalence"] = serde_json::to_value(&u).expect("serializes");
        }
        _ => {}
    }
    run.write_json("domain.json", &rep.to_json())?;
    run.sections.insert("domain", section);
    Ok(rep)
}

/// Compares grid labels with the argument-principle winding number at
/// seeded random cells away from the boundary band.
fn spot_checks(run: &mut Run, f: &qd_core::symbols::MatrixSymbol, trace: CurveTrace, rep: &DomainReport) -> Result<Value, CliError> {
    let ctx = WindingContext::with_trace(f, trace);
    let g = &rep.grid;
    let margin = 4.0 * g.dx.hypot(g.dy);
    let mut rng = ChaCha8Rng::seed_from_u64(run.cfg.seed);
    let (mut checked, mut mismatches) = (0usize, Vec::new());
    for _ in 0..64 * SPOT_CHECKS {
        if checked == SPOT_CHECKS {
            break;
        }
        let (i, j) = (rng.gen_range(0..g.width), rng.gen_range(0..g.height));
        let z = g.center(i, j);
        if ctx.trace.distance(z) < margin {
            continue;
        }
        let label = rep.labels[j * g.width + i] as i64;
        let wind = ctx.winding_number(z)?;
        checked += 1;
        if wind != label {
            mismatches.push(json!({ "z": [z.re, z.im], "label": label, "winding": wind }));
        }
    }
    run.check(mismatches.is_empty(), format!("{} grid labels disagree with the argument principle", mismatches.len()));
    Ok(json!({ "seed": run.cfg.seed, "checked": checked, "mismatches": mismatches }))
}

fn params_stage(run: &mut Run, loaded: &Loaded) -> Result<(), CliError> {
    let f = loaded.symbol();
    let p = matrix_parameters(f)?;
    let mut v = p.to_json()?;
    let comm = self_commutator_rank(f, COMMUTATOR_ORDER, run.cfg.tolerances.rank)?;
    run.check(comm.rank == p.dim_m, format!("self-commutator rank {} differs from dim M = {}", comm.rank, p.dim_m));
    run.check(p.gram_defect < 1e-8, format!("model basis is not orthonormal (defect {:.3e})", p.gram_defect));
    v["commutator_rank"] = json!(comm.rank);
    v["gram_defect"] = json!(p.gram_defect);
    v["factor_defect"] = json!(p.factor_defect());
    if let Loaded::Ex1(s) = loaded {
        // Nodes of Example 1 are F(0) and F(1/ā).
        let at = |t: Complex64| f.eval(t)[(0, 0)];
        let want = [at(Complex64::new(0.0, 0.0)), at(1.0 / s.a.conj())];
        let got = p.nodes()?;
        let err = want.iter().map(|w| got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
        run.check(err < run.cfg.tolerances.root.max(1e-8), format!("nodes differ from F(0), F(1/conj a) by {err:.3e}"));
        v["node_error"] = json!(err);
    }
    run.write_json("params.json", &v)?;
    run.sections.insert("params", v);
    Ok(())
}

fn quadrature_stage(run: &mut Run, loaded: &Loaded) -> Result<(), CliError> {
    let Loaded::Ex1(s) = loaded else {
        return Err(CliError::Usage("the quadrature check is available for scenario ex1".into()));
    };
    let nw = schwartz_nodes_weights(s)?;
    let res = verify_quadrature_identity(s, &TestFunction::standard_set(), run.cfg.grid)?;
    for r in &res {
        run.check(r.residual < QUADRATURE_TOL, format!("quadrature identity for f = {} off by {:.3e}", r.label, r.residual));
    }
    run.write_json("nodes_weights.json", &nw.to_json())?;
    let v = json!({ "nodes_weights": nw.to_json(), "residuals": res });
    run.sections.insert("quadrature", v);
    Ok(())
}

fn defining_stage(run: &mut Run, loaded: &Loaded, trace: Option<&CurveTrace>) -> Result<(), CliError> {
    let backend = run.cfg.backend;
    let curve = match loaded {
        Loaded::Ex1(s) => Some(CurveScenario::Example1(s)),
        Loaded::Ex2(s) => Some(CurveScenario::Example2(s)),
        _ => None,
    };
    let v = match curve {
        Some(c) => {
            let (dz, dw) = c.default_degrees();
            let eq = defining_equation(c, dz, dw, backend)?;
            run.check(
                eq.sample_residual < CURVE_RESIDUAL_TOL,
                format!("defining equation residual {:.3e} on the curve", eq.sample_residual),
            );
            eq.to_json()
        }
        // Other symbols: the discriminant curve of their matrix parameters.
        None => {
            let f = loaded.symbol();
            let p = matrix_parameters(f)?;
            let d = discriminant_poly(&p, backend)?;
            let owned;
            let t = match trace {
                Some(t) => t,
                None => {
                    owned = trace_with(f, &TraceOptions { n_init: run.cfg.samples, ..TraceOptions::default() })?;
                    &owned
                }
            };
            let pts: Vec<(Complex64, Complex64)> = boundary_samples(t, 256).into_iter().map(|z| (z, z.conj())).collect();
            let residual = sample_residual(&d.q, &pts);
            run.check(residual < CURVE_RESIDUAL_TOL, format!("discriminant residual {residual:.3e} on the curve"));
            let coeffs: Vec<Vec<[f64; 2]>> = d.q.coeffs().iter().map(|r| pairs(r)).collect();
            json!({
                "source": "discriminant",
                "backend": backend,
                "deg_z": d.q.deg_z(),
                "deg_w": d.q.deg_w(),
                "coeffs": coeffs,
                "exact": d.exact.is_some() && backend == Backend::Exact,
                "real_type_defect": d.real_type_defect,
                "sample_residual": residual,
            })
        }
    };
    run.write_json("defining_eq.json", &v)?;
    run.sections.insert("defining_eq", v);
    Ok(())
}

/// `n` points spread evenly over all branches of the trace.
fn boundary_samples(t: &CurveTrace, n: usize) -> Vec<Complex64> {
    let all: Vec<Complex64> = t.branches.iter().flat_map(|b| b[..b.len() - 1].iter().copied()).collect();
    let step = (all.len() / n).max(1);
    all.into_iter().step_by(step).take(n).collect()
}

