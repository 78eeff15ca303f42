use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use wgspec_core::covering::spectral_inclusion_check;
use wgspec_core::format::{self, fmt_complex, fmt_real};
use wgspec_core::orbital::{orbital_graph, transfer_sweep, PositiveElement};
use wgspec_core::random;
use wgspec_core::spectra::{self, deficiency_matrix, membership_by_deficiency, MembershipVerdict};
use wgspec_core::{
    eigen, materialize, shift_counterexample_report, spectra_compare_orbits, verify_covering, voltage_cover,
    ComplexMatrix, CoveringMap,
};

use crate::io;
use crate::report::{point, point_list, yes_no, Report};
use crate::{CoverCommand, DemoShiftArgs, GraphOp, GraphOpArgs, IncludeArgs, MatrixArgs, OrbitalArgs, SpectrumArgs};

const SELF_CHECK_TOL: f64 = 1e-12;
const RANGE_SLACK: f64 = 1e-9;

/// Twice the norm bound, or 1 for the zero operator.
fn default_radius(m: &ComplexMatrix) -> f64 {
    let b = m.norm_bound();
    if b > 0.0 {
        2.0 * b
    } else {
        1.0
    }
}

pub fn graph_op(a: &GraphOpArgs) -> Result<(Report, bool)> {
    let input = &a.inputs[0];
    if a.inputs.len() > 1 && !matches!(a.op, GraphOp::Compose) {
        bail!("only `compose` takes a second graph");
    }
    let g = io::graph(input)?;
    let mg = materialize(&g)?;
    let lambda = |name: &str| a.lambda.ok_or_else(|| anyhow!("`{name}` needs --lambda"));
    let mut r = Report::new("graph-op");
    let (result, expected, suffix, op_name) = match a.op {
        GraphOp::Scale => {
            let l = lambda("scale")?;
            r.text("LAMBDA", fmt_complex(l));
            (g.scale(l), mg.scale(l), "scale", "scale")
        }
        GraphOp::Add => {
            let l = lambda("add")?;
            r.text("LAMBDA", fmt_complex(l));
            let shift = ComplexMatrix::identity(mg.dim()).scale(l);
            (g.add_scalar(l), mg.add(&shift), "add", "add")
        }
        GraphOp::Adjoint => (g.adjoint(), mg.adjoint(), "adj", "adjoint"),
        GraphOp::Compose => {
            let h = match a.inputs.get(1) {
                Some(p) => io::graph(p)?,
                None => g.clone(),
            };
            let mh = materialize(&h)?;
            (g.compose(&h)?, mg.matmul(&mh), "comp", "compose")
        }
        GraphOp::Deficiency => {
            let l = a.lambda.unwrap_or_default();
            let radius = a.radius.unwrap_or_else(|| default_radius(&mg));
            r.text("LAMBDA", fmt_complex(l));
            r.num("R", radius);
            r.text("SIDE", a.side.to_string());
            (
                g.deficiency(l, radius, a.side)?,
                deficiency_matrix(&mg, l, radius, a.side),
                "def",
                "deficiency",
            )
        }
    };
    let out = a.out.clone().unwrap_or_else(|| io::sibling(input, suffix, "wg"));
    io::write(&out, &format::write_graph(&result))?;

    r.text("OP", op_name);
    for p in &a.inputs {
        r.text("INPUT", p.display().to_string());
    }
    r.text("OUTPUT", out.display().to_string());
    r.int("VERTICES", result.vertex_count());
    r.int("ARCS", result.arc_count());
    let got = materialize(&result)?;
    let residual = got.max_abs_diff(&expected) / expected.max_abs().max(got.max_abs()).max(1.0);
    let ok = residual <= SELF_CHECK_TOL;
    r.num("SELF_CHECK_RESIDUAL", residual);
    r.pass("SELF_CHECK", ok);
    if matches!(a.op, GraphOp::Deficiency) {
        let hermitian = got.is_hermitian(SELF_CHECK_TOL);
        r.text("HERMITIAN", yes_no(hermitian));
        if hermitian {
            let ev = eigen::hermitian_eigenvalues(&got)?;
            let (lo, hi) = (ev[0], ev[ev.len() - 1]);
            r.num("MIN_EIGENVALUE", lo);
            r.num("MAX_EIGENVALUE", hi);
            r.text("PSD", yes_no(lo >= -RANGE_SLACK));
            r.text("IN_UNIT_INTERVAL", yes_no(lo >= -RANGE_SLACK && hi <= 1.0 + RANGE_SLACK));
        }
    }
    Ok((r, ok))
}

fn verdict_line(v: &MembershipVerdict) -> String {
    format!(
        "{} lambda={} side={} left_distance={} right_distance={} R={} tol={}",
        if v.member { "MEMBER" } else { "NONMEMBER" },
        fmt_complex(v.lambda),
        v.witness_side,
        fmt_real(v.left_distance),
        fmt_real(v.right_distance),
        fmt_real(v.radius),
        v.tolerance
    )
}

pub fn spectrum(a: &SpectrumArgs) -> Result<(Report, bool)> {
    let (m, from_graph) = io::operator(&a.input)?;
    let s = spectra::spectrum(&m)?;
    let mut r = Report::new("spectrum");
    r.text("INPUT", a.input.display().to_string());
    r.text("SOURCE", if from_graph { "graph" } else { "matrix" });
    r.int("DIM", m.dim());
    r.text("HERMITIAN", yes_no(m.is_hermitian(spectra::HERMITIAN_TOL)));
    r.num("NORM_BOUND", m.norm_bound());
    r.text("SPECTRUM", point_list(s.values()));
    for z in s.values() {
        r.text("EIGENVALUE", format!("{} {}", fmt_real(z.re), fmt_real(z.im)));
    }
    if !a.check_lambda.is_empty() {
        let radius = a.radius.unwrap_or_else(|| default_radius(&m));
        for &l in &a.check_lambda {
            let v = membership_by_deficiency(&m, l, radius, a.tol)?;
            r.text("CHECK", verdict_line(&v));
        }
    }
    if let Some(path) = &a.scatter {
        let text: String = s
            .values()
            .iter()
            .map(|z| format!("{} {}\n", fmt_real(z.re), fmt_real(z.im)))
            .collect();
        io::write(path, &text)?;
        r.text("SCATTER", path.display().to_string());
    }
    Ok((r, true))
}

pub fn matrix(a: &MatrixArgs) -> Result<(Report, bool)> {
    let g = io::graph(&a.input)?;
    let m = materialize(&g)?;
    let out = a.out.clone().unwrap_or_else(|| io::sibling(&a.input, "op", "mat"));
    io::write(&out, &format::write_matrix(&m))?;
    let mut r = Report::new("matrix");
    r.text("INPUT", a.input.display().to_string());
    r.text("OUTPUT", out.display().to_string());
    r.int("DIM", m.dim());
    Ok((r, true))
}

fn describe_covering(r: &mut Report, c: &CoveringMap) {
    r.int("COVER_VERTICES", c.cover().vertex_count());
    r.int("COVER_ARCS", c.cover().arc_count());
    r.int("BASE_VERTICES", c.base().vertex_count());
    r.int("BASE_ARCS", c.base().arc_count());
}

fn verify_into(r: &mut Report, c: &CoveringMap) -> bool {
    let violations = verify_covering(c);
    r.int("VIOLATIONS", violations.len());
    for v in &violations {
        r.text("VIOLATION", format!("{} ({})", v, v.invariant()));
    }
    r.text("STATUS", if violations.is_empty() { "VALID" } else { "INVALID" });
    violations.is_empty()
}

pub fn cover(c: &CoverCommand) -> Result<(Report, bool)> {
    match c {
        CoverCommand::Verify { covering } => {
            let map = io::covering(covering)?;
            let mut r = Report::new("cover-verify");
            r.text("COVERING", covering.display().to_string());
            describe_covering(&mut r, &map);
            let ok = verify_into(&mut r, &map);
            Ok((r, ok))
        }
        CoverCommand::Lift { base, voltages, out } => lift(base, voltages, out.as_deref()),
        CoverCommand::Include(a) => include(a),
    }
}

fn lift(base_path: &Path, volt_path: &Path, out: Option<&Path>) -> Result<(Report, bool)> {
    let base = io::graph(base_path)?;
    let volt = format::parse_voltages(&io::read(volt_path)?, &base)
        .with_context(|| format!("invalid voltage file {}", volt_path.display()))?;
    let (cover, map) = voltage_cover(&base, &volt)?;
    let stem: PathBuf = match out {
        Some(p) => p.to_path_buf(),
        None => io::sibling(base_path, "lift", "wg").with_extension(""),
    };
    let cover_path = stem.with_extension("wg");
    let cov_path = stem.with_extension("cov");
    io::write(&cover_path, &format::write_graph(&cover))?;
    let text = format::write_covering(
        &map,
        &io::reference(&cov_path, &cover_path)?,
        &io::reference(&cov_path, base_path)?,
    );
    io::write(&cov_path, &text)?;

    let mut r = Report::new("cover-lift");
    r.text("BASE", base_path.display().to_string());
    r.text("VOLTAGES", volt_path.display().to_string());
    r.int("DEGREE", volt.degree());
    r.text("COVER_GRAPH", cover_path.display().to_string());
    r.text("COVERING", cov_path.display().to_string());
    describe_covering(&mut r, &map);
    let ok = verify_into(&mut r, &map);
    Ok((r, ok))
}

fn include(a: &IncludeArgs) -> Result<(Report, bool)> {
    let mut r = Report::new("cover-include");
    r.num("TOL", a.tol);
    if let Some(path) = &a.covering {
        let map = io::covering(path)?;
        let rep = spectral_inclusion_check(&map, a.tol)?;
        r.text("COVERING", path.display().to_string());
        describe_covering(&mut r, &map);
        r.text("BASE_SPECTRUM", point_list(rep.base_spectrum.values()));
        r.text("COVER_SPECTRUM", point_list(rep.cover_spectrum.values()));
        r.num("MAX_DEVIATION", rep.subset.max_deviation);
        r.num("INTERTWINING_RESIDUAL", rep.intertwining_residual);
        let ok = rep.included();
        r.text("STATUS", if ok { "INCLUDED" } else { "NOT_INCLUDED" });
        return Ok((r, ok));
    }
    let count = a.random.unwrap_or(0);
    r.int("SEED", a.seed as usize);
    r.int("CASES", count);
    let mut included = 0;
    for i in 0..count {
        let mut rng = random::rng(a.seed.wrapping_add(i as u64));
        let (volt, map) = random::random_voltage_cover(&mut rng, 12, 4)?;
        let rep = spectral_inclusion_check(&map, a.tol)?;
        included += usize::from(rep.included());
        r.text(
            "CASE",
            format!(
                "{i} base={} degree={} cover={} max_deviation={} residual={} {}",
                map.base().vertex_count(),
                volt.degree(),
                map.cover().vertex_count(),
                fmt_real(rep.subset.max_deviation),
                fmt_real(rep.intertwining_residual),
                if rep.included() { "INCLUDED" } else { "NOT_INCLUDED" }
            ),
        );
    }
    r.text("INCLUDED", format!("{included}/{count}"));
    let ok = included == count;
    r.text("STATUS", if ok { "INCLUDED" } else { "NOT_INCLUDED" });
    Ok((r, ok))
}

pub fn orbital(a: &OrbitalArgs) -> Result<(Report, bool)> {
    let fx = io::action(&a.action, a.level)?;
    let y_path = a.action_y.as_ref().unwrap_or(&a.action);
    let fy = io::action(y_path, a.level_y.or(a.level))?;
    let m = io::element(&a.element)?;
    let cmp = spectra_compare_orbits(&fx.action, &a.x, &fy.action, &a.y, &m, a.tol, a.radius)?;

    let mut r = Report::new("orbital");
    r.text("ACTION_X", a.action.display().to_string());
    if let Some((_, level)) = &fx.automaton {
        r.int("LEVEL_X", *level);
    }
    r.text("ACTION_Y", y_path.display().to_string());
    if let Some((_, level)) = &fy.automaton {
        r.int("LEVEL_Y", *level);
    }
    for (w, c) in m.terms() {
        r.text("TERM", format!("{w} {}", fmt_complex(*c)));
    }
    r.text("ROOT_X", a.x.clone());
    r.text("ROOT_Y", a.y.clone());
    r.int("ORBIT_X", cmp.orbit_x);
    r.int("ORBIT_Y", cmp.orbit_y);
    r.num("R", cmp.radius);
    for v in &cmp.local_iso.radii {
        r.text(
            "LOCAL_ISO",
            format!(
                "radius={} forward={} backward={} matched_roots={}/{}",
                v.radius,
                yes_no(v.forward),
                yes_no(v.backward),
                v.matches.len(),
                cmp.orbit_x
            ),
        );
    }
    r.text(
        "LOCAL_ISO_RADIUS",
        cmp.local_iso_radius.map_or("none".to_string(), |l| l.to_string()),
    );
    r.text("SPECTRUM_X", point_list(cmp.spectrum_x.values()));
    r.text("SPECTRUM_Y", point_list(cmp.spectrum_y.values()));
    r.num("HAUSDORFF", cmp.hausdorff);
    let members = |v: &[MembershipVerdict]| format!("{}/{}", v.iter().filter(|x| x.member).count(), v.len());
    r.text("X_IN_Y", members(&cmp.x_in_y));
    r.text("Y_IN_X", members(&cmp.y_in_x));

    let reach = 2;
    let ok = match cmp.local_iso_radius {
        Some(radius) if radius >= reach => {
            let gx = orbital_graph(&fx.action, &a.x, &m)?;
            let gy = orbital_graph(&fy.action, &a.y, &m)?;
            let matched = cmp.local_iso.radii[radius]
                .matches
                .iter()
                .find(|(x, _)| *x == a.x)
                .map(|(_, y)| y.clone())
                .ok_or_else(|| anyhow!("root {} has no matching ball", a.x))?;
            let alpha = a.lambda.unwrap_or(cmp.spectrum_x.values()[0]);
            let op = PositiveElement {
                alpha,
                radius: cmp.radius,
            };
            let l = radius - reach;
            let sweep = transfer_sweep(&gx, &gy.rerooted(&matched)?, &op, l, a.samples, a.seed)?;
            r.text("TRANSFER_ROOTS", format!("{} -> {matched}", a.x));
            r.text("TRANSFER_ALPHA", point(alpha));
            r.int("TRANSFER_BALL_RADIUS", l);
            r.int("TRANSFER_SAMPLES", sweep.samples);
            r.num("TRANSFER_MAX_GAP", sweep.max_gap);
            let ok = sweep.max_gap <= 1e-12;
            r.pass("TRANSFER", ok);
            ok
        }
        _ => {
            r.text("TRANSFER", "SKIPPED (local isomorphism radius below 2)");
            true
        }
    };
    r.pass("STATUS", ok);
    Ok((r, ok))
}

pub fn demo_shift(a: &DemoShiftArgs) -> Result<(Report, bool)> {
    let rep = shift_counterexample_report(a.depth, a.samples, a.seed)?;
    let mut r = Report::new("demo-shift");
    r.int("DEPTH", rep.depth as usize);
    r.num("R", rep.radius);
    for c in &rep.checks {
        r.text("CHECK", format!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail));
    }
    r.num("ONE_SIDED_VALUE", rep.one_sided_value);
    r.text("ONE_SIDED_CLAIMS_INVERTIBLE", yes_no(rep.one_sided_claims_invertible));
    r.text("LEFT_WITNESS", yes_no(rep.left_witness));
    for line in &rep.narrative {
        r.text("NARRATIVE", line.clone());
    }
    let ok = rep.all_passed();
    r.pass("STATUS", ok);
    Ok((r, ok))
}
