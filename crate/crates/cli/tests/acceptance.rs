//! Desk-scale acceptance suite. Prints one `CRITERION k: PASS|FAIL` line per
//! criterion and exits nonzero if any fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use wgspec_core::covering::{deficiency_transfer, induced_covering, intertwining_residual, CoverOp};
use wgspec_core::orbital::{ball, ball_isomorphism, local_iso_check, orbital_graph, rayleigh_transfer, PositiveElement};
use wgspec_core::random::{self, ChaCha8Rng, Rng};
use wgspec_core::spectra::{deficiency_matrices, membership_by_deficiency, MEMBERSHIP_TOL};
use wgspec_core::{
    default_radius_bound, eigen, materialize, norm_bound, positive_element_graph, shift_counterexample_report,
    spectral_inclusion_check, spectrum, verify_covering, Complex64, ComplexMatrix, CoveringMap, FinSuppVector,
    GroupAction, GroupAlgebraElement, MealyAutomaton, Side, WeightedGraph,
};

type Dense = Vec<Vec<Complex64>>;

/// Operator of a graph straight from its arc list.
fn naive_operator(g: &WeightedGraph) -> Dense {
    let n = g.vertex_count();
    let mut m = vec![vec![Complex64::ZERO; n]; n];
    for a in g.arcs() {
        m[a.source][a.target] += a.weight;
    }
    m
}

fn naive_product(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn relative_gap(got: &ComplexMatrix, want: &Dense) -> f64 {
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (i, row) in want.iter().enumerate() {
        for (j, w) in row.iter().enumerate() {
            diff = diff.max((got[(i, j)] - w).norm());
            scale = scale.max(w.norm());
        }
    }
    diff / scale
}

fn to_nalgebra(m: &ComplexMatrix) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.dim(), m.dim(), |i, j| m[(i, j)])
}

fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

fn criterion_1() -> (bool, String) {
    let mut rng = random::rng(101);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(1..=20);
        let density = rng.random_range(0.1..0.6);
        let g = random::random_graph(&mut rng, n, density).unwrap();
        let density = rng.random_range(0.1..0.6);
        let h = random::random_graph(&mut rng, n, density).unwrap();
        let lambda = random::unit_disk(&mut rng);
        let mg = naive_operator(&g);
        let mh = naive_operator(&h);

        let scaled: Dense = mg.iter().map(|r| r.iter().map(|z| lambda * z).collect()).collect();
        let mut shifted = mg.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += lambda;
        }
        let adjoint: Dense = (0..n).map(|i| (0..n).map(|j| mg[j][i].conj()).collect()).collect();
        let checks = [
            relative_gap(&materialize(&g.scale(lambda)).unwrap(), &scaled),
            relative_gap(&materialize(&g.add_scalar(lambda)).unwrap(), &shifted),
            relative_gap(&materialize(&g.adjoint()).unwrap(), &adjoint),
            relative_gap(&materialize(&g.compose(&h).unwrap()).unwrap(), &naive_product(&mg, &mh)),
            relative_gap(&materialize(&g.compose(&g).unwrap()).unwrap(), &naive_product(&mg, &mg)),
        ];
        worst = checks.iter().fold(worst, |w, &c| w.max(c));
    }
    (worst <= 1e-12, format!("200 graphs, worst relative gap {worst:.2e}"))
}

/// Seeded mix of dense, sparse and upper triangular matrices.
fn matrices() -> Vec<ComplexMatrix> {
    let mut rng = random::rng(202);
    (0..200)
        .map(|i| {
            let n = rng.random_range(1..=30);
            match i % 3 {
                0 => random::random_matrix(&mut rng, n, 1.0),
                1 => random::random_matrix(&mut rng, n, 0.15),
                _ => random::random_triangular(&mut rng, n),
            }
        })
        .collect()
}

fn membership_radius(m: &ComplexMatrix) -> f64 {
    let b = m.norm_bound();
    if b > 0.0 {
        2.0 * b
    } else {
        1.0
    }
}

const BAND: f64 = 1e-5;

fn criterion_2(mats: &[ComplexMatrix]) -> (bool, String) {
    let results: Vec<(usize, usize, usize)> = mats
        .par_iter()
        .map(|m| {
            let a = to_nalgebra(m);
            let s = singular_values(&a).into_iter().fold(0.0, f64::max).max(0.5);
            let radius = membership_radius(m);
            let threshold = radius * MEMBERSHIP_TOL.sqrt();
            let mut points: Vec<Complex64> = (0..21)
                .flat_map(|i| {
                    (0..21).map(move |j| Complex64::new(-2.0 * s + 0.2 * s * i as f64, -2.0 * s + 0.2 * s * j as f64))
                })
                .collect();
            points.extend(spectrum(m).unwrap().values());
            let (mut checked, mut banded, mut disagree) = (0, 0, 0);
            for lambda in points {
                let shifted = &a - DMatrix::<Complex64>::identity(m.dim(), m.dim()) * lambda;
                let smin = singular_values(&shifted).into_iter().fold(f64::INFINITY, f64::min);
                if (smin - threshold).abs() < BAND {
                    banded += 1;
                    continue;
                }
                checked += 1;
                let v = membership_by_deficiency(m, lambda, radius, MEMBERSHIP_TOL).unwrap();
                if v.member != (smin <= threshold) {
                    disagree += 1;
                }
            }
            (checked, banded, disagree)
        })
        .collect();
    let (checked, banded, disagree) = results
        .iter()
        .fold((0, 0, 0), |acc, r| (acc.0 + r.0, acc.1 + r.1, acc.2 + r.2));
    (
        disagree == 0,
        format!("{checked} points compared, {banded} inside the boundary band, {disagree} disagreements"),
    )
}

fn criterion_3(mats: &[ComplexMatrix]) -> (bool, String) {
    let worst: Vec<(f64, f64)> = mats
        .par_iter()
        .enumerate()
        .map(|(i, m)| {
            let mut rng = random::rng(300 + i as u64);
            let norm = singular_values(&to_nalgebra(m)).into_iter().fold(0.0, f64::max);
            let radius = membership_radius(m);
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for _ in 0..5 {
                let lambda = random::unit_disk(&mut rng) * norm;
                let (left, right) = deficiency_matrices(m, lambda, radius);
                for d in [left, right] {
                    let ev = eigen::hermitian_eigenvalues(&d).unwrap();
                    lo = lo.min(ev[0]);
                    hi = hi.max(ev[ev.len() - 1]);
                }
            }
            (lo, hi)
        })
        .collect();
    let lo = worst.iter().map(|w| w.0).fold(f64::INFINITY, f64::min);
    let hi = worst.iter().map(|w| w.1).fold(f64::NEG_INFINITY, f64::max);
    (
        lo >= -1e-9 && hi <= 1.0 + 1e-9,
        format!("1000 deficiency pairs, eigenvalues within [{lo:.3e}, {hi:.12}]"),
    )
}

fn criterion_4() -> (bool, String) {
    let report = shift_counterexample_report(100, 100, 404).unwrap();
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let ok = report.all_passed() && report.one_sided_claims_invertible && report.left_witness;
    (
        ok,
        format!(
            "{} structural checks, {} failed, one-sided test claims invertible: {}, left witness: {}",
            report.checks.len(),
            failed.len(),
            report.one_sided_claims_invertible,
            report.left_witness
        ),
    )
}

fn covers() -> Vec<CoveringMap> {
    let mut rng = random::rng(505);
    (0..100)
        .map(|_| random::random_voltage_cover(&mut rng, 12, 4).unwrap().1)
        .collect()
}

fn criterion_5(cs: &[CoveringMap]) -> (bool, String) {
    let mut rng = random::rng(555);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for c in cs {
        let lambda = random::unit_disk(&mut rng);
        let induced = [
            induced_covering(c, CoverOp::Scale(lambda)).unwrap(),
            induced_covering(c, CoverOp::AddScalar(lambda)).unwrap(),
            induced_covering(c, CoverOp::Adjoint).unwrap(),
            induced_covering(c, CoverOp::Compose(c)).unwrap(),
        ];
        violations += verify_covering(c).len();
        worst = worst.max(intertwining_residual(c).unwrap());
        for d in &induced {
            violations += verify_covering(d).len();
            worst = worst.max(intertwining_residual(d).unwrap());
        }
    }
    (
        violations == 0 && worst <= 1e-12,
        format!("100 covers x 4 operations, {violations} violations, worst intertwining residual {worst:.2e}"),
    )
}

fn criterion_6(cs: &[CoveringMap]) -> (bool, String) {
    const TOL: f64 = 1e-8;
    let results: Vec<(bool, usize, usize, f64)> = cs
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let report = spectral_inclusion_check(c, TOL).unwrap();
            let radius = 2.0 * norm_bound(c.base());
            let radius = if radius > 0.0 { radius } else { 1.0 };
            let mut rng: ChaCha8Rng = random::rng(600 + i as u64);
            let values = report.base_spectrum.values();
            let (mut sampled, mut transferred) = (0, 0);
            for _ in 0..3 {
                let lambda = values[rng.random_range(0..values.len())];
                let t = deficiency_transfer(c, lambda, radius, Side::Right, TOL).unwrap();
                sampled += 1;
                if t.violations.is_empty() && t.base_distance <= TOL && t.cover_distance <= TOL && t.cover_member {
                    transferred += 1;
                }
            }
            (report.included(), sampled, transferred, report.subset.max_deviation)
        })
        .collect();
    let included = results.iter().filter(|r| r.0).count();
    let sampled: usize = results.iter().map(|r| r.1).sum();
    let transferred: usize = results.iter().map(|r| r.2).sum();
    let worst = results.iter().map(|r| r.3).fold(0.0, f64::max);
    (
        included == cs.len() && transferred == sampled,
        format!(
            "{included}/{} inclusions (worst deviation {worst:.2e}), {transferred}/{sampled} sampled points transferred",
            cs.len()
        ),
    )
}

fn odometer(level: usize) -> GroupAction {
    GroupAction::from_mealy(&MealyAutomaton::binary_odometer(), level).unwrap()
}

fn criterion_7() -> (bool, String) {
    let m = GroupAlgebraElement::parse_terms(&[("a", Complex64::ONE), ("a'", Complex64::ONE)]).unwrap();
    let mut notes = Vec::new();
    let mut ok = default_radius_bound(&m).unwrap() == 4.0;
    notes.push(format!("R = {}", default_radius_bound(&m).unwrap()));

    let mut worst_closed_form: f64 = 0.0;
    let mut worst_eigen_one: f64 = 0.0;
    let graphs: Vec<_> = (3..=5)
        .map(|n| orbital_graph(&odometer(n), &"0".repeat(n), &m).unwrap())
        .collect();
    for (n, g) in (3..=5).zip(&graphs) {
        let size = 1usize << n;
        let mut want: Vec<f64> = (0..size)
            .map(|k| 2.0 * (2.0 * std::f64::consts::PI * k as f64 / size as f64).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        let mut got: Vec<Complex64> = spectrum(&materialize(g.base()).unwrap()).unwrap().values().to_vec();
        got.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (z, w) in got.iter().zip(&want) {
            worst_closed_form = worst_closed_form.max((z - w).norm());
        }
        ok &= got.len() == want.len();

        for &alpha in &want {
            let s = positive_element_graph(g, &m, Complex64::from(alpha), 4.0).unwrap();
            let ev = eigen::hermitian_eigenvalues(&materialize(&s).unwrap()).unwrap();
            let gap = ev.iter().map(|x| (1.0 - x).abs()).fold(f64::INFINITY, f64::min);
            worst_eigen_one = worst_eigen_one.max(gap);
        }
    }
    ok &= worst_closed_form <= 1e-10 && worst_eigen_one <= 1e-9;
    notes.push(format!("closed form gap {worst_closed_form:.2e}"));
    notes.push(format!("eigenvalue 1 gap {worst_eigen_one:.2e}"));

    let mut rng = random::rng(707);
    let mut worst_transfer: f64 = 0.0;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (gx, gy) = (&graphs[i], &graphs[j]);
        let predicted = (1usize << (i + 3 - 1)) - 1;
        let report = local_iso_check(gx, gy, predicted + 1).unwrap();
        let passes = report.radii[..=predicted].iter().all(|r| r.passed()) && !report.radii[predicted + 1].passed();
        ok &= passes;
        notes.push(format!(
            "levels {}/{} iso radius {:?} (predicted {predicted})",
            i + 3,
            j + 3,
            report.max_passing_radius()
        ));

        let op = PositiveElement {
            alpha: Complex64::from(1.0),
            radius: 4.0,
        };
        let l = predicted - 2;
        let matched = ball_isomorphism(gx, gx.root(), gy, gy.root(), predicted).unwrap().unwrap();
        let support: Vec<String> = ball(gx, gx.root(), l).unwrap().base().vertices().to_vec();
        for _ in 0..50 {
            let eta = FinSuppVector::from_entries(support.iter().map(|v| (v.clone(), random::unit_disk(&mut rng))));
            let t = rayleigh_transfer(gx, gy, &op, &eta, l, &matched).unwrap();
            worst_transfer = worst_transfer.max(t.gap());
        }
    }
    ok &= worst_transfer <= 1e-12;
    notes.push(format!("transfer gap {worst_transfer:.2e} over 150 vectors"));
    (ok, notes.join(", "))
}

const TWO_CYCLE: &str = "wgraph v1\nvertex a\nvertex b\narc a b 1 0 1\narc b a 0.5 -0.25 0\narc b b 0.3 0.1 2\n";
const VOLTAGES: &str = "voltage v1\ndegree 3\narc 0 2 3 1\narc 2 1 3 2\n";
const ODOMETER: &str = "action v1\nmealy 2\nstate a 1 e 0 a\nstate e 0 e 1 e\nlevel 3\n";
const ELEMENT: &str = "element v1\na 1 0\na' 1 0\n";

fn run_all(dir: &Path, jobs: &str) -> Vec<(String, Vec<u8>)> {
    let commands: &[&[&str]] = &[
        &["graph-op", "scale", "g.wg", "--lambda", "0.5-1i", "--out", "s.wg"],
        &["graph-op", "add", "g.wg", "--lambda", "2i", "--out", "a.wg"],
        &["graph-op", "adjoint", "g.wg", "--out", "j.wg"],
        &["graph-op", "compose", "g.wg", "g.wg", "--out", "c.wg"],
        &["graph-op", "deficiency", "g.wg", "--lambda", "0.1", "--out", "d.wg"],
        &["spectrum", "g.wg", "--check-lambda", "0", "--check-lambda", "1+1i", "--scatter", "pts.txt"],
        &["matrix", "g.wg", "--out", "g.mat"],
        &["cover", "lift", "g.wg", "v.volt", "--out", "lift"],
        &["cover", "verify", "lift.cov"],
        &["cover", "include", "lift.cov"],
        &["cover", "include", "--random", "4", "--seed", "9"],
        &["orbital", "o.act", "m.elt", "000", "0000", "--level-y", "4", "--seed", "3"],
        &["demo-shift", "--depth", "100", "--samples", "100", "--seed", "7"],
    ];
    let outputs = ["s.wg", "a.wg", "j.wg", "c.wg", "d.wg", "pts.txt", "g.mat", "lift.wg", "lift.cov"];
    let mut captured = Vec::new();
    for args in commands {
        for json in [false, true] {
            let mut cmd = Command::new(env!("CARGO_BIN_EXE_wgspec"));
            cmd.current_dir(dir).args(["--jobs", jobs]);
            if json {
                cmd.arg("--json");
            }
            let out = cmd.args(*args).output().expect("binary runs");
            captured.push((format!("{} json={json}", args.join(" ")), out.stdout));
            captured.push((format!("{} exit", args.join(" ")), vec![out.status.code().unwrap_or(-1) as u8]));
        }
    }
    for f in outputs {
        captured.push((f.to_string(), fs::read(dir.join(f)).unwrap_or_default()));
    }
    captured
}

fn criterion_8() -> (bool, String) {
    let runs: Vec<Vec<(String, Vec<u8>)>> = [("1", 0), ("1", 1), ("4", 2)]
        .iter()
        .map(|(jobs, _)| {
            let dir = tempfile::tempdir().unwrap();
            fs::write(dir.path().join("g.wg"), TWO_CYCLE).unwrap();
            fs::write(dir.path().join("v.volt"), VOLTAGES).unwrap();
            fs::write(dir.path().join("o.act"), ODOMETER).unwrap();
            fs::write(dir.path().join("m.elt"), ELEMENT).unwrap();
            run_all(dir.path(), jobs)
        })
        .collect();
    let failures: Vec<u8> = runs[0].iter().filter_map(|(name, v)| name.ends_with("exit").then_some(v[0])).collect();
    let mut differing = Vec::new();
    for run in &runs[1..] {
        for ((name, a), (_, b)) in runs[0].iter().zip(run) {
            if a != b {
                differing.push(name.clone());
            }
        }
    }
    let nonzero = failures.iter().filter(|&&c| c != 0).count();
    let empty = runs[0].iter().filter(|(_, v)| v.is_empty()).count();
    (
        differing.is_empty() && nonzero == 0 && empty == 0,
        format!(
            "{} captured artifacts x 3 runs, {} differ, {nonzero} nonzero exits, {empty} empty outputs{}",
            runs[0].len(),
            differing.len(),
            differing.first().map(|d| format!(" (first: {d})")).unwrap_or_default()
        ),
    )
}

fn main() -> ExitCode {
    let mats = matrices();
    let cs = covers();
    let criteria: Vec<(usize, Box<dyn Fn() -> (bool, String) + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&mats))),
        (3, Box::new(|| criterion_3(&mats))),
        (4, Box::new(criterion_4)),
        (5, Box::new(|| criterion_5(&cs))),
        (6, Box::new(|| criterion_6(&cs))),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
    ];
    let mut all = true;
    for (k, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = run();
        all &= ok;
        println!(
            "CRITERION {k}: {} {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
