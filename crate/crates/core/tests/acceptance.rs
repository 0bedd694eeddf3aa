//! Acceptance criteria A1–A8, one PASS/FAIL line each.

use std::collections::VecDeque;
use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinshape::dirac::{DiracOperator, EnergyWeights, SpinorField};
use spinshape::mesh::io::write_metricmesh;
use spinshape::mesh::{HomologyBasis, MetricMesh};
use spinshape::reconstruct::{
    derive_spinor_from_embedding, diagnostics, integrate, spinor_from_layout,
};
use spinshape::shapes::{self, Shape};
use spinshape::solve::{minimize, Init, Mode, SolveConfig};
use spinshape::spin::{
    base_spin_structure, build_face_charts, enumerate_spin_classes, transition_lifts,
    vertex_lift_check, SpinStructure,
};
use spinshape::Quat;

/// Outcome of one criterion: failed sub-checks and a summary of measurements.
#[derive(Default)]
struct Report {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

fn embedded(shape: &Shape) -> (SpinorField, DiracOperator) {
    let (psi, spin, m) = derive_spinor_from_embedding(&shape.mesh, &shape.positions).unwrap();
    (psi, DiracOperator::new(m, spin).unwrap())
}

fn base_operator(m: MetricMesh) -> DiracOperator {
    let lifts = transition_lifts(&m, &build_face_charts(&m).unwrap());
    let spin = base_spin_structure(&m, &lifts).unwrap();
    DiracOperator::new(m, spin).unwrap()
}

fn random_quat<R: Rng>(rng: &mut R) -> Quat {
    loop {
        let q = Quat::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if q.norm2() > 1e-2 {
            return q;
        }
    }
}

/// Whether `a` and `b` differ by a face-sign coboundary, by propagating a
/// face sign assignment over the dual graph and checking every edge.
fn coboundary_equivalent(m: &MetricMesh, a: &SpinStructure, b: &SpinStructure) -> bool {
    let mesh = m.mesh();
    let mut sigma = vec![0i8; mesh.face_count()];
    sigma[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        for h in mesh.face_halfedges(f) {
            let g = mesh.opposite_face(h);
            if sigma[g] == 0 {
                let e = mesh.edge_of(h);
                sigma[g] = sigma[f] * a.signs[e] * b.signs[e];
                queue.push_back(g);
            }
        }
    }
    (0..mesh.edge_count()).all(|e| {
        let [f, g] = mesh.edge_faces(e);
        a.signs[e] * b.signs[e] == sigma[f] * sigma[g]
    })
}

fn a1() -> Report {
    let mut r = Report::default();
    for (name, shape, expected) in [
        ("icosphere", shapes::icosphere(2), 1usize),
        ("7-vertex torus", shapes::seven_vertex_torus(), 4),
        (
            "torus of revolution",
            shapes::torus_of_revolution(12, 8, 1.0, 0.4),
            4,
        ),
        ("double torus", shapes::double_torus(), 16),
    ] {
        let m = shape.metric();
        let lifts = transition_lifts(&m, &build_face_charts(&m).unwrap());
        let base = base_spin_structure(&m, &lifts).unwrap();
        let hb = HomologyBasis::new(m.mesh());
        let classes = enumerate_spin_classes(&m, &base, &hb);
        r.check(
            classes.len() == expected,
            format!("{name}: {} classes", classes.len()),
        );
        for c in &classes {
            let ok = vertex_lift_check(&m, &lifts, c).iter().all(|&x| x);
            r.check(
                ok,
                format!("{name}: class {} fails the vertex check", c.label()),
            );
        }
        if expected > 1 {
            for (i, a) in classes.iter().enumerate() {
                for b in &classes[i + 1..] {
                    r.check(
                        !coboundary_equivalent(&m, a, b),
                        format!(
                            "{name}: classes {} and {} are equivalent",
                            a.label(),
                            b.label()
                        ),
                    );
                }
            }
        }
        r.note(format!("{name} {}", classes.len()));
    }
    r
}

fn a2() -> Report {
    let mut r = Report::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for (name, m) in [
        ("7-vertex torus", shapes::seven_vertex_torus().metric()),
        ("icosphere 2", shapes::icosphere(2).metric()),
    ] {
        let op = base_operator(m);
        for _ in 0..5 {
            let psi = SpinorField::random(op.face_count(), &mut rng);
            let w = EnergyWeights::new(
                rng.gen_range(0.1..2.0),
                rng.gen_range(0.1..2.0),
                rng.gen_range(0.0..2.0),
                rng.gen_range(0.0..2.0),
            );
            let err = op.gradient_check(&psi, &w, 1e-5).unwrap();
            worst = worst.max(err);
            r.check(err <= 1e-5, format!("{name}: relative error {err:.2e}"));
        }
    }
    r.note(format!("max relative error {worst:.2e} (limit 1e-5)"));
    r
}

fn a3() -> Report {
    let mut r = Report::default();
    let (_, op) = embedded(&shapes::torus_of_revolution(12, 8, 1.0, 0.4));
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = SpinorField::random(op.face_count(), &mut rng);
    let w = EnergyWeights::new(1.0, 0.8, 0.5, 0.0);
    let e0 = op.energy_value(&psi, &w).unwrap().total;
    let p0: Vec<f64> = op.periods(&psi).iter().map(|p| p.norm()).collect();
    let (mut worst_e, mut worst_p) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let lambda = random_quat(&mut rng) * rng.gen_range(0.2..5.0);
        let scaled = psi.times(lambda);
        let e = op.energy_value(&scaled, &w).unwrap().total;
        worst_e = worst_e.max((e - e0).abs() / e0);
        for (p, q) in p0.iter().zip(op.periods(&scaled)) {
            let expected = p * lambda.norm2();
            worst_p = worst_p.max((q.norm() - expected).abs() / expected);
        }
    }
    r.check(
        worst_e <= 1e-10,
        format!("energy relative change {worst_e:.2e}"),
    );
    r.check(
        worst_p <= 1e-10,
        format!("period scaling error {worst_p:.2e}"),
    );
    r.note(format!(
        "energy {worst_e:.1e}, periods {worst_p:.1e} (limit 1e-10)"
    ));
    r
}

fn a4() -> Report {
    let mut r = Report::default();
    for (name, shape) in [
        ("icosphere", shapes::icosphere(3)),
        ("torus", shapes::torus_of_revolution(24, 12, 1.0, 0.4)),
    ] {
        let diam = shape.diameter();
        let (psi, op) = embedded(&shape);
        let mismatch = op.max_edge_mismatch(&psi);
        r.check(
            mismatch <= 1e-12 * diam,
            format!("{name}: mismatch {mismatch:.2e}"),
        );
        let rec = integrate(&op, &psi).unwrap();
        let shift = shape.positions[0] - rec.positions[0];
        let err = shape
            .positions
            .iter()
            .zip(&rec.positions)
            .map(|(p, q)| (*p - *q - shift).norm())
            .fold(0.0, f64::max);
        r.check(
            err <= 1e-10 * diam,
            format!("{name}: position error {err:.2e}"),
        );
        for p in op.periods(&psi) {
            r.check(
                p.norm() <= 1e-10 * diam,
                format!("{name}: period {:.2e}", p.norm()),
            );
        }
        r.note(format!("{name} mismatch {mismatch:.1e} position {err:.1e}"));
    }
    r
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn a5() -> Report {
    let mut r = Report::default();
    let mut energies = Vec::new();
    let target = 4.0 * PI;
    for n in [3, 4] {
        let shape = shapes::icosphere(n);
        let (psi, op) = embedded(&shape);
        let ch = op.channels(&psi).unwrap();
        let h = median(ch.faces.iter().map(|c| c.mean_curvature()).collect());
        r.check(
            (h - 1.0).abs() <= 0.02,
            format!("subdiv {n}: median H {h:.4}"),
        );
        let e = op
            .energy_value(&psi, &EnergyWeights::new(1.0, 1.0, 1.0, 0.0))
            .unwrap();
        energies.push((e.e_alpha, e.e_v));
        r.note(format!("subdiv {n} H {h:.4}"));
        if n == 4 {
            let d = diagnostics(op.metric(), &shape.positions, Some(&ch)).unwrap();
            for (label, w) in [
                ("channel", d.willmore_channel.unwrap()),
                ("dihedral", d.willmore_dihedral),
            ] {
                r.check(
                    (w - target).abs() <= 0.05 * target,
                    format!("{label} Willmore {w:.4}"),
                );
                r.note(format!("{label} W {w:.3}"));
            }
        }
    }
    let (ra, rv) = (energies[0].0 / energies[1].0, energies[0].1 / energies[1].1);
    r.check(ra >= 1.5, format!("alpha energy ratio {ra:.3}"));
    r.check(rv >= 1.5, format!("V energy ratio {rv:.3}"));
    r.note(format!("ratios alpha {ra:.2} V {rv:.2}"));
    r
}

fn a6() -> Report {
    let mut r = Report::default();
    let op = base_operator(shapes::torus_of_revolution(10, 7, 1.0, 0.4).metric());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst, mut worst_pyth) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let psi = SpinorField::random(op.face_count(), &mut rng);
        let w = EnergyWeights::new(
            rng.gen_range(0.1..3.0),
            rng.gen_range(0.1..3.0),
            rng.gen_range(0.0..3.0),
            rng.gen_range(0.0..3.0),
        );
        let net = op.energy_value(&psi, &w).unwrap().total;
        let three = op.three_integral_energy(&psi, &w).unwrap();
        worst = worst.max((net - three).abs() / net);
        for (f, c) in op.channels(&psi).unwrap().faces.iter().enumerate() {
            let density = op.dbar_i(&psi, f).norm2();
            let sum = (c.a * c.a + c.b * c.b + c.u * c.u + c.v * c.v) * c.scale;
            worst_pyth = worst_pyth.max((density - sum).abs() / density);
        }
    }
    r.check(worst <= 1e-12, format!("forms differ by {worst:.2e}"));
    r.check(
        worst_pyth <= 1e-12,
        format!("Pythagoras off by {worst_pyth:.2e}"),
    );
    r.note(format!(
        "forms {worst:.1e}, Pythagoras {worst_pyth:.1e} (limit 1e-12)"
    ));
    r
}

fn a7() -> Report {
    let mut r = Report::default();

    // (a) flat torus in the class of its planar layout
    let flat = shapes::flat_torus(8, 8, 1.0, 1.0);
    let m = flat.metric();
    let (_, spin) = spinor_from_layout(&m, flat.layout.as_ref().unwrap()).unwrap();
    let class = spin.label();
    let op = DiracOperator::new(m, spin).unwrap();
    let cfg = SolveConfig {
        mode: Mode::Isometric,
        init: Init::Ones,
        period_weight: 0.0,
        ..Default::default()
    };
    let res = minimize(&op, &cfg).unwrap();
    r.check(
        res.channel_residual <= 1e-6,
        format!("(a) channel residual {:.2e}", res.channel_residual),
    );
    r.check(
        res.trace.iter().all(|t| t.is_monotone()),
        "(a) trace not monotone",
    );
    r.note(format!(
        "(a) class {class} residual {:.1e}",
        res.channel_residual
    ));

    // (b) sphere from a random start
    let op = base_operator(shapes::icosphere(2).metric());
    let cfg = SolveConfig {
        mode: Mode::Conformal,
        init: Init::Random,
        rng_seed: 7,
        eps3_init: 1.0,
        eps3_floor: 1e-4,
        ..Default::default()
    };
    let res = minimize(&op, &cfg).unwrap();
    let periods = res.period_norms.iter().copied().fold(0.0, f64::max);
    r.check(
        res.converged,
        format!("(b) terminated {:?}", res.termination),
    );
    r.check(
        res.channel_residual <= 1e-3 && periods <= 1e-3,
        format!(
            "(b) residual {:.2e}, periods {periods:.2e}",
            res.channel_residual
        ),
    );
    let mesh = op.metric().mesh();
    let mean_edge = (0..mesh.edge_count())
        .map(|e| op.averaged_one_form(&res.psi, e).norm())
        .sum::<f64>()
        / mesh.edge_count() as f64;
    let mismatch = op.max_edge_mismatch(&res.psi);
    r.check(
        mismatch <= 1e-2 * mean_edge,
        format!("(b) max edge mismatch {mismatch:.3e} against mean edge {mean_edge:.3e}"),
    );
    r.check(
        res.trace.iter().all(|t| t.is_monotone()),
        "(b) trace not monotone",
    );
    r.note(format!(
        "(b) residual {:.1e} mismatch/edge {:.2}",
        res.channel_residual,
        mismatch / mean_edge
    ));
    r
}

fn a8() -> Report {
    let mut r = Report::default();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("torus.metricmesh");
    std::fs::write(
        &input,
        write_metricmesh(&shapes::torus_of_revolution(12, 8, 1.0, 0.4).metric()),
    )
    .unwrap();
    let run = |name: &str| -> Option<String> {
        let report = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_spinshape"))
            .arg("solve")
            .arg(&input)
            .args([
                "--spin-class",
                "01",
                "--init",
                "random",
                "--seed",
                "5",
                "--max-outer",
                "8",
                "--report",
            ])
            .arg(&report)
            .output()
            .ok()?
            .status;
        if !matches!(status.code(), Some(0 | 2)) {
            return None;
        }
        let text = std::fs::read_to_string(report).ok()?;
        Some(
            text.lines()
                .filter(|l| !l.trim_start().starts_with("\"timestamp\""))
                .collect::<Vec<_>>()
                .join("\n"),
        )
    };
    let (a, b) = (run("a.json"), run("b.json"));
    r.check(a.is_some() && b.is_some(), "solve did not produce reports");
    r.check(a == b, "reports differ");
    r.note(format!("{} bytes compared", a.map_or(0, |s| s.len())));
    r
}

/// Identifier, name, check and time budget in seconds.
type Criterion = (&'static str, &'static str, fn() -> Report, u64);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("A1", "spin-class counting", a1, 10),
        ("A2", "gradient correctness", a2, 10),
        ("A3", "gauge invariance", a3, 5),
        ("A4", "roundtrip exactness", a4, 10),
        ("A5", "curvature and Willmore recovery", a5, 30),
        ("A6", "functional equivalence", a6, 5),
        ("A7", "solve smoke tests", a7, 300),
        ("A8", "determinism", a8, 60),
    ];
    let mut failed = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let mut report = run();
        let elapsed = start.elapsed();
        report.check(
            elapsed <= Duration::from_secs(budget),
            format!("took {:.1} s, budget {budget} s", elapsed.as_secs_f64()),
        );
        let status = if report.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let detail = if report.failures.is_empty() {
            report.notes.join("; ")
        } else {
            report.failures.join("; ")
        };
        println!(
            "{status} {id} {name} [{:.1} s]: {detail}",
            elapsed.as_secs_f64()
        );
        failed += usize::from(!report.failures.is_empty());
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of 8 criteria failed");
        ExitCode::FAILURE
    }
}
