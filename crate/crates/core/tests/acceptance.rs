//! Acceptance gate. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use pauli_compat::channels::{mix, unital_decompose, PauliChannel, QubitChannelMap};
use pauli_compat::compatibility::{
    dual_certificate, ellipsoid_sample, is_compatible, optimal_primal, p_plus_minus, s_max, RegionGeometry,
};
use pauli_compat::dilations::induced_observable;
use pauli_compat::linalg::{CMat, C64};
use pauli_compat::observables::{Outcome, UnbiasedBinaryObservable};
use pauli_compat::verify::{
    busch_cross_check, certificate_check, instrument_consistency, instrument_consistency_against, primal_search,
    random_isometry, random_states,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Report {
    failures: usize,
}

impl Report {
    fn record(&mut self, id: usize, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} [{id:>2}] {name}: {detail}");
        if !ok {
            self.failures += 1;
        }
    }
}

// Oracles written against the closed forms, independent of the library.

fn oracle_p_plus(p: [f64; 4]) -> [f64; 3] {
    [
        2.0 * ((p[0] * p[1]).sqrt() + (p[2] * p[3]).sqrt()),
        2.0 * ((p[0] * p[2]).sqrt() + (p[1] * p[3]).sqrt()),
        2.0 * ((p[0] * p[3]).sqrt() + (p[1] * p[2]).sqrt()),
    ]
}

fn oracle_s_max(p: [f64; 4], n: [f64; 3]) -> f64 {
    let pp = oracle_p_plus(p);
    let mut q = 0.0;
    for j in 0..3 {
        if n[j] != 0.0 {
            if pp[j] == 0.0 {
                return 0.0;
            }
            q += n[j] * n[j] / (pp[j] * pp[j]);
        }
    }
    (1.0 / q.sqrt()).min(1.0)
}

/// `½(1 + s n·σ)` written out entrywise.
fn oracle_effect(s: f64, n: [f64; 3]) -> CMat {
    let h = 0.5 * s;
    CMat::from_vec(
        2,
        2,
        vec![
            C64::new(0.5 + h * n[2], 0.0),
            C64::new(h * n[0], -h * n[1]),
            C64::new(h * n[0], h * n[1]),
            C64::new(0.5 - h * n[2], 0.0),
        ],
    )
}

fn random_unit(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r > 1e-6 {
            return v.map(|x| x / r);
        }
    }
}

fn random_positive_p(rng: &mut ChaCha8Rng) -> [f64; 4] {
    let raw: [f64; 4] = std::array::from_fn(|_| rng.random_range(1e-3..1.0));
    let total: f64 = raw.iter().sum();
    raw.map(|x| x / total)
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}

fn axis(j: usize) -> [f64; 3] {
    let mut v = [0.0; 3];
    v[j] = 1.0;
    v
}

fn criterion_1(r: &mut Report) {
    let ch = PauliChannel::quantum_not();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut dirs: Vec<[f64; 3]> = (0..3).map(axis).collect();
    dirs.extend((0..1000).map(|_| random_unit(&mut rng)));
    let worst = dirs
        .iter()
        .map(|&n| (s_max(&ch, n).unwrap() - 2.0 / 3.0).abs())
        .fold(0.0, f64::max);
    r.record(
        1,
        "quantum NOT s_max = 2/3",
        worst <= 1e-12,
        format!("{} directions, max error {worst:.2e}", dirs.len()),
    );
}

fn criterion_2(r: &mut Report) {
    let mut worst = 0.0f64;
    for p in linspace(0.0, 1.0 / 3.0, 100) {
        let ch = PauliChannel::depolarizing(p).unwrap();
        let expected = 2.0 * (p + (p * (1.0 - 3.0 * p)).sqrt());
        for j in 0..3 {
            worst = worst.max((s_max(&ch, axis(j)).unwrap() - expected).abs());
        }
    }
    let quarter = PauliChannel::depolarizing(0.25).unwrap();
    let exact = (0..3).all(|j| s_max(&quarter, axis(j)).unwrap() == 1.0);
    r.record(
        2,
        "depolarizing closed form",
        worst <= 1e-12 && exact,
        format!("max error {worst:.2e}, p = 1/4 exactly 1: {exact}"),
    );
}

fn criterion_3(r: &mut Report) {
    let mut worst = 0.0f64;
    let mut off_axis = 0.0f64;
    for p in linspace(0.0, 1.0, 100) {
        let ch = PauliChannel::phase_damping(p).unwrap();
        let expected = 2.0 * (p * (1.0 - p)).sqrt();
        worst = worst.max((s_max(&ch, axis(2)).unwrap() - expected).abs());
        off_axis = off_axis.max(s_max(&ch, axis(0)).unwrap().abs());
        off_axis = off_axis.max(s_max(&ch, axis(1)).unwrap().abs());
    }
    let half = s_max(&PauliChannel::phase_damping(0.5).unwrap(), axis(2)).unwrap();
    r.record(
        3,
        "phase damping closed form",
        worst <= 1e-12 && off_axis == 0.0 && half == 1.0,
        format!("max error along z {worst:.2e}, max along x/y {off_axis:.1e}, p = 1/2 gives {half}"),
    );
}

fn criterion_4(r: &mut Report) {
    let mut s_grid = linspace(0.0, 1.0, 50);
    s_grid[0] = 1.1e-10;
    let t_grid: Vec<f64> = (1..=50).map(|i| i as f64 / 50.0).collect();
    let mut violations = 0;
    for &t in &t_grid {
        let ch = PauliChannel::luders_z(t).unwrap();
        for &s in &s_grid {
            if is_compatible(&UnbiasedBinaryObservable::x(s).unwrap(), &ch).compatible {
                violations += 1;
            }
        }
    }
    r.record(
        4,
        "Lüders channel blocks sharp x measurements",
        violations == 0,
        format!("{} grid points, {violations} reported compatible", s_grid.len() * t_grid.len()),
    );
}

fn criterion_5(r: &mut Report) {
    let grid = linspace(0.0, 1.0, 25);
    let thetas = linspace(0.0, PI, 25);
    let (mut compared, mut disagree, mut lib_disagree) = (0, 0, 0);
    let mut slice_disagree = 0;
    for &t in &grid {
        let ch = PauliChannel::measure_and_prepare(t).unwrap();
        for (k, &theta) in thetas.iter().enumerate() {
            let n = [theta.sin(), 0.0, theta.cos()];
            for &s in &grid {
                let lhs = s * s + t * t - s * s * t * t * theta.cos().powi(2);
                let verdict = is_compatible(&UnbiasedBinaryObservable::new(s, n).unwrap(), &ch).compatible;
                if k == 12 && (s * s + t * t - 1.0).abs() > 1e-10 && verdict != (s * s + t * t <= 1.0) {
                    slice_disagree += 1;
                }
                if (lhs - 1.0).abs() <= 1e-10 {
                    continue;
                }
                compared += 1;
                if verdict != (lhs <= 1.0) {
                    disagree += 1;
                }
                if busch_cross_check(s, t, theta) != (lhs <= 1.0) {
                    lib_disagree += 1;
                }
            }
        }
    }
    r.record(
        5,
        "measure-and-prepare matches the Busch ellipse",
        disagree == 0 && lib_disagree == 0 && slice_disagree == 0,
        format!(
            "{compared} points off the boundary band, {disagree} disagreements, \
             {slice_disagree} on the theta = pi/2 slice"
        ),
    );
}

struct Instance {
    ch: PauliChannel,
    p: [f64; 4],
    n: [f64; 3],
}

fn random_instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = random_positive_p(&mut rng);
            let n = random_unit(&mut rng);
            Instance {
                ch: PauliChannel::new(p).unwrap(),
                p,
                n,
            }
        })
        .collect()
}

fn criterion_6(r: &mut Report, instances: &[Instance]) {
    let start = Instant::now();
    let (mut effect_err, mut worst_gap, mut smax_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut infeasible = 0;
    for inst in instances {
        let expected = oracle_s_max(inst.p, inst.n);
        let primal = optimal_primal(&inst.ch, inst.n).unwrap();
        smax_err = smax_err.max((primal.s_max - expected).abs());
        let induced = induced_observable(&primal.observable(), &inst.ch).unwrap();
        effect_err = effect_err.max(
            induced
                .effect(Outcome::Plus)
                .as_mat()
                .max_abs_diff(&oracle_effect(expected, inst.n)),
        );
        let cert = dual_certificate(&inst.ch, inst.n).unwrap();
        let check = certificate_check(&cert, &inst.ch, inst.n).unwrap();
        if !check.feasible {
            infeasible += 1;
        }
        worst_gap = worst_gap.max((check.upper_bound - expected).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    r.record(
        6,
        "optimal primal and dual certificate",
        effect_err <= 1e-10 && smax_err <= 1e-10 && infeasible == 0 && worst_gap <= 1e-10 && elapsed < 5.0,
        format!(
            "{} instances, effect error {effect_err:.2e}, s_max error {smax_err:.2e}, \
             {infeasible} infeasible, max gap {worst_gap:.2e}, {elapsed:.2} s",
            instances.len()
        ),
    );
}

fn criterion_7(r: &mut Report, instances: &[Instance]) {
    let (mut channel_err, mut prob_err) = (0.0f64, 0.0f64);
    for (i, inst) in instances.iter().enumerate() {
        let primal = optimal_primal(&inst.ch, inst.n).unwrap();
        let aprime = primal.observable();
        let own = instrument_consistency(&aprime, &inst.ch, 20, i as u64).unwrap();
        let target = UnbiasedBinaryObservable::new(oracle_s_max(inst.p, inst.n), inst.n)
            .unwrap()
            .to_binary();
        let against = instrument_consistency_against(&aprime, &inst.ch, &target, 20, i as u64).unwrap();
        channel_err = channel_err.max(own.max_channel_error).max(against.max_channel_error);
        prob_err = prob_err.max(own.max_probability_error).max(against.max_probability_error);
    }
    r.record(
        7,
        "instrument reproduces channel and target statistics",
        channel_err <= 1e-9 && prob_err <= 1e-9,
        format!("20 states each, channel error {channel_err:.2e}, probability error {prob_err:.2e}"),
    );
}

fn criterion_8(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut mismatches = 0;
    for k in 0..1000 {
        let mut p = random_positive_p(&mut rng);
        // every tenth channel gets exact zeros
        if k % 10 == 0 {
            p[k / 10 % 4] = 0.0;
            let total: f64 = p.iter().sum();
            p = p.map(|x| x / total);
        }
        let ch = PauliChannel::new(p).unwrap();
        let n = random_unit(&mut rng);
        let pm = p_plus_minus(&ch);
        let s = s_max(&ch, n).unwrap();
        for other in ch.permuted_channels() {
            let po = p_plus_minus(&other);
            if po.p_plus != pm.p_plus || s_max(&other, n).unwrap() != s {
                mismatches += 1;
            }
        }
    }
    r.record(
        8,
        "invariance under the Klein-group relabellings",
        mismatches == 0,
        format!("1000 channels x 3 permutations, {mismatches} mismatches"),
    );
}

fn criterion_9(r: &mut Report) {
    let instances = random_instances(50, 9);
    let start = Instant::now();
    let (mut over, mut short) = (0.0f64, 0.0f64);
    for (i, inst) in instances.iter().enumerate() {
        let bound = oracle_s_max(inst.p, inst.n);
        let report = primal_search(&inst.ch, inst.n, 10_000, i as u64).unwrap();
        over = over.max(report.best_s - bound);
        short = short.max(bound - report.best_s);
    }
    r.record(
        9,
        "primal search stays below and approaches s_max",
        over <= 1e-9 && short <= 0.05,
        format!(
            "50 instances x 10^4 iterations, max excess {over:.2e}, max shortfall {short:.3}, {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    );
}

fn bloch_of_map(map: &QubitChannelMap) -> [[f64; 3]; 3] {
    map.bloch_action().0
}

fn criterion_10(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut bloch_err, mut state_err) = (0.0f64, 0.0f64);
    let mut failures = 0;
    for k in 0..200 {
        // a convex mixture of unitary channels is unital
        let terms = 1 + k % 4;
        let unitaries: Vec<QubitChannelMap> = (0..terms)
            .map(|_| QubitChannelMap::unitary(&random_isometry(2, 2, &mut rng)).unwrap())
            .collect();
        let raw: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let map = mix(&unitaries, &weights).unwrap();
        let t = bloch_of_map(&map);
        let Ok(dec) = unital_decompose(&t) else {
            failures += 1;
            continue;
        };
        let back = dec.bloch_matrix();
        for i in 0..3 {
            for j in 0..3 {
                bloch_err = bloch_err.max((back[i][j] - t[i][j]).abs());
            }
        }
        for rho in random_states(5, k as u64) {
            state_err = state_err.max(dec.apply(&rho).as_mat().max_abs_diff(map.apply(&rho).as_mat()));
        }
    }
    r.record(
        10,
        "unital channel decomposition round trip",
        failures == 0 && bloch_err <= 1e-9 && state_err <= 1e-9,
        format!("200 channels, {failures} failed, Bloch error {bloch_err:.2e}, state error {state_err:.2e}"),
    );
}

fn collinear(points: &[[f64; 3]], axis: usize) -> bool {
    points
        .iter()
        .all(|x| (0..3).all(|j| j == axis || x[j].abs() <= 1e-15))
}

fn criterion_11(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut bad_segments = 0;
    for k in 0..100 {
        let mut p = random_positive_p(&mut rng);
        let (a, b) = pairs[k % 6];
        p[a] = 0.0;
        p[b] = 0.0;
        let total: f64 = p.iter().sum();
        let p = p.map(|x| x / total);
        let ch = PauliChannel::new(p).unwrap();
        let sample = ellipsoid_sample(&ch, 50);
        let ok = match sample.geometry {
            RegionGeometry::Segment { axis } => {
                let half = oracle_p_plus(p)[axis];
                collinear(&sample.points, axis)
                    && sample.points.iter().all(|x| x[axis].abs() <= half + 1e-12)
                    && sample.points.iter().any(|x| (x[axis].abs() - half).abs() <= 1e-12)
            }
            _ => false,
        };
        if !ok {
            bad_segments += 1;
        }
    }

    let mut bad_points = 0;
    let mut unitary_channels: Vec<PauliChannel> = (0..4)
        .map(|k| {
            let mut p = [0.0; 4];
            p[k] = 1.0;
            PauliChannel::new(p).unwrap()
        })
        .collect();
    for _ in 0..20 {
        let u = QubitChannelMap::unitary(&random_isometry(2, 2, &mut rng)).unwrap();
        match unital_decompose(&u.bloch_action().0) {
            Ok(dec) => unitary_channels.push(dec.p),
            Err(_) => bad_points += 1,
        }
    }
    for ch in &unitary_channels {
        let sample = ellipsoid_sample(ch, 50);
        if sample.geometry != RegionGeometry::Point || sample.points != vec![[0.0; 3]] {
            bad_points += 1;
        }
    }

    let mut residual = 0.0f64;
    for inst in random_instances(100, 111) {
        let pp = oracle_p_plus(inst.p);
        let sample = ellipsoid_sample(&inst.ch, 200);
        for x in &sample.points {
            let lhs: f64 = (0..3).map(|j| (x[j] / pp[j]).powi(2)).sum();
            residual = residual.max((lhs - 1.0).abs());
        }
    }

    r.record(
        11,
        "degenerate region geometry",
        bad_segments == 0 && bad_points == 0 && residual <= 1e-9,
        format!(
            "100 two-zero channels, {bad_segments} not a segment; {} unitary channels, {bad_points} not a point; \
             boundary residual {residual:.2e}",
            unitary_channels.len()
        ),
    );
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };
    criterion_1(&mut report);
    criterion_2(&mut report);
    criterion_3(&mut report);
    criterion_4(&mut report);
    criterion_5(&mut report);
    let instances = random_instances(500, 6);
    criterion_6(&mut report, &instances);
    criterion_7(&mut report, &instances);
    criterion_8(&mut report);
    criterion_9(&mut report);
    criterion_10(&mut report);
    criterion_11(&mut report);
    if report.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
