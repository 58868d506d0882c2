//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use conewise::certificates::{check_super_with_tol, family_attainment, family_cw_inf, EigenPairCert, SuperEigenCert};
use conewise::cone::{hilbert_dist, thompson_dist, upper_ratio, ConeVector, Gauge, SliceConfig};
use conewise::operators::{NonnegMatrix, OperatorSpec};
use conewise::oracles::{karp_cycle_mean, perron_2x2, perron_root, policy_enumeration, power_bracket};
use conewise::solver::{
    bonsall_until, contraction_constant, eigen_solve, growth_rate, growth_rate_whole, normalized_shift, shifted_ratio_bound,
    super_eigen_join, uniqueness_contraction_check, whole_space_radius, EigenSolveResult, SolverConfig, UniquenessConfig,
    UniquenessOutcome,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// A solved instance kept for the cross-cutting criteria.
struct Solved {
    label: String,
    spec: OperatorSpec,
    result: EigenSolveResult,
    primitive_linear: bool,
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + tag)
}

fn positive_matrix(r: &mut ChaCha8Rng, n: usize) -> NonnegMatrix {
    NonnegMatrix::new((0..n).map(|_| (0..n).map(|_| r.gen_range(0.01..1.0)).collect()).collect()).unwrap()
}

fn sparse_matrix(r: &mut ChaCha8Rng, n: usize, density: f64) -> NonnegMatrix {
    NonnegMatrix::new(
        (0..n)
            .map(|_| (0..n).map(|_| if r.gen_bool(density) { r.gen_range(0.05..1.0) } else { 0.0 }).collect())
            .collect(),
    )
    .unwrap()
}

fn interior(r: &mut ChaCha8Rng, n: usize) -> ConeVector {
    ConeVector::interior((0..n).map(|_| r.gen_range(-3.0f64..3.0).exp()).collect()).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn c1_linear(solved: &mut Vec<Solved>) -> Outcome {
    let mut r = rng(1);
    let cfg = SolverConfig::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst2 = 0.0f64;
    let mut failures = Vec::new();
    for k in 0..200 {
        let n = 2 + k % 5;
        let a = positive_matrix(&mut r, n);
        let spec = OperatorSpec::Linear(a.clone());
        let res = eigen_solve(&spec, &cfg).unwrap();
        let b = power_bracket(&a, &vec![1.0; n], 100_000, 1e-14).unwrap();
        let rel = (res.radius - b.midpoint()).abs() / b.midpoint();
        worst = worst.max(rel);
        if rel > 1e-8 {
            failures.push(format!("#{k} rel {rel:e}"));
        }
        if n == 2 {
            let exact = perron_2x2(a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1)).unwrap();
            let gap = (res.radius - exact).abs();
            worst2 = worst2.max(gap);
            if gap > 1e-10 {
                failures.push(format!("#{k} 2x2 gap {gap:e}"));
            }
        }
        solved.push(Solved { label: format!("linear#{k}"), spec, result: res, primitive_linear: true });
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(10);
    outcome(
        failures.is_empty() && fast,
        format!("200 matrices, max rel diff {worst:.2e}, max 2x2 gap {worst2:.2e}, {:.2}s {}", elapsed.as_secs_f64(), failures.join("; ")),
    )
}

fn random_maxplus(r: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = r.gen_range(2..=6);
    let density = r.gen_range(0.5..=1.0);
    loop {
        let w: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..n).map(|_| if r.gen_bool(density) { r.gen_range(-2.0..2.0) } else { f64::NEG_INFINITY }).collect())
            .collect();
        if w.iter().all(|row| row.iter().any(|v| v.is_finite())) {
            return w;
        }
    }
}

fn c2_maxplus(solved: &mut Vec<Solved>) -> Outcome {
    let mut r = rng(2);
    let cfg = SolverConfig::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut shifted = 0;
    for k in 0..100 {
        let w = random_maxplus(&mut r);
        let spec = OperatorSpec::maxplus(w.clone()).unwrap();
        let res = eigen_solve(&spec, &cfg).unwrap();
        let want = karp_cycle_mean(&w).unwrap().exp();
        let rel = if want == 0.0 { res.radius } else { (res.radius - want).abs() / want };
        worst = worst.max(rel);
        if rel > 1e-8 {
            failures.push(format!("#{k} got {} want {want}", res.radius));
        }
        if res.shift > 0.0 {
            shifted += 1;
        }
        solved.push(Solved { label: format!("maxplus#{k}"), spec, result: res, primitive_linear: false });
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_secs(10);
    outcome(
        failures.is_empty() && fast,
        format!("100 instances ({shifted} shifted), max rel diff {worst:.2e}, {:.2}s {}", elapsed.as_secs_f64(), failures.join("; ")),
    )
}

fn c3_families(solved: &mut Vec<Solved>) -> Outcome {
    let mut r = rng(3);
    let cfg = SolverConfig::default();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..50 {
        let members: Vec<NonnegMatrix> = (0..r.gen_range(1..=3)).map(|_| sparse_matrix(&mut r, 4, 0.7)).collect();
        let sup = OperatorSpec::sup(members.clone()).unwrap();
        let res = eigen_solve(&sup, &cfg).unwrap();
        let opt = policy_enumeration(&sup, perron_root).unwrap();
        let gap = (res.radius - opt.value).abs();
        worst = worst.max(gap / opt.value.max(1.0));
        if gap > 1e-8 * opt.value.max(1.0) {
            failures.push(format!("sup#{k} radius {} policy max {}", res.radius, opt.value));
        }
        match family_attainment(&sup, &EigenPairCert::from_solve(&res).unwrap(), &[]) {
            Ok(rep) if rep.attained && rep.witness_optimal => {}
            Ok(rep) => failures.push(format!("sup#{k} witness {:?} radius {} vs {}", rep.witness, rep.witness_radius, rep.policy_max)),
            Err(e) => failures.push(format!("sup#{k} {e}")),
        }
        solved.push(Solved { label: format!("sup#{k}"), spec: sup, result: res, primitive_linear: false });

        let inf = OperatorSpec::inf(members).unwrap();
        let samples: Vec<ConeVector> = (0..5).map(|_| interior(&mut r, 4)).collect();
        let rep = family_cw_inf(&inf, &samples, &cfg).unwrap();
        if !(rep.agrees && rep.samples_consistent) {
            failures.push(format!("inf#{k} solved {} policy min {}", rep.solved, rep.policy_min));
        }
        let res = eigen_solve(&inf, &cfg).unwrap();
        solved.push(Solved { label: format!("inf#{k}"), spec: inf, result: res, primitive_linear: false });
    }
    outcome(failures.is_empty(), format!("50 sup + 50 inf families, max rel gap {worst:.2e} {}", failures.join("; ")))
}

fn c4_monotone(solved: &[Solved]) -> Outcome {
    let mut bad = Vec::new();
    for s in solved {
        for (k, w) in s.result.trace.windows(2).enumerate() {
            if w[1].lambda > w[0].lambda + 1e-11 {
                bad.push(format!("{} step {k}: {} -> {}", s.label, w[0].lambda, w[1].lambda));
            }
        }
    }
    outcome(bad.is_empty(), format!("{} traces {}", solved.len(), bad.join("; ")))
}

fn c5_duality(solved: &[Solved]) -> Outcome {
    let mut bad = Vec::new();
    let (mut checked, mut primitive, mut widest) = (0, 0, 0.0f64);
    for s in solved.iter().filter(|s| s.result.eigvec.is_interior()) {
        checked += 1;
        let (lo, hi) = s.result.bracket;
        let r = s.result.radius;
        let slack = 1e-8 * r.max(1.0);
        if lo > r + slack || r > hi + slack {
            bad.push(format!("{}: [{lo}, {hi}] vs {r}", s.label));
        }
        if s.primitive_linear {
            primitive += 1;
            widest = widest.max(hi - lo);
            if hi - lo >= 1e-8 {
                bad.push(format!("{}: width {:e}", s.label, hi - lo));
            }
        }
    }
    outcome(bad.is_empty(), format!("{checked} interior eigenvectors, {primitive} primitive, widest {widest:.2e} {}", bad.join("; ")))
}

fn c6_chain(solved: &[Solved]) -> Outcome {
    let rows: Vec<(String, f64, f64, f64, usize)> = solved
        .par_iter()
        .map(|s| {
            let r_tilde = s.result.radius;
            let growth = growth_rate(&s.spec, &ConeVector::ones(s.spec.dim()), 2000).unwrap().rate;
            let b = bonsall_until(&s.spec, 20_000_000, r_tilde * (1.0 + 5e-7)).unwrap();
            (s.label.clone(), r_tilde, growth, b.value, b.steps)
        })
        .collect();
    let mut bad = Vec::new();
    let mut max_steps = 0;
    for (label, rt, g, b, steps) in &rows {
        max_steps = max_steps.max(*steps);
        let ok = *rt <= g * (1.0 + 1e-6) + 1e-12
            && *g <= b * (1.0 + 1e-6) + 1e-12
            && rel_close(*rt, *g, 1e-6)
            && rel_close(*g, *b, 1e-6)
            && rel_close(*rt, *b, 1e-6);
        if !ok {
            bad.push(format!("{label}: eig {rt} growth {g} bonsall {b}"));
        }
    }
    outcome(bad.is_empty(), format!("{} instances, up to {max_steps} Bonsall powers {}", rows.len(), bad.join("; ")))
}

fn random_slice(r: &mut ChaCha8Rng, n: usize) -> SliceConfig {
    let unit = interior(r, n);
    let gauge = if r.gen_bool(0.5) {
        Gauge::Unorm
    } else {
        Gauge::Functional { weights: (0..n).map(|_| r.gen_range(0.1..2.0)).collect() }
    };
    SliceConfig::new(gauge, unit).unwrap()
}

fn c7_contraction() -> Outcome {
    let mut r = rng(7);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    let mut pairs = 0;
    for inst in 0..20 {
        let n = r.gen_range(2..=6);
        let slice = random_slice(&mut r, n);
        let s = r.gen_range(-6.0f64..1.0).exp();
        let radius = r.gen_range(0.01..3.0);
        let v = slice.project(&interior(&mut r, n)).unwrap();
        let su = slice.unit().scaled(s).unwrap();
        let m0 = upper_ratio(&su, &v).unwrap().value();
        let c = contraction_constant(radius, m0).unwrap().c;
        if !(c > 0.0 && c < 1.0) {
            bad.push(format!("instance {inst}: c = {c}"));
        }
        let in_ball = |r: &mut ChaCha8Rng| {
            let shift: Vec<f64> = (0..n).map(|_| r.gen_range(-radius / 2.0..radius / 2.0)).collect();
            ConeVector::new(v.coords().iter().zip(&shift).map(|(a, t)| a * t.exp()).collect()).unwrap()
        };
        let mut taken = 0;
        while taken < 50 {
            let x = in_ball(&mut r);
            let y = in_ball(&mut r);
            let d = hilbert_dist(&x, &y).unwrap();
            if d < 1e-3 {
                continue;
            }
            let d_after = hilbert_dist(&normalized_shift(&slice, s, &x).unwrap(), &normalized_shift(&slice, s, &y).unwrap()).unwrap();
            let factor = d_after / d;
            worst_excess = worst_excess.max(factor - c);
            if factor > c + 1e-12 {
                bad.push(format!("instance {inst}: factor {factor} > c {c}"));
            }
            taken += 1;
            pairs += 1;
        }
    }
    outcome(bad.is_empty(), format!("{pairs} pairs, max(factor - c) = {worst_excess:.3e} {}", bad.join("; ")))
}

fn c8_lemma() -> Outcome {
    let mut r = rng(8);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..10_000 {
        let n = r.gen_range(1..=6);
        let u = interior(&mut r, n);
        let x = interior(&mut r, n);
        let y = interior(&mut r, n);
        let xu = ConeVector::new(x.coords().iter().zip(u.coords()).map(|(a, b)| a + b).collect()).unwrap();
        let yu = ConeVector::new(y.coords().iter().zip(u.coords()).map(|(a, b)| a + b).collect()).unwrap();
        let lhs = upper_ratio(&xu, &yu).unwrap().value();
        let rhs = shifted_ratio_bound(upper_ratio(&u, &x).unwrap().value(), upper_ratio(&x, &y).unwrap().value());
        worst = worst.max((lhs - rhs) / rhs);
        if lhs > rhs * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("10000 triples, {violations} violations, max relative excess {worst:.3e}"))
}

fn random_operator(r: &mut ChaCha8Rng, n: usize, variant: usize) -> OperatorSpec {
    let family = |r: &mut ChaCha8Rng| (0..r.gen_range(1..=3)).map(|_| sparse_matrix(r, n, 0.8)).collect::<Vec<_>>();
    match variant {
        0 => OperatorSpec::Linear(sparse_matrix(r, n, 0.8)),
        1 => OperatorSpec::sup(family(r)).unwrap(),
        2 => OperatorSpec::inf(family(r)).unwrap(),
        3 => {
            let rows = (0..n)
                .map(|_| {
                    (0..r.gen_range(1..=2))
                        .map(|_| (0..r.gen_range(1..=2)).map(|_| (0..n).map(|_| r.gen_range(0.0..1.0)).collect()).collect())
                        .collect()
                })
                .collect();
            OperatorSpec::minmax(rows).unwrap()
        }
        4 => OperatorSpec::maxplus(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j || r.gen_bool(0.7) { r.gen_range(-2.0..2.0) } else { f64::NEG_INFINITY }).collect())
                .collect(),
        )
        .unwrap(),
        5 => {
            let slice = random_slice(r, n);
            OperatorSpec::perturbed(OperatorSpec::Linear(sparse_matrix(r, n, 0.8)), r.gen_range(0.01..2.0), slice).unwrap()
        }
        6 => OperatorSpec::power(OperatorSpec::sup(family(r)).unwrap(), r.gen_range(1..=3)).unwrap(),
        _ => OperatorSpec::whole_space(OperatorSpec::inf(family(r)).unwrap()).unwrap(),
    }
}

fn c9_metrics() -> Outcome {
    let mut r = rng(9);
    let mut violations = Vec::new();
    let mut checks = 0usize;
    let tol = 1e-12;
    for k in 0..10_000 {
        let n = r.gen_range(1..=6);
        let x = interior(&mut r, n);
        let y = interior(&mut r, n);
        let z = interior(&mut r, n);
        let t = r.gen_range(-4.0f64..4.0).exp();
        let (dxy, dyx) = (hilbert_dist(&x, &y).unwrap(), hilbert_dist(&y, &x).unwrap());
        let (dxz, dzy) = (hilbert_dist(&x, &z).unwrap(), hilbert_dist(&z, &y).unwrap());
        let (txy, tyx) = (thompson_dist(&x, &y).unwrap(), thompson_dist(&y, &x).unwrap());
        let (txz, tzy) = (thompson_dist(&x, &z).unwrap(), thompson_dist(&z, &y).unwrap());
        let scale = 1.0 + dxy.max(txy);
        let mut fail = |what: &str, ok: bool| {
            checks += 1;
            if !ok {
                violations.push(format!("#{k} {what}"));
            }
        };
        fail("hilbert triangle", dxy <= dxz + dzy + tol * scale);
        fail("thompson triangle", txy <= txz + tzy + tol * scale);
        fail("hilbert symmetry", (dxy - dyx).abs() <= tol * scale);
        fail("thompson symmetry", (txy - tyx).abs() <= tol * scale);
        let d_scaled = hilbert_dist(&x.scaled(t).unwrap(), &y).unwrap();
        fail("projective invariance", (d_scaled - dxy).abs() <= tol * (scale + t.ln().abs()));

        let slice = random_slice(&mut r, n);
        let (xs, ys) = (slice.project(&x).unwrap(), slice.project(&y).unwrap());
        let (d, tb) = (hilbert_dist(&xs, &ys).unwrap(), thompson_dist(&xs, &ys).unwrap());
        fail("half d <= thompson on slice", 0.5 * d <= tb + tol * (1.0 + d));
        fail("thompson <= d on slice", tb <= d + tol * (1.0 + d));

        let h = random_operator(&mut r, n, k % 8);
        let (hx, hy) = (h.restrict_to_cone().apply(&x).unwrap(), h.restrict_to_cone().apply(&y).unwrap());
        let dh = hilbert_dist(&hx, &hy).unwrap();
        let th = thompson_dist(&hx, &hy).unwrap();
        fail(&format!("{} hilbert nonexpansive", h.kind()), dh <= dxy + tol * scale);
        fail(&format!("{} thompson nonexpansive", h.kind()), th <= txy + tol * scale);
    }
    violations.truncate(5);
    outcome(violations.is_empty(), format!("10000 rounds, {checks} checks, violations: {}", violations.join("; ")))
}

fn c10_whole_space() -> Outcome {
    let mut r = rng(10);
    let cfg = SolverConfig::default();
    let mut bad = Vec::new();
    for k in 0..30 {
        let n = r.gen_range(2..=4);
        let members: Vec<NonnegMatrix> = (0..r.gen_range(1..=3)).map(|_| sparse_matrix(&mut r, n, 0.8)).collect();
        let sup = OperatorSpec::sup(members.clone()).unwrap();
        let whole = OperatorSpec::whole_space(sup.clone()).unwrap();
        let w = whole_space_radius(&whole, &cfg).unwrap();
        let oracle_c = policy_enumeration(&sup, perron_root).unwrap().value;
        let oracle_neg = policy_enumeration(&OperatorSpec::inf(members).unwrap(), perron_root).unwrap().value;
        let mut orbit_max = 0.0f64;
        let mut starts = vec![vec![1.0; n], vec![-1.0; n]];
        starts.extend((0..6).map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()));
        for x0 in &starts {
            orbit_max = orbit_max.max(growth_rate_whole(&whole, x0, 2000).unwrap().rate);
        }
        let checks = [
            ("r_C vs policy max", rel_close(w.r_c, oracle_c, 1e-8)),
            ("r_-C vs policy min", rel_close(w.r_minus_c, oracle_neg, 1e-8)),
            ("r_X = max", w.r_x == w.r_c.max(w.r_minus_c)),
            ("r_X vs orbit growth", rel_close(w.r_x, orbit_max, 1e-6)),
            ("r_-C <= r_C", w.r_minus_c <= w.r_c * (1.0 + 1e-9)),
        ];
        for (what, ok) in checks {
            if !ok {
                bad.push(format!("#{k} {what}: r_C {} r_-C {} r_X {} oracles {oracle_c} {oracle_neg} orbit {orbit_max}", w.r_c, w.r_minus_c, w.r_x));
            }
        }
    }
    outcome(bad.is_empty(), format!("30 instances {}", bad.join("; ")))
}

fn scaled_whole(r: &mut ChaCha8Rng, kind: usize, n: usize) -> OperatorSpec {
    let members: Vec<NonnegMatrix> = (0..r.gen_range(1..=3)).map(|_| positive_matrix(r, n)).collect();
    let base = match kind % 3 {
        0 => OperatorSpec::Linear(members[0].clone()),
        1 => OperatorSpec::sup(members).unwrap(),
        _ => OperatorSpec::inf(members).unwrap(),
    };
    OperatorSpec::whole_space(base).unwrap()
}

fn rescale(spec: &OperatorSpec, t: f64) -> OperatorSpec {
    let scale = |ms: &[NonnegMatrix]| ms.iter().map(|m| m.scaled(t).unwrap()).collect::<Vec<_>>();
    let base = match spec.restrict_to_cone() {
        OperatorSpec::Linear(a) => OperatorSpec::Linear(a.scaled(t).unwrap()),
        OperatorSpec::Sup(f) => OperatorSpec::sup(scale(f.members())).unwrap(),
        OperatorSpec::Inf(f) => OperatorSpec::inf(scale(f.members())).unwrap(),
        _ => unreachable!(),
    };
    OperatorSpec::whole_space(base).unwrap()
}

fn c11_uniqueness() -> Outcome {
    let mut r = rng(11);
    let cfg = SolverConfig::default();
    let check = UniquenessConfig { trials: 10, horizon: 2000, seed: 11, ..UniquenessConfig::default() };
    let mut bad = Vec::new();
    let (mut worst_rate_excess, mut worst_residual) = (f64::NEG_INFINITY, 0.0f64);
    for k in 0..30 {
        let n = r.gen_range(2..=5);
        let raw = scaled_whole(&mut r, k, n);
        let r_x = whole_space_radius(&raw, &cfg).unwrap().r_x;

        let target = r.gen_range(0.2..0.95);
        let small = rescale(&raw, target / r_x);
        let rep = uniqueness_contraction_check(&small, &cfg, &check).unwrap();
        match rep.outcome {
            UniquenessOutcome::Contracting { max_rate, verified, .. } => {
                worst_rate_excess = worst_rate_excess.max(max_rate - rep.r_x);
                if !verified {
                    bad.push(format!("#{k} rate {max_rate} > r_X {}", rep.r_x));
                }
            }
            other => bad.push(format!("#{k} expected contraction, got {other:?}")),
        }

        let unit = rescale(&raw, 1.0 / r_x);
        let rep = uniqueness_contraction_check(&unit, &cfg, &check).unwrap();
        match rep.outcome {
            UniquenessOutcome::NonUnique { witness, residual, .. } => {
                worst_residual = worst_residual.max(residual);
                if residual >= 1e-8 || witness.iter().all(|v| *v == 0.0) {
                    bad.push(format!("#{k} witness residual {residual:e}"));
                }
            }
            other => bad.push(format!("#{k} expected a fixed point, got {other:?} (r_X {})", rep.r_x)),
        }
    }
    outcome(
        bad.is_empty(),
        format!("30 + 30 instances, max(rate - r_X) {worst_rate_excess:.2e}, max witness residual {worst_residual:.2e} {}", bad.join("; ")),
    )
}

/// Block-cyclic matrix with positive blocks: period `p`, block size `b`.
fn block_cyclic(r: &mut ChaCha8Rng, p: usize, b: usize) -> NonnegMatrix {
    let n = p * b;
    let mut rows = vec![vec![0.0; n]; n];
    for blk in 0..p {
        let next = (blk + 1) % p;
        for i in 0..b {
            for j in 0..b {
                rows[blk * b + i][next * b + j] = r.gen_range(0.05..1.0);
            }
        }
    }
    NonnegMatrix::new(rows).unwrap()
}

fn weighted_cycle(r: &mut ChaCha8Rng, n: usize) -> NonnegMatrix {
    let mut rows = vec![vec![0.0; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[(i + 1) % n] = r.gen_range(0.2..3.0);
    }
    NonnegMatrix::new(rows).unwrap()
}

fn c12_join() -> Outcome {
    let mut r = rng(12);
    let mut bad = Vec::new();
    let mut count = 0;
    for k in 0..40 {
        let (a, m) = if k % 2 == 0 {
            let n = r.gen_range(2..=6);
            (weighted_cycle(&mut r, n), n)
        } else {
            let p = r.gen_range(2..=3);
            let b = r.gen_range(1..=2);
            (block_cyclic(&mut r, p, b), p)
        };
        let n = a.dim();
        let h = OperatorSpec::Linear(a.clone());
        let hm = OperatorSpec::power(h.clone(), m).unwrap();
        // A point with h^m(x) = r^m x: polish a random start by iterating h^m.
        let mut x = interior(&mut r, n);
        for _ in 0..2000 {
            let y = hm.apply(&x).unwrap();
            x = y.scaled(1.0 / y.sup_norm()).unwrap();
        }
        let hmx = hm.apply(&x).unwrap();
        let ratio = conewise::cone::lower_ratio(&x, &hmx).unwrap().value();
        let radius = ratio.powf(1.0 / m as f64);
        let oracle = perron_root(&a);
        count += 1;
        match super_eigen_join(&h, m, &x, radius, 1e-10) {
            Ok(j) => {
                let cert = SuperEigenCert::new(j.z.clone(), radius).unwrap();
                let verdict = check_super_with_tol(&h, &cert, 1e-10).unwrap();
                if !verdict.accepted || !rel_close(radius, oracle, 1e-8) {
                    bad.push(format!("#{k} {verdict} r {radius} oracle {oracle}"));
                }
            }
            Err(e) => bad.push(format!("#{k} {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{count} instances {}", bad.join("; ")))
}

fn main() {
    let mut solved = Vec::new();
    let results: Vec<(&str, Outcome)> = vec![
        ("linear agreement", c1_linear(&mut solved)),
        ("max-plus agreement", c2_maxplus(&mut solved)),
        ("family attainment", c3_families(&mut solved)),
        ("monotone regularization", c4_monotone(&solved)),
        ("Collatz-Wielandt duality", c5_duality(&solved)),
        ("spectral radius chain", c6_chain(&solved)),
        ("contraction bound", c7_contraction()),
        ("shifted ratio inequality", c8_lemma()),
        ("metric suite", c9_metrics()),
        ("whole-space identity", c10_whole_space()),
        ("uniqueness implies contraction", c11_uniqueness()),
        ("join construction", c12_join()),
    ];
    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("{status} criterion {:>2} {name}: {}", k + 1, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
