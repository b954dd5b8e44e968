//! End-to-end acceptance run. One line per criterion; the process exits
//! nonzero when any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use wehler::experiment::experiment_surface;
use wehler::fixtures::{format_point, point_from_i64, w1, w1_rational, W1_ORBIT_29, W1_ORBIT_START};
use wehler::oracle::{involution_failures, oracle_mismatches};
use wehler_core::dynamics::{CycleCensus, PhaseSpace};
use wehler_core::projective::p1_points;
use wehler_core::random::Degeneracy;
use wehler_core::stats::{
    area_error, average_curves, empirical_curve, grid, limit_area, limit_r, sanity_windows, DistributionCurve,
    ZVariant, DEFAULT_GRID_STEP,
};
use wehler_core::{FpSurface, PrimeField, Rational, Side, P2};

const SEED: u64 = 20_240_611;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn space(s: &FpSurface) -> PhaseSpace {
    PhaseSpace::build(s).expect("phase space")
}

fn random_pool(p: u64, count: u64, mode: Degeneracy) -> Vec<(FpSurface, PhaseSpace)> {
    (0..count)
        .map(|i| {
            let s = experiment_surface(SEED, p, i, mode).expect("random surface");
            assert_eq!(s.field().modulus(), p);
            let ps = space(&s);
            (s, ps)
        })
        .collect()
}

fn rational_point(v: [i128; 3]) -> wehler_core::ProjectivePoint2<Rational> {
    wehler_core::ProjectivePoint2::new(v.map(Rational::from_integer)).unwrap()
}

fn reduce_center(p: u64, v: [i64; 3]) -> P2 {
    P2::from_i64(PrimeField::new(p).unwrap(), v).unwrap()
}

// Criterion 1
fn w1_degenerate_fibers() -> Verdict {
    let q = w1_rational();
    let expected: BTreeSet<_> = [rational_point([-1, -1, 1]), rational_point([1, 1, 1])].into();
    let over_q_x: BTreeSet<_> = q.degenerate_fibers_bounded(Side::X, 4).into_iter().collect();
    let over_q_y = q.degenerate_fibers_bounded(Side::Y, 4);
    let mut notes = vec![format!("Q: x {} centers (expected 2), y {}", over_q_x.len(), over_q_y.len())];
    let mut pass = over_q_x == expected && over_q_y.is_empty();
    for p in [29u64, 37, 101] {
        let s = w1(p).unwrap();
        let x: BTreeSet<P2> = s.degenerate_fibers(Side::X).into_iter().collect();
        let y = s.degenerate_fibers(Side::Y);
        let reduced: BTreeSet<P2> = [reduce_center(p, [-1, -1, 1]), reduce_center(p, [1, 1, 1])].into();
        let stays = reduced.is_subset(&x);
        let exact = x == reduced && y.is_empty();
        notes.push(format!("p={p}: x {} y {} reductions degenerate {stays} exact {exact}", x.len(), y.len()));
        pass &= stays && exact;
    }
    verdict(pass, notes.join("; "))
}

// Criterion 2
fn orbit_golden() -> Verdict {
    let s = w1(29).unwrap();
    let ps = space(&s);
    let start = point_from_i64(29, W1_ORBIT_START).unwrap();
    let orbit = ps.orbit(&start, 8).unwrap();
    let text: String = orbit.iter().map(|pp| format_point(&pp.point) + "\n").collect();
    let census = ps.census();
    let id = census.cycle_containing(ps.index_of(&start).unwrap());
    let c = &census.cycles[id];
    let pairing = census.asymmetric_pairing().unwrap_or_default();
    let twin = pairing.get(&id).copied();
    let twin_point = point_from_i64(29, [[-1, -1, 1], [-1, 2, 1]]).unwrap();
    let twin_ok = twin.is_some_and(|t| {
        t != id && census.cycles[t].period == 4 && census.cycle_containing(ps.index_of(&twin_point).unwrap()) == t
    });
    let pass = text == W1_ORBIT_29 && c.period == 4 && !c.symmetric && twin_ok;
    verdict(pass, format!("golden {} period {} symmetric {} twin {twin:?}", text == W1_ORBIT_29, c.period, c.symmetric))
}

// Criterion 3
fn oracle_equivalence() -> Verdict {
    let mut spaces = vec![space(&w1(29).unwrap())];
    for p in [11u64, 29] {
        for mode in [Degeneracy::NonDegenerate, Degeneracy::Degenerate] {
            spaces.extend(random_pool(p, 5, mode).into_iter().map(|(_, ps)| ps));
        }
    }
    let mut mismatches = 0;
    let mut failures = 0;
    let mut points = 0;
    let mut boundary = 0;
    for ps in &spaces {
        mismatches += oracle_mismatches(ps);
        failures += involution_failures(ps);
        points += ps.len();
        boundary += ps.boundary_count();
    }
    verdict(
        mismatches == 0 && failures == 0,
        format!("{} surfaces, {points} points ({boundary} boundary): {mismatches} mismatches, {failures} involution failures", spaces.len()),
    )
}

fn identity_violations(ps: &PhaseSpace, census: &CycleCensus) -> usize {
    let mut bad = 0;
    if 2 * census.symmetric_count() != census.fix_x + census.fix_y {
        bad += 1;
    }
    if census.cycles.iter().map(|c| c.period).sum::<usize>() != ps.len() {
        bad += 1;
    }
    // pairing recomputed from the sigma_x table
    for (id, c) in census.cycles.iter().enumerate() {
        let image = census.cycle_containing(ps.sigma_index(Side::X, c.representative));
        let y_image = census.cycle_containing(ps.sigma_index(Side::Y, c.representative));
        if c.symmetric != (image == id) || c.symmetric != (y_image == id) {
            bad += 1;
        }
        if c.symmetric != ps.classify_cycle(census, id, Side::X)
            || c.symmetric != ps.classify_cycle(census, id, Side::Y)
        {
            bad += 1;
        }
        if !c.symmetric {
            let twin = &census.cycles[image];
            if twin.symmetric || twin.period != c.period {
                bad += 1;
            }
            if census.cycle_containing(ps.sigma_index(Side::X, twin.representative)) != id {
                bad += 1;
            }
        }
    }
    match census.asymmetric_pairing() {
        Ok(m) if m.len() == census.asymmetric_count() => {}
        _ => bad += 1,
    }
    bad
}

fn pool_29() -> Vec<(FpSurface, PhaseSpace)> {
    let mut pool = random_pool(29, 20, Degeneracy::NonDegenerate);
    pool.extend(random_pool(29, 10, Degeneracy::Degenerate));
    pool
}

// Criterion 4
fn combinatorial_identities(pool: &[(FpSurface, PhaseSpace)]) -> Verdict {
    let mut bad = 0;
    let mut cycles = 0;
    for (_, ps) in pool {
        let census = ps.census();
        cycles += census.cycles.len();
        bad += identity_violations(ps, &census);
    }
    verdict(bad == 0, format!("{} surfaces, {cycles} cycles: {bad} violations", pool.len()))
}

fn degenerate_count(ps: &PhaseSpace, side: Side) -> usize {
    ps.charts().keys().filter(|(s, _)| *s == side).count()
}

// Criterion 5
fn windows(pool: &[(FpSurface, PhaseSpace)]) -> Verdict {
    let mut bad = Vec::new();
    let mut checked = 0;
    for (i, (s, ps)) in pool.iter().enumerate() {
        let p = s.field().modulus() as f64;
        let census = ps.census();
        let root = 20.0 * p.sqrt();
        if (ps.len() as f64) < p * p - 22.0 * p + 1.0 {
            bad.push(format!("surface {i} points {}", ps.len()));
        }
        for (side, fix) in [(Side::X, census.fix_x), (Side::Y, census.fix_y)] {
            let upper = p + 1.0 + root + 6.0 * degenerate_count(ps, side) as f64;
            if fix as f64 > upper {
                bad.push(format!("surface {i} fix_{} {fix} > {upper}", side.name()));
            }
        }
        if !sanity_windows(ps, &census).all_pass() {
            bad.push(format!("surface {i} window report"));
        }
        checked += 1;
    }
    let mut large = Vec::new();
    for p in [401u64, 503] {
        for (s, ps) in random_pool(p, 5, Degeneracy::NonDegenerate) {
            let census = ps.census();
            let pf = p as f64;
            let lower = pf + 1.0 - 20.0 * pf.sqrt();
            for fix in [census.fix_x, census.fix_y] {
                if (fix as f64) < lower {
                    bad.push(format!("p={p} fix {fix} < {lower}"));
                }
            }
            if (ps.len() as f64) < pf * pf - 22.0 * pf + 1.0 {
                bad.push(format!("p={p} points {}", ps.len()));
            }
            if !sanity_windows(&ps, &census).all_pass() {
                bad.push(format!("p={p} window report"));
            }
            large.push((s.field().modulus(), census.fix_x, census.fix_y));
            checked += 1;
        }
    }
    let min_fix = large.iter().map(|&(_, x, y)| x.min(y)).min().unwrap_or(0);
    verdict(bad.is_empty(), format!("{checked} surfaces, min fix at p>=401 {min_fix}, violations {bad:?}"))
}

// Criterion 6
fn chart_fixed_points(pool: &[(FpSurface, PhaseSpace)]) -> Verdict {
    let w = w1(29).unwrap();
    let w_space = space(&w);
    let mut charts = 0;
    let mut bad = 0;
    let mut max_fixed = 0;
    for (s, ps) in pool.iter().map(|(s, ps)| (s, ps)).chain(std::iter::once((&w, &w_space))) {
        for chart in ps.charts().values() {
            charts += 1;
            let branch = chart.ramification_prime().expect("branch form");
            let points = chart.exceptional_points(s).expect("exceptional points");
            let mut fixed_lines = BTreeSet::new();
            for b in &points {
                if chart.sigma_extended(s, b).expect("sigma") == *b {
                    fixed_lines.insert(b.s);
                }
            }
            let fixed = points.iter().filter(|b| fixed_lines.contains(&b.s)).count();
            max_fixed = max_fixed.max(fixed);
            if fixed > 6 || fixed != fixed_lines.len() {
                bad += 1;
            }
            for line in p1_points(s.field()) {
                if (branch.eval(&line).value() == 0) != fixed_lines.contains(&line) {
                    bad += 1;
                }
            }
        }
    }
    verdict(bad == 0 && charts > 0, format!("{charts} charts, max fixed per chart {max_fixed}, {bad} violations"))
}

struct DistributionPool {
    mean_error: f64,
    symmetric_fraction: f64,
    averaged: Option<DistributionCurve>,
}

fn distribution_pool(p: u64, count: u64) -> DistributionPool {
    let mut curves = Vec::new();
    let mut errors = Vec::new();
    let mut fractions = Vec::new();
    for (_, ps) in random_pool(p, count, Degeneracy::NonDegenerate) {
        let census = ps.census();
        let curve = empirical_curve(&census, ZVariant::SymmetricMean, DEFAULT_GRID_STEP).unwrap();
        errors.push(area_error(&curve).unwrap());
        fractions.push(census.symmetric_mass() as f64 / census.total as f64);
        curves.push(curve);
    }
    let n = count as f64;
    DistributionPool {
        mean_error: errors.iter().sum::<f64>() / n,
        symmetric_fraction: fractions.iter().sum::<f64>() / n,
        averaged: average_curves(&curves).ok(),
    }
}

// Criteria 7 and 8
fn distribution(at_29: &DistributionPool, at_101: &DistributionPool, at_307: &DistributionPool) -> Verdict {
    let err_101 = at_101.averaged.as_ref().map(|c| area_error(c).unwrap()).unwrap_or(f64::INFINITY);
    let pass = err_101 <= 10.0 && at_307.mean_error < at_29.mean_error;
    verdict(
        pass,
        format!(
            "averaged area error p=101 {err_101:.3}% (<= 10%); mean error p=29 {:.3}% p=307 {:.3}%",
            at_29.mean_error, at_307.mean_error
        ),
    )
}

fn symmetric_dominance(at_29: &DistributionPool, at_307: &DistributionPool) -> Verdict {
    verdict(
        at_307.symmetric_fraction > at_29.symmetric_fraction,
        format!("symmetric fraction p=29 {:.5} p=307 {:.5}", at_29.symmetric_fraction, at_307.symmetric_fraction),
    )
}

/// Composite Simpson on `[0, 10]`.
fn simpson_area(n: usize) -> f64 {
    let h = 10.0 / n as f64;
    let f = |x: f64| 1.0 - (-x).exp() * (1.0 + x);
    let mut acc = f(0.0) + f(10.0);
    for i in 1..n {
        acc += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

// Criterion 9
fn limit_law() -> Verdict {
    let r0 = limit_r(0.0).unwrap();
    let r1 = limit_r(1.0).unwrap();
    let r1_ok = (r1 - (1.0 - 2.0 / std::f64::consts::E)).abs() <= 1e-12;
    let g = grid(DEFAULT_GRID_STEP).unwrap();
    let values: Vec<f64> = g.iter().map(|&x| limit_r(x).unwrap()).collect();
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    let closed = 8.0 + 12.0 * (-10.0f64).exp();
    let quadrature = simpson_area(20_000);
    let area_ok = (limit_area(10.0) - closed).abs() <= 1e-9 && (quadrature - closed).abs() <= 1e-9;
    verdict(
        r0 == 0.0 && r1_ok && monotone && area_ok,
        format!(
            "R(0) {r0}, R(1) {r1:.15}, monotone {monotone}, area {:.12} quadrature {quadrature:.12}",
            limit_area(10.0)
        ),
    )
}

fn report(id: u32, name: &str, elapsed: Duration, budget: Option<Duration>, v: Verdict) -> bool {
    let in_time = budget.is_none_or(|b| elapsed <= b);
    let pass = v.pass && in_time;
    let budget_note = budget.map_or(String::new(), |b| format!(" budget {}s", b.as_secs()));
    println!(
        "criterion {id} {name}: {} ({}) [{:.1}s{budget_note}]",
        if pass { "PASS" } else { "FAIL" },
        v.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn main() {
    let mut all = true;
    let secs = Duration::from_secs;

    let (v, t) = timed(w1_degenerate_fibers);
    all &= report(1, "w1 degenerate fibers", t, Some(secs(5)), v);
    let (v, t) = timed(orbit_golden);
    all &= report(2, "orbit golden", t, Some(secs(5)), v);
    let (v, t) = timed(oracle_equivalence);
    all &= report(3, "involution oracle equivalence", t, None, v);

    let (pool, t_pool) = timed(pool_29);
    let (v, t) = timed(|| combinatorial_identities(&pool));
    all &= report(4, "census identities", t + t_pool, None, v);
    let (v, t) = timed(|| windows(&pool));
    all &= report(5, "point and fixed-count windows", t + t_pool, Some(secs(600)), v);
    let (v, t) = timed(|| chart_fixed_points(&pool));
    all &= report(6, "chart fixed points", t, None, v);

    let ((at_29, at_101, at_307), t) =
        timed(|| (distribution_pool(29, 30), distribution_pool(101, 50), distribution_pool(307, 30)));
    all &= report(7, "distribution reproduction", t, Some(secs(1800)), distribution(&at_29, &at_101, &at_307));
    all &= report(8, "symmetric dominance", t, Some(secs(1800)), symmetric_dominance(&at_29, &at_307));

    let (v, t) = timed(limit_law);
    all &= report(9, "limit law", t, None, v);

    if !all {
        println!("acceptance: FAIL");
        std::process::exit(1);
    }
    println!("acceptance: PASS");
}
