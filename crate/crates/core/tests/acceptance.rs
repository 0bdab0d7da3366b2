//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p vasreach-core --test acceptance -- --nocapture --test-threads=1`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vasreach_core::decider::{decide_reach, DeciderConfig, Verdict};
use vasreach_core::diophantine::{hilbert_basis, int_vec, IntMatrix, IntVector};
use vasreach_core::format::{parse_mrgs, parse_system};
use vasreach_core::invariant::check_certificate;
use vasreach_core::mrgs::{
    check_large_acceptance, input_loop_condition, is_perfect, large_solution_condition,
    output_loop_condition, realize_accepted,
};
use vasreach_core::presburger::{satisfiable, CmpOp, Domain, Formula, LinAtom, ModAtom};
use vasreach_core::semilinear::{
    dim_linear, dim_semilinear, interior_contains, intersect_linear, intersect_monoids, member_linear,
    parse_linear, Dim, LinearSet,
};
use vasreach_core::vas::{VasSystem, VassSystem};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn linear_sets(name: &str) -> Vec<LinearSet> {
    fixture(name)
        .lines()
        .map(|l| l.split('#').next().unwrap().trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_linear(l).unwrap())
        .collect()
}

fn report(id: u32, title: &str, started: Instant, limit: Option<Duration>, problems: Vec<String>) {
    let elapsed = started.elapsed();
    let mut problems = problems;
    if let Some(limit) = limit {
        if elapsed > limit {
            problems.push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
    }
    if problems.is_empty() {
        println!("PASS criterion {id:>2}: {title} ({elapsed:.2?})");
    } else {
        println!("FAIL criterion {id:>2}: {title} ({elapsed:.2?})");
        for p in &problems {
            println!("    {p}");
        }
        panic!("criterion {id} failed: {}", problems.join("; "));
    }
}

fn big(v: &[i64]) -> IntVector {
    int_vec(v)
}

fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Displacements of a VASS as `(from, to, δ)` with machine integers.
fn edges(sys: &VassSystem) -> Vec<(usize, usize, Vec<i64>)> {
    sys.transitions()
        .iter()
        .enumerate()
        .map(|(t, tr)| (tr.from, tr.to, small(sys.transition_displacement(t))))
        .collect()
}

type Point = (usize, Vec<i64>);

fn replay(sys: &VassSystem, start: Point, path: &[usize]) -> Option<Point> {
    let e = edges(sys);
    let (mut q, mut x) = start;
    for &t in path {
        let (from, to, d) = e.get(t)?;
        if *from != q {
            return None;
        }
        x = x.iter().zip(d).map(|(a, b)| a + b).collect();
        if x.iter().any(|&v| v < 0) {
            return None;
        }
        q = *to;
    }
    Some((q, x))
}

/// Breadth-first closure from `start` along `edges` (reversed when
/// `backward`), keeping only configurations accepted by `keep`.
fn closure(
    edges: &[(usize, usize, Vec<i64>)],
    start: Point,
    max_depth: usize,
    backward: bool,
    keep: impl Fn(&Point) -> bool,
) -> HashSet<Point> {
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some(((q, x), d)) = queue.pop_front() {
        if d == max_depth {
            continue;
        }
        for (from, to, delta) in edges {
            let (src, dst) = if backward { (*to, *from) } else { (*from, *to) };
            if src != q {
                continue;
            }
            let y: Vec<i64> = x
                .iter()
                .zip(delta)
                .map(|(a, b)| if backward { a - b } else { a + b })
                .collect();
            let next = (dst, y);
            if next.1.iter().all(|&v| v >= 0) && keep(&next) && seen.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    seen
}

fn compare(expected: &BTreeSet<Point>, found: &BTreeSet<Point>, problems: &mut Vec<String>) {
    let missing: Vec<&Point> = expected.difference(found).collect();
    let extra: Vec<&Point> = found.difference(expected).collect();
    if !missing.is_empty() {
        problems.push(format!(
            "{} expected points not found, e.g. {:?}",
            missing.len(),
            &missing[..missing.len().min(6)]
        ));
    }
    if !extra.is_empty() {
        problems.push(format!(
            "{} points found outside the expected set, e.g. {:?}",
            extra.len(),
            &extra[..extra.len().min(6)]
        ));
    }
}

#[test]
fn criterion_01_forward_set() {
    let t = Instant::now();
    let sys = parse_system(&fixture("fig1.vas")).unwrap();
    let reached = closure(&edges(&sys), (0, vec![0, 2]), 40, false, |_| true);
    let in_box = |p: &Point| p.1.iter().all(|&v| v <= 30);
    let found: BTreeSet<Point> = reached.into_iter().filter(in_box).collect();
    let expected: BTreeSet<Point> = (0..=30)
        .flat_map(|x1| (0..=30).map(move |x2| (0usize, vec![x1, x2])))
        .filter(|(_, x)| x[1] <= x[0] + 2)
        .collect();
    let mut problems = Vec::new();
    compare(&expected, &found, &mut problems);
    report(1, "forward set from (0,2) is x2 <= x1 + 2", t, Some(Duration::from_secs(5)), problems);
}

#[test]
fn criterion_02_backward_set() {
    let t = Instant::now();
    let sys = parse_system(&fixture("fig1.vas")).unwrap();
    let in_box = |p: &Point| p.1.iter().all(|&v| v <= 30);
    let found: BTreeSet<Point> = closure(&edges(&sys), (0, vec![1, 0]), usize::MAX, true, in_box)
        .into_iter()
        .collect();
    let expected: BTreeSet<Point> = (0..=30)
        .flat_map(|x1| (0..=30).map(move |x2| (0usize, vec![x1, x2])))
        .filter(|(_, x)| x[1] >= 2 * (x[0] - 1))
        .collect();
    let mut problems = Vec::new();
    compare(&expected, &found, &mut problems);
    report(2, "backward set of (1,0) is x2 >= 2(x1 - 1)", t, Some(Duration::from_secs(5)), problems);
}

#[test]
fn criterion_03_hopcroft_pansiot() {
    let t = Instant::now();
    let sys = parse_system(&fixture("hp79.vass")).unwrap();
    let p = sys.state_index("p").unwrap();
    let q = sys.state_index("q").unwrap();
    let in_range = |pt: &Point| pt.1[2] <= 3 && pt.1.iter().all(|&v| v <= 16);
    let found: BTreeSet<Point> = closure(&edges(&sys), (p, vec![1, 0, 0]), 400, false, in_range)
        .into_iter()
        .collect();
    let mut expected = BTreeSet::new();
    for x1 in 0..=16i64 {
        for x2 in 0..=16i64 {
            for x3 in 0..=3i64 {
                if x1 + x2 <= 1 << x3 {
                    expected.insert((p, vec![x1, x2, x3]));
                }
                if x1 + 2 * x2 <= 1 << (x3 + 1) {
                    expected.insert((q, vec![x1, x2, x3]));
                }
            }
        }
    }
    let mut problems = Vec::new();
    compare(&expected, &found, &mut problems);
    report(3, "two-state doubling VASS reach set", t, Some(Duration::from_secs(60)), problems);
}

#[test]
fn criterion_04_line_intersection() {
    let t = Instant::now();
    let sets = linear_sets("fig5.sl");
    let (l1, l2) = (&sets[0], &sets[1]);
    let s = intersect_linear(l1, l2).unwrap();
    let mut problems = Vec::new();
    let bases: BTreeSet<Vec<i64>> = s.components.iter().map(|c| small(&c.base)).collect();
    let want: BTreeSet<Vec<i64>> = [vec![8, 2], vec![11, 1], vec![14, 0]].into_iter().collect();
    if bases != want {
        problems.push(format!("bases {bases:?}, want {want:?}"));
    }
    let expected = LinearSet::new(big(&[0, 0]), vec![big(&[1, 0])]).unwrap();
    for x1 in -5..=40 {
        for x2 in -5..=10 {
            let v = big(&[x1, x2]);
            let lhs = s.contains(&v);
            let rhs = [8, 11, 14]
                .iter()
                .zip([2, 1, 0])
                .any(|(&b1, b2)| member_linear(&expected, &big(&[x1 - b1, x2 - b2])).unwrap());
            let direct = member_linear(l1, &v).unwrap() && member_linear(l2, &v).unwrap();
            if lhs != rhs || lhs != direct {
                problems.push(format!("({x1},{x2}): result {lhs}, expected {rhs}, L1∩L2 {direct}"));
            }
        }
    }
    let union_dim = sets[..2].iter().map(dim_linear).max().unwrap();
    if dim_semilinear(&s) != Dim::Finite(1) || union_dim != 2 {
        problems.push(format!("dims {} and {union_dim}, want 1 < 2", dim_semilinear(&s)));
    }
    problems.truncate(8);
    report(4, "intersection of two lines", t, None, problems);
}

/// `v` is a combination of all periods with positive rational coefficients
/// and lies in the monoid, found by enumeration.
fn interior_oracle(periods: &[Vec<i64>], v: &[i64]) -> bool {
    let k = periods.len();
    let combos = |max: i64, min: i64, scale: i64| -> bool {
        let mut lambda = vec![min; k];
        loop {
            let sum: Vec<i64> = (0..v.len())
                .map(|i| (0..k).map(|j| lambda[j] * periods[j][i]).sum())
                .collect();
            if sum.iter().zip(v).all(|(s, x)| *s == scale * x) {
                return true;
            }
            let mut j = 0;
            while j < k && lambda[j] == max {
                lambda[j] = min;
                j += 1;
            }
            if j == k {
                return false;
            }
            lambda[j] += 1;
        }
    };
    let in_monoid = combos(12, 0, 1);
    let strictly_positive = (1..=6).any(|d| combos(12 * d, 1, d));
    in_monoid && strictly_positive
}

#[test]
fn criterion_05_interior() {
    let t = Instant::now();
    let periods = linear_sets("fig4.sl").remove(0).periods;
    let p: Vec<Vec<i64>> = periods.iter().map(|v| small(v)).collect();
    let mut problems = Vec::new();
    for x1 in -5..=5i64 {
        for x2 in 0..=5i64 {
            let got = interior_contains(&periods, &big(&[x1, x2])).unwrap();
            // The pictured interior: strictly inside the cone, on the even lattice.
            let pictured = x1.abs() < x2 && (x1 + x2) % 2 == 0;
            let oracle = interior_oracle(&p, &[x1, x2]);
            if got != pictured || got != oracle {
                problems.push(format!("({x1},{x2}): got {got}, pictured {pictured}, oracle {oracle}"));
            }
        }
    }
    report(5, "interior of the monoid generated by (1,1),(-1,1)", t, None, problems);
}

#[test]
fn criterion_06_dimensions() {
    let t = Instant::now();
    let dims: Vec<usize> = linear_sets("fig6.sl").iter().map(dim_linear).collect();
    let problems = if dims == [0, 1, 2] {
        vec![]
    } else {
        vec![format!("dims {dims:?}, want [0, 1, 2]")]
    };
    report(6, "dimensions 0, 1, 2", t, None, problems);
}

#[test]
fn criterion_07_decider_end_to_end() {
    let t = Instant::now();
    let sys = parse_system(&fixture("fig1.vas")).unwrap();
    let cfg = DeciderConfig::default();
    let mut problems = Vec::new();
    match decide_reach(&sys, (0, big(&[0, 2])), (0, big(&[1, 0])), &cfg).unwrap() {
        Verdict::Reachable(w) => {
            let end = replay(&sys, (0, vec![0, 2]), &w.transitions);
            if w.transitions.len() != 7 || end != Some((0, vec![1, 0])) {
                problems.push(format!("witness {:?} ends at {end:?}", w.word));
            }
        }
        other => problems.push(format!("(0,2)->(1,0): {other:?}")),
    }
    match decide_reach(&sys, (0, big(&[0, 2])), (0, big(&[0, 3])), &cfg).unwrap() {
        Verdict::Unreachable(cert) => {
            if !check_certificate(&cert, &sys).is_valid() {
                problems.push(format!("certificate {} rejected", cert.formula));
            }
        }
        other => problems.push(format!("(0,2)->(0,3): {other:?}")),
    }
    report(7, "decider witness and certificate", t, Some(Duration::from_secs(10)), problems);
}

/// Independent evaluation of a formula over machine integers.
fn eval_i64(f: &Formula, x: &[i64]) -> bool {
    let value = |c: &IntVector| -> i64 {
        c.iter()
            .enumerate()
            .map(|(i, a)| a.to_i64().unwrap() * x.get(i).copied().unwrap_or(0))
            .sum()
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Lin(a) => {
            let (l, r) = (value(&a.coeffs), a.bound.to_i64().unwrap());
            match a.op {
                CmpOp::Le => l <= r,
                CmpOp::Lt => l < r,
                CmpOp::Eq => l == r,
                CmpOp::Ne => l != r,
                CmpOp::Ge => l >= r,
                CmpOp::Gt => l > r,
            }
        }
        Formula::Mod(m) => value(&m.coeffs).rem_euclid(m.modulus.to_i64().unwrap()) == m.residue.to_i64().unwrap(),
        Formula::Not(g) => !eval_i64(g, x),
        Formula::And(a, b) => eval_i64(a, x) && eval_i64(b, x),
        Formula::Or(a, b) => eval_i64(a, x) || eval_i64(b, x),
    }
}

fn box_points(n: usize, hi: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=hi).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn random_vas(rng: &mut ChaCha8Rng) -> VassSystem {
    let k = rng.gen_range(2..=3);
    let actions: Vec<(String, IntVector)> = (0..k)
        .map(|i| {
            let d: Vec<i64> = (0..2).map(|_| rng.gen_range(-2..=2)).collect();
            (((b'a' + i as u8) as char).to_string(), big(&d))
        })
        .collect();
    VassSystem::single_state(VasSystem::new(2, actions).unwrap())
}

#[test]
fn criterion_08_certificate_soundness_sweep() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = DeciderConfig {
        max_rounds: Some(4),
        step_budget: 2_000,
        formula_budget: 2_000,
        templates: true,
        template_bound: 3,
    };
    let mut problems = Vec::new();
    let (mut yes, mut no, mut open) = (0, 0, 0);
    for instance in 0..200 {
        let sys = random_vas(&mut rng);
        let s: Vec<i64> = (0..2).map(|_| rng.gen_range(0..=6)).collect();
        let g: Vec<i64> = (0..2).map(|_| rng.gen_range(0..=6)).collect();
        match decide_reach(&sys, (0, big(&s)), (0, big(&g)), &cfg).unwrap() {
            Verdict::Reachable(w) => {
                yes += 1;
                if replay(&sys, (0, s.clone()), &w.transitions) != Some((0, g.clone())) {
                    problems.push(format!("#{instance}: witness {:?} does not replay", w.word));
                }
            }
            Verdict::Unreachable(cert) => {
                no += 1;
                let in_box = |p: &Point| p.1.iter().all(|&v| v <= 40);
                let reached = closure(&edges(&sys), (0, s.clone()), 200, false, in_box);
                if reached.contains(&(0, g.clone())) {
                    problems.push(format!("#{instance}: {s:?}->{g:?} reachable despite {}", cert.formula));
                }
                if let Some(out) = reached.iter().find(|p| !eval_i64(&cert.formula, &p.1)) {
                    problems.push(format!("#{instance}: {} misses reachable {:?}", cert.formula, out.1));
                }
                if !check_certificate(&cert, &sys).is_valid() {
                    problems.push(format!("#{instance}: certificate {} invalid", cert.formula));
                }
            }
            Verdict::BudgetExhausted(_) => open += 1,
        }
    }
    println!("    criterion 8: {yes} reachable, {no} unreachable, {open} open");
    report(8, "certificate soundness on 200 random instances", t, None, problems);
}

fn random_atom(rng: &mut ChaCha8Rng, n: usize) -> Formula {
    let coeffs: IntVector = (0..n).map(|_| BigInt::from(rng.gen_range(-3..=3))).collect();
    if rng.gen_bool(0.2) {
        let m = rng.gen_range(2..=4);
        let r = rng.gen_range(0..m);
        return Formula::Mod(ModAtom::new(coeffs, BigInt::from(m), BigInt::from(r)).unwrap());
    }
    let ops = [CmpOp::Le, CmpOp::Lt, CmpOp::Eq, CmpOp::Ne, CmpOp::Ge, CmpOp::Gt];
    let op = ops[rng.gen_range(0..ops.len())];
    Formula::Lin(LinAtom::new(coeffs, op, BigInt::from(rng.gen_range(-10..=30))))
}

fn random_formula(rng: &mut ChaCha8Rng, n: usize, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_atom(rng, n);
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_formula(rng, n, depth - 1)),
        1 => Formula::and(random_formula(rng, n, depth - 1), random_formula(rng, n, depth - 1)),
        _ => Formula::or(random_formula(rng, n, depth - 1), random_formula(rng, n, depth - 1)),
    }
}

#[test]
fn criterion_09_presburger_differential() {
    let t = Instant::now();
    const B: i64 = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut problems = Vec::new();
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..1000 {
        let n = rng.gen_range(1..=3);
        let mut f = random_formula(&mut rng, n, 3);
        // Half the formulas are confined to the box, so brute force is complete for them.
        let boxed = i % 2 == 1;
        if boxed {
            for j in 0..n {
                let mut c = vec![0; n];
                c[j] = 1;
                f = Formula::and(f, Formula::lin(&c, CmpOp::Le, B));
            }
        }
        let brute = box_points(n, B).into_iter().find(|x| eval_i64(&f, x));
        let model = satisfiable(&f, Domain::NonNeg);
        if let Some(m) = &model {
            let m64 = small(m);
            let ok = m64.iter().all(|&v| v >= 0) && eval_i64(&f, &m64) && f.eval(m).unwrap();
            if !ok {
                problems.push(format!("#{i}: model {m64:?} does not satisfy {f}"));
            }
        }
        match (&brute, &model) {
            (Some(x), None) => problems.push(format!("#{i}: {f} has model {x:?} but solver says none")),
            (None, Some(m)) if boxed => problems.push(format!("#{i}: {f} is empty in the box, solver gave {m:?}")),
            _ => {}
        }
        if model.is_some() {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    println!("    criterion 9: {sat} satisfiable, {unsat} unsatisfiable");
    problems.truncate(8);
    report(9, "Presburger solver against brute force", t, None, problems);
}

/// Minimal nonzero solutions of `A·x = 0` with entries in `[0, hi]`.
fn brute_hilbert(rows: &[Vec<i64>], q: usize, hi: i64) -> BTreeSet<Vec<i64>> {
    let sols: Vec<Vec<i64>> = box_points(q, hi)
        .into_iter()
        .filter(|x| x.iter().any(|&v| v > 0))
        .filter(|x| rows.iter().all(|r| r.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() == 0))
        .collect();
    sols.iter()
        .filter(|x| !sols.iter().any(|y| y != *x && y.iter().zip(x.iter()).all(|(a, b)| a <= b)))
        .cloned()
        .collect()
}

#[test]
fn criterion_10_hilbert_basis_and_monoids() {
    let t = Instant::now();
    const HI: i64 = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut problems = Vec::new();
    let (mut hb_checked, mut mon_checked) = (0, 0);
    while hb_checked < 100 {
        let m = rng.gen_range(1..=3);
        let q = rng.gen_range(1..=4);
        let rows: Vec<Vec<i64>> = (0..m).map(|_| (0..q).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let a = IntMatrix::from_i64(q, &refs);
        let basis: BTreeSet<Vec<i64>> = hilbert_basis(&a).iter().map(|v| small(v)).collect();
        if basis.iter().any(|v| v.iter().any(|&x| x > HI)) {
            continue;
        }
        hb_checked += 1;
        let brute = brute_hilbert(&rows, q, HI);
        if basis != brute {
            problems.push(format!("A = {rows:?}: basis {basis:?}, brute force {brute:?}"));
        }
    }
    while mon_checked < 100 {
        let n = rng.gen_range(1..=3);
        let k1 = rng.gen_range(1..=2);
        let k2 = rng.gen_range(1..=4 - k1);
        let gen = |rng: &mut ChaCha8Rng, k: usize| -> Vec<Vec<i64>> {
            (0..k).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect()
        };
        let (p1, p2) = (gen(&mut rng, k1), gen(&mut rng, k2));
        // Columns p1 | −p2, one equation per coordinate.
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| p1.iter().map(|p| p[i]).chain(p2.iter().map(|p| -p[i])).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let full = hilbert_basis(&IntMatrix::from_i64(k1 + k2, &refs));
        if full.iter().flatten().any(|x| *x > BigInt::from(HI)) {
            continue;
        }
        mon_checked += 1;
        let project = |z: &Vec<i64>| -> Vec<i64> {
            (0..n).map(|i| (0..k1).map(|j| z[j] * p1[j][i]).sum()).collect()
        };
        let brute: BTreeSet<Vec<i64>> = brute_hilbert(&rows, k1 + k2, HI)
            .iter()
            .map(project)
            .filter(|v| v.iter().any(|&x| x != 0))
            .collect();
        let to_big = |ps: &[Vec<i64>]| -> Vec<IntVector> { ps.iter().map(|p| big(p)).collect() };
        let got: BTreeSet<Vec<i64>> = intersect_monoids(&to_big(&p1), &to_big(&p2))
            .unwrap()
            .iter()
            .map(|v| small(v))
            .collect();
        if got != brute {
            problems.push(format!("P1 = {p1:?}, P2 = {p2:?}: got {got:?}, brute force {brute:?}"));
        }
    }
    problems.truncate(8);
    report(10, "Hilbert basis and monoid intersection against brute force", t, None, problems);
}

#[test]
fn criterion_11_mrgs_suite() {
    let t = Instant::now();
    // (fixture, large solution, [(input loop, output loop) per graph], perfect)
    type Row = (&'static str, bool, &'static [(bool, bool)], bool);
    let table: [Row; 6] = [
        ("all_top_fig1.mrgs", true, &[(true, true)], true),
        ("trivial_fig1.mrgs", false, &[(true, true)], false),
        ("decrement_all_top.mrgs", true, &[(true, true)], true),
        ("decrement_pinned.mrgs", false, &[(false, true)], false),
        ("two_node.mrgs", true, &[(true, true)], true),
        ("two_block.mrgs", true, &[(true, true), (true, true)], true),
    ];
    let mut problems = Vec::new();
    for (name, lsc, loops, perfect) in table {
        let u = parse_mrgs(&fixture(&format!("mrgs/{name}"))).unwrap();
        let got_lsc = large_solution_condition(&u);
        let got_loops: Vec<(bool, bool)> = u
            .blocks()
            .iter()
            .map(|b| (input_loop_condition(b).unwrap(), output_loop_condition(b).unwrap()))
            .collect();
        let got_perfect = is_perfect(&u).unwrap();
        if got_lsc != lsc || got_loops != loops || got_perfect != perfect {
            problems.push(format!(
                "{name}: large solution {got_lsc}, loops {got_loops:?}, perfect {got_perfect}"
            ));
        }
        for c in 0..=3u64 {
            match (perfect, realize_accepted(&u, c).unwrap()) {
                (true, Some(seq)) => {
                    if let Err(e) = check_large_acceptance(&u, &seq, c) {
                        problems.push(format!("{name}, level {c}: {e}"));
                    }
                }
                (true, None) => problems.push(format!("{name}, level {c}: not realized")),
                (false, Some(_)) => problems.push(format!("{name}, level {c}: realized but not perfect")),
                (false, None) => {}
            }
        }
    }
    report(11, "MRGS conditions and realization", t, None, problems);
}
