//! Acceptance suite. Each test covers one criterion and prints a
//! `ACCEPTANCE <criterion>: PASS|FAIL` line (visible with --nocapture).
//! All tolerances are zero: every comparison is exact.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use grassmann_codes::counterexamples::run_example;
use grassmann_codes::field::{supported_orders, Field};
use grassmann_codes::grassmann::{
    classify_maximal_cliques, degenerate_set_index, CliqueClass, GraphKind, GrassmannGraph,
};
use grassmann_codes::linalg::MatrixGf;
use grassmann_codes::n4dual::{build_dual, classify_n4_cliques, N4Class};
use grassmann_codes::recovery::{
    build_clique_graph, families_from_census, prune, recover_and_verify, special_sets_blind,
    Flavor, RecoverOptions, Route, SpecialSetMode,
};
use grassmann_codes::report::VerdictReport;
use grassmann_codes::subspace::{count_points, enumerate_subspaces, Ambient, SubspaceBasis};
use grassmann_codes::Caps;

fn criterion(name: &str, ok: bool, detail: &str) {
    println!(
        "ACCEPTANCE {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "acceptance criterion {name} failed: {detail}");
}

fn ambient(n: usize, k: usize, q: u64) -> Ambient {
    Ambient::new(n, k, q).unwrap()
}

fn recover_with(n: usize, k: usize, q: u64, route: Route) -> (VerdictReport, Duration) {
    let started = Instant::now();
    let opts = RecoverOptions {
        route,
        mode: SpecialSetMode::Auto,
        ..Default::default()
    };
    let verdict = recover_and_verify(&ambient(n, k, q), &opts).unwrap();
    (verdict, started.elapsed())
}

fn verdict_533() -> &'static (VerdictReport, Duration) {
    static V: OnceLock<(VerdictReport, Duration)> = OnceLock::new();
    V.get_or_init(|| recover_with(5, 3, 3, Route::Stars))
}

fn verdict_524() -> &'static (VerdictReport, Duration) {
    static V: OnceLock<(VerdictReport, Duration)> = OnceLock::new();
    V.get_or_init(|| recover_with(5, 2, 4, Route::Tops))
}

#[test]
fn criterion_1_end_to_end_recovery() {
    for q in [3u64, 5, 7] {
        let (v, elapsed) = recover_with(4, 2, q, Route::N4);
        criterion(
            &format!("1 recover (4,2,{q}) n4"),
            v.all_ok() && v.isomorphic == Some(true) && elapsed < Duration::from_secs(10),
            &format!("isomorphic, {elapsed:?}"),
        );
    }
    let (v, elapsed) = verdict_533();
    criterion(
        "1 recover (5,3,3) stars",
        v.all_ok() && v.isomorphic == Some(true) && *elapsed < Duration::from_secs(10),
        &format!("isomorphic, {elapsed:?}"),
    );
    let (v, elapsed) = verdict_524();
    criterion(
        "1 recover (5,2,4) tops",
        v.all_ok()
            && v.isomorphic == Some(true)
            && v.mode == "assisted"
            && *elapsed < Duration::from_secs(300),
        &format!("isomorphic, mode {}, {elapsed:?}", v.mode),
    );
}

#[test]
fn criterion_2_clique_taxonomy() {
    for (n, k, q) in [(4usize, 2usize, 3u64), (5, 3, 3)] {
        let a = ambient(n, k, q);
        let delta = GrassmannGraph::build(&a, GraphKind::NonDegenerate, &Caps::default()).unwrap();
        // construction fails hard on any geometric/combinatorial mismatch
        let census = classify_maximal_cliques(&delta, &Caps::default()).unwrap();
        let star_size = count_points((n - k + 1) as u32, q) as usize;
        let top_points = count_points((k + 1) as u32, q) as usize;
        let (lo, hi) = (top_points.saturating_sub(n), top_points - k - 1);
        let mut ok = true;
        for e in &census.entries {
            ok &= e.geometric == e.combinatorial;
            match e.geometric {
                CliqueClass::MaximalStar => ok &= e.size == star_size,
                CliqueClass::NonMaximalStar => ok &= e.size < star_size,
                CliqueClass::Top => ok &= e.size >= lo && e.size <= hi,
            }
        }
        criterion(
            &format!("2 taxonomy ({n},{k},{q})"),
            ok,
            &format!(
                "{} cliques: {} maximal stars, {} non-maximal stars, {} tops",
                census.total(),
                census.maximal_stars,
                census.non_maximal_stars,
                census.tops
            ),
        );
    }
}

#[test]
fn criterion_3_special_set_bijection() {
    let (v, _) = verdict_533();
    criterion(
        "3 bijection (5,3,3) stars",
        v.counts.special_sets == v.counts.degenerate_k_subspaces && v.counts.special_sets == 190,
        &format!(
            "{} special sets, {} degenerate subspaces",
            v.counts.special_sets, v.counts.degenerate_k_subspaces
        ),
    );
    let (v, _) = verdict_524();
    criterion(
        "3 bijection (5,2,4) tops",
        v.counts.special_sets == v.counts.degenerate_k_subspaces && v.counts.special_sets == 1585,
        &format!(
            "{} special sets, {} degenerate subspaces",
            v.counts.special_sets, v.counts.degenerate_k_subspaces
        ),
    );
    // no special sets of either flavor at (4,2,3)
    let a = ambient(4, 2, 3);
    let delta = GrassmannGraph::build(&a, GraphKind::NonDegenerate, &Caps::default()).unwrap();
    let census = classify_maximal_cliques(&delta, &Caps::default()).unwrap();
    let (stars, tops) = families_from_census(&census);
    let mut none_found = true;
    for family in [&stars, &tops] {
        let cg = build_clique_graph(&delta.graph, family.flavor, &family.members).unwrap();
        let cgp = prune(&cg).unwrap();
        none_found &= special_sets_blind(&cg, &cgp, 1_000_000).unwrap().is_empty();
    }
    criterion("3 no special sets (4,2,3)", none_found, "both flavors empty");
}

#[test]
fn criterion_4_counterexamples() {
    let e1 = run_example(&ambient(5, 3, 3), 1, false, &Caps::default()).unwrap();
    criterion(
        "4 example 1 (5,3,3)",
        e1.holds && e1.oracle_agrees,
        "star and top meet in exactly one vertex",
    );
    for (n, k) in [(5usize, 2usize), (6, 3)] {
        let e2 = run_example(&ambient(n, k, 3), 2, false, &Caps::default()).unwrap();
        criterion(
            &format!("4 example 2 ({n},{k},3)"),
            e2.holds && e2.oracle_agrees,
            "all q+1 intermediates degenerate",
        );
    }
    let e3 = run_example(&ambient(5, 2, 3), 3, false, &Caps::default()).unwrap();
    criterion(
        "4 example 3 (5,2,3)",
        e3.holds && e3.oracle_agrees,
        "no neighbor of A2 in the star of X1",
    );
}

#[test]
fn criterion_5_n4_clique_structure() {
    // q = 3: non-linear maximal cliques exist with their stated shape
    // (the classifier hard-fails if any non-linear clique has more than 4
    // vertices, leaves its plane, or touches a degenerate-pair line)
    let dual3 = build_dual(&ambient(4, 2, 3), &Caps::default()).unwrap();
    let census3 = classify_n4_cliques(&dual3, &Caps::default()).unwrap();
    criterion(
        "5 non-linear cliques (4,2,3)",
        census3.nonlinear > 0
            && census3
                .entries
                .iter()
                .filter(|e| e.geometric == N4Class::NonLinear)
                .all(|e| e.size <= 4 && e.plane_coord.is_some()),
        &format!("{} non-linear cliques", census3.nonlinear),
    );
    // q = 7: size >= 5 characterizes linear cliques over the full census
    let dual7 = build_dual(&ambient(4, 2, 7), &Caps::default()).unwrap();
    let census7 = classify_n4_cliques(&dual7, &Caps::default()).unwrap();
    criterion(
        "5 cardinality rule (4,2,7)",
        census7.cardinality_rule_observed,
        &format!(
            "{} linear, {} non-linear cliques",
            census7.linear_total(),
            census7.nonlinear
        ),
    );
    // type-2 cliques have q-1 vertices at q in {3, 5, 7}
    for (q, census) in [
        (3usize, &census3),
        (5, &classify_n4_cliques(&build_dual(&ambient(4, 2, 5), &Caps::default()).unwrap(), &Caps::default()).unwrap()),
        (7, &census7),
    ] {
        let ok = census
            .entries
            .iter()
            .filter(|e| e.geometric == (N4Class::Linear { line_type: 2 }))
            .all(|e| e.size == q - 1)
            && census.type2 == 6;
        criterion(
            &format!("5 type-2 size (4,2,{q})"),
            ok,
            &format!("6 type-2 cliques of {} vertices", q - 1),
        );
    }
}

#[test]
fn criterion_6_oracle_equivalence() {
    // full adjacency cross-check at (4,2,3) and (4,2,4)
    for q in [3u64, 4] {
        let g = GrassmannGraph::build(&ambient(4, 2, q), GraphKind::Full, &Caps::default())
            .unwrap();
        let check = g.verify_adjacency_pairwise(None).unwrap();
        criterion(
            &format!("6 adjacency oracle full (4,2,{q})"),
            check.full && check.ok(),
            &format!("{} pairs", check.pairs_checked),
        );
    }
    // sampled cross-check elsewhere
    let g = GrassmannGraph::build(&ambient(5, 3, 3), GraphKind::Full, &Caps::default()).unwrap();
    let check = g.verify_adjacency_pairwise(Some(100_000)).unwrap();
    criterion(
        "6 adjacency oracle sampled (5,3,3)",
        check.ok() && check.pairs_checked >= 100_000,
        &format!("{} pairs", check.pairs_checked),
    );
    // clique-graph identifications under explicit maps, recorded as check
    // lines of the recovery runs
    let (v, _) = verdict_533();
    let ds = v.checks.iter().find(|c| c.name == "delta_s=gamma_(k-1)");
    criterion(
        "6 delta_s = gamma_(k-1) (5,3,3)",
        ds.is_some_and(|c| c.ok),
        "explicit map X -> S^c(X)",
    );
    let (v, _) = verdict_524();
    let dt = v.checks.iter().find(|c| c.name == "delta_t=delta_(k+1)");
    criterion(
        "6 delta_t = delta_(k+1) (5,2,4)",
        dt.is_some_and(|c| c.ok),
        "explicit map Y -> T^c(Y)",
    );
}

#[test]
fn criterion_7_index_of_degenerate_set() {
    let gamma = GrassmannGraph::build(&ambient(5, 3, 3), GraphKind::Full, &Caps::default())
        .unwrap();
    let report = degenerate_set_index(&gamma, &Caps::default()).unwrap();
    criterion(
        "7 index lambda (5,3,3)",
        report.lambda == 3,
        &format!(
            "lambda = {}, {} lines ({} inside W)",
            report.lambda, report.lines_total, report.lines_inside_w
        ),
    );
}

#[test]
fn criterion_8_property_suites() {
    // field axioms, exhaustive for q <= 9
    let mut axioms_ok = true;
    for q in supported_orders().into_iter().filter(|&q| q <= 9) {
        let f = Field::new(q).unwrap();
        let els = f.elements();
        for &a in &els {
            for &b in &els {
                axioms_ok &= f.add(a, b).unwrap() == f.add(b, a).unwrap();
                for &c in &els {
                    axioms_ok &= f.add(f.add(a, b).unwrap(), c).unwrap()
                        == f.add(a, f.add(b, c).unwrap()).unwrap();
                    axioms_ok &= f.mul(a, f.add(b, c).unwrap()).unwrap()
                        == f
                            .add(f.mul(a, b).unwrap(), f.mul(a, c).unwrap())
                            .unwrap();
                }
            }
            if !a.is_zero() {
                axioms_ok &= f.mul(a, f.inv(a).unwrap()).unwrap() == f.one();
            }
        }
    }
    criterion("8 field axioms q<=9", axioms_ok, "exhaustive");

    // RREF idempotence and the modular dimension identity on >= 10^4
    // deterministic pseudo-random pairs per field
    let mut linalg_ok = true;
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = Field::new(q).unwrap();
        let mut state = 0x243f6a8885a308d3u64 ^ (q << 32);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..10_000 {
            let n = 5;
            let da = 1 + (next() % 3) as usize;
            let db = 1 + (next() % 3) as usize;
            let rows_a: Vec<Vec<u8>> = (0..da)
                .map(|_| (0..n).map(|_| (next() % q) as u8).collect())
                .collect();
            let rows_b: Vec<Vec<u8>> = (0..db)
                .map(|_| (0..n).map(|_| (next() % q) as u8).collect())
                .collect();
            let a = SubspaceBasis::from_rows(&f, n, &rows_a).unwrap();
            let b = SubspaceBasis::from_rows(&f, n, &rows_b).unwrap();
            // idempotence of the canonical form
            let re = SubspaceBasis::from_matrix(&f, a.matrix()).unwrap();
            linalg_ok &= re == a;
            // modular identity via two independent routes
            let ds = SubspaceBasis::dim_sum(&f, &a, &b).unwrap();
            let di = SubspaceBasis::intersect(&f, &a, &b).unwrap().dim();
            linalg_ok &= ds + di == a.dim() + b.dim();
            // the intersection basis sits inside both row spaces
            let inter = SubspaceBasis::intersect(&f, &a, &b).unwrap();
            linalg_ok &= a.contains(&f, &inter).unwrap() && b.contains(&f, &inter).unwrap();
        }
        // RREF uniqueness under row scrambling on a fixed matrix
        let m = MatrixGf::from_rows(
            q as u8,
            4,
            &[
                vec![1, (q - 1) as u8, 0, 1],
                vec![0, 1, 1, 0],
                vec![1, 0, 1, 1],
            ],
        )
        .unwrap();
        let r1 = m.rref(&f).unwrap().matrix;
        let scrambled = MatrixGf::from_rows(
            q as u8,
            4,
            &[m.row(2).to_vec(), m.row(0).to_vec(), m.row(1).to_vec()],
        )
        .unwrap();
        let r2 = scrambled.rref(&f).unwrap().matrix;
        linalg_ok &= r1 == r2;
    }
    criterion("8 rref and dimension identity", linalg_ok, ">= 10^4 pairs per field");

    // determinism: the same run under different thread counts yields
    // byte-identical JSON
    let run_with_threads = |threads: usize| -> String {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        pool.install(|| {
            let v = recover_and_verify(&ambient(4, 2, 3), &RecoverOptions::default()).unwrap();
            serde_json::to_string_pretty(&v).unwrap()
        })
    };
    let one = run_with_threads(1);
    let four = run_with_threads(4);
    criterion(
        "8 thread-count determinism",
        one == four,
        &format!("{} bytes of JSON", one.len()),
    );
}

#[test]
fn criterion_1_guard_refusal() {
    // the hypothesis guard is part of the recovery contract: q <= n-k
    // refuses rather than answering
    let err = recover_and_verify(&ambient(5, 2, 3), &RecoverOptions::default()).unwrap_err();
    criterion(
        "1 refusal at q = n-k",
        err.exit_code() == 2,
        &format!("{err}"),
    );
}

#[test]
fn auxiliary_example_sweeps() {
    // trailing-coordinate sweeps confirm completion independence where
    // the argument implies it
    for (which, n, k, q) in [(2u8, 5usize, 2usize, 3u64), (3, 5, 2, 3), (2, 6, 3, 3)] {
        let report = run_example(&ambient(n, k, q), which, true, &Caps::default()).unwrap();
        criterion(
            &format!("4 sweep example {which} ({n},{k},{q})"),
            report.holds
                && report.oracle_agrees
                && report.completion_dependence.is_none()
                && report.completions_swept == (q as u64).pow((k - 1) as u32),
            &format!("{} completions", report.completions_swept),
        );
    }
}

#[test]
fn auxiliary_star_candidates_not_maximal_for_k2() {
    // for k = 2 the candidate star families are never maximal in the
    // (complete) star graph
    let a = ambient(5, 2, 4);
    let delta = GrassmannGraph::build(&a, GraphKind::NonDegenerate, &Caps::default()).unwrap();
    let census = classify_maximal_cliques(&delta, &Caps::default()).unwrap();
    let (stars, _tops) = families_from_census(&census);
    let cg = build_clique_graph(&delta.graph, Flavor::Stars, &stars.members).unwrap();
    let field = a.field();
    let degenerate: Vec<SubspaceBasis> = enumerate_subspaces(field, 5, 2, u64::MAX)
        .unwrap()
        .into_iter()
        .filter(SubspaceBasis::is_degenerate)
        .collect();
    let def_index: std::collections::BTreeMap<&SubspaceBasis, u32> = stars
        .defining
        .iter()
        .enumerate()
        .map(|(i, d)| (d, i as u32))
        .collect();
    let mut ok = true;
    for x in degenerate.iter().take(50) {
        let members: Vec<u32> = x
            .subspaces_of(field, 1)
            .unwrap()
            .iter()
            .map(|z| def_index[z])
            .collect();
        ok &= !cg.graph.is_maximal_clique(&members);
    }
    criterion(
        "aux candidate star families not maximal at k=2",
        ok,
        "(5,2,4), 50 candidates",
    );
}
