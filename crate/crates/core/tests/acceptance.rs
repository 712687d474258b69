//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use sgko_core::bench::{inverse_errors, median};
use sgko_core::dense::{
    dense_inverse, dense_lu_nopivot, numerical_rank, split_lu, upper_triangular_inverse,
};
use sgko_core::fixtures::{random_cauchy_like, random_matrix, random_trummer};
use sgko_core::problems::t2_exact_inverse;
use sgko_core::{
    dense_solve_oracle, extended_block_probe, generate_problem, relative_error, run_invert_bench, singularity_witness,
    solve_downdating_with, solve_extended_with, solve_implicit_l_with, solve_problem, trummer_add, trummer_displacement,
    trummer_invert_with, trummer_mul, trummer_reconstruct_dense, CauchyLikeGenerators, DenseMatrix, Problem,
    ProblemId, ProblemMatrix, ProblemSpec, SolveOptions, Solver, C64,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn problem(spec: ProblemSpec) -> Problem {
    generate_problem(&spec).expect("valid problem spec")
}

fn cauchy(p: &Problem) -> &CauchyLikeGenerators {
    match &p.matrix {
        ProblemMatrix::Cauchy(g) => g,
        ProblemMatrix::Toeplitz { gen, .. } => gen,
        ProblemMatrix::Trummer(_) => panic!("not a Cauchy-like problem"),
    }
}

fn solve(gen: &CauchyLikeGenerators, b: &DenseMatrix, solver: Solver, opts: &SolveOptions) -> sgko_core::SolveReport {
    match solver {
        Solver::Classic => solve_implicit_l_with(gen, b, opts).map(|(r, _)| r),
        Solver::Extended => solve_extended_with(gen, b, opts),
        Solver::Downdating => solve_downdating_with(gen, b, opts),
        Solver::Trummer => unreachable!(),
    }
    .unwrap_or_else(|e| panic!("{solver} failed: {e}"))
}

fn p1_accuracy() -> Outcome {
    const TOL: f64 = 1e-13;
    let mut worst = 0.0f64;
    let mut timings = Vec::new();
    for n in [128, 256, 512, 1024] {
        let p = problem(ProblemSpec::new(ProblemId::P1, n));
        for solver in Solver::CAUCHY {
            let start = Instant::now();
            let rep = solve_problem(&p, solver, &SolveOptions::default()).map_err(|e| e.to_string())?;
            let secs = start.elapsed().as_secs_f64();
            worst = worst.max(relative_error(&rep.x, &p.exact));
            if n == 1024 {
                timings.push(format!("{solver} {secs:.3}s"));
            }
        }
    }
    ensure(
        worst <= TOL,
        format!("max fwd err {worst:.3e} (tol {TOL:.0e}); n=1024: {}", timings.join(", ")),
    )
}

fn solver_equivalence() -> Outcome {
    const TOL: f64 = 1e-11;
    let mut worst = 0.0f64;
    for seed in 0..100u64 {
        let n = 2 + (seed as usize * 7) % 63;
        let r = 1 + seed as usize % 3;
        let m = if seed % 2 == 0 { 1 } else { 3 };
        let gen = random_cauchy_like(n, r, seed);
        let b = random_matrix(n, m, 1000 + seed);
        let oracle = dense_solve_oracle(&gen.reconstruct_dense().unwrap(), &b).unwrap();
        let xs: Vec<DenseMatrix> =
            Solver::CAUCHY.iter().map(|&s| solve(&gen, &b, s, &SolveOptions::default()).x).collect();
        for (i, x) in xs.iter().enumerate() {
            worst = worst.max(relative_error(x, &oracle));
            for y in &xs[i + 1..] {
                worst = worst.max(relative_error(x, y));
            }
        }
    }
    ensure(worst <= TOL, format!("100 instances, max relative disagreement {worst:.3e} (tol {TOL:.0e})"))
}

fn extended_block_semantics() -> Outcome {
    const TOL: f64 = 1e-11;
    let mut worst = [0.0f64; 4];
    for (idx, n) in [4usize, 6, 8].into_iter().enumerate() {
        let gen = random_cauchy_like(n, 2, 40 + idx as u64);
        let b = random_matrix(n, 2, 50 + idx as u64);
        let dense = gen.reconstruct_dense().unwrap();
        let lu = dense_lu_nopivot(&dense).unwrap();
        let (l, u) = split_lu(&lu);
        let w = upper_triangular_inverse(&u).unwrap();
        let y = dense_solve_oracle(&l, &b).unwrap();
        let x = dense_solve_oracle(&dense, &b).unwrap();
        let scale = dense.max_abs();

        for k in 0..=n {
            let snap = extended_block_probe(&gen, &b, k).unwrap();
            // (1,1): rows already used hold U, the trailing block is the Schur complement
            for i in 0..n {
                for j in 0..n {
                    let expected = if i < k {
                        u[(i, j)]
                    } else if j < k {
                        C64::new(0.0, 0.0)
                    } else {
                        (k..=i.min(j)).map(|p| lu_l(&lu, i, p) * u[(p, j)]).sum()
                    };
                    worst[0] = worst[0].max((snap.c11[(i, j)] - expected).norm() / scale);
                }
            }
            // (2,1): column j holds -W[:, j]·U[j, j] after j steps, zero once eliminated
            for i in 0..n {
                for j in 0..n {
                    let expected = if j < k {
                        C64::new(0.0, 0.0)
                    } else if j == k {
                        -w[(i, j)] * u[(j, j)]
                    } else if i >= k {
                        C64::new(if i == j { -1.0 } else { 0.0 }, 0.0)
                    } else {
                        continue;
                    };
                    worst[3] = worst[3].max((snap.c21[(i, j)] - expected).norm() / (1.0 + expected.norm()));
                }
            }
            if k == n {
                worst[1] = worst[1].max(relative_error(&snap.c12, &y));
                worst[2] = worst[2].max(relative_error(&snap.c22, &x));
            }
            // (1,2) rows i < k are final, (2,2) rows i >= k untouched
            for i in 0..n {
                for j in 0..b.cols() {
                    if i < k {
                        worst[1] = worst[1].max((snap.c12[(i, j)] - y[(i, j)]).norm() / (1.0 + y[(i, j)].norm()));
                    } else {
                        worst[2] = worst[2].max(snap.c22[(i, j)].norm());
                    }
                }
            }
        }
    }
    let max = worst.iter().cloned().fold(0.0, f64::max);
    ensure(
        max <= TOL,
        format!(
            "n in {{4,6,8}}: U {:.1e}, y {:.1e}, x {:.1e}, -W U {:.1e} (tol {TOL:.0e})",
            worst[0], worst[1], worst[2], worst[3]
        ),
    )
}

/// Unit lower factor from a packed unpivoted LU.
fn lu_l(lu: &DenseMatrix, i: usize, p: usize) -> C64 {
    if i == p {
        C64::new(1.0, 0.0)
    } else {
        lu[(i, p)]
    }
}

fn downdating_restoration() -> Outcome {
    let mut worst_p1 = 0.0f64;
    for n in [128, 256, 512] {
        let p = problem(ProblemSpec::new(ProblemId::P1, n));
        let rep = solve(cauchy(&p), &p.rhs, Solver::Downdating, &SolveOptions::default());
        worst_p1 = worst_p1.max(rep.aposteriori_b_error.unwrap());
    }
    let p = problem(ProblemSpec::new(ProblemId::P2, 128));
    let rep = solve(cauchy(&p), &p.rhs, Solver::Downdating, &SolveOptions::default());
    let p2 = rep.aposteriori_b_error.unwrap();
    ensure(
        worst_p1 <= 1e-11 && p2 <= 1e-10,
        format!("P1 n<=512 max {worst_p1:.3e} (tol 1e-11); P2 n=128 {p2:.3e} (tol 1e-10)"),
    )
}

fn flop_coefficients() -> Outcome {
    const N: usize = 2048;
    const TOL: f64 = 0.05;
    let (r, m) = (2.0, 1.0);
    let nn = (N * N) as f64;
    let p = problem(ProblemSpec::new(ProblemId::P1, N));
    let mut rows = Vec::new();
    let mut ok = true;
    let mut record = |name: &str, flops: u64, coef: f64| {
        let measured = flops as f64 / nn;
        let dev = (measured - coef).abs() / coef;
        ok &= dev <= TOL;
        rows.push(format!("{name} {measured:.3}/{coef} ({:.2}%)", 100.0 * dev));
    };
    for (solver, coef) in [
        (Solver::Classic, 4.0 * r + 2.0 * m + 1.0),
        (Solver::Extended, 6.0 * r + 2.0 * m + 1.5),
        (Solver::Downdating, 6.0 * r + 2.0 * m + 1.5),
    ] {
        let rep = solve(cauchy(&p), &p.rhs, solver, &SolveOptions::default());
        record(solver.name(), rep.flops, coef);
    }
    let t = random_trummer(N, 2, 3);
    let b = random_matrix(N, 1, 4);
    let c = random_matrix(1, N, 5);
    let inv = trummer_invert_with(&t, Some(&b), Some(&c), &SolveOptions::without_pivoting()).map_err(|e| e.to_string())?;
    record("trummer_invert", inv.flops, 8.0 * r + 2.0 + 2.0 + 5.0);
    ensure(ok, format!("n={N}, r=2, m=1: {} (tol 5%)", rows.join(", ")))
}

fn workspace_accounting() -> Outcome {
    let (r, m) = (2, 1);
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [128, 512] {
        let p = problem(ProblemSpec::new(ProblemId::P1, n));
        let bound = 2 * n + 8 * (r + m);
        for solver in [Solver::Extended, Solver::Downdating] {
            let ws = solve(cauchy(&p), &p.rhs, solver, &SolveOptions::minimal_memory()).peak_workspace;
            ok &= ws <= bound;
            rows.push(format!("{solver}@{n} {ws}<={bound}"));
        }
        let ws = solve(cauchy(&p), &p.rhs, Solver::Classic, &SolveOptions::minimal_memory()).peak_workspace;
        ok &= ws >= n * n;
        rows.push(format!("classic@{n} {ws}>=n^2"));
    }
    ensure(ok, rows.join(", "))
}

fn gaussian_toeplitz_accuracy() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (a, tol) in [(0.90, 1e-5), (0.85, 1e-8)] {
        let p = problem(ProblemSpec::new(ProblemId::P3, 512).with_a(a));
        for solver in Solver::CAUCHY {
            let rep = solve_problem(&p, solver, &SolveOptions::default()).map_err(|e| e.to_string())?;
            let err = relative_error(&rep.x, &p.exact);
            ok &= err <= tol;
            rows.push(format!("a={a} {solver} {err:.2e}"));
        }
    }
    ensure(ok, format!("n=512: {} (tol 1e-5 at a=0.90, 1e-8 at a=0.85)", rows.join(", ")))
}

fn trummer_inversion_t1() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [128, 512] {
        let rec = run_invert_bench(&ProblemSpec::new(ProblemId::T1, n)).map_err(|e| e.to_string())?;
        ok &= rec.e1 <= 1e-13 && rec.e2 <= 1e-12 && rec.e3 <= 1e-12;
        rows.push(format!("n={n} E1 {:.2e} E2 {:.2e} E3 {:.2e}", rec.e1, rec.e2, rec.e3));
    }
    ensure(ok, format!("{} (tol 1e-13, 1e-12, 1e-12)", rows.join("; ")))
}

fn t2_conditioning() -> Outcome {
    let mut e3 = Vec::new();
    for eps in [1e-3, 1e-6, 1e-9] {
        let spec = ProblemSpec::new(ProblemId::T2, 512).with_eps(eps);
        let ProblemMatrix::Trummer(t) = problem(spec).matrix else { unreachable!() };
        let res = trummer_invert_with(&t, None, None, &SolveOptions::default()).map_err(|e| e.to_string())?;
        let (_, _, err) = inverse_errors(&t, &res.inverse, &t2_exact_inverse(512, eps)).map_err(|e| e.to_string())?;
        e3.push((eps, err));
    }
    // least-squares slope of log E3 against log eps
    let pts: Vec<(f64, f64)> = e3.iter().map(|&(e, v)| (e.log10(), v.log10())).collect();
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    ensure(
        e3[0].1 <= 1e-9 && (slope + 1.0).abs() <= 0.5,
        format!(
            "E3 {:.2e} / {:.2e} / {:.2e} at eps 1e-3/1e-6/1e-9, slope {slope:.3} (need E3(1e-3) <= 1e-9, slope -1 +- 0.5)",
            e3[0].1, e3[1].1, e3[2].1
        ),
    )
}

fn displacement_algebra() -> Outcome {
    const RANK_TOL: f64 = 1e-10;
    let mut worst_identity = 0.0f64;
    let mut rank_violations = 0;
    for seed in 0..50u64 {
        let n = 4 + seed as usize % 13;
        let (ra, rb) = (1 + seed as usize % 3, 1 + (seed as usize / 3) % 3);
        let a = random_trummer(n, ra, 2 * seed);
        let b = random_trummer(n, rb, 2 * seed + 1);
        assert_eq!(a.s(), b.s());
        let (da, db) = (trummer_reconstruct_dense(&a), trummer_reconstruct_dense(&b));
        let s = a.s();
        let nabla = |m: &DenseMatrix| trummer_displacement(m, s).unwrap();

        let sum = trummer_add(&a, &b).unwrap();
        let dsum = da.add(&db).unwrap();
        worst_identity = worst_identity.max(relative_error(&trummer_reconstruct_dense(&sum), &dsum));
        rank_violations += usize::from(numerical_rank(&nabla(&dsum), RANK_TOL) > ra + rb);

        let prod = trummer_mul(&a, &b).unwrap();
        let dprod = da.matmul(&db).unwrap();
        worst_identity = worst_identity.max(relative_error(&trummer_reconstruct_dense(&prod), &dprod));
        rank_violations += usize::from(numerical_rank(&nabla(&dprod), RANK_TOL) > ra + rb);
        // product rule: ∇(AB) = ∇(A)B + A∇(B)
        let rule = nabla(&da).matmul(&db).unwrap().add(&da.matmul(&nabla(&db)).unwrap()).unwrap();
        worst_identity = worst_identity.max(relative_error(&rule, &nabla(&dprod)));

        // inverse rule: ∇(A^{-1}) = -A^{-1}∇(A)A^{-1}
        let inv = dense_inverse(&da).unwrap();
        let rhs = inv.matmul(&nabla(&da)).unwrap().matmul(&inv).unwrap().scale(C64::new(-1.0, 0.0));
        worst_identity = worst_identity.max(relative_error(&nabla(&inv), &rhs));
        rank_violations += usize::from(numerical_rank(&nabla(&inv), RANK_TOL) > ra);
    }
    ensure(
        worst_identity <= 1e-10 && rank_violations == 0,
        format!("50 instances: max identity defect {worst_identity:.2e} (tol 1e-10), rank violations {rank_violations}"),
    )
}

fn singularity_lemma() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for (r, n) in [(1, 3), (2, 5), (3, 8)] {
        let dense = singularity_witness(r, n).map_err(|e| e.to_string())?.reconstruct_dense().map_err(|e| e.to_string())?;
        let rank = numerical_rank(&dense, 1e-10);
        ok &= rank < n;
        rows.push(format!("(r={r}, n={n}) rank {rank}"));
    }
    ensure(ok, rows.join(", "))
}

fn cache_effect() -> Outcome {
    let p = problem(ProblemSpec::new(ProblemId::P1, 4096));
    let gen = cauchy(&p);
    let opts = SolveOptions::default();
    solve(gen, &p.rhs, Solver::Classic, &opts);
    solve(gen, &p.rhs, Solver::Downdating, &opts);
    let (mut classic, mut down) = (Vec::new(), Vec::new());
    for _ in 0..5 {
        let start = Instant::now();
        solve(gen, &p.rhs, Solver::Classic, &opts);
        classic.push(start.elapsed().as_secs_f64());
        let start = Instant::now();
        solve(gen, &p.rhs, Solver::Downdating, &opts);
        down.push(start.elapsed().as_secs_f64());
    }
    let (c, d) = (median(&mut classic), median(&mut down));
    ensure(d <= c, format!("n=4096, r=2, m=1: downdating {d:.3}s, classic {c:.3}s (median of 5 after warm-up)"))
}

fn generator_growth() -> Outcome {
    let p = problem(ProblemSpec::new(ProblemId::P4, 128).with_seed(2024));
    let xs = Solver::CAUCHY
        .iter()
        .map(|&s| solve_problem(&p, s, &SolveOptions::default()).map(|r| r.x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in i + 1..3 {
            worst = worst.max(relative_error(&xs[i], &xs[j]));
        }
    }
    let errs: Vec<String> = xs.iter().map(|x| format!("{:.3e}", relative_error(x, &p.exact))).collect();
    ensure(
        worst <= 1e-2,
        format!("seed 2024: fwd errs {}, max pairwise {worst:.2e} (tol 1e-2)", errs.join("/")),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("p1_accuracy", p1_accuracy),
        ("solver_equivalence", solver_equivalence),
        ("extended_block_semantics", extended_block_semantics),
        ("downdating_restoration", downdating_restoration),
        ("flop_coefficients", flop_coefficients),
        ("workspace_accounting", workspace_accounting),
        ("gaussian_toeplitz", gaussian_toeplitz_accuracy),
        ("trummer_inversion_t1", trummer_inversion_t1),
        ("t2_conditioning", t2_conditioning),
        ("displacement_algebra", displacement_algebra),
        ("singularity_witness", singularity_lemma),
        ("cache_effect", cache_effect),
        ("generator_growth", generator_growth),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {name}: {tag} | {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
