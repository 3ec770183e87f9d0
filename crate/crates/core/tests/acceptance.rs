//! Acceptance gate: nine criteria, each checked at its stated tolerance and
//! time budget. Prints one PASS/FAIL line per criterion and exits nonzero if
//! any fails.

mod common;

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num::{BigRational, Signed};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use toricq::gitq::{self, Support, WeightSystem};
use toricq::inertia::{self, DEFAULT_ORDER_CAP};
use toricq::mundet::{self, MundetProblem};
use toricq::quasimap::{self, DegreeVector};
use toricq::ratlin::{self, RationalVector};
use toricq::treecomb::{self, ColoredTree, Scaling, DEFAULT_BUDGET};

use common::q;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn c4(nu: [i64; 2]) -> WeightSystem {
    WeightSystem::simple(
        2,
        vec![vec![1, 0], vec![1, 0], vec![1, 1], vec![0, 1]],
        RationalVector::from_ints(&nu),
    )
    .unwrap()
}

fn supports(list: &[&[usize]]) -> Vec<Support> {
    list.iter().map(|s| Support::from_one_based(s).unwrap()).collect()
}

fn e(err: toricq::Error) -> String {
    err.to_string()
}

fn c4_reproduction() -> Check {
    let a = c4([1, 2]);
    let b = c4([2, 1]);
    let ua = gitq::max_unstable_supports(&a).map_err(e)?;
    let ub = gitq::max_unstable_supports(&b).map_err(e)?;
    ensure!(ua == supports(&[&[1, 2, 3], &[4]]), "ν=(1,2) unstable {:?}", ua);
    ensure!(ub == supports(&[&[1, 2], &[3, 4]]), "ν=(2,1) unstable {:?}", ub);
    ensure!(
        gitq::chamber_signature(&a).map_err(e)? != gitq::chamber_signature(&b).map_err(e)?,
        "chamber signatures agree"
    );
    for ws in [&a, &b] {
        let rep = gitq::quotient_report(ws).map_err(e)?;
        ensure!(rep.proper && rep.stable_eq_ss, "not proper/locally free for ν={}", ws.nu());
        ensure!(rep.dimension == Some(2), "dimension {:?}", rep.dimension);
    }
    let rep = gitq::quotient_report(&a).map_err(e)?;
    ensure!(rep.fixed_point_count == 3, "{} fixed points", rep.fixed_point_count);
    ensure!(rep.fixed_points.iter().all(|f| f.isotropy == 1), "nontrivial isotropy");
    Ok(format!("unstable {ua:?} / {ub:?}, 3 free fixed points"))
}

/// Fixed points of a rank-r quotient: size-r supports with nonzero
/// determinant whose weights' cone contains ν, each counted Π m_i times.
fn fixed_point_oracle(ws: &WeightSystem) -> u64 {
    let k = ws.len();
    let mut count = 0;
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (ws.weight(i), ws.weight(j));
            let det = a[0] * b[1] - a[1] * b[0];
            if det == 0 {
                continue;
            }
            // ν = s a + t b by Cramer's rule
            let nu = ws.nu();
            let s = (&nu[0] * BigRational::from_integer(b[1].into())
                - &nu[1] * BigRational::from_integer(b[0].into()))
                / BigRational::from_integer(det.into());
            let t = (&nu[1] * BigRational::from_integer(a[0].into())
                - &nu[0] * BigRational::from_integer(a[1].into()))
                / BigRational::from_integer(det.into());
            if !s.is_negative() && !t.is_negative() {
                count += ws.multiplicities()[i] * ws.multiplicities()[j];
            }
        }
    }
    count
}

fn c41_reproduction() -> Check {
    let d = DegreeVector::from_ints(&[1, 0]);
    let mut counts = Vec::new();
    for nu in [[1, 2], [2, 1]] {
        let x = quasimap::quasimap_problem(&c4(nu), &d).map_err(e)?;
        let multiset: BTreeMap<Vec<i64>, u64> = x.weight_multiset();
        let want: BTreeMap<Vec<i64>, u64> =
            [(vec![0, 1], 1), (vec![1, 1], 2), (vec![1, 0], 4)].into_iter().collect();
        ensure!(multiset == want, "multiset {:?}", multiset);
        let rep = gitq::quotient_report(&x).map_err(e)?;
        ensure!(rep.dimension == Some(5), "dimension {:?}", rep.dimension);
        let oracle = fixed_point_oracle(&x);
        ensure!(rep.fixed_point_count == oracle, "fixed points {} vs oracle {}", rep.fixed_point_count, oracle);
        counts.push(rep.fixed_point_count);
    }
    ensure!(counts == vec![6, 12], "fixed point counts {:?}", counts);
    Ok("dimension 5, fixed points 6 / 12".into())
}

fn jtgen3_table() -> Check {
    let ws = WeightSystem::simple(1, vec![vec![2], vec![3]], RationalVector::from_ints(&[1])).unwrap();
    let degrees = quasimap::effective_affine_degrees(&ws, &ratlin::int(1)).map_err(e)?;
    let want = [q(0, 1), q(1, 3), q(1, 2), q(2, 3), q(1, 1)];
    let got: Vec<BigRational> = degrees.iter().map(|d| d.vector()[0].clone()).collect();
    ensure!(got == want, "degrees {:?}", got);
    let mut dims = Vec::new();
    let mut stabs = Vec::new();
    for d in &degrees {
        let r = quasimap::affine_report(&ws, d).map_err(e)?;
        dims.push(r.dimension);
        stabs.push(r.stabilizer_order);
    }
    ensure!(dims == vec![1, 2, 3, 4, 6], "dimensions {:?}", dims);
    ensure!(stabs == vec![1, 3, 2, 3, 1], "stabilizers {:?}", stabs);
    Ok("dims (1,2,3,4,6), stabilizers (1,3,2,3,1)".into())
}

fn jtgen2_symmetric_products() -> Check {
    let ws = WeightSystem::simple(1, vec![vec![1]], RationalVector::from_ints(&[1])).unwrap();
    for d in 0..=10 {
        let r = quasimap::affine_report(&ws, &DegreeVector::from_ints(&[d])).map_err(e)?;
        ensure!(r.dimension == d, "degree {d}: dimension {}", r.dimension);
    }
    Ok("dimension d for d = 0..10".into())
}

fn inertia_suite() -> Check {
    let p = |a: i64, b: i64| WeightSystem::simple(1, vec![vec![a], vec![b]], RationalVector::from_ints(&[1])).unwrap();
    let sectors = inertia::inertia_sectors(&p(2, 3), DEFAULT_ORDER_CAP).map_err(e)?;
    let summary: Vec<(u64, i64)> = sectors.iter().map(|s| (s.element_order, s.dimension)).collect();
    ensure!(summary == vec![(1, 1), (2, 0), (3, 0), (3, 0)], "P[2,3] sectors {:?}", summary);
    let n = inertia::inertia_sectors(&c4([1, 2]), DEFAULT_ORDER_CAP).map_err(e)?.len();
    ensure!(n == 1, "c4 has {n} sectors");
    let mut checked = 0;
    for a in 1..=7i64 {
        for b in 1..=7i64 {
            if num::integer::gcd(a, b) != 1 {
                continue;
            }
            let sectors = inertia::inertia_sectors(&p(a, b), DEFAULT_ORDER_CAP).map_err(e)?;
            let oracle = common::denominator_sweep(&[a, b]);
            ensure!(sectors.len() as i64 == a + b - 1, "P[{a},{b}]: {} sectors", sectors.len());
            ensure!(sectors.len() == oracle.len(), "P[{a},{b}]: oracle finds {}", oracle.len());
            let mine: std::collections::BTreeSet<(i64, i64)> = sectors
                .iter()
                .map(|s| {
                    let x = &s.element.representative()[0];
                    (
                        num::ToPrimitive::to_i64(x.numer()).unwrap(),
                        num::ToPrimitive::to_i64(x.denom()).unwrap(),
                    )
                })
                .collect();
            ensure!(mine == oracle, "P[{a},{b}] elements differ");
            checked += 1;
        }
    }
    Ok(format!("P[2,3] (1,1),(2,0),(3,0),(3,0); {checked} coprime P[a,b] match a+b-1 and the sweep"))
}

fn cone_suite() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed_c0de);
    let trials = 10_000;
    let mut members = 0;
    for trial in 0..trials {
        let r = rng.gen_range(1..=4);
        let k = rng.gen_range(1..=8);
        let weights: Vec<Vec<i64>> = (0..k).map(|_| common::random_vector(&mut rng, r, -3, 3)).collect();
        let nu = common::random_rational_vector(&mut rng, r, -4, 4, 3);
        let gens: Vec<RationalVector> = weights.iter().map(|w| RationalVector::from_ints(w)).collect();
        let dec = ratlin::cone_member(&gens, &nu).map_err(e)?;
        ensure!(dec.verify(&gens, &nu), "trial {trial}: witness fails substitution");
        let oracle = common::caratheodory_member(&gens, &nu);
        ensure!(dec.member == oracle, "trial {trial}: decision {} vs oracle {}", dec.member, oracle);
        let ws = WeightSystem::simple(r, weights, nu.clone()).map_err(e)?;
        let cert = toricq::mundet::destab_certificate(&ws, &ws.full_support()).map_err(e)?;
        ensure!(cert.is_some() == !dec.member, "trial {trial}: certificate existence disagrees");
        if let Some(lambda) = cert {
            ensure!(lambda.pairing(&nu).is_negative(), "trial {trial}: ⟨ν,λ⟩ not negative");
            ensure!(
                weights_nonneg(&ws, &lambda),
                "trial {trial}: λ not admissible"
            );
        }
        members += dec.member as usize;
    }
    Ok(format!("{trials} instances, {members} members, all witnesses verified"))
}

fn weights_nonneg(ws: &WeightSystem, lambda: &mundet::OneParamSubgroup) -> bool {
    (0..ws.len()).all(|i| !lambda.pairing(ws.weight_vector(i)).is_negative())
}

fn random_locally_free(rng: &mut StdRng) -> Option<WeightSystem> {
    let r = rng.gen_range(1..=3);
    let k = rng.gen_range(r..=5);
    let weights: Vec<Vec<i64>> = (0..k).map(|_| common::random_vector(rng, r, -2, 3)).collect();
    let nu = RationalVector::from_ints(&common::random_vector(rng, r, -3, 4));
    let ws = WeightSystem::simple(r, weights, nu).ok()?;
    let nonempty = gitq::is_ss_support(&ws, &ws.full_support()).ok()?;
    (nonempty && gitq::stable_eq_ss(&ws).ok()?).then_some(ws)
}

fn mundet_large_rho() -> Check {
    let mut rng = StdRng::seed_from_u64(77);
    let mut systems = 0;
    let mut positive = 0;
    let mut comparisons = 0u64;
    while systems < 100 {
        let Some(ws) = random_locally_free(&mut rng) else { continue };
        let d = DegreeVector::new(common::random_rational_vector(&mut rng, ws.rank(), -4, 4, 3));
        let area = q(rng.gen_range(1..=3), rng.gen_range(1..=2));
        let th = mundet::rho_threshold(&ws, &d, &area).map_err(e)?;
        let all: Vec<Support> = (0u64..1 << ws.len()).map(Support::from_mask).collect();
        let git: Vec<bool> = all.iter().map(|s| gitq::is_ss_support(&ws, s)).collect::<Result<_, _>>().map_err(e)?;
        for sample in 0..20 {
            let bump = match sample {
                0 => q(1, 1000),
                1 => q(1, 1),
                2 => q(1000, 1),
                _ => q(rng.gen_range(1..=50), rng.gen_range(1..=10)),
            };
            let rho = &th.value + bump;
            let mp = MundetProblem::new(ws.clone(), d.clone(), rho.clone(), area.clone()).map_err(e)?;
            for (s, &g) in all.iter().zip(&git) {
                let gauged = mundet::is_gauged_semistable(&mp, s).map_err(e)?;
                ensure!(gauged == g, "{ws:?} d={d} ρ={rho}: support {s} disagrees above threshold {}", th.value);
                comparisons += 1;
            }
        }
        if th.value.is_positive() {
            positive += 1;
            let mut disagreement = false;
            for rho in [&th.value / BigRational::from_integer(2.into()), &th.value * q(999, 1000), th.value.clone()] {
                let mp = MundetProblem::new(ws.clone(), d.clone(), rho, area.clone()).map_err(e)?;
                for (s, &g) in all.iter().zip(&git) {
                    if mundet::is_gauged_semistable(&mp, s).map_err(e)? != g {
                        disagreement = true;
                    }
                }
            }
            ensure!(disagreement, "{ws:?} d={d}: no disagreement at or below threshold {}", th.value);
        }
        systems += 1;
    }
    Ok(format!("{systems} systems ({positive} with positive threshold), {comparisons} support checks"))
}

fn tree_suite() -> Check {
    let zero = DegreeVector::zero(1);
    let mut counts = Vec::new();
    for n in 1..=4 {
        let mine: std::collections::BTreeSet<String> = treecomb::enumerate_types(n, std::slice::from_ref(&zero), &zero, DEFAULT_BUDGET)
            .map_err(e)?
            .iter()
            .map(common::encode_tree)
            .collect();
        let oracle = common::brute_force_types(n);
        ensure!(mine == oracle, "n={n}: {} types vs oracle {}", mine.len(), oracle.len());
        counts.push(mine.len());
    }

    let mut rng = StdRng::seed_from_u64(4242);
    for i in 0..10_000 {
        let (t, m) = common::random_structural_tree(&mut rng);
        let s = treecomb::stabilize(&t).map_err(e)?;
        let again = treecomb::stabilize(&s).map_err(e)?;
        ensure!(again == s, "tree {i} ({t}): stabilize not idempotent");
        let degenerate = m == 0 && t.vertices().iter().all(|v| v.degree.is_zero());
        ensure!(degenerate || s.validate(m).valid, "tree {i} ({t}) -> {s}: {:?}", s.validate(m).diagnostics);
        ensure!(s.total_degree() == t.total_degree(), "tree {i}: degree changed");
    }

    // the leaf collapse destabilizes its parent, which needs a second pass
    let mut chain = ColoredTree::single(Scaling::Finite, zero.clone(), vec![1]);
    let v1 = chain.add_child(0, Scaling::Zero, zero.clone(), vec![2]);
    chain.add_child(v1, Scaling::Zero, zero.clone(), vec![]);
    let s = treecomb::stabilize(&chain).map_err(e)?;
    ensure!(s.len() == 1 && s.validate(2).valid, "two-pass fixture gave {s}");

    let mut bell = Vec::new();
    for n in 0..=6 {
        bell.push(treecomb::infinite_splittings(n, &zero, std::slice::from_ref(&zero), DEFAULT_BUDGET).map_err(e)?.len());
    }
    let oracle: Vec<usize> = (0..=6).map(|n| if n == 0 { 0 } else { set_partition_count(n) }).collect();
    ensure!(bell == oracle, "splitting counts {:?} vs {:?}", bell, oracle);
    Ok(format!("types n=1..4 {counts:?} match oracle; 10^4 stabilizations idempotent; splittings {bell:?}"))
}

/// Set partitions of an n-set by brute force over block labellings.
fn set_partition_count(n: usize) -> usize {
    // count restricted growth strings directly
    fn go(i: usize, n: usize, max: usize) -> usize {
        if i == n {
            return 1;
        }
        (0..=max + 1).map(|b| go(i + 1, n, max.max(b))).sum()
    }
    if n == 0 {
        1
    } else {
        go(1, n, 0)
    }
}

fn cli_determinism() -> Check {
    let bin = env!("CARGO_BIN_EXE_toricq");
    let runs: [(&str, Vec<&str>, &str); 5] = [
        ("c4 quotient", vec!["quotient", "c4.toml"], "c4_quotient.json"),
        ("c4 chambers", vec!["chambers", "c4.toml", "--nu2", "2,1"], "c4_chambers.json"),
        ("c41 ν=(1,2)", vec!["quasimap", "c4.toml", "--degree", "1,0"], "c41_nu12.json"),
        ("c41 ν=(2,1)", vec!["quasimap", "c4_nu21.toml", "--degree", "1,0"], "c41_nu21.json"),
        ("jtgen3", vec!["affine", "p23.toml", "--sweep", "1"], "jtgen3_sweep.json"),
    ];
    let data = common::data("");
    for (name, args, golden) in &runs {
        let expected = std::fs::read(common::golden(golden)).map_err(|err| format!("{golden}: {err}"))?;
        for threads in ["1", "1", "4", "4"] {
            let out = Command::new(bin)
                .current_dir(&data)
                .arg("--threads")
                .arg(threads)
                .args(args)
                .output()
                .map_err(|err| err.to_string())?;
            ensure!(out.status.success(), "{name}: exit {:?}", out.status.code());
            ensure!(out.stdout == expected, "{name} with {threads} threads differs from {golden}");
        }
    }
    Ok(format!("{} golden reports byte-identical over 2 runs x threads {{1,4}}", runs.len()))
}

type Criterion = (&'static str, fn() -> Check, Option<Duration>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("c4 reproduction", c4_reproduction, Some(Duration::from_secs(1))),
        ("c41(2) reproduction", c41_reproduction, Some(Duration::from_secs(1))),
        ("jtgen(3) table", jtgen3_table, Some(Duration::from_secs(1))),
        ("jtgen(2) Sym^d", jtgen2_symmetric_products, Some(Duration::from_secs(1))),
        ("inertia suite", inertia_suite, Some(Duration::from_secs(5))),
        ("Farkas/cone suite", cone_suite, Some(Duration::from_secs(30))),
        ("Mundet large-ρ", mundet_large_rho, Some(Duration::from_secs(60))),
        ("tree suite", tree_suite, Some(Duration::from_secs(30))),
        ("CLI determinism", cli_determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let verdict = match (&outcome, budget) {
            (Ok(_), Some(b)) if took > *b => Err(format!("took {took:.2?}, budget {b:?}")),
            (Ok(msg), _) => Ok(msg.clone()),
            (Err(msg), _) => Err(msg.clone()),
        };
        let limit = budget.map_or("none".to_string(), |b| format!("{b:?}"));
        match verdict {
            Ok(msg) => println!("PASS [{}] {name} ({took:.2?}, limit {limit}): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL [{}] {name} ({took:.2?}, limit {limit}): {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

