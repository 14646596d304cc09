//! Acceptance criteria. Every criterion runs and prints a single
//! `criterion N: PASS|FAIL ...` line; the process fails if any criterion does.

mod common;

use std::collections::HashMap;
use std::sync::Arc;

use polar_koszul::certificate::{certificate, verify_certificate};
use polar_koszul::experiments::{
    colon_identities, connected_graphs, random_tree, run_verification_suite, with_free_vertex_last,
    ExperimentConfig, Suite,
};
use polar_koszul::graph::enumerate_trees;
use polar_koszul::koszul::{depth_with, homology_dimensions, DepthOptions, Enumeration};
use polar_koszul::polar::{polarize_element, verify_polarized_basis, PolarizationContext};
use polar_koszul::{
    exec, CoefficientModule, Execution, IndexSet, KoszulElement, Monomial, MonomialIdeal,
    PrimeField, SimpleGraph,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_2024;

fn p32003() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn verdict(n: usize, ok: bool, detail: &str) -> bool {
    println!(
        "criterion {n}: {} {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_01_golden_depths,
        criterion_02_whiskers_are_cohen_macaulay,
        criterion_03_whisker_bound_certificates,
        criterion_04_trees_attain_the_bound,
        criterion_05_limit_depths,
        criterion_06_polarized_bases,
        criterion_07_taylor_oracle,
        criterion_08_friendly_sets,
        criterion_09_colon_identities,
        criterion_10_structural_suites,
    ];
    let mut failed = 0;
    for (n, run) in criteria.iter().enumerate() {
        let ok = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            verdict(n + 1, false, &format!("panicked: {msg}"))
        });
        failed += usize::from(!ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn whisker_depth(g: &SimpleGraph, k: u32, field: &PrimeField) -> usize {
    let i = g.whisker_ideal().power(k);
    depth_with(&i, field, &DepthOptions::default())
        .unwrap()
        .depth
}

/// Depths memoized per isomorphism class; depth does not see vertex labels.
fn class_depths(jobs: &[(SimpleGraph, u32)]) -> HashMap<(u64, usize, u32), usize> {
    let mut keys: Vec<(u64, usize, u32)> = jobs
        .iter()
        .map(|(g, k)| (g.canonical_form().edge_mask(), g.n(), *k))
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let depths = exec::map(Execution::Parallel, &keys, |&(mask, n, k)| {
        whisker_depth(&SimpleGraph::from_edge_mask(n, mask), k, &p32003())
    });
    keys.into_iter().zip(depths).collect()
}

fn lookup(table: &HashMap<(u64, usize, u32), usize>, g: &SimpleGraph, k: u32) -> usize {
    table[&(g.canonical_form().edge_mask(), g.n(), k)]
}

fn criterion_01_golden_depths() -> bool {
    let f = p32003();
    let c3: Vec<usize> = (1..=4)
        .map(|k| whisker_depth(&SimpleGraph::cycle(3), k, &f))
        .collect();
    let c4: Vec<usize> = (1..=3)
        .map(|k| whisker_depth(&SimpleGraph::cycle(4), k, &f))
        .collect();
    let two_k2 = SimpleGraph::new(4, [(0, 1), (2, 3)]).unwrap();
    let d = whisker_depth(&two_k2, 4, &f);
    let ok = c3 == [3, 0, 0, 0] && c4 == [4, 3, 1] && d == 2;
    verdict(1, ok, &format!("C3 {c3:?}, C4 {c4:?}, 2K2 k=4 {d}"))
}

fn criterion_02_whiskers_are_cohen_macaulay() -> bool {
    let graphs: Vec<SimpleGraph> = (1..=5).flat_map(|n| connected_graphs(n).unwrap()).collect();
    let depths = exec::map(Execution::Parallel, &graphs, |g| {
        whisker_depth(g, 1, &p32003())
    });
    let bad: Vec<String> = graphs
        .iter()
        .zip(&depths)
        .filter(|(g, &d)| d != g.n())
        .map(|(g, d)| format!("{} depth {d}", g.id()))
        .collect();
    verdict(
        2,
        bad.is_empty(),
        &format!("{} graphs, mismatches {bad:?}", graphs.len()),
    )
}

fn criterion_03_whisker_bound_certificates() -> bool {
    let jobs: Vec<(SimpleGraph, u32)> = (1..=4)
        .flat_map(|n| connected_graphs(n).unwrap())
        .flat_map(|g| (1..=g.n() as u32).map(move |k| (g.clone(), k)))
        .collect();
    let table = class_depths(&jobs);
    let certified = exec::map(Execution::Parallel, &jobs, |(g, k)| {
        verify_certificate(&certificate(g, *k as usize, p32003()).unwrap()).unwrap()
    });
    let mut uncertified = Vec::new();
    let mut above_bound = Vec::new();
    for ((g, k), ok) in jobs.iter().zip(certified) {
        let bound = g.n() + 1 - *k as usize;
        let d = lookup(&table, g, *k);
        if !ok {
            uncertified.push(format!("{} k={k}", g.id()));
        }
        if d > bound {
            above_bound.push(format!("{} k={k} depth {d} > {bound}", g.id()));
        }
    }
    let detail = format!(
        "{} cases; depth above bound: {}; certificate not verified: {} {:?}",
        jobs.len(),
        above_bound.len(),
        uncertified.len(),
        uncertified.iter().take(6).collect::<Vec<_>>()
    );
    verdict(3, uncertified.is_empty() && above_bound.is_empty(), &detail)
}

fn criterion_04_trees_attain_the_bound() -> bool {
    let mut jobs = Vec::new();
    for n in 1..=5 {
        for t in enumerate_trees(n).unwrap() {
            let kmax = if n <= 4 { n } else { 3 };
            jobs.extend((1..=kmax as u32).map(|k| (t.clone(), k)));
        }
    }
    let table = class_depths(&jobs);
    let bad: Vec<String> = jobs
        .iter()
        .filter(|(t, k)| lookup(&table, t, *k) != t.n() + 1 - *k as usize)
        .map(|(t, k)| format!("{} k={k}", t.id()))
        .collect();
    verdict(
        4,
        bad.is_empty(),
        &format!("{} (tree, k) pairs, mismatches {bad:?}", jobs.len()),
    )
}

fn criterion_05_limit_depths() -> bool {
    let f = p32003();
    let p2: Vec<usize> = (2..=4)
        .map(|k| whisker_depth(&SimpleGraph::path(2), k, &f))
        .collect();
    let c3: Vec<usize> = (3..=4)
        .map(|k| whisker_depth(&SimpleGraph::cycle(3), k, &f))
        .collect();
    let ok = p2 == [1, 1, 1] && c3 == [0, 0];
    verdict(5, ok, &format!("P2 k=2..4 {p2:?}, C3 k=3..4 {c3:?}"))
}

fn criterion_06_polarized_bases() -> bool {
    let f = p32003();
    let opts = DepthOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ideals = Vec::new();
    for _ in 0..100 {
        let n = rand::Rng::gen_range(&mut rng, 1..=3);
        ideals.push(common::random_ideal(&mut rng, n, 3, 4));
    }
    let mut failures = Vec::new();
    let mut checks = 0;
    for i in &ideals {
        for h in 0..=i.nvars() {
            checks += 1;
            let r = verify_polarized_basis(i, h, &f, &opts).unwrap();
            if !r.pass {
                failures.push(format!("{i} i={h}: {:?}", r.witness_failures));
            }
        }
    }

    // the running example and its exact polarization
    let sp = common::space(2);
    let i = MonomialIdeal::minimalize(
        sp.clone(),
        [
            Monomial::from_exponents(&[2, 1]),
            Monomial::from_exponents(&[1, 2]),
        ],
    )
    .unwrap();
    let module = CoefficientModule::Ideal(Arc::new(i.clone()));
    let z = KoszulElement::from_terms(
        sp,
        module,
        f,
        [
            (
                1,
                Monomial::from_exponents(&[1, 2]),
                IndexSet::from_indices(&[0]),
            ),
            (
                -1,
                Monomial::from_exponents(&[2, 1]),
                IndexSet::from_indices(&[1]),
            ),
        ],
    )
    .unwrap();
    let ctx = PolarizationContext::new(&i);
    let zp = polarize_element(&z, &ctx).unwrap();
    // x11 x12 x21 x22 in slots 0..4
    let expected = KoszulElement::from_terms(
        ctx.target().clone(),
        CoefficientModule::Ideal(Arc::new(ctx.polarized_ideal().unwrap().clone())),
        f,
        [
            (
                1,
                Monomial::from_exponents(&[1, 0, 1, 1]),
                IndexSet::from_indices(&[1]),
            ),
            (
                -1,
                Monomial::from_exponents(&[1, 1, 1, 0]),
                IndexSet::from_indices(&[3]),
            ),
        ],
    )
    .unwrap();
    let running = verify_polarized_basis(&i, 1, &f, &opts).unwrap();
    let example_ok = zp == expected && running.pass && running.r == 1;
    if !example_ok {
        failures.push(format!("running example: {}", zp.to_text()));
    }
    verdict(
        6,
        failures.is_empty(),
        &format!("{checks} (ideal, i) checks plus the running example, failures {failures:?}"),
    )
}

fn criterion_07_taylor_oracle() -> bool {
    let f = p32003();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut bad = Vec::new();
    for _ in 0..50 {
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let i = common::random_ideal(&mut rng, n, 3, 6);
        let oracle = common::taylor_tor(&common::exponents(&i), n, 32003);
        let module = CoefficientModule::Quotient(Arc::new(i.clone()));
        let strands = homology_dimensions(&module, n, &f, &DepthOptions::default()).unwrap();
        if common::normalize(strands) != oracle {
            bad.push(i.to_string());
        }
    }
    verdict(7, bad.is_empty(), &format!("50 ideals, mismatches {bad:?}"))
}

fn criterion_08_friendly_sets() -> bool {
    let graphs: Vec<SimpleGraph> = (1..=7).flat_map(|n| connected_graphs(n).unwrap()).collect();
    let verdicts = exec::map(Execution::Parallel, &graphs, |g| {
        let Ok(s) = g.friendly_independent_set() else {
            return false;
        };
        let mask = s.iter().fold(0u64, |m, &v| m | 1 << v);
        // independent and nothing addable, checked from scratch
        let independent = s.iter().all(|&a| s.iter().all(|&b| !g.has_edge(a, b)));
        let maximal = (0..g.n())
            .filter(|v| mask >> v & 1 == 0)
            .all(|v| s.iter().any(|&w| g.has_edge(v, w)));
        independent && maximal && gamma_connected(g, &s)
    });
    let bad: Vec<String> = graphs
        .iter()
        .zip(&verdicts)
        .filter(|(_, &ok)| !ok)
        .map(|(g, _)| g.id())
        .collect();
    verdict(
        8,
        bad.is_empty(),
        &format!("{} connected graphs, failures {bad:?}", graphs.len()),
    )
}

/// Connectivity of Γ_S(G) by a search that uses only the graph's adjacency.
fn gamma_connected(g: &SimpleGraph, s: &[usize]) -> bool {
    let linked = |a: usize, b: usize| {
        (0..g.n()).any(|v| !s.contains(&v) && g.has_edge(a, v) && g.has_edge(v, b))
    };
    let mut seen = vec![false; s.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(a) = stack.pop() {
        for b in 0..s.len() {
            if !seen[b] && linked(s[a], s[b]) {
                seen[b] = true;
                stack.push(b);
            }
        }
    }
    seen.iter().all(|&x| x)
}

/// `I : m` from the generator description `u / gcd(u, m)`.
fn colon(i: &MonomialIdeal, m: &Monomial) -> MonomialIdeal {
    let gens = i
        .generators()
        .iter()
        .map(|g| g.checked_div(&g.gcd(m)).unwrap());
    MonomialIdeal::minimalize(i.space_arc().clone(), gens).unwrap()
}

fn criterion_09_colon_identities() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let mut bad = Vec::new();
    let mut checks = 0;
    for _ in 0..50 {
        let n = rand::Rng::gen_range(&mut rng, 2..=5);
        let t = with_free_vertex_last(&random_tree(&mut rng, n)).unwrap();
        let nv = 2 * n;
        let (xn, xn1) = (n - 1, n - 2);
        let i = t.whisker_ideal();
        let j = i.substitute_zero(xn).unwrap();
        let l = j.substitute_zero(xn1).unwrap();
        let edge = Monomial::product_of(nv, [xn1, xn]);
        for k in 1..=3u32 {
            checks += 1;
            let lib = colon_identities(&t, k).unwrap();
            let lib_ok = lib
                .iter()
                .filter(|c| c.name == "colon-xn" || c.name == "morey")
                .all(|c| c.holds);
            let first = colon(
                &j.power(k).with_generator(edge.clone()),
                &Monomial::variable(nv, xn),
            ) == l.power(k).with_generator(Monomial::variable(nv, xn1));
            let j_edge = j.with_generator(edge.clone());
            let morey = colon(&j_edge.power(k), &edge) == j_edge.power(k - 1);
            if !(lib_ok && first && morey) {
                bad.push(format!("{} k={k}", t.id()));
            }
        }
    }
    verdict(
        9,
        bad.is_empty(),
        &format!("{checks} (tree, k) checks, failures {bad:?}"),
    )
}

fn criterion_10_structural_suites() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 10);
    let f = p32003();
    let f2 = PrimeField::new(2).unwrap();
    let opts = DepthOptions::default();
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;
    for _ in 0..60 {
        let n = rand::Rng::gen_range(&mut rng, 1..=4);
        let i = common::random_ideal(&mut rng, n, 3, 4);

        // boundary squares to zero, preserves multidegree, and satisfies Leibniz
        let module = CoefficientModule::Ideal(Arc::new(i.clone()));
        for h in 0..=n {
            for z in
                polar_koszul::koszul::homology_basis_cycles(i.space_arc(), &module, h, &f, &opts)
                    .unwrap()
            {
                checks += 1;
                let free = z.with_module(CoefficientModule::Free).unwrap();
                let lifted = free
                    .wedge(&unit_form(n, &f), CoefficientModule::Free)
                    .unwrap();
                if !free.boundary().boundary().is_zero()
                    || !free.is_cycle()
                    || lifted.boundary()
                        != free
                            .wedge(&unit_form(n, &f).boundary(), CoefficientModule::Free)
                            .unwrap()
                            .scale(if h % 2 == 0 { 1 } else { f.neg(1) })
                {
                    failures.push(format!("koszul {i} i={h}"));
                }
                let a = z.multidegree();
                if z.boundary()
                    .terms()
                    .any(|(u, set, _)| Some(polar_koszul::koszul::term_multidegree(u, set)) != a)
                {
                    failures.push(format!("multidegree {i} i={h}"));
                }
            }
        }

        // Betti sums survive polarization
        checks += 1;
        let (p, _) = i.polarize();
        if betti_sums(&i, &f) != betti_sums(&p, &f) {
            failures.push(format!("betti {i}"));
        }

        // Auslander-Buchsbaum against the Taylor oracle, and the two primes
        checks += 1;
        let r = depth_with(&i, &f, &opts).unwrap();
        let r2 = depth_with(&i, &f2, &opts).unwrap();
        if r.depth + r.projective_dimension != n || r.depth != common::oracle_depth(&i, 32003) {
            failures.push(format!("auslander-buchsbaum {i}"));
        }
        if r.depth != r2.depth {
            failures.push(format!("primes {i}"));
        }

        // lattice and box enumerations see the same degrees
        let q = CoefficientModule::Quotient(Arc::new(i.clone()));
        let lattice = DepthOptions {
            enumeration: Enumeration::Lattice,
            ..opts
        };
        let boxed = DepthOptions {
            enumeration: Enumeration::ExponentBox,
            ..opts
        };
        if homology_dimensions(&q, n, &f, &lattice).unwrap()
            != homology_dimensions(&q, n, &f, &boxed).unwrap()
        {
            failures.push(format!("enumeration {i}"));
        }
    }

    // the same primes agree on the whisker powers of the golden graphs
    for g in [
        SimpleGraph::cycle(3),
        SimpleGraph::cycle(4),
        SimpleGraph::path(3),
    ] {
        for k in 1..=3 {
            checks += 1;
            if whisker_depth(&g, k, &f) != whisker_depth(&g, k, &f2) {
                failures.push(format!("primes {} k={k}", g.id()));
            }
        }
    }

    // the shipped suites: tree, limit and colon
    let cfg = ExperimentConfig {
        nmax: 4,
        kmax: Some(3),
        trials: 20,
        ..ExperimentConfig::default()
    };
    let report = run_verification_suite(&cfg, &[Suite::Tree, Suite::Limit, Suite::Colon]).unwrap();
    for s in &report.suites {
        checks += s.checks;
        if s.failed > 0 {
            failures.push(format!("suite {}: {:?}", s.name, s.reproducers));
        }
    }
    verdict(
        10,
        failures.is_empty(),
        &format!("{checks} checks, failures {failures:?}"),
    )
}

/// `x_1 e_1`, a homogeneous factor for the Leibniz check.
fn unit_form(n: usize, f: &PrimeField) -> KoszulElement {
    KoszulElement::from_terms(
        common::space(n),
        CoefficientModule::Free,
        *f,
        [(1, Monomial::variable(n, 0), IndexSet::from_indices(&[0]))],
    )
    .unwrap()
}

fn betti_sums(i: &MonomialIdeal, f: &PrimeField) -> Vec<usize> {
    let m = CoefficientModule::Ideal(Arc::new(i.clone()));
    let mut s = vec![0usize; 16];
    for (_, d) in homology_dimensions(&m, i.nvars(), f, &DepthOptions::default()).unwrap() {
        for (t, x) in d.into_iter().enumerate() {
            s[t] += x;
        }
    }
    s
}
