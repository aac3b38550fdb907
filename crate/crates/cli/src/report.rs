//! The `report` subcommand: every acceptance criterion, run through the
//! library, summarised as one row per criterion.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sumfree_core::caps::caps_report;
use sumfree_core::constructions::{
    cyclic_construction, distinct_construction, product_lower_bound, type3_construction, verify_prop34,
};
use sumfree_core::group::abelian_groups_of_order;
use sumfree_core::loopgraph::{
    catalog_graph, gamma1, gamma2, gamma_prime, lift_tilde, link_graph, rtimes, EdgeKind, LoopGraph, LoopKind, CATALOG,
};
use sumfree_core::mis::{count_mis, count_mis_bruteforce, fixture};
use sumfree_core::sumfree::{
    count_fmax, count_fstar_max, enumerate_maximal_sumfree, is_maximal_sumfree, mu_bruteforce,
};
use sumfree_core::verify::{
    tight_count, verify_classical_bounds, verify_overcount, verify_structure_z2, verify_structure_z3,
    verify_z2_link_claims, verify_z3_degree_bounds, verify_z3_pairs, verify_z3_two_element, VerificationOutcome,
};
use sumfree_core::{Budget, ElementSet, GroupSpec, Result};

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub limit: Duration,
    run: fn(&mut Context) -> Result<Vec<String>>,
}

/// Shared state: the seed for random graphs and every graph built along the
/// way, for the bound check at the end.
pub struct Context {
    pub seed: u64,
    pub quick: bool,
    graphs: Vec<LoopGraph>,
}

fn fail_if(cond: bool, msg: impl Into<String>, out: &mut Vec<String>) {
    if cond {
        out.push(msg.into());
    }
}

fn z(m: usize) -> GroupSpec {
    GroupSpec::cyclic(m).expect("m >= 2")
}

fn outcome_failures(o: &VerificationOutcome, out: &mut Vec<String>) {
    if !o.passed {
        out.push(format!(
            "{}: {} violations, first {:?}",
            o.check,
            o.violations,
            o.counterexamples.first()
        ));
    }
}

fn c1(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    let z7 = z(7);
    fail_if(count_fmax(&z7)?.value != BigUint::from(9u32), "f_max(Z7) != 9", &mut f);
    fail_if(
        count_fstar_max(&z7)?.value != BigUint::from(14u32),
        "f*_max(Z7) != 14",
        &mut f,
    );
    for (name, want) in [
        ("C4", 2u32),
        ("C6", 5),
        ("K2□K3", 6),
        ("cube", 6),
        ("looped-triangle", 2),
        ("K2□K3+1-loop", 4),
    ] {
        let g = fixture(name).expect("catalog fixture");
        let got = count_mis(&g)?.count;
        fail_if(
            got != BigUint::from(want),
            format!("mis({name}) = {got}, want {want}"),
            &mut f,
        );
    }
    Ok(f)
}

fn c2(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for n in 2..=30 {
        for g in abelian_groups_of_order(n) {
            let formula = BigUint::from(g.mu_formula()?);
            let brute = mu_bruteforce(&g)?.value;
            fail_if(
                formula != brute,
                format!("{g}: formula {formula}, brute force {brute}"),
                &mut f,
            );
        }
    }
    Ok(f)
}

fn maximal_by_filter(g: &GroupSpec) -> Vec<ElementSet> {
    let n = g.order();
    (0u64..1 << n)
        .map(|m| ElementSet::from_mask(n, m))
        .filter(|a| is_maximal_sumfree(g, a))
        .collect()
}

fn random_graph(rng: &mut ChaCha8Rng) -> LoopGraph {
    let n = rng.gen_range(1..=18);
    let p = rng.gen_range(0.1..0.6);
    let mut g = LoopGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v, EdgeKind::TYPE1);
            }
        }
        if rng.gen_bool(0.05) {
            g.add_loop(u, LoopKind::BAD);
        }
    }
    g
}

fn c3(ctx: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    let max_n = if ctx.quick { 12 } else { 16 };
    for n in 2..=max_n {
        for g in abelian_groups_of_order(n) {
            let mut fast = enumerate_maximal_sumfree(&g)?;
            fast.sort();
            let mut slow = maximal_by_filter(&g);
            slow.sort();
            fail_if(fast != slow, format!("{g}: enumerator and filter differ"), &mut f);
        }
    }
    let mut graphs: Vec<LoopGraph> = CATALOG.iter().filter_map(|n| catalog_graph(n)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    graphs.extend((0..200).map(|_| random_graph(&mut rng)));
    for (i, gr) in graphs.iter().enumerate() {
        let fast = count_mis(gr)?.count;
        let slow = BigUint::from(count_mis_bruteforce(gr)?);
        fail_if(fast != slow, format!("graph {i}: {fast} vs {slow}"), &mut f);
    }
    ctx.graphs.extend(graphs);
    Ok(f)
}

fn c4(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for k in 2..=4 {
        for o in verify_z2_link_claims(k)? {
            outcome_failures(&o, &mut f);
        }
    }
    outcome_failures(&verify_z3_degree_bounds(2)?, &mut f);
    for k in 2..=3 {
        outcome_failures(&verify_z3_two_element(k)?, &mut f);
    }
    for k in 1..=3 {
        outcome_failures(&verify_z3_pairs(k)?, &mut f);
    }
    Ok(f)
}

fn c5(ctx: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    let h = z(9);
    let b = h.set(&[4, 5, 6])?;
    let s = h.set(&[1, 7])?;
    let gamma = link_graph(&h, &s, &b)?;
    let base = count_mis(&gamma)?.count;
    let prime = count_mis(&gamma_prime(&gamma))?.count;
    let rt = count_mis(&rtimes(&gamma1(&gamma), &gamma2(&gamma))?)?.count;
    for k in ["Z2", "Z3", "Z4", "Z2^2", "Z5"] {
        let kg = GroupSpec::parse(k)?;
        let lift = lift_tilde(&h, &kg, &b, &s)?;
        let direct = count_mis(&lift.graph)?.count;
        let a = kg.involution_count();
        let formula = &base * prime.pow(a as u32 - 1) * rt.pow(((kg.order() - a) / 2) as u32);
        fail_if(
            direct != formula,
            format!("K = {k}: direct {direct}, formula {formula}"),
            &mut f,
        );
        ctx.graphs.push(lift.graph);
    }
    Ok(f)
}

fn c6(ctx: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for m in [9, 18, 19, 27, 28, 36] {
        let r = cyclic_construction(m)?;
        fail_if(
            r.closed_form_match == Some(false),
            format!("m = {m}: closed form mismatch ({})", r.case),
            &mut f,
        );
        let ks: [Option<GroupSpec>; 3] = [None, Some(z(2)), Some(z(3))];
        for k in ks.iter() {
            let p = product_lower_bound(m, k.as_ref())?;
            let label = k.as_ref().map_or("trivial".into(), |k| k.label());
            fail_if(
                p.holds != Some(true),
                format!("m = {m}, K = {label}: bound not certified"),
                &mut f,
            );
            if let Some(w) = &p.witness {
                fail_if(
                    w.mis_direct != w.mis_product,
                    format!("m = {m}, K = {label}: lift identity"),
                    &mut f,
                );
            }
        }
        let (g, b, s) = sumfree_core::constructions::cyclic_pair(m)?;
        ctx.graphs.push(link_graph(&g, &s, &b)?);
    }
    Ok(f)
}

fn c7(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for (m, n, want) in [
        (3084, 3084, true),
        (3084, 30840, true),
        (10_000, 10_000, true),
        (9, 9, false),
    ] {
        let v = verify_prop34(m, n)?;
        fail_if(v.holds != want, format!("({m}, {n}) gave {}", v.holds), &mut f);
    }
    Ok(f)
}

fn c8(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for m in [13, 19] {
        let r = type3_construction(&z(m))?;
        let gen_ok = r.generation.as_ref().is_some_and(|g| g.valid && g.injective);
        fail_if(
            r.mis_exact != BigUint::from(2u32) || !r.matches || !gen_ok,
            format!("Z{m}: mis {}, match {}, generation {gen_ok}", r.mis_exact, r.matches),
            &mut f,
        );
    }
    Ok(f)
}

fn c9(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for (g, route, mis) in [
        ("Z5", "type-i", 2u32),
        ("Z7", "type-iii", 2),
        ("Z9", "type-ii", 2),
        ("Z8", "exponent-divisible-by-4", 4),
        ("Z6", "odd-residues-mod-6", 2),
    ] {
        let r = distinct_construction(&GroupSpec::parse(g)?)?;
        fail_if(
            r.route != route || r.mis_exact != BigUint::from(mis) || !r.matches,
            format!("{g}: route {}, mis {}, match {}", r.route, r.mis_exact, r.matches),
            &mut f,
        );
    }
    for k in 1..=4 {
        let g = GroupSpec::elementary(2, k)?;
        let a = count_fmax(&g)?.value;
        let b = count_fstar_max(&g)?.value;
        fail_if(a != b, format!("Z2^{k}: f_max {a}, f*_max {b}"), &mut f);
    }
    Ok(f)
}

fn c10(ctx: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    let budget = Budget::unlimited();
    outcome_failures(&verify_structure_z2(4, &budget)?, &mut f);
    if !ctx.quick {
        outcome_failures(&verify_structure_z2(5, &budget)?, &mut f);
    }
    outcome_failures(&verify_structure_z3(3, &budget)?, &mut f);
    Ok(f)
}

fn c11(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for g in ["Z2^3", "Z2^4", "Z3^2"] {
        outcome_failures(&verify_overcount(&GroupSpec::parse(g)?)?, &mut f);
    }
    Ok(f)
}

fn c12(_: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    for k in 1..=3 {
        let r = caps_report(k)?;
        fail_if(
            !r.agree || !r.bijection,
            format!("k = {k}: {} vs {}", r.geometric, r.via_sumfree),
            &mut f,
        );
    }
    Ok(f)
}

fn c13(ctx: &mut Context) -> Result<Vec<String>> {
    let mut f = Vec::new();
    let mut graphs = std::mem::take(&mut ctx.graphs);
    graphs.push(LoopGraph::from_edges(6, &[(0, 1), (2, 3), (4, 5)], &[]));
    let o = verify_classical_bounds("suite-graphs", &graphs)?;
    outcome_failures(&o, &mut f);
    fail_if(
        tight_count(&o).unwrap_or(0) == 0,
        "triangle-free bound never attained",
        &mut f,
    );
    Ok(f)
}

pub fn criteria() -> Vec<Criterion> {
    let c = |id, title, secs, run| Criterion {
        id,
        title,
        limit: Duration::from_secs(secs),
        run,
    };
    vec![
        c(
            1,
            "exact small constants",
            1,
            c1 as fn(&mut Context) -> Result<Vec<String>>,
        ),
        c(2, "mu formula vs brute force, order <= 30", 60, c2),
        c(3, "enumerator and MIS oracles", 600, c3),
        c(4, "link-graph structure", 600, c4),
        c(5, "product identity for lifts", 60, c5),
        c(6, "interval construction and product bound", 300, c6),
        c(7, "large-cyclic-component arithmetic", 1, c7),
        c(8, "exponent 13 and 19 constructions", 1, c8),
        c(9, "distinct-variant constructions", 300, c9),
        c(10, "structure theorems", 1800, c10),
        c(11, "overcounting", 600, c11),
        c(12, "caps correspondence", 600, c12),
        c(13, "classical MIS bounds", 300, c13),
    ]
}

/// Runs the criteria (all, or those in `only`), returning one JSON row each
/// and whether all passed.
pub fn run(seed: u64, quick: bool, only: &[u32], timings: bool) -> (Vec<Value>, bool) {
    let mut ctx = Context {
        seed,
        quick,
        graphs: Vec::new(),
    };
    let mut rows = Vec::new();
    let mut all = true;
    for c in criteria() {
        if !only.is_empty() && !only.contains(&c.id) {
            continue;
        }
        let start = Instant::now();
        let result = (c.run)(&mut ctx);
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(f) if f.is_empty() => (
                elapsed <= c.limit,
                if elapsed <= c.limit {
                    String::new()
                } else {
                    "over time limit".into()
                },
            ),
            Ok(f) => (false, f.join("; ")),
            Err(e) => (false, e.to_string()),
        };
        all &= pass;
        let mut row = json!({
            "criterion": c.id,
            "title": c.title,
            "pass": pass,
            "limit_s": c.limit.as_secs(),
            "detail": detail,
        });
        if timings {
            row["elapsed_ms"] = json!(elapsed.as_secs_f64() * 1e3);
        }
        rows.push(row);
    }
    (rows, all)
}

/// Fixed-width summary table.
pub fn table(rows: &[Value]) -> String {
    let mut out = format!("{:<4} {:<44} {:<5} {}\n", "id", "criterion", "pass", "detail");
    for r in rows {
        out.push_str(&format!(
            "{:<4} {:<44} {:<5} {}\n",
            r["criterion"].as_u64().unwrap_or(0),
            r["title"].as_str().unwrap_or(""),
            if r["pass"].as_bool() == Some(true) {
                "ok"
            } else {
                "FAIL"
            },
            r["detail"].as_str().unwrap_or("")
        ));
    }
    out.trim_end().to_string()
}
