//! Maximal independent sets in graphs with loops.
//!
//! A looped vertex can never be chosen and need not be dominated, so counting
//! first deletes looped vertices and then works on the simple graph that
//! remains. Each connected component is handled by a pivoting
//! Bron–Kerbosch search on the complement; the total is the product of the
//! component counts.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::budget::{Budget, Meter};
use crate::certified::{self, BoundValue, Interval, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::loopgraph::{catalog_graph, catalog_label, component_vertex_sets, fingerprint, LoopGraph};
use crate::set::ElementSet;
use crate::util::{binomial, serialize_decimal};

/// Deletes looped vertices and their edges; the survivors keep their order.
pub fn reduce_loops(gr: &LoopGraph) -> LoopGraph {
    let keep: Vec<usize> = (0..gr.vertex_count()).filter(|&v| !gr.is_looped(v)).collect();
    gr.induced(&keep)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub label: String,
    #[serde(serialize_with = "serialize_decimal")]
    pub count: BigUint,
}

/// Exact count with a per-component breakdown over the components of the
/// input graph (loops included when labelling).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MisCount {
    #[serde(skip)]
    pub fingerprint: String,
    #[serde(serialize_with = "serialize_decimal")]
    pub count: BigUint,
    pub components: Vec<ComponentCount>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }

    fn count_and(&self, o: &Bits) -> u32 {
        self.0.iter().zip(&o.0).map(|(a, b)| (a & b).count_ones()).sum()
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            })
        })
    }
}

/// Loop-free graph in closed-neighbourhood form.
struct Simple {
    closed: Vec<Bits>,
}

impl Simple {
    fn from_adjacency(adj: &[Vec<usize>]) -> Self {
        let n = adj.len();
        let closed = adj
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                let mut b = Bits::empty(n);
                b.set(v);
                for &u in nb {
                    b.set(u);
                }
                b
            })
            .collect();
        Simple { closed }
    }

    fn n(&self) -> usize {
        self.closed.len()
    }

    /// Maximal independent sets are maximal cliques of the complement, whose
    /// non-neighbourhoods are the closed neighbourhoods here.
    fn search<F: FnMut(&[usize]) -> Result<()>>(
        &self,
        r: &mut Vec<usize>,
        p: Bits,
        x: Bits,
        meter: &mut Meter,
        found: &mut u64,
        emit: &mut F,
    ) -> Result<()> {
        meter.tick(*found)?;
        if p.is_empty() {
            if x.is_empty() {
                *found += 1;
                emit(r)?;
            }
            return Ok(());
        }
        // pivot maximising |P ∩ N[u]| among P ∪ X; branch on P ∩ N[u]
        let pivot = p
            .iter()
            .chain(x.iter())
            .min_by_key(|&u| std::cmp::Reverse(p.count_and(&self.closed[u])))
            .expect("P is non-empty");
        let branch: Vec<usize> = p.and(&self.closed[pivot]).iter().collect();
        let (mut p, mut x) = (p, x);
        for v in branch {
            r.push(v);
            self.search(
                r,
                p.and_not(&self.closed[v]),
                x.and_not(&self.closed[v]),
                meter,
                found,
                emit,
            )?;
            r.pop();
            p.clear(v);
            x.set(v);
        }
        Ok(())
    }

    fn for_each<F: FnMut(&[usize]) -> Result<()>>(&self, meter: &mut Meter, mut emit: F) -> Result<u64> {
        let n = self.n();
        let mut found = 0;
        self.search(
            &mut Vec::new(),
            Bits::full(n),
            Bits::empty(n),
            meter,
            &mut found,
            &mut emit,
        )?;
        Ok(found)
    }
}

fn count_simple(adj: &[Vec<usize>], meter: &mut Meter) -> Result<BigUint> {
    let mut total = BigUint::one();
    for comp in simple_components(adj) {
        let sub = Simple::from_adjacency(&restrict(adj, &comp));
        let c = sub.for_each(meter, |_| Ok(()))?;
        total *= BigUint::from(c);
    }
    Ok(total)
}

fn simple_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut g = LoopGraph::new(adj.len());
    for (v, nb) in adj.iter().enumerate() {
        for &u in nb {
            if u > v {
                g.add_edge(v, u, crate::loopgraph::EdgeKind::TYPE1);
            }
        }
    }
    component_vertex_sets(&g)
}

fn restrict(adj: &[Vec<usize>], verts: &[usize]) -> Vec<Vec<usize>> {
    let mut pos = HashMap::new();
    for (i, &v) in verts.iter().enumerate() {
        pos.insert(v, i);
    }
    verts
        .iter()
        .map(|&v| adj[v].iter().filter_map(|u| pos.get(u).copied()).collect())
        .collect()
}

/// Exact number of maximal independent sets.
pub fn count_mis(gr: &LoopGraph) -> Result<MisCount> {
    count_mis_with(gr, &Budget::default())
}

pub fn count_mis_with(gr: &LoopGraph, budget: &Budget) -> Result<MisCount> {
    let mut meter = budget.meter("count_mis");
    let mut total = BigUint::one();
    let mut components = Vec::new();
    // identical components (common in lifted graphs) are counted once
    let mut memo: HashMap<(Vec<Vec<usize>>, Vec<bool>), BigUint> = HashMap::new();
    for comp in component_vertex_sets(gr) {
        let sub = gr.induced(&comp);
        let key = (
            sub.adjacency(),
            (0..sub.vertex_count()).map(|v| sub.is_looped(v)).collect::<Vec<_>>(),
        );
        let c = match memo.get(&key) {
            Some(c) => c.clone(),
            None => {
                let red = reduce_loops(&sub);
                let c = count_simple(&red.adjacency(), &mut meter)?;
                memo.insert(key, c.clone());
                c
            }
        };
        total *= &c;
        components.push(ComponentCount {
            label: catalog_label(&sub),
            count: c,
        });
    }
    Ok(MisCount {
        fingerprint: fingerprint(gr),
        count: total,
        components,
    })
}

/// Every maximal independent set as a set of vertex ids, in the canonical
/// [`ElementSet`] order. `budget.max_nodes` also caps the number of sets.
pub fn enumerate_mis(gr: &LoopGraph, budget: &Budget) -> Result<Vec<ElementSet>> {
    let n = gr.vertex_count();
    let mut out = Vec::new();
    for_each_mis(gr, budget, |s| {
        out.push(ElementSet::from_indices(n, s.iter().copied())?);
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

/// Streams maximal independent sets (sorted vertex lists) as the Cartesian
/// product of the per-component sets.
pub fn for_each_mis<F>(gr: &LoopGraph, budget: &Budget, mut visit: F) -> Result<u64>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let mut meter = budget.meter("enumerate_mis");
    let keep: Vec<usize> = (0..gr.vertex_count()).filter(|&v| !gr.is_looped(v)).collect();
    let adj = gr.induced(&keep).adjacency();
    let mut per_comp: Vec<Vec<Vec<usize>>> = Vec::new();
    for comp in simple_components(&adj) {
        let sub = Simple::from_adjacency(&restrict(&adj, &comp));
        let mut sets = Vec::new();
        sub.for_each(&mut meter, |r| {
            let mut s: Vec<usize> = r.iter().map(|&i| keep[comp[i]]).collect();
            s.sort_unstable();
            sets.push(s);
            Ok(())
        })?;
        sets.sort();
        per_comp.push(sets);
    }
    let mut emitted = 0u64;
    let mut idx = vec![0usize; per_comp.len()];
    loop {
        let mut s: Vec<usize> = per_comp
            .iter()
            .zip(&idx)
            .flat_map(|(c, &i)| c[i].iter().copied())
            .collect();
        s.sort_unstable();
        emitted += 1;
        if emitted > budget.max_nodes {
            return Err(Error::BudgetExceeded {
                operation: "enumerate_mis",
                nodes: meter.nodes,
                found: emitted - 1,
            });
        }
        visit(&s)?;
        // odometer over the component choices
        let mut k = per_comp.len();
        loop {
            if k == 0 {
                return Ok(emitted);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_comp[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Brute force over all vertex subsets; for testing against small graphs.
pub fn count_mis_bruteforce(gr: &LoopGraph) -> Result<u64> {
    let n = gr.vertex_count();
    if n > 24 {
        return Err(Error::TooLarge {
            operation: "count_mis_bruteforce",
            n,
            guard: 24,
        });
    }
    let adj: Vec<u32> = {
        let mut a = vec![0u32; n];
        for (u, v, _) in gr.edges() {
            a[u] |= 1 << v;
            a[v] |= 1 << u;
        }
        a
    };
    let looped: u32 = (0..n).filter(|&v| gr.is_looped(v)).map(|v| 1u32 << v).sum();
    let free = ((1u64 << n) - 1) as u32 & !looped;
    let mut count = 0;
    for s in 0..(1u64 << n) {
        let s = s as u32;
        if s & looped != 0 {
            continue;
        }
        let independent = (0..n).all(|v| s >> v & 1 == 0 || adj[v] & s == 0);
        if !independent {
            continue;
        }
        let maximal = (0..n).all(|v| free >> v & 1 == 0 || s >> v & 1 == 1 || adj[v] & s != 0);
        if maximal {
            count += 1;
        }
    }
    Ok(count)
}

/// Names accepted by [`fixture`].
pub const FIXTURES: [&str; 14] = [
    "empty",
    "isolated",
    "matching-edge",
    "triangle",
    "C4",
    "C6",
    "K2□K3",
    "cube",
    "looped-triangle",
    "triangle+2-loops",
    "K2□K3+1-loop",
    "3-path+3-loops",
    "Z3²-network",
    "looped-vertex",
];

/// Named small graphs; `K2xK3` and `Z3^2-network` are accepted as ASCII
/// spellings, and `matching:<t>` gives a perfect matching on `2t` vertices.
pub fn fixture(name: &str) -> Option<LoopGraph> {
    if let Some(t) = name.strip_prefix("matching:") {
        let t: usize = t.parse().ok()?;
        let e: Vec<_> = (0..t).map(|i| (2 * i, 2 * i + 1)).collect();
        return Some(LoopGraph::from_edges(2 * t, &e, &[]));
    }
    let canonical = name.replace("K2xK3", "K2□K3").replace("Z3^2", "Z3²");
    match canonical.as_str() {
        "empty" => Some(LoopGraph::new(0)),
        other => catalog_graph(other),
    }
}

fn exponent_value(base: u64, e: &BigRational) -> BoundValue {
    certified::pow(&certified::int(base as i64), e, DEFAULT_PRECISION)
}

/// `3^{n/3}`.
pub fn bound_moon_moser(n: u64) -> BoundValue {
    exponent_value(3, &BigRational::new((n as i64).into(), 3.into()))
}

/// `2^{n/2}`, the triangle-free bound.
pub fn bound_hujter_tuza(n: u64) -> BoundValue {
    exponent_value(2, &BigRational::new((n as i64).into(), 2.into()))
}

/// `sum_{0 <= i <= n/b} C(n, i) * 3^{(k/(k+1)) n/3 + 2n/(3b)}` with
/// `b = sqrt(min_degree)`, valid when `max_degree <= k * min_degree`.
pub fn bound_blst(n: u64, k: u64, min_degree: u64, max_degree: u64) -> Result<BoundValue> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if min_degree == 0 {
        return Err(Error::InvalidInput("minimum degree must be positive".into()));
    }
    if max_degree > k * min_degree || max_degree < min_degree {
        return Err(Error::InvalidInput(format!(
            "need min_degree <= max_degree <= k * min_degree (got {min_degree}, {max_degree}, k = {k})"
        )));
    }
    // i <= n / sqrt(d)  <=>  i^2 d <= n^2
    let n2 = (n as u128) * (n as u128);
    let mut imax = (n2 / min_degree as u128).sqrt();
    while (imax + 1) * (imax + 1) * (min_degree as u128) <= n2 {
        imax += 1;
    }
    let mut binom_sum = BigUint::zero();
    for i in 0..=imax.min(n as u128) as u64 {
        binom_sum += binomial(n, i);
    }
    let prec = DEFAULT_PRECISION;
    let d = certified::int(min_degree as i64);
    let b = certified::sqrt(&d, prec + 32);
    let lead = BigRational::new(((k * n) as i64).into(), ((3 * (k + 1)) as i64).into());
    // 2n / (3b)
    let tail = b.scale(&certified::int(3)).recip().scale(&certified::int(2 * n as i64));
    let e = Interval::point(lead).add(&tail);
    let p = certified::pow_interval(&certified::int(3), &e, prec);
    Ok(BoundValue::from_int(binom_sum).mul(&p))
}

/// `C * 3^{n/3 - k/(13 max_degree)}` for a graph with `n + k` edges, valid when
/// `C >= 3^{max_degree/13}`.
pub fn bound_ls(n: u64, k: i64, max_degree: u64, c: &BigRational) -> Result<BoundValue> {
    if max_degree == 0 {
        return Err(Error::InvalidInput("maximum degree must be positive".into()));
    }
    let floor = exponent_value(3, &BigRational::new((max_degree as i64).into(), 13.into()));
    if &floor.upper() > c {
        return Err(Error::InvalidInput(format!(
            "C must be at least 3^(max_degree/13) = {floor}"
        )));
    }
    let e = BigRational::new((n as i64).into(), 3.into()) - BigRational::new(k.into(), (13 * max_degree as i64).into());
    Ok(BoundValue::Exact(c.clone()).mul(&exponent_value(3, &e)))
}

/// `Some(true)` when `count <= bound` is certain, `Some(false)` when it
/// certainly fails.
pub fn within_bound(count: &BigUint, bound: &BoundValue) -> Option<bool> {
    match bound.cmp_integer(count)? {
        Ordering::Less => Some(false),
        _ => Some(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopgraph::EdgeKind;

    fn count(name: &str) -> u64 {
        let g = fixture(name).unwrap();
        let c = count_mis(&g).unwrap().count;
        let bf = count_mis_bruteforce(&g).unwrap();
        assert_eq!(c, BigUint::from(bf), "{name}");
        bf
    }

    #[test]
    fn known_counts() {
        assert_eq!(count("C4"), 2);
        assert_eq!(count("C6"), 5);
        assert_eq!(count("K2□K3"), 6);
        assert_eq!(count("cube"), 6);
        assert_eq!(count("looped-triangle"), 2);
        assert_eq!(count("K2□K3+1-loop"), 4);
        assert_eq!(count("empty"), 1);
        assert_eq!(count("3-path+3-loops"), 1);
        assert_eq!(count("triangle+2-loops"), 1);
        assert_eq!(count("Z3²-network"), 6);
        assert_eq!(count("matching:5"), 32);
    }

    #[test]
    fn reduce_loops_examples() {
        let p = fixture("3-path+3-loops").unwrap();
        assert_eq!(reduce_loops(&p).vertex_count(), 0);
        let t = fixture("triangle+2-loops").unwrap();
        let r = reduce_loops(&t);
        assert_eq!((r.vertex_count(), r.edge_count()), (1, 0));
        let c = fixture("C6").unwrap();
        assert_eq!(reduce_loops(&c), c);
    }

    #[test]
    fn components_multiply() {
        let parts = ["C6", "K2□K3+1-loop", "isolated", "looped-triangle"].map(|n| fixture(n).unwrap());
        let g = LoopGraph::disjoint_union(&parts);
        let m = count_mis(&g).unwrap();
        assert_eq!(m.count, BigUint::from(5u32 * 4 * 2));
        assert_eq!(m.count, BigUint::from(count_mis_bruteforce(&g).unwrap()));
        let labels: Vec<_> = m.components.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["C6", "K2□K3+1-loop", "isolated", "looped-triangle"]);
        let v = serde_json::to_value(&m).unwrap();
        assert_eq!(v["count"], "40");
        assert_eq!(v["components"][0], serde_json::json!({"label": "C6", "count": "5"}));
    }

    #[test]
    fn enumeration_is_canonical_and_complete() {
        let g = LoopGraph::disjoint_union(&[fixture("C4").unwrap(), fixture("triangle+2-loops").unwrap()]);
        let sets = enumerate_mis(&g, &Budget::default()).unwrap();
        assert_eq!(sets.len(), 2);
        let mut sorted = sets.clone();
        sorted.sort();
        assert_eq!(sets, sorted);
        for s in &sets {
            for a in s.iter() {
                assert!(!g.is_looped(a));
                for b in s.iter() {
                    assert!(a == b || g.edge(a, b).is_none());
                }
            }
        }
        assert_eq!(sets[0].to_vec(), vec![0, 2, 6]);
    }

    #[test]
    fn enumeration_budget() {
        let g = fixture("matching:12").unwrap();
        let err = enumerate_mis(&g, &Budget::new(100, 60)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn large_component_counts() {
        // C_n has Perrin(n) maximal independent sets
        let mut perrin = vec![3u64, 0, 2];
        for i in 3..=30 {
            perrin.push(perrin[i - 2] + perrin[i - 3]);
        }
        for n in [10, 25, 30] {
            let c = count_mis(&LoopGraph::cycle(n)).unwrap().count;
            assert_eq!(c, BigUint::from(perrin[n]), "C{n}");
        }
        // a 100-leaf star spans several bitset words: centre or all leaves
        let e: Vec<_> = (1..=100).map(|i| (0, i)).collect();
        let star = LoopGraph::from_edges(101, &e, &[]);
        assert_eq!(count_mis(&star).unwrap().count, BigUint::from(2u32));
        let mut star2 = star.clone();
        star2.add_edge(99, 100, EdgeKind::TYPE1);
        assert_eq!(count_mis(&star2).unwrap().count, BigUint::from(3u32));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_moon_moser(3).as_integer(), Some(BigUint::from(3u32)));
        assert_eq!(bound_hujter_tuza(2).as_integer(), Some(BigUint::from(2u32)));
        assert_eq!(within_bound(&BigUint::from(2u32), &bound_hujter_tuza(2)), Some(true));
        let c = certified::int(10);
        let v = bound_ls(9, 0, 4, &c).unwrap();
        assert_eq!(v.as_integer(), Some(BigUint::from(270u32)));
        assert!(bound_ls(9, 0, 40, &c).is_err());
        let b = bound_blst(12, 1, 4, 4).unwrap();
        // b = 2: sum_{i<=6} C(12,i) * 3^{2 + 4}
        let s: u64 = (0..=6)
            .map(|i| binomial(12, i).iter_u64_digits().next().unwrap_or(0))
            .sum();
        assert_eq!(b.as_integer(), Some(BigUint::from(s * 729)));
        assert!(bound_blst(12, 1, 4, 5).is_err());
        let odd = bound_blst(10, 2, 3, 5).unwrap();
        assert!(!odd.is_exact());
    }

    #[test]
    fn counts_respect_classical_bounds() {
        for name in FIXTURES {
            let g = fixture(name).unwrap();
            let red = reduce_loops(&g);
            let c = count_mis(&g).unwrap().count;
            let n = red.vertex_count() as u64;
            assert_eq!(within_bound(&c, &bound_moon_moser(n)), Some(true), "{name}");
        }
    }
}
