//! Sum-free and distinct sum-free predicates, and exact enumeration.
//!
//! A set `A` is sum-free when there are no `a, b in A` (possibly equal) with
//! `a + b in A`; in particular sum-free sets never contain zero. A *distinct*
//! Schur triple is a 3-element subset `{x, y, z}` with `x + y = z`; distinct
//! sum-free sets avoid those and may contain zero.
//!
//! The enumerator is a depth-first search over element indices in ascending
//! order, trying "include" before "exclude". It only ever visits sum-free
//! partial sets, and for each partial set it maintains the mask of elements
//! whose addition would create a (distinct) Schur triple, so maximality of a
//! leaf is a single mask comparison.

use std::time::Duration;

use num_bigint::BigUint;
use serde::Serialize;

use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::set::ElementSet;
use crate::util::{serialize_decimal, serialize_duration_ms};

/// Default largest group order accepted by the exhaustive enumerators.
pub const DEFAULT_ENUMERATION_GUARD: usize = 64;

/// Which family of sets a search walks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    SumFree,
    DistinctSumFree,
}

/// Limits for exhaustive searches.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub budget: Budget,
    pub max_order: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: Budget::default(),
            max_order: DEFAULT_ENUMERATION_GUARD,
        }
    }
}

pub fn is_sumfree(g: &GroupSpec, a: &ElementSet) -> bool {
    assert_eq!(a.universe(), g.order(), "set does not belong to {g}");
    let members = a.to_vec();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i..] {
            if a.contains(g.add_idx(x, y)) {
                return false;
            }
        }
    }
    true
}

pub fn is_distinct_sumfree(g: &GroupSpec, a: &ElementSet) -> bool {
    assert_eq!(a.universe(), g.order(), "set does not belong to {g}");
    let members = a.to_vec();
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let z = g.add_idx(x, y);
            if z != x && z != y && a.contains(z) {
                return false;
            }
        }
    }
    true
}

/// Elements outside `a` whose addition would create a Schur triple.
pub fn blocked_elements(g: &GroupSpec, a: &ElementSet, variant: Variant) -> ElementSet {
    let mut out = ElementSet::empty(g.order());
    let members = a.to_vec();
    match variant {
        Variant::SumFree => {
            out.insert(0);
            for &x in &members {
                for &y in &members {
                    out.insert(g.add_idx(x, y));
                    out.insert(g.sub_idx(x, y));
                }
            }
            for z in 0..g.order() {
                if a.contains(g.add_idx(z, z)) {
                    out.insert(z);
                }
            }
        }
        Variant::DistinctSumFree => {
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    for z in [g.add_idx(x, y), g.sub_idx(x, y), g.sub_idx(y, x)] {
                        if z != x && z != y {
                            out.insert(z);
                        }
                    }
                }
            }
        }
    }
    out.difference(a)
}

pub fn is_maximal_sumfree(g: &GroupSpec, a: &ElementSet) -> bool {
    is_sumfree(g, a) && blocked_elements(g, a, Variant::SumFree).union(a).len() == g.order()
}

pub fn is_maximal_distinct_sumfree(g: &GroupSpec, a: &ElementSet) -> bool {
    is_distinct_sumfree(g, a) && blocked_elements(g, a, Variant::DistinctSumFree).union(a).len() == g.order()
}

pub fn is_valid(g: &GroupSpec, a: &ElementSet, variant: Variant) -> bool {
    match variant {
        Variant::SumFree => is_sumfree(g, a),
        Variant::DistinctSumFree => is_distinct_sumfree(g, a),
    }
}

pub fn is_maximal(g: &GroupSpec, a: &ElementSet, variant: Variant) -> bool {
    match variant {
        Variant::SumFree => is_maximal_sumfree(g, a),
        Variant::DistinctSumFree => is_maximal_distinct_sumfree(g, a),
    }
}

/// Restrictions on the sets visited by [`Enumerator::search`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SearchOptions {
    /// Elements every visited set must contain.
    pub required: u64,
    /// Elements no visited set may contain.
    pub banned: u64,
    /// Skip sets with fewer elements than this.
    pub min_size: u32,
}

/// Precomputed arithmetic for a group of order at most 64.
pub struct Enumerator {
    n: usize,
    variant: Variant,
    add: Vec<u8>,
    neg: Vec<u8>,
    halves: Vec<u64>,
    full: u64,
}

impl Enumerator {
    pub fn new(g: &GroupSpec, variant: Variant, max_order: usize) -> Result<Self> {
        let n = g.order();
        let guard = max_order.min(64);
        if n > guard {
            return Err(Error::TooLarge {
                operation: "exhaustive enumeration",
                n,
                guard,
            });
        }
        let table = g.cayley_table();
        let add: Vec<u8> = table.iter().map(|&v| v as u8).collect();
        let neg: Vec<u8> = (0..n).map(|x| g.neg_idx(x) as u8).collect();
        let mut halves = vec![0u64; n];
        for z in 0..n {
            halves[table[z * n + z]] |= 1 << z;
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(Enumerator {
            n,
            variant,
            add,
            neg,
            halves,
            full,
        })
    }

    #[inline]
    fn sum(&self, x: usize, y: usize) -> usize {
        self.add[x * self.n + y] as usize
    }

    #[inline]
    fn diff(&self, x: usize, y: usize) -> usize {
        self.sum(x, self.neg[y] as usize)
    }

    /// Blocked mask after adding `x` to the set `a` (which must not contain `x`).
    #[inline]
    fn extend_blocked(&self, a: u64, blocked: u64, x: usize) -> u64 {
        let mut out = blocked;
        match self.variant {
            Variant::SumFree => {
                out |= 1 << self.sum(x, x);
                out |= 1; // zero
                out |= self.halves[x];
                let mut rest = a;
                while rest != 0 {
                    let y = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    out |= 1 << self.sum(x, y);
                    out |= 1 << self.diff(x, y);
                    out |= 1 << self.diff(y, x);
                }
            }
            Variant::DistinctSumFree => {
                let mut rest = a;
                while rest != 0 {
                    let y = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    for z in [self.sum(x, y), self.diff(x, y), self.diff(y, x)] {
                        if z != x && z != y {
                            out |= 1 << z;
                        }
                    }
                }
            }
        }
        out
    }

    fn initial_blocked(&self) -> u64 {
        match self.variant {
            Variant::SumFree => 1,
            Variant::DistinctSumFree => 0,
        }
    }

    /// Mask of elements that `a` blocks (computed from scratch).
    pub fn blocked_of(&self, a: u64) -> u64 {
        let mut blocked = self.initial_blocked();
        let mut built = 0u64;
        let mut rest = a;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            blocked = self.extend_blocked(built, blocked, x);
            built |= 1 << x;
        }
        blocked & !a
    }

    pub fn is_maximal_mask(&self, a: u64) -> bool {
        (self.blocked_of(a) | a) == self.full
    }

    /// Visits every valid set satisfying `opts`, in member-first order.
    ///
    /// The visitor receives the set mask and whether it is maximal in the
    /// whole group. Returns the number of search nodes.
    pub fn search<F>(&self, budget: &Budget, opts: SearchOptions, mut visit: F) -> Result<u64>
    where
        F: FnMut(u64, bool),
    {
        let mut meter = budget.meter("exhaustive enumeration");
        let mut found = 0u64;
        // elements banned or excluded cannot be re-added
        self.dfs(0, 0, self.initial_blocked(), &opts, &mut meter, &mut found, &mut visit)?;
        Ok(meter.nodes)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs<F>(
        &self,
        i: usize,
        a: u64,
        blocked: u64,
        opts: &SearchOptions,
        meter: &mut Meter,
        found: &mut u64,
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(u64, bool),
    {
        meter.tick(*found)?;
        if opts.min_size > 0 {
            let later = if i >= self.n { 0 } else { self.full & !((1u64 << i) - 1) };
            let possible = (later & !blocked & !opts.banned).count_ones();
            if a.count_ones() + possible < opts.min_size {
                return Ok(());
            }
        }
        if i == self.n {
            *found += 1;
            visit(a, (a | blocked) == self.full);
            return Ok(());
        }
        let bit = 1u64 << i;
        let can_include = blocked & bit == 0 && opts.banned & bit == 0;
        if can_include {
            let nb = self.extend_blocked(a, blocked, i);
            // the new set must itself stay valid: x must not complete a triple
            // with elements already chosen, which `blocked` already guarantees
            self.dfs(i + 1, a | bit, nb, opts, meter, found, visit)?;
        }
        if opts.required & bit == 0 {
            self.dfs(i + 1, a, blocked, opts, meter, found, visit)?;
        }
        Ok(())
    }
}

/// Exact statistics of one exhaustive pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    /// Number of valid sets (including the empty set).
    pub total: BigUint,
    /// Number of maximal valid sets.
    pub maximal: BigUint,
    /// Largest valid set size.
    pub largest: usize,
    pub nodes: u64,
    pub elapsed: Duration,
}

pub fn census(g: &GroupSpec, variant: Variant, cfg: &SearchConfig) -> Result<Census> {
    let start = std::time::Instant::now();
    let e = Enumerator::new(g, variant, cfg.max_order)?;
    let mut total = 0u128;
    let mut maximal = 0u128;
    let mut largest = 0u32;
    let nodes = e.search(&cfg.budget, SearchOptions::default(), |a, is_max| {
        total += 1;
        if is_max {
            maximal += 1;
        }
        largest = largest.max(a.count_ones());
    })?;
    Ok(Census {
        total: BigUint::from(total),
        maximal: BigUint::from(maximal),
        largest: largest as usize,
        nodes,
        elapsed: start.elapsed(),
    })
}

/// Calls `visit` on every maximal set of the variant, in member-first order.
pub fn for_each_maximal<F>(g: &GroupSpec, variant: Variant, cfg: &SearchConfig, mut visit: F) -> Result<u64>
where
    F: FnMut(ElementSet),
{
    let e = Enumerator::new(g, variant, cfg.max_order)?;
    let n = g.order();
    e.search(&cfg.budget, SearchOptions::default(), |a, is_max| {
        if is_max {
            visit(ElementSet::from_mask(n, a));
        }
    })
}

pub fn enumerate_maximal(g: &GroupSpec, variant: Variant, cfg: &SearchConfig) -> Result<Vec<ElementSet>> {
    let mut out = Vec::new();
    for_each_maximal(g, variant, cfg, |s| out.push(s))?;
    Ok(out)
}

pub fn enumerate_maximal_sumfree(g: &GroupSpec) -> Result<Vec<ElementSet>> {
    enumerate_maximal(g, Variant::SumFree, &SearchConfig::default())
}

pub fn enumerate_maximal_distinct_sumfree(g: &GroupSpec) -> Result<Vec<ElementSet>> {
    enumerate_maximal(g, Variant::DistinctSumFree, &SearchConfig::default())
}

/// The quantity a [`CountReport`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    F,
    FMax,
    FStar,
    FStarMax,
    Mu,
    MuStar,
}

impl Quantity {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "f" => Quantity::F,
            "fmax" | "f_max" => Quantity::FMax,
            "fstar" | "f_star" => Quantity::FStar,
            "fstar_max" | "f_star_max" | "fstarmax" => Quantity::FStarMax,
            "mu" => Quantity::Mu,
            "mu_star" | "mustar" => Quantity::MuStar,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    Formula,
    ConstructionLowerBound,
}

/// An exact count for a group with its provenance.
#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub group: String,
    pub orders: Vec<usize>,
    pub quantity: Quantity,
    #[serde(serialize_with = "serialize_decimal")]
    pub value: BigUint,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(
        rename = "elapsed_ms",
        serialize_with = "serialize_duration_ms",
        skip_serializing_if = "Option::is_none"
    )]
    pub elapsed: Option<Duration>,
}

impl CountReport {
    fn exhaustive(g: &GroupSpec, quantity: Quantity, value: BigUint, elapsed: Duration) -> Self {
        CountReport {
            group: g.label(),
            orders: g.orders().to_vec(),
            quantity,
            value,
            method: Method::Exhaustive,
            formula: None,
            elapsed: Some(elapsed),
        }
    }

    /// Drops timing information, for byte-stable output.
    pub fn without_timing(mut self) -> Self {
        self.elapsed = None;
        self
    }
}

/// Exact count of any quantity by exhaustive search.
pub fn count(g: &GroupSpec, quantity: Quantity, cfg: &SearchConfig) -> Result<CountReport> {
    let variant = match quantity {
        Quantity::F | Quantity::FMax | Quantity::Mu => Variant::SumFree,
        _ => Variant::DistinctSumFree,
    };
    let c = census(g, variant, cfg)?;
    let value = match quantity {
        Quantity::F | Quantity::FStar => c.total,
        Quantity::FMax | Quantity::FStarMax => c.maximal,
        Quantity::Mu | Quantity::MuStar => BigUint::from(c.largest),
    };
    Ok(CountReport::exhaustive(g, quantity, value, c.elapsed))
}

pub fn count_fmax(g: &GroupSpec) -> Result<CountReport> {
    count(g, Quantity::FMax, &SearchConfig::default())
}

pub fn count_sumfree(g: &GroupSpec) -> Result<CountReport> {
    count(g, Quantity::F, &SearchConfig::default())
}

pub fn mu_bruteforce(g: &GroupSpec) -> Result<CountReport> {
    count(g, Quantity::Mu, &SearchConfig::default())
}

pub fn count_fstar_max(g: &GroupSpec) -> Result<CountReport> {
    count(g, Quantity::FStarMax, &SearchConfig::default())
}

pub fn mu_star_bruteforce(g: &GroupSpec) -> Result<CountReport> {
    count(g, Quantity::MuStar, &SearchConfig::default())
}

/// `mu(G)` from the classification, as a report.
pub fn mu_formula_report(g: &GroupSpec) -> Result<CountReport> {
    Ok(CountReport {
        group: g.label(),
        orders: g.orders().to_vec(),
        quantity: Quantity::Mu,
        value: BigUint::from(g.mu_formula()?),
        method: Method::Formula,
        formula: Some(format!("mu by classification {}", g.classify())),
        elapsed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(m: usize) -> GroupSpec {
        GroupSpec::cyclic(m).unwrap()
    }

    fn brute_maximal(g: &GroupSpec, variant: Variant) -> Vec<ElementSet> {
        let n = g.order();
        let mut out: Vec<ElementSet> = (0..1u64 << n)
            .map(|m| ElementSet::from_mask(n, m))
            .filter(|s| is_maximal(g, s, variant))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn predicate_examples() {
        let z6 = z(6);
        assert!(is_sumfree(&z6, &z6.set(&[1, 3, 5]).unwrap()));
        assert!(is_sumfree(&z6, &z6.set(&[]).unwrap()));
        assert!(!is_sumfree(&z6, &z6.set(&[0]).unwrap()));
        let z7 = z(7);
        assert!(is_maximal_sumfree(&z7, &z7.set(&[2, 3]).unwrap()));
        assert!(!is_maximal_sumfree(&z7, &z7.set(&[2]).unwrap()));
        assert!(!is_maximal_sumfree(&z7, &z7.set(&[0, 3]).unwrap()));
    }

    #[test]
    fn distinct_predicate_examples() {
        let z7 = z(7);
        let a = z7.set(&[2, 3, 4]).unwrap();
        assert!(is_distinct_sumfree(&z7, &a));
        assert!(!is_sumfree(&z7, &a));
        assert!(is_maximal_distinct_sumfree(&z7, &a));
        let b = z7.set(&[2, 3]).unwrap();
        assert!(is_distinct_sumfree(&z7, &b));
        assert!(!is_maximal_distinct_sumfree(&z7, &b));
        assert!(is_distinct_sumfree(&z7, &z7.set(&[0]).unwrap()));
    }

    #[test]
    fn z7_counts() {
        assert_eq!(count_fmax(&z(7)).unwrap().value, BigUint::from(9u32));
        assert_eq!(count_fstar_max(&z(7)).unwrap().value, BigUint::from(14u32));
        assert_eq!(mu_bruteforce(&z(7)).unwrap().value, BigUint::from(2u32));
    }

    #[test]
    fn z2_counts() {
        let sets = enumerate_maximal_sumfree(&z(2)).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].to_vec(), vec![1]);
        assert_eq!(count_sumfree(&z(2)).unwrap().value, BigUint::from(2u32));
    }

    #[test]
    fn z10_mu() {
        assert_eq!(mu_bruteforce(&z(10)).unwrap().value, BigUint::from(5u32));
    }

    #[test]
    fn enumeration_matches_full_scan() {
        for orders in [vec![8], vec![2, 2, 2], vec![2, 4], vec![9], vec![3, 3], vec![11]] {
            let g = GroupSpec::new(&orders).unwrap();
            for variant in [Variant::SumFree, Variant::DistinctSumFree] {
                let got = enumerate_maximal(&g, variant, &SearchConfig::default()).unwrap();
                assert_eq!(got, brute_maximal(&g, variant), "{g} {variant:?}");
            }
        }
    }

    #[test]
    fn output_is_sorted_and_unique() {
        let g = GroupSpec::new(&[2, 2, 3]).unwrap();
        let sets = enumerate_maximal_sumfree(&g).unwrap();
        assert!(sets.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn guard_and_budget() {
        let big = GroupSpec::cyclic(65).unwrap();
        assert!(matches!(count_fmax(&big), Err(Error::TooLarge { .. })));
        let cfg = SearchConfig {
            budget: Budget::new(10, 300),
            max_order: 64,
        };
        match count(&z(13), Quantity::FMax, &cfg) {
            Err(Error::BudgetExceeded { nodes, .. }) => assert_eq!(nodes, 11),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn search_options_filter() {
        let g = z(7);
        let e = Enumerator::new(&g, Variant::SumFree, 64).unwrap();
        let mut seen = Vec::new();
        e.search(
            &Budget::default(),
            SearchOptions {
                required: 1 << 3,
                banned: 1 << 2,
                min_size: 2,
            },
            |a, _| seen.push(a),
        )
        .unwrap();
        for a in &seen {
            assert!(a & (1 << 3) != 0 && a & (1 << 2) == 0 && a.count_ones() >= 2);
        }
        // {3,4} and {1,3}? 1+1=2 ok, 1+3=4, 3+3=6: {1,3} sum-free; {3,5}: 5+5=3 no
        let sets: Vec<Vec<usize>> = seen.iter().map(|&m| ElementSet::from_mask(7, m).to_vec()).collect();
        assert_eq!(sets, vec![vec![1, 3], vec![3, 4]]);
    }

    #[test]
    fn report_json_shape() {
        let r = count_fmax(&z(7)).unwrap().without_timing();
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(
            json,
            r#"{"group":"Z7","orders":[7],"quantity":"f_max","value":"9","method":"exhaustive"}"#
        );
    }
}
