//! Lower-bound constructions: pairs `(B, S)` whose link graphs have many
//! maximal independent sets, and the arithmetic of the bounds they give.
//!
//! Every construction is checked by building the link graph, counting its
//! maximal independent sets exactly and comparing with the predicted value.
//! A maximal independent set `I` of `L_S[B]` (with `B`, `S` disjoint and
//! sum-free) makes `I ∪ S` sum-free, and distinct `I` extend to distinct
//! maximal sum-free sets, so every count is also a lower bound on `f_max`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::budget::Budget;
use crate::certified::{self, frac, int, BoundValue, DEFAULT_PRECISION};
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupSpec, GroupType};
use crate::loopgraph::{
    distinct_link_graph, gamma1, gamma2, gamma_prime, lift_tilde, link_graph, rtimes, summarize, ComponentSummary,
    LoopGraph,
};
use crate::mis::{count_mis, for_each_mis};
use crate::set::ElementSet;
use crate::sumfree::{
    count_fmax, count_fstar_max, enumerate_maximal, is_maximal, is_maximal_sumfree, is_sumfree, is_valid, SearchConfig,
    Variant,
};
use crate::util::{binomial, pow_u, serialize_decimal};

/// Largest order for which reports also carry the exhaustive reference count.
pub const REFERENCE_GUARD: usize = 32;

/// Largest lifted vertex set for which the product witness is built.
pub const WITNESS_VERTEX_GUARD: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Hyperplane coset and a nonzero singleton in `Z_2^k`.
    Z2Type3,
    /// Hyperplane coset and a singleton in `Z_3^k`.
    Z3Type3,
    /// The interval `[3k+1, 6k]` with `S = {k, -2k}` in `Z_m`, lifted to `Z_m x K`.
    CyclicInterval,
    /// Coset unions for type III groups of exponent 7, 13 or 19.
    Type3Coset,
    /// Distinct variant: coset unions and the `Z_2^k` bijection.
    DistinctCoset,
    /// Distinct variant for `Z_2^k x K` with `|K|` odd.
    DistinctZ2kOdd,
}

/// How a report's count relates to its prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    AtLeast,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionReport {
    pub family: Family,
    pub route: String,
    pub group: String,
    pub orders: Vec<usize>,
    pub b: Vec<usize>,
    pub s: Vec<usize>,
    pub link: ComponentSummary,
    #[serde(serialize_with = "serialize_decimal")]
    pub mis_exact: BigUint,
    pub predicted: String,
    pub relation: Relation,
    /// Whether the link graph has the shape the construction calls for.
    pub shape_ok: bool,
    /// Exhaustive `f_max` (or `f*_max`) for small groups, which must be at
    /// least `mis_exact`.
    #[serde(
        serialize_with = "crate::util::serialize_opt_decimal",
        skip_serializing_if = "Option::is_none"
    )]
    pub reference: Option<BigUint>,
    /// Validity and injectivity of the generated sets, when few enough.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generation: Option<GenerationCheck>,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip)]
    pub predicted_value: BoundValue,
}

/// Largest count for which reports replay every generated set.
pub const GENERATION_GUARD: u32 = 1 << 14;

fn relation_holds(rel: Relation, predicted: &BoundValue, count: &BigUint) -> bool {
    matches!(
        (rel, predicted.cmp_integer(count)),
        (Relation::Equal, Some(Ordering::Equal)) | (Relation::AtLeast, Some(Ordering::Less | Ordering::Equal))
    )
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    g: &GroupSpec,
    family: Family,
    route: String,
    b: &ElementSet,
    s: &ElementSet,
    graph: &LoopGraph,
    predicted: BoundValue,
    relation: Relation,
    shape_ok: bool,
    reference: Option<BigUint>,
    variant: Variant,
) -> Result<ConstructionReport> {
    let mis = count_mis(graph)?;
    let mut matches = shape_ok && relation_holds(relation, &predicted, &mis.count);
    if let Some(r) = &reference {
        matches &= *r >= mis.count;
    }
    let generation = if mis.count <= BigUint::from(GENERATION_GUARD) {
        let gc = check_generation(g, b, s, graph, variant, &Budget::default())?;
        matches &= gc.valid && gc.injective;
        Some(gc)
    } else {
        None
    };
    Ok(ConstructionReport {
        family,
        route,
        group: g.label(),
        orders: g.orders().to_vec(),
        b: b.to_vec(),
        s: s.to_vec(),
        link: summarize(graph),
        mis_exact: mis.count,
        predicted: predicted.to_display_string(),
        relation,
        shape_ok,
        reference,
        generation,
        matches,
        predicted_value: predicted,
    })
}

fn pow2_rational(e: BigRational) -> BoundValue {
    certified::pow(&int(2), &e, DEFAULT_PRECISION)
}

fn exact(v: BigUint) -> BoundValue {
    BoundValue::from_int(v)
}

/// Whether `x` can join the valid set `m` (assumed valid).
pub fn can_add(g: &GroupSpec, m: &ElementSet, x: usize, variant: Variant) -> bool {
    if m.contains(x) {
        return false;
    }
    match variant {
        Variant::SumFree => {
            if x == 0 || m.contains(g.add_idx(x, x)) {
                return false;
            }
            m.iter()
                .all(|y| !m.contains(g.sub_idx(x, y)) && !m.contains(g.add_idx(x, y)))
        }
        Variant::DistinctSumFree => m.iter().all(|y| {
            if y == x {
                return true;
            }
            // x + y = z, or y + z = x, with x, y, z distinct
            let z1 = g.add_idx(x, y);
            let z2 = g.sub_idx(x, y);
            let bad1 = m.contains(z1) && z1 != x && z1 != y;
            let bad2 = m.contains(z2) && z2 != x && z2 != y;
            let z3 = g.sub_idx(y, x);
            let bad3 = m.contains(z3) && z3 != x && z3 != y;
            !(bad1 || bad2 || bad3)
        }),
    }
}

/// Greedy completion of a valid set to a maximal one, adding elements in
/// increasing order.
pub fn extend_to_maximal(g: &GroupSpec, a: &ElementSet, variant: Variant) -> ElementSet {
    let mut m = a.clone();
    for x in 0..g.order() {
        if can_add(g, &m, x, variant) {
            m.insert(x);
        }
    }
    m
}

/// Result of checking the sets a pair generates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenerationCheck {
    pub sets: u64,
    /// Every `I ∪ S` is valid.
    pub valid: bool,
    /// Every completion `M` of `I ∪ S` satisfies `M ∩ B = I`, so distinct
    /// `I` give distinct maximal sets.
    pub injective: bool,
}

/// Checks that every maximal independent set `I` of the link graph on `b`
/// gives a valid `I ∪ s` whose maximal completions meet `b` exactly in `I`.
pub fn check_generation(
    g: &GroupSpec,
    b: &ElementSet,
    s: &ElementSet,
    graph: &LoopGraph,
    variant: Variant,
    budget: &Budget,
) -> Result<GenerationCheck> {
    let elems = graph
        .elements()
        .ok_or_else(|| Error::InvalidInput("graph is not built on group elements".into()))?
        .to_vec();
    let mut valid = true;
    let mut injective = true;
    let sets = for_each_mis(graph, budget, |verts| {
        let mut a = s.clone();
        let mut i = ElementSet::empty(g.order());
        for &v in verts {
            a.insert(elems[v]);
            i.insert(elems[v]);
        }
        if !is_valid(g, &a, variant) {
            valid = false;
            return Ok(());
        }
        let m = extend_to_maximal(g, &a, variant);
        if m.intersection(b) != i || !is_maximal(g, &m, variant) {
            injective = false;
        }
        Ok(())
    })?;
    Ok(GenerationCheck { sets, valid, injective })
}

/// A hyperplane coset `B` together with a singleton `{s}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Type3Pair {
    /// Index into `GroupSpec::hyperplanes()`.
    pub hyperplane: usize,
    /// Value of the hyperplane's functional on `B`.
    pub coset: usize,
    pub b: ElementSet,
    pub s: usize,
    /// `s` lies in the hyperplane itself (as opposed to `2g + H`).
    pub s_in_subgroup: bool,
}

impl Serialize for ElementSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

fn elementary(p: usize, k: usize, max_k: usize) -> Result<GroupSpec> {
    if k == 0 || k > max_k {
        return Err(Error::TooLarge {
            operation: "type-3 pair stream",
            n: p.saturating_pow(k as u32),
            guard: p.pow(max_k as u32),
        });
    }
    GroupSpec::elementary(p, k)
}

/// All pairs `(x + W, {s})` in `Z_2^k`: `W` a hyperplane, `s ∈ W \ {0}`.
/// There are `(n - 1)(n - 2) / 2` of them.
pub fn z2_type3_pairs(k: usize) -> Result<(GroupSpec, Vec<Type3Pair>)> {
    let g = elementary(2, k, 6)?;
    let mut out = Vec::new();
    for (hi, h) in g.hyperplanes()?.iter().enumerate() {
        for s in h.subgroup.iter().filter(|&s| s != 0) {
            out.push(Type3Pair {
                hyperplane: hi,
                coset: 1,
                b: h.cosets[0].clone(),
                s,
                s_in_subgroup: true,
            });
        }
    }
    Ok((g, out))
}

/// All pairs `(g + H, {s})` in `Z_3^k` with `s ∈ H \ {0}` or `s ∈ 2g + H`.
pub fn z3_type3_pairs(k: usize) -> Result<(GroupSpec, Vec<Type3Pair>)> {
    let g = elementary(3, k, 4)?;
    let mut out = Vec::new();
    for (hi, h) in g.hyperplanes()?.iter().enumerate() {
        for j in 1..3 {
            let b = &h.cosets[j - 1];
            let twice = &h.cosets[(2 * j) % 3 - 1];
            for s in h.subgroup.iter().filter(|&s| s != 0) {
                out.push(Type3Pair {
                    hyperplane: hi,
                    coset: j,
                    b: b.clone(),
                    s,
                    s_in_subgroup: true,
                });
            }
            for s in twice.iter() {
                out.push(Type3Pair {
                    hyperplane: hi,
                    coset: j,
                    b: b.clone(),
                    s,
                    s_in_subgroup: false,
                });
            }
        }
    }
    Ok((g, out))
}

pub fn pair_link_graph(g: &GroupSpec, pair: &Type3Pair) -> Result<LoopGraph> {
    link_graph(g, &g.set(&[pair.s])?, &pair.b)
}

/// Predicted count and shape for a type-3 pair: a perfect matching in
/// `Z_2^k` (`2^{n/4}`); triangles in `Z_3^k` for `s ∈ H` (`3^{n/9}`); one
/// looped vertex plus a matching for `s ∈ 2g + H` (`2^{(|B|-1)/2}`).
pub fn pair_prediction(g: &GroupSpec, pair: &Type3Pair) -> (BigUint, ComponentSummary) {
    let nb = pair.b.len();
    let entries = match (g.orders()[0], pair.s_in_subgroup) {
        (2, _) => vec![("matching-edge".to_string(), nb / 2)],
        (_, true) => vec![("triangle".to_string(), nb / 3)],
        (_, false) if nb == 1 => vec![("looped-vertex".to_string(), 1)],
        (_, false) => vec![
            ("looped-vertex".to_string(), 1),
            ("matching-edge".to_string(), (nb - 1) / 2),
        ],
    };
    let count = match (g.orders()[0], pair.s_in_subgroup) {
        (2, _) => pow_u(2, (nb / 2) as u64),
        (_, true) => pow_u(3, (nb / 3) as u64),
        (_, false) => pow_u(2, ((nb - 1) / 2) as u64),
    };
    (count, ComponentSummary { entries })
}

/// Per-pair check of count and component census.
#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub pairs: usize,
    pub mismatches: Vec<String>,
}

pub fn check_pairs(g: &GroupSpec, pairs: &[Type3Pair]) -> Result<PairCheck> {
    let mut mismatches = Vec::new();
    for p in pairs {
        let lg = pair_link_graph(g, p)?;
        let (want, shape) = pair_prediction(g, p);
        let got = count_mis(&lg)?.count;
        let census = summarize(&lg);
        if got != want || census != shape {
            mismatches.push(format!(
                "B = {} s = {}: mis {got} (want {want}), census {census} (want {shape})",
                p.b, p.s
            ));
        }
    }
    Ok(PairCheck {
        pairs: pairs.len(),
        mismatches,
    })
}

/// Maximal sum-free sets `I ∪ {s}` with `I` a maximal independent set of the
/// pair's link graph, sorted.
pub fn generated_sets(g: &GroupSpec, pair: &Type3Pair, budget: &Budget) -> Result<Vec<ElementSet>> {
    let lg = pair_link_graph(g, pair)?;
    let elems = lg.elements().unwrap_or(&[]).to_vec();
    let mut out = Vec::new();
    for_each_mis(&lg, budget, |verts| {
        let mut a = ElementSet::empty(g.order());
        a.insert(pair.s);
        for &v in verts {
            a.insert(elems[v]);
        }
        if is_maximal_sumfree(g, &a) {
            out.push(a);
        }
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratedCount {
    pub group: String,
    pub pairs: usize,
    #[serde(serialize_with = "serialize_decimal")]
    pub with_multiplicity: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub distinct: BigUint,
    /// Largest number of sets generated by two distinct pairs at once.
    pub max_shared: usize,
}

pub fn generated_count(g: &GroupSpec, pairs: &[Type3Pair]) -> Result<GeneratedCount> {
    let budget = Budget::default();
    let mut all = BTreeSet::new();
    let mut total = 0usize;
    let mut per_pair = Vec::with_capacity(pairs.len());
    for p in pairs {
        let sets = generated_sets(g, p, &budget)?;
        total += sets.len();
        all.extend(sets.iter().cloned());
        per_pair.push(sets);
    }
    Ok(GeneratedCount {
        group: g.label(),
        pairs: pairs.len(),
        with_multiplicity: BigUint::from(total),
        distinct: BigUint::from(all.len()),
        max_shared: max_shared(&per_pair),
    })
}

/// Largest intersection between the sorted generated lists of two pairs.
pub fn max_shared(per_pair: &[Vec<ElementSet>]) -> usize {
    let mut best = 0;
    for i in 0..per_pair.len() {
        for j in i + 1..per_pair.len() {
            let (a, b) = (&per_pair[i], &per_pair[j]);
            let (mut x, mut y, mut c) = (0, 0, 0);
            while x < a.len() && y < b.len() {
                match a[x].cmp(&b[y]) {
                    Ordering::Less => x += 1,
                    Ordering::Greater => y += 1,
                    Ordering::Equal => {
                        c += 1;
                        x += 1;
                        y += 1;
                    }
                }
            }
            best = best.max(c);
        }
    }
    best
}

/// Distinct maximal sum-free sets of `Z_2^k` generated by type-3 pairs.
pub fn z2_generated_count(k: usize) -> Result<GeneratedCount> {
    if k > 5 {
        return Err(Error::TooLarge {
            operation: "z2_generated_count",
            n: 1 << k,
            guard: 32,
        });
    }
    let (g, pairs) = z2_type3_pairs(k)?;
    generated_count(&g, &pairs)
}

/// Distinct maximal sum-free sets of `Z_3^k` generated by pairs with
/// `s ∈ H \ {0}`.
pub fn z3_generated_count(k: usize) -> Result<GeneratedCount> {
    if k > 3 {
        return Err(Error::TooLarge {
            operation: "z3_generated_count",
            n: 3usize.pow(k as u32),
            guard: 27,
        });
    }
    let (g, pairs) = z3_type3_pairs(k)?;
    let pairs: Vec<_> = pairs.into_iter().filter(|p| p.s_in_subgroup).collect();
    generated_count(&g, &pairs)
}

/// `C(n-1, 2) 2^{n/4}` for `Z_2^k`, `(n-3)(n-1)/3 * 3^{n/9}` for `Z_3^k`.
pub fn leading_term(g: &GroupSpec) -> Result<BoundValue> {
    let n = g.order() as i64;
    match g.elementary_prime() {
        Some(2) => {
            let c = BoundValue::from_int(binomial((n - 1) as u64, 2));
            Ok(c.mul(&certified::pow(&int(2), &frac(n, 4), DEFAULT_PRECISION)))
        }
        Some(3) => {
            let c = BoundValue::Exact(frac((n - 3) * (n - 1), 3));
            Ok(c.mul(&certified::pow(&int(3), &frac(n, 9), DEFAULT_PRECISION)))
        }
        _ => Err(Error::InvalidGroup(format!(
            "leading term is defined for Z2^k and Z3^k, got {g}"
        ))),
    }
}

/// Counts of `Γ`, `Γ′` and `Γ₁ ⋊ Γ₂` for one graph.
#[derive(Clone, Debug, Serialize)]
pub struct TripleCount {
    #[serde(serialize_with = "serialize_decimal")]
    pub gamma: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub gamma_prime: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub rtimes: BigUint,
}

/// The interval construction in `Z_m`.
#[derive(Clone, Debug, Serialize)]
pub struct CyclicReport {
    pub m: usize,
    pub k: usize,
    pub i: usize,
    pub case: String,
    pub b: Vec<usize>,
    pub s: Vec<usize>,
    pub gamma_census: ComponentSummary,
    pub gamma_prime_census: ComponentSummary,
    pub rtimes_census: ComponentSummary,
    pub counts: TripleCount,
    /// Closed forms, for the cases where they are stated.
    pub closed_form: Option<TripleCount>,
    pub closed_form_match: Option<bool>,
}

fn cyclic_case(k: usize, i: usize) -> &'static str {
    if i == 0 {
        if k.is_multiple_of(2) {
            "i=0,k-even"
        } else {
            "i=0,k-odd"
        }
    } else {
        match ((i - 1) % 2 == 1, (k + 1 - i) % 2 == 1) {
            (true, true) => "i-1-odd,k-i+1-odd",
            (true, false) => "i-1-odd,k-i+1-even",
            (false, true) => "i-1-even,k-i+1-odd",
            (false, false) => "i-1-even,k-i+1-even",
        }
    }
}

fn pow6(e: usize) -> BigUint {
    pow_u(6, e as u64)
}

fn cyclic_closed_form(k: usize, i: usize) -> Option<TripleCount> {
    let t = |a: BigUint, b: BigUint, c: BigUint| TripleCount {
        gamma: a,
        gamma_prime: b,
        rtimes: c,
    };
    match cyclic_case(k, i) {
        "i=0,k-even" => Some(t(pow6(k / 2 - 1) * 2u32, pow6(k / 2 - 1) * 4u32, pow6(k))),
        "i=0,k-odd" => Some(t(pow6((k - 1) / 2), pow6((k - 1) / 2) * 2u32, pow6(k))),
        "i-1-odd,k-i+1-odd" if k >= 4 => Some(t(pow6(k / 2 - 2) * 16u32, pow6(k / 2 - 1) * 4u32, pow6(k))),
        _ => None,
    }
}

/// `B = [3k+1, 6k]` and `S = {k, -2k}` in `Z_m` with `m = 9k + i`.
pub fn cyclic_pair(m: usize) -> Result<(GroupSpec, ElementSet, ElementSet)> {
    if m < 9 {
        return Err(Error::InvalidInput(format!(
            "interval construction needs m >= 9, got {m}"
        )));
    }
    let g = GroupSpec::cyclic(m)?;
    let k = m / 9;
    let b = ElementSet::from_indices(m, 3 * k + 1..=6 * k)?;
    let s = g.set(&[k, m - 2 * k])?;
    Ok((g, b, s))
}

pub fn cyclic_construction(m: usize) -> Result<CyclicReport> {
    let (g, b, s) = cyclic_pair(m)?;
    if !is_sumfree(&g, &b) {
        return Err(Error::Internal(format!("interval in Z{m} is not sum-free")));
    }
    let (k, i) = (m / 9, m % 9);
    let gamma = link_graph(&g, &s, &b)?;
    let gp = gamma_prime(&gamma);
    let rt = rtimes(&gamma1(&gamma), &gamma2(&gamma))?;
    let counts = TripleCount {
        gamma: count_mis(&gamma)?.count,
        gamma_prime: count_mis(&gp)?.count,
        rtimes: count_mis(&rt)?.count,
    };
    let closed_form = cyclic_closed_form(k, i);
    let closed_form_match = closed_form
        .as_ref()
        .map(|c| c.gamma == counts.gamma && c.gamma_prime == counts.gamma_prime && c.rtimes == counts.rtimes);
    Ok(CyclicReport {
        m,
        k,
        i,
        case: cyclic_case(k, i).to_string(),
        b: b.to_vec(),
        s: s.to_vec(),
        gamma_census: summarize(&gamma),
        gamma_prime_census: summarize(&gp),
        rtimes_census: summarize(&rt),
        counts,
        closed_form,
        closed_form_match,
    })
}

/// `(2/3)^{1 + n/m} * 6^{(1/18 - 4/(9m)) n}` for `m | n`.
pub fn product_bound_value(m: usize, n: usize, prec: u32) -> BoundValue {
    let (m, n) = (m as i64, n as i64);
    let first = certified::pow(&frac(2, 3), &int(1 + n / m), prec);
    let e = (frac(1, 18) - frac(4, 9 * m)) * int(n);
    first.mul(&certified::pow(&int(6), &e, prec))
}

/// `Some(true)` if `count >= value` is certain, widening the precision until
/// the comparison is decided.
pub fn certify_at_least(count: &BigUint, value: impl Fn(u32) -> BoundValue) -> Option<bool> {
    let mut prec = DEFAULT_PRECISION;
    while prec <= 4096 {
        match value(prec).cmp_integer(count) {
            Some(Ordering::Greater) => return Some(false),
            Some(_) => return Some(true),
            None => prec *= 2,
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductWitness {
    /// `mis` counted directly on the lifted graph.
    #[serde(serialize_with = "serialize_decimal")]
    pub mis_direct: BigUint,
    /// `mis(Γ) mis(Γ′)^{a-1} mis(Γ₁⋊Γ₂)^{(|K|-a)/2}`.
    #[serde(serialize_with = "serialize_decimal")]
    pub mis_product: BigUint,
    pub involutions: usize,
    pub census: ComponentSummary,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductBound {
    pub m: usize,
    pub group: String,
    pub n: usize,
    /// Decimal rendering of the certified enclosure of the bound.
    pub bound: String,
    pub witness: Option<ProductWitness>,
    /// Set when the lifted graph exceeded the witness guard.
    pub witness_omitted: bool,
    /// `mis(Γ̃) >= bound`, certified.
    pub holds: Option<bool>,
    #[serde(skip)]
    pub bound_value: BoundValue,
}

/// The bound for `Z_m x K` (or `Z_m` alone) with the lifted interval
/// construction as witness.
pub fn product_lower_bound(m: usize, k: Option<&GroupSpec>) -> Result<ProductBound> {
    let (h, b, s) = cyclic_pair(m)?;
    let kn = k.map_or(1, |k| k.order());
    let n = m * kn;
    let bound_value = product_bound_value(m, n, DEFAULT_PRECISION);
    let group = match k {
        Some(k) => h.product(k)?.label(),
        None => h.label(),
    };
    let mut out = ProductBound {
        m,
        group,
        n,
        bound: bound_value.to_display_string(),
        witness: None,
        witness_omitted: false,
        holds: None,
        bound_value,
    };
    if b.len() * kn > WITNESS_VERTEX_GUARD {
        out.witness_omitted = true;
        return Ok(out);
    }
    let witness = match k {
        None => {
            let lg = link_graph(&h, &s, &b)?;
            let c = count_mis(&lg)?.count;
            ProductWitness {
                mis_direct: c.clone(),
                mis_product: c,
                involutions: 1,
                census: summarize(&lg),
            }
        }
        Some(k) => {
            let lift = lift_tilde(&h, k, &b, &s)?;
            let direct = count_mis(&lift.graph)?.count;
            let base = count_mis(&lift.gamma)?.count;
            let prime = count_mis(&lift.gamma_prime)?.count;
            let rt = count_mis(&lift.rtimes)?.count;
            let product =
                base * num_traits::pow::pow(prime, lift.prime_copies) * num_traits::pow::pow(rt, lift.rtimes_copies);
            ProductWitness {
                mis_direct: direct,
                mis_product: product,
                involutions: lift.involutions,
                census: lift.summary,
            }
        }
    };
    out.holds = certify_at_least(&witness.mis_direct, |p| product_bound_value(m, n, p));
    out.witness = Some(witness);
    Ok(out)
}

/// Outcome of comparing the interval-construction bound with `2^{n/7}`.
#[derive(Clone, Debug, Serialize)]
pub struct Prop34Verdict {
    pub m: usize,
    pub n: usize,
    pub holds: bool,
    /// Natural log of bound / `2^{n/7}`, rounded for display.
    pub margin_ln: f64,
    /// `a` and `b` in `margin = a ln 2 + b ln 3`.
    pub ln2_coefficient: String,
    pub ln3_coefficient: String,
}

/// Decides `(2/3)^{1+n/m} 6^{(1/18 - 4/(9m)) n} >= 2^{n/7}` exactly.
///
/// The log of the ratio is `a ln 2 + b ln 3` with rational `a`, `b`; its sign
/// is settled by interval evaluation (it is zero only if `a = b = 0`).
pub fn verify_prop34(m: usize, n: usize) -> Result<Prop34Verdict> {
    if m < 9 || n < m || !n.is_multiple_of(m) {
        return Err(Error::InvalidInput(format!(
            "need n >= m >= 9 with m | n, got m = {m}, n = {n}"
        )));
    }
    let (mi, ni) = (m as i64, n as i64);
    let lead = int(1) + frac(ni, mi);
    let c = (frac(1, 18) - frac(4, 9 * mi)) * int(ni);
    let a = &lead + &c - frac(ni, 7);
    let b = -&lead + &c;
    let mut prec = DEFAULT_PRECISION;
    let (holds, margin) = loop {
        let v = certified::ln2(prec).scale(&a).add(&certified::ln3(prec).scale(&b));
        if a.is_zero() && b.is_zero() {
            break (true, 0.0);
        }
        match v.sign() {
            Some(Ordering::Less) => break (false, v.midpoint_f64()),
            Some(_) => break (true, v.midpoint_f64()),
            None if prec < 8192 => prec *= 2,
            None => {
                return Err(Error::Internal("sign of the log margin undecided".into()));
            }
        }
    };
    Ok(Prop34Verdict {
        m,
        n,
        holds,
        margin_ln: margin,
        ln2_coefficient: a.to_string(),
        ln3_coefficient: b.to_string(),
    })
}

fn reference_count(g: &GroupSpec, variant: Variant) -> Result<Option<BigUint>> {
    if g.order() > REFERENCE_GUARD {
        return Ok(None);
    }
    let r = match variant {
        Variant::SumFree => count_fmax(g)?,
        Variant::DistinctSumFree => count_fstar_max(g)?,
    };
    Ok(Some(r.value))
}

fn min_element(set: &ElementSet, skip_zero: bool) -> Option<usize> {
    set.iter().find(|&x| !(skip_zero && x == 0))
}

fn sumfree_residue_sets(m: usize) -> Vec<Vec<usize>> {
    let zm = GroupSpec::cyclic(m).expect("small cyclic group");
    let mut out = Vec::new();
    for mask in 1u64..(1 << (m - 1)) {
        let a: Vec<usize> = (1..m).filter(|r| mask >> (r - 1) & 1 == 1).collect();
        if is_sumfree(&zm, &zm.set(&a).expect("residues")) {
            out.push(a);
        }
    }
    out
}

/// Coset-union constructions for type III groups of exponent 7, 13 or 19.
///
/// For 13 and 19 the sets are fixed; for 7 every sum-free residue set `A`
/// of `Z_7` and every residue class for the singleton are tried and the best
/// is reported against `2^{μ/2 - 1}`.
pub fn type3_construction(g: &GroupSpec) -> Result<ConstructionReport> {
    if g.classify() != GroupType::TypeIII {
        return Err(Error::InvalidGroup(format!("{g} is not of type III")));
    }
    let m = g.exponent();
    let n = g.order() as i64;
    let chi = g
        .surjection_to_cyclic(m)
        .ok_or_else(|| Error::Internal(format!("no surjection {g} -> Z{m}")))?;
    let reference = reference_count(g, Variant::SumFree)?;
    let build = |residues: &[usize], c: usize| -> Result<Option<(ElementSet, ElementSet, LoopGraph)>> {
        let t = g.preimage(&chi, residues);
        let x = match min_element(&g.preimage(&chi, &[c]), true) {
            Some(x) => x,
            None => return Ok(None),
        };
        let s = g.set(&[x])?;
        if !is_sumfree(g, &t) || !t.is_disjoint(&s) {
            return Err(Error::Internal("coset union is not a disjoint sum-free pair".into()));
        }
        let lg = link_graph(g, &s, &t)?;
        Ok(Some((t, s, lg)))
    };
    match m {
        13 | 19 => {
            let (residues, c, predicted, loops): (&[usize], usize, BigRational, usize) = if m == 13 {
                (&[1, 4, 6, 9], 3, frac(2 * n, 13) - int(1), 1)
            } else {
                (&[1, 3, 12, 14, 16, 18], 6, frac(3 * n, 19) - int(2), 2)
            };
            let (t, s, lg) = build(residues, c)?.expect("nonzero residue class");
            // the looped vertices and a matching on everything else
            let looped: Vec<usize> = lg.loops().map(|(v, _)| v).collect();
            let degrees_ok = (0..lg.vertex_count()).all(|v| lg.adjacency()[v].len() == 1);
            let shape_ok = looped.len() == loops && degrees_ok;
            build_report(
                g,
                Family::Type3Coset,
                format!("exponent-{m}"),
                &t,
                &s,
                &lg,
                pow2_rational(predicted),
                Relation::Equal,
                shape_ok,
                reference,
                Variant::SumFree,
            )
        }
        7 => {
            let target = pow2_rational(frac(n, 7) - int(1));
            let preferred: Vec<(Vec<usize>, usize)> = vec![(vec![1, 6], 2), (vec![1, 6], 3)];
            let wider: Vec<(Vec<usize>, usize)> = sumfree_residue_sets(7)
                .into_iter()
                .flat_map(|a| {
                    let cs: Vec<usize> = (0..7).filter(|c| !a.contains(c)).collect();
                    cs.into_iter().map(move |c| (a.clone(), c))
                })
                .collect();
            let mut best: Option<(BigUint, Vec<usize>, usize, ElementSet, ElementSet, LoopGraph)> = None;
            for stage in [preferred, wider] {
                for (a, c) in stage {
                    let Some((t, s, lg)) = build(&a, c)? else { continue };
                    let count = count_mis(&lg)?.count;
                    if best.as_ref().is_none_or(|b| count > b.0) {
                        best = Some((count, a, c, t, s, lg));
                    }
                }
                if best
                    .as_ref()
                    .is_some_and(|b| relation_holds(Relation::AtLeast, &target, &b.0))
                {
                    break;
                }
            }
            let (_, a, c, t, s, lg) = best.ok_or_else(|| Error::Internal("no candidate pair".into()))?;
            let route = format!("exponent-7: T = preimage of {a:?}, x in preimage of {c}");
            build_report(
                g,
                Family::Type3Coset,
                route,
                &t,
                &s,
                &lg,
                target,
                Relation::AtLeast,
                true,
                reference,
                Variant::SumFree,
            )
        }
        _ => Err(Error::InvalidGroup(format!(
            "coset constructions need exponent 7, 13 or 19, got {m}"
        ))),
    }
}

fn is_perfect_matching(lg: &LoopGraph) -> bool {
    lg.loop_count() == 0 && lg.adjacency().iter().all(|a| a.len() == 1)
}

/// Matching plus exactly `isolated` isolated vertices, no loops.
fn is_matching_with_isolated(lg: &LoopGraph, isolated: usize) -> bool {
    let adj = lg.adjacency();
    lg.loop_count() == 0 && adj.iter().all(|a| a.len() <= 1) && adj.iter().filter(|a| a.is_empty()).count() == isolated
}

fn is_elementary_two(g: &GroupSpec) -> bool {
    g.elementary_prime() == Some(2)
}

/// Whether `g` is `Z_2^k x K` with `k >= 1` and `|K| >= 3` odd.
pub fn is_z2k_times_odd(g: &GroupSpec) -> bool {
    let e = g.exponent();
    g.order().is_multiple_of(2) && !e.is_multiple_of(4) && e > 2
}

/// Distinct-variant constructions for every group that is not
/// `Z_2^k x K` with `|K| >= 3` odd.
pub fn distinct_construction_63(g: &GroupSpec) -> Result<ConstructionReport> {
    let n = g.order() as i64;
    let reference = reference_count(g, Variant::DistinctSumFree)?;
    let zero = g.set(&[0])?;
    let matching = |route: &str, d: usize, residues: Vec<usize>, mu: i64| -> Result<ConstructionReport> {
        let chi = g
            .surjection_to_cyclic(d)
            .ok_or_else(|| Error::Internal(format!("no surjection {g} -> Z{d}")))?;
        let t = g.preimage(&chi, &residues);
        let lg = distinct_link_graph(g, &zero, &t)?;
        let shape_ok = is_perfect_matching(&lg) && t.len() as i64 == mu && is_sumfree(g, &t);
        build_report(
            g,
            Family::DistinctCoset,
            route.into(),
            &t,
            &zero,
            &lg,
            pow2_rational(frac(mu, 2)),
            Relation::Equal,
            shape_ok,
            reference.clone(),
            Variant::DistinctSumFree,
        )
    };
    if g.order() % 2 == 1 {
        let mu = g.mu_formula()? as i64;
        return match g.classify() {
            GroupType::TypeI(p) => {
                let p = p as usize;
                matching("type-i", p, (1..p).filter(|r| r % 3 == 1).collect(), mu)
            }
            GroupType::TypeIII => {
                let m = g.exponent();
                matching("type-iii", m, (2..m).step_by(3).collect(), mu)
            }
            GroupType::TypeII => {
                let chi = g
                    .surjection_to_cyclic(3)
                    .ok_or_else(|| Error::Internal(format!("no surjection {g} -> Z3")))?;
                let t = g.preimage(&chi, &[1]);
                let x = min_element(&g.preimage(&chi, &[2]), false).expect("nonempty coset");
                let s = g.set(&[x])?;
                let lg = distinct_link_graph(g, &s, &t)?;
                let shape_ok = is_matching_with_isolated(&lg, 1) && t.len() as i64 == mu;
                build_report(
                    g,
                    Family::DistinctCoset,
                    "type-ii".into(),
                    &t,
                    &s,
                    &lg,
                    pow2_rational(frac(mu - 1, 2)),
                    Relation::Equal,
                    shape_ok,
                    reference,
                    Variant::DistinctSumFree,
                )
            }
        };
    }
    if g.exponent().is_multiple_of(4) {
        return matching("exponent-divisible-by-4", 4, vec![1, 3], n / 2);
    }
    if is_elementary_two(g) {
        return elementary_two_bijection(g);
    }
    Err(Error::InvalidGroup(format!(
        "{g} has the form Z2^k x K with |K| odd; use the Z2^k x K construction"
    )))
}

/// `A -> A ∪ {0}` between maximal sum-free and maximal distinct sum-free
/// sets of `Z_2^k`, checked by enumerating both sides.
fn elementary_two_bijection(g: &GroupSpec) -> Result<ConstructionReport> {
    let cfg = SearchConfig::default();
    let plain = enumerate_maximal(g, Variant::SumFree, &cfg)?;
    let distinct = enumerate_maximal(g, Variant::DistinctSumFree, &cfg)?;
    let mut mapped: Vec<ElementSet> = plain
        .iter()
        .map(|a| {
            let mut b = a.clone();
            b.insert(0);
            b
        })
        .collect();
    mapped.sort();
    let mut d_sorted = distinct.clone();
    d_sorted.sort();
    let shape_ok = mapped == d_sorted;
    let fmax = BigUint::from(plain.len());
    let fstar = BigUint::from(distinct.len());
    let matches = shape_ok && fmax == fstar;
    let mu = g.order() as i64 / 2;
    // the set count is compared to f_max, and f_max to 2^{μ/2}
    let floor_ok = relation_holds(Relation::AtLeast, &pow2_rational(frac(mu, 2)), &fmax);
    Ok(ConstructionReport {
        family: Family::DistinctCoset,
        route: "elementary-2-bijection".into(),
        group: g.label(),
        orders: g.orders().to_vec(),
        b: Vec::new(),
        s: vec![0],
        link: ComponentSummary::default(),
        mis_exact: fstar.clone(),
        predicted: fmax.to_string(),
        relation: Relation::Equal,
        shape_ok,
        reference: Some(fstar),
        generation: None,
        matches: matches && floor_ok,
        predicted_value: exact(fmax),
    })
}

/// Odd-residue construction for `Z_2^k x K` with `|K| >= 3` odd: count
/// `2^{n/4 - a/2}` with `a = 2^{k-1}`.
pub fn distinct_construction_64(g: &GroupSpec) -> Result<ConstructionReport> {
    if !is_z2k_times_odd(g) {
        return Err(Error::InvalidGroup(format!(
            "{g} is not of the form Z2^k x K with |K| >= 3 odd"
        )));
    }
    let e = g.exponent();
    let q = (3..=e)
        .step_by(2)
        .find(|&p| e.is_multiple_of(p) && is_prime(p))
        .expect("odd prime divisor");
    let m = 2 * q;
    let chi = g
        .surjection_to_cyclic(m)
        .ok_or_else(|| Error::Internal(format!("no surjection {g} -> Z{m}")))?;
    let t = g.preimage(&chi, &(1..m).step_by(2).collect::<Vec<_>>());
    let zero = g.set(&[0])?;
    let lg = distinct_link_graph(g, &zero, &t)?;
    let a = g.involution_count() / 2;
    let n = g.order() as i64;
    let shape_ok = is_matching_with_isolated(&lg, a) && is_sumfree(g, &t);
    let predicted = pow2_rational(frac(n, 4) - frac(a as i64, 2));
    build_report(
        g,
        Family::DistinctZ2kOdd,
        format!("odd-residues-mod-{m}"),
        &t,
        &zero,
        &lg,
        predicted,
        Relation::Equal,
        shape_ok,
        reference_count(g, Variant::DistinctSumFree)?,
        Variant::DistinctSumFree,
    )
}

/// Dispatches to the distinct-variant construction that fits `g`.
pub fn distinct_construction(g: &GroupSpec) -> Result<ConstructionReport> {
    if is_z2k_times_odd(g) {
        distinct_construction_64(g)
    } else {
        distinct_construction_63(g)
    }
}

/// `2^{e}` for rational `e`, exposed for callers comparing against counts.
pub fn power_of_two(e: BigRational) -> BoundValue {
    pow2_rational(e)
}

/// Exact value of a bound when it is an integer.
pub fn as_exact_integer(v: &BoundValue) -> Option<BigInt> {
    match v {
        BoundValue::Exact(r) if r.is_integer() => Some(r.to_integer()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn z(m: usize) -> GroupSpec {
        GroupSpec::cyclic(m).unwrap()
    }

    #[test]
    fn z2_pair_stream() {
        let (g, pairs) = z2_type3_pairs(3).unwrap();
        assert_eq!(pairs.len(), 21);
        let check = check_pairs(&g, &pairs).unwrap();
        assert!(check.mismatches.is_empty(), "{:?}", check.mismatches);
        let (_, pairs4) = z2_type3_pairs(4).unwrap();
        assert_eq!(pairs4.len(), 15 * 14 / 2);
    }

    #[test]
    fn z3_pair_stream() {
        let (g, pairs) = z3_type3_pairs(2).unwrap();
        // 4 hyperplanes x 2 cosets x (2 + 3) singletons
        assert_eq!(pairs.len(), 40);
        let check = check_pairs(&g, &pairs).unwrap();
        assert!(check.mismatches.is_empty(), "{:?}", check.mismatches);
        let p = pairs.iter().find(|p| p.s_in_subgroup).unwrap();
        assert_eq!(
            count_mis(&pair_link_graph(&g, p).unwrap()).unwrap().count,
            BigUint::from(3u32)
        );
        let p = pairs.iter().find(|p| !p.s_in_subgroup).unwrap();
        assert_eq!(
            count_mis(&pair_link_graph(&g, p).unwrap()).unwrap().count,
            BigUint::from(2u32)
        );
    }

    #[test]
    fn generated_counts_are_bounded_by_fmax() {
        let gc = z2_generated_count(3).unwrap();
        let fmax = count_fmax(&GroupSpec::elementary(2, 3).unwrap()).unwrap().value;
        assert!(gc.distinct <= fmax);
        assert!(gc.with_multiplicity <= BigUint::from(84u32));
        assert!(gc.max_shared <= 2);
    }

    #[test]
    fn leading_terms() {
        let v = |g: GroupSpec| leading_term(&g).unwrap().as_integer().unwrap();
        assert_eq!(v(GroupSpec::elementary(2, 4).unwrap()), BigUint::from(1680u32));
        assert_eq!(v(GroupSpec::elementary(3, 2).unwrap()), BigUint::from(48u32));
        assert_eq!(v(GroupSpec::elementary(2, 2).unwrap()), BigUint::from(6u32));
        assert!(leading_term(&z(5)).is_err());
    }

    #[test]
    fn cyclic_m9_and_m18() {
        let r = cyclic_construction(9).unwrap();
        assert_eq!(r.case, "i=0,k-odd");
        assert_eq!(r.closed_form_match, Some(true));
        assert_eq!(
            (
                r.counts.gamma.clone(),
                r.counts.gamma_prime.clone(),
                r.counts.rtimes.clone()
            ),
            (1u32.into(), 2u32.into(), 6u32.into())
        );
        let r = cyclic_construction(18).unwrap();
        assert_eq!(r.counts.gamma, BigUint::from(2u32));
        assert_eq!(r.closed_form_match, Some(true));
        assert!(cyclic_construction(8).is_err());
    }

    #[test]
    fn product_bounds() {
        let p = product_lower_bound(9, Some(&z(2))).unwrap();
        let w = p.witness.as_ref().unwrap();
        assert_eq!(w.mis_direct, BigUint::from(2u32));
        assert_eq!(w.mis_direct, w.mis_product);
        assert_eq!(p.holds, Some(true));
        let p = product_lower_bound(9, None).unwrap();
        assert_eq!(p.witness.unwrap().mis_direct, BigUint::one());
    }

    #[test]
    fn prop34_examples() {
        assert!(verify_prop34(3084, 3084).unwrap().holds);
        assert!(verify_prop34(3084, 30840).unwrap().holds);
        assert!(!verify_prop34(9, 9).unwrap().holds);
        assert!(verify_prop34(9, 10).is_err());
    }

    #[test]
    fn type3_cosets() {
        for m in [13, 19] {
            let r = type3_construction(&z(m)).unwrap();
            assert_eq!(r.mis_exact, BigUint::from(2u32), "Z{m}");
            assert!(r.matches, "Z{m}: {r:?}");
        }
        let r = type3_construction(&z(7)).unwrap();
        assert!(r.matches);
        assert!(type3_construction(&z(9)).is_err());
    }

    #[test]
    fn distinct_routes() {
        let r = distinct_construction(&z(5)).unwrap();
        assert_eq!((r.route.as_str(), r.b.clone()), ("type-i", vec![1, 4]));
        assert_eq!(r.mis_exact, BigUint::from(2u32));
        assert!(r.matches);
        let r = distinct_construction(&z(6)).unwrap();
        assert_eq!(r.family, Family::DistinctZ2kOdd);
        assert_eq!(r.b, vec![1, 3, 5]);
        assert_eq!(r.mis_exact, BigUint::from(2u32));
        assert!(r.matches);
        for m in [7, 8, 9] {
            assert!(distinct_construction(&z(m)).unwrap().matches, "Z{m}");
        }
        let r = distinct_construction(&GroupSpec::elementary(2, 3).unwrap()).unwrap();
        assert_eq!(r.route, "elementary-2-bijection");
        assert!(r.matches);
        assert!(distinct_construction_63(&z(6)).is_err());
    }

    #[test]
    fn greedy_extension_is_maximal() {
        let g = z(10);
        let a = g.set(&[1]).unwrap();
        for v in [Variant::SumFree, Variant::DistinctSumFree] {
            let m = extend_to_maximal(&g, &a, v);
            assert!(is_maximal(&g, &m, v));
            assert!(a.is_subset(&m));
        }
    }

    #[test]
    fn report_json_shape() {
        let r = distinct_construction(&z(5)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["family"], "distinct-coset");
        assert_eq!(v["mis_exact"], "2");
        assert_eq!(v["match"], true);
        assert_eq!(v["b"], serde_json::json!([1, 4]));
    }
}
