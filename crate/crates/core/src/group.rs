//! Finite abelian groups given as products of cyclic groups.
//!
//! Elements are residue vectors encoded as little-endian mixed-radix integers:
//! the element `(c_0, .., c_{r-1})` of `Z_{m_0} x .. x Z_{m_{r-1}}` has index
//! `c_0 + m_0 * (c_1 + m_1 * (c_2 + ..))`. All set and graph code works on
//! these indices.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::ElementSet;

/// Default upper bound on the group order for arithmetic.
pub const DEFAULT_ORDER_GUARD: usize = 1 << 16;

/// A finite abelian group `Z_{m_0} x .. x Z_{m_{r-1}}`.
///
/// The list of orders is kept as given: `[2, 6]` and `[2, 2, 3]` are distinct
/// specs of isomorphic groups.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GroupSpec {
    orders: Vec<usize>,
    n: usize,
    exponent: usize,
}

impl TryFrom<Vec<usize>> for GroupSpec {
    type Error = Error;

    fn try_from(orders: Vec<usize>) -> Result<Self> {
        GroupSpec::new(&orders)
    }
}

impl From<GroupSpec> for Vec<usize> {
    fn from(g: GroupSpec) -> Self {
        g.orders
    }
}

/// An element together with its residue vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub coords: Vec<usize>,
    pub index: usize,
    order_of_group: usize,
}

/// Classification of a group by the primes dividing its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupType {
    /// `n` is divisible by a prime `p = 2 (mod 3)`; `p` is the smallest one.
    TypeI(u64),
    /// No prime `p = 2 (mod 3)` divides `n`, but `3 | n`.
    TypeII,
    /// Neither.
    TypeIII,
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::TypeI(p) => write!(f, "TypeI({p})"),
            GroupType::TypeII => write!(f, "TypeII"),
            GroupType::TypeIII => write!(f, "TypeIII"),
        }
    }
}

/// A surjective homomorphism `G -> Z_d`, `x -> sum_i coeffs[i] * x_i mod d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub modulus: usize,
    pub coeffs: Vec<usize>,
}

impl Character {
    pub fn apply(&self, g: &GroupSpec, x: usize) -> usize {
        g.decode(x).iter().zip(&self.coeffs).map(|(c, k)| c * k).sum::<usize>() % self.modulus
    }
}

impl GroupSpec {
    /// Builds a group with the default size guard.
    pub fn new(orders: &[usize]) -> Result<Self> {
        Self::with_guard(orders, DEFAULT_ORDER_GUARD)
    }

    pub fn with_guard(orders: &[usize], guard: usize) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("empty list of cyclic orders".into()));
        }
        if let Some(&bad) = orders.iter().find(|&&m| m < 2) {
            return Err(Error::InvalidGroup(format!("cyclic order {bad} is less than 2")));
        }
        let mut n: usize = 1;
        for &m in orders {
            n = match n.checked_mul(m) {
                Some(v) if v <= guard => v,
                _ => {
                    return Err(Error::TooLarge {
                        operation: "group construction",
                        n: n.saturating_mul(m),
                        guard,
                    })
                }
            };
        }
        let exponent = orders.iter().fold(1usize, |acc, &m| acc.lcm(&m));
        Ok(GroupSpec {
            orders: orders.to_vec(),
            n,
            exponent,
        })
    }

    /// The cyclic group `Z_m`.
    pub fn cyclic(m: usize) -> Result<Self> {
        Self::new(&[m])
    }

    /// `Z_p^k`.
    pub fn elementary(p: usize, k: usize) -> Result<Self> {
        Self::new(&vec![p; k])
    }

    /// Parses the `Z<m>` / `^<k>` / `*` grammar, e.g. `Z2^4`, `Z9*Z3`.
    pub fn parse(s: &str) -> Result<Self> {
        parse_orders(s).and_then(|o| Self::new(&o))
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `self x other`, with `self`'s coordinates first.
    pub fn product(&self, other: &GroupSpec) -> Result<GroupSpec> {
        let mut o = self.orders.clone();
        o.extend_from_slice(&other.orders);
        GroupSpec::new(&o)
    }

    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        debug_assert!(index < self.n);
        self.orders
            .iter()
            .map(|&m| {
                let c = index % m;
                index /= m;
                c
            })
            .collect()
    }

    pub fn encode(&self, coords: &[usize]) -> Result<usize> {
        if coords.len() != self.orders.len() {
            return Err(Error::GroupMismatch(format!(
                "expected {} coordinates, got {}",
                self.orders.len(),
                coords.len()
            )));
        }
        let mut index = 0;
        for (c, &m) in coords.iter().zip(&self.orders).rev() {
            if *c >= m {
                return Err(Error::GroupMismatch(format!("coordinate {c} out of range for Z{m}")));
            }
            index = index * m + c;
        }
        Ok(index)
    }

    pub fn element(&self, index: usize) -> Result<GroupElement> {
        if index >= self.n {
            return Err(Error::GroupMismatch(format!(
                "index {index} out of range for a group of order {}",
                self.n
            )));
        }
        Ok(GroupElement {
            coords: self.decode(index),
            index,
            order_of_group: self.n,
        })
    }

    pub fn element_from_coords(&self, coords: &[usize]) -> Result<GroupElement> {
        let index = self.encode(coords)?;
        self.element(index)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.orders.len()],
            index: 0,
            order_of_group: self.n,
        }
    }

    fn check_element(&self, a: &GroupElement) -> Result<()> {
        if a.order_of_group != self.n
            || a.coords.len() != self.orders.len()
            || a.coords.iter().zip(&self.orders).any(|(c, m)| c >= m)
        {
            return Err(Error::GroupMismatch(format!(
                "element {:?} is not an element of {self}",
                a.coords
            )));
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        self.element(self.add_idx(a.index, b.index))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check_element(a)?;
        self.element(self.neg_idx(a.index))
    }

    /// Index-level addition.
    pub fn add_idx(&self, mut a: usize, mut b: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for &m in &self.orders {
            let c = (a % m + b % m) % m;
            a /= m;
            b /= m;
            out += c * place;
            place *= m;
        }
        out
    }

    pub fn neg_idx(&self, mut a: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for &m in &self.orders {
            let c = (m - a % m) % m;
            a /= m;
            out += c * place;
            place *= m;
        }
        out
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.add_idx(a, self.neg_idx(b))
    }

    /// `k * a`.
    pub fn mul_idx(&self, k: usize, a: usize) -> usize {
        let coords: Vec<usize> = self
            .decode(a)
            .iter()
            .zip(&self.orders)
            .map(|(c, m)| (c * (k % m)) % m)
            .collect();
        self.encode(&coords).expect("coordinates reduced")
    }

    /// Order of the element with index `a`.
    pub fn element_order(&self, a: usize) -> usize {
        self.decode(a)
            .iter()
            .zip(&self.orders)
            .map(|(&c, &m)| m / c.gcd(&m))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// Number of `x` with `x + x = 0`.
    pub fn involution_count(&self) -> usize {
        self.orders.iter().map(|&m| if m % 2 == 0 { 2 } else { 1 }).product()
    }

    /// Full addition table, row-major; intended for small groups.
    pub fn cayley_table(&self) -> Vec<usize> {
        let n = self.n;
        let mut t = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let c = self.add_idx(a, b);
                t[a * n + b] = c;
                t[b * n + a] = c;
            }
        }
        t
    }

    pub fn all_elements(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    pub fn set(&self, indices: &[usize]) -> Result<ElementSet> {
        ElementSet::from_indices(self.n, indices.iter().copied())
    }

    pub(crate) fn check_set(&self, s: &ElementSet) -> Result<()> {
        if s.universe() != self.n {
            return Err(Error::GroupMismatch(format!(
                "set over a universe of {} elements used with {self} (order {})",
                s.universe(),
                self.n
            )));
        }
        Ok(())
    }

    /// Type I(p) / II / III.
    pub fn classify(&self) -> GroupType {
        let mut n = self.n as u64;
        let mut primes = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                primes.push(p);
                while n.is_multiple_of(p) {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        if let Some(&p) = primes.iter().find(|&&p| p % 3 == 2) {
            GroupType::TypeI(p)
        } else if primes.contains(&3) {
            GroupType::TypeII
        } else {
            GroupType::TypeIII
        }
    }

    /// Size of a largest sum-free subset, from the classification.
    pub fn mu_formula(&self) -> Result<usize> {
        let n = Ratio::from_integer(self.n as u64);
        let third = Ratio::new(1u64, 3);
        let value = match self.classify() {
            GroupType::TypeI(p) => n * (third + Ratio::new(1, 3 * p)),
            GroupType::TypeII => n * third,
            GroupType::TypeIII => n * (third - Ratio::new(1, 3 * self.exponent as u64)),
        };
        if !value.is_integer() {
            return Err(Error::Internal(format!(
                "mu formula for {self} is not integral: {value}"
            )));
        }
        Ok(value.to_integer() as usize)
    }

    /// Closure of `gens` under addition (always contains zero).
    pub fn subgroup_generated(&self, gens: &[usize]) -> Result<ElementSet> {
        if let Some(&g) = gens.iter().find(|&&g| g >= self.n) {
            return Err(Error::GroupMismatch(format!(
                "generator index {g} out of range for {self}"
            )));
        }
        let mut set = ElementSet::empty(self.n);
        set.insert(0);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.add_idx(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(set)
    }

    pub fn is_subgroup(&self, h: &ElementSet) -> bool {
        if h.universe() != self.n || !h.contains(0) {
            return false;
        }
        let members = h.to_vec();
        members
            .iter()
            .all(|&a| members.iter().all(|&b| h.contains(self.sub_idx(a, b))))
    }

    /// The cosets of `h`, ordered by their minimum-index representative.
    pub fn cosets(&self, h: &ElementSet) -> Result<Vec<ElementSet>> {
        self.check_set(h)?;
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup(format!("{h} in {self}")));
        }
        let mut covered = ElementSet::empty(self.n);
        let mut out = Vec::new();
        for x in 0..self.n {
            if covered.contains(x) {
                continue;
            }
            let coset = self.translate(h, x);
            covered = covered.union(&coset);
            out.push(coset);
        }
        Ok(out)
    }

    /// `x + A`.
    pub fn translate(&self, a: &ElementSet, x: usize) -> ElementSet {
        let mut out = ElementSet::empty(self.n);
        for y in a.iter() {
            out.insert(self.add_idx(x, y));
        }
        out
    }

    /// `-A`.
    pub fn negate_set(&self, a: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.n);
        for y in a.iter() {
            out.insert(self.neg_idx(y));
        }
        out
    }

    /// If all cyclic orders equal one prime `p`, returns `p`.
    pub fn elementary_prime(&self) -> Option<usize> {
        let p = self.orders[0];
        if self.orders.iter().all(|&m| m == p) && is_prime(p) {
            Some(p)
        } else {
            None
        }
    }

    /// All index-`p` subgroups of `Z_p^k`, each with its `p - 1` nontrivial
    /// cosets listed by the value of the defining functional (1, .., p-1).
    pub fn hyperplanes(&self) -> Result<Vec<Hyperplane>> {
        let p = self
            .elementary_prime()
            .ok_or_else(|| Error::InvalidGroup(format!("hyperplanes need Z_p^k with p prime, got {self}")))?;
        let k = self.rank();
        let mut out = Vec::new();
        // functionals normalised so the first nonzero coefficient is 1
        for f in 1..self.n {
            let coeffs = self.decode(f);
            let lead = coeffs.iter().find(|&&c| c != 0).copied().unwrap_or(0);
            if lead != 1 {
                continue;
            }
            let chi = Character {
                modulus: p,
                coeffs: coeffs.clone(),
            };
            let mut classes = vec![ElementSet::empty(self.n); p];
            for x in 0..self.n {
                classes[chi.apply(self, x)].insert(x);
            }
            let subgroup = classes[0].clone();
            out.push(Hyperplane {
                functional: chi,
                subgroup,
                cosets: classes.into_iter().skip(1).collect(),
            });
        }
        debug_assert_eq!(out.len(), (self.n - 1) / (p - 1));
        debug_assert!(k >= 1);
        Ok(out)
    }

    /// A surjective homomorphism onto `Z_d`, if one exists.
    ///
    /// Unit coordinate projections are tried first so that for `Z_m x K` the
    /// projection onto the first factor is returned.
    pub fn surjection_to_cyclic(&self, d: usize) -> Option<Character> {
        if d < 2 {
            return None;
        }
        for (i, &m) in self.orders.iter().enumerate() {
            if m % d == 0 {
                let mut coeffs = vec![0; self.rank()];
                coeffs[i] = 1;
                return Some(Character { modulus: d, coeffs });
            }
        }
        // coefficient on Z_m must be a multiple of d / gcd(d, m)
        let steps: Vec<usize> = self.orders.iter().map(|&m| d / d.gcd(&m)).collect();
        let mut coeffs = vec![0; self.rank()];
        fn search(i: usize, steps: &[usize], d: usize, coeffs: &mut Vec<usize>, acc_gcd: usize) -> bool {
            if i == steps.len() {
                return acc_gcd == 1;
            }
            let mut c = 0;
            while c < d {
                coeffs[i] = c;
                if search(i + 1, steps, d, coeffs, acc_gcd.gcd(&c)) {
                    return true;
                }
                c += steps[i];
            }
            false
        }
        if search(0, &steps, d, &mut coeffs, d) {
            Some(Character { modulus: d, coeffs })
        } else {
            None
        }
    }

    /// Preimage of a set of residues under a character.
    pub fn preimage(&self, chi: &Character, residues: &[usize]) -> ElementSet {
        let mut out = ElementSet::empty(self.n);
        for x in 0..self.n {
            if residues.contains(&chi.apply(self, x)) {
                out.insert(x);
            }
        }
        out
    }

    /// Compact label such as `Z2^3*Z6`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.orders.len() {
            let m = self.orders[i];
            let mut j = i;
            while j < self.orders.len() && self.orders[j] == m {
                j += 1;
            }
            if j - i > 1 {
                parts.push(format!("Z{m}^{}", j - i));
            } else {
                parts.push(format!("Z{m}"));
            }
            i = j;
        }
        parts.join("*")
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({})", self.label())
    }
}

/// An index-`p` subgroup of `Z_p^k`.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    pub functional: Character,
    pub subgroup: ElementSet,
    /// `cosets[j - 1]` is the preimage of `j` under the functional.
    pub cosets: Vec<ElementSet>,
}

/// One group of each isomorphism type of order `n`, written in primary
/// decomposition (prime-power cyclic factors, primes ascending).
pub fn abelian_groups_of_order(n: usize) -> Vec<GroupSpec> {
    if n < 2 {
        return Vec::new();
    }
    let mut per_prime: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while rest > 1 {
        let mut a = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            a += 1;
        }
        if a > 0 {
            per_prime.push(
                partitions(a)
                    .into_iter()
                    .map(|part| part.into_iter().map(|e| p.pow(e as u32)).collect())
                    .collect(),
            );
        }
        p += 1;
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for choices in per_prime {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.extend(c);
                    v
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|orders| GroupSpec::new(&orders).expect("valid orders"))
        .collect()
}

/// Partitions of `a` into non-increasing parts.
fn partitions(a: usize) -> Vec<Vec<usize>> {
    fn go(a: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if a == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=a.min(max)).rev() {
            cur.push(part);
            go(a - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(a, a, &mut Vec::new(), &mut out);
    out
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn parse_orders(s: &str) -> Result<Vec<usize>> {
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut orders = Vec::new();
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };
    let number = |pos: &mut usize| -> Result<usize> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(err(start, "expected a decimal number"));
        }
        s[start..*pos].parse().map_err(|_| err(start, "number out of range"))
    };
    if bytes.is_empty() {
        return Err(err(0, "empty group string"));
    }
    loop {
        if pos >= bytes.len() || bytes[pos] != b'Z' {
            return Err(err(pos, "expected 'Z'"));
        }
        pos += 1;
        let m_at = pos;
        let m = number(&mut pos)?;
        if m < 2 {
            return Err(err(m_at, "cyclic order must be at least 2"));
        }
        let mut reps = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            let k_at = pos;
            reps = number(&mut pos)?;
            if reps == 0 {
                return Err(err(k_at, "repetition count must be positive"));
            }
            if reps > 64 {
                return Err(err(k_at, "repetition count too large"));
            }
        }
        orders.extend(std::iter::repeat_n(m, reps));
        if pos == bytes.len() {
            break;
        }
        if bytes[pos] != b'*' {
            return Err(err(pos, "expected '*' or end of input"));
        }
        pos += 1;
    }
    Ok(orders)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_of_small_order() {
        let count = |n| abelian_groups_of_order(n).len();
        assert_eq!([1, 2, 4, 8, 16, 24, 30, 36].map(count), [0, 1, 2, 3, 5, 3, 1, 4]);
        let labels: Vec<String> = abelian_groups_of_order(8).iter().map(|g| g.label()).collect();
        assert_eq!(labels, ["Z8", "Z4*Z2", "Z2^3"]);
        assert!(abelian_groups_of_order(12).iter().all(|g| g.order() == 12));
    }

    #[test]
    fn make_group_examples() {
        let g = GroupSpec::new(&[2, 2, 2]).unwrap();
        assert_eq!((g.order(), g.exponent()), (8, 2));
        let g = GroupSpec::new(&[9]).unwrap();
        assert_eq!((g.order(), g.exponent()), (9, 9));
        let g = GroupSpec::new(&[2, 6]).unwrap();
        assert_eq!((g.order(), g.exponent()), (12, 6));
    }

    #[test]
    fn make_group_errors() {
        assert!(matches!(GroupSpec::new(&[]), Err(Error::InvalidGroup(_))));
        assert!(matches!(GroupSpec::new(&[3, 1]), Err(Error::InvalidGroup(_))));
        assert!(matches!(GroupSpec::new(&[256, 257]), Err(Error::TooLarge { .. })));
        assert!(GroupSpec::with_guard(&[256, 257], 1 << 20).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        let z9 = GroupSpec::cyclic(9).unwrap();
        let a = z9.element(4).unwrap();
        let b = z9.element(7).unwrap();
        assert_eq!(z9.add(&a, &b).unwrap().index, 2);

        let g = GroupSpec::new(&[2, 3]).unwrap();
        let x = g.element_from_coords(&[1, 2]).unwrap();
        assert_eq!(g.neg(&x).unwrap().coords, vec![1, 1]);
        assert_eq!(g.add(&x, &g.zero()).unwrap(), x);

        let other = GroupSpec::cyclic(6).unwrap();
        let y = other.element(1).unwrap();
        assert!(g.add(&x, &y).is_err());
    }

    #[test]
    fn encode_decode_all() {
        let g = GroupSpec::new(&[3, 4, 2]).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.encode(&g.decode(i)).unwrap(), i);
            assert_eq!(g.add_idx(i, g.neg_idx(i)), 0);
        }
        // little-endian: (1,0,0) -> 1, (0,1,0) -> 3, (0,0,1) -> 12
        assert_eq!(g.encode(&[0, 1, 0]).unwrap(), 3);
        assert_eq!(g.encode(&[0, 0, 1]).unwrap(), 12);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(GroupSpec::cyclic(10).unwrap().classify(), GroupType::TypeI(2));
        assert_eq!(GroupSpec::elementary(3, 3).unwrap().classify(), GroupType::TypeII);
        assert_eq!(GroupSpec::cyclic(7).unwrap().classify(), GroupType::TypeIII);
        assert_eq!(GroupSpec::cyclic(15).unwrap().classify(), GroupType::TypeI(5));
        assert_eq!(GroupSpec::cyclic(9).unwrap().classify(), GroupType::TypeII);
    }

    #[test]
    fn mu_formula_examples() {
        for k in 1..=5 {
            let g = GroupSpec::elementary(2, k).unwrap();
            assert_eq!(g.mu_formula().unwrap(), g.order() / 2);
        }
        for k in 1..=4 {
            let g = GroupSpec::elementary(3, k).unwrap();
            assert_eq!(g.mu_formula().unwrap(), 3usize.pow(k as u32 - 1));
        }
        assert_eq!(GroupSpec::cyclic(7).unwrap().mu_formula().unwrap(), 2);
        assert_eq!(GroupSpec::cyclic(10).unwrap().mu_formula().unwrap(), 5);
        assert_eq!(GroupSpec::cyclic(13).unwrap().mu_formula().unwrap(), 4);
    }

    #[test]
    fn subgroup_examples() {
        let z9 = GroupSpec::cyclic(9).unwrap();
        assert_eq!(z9.subgroup_generated(&[3]).unwrap().to_vec(), vec![0, 3, 6]);
        assert_eq!(z9.subgroup_generated(&[]).unwrap().to_vec(), vec![0]);
        let v4 = GroupSpec::new(&[2, 2]).unwrap();
        let e = v4.encode(&[1, 0]).unwrap();
        assert_eq!(v4.subgroup_generated(&[e]).unwrap().to_vec(), vec![0, 1]);
    }

    #[test]
    fn coset_examples() {
        let z6 = GroupSpec::cyclic(6).unwrap();
        let h = z6.set(&[0, 3]).unwrap();
        let cs: Vec<Vec<usize>> = z6.cosets(&h).unwrap().iter().map(|c| c.to_vec()).collect();
        assert_eq!(cs, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);

        let z9 = GroupSpec::cyclic(9).unwrap();
        let h = z9.set(&[0, 3, 6]).unwrap();
        assert_eq!(z9.cosets(&h).unwrap().len(), 3);
        assert_eq!(z9.cosets(&z9.all_elements()).unwrap().len(), 1);
        assert!(matches!(
            z9.cosets(&z9.set(&[0, 3]).unwrap()),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn hyperplane_examples() {
        let g = GroupSpec::elementary(2, 3).unwrap();
        let hs = g.hyperplanes().unwrap();
        assert_eq!(hs.len(), 7);
        let g = GroupSpec::elementary(3, 2).unwrap();
        let hs = g.hyperplanes().unwrap();
        assert_eq!(hs.len(), 4);
        assert!(hs.iter().all(|h| h.cosets.len() == 2 && h.subgroup.len() == 3));
        let g = GroupSpec::cyclic(2).unwrap();
        let hs = g.hyperplanes().unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].subgroup.to_vec(), vec![0]);
        assert!(GroupSpec::new(&[2, 4]).unwrap().hyperplanes().is_err());
        assert!(GroupSpec::cyclic(9).unwrap().hyperplanes().is_err());
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(GroupSpec::parse("Z2^4").unwrap().orders(), &[2, 2, 2, 2]);
        assert_eq!(GroupSpec::parse("Z9*Z3").unwrap().orders(), &[9, 3]);
        assert_eq!(GroupSpec::parse("Z13").unwrap().orders(), &[13]);
        assert_eq!(GroupSpec::parse("Z2^2*Z3").unwrap().label(), "Z2^2*Z3");
        for (s, off) in [
            ("", 0),
            ("Z", 1),
            ("Z9*", 3),
            ("Z9 *Z3", 2),
            ("X2", 0),
            ("Z2^", 3),
            ("Z1", 1),
        ] {
            match GroupSpec::parse(s) {
                Err(Error::Parse { offset, .. }) => assert_eq!(offset, off, "input {s:?}"),
                other => panic!("expected parse error for {s:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn surjections() {
        let g = GroupSpec::new(&[13, 3]).unwrap();
        let chi = g.surjection_to_cyclic(13).unwrap();
        assert_eq!(chi.coeffs, vec![1, 0]);
        // Z6 x Z10 -> Z30 needs a mixed functional
        let g = GroupSpec::new(&[6, 10]).unwrap();
        let chi = g.surjection_to_cyclic(30).unwrap();
        let image: std::collections::BTreeSet<usize> = (0..g.order()).map(|x| chi.apply(&g, x)).collect();
        assert_eq!(image.len(), 30);
        for a in 0..g.order() {
            for b in 0..g.order() {
                assert_eq!(
                    chi.apply(&g, g.add_idx(a, b)),
                    (chi.apply(&g, a) + chi.apply(&g, b)) % 30
                );
            }
        }
        assert!(GroupSpec::new(&[2, 2]).unwrap().surjection_to_cyclic(4).is_none());
    }
}
