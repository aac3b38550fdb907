//! Caps in the binary projective space `PG(k, 2)`.
//!
//! Points are the nonzero vectors of `GF(2)^{k+1}`, written as integers
//! `1..2^{k+1}`; these are exactly the element indices of `Z_2^{k+1}`, so a
//! complete cap and a maximal sum-free set are literally the same set.
//! Three distinct points are collinear when they sum to zero.

use num_bigint::BigUint;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::sumfree::{count_fmax, enumerate_maximal_sumfree};
use crate::util::serialize_decimal;

/// Largest projective dimension handled by the exhaustive routines.
pub const MAX_DIMENSION: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectivePointSet {
    pub k: usize,
    pub points: Vec<u32>,
}

impl ProjectivePointSet {
    pub fn new(k: usize, mut points: Vec<u32>) -> Result<Self> {
        if k == 0 || k > 30 {
            return Err(Error::InvalidInput(format!("projective dimension {k} out of range")));
        }
        let limit = 1u32 << (k + 1);
        if let Some(&p) = points.iter().find(|&&p| p == 0 || p >= limit) {
            return Err(Error::InvalidInput(format!("{p} is not a point of PG({k},2)")));
        }
        points.sort_unstable();
        points.dedup();
        Ok(ProjectivePointSet { k, points })
    }

    pub fn point_count(&self) -> usize {
        (1 << (self.k + 1)) - 1
    }

    fn contains(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }
}

/// No three distinct points on a line.
pub fn is_cap(p: &ProjectivePointSet) -> bool {
    let pts = &p.points;
    (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| !p.contains(pts[i] ^ pts[j])))
}

/// A cap to which no further point can be added.
pub fn is_complete_cap(p: &ProjectivePointSet) -> bool {
    if !is_cap(p) {
        return false;
    }
    let pts = &p.points;
    (1..=p.point_count() as u32).filter(|q| !p.contains(*q)).all(|q| {
        // q completes a line with two cap points
        pts.iter().any(|&x| x != (x ^ q) && p.contains(x ^ q))
    })
}

struct CapSearch<'a> {
    points: u32,
    found: u64,
    visit: &'a mut dyn FnMut(u64),
}

impl CapSearch<'_> {
    /// `cap` holds chosen points, `covered` the third points of their lines.
    fn dfs(&mut self, next: u32, cap: u64, covered: u64, meter: &mut u64, budget: &Budget) -> Result<()> {
        *meter += 1;
        if *meter > budget.max_nodes {
            return Err(Error::BudgetExceeded {
                operation: "complete cap search",
                nodes: *meter,
                found: self.found,
            });
        }
        if next > self.points {
            let all = ((1u64 << (self.points + 1)) - 1) & !1;
            if (cap | covered) == all {
                self.found += 1;
                (self.visit)(cap);
            }
            return Ok(());
        }
        let bit = 1u64 << next;
        if covered & bit == 0 {
            let mut cov = covered;
            let mut rest = cap;
            while rest != 0 {
                let x = rest.trailing_zeros();
                rest &= rest - 1;
                cov |= 1 << (x ^ next);
            }
            self.dfs(next + 1, cap | bit, cov, meter, budget)?;
        }
        self.dfs(next + 1, cap, covered, meter, budget)
    }
}

fn check_dimension(k: usize) -> Result<()> {
    if k == 0 || k > MAX_DIMENSION {
        return Err(Error::TooLarge {
            operation: "complete cap enumeration",
            n: 1usize << (k + 1).min(63),
            guard: 1 << (MAX_DIMENSION + 1),
        });
    }
    Ok(())
}

fn search(k: usize, budget: &Budget, visit: &mut dyn FnMut(u64)) -> Result<u64> {
    check_dimension(k)?;
    let mut s = CapSearch {
        points: (1u32 << (k + 1)) - 1,
        found: 0,
        visit,
    };
    let mut meter = 0;
    s.dfs(1, 0, 0, &mut meter, budget)?;
    Ok(s.found)
}

/// Number of complete caps of `PG(k, 2)`, by a search over points.
pub fn count_complete_caps(k: usize) -> Result<BigUint> {
    search(k, &Budget::default(), &mut |_| {}).map(BigUint::from)
}

/// All complete caps of `PG(k, 2)`, each as a sorted point list, in search
/// order.
pub fn enumerate_complete_caps(k: usize) -> Result<Vec<ProjectivePointSet>> {
    let mut masks = Vec::new();
    search(k, &Budget::default(), &mut |cap| masks.push(cap))?;
    masks
        .into_iter()
        .map(|m| {
            let pts = (1..64).filter(|i| m >> i & 1 == 1).collect();
            ProjectivePointSet::new(k, pts)
        })
        .collect()
}

/// `f_max(Z_2^{k+1})` from the sum-free enumerator.
pub fn caps_via_sumfree(k: usize) -> Result<BigUint> {
    check_dimension(k)?;
    Ok(count_fmax(&GroupSpec::elementary(2, k + 1)?)?.value)
}

#[derive(Clone, Debug, Serialize)]
pub struct CapsReport {
    pub k: usize,
    #[serde(serialize_with = "serialize_decimal")]
    pub geometric: BigUint,
    #[serde(serialize_with = "serialize_decimal")]
    pub via_sumfree: BigUint,
    pub agree: bool,
    /// The complete caps and the maximal sum-free sets are the same sets.
    pub bijection: bool,
}

pub fn caps_report(k: usize) -> Result<CapsReport> {
    let geometric = count_complete_caps(k)?;
    let via_sumfree = caps_via_sumfree(k)?;
    let mut caps: Vec<Vec<usize>> = enumerate_complete_caps(k)?
        .into_iter()
        .map(|c| c.points.iter().map(|&p| p as usize).collect())
        .collect();
    caps.sort();
    let mut sets: Vec<Vec<usize>> = enumerate_maximal_sumfree(&GroupSpec::elementary(2, k + 1)?)?
        .iter()
        .map(|s| s.to_vec())
        .collect();
    sets.sort();
    Ok(CapsReport {
        k,
        agree: geometric == via_sumfree,
        bijection: caps == sets,
        geometric,
        via_sumfree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(k: usize, p: &[u32]) -> ProjectivePointSet {
        ProjectivePointSet::new(k, p.to_vec()).unwrap()
    }

    #[test]
    fn caps_in_the_plane() {
        assert!(is_cap(&pts(2, &[1, 2])));
        assert!(!is_cap(&pts(2, &[1, 2, 3])));
        // complement of the line {1, 2, 3}
        let oval = pts(2, &[4, 5, 6, 7]);
        assert!(is_complete_cap(&oval));
        assert!(!is_complete_cap(&pts(2, &[4, 5, 6])));
        assert!(ProjectivePointSet::new(2, vec![0]).is_err());
        assert!(ProjectivePointSet::new(2, vec![8]).is_err());
    }

    #[test]
    fn line_caps() {
        // PG(1,2) is one line of three points: the complete caps are its pairs
        let caps = enumerate_complete_caps(1).unwrap();
        assert_eq!(caps.len(), 3);
        assert!(caps.iter().all(|c| c.points.len() == 2 && is_complete_cap(c)));
    }

    #[test]
    fn both_routes_agree() {
        for k in 1..=3 {
            let r = caps_report(k).unwrap();
            assert!(r.agree && r.bijection, "{r:?}");
        }
        assert!(count_complete_caps(0).is_err());
        assert!(count_complete_caps(5).is_err());
    }
}
