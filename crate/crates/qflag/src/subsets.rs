//! Subsets of `[1..n]`: prefixes, the `⪯` order, separation predicates and
//! the combinatorial Hom/Ext dimension formulas for rank-one modules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A subset of `[1..n]` with strictly increasing elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawKSet")]
pub struct KSet {
    n: usize,
    elems: Vec<usize>,
}

#[derive(Deserialize)]
struct RawKSet {
    n: usize,
    elems: Vec<usize>,
}

impl TryFrom<RawKSet> for KSet {
    type Error = Error;
    fn try_from(raw: RawKSet) -> Result<Self> {
        KSet::new(raw.n, raw.elems)
    }
}

impl KSet {
    /// Builds a set from arbitrary-order elements; duplicates and elements
    /// outside `[1..n]` are rejected.
    pub fn new(n: usize, mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        for w in elems.windows(2) {
            if w[0] == w[1] {
                return Err(Error::Precondition(format!("duplicate element {}", w[0])));
            }
        }
        if let Some(&e) = elems.iter().find(|&&e| e == 0 || e > n) {
            return Err(Error::Range(format!("element {e} outside [1..{n}]")));
        }
        Ok(KSet { n, elems })
    }

    pub(crate) fn from_sorted(n: usize, elems: Vec<usize>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.iter().all(|&e| e >= 1 && e <= n));
        KSet { n, elems }
    }

    pub fn empty(n: usize) -> Self {
        KSet { n, elems: Vec::new() }
    }

    /// The interval `[a, b]`, empty when `a > b`.
    pub fn interval(n: usize, a: usize, b: usize) -> Self {
        let elems = if a > b { Vec::new() } else { (a..=b).collect() };
        KSet::from_sorted(n, elems)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elems.binary_search(&x).is_ok()
    }

    pub fn union(&self, other: &KSet) -> KSet {
        let mut v: Vec<usize> = self.elems.iter().chain(&other.elems).copied().collect();
        v.sort_unstable();
        v.dedup();
        KSet::from_sorted(self.n.max(other.n), v)
    }

    pub fn intersection(&self, other: &KSet) -> KSet {
        let v = self.elems.iter().copied().filter(|&x| other.contains(x)).collect();
        KSet::from_sorted(self.n, v)
    }

    pub fn difference(&self, other: &KSet) -> KSet {
        let v = self.elems.iter().copied().filter(|&x| !other.contains(x)).collect();
        KSet::from_sorted(self.n, v)
    }

    /// `self ∪ extra`; elements must be in range.
    pub fn with(&self, extra: &[usize]) -> Result<KSet> {
        let mut v = self.elems.clone();
        v.extend_from_slice(extra);
        KSet::new(self.n, v)
    }

    pub fn without(&self, x: usize) -> KSet {
        let v = self.elems.iter().copied().filter(|&e| e != x).collect();
        KSet::from_sorted(self.n, v)
    }

    pub fn is_interval(&self) -> bool {
        self.elems.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// `[1, i]` for some `i` (the empty set counts).
    pub fn is_initial_interval(&self) -> bool {
        self.elems.iter().enumerate().all(|(p, &e)| e == p + 1)
    }

    /// Compact label: digits when `n < 10`, otherwise comma separated.
    pub fn label(&self) -> String {
        if self.elems.is_empty() {
            return "∅".to_string();
        }
        if self.n < 10 {
            self.elems.iter().map(|e| e.to_string()).collect()
        } else {
            self.elems.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// All subsets of `[1..n]` in order of size, then lexicographically.
pub fn all_subsets(n: usize) -> Vec<KSet> {
    (0..=n).flat_map(|k| subsets_of_size(n, k)).collect()
}

pub fn nonempty_subsets(n: usize) -> Vec<KSet> {
    (1..=n).flat_map(|k| subsets_of_size(n, k)).collect()
}

/// All `k`-subsets of `[1..n]` in lexicographic order.
pub fn subsets_of_size(n: usize, k: usize) -> Vec<KSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(KSet::from_sorted(n, cur.clone()));
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `S(I, d)`: the `d` smallest elements.
pub fn s_prefix(set: &KSet, d: usize) -> Result<KSet> {
    if d > set.len() {
        return Err(Error::Range(format!("d={d} exceeds |I|={}", set.len())));
    }
    Ok(KSet::from_sorted(set.n, set.elems[..d].to_vec()))
}

/// `E(I, d)`: the `d` largest elements.
pub fn e_suffix(set: &KSet, d: usize) -> Result<KSet> {
    if d > set.len() {
        return Err(Error::Range(format!("d={d} exceeds |I|={}", set.len())));
    }
    Ok(KSet::from_sorted(set.n, set.elems[set.len() - d..].to_vec()))
}

/// `I ⪯ J` iff `i_s ≤ j_s` for every position `s`.
pub fn leq_order(i: &KSet, j: &KSet) -> Result<bool> {
    if i.len() != j.len() {
        return Err(Error::Precondition(format!(
            "⪯ needs equal sizes, got {} and {}",
            i.len(),
            j.len()
        )));
    }
    Ok(i.elems.iter().zip(&j.elems).all(|(a, b)| a <= b))
}

fn check_pair(i: &KSet, j: &KSet) -> Result<()> {
    if i.is_empty() || j.is_empty() {
        return Err(Error::Precondition("empty set has no rank-one module".into()));
    }
    if i.n != j.n {
        return Err(Error::Precondition(format!("ambient sizes differ: {} vs {}", i.n, j.n)));
    }
    Ok(())
}

/// `dim Hom(M_I, M_J) = max{d : S(I,d) ⪯ E(J,d)}`.
pub fn dim_hom(i: &KSet, j: &KSet) -> Result<usize> {
    check_pair(i, j)?;
    let m = i.len().min(j.len());
    let jl = j.len();
    let best = (0..=m)
        .filter(|&d| (0..d).all(|s| i.elems[s] <= j.elems[jl - d + s]))
        .max()
        .unwrap_or(0);
    Ok(best)
}

pub fn dim_ext_e(i: &KSet, j: &KSet) -> Result<usize> {
    let h = dim_hom(i, j)? + dim_hom(j, i)?;
    let sub = i.intersection(j).len() + i.len().min(j.len());
    h.checked_sub(sub)
        .ok_or_else(|| Error::Consistency(format!("negative ext for {i}, {j}")))
}

pub fn dim_ext_d(i: &KSet, j: &KSet) -> Result<usize> {
    let h = dim_hom(i, j)?;
    h.checked_sub(i.intersection(j).len())
        .ok_or_else(|| Error::Consistency(format!("negative Ext_D for {i}, {j}")))
}

/// Split `other \ base` around `base \ other`: returns `(below, above)` counts
/// if no element of `other \ base` falls strictly inside the span of
/// `base \ other`.
fn split_around(base: &KSet, other: &KSet) -> Option<(usize, usize)> {
    let inner = base.difference(other);
    let outer = other.difference(base);
    let (Some(&lo), Some(&hi)) = (inner.elems.first(), inner.elems.last()) else {
        return Some((outer.len(), 0));
    };
    let below = outer.elems.iter().filter(|&&x| x < lo).count();
    let above = outer.elems.iter().filter(|&&x| x > hi).count();
    (below + above == outer.len()).then_some((below, above))
}

fn case_i(i: &KSet, j: &KSet) -> Option<i64> {
    if i.len() < j.len() {
        return None;
    }
    split_around(i, j).map(|(lo, hi)| hi as i64 - lo as i64)
}

fn case_ii(i: &KSet, j: &KSet) -> Option<i64> {
    if j.len() < i.len() {
        return None;
    }
    split_around(j, i).map(|(lo, hi)| lo as i64 - hi as i64)
}

pub fn weakly_separated(i: &KSet, j: &KSet) -> bool {
    case_i(i, j).is_some() || case_ii(i, j).is_some()
}

/// The exponent `c(I, J)` with `Δ_I Δ_J = q^c Δ_J Δ_I`.
pub fn c_exponent(i: &KSet, j: &KSet) -> Result<i64> {
    match (case_i(i, j), case_ii(i, j)) {
        (Some(a), Some(b)) if a != b => Err(Error::Consistency(format!(
            "both separation cases apply to {i}, {j} but give {a} and {b}"
        ))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(Error::Domain(format!("{i} and {j} are not weakly separated"))),
    }
}

pub fn strongly_separated(i: &KSet, j: &KSet) -> bool {
    let a = i.difference(j);
    let b = j.difference(i);
    let before = |x: &KSet, y: &KSet| match (x.elems.last(), y.elems.first()) {
        (Some(p), Some(q)) => p < q,
        _ => true,
    };
    before(&a, &b) || before(&b, &a)
}

pub fn d_exponent(i: &KSet, j: &KSet) -> i64 {
    (i.len().min(j.len()) - i.intersection(j).len()) as i64
}

/// `pad(I) = I ∪ [n+s+1, 2n]` inside `[1..2n]`.
pub fn pad(set: &KSet) -> KSet {
    let n = set.n;
    let s = set.len();
    let mut v = set.elems.clone();
    v.extend(n + s + 1..=2 * n);
    KSet::from_sorted(2 * n, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ks(n: usize, e: &[usize]) -> KSet {
        KSet::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn prefixes() {
        let i = ks(5, &[2, 3, 5]);
        assert_eq!(s_prefix(&i, 2).unwrap(), ks(5, &[2, 3]));
        assert_eq!(e_suffix(&i, 2).unwrap(), ks(5, &[3, 5]));
        assert!(s_prefix(&i, 0).unwrap().is_empty());
        assert_eq!(e_suffix(&ks(5, &[1, 4]), 1).unwrap(), ks(5, &[4]));
        assert!(matches!(s_prefix(&i, 4), Err(Error::Range(_))));
    }

    #[test]
    fn order() {
        assert!(leq_order(&ks(3, &[1, 3]), &ks(3, &[2, 3])).unwrap());
        assert!(!leq_order(&ks(3, &[2, 3]), &ks(3, &[1, 3])).unwrap());
        assert!(leq_order(&ks(3, &[1]), &ks(3, &[2, 3])).is_err());
    }

    #[test]
    fn hom_and_ext_values() {
        assert_eq!(dim_hom(&ks(3, &[1, 3]), &ks(3, &[1, 2])).unwrap(), 1);
        assert_eq!(dim_hom(&ks(3, &[1, 2]), &ks(3, &[1, 3])).unwrap(), 2);
        assert_eq!(dim_ext_e(&ks(4, &[1, 3]), &ks(4, &[2, 4])).unwrap(), 1);
        assert_eq!(dim_ext_e(&ks(3, &[2]), &ks(3, &[1, 3])).unwrap(), 1);
        assert_eq!(dim_ext_e(&ks(3, &[1, 2]), &ks(3, &[2, 3])).unwrap(), 0);
        assert_eq!(dim_ext_d(&ks(3, &[2, 3]), &ks(3, &[1, 2])).unwrap(), 0);
        assert_eq!(dim_ext_d(&ks(4, &[1, 3]), &ks(4, &[2, 4])).unwrap(), 2);
        assert!(dim_hom(&KSet::empty(3), &ks(3, &[1])).is_err());
    }

    #[test]
    fn separation_examples() {
        assert!(!weakly_separated(&ks(4, &[1, 3]), &ks(4, &[2, 4])));
        assert!(weakly_separated(&ks(3, &[1, 2]), &ks(3, &[2, 3])));
        assert!(!weakly_separated(&ks(3, &[2]), &ks(3, &[1, 3])));
        assert!(weakly_separated(&KSet::empty(3), &ks(3, &[1, 3])));
        assert_eq!(c_exponent(&ks(3, &[1, 2]), &ks(3, &[2, 3])).unwrap(), 1);
        assert_eq!(c_exponent(&ks(7, &[1, 2, 7]), &ks(7, &[3, 4, 5])).unwrap(), 1);
        assert!(matches!(c_exponent(&ks(4, &[1, 3]), &ks(4, &[2, 4])), Err(Error::Domain(_))));
        assert!(strongly_separated(&ks(4, &[1, 2]), &ks(4, &[3, 4])));
        assert!(strongly_separated(&ks(3, &[2, 3]), &ks(3, &[1, 2])));
        assert!(!strongly_separated(&ks(4, &[1, 3]), &ks(4, &[2, 4])));
        assert_eq!(d_exponent(&ks(3, &[1, 3]), &ks(3, &[1, 2])), 1);
        assert_eq!(d_exponent(&ks(3, &[1]), &ks(3, &[2, 3])), 1);
    }

    #[test]
    fn padding() {
        assert_eq!(pad(&ks(3, &[1, 3])), ks(6, &[1, 3, 6]));
        assert_eq!(pad(&ks(3, &[2])), ks(6, &[2, 5, 6]));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(subsets_of_size(5, 2).len(), 10);
        assert_eq!(all_subsets(4).len(), 16);
        assert_eq!(nonempty_subsets(4).len(), 15);
    }

    fn pair(max_n: usize) -> impl Strategy<Value = (KSet, KSet)> {
        (2..=max_n).prop_flat_map(|n| {
            let sub = proptest::collection::btree_set(1..=n, 1..=n);
            (Just(n), sub.clone(), sub)
        })
        .prop_map(|(n, a, b)| {
            (
                KSet::new(n, a.into_iter().collect()).unwrap(),
                KSet::new(n, b.into_iter().collect()).unwrap(),
            )
        })
    }

    proptest! {
        #[test]
        fn ws_iff_ext_vanishes((i, j) in pair(8)) {
            prop_assert_eq!(weakly_separated(&i, &j), dim_ext_e(&i, &j).unwrap() == 0);
        }

        #[test]
        fn ext_e_symmetric((i, j) in pair(8)) {
            prop_assert_eq!(dim_ext_e(&i, &j).unwrap(), dim_ext_e(&j, &i).unwrap());
        }

        #[test]
        fn c_is_hom_and_ext_difference((i, j) in pair(8)) {
            if weakly_separated(&i, &j) {
                let c = c_exponent(&i, &j).unwrap();
                let h = dim_hom(&i, &j).unwrap() as i64 - dim_hom(&j, &i).unwrap() as i64;
                let e = dim_ext_d(&i, &j).unwrap() as i64 - dim_ext_d(&j, &i).unwrap() as i64;
                prop_assert_eq!(c, h);
                prop_assert_eq!(c, e);
                prop_assert_eq!(c_exponent(&j, &i).unwrap(), -c);
            }
        }

        #[test]
        fn strong_iff_one_sided_ext((i, j) in pair(8)) {
            let one_sided = dim_ext_d(&i, &j).unwrap() == 0 || dim_ext_d(&j, &i).unwrap() == 0;
            prop_assert_eq!(strongly_separated(&i, &j), one_sided);
        }

        #[test]
        fn ext_d_sum_relation((i, j) in pair(8)) {
            let lhs = dim_ext_d(&i, &j).unwrap() + dim_ext_d(&j, &i).unwrap();
            let rhs = dim_ext_e(&i, &j).unwrap() as i64 + d_exponent(&i, &j);
            prop_assert_eq!(lhs as i64, rhs);
        }

        #[test]
        fn pad_shifts_hom((i, j) in pair(7)) {
            let n = i.n();
            let lhs = dim_hom(&pad(&i), &pad(&j)).unwrap();
            prop_assert_eq!(lhs, dim_hom(&i, &j).unwrap() + (n - j.len()));
            prop_assert_eq!(
                weakly_separated(&pad(&i), &pad(&j)),
                weakly_separated(&i, &j)
            );
        }

        #[test]
        fn common_element_drops_hom((i, j) in pair(8)) {
            let common = i.intersection(&j);
            for &a in common.elems() {
                let (ia, ja) = (i.without(a), j.without(a));
                if ia.is_empty() || ja.is_empty() {
                    continue;
                }
                prop_assert_eq!(dim_hom(&i, &j).unwrap(), dim_hom(&ia, &ja).unwrap() + 1);
                prop_assert_eq!(dim_hom(&j, &i).unwrap(), dim_hom(&ja, &ia).unwrap() + 1);
            }
        }

        #[test]
        fn hom_of_self_is_size((i, _j) in pair(8)) {
            prop_assert_eq!(dim_hom(&i, &i).unwrap(), i.len());
            prop_assert_eq!(dim_ext_d(&i, &i).unwrap(), 0);
        }
    }
}
