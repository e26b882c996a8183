//! Quantum seeds `(B, L)` attached to maximal weakly separated collections.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::collections::{all_j_sets, apply_move, available_moves, WSCollection};
use crate::dmod::{self, Rep};
use crate::error::{Error, Result};
use crate::par::Mode;
use crate::subsets::{dim_hom, weakly_separated, KSet};

/// Labelled cluster data. Mutable summands come first, then frozen ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSeed", into = "RawSeed")]
pub struct Seed {
    pub n: usize,
    pub levels: Vec<usize>,
    /// `None` once a mutation leaves the rank-one world.
    pub labels: Vec<Option<KSet>>,
    /// Full `N × N` skew-symmetric exchange matrix; its first `m` columns form `B`.
    pub quiver: Vec<Vec<i64>>,
    pub lambda: Vec<Vec<i64>>,
    pub frozen: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RawSeed {
    n: usize,
    #[serde(rename = "J")]
    levels: Vec<usize>,
    labels: Vec<Option<Vec<usize>>>,
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
    #[serde(rename = "L")]
    lambda: Vec<Vec<i64>>,
    frozen: Vec<bool>,
    /// Arrows between frozen vertices, `N × N` with mutable columns zeroed.
    #[serde(default)]
    frozen_arrows: Vec<Vec<i64>>,
}

impl From<Seed> for RawSeed {
    fn from(s: Seed) -> Self {
        let m = s.mutable_count();
        let frozen_arrows =
            s.quiver.iter().map(|row| row.iter().enumerate().map(|(j, &x)| if j < m { 0 } else { x }).collect()).collect();
        RawSeed {
            n: s.n,
            b: s.b(),
            labels: s.labels.iter().map(|l| l.as_ref().map(|k| k.elems().to_vec())).collect(),
            levels: s.levels,
            lambda: s.lambda,
            frozen: s.frozen,
            frozen_arrows,
        }
    }
}

impl TryFrom<RawSeed> for Seed {
    type Error = Error;
    fn try_from(raw: RawSeed) -> Result<Self> {
        let nn = raw.labels.len();
        let m = raw.frozen.iter().filter(|f| !**f).count();
        let square = |x: &Vec<Vec<i64>>, cols: usize| x.len() == nn && x.iter().all(|r| r.len() == cols);
        if raw.frozen.len() != nn || !square(&raw.b, m) || !square(&raw.lambda, nn) {
            return Err(Error::Parse("seed matrices have inconsistent shapes".into()));
        }
        if raw.frozen.iter().take(m).any(|f| *f) {
            return Err(Error::Parse("mutable vertices must come first".into()));
        }
        let fa = if raw.frozen_arrows.is_empty() { vec![vec![0; nn]; nn] } else { raw.frozen_arrows };
        if !square(&fa, nn) {
            return Err(Error::Parse("frozen_arrows has the wrong shape".into()));
        }
        let quiver = (0..nn)
            .map(|i| (0..nn).map(|j| if j < m { raw.b[i][j] } else if i < m { -raw.b[j][i] } else { fa[i][j] }).collect())
            .collect();
        let labels = raw
            .labels
            .into_iter()
            .map(|l| l.map(|e| KSet::new(raw.n, e)).transpose())
            .collect::<Result<_>>()?;
        Ok(Seed { n: raw.n, levels: raw.levels, labels, quiver, lambda: raw.lambda, frozen: raw.frozen })
    }
}

impl Seed {
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn mutable_count(&self) -> usize {
        self.frozen.iter().filter(|f| !**f).count()
    }

    /// The `N × m` exchange matrix.
    pub fn b(&self) -> Vec<Vec<i64>> {
        let m = self.mutable_count();
        self.quiver.iter().map(|row| row[..m].to_vec()).collect()
    }

    /// `Bᵀ L`, an `m × N` matrix.
    pub fn compatibility(&self) -> Vec<Vec<i64>> {
        let (nn, m) = (self.size(), self.mutable_count());
        (0..m)
            .map(|k| (0..nn).map(|l| (0..nn).map(|j| self.quiver[j][k] * self.lambda[j][l]).sum()).collect())
            .collect()
    }

    /// Whether `Bᵀ L = (2 Id | 0)`.
    pub fn is_compatible(&self) -> bool {
        self.compatibility()
            .iter()
            .enumerate()
            .all(|(k, row)| row.iter().enumerate().all(|(l, &x)| x == if k == l { 2 } else { 0 }))
    }

    pub fn index_of(&self, set: &KSet) -> Option<usize> {
        self.labels.iter().position(|l| l.as_ref() == Some(set))
    }

    /// The collection formed by the labels, if all of them are still sets.
    pub fn collection(&self) -> Option<WSCollection> {
        let sets = self.labels.iter().cloned().collect::<Option<Vec<_>>>()?;
        WSCollection::new(self.n, self.levels.clone(), sets).ok()
    }

    /// Equality of `(B, L)` and frozen mask after matching rows by label.
    pub fn same_data(&self, other: &Seed) -> bool {
        if self.size() != other.size() || self.mutable_count() != other.mutable_count() {
            return false;
        }
        let perm: Option<Vec<usize>> = self
            .labels
            .iter()
            .map(|l| l.as_ref().and_then(|s| other.index_of(s)))
            .collect();
        let Some(perm) = perm else { return false };
        let m = self.mutable_count();
        (0..self.size()).all(|i| {
            self.frozen[i] == other.frozen[perm[i]]
                && (0..self.size()).all(|j| self.lambda[i][j] == other.lambda[perm[i]][perm[j]])
                && (0..m).all(|k| self.quiver[i][k] == other.quiver[perm[i]][perm[k]])
        })
    }
}

fn is_interval_levels(levels: &[usize]) -> bool {
    !levels.is_empty() && levels.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Frozen labels: those weakly separated from every `J`-set.
pub fn detect_frozen(c: &WSCollection) -> Result<Vec<bool>> {
    let ambient = all_j_sets(c.n(), c.levels());
    let mask: Vec<bool> = c.sets().iter().map(|s| ambient.iter().all(|t| weakly_separated(s, t))).collect();
    if is_interval_levels(c.levels()) {
        let want = c.n() - 1 + c.levels().len();
        let got = mask.iter().filter(|f| **f).count();
        if got != want {
            return Err(Error::Consistency(format!("found {got} frozen labels, expected {want}")));
        }
    }
    Ok(mask)
}

/// Builds `(B, L)` for a maximal collection with interval `J`: `B` from
/// irreducible maps between the rank-one summands, `L` from Hom differences.
pub fn seed_from_collection(c: &WSCollection, mode: Mode) -> Result<Seed> {
    if !is_interval_levels(c.levels()) {
        return Err(Error::Unsupported("rank-one cluster tilting objects need an interval J".into()));
    }
    let mask = detect_frozen(c)?;
    let mut order: Vec<usize> = (0..c.len()).filter(|&i| !mask[i]).collect();
    order.extend((0..c.len()).filter(|&i| mask[i]));
    let labels: Vec<KSet> = order.iter().map(|&i| c.sets()[i].clone()).collect();
    let frozen: Vec<bool> = order.iter().map(|&i| mask[i]).collect();
    let mods: Vec<Rep> = labels.iter().map(|s| dmod::build_rank_one(c.n(), s)).collect::<Result<_>>()?;
    let irr = dmod::end_radical_irr(&mods, mode)?;
    let nn = labels.len();
    let quiver: Vec<Vec<i64>> =
        (0..nn).map(|j| (0..nn).map(|k| irr[j][k] as i64 - irr[k][j] as i64).collect()).collect();
    let lambda = hom_difference(&labels)?;
    let seed = Seed {
        n: c.n(),
        levels: c.levels().to_vec(),
        labels: labels.into_iter().map(Some).collect(),
        quiver,
        lambda,
        frozen,
    };
    if !seed.is_compatible() {
        return Err(Error::Consistency("Bᵀ L is not (2 Id | 0)".into()));
    }
    Ok(seed)
}

/// `λ_ij = dim Hom(M_i, M_j) − dim Hom(M_j, M_i)`.
pub fn hom_difference(labels: &[KSet]) -> Result<Vec<Vec<i64>>> {
    labels
        .iter()
        .map(|a| labels.iter().map(|b| Ok(dim_hom(a, b)? as i64 - dim_hom(b, a)? as i64)).collect())
        .collect()
}

/// Matrix mutation at `k` together with the matching change of `L`.
pub fn mutate(seed: &Seed, k: usize) -> Result<Seed> {
    let nn = seed.size();
    if k >= nn || seed.frozen[k] {
        return Err(Error::Precondition(format!("vertex {k} is not mutable")));
    }
    let bq = &seed.quiver;
    let quiver: Vec<Vec<i64>> = (0..nn)
        .map(|i| {
            (0..nn)
                .map(|j| {
                    if i == k || j == k {
                        -bq[i][j]
                    } else {
                        bq[i][j] + (bq[i][k].abs() * bq[k][j] + bq[i][k] * bq[k][j].abs()) / 2
                    }
                })
                .collect()
        })
        .collect();
    let mut lambda = seed.lambda.clone();
    for i in (0..nn).filter(|&i| i != k) {
        let x: i64 = (0..nn).map(|j| bq[j][k].max(0) * seed.lambda[i][j]).sum::<i64>() - seed.lambda[i][k];
        lambda[i][k] = x;
        lambda[k][i] = -x;
    }
    let mut labels = seed.labels.clone();
    labels[k] = exchange_partner(seed, k);
    Ok(Seed { labels, quiver, lambda, ..seed.clone() })
}

/// The `L`-column at `k` from the `F`-side rule, for cross-checking `mutate`.
pub fn lambda_column_f_rule(seed: &Seed, k: usize) -> Vec<i64> {
    let nn = seed.size();
    (0..nn)
        .map(|i| {
            if i == k {
                0
            } else {
                (0..nn).map(|j| (-seed.quiver[j][k]).max(0) * seed.lambda[i][j]).sum::<i64>() - seed.lambda[i][k]
            }
        })
        .collect()
}

/// The set replacing label `k` under an exchange or flip, if one applies.
pub fn exchange_partner(seed: &Seed, k: usize) -> Option<KSet> {
    let old = seed.labels[k].clone()?;
    let c = seed.collection()?;
    available_moves(&c).into_iter().find_map(|mv| {
        let (out, inn) = mv.sets().ok()?;
        (out == old && apply_move(&c, &mv).is_ok()).then_some(inn)
    })
}

/// DOT rendering: `j → k` with multiplicity `b_jk > 0`, frozen vertices boxed.
pub fn export_dot(seed: &Seed) -> String {
    let mut out = String::from("digraph seed {\n");
    for (i, l) in seed.labels.iter().enumerate() {
        let name = l.as_ref().map(KSet::label).unwrap_or_else(|| format!("v{i}"));
        let shape = if seed.frozen[i] { "box" } else { "ellipse" };
        writeln!(out, "  v{i} [label=\"{name}\", shape={shape}];").expect("write to string");
    }
    for (j, row) in seed.quiver.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            for _ in 0..x.max(0) {
                writeln!(out, "  v{j} -> v{k};").expect("write to string");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::{extended_rectangle, geometric_exchange, rectangle};
    use crate::lattices::{form_lad, EClass};

    fn ks(n: usize, e: &[usize]) -> KSet {
        KSet::new(n, e.to_vec()).unwrap()
    }

    fn grassmannian_n4() -> Seed {
        seed_from_collection(&rectangle(4, 2).unwrap(), Mode::Sequential).unwrap()
    }

    #[test]
    fn grassmannian_seed() {
        let s = grassmannian_n4();
        assert_eq!(s.mutable_count(), 1);
        assert_eq!(s.labels[0], Some(ks(4, &[1, 3])));
        let idx = |e: &[usize]| s.index_of(&ks(4, e)).unwrap();
        let order = [idx(&[1, 2]), idx(&[2, 3]), idx(&[3, 4]), idx(&[1, 4])];
        let col: Vec<i64> = order.iter().map(|&j| s.quiver[j][0]).collect();
        assert_eq!(col, vec![1, -1, 1, -1]);
        let row: Vec<i64> = order.iter().map(|&j| s.lambda[0][j]).collect();
        assert_eq!(row, vec![-1, 1, 1, 1]);
        assert_eq!(s.compatibility()[0], vec![2, 0, 0, 0, 0]);
    }

    #[test]
    fn frozen_examples() {
        let mask = detect_frozen(&rectangle(4, 2).unwrap()).unwrap();
        let c = rectangle(4, 2).unwrap();
        let frozen: Vec<String> = c.sets().iter().zip(&mask).filter(|(_, f)| **f).map(|(s, _)| s.label()).collect();
        assert_eq!(frozen, vec!["12", "14", "23", "34"]);
        let big = extended_rectangle(7, &[1, 2, 3, 4], 3).unwrap();
        let mask = detect_frozen(&big).unwrap();
        assert_eq!(mask.iter().filter(|f| **f).count(), 10);
        for (s, f) in big.sets().iter().zip(&mask) {
            if s.is_initial_interval() {
                assert!(f);
            }
        }
    }

    #[test]
    fn initial_intervals_commute() {
        let s = seed_from_collection(&extended_rectangle(5, &[1, 2, 3], 2).unwrap(), Mode::Sequential).unwrap();
        for (i, a) in s.labels.iter().enumerate() {
            for (j, b) in s.labels.iter().enumerate() {
                if a.as_ref().unwrap().is_initial_interval() && b.as_ref().unwrap().is_initial_interval() {
                    assert_eq!(s.lambda[i][j], 0);
                }
            }
        }
    }

    #[test]
    fn non_interval_refused() {
        let c = extended_rectangle(5, &[1, 3], 3).unwrap();
        assert!(matches!(seed_from_collection(&c, Mode::Sequential), Err(Error::Unsupported(_))));
    }

    #[test]
    fn mutation_matches_rebuild() {
        let s = grassmannian_n4();
        let m = mutate(&s, 0).unwrap();
        assert_eq!(m.labels[0], Some(ks(4, &[2, 4])));
        let rebuilt = seed_from_collection(
            &geometric_exchange(&rectangle(4, 2).unwrap(), &KSet::empty(4), [1, 2, 3, 4]).unwrap(),
            Mode::Sequential,
        )
        .unwrap();
        assert!(m.same_data(&rebuilt));
        assert!(m.is_compatible());
        let back = mutate(&m, 0).unwrap();
        assert_eq!(back, s);
        assert!(mutate(&s, 1).is_err());
    }

    #[test]
    fn e_and_f_rules_agree() {
        let s = seed_from_collection(&extended_rectangle(6, &[2, 3, 4], 3).unwrap(), Mode::Parallel).unwrap();
        for k in 0..s.mutable_count() {
            let m = mutate(&s, k).unwrap();
            let col: Vec<i64> = (0..s.size()).map(|i| m.lambda[i][k]).collect();
            assert_eq!(col, lambda_column_f_rule(&s, k));
            assert!(m.is_compatible());
            assert_eq!(mutate(&m, k).unwrap().lambda, s.lambda);
        }
    }

    #[test]
    fn no_loops_or_two_cycles() {
        let c = extended_rectangle(6, &[2, 3, 4], 3).unwrap();
        let mods: Vec<Rep> = c.sets().iter().map(|s| dmod::build_rank_one(6, s).unwrap()).collect();
        let irr = dmod::end_radical_irr(&mods, Mode::Parallel).unwrap();
        let mask = detect_frozen(&c).unwrap();
        for i in 0..mods.len() {
            assert_eq!(irr[i][i], 0);
            if !mask[i] {
                for j in 0..mods.len() {
                    assert!(irr[i][j] == 0 || irr[j][i] == 0);
                }
            }
        }
    }

    #[test]
    fn lambda_splits_over_pi() {
        let n = 5;
        let s = seed_from_collection(&extended_rectangle(n, &[2, 3], 2).unwrap(), Mode::Sequential).unwrap();
        for (i, a) in s.labels.iter().enumerate() {
            for (j, b) in s.labels.iter().enumerate() {
                let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
                let pa = dmod::quotient_pi(&dmod::build_rank_one(n, a).unwrap()).unwrap();
                let pb = dmod::quotient_pi(&dmod::build_rank_one(n, b).unwrap()).unwrap();
                let pi_diff =
                    dmod::dim_hom(&pa, &pb).unwrap() as i64 - dmod::dim_hom(&pb, &pa).unwrap() as i64;
                let lad = form_lad(&EClass::rank_one(a), &EClass::rank_one(b));
                assert_eq!(s.lambda[i][j] - pi_diff, lad, "{a} {b}");
            }
        }
    }

    #[test]
    fn dot_export() {
        let s = grassmannian_n4();
        let dot = export_dot(&s);
        assert_eq!(dot.matches("->").count(), 8);
        assert_eq!(dot, export_dot(&s.clone()));
        let empty = Seed { n: 2, levels: vec![1], labels: vec![], quiver: vec![], lambda: vec![], frozen: vec![] };
        assert_eq!(export_dot(&empty), "digraph seed {\n}\n");
    }

    #[test]
    fn json_roundtrip() {
        let s = grassmannian_n4();
        let v = serde_json::to_value(&s).unwrap();
        assert!(v.get("B").is_some() && v.get("L").is_some() && v.get("frozen").is_some());
        assert_eq!(serde_json::from_value::<Seed>(v).unwrap(), s);
    }
}
