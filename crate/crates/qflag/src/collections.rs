//! Weakly separated collections of `J`-sets, their standard constructions and
//! the exchange and flip moves between them.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Mode};
use crate::subsets::{subsets_of_size, weakly_separated, KSet};

/// A collection of subsets of `[1..n]` whose sizes lie in a level set `J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCollection", into = "RawCollection")]
pub struct WSCollection {
    n: usize,
    levels: Vec<usize>,
    sets: Vec<KSet>,
}

#[derive(Serialize, Deserialize)]
struct RawCollection {
    n: usize,
    #[serde(rename = "J")]
    levels: Vec<usize>,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<RawCollection> for WSCollection {
    type Error = Error;
    fn try_from(raw: RawCollection) -> Result<Self> {
        let sets = raw.sets.into_iter().map(|s| KSet::new(raw.n, s)).collect::<Result<Vec<_>>>()?;
        WSCollection::new(raw.n, raw.levels, sets)
    }
}

impl From<WSCollection> for RawCollection {
    fn from(c: WSCollection) -> Self {
        RawCollection { n: c.n, levels: c.levels, sets: c.sets.into_iter().map(|s| s.elems().to_vec()).collect() }
    }
}

fn canonical_sort(sets: &mut [KSet]) {
    sets.sort_by(|a, b| (a.len(), a.elems()).cmp(&(b.len(), b.elems())));
}

impl WSCollection {
    /// Validates sizes, duplicates and pairwise weak separation.
    pub fn new(n: usize, mut levels: Vec<usize>, mut sets: Vec<KSet>) -> Result<Self> {
        levels.sort_unstable();
        levels.dedup();
        if levels.iter().any(|&l| l == 0 || l > n) {
            return Err(Error::Range(format!("levels must lie in [1..{n}]")));
        }
        if let Some(s) = sets.iter().find(|s| s.n() != n || !levels.contains(&s.len())) {
            return Err(Error::Precondition(format!("{s} is not a J-set")));
        }
        canonical_sort(&mut sets);
        if sets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Precondition("duplicate set in collection".into()));
        }
        let c = WSCollection { n, levels, sets };
        if let Some((a, b)) = c.first_crossing() {
            return Err(Error::Precondition(format!("{a} and {b} are not weakly separated")));
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn sets(&self) -> &[KSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: &KSet) -> bool {
        self.sets.iter().any(|s| s == set)
    }

    fn first_crossing(&self) -> Option<(&KSet, &KSet)> {
        for (i, a) in self.sets.iter().enumerate() {
            for b in &self.sets[i + 1..] {
                if !weakly_separated(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_pairwise_ws(&self) -> bool {
        self.first_crossing().is_none()
    }

    fn replace(&self, old: &KSet, new: KSet) -> WSCollection {
        let mut sets: Vec<KSet> = self.sets.iter().filter(|s| *s != old).cloned().collect();
        sets.push(new);
        canonical_sort(&mut sets);
        let c = WSCollection { n: self.n, levels: self.levels.clone(), sets };
        debug_assert!(c.is_pairwise_ws(), "move broke weak separation");
        c
    }
}

/// All subsets of `[1..n]` whose size is in `levels`.
pub fn all_j_sets(n: usize, levels: &[usize]) -> Vec<KSet> {
    let mut lv = levels.to_vec();
    lv.sort_unstable();
    lv.dedup();
    lv.into_iter().flat_map(|l| subsets_of_size(n, l)).collect()
}

/// Interval `k`-sets together with `k`-sets containing 1 that are unions of two intervals.
pub fn rectangle(n: usize, k: usize) -> Result<WSCollection> {
    if k == 0 || k >= n {
        return Err(Error::Range(format!("level {k} outside [1..{}]", n - 1)));
    }
    WSCollection::new(n, vec![k], rectangle_sets(n, k))
}

fn rectangle_sets(n: usize, k: usize) -> Vec<KSet> {
    let mut sets: Vec<KSet> = (1..=n - k + 1).map(|a| KSet::interval(n, a, a + k - 1)).collect();
    for p in 1..k {
        for q in p + 2..=n + p + 1 - k {
            sets.push(KSet::from_sorted(n, (1..=p).chain(q..q + k - p).collect()));
        }
    }
    sets
}

/// The cointerval `[1, a] ∪ [n−(s−a)+1, n]`.
fn cointerval(n: usize, s: usize, a: usize) -> KSet {
    KSet::from_sorted(n, (1..=a).chain(n - (s - a) + 1..=n).collect())
}

/// The rectangle collection at level `k` extended by interval `t`-sets for
/// `t > k` and cointerval `s`-sets for `s < k`, `s, t ∈ J`.
pub fn extended_rectangle(n: usize, levels: &[usize], k: usize) -> Result<WSCollection> {
    if !levels.contains(&k) {
        return Err(Error::Precondition(format!("level {k} not in J")));
    }
    let mut sets = rectangle(n, k)?.sets;
    for &t in levels {
        if t > k {
            sets.extend((1..=n - t + 1).map(|a| KSet::interval(n, a, a + t - 1)));
        } else if t < k {
            sets.extend((0..=t).map(|a| cointerval(n, t, a)));
        }
    }
    WSCollection::new(n, levels.to_vec(), sets)
}

/// DKK size of a maximal weakly separated collection for `J = [r, s]`.
pub fn interval_size(n: usize, r: usize, s: usize) -> usize {
    (2 * n * s + 2 - r * (r + 1) - s * (s - 1)) / 2
}

/// Whether no `J`-set outside `c` is weakly separated from all of `c`.
pub fn is_maximal(c: &WSCollection) -> bool {
    all_j_sets(c.n, &c.levels)
        .iter()
        .filter(|s| !c.contains(s))
        .all(|s| c.sets.iter().any(|t| !weakly_separated(s, t)))
}

/// `L ∪ extra` with `extra` disjoint from `L`.
fn join(l: &KSet, extra: &[usize]) -> Result<KSet> {
    l.with(extra)
}

fn cyclically_ordered(x: [usize; 4]) -> bool {
    (0..4).any(|r| (0..3).all(|t| x[(r + t) % 4] < x[(r + t + 1) % 4]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// `Lj ↦ Lik`.
    Raise,
    /// `Lik ↦ Lj`.
    Lower,
}

/// A single move on a collection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Move {
    /// Replace `Lac` by `Lbd`.
    Exchange { l: KSet, abcd: [usize; 4] },
    Flip { l: KSet, ijk: [usize; 3], dir: Direction },
}

impl Move {
    /// The set removed and the set added.
    pub fn sets(&self) -> Result<(KSet, KSet)> {
        match self {
            Move::Exchange { l, abcd: [a, b, c, d] } => Ok((join(l, &[*a, *c])?, join(l, &[*b, *d])?)),
            Move::Flip { l, ijk: [i, j, k], dir } => {
                let (lj, lik) = (join(l, &[*j])?, join(l, &[*i, *k])?);
                Ok(match dir {
                    Direction::Raise => (lj, lik),
                    Direction::Lower => (lik, lj),
                })
            }
        }
    }
}

/// Replace `Lac` by `Lbd`, requiring the witnesses `Lab, Lbc, Lcd, Lda`.
pub fn geometric_exchange(c: &WSCollection, l: &KSet, abcd: [usize; 4]) -> Result<WSCollection> {
    let [a, b, cc, d] = abcd;
    if !cyclically_ordered(abcd) {
        return Err(Error::Precondition(format!("{a},{b},{cc},{d} are not cyclically ordered")));
    }
    if abcd.iter().any(|&x| l.contains(x)) {
        return Err(Error::Precondition("exchange letters must avoid L".into()));
    }
    for pair in [[a, b], [b, cc], [cc, d], [d, a], [a, cc]] {
        let w = join(l, &pair)?;
        if !c.contains(&w) {
            return Err(Error::Precondition(format!("missing {w}")));
        }
    }
    let lac = join(l, &[a, cc])?;
    Ok(c.replace(&lac, join(l, &[b, d])?))
}

/// Raising flip `Lj ↦ Lik` or its inverse, requiring `Li, Lk, Lij, Ljk`.
pub fn flip(c: &WSCollection, l: &KSet, ijk: [usize; 3], dir: Direction) -> Result<WSCollection> {
    let [i, j, k] = ijk;
    if !(i < j && j < k) {
        return Err(Error::Precondition(format!("flip needs i < j < k, got {i},{j},{k}")));
    }
    if ijk.iter().any(|&x| l.contains(x)) {
        return Err(Error::Precondition("flip letters must avoid L".into()));
    }
    for w in [&[i][..], &[k], &[i, j], &[j, k]] {
        let w = join(l, w)?;
        if !c.contains(&w) {
            return Err(Error::Precondition(format!("missing witness {w}")));
        }
    }
    let (lj, lik) = (join(l, &[j])?, join(l, &[i, k])?);
    let (old, new) = match dir {
        Direction::Raise => (lj, lik),
        Direction::Lower => (lik, lj),
    };
    if !c.contains(&old) {
        return Err(Error::Precondition(format!("{old} is not in the collection")));
    }
    if !c.levels.contains(&new.len()) {
        return Err(Error::Precondition(format!("{new} is not a J-set")));
    }
    Ok(c.replace(&old, new))
}

pub fn apply_move(c: &WSCollection, mv: &Move) -> Result<WSCollection> {
    match mv {
        Move::Exchange { l, abcd } => geometric_exchange(c, l, *abcd),
        Move::Flip { l, ijk, dir } => flip(c, l, *ijk, *dir),
    }
}

/// Every exchange and flip applicable to `c`, in a deterministic order.
pub fn available_moves(c: &WSCollection) -> Vec<Move> {
    let n = c.n;
    let members: HashSet<&KSet> = c.sets.iter().collect();
    let has = |l: &KSet, extra: &[usize]| l.with(extra).map(|s| members.contains(&s)).unwrap_or(false);
    let outside = |x: &KSet| (1..=n).filter(|e| !x.contains(*e)).collect::<Vec<_>>();
    let mut moves = Vec::new();
    for x in &c.sets {
        let elems = x.elems();
        let free = outside(x);
        for (p, &a) in elems.iter().enumerate() {
            for &cc in &elems[p + 1..] {
                let l = x.without(a).without(cc);
                // exchanges: one of b, d strictly between a and c, the other outside
                for &b in free.iter().filter(|&&b| a < b && b < cc) {
                    for &d in free.iter().filter(|&&d| d < a || d > cc) {
                        if has(&l, &[a, b]) && has(&l, &[b, cc]) && has(&l, &[cc, d]) && has(&l, &[d, a]) {
                            moves.push(Move::Exchange { l: l.clone(), abcd: [a, b, cc, d] });
                        }
                    }
                }
                // lowering flips Lac ↦ Lj
                if c.levels.contains(&(x.len() - 1)) {
                    for &j in free.iter().filter(|&&j| a < j && j < cc) {
                        if has(&l, &[a]) && has(&l, &[cc]) && has(&l, &[a, j]) && has(&l, &[j, cc]) {
                            moves.push(Move::Flip { l: l.clone(), ijk: [a, j, cc], dir: Direction::Lower });
                        }
                    }
                }
            }
            // raising flips Lj ↦ Lik with j = a
            if c.levels.contains(&(x.len() + 1)) {
                let l = x.without(a);
                for &i in free.iter().filter(|&&i| i < a) {
                    for &k in free.iter().filter(|&&k| k > a) {
                        if has(&l, &[i]) && has(&l, &[k]) && has(&l, &[i, a]) && has(&l, &[a, k]) {
                            moves.push(Move::Flip { l: l.clone(), ijk: [i, a, k], dir: Direction::Raise });
                        }
                    }
                }
            }
        }
    }
    moves
}

/// One step of the flip schedule: the grid box and the lowering flip applied there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlipStep {
    pub row: usize,
    pub col: usize,
    pub l: KSet,
    pub ijk: [usize; 3],
}

impl FlipStep {
    pub fn as_move(&self) -> Move {
        Move::Flip { l: self.l.clone(), ijk: self.ijk, dir: Direction::Lower }
    }
}

/// Lowering flips at every box of the first `k−1` rows of the `k × (n−k)`
/// grid, bottom row first and right to left within a row. Box `(i, j)`
/// turns `[1, k−i] ∪ [k−i+j+1, k+j]` into `[1, k−i−1] ∪ [k−i+j, k+j−1]`.
pub fn flip_schedule(n: usize, levels: &[usize], k: usize) -> Result<Vec<FlipStep>> {
    if k < 2 || !levels.contains(&k) || !levels.contains(&(k - 1)) {
        return Err(Error::Precondition(format!("levels {} and {k} must both be in J", k.saturating_sub(1))));
    }
    if k >= n {
        return Err(Error::Range(format!("level {k} must be below n = {n}")));
    }
    let mut steps = Vec::new();
    for i in 1..k {
        for j in (1..=n - k).rev() {
            let l = KSet::from_sorted(n, (1..k - i).chain(k - i + j + 1..k + j).collect());
            steps.push(FlipStep { row: i, col: j, l, ijk: [k - i, k - i + j, k + j] });
        }
    }
    Ok(steps)
}

/// Runs the schedule, returning every intermediate collection (first is the start).
pub fn run_schedule(start: &WSCollection, steps: &[FlipStep]) -> Result<Vec<WSCollection>> {
    let mut out = vec![start.clone()];
    for s in steps {
        let next = apply_move(out.last().expect("nonempty"), &s.as_move())?;
        out.push(next);
    }
    Ok(out)
}

/// Breadth-first search over exchanges and flips until a collection contains
/// `target`. Returns the move path, or `None` if `depth` moves do not suffice.
pub fn reach(start: &WSCollection, target: &KSet, depth: usize, mode: Mode) -> Option<Vec<Move>> {
    if start.contains(target) {
        return Some(Vec::new());
    }
    let mut parent: HashMap<WSCollection, (WSCollection, Move)> = HashMap::new();
    let mut seen: HashSet<WSCollection> = HashSet::from([start.clone()]);
    let mut frontier = vec![start.clone()];
    for _ in 0..depth {
        let expanded: Vec<Vec<(Move, WSCollection)>> = par::map(mode, &frontier, |c| {
            available_moves(c)
                .into_iter()
                .filter_map(|mv| apply_move(c, &mv).ok().map(|next| (mv, next)))
                .collect()
        });
        let mut next_frontier = Vec::new();
        for (c, succ) in frontier.iter().zip(expanded) {
            for (mv, next) in succ {
                if !seen.insert(next.clone()) {
                    continue;
                }
                parent.insert(next.clone(), (c.clone(), mv));
                if next.contains(target) {
                    return Some(unwind(&parent, start, next));
                }
                next_frontier.push(next);
            }
        }
        if next_frontier.is_empty() {
            return None;
        }
        frontier = next_frontier;
    }
    None
}

fn unwind(parent: &HashMap<WSCollection, (WSCollection, Move)>, start: &WSCollection, end: WSCollection) -> Vec<Move> {
    let mut path = Vec::new();
    let mut cur = end;
    while &cur != start {
        let (prev, mv) = parent[&cur].clone();
        path.push(mv);
        cur = prev;
    }
    path.reverse();
    path
}
