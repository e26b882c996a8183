//! Reduced words in the symmetric group, BFZ quivers and the modules
//! `M_{i,k}` cut out of injective `Π`-modules by socle filtrations.
//!
//! A word `(i_r, …, i_1)` is stored as written, so position `k` (1-based,
//! counted from the right) is `letters[r - k]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dmod::{self, Rep, SubRep};
use crate::error::{Error, Result};
use crate::subsets::KSet;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReducedWord {
    n: usize,
    letters: Vec<usize>,
}

impl ReducedWord {
    /// A word in `σ_1, …, σ_{n-1}`; reducedness is not checked here.
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&i| i == 0 || i >= n) {
            return Err(Error::Range(format!("letter {bad} outside [1, {}]", n.saturating_sub(1))));
        }
        Ok(ReducedWord { n, letters })
    }

    pub fn empty(n: usize) -> Self {
        ReducedWord { n, letters: Vec::new() }
    }

    /// `⟨a → b⟩`: `(a, a±1, …, b)`.
    pub fn interval(n: usize, a: usize, b: usize) -> Result<Self> {
        let letters = if a <= b { (a..=b).collect() } else { (b..=a).rev().collect() };
        Self::new(n, letters)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `i_k` for `1 ≤ k ≤ r`.
    pub fn at(&self, k: usize) -> usize {
        self.letters[self.len() - k]
    }

    /// The word `self · other`, with `other` applied first.
    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        ReducedWord { n: self.n.max(other.n), letters }
    }

    /// `σ(i) = σ_{i_r} ∘ ⋯ ∘ σ_{i_1}` in one-line notation on `[1, n]`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut p: Vec<usize> = (1..=self.n).collect();
        for &i in &self.letters {
            p.swap(i - 1, i);
        }
        p
    }

    pub fn is_reduced(&self) -> bool {
        inversions(&self.permutation()) == self.len()
    }

    /// `k⁻ = max {0} ∪ {s < k : i_s = i_k}`.
    pub fn k_minus(&self, k: usize) -> usize {
        (1..k).rev().find(|&s| self.at(s) == self.at(k)).unwrap_or(0)
    }

    /// `k⁺ = min {r+1} ∪ {s > k : i_s = i_k}`.
    pub fn k_plus(&self, k: usize) -> usize {
        (k + 1..=self.len()).find(|&s| self.at(s) == self.at(k)).unwrap_or(self.len() + 1)
    }

    /// `k_j = max {0} ∪ {k : i_k = j}`.
    pub fn k_j(&self, j: usize) -> usize {
        (1..=self.len()).rev().find(|&k| self.at(k) == j).unwrap_or(0)
    }

    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::Parse(format!("letter {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, letters)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.letters.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn inversions(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
}

fn check_k(n: usize, k: &KSet) -> Result<()> {
    if k.n() != n || k.contains(n) {
        return Err(Error::Range(format!("K must be a subset of [1, {}]", n - 1)));
    }
    Ok(())
}

/// Maximal intervals `[c, d]` of `K`, in increasing order.
pub fn maximal_intervals(k: &KSet) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &x in k.elems() {
        match out.last_mut() {
            Some((_, d)) if *d + 1 == x => *d = x,
            _ => out.push((x, x)),
        }
    }
    out
}

/// `w₀ w₀^K` in one-line notation.
pub fn w0_mod_k_perm(n: usize, k: &KSet) -> Vec<usize> {
    let mut w0k: Vec<usize> = (1..=n).collect();
    for (c, d) in maximal_intervals(k) {
        w0k[c - 1..=d].reverse();
    }
    w0k.iter().map(|&x| n + 1 - x).collect()
}

/// `ℓ(w₀) − ℓ(w₀^K)`.
pub fn length_w0_mod_k(n: usize, k: &KSet) -> usize {
    let tri = |m: usize| m * (m + 1) / 2;
    tri(n - 1) - maximal_intervals(k).iter().map(|&(c, d)| tri(d - c + 1)).sum::<usize>()
}

/// A reduced word for `w₀ w₀^K` built from interval words, each adding
/// one new vertex to the support.
pub fn word_w0_mod_k(n: usize, k: &KSet) -> Result<ReducedWord> {
    check_k(n, k)?;
    let ivs = maximal_intervals(k);
    // Pieces I_1, I_2, … in the order they are applied.
    let mut pieces: Vec<ReducedWord> = Vec::new();
    if ivs.is_empty() {
        for i in 1..n {
            pieces.push(ReducedWord::interval(n, 1, i)?);
        }
        return Ok(assemble(n, &pieces));
    }
    let (cr, dr) = *ivs.last().expect("nonempty");
    for j in 1..n - dr {
        pieces.push(ReducedWord::interval(n, cr, dr + j)?);
    }
    for i in (1..ivs.len()).rev() {
        let (ci, _) = ivs[i];
        let (cp, dp) = ivs[i - 1];
        for j in 1..=ci - dp - 2 {
            pieces.push(ReducedWord::interval(n, n - 1, ci - j)?);
        }
        for j in 1..=dp + 2 - cp {
            pieces.push(ReducedWord::interval(n, n - j, dp + 2 - j)?);
        }
    }
    let c1 = ivs[0].0;
    for j in 1..c1 {
        pieces.push(ReducedWord::interval(n, n - 1, c1 - j)?);
    }
    Ok(assemble(n, &pieces))
}

fn assemble(n: usize, pieces: &[ReducedWord]) -> ReducedWord {
    pieces.iter().rev().fold(ReducedWord::empty(n), |acc, p| acc.concat(p))
}

impl ReducedWord {
    fn reversed(&self) -> ReducedWord {
        ReducedWord { n: self.n, letters: self.letters.iter().rev().copied().collect() }
    }

    fn shifted(&self, n: usize, off: usize) -> ReducedWord {
        ReducedWord { n, letters: self.letters.iter().map(|i| i + off).collect() }
    }
}

/// A reduced word `w` with `w₀w₀^K = σ(w) · w₀w₀^{K ∪ {j}}`.
pub fn factor_step(n: usize, k: &KSet, j: usize) -> Result<ReducedWord> {
    check_k(n, k)?;
    if j == 0 || j >= n || k.contains(j) {
        return Err(Error::Precondition(format!("{j} must lie in [1, {}] \\ K", n - 1)));
    }
    let ivs = maximal_intervals(k);
    let left = ivs.iter().find(|&&(_, b)| b + 1 == j).copied();
    let right = ivs.iter().find(|&&(a, _)| a == j + 1).copied();
    match (left, right) {
        (Some((a, _)), Some((_, d))) => {
            let off = n - d - 1;
            let m = d - a + 2;
            let inner: Vec<usize> = (n - d..=n - a).filter(|&x| x != n - j).map(|x| x - off).collect();
            Ok(word_w0_mod_k(m, &KSet::new(m, inner)?)?.reversed().shifted(n, off))
        }
        (Some((a, b)), None) => ReducedWord::interval(n, n - b - 1, n - a),
        (None, Some((a, b))) => ReducedWord::interval(n, n - a + 1, n - b),
        (None, None) => ReducedWord::new(n, vec![n - j]),
    }
}

/// Pieces `i_1, …, i_{m}` with `i_s` the factor step adding `order[s-1]`
/// and the last piece the constructed word for the final `K`.
pub fn factor_chain(n: usize, k: &KSet, order: &[usize]) -> Result<Vec<ReducedWord>> {
    let mut cur = k.clone();
    let mut out = Vec::new();
    for &t in order {
        out.push(factor_step(n, &cur, t)?);
        cur = cur.with(&[t])?;
    }
    out.push(word_w0_mod_k(n, &cur)?);
    Ok(out)
}

/// The BFZ quiver `Γ_i` on vertices `1..=r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfzQuiver {
    pub r: usize,
    /// Arrows `(s, t)`, listed with multiplicity.
    pub edges: Vec<(usize, usize)>,
    /// `mutable[k-1]` iff `k⁺ ≤ r`.
    pub mutable: Vec<bool>,
}

impl BfzQuiver {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph bfz {\n");
        for k in 1..=self.r {
            let shape = if self.mutable[k - 1] { "circle" } else { "box" };
            s.push_str(&format!("  {k} [shape={shape}];\n"));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  {a} -> {b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn bfz_quiver(word: &ReducedWord) -> Result<BfzQuiver> {
    if !word.is_reduced() {
        return Err(Error::Precondition(format!("{word} is not reduced")));
    }
    let r = word.len();
    let mut edges = Vec::new();
    for s in 1..=r {
        let sm = word.k_minus(s);
        if sm > 0 {
            edges.push((s, sm));
        }
        let sp = word.k_plus(s);
        for t in s + 1..sp {
            let (a, b) = (word.at(s), word.at(t));
            if a.abs_diff(b) == 1 && sp <= word.k_plus(t) {
                edges.push((s, t));
            }
        }
    }
    let mutable = (1..=r).map(|k| word.k_plus(k) <= r).collect();
    Ok(BfzQuiver { r, edges, mutable })
}

/// For each split `i = i″ i′` along the pieces, whether the mutable
/// vertices of `Γ_{i′}` avoid every vertex outside it.
pub fn isolation_report(pieces: &[ReducedWord]) -> Result<Vec<bool>> {
    let n = pieces.iter().map(ReducedWord::n).max().unwrap_or(0);
    let full = assemble(n, &pieces.iter().rev().cloned().collect::<Vec<_>>());
    let q = bfz_quiver(&full)?;
    (1..pieces.len())
        .map(|j| {
            let suffix = assemble(n, &pieces[j..].iter().rev().cloned().collect::<Vec<_>>());
            let sub = bfz_quiver(&suffix)?;
            let rs = suffix.len();
            Ok(q.edges.iter().all(|&(a, b)| {
                let crosses = |x: usize, y: usize| x <= rs && sub.mutable[x - 1] && y > rs;
                !crosses(a, b) && !crosses(b, a)
            }))
        })
        .collect()
}

/// `s_i(v) = v − (Cv)_i α_i` on vectors indexed by `1..n-1`.
fn reflect(v: &mut [i64], i: usize) {
    let get = |j: usize| if j == 0 || j > v.len() { 0 } else { v[j - 1] };
    let ci = 2 * get(i) - get(i - 1) - get(i + 1);
    v[i - 1] -= ci;
}

/// `β_k = s_{i_1} ⋯ s_{i_{k-1}}(α_{i_k})`.
pub fn beta_roots(word: &ReducedWord) -> Vec<Vec<i64>> {
    let n = word.n();
    (1..=word.len())
        .map(|k| {
            let mut v = vec![0; n - 1];
            v[word.at(k) - 1] = 1;
            for s in (1..k).rev() {
                reflect(&mut v, word.at(s));
            }
            v
        })
        .collect()
}

/// The injective modules `R_j` and the submodules `V_k ⊆ R_{i_k}`.
pub struct SocleFiltration {
    pub injectives: Vec<Rep>,
    pub v: Vec<SubRep>,
}

pub fn socle_filtration(word: &ReducedWord) -> SocleFiltration {
    let n = word.n();
    let injectives: Vec<Rep> = (0..n).map(|j| if j == 0 { Rep::zero(dmod::Algebra::Pi, n) } else { dmod::pi_injective(n, j) }).collect();
    let r = word.len();
    let v = (1..=r).map(|k| dmod::iterated_socle(&injectives[word.at(k)], &word.letters()[r - k..])).collect();
    SocleFiltration { injectives, v }
}

impl SocleFiltration {
    /// `V_{k⁻}` as a submodule of `R_{i_k}`.
    fn v_minus(&self, word: &ReducedWord, k: usize) -> SubRep {
        match word.k_minus(k) {
            0 => SubRep::zero(&self.injectives[word.at(k)]),
            km => self.v[km - 1].clone(),
        }
    }

    /// `M_k = V_k / V_{k⁻}`.
    pub fn m_module(&self, word: &ReducedWord, k: usize) -> Result<Rep> {
        let r = &self.injectives[word.at(k)];
        dmod::subquotient(r, &self.v[k - 1], &self.v_minus(word, k))
    }

    pub fn is_monotone(&self, word: &ReducedWord) -> bool {
        (1..=word.len()).all(|k| self.v_minus(word, k).is_contained_in(&self.v[k - 1]))
    }
}

/// `dim V_k − dim V_{k⁻}` restricted to the vertices `1..n-1`.
pub fn beta_from_socles(word: &ReducedWord) -> Vec<Vec<i64>> {
    let filt = socle_filtration(word);
    (1..=word.len())
        .map(|k| {
            let hi = filt.v[k - 1].dims();
            let lo = filt.v_minus(word, k).dims();
            (1..word.n()).map(|v| hi[v] as i64 - lo[v] as i64).collect()
        })
        .collect()
}

/// Top multiplicities of every `M_k`.
pub fn tops(word: &ReducedWord) -> Result<Vec<Vec<usize>>> {
    let filt = socle_filtration(word);
    (1..=word.len()).map(|k| Ok(dmod::top_parts(&filt.m_module(word, k)?)[1..].to_vec())).collect()
}

/// Whether every `M_k` has a simple top.
pub fn check_simple_top(word: &ReducedWord) -> Result<bool> {
    Ok(tops(word)?.iter().all(|t| t.iter().sum::<usize>() == 1))
}
