//! The quantum matrix algebra `C_q[M_{n×n}]` in PBW normal form, quantum
//! minors, the bar anti-involution and the minor identities used as an
//! independent check on the combinatorics.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::Laurent;
use crate::subsets::KSet;

/// Generator `x_{ij}` as `(i, j)`, 1-based.
pub type Gen = (usize, usize);

/// A word in the generators; normal words are sorted ascending.
pub type Word = Vec<Gen>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatPoly {
    n: usize,
    terms: BTreeMap<Word, Laurent>,
}

thread_local! {
    static NF_CACHE: RefCell<HashMap<Word, Vec<(Word, Laurent)>>> = RefCell::new(HashMap::new());
}

/// Normal form of an arbitrary word, memoized per thread.
fn nf_word(word: &[Gen]) -> Vec<(Word, Laurent)> {
    let Some(p) = word.windows(2).position(|w| w[0] > w[1]) else {
        return vec![(word.to_vec(), Laurent::one())];
    };
    if let Some(hit) = NF_CACHE.with(|c| c.borrow().get(word).cloned()) {
        return hit;
    }
    let (st, ij) = (word[p], word[p + 1]);
    let ((i, j), (s, t)) = (ij, st);
    let splice = |a: Gen, b: Gen| {
        let mut w = word.to_vec();
        w[p] = a;
        w[p + 1] = b;
        w
    };
    // x_st x_ij with (i, j) < (s, t)
    let rewrites: Vec<(Word, Laurent)> = if i == s || j == t {
        vec![(splice(ij, st), Laurent::monomial(-1, 1))]
    } else if j > t {
        vec![(splice(ij, st), Laurent::one())]
    } else {
        let q_minus = Laurent::monomial(1, -1).add(&Laurent::monomial(-1, 1));
        vec![(splice(ij, st), Laurent::one()), (splice((i, t), (s, j)), q_minus)]
    };
    let mut acc: BTreeMap<Word, Laurent> = BTreeMap::new();
    for (w, c) in rewrites {
        for (nw, nc) in nf_word(&w) {
            acc.entry(nw).or_default().add_assign(&c.mul(&nc));
        }
    }
    let out: Vec<(Word, Laurent)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    NF_CACHE.with(|c| c.borrow_mut().insert(word.to_vec(), out.clone()));
    out
}

impl QMatPoly {
    pub fn zero(n: usize) -> Self {
        QMatPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        QMatPoly::scalar(n, Laurent::one())
    }

    pub fn scalar(n: usize, c: Laurent) -> Self {
        let mut p = QMatPoly::zero(n);
        p.add_word(Vec::new(), &c);
        p
    }

    pub fn generator(n: usize, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Range(format!("x[{i},{j}] outside a {n}×{n} matrix")));
        }
        let mut p = QMatPoly::zero(n);
        p.add_word(vec![(i, j)], &Laurent::one());
        Ok(p)
    }

    /// The normal form of an arbitrary word with coefficient `c`.
    pub fn from_word(n: usize, word: &[Gen], c: &Laurent) -> Self {
        let mut p = QMatPoly::zero(n);
        p.add_word(word.to_vec(), c);
        p
    }

    fn add_word(&mut self, word: Word, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        for (w, k) in nf_word(&word) {
            let slot = self.terms.entry(w.clone()).or_default();
            slot.add_assign(&c.mul(&k));
            if slot.is_zero() {
                self.terms.remove(&w);
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Word, Laurent> {
        &self.terms
    }

    pub fn add(&self, other: &QMatPoly) -> QMatPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let slot = out.terms.entry(w.clone()).or_default();
            slot.add_assign(c);
            if slot.is_zero() {
                out.terms.remove(w);
            }
        }
        out
    }

    pub fn scale(&self, c: &Laurent) -> QMatPoly {
        let terms = self
            .terms
            .iter()
            .map(|(w, x)| (w.clone(), x.mul(c)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        QMatPoly { n: self.n, terms }
    }

    pub fn sub(&self, other: &QMatPoly) -> QMatPoly {
        self.add(&other.scale(&Laurent::monomial(0, -1)))
    }

    /// Product in normal form.
    pub fn mul(&self, other: &QMatPoly) -> QMatPoly {
        let mut out = QMatPoly::zero(self.n);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_word(w, &a.mul(b));
            }
        }
        out
    }

    /// The bar involution: `q ↦ q^{-1}`, each `x_ij` fixed, and
    /// `bar(xy) = q^{tw(x, y)} bar(y) bar(x)` on homogeneous elements.
    pub fn bar(&self) -> QMatPoly {
        let mut out = QMatPoly::zero(self.n);
        for (w, c) in &self.terms {
            let rev: Word = w.iter().rev().copied().collect();
            let inner: i64 = (0..w.len()).flat_map(|a| (a + 1..w.len()).map(move |b| (a, b))).map(|(a, b)| pair_twist(w[a], w[b])).sum();
            out.add_word(rev, &c.invert_variable().shift(inner));
        }
        out
    }
}

fn pair_twist(a: Gen, b: Gen) -> i64 {
    (a.0 == b.0) as i64 - (a.1 == b.1) as i64
}

/// `tw(u, v)`: shared row indices minus shared column indices, counted with
/// multiplicity. Normal forms preserve row and column content, so this is
/// well defined on homogeneous elements.
pub fn twist(u: &[Gen], v: &[Gen]) -> i64 {
    u.iter().flat_map(|&a| v.iter().map(move |&b| pair_twist(a, b))).sum()
}

impl fmt::Display for QMatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let mono: String = w.iter().map(|(i, j)| format!("x[{i},{j}]")).collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono };
                format!("({c}){mono}")
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `(−q)^{ℓ(σ)}`-weighted sum over permutations, rows `1..r`, columns `I`.
pub fn quantum_minor(set: &KSet) -> QMatPoly {
    let n = set.n();
    let cols = set.elems();
    let r = cols.len();
    let mut out = QMatPoly::zero(n);
    let mut perm: Vec<usize> = (0..r).collect();
    loop {
        let inversions = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
        let word: Word = (0..r).map(|row| (row + 1, cols[perm[row]])).collect();
        out.add_word(word, &Laurent::neg_power(inversions as i64));
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `m` with `xy = q^m yx`, if the two elements quasi-commute.
pub fn quasi_commutes(x: &QMatPoly, y: &QMatPoly) -> Option<i64> {
    let xy = x.mul(y);
    let yx = y.mul(x);
    if yx.is_zero() {
        return xy.is_zero().then_some(0);
    }
    let (w, c) = yx.terms.iter().next().expect("nonzero");
    let d = xy.terms.get(w)?;
    let m = d.terms().next()?.0 - c.terms().next()?.0;
    if *d != c.shift(m) {
        return None;
    }
    (xy == yx.scale(&Laurent::monomial(m, 1))).then_some(m)
}

/// `inv(I, J) = |{(i, j) ∈ I × J : i > j}|`.
pub fn inv(a: &KSet, b: &KSet) -> i64 {
    a.elems().iter().map(|&i| b.elems().iter().filter(|&&j| i > j).count() as i64).sum()
}

/// Identities between products of quantum minors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Identity {
    /// `Δ_I Δ_J = q^m Δ_J Δ_I` for the given `m`.
    QuasiComm { i: KSet, j: KSet, m: i64 },
    /// The straightening relation for `|I| ≤ |J|`.
    LzRel1 { i: KSet, j: KSet },
    /// The vanishing relation for `|I| − 1 ≥ |J| + 1`.
    LzRel { i: KSet, j: KSet },
    /// `Δ_{Lac}Δ_{Lbd} = q^{-1}Δ_{Lab}Δ_{Lcd} + qΔ_{Lbc}Δ_{Lad}` with `a<b<c<d`.
    Plucker { l: KSet, abcd: [usize; 4] },
    /// `Δ_{Lac}Δ_{Lb} = q^{-1}Δ_{Lab}Δ_{Lc} + qΔ_{Lbc}Δ_{La}` with `a<b<c`.
    Incidence { l: KSet, abc: [usize; 3] },
    /// `bar(Δ_I Δ_J) = q^{d(I,J)} Δ_J Δ_I`.
    BarProd { i: KSet, j: KSet },
}

/// Both sides of an identity in normal form.
pub fn identity_sides(id: &Identity) -> Result<(QMatPoly, QMatPoly)> {
    let minor = quantum_minor;
    let q = |e: i64| Laurent::monomial(e, 1);
    match id {
        Identity::QuasiComm { i, j, m } => {
            let (a, b) = (minor(i), minor(j));
            Ok((a.mul(&b), b.mul(&a).scale(&q(*m))))
        }
        Identity::LzRel1 { i, j } => {
            if i.len() > j.len() {
                return Err(Error::Precondition("LZ straightening needs |I| ≤ |J|".into()));
            }
            let lhs = minor(i).mul(&minor(j));
            let pool = j.difference(i);
            let mut rhs = QMatPoly::zero(i.n());
            for l in crate::subsets::subsets_of_size(pool.len(), j.len() - i.len()) {
                let l = KSet::new(i.n(), l.elems().iter().map(|&x| pool.elems()[x - 1]).collect())?;
                let jl = j.difference(&l);
                let e = inv(i, &l) - inv(&jl, &l);
                rhs = rhs.add(&minor(&i.union(&l)).mul(&minor(&jl)).scale(&Laurent::neg_power(e)));
            }
            Ok((lhs, rhs))
        }
        Identity::LzRel { i, j } => {
            if i.len() < j.len() + 2 {
                return Err(Error::Precondition("LZ vanishing relation needs |I| − 1 ≥ |J| + 1".into()));
            }
            let mut lhs = QMatPoly::zero(i.n());
            for &x in i.difference(j).elems() {
                let sx = KSet::new(i.n(), vec![x])?;
                let e = inv(&sx, j) - inv(&sx, &i.without(x));
                lhs = lhs.add(&minor(&i.without(x)).mul(&minor(&j.with(&[x])?)).scale(&Laurent::neg_power(e)));
            }
            Ok((lhs, QMatPoly::zero(i.n())))
        }
        Identity::Plucker { l, abcd: [a, b, c, d] } => {
            if !(a < b && b < c && c < d) {
                return Err(Error::Precondition("Plücker relation needs a < b < c < d".into()));
            }
            let s = |x: &[usize]| l.with(x).map(|k| minor(&k));
            let lhs = s(&[*a, *c])?.mul(&s(&[*b, *d])?);
            let rhs = s(&[*a, *b])?.mul(&s(&[*c, *d])?).scale(&q(-1)).add(&s(&[*b, *c])?.mul(&s(&[*a, *d])?).scale(&q(1)));
            Ok((lhs, rhs))
        }
        Identity::Incidence { l, abc: [a, b, c] } => {
            if !(a < b && b < c) {
                return Err(Error::Precondition("incidence relation needs a < b < c".into()));
            }
            let s = |x: &[usize]| l.with(x).map(|k| minor(&k));
            let lhs = s(&[*a, *c])?.mul(&s(&[*b])?);
            let rhs = s(&[*a, *b])?.mul(&s(&[*c])?).scale(&q(-1)).add(&s(&[*b, *c])?.mul(&s(&[*a])?).scale(&q(1)));
            Ok((lhs, rhs))
        }
        Identity::BarProd { i, j } => {
            let (a, b) = (minor(i), minor(j));
            let d = crate::subsets::d_exponent(i, j);
            Ok((a.mul(&b).bar(), b.mul(&a).scale(&q(d))))
        }
    }
}

pub fn verify_identity(id: &Identity) -> Result<bool> {
    let (l, r) = identity_sides(id)?;
    Ok(l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::{self, nonempty_subsets};
    use proptest::prelude::*;

    fn ks(n: usize, e: &[usize]) -> KSet {
        KSet::new(n, e.to_vec()).unwrap()
    }

    fn x(n: usize, i: usize, j: usize) -> QMatPoly {
        QMatPoly::generator(n, i, j).unwrap()
    }

    #[test]
    fn rewrite_examples() {
        let n = 2;
        assert_eq!(x(n, 1, 2).mul(&x(n, 1, 1)), x(n, 1, 1).mul(&x(n, 1, 2)).scale(&Laurent::monomial(-1, 1)));
        let lhs = x(n, 2, 2).mul(&x(n, 1, 1));
        let q_minus = Laurent::monomial(1, 1).sub(&Laurent::monomial(-1, 1));
        let rhs = QMatPoly::from_word(n, &[(1, 1), (2, 2)], &Laurent::one())
            .sub(&QMatPoly::from_word(n, &[(1, 2), (2, 1)], &q_minus));
        assert_eq!(lhs, rhs);
        assert_eq!(QMatPoly::one(n).mul(&x(n, 2, 1)), x(n, 2, 1));
    }

    #[test]
    fn minor_examples() {
        assert_eq!(quantum_minor(&ks(3, &[2])), x(3, 1, 2));
        let d12 = quantum_minor(&ks(3, &[1, 2]));
        let want = QMatPoly::from_word(3, &[(1, 1), (2, 2)], &Laurent::one())
            .sub(&QMatPoly::from_word(3, &[(1, 2), (2, 1)], &Laurent::monomial(1, 1)));
        assert_eq!(d12, want);
        for s in nonempty_subsets(4) {
            let m = quantum_minor(&s);
            assert_eq!(m.bar(), m, "{s}");
        }
    }

    #[test]
    fn bar_examples() {
        let p = x(2, 1, 1).scale(&Laurent::monomial(1, 1));
        assert_eq!(p.bar(), x(2, 1, 1).scale(&Laurent::monomial(-1, 1)));
        let y = x(2, 2, 2).mul(&x(2, 1, 1)).add(&x(2, 1, 2).scale(&Laurent::monomial(3, 2)));
        assert_eq!(y.bar().bar(), y);
    }

    #[test]
    fn bar_respects_relations() {
        // bar of a normal form agrees with bar applied to the raw word
        let n = 2;
        let gens: Vec<Gen> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
        for a in &gens {
            for b in &gens {
                for c in &gens {
                    let w = vec![*a, *b, *c];
                    let rev: Word = w.iter().rev().copied().collect();
                    let tw = twist(&[*a], &[*b]) + twist(&[*a, *b], &[*c]);
                    let lhs = QMatPoly::from_word(n, &w, &Laurent::one()).bar();
                    assert_eq!(lhs, QMatPoly::from_word(n, &rev, &Laurent::monomial(tw, 1)));
                }
            }
        }
    }

    #[test]
    fn identity_examples() {
        let n = 4;
        assert!(verify_identity(&Identity::QuasiComm { i: ks(n, &[1, 2]), j: ks(n, &[2, 3]), m: 1 }).unwrap());
        assert!(verify_identity(&Identity::Plucker { l: KSet::empty(n), abcd: [1, 2, 3, 4] }).unwrap());
        assert!(verify_identity(&Identity::Incidence { l: KSet::empty(n), abc: [1, 2, 3] }).unwrap());
        assert!(verify_identity(&Identity::BarProd { i: ks(n, &[1, 3]), j: ks(n, &[2, 4]) }).unwrap());
        assert!(verify_identity(&Identity::LzRel1 { i: ks(n, &[2]), j: ks(n, &[1, 3]) }).unwrap());
        assert!(verify_identity(&Identity::LzRel { i: ks(n, &[1, 2, 3]), j: ks(n, &[4]) }).unwrap());
        assert!(identity_sides(&Identity::Plucker { l: KSet::empty(n), abcd: [2, 1, 3, 4] }).is_err());
        assert!(identity_sides(&Identity::LzRel1 { i: ks(n, &[1, 2]), j: ks(n, &[3]) }).is_err());
    }

    #[test]
    fn quasi_commutation_n3() {
        let n = 3;
        for a in nonempty_subsets(n) {
            for b in nonempty_subsets(n) {
                let m = quasi_commutes(&quantum_minor(&a), &quantum_minor(&b));
                if subsets::weakly_separated(&a, &b) {
                    assert_eq!(m, Some(subsets::c_exponent(&a, &b).unwrap()), "{a} {b}");
                } else {
                    assert_eq!(m, None, "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn bar_criterion_n3() {
        let n = 3;
        for a in nonempty_subsets(n) {
            for b in nonempty_subsets(n) {
                assert!(verify_identity(&Identity::BarProd { i: a.clone(), j: b.clone() }).unwrap());
                if a.len() < b.len() || !subsets::weakly_separated(&a, &b) {
                    continue;
                }
                let prod = quantum_minor(&b).mul(&quantum_minor(&a));
                let invariant = prod.bar() == prod;
                assert_eq!(invariant, subsets::dim_ext_d(&a, &b).unwrap() == 0, "{a} {b}");
            }
        }
    }

    fn arb_word(n: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec((1..=n, 1..=n), 0..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn multiplication_is_associative(a in arb_word(3), b in arb_word(3), c in arb_word(3)) {
            let n = 3;
            let (x, y, z) = (
                QMatPoly::from_word(n, &a, &Laurent::one()),
                QMatPoly::from_word(n, &b, &Laurent::one()),
                QMatPoly::from_word(n, &c, &Laurent::one()),
            );
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn bar_is_anti_multiplicative(a in arb_word(3), b in arb_word(3)) {
            let n = 3;
            let x = QMatPoly::from_word(n, &a, &Laurent::monomial(1, 1));
            let y = QMatPoly::from_word(n, &b, &Laurent::monomial(-2, 3));
            let tw = Laurent::monomial(twist(&a, &b), 1);
            prop_assert_eq!(x.mul(&y).bar(), y.bar().mul(&x.bar()).scale(&tw));
        }
    }
}
