//! The fourteen acceptance checks, runnable from the CLI and from tests.

use std::time::Instant;

use qflag::collections::{self, available_moves, extended_rectangle, flip_schedule, rectangle, run_schedule, Move};
use qflag::dmod::{self, Algebra, Rep};
use qflag::lattices;
use qflag::linalg::Mat;
use qflag::par::{self, Mode};
use qflag::qcluster;
use qflag::qmatrix::{self, quantum_minor, verify_identity, Identity};
use qflag::seeds::{self, seed_from_collection};
use qflag::subsets::{self, nonempty_subsets, subsets_of_size, KSet};
use qflag::weyl::{self, ReducedWord};
use serde::Serialize;

pub const TITLES: [&str; 14] = [
    "Hom oracle equivalence",
    "weak separation vs ext",
    "quasi-commutation exponents",
    "strong separation and bar criterion",
    "LZ quasi-commutation in the quantum matrix algebra",
    "quantum Plücker and incidence identities",
    "collection sizes",
    "compatibility of extended rectangle seeds",
    "mutation consistency",
    "flip schedule",
    "quantum torus exchange",
    "fixture lift X",
    "reduced words and BFZ quivers",
    "beta roots by two methods",
];

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub failures: Vec<String>,
    pub millis: u128,
}

impl Outcome {
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{status}] {:>2}. {} ({} checks, {} ms)", self.id, self.title, self.checked, self.millis);
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(": {f}"));
            if self.failures.len() > 1 {
                s.push_str(&format!(" (+{} more)", self.failures.len() - 1));
            }
        }
        s
    }
}

/// Tally of individual checks.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }

    fn absorb(&mut self, r: qflag::Result<Tally>, ctx: &str) {
        match r {
            Ok(t) => self.merge(t),
            Err(e) => {
                self.checked += 1;
                self.failures.push(format!("{ctx}: {e}"));
            }
        }
    }
}

fn pairs(n: usize) -> Vec<(KSet, KSet)> {
    let sets = nonempty_subsets(n);
    sets.iter().flat_map(|a| sets.iter().map(move |b| (a.clone(), b.clone()))).collect()
}

fn sweep<T: Sync>(mode: Mode, items: &[T], f: impl Fn(&T) -> qflag::Result<Tally> + Sync + Send) -> Tally {
    let mut out = Tally::default();
    for r in par::map(mode, items, f) {
        out.absorb(r, "error");
    }
    out
}

fn intervals(n: usize) -> Vec<Vec<usize>> {
    (1..n).flat_map(|r| (r..n).map(move |s| (r..=s).collect())).collect()
}

fn c1(mode: Mode) -> Tally {
    let mut t = Tally::default();
    for n in 3..=6 {
        let modules: Vec<Rep> =
            nonempty_subsets(n).iter().map(|s| dmod::build_rank_one(n, s).expect("rank one")).collect();
        let sets = nonempty_subsets(n);
        let idx: Vec<(usize, usize)> = (0..sets.len()).flat_map(|a| (0..sets.len()).map(move |b| (a, b))).collect();
        t.merge(sweep(mode, &idx, |&(a, b)| {
            let mut t = Tally::default();
            let got = dmod::hom_space(&modules[a], &modules[b])?.dim();
            let want = subsets::dim_hom(&sets[a], &sets[b])?;
            t.check(got == want, || format!("n={n} Hom({},{}) = {got}, formula {want}", sets[a], sets[b]));
            Ok(t)
        }));
    }
    t
}

fn c2(mode: Mode) -> Tally {
    let mut t = Tally::default();
    for n in 1..=7 {
        t.merge(sweep(mode, &pairs(n), |(a, b)| {
            let mut t = Tally::default();
            let ws = subsets::weakly_separated(a, b);
            let ext = subsets::dim_ext_e(a, b)?;
            t.check(ws == (ext == 0), || format!("{a} {b}: ws={ws} ext_E={ext}"));
            Ok(t)
        }));
    }
    t
}

fn c3(mode: Mode) -> Tally {
    let mut t = Tally::default();
    for n in 1..=7 {
        t.merge(sweep(mode, &pairs(n), |(a, b)| {
            let mut t = Tally::default();
            if !subsets::weakly_separated(a, b) {
                return Ok(t);
            }
            let c = subsets::c_exponent(a, b)?;
            let h = subsets::dim_hom(a, b)? as i64 - subsets::dim_hom(b, a)? as i64;
            let e = subsets::dim_ext_d(a, b)? as i64 - subsets::dim_ext_d(b, a)? as i64;
            t.check(c == h && h == e, || format!("{a} {b}: c={c} hom={h} ext={e}"));
            Ok(t)
        }));
    }
    t
}

fn bar_pair(a: &KSet, b: &KSet) -> qflag::Result<Tally> {
    let mut t = Tally::default();
    if a.len() < b.len() || !subsets::weakly_separated(a, b) {
        return Ok(t);
    }
    let (da, db) = (quantum_minor(a), quantum_minor(b));
    let ab = da.mul(&db);
    let ba = db.mul(&da);
    let inv_ab = ab.bar() == ab;
    let inv_ba = ba.bar() == ba;
    t.check(inv_ab == (subsets::dim_ext_d(b, a)? == 0), || format!("bar(Δ{a}Δ{b}) invariant={inv_ab}"));
    t.check(inv_ba == (subsets::dim_ext_d(a, b)? == 0), || format!("bar(Δ{b}Δ{a}) invariant={inv_ba}"));
    t.check(verify_identity(&Identity::BarProd { i: a.clone(), j: b.clone() })?, || format!("bar product {a} {b}"));
    Ok(t)
}

fn c4(mode: Mode) -> Tally {
    let mut t = Tally::default();
    for n in 1..=7 {
        t.merge(sweep(mode, &pairs(n), |(a, b)| {
            let mut t = Tally::default();
            let ss = subsets::strongly_separated(a, b);
            let one_sided = subsets::dim_ext_d(a, b)? == 0 || subsets::dim_ext_d(b, a)? == 0;
            t.check(ss == one_sided, || format!("{a} {b}: strong={ss} one-sided={one_sided}"));
            Ok(t)
        }));
    }
    for n in 1..=4 {
        t.merge(sweep(mode, &pairs(n), |(a, b)| bar_pair(a, b)));
    }
    let sampled: Vec<(KSet, KSet)> = pairs(5).into_iter().filter(|(a, b)| a.len() + b.len() <= 6).step_by(3).collect();
    t.merge(sweep(mode, &sampled, |(a, b)| bar_pair(a, b)));
    t
}

fn c5(mode: Mode) -> Tally {
    let mut t = Tally::default();
    for n in 1..=4 {
        let small: Vec<(KSet, KSet)> = pairs(n).into_iter().filter(|(a, b)| a.len() <= 3 && b.len() <= 3).collect();
        t.merge(sweep(mode, &small, |(a, b)| {
            let mut t = Tally::default();
            let qc = qmatrix::quasi_commutes(&quantum_minor(a), &quantum_minor(b));
            if subsets::weakly_separated(a, b) {
                let c = subsets::c_exponent(a, b)?;
                t.check(qc == Some(c), || format!("Δ{a}Δ{b}: expected q^{c}, got {qc:?}"));
            } else {
                t.check(qc.is_none(), || format!("Δ{a}Δ{b} quasi-commute ({qc:?}) but are not weakly separated"));
            }
            Ok(t)
        }));
    }
    t
}

/// All `(L, a<b<c<d)` and `(L, a<b<c)` with `L` disjoint from the letters and `|L| ≤ 2`.
pub fn plucker_instances(n: usize) -> Vec<Identity> {
    let mut out = Vec::new();
    for size in 0..=2 {
        for l in subsets_of_size(n, size) {
            let free: Vec<usize> = (1..=n).filter(|x| !l.contains(*x)).collect();
            for q in subsets_of_size(free.len(), 4) {
                let e = q.elems();
                let abcd = [free[e[0] - 1], free[e[1] - 1], free[e[2] - 1], free[e[3] - 1]];
                out.push(Identity::Plucker { l: l.clone(), abcd });
            }
            for q in subsets_of_size(free.len(), 3) {
                let e = q.elems();
                let abc = [free[e[0] - 1], free[e[1] - 1], free[e[2] - 1]];
                out.push(Identity::Incidence { l: l.clone(), abc });
            }
        }
    }
    out
}

fn c6(mode: Mode) -> Tally {
    let mut t = Tally::default();
    for n in [4, 5] {
        t.merge(sweep(mode, &plucker_instances(n), |id| {
            let mut t = Tally::default();
            t.check(verify_identity(id)?, || format!("{id:?}"));
            Ok(t)
        }));
    }
    t
}

fn c7() -> Tally {
    let mut t = Tally::default();
    for n in 2..=9 {
        for k in 1..n {
            let r = rectangle(n, k).map(|c| c.len());
            t.check(r.as_ref().ok() == Some(&(k * (n - k) + 1)), || format!("rectangle({n},{k}) has {r:?} sets"));
        }
        for (r, s) in (1..n).flat_map(|r| (r..n).map(move |s| (r, s))) {
            let levels: Vec<usize> = (r..=s).collect();
            let want = (2 * n * s + 2 - r * (r + 1) - s * (s - 1)) / 2;
            t.check(collections::interval_size(n, r, s) == want, || format!("interval_size({n},{r},{s})"));
            for k in r..=s {
                let got = extended_rectangle(n, &levels, k).map(|c| c.len());
                t.check(got.as_ref().ok() == Some(&want), || format!("extended({n},[{r},{s}],{k}) has {got:?}, want {want}"));
            }
        }
    }
    t
}

fn c8(mode: Mode) -> Tally {
    let cases: Vec<(usize, Vec<usize>, usize)> = (2..=7)
        .flat_map(|n| intervals(n).into_iter().flat_map(move |j| j.clone().into_iter().map(move |k| (n, j.clone(), k))))
        .collect();
    sweep(mode, &cases, |(n, j, k)| {
        let mut t = Tally::default();
        let seed = seed_from_collection(&extended_rectangle(*n, j, *k)?, Mode::Sequential)?;
        t.check(seed.is_compatible(), || format!("n={n} J={j:?} k={k}"));
        Ok(t)
    })
}

fn c9(mode: Mode) -> Tally {
    let cases: Vec<(usize, Vec<usize>, usize)> = (2..=6)
        .flat_map(|n| intervals(n).into_iter().flat_map(move |j| j.clone().into_iter().map(move |k| (n, j.clone(), k))))
        .collect();
    sweep(mode, &cases, |(n, j, k)| {
        let mut t = Tally::default();
        let c = extended_rectangle(*n, j, *k)?;
        let seed = seed_from_collection(&c, Mode::Sequential)?;
        for mv in available_moves(&c) {
            if !matches!(mv, Move::Exchange { .. }) {
                continue;
            }
            let (out, _) = mv.sets()?;
            let Some(idx) = seed.index_of(&out) else { continue };
            let mutated = seeds::mutate(&seed, idx)?;
            let fresh = seed_from_collection(&collections::apply_move(&c, &mv)?, Mode::Sequential)?;
            t.check(mutated.same_data(&fresh), || format!("n={n} J={j:?} k={k} {mv:?}"));
        }
        Ok(t)
    })
}

fn c10(mode: Mode) -> Tally {
    let cases: Vec<(usize, Vec<usize>, usize)> = (3..=8)
        .flat_map(|n| {
            intervals(n).into_iter().flat_map(move |j| j.clone().into_iter().skip(1).map(move |k| (n, j.clone(), k)))
        })
        .collect();
    sweep(mode, &cases, |(n, j, k)| {
        let mut t = Tally::default();
        let steps = flip_schedule(*n, j, *k)?;
        let start = extended_rectangle(*n, j, *k)?;
        let path = run_schedule(&start, &steps)?;
        let end = path.last().unwrap_or(&start);
        t.check(*end == extended_rectangle(*n, j, k - 1)?, || format!("n={n} J={j:?} k={k}"));
        Ok(t)
    })
}

fn c11() -> Tally {
    let mut t = Tally::default();
    for (n, k) in [(4, 2), (5, 2), (5, 3)] {
        t.absorb(
            (|| {
                let mut t = Tally::default();
                let seed = seed_from_collection(&rectangle(n, k)?, Mode::Sequential)?;
                let report = qcluster::exchange_identities(&seed)?;
                t.check(!report.is_empty(), || format!("Gr({k},{n}) has no exchanges"));
                for r in report {
                    t.check(r.holds, || format!("Gr({k},{n}) exchange {} {:?}", r.l, r.abcd));
                }
                Ok(t)
            })(),
            &format!("Gr({k},{n})"),
        );
    }
    t
}

/// The `(1,1,1)`-dimensional `Π`-module with top `S_2` for `n = 4`.
pub fn fixture_n() -> qflag::Result<Rep> {
    let a = vec![Mat::zeros(0, 1), Mat::from_i64(1, 1, &[1]), Mat::zeros(1, 1)];
    let b = vec![Mat::zeros(1, 0), Mat::zeros(1, 1), Mat::from_i64(1, 1, &[1])];
    Rep::new(Algebra::Pi, 4, vec![0, 1, 1, 1], a, b)
}

fn c12() -> qflag::Result<Tally> {
    let mut t = Tally::default();
    let nmod = fixture_n()?;
    t.check(dmod::top_parts(&nmod) == vec![0, 0, 1, 0], || "top of N is not S_2".into());
    let x = dmod::minimal_lift(&nmod, &[1, 3])?;
    let end = dmod::dim_hom(&x, &x)?;
    t.check(end == 5, || format!("dim End X = {end}"));
    let (_, eta) = dmod::trace_eta(&x)?;
    t.check(eta == vec![1, 0, 1, 0], || format!("ηX multiplicities {eta:?}"));
    let e = lattices::ext1(&x, &x)?;
    t.check(e == 0, || format!("ext¹(X,X) = {e}"));
    let ed = lattices::ext1_d(&x, &x)?;
    let angle = lattices::form_angle(&x.delta_dim(), &x.delta_dim());
    t.check(ed == 1 && ed as i64 == end as i64 - angle, || format!("Ext¹_D(X,X) = {ed}"));
    Ok(t)
}

fn c13(mode: Mode) -> qflag::Result<Tally> {
    let mut t = Tally::default();
    let n = 7;
    for k in subsets::all_subsets(n).into_iter().filter(|k| !k.contains(n)) {
        let w = weyl::word_w0_mod_k(n, &k)?;
        t.check(w.is_reduced() && w.permutation() == weyl::w0_mod_k_perm(n, &k), || format!("word for K={k} is {w}"));
    }
    let ex = |e: &[usize]| KSet::new(7, e.to_vec());
    let w = weyl::word_w0_mod_k(7, &ex(&[1, 5, 6])?)?;
    t.check(w.to_string() == "(5,4,3,2,1,6,5,4,3,2,6,5,4,3,6,5,4)" && w.len() == 17, || format!("K={{1,5,6}} gave {w}"));
    let w = weyl::word_w0_mod_k(7, &ex(&[1, 3, 4])?)?;
    t.check(w.to_string() == "(5,4,3,2,1,6,5,4,3,2,3,4,5,6,3,4,5)", || format!("K={{1,3,4}} gave {w}"));
    let chain = weyl::factor_chain(7, &ex(&[4, 6])?, &[2, 5, 1])?;
    let expected = ReducedWord::parse(7, "(5,2,3,1,2,6,5,4,3,2,1,5,4,3,2,6,5,4,3)")?;
    let joined = chain.iter().fold(ReducedWord::empty(7), |acc, p| acc.concat(p));
    t.check(joined == expected, || format!("factor chain gave {joined}"));
    let q = weyl::bfz_quiver(&expected)?;
    let mut edges = q.edges.clone();
    edges.sort();
    let mut want = CHAIN_EDGES_N7.to_vec();
    want.sort();
    t.check(q.r == 19 && edges == want, || "BFZ quiver differs from the expected arrows".into());
    let iso = weyl::isolation_report(&chain)?;
    t.check(iso.iter().all(|&b| b), || format!("isolation {iso:?}"));
    let words: Vec<ReducedWord> = (2..=6)
        .flat_map(|n| subsets::all_subsets(n).into_iter().filter(move |k| !k.contains(n)).map(move |k| (n, k)))
        .map(|(n, k)| weyl::word_w0_mod_k(n, &k))
        .collect::<qflag::Result<_>>()?;
    t.merge(sweep(mode, &words, |w| {
        let mut t = Tally::default();
        t.check(weyl::check_simple_top(w)?, || format!("{w} (n={}) has a non-simple top", w.n()));
        Ok(t)
    }));
    let bad = ReducedWord::parse(5, "(3,2,1,4,3)")?;
    t.check(!weyl::check_simple_top(&bad)?, || "(3,2,1,4,3) reported simple tops".into());
    Ok(t)
}

/// Arrows of the 19-vertex quiver for n = 7, K = {4, 6}, order 2, 5, 1.
pub const CHAIN_EDGES_N7: [(usize, usize); 39] = [
    (16, 9), (16, 18), (9, 15), (18, 15), (15, 10), (15, 16), (15, 17), (10, 11), (10, 5), (5, 6),
    (5, 9), (17, 11), (17, 18), (11, 6), (11, 15), (11, 12), (6, 1), (6, 10), (6, 7), (1, 2),
    (1, 5), (12, 7), (12, 17), (12, 19), (7, 8), (7, 11), (7, 2), (2, 3), (2, 6), (19, 13),
    (13, 8), (13, 14), (8, 12), (8, 3), (3, 4), (3, 7), (14, 19), (14, 4), (4, 13),
];

fn c14(mode: Mode) -> qflag::Result<Tally> {
    let mut words = Vec::new();
    for n in 2..=5 {
        words.push(weyl::word_w0_mod_k(n, &KSet::empty(n))?);
        for j in 1..n {
            words.push(weyl::word_w0_mod_k(n, &KSet::new(n, vec![j])?)?);
        }
    }
    Ok(sweep(mode, &words, |w| {
        let mut t = Tally::default();
        let a = weyl::beta_roots(w);
        let b = weyl::beta_from_socles(w);
        t.check(a == b, || format!("{w}: reflection {a:?} vs socle {b:?}"));
        Ok(t)
    }))
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize, mode: Mode) -> Outcome {
    let start = Instant::now();
    let mut t = Tally::default();
    match id {
        1 => t.merge(c1(mode)),
        2 => t.merge(c2(mode)),
        3 => t.merge(c3(mode)),
        4 => t.merge(c4(mode)),
        5 => t.merge(c5(mode)),
        6 => t.merge(c6(mode)),
        7 => t.merge(c7()),
        8 => t.merge(c8(mode)),
        9 => t.merge(c9(mode)),
        10 => t.merge(c10(mode)),
        11 => t.merge(c11()),
        12 => t.absorb(c12(), "fixture"),
        13 => t.absorb(c13(mode), "words"),
        14 => t.absorb(c14(mode), "roots"),
        _ => t.failures.push(format!("no criterion {id}")),
    }
    Outcome {
        id,
        title: TITLES.get(id.wrapping_sub(1)).copied().unwrap_or("unknown"),
        passed: t.failures.is_empty() && t.checked > 0,
        checked: t.checked,
        failures: t.failures,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all(mode: Mode) -> Vec<Outcome> {
    (1..=TITLES.len()).map(|id| run(id, mode)).collect()
}
