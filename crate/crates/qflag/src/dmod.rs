//! Quiver representations of the Auslander algebra `D(n)` of `C[t]/(t^n)` and
//! of the preprojective algebra `Π` of type `A_{n-1}`.
//!
//! Vertices are `0..n`. For `i in 1..n` the arrow `a_i` goes `i → i-1` and
//! `b_i` goes `i-1 → i`. A `Π`-module is stored as a `D`-module that vanishes
//! at vertex 0, so both algebras share one data type and one Hom solver.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{is_zero_vec, q, q_parse, q_to_string, Mat, SparseSolver, Subspace, Q};
use crate::par::{self, Mode};
use crate::subsets::KSet;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algebra {
    D,
    Pi,
}

/// Arrow identifiers: `A(i)` is `a_i`, `B(i)` is `b_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arrow {
    A(usize),
    B(usize),
}

impl Arrow {
    pub fn source(self) -> usize {
        match self {
            Arrow::A(i) => i,
            Arrow::B(i) => i - 1,
        }
    }

    pub fn target(self) -> usize {
        match self {
            Arrow::A(i) => i - 1,
            Arrow::B(i) => i,
        }
    }

    pub fn name(self) -> String {
        match self {
            Arrow::A(i) => format!("a{i}"),
            Arrow::B(i) => format!("b{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    algebra: Algebra,
    n: usize,
    dims: Vec<usize>,
    a: Vec<Mat>,
    b: Vec<Mat>,
}

/// A vertex-indexed family of linear maps.
pub type Hom = Vec<Mat>;

impl Rep {
    /// Assembles a representation and checks shapes and relations.
    pub fn new(algebra: Algebra, n: usize, dims: Vec<usize>, a: Vec<Mat>, b: Vec<Mat>) -> Result<Rep> {
        if n < 2 || dims.len() != n || a.len() != n - 1 || b.len() != n - 1 {
            return Err(Error::Precondition("representation has wrong number of vertices or arrows".into()));
        }
        if algebra == Algebra::Pi && dims[0] != 0 {
            return Err(Error::Precondition("Π-module must vanish at vertex 0".into()));
        }
        for i in 1..n {
            if (a[i - 1].rows(), a[i - 1].cols()) != (dims[i - 1], dims[i]) {
                return Err(Error::Precondition(format!("a{i} has the wrong shape")));
            }
            if (b[i - 1].rows(), b[i - 1].cols()) != (dims[i], dims[i - 1]) {
                return Err(Error::Precondition(format!("b{i} has the wrong shape")));
            }
        }
        let rep = Rep { algebra, n, dims, a, b };
        if !rep.relations_hold() {
            return Err(Error::Domain("relations of the algebra are violated".into()));
        }
        Ok(rep)
    }

    pub fn zero(algebra: Algebra, n: usize) -> Rep {
        let dims = vec![0; n];
        let a = (1..n).map(|_| Mat::zeros(0, 0)).collect();
        let b = (1..n).map(|_| Mat::zeros(0, 0)).collect();
        Rep { algebra, n, dims, a, b }
    }

    /// The simple module at vertex `v`.
    pub fn simple(algebra: Algebra, n: usize, v: usize) -> Rep {
        let mut dims = vec![0; n];
        dims[v] = 1;
        let a = (1..n).map(|i| Mat::zeros(dims[i - 1], dims[i])).collect();
        let b = (1..n).map(|i| Mat::zeros(dims[i], dims[i - 1])).collect();
        Rep { algebra, n, dims, a, b }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        (1..self.n).flat_map(|i| [Arrow::A(i), Arrow::B(i)]).collect()
    }

    pub fn mat(&self, arrow: Arrow) -> &Mat {
        match arrow {
            Arrow::A(i) => &self.a[i - 1],
            Arrow::B(i) => &self.b[i - 1],
        }
    }

    fn outgoing(&self, v: usize) -> Vec<Arrow> {
        let mut out = Vec::new();
        if v >= 1 {
            out.push(Arrow::A(v));
        }
        if v + 1 < self.n {
            out.push(Arrow::B(v + 1));
        }
        out
    }

    fn incoming(&self, v: usize) -> Vec<Arrow> {
        let mut inc = Vec::new();
        if v + 1 < self.n {
            inc.push(Arrow::A(v + 1));
        }
        if v >= 1 {
            inc.push(Arrow::B(v));
        }
        inc
    }

    /// `b_{n-1} a_{n-1} = 0` and `a_i b_i = b_{i-1} a_{i-1}` for `2 ≤ i ≤ n-1`.
    pub fn relations_hold(&self) -> bool {
        let n = self.n;
        if !self.b[n - 2].mul(&self.a[n - 2]).is_zero() {
            return false;
        }
        (2..n).all(|i| self.a[i - 1].mul(&self.b[i - 1]) == self.b[i - 2].mul(&self.a[i - 2]))
    }

    pub fn as_algebra(&self, algebra: Algebra) -> Result<Rep> {
        if algebra == Algebra::Pi && self.dims[0] != 0 {
            return Err(Error::Domain("module does not vanish at vertex 0".into()));
        }
        Ok(Rep { algebra, ..self.clone() })
    }

    pub fn direct_sum(&self, other: &Rep) -> Result<Rep> {
        if self.n != other.n || self.algebra != other.algebra {
            return Err(Error::Precondition("direct sum of incompatible modules".into()));
        }
        let dims = self.dims.iter().zip(&other.dims).map(|(x, y)| x + y).collect();
        let a = self.a.iter().zip(&other.a).map(|(x, y)| x.direct_sum(y)).collect();
        let b = self.b.iter().zip(&other.b).map(|(x, y)| x.direct_sum(y)).collect();
        Ok(Rep { algebra: self.algebra, n: self.n, dims, a, b })
    }

    pub fn direct_sum_all(algebra: Algebra, n: usize, parts: &[Rep]) -> Result<Rep> {
        parts.iter().try_fold(Rep::zero(algebra, n), |acc, m| acc.direct_sum(m))
    }

    /// `δ_i = dim_{i-1} − dim_i`, the Δ-dimension vector of a Δ-filtered module.
    pub fn delta_dim(&self) -> Vec<i64> {
        (1..=self.n)
            .map(|i| self.dims[i - 1] as i64 - self.dims.get(i).copied().unwrap_or(0) as i64)
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mats: Vec<serde_json::Value> = self
            .arrows()
            .into_iter()
            .map(|ar| {
                let m = self.mat(ar);
                serde_json::json!({
                    "arrow": ar.name(),
                    "rows": m.rows(),
                    "cols": m.cols(),
                    "data": m.data().iter().map(q_to_string).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "algebra": match self.algebra { Algebra::D => "D", Algebra::Pi => "Pi" },
            "n": self.n,
            "dims": self.dims,
            "mats": mats,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Rep> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let algebra = match v["algebra"].as_str() {
            Some("D") => Algebra::D,
            Some("Pi") => Algebra::Pi,
            _ => return Err(bad("algebra must be \"D\" or \"Pi\"")),
        };
        let n = v["n"].as_u64().ok_or_else(|| bad("missing n"))? as usize;
        let dims: Vec<usize> = serde_json::from_value(v["dims"].clone()).map_err(|e| bad(&e.to_string()))?;
        let mut a = vec![None; n.saturating_sub(1)];
        let mut b = vec![None; n.saturating_sub(1)];
        for m in v["mats"].as_array().ok_or_else(|| bad("missing mats"))? {
            let name = m["arrow"].as_str().ok_or_else(|| bad("arrow name"))?;
            let rows = m["rows"].as_u64().ok_or_else(|| bad("rows"))? as usize;
            let cols = m["cols"].as_u64().ok_or_else(|| bad("cols"))? as usize;
            let data: Vec<Q> = m["data"]
                .as_array()
                .ok_or_else(|| bad("data"))?
                .iter()
                .map(|x| x.as_str().and_then(q_parse).ok_or_else(|| bad("rational entry")))
                .collect::<Result<_>>()?;
            if data.len() != rows * cols {
                return Err(bad("matrix data length"));
            }
            let idx: usize = name[1..].parse().map_err(|_| bad("arrow index"))?;
            if idx == 0 || idx >= n {
                return Err(bad("arrow index out of range"));
            }
            let slot = match &name[..1] {
                "a" => &mut a[idx - 1],
                "b" => &mut b[idx - 1],
                _ => return Err(bad("arrow must be aN or bN")),
            };
            *slot = Some(Mat::from_rows(rows, cols, data));
        }
        let a = a.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing a-arrow"))?;
        let b = b.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad("missing b-arrow"))?;
        Rep::new(algebra, n, dims, a, b)
    }
}

/// `D_0`: dimension `n-v` at vertex `v`, `a: x^v_s ↦ x^{v-1}_{s+1}` and
/// `b: x^{v-1}_s ↦ x^v_s` (zero when `s > n-v-1`).
pub fn build_d0(n: usize) -> Rep {
    assert!(n >= 2, "D(n) needs n ≥ 2");
    let dims: Vec<usize> = (0..n).map(|v| n - v).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 1..n {
        let mut ai = Mat::zeros(dims[i - 1], dims[i]);
        for s in 0..dims[i] {
            ai.set(s + 1, s, Q::one());
        }
        let mut bi = Mat::zeros(dims[i], dims[i - 1]);
        for s in 0..dims[i] {
            bi.set(s, s, Q::one());
        }
        a.push(ai);
        b.push(bi);
    }
    Rep { algebra: Algebra::D, n, dims, a, b }
}

/// Basis indices of `M_I` inside `D_0` at each vertex.
fn rank_one_window(n: usize, set: &KSet) -> Vec<std::ops::Range<usize>> {
    (0..n)
        .map(|v| {
            let d = set.elems().iter().filter(|&&i| i > v).count();
            (n - v - d)..(n - v)
        })
        .collect()
}

/// The rank-one module `M_I ⊆ D_0` with Δ-support `I`.
pub fn build_rank_one(n: usize, set: &KSet) -> Result<Rep> {
    if set.is_empty() || set.n() != n {
        return Err(Error::Precondition(format!("M_I needs a nonempty subset of [1..{n}]")));
    }
    let d0 = build_d0(n);
    let win = rank_one_window(n, set);
    let dims: Vec<usize> = win.iter().map(|r| r.len()).collect();
    let restrict = |m: &Mat, src: usize, tgt: usize| {
        let mut out = Mat::zeros(dims[tgt], dims[src]);
        for (c, sc) in win[src].clone().enumerate() {
            for r in 0..m.rows() {
                let x = m.get(r, sc);
                if x.is_zero() {
                    continue;
                }
                let pos = win[tgt].clone().position(|t| t == r);
                debug_assert!(pos.is_some(), "staircase not closed under arrows");
                if let Some(rr) = pos {
                    out.set(rr, c, x.clone());
                }
            }
        }
        out
    };
    let a = (1..n).map(|i| restrict(&d0.a[i - 1], i, i - 1)).collect();
    let b = (1..n).map(|i| restrict(&d0.b[i - 1], i - 1, i)).collect();
    Ok(Rep { algebra: Algebra::D, n, dims, a, b })
}

/// `D_i = M_{[i+1, n]}`, the projective `D`-module at vertex `i`.
pub fn d_projective(n: usize, i: usize) -> Rep {
    build_rank_one(n, &KSet::interval(n, i + 1, n)).expect("valid interval")
}

/// `T_j = M_{[1, j]}`.
pub fn t_module(n: usize, j: usize) -> Rep {
    build_rank_one(n, &KSet::interval(n, 1, j)).expect("valid interval")
}

/// `Δ_i = M_{{i}}`.
pub fn standard(n: usize, i: usize) -> Rep {
    build_rank_one(n, &KSet::interval(n, i, i)).expect("valid singleton")
}

/// `R_j = π(D_{n-j})`, the injective `Π`-module with socle `S_j`.
pub fn pi_injective(n: usize, j: usize) -> Rep {
    quotient_pi(&d_projective(n, n - j)).expect("projective is Δ-filtered")
}

/// `Π_i`, the projective `Π`-module with top `S_i` (equal to `R_{n-i}`).
pub fn pi_projective(n: usize, i: usize) -> Rep {
    pi_injective(n, n - i)
}

/// A basis of `Hom(M, N)` together with coordinate read-out positions.
#[derive(Clone, Debug)]
pub struct HomSpace {
    basis: Vec<Hom>,
    free: Vec<(usize, usize, usize)>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Hom] {
        &self.basis
    }

    /// Coordinates of a map known to lie in this space.
    pub fn coords(&self, f: &Hom) -> Vec<Q> {
        self.free.iter().map(|&(v, r, c)| f[v].get(r, c).clone()).collect()
    }

    pub fn combine(&self, coeffs: &[Q]) -> Option<Hom> {
        let first = self.basis.first()?;
        let mut out: Hom = first.iter().map(|m| Mat::zeros(m.rows(), m.cols())).collect();
        for (c, h) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (o, m) in out.iter_mut().zip(h) {
                *o = o.add(&m.scale(c));
            }
        }
        Some(out)
    }
}

/// Solves the intertwining equations `f_w M_α = N_α f_u` for every arrow.
pub fn hom_space(m: &Rep, nn: &Rep) -> Result<HomSpace> {
    if m.n != nn.n {
        return Err(Error::Precondition("modules over different n".into()));
    }
    if m.algebra != nn.algebra {
        return Err(Error::Precondition("modules over different algebras".into()));
    }
    let n = m.n;
    let mut offset = vec![0usize; n + 1];
    for v in 0..n {
        offset[v + 1] = offset[v] + nn.dims[v] * m.dims[v];
    }
    let var = |v: usize, r: usize, c: usize| offset[v] + r * m.dims[v] + c;
    let mut solver = SparseSolver::new(offset[n]);
    for ar in m.arrows() {
        let (u, w) = (ar.source(), ar.target());
        let (ma, na) = (m.mat(ar), nn.mat(ar));
        for r in 0..nn.dims[w] {
            for c in 0..m.dims[u] {
                let mut row = Vec::new();
                for k in 0..m.dims[w] {
                    let x = ma.get(k, c);
                    if !x.is_zero() {
                        row.push((var(w, r, k), x.clone()));
                    }
                }
                for k in 0..nn.dims[u] {
                    let x = na.get(r, k);
                    if !x.is_zero() {
                        row.push((var(u, k, c), -x.clone()));
                    }
                }
                solver.add_equation(row);
            }
        }
    }
    let (vecs, free_vars) = solver.nullspace();
    let unflatten = |x: &[Q]| -> Hom {
        (0..n)
            .map(|v| Mat::from_rows(nn.dims[v], m.dims[v], x[offset[v]..offset[v + 1]].to_vec()))
            .collect()
    };
    let basis = vecs.iter().map(|x| unflatten(x)).collect();
    let free = free_vars
        .into_iter()
        .map(|idx| {
            let v = (0..n).find(|&v| idx < offset[v + 1]).expect("index in range");
            let local = idx - offset[v];
            (v, local / m.dims[v], local % m.dims[v])
        })
        .collect();
    Ok(HomSpace { basis, free })
}

pub fn dim_hom(m: &Rep, nn: &Rep) -> Result<usize> {
    Ok(hom_space(m, nn)?.dim())
}

/// `g ∘ f`.
pub fn compose(g: &Hom, f: &Hom) -> Hom {
    g.iter().zip(f).map(|(x, y)| x.mul(y)).collect()
}

pub fn is_homomorphism(m: &Rep, nn: &Rep, f: &Hom) -> bool {
    m.arrows().into_iter().all(|ar| f[ar.target()].mul(m.mat(ar)) == nn.mat(ar).mul(&f[ar.source()]))
}

/// Whether `M ≅ N`, by testing a few deterministic combinations of a Hom basis.
pub fn is_isomorphic(m: &Rep, nn: &Rep) -> Result<bool> {
    if m.dims != nn.dims {
        return Ok(false);
    }
    if m.is_zero() {
        return Ok(true);
    }
    let hs = hom_space(m, nn)?;
    let mut seed: u64 = 0x9e37_79b9;
    for _ in 0..8 {
        let coeffs: Vec<Q> = (0..hs.dim())
            .map(|_| {
                seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                q(((seed >> 33) % 97) as i64 - 48)
            })
            .collect();
        if let Some(f) = hs.combine(&coeffs) {
            if f.iter().zip(&m.dims).all(|(mat, &d)| mat.rank() == d) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// A submodule given by one subspace per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubRep {
    spaces: Vec<Subspace>,
}

impl SubRep {
    pub fn zero(m: &Rep) -> SubRep {
        SubRep { spaces: m.dims.iter().map(|&d| Subspace::zero(d)).collect() }
    }

    pub fn full(m: &Rep) -> SubRep {
        SubRep { spaces: m.dims.iter().map(|&d| Subspace::full(d)).collect() }
    }

    pub fn spaces(&self) -> &[Subspace] {
        &self.spaces
    }

    pub fn dims(&self) -> Vec<usize> {
        self.spaces.iter().map(Subspace::dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(Subspace::dim).sum()
    }

    pub fn is_contained_in(&self, other: &SubRep) -> bool {
        self.spaces.iter().zip(&other.spaces).all(|(a, b)| a.is_subspace_of(b))
    }

    /// Smallest submodule of `m` containing `self` and the given vectors.
    pub fn closure_with(&self, m: &Rep, gens: Vec<(usize, Vec<Q>)>) -> SubRep {
        let mut out = self.clone();
        let mut queue = gens;
        while let Some((v, x)) = queue.pop() {
            if !out.spaces[v].insert(x.clone()) {
                continue;
            }
            for ar in m.outgoing(v) {
                let y = m.mat(ar).apply(&x);
                if !is_zero_vec(&y) {
                    queue.push((ar.target(), y));
                }
            }
        }
        out
    }

    /// The submodule as a representation in its echelon basis.
    pub fn to_rep(&self, m: &Rep) -> Rep {
        let dims = self.dims();
        let induced = |ar: Arrow| {
            let (u, w) = (ar.source(), ar.target());
            let cols: Vec<Vec<Q>> = self.spaces[u]
                .basis()
                .iter()
                .map(|x| self.spaces[w].coords(&m.mat(ar).apply(x)).expect("submodule is closed"))
                .collect();
            Mat::from_columns(dims[w], &cols)
        };
        let a = (1..m.n).map(|i| induced(Arrow::A(i))).collect();
        let b = (1..m.n).map(|i| induced(Arrow::B(i))).collect();
        Rep { algebra: m.algebra, n: m.n, dims, a, b }
    }

    /// `m / self`, with the non-pivot coordinates as basis.
    pub fn quotient(&self, m: &Rep) -> Rep {
        let dims: Vec<usize> = self.spaces.iter().map(Subspace::quotient_dim).collect();
        let induced = |ar: Arrow| {
            let (u, w) = (ar.source(), ar.target());
            let su = &self.spaces[u];
            let cols: Vec<Vec<Q>> = (0..dims[u])
                .map(|j| {
                    let mut e = vec![Q::zero(); dims[u]];
                    e[j] = Q::one();
                    let x = su.quotient_section(&e);
                    self.spaces[w].quotient_coords(&m.mat(ar).apply(&x))
                })
                .collect();
            Mat::from_columns(dims[w], &cols)
        };
        let a = (1..m.n).map(|i| induced(Arrow::A(i))).collect();
        let b = (1..m.n).map(|i| induced(Arrow::B(i))).collect();
        Rep { algebra: m.algebra, n: m.n, dims, a, b }
    }
}

/// Kernel of the out-arrows at `v`: the `S_v`-isotypic part of the socle.
fn socle_at(m: &Rep, v: usize) -> Vec<Vec<Q>> {
    let d = m.dims[v];
    if d == 0 {
        return Vec::new();
    }
    let outs = m.outgoing(v);
    let rows: Vec<Vec<Q>> = outs
        .iter()
        .flat_map(|&ar| {
            let mat = m.mat(ar);
            (0..mat.rows()).map(move |r| mat.row(r).to_vec())
        })
        .collect();
    Subspace::from_vectors(d, rows).orthogonal_kernel()
}

/// Multiplicity of each simple in the socle.
pub fn socle_parts(m: &Rep) -> Vec<usize> {
    (0..m.n).map(|v| socle_at(m, v).len()).collect()
}

/// Multiplicity of each simple in the top.
pub fn top_parts(m: &Rep) -> Vec<usize> {
    (0..m.n)
        .map(|v| {
            let images = m.incoming(v).into_iter().flat_map(|ar| {
                let mat = m.mat(ar);
                (0..mat.cols()).map(move |c| mat.column(c))
            });
            m.dims[v] - Subspace::from_vectors(m.dims[v], images).dim()
        })
        .collect()
}

/// The socle as a submodule.
pub fn socle(m: &Rep) -> SubRep {
    let gens = (0..m.n).flat_map(|v| socle_at(m, v).into_iter().map(move |x| (v, x))).collect();
    SubRep::zero(m).closure_with(m, gens)
}

/// Radical: the sum of images of all arrows.
pub fn radical(m: &Rep) -> SubRep {
    let gens = m
        .arrows()
        .into_iter()
        .flat_map(|ar| {
            let mat = m.mat(ar);
            (0..mat.cols()).map(move |c| (ar.target(), mat.column(c)))
        })
        .filter(|(_, x)| !is_zero_vec(x))
        .collect();
    SubRep::zero(m).closure_with(m, gens)
}

/// `soc_{(j_1, …, j_t)} M` with `j_1` applied first: each step takes the
/// preimage of the `S_{j_p}`-isotypic socle of the current quotient.
pub fn iterated_socle(m: &Rep, word: &[usize]) -> SubRep {
    let mut cur = SubRep::zero(m);
    for &v in word {
        let quo = cur.quotient(m);
        let lifts: Vec<(usize, Vec<Q>)> = socle_at(&quo, v)
            .into_iter()
            .map(|x| (v, cur.spaces[v].quotient_section(&x)))
            .collect();
        cur = cur.closure_with(m, lifts);
    }
    cur
}

/// `outer / inner` for nested submodules of `m`.
pub fn subquotient(m: &Rep, outer: &SubRep, inner: &SubRep) -> Result<Rep> {
    if !inner.is_contained_in(outer) {
        return Err(Error::Precondition("submodules are not nested".into()));
    }
    let big = outer.to_rep(m);
    let gens = inner
        .spaces
        .iter()
        .enumerate()
        .flat_map(|(v, s)| s.basis().iter().map(move |x| (v, outer.spaces[v].coords(x).expect("nested"))))
        .collect();
    Ok(SubRep::zero(&big).closure_with(&big, gens).quotient(&big))
}

/// `η M`: the submodule generated by the vertex-0 component, together with
/// its multiplicities `c_1..c_n` as `⊕ T_i^{c_i}`.
pub fn trace_eta(m: &Rep) -> Result<(Rep, Vec<i64>)> {
    let (sub, mult) = trace_eta_sub(m)?;
    Ok((sub.to_rep(m), mult))
}

fn trace_eta_sub(m: &Rep) -> Result<(SubRep, Vec<i64>)> {
    if m.algebra != Algebra::D {
        return Err(Error::Precondition("η is defined on D-modules".into()));
    }
    if m.delta_dim().iter().any(|&x| x < 0) {
        return Err(Error::Domain("module is not Δ-filtered".into()));
    }
    let gens = (0..m.dims[0])
        .map(|s| {
            let mut e = vec![Q::zero(); m.dims[0]];
            e[s] = Q::one();
            (0, e)
        })
        .collect();
    let sub = SubRep::zero(m).closure_with(m, gens);
    let dims = sub.dims();
    let delta: Vec<i64> =
        (1..=m.n).map(|i| dims[i - 1] as i64 - dims.get(i).copied().unwrap_or(0) as i64).collect();
    let mult: Vec<i64> = (0..m.n).map(|i| delta[i] - delta.get(i + 1).copied().unwrap_or(0)).collect();
    if mult.iter().any(|&c| c < 0) {
        return Err(Error::Consistency("trace of T is not in add T".into()));
    }
    Ok((sub, mult))
}

/// `π M = M / η M` as a `Π`-module.
pub fn quotient_pi(m: &Rep) -> Result<Rep> {
    let (sub, _) = trace_eta_sub(m)?;
    let mut quo = sub.quotient(m);
    quo.algebra = Algebra::Pi;
    debug_assert_eq!(quo.dims[0], 0);
    Ok(quo)
}

/// `dim Irr(T_i, T_j) = dim rad(T_i,T_j) − dim rad²(T_i,T_j)` for the
/// endomorphism algebra of `⊕ T_i`, with the radical found by Dickson's
/// trace-form criterion on the regular representation.
pub fn end_radical_irr(summands: &[Rep], mode: Mode) -> Result<Vec<Vec<usize>>> {
    let k = summands.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).collect();
    let homs: Vec<HomSpace> = par::try_map(mode, &pairs, |&(i, j)| hom_space(&summands[i], &summands[j]))?;
    let h = |i: usize, j: usize| &homs[i * k + j];

    // t(e) = tr(L_e) for e in a basis of End(T_i): L_e acts on ⊕_l Hom(T_l, T_i).
    let traces: Vec<Vec<Q>> = par::map_range(mode, k, |i| {
        h(i, i)
            .basis()
            .iter()
            .map(|e| {
                let mut t = Q::zero();
                for l in 0..k {
                    let space = h(l, i);
                    for (r, y) in space.basis().iter().enumerate() {
                        t += &space.coords(&compose(e, y))[r];
                    }
                }
                t
            })
            .collect()
    });
    let trace_of = |i: usize, x: &Hom| -> Q {
        h(i, i).coords(x).iter().zip(&traces[i]).fold(Q::zero(), |acc, (c, t)| acc + c * t)
    };

    // rad(i, j) = {a ∈ Hom(T_i, T_j) : t(b ∘ a) = 0 for all b ∈ Hom(T_j, T_i)}
    let rads: Vec<Vec<Hom>> = par::map(mode, &pairs, |&(i, j)| {
        let src = h(i, j);
        let back = h(j, i);
        if src.dim() == 0 {
            return Vec::new();
        }
        let mut gram = Mat::zeros(back.dim(), src.dim());
        for (r, bb) in back.basis().iter().enumerate() {
            for (c, aa) in src.basis().iter().enumerate() {
                gram.set(r, c, trace_of(i, &compose(bb, aa)));
            }
        }
        gram.kernel().iter().map(|coef| src.combine(coef).expect("nonempty basis")).collect()
    });
    let rad = |i: usize, j: usize| &rads[i * k + j];

    for i in 0..k {
        let top = h(i, i).dim() - rad(i, i).len();
        if top != 1 {
            return Err(Error::Domain(format!(
                "summand {i} has End/rad of dimension {top}; it is not indecomposable"
            )));
        }
    }

    let irr: Vec<usize> = par::map(mode, &pairs, |&(i, j)| {
        let target = h(i, j);
        let want = rad(i, j).len();
        if want == 0 {
            return 0;
        }
        let mut sq = Subspace::zero(target.dim());
        'outer: for l in 0..k {
            for a in rad(i, l) {
                for b in rad(l, j) {
                    sq.insert(target.coords(&compose(b, a)));
                    if sq.dim() == want {
                        break 'outer;
                    }
                }
            }
        }
        want - sq.dim()
    });
    Ok((0..k).map(|i| irr[i * k..(i + 1) * k].to_vec()).collect())
}

/// The injective envelope `ι: N → ⊕ R_j^{m_j}` of a `Π`-module, where `m` is
/// the socle vector of `N`.
pub fn injective_envelope(nmod: &Rep) -> Result<(Rep, Hom)> {
    if nmod.algebra != Algebra::Pi {
        return Err(Error::Precondition("injective envelope expects a Π-module".into()));
    }
    let n = nmod.n;
    let mut parts = Vec::new();
    let mut maps: Vec<Hom> = Vec::new();
    for j in 1..n {
        let soc = socle_at(nmod, j);
        if soc.is_empty() {
            continue;
        }
        let r = pi_injective(n, j);
        let hs = hom_space(nmod, &r)?;
        let mut rows = Subspace::zero(soc.len());
        for f in hs.basis() {
            let restricted: Vec<Vec<Q>> = soc.iter().map(|x| f[j].apply(x)).collect();
            // one functional per coordinate of R_j at vertex j
            let mut grew = false;
            for coord in 0..r.dims[j] {
                let functional: Vec<Q> = restricted.iter().map(|y| y[coord].clone()).collect();
                grew |= rows.insert(functional);
            }
            if grew {
                parts.push(r.clone());
                maps.push(f.clone());
            }
            if rows.dim() == soc.len() {
                break;
            }
        }
        if rows.dim() != soc.len() {
            return Err(Error::Consistency(format!("could not embed the S_{j} socle")));
        }
    }
    let env = Rep::direct_sum_all(Algebra::Pi, n, &parts)?;
    let iota: Hom = (0..n)
        .map(|v| {
            let blocks: Vec<&Mat> = maps.iter().map(|f| &f[v]).collect();
            vstack(env.dims[v], nmod.dims[v], &blocks)
        })
        .collect();
    debug_assert!(is_homomorphism(nmod, &env, &iota));
    if iota.iter().zip(&nmod.dims).any(|(m, &d)| m.rank() != d) {
        return Err(Error::Consistency("envelope map is not injective".into()));
    }
    Ok((env, iota))
}

fn vstack(rows: usize, cols: usize, blocks: &[&Mat]) -> Mat {
    let mut out = Mat::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        for r in 0..b.rows() {
            for c in 0..cols {
                out.set(r0 + r, c, b.get(r, c).clone());
            }
        }
        r0 += b.rows();
    }
    debug_assert_eq!(r0, rows);
    out
}

fn hstack(rows: usize, blocks: &[&Mat]) -> Mat {
    blocks.iter().fold(Mat::zeros(rows, 0), |acc, b| acc.hcat(b))
}

/// The projective cover `φ: ⊕ D_v^{t_v} → Q` of a `Π`-module viewed over `D`.
pub fn projective_cover(qmod: &Rep) -> Result<(Rep, Hom)> {
    let n = qmod.n;
    let qd = qmod.as_algebra(Algebra::D)?;
    let tops = top_parts(&qd);
    let mut parts = Vec::new();
    let mut maps: Vec<Hom> = Vec::new();
    for v in 0..n {
        if tops[v] == 0 {
            continue;
        }
        let images: Vec<Vec<Q>> = qd
            .incoming(v)
            .into_iter()
            .flat_map(|ar| {
                let mat = qd.mat(ar);
                (0..mat.cols()).map(move |c| mat.column(c)).collect::<Vec<_>>()
            })
            .collect();
        let rad_v = Subspace::from_vectors(qd.dims[v], images);
        let proj = d_projective(n, v);
        let hs = hom_space(&proj, &qd)?;
        // the generator of D_v is the first basis vector at vertex v
        let eval = Mat::from_columns(qd.dims[v], &hs.basis().iter().map(|f| f[v].column(0)).collect::<Vec<_>>());
        for t in 0..tops[v] {
            let mut e = vec![Q::zero(); tops[v]];
            e[t] = Q::one();
            let target = rad_v.quotient_section(&e);
            let coef = eval
                .solve(&target)
                .ok_or_else(|| Error::Consistency("top vector has no preimage".into()))?;
            parts.push(proj.clone());
            maps.push(hs.combine(&coef).expect("nonempty hom space"));
        }
    }
    let cover = Rep::direct_sum_all(Algebra::D, n, &parts)?;
    let phi: Hom = (0..n)
        .map(|v| hstack(qd.dims[v], &maps.iter().map(|f| &f[v]).collect::<Vec<_>>()))
        .collect();
    debug_assert!(is_homomorphism(&cover, &qd, &phi));
    if phi.iter().zip(&qd.dims).any(|(m, &d)| m.rank() != d) {
        return Err(Error::Consistency("projective cover is not surjective".into()));
    }
    Ok((cover, phi))
}

/// Pullback `{(p, x) : φ(p) = ι(x)} ⊆ P ⊕ N` as a `D`-module.
pub fn pullback(p: &Rep, phi: &Hom, nmod: &Rep, iota: &Hom) -> Result<Rep> {
    let nd = nmod.as_algebra(Algebra::D)?;
    let sum = p.direct_sum(&nd)?;
    let spaces = (0..p.n)
        .map(|v| {
            let m = phi[v].hcat(&iota[v].scale(&q(-1)));
            Subspace::from_vectors(sum.dims[v], m.kernel())
        })
        .collect();
    Ok(SubRep { spaces }.to_rep(&sum))
}

/// Minimal lift of `N ∈ Sub Q_J` to `F_Δ(J)`: the pullback of the projective
/// cover of the injective envelope of `N` along the envelope map.
pub fn minimal_lift(nmod: &Rep, levels: &[usize]) -> Result<Rep> {
    let n = nmod.n;
    let soc = socle_parts(nmod);
    if let Some(v) = (0..n).find(|&v| soc[v] > 0 && !levels.contains(&v)) {
        return Err(Error::Domain(format!("socle contains S_{v} outside the level set")));
    }
    if nmod.is_zero() {
        return Ok(Rep::zero(Algebra::D, n));
    }
    let (env, iota) = injective_envelope(nmod)?;
    let (cover, phi) = projective_cover(&env)?;
    pullback(&cover, &phi, nmod, &iota)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::{self, nonempty_subsets};

    fn ks(n: usize, e: &[usize]) -> KSet {
        KSet::new(n, e.to_vec()).unwrap()
    }

    #[test]
    fn d0_shape_and_socle() {
        let d0 = build_d0(3);
        assert_eq!(d0.dims(), &[3, 2, 1]);
        assert_eq!(d0.total_dim(), 6);
        assert!(d0.relations_hold());
        assert_eq!(socle_parts(&d0), vec![1, 0, 0]);
    }

    #[test]
    fn rank_one_examples() {
        let m = build_rank_one(3, &ks(3, &[1, 3])).unwrap();
        assert_eq!(m.dims(), &[2, 1, 1]);
        assert_eq!(m.delta_dim(), vec![1, 0, 1]);
        assert_eq!(build_rank_one(4, &ks(4, &[1, 2, 3, 4])).unwrap(), build_d0(4));
        let s = build_rank_one(4, &ks(4, &[1])).unwrap();
        assert_eq!(s.dims(), &[1, 0, 0, 0]);
        assert!(build_rank_one(3, &KSet::empty(3)).is_err());
    }

    #[test]
    fn every_rank_one_is_valid() {
        for n in 2..=5 {
            for set in nonempty_subsets(n) {
                let m = build_rank_one(n, &set).unwrap();
                assert!(m.relations_hold());
                let delta: Vec<i64> = (1..=n).map(|i| set.contains(i) as i64).collect();
                assert_eq!(m.delta_dim(), delta);
                assert_eq!(socle_parts(&m)[0], 1);
                assert_eq!(socle_parts(&m).iter().sum::<usize>(), 1);
            }
        }
    }

    #[test]
    fn hom_examples() {
        let m13 = build_rank_one(3, &ks(3, &[1, 3])).unwrap();
        let m12 = build_rank_one(3, &ks(3, &[1, 2])).unwrap();
        assert_eq!(dim_hom(&m13, &m12).unwrap(), 1);
        assert_eq!(dim_hom(&m12, &m13).unwrap(), 2);
        assert_eq!(dim_hom(&build_d0(4), &Rep::simple(Algebra::D, 4, 0)).unwrap(), 1);
        let hs = hom_space(&m12, &m13).unwrap();
        for f in hs.basis() {
            assert!(is_homomorphism(&m12, &m13, f));
        }
        assert!(hom_space(&m12, &quotient_pi(&m13).unwrap()).is_err());
    }

    #[test]
    fn hom_matches_formula_small() {
        for n in 2..=4 {
            let sets = nonempty_subsets(n);
            let mods: Vec<Rep> = sets.iter().map(|s| build_rank_one(n, s).unwrap()).collect();
            for (i, a) in sets.iter().enumerate() {
                for (j, b) in sets.iter().enumerate() {
                    assert_eq!(
                        dim_hom(&mods[i], &mods[j]).unwrap(),
                        subsets::dim_hom(a, b).unwrap(),
                        "{a} {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn embedding_criterion() {
        // M_I ⊆ M_J iff I ⪯ E(J, |I|), read off from injective homs
        let n = 4;
        for a in nonempty_subsets(n) {
            for b in nonempty_subsets(n) {
                if a.len() > b.len() {
                    continue;
                }
                let ma = build_rank_one(n, &a).unwrap();
                let mb = build_rank_one(n, &b).unwrap();
                let hs = hom_space(&ma, &mb).unwrap();
                let injective = (0..4).any(|t| {
                    let coeffs: Vec<Q> = (0..hs.dim()).map(|k| q(((k + t) % 3) as i64 + 1)).collect();
                    hs.combine(&coeffs)
                        .is_some_and(|f| f.iter().zip(ma.dims()).all(|(m, &d)| m.rank() == d))
                });
                let crit = subsets::leq_order(&a, &subsets::e_suffix(&b, a.len()).unwrap()).unwrap();
                assert_eq!(injective, crit, "{a} into {b}");
            }
        }
    }

    #[test]
    fn eta_of_rank_one_and_projectives() {
        let n = 5;
        for set in nonempty_subsets(n) {
            let (_, mult) = trace_eta(&build_rank_one(n, &set).unwrap()).unwrap();
            let mut want = vec![0; n];
            want[set.len() - 1] = 1;
            assert_eq!(mult, want, "{set}");
        }
        for i in 0..n {
            let (_, mult) = trace_eta(&d_projective(n, i)).unwrap();
            assert_eq!(mult[n - i - 1], 1);
            assert_eq!(mult.iter().sum::<i64>(), 1);
        }
        for j in 1..=n {
            let (eta, _) = trace_eta(&t_module(n, j)).unwrap();
            assert!(is_isomorphic(&eta, &t_module(n, j)).unwrap());
        }
    }

    #[test]
    fn pi_quotients() {
        let n = 5;
        for j in 1..=n {
            assert!(quotient_pi(&t_module(n, j)).unwrap().is_zero());
        }
        for j in 1..n {
            let r = pi_injective(n, j);
            assert!(r.relations_hold());
            let soc = socle_parts(&r);
            assert_eq!(soc.iter().sum::<usize>(), 1);
            assert_eq!(soc[j], 1);
            let top = top_parts(&r);
            assert_eq!(top.iter().sum::<usize>(), 1);
            assert_eq!(top[n - j], 1);
            // Π_i has dimension i(n-i)
            assert_eq!(r.total_dim(), j * (n - j));
        }
    }

    #[test]
    fn iterated_socle_basics() {
        let n = 4;
        let r = pi_injective(n, 2);
        assert_eq!(iterated_socle(&r, &[]).total_dim(), 0);
        assert_eq!(iterated_socle(&r, &[2]).dims(), vec![0, 0, 1, 0]);
        let chain = [2, 1, 3, 2];
        let mut prev = SubRep::zero(&r);
        for t in 0..=chain.len() {
            let cur = iterated_socle(&r, &chain[..t]);
            assert!(prev.is_contained_in(&cur));
            prev = cur;
        }
        assert_eq!(prev.total_dim(), r.total_dim());
    }

    #[test]
    fn end_algebra_of_single_summand() {
        let simple = build_rank_one(4, &ks(4, &[2])).unwrap();
        assert_eq!(end_radical_irr(&[simple], Mode::Sequential).unwrap(), vec![vec![0]]);
        // End(M_13) = C[t]/(t^2) on its own has a loop
        let m = build_rank_one(4, &ks(4, &[1, 3])).unwrap();
        assert_eq!(end_radical_irr(&[m], Mode::Sequential).unwrap(), vec![vec![1]]);
        let split = build_rank_one(3, &ks(3, &[1])).unwrap();
        let double = split.direct_sum(&split).unwrap();
        assert!(matches!(end_radical_irr(&[double], Mode::Sequential), Err(Error::Domain(_))));
    }

    #[test]
    fn irr_bounded_by_hom() {
        let n = 4;
        let t1 = t_module(n, 1);
        let t2 = t_module(n, 2);
        let irr = end_radical_irr(&[t1.clone(), t2.clone()], Mode::Sequential).unwrap();
        assert!(irr[0][1] <= dim_hom(&t1, &t2).unwrap());
        assert!(irr[1][0] <= dim_hom(&t2, &t1).unwrap());
    }

    #[test]
    fn grassmannian_quiver_n4() {
        let n = 4;
        let labels = [ks(n, &[1, 3]), ks(n, &[1, 2]), ks(n, &[2, 3]), ks(n, &[3, 4]), ks(n, &[1, 4])];
        let mods: Vec<Rep> = labels.iter().map(|s| build_rank_one(n, s).unwrap()).collect();
        let irr = end_radical_irr(&mods, Mode::Sequential).unwrap();
        let col: Vec<i64> = (1..5).map(|j| irr[j][0] as i64 - irr[0][j] as i64).collect();
        assert_eq!(col, vec![1, -1, 1, -1]);
        let arrows: usize = irr.iter().flatten().sum();
        assert_eq!(arrows, 8);
        assert!((0..5).all(|i| irr[i][i] == 0));
    }

    #[test]
    fn fixture_lift() {
        // N: dimension (1,1,1) on vertices 1..3, top S_2, socle S_1 ⊕ S_3
        let n = 4;
        let mut a = vec![Mat::zeros(0, 1), Mat::from_i64(1, 1, &[1]), Mat::zeros(1, 1)];
        let mut b = vec![Mat::zeros(1, 0), Mat::zeros(1, 1), Mat::from_i64(1, 1, &[1])];
        a[0] = Mat::zeros(0, 1);
        b[0] = Mat::zeros(1, 0);
        let nmod = Rep::new(Algebra::Pi, n, vec![0, 1, 1, 1], a, b).unwrap();
        assert_eq!(top_parts(&nmod), vec![0, 0, 1, 0]);
        assert_eq!(socle_parts(&nmod), vec![0, 1, 0, 1]);
        let x = minimal_lift(&nmod, &[1, 3]).unwrap();
        assert!(x.relations_hold());
        assert_eq!(x.delta_dim(), vec![1, 1, 1, 1]);
        assert_eq!(dim_hom(&x, &x).unwrap(), 5);
        let (_, mult) = trace_eta(&x).unwrap();
        assert_eq!(mult, vec![1, 0, 1, 0]);
        assert!(is_isomorphic(&quotient_pi(&x).unwrap(), &nmod).unwrap());
        assert!(matches!(minimal_lift(&nmod, &[1]), Err(Error::Domain(_))));
    }

    #[test]
    fn lift_of_rank_one_quotient() {
        let n = 4;
        for set in nonempty_subsets(n) {
            if set.len() == n {
                continue;
            }
            let m = build_rank_one(n, &set).unwrap();
            let pm = quotient_pi(&m).unwrap();
            let lift = minimal_lift(&pm, &[set.len()]).unwrap();
            if pm.is_zero() {
                assert!(lift.is_zero());
                continue;
            }
            assert!(is_isomorphic(&lift, &m).unwrap(), "{set}");
        }
    }

    #[test]
    fn json_roundtrip() {
        let m = build_rank_one(4, &ks(4, &[2, 4])).unwrap();
        assert_eq!(Rep::from_json(&m.to_json()).unwrap(), m);
    }
}
