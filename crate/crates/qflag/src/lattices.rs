//! Grothendieck-group classes and the bilinear forms on them.

use serde::{Deserialize, Serialize};

use crate::dmod::{self, Rep};
use crate::error::{Error, Result};
use crate::subsets::KSet;

/// A class `[M]` recorded by its Δ-dimension vector and the multiplicities
/// of `T_1..T_n` in `ηM`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EClass {
    pub delta: Vec<i64>,
    pub eta: Vec<i64>,
}

impl EClass {
    pub fn zero(n: usize) -> EClass {
        EClass { delta: vec![0; n], eta: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.delta.len()
    }

    /// `[M_I]`: Δ-support `I` and `ηM_I = T_{|I|}`.
    pub fn rank_one(set: &KSet) -> EClass {
        let n = set.n();
        let delta = (1..=n).map(|i| set.contains(i) as i64).collect();
        let mut eta = vec![0; n];
        if !set.is_empty() {
            eta[set.len() - 1] = 1;
        }
        EClass { delta, eta }
    }

    /// `[ηM]` as a Δ-vector.
    pub fn eta_delta(&self) -> Vec<i64> {
        let n = self.n();
        (0..n).map(|i| self.eta[i..].iter().sum()).collect()
    }

    /// `[πM] = [M] − [ηM]` as a Δ-vector.
    pub fn pi_delta(&self) -> Vec<i64> {
        self.delta.iter().zip(self.eta_delta()).map(|(a, b)| a - b).collect()
    }

    /// The class of `ηM` viewed as a class of its own.
    pub fn eta_part(&self) -> EClass {
        EClass { delta: self.eta_delta(), eta: self.eta.clone() }
    }

    pub fn add(&self, other: &EClass) -> EClass {
        EClass {
            delta: self.delta.iter().zip(&other.delta).map(|(a, b)| a + b).collect(),
            eta: self.eta.iter().zip(&other.eta).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: i64) -> EClass {
        EClass {
            delta: self.delta.iter().map(|a| c * a).collect(),
            eta: self.eta.iter().map(|a| c * a).collect(),
        }
    }

    pub fn sub(&self, other: &EClass) -> EClass {
        self.add(&other.scale(-1))
    }
}

/// `ζ`: a weight in the `ε`-basis maps to the Δ-vector with the same coordinates.
pub fn zeta(weight: &[i64]) -> Vec<i64> {
    weight.to_vec()
}

/// The fundamental weight `ω_i = ε_1 + … + ε_i`.
pub fn omega(n: usize, i: usize) -> Vec<i64> {
    (1..=n).map(|s| (s <= i) as i64).collect()
}

/// The simple root `α_i = ε_{i+1} − ε_i`, the class of `S_i`.
pub fn alpha(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i - 1] = -1;
    v[i] = 1;
    v
}

/// `σ[M] = ([πM], [ηM])`.
pub fn sigma(x: &EClass) -> (Vec<i64>, Vec<i64>) {
    (x.pi_delta(), x.eta.clone())
}

pub fn form_angle(x: &[i64], y: &[i64]) -> i64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// `(x, y) = ⟨x, y⟩ + ⟨ηx, ηy⟩`.
pub fn form_round(x: &EClass, y: &EClass) -> i64 {
    form_angle(&x.delta, &y.delta) + form_angle(&x.eta_delta(), &y.eta_delta())
}

/// `L^ad(x, y) = ⟨x, ηy⟩ − ⟨y, ηx⟩`.
pub fn form_lad(x: &EClass, y: &EClass) -> i64 {
    form_angle(&x.delta, &y.eta_delta()) - form_angle(&y.delta, &x.eta_delta())
}

/// The class of a Δ-filtered `D`-module.
pub fn eclass_of(m: &Rep) -> Result<EClass> {
    let (_, eta) = dmod::trace_eta(m)?;
    Ok(EClass { delta: m.delta_dim(), eta })
}

/// `dim ext¹(X, Y) = dim Hom(X, Y) + dim Hom(Y, X) − ([X], [Y])`.
pub fn ext1(x: &Rep, y: &Rep) -> Result<usize> {
    let total = (dmod::dim_hom(x, y)? + dmod::dim_hom(y, x)?) as i64;
    let e = total - form_round(&eclass_of(x)?, &eclass_of(y)?);
    usize::try_from(e).map_err(|_| Error::Consistency(format!("negative ext¹ ({e})")))
}

/// `dim Ext¹_D(X, Y) = dim Hom(X, Y) − ⟨[X], [Y]⟩`, valid since projective dimension is at most one.
pub fn ext1_d(x: &Rep, y: &Rep) -> Result<usize> {
    let e = dmod::dim_hom(x, y)? as i64 - form_angle(&x.delta_dim(), &y.delta_dim());
    usize::try_from(e).map_err(|_| Error::Consistency(format!("negative Ext¹_D ({e})")))
}
