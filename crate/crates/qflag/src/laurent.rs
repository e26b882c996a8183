//! Integer Laurent polynomials in a single variable.
//!
//! The quantum matrix algebra reads the exponent as a power of `q`; the
//! quantum torus reads it as a power of `q^{1/2}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Finitely supported map from exponent to nonzero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Laurent(BTreeMap<i64, i64>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn one() -> Self {
        Laurent::monomial(0, 1)
    }

    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut m = BTreeMap::new();
        if coeff != 0 {
            m.insert(exp, coeff);
        }
        Laurent(m)
    }

    /// `(−v)^e`, where `v` is the variable.
    pub fn neg_power(e: i64) -> Self {
        Laurent::monomial(e, if e.rem_euclid(2) == 0 { 1 } else { -1 })
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    /// The single term `(exp, coeff)` if this is a monomial.
    pub fn as_monomial(&self) -> Option<(i64, i64)> {
        if self.0.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.0.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn add_assign(&mut self, other: &Laurent) {
        for (e, c) in other.terms() {
            self.add_term(e, c);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn neg(&self) -> Laurent {
        Laurent(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }

    pub fn sub(&self, other: &Laurent) -> Laurent {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// The quotient `self / d` if it is again an integer Laurent polynomial.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        let (&dtop, &dlead) = d.0.iter().next_back()?;
        let mut rem = self.clone();
        let mut quot = Laurent::zero();
        let low = self.0.keys().next().copied().unwrap_or(0) - d.0.keys().next().copied().unwrap_or(0);
        while let Some((&top, &c)) = rem.0.iter().next_back() {
            let e = top - dtop;
            if e < low || c % dlead != 0 {
                return None;
            }
            let t = Laurent::monomial(e, c / dlead);
            rem = rem.sub(&t.mul(d));
            quot.add_assign(&t);
        }
        Some(quot)
    }

    /// Multiplication by the variable to the power `e`.
    pub fn shift(&self, e: i64) -> Laurent {
        Laurent(self.0.iter().map(|(&k, &c)| (k + e, c)).collect())
    }

    /// `v ↦ v^{-1}`.
    pub fn invert_variable(&self) -> Laurent {
        Laurent(self.0.iter().map(|(&k, &c)| (-k, c)).collect())
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }

    /// Renders with a given variable name, dividing exponents by `denom`.
    pub fn render(&self, var: &str, denom: i64) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let pow = match (e, denom) {
                (0, _) => String::new(),
                (e, d) if e % d == 0 && e / d == 1 => var.to_string(),
                (e, d) if e % d == 0 => format!("{var}^{}", e / d),
                (e, d) => format!("{var}^({e}/{d})"),
            };
            let term = match (c, pow.is_empty()) {
                (c, true) => c.to_string(),
                (1, false) => pow,
                (-1, false) => format!("-{pow}"),
                (c, false) => format!("{c}{pow}"),
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("q", 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let q = Laurent::monomial(1, 1);
        let qi = Laurent::monomial(-1, 1);
        let diff = q.sub(&qi);
        assert_eq!(diff.mul(&diff).to_string(), "q^-2 - 2 + q^2");
        assert!(diff.add(&diff.neg()).is_zero());
        assert_eq!(Laurent::neg_power(3), Laurent::monomial(3, -1));
        assert_eq!(Laurent::neg_power(-2), Laurent::monomial(-2, 1));
        assert_eq!(diff.invert_variable(), diff.neg());
        assert_eq!(Laurent::monomial(1, 1).render("q", 2), "q^(1/2)");
        assert_eq!(diff.at_one(), 0);
        let sq = diff.mul(&diff);
        assert_eq!(sq.div_exact(&diff), Some(diff.clone()));
        assert_eq!(q.add(&Laurent::one()).div_exact(&diff), None);
        assert_eq!(Laurent::monomial(3, 6).div_exact(&Laurent::monomial(1, -2)), Some(Laurent::monomial(2, -3)));
    }
}
