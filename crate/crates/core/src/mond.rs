//! Image Milnor numbers of quasihomogeneous germs `(C^m,0) → (C^{m+1},0)`.
//!
//! Under `s_λ ↦ s_0·c_{λ_1}⋯c_{λ_r}` the series `1 − exp(MS)` for `l = 1` splits
//! into homogeneous parts `K_d(s_0, c)`. For a germ with source weights `α` and
//! target degrees `β`,
//! `(−1)^m μ_I + 1 = (1/e_{m+1}(β)) Σ_{i=1}^{m+1} K_i·e_{m+1−i}(β)` with
//! `s_0 = e_{m+1}(β)/e_m(α)` and `c_k = Σ_i (−1)^{k−i} e_i(β) h_{k−i}(α)`.
//! The formula presumes the germ is finitely determined.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::MondError;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::series::{GradedSeries, Monomial, Var};
use crate::Rational;

/// Source dimensions up to `M(1) = 14` are supported.
pub const MAX_SOURCE_DIM: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightData {
    pub alpha: Vec<u64>,
    pub beta: Vec<u64>,
}

impl WeightData {
    pub fn new(alpha: Vec<u64>, beta: Vec<u64>) -> Result<Self, MondError> {
        let m = alpha.len();
        if m == 0 || m > MAX_SOURCE_DIM {
            return Err(MondError::InvalidWeights(format!(
                "source dimension {m} outside 1..={MAX_SOURCE_DIM}"
            )));
        }
        if beta.len() != m + 1 {
            return Err(MondError::InvalidWeights(format!(
                "{m} weights need {} degrees, got {}",
                m + 1,
                beta.len()
            )));
        }
        if alpha.iter().chain(&beta).any(|&x| x == 0) {
            return Err(MondError::InvalidWeights("weights and degrees must be positive".into()));
        }
        Ok(WeightData { alpha, beta })
    }

    pub fn m(&self) -> usize {
        self.alpha.len()
    }
}

/// Elementary symmetric polynomials `e_0..=e_n` of the values.
pub fn elementary(values: &[u64]) -> Vec<BigInt> {
    let mut e = vec![BigInt::from(1)];
    for &v in values {
        e.push(BigInt::from(0));
        for i in (1..e.len()).rev() {
            let prev = e[i - 1].clone();
            e[i] += prev * v;
        }
    }
    e
}

/// Complete homogeneous symmetric polynomials `h_0..=h_n` of the values.
pub fn complete(values: &[u64], n: usize) -> Vec<BigInt> {
    let mut h = vec![BigInt::from(0); n + 1];
    h[0] = BigInt::from(1);
    for &v in values {
        // Multiply by 1/(1 − v t).
        for i in 1..=n {
            let prev = h[i - 1].clone();
            h[i] += prev * v;
        }
    }
    h
}

/// `K_1, …, K_D` in the variables `s_0` and `c_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct KPolynomialSet {
    pub polys: Vec<GradedSeries<Rational>>,
}

impl KPolynomialSet {
    pub fn max_degree(&self) -> usize {
        self.polys.len()
    }

    /// `K_d`, `d ≥ 1`.
    pub fn k(&self, d: usize) -> &GradedSeries<Rational> {
        &self.polys[d - 1]
    }
}

/// Computes `K_1..=K_D` from an `l = 1` master series truncated at degree `≥ D`.
pub fn k_polynomials(master: &GradedSeries<Rational>, d_max: u32) -> Result<KPolynomialSet, MondError> {
    if master.truncation() < d_max {
        return Err(MondError::TruncationTooLow {
            have: master.truncation(),
            need: d_max,
        });
    }
    let s0 = Monomial::var(Var::S(Partition::empty()));
    let reduced = master.with_truncation(d_max).map_monomials(master.l(), d_max, |m| match m.factors() {
        [(Var::S(lambda), 1)] => Some((s0.mul(&Monomial::c_partition(lambda)), Rational::from_i64(1))),
        _ => None,
    });
    if reduced.len() != master.with_truncation(d_max).len() {
        return Err(MondError::Series(crate::SeriesError::NotSLinear));
    }
    let e = reduced.exp(d_max)?;
    let one_minus = GradedSeries::one(master.l(), d_max).sub(&e);
    Ok(KPolynomialSet {
        polys: (1..=d_max).map(|d| one_minus.graded_component(d)).collect(),
    })
}

/// Evaluates a polynomial in `s_0` and `c_i` at numbers.
pub fn eval_numeric(p: &GradedSeries<Rational>, s0: &Rational, c: &[Rational]) -> Result<Rational, MondError> {
    let mut total = Rational::from_i64(0);
    for (m, coeff) in p.terms() {
        let mut v = coeff.clone();
        for (var, e) in m.factors() {
            let base = match var {
                Var::S(p) if p.is_empty() => s0.clone(),
                Var::C(i) => c
                    .get(*i as usize)
                    .cloned()
                    .ok_or_else(|| MondError::InvalidWeights(format!("c_{i} is not available")))?,
                other => return Err(crate::SeriesError::UnexpectedVariable(format!("{other:?}")).into()),
            };
            for _ in 0..*e {
                v = &v * &base;
            }
        }
        total += v;
    }
    Ok(total)
}

/// `s_0` and `c_0..=c_n` of a quasihomogeneous germ.
pub fn germ_classes(w: &WeightData, n: usize) -> (Rational, Vec<Rational>) {
    let m = w.m();
    let eb = elementary(&w.beta);
    let ea = elementary(&w.alpha);
    let ha = complete(&w.alpha, n);
    let s0 = Rational::new(eb[m + 1].clone(), ea[m].clone());
    let c = (0..=n)
        .map(|k| {
            let mut acc = BigInt::from(0);
            for i in 0..=k.min(m + 1) {
                let term = &eb[i] * &ha[k - i];
                if (k - i) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            Rational::from_integer(acc)
        })
        .collect();
    (s0, c)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The value is a non-negative integer.
    Valid,
    /// No finite quasihomogeneous germ has these weights and degrees.
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorResult {
    pub value: Rational,
    pub verdict: Verdict,
}

impl std::fmt::Display for MilnorResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = match self.verdict {
            Verdict::Valid => "valid",
            Verdict::Rejected => "rejected",
        };
        write!(f, "{} ({v})", self.value)
    }
}

fn verdict_for(value: Rational) -> MilnorResult {
    let ok = value.is_integer() && value >= Rational::from_i64(0);
    MilnorResult {
        value,
        verdict: if ok { Verdict::Valid } else { Verdict::Rejected },
    }
}

/// Image Milnor number from the `K` polynomials.
pub fn image_milnor(w: &WeightData, kset: &KPolynomialSet) -> Result<MilnorResult, MondError> {
    let m = w.m();
    if kset.max_degree() < m + 1 {
        return Err(MondError::KSetTooShort {
            have: kset.max_degree(),
            need: m + 1,
        });
    }
    let eb = elementary(&w.beta);
    let (s0, c) = germ_classes(w, m + 1);
    let mut sum = Rational::from_i64(0);
    for i in 1..=m + 1 {
        let k = eval_numeric(kset.k(i), &s0, &c)?;
        sum += k * Rational::from_integer(eb[m + 1 - i].clone());
    }
    let rhs = sum / Rational::from_integer(eb[m + 1].clone());
    let mut mu = rhs - Rational::from_i64(1);
    if m % 2 == 1 {
        mu = -mu;
    }
    Ok(verdict_for(mu))
}

/// Image Milnor number from the `L_0..=L_m` polynomials:
/// `(−1)^m μ_I + 1 = (1/e_m(α)) Σ_{i=0}^m L_i·e_{m−i}(α)`.
pub fn image_milnor_l_form(w: &WeightData, l_polys: &[GradedSeries<Rational>]) -> Result<MilnorResult, MondError> {
    let m = w.m();
    if l_polys.len() < m + 1 {
        return Err(MondError::KSetTooShort {
            have: l_polys.len(),
            need: m + 1,
        });
    }
    let ea = elementary(&w.alpha);
    let (s0, c) = germ_classes(w, m);
    let mut sum = Rational::from_i64(0);
    for (i, li) in l_polys.iter().enumerate().take(m + 1) {
        sum += eval_numeric(li, &s0, &c)? * Rational::from_integer(ea[m - i].clone());
    }
    let rhs = sum / Rational::from_integer(ea[m].clone());
    let mut mu = rhs - Rational::from_i64(1);
    if m % 2 == 1 {
        mu = -mu;
    }
    Ok(verdict_for(mu))
}

/// Checks `s_0·Σ L_i t^i = (Σ K_{i+1} t^i)(1 + Σ c_i t^i)` through `t^{n−1}`, `n = |L|`.
pub fn pp_crosscheck(kset: &KPolynomialSet, l_polys: &[GradedSeries<Rational>]) -> bool {
    let n = l_polys.len();
    if kset.max_degree() < n {
        return false;
    }
    let big = n as u32 + 2;
    let s0 = GradedSeries::<Rational>::variable(1, big, Var::S(Partition::empty()));
    let c = |i: usize| -> GradedSeries<Rational> {
        if i == 0 {
            GradedSeries::one(1, big)
        } else {
            GradedSeries::variable(1, big, Var::C(i as u32))
        }
    };
    (0..n).all(|j| {
        let lhs = s0.mul(&l_polys[j].with_truncation(big));
        let mut rhs = GradedSeries::zero(1, big);
        for i in 0..=j {
            rhs = rhs.add(&kset.k(i + 1).with_truncation(big).mul(&c(j - i)));
        }
        lhs == rhs
    })
}

/// Reduced common denominator of each homogeneous component `1..=k`.
pub fn component_denominators<F: Scalar>(s: &GradedSeries<F>, k: u32) -> Vec<F> {
    let mut by_degree: BTreeMap<u32, Vec<F>> = BTreeMap::new();
    for (m, c) in s.terms() {
        by_degree.entry(m.degree(s.l())).or_default().push(c.clone());
    }
    (1..=k)
        .map(|d| F::common_denominator(by_degree.get(&d).map(|v| v.iter()).into_iter().flatten()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn symmetric_functions() {
        assert_eq!(elementary(&[1, 2, 3]), vec![1, 6, 11, 6].into_iter().map(BigInt::from).collect::<Vec<_>>());
        assert_eq!(complete(&[1, 2], 3), vec![1, 3, 7, 15].into_iter().map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn cusp_classes() {
        // c(t) = (1+2t)(1+3t)/(1+t) = 1 + 4t + 2t² − 2t³ + …
        let w = WeightData::new(vec![1], vec![2, 3]).unwrap();
        let (s0, c) = germ_classes(&w, 3);
        assert_eq!(s0, q(6));
        assert_eq!(c, vec![q(1), q(4), q(2), q(-2)]);
    }

    #[test]
    fn weight_validation() {
        assert!(WeightData::new(vec![1, 2], vec![1, 2]).is_err());
        assert!(WeightData::new(vec![0], vec![1, 2]).is_err());
        assert!(WeightData::new(vec![], vec![1]).is_err());
    }

    #[test]
    fn short_master_is_refused() {
        let ms = GradedSeries::<Rational>::variable(1, 3, Var::S(Partition::empty())).neg();
        assert!(matches!(k_polynomials(&ms, 5), Err(MondError::TruncationTooLow { have: 3, need: 5 })));
    }

    #[test]
    fn denominators_per_component() {
        let mut s = GradedSeries::<Rational>::zero(1, 3);
        s.add_term(Monomial::var(Var::S(Partition::empty())), q(-1));
        s.add_term(Monomial::var(Var::S(Partition::new(vec![1]).unwrap())), Rational::from_fraction(1, 2));
        s.add_term(Monomial::var(Var::S(Partition::new(vec![2]).unwrap())), Rational::from_fraction(7, 6));
        s.add_term(Monomial::var(Var::S(Partition::new(vec![1, 1]).unwrap())), Rational::from_fraction(-1, 3));
        assert_eq!(component_denominators(&s, 3), vec![q(1), q(2), q(6)]);
    }
}
