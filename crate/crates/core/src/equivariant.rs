//! Characteristic classes evaluated at a prototype.
//!
//! Values live in the polynomial ring of the torus characters `X(j)`. The
//! pushforward along a prototype is multiplication by `eu(ρ^T)/eu(ρ^S)`.

use std::collections::BTreeMap;

use crate::error::{EvalError, SeriesError};
use crate::partition::Partition;
use crate::prototype::{linear_form, PrototypeModel, Weight};
use crate::scalar::Scalar;
use crate::series::{GradedSeries, Var};

/// Target and source weights with their common sub-multiset removed.
pub fn cancel_common(p: &PrototypeModel) -> (Vec<Weight>, Vec<Weight>) {
    let mut target = p.target_weights.clone();
    let mut source = Vec::new();
    for w in &p.source_weights {
        match target.iter().position(|t| t == w) {
            Some(i) => {
                target.remove(i);
            }
            None => source.push(w.clone()),
        }
    }
    (target, source)
}

fn total_class<F: Scalar>(l: u32, weights: &[Weight], k: u32) -> GradedSeries<F> {
    let mut acc = GradedSeries::one(l, k);
    for w in weights {
        let f = GradedSeries::one(l, k).add(&linear_form(l, w, k));
        acc = acc.mul_bounded(&f, k, None);
    }
    acc
}

fn euler_product<F: Scalar>(l: u32, weights: &[Weight]) -> GradedSeries<F> {
    let k = weights.len() as u32;
    weights
        .iter()
        .fold(GradedSeries::one(l, k), |acc, w| acc.mul_bounded(&linear_form(l, w, k), k, None))
}

/// `Π_target(1+w) / Π_source(1+w)` truncated at `k`.
pub fn relative_chern<F: Scalar>(p: &PrototypeModel, k: u32) -> GradedSeries<F> {
    let (target, source) = cancel_common(p);
    let num = total_class::<F>(p.l, &target, k);
    let den = total_class::<F>(p.l, &source, k);
    let inv = den.inverse(k).expect("total classes start with 1");
    num.mul_bounded(&inv, k, None)
}

/// `eu(ρ^T)/eu(ρ^S)`, a homogeneous polynomial of degree `l`.
pub fn euler_ratio<F: Scalar>(p: &PrototypeModel) -> Result<GradedSeries<F>, EvalError> {
    let (target, source) = cancel_common(p);
    if source.iter().chain(&target).any(|w| w.iter().all(|&x| x == 0)) {
        return Err(EvalError::ZeroWeight);
    }
    let num = euler_product::<F>(p.l, &target);
    let den = euler_product::<F>(p.l, &source);
    let q = num.exact_div(&den).ok_or(EvalError::NonDivisible)?;
    if !q.is_homogeneous_of(p.l) {
        return Err(EvalError::NonDivisible);
    }
    Ok(q.relabel_truncation(p.l))
}

/// Precomputed data for evaluating many series at one prototype.
#[derive(Clone, Debug)]
pub struct Evaluator<F> {
    l: u32,
    k: u32,
    chern: Vec<GradedSeries<F>>,
    euler: GradedSeries<F>,
}

impl<F: Scalar> Evaluator<F> {
    pub fn new(p: &PrototypeModel, k: u32) -> Result<Self, EvalError> {
        let c = relative_chern::<F>(p, k);
        let chern = (0..=k).map(|i| c.graded_component(i)).collect();
        Ok(Evaluator {
            l: p.l,
            k,
            chern,
            euler: euler_ratio(p)?,
        })
    }

    /// Degree-`i` relative Chern class.
    pub fn chern(&self, i: u32) -> GradedSeries<F> {
        self.chern
            .get(i as usize)
            .cloned()
            .unwrap_or_else(|| GradedSeries::zero(self.l, self.k))
    }

    pub fn euler(&self) -> &GradedSeries<F> {
        &self.euler
    }

    /// `s_λ(f) = eu-ratio · Π c_{λ_i}(f)`.
    pub fn landweber_novikov(&self, lambda: &Partition) -> GradedSeries<F> {
        let mut acc = self.euler.with_truncation(self.k);
        for &part in lambda.parts() {
            if acc.is_zero() {
                break;
            }
            acc = acc.mul_bounded(&self.chern(part), self.k, None);
        }
        acc
    }

    /// Substitutes `c_i ↦ c_i(f)` and `s_λ ↦ s_λ(f)`; torus variables pass through.
    pub fn evaluate(&self, series: &GradedSeries<F>) -> Result<GradedSeries<F>, EvalError> {
        if series.l() != self.l {
            return Err(SeriesError::MismatchedL {
                left: series.l(),
                right: self.l,
            }
            .into());
        }
        let cache: std::cell::RefCell<BTreeMap<Partition, GradedSeries<F>>> = Default::default();
        let out = series.substitute(
            self.l,
            self.k,
            |v| match v {
                Var::C(i) => Ok(Some(self.chern(*i))),
                Var::S(lambda) => {
                    let mut c = cache.borrow_mut();
                    let s = c.entry(lambda.clone()).or_insert_with(|| self.landweber_novikov(lambda));
                    Ok(Some(s.clone()))
                }
                Var::T(name) => Err(SeriesError::UnexpectedVariable(format!("t_{name}"))),
                Var::X(_) => Ok(None),
            },
            false,
        )?;
        Ok(out)
    }
}

/// Evaluates a series in `c` and `s` at the prototype, truncated at `k`.
pub fn evaluate_at_prototype<F: Scalar>(
    series: &GradedSeries<F>,
    p: &PrototypeModel,
    k: u32,
) -> Result<GradedSeries<F>, EvalError> {
    Evaluator::new(p, k)?.evaluate(series)
}

/// `Π w / Π (1+w)`: the equivariant ssm class of the origin of the target.
pub fn ssm_origin<F: Scalar>(l: u32, weights: &[Weight], k: u32) -> Result<GradedSeries<F>, EvalError> {
    if weights.iter().any(|w| w.iter().all(|&x| x == 0)) {
        return Err(EvalError::ZeroWeight);
    }
    let eu = euler_product::<F>(l, weights).with_truncation(k);
    let c = total_class::<F>(l, weights, k);
    Ok(eu.mul_bounded(&c.inverse(k)?, k, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prototype::{build_prototype, PrototypeOptions};
    use crate::series::Monomial;
    use crate::singularity::{AlgebraName, Catalog};
    use crate::{Rational, Series};

    fn x(j: u32) -> Series {
        Series::variable(1, 10, Var::X(j))
    }

    fn n(v: i64) -> Series {
        Series::constant(1, 10, Rational::from_i64(v))
    }

    #[test]
    fn a0_values() {
        let p = PrototypeModel::a0(1);
        assert_eq!(relative_chern::<Rational>(&p, 3), n(1).add(&x(0)).with_truncation(3));
        assert_eq!(euler_ratio::<Rational>(&p).unwrap().with_truncation(10), x(0));
        let s1 = Series::variable(1, 4, Var::s(&[1]));
        let v = evaluate_at_prototype(&s1, &p, 4).unwrap();
        assert_eq!(v, x(0).mul(&x(0)).with_truncation(4));
    }

    #[test]
    fn ssm_of_a_point() {
        let b = x(0);
        let expected = b.sub(&b.mul(&b)).add(&b.mul(&b).mul(&b)).with_truncation(3);
        assert_eq!(ssm_origin::<Rational>(1, &[vec![1]], 3).unwrap(), expected);
        assert!(matches!(ssm_origin::<Rational>(1, &[vec![0]], 3), Err(EvalError::ZeroWeight)));
    }

    #[test]
    fn a1_euler_ratio() {
        let cat = Catalog::bundled();
        let p = build_prototype(cat.get(AlgebraName::A(1)).unwrap(), 1, PrototypeOptions::default()).unwrap();
        let e = euler_ratio::<Rational>(&p).unwrap();
        assert_eq!(e.with_truncation(10), x(1).scale(&Rational::from_i64(2)));
    }

    #[test]
    fn constants_evaluate_to_themselves() {
        let p = PrototypeModel::a0(2);
        let one = GradedSeries::<Rational>::one(2, 5);
        assert_eq!(evaluate_at_prototype(&one, &p, 5).unwrap(), one);
    }

    #[test]
    fn t_variables_are_refused() {
        let p = PrototypeModel::a0(1);
        let t = Series::monomial(1, 3, Monomial::var(Var::T("A0".into())), Rational::from_i64(1));
        assert!(evaluate_at_prototype(&t, &p, 3).is_err());
    }
}
