//! Truncated multivariate power series with exact coefficients.
//!
//! Variables come in four kinds: Chern classes `c_i` (degree `i`),
//! Landweber-Novikov classes `s_λ` (degree `l + |λ|`), bookkeeping variables
//! `t_η` (degree 0) and torus characters `x_j` (degree 1). A series is a map
//! from canonical monomials to nonzero coefficients, truncated at a
//! cohomological degree.

use std::collections::BTreeMap;
use std::fmt;


use crate::error::SeriesError;
use crate::partition::Partition;
use crate::scalar::Scalar;

/// Variable kinds are ordered C < S < T < X; within a kind by index or partition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    C(u32),
    S(Partition),
    T(String),
    X(u32),
}

impl Var {
    pub fn degree(&self, l: u32) -> u32 {
        match self {
            Var::C(i) => *i,
            Var::S(p) => l + p.weight(),
            Var::T(_) => 0,
            Var::X(_) => 1,
        }
    }

    pub fn s(parts: &[u32]) -> Var {
        Var::S(Partition::new(parts.to_vec()).expect("valid partition"))
    }

    pub fn s0() -> Var {
        Var::S(Partition::empty())
    }
}

/// Upper bounds on the exponents of `t` variables.
pub type TBound = BTreeMap<String, u32>;

/// Sorted list of `(variable, exponent)` pairs with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_factors<I: IntoIterator<Item = (Var, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in factors {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial(map.into_iter().collect())
    }

    /// Product of `c_{λ_1} c_{λ_2} ⋯`.
    pub fn c_partition(p: &Partition) -> Self {
        Monomial::from_factors(p.parts().iter().map(|&i| (Var::C(i), 1)))
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self, l: u32) -> u32 {
        self.0.iter().map(|(v, e)| v.degree(l) * e).sum()
    }

    pub fn s_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| matches!(v, Var::S(_)))
            .map(|(_, e)| e)
            .sum()
    }

    pub fn t_count(&self) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| matches!(v, Var::T(_)))
            .map(|(_, e)| e)
            .sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn fits(&self, bound: &TBound) -> bool {
        self.0.iter().all(|(v, e)| match v {
            Var::T(name) => bound.get(name).is_some_and(|b| e <= b),
            _ => true,
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits off all factors of the given kind.
    pub fn partition_by<P: Fn(&Var) -> bool>(&self, pred: P) -> (Monomial, Monomial) {
        let (yes, no): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(v, _)| pred(v));
        (Monomial(yes), Monomial(no))
    }

    /// Multiset of `c` indices as a partition.
    pub fn c_part(&self) -> Partition {
        let mut parts = Vec::new();
        for (v, e) in &self.0 {
            if let Var::C(i) = v {
                parts.extend(std::iter::repeat_n(*i, *e as usize));
            }
        }
        Partition::new(parts).expect("c indices are positive")
    }

    /// Exact quotient `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.0 {
            let mut e = *e;
            if j < other.0.len() && other.0[j].0 == *v {
                if other.0[j].1 > e {
                    return None;
                }
                e -= other.0[j].1;
                j += 1;
            }
            if e > 0 {
                out.push((v.clone(), e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }
}

/// A truncated power series over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedSeries<F> {
    l: u32,
    truncation: u32,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> GradedSeries<F> {
    pub fn zero(l: u32, truncation: u32) -> Self {
        GradedSeries {
            l,
            truncation,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(l: u32, truncation: u32) -> Self {
        Self::constant(l, truncation, F::one())
    }

    pub fn constant(l: u32, truncation: u32, c: F) -> Self {
        let mut s = Self::zero(l, truncation);
        s.add_term(Monomial::one(), c);
        s
    }

    pub fn variable(l: u32, truncation: u32, v: Var) -> Self {
        Self::monomial(l, truncation, Monomial::var(v), F::one())
    }

    pub fn monomial(l: u32, truncation: u32, m: Monomial, c: F) -> Self {
        let mut s = Self::zero(l, truncation);
        s.add_term(m, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(l: u32, truncation: u32, terms: I) -> Self {
        let mut s = Self::zero(l, truncation);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, F> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&Monomial::one())
    }

    /// Adds `c·m`; terms above the truncation are dropped and zero sums removed.
    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() || m.degree(self.l) > self.truncation {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_term_ref(&mut self, m: Monomial, c: &F) {
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign_ref(c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn with_truncation(&self, k: u32) -> Self {
        let mut out = Self::zero(self.l, k);
        for (m, c) in &self.terms {
            if m.degree(self.l) <= k {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Reinterprets the series with a different truncation bound without dropping terms.
    pub fn relabel_truncation(mut self, k: u32) -> Self {
        self.truncation = k;
        self.terms.retain(|m, _| m.degree(self.l) <= k);
        self
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.degree(self.l)
    }

    /// Terms of cohomological degree exactly `r`.
    pub fn graded_component(&self, r: u32) -> Self {
        let mut out = Self::zero(self.l, self.truncation);
        for (m, c) in &self.terms {
            if m.degree(self.l) == r {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Terms of cohomological degree at most `r`.
    pub fn up_to(&self, r: u32) -> Self {
        let mut out = Self::zero(self.l, self.truncation);
        for (m, c) in &self.terms {
            if m.degree(self.l) <= r {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(self.l)).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree(self.l)).max()
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree(self.l) == d)
    }

    pub fn is_s_linear(&self) -> bool {
        self.terms.keys().all(|m| m.s_degree() == 1)
    }

    pub fn only_vars<P: Fn(&Var) -> bool>(&self, pred: P) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors().iter().all(|(v, _)| pred(v)))
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.l, self.truncation);
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(m.clone(), x.mul_ref(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    fn check_l(&self, other: &Self) -> Result<(), SeriesError> {
        if self.l != other.l {
            return Err(SeriesError::MismatchedL {
                left: self.l,
                right: other.l,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_l(other)?;
        let k = self.truncation.min(other.truncation);
        let mut out = self.with_truncation(k);
        for (m, c) in &other.terms {
            if m.degree(self.l) <= k {
                out.add_term_ref(m.clone(), c);
            }
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&other.neg())
    }

    /// Sum; panics on mismatched `l`.
    pub fn add(&self, other: &Self) -> Self {
        self.checked_add(other).expect("series with matching l")
    }

    /// Difference; panics on mismatched `l`.
    pub fn sub(&self, other: &Self) -> Self {
        self.checked_sub(other).expect("series with matching l")
    }

    /// Product truncated at degree `k`.
    pub fn mul_trunc(&self, other: &Self, k: u32) -> Result<Self, SeriesError> {
        self.check_l(other)?;
        Ok(self.mul_bounded(other, k, None))
    }

    /// Product truncated at `min` of both truncations; panics on mismatched `l`.
    pub fn mul(&self, other: &Self) -> Self {
        let k = self.truncation.min(other.truncation);
        self.mul_trunc(other, k).expect("series with matching l")
    }

    /// Product truncated at degree `k` and, if given, at the `t` bound.
    pub fn mul_bounded(&self, other: &Self, k: u32, tbound: Option<&TBound>) -> Self {
        let l = self.l;
        let mut out = Self::zero(l, k);
        let by_degree = bucket_by_degree(&other.terms, l, k);
        for (ma, ca) in &self.terms {
            let da = ma.degree(l);
            if da > k {
                continue;
            }
            for bucket in &by_degree[..=(k - da) as usize] {
                for (mb, cb) in bucket {
                    let m = ma.mul(mb);
                    if let Some(b) = tbound {
                        if !m.fits(b) {
                            continue;
                        }
                    }
                    let c = ca.mul_ref(cb);
                    out.add_term_ref(m, &c);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32, k: u32) -> Self {
        let mut acc = Self::one(self.l, k);
        for _ in 0..n {
            acc = acc.mul_bounded(self, k, None);
        }
        acc
    }

    /// Grading used by the exponential recurrences: degree plus number of `t` factors.
    fn weight(&self, m: &Monomial) -> u32 {
        m.degree(self.l) + m.t_count()
    }

    fn max_weight(&self, k: u32, tbound: Option<&TBound>) -> Result<u32, SeriesError> {
        let has_t = self.terms.keys().any(|m| m.t_count() > 0);
        match (has_t, tbound) {
            (false, _) => Ok(k),
            (true, Some(b)) => Ok(k + b.values().sum::<u32>()),
            (true, None) => Err(SeriesError::UnboundedT),
        }
    }

    fn split_by_weight(&self, maxw: u32) -> Vec<Vec<(Monomial, F)>> {
        let mut parts = vec![Vec::new(); maxw as usize + 1];
        for (m, c) in &self.terms {
            let w = self.weight(m);
            if w <= maxw {
                parts[w as usize].push((m.clone(), c.clone()));
            }
        }
        parts
    }

    /// `exp(p)` truncated at degree `k`; `p` must have zero constant term.
    pub fn exp(&self, k: u32) -> Result<Self, SeriesError> {
        self.exp_bounded(k, None)
    }

    /// `exp(p)` truncated at degree `k`, dropping `t` monomials outside `tbound`.
    pub fn exp_bounded(&self, k: u32, tbound: Option<&TBound>) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::NonzeroConstant);
        }
        let maxw = self.max_weight(k, tbound)?;
        let p = self.split_by_weight(maxw);
        // w·E_w = Σ_j j·P_j·E_{w−j}
        let mut e: Vec<BTreeMap<Monomial, F>> = Vec::with_capacity(maxw as usize + 1);
        e.push(BTreeMap::from([(Monomial::one(), F::one())]));
        for w in 1..=maxw {
            let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
            for j in 1..=w {
                let pj = &p[j as usize];
                if pj.is_empty() {
                    continue;
                }
                let fj = F::from_i64(j as i64);
                for (mp, cp) in pj {
                    let cp = cp.mul_ref(&fj);
                    for (me, ce) in &e[(w - j) as usize] {
                        let m = mp.mul(me);
                        if m.degree(self.l) > k || tbound.is_some_and(|b| !m.fits(b)) {
                            continue;
                        }
                        accumulate(&mut acc, m, cp.mul_ref(ce));
                    }
                }
            }
            let inv = F::one() / F::from_i64(w as i64);
            for c in acc.values_mut() {
                *c = c.mul_ref(&inv);
            }
            e.push(acc);
        }
        let mut out = Self::zero(self.l, k);
        for part in e {
            for (m, c) in part {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// `log(p)` truncated at degree `k`; `p` must have constant term one.
    pub fn log(&self, k: u32) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantNotOne);
        }
        let maxw = self.max_weight(k, None).or_else(|_| {
            let t = self.terms.keys().map(|m| m.t_count()).max().unwrap_or(0);
            Ok::<u32, SeriesError>(k + t)
        })?;
        let e = self.split_by_weight(maxw);
        // w·L_w = w·E_w − Σ_{j<w} j·L_j·E_{w−j}
        let mut lparts: Vec<BTreeMap<Monomial, F>> = vec![BTreeMap::new(); maxw as usize + 1];
        for w in 1..=maxw {
            let fw = F::from_i64(w as i64);
            let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
            for (m, c) in &e[w as usize] {
                accumulate(&mut acc, m.clone(), c.mul_ref(&fw));
            }
            for j in 1..w {
                let fj = F::from_i64(j as i64);
                for (ml, cl) in &lparts[j as usize] {
                    let cl = cl.mul_ref(&fj);
                    for (me, ce) in &e[(w - j) as usize] {
                        let m = ml.mul(me);
                        if m.degree(self.l) > k {
                            continue;
                        }
                        accumulate(&mut acc, m, -cl.mul_ref(ce));
                    }
                }
            }
            let inv = F::one() / fw;
            for c in acc.values_mut() {
                *c = c.mul_ref(&inv);
            }
            lparts[w as usize] = acc;
        }
        let mut out = Self::zero(self.l, k);
        for part in lparts {
            for (m, c) in part {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse truncated at `k`; the constant term must be invertible
    /// and every other monomial must have positive degree.
    pub fn inverse(&self, k: u32) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        if self.terms.keys().any(|m| !m.is_one() && m.degree(self.l) == 0) {
            return Err(SeriesError::NotInvertible);
        }
        let inv0 = F::one() / c0;
        let p = self.split_by_degree(k);
        let mut q: Vec<BTreeMap<Monomial, F>> = Vec::with_capacity(k as usize + 1);
        q.push(BTreeMap::from([(Monomial::one(), inv0.clone())]));
        for d in 1..=k {
            let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();
            for j in 1..=d {
                for (mp, cp) in &p[j as usize] {
                    for (mq, cq) in &q[(d - j) as usize] {
                        accumulate(&mut acc, mp.mul(mq), -cp.mul_ref(cq));
                    }
                }
            }
            for c in acc.values_mut() {
                *c = c.mul_ref(&inv0);
            }
            q.push(acc);
        }
        let mut out = Self::zero(self.l, k);
        for part in q {
            for (m, c) in part {
                out.add_term(m, c);
            }
        }
        Ok(out)
    }

    fn split_by_degree(&self, k: u32) -> Vec<Vec<(Monomial, F)>> {
        let mut parts = vec![Vec::new(); k as usize + 1];
        for (m, c) in &self.terms {
            let d = m.degree(self.l);
            if d <= k {
                parts[d as usize].push((m.clone(), c.clone()));
            }
        }
        parts
    }

    /// Ring-homomorphic substitution truncated at `k`. Variables for which
    /// `image` returns `None` are kept as they are. The result lives in `out_l`.
    ///
    /// With `check_degrees` set every image must be homogeneous of the degree of
    /// the variable it replaces.
    pub fn substitute<G>(&self, out_l: u32, k: u32, image: G, check_degrees: bool) -> Result<Self, SeriesError>
    where
        G: Fn(&Var) -> Result<Option<GradedSeries<F>>, SeriesError>,
    {
        let mut cache: BTreeMap<Var, Vec<GradedSeries<F>>> = BTreeMap::new();
        let mut out = Self::zero(out_l, k);
        for (m, c) in &self.terms {
            let mut acc = GradedSeries::constant(out_l, k, c.clone());
            for (v, e) in m.factors() {
                if !cache.contains_key(v) {
                    let img = match image(v)? {
                        Some(s) => {
                            if s.l != out_l {
                                return Err(SeriesError::MismatchedL {
                                    left: out_l,
                                    right: s.l,
                                });
                            }
                            if check_degrees && !s.is_homogeneous_of(v.degree(self.l)) {
                                return Err(SeriesError::InhomogeneousImage(format!("{v:?}")));
                            }
                            s
                        }
                        None => GradedSeries::variable(out_l, k, v.clone()),
                    };
                    cache.insert(v.clone(), vec![GradedSeries::one(out_l, k), img]);
                }
                let powers = cache.get_mut(v).expect("cached");
                while powers.len() <= *e as usize {
                    let next = powers.last().unwrap().mul_bounded(&powers[1], k, None);
                    powers.push(next);
                }
                acc = acc.mul_bounded(&powers[*e as usize], k, None);
                if acc.is_zero() {
                    break;
                }
            }
            for (mm, cc) in acc.terms {
                out.add_term(mm, cc);
            }
        }
        Ok(out)
    }

    /// Substitutes every `s_λ` by its image; other variables are kept.
    pub fn substitute_s(&self, images: &BTreeMap<Partition, GradedSeries<F>>, k: u32) -> Result<Self, SeriesError> {
        self.substitute(
            self.l,
            k,
            |v| match v {
                Var::S(p) => images
                    .get(p)
                    .cloned()
                    .map(Some)
                    .ok_or_else(|| SeriesError::MissingImage(format!("s_{{{p}}}"))),
                _ => Ok(None),
            },
            true,
        )
    }

    /// Applies `f` to every monomial (coefficients are multiplied by the returned factor).
    pub fn map_monomials<G>(&self, out_l: u32, k: u32, f: G) -> Self
    where
        G: Fn(&Monomial) -> Option<(Monomial, F)>,
    {
        let mut out = Self::zero(out_l, k);
        for (m, c) in &self.terms {
            if let Some((mm, factor)) = f(m) {
                out.add_term(mm, c.mul_ref(&factor));
            }
        }
        out
    }

    /// Exact quotient of polynomials using the lexicographic leading term.
    /// Returns `None` if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (lead_m, lead_c) = divisor.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.l, self.truncation);
        while let Some((m, c)) = rem
            .terms
            .iter()
            .max_by(|a, b| lex_cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            let qm = m.div(lead_m)?;
            let qc = c / lead_c.clone();
            quot.add_term(qm.clone(), qc.clone());
            for (dm, dc) in &divisor.terms {
                rem.add_term_ref(qm.mul(dm), &-(qc.mul_ref(dc)));
            }
        }
        Some(quot)
    }
}

/// Pure lexicographic monomial order: the smallest variable has the highest priority.
pub fn lex_cmp(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let (a, b) = (a.factors(), b.factors());
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ea != eb {
                        return ea.cmp(eb);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

fn accumulate<F: Scalar>(acc: &mut BTreeMap<Monomial, F>, m: Monomial, c: F) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            e.get_mut().add_assign_ref(&c);
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn bucket_by_degree<F>(terms: &BTreeMap<Monomial, F>, l: u32, k: u32) -> Vec<Vec<(&Monomial, &F)>> {
    let mut out = vec![Vec::new(); k as usize + 1];
    for (m, c) in terms {
        let d = m.degree(l);
        if d <= k {
            out[d as usize].push((m, c));
        }
    }
    out
}

/// Options for the human-readable rendering.
#[derive(Clone, Copy, Debug, Default)]
pub struct RenderOptions {
    /// Write repeated parts with exponents, `s_{3 1^2}` instead of `s_{311}`.
    pub compress: bool,
}

fn torus_name(j: u32) -> String {
    if j < 26 {
        ((b'a' + j as u8) as char).to_string()
    } else {
        format!("x_{j}")
    }
}

fn sub(text: &str) -> String {
    if text.chars().count() == 1 {
        format!("_{text}")
    } else {
        format!("_{{{text}}}")
    }
}

pub fn render_monomial(m: &Monomial, opts: RenderOptions) -> String {
    let mut pieces = Vec::new();
    let cp = m.c_part();
    if !cp.is_empty() {
        pieces.push(format!("c{}", sub(&cp.subscript(opts.compress))));
    }
    for (v, e) in m.factors() {
        let base = match v {
            Var::C(_) => continue,
            Var::S(p) => format!("s{}", sub(&p.subscript(opts.compress))),
            Var::T(name) => format!("t{}", sub(name)),
            Var::X(j) => torus_name(*j),
        };
        if *e == 1 {
            pieces.push(base);
        } else {
            pieces.push(format!("{base}^{e}"));
        }
    }
    pieces.join(" ")
}

impl<F: Scalar> GradedSeries<F> {
    /// Terms by increasing degree; within a degree, larger monomials first.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &F)> {
        let mut v: Vec<(&Monomial, &F)> = self.terms.iter().collect();
        v.sort_by(|a, b| {
            a.0.degree(self.l)
                .cmp(&b.0.degree(self.l))
                .then_with(|| b.0.cmp(a.0))
        });
        v
    }

    pub fn render(&self, opts: RenderOptions) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.clone() < F::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            let body = render_monomial(m, opts);
            let coeff = if body.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                String::new()
            } else {
                format!("{abs} ")
            };
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            out.push_str(&coeff);
            out.push_str(&body);
        }
        out
    }
}

impl<F: Scalar> fmt::Display for GradedSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(RenderOptions::default()))
    }
}
