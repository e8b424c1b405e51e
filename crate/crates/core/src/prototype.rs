//! Torus-weighted prototypes of monosingularities.
//!
//! The prototype of a genotype `g: (C^a, 0) → (C^{a+l}, 0)` is its miniversal
//! unfolding along a complement `V` of `t_g(θ_a) + g*(m_{a+l})·θ_g` inside
//! `m_a·θ_g`. Everything is graded by the torus that scales the genotype, so
//! the complement is computed block by block, one block per torus character.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::PrototypeError;
use crate::linalg;
use crate::scalar::Scalar;
use crate::series::{GradedSeries, Var};
use crate::singularity::{Component, LocalAlgebra, Monosingularity};
use crate::Rational;

/// An integer character of the torus, as coordinates in a fixed basis.
pub type Weight = Vec<i64>;

// A vector field on the prototype: (monomial exponent, target component) -> coefficient.
type VfVector = BTreeMap<(Vec<u32>, usize), Rational>;

#[derive(Clone, Copy, Debug, Default)]
pub struct PrototypeOptions {
    /// Largest weighted jet degree examined before declaring the algebra infinite.
    /// Defaults to `2·a·d·w + d` for `a` generators, maximal component degree `d`
    /// and maximal generator weight `w`.
    pub jet_bound: Option<u32>,
}

/// Source and target torus representations of a prototype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrototypeModel {
    pub name: String,
    pub l: u32,
    pub rank: usize,
    /// Characters of the genotype variables.
    pub generator_weights: Vec<Weight>,
    /// Characters of the genotype components, zero components included.
    pub component_weights: Vec<Weight>,
    /// Unfolding directions `x^I·e_j` spanning the complement.
    pub complement: Vec<(Vec<u32>, usize)>,
    pub unfolding_weights: Vec<Weight>,
    pub source_weights: Vec<Weight>,
    pub target_weights: Vec<Weight>,
    pub scodim: u32,
    pub tcodim: u32,
    /// Dimension of the local algebra.
    pub algebra_dim: u32,
}

impl PrototypeModel {
    /// Prototype of `A_0`: the inclusion of a point into `C^l`, with `l` independent characters.
    pub fn a0(l: u32) -> Self {
        let target: Vec<Weight> = (0..l as usize)
            .map(|i| {
                let mut w = vec![0; l as usize];
                w[i] = 1;
                w
            })
            .collect();
        PrototypeModel {
            name: "A0".into(),
            l,
            rank: l as usize,
            generator_weights: vec![],
            component_weights: target.clone(),
            complement: vec![],
            unfolding_weights: vec![],
            source_weights: vec![],
            target_weights: target,
            scodim: 0,
            tcodim: l,
            algebra_dim: 1,
        }
    }

    /// Linear form `Σ w_i x_i` as a torus polynomial.
    pub fn linear_form<F: Scalar>(&self, w: &Weight, k: u32) -> GradedSeries<F> {
        linear_form(self.l, w, k)
    }
}

pub fn linear_form<F: Scalar>(l: u32, w: &Weight, k: u32) -> GradedSeries<F> {
    let mut s = GradedSeries::zero(l, k);
    for (i, &c) in w.iter().enumerate() {
        s.add_term(crate::series::Monomial::var(Var::X(i as u32)), F::from_i64(c));
    }
    s
}

fn wdeg(e: &[u32], weights: &[u32]) -> u32 {
    e.iter().zip(weights).map(|(a, w)| a * w).sum()
}

/// Exponent vectors in `n` variables of weighted degree exactly `d`.
fn monomials_of_degree(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], i: usize, rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == weights.len() {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[i];
        let mut e = 0;
        while e * w <= rest {
            cur.push(e);
            rec(weights, i + 1, rest - e * w, cur, out);
            cur.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(weights, 0, d, &mut Vec::new(), &mut out);
    out
}

/// Order on monomial vector fields `x^I·e_j`: total degree, then lexicographic
/// in the exponents (earlier variables weigh more), then component.
fn vf_key(v: &(Vec<u32>, usize)) -> (u32, Vec<u32>, usize) {
    (v.0.iter().sum(), v.0.clone(), v.1)
}

fn add_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Integer basis of the characters preserving every nonzero component, then one
/// fresh character per zero component.
fn torus_characters(
    alg: &LocalAlgebra,
    comps: &[Option<Component>],
) -> (usize, Vec<Weight>, Vec<Weight>) {
    let a = alg.generators;
    let nz: Vec<usize> = (0..comps.len()).filter(|&j| comps[j].is_some()).collect();
    let ncols = nz.len() + a;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for (slot, &j) in nz.iter().enumerate() {
        let comp = comps[j].as_ref().expect("nonzero");
        let first = &comp[0].1;
        let mut row = vec![Rational::zero(); ncols];
        row[slot] = Rational::from_i64(1);
        for (i, &e) in first.iter().enumerate() {
            row[nz.len() + i] = Rational::from_i64(-(e as i64));
        }
        rows.push(row);
        for (_, other) in &comp[1..] {
            let mut row = vec![Rational::zero(); ncols];
            for i in 0..a {
                row[nz.len() + i] = Rational::from_i64(first[i] as i64 - other[i] as i64);
            }
            rows.push(row);
        }
    }
    let basis: Vec<Vec<i64>> = linalg::nullspace(rows, ncols)
        .into_iter()
        .map(|v| primitive_integer(&v, nz.len()))
        .collect();
    let fresh = comps.len() - nz.len();
    let rank = basis.len() + fresh;
    let gen: Vec<Weight> = (0..a)
        .map(|i| {
            let mut w: Weight = basis.iter().map(|b| b[nz.len() + i]).collect();
            w.resize(rank, 0);
            w
        })
        .collect();
    let mut comp_w = Vec::new();
    let mut next_fresh = basis.len();
    for j in 0..comps.len() {
        match nz.iter().position(|&x| x == j) {
            Some(slot) => {
                let mut w: Weight = basis.iter().map(|b| b[slot]).collect();
                w.resize(rank, 0);
                comp_w.push(w);
            }
            None => {
                let mut w = vec![0; rank];
                w[next_fresh] = 1;
                next_fresh += 1;
                comp_w.push(w);
            }
        }
    }
    (rank, gen, comp_w)
}

/// Clears denominators and common factors; the first nonzero generator entry is made positive.
fn primitive_integer(v: &[Rational], skip: usize) -> Vec<i64> {
    use num_integer::Integer;
    let d = Rational::common_denominator(v.iter());
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &d).to_integer()).collect();
    let g = ints.iter().fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    let mut out: Vec<i64> = ints
        .iter()
        .map(|x| i64::try_from(x / &g).expect("small character coordinates"))
        .collect();
    let lead = out[skip..].iter().chain(out.iter()).copied().find(|&x| x != 0).unwrap_or(1);
    if lead < 0 {
        for x in out.iter_mut() {
            *x = -*x;
        }
    }
    out
}

fn torus_weight_of(e: &[u32], gen: &[Weight], rank: usize) -> Weight {
    let mut w = vec![0; rank];
    for (i, &a) in e.iter().enumerate() {
        for (c, g) in w.iter_mut().zip(&gen[i]) {
            *c += a as i64 * g;
        }
    }
    w
}

fn sub_weight(a: &Weight, b: &Weight) -> Weight {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Builds the prototype of a monosingularity from its genotype.
pub fn build_prototype(alg: &LocalAlgebra, l: u32, opts: PrototypeOptions) -> Result<PrototypeModel, PrototypeError> {
    let name = alg.name.to_string();
    let comps = alg.padded_genotype(l).map_err(|_| PrototypeError::TooManyComponents {
        name: name.clone(),
        components: alg.genotype.len(),
        limit: alg.generators + l as usize,
    })?;
    let a = alg.generators;
    if a == 0 {
        let mut p = PrototypeModel::a0(l);
        p.name = name;
        return Ok(p);
    }
    let degs = alg
        .component_degrees()
        .map_err(|j| PrototypeError::NotQuasihomogeneous {
            name: name.clone(),
            component: j,
        })?;
    let weights = &alg.weights;
    let maxw = *weights.iter().max().expect("generators");
    let maxd = degs.iter().copied().max().unwrap_or(0);
    let bound = opts
        .jet_bound
        .unwrap_or(2 * a as u32 * maxd.max(1) * maxw + maxd);

    // Smallest D such that every monomial of weighted degree ≥ D lies in the ideal (g).
    let nonzero: Vec<(&Component, u32)> = comps
        .iter()
        .flatten()
        .zip(degs.iter().copied())
        .collect();
    let mut full_run = 0;
    let mut algebra_dim = 1u32;
    let mut w = 1;
    let d_start = loop {
        if w > bound {
            return Err(PrototypeError::NonFinite { name, bound });
        }
        let monos = monomials_of_degree(weights, w);
        let index: BTreeMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for &(comp, d) in &nonzero {
            if d > w {
                continue;
            }
            for j in monomials_of_degree(weights, w - d) {
                let mut row = vec![Rational::zero(); monos.len()];
                for (c, e) in comp {
                    row[index[&add_vec(e, &j)]] += Rational::from_i64(*c);
                }
                rows.push(row);
            }
        }
        let r = linalg::rank(rows, monos.len());
        algebra_dim += (monos.len() - r) as u32;
        if r == monos.len() {
            full_run += 1;
            if full_run == maxw {
                break w + 1 - maxw;
            }
        } else {
            full_run = 0;
        }
        w += 1;
    };

    let (rank, gen_w, comp_w) = torus_characters(alg, &comps);
    let n = comps.len();

    // Monomial vector fields x^I·e_j with |I| ≥ 1 and weighted degree below D.
    let mut low: Vec<Vec<u32>> = Vec::new();
    for d in 1..d_start {
        low.extend(monomials_of_degree(weights, d));
    }
    let mut blocks: BTreeMap<Weight, Vec<(Vec<u32>, usize)>> = BTreeMap::new();
    for e in &low {
        let tw = torus_weight_of(e, &gen_w, rank);
        for (j, cw) in comp_w.iter().enumerate() {
            blocks
                .entry(sub_weight(cw, &tw))
                .or_default()
                .push((e.clone(), j));
        }
    }

    // Generators of t_g(θ_a) + g*(m)θ_g, reduced modulo weighted degree ≥ D.
    let mut gens: Vec<VfVector> = Vec::new();
    let mut all_j: Vec<Vec<u32>> = vec![vec![0; a]];
    all_j.extend(low.iter().cloned());
    for j_exp in &all_j {
        for i in 0..a {
            let mut v: VfVector = BTreeMap::new();
            for (jc, comp) in comps.iter().enumerate() {
                let Some(comp) = comp else { continue };
                for (c, e) in comp {
                    if e[i] == 0 {
                        continue;
                    }
                    let mut m = add_vec(e, j_exp);
                    m[i] -= 1;
                    if wdeg(&m, weights) >= d_start {
                        continue;
                    }
                    *v.entry((m, jc)).or_insert_with(Rational::zero) += Rational::from_i64(c * e[i] as i64);
                }
            }
            gens.push(v);
        }
        for &(comp, d) in &nonzero {
            if d + wdeg(j_exp, weights) >= d_start {
                continue;
            }
            for jc in 0..n {
                let mut v: VfVector = BTreeMap::new();
                for (c, e) in comp {
                    *v.entry((add_vec(e, j_exp), jc)).or_insert_with(Rational::zero) += Rational::from_i64(*c);
                }
                gens.push(v);
            }
        }
    }
    let mut rows_by_block: BTreeMap<Weight, Vec<VfVector>> = BTreeMap::new();
    for g in gens {
        let Some(((e, j), _)) = g.iter().find(|(_, c)| !c.is_zero()) else {
            continue;
        };
        let key = sub_weight(&comp_w[*j], &torus_weight_of(e, &gen_w, rank));
        rows_by_block.entry(key).or_default().push(g);
    }

    let mut complement: Vec<(Vec<u32>, usize)> = Vec::new();
    for (key, mut cols) in blocks {
        // Columns from the largest vector field down: pivots are leading terms, and
        // the non-pivot columns form the greedy complement taken from the smallest.
        cols.sort_by_key(|v| std::cmp::Reverse(vf_key(v)));
        let index: BTreeMap<&(Vec<u32>, usize), usize> = cols.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let rows: Vec<Vec<Rational>> = rows_by_block
            .get(&key)
            .map(|gs| {
                gs.iter()
                    .map(|g| {
                        let mut row = vec![Rational::zero(); cols.len()];
                        for (vf, c) in g {
                            row[index[vf]] += c.clone();
                        }
                        row
                    })
                    .collect()
            })
            .unwrap_or_default();
        let ech = linalg::echelon(rows, cols.len());
        for (i, c) in cols.iter().enumerate() {
            if !ech.pivots.contains(&i) {
                complement.push(c.clone());
            }
        }
    }
    complement.sort_by_key(vf_key);

    let unfolding: Vec<Weight> = complement
        .iter()
        .map(|(e, j)| sub_weight(&comp_w[*j], &torus_weight_of(e, &gen_w, rank)))
        .collect();
    let mut source = gen_w.clone();
    source.extend(unfolding.iter().cloned());
    if source.iter().any(|w| w.iter().all(|&x| x == 0)) {
        return Err(PrototypeError::ZeroSourceWeight(name));
    }
    let mut target = comp_w.clone();
    target.extend(unfolding.iter().cloned());
    let scodim = source.len() as u32;
    Ok(PrototypeModel {
        name,
        l,
        rank,
        generator_weights: gen_w,
        component_weights: comp_w,
        complement,
        unfolding_weights: unfolding,
        tcodim: target.len() as u32,
        source_weights: source,
        target_weights: target,
        scodim,
        algebra_dim,
    })
}

/// Result of comparing a built prototype with the family codimension formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormCheck {
    pub matches: bool,
    pub built_scodim: u32,
    pub formula_scodim: u32,
}

pub fn closed_form_check(m: &Monosingularity, opts: PrototypeOptions) -> Result<ClosedFormCheck, PrototypeError> {
    let p = build_prototype(&m.algebra, m.l, opts)?;
    let formula = m.name().scodim(m.l);
    Ok(ClosedFormCheck {
        matches: p.scodim == formula,
        built_scodim: p.scodim,
        formula_scodim: formula,
    })
}

/// Source and target weights of `A_k` at `l = 1` from the closed form, in the
/// basis `(α, β)`: source `{α} ∪ {(k+1−i)α : 1 ≤ i ≤ k−1} ∪ {β − iα : 1 ≤ i ≤ k}`.
pub fn a_k_closed_form(k: u32) -> (Vec<Weight>, Vec<Weight>) {
    let k = k as i64;
    let mut unfolding: Vec<Weight> = (1..k).map(|i| vec![k + 1 - i, 0]).collect();
    unfolding.extend((1..=k).map(|i| vec![-i, 1]));
    let mut source = vec![vec![1, 0]];
    source.extend(unfolding.iter().cloned());
    let mut target = vec![vec![k + 1, 0], vec![0, 1]];
    target.extend(unfolding);
    (source, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singularity::{AlgebraName, Catalog};

    fn sorted(mut v: Vec<Weight>) -> Vec<Weight> {
        v.sort();
        v
    }

    #[test]
    fn a1_at_l1() {
        let cat = Catalog::bundled();
        let p = build_prototype(cat.get(AlgebraName::A(1)).unwrap(), 1, PrototypeOptions::default()).unwrap();
        assert_eq!((p.scodim, p.tcodim), (2, 3));
        assert_eq!(sorted(p.source_weights), sorted(vec![vec![1, 0], vec![-1, 1]]));
        assert_eq!(sorted(p.target_weights), sorted(vec![vec![2, 0], vec![0, 1], vec![-1, 1]]));
        assert_eq!(p.algebra_dim, 2);
    }

    #[test]
    fn i22_complement_matches_hand_computation() {
        let cat = Catalog::bundled();
        let p = build_prototype(cat.get(AlgebraName::I(2, 2)).unwrap(), 1, PrototypeOptions::default()).unwrap();
        assert_eq!((p.scodim, p.tcodim), (7, 8));
        let expected: Vec<(Vec<u32>, usize)> = vec![
            (vec![0, 1], 0),
            (vec![1, 0], 1),
            (vec![0, 1], 2),
            (vec![1, 0], 2),
            (vec![1, 1], 2),
        ];
        let mut got = p.complement.clone();
        got.sort();
        let mut exp = expected;
        exp.sort();
        assert_eq!(got, exp);
        assert_eq!(p.algebra_dim, 4);
    }

    #[test]
    fn i32_has_a_rank_one_grading() {
        let cat = Catalog::bundled();
        let p = build_prototype(cat.get(AlgebraName::I(3, 2)).unwrap(), 1, PrototypeOptions::default()).unwrap();
        assert_eq!(p.rank, 2);
        assert_eq!(p.generator_weights, vec![vec![2, 0], vec![3, 0]]);
        assert_eq!(p.scodim, 9);
    }

    #[test]
    fn infinite_algebra_is_rejected() {
        let alg = LocalAlgebra {
            name: AlgebraName::I(2, 2),
            generators: 2,
            genotype: vec![vec![(1, vec![2, 0])]],
            weights: vec![1, 1],
            torus_certified: false,
        };
        let r = build_prototype(&alg, 1, PrototypeOptions { jet_bound: Some(12) });
        assert!(matches!(r, Err(PrototypeError::NonFinite { bound: 12, .. })));
    }

    #[test]
    fn a0_prototype() {
        let p = PrototypeModel::a0(2);
        assert_eq!((p.scodim, p.tcodim), (0, 2));
        assert!(p.source_weights.is_empty());
        assert_eq!(p.target_weights, vec![vec![1, 0], vec![0, 1]]);
    }
}
