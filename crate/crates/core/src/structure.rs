//! Tables of kernel series and the exponential structure formulas.
//!
//! Target Thom polynomials are coefficients of
//! `Σ A_Ψ t^Ψ/|Aut Ψ| = exp(Σ S_Ψ t^Ψ/|Aut Ψ|)`, source ones of
//! `Σ Th^S_Ψ t^Ψ/|Aut Ψ| = (Σ R_Ψ t^Ψ/|Aut Ψ|)·exp(…)`. The operators `F` and
//! `FF` push source series to the target.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::StructureError;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::series::{GradedSeries, Monomial, Var};
use crate::singularity::Multisingularity;

/// What the series of a table are.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// s-linear kernels `S_Ψ`.
    S,
    /// c-only kernels `R_Ψ`, stored with c-degree up to `truncation − l`.
    R,
    TargetThom,
    SourceThom,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::S => "s",
            Flavor::R => "r",
            Flavor::TargetThom => "target-thom",
            Flavor::SourceThom => "source-thom",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "s" => Ok(Flavor::S),
            "r" => Ok(Flavor::R),
            "target-thom" => Ok(Flavor::TargetThom),
            "source-thom" => Ok(Flavor::SourceThom),
            other => Err(format!("unknown table flavor `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Solved,
    BundledFromPaper,
    Imported,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Solved => "solved",
            Provenance::BundledFromPaper => "bundled-from-paper",
            Provenance::Imported => "imported",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "solved" => Ok(Provenance::Solved),
            "bundled-from-paper" => Ok(Provenance::BundledFromPaper),
            "imported" => Ok(Provenance::Imported),
            other => Err(format!("unknown provenance `{other}`")),
        }
    }
}

/// Series indexed by multisingularities. `truncation` is in target degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTable<F> {
    pub l: u32,
    pub truncation: u32,
    pub flavor: Flavor,
    pub provenance: Provenance,
    pub citation: Option<String>,
    entries: BTreeMap<Multisingularity, GradedSeries<F>>,
}

impl<F: Scalar> SeriesTable<F> {
    pub fn new(l: u32, truncation: u32, flavor: Flavor, provenance: Provenance) -> Self {
        SeriesTable {
            l,
            truncation,
            flavor,
            provenance,
            citation: None,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, psi: Multisingularity, s: GradedSeries<F>) {
        self.entries.insert(psi, s);
    }

    pub fn get(&self, psi: &Multisingularity) -> Option<&GradedSeries<F>> {
        self.entries.get(psi)
    }

    pub fn require(&self, psi: &Multisingularity) -> Result<&GradedSeries<F>, StructureError> {
        self.get(psi).ok_or_else(|| StructureError::MissingEntry(psi.to_string()))
    }

    /// Entries ordered by size of the multisingularity, then canonically.
    pub fn entries(&self) -> impl Iterator<Item = (&Multisingularity, &GradedSeries<F>)> {
        let mut v: Vec<_> = self.entries.iter().collect();
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        v.into_iter()
    }

    pub fn keys(&self) -> Vec<Multisingularity> {
        self.entries().map(|(k, _)| k.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Checks the flavor constraints and the shared `l`.
    pub fn validate(&self) -> Result<(), StructureError> {
        for (psi, s) in &self.entries {
            if s.l() != self.l {
                return Err(StructureError::Series(crate::SeriesError::MismatchedL {
                    left: self.l,
                    right: s.l(),
                }));
            }
            match self.flavor {
                Flavor::S if !s.is_s_linear() => return Err(StructureError::NotSLinear(psi.to_string())),
                Flavor::R if !s.only_vars(|v| matches!(v, Var::C(_))) => {
                    return Err(StructureError::NotCOnly(psi.to_string()))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn split_t(m: &Monomial) -> (Monomial, Monomial) {
    m.partition_by(|v| matches!(v, Var::T(_)))
}

/// `N = exp(Σ_{Ψ ⊆ psi0} S_Ψ t^Ψ/|Aut Ψ|)` with `t` monomials bounded by `psi0`.
pub fn generating_exp<F: Scalar>(
    table: &SeriesTable<F>,
    psi0: &Multisingularity,
    k: u32,
) -> Result<GradedSeries<F>, StructureError> {
    let psi0 = psi0.t_flavor();
    let mut g = GradedSeries::zero(table.l, k);
    for psi in psi0.sub_multisingularities() {
        let s = table.require(&psi)?;
        if !s.is_s_linear() {
            return Err(StructureError::NotSLinear(psi.to_string()));
        }
        let tm = psi.t_monomial();
        let inv = F::one() / F::from_i64(psi.aut_order() as i64);
        for (m, c) in s.terms() {
            g.add_term(m.mul(&tm), c.mul_ref(&inv));
        }
    }
    Ok(g.exp_bounded(k, Some(&psi0.t_bound()))?)
}

/// Coefficient of `t^Ψ` in a series with bookkeeping variables.
pub fn t_coefficient<F: Scalar>(n: &GradedSeries<F>, psi: &Multisingularity) -> GradedSeries<F> {
    let target = psi.t_flavor().t_monomial();
    n.map_monomials(n.l(), n.truncation(), |m| {
        let (t, rest) = split_t(m);
        (t == target).then(|| (rest, F::one()))
    })
}

/// Target Thom polynomials `A_Ψ` for all `Ψ ⊆ psi0`.
pub fn assemble_target<F: Scalar>(
    table: &SeriesTable<F>,
    psi0: &Multisingularity,
    k: u32,
) -> Result<SeriesTable<F>, StructureError> {
    let n = generating_exp(table, psi0, k)?;
    let mut out = SeriesTable::new(table.l, k, Flavor::TargetThom, table.provenance);
    for psi in psi0.t_flavor().sub_multisingularities() {
        let aut = F::from_i64(psi.aut_order() as i64);
        out.insert(psi.clone(), t_coefficient(&n, &psi).scale(&aut));
    }
    Ok(out)
}

/// `R` entry for an S-multisingularity; tables may key it by the underlying multiset.
fn r_entry<'a, F: Scalar>(
    r_table: &'a SeriesTable<F>,
    phi: &Multisingularity,
) -> Result<&'a GradedSeries<F>, StructureError> {
    r_table
        .get(phi)
        .or_else(|| r_table.get(&phi.t_flavor()))
        .ok_or_else(|| StructureError::MissingEntry(phi.to_string()))
}

/// Source Thom polynomial `Th^S_Ψ` of an S-multisingularity, truncated at `k`.
pub fn assemble_source<F: Scalar>(
    r_table: &SeriesTable<F>,
    s_table: &SeriesTable<F>,
    psi: &Multisingularity,
    k: u32,
) -> Result<GradedSeries<F>, StructureError> {
    if psi.distinguished().is_none() {
        return Err(StructureError::NotSFlavor(psi.to_string()));
    }
    let l = s_table.l;
    let n = generating_exp(s_table, psi, k)?;
    let bound = psi.t_bound();
    let mut r_gen = GradedSeries::zero(l, k);
    for phi in psi.sub_multisingularities() {
        let r = r_entry(r_table, &phi)?;
        if !r.only_vars(|v| matches!(v, Var::C(_))) {
            return Err(StructureError::NotCOnly(phi.to_string()));
        }
        let tm = phi.t_monomial();
        let inv = F::one() / F::from_i64(phi.aut_order() as i64);
        for (m, c) in r.terms() {
            r_gen.add_term(m.mul(&tm), c.mul_ref(&inv));
        }
    }
    let m = r_gen.mul_bounded(&n, k, Some(&bound));
    let aut = F::from_i64(psi.aut_order() as i64);
    Ok(t_coefficient(&m, psi).scale(&aut))
}

/// `F`: `c_λ·m(s) ↦ s_λ·m(s)`; a c-free term `m(s)` maps to `s_∅·m(s)`.
pub fn f_map<F: Scalar>(p: &GradedSeries<F>) -> GradedSeries<F> {
    let l = p.l();
    p.map_monomials(l, p.truncation() + l, |m| {
        let (c, rest) = m.partition_by(|v| matches!(v, Var::C(_)));
        Some((rest.mul(&Monomial::var(Var::S(c.c_part()))), F::one()))
    })
}

/// `1 + c_1 + c_2 + ⋯ + c_k`.
pub fn total_chern<F: Scalar>(l: u32, k: u32) -> GradedSeries<F> {
    let mut s = GradedSeries::one(l, k);
    for i in 1..=k {
        s.add_term(Monomial::var(Var::C(i)), F::one());
    }
    s
}

/// `FF(W) = F(W/(1 + c_1 + c_2 + ⋯))`, valid to target degree `k`.
pub fn ff_map<F: Scalar>(p: &GradedSeries<F>, k: u32) -> Result<GradedSeries<F>, StructureError> {
    let l = p.l();
    let kk = k.saturating_sub(l);
    let inv = total_chern::<F>(l, kk).inverse(kk)?;
    let q = p.with_truncation(kk).mul_bounded(&inv, kk, None);
    Ok(f_map(&q).relabel_truncation(k))
}

/// `R = (Σ a_λ c_λ)(1 + c_1 + ⋯)` for `S = Σ a_λ s_λ`, truncated at c-degree `k − l`.
pub fn r_from_s<F: Scalar>(s: &GradedSeries<F>, k: u32) -> Result<GradedSeries<F>, StructureError> {
    let l = s.l();
    let kk = k.saturating_sub(l);
    let mut lin = GradedSeries::zero(l, kk);
    for (m, c) in s.terms() {
        match m.factors() {
            [(Var::S(lambda), 1)] => lin.add_term(Monomial::c_partition(lambda), c.clone()),
            _ => return Err(StructureError::NotSLinear(format!("{s}"))),
        }
    }
    Ok(lin.mul_bounded(&total_chern(l, kk), kk, None))
}

/// `s_λ` images used when pushing an `R` row to the target.
pub fn s_of(parts: &[u32]) -> Var {
    Var::S(Partition::new(parts.to_vec()).expect("positive parts"))
}
