//! Solving for kernel series from vanishing conditions at prototypes.
//!
//! For `Ψ ⊆ Ψ_0` the polynomial `A_Ψ` must satisfy, at every monosingularity
//! `ζ ≠ Ψ` with `tcodim ζ ≤ k`, `(A_Ψ(p_ζ)·c(TN_ζ))|_r = 0` for
//! `r = tcodim ζ, …, k` (the prototype condition); and `A_{A0}` evaluated at the
//! point inclusion must be the ssm class of the origin (the origin condition). Degree by degree the unknown part of `A_Ψ|_d` is
//! exactly `S_Ψ|_d`, so each stage is an affine linear system.

use std::time::Instant;

use serde::Serialize;

use crate::equivariant::{ssm_origin, Evaluator};
use crate::error::SolveError;
use crate::linalg::{self, Solution};
use crate::partition::Partition;
use crate::prototype::{build_prototype, PrototypeModel, PrototypeOptions};
use crate::scalar::Scalar;
use crate::series::{render_monomial, GradedSeries, Monomial, RenderOptions, Var};
use crate::singularity::{AlgebraName, Catalog, Monosingularity, Multisingularity};
use crate::structure::{assemble_target, Flavor, Provenance, SeriesTable};

/// A prototype prepared for evaluation up to a fixed degree.
pub struct PreparedPrototype<F> {
    pub singularity: Monosingularity,
    pub model: PrototypeModel,
    pub evaluator: Evaluator<F>,
    /// `c(TN_ζ) = Π_target (1 + w)`.
    pub target_chern: GradedSeries<F>,
}

impl<F: Scalar> PreparedPrototype<F> {
    pub fn new(m: &Monosingularity, k: u32) -> Result<Self, SolveError> {
        let model = build_prototype(&m.algebra, m.l, PrototypeOptions::default())?;
        Self::from_model(m.clone(), model, k)
    }

    pub fn from_model(m: Monosingularity, model: PrototypeModel, k: u32) -> Result<Self, SolveError> {
        let evaluator = Evaluator::new(&model, k)?;
        let mut target_chern = GradedSeries::one(model.l, k);
        for w in &model.target_weights {
            let f = GradedSeries::one(model.l, k).add(&model.linear_form(w, k));
            target_chern = target_chern.mul_bounded(&f, k, None);
        }
        Ok(PreparedPrototype {
            singularity: m,
            model,
            evaluator,
            target_chern,
        })
    }

    pub fn tcodim(&self) -> u32 {
        self.model.tcodim
    }

    pub fn name(&self) -> AlgebraName {
        self.singularity.name()
    }

    /// `A(p_ζ)·c(TN_ζ)` truncated at `k`.
    pub fn twisted_value(&self, a: &GradedSeries<F>, k: u32) -> Result<GradedSeries<F>, SolveError> {
        let v = self.evaluator.evaluate(&a.with_truncation(k))?;
        Ok(v.mul_bounded(&self.target_chern, k, None))
    }
}

fn prepare_catalog<F: Scalar>(catalog: &Catalog, l: u32, k: u32) -> Result<Vec<PreparedPrototype<F>>, SolveError> {
    catalog
        .for_degree(l, k)?
        .iter()
        .map(|m| PreparedPrototype::new(m, k))
        .collect()
}

fn a0_prototype<F: Scalar>(catalog: &Catalog, l: u32, k: u32) -> Result<PreparedPrototype<F>, SolveError> {
    let m = Monosingularity::new(catalog.get(AlgebraName::A(0))?.clone(), l)?;
    PreparedPrototype::from_model(m, PrototypeModel::a0(l), k)
}

/// Components `r = tcodim ζ, …, k` of `A_Ψ(p_ζ)·c(TN_ζ)`; all zero iff the prototype condition holds.
pub fn condition2_residual<F: Scalar>(
    table: &SeriesTable<F>,
    psi: &Multisingularity,
    zeta: &Monosingularity,
    k: u32,
) -> Result<Vec<GradedSeries<F>>, SolveError> {
    let psi = psi.t_flavor();
    if psi == Multisingularity::mono(zeta.name()) {
        return Err(SolveError::SelfPair(zeta.name().to_string()));
    }
    let p = PreparedPrototype::new(zeta, k)?;
    residual_at(table, &psi, &p, k)
}

fn residual_at<F: Scalar>(
    table: &SeriesTable<F>,
    psi: &Multisingularity,
    p: &PreparedPrototype<F>,
    k: u32,
) -> Result<Vec<GradedSeries<F>>, SolveError> {
    let a = assemble_target(table, psi, k)?;
    let a_psi = a.require(psi)?;
    let v = p.twisted_value(a_psi, k)?;
    Ok((p.tcodim()..=k).map(|r| v.graded_component(r)).collect())
}

/// Components `0..=k` of `A_{A0}(i) − ssm(0 ⊂ C^l)` at the point inclusion `i`.
pub fn condition1_residual_a0<F: Scalar>(
    table: &SeriesTable<F>,
    l: u32,
    k: u32,
) -> Result<Vec<GradedSeries<F>>, SolveError> {
    let a0 = Multisingularity::a0_power(1);
    let a = assemble_target(table, &a0, k)?;
    let model = PrototypeModel::a0(l);
    let ev = Evaluator::<F>::new(&model, k)?.evaluate(&a.require(&a0)?.with_truncation(k))?;
    let ssm = ssm_origin::<F>(l, &model.target_weights, k)?;
    let d = ev.sub(&ssm);
    Ok((0..=k).map(|r| d.graded_component(r)).collect())
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Add the rows `S_Ψ|_r = 0` for `r < tcodim Ψ`.
    pub remark_rows: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { remark_rows: true }
    }
}

/// Linear algebra statistics of one `(degree, Ψ)` stage.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StageReport {
    pub degree: u32,
    pub multisingularity: String,
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub nullity: usize,
    /// The vanishing rows below `tcodim` raised the rank. They are expected to be implied.
    pub remark_rows_active: bool,
    pub micros: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub l: u32,
    pub truncation: u32,
    pub psi0: String,
    pub prototypes: Vec<String>,
    pub stages: Vec<StageReport>,
}

#[derive(Clone, Debug)]
pub struct SolveOutput<F> {
    pub table: SeriesTable<F>,
    pub report: SolveReport,
}

struct Row<F> {
    coeffs: Vec<F>,
    rhs: F,
    label: String,
}

fn push_rows<F: Scalar>(
    rows: &mut Vec<Row<F>>,
    known: &GradedSeries<F>,
    columns: &[GradedSeries<F>],
    label: &str,
) {
    let mut monos: Vec<&Monomial> = known.terms().map(|(m, _)| m).collect();
    for c in columns {
        monos.extend(c.terms().map(|(m, _)| m));
    }
    monos.sort();
    monos.dedup();
    for m in monos {
        rows.push(Row {
            coeffs: columns.iter().map(|c| c.coeff(m)).collect(),
            rhs: -known.coeff(m),
            label: format!("{label}, coefficient of {}", render_monomial(m, RenderOptions::default())),
        });
    }
}

/// Solves for `S_Ψ`, `Ψ ⊆ psi0`, up to degree `k`. `psi0` must be empty or a power of `A0`.
pub fn solve<F: Scalar>(
    psi0: &Multisingularity,
    l: u32,
    k: u32,
    catalog: &Catalog,
    opts: SolveOptions,
) -> Result<SolveOutput<F>, SolveError> {
    if !psi0.is_a0_power() || psi0.distinguished().is_some() {
        return Err(SolveError::UnsupportedPsi(psi0.to_string()));
    }
    let protos = prepare_catalog::<F>(catalog, l, k)?;
    let a0_proto = a0_prototype::<F>(catalog, l, k)?;
    let ssm = ssm_origin::<F>(l, &a0_proto.model.target_weights, k)?;
    let subs = psi0.sub_multisingularities();
    let a0 = Multisingularity::a0_power(1);

    let mut table = SeriesTable::new(l, k, Flavor::S, Provenance::Solved);
    for psi in &subs {
        table.insert(psi.clone(), GradedSeries::zero(l, k));
    }
    let mut stages = Vec::new();
    for d in 1..=k {
        let known = assemble_target(&table, psi0, d)?;
        let lambdas: Vec<Partition> = if d >= l { Partition::all_of(d - l) } else { vec![] };
        for psi in &subs {
            let start = Instant::now();
            let a_known = known.require(psi)?;
            let mut rows: Vec<Row<F>> = Vec::new();
            for p in &protos {
                if p.tcodim() > d || *psi == Multisingularity::mono(p.name()) {
                    continue;
                }
                let cols: Vec<GradedSeries<F>> = lambdas
                    .iter()
                    .map(|lam| p.evaluator.landweber_novikov(lam).graded_component(d))
                    .collect();
                let kn = p.twisted_value(a_known, d)?.graded_component(d);
                push_rows(&mut rows, &kn, &cols, &format!("prototype condition for {psi} at {}, degree {d}", p.name()));
            }
            if *psi == a0 {
                let cols: Vec<GradedSeries<F>> = lambdas
                    .iter()
                    .map(|lam| a0_proto.evaluator.landweber_novikov(lam).graded_component(d))
                    .collect();
                let ev = a0_proto.evaluator.evaluate(&a_known.with_truncation(d))?;
                let kn = ev.sub(&ssm.with_truncation(d)).graded_component(d);
                push_rows(&mut rows, &kn, &cols, &format!("origin condition for A0, degree {d}"));
            }
            let n = lambdas.len();
            let base_rank = linalg::rank(rows.iter().map(|r| r.coeffs.clone()).collect(), n);
            let tcodim = psi.tcodim(l);
            if opts.remark_rows && d < tcodim {
                for (i, lam) in lambdas.iter().enumerate() {
                    let mut coeffs = vec![F::zero(); n];
                    coeffs[i] = F::one();
                    rows.push(Row {
                        coeffs,
                        rhs: F::zero(),
                        label: format!("vanishing of s_{{{}}} in S_{psi} below tcodim", lam.subscript(false)),
                    });
                }
            }
            let labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
            let nrows = rows.len();
            let rep = linalg::solve(rows.into_iter().map(|r| (r.coeffs, r.rhs)).collect(), n);
            let solution = match rep.solution {
                Solution::Unique(x) => x,
                Solution::Underdetermined { nullity } => {
                    return Err(SolveError::Underdetermined { degree: d, nullity })
                }
                Solution::Inconsistent { rows } => {
                    return Err(SolveError::Inconsistent {
                        degree: d,
                        rows: rows.into_iter().map(|i| labels[i].clone()).collect(),
                    })
                }
            };
            let mut s = table.require(psi)?.clone();
            for (lam, c) in lambdas.iter().zip(solution) {
                s.add_term(Monomial::var(Var::S(lam.clone())), c);
            }
            table.insert(psi.clone(), s);
            stages.push(StageReport {
                degree: d,
                multisingularity: psi.to_string(),
                unknowns: n,
                rows: nrows,
                rank: rep.rank,
                nullity: n - rep.rank,
                remark_rows_active: rep.rank > base_rank,
                micros: start.elapsed().as_micros(),
            });
        }
    }
    let report = SolveReport {
        l,
        truncation: k,
        psi0: psi0.to_string(),
        prototypes: protos.iter().map(|p| p.name().to_string()).collect(),
        stages,
    };
    Ok(SolveOutput { table, report })
}

/// Degree-`d` part of `S_Ψ` forced by the prototype condition alone, given every entry of
/// `table` below degree `d` (the entry for `Ψ` itself is ignored from degree `d` on).
///
/// For a multisingularity that is not a single monosingularity, the prototype condition
/// covers every prototype, so this recomputes a table row from its sub-entries.
pub fn implied_component<F: Scalar>(
    table: &SeriesTable<F>,
    psi: &Multisingularity,
    d: u32,
    catalog: &Catalog,
) -> Result<GradedSeries<F>, SolveError> {
    let psi = psi.t_flavor();
    if psi.len() == 1 {
        return Err(SolveError::UnsupportedPsi(psi.to_string()));
    }
    let l = table.l;
    let protos = prepare_catalog::<F>(catalog, l, d)?;
    let mut t = table.clone();
    t.insert(psi.clone(), t.require(&psi)?.up_to(d.saturating_sub(1)));
    let a = assemble_target(&t, &psi, d)?;
    let a_known = a.require(&psi)?;
    let lambdas: Vec<Partition> = if d >= l { Partition::all_of(d - l) } else { vec![] };
    let mut rows = Vec::new();
    for p in &protos {
        if p.tcodim() > d {
            continue;
        }
        let cols: Vec<GradedSeries<F>> = lambdas
            .iter()
            .map(|lam| p.evaluator.landweber_novikov(lam).graded_component(d))
            .collect();
        let kn = p.twisted_value(a_known, d)?.graded_component(d);
        push_rows(&mut rows, &kn, &cols, &format!("prototype condition for {psi} at {}, degree {d}", p.name()));
    }
    let labels: Vec<String> = rows.iter().map(|r| r.label.clone()).collect();
    let rep = linalg::solve(rows.into_iter().map(|r| (r.coeffs, r.rhs)).collect(), lambdas.len());
    match rep.solution {
        Solution::Unique(x) => Ok(GradedSeries::from_terms(
            l,
            d,
            lambdas.into_iter().map(|lam| Monomial::var(Var::S(lam))).zip(x),
        )),
        Solution::Underdetermined { nullity } => Err(SolveError::Underdetermined { degree: d, nullity }),
        Solution::Inconsistent { rows } => Err(SolveError::Inconsistent {
            degree: d,
            rows: rows.into_iter().map(|i| labels[i].clone()).collect(),
        }),
    }
}

/// Outcome of one check in [`verify_table`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub multisingularity: String,
    /// Prototype name, `"A0 (origin)"`, or `"low degree"` for the vanishing check.
    pub check: String,
    pub degree: u32,
    pub pass: bool,
    /// Rendered residual when the check fails.
    pub residual: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub l: u32,
    pub truncation: u32,
    pub prototypes: Vec<String>,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Checks both interpolation conditions and the low-degree vanishing for every
/// entry of an S-table whose sub-multisingularities are all present.
pub fn verify_table<F: Scalar>(table: &SeriesTable<F>, k: u32, catalog: &Catalog) -> Result<VerifyReport, SolveError> {
    let l = table.l;
    let protos = prepare_catalog::<F>(catalog, l, k)?;
    let a0 = Multisingularity::a0_power(1);
    let mut checks = Vec::new();
    let push = |checks: &mut Vec<CheckResult>, psi: &Multisingularity, check: String, degree: u32, res: &GradedSeries<F>| {
        checks.push(CheckResult {
            multisingularity: psi.to_string(),
            check,
            degree,
            pass: res.is_zero(),
            residual: (!res.is_zero()).then(|| res.to_string()),
        });
    };
    for (psi, s) in table.entries() {
        if psi.sub_multisingularities().iter().any(|p| table.get(p).is_none()) {
            continue;
        }
        let tc = psi.tcodim(l);
        for r in 0..tc.min(k + 1) {
            push(&mut checks, psi, "low degree".into(), r, &s.graded_component(r));
        }
        for p in &protos {
            if *psi == Multisingularity::mono(p.name()) {
                continue;
            }
            for (i, res) in residual_at(table, psi, p, k)?.iter().enumerate() {
                push(&mut checks, psi, p.name().to_string(), p.tcodim() + i as u32, res);
            }
        }
        if *psi == a0 {
            for (r, res) in condition1_residual_a0(table, l, k)?.iter().enumerate() {
                push(&mut checks, psi, "A0 (origin)".into(), r as u32, res);
            }
        }
    }
    Ok(VerifyReport {
        l,
        truncation: k,
        prototypes: protos.iter().map(|p| p.name().to_string()).collect(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Series};

    fn sv(parts: &[u32], k: u32) -> Series {
        Series::variable(1, k, Var::S(Partition::new(parts.to_vec()).unwrap()))
    }

    #[test]
    fn master_l1_low_degrees() {
        let out = solve::<Rational>(&Multisingularity::empty(), 1, 3, &Catalog::bundled(), SolveOptions::default()).unwrap();
        let ms = out.table.get(&Multisingularity::empty()).unwrap();
        let h = |n, d| Rational::from_fraction(n, d);
        let expected = sv(&[], 3)
            .neg()
            .add(&sv(&[1], 3).scale(&h(1, 2)))
            .add(&sv(&[2], 3).scale(&h(7, 6)))
            .sub(&sv(&[1, 1], 3).scale(&h(1, 3)));
        assert_eq!(ms, &expected);
        assert!(out.report.stages.iter().all(|s| s.nullity == 0));
    }

    #[test]
    fn self_pair_is_refused() {
        let cat = Catalog::bundled();
        let a1 = Monosingularity::new(cat.get(AlgebraName::A(1)).unwrap().clone(), 1).unwrap();
        let t: SeriesTable<Rational> = SeriesTable::new(1, 4, Flavor::S, Provenance::Imported);
        let r = condition2_residual(&t, &Multisingularity::mono(AlgebraName::A(1)), &a1, 4);
        assert!(matches!(r, Err(SolveError::SelfPair(_))));
    }

    #[test]
    fn only_a0_powers_are_solvable() {
        let psi = Multisingularity::mono(AlgebraName::A(1));
        let r = solve::<Rational>(&psi, 1, 3, &Catalog::bundled(), SolveOptions::default());
        assert!(matches!(r, Err(SolveError::UnsupportedPsi(_))));
    }

    #[test]
    fn missing_a0_entry_breaks_condition_one() {
        let mut t = SeriesTable::new(1, 3, Flavor::S, Provenance::Imported);
        t.insert(Multisingularity::empty(), sv(&[], 3).neg());
        t.insert(Multisingularity::a0_power(1), Series::zero(1, 3));
        let res = condition1_residual_a0(&t, 1, 3).unwrap();
        let ssm = ssm_origin::<Rational>(1, &[vec![1]], 3).unwrap();
        let total = res.iter().fold(Series::zero(1, 3), |acc, r| acc.add(r));
        assert_eq!(total, ssm.neg());
    }
}
