//! Local algebras, mono- and multisingularities, codimensions and the catalog.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, SingularityError};
use crate::series::{Monomial, TBound, Var};

/// Name of a local algebra: `A_k`, `I_{a,b}` or `III_{a,b}` with `a ≥ b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgebraName {
    A(u32),
    I(u32, u32),
    III(u32, u32),
}

impl AlgebraName {
    /// Parses `A3`, `I22`, `III32`; the two-parameter families take one digit each
    /// and are normalized so that `a ≥ b`.
    pub fn parse(tok: &str) -> Result<Self, ParseError> {
        let unknown = || ParseError::UnknownAlgebra(tok.to_string());
        let two = |rest: &str| -> Result<(u32, u32), ParseError> {
            let d: Vec<u32> = rest.chars().map(|c| c.to_digit(10)).collect::<Option<_>>().ok_or_else(unknown)?;
            match d.as_slice() {
                &[a, b] if a >= 2 && b >= 2 => Ok((a.max(b), a.min(b))),
                _ => Err(unknown()),
            }
        };
        if let Some(rest) = tok.strip_prefix("III") {
            let (a, b) = two(rest)?;
            Ok(AlgebraName::III(a, b))
        } else if let Some(rest) = tok.strip_prefix('I') {
            let (a, b) = two(rest)?;
            Ok(AlgebraName::I(a, b))
        } else if let Some(rest) = tok.strip_prefix('A') {
            if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || (rest.len() > 1 && rest.starts_with('0')) {
                return Err(unknown());
            }
            rest.parse().map(AlgebraName::A).map_err(|_| unknown())
        } else {
            Err(unknown())
        }
    }

    /// Closed-form source codimension `μl + b`.
    pub fn scodim(&self, l: u32) -> u32 {
        match *self {
            AlgebraName::A(k) => k * l + k,
            AlgebraName::I(a, b) => (a + b - 1) * l + (a + b),
            AlgebraName::III(a, b) => (a + b - 2) * l + (a + b),
        }
    }

    pub fn tcodim(&self, l: u32) -> u32 {
        self.scodim(l) + l
    }

    pub fn is_realizable(&self, l: u32) -> bool {
        l >= 1
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraName::A(k) => write!(f, "A{k}"),
            AlgebraName::I(a, b) => write!(f, "I{a}{b}"),
            AlgebraName::III(a, b) => write!(f, "III{a}{b}"),
        }
    }
}

impl FromStr for AlgebraName {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        AlgebraName::parse(s)
    }
}

/// One polynomial component of a genotype: `(coefficient, exponent vector)` terms.
pub type Component = Vec<(i64, Vec<u32>)>;

/// A finite local algebra given by a quasihomogeneous genotype.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalAlgebra {
    pub name: AlgebraName,
    pub generators: usize,
    /// Nonzero components only; zero components are added per `l`.
    pub genotype: Vec<Component>,
    pub weights: Vec<u32>,
    /// Whether the grading torus is known to be a maximal torus of the symmetry group.
    pub torus_certified: bool,
}

#[derive(Serialize, Deserialize)]
struct CatalogEntryJson {
    name: String,
    generators: usize,
    genotype: Vec<Vec<(i64, Vec<u32>)>>,
    weights: Vec<u32>,
    #[serde(default)]
    torus_certified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<Vec<u32>>,
}

impl LocalAlgebra {
    /// Weighted degree of each nonzero component; `None` if some component is
    /// not quasihomogeneous.
    pub fn component_degrees(&self) -> Result<Vec<u32>, usize> {
        self.genotype
            .iter()
            .enumerate()
            .map(|(j, comp)| {
                let degs: Vec<u32> = comp
                    .iter()
                    .map(|(_, e)| e.iter().zip(&self.weights).map(|(a, w)| a * w).sum())
                    .collect();
                match degs.first() {
                    Some(&d) if degs.iter().all(|&x| x == d) => Ok(d),
                    _ => Err(j),
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), SingularityError> {
        let bad = |msg: String| SingularityError::InvalidCatalog(format!("{}: {msg}", self.name));
        if self.weights.len() != self.generators {
            return Err(bad("weight count differs from generator count".into()));
        }
        if self.weights.contains(&0) {
            return Err(bad("weights must be positive".into()));
        }
        for comp in &self.genotype {
            if comp.is_empty() {
                return Err(bad("stored components must be nonzero".into()));
            }
            for (c, e) in comp {
                if *c == 0 || e.len() != self.generators {
                    return Err(bad("malformed term".into()));
                }
            }
        }
        self.component_degrees()
            .map_err(|j| bad(format!("component {j} is not quasihomogeneous")))?;
        Ok(())
    }

    /// Genotype padded with zero components to `a + l` entries (`None` = zero).
    pub fn padded_genotype(&self, l: u32) -> Result<Vec<Option<Component>>, SingularityError> {
        let total = self.generators + l as usize;
        if self.genotype.len() > total {
            return Err(SingularityError::Unrealizable {
                name: self.name.to_string(),
                l,
            });
        }
        let mut out: Vec<Option<Component>> = self.genotype.iter().cloned().map(Some).collect();
        out.resize(total, None);
        Ok(out)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let (family, params) = match self.name {
            AlgebraName::A(k) => ("A", vec![k]),
            AlgebraName::I(a, b) => ("I", vec![a, b]),
            AlgebraName::III(a, b) => ("III", vec![a, b]),
        };
        serde_json::to_value(CatalogEntryJson {
            name: self.name.to_string(),
            generators: self.generators,
            genotype: self.genotype.clone(),
            weights: self.weights.clone(),
            torus_certified: self.torus_certified,
            family: Some(family.into()),
            params: Some(params),
        })
        .expect("serializable")
    }
}

/// A local algebra at a fixed relative dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monosingularity {
    pub algebra: LocalAlgebra,
    pub l: u32,
    pub scodim: u32,
    pub tcodim: u32,
}

impl Monosingularity {
    pub fn new(algebra: LocalAlgebra, l: u32) -> Result<Self, SingularityError> {
        if !algebra.name.is_realizable(l) || algebra.genotype.len() > algebra.generators + l as usize {
            return Err(SingularityError::Unrealizable {
                name: algebra.name.to_string(),
                l,
            });
        }
        let scodim = algebra.name.scodim(l);
        Ok(Monosingularity {
            algebra,
            l,
            scodim,
            tcodim: scodim + l,
        })
    }

    pub fn name(&self) -> AlgebraName {
        self.algebra.name
    }
}

/// Mather bound: `6l + 8` for `l ≤ 3`, `6l + 7` above.
pub fn mather_bound(l: u32) -> u32 {
    if l <= 3 {
        6 * l + 8
    } else {
        6 * l + 7
    }
}

/// The bundled catalog lists every monosingularity of target codimension at
/// most this value, for `l` in [`CATALOG_L_RANGE`].
pub const CATALOG_MAX_TCODIM: u32 = 10;
pub const CATALOG_L_RANGE: std::ops::RangeInclusive<u32> = 1..=4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    entries: Vec<LocalAlgebra>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self, SingularityError> {
        let raw: Vec<CatalogEntryJson> =
            serde_json::from_str(text).map_err(|e| SingularityError::InvalidCatalog(e.to_string()))?;
        let mut entries = Vec::new();
        for r in raw {
            let name = AlgebraName::parse(&r.name).map_err(|e| SingularityError::InvalidCatalog(e.to_string()))?;
            let alg = LocalAlgebra {
                name,
                generators: r.generators,
                genotype: r.genotype,
                weights: r.weights,
                torus_certified: r.torus_certified,
            };
            alg.validate()?;
            entries.push(alg);
        }
        Ok(Catalog { entries })
    }

    /// The catalog shipped with the crate.
    pub fn bundled() -> Self {
        Catalog::from_json(crate::io::BUNDLED_CATALOG).expect("bundled catalog is valid")
    }

    pub fn algebras(&self) -> &[LocalAlgebra] {
        &self.entries
    }

    pub fn get(&self, name: AlgebraName) -> Result<&LocalAlgebra, SingularityError> {
        self.entries
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| SingularityError::MissingEntry(name.to_string()))
    }

    /// All monosingularities with `tcodim ≤ k`, ordered by `tcodim` then name.
    pub fn for_degree(&self, l: u32, k: u32) -> Result<Vec<Monosingularity>, SingularityError> {
        let limit = mather_bound(l) + l;
        if k > limit {
            return Err(SingularityError::BeyondMatherBound { l, k, limit });
        }
        if !CATALOG_L_RANGE.contains(&l) {
            return Err(SingularityError::CatalogIncomplete { l, from: 0, to: k });
        }
        if k > CATALOG_MAX_TCODIM {
            return Err(SingularityError::CatalogIncomplete {
                l,
                from: CATALOG_MAX_TCODIM + 1,
                to: k,
            });
        }
        let mut out: Vec<Monosingularity> = self
            .entries
            .iter()
            .filter(|a| a.name.is_realizable(l) && a.genotype.len() <= a.generators + l as usize)
            .filter(|a| a.name.tcodim(l) <= k)
            .map(|a| Monosingularity::new(a.clone(), l))
            .collect::<Result<_, _>>()?;
        out.sort_by_key(|m| (m.tcodim, m.name()));
        Ok(out)
    }
}

/// A multiset of monosingularity names, optionally with a distinguished member.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Multisingularity {
    entries: BTreeMap<AlgebraName, u32>,
    distinguished: Option<AlgebraName>,
}

/// Codimensions of a multisingularity; the empty one has no source codimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Codims {
    pub scodim: Option<u32>,
    pub tcodim: u32,
    pub empty: bool,
}

impl Multisingularity {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn mono(name: AlgebraName) -> Self {
        Self::from_counts([(name, 1)])
    }

    pub fn from_counts<I: IntoIterator<Item = (AlgebraName, u32)>>(counts: I) -> Self {
        let mut entries = BTreeMap::new();
        for (n, c) in counts {
            if c > 0 {
                *entries.entry(n).or_insert(0) += c;
            }
        }
        Multisingularity {
            entries,
            distinguished: None,
        }
    }

    /// `A0^j`.
    pub fn a0_power(j: u32) -> Self {
        Self::from_counts([(AlgebraName::A(0), j)])
    }

    pub fn with_distinguished(mut self, d: AlgebraName) -> Result<Self, ParseError> {
        if !self.entries.contains_key(&d) {
            return Err(ParseError::DistinguishedMissing(d.to_string()));
        }
        self.distinguished = Some(d);
        Ok(self)
    }

    pub fn distinguished(&self) -> Option<AlgebraName> {
        self.distinguished
    }

    /// The underlying multiset, forgetting the distinguished element.
    pub fn t_flavor(&self) -> Self {
        Multisingularity {
            entries: self.entries.clone(),
            distinguished: None,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (AlgebraName, u32)> + '_ {
        self.entries.iter().map(|(n, c)| (*n, *c))
    }

    pub fn count(&self, name: AlgebraName) -> u32 {
        self.entries.get(&name).copied().unwrap_or(0)
    }

    pub fn len(&self) -> u32 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Parses the grammar `expr := "1" | [dist ":"] factor ("*" factor)*`,
    /// `factor := TOKEN ["^" INT]`; whitespace is ignored.
    pub fn parse(expr: &str) -> Result<Self, ParseError> {
        let text: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
        if text == "1" {
            return Ok(Self::empty());
        }
        if text.is_empty() {
            return Err(ParseError::Syntax {
                pos: 0,
                msg: "empty expression".into(),
            });
        }
        let (dist, body, offset) = match text.split_once(':') {
            Some((d, b)) => (Some(d), b, d.len() + 1),
            None => (None, text.as_str(), 0),
        };
        let mut counts = Vec::new();
        let mut pos = offset;
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(ParseError::Syntax {
                    pos,
                    msg: "empty factor".into(),
                });
            }
            let (tok, exp) = match factor.split_once('^') {
                Some((t, e)) => {
                    let n: u32 = e.parse().map_err(|_| ParseError::Syntax {
                        pos: pos + t.len() + 1,
                        msg: format!("bad exponent `{e}`"),
                    })?;
                    if n == 0 {
                        return Err(ParseError::Syntax {
                            pos: pos + t.len() + 1,
                            msg: "exponent must be positive".into(),
                        });
                    }
                    (t, n)
                }
                None => (factor, 1),
            };
            counts.push((AlgebraName::parse(tok)?, exp));
            pos += factor.len() + 1;
        }
        let m = Self::from_counts(counts);
        match dist {
            Some(d) => m.with_distinguished(AlgebraName::parse(d)?),
            None => Ok(m),
        }
    }

    /// Source codimension by the summation formula, target codimension = scodim + l.
    pub fn codims(&self, l: u32) -> Result<Codims, SingularityError> {
        if self.is_empty() {
            return Ok(Codims {
                scodim: None,
                tcodim: 0,
                empty: true,
            });
        }
        let mut s = 0;
        for (n, c) in self.entries() {
            if !n.is_realizable(l) {
                return Err(SingularityError::Unrealizable { name: n.to_string(), l });
            }
            s += n.scodim(l) * c;
        }
        s += (self.len() - 1) * l;
        Ok(Codims {
            scodim: Some(s),
            tcodim: s + l,
            empty: false,
        })
    }

    pub fn tcodim(&self, l: u32) -> u32 {
        self.codims(l).map(|c| c.tcodim).unwrap_or(0)
    }

    /// `Π a_i!`, with the distinguished multiplicity lowered by one for S-flavor.
    pub fn aut_order(&self) -> u64 {
        self.entries
            .iter()
            .map(|(n, &c)| {
                let c = if Some(*n) == self.distinguished { c - 1 } else { c };
                (1..=c as u64).product::<u64>()
            })
            .product()
    }

    pub fn contains(&self, other: &Multisingularity) -> bool {
        other.entries.iter().all(|(n, &c)| self.count(*n) >= c)
    }

    /// Sub-multisets, ordered by size; for S-flavor only those keeping the
    /// distinguished element.
    pub fn sub_multisingularities(&self) -> Vec<Multisingularity> {
        let items: Vec<(AlgebraName, u32)> = self.entries().collect();
        let mut out = vec![Multisingularity::empty()];
        for (n, c) in items {
            let mut next = Vec::new();
            for base in &out {
                for k in 0..=c {
                    let mut m = base.clone();
                    if k > 0 {
                        m.entries.insert(n, k);
                    }
                    next.push(m);
                }
            }
            out = next;
        }
        if let Some(d) = self.distinguished {
            out.retain(|m| m.count(d) >= 1);
            for m in out.iter_mut() {
                m.distinguished = Some(d);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    /// `t^Ψ` as a monomial in the bookkeeping variables.
    pub fn t_monomial(&self) -> Monomial {
        Monomial::from_factors(self.entries().map(|(n, c)| (Var::T(n.to_string()), c)))
    }

    pub fn t_bound(&self) -> TBound {
        self.entries().map(|(n, c)| (n.to_string(), c)).collect()
    }

    /// Union with maximal multiplicities.
    pub fn union(&self, other: &Multisingularity) -> Multisingularity {
        let mut entries = self.entries.clone();
        for (n, &c) in &other.entries {
            let e = entries.entry(*n).or_insert(0);
            *e = (*e).max(c);
        }
        Multisingularity {
            entries,
            distinguished: None,
        }
    }

    /// Multiset sum (the distinguished element is dropped).
    pub fn sum(&self, other: &Multisingularity) -> Multisingularity {
        Multisingularity::from_counts(self.entries().chain(other.entries()))
    }

    /// Whether this is `A0^j` for some `j ≥ 0`.
    pub fn is_a0_power(&self) -> bool {
        self.entries.keys().all(|n| *n == AlgebraName::A(0))
    }
}

impl fmt::Display for Multisingularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        if let Some(d) = self.distinguished {
            write!(f, "{d}:")?;
        }
        let parts: Vec<String> = self
            .entries()
            .map(|(n, c)| if c == 1 { n.to_string() } else { format!("{n}^{c}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl FromStr for Multisingularity {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        Multisingularity::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(s: &str) -> Multisingularity {
        Multisingularity::parse(s).unwrap()
    }

    #[test]
    fn parse_and_render() {
        let m = ms("A0^2*A1*I22");
        assert_eq!(m.count(AlgebraName::A(0)), 2);
        assert_eq!(m.to_string(), "A0^2*A1*I22");
        let s = ms("A1 : A0^2 * A1");
        assert_eq!(s.distinguished(), Some(AlgebraName::A(1)));
        assert_eq!(s.to_string(), "A1:A0^2*A1");
        assert!(ms("1").is_empty());
        assert_eq!(ms("I23").to_string(), "I32");
        assert_eq!(ms("A1*A0*A0").to_string(), "A0^2*A1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Multisingularity::parse("A2:A0"), Err(ParseError::DistinguishedMissing(_))));
        assert!(matches!(Multisingularity::parse("B3"), Err(ParseError::UnknownAlgebra(_))));
        assert!(matches!(Multisingularity::parse("A0**A1"), Err(ParseError::Syntax { .. })));
        assert!(matches!(Multisingularity::parse("A0^x"), Err(ParseError::Syntax { .. })));
        assert!(matches!(Multisingularity::parse("I2"), Err(ParseError::UnknownAlgebra(_))));
    }

    #[test]
    fn codimensions() {
        let c = ms("A1").codims(1).unwrap();
        assert_eq!((c.scodim, c.tcodim), (Some(2), 3));
        let c = ms("A0^2*A1*I22").codims(1).unwrap();
        assert_eq!((c.scodim, c.tcodim), (Some(12), 13));
        let c = ms("1").codims(3).unwrap();
        assert_eq!((c.scodim, c.tcodim, c.empty), (None, 0, true));
        assert_eq!(AlgebraName::I(2, 2).scodim(1), 7);
        assert_eq!(AlgebraName::III(2, 2).scodim(1), 6);
    }

    #[test]
    fn automorphism_orders() {
        let t = Multisingularity::from_counts([(AlgebraName::A(0), 5), (AlgebraName::A(1), 2)]);
        assert_eq!(t.aut_order(), 240);
        let s = t.clone().with_distinguished(AlgebraName::A(0)).unwrap();
        assert_eq!(s.aut_order(), 48);
        assert_eq!(Multisingularity::empty().aut_order(), 1);
    }

    #[test]
    fn submultisets() {
        let subs: Vec<String> = ms("A0^2").sub_multisingularities().iter().map(|m| m.to_string()).collect();
        assert_eq!(subs, vec!["1", "A0", "A0^2"]);
        let subs: Vec<String> = ms("A0*A1").sub_multisingularities().iter().map(|m| m.to_string()).collect();
        assert_eq!(subs, vec!["1", "A0", "A1", "A0*A1"]);
        let subs: Vec<String> = ms("A0:A0*A1").sub_multisingularities().iter().map(|m| m.to_string()).collect();
        assert_eq!(subs, vec!["A0:A0", "A0:A0*A1"]);
    }

    #[test]
    fn mather_bounds() {
        assert_eq!(mather_bound(1), 14);
        assert_eq!(mather_bound(3), 26);
        assert_eq!(mather_bound(4), 31);
    }

    #[test]
    fn catalog_ranges() {
        let cat = Catalog::bundled();
        let names = |l, k| -> Vec<String> {
            cat.for_degree(l, k).unwrap().iter().map(|m| format!("{}:{}", m.name(), m.tcodim)).collect()
        };
        assert_eq!(names(1, 6), vec!["A0:1", "A1:3", "A2:5"]);
        assert_eq!(names(1, 8), vec!["A0:1", "A1:3", "A2:5", "A3:7", "III22:7", "I22:8"]);
        assert_eq!(names(2, 10), vec!["A0:2", "A1:5", "A2:8", "III22:10"]);
        assert!(matches!(cat.for_degree(1, 11), Err(SingularityError::CatalogIncomplete { from: 11, .. })));
        assert!(matches!(cat.for_degree(1, 16), Err(SingularityError::BeyondMatherBound { .. })));
    }
}
