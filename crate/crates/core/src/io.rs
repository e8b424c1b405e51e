//! JSON forms of series and tables, and access to the bundled fixtures.
//!
//! Series JSON: `{"l", "truncation", "terms": [{"monomial": [factor…], "coeff": "p/q"}]}`
//! where a factor is `{"kind": "c", "index": i}`, `{"kind": "s", "partition": [..]}`,
//! `{"kind": "t", "name": ".."}` or `{"kind": "x", "index": j}`, optionally with `"exp"`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::IoError;
use crate::partition::Partition;
use crate::scalar::Scalar;
use crate::series::{GradedSeries, Monomial, Var};
use crate::singularity::Multisingularity;
use crate::structure::{Flavor, Provenance, SeriesTable};

pub const BUNDLED_CATALOG: &str = include_str!("../../../fixtures/catalog.json");

/// Environment variable naming a directory whose files replace the bundled fixtures.
pub const FIXTURE_DIR_ENV: &str = "SSMTHOM_FIXTURES";

const BUNDLED: &[(&str, &str)] = &[
    ("catalog.json", BUNDLED_CATALOG),
    ("master_l1_deg14.json", include_str!("../../../fixtures/master_l1_deg14.json")),
    ("master_prefixes.json", include_str!("../../../fixtures/master_prefixes.json")),
    ("fig_sl1.json", include_str!("../../../fixtures/fig_sl1.json")),
    ("fig_rl1.json", include_str!("../../../fixtures/fig_rl1.json")),
    ("source_examples.json", include_str!("../../../fixtures/source_examples.json")),
    ("f_map_example.json", include_str!("../../../fixtures/f_map_example.json")),
    ("k_polys_printed.json", include_str!("../../../fixtures/k_polys_printed.json")),
    ("pp_L_polynomials.json", include_str!("../../../fixtures/pp_L_polynomials.json")),
    ("norlund_denominators.json", include_str!("../../../fixtures/norlund_denominators.json")),
    ("tower_l2_a0sq.json", include_str!("../../../fixtures/tower_l2_a0sq.json")),
];

/// Names of all fixture files.
pub fn fixture_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

/// Text of a fixture, from the override directory if set, else the bundled copy.
pub fn fixture_text(name: &str) -> Result<String, IoError> {
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_ENV) {
        let path = PathBuf::from(dir).join(name);
        if path.exists() {
            return read_file(&path);
        }
    }
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| IoError::Schema {
            context: name.to_string(),
            msg: "no such fixture".into(),
        })
}

pub fn read_file(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn parse_json(text: &str, context: &str) -> Result<Value, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        context: context.to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

fn schema(context: &str, msg: impl Into<String>) -> IoError {
    IoError::Schema {
        context: context.to_string(),
        msg: msg.into(),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    partition: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exp: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    monomial: Vec<FactorJson>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesJson {
    l: u32,
    truncation: u32,
    terms: Vec<TermJson>,
}

fn factor_from_json(f: &FactorJson, ctx: &str) -> Result<(Var, u32), IoError> {
    let var = match f.kind.as_str() {
        "c" => Var::C(f.index.ok_or_else(|| schema(ctx, "c factor needs an index"))?),
        "x" => Var::X(f.index.ok_or_else(|| schema(ctx, "x factor needs an index"))?),
        "s" => {
            let parts = f.partition.clone().ok_or_else(|| schema(ctx, "s factor needs a partition"))?;
            Var::S(Partition::new(parts).map_err(|e| schema(ctx, e))?)
        }
        "t" => Var::T(f.name.clone().ok_or_else(|| schema(ctx, "t factor needs a name"))?),
        other => return Err(schema(ctx, format!("unknown factor kind `{other}`"))),
    };
    if matches!(var, Var::C(0)) {
        return Err(schema(ctx, "c index must be positive"));
    }
    let e = f.exp.unwrap_or(1);
    if e == 0 {
        return Err(schema(ctx, "factor exponent must be positive"));
    }
    Ok((var, e))
}

fn factor_to_json(v: &Var, e: u32) -> FactorJson {
    let mut f = FactorJson {
        kind: String::new(),
        index: None,
        partition: None,
        name: None,
        exp: (e > 1).then_some(e),
    };
    match v {
        Var::C(i) => {
            f.kind = "c".into();
            f.index = Some(*i);
        }
        Var::X(j) => {
            f.kind = "x".into();
            f.index = Some(*j);
        }
        Var::S(p) => {
            f.kind = "s".into();
            f.partition = Some(p.parts().to_vec());
        }
        Var::T(n) => {
            f.kind = "t".into();
            f.name = Some(n.clone());
        }
    }
    f
}

fn series_from_raw<F: Scalar>(raw: SeriesJson, ctx: &str) -> Result<GradedSeries<F>, IoError> {
    let mut s = GradedSeries::zero(raw.l, raw.truncation);
    for (i, t) in raw.terms.iter().enumerate() {
        let tctx = format!("{ctx}: term {i}");
        let factors = t
            .monomial
            .iter()
            .map(|f| factor_from_json(f, &tctx))
            .collect::<Result<Vec<_>, _>>()?;
        let m = Monomial::from_factors(factors);
        let c: F = t
            .coeff
            .parse()
            .map_err(|_| schema(&tctx, format!("malformed rational `{}`", t.coeff)))?;
        if m.degree(raw.l) > raw.truncation {
            return Err(schema(&tctx, "term exceeds the declared truncation"));
        }
        s.add_term(m, c);
    }
    Ok(s)
}

fn series_to_raw<F: Scalar>(s: &GradedSeries<F>) -> SeriesJson {
    SeriesJson {
        l: s.l(),
        truncation: s.truncation(),
        terms: s
            .terms()
            .map(|(m, c)| TermJson {
                monomial: m.factors().iter().map(|(v, e)| factor_to_json(v, *e)).collect(),
                coeff: c.to_string(),
            })
            .collect(),
    }
}

pub fn series_from_value<F: Scalar>(v: &Value, ctx: &str) -> Result<GradedSeries<F>, IoError> {
    let raw: SeriesJson = serde_json::from_value(v.clone()).map_err(|e| schema(ctx, e.to_string()))?;
    series_from_raw(raw, ctx)
}

pub fn series_to_value<F: Scalar>(s: &GradedSeries<F>) -> Value {
    serde_json::to_value(series_to_raw(s)).expect("serializable")
}

/// Parses a series; extra top-level keys such as `citation` are ignored.
pub fn series_from_json<F: Scalar>(text: &str, ctx: &str) -> Result<GradedSeries<F>, IoError> {
    let mut v = parse_json(text, ctx)?;
    if let Some(obj) = v.as_object_mut() {
        obj.retain(|k, _| matches!(k.as_str(), "l" | "truncation" | "terms"));
    }
    series_from_value(&v, ctx)
}

pub fn series_to_json<F: Scalar>(s: &GradedSeries<F>) -> String {
    serde_json::to_string_pretty(&series_to_value(s)).expect("serializable")
}

pub fn table_from_json<F: Scalar>(text: &str, ctx: &str) -> Result<SeriesTable<F>, IoError> {
    let v = parse_json(text, ctx)?;
    let obj = v.as_object().ok_or_else(|| schema(ctx, "table must be an object"))?;
    let get_u32 = |key: &str| -> Result<u32, IoError> {
        obj.get(key)
            .and_then(Value::as_u64)
            .and_then(|x| u32::try_from(x).ok())
            .ok_or_else(|| schema(ctx, format!("field `{key}` missing or not a small integer")))
    };
    let l = get_u32("l")?;
    let truncation = get_u32("truncation")?;
    let flavor: Flavor = obj
        .get("flavor")
        .and_then(Value::as_str)
        .ok_or_else(|| schema(ctx, "field `flavor` missing"))?
        .parse()
        .map_err(|e: String| schema(ctx, e))?;
    let provenance: Provenance = match obj.get("provenance").and_then(Value::as_str) {
        Some(p) => p.parse().map_err(|e: String| schema(ctx, e))?,
        None => Provenance::Imported,
    };
    let citation = obj.get("citation").and_then(Value::as_str).map(str::to_string);
    let entries = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| schema(ctx, "field `entries` missing"))?;
    let mut table = SeriesTable::new(l, truncation, flavor, provenance);
    table.citation = citation;
    for (i, e) in entries.iter().enumerate() {
        let ectx = format!("{ctx}: entry {i}");
        let name = e
            .get("multisingularity")
            .and_then(Value::as_str)
            .ok_or_else(|| schema(&ectx, "field `multisingularity` missing"))?;
        let psi = Multisingularity::parse(name).map_err(|err| schema(&ectx, err.to_string()))?;
        let s: GradedSeries<F> = series_from_value(
            e.get("series").ok_or_else(|| schema(&ectx, "field `series` missing"))?,
            &ectx,
        )?;
        if s.l() != l {
            return Err(schema(&ectx, format!("series has l = {}, table has l = {l}", s.l())));
        }
        table.insert(psi, s);
    }
    table.validate().map_err(|e| schema(ctx, e.to_string()))?;
    Ok(table)
}

pub fn table_to_json<F: Scalar>(t: &SeriesTable<F>) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("l".into(), t.l.into());
    obj.insert("truncation".into(), t.truncation.into());
    obj.insert("flavor".into(), t.flavor.to_string().into());
    obj.insert("provenance".into(), t.provenance.to_string().into());
    if let Some(c) = &t.citation {
        obj.insert("citation".into(), c.clone().into());
    }
    let entries: Vec<Value> = t
        .entries()
        .map(|(psi, s)| {
            serde_json::json!({
                "multisingularity": psi.to_string(),
                "series": series_to_value(s),
            })
        })
        .collect();
    obj.insert("entries".into(), entries.into());
    serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable")
}

pub fn load_series<F: Scalar>(path: &Path) -> Result<GradedSeries<F>, IoError> {
    series_from_json(&read_file(path)?, &path.display().to_string())
}

pub fn load_table<F: Scalar>(path: &Path) -> Result<SeriesTable<F>, IoError> {
    table_from_json(&read_file(path)?, &path.display().to_string())
}

/// A list of series stored under `key` in a fixture object.
pub fn series_list_from_json<F: Scalar>(text: &str, key: &str, ctx: &str) -> Result<Vec<GradedSeries<F>>, IoError> {
    let v = parse_json(text, ctx)?;
    let arr = v
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| schema(ctx, format!("field `{key}` missing")))?;
    arr.iter()
        .enumerate()
        .map(|(i, s)| series_from_value(s, &format!("{ctx}: {key}[{i}]")))
        .collect()
}

/// Typed access to the bundled fixture set.
pub mod fixtures {
    use super::*;
    use crate::Series;

    pub fn master_l1() -> Result<Series, IoError> {
        series_from_json(&fixture_text("master_l1_deg14.json")?, "master_l1_deg14.json")
    }

    /// Printed low-degree master prefixes for `l = 1..=4`.
    pub fn master_prefixes() -> Result<Vec<Series>, IoError> {
        series_list_from_json(&fixture_text("master_prefixes.json")?, "series", "master_prefixes.json")
    }

    pub fn fig_sl1() -> Result<SeriesTable<crate::Rational>, IoError> {
        table_from_json(&fixture_text("fig_sl1.json")?, "fig_sl1.json")
    }

    pub fn fig_rl1() -> Result<SeriesTable<crate::Rational>, IoError> {
        table_from_json(&fixture_text("fig_rl1.json")?, "fig_rl1.json")
    }

    pub fn source_examples() -> Result<SeriesTable<crate::Rational>, IoError> {
        table_from_json(&fixture_text("source_examples.json")?, "source_examples.json")
    }

    pub fn tower_l2_a0sq() -> Result<SeriesTable<crate::Rational>, IoError> {
        table_from_json(&fixture_text("tower_l2_a0sq.json")?, "tower_l2_a0sq.json")
    }

    /// Input and expected output of the printed example of the map F.
    pub fn f_map_example() -> Result<(Series, Series), IoError> {
        let text = fixture_text("f_map_example.json")?;
        let v = parse_json(&text, "f_map_example.json")?;
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| schema("f_map_example.json", format!("field `{k}` missing")))
                .and_then(|x| series_from_value(x, "f_map_example.json"))
        };
        Ok((get("input")?, get("output")?))
    }

    /// Printed `K_1..K_6` and the printed term count of `K_15`.
    pub fn k_polys_printed() -> Result<(Vec<Series>, usize), IoError> {
        let text = fixture_text("k_polys_printed.json")?;
        let polys = series_list_from_json(&text, "polynomials", "k_polys_printed.json")?;
        let v = parse_json(&text, "k_polys_printed.json")?;
        let count = v
            .get("k15_term_count")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("k_polys_printed.json", "field `k15_term_count` missing"))?;
        Ok((polys, count as usize))
    }

    pub fn pp_l_polynomials() -> Result<Vec<Series>, IoError> {
        series_list_from_json(&fixture_text("pp_L_polynomials.json")?, "polynomials", "pp_L_polynomials.json")
    }

    pub fn norlund_denominators() -> Result<Vec<u64>, IoError> {
        let text = fixture_text("norlund_denominators.json")?;
        let v = parse_json(&text, "norlund_denominators.json")?;
        v.get("denominators")
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(Value::as_u64).collect::<Option<Vec<u64>>>())
            .ok_or_else(|| schema("norlund_denominators.json", "field `denominators` malformed"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, Series};

    #[test]
    fn series_round_trip() {
        let mut s = Series::zero(1, 5);
        s.add_term(Monomial::from_factors([(Var::C(2), 2), (Var::s(&[2, 1]), 1)]), Rational::from_fraction(-5, 4));
        s.add_term(Monomial::from_factors([(Var::T("A0".into()), 3)]), Rational::from_i64(7));
        let text = series_to_json(&s);
        let back: Series = series_from_json(&text, "test").unwrap();
        assert_eq!(back, s);
        assert_eq!(series_to_json(&back), text);
    }

    #[test]
    fn zero_denominator_is_a_schema_error() {
        let text = r#"{"l":1,"truncation":3,"terms":[{"monomial":[],"coeff":"1/0"}]}"#;
        let err = series_from_json::<Rational>(text, "bad").unwrap_err();
        assert!(matches!(err, IoError::Schema { .. }), "{err}");
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = series_from_json::<Rational>("{\n  \"l\": 1,\n  oops }", "bad").unwrap_err();
        match err {
            IoError::Json { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn unknown_factor_kind_is_rejected() {
        let text = r#"{"l":1,"truncation":3,"terms":[{"monomial":[{"kind":"q","index":1}],"coeff":"1"}]}"#;
        assert!(series_from_json::<Rational>(text, "bad").is_err());
    }

    #[test]
    fn bundled_tables_load() {
        assert_eq!(fixtures::fig_sl1().unwrap().len(), 14);
        assert_eq!(fixtures::fig_rl1().unwrap().len(), 11);
        assert_eq!(fixtures::master_prefixes().unwrap().len(), 4);
        assert_eq!(fixtures::norlund_denominators().unwrap().len(), 15);
    }
}
