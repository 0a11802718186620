use std::fs;
use std::path::{Path, PathBuf};

use dtwc_core::catalog::{self, Entry, Variant};
use dtwc_core::fforacle::{euler_characteristic, OracleStability};
use dtwc_core::invariants::{bps_from_dt, dt_from_bps, dt_from_pair_series, pair_series, pair_transform, PairOptions};
use dtwc_core::lattice::{euler_hat, parse_classes, ContextSpec};
use dtwc_core::series::product_expand;
use dtwc_core::wallcross::{self, coeff_s, coeff_u, coeff_v_directed, TransformOptions};
use dtwc_core::{
    format_rational, parse_rational, Bound, Error, InvariantTable, KClass, NumericalContext, Quiver, Rational,
    TruncatedSeries, WeakStability,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::output::Report;
use crate::{CatalogCmd, CoeffCmd, OracleCmd, QuiverCmd, SeriesCmd, TransformCmd, Wall};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Budget { .. }) => 3,
            CliError::Core(Error::Interpolation(_) | Error::GroupOrder { .. }) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub struct Settings {
    pub budget: u128,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn load_context(path: &Path) -> Result<NumericalContext> {
    Ok(read_json::<ContextSpec>(path)?.build()?)
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn load_quiver(spec: &str) -> Result<Quiver> {
    if let Some(m) = spec.strip_prefix("loops:") {
        let m = m
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid loop count in `{spec}`")))?;
        return Ok(Quiver::loops(m));
    }
    match spec {
        "conifold" => return Ok(catalog::conifold_quiver()),
        "c3z2z2" => return Ok(catalog::c3z2z2_quiver()),
        _ => {}
    }
    if let Some(n) = spec.strip_prefix("c3zn:") {
        let n = n
            .parse()
            .map_err(|_| CliError::Usage(format!("invalid n in `{spec}`")))?;
        return Ok(catalog::c3zn_quiver(n)?);
    }
    read_json(Path::new(spec))
}

fn parse_class(s: &str) -> Result<KClass> {
    Ok(s.parse()?)
}

fn matrix_rows(m: &[Vec<i64>]) -> Vec<String> {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect()
}

pub fn quiver(cmd: QuiverCmd) -> Result<Report> {
    match cmd {
        QuiverCmd::Info { quiver } => {
            let q = load_quiver(&quiver)?;
            let chi_hat = q.chi_hat_matrix();
            let ctx = NumericalContext::from_quiver(&q);
            let chi_bar = ctx.euler().chi_bar_matrix().clone();
            let json = json!({
                "quiver": to_json(&q),
                "chi_hat": chi_hat,
                "chi_bar": chi_bar,
                "balanced": q.is_balanced(),
            });
            let mut rows = vec![
                vec!["vertices".into(), q.vertices().join(" ")],
                vec!["edges".into(), q.edges().len().to_string()],
                vec!["balanced".into(), q.is_balanced().to_string()],
            ];
            rows.extend(matrix_rows(&chi_hat).into_iter().map(|r| vec!["chi_hat".into(), r]));
            rows.extend(matrix_rows(&chi_bar).into_iter().map(|r| vec!["chi_bar".into(), r]));
            Ok(Report::rows(json, &["field", "value"], rows))
        }
        QuiverCmd::Euler { quiver, d, e } => {
            let q = load_quiver(&quiver)?;
            let (d, e) = (parse_class(&d)?, parse_class(&e)?);
            let de = euler_hat(&q, &d, &e)?;
            let ed = euler_hat(&q, &e, &d)?;
            let json = json!({"chi_hat_de": de, "chi_hat_ed": ed, "chi_bar_de": de - ed});
            let rows = vec![
                vec!["chi_hat(d,e)".into(), de.to_string()],
                vec!["chi_hat(e,d)".into(), ed.to_string()],
                vec!["chi_bar(d,e)".into(), (de - ed).to_string()],
            ];
            Ok(Report::rows(json, &["form", "value"], rows))
        }
    }
}

fn wall_setup(w: &Wall) -> Result<(NumericalContext, WeakStability, WeakStability)> {
    let ctx = load_context(&w.context)?;
    let from = ctx.stability(&w.from)?.clone();
    let to = ctx.stability(&w.to)?.clone();
    Ok((ctx, from, to))
}

fn rational_report(v: &Rational) -> Report {
    let s = format_rational(v);
    Report::scalar(json!({ "value": s }), s)
}

fn parse_edges(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let bad = || CliError::Usage(format!("invalid edge `{t}`, expected `a-b`"));
            let (a, b) = t.split_once('-').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn coeff(cmd: CoeffCmd) -> Result<Report> {
    match cmd {
        CoeffCmd::S { wall, parts } => {
            let (ctx, from, to) = wall_setup(&wall)?;
            let v = coeff_s(&ctx, &parse_classes(&parts)?, &from, &to)?;
            Ok(rational_report(&Rational::from_integer(v.into())))
        }
        CoeffCmd::U { wall, parts } => {
            let (ctx, from, to) = wall_setup(&wall)?;
            Ok(rational_report(&coeff_u(&ctx, &parse_classes(&parts)?, &from, &to)?))
        }
        CoeffCmd::V { wall, parts, edges } => {
            let (ctx, from, to) = wall_setup(&wall)?;
            let v = coeff_v_directed(&ctx, &parse_edges(&edges)?, &parse_classes(&parts)?, &from, &to)?;
            Ok(rational_report(&v))
        }
    }
}

fn table_report(t: &InvariantTable) -> Report {
    let rows = t
        .entries()
        .iter()
        .map(|(c, v)| vec![c.to_string(), format_rational(v)])
        .collect();
    Report::rows(to_json(t), &["class", &t.kind.to_string()], rows)
}

fn series_report(s: &TruncatedSeries) -> Report {
    let rows = s
        .terms()
        .map(|(m, c)| {
            let exp: Vec<String> = m.0.iter().map(|x| x.to_string()).collect();
            vec![format!("[{}]", exp.join(",")), format_rational(c)]
        })
        .collect();
    Report::rows(to_json(s), &["monomial", "coefficient"], rows)
}

pub fn transform(cmd: TransformCmd) -> Result<Report> {
    match cmd {
        TransformCmd::Wall {
            context,
            table,
            from,
            to,
            target,
            unsigned,
            v_form,
            max_parts,
        } => {
            let ctx = load_context(&context)?;
            let table: InvariantTable = read_json(&table)?;
            let from = ctx.stability(from.as_deref().unwrap_or(&table.stability))?.clone();
            let to = ctx.stability(&to)?.clone();
            let opts = TransformOptions {
                signed: !unsigned,
                max_parts,
            };
            let target = parse_class(&target)?;
            let r = if v_form {
                wallcross::transform_v_form(&ctx, &table, &from, &to, &target, &opts)?
            } else {
                wallcross::transform(&ctx, &table, &from, &to, &target, &opts)?
            };
            let s = format_rational(&r.value);
            let json = json!({
                "class": target,
                "value": s,
                "decompositions": r.decompositions,
                "truncated": r.truncated,
            });
            Ok(Report::scalar(json, s))
        }
        TransformCmd::Bps { table } => Ok(table_report(&bps_from_dt(&read_json(&table)?)?)),
        TransformCmd::Dt { table } => Ok(table_report(&dt_from_bps(&read_json(&table)?)?)),
        TransformCmd::Pair {
            context,
            table,
            stability,
            target,
            order,
            unsigned,
            max_parts,
        } => {
            let ctx = load_context(&context)?;
            let table: InvariantTable = read_json(&table)?;
            match target {
                Some(target) => {
                    let stab = ctx.stability(stability.as_deref().unwrap_or(&table.stability))?;
                    let opts = PairOptions {
                        signed: !unsigned,
                        max_parts,
                    };
                    let target = parse_class(&target)?;
                    Ok(rational_report(&pair_transform(&ctx, &table, stab, &target, &opts)?))
                }
                None => Ok(series_report(&pair_series(&ctx, &table, &Bound::TotalDegree(order))?)),
            }
        }
        TransformCmd::PairInverse { context, series } => {
            let ctx = load_context(&context)?;
            let series: TruncatedSeries = read_json(&series)?;
            let inv = dt_from_pair_series(&ctx, &series, "trivial")?;
            let mut report = table_report(&inv.table);
            report.json = json!({ "table": report.json, "undetermined": inv.undetermined });
            Ok(report)
        }
    }
}

pub fn catalog(cmd: CatalogCmd) -> Result<Report> {
    match cmd {
        CatalogCmd::List => {
            let list = catalog::list();
            let rows = list
                .iter()
                .flat_map(|e| e.formulas.iter().map(move |f| vec![e.name.clone(), f.clone()]))
                .collect();
            Ok(Report::rows(to_json(&list), &["entry", "formula"], rows))
        }
        CatalogCmd::Verify { name, order, printed } => {
            let entry: Entry = name.parse()?;
            let variant = if printed { Variant::Printed } else { Variant::Corrected };
            let r = catalog::verify_variant(&entry.to_string(), order, variant)?;
            let summary = format!(
                "{} ({:?}): {} classes checked, {} mismatches",
                r.entry,
                r.variant,
                r.checked_classes,
                r.mismatches.len()
            );
            let mut report = if r.mismatches.is_empty() {
                Report::scalar(to_json(&r), summary)
            } else {
                let rows = r
                    .mismatches
                    .iter()
                    .map(|m| vec![m.check.clone(), m.class.to_string(), m.expected.clone(), m.got.clone()])
                    .collect();
                Report::rows(to_json(&r), &["check", "class", "expected", "got"], rows).titled(summary)
            };
            report.ok = r.passed();
            Ok(report)
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid integer list `{s}`")))
        })
        .collect()
}

pub fn oracle(cmd: OracleCmd, settings: &Settings) -> Result<Report> {
    let OracleCmd::Ffcount {
        quiver,
        dim,
        frame,
        fields,
        theta,
    } = cmd;
    let q = load_quiver(&quiver)?;
    let d = KClass(parse_ints(&dim)?);
    let e = KClass(parse_ints(&frame)?);
    let fields: Vec<u64> = parse_ints(&fields)?
        .into_iter()
        .map(|x| u64::try_from(x).map_err(|_| CliError::Usage(format!("invalid field order {x}"))))
        .collect::<Result<_>>()?;
    let stab = match theta {
        None => OracleStability::Trivial,
        Some(t) => {
            let c = parse_ints(&t)?;
            let r = vec![1; c.len()];
            OracleStability::from_weak(&WeakStability::slope_from_ints(&c, &r))?
        }
    };
    let r = euler_characteristic(&q, &d, &e, &stab, &fields, settings.budget)?;
    let mut rows: Vec<Vec<String>> = r
        .samples
        .iter()
        .map(|s| vec![format!("count q={}", s.q), s.count.to_string()])
        .collect();
    rows.push(vec!["polynomial".into(), r.polynomial.join(" ")]);
    rows.push(vec!["euler".into(), r.euler.clone()]);
    Ok(Report::rows(to_json(&r), &["field", "value"], rows))
}

#[derive(Deserialize)]
struct ProductSpec {
    arity: usize,
    bound: BoundSpec,
    factors: Vec<FactorSpec>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BoundSpec {
    Total(u32),
    Caps(Vec<u32>),
}

/// `(1 + coeff · q^exp)^power`.
#[derive(Deserialize)]
struct FactorSpec {
    exp: Vec<u32>,
    coeff: String,
    power: String,
}

pub fn series(cmd: SeriesCmd) -> Result<Report> {
    match cmd {
        SeriesCmd::Product { spec } => {
            let spec: ProductSpec = read_json(&spec)?;
            let bound = match spec.bound {
                BoundSpec::Total(d) => Bound::TotalDegree(d),
                BoundSpec::Caps(c) => Bound::PerVariable(c),
            };
            let factors = spec
                .factors
                .iter()
                .map(|f| {
                    let base =
                        TruncatedSeries::binomial_base(spec.arity, bound.clone(), f.exp.clone(), parse_rational(&f.coeff)?)?;
                    Ok((base, parse_rational(&f.power)?))
                })
                .collect::<std::result::Result<Vec<_>, Error>>()?;
            Ok(series_report(&product_expand(spec.arity, bound, &factors)?))
        }
        SeriesCmd::Exp { series } => Ok(series_report(&read_json::<TruncatedSeries>(&series)?.exp()?)),
        SeriesCmd::Log { series } => Ok(series_report(&read_json::<TruncatedSeries>(&series)?.log()?)),
    }
}
