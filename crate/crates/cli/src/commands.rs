use std::path::PathBuf;

use hankel_core::algebra::{parse_wpoly, prime_power, Field};
use hankel_core::forms::{
    decompose_egh, extremal_search, extremal_seed, monomial_basis, weight_of, FormContext, FormId, DEFAULT_MARGIN,
};
use hankel_core::io::SeriesJson;
use hankel_core::series::USeries;
use hankel_core::verify::{default_golden_dir, golden_check, run_suite, theorem2_precision, Bounds, Suite, VerificationReport};
use serde_json::json;

use crate::args::{CacheAction, FieldOpts, Format};
use crate::cache::Cache;
use crate::config::Config;
use crate::error::{CliError, CliResult};

/// Default precision for `compute` when neither the flag nor the config sets one.
pub const DEFAULT_PRECISION: i64 = 40;

/// Settings shared by every command after merging flags, environment and config.
pub struct Env {
    pub config: Config,
    pub format: Format,
    pub cache: Option<Cache>,
}

/// What a command produced: the rendered text and whether it counts as success.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

pub fn resolve_field(opts: &FieldOpts, config: &Config) -> CliResult<Field> {
    let q = opts.q.or(config.q).ok_or_else(|| CliError::Usage("missing --q".into()))?;
    let (p, e0) = prime_power(q).ok_or_else(|| CliError::Usage(format!("--q {q} is not a prime power")))?;
    let e = match opts.e.or(config.e) {
        None => e0,
        Some(e) if e0 == 1 => e,
        Some(e) if e == e0 => e,
        Some(e) => return Err(CliError::Usage(format!("--q {q} = {p}^{e0} conflicts with --e {e}"))),
    };
    let modulus = match opts.modulus.as_ref().or(config.modulus.as_ref()) {
        None => None,
        Some(text) => Some(parse_wpoly(text)?.into_iter().map(|c| (c % p as u64) as u32).collect()),
    };
    Ok(Field::new(p, e, modulus)?)
}

fn field_text(field: &Field) -> String {
    if field.is_prime_field() {
        format!("F_{}", field.q())
    } else {
        format!("F_{} = F_{}[w]/({})", field.q(), field.p(), field.modulus_text())
    }
}

fn field_json(field: &Field) -> serde_json::Value {
    json!({"q": field.q(), "p": field.p(), "e": field.e(), "modulus": field.modulus_text()})
}

fn parse_form(text: &str) -> CliResult<FormId> {
    text.parse::<FormId>().map_err(|e| CliError::Usage(e.to_string()))
}

/// The form below `precision`, through the cache when one is configured.
fn series_of(env: &Env, ctx: &FormContext, form: FormId, precision: i64) -> CliResult<USeries> {
    let name = form.to_string();
    if let Some(cache) = &env.cache {
        if let Some(s) = cache.get(ctx.field(), &name, precision)? {
            return Ok(s);
        }
    }
    let s = form.compute(ctx, precision)?.truncate(precision);
    if let Some(cache) = &env.cache {
        cache.put(ctx.field(), &name, precision, &s)?;
    }
    Ok(s)
}

fn to_json(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("values built here always serialize")
}

pub fn compute(env: &Env, form: &str, field: &FieldOpts, prec: Option<i64>) -> CliResult<Output> {
    let form = parse_form(form)?;
    let field = resolve_field(field, &env.config)?;
    let precision = prec.or(env.config.precision).unwrap_or(DEFAULT_PRECISION);
    if precision < 1 {
        return Err(CliError::Usage(format!("--prec must be positive, got {precision}")));
    }
    let ctx = FormContext::new(&field);
    let s = series_of(env, &ctx, form, precision)?;
    let valuation = s.valuation().ok();
    let leading = s.leading().ok().map(|c| c.to_string());
    Ok(Output::ok(match env.format {
        Format::Json => to_json(&json!({
            "form": form.to_string(),
            "field": field_json(&field),
            "precision": precision,
            "valuation": valuation,
            "leading": leading,
            "series": SeriesJson::from_series(&s),
        })),
        Format::Text => format!(
            "form: {form}\nfield: {}\nprecision: {precision}\nvaluation: {}\nleading: {}\nseries: {s}\n",
            field_text(&field),
            valuation.map_or("none".into(), |v| v.to_string()),
            leading.unwrap_or_else(|| "none".into()),
        ),
    }))
}

fn parse_q_list(text: &str) -> CliResult<Vec<u32>> {
    let mut qs = Vec::new();
    for part in text.split(',') {
        let q: u32 = part.trim().parse().map_err(|_| CliError::Usage(format!("bad field order {part:?} in --q")))?;
        if prime_power(q).is_none() {
            return Err(CliError::Usage(format!("--q {q} is not a prime power")));
        }
        if !qs.contains(&q) {
            qs.push(q);
        }
    }
    Ok(qs)
}

pub struct VerifyArgs {
    pub suite: String,
    pub q: Option<String>,
    pub prec: Option<i64>,
    pub kmax: Option<u32>,
    pub jmax: Option<u32>,
    pub samples: Option<usize>,
    pub random_series: Option<usize>,
    pub seed: Option<u64>,
    pub golden_dir: Option<PathBuf>,
}

fn render_report(env: &Env, report: &VerificationReport) -> Output {
    let text = match env.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_table(),
    };
    Output { text, ok: report.passed() }
}

pub fn verify(env: &Env, a: VerifyArgs) -> CliResult<Output> {
    if a.suite == "golden" {
        let dir = a.golden_dir.unwrap_or_else(default_golden_dir);
        return Ok(render_report(env, &golden_check(&dir)?));
    }
    let suite: Suite = a.suite.parse().map_err(|_: hankel_core::Error| {
        CliError::Usage(format!(
            "unknown suite {:?}; expected one of theorem1, theorem2, identities, lemmas, moore, all, golden",
            a.suite
        ))
    })?;
    let qs = match (&a.q, env.config.q) {
        (Some(text), _) => parse_q_list(text)?,
        (None, Some(q)) => vec![q],
        (None, None) => vec![2, 3],
    };
    if let Some(p) = a.prec.filter(|p| *p < 1) {
        return Err(CliError::Usage(format!("--prec must be positive, got {p}")));
    }
    let defaults = Bounds::default();
    let bounds = Bounds {
        kmax: a.kmax,
        jmax: a.jmax.unwrap_or(defaults.jmax),
        samples: a.samples.unwrap_or(defaults.samples),
        random_series: a.random_series.unwrap_or(defaults.random_series),
        seed: a.seed.unwrap_or(defaults.seed),
    };
    Ok(render_report(env, &run_suite(suite, &qs, &bounds, a.prec)))
}

pub struct SpaceArgs {
    pub w: Option<u64>,
    pub m: Option<u64>,
    pub l: Option<u64>,
    pub prec: Option<i64>,
}

pub fn decompose(env: &Env, form: &str, field: &FieldOpts, space: SpaceArgs) -> CliResult<Output> {
    let form = parse_form(form)?;
    let field = resolve_field(field, &env.config)?;
    let q = field.q() as u64;
    let meta = form.default_meta(q);
    let pick = |given: Option<u64>, default: Option<u64>, name: &str| {
        given.or(default).ok_or_else(|| CliError::Usage(format!("{form} has no default space; pass --{name}")))
    };
    let w = pick(space.w, meta.map(|m| m.weight), "w")?;
    let m = pick(space.m, meta.map(|m| m.type_m), "m")?;
    let l = pick(space.l, meta.map(|m| m.depth), "l")?;
    let basis = monomial_basis(q, w, m, l);
    let precision = space.prec.unwrap_or_else(|| {
        let seed = extremal_seed(q, w, l, basis.len(), DEFAULT_MARGIN);
        match form {
            FormId::Ejk(j, k) => seed.max(theorem2_precision(q, j, k)),
            _ => seed,
        }
    });
    let ctx = FormContext::new(&field);
    let s = series_of(env, &ctx, form, precision)?;
    let poly = decompose_egh(&ctx, &s, w, m, l, DEFAULT_MARGIN)?;
    let depth = poly.depth();
    Ok(Output::ok(match env.format {
        Format::Json => to_json(&json!({
            "form": form.to_string(),
            "field": field_json(&field),
            "weight": w, "type": m, "depth_bound": l,
            "precision": precision,
            "depth": depth,
            "decomposition": poly.to_string(),
        })),
        Format::Text => format!(
            "form: {form}\nfield: {}\nspace: weight {w}, type {m}, depth <= {l}\nprecision: {precision}\ndepth: {}\ndecomposition: {poly}\n",
            field_text(&field),
            depth.map_or("none".into(), |d| d.to_string()),
        ),
    }))
}

/// Named forms that could live in the space of weight w and type m.
fn candidates(q: u64, w: u64) -> Vec<FormId> {
    let mut out = vec![FormId::E, FormId::G, FormId::H, FormId::Delta];
    for k in 1..=3u32 {
        for j in 0..=6u32 {
            if q.checked_pow(j).is_some() && weight_of(q, j, k) == w {
                out.push(if k == 1 { FormId::Ej1(j) } else { FormId::Ejk(j, k) });
            }
        }
    }
    out
}

pub fn extremal(env: &Env, field: &FieldOpts, w: u64, m: u64, l: u64, prec: Option<i64>) -> CliResult<Output> {
    let field = resolve_field(field, &env.config)?;
    let q = field.q() as u64;
    let ctx = FormContext::new(&field);
    let ex = extremal_search(&ctx, w, m, l, prec)?;
    let mut name = None;
    for id in candidates(q, w) {
        let meta = id.default_meta(q);
        if meta.is_some_and(|mt| mt.weight == w && mt.type_m == m % (q - 1)) {
            if let Ok(s) = id.compute(&ctx, ex.precision) {
                if s.truncate(ex.precision) == ex.series {
                    name = Some(id.to_string());
                    break;
                }
            }
        }
    }
    Ok(Output::ok(match env.format {
        Format::Json => to_json(&json!({
            "field": field_json(&field),
            "weight": w, "type": m, "depth_bound": l,
            "max_ord": ex.max_ord,
            "precision": ex.precision,
            "form": name,
            "decomposition": ex.poly.to_string(),
            "series": SeriesJson::from_series(&ex.series),
        })),
        Format::Text => format!(
            "field: {}\nspace: weight {w}, type {m}, depth <= {l}\nmax_ord: {}\nprecision: {}\nform: {}\ndecomposition: {}\nseries: {}\n",
            field_text(&field),
            ex.max_ord,
            ex.precision,
            name.unwrap_or_else(|| "unnamed".into()),
            ex.poly,
            ex.series,
        ),
    }))
}

pub fn cache(env: &Env, action: CacheAction) -> CliResult<Output> {
    let cache = env.cache.as_ref().ok_or_else(|| CliError::Usage("the cache is disabled by --no-cache".into()))?;
    Ok(Output::ok(match action {
        CacheAction::List => {
            let entries = cache.list()?;
            match env.format {
                Format::Json => to_json(&json!({"dir": cache.dir().display().to_string(), "entries": entries})),
                Format::Text => {
                    let mut out = format!("cache: {}\n", cache.dir().display());
                    for e in &entries {
                        out.push_str(&format!(
                            "{:<14} q={:<4} prec={:<6} {:>9} bytes  {}\n",
                            e.form,
                            e.q,
                            e.precision,
                            e.bytes,
                            if e.valid { "ok" } else { "invalid" }
                        ));
                    }
                    out.push_str(&format!("{} entries\n", entries.len()));
                    out
                }
            }
        }
        CacheAction::Clear => {
            let n = cache.clear()?;
            match env.format {
                Format::Json => to_json(&json!({"removed": n})),
                Format::Text => format!("removed {n} entries\n"),
            }
        }
    }))
}
