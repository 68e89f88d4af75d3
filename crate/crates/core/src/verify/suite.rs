//! Running the registered claims over a grid of parameters.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::algebra::{bk_poly, bracket, BiPoly, Field, Var};
use crate::carlitz::UaTable;
use crate::check::Witness;
use crate::dd::{check_dd_equation_on, check_e_equation_on, check_h_equation_on, check_stability_formulas_on};
use crate::dd::{delta_margin, milestone_index, DSeries};
use crate::error::Result;
use crate::forms::{
    decompose_egh, depth_cap, depth_lower_bound, e_j1, e_jk, e_jk_via_t, expected_ord, extremal_search, extremal_seed,
    f_list_at, monomial_basis, type_of, weight_of, FormContext, DEFAULT_MARGIN,
};
use crate::hankel::{
    divisibility_check, hankel_coeff_det, hankel_det, hk_expansion_check, moore_det, nu, permutation_check,
    permutation_degree_check, relationship_check, sylvester_check, MultiIndex,
};
use crate::series::USeries;

use super::random::{random_tuple, random_v_series, rng_for};
use super::registry::{claims_for, coverage_problems, Suite};
use super::report::{Case, Params, Record, VerificationReport};

/// Parameter ranges for a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Largest k; when unset each suite uses its own default.
    pub kmax: Option<u32>,
    pub jmax: u32,
    /// Random Moore tuples per field.
    pub samples: usize,
    /// Random series per field for the divisibility check.
    pub random_series: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { kmax: None, jmax: 2, samples: 50, random_series: 10, seed: 0 }
    }
}

impl Bounds {
    fn kmax(&self, home: Suite) -> u32 {
        self.kmax.unwrap_or(match home {
            Suite::Theorem1 | Suite::Lemmas => 3,
            Suite::Theorem2 | Suite::Identities => 2,
            Suite::Moore => 4,
            Suite::All => 3,
        })
    }
}

/// Precision used by the identity checks when none is given.
pub const IDENTITY_PRECISION: i64 = 120;
/// Precision used by the closed-form checks when none is given.
pub const CLOSED_FORM_PRECISION: i64 = 100;

/// Default precision for the H_k(𝐝) claims: 1.5 ν_k, and always some room past the leading term.
pub fn theorem1_precision(q: u64, k: u32) -> i64 {
    let nu = nu(q, k) as i64;
    ((3 * nu + 1) / 2).max(nu + 10 * (q as i64 - 1))
}

/// Default precision for the E_{j,k} claims: 1.5 times the predicted order plus the solver margin.
pub fn theorem2_precision(q: u64, j: u32, k: u32) -> i64 {
    let ord = expected_ord(q, j, k) as i64;
    (3 * ord + 1) / 2 + DEFAULT_MARGIN
}

type Outcome = (&'static str, Case);
type JobFn = Box<dyn FnOnce() -> Vec<Outcome> + Send>;

struct Plan {
    jobs: Vec<JobFn>,
    /// Precision to warm the shared generators and deformation to, per field.
    warm: HashMap<u32, (i64, i64)>,
}

impl Plan {
    fn push(&mut self, job: impl FnOnce() -> Vec<Outcome> + Send + 'static) {
        self.jobs.push(Box::new(job));
    }

    fn want_generators(&mut self, q: u32, p: i64) {
        let e = self.warm.entry(q).or_insert((0, 0));
        e.0 = e.0.max(p);
    }

    fn want_deformation(&mut self, q: u32, p: i64) {
        let e = self.warm.entry(q).or_insert((0, 0));
        e.1 = e.1.max(p);
    }
}

fn checked(params: Params, r: Result<Witness>) -> Case {
    let target = params.precision.unwrap_or(0);
    Case::checked(params, Witness::from_result(r, target))
}

/// Runs every claim of `suite` for each q in `qs`. Failures become report entries.
pub fn run_suite(suite: Suite, qs: &[u32], bounds: &Bounds, precision: Option<i64>) -> VerificationReport {
    let claims = claims_for(suite);
    let wanted = |id: &str| claims.iter().any(|c| c.id == id);
    let mut plan = Plan { jobs: Vec::new(), warm: HashMap::new() };
    let mut contexts: Vec<(u32, Arc<FormContext>)> = Vec::new();
    let mut early: Vec<Outcome> = Vec::new();

    if wanted("registry.coverage") {
        plan.push(|| {
            let problems = coverage_problems();
            let w = Witness::expect(problems.is_empty(), 0, problems.join("; "));
            vec![("registry.coverage", Case::checked(Params::default(), w))]
        });
    }

    for &q in qs {
        match Field::with_order(q) {
            Ok(field) => contexts.push((q, Arc::new(FormContext::new(&field)))),
            Err(e) => {
                for c in &claims {
                    if c.id != "registry.coverage" {
                        let w = Witness::fail(0, None, e.to_string());
                        early.push((c.id, Case::checked(Params::q(q), w)));
                    }
                }
            }
        }
    }

    for (q, ctx) in &contexts {
        let (q, ctx) = (*q, ctx.clone());
        if claims.iter().any(|c| c.suite == Suite::Theorem1) {
            plan_theorem1(&mut plan, q, &ctx, bounds, precision);
        }
        if claims.iter().any(|c| c.suite == Suite::Theorem2) {
            plan_theorem2(&mut plan, q, &ctx, bounds, precision);
        }
        if claims.iter().any(|c| c.suite == Suite::Identities) {
            plan_identities(&mut plan, q, &ctx, bounds, precision);
        }
        if claims.iter().any(|c| c.suite == Suite::Lemmas) {
            plan_lemmas(&mut plan, q, &ctx, bounds, precision);
        }
        if claims.iter().any(|c| c.suite == Suite::Moore) {
            plan_moore(&mut plan, q, &ctx, bounds);
        }
    }

    // compute the shared series once, at the largest precision any job asks for
    contexts.par_iter().for_each(|(q, ctx)| {
        if let Some(&(pg, pd)) = plan.warm.get(q) {
            ctx.generators(pg.max(pd).max(1));
            if pd > 0 {
                ctx.deformation(pd);
            }
        }
    });

    let results: Vec<Vec<Outcome>> = plan
        .jobs
        .into_par_iter()
        .map(|job| {
            let start = Instant::now();
            let mut out = job();
            let ms = start.elapsed().as_secs_f64() * 1e3;
            for (_, case) in &mut out {
                case.wall_ms = ms;
            }
            out
        })
        .collect();

    let mut by_claim: HashMap<&str, Vec<Case>> = HashMap::new();
    for (id, case) in early.into_iter().chain(results.into_iter().flatten()) {
        by_claim.entry(id).or_default().push(case);
    }
    let records = claims
        .iter()
        .map(|c| {
            let cases = by_claim.remove(c.id).unwrap_or_default();
            Record::new(c.id, c.anchor, cases)
        })
        .collect();
    VerificationReport { suite: suite.to_string(), records }
}

fn plan_theorem1(plan: &mut Plan, q: u32, ctx: &Arc<FormContext>, bounds: &Bounds, precision: Option<i64>) {
    let qq = q as u64;
    for k in 1..=bounds.kmax(Suite::Theorem1) {
        let p = precision.unwrap_or_else(|| theorem1_precision(qq, k));
        plan.want_deformation(q, p);
        let ctx = ctx.clone();
        plan.push(move || {
            let params = Params::q(q).k(k).precision(p);
            let expected = nu(qq, k) as i64;
            let def = ctx.deformation(p);
            let hk = match hankel_det(&def.d, k as usize, p) {
                Ok(h) => h,
                Err(e) => {
                    let w = Witness::fail(p, None, e.to_string());
                    return ["t1.valuation", "t1.leading", "t1.normalised"]
                        .into_iter()
                        .map(|id| (id, Case::checked(params.clone(), w.clone())))
                        .collect();
                }
            };
            let bk = bk_poly(ctx.field(), k, Var::T);
            let valuation = hk.valuation().ok();
            let val_case = match valuation {
                Some(v) => Case::checked(
                    params.clone(),
                    Witness::expect(v == expected, p, format!("valuation {v}, expected {expected}")),
                )
                .with_note(format!("nu_k = {v}")),
                None => Case::checked(
                    params.clone(),
                    Witness::fail(p, None, format!("zero below u^{}, expected valuation {expected}", hk.precision())),
                ),
            };
            let lead_case = match hk.leading() {
                Ok(c) => Case::checked(
                    params.clone(),
                    Witness::expect(*c == bk, p, format!("leading coefficient {c}, expected {bk}")),
                ),
                Err(e) => Case::checked(params.clone(), Witness::fail(p, None, e.to_string())),
            };
            let norm = hk.exact_div_scalar(&bk).map(|quot| {
                let lead_one = quot.leading().map(BiPoly::is_one).unwrap_or(false);
                Witness::expect(lead_one, p, "quotient is not normalised")
                    .and(Witness::expect(quot.in_v_lattice(), p, "exponent outside (q-1)Z"))
            });
            vec![
                ("t1.valuation", val_case),
                ("t1.leading", lead_case),
                ("t1.normalised", checked(params, norm)),
            ]
        });
    }
}

fn plan_theorem2(plan: &mut Plan, q: u32, ctx: &Arc<FormContext>, bounds: &Bounds, precision: Option<i64>) {
    let qq = q as u64;
    let kmax = bounds.kmax(Suite::Theorem2);
    for k in 1..=kmax {
        let params = Params::q(q).k(k);
        plan.push(move || {
            let b = depth_lower_bound(qq, k);
            // the same rational from machine integers
            let num = 1 + (qq as i128).pow(k);
            let den = 32 * (1 + qq as i128) * (3 + 2 * qq as i128).pow(2);
            let expected = BigRational::new(BigInt::from(num), BigInt::from(den));
            let cap = BigRational::from_integer(BigInt::from(depth_cap(qq, k)));
            let w = Witness::expect(b == expected, 0, format!("bound {b}, expected {expected}"))
                .and(Witness::expect(b <= cap, 0, format!("bound {b} exceeds the depth cap {cap}")));
            vec![("t2.depth_bound", Case::checked(params.clone(), w).with_note(format!("bound = {b}")))]
        });
    }
    for k in 1..=kmax {
        for j in 0..=bounds.jmax {
            let p = precision.unwrap_or_else(|| theorem2_precision(qq, j, k));
            let w = weight_of(qq, j, k);
            let m = type_of(qq, k);
            let l = depth_cap(qq, k);
            let basis_len = monomial_basis(qq, w, m, l).len();
            let pm = p.max(extremal_seed(qq, w, l, basis_len, DEFAULT_MARGIN));
            plan.want_generators(q, pm);
            let base = Params::q(q).j(j).k(k);

            let c = ctx.clone();
            let params = base.clone().precision(p);
            plan.push(move || {
                let expected = expected_ord(qq, j, k) as i64;
                match e_jk(&c, j, k, p) {
                    Ok(e) => {
                        let ord = e.valuation().ok();
                        let order = match ord {
                            Some(o) => Witness::expect(o == expected, p, format!("order {o}, expected {expected}")),
                            None => Witness::fail(p, None, format!("zero below u^{p}, expected order {expected}")),
                        };
                        let integral = Witness::expect(e.is_t_free(), p, "a coefficient involves t");
                        let normalised = match e.leading() {
                            Ok(c) => Witness::expect(c.is_one(), p, format!("leading coefficient {c}")),
                            Err(err) => Witness::fail(p, None, err.to_string()),
                        };
                        vec![
                            ("t2.order", Case::checked(params.clone(), order)),
                            ("t2.integrality", Case::checked(params.clone(), integral)),
                            ("t2.normalised", Case::checked(params, normalised)),
                        ]
                    }
                    Err(err) => {
                        let w = Witness::from_result(Err(err), p);
                        ["t2.order", "t2.integrality", "t2.normalised"]
                            .into_iter()
                            .map(|id| (id, Case::checked(params.clone(), w.clone())))
                            .collect()
                    }
                }
            });

            let c = ctx.clone();
            let params = base.clone().precision(p);
            plan.push(move || {
                let r = e_jk(&c, j, k, p).and_then(|a| Ok(Witness::equal(&a, &e_jk_via_t(&c, j, k, p)?, p)));
                vec![("t2.cross_path", checked(params.clone(), r))]
            });

            let c = ctx.clone();
            let params = base.clone().precision(pm);
            plan.push(move || {
                let r = e_jk(&c, j, k, pm).and_then(|e| decompose_egh(&c, &e, w, m, l, DEFAULT_MARGIN));
                let case = match r {
                    Ok(poly) => {
                        let depth = poly.depth().unwrap_or(0);
                        let den = poly.common_denominator();
                        let (brackets, rest) = crate::forms::bracket_factorization(&den);
                        let mut den_text: Vec<String> = brackets.iter().map(|(j, e)| format!("[{j}]^{e}")).collect();
                        if !rest.is_one() {
                            den_text.push(format!("({rest})"));
                        }
                        let wit = Witness::expect(depth as u64 <= l, pm, format!("depth {depth} exceeds {l}"));
                        let note = format!(
                            "depth {depth} of cap {l}; denominator {}",
                            if den_text.is_empty() { "1".to_string() } else { den_text.join("*") }
                        );
                        Case::checked(params, wit).with_note(note)
                    }
                    Err(err) => checked(params, Err(err)),
                };
                vec![("t2.membership", case)]
            });

            let c = ctx.clone();
            let params = base.clone();
            plan.push(move || {
                if k > 2 || (k == 2 && qq < 3) {
                    return vec![("t2.extremal", Case::skipped(params.clone(), "extremality is claimed for k = 1, and k = 2 with q >= 3"))];
                }
                let r = extremal_search(&c, w, m, l, precision).and_then(|ex| {
                    let e = e_jk(&c, j, k, ex.precision)?;
                    let expected = expected_ord(qq, j, k) as i64;
                    Ok((ex.precision, Witness::expect(ex.max_ord == expected, ex.precision, format!("extremal order {}, expected {expected}", ex.max_ord))
                        .and(Witness::equal(&ex.series, &e, ex.precision))))
                });
                match r {
                    Ok((p, wit)) => vec![("t2.extremal", Case::checked(params.clone().precision(p), wit))],
                    Err(err) => vec![("t2.extremal", Case::checked(params.clone(), Witness::from_result(Err(err), 0)))],
                }
            });
        }
    }
}

/// Coefficients of 𝐝 displayed through v^{q²+q+1}; every other coefficient in that range is zero.
pub fn displayed_d_terms(field: &Field) -> Vec<(usize, BiPoly)> {
    let q = field.q() as usize;
    let t = BiPoly::t(field);
    let th = BiPoly::theta(field);
    let thq = th.frobenius_theta();
    let a = &t - &th;
    let two = BiPoly::from_int(field, 2);
    vec![
        (0, BiPoly::one(field)),
        (1, -&a),
        (q * q - q + 1, -&a),
        (q * q, a.clone()),
        (q * q + 1, &a * &(&(&t - &(&two * &thq)) + &th)),
        (q * q + q, -&(&a * &(&t - &thq))),
        (q * q + q + 1, &(&thq - &th) * &(&a * &(&t - &thq))),
    ]
}

fn plan_identities(plan: &mut Plan, q: u32, ctx: &Arc<FormContext>, bounds: &Bounds, precision: Option<i64>) {
    let qq = q as u64;
    let p = precision.unwrap_or(IDENTITY_PRECISION);
    let pc = precision.unwrap_or(CLOSED_FORM_PRECISION);
    let pd = p + delta_margin(q);
    plan.want_deformation(q, pd);
    let seed = bounds.seed;

    let c = ctx.clone();
    plan.push(move || {
        let field = c.field();
        let pp = 40.min(p);
        let gens = c.generators(pp);
        let one_b = bracket(field, 1).unwrap();
        let e_exp = USeries::from_terms(field, (qq * qq - 2 * qq + 3) as i64, [
            (1, BiPoly::one(field)),
            ((qq * qq - 2 * qq + 2) as i64, BiPoly::one(field)),
        ]);
        let g_hi = (qq.pow(3) - 2 * qq * qq + 2 * qq - 1) as i64;
        let g_exp = USeries::from_terms(field, g_hi + 1, [
            (0, BiPoly::one(field)),
            (qq as i64 - 1, -&one_b),
            (g_hi, -&one_b),
        ]);
        let h_exp = e_exp.neg();
        let delta = gens.h.pow(qq - 1).neg();
        let w = Witness::equal(&gens.e, &e_exp, e_exp.precision().min(pp))
            .and(Witness::equal(&gens.g, &g_exp, g_exp.precision().min(pp)))
            .and(Witness::equal(&gens.h, &h_exp, h_exp.precision().min(pp)))
            .and(Witness::equal(&gens.delta, &delta, pp));
        vec![("id.generators", Case::checked(Params::q(q).precision(pp), w))]
    });

    let c = ctx.clone();
    plan.push(move || {
        let field = c.field();
        let mut rng = rng_for(seed, &format!("frobenius/{q}"));
        let f = random_v_series(field, &mut rng, 30, 0.5).add(&USeries::u(field).scale(&BiPoly::t(field)));
        let w = Witness::equal(&f.pow(qq), &f.tau().chi(), f.precision())
            .and(Witness::equal(&f.tau().chi(), &f.chi().tau(), f.precision()));
        vec![("id.frobenius_split", Case::checked(Params::q(q).variant("random").precision(30), w))]
    });

    for j in 0..=bounds.jmax {
        let c = ctx.clone();
        plan.push(move || {
            let params = Params::q(q).j(j).precision(pc);
            let r = e_j1(&c, j, pc).and_then(|a| Ok(Witness::equal(&a, &e_jk_via_t(&c, j, 1, pc)?, pc)));
            vec![("id.forward_recursion", checked(params, r))]
        });
    }

    let c = ctx.clone();
    plan.push(move || {
        let field = c.field();
        let params = |m: u32| Params::q(q).variant(format!("m={m}")).precision(pc);
        let fs = match f_list_at(&c, 3, pc) {
            Ok(fs) => fs,
            Err(e) => {
                let w = Witness::fail(pc, None, e.to_string());
                return (1..=3)
                    .flat_map(|m| [("id.closed_forms", Case::checked(params(m), w.clone())), ("id.powersum", Case::checked(params(m), w.clone()))])
                    .collect();
            }
        };
        let gens = c.generators(pc);
        let (g, h) = (&gens.g, &gens.h);
        let b1q = bracket(field, 1).unwrap().frobenius_theta();
        let closed = [
            h.neg(),
            h.mul(&g.pow(qq)).neg(),
            h.mul(&g.pow(qq + 1).sub(&h.pow(qq - 1).scale(&b1q)).pow(qq)).neg(),
        ];
        let table = UaTable::new(field, pc);
        let mut out = Vec::new();
        for m in 1..=3u32 {
            let f = &fs[m as usize];
            out.push(("id.closed_forms", Case::checked(params(m), Witness::equal(f, &closed[m as usize - 1], pc))));
            out.push(("id.powersum", Case::checked(params(m), Witness::equal(f, &table.powersum(m), pc))));
        }
        out
    });

    let c = ctx.clone();
    plan.push(move || {
        let def = c.deformation(p);
        let w = check_dd_equation_on(&def.gens, &def.d_coeffs, p);
        vec![("id.tau_difference", Case::checked(Params::q(q).precision(p), w))]
    });

    let c = ctx.clone();
    plan.push(move || {
        let def = c.deformation(p);
        vec![("id.e_equation", Case::checked(Params::q(q).precision(p), check_e_equation_on(&def, p)))]
    });

    let c = ctx.clone();
    plan.push(move || {
        let def = c.deformation(pd);
        vec![("id.h_equation", checked(Params::q(q).precision(p), check_h_equation_on(&def, p)))]
    });

    let c = ctx.clone();
    plan.push(move || {
        let def = c.deformation(pd);
        check_stability_formulas_on(&def, p)
            .into_iter()
            .map(|(name, w)| ("id.stability", Case::checked(Params::q(q).variant(name).precision(p), w)))
            .collect()
    });

    for k in 1..=bounds.kmax(Suite::Identities) {
        let c = ctx.clone();
        plan.push(move || {
            let def = c.deformation(p);
            vec![("id.relationship", checked(Params::q(q).k(k).precision(p), relationship_check(&def, k as usize, p)))]
        });
    }

    for variant in ["d", "random"] {
        for s in 1..=2u32 {
            let c = ctx.clone();
            plan.push(move || {
                let f = match variant {
                    "d" => c.deformation(p).d,
                    _ => random_v_series(c.field(), &mut rng_for(seed, &format!("sylvester/{q}")), p, 0.3),
                };
                let params = Params::q(q).k(2).s(s).variant(variant).precision(p);
                vec![("id.sylvester", checked(params, sylvester_check(&f, s, 2, p)))]
            });
        }
    }
}

fn plan_lemmas(plan: &mut Plan, q: u32, ctx: &Arc<FormContext>, bounds: &Bounds, precision: Option<i64>) {
    let qq = q as u64;
    let qs = q as usize;
    let m = q as i64 - 1;
    let kmax = bounds.kmax(Suite::Lemmas);
    let seed = bounds.seed;
    let count_profile = milestone_index(qs, 3) + 1;
    plan.want_generators(q, m * count_profile as i64);

    let c = ctx.clone();
    plan.push(move || {
        let field = c.field();
        let top = qs * qs + qs + 1;
        let d = DSeries::from_generators(&c.generators(m * (top as i64 + 1)), top + 1);
        let shown = displayed_d_terms(field);
        let bad = (0..=top).find(|&s| {
            let want = shown.iter().find(|(n, _)| *n == s).map(|(_, c)| c.clone()).unwrap_or_else(|| BiPoly::zero(field));
            *d.c(s) != want
        });
        let w = match bad {
            None => Witness::pass(m * (top as i64 + 1)),
            Some(s) => Witness::fail(m * (top as i64 + 1), Some(m * s as i64), format!("c_{s} = {}", d.c(s))),
        };
        vec![("lemma.d_expansion", Case::checked(Params::q(q).precision(m * (top as i64 + 1)), w))]
    });

    let c = ctx.clone();
    plan.push(move || {
        let field = c.field();
        let prec = m * count_profile as i64;
        let d = DSeries::from_generators(&c.generators(prec), count_profile);
        let prof = d.degree_profile();
        let mut w = match prof.first_bound_violation(qs) {
            None => Witness::pass(prec),
            Some(s) => Witness::fail(prec, Some(m * s as i64), format!("deg_t c_{s} too large")),
        };
        for ms in prof.milestones.iter().filter(|ms| ms.l >= 1 && ms.l <= 3) {
            let want = BiPoly::from_int(field, if ms.l % 2 == 0 { 1 } else { -1 });
            let got = d.c(ms.s).t_coeff(ms.l as u32);
            let top_ok = d.c(ms.s).deg_t() == Some(ms.l as u32);
            w = w.and(Witness::expect(
                got == want && top_ok,
                prec,
                format!("c_{} has t^{} coefficient {got}", ms.s, ms.l),
            ));
        }
        let milestones = prof.milestones.iter().filter(|ms| ms.l >= 1 && ms.l <= 3).count();
        w = w.and(Witness::expect(milestones == 3, prec, "fewer than three milestones computed"));
        vec![("lemma.degree_in_t", Case::checked(Params::q(q).precision(prec), w))]
    });

    for k in 1..=kmax {
        let ku = k as usize;
        let s0 = MultiIndex::s0(qq, ku);
        let norm = s0.norm(qq);
        let cutoff_expansion = norm + 2;
        let cutoff_degree = 2 * norm + qq;
        let count = cutoff_degree as usize + 1;
        plan.want_generators(q, m * count as i64);

        let c = ctx.clone();
        plan.push(move || {
            let field = c.field();
            let d = DSeries::from_generators(&c.generators(m * count as i64), count);
            let s0 = MultiIndex::s0(qq, ku);
            let expected_norm = (qq.pow(k) - 1) * (qq.pow(k - 1) - 1) / ((qq * qq - 1) * (qq - 1));
            let bk = bk_poly(field, k, Var::T);
            let r = hankel_coeff_det(&s0, &d).map(|ds| {
                Witness::expect(norm == expected_norm, 0, format!("||s0|| = {norm}, expected {expected_norm}"))
                    .and(Witness::expect(ds == bk, 0, format!("d_s0 = {ds}")))
            });
            let params = Params::q(q).k(k).variant(format!("s0={:?}", s0.0));
            vec![("lemma.s0", checked(params, r).with_note(format!("||s0|| = {norm}")))]
        });

        let c = ctx.clone();
        plan.push(move || {
            let d = DSeries::from_generators(&c.generators(m * count as i64), count);
            let params = Params::q(q).k(k).variant(format!("norm<={cutoff_expansion}"));
            vec![("lemma.hk_expansion", checked(params, hk_expansion_check(&d, ku, cutoff_expansion)))]
        });

        let c = ctx.clone();
        plan.push(move || {
            let d = DSeries::from_generators(&c.generators(m * count as i64), count);
            let params = Params::q(q).k(k).variant(format!("norm<={cutoff_degree}"));
            vec![("lemma.permutation_degree", checked(params, permutation_degree_check(&d, ku, cutoff_degree)))]
        });

        plan.push(move || vec![("lemma.permutation", Case::checked(Params::q(q).k(k), permutation_check(qq, ku)))]);

        let pdiv = precision.unwrap_or(IDENTITY_PRECISION);
        plan.want_deformation(q, pdiv);
        let c = ctx.clone();
        plan.push(move || {
            let def = c.deformation(pdiv);
            let params = Params::q(q).k(k).variant("d").precision(pdiv);
            vec![("lemma.divisibility", checked(params, divisibility_check(&def.d, ku, pdiv)))]
        });
        for i in 0..bounds.random_series {
            let c = ctx.clone();
            // random inputs are sparse and shorter than the deformation checks
            let prand = pdiv.min(60);
            plan.push(move || {
                let mut rng = rng_for(seed, &format!("divisibility/{q}/{k}/{i}"));
                let f = random_v_series(c.field(), &mut rng, prand, 0.25);
                let params = Params::q(q).k(k).variant(format!("random#{i}")).precision(prand);
                vec![("lemma.divisibility", checked(params, divisibility_check(&f, ku, prand)))]
            });
        }
    }
}

fn plan_moore(plan: &mut Plan, q: u32, ctx: &Arc<FormContext>, bounds: &Bounds) {
    let kmax = bounds.kmax(Suite::Moore).max(1);
    let seed = bounds.seed;
    for k in 1..=kmax {
        let c = ctx.clone();
        plan.push(move || {
            let field = c.field();
            let nu: Vec<u32> = (0..k).collect();
            let m = moore_det(field, &nu);
            let bk = bk_poly(field, k, Var::T);
            vec![("moore.vandermonde", Case::checked(Params::q(q).k(k), Witness::expect(m == bk, 0, format!("M = {m}"))))]
        });
    }
    let samples = bounds.samples;
    let c = ctx.clone();
    plan.push(move || {
        let field = c.field();
        let mut rng = rng_for(seed, &format!("moore/{q}"));
        (0..samples)
            .map(|i| {
                let k = if kmax == 1 { 1 } else { 2 + (i as u32 % (kmax - 1)) };
                let nu = random_tuple(&mut rng, k as usize, 3 * k);
                let m = moore_det(field, &nu);
                let bk = bk_poly(field, k, Var::T);
                let w = match m.exact_div(&bk) {
                    Ok(_) => Witness::pass(0),
                    Err(e) => Witness::fail(0, None, format!("M{nu:?}: {e}")),
                };
                ("moore.divisibility", Case::checked(Params::q(q).k(k).variant(format!("nu={nu:?}")), w))
            })
            .collect()
    });
}
