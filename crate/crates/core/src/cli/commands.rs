use std::path::Path;

use serde_json::{json, Value};

use super::expr::{parse_element, parse_poly1, parse_poly2, Var};
use super::{
    Command, EntropyCmd, ExpansiveCmd, HomoclinicCmd, LinearArgs, MixingCmd, Outcome, RandprodArgs,
    RingCmd, Status, Table, WordsArgs, WordsCmd,
};
use crate::entropy::{
    entropy_linear, entropy_periodic, entropy_trace_series, entropy_trace_series_terms,
    face_entropy_lower_bound, quadratic_experiment, quadratic_parts, word_counts,
    word_counts_cached, EntropyEstimate, QuadraticConfig, WordGroup,
};
use crate::error::{Error, Result};
use crate::expansive::{
    allan_rational_check, bounded_cocycle_scan, check_linear_y_expansive, example48_suite,
    is_lopsided, lopsidize, torus_min, LinearCheckConfig, LopsidizeBudget, VerdictStatus,
};
use crate::homoclinic::{
    annihilation_residual, decay_certificate, dist_to_integer, fundamental_homoclinic,
    symbolic_cover_sample,
};
use crate::laurent::{
    generalized_cyclotomic_divisor_search, has_root_of_unity_root, sturm_expansive_z, LaurentPoly2,
};
use crate::lyapunov::{
    entropy_via_lyapunov, herman_lower_bound, monicize, random_product_experiment, LyapunovConfig,
};
use crate::numeric::circle;
use crate::ring::{q_binomial, q_binomial_expand, GroupAutomorphism, GroupRingElement, Monomial};

fn ok(result: Value) -> Result<Outcome> {
    Ok(Outcome {
        status: Status::Ok,
        result,
        table: None,
    })
}

fn with_table(result: Value, table: Table) -> Result<Outcome> {
    Ok(Outcome {
        status: Status::Ok,
        result,
        table: Some(table),
    })
}

/// Coefficients are decimal strings so that no precision is lost.
fn element_json(f: &GroupRingElement) -> Value {
    json!({
        "normal_form": f.to_string(),
        "terms": f
            .terms()
            .map(|(m, c)| json!([m.k, m.l, m.m, c.to_string()]))
            .collect::<Vec<_>>(),
    })
}

fn estimate_json(e: &EntropyEstimate) -> Value {
    serde_json::to_value(e).expect("estimate serializes")
}

pub(crate) fn execute(command: &Command, cache: Option<&Path>) -> Result<(String, Outcome)> {
    match command {
        Command::Ring(c) => ring(c),
        Command::Mixing(c) => mixing(c),
        Command::Expansive(c) => expansive(c),
        Command::Entropy(c) => entropy(c),
        Command::Words(c) => words(c, cache),
        Command::Homoclinic(c) => homoclinic(c),
        Command::Randprod(a) => Ok(("randprod".into(), randprod(a)?)),
        Command::Replay { .. } => Err(Error::InvalidInput(
            "replay must be resolved before execution".into(),
        )),
    }
}

fn named(name: &str, out: Result<Outcome>) -> Result<(String, Outcome)> {
    out.map(|o| (name.to_string(), o))
}

fn ring(c: &RingCmd) -> Result<(String, Outcome)> {
    match c {
        RingCmd::Mul { a, b } => {
            let (fa, fb) = (parse_element(a)?, parse_element(b)?);
            named(
                "ring mul",
                ok(json!({
                    "a": element_json(&fa),
                    "b": element_json(&fb),
                    "product": element_json(&fa.mul(&fb)?),
                })),
            )
        }
        RingCmd::Star { f } => {
            let f = parse_element(f)?;
            named(
                "ring star",
                ok(json!({ "f": element_json(&f), "star": element_json(&f.star()?) })),
            )
        }
        RingCmd::Newton { f } => {
            let f = parse_element(f)?;
            let p = f.newton_polygon();
            let mut t = Table::new(&["k", "l"]);
            for (k, l) in &p.vertices {
                t.push([k.to_string(), l.to_string()]);
            }
            named(
                "ring newton",
                with_table(
                    json!({
                        "f": element_json(&f),
                        "vertices": p.vertices,
                        "edges": p.edges(),
                        "double_area": p.double_area().to_string(),
                    }),
                    t,
                ),
            )
        }
        RingCmd::Content { f } => {
            let f = parse_element(f)?;
            let c = f.content()?;
            named(
                "ring content",
                ok(json!({
                    "f": element_json(&f),
                    "content": c.to_string(),
                    "content_coeffs": c.coeffs().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "content_low": c.low(),
                })),
            )
        }
        RingCmd::Qbinom { n, k } => {
            let mut t = Table::new(&["k", "coefficient"]);
            let result = match k {
                Some(k) => {
                    let p = q_binomial(*n, *k)?;
                    t.push([k.to_string(), p.to_string()]);
                    json!({ "n": n, "k": k, "coefficient": p.to_string() })
                }
                None => {
                    let row = q_binomial_expand(*n)?;
                    let direct = GroupRingElement::x().add(&GroupRingElement::y())?.pow(*n)?;
                    let rebuilt =
                        GroupRingElement::from_terms(row.iter().enumerate().flat_map(|(k, p)| {
                            p.terms()
                                .map(move |(e, c)| {
                                    (Monomial::new(k as i64, *n as i64 - k as i64, e), c)
                                })
                                .collect::<Vec<_>>()
                        }))?;
                    for (k, p) in row.iter().enumerate() {
                        t.push([k.to_string(), p.to_string()]);
                    }
                    json!({
                        "n": n,
                        "coefficients": row.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "matches_direct_power": rebuilt == direct,
                    })
                }
            };
            named("ring qbinom", with_table(result, t))
        }
    }
}

/// One of the sufficient conditions: a commuting two-variable polynomial with
/// no generalized cyclotomic divisor.
fn cyclotomic_condition(p: &LaurentPoly2, k_max: u64, n_max: i64) -> Result<Value> {
    let divisor = generalized_cyclotomic_divisor_search(p, k_max, n_max)?;
    // every generalized cyclotomic polynomial vanishes somewhere on the torus
    let (tmin, _) = torus_min(p, 256);
    Ok(json!({
        "polynomial": p.fmt_vars("u1", "u2"),
        "divisor": divisor,
        "torus_min": tmin,
        "no_divisor_found": divisor.is_none(),
        "certified_by_torus": tmin > 1e-6,
    }))
}

fn mixing(c: &MixingCmd) -> Result<(String, Outcome)> {
    match c {
        MixingCmd::Central { g } => {
            let p = parse_poly1(g)?;
            if p.is_zero() {
                return Err(Error::InvalidInput("g must be nonzero".into()));
            }
            let d = has_root_of_unity_root(&p)?;
            named(
                "mixing central",
                ok(json!({
                    "g": p.to_string(),
                    "root_of_unity_order": d,
                    "mixing": d.is_none(),
                })),
            )
        }
        MixingCmd::Hayes { f, k_max, n_max } => {
            let f = parse_element(f)?;
            if f.is_zero() {
                return Err(Error::InvalidInput("f must be nonzero".into()));
            }
            let has_x = f.terms().any(|(m, _)| m.k != 0);
            let has_y = f.terms().any(|(m, _)| m.l != 0);
            let mut conditions = Vec::new();
            let mut holds = false;
            if !has_y {
                let p = LaurentPoly2::from_terms(f.terms().map(|(m, c)| ((m.k, m.m), *c)))?;
                let v = cyclotomic_condition(&p, *k_max, *n_max)?;
                holds |= v["no_divisor_found"].as_bool() == Some(true);
                conditions.push(json!({ "condition": "x-z", "check": v }));
            }
            if !has_x {
                let p = LaurentPoly2::from_terms(f.terms().map(|(m, c)| ((m.l, m.m), *c)))?;
                let v = cyclotomic_condition(&p, *k_max, *n_max)?;
                holds |= v["no_divisor_found"].as_bool() == Some(true);
                conditions.push(json!({ "condition": "y-z", "check": v }));
            }
            let content = f.content()?;
            let content_root = has_root_of_unity_root(&content)?;
            let ab = cyclotomic_condition(&f.abelianize()?, *k_max, *n_max)?;
            let third = content_root.is_none() && ab["no_divisor_found"].as_bool() == Some(true);
            holds |= third;
            conditions.push(json!({
                "condition": "content-abelianization",
                "content": content.to_string(),
                "content_root_of_unity_order": content_root,
                "check": ab,
                "holds": third,
            }));
            let out = Outcome {
                status: if holds {
                    Status::Ok
                } else {
                    Status::Undetermined
                },
                result: json!({
                    "f": element_json(&f),
                    "verdict": if holds { "mixing" } else { "undetermined" },
                    "k_max": k_max,
                    "n_max": n_max,
                    "conditions": conditions,
                }),
                table: None,
            };
            named("mixing hayes", Ok(out))
        }
    }
}

fn xz_element(p: &LaurentPoly2) -> Result<GroupRingElement> {
    GroupRingElement::from_terms(p.terms().map(|((i, j), c)| (Monomial::new(*i, 0, *j), *c)))
}

fn linear_config(a: &LinearArgs) -> LinearCheckConfig {
    LinearCheckConfig {
        zeta_grid: a.zeta_grid,
        torus_grid: a.torus_grid,
        xi_grid: a.xi_grid,
        rational_max: a.rational_max,
        margin: a.margin,
        d_margin: a.d_margin,
    }
}

fn expansive(c: &ExpansiveCmd) -> Result<(String, Outcome)> {
    match c {
        ExpansiveCmd::Sturm { f } => {
            let p = parse_poly1(f)?;
            let r = sturm_expansive_z(&p)?;
            named(
                "expansive sturm",
                ok(json!({ "f": p.to_string(), "report": r })),
            )
        }
        ExpansiveCmd::Linear(a) => {
            let h = parse_poly2(&a.h, Var::X, Var::Z)?;
            let g = parse_poly2(&a.g, Var::X, Var::Z)?;
            let v = check_linear_y_expansive(&h, &g, &linear_config(a))?;
            let status = match v.status {
                VerdictStatus::Undetermined => Status::Undetermined,
                _ => Status::Ok,
            };
            let f = xz_element(&h)?
                .mul(&GroupRingElement::y())?
                .sub(&xz_element(&g)?)?;
            named(
                "expansive linear",
                Ok(Outcome {
                    status,
                    result: json!({
                        "f": element_json(&f),
                        "h": h.fmt_vars("x", "z"),
                        "g": g.fmt_vars("x", "z"),
                        "verdict": v,
                    }),
                    table: None,
                }),
            )
        }
        ExpansiveCmd::Allan { f, p, q, grid } => {
            let f = parse_element(f)?;
            let r = allan_rational_check(&f, *p, *q, *grid)?;
            named(
                "expansive allan",
                ok(json!({ "f": element_json(&f), "report": r })),
            )
        }
        ExpansiveCmd::Scan {
            h,
            g,
            zeta,
            xi,
            window,
        } => {
            let h = parse_poly2(h, Var::X, Var::Z)?;
            let g = parse_poly2(g, Var::X, Var::Z)?;
            let tr = bounded_cocycle_scan(&g, &h, circle(*zeta), circle(*xi), *window)?;
            let mut t = Table::new(&["n", "psi"]);
            for (i, v) in tr.values.iter().enumerate() {
                t.push([(i as i64 - *window as i64).to_string(), v.to_string()]);
            }
            named(
                "expansive scan",
                with_table(
                    json!({
                        "h": h.fmt_vars("x", "z"),
                        "g": g.fmt_vars("x", "z"),
                        "trace": tr,
                    }),
                    t,
                ),
            )
        }
        ExpansiveCmd::Lopsidize {
            f,
            max_iterations,
            max_radius,
            max_scale_log2,
        } => {
            let f = parse_element(f)?;
            let budget = LopsidizeBudget {
                max_iterations: *max_iterations,
                max_radius: *max_radius,
                max_scale_log2: *max_scale_log2,
            };
            let found = lopsidize(&f, &budget)?;
            let result = match &found {
                Some(g) => {
                    let fg = f.mul(g)?;
                    json!({
                        "f": element_json(&f),
                        "found": true,
                        "g": element_json(g),
                        "fg": element_json(&fg),
                        "dominant": is_lopsided(&fg).map(|m| m.to_string()),
                    })
                }
                None => json!({ "f": element_json(&f), "found": false }),
            };
            named(
                "expansive lopsidize",
                Ok(Outcome {
                    status: if found.is_some() {
                        Status::Ok
                    } else {
                        Status::Undetermined
                    },
                    result,
                    table: None,
                }),
            )
        }
        ExpansiveCmd::Example48 => {
            let r = example48_suite()?;
            let mut t = Table::new(&["exponent", "coefficient"]);
            for (e, c) in r.g_coeffs.iter().enumerate() {
                t.push([e.to_string(), c.to_string()]);
            }
            named(
                "expansive example48",
                with_table(serde_json::to_value(&r)?, t),
            )
        }
    }
}

fn entropy(c: &EntropyCmd) -> Result<(String, Outcome)> {
    match c {
        EntropyCmd::Trace { f, tol, terms } => {
            let f = parse_element(f)?;
            let e = match terms {
                Some(n) => entropy_trace_series_terms(&f, *n)?,
                None => entropy_trace_series(&f, *tol)?,
            };
            let mut t = Table::new(&["n", "trace"]);
            if let Some(tr) = e.diagnostics["traces"].as_array() {
                for (n, v) in tr.iter().enumerate() {
                    t.push([n.to_string(), v.as_str().unwrap_or_default().to_string()]);
                }
            }
            named(
                "entropy trace",
                with_table(
                    json!({ "f": element_json(&f), "estimate": estimate_json(&e) }),
                    t,
                ),
            )
        }
        EntropyCmd::Periodic { f, q, grid } => {
            let f = parse_element(f)?;
            let r = entropy_periodic(&f, q, *grid)?;
            let mut t = Table::new(&["q", "value", "quad_error", "flagged_cells", "min_abs_det"]);
            for term in &r.terms {
                t.push([
                    term.q.to_string(),
                    term.value.to_string(),
                    term.quad_error.to_string(),
                    term.flagged_cells.to_string(),
                    term.min_abs_det.to_string(),
                ]);
            }
            named(
                "entropy periodic",
                with_table(json!({ "f": element_json(&f), "report": r }), t),
            )
        }
        EntropyCmd::Linear { f, grid } => {
            let f = parse_element(f)?;
            let e = entropy_linear(&f, *grid)?;
            named(
                "entropy linear",
                ok(json!({ "f": element_json(&f), "estimate": estimate_json(&e) })),
            )
        }
        EntropyCmd::Face { f, grid } => {
            let f = parse_element(f)?;
            let r = face_entropy_lower_bound(&f, *grid)?;
            let mut t = Table::new(&[
                "from_k",
                "from_l",
                "to_k",
                "to_l",
                "face_poly",
                "value",
                "error",
            ]);
            for face in &r.faces {
                t.push([
                    face.from.0.to_string(),
                    face.from.1.to_string(),
                    face.to.0.to_string(),
                    face.to.1.to_string(),
                    face.face_poly.clone(),
                    face.value.to_string(),
                    face.error.to_string(),
                ]);
            }
            named(
                "entropy face",
                with_table(json!({ "f": element_json(&f), "report": r }), t),
            )
        }
        EntropyCmd::Lyapunov {
            f,
            zetas,
            steps,
            samples,
            seed,
            allow_rational,
            herman_grid,
        } => {
            let f = parse_element(f)?;
            let cfg = LyapunovConfig {
                n_steps: *steps,
                n_samples: *samples,
                seed: *seed,
                allow_rational: *allow_rational,
            };
            let e = entropy_via_lyapunov(&f, *zetas, &cfg)?;
            let herman = match herman_grid {
                Some(g) => Some(herman_lower_bound(&monicize(&f)?.0, *g)?),
                None => None,
            };
            let mut t = Table::new(&["theta", "positive_sum"]);
            let thetas = e.diagnostics["thetas"]
                .as_array()
                .cloned()
                .unwrap_or_default();
            let sums = e.diagnostics["positive_sums"]
                .as_array()
                .cloned()
                .unwrap_or_default();
            for (th, v) in thetas.iter().zip(&sums) {
                t.push([th.to_string(), v.to_string()]);
            }
            named(
                "entropy lyapunov",
                with_table(
                    json!({
                        "f": element_json(&f),
                        "estimate": estimate_json(&e),
                        "herman": herman,
                    }),
                    t,
                ),
            )
        }
        EntropyCmd::ExperimentQuadratic {
            f,
            zeta_grid,
            steps,
            eta_samples,
            q,
            periodic_grid,
        } => {
            let f = parse_element(f)?;
            let cfg = QuadraticConfig {
                zeta_grid: *zeta_grid,
                steps: *steps,
                eta_samples: *eta_samples,
                primes: if *periodic_grid == 0 {
                    Vec::new()
                } else {
                    q.clone()
                },
                periodic_grid: *periodic_grid,
            };
            // entropy is invariant under x ↔ y
            let swapped = quadratic_parts(&f).is_err();
            let g = if swapped {
                GroupAutomorphism::swap_xy().apply(&f)?
            } else {
                f.clone()
            };
            let r = quadratic_experiment(&g, &cfg)?;
            let mut t = Table::new(&["s", "m_g0", "b", "m_g2"]);
            for p in &r.curve {
                t.push([
                    p.s.to_string(),
                    p.m_g0.to_string(),
                    p.b.to_string(),
                    p.m_g2.to_string(),
                ]);
            }
            named(
                "entropy experiment-quadratic",
                with_table(
                    json!({ "f": element_json(&f), "swapped_xy": swapped, "report": r }),
                    t,
                ),
            )
        }
    }
}

fn words(c: &WordsCmd, cache: Option<&Path>) -> Result<(String, Outcome)> {
    let (name, group, args): (&str, WordGroup, &WordsArgs) = match c {
        WordsCmd::Heis(a) => ("words heis", WordGroup::Heisenberg, a),
        WordsCmd::Z2(a) => ("words z2", WordGroup::Z2, a),
        WordsCmd::Free(a) => ("words free", WordGroup::Free2, a),
    };
    let table = match cache {
        Some(p) => word_counts_cached(group, args.nmax, p)?,
        None => word_counts(group, args.nmax)?,
    };
    let counts: Vec<String> = table.counts.iter().map(|c| c.to_string()).collect();
    let mut t = Table::new(&["n", "count"]);
    for (n, c) in counts.iter().enumerate() {
        t.push([n.to_string(), c.clone()]);
    }
    let last = counts.last().cloned().unwrap_or_default();
    named(
        name,
        with_table(
            json!({
                "group": group,
                "n_max": args.nmax,
                "counts": counts,
                "digits_at_n_max": last.len(),
                "cache": cache,
            }),
            t,
        ),
    )
}

fn homoclinic(c: &HomoclinicCmd) -> Result<(String, Outcome)> {
    match c {
        HomoclinicCmd::Fundamental { f, eps, radius } => {
            let f = parse_element(f)?;
            let w = fundamental_homoclinic(&f, *eps)?;
            let decay = if w.decay.is_some() {
                Some(decay_certificate(&w)?)
            } else {
                None
            };
            let residual = annihilation_residual(&w, &f)?;
            let mut t = Table::new(&["k", "l", "m", "coefficient", "value"]);
            let mut shown = Vec::new();
            for (m, v) in &w.coefficients {
                let val = w.values.get(m).copied().unwrap_or(0.0);
                t.push([
                    m.k.to_string(),
                    m.l.to_string(),
                    m.m.to_string(),
                    v.to_string(),
                    val.to_string(),
                ]);
                if m.gauge() <= *radius {
                    shown.push(json!([m.k, m.l, m.m, v, val]));
                }
            }
            named(
                "homoclinic fundamental",
                with_table(
                    json!({
                        "f": element_json(&f),
                        "terms": w.terms,
                        "support_size": w.coefficients.len(),
                        "tail_bound": w.tail_bound,
                        "lopsidizer": w.lopsidizer,
                        "decay": decay,
                        "annihilation_residual": residual,
                        "radius": radius,
                        "window": shown,
                    }),
                    t,
                ),
            )
        }
        HomoclinicCmd::Cover { f, u, eps, radius } => {
            if *radius < 0 {
                return Err(Error::InvalidInput("radius must be nonnegative".into()));
            }
            let f = parse_element(f)?;
            let u = parse_element(u)?;
            let w = fundamental_homoclinic(&f, *eps)?;
            let r = *radius;
            let mut points = Vec::new();
            for k in -r..=r {
                for l in -r..=r {
                    for m in -r..=r {
                        points.push(Monomial::new(k, l, m));
                    }
                }
            }
            let sample = symbolic_cover_sample(&w, &u, &points)?;
            let mut t = Table::new(&["k", "l", "m", "value"]);
            let mut max_dist: f64 = 0.0;
            for (m, v) in &sample {
                max_dist = max_dist.max(dist_to_integer(*v));
                t.push([
                    m.k.to_string(),
                    m.l.to_string(),
                    m.m.to_string(),
                    v.to_string(),
                ]);
            }
            let error = w.tail_bound * u.l1_norm_f64();
            named(
                "homoclinic cover",
                with_table(
                    json!({
                        "f": element_json(&f),
                        "u": element_json(&u),
                        "radius": r,
                        "points": sample.len(),
                        "pointwise_error_bound": error,
                        "max_dist_to_integer": max_dist,
                        "values": sample.iter().map(|(m, v)| json!([m.k, m.l, m.m, v])).collect::<Vec<_>>(),
                    }),
                    t,
                ),
            )
        }
    }
}

fn randprod(a: &RandprodArgs) -> Result<Outcome> {
    let r = random_product_experiment(a.n, a.trials, a.seed)?;
    let mut t = Table::new(&["trial", "a", "b", "value"]);
    for (i, tr) in r.per_trial.iter().enumerate() {
        t.push([
            i.to_string(),
            tr.a.to_string(),
            tr.b.to_string(),
            tr.value.to_string(),
        ]);
    }
    with_table(serde_json::to_value(&r)?, t)
}
