//! One function per subcommand, each producing a [`Table`].

use growthlab::approxgrp::{
    approx_certify, control_certify, gowers_check, gowers_min_size, growth_iterate, product_set, verify_cover,
    ControlOutcome, Side,
};
use growthlab::cayley::{cayley_report, counting_bound, girth, girth_budget, random_generator_stats, scaling_fit, Girth};
use growthlab::matgroup::{
    centralizer_set, closure, enumerate_group, finite_index_generation_check, random_symmetric_set, Ambient,
    ENUMERATION_CAP,
};
use growthlab::rng::stream;
use growthlab::sumprod::{
    dichotomy_scan, dickson_gen_test, dickson_word_search, family_set, generation_corpus, lift_report,
    rational_image_report, ExprTree, Family, GenVerdict,
};
use growthlab::varieties::{
    conjugate_product_growth, conjugation_invariance, empirical_dimension, involved_tori, lp_exponent, torus_count,
    VarietySpec,
};
use growthlab::{Elem, ElemSet, Error, GroupCtx, Square};
use rayon::prelude::*;

use crate::args::{Command, GenMode, SubgroupArg, Target, ToriMode, VarietyArg};
use crate::input::{self, fmt_elem, targets};
use crate::output::{opt, opt_ratio, ratio, Table};
use crate::CliError;

type Res<T> = Result<T, CliError>;

pub fn run(cmd: &Command) -> Res<Table> {
    match cmd {
        Command::Order { target, enumerate } => order(target, *enumerate),
        Command::Growth { target, gens, set, seed, delta, corpus } => {
            growth(target, &gens.gens, &set.set, seed.seed, *delta, *corpus)
        }
        Command::ApproxCert { target, gens, set, seed } => approx_cert(target, &gens.gens, &set.set, seed.seed),
        Command::Control { target, gens, set, by, seed, k_max } => {
            control(target, &gens.gens, &set.set, by, seed.seed, *k_max)
        }
        Command::Diameter { target, gens, profile } => diameter(target, &gens.gens, *profile),
        Command::Girth { target, gens } => girth_cmd(target, &gens.gens),
        Command::RandomStats { target, seed, trials, summary } => random_stats(target, seed.seed, *trials, *summary),
        Command::Lp { target, gens, set, seed, variety, at, m } => {
            lp(target, &gens.gens, set, seed.seed, *variety, at.as_deref(), *m)
        }
        Command::Tori { target, gens, set, seed, mode } => match mode {
            ToriMode::Census => tori(target, &gens.gens, set, seed.seed),
            ToriMode::Centralizers => centralizers(target),
        },
        Command::Invariance { target, gens, set, seed } => invariance(target, &gens.gens, set, seed.seed),
        Command::ConjProduct { target, seed } => conj_product(target, seed.seed),
        Command::DimFit { target, variety } => dim_fit(target, *variety),
        Command::Sumprod { target, seed, family, sizes, k_thresh, psi } => {
            sumprod(target, seed.seed, family, sizes, *k_thresh, psi.as_deref())
        }
        Command::Lift { target, seed, family, sizes } => lift(target, seed.seed, family, sizes),
        Command::GenTest { target, gens, seed, mode, subgroup, d } => match mode {
            GenMode::Dickson => gen_dickson(target, &gens.gens),
            GenMode::Corpus => gen_corpus(target, seed.seed),
            GenMode::FiniteIndex => finite_index(target, &gens.gens, *subgroup, *d),
        },
        Command::Gowers { target, seed, trials } => gowers(target, seed.seed, *trials),
        Command::Fit { target, gens } => fit(target, &gens.gens),
    }
}

/// Contexts for every target, in order.
fn groups(t: &Target) -> Res<Vec<GroupCtx>> {
    targets(t)?.into_iter().map(|(n, p, k)| input::group(n, p, k)).collect()
}

fn q(ctx: &GroupCtx) -> String {
    ctx.q().to_string()
}

fn order(t: &Target, enumerate: bool) -> Res<Table> {
    let mut table = Table::new(if enumerate { &["n", "q", "order", "enumerated", "matches"] } else { &["n", "q", "order"] });
    for ctx in groups(t)? {
        let mut row = vec![ctx.n().to_string(), q(&ctx), ctx.order().to_string()];
        if enumerate {
            let count = enumerate_group(&ctx)?.len();
            row.push(count.to_string());
            row.push((count as u128 == ctx.order()).to_string());
        }
        table.push(row);
    }
    Ok(table)
}

/// With `corpus`, each generation-corpus set `S` is run as `S ∪ S^{-1} ∪ {id}`
/// and `generates` records whether its closure is the whole group.
fn growth(t: &Target, gens: &str, set: &str, seed: u64, delta: f64, corpus: bool) -> Res<Table> {
    let mut table = Table::new(&[
        "n",
        "q",
        "instance",
        "generates",
        "step",
        "radius",
        "size",
        "tripling_ratio",
        "threshold",
        "verdict",
        "partial",
    ]);
    for ctx in groups(t)? {
        let instances: Vec<(String, ElemSet, Option<bool>)> = if corpus {
            generation_corpus(&ctx, seed)?
                .into_iter()
                .map(|(name, s)| {
                    let s = s.symmetrize(&ctx);
                    let h = closure(&ctx, &s.to_elems(&ctx), ENUMERATION_CAP as usize)?;
                    Ok((name, s, Some(h.len() as u128 == ctx.order())))
                })
                .collect::<Res<_>>()?
        } else {
            let s = input::gens(&ctx, gens)?;
            vec![(set.to_string(), input::set(&ctx, set, &s, seed)?, None)]
        };
        for (name, a, generates) in instances {
            let r = growth_iterate(&ctx, &a, delta)?;
            for (i, (&radius, &size)) in r.radii.iter().zip(&r.sizes).enumerate() {
                table.push(vec![
                    ctx.n().to_string(),
                    q(&ctx),
                    name.clone(),
                    opt(generates),
                    i.to_string(),
                    radius.to_string(),
                    size.to_string(),
                    opt_ratio(r.tripling_ratios.get(i).copied()),
                    ratio(r.threshold),
                    route_name(r.verdict),
                    r.partial.to_string(),
                ]);
            }
        }
    }
    Ok(table)
}

fn approx_cert(t: &Target, gens: &str, set: &str, seed: u64) -> Res<Table> {
    let mut table = Table::new(&["n", "q", "set_size", "square_size", "k_certified", "method", "cover_verified"]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let a = input::set(&ctx, set, &s, seed)?;
        let cert = approx_certify(&ctx, &a)?;
        let aa = product_set(&ctx, &a, &a)?;
        let ok = verify_cover(&ctx, &aa, &cert.x, &a, Side::Left);
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            a.len().to_string(),
            aa.len().to_string(),
            cert.k_certified.to_string(),
            "greedy-cover".into(),
            ok.to_string(),
        ]);
    }
    Ok(table)
}

fn control(t: &Target, gens: &str, set: &str, by: &str, seed: u64, k_max: usize) -> Res<Table> {
    let mut table = Table::new(&["n", "q", "a_size", "b_size", "k_max", "certified", "k"]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let a = input::set(&ctx, set, &s, seed)?;
        let b = input::set(&ctx, by, &s, seed.wrapping_add(1))?;
        let (certified, k) = match control_certify(&ctx, &a, &b, k_max)? {
            ControlOutcome::Certified(c) => (true, c.k),
            ControlOutcome::Failed { best_k } => (false, best_k),
        };
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            a.len().to_string(),
            b.len().to_string(),
            k_max.to_string(),
            certified.to_string(),
            k.to_string(),
        ]);
    }
    Ok(table)
}

fn diameter(t: &Target, gens: &str, profile: bool) -> Res<Table> {
    let mut table = if profile {
        Table::new(&["n", "q", "radius", "ball_size"])
    } else {
        Table::new(&["n", "q", "order", "generators", "generator_count", "diameter", "counting_bound"])
    };
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let r = cayley_report(&ctx, &s, gens)?;
        if profile {
            for (radius, size) in r.ball_sizes.iter().enumerate() {
                table.push(vec![ctx.n().to_string(), q(&ctx), radius.to_string(), size.to_string()]);
            }
        } else {
            table.push(vec![
                ctx.n().to_string(),
                q(&ctx),
                ctx.order().to_string(),
                gens.to_string(),
                s.symmetrize(&ctx).len().to_string(),
                r.diameter.to_string(),
                counting_bound(&ctx, &s).to_string(),
            ]);
        }
    }
    Ok(table)
}

fn girth_cells(g: &Girth) -> [String; 2] {
    match g {
        Girth::Found(v) => [v.to_string(), String::new()],
        Girth::NotFound { explored_radius } => [String::new(), explored_radius.to_string()],
    }
}

fn girth_cmd(t: &Target, gens: &str) -> Res<Table> {
    let mut table = Table::new(&["n", "q", "a", "b", "budget", "girth", "explored_radius"]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let e = s.to_elems(&ctx);
        if e.len() != 2 {
            return Err(CliError::Usage(format!("girth needs exactly two generators, got {}", e.len())));
        }
        let budget = girth_budget(&ctx);
        let [g, r] = girth_cells(&girth(&ctx, &e[0], &e[1], budget));
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            fmt_elem(&e[0]),
            fmt_elem(&e[1]),
            budget.to_string(),
            g,
            r,
        ]);
    }
    Ok(table)
}

fn random_stats(t: &Target, seed: u64, trials: u64, summary: bool) -> Res<Table> {
    let mut table = if summary {
        Table::new(&[
            "n",
            "q",
            "trials",
            "generation_fraction",
            "diameter_median",
            "diameter_max",
            "girth_found",
            "girth_median",
        ])
    } else {
        Table::new(&["n", "q", "trial", "a", "b", "generates", "diameter", "girth", "explored_radius"])
    };
    for ctx in groups(t)? {
        let st = random_generator_stats(&ctx, trials, seed)?;
        if summary {
            let found = st.trials.iter().filter(|r| r.girth.value().is_some()).count();
            table.push(vec![
                ctx.n().to_string(),
                q(&ctx),
                trials.to_string(),
                opt_ratio(st.generation_fraction),
                opt_ratio(st.diameter_median),
                opt(st.diameter_max),
                found.to_string(),
                opt_ratio(st.girth_median),
            ]);
        } else {
            for r in &st.trials {
                let [g, e] = girth_cells(&r.girth);
                table.push(vec![
                    ctx.n().to_string(),
                    q(&ctx),
                    r.index.to_string(),
                    fmt_elem(&ctx.decode(r.a)?),
                    fmt_elem(&ctx.decode(r.b)?),
                    opt(r.generates),
                    opt(r.diameter),
                    g,
                    e,
                ]);
            }
        }
    }
    Ok(table)
}

/// The first non-central element of the diagonal torus.
fn default_regular(ctx: &GroupCtx) -> Res<Elem> {
    let torus = VarietySpec::split_torus(ctx)?;
    let pts = torus.points().expect("the split torus has points");
    let found = pts.elems(ctx).find(|g| ctx.is_regular_ss(g).unwrap_or(false));
    found.ok_or_else(|| Error::Precondition(format!("no regular diagonal element in {ctx}")).into())
}

fn variety(ctx: &GroupCtx, v: VarietyArg, at: Option<&str>) -> Res<VarietySpec> {
    let at = || -> Res<Elem> {
        match at {
            Some(s) => input::parse_elem(ctx, s),
            None => default_regular(ctx),
        }
    };
    Ok(match v {
        VarietyArg::SplitTorus => VarietySpec::split_torus(ctx)?,
        VarietyArg::Singular => VarietySpec::singular_set(ctx)?,
        VarietyArg::Centralizer => VarietySpec::centralizer(ctx, &at()?)?,
        VarietyArg::Class => VarietySpec::conjugacy_class(ctx, &at()?)?,
        VarietyArg::Group => VarietySpec::subgroup(ctx, enumerate_group(ctx)?, ctx.dim())?,
    })
}

fn variety_name(v: VarietyArg) -> String {
    serde_json::to_value(v).expect("enum serializes").as_str().unwrap_or_default().to_string()
}

fn lp(t: &Target, gens: &str, set: &str, seed: u64, v: VarietyArg, at: Option<&str>, m: usize) -> Res<Table> {
    let mut table = Table::new(&[
        "n",
        "q",
        "variety",
        "dim_v",
        "dim_g",
        "set_size",
        "m",
        "power_size",
        "intersection_size",
        "predicted_exponent",
        "observed_exponent",
    ]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let a = input::set(&ctx, set, &s, seed)?;
        let spec = variety(&ctx, v, at)?;
        let r = lp_exponent(&ctx, &a, &spec, m)?;
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            variety_name(v),
            spec.dim().to_string(),
            ctx.dim().to_string(),
            r.set_size.to_string(),
            m.to_string(),
            r.power_size.to_string(),
            r.intersection_size.to_string(),
            ratio(r.predicted_exponent),
            opt_ratio(r.observed_exponent),
        ]);
    }
    Ok(table)
}

fn tori(t: &Target, gens: &str, set: &str, seed: u64) -> Res<Table> {
    let mut table = Table::new(&[
        "n",
        "q",
        "set_size",
        "square_size",
        "involved_count",
        "regular",
        "central",
        "singular_noncentral",
        "partition_holds",
        "exponent_observed",
        "predicted",
        "points_min",
        "points_median",
        "points_max",
    ]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let a = input::set(&ctx, set, &s, seed)?;
        let c = involved_tori(&ctx, &a)?;
        let regular: usize = c.tori.values().map(|e| e.regular).sum();
        let spread = c.point_spread();
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            c.set_size.to_string(),
            c.square_size.to_string(),
            c.involved_count.to_string(),
            regular.to_string(),
            c.central.to_string(),
            c.singular_noncentral.to_string(),
            c.partition_holds().to_string(),
            opt_ratio(c.exponent_observed),
            ratio(c.predicted),
            opt(spread.map(|s| s.0)),
            opt_ratio(spread.map(|s| s.1)),
            opt(spread.map(|s| s.2)),
        ]);
    }
    Ok(table)
}

/// Every regular semisimple element of `SL_2(F_q)`: its centralizer has
/// `q - 1` points when the discriminant `tr^2 - 4` is a square and `q + 1`
/// otherwise.
fn centralizers(t: &Target) -> Res<Table> {
    let mut table = Table::new(&["n", "q", "regular_elements", "split", "nonsplit", "violations"]);
    for ctx in groups(t)? {
        if ctx.n() != 2 || ctx.field().degree() != 1 {
            return Err(Error::Precondition(format!("the centralizer dichotomy needs SL_2(F_p), got {ctx}")).into());
        }
        let f = *ctx.field();
        let qq = ctx.q() as usize;
        let all = enumerate_group(&ctx)?;
        let rows: Vec<(bool, bool)> = all
            .keys()
            .par_iter()
            .filter_map(|&k| {
                let g = ctx.decode(k).expect("enumerated key");
                if !ctx.is_regular_ss(&g).expect("q > n") {
                    return None;
                }
                let tr = ctx.trace(&g);
                let disc = f.sub(f.mul(tr, tr), 4 % f.p());
                let split = f.is_square(disc).expect("prime field") == Square::Yes;
                let size = centralizer_set(&ctx, &g, Ambient::Whole).expect("centralizer").len();
                let expected = if split { qq - 1 } else { qq + 1 };
                Some((split, size == expected))
            })
            .collect();
        let split = rows.iter().filter(|r| r.0).count();
        let violations = rows.iter().filter(|r| !r.1).count();
        table.push(vec![
            "2".into(),
            q(&ctx),
            rows.len().to_string(),
            split.to_string(),
            (rows.len() - split).to_string(),
            violations.to_string(),
        ]);
    }
    Ok(table)
}

fn invariance(t: &Target, gens: &str, set: &str, seed: u64) -> Res<Table> {
    let mut table = Table::new(&["n", "q", "set_size", "involved_count", "torus_count", "involved_fraction", "invariance"]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let a = input::set(&ctx, set, &s, seed)?;
        let c = involved_tori(&ctx, &a)?;
        let total = torus_count(&ctx)?;
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            a.len().to_string(),
            c.involved_count.to_string(),
            total.to_string(),
            ratio(c.involved_count as f64 / total as f64),
            ratio(conjugation_invariance(&ctx, &a, &c)),
        ]);
    }
    Ok(table)
}

fn conj_product(t: &Target, seed: u64) -> Res<Table> {
    let mut table = Table::new(&["n", "q", "torus_size", "generic_a", "generic_size", "generic_ratio", "normalizing_size"]);
    for ctx in groups(t)? {
        let torus = VarietySpec::split_torus(&ctx)?;
        let r = conjugate_product_growth(&ctx, &torus, &mut stream(seed, "conj-product", 0))?;
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            r.torus_size.to_string(),
            fmt_elem(&ctx.decode(r.generic_a)?),
            r.generic_size.to_string(),
            ratio(r.generic_size as f64 / r.torus_size as f64),
            r.normalizing_size.to_string(),
        ]);
    }
    Ok(table)
}

fn dim_fit(t: &Target, v: VarietyArg) -> Res<Table> {
    let mut table = Table::new(&["n", "k", "variety", "primes", "dim_v", "slope", "intercept", "r2"]);
    let tg = targets(t)?;
    let (n, k) = (tg[0].0, tg[0].2);
    if tg.iter().any(|&(n2, _, k2)| (n2, k2) != (n, k)) {
        return Err(CliError::Usage("dim-fit needs one (n, k) across all targets".into()));
    }
    let primes: Vec<u64> = tg.iter().map(|g| g.1).collect();
    let dim = std::cell::Cell::new(None);
    let fit = empirical_dimension(&primes, |p| {
        let ctx = GroupCtx::sl(n, p, k)?;
        if v == VarietyArg::Group {
            dim.set(Some(ctx.dim()));
            return Ok(ctx.order());
        }
        let spec = variety(&ctx, v, None).map_err(|e| match e {
            CliError::Lib(e) => e,
            other => Error::Precondition(other.to_string()),
        })?;
        dim.set(Some(spec.dim()));
        spec.point_count(&ctx)
    })
    .map_err(CliError::from)?;
    table.push(vec![
        n.to_string(),
        k.to_string(),
        variety_name(v),
        primes.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
        opt(dim.get()),
        ratio(fit.slope),
        ratio(fit.intercept),
        ratio(fit.r2),
    ]);
    Ok(table)
}

fn families(names: &[String]) -> Res<Vec<Family>> {
    names.iter().map(|s| s.parse::<Family>().map_err(CliError::from)).collect()
}

fn sumprod(t: &Target, seed: u64, family: &[String], sizes: &[usize], k_thresh: f64, psi: Option<&str>) -> Res<Table> {
    let fams = families(family)?;
    let psi = psi.map(|s| s.parse::<ExprTree>()).transpose()?;
    let mut table = if psi.is_some() {
        Table::new(&[
            "p",
            "k",
            "family",
            "size",
            "psi",
            "tuples",
            "image_size",
            "infinity_hits",
            "refined_size",
            "refined_image_size",
        ])
    } else {
        Table::new(&["p", "k", "family", "size", "sum_size", "prod_size", "k_obs", "flagged"])
    };
    for (_, p, k) in targets(t)? {
        let f = input::field(p, k)?;
        // the subfield family only exists in a proper extension
        let fams: Vec<Family> = fams.iter().copied().filter(|&fm| fm != Family::Subfield || k == 2).collect();
        match &psi {
            None => {
                for r in dichotomy_scan(f, &fams, sizes, k_thresh, seed)? {
                    table.push(vec![
                        p.to_string(),
                        k.to_string(),
                        r.family.to_string(),
                        r.size.to_string(),
                        r.sum_size.to_string(),
                        r.prod_size.to_string(),
                        ratio(r.k_obs),
                        r.flagged.to_string(),
                    ]);
                }
            }
            Some(psi) => {
                for &fm in &fams {
                    for &size in sizes {
                        let a = family_set(f, fm, size, seed)?;
                        let r = rational_image_report(&a, psi)?;
                        table.push(vec![
                            p.to_string(),
                            k.to_string(),
                            fm.to_string(),
                            a.len().to_string(),
                            psi.to_string(),
                            r.full.tuples.to_string(),
                            r.full.image_size.to_string(),
                            r.full.infinity_hits.to_string(),
                            r.refined_size.to_string(),
                            r.refined.image_size.to_string(),
                        ]);
                    }
                }
            }
        }
    }
    Ok(table)
}

fn lift(t: &Target, seed: u64, family: &[String], sizes: &[usize]) -> Res<Table> {
    let fams = families(family)?;
    let mut table = Table::new(&["p", "k", "family", "size", "lift_size", "triple_size", "tripling_ratio"]);
    for (_, p, k) in targets(t)? {
        let ctx = input::group(2, p, k)?;
        for &fm in &fams {
            for &size in sizes {
                let a = family_set(*ctx.field(), fm, size, seed)?;
                let r = lift_report(&ctx, &a)?;
                table.push(vec![
                    p.to_string(),
                    k.to_string(),
                    fm.to_string(),
                    r.set_size.to_string(),
                    r.lift_size.to_string(),
                    r.tripling.triple_size.to_string(),
                    ratio(r.tripling.ratio),
                ]);
            }
        }
    }
    Ok(table)
}

fn route_name<T: serde::Serialize>(r: T) -> String {
    serde_json::to_value(r).expect("enum serializes").as_str().unwrap_or_default().to_string()
}

fn gen_dickson(t: &Target, gens: &str) -> Res<Table> {
    let mut table = Table::new(&[
        "n",
        "q",
        "set_size",
        "verdict",
        "route",
        "closure_size",
        "sample_size",
        "quadruples_checked",
    ]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?;
        let r = dickson_gen_test(&ctx, &s)?;
        table.push(vec![
            ctx.n().to_string(),
            q(&ctx),
            s.len().to_string(),
            r.verdict.to_string(),
            route_name(r.route),
            opt(r.closure_size),
            r.sample_size.to_string(),
            r.quadruples_checked.to_string(),
        ]);
    }
    Ok(table)
}

/// The corpus through exact closure, [`dickson_gen_test`] and the forced word
/// search; `agree` compares both tests' generation claims with the closure.
fn gen_corpus(t: &Target, seed: u64) -> Res<Table> {
    let mut table = Table::new(&[
        "n",
        "q",
        "instance",
        "set_size",
        "closure_size",
        "generates",
        "dickson_verdict",
        "dickson_route",
        "search_verdict",
        "agree",
    ]);
    for ctx in groups(t)? {
        let corpus = generation_corpus(&ctx, seed)?;
        let rows: Vec<Vec<String>> = corpus
            .par_iter()
            .map(|(name, s)| -> Res<Vec<String>> {
                let h = closure(&ctx, &s.symmetrize(&ctx).to_elems(&ctx), ENUMERATION_CAP as usize)?;
                let generates = h.len() as u128 == ctx.order();
                let d = dickson_gen_test(&ctx, s)?;
                let w = dickson_word_search(&ctx, s)?;
                let agree = (d.verdict == GenVerdict::GeneratesSl2) == generates
                    && (w.verdict == GenVerdict::GeneratesSl2) == generates;
                Ok(vec![
                    ctx.n().to_string(),
                    q(&ctx),
                    name.clone(),
                    s.len().to_string(),
                    h.len().to_string(),
                    generates.to_string(),
                    d.verdict.to_string(),
                    route_name(d.route),
                    w.verdict.to_string(),
                    agree.to_string(),
                ])
            })
            .collect::<Res<_>>()?;
        for r in rows {
            table.push(r);
        }
    }
    Ok(table)
}

fn finite_index(t: &Target, gens: &str, sub: SubgroupArg, d: Option<usize>) -> Res<Table> {
    let d = d.ok_or_else(|| CliError::Usage("--d is required for --mode finite-index".into()))?;
    let mut table = Table::new(&["n", "q", "subgroup", "d", "holds"]);
    for ctx in groups(t)? {
        let s = input::gens(&ctx, gens)?.symmetrize(&ctx);
        let holds = match sub {
            SubgroupArg::Q8 => {
                finite_index_generation_check(&ctx, &s, |g| ctx.is_identity(&ctx.pow(g, 4)), d)?
            }
            SubgroupArg::Center => finite_index_generation_check(&ctx, &s, |g| ctx.is_central(g), d)?,
        };
        table.push(vec![ctx.n().to_string(), q(&ctx), route_name(sub), d.to_string(), holds.to_string()]);
    }
    Ok(table)
}

fn gowers(t: &Target, seed: u64, trials: u64) -> Res<Table> {
    let mut table = Table::new(&[
        "n",
        "q",
        "trial",
        "set_size",
        "threshold",
        "precondition_holds",
        "triple_size",
        "a3_is_group",
    ]);
    for ctx in groups(t)? {
        let d_min = ctx
            .d_min()
            .ok_or_else(|| Error::Precondition(format!("no closed-form d_min for {ctx}")))?;
        let size = gowers_min_size(&ctx, d_min);
        let rows: Vec<Vec<String>> = (0..trials)
            .into_par_iter()
            .map(|i| -> Res<Vec<String>> {
                let a = random_symmetric_set(&ctx, size, &mut stream(seed, "gowers", i))?;
                let o = gowers_check(&ctx, &a, d_min)?;
                Ok(vec![
                    ctx.n().to_string(),
                    q(&ctx),
                    i.to_string(),
                    o.set_size.to_string(),
                    ratio(o.threshold),
                    o.precondition_holds.to_string(),
                    o.triple_size.to_string(),
                    o.a3_is_group.to_string(),
                ])
            })
            .collect::<Res<_>>()?;
        for r in rows {
            table.push(r);
        }
    }
    Ok(table)
}

fn fit(t: &Target, gens: &str) -> Res<Table> {
    let mut table = Table::new(&["generators", "points", "c1", "c2", "r2"]);
    let reports = groups(t)?
        .iter()
        .map(|ctx| Ok(cayley_report(ctx, &input::gens(ctx, gens)?, gens)?))
        .collect::<Res<Vec<_>>>()?;
    let f = scaling_fit(&reports)?;
    table.push(vec![gens.to_string(), f.points.to_string(), ratio(f.c1), ratio(f.c2), ratio(f.r2)]);
    Ok(table)
}
