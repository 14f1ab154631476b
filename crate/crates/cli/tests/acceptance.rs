//! Acceptance criteria 1–12, one PASS/FAIL line each.
//!
//! Oracles below use their own plain `u64` matrix arithmetic mod `p`, so they
//! share no code with the library routes they check.

use std::collections::{HashMap, HashSet, VecDeque};
use std::process::Command;
use std::time::{Duration, Instant};

use growthlab::approxgrp::{gowers_check, gowers_min_size, growth_iterate, GrowthVerdict};
use growthlab::cayley::{counting_bound, diameter, random_generator_stats, scaling_fit_points};
use growthlab::matgroup::{
    centralizer_set, closure, enumerate_group, finite_index_generation_check, random_symmetric_set, Ambient,
    ENUMERATION_CAP,
};
use growthlab::rng::stream;
use growthlab::sumprod::{
    dickson_gen_test, dickson_word_search, generation_corpus, primitive_element, sum_prod_sizes, GenVerdict,
    ScalarSet,
};
use growthlab::varieties::{involved_tori, lp_exponent, VarietySpec};
use growthlab::{FieldCtx, GroupCtx, Square};

type M2 = [u64; 4];

fn mul2(a: &M2, b: &M2, p: u64) -> M2 {
    [
        (a[0] * b[0] + a[1] * b[2]) % p,
        (a[0] * b[1] + a[1] * b[3]) % p,
        (a[2] * b[0] + a[3] * b[2]) % p,
        (a[2] * b[1] + a[3] * b[3]) % p,
    ]
}

/// All of `SL_2(F_p)` by scanning `p^4` matrices.
fn sl2_brute(p: u64) -> Vec<M2> {
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if (a * d + p * p - b * c) % p == 1 {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out
}

fn det3(m: &[u64; 9], p: u64) -> u64 {
    let t = |a: u64, b: u64, c: u64, d: u64| (a * b % p + p * p - c * d % p) % p;
    (m[0] * t(m[4], m[8], m[5], m[7]) + p * p * p - m[1] * t(m[3], m[8], m[5], m[6]) + m[2] * t(m[3], m[7], m[4], m[6]))
        % p
}

fn sl3_brute_count(p: u64) -> u64 {
    let total = p.pow(9);
    (0..total)
        .filter(|&idx| {
            let mut m = [0u64; 9];
            let mut x = idx;
            for e in m.iter_mut() {
                *e = x % p;
                x /= p;
            }
            det3(&m, p) == 1
        })
        .count() as u64
}

fn formula(n: u32, q: u64) -> u64 {
    let mut o = q.pow(n * (n - 1) / 2);
    for i in 2..=n {
        o *= q.pow(i) - 1;
    }
    o
}

fn disc_is_square(p: u64, tr: u64) -> bool {
    let d = (tr * tr + 4 * p - 4) % p;
    (1..p).any(|x| x * x % p == d)
}

fn regular(p: u64, m: &M2) -> bool {
    let tr = (m[0] + m[3]) % p;
    !(tr * tr + 4 * p - 4).is_multiple_of(p)
}

// --- criteria ---

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass_if(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn order_exactness() -> Outcome {
    let cases = [(2, 2), (2, 3), (2, 5), (2, 7), (3, 2), (3, 3)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (n, q) in cases {
        let ctx = GroupCtx::sl(n, q, 1).unwrap();
        let enumerated = enumerate_group(&ctx).unwrap().len() as u64;
        let brute = if n == 2 { sl2_brute(q).len() as u64 } else { sl3_brute_count(q) };
        let f = formula(n as u32, q);
        ok &= enumerated == f && brute == f && ctx.order() == f as u128;
        detail.push(format!("SL_{n}(F_{q})={enumerated}"));
    }
    pass_if(ok, detail.join(" "))
}

fn larsen_pink_torus() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [31u64, 61, 101] {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let a = enumerate_group(&ctx).unwrap();
        let torus = VarietySpec::split_torus(&ctx).unwrap();
        let r = lp_exponent(&ctx, &a, &torus, 1).unwrap();
        let diagonal = sl2_brute_diagonal(p);
        ok &= r.intersection_size as u64 == p - 1 && diagonal == p - 1;
        detail.push(format!("|A∩T|({p})={}", r.intersection_size));
        if p == 101 {
            let e = r.observed_exponent.unwrap();
            ok &= (e - 1.0 / 3.0).abs() <= 0.02;
            detail.push(format!("torus_exp={e:.5}"));
            let singular = VarietySpec::singular_set(&ctx).unwrap();
            let s = lp_exponent(&ctx, &a, &singular, 1).unwrap();
            // trace ±2 fibres, counted directly: p^2 points each
            let oracle = 2 * p * p;
            ok &= s.intersection_size as u64 == oracle;
            let se = s.observed_exponent.unwrap();
            ok &= (se - 2.0 / 3.0).abs() <= 0.05;
            detail.push(format!("singular={} singular_exp={se:.5} (target 0.66667±0.05)", s.intersection_size));
        }
    }
    pass_if(ok, detail.join(" "))
}

fn sl2_brute_diagonal(p: u64) -> u64 {
    (1..p).filter(|&a| (1..p).any(|d| a * d % p == 1)).count() as u64
}

/// Regular elements grouped by commutation: two regular semisimple elements
/// share a torus iff they commute.
fn commutation_grouping(p: u64) -> usize {
    let all = sl2_brute(p);
    let regs: Vec<M2> = all.iter().filter(|m| regular(p, m)).copied().collect();
    let mut reps: Vec<M2> = Vec::new();
    for g in &regs {
        if !reps.iter().any(|r| mul2(r, g, p) == mul2(g, r, p)) {
            reps.push(*g);
        }
    }
    reps.len()
}

fn involved_tori_census() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [3u64, 5, 7] {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let a = enumerate_group(&ctx).unwrap();
        let c = involved_tori(&ctx, &a).unwrap();
        let oracle = commutation_grouping(p);
        ok &= c.involved_count == oracle;
        ok &= c.partition_holds();
        ok &= c.involved_count as u64 == p * p;
        detail.push(format!("p={p}: involved={} oracle={oracle} expected={}", c.involved_count, p * p));
    }
    pass_if(ok, detail.join("; "))
}

fn centralizer_dichotomy() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for q in [5u64, 7, 11] {
        let ctx = GroupCtx::sl(2, q, 1).unwrap();
        let f = *ctx.field();
        let all = enumerate_group(&ctx).unwrap();
        let brute = sl2_brute(q);
        let mut checked = 0;
        for g in all.elems(&ctx) {
            if !ctx.is_regular_ss(&g).unwrap() {
                continue;
            }
            checked += 1;
            let size = centralizer_set(&ctx, &g, Ambient::Whole).unwrap().len() as u64;
            let tr = ctx.trace(&g);
            let split = f.is_square(f.sub(f.mul(tr, tr), 4 % f.p())).unwrap() == Square::Yes;
            let m: M2 = [g.get(0, 0) as u64, g.get(0, 1) as u64, g.get(1, 0) as u64, g.get(1, 1) as u64];
            let oracle = brute.iter().filter(|h| mul2(h, &m, q) == mul2(&m, h, q)).count() as u64;
            let oracle_split = disc_is_square(q, (m[0] + m[3]) % q);
            ok &= size == oracle && split == oracle_split;
            ok &= size == if split { q - 1 } else { q + 1 };
        }
        detail.push(format!("q={q}: {checked} regular"));
    }
    pass_if(ok, detail.join(" "))
}

fn gowers_generation() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let d_min = (p - 1) / 2;
        assert_eq!(ctx.d_min(), Some(d_min));
        let size = gowers_min_size(&ctx, d_min);
        let threshold = formula(2, p) as f64 / (d_min as f64).cbrt();
        let mut hits = 0;
        for i in 0..20 {
            let a = random_symmetric_set(&ctx, size, &mut stream(5, "gowers", i)).unwrap();
            let o = gowers_check(&ctx, &a, d_min).unwrap();
            if a.len() as f64 > threshold && o.a3_is_group && a.is_inverse_closed(&ctx) {
                hits += 1;
            }
        }
        ok &= hits == 20;
        detail.push(format!("p={p}: {hits}/20 at |A|>={size}"));
    }
    pass_if(ok, detail.join(" "))
}

/// Plain BFS diameter over `S ∪ S^{-1}`.
fn bfs_diameter(p: u64, gens: &[M2]) -> usize {
    let id: M2 = [1, 0, 0, 1];
    let mut dist = HashMap::from([(id, 0usize)]);
    let mut queue = VecDeque::from([id]);
    let mut far = 0;
    while let Some(g) = queue.pop_front() {
        let d = dist[&g];
        far = far.max(d);
        for s in gens {
            let h = mul2(&g, s, p);
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(h) {
                e.insert(d + 1);
                queue.push_back(h);
            }
        }
    }
    far
}

/// `C2` of the elementary family over `p = 11..61`, pinned from the first
/// oracle-checked run.
const PINNED_C2: f64 = 1.42783;

fn diameter_sanity() -> Outcome {
    let primes = [11u64, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61];
    let mut ok = true;
    let mut points = Vec::new();
    for p in primes {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let s = ctx.elementary_set();
        let d = diameter(&ctx, &s).unwrap();
        let oracle = bfs_diameter(p, &[[1, 1, 0, 1], [1, p - 1, 0, 1], [1, 0, 1, 1], [1, 0, p - 1, 1]]);
        // S̄ = four transvections and the identity
        let bound = ((formula(2, p) as f64).ln() / 5f64.ln()).ceil() as usize;
        ok &= d == oracle && d >= bound && counting_bound(&ctx, &s) == bound;
        points.push((ctx.order() as f64, d as f64));
    }
    let fit = scaling_fit_points(&points).unwrap();
    ok &= fit.c2 <= 2.0 && (fit.c2 - PINNED_C2).abs() < 1e-4;
    pass_if(ok, format!("C2={:.5} C1={:.5} r2={:.4}", fit.c2, fit.c1, fit.r2))
}

fn girth_trend() -> Outcome {
    let mut medians = Vec::new();
    for p in [31u64, 61, 127] {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let st = random_generator_stats(&ctx, 50, 0).unwrap();
        let found = st.trials.iter().filter(|t| t.girth.value().is_some()).count();
        medians.push((p, st.girth_median, found));
    }
    let ok = medians.iter().all(|m| m.1.is_some() && m.2 == 50)
        && medians.windows(2).all(|w| w[0].1.unwrap() <= w[1].1.unwrap());
    let detail = medians.iter().map(|(p, m, _)| format!("p={p}: median {m:?}")).collect::<Vec<_>>().join(" ");
    pass_if(ok, detail)
}

fn growth_dichotomy() -> Outcome {
    let mut ok = true;
    let mut generating = 0;
    for p in [11u64, 13, 17, 19, 23, 29, 31] {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        let g = ctx.order() as f64;
        for (name, s) in generation_corpus(&ctx, 0).unwrap() {
            let s = s.symmetrize(&ctx);
            let h = closure(&ctx, &s.to_elems(&ctx), ENUMERATION_CAP as usize).unwrap();
            if h.len() as u128 != ctx.order() || s.len() as f64 > g.sqrt() {
                continue;
            }
            generating += 1;
            let r = growth_iterate(&ctx, &s, 0.1).unwrap();
            let strict = r
                .sizes
                .windows(2)
                .all(|w| w[0] as f64 >= g.powf(0.9) || w[1] > w[0]);
            let good = strict && r.verdict == GrowthVerdict::ReachedNearFull && !r.partial;
            if !good {
                eprintln!("  growth failure at p={p} {name}: {:?}", r.sizes);
            }
            ok &= good;
        }
    }
    pass_if(ok, format!("{generating} generating corpus sets"))
}

fn hash_sizes(f: &FieldCtx, v: &[u32]) -> (usize, usize) {
    let mut s = HashSet::new();
    let mut m = HashSet::new();
    for &x in v {
        for &y in v {
            s.insert(f.add(x, y));
            m.insert(f.mul(x, y));
        }
    }
    (s.len(), m.len())
}

fn sum_product() -> Outcome {
    let f = FieldCtx::prime(1009).unwrap();
    let ap = ScalarSet::arithmetic_progression(f, 1, 1, 50).unwrap();
    let gp = ScalarSet::geometric_progression(f, 1, primitive_element(&f), 50).unwrap();
    let a = sum_prod_sizes(&ap).unwrap();
    let g = sum_prod_sizes(&gp).unwrap();
    // plain modular arithmetic, independent of the field context
    let ap_raw: Vec<u64> = (1..=50).collect();
    let mut gp_raw = vec![1u64];
    let r = primitive_element(&f) as u64;
    for _ in 1..50 {
        gp_raw.push(gp_raw.last().unwrap() * r % 1009);
    }
    let raw = |v: &[u64]| {
        let s: HashSet<u64> = v.iter().flat_map(|x| v.iter().map(move |y| (x + y) % 1009)).collect();
        let m: HashSet<u64> = v.iter().flat_map(|x| v.iter().map(move |y| x * y % 1009)).collect();
        (s.len(), m.len())
    };
    let (ap_s, ap_m) = raw(&ap_raw);
    let (gp_s, gp_m) = raw(&gp_raw);
    let bound = 50f64.powf(1.5);
    let mut ok = a.sum_size == 99 && (a.prod_size as f64) >= bound && (a.sum_size, a.prod_size) == (ap_s, ap_m);
    ok &= g.prod_size == 99 && (g.sum_size as f64) >= bound && (g.sum_size, g.prod_size) == (gp_s, gp_m);
    let f49 = FieldCtx::new(7, 2).unwrap();
    let sub = ScalarSet::prime_subfield(f49);
    let s = sum_prod_sizes(&sub).unwrap();
    ok &= s.size == 7 && s.sum_size == 7 && s.prod_size == 7 && hash_sizes(&f49, sub.values()) == (7, 7);
    pass_if(
        ok,
        format!(
            "AP |A+A|={} |AA|={}; GP |AA|={} |A+A|={}; F_7⊂F_49 {}/{}",
            a.sum_size, a.prod_size, g.prod_size, g.sum_size, s.sum_size, s.prod_size
        ),
    )
}

fn dickson_agreement() -> Outcome {
    let primes = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101];
    let mut total = 0;
    let mut agree = 0;
    for p in primes {
        let ctx = GroupCtx::sl(2, p, 1).unwrap();
        for (name, s) in generation_corpus(&ctx, 0).unwrap() {
            let h = closure(&ctx, &s.symmetrize(&ctx).to_elems(&ctx), ENUMERATION_CAP as usize).unwrap();
            let exact = h.len() as u128 == ctx.order();
            let d = dickson_gen_test(&ctx, &s).unwrap().verdict == GenVerdict::GeneratesSl2;
            let w = dickson_word_search(&ctx, &s).unwrap().verdict == GenVerdict::GeneratesSl2;
            total += 1;
            if d == exact && w == exact {
                agree += 1;
            } else {
                eprintln!("  disagreement at p={p} {name}: exact={exact} dickson={d} search={w}");
            }
        }
    }
    pass_if(agree == total, format!("{agree}/{total} instances agree"))
}

fn finite_index_lemma() -> Outcome {
    let f3 = GroupCtx::sl(2, 3, 1).unwrap();
    let q8 = finite_index_generation_check(&f3, &f3.elementary_set(), |g| f3.is_identity(&f3.pow(g, 4)), 3).unwrap();
    let f5 = GroupCtx::sl(2, 5, 1).unwrap();
    let centre = finite_index_generation_check(&f5, &f5.elementary_set(), |g| f5.is_central(g), 60).unwrap();
    // Q8 is the set of elements of order dividing 4 in SL_2(F_3)
    let q8_size = sl2_brute(3)
        .iter()
        .filter(|m| {
            let m2 = mul2(m, m, 3);
            mul2(&m2, &m2, 3) == [1, 0, 0, 1]
        })
        .count();
    pass_if(q8 && centre && q8_size == 8, format!("(SL_2(F_3), Q8, 3)={q8} (SL_2(F_5), ±I, 60)={centre}"))
}

fn cli_output(args: &[&str], threads: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_growthlab"))
        .args(args)
        .arg("--deterministic")
        .env("GROWTHLAB_THREADS", threads)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let runs: &[&[&str]] = &[
        &["order", "--groups", "2:7,3:2", "--enumerate"],
        &["growth", "--p", "11", "--gens", "random:3"],
        &["growth", "--primes", "11,13", "--corpus", "--seed", "4"],
        &["approx-cert", "--p", "7", "--set", "random:20", "--seed", "9"],
        &["control", "--p", "7", "--set", "ball:1", "--by", "ball:2"],
        &["diameter", "--primes", "5,7", "--profile"],
        &["girth", "--p", "31", "--gens", "random:8"],
        &["random-stats", "--p", "13", "--trials", "8", "--seed", "2"],
        &["lp", "--p", "11", "--variety", "singular", "--set", "random:40", "--seed", "1", "--m", "2"],
        &["tori", "--p", "7", "--set", "random:30", "--seed", "6"],
        &["tori", "--mode", "centralizers", "--primes", "5,7"],
        &["invariance", "--p", "11"],
        &["conj-product", "--p", "13", "--seed", "3"],
        &["dim-fit", "--primes", "5,7,11,13", "--variety", "singular"],
        &["sumprod", "--p", "101", "--family", "ap,gp,random,ap-gp", "--sizes", "10,20", "--seed", "7"],
        &["sumprod", "--p", "31", "--family", "random", "--sizes", "8", "--psi", "(x1-x2)/(x3-x2)"],
        &["lift", "--p", "11", "--family", "ap,gp", "--sizes", "3,4"],
        &["gen-test", "--p", "11", "--gens", "random:5"],
        &["gen-test", "--mode", "corpus", "--primes", "7,11", "--seed", "3"],
        &["gen-test", "--mode", "finite-index", "--p", "5", "--subgroup", "center", "--d", "60"],
        &["gowers", "--p", "7", "--trials", "4", "--seed", "8"],
        &["fit", "--primes", "5,7,11,13"],
    ];
    let mut bad = Vec::new();
    for args in runs {
        let a = cli_output(args, "1");
        let b = cli_output(args, "1");
        let c = cli_output(args, "4");
        if a != b || a != c || a.is_empty() {
            bad.push(args[0]);
        }
    }
    pass_if(bad.is_empty(), format!("{} runs, mismatches: {bad:?}", runs.len()))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 12] = [
        ("order exactness", order_exactness, Duration::from_secs(5)),
        ("Larsen-Pink torus exponent", larsen_pink_torus, Duration::from_secs(30)),
        ("involved-tori census", involved_tori_census, Duration::from_secs(60)),
        ("centralizer dichotomy", centralizer_dichotomy, Duration::from_secs(10)),
        ("Gowers generation", gowers_generation, Duration::from_secs(60)),
        ("diameter sanity", diameter_sanity, Duration::from_secs(300)),
        ("girth trend", girth_trend, Duration::from_secs(300)),
        ("growth dichotomy", growth_dichotomy, Duration::from_secs(120)),
        ("sum-product", sum_product, Duration::from_secs(10)),
        ("Dickson agreement", dickson_agreement, Duration::from_secs(120)),
        ("finite-index lemma", finite_index_lemma, Duration::from_secs(10)),
        ("determinism", determinism, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let ok = o.ok && took <= *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
