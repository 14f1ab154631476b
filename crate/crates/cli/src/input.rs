//! Parsing of group targets, generator specs and set specs.

use growthlab::matgroup::{enumerate_group, random_element, random_symmetric_set, BallWalker, ENUMERATION_CAP};
use growthlab::rng::stream;
use growthlab::varieties::VarietySpec;
use growthlab::{Elem, ElemSet, FieldCtx, Fq, GroupCtx};

use crate::args::Target;
use crate::CliError;

/// `(n, p, k)` triples named by a [`Target`], in the order given.
pub fn targets(t: &Target) -> Result<Vec<(usize, u64, u32)>, CliError> {
    if !t.groups.is_empty() {
        return t.groups.iter().map(|g| parse_group(g)).collect();
    }
    let primes: Vec<u64> = if t.primes.is_empty() { t.p.into_iter().collect() } else { t.primes.clone() };
    if primes.is_empty() {
        return Err(CliError::Usage("one of --p, --primes or --groups is required".into()));
    }
    Ok(primes.into_iter().map(|p| (t.n, p, t.k)).collect())
}

fn parse_group(s: &str) -> Result<(usize, u64, u32), CliError> {
    let bad = || CliError::Usage(format!("group {s:?} is not of the form n:p[:k]"));
    let parts: Vec<&str> = s.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(bad());
    }
    let n = parts[0].trim().parse().map_err(|_| bad())?;
    let p = parts[1].trim().parse().map_err(|_| bad())?;
    let k = match parts.get(2) {
        Some(k) => k.trim().parse().map_err(|_| bad())?,
        None => 1,
    };
    Ok((n, p, k))
}

pub fn group(n: usize, p: u64, k: u32) -> Result<GroupCtx, CliError> {
    Ok(GroupCtx::sl(n, p, k)?)
}

pub fn field(p: u64, k: u32) -> Result<FieldCtx, CliError> {
    Ok(FieldCtx::new(p, k)?)
}

/// Field entry: an integer, or `a+bt` in `F_{p^2}` with `t` the generator.
fn parse_entry(f: &FieldCtx, s: &str) -> Result<Fq, CliError> {
    let s = s.trim();
    let bad = || CliError::Usage(format!("cannot parse matrix entry {s:?}"));
    let int = |x: &str| -> Result<Fq, CliError> { Ok(f.from_int(x.trim().parse::<i64>().map_err(|_| bad())?)) };
    if let Some(body) = s.strip_suffix('t') {
        if f.degree() != 2 {
            return Err(CliError::Usage(format!("entry {s:?} needs a quadratic field")));
        }
        let (a, b) = match body.rfind(['+', '-']).filter(|&i| i > 0) {
            Some(i) => (int(&body[..i])?, body[i..].trim_start_matches('+')),
            None => (0, body),
        };
        let b = match b.trim() {
            "" | "+" => 1,
            "-" => f.neg(1),
            b => int(b)?,
        };
        return Ok(f.from_parts(a, b));
    }
    int(s)
}

pub fn parse_elem(ctx: &GroupCtx, s: &str) -> Result<Elem, CliError> {
    let entries: Vec<Fq> = s.split(',').map(|e| parse_entry(ctx.field(), e)).collect::<Result<_, _>>()?;
    if entries.len() != ctx.n() * ctx.n() {
        return Err(CliError::Usage(format!("matrix {s:?} needs {} entries", ctx.n() * ctx.n())));
    }
    Ok(ctx.elem(&entries)?)
}

/// The generating set `S` named by `--gens`, as given (not symmetrized).
pub fn gens(ctx: &GroupCtx, spec: &str) -> Result<ElemSet, CliError> {
    if spec == "elementary" {
        return Ok(ctx.elementary_set());
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let bad = || CliError::Usage(format!("bad generator spec {spec:?}; expected random:SEED[:COUNT]"));
        let mut it = rest.split(':');
        let seed: u64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let count: usize = it.next().map(|c| c.parse().map_err(|_| bad())).transpose()?.unwrap_or(2);
        if it.next().is_some() || count == 0 {
            return Err(bad());
        }
        let mut rng = stream(seed, "gens", 0);
        return Ok(ElemSet::from_elems(ctx, (0..count).map(|_| random_element(ctx, &mut rng))));
    }
    let elems: Vec<Elem> = spec.split(';').map(|m| parse_elem(ctx, m)).collect::<Result<_, _>>()?;
    Ok(ElemSet::from_elems(ctx, elems))
}

/// The set named by `--set`.
pub fn set(ctx: &GroupCtx, spec: &str, s: &ElemSet, seed: u64) -> Result<ElemSet, CliError> {
    let num = |x: &str| -> Result<usize, CliError> {
        x.parse().map_err(|_| CliError::Usage(format!("bad set spec {spec:?}")))
    };
    match spec {
        "full-group" => Ok(enumerate_group(ctx)?),
        "gens" => Ok(s.clone()),
        "split-torus" => Ok(VarietySpec::split_torus(ctx)?.points().expect("the split torus has points").clone()),
        _ => {
            if let Some(r) = spec.strip_prefix("ball:") {
                let mut walker = BallWalker::from_identity(ctx, &s.symmetrize(ctx).to_elems(ctx), ENUMERATION_CAP as usize)?;
                walker.advance_to(num(r)?)?;
                Ok(walker.into_set())
            } else if let Some(size) = spec.strip_prefix("random:") {
                let a = random_symmetric_set(ctx, num(size)?, &mut stream(seed, "set", 0))?;
                Ok(a.union(&ElemSet::singleton(ctx, &ctx.identity())))
            } else {
                Err(CliError::Usage(format!(
                    "unknown set spec {spec:?}; expected full-group, gens, ball:R, random:SIZE or split-torus"
                )))
            }
        }
    }
}

/// Row-major entries as `a,b,c,d`, the format `--gens` accepts.
pub fn fmt_elem(g: &Elem) -> String {
    g.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn target(p: Option<u64>, primes: &[u64], groups: &[&str]) -> Target {
        Target { n: 2, p, k: 1, primes: primes.to_vec(), groups: groups.iter().map(|s| s.to_string()).collect() }
    }

    #[test]
    fn target_resolution() {
        assert_eq!(targets(&target(Some(7), &[], &[])).unwrap(), vec![(2, 7, 1)]);
        assert_eq!(targets(&target(Some(7), &[5, 11], &[])).unwrap(), vec![(2, 5, 1), (2, 11, 1)]);
        assert_eq!(targets(&target(None, &[], &["3:2", "2:7:2"])).unwrap(), vec![(3, 2, 1), (2, 7, 2)]);
        assert!(matches!(targets(&target(None, &[], &[])), Err(CliError::Usage(_))));
        assert!(matches!(targets(&target(None, &[], &["2"])), Err(CliError::Usage(_))));
    }

    #[test]
    fn explicit_generators() {
        let ctx = GroupCtx::sl(2, 7, 1).unwrap();
        let s = gens(&ctx, "1,1,0,1;1,0,1,1").unwrap();
        assert_eq!(s.len(), 2);
        assert!(matches!(gens(&ctx, "1,1,0"), Err(CliError::Usage(_))));
        assert!(matches!(gens(&ctx, "1,1,1,1"), Err(CliError::Lib(_))));
        assert!(matches!(gens(&ctx, "1,x,0,1"), Err(CliError::Usage(_))));
        let t = s.elems(&ctx).next().unwrap();
        assert_eq!(parse_elem(&ctx, &fmt_elem(&t)).unwrap(), t);
    }

    #[test]
    fn extension_entries() {
        let ctx = GroupCtx::sl(2, 3, 2).unwrap();
        let f = *ctx.field();
        assert_eq!(parse_entry(&f, "2+t").unwrap(), f.from_parts(2, 1));
        assert_eq!(parse_entry(&f, "t").unwrap(), f.from_parts(0, 1));
        assert_eq!(parse_entry(&f, "1-t").unwrap(), f.from_parts(1, 2));
        assert_eq!(parse_entry(&f, "2").unwrap(), 2);
        assert!(parse_entry(&FieldCtx::prime(3).unwrap(), "t").is_err());
    }

    #[test]
    fn set_specs() {
        let ctx = GroupCtx::sl(2, 5, 1).unwrap();
        let s = ctx.elementary_set();
        assert_eq!(set(&ctx, "full-group", &s, 0).unwrap().len(), 120);
        assert_eq!(set(&ctx, "ball:1", &s, 0).unwrap(), s);
        assert_eq!(set(&ctx, "split-torus", &s, 0).unwrap().len(), 4);
        let r = set(&ctx, "random:10", &s, 3).unwrap();
        assert!(r.len() >= 10 && r.is_symmetric_with_identity(&ctx));
        assert!(set(&ctx, "ball:x", &s, 0).is_err());
        assert!(set(&ctx, "sphere", &s, 0).is_err());
    }
}
