//! Line-oriented instance files.
//!
//! ```text
//! # single edge a–b
//! [items]
//! a 1
//! b 1
//! [states]
//! 0 1
//! [prior]
//! independent
//! a 0:1/2 1:1/2
//! b 0:0.5 1:0.5
//! [utility]
//! graph-cut edges=a-b:1
//! [constraint]
//! cardinality 2
//! ```
//!
//! A joint prior is written `joint` followed by lines `prob id:state ...`
//! covering every item. Numbers are integers, decimals, or fractions `p/q`;
//! when every probability in a group is written that way, its sum is checked
//! in exact arithmetic. Utility kinds and their keys:
//!
//! * `stochastic-modular [active=S] [weights=a:1,b:2]` (no `weights` means
//!   all 1; unlisted items weigh 0; `active` defaults to the first state)
//! * `graph-cut edges=a-b:1,b-c` (omitted weight is 1)
//! * `blend lambda=L [active=S] [weights=...] edges=...`
//! * `stochastic-coverage [active=S] covers=a:x|y,b:y|z`
//! * `size-indicator size=N [value=V]`
//! * `zero`

use std::collections::BTreeMap;
use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::model::{
    Constraint, Instance, Item, ItemId, Prior, Realization, StateId, StateSpace, PROB_TOL,
};
use crate::utility::{Coverage, Cut, Modular, Objective};

const SECTIONS: [&str; 5] = ["items", "states", "prior", "utility", "constraint"];

/// A token with its 1-based position.
#[derive(Debug, Clone, Copy)]
struct Tok<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

impl<'a> Tok<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.col,
            message: message.into(),
        }
    }
}

fn tokenize(line_no: usize, line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok {
                    line: line_no,
                    col: line[..s].chars().count() + 1,
                    text: &line[s..i],
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok {
            line: line_no,
            col: line[..s].chars().count() + 1,
            text: &line[s..],
        });
    }
    out
}

/// A parsed number: its float value and, when written as a decimal or a
/// fraction, its exact value.
struct Number {
    value: f64,
    exact: Option<BigRational>,
}

fn parse_exact(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p).ok()?;
        let q = BigInt::from_str(q).ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str(&digits).ok()?;
    let den = BigInt::from(10).pow(frac.len() as u32);
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

fn parse_number(tok: &Tok<'_>, text: &str) -> Result<Number> {
    let exact = parse_exact(text);
    let value = if text.contains('/') {
        exact
            .as_ref()
            .and_then(ToPrimitive::to_f64)
            .ok_or_else(|| tok.err(format!("bad number `{text}`")))?
    } else {
        f64::from_str(text).map_err(|_| tok.err(format!("bad number `{text}`")))?
    };
    if !value.is_finite() {
        return Err(tok.err(format!("non-finite number `{text}`")));
    }
    Ok(Number { value, exact })
}

/// Checks that a group of probabilities sums to 1.
fn check_sum(tok: &Tok<'_>, nums: &[Number], what: &str) -> Result<()> {
    if nums.iter().any(|n| n.value < 0.0) {
        return Err(Error::Validation(format!("{what}: negative probability")));
    }
    let exact: Option<Vec<&BigRational>> = nums.iter().map(|n| n.exact.as_ref()).collect();
    let ok = match exact {
        Some(rs) => {
            let total: BigRational = rs.into_iter().cloned().sum();
            let diff = (total - BigRational::one())
                .to_f64()
                .unwrap_or(f64::INFINITY);
            diff.abs() <= PROB_TOL
        }
        None => (nums.iter().map(|n| n.value).sum::<f64>() - 1.0).abs() <= PROB_TOL,
    };
    if ok {
        Ok(())
    } else {
        let total: f64 = nums.iter().map(|n| n.value).sum();
        Err(Error::Validation(format!(
            "{what}: probabilities sum to {total}, not 1 (line {})",
            tok.line
        )))
    }
}

struct Sections<'a> {
    lines: BTreeMap<&'static str, (Tok<'a>, Vec<Vec<Tok<'a>>>)>,
}

impl<'a> Sections<'a> {
    fn split(text: &'a str) -> Result<Self> {
        let mut lines: BTreeMap<&'static str, (Tok<'a>, Vec<Vec<Tok<'a>>>)> = BTreeMap::new();
        let mut current: Option<&'static str> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks = tokenize(i + 1, line);
            let Some(first) = toks.first().copied() else {
                continue;
            };
            if let Some(name) = first.text.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| first.err("unterminated section header"))?;
                let sec = SECTIONS
                    .iter()
                    .find(|s| **s == name)
                    .ok_or_else(|| first.err(format!("unknown section `{name}`")))?;
                if toks.len() > 1 {
                    return Err(toks[1].err("unexpected text after section header"));
                }
                if lines.contains_key(sec) {
                    return Err(first.err(format!("duplicate section `{name}`")));
                }
                lines.insert(sec, (first, Vec::new()));
                current = Some(sec);
                continue;
            }
            let sec = current.ok_or_else(|| first.err("content before the first section"))?;
            lines.get_mut(sec).expect("section opened").1.push(toks);
        }
        Ok(Sections { lines })
    }

    fn take(&mut self, name: &'static str) -> Result<(Tok<'a>, Vec<Vec<Tok<'a>>>)> {
        self.lines.remove(name).ok_or_else(|| Error::Syntax {
            line: 0,
            column: 0,
            message: format!("missing section [{name}]"),
        })
    }
}

struct Resolver<'a> {
    ids: Vec<String>,
    states: &'a StateSpace,
}

impl Resolver<'_> {
    fn item(&self, tok: &Tok<'_>, id: &str) -> Result<ItemId> {
        self.ids
            .binary_search_by(|x| x.as_str().cmp(id))
            .map(ItemId)
            .map_err(|_| tok.err(format!("unknown item `{id}`")))
    }

    fn state(&self, tok: &Tok<'_>, s: &str) -> Result<StateId> {
        self.states
            .lookup(s)
            .ok_or_else(|| tok.err(format!("unknown state `{s}`")))
    }

    fn pair<'t>(&self, tok: &Tok<'_>, text: &'t str) -> Result<(&'t str, &'t str)> {
        text.split_once(':')
            .ok_or_else(|| tok.err(format!("expected `name:value`, got `{text}`")))
    }
}

/// Parses an instance file. `name` becomes the instance id.
pub fn parse_instance(text: &str, name: &str) -> Result<Instance> {
    let mut sections = Sections::split(text)?;

    // items
    let (_, rows) = sections.take("items")?;
    let mut items: Vec<Item> = Vec::new();
    for row in &rows {
        if row.len() != 2 {
            return Err(row[0].err("expected `id cost`"));
        }
        let cost = parse_number(&row[1], row[1].text)?.value;
        if cost < 0.0 {
            return Err(Error::Validation(format!(
                "item `{}` has negative cost",
                row[0].text
            )));
        }
        if items.iter().any(|it| it.id == row[0].text) {
            return Err(row[0].err(format!("duplicate item `{}`", row[0].text)));
        }
        items.push(Item::new(row[0].text, cost));
    }
    items.sort_by(|a, b| a.id.cmp(&b.id));

    // states
    let (head, rows) = sections.take("states")?;
    let tokens: Vec<&str> = rows.iter().flatten().map(|t| t.text).collect();
    let states = StateSpace::new(tokens).map_err(|e| head.err(e.to_string()))?;

    let res = Resolver {
        ids: items.iter().map(|it| it.id.clone()).collect(),
        states: &states,
    };
    let n = items.len();

    // prior
    let (head, rows) = sections.take("prior")?;
    let (mode, body) = rows
        .split_first()
        .ok_or_else(|| head.err("empty [prior] section"))?;
    let prior = match mode.first().map(|t| t.text) {
        Some("independent") => {
            let mut dists: Vec<Option<Vec<f64>>> = vec![None; n];
            for row in body {
                let e = res.item(&row[0], row[0].text)?;
                if dists[e.0].is_some() {
                    return Err(row[0].err(format!("duplicate prior row for `{}`", row[0].text)));
                }
                let mut d = vec![0.0; states.len()];
                let mut nums = Vec::new();
                for tok in &row[1..] {
                    let (s, p) = res.pair(tok, tok.text)?;
                    let s = res.state(tok, s)?;
                    let num = parse_number(tok, p)?;
                    d[s.0 as usize] += num.value;
                    nums.push(num);
                }
                check_sum(&row[0], &nums, &format!("item `{}`", row[0].text))?;
                dists[e.0] = Some(d);
            }
            let dists = dists
                .into_iter()
                .enumerate()
                .map(|(i, d)| {
                    d.ok_or_else(|| {
                        Error::Validation(format!("item `{}` has no prior row", res.ids[i]))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Prior::Independent(dists)
        }
        Some("joint") => {
            let mut atoms = Vec::new();
            let mut nums = Vec::new();
            for row in body {
                let num = parse_number(&row[0], row[0].text)?;
                let mut assign: Vec<Option<StateId>> = vec![None; n];
                for tok in &row[1..] {
                    let (id, s) = res.pair(tok, tok.text)?;
                    let e = res.item(tok, id)?;
                    if assign[e.0].is_some() {
                        return Err(tok.err(format!("item `{id}` assigned twice")));
                    }
                    assign[e.0] = Some(res.state(tok, s)?);
                }
                let states: Vec<StateId> = assign
                    .into_iter()
                    .enumerate()
                    .map(|(i, s)| {
                        s.ok_or_else(|| {
                            row[0].err(format!("joint atom misses item `{}`", res.ids[i]))
                        })
                    })
                    .collect::<Result<_>>()?;
                atoms.push((Realization(states), num.value));
                nums.push(num);
            }
            if let Some(first) = body.first() {
                check_sum(&first[0], &nums, "joint prior")?;
            }
            Prior::Joint(atoms)
        }
        _ => return Err(mode[0].err("prior must start with `independent` or `joint`")),
    };

    // utility
    let (head, rows) = sections.take("utility")?;
    let toks: Vec<Tok<'_>> = rows.into_iter().flatten().collect();
    let utility = parse_utility(&head, &toks, &res)?;

    // constraint
    let (head, rows) = sections.take("constraint")?;
    let toks: Vec<Tok<'_>> = rows.into_iter().flatten().collect();
    if toks.len() != 2 {
        return Err(head.err("expected `cardinality k` or `knapsack k`"));
    }
    let constraint = Constraint::from_str(toks[0].text).map_err(|e| toks[0].err(e.to_string()))?;
    let budget = parse_number(&toks[1], toks[1].text)?.value;
    if constraint == Constraint::Cardinality && (budget.fract() != 0.0 || budget < 1.0) {
        return Err(toks[1].err("cardinality budget must be a positive integer"));
    }

    Instance::new(name, items, states, prior, utility, budget, constraint)
}

fn list<'a>(t: &Tok<'a>) -> Vec<&'a str> {
    t.text.split(',').filter(|s| !s.is_empty()).collect()
}

fn parse_utility(head: &Tok<'_>, toks: &[Tok<'_>], res: &Resolver<'_>) -> Result<Objective> {
    let (kind, params) = toks
        .split_first()
        .ok_or_else(|| head.err("empty [utility] section"))?;
    let mut kv: BTreeMap<&str, Tok<'_>> = BTreeMap::new();
    for tok in params {
        let (k, v) = tok
            .text
            .split_once('=')
            .ok_or_else(|| tok.err(format!("expected `key=value`, got `{}`", tok.text)))?;
        if kv.insert(k, Tok { text: v, ..*tok }).is_some() {
            return Err(tok.err(format!("duplicate key `{k}`")));
        }
    }
    let allowed: &[&str] = match kind.text {
        "stochastic-modular" => &["active", "weights"],
        "graph-cut" => &["edges"],
        "blend" => &["lambda", "active", "weights", "edges"],
        "stochastic-coverage" => &["active", "covers"],
        "size-indicator" => &["size", "value"],
        "zero" => &[],
        other => return Err(Error::UnknownUtility(other.to_string())),
    };
    if let Some((k, tok)) = kv.iter().find(|(k, _)| !allowed.contains(k)) {
        return Err(tok.err(format!("unknown key `{k}` for `{}`", kind.text)));
    }
    let n = res.ids.len();
    let active = |kv: &BTreeMap<&str, Tok<'_>>| -> Result<StateId> {
        match kv.get("active") {
            Some(t) => res.state(t, t.text),
            None => Ok(StateId(0)),
        }
    };
    let modular = |kv: &BTreeMap<&str, Tok<'_>>| -> Result<Modular> {
        let weights = match kv.get("weights") {
            None => vec![1.0; n],
            Some(t) => {
                let mut w = vec![0.0; n];
                for entry in list(t) {
                    let (id, v) = res.pair(t, entry)?;
                    w[res.item(t, id)?.0] = parse_number(t, v)?.value;
                }
                w
            }
        };
        Ok(Modular {
            weights,
            active: active(kv)?,
        })
    };
    let cut = |kv: &BTreeMap<&str, Tok<'_>>| -> Result<Cut> {
        let t = kv.get("edges").ok_or_else(|| head.err("missing `edges`"))?;
        let mut edges = Vec::new();
        for entry in list(t) {
            let (ends, w) = match entry.split_once(':') {
                Some((ends, w)) => (ends, parse_number(t, w)?.value),
                None => (entry, 1.0),
            };
            let (u, v) = ends
                .split_once('-')
                .ok_or_else(|| t.err(format!("expected edge `u-v`, got `{ends}`")))?;
            edges.push((res.item(t, u)?, res.item(t, v)?, w));
        }
        Ok(Cut { edges })
    };
    Ok(match kind.text {
        "stochastic-modular" => Objective::StochasticModular(modular(&kv)?),
        "graph-cut" => Objective::GraphCut(cut(&kv)?),
        "blend" => {
            let t = kv
                .get("lambda")
                .ok_or_else(|| head.err("missing `lambda`"))?;
            Objective::Blend {
                lambda: parse_number(t, t.text)?.value,
                modular: modular(&kv)?,
                cut: cut(&kv)?,
            }
        }
        "stochastic-coverage" => {
            let t = kv
                .get("covers")
                .ok_or_else(|| head.err("missing `covers`"))?;
            let mut per_item: Vec<Vec<String>> = vec![Vec::new(); n];
            for entry in list(t) {
                let (id, elems) = res.pair(t, entry)?;
                let e = res.item(t, id)?;
                per_item[e.0].extend(elems.split('|').filter(|s| !s.is_empty()).map(String::from));
            }
            let mut universe: Vec<String> = per_item.iter().flatten().cloned().collect();
            universe.sort();
            universe.dedup();
            let covers = per_item
                .iter()
                .map(|elems| {
                    let mut idx: Vec<usize> = elems
                        .iter()
                        .map(|x| universe.binary_search(x).expect("collected"))
                        .collect();
                    idx.sort_unstable();
                    idx.dedup();
                    idx
                })
                .collect();
            Objective::StochasticCoverage(Coverage {
                universe,
                covers,
                active: active(&kv)?,
            })
        }
        "size-indicator" => {
            let t = kv.get("size").ok_or_else(|| head.err("missing `size`"))?;
            let size = t
                .text
                .parse::<usize>()
                .map_err(|_| t.err("size must be a nonnegative integer"))?;
            let value = match kv.get("value") {
                Some(v) => parse_number(v, v.text)?.value,
                None => 1.0,
            };
            Objective::SizeIndicator { size, value }
        }
        _ => Objective::Zero,
    })
}

/// Writes an instance in canonical form; `parse_instance` reads it back to
/// an equal instance.
pub fn serialize_instance(inst: &Instance) -> Result<String> {
    let mut out = String::new();
    let name = |e: ItemId| inst.item_name(e);
    let st = |s: StateId| inst.states().token(s);
    out.push_str("[items]\n");
    for it in inst.items() {
        let _ = writeln!(out, "{} {}", it.id, it.cost);
    }
    out.push_str("[states]\n");
    let _ = writeln!(out, "{}", inst.states().tokens().join(" "));
    out.push_str("[prior]\n");
    match inst.prior() {
        Prior::Independent(dists) => {
            out.push_str("independent\n");
            for (i, row) in dists.iter().enumerate() {
                out.push_str(name(ItemId(i)));
                for (s, p) in row.iter().enumerate() {
                    if *p > 0.0 {
                        let _ = write!(out, " {}:{}", st(StateId(s as u16)), p);
                    }
                }
                out.push('\n');
            }
        }
        Prior::Joint(atoms) => {
            out.push_str("joint\n");
            for (r, p) in atoms {
                let _ = write!(out, "{p}");
                for (i, s) in r.states().iter().enumerate() {
                    let _ = write!(out, " {}:{}", name(ItemId(i)), st(*s));
                }
                out.push('\n');
            }
        }
    }
    out.push_str("[utility]\n");
    let weights = |m: &Modular| {
        m.weights
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}:{}", name(ItemId(i)), w))
            .collect::<Vec<_>>()
            .join(",")
    };
    let edges = |c: &Cut| {
        c.edges
            .iter()
            .map(|(u, v, w)| format!("{}-{}:{}", name(*u), name(*v), w))
            .collect::<Vec<_>>()
            .join(",")
    };
    match inst.utility() {
        Objective::StochasticModular(m) => {
            let _ = writeln!(
                out,
                "stochastic-modular active={} weights={}",
                st(m.active),
                weights(m)
            );
        }
        Objective::GraphCut(c) => {
            let _ = writeln!(out, "graph-cut edges={}", edges(c));
        }
        Objective::Blend {
            lambda,
            modular,
            cut,
        } => {
            let _ = writeln!(
                out,
                "blend lambda={} active={} weights={} edges={}",
                lambda,
                st(modular.active),
                weights(modular),
                edges(cut)
            );
        }
        Objective::StochasticCoverage(c) => {
            let covers: Vec<String> = c
                .covers
                .iter()
                .enumerate()
                .filter(|(_, elems)| !elems.is_empty())
                .map(|(i, elems)| {
                    let names: Vec<&str> = elems.iter().map(|&u| c.universe[u].as_str()).collect();
                    format!("{}:{}", name(ItemId(i)), names.join("|"))
                })
                .collect();
            let _ = writeln!(
                out,
                "stochastic-coverage active={} covers={}",
                st(c.active),
                covers.join(",")
            );
        }
        Objective::SizeIndicator { size, value } => {
            let _ = writeln!(out, "size-indicator size={size} value={value}");
        }
        Objective::Zero => out.push_str("zero\n"),
        Objective::Custom(c) => {
            return Err(Error::InvalidArgument(format!(
                "custom utility `{}` has no file representation",
                c.name()
            )))
        }
    }
    out.push_str("[constraint]\n");
    let _ = writeln!(out, "{} {}", inst.constraint(), inst.budget());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const MINIMAL: &str = "[items]\na 1\n[states]\n1 0\n[prior]\nindependent\na 1:1/2 0:1/2\n\
                           [utility]\nstochastic-modular\n[constraint]\ncardinality 1\n";

    #[test]
    fn minimal_file() {
        let inst = parse_instance(MINIMAL, "min").unwrap();
        assert_eq!(inst.len(), 1);
        assert_eq!(inst.budget(), 1.0);
        assert_eq!(
            inst.utility(),
            &Objective::StochasticModular(Modular {
                weights: vec![1.0],
                active: StateId(0),
            })
        );
    }

    #[test]
    fn bad_probability_sum_names_the_item() {
        let text = MINIMAL.replace("a 1:1/2 0:1/2", "a 1:0.5 0:0.4");
        let err = parse_instance(&text, "bad").unwrap_err();
        assert!(
            matches!(&err, Error::Validation(m) if m.contains("`a`")),
            "{err}"
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let text = MINIMAL.replace("a 1:1/2 0:1/2", "a 1:1/2 x:1/2");
        match parse_instance(&text, "bad").unwrap_err() {
            Error::Syntax { line, column, .. } => assert_eq!((line, column), (7, 9)),
            other => panic!("{other}"),
        }
        let text = MINIMAL.replace("stochastic-modular", "mystery");
        assert_eq!(
            parse_instance(&text, "bad").unwrap_err(),
            Error::UnknownUtility("mystery".into())
        );
    }

    #[test]
    fn rejects_negative_cost_and_fractional_cardinality() {
        let text = MINIMAL.replace("a 1\n", "a -1\n");
        assert!(matches!(
            parse_instance(&text, "x"),
            Err(Error::Validation(_))
        ));
        let text = MINIMAL.replace("cardinality 1", "cardinality 1.5");
        assert!(matches!(
            parse_instance(&text, "x"),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn exact_sums_accept_tenths() {
        let text = "[items]\na 1\n[states]\nx y z\n[prior]\nindependent\na x:0.1 y:0.2 z:0.7\n\
                    [utility]\nzero\n[constraint]\nknapsack 1\n";
        assert!(parse_instance(text, "t").is_ok());
        assert!(
            parse_exact("0.1").unwrap() + parse_exact("2/10").unwrap()
                == parse_exact("3/10").unwrap()
        );
    }

    #[test]
    fn joint_prior_and_items_are_sorted() {
        let text = "[items]\nb 2\na 1\n[states]\n0 1\n[prior]\njoint\n1/2 a:0 b:0\n1/2 b:1 a:1\n\
                    [utility]\ngraph-cut edges=a-b:2\n[constraint]\nknapsack 3\n";
        let inst = parse_instance(text, "j").unwrap();
        assert_eq!(inst.item_name(ItemId(0)), "a");
        assert_eq!(inst.cost(ItemId(1)), 2.0);
        let back = parse_instance(&serialize_instance(&inst).unwrap(), "j").unwrap();
        assert_eq!(back, inst);
    }

    fn arb_instance() -> impl Strategy<Value = String> {
        (
            1usize..5,
            prop::collection::vec(0.05f64..0.95, 5),
            prop::collection::vec(0.0f64..4.0, 5),
            0usize..4,
            0.0f64..1.0,
        )
            .prop_map(|(n, probs, weights, kind, lambda)| {
                let ids: Vec<String> = (0..n).map(|i| format!("i{i}")).collect();
                let mut s = String::from("[items]\n");
                for id in &ids {
                    s += &format!("{id} 1\n");
                }
                s += "[states]\noff on\n[prior]\nindependent\n";
                for (i, id) in ids.iter().enumerate() {
                    s += &format!("{id} on:{} off:{}\n", probs[i], 1.0 - probs[i]);
                }
                let w: Vec<String> = ids
                    .iter()
                    .enumerate()
                    .map(|(i, id)| format!("{id}:{}", weights[i]))
                    .collect();
                let e: Vec<String> = ids
                    .windows(2)
                    .map(|p| format!("{}-{}:{}", p[0], p[1], weights[0]))
                    .collect();
                s += "[utility]\n";
                s += &match (kind, e.is_empty()) {
                    (0, _) => format!("stochastic-modular active=on weights={}\n", w.join(",")),
                    (1, false) => format!("graph-cut edges={}\n", e.join(",")),
                    (2, false) => format!(
                        "blend lambda={lambda} active=on weights={} edges={}\n",
                        w.join(","),
                        e.join(",")
                    ),
                    _ => format!("stochastic-coverage active=on covers={}:u|v\n", ids[0]),
                };
                s += &format!("[constraint]\ncardinality {n}\n");
                s
            })
    }

    proptest! {
        #[test]
        fn serialize_round_trips(text in arb_instance()) {
            let inst = parse_instance(&text, "p").unwrap();
            let again = parse_instance(&serialize_instance(&inst).unwrap(), "p").unwrap();
            prop_assert_eq!(again, inst);
        }
    }
}
