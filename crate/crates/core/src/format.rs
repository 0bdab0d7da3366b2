//! Line-based text formats for systems and MRGSs.
//!
//! ```text
//! vas                         vass
//! dim 2                       dim 3
//! action a 1 1                states p q
//! action b -1 -2              trans t1 p p -1 1 0
//! ```
//!
//! ```text
//! mrgs
//! dim 2
//! action a 1 1
//! action b -1 -2
//! outer m= T T m'= T T        (optional)
//! graph 0
//! node n0 T T
//! edge n0 a n0
//! input m= T T x=n0
//! output x'=n0 m'= T T
//! join a                      (between graphs)
//! graph 1
//! ...
//! ```
//!
//! `#` starts a comment. Configuration entries are integers or `T`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::diophantine::IntVector;
use crate::mrgs::{Edge, MarkedGraph, Mrgs, MrgsError, ReachGraph};
use crate::vas::{ExtConfig, ExtNat, Transition, VasError, VasSystem, VassSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Vas(#[from] VasError),
    #[error(transparent)]
    Mrgs(#[from] MrgsError),
}

fn syntax<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Syntax {
        line,
        message: message.into(),
    })
}

/// Non-empty, comment-stripped lines with 1-based numbers.
fn lines(src: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    src.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn int(line: usize, w: &str) -> Result<BigInt, FormatError> {
    w.parse().or_else(|_| syntax(line, format!("expected an integer, found `{w}`")))
}

fn ints(line: usize, ws: &[&str]) -> Result<IntVector, FormatError> {
    ws.iter().map(|w| int(line, w)).collect()
}

fn ext(line: usize, w: &str) -> Result<ExtNat, FormatError> {
    if w == "T" {
        return Ok(ExtNat::Top);
    }
    let v = int(line, w)?;
    if v < BigInt::from(0) {
        return syntax(line, "negative configuration entry");
    }
    Ok(ExtNat::Fin(v))
}

fn exts(line: usize, ws: &[&str]) -> Result<ExtConfig, FormatError> {
    Ok(ExtConfig(ws.iter().map(|w| ext(line, w)).collect::<Result<_, _>>()?))
}

fn header<'a>(
    it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    kind: &str,
) -> Result<usize, FormatError> {
    match it.next() {
        Some((_, w)) if w == [kind] => {}
        Some((l, _)) => return syntax(l, format!("expected header `{kind}`")),
        None => return syntax(0, "empty input"),
    }
    match it.next() {
        Some((l, w)) if w.len() == 2 && w[0] == "dim" => w[1]
            .parse()
            .or_else(|_| syntax(l, "dimension must be a natural number")),
        Some((l, _)) => syntax(l, "expected `dim <n>`"),
        None => syntax(0, "missing `dim` line"),
    }
}

fn action_line(l: usize, w: &[&str], dim: usize) -> Result<(String, IntVector), FormatError> {
    if w.len() != dim + 2 {
        return syntax(l, format!("`action` needs a name and {dim} entries"));
    }
    Ok((w[1].to_string(), ints(l, &w[2..])?))
}

pub fn parse_vas(src: &str) -> Result<VasSystem, FormatError> {
    let mut it = lines(src);
    let dim = header(&mut it, "vas")?;
    let mut actions = Vec::new();
    for (l, w) in it {
        if w[0] != "action" {
            return syntax(l, format!("unexpected `{}`", w[0]));
        }
        actions.push(action_line(l, &w, dim)?);
    }
    Ok(VasSystem::new(dim, actions)?)
}

pub fn format_vas(v: &VasSystem) -> String {
    let mut out = format!("vas\ndim {}\n", v.dim());
    for a in 0..v.num_actions() {
        writeln!(out, "action {} {}", v.action_name(a), join(v.displacement(a))).unwrap();
    }
    out
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Transitions sharing a name must share their displacement; each distinct
/// name becomes one action.
pub fn parse_vass(src: &str) -> Result<VassSystem, FormatError> {
    let mut it = lines(src);
    let dim = header(&mut it, "vass")?;
    let mut states: Option<Vec<String>> = None;
    let mut actions: Vec<(String, IntVector)> = Vec::new();
    let mut trans = Vec::new();
    for (l, w) in it {
        match w[0] {
            "states" if states.is_none() => states = Some(w[1..].iter().map(|s| s.to_string()).collect()),
            "states" => return syntax(l, "`states` given twice"),
            "trans" => {
                let Some(st) = &states else {
                    return syntax(l, "`states` must come before transitions");
                };
                if w.len() != dim + 4 {
                    return syntax(l, format!("`trans` needs name, from, to and {dim} entries"));
                }
                let find = |s: &str| {
                    st.iter()
                        .position(|x| x == s)
                        .map_or_else(|| syntax(l, format!("unknown state `{s}`")), Ok)
                };
                let (from, to) = (find(w[2])?, find(w[3])?);
                let delta = ints(l, &w[4..])?;
                let action = match actions.iter().position(|(n, _)| n == w[1]) {
                    Some(a) if actions[a].1 == delta => a,
                    Some(_) => return syntax(l, format!("transition `{}` redeclared with another displacement", w[1])),
                    None => {
                        actions.push((w[1].to_string(), delta));
                        actions.len() - 1
                    }
                };
                trans.push(Transition { from, action, to });
            }
            other => return syntax(l, format!("unexpected `{other}`")),
        }
    }
    let Some(states) = states else {
        return syntax(0, "missing `states` line");
    };
    Ok(VassSystem::new(states, trans, VasSystem::new(dim, actions)?)?)
}

pub fn format_vass(s: &VassSystem) -> String {
    let mut out = format!("vass\ndim {}\nstates {}\n", s.dim(), s.states().join(" "));
    for t in s.transitions() {
        writeln!(
            out,
            "trans {} {} {} {}",
            s.vas().action_name(t.action),
            s.states()[t.from],
            s.states()[t.to],
            join(s.vas().displacement(t.action))
        )
        .unwrap();
    }
    out
}

/// Reads either format, seeing a plain VAS as a one-state VASS.
pub fn parse_system(src: &str) -> Result<VassSystem, FormatError> {
    let first = lines(src).next().map(|(_, w)| w[0].to_string());
    match first.as_deref() {
        Some("vass") => parse_vass(src),
        _ => parse_vas(src).map(VassSystem::single_state),
    }
}

/// Points like `1,0,2`, optionally prefixed by a state as in `p:1,0,2`.
pub fn parse_point(s: &str) -> Result<(Option<String>, IntVector), FormatError> {
    let (state, rest) = match s.split_once(':') {
        Some((q, r)) => (Some(q.trim().to_string()), r),
        None => (None, s),
    };
    let rest = rest.trim().trim_start_matches('(').trim_end_matches(')');
    if rest.is_empty() {
        return Ok((state, Vec::new()));
    }
    let v = rest
        .split(',')
        .map(|w| int(0, w.trim()))
        .collect::<Result<IntVector, _>>()?;
    if v.iter().any(|x| *x < BigInt::from(0)) {
        return Err(VasError::NegativeComponent.into());
    }
    Ok((state, v))
}

/// Like [`parse_point`] but entries may be `T`.
pub fn parse_ext_point(s: &str) -> Result<(Option<String>, ExtConfig), FormatError> {
    let (state, rest) = match s.split_once(':') {
        Some((q, r)) => (Some(q.trim().to_string()), r),
        None => (None, s),
    };
    let rest = rest.trim().trim_start_matches('(').trim_end_matches(')');
    if rest.is_empty() {
        return Ok((state, ExtConfig(vec![])));
    }
    let words: Vec<&str> = rest.split(',').map(str::trim).collect();
    Ok((state, exts(0, &words)?))
}

struct GraphBuilder {
    line: usize,
    node_ids: Vec<String>,
    nodes: Vec<ExtConfig>,
    edges: Vec<Edge>,
    input: Option<(ExtConfig, usize)>,
    output: Option<(usize, ExtConfig)>,
}

impl GraphBuilder {
    fn finish(self, vas: &VasSystem) -> Result<MarkedGraph, FormatError> {
        let (Some((m, x)), Some((xp, mp))) = (self.input, self.output) else {
            return syntax(self.line, "graph needs `input` and `output` lines");
        };
        let g = ReachGraph::new(vas.clone(), self.nodes, self.edges)?;
        Ok(MarkedGraph::new(m, x, g, xp, mp)?)
    }

    fn node(&self, l: usize, id: &str) -> Result<usize, FormatError> {
        self.node_ids
            .iter()
            .position(|n| n == id)
            .map_or_else(|| syntax(l, format!("unknown node `{id}`")), Ok)
    }
}

/// Groups `m= 1 T x=n0` style words by key: each key word starts a group,
/// and text glued to the key counts as the group's first word.
fn keyed<'a>(l: usize, words: &[&'a str], keys: [&str; 2]) -> Result<[Vec<&'a str>; 2], FormatError> {
    let mut groups: [Option<Vec<&'a str>>; 2] = [None, None];
    let mut current = None;
    for w in words {
        if let Some(k) = keys.iter().position(|k| w.starts_with(k)) {
            if groups[k].is_some() {
                return syntax(l, format!("`{}` given twice", keys[k]));
            }
            let rest = &w[keys[k].len()..];
            groups[k] = Some(if rest.is_empty() { vec![] } else { vec![rest] });
            current = Some(k);
        } else if let Some(k) = current {
            groups[k].as_mut().expect("open group").push(w);
        } else {
            return syntax(l, format!("unexpected `{w}`"));
        }
    }
    let [a, b] = groups;
    match (a, b) {
        (Some(a), Some(b)) => Ok([a, b]),
        (None, _) => syntax(l, format!("missing `{}`", keys[0])),
        (_, None) => syntax(l, format!("missing `{}`", keys[1])),
    }
}

fn single<'a>(l: usize, words: &[&'a str]) -> Result<&'a str, FormatError> {
    match words {
        [w] => Ok(w),
        _ => syntax(l, "expected exactly one node id"),
    }
}

pub fn parse_mrgs(src: &str) -> Result<Mrgs, FormatError> {
    let mut it = lines(src).peekable();
    let dim = header(&mut it, "mrgs")?;
    let mut actions = Vec::new();
    while let Some((l, w)) = it.peek() {
        if w[0] != "action" {
            break;
        }
        actions.push(action_line(*l, w, dim)?);
        it.next();
    }
    let vas = VasSystem::new(dim, actions)?;
    let mut outer = None;
    let mut blocks: Vec<MarkedGraph> = Vec::new();
    let mut joins = Vec::new();
    let mut cur: Option<GraphBuilder> = None;
    for (l, w) in it {
        let check_dim = |c: &ExtConfig| {
            if c.dim() == dim {
                Ok(())
            } else {
                syntax(l, format!("expected {dim} entries"))
            }
        };
        match w[0] {
            "outer" => {
                let [a, b] = keyed(l, &w[1..], ["m=", "m'="])?;
                let (a, b) = (exts(l, &a)?, exts(l, &b)?);
                check_dim(&a)?;
                check_dim(&b)?;
                outer = Some((a, b));
            }
            "graph" => {
                if cur.is_some() || joins.len() != blocks.len() {
                    return syntax(l, "consecutive graphs need a `join` line between them");
                }
                cur = Some(GraphBuilder {
                    line: l,
                    node_ids: Vec::new(),
                    nodes: Vec::new(),
                    edges: Vec::new(),
                    input: None,
                    output: None,
                });
            }
            "join" => {
                let Some(g) = cur.take() else {
                    return syntax(l, "`join` must follow a graph");
                };
                blocks.push(g.finish(&vas)?);
                if w.len() != 2 {
                    return syntax(l, "`join` needs one action");
                }
                joins.push(vas.action_index(w[1])?);
            }
            _ => {
                let Some(g) = cur.as_mut() else {
                    return syntax(l, format!("`{}` outside a graph", w[0]));
                };
                match w[0] {
                    "node" => {
                        if w.len() != dim + 2 {
                            return syntax(l, format!("`node` needs an id and {dim} entries"));
                        }
                        g.node_ids.push(w[1].to_string());
                        g.nodes.push(exts(l, &w[2..])?);
                    }
                    "edge" => {
                        if w.len() != 4 {
                            return syntax(l, "`edge` needs from, action and to");
                        }
                        let from = g.node(l, w[1])?;
                        let action = vas.action_index(w[2])?;
                        let to = g.node(l, w[3])?;
                        g.edges.push(Edge { from, action, to });
                    }
                    "input" => {
                        let [m, x] = keyed(l, &w[1..], ["m=", "x="])?;
                        let m = exts(l, &m)?;
                        check_dim(&m)?;
                        g.input = Some((m, g.node(l, single(l, &x)?)?));
                    }
                    "output" => {
                        let [x, m] = keyed(l, &w[1..], ["x'=", "m'="])?;
                        let m = exts(l, &m)?;
                        check_dim(&m)?;
                        g.output = Some((g.node(l, single(l, &x)?)?, m));
                    }
                    other => return syntax(l, format!("unexpected `{other}`")),
                }
            }
        }
    }
    match cur {
        Some(g) => blocks.push(g.finish(&vas)?),
        None => return syntax(0, "an MRGS needs at least one graph, and no trailing `join`"),
    }
    let outer = outer.unwrap_or_else(|| {
        (
            blocks[0].input_constraint.clone(),
            blocks.last().expect("nonempty").output_constraint.clone(),
        )
    });
    Ok(Mrgs::new(blocks, joins, outer)?)
}

fn ext_words(c: &ExtConfig) -> String {
    join(&c.0)
}

pub fn format_mrgs(u: &Mrgs) -> String {
    let vas = u.vas();
    let mut out = format!("mrgs\ndim {}\n", vas.dim());
    for a in 0..vas.num_actions() {
        writeln!(out, "action {} {}", vas.action_name(a), join(vas.displacement(a))).unwrap();
    }
    let (m, mp) = u.outer();
    writeln!(out, "outer m= {} m'= {}", ext_words(m), ext_words(mp)).unwrap();
    for (j, b) in u.blocks().iter().enumerate() {
        if j > 0 {
            writeln!(out, "join {}", vas.action_name(u.joins()[j - 1])).unwrap();
        }
        writeln!(out, "graph {j}").unwrap();
        for (k, q) in b.graph.nodes().iter().enumerate() {
            writeln!(out, "node n{k} {}", ext_words(q)).unwrap();
        }
        for e in b.graph.edges() {
            writeln!(out, "edge n{} {} n{}", e.from, vas.action_name(e.action), e.to).unwrap();
        }
        writeln!(out, "input m= {} x=n{}", ext_words(&b.input_constraint), b.input_state).unwrap();
        writeln!(out, "output x'=n{} m'= {}", b.output_state, ext_words(&b.output_constraint)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diophantine::int_vec;
    use crate::mrgs::trivial_mrgs;

    const FIG1: &str = "vas\ndim 2\n# a comment\naction a 1 1\naction b -1 -2  # trailing\n";

    #[test]
    fn vas_round_trip() {
        let v = parse_vas(FIG1).unwrap();
        assert_eq!(v, VasSystem::from_i64(2, &[("a", &[1, 1]), ("b", &[-1, -2])]).unwrap());
        assert_eq!(parse_vas(&format_vas(&v)).unwrap(), v);
    }

    #[test]
    fn vass_round_trip() {
        let src = "vass\ndim 3\nstates p q\ntrans t1 p p -1 1 0\ntrans t2 p q 0 0 0\ntrans t3 q q 2 -1 0\ntrans t4 q p 0 0 1\n";
        let s = parse_vass(src).unwrap();
        assert_eq!(s.num_states(), 2);
        assert_eq!(s.transitions().len(), 4);
        assert_eq!(parse_vass(&format_vass(&s)).unwrap(), s);
        assert_eq!(parse_system(src).unwrap(), s);
        assert_eq!(parse_system(FIG1).unwrap().num_states(), 1);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_vas("vas\ndim 2\naction a 1\n"), Err(FormatError::Syntax { line: 3, .. })));
        assert!(matches!(parse_vas("vass\ndim 2\n"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(parse_vas("vas\ndim x\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_vas("vas\ndim 1\n"), Err(FormatError::Vas(VasError::EmptyAlphabet))));
        assert!(matches!(parse_vas(""), Err(FormatError::Syntax { .. })));
        assert!(matches!(
            parse_vass("vass\ndim 1\nstates p\ntrans t p r 1\n"),
            Err(FormatError::Syntax { line: 4, .. })
        ));
        assert!(matches!(
            parse_vass("vass\ndim 1\nstates p\ntrans t p p 1\ntrans t p p 2\n"),
            Err(FormatError::Syntax { line: 5, .. })
        ));
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0,2").unwrap(), (None, int_vec(&[0, 2])));
        assert_eq!(parse_point("p:(1, 0, 0)").unwrap(), (Some("p".into()), int_vec(&[1, 0, 0])));
        assert!(parse_point("1,-1").is_err());
        assert!(parse_point("1,x").is_err());
        assert_eq!(parse_ext_point("T,3").unwrap().1, ExtConfig(vec![ExtNat::Top, ExtNat::fin(3)]));
    }

    #[test]
    fn mrgs_round_trip() {
        let src = "mrgs\ndim 2\naction a 1 1\naction b -1 -2\ngraph 0\nnode n0 T T\nedge n0 a n0\nedge n0 b n0\ninput m= T T x=n0\noutput x'=n0 m'= T T\n";
        let u = parse_mrgs(src).unwrap();
        assert_eq!(u.blocks()[0].graph.edges().len(), 2);
        assert_eq!(parse_mrgs(&format_mrgs(&u)).unwrap(), u);
        let v = parse_vas(FIG1).unwrap();
        let t = trivial_mrgs(&v, &int_vec(&[0, 2]), &int_vec(&[1, 0])).unwrap();
        assert_eq!(parse_mrgs(&format_mrgs(&t)).unwrap(), t);
    }

    #[test]
    fn mrgs_two_graphs_and_errors() {
        let two = "mrgs\ndim 1\naction i 1\naction d -1\n\
                   graph 0\nnode x T\nedge x i x\ninput m=0 x=x\noutput x'=x m'= T\n\
                   join d\n\
                   graph 1\nnode y T\nedge y i y\ninput m= T x=y\noutput x'=y m'= T\n";
        let u = parse_mrgs(two).unwrap();
        assert_eq!(u.joins(), &[1]);
        assert_eq!(parse_mrgs(&format_mrgs(&u)).unwrap(), u);
        // the input constraint must be ⊴ the input node
        let bad = "mrgs\ndim 1\naction i 1\ngraph 0\nnode x 3\ninput m= 2 x=x\noutput x'=x m'= 3\n";
        assert!(matches!(parse_mrgs(bad), Err(FormatError::Mrgs(MrgsError::Constraint(_)))));
        let not_sc = "mrgs\ndim 1\naction i 1\ngraph 0\nnode x 0\nnode y 1\nedge x i y\ninput m= 0 x=x\noutput x'=y m'= 1\n";
        assert!(matches!(parse_mrgs(not_sc), Err(FormatError::Mrgs(MrgsError::NotStronglyConnected))));
        let no_join = "mrgs\ndim 1\naction i 1\ngraph 0\nnode x T\ninput m= T x=x\noutput x'=x m'= T\ngraph 1\nnode y T\ninput m= T x=y\noutput x'=y m'= T\n";
        assert!(matches!(parse_mrgs(no_join), Err(FormatError::Syntax { .. })));
    }
}
