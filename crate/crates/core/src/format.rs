//! Line-oriented text format for automata.
//!
//! ```text
//! # comment
//! alphabet: a b u
//! uncontrollable: u
//! initial: x0
//! marked: x0 x2
//! trans:
//! x0 a x1
//! x1 u x2
//! ```
//!
//! States exist by appearing on the `initial:`, `marked:` or transition
//! lines. The writer emits the accessible part only, with states renamed
//! `s0, s1, ...` in breadth-first order; reserved tool-generated names keep
//! their spelling.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::alphabet::EventAlphabet;
use crate::automaton::{Automaton, AutomatonBuilder, DetAutomaton, StateId};
use crate::compose::DUMP_STATE;
use crate::error::{Error, Result};
use crate::synthesis::{DEAD_STATE, UNCTRL_STATE};

/// State names that only tool output may contain.
pub const RESERVED_NAMES: [&str; 3] = [DUMP_STATE, DEAD_STATE, UNCTRL_STATE];

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept reserved state names, as found in files this crate wrote.
    pub allow_reserved: bool,
}

fn valid_token(t: &str) -> bool {
    !t.is_empty()
        && t
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'(' | b')' | b'-'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct Sections<'a> {
    alphabet: Option<(usize, Vec<&'a str>)>,
    uncontrollable: Option<(usize, Vec<&'a str>)>,
    initial: Option<(usize, Vec<&'a str>)>,
    marked: Option<(usize, Vec<&'a str>)>,
    trans: Option<usize>,
    transitions: Vec<(usize, [&'a str; 3])>,
}

fn split_sections(text: &str) -> Result<Sections<'_>> {
    let mut s = Sections::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, rest)) = content.split_once(':') {
            let key = key.trim();
            let tokens: Vec<&str> = rest.split_whitespace().collect();
            if let Some(bad) = tokens.iter().find(|t| !valid_token(t)) {
                return Err(parse_err(line, format!("invalid token `{bad}`")));
            }
            let slot = match key {
                "alphabet" => &mut s.alphabet,
                "uncontrollable" => &mut s.uncontrollable,
                "initial" => &mut s.initial,
                "marked" => &mut s.marked,
                "trans" => {
                    if !tokens.is_empty() {
                        return Err(parse_err(line, "`trans:` takes no arguments"));
                    }
                    if s.trans.replace(line).is_some() {
                        return Err(parse_err(line, "duplicate `trans:` line"));
                    }
                    continue;
                }
                other => return Err(parse_err(line, format!("unknown keyword `{other}:`"))),
            };
            if slot.is_some() {
                return Err(parse_err(line, format!("duplicate `{key}:` line")));
            }
            *slot = Some((line, tokens));
            continue;
        }
        if s.trans.is_none() {
            return Err(parse_err(line, "transition before `trans:`"));
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [src, ev, dst] = tokens[..] else {
            return Err(parse_err(line, "expected `SRC EVENT DST`"));
        };
        if let Some(bad) = [src, ev, dst].into_iter().find(|t| !valid_token(t)) {
            return Err(parse_err(line, format!("invalid token `{bad}`")));
        }
        s.transitions.push((line, [src, ev, dst]));
    }
    Ok(s)
}

/// Parses an automaton, rejecting reserved state names.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    parse_automaton_with(text, ParseOptions::default())
}

pub fn parse_automaton_with(text: &str, opts: ParseOptions) -> Result<Automaton> {
    Ok(parse_inner(text, opts)?.0)
}

/// Parses a deterministic automaton. A second successor for one
/// (state, event) is reported at the line that introduces it.
pub fn parse_det_automaton(text: &str, opts: ParseOptions) -> Result<DetAutomaton> {
    let (a, lines) = parse_inner(text, opts)?;
    let mut seen = HashSet::new();
    for (line, x, e) in lines {
        if !seen.insert((x, e)) {
            return Err(parse_err(
                line,
                format!(
                    "nondeterministic choice at state `{}` on event `{}`",
                    a.name(x),
                    a.alphabet().name(e)
                ),
            ));
        }
    }
    DetAutomaton::new(a)
}

type TransitionLines = Vec<(usize, StateId, usize)>;

fn parse_inner(text: &str, opts: ParseOptions) -> Result<(Automaton, TransitionLines)> {
    let s = split_sections(text)?;
    let last = text.lines().count().max(1);
    let (aline, events) = s
        .alphabet
        .ok_or_else(|| parse_err(last, "missing `alphabet:` line"))?;
    let (uline, unc) = s.uncontrollable.unwrap_or((aline, Vec::new()));
    let mut seen = HashSet::new();
    if let Some(dup) = events.iter().find(|e| !seen.insert(**e)) {
        return Err(parse_err(aline, format!("duplicate event `{dup}`")));
    }
    if let Some(bad) = unc.iter().find(|u| !seen.contains(*u)) {
        return Err(parse_err(uline, format!("uncontrollable event `{bad}` not in alphabet")));
    }
    let alphabet = EventAlphabet::new(events.iter().copied(), unc.iter().copied())
        .map_err(|e| parse_err(aline, e.to_string()))?;

    let (iline, init) = s
        .initial
        .ok_or_else(|| parse_err(last, "missing `initial:` line"))?;
    let [init] = init[..] else {
        return Err(parse_err(iline, "`initial:` takes exactly one state"));
    };
    let check_name = |line: usize, name: &str| -> Result<()> {
        if !opts.allow_reserved && RESERVED_NAMES.contains(&name) {
            return Err(parse_err(line, format!("reserved state name `{name}`")));
        }
        Ok(())
    };
    check_name(iline, init)?;

    let mut b = AutomatonBuilder::new(alphabet.clone());
    b.initial(init);
    let mut lines = Vec::with_capacity(s.transitions.len());
    for (line, [src, ev, dst]) in s.transitions {
        check_name(line, src)?;
        check_name(line, dst)?;
        let e = alphabet
            .id(ev)
            .ok_or_else(|| parse_err(line, format!("unknown event `{ev}`")))?;
        if !b.transition(src, ev, dst)? {
            return Err(parse_err(line, format!("duplicate transition `{src} {ev} {dst}`")));
        }
        lines.push((line, b.state(src), e));
    }
    // marks are applied last so state ids follow order of first appearance in
    // the transitions, which for written files is breadth-first order
    if let Some((mline, marked)) = s.marked {
        for m in marked {
            check_name(mline, m)?;
            b.mark(m);
        }
    }
    Ok((b.build(), lines))
}

/// Canonical output names: `s<i>` in breadth-first order, reserved names kept.
fn canonical_names(a: &Automaton, order: &[StateId]) -> HashMap<StateId, String> {
    let mut next = 0;
    order
        .iter()
        .map(|&x| {
            let name = if RESERVED_NAMES.contains(&a.name(x)) {
                a.name(x).to_string()
            } else {
                next += 1;
                format!("s{}", next - 1)
            };
            (x, name)
        })
        .collect()
}

/// Renders the accessible part of `a` in canonical form.
pub fn write_automaton(a: &Automaton) -> String {
    write_with_names(a).0
}

/// Renders `a` and the sidecar map from canonical to original state names.
pub fn write_with_names(a: &Automaton) -> (String, String) {
    let order = a.bfs_order();
    let names = canonical_names(a, &order);
    let rank: HashMap<StateId, usize> = order.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let al = a.alphabet();
    let mut out = String::new();
    let join = |it: &mut dyn Iterator<Item = &str>| it.collect::<Vec<_>>().join(" ");
    let line = |key: &str, body: String| {
        if body.is_empty() {
            format!("{key}:\n")
        } else {
            format!("{key}: {body}\n")
        }
    };
    out += &line("alphabet", join(&mut al.names()));
    out += &line("uncontrollable", join(&mut al.uncontrollable().map(|e| al.name(e))));
    out += &line("initial", names[&a.initial()].clone());
    out += &line(
        "marked",
        join(&mut order.iter().filter(|&&x| a.is_marked(x)).map(|x| names[x].as_str())),
    );
    out += "trans:\n";
    for &x in &order {
        let mut edges: Vec<_> = a.transitions(x).to_vec();
        edges.sort_by_key(|&(e, y)| (e, rank[&y]));
        for (e, y) in edges {
            let _ = writeln!(out, "{} {} {}", names[&x], al.name(e), names[&y]);
        }
    }
    let mut map = String::new();
    for &x in &order {
        let _ = writeln!(map, "{} = {}", names[&x], a.name(x));
    }
    (out, map)
}

/// A plain Graphviz digraph of the accessible part; marked states are doubly circled.
pub fn to_dot(a: &Automaton) -> String {
    let order = a.bfs_order();
    let names = canonical_names(a, &order);
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  __start [shape=point];\n");
    for &x in &order {
        let shape = if a.is_marked(x) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  \"{}\" [shape={shape}];", names[&x]);
    }
    let _ = writeln!(out, "  __start -> \"{}\";", names[&a.initial()]);
    for &x in &order {
        for &(e, y) in a.transitions(x) {
            let style = if a.alphabet().is_uncontrollable(e) { ", style=dashed" } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"{style}];",
                names[&x],
                names[&y],
                a.alphabet().name(e)
            );
        }
    }
    out.push_str("}\n");
    out
}
