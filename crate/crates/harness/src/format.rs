//! Line-oriented text formats for instances and schedules.
//!
//! Instance:
//! ```text
//! DARIDE 1
//! n <n>
//! mode metric|graph
//! <n rows of n distances>            (metric mode)
//! edges <E> then E lines `u v w`     (graph mode)
//! capacity <k>
//! depots <q>
//! <q vertex ids>
//! demands <m>
//! <m lines `s t w`>
//! ```
//!
//! Schedule: `SCHED 1`, `rounds <R>`, then for every round one line per
//! vehicle in order, `v<j>: move 3 ; pick 0 ; move 5 ; drop 0`.

use daride_core::{metric_from_graph, Action, Demand, Instance, Metric, ModelError, Schedule, Time, WeightedGraph};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unexpected end of input, expected {0}")]
    Eof(&'static str),
    #[error("trailing content at line {0}")]
    Trailing(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        Lines { lines, at: 0 }
    }

    fn next(&mut self, what: &'static str) -> Result<(usize, &'a str), FormatError> {
        let l = *self.lines.get(self.at).ok_or(FormatError::Eof(what))?;
        self.at += 1;
        Ok(l)
    }

    /// Next line, which must read `<key> <value>`.
    fn keyed<T: std::str::FromStr>(&mut self, key: &'static str) -> Result<T, FormatError> {
        let (no, l) = self.next(key)?;
        let mut it = l.split(' ');
        if it.next() != Some(key) {
            return Err(FormatError::Parse { line: no, msg: format!("expected `{key} <value>`") });
        }
        let v = it.next().ok_or(FormatError::Parse { line: no, msg: format!("missing value for `{key}`") })?;
        if it.next().is_some() {
            return Err(FormatError::Parse { line: no, msg: "extra tokens".into() });
        }
        parse(no, v)
    }

    fn numbers<T: std::str::FromStr>(&mut self, what: &'static str, count: usize) -> Result<Vec<T>, FormatError> {
        let (no, l) = self.next(what)?;
        let toks: Vec<&str> = if l.is_empty() { Vec::new() } else { l.split(' ').collect() };
        if toks.len() != count {
            return Err(FormatError::Parse { line: no, msg: format!("expected {count} values, found {}", toks.len()) });
        }
        toks.into_iter().map(|s| parse(no, s)).collect()
    }

    fn finish(&self) -> Result<(), FormatError> {
        match self.lines.get(self.at) {
            Some(&(no, _)) => Err(FormatError::Trailing(no)),
            None => Ok(()),
        }
    }
}

fn parse<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, FormatError> {
    s.parse().map_err(|_| FormatError::Parse { line, msg: format!("cannot parse `{s}`") })
}

fn join<T: std::fmt::Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let n = inst.n();
    writeln!(out, "DARIDE 1\nn {n}").unwrap();
    match &inst.graph {
        Some(g) => {
            writeln!(out, "mode graph\nedges {}", g.edges.len()).unwrap();
            for (u, v, w) in &g.edges {
                writeln!(out, "{u} {v} {w}").unwrap();
            }
        }
        None => {
            writeln!(out, "mode metric").unwrap();
            for row in inst.metric.rows() {
                writeln!(out, "{}", join(row)).unwrap();
            }
        }
    }
    writeln!(out, "capacity {}\ndepots {}\n{}", inst.capacity, inst.q(), join(&inst.depots)).unwrap();
    writeln!(out, "demands {}", inst.m()).unwrap();
    for d in &inst.demands {
        writeln!(out, "{} {} {}", d.s, d.t, d.w).unwrap();
    }
    out
}

pub fn read_instance(text: &str) -> Result<Instance, FormatError> {
    let mut ls = Lines::new(text);
    let (no, head) = ls.next("header")?;
    if head != "DARIDE 1" {
        return Err(FormatError::Parse { line: no, msg: "expected `DARIDE 1`".into() });
    }
    let n: usize = ls.keyed("n")?;
    let mode: String = ls.keyed("mode")?;
    let (metric, graph) = match mode.as_str() {
        "metric" => {
            let rows = (0..n).map(|_| ls.numbers::<i64>("distance row", n)).collect::<Result<Vec<_>, _>>()?;
            (Metric::from_rows(rows)?, None)
        }
        "graph" => {
            let e: usize = ls.keyed("edges")?;
            let mut edges = Vec::with_capacity(e);
            for _ in 0..e {
                let (no, l) = ls.next("edge")?;
                let t: Vec<&str> = l.split(' ').collect();
                if t.len() != 3 {
                    return Err(FormatError::Parse { line: no, msg: "expected `u v w`".into() });
                }
                edges.push((parse(no, t[0])?, parse(no, t[1])?, parse(no, t[2])?));
            }
            let g = WeightedGraph::new(n, edges)?;
            (metric_from_graph(&g)?, Some(g))
        }
        _ => return Err(FormatError::Parse { line: 3, msg: format!("unknown mode `{mode}`") }),
    };
    let capacity: u64 = ls.keyed("capacity")?;
    let q: usize = ls.keyed("depots")?;
    let depots = ls.numbers::<usize>("depot ids", q)?;
    let m: usize = ls.keyed("demands")?;
    let mut demands = Vec::with_capacity(m);
    for _ in 0..m {
        let v = ls.numbers::<u64>("demand", 3)?;
        demands.push(Demand { s: v[0] as usize, t: v[1] as usize, w: v[2] });
    }
    ls.finish()?;
    let inst = Instance::new(metric, demands, depots, capacity)?;
    Ok(match graph {
        Some(g) => inst.with_graph(g),
        None => inst,
    })
}

pub fn write_schedule(s: &Schedule) -> String {
    let mut out = format!("SCHED 1\nrounds {}\n", s.num_rounds());
    for round in &s.rounds {
        for (j, acts) in round.iter().enumerate() {
            let body = acts.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ; ");
            if body.is_empty() {
                writeln!(out, "v{j}:").unwrap();
            } else {
                writeln!(out, "v{j}: {body}").unwrap();
            }
        }
    }
    out
}

fn parse_action(line: usize, tok: &str) -> Result<Action, FormatError> {
    let t: Vec<&str> = tok.split_whitespace().collect();
    let err = || FormatError::Parse { line, msg: format!("bad action `{tok}`") };
    match t.as_slice() {
        ["move", x] => Ok(Action::Move(parse(line, x)?)),
        ["movemid", u, v, off] => Ok(Action::MoveMid { u: parse(line, u)?, v: parse(line, v)?, offset: parse::<Time>(line, off)? }),
        ["pick", o] => Ok(Action::Pick(parse(line, o)?)),
        ["drop", o] => Ok(Action::Drop(parse(line, o)?)),
        ["wait", d] => Ok(Action::Wait(parse::<Time>(line, d)?)),
        _ => Err(err()),
    }
}

/// Parses a schedule over `vehicles` vehicles.
pub fn read_schedule(text: &str, vehicles: usize) -> Result<Schedule, FormatError> {
    let mut ls = Lines::new(text);
    let (no, head) = ls.next("header")?;
    if head != "SCHED 1" {
        return Err(FormatError::Parse { line: no, msg: "expected `SCHED 1`".into() });
    }
    let r: usize = ls.keyed("rounds")?;
    let mut sched = Schedule::new(vehicles);
    for _ in 0..r {
        let mut round = Vec::with_capacity(vehicles);
        for j in 0..vehicles {
            let (no, l) = ls.next("vehicle line")?;
            let prefix = format!("v{j}:");
            let rest = l
                .strip_prefix(&prefix)
                .ok_or(FormatError::Parse { line: no, msg: format!("expected `{prefix}`") })?;
            let acts = rest
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_action(no, s))
                .collect::<Result<Vec<_>, _>>()?;
            round.push(acts);
        }
        sched.push_round(round);
    }
    ls.finish()?;
    Ok(sched)
}

fn io_err(path: &Path, source: std::io::Error) -> FormatError {
    FormatError::Io { path: path.display().to_string(), source }
}

pub fn read_instance_file(path: &Path) -> Result<Instance, FormatError> {
    read_instance(&std::fs::read_to_string(path).map_err(|e| io_err(path, e))?)
}

pub fn write_instance_file(path: &Path, inst: &Instance) -> Result<(), FormatError> {
    std::fs::write(path, write_instance(inst)).map_err(|e| io_err(path, e))
}

pub fn read_schedule_file(path: &Path, vehicles: usize) -> Result<Schedule, FormatError> {
    read_schedule(&std::fs::read_to_string(path).map_err(|e| io_err(path, e))?, vehicles)
}

pub fn write_schedule_file(path: &Path, s: &Schedule) -> Result<(), FormatError> {
    std::fs::write(path, write_schedule(s)).map_err(|e| io_err(path, e))
}
