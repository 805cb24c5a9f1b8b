use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::f64::consts::PI;

use thiserror::Error;

use super::{InitialState, Metric, MetricRequest, RecordSelector, Scenario, Step};
use crate::copier::ChainMode;
use crate::measurement::Basis;
use crate::qstate::{Subsystem, SubsystemLayout};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

type PResult<T> = core::result::Result<T, ParseError>;

fn err<T>(line: usize, message: impl Into<String>) -> PResult<T> {
    Err(ParseError { line, message: message.into() })
}

fn parse_f64(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parse `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`).
pub fn parse_complex(s: &str) -> Option<C64> {
    let Some(body) = s.strip_suffix('i') else {
        return parse_f64(s).map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_f64(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_f64(other)?,
    };
    Some(C64::new(re, im))
}

/// Parse a number or one of `pi`, `k*pi`, `pi/m`, `k*pi/m` (optionally negated).
pub fn parse_angle(s: &str) -> Option<f64> {
    if let Some(x) = parse_f64(s) {
        return Some(x);
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((n, d)) => (n, parse_f64(d).filter(|d| *d != 0.0)?),
        None => (body, 1.0),
    };
    let factor = match numer {
        "pi" => 1.0,
        other => parse_f64(other.strip_suffix("*pi")?)?,
    };
    Some(sign * factor * PI / denom)
}

fn complex_list(line: usize, s: &str) -> PResult<Vec<C64>> {
    s.split(',')
        .map(|t| parse_complex(t.trim()).ok_or_else(|| ParseError { line, message: format!("bad complex literal `{t}`") }))
        .collect()
}

fn key_value(token: &str) -> Option<(&str, &str)> {
    token.split_once('=')
}

struct Builder {
    subsystems: Vec<(Subsystem, usize)>,
    layout: Option<SubsystemLayout>,
    global_amps: Option<(usize, Vec<C64>)>,
    factors: Vec<Option<Vec<C64>>>,
    script: Vec<Step>,
    metrics: Vec<MetricRequest>,
    trials: u32,
    seed: u64,
}

impl Builder {
    fn layout(&mut self, line: usize) -> PResult<&SubsystemLayout> {
        if self.layout.is_none() {
            if self.subsystems.is_empty() {
                return err(line, "no subsystem declared yet");
            }
            let entries = self.subsystems.iter().map(|(s, _)| s.clone()).collect();
            let layout = SubsystemLayout::new(entries).map_err(|e| ParseError { line, message: e.to_string() })?;
            self.factors = vec![None; layout.len()];
            self.layout = Some(layout);
        }
        Ok(self.layout.as_ref().unwrap())
    }

    fn label(&mut self, line: usize, label: &str) -> PResult<String> {
        let layout = self.layout(line)?;
        if !layout.contains(label) {
            return err(line, format!("unknown label `{label}`"));
        }
        Ok(label.into())
    }

    fn labels(&mut self, line: usize, list: &str) -> PResult<Vec<String>> {
        let labels: Vec<String> =
            list.split(',').map(|l| self.label(line, l.trim())).collect::<PResult<_>>()?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return err(line, format!("label `{l}` listed twice"));
            }
        }
        Ok(labels)
    }

    fn dim(&mut self, line: usize, label: &str) -> PResult<usize> {
        Ok(self.layout(line)?.get(label).map(Subsystem::dim).unwrap_or(0))
    }

    fn same_dims(&mut self, line: usize, a: &str, b: &str) -> PResult<()> {
        if a == b {
            return err(line, format!("cannot copy `{a}` onto itself"));
        }
        let (da, db) = (self.dim(line, a)?, self.dim(line, b)?);
        if da != db {
            return err(line, format!("`{a}` has dimension {da} but `{b}` has dimension {db}"));
        }
        Ok(())
    }

    fn qubit(&mut self, line: usize, label: &str) -> PResult<()> {
        let d = self.dim(line, label)?;
        if d != 2 {
            return err(line, format!("rotated readout needs a two-level subsystem, `{label}` has dimension {d}"));
        }
        Ok(())
    }
}

fn arrow<'a>(line: usize, args: &'a [&'a str]) -> PResult<(&'a str, &'a str, &'a [&'a str])> {
    match args {
        [src, "->", dst, rest @ ..] => Ok((src, dst, rest)),
        _ => err(line, "expected `<source> -> <target>`"),
    }
}

fn angle(line: usize, s: &str) -> PResult<f64> {
    parse_angle(s).ok_or_else(|| ParseError { line, message: format!("bad angle `{s}`") })
}

fn parse_seq(line: usize, s: &str) -> PResult<u64> {
    s.parse().map_err(|_| ParseError { line, message: format!("bad record number `{s}`") })
}

/// Parse and validate a scenario document.
pub fn parse_scenario(text: &str) -> PResult<Scenario> {
    let mut b = Builder {
        subsystems: Vec::new(),
        layout: None,
        global_amps: None,
        factors: Vec::new(),
        script: Vec::new(),
        metrics: Vec::new(),
        trials: 1,
        seed: 0,
    };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").replace("->", " -> ");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, args)) = tokens.split_first() else {
            continue;
        };
        match keyword {
            "subsystem" => {
                if b.layout.is_some() {
                    return err(line, "subsystems must be declared before they are used");
                }
                let Some((&label, opts)) = args.split_first() else {
                    return err(line, "expected `subsystem <label> dim=<d>`");
                };
                let (mut dim, mut basis, mut pm) = (None, None, None);
                for &opt in opts {
                    match key_value(opt) {
                        Some(("dim", d)) => {
                            dim = Some(d.parse::<usize>().map_err(|_| ParseError { line, message: format!("bad dimension `{d}`") })?)
                        }
                        Some(("basis", list)) => basis = Some(list.split(',').map(str::to_string).collect::<Vec<_>>()),
                        Some(("pm", p)) => pm = Some(p),
                        _ => return err(line, format!("unexpected `{opt}`")),
                    }
                }
                let basis = match (dim, basis) {
                    (Some(d), Some(bs)) if bs.len() != d => {
                        return err(line, format!("dim={d} but {} basis labels", bs.len()))
                    }
                    (_, Some(bs)) => bs,
                    (Some(d), None) => (0..d).map(|i| i.to_string()).collect(),
                    (None, None) => return err(line, "missing dim="),
                };
                let mut sub = Subsystem::new(label, basis).map_err(|e| ParseError { line, message: e.to_string() })?;
                if let Some(p) = pm {
                    let index = sub.basis().iter().position(|x| x == p).ok_or_else(|| ParseError {
                        line,
                        message: format!("pm=`{p}` is not a basis label of `{label}`"),
                    })?;
                    sub = sub.with_pure_medium(index).map_err(|e| ParseError { line, message: e.to_string() })?;
                }
                if b.subsystems.iter().any(|(s, _)| s.label() == label) {
                    return err(line, format!("duplicate label `{label}`"));
                }
                b.subsystems.push((sub, line));
            }
            "init" => {
                b.layout(line)?;
                match args {
                    [amps] if amps.starts_with("amps=") => {
                        if b.global_amps.is_some() || b.factors.iter().any(Option::is_some) {
                            return err(line, "initial state given twice");
                        }
                        let amps = complex_list(line, &amps[5..])?;
                        let n = b.layout.as_ref().unwrap().total_dim();
                        if amps.len() != n {
                            return err(line, format!("expected {n} amplitudes, found {}", amps.len()));
                        }
                        if amps.iter().all(|a| a.norm_sqr() == 0.0) {
                            return err(line, "amplitude list has zero norm");
                        }
                        b.global_amps = Some((line, amps));
                    }
                    [label, amps] if amps.starts_with("amps=") => {
                        let label = b.label(line, label)?;
                        let layout = b.layout.as_ref().unwrap();
                        let pos = layout.position(&label).unwrap();
                        let dim = layout.entries()[pos].dim();
                        let amps = complex_list(line, &amps[5..])?;
                        if amps.len() != dim {
                            return err(line, format!("`{label}` needs {dim} amplitudes, found {}", amps.len()));
                        }
                        if amps.iter().all(|a| a.norm_sqr() == 0.0) {
                            return err(line, "amplitude list has zero norm");
                        }
                        b.set_factor(line, pos, amps)?;
                    }
                    [] => return err(line, "expected `init <label>=<basis label>` or `init amps=<list>`"),
                    assignments => {
                        for &a in assignments {
                            let Some((label, value)) = key_value(a) else {
                                return err(line, format!("expected `<label>=<basis label>`, found `{a}`"));
                            };
                            let label = b.label(line, label)?;
                            let layout = b.layout.as_ref().unwrap();
                            let pos = layout.position(&label).unwrap();
                            let sub = &layout.entries()[pos];
                            let index = sub.basis_index(value).ok_or_else(|| ParseError {
                                line,
                                message: format!("`{label}` has no basis label `{value}`"),
                            })?;
                            let mut amps = vec![C64::new(0.0, 0.0); sub.dim()];
                            amps[index] = C64::new(1.0, 0.0);
                            b.set_factor(line, pos, amps)?;
                        }
                    }
                }
            }
            "copy" | "premeasure" => {
                let (src, dst, rest) = arrow(line, args)?;
                if !rest.is_empty() {
                    return err(line, format!("unexpected `{}`", rest[0]));
                }
                let (src, dst) = (b.label(line, src)?, b.label(line, dst)?);
                b.same_dims(line, &src, &dst)?;
                b.script.push(if keyword == "copy" {
                    Step::Copy { source: src, target: dst }
                } else {
                    Step::Premeasure { system: src, apparatus: dst }
                });
            }
            "multicopy" => {
                let (src, dsts, rest) = arrow(line, args)?;
                let source = b.label(line, src)?;
                let targets = b.labels(line, dsts)?;
                let mut mode = ChainMode::FromSource;
                for &opt in rest {
                    mode = match key_value(opt) {
                        Some(("mode", "source")) => ChainMode::FromSource,
                        Some(("mode", "chain")) => ChainMode::Chained,
                        _ => return err(line, format!("unexpected `{opt}`")),
                    };
                }
                let mut from = source.clone();
                for t in &targets {
                    b.same_dims(line, &from, t)?;
                    if mode == ChainMode::Chained {
                        from = t.clone();
                    }
                }
                b.script.push(Step::MultiCopy { source, targets, mode });
            }
            "measure" => {
                let Some((&label, opts)) = args.split_first() else {
                    return err(line, "expected `measure <label>`");
                };
                let label = b.label(line, label)?;
                let mut basis = Basis::Symbol;
                for &opt in opts {
                    basis = match opt.strip_prefix("basis=") {
                        Some("symbol") => Basis::Symbol,
                        Some(other) => match other.strip_prefix("theta=") {
                            Some(t) => {
                                b.qubit(line, &label)?;
                                Basis::Rotated(angle(line, t)?)
                            }
                            None => return err(line, format!("unknown basis `{other}`")),
                        },
                        None => return err(line, format!("unexpected `{opt}`")),
                    };
                }
                b.script.push(Step::Measure { label, basis });
            }
            "escape" => {
                let [label] = args else {
                    return err(line, "expected `escape <label>`");
                };
                let label = b.label(line, label)?;
                b.script.push(Step::Escape { label });
            }
            "erase" => {
                let selector = match args {
                    ["all"] => RecordSelector::All,
                    [range] => match range.split_once('-') {
                        Some((lo, hi)) => {
                            let (lo, hi) = (parse_seq(line, lo)?, parse_seq(line, hi)?);
                            if lo > hi {
                                return err(line, format!("empty record range `{range}`"));
                            }
                            RecordSelector::Range(lo, hi)
                        }
                        None => {
                            let n = parse_seq(line, range)?;
                            RecordSelector::Range(n, n)
                        }
                    },
                    _ => return err(line, "expected `erase all` or `erase <first>[-<last>]`"),
                };
                b.layout(line)?;
                b.script.push(Step::Erase(selector));
            }
            "metric" => {
                let metric = parse_metric(&mut b, line, args)?;
                b.metrics.push(MetricRequest { position: b.script.len(), metric });
            }
            "trials" => {
                b.trials = match args {
                    [n] => n.parse().ok().filter(|&n: &u32| n >= 1),
                    _ => None,
                }
                .ok_or_else(|| ParseError { line, message: "expected `trials <n>` with n >= 1".into() })?;
            }
            "seed" => {
                b.seed = match args {
                    [n] => n.parse().ok(),
                    _ => None,
                }
                .ok_or_else(|| ParseError { line, message: "expected `seed <unsigned integer>`".into() })?;
            }
            other => return err(line, format!("unknown directive `{other}`")),
        }
    }

    let layout = b.layout(last_line.max(1))?.clone();
    let initial = match b.global_amps.take() {
        Some((_, amps)) => InitialState::Amplitudes(amps),
        None => {
            let mut factors = Vec::with_capacity(layout.len());
            for (f, (sub, line)) in b.factors.iter().zip(&b.subsystems) {
                match f {
                    Some(f) => factors.push(f.clone()),
                    None => return err(*line, format!("no initial state for `{}`", sub.label())),
                }
            }
            InitialState::Product(factors)
        }
    };
    Ok(Scenario { layout, initial, script: b.script, metrics: b.metrics, trials: b.trials, seed: b.seed })
}

impl Builder {
    fn set_factor(&mut self, line: usize, pos: usize, amps: Vec<C64>) -> PResult<()> {
        if self.global_amps.is_some() || self.factors[pos].is_some() {
            return err(line, "initial state given twice");
        }
        self.factors[pos] = Some(amps);
        Ok(())
    }
}

fn parse_metric(b: &mut Builder, line: usize, args: &[&str]) -> PResult<Metric> {
    let Some((&name, rest)) = args.split_first() else {
        return err(line, "expected `metric <name> <args>`");
    };
    match (name, rest) {
        ("entropy", [labels]) => Ok(Metric::Entropy(b.labels(line, labels)?)),
        ("coherence", [label, ij @ ..]) if ij.is_empty() || ij.len() == 2 => {
            let label = b.label(line, label)?;
            let (i, j) = match ij {
                [i, j] => match (i.parse::<usize>(), j.parse::<usize>()) {
                    (Ok(i), Ok(j)) => (i, j),
                    _ => return err(line, "coherence indices must be integers"),
                },
                _ => (0, 1),
            };
            let dim = b.dim(line, &label)?;
            if i >= dim || j >= dim {
                return err(line, format!("coherence index out of range for `{label}`"));
            }
            Ok(Metric::Coherence { label, i, j })
        }
        ("mutualinfo", [source, copy, opts @ ..]) if opts.len() <= 1 => {
            let (source, copy) = (b.label(line, source)?, b.label(line, copy)?);
            b.same_dims(line, &source, &copy)?;
            b.qubit(line, &copy)?;
            let theta = match opts {
                [t] => match t.strip_prefix("theta=") {
                    Some(t) => angle(line, t)?,
                    None => return err(line, format!("unexpected `{t}`")),
                },
                _ => 0.0,
            };
            Ok(Metric::MutualInfo { source, copy, theta })
        }
        ("qmi", [a, c]) => {
            let (a, c) = (b.labels(line, a)?, b.labels(line, c)?);
            if let Some(x) = a.iter().find(|x| c.contains(x)) {
                return err(line, format!("label `{x}` on both sides"));
            }
            Ok(Metric::Qmi(a, c))
        }
        ("fidelity", ["initial"]) => Ok(Metric::Fidelity),
        ("entropy" | "coherence" | "mutualinfo" | "qmi" | "fidelity", _) => {
            err(line, format!("wrong arguments for metric `{name}`"))
        }
        _ => err(line, format!("unknown metric `{name}`")),
    }
}
