//! Report serialization.
//!
//! The CSV document holds two tables separated by one empty line:
//!
//! ```text
//! trial,step,subsystem,basis,outcome,probability
//! ...
//!
//! trial,metric,args,value
//! ...
//! ```
//!
//! Besides the requested metrics, every trial gets an `event` row
//! (`fixed-event` = 1, `revocable` = 0) and, if it aborted, an `abort` row
//! whose value is the failing step index. Reals are printed with nine
//! significant digits in C `%.9g` style.

use std::collections::BTreeMap;
use std::io::{self, Write};

use qcopy_core::scenario::{EventStatus, RunReport};

pub const OUTCOME_HEADER: [&str; 6] = ["trial", "step", "subsystem", "basis", "outcome", "probability"];
pub const METRIC_HEADER: [&str; 4] = ["trial", "metric", "args", "value"];

/// `printf("%.9g")`.
pub fn format_sig9(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    if (-4..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out)
}

fn event_flag(e: EventStatus) -> &'static str {
    match e {
        EventStatus::FixedEvent => "1",
        EventStatus::Revocable => "0",
    }
}

pub fn write_csv<W: Write>(report: &RunReport, mut out: W) -> io::Result<()> {
    {
        let mut w = csv_writer(&mut out);
        w.write_record(OUTCOME_HEADER)?;
        for t in &report.trials {
            for o in &t.outcomes {
                w.write_record([
                    t.trial.to_string(),
                    o.step.to_string(),
                    o.label.clone(),
                    o.basis.to_string(),
                    o.outcome.to_string(),
                    format_sig9(o.probability),
                ])?;
            }
        }
        w.flush()?;
    }
    writeln!(out)?;
    let mut w = csv_writer(&mut out);
    w.write_record(METRIC_HEADER)?;
    for t in &report.trials {
        let trial = t.trial.to_string();
        for m in &t.metrics {
            w.write_record([trial.as_str(), m.name, &m.args, &format_sig9(m.value)])?;
        }
        if let Some(f) = &t.failure {
            let args = format!("step={} {}", f.step, f.error.kind());
            w.write_record([trial.as_str(), "abort", &args, &f.step.to_string()])?;
        }
        w.write_record([trial.as_str(), "event", t.event.as_str(), event_flag(t.event)])?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable summary: outcome frequencies, metric means, failures and
/// event counts.
pub fn write_text<W: Write>(report: &RunReport, title: &str, mut out: W) -> io::Result<()> {
    let n = report.trials.len();
    writeln!(out, "scenario: {title}")?;
    writeln!(out, "trials:   {n}")?;

    let mut outcomes: BTreeMap<(usize, &str, String), BTreeMap<usize, usize>> = BTreeMap::new();
    let mut metrics: BTreeMap<(usize, usize, &str, &str), (f64, usize)> = BTreeMap::new();
    let mut failures: BTreeMap<String, usize> = BTreeMap::new();
    let mut fixed = 0;
    for t in &report.trials {
        for o in &t.outcomes {
            *outcomes.entry((o.step, &o.label, o.basis.to_string())).or_default().entry(o.outcome).or_default() += 1;
        }
        for (k, m) in t.metrics.iter().enumerate() {
            let slot = metrics.entry((m.position, k, m.name, &m.args)).or_insert((0.0, 0));
            slot.0 += m.value;
            slot.1 += 1;
        }
        if let Some(f) = &t.failure {
            *failures.entry(format!("step {}: {}", f.step, f.error)).or_default() += 1;
        }
        if t.event == EventStatus::FixedEvent {
            fixed += 1;
        }
    }

    if !outcomes.is_empty() {
        writeln!(out, "\noutcomes (step, subsystem, basis: outcome=frequency)")?;
        for ((step, label, basis), counts) in &outcomes {
            let total: usize = counts.values().sum();
            let freqs: Vec<String> = counts
                .iter()
                .map(|(k, c)| format!("{k}={}", format_sig9(*c as f64 / total as f64)))
                .collect();
            writeln!(out, "  {step:>3} {label} {basis}: {}", freqs.join(" "))?;
        }
    }
    if !metrics.is_empty() {
        writeln!(out, "\nmetrics (mean over trials that reached them)")?;
        for ((position, _, name, args), (sum, count)) in &metrics {
            writeln!(out, "  @{position:<3} {name} {args} = {}", format_sig9(sum / *count as f64))?;
        }
    }
    if !failures.is_empty() {
        writeln!(out, "\naborted trials")?;
        for (msg, count) in &failures {
            writeln!(out, "  {count} x {msg}")?;
        }
    }
    writeln!(out, "\nevents: {fixed} fixed-event, {} revocable", n - fixed)?;
    Ok(())
}
