//! Line-record text formats. Fields are comma-separated, blank lines and
//! lines starting with `#` are ignored.
//!
//! * trace: `id, arrival, departure, num/den[, predicted_length]`
//! * load forecast sidecar: `t, num/den`
//! * schedule: `machine, interval`

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{parse_rational, Instance, Interval, IntervalId, MachineId, Rational, Schedule};

/// Instance read from a trace, with any per-interval length predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceData {
    pub instance: Instance,
    pub predicted_lengths: BTreeMap<IntervalId, f64>,
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split(',').map(str::trim).collect()))
        }
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, name: &str, text: &str) -> Result<T> {
    text.parse()
        .map_err(|_| parse_err(line, format!("{name} {text:?} is not valid")))
}

pub fn parse_trace(text: &str) -> Result<TraceData> {
    let mut intervals = Vec::new();
    let mut predicted_lengths = BTreeMap::new();
    let mut seen = BTreeMap::new();
    for (line, fields) in records(text) {
        if fields.len() != 4 && fields.len() != 5 {
            return Err(parse_err(
                line,
                format!("expected 4 or 5 fields, found {}", fields.len()),
            ));
        }
        let id: u32 = field(line, "id", fields[0])?;
        let start: i64 = field(line, "arrival", fields[1])?;
        let end: i64 = field(line, "departure", fields[2])?;
        let size = parse_rational(fields[3]).map_err(|e| parse_err(line, e.to_string()))?;
        let iv = Interval::new(id, start, end, size).map_err(|e| parse_err(line, e.to_string()))?;
        if let Some(first) = seen.insert(id, line) {
            return Err(parse_err(line, format!("id {id} already used on line {first}")));
        }
        if let Some(p) = fields.get(4) {
            let p: f64 = field(line, "predicted length", p)?;
            if !(p.is_finite() && p > 0.0) {
                return Err(parse_err(line, format!("predicted length {p} must be positive")));
            }
            predicted_lengths.insert(iv.id(), p);
        }
        intervals.push(iv);
    }
    Ok(TraceData {
        instance: Instance::new(intervals)?,
        predicted_lengths,
    })
}

pub fn ingest_trace(path: &Path) -> Result<TraceData> {
    parse_trace(&fs::read_to_string(path)?)
}

/// Trace text for `instance`; predicted lengths are appended where given.
pub fn emit_trace(instance: &Instance, predicted: Option<&BTreeMap<IntervalId, f64>>) -> String {
    let mut out = String::from("# id, arrival, departure, size");
    if predicted.is_some() {
        out.push_str(", predicted_length");
    }
    out.push('\n');
    for iv in instance.intervals() {
        let size = iv.size();
        write!(out, "{}, {}, {}, {}/{}", iv.id(), iv.start(), iv.end(), size.numer(), size.denom())
            .expect("writing to a string");
        if let Some(p) = predicted.and_then(|m| m.get(&iv.id())) {
            write!(out, ", {p}").expect("writing to a string");
        }
        out.push('\n');
    }
    out
}

/// Per-step loads `(t, v_t)` from a sidecar, sorted by `t`.
pub fn parse_load_sidecar(text: &str) -> Result<Vec<(i64, Rational)>> {
    let mut out = BTreeMap::new();
    for (line, fields) in records(text) {
        if fields.len() != 2 {
            return Err(parse_err(line, format!("expected 2 fields, found {}", fields.len())));
        }
        let t: i64 = field(line, "time", fields[0])?;
        let v = parse_rational(fields[1]).map_err(|e| parse_err(line, e.to_string()))?;
        if v < Rational::from_integer(0) {
            return Err(parse_err(line, format!("load {v} is negative")));
        }
        if out.insert(t, v).is_some() {
            return Err(parse_err(line, format!("time {t} listed twice")));
        }
    }
    Ok(out.into_iter().collect())
}

pub fn read_load_sidecar(path: &Path) -> Result<Vec<(i64, Rational)>> {
    parse_load_sidecar(&fs::read_to_string(path)?)
}

pub fn emit_load_sidecar(values: &[(i64, Rational)]) -> String {
    let mut out = String::from("# t, load\n");
    for (t, v) in values {
        writeln!(out, "{t}, {}/{}", v.numer(), v.denom()).expect("writing to a string");
    }
    out
}

pub fn emit_schedule(schedule: &Schedule) -> String {
    let mut out = String::from("# machine, interval\n");
    for m in schedule.machines() {
        for (iid, _) in m.assignments() {
            writeln!(out, "{}, {}", m.id(), iid).expect("writing to a string");
        }
    }
    out
}

/// Reads `machine, interval` pairs; segments are rebuilt from the instance.
pub fn parse_schedule(text: &str, instance: &Instance) -> Result<Schedule> {
    let mut pairs = Vec::new();
    for (line, fields) in records(text) {
        if fields.len() != 2 {
            return Err(parse_err(line, format!("expected 2 fields, found {}", fields.len())));
        }
        let m: u32 = field(line, "machine", fields[0])?;
        let i: u32 = field(line, "interval", fields[1])?;
        if instance.get(IntervalId(i)).is_none() {
            return Err(parse_err(line, format!("interval {i} is not in the trace")));
        }
        pairs.push((IntervalId(i), MachineId(m)));
    }
    Schedule::from_assignment(instance, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    const INSTANCE_A: &str = "# instance A\n1, 0, 4, 1/2\n2, 0, 2, 1/2\n\n3, 1, 3, 1/2\n4, 2, 4, 0.5\n";

    #[test]
    fn reads_instance_a() {
        let data = parse_trace(INSTANCE_A).unwrap();
        let h = ratio(1, 2);
        let expected = Instance::new(vec![
            Interval::new(1, 0, 4, h).unwrap(),
            Interval::new(2, 0, 2, h).unwrap(),
            Interval::new(3, 1, 3, h).unwrap(),
            Interval::new(4, 2, 4, h).unwrap(),
        ])
        .unwrap();
        assert_eq!(data.instance, expected);
        assert!(data.predicted_lengths.is_empty());
        let again = parse_trace(&emit_trace(&data.instance, None)).unwrap();
        assert_eq!(again.instance, expected);
    }

    #[test]
    fn predicted_lengths_round_trip() {
        let data = parse_trace("1, 0, 4, 1/2, 3.5\n2, 1, 2, 1/4, 1\n").unwrap();
        assert_eq!(data.predicted_lengths[&IntervalId(1)], 3.5);
        let text = emit_trace(&data.instance, Some(&data.predicted_lengths));
        assert_eq!(parse_trace(&text).unwrap(), data);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_trace("1, 0, 4, 1/2\n2, 0, 2, 3/2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_trace("# c\n1, 0.5, 4, 1/2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_trace("1, 0, 4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_trace("1, 0, 4, 1/2\n1, 0, 4, 1/2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_trace("1, 3, 3, 1/2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn empty_file_is_empty_instance() {
        let data = parse_trace("").unwrap();
        assert!(data.instance.is_empty());
    }

    #[test]
    fn sidecar_and_schedule_round_trip() {
        let loads = vec![(0, ratio(1, 1)), (1, ratio(3, 2))];
        assert_eq!(parse_load_sidecar(&emit_load_sidecar(&loads)).unwrap(), loads);
        assert!(parse_load_sidecar("0, -1/2\n").is_err());

        let inst = parse_trace(INSTANCE_A).unwrap().instance;
        let s = parse_schedule("1, 1\n1, 2\n2, 3\n1, 4\n", &inst).unwrap();
        assert_eq!(s.cost().unwrap(), 6);
        assert_eq!(parse_schedule(&emit_schedule(&s), &inst).unwrap(), s);
        assert!(parse_schedule("1, 9\n", &inst).is_err());
    }
}
