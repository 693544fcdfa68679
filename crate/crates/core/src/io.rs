//! Line-based instance file format.
//!
//! ```text
//! schedlab-instance 1
//! machines <m>
//! jobs <n>
//! job <j> <i1>:<p1> <i2>:<p2> ...
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Unlisted
//! `(machine, job)` cells are infinite.

use std::fmt::Write as _;

use crate::error::InstanceError;
use crate::instance::{validate_row, Instance};
use crate::rational::{format_rational, parse_rational, Rational};

pub const INSTANCE_HEADER: &str = "schedlab-instance 1";

/// Non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn keyed_count(line: Option<(usize, &str)>, key: &str) -> Result<usize, InstanceError> {
    let (no, text) = line.ok_or_else(|| InstanceError::parse(0, format!("missing `{key}` line")))?;
    let mut parts = text.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => v
            .parse()
            .map_err(|_| InstanceError::parse(no, format!("bad {key} count `{v}`"))),
        _ => Err(InstanceError::parse(no, format!("expected `{key} <count>`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, l)) if l == INSTANCE_HEADER => {}
        Some((no, _)) => {
            return Err(InstanceError::parse(no, format!("expected `{INSTANCE_HEADER}`")))
        }
        None => return Err(InstanceError::parse(0, "empty file")),
    }
    let machines = keyed_count(lines.next(), "machines")?;
    let jobs = keyed_count(lines.next(), "jobs")?;
    let mut rows: Vec<Option<Vec<(usize, Rational)>>> = vec![None; jobs];
    let mut seen = 0;
    for (no, line) in lines {
        let mut parts = line.split_whitespace();
        if parts.next() != Some("job") {
            return Err(InstanceError::parse(no, "expected `job <j> <machine>:<time> ...`"));
        }
        let j: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| InstanceError::parse(no, "missing or bad job index"))?;
        if j >= jobs {
            return Err(InstanceError::parse(no, format!("job index {j} out of range")));
        }
        if rows[j].is_some() {
            return Err(InstanceError::parse(no, format!("job {j} listed twice")));
        }
        let mut entries = Vec::new();
        for tok in parts {
            let (i, p) = tok
                .split_once(':')
                .ok_or_else(|| InstanceError::parse(no, format!("bad entry `{tok}`")))?;
            let i: usize = i
                .parse()
                .map_err(|_| InstanceError::parse(no, format!("bad machine index `{i}`")))?;
            let p = parse_rational(p).map_err(|e| InstanceError::parse(no, e.to_string()))?;
            entries.push((i, p));
        }
        validate_row(machines, j, &mut entries)
            .map_err(|e| InstanceError::parse(no, e.to_string()))?;
        rows[j] = Some(entries);
        seen += 1;
    }
    if seen != jobs {
        let missing = rows.iter().position(Option::is_none).unwrap_or(0);
        return Err(InstanceError::parse(
            text.lines().count(),
            format!("expected {jobs} job lines, found {seen} (job {missing} missing)"),
        ));
    }
    Instance::new(machines, rows.into_iter().map(Option::unwrap).collect())
}

/// Canonical serialization; parsing it back yields an equal instance.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "{INSTANCE_HEADER}").unwrap();
    writeln!(out, "machines {}", instance.machines()).unwrap();
    writeln!(out, "jobs {}", instance.jobs()).unwrap();
    for j in 0..instance.jobs() {
        write!(out, "job {j}").unwrap();
        for (i, p) in instance.eligible(j) {
            write!(out, " {i}:{}", format_rational(p)).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const SAMPLE: &str = "schedlab-instance 1\nmachines 2\njobs 2\njob 0 0:3 1:1/2\njob 1 1:7\n";

    #[test]
    fn parses_sample() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!(inst.machines(), 2);
        assert_eq!(inst.time(1, 0), Some(&rat(1, 2)));
        assert_eq!(inst.time(0, 1), None);
        assert_eq!(inst.time(1, 1), Some(&int(7)));
        assert_eq!(write_instance(&inst), SAMPLE);
    }

    #[test]
    fn comments_and_noncanonical_input() {
        let text = "# hi\nschedlab-instance 1\nmachines 2\n\njobs 1\n# c\njob 0 1:4/2 0:1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(write_instance(&inst), "schedlab-instance 1\nmachines 2\njobs 1\njob 0 0:1 1:2\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "schedlab-instance 1\nmachines 2\njobs 1\njob 0 5:1\n";
        match parse_instance(bad) {
            Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let bad = "schedlab-instance 1\nmachines 2\njobs 1\njob 0 0:0\n";
        assert!(matches!(parse_instance(bad), Err(InstanceError::Parse { line: 4, .. })));
        let bad = "schedlab-instance 1\nmachines 2\njobs 1\njob 0\n";
        assert!(matches!(parse_instance(bad), Err(InstanceError::Parse { line: 4, .. })));
        let bad = "schedlab-instance 2\n";
        assert!(matches!(parse_instance(bad), Err(InstanceError::Parse { line: 1, .. })));
        let bad = "schedlab-instance 1\nmachines 2\njobs 2\njob 0 0:1\n";
        assert!(matches!(parse_instance(bad), Err(InstanceError::Parse { .. })));
        let bad = "schedlab-instance 1\nmachines 1\njobs 1\njob 0 0:x\n";
        assert!(matches!(parse_instance(bad), Err(InstanceError::Parse { line: 4, .. })));
    }
}
