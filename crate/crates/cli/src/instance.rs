//! Line-oriented instance files: an optional `# disks <n> radii <t>` header,
//! then one `x y r` line per disk. Disk ids follow line order.

use std::fmt::Write as _;
use std::path::Path;

use diskclique::{Disk, Point};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceFile {
    pub disks: Vec<Disk>,
}

impl InstanceFile {
    pub fn new(disks: Vec<Disk>) -> Self {
        Self { disks }
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    /// Number of distinct radii.
    pub fn radius_count(&self) -> usize {
        let mut radii: Vec<f64> = self.disks.iter().map(|d| d.radius).collect();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        radii.len()
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        parse(&text)
    }

    /// Shortest decimal that reads back to the same `f64`, so
    /// `parse(emit(i)) == i` bit for bit.
    pub fn emit(&self) -> String {
        let mut out = format!("# disks {} radii {}\n", self.len(), self.radius_count());
        for d in &self.disks {
            writeln!(out, "{} {} {}", d.center.x, d.center.y, d.radius).expect("writing to a String");
        }
        out
    }
}

fn parse_error(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

pub fn parse(text: &str) -> Result<InstanceFile, CliError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut disks = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let words: Vec<&str> = rest.split_whitespace().collect();
            if let ["disks", n, "radii", t] = words[..] {
                if header.is_some() || !disks.is_empty() {
                    return Err(parse_error(line_no, "header must come first"));
                }
                let n = n.parse().map_err(|_| parse_error(line_no, format!("bad disk count {n:?}")))?;
                let t = t.parse().map_err(|_| parse_error(line_no, format!("bad radius count {t:?}")))?;
                header = Some((n, t, line_no));
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y, r] = fields[..] else {
            return Err(parse_error(line_no, format!("expected `x y r`, found {} fields", fields.len())));
        };
        let num = |s: &str| s.parse::<f64>().map_err(|_| parse_error(line_no, format!("not a number: {s:?}")));
        let (x, y, r) = (num(x)?, num(y)?, num(r)?);
        let disk = Disk::new(disks.len(), Point::new(x, y), r).map_err(|e| parse_error(line_no, e.to_string()))?;
        disks.push(disk);
    }
    let inst = InstanceFile::new(disks);
    if let Some((n, t, line_no)) = header {
        if n != inst.len() {
            return Err(parse_error(line_no, format!("header declares {n} disks, file has {}", inst.len())));
        }
        if t != inst.radius_count() {
            return Err(parse_error(line_no, format!("header declares {t} radii, file has {}", inst.radius_count())));
        }
    }
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let disks = vec![
            Disk { id: 0, center: Point::new(0.1 + 0.2, -1.0 / 3.0), radius: 1.0 },
            Disk { id: 1, center: Point::new(123456.789, 1e-7), radius: 2.25 },
            Disk { id: 2, center: Point::new(-0.0, 5e8), radius: std::f64::consts::PI },
        ];
        let inst = InstanceFile::new(disks);
        let back = parse(&inst.emit()).unwrap();
        for (a, b) in inst.disks.iter().zip(&back.disks) {
            assert_eq!(a.center.x.to_bits(), b.center.x.to_bits());
            assert_eq!(a.center.y.to_bits(), b.center.y.to_bits());
            assert_eq!(a.radius.to_bits(), b.radius.to_bits());
        }
    }

    #[test]
    fn header_is_optional_and_checked() {
        assert_eq!(parse("0 0 1\n1 1 1\n").unwrap().len(), 2);
        assert_eq!(parse("# disks 1 radii 1\n0 0 1\n").unwrap().len(), 1);
        assert!(matches!(parse("# disks 2 radii 1\n0 0 1\n"), Err(CliError::Parse { line: 1, .. })));
    }

    #[test]
    fn bad_lines() {
        assert!(matches!(parse("0 0\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(parse("0 0 1\n0 x 1\n"), Err(CliError::Parse { line: 2, .. })));
        assert!(matches!(parse("0 0 -1\n"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(parse("nan 0 1\n"), Err(CliError::Parse { line: 1, .. })));
    }
}
