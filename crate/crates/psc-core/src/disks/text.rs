//! Named disk configurations in a line-oriented text file:
//!
//! ```text
//! psc-disks 1
//! dim 2
//! @pair = [(-0.5, 0) 0.4; (0.5, 0) 0.4]
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use super::{Disk, DiskConfig};
use crate::lex::{tokenize, Cursor, LexError};

pub const FORMAT_VERSION: usize = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl From<LexError> for ParseError {
    fn from(e: LexError) -> Self {
        ParseError {
            line: e.line,
            col: e.col,
            message: e.message,
        }
    }
}

/// Configurations keyed by name, all of one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigTable {
    pub dim: usize,
    pub configs: BTreeMap<String, DiskConfig>,
}

impl ConfigTable {
    pub fn new(dim: usize) -> Self {
        ConfigTable {
            dim,
            configs: BTreeMap::new(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&DiskConfig> {
        self.configs.get(name)
    }

    pub fn insert(&mut self, name: impl Into<String>, config: DiskConfig) {
        self.configs.insert(name.into(), config);
    }

    /// Name of an existing entry equal to `config`, or a new `gN` entry.
    pub fn intern(&mut self, config: &DiskConfig) -> String {
        if let Some((name, _)) = self.configs.iter().find(|(_, c)| *c == config) {
            return name.clone();
        }
        let name = (1..)
            .map(|k| format!("g{k}"))
            .find(|n| !self.configs.contains_key(n))
            .expect("unbounded name supply");
        self.configs.insert(name.clone(), config.clone());
        name
    }
}

pub fn parse_config_table(src: &str) -> Result<ConfigTable, ParseError> {
    let mut cur = Cursor::new(tokenize(src)?);
    cur.expect_word("psc-disks")?;
    let version = cur.expect_index()?;
    if version != FORMAT_VERSION {
        return Err(cur
            .error(format!("unsupported format version {version}"))
            .into());
    }
    cur.expect_word("dim")?;
    let dim = cur.expect_index()?;
    if dim == 0 {
        return Err(cur.error("dimension must be at least 1").into());
    }
    let mut table = ConfigTable::new(dim);
    while !cur.at_end() {
        let name = cur.expect_name()?;
        if table.configs.contains_key(&name) {
            return Err(cur
                .error(format!("duplicate configuration `@{name}`"))
                .into());
        }
        cur.expect_sym("=")?;
        let config = parse_config_body(&mut cur, dim)?;
        table.configs.insert(name, config);
    }
    Ok(table)
}

fn parse_config_body(cur: &mut Cursor, dim: usize) -> Result<DiskConfig, ParseError> {
    cur.expect_sym("[")?;
    let mut disks = Vec::new();
    if cur.eat_sym("]") {
        return Ok(DiskConfig::new(dim, disks));
    }
    loop {
        cur.expect_sym("(")?;
        let mut center = vec![cur.expect_num()?];
        while cur.eat_sym(",") {
            center.push(cur.expect_num()?);
        }
        if center.len() != dim {
            return Err(cur
                .error(format!(
                    "center has {} coordinates, expected {dim}",
                    center.len()
                ))
                .into());
        }
        cur.expect_sym(")")?;
        let radius = cur.expect_num()?;
        disks.push(Disk::new(center, radius));
        if cur.eat_sym("]") {
            break;
        }
        cur.expect_sym(";")?;
    }
    Ok(DiskConfig::new(dim, disks))
}

struct Body<'a>(&'a DiskConfig);

impl fmt::Display for Body<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.0.disks.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            f.write_str("(")?;
            for (k, x) in d.center.iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x:?}")?;
            }
            write!(f, ") {:?}", d.radius)?;
        }
        f.write_str("]")
    }
}

/// `{:?}` on f64 prints the shortest string that parses back to the same bits.
pub fn print_config_table(table: &ConfigTable) -> String {
    let mut out = format!("psc-disks {FORMAT_VERSION}\ndim {}\n", table.dim);
    for (name, config) in &table.configs {
        writeln!(out, "@{name} = {}", Body(config)).expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str =
        "psc-disks 1\ndim 2\n# two disks\n@pair = [(-0.5, 0) 0.4; (0.5, 0) 0.4]\n@none = []\n";

    #[test]
    fn parses_sample() {
        let t = parse_config_table(SAMPLE).unwrap();
        assert_eq!(t.dim, 2);
        assert_eq!(
            t.get("pair").unwrap().disks[1],
            Disk::new(vec![0.5, 0.0], 0.4)
        );
        assert_eq!(t.get("none").unwrap().arity(), 0);
    }

    #[test]
    fn round_trips_awkward_floats() {
        let mut t = ConfigTable::new(3);
        t.insert(
            "x",
            DiskConfig::new(
                3,
                vec![Disk::new(
                    vec![0.1 + 0.2, -1e-300, 1.0 / 3.0],
                    1.0 / 7.0,
                )],
            ),
        );
        let back = parse_config_table(&print_config_table(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn reports_wrong_coordinate_count() {
        let e = parse_config_table("psc-disks 1\ndim 2\n@a = [(0) 0.5]").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.message.contains("coordinates"));
    }

    #[test]
    fn rejects_duplicates_and_versions() {
        assert!(parse_config_table("psc-disks 2\ndim 2\n").is_err());
        assert!(parse_config_table("psc-disks 1\ndim 1\n@a = []\n@a = []").is_err());
    }

    #[test]
    fn intern_reuses_and_allocates_names() {
        let mut t = ConfigTable::new(2);
        t.insert("g1", DiskConfig::identity(2));
        assert_eq!(t.intern(&DiskConfig::identity(2)), "g1");
        assert_eq!(t.intern(&DiskConfig::empty(2)), "g2");
    }
}
