//! Tree expressions:
//!
//! ```text
//! tree := "leaf" index
//!       | "(" "vertex" @name { "-[" length "]->" ( tree | "leaf" index ) } ")"
//! ```
//!
//! Names resolve against a [`ConfigTable`]. Input edges have length 1.

use std::fmt::Write as _;

use super::{Edge, Slot, Vertex, WTree};
use crate::disks::{ConfigTable, ParseError};
use crate::lex::{tokenize, Cursor, Tok};

/// Deepest nesting the parser accepts.
pub const MAX_DEPTH: usize = 256;

pub fn parse_tree(src: &str, table: &ConfigTable) -> Result<WTree, ParseError> {
    let mut cur = Cursor::new(tokenize(src)?);
    let tree = match cur.peek() {
        Some(Tok::Word(w)) if w == "leaf" => {
            cur.advance();
            let i = cur.expect_index()?;
            if i != 1 {
                return Err(cur.error("the trivial tree has the single input 1").into());
            }
            WTree::Trivial
        }
        _ => WTree::Node(parse_vertex(&mut cur, table, 0)?),
    };
    if !cur.at_end() {
        return Err(cur.error("trailing input after tree").into());
    }
    tree.validate().map_err(|e| cur.error(e.to_string()))?;
    Ok(tree)
}

fn parse_vertex(cur: &mut Cursor, table: &ConfigTable, depth: usize) -> Result<Vertex, ParseError> {
    if depth >= MAX_DEPTH {
        return Err(cur
            .error(format!("tree nested deeper than {MAX_DEPTH}"))
            .into());
    }
    cur.expect_sym("(")?;
    cur.expect_word("vertex")?;
    let name = cur.expect_name()?;
    let label = table
        .get(&name)
        .ok_or_else(|| cur.error(format!("unknown configuration `@{name}`")))?
        .clone();
    let mut slots = Vec::new();
    while cur.eat_sym("-[") {
        let length = cur.expect_num()?;
        if !(0.0..=1.0).contains(&length) {
            return Err(cur
                .error(format!("edge length {length} outside [0, 1]"))
                .into());
        }
        cur.expect_sym("]->")?;
        match cur.peek() {
            Some(Tok::Word(w)) if w == "leaf" => {
                if length != 1.0 {
                    return Err(cur.error("input edges have length 1").into());
                }
                cur.advance();
                slots.push(Slot::Leaf(cur.expect_index()?));
            }
            _ => {
                let child = parse_vertex(cur, table, depth + 1)?;
                slots.push(Slot::Edge(Edge { length, child }));
            }
        }
    }
    cur.expect_sym(")")?;
    if slots.len() != label.arity() {
        return Err(cur
            .error(format!(
                "`@{name}` has arity {} but the vertex has {} slots",
                label.arity(),
                slots.len()
            ))
            .into());
    }
    Ok(Vertex::new(label, slots))
}

/// Prints `t`, adding any label missing from `table` under a fresh name.
pub fn print_tree(t: &WTree, table: &mut ConfigTable) -> String {
    fn vertex(v: &Vertex, table: &mut ConfigTable, indent: usize, out: &mut String) {
        let name = table.intern(&v.label);
        write!(out, "(vertex @{name}").expect("write to string");
        for s in &v.slots {
            write!(out, "\n{:width$}", "", width = indent + 2).expect("write to string");
            match s {
                Slot::Leaf(i) => write!(out, "-[1]-> leaf {i}").expect("write to string"),
                Slot::Edge(e) => {
                    write!(out, "-[{:?}]-> ", e.length).expect("write to string");
                    vertex(&e.child, table, indent + 2, out);
                }
            }
        }
        out.push(')');
    }
    let mut out = String::new();
    match t {
        WTree::Trivial => out.push_str("leaf 1"),
        WTree::Node(v) => vertex(v, table, 0, &mut out),
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disks::parse_config_table;

    const CONFIGS: &str =
        "psc-disks 1\ndim 2\n@id = [(0, 0) 1]\n@pair = [(-0.5, 0) 0.4; (0.5, 0) 0.4]\n";

    #[test]
    fn parses_and_reprints() {
        let mut table = parse_config_table(CONFIGS).unwrap();
        let src = "(vertex @pair -[0.25]-> (vertex @id -[1]-> leaf 2) -[1]-> leaf 1)";
        let t = parse_tree(src, &table).unwrap();
        assert_eq!(t.leaves(), vec![2, 1]);
        let printed = print_tree(&t, &mut table);
        assert_eq!(parse_tree(&printed, &table).unwrap(), t);
    }

    #[test]
    fn trivial_tree() {
        let mut table = parse_config_table(CONFIGS).unwrap();
        assert_eq!(parse_tree("leaf 1", &table).unwrap(), WTree::Trivial);
        assert_eq!(print_tree(&WTree::Trivial, &mut table), "leaf 1\n");
        assert!(parse_tree("leaf 2", &table).is_err());
    }

    #[test]
    fn rejects_semantic_errors() {
        let table = parse_config_table(CONFIGS).unwrap();
        for bad in [
            "(vertex @pair -[1]-> leaf 1)",
            "(vertex @pair -[1]-> leaf 1 -[1]-> leaf 1)",
            "(vertex @pair -[1.5]-> (vertex @id -[1]-> leaf 1) -[1]-> leaf 2)",
            "(vertex @pair -[0.5]-> leaf 1 -[1]-> leaf 2)",
            "(vertex @nope)",
            "(vertex @id -[1]-> leaf 1) leaf 1",
        ] {
            assert!(parse_tree(bad, &table).is_err(), "{bad}");
        }
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let table = parse_config_table(CONFIGS).unwrap();
        let mut src = String::new();
        for _ in 0..10_000 {
            src.push_str("(vertex @id -[0.5]-> ");
        }
        assert!(parse_tree(&src, &table).is_err());
    }
}
