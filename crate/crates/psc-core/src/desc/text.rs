//! Descriptors as JSON with a leading `schema_version`. Floats are printed
//! in shortest round-trip form and parsed exactly.

use serde::{Deserialize, Serialize};

use super::{DescError, Gluing, Node, SphereDescriptor};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    schema_version: u32,
    dim: usize,
    nodes: Vec<Node>,
    edges: Vec<Gluing>,
}

pub fn print_descriptor(d: &SphereDescriptor) -> String {
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        dim: d.dim,
        nodes: d.nodes.clone(),
        edges: d.edges.clone(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("descriptors serialize");
    out.push('\n');
    out
}

pub fn parse_descriptor(src: &str) -> Result<SphereDescriptor, DescError> {
    let doc: Document =
        serde_json::from_str(src).map_err(|e| DescError::Invalid(format!("parse error: {e}")))?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(DescError::Invalid(format!(
            "unsupported schema version {}",
            doc.schema_version
        )));
    }
    let d = SphereDescriptor::new(doc.dim, doc.nodes, doc.edges);
    d.validate()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desc::{Attachment, Location, Site};

    fn capped() -> SphereDescriptor {
        SphereDescriptor::single(
            3,
            Node::round(
                1.0,
                vec![
                    Site::new(
                        "p0",
                        Location::North,
                        Attachment::FreeTorpedo { delta: 1.0 },
                    )
                    .as_base(),
                    Site::new(
                        "p1",
                        Location::South,
                        Attachment::FreeTorpedo { delta: 0.1 + 0.2 },
                    ),
                ],
            ),
        )
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let d = capped();
        let text = print_descriptor(&d);
        assert!(text.starts_with("{\n  \"schema_version\": 1,"));
        let back = parse_descriptor(&text).unwrap();
        assert_eq!(back, d);
        let Attachment::FreeTorpedo { delta } = back.nodes[0].sites[1].attachment else {
            panic!()
        };
        assert_eq!(delta.to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn rejects_bad_documents() {
        let text = print_descriptor(&capped());
        assert!(
            parse_descriptor(&text.replace("\"schema_version\": 1", "\"schema_version\": 2"))
                .is_err()
        );
        assert!(parse_descriptor(&text.replace("0.30000000000000004", "-1.0")).is_err());
        assert!(parse_descriptor("{").is_err());
        assert!(parse_descriptor("").is_err());
    }
}
