//! XMLBIF 0.3 interchange.
//!
//! `<TABLE>` values are written parent configuration by parent configuration
//! (last `<GIVEN>` fastest) with the child's outcomes innermost, which is the
//! same layout as [`Cpt`] rows flattened.

use std::fmt::Write as _;

use super::{Cpt, NetworkDocument, Network, Variable};
use crate::error::{Error, Result};

pub fn to_xmlbif(net: &Network, name: &str) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<BIF VERSION=\"0.3\">\n<NETWORK>\n");
    let _ = writeln!(out, "<NAME>{}</NAME>", escape(name));
    for v in net.variables() {
        out.push_str("<VARIABLE TYPE=\"nature\">\n");
        let _ = writeln!(out, "\t<NAME>{}</NAME>", escape(v.id()));
        for s in v.states() {
            let _ = writeln!(out, "\t<OUTCOME>{}</OUTCOME>", escape(s));
        }
        out.push_str("</VARIABLE>\n");
    }
    for cpt in net.cpts() {
        out.push_str("<DEFINITION>\n");
        let _ = writeln!(out, "\t<FOR>{}</FOR>", escape(cpt.child()));
        for p in cpt.parents() {
            let _ = writeln!(out, "\t<GIVEN>{}</GIVEN>", escape(p));
        }
        out.push_str("\t<TABLE>");
        let mut first = true;
        for p in cpt.rows().iter().flatten() {
            if !first {
                out.push(' ');
            }
            first = false;
            let _ = write!(out, "{p}");
        }
        out.push_str("</TABLE>\n</DEFINITION>\n");
    }
    out.push_str("</NETWORK>\n</BIF>\n");
    out
}

/// Parses an XMLBIF 0.3 document into a network document. The result is not
/// validated; call [`NetworkDocument::into_network`] for that.
pub fn from_xmlbif(text: &str) -> Result<NetworkDocument> {
    let doc = roxmltree::Document::parse(text)
        .map_err(|e| Error::format("xmlbif", e.to_string()))?;
    let network = doc
        .descendants()
        .find(|n| n.has_tag_name("NETWORK"))
        .ok_or_else(|| Error::format("xmlbif", "no <NETWORK> element"))?;

    let mut variables = Vec::new();
    for node in network.children().filter(|n| n.has_tag_name("VARIABLE")) {
        let name = child_text(node, "NAME")?;
        let outcomes: Vec<String> = node
            .children()
            .filter(|n| n.has_tag_name("OUTCOME"))
            .map(|n| n.text().unwrap_or("").trim().to_string())
            .collect();
        variables.push(Variable::new(name, outcomes)?);
    }

    let mut cpts = Vec::new();
    for node in network.children().filter(|n| n.has_tag_name("DEFINITION")) {
        let child = child_text(node, "FOR")?;
        let parents: Vec<String> = node
            .children()
            .filter(|n| n.has_tag_name("GIVEN"))
            .map(|n| n.text().unwrap_or("").trim().to_string())
            .collect();
        let values: Vec<f64> = child_text(node, "TABLE")?
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| Error::format("xmlbif", format!("{child}: {t}: {e}"))))
            .collect::<Result<_>>()?;
        let card = variables
            .iter()
            .find(|v| v.id() == child)
            .map(Variable::cardinality)
            .ok_or_else(|| Error::format("xmlbif", format!("definition for undeclared `{child}`")))?;
        if values.len() % card != 0 {
            return Err(Error::format(
                "xmlbif",
                format!("{child}: {} table values is not a multiple of {card}", values.len()),
            ));
        }
        let rows = values.chunks(card).map(<[f64]>::to_vec).collect();
        cpts.push(Cpt::new(child, parents, rows));
    }

    Ok(NetworkDocument { variables, cpts })
}

fn child_text(node: roxmltree::Node<'_, '_>, tag: &str) -> Result<String> {
    node.children()
        .find(|n| n.has_tag_name(tag))
        .map(|n| n.text().unwrap_or("").trim().to_string())
        .ok_or_else(|| Error::format("xmlbif", format!("missing <{tag}>")))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::fixtures::chain;

    #[test]
    fn round_trip_is_exact() {
        let net = chain();
        let xml = to_xmlbif(&net, "chain");
        let back = from_xmlbif(&xml).unwrap();
        assert_eq!(back, NetworkDocument::from_network(&net));
    }

    #[test]
    fn reads_foreign_layout() {
        let xml = r#"<?xml version="1.0"?>
<BIF VERSION="0.3"><NETWORK><NAME>n</NAME>
<VARIABLE TYPE="nature"><NAME>rain</NAME><OUTCOME>yes</OUTCOME><OUTCOME>no</OUTCOME><PROPERTY>position = (1,1)</PROPERTY></VARIABLE>
<VARIABLE TYPE="nature"><NAME>wet</NAME><OUTCOME>yes</OUTCOME><OUTCOME>no</OUTCOME></VARIABLE>
<DEFINITION><FOR>rain</FOR><TABLE>0.2 0.8</TABLE></DEFINITION>
<DEFINITION><FOR>wet</FOR><GIVEN>rain</GIVEN><TABLE>0.9 0.1
 0.05 0.95</TABLE></DEFINITION>
</NETWORK></BIF>"#;
        let net = from_xmlbif(xml).unwrap().into_network().unwrap();
        assert_eq!(net.cpt("wet").unwrap().row(1), &[0.05, 0.95]);
    }

    #[test]
    fn names_are_escaped() {
        let net = Network::new(
            vec![Variable::new("a<b", ["x&y", "z"]).unwrap()],
            vec![Cpt::prior("a<b", vec![0.25, 0.75])],
        )
        .unwrap();
        let back = from_xmlbif(&to_xmlbif(&net, "esc")).unwrap();
        assert_eq!(back.variables[0].states()[0], "x&y");
    }

    #[test]
    fn ragged_table_rejected() {
        let xml = r#"<BIF VERSION="0.3"><NETWORK>
<VARIABLE TYPE="nature"><NAME>a</NAME><OUTCOME>1</OUTCOME><OUTCOME>2</OUTCOME></VARIABLE>
<DEFINITION><FOR>a</FOR><TABLE>0.2 0.3 0.5</TABLE></DEFINITION></NETWORK></BIF>"#;
        assert!(from_xmlbif(xml).is_err());
    }
}
