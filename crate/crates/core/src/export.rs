//! GEXF and CSV writers, plus a GEXF reader for round trips.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event};
use quick_xml::{Reader, XmlVersion};

use crate::community::Partition;
use crate::cooccur::KeywordGraph;
use crate::corpus::BucketKey;
use crate::error::{Error, Result};
use crate::lexicon::KeywordSet;
use crate::report::RunReport;

pub const GEXF_NAMESPACE: &str = "http://www.gexf.net/1.2draft";

fn check_cover(g: &KeywordGraph, p: &Partition) -> Result<()> {
    if p.len() != g.vertex_count() {
        return Err(Error::PartitionMismatch {
            expected: g.vertex_count(),
            got: p.len(),
        });
    }
    Ok(())
}

/// Serialises a graph and its partition as a GEXF 1.2 document. Nodes are
/// identified by keyword and listed in vertex order; edges follow
/// [`KeywordGraph::edges`]. No timestamps are written, so equal inputs give
/// equal bytes.
pub fn gexf_string(g: &KeywordGraph, p: &Partition) -> Result<String> {
    check_cover(g, p)?;
    let mut s = String::new();
    let description = match g.bucket() {
        Some(b) => format!("keyword co-occurrence network {b}"),
        None => "keyword co-occurrence network".to_string(),
    };
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(s, "<gexf xmlns=\"{GEXF_NAMESPACE}\" version=\"1.2\">").unwrap();
    s.push_str("  <meta>\n    <creator>keynet</creator>\n");
    writeln!(s, "    <description>{}</description>", escape(description.as_str())).unwrap();
    s.push_str("  </meta>\n");
    s.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    s.push_str("    <attributes class=\"node\">\n");
    s.push_str("      <attribute id=\"0\" title=\"community\" type=\"integer\"/>\n");
    s.push_str("      <attribute id=\"1\" title=\"strength\" type=\"integer\"/>\n");
    s.push_str("    </attributes>\n");
    s.push_str("    <nodes>\n");
    for (i, word) in g.keywords().words().iter().enumerate() {
        let w = escape(word.as_str());
        writeln!(s, "      <node id=\"{w}\" label=\"{w}\">").unwrap();
        s.push_str("        <attvalues>\n");
        writeln!(s, "          <attvalue for=\"0\" value=\"{}\"/>", p.community_of(i)).unwrap();
        writeln!(s, "          <attvalue for=\"1\" value=\"{}\"/>", g.strength(i)).unwrap();
        s.push_str("        </attvalues>\n");
        s.push_str("      </node>\n");
    }
    s.push_str("    </nodes>\n");
    s.push_str("    <edges>\n");
    for (id, (i, j, w)) in g.edges().enumerate() {
        writeln!(
            s,
            "      <edge id=\"{id}\" source=\"{}\" target=\"{}\" weight=\"{w}\"/>",
            escape(g.keywords().word(i)),
            escape(g.keywords().word(j))
        )
        .unwrap();
    }
    s.push_str("    </edges>\n");
    s.push_str("  </graph>\n");
    s.push_str("</gexf>\n");
    Ok(s)
}

pub fn export_gexf(g: &KeywordGraph, p: &Partition, path: &Path) -> Result<()> {
    let doc = gexf_string(g, p)?;
    std::fs::write(path, doc)?;
    Ok(())
}

fn xml_err(e: impl std::fmt::Display) -> Error {
    Error::Xml(e.to_string())
}

fn attributes(e: &BytesStart<'_>) -> Result<HashMap<String, String>> {
    let mut out = HashMap::new();
    for a in e.attributes() {
        let a = a.map_err(xml_err)?;
        let key = a.key.local_name().as_ref().to_string();
        let value = a
            .normalized_value(XmlVersion::Explicit1_0)
            .map_err(xml_err)?
            .into_owned();
        out.insert(key, value);
    }
    Ok(out)
}

fn required<'a>(attrs: &'a HashMap<String, String>, key: &str, element: &str) -> Result<&'a str> {
    attrs
        .get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Xml(format!("<{element}> without {key:?}")))
}

/// Parses a document written by [`gexf_string`] (or any GEXF with integer
/// edge weights). Returns the partition when every node carries a
/// `community` value.
pub fn read_gexf(text: &str) -> Result<(KeywordGraph, Option<Partition>)> {
    let mut reader = Reader::from_str(text);
    let mut attr_titles: HashMap<String, String> = HashMap::new();
    let mut words: Vec<String> = Vec::new();
    let mut communities: Vec<Option<usize>> = Vec::new();
    let mut edges: Vec<(String, String, u64)> = Vec::new();
    let mut in_node_attributes = false;

    loop {
        let event = reader.read_event().map_err(xml_err)?;
        match &event {
            Event::Start(e) | Event::Empty(e) => {
                let name = e.local_name();
                let attrs = attributes(e)?;
                match name.as_ref() {
                    "attributes" => in_node_attributes = attrs.get("class").map(String::as_str) == Some("node"),
                    "attribute" if in_node_attributes => {
                        let id = required(&attrs, "id", "attribute")?.to_string();
                        let title = required(&attrs, "title", "attribute")?.to_string();
                        attr_titles.insert(id, title);
                    }
                    "node" => {
                        words.push(required(&attrs, "id", "node")?.to_string());
                        communities.push(None);
                    }
                    "attvalue" => {
                        let key = required(&attrs, "for", "attvalue")?;
                        if attr_titles.get(key).map(String::as_str) == Some("community") {
                            let value = required(&attrs, "value", "attvalue")?;
                            let c = value
                                .parse()
                                .map_err(|_| Error::Xml(format!("bad community {value:?}")))?;
                            if let Some(slot) = communities.last_mut() {
                                *slot = Some(c);
                            }
                        }
                    }
                    "edge" => {
                        let weight = match attrs.get("weight") {
                            None => 1,
                            Some(w) => parse_weight(w)?,
                        };
                        edges.push((
                            required(&attrs, "source", "edge")?.to_string(),
                            required(&attrs, "target", "edge")?.to_string(),
                            weight,
                        ));
                    }
                    _ => {}
                }
            }
            Event::End(e) if e.local_name().as_ref() == "attributes" => in_node_attributes = false,
            Event::Eof => break,
            _ => {}
        }
    }

    let keywords = KeywordSet::from_words(words)?;
    let indexed = edges
        .iter()
        .map(|(a, b, w)| {
            let find = |k: &str| {
                keywords
                    .index_of(k)
                    .ok_or_else(|| Error::Xml(format!("edge to unknown node {k:?}")))
            };
            Ok((find(a)?, find(b)?, *w))
        })
        .collect::<Result<Vec<_>>>()?;
    let graph = KeywordGraph::from_edges(keywords, &indexed)?;
    let partition = communities
        .iter()
        .copied()
        .collect::<Option<Vec<usize>>>()
        .filter(|c| !c.is_empty())
        .map(|c| Partition::from_labels(&c));
    Ok((graph, partition))
}

fn parse_weight(raw: &str) -> Result<u64> {
    if let Ok(w) = raw.parse::<u64>() {
        return Ok(w);
    }
    match raw.parse::<f64>() {
        Ok(w) if w >= 0.0 && w.fract() == 0.0 && w <= u64::MAX as f64 => Ok(w as u64),
        _ => Err(Error::Xml(format!("edge weight {raw:?} is not a non-negative integer"))),
    }
}

fn csv_writer<W: Write>(out: W, style: csv::QuoteStyle) -> csv::Writer<W> {
    csv::WriterBuilder::new().quote_style(style).from_writer(out)
}

/// `source,target,weight`, one row per edge with keywords quoted.
pub fn write_edges_csv<W: Write>(g: &KeywordGraph, out: W) -> Result<()> {
    let mut w = csv_writer(out, csv::QuoteStyle::NonNumeric);
    w.write_record(["source", "target", "weight"])?;
    for (i, j, weight) in g.edges() {
        w.write_record([g.keywords().word(i), g.keywords().word(j), &weight.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `keyword,frequency,strength` in vertex order.
pub fn write_vertices_csv<W: Write>(g: &KeywordGraph, out: W) -> Result<()> {
    let mut w = csv_writer(out, csv::QuoteStyle::NonNumeric);
    w.write_record(["keyword", "frequency", "strength"])?;
    for (i, word) in g.keywords().words().iter().enumerate() {
        w.write_record([word, &g.keywords().frequency(i).to_string(), &g.strength(i).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `keyword,community` in vertex order.
pub fn write_partition_csv<W: Write>(g: &KeywordGraph, p: &Partition, out: W) -> Result<()> {
    check_cover(g, p)?;
    let mut w = csv_writer(out, csv::QuoteStyle::NonNumeric);
    w.write_record(["keyword", "community"])?;
    for (i, word) in g.keywords().words().iter().enumerate() {
        w.write_record([word, &p.community_of(i).to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Full adjacency matrix with a `keyword` header cell and keyword row labels.
pub fn write_matrix_csv<W: Write>(g: &KeywordGraph, out: W) -> Result<()> {
    let mut w = csv_writer(out, csv::QuoteStyle::Necessary);
    let words = g.keywords().words();
    w.write_record(std::iter::once("keyword").chain(words.iter().map(String::as_str)))?;
    for (i, word) in words.iter().enumerate() {
        let row: Vec<String> = g.row(i).iter().map(u64::to_string).collect();
        w.write_record(std::iter::once(word.as_str()).chain(row.iter().map(String::as_str)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn matrix_csv_string(g: &KeywordGraph) -> Result<String> {
    let mut buf = Vec::new();
    write_matrix_csv(g, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Config(e.to_string()))
}

/// Accounts x buckets grid of community counts with a trailing `mean`
/// column. Buckets that are missing, or present without keywords, are left
/// blank and do not enter the mean.
pub fn write_heatmap_csv<W: Write>(reports: &[RunReport], out: W) -> Result<()> {
    if let Some(first) = reports.first() {
        if let Some(other) = reports.iter().find(|r| r.period != first.period) {
            return Err(Error::MixedPeriods(first.period.to_string(), other.period.to_string()));
        }
    }
    let columns: BTreeSet<&BucketKey> = reports
        .iter()
        .flat_map(|r| r.buckets.iter().map(|b| &b.bucket))
        .collect();
    let mut w = csv_writer(out, csv::QuoteStyle::Necessary);
    w.write_record(
        std::iter::once("account")
            .chain(columns.iter().map(|b| b.label()))
            .chain(std::iter::once("mean")),
    )?;
    for r in reports {
        let cells: BTreeMap<&BucketKey, usize> = r
            .buckets
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| (&b.bucket, b.community_count))
            .collect();
        let mut row = vec![r.label.clone()];
        row.extend(
            columns
                .iter()
                .map(|b| cells.get(b).map(usize::to_string).unwrap_or_default()),
        );
        let mean = if cells.is_empty() {
            String::new()
        } else {
            format!("{:?}", cells.values().sum::<usize>() as f64 / cells.len() as f64)
        };
        row.push(mean);
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_heatmap_csv(reports: &[RunReport], path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_heatmap_csv(reports, &mut out)?;
    out.flush()?;
    Ok(())
}
