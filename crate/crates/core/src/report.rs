//! Exact support ratios and the JSON interchange schemas.
//!
//! Everything a run reports is reproducible arithmetic: ratios are reduced
//! fractions (never floats), counters that can exceed 64 bits travel as
//! strings, and certificates carry enough structure to be re-verified
//! against the original graph without trusting any stated totals.

use crate::error::{Error, Result};
use crate::flow::{boundary, gain, integer_boundary, EdgeLabelling, FlowCertificate, IntegerFlow, LabellingData};
use crate::graph::{MultiGraph, Orientation};
use crate::group::{GroupElem, GroupSpec, Z3};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub const CERT_SCHEMA: &str = "flowforge/certificate/v1";
pub const SOLVE_SCHEMA: &str = "flowforge/solve/v1";
pub const SWEEP_SCHEMA: &str = "flowforge/sweep/v1";
pub const BOUND_SCHEMA: &str = "flowforge/bound/v1";
pub const REDUCE_SCHEMA: &str = "flowforge/reduce/v1";

/// A reduced non-negative fraction, printed `p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den != 0, "ratio denominator must be nonzero");
        let g = gcd(num, den);
        Ratio { num: num / g, den: den / g }
    }

    /// Support over edge count. An edgeless graph counts as fully
    /// supported (1/1): there is nothing left unsupported.
    pub fn of_support(support: usize, num_edges: usize) -> Ratio {
        if num_edges == 0 {
            Ratio::new(1, 1)
        } else {
            Ratio::new(support as u64, num_edges as u64)
        }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Exact comparison against p/q without overflow for any inputs the
    /// library produces.
    pub fn at_least(&self, p: u64, q: u64) -> bool {
        assert!(q != 0);
        (self.num as u128) * (q as u128) >= (p as u128) * (self.den as u128)
    }

    pub fn equals(&self, p: u64, q: u64) -> bool {
        assert!(q != 0);
        (self.num as u128) * (q as u128) == (p as u128) * (self.den as u128)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Ratio) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Ratio) -> std::cmp::Ordering {
        ((self.num as u128) * (other.den as u128)).cmp(&((other.num as u128) * (self.den as u128)))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Ratio {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ratio> {
        let (p, q) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("bad ratio {s}") })?;
        let p: u64 =
            p.parse().map_err(|_| Error::Parse { line: 1, msg: format!("bad ratio {s}") })?;
        let q: u64 =
            q.parse().map_err(|_| Error::Parse { line: 1, msg: format!("bad ratio {s}") })?;
        if q == 0 {
            return Err(Error::Parse { line: 1, msg: format!("zero denominator in {s}") });
        }
        Ok(Ratio::new(p, q))
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ratio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Ratio, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

/// One oriented edge of a certificate with its assigned value: residues
/// per group factor for modular flows, a single integer otherwise.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeValueJson {
    pub tail: usize,
    pub head: usize,
    pub value: Vec<i64>,
}

/// A self-contained flow certificate. Edge ids are positional. All
/// derived fields (support, gain, ratio) are recomputed on verification;
/// stated values that disagree mean tampering.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub schema: String,
    /// `modular` or `integer`.
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<u8>>,
    /// Strict value bound for integer flows (values lie in (-bound, bound)).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    pub num_vertices: usize,
    pub edges: Vec<EdgeValueJson>,
    /// Target boundary residues mod 3, one per vertex.
    pub mu: Vec<u8>,
    pub support: usize,
    pub gain: i64,
    pub ratio: Ratio,
}

impl CertificateJson {
    pub fn from_certificate(cert: &FlowCertificate) -> CertificateJson {
        let (kind, group, bound, values): (_, _, _, Vec<Vec<i64>>) = match &cert.data {
            LabellingData::Modular(phi) => (
                "modular",
                Some(phi.group().orders().to_vec()),
                None,
                phi.values()
                    .iter()
                    .map(|v| v.residues(phi.group()).iter().map(|&r| r as i64).collect())
                    .collect(),
            ),
            LabellingData::Integer(f) => {
                ("integer", None, Some(f.k), f.values.iter().map(|&v| vec![v]).collect())
            }
        };
        CertificateJson {
            schema: CERT_SCHEMA.to_string(),
            kind: kind.to_string(),
            group,
            bound,
            num_vertices: cert.mu.len(),
            edges: cert
                .edges
                .iter()
                .zip(values)
                .map(|(&(tail, head), value)| EdgeValueJson { tail, head, value })
                .collect(),
            mu: cert.mu.iter().map(|m| m.0).collect(),
            support: cert.support,
            gain: cert.gain,
            ratio: cert.ratio,
        }
    }
}

/// Result of checking a certificate against a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Valid,
    /// Internally inconsistent: values, totals, or boundary do not match.
    Tampered(String),
    /// The certificate describes a different graph.
    WrongGraph(String),
}

/// Re-derive everything a certificate claims. The certificate's own
/// edge orientations are honoured (they are part of the witness); the
/// underlying unordered edges must match the graph positionally.
pub fn verify_certificate(cert: &CertificateJson, g: &MultiGraph) -> VerifyOutcome {
    use VerifyOutcome::*;
    if cert.schema != CERT_SCHEMA {
        return Tampered(format!("unknown schema {}", cert.schema));
    }
    if cert.num_vertices != g.num_vertices() {
        return WrongGraph(format!(
            "certificate has {} vertices, graph has {}",
            cert.num_vertices,
            g.num_vertices()
        ));
    }
    if cert.edges.len() != g.num_edges() {
        return WrongGraph(format!(
            "certificate has {} edges, graph has {}",
            cert.edges.len(),
            g.num_edges()
        ));
    }
    for (e, ev) in cert.edges.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        if (ev.tail, ev.head) != (u, v) && (ev.head, ev.tail) != (u, v) {
            return WrongGraph(format!("edge {e} joins different endpoints in the graph"));
        }
    }
    if cert.mu.len() != cert.num_vertices {
        return Tampered("mu length differs from vertex count".into());
    }
    let dirs: Vec<(usize, usize)> = cert.edges.iter().map(|ev| (ev.tail, ev.head)).collect();
    let cg = match MultiGraph::new(cert.num_vertices, &dirs) {
        Ok(cg) => cg,
        Err(e) => return Tampered(format!("bad edge list: {e}")),
    };
    let o = cg.default_orientation();
    match cert.kind.as_str() {
        "modular" => verify_modular(cert, &cg, &o),
        "integer" => verify_integer(cert, &cg, &o),
        other => Tampered(format!("unknown certificate kind {other}")),
    }
}

fn verify_modular(cert: &CertificateJson, g: &MultiGraph, o: &Orientation) -> VerifyOutcome {
    use VerifyOutcome::*;
    let Some(orders) = &cert.group else {
        return Tampered("modular certificate without a group".into());
    };
    let group = match GroupSpec::new(orders) {
        Ok(g) => g,
        Err(e) => return Tampered(format!("bad group: {e}")),
    };
    let mut phi = EdgeLabelling::zero(group.clone(), g.num_edges());
    for (e, ev) in cert.edges.iter().enumerate() {
        let mut residues = Vec::new();
        for (i, &r) in ev.value.iter().enumerate() {
            if i >= group.num_factors() || r < 0 || r >= group.orders()[i] as i64 {
                return Tampered(format!("edge {e} carries an out-of-range value"));
            }
            residues.push(r as u8);
        }
        if residues.len() != group.num_factors() {
            return Tampered(format!("edge {e} value has wrong arity"));
        }
        phi.set(e, group.elem(&residues).expect("residues validated above"));
    }
    let target: Vec<GroupElem> = if group.orders() == [3] {
        cert.mu.iter().map(|&r| Z3(r % 3).to_elem()).collect()
    } else {
        if cert.mu.iter().any(|&r| r % 3 != 0) {
            return Tampered("nonzero boundary stated for a non-Z3 group".into());
        }
        vec![group.zero(); cert.num_vertices]
    };
    let bal = boundary(g, o, &phi).expect("lengths checked");
    for v in 0..cert.num_vertices {
        if bal[v] != target[v] {
            return Tampered(format!("boundary mismatch at vertex {v}"));
        }
    }
    finish_totals(cert, phi.support(), g.num_edges())
}

fn verify_integer(cert: &CertificateJson, g: &MultiGraph, o: &Orientation) -> VerifyOutcome {
    use VerifyOutcome::*;
    let Some(bound) = cert.bound else {
        return Tampered("integer certificate without a bound".into());
    };
    if cert.mu.iter().any(|&r| r % 3 != 0) {
        return Tampered("integer flows certify zero boundaries only".into());
    }
    let mut values = Vec::new();
    for (e, ev) in cert.edges.iter().enumerate() {
        let [v] = ev.value.as_slice() else {
            return Tampered(format!("edge {e} should carry exactly one integer"));
        };
        if v.abs() >= bound {
            return Tampered(format!("edge {e} value {v} breaks the bound {bound}"));
        }
        values.push(*v);
    }
    let flow = IntegerFlow { k: bound, values };
    let bal = integer_boundary(g, o, &flow).expect("lengths checked");
    if let Some(v) = bal.iter().position(|&b| b != 0) {
        return Tampered(format!("integer boundary nonzero at vertex {v}"));
    }
    let support = flow.values.iter().filter(|&&v| v != 0).count();
    finish_totals(cert, support, g.num_edges())
}

fn finish_totals(cert: &CertificateJson, support: usize, m: usize) -> VerifyOutcome {
    use VerifyOutcome::*;
    if cert.support != support {
        return Tampered(format!("stated support {} but recomputed {support}", cert.support));
    }
    if cert.gain != gain(support, m) {
        return Tampered(format!("stated gain {} but recomputed {}", cert.gain, gain(support, m)));
    }
    if cert.ratio != Ratio::of_support(support, m) {
        return Tampered(format!(
            "stated ratio {} but recomputed {}",
            cert.ratio,
            Ratio::of_support(support, m)
        ));
    }
    Valid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{is_flow_with_boundary, WeightedGraph};

    #[test]
    fn ratio_reduction_and_display() {
        assert_eq!(Ratio::new(10, 12).to_string(), "5/6");
        assert_eq!(Ratio::of_support(0, 6).to_string(), "0/1");
        assert_eq!(Ratio::of_support(0, 0).to_string(), "1/1");
        assert_eq!(Ratio::of_support(14, 15).to_string(), "14/15");
        assert!(Ratio::new(5, 6).at_least(5, 6));
        assert!(Ratio::new(5, 6).at_least(3, 4));
        assert!(!Ratio::new(2, 3).at_least(5, 6));
        assert!(Ratio::new(4, 6).equals(2, 3));
        assert!(Ratio::new(3, 4) > Ratio::new(5, 7));
    }

    #[test]
    fn ratio_serde_round_trip() {
        let r: Ratio = serde_json::from_str("\"10/12\"").unwrap();
        assert_eq!(r, Ratio::new(5, 6));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"5/6\"");
        assert!(serde_json::from_str::<Ratio>("\"5\"").is_err());
        assert!(serde_json::from_str::<Ratio>("\"5/0\"").is_err());
    }

    fn triangle_certificate() -> (MultiGraph, CertificateJson) {
        let g = MultiGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let o = g.default_orientation();
        let group = GroupSpec::z3();
        let mut phi = EdgeLabelling::zero(group.clone(), 3);
        for e in 0..3 {
            phi.set(e, group.elem(&[1]).unwrap());
        }
        let wg = WeightedGraph::zero(g.clone());
        let _ = o;
        let cert = is_flow_with_boundary(&wg, &phi).unwrap();
        (g, CertificateJson::from_certificate(&cert))
    }

    #[test]
    fn verify_accepts_honest_certificate() {
        let (g, json) = triangle_certificate();
        assert_eq!(verify_certificate(&json, &g), VerifyOutcome::Valid);
        // survives a serde round trip byte-for-byte
        let text = serde_json::to_string_pretty(&json).unwrap();
        let back: CertificateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        assert_eq!(verify_certificate(&back, &g), VerifyOutcome::Valid);
    }

    #[test]
    fn verify_flags_tampering() {
        let (g, honest) = triangle_certificate();

        let mut t = honest.clone();
        t.edges[0].value = vec![2];
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));

        let mut t = honest.clone();
        t.support = 2;
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));

        let mut t = honest.clone();
        t.gain += 1;
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));

        let mut t = honest.clone();
        t.ratio = Ratio::new(1, 2);
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));

        let mut t = honest.clone();
        t.edges[1].value = vec![7];
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));
    }

    #[test]
    fn verify_flags_wrong_graph() {
        let (_, json) = triangle_certificate();
        let other = MultiGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(matches!(verify_certificate(&json, &other), VerifyOutcome::WrongGraph(_)));
        let rewired = MultiGraph::new(3, &[(0, 1), (1, 2), (1, 2)]).unwrap();
        assert!(matches!(verify_certificate(&json, &rewired), VerifyOutcome::WrongGraph(_)));
    }

    #[test]
    fn verify_honours_reversed_orientation() {
        // same graph, certificate stores the edge reversed with the
        // matching value: still a valid witness
        let (g, mut json) = triangle_certificate();
        let (t, h) = (json.edges[0].tail, json.edges[0].head);
        json.edges[0] = EdgeValueJson { tail: h, head: t, value: vec![2] };
        assert_eq!(verify_certificate(&json, &g), VerifyOutcome::Valid);
    }

    #[test]
    fn verify_integer_certificates() {
        let g = MultiGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let json = CertificateJson {
            schema: CERT_SCHEMA.into(),
            kind: "integer".into(),
            group: None,
            bound: Some(3),
            num_vertices: 3,
            edges: vec![
                EdgeValueJson { tail: 0, head: 1, value: vec![1] },
                EdgeValueJson { tail: 1, head: 2, value: vec![1] },
                EdgeValueJson { tail: 2, head: 0, value: vec![1] },
            ],
            mu: vec![0, 0, 0],
            support: 3,
            gain: gain(3, 3),
            ratio: Ratio::new(1, 1),
        };
        assert_eq!(verify_certificate(&json, &g), VerifyOutcome::Valid);

        let mut t = json.clone();
        t.edges[0].value = vec![4];
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));

        let mut t = json.clone();
        t.edges[0].value = vec![-2];
        assert!(matches!(verify_certificate(&t, &g), VerifyOutcome::Tampered(_)));
    }
}
