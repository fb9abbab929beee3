//! Exchange formats: polynomial and complex documents (JSON) and point-cloud
//! CSV. Floats are written in shortest round-trip form, so reading back what
//! was written is bit-exact.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amoeba::{CloudMeta, PointCloud};
use crate::error::{Error, Result};
use crate::poly::{Exponent, LaurentPoly, TLaurentPoly};
use crate::toric::LatticePolytope;
use crate::tropical::CornerLocusComplex;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyDoc {
    dim: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    exponent: Exponent,
    coeff: CoeffDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffDoc {
    Family { t_terms: Vec<TTermDoc> },
    Complex(ComplexDoc),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexDoc {
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TTermDoc {
    k: i32,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// A parsed polynomial document: plain, or a family in `t` when any
/// coefficient carries `t_terms`.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyInput {
    Plain(LaurentPoly),
    Family(TLaurentPoly),
}

impl PolyInput {
    pub fn dim(&self) -> usize {
        match self {
            PolyInput::Plain(f) => f.dim(),
            PolyInput::Family(f) => f.dim(),
        }
    }

    /// The family view; plain polynomials become constant families.
    pub fn into_family(self) -> TLaurentPoly {
        match self {
            PolyInput::Plain(f) => TLaurentPoly::constant_family(&f),
            PolyInput::Family(f) => f,
        }
    }

    /// The plain polynomial, specializing a family at `t = at` if given.
    pub fn into_plain(self, at: Option<Complex64>) -> Result<LaurentPoly> {
        match (self, at) {
            (PolyInput::Plain(f), _) => Ok(f),
            (PolyInput::Family(f), Some(a)) => f.specialize(a),
            (PolyInput::Family(f), None) if f.is_t_free() => f.specialize(Complex64::new(1.0, 0.0)),
            (PolyInput::Family(_), None) => Err(Error::InvalidArgument(
                "polynomial depends on t; give a value to specialize at".into(),
            )),
        }
    }
}

pub fn parse_polynomial(text: &str) -> Result<PolyInput> {
    let doc: PolyDoc = serde_json::from_str(text)?;
    if let Some(t) = doc.terms.iter().find(|t| t.exponent.dim() != doc.dim) {
        return Err(Error::DimensionMismatch {
            expected: doc.dim,
            found: t.exponent.dim(),
        });
    }
    let family = doc.terms.iter().any(|t| matches!(t.coeff, CoeffDoc::Family { .. }));
    if family {
        let triples = doc.terms.into_iter().flat_map(|t| {
            let e = t.exponent;
            let list: Vec<(i32, Complex64)> = match t.coeff {
                CoeffDoc::Complex(c) => vec![(0, Complex64::new(c.re, c.im))],
                CoeffDoc::Family { t_terms } => t_terms
                    .into_iter()
                    .map(|tt| (tt.k, Complex64::new(tt.re, tt.im)))
                    .collect(),
            };
            list.into_iter().map(move |(k, c)| (e.clone(), k, c))
        });
        Ok(PolyInput::Family(TLaurentPoly::new(doc.dim, triples)?))
    } else {
        let pairs = doc.terms.into_iter().map(|t| match t.coeff {
            CoeffDoc::Complex(c) => (t.exponent, Complex64::new(c.re, c.im)),
            CoeffDoc::Family { .. } => unreachable!(),
        });
        Ok(PolyInput::Plain(LaurentPoly::new(doc.dim, pairs)?))
    }
}

pub fn write_polynomial(f: &LaurentPoly) -> String {
    let doc = PolyDoc {
        dim: f.dim(),
        terms: f
            .terms()
            .map(|(m, a)| TermDoc {
                exponent: m.clone(),
                coeff: CoeffDoc::Complex(ComplexDoc { re: a.re, im: a.im }),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("polynomial documents serialize")
}

pub fn write_family(f: &TLaurentPoly) -> String {
    let doc = PolyDoc {
        dim: f.dim(),
        terms: f
            .terms()
            .map(|(m, inner)| TermDoc {
                exponent: m.clone(),
                coeff: CoeffDoc::Family {
                    t_terms: inner
                        .iter()
                        .map(|(k, c)| TTermDoc { k: *k, re: c.re, im: c.im })
                        .collect(),
                },
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("polynomial documents serialize")
}

pub fn write_complex(c: &CornerLocusComplex) -> String {
    serde_json::to_string_pretty(c).expect("complexes serialize")
}

pub fn parse_complex(text: &str) -> Result<CornerLocusComplex> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_polytope(text: &str) -> Result<LatticePolytope> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_polytope(p: &LatticePolytope) -> String {
    serde_json::to_string(p).expect("polytopes serialize")
}

/// CSV with a `# dim=n scaling=rho seed=s source=<id>` header line.
pub fn write_cloud_csv(cloud: &PointCloud) -> String {
    let mut s = format!(
        "# dim={} scaling={} seed={} source={}\n",
        cloud.dim(),
        cloud.meta.scaling,
        cloud.meta.seed,
        cloud.meta.source
    );
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{}", row.join(","));
    }
    s
}

pub fn read_cloud_csv(text: &str) -> Result<PointCloud> {
    let perr = |line: usize, message: String| Error::Parse {
        line,
        column: 1,
        message,
    };
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| perr(1, "missing header".into()))?;
    let header = header
        .strip_prefix("# ")
        .ok_or_else(|| perr(1, "header must start with '# '".into()))?;
    let mut dim = None;
    let mut scaling = 1.0;
    let mut seed = 0;
    let mut source = String::new();
    // source is last and may contain spaces
    let (fields, src) = match header.find("source=") {
        Some(i) => (&header[..i], Some(&header[i + 7..])),
        None => (header, None),
    };
    if let Some(s) = src {
        source = s.to_string();
    }
    for field in fields.split_whitespace() {
        let (k, v) = field
            .split_once('=')
            .ok_or_else(|| perr(1, format!("bad header field '{field}'")))?;
        let bad = |_| perr(1, format!("bad value for {k}"));
        match k {
            "dim" => dim = Some(v.parse::<usize>().map_err(|e| bad(e.to_string()))?),
            "scaling" => scaling = v.parse::<f64>().map_err(|e| bad(e.to_string()))?,
            "seed" => seed = v.parse::<u64>().map_err(|e| bad(e.to_string()))?,
            _ => return Err(perr(1, format!("unknown header field '{k}'"))),
        }
    }
    let dim = dim.ok_or_else(|| perr(1, "header lacks dim".into()))?;
    let mut points = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let p = line
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| perr(i + 1, e.to_string()))?;
        if p.len() != dim {
            return Err(perr(i + 1, format!("expected {dim} values, found {}", p.len())));
        }
        points.push(p);
    }
    let meta = CloudMeta {
        source,
        scaling,
        requested: points.len(),
        seed,
    };
    PointCloud::new(dim, points, meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE: &str = r#"{
  "dim": 2,
  "terms": [
    {"exponent": [1, 0], "coeff": {"re": 1, "im": 0}},
    {"exponent": [0, 1], "coeff": {"re": 1}},
    {"exponent": [0, 0], "coeff": {"re": 1, "im": 0}}
  ]
}"#;

    #[test]
    fn parses_plain_polynomials() {
        let PolyInput::Plain(f) = parse_polynomial(LINE).unwrap() else {
            panic!("expected a plain polynomial")
        };
        assert_eq!(f.len(), 3);
        assert_eq!(f.coeff(&Exponent::from([0, 1])), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn parses_families() {
        let text = r#"{"dim": 2, "terms": [
            {"exponent": [1, 0], "coeff": {"t_terms": [{"k": 1, "re": 1, "im": 0}]}},
            {"exponent": [0, 1], "coeff": {"t_terms": [{"k": -1, "re": 1, "im": 0}]}},
            {"exponent": [0, 0], "coeff": {"re": 1, "im": 0}}]}"#;
        let PolyInput::Family(f) = parse_polynomial(text).unwrap() else {
            panic!("expected a family")
        };
        let g = f.specialize(Complex64::new(0.5, 0.0)).unwrap();
        assert_eq!(g.coeff(&Exponent::from([0, 1])), Complex64::new(2.0, 0.0));
        assert!(PolyInput::Family(f.clone()).into_plain(None).is_err());
        let back = parse_polynomial(&write_family(&f)).unwrap();
        assert_eq!(back, PolyInput::Family(f));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_polynomial("{\"dim\": 2,\n \"terms\": [ {\"exponent\": [1, 0], \"coeff\": }]}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 2);
                assert!(column > 1);
            }
            e => panic!("unexpected {e:?}"),
        }
        let mismatch = r#"{"dim": 2, "terms": [{"exponent": [1], "coeff": {"re": 1}}]}"#;
        assert!(matches!(parse_polynomial(mismatch), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn polynomial_round_trip_is_bit_exact() {
        let vals = [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.30000000000000004];
        let f = LaurentPoly::new(
            2,
            vals.iter()
                .enumerate()
                .map(|(i, v)| (Exponent::from([i as i32, -(i as i32)]), Complex64::new(*v, -v / 7.0))),
        )
        .unwrap();
        let PolyInput::Plain(g) = parse_polynomial(&write_polynomial(&f)).unwrap() else {
            panic!()
        };
        for ((m1, a), (m2, b)) in f.terms().zip(g.terms()) {
            assert_eq!(m1, m2);
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn cloud_csv_round_trip() {
        let meta = CloudMeta {
            source: "amoeba of line".into(),
            scaling: 0.1,
            requested: 3,
            seed: 42,
        };
        let c = PointCloud::new(2, vec![vec![0.1, -1.0 / 3.0], vec![1e-300, 7.0]], meta).unwrap();
        let text = write_cloud_csv(&c);
        assert!(text.starts_with("# dim=2 scaling=0.1 seed=42 source=amoeba of line\n"));
        let back = read_cloud_csv(&text).unwrap();
        assert_eq!(back.meta.source, "amoeba of line");
        assert_eq!(back.meta.seed, 42);
        let a: Vec<&[f64]> = c.points().collect();
        let b: Vec<&[f64]> = back.points().collect();
        assert_eq!(a, b);
        assert!(matches!(read_cloud_csv("# dim=2\n1,2,3\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn complex_round_trip() {
        let t = crate::tropical::TropicalPolynomial::new(
            2,
            [([1, 0], 0.0), ([0, 1], 0.0), ([0, 0], 0.0)].map(|(m, c)| (Exponent::from(m), c)),
        )
        .unwrap();
        let c = t.corner_locus_2d().unwrap();
        let back = parse_complex(&write_complex(&c)).unwrap();
        assert_eq!(back, c);
    }
}
