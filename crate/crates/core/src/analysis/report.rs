use serde_json::{json, Map, Number, Value as Json};

use super::{EnergyVector, GeodesicResult};
use crate::store::VertexDictionary;
use crate::util::format_g12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(u64),
    Real(f64),
    Missing,
}

impl Value {
    fn tsv(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Real(v) => format_g12(*v),
            Value::Missing => "NA".to_string(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Int(v) => json!(v),
            // round through the 12-digit text so both formats agree
            Value::Real(v) => format_g12(*v)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Json::Null, Json::Number),
            Value::Missing => Json::Null,
        }
    }
}

impl From<Option<u32>> for Value {
    fn from(v: Option<u32>) -> Self {
        v.map_or(Value::Missing, |x| Value::Int(x.into()))
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Missing, Value::Real)
    }
}

/// Output of an analysis, printable as JSON or TSV with fixed ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metric: String,
    pub columns: Vec<String>,
    pub vertices: Vec<(String, Vec<Value>)>,
    pub scalars: Vec<(String, Value)>,
    /// Vertex-pair values such as distances; unreachable pairs are omitted.
    pub distances: Vec<(String, String, u32)>,
}

impl Report {
    pub fn new(metric: &str) -> Self {
        Report {
            metric: metric.to_string(),
            columns: Vec::new(),
            vertices: Vec::new(),
            scalars: Vec::new(),
            distances: Vec::new(),
        }
    }

    pub fn energy(metric: &str, v: &EnergyVector, dict: &VertexDictionary) -> Self {
        let mut r = Report::new(metric);
        r.columns.push(metric.to_string());
        r.vertices = dict
            .names()
            .iter()
            .zip(&v.values)
            .map(|(name, &x)| (name.clone(), vec![Value::Real(x)]))
            .collect();
        r
    }

    pub fn geodesics(g: &GeodesicResult, dict: &VertexDictionary) -> Self {
        let mut r = Report::new("geodesic");
        r.columns = ["eccentricity", "closeness", "reach"].map(String::from).to_vec();
        let names = dict.names();
        for (i, name) in names.iter().enumerate() {
            let row = vec![
                g.eccentricity[i].into(),
                g.closeness[i].into(),
                Value::Int(g.reach[i] as u64),
            ];
            r.vertices.push((name.clone(), row));
        }
        r.scalars = vec![("radius".into(), g.radius.into()), ("diameter".into(), g.diameter.into())];
        for (i, row) in g.distances.iter().enumerate() {
            for (j, d) in row.iter().enumerate() {
                if let (Some(d), true) = (d, i != j) {
                    r.distances.push((names[i].clone(), names[j].clone(), *d));
                }
            }
        }
        r
    }

    pub fn scalar(metric: &str, name: &str, v: f64) -> Self {
        let mut r = Report::new(metric);
        r.scalars.push((name.to_string(), Value::Real(v)));
        r
    }

    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("metric".into(), json!(self.metric));
        if !self.vertices.is_empty() {
            let mut vs = Map::new();
            for (name, row) in &self.vertices {
                let v = if self.columns.len() == 1 {
                    row[0].json()
                } else {
                    Json::Object(self.columns.iter().cloned().zip(row.iter().map(Value::json)).collect())
                };
                vs.insert(name.clone(), v);
            }
            obj.insert("vertices".into(), Json::Object(vs));
        }
        if !self.scalars.is_empty() {
            let s = self.scalars.iter().map(|(k, v)| (k.clone(), v.json())).collect();
            obj.insert("scalars".into(), Json::Object(s));
        }
        if !self.distances.is_empty() {
            let d = self.distances.iter().map(|(a, b, d)| json!([a, b, d])).collect();
            obj.insert("distances".into(), Json::Array(d));
        }
        let mut out = serde_json::to_string_pretty(&Json::Object(obj)).expect("serializable");
        out.push('\n');
        out
    }

    /// Sections separated by blank lines: per-vertex table, scalars, then
    /// pairwise distances, each with a header row.
    pub fn to_tsv(&self) -> String {
        let mut sections = Vec::new();
        if !self.vertices.is_empty() {
            let mut s = format!("vertex\t{}\n", self.columns.join("\t"));
            for (name, row) in &self.vertices {
                let cells: Vec<String> = row.iter().map(Value::tsv).collect();
                s.push_str(&format!("{name}\t{}\n", cells.join("\t")));
            }
            sections.push(s);
        }
        if !self.scalars.is_empty() {
            let mut s = String::from("scalar\tvalue\n");
            for (k, v) in &self.scalars {
                s.push_str(&format!("{k}\t{}\n", v.tsv()));
            }
            sections.push(s);
        }
        if !self.distances.is_empty() {
            let mut s = String::from("tail\thead\tdistance\n");
            for (a, b, d) in &self.distances {
                s.push_str(&format!("{a}\t{b}\t{d}\n"));
            }
            sections.push(s);
        }
        sections.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::shortest_paths;
    use crate::matrix::PathMatrix;

    fn dict(names: &[&str]) -> VertexDictionary {
        let mut d = VertexDictionary::new();
        names.iter().for_each(|n| {
            d.intern(n);
        });
        d
    }

    #[test]
    fn energy_json_is_flat() {
        let d = dict(&["a", "b", "c"]);
        let r = Report::energy("pagerank", &EnergyVector::new(vec![1.0 / 3.0; 3]), &d);
        let v: Json = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["vertices"]["b"], json!(0.333333333333));
        assert_eq!(r.to_tsv().lines().nth(1), Some("a\t0.333333333333"));
    }

    #[test]
    fn geodesic_sections() {
        let d = dict(&["x", "y"]);
        let g = shortest_paths(&PathMatrix::from_pairs(2, [(0, 1)]));
        let tsv = Report::geodesics(&g, &d).to_tsv();
        assert!(tsv.contains("x\t1\t1\t1\ny\tNA\tNA\t0\n"));
        assert!(tsv.contains("radius\t1\n"));
        assert!(tsv.ends_with("tail\thead\tdistance\nx\ty\t1\n"));
    }
}
