//! JSON documents read and written by the CLI.
//!
//! Distances travel as exact rational strings (`"p/q"`, `"0"`, `"1"`). A
//! document is canonical when its points are sorted, every distance triple
//! lists its labels in sorted order, and the triples themselves are sorted;
//! canonical documents survive a parse/serialize round trip byte for byte.

use serde::{Deserialize, Serialize};
use urysohn_core::{Dist, Error, FiniteMetricSpace, PartialSemimetric, SequenceTemplate};

use crate::CliError;

/// Named subsets of a space's points used by the typed commands.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Roles {
    #[serde(rename = "A", default)]
    pub a: Vec<String>,
    #[serde(rename = "B", default)]
    pub b: Vec<String>,
    #[serde(rename = "C", default)]
    pub c: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_star: Option<String>,
}

/// A labeled point set with an explicit list of pairwise distances. Pairs
/// left out are undefined, which is fine for partial commands and an error
/// for metric ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub points: Vec<String>,
    pub distances: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<Roles>,
}

impl SpaceDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_partial(&self) -> Result<PartialSemimetric, CliError> {
        let mut p = PartialSemimetric::new(self.points.iter().cloned()).map_err(|e| field("points", e))?;
        for (i, (a, b, v)) in self.distances.iter().enumerate() {
            let v = Dist::parse(v).map_err(|e| field(&format!("distances[{i}][2]"), e.into()))?;
            p.define(a, b, v).map_err(|e| field(&format!("distances[{i}]"), e))?;
        }
        Ok(p)
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace, CliError> {
        self.to_partial()?.into_metric().map_err(CliError::Core)
    }

    /// Canonical document for the defined pairs of `p`.
    pub fn from_partial(p: &PartialSemimetric, roles: Option<Roles>) -> Self {
        let triples = p.defined_pairs().map(|(i, j, v)| (p.label(i), p.label(j), v));
        Self::canonical(p.names(), triples, roles)
    }

    pub fn from_space(s: &FiniteMetricSpace, roles: Option<Roles>) -> Self {
        let n = s.len();
        let triples = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (s.label(i), s.label(j), s.d(i, j))));
        Self::canonical(s.names(), triples, roles)
    }

    fn canonical<'a>(
        names: &[String],
        triples: impl Iterator<Item = (&'a str, &'a str, &'a Dist)>,
        roles: Option<Roles>,
    ) -> Self {
        let mut points = names.to_vec();
        points.sort();
        let mut distances: Vec<_> = triples
            .map(|(a, b, v)| {
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                (a.to_string(), b.to_string(), v.to_string())
            })
            .collect();
        distances.sort();
        SpaceDocument { points, distances, roles }
    }

    pub fn roles(&self) -> Roles {
        self.roles.clone().unwrap_or_default()
    }
}

/// A template of an indiscernible sequence of k-tuples: within-tuple
/// distances `delta` and cross-tuple distances `eps`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateDocument {
    pub k: usize,
    pub delta: Vec<Vec<String>>,
    pub eps: Vec<Vec<String>>,
}

impl TemplateDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_template(&self) -> Result<SequenceTemplate, CliError> {
        if self.delta.len() != self.k {
            return Err(field("k", Error::Dimension(format!("k = {} but delta has {} rows", self.k, self.delta.len()))));
        }
        let matrix = |name: &str, rows: &[Vec<String>]| -> Result<Vec<Vec<Dist>>, CliError> {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, v)| Dist::parse(v).map_err(|e| field(&format!("{name}[{i}][{j}]"), e.into())))
                        .collect()
                })
                .collect()
        };
        let t = SequenceTemplate::new(matrix("delta", &self.delta)?, matrix("eps", &self.eps)?)?;
        Ok(t)
    }

    pub fn from_template(t: &SequenceTemplate) -> Self {
        let strings = |rows: Vec<Vec<Dist>>| rows.iter().map(|r| r.iter().map(Dist::to_string).collect()).collect();
        TemplateDocument { k: t.k(), delta: strings(t.delta_rows()), eps: strings(t.eps_rows()) }
    }
}

fn field(name: &str, source: Error) -> CliError {
    CliError::Field { field: name.to_string(), source }
}
