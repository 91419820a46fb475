//! Witness documents: one JSON object per line, verification recomputed on emit and on load.

use std::collections::BTreeMap;

use crownful::generators::crown;
use crownful::minors::{is_valid_model, replay_butterfly, ButterflyWitness, DirectedModel, Subdivision};
use crownful::quasiwide::{Dichotomy, ScatteredWitness};
use crownful::solvers::{DominationInstance, SolveOutcome, Variant, Witness};
use crownful::{Digraph, VertexSet};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Payload {
    Model(DirectedModel),
    Subdivision(Subdivision),
    Butterfly(ButterflyWitness),
    Scattered(ScatteredWitness),
    Crown { order: usize, depth: usize, model: DirectedModel },
    Dominating { set: VertexSet, independent: bool },
    Outbranching(Witness),
    Independent(VertexSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDocument {
    #[serde(flatten)]
    pub payload: Payload,
    pub params: BTreeMap<String, usize>,
    pub verified: bool,
}

/// Graphs a document is checked against. Model-like payloads need the pattern too.
pub struct Inputs<'a> {
    pub host: &'a Digraph,
    pub pattern: Option<&'a Digraph>,
}

impl WitnessDocument {
    /// Builds a document and stamps it with a fresh verification result.
    pub fn new(payload: Payload, params: BTreeMap<String, usize>, inputs: &Inputs) -> Self {
        let mut doc = WitnessDocument { payload, params, verified: false };
        doc.verified = doc.check(inputs);
        doc
    }

    fn param(&self, key: &str) -> Option<usize> {
        self.params.get(key).copied()
    }

    /// Recomputes verification from the payload, ignoring the stored flag.
    pub fn check(&self, inputs: &Inputs) -> bool {
        let g = inputs.host;
        match &self.payload {
            Payload::Model(m) => inputs.pattern.is_some_and(|p| is_valid_model(p, g, m)),
            Payload::Subdivision(s) => inputs.pattern.is_some_and(|p| s.verify(p, g)),
            Payload::Butterfly(w) => inputs.pattern.is_some_and(|p| replay_butterfly(p, g, w)),
            Payload::Scattered(w) => {
                w.verify(g)
                    && self.param("d").is_none_or(|d| d == w.radius)
                    && self.param("m").is_none_or(|m| m == w.set.len())
                    && self.param("s_budget").is_none_or(|s| w.deleted.len() <= s)
            }
            Payload::Crown { order, depth, model } => {
                crown(*order).is_ok()
                    && Dichotomy::Crown { order: *order, depth: *depth, model: model.clone() }.verify(g)
            }
            Payload::Dominating { set, independent } => {
                let variant = if *independent { Variant::IndependentDominating } else { Variant::Dominating };
                self.instance(g).is_some_and(|inst| inst.satisfies(variant, set))
            }
            Payload::Outbranching(w) => self.instance(g).is_some_and(|inst| {
                SolveOutcome::found(w.clone(), false).certifies(&inst, Variant::OutBranching)
            }),
            Payload::Independent(set) => {
                self.instance(g).is_some_and(|inst| inst.satisfies(Variant::Independent, set))
            }
        }
    }

    fn instance(&self, g: &Digraph) -> Option<DominationInstance> {
        let k = self.param("k")?;
        Some(DominationInstance::new(g.clone(), k).with_radius(self.param("d").unwrap_or(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_keeps_fields() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let inputs = Inputs { host: &g, pattern: None };
        let params = BTreeMap::from([("k".to_string(), 2), ("d".to_string(), 1)]);
        let doc = WitnessDocument::new(
            Payload::Dominating { set: VertexSet::from(vec![0, 2]), independent: false },
            params,
            &inputs,
        );
        assert!(doc.verified);
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with(r#"{"kind":"dominating","payload":"#));
        let back: WitnessDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn tampering_is_caught() {
        let g = Digraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let inputs = Inputs { host: &g, pattern: None };
        let params = BTreeMap::from([("k".to_string(), 1)]);
        let doc = WitnessDocument::new(
            Payload::Dominating { set: VertexSet::from(vec![0]), independent: false },
            params,
            &inputs,
        );
        assert!(!doc.verified);
    }
}
