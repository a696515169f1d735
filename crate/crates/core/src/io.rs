//! JSON schemas for groups, lattices, presentations, certificates and
//! reports. All schemas carry a "schema": 1 field; serialization is
//! deterministic for fixed inputs.

use crate::decomp::{canonical_class_order, PermutationCertificate, Verdict};
use crate::group::{PGroup, Subgroup};
use crate::hnn::HnnPresentation;
use crate::lattice::Lattice;
use crate::linalg::IntMat;
use crate::weiss::{HypothesisEvidence, HypothesisVerdict, WeissReport};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::sync::Arc;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupJson {
    pub schema: u32,
    pub p: u64,
    pub degree: usize,
    /// generators in cycle notation: each generator is a list of cycles
    pub generators: Vec<Vec<Vec<usize>>>,
}

pub fn group_from_json(v: &Value) -> Result<Arc<PGroup>> {
    let parsed: GroupJson = serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidInput(format!("group: {e}")))?;
    if parsed.schema != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "group: unsupported schema {}",
            parsed.schema
        )));
    }
    let gens: Vec<Vec<usize>> = parsed
        .generators
        .iter()
        .map(|cycles| permutation_from_cycles(cycles, parsed.degree))
        .collect::<Result<_>>()?;
    PGroup::from_permutations_with_prime(&gens, parsed.degree, parsed.p)
}

pub fn permutation_from_cycles(cycles: &[Vec<usize>], degree: usize) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    for cycle in cycles {
        if cycle.is_empty() {
            continue;
        }
        for &pt in cycle {
            if pt >= degree {
                return Err(Error::InvalidInput(format!(
                    "cycle point {pt} exceeds degree {degree}"
                )));
            }
        }
        for w in 0..cycle.len() {
            let from = cycle[w];
            let to = cycle[(w + 1) % cycle.len()];
            if perm[from] != from {
                return Err(Error::InvalidInput("cycles are not disjoint".into()));
            }
            perm[from] = to;
        }
    }
    Ok(perm)
}

pub fn group_to_json(g: &PGroup) -> Value {
    let gens: Vec<Vec<Vec<usize>>> = g
        .permutation_images()
        .is_empty()
        .then(Vec::new)
        .unwrap_or_else(|| {
            g.generators()
                .iter()
                .map(|&gi| cycles_of(&g.permutation_images()[gi]))
                .collect()
        });
    json!({
        "schema": SCHEMA_VERSION,
        "p": g.p,
        "degree": g.permutation_images().first().map_or(0, Vec::len),
        "order": g.order(),
        "generators": gens,
    })
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut cycles = Vec::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cycle = vec![start];
        seen[start] = true;
        let mut cur = perm[start];
        while cur != start {
            seen[cur] = true;
            cycle.push(cur);
            cur = perm[cur];
        }
        cycles.push(cycle);
    }
    cycles
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LatticeJson {
    pub schema: u32,
    /// group fixture name, or "inline" when the group travels separately
    pub group: String,
    pub rank: usize,
    /// generator name "g<i>" -> matrix; remaining elements are computed by
    /// word evaluation
    pub action: std::collections::BTreeMap<String, IntMat>,
}

pub fn lattice_from_json(v: &Value, group: &Arc<PGroup>) -> Result<Lattice> {
    let parsed: LatticeJson = serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidInput(format!("lattice: {e}")))?;
    if parsed.schema != SCHEMA_VERSION {
        return Err(Error::InvalidInput(format!(
            "lattice: unsupported schema {}",
            parsed.schema
        )));
    }
    let mut gen_action = Vec::new();
    for (name, mat) in &parsed.action {
        let idx: usize = name
            .strip_prefix('g')
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                Error::InvalidInput(format!("lattice: bad generator name {name:?}, want g<i>"))
            })?;
        let gen = *group.generators().get(idx).ok_or_else(|| {
            Error::InvalidInput(format!("lattice: group has no generator {idx}"))
        })?;
        if mat.rows() != parsed.rank || mat.cols() != parsed.rank {
            return Err(Error::InvalidInput(format!(
                "lattice: matrix for {name} is not {0}x{0}",
                parsed.rank
            )));
        }
        gen_action.push((gen, mat.clone()));
    }
    if gen_action.len() != group.generators().len() {
        return Err(Error::InvalidInput(format!(
            "lattice: need matrices for all {} generators",
            group.generators().len()
        )));
    }
    Lattice::from_generator_action(group.clone(), &gen_action)
}

pub fn lattice_to_json(m: &Lattice, group_name: &str) -> Value {
    let action: std::collections::BTreeMap<String, &IntMat> = m
        .group
        .generators()
        .iter()
        .enumerate()
        .map(|(i, &g)| (format!("g{i}"), m.action(g)))
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "group": group_name,
        "rank": m.rank,
        "action": action,
    })
}

/// Canonical label of a subgroup class.
pub fn class_label(idx: usize) -> String {
    format!("K{idx}")
}

pub fn parse_class_label(s: &str) -> Option<usize> {
    s.strip_prefix('K').and_then(|t| t.parse().ok())
}

pub fn certificate_to_json(g: &PGroup, cert: &PermutationCertificate) -> Value {
    let classes = g.classify_subgroups();
    let mults: Vec<Value> = canonical_class_order(g)
        .into_iter()
        .filter(|&ci| cert.multiplicities[ci] > 0)
        .map(|ci| {
            json!({
                "class": class_label(ci),
                "subgroup": classes.class_reps[ci].elements,
                "index": g.order() / classes.class_reps[ci].elements.len(),
                "multiplicity": cert.multiplicities[ci],
            })
        })
        .collect();
    json!({
        "schema": SCHEMA_VERSION,
        "multiplicities": mults,
        "basis": cert.change_of_basis,
    })
}

pub fn certificate_from_json(v: &Value, g: &Arc<PGroup>) -> Result<PermutationCertificate> {
    let schema = v.get("schema").and_then(Value::as_u64).unwrap_or(0);
    if schema != SCHEMA_VERSION as u64 {
        return Err(Error::InvalidInput("certificate: unsupported schema".into()));
    }
    let classes = g.classify_subgroups();
    let mut multiplicities = vec![0usize; classes.class_reps.len()];
    let entries = v
        .get("multiplicities")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidInput("certificate: missing multiplicities".into()))?;
    for e in entries {
        let label = e
            .get("class")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::InvalidInput("certificate: missing class label".into()))?;
        let ci = parse_class_label(label)
            .filter(|&ci| ci < multiplicities.len())
            .ok_or_else(|| Error::InvalidInput(format!("certificate: bad class label {label:?}")))?;
        let m = e
            .get("multiplicity")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("certificate: missing multiplicity".into()))?;
        multiplicities[ci] = m as usize;
    }
    let basis: IntMat = serde_json::from_value(
        v.get("basis")
            .cloned()
            .ok_or_else(|| Error::InvalidInput("certificate: missing basis".into()))?,
    )
    .map_err(|e| Error::InvalidInput(format!("certificate basis: {e}")))?;
    Ok(PermutationCertificate {
        multiplicities,
        change_of_basis: basis,
    })
}

pub fn verdict_to_json(m: &Lattice, verdict: &Verdict) -> Value {
    match verdict {
        Verdict::IsPermutation(cert) => json!({
            "verdict": "IsPermutation",
            "certificate": certificate_to_json(&m.group, cert),
        }),
        Verdict::NotPermutation { witness_basis, witness } => json!({
            "verdict": "NotPermutation",
            "witness": {
                "rank": witness.rank,
                "basis": witness_basis,
            },
        }),
    }
}

pub fn subgroup_to_json(g: &PGroup, s: &Subgroup) -> Value {
    json!({
        "elements": s.elements,
        "order": s.elements.len(),
        "index": g.order() / s.elements.len(),
        "normal": s.is_normal,
    })
}

fn hypothesis_to_json(g: &PGroup, h: &HypothesisVerdict) -> Value {
    match h {
        HypothesisVerdict::Holds(ev) => {
            let evidence = match ev {
                HypothesisEvidence::FreeRestriction(cert) => json!({
                    "kind": "free-restriction",
                    "blocks": cert.multiplicities.iter().sum::<usize>(),
                }),
                HypothesisEvidence::TrivialPart { basis, provenance } => json!({
                    "kind": "trivial-part",
                    "rank": basis.cols(),
                    "basis": basis,
                    "provenance": format!("{provenance:?}"),
                }),
                HypothesisEvidence::InvariantsPermutation(cert) => json!({
                    "kind": "invariants-permutation",
                    "multiplicities": cert
                        .multiplicities
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m > 0)
                        .map(|(ci, &m)| json!({"class": class_label(ci), "multiplicity": m}))
                        .collect::<Vec<_>>(),
                }),
            };
            let _ = g;
            json!({"verdict": "holds", "evidence": evidence})
        }
        HypothesisVerdict::Fails(reason) => json!({"verdict": "fails", "reason": reason}),
        HypothesisVerdict::Inconclusive => json!({"verdict": "inconclusive"}),
    }
}

pub fn weiss_report_to_json(m: &Lattice, report: &WeissReport) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "hypothesis_i": hypothesis_to_json(&m.group, &report.hypothesis_i),
        "hypothesis_ii": hypothesis_to_json(&m.group, &report.hypothesis_ii),
        "conclusion": verdict_to_json(m, &report.conclusion),
        "consistent": report.consistent,
    })
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub schema: u32,
    pub base: String,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub subgroup: Vec<usize>,
    pub multiplicity: usize,
}

pub fn presentation_to_json(pres: &HnnPresentation, base_name: &str) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "base": base_name,
        "edges": pres
            .edges
            .iter()
            .map(|(k, m)| json!({"subgroup": k.elements, "multiplicity": m}))
            .collect::<Vec<_>>(),
        "letters": pres.letter_names,
    })
}

pub fn presentation_from_json(v: &Value, base: &Arc<PGroup>) -> Result<HnnPresentation> {
    let parsed: PresentationJson = serde_json::from_value(v.clone())
        .map_err(|e| Error::InvalidInput(format!("presentation: {e}")))?;
    if parsed.schema != SCHEMA_VERSION {
        return Err(Error::InvalidInput("presentation: unsupported schema".into()));
    }
    let mut edges = Vec::new();
    let mut letter_names = Vec::new();
    for e in &parsed.edges {
        let sub = base
            .subgroup(e.subgroup.clone())
            .map_err(|_| Error::InvalidInput("presentation: edge subgroup invalid".into()))?;
        if e.multiplicity == 0 {
            return Err(Error::InvalidInput("presentation: zero multiplicity edge".into()));
        }
        let ci = base.class_index(&sub)?;
        for j in 0..e.multiplicity {
            letter_names.push(format!("x_K{ci}_{j}"));
        }
        edges.push((sub, e.multiplicity));
    }
    Ok(HnnPresentation {
        base: base.clone(),
        edges,
        letter_names,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn group_json_roundtrip() {
        let v = json!({
            "schema": 1,
            "p": 2,
            "degree": 4,
            "generators": [[[0,1],[2,3]], [[0,2],[1,3]]],
        });
        let g = group_from_json(&v).unwrap();
        assert_eq!(g.order(), 4);
        let back = group_to_json(&g);
        let g2 = group_from_json(&back).unwrap();
        assert_eq!(g2.order(), 4);
    }

    #[test]
    fn group_json_rejects_bad_input() {
        // wrong p
        let v = json!({"schema": 1, "p": 3, "degree": 2, "generators": [[[0,1]]]});
        assert!(group_from_json(&v).is_err());
        // overlapping cycles
        let v = json!({"schema": 1, "p": 2, "degree": 3, "generators": [[[0,1],[1,2]]]});
        assert!(group_from_json(&v).is_err());
        // bad schema
        let v = json!({"schema": 2, "p": 2, "degree": 2, "generators": [[[0,1]]]});
        assert!(group_from_json(&v).is_err());
    }

    #[test]
    fn lattice_json_roundtrip_paper_fixture() {
        let g = fixtures::group("c2xc2").unwrap();
        let m = fixtures::paper_example().unwrap();
        let v = lattice_to_json(&m, "c2xc2");
        let m2 = lattice_from_json(&v, &g).unwrap();
        assert_eq!(m2.rank, 3);
        for e in 0..4 {
            assert_eq!(m.action(e), m2.action(e));
        }
    }

    #[test]
    fn certificate_json_roundtrip() {
        let (cert, g) = fixtures::certificate("c2-mixed").unwrap();
        let v = certificate_to_json(&g, &cert);
        let cert2 = certificate_from_json(&v, &g).unwrap();
        assert_eq!(cert.multiplicities, cert2.multiplicities);
        assert_eq!(cert.change_of_basis, cert2.change_of_basis);
    }
}
