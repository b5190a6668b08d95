//! The certification pipeline and the ambient-dimension formula for metric
//! graphs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abundancy::{check_non_superabundant, NonSuperabundance};
use crate::curve::{
    check_balancing, check_smoothness, first_betti, skeleton, three_coloring_order,
    validate_embedding, MetricGraph, SmoothnessReport, TropicalCurve, ValidationReport,
};
use crate::error::{Error, Result};
use crate::fan::{base_exponent, build_fan, recession_fan, verify_fan_axioms, ConeLabel, Fan, FanCheck};
use crate::lattice::LatticeVector;
use crate::special_fiber::{arithmetic_genus, construct_witness, verify_witness, C0Witness, WitnessReport};

pub const SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = concat!("tropcert ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The hypotheses of the sufficient criterion hold and the special
    /// fiber was constructed. A refusal makes no claim either way.
    RealizableBySufficientCriterion,
    Refused,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Embedding,
    Balancing,
    Smoothness,
    ThreeColorability,
    NonSuperabundance,
    FanAxioms,
    Witness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringCheck {
    pub passed: bool,
    pub order: Option<Vec<usize>>,
    /// Vertices left when peeling stalls.
    pub stalled: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSummary {
    pub ambient: usize,
    pub cones: usize,
    pub rays: usize,
    pub maximal: usize,
    pub vertex_rays: usize,
    pub edge_cones: usize,
    pub ray_cones: usize,
    /// Recession directions in `N`, height dropped.
    pub recession_rays: Vec<LatticeVector>,
    pub axioms: FanCheck,
}

impl FanSummary {
    pub fn of(f: &Fan, axioms: FanCheck) -> FanSummary {
        let n = f.ambient - 1;
        let recession_rays = f
            .cones
            .iter()
            .filter(|c| matches!(c.label, ConeLabel::Recession(_)))
            .map(|c| LatticeVector::new(c.generators[0].coords()[..n].to_vec()))
            .collect();
        FanSummary {
            ambient: f.ambient,
            cones: f.cones.len(),
            rays: f.rays().len(),
            maximal: f.maximal_cones().len(),
            vertex_rays: f.count(|l| matches!(l, ConeLabel::Vertex(_))),
            edge_cones: f.count(|l| matches!(l, ConeLabel::Edge(_))),
            ray_cones: f.count(|l| matches!(l, ConeLabel::Ray(_))),
            recession_rays,
            axioms,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanSummaries {
    pub total: FanSummary,
    pub recession: FanSummary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multiplicities {
    pub weights: BTreeMap<usize, u64>,
    pub all_one: bool,
    /// Bounded edges with weight other than one.
    pub flagged: Vec<usize>,
}

/// Outcomes of the checks that were reached; later ones stay `None` after
/// a refusal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub embedding: Option<ValidationReport>,
    pub balancing: Option<ValidationReport>,
    pub smoothness: Option<SmoothnessReport>,
    pub three_colorability: Option<ColoringCheck>,
    pub non_superabundance: Option<NonSuperabundance>,
    pub fan_axioms: Option<FanSummaries>,
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub check: CheckName,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub tool_version: String,
    pub seed: u64,
    pub curve_hash: String,
    pub verdict: Verdict,
    pub refusal: Option<Refusal>,
    pub checks: Checks,
    pub multiplicities: Multiplicities,
    #[serde(with = "crate::json::int")]
    pub base_exponent: BigInt,
    pub first_betti: Option<usize>,
    pub bounded_edges: usize,
    pub skeleton: Option<MetricGraph>,
    pub witness: Option<C0Witness>,
    pub marked_points: Option<usize>,
    pub arithmetic_genus: Option<usize>,
}

impl Certificate {
    pub fn is_realizable(&self) -> bool {
        self.verdict == Verdict::RealizableBySufficientCriterion
    }
}

/// SHA-256 of the canonical JSON form: sorted keys, reduced rationals.
pub fn curve_hash(c: &TropicalCurve) -> String {
    let value = serde_json::to_value(c).expect("curves serialize");
    let text = serde_json::to_string(&value).expect("values serialize");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Per-curve seed for batch runs.
pub fn derive_seed(master: u64, hash: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(hash.as_bytes());
    let digest = h.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn edge_multiplicities(c: &TropicalCurve) -> Multiplicities {
    let weights: BTreeMap<usize, u64> = c.edges.iter().map(|e| e.weight).enumerate().collect();
    let flagged: Vec<usize> = weights
        .iter()
        .filter(|(_, &w)| w != 1)
        .map(|(&e, _)| e)
        .collect();
    Multiplicities {
        weights,
        all_one: flagged.is_empty(),
        flagged,
    }
}

/// `max(3, max_v deg(v) - 1)` with legs counted in the degree.
pub fn ambient_dimension_for_graph(g: &MetricGraph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let top = (0..g.vertices).map(|v| g.degree(v)).max().unwrap_or(0);
    Ok(top.saturating_sub(1).max(3))
}

struct Run {
    cert: Certificate,
}

impl Run {
    fn refuse(mut self, check: CheckName, reason: impl Into<String>) -> Certificate {
        self.cert.refusal = Some(Refusal {
            check,
            reason: reason.into(),
        });
        self.cert
    }
}

/// Runs every check in order and stops at the first failure.
pub fn certify_realizability(c: &TropicalCurve, seed: u64) -> Certificate {
    let mut run = Run {
        cert: Certificate {
            schema: SCHEMA,
            tool_version: TOOL_VERSION.to_string(),
            seed,
            curve_hash: curve_hash(c),
            verdict: Verdict::Refused,
            refusal: None,
            checks: Checks::default(),
            multiplicities: edge_multiplicities(c),
            base_exponent: base_exponent(c),
            first_betti: None,
            bounded_edges: c.edges.len(),
            skeleton: None,
            witness: None,
            marked_points: None,
            arithmetic_genus: None,
        },
    };
    let checks = &mut run.cert.checks;

    let embedding = validate_embedding(c);
    let passed = embedding.passed;
    checks.embedding = Some(embedding);
    if !passed {
        return run.refuse(CheckName::Embedding, "curve is not a valid embedded complex");
    }

    let balancing = check_balancing(c);
    let passed = balancing.passed;
    checks.balancing = Some(balancing);
    if !passed {
        return run.refuse(CheckName::Balancing, "some vertex is unbalanced");
    }

    let smoothness = check_smoothness(c);
    let passed = smoothness.report.passed;
    checks.smoothness = Some(smoothness);
    if !passed {
        return run.refuse(CheckName::Smoothness, "some vertex star is not smooth");
    }

    let order = match three_coloring_order(c) {
        Ok(order) => {
            checks.three_colorability = Some(ColoringCheck {
                passed: true,
                order: Some(order.clone()),
                stalled: Vec::new(),
            });
            order
        }
        Err(e) => {
            let stalled = match &e {
                Error::NotThreeColorable { witness } => witness.clone(),
                _ => Vec::new(),
            };
            checks.three_colorability = Some(ColoringCheck {
                passed: false,
                order: None,
                stalled,
            });
            return run.refuse(CheckName::ThreeColorability, e.to_string());
        }
    };

    let skel = match skeleton(c) {
        Ok(g) => g,
        Err(e) => return run.refuse(CheckName::NonSuperabundance, e.to_string()),
    };
    run.cert.first_betti = first_betti(&skel).ok();
    run.cert.skeleton = Some(skel);
    let checks = &mut run.cert.checks;
    match check_non_superabundant(c) {
        Ok((_, ns)) => {
            let surjective = ns.surjective;
            let reason = format!("abundancy rank {} < {}", ns.rank, ns.required);
            checks.non_superabundance = Some(ns);
            if !surjective {
                return run.refuse(CheckName::NonSuperabundance, reason);
            }
        }
        Err(e) => return run.refuse(CheckName::NonSuperabundance, e.to_string()),
    }

    let fans = build_fan(c).and_then(|f| {
        let r = recession_fan(c)?;
        Ok(FanSummaries {
            total: FanSummary::of(&f, verify_fan_axioms(&f)?),
            recession: FanSummary::of(&r, verify_fan_axioms(&r)?),
        })
    });
    match fans {
        Ok(s) => {
            let ok = s.total.axioms.ok && s.recession.axioms.ok;
            checks.fan_axioms = Some(s);
            if !ok {
                return run.refuse(CheckName::FanAxioms, "cones overlap outside a common face");
            }
        }
        Err(e) => return run.refuse(CheckName::FanAxioms, e.to_string()),
    }

    let witness = match construct_witness(c, &order, seed) {
        Ok(w) => w,
        Err(e) => return run.refuse(CheckName::Witness, e.to_string()),
    };
    let report = verify_witness(c, &witness);
    let ok = report.ok;
    checks.witness = Some(report);
    run.cert.marked_points = Some(witness.marked_points.len());
    run.cert.arithmetic_genus = arithmetic_genus(&witness).ok();
    run.cert.witness = Some(witness);
    if !ok {
        return run.refuse(CheckName::Witness, "constructed special fiber failed verification");
    }
    run.cert.verdict = Verdict::RealizableBySufficientCriterion;
    run.cert
}

/// Certifies curves in parallel, each with a seed derived from the master
/// seed and its hash. Output order follows input order.
pub fn certify_batch(curves: &[TropicalCurve], master_seed: u64) -> Vec<Certificate> {
    curves
        .par_iter()
        .map(|c| certify_realizability(c, derive_seed(master_seed, &curve_hash(c))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::RatVector;

    #[test]
    fn hexagon_certificate() {
        let cert = certify_realizability(&fixtures::hexagon(), 7);
        assert!(cert.is_realizable(), "{:?}", cert.refusal);
        assert_eq!(cert.base_exponent, BigInt::from(1));
        assert_eq!(cert.first_betti, Some(1));
        assert_eq!(cert.bounded_edges, 6);
        let ns = cert.checks.non_superabundance.as_ref().unwrap();
        assert_eq!((ns.rank, ns.kernel_dim, ns.expected_dim), (2, 4, 4));
        let fans = cert.checks.fan_axioms.as_ref().unwrap();
        assert_eq!(fans.recession.recession_rays.len(), 6);
        assert_eq!(cert.marked_points, Some(6));
        assert_eq!(cert.arithmetic_genus, Some(1));
        assert!(cert.multiplicities.all_one);
    }

    #[test]
    fn planar_cycle_in_space_is_refused() {
        let cert = certify_realizability(&fixtures::hexagon_in_space(), 0);
        assert_eq!(cert.verdict, Verdict::Refused);
        let refusal = cert.refusal.unwrap();
        assert_eq!(refusal.check, CheckName::NonSuperabundance);
        assert_eq!(refusal.reason, "abundancy rank 2 < 3");
        assert!(cert.checks.smoothness.unwrap().report.passed);
        assert!(cert.witness.is_none());
    }

    #[test]
    fn unbalanced_refusal_names_the_check() {
        let c = TropicalCurve::new(2, vec![RatVector::from_i64(&[0, 0])])
            .with_ray(0, &[1, 0])
            .with_ray(0, &[0, 1]);
        let cert = certify_realizability(&c, 0);
        assert_eq!(cert.refusal.unwrap().check, CheckName::Balancing);
        assert!(!cert.checks.balancing.unwrap().passed);
        assert!(cert.checks.smoothness.is_none());
    }

    #[test]
    fn non_smooth_refusal() {
        let cert = certify_realizability(&fixtures::domino(), 0);
        assert_eq!(cert.refusal.unwrap().check, CheckName::Smoothness);
    }

    #[test]
    fn hashing_is_canonical() {
        let a = curve_hash(&fixtures::hexagon());
        assert_eq!(a.len(), 64);
        assert_eq!(a, curve_hash(&fixtures::hexagon()));
        assert_ne!(a, curve_hash(&fixtures::tropical_line()));
        assert_ne!(derive_seed(0, &a), derive_seed(1, &a));
    }

    #[test]
    fn batch_matches_sequential_runs() {
        let curves: Vec<TropicalCurve> = fixtures::named_fixtures().into_iter().map(|(_, c)| c).collect();
        let batch = certify_batch(&curves, 5);
        for (c, cert) in curves.iter().zip(&batch) {
            let seed = derive_seed(5, &curve_hash(c));
            assert_eq!(cert, &certify_realizability(c, seed));
        }
    }

    #[test]
    fn ambient_dimension() {
        let star = |legs: usize| (0..legs).fold(MetricGraph::new(1), |g, _| g.with_leg(0));
        assert_eq!(ambient_dimension_for_graph(&star(4)).unwrap(), 3);
        assert_eq!(ambient_dimension_for_graph(&star(6)).unwrap(), 5);
        let two = MetricGraph::new(2);
        assert_eq!(ambient_dimension_for_graph(&two), Err(Error::Disconnected));
    }

    #[test]
    fn multiplicities() {
        let mut c = fixtures::two_vertex();
        assert!(edge_multiplicities(&c).all_one);
        c.edges[0].weight = 2;
        let m = edge_multiplicities(&c);
        assert_eq!(m.flagged, vec![0]);
        assert!(edge_multiplicities(&fixtures::tropical_line()).weights.is_empty());
    }
}
