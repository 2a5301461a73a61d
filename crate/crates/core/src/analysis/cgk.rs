use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebroid::{Algebroid, Element};
use crate::lie::{BundleAction, LieBundle};

use super::grouplikes::solve_grouplikes;
use super::operators::build_prim_action;
use super::primitives::{prim_bundle, solve_primitives, PrimBasis};
use super::spectral::{spectral_from_grouplikes, SpectralGroupoid};
use super::theta::{build_theta, ThetaChecks, ThetaMap};
use super::AnalysisError;

pub const DEFAULT_THETA_SAMPLES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Iso,
    NotIso,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Iso => "ISO",
            Verdict::NotIso => "NOT ISO",
        })
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// `Prim(A)` is `S`-invariant and of constant finite rank.
    #[serde(rename = "(i)")]
    PrimRegular,
    /// `A_x` is the direct sum of the `D(A)_x`-submodules generated by the
    /// arrows at `x`.
    #[serde(rename = "(ii)")]
    DirectSum,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::PrimRegular => "(i) Prim(A) is S-invariant of constant finite rank",
            Hypothesis::DirectSum => "(ii) A_x is the direct sum of the D(A)_x-modules generated by its arrows",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralSummary {
    pub arrows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iso_to_input: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaSummary {
    pub rank: usize,
    pub dim: usize,
    pub domain_dim: usize,
}

/// The decision whether `A ≅ Gsp(A)⋉U(𝔟(Prim A))` through `Θ`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CgkReport {
    pub prim_rank: BTreeMap<String, usize>,
    pub constant_rank: bool,
    pub s_invariant: bool,
    pub anchor_trivial: bool,
    pub spectral: SpectralSummary,
    pub theta: BTreeMap<String, ThetaSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homomorphism: Option<ThetaChecks>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_hypothesis: Option<Hypothesis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Primitives,
    Grouplikes,
    Spectral,
    PrimBundle,
    PrimAction,
    Theta,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Primitives => "primitive solve",
            Stage::Grouplikes => "grouplike solve",
            Stage::Spectral => "spectral groupoid",
            Stage::PrimBundle => "Prim bundle",
            Stage::PrimAction => "Prim action",
            Stage::Theta => "Θ",
        })
    }
}

#[derive(Debug, Error)]
#[error("{stage}: {error}")]
pub struct CgkError {
    pub stage: Stage,
    #[source]
    pub error: AnalysisError,
}

/// Every intermediate object of the decision, for callers that need more
/// than the report.
#[derive(Debug)]
pub struct CgkOutcome {
    pub report: CgkReport,
    pub prim: PrimBasis,
    pub spectral: SpectralGroupoid,
    pub bundle: Option<LieBundle>,
    pub action: Option<BundleAction>,
    pub theta: Option<ThetaMap>,
}

pub fn cgk_decide(alg: &dyn Algebroid, samples: usize, seed: u64) -> Result<CgkReport, CgkError> {
    Ok(cgk_pipeline(alg, samples, seed)?.report)
}

pub fn cgk_pipeline(alg: &dyn Algebroid, samples: usize, seed: u64) -> Result<CgkOutcome, CgkError> {
    let at = |stage: Stage| move |error: AnalysisError| CgkError { stage, error };
    let names = alg.base().names();
    let prim = solve_primitives(alg).map_err(at(Stage::Primitives))?;
    let grouplikes = solve_grouplikes(alg).map_err(at(Stage::Grouplikes))?;
    let gsp = spectral_from_grouplikes(alg, &grouplikes).map_err(at(Stage::Spectral))?;
    let iso_to_input = match alg.as_convolution() {
        Some(conv) => Some(gsp.isomorphic_to(conv.groupoid()).map_err(at(Stage::Spectral))?),
        None => None,
    };
    let prim_rank: BTreeMap<String, usize> = names.iter().cloned().zip(prim.per_point_rank.iter().copied()).collect();
    let constant_rank = prim.per_point_rank.windows(2).all(|w| w[0] == w[1]);
    let mut report = CgkReport {
        prim_rank,
        constant_rank,
        s_invariant: prim.flags.s_invariant,
        anchor_trivial: prim.flags.anchor_trivial,
        spectral: SpectralSummary {
            arrows: gsp.len(),
            iso_to_input,
        },
        theta: BTreeMap::new(),
        homomorphism: None,
        verdict: Verdict::NotIso,
        failed_hypothesis: None,
        notes: Vec::new(),
        witness: None,
    };
    if !constant_rank {
        report.notes.push(format!(
            "Prim rank varies over the base ({}); hypothesis (i) fails under the global reading, Θ is built anyway",
            rank_list(&report.prim_rank)
        ));
    }
    if !prim.flags.s_invariant || !prim.flags.anchor_trivial {
        report.failed_hypothesis = Some(Hypothesis::PrimRegular);
        report.witness = s_witness(alg, &prim);
        report
            .notes
            .push("Θ is not defined: Prim(A) is not S-invariant with trivial anchor".to_string());
        return Ok(CgkOutcome {
            report,
            prim,
            spectral: gsp,
            bundle: None,
            action: None,
            theta: None,
        });
    }
    let bundle = prim_bundle(alg, &prim).map_err(at(Stage::PrimBundle))?;
    let action = build_prim_action(alg, &gsp, &prim, &bundle).map_err(at(Stage::PrimAction))?;
    let theta = build_theta(alg, &gsp, &prim, &bundle, &action).map_err(at(Stage::Theta))?;
    let checks = theta.check_homomorphism(alg, samples, seed).map_err(at(Stage::Theta))?;
    if !checks.passed() {
        report.notes.push(
            "Θ failed a sampled homomorphism check; bijectivity alone does not make it an isomorphism".to_string(),
        );
    }
    report.homomorphism = Some(checks);
    for (x, p) in theta.points.iter().enumerate() {
        report.theta.insert(
            names[x].clone(),
            ThetaSummary {
                rank: p.rank,
                dim: p.dim,
                domain_dim: p.domain_dim,
            },
        );
    }
    if theta.is_bijective() {
        report.verdict = Verdict::Iso;
    } else {
        report.failed_hypothesis = Some(if constant_rank {
            Hypothesis::DirectSum
        } else {
            Hypothesis::PrimRegular
        });
        report.witness = theta_witness(alg, &theta);
    }
    Ok(CgkOutcome {
        report,
        prim,
        spectral: gsp,
        bundle: Some(bundle),
        action: Some(action),
        theta: Some(theta),
    })
}

fn rank_list(ranks: &BTreeMap<String, usize>) -> String {
    ranks
        .iter()
        .map(|(p, r)| format!("{p}: {r}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn s_witness(alg: &dyn Algebroid, prim: &PrimBasis) -> Option<String> {
    prim.basis.iter().find_map(|x| {
        let sx = alg.antipode(x);
        (!prim.contains(&sx)).then(|| format!("S({}) = {} is not primitive", alg.format(x), alg.format(&sx)))
    })
}

fn theta_witness(alg: &dyn Algebroid, theta: &ThetaMap) -> Option<String> {
    theta.points.iter().enumerate().find_map(|(x, p)| {
        let name = alg.base().name(x);
        if let Some(i) = p.missing {
            Some(format!(
                "{} in A_{name} is outside the image of Θ_{name} (rank {} < dim {})",
                alg.format(&Element::unit(i)),
                p.rank,
                p.dim
            ))
        } else {
            p.kernel.as_ref().map(|k| {
                format!(
                    "Θ_{name} has a kernel: Θ({}) = 0 (rank {} < domain dim {})",
                    theta.format_domain(k),
                    p.rank,
                    p.domain_dim
                )
            })
        }
    })
}

impl CgkReport {
    pub fn is_iso(&self) -> bool {
        self.verdict == Verdict::Iso
    }

    /// Plain-text rendering for the terminal.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("Prim rank: {}", rank_list(&self.prim_rank)),
            format!("constant rank: {}", self.constant_rank),
            format!("S-invariant: {}", self.s_invariant),
            format!("anchor trivial: {}", self.anchor_trivial),
        ];
        let iso = match self.spectral.iso_to_input {
            Some(true) => ", isomorphic to the input groupoid",
            Some(false) => ", NOT isomorphic to the input groupoid",
            None => "",
        };
        out.push(format!("spectral arrows: {}{iso}", self.spectral.arrows));
        for (p, t) in &self.theta {
            out.push(format!(
                "Θ_{p}: rank {} (dim A_{p} = {}, domain dim = {})",
                t.rank, t.dim, t.domain_dim
            ));
        }
        if let Some(h) = &self.homomorphism {
            let status = if h.passed() { "passed" } else { "FAILED" };
            out.push(format!("Θ homomorphism checks ({} samples): {status}", h.samples));
            if let Some(w) = &h.witness {
                out.push(format!("  {w}"));
            }
        }
        for n in &self.notes {
            out.push(format!("note: {n}"));
        }
        out.push(format!("verdict: {}", self.verdict));
        if let Some(h) = self.failed_hypothesis {
            out.push(format!("failed hypothesis: {h}"));
        }
        if let Some(w) = &self.witness {
            out.push(format!("witness: {w}"));
        }
        out
    }
}
