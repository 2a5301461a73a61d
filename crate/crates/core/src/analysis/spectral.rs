use crate::algebroid::{Algebroid, Element};
use crate::groupoid::{groupoid_isomorphic, Arrow, ArrowId, FiniteGroupoid, PointId, DEFAULT_ISO_ARROW_BOUND};

use super::grouplikes::{solve_grouplikes, Grouplike};
use super::AnalysisError;

/// The groupoid of `S`-invariant grouplike elements, one arrow per
/// grouplike `ξ ∈ A_y` with target `y`.
#[derive(Clone, Debug)]
pub struct SpectralGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Representative of each arrow in `A`.
    pub representatives: Vec<Element>,
    /// For constructed algebroids, the input arrow supporting each
    /// representative.
    pub input_arrows: Option<Vec<ArrowId>>,
}

/// The point `x` with `ρ(ξ)(1_x)(y) = ε(ξ·1_x)(y) = 1`.
fn source_of(alg: &dyn Algebroid, xi: &Grouplike) -> Result<PointId, AnalysisError> {
    let mut found = None;
    for x in alg.base().points() {
        let value = alg.counit(&alg.mul(&xi.element, &alg.unit_at(x))?).at(xi.point).clone();
        if value.is_one() {
            if found.is_some() {
                found = None;
                break;
            }
            found = Some(x);
        } else if !value.is_zero() {
            found = None;
            break;
        }
    }
    found.ok_or_else(|| AnalysisError::SourceUndetermined {
        element: alg.format(&xi.element),
    })
}

pub fn build_spectral_groupoid(alg: &dyn Algebroid) -> Result<SpectralGroupoid, AnalysisError> {
    let grouplikes = solve_grouplikes(alg)?;
    spectral_from_grouplikes(alg, &grouplikes)
}

pub fn spectral_from_grouplikes(
    alg: &dyn Algebroid,
    grouplikes: &[Vec<Grouplike>],
) -> Result<SpectralGroupoid, AnalysisError> {
    let mut arrows = Vec::new();
    let mut reps = Vec::new();
    let mut input = Vec::new();
    for (y, list) in grouplikes.iter().enumerate() {
        for (k, xi) in list.iter().filter(|g| g.s_invariant).enumerate() {
            let src = source_of(alg, xi)?;
            arrows.push(Arrow {
                id: format!("{}:{}", alg.base().name(y), k),
                src,
                tgt: y,
            });
            reps.push(xi.element.clone());
            input.push(xi.arrow);
        }
    }
    for y in alg.base().points() {
        let unit = alg.unit_at(y);
        if !reps.contains(&unit) {
            return Err(AnalysisError::MissingUnit {
                point: alg.base().name(y).to_string(),
            });
        }
    }
    let mut triples = Vec::new();
    for g in 0..arrows.len() {
        for h in 0..arrows.len() {
            if arrows[g].src != arrows[h].tgt {
                continue;
            }
            let product = alg.mul(&reps[g], &reps[h])?;
            let gh = (0..arrows.len())
                .find(|&k| arrows[k].tgt == arrows[g].tgt && reps[k] == product)
                .ok_or_else(|| AnalysisError::CompositionLeavesGrouplikes {
                    g: arrows[g].id.clone(),
                    h: arrows[h].id.clone(),
                    product: alg.format(&product),
                })?;
            triples.push((g, h, gh));
        }
    }
    let groupoid = FiniteGroupoid::from_parts(alg.base().clone(), arrows, triples)?;
    let report = groupoid.validate();
    if !report.is_valid() {
        return Err(AnalysisError::SpectralNotGroupoid(report));
    }
    let input_arrows = input.into_iter().collect::<Option<Vec<_>>>();
    Ok(SpectralGroupoid {
        groupoid,
        representatives: reps,
        input_arrows,
    })
}

impl SpectralGroupoid {
    pub fn len(&self) -> usize {
        self.groupoid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groupoid.is_empty()
    }

    pub fn representative(&self, g: ArrowId) -> &Element {
        &self.representatives[g]
    }

    /// Whether `Gsp(A)` is isomorphic to `other`, by exhaustive search.
    pub fn isomorphic_to(&self, other: &FiniteGroupoid) -> Result<bool, AnalysisError> {
        Ok(groupoid_isomorphic(&self.groupoid, other, DEFAULT_ISO_ARROW_BOUND)?.is_some())
    }
}
