use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebroid::{Algebroid, Element};
use crate::exact::{EchelonBasis, Rational};
use crate::groupoid::BaseFun;

use super::operators::{d_span, GoodPair};
use super::primitives::PrimBasis;
use super::spectral::SpectralGroupoid;
use super::AnalysisError;

/// One structural statement about primitives, grouplikes and `T`-operators,
/// checked on a concrete algebroid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PropositionCheck {
    pub name: &'static str,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PropositionReport {
    pub checks: Vec<PropositionCheck>,
    /// Sampled products skipped because they exceed the truncation.
    pub overflow_skips: usize,
}

impl PropositionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&PropositionCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }

    fn push(&mut self, name: &'static str, witness: Option<String>) {
        self.checks.push(PropositionCheck {
            name,
            holds: witness.is_none(),
            witness,
        });
    }
}

pub const ANTIPODE_EQUIVALENCE: &str = "S(Prim) = Prim <=> S(Prim) in Prim <=> S(X) = -X";
pub const ANCHOR_EQUIVALENCE: &str = "Xr = rX <=> Xr in Prim <=> trivial anchor";
pub const COMMUTATOR_IDENTITY: &str = "Xr = rX + e(Xr)";
pub const INVARIANT_IMPLIES_TRIVIAL_ANCHOR: &str = "S-invariant Prim has trivial anchor";
pub const UNIT_PAIR_IDENTITY: &str = "T_{1,1} = id";
pub const T_PRESERVES_BASE: &str = "T preserves the base algebra";
pub const T_PRESERVES_PRIM: &str = "T preserves Prim";
pub const T_PRESERVES_D: &str = "T preserves D(A)";
pub const T_MULTIPLICATIVE: &str = "T is multiplicative on D(A)";
pub const T_INVERSE: &str = "T_{S(a)} T_a = id on D(A)";

/// Checks the equivalences for `Prim(A)` and the behaviour of the
/// canonical `T`-operators of all spectral arrows.
pub fn proposition_suite(
    alg: &dyn Algebroid,
    prim: &PrimBasis,
    gsp: &SpectralGroupoid,
    samples: usize,
    seed: u64,
) -> Result<PropositionReport, AnalysisError> {
    let mut report = PropositionReport::default();
    let f = &prim.flags;

    let agree = f.s_image_equal == f.s_invariant && f.s_invariant == f.s_is_minus;
    report.push(
        ANTIPODE_EQUIVALENCE,
        (!agree).then(|| {
            format!(
                "S(Prim) = Prim: {}, S(Prim) in Prim: {}, S(X) = -X: {}",
                f.s_image_equal, f.s_invariant, f.s_is_minus
            )
        }),
    );
    let agree = f.commutes_with_base == f.right_submodule && f.right_submodule == f.anchor_trivial;
    report.push(
        ANCHOR_EQUIVALENCE,
        (!agree).then(|| {
            format!(
                "Xr = rX: {}, Xr in Prim: {}, trivial anchor: {}",
                f.commutes_with_base, f.right_submodule, f.anchor_trivial
            )
        }),
    );
    report.push(
        COMMUTATOR_IDENTITY,
        (!f.commutator_identity).then(|| "the identity fails for some basis X and r = 1_x".to_string()),
    );
    report.push(
        INVARIANT_IMPLIES_TRIVIAL_ANCHOR,
        (f.s_invariant && !f.anchor_trivial).then(|| "Prim is S-invariant with nontrivial anchor".to_string()),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = GoodPair::unit(alg)?;
    let mut witness = None;
    for _ in 0..samples {
        let b = alg.random_element(&mut rng, alg.truncation().unwrap_or(0), 4);
        if unit.apply(alg, &b)? != b {
            witness = Some(format!("T_{{1,1}}({}) differs", alg.format(&b)));
            break;
        }
    }
    report.push(UNIT_PAIR_IDENTITY, witness);

    let base_span = {
        let mut e = EchelonBasis::new();
        for x in alg.base().points() {
            e.insert(&alg.unit_at(x), x);
        }
        e
    };
    let d_spans: Vec<Vec<Element>> = alg
        .base()
        .points()
        .map(|x| d_span(alg, prim, x))
        .collect::<Result<_, _>>()?;
    let d_echelon: Vec<EchelonBasis<usize>> = d_spans
        .iter()
        .map(|span| {
            let mut e = EchelonBasis::new();
            for (k, v) in span.iter().enumerate() {
                e.insert(v, k);
            }
            e
        })
        .collect();

    let mut base_witness = None;
    let mut prim_witness = None;
    let mut d_witness = None;
    let mut mult_witness = None;
    let mut inverse_witness = None;
    let g = &gsp.groupoid;
    for arrow in 0..g.len() {
        let (x, y) = (g.src(arrow), g.tgt(arrow));
        let rep = gsp.representative(arrow);
        let pair = GoodPair::at_point(alg, rep, y)?;
        let back = GoodPair::at_point(alg, &alg.antipode(rep), x)?;
        let tag = g.id(arrow);

        for z in alg.base().points() {
            let image = pair.apply(alg, &alg.embed(&BaseFun::indicator(alg.points(), z)))?;
            if base_witness.is_none() && !base_span.contains(&image) {
                base_witness = Some(format!(
                    "T for {tag} sends 1_{} to {}",
                    alg.base().name(z),
                    alg.format(&image)
                ));
            }
        }
        for &k in prim.at(x) {
            let image = pair.apply(alg, &prim.basis[k])?;
            if prim_witness.is_none() && !prim.contains(&image) {
                prim_witness = Some(format!(
                    "T for {tag} sends {} to {}",
                    alg.format(&prim.basis[k]),
                    alg.format(&image)
                ));
            }
        }
        for v in &d_spans[x] {
            let image = pair.apply(alg, v)?;
            if d_witness.is_none() && !d_echelon[y].contains(&image) {
                d_witness = Some(format!("T for {tag} sends {} to {}", alg.format(v), alg.format(&image)));
            }
        }
        for _ in 0..samples {
            let d1 = random_combination(&mut rng, &d_spans[x]);
            let d2 = random_combination(&mut rng, &d_spans[x]);
            let there = pair.apply(alg, &d1)?;
            if inverse_witness.is_none() && back.apply(alg, &there)? != d1 {
                inverse_witness = Some(format!("for {tag}, T_(S(a)) T_a({}) differs", alg.format(&d1)));
            }
            let product = match alg.mul(&d1, &d2) {
                Ok(p) => p,
                Err(e) if e.is_overflow() => {
                    report.overflow_skips += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            let lhs = pair.apply(alg, &product)?;
            let rhs = match alg.mul(&there, &pair.apply(alg, &d2)?) {
                Ok(p) => p,
                Err(e) if e.is_overflow() => {
                    report.overflow_skips += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            if mult_witness.is_none() && lhs != rhs {
                mult_witness = Some(format!(
                    "for {tag}, T({} * {}) differs",
                    alg.format(&d1),
                    alg.format(&d2)
                ));
            }
        }
    }
    report.push(T_PRESERVES_BASE, base_witness);
    report.push(T_PRESERVES_PRIM, prim_witness);
    report.push(T_PRESERVES_D, d_witness);
    report.push(T_MULTIPLICATIVE, mult_witness);
    report.push(T_INVERSE, inverse_witness);
    Ok(report)
}

fn random_combination(rng: &mut ChaCha8Rng, span: &[Element]) -> Element {
    let mut out = Element::new();
    for v in span {
        if rng.gen_bool(0.5) {
            let c = Rational::new(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            out.axpy(&c, v);
        }
    }
    out
}
