use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groupoid::BaseFun;

use super::{Algebroid, AlgebroidError, Element, Tensor3, TensorLL};

/// Tables up to this dimension are checked on every basis tuple.
pub const FULL_BASIS_LIMIT: usize = 12;

pub const COUNIT_ON_BASE: &str = "i.counit_on_base";
pub const DELTA_ON_BASE: &str = "i.delta_on_base";
pub const TAKEUCHI: &str = "ii.takeuchi";
pub const COUNIT_MULT: &str = "iii.counit_mult";
pub const DELTA_MULT: &str = "iii.delta_mult";
pub const ANTIPODE_ON_BASE: &str = "iv.antipode_on_base";
pub const ANTIPODE_ANTIHOM: &str = "iv.antipode_antihom";
pub const ANTIPODE_LAW: &str = "v.antipode_law";
pub const COASSOCIATIVITY: &str = "coassociativity";
pub const COUNIT_LAW: &str = "counit_law";
pub const ANTIPODE_INVOLUTION: &str = "antipode_involution";
pub const ASSOCIATIVITY: &str = "associativity";

pub const ALL_AXIOMS: [&str; 12] = [
    COUNIT_ON_BASE,
    DELTA_ON_BASE,
    TAKEUCHI,
    COUNIT_MULT,
    DELTA_MULT,
    ANTIPODE_ON_BASE,
    ANTIPODE_ANTIHOM,
    ANTIPODE_LAW,
    COASSOCIATIVITY,
    COUNIT_LAW,
    ANTIPODE_INVOLUTION,
    ASSOCIATIVITY,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomEntry {
    pub axiom: String,
    pub status: AxiomStatus,
    pub checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReport {
    pub mode: String,
    pub samples: usize,
    pub seed: u64,
    pub overflow_resamples: usize,
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.status == AxiomStatus::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter().filter(|e| e.status == AxiomStatus::Fail)
    }

    pub fn entry(&self, axiom: &str) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }
}

struct Tally {
    entries: BTreeMap<&'static str, (usize, Option<String>)>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            entries: ALL_AXIOMS.iter().map(|a| (*a, (0, None))).collect(),
        }
    }

    fn record(&mut self, axiom: &'static str, outcome: Option<String>) {
        let e = self.entries.get_mut(axiom).expect("known axiom");
        e.0 += 1;
        if e.1.is_none() {
            e.1 = outcome;
        }
    }

    fn into_entries(self) -> Vec<AxiomEntry> {
        self.entries
            .into_iter()
            .map(|(axiom, (checked, witness))| AxiomEntry {
                axiom: axiom.to_string(),
                status: if witness.is_some() {
                    AxiomStatus::Fail
                } else {
                    AxiomStatus::Pass
                },
                checked,
                witness,
            })
            .collect()
    }
}

/// Checks every Hopf-algebroid axiom plus coassociativity, the counit law,
/// involutivity of `S` and associativity.
///
/// Tables of dimension at most [`FULL_BASIS_LIMIT`] are checked on all
/// basis tuples (the identities are multilinear, so this is a proof).
/// Otherwise `samples` rounds of seeded random elements are drawn: unary
/// identities use degree ≤ N, binary ones degree ≤ ⌊N/2⌋ and associativity
/// degree ≤ ⌊N/3⌋, so no legal product overflows. A round that overflows
/// anyway is discarded and redrawn.
pub fn check_axioms(alg: &dyn Algebroid, samples: usize, seed: u64) -> AxiomReport {
    let mut tally = Tally::new();
    let mut overflow = 0;
    check_base(alg, &mut tally);
    let full = alg.truncation().is_none() && alg.dim() <= FULL_BASIS_LIMIT;
    if full {
        let basis: Vec<Element> = (0..alg.dim()).map(Element::unit).collect();
        for a in &basis {
            unary(alg, a, &mut tally).expect("tables never overflow");
            for b in &basis {
                binary(alg, a, b, &mut tally).expect("tables never overflow");
                for c in &basis {
                    ternary(alg, a, b, c, &mut tally).expect("tables never overflow");
                }
            }
        }
    } else {
        let n = alg.truncation().unwrap_or(0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut done = 0;
        let mut attempts = 0;
        while done < samples && attempts < samples * 10 + 10 {
            attempts += 1;
            let a = alg.random_element(&mut rng, n, 3);
            let b = alg.random_element(&mut rng, n / 2, 3);
            let c = alg.random_element(&mut rng, n / 2, 3);
            let d = alg.random_element(&mut rng, n / 3, 3);
            let e = alg.random_element(&mut rng, n / 3, 3);
            let f = alg.random_element(&mut rng, n / 3, 3);
            let mut round = Tally::new();
            let outcome = unary(alg, &a, &mut round)
                .and_then(|_| binary(alg, &b, &c, &mut round))
                .and_then(|_| ternary(alg, &d, &e, &f, &mut round));
            match outcome {
                Ok(()) => {
                    for (axiom, (checked, witness)) in round.entries {
                        if checked > 0 {
                            tally.record(axiom, witness);
                        }
                    }
                    done += 1;
                }
                Err(err) if err.is_overflow() => overflow += 1,
                Err(err) => panic!("unexpected error while checking axioms: {err}"),
            }
        }
    }
    AxiomReport {
        mode: if full { "full-basis" } else { "sampled" }.to_string(),
        samples: if full { alg.dim() } else { samples },
        seed,
        overflow_resamples: overflow,
        entries: tally.into_entries(),
    }
}

fn mismatch<T: PartialEq>(lhs: &T, rhs: &T, describe: impl FnOnce() -> String) -> Option<String> {
    if lhs == rhs {
        None
    } else {
        Some(describe())
    }
}

fn check_base(alg: &dyn Algebroid, tally: &mut Tally) {
    let n = alg.points();
    for x in alg.base().points() {
        let f = BaseFun::indicator(n, x);
        let ef = alg.embed(&f);
        let name = alg.base().name(x);
        let eps = alg.counit(&ef);
        tally.record(
            COUNIT_ON_BASE,
            mismatch(&eps, &f, || format!("ε(1_{name}) = {}", alg.format_base(&eps))),
        );
        let delta = alg.delta(&ef);
        let canonical = alg.tensor(&ef, &ef);
        tally.record(
            DELTA_ON_BASE,
            mismatch(&delta, &canonical, || {
                format!(
                    "Δ(1_{name}) = {} != {}",
                    alg.format_tensor(&delta),
                    alg.format_tensor(&canonical)
                )
            }),
        );
        let s = alg.antipode(&ef);
        tally.record(
            ANTIPODE_ON_BASE,
            mismatch(&s, &ef, || format!("S(1_{name}) = {}", alg.format(&s))),
        );
    }
}

fn unary(alg: &dyn Algebroid, a: &Element, tally: &mut Tally) -> Result<(), AlgebroidError> {
    let fa = || alg.format(a);
    let da = alg.delta(a);

    // Σ a_i f ⊗ a'_i = Σ a_i ⊗ a'_i f for each basis function f = 1_x.
    let mut takeuchi = None;
    for x in alg.base().points() {
        let ux = alg.unit_at(x);
        let mut left = TensorLL::new();
        let mut right = TensorLL::new();
        for ((i, j), c) in da.iter() {
            let bi = Element::unit(*i);
            let bj = Element::unit(*j);
            left.axpy(c, &alg.tensor(&alg.mul(&bi, &ux)?, &bj));
            right.axpy(c, &alg.tensor(&bi, &alg.mul(&bj, &ux)?));
        }
        if left != right && takeuchi.is_none() {
            takeuchi = Some(format!(
                "a = {}, f = 1_{}: {} != {}",
                fa(),
                alg.base().name(x),
                alg.format_tensor(&left),
                alg.format_tensor(&right)
            ));
        }
    }
    tally.record(TAKEUCHI, takeuchi);

    let mut law = Element::new();
    for ((i, j), c) in da.iter() {
        law.axpy(c, &alg.mul(&alg.antipode_basis(*i), &Element::unit(*j))?);
    }
    let sa = alg.antipode(a);
    let target = alg.embed(&alg.counit(&sa));
    tally.record(
        ANTIPODE_LAW,
        mismatch(&law, &target, || {
            format!(
                "a = {}: μ(S⊗id)Δ(a) = {} but ε(S(a)) = {}",
                fa(),
                alg.format(&law),
                alg.format(&target)
            )
        }),
    );

    let mut left3 = Tensor3::new();
    let mut right3 = Tensor3::new();
    for ((i, j), c) in da.iter() {
        for ((k, l), d) in alg.delta_basis(*i).iter() {
            if alg.basis_point(*k) == alg.basis_point(*j) {
                left3.add_term((*k, *l, *j), c * d);
            }
        }
        for ((k, l), d) in alg.delta_basis(*j).iter() {
            if alg.basis_point(*i) == alg.basis_point(*k) {
                right3.add_term((*i, *k, *l), c * d);
            }
        }
    }
    tally.record(
        COASSOCIATIVITY,
        mismatch(&left3, &right3, || format!("a = {}: (Δ⊗id)Δ(a) != (id⊗Δ)Δ(a)", fa())),
    );

    let mut via_left = Element::new();
    let mut via_right = Element::new();
    for ((i, j), c) in da.iter() {
        via_left.add_term(*j, c * alg.counit_basis(*i));
        via_right.add_term(*i, c * alg.counit_basis(*j));
    }
    let counit = if &via_left != a {
        Some(format!("a = {}: (ε⊗id)Δ(a) = {}", fa(), alg.format(&via_left)))
    } else if &via_right != a {
        Some(format!("a = {}: (id⊗ε)Δ(a) = {}", fa(), alg.format(&via_right)))
    } else {
        None
    };
    tally.record(COUNIT_LAW, counit);

    let ssa = alg.antipode(&sa);
    tally.record(
        ANTIPODE_INVOLUTION,
        mismatch(&ssa, a, || format!("a = {}: S(S(a)) = {}", fa(), alg.format(&ssa))),
    );
    Ok(())
}

fn binary(alg: &dyn Algebroid, a: &Element, b: &Element, tally: &mut Tally) -> Result<(), AlgebroidError> {
    let pair = || format!("a = {}, b = {}", alg.format(a), alg.format(b));
    let ab = alg.mul(a, b)?;

    let lhs = alg.counit(&ab);
    let rhs = alg.counit(&alg.mul(a, &alg.embed(&alg.counit(b)))?);
    tally.record(
        COUNIT_MULT,
        mismatch(&lhs, &rhs, || {
            format!(
                "{}: ε(ab) = {} but ε(aε(b)) = {}",
                pair(),
                alg.format_base(&lhs),
                alg.format_base(&rhs)
            )
        }),
    );

    let dab = alg.delta(&ab);
    let dadb = alg.tensor_mul(&alg.delta(a), &alg.delta(b))?;
    tally.record(
        DELTA_MULT,
        mismatch(&dab, &dadb, || {
            format!(
                "{}: Δ(ab) = {} but Δ(a)Δ(b) = {}",
                pair(),
                alg.format_tensor(&dab),
                alg.format_tensor(&dadb)
            )
        }),
    );

    let sab = alg.antipode(&ab);
    let sbsa = alg.mul(&alg.antipode(b), &alg.antipode(a))?;
    tally.record(
        ANTIPODE_ANTIHOM,
        mismatch(&sab, &sbsa, || {
            format!(
                "{}: S(ab) = {} but S(b)S(a) = {}",
                pair(),
                alg.format(&sab),
                alg.format(&sbsa)
            )
        }),
    );
    Ok(())
}

fn ternary(
    alg: &dyn Algebroid,
    a: &Element,
    b: &Element,
    c: &Element,
    tally: &mut Tally,
) -> Result<(), AlgebroidError> {
    let left = alg.mul(&alg.mul(a, b)?, c)?;
    let right = alg.mul(a, &alg.mul(b, c)?)?;
    tally.record(
        ASSOCIATIVITY,
        mismatch(&left, &right, || {
            format!(
                "a = {}, b = {}, c = {}: (ab)c = {} but a(bc) = {}",
                alg.format(a),
                alg.format(b),
                alg.format(c),
                alg.format(&left),
                alg.format(&right)
            )
        }),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::convolution::tests::z2line;

    #[test]
    fn z2line_passes_everything() {
        let a = z2line(4);
        let report = check_axioms(&a, 30, 7);
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.overflow_resamples, 0);
        assert!(report.entries.iter().all(|e| e.checked > 0));
    }

    #[test]
    fn seeded_runs_are_deterministic() {
        let a = z2line(4);
        assert_eq!(check_axioms(&a, 10, 3), check_axioms(&a, 10, 3));
    }
}
