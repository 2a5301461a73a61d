use crate::algebroid::{Algebroid, Element};
use crate::exact::{EchelonBasis, QMatrix};
use crate::groupoid::{BaseFun, PointId};
use crate::lie::{BundleAction, LieBundle};

use super::primitives::PrimBasis;
use super::spectral::SpectralGroupoid;
use super::AnalysisError;

/// A good pair `a = f·c`, `a′ = f′·c` with witness `c`.
///
/// The witness satisfies `Δc = c⊗c` and `Δ(Sc) = Sc⊗Sc`, is normalized on
/// `U = {y : ε(c)(y) = 1}`, and `f, f′` are supported in `U` with `f′ = 1`
/// on the support of `f`.
#[derive(Clone, Debug)]
pub struct GoodPair {
    pub a: Element,
    pub a_prime: Element,
    pub witness: Element,
    pub f: BaseFun,
    pub f_prime: BaseFun,
}

impl GoodPair {
    pub fn new(alg: &dyn Algebroid, witness: Element, f: BaseFun, f_prime: BaseFun) -> Result<Self, AnalysisError> {
        let fail = |reason: String| Err(AnalysisError::NotAGoodPair(reason));
        let c = &witness;
        if alg.delta(c) != alg.tensor(c, c) {
            return fail(format!("witness {} is not weakly grouplike", alg.format(c)));
        }
        let sc = alg.antipode(c);
        if alg.delta(&sc) != alg.tensor(&sc, &sc) {
            return fail(format!("witness {} is not S-invariant", alg.format(c)));
        }
        let eps = alg.counit(c);
        for (name, g) in [("f", &f), ("f'", &f_prime)] {
            if let Some(x) = g.support().find(|&x| !eps.at(x).is_one()) {
                return fail(format!(
                    "{name} is nonzero at {} where the witness is not normalized",
                    alg.base().name(x)
                ));
            }
        }
        if let Some(x) = f.support().find(|&x| !f_prime.at(x).is_one()) {
            return fail(format!("f' is not 1 at {} in the support of f", alg.base().name(x)));
        }
        let a = alg.scale_left(&f, c);
        let a_prime = alg.scale_left(&f_prime, c);
        Ok(GoodPair {
            a,
            a_prime,
            witness,
            f,
            f_prime,
        })
    }

    /// The canonical pair `a = a′ = 1_y·ξ` for a grouplike `ξ ∈ A_y`.
    pub fn at_point(alg: &dyn Algebroid, xi: &Element, y: PointId) -> Result<Self, AnalysisError> {
        let f = BaseFun::indicator(alg.points(), y);
        GoodPair::new(alg, xi.clone(), f.clone(), f)
    }

    /// The trivial pair `a = a′ = 1_M`.
    pub fn unit(alg: &dyn Algebroid) -> Result<Self, AnalysisError> {
        let one = BaseFun::constant(alg.points(), crate::exact::Rational::one());
        GoodPair::new(alg, alg.one(), one.clone(), one)
    }

    /// `T_{a,a′}(b) = a·b·S(a′)`.
    pub fn apply(&self, alg: &dyn Algebroid, b: &Element) -> Result<Element, AnalysisError> {
        Ok(alg.mul(&alg.mul(&self.a, b)?, &alg.antipode(&self.a_prime))?)
    }
}

/// `T_{a,a′}(b)` after validating the pair against the witness `c`.
pub fn t_operator(
    alg: &dyn Algebroid,
    a: &Element,
    a_prime: &Element,
    witness: &Element,
    b: &Element,
) -> Result<Element, AnalysisError> {
    let f = alg.counit(a);
    let f_prime = alg.counit(a_prime);
    let pair = GoodPair::new(alg, witness.clone(), f, f_prime)?;
    if pair.a != *a || pair.a_prime != *a_prime {
        return Err(AnalysisError::NotAGoodPair(format!(
            "{} and {} are not ε-multiples of the witness {}",
            alg.format(a),
            alg.format(a_prime),
            alg.format(witness)
        )));
    }
    pair.apply(alg, b)
}

/// The summand `D(A)_x`: the span of all products of elements of
/// `Prim(A)_x` with `1_x`. Products beyond the truncation are left out.
pub fn d_span(alg: &dyn Algebroid, prim: &PrimBasis, x: PointId) -> Result<Vec<Element>, AnalysisError> {
    let mut span = EchelonBasis::new();
    let mut found = Vec::new();
    let start = alg.unit_at(x);
    span.insert(&start, 0);
    found.push(start);
    let mut next = 0;
    while next < found.len() {
        let v = found[next].clone();
        next += 1;
        for &k in prim.at(x) {
            let w = match alg.mul(&v, &prim.basis[k]) {
                Ok(w) => w,
                Err(e) if e.is_overflow() => continue,
                Err(e) => return Err(e.into()),
            };
            if !span.contains(&w) {
                span.insert(&w, found.len());
                found.push(w);
            }
        }
    }
    Ok(found)
}

/// The action of `Gsp(A)` on the bundle `x ↦ Prim(A)_x`: an arrow
/// `ξ: x → y` with representative `a` sends `X ∈ Prim_x` to `a·X·S(a)`.
pub fn build_prim_action(
    alg: &dyn Algebroid,
    gsp: &SpectralGroupoid,
    prim: &PrimBasis,
    bundle: &LieBundle,
) -> Result<BundleAction, AnalysisError> {
    let g = &gsp.groupoid;
    let mut matrices = Vec::with_capacity(g.len());
    for arrow in 0..g.len() {
        let (x, y) = (g.src(arrow), g.tgt(arrow));
        let id = g.id(arrow).to_string();
        let (dx, dy) = (prim.at(x).len(), prim.at(y).len());
        if dx != dy {
            return Err(AnalysisError::RankMismatch {
                arrow: id,
                detail: format!("Prim has rank {dx} at the source and {dy} at the target"),
            });
        }
        let pair = GoodPair::at_point(alg, gsp.representative(arrow), y)?;
        let mut columns = Vec::with_capacity(dx);
        for &k in prim.at(x) {
            let image = pair.apply(alg, &prim.basis[k])?;
            let coords = prim.coordinates(y, &image).ok_or_else(|| AnalysisError::RankMismatch {
                arrow: id.clone(),
                detail: format!(
                    "T({}) = {} is not in Prim at the target",
                    alg.format(&prim.basis[k]),
                    alg.format(&image)
                ),
            })?;
            columns.push(coords);
        }
        let m = QMatrix::from_rows(columns, dy)
            .expect("columns have the target rank")
            .transpose();
        if m.determinant().is_some_and(|d| d.is_zero()) {
            return Err(AnalysisError::RankMismatch {
                arrow: id,
                detail: "the induced map on Prim is not invertible".to_string(),
            });
        }
        matrices.push(m);
    }
    let action = BundleAction::new(g, bundle, matrices)?;
    let violations = action.validate(g, bundle);
    if !violations.is_empty() {
        return Err(AnalysisError::InvalidAction(violations));
    }
    Ok(action)
}
