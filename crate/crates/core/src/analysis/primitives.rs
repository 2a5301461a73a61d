use serde::Serialize;

use crate::algebroid::{Algebroid, Element, TensorLL};
use crate::exact::{kernel_of_images, EchelonBasis, Rational};
use crate::groupoid::{BaseFun, PointId};
use crate::lie::{check_names, default_names, LieBundle, LieFiber};

use super::AnalysisError;

/// The primitive elements `X` with `Δ(X) = η⊗X + X⊗η`, `η = 1_M`.
///
/// `Prim(A)` splits over the points, and each summand carries an
/// echelon-canonical basis in the coordinates of `A_y`.
#[derive(Clone, Debug)]
pub struct PrimBasis {
    pub basis: Vec<Element>,
    /// The point of each basis element.
    pub points: Vec<PointId>,
    pub per_point_rank: Vec<usize>,
    pub flags: PrimFlags,
    fibers: Vec<EchelonBasis<usize>>,
    local: Vec<Vec<usize>>,
    coordinate_point: Vec<PointId>,
}

/// Structural facts about `Prim(A)`, each computed on its own so that the
/// equivalences between them can be tested rather than assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimFlags {
    /// Every basis vector satisfies the primitivity equation (re-checked).
    pub verified: bool,
    /// `S(Prim) = Prim`.
    pub s_image_equal: bool,
    /// `S(Prim) ⊆ Prim`.
    pub s_invariant: bool,
    /// `S(X) = −X` for every basis vector.
    pub s_is_minus: bool,
    /// `X r = r X` for every basis vector and every `r = 1_x`.
    pub commutes_with_base: bool,
    /// `X r ∈ Prim` for every basis vector and every `r = 1_x`.
    pub right_submodule: bool,
    /// `ρ(X)(r) = ε(X r) = 0` for every basis vector and every `r = 1_x`.
    pub anchor_trivial: bool,
    /// `X r = r X + ε(X r)` for every basis vector and every `r = 1_x`.
    pub commutator_identity: bool,
}

fn primitivity_defect(alg: &dyn Algebroid, eta: &Element, x: &Element) -> TensorLL {
    alg.delta(x).minus(&alg.tensor(eta, x)).minus(&alg.tensor(x, eta))
}

pub fn is_primitive(alg: &dyn Algebroid, x: &Element) -> bool {
    primitivity_defect(alg, &alg.one(), x).is_zero()
}

/// Solves the primitivity system point by point by exact elimination.
pub fn solve_primitives(alg: &dyn Algebroid) -> Result<PrimBasis, AnalysisError> {
    let eta = alg.one();
    let mut basis = Vec::new();
    let mut points = Vec::new();
    let mut per_point_rank = Vec::new();
    let mut fibers = Vec::new();
    let mut local = Vec::new();
    for y in alg.base().points() {
        let idx = alg.basis_at(y);
        let images: Vec<TensorLL> = idx
            .iter()
            .map(|&i| primitivity_defect(alg, &eta, &Element::unit(i)))
            .collect();
        let kernel = kernel_of_images(&images);
        let mut echelon = EchelonBasis::new();
        let mut ids = Vec::new();
        for k in kernel {
            let x: Element = k.map_keys(|&j| idx[j]);
            echelon.insert(&x, basis.len());
            ids.push(basis.len());
            basis.push(x);
            points.push(y);
        }
        per_point_rank.push(ids.len());
        fibers.push(echelon);
        local.push(ids);
    }
    let mut prim = PrimBasis {
        basis,
        points,
        per_point_rank,
        flags: PrimFlags {
            verified: false,
            s_image_equal: false,
            s_invariant: false,
            s_is_minus: false,
            commutes_with_base: false,
            right_submodule: false,
            anchor_trivial: false,
            commutator_identity: false,
        },
        fibers,
        local,
        coordinate_point: (0..alg.dim()).map(|i| alg.basis_point(i)).collect(),
    };
    prim.flags = compute_flags(alg, &prim)?;
    Ok(prim)
}

fn compute_flags(alg: &dyn Algebroid, prim: &PrimBasis) -> Result<PrimFlags, AnalysisError> {
    let eta = alg.one();
    let n = alg.points();
    let mut flags = PrimFlags {
        verified: true,
        s_image_equal: true,
        s_invariant: true,
        s_is_minus: true,
        commutes_with_base: true,
        right_submodule: true,
        anchor_trivial: true,
        commutator_identity: true,
    };
    let mut images = EchelonBasis::new();
    for (k, x) in prim.basis.iter().enumerate() {
        flags.verified &= primitivity_defect(alg, &eta, x).is_zero();
        let sx = alg.antipode(x);
        flags.s_invariant &= prim.contains(&sx);
        flags.s_is_minus &= sx == x.neg();
        images.insert(&sx, k);
        for p in alg.base().points() {
            let r = alg.embed(&BaseFun::indicator(n, p));
            let xr = alg.mul(x, &r)?;
            let rx = alg.mul(&r, x)?;
            let eps = alg.counit(&xr);
            flags.commutes_with_base &= xr == rx;
            flags.right_submodule &= prim.contains(&xr);
            flags.anchor_trivial &= eps.is_zero();
            flags.commutator_identity &= xr == rx.plus(&alg.embed(&eps));
        }
    }
    flags.s_image_equal = flags.s_invariant && images.rank() == prim.basis.len();
    Ok(flags)
}

impl PrimBasis {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Basis indices of the summand at `x`.
    pub fn at(&self, x: PointId) -> &[usize] {
        &self.local[x]
    }

    pub fn contains(&self, v: &Element) -> bool {
        let mut by_point: Vec<Element> = vec![Element::new(); self.fibers.len()];
        for (i, c) in v.iter() {
            by_point[self.coordinate_point[*i]].add_term(*i, c.clone());
        }
        by_point
            .iter()
            .enumerate()
            .all(|(y, part)| part.is_zero() || self.fibers[y].contains(part))
    }

    /// Coordinates of `v ∈ Prim_x` in the basis at `x`.
    pub fn coordinates(&self, x: PointId, v: &Element) -> Option<Vec<Rational>> {
        let combo = self.fibers[x].express(v)?;
        Some(self.local[x].iter().map(|k| combo.get(k)).collect())
    }

    pub fn labels(&self, alg: &dyn Algebroid) -> Vec<String> {
        self.basis.iter().map(|x| alg.format(x)).collect()
    }
}

/// Generator names for the fiber at a point: the monomial part of the
/// label when each basis vector is a single basis element of `A`, else
/// defaults.
fn fiber_names(alg: &dyn Algebroid, prim: &PrimBasis, x: PointId) -> Vec<String> {
    let mut names = Vec::new();
    for &k in prim.at(x) {
        let v = &prim.basis[k];
        let single = v.len() == 1 && v.iter().next().is_some_and(|(_, c)| c.is_one());
        if !single {
            return default_names(prim.at(x).len());
        }
        let label = alg.basis_label(*v.first_key().unwrap());
        let name = label.split('@').next().unwrap_or("").to_string();
        names.push(name);
    }
    if check_names(&names).is_ok() {
        names
    } else {
        default_names(names.len())
    }
}

/// The bundle of Lie algebras `x ↦ Prim(A)_x` with the commutator bracket
/// written in the canonical basis.
pub fn prim_bundle(alg: &dyn Algebroid, prim: &PrimBasis) -> Result<LieBundle, AnalysisError> {
    let mut fibers = Vec::new();
    for x in alg.base().points() {
        let ids = prim.at(x);
        let d = ids.len();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                let (a, b) = (&prim.basis[ids[i]], &prim.basis[ids[j]]);
                let overflow = |e: crate::algebroid::AlgebroidError| {
                    if e.is_overflow() {
                        AnalysisError::TruncationOverflow {
                            needed: alg.degree(a) + alg.degree(b),
                            truncation: alg.truncation().unwrap_or(0),
                            context: "bracket of primitive elements".to_string(),
                        }
                    } else {
                        e.into()
                    }
                };
                let ab = alg.mul(a, b).map_err(overflow)?;
                let ba = alg.mul(b, a).map_err(overflow)?;
                let bracket = ab.minus(&ba);
                let coords = prim
                    .coordinates(x, &bracket)
                    .ok_or_else(|| AnalysisError::PrimNotClosed {
                        point: alg.base().name(x).to_string(),
                    })?;
                if coords.iter().any(|c| !c.is_zero()) {
                    entries.push((i, j, coords));
                }
            }
        }
        fibers.push(LieFiber::from_brackets(fiber_names(alg, prim, x), entries)?);
    }
    Ok(LieBundle::new(alg.base().clone(), fibers)?)
}
