use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebroid::{Algebroid, ConvolutionAlgebroid, Element};
use crate::enveloping::Monomial;
use crate::exact::{kernel_of_images, EchelonBasis, QMatrix};
use crate::groupoid::PointId;
use crate::lie::{BundleAction, LieBundle};

use super::primitives::PrimBasis;
use super::spectral::SpectralGroupoid;
use super::AnalysisError;

/// `Θ: Gsp(A)⋉U(𝔟(Prim A)) → A`, sending `X^m·δ_γ` to the ordered
/// product of primitive representatives times the representative of `γ`.
#[derive(Debug)]
pub struct ThetaMap {
    pub domain: ConvolutionAlgebroid,
    /// Image of each domain basis vector.
    pub images: Vec<Element>,
    pub points: Vec<ThetaPoint>,
}

#[derive(Clone, Debug)]
pub struct ThetaPoint {
    pub rank: usize,
    /// `dim A_x`.
    pub dim: usize,
    pub domain_dim: usize,
    /// Rows: basis of `A_x`; columns: domain basis vectors over `x`.
    pub matrix: QMatrix,
    /// A basis vector of `A_x` outside the image.
    pub missing: Option<usize>,
    /// A nonzero domain element sent to zero.
    pub kernel: Option<Element>,
}

impl ThetaPoint {
    pub fn is_bijective(&self) -> bool {
        self.rank == self.dim && self.rank == self.domain_dim
    }
}

/// Outcome of the sampled homomorphism checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ThetaChecks {
    pub samples: usize,
    pub multiplicative: bool,
    pub comultiplicative: bool,
    pub counital: bool,
    pub antipodal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl ThetaChecks {
    pub fn passed(&self) -> bool {
        self.multiplicative && self.comultiplicative && self.counital && self.antipodal
    }
}

pub fn build_theta(
    alg: &dyn Algebroid,
    gsp: &SpectralGroupoid,
    prim: &PrimBasis,
    bundle: &LieBundle,
    action: &BundleAction,
) -> Result<ThetaMap, AnalysisError> {
    let n = alg.truncation().unwrap_or(0);
    let domain = ConvolutionAlgebroid::new(gsp.groupoid.clone(), bundle.clone(), action.clone(), n)?;
    let mut products: HashMap<(PointId, Monomial), Element> = HashMap::new();
    let mut images = Vec::with_capacity(domain.dim());
    for i in 0..domain.dim() {
        let (g, m) = domain.basis_key(i).clone();
        let x = gsp.groupoid.tgt(g);
        let key = (x, m.clone());
        if !products.contains_key(&key) {
            let mut acc = alg.unit_at(x);
            let mut needed = 0;
            for k in m.word() {
                let gen = &prim.basis[prim.at(x)[k]];
                needed += alg.degree(gen);
                acc = alg.mul(&acc, gen).map_err(|e| overflow(alg, e, needed))?;
            }
            products.insert(key.clone(), acc);
        }
        let rep = gsp.representative(g);
        let needed = alg.degree(&products[&key]) + alg.degree(rep);
        images.push(alg.mul(&products[&key], rep).map_err(|e| overflow(alg, e, needed))?);
    }
    let mut points = Vec::new();
    for x in alg.base().points() {
        let cols: Vec<usize> = (0..domain.dim()).filter(|&i| domain.basis_point(i) == x).collect();
        let rows = alg.basis_at(x);
        let row_of: HashMap<usize, usize> = rows.iter().enumerate().map(|(r, &i)| (i, r)).collect();
        let mut matrix = QMatrix::zeros(rows.len(), cols.len());
        let mut span = EchelonBasis::new();
        let local: Vec<Element> = cols.iter().map(|&i| images[i].clone()).collect();
        for (c, v) in local.iter().enumerate() {
            for (i, value) in v.iter() {
                let r = row_of.get(i).ok_or_else(|| AnalysisError::ThetaOffFiber {
                    point: alg.base().name(x).to_string(),
                })?;
                matrix[(*r, c)] = value.clone();
            }
            span.insert(v, c);
        }
        let missing = rows.iter().copied().find(|&i| !span.contains(&Element::unit(i)));
        let kernel = kernel_of_images(&local)
            .into_iter()
            .next()
            .map(|k| k.map_keys(|&c| cols[c]));
        points.push(ThetaPoint {
            rank: span.rank(),
            dim: rows.len(),
            domain_dim: cols.len(),
            matrix,
            missing,
            kernel,
        });
    }
    Ok(ThetaMap { domain, images, points })
}

fn overflow(alg: &dyn Algebroid, e: crate::algebroid::AlgebroidError, needed: u32) -> AnalysisError {
    if e.is_overflow() {
        AnalysisError::TruncationOverflow {
            needed,
            truncation: alg.truncation().unwrap_or(0),
            context: "multiplying out a PBW monomial under Θ".to_string(),
        }
    } else {
        e.into()
    }
}

impl ThetaMap {
    pub fn apply(&self, u: &Element) -> Element {
        let mut out = Element::new();
        for (&i, c) in u.iter() {
            out.axpy(c, &self.images[i]);
        }
        out
    }

    pub fn is_bijective(&self) -> bool {
        self.points.iter().all(ThetaPoint::is_bijective)
    }

    /// Checks `Θ(uv) = Θ(u)Θ(v)`, `(Θ⊗Θ)Δ = ΔΘ`, `εΘ = ε` and `ΘS = SΘ` on
    /// seeded random domain elements.
    pub fn check_homomorphism(
        &self,
        alg: &dyn Algebroid,
        samples: usize,
        seed: u64,
    ) -> Result<ThetaChecks, AnalysisError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = self.domain.n() / 2;
        let mut checks = ThetaChecks {
            samples,
            multiplicative: true,
            comultiplicative: true,
            counital: true,
            antipodal: true,
            witness: None,
        };
        let note = |checks: &mut ThetaChecks, what: &str, u: &Element| {
            if checks.witness.is_none() {
                checks.witness = Some(format!("{what} fails at u = {}", self.domain.format(u)));
            }
        };
        let image = |i: usize| self.images[i].clone();
        for _ in 0..samples {
            let u = self.domain.random_element(&mut rng, half, 3);
            let v = self.domain.random_element(&mut rng, half, 3);
            let uv = self.domain.mul(&u, &v)?;
            if self.apply(&uv) != alg.mul(&self.apply(&u), &self.apply(&v))? {
                checks.multiplicative = false;
                let what = format!("Θ(uv) = Θ(u)Θ(v) with v = {}", self.domain.format(&v));
                note(&mut checks, &what, &u);
            }
            let pushed = alg.tensor_map(&self.domain.delta(&u), &image, &image);
            if pushed != alg.delta(&self.apply(&u)) {
                checks.comultiplicative = false;
                note(&mut checks, "(Θ⊗Θ)Δ = ΔΘ", &u);
            }
            if self.domain.counit(&u) != alg.counit(&self.apply(&u)) {
                checks.counital = false;
                note(&mut checks, "εΘ = ε", &u);
            }
            if self.apply(&self.domain.antipode(&u)) != alg.antipode(&self.apply(&u)) {
                checks.antipodal = false;
                note(&mut checks, "ΘS = SΘ", &u);
            }
        }
        Ok(checks)
    }

    /// Formats a domain element for reports.
    pub fn format_domain(&self, u: &Element) -> String {
        self.domain.format(u)
    }
}
