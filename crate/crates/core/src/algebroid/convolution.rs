use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::enveloping::{parse_monomial, Enveloping, Monomial, UElement};
use crate::exact::{Rational, SparseVec};
use crate::groupoid::{ArrowId, BaseFun, BaseSpace, FiniteGroupoid, PointId};
use crate::lie::{BundleAction, LieBundle};

use super::{Algebroid, AlgebroidError, Element, TensorLL};

/// The twisted tensor product `G⋉U(𝔟)^(N)`: functions on the arrows of `G`
/// with values in the truncated enveloping algebra of the fiber over the
/// target, multiplied by
/// `(ab)(g) = Σ_{g = hk} a(h)·(h·b(k))`.
///
/// The basis is `u·δ_g` for arrows `g` and PBW monomials `u` of
/// `U(𝔟_{t(g)})^(N)`, ordered by arrow and then by monomial.
pub struct ConvolutionAlgebroid {
    groupoid: FiniteGroupoid,
    bundle: LieBundle,
    action: BundleAction,
    truncation: u32,
    envs: Vec<Enveloping>,
    basis: Vec<(ArrowId, Monomial)>,
    index: HashMap<(ArrowId, Monomial), usize>,
    products: RwLock<HashMap<(usize, usize), Arc<Element>>>,
}

impl fmt::Debug for ConvolutionAlgebroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvolutionAlgebroid")
            .field("arrows", &self.groupoid.len())
            .field("truncation", &self.truncation)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl Clone for ConvolutionAlgebroid {
    fn clone(&self) -> Self {
        ConvolutionAlgebroid::new_unchecked(
            self.groupoid.clone(),
            self.bundle.clone(),
            self.action.clone(),
            self.truncation,
        )
        .expect("already constructed once")
    }
}

impl ConvolutionAlgebroid {
    /// Builds the algebroid after validating the groupoid, the bundle and
    /// the action.
    pub fn new(
        groupoid: FiniteGroupoid,
        bundle: LieBundle,
        action: BundleAction,
        truncation: u32,
    ) -> Result<Self, AlgebroidError> {
        let report = groupoid.validate();
        if !report.is_valid() {
            return Err(AlgebroidError::InvalidGroupoid(report));
        }
        let lie = bundle.validate();
        if !lie.is_empty() {
            return Err(AlgebroidError::InvalidBundle(lie));
        }
        let act = action.validate(&groupoid, &bundle);
        if !act.is_empty() {
            return Err(AlgebroidError::InvalidAction(act));
        }
        Self::new_unchecked(groupoid, bundle, action, truncation)
    }

    /// Builds the algebroid without checking the Lie or action laws, so
    /// that broken inputs can be fed to the axiom checker. The groupoid must
    /// still have units and inverses.
    pub fn new_unchecked(
        groupoid: FiniteGroupoid,
        bundle: LieBundle,
        action: BundleAction,
        truncation: u32,
    ) -> Result<Self, AlgebroidError> {
        if groupoid.base().names() != bundle.base().names() {
            return Err(AlgebroidError::BaseMismatch);
        }
        let report = groupoid.validate();
        if !report.is_valid() {
            return Err(AlgebroidError::InvalidGroupoid(report));
        }
        let envs: Vec<Enveloping> = groupoid
            .base()
            .points()
            .map(|x| Enveloping::new(x, bundle.fiber(x).clone(), truncation))
            .collect();
        let mut basis = Vec::new();
        for g in 0..groupoid.len() {
            for m in envs[groupoid.tgt(g)].basis() {
                basis.push((g, m));
            }
        }
        let index = basis.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Ok(ConvolutionAlgebroid {
            groupoid,
            bundle,
            action,
            truncation,
            envs,
            basis,
            index,
            products: RwLock::new(HashMap::new()),
        })
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn bundle(&self) -> &LieBundle {
        &self.bundle
    }

    pub fn action(&self) -> &BundleAction {
        &self.action
    }

    pub fn n(&self) -> u32 {
        self.truncation
    }

    pub fn enveloping(&self, x: PointId) -> &Enveloping {
        &self.envs[x]
    }

    pub fn basis_key(&self, i: usize) -> &(ArrowId, Monomial) {
        &self.basis[i]
    }

    pub fn index_of(&self, g: ArrowId, m: &Monomial) -> Option<usize> {
        self.index.get(&(g, m.clone())).copied()
    }

    /// `u·δ_g` as an element.
    pub fn element_at(&self, g: ArrowId, u: &UElement) -> Element {
        u.terms
            .iter()
            .map(|(m, c)| (self.index[&(g, m.clone())], c.clone()))
            .collect()
    }

    /// `δ_g`.
    pub fn delta_arrow(&self, g: ArrowId) -> Element {
        Element::unit(self.index[&(g, Monomial::one(self.envs[self.groupoid.tgt(g)].dim_generators()))])
    }

    /// The coefficient `a(g)` in `U(𝔟_{t(g)})`.
    pub fn coefficient(&self, a: &Element, g: ArrowId) -> UElement {
        let env = &self.envs[self.groupoid.tgt(g)];
        let terms: SparseVec<Monomial> = a
            .iter()
            .filter(|(i, _)| self.basis[**i].0 == g)
            .map(|(i, c)| (self.basis[*i].1.clone(), c.clone()))
            .collect();
        env.element(terms)
    }

    /// Nonzero coefficients arrow by arrow.
    pub fn coefficients(&self, a: &Element) -> Vec<(ArrowId, UElement)> {
        let mut arrows: Vec<ArrowId> = a.keys().map(|&i| self.basis[i].0).collect();
        arrows.dedup();
        arrows.into_iter().map(|g| (g, self.coefficient(a, g))).collect()
    }

    /// `h·u`: transport along `h` from `U(𝔟_{s(h)})` to `U(𝔟_{t(h)})`.
    pub fn transport(&self, h: ArrowId, u: &UElement) -> UElement {
        let env = &self.envs[self.groupoid.tgt(h)];
        env.transport(u, self.action.matrix(h))
            .expect("action matrices have the fiber shapes")
    }

    fn compute_product(&self, i: usize, j: usize) -> Result<Element, AlgebroidError> {
        let (h, ref u) = self.basis[i];
        let (k, ref v) = self.basis[j];
        if self.groupoid.src(h) != self.groupoid.tgt(k) {
            return Ok(Element::new());
        }
        let degree = u.degree() + v.degree();
        if degree > self.truncation {
            return Err(crate::enveloping::EnvelopingError::TruncationOverflow {
                degree,
                truncation: self.truncation,
            }
            .into());
        }
        let g = self
            .groupoid
            .composite(h, k)
            .expect("validated groupoid composes composable pairs");
        let y = self.groupoid.tgt(h);
        let env = &self.envs[y];
        let moved = env.transport_monomial(self.action.matrix(h), v);
        let mut out = Element::new();
        for (m, c) in moved.iter() {
            for (p, cp) in env.mul_monomials(u, m).iter() {
                out.add_term(self.index[&(g, p.clone())], c * cp);
            }
        }
        Ok(out)
    }
}

impl Algebroid for ConvolutionAlgebroid {
    fn base(&self) -> &BaseSpace {
        self.groupoid.base()
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn basis_point(&self, i: usize) -> PointId {
        self.groupoid.tgt(self.basis[i].0)
    }

    fn basis_label(&self, i: usize) -> String {
        let (g, m) = &self.basis[i];
        let env = &self.envs[self.groupoid.tgt(*g)];
        format!("{}@{}", env.format_monomial(m), self.groupoid.id(*g))
    }

    fn basis_degree(&self, i: usize) -> u32 {
        self.basis[i].1.degree()
    }

    fn truncation(&self) -> Option<u32> {
        Some(self.truncation)
    }

    fn embed(&self, r: &BaseFun) -> Element {
        self.base()
            .points()
            .map(|x| (self.delta_arrow(self.groupoid.unit(x)), r.at(x).clone()))
            .fold(Element::new(), |mut acc, (e, c)| {
                acc.axpy(&c, &e);
                acc
            })
    }

    fn mul_basis(&self, i: usize, j: usize) -> Result<Element, AlgebroidError> {
        if let Some(hit) = self.products.read().unwrap().get(&(i, j)) {
            return Ok((**hit).clone());
        }
        let p = self.compute_product(i, j)?;
        self.products.write().unwrap().insert((i, j), Arc::new(p.clone()));
        Ok(p)
    }

    /// `Δ(u·δ_g) = Σ u⁽¹⁾δ_g ⊗ u⁽²⁾δ_g`.
    fn delta_basis(&self, i: usize) -> TensorLL {
        let (g, ref m) = self.basis[i];
        let env = &self.envs[self.groupoid.tgt(g)];
        env.delta_monomial(m)
            .iter()
            .map(|((l, r), c)| ((self.index[&(g, l.clone())], self.index[&(g, r.clone())]), c.clone()))
            .collect()
    }

    fn counit_basis(&self, i: usize) -> Rational {
        if self.basis[i].1.is_one() {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    /// `S(u·δ_g) = (g⁻¹·S(u))·δ_{g⁻¹}`.
    fn antipode_basis(&self, i: usize) -> Element {
        let (g, ref m) = self.basis[i];
        let gi = self.groupoid.inverse(g);
        let env_src = &self.envs[self.groupoid.tgt(g)];
        let su = env_src.element(env_src.antipode_monomial(m));
        let moved = self.transport(gi, &su);
        self.element_at(gi, &moved)
    }

    fn as_convolution(&self) -> Option<&ConvolutionAlgebroid> {
        Some(self)
    }

    fn parse_basis_label(&self, label: &str) -> Result<usize, String> {
        let (mono, arrow) = label
            .rsplit_once('@')
            .ok_or_else(|| format!("term {label:?} lacks '@arrow'"))?;
        let g = self
            .groupoid
            .arrow_by_id(arrow.trim())
            .ok_or_else(|| format!("unknown arrow {arrow:?}"))?;
        let env = &self.envs[self.groupoid.tgt(g)];
        let m = parse_monomial(env.fiber(), mono.trim())?;
        if m.degree() > self.truncation {
            return Err(format!("monomial {mono:?} exceeds truncation {}", self.truncation));
        }
        Ok(self.index[&(g, m)])
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::QMatrix;
    use crate::groupoid::BaseSpace;
    use crate::lie::LieFiber;

    pub(crate) fn z2line(n: u32) -> ConvolutionAlgebroid {
        let base = BaseSpace::new(["x"]).unwrap();
        let s = |a: &str| a.to_string();
        let g = FiniteGroupoid::from_table(
            base.clone(),
            vec![(s("e"), s("x"), s("x")), (s("s"), s("x"), s("x"))],
            vec![
                (s("e"), s("e"), s("e")),
                (s("e"), s("s"), s("s")),
                (s("s"), s("e"), s("s")),
                (s("s"), s("s"), s("e")),
            ],
        )
        .unwrap();
        let bundle = LieBundle::new(base, vec![LieFiber::abelian(1)]).unwrap();
        let action = BundleAction::new(
            &g,
            &bundle,
            vec![QMatrix::identity(1), QMatrix::from_int_rows(&[&[-1]])],
        )
        .unwrap();
        ConvolutionAlgebroid::new(g, bundle, action, n).unwrap()
    }

    #[test]
    fn z2line_products() {
        let a = z2line(4);
        let x_s = a.parse("X@s").unwrap();
        assert_eq!(a.format(&a.mul(&x_s, &x_s).unwrap()), "-X^2@e");
        let e = a.parse("1@e").unwrap();
        assert_eq!(a.mul(&e, &x_s).unwrap(), x_s);
        assert_eq!(a.dim(), 10);
    }

    #[test]
    fn z2line_coalgebra_and_antipode() {
        let a = z2line(4);
        let x_s = a.parse("X@s").unwrap();
        assert_eq!(a.format_tensor(&a.delta(&x_s)), "1@s ⊗ X@s + X@s ⊗ 1@s");
        let x2 = a.parse("X^2@e").unwrap();
        assert_eq!(
            a.format_tensor(&a.delta(&x2)),
            "1@e ⊗ X^2@e + 2*X@e ⊗ X@e + X^2@e ⊗ 1@e"
        );
        assert_eq!(a.antipode(&x_s), x_s);
        assert_eq!(
            a.counit(&a.parse("3*1@e + 2*1@s").unwrap()).at(0),
            &Rational::from_int(5)
        );
        assert!(a.counit(&x_s).is_zero());
    }

    #[test]
    fn anchor_of_arrow_reads_source() {
        let a = z2line(4);
        let r = BaseFun::constant(1, Rational::from_int(7));
        let rho = a.anchor(&a.parse("1@s").unwrap(), &r).unwrap();
        assert_eq!(rho.at(0), &Rational::from_int(7));
        assert!(a.anchor(&a.parse("X@e").unwrap(), &r).unwrap().is_zero());
    }

    #[test]
    fn overflow_propagates() {
        let a = z2line(2);
        let x2 = a.parse("X^2@e").unwrap();
        let err = a.mul(&x2, &a.parse("X@s").unwrap()).unwrap_err();
        assert!(err.is_overflow());
    }
}
