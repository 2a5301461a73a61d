//! Hopf algebroids over `R = Fun(M, ℚ)` with a finite base `M`.
//!
//! An algebroid is presented by a finite basis in which every basis vector
//! lies in one summand `A_y = 1_y·A` (the left `R`-action scales along the
//! target). Elements are sparse coefficient vectors over that basis. Because
//! `R` is a product of copies of ℚ, the tensor product over `R` splits as
//! `A ⊗_R A = ⊕_y A_y ⊗_ℚ A_y`; a [`TensorLL`] stores only pairs of basis
//! vectors lying over the same point.

mod axioms;
mod convolution;
mod table;

use rand::Rng;
use thiserror::Error;

pub use axioms::{check_axioms, AxiomEntry, AxiomReport, AxiomStatus};
pub use convolution::ConvolutionAlgebroid;
pub use table::{DeltaEntries, MulEntries, TableAlgebroid, TableData, TableError};

use crate::enveloping::{format_items, split_coefficient, split_signed_terms, EnvelopingError};
use crate::exact::{Rational, SparseVec};
use crate::groupoid::{BaseFun, BaseSpace, GroupoidError, GroupoidReport, PointId};
use crate::lie::{ActionViolation, LieError, LieViolation};

/// Coefficients over the basis of an algebroid.
pub type Element = SparseVec<usize>;
/// Elements of `A ⊗_R A`, as coefficients over same-point basis pairs.
pub type TensorLL = SparseVec<(usize, usize)>;
/// Elements of `A ⊗_R A ⊗_R A`.
pub type Tensor3 = SparseVec<(usize, usize, usize)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebroidError {
    #[error(transparent)]
    Enveloping(#[from] EnvelopingError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("groupoid laws violated: {0}")]
    InvalidGroupoid(GroupoidReport),
    #[error("Lie bundle invalid: {}", format_lie(.0))]
    InvalidBundle(Vec<(String, LieViolation)>),
    #[error("bundle action invalid: {}", format_action(.0))]
    InvalidAction(Vec<ActionViolation>),
    #[error("groupoid and bundle have different bases")]
    BaseMismatch,
    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

fn format_lie(v: &[(String, LieViolation)]) -> String {
    v.iter()
        .map(|(p, e)| format!("at {p}: {e}"))
        .collect::<Vec<_>>()
        .join("; ")
}

fn format_action(v: &[ActionViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl AlgebroidError {
    pub fn is_overflow(&self) -> bool {
        matches!(
            self,
            AlgebroidError::Enveloping(EnvelopingError::TruncationOverflow { .. })
        )
    }
}

/// A Hopf algebroid given on a finite basis.
///
/// Implementors supply the structure maps on basis vectors; every other
/// operation extends them linearly.
pub trait Algebroid: Sync {
    fn base(&self) -> &BaseSpace;
    fn dim(&self) -> usize;
    /// The point `y` with basis vector `i` in `A_y`.
    fn basis_point(&self, i: usize) -> PointId;
    fn basis_label(&self, i: usize) -> String;
    /// Filtration degree of a basis vector; zero when there is no filtration.
    fn basis_degree(&self, i: usize) -> u32;
    fn truncation(&self) -> Option<u32>;
    /// The image of `R` in `A`: `r ↦ Σ_y r(y) 1_y`.
    fn embed(&self, r: &BaseFun) -> Element;
    fn mul_basis(&self, i: usize, j: usize) -> Result<Element, AlgebroidError>;
    fn delta_basis(&self, i: usize) -> TensorLL;
    /// `ε(b_i)`, a scalar at `basis_point(i)`.
    fn counit_basis(&self, i: usize) -> Rational;
    fn antipode_basis(&self, i: usize) -> Element;

    fn as_convolution(&self) -> Option<&ConvolutionAlgebroid> {
        None
    }

    /// Finds the basis index for a label in an element literal.
    fn parse_basis_label(&self, label: &str) -> Result<usize, String> {
        (0..self.dim())
            .find(|&i| self.basis_label(i) == label)
            .ok_or_else(|| format!("unknown basis element {label:?}"))
    }

    fn points(&self) -> usize {
        self.base().len()
    }

    fn basis_at(&self, y: PointId) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.basis_point(i) == y).collect()
    }

    fn unit_at(&self, y: PointId) -> Element {
        self.embed(&BaseFun::indicator(self.points(), y))
    }

    fn one(&self) -> Element {
        self.embed(&BaseFun::constant(self.points(), Rational::one()))
    }

    fn degree(&self, a: &Element) -> u32 {
        a.keys().map(|&i| self.basis_degree(i)).max().unwrap_or(0)
    }

    fn mul(&self, a: &Element, b: &Element) -> Result<Element, AlgebroidError> {
        let mut out = Element::new();
        for (&i, ca) in a.iter() {
            for (&j, cb) in b.iter() {
                out.axpy(&(ca * cb), &self.mul_basis(i, j)?);
            }
        }
        Ok(out)
    }

    fn delta(&self, a: &Element) -> TensorLL {
        let mut out = TensorLL::new();
        for (&i, c) in a.iter() {
            out.axpy(c, &self.delta_basis(i));
        }
        out
    }

    fn counit(&self, a: &Element) -> BaseFun {
        let mut f = BaseFun::zero(self.points());
        for (&i, c) in a.iter() {
            let y = self.basis_point(i);
            let v = f.at(y) + c * self.counit_basis(i);
            f.set(y, v);
        }
        f
    }

    fn antipode(&self, a: &Element) -> Element {
        let mut out = Element::new();
        for (&i, c) in a.iter() {
            out.axpy(c, &self.antipode_basis(i));
        }
        out
    }

    /// `ρ(a)(r) = ε(a·r)`.
    fn anchor(&self, a: &Element, r: &BaseFun) -> Result<BaseFun, AlgebroidError> {
        Ok(self.counit(&self.mul(a, &self.embed(r))?))
    }

    /// Left action `r·a`, scaling each summand `A_y` by `r(y)`.
    fn scale_left(&self, r: &BaseFun, a: &Element) -> Element {
        a.iter().map(|(&i, c)| (i, c * r.at(self.basis_point(i)))).collect()
    }

    /// `1_y·a`, the component of `a` in `A_y`.
    fn restrict(&self, a: &Element, y: PointId) -> Element {
        a.filtered(|&i| self.basis_point(i) == y)
    }

    /// `a ⊗ b` in `A ⊗_R A`.
    fn tensor(&self, a: &Element, b: &Element) -> TensorLL {
        let mut out = TensorLL::new();
        for (&i, ca) in a.iter() {
            for (&j, cb) in b.iter() {
                if self.basis_point(i) == self.basis_point(j) {
                    out.add_term((i, j), ca * cb);
                }
            }
        }
        out
    }

    /// Factorwise product of tensors, summed over all pairs of terms and
    /// reduced to `A ⊗_R A`. Well defined when the left factor lies in the
    /// Takeuchi subspace, in particular on images of `Δ`.
    fn tensor_mul(&self, s: &TensorLL, t: &TensorLL) -> Result<TensorLL, AlgebroidError> {
        let mut out = TensorLL::new();
        for ((a, b), cs) in s.iter() {
            for ((c, d), ct) in t.iter() {
                let left = self.mul_basis(*a, *c)?;
                let right = self.mul_basis(*b, *d)?;
                let coeff = cs * ct;
                for (&l, cl) in left.iter() {
                    for (&r, cr) in right.iter() {
                        if self.basis_point(l) == self.basis_point(r) {
                            out.add_term((l, r), &coeff * cl * cr);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Applies `f ⊗ g` to a tensor, reducing the result over `R`.
    fn tensor_map(&self, t: &TensorLL, f: &dyn Fn(usize) -> Element, g: &dyn Fn(usize) -> Element) -> TensorLL {
        let mut out = TensorLL::new();
        for ((a, b), c) in t.iter() {
            let fa = f(*a);
            let gb = g(*b);
            out.axpy(c, &self.tensor(&fa, &gb));
        }
        out
    }

    fn format(&self, a: &Element) -> String {
        format_items(a.iter().map(|(&i, c)| (self.basis_label(i), false, c)))
    }

    fn format_tensor(&self, t: &TensorLL) -> String {
        format_items(
            t.iter()
                .map(|((a, b), c)| (format!("{} ⊗ {}", self.basis_label(*a), self.basis_label(*b)), false, c)),
        )
    }

    fn format_base(&self, f: &BaseFun) -> String {
        let parts: Vec<String> = self
            .base()
            .points()
            .map(|x| format!("{}: {}", self.base().name(x), f.at(x)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Parses `c*label + …`; `0` is the zero element.
    fn parse(&self, input: &str) -> Result<Element, AlgebroidError> {
        let err = |reason: String| AlgebroidError::Parse {
            input: input.to_string(),
            reason,
        };
        if input.trim() == "0" {
            return Ok(Element::new());
        }
        if input.trim().is_empty() {
            return Err(err("empty input".to_string()));
        }
        let mut out = Element::new();
        for (neg, term) in split_signed_terms(input) {
            let (c, body) = split_coefficient(&term).map_err(err)?;
            let body = body.ok_or_else(|| err(format!("term {term:?} names no basis element")))?;
            let i = self.parse_basis_label(&body).map_err(err)?;
            out.add_term(i, if neg { -c } else { c });
        }
        Ok(out)
    }

    /// A sparse random element with small coefficients, drawn from basis
    /// vectors of degree at most `max_degree`.
    fn random_element(&self, rng: &mut dyn rand::RngCore, max_degree: u32, max_terms: usize) -> Element {
        let pool: Vec<usize> = (0..self.dim())
            .filter(|&i| self.basis_degree(i) <= max_degree)
            .collect();
        let mut out = Element::new();
        if pool.is_empty() {
            return out;
        }
        let terms = rng.gen_range(1..=max_terms.max(1));
        for _ in 0..terms {
            let i = pool[rng.gen_range(0..pool.len())];
            out.add_term(i, random_coefficient(rng));
        }
        out
    }
}

pub(crate) fn random_coefficient(rng: &mut dyn rand::RngCore) -> Rational {
    let mut n = 0;
    while n == 0 {
        n = rng.gen_range(-3i64..=3);
    }
    let d = if rng.gen_bool(0.25) { 2 } else { 1 };
    Rational::new(n, d)
}

/// Either kind of algebroid behind one interface.
#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum HopfAlgebroid {
    Convolution(ConvolutionAlgebroid),
    Table(TableAlgebroid),
}

impl HopfAlgebroid {
    pub fn kind(&self) -> &'static str {
        match self {
            HopfAlgebroid::Convolution(_) => "constructed",
            HopfAlgebroid::Table(_) => "table",
        }
    }

    fn inner(&self) -> &dyn Algebroid {
        match self {
            HopfAlgebroid::Convolution(c) => c,
            HopfAlgebroid::Table(t) => t,
        }
    }
}

impl Algebroid for HopfAlgebroid {
    fn base(&self) -> &BaseSpace {
        self.inner().base()
    }
    fn dim(&self) -> usize {
        self.inner().dim()
    }
    fn basis_point(&self, i: usize) -> PointId {
        self.inner().basis_point(i)
    }
    fn basis_label(&self, i: usize) -> String {
        self.inner().basis_label(i)
    }
    fn basis_degree(&self, i: usize) -> u32 {
        self.inner().basis_degree(i)
    }
    fn truncation(&self) -> Option<u32> {
        self.inner().truncation()
    }
    fn embed(&self, r: &BaseFun) -> Element {
        self.inner().embed(r)
    }
    fn mul_basis(&self, i: usize, j: usize) -> Result<Element, AlgebroidError> {
        self.inner().mul_basis(i, j)
    }
    fn delta_basis(&self, i: usize) -> TensorLL {
        self.inner().delta_basis(i)
    }
    fn counit_basis(&self, i: usize) -> Rational {
        self.inner().counit_basis(i)
    }
    fn antipode_basis(&self, i: usize) -> Element {
        self.inner().antipode_basis(i)
    }
    fn as_convolution(&self) -> Option<&ConvolutionAlgebroid> {
        self.inner().as_convolution()
    }
    fn parse_basis_label(&self, label: &str) -> Result<usize, String> {
        self.inner().parse_basis_label(label)
    }
}
