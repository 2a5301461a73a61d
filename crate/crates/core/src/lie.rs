//! Finite-dimensional rational Lie algebras by structure constants, bundles
//! of them over a finite base, and groupoid actions by Lie isomorphisms.

use std::fmt;

use thiserror::Error;

use crate::exact::{QMatrix, QVector, Rational, SparseVec};
use crate::groupoid::{ArrowId, BaseSpace, FiniteGroupoid, PointId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("basis index {index} out of range for a fiber of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket [{i},{j}] has {found} coefficients, expected {dim}")]
    BracketLength {
        i: usize,
        j: usize,
        found: usize,
        dim: usize,
    },
    #[error("bracket [{i},{j}] given twice")]
    DuplicateBracket { i: usize, j: usize },
    #[error("invalid generator names: {0}")]
    InvalidNames(String),
    #[error("bundle over {points} points given {fibers} fibers")]
    FiberCount { points: usize, fibers: usize },
    #[error("action matrix for arrow {arrow:?} has shape {found:?}, expected {expected:?}")]
    DimensionMismatch {
        arrow: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("action has {found} matrices for {arrows} arrows")]
    MatrixCount { arrows: usize, found: usize },
}

/// A Lie algebra over ℚ with basis `e_0, …, e_{d-1}` and named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieFiber {
    names: Vec<String>,
    /// `brackets[i * d + j] = [e_i, e_j]`.
    brackets: Vec<SparseVec<usize>>,
}

/// Default generator names for a fiber of dimension `dim`.
pub fn default_names(dim: usize) -> Vec<String> {
    if dim == 1 {
        return vec!["X".to_string()];
    }
    let width = dim.to_string().len();
    (1..=dim).map(|i| format!("e{i:0width$}")).collect()
}

/// Generator names must be nonempty, alphabetic-led, free of operator
/// characters, unique, and prefix-free so that concatenated monomials parse
/// back unambiguously.
pub fn check_names(names: &[String]) -> Result<(), LieError> {
    for n in names {
        let mut chars = n.chars();
        let ok_start = chars.next().is_some_and(|c| c.is_alphabetic() || c == '_');
        let ok_rest = n.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if !ok_start || !ok_rest {
            return Err(LieError::InvalidNames(format!("{n:?} is not a valid generator name")));
        }
    }
    for (i, a) in names.iter().enumerate() {
        for (j, b) in names.iter().enumerate() {
            if i != j && b.starts_with(a.as_str()) {
                return Err(LieError::InvalidNames(format!("{a:?} is a prefix of {b:?}")));
            }
        }
    }
    Ok(())
}

impl LieFiber {
    pub fn abelian(dim: usize) -> Self {
        Self::abelian_named(default_names(dim))
    }

    pub fn abelian_named(names: Vec<String>) -> Self {
        let d = names.len();
        LieFiber {
            names,
            brackets: vec![SparseVec::new(); d * d],
        }
    }

    /// The Heisenberg algebra with basis `P, Q, Z` and `[P, Q] = Z`.
    pub fn heisenberg() -> Self {
        let names = vec!["P".to_string(), "Q".to_string(), "Z".to_string()];
        LieFiber::from_brackets(names, vec![(0, 1, vec![0.into(), 0.into(), 1.into()])]).unwrap()
    }

    /// Builds a fiber from a list of `(i, j, [e_i, e_j])` entries.
    ///
    /// When `(i, j)` is given and `(j, i)` is not, `[e_j, e_i]` is set to the
    /// negative. Pairs that are given both ways are kept as written so that
    /// [`LieFiber::validate`] can flag inconsistencies.
    pub fn from_brackets(names: Vec<String>, entries: Vec<(usize, usize, Vec<Rational>)>) -> Result<Self, LieError> {
        check_names(&names)?;
        let d = names.len();
        let mut given = vec![false; d * d];
        let mut brackets = vec![SparseVec::new(); d * d];
        for (i, j, coeffs) in &entries {
            for &idx in [i, j] {
                if idx >= d {
                    return Err(LieError::IndexOutOfRange { index: idx, dim: d });
                }
            }
            if coeffs.len() != d {
                return Err(LieError::BracketLength {
                    i: *i,
                    j: *j,
                    found: coeffs.len(),
                    dim: d,
                });
            }
            if given[i * d + j] {
                return Err(LieError::DuplicateBracket { i: *i, j: *j });
            }
            given[i * d + j] = true;
            brackets[i * d + j] = coeffs.iter().cloned().enumerate().collect();
        }
        for i in 0..d {
            for j in 0..d {
                if given[i * d + j] && !given[j * d + i] {
                    brackets[j * d + i] = brackets[i * d + j].neg();
                }
            }
        }
        Ok(LieFiber { names, brackets })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `[e_i, e_j]` in the basis.
    pub fn bracket(&self, i: usize, j: usize) -> &SparseVec<usize> {
        &self.brackets[i * self.dim() + j]
    }

    /// Structure constant `c_ij^k`.
    pub fn constant(&self, i: usize, j: usize, k: usize) -> Rational {
        self.bracket(i, j).get(&k)
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.iter().all(SparseVec::is_zero)
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket_vec(&self, u: &[Rational], v: &[Rational]) -> QVector {
        let d = self.dim();
        let mut out = SparseVec::new();
        for (i, ui) in u.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, vj) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                out.axpy(&(ui * vj), self.bracket(i, j));
            }
        }
        (0..d).map(|k| out.get(&k)).collect()
    }

    /// Nonzero `(i, j, coefficients)` entries with `i < j`, the form used in files.
    pub fn bracket_entries(&self) -> Vec<(usize, usize, Vec<Rational>)> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let b = self.bracket(i, j);
                let antisym = *self.bracket(j, i) == b.neg();
                if b.is_zero() || (j < i && antisym) {
                    continue;
                }
                out.push((i, j, (0..d).map(|k| b.get(&k)).collect()));
            }
        }
        out
    }

    pub fn validate(&self) -> Vec<LieViolation> {
        let d = self.dim();
        let mut v = Vec::new();
        for i in 0..d {
            for j in i..d {
                if *self.bracket(i, j) != self.bracket(j, i).neg() {
                    v.push(LieViolation::Antisymmetry { i, j });
                }
            }
        }
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    if !self.jacobiator(i, j, k).is_zero() {
                        v.push(LieViolation::Jacobi { i, j, k });
                    }
                }
            }
        }
        v
    }

    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`.
    fn jacobiator(&self, i: usize, j: usize, k: usize) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            for (l, coeff) in self.bracket(b, c) {
                out.axpy(coeff, self.bracket(a, *l));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LieViolation {
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
}

impl fmt::Display for LieViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieViolation::Antisymmetry { i, j } => write!(f, "[e{i},e{j}] != -[e{j},e{i}]"),
            LieViolation::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on (e{i}, e{j}, e{k})"),
        }
    }
}

/// A Lie algebra attached to every point of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBundle {
    base: BaseSpace,
    fibers: Vec<LieFiber>,
}

impl LieBundle {
    pub fn new(base: BaseSpace, fibers: Vec<LieFiber>) -> Result<Self, LieError> {
        if fibers.len() != base.len() {
            return Err(LieError::FiberCount {
                points: base.len(),
                fibers: fibers.len(),
            });
        }
        Ok(LieBundle { base, fibers })
    }

    /// The zero bundle.
    pub fn zero(base: BaseSpace) -> Self {
        let fibers = vec![LieFiber::abelian(0); base.len()];
        LieBundle { base, fibers }
    }

    pub fn base(&self) -> &BaseSpace {
        &self.base
    }

    pub fn fiber(&self, x: PointId) -> &LieFiber {
        &self.fibers[x]
    }

    pub fn fibers(&self) -> &[LieFiber] {
        &self.fibers
    }

    /// Per-fiber violations, tagged with the point name.
    pub fn validate(&self) -> Vec<(String, LieViolation)> {
        let mut out = Vec::new();
        for x in self.base.points() {
            for v in self.fibers[x].validate() {
                out.push((self.base.name(x).to_string(), v));
            }
        }
        out
    }
}

/// An action of a groupoid on a Lie bundle: one matrix per arrow, of shape
/// `dim 𝔟_{t(g)} × dim 𝔟_{s(g)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleAction {
    matrices: Vec<QMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ActionViolation {
    NotInvertible { arrow: String },
    BracketNotPreserved { arrow: String, i: usize, j: usize },
    UnitNotIdentity { point: String },
    NotFunctorial { g: String, h: String },
}

impl fmt::Display for ActionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionViolation::NotInvertible { arrow } => write!(f, "matrix of {arrow} is not invertible"),
            ActionViolation::BracketNotPreserved { arrow, i, j } => {
                write!(f, "matrix of {arrow} does not preserve [e{i},e{j}]")
            }
            ActionViolation::UnitNotIdentity { point } => write!(f, "unit at {point} does not act as the identity"),
            ActionViolation::NotFunctorial { g, h } => write!(f, "matrix({g}{h}) != matrix({g})matrix({h})"),
        }
    }
}

impl BundleAction {
    pub fn new(groupoid: &FiniteGroupoid, bundle: &LieBundle, matrices: Vec<QMatrix>) -> Result<Self, LieError> {
        if matrices.len() != groupoid.len() {
            return Err(LieError::MatrixCount {
                arrows: groupoid.len(),
                found: matrices.len(),
            });
        }
        for (g, m) in matrices.iter().enumerate() {
            let expected = (bundle.fiber(groupoid.tgt(g)).dim(), bundle.fiber(groupoid.src(g)).dim());
            if (m.rows(), m.cols()) != expected {
                return Err(LieError::DimensionMismatch {
                    arrow: groupoid.id(g).to_string(),
                    expected,
                    found: (m.rows(), m.cols()),
                });
            }
        }
        Ok(BundleAction { matrices })
    }

    /// The action by identity matrices; requires equal fiber dimensions
    /// along every arrow.
    pub fn identity(groupoid: &FiniteGroupoid, bundle: &LieBundle) -> Result<Self, LieError> {
        let matrices = groupoid
            .arrows()
            .iter()
            .map(|a| QMatrix::identity(bundle.fiber(a.src).dim()))
            .collect();
        BundleAction::new(groupoid, bundle, matrices)
    }

    pub fn matrix(&self, g: ArrowId) -> &QMatrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[QMatrix] {
        &self.matrices
    }

    pub fn validate(&self, groupoid: &FiniteGroupoid, bundle: &LieBundle) -> Vec<ActionViolation> {
        let mut v = Vec::new();
        for (g, m) in self.matrices.iter().enumerate() {
            let arrow = groupoid.id(g).to_string();
            if !m.is_square() || m.inverse().is_none() {
                v.push(ActionViolation::NotInvertible { arrow: arrow.clone() });
            }
            let src = bundle.fiber(groupoid.src(g));
            let tgt = bundle.fiber(groupoid.tgt(g));
            for i in 0..src.dim() {
                for j in (i + 1)..src.dim() {
                    let b = src.bracket(i, j);
                    let lhs_src: QVector = (0..src.dim()).map(|k| b.get(&k)).collect();
                    let lhs = m.mul_vec(&lhs_src).expect("shape checked");
                    let rhs = tgt.bracket_vec(&m.column(i), &m.column(j));
                    if lhs != rhs {
                        v.push(ActionViolation::BracketNotPreserved {
                            arrow: arrow.clone(),
                            i,
                            j,
                        });
                    }
                }
            }
        }
        for x in groupoid.base().points() {
            if let Some(e) = groupoid.try_unit(x) {
                if !self.matrices[e].is_identity() {
                    v.push(ActionViolation::UnitNotIdentity {
                        point: groupoid.base().name(x).to_string(),
                    });
                }
            }
        }
        for (g, h, gh) in groupoid.triples() {
            let prod = self.matrices[g].mul(&self.matrices[h]);
            if prod.as_ref() != Some(&self.matrices[gh]) {
                v.push(ActionViolation::NotFunctorial {
                    g: groupoid.id(g).to_string(),
                    h: groupoid.id(h).to_string(),
                });
            }
        }
        v.sort();
        v
    }
}
