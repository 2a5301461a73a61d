use thiserror::Error;

use crate::exact::Rational;
use crate::groupoid::{BaseFun, BaseSpace, PointId};

use super::{Algebroid, AlgebroidError, Element, TensorLL};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("table has {labels} labels but {points} point assignments for dimension {dim}")]
    DimensionMismatch { dim: usize, labels: usize, points: usize },
    #[error("basis index {index} out of range (dimension {dim}) in {context}")]
    IndexOutOfRange { index: usize, dim: usize, context: String },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("invalid basis label {0:?}")]
    InvalidLabel(String),
    #[error("point index {0} out of range")]
    UnknownPoint(usize),
    #[error("{context}: entry {index} lies over the wrong point")]
    PointMismatch { context: String, index: usize },
    #[error("{0} given twice")]
    Duplicate(String),
    #[error("no unit given for point {0:?}")]
    MissingUnit(String),
}

/// `(i, j, b_i b_j)` as sparse combinations.
pub type MulEntries = Vec<(usize, usize, Vec<(usize, Rational)>)>;
/// `(i, Δ(b_i))` as sparse combinations of basis pairs.
pub type DeltaEntries = Vec<(usize, Vec<(usize, usize, Rational)>)>;

/// Raw structure constants of a finite-dimensional algebroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableData {
    pub base: BaseSpace,
    pub labels: Vec<String>,
    /// The point `y` with basis vector `i` in `A_y`.
    pub points: Vec<PointId>,
    /// `1_y` for each point, as sparse combinations.
    pub units: Vec<Vec<(usize, Rational)>>,
    /// `b_i b_j = Σ c b_k`; absent pairs multiply to zero.
    pub mul: MulEntries,
    /// `Δ(b_i) = Σ c b_j ⊗ b_k`.
    pub delta: DeltaEntries,
    /// `ε(b_i) = c` at the point of `b_i`; absent entries are zero.
    pub counit: Vec<(usize, Rational)>,
    /// `S(b_i) = Σ c b_k`.
    pub antipode: Vec<(usize, Vec<(usize, Rational)>)>,
}

/// An algebroid imported from explicit tables.
#[derive(Clone, Debug)]
pub struct TableAlgebroid {
    base: BaseSpace,
    labels: Vec<String>,
    points: Vec<PointId>,
    units: Vec<Element>,
    mul: Vec<Element>,
    delta: Vec<TensorLL>,
    counit: Vec<Rational>,
    antipode: Vec<Element>,
}

fn valid_label(l: &str) -> bool {
    !l.is_empty()
        && l.chars().next().is_some_and(|c| !c.is_ascii_digit())
        && l.chars().all(|c| c.is_alphanumeric() || "_'()[]{}.,:".contains(c))
}

impl TableAlgebroid {
    /// Imports and checks the tables for coherence: indices in range,
    /// every product and coproduct term over the point of its left factor.
    /// The Hopf axioms themselves are left to the axiom checker.
    pub fn import(data: TableData) -> Result<Self, TableError> {
        let dim = data.labels.len();
        if data.points.len() != dim {
            return Err(TableError::DimensionMismatch {
                dim,
                labels: data.labels.len(),
                points: data.points.len(),
            });
        }
        for (i, l) in data.labels.iter().enumerate() {
            if !valid_label(l) {
                return Err(TableError::InvalidLabel(l.clone()));
            }
            if data.labels[..i].contains(l) {
                return Err(TableError::DuplicateLabel(l.clone()));
            }
        }
        for &p in &data.points {
            if p >= data.base.len() {
                return Err(TableError::UnknownPoint(p));
            }
        }
        let check = |index: usize, context: &str| {
            if index >= dim {
                Err(TableError::IndexOutOfRange {
                    index,
                    dim,
                    context: context.to_string(),
                })
            } else {
                Ok(())
            }
        };
        let at = |index: usize, y: PointId, context: &str| {
            check(index, context)?;
            if data.points[index] != y {
                return Err(TableError::PointMismatch {
                    context: context.to_string(),
                    index,
                });
            }
            Ok(())
        };

        if data.units.len() != data.base.len() {
            let missing = data.units.len().min(data.base.len());
            return Err(TableError::MissingUnit(
                data.base.names().get(missing).cloned().unwrap_or_default(),
            ));
        }
        let mut units = Vec::new();
        for (y, u) in data.units.iter().enumerate() {
            let ctx = format!("unit at {}", data.base.name(y));
            for (k, _) in u {
                at(*k, y, &ctx)?;
            }
            units.push(u.iter().cloned().collect::<Element>());
        }

        let mut mul = vec![Element::new(); dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, terms) in &data.mul {
            let ctx = format!("product {}·{}", i, j);
            check(*i, &ctx)?;
            check(*j, &ctx)?;
            if std::mem::replace(&mut seen[i * dim + j], true) {
                return Err(TableError::Duplicate(ctx));
            }
            for (k, _) in terms {
                at(*k, data.points[*i], &ctx)?;
            }
            mul[i * dim + j] = terms.iter().cloned().collect();
        }

        let mut delta = vec![TensorLL::new(); dim];
        let mut seen = vec![false; dim];
        for (i, terms) in &data.delta {
            let ctx = format!("coproduct of {i}");
            check(*i, &ctx)?;
            if std::mem::replace(&mut seen[*i], true) {
                return Err(TableError::Duplicate(ctx));
            }
            for (j, k, _) in terms {
                at(*j, data.points[*i], &ctx)?;
                at(*k, data.points[*i], &ctx)?;
            }
            delta[*i] = terms.iter().map(|(j, k, c)| ((*j, *k), c.clone())).collect();
        }

        let mut counit = vec![Rational::zero(); dim];
        let mut seen = vec![false; dim];
        for (i, c) in &data.counit {
            let ctx = format!("counit of {i}");
            check(*i, &ctx)?;
            if std::mem::replace(&mut seen[*i], true) {
                return Err(TableError::Duplicate(ctx));
            }
            counit[*i] = c.clone();
        }

        let mut antipode = vec![Element::new(); dim];
        let mut seen = vec![false; dim];
        for (i, terms) in &data.antipode {
            let ctx = format!("antipode of {i}");
            check(*i, &ctx)?;
            if std::mem::replace(&mut seen[*i], true) {
                return Err(TableError::Duplicate(ctx));
            }
            for (k, _) in terms {
                check(*k, &ctx)?;
            }
            antipode[*i] = terms.iter().cloned().collect();
        }

        Ok(TableAlgebroid {
            base: data.base,
            labels: data.labels,
            points: data.points,
            units,
            mul,
            delta,
            counit,
            antipode,
        })
    }

    /// The tables back in raw form, with zero entries omitted.
    pub fn to_data(&self) -> TableData {
        let dim = self.labels.len();
        let sparse = |e: &Element| e.iter().map(|(k, c)| (*k, c.clone())).collect::<Vec<_>>();
        let mut mul = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let p = &self.mul[i * dim + j];
                if !p.is_zero() {
                    mul.push((i, j, sparse(p)));
                }
            }
        }
        TableData {
            base: self.base.clone(),
            labels: self.labels.clone(),
            points: self.points.clone(),
            units: self.units.iter().map(sparse).collect(),
            mul,
            delta: (0..dim)
                .filter(|&i| !self.delta[i].is_zero())
                .map(|i| (i, self.delta[i].iter().map(|((j, k), c)| (*j, *k, c.clone())).collect()))
                .collect(),
            counit: (0..dim)
                .filter(|&i| !self.counit[i].is_zero())
                .map(|i| (i, self.counit[i].clone()))
                .collect(),
            antipode: (0..dim)
                .filter(|&i| !self.antipode[i].is_zero())
                .map(|i| (i, sparse(&self.antipode[i])))
                .collect(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl Algebroid for TableAlgebroid {
    fn base(&self) -> &BaseSpace {
        &self.base
    }

    fn dim(&self) -> usize {
        self.labels.len()
    }

    fn basis_point(&self, i: usize) -> PointId {
        self.points[i]
    }

    fn basis_label(&self, i: usize) -> String {
        self.labels[i].clone()
    }

    fn basis_degree(&self, _i: usize) -> u32 {
        0
    }

    fn truncation(&self) -> Option<u32> {
        None
    }

    fn embed(&self, r: &BaseFun) -> Element {
        let mut out = Element::new();
        for y in self.base.points() {
            out.axpy(r.at(y), &self.units[y]);
        }
        out
    }

    fn mul_basis(&self, i: usize, j: usize) -> Result<Element, AlgebroidError> {
        Ok(self.mul[i * self.labels.len() + j].clone())
    }

    fn delta_basis(&self, i: usize) -> TensorLL {
        self.delta[i].clone()
    }

    fn counit_basis(&self, i: usize) -> Rational {
        self.counit[i].clone()
    }

    fn antipode_basis(&self, i: usize) -> Element {
        self.antipode[i].clone()
    }
}
