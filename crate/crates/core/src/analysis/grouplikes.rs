use crate::algebroid::{Algebroid, Element};
use crate::exact::{QMatrix, Rational};
use crate::groupoid::{ArrowId, PointId};

use super::AnalysisError;

/// Largest `dim A_y` handled by the eigenvector search on tables.
pub const TABLE_SOLVER_DIM_LIMIT: usize = 12;
const DIVISOR_SEARCH_BOUND: u64 = 1_000_000;

/// A grouplike element `ξ ∈ A_y`: `Δξ = ξ⊗ξ` and `ε(ξ)(y) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grouplike {
    pub point: PointId,
    pub element: Element,
    /// `Δ(Sξ) = Sξ⊗Sξ`, so `ξ` is `S`-invariant weakly grouplike with `ξ′ = ξ`.
    pub s_invariant: bool,
    /// For constructed algebroids, the input arrow supporting `ξ`.
    pub arrow: Option<ArrowId>,
}

pub fn is_grouplike_at(alg: &dyn Algebroid, y: PointId, c: &Element) -> bool {
    alg.delta(c) == alg.tensor(c, c) && alg.counit(c).at(y).is_one()
}

fn s_invariant(alg: &dyn Algebroid, c: &Element) -> bool {
    let s = alg.antipode(c);
    alg.delta(&s) == alg.tensor(&s, &s)
}

/// All grouplike elements of `A_y`, each flagged for `S`-invariance.
pub fn solve_grouplikes_at(alg: &dyn Algebroid, y: PointId) -> Result<Vec<Grouplike>, AnalysisError> {
    let found = match alg.as_convolution() {
        Some(conv) => {
            let env = conv.enveloping(y);
            let units = env.grouplikes();
            let mut out = Vec::new();
            for g in conv.groupoid().arrows_into(y) {
                for u in &units {
                    out.push((conv.element_at(g, u), Some(g)));
                }
            }
            out
        }
        None => table_grouplikes(alg, y)?.into_iter().map(|c| (c, None)).collect(),
    };
    let mut out = Vec::new();
    for (element, arrow) in found {
        if !is_grouplike_at(alg, y, &element) {
            return Err(AnalysisError::SolverIncomplete {
                point: alg.base().name(y).to_string(),
                reason: format!("candidate {} fails Δξ = ξ⊗ξ", alg.format(&element)),
            });
        }
        out.push(Grouplike {
            point: y,
            s_invariant: s_invariant(alg, &element),
            element,
            arrow,
        });
    }
    Ok(out)
}

pub fn solve_grouplikes(alg: &dyn Algebroid) -> Result<Vec<Vec<Grouplike>>, AnalysisError> {
    alg.base().points().map(|y| solve_grouplikes_at(alg, y)).collect()
}

/// Grouplikes of `A_y` from structure constants.
///
/// Writing `Δb_i = Σ D^i_{jk} b_j⊗b_k` and `L_j` for the matrix with
/// `(L_j)_{k,i} = D^i_{jk}`, the equation `Δc = c⊗c` reads `L_j c = c_j c`
/// for every `j`: `c` is a common eigenvector and `c_j` is an eigenvalue of
/// `L_j`. The search picks one rational eigenvalue per `j`, keeps the
/// linear constraints `(L_j − λ_j)c = 0`, `c_j = λ_j`, `ε(c) = 1`, and
/// prunes inconsistent branches. Distinct grouplikes are linearly
/// independent, so a consistent leaf has exactly one solution.
fn table_grouplikes(alg: &dyn Algebroid, y: PointId) -> Result<Vec<Element>, AnalysisError> {
    let idx = alg.basis_at(y);
    let d = idx.len();
    let name = alg.base().name(y).to_string();
    if d > TABLE_SOLVER_DIM_LIMIT {
        return Err(AnalysisError::SolverIncomplete {
            point: name,
            reason: format!("dim A_y = {d} exceeds the solver bound {TABLE_SOLVER_DIM_LIMIT}"),
        });
    }
    if d == 0 {
        return Ok(Vec::new());
    }
    let local: std::collections::HashMap<usize, usize> = idx.iter().enumerate().map(|(l, &i)| (i, l)).collect();
    let mut ls = vec![QMatrix::zeros(d, d); d];
    for (col, &i) in idx.iter().enumerate() {
        for (&(j, k), c) in alg.delta_basis(i).iter() {
            let (Some(&lj), Some(&lk)) = (local.get(&j), local.get(&k)) else {
                continue;
            };
            ls[lj][(lk, col)] = c.clone();
        }
    }
    let mut eigen = Vec::with_capacity(d);
    for (j, l) in ls.iter().enumerate() {
        let values = l
            .rational_eigenvalues(DIVISOR_SEARCH_BOUND)
            .ok_or_else(|| AnalysisError::SolverIncomplete {
                point: name.clone(),
                reason: format!("eigenvalue search for coordinate {j} exceeds its bound"),
            })?;
        eigen.push(values);
    }
    let mut counit_row: Vec<Rational> = idx.iter().map(|&i| alg.counit_basis(i)).collect();
    counit_row.push(Rational::one());
    let mut search = Search {
        d,
        ls: &ls,
        eigen: &eigen,
        solutions: Vec::new(),
        underdetermined: false,
    };
    search.descend(0, vec![counit_row]);
    if search.underdetermined {
        return Err(AnalysisError::SolverIncomplete {
            point: name,
            reason: "a consistent eigenvalue choice leaves free parameters".to_string(),
        });
    }
    Ok(search
        .solutions
        .into_iter()
        .map(|v| {
            v.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(l, c)| (idx[l], c))
                .collect()
        })
        .collect())
}

enum Feasibility {
    Inconsistent,
    Unique(Vec<Rational>),
    Open,
}

/// Classifies the affine system and returns its reduced nonzero rows.
fn feasibility(rows: Vec<Vec<Rational>>, d: usize) -> (Feasibility, Vec<Vec<Rational>>) {
    let m = QMatrix::from_rows(rows, d + 1).expect("rows have d + 1 entries");
    let (r, pivots) = m.rref();
    let reduced: Vec<Vec<Rational>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    if pivots.contains(&d) {
        return (Feasibility::Inconsistent, reduced);
    }
    if pivots.len() < d {
        return (Feasibility::Open, reduced);
    }
    let mut x = vec![Rational::zero(); d];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, d)].clone();
    }
    (Feasibility::Unique(x), reduced)
}

struct Search<'a> {
    d: usize,
    ls: &'a [QMatrix],
    eigen: &'a [Vec<Rational>],
    solutions: Vec<Vec<Rational>>,
    underdetermined: bool,
}

impl Search<'_> {
    fn is_eigenvector(&self, j: usize, x: &[Rational]) -> bool {
        let lx = self.ls[j].mul_vec(x).expect("square");
        lx.iter().zip(x).all(|(a, b)| *a == b * &x[j])
    }

    fn descend(&mut self, j: usize, rows: Vec<Vec<Rational>>) {
        let (state, rows) = feasibility(rows, self.d);
        match state {
            Feasibility::Inconsistent => return,
            Feasibility::Unique(x) => {
                if (j..self.d).all(|k| self.is_eigenvector(k, &x)) {
                    self.solutions.push(x);
                }
                return;
            }
            Feasibility::Open if j == self.d => {
                self.underdetermined = true;
                return;
            }
            _ => {}
        }
        for lambda in &self.eigen[j] {
            let mut next = rows.clone();
            for k in 0..self.d {
                let mut row: Vec<Rational> = (0..self.d).map(|i| self.ls[j][(k, i)].clone()).collect();
                row[k] -= lambda;
                row.push(Rational::zero());
                next.push(row);
            }
            let mut fix = vec![Rational::zero(); self.d + 1];
            fix[j] = Rational::one();
            fix[self.d] = lambda.clone();
            next.push(fix);
            self.descend(j + 1, next);
        }
    }
}
