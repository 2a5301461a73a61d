//! A direct implementation of `C_c(G)` on functions on arrows, built from
//! explicit composition formulas, and its comparison with the convolution
//! algebroid of the zero bundle.
#![allow(dead_code)]

use hopfalg::algebroid::{Algebroid, ConvolutionAlgebroid};
use hopfalg::enveloping::Monomial;
use hopfalg::exact::Rational;
use hopfalg::groupoid::{BaseSpace, FiniteGroupoid};
use hopfalg::lie::{BundleAction, LieBundle};

/// A groupoid given by arrow lists and a composition rule `compose(g, h) = g∘h`.
pub struct Oracle {
    pub points: Vec<String>,
    pub ids: Vec<String>,
    pub src: Vec<usize>,
    pub tgt: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

impl Oracle {
    pub fn from_rule(
        points: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        rule: impl Fn(usize, usize) -> Option<usize>,
    ) -> Self {
        let n = arrows.len();
        let compose = (0..n)
            .map(|g| {
                (0..n)
                    .map(|h| if arrows[h].2 == arrows[g].1 { rule(g, h) } else { None })
                    .collect()
            })
            .collect();
        Oracle {
            points,
            ids: arrows.iter().map(|a| a.0.clone()).collect(),
            src: arrows.iter().map(|a| a.1).collect(),
            tgt: arrows.iter().map(|a| a.2).collect(),
            compose,
        }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn unit(&self, x: usize) -> usize {
        (0..self.len())
            .find(|&e| self.src[e] == x && self.tgt[e] == x && self.compose[e][e] == Some(e))
            .unwrap()
    }

    pub fn inverse(&self, g: usize) -> usize {
        let u = self.unit(self.tgt[g]);
        (0..self.len()).find(|&h| self.compose[g][h] == Some(u)).unwrap()
    }

    pub fn groupoid(&self) -> FiniteGroupoid {
        let base = BaseSpace::new(self.points.clone()).unwrap();
        let arrows = (0..self.len())
            .map(|g| {
                (
                    self.ids[g].clone(),
                    self.points[self.src[g]].clone(),
                    self.points[self.tgt[g]].clone(),
                )
            })
            .collect();
        let mut triples = Vec::new();
        for g in 0..self.len() {
            for h in 0..self.len() {
                if let Some(gh) = self.compose[g][h] {
                    triples.push((self.ids[g].clone(), self.ids[h].clone(), self.ids[gh].clone()));
                }
            }
        }
        FiniteGroupoid::new_validated(base, arrows, triples).unwrap()
    }

    /// `δ_g * δ_h = δ_{g∘h}` when composable, else `0`.
    pub fn product(&self, f: &[Rational], k: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.len()];
        for (row, fg) in self.compose.iter().zip(f) {
            for (gh, kh) in row.iter().zip(k) {
                if let Some(gh) = *gh {
                    out[gh] = &out[gh] + &(fg * kh);
                }
            }
        }
        out
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// `ℤ/m` acting on `{0, …, n-1}` through `x ↦ x + 1 mod n` (with `n | m`).
pub fn cyclic_action(m: usize, n: usize) -> Oracle {
    let arrows: Vec<(String, usize, usize)> = (0..m)
        .flat_map(|k| (0..n).map(move |x| (format!("r{k}.{x}"), x, (x + k) % n)))
        .collect();
    let index = |k: usize, x: usize| k * n + x;
    Oracle::from_rule(names("p", n), arrows, |g, h| {
        let (k, _) = (g / n, g % n);
        let (l, x) = (h / n, h % n);
        Some(index((k + l) % m, x))
    })
}

/// The pair groupoid on `n` points, arrows `(i, j): j → i`.
pub fn pair(n: usize) -> Oracle {
    let arrows = (0..n)
        .flat_map(|i| (0..n).map(move |j| (format!("a{i}{j}"), j, i)))
        .collect();
    Oracle::from_rule(names("q", n), arrows, |g, h| Some((g / n) * n + h % n))
}

/// The disjoint union of two oracles.
pub fn union(a: Oracle, b: Oracle) -> Oracle {
    let (na, pa) = (a.len(), a.points.len());
    let mut arrows: Vec<(String, usize, usize)> = (0..na).map(|g| (a.ids[g].clone(), a.src[g], a.tgt[g])).collect();
    arrows.extend((0..b.len()).map(|g| (format!("b.{}", b.ids[g]), b.src[g] + pa, b.tgt[g] + pa)));
    let points = a
        .points
        .iter()
        .cloned()
        .chain(b.points.iter().map(|p| format!("b.{p}")))
        .collect();
    Oracle::from_rule(points, arrows, |g, h| match (g < na, h < na) {
        (true, true) => a.compose[g][h],
        (false, false) => b.compose[g - na][h - na].map(|k| k + na),
        _ => None,
    })
}

pub fn oracles() -> Vec<(&'static str, Oracle)> {
    vec![
        ("trivial", pair(1)),
        ("Z/2", cyclic_action(2, 1)),
        ("Z/5", cyclic_action(5, 1)),
        ("pair(2)", pair(2)),
        ("Z/4 on 2 points", cyclic_action(4, 2)),
        ("Z/2 on 2 points", cyclic_action(2, 2)),
        ("Z/3 + pair(2)", union(cyclic_action(3, 1), pair(2))),
        ("Z/2 on 2 points + Z/3", union(cyclic_action(2, 2), cyclic_action(3, 1))),
        ("Z/6 on 1 point", cyclic_action(6, 1)),
        (
            "Z/4 + Z/2 + trivial",
            union(union(cyclic_action(4, 1), cyclic_action(2, 1)), pair(1)),
        ),
    ]
}

pub fn convolution_of(oracle: &Oracle, truncation: u32) -> ConvolutionAlgebroid {
    let g = oracle.groupoid();
    let bundle = LieBundle::zero(g.base().clone());
    let action = BundleAction::identity(&g, &bundle).unwrap();
    ConvolutionAlgebroid::new(g, bundle, action, truncation).unwrap()
}

fn delta_vec(n: usize, g: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[g] = Rational::one();
    v
}

/// Compares product, `Δ`, `ε`, `S` and the units on every basis vector and
/// every pair of basis vectors, returning the first discrepancy.
pub fn compare(name: &str, oracle: &Oracle, truncation: u32) -> Result<(), String> {
    let alg = convolution_of(oracle, truncation);
    let g = alg.groupoid();
    let n = oracle.len();
    if alg.dim() != n {
        return Err(format!("{name}: dimension {} for {n} arrows", alg.dim()));
    }
    let index = |a: usize| {
        let arrow = g.arrow_by_id(&oracle.ids[a]).unwrap();
        alg.index_of(arrow, &Monomial::one(0)).unwrap()
    };
    let check = |ok: bool, what: String| if ok { Ok(()) } else { Err(format!("{name}: {what}")) };
    for a in 0..n {
        let i = index(a);
        let id = &oracle.ids[a];
        check(
            alg.basis_point(i) == oracle.tgt[a],
            format!("δ_{id} is not over its target"),
        )?;
        check(alg.counit_basis(i) == Rational::one(), format!("ε(δ_{id}) ≠ 1"))?;
        let delta = alg.delta_basis(i);
        check(
            delta.len() == 1 && delta.get(&(i, i)) == Rational::one(),
            format!("Δ(δ_{id}) ≠ δ_{id}⊗δ_{id}"),
        )?;
        let s = alg.antipode_basis(i);
        let inv = oracle.inverse(a);
        check(
            s.len() == 1 && s.get(&index(inv)) == Rational::one(),
            format!("S(δ_{id}) ≠ δ_{}", oracle.ids[inv]),
        )?;
        for b in 0..n {
            let expected = oracle.product(&delta_vec(n, a), &delta_vec(n, b));
            let got = alg.mul_basis(i, index(b)).map_err(|e| format!("{name}: {e}"))?;
            for (c, want) in expected.iter().enumerate() {
                check(
                    got.get(&index(c)) == *want,
                    format!("coefficient of δ_{} in δ_{id} * δ_{}", oracle.ids[c], oracle.ids[b]),
                )?;
            }
            check(got.len() <= 1, format!("δ_{id} * δ_{} has extra terms", oracle.ids[b]))?;
        }
    }
    for x in 0..oracle.points.len() {
        let unit = alg.unit_at(x);
        check(
            unit.len() == 1 && unit.get(&index(oracle.unit(x))) == Rational::one(),
            format!("1_{x}"),
        )?;
    }
    Ok(())
}
