//! Preset models and a seeded random generator of constructed models.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{TableAlgebroid, TableData};
use crate::exact::{QMatrix, Rational};
use crate::groupoid::{BaseSpace, FiniteGroupoid};
use crate::lie::{BundleAction, LieBundle, LieFiber};

use super::{q, ModelFile, DEFAULT_TRUNCATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Z2Line,
    PairH3,
    FunS3,
    Random,
}

impl FromStr for Preset {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "z2line" => Ok(Preset::Z2Line),
            "pairh3" => Ok(Preset::PairH3),
            "funs3" => Ok(Preset::FunS3),
            "random" => Ok(Preset::Random),
            other => Err(format!("unknown preset {other:?} (z2line, pairh3, funs3, random)")),
        }
    }
}

pub fn generate(preset: Preset, seed: u64) -> ModelFile {
    match preset {
        Preset::Z2Line => z2line(),
        Preset::PairH3 => pairh3(),
        Preset::FunS3 => funs3(),
        Preset::Random => random_model(seed),
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

/// ℤ/2 acting on a line by `−1`, over a single point, `N = 4`.
pub fn z2line() -> ModelFile {
    let base = BaseSpace::new(["x"]).unwrap();
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
    ModelFile::from_constructed(&g, &bundle, &action, DEFAULT_TRUNCATION)
}

/// The pair groupoid on `{x, y}` with Heisenberg fibers and the identity
/// action, `N = 4`.
pub fn pairh3() -> ModelFile {
    let base = BaseSpace::new(["x", "y"]).unwrap();
    let t = |a: &str, b: &str, c: &str| (s(a), s(b), s(c));
    let g = FiniteGroupoid::from_table(
        base.clone(),
        vec![
            t("1x", "x", "x"),
            t("1y", "y", "y"),
            t("g", "x", "y"),
            t("gi", "y", "x"),
        ],
        vec![
            t("1x", "1x", "1x"),
            t("1y", "1y", "1y"),
            t("g", "1x", "g"),
            t("1y", "g", "g"),
            t("gi", "1y", "gi"),
            t("1x", "gi", "gi"),
            t("g", "gi", "1y"),
            t("gi", "g", "1x"),
        ],
    )
    .unwrap();
    let bundle = LieBundle::new(base, vec![LieFiber::heisenberg(), LieFiber::heisenberg()]).unwrap();
    let action = BundleAction::identity(&g, &bundle).unwrap();
    ModelFile::from_constructed(&g, &bundle, &action, DEFAULT_TRUNCATION)
}

/// Permutations of `{0, 1, 2}` in one-line notation, identity first.
fn s3() -> Vec<[usize; 3]> {
    vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
}

fn compose3(p: &[usize; 3], r: &[usize; 3]) -> [usize; 3] {
    [p[r[0]], p[r[1]], p[r[2]]]
}

fn invert3(p: &[usize; 3]) -> [usize; 3] {
    let mut out = [0; 3];
    for (i, &v) in p.iter().enumerate() {
        out[v] = i;
    }
    out
}

/// The commutative Hopf algebra `Fun(S₃, ℚ)` over a point, in the basis of
/// indicator functions `δ_g`.
pub fn funs3_table() -> TableAlgebroid {
    let g = s3();
    let idx = |p: &[usize; 3]| g.iter().position(|x| x == p).unwrap();
    let one = Rational::one();
    let labels = g.iter().map(|p| format!("d{}{}{}", p[0], p[1], p[2])).collect();
    let mut delta = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let mut terms = Vec::new();
        for (j, h) in g.iter().enumerate() {
            let k = idx(&compose3(&invert3(h), p));
            terms.push((j, k, one.clone()));
        }
        delta.push((i, terms));
    }
    TableAlgebroid::import(TableData {
        base: BaseSpace::new(["pt"]).unwrap(),
        labels,
        points: vec![0; 6],
        units: vec![(0..6).map(|i| (i, one.clone())).collect()],
        mul: (0..6).map(|i| (i, i, vec![(i, one.clone())])).collect(),
        delta,
        counit: vec![(0, one.clone())],
        antipode: g
            .iter()
            .enumerate()
            .map(|(i, p)| (i, vec![(idx(&invert3(p)), one.clone())]))
            .collect(),
    })
    .expect("Fun(S3) tables are coherent")
}

pub fn funs3() -> ModelFile {
    ModelFile::from_table(&funs3_table())
}

/// The group algebra `ℚ[ℤ/m]` over a point.
pub fn group_algebra(m: usize) -> TableAlgebroid {
    let one = Rational::one();
    TableAlgebroid::import(TableData {
        base: BaseSpace::new(["pt"]).unwrap(),
        labels: (0..m).map(|i| format!("r{i}")).collect(),
        points: vec![0; m],
        units: vec![vec![(0, one.clone())]],
        mul: (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, vec![((i + j) % m, one.clone())]))
            .collect(),
        delta: (0..m).map(|i| (i, vec![(i, i, one.clone())])).collect(),
        counit: (0..m).map(|i| (i, one.clone())).collect(),
        antipode: (0..m).map(|i| (i, vec![((m - i) % m, one.clone())])).collect(),
    })
    .expect("group algebra tables are coherent")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FiberKind {
    Line,
    Plane,
    Heisenberg,
}

impl FiberKind {
    fn fiber(self) -> LieFiber {
        match self {
            FiberKind::Line => LieFiber::abelian(1),
            FiberKind::Plane => LieFiber::abelian_named(vec![s("X"), s("Y")]),
            FiberKind::Heisenberg => LieFiber::heisenberg(),
        }
    }
}

/// An automorphism whose order divides `m`.
fn periodic_automorphism(kind: FiberKind, m: usize, rng: &mut ChaCha8Rng) -> QMatrix {
    let mut options: Vec<QMatrix> = Vec::new();
    match kind {
        FiberKind::Line => {
            options.push(QMatrix::identity(1));
            if m.is_multiple_of(2) {
                options.push(QMatrix::from_int_rows(&[&[-1]]));
            }
        }
        FiberKind::Plane => {
            options.push(QMatrix::identity(2));
            if m.is_multiple_of(2) {
                options.push(QMatrix::from_int_rows(&[&[-1, 0], &[0, -1]]));
                options.push(QMatrix::from_int_rows(&[&[1, 0], &[0, -1]]));
                options.push(QMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
            }
            if m.is_multiple_of(3) {
                options.push(QMatrix::from_int_rows(&[&[0, -1], &[1, -1]]));
            }
            if m.is_multiple_of(4) {
                options.push(QMatrix::from_int_rows(&[&[0, -1], &[1, 0]]));
            }
        }
        FiberKind::Heisenberg => {
            options.push(QMatrix::identity(3));
            if m.is_multiple_of(2) {
                options.push(QMatrix::from_int_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]));
                options.push(QMatrix::from_int_rows(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]));
            }
            if m.is_multiple_of(3) {
                options.push(QMatrix::from_int_rows(&[&[0, -1, 0], &[1, -1, 0], &[0, 0, 1]]));
            }
            if m.is_multiple_of(4) {
                options.push(QMatrix::from_int_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]));
            }
        }
    }
    // Prefer a nontrivial option when one exists.
    if options.len() > 1 && rng.gen_bool(0.8) {
        options.remove(0);
    }
    options.choose(rng).unwrap().clone()
}

fn small_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    [q(1), q(-1), q(2), q(-2), Rational::new(1, 2)]
        .choose(rng)
        .unwrap()
        .clone()
}

/// A random Lie algebra automorphism.
fn random_automorphism(kind: FiberKind, rng: &mut ChaCha8Rng) -> QMatrix {
    loop {
        let mut r = || q(rng.gen_range(-2..=2));
        let m = match kind {
            FiberKind::Line => QMatrix::diagonal(&[small_nonzero(rng)]),
            FiberKind::Plane => QMatrix::from_rows(vec![vec![r(), r()], vec![r(), r()]], 2).unwrap(),
            FiberKind::Heisenberg => {
                let (a, b, c, d, e, f) = (r(), r(), r(), r(), r(), r());
                let det = &a * &d - &b * &c;
                QMatrix::from_rows(vec![vec![a, b, q(0)], vec![c, d, q(0)], vec![e, f, det]], 3).unwrap()
            }
        };
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A random constructed model with at most 8 arrows: a disjoint union of
/// components, each the product of a pair groupoid on one or two points
/// with a cyclic group, carrying a line, plane or Heisenberg fiber. The
/// action on a component is `(j ← i, h) ↦ A_j ψ^h A_i⁻¹` for random
/// automorphisms `A_i` and an automorphism `ψ` of order dividing the group
/// order, which is functorial by construction.
pub fn random_model(seed: u64) -> ModelFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shapes: [(usize, usize); 6] = [(1, 1), (1, 2), (1, 3), (1, 4), (2, 1), (2, 2)];
    let mut budget = 8;
    let mut components = Vec::new();
    let wanted = rng.gen_range(1..=3);
    while components.len() < wanted {
        let fitting: Vec<_> = shapes.iter().filter(|(k, m)| k * k * m <= budget).collect();
        let Some(&&(k, m)) = fitting.choose(&mut rng) else {
            break;
        };
        budget -= k * k * m;
        let kind = *[FiberKind::Line, FiberKind::Plane, FiberKind::Heisenberg]
            .choose(&mut rng)
            .unwrap();
        components.push((k, m, kind));
    }

    let mut point_names = Vec::new();
    let mut arrows = Vec::new();
    let mut triples = Vec::new();
    let mut fibers = Vec::new();
    let mut matrices = Vec::new();
    for &(k, m, kind) in &components {
        let first = point_names.len();
        let pts: Vec<String> = (first..first + k).map(|i| format!("p{i}")).collect();
        point_names.extend(pts.iter().cloned());
        let conj: Vec<QMatrix> = (0..k).map(|_| random_automorphism(kind, &mut rng)).collect();
        let psi = periodic_automorphism(kind, m, &mut rng);
        let id = |j: usize, i: usize, h: usize| format!("{}.{}.{}", pts[j], pts[i], h);
        for j in 0..k {
            for i in 0..k {
                for h in 0..m {
                    arrows.push((id(j, i, h), pts[i].clone(), pts[j].clone()));
                    let mat = conj[j]
                        .mul(&psi.pow(h as u32))
                        .and_then(|x| x.mul(&conj[i].inverse().unwrap()))
                        .unwrap();
                    matrices.push(mat);
                }
            }
        }
        for l in 0..k {
            for j in 0..k {
                for i in 0..k {
                    for h1 in 0..m {
                        for h2 in 0..m {
                            triples.push((id(l, j, h1), id(j, i, h2), id(l, i, (h1 + h2) % m)));
                        }
                    }
                }
            }
        }
        for _ in 0..k {
            fibers.push(kind.fiber());
        }
    }
    let base = BaseSpace::new(point_names).unwrap();
    let g = FiniteGroupoid::from_table(base.clone(), arrows, triples).unwrap();
    let bundle = LieBundle::new(base, fibers).unwrap();
    let action = BundleAction::new(&g, &bundle, matrices).unwrap();
    ModelFile::from_constructed(&g, &bundle, &action, DEFAULT_TRUNCATION)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{check_axioms, Algebroid};

    #[test]
    fn random_models_are_valid_and_deterministic() {
        for seed in 0..30 {
            let file = random_model(seed);
            assert_eq!(file, random_model(seed));
            let model = file.resolve().unwrap();
            assert!(
                model.validate().is_valid(),
                "seed {seed}: {:?}",
                model.validate().lines()
            );
            let arrows = file.groupoid.as_ref().unwrap().arrows.len();
            assert!((1..=8).contains(&arrows));
        }
    }

    #[test]
    fn tables_pass_the_axioms() {
        let f = funs3_table();
        assert_eq!(f.dim(), 6);
        let report = check_axioms(&f, 0, 0);
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.mode, "full-basis");
        assert!(check_axioms(&group_algebra(2), 0, 0).passed());
    }
}
