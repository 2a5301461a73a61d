//! Finite groupoids over a finite base, their bisections, and isomorphism
//! search.
//!
//! Over a finite discrete base every groupoid is étale, so no topology is
//! carried; a bisection is just a set of arrows on which source and target
//! are injective.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::exact::Rational;

pub type PointId = usize;
pub type ArrowId = usize;

/// Default bound on the arrow count accepted by [`groupoid_isomorphic`].
pub const DEFAULT_ISO_ARROW_BOUND: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("base space must contain at least one point")]
    EmptyBase,
    #[error("duplicate point identifier {0:?}")]
    DuplicatePoint(String),
    #[error("duplicate arrow identifier {0:?}")]
    DuplicateArrow(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("composition of {g:?} and {h:?} given twice with different results")]
    ConflictingComposition { g: String, h: String },
    #[error("arrow set is not a bisection: {0}")]
    NotBisection(String),
    #[error("isomorphism search bound exceeded: {arrows} arrows > {bound}")]
    SizeGuard { arrows: usize, bound: usize },
    #[error("groupoid laws violated: {0}")]
    Invalid(GroupoidReport),
}

/// The finite set `M` of base points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSpace {
    points: Vec<String>,
    index: HashMap<String, PointId>,
}

impl BaseSpace {
    pub fn new<S: Into<String>>(points: impl IntoIterator<Item = S>) -> Result<Self, GroupoidError> {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(GroupoidError::EmptyBase);
        }
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(GroupoidError::DuplicatePoint(p.clone()));
            }
        }
        Ok(BaseSpace { points, index })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn name(&self, x: PointId) -> &str {
        &self.points[x]
    }

    pub fn names(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Option<PointId> {
        self.index.get(name).copied()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.points.len()
    }
}

/// A function `M → ℚ`: an element of the base algebra `R = Fun(M, ℚ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseFun {
    values: Vec<Rational>,
}

impl BaseFun {
    pub fn zero(n: usize) -> Self {
        BaseFun {
            values: vec![Rational::zero(); n],
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        BaseFun { values: vec![c; n] }
    }

    pub fn indicator(n: usize, x: PointId) -> Self {
        let mut f = BaseFun::zero(n);
        f.values[x] = Rational::one();
        f
    }

    pub fn from_values(values: Vec<Rational>) -> Self {
        BaseFun { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, x: PointId) -> &Rational {
        &self.values[x]
    }

    pub fn set(&mut self, x: PointId, v: Rational) {
        self.values[x] = v;
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Rational::is_zero)
    }

    pub fn support(&self) -> impl Iterator<Item = PointId> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
    }

    pub fn mul(&self, other: &BaseFun) -> BaseFun {
        BaseFun {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &BaseFun) -> BaseFun {
        BaseFun {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Pullback `f ∘ τ` along a point map.
    pub fn pullback(&self, tau: impl Fn(PointId) -> PointId) -> BaseFun {
        BaseFun {
            values: (0..self.values.len()).map(|x| self.values[tau(x)].clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub src: PointId,
    pub tgt: PointId,
}

/// A violated groupoid law, with the offending arrows by identifier.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupoidViolation {
    MissingComposite { g: String, h: String },
    ComposedNonComposable { g: String, h: String, gh: String },
    SourceTargetMismatch { g: String, h: String, gh: String },
    NotAssociative { f: String, g: String, h: String },
    MissingUnit { point: String },
    UnitLaw { point: String, arrow: String },
    MissingInverse { arrow: String },
}

impl fmt::Display for GroupoidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use GroupoidViolation::*;
        match self {
            MissingComposite { g, h } => write!(f, "composable pair ({g}, {h}) has no composite"),
            ComposedNonComposable { g, h, gh } => {
                write!(f, "triple ({g}, {h}, {gh}): s({g}) != t({h}) but a composite is given")
            }
            SourceTargetMismatch { g, h, gh } => {
                write!(f, "triple ({g}, {h}, {gh}): composite has wrong source or target")
            }
            NotAssociative { f: a, g, h } => write!(f, "({a}{g}){h} != {a}({g}{h})"),
            MissingUnit { point } => write!(f, "no unit arrow at {point}"),
            UnitLaw { point, arrow } => write!(f, "unit at {point} is not neutral for {arrow}"),
            MissingInverse { arrow } => write!(f, "arrow {arrow} has no inverse"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupoidReport {
    pub violations: Vec<GroupoidViolation>,
}

impl GroupoidReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GroupoidReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A finite groupoid given by an explicit composition table.
///
/// `compose(g, h)` is `g∘h` (first `h`, then `g`), defined when
/// `s(g) = t(h)`. Units and inverses are read off the table; a groupoid
/// built with [`FiniteGroupoid::from_table`] may still violate the laws,
/// which [`FiniteGroupoid::validate`] reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    base: BaseSpace,
    arrows: Vec<Arrow>,
    arrow_index: HashMap<String, ArrowId>,
    compose: Vec<Option<ArrowId>>,
    units: Vec<Option<ArrowId>>,
    inverse: Vec<Option<ArrowId>>,
}

impl FiniteGroupoid {
    /// Resolves identifiers and records the table. Structural errors only.
    pub fn from_table(
        base: BaseSpace,
        arrows: Vec<(String, String, String)>,
        triples: Vec<(String, String, String)>,
    ) -> Result<Self, GroupoidError> {
        let mut resolved = Vec::with_capacity(arrows.len());
        for (id, src, tgt) in arrows {
            let s = base.index_of(&src).ok_or(GroupoidError::UnknownPoint(src))?;
            let t = base.index_of(&tgt).ok_or(GroupoidError::UnknownPoint(tgt))?;
            resolved.push(Arrow { id, src: s, tgt: t });
        }
        let mut index = HashMap::new();
        for (i, a) in resolved.iter().enumerate() {
            if index.insert(a.id.clone(), i).is_some() {
                return Err(GroupoidError::DuplicateArrow(a.id.clone()));
            }
        }
        let lookup = |id: &String| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| GroupoidError::UnknownArrow(id.clone()))
        };
        let mut idx_triples = Vec::with_capacity(triples.len());
        for (g, h, gh) in &triples {
            idx_triples.push((lookup(g)?, lookup(h)?, lookup(gh)?));
        }
        Self::from_parts(base, resolved, idx_triples)
    }

    /// Builds from resolved arrows and index triples `(g, h, g∘h)`.
    pub fn from_parts(
        base: BaseSpace,
        arrows: Vec<Arrow>,
        triples: Vec<(ArrowId, ArrowId, ArrowId)>,
    ) -> Result<Self, GroupoidError> {
        let n = arrows.len();
        let mut arrow_index = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if a.src >= base.len() || a.tgt >= base.len() {
                return Err(GroupoidError::UnknownPoint(format!("#{}", a.src.max(a.tgt))));
            }
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(GroupoidError::DuplicateArrow(a.id.clone()));
            }
        }
        let mut compose = vec![None; n * n];
        for (g, h, gh) in triples {
            if g >= n || h >= n || gh >= n {
                return Err(GroupoidError::UnknownArrow(format!("#{}", g.max(h).max(gh))));
            }
            let slot = &mut compose[g * n + h];
            match slot {
                Some(prev) if *prev != gh => {
                    return Err(GroupoidError::ConflictingComposition {
                        g: arrows[g].id.clone(),
                        h: arrows[h].id.clone(),
                    })
                }
                _ => *slot = Some(gh),
            }
        }
        let mut gpd = FiniteGroupoid {
            base,
            arrows,
            arrow_index,
            compose,
            units: Vec::new(),
            inverse: Vec::new(),
        };
        gpd.units = gpd
            .base
            .points()
            .map(|x| {
                (0..n).find(|&e| gpd.arrows[e].src == x && gpd.arrows[e].tgt == x && gpd.composite(e, e) == Some(e))
            })
            .collect();
        gpd.inverse = (0..n)
            .map(|g| {
                let (s, t) = (gpd.arrows[g].src, gpd.arrows[g].tgt);
                let (us, ut) = (gpd.units[s]?, gpd.units[t]?);
                (0..n).find(|&h| gpd.composite(g, h) == Some(ut) && gpd.composite(h, g) == Some(us))
            })
            .collect();
        Ok(gpd)
    }

    /// Like [`FiniteGroupoid::from_table`], but rejects tables that violate the laws.
    pub fn new_validated(
        base: BaseSpace,
        arrows: Vec<(String, String, String)>,
        triples: Vec<(String, String, String)>,
    ) -> Result<Self, GroupoidError> {
        let g = Self::from_table(base, arrows, triples)?;
        let report = g.validate();
        if report.is_valid() {
            Ok(g)
        } else {
            Err(GroupoidError::Invalid(report))
        }
    }

    pub fn base(&self) -> &BaseSpace {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, g: ArrowId) -> &Arrow {
        &self.arrows[g]
    }

    pub fn arrow_by_id(&self, id: &str) -> Option<ArrowId> {
        self.arrow_index.get(id).copied()
    }

    pub fn id(&self, g: ArrowId) -> &str {
        &self.arrows[g].id
    }

    pub fn src(&self, g: ArrowId) -> PointId {
        self.arrows[g].src
    }

    pub fn tgt(&self, g: ArrowId) -> PointId {
        self.arrows[g].tgt
    }

    /// `g∘h` if it is recorded in the table.
    pub fn composite(&self, g: ArrowId, h: ArrowId) -> Option<ArrowId> {
        self.compose[g * self.arrows.len() + h]
    }

    /// Unit at `x`. Panics if the table has none; validate first.
    pub fn unit(&self, x: PointId) -> ArrowId {
        self.units[x].expect("validated groupoid has a unit at every point")
    }

    pub fn try_unit(&self, x: PointId) -> Option<ArrowId> {
        self.units[x]
    }

    /// Inverse of `g`. Panics if the table has none; validate first.
    pub fn inverse(&self, g: ArrowId) -> ArrowId {
        self.inverse[g].expect("validated groupoid has inverses")
    }

    pub fn is_unit(&self, g: ArrowId) -> bool {
        self.units.contains(&Some(g))
    }

    /// Arrows `g` with `t(g) = y`.
    pub fn arrows_into(&self, y: PointId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&g| self.arrows[g].tgt == y)
    }

    pub fn arrows_from(&self, x: PointId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&g| self.arrows[g].src == x)
    }

    /// The hom-set `G(x, y)` of arrows from `x` to `y`.
    pub fn hom(&self, x: PointId, y: PointId) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&g| self.arrows[g].src == x && self.arrows[g].tgt == y)
            .collect()
    }

    pub fn isotropy(&self, x: PointId) -> Vec<ArrowId> {
        self.hom(x, x)
    }

    /// All factorizations `g = h∘k` recorded in the table.
    pub fn factorizations(&self, g: ArrowId) -> Vec<(ArrowId, ArrowId)> {
        let n = self.arrows.len();
        let mut out = Vec::new();
        for h in 0..n {
            for k in 0..n {
                if self.composite(h, k) == Some(g) {
                    out.push((h, k));
                }
            }
        }
        out
    }

    /// Composition table as `(g, h, g∘h)` index triples.
    pub fn triples(&self) -> Vec<(ArrowId, ArrowId, ArrowId)> {
        let n = self.arrows.len();
        let mut out = Vec::new();
        for g in 0..n {
            for h in 0..n {
                if let Some(gh) = self.composite(g, h) {
                    out.push((g, h, gh));
                }
            }
        }
        out
    }

    /// Checks every groupoid law exhaustively over the table.
    pub fn validate(&self) -> GroupoidReport {
        let n = self.arrows.len();
        let id = |g: ArrowId| self.arrows[g].id.clone();
        let mut v = Vec::new();
        for g in 0..n {
            for h in 0..n {
                let composable = self.src(g) == self.tgt(h);
                match (composable, self.composite(g, h)) {
                    (true, None) => v.push(GroupoidViolation::MissingComposite { g: id(g), h: id(h) }),
                    (false, Some(gh)) => v.push(GroupoidViolation::ComposedNonComposable {
                        g: id(g),
                        h: id(h),
                        gh: id(gh),
                    }),
                    (true, Some(gh)) => {
                        if self.src(gh) != self.src(h) || self.tgt(gh) != self.tgt(g) {
                            v.push(GroupoidViolation::SourceTargetMismatch {
                                g: id(g),
                                h: id(h),
                                gh: id(gh),
                            });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(fg) = self.composite(f, g) else { continue };
                for h in 0..n {
                    let Some(gh) = self.composite(g, h) else { continue };
                    if self.composite(fg, h) != self.composite(f, gh) {
                        v.push(GroupoidViolation::NotAssociative {
                            f: id(f),
                            g: id(g),
                            h: id(h),
                        });
                    }
                }
            }
        }
        for x in self.base.points() {
            let Some(e) = self.units[x] else {
                v.push(GroupoidViolation::MissingUnit {
                    point: self.base.name(x).to_string(),
                });
                continue;
            };
            for g in 0..n {
                let bad = (self.tgt(g) == x && self.composite(e, g) != Some(g))
                    || (self.src(g) == x && self.composite(g, e) != Some(g));
                if bad {
                    v.push(GroupoidViolation::UnitLaw {
                        point: self.base.name(x).to_string(),
                        arrow: id(g),
                    });
                }
            }
        }
        for g in 0..n {
            if self.inverse[g].is_none() {
                v.push(GroupoidViolation::MissingInverse { arrow: id(g) });
            }
        }
        v.sort();
        v.dedup();
        GroupoidReport { violations: v }
    }
}

/// A set of arrows on which both `s` and `t` are injective.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bisection {
    arrows: BTreeSet<ArrowId>,
}

impl Bisection {
    pub fn new(g: &FiniteGroupoid, arrows: impl IntoIterator<Item = ArrowId>) -> Result<Self, GroupoidError> {
        let arrows: BTreeSet<ArrowId> = arrows.into_iter().collect();
        let mut srcs = BTreeSet::new();
        let mut tgts = BTreeSet::new();
        for &a in &arrows {
            if a >= g.len() {
                return Err(GroupoidError::UnknownArrow(format!("#{a}")));
            }
            if !srcs.insert(g.src(a)) {
                return Err(GroupoidError::NotBisection(format!(
                    "source {} repeated",
                    g.base().name(g.src(a))
                )));
            }
            if !tgts.insert(g.tgt(a)) {
                return Err(GroupoidError::NotBisection(format!(
                    "target {} repeated",
                    g.base().name(g.tgt(a))
                )));
            }
        }
        Ok(Bisection { arrows })
    }

    pub fn singleton(g: &FiniteGroupoid, a: ArrowId) -> Self {
        Bisection::new(g, [a]).expect("a single arrow is a bisection")
    }

    pub fn arrows(&self) -> &BTreeSet<ArrowId> {
        &self.arrows
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `V·W = {gh | g ∈ V, h ∈ W, s(g) = t(h)}`.
    pub fn product(&self, g: &FiniteGroupoid, w: &Bisection) -> Bisection {
        let mut out = BTreeSet::new();
        for &a in &self.arrows {
            for &b in &w.arrows {
                if g.src(a) == g.tgt(b) {
                    out.insert(g.composite(a, b).expect("composable pair has a composite"));
                }
            }
        }
        Bisection::new(g, out).expect("product of bisections is a bisection")
    }

    pub fn inverse(&self, g: &FiniteGroupoid) -> Bisection {
        Bisection::new(g, self.arrows.iter().map(|&a| g.inverse(a))).expect("inverse of a bisection is a bisection")
    }

    /// The induced partial point map `τ_V = t ∘ (s|_V)^{-1}`.
    pub fn tau(&self, g: &FiniteGroupoid) -> BTreeMap<PointId, PointId> {
        self.arrows.iter().map(|&a| (g.src(a), g.tgt(a))).collect()
    }
}

/// A groupoid isomorphism: a bijection on points and one on arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidIso {
    pub points: Vec<PointId>,
    pub arrows: Vec<ArrowId>,
}

/// Searches exhaustively for an isomorphism `a → b`.
///
/// When both bases carry the same point names the point map is fixed to the
/// identity on names; otherwise all point bijections are tried.
pub fn groupoid_isomorphic(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    bound: usize,
) -> Result<Option<GroupoidIso>, GroupoidError> {
    for g in [a, b] {
        if g.len() > bound {
            return Err(GroupoidError::SizeGuard { arrows: g.len(), bound });
        }
    }
    if a.len() != b.len() || a.base().len() != b.base().len() {
        return Ok(None);
    }
    let same_names = a.base().names().iter().all(|p| b.base().index_of(p).is_some());
    let point_maps: Vec<Vec<PointId>> = if same_names {
        vec![a.base().names().iter().map(|p| b.base().index_of(p).unwrap()).collect()]
    } else {
        permutations(a.base().len())
    };
    for phi in point_maps {
        if let Some(arrows) = match_arrows(a, b, &phi) {
            return Ok(Some(GroupoidIso { points: phi, arrows }));
        }
    }
    Ok(None)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn match_arrows(a: &FiniteGroupoid, b: &FiniteGroupoid, phi: &[PointId]) -> Option<Vec<ArrowId>> {
    // Hom-set sizes must agree under the point map.
    for x in a.base().points() {
        for y in a.base().points() {
            if a.hom(x, y).len() != b.hom(phi[x], phi[y]).len() {
                return None;
            }
        }
    }
    let n = a.len();
    let mut map: Vec<Option<ArrowId>> = vec![None; n];
    let mut used = vec![false; n];
    search(a, b, phi, 0, &mut map, &mut used).then(|| map.into_iter().map(Option::unwrap).collect())
}

fn search(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    phi: &[PointId],
    next: usize,
    map: &mut Vec<Option<ArrowId>>,
    used: &mut Vec<bool>,
) -> bool {
    if next == a.len() {
        return true;
    }
    if map[next].is_some() {
        return search(a, b, phi, next + 1, map, used);
    }
    let (s, t) = (phi[a.src(next)], phi[a.tgt(next)]);
    for cand in b.hom(s, t) {
        if used[cand] || a.is_unit(next) != b.is_unit(cand) {
            continue;
        }
        let snapshot = (map.clone(), used.clone());
        map[next] = Some(cand);
        used[cand] = true;
        if propagate(a, b, map, used) && search(a, b, phi, next + 1, map, used) {
            return true;
        }
        *map = snapshot.0;
        *used = snapshot.1;
    }
    false
}

/// Forces `f(gh) = f(g)f(h)` wherever both factors are mapped; fails on conflict.
fn propagate(a: &FiniteGroupoid, b: &FiniteGroupoid, map: &mut [Option<ArrowId>], used: &mut [bool]) -> bool {
    loop {
        let mut changed = false;
        for (g, h, gh) in a.triples() {
            let (Some(fg), Some(fh)) = (map[g], map[h]) else {
                continue;
            };
            let Some(image) = b.composite(fg, fh) else { return false };
            match map[gh] {
                Some(existing) if existing != image => return false,
                Some(_) => {}
                None => {
                    if used[image] {
                        return false;
                    }
                    map[gh] = Some(image);
                    used[image] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    pub(crate) fn pair_groupoid() -> FiniteGroupoid {
        let base = BaseSpace::new(["x", "y"]).unwrap();
        let arrows = vec![
            (s("1x"), s("x"), s("x")),
            (s("1y"), s("y"), s("y")),
            (s("g"), s("x"), s("y")),
            (s("gi"), s("y"), s("x")),
        ];
        let t = |a: &str, b: &str, c: &str| (s(a), s(b), s(c));
        let triples = vec![
            t("1x", "1x", "1x"),
            t("1y", "1y", "1y"),
            t("g", "1x", "g"),
            t("1y", "g", "g"),
            t("gi", "1y", "gi"),
            t("1x", "gi", "gi"),
            t("g", "gi", "1y"),
            t("gi", "g", "1x"),
        ];
        FiniteGroupoid::from_table(base, arrows, triples).unwrap()
    }

    fn cyclic(m: usize) -> FiniteGroupoid {
        let base = BaseSpace::new(["pt"]).unwrap();
        let arrows = (0..m).map(|i| (format!("r{i}"), s("pt"), s("pt"))).collect();
        let mut triples = Vec::new();
        for i in 0..m {
            for j in 0..m {
                triples.push((format!("r{i}"), format!("r{j}"), format!("r{}", (i + j) % m)));
            }
        }
        FiniteGroupoid::from_table(base, arrows, triples).unwrap()
    }

    #[test]
    fn pair_groupoid_is_valid() {
        let g = pair_groupoid();
        assert!(g.validate().is_valid(), "{}", g.validate());
        assert_eq!(g.unit(0), 0);
        assert_eq!(g.inverse(2), 3);
    }

    #[test]
    fn cyclic_group_is_valid() {
        assert!(cyclic(2).validate().is_valid());
        assert!(cyclic(3).validate().is_valid());
    }

    #[test]
    fn target_mismatch_is_reported_with_triple() {
        let base = BaseSpace::new(["x", "y"]).unwrap();
        let arrows = vec![
            (s("1x"), s("x"), s("x")),
            (s("1y"), s("y"), s("y")),
            (s("g"), s("x"), s("y")),
            (s("gi"), s("y"), s("x")),
        ];
        let t = |a: &str, b: &str, c: &str| (s(a), s(b), s(c));
        let triples = vec![
            t("1x", "1x", "1x"),
            t("1y", "1y", "1y"),
            t("g", "1x", "1x"), // wrong: target should be y
            t("1y", "g", "g"),
            t("gi", "1y", "gi"),
            t("1x", "gi", "gi"),
            t("g", "gi", "1y"),
            t("gi", "g", "1x"),
        ];
        let g = FiniteGroupoid::from_table(base, arrows, triples).unwrap();
        let report = g.validate();
        assert!(report.violations.contains(&GroupoidViolation::SourceTargetMismatch {
            g: s("g"),
            h: s("1x"),
            gh: s("1x"),
        }));
    }

    #[test]
    fn dangling_arrow_id_is_a_structural_error() {
        let base = BaseSpace::new(["pt"]).unwrap();
        let err = FiniteGroupoid::from_table(base, vec![(s("e"), s("pt"), s("pt"))], vec![(s("e"), s("q"), s("e"))])
            .unwrap_err();
        assert_eq!(err, GroupoidError::UnknownArrow(s("q")));
    }

    #[test]
    fn bisection_products() {
        let g = pair_groupoid();
        let unit_x = Bisection::singleton(&g, 0);
        let arrow = Bisection::singleton(&g, 2);
        // {1_x}·{g}: s(1_x) = x != y = t(g)
        assert!(unit_x.product(&g, &arrow).is_empty());
        let unit_y = Bisection::singleton(&g, 1);
        assert_eq!(unit_y.product(&g, &arrow), arrow);
        assert_eq!(arrow.product(&g, &arrow.inverse(&g)), unit_y);
        assert_eq!(arrow.inverse(&g), Bisection::singleton(&g, 3));
        assert!(Bisection::new(&g, [0, 3]).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let g = pair_groupoid();
        let iso = groupoid_isomorphic(&g, &g, DEFAULT_ISO_ARROW_BOUND).unwrap().unwrap();
        assert_eq!(iso.points, vec![0, 1]);
        assert!(groupoid_isomorphic(&cyclic(2), &cyclic(3), 64).unwrap().is_none());
        assert!(matches!(
            groupoid_isomorphic(&cyclic(5), &cyclic(5), 4),
            Err(GroupoidError::SizeGuard { .. })
        ));
    }

    #[test]
    fn permuted_presentation_is_isomorphic() {
        let base = BaseSpace::new(["x", "y"]).unwrap();
        let arrows = vec![
            (s("b"), s("y"), s("x")),
            (s("u"), s("y"), s("y")),
            (s("a"), s("x"), s("y")),
            (s("v"), s("x"), s("x")),
        ];
        let t = |a: &str, b: &str, c: &str| (s(a), s(b), s(c));
        let triples = vec![
            t("v", "v", "v"),
            t("u", "u", "u"),
            t("a", "v", "a"),
            t("u", "a", "a"),
            t("b", "u", "b"),
            t("v", "b", "b"),
            t("a", "b", "u"),
            t("b", "a", "v"),
        ];
        let other = FiniteGroupoid::from_table(base, arrows, triples).unwrap();
        assert!(other.validate().is_valid());
        let iso = groupoid_isomorphic(&pair_groupoid(), &other, 64).unwrap().unwrap();
        assert_eq!(iso.arrows, vec![3, 1, 2, 0]);
    }
}
