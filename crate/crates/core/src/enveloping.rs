//! Truncated universal enveloping algebras `U(𝔤)^(N)` in the PBW basis,
//! with product, coproduct, counit, antipode and transport along Lie
//! algebra maps.
//!
//! Products that would leave the truncation raise
//! [`EnvelopingError::TruncationOverflow`]; nothing is ever dropped. Since
//! `U(𝔤)` is a domain whose associated graded is a polynomial ring, the
//! product of two PBW terms of degrees `p` and `q` always has a nonzero
//! component of degree `p + q`, so the overflow test is exact.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::exact::{kernel_of_images, EchelonBasis, QMatrix, Rational, SparseVec};
use crate::groupoid::PointId;
use crate::lie::LieFiber;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopingError {
    #[error("truncation overflow: product has degree {degree} > N = {truncation}")]
    TruncationOverflow { degree: u32, truncation: u32 },
    #[error("elements live in different fibers or truncations")]
    FiberMismatch,
    #[error("matrix has shape {found:?}, expected {expected:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("cannot parse element {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// A PBW monomial `e_0^{a_0} ⋯ e_{d-1}^{a_{d-1}}`.
///
/// Ordered by degree, then so that earlier generators come first within a
/// degree (`P² < PQ < PZ < Q² < …`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial { exps: vec![0; dim] }
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut m = Monomial::one(dim);
        m.exps[i] = 1;
        m
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// The generator word, in nondecreasing index order.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.exps.iter().enumerate() {
            w.extend(std::iter::repeat_n(i, e as usize));
        }
        w
    }

    fn last_generator(&self) -> Option<usize> {
        self.exps.iter().rposition(|&e| e > 0)
    }

    fn bumped(&self, i: usize, delta: i32) -> Monomial {
        let mut m = self.clone();
        m.exps[i] = (m.exps[i] as i32 + delta) as u32;
        m
    }

    /// All monomials of degree at most `n` in `dim` generators, in order.
    pub fn all_up_to(dim: usize, n: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for deg in 0..=n {
            let mut cur = vec![0; dim];
            fill(dim, deg, 0, &mut cur, &mut out);
        }
        out
    }
}

fn fill(dim: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos + 1 >= dim {
        if dim == 0 {
            if remaining == 0 {
                out.push(Monomial::from_exponents(Vec::new()));
            }
            return;
        }
        cur[pos] = remaining;
        out.push(Monomial::from_exponents(cur.clone()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill(dim, remaining - e, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}", self.exps)
    }
}

pub type UTensor = SparseVec<(Monomial, Monomial)>;

/// An element of `U(𝔟_x)^(N)` for a specific point `x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UElement {
    pub point: PointId,
    pub truncation: u32,
    pub terms: SparseVec<Monomial>,
}

impl UElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_zero()
    }

    /// Largest monomial degree; zero for the zero element.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: &Rational) -> UElement {
        UElement {
            terms: self.terms.scaled(c),
            ..self.clone()
        }
    }

    pub fn plus(&self, other: &UElement) -> UElement {
        UElement {
            terms: self.terms.plus(&other.terms),
            ..self.clone()
        }
    }

    pub fn minus(&self, other: &UElement) -> UElement {
        UElement {
            terms: self.terms.minus(&other.terms),
            ..self.clone()
        }
    }
}

type StepCache = RwLock<HashMap<(Monomial, usize), Arc<SparseVec<Monomial>>>>;

/// The truncated enveloping algebra of one fiber.
pub struct Enveloping {
    point: PointId,
    fiber: LieFiber,
    truncation: u32,
    steps: StepCache,
}

impl Clone for Enveloping {
    fn clone(&self) -> Self {
        Enveloping::new(self.point, self.fiber.clone(), self.truncation)
    }
}

impl fmt::Debug for Enveloping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Enveloping")
            .field("point", &self.point)
            .field("fiber", &self.fiber)
            .field("truncation", &self.truncation)
            .finish()
    }
}

impl Enveloping {
    pub fn new(point: PointId, fiber: LieFiber, truncation: u32) -> Self {
        Enveloping {
            point,
            fiber,
            truncation,
            steps: RwLock::new(HashMap::new()),
        }
    }

    pub fn point(&self) -> PointId {
        self.point
    }

    pub fn fiber(&self) -> &LieFiber {
        &self.fiber
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn dim_generators(&self) -> usize {
        self.fiber.dim()
    }

    /// PBW basis of `U^(N)`, in monomial order.
    pub fn basis(&self) -> Vec<Monomial> {
        Monomial::all_up_to(self.fiber.dim(), self.truncation)
    }

    pub fn element(&self, terms: SparseVec<Monomial>) -> UElement {
        UElement {
            point: self.point,
            truncation: self.truncation,
            terms,
        }
    }

    pub fn zero(&self) -> UElement {
        self.element(SparseVec::new())
    }

    pub fn one(&self) -> UElement {
        self.element(SparseVec::unit(Monomial::one(self.fiber.dim())))
    }

    pub fn scalar(&self, c: Rational) -> UElement {
        self.element(SparseVec::single(Monomial::one(self.fiber.dim()), c))
    }

    pub fn generator(&self, i: usize) -> UElement {
        self.element(SparseVec::unit(Monomial::generator(self.fiber.dim(), i)))
    }

    pub fn monomial(&self, m: Monomial) -> UElement {
        self.element(SparseVec::unit(m))
    }

    fn check(&self, a: &UElement) -> Result<(), EnvelopingError> {
        if a.point != self.point || a.truncation != self.truncation {
            return Err(EnvelopingError::FiberMismatch);
        }
        Ok(())
    }

    /// `m · e_k` in PBW normal form, via `v e_j e_k = v e_k e_j + v [e_j, e_k]`.
    fn times_generator(&self, m: &Monomial, k: usize) -> Arc<SparseVec<Monomial>> {
        let key = (m.clone(), k);
        if let Some(hit) = self.steps.read().unwrap().get(&key) {
            return hit.clone();
        }
        let result = match m.last_generator() {
            Some(j) if j > k => {
                let w = m.bumped(j, -1);
                let mut out = SparseVec::new();
                for (t, c) in self.times_generator(&w, k).iter() {
                    out.axpy(c, &self.times_generator(t, j));
                }
                for (l, c) in self.fiber.bracket(j, k) {
                    out.axpy(c, &self.times_generator(&w, *l));
                }
                out
            }
            _ => SparseVec::unit(m.bumped(k, 1)),
        };
        let result = Arc::new(result);
        self.steps.write().unwrap().insert(key, result.clone());
        result
    }

    /// Product of monomials, without any truncation check.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> SparseVec<Monomial> {
        let mut acc = SparseVec::unit(a.clone());
        for k in b.word() {
            let mut next = SparseVec::new();
            for (t, c) in acc.iter() {
                next.axpy(c, &self.times_generator(t, k));
            }
            acc = next;
        }
        acc
    }

    fn overflow_check(&self, degree: u32) -> Result<(), EnvelopingError> {
        if degree > self.truncation {
            Err(EnvelopingError::TruncationOverflow {
                degree,
                truncation: self.truncation,
            })
        } else {
            Ok(())
        }
    }

    pub fn mul(&self, a: &UElement, b: &UElement) -> Result<UElement, EnvelopingError> {
        self.check(a)?;
        self.check(b)?;
        if !a.is_zero() && !b.is_zero() {
            self.overflow_check(a.degree() + b.degree())?;
        }
        Ok(self.element(self.mul_terms(&a.terms, &b.terms)))
    }

    fn mul_terms(&self, a: &SparseVec<Monomial>, b: &SparseVec<Monomial>) -> SparseVec<Monomial> {
        let mut out = SparseVec::new();
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                out.axpy(&(ca * cb), &self.mul_monomials(ma, mb));
            }
        }
        out
    }

    /// `Δ(x^a) = Σ_b ∏ binom(a_i, b_i) x^b ⊗ x^{a-b}`.
    pub fn delta_monomial(&self, m: &Monomial) -> UTensor {
        let mut out = SparseVec::new();
        let mut split = vec![0u32; m.dim()];
        delta_rec(m.exponents(), 0, &mut split, Rational::one(), &mut out);
        out
    }

    pub fn delta(&self, a: &UElement) -> UTensor {
        let mut out = SparseVec::new();
        for (m, c) in a.terms.iter() {
            out.axpy(c, &self.delta_monomial(m));
        }
        out
    }

    pub fn counit(&self, a: &UElement) -> Rational {
        a.terms.get(&Monomial::one(self.fiber.dim()))
    }

    /// `S(x^a) = (-1)^{|a|}` times the reversed word, straightened.
    pub fn antipode_monomial(&self, m: &Monomial) -> SparseVec<Monomial> {
        let mut acc = SparseVec::unit(Monomial::one(m.dim()));
        for k in m.word().into_iter().rev() {
            let mut next = SparseVec::new();
            for (t, c) in acc.iter() {
                next.axpy(c, &self.times_generator(t, k));
            }
            acc = next;
        }
        if m.degree() % 2 == 1 {
            acc.neg()
        } else {
            acc
        }
    }

    pub fn antipode(&self, a: &UElement) -> UElement {
        let mut out = SparseVec::new();
        for (m, c) in a.terms.iter() {
            out.axpy(c, &self.antipode_monomial(m));
        }
        self.element(out)
    }

    /// Image of a monomial of the source fiber under the algebra map
    /// extending `e_i ↦ Σ_r m[r][i] f_r`.
    pub fn transport_monomial(&self, m: &QMatrix, mono: &Monomial) -> SparseVec<Monomial> {
        let d = self.fiber.dim();
        let mut acc = SparseVec::unit(Monomial::one(d));
        for i in mono.word() {
            let mut next = SparseVec::new();
            for (t, c) in acc.iter() {
                for r in 0..d {
                    let coeff = &m[(r, i)];
                    if !coeff.is_zero() {
                        next.axpy(&(c * coeff), &self.times_generator(t, r));
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// Transports `a` from a fiber of dimension `m.cols()` into this fiber.
    pub fn transport(&self, a: &UElement, m: &QMatrix) -> Result<UElement, EnvelopingError> {
        let d = self.fiber.dim();
        let src_dim = a.terms.first_key().map(Monomial::dim).unwrap_or(m.cols());
        if m.rows() != d || m.cols() != src_dim {
            return Err(EnvelopingError::DimensionMismatch {
                expected: (d, src_dim),
                found: (m.rows(), m.cols()),
            });
        }
        if a.truncation != self.truncation {
            return Err(EnvelopingError::FiberMismatch);
        }
        let mut out = SparseVec::new();
        for (mono, c) in a.terms.iter() {
            out.axpy(c, &self.transport_monomial(m, mono));
        }
        Ok(self.element(out))
    }

    /// Product in `U ⊗ U` of two tensors.
    pub fn tensor_mul(&self, a: &UTensor, b: &UTensor) -> Result<UTensor, EnvelopingError> {
        let deg = |t: &UTensor, left: bool| {
            t.keys()
                .map(|(l, r)| if left { l.degree() } else { r.degree() })
                .max()
                .unwrap_or(0)
        };
        if !a.is_zero() && !b.is_zero() {
            self.overflow_check(deg(a, true) + deg(b, true))?;
            self.overflow_check(deg(a, false) + deg(b, false))?;
        }
        let mut out = SparseVec::new();
        for ((al, ar), ca) in a.iter() {
            for ((bl, br), cb) in b.iter() {
                let left = self.mul_monomials(al, bl);
                let right = self.mul_monomials(ar, br);
                let c = ca * cb;
                for (l, cl) in left.iter() {
                    for (r, cr) in right.iter() {
                        out.add_term((l.clone(), r.clone()), &c * cl * cr);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `a ⊗ b` as a tensor.
    pub fn tensor(&self, a: &UElement, b: &UElement) -> UTensor {
        let mut out = SparseVec::new();
        for (ma, ca) in a.terms.iter() {
            for (mb, cb) in b.terms.iter() {
                out.add_term((ma.clone(), mb.clone()), ca * cb);
            }
        }
        out
    }

    /// Basis of the primitive elements of `U^(N)`: the kernel of
    /// `b ↦ Δb − 1⊗b − b⊗1` over the full PBW basis.
    pub fn primitives(&self) -> Vec<UElement> {
        let basis = self.basis();
        let one = self.one();
        let images: Vec<UTensor> = basis
            .iter()
            .map(|m| {
                let b = self.monomial(m.clone());
                self.delta(&b)
                    .minus(&self.tensor(&one, &b))
                    .minus(&self.tensor(&b, &one))
            })
            .collect();
        kernel_of_images(&images)
            .into_iter()
            .map(|k| self.element(k.map_keys(|&j| basis[j].clone())))
            .collect()
    }

    /// Grouplike elements `c` with `Δc = c⊗c` and `ε(c) = 1`.
    ///
    /// Solved degree by degree: with `c_0 = 1`, the degree-`k` part must
    /// satisfy `Δc_k − 1⊗c_k − c_k⊗1 = Σ_{i+j=k, i,j≥1} c_i⊗c_j`, which is
    /// linear in `c_k`. Solutions of the homogeneous system (the primitives
    /// of degree `k`) cannot appear: if `m` is the lowest positive degree with
    /// `c_m ≠ 0`, the bidegree-`(m, q)` parts of `c⊗c` for `m + q > N` have no
    /// counterpart in `Δc`, which forces `c_q = 0` for `q > N − m`, and the
    /// bidegree-`(m, q − m)` parts of `Δc_q` then propagate the vanishing down
    /// to `c_m` itself. The candidate is verified against the full equation.
    pub fn grouplikes(&self) -> Vec<UElement> {
        let n = self.truncation;
        let basis = self.basis();
        let one_m = Monomial::one(self.fiber.dim());
        let mut parts: Vec<SparseVec<Monomial>> = vec![SparseVec::unit(one_m.clone())];
        for k in 1..=n {
            let mut rhs = UTensor::new();
            for i in 1..k {
                for (mi, ci) in parts[i as usize].iter() {
                    for (mj, cj) in parts[(k - i) as usize].iter() {
                        rhs.add_term((mi.clone(), mj.clone()), ci * cj);
                    }
                }
            }
            let degree_k: Vec<&Monomial> = basis.iter().filter(|m| m.degree() == k).collect();
            let mut system = EchelonBasis::new();
            for (j, m) in degree_k.iter().enumerate() {
                let img = self.reduced_delta(m, &one_m);
                system.insert(&img, j);
            }
            let Some(coords) = system.express(&rhs) else {
                return Vec::new();
            };
            parts.push(coords.map_keys(|&j| degree_k[j].clone()));
        }
        let mut c = SparseVec::new();
        for p in &parts {
            c.add_assign(p);
        }
        let candidate = self.element(c);
        let square = self.tensor(&candidate, &candidate);
        if self.delta(&candidate) == square && self.counit(&candidate).is_one() {
            vec![candidate]
        } else {
            Vec::new()
        }
    }

    fn reduced_delta(&self, m: &Monomial, one: &Monomial) -> UTensor {
        let mut d = self.delta_monomial(m);
        d.add_term((one.clone(), m.clone()), -Rational::one());
        d.add_term((m.clone(), one.clone()), -Rational::one());
        d
    }

    /// PBW text form, e.g. `3/2*P^2Q - Z + 1`, highest degree first.
    pub fn format(&self, a: &UElement) -> String {
        format_terms(&self.fiber, &a.terms)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        format_monomial(&self.fiber, m)
    }

    pub fn parse(&self, input: &str) -> Result<UElement, EnvelopingError> {
        let terms = parse_terms(&self.fiber, input)?;
        let el = self.element(terms);
        if el.degree() > self.truncation {
            return Err(EnvelopingError::TruncationOverflow {
                degree: el.degree(),
                truncation: self.truncation,
            });
        }
        Ok(el)
    }
}

fn delta_rec(exps: &[u32], pos: usize, split: &mut Vec<u32>, coeff: Rational, out: &mut UTensor) {
    if pos == exps.len() {
        let left = Monomial::from_exponents(split.clone());
        let right = Monomial::from_exponents(exps.iter().zip(split.iter()).map(|(a, b)| a - b).collect());
        out.add_term((left, right), coeff);
        return;
    }
    for b in 0..=exps[pos] {
        split[pos] = b;
        let c = &coeff * Rational::from_int(binomial(exps[pos], b) as i64);
        delta_rec(exps, pos + 1, split, c, out);
    }
    split[pos] = 0;
}

fn binomial(n: u32, k: u32) -> u64 {
    let mut r: u64 = 1;
    for i in 0..k as u64 {
        r = r * (n as u64 - i) / (i + 1);
    }
    r
}

pub fn format_monomial(fiber: &LieFiber, m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    let mut s = String::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => s.push_str(fiber.name(i)),
            _ => s.push_str(&format!("{}^{e}", fiber.name(i))),
        }
    }
    s
}

/// Terms ordered by descending degree, then PBW order within a degree.
pub fn format_terms(fiber: &LieFiber, terms: &SparseVec<Monomial>) -> String {
    let mut items: Vec<(&Monomial, &Rational)> = terms.iter().collect();
    items.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
    format_items(
        items
            .into_iter()
            .map(|(m, c)| (format_monomial(fiber, m), m.is_one(), c)),
    )
}

/// Joins `(label, is_unit, coeff)` items as `c*label + …`.
pub fn format_items<'a>(items: impl Iterator<Item = (String, bool, &'a Rational)>) -> String {
    let mut s = String::new();
    for (label, is_unit, c) in items {
        let (neg, abs) = (c.is_negative(), c.abs());
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if is_unit {
            s.push_str(&abs.to_string());
        } else if abs.is_one() {
            s.push_str(&label);
        } else {
            s.push_str(&format!("{abs}*{label}"));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Splits `a + b - c` into signed terms at top level.
pub fn split_signed_terms(input: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in input.chars() {
        if (ch == '+' || ch == '-')
            && !cur.trim().is_empty()
            && !cur.trim_end().ends_with('*')
            && !cur.trim_end().ends_with('/')
        {
            out.push((neg, cur.trim().to_string()));
            cur.clear();
            neg = ch == '-';
        } else if (ch == '+' || ch == '-') && cur.trim().is_empty() {
            if ch == '-' {
                neg = !neg;
            }
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        out.push((neg, cur.trim().to_string()));
    }
    out
}

/// Splits a term `c*body`, `c` or `body` into coefficient and body.
pub fn split_coefficient(term: &str) -> Result<(Rational, Option<String>), String> {
    if let Some((c, body)) = term.split_once('*') {
        let c: Rational = c
            .trim()
            .parse()
            .map_err(|e: crate::exact::ParseRationalError| e.to_string())?;
        return Ok((c, Some(body.trim().to_string())));
    }
    if let Ok(c) = term.parse::<Rational>() {
        return Ok((c, None));
    }
    Ok((Rational::one(), Some(term.to_string())))
}

pub fn parse_monomial(fiber: &LieFiber, body: &str) -> Result<Monomial, String> {
    let mut exps = vec![0u32; fiber.dim()];
    if body == "1" {
        return Ok(Monomial::from_exponents(exps));
    }
    let mut rest = body;
    let mut last: Option<usize> = None;
    while !rest.is_empty() {
        let (idx, name) = fiber
            .names()
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len())
            .ok_or_else(|| format!("unknown generator at {rest:?}"))?;
        rest = &rest[name.len()..];
        let mut e = 1u32;
        if let Some(r) = rest.strip_prefix('^') {
            let digits: String = r.chars().take_while(char::is_ascii_digit).collect();
            if digits.is_empty() {
                return Err("missing exponent after '^'".to_string());
            }
            e = digits.parse().map_err(|_| "exponent too large".to_string())?;
            rest = &r[digits.len()..];
        }
        if last.is_some_and(|l| l >= idx) {
            return Err(format!("monomial {body:?} is not in PBW normal form"));
        }
        if e == 0 {
            return Err("zero exponent".to_string());
        }
        last = Some(idx);
        exps[idx] = e;
    }
    Ok(Monomial::from_exponents(exps))
}

pub fn parse_terms(fiber: &LieFiber, input: &str) -> Result<SparseVec<Monomial>, EnvelopingError> {
    let err = |reason: String| EnvelopingError::Parse {
        input: input.to_string(),
        reason,
    };
    let mut out = SparseVec::new();
    if input.trim().is_empty() {
        return Err(err("empty input".to_string()));
    }
    for (neg, term) in split_signed_terms(input) {
        let (c, body) = split_coefficient(&term).map_err(err)?;
        let m = match body {
            None => Monomial::one(fiber.dim()),
            Some(b) => parse_monomial(fiber, &b).map_err(err)?,
        };
        out.add_term(m, if neg { -c } else { c });
    }
    Ok(out)
}

/// A section of the bundle of truncated enveloping algebras: one element
/// per point, with pointwise operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionU {
    pub truncation: u32,
    pub values: Vec<UElement>,
}

impl SectionU {
    pub fn one(fibers: &[Enveloping]) -> Self {
        SectionU {
            truncation: fibers.first().map(Enveloping::truncation).unwrap_or(0),
            values: fibers.iter().map(Enveloping::one).collect(),
        }
    }

    pub fn mul(&self, other: &SectionU, fibers: &[Enveloping]) -> Result<SectionU, EnvelopingError> {
        let values = fibers
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(u, (a, b))| u.mul(a, b))
            .collect::<Result<_, _>>()?;
        Ok(SectionU {
            truncation: self.truncation,
            values,
        })
    }

    pub fn delta(&self, fibers: &[Enveloping]) -> Vec<UTensor> {
        fibers.iter().zip(&self.values).map(|(u, a)| u.delta(a)).collect()
    }

    pub fn counit(&self, fibers: &[Enveloping]) -> Vec<Rational> {
        fibers.iter().zip(&self.values).map(|(u, a)| u.counit(a)).collect()
    }

    pub fn antipode(&self, fibers: &[Enveloping]) -> SectionU {
        SectionU {
            truncation: self.truncation,
            values: fibers.iter().zip(&self.values).map(|(u, a)| u.antipode(a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3(n: u32) -> Enveloping {
        Enveloping::new(0, LieFiber::heisenberg(), n)
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn monomial_order_and_basis_size() {
        let u = h3(2);
        let names: Vec<String> = u.basis().iter().map(|m| u.format_monomial(m)).collect();
        assert_eq!(names, ["1", "P", "Q", "Z", "P^2", "PQ", "PZ", "Q^2", "QZ", "Z^2"]);
        assert_eq!(h3(4).basis().len(), 35);
    }

    #[test]
    fn straightening_qp() {
        let u = h3(4);
        let qp = u.mul(&u.generator(1), &u.generator(0)).unwrap();
        assert_eq!(u.format(&qp), "PQ - Z");
    }

    #[test]
    fn overflow_is_an_error() {
        let u = h3(2);
        let pq = u.parse("PQ").unwrap();
        let err = u.mul(&pq, &u.generator(0)).unwrap_err();
        assert_eq!(
            err,
            EnvelopingError::TruncationOverflow {
                degree: 3,
                truncation: 2
            }
        );
    }

    #[test]
    fn delta_of_pq() {
        let u = h3(4);
        let pq = u.parse("PQ").unwrap();
        let expected: UTensor = [("PQ", "1"), ("P", "Q"), ("Q", "P"), ("1", "PQ")]
            .iter()
            .map(|(a, b)| {
                (
                    (
                        parse_monomial(u.fiber(), a).unwrap(),
                        parse_monomial(u.fiber(), b).unwrap(),
                    ),
                    q(1),
                )
            })
            .collect();
        assert_eq!(u.delta(&pq), expected);
    }

    #[test]
    fn antipode_values() {
        let u = h3(4);
        let pq = u.parse("PQ").unwrap();
        let s = u.antipode(&pq);
        assert_eq!(u.format(&s), "PQ - Z");
        assert_eq!(u.antipode(&s), pq);
        assert_eq!(u.format(&u.antipode(&u.generator(0))), "-P");
        assert_eq!(u.counit(&u.parse("1 + 3*P").unwrap()), q(1));
    }

    #[test]
    fn transport_examples() {
        let u = h3(4);
        let rot = QMatrix::from_int_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]);
        let image = u.transport(&u.parse("PQ").unwrap(), &rot).unwrap();
        assert_eq!(u.format(&image), "-PQ + Z");

        let line = Enveloping::new(0, LieFiber::abelian(1), 4);
        let minus = QMatrix::from_int_rows(&[&[-1]]);
        assert_eq!(
            line.format(&line.transport(&line.parse("X^2").unwrap(), &minus).unwrap()),
            "X^2"
        );
        assert_eq!(
            line.format(&line.transport(&line.parse("X^3").unwrap(), &minus).unwrap()),
            "-X^3"
        );
    }

    #[test]
    fn format_parse_round_trip() {
        let u = h3(4);
        for s in ["3/2*P^2Q + Z", "-PQ + Z", "0", "-1/3", "P^2Z^2 - 2*Q + 7"] {
            assert_eq!(u.format(&u.parse(s).unwrap()), s);
        }
        assert!(u.parse("P^").is_err());
        assert!(u.parse("W").is_err());
        assert!(u.parse("P^5").is_err());
        assert!(u.parse("QP").is_err());
        assert!(u.parse("PP").is_err());
    }

    #[test]
    fn grouplikes_and_primitives() {
        let u = h3(4);
        assert_eq!(u.grouplikes(), vec![u.one()]);
        let prims = u.primitives();
        assert_eq!(prims, vec![u.generator(0), u.generator(1), u.generator(2)]);
        let line = Enveloping::new(0, LieFiber::abelian(1), 1);
        assert_eq!(line.grouplikes(), vec![line.one()]);
    }
}
