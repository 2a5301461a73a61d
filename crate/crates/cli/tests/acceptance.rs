//! Acceptance run: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/cc_oracle.rs"]
mod cc_oracle;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hopfalg::algebroid::{check_axioms, Algebroid, ConvolutionAlgebroid, HopfAlgebroid};
use hopfalg::analysis::{cgk_pipeline, proposition_suite, solve_grouplikes, solve_primitives, Hypothesis, Verdict};
use hopfalg::enveloping::{Enveloping, EnvelopingError, Monomial, UElement, UTensor};
use hopfalg::exact::{Rational, SparseVec};
use hopfalg::groupoid::{groupoid_isomorphic, BaseSpace, FiniteGroupoid, DEFAULT_ISO_ARROW_BOUND};
use hopfalg::lie::{BundleAction, LieBundle, LieFiber};
use hopfalg::model::{funs3, generate, pairh3, random_model, z2line, ModelFile, Preset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn algebroid(model: &ModelFile) -> HopfAlgebroid {
    model.resolve().unwrap().into_algebroid().unwrap()
}

fn criterion_1_models() -> Vec<(String, ModelFile)> {
    let mut out = vec![("z2line".to_string(), z2line()), ("pairh3".to_string(), pairh3())];
    out.extend((1..=25).map(|s| (format!("random seed {s}"), random_model(s))));
    out
}

fn h3(truncation: u32) -> Enveloping {
    Enveloping::new(0, LieFiber::heisenberg(), truncation)
}

/// `U(h₃)` over a single point as an algebroid.
fn h3_over_a_point(truncation: u32) -> ConvolutionAlgebroid {
    let base = BaseSpace::new(["pt"]).unwrap();
    let g = FiniteGroupoid::new_validated(
        base.clone(),
        vec![("e".into(), "pt".into(), "pt".into())],
        vec![("e".into(), "e".into(), "e".into())],
    )
    .unwrap();
    let bundle = LieBundle::new(base, vec![LieFiber::heisenberg()]).unwrap();
    let action = BundleAction::identity(&g, &bundle).unwrap();
    ConvolutionAlgebroid::new(g, bundle, action, truncation).unwrap()
}

fn criterion_1() -> Check {
    let started = Instant::now();
    let dir = tempfile::TempDir::new().unwrap();
    for (name, model) in criterion_1_models() {
        let path = dir.path().join("model.json");
        std::fs::write(&path, model.to_json()).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_hopfalg"))
            .args(["--json", "check-axioms", path.to_str().unwrap(), "--samples", "100"])
            .output()
            .unwrap();
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| {
            format!(
                "{name}: unreadable report ({e}): {}",
                String::from_utf8_lossy(&out.stderr)
            )
        })?;
        let failures: Vec<String> = report["entries"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|e| e["status"] != "pass")
            .map(|e| format!("{} ({})", e["axiom"], e["witness"]))
            .collect();
        ensure(out.status.success() && failures.is_empty(), || {
            format!("{name}: {}", failures.join(", "))
        })?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("27 instances, 100 samples each, {:.1}s", elapsed.as_secs_f64()))
}

fn random_linear(rng: &mut ChaCha8Rng) -> [Rational; 4] {
    std::array::from_fn(|_| Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=3)))
}

fn linear_element(env: &Enveloping, c: &[Rational; 4]) -> UElement {
    let mut terms = SparseVec::new();
    terms.add_term(Monomial::one(3), c[0].clone());
    for i in 0..3 {
        terms.add_term(Monomial::generator(3, i), c[i + 1].clone());
    }
    env.element(terms)
}

/// `(a₀ + Σ aᵢXᵢ)(b₀ + Σ bⱼXⱼ)` expanded by hand: `XᵢXⱼ` is already ordered
/// for `i ≤ j`, and the only out-of-order product with a correction is
/// `QP = PQ − Z`.
fn expected_linear_product(a: &[Rational; 4], b: &[Rational; 4]) -> SparseVec<Monomial> {
    let mut out = SparseVec::new();
    out.add_term(Monomial::one(3), &a[0] * &b[0]);
    for i in 0..3 {
        out.add_term(Monomial::generator(3, i), &a[0] * &b[i + 1]);
        out.add_term(Monomial::generator(3, i), &a[i + 1] * &b[0]);
        for j in 0..3 {
            let mut e = vec![0u32; 3];
            e[i] += 1;
            e[j] += 1;
            let c = &a[i + 1] * &b[j + 1];
            out.add_term(Monomial::from_exponents(e), c.clone());
            if (i, j) == (1, 0) {
                out.add_term(Monomial::generator(3, 2), -c);
            }
        }
    }
    out
}

fn mu_tensor(env: &Enveloping, t: &UTensor, left_antipode: bool) -> UElement {
    let mut out = env.zero();
    for ((l, r), c) in t.iter() {
        let (mut l, mut r) = (env.monomial(l.clone()), env.monomial(r.clone()));
        if left_antipode {
            l = env.antipode(&l);
        } else {
            r = env.antipode(&r);
        }
        out = out.plus(&env.mul(&l, &r).unwrap().scaled(c));
    }
    out
}

fn coassociative(env: &Enveloping, a: &UElement) -> bool {
    let mut left: SparseVec<(Monomial, Monomial, Monomial)> = SparseVec::new();
    let mut right = SparseVec::new();
    for ((l, r), c) in env.delta(a).iter() {
        for ((x, y), d) in env.delta_monomial(l).iter() {
            left.add_term((x.clone(), y.clone(), r.clone()), c * d);
        }
        for ((x, y), d) in env.delta_monomial(r).iter() {
            right.add_term((l.clone(), x.clone(), y.clone()), c * d);
        }
    }
    left == right
}

/// Products of the criterion-2 pairs at truncation `n`, as coefficient maps.
fn linear_products(n: u32) -> Vec<(String, SparseVec<Monomial>)> {
    let env = h3(n);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    (0..200)
        .map(|_| {
            let (a, b) = (random_linear(&mut rng), random_linear(&mut rng));
            let (a, b) = (linear_element(&env, &a), linear_element(&env, &b));
            let label = format!("({}) * ({})", env.format(&a), env.format(&b));
            (label, env.mul(&a, &b).unwrap().terms)
        })
        .collect()
}

fn criterion_2() -> Check {
    let env = h3(4);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let (ca, cb) = (random_linear(&mut rng), random_linear(&mut rng));
        let (a, b) = (linear_element(&env, &ca), linear_element(&env, &cb));
        let tag = || format!("a = {}, b = {}", env.format(&a), env.format(&b));
        let ab = env.mul(&a, &b).unwrap();
        ensure(ab.terms == expected_linear_product(&ca, &cb), || {
            format!("product differs for {}", tag())
        })?;
        ensure(
            env.delta(&ab) == env.tensor_mul(&env.delta(&a), &env.delta(&b)).unwrap(),
            || format!("Δ not multiplicative for {}", tag()),
        )?;
        ensure(env.counit(&ab) == env.counit(&a) * env.counit(&b), || {
            format!("ε not multiplicative for {}", tag())
        })?;
        ensure(
            env.antipode(&ab) == env.mul(&env.antipode(&b), &env.antipode(&a)).unwrap(),
            || format!("S not an antihomomorphism for {}", tag()),
        )?;
        for x in [&a, &b, &ab] {
            let eps = env.scalar(env.counit(x));
            ensure(env.antipode(&env.antipode(x)) == *x, || {
                format!("S∘S ≠ id for {}", tag())
            })?;
            ensure(mu_tensor(&env, &env.delta(x), true) == eps, || {
                format!("μ(S⊗id)Δ ≠ ε for {}", tag())
            })?;
            ensure(mu_tensor(&env, &env.delta(x), false) == eps, || {
                format!("μ(id⊗S)Δ ≠ ε for {}", tag())
            })?;
            ensure(coassociative(&env, x), || format!("Δ not coassociative for {}", tag()))?;
        }
    }
    let (p, q) = (env.generator(0), env.generator(1));
    let qp = env.format(&env.mul(&q, &p).unwrap());
    ensure(qp == "PQ - Z", || format!("Q·P = {qp}"))?;
    let s_pq = env.format(&env.antipode(&env.mul(&p, &q).unwrap()));
    ensure(s_pq == "PQ - Z", || format!("S(PQ) = {s_pq}"))?;

    let grouplikes = env.grouplikes();
    ensure(grouplikes == vec![env.one()], || {
        format!("{} grouplikes in U", grouplikes.len())
    })?;
    let alg = h3_over_a_point(4);
    let solved = solve_grouplikes(&alg).map_err(|e| e.to_string())?;
    let labels: Vec<String> = solved[0].iter().map(|g| alg.format(&g.element)).collect();
    ensure(labels == ["1@e"], || format!("grouplikes {labels:?}"))?;

    let prim = env.primitives();
    let mut span = hopfalg::exact::EchelonBasis::new();
    for (k, v) in prim.iter().enumerate() {
        span.insert(&v.terms, k);
    }
    ensure(
        prim.len() == 3 && (0..3).all(|i| span.contains(&env.generator(i).terms)),
        || {
            format!(
                "primitives {:?}",
                prim.iter().map(|v| env.format(v)).collect::<Vec<_>>()
            )
        },
    )?;
    let prim = solve_primitives(&alg).map_err(|e| e.to_string())?;
    ensure(prim.labels(&alg) == ["P@e", "Q@e", "Z@e"], || {
        format!("Prim basis {:?}", prim.labels(&alg))
    })?;
    Ok("200 pairs, Q·P = PQ - Z, S(PQ) = PQ - Z, G = {1}, Prim = span{P, Q, Z}".to_string())
}

fn criterion_3() -> Check {
    let started = Instant::now();
    let mut models = vec![("z2line".to_string(), z2line()), ("pairh3".to_string(), pairh3())];
    models.extend((1..=10).map(|s| (format!("random seed {s}"), generate(Preset::Random, s))));
    for (name, model) in &models {
        let alg = algebroid(model);
        let conv = alg.as_convolution().unwrap();
        let out = cgk_pipeline(&alg, 20, 0).map_err(|e| format!("{name}: {e}"))?;
        let ranks_ok = alg
            .base()
            .points()
            .all(|x| out.prim.per_point_rank[x] == conv.bundle().fiber(x).dim());
        ensure(ranks_ok, || format!("{name}: Prim ranks {:?}", out.prim.per_point_rank))?;
        ensure(out.prim.flags.s_is_minus, || format!("{name}: S(X) ≠ -X"))?;
        ensure(out.prim.flags.anchor_trivial, || format!("{name}: nontrivial anchor"))?;
        let iso = groupoid_isomorphic(&out.spectral.groupoid, conv.groupoid(), DEFAULT_ISO_ARROW_BOUND)
            .map_err(|e| format!("{name}: {e}"))?;
        ensure(iso.is_some(), || format!("{name}: Gsp(A) is not isomorphic to G"))?;
        let action = out.action.as_ref().ok_or_else(|| format!("{name}: no action"))?;
        let arrows = out
            .spectral
            .input_arrows
            .as_ref()
            .ok_or_else(|| format!("{name}: no arrow matching"))?;
        for (a, &g) in arrows.iter().enumerate() {
            ensure(action.matrix(a) == conv.action().matrix(g), || {
                format!("{name}: action differs along {}", conv.groupoid().id(g))
            })?;
        }
        ensure(out.report.verdict == Verdict::Iso, || {
            format!("{name}: verdict {}", out.report.verdict)
        })?;
        let theta = out.theta.as_ref().ok_or_else(|| format!("{name}: Θ not built"))?;
        ensure(theta.points.iter().all(|p| p.is_bijective()), || {
            format!("{name}: some Θ_x is not bijective")
        })?;
        let homomorphism = out.report.homomorphism.as_ref().map(|h| h.passed()).unwrap_or(false);
        ensure(homomorphism, || format!("{name}: Θ fails a homomorphism check"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(180), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances ISO, {:.1}s", models.len(), elapsed.as_secs_f64()))
}

fn criterion_4() -> Check {
    let alg = algebroid(&funs3());
    let axioms = check_axioms(&alg, 100, 0);
    ensure(axioms.passed(), || {
        format!("axiom failures: {:?}", axioms.failures().collect::<Vec<_>>())
    })?;
    let out = cgk_pipeline(&alg, 20, 0).map_err(|e| e.to_string())?;
    ensure(out.prim.rank() == 0, || format!("Prim rank {}", out.prim.rank()))?;
    ensure(out.spectral.len() == 2, || {
        format!("{} spectral arrows", out.spectral.len())
    })?;
    let theta = &out.report.theta["pt"];
    ensure(theta.rank == 2 && theta.dim == 6, || {
        format!("Θ_pt rank {} dim {}", theta.rank, theta.dim)
    })?;
    ensure(out.report.verdict == Verdict::NotIso, || "verdict ISO".to_string())?;
    ensure(out.report.failed_hypothesis == Some(Hypothesis::DirectSum), || {
        format!("hypothesis {:?}", out.report.failed_hypothesis)
    })?;
    Ok("Prim 0, 2 arrows, Θ_pt rank 2 of 6, NOT ISO (ii)".to_string())
}

fn criterion_5() -> Check {
    let mut instances: Vec<(String, HopfAlgebroid)> = criterion_1_models()
        .iter()
        .map(|(name, m)| (name.clone(), algebroid(m)))
        .collect();
    instances.push((
        "U(h3), N = 4".to_string(),
        HopfAlgebroid::Convolution(h3_over_a_point(4)),
    ));
    instances.push(("Fun(S3)".to_string(), algebroid(&funs3())));
    let mut skips = 0;
    for (name, alg) in &instances {
        let out = cgk_pipeline(alg, 5, 0).map_err(|e| format!("{name}: {e}"))?;
        let report = proposition_suite(alg, &out.prim, &out.spectral, 20, 0).map_err(|e| format!("{name}: {e}"))?;
        skips += report.overflow_skips;
        let failures: Vec<String> = report
            .failures()
            .iter()
            .map(|c| format!("{} ({})", c.name, c.witness.clone().unwrap_or_default()))
            .collect();
        ensure(failures.is_empty(), || format!("{name}: {}", failures.join("; ")))?;
    }
    Ok(format!(
        "{} instances, {skips} products over N skipped",
        instances.len()
    ))
}

fn criterion_6() -> Check {
    let mut count = 0;
    for (name, oracle) in cc_oracle::oracles() {
        ensure(oracle.len() <= 8, || format!("{name} has {} arrows", oracle.len()))?;
        cc_oracle::compare(name, &oracle, 0)?;
        count += 1;
    }
    Ok(format!("{count} groupoids agree on full bases"))
}

fn criterion_7() -> Check {
    let env = h3(2);
    let pq = env.mul(&env.generator(0), &env.generator(1)).unwrap();
    match env.mul(&pq, &env.generator(0)) {
        Err(EnvelopingError::TruncationOverflow {
            degree: 3,
            truncation: 2,
        }) => {}
        other => return Err(format!("(PQ)·P at N = 2 gave {other:?}")),
    }
    let (low, high) = (linear_products(4), linear_products(6));
    let high: BTreeMap<String, SparseVec<Monomial>> = high.into_iter().collect();
    for (label, terms) in &low {
        ensure(high.get(label) == Some(terms), || {
            format!("{label} changes between N = 4 and N = 6")
        })?;
    }
    Ok(format!(
        "overflow raised; {} products identical at N = 4 and N = 6",
        low.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("axiom suite", criterion_1),
        ("enveloping kernel", criterion_2),
        ("round trip", criterion_3),
        ("negative control", criterion_4),
        ("proposition suite", criterion_5),
        ("zero-bundle convolution oracle", criterion_6),
        ("overflow discipline", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name}: {why}", k + 1);
                failed += 1;
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
