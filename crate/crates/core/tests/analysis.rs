use hopfalg::algebroid::{Algebroid, Element, HopfAlgebroid};
use hopfalg::analysis::*;
use hopfalg::exact::{QMatrix, Rational};
use hopfalg::groupoid::BaseFun;
use hopfalg::model::{funs3, group_algebra, pairh3, random_model, z2line, ModelFile};

fn build(m: ModelFile) -> HopfAlgebroid {
    m.resolve().unwrap().into_algebroid().unwrap()
}

fn parse(alg: &dyn Algebroid, s: &str) -> Element {
    alg.parse(s).unwrap()
}

#[test]
fn z2line_primitives() {
    let alg = build(z2line());
    let prim = solve_primitives(&alg).unwrap();
    assert_eq!(prim.per_point_rank, vec![1]);
    assert_eq!(prim.labels(&alg), vec!["X@e"]);
    assert!(prim.flags.verified && prim.flags.s_is_minus && prim.flags.anchor_trivial);
    assert_eq!(alg.antipode(&prim.basis[0]), parse(&alg, "-X@e"));
}

#[test]
fn pairh3_primitives_span_the_fibers() {
    let alg = build(pairh3());
    let prim = solve_primitives(&alg).unwrap();
    assert_eq!(prim.per_point_rank, vec![3, 3]);
    assert_eq!(prim.labels(&alg), vec!["P@1x", "Q@1x", "Z@1x", "P@1y", "Q@1y", "Z@1y"]);
    let bundle = prim_bundle(&alg, &prim).unwrap();
    assert_eq!(bundle.fiber(0).names(), ["P", "Q", "Z"]);
    assert_eq!(bundle.fiber(0).constant(0, 1, 2), Rational::one());
}

#[test]
fn funs3_has_no_primitives_and_two_characters() {
    let alg = build(funs3());
    let prim = solve_primitives(&alg).unwrap();
    assert_eq!(prim.rank(), 0);
    let gl = solve_grouplikes_at(&alg, 0).unwrap();
    assert_eq!(gl.len(), 2);
    assert!(gl.iter().all(|g| g.s_invariant));
    // trivial character: the sum of all indicators; sign character: signed sum
    let labels = ["d012", "d021", "d102", "d120", "d201", "d210"];
    let signs = [1, -1, -1, 1, 1, -1];
    let trivial: Element = (0..6).map(|i| (i, Rational::one())).collect();
    let sign: Element = (0..6).map(|i| (i, Rational::from_int(signs[i]))).collect();
    for (i, l) in labels.iter().enumerate() {
        assert_eq!(alg.basis_label(i), *l);
    }
    let found: Vec<&Element> = gl.iter().map(|g| &g.element).collect();
    assert!(found.contains(&&trivial) && found.contains(&&sign));
}

#[test]
fn grouplikes_of_group_algebras_are_the_group() {
    for m in 1..=5 {
        let alg = HopfAlgebroid::Table(group_algebra(m));
        let gl = solve_grouplikes_at(&alg, 0).unwrap();
        assert_eq!(gl.len(), m);
        for g in &gl {
            assert_eq!(g.element.len(), 1);
        }
    }
}

#[test]
fn z2line_grouplikes_and_spectral_groupoid() {
    let alg = build(z2line());
    let gl = solve_grouplikes_at(&alg, 0).unwrap();
    let found: Vec<String> = gl.iter().map(|g| alg.format(&g.element)).collect();
    assert_eq!(found, vec!["1@e", "1@s"]);
    let gsp = build_spectral_groupoid(&alg).unwrap();
    assert_eq!(gsp.len(), 2);
    let conv = alg.as_convolution().unwrap();
    assert!(gsp.isomorphic_to(conv.groupoid()).unwrap());
    assert_eq!(gsp.input_arrows, Some(vec![0, 1]));
}

#[test]
fn pairh3_spectral_groupoid_is_the_pair_groupoid() {
    let alg = build(pairh3());
    let gl = solve_grouplikes_at(&alg, 1).unwrap();
    let found: Vec<String> = gl.iter().map(|g| alg.format(&g.element)).collect();
    assert_eq!(found, vec!["1@1y", "1@g"]);
    let gsp = build_spectral_groupoid(&alg).unwrap();
    assert_eq!(gsp.len(), 4);
    assert!(gsp.isomorphic_to(alg.as_convolution().unwrap().groupoid()).unwrap());
    for a in 0..gsp.len() {
        let g = gsp.input_arrows.as_ref().unwrap()[a];
        let input = alg.as_convolution().unwrap().groupoid();
        assert_eq!(gsp.groupoid.src(a), input.src(g));
        assert_eq!(gsp.groupoid.tgt(a), input.tgt(g));
    }
}

#[test]
fn funs3_spectral_groupoid_is_z2() {
    let alg = build(funs3());
    let gsp = build_spectral_groupoid(&alg).unwrap();
    let z2 = build(z2line());
    assert_eq!(gsp.len(), 2);
    assert!(gsp.isomorphic_to(z2.as_convolution().unwrap().groupoid()).unwrap());
}

#[test]
fn t_operator_conjugates_by_the_flip() {
    let alg = build(z2line());
    let s = parse(&alg, "1@s");
    let x = parse(&alg, "X@e");
    let image = t_operator(&alg, &s, &s, &s, &x).unwrap();
    assert_eq!(image, parse(&alg, "-X@e"));
    let prim = solve_primitives(&alg).unwrap();
    assert!(prim.contains(&image));
    let one = alg.one();
    let b = parse(&alg, "2*X^3@s - 1/2*1@e");
    assert_eq!(t_operator(&alg, &one, &one, &one, &b).unwrap(), b);
}

#[test]
fn t_operator_rejects_bad_pairs() {
    let alg = build(z2line());
    let x = parse(&alg, "X@e");
    let not_grouplike = parse(&alg, "1@e + 1@s");
    assert!(matches!(
        t_operator(&alg, &not_grouplike, &not_grouplike, &not_grouplike, &x),
        Err(AnalysisError::NotAGoodPair(_))
    ));
    let s = parse(&alg, "1@s");
    let e = parse(&alg, "1@e");
    assert!(matches!(
        t_operator(&alg, &s, &e, &s, &x),
        Err(AnalysisError::NotAGoodPair(_))
    ));

    let pair = build(pairh3());
    let c = pair.one();
    let n = pair.points();
    let fx = BaseFun::indicator(n, 0);
    let fy = BaseFun::indicator(n, 1);
    // f' must be 1 on the support of f
    assert!(GoodPair::new(&pair, c.clone(), fx.clone(), fy.clone()).is_err());
    assert!(GoodPair::new(&pair, c.clone(), fx.clone(), BaseFun::constant(n, Rational::one())).is_ok());
    // witness normalized only at y
    let g = parse(&pair, "1@g");
    assert!(GoodPair::new(&pair, g.clone(), fx, fy.clone()).is_err());
    assert!(GoodPair::new(&pair, g, fy.clone(), fy).is_ok());
}

#[test]
fn prim_action_recovers_the_input() {
    for model in [z2line(), pairh3()] {
        let alg = build(model);
        let out = cgk_pipeline(&alg, 5, 1).unwrap();
        let prim = &out.prim;
        let bundle = prim_bundle(&alg, prim).unwrap();
        let action = build_prim_action(&alg, &out.spectral, prim, &bundle).unwrap();
        let conv = alg.as_convolution().unwrap();
        let arrows = out.spectral.input_arrows.as_ref().unwrap();
        for (a, &g) in arrows.iter().enumerate() {
            assert_eq!(action.matrix(a), conv.action().matrix(g));
        }
    }
    let alg = build(z2line());
    let out = cgk_pipeline(&alg, 5, 1).unwrap();
    let bundle = prim_bundle(&alg, &out.prim).unwrap();
    let action = build_prim_action(&alg, &out.spectral, &out.prim, &bundle).unwrap();
    assert_eq!(action.matrix(1), &QMatrix::from_int_rows(&[&[-1]]));
}

#[test]
fn theta_on_z2line_is_a_ten_by_ten_isomorphism() {
    let alg = build(z2line());
    let out = cgk_pipeline(&alg, 30, 7).unwrap();
    let theta = out.theta.unwrap();
    assert_eq!(theta.points.len(), 1);
    let p = &theta.points[0];
    assert_eq!((p.rank, p.dim, p.domain_dim), (10, 10, 10));
    assert!(p.matrix.is_square() && p.matrix.determinant().is_some_and(|d| !d.is_zero()));
    for g in 0..out.spectral.len() {
        let delta = theta.domain.delta_arrow(g);
        assert_eq!(theta.apply(&delta), *out.spectral.representative(g));
    }
    assert!(out.report.homomorphism.as_ref().unwrap().passed());
    assert!(out.report.is_iso());
}

#[test]
fn cgk_reports_for_the_presets() {
    let z = cgk_decide(&build(z2line()), 20, 1).unwrap();
    assert!(z.is_iso() && z.constant_rank && z.s_invariant);
    assert_eq!(z.spectral.iso_to_input, Some(true));

    let p = cgk_decide(&build(pairh3()), 20, 1).unwrap();
    assert!(p.is_iso());
    assert_eq!(p.prim_rank.values().copied().collect::<Vec<_>>(), vec![3, 3]);
    for t in p.theta.values() {
        assert_eq!(t.rank, t.dim);
    }

    let f = cgk_decide(&build(funs3()), 20, 1).unwrap();
    assert_eq!(f.verdict, Verdict::NotIso);
    assert_eq!(f.failed_hypothesis, Some(Hypothesis::DirectSum));
    assert_eq!(f.spectral.arrows, 2);
    let t = &f.theta["pt"];
    assert_eq!((t.rank, t.dim, t.domain_dim), (2, 6, 2));
    assert!(f.witness.as_deref().is_some_and(|w| w.contains("outside the image")));
}

#[test]
fn cgk_report_json_shape() {
    let f = cgk_decide(&build(funs3()), 5, 1).unwrap();
    let v: serde_json::Value = serde_json::to_value(&f).unwrap();
    assert_eq!(v["verdict"], "NOT ISO");
    assert_eq!(v["failedHypothesis"], "(ii)");
    assert_eq!(v["primRank"]["pt"], 0);
    assert_eq!(v["theta"]["pt"]["rank"], 2);
    assert_eq!(v["theta"]["pt"]["dim"], 6);
    assert_eq!(v["spectral"]["arrows"], 2);
    assert!(v["spectral"].get("isoToInput").is_none());
    assert!(v.get("witness").is_some());
}

#[test]
fn random_instances_round_trip() {
    for seed in 1..=6 {
        let model = random_model(seed);
        let alg = build(model);
        let out = cgk_pipeline(&alg, 10, seed).unwrap();
        let conv = alg.as_convolution().unwrap();
        for x in alg.base().points() {
            assert_eq!(out.prim.per_point_rank[x], conv.bundle().fiber(x).dim(), "seed {seed}");
        }
        assert!(out.prim.flags.s_is_minus && out.prim.flags.anchor_trivial);
        assert_eq!(out.report.spectral.iso_to_input, Some(true), "seed {seed}");
        assert!(out.report.is_iso(), "seed {seed}: {:?}", out.report.lines());
    }
}

#[test]
fn propositions_hold_on_presets() {
    for model in [z2line(), pairh3(), funs3(), random_model(3)] {
        let alg = build(model);
        let out = cgk_pipeline(&alg, 3, 1).unwrap();
        let report = proposition_suite(&alg, &out.prim, &out.spectral, 10, 5).unwrap();
        assert!(report.passed(), "{:?}", report.failures());
    }
}

#[test]
fn d_span_of_z2line_is_the_truncated_line() {
    let alg = build(z2line());
    let prim = solve_primitives(&alg).unwrap();
    let span = d_span(&alg, &prim, 0).unwrap();
    let labels: Vec<String> = span.iter().map(|v| alg.format(v)).collect();
    assert_eq!(labels, vec!["1@e", "X@e", "X^2@e", "X^3@e", "X^4@e"]);
}

#[test]
fn truncation_one_overflows_in_brackets() {
    let mut model = pairh3();
    model.truncation = Some(1);
    let alg = build(model);
    match cgk_decide(&alg, 2, 1) {
        Err(CgkError {
            stage: Stage::PrimBundle,
            error:
                AnalysisError::TruncationOverflow {
                    needed: 2,
                    truncation: 1,
                    ..
                },
        }) => {}
        other => panic!("unexpected {other:?}"),
    }
}
