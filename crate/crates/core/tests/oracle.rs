//! Library values against brute-force references and frozen constants.

// Frozen constants keep all the digits the high-precision reference produced.
#![allow(clippy::excessive_precision)]

mod common;

use common as o;
use genentropy::*;

const SK_CONDITIONAL: f64 = 0.98547529722733431952;
const SK_JOINT: f64 = 1.98547529722733431952;
const NSK_CONDITIONAL: f64 = 0.97143084780322910603;
const NSK_JOINT: f64 = 1.97143084780322910600;
const LOG2_8_3: f64 = 1.41503749927884381855;
const LOG2_1_5: f64 = 0.58496250072115618145;

fn d(v: &[f64]) -> ProbDist {
    make_dist(v, Normalization::Strict).unwrap()
}

fn joint() -> Vec<Vec<f64>> {
    vec![vec![0.25, 0.25], vec![0.3, 0.2]]
}

#[test]
fn frozen_constants_match_the_references() {
    let j = joint();
    let (m, c) = o::split(&j);
    assert!(o::close(o::shannon(&o::flat(&j), -1.0), SK_JOINT, 1e-15));
    let sk = m[0] * o::shannon(&c[0], -1.0) + m[1] * o::shannon(&c[1], -1.0);
    assert!(o::close(sk, SK_CONDITIONAL, 1e-15));
    let e = o::escort(&m, 2.0);
    let nsk = o::exp_mean(-1.0, &e, &[o::renyi(&c[0], 2.0), o::renyi(&c[1], 2.0)]);
    assert!(o::close(nsk, NSK_CONDITIONAL, 1e-15));
    assert!(o::close(o::renyi(&o::flat(&j), 2.0), NSK_JOINT, 1e-15));
    assert!(o::close(o::renyi(&[0.5, 0.25, 0.25], 2.0), LOG2_8_3, 1e-15));
    assert!(o::close(o::exp_mean(1.0, &[0.5, 0.5], &[0.0, 1.0]), LOG2_1_5, 1e-15));
}

#[test]
fn closed_form_examples() {
    let p3 = d(&[0.5, 0.25, 0.25]);
    let p2 = d(&[0.5, 0.5]);
    let cases = [
        (renyi(&p3, 2.0).unwrap(), LOG2_8_3),
        (nath(&p3, -1.0, -1.0, 2.0).unwrap(), LOG2_8_3),
        (sharma_mittal(&p3, 1.0, 2.0, 0.0).unwrap(), LOG2_8_3),
        (tsallis(&p3, 2.0, -1.0, -1.0).unwrap(), 0.625),
        (tsallis(&p2, 2.0, -1.0, -1.0).unwrap(), 0.5),
        (sharma_mittal(&p2, 2.0, 2.0, -1.0).unwrap(), 0.5),
        (gaussian_entropy(&p2, 2.0, -0.5).unwrap(), 1.0),
        (nath(&p2, -1.0, 2.0, 0.5).unwrap(), 0.25),
        (biparametric(&p2, -1.0, 1.0, 1.0).unwrap(), 1.0),
        (shannon(&uniform(4).unwrap(), -1.0).unwrap(), 2.0),
        (renyi(&uniform(8).unwrap(), 0.25).unwrap(), 3.0),
        (
            generalized(&p2, &PseudoAddGenerator::gamma_exp(-1.0, -1.0).unwrap(), -1.0, -1.0, 2.0).unwrap(),
            0.5,
        ),
    ];
    for (i, (got, want)) in cases.iter().enumerate() {
        assert!((got - want).abs() <= 1e-12, "case {i}: {got} vs {want}");
    }
    let e = escort(&p3, 2.0).unwrap();
    for (a, b) in e.iter().zip([2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]) {
        assert!((a - b).abs() < 1e-15);
    }
}

#[test]
fn nath_power_law_closed_form() {
    for r in 2..=9 {
        let u = uniform(r).unwrap();
        for (lambda, alpha) in [(1.0, 0.5), (-1.0, 3.0), (0.25, 0.75)] {
            let want = (1.0 - alpha) / lambda * (r as f64).log2();
            let got = nath(&u, -1.0, lambda, alpha).unwrap();
            assert!(o::close(got, want, 1e-13));
            assert!(o::close(got, o::nath(&o::uniform(r), -1.0, lambda, alpha), 1e-13));
        }
        let bp = biparametric(&u, -2.0, 0.5, 1.5).unwrap();
        assert!(o::close(bp, 2.0 * (r as f64).log2(), 1e-13));
    }
}

#[test]
fn conditionals_match_brute_force() {
    let j = JointDist::new(&joint(), Normalization::Strict).unwrap();
    let sh = EntropyParams::shannon(-1.0).unwrap();
    let c = conditional(&j, &sh, &sh.composition_rule()).unwrap();
    assert!((c - SK_CONDITIONAL).abs() < 1e-14);
    let r2 = EntropyParams::renyi(2.0).unwrap();
    let c = conditional(&j, &r2, &r2.composition_rule()).unwrap();
    assert!((c - NSK_CONDITIONAL).abs() < 1e-14);
    let mean = kn_mean(&MeanGenerator::exp(1.0, 1.0, 1.0).unwrap(), &d(&[0.5, 0.5]), &[0.0, 1.0]).unwrap();
    assert!((mean - LOG2_1_5).abs() < 1e-15);
}

#[test]
fn generator_algebra_examples() {
    assert_eq!(gamma_add(2.0, 3.0, 0.0), 5.0);
    assert_eq!(gamma_add(1.0, 1.0, 1.0), 3.0);
    assert_eq!(gamma_add(0.5, 0.5, -1.0), 0.75);
    let h = PseudoAddGenerator::gamma_exp(2.0, 0.5).unwrap();
    assert!((induced_add(&h, 0.5, 0.5).unwrap() - 1.125).abs() < 1e-15);
    let h = PseudoAddGenerator::gamma_exp(1.0, 1.0).unwrap();
    assert!((induced_add(&h, 1.0, 1.0).unwrap() - 3.0).abs() < 1e-15);
    assert!(matches!(h_invert(&h, -2.0), Err(Error::Domain(_))));
    let a = MeanGenerator::exp(1.0, 1.0, 1.0).unwrap();
    let b = MeanGenerator::exp(1.0, 1.0, 2.0).unwrap();
    let r = means_agree(&a, &b, 200, 1e-10, 7).unwrap();
    assert!(!r.agree);
    let w = d(&r.witness_weights);
    let gap = (o::exp_mean(1.0, w.as_slice(), &r.witness_values)
        - o::exp_mean(2.0, w.as_slice(), &r.witness_values))
    .abs();
    assert!((gap - r.max_gap).abs() < 1e-9);
}

#[test]
fn random_distributions_agree_with_references() {
    let mut rng = o::Lcg(0x5eed);
    let alphas = [0.25, 0.5, 0.9, 1.1, 2.0, 4.0];
    for trial in 0..2000 {
        let n = 2 + trial % 9;
        let v = rng.simplex(n);
        let p = d(&v);
        let tol = 1e-12;
        assert!(o::close(shannon(&p, -2.0).unwrap(), o::shannon(&v, -2.0), tol));
        for &a in &alphas {
            assert!(o::close(renyi(&p, a).unwrap(), o::renyi(&v, a), tol), "renyi {a} {v:?}");
            let g = 1.0 - a;
            assert!(o::close(tsallis(&p, a, g, -1.0).unwrap(), o::tsallis(&v, a, g, -1.0), tol));
            let lam = 0.5 * (1.0 - a);
            assert!(o::close(nath(&p, -1.0, lam, a).unwrap(), o::nath(&v, -1.0, lam, a), tol));
            for q in [0.5, 2.0] {
                let g = (1.0f64 - q).exp2() - 1.0;
                assert!(o::close(
                    sharma_mittal(&p, q, a, g).unwrap(),
                    o::sharma_mittal(&v, q, a, g),
                    tol
                ));
                let h = PseudoAddGenerator::for_q(q, g).unwrap();
                let gen = generalized(&p, &h, -1.0, 1.0 - a, a).unwrap();
                assert!(o::close(gen, o::sharma_mittal(&v, q, a, g), 1e-11));
            }
            let bp = biparametric(&p, -1.0, lam, a).unwrap();
            assert!(o::close(bp, o::biparametric(&v, -1.0, lam, a), 1e-11));
        }
        for q in [0.5, 2.0] {
            let g = 1.0 - q;
            assert!(o::close(gaussian_entropy(&p, q, g).unwrap(), o::gaussian(&v, q, g), tol));
        }
    }
}

#[test]
fn random_joints_compose_like_the_references() {
    let mut rng = o::Lcg(17);
    for trial in 0..500 {
        let (r, c) = (2 + trial % 5, 2 + (trial / 5) % 5);
        let cells = rng.simplex(r * c);
        let rows: Vec<Vec<f64>> = cells.chunks(c).map(<[f64]>::to_vec).collect();
        let j = JointDist::new(&rows, Normalization::Strict).unwrap();
        let (m, conds) = o::split(&rows);

        let a = 2.0;
        let g = -1.0;
        let ts = EntropyParams::tsallis(a, g, -1.0).unwrap();
        let e = o::escort(&m, a);
        let want: f64 = (0..r).map(|k| e[k] * o::tsallis(&conds[k], a, g, -1.0)).sum();
        let got = conditional(&j, &ts, &ts.composition_rule()).unwrap();
        assert!(o::close(got, want, 1e-12));
        let joint = o::tsallis(&cells, a, g, -1.0);
        assert!(o::close(joint, o::gamma_add(o::tsallis(&m, a, g, -1.0), want, g), 1e-12));

        let re = EntropyParams::renyi(0.5).unwrap();
        let vals: Vec<f64> = conds.iter().map(|q| o::renyi(q, 0.5)).collect();
        let want = o::exp_mean(0.5, &o::escort(&m, 0.5), &vals);
        let got = conditional(&j, &re, &re.composition_rule()).unwrap();
        assert!(o::close(got, want, 1e-12));
    }
}
