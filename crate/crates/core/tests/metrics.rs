use approx::assert_relative_eq;
use proptest::prelude::*;
use qaoa_decode::catalog;
use qaoa_decode::channel::p_dep;
use qaoa_decode::codes::{generalized_weight, single_qubit_pauli};
use qaoa_decode::metrics::{distribution_report, js, kl, posterior, posterior_with_offset, qaoa_distribution_with_offset};
use qaoa_decode::{BitVector, Error, Schedule};

fn normalize(v: Vec<f64>) -> Vec<f64> {
    let t: f64 = v.iter().sum();
    v.into_iter().map(|x| x / t).collect()
}

#[test]
fn divergence_reference_values() {
    let p = [0.5, 0.5];
    let q = [0.25, 0.75];
    // 0.5 log2(2) + 0.5 log2(2/3)
    assert_relative_eq!(kl(&p, &q).unwrap(), 0.5 + 0.5 * (2.0f64 / 3.0).log2(), epsilon = 1e-15);
    assert_eq!(kl(&p, &p).unwrap(), 0.0);
    assert_eq!(js(&p, &p).unwrap(), 0.0);
    assert_relative_eq!(js(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0, epsilon = 1e-15);
    assert!(matches!(kl(&[0.5, 0.5], &[1.0, 0.0]), Err(Error::NotAbsolutelyContinuous { index: 1 })));
    assert_eq!(kl(&[1.0, 0.0], &[0.5, 0.5]).unwrap(), 1.0);
    assert!(js(&[1.0], &[0.5, 0.5]).is_err());
}

proptest! {
    #[test]
    fn js_properties(a in prop::collection::vec(0.0f64..1.0, 8), b in prop::collection::vec(0.0f64..1.0, 8)) {
        prop_assume!(a.iter().sum::<f64>() > 1e-3 && b.iter().sum::<f64>() > 1e-3);
        let (p, q) = (normalize(a), normalize(b));
        let d = js(&p, &q).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert_eq!(d.to_bits(), js(&q, &p).unwrap().to_bits());
        let m: Vec<f64> = p.iter().zip(&q).map(|(x, y)| 0.5 * (x + y)).collect();
        let via_kl = 0.5 * kl(&p, &m).unwrap() + 0.5 * kl(&q, &m).unwrap();
        prop_assert!((d - via_kl).abs() < 1e-12);
    }
}

#[test]
fn posterior_matches_channel_probabilities() {
    let code = catalog::load("five_one_three").unwrap();
    let q = code.as_quantum().unwrap();
    let z = single_qubit_pauli("X1", 5).unwrap();
    let eps = 0.2;
    let post = posterior_with_offset::<f64>(q, &z, eps).unwrap();
    assert_eq!(post.probs.len(), 64);
    assert_relative_eq!(post.total(), 1.0, epsilon = 1e-12);
    let raw: Vec<f64> = (0..64u64)
        .map(|u| p_dep(&(&q.g_s.left_mul(&BitVector::from_u64(u, 6)).unwrap() ^ &z), eps).unwrap())
        .collect();
    for (a, b) in post.probs.iter().zip(normalize(raw)) {
        assert_relative_eq!(*a, b, epsilon = 1e-14);
    }
    // perfect code: X1 is the only weight-one member and carries the largest mass
    let top = post.top(2);
    let weight = |u: usize| generalized_weight(&(&q.g_s.left_mul(&BitVector::from_u64(u as u64, 6)).unwrap() ^ &z)).unwrap();
    assert_eq!(weight(top[0]), 1);
    assert!(weight(top[1]) > 1);
    assert!(post.probs[top[0]] > post.probs[top[1]]);
    assert!(posterior::<f64>(q, &BitVector::zeros(4), 0.0).is_err());
    assert!(posterior::<f64>(q, &BitVector::zeros(4), 0.75).is_err());
}

#[test]
fn posterior_is_offset_covariant() {
    // changing the offset within a coset permutes the labels but keeps the masses
    let code = catalog::load("shor913_sparse").unwrap();
    let q = code.as_quantum().unwrap();
    let z = single_qubit_pauli("Z2", 9).unwrap();
    let z_alt = &z ^ &q.g_s.row(0);
    let mut a = posterior_with_offset::<f64>(q, &z, 0.3).unwrap().probs;
    let mut b = posterior_with_offset::<f64>(q, &z_alt, 0.3).unwrap().probs;
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    for (x, y) in a.iter().zip(&b) {
        assert_relative_eq!(*x, *y, epsilon = 1e-15);
    }
}

#[test]
fn qaoa_distribution_is_normalized_and_uniform_at_zero() {
    let code = catalog::load("five_one_three_sparse").unwrap();
    let q = code.as_quantum().unwrap();
    let z = single_qubit_pauli("Y4", 5).unwrap();
    let d = qaoa_distribution_with_offset(q, &z, &Schedule::uniform(2, 0.4, 0.3).unwrap()).unwrap();
    assert_relative_eq!(d.total(), 1.0, epsilon = 1e-12);
    let u = qaoa_distribution_with_offset(q, &z, &Schedule::uniform(1, 0.0, 0.0).unwrap()).unwrap();
    for p in &u.probs {
        assert_relative_eq!(*p, 1.0 / 64.0, epsilon = 1e-14);
    }
}

#[test]
fn report_contents() {
    let code = catalog::load("five_one_three_sparse").unwrap();
    let q = code.as_quantum().unwrap();
    let z = single_qubit_pauli("X1", 5).unwrap();
    let sched = Schedule::new(vec![0.5, 0.3], vec![0.4, 0.2]).unwrap();
    let rep = distribution_report(q, &z, 0.32, &sched, 5).unwrap();
    assert_eq!(rep.top.len(), 5);
    assert!(rep.top.windows(2).all(|w| w[0].q >= w[1].q));
    assert_relative_eq!(rep.js, 0.5 * (rep.kl_pm + rep.kl_qm), epsilon = 1e-12);

    let mut csv = Vec::new();
    rep.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u_decimal,P,Q"));
    assert_eq!(lines.count(), 64);

    let summary = rep.summary_json();
    for key in ["code", "syndrome", "z_s", "js", "kl_PM", "kl_QM", "epsilon", "p", "angles", "top"] {
        assert!(summary.get(key).is_some(), "missing {key}");
    }
    assert_eq!(summary["p"], 2);
}
