use oscwave::config::{Exponent, KernelKind, RunConfig};
use oscwave::Error;
use proptest::prelude::*;

#[test]
fn empty_object_is_the_default() {
    assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
}

#[test]
fn defaults_survive_serialization() {
    let cfg = RunConfig::default();
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains(r#""q":"inf""#), "{text}");
    assert_eq!(RunConfig::from_json(&text).unwrap(), cfg);
}

#[test]
fn unknown_keys_are_rejected() {
    for text in [
        r#"{"b": 1}"#,
        r#"{"truncation": {"tail": 1e-10}}"#,
        r#"{"verify": {"scan": {"t_step": 0.1}}}"#,
        r#"{"k_scan": {"rho_max": 10, "nodes": 3}}"#,
    ] {
        let err = RunConfig::from_json(text).unwrap_err();
        assert!(matches!(err, Error::Format { .. }), "{text}: {err}");
        assert_eq!(err.exit_code(), 2);
    }
}

#[test]
fn invalid_values_are_rejected() {
    for text in [
        r#"{"a": -0.5}"#,
        r#"{"workers": 0}"#,
        r#"{"partition": {"lo": 2, "hi": 1}}"#,
        r#"{"verify": {"p": 0.5}}"#,
        r#"{"verify": {"q": "huge"}}"#,
        r#"{"verify": {"scan": {"t_count": 0}}}"#,
        r#"{"truncation": {"tail_tol": 0}}"#,
        r#"{"grid": {"n_r": 0}}"#,
    ] {
        let err = RunConfig::from_json(text).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{text}: {err}");
    }
}

#[test]
fn sections_parse() {
    let cfg = RunConfig::from_json(
        r#"{"a": 2.5, "kernel": {"kind": "schrodinger", "t": [1.0]},
            "verify": {"p": "inf", "q": 2, "j": 3},
            "strichartz": {"q": "inf", "r": 2}}"#,
    )
    .unwrap();
    assert_eq!(cfg.params().unwrap().a(), 2.5);
    assert_eq!(cfg.kernel.kind, KernelKind::Schrodinger);
    assert_eq!(cfg.kernel.t, vec![1.0]);
    assert_eq!(cfg.kernel.r, RunConfig::default().kernel.r);
    assert_eq!(cfg.verify.p, Exponent(f64::INFINITY));
    assert_eq!(cfg.verify.q, Exponent(2.0));
    assert_eq!(cfg.verify.j, 3);
    assert_eq!(cfg.strichartz.q, Exponent(f64::INFINITY));
}

proptest! {
    #[test]
    fn exponents_round_trip(x in prop_oneof![Just(f64::INFINITY), 1.0f64..1e6]) {
        let text = serde_json::to_string(&Exponent(x)).unwrap();
        prop_assert_eq!(serde_json::from_str::<Exponent>(&text).unwrap(), Exponent(x));
    }

    #[test]
    fn truncation_section_builds_its_policy(tail in 1e-15f64..1e-3, cap in 1usize..1000, split: bool) {
        let text = format!(r#"{{"truncation": {{"tail_tol": {tail}, "k_max_cap": {cap}, "split": {split}}}}}"#);
        let policy = RunConfig::from_json(&text).unwrap().truncation.policy().unwrap();
        prop_assert_eq!(policy.tail_tol(), tail);
        prop_assert_eq!(policy.k_max_cap(), cap);
        prop_assert_eq!(policy.split(), split);
    }
}
