use hardy_tobl::hardy::{maximize_hardy, CorrelationSet, OptimizationRequest, Scenario};
use hardy_tobl::polytopes::membership_tobl;
use hardy_tobl::rational::Rational;
use hardy_tobl::wirings::{apply_wiring, audit_wirings, chsh_value, Pair, Wiring};

#[test]
fn ns_optimum_has_nonlocal_wirings() {
    let req = OptimizationRequest::canonical(Scenario::Tripartite, CorrelationSet::NoSignaling).unwrap();
    let b = maximize_hardy(&req).optimal().unwrap().behavior;
    assert!(!membership_tobl(&b).is_member());
    let report = audit_wirings(&b, &Pair::ALL, &|_, _| {});
    assert_eq!(report.invalid_count(), 0);
    assert!(report.nonlocal_count() > 0, "{}", report.to_text());

    let pair = report.pairs.iter().find(|p| p.nonlocal_count() > 0).unwrap();
    let worst = pair.worst().unwrap();
    assert!(!worst.local);
    let wired = apply_wiring(&b, &Wiring::from_index(pair.pair, worst.index));
    assert_eq!(chsh_value(&wired), worst.chsh);
    assert!(worst.chsh > Rational::from(2));

    let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(json["nonlocal"], report.nonlocal_count());
    assert_eq!(json["pairs"].as_array().unwrap().len(), 3);
}
