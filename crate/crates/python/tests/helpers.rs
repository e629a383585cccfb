use burnt_pancake_py::{covering_json, eigenpairs, gap, quotient_rows, theorem_json};
use serde_json::Value;

#[test]
fn quotient_rows_n2() {
    assert_eq!(
        quotient_rows(2).unwrap(),
        vec![
            vec![1, 0, 1, 0],
            vec![0, 0, 1, 1],
            vec![1, 1, 0, 0],
            vec![0, 1, 0, 1]
        ]
    );
    assert!(quotient_rows(0).is_err());
}

#[test]
fn eigenpairs_and_report() {
    let pairs = eigenpairs(3).unwrap();
    assert_eq!(pairs.iter().map(|p| p.0).collect::<Vec<_>>(), vec![3, 2, 0]);
    assert_eq!(pairs[0].1, vec![1; 6]);
    let v: Value = serde_json::from_str(&theorem_json(5, false).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["expected_set"], serde_json::json!([0, 1, 3, 4, 5]));
}

#[test]
fn gap_and_covering() {
    let (l2, g, method, _) = gap(2).unwrap();
    assert!((l2 - std::f64::consts::SQRT_2).abs() < 1e-10);
    assert!((g - (2.0 - std::f64::consts::SQRT_2)).abs() < 1e-10);
    assert_eq!(method, "dense");
    let v: Value = serde_json::from_str(&covering_json(4).unwrap()).unwrap();
    assert_eq!(v["index"], 48);
    assert!(covering_json(2).is_err());
}
