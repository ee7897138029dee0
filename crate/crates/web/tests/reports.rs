use mulgame_web::{digit_report, trajectory_report, vy_report};

#[test]
fn digit_summary() {
    let r = digit_report(&[1, 2, 3], 3).unwrap();
    assert!((r.value - 4f64.log10()).abs() < 1e-12);
    assert_eq!((r.casino_wins, r.player_wins), (461_698, 348_302));
    assert!((r.histogram.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!((r.benford.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(digit_report(&[1, 2, 3], 6).is_err());
    assert!(digit_report(&[10], 2).is_err());
    assert_eq!(digit_report(&[1, 2, 3, 4, 5, 6, 7, 8, 9], 1).unwrap().fair_payout, None);
}

#[test]
fn region_for_y() {
    let r = vy_report(&[1, 2, 3], 2.5).unwrap();
    assert_eq!(r.parts, vec![(1.0, 1.6), (4.0, 10.0)]);
    assert!((r.benford_measure - 4f64.log10()).abs() < 1e-12);
    assert!(vy_report(&[1], 0.5).is_err());
}

#[test]
fn trajectory() {
    let a = trajectory_report(&[1, 2, 3], r#"{"type":"benford"}"#, r#"{"type":"pure","x":2.5}"#, 100.0, 140.0, 500, 3)
        .unwrap();
    let b = trajectory_report(&[1, 2, 3], r#"{"type":"benford"}"#, r#"{"type":"pure","x":2.5}"#, 100.0, 140.0, 500, 3)
        .unwrap();
    assert_eq!(a.bankroll, b.bankroll);
    assert_eq!(a.bankroll.len(), 500);
    assert!((a.expected_final.unwrap() + 2247.2).abs() < 0.1);
    assert!(trajectory_report(&[1], r#"{"type":"x"}"#, r#"{"type":"benford"}"#, 1.0, 1.0, 10, 0).is_err());
    assert!(trajectory_report(&[1], r#"{"type":"benford"}"#, r#"{"type":"benford"}"#, 1.0, 1.0, 0, 0).is_err());
}
