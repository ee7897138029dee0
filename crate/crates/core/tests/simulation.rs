use mulgame::measure::ExactSet;
use mulgame::simulator::{adjudicate, simulate, Ledger, PayoutSchedule, Table};
use mulgame::{IntervalUnion, Mantissa, RngStream, Strategy};

/// Leading digit of the product computed on digit strings alone.
fn leading_digit_by_hand(a: &str, b: &str) -> u8 {
    let digits = |s: &str| s.chars().filter(char::is_ascii_digit).collect::<String>().parse::<u128>().unwrap();
    let p = digits(a) * digits(b);
    p.to_string().as_bytes()[0] - b'0'
}

#[test]
fn adjudication_matches_string_arithmetic() {
    let w = ExactSet::new(&IntervalUnion::from_digits(&[1, 2, 3]).unwrap()).unwrap();
    let mut rng = RngStream::new(12, 0);
    for _ in 0..100_000 {
        let (n, resolution) = (1 + rng.below(6) as u32, 1 + rng.below(12) as u32);
        let x = Strategy::UniformDigits { n }.draw(&mut rng, 12).unwrap();
        let y = Strategy::BenfordContinuous.draw(&mut rng, resolution).unwrap();
        let o = adjudicate(x, y, &w);
        let d = leading_digit_by_hand(&x.to_string(), &y.to_string());
        assert_eq!(o.leading_digit, d, "{x} * {y}");
        assert_eq!(o.casino_won, d <= 3);
    }
}

#[test]
fn boundary_products_are_exact() {
    let w = ExactSet::new(&IntervalUnion::from_digits(&[1, 2, 3]).unwrap()).unwrap();
    let m = |s: &str| s.parse::<Mantissa>().unwrap();
    // 2.5 * 1.6 = 4.0 exactly: the casino loses at the right endpoint
    assert!(!adjudicate(m("2.5"), m("1.6"), &w).casino_won);
    assert!(adjudicate(m("2.5"), m("1.5999999"), &w).casino_won);
    assert!(adjudicate(m("2"), m("5"), &w).casino_won);
}

#[test]
fn bankroll_is_conserved() {
    let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
    let payout: PayoutSchedule = "100:140".parse().unwrap();
    let table = Table::new(Strategy::BetaN { n: 3 }, Strategy::UniformMantissa, &w, payout).unwrap();
    let mut ledger = Ledger::new(payout);
    let stats = table.run(5000, 9, 2, |r| {
        ledger.settle(r.outcome.clone());
    }).unwrap();
    assert_eq!(ledger.bankroll, stats.profit);
    assert_eq!(ledger.replay(), stats.profit);
    let wins = stats.casino_win_count as i64;
    assert_eq!(stats.profit, 14_000 * (5000 - wins) - 10_000 * wins);
    // the casino's take is exactly the player's loss
    let casino_take: i64 = ledger.history.iter().map(|r| -r.settlement).sum();
    assert_eq!(casino_take, -stats.profit);
}

#[test]
fn sessions_replay_from_their_seed() {
    let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
    let payout = PayoutSchedule::from_units(1.0, 1.0).unwrap();
    let a = simulate(1000, &Strategy::BenfordContinuous, &Strategy::UniformDigits { n: 2 }, &w, payout, 5).unwrap();
    let b = simulate(1000, &Strategy::BenfordContinuous, &Strategy::UniformDigits { n: 2 }, &w, payout, 5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn benford_dealer_pins_the_rate() {
    let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
    let payout = PayoutSchedule::from_units(1.0, 1.0).unwrap();
    for (k, player) in [Strategy::PurePoint("9.99".parse().unwrap()), Strategy::UniformDigits { n: 1 }]
        .into_iter()
        .enumerate()
    {
        let table = Table::new(Strategy::BenfordContinuous, player, &w, payout).unwrap();
        let s = table.run(1_000_000, 77, k as u64, |_| {}).unwrap();
        assert!((s.casino_win_rate() - 4f64.log10()).abs() < 0.0015, "{}", s.casino_win_rate());
    }
}
