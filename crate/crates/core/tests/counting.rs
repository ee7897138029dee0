use mulgame::exact_count::{count_products, count_products_fast, uniform_limit_value};
use mulgame::strategy::{beta_n_mass, support_grid, win_probability};
use mulgame::{IntervalUnion, Mantissa, RngStream, Strategy};

fn random_digits(rng: &mut RngStream) -> Vec<u8> {
    (1..=9u8).filter(|_| rng.below(2) == 1).collect()
}

#[test]
fn fast_path_matches_enumeration() {
    let mut rng = RngStream::new(17, 0);
    for k in 0..20 {
        let w = IntervalUnion::from_digits(&random_digits(&mut rng)).unwrap();
        let top = if k < 2 { 4 } else { 3 };
        for n in 1..=top {
            assert_eq!(count_products_fast(n, &w).unwrap(), count_products(n, &w).unwrap(), "n={n} w={w}");
        }
    }
}

#[test]
fn fast_path_on_irregular_sets() {
    let w: IntervalUnion = serde_json::from_str(r#"{"domain":"mantissa","parts":[[1.25,2.5],[3.1415,6.02],[9.5,10]]}"#).unwrap();
    for n in 1..=3 {
        assert_eq!(count_products_fast(n, &w).unwrap(), count_products(n, &w).unwrap());
    }
}

#[test]
fn integer_and_grid_counts_agree() {
    // products of grid mantissas i/10 and j/10 have the same mantissa as i·j
    let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
    let mut casino = 0;
    for i in support_grid(2).unwrap() {
        for j in support_grid(2).unwrap() {
            let x = Mantissa::from_scaled(i, 2).unwrap();
            let y = Mantissa::from_scaled(j, 2).unwrap();
            if x.mul(&y).leading_digit() <= 3 {
                casino += 1;
            }
        }
    }
    assert_eq!(casino, count_products(2, &w).unwrap().casino_wins);
}

#[test]
fn rates_approach_the_uniform_limit() {
    let w = IntervalUnion::from_digits(&[1, 2, 3]).unwrap();
    let limit = uniform_limit_value(&w).unwrap().value;
    let gaps: Vec<f64> = (1..=5).map(|n| (count_products_fast(n, &w).unwrap().casino_rate() - limit).abs()).collect();
    assert!(gaps.windows(2).all(|g| g[1] < g[0]), "{gaps:?}");
    assert!(gaps[4] < 1e-4);
}

#[test]
fn beta_one_masses_and_sampling() {
    let total: f64 = (1..=9u128).map(|d| beta_n_mass(1, &Mantissa::of_integer(d).unwrap()).unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let mut rng = RngStream::new(3, 0);
    let draws = 200_000;
    let mut counts = [0u32; 9];
    for _ in 0..draws {
        let x = Strategy::BetaN { n: 1 }.draw(&mut rng, 12).unwrap();
        counts[x.leading_digit() as usize - 1] += 1;
    }
    for d in 1..=9u8 {
        let p = beta_n_mass(1, &Mantissa::of_integer(d as u128).unwrap()).unwrap();
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        let got = counts[d as usize - 1] as f64;
        assert!((got - draws as f64 * p).abs() <= 3.0 * sd, "digit {d}: {got}");
    }
}

#[test]
fn benford_draws_follow_the_cdf() {
    let mut rng = RngStream::new(8, 0);
    let mut xs: Vec<f64> = (0..1_000_000).map(|_| Strategy::BenfordContinuous.draw(&mut rng, 12).unwrap().to_f64()).collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let ks = xs
        .iter()
        .enumerate()
        .map(|(k, x)| {
            let f = x.log10();
            (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    assert!(ks < 0.002, "KS distance {ks}");
}

#[test]
fn abelian_pairings_are_symmetric() {
    let w = IntervalUnion::from_digits(&[2, 3, 5, 7]).unwrap();
    let pure = |s: &str| Strategy::PurePoint(s.parse().unwrap());
    let strategies = [
        pure("2.5"),
        pure("7.77"),
        Strategy::UniformDigits { n: 2 },
        Strategy::BetaN { n: 2 },
        Strategy::UniformMantissa,
        Strategy::BenfordContinuous,
    ];
    for a in &strategies {
        for b in &strategies {
            let ab = win_probability(a, b, &w).unwrap();
            let ba = win_probability(b, a, &w).unwrap();
            assert!((ab - ba).abs() < 1e-9, "{} vs {}: {ab} {ba}", a.name(), b.name());
        }
    }
    let haar = w.benford_measure().unwrap();
    assert!((win_probability(&pure("4.2"), &Strategy::BenfordContinuous, &w).unwrap() - haar).abs() < 1e-12);
}
