use forge_core::arithmetic::{
    dirichlet_convolve, euler_factor, g_omega_membership, invert_multiplicative, MultiplicativeFunction, PrimeSystem,
};
use forge_core::scalar::{q, q_to_f64, Q};
use forge_core::WeightFn;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn random_function(sys: &Arc<PrimeSystem>, rng: &mut ChaCha8Rng) -> MultiplicativeFunction<Q> {
    MultiplicativeFunction::from_fn(sys.clone(), |_, _| q(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
}

fn divisor_sum(f: &[Q], g: &[Q]) -> Vec<Q> {
    let x = f.len() - 1;
    let mut out = vec![Q::zero(); x + 1];
    for d in 1..=x {
        for m in 1..=x / d {
            out[d * m] += &f[d] * &g[m];
        }
    }
    out
}

#[test]
fn convolution_matches_divisor_sums() {
    let sys = PrimeSystem::rational(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let eps = MultiplicativeFunction::<Q>::epsilon(sys.clone());
    for _ in 0..5 {
        let (f, g, h) = (random_function(&sys, &mut rng), random_function(&sys, &mut rng), random_function(&sys, &mut rng));
        let fg = dirichlet_convolve(&f, &g).unwrap();
        assert_eq!(fg.table().unwrap(), divisor_sum(&f.table().unwrap(), &g.table().unwrap()));
        assert_eq!(fg, dirichlet_convolve(&g, &f).unwrap());
        assert_eq!(dirichlet_convolve(&fg, &h).unwrap(), dirichlet_convolve(&f, &dirichlet_convolve(&g, &h).unwrap()).unwrap());
        assert_eq!(dirichlet_convolve(&eps, &f).unwrap(), f);
    }
}

#[test]
fn inverse_round_trip_to_ten_thousand() {
    let sys = PrimeSystem::rational(10_000);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let f = random_function(&sys, &mut rng);
    let g = invert_multiplicative(&f);
    let prod = divisor_sum(&f.table().unwrap(), &g.table().unwrap());
    assert!(prod[1].is_one());
    assert!(prod[2..].iter().all(Zero::is_zero));
}

#[test]
fn results_are_multiplicative_on_coprime_pairs() {
    let sys = PrimeSystem::rational(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let f = random_function(&sys, &mut rng);
    let g = random_function(&sys, &mut rng);
    let fg = divisor_sum(&f.table().unwrap(), &g.table().unwrap());
    let finv = invert_multiplicative(&f).table().unwrap();
    for (m, n) in [(4, 9), (8, 125), (7, 11), (12, 35), (27, 37), (16, 61)] {
        assert_eq!(fg[m * n], &fg[m] * &fg[n]);
        assert_eq!(finv[m * n], &finv[m] * &finv[n]);
    }
}

#[test]
fn euler_product_is_a_finite_identity() {
    // f(p^k) = 0 for k > 2, primes 2, 3, 5: the product equals the sum over 5-smooth n
    let sys = PrimeSystem::rational(1 << 12);
    let f = MultiplicativeFunction::from_fn(sys.clone(), |i, k| if k <= 2 { q(k as i64 + 1, i as i64 + 2) } else { Q::zero() });
    let s = Complex64::new(2.0, 0.0);
    let product: Complex64 = (0..3).map(|i| euler_factor(&f, i, s, 10)).product();
    let mut sum = Complex64::new(0.0, 0.0);
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            for c in 0..=2u32 {
                let n = 2u64.pow(a) * 3u64.pow(b) * 5u64.pow(c);
                let v = q_to_f64(&f.at(n).unwrap());
                sum += v * (n as f64).powi(-2);
            }
        }
    }
    assert!((product - sum).norm() < 1e-15);
}

#[test]
fn prime_zeta_at_two() {
    let sys = PrimeSystem::rational(1_000_000);
    let f = MultiplicativeFunction::from_fn(sys.clone(), |i, k| if k == 1 { 1.0 / sys.primes()[i] } else { 0.0 });
    let r = g_omega_membership(&f, &WeightFn::One);
    assert!(r.sum_sq <= 0.4523);
    assert!((r.sum_sq - 0.452_247_420_041_065_5).abs() < 1e-4);
}
