//! Special functions not covered by `statrs`.

/// Gamma function, including negative non-integer arguments.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

// B_{2j} / (2j)!, j = 1..
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// Hurwitz zeta `sum_{n>=0} (q + n)^{-s}` for `s > 1`, `q > 0`, by
/// Euler-Maclaurin summation after ten explicit terms.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    assert!(s > 1.0 && q > 0.0, "hurwitz_zeta needs s > 1 and q > 0");
    const N: usize = 10;
    let mut sum = 0.0;
    for n in 0..N {
        sum += (q + n as f64).powf(-s);
    }
    let a = q + N as f64;
    sum += a.powf(1.0 - s) / (s - 1.0) + 0.5 * a.powf(-s);
    // rising product s (s+1) ... (s+2j-2)
    let mut rising = s;
    let mut apow = a.powf(-s - 1.0);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += c * rising * apow;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        apow /= a * a;
    }
    sum
}
