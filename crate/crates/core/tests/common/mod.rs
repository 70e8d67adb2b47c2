#![allow(dead_code)]

/// Two-sided Student-t tail probability by direct quadrature.
///
/// With x = sqrt(df) tan(theta) the density becomes proportional to
/// cos(theta)^(df - 1) on [0, pi/2), so the tail mass is a ratio of two
/// bounded integrals and no gamma function is needed.
pub fn t_two_sided_p(t: f64, df: f64) -> f64 {
    assert!(df >= 1.0, "quadrature oracle needs df >= 1");
    let f = |theta: f64| theta.cos().powf(df - 1.0);
    let theta0 = (t.abs() / df.sqrt()).atan();
    let half_pi = std::f64::consts::FRAC_PI_2;
    simpson(f, theta0, half_pi, 20_000) / simpson(f, 0.0, half_pi, 20_000)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

/// Welch statistic and Welch-Satterthwaite degrees of freedom, by hand.
pub fn welch_by_hand(a: &[f64], b: &[f64]) -> (f64, f64) {
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (qa, qb) = (va / na, vb / nb);
    let t = (ma - mb) / (qa + qb).sqrt();
    let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    (t, df)
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v)
}
