//! Bessel functions, the logarithmic radial kernel, and the smooth cutoff.

use crate::error::CoreError;

/// Euler–Mascheroni constant.
pub const GAMMA_E: f64 = 0.577_215_664_901_532_9;

const SERIES_CUTOFF: f64 = 18.0;

/// J0 by power series (|x| <= 18) or Hankel asymptotics.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= SERIES_CUTOFF {
        // sum (-1)^k (x^2/4)^k / (k!)^2
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=60 {
            term *= -q / ((k * k) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sum
    } else {
        let (p, q) = hankel_pq(0, x);
        let chi = x - std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// J1 by power series or Hankel asymptotics.
pub fn bessel_j1(x: f64) -> f64 {
    let ax = x.abs();
    let sign = if x < 0.0 { -1.0 } else { 1.0 };
    if ax <= SERIES_CUTOFF {
        let q = 0.25 * ax * ax;
        let mut term = 0.5 * ax;
        let mut sum = term;
        for k in 1..=60 {
            term *= -q / ((k * (k + 1)) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        sign * sum
    } else {
        let (p, q) = hankel_pq(1, ax);
        let chi = ax - 3.0 * std::f64::consts::FRAC_PI_4;
        sign * (2.0 / (std::f64::consts::PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
    }
}

/// Y0; series form for small arguments keeps full precision where the
/// logarithmic kernel is evaluated.
pub fn bessel_y0(x: f64) -> f64 {
    assert!(x > 0.0, "Y0 requires x > 0");
    if x <= SERIES_CUTOFF {
        let q = 0.25 * x * x;
        // sum (-1)^{k+1} H_k q^k / (k!)^2
        let mut term = 1.0;
        let mut h = 0.0;
        let mut sum = 0.0;
        for k in 1..=60 {
            term *= q / ((k * k) as f64);
            h += 1.0 / k as f64;
            let contrib = if k % 2 == 1 { term * h } else { -term * h };
            sum += contrib;
            if term.abs() * h < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        let two_over_pi = std::f64::consts::FRAC_2_PI;
        two_over_pi * (((0.5 * x).ln() + GAMMA_E) * bessel_j0(x) + sum)
    } else {
        let (p, q) = hankel_pq(0, x);
        let chi = x - std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.sin() + q * chi.cos())
    }
}

/// Y1 by series or asymptotics.
pub fn bessel_y1(x: f64) -> f64 {
    assert!(x > 0.0, "Y1 requires x > 0");
    if x <= SERIES_CUTOFF {
        let q = 0.25 * x * x;
        // sum_{k>=0} (-1)^k (H_k + H_{k+1}) q^k / (k! (k+1)!)
        let mut term = 1.0; // q^k / (k!(k+1)!)
        let mut hk = 0.0;
        let mut hk1 = 1.0;
        let mut sum = hk + hk1;
        let mut sign = 1.0;
        for k in 1..=60 {
            term *= q / ((k * (k + 1)) as f64);
            hk += 1.0 / k as f64;
            hk1 += 1.0 / (k + 1) as f64;
            sign = -sign;
            let contrib = sign * term * (hk + hk1);
            sum += contrib;
            if term * (hk + hk1) < 1e-17 * sum.abs().max(1.0) {
                break;
            }
        }
        let two_over_pi = std::f64::consts::FRAC_2_PI;
        two_over_pi * (((0.5 * x).ln() + GAMMA_E) * bessel_j1(x) - 1.0 / x - 0.25 * x * sum)
    } else {
        let (p, q) = hankel_pq(1, x);
        let chi = x - 3.0 * std::f64::consts::FRAC_PI_4;
        (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * chi.sin() + q * chi.cos())
    }
}

/// Jn for n >= 0: recurrence upward when stable, Miller's algorithm otherwise.
pub fn bessel_jn(n: u32, x: f64) -> f64 {
    match n {
        0 => return bessel_j0(x),
        1 => return bessel_j1(x),
        _ => {}
    }
    let ax = x.abs();
    if ax == 0.0 {
        return 0.0;
    }
    let val = if ax > 1.5 * n as f64 {
        let mut jm = bessel_j0(ax);
        let mut j = bessel_j1(ax);
        for k in 1..n {
            let jn = (2.0 * k as f64 / ax) * j - jm;
            jm = j;
            j = jn;
        }
        j
    } else {
        // downward recurrence with normalization J0 + 2 sum J_{2k} = 1
        let start = n + 20 + ax as u32;
        let start = if start % 2 == 0 { start } else { start + 1 };
        let mut jp = 0.0_f64;
        let mut j = 1e-30_f64;
        let mut norm = 0.0;
        let mut target = 0.0;
        for k in (1..=start).rev() {
            let jm = (2.0 * k as f64 / ax) * j - jp;
            jp = j;
            j = jm;
            if k - 1 == n {
                target = j;
            }
            if (k - 1) % 2 == 0 && k - 1 > 0 {
                norm += 2.0 * j;
            }
            // rescale to avoid overflow
            if j.abs() > 1e250 {
                jp /= 1e250;
                j /= 1e250;
                norm /= 1e250;
                target /= 1e250;
            }
        }
        norm += j;
        target / norm
    };
    if x < 0.0 && n % 2 == 1 {
        -val
    } else {
        val
    }
}

/// Asymptotic amplitude/phase coefficients P_n, Q_n (n = 0 or 1).
fn hankel_pq(n: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (n * n) as f64;
    let w = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut num = 1.0;
    let mut denom = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..=12 {
        let f = (2 * k - 1) as f64;
        num *= mu - f * f;
        denom *= k as f64 * w;
        let term = num / denom;
        if term.abs() > prev {
            break; // divergent tail
        }
        prev = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
    }
    (p, q)
}

/// Radial kernel of u'' + u'/r + 4u = 0 normalized so that u - log r -> 0:
/// (pi/2) Y0(2r) - gamma_E J0(2r).
pub fn singular_kernel_gp(r: f64) -> Result<f64, CoreError> {
    if r <= 0.0 || !r.is_finite() {
        return Err(CoreError::DomainError(format!(
            "singular kernel needs r > 0, got {r}"
        )));
    }
    Ok(std::f64::consts::FRAC_PI_2 * bessel_y0(2.0 * r) - GAMMA_E * bessel_j0(2.0 * r))
}

/// d/dr of the radial kernel.
pub fn singular_kernel_gp_prime(r: f64) -> Result<f64, CoreError> {
    if r <= 0.0 || !r.is_finite() {
        return Err(CoreError::DomainError(format!(
            "singular kernel needs r > 0, got {r}"
        )));
    }
    Ok(-std::f64::consts::PI * bessel_y1(2.0 * r) + 2.0 * GAMMA_E * bessel_j1(2.0 * r))
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn bump_d1(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() / (t * t)
    }
}

fn bump_d2(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp() * (1.0 - 2.0 * t) / (t * t * t * t)
    }
}

/// Smooth transition ratio chi(t) = B(t)/(B(t)+B(1-t)); 0 for t <= 0, 1 for t >= 1.
pub fn chi(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let b = bump(t);
        b / (b + bump(1.0 - t))
    }
}

/// chi'(t).
pub fn chi_d1(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let b = bump(t);
        let c = bump(1.0 - t);
        let d = b + c;
        (bump_d1(t) * c + b * bump_d1(1.0 - t)) / (d * d)
    }
}

/// chi''(t).
pub fn chi_d2(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        let b = bump(t);
        let c = bump(1.0 - t);
        let b1 = bump_d1(t);
        let c1 = bump_d1(1.0 - t);
        let d = b + c;
        let dd = b1 - c1;
        let n = b1 * c + b * c1;
        let n1 = bump_d2(t) * c - b * bump_d2(1.0 - t);
        n1 / (d * d) - 2.0 * n * dd / (d * d * d)
    }
}

/// Two-sided cutoff: f for d <= a, g for d >= b, smooth blend between.
pub fn cutoff(a: f64, b: f64, d: f64, f: f64, g: f64) -> Result<f64, CoreError> {
    if !(a > 0.0 && b > a) {
        return Err(CoreError::DomainError(format!(
            "cutoff needs 0 < a < b, got a={a}, b={b}"
        )));
    }
    let t = chi((d - a) / (b - a));
    Ok((1.0 - t) * f + t * g)
}

/// Weight of the `f` argument in `cutoff`, with two derivatives in d.
/// psi(d) = 1 - chi((d-a)/(b-a)).
pub fn cutoff_weight(a: f64, b: f64, d: f64) -> (f64, f64, f64) {
    let w = b - a;
    let t = (d - a) / w;
    (chi(t).mul_add(-1.0, 1.0), -chi_d1(t) / w, -chi_d2(t) / (w * w))
}

#[cfg(test)]
mod tests {
    use super::*;

    // reference values frozen from 30-digit evaluation
    const J0_REF: &[(f64, f64)] = &[
        (1.0, 0.765197686557966551449717526103),
        (2.0, 0.22389077914123566805182745465),
        (5.0, -0.177596771314338304347397013075),
        (10.0, -0.245935764451348335197760862485),
    ];
    const Y0_REF: &[(f64, f64)] = &[
        (0.5, -0.444518733506706557148398475068),
        (1.0, 0.0882569642156769579829267660235),
        (2.0, 0.510375672649745119596606592727),
        (8.0, 0.223521489387566220527323400499),
    ];

    #[test]
    fn j0_reference_values() {
        for &(x, v) in J0_REF {
            assert!((bessel_j0(x) - v).abs() < 1e-14, "J0({x})");
        }
    }

    #[test]
    fn y0_reference_values() {
        for &(x, v) in Y0_REF {
            assert!((bessel_y0(x) - v).abs() < 1e-13, "Y0({x})");
        }
    }

    #[test]
    fn j1_and_jn_reference_values() {
        assert!((bessel_j1(1.0) - 0.440050585744933515959682203719).abs() < 1e-14);
        assert!((bessel_j1(5.0) - -0.32757913759146522203773432191).abs() < 1e-14);
        assert!((bessel_jn(2, 0.3) - 0.0111658619490639640396457348574).abs() < 1e-14);
        assert!((bessel_jn(4, 1.7) - 0.0187902115814301648614407875354).abs() < 1e-14);
        assert!((bessel_jn(6, 11.0) - -0.201584000874043491441494468793).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_matches_series_at_crossover() {
        // continuity across the series/asymptotic switch
        for f in [bessel_j0 as fn(f64) -> f64, bessel_j1, bessel_y0, bessel_y1] {
            let lo = f(SERIES_CUTOFF - 1e-9);
            let hi = f(SERIES_CUTOFF + 1e-9);
            assert!((lo - hi).abs() < 1e-8, "jump at crossover: {lo} vs {hi}");
        }
    }

    #[test]
    fn gp_normalization_at_tiny_radius() {
        let r = 1e-6;
        let g = singular_kernel_gp(r).unwrap();
        assert!((g - r.ln()).abs() < 1e-6);
        // frozen: Gp(0.1)
        assert!(
            (singular_kernel_gp(0.1).unwrap() - -2.26965419188091970441547519585).abs() < 1e-13
        );
    }

    #[test]
    fn gp_solves_radial_ode() {
        // u'' + u'/r + 4u = 0, finite differences at r = 0.1, step 1e-4
        let r = 0.1;
        let h = 1e-4;
        let u = |r: f64| singular_kernel_gp(r).unwrap();
        let d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
        let d1 = (u(r + h) - u(r - h)) / (2.0 * h);
        let res = d2 + d1 / r + 4.0 * u(r);
        assert!(res.abs() < 1e-6, "radial ODE residual {res}");
    }

    #[test]
    fn gp_prime_matches_finite_difference() {
        for r in [0.01, 0.05, 0.3, 1.0] {
            let h = 1e-6;
            let fd = (singular_kernel_gp(r + h).unwrap() - singular_kernel_gp(r - h).unwrap())
                / (2.0 * h);
            let an = singular_kernel_gp_prime(r).unwrap();
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "r={r}");
        }
    }

    #[test]
    fn gp_rejects_nonpositive_radius() {
        assert!(singular_kernel_gp(0.0).is_err());
        assert!(singular_kernel_gp(-1.0).is_err());
    }

    #[test]
    fn cutoff_endpoints_and_midpoint() {
        let a = 0.2;
        let b = 0.6;
        assert_eq!(cutoff(a, b, 0.1, 3.0, 7.0).unwrap(), 3.0);
        assert_eq!(cutoff(a, b, 1.2, 3.0, 7.0).unwrap(), 7.0);
        let mid = cutoff(a, b, 0.5 * (a + b), 0.0, 1.0).unwrap();
        assert!((mid - 0.5).abs() < 1e-15);
        assert!(cutoff(b, a, 0.3, 0.0, 1.0).is_err());
    }

    #[test]
    fn cutoff_weight_derivatives_match_fd() {
        let (a, b) = (0.02, 0.03);
        for d in [0.021, 0.024, 0.0275, 0.029] {
            let h = 1e-7;
            let (w, w1, w2) = cutoff_weight(a, b, d);
            let (wp, _, _) = cutoff_weight(a, b, d + h);
            let (wm, _, _) = cutoff_weight(a, b, d - h);
            assert!(((wp - wm) / (2.0 * h) - w1).abs() < 1e-4 * (w1.abs() + 1.0));
            assert!(((wp - 2.0 * w + wm) / (h * h) - w2).abs() < 2e-2 * (w2.abs() + 1.0));
        }
    }

    #[test]
    fn chi_is_monotone_partition() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let c = chi(t);
            assert!(c >= prev - 1e-15);
            assert!((chi(t) + chi(1.0 - t) - 1.0).abs() < 1e-15);
            prev = c;
        }
    }
}
