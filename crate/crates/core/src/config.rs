//! Construction parameters and their validation.

use crate::chart::{gcd, KnotVector};
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// km singular points, one per fundamental domain.
    OnePoint,
    /// 3km singular points in three symmetry classes.
    ThreePoint,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::OnePoint => write!(f, "one-point"),
            Variant::ThreePoint => write!(f, "three-point"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = CoreError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-point" | "one_point" | "one" => Ok(Variant::OnePoint),
            "three-point" | "three_point" | "three" => Ok(Variant::ThreePoint),
            other => Err(CoreError::DomainError(format!("unknown variant '{other}'"))),
        }
    }
}

/// Validated parameters of a doubling construction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DoublingConfig {
    pub v: KnotVector,
    pub k: u32,
    pub m: u32,
    pub variant: Variant,
    /// Gluing exponent; bridge radius is tau^alpha. 0 < alpha < 1/2.
    pub alpha: f64,
    /// Half-width of the balancing box.
    pub c_bar: f64,
    /// Spectral samples per side.
    pub grid_n: usize,
    /// m must exceed m_min_factor * k * |v| unless forced.
    pub m_min_factor: f64,
    /// Neck-size exponent constant F = sqrt2 |v| tan(sqrt2 pi / (k |v|)).
    pub f_const: f64,
}

pub const EXCLUDED_TRIPLES: [(u32, u32, u32); 3] = [(1, 1, 1), (1, 2, 1), (2, 1, 1)];

/// F = sqrt2 |v| tan(sqrt2 pi/(k|v|)); positive exactly when the
/// configuration admits balanced necks.
pub fn f_constant(v: KnotVector, k: u32) -> f64 {
    let nv = v.norm();
    let arg = crate::chart::SQRT_2 * std::f64::consts::PI / (k as f64 * nv);
    crate::chart::SQRT_2 * nv * arg.tan()
}

impl DoublingConfig {
    pub fn delta(&self) -> f64 {
        1.0 / (100.0 * self.m as f64)
    }

    /// Number of singular points.
    pub fn point_count(&self) -> usize {
        let base = (self.k * self.m) as usize;
        match self.variant {
            Variant::OnePoint => base,
            Variant::ThreePoint => 3 * base,
        }
    }

    pub fn genus(&self) -> u32 {
        match self.variant {
            Variant::OnePoint => self.k * self.m + 1,
            Variant::ThreePoint => 3 * self.k * self.m + 1,
        }
    }

    /// Neck scale tau(zeta); the exponent is m/(2F) for the one-point
    /// variant and 3km/(4 pi) for the three-point variant.
    pub fn tau(&self, zeta: f64) -> f64 {
        (zeta - self.tau_exponent()).exp() / self.m as f64
    }

    pub fn tau_exponent(&self) -> f64 {
        match self.variant {
            Variant::OnePoint => self.m as f64 / (2.0 * self.f_const),
            Variant::ThreePoint => {
                3.0 * (self.k * self.m) as f64 / (4.0 * std::f64::consts::PI)
            }
        }
    }

    pub fn with_grid_n(mut self, grid_n: usize) -> Self {
        self.grid_n = grid_n;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_c_bar(mut self, c_bar: f64) -> Self {
        self.c_bar = c_bar;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }
}

/// Validates (a, b, k, m) and returns a configuration with default knobs.
///
/// `force` downgrades the m-threshold error to a pass (the desk-scale
/// formulas stay evaluable below the asymptotic regime).
pub fn validate_config(
    a: u32,
    b: u32,
    k: u32,
    m: u32,
    variant: Variant,
    force: bool,
) -> Result<DoublingConfig> {
    if a == 0 || b == 0 || k == 0 || m == 0 {
        return Err(CoreError::DomainError(
            "a, b, k, m must be positive".into(),
        ));
    }
    let g = gcd(a, b);
    if g != 1 {
        return Err(CoreError::NonCoprime(a, b, g));
    }
    let v = KnotVector::new(a, b)?;
    let f = f_constant(v, k);
    // tan blows up when sqrt2 pi/(k|v|) hits pi/2, i.e. k|v| = 2 sqrt2;
    // treat non-finite or non-positive F alike: no balanced neck scale.
    if !f.is_finite() || f.abs() > 1e12 || f <= 0.0 {
        return Err(CoreError::NonPositiveF(f));
    }
    if EXCLUDED_TRIPLES.contains(&(a, b, k)) {
        // unreachable in practice: the excluded triples all have F <= 0
        return Err(CoreError::ExcludedTriple(a, b, k));
    }
    let m_min_factor = 10.0;
    let threshold = m_min_factor * k as f64 * v.norm();
    if (m as f64) < threshold && !force {
        return Err(CoreError::MTooSmall {
            m,
            threshold,
            factor: m_min_factor,
        });
    }
    Ok(DoublingConfig {
        v,
        k,
        m,
        variant,
        alpha: 0.35,
        c_bar: 10.0,
        grid_n: (16 * m as usize).next_power_of_two().max(256),
        m_min_factor,
        f_const: f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noncoprime_pair_rejected() {
        assert!(matches!(
            validate_config(2, 4, 1, 64, Variant::OnePoint, false),
            Err(CoreError::NonCoprime(2, 4, 2))
        ));
    }

    #[test]
    fn excluded_triples_fail_with_nonpositive_f() {
        // (1,1,1): tan(pi) = 0 exactly cancels
        match validate_config(1, 1, 1, 64, Variant::OnePoint, false) {
            Err(CoreError::NonPositiveF(f)) => assert!(f.abs() < 1e-9),
            other => panic!("expected NonPositiveF, got {other:?}"),
        }
        // (1,2,1): F ~ -7.156
        match validate_config(1, 2, 1, 64, Variant::OnePoint, false) {
            Err(CoreError::NonPositiveF(f)) => {
                assert!((f - -7.15563379716366522214421073241).abs() < 1e-10)
            }
            other => panic!("expected NonPositiveF, got {other:?}"),
        }
        assert!(validate_config(2, 1, 1, 64, Variant::OnePoint, false).is_err());
    }

    #[test]
    fn tan_pole_rejected() {
        // k|v| = 2 sqrt2 puts the tangent argument at pi/2
        assert!(matches!(
            validate_config(1, 1, 2, 64, Variant::OnePoint, false),
            Err(CoreError::NonPositiveF(_))
        ));
    }

    #[test]
    fn reference_config_valid() {
        let cfg = validate_config(2, 3, 1, 64, Variant::OnePoint, false).unwrap();
        assert!((cfg.f_const - 14.4809097301839266930550752673).abs() < 1e-11);
        assert_eq!(cfg.genus(), 65);
        assert_eq!(cfg.point_count(), 64);
    }

    #[test]
    fn m_threshold_and_force() {
        assert!(matches!(
            validate_config(2, 3, 1, 6, Variant::OnePoint, false),
            Err(CoreError::MTooSmall { .. })
        ));
        let cfg = validate_config(2, 3, 1, 6, Variant::OnePoint, true).unwrap();
        assert_eq!(cfg.m, 6);
        assert_eq!(cfg.genus(), 7);
    }

    #[test]
    fn f_constant_sweep() {
        let cases = [
            ((1u32, 3u32, 1u32), 26.7199820877226436083513454269),
            ((3, 4, 1), 8.70457449993046284720222619786),
            ((2, 3, 2), 3.61042788700744029669742943123),
            ((2, 3, 4), 1.6224474396699274609837702793),
        ];
        for ((a, b, k), expect) in cases {
            let v = KnotVector::new(a, b).unwrap();
            assert!((f_constant(v, k) - expect).abs() < 1e-10, "F({a},{b},{k})");
        }
    }

    #[test]
    fn tau_reference_value() {
        // pure exponential factor at zeta = 0, m = 100
        let cfg = validate_config(2, 3, 1, 100, Variant::OnePoint, false).unwrap();
        assert!((cfg.tau(0.0) - 3.16561845600432430016216120424e-4).abs() < 1e-13);
    }

    #[test]
    fn three_point_genus() {
        let cfg = validate_config(2, 3, 4, 8, Variant::ThreePoint, true).unwrap();
        assert_eq!(cfg.genus(), 97);
        assert_eq!(cfg.point_count(), 96);
    }
}
