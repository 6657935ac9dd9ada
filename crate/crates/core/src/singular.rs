//! Singular configurations L[k, m, v] on the torus and their symmetry group.
//!
//! All singular points lie on the translation lattice T generated by the
//! deck lattice, the knot step (pi sqrt2 / m) v, and w/k. Working in units
//! of s0 = pi sqrt2 / (m k) makes T an integer lattice, so membership and
//! nearest-point queries are exact.

use crate::chart::{ChartPoint, KnotVector, TorusIsometry, Vec2, CHART_PERIOD};
use crate::config::{DoublingConfig, Variant};
use crate::error::{CoreError, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SingularPoint {
    pub pt: ChartPoint,
    /// Index of the parallel knot copy the point sits on.
    pub parallel_idx: u32,
    /// Symmetry class: 0 in the one-point variant, 0..3 in the three-point one.
    pub class_idx: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularSet {
    pub v: KnotVector,
    pub k: u32,
    pub m: u32,
    pub variant: Variant,
    pub points: Vec<SingularPoint>,
    /// Shortest off-span vector of the knot-point lattice, chart units.
    pub w_chart: Vec2,
    pub p0: ChartPoint,
    pub p1: ChartPoint,
    pub p2: ChartPoint,
    /// Reduced basis of T in units of s0 (integer entries).
    ibasis: [[i64; 2]; 2],
    /// s0 = pi sqrt2 / (m k).
    s0: f64,
    /// Transverse spacing of the parallel-line set.
    pub line_spacing: f64,
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        let s = if a < 0 { -1 } else { 1 };
        (a.abs(), s, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a.rem_euclid(b));
        (g, t, s - (a.div_euclid(b)) * t)
    }
}

/// Basis of the integer lattice spanned by `gens` (must have rank 2).
fn integer_lattice_basis(gens: &[(i64, i64)]) -> Result<[(i64, i64); 2]> {
    // Sweep to e1 with minimal-gcd x component, collecting x = 0 leftovers.
    let mut e1: Option<(i64, i64)> = None;
    let mut ys: Vec<i64> = Vec::new();
    for &g in gens {
        if g == (0, 0) {
            continue;
        }
        match e1 {
            None => {
                if g.0 == 0 {
                    ys.push(g.1);
                } else {
                    e1 = Some(g);
                }
            }
            Some(e) => {
                if g.0 == 0 {
                    ys.push(g.1);
                } else {
                    let (d, s, t) = ext_gcd(e.0, g.0);
                    let enew = (d, s * e.1 + t * g.1);
                    let r1 = (0, e.1 - (e.0 / d) * enew.1);
                    let r2 = (0, g.1 - (g.0 / d) * enew.1);
                    ys.push(r1.1);
                    ys.push(r2.1);
                    e1 = Some(enew);
                }
            }
        }
    }
    let e1 = e1.ok_or(CoreError::DegenerateW)?;
    let gy = ys.iter().fold(0i64, |acc, &y| ext_gcd(acc, y).0);
    if gy == 0 {
        return Err(CoreError::DegenerateW);
    }
    Ok([e1, (0, gy)])
}

/// Lagrange (Gauss) reduction of a 2D integer basis.
fn gauss_reduce(mut u: (i64, i64), mut v: (i64, i64)) -> [(i64, i64); 2] {
    let norm2 = |w: (i64, i64)| w.0 * w.0 + w.1 * w.1;
    loop {
        if norm2(u) > norm2(v) {
            std::mem::swap(&mut u, &mut v);
        }
        let mu = ((v.0 * u.0 + v.1 * u.1) as f64 / norm2(u) as f64).round() as i64;
        if mu == 0 {
            break;
        }
        let vn = (v.0 - mu * u.0, v.1 - mu * u.1);
        if norm2(vn) >= norm2(v) {
            break;
        }
        v = vn;
    }
    [u, v]
}

/// Shortest off-span vector of lattice(gens) in integer units, with its
/// canonical sign, or None when everything is on the span.
fn shortest_off_span(gens: &[(i64, i64)], v: (i64, i64), radius: i64) -> Option<(i64, i64)> {
    let basis = integer_lattice_basis(gens).ok()?;
    let [u1, u2] = gauss_reduce(basis[0], basis[1]);
    let mut best: Option<(i64, (i64, i64))> = None;
    for i in -radius..=radius {
        for j in -radius..=radius {
            let w = (i * u1.0 + j * u2.0, i * u1.1 + j * u2.1);
            if w == (0, 0) || w.0 * v.1 - w.1 * v.0 == 0 {
                continue;
            }
            let n = w.0 * w.0 + w.1 * w.1;
            // canonical representative: x > 0, or x = 0 and y > 0
            let wc = if w.0 < 0 || (w.0 == 0 && w.1 < 0) {
                (-w.0, -w.1)
            } else {
                w
            };
            let better = match best {
                None => true,
                Some((bn, bw)) => n < bn || (n == bn && wc < bw),
            };
            if better {
                best = Some((n, wc));
            }
        }
    }
    best.map(|(_, w)| w)
}

impl SingularSet {
    /// Real-space reduced basis vectors of the translation lattice T.
    pub fn lattice_basis(&self) -> [Vec2; 2] {
        [
            Vec2::new(self.ibasis[0][0] as f64, self.ibasis[0][1] as f64).scale(self.s0),
            Vec2::new(self.ibasis[1][0] as f64, self.ibasis[1][1] as f64).scale(self.s0),
        ]
    }

    /// Integer reduced basis in units of s0 = pi sqrt2/(mk).
    pub fn lattice_ibasis(&self) -> ([[i64; 2]; 2], f64) {
        (self.ibasis, self.s0)
    }

    /// Unit direction along the knot.
    pub fn dir(&self) -> Vec2 {
        self.v.dir()
    }

    /// Unit transverse direction.
    pub fn normal(&self) -> Vec2 {
        self.v.normal()
    }

    /// Maximum distance to the parallel-line set (half the spacing).
    pub fn s_max(&self) -> f64 {
        0.5 * self.line_spacing
    }

    /// Base point of a symmetry class.
    pub fn class_base(&self, class_idx: u32) -> ChartPoint {
        match class_idx {
            0 => self.p0,
            1 => self.p1,
            2 => self.p2,
            _ => unreachable!("class index out of range"),
        }
    }

    /// Distance from q to the lattice translate class_base + T, together
    /// with the nearest point.
    pub fn dist_to_class(&self, q: ChartPoint, class_idx: u32) -> (f64, ChartPoint) {
        let base = self.class_base(class_idx);
        let b = self.lattice_basis();
        let d = Vec2::new(q.x - base.x, q.y - base.y);
        // coordinates in the reduced basis
        let det = b[0].cross(b[1]);
        let c1 = d.cross(b[1]) / det;
        let c2 = b[0].cross(d) / det;
        let mut best = f64::INFINITY;
        let mut best_pt = base;
        for i in -1..=1 {
            for j in -1..=1 {
                let n1 = c1.round() + i as f64;
                let n2 = c2.round() + j as f64;
                let lat = b[0].scale(n1) + b[1].scale(n2);
                let dist = (d - lat).norm();
                if dist < best {
                    best = dist;
                    best_pt = ChartPoint::new(base.x + lat.x, base.y + lat.y).canonical();
                }
            }
        }
        (best, best_pt)
    }

    /// Distance to the singular set (all classes present in the variant).
    pub fn dist_to_l(&self, q: ChartPoint) -> (f64, ChartPoint) {
        let classes: &[u32] = match self.variant {
            Variant::OnePoint => &[0],
            Variant::ThreePoint => &[0, 1, 2],
        };
        classes
            .iter()
            .map(|&c| self.dist_to_class(q, c))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap()
    }

    /// Signed transverse coordinate of q relative to the lines through `base`.
    pub fn transverse_coord(&self, q: ChartPoint, base: ChartPoint) -> f64 {
        Vec2::new(q.x - base.x, q.y - base.y).dot(self.normal())
    }

    /// Distance to the union of parallel knot lines through `class_base(c)`.
    pub fn dist_to_lines(&self, q: ChartPoint, class_idx: u32) -> f64 {
        let t = self.transverse_coord(q, self.class_base(class_idx));
        let g = self.line_spacing;
        let r = t.rem_euclid(g);
        r.min(g - r)
    }

    /// dist to L_par = lines through p0.
    pub fn dist_to_lpar(&self, q: ChartPoint) -> f64 {
        self.dist_to_lines(q, 0)
    }

    /// The three generating point reflections.
    pub fn group_generators(&self) -> Vec<TorusIsometry> {
        vec![
            TorusIsometry::point_reflection(self.p0),
            TorusIsometry::point_reflection(self.p1),
            TorusIsometry::point_reflection(self.p2),
        ]
    }

    /// Representatives of the translation subgroup T / deck lattice (km).
    pub fn translations(&self) -> Vec<Vec2> {
        let mut out = Vec::new();
        let step = self.knot_step();
        let wshift = self.w_chart.scale(1.0 / self.k as f64);
        let mut seen: Vec<ChartPoint> = Vec::new();
        for j in 0..self.k {
            for i in 0..self.m {
                let v = step.scale(i as f64) + wshift.scale(j as f64);
                let c = ChartPoint::from_vec(v).canonical();
                if seen.iter().all(|s| s.dist(c) > 1e-9) {
                    seen.push(c);
                    out.push(c.as_vec());
                }
            }
        }
        out
    }

    /// Chart step between consecutive singular points along the knot.
    pub fn knot_step(&self) -> Vec2 {
        Vec2::new(self.v.a as f64, self.v.b as f64).scale(CHART_PERIOD / self.m as f64)
    }
}

/// Builds the singular set for a validated configuration.
pub fn build_singular_set(config: &DoublingConfig) -> Result<SingularSet> {
    let v = config.v;
    let (a, b) = (v.a as i64, v.b as i64);
    let (k, m) = (config.k as i64, config.m as i64);

    // knot-point lattice in units of pi sqrt2 / m: {(m,0),(0,m),(a,b)}
    let w_int = shortest_off_span(
        &[(m, 0), (0, m), (a, b)],
        (a, b),
        (2 * m + 4) as i64,
    )
    .ok_or(CoreError::DegenerateW)?;
    let s1 = CHART_PERIOD / m as f64;
    let w_chart = Vec2::new(w_int.0 as f64, w_int.1 as f64).scale(s1);

    // full translation lattice T in units of s0 = pi sqrt2/(mk):
    // deck (mk, 0), (0, mk); knot step k(a, b); w/k = (W1, W2)
    let gens = [
        (m * k, 0),
        (0, m * k),
        (k * a, k * b),
        (w_int.0, w_int.1),
    ];
    let basis = integer_lattice_basis(&gens)?;
    let ibasis = gauss_reduce(basis[0], basis[1]);
    let s0 = CHART_PERIOD / (m as f64 * k as f64);

    // transverse spacing: cross products with v are integers in s0/|v| units
    let cross1 = a * ibasis[0].1 - b * ibasis[0].0;
    let cross2 = a * ibasis[1].1 - b * ibasis[1].0;
    let g = {
        let (g, _, _) = ext_gcd(cross1.abs(), cross2.abs());
        g
    };
    if g == 0 {
        return Err(CoreError::DegenerateW);
    }
    let line_spacing = s0 * g as f64 / v.norm();

    let p0 = ChartPoint::ORIGIN;
    let knot_step = Vec2::new(a as f64, b as f64).scale(CHART_PERIOD / m as f64);
    let p1 = ChartPoint::from_vec(knot_step.scale(0.5)).canonical();
    let p2 = ChartPoint::from_vec(w_chart.scale(1.0 / (2.0 * k as f64))).canonical();

    let classes: &[(u32, Vec2)] = match config.variant {
        Variant::OnePoint => &[(0, Vec2::ZERO)],
        Variant::ThreePoint => &[
            (0, Vec2::ZERO),
            (1, Vec2 {
                x: knot_step.x * 0.5,
                y: knot_step.y * 0.5,
            }),
            (2, Vec2 {
                x: w_chart.x / (2.0 * k as f64),
                y: w_chart.y / (2.0 * k as f64),
            }),
        ],
    };

    let mut points = Vec::new();
    for &(class_idx, offset) in classes {
        let mut seen: Vec<ChartPoint> = Vec::new();
        for j in 0..config.k {
            for i in 0..config.m {
                let pos = knot_step.scale(i as f64)
                    + w_chart.scale(j as f64 / k as f64)
                    + offset;
                let c = ChartPoint::from_vec(pos).canonical();
                if seen.iter().all(|s| s.dist(c) > 1e-9) {
                    seen.push(c);
                    points.push(SingularPoint {
                        pt: c,
                        parallel_idx: j,
                        class_idx,
                    });
                }
            }
        }
        if seen.len() != (config.k * config.m) as usize {
            return Err(CoreError::DegenerateW);
        }
    }

    let set = SingularSet {
        v,
        k: config.k,
        m: config.m,
        variant: config.variant,
        points,
        w_chart,
        p0,
        p1,
        p2,
        ibasis: [
            [ibasis[0].0, ibasis[0].1],
            [ibasis[1].0, ibasis[1].1],
        ],
        s0,
        line_spacing,
    };

    // the theory fixes the spacing at pi sqrt2/(k |v|); treat disagreement
    // as an internal lattice bug
    let expect = CHART_PERIOD / (config.k as f64 * v.norm());
    if (set.line_spacing - expect).abs() > 1e-9 * expect {
        return Err(CoreError::DegenerateW);
    }
    Ok(set)
}

/// Orbit of p under the group generated by `gens` (finite by construction).
pub fn orbit(p: ChartPoint, gens: &[TorusIsometry]) -> Vec<ChartPoint> {
    let tol = 1e-9;
    let mut out: Vec<ChartPoint> = vec![p.canonical()];
    let mut frontier = vec![p.canonical()];
    while let Some(q) = frontier.pop() {
        for g in gens {
            let r = g.apply(q);
            if out.iter().all(|s| s.dist(r) > tol) {
                out.push(r);
                frontier.push(r);
                if out.len() > 100_000 {
                    panic!("orbit did not close; generators are inconsistent");
                }
            }
        }
    }
    out.sort_by(|p, q| (p.x, p.y).partial_cmp(&(q.x, q.y)).unwrap());
    out
}

impl SingularSet {
    /// All 2 km group elements modulo the deck lattice:
    /// translations and translated point reflections.
    pub fn group_elements(&self) -> Vec<TorusIsometry> {
        let mut out = Vec::new();
        for t in self.translations() {
            out.push(TorusIsometry::translation(t));
            out.push(TorusIsometry {
                sign: -1,
                offset: t,
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::validate_config;

    fn reference_set() -> SingularSet {
        let cfg = validate_config(2, 3, 1, 6, Variant::OnePoint, true).unwrap();
        build_singular_set(&cfg).unwrap()
    }

    #[test]
    fn reference_point_count_and_w() {
        let set = reference_set();
        assert_eq!(set.points.len(), 6);
        // w corresponds to angle vector (2 pi / 3, 0)
        let angle = set.w_chart.scale(crate::chart::SQRT_2);
        assert!((angle.x - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        assert!(angle.y.abs() < 1e-12);
    }

    #[test]
    fn all_points_on_lpar() {
        let set = reference_set();
        for p in &set.points {
            assert!(set.dist_to_lpar(p.pt) < 1e-12);
        }
        let cfg = validate_config(2, 3, 2, 12, Variant::OnePoint, true).unwrap();
        let set2 = build_singular_set(&cfg).unwrap();
        assert_eq!(set2.points.len(), 24);
        for p in &set2.points {
            assert!(set2.dist_to_lines(p.pt, 0) < 1e-12);
        }
    }

    #[test]
    fn line_spacing_matches_formula() {
        for (a, b, k, m) in [(2, 3, 1, 6), (2, 3, 2, 12), (1, 3, 2, 12), (3, 4, 1, 8)] {
            let cfg = validate_config(a, b, k, m, Variant::OnePoint, true).unwrap();
            let set = build_singular_set(&cfg).unwrap();
            let expect = CHART_PERIOD / (k as f64 * cfg.v.norm());
            assert!((set.line_spacing - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn deepest_point_distance() {
        let set = reference_set();
        // max over the torus of the distance to L_par is r_v / k
        let r_v = set.v.injectivity_radius();
        let mut max_d: f64 = 0.0;
        let n = 301;
        for i in 0..n {
            for j in 0..n {
                let q = ChartPoint::new(
                    CHART_PERIOD * i as f64 / n as f64,
                    CHART_PERIOD * j as f64 / n as f64,
                );
                max_d = max_d.max(set.dist_to_lpar(q));
            }
        }
        assert!(max_d <= r_v + 1e-9);
        assert!(max_d > r_v * 0.999 - 2.0 * CHART_PERIOD / n as f64);
        // a deepest point sits at half-spacing along the normal
        let deep = ChartPoint::from_vec(set.normal().scale(set.s_max()));
        assert!((set.dist_to_lpar(deep) - r_v).abs() < 1e-9);
    }

    #[test]
    fn orbit_of_p0_is_l() {
        let set = reference_set();
        let gens = set.group_generators();
        let orb = orbit(set.p0, &gens);
        assert_eq!(orb.len(), 6);
        for q in &orb {
            assert!(
                set.points.iter().any(|p| p.pt.dist(*q) < 1e-9),
                "orbit point not in L"
            );
        }
    }

    #[test]
    fn generators_preserve_l() {
        let set = reference_set();
        for g in set.group_generators() {
            for p in &set.points {
                let img = g.apply(p.pt);
                assert!(
                    set.points.iter().any(|q| q.pt.dist(img) < 1e-9),
                    "generator does not preserve L"
                );
            }
        }
    }

    #[test]
    fn reflection_through_any_singular_point_preserves_l() {
        let set = reference_set();
        for p in &set.points {
            let r = TorusIsometry::point_reflection(p.pt);
            for q in &set.points {
                let img = r.apply(q.pt);
                assert!(set.points.iter().any(|s| s.pt.dist(img) < 1e-9));
            }
        }
    }

    #[test]
    fn three_point_classes_disjoint_with_3km_points() {
        let cfg = validate_config(2, 3, 1, 6, Variant::ThreePoint, true).unwrap();
        let set = build_singular_set(&cfg).unwrap();
        assert_eq!(set.points.len(), 18);
        for i in 0..set.points.len() {
            for j in 0..i {
                assert!(set.points[i].pt.dist(set.points[j].pt) > 1e-6);
            }
        }
        // each class is a group orbit of its base point
        let gens = set.group_generators();
        for c in 0..3 {
            let orb = orbit(set.class_base(c), &gens);
            assert_eq!(orb.len(), 6, "class {c}");
            for q in orb {
                assert!(set
                    .points
                    .iter()
                    .filter(|p| p.class_idx == c)
                    .any(|p| p.pt.dist(q) < 1e-9));
            }
        }
    }

    #[test]
    fn adjacent_parallel_copies_at_expected_distance() {
        let cfg = validate_config(2, 3, 2, 12, Variant::OnePoint, true).unwrap();
        let set = build_singular_set(&cfg).unwrap();
        // sample a point on the second line; its distance to line 0 pattern
        // has spacing pi sqrt2 / (k |v|)
        let expect = CHART_PERIOD / (2.0 * cfg.v.norm());
        let on_next = ChartPoint::from_vec(set.normal().scale(expect));
        assert!(set.dist_to_lines(on_next, 0) < 1e-9);
        let halfway = ChartPoint::from_vec(set.normal().scale(0.5 * expect));
        assert!((set.dist_to_lines(halfway, 0) - 0.5 * expect).abs() < 1e-9);
    }

    #[test]
    fn dist_to_class_finds_nearest_point() {
        let set = reference_set();
        for p in &set.points {
            let probe = ChartPoint::new(p.pt.x + 0.01, p.pt.y - 0.02);
            let (d, nearest) = set.dist_to_class(probe, 0);
            assert!((d - probe.dist(p.pt)).abs() < 1e-12 || d < probe.dist(p.pt) + 1e-12);
            assert!(nearest.dist(probe) <= probe.dist(p.pt) + 1e-12);
        }
    }

    #[test]
    fn translations_count_is_km() {
        for (a, b, k, m) in [(2, 3, 1, 6), (2, 3, 2, 8), (3, 4, 2, 6)] {
            let cfg = validate_config(a, b, k, m, Variant::OnePoint, true).unwrap();
            let set = build_singular_set(&cfg).unwrap();
            assert_eq!(set.translations().len(), (k * m) as usize);
        }
    }
}
