//! Fixed-order Gauss rules: 1-D Gauss–Legendre, collapsed (Duffy) product
//! rules on triangles and tetrahedra, and a slice integrator for convex
//! regions cut out of the unit disc by half-planes.

use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p1 = z;
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    if n == 1 {
        x[0] = 0.0;
        w[0] = 2.0;
    }
    (x, w)
}

/// Gauss–Legendre rule mapped to `[0, 1]`.
pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    x.into_iter().zip(w).map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w)).collect()
}

/// Integrate `f` over `[a, b]` with `n` Gauss–Legendre points.
pub fn integrate_1d(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (h, m) = (0.5 * (b - a), 0.5 * (b + a));
    let (x, w) = gauss_legendre(n);
    x.iter().zip(&w).map(|(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

/// Barycentric nodes with weights summing to one (multiply by the simplex measure).
pub struct SimplexRule {
    pub bary: Vec<[f64; 4]>,
    pub weights: Vec<f64>,
}

fn triangle_rule(per_axis: usize) -> SimplexRule {
    let g = gauss_legendre_unit(per_axis);
    let mut bary = Vec::with_capacity(per_axis * per_axis);
    let mut weights = Vec::with_capacity(per_axis * per_axis);
    for &(u, wu) in &g {
        for &(v, wv) in &g {
            bary.push([1.0 - u, u * (1.0 - v), u * v, 0.0]);
            weights.push(2.0 * wu * wv * u);
        }
    }
    SimplexRule { bary, weights }
}

fn tetrahedron_rule(per_axis: usize) -> SimplexRule {
    let g = gauss_legendre_unit(per_axis);
    let mut bary = Vec::new();
    let mut weights = Vec::new();
    for &(u, wu) in &g {
        for &(v, wv) in &g {
            for &(s, ws) in &g {
                bary.push([1.0 - u, u * (1.0 - v), u * v * (1.0 - s), u * v * s]);
                weights.push(6.0 * wu * wv * ws * u * u * v);
            }
        }
    }
    SimplexRule { bary, weights }
}

/// 11 x 11 collapsed Gauss product rule, exact for total degree 20 on triangles.
pub fn triangle_rule_deg20() -> &'static SimplexRule {
    static RULE: OnceLock<SimplexRule> = OnceLock::new();
    RULE.get_or_init(|| triangle_rule(11))
}

/// 7 x 7 x 7 collapsed Gauss product rule, exact for total degree 11 on tetrahedra.
pub fn tetrahedron_rule_deg11() -> &'static SimplexRule {
    static RULE: OnceLock<SimplexRule> = OnceLock::new();
    RULE.get_or_init(|| tetrahedron_rule(7))
}

pub fn triangle_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs()
}

pub fn tetrahedron_volume(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> f64 {
    let u = sub3(b, a);
    let v = sub3(c, a);
    let w = sub3(d, a);
    (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0]))
        .abs()
        / 6.0
}

#[inline]
fn sub3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn mid2(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

#[inline]
fn mid3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])]
}

pub fn integrate_triangle(f: &impl Fn([f64; 2]) -> f64, a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    let area = triangle_area(a, b, c);
    if area == 0.0 {
        return 0.0;
    }
    let rule = triangle_rule_deg20();
    let mut acc = 0.0;
    for (l, w) in rule.bary.iter().zip(&rule.weights) {
        let p = [
            l[0] * a[0] + l[1] * b[0] + l[2] * c[0],
            l[0] * a[1] + l[1] * b[1] + l[2] * c[1],
        ];
        acc += w * f(p);
    }
    acc * area
}

/// Coarse and once-refined (midpoint split into four) integrals over a triangle.
pub fn integrate_triangle_refined(
    f: &impl Fn([f64; 2]) -> f64,
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
) -> (f64, f64) {
    let coarse = integrate_triangle(f, a, b, c);
    let (ab, bc, ca) = (mid2(a, b), mid2(b, c), mid2(c, a));
    let fine = integrate_triangle(f, a, ab, ca)
        + integrate_triangle(f, ab, b, bc)
        + integrate_triangle(f, ca, bc, c)
        + integrate_triangle(f, ab, bc, ca);
    (coarse, fine)
}

pub fn integrate_tetrahedron(
    f: &impl Fn([f64; 3]) -> f64,
    a: [f64; 3],
    b: [f64; 3],
    c: [f64; 3],
    d: [f64; 3],
) -> f64 {
    let vol = tetrahedron_volume(a, b, c, d);
    if vol == 0.0 {
        return 0.0;
    }
    let rule = tetrahedron_rule_deg11();
    let mut acc = 0.0;
    for (l, w) in rule.bary.iter().zip(&rule.weights) {
        let mut p = [0.0; 3];
        for (k, pk) in p.iter_mut().enumerate() {
            *pk = l[0] * a[k] + l[1] * b[k] + l[2] * c[k] + l[3] * d[k];
        }
        acc += w * f(p);
    }
    acc * vol
}

/// Coarse and refined (split into eight: four corners plus the octahedron cut
/// along one diagonal) integrals over a tetrahedron.
pub fn integrate_tetrahedron_refined(
    f: &impl Fn([f64; 3]) -> f64,
    a: [f64; 3],
    b: [f64; 3],
    c: [f64; 3],
    d: [f64; 3],
) -> (f64, f64) {
    let coarse = integrate_tetrahedron(f, a, b, c, d);
    let (ab, ac, ad) = (mid3(a, b), mid3(a, c), mid3(a, d));
    let (bc, bd, cd) = (mid3(b, c), mid3(b, d), mid3(c, d));
    let pieces = [
        [a, ab, ac, ad],
        [ab, b, bc, bd],
        [ac, bc, c, cd],
        [ad, bd, cd, d],
        [ab, ac, ad, bd],
        [ab, ac, bc, bd],
        [ac, ad, bd, cd],
        [ac, bc, bd, cd],
    ];
    let fine = pieces
        .iter()
        .map(|t| integrate_tetrahedron(f, t[0], t[1], t[2], t[3]))
        .sum();
    (coarse, fine)
}

/// A closed half-plane `<a, q> <= b`.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlane {
    pub a: [f64; 2],
    pub b: f64,
}

/// Integrates `f` over `{|q| <= 1} ∩ halfplanes`, slicing perpendicular to the
/// unit vector `axis`.
///
/// With `x = -cos(theta)` along the axis the disc boundary `sqrt(1 - x^2) = sin(theta)`
/// is smooth, so a Gauss rule per smooth piece (split at every kink of the slice
/// bounds) converges spectrally even for very thin caps.
pub fn integrate_disc_region(
    f: &impl Fn([f64; 2]) -> f64,
    halfplanes: &[HalfPlane],
    axis: [f64; 2],
    n_outer: usize,
    n_inner: usize,
) -> f64 {
    let perp = [-axis[1], axis[0]];
    let mut xlo: f64 = -1.0;
    let mut xhi: f64 = 1.0;
    // slice bounds y <= m x + k (upper) or y >= m x + k (lower)
    let mut upper: Vec<(f64, f64)> = Vec::new();
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for hp in halfplanes {
        let alpha = hp.a[0] * axis[0] + hp.a[1] * axis[1];
        let gamma = hp.a[0] * perp[0] + hp.a[1] * perp[1];
        let scale = alpha.abs().max(gamma.abs());
        if scale == 0.0 {
            if hp.b < 0.0 {
                return 0.0;
            }
            continue;
        }
        if gamma.abs() <= 1e-12 * scale {
            if alpha > 0.0 {
                xhi = xhi.min(hp.b / alpha);
            } else {
                xlo = xlo.max(hp.b / alpha);
            }
        } else if gamma > 0.0 {
            upper.push((-alpha / gamma, hp.b / gamma));
        } else {
            lower.push((-alpha / gamma, hp.b / gamma));
        }
    }
    if xhi <= xlo {
        return 0.0;
    }
    let mut breaks = vec![xlo, xhi];
    let lines: Vec<(f64, f64)> = upper.iter().chain(lower.iter()).copied().collect();
    for (i, &(m, k)) in lines.iter().enumerate() {
        let qa = 1.0 + m * m;
        let qb = 2.0 * m * k;
        let qc = k * k - 1.0;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let s = disc.sqrt();
            breaks.push((-qb - s) / (2.0 * qa));
            breaks.push((-qb + s) / (2.0 * qa));
        }
        for &(m2, k2) in &lines[i + 1..] {
            if m != m2 {
                breaks.push((k2 - k) / (m - m2));
            }
        }
    }
    breaks.retain(|x| x.is_finite() && *x >= xlo && *x <= xhi);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let (gx, gw) = gauss_legendre(n_outer);
    let (ix, iw) = gauss_legendre(n_inner);
    let mut total = 0.0;
    for win in breaks.windows(2) {
        let ta = (-win[0]).clamp(-1.0, 1.0).acos();
        let tb = (-win[1]).clamp(-1.0, 1.0).acos();
        if tb <= ta {
            continue;
        }
        let (h, c) = (0.5 * (tb - ta), 0.5 * (tb + ta));
        for (z, w) in gx.iter().zip(&gw) {
            let theta = c + h * z;
            let (st, ct) = theta.sin_cos();
            let x = -ct;
            let mut hi = st;
            let mut lo = -st;
            for &(m, k) in &upper {
                hi = hi.min(m * x + k);
            }
            for &(m, k) in &lower {
                lo = lo.max(m * x + k);
            }
            if hi <= lo {
                continue;
            }
            let (hy, cy) = (0.5 * (hi - lo), 0.5 * (hi + lo));
            let mut inner = 0.0;
            for (zy, wy) in ix.iter().zip(&iw) {
                let y = cy + hy * zy;
                inner += wy * f([x * axis[0] + y * perp[0], x * axis[1] + y * perp[1]]);
            }
            total += h * w * st * inner * hy;
        }
    }
    total
}
