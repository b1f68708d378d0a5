//! Flat vector helpers shared by the Euclidean model and by the planar
//! charts of the book and the tangent planes of the hyperbolic plane.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Point at parameter `s` on the segment from `a` to `b`; exact at both ends.
pub(crate) fn lerp(a: &[f64], b: &[f64], s: f64) -> Vec<f64> {
    if s == 0.0 {
        return a.to_vec();
    }
    if s == 1.0 {
        return b.to_vec();
    }
    a.iter().zip(b).map(|(x, y)| (1.0 - s) * x + s * y).collect()
}

pub(crate) fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// Unit vector in the direction of `a`, or `None` for the zero vector.
pub(crate) fn normalized(a: &[f64]) -> Option<Vec<f64>> {
    let n = norm(a);
    if n > 0.0 && n.is_finite() {
        Some(scale(a, 1.0 / n))
    } else {
        None
    }
}

/// Angle between two nonzero vectors, stable near 0 and pi.
pub(crate) fn vector_angle(a: &[f64], b: &[f64]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    let ua = scale(a, 1.0 / na);
    let ub = scale(b, 1.0 / nb);
    let diff = dist(&ua, &ub);
    let sum = ua.iter().zip(&ub).map(|(x, y)| (x + y) * (x + y)).sum::<f64>().sqrt();
    2.0 * diff.atan2(sum)
}

pub(crate) fn clamp_cos(c: f64) -> f64 {
    c.clamp(-1.0, 1.0)
}
