//! Hyperbolic plane in the hyperboloid model.
//!
//! Points are triples `x = (x0, x1, x2)` with `<x, x> = -1` and `x0 > 0`
//! for the Minkowski form `<x, y> = -x0 y0 + x1 y1 + x2 y2`. Tangent vectors
//! at `x` are Minkowski-orthogonal to `x`; the form is positive definite there.

pub(crate) type H = [f64; 3];

pub(crate) fn mink(x: &H, y: &H) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
}

/// Lift planar coordinates `(x1, x2)` onto the upper sheet.
pub(crate) fn lift(x1: f64, x2: f64) -> H {
    [(1.0 + x1 * x1 + x2 * x2).sqrt(), x1, x2]
}

pub(crate) fn reproject(x: &H) -> H {
    lift(x[1], x[2])
}

pub(crate) fn on_sheet(x: &H, tol: f64) -> bool {
    x[0] > 0.0 && (mink(x, x) + 1.0).abs() <= tol * (1.0 + x[0] * x[0])
}

/// `d = 2 asinh(|y - x|_M / 2)`, which keeps full precision for nearby points
/// where `acosh(-<x,y>)` would lose half the digits.
pub(crate) fn dist(x: &H, y: &H) -> f64 {
    let d = [y[0] - x[0], y[1] - x[1], y[2] - x[2]];
    let q = mink(&d, &d).max(0.0);
    2.0 * (q.sqrt() / 2.0).asinh()
}

pub(crate) fn geodesic(x: &H, y: &H, s: f64) -> H {
    if s == 0.0 {
        return *x;
    }
    if s == 1.0 {
        return *y;
    }
    let d = dist(x, y);
    if d < 1e-12 {
        return reproject(&[
            (1.0 - s) * x[0] + s * y[0],
            (1.0 - s) * x[1] + s * y[1],
            (1.0 - s) * x[2] + s * y[2],
        ]);
    }
    let a = ((1.0 - s) * d).sinh() / d.sinh();
    let b = (s * d).sinh() / d.sinh();
    reproject(&[a * x[0] + b * y[0], a * x[1] + b * y[1], a * x[2] + b * y[2]])
}

/// Unit initial velocity of the geodesic from `x` to `y` (requires `x != y`).
pub(crate) fn log_unit(x: &H, y: &H) -> Option<H> {
    let delta = [y[0] - x[0], y[1] - x[1], y[2] - x[2]];
    let q = mink(&delta, &delta).max(0.0);
    // y + <x,y> x rewritten as delta - (q/2) x to avoid cancellation
    let u = [
        delta[0] - 0.5 * q * x[0],
        delta[1] - 0.5 * q * x[1],
        delta[2] - 0.5 * q * x[2],
    ];
    let n = mink(&u, &u);
    if !(n > 0.0) {
        return None;
    }
    let n = n.sqrt();
    Some([u[0] / n, u[1] / n, u[2] / n])
}

/// Point at distance `t` along the unit tangent vector `u` at `x`.
pub(crate) fn exp(x: &H, u: &H, t: f64) -> H {
    let (c, s) = (t.cosh(), t.sinh());
    reproject(&[c * x[0] + s * u[0], c * x[1] + s * u[1], c * x[2] + s * u[2]])
}

/// Minkowski-orthonormal basis of the tangent plane at `x`.
pub(crate) fn tangent_basis(x: &H) -> [H; 2] {
    let project = |v: H| -> H {
        let k = mink(&v, x);
        [v[0] + k * x[0], v[1] + k * x[1], v[2] + k * x[2]]
    };
    let e1 = project([0.0, 1.0, 0.0]);
    let n1 = mink(&e1, &e1).sqrt();
    let e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
    let e2 = project([0.0, 0.0, 1.0]);
    let k = mink(&e2, &e1);
    let e2 = [e2[0] - k * e1[0], e2[1] - k * e1[1], e2[2] - k * e1[2]];
    let n2 = mink(&e2, &e2).sqrt();
    [e1, [e2[0] / n2, e2[1] / n2, e2[2] / n2]]
}

/// Tangent vector at `x` with components `(c1, c2)` in `tangent_basis(x)`.
pub(crate) fn tangent_from_coords(x: &H, c: [f64; 2]) -> H {
    let [e1, e2] = tangent_basis(x);
    [
        c[0] * e1[0] + c[1] * e2[0],
        c[0] * e1[1] + c[1] * e2[1],
        c[0] * e1[2] + c[1] * e2[2],
    ]
}

pub(crate) fn tangent_coords(x: &H, u: &H) -> [f64; 2] {
    let [e1, e2] = tangent_basis(x);
    [mink(u, &e1), mink(u, &e2)]
}

/// Area of a hyperbolic disk of radius `r`.
pub(crate) fn disk_area(r: f64) -> f64 {
    2.0 * std::f64::consts::PI * (r.cosh() - 1.0)
}
