//! Scalar maximization helpers: golden-section search guarded by a coarse
//! grid scan.

/// Golden-section search for the maximum of `f` on `[a, b]`.
///
/// `f` must be unimodal on the interval; the caller guards that with
/// [`scan_and_refine_max`]. Returns `(x_max, f_max)`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }

    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Coarse grid scan over `[a, b]` followed by golden-section refinement in
/// the bracket around the best sample.
///
/// Tolerates `-inf` samples (sentinel regions); requires at least one finite
/// sample. Boundary maxima are handled by clamping the bracket.
pub fn scan_and_refine_max(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    scan_points: usize,
    tol: f64,
) -> (f64, f64) {
    assert!(scan_points >= 3 && b > a);
    let step = (b - a) / (scan_points - 1) as f64;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..scan_points {
        let v = f(a + i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    assert!(
        best.is_finite(),
        "objective has no finite sample on the interval"
    );
    let lo = a + step * best_i.saturating_sub(1) as f64;
    let hi = (a + step * (best_i + 1) as f64).min(b);
    golden_section_max(f, lo, hi, tol)
}
