//! One-dimensional minimisation by grid scan and golden-section refinement.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search of a unimodal `f` on `[lo, hi]` down to a bracket
/// of width `tol`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Minimum {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        Minimum { x: x1, value: f1 }
    } else {
        Minimum { x: x2, value: f2 }
    }
}

/// Scan `n` uniformly spaced points of `[lo, hi)` and refine the best one by
/// golden section inside its neighbouring grid cells.
///
/// NaN objective values are treated as worse than any number.
pub fn scan_then_refine<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, n: usize, tol: f64) -> Minimum {
    assert!(n >= 2, "grid scan needs at least two points");
    let h = (hi - lo) / n as f64;
    let mut best = Minimum { x: lo, value: f64::INFINITY };
    for i in 0..n {
        let x = lo + h * i as f64;
        let v = f(x);
        if v < best.value {
            best = Minimum { x, value: v };
        }
    }
    if !best.value.is_finite() {
        return best;
    }
    let refined = golden_section(&mut f, best.x - h, best.x + h, tol);
    if refined.value <= best.value {
        refined
    } else {
        best
    }
}
