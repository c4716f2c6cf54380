//! Iterated trapezoidal quadrature for the ordered double integrals used by
//! satisfaction functions.
//!
//! For memberships `f` (the `x` variable) and `g` (the `y` variable) on
//! bounded supports this computes
//!
//! ```text
//! below = ∫ g(y) ∫_{-∞}^{y} f(x) dx dy        total = ∫ f(x) dx · ∫ g(y) dy
//! ```
//!
//! Each axis uses a uniform grid over the support with the caller's
//! breakpoints (kinks of the membership functions) spliced in, so the rule
//! is exact on piecewise-constant memberships and second order on
//! piecewise-linear ones. The inner integral is a cumulative trapezoid with
//! the outer abscissa `y` inserted as an extra node.

/// Default node count per axis.
pub const DEFAULT_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairIntegrals {
    /// Mass of the region `x < y`.
    pub below: f64,
    /// Mass of the region `x > y`.
    pub above: f64,
    /// Mass of the whole product support.
    pub total: f64,
}

/// Uniform grid over `[breaks[0], breaks[last]]` merged with the interior
/// breakpoints. `breaks` must be sorted.
fn grid(breaks: &[f64], extra: &[f64], nodes: usize) -> Vec<f64> {
    let lo = breaks[0];
    let hi = *breaks.last().expect("non-empty breakpoints");
    let n = nodes.max(2);
    let mut interior: Vec<f64> = breaks.iter().chain(extra).copied().filter(|&b| b > lo && b < hi).collect();
    interior.sort_by(f64::total_cmp);
    let mut xs: Vec<f64> = Vec::with_capacity(n + interior.len());
    let push = |x: f64, xs: &mut Vec<f64>| {
        if xs.last() != Some(&x) {
            xs.push(x);
        }
    };
    let mut k = 0;
    if hi > lo {
        let step = (hi - lo) / (n - 1) as f64;
        for i in 0..n - 1 {
            let x = lo + i as f64 * step;
            while k < interior.len() && interior[k] < x {
                push(interior[k], &mut xs);
                k += 1;
            }
            push(x, &mut xs);
        }
    }
    for &b in &interior[k..] {
        push(b, &mut xs);
    }
    push(hi, &mut xs);
    xs
}

/// Cumulative trapezoid table of one membership function.
struct Cumulative {
    xs: Vec<f64>,
    values: Vec<f64>,
    cumulative: Vec<f64>,
}

impl Cumulative {
    fn new<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], nodes: usize) -> Self {
        let xs = grid(breaks, &[], nodes);
        let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let mut cumulative = Vec::with_capacity(xs.len());
        cumulative.push(0.0);
        for i in 1..xs.len() {
            let prev = cumulative[i - 1];
            cumulative.push(prev + 0.5 * (xs[i] - xs[i - 1]) * (values[i - 1] + values[i]));
        }
        Cumulative { xs, values, cumulative }
    }

    fn total(&self) -> f64 {
        *self.cumulative.last().expect("grid is non-empty")
    }

    /// Integral from the lower end of the support up to `y`.
    fn up_to<F: Fn(f64) -> f64>(&self, f: &F, y: f64) -> f64 {
        let last = self.xs.len() - 1;
        if y <= self.xs[0] {
            return 0.0;
        }
        if y >= self.xs[last] {
            return self.total();
        }
        // xs[i] <= y < xs[i + 1]
        let i = self.xs.partition_point(|&x| x <= y) - 1;
        let partial = y - self.xs[i];
        self.cumulative[i] + 0.5 * partial * (self.values[i] + f(y))
    }
}

/// Computes the ordered pair integrals of `f(x)·g(y)` over the product of
/// the supports `[f_breaks[0], f_breaks[last]] × [g_breaks[0], g_breaks[last]]`.
///
/// Breakpoint slices must be sorted and non-empty; their end points are the
/// supports and interior entries are kinks to place grid nodes on.
pub fn ordered_pair_integrals<F, G>(f: F, f_breaks: &[f64], g: G, g_breaks: &[f64], nodes: usize) -> PairIntegrals
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let inner = Cumulative::new(&f, f_breaks, nodes);
    let f_total = inner.total();

    // the inner integral kinks wherever f does, so those points join the outer grid
    let ys = grid(g_breaks, f_breaks, nodes);
    let mut below = 0.0;
    let mut g_mass = 0.0;
    let mut prev: Option<(f64, f64, f64)> = None;
    for &y in &ys {
        let gy = g(y);
        let cy = if gy == 0.0 { 0.0 } else { gy * inner.up_to(&f, y) };
        if let Some((py, pg, pc)) = prev {
            let h = y - py;
            g_mass += 0.5 * h * (pg + gy);
            below += 0.5 * h * (pc + cy);
        }
        prev = Some((y, gy, cy));
    }
    let total = f_total * g_mass;
    PairIntegrals {
        below,
        above: total - below,
        total,
    }
}
