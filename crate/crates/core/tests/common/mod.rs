//! Shared oracle helpers for the integration tests. Everything here is
//! deliberately independent of the library's own evaluation paths: plain
//! composite Simpson quadrature with interval doubling.

// Each test binary compiles its own copy; not every binary uses everything.
#![allow(dead_code)]

/// Composite Simpson rule with `panels` even subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2) && panels >= 2);
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let x = a + i as f64 * h;
        sum += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

/// Simpson with panel doubling until two refinements agree to `tol`
/// (absolute, relative to max(1, |I|)).
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let mut panels = 64;
    let mut prev = simpson(f, a, b, panels);
    loop {
        panels *= 2;
        let next = simpson(f, a, b, panels);
        if (next - prev).abs() <= tol * next.abs().max(1.0) || panels >= (1 << 22) {
            return next;
        }
        prev = next;
    }
}

/// Integration window for an exponentially tailed density on (0, inf):
/// bulk located by mean/sd, then extended until the tail is negligible.
pub fn upper_limit<F: Fn(f64) -> f64>(pdf: &F, mean: f64, sd: f64) -> f64 {
    let mut hi = mean + 40.0 * sd + 10.0;
    while pdf(hi) * (1.0 + hi * hi) > 1e-18 {
        hi *= 1.5;
    }
    hi
}
