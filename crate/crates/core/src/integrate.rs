//! Classical fixed-step fourth-order Runge-Kutta.

use alloc::vec::Vec;

/// Reusable stage buffers for [`Rk4::step`].
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        let z = alloc::vec![0.0; dim];
        Self {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// Advances the autonomous system `dy/dt = f(y)` by `h` in place.
    /// `f(y, dy)` writes the derivative into `dy`.
    pub fn step<F>(&mut self, f: &mut F, y: &mut [f64], h: f64)
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let n = y.len();
        debug_assert_eq!(n, self.k1.len());
        f(y, &mut self.k1);
        for i in 0..n {
            self.tmp[i] = y[i] + 0.5 * h * self.k1[i];
        }
        f(&self.tmp, &mut self.k2);
        for i in 0..n {
            self.tmp[i] = y[i] + 0.5 * h * self.k2[i];
        }
        f(&self.tmp, &mut self.k3);
        for i in 0..n {
            self.tmp[i] = y[i] + h * self.k3[i];
        }
        f(&self.tmp, &mut self.k4);
        for i in 0..n {
            y[i] += h / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}

/// Step sizes covering `[0, t_end]` with steps of at most `h`; the last step
/// is shortened so the grid lands exactly on `t_end`.
pub fn step_schedule(t_end: f64, h: f64) -> impl Iterator<Item = (f64, f64)> {
    let steps = libm::ceil(t_end / h * (1.0 - 1e-12)).max(1.0) as usize;
    (0..steps).map(move |i| {
        let t0 = i as f64 * h;
        let t1 = if i + 1 == steps {
            t_end
        } else {
            (i + 1) as f64 * h
        };
        (t1, t1 - t0)
    })
}
