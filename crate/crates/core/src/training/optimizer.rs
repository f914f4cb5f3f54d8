/// Central differences `(L(p + h e_k) - L(p - h e_k)) / 2h` for every
/// coordinate of `point`.
pub fn finite_diff_gradient<F>(mut loss: F, point: &[f64], h: f64) -> Vec<f64>
where
    F: FnMut(&[f64]) -> f64,
{
    assert!(h > 0.0, "finite-difference step must be positive");
    let mut probe = point.to_vec();
    (0..point.len())
        .map(|k| {
            probe[k] = point[k] + h;
            let up = loss(&probe);
            probe[k] = point[k] - h;
            let down = loss(&probe);
            probe[k] = point[k];
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Bias-corrected Adam.
#[derive(Clone, Debug, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    pub fn new(dim: usize) -> Self {
        Adam { beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; dim], v: vec![0.0; dim], t: 0 }
    }

    pub fn steps_taken(&self) -> i32 {
        self.t
    }

    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        assert_eq!(params.len(), self.m.len());
        assert_eq!(grad.len(), self.m.len());
        self.t += 1;
        let c1 = 1.0 - self.beta1.powi(self.t);
        let c2 = 1.0 - self.beta2.powi(self.t);
        for (((p, &g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + self.eps);
        }
    }
}

/// Learning rate multiplied by `factor` every `period` iterations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepScheduler {
    pub period: usize,
    pub factor: f64,
}

impl StepScheduler {
    pub fn rate(&self, base: f64, iteration: usize) -> f64 {
        base * self.factor.powi((iteration / self.period.max(1)) as i32)
    }
}
