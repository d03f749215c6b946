//! The Adam optimizer.

use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Moment estimates for one parameter vector.
#[derive(Debug, Clone)]
pub struct Adam {
    config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    beta1_pow: f64,
    beta2_pow: f64,
    steps: u64,
}

impl Adam {
    pub fn new(config: AdamConfig, num_params: usize) -> Self {
        Adam {
            config,
            m: alloc::vec![0.0; num_params],
            v: alloc::vec![0.0; num_params],
            beta1_pow: 1.0,
            beta2_pow: 1.0,
            steps: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// `p -= lr * m_hat / (sqrt(v_hat) + eps)` with bias-corrected moments.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        assert_eq!(params.len(), self.m.len());
        assert_eq!(grad.len(), self.m.len());
        let AdamConfig { beta1, beta2, eps } = self.config;
        self.steps += 1;
        self.beta1_pow *= beta1;
        self.beta2_pow *= beta2;
        let c1 = 1.0 - self.beta1_pow;
        let c2 = 1.0 - self.beta2_pow;
        for (((p, &g), m), v) in params.iter_mut().zip(grad).zip(&mut self.m).zip(&mut self.v) {
            *m = beta1 * *m + (1.0 - beta1) * g;
            *v = beta2 * *v + (1.0 - beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= lr * m_hat / (libm::sqrt(v_hat) + eps);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_step_is_normalized_gradient() {
        for &g in &[3.0, -0.25, 1e-3, 42.0] {
            let mut adam = Adam::new(AdamConfig::default(), 4);
            let mut p = [1.0, -2.0, 0.0, 5.0];
            let before = p;
            adam.step(&mut p, &[g; 4], 0.05);
            // m_hat = g and v_hat = g^2 after one step.
            let expected = -0.05 * g / (libm::fabs(g) + 1e-8);
            for (a, b) in p.iter().zip(&before) {
                assert!(((a - b) - expected).abs() < 1e-10, "{g}: {}", a - b);
            }
        }
    }

    #[test]
    fn zero_gradient_does_not_move() {
        let mut adam = Adam::new(AdamConfig::default(), 2);
        let mut p = [0.5, -0.5];
        for _ in 0..10 {
            adam.step(&mut p, &[0.0, 0.0], 0.1);
        }
        assert_eq!(p, [0.5, -0.5]);
        assert_eq!(adam.steps(), 10);
    }
}
