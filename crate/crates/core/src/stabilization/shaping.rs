/// First-order leaky integrator step, `beta * y + (1 - beta) * x` with `beta = exp(-dt / tau)`.
pub fn leaky_integrate(y: f64, x: f64, leak_tau: f64, dt: f64) -> f64 {
    let beta = (-dt / leak_tau).exp();
    beta * y + (1.0 - beta) * x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakyIntegrator {
    pub value: f64,
    pub leak_tau: f64,
}

impl LeakyIntegrator {
    pub fn new(leak_tau: f64) -> Self {
        LeakyIntegrator { value: 0.0, leak_tau }
    }

    pub fn update(&mut self, x: f64, dt: f64) -> f64 {
        self.value = leaky_integrate(self.value, x, self.leak_tau, dt);
        self.value
    }
}

/// Moves `prev` toward `target` by at most `rate_max * dt`.
pub fn rate_limit(prev: f64, target: f64, rate_max: f64, dt: f64) -> f64 {
    let step = rate_max * dt;
    prev + (target - prev).clamp(-step, step)
}

/// Rate limiter that also tracks a high-passed copy of the tracking residual for logging.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateLimiter {
    pub value: f64,
    pub residual_hp: f64,
    last_residual: f64,
    rate_max: f64,
    residual_tau: f64,
}

impl RateLimiter {
    pub fn new(value: f64, rate_max: f64, residual_tau: f64) -> Self {
        RateLimiter {
            value,
            residual_hp: 0.0,
            last_residual: 0.0,
            rate_max,
            residual_tau,
        }
    }

    pub fn update(&mut self, target: f64, dt: f64) -> f64 {
        self.value = rate_limit(self.value, target, self.rate_max, dt);
        let residual = target - self.value;
        let beta = (-dt / self.residual_tau).exp();
        self.residual_hp = beta * (self.residual_hp + residual - self.last_residual);
        self.last_residual = residual;
        self.value
    }
}
