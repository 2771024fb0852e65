//! C-infinity stand-ins for the Heaviside step and the reciprocal Dirac
//! delta. Both vanish identically on the feasible side.

/// Upper clamp on every exponent fed to `exp`.
pub const EXP_CLAMP: f64 = 700.0;

/// `1` for `x >= 0`, `1 - exp(-1 / (a x)^2)` for `x < 0`.
pub fn smooth_step(x: f64, a: f64) -> f64 {
    if x >= 0.0 {
        return 1.0;
    }
    let t = (1.0 / (a * x).powi(2)).min(EXP_CLAMP);
    -(-t).exp_m1()
}

/// `(1 - u_a(x)) / u_a(x)`, evaluated as `1 / (exp(t) - 1)` with
/// `t = 1 / (a x)^2` so it stays finite where `u_a` underflows.
pub fn step_penalty(x: f64, a: f64) -> f64 {
    if x >= 0.0 {
        return 0.0;
    }
    let ax2 = (a * x).powi(2);
    let t = 1.0 / ax2;
    if t < 1e-300 {
        // exp(t) - 1 ~ t
        return ax2.min(f64::MAX);
    }
    1.0 / t.min(EXP_CLAMP).exp_m1()
}

/// Reciprocal smoothed delta: zero on `[-1/a, 1/a]`, growing like
/// `(a|x| - 1)^2` outside it.
pub fn smooth_delta_inv(x: f64, a: f64) -> f64 {
    let ax = a * x;
    let s = if ax < -1.0 {
        ax + 1.0
    } else if ax > 1.0 {
        ax - 1.0
    } else {
        return 0.0;
    };
    let s2 = s * s;
    let t = 1.0 / s2;
    if t < 1e-300 {
        return s2.min(f64::MAX);
    }
    1.0 / t.min(EXP_CLAMP).exp_m1()
}
