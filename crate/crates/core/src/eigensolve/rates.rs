//! Maps between the gap ratio `r = lambda_2 / lambda_1` and the residual
//! convergence rate `rho`.

/// `rho(r) = exp(-sqrt(2 (1/r - 1)) / sigma)` for `0 < r <= 1`.
pub fn rate_from_ratio(sigma2: f64, r: f64) -> f64 {
    (-(2.0 * (1.0 / r - 1.0)).sqrt() / sigma2.sqrt()).exp()
}

/// `r(rho) = 1 / ((sigma^2 / 2) (log rho)^2 + 1)` for `0 < rho <= 1`.
pub fn ratio_from_rate(sigma2: f64, rho: f64) -> f64 {
    let l = rho.ln();
    1.0 / (0.5 * sigma2 * l * l + 1.0)
}

/// Infimum `(-sigma^2 + sigma sqrt(sigma^2 + 4)) / 2` of the rates on which
/// `r(rho)` is a contraction.
pub fn contraction_threshold(sigma2: f64) -> f64 {
    (-sigma2 + (sigma2 * (sigma2 + 4.0)).sqrt()) / 2.0
}

/// Closed-form `dr/drho`.
pub fn dr_drho(sigma2: f64, rho: f64) -> f64 {
    let l = rho.ln();
    let base = 0.5 * sigma2 * l * l + 1.0;
    sigma2 * (-l) / (rho * base * base)
}

/// Lipschitz constant `sigma^2 (1 - rho_1) / rho_1^2` of `r` on `[rho_1, 1]`.
pub fn contraction_constant(sigma2: f64, rho1: f64) -> f64 {
    sigma2 * (1.0 - rho1) / (rho1 * rho1)
}

/// Asymptotic error decay ratio `(1 + sqrt(2 eps) / sigma)^{-1}` of the
/// static method when `lambda_1 / lambda_* = 1 + eps`.
pub fn predicted_decay(sigma2: f64, eps: f64) -> f64 {
    1.0 / (1.0 + (2.0 * eps / sigma2).sqrt())
}
