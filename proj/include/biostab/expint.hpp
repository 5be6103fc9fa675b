#pragma once

namespace biostab {

/// Exponential integral E_n(x) = ∫_1^∞ e^(-x t) / t^n dt for n >= 1, x >= 0.
///
/// E_1 uses the ascending series below x = 1 and a continued fraction above;
/// higher orders follow from the upward recurrence n E_{n+1} = e^{-x} - x E_n
/// (small x) or their own continued fraction (x >= 1, avoids cancellation).
/// Relative error <= 1e-12 on [1e-12, 50]; underflows cleanly to 0 for large x.
/// Throws DomainError for n < 1, x < 0, or the logarithmic point (n=1, x=0).
double expint(int n, double x);

/// ∫_0^{tau_h} E_1(|tau - t|) dt = 2 - E_2(tau) - E_2(tau_h - tau).
/// Requires 0 <= tau <= tau_h.
double kernel_primitive_E1(double tau, double tau_h);

/// ∫_0^{tau_h} E_2(|tau - t|) sgn(tau - t) dt = E_3(tau_h - tau) - E_3(tau).
/// Requires 0 <= tau <= tau_h.
double kernel_primitive_E2_signed(double tau, double tau_h);

/// ∫_0^{tau_h} E_3(|tau - t|) dt = 2/3 - E_4(tau) - E_4(tau_h - tau).
/// Requires 0 <= tau <= tau_h.
double kernel_primitive_E3(double tau, double tau_h);

}  // namespace biostab
