// Regression targets produced by tools/make_oracles (dense-grid reference
// searches, independent of the production optimizer). Regenerate with
//   ./build/tools/make_oracles
// and update here if the scheme definitions change.
#pragma once

namespace frozen {

// Single relay, P1 = P2 = 5, N1 = N2 = 1, q searched over [1e-3, 1e3].
// 101 x 101 x 200 grid plus coordinate polish.
inline constexpr double kRelaySnncD025 = 1.948082095;
inline constexpr double kRelaySnncD010 = 1.802796917;
inline constexpr double kRelayNncD010 = 1.794050235;
inline constexpr double kRelayGapD010 = 0.008746682;  // snnc - nnc at d = 0.1
// 1e5-point q scan plus polish; equals the closed-form cf value.
inline constexpr double kRelayNncD050 = 1.938658740;
// 1e6-point rho scan plus polish.
inline constexpr double kRelayCutsetD050 = 2.350219859;

// Two-way relay, P = 10, N = 1, gamma = 3, q searched over [1e-3, 1e3].
// 21^3 fraction grid x 100-point q grid plus coordinate polish.
inline constexpr double kTwrcSnncD020 = 4.254466054;
inline constexpr double kTwrcNncD050 = 5.597736766;  // 1e4-point q scan plus polish
// The superposition layer buys nothing measurable here: the dense-oracle
// gaps are at optimizer-noise scale.
inline constexpr double kTwrcGapD010 = 2.01e-7;
inline constexpr double kTwrcGapD090 = 0.93e-7;

}  // namespace frozen
