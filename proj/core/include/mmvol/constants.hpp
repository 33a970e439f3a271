#ifndef MMVOL_CONSTANTS_HPP
#define MMVOL_CONSTANTS_HPP

namespace mmvol {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;
inline constexpr double kSqrtPi = 1.77245385090551602730;

}  // namespace mmvol

#endif  // MMVOL_CONSTANTS_HPP
