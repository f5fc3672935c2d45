// SPDX-License-Identifier: Apache-2.0

#ifndef P1_VERSION_HPP
#define P1_VERSION_HPP

namespace p1 {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace p1

#endif  // P1_VERSION_HPP
