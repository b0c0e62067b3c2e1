#pragma once

namespace psiapprox {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace psiapprox
