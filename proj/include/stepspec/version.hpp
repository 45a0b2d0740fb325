#pragma once

namespace stepspec {

inline constexpr const char* version = "0.1.0";

}
