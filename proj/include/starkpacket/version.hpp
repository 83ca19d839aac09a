#pragma once

namespace starkpacket {

inline constexpr const char* version = "0.1.0";

}
