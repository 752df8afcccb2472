#ifndef PROBEDOCK_FORMAT_HPP
#define PROBEDOCK_FORMAT_HPP

#include <string>

namespace probedock {

/// Shortest round-trip decimal form of a double; locale independent and byte-stable.
std::string fmt_num(double value);

}  // namespace probedock

#endif  // PROBEDOCK_FORMAT_HPP
