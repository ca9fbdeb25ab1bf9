#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <type_traits>
#include <utility>

#include "doa/error.hpp"

namespace doa::detail {

template <class U>
U to_little_endian(U bits) noexcept {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char buf[sizeof(U)];
    std::memcpy(buf, &bits, sizeof(U));
    for (std::size_t i = 0; i < sizeof(U) / 2; ++i) std::swap(buf[i], buf[sizeof(U) - 1 - i]);
    std::memcpy(&bits, buf, sizeof(U));
  }
  return bits;
}

template <class T>
using BitsOf = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;

template <class T>
void write_scalar_le(std::ostream& out, T value) {
  const auto bits = to_little_endian(std::bit_cast<BitsOf<T>>(value));
  out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
}

template <class T>
T read_scalar_le(std::istream& in) {
  BitsOf<T> bits{};
  in.read(reinterpret_cast<char*>(&bits), sizeof(bits));
  if (!in) throw Error(ErrorKind::io, "binary payload truncated");
  return std::bit_cast<T>(to_little_endian(bits));
}

}  // namespace doa::detail
