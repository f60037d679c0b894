#pragma once

#include <cstdint>
#include <string_view>

#include "toscadata/model.hpp"

namespace toscadata {

inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;
inline constexpr std::uint64_t kLcgMultiplier = 6364136223846793005ULL;
inline constexpr std::uint64_t kLcgIncrement = 1442695040888963407ULL;

std::uint64_t fnv1a64(std::string_view data);

/// XOR with an LCG keystream seeded from the passphrase hash.
Bytes encrypt_bytes(const Bytes& plain, std::string_view passphrase);
Bytes decrypt_bytes(const Bytes& cipher, std::string_view passphrase);

}  // namespace toscadata
