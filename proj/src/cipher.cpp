#include "toscadata/cipher.hpp"

namespace toscadata {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

Bytes encrypt_bytes(const Bytes& plain, std::string_view passphrase) {
  Bytes out(plain.size());
  std::uint64_t x = fnv1a64(passphrase);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    x = x * kLcgMultiplier + kLcgIncrement;
    out[i] = plain[i] ^ static_cast<std::uint8_t>(x & 0xff);
  }
  return out;
}

Bytes decrypt_bytes(const Bytes& cipher, std::string_view passphrase) {
  return encrypt_bytes(cipher, passphrase);
}

}  // namespace toscadata
