#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace usfda::rng {

// SplitMix64 finalizer; a bijective mixer used to derive independent seeds.
constexpr std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a child seed from a parent and one key. Chaining derive() calls
// gives a counter-based tree of streams that can be replayed without
// storing any draws.
constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t key) {
  return mix(mix(parent) ^ key);
}

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
constexpr std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::mt19937_64 engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace usfda::rng
