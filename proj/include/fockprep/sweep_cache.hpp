#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "fockprep/schedule.hpp"

namespace fockprep {

class SpatialGrid;

inline constexpr const char* kCacheDirEnv = "FOCKPREP_CACHE_DIR";

/// Canonical text describing everything a profile depends on.
std::string profile_cache_key(Method method, const DeformationPath& path, const SpatialGrid& grid,
                              std::size_t n_target, const ProfileOptions& options);

/// Cache file for a key: "<dir>/profile-<fnv1a64 hex>.bin".
std::filesystem::path profile_cache_file(const std::filesystem::path& dir, const std::string& key);

/// Binary layout, little-endian: 8-byte magic "FPSWEEP\0", u32 version (1),
/// u32 method, u64 n_target, u64 key length, key bytes, u64 node count, then
/// the lambda nodes and the g values as IEEE-754 doubles.
void store_profile(const std::filesystem::path& dir, const std::string& key, const AdiabaticityProfile& profile);
/// Missing, corrupt, or mismatched files yield nullopt.
std::optional<AdiabaticityProfile> load_profile(const std::filesystem::path& dir, const std::string& key);

}  // namespace fockprep
