#include "fockprep/sweep_cache.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

#include "fockprep/errors.hpp"
#include "fockprep/grid.hpp"

namespace fockprep {

namespace {

constexpr char kMagic[8] = {'F', 'P', 'S', 'W', 'E', 'E', 'P', '\0'};
constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <class T>
void put(std::ostream& out, T v) {
  const T le = to_little(v);
  out.write(reinterpret_cast<const char*>(&le), sizeof le);
}

template <class T>
bool get(std::istream& in, T& v) {
  T le{};
  if (!in.read(reinterpret_cast<char*>(&le), sizeof le)) return false;
  v = to_little(le);
  return true;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::string profile_cache_key(Method method, const DeformationPath& path, const SpatialGrid& grid,
                              std::size_t n_target, const ProfileOptions& options) {
  std::ostringstream k;
  k.precision(17);
  k << "method=" << to_string(method) << ";A0=" << path.A0 << ";Af=" << path.Af << ";B0=" << path.B0
    << ";kappa=" << path.kappa << ";eps=" << path.eps << ";C=" << path.C << ";n=" << n_target
    << ";grid=" << grid.x_min() << ":" << grid.x_max() << ":" << grid.size() << ";nodes=" << options.nodes
    << ";refine=" << options.refine << ";tol=" << options.refine_tol << ";levels=" << options.max_refine_levels
    << ";k=" << options.k << ";spectral=" << options.eigen.spectral_refinement
    << ";res=" << options.eigen.residual_tol;
  return k.str();
}

std::filesystem::path profile_cache_file(const std::filesystem::path& dir, const std::string& key) {
  char name[40];
  std::snprintf(name, sizeof name, "profile-%016llx.bin", static_cast<unsigned long long>(fnv1a64(key)));
  return dir / name;
}

void store_profile(const std::filesystem::path& dir, const std::string& key, const AdiabaticityProfile& profile) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto file = profile_cache_file(dir, key);
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cache: cannot write " + tmp.string());
    out.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(profile.method));
    put<std::uint64_t>(out, profile.n_target);
    put<std::uint64_t>(out, key.size());
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    put<std::uint64_t>(out, profile.lambda.size());
    for (double v : profile.lambda) put<double>(out, v);
    for (double v : profile.g) put<double>(out, v);
    if (!out) throw IoError("cache: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw IoError("cache: cannot move " + tmp.string() + " into place");
}

std::optional<AdiabaticityProfile> load_profile(const std::filesystem::path& dir, const std::string& key) {
  std::ifstream in(profile_cache_file(dir, key), std::ios::binary);
  if (!in) return std::nullopt;
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  std::uint32_t version = 0, method = 0;
  std::uint64_t n_target = 0, key_len = 0, count = 0;
  if (!get(in, version) || version != kVersion) return std::nullopt;
  if (!get(in, method) || method > static_cast<std::uint32_t>(Method::linear)) return std::nullopt;
  if (!get(in, n_target) || !get(in, key_len) || key_len > (1u << 20)) return std::nullopt;
  std::string stored(key_len, '\0');
  if (!in.read(stored.data(), static_cast<std::streamsize>(key_len)) || stored != key) return std::nullopt;
  if (!get(in, count) || count < 2 || count > (1u << 26)) return std::nullopt;
  AdiabaticityProfile p;
  p.method = static_cast<Method>(method);
  p.n_target = n_target;
  p.lambda.resize(count);
  p.g.resize(count);
  for (auto& v : p.lambda)
    if (!get(in, v)) return std::nullopt;
  for (auto& v : p.g)
    if (!get(in, v)) return std::nullopt;
  return p;
}

}  // namespace fockprep
