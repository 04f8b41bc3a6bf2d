#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <system_error>

#include "strat/coefficients.hpp"
#include "strat/errors.hpp"

namespace strat {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'C', 'F'};

std::uint32_t basis_tag(BasisKind kind) { return kind == BasisKind::legendre ? 0u : 1u; }

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) bytes_.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
  }
  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) bytes_.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * b);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_++])) << (8 * b);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void expect_magic() {
    need(4);
    if (std::memcmp(bytes_.data() + pos_, kMagic, 4) != 0) throw format_error("cache file lacks the STCF magic");
    pos_ += 4;
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw format_error("cache file truncated");
  }

  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

// Sanity bounds keep a corrupt header from requesting absurd allocations.
constexpr std::uint32_t kMaxMultiplicity = 64;
constexpr std::uint32_t kMaxWeightCoeffs = 1 << 16;

}  // namespace

void cache_store(const CoeffTensor& tensor, const std::filesystem::path& path) {
  ByteWriter w;
  w.raw(kMagic, 4);
  w.u32(kCacheFormatVersion);
  w.u32(basis_tag(tensor.basis()));
  w.f64(tensor.interval().start());
  w.f64(tensor.interval().end());
  w.u32(static_cast<std::uint32_t>(tensor.multiplicity()));
  for (const auto& weight : tensor.weights().weights()) {
    w.u32(static_cast<std::uint32_t>(weight.coeffs().size()));
    for (Eigen::Index d = 0; d < weight.coeffs().size(); ++d) w.f64(weight.coeffs()[d]);
  }
  for (int p : tensor.orders()) w.u32(static_cast<std::uint32_t>(p));
  w.u64(static_cast<std::uint64_t>(tensor.data().size()));
  for (Eigen::Index i = 0; i < tensor.data().size(); ++i) w.f64(tensor.data()[i]);

  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open cache file for writing: " + tmp.string());
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw std::runtime_error("failed writing cache file: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CoeffTensor cache_load(const std::filesystem::path& path, const CacheHeader& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open cache file: " + path.string());
  ByteReader r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));

  r.expect_magic();
  const std::uint32_t version = r.u32();
  const std::uint32_t tag = r.u32();
  if (tag > 1) throw format_error("unknown basis tag in cache file");
  const double t = r.f64();
  const double T = r.f64();
  const std::uint32_t k = r.u32();
  if (k == 0 || k > kMaxMultiplicity) throw format_error("implausible multiplicity in cache file");
  std::vector<WeightPoly> weights;
  for (std::uint32_t l = 0; l < k; ++l) {
    const std::uint32_t n = r.u32();
    if (n == 0 || n > kMaxWeightCoeffs) throw format_error("implausible weight size in cache file");
    Eigen::VectorXd c(n);
    for (std::uint32_t d = 0; d < n; ++d) c[d] = r.f64();
    try {
      weights.emplace_back(std::move(c));
    } catch (const std::invalid_argument&) {
      throw format_error("invalid weight polynomial in cache file");
    }
  }
  std::vector<int> orders;
  std::uint64_t total = 1;
  for (std::uint32_t l = 0; l < k; ++l) {
    const std::uint32_t p = r.u32();
    if (p > static_cast<std::uint32_t>(kMaxLegendreIndex) * 64) throw format_error("implausible order in cache file");
    orders.push_back(static_cast<int>(p));
    total *= static_cast<std::uint64_t>(p) + 1;
  }
  const std::uint64_t count = r.u64();

  if (version != kCacheFormatVersion) throw stale_cache_error("cache format version differs");
  if (!std::isfinite(t) || !std::isfinite(T) || !(T > t)) throw format_error("invalid interval in cache file");
  const CacheHeader stored{tag == 0 ? BasisKind::legendre : BasisKind::trigonometric, WeightSpec(std::move(weights)),
                           Interval(t, T), orders};
  if (!(stored == expected)) throw stale_cache_error("cache header does not match the requested tensor");

  if (count != total) throw format_error("cache entry count inconsistent with orders");
  if (r.remaining() != count * 8) throw format_error("cache data size inconsistent with entry count");
  Eigen::VectorXd data(static_cast<Eigen::Index>(count));
  for (std::uint64_t i = 0; i < count; ++i) data[static_cast<Eigen::Index>(i)] = r.f64();
  if (!data.allFinite()) throw format_error("non-finite entry in cache file");
  return CoeffTensor(stored.basis, stored.spec, stored.iv, stored.orders, std::move(data));
}

CoeffTensor cached_tensor(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> orders,
                          const std::filesystem::path& path, unsigned threads) {
  const CacheHeader expected{basis, spec, iv, std::vector<int>(orders.begin(), orders.end())};
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    try {
      return cache_load(path, expected);
    } catch (const stale_cache_error&) {
    } catch (const format_error&) {
    }
  }
  auto tensor = compute_tensor(basis, spec, iv, orders, threads);
  cache_store(tensor, path);
  return tensor;
}

}  // namespace strat
