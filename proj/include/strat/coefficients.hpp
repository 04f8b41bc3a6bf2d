#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "strat/basis.hpp"
#include "strat/kernel.hpp"

namespace strat {

/// Largest basis index accepted by the exact Legendre branch.
inline constexpr int kMaxLegendreIndex = 1024;

/// Coefficients C_{j_k...j_1} for j_l = 0..p_l.
///
/// Storage is row-major over the axis order (j_1, ..., j_k): j_1 pairs with
/// t_1, the innermost integration variable, and j_k varies fastest.
class CoeffTensor {
 public:
  CoeffTensor(BasisKind basis, WeightSpec spec, Interval iv, std::vector<int> orders, Eigen::VectorXd data);

  BasisKind basis() const { return basis_; }
  const WeightSpec& weights() const { return spec_; }
  const Interval& interval() const { return iv_; }
  const std::vector<int>& orders() const { return orders_; }
  int multiplicity() const { return static_cast<int>(orders_.size()); }
  const Eigen::VectorXd& data() const { return data_; }

  /// Flat offset of (j_1, ..., j_k).
  std::size_t offset(std::span<const int> index) const;
  double operator()(std::span<const int> index) const { return data_[static_cast<Eigen::Index>(offset(index))]; }
  double operator()(std::initializer_list<int> index) const {
    return (*this)(std::span<const int>(index.begin(), index.size()));
  }

  /// Element stride of axis l.
  std::size_t stride(int l) const { return strides_[static_cast<std::size_t>(l)]; }

 private:
  BasisKind basis_;
  WeightSpec spec_;
  Interval iv_;
  std::vector<int> orders_;
  std::vector<std::size_t> strides_;
  Eigen::VectorXd data_;
};

/// C_{j_k...j_1} = int psi_k phi_{j_k}(t_k) int^{t_k} ... int^{t_2} psi_1 phi_{j_1}(t_1) dt_1 ... dt_k.
///
/// Legendre: exact polynomial algebra in the Legendre basis; indices above
/// kMaxLegendreIndex raise capability_error.
/// Trigonometric: nested composite Gauss quadrature (16 points per panel),
/// panels doubled until successive results differ by less than 1e-12.
double compute_coeff(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> index);

/// Every coefficient with j_l <= orders[l]. Work is split over `threads`;
/// the result does not depend on the thread count.
CoeffTensor compute_tensor(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> orders,
                           unsigned threads = 1);

/// Provenance a cache file must match to be reused.
struct CacheHeader {
  BasisKind basis;
  WeightSpec spec;
  Interval iv;
  std::vector<int> orders;

  friend bool operator==(const CacheHeader&, const CacheHeader&) = default;
};

inline constexpr std::uint32_t kCacheFormatVersion = 1;

/// Writes "STCF", version, header and row-major little-endian doubles.
/// The file is written to a temporary sibling and renamed into place.
void cache_store(const CoeffTensor& tensor, const std::filesystem::path& path);

/// Throws format_error on unreadable or truncated files and stale_cache_error
/// when the stored header differs from `expected`.
CoeffTensor cache_load(const std::filesystem::path& path, const CacheHeader& expected);

/// Loads the tensor from `path` when present and current, otherwise computes
/// and stores it.
CoeffTensor cached_tensor(BasisKind basis, const WeightSpec& spec, const Interval& iv, std::span<const int> orders,
                          const std::filesystem::path& path, unsigned threads = 1);

}  // namespace strat
