#include <bit>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include <gtest/gtest.h>

#include "strat/coefficients.hpp"
#include "strat/errors.hpp"

using namespace strat;
namespace fs = std::filesystem;

namespace {

class CacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("stratint_cache_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path file(const char* name) const { return dir_ / name; }

  static std::vector<char> read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  static void write(const fs::path& p, const std::vector<char>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }

  fs::path dir_;
};

const std::vector<int> kExps = {1, 0};
const std::vector<int> kOrders = {5, 3};

CoeffTensor sample_tensor(BasisKind basis = BasisKind::legendre) {
  return compute_tensor(basis, monomial_spec(kExps), Interval(0.5, 2.0), kOrders);
}

CacheHeader header_of(const CoeffTensor& t) { return {t.basis(), t.weights(), t.interval(), t.orders()}; }

}  // namespace

TEST_F(CacheTest, RoundTripIsBitExact) {
  for (BasisKind basis : {BasisKind::legendre, BasisKind::trigonometric}) {
    const auto tensor = sample_tensor(basis);
    cache_store(tensor, file("t.stcf"));
    const auto loaded = cache_load(file("t.stcf"), header_of(tensor));
    ASSERT_EQ(loaded.data().size(), tensor.data().size());
    for (Eigen::Index i = 0; i < tensor.data().size(); ++i) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(loaded.data()[i]), std::bit_cast<std::uint64_t>(tensor.data()[i]));
    }
    EXPECT_EQ(loaded.orders(), tensor.orders());
    EXPECT_FALSE(fs::exists(file("t.stcf.tmp")));
  }
}

TEST_F(CacheTest, FileStartsWithMagicAndVersion) {
  cache_store(sample_tensor(), file("t.stcf"));
  const auto bytes = read(file("t.stcf"));
  ASSERT_GE(bytes.size(), 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "STCF");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 0);
}

TEST_F(CacheTest, MismatchedHeaderIsStale) {
  const auto tensor = sample_tensor();
  cache_store(tensor, file("t.stcf"));
  auto other_interval = header_of(tensor);
  other_interval.iv = Interval(0.0, 2.0);
  EXPECT_THROW(cache_load(file("t.stcf"), other_interval), stale_cache_error);
  auto other_orders = header_of(tensor);
  other_orders.orders = {5, 4};
  EXPECT_THROW(cache_load(file("t.stcf"), other_orders), stale_cache_error);
  auto other_basis = header_of(tensor);
  other_basis.basis = BasisKind::trigonometric;
  EXPECT_THROW(cache_load(file("t.stcf"), other_basis), stale_cache_error);
}

TEST_F(CacheTest, VersionChangeIsStale) {
  const auto tensor = sample_tensor();
  cache_store(tensor, file("t.stcf"));
  auto bytes = read(file("t.stcf"));
  bytes[4] = 2;
  write(file("t.stcf"), bytes);
  EXPECT_THROW(cache_load(file("t.stcf"), header_of(tensor)), stale_cache_error);
}

TEST_F(CacheTest, TruncatedOrCorruptFilesAreFormatErrors) {
  const auto tensor = sample_tensor();
  cache_store(tensor, file("t.stcf"));
  const auto bytes = read(file("t.stcf"));
  for (std::size_t cut : {std::size_t{2}, std::size_t{20}, bytes.size() - 3}) {
    write(file("cut.stcf"), std::vector<char>(bytes.begin(), bytes.begin() + static_cast<long>(cut)));
    EXPECT_THROW(cache_load(file("cut.stcf"), header_of(tensor)), format_error) << cut;
  }
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  write(file("magic.stcf"), bad_magic);
  EXPECT_THROW(cache_load(file("magic.stcf"), header_of(tensor)), format_error);
  EXPECT_THROW(cache_load(file("missing.stcf"), header_of(tensor)), format_error);
}

TEST_F(CacheTest, CachedTensorRecomputesStaleFiles) {
  const auto tensor = sample_tensor();
  const auto path = file("t.stcf");
  const auto first = cached_tensor(tensor.basis(), tensor.weights(), tensor.interval(), kOrders, path);
  EXPECT_TRUE(fs::exists(path));
  EXPECT_EQ(first.data(), tensor.data());
  const auto second = cached_tensor(tensor.basis(), tensor.weights(), tensor.interval(), kOrders, path);
  EXPECT_EQ(second.data(), tensor.data());

  const std::vector<int> bigger = {6, 3};
  const auto replaced = cached_tensor(tensor.basis(), tensor.weights(), tensor.interval(), bigger, path);
  EXPECT_EQ(replaced.orders(), bigger);
  EXPECT_NO_THROW(cache_load(path, header_of(replaced)));
}
