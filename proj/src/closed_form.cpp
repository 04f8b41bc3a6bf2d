#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "strat/sampler.hpp"

namespace strat {

namespace {

struct FormInfo {
  ClosedForm form;
  std::string_view name;
  BasisKind basis;
  std::vector<int> exponents;
};

const std::array<FormInfo, 13>& form_table() {
  static const std::array<FormInfo, 13> table = {{
      {ClosedForm::I0, "I0", BasisKind::legendre, {0}},
      {ClosedForm::I1, "I1", BasisKind::legendre, {1}},
      {ClosedForm::I2, "I2", BasisKind::legendre, {2}},
      {ClosedForm::I3, "I3", BasisKind::legendre, {3}},
      {ClosedForm::I00, "I00", BasisKind::legendre, {0, 0}},
      {ClosedForm::I01, "I01", BasisKind::legendre, {0, 1}},
      {ClosedForm::I10, "I10", BasisKind::legendre, {1, 0}},
      {ClosedForm::I02, "I02", BasisKind::legendre, {0, 2}},
      {ClosedForm::I20, "I20", BasisKind::legendre, {2, 0}},
      {ClosedForm::I11, "I11", BasisKind::legendre, {1, 1}},
      {ClosedForm::I1t, "I1t", BasisKind::trigonometric, {1}},
      {ClosedForm::I2t, "I2t", BasisKind::trigonometric, {2}},
      {ClosedForm::I00t, "I00t", BasisKind::trigonometric, {0, 0}},
  }};
  return table;
}

const FormInfo& info(ClosedForm form) {
  for (const auto& entry : form_table()) {
    if (entry.form == form) return entry;
  }
  throw std::invalid_argument("unknown closed form");
}

// Series terms are kept only when every basis index they touch is <= p.
class Expansion {
 public:
  Expansion(const GaussianTable& table, int p, int first, int second)
      : table_(table), p_(p), first_(first), second_(second) {}

  double z1(int j) const { return table_(first_, j); }
  double z2(int j) const { return table_(second_, j); }
  bool in(int j) const { return j <= p_; }
  int p() const { return p_; }

 private:
  const GaussianTable& table_;
  int p_;
  int first_;
  int second_;
};

double i00(const Expansion& e, double len) {
  double sum = e.z1(0) * e.z2(0);
  for (int i = 1; i <= e.p(); ++i) {
    sum += (e.z1(i - 1) * e.z2(i) - e.z1(i) * e.z2(i - 1)) / std::sqrt(4.0 * i * i - 1.0);
  }
  return 0.5 * len * sum;
}

double i01(const Expansion& e, double len) {
  double sum = e.in(1) ? e.z1(0) * e.z2(1) / std::sqrt(3.0) : 0.0;
  for (int i = 0; i <= e.p(); ++i) {
    if (e.in(i + 2)) {
      sum += ((i + 2.0) * e.z1(i) * e.z2(i + 2) - (i + 1.0) * e.z1(i + 2) * e.z2(i)) /
             (std::sqrt((2.0 * i + 1.0) * (2.0 * i + 5.0)) * (2.0 * i + 3.0));
    }
    sum -= e.z1(i) * e.z2(i) / ((2.0 * i - 1.0) * (2.0 * i + 3.0));
  }
  return -0.5 * len * i00(e, len) - 0.25 * len * len * sum;
}

double i10(const Expansion& e, double len) {
  double sum = e.in(1) ? e.z2(0) * e.z1(1) / std::sqrt(3.0) : 0.0;
  for (int i = 0; i <= e.p(); ++i) {
    if (e.in(i + 2)) {
      sum += ((i + 1.0) * e.z2(i + 2) * e.z1(i) - (i + 2.0) * e.z2(i) * e.z1(i + 2)) /
             (std::sqrt((2.0 * i + 1.0) * (2.0 * i + 5.0)) * (2.0 * i + 3.0));
    }
    sum += e.z1(i) * e.z2(i) / ((2.0 * i - 1.0) * (2.0 * i + 3.0));
  }
  return -0.5 * len * i00(e, len) - 0.25 * len * len * sum;
}

// Shared series of the (02) and (20) forms. `a3`, `b3` weight the index-3 band,
// `a1`, `b1` the index-1 band; each is a function of the series variable i.
template <typename A3, typename B3, typename A1, typename B1>
double second_degree_series(const Expansion& e, A3 a3, B3 b3, A1 a1, B1 b1) {
  double sum = 0.0;
  for (int i = 0; i <= e.p(); ++i) {
    const double di = i;
    if (e.in(i + 3)) {
      sum += (a3(di) * e.z2(i + 3) * e.z1(i) - b3(di) * e.z2(i) * e.z1(i + 3)) /
             (std::sqrt((2.0 * di + 1.0) * (2.0 * di + 7.0)) * (2.0 * di + 3.0) * (2.0 * di + 5.0));
    }
    if (e.in(i + 1)) {
      sum += (a1(di) * e.z2(i + 1) * e.z1(i) - b1(di) * e.z2(i) * e.z1(i + 1)) /
             (std::sqrt((2.0 * di + 1.0) * (2.0 * di + 3.0)) * (2.0 * di - 1.0) * (2.0 * di + 5.0));
    }
  }
  return sum;
}

double i02(const Expansion& e, double len) {
  double sum = (e.in(2) ? 2.0 * e.z2(2) * e.z1(0) / (3.0 * std::sqrt(5.0)) : 0.0) + e.z1(0) * e.z2(0) / 3.0;
  sum += second_degree_series(
      e, [](double i) { return (i + 2.0) * (i + 3.0); }, [](double i) { return (i + 1.0) * (i + 2.0); },
      [](double i) { return i * i + i - 3.0; }, [](double i) { return i * i + 3.0 * i - 1.0; });
  return -0.25 * len * len * i00(e, len) - len * i01(e, len) + len * len * len / 8.0 * sum;
}

double i20(const Expansion& e, double len) {
  double sum = (e.in(2) ? 2.0 * e.z2(0) * e.z1(2) / (3.0 * std::sqrt(5.0)) : 0.0) + e.z1(0) * e.z2(0) / 3.0;
  sum += second_degree_series(
      e, [](double i) { return (i + 1.0) * (i + 2.0); }, [](double i) { return (i + 2.0) * (i + 3.0); },
      [](double i) { return i * i + 3.0 * i - 1.0; }, [](double i) { return i * i + i - 3.0; });
  return -0.25 * len * len * i00(e, len) - len * i10(e, len) + len * len * len / 8.0 * sum;
}

double i11(const Expansion& e, double len) {
  double sum = e.in(1) ? e.z1(1) * e.z2(1) / 3.0 : 0.0;
  sum += second_degree_series(
      e, [](double i) { return (i + 1.0) * (i + 3.0); }, [](double i) { return (i + 1.0) * (i + 3.0); },
      [](double i) { return (i + 1.0) * (i + 1.0); }, [](double i) { return (i + 1.0) * (i + 1.0); });
  return -0.25 * len * len * i00(e, len) - 0.5 * len * (i10(e, len) + i01(e, len)) + len * len * len / 8.0 * sum;
}

double i00_trig(const Expansion& e, double len) {
  double sum = e.z1(0) * e.z2(0);
  for (int r = 1; 2 * r - 1 <= e.p(); ++r) {
    double term = std::sqrt(2.0) * (e.z1(2 * r - 1) * e.z2(0) - e.z1(0) * e.z2(2 * r - 1));
    if (e.in(2 * r)) term += e.z1(2 * r) * e.z2(2 * r - 1) - e.z1(2 * r - 1) * e.z2(2 * r);
    sum += term / (std::numbers::pi * r);
  }
  return 0.5 * len * sum;
}

}  // namespace

ClosedForm parse_closed_form(std::string_view name) {
  for (const auto& entry : form_table()) {
    if (entry.name == name) return entry.form;
  }
  throw std::invalid_argument("unknown closed form: " + std::string(name));
}

std::string_view to_string(ClosedForm form) { return info(form).name; }
BasisKind closed_form_basis(ClosedForm form) { return info(form).basis; }
int closed_form_multiplicity(ClosedForm form) { return static_cast<int>(info(form).exponents.size()); }
std::vector<int> closed_form_exponents(ClosedForm form) { return info(form).exponents; }

double sample_closed_form(ClosedForm form, const GaussianTable& table, const Interval& iv, int p,
                          std::span<const int> components) {
  const int k = closed_form_multiplicity(form);
  if (static_cast<int>(components.size()) != k) throw std::invalid_argument("closed form needs one component per level");
  if (p < 0) throw std::invalid_argument("truncation order must be non-negative");
  if (table.basis != closed_form_basis(form)) throw std::invalid_argument("table basis does not match the closed form");
  if (!(table.iv == iv)) throw std::invalid_argument("table interval does not match");
  for (int c : components) {
    if (c < 0 || c > table.m) throw std::invalid_argument("component index outside the table");
  }
  // Reads never pass index p; single-level Legendre forms stop at their degree.
  const int needed = k == 1 && table.basis == BasisKind::legendre ? std::min(p, info(form).exponents[0]) : p;
  if (needed > table.max_j) throw std::invalid_argument("gaussian table has too few columns for this order");

  const double len = iv.length();
  const Expansion e(table, p, components[0], k == 2 ? components[1] : components[0]);
  auto z = [&](int j) { return e.in(j) ? e.z1(j) : 0.0; };
  switch (form) {
    case ClosedForm::I0:
      return std::sqrt(len) * z(0);
    case ClosedForm::I1:
      return -std::pow(len, 1.5) / 2.0 * (z(0) + z(1) / std::sqrt(3.0));
    case ClosedForm::I2:
      return std::pow(len, 2.5) / 3.0 * (z(0) + std::sqrt(3.0) / 2.0 * z(1) + z(2) / (2.0 * std::sqrt(5.0)));
    case ClosedForm::I3:
      return -std::pow(len, 3.5) / 4.0 *
             (z(0) + 3.0 * std::sqrt(3.0) / 5.0 * z(1) + z(2) / std::sqrt(5.0) + z(3) / (5.0 * std::sqrt(7.0)));
    case ClosedForm::I00:
      return i00(e, len);
    case ClosedForm::I01:
      return i01(e, len);
    case ClosedForm::I10:
      return i10(e, len);
    case ClosedForm::I02:
      return i02(e, len);
    case ClosedForm::I20:
      return i20(e, len);
    case ClosedForm::I11:
      return i11(e, len);
    case ClosedForm::I1t: {
      double series = 0.0;
      for (int r = 1; 2 * r - 1 <= p; ++r) series += z(2 * r - 1) / r;
      return -std::pow(len, 1.5) / 2.0 * (z(0) - std::sqrt(2.0) / std::numbers::pi * series);
    }
    case ClosedForm::I2t: {
      double even = 0.0;
      double odd = 0.0;
      for (int r = 1; 2 * r - 1 <= p; ++r) {
        odd += z(2 * r - 1) / r;
        even += z(2 * r) / (static_cast<double>(r) * r);
      }
      const double pi = std::numbers::pi;
      return std::pow(len, 2.5) *
             (z(0) / 3.0 + even / (std::sqrt(2.0) * pi * pi) - odd / (std::sqrt(2.0) * pi));
    }
    case ClosedForm::I00t:
      return i00_trig(e, len);
  }
  throw std::invalid_argument("unknown closed form");
}

double sample_closed_form(std::string_view name, const GaussianTable& table, const Interval& iv, int p,
                          std::span<const int> components) {
  return sample_closed_form(parse_closed_form(name), table, iv, p, components);
}

}  // namespace strat
