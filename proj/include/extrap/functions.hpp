#pragma once

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extrap/point.hpp"
#include "extrap/special.hpp"

namespace extrap {

enum class FuncTag {
  constant,    // c
  monomial,    // x^k
  sine,        // sin(k x)
  cosine,      // cos(k x)
  chebyshev,   // T_k(x)
  sph_harm,    // real Y_{l,m}(theta, phi)
  target,      // 0.8^x - cos(x) + 2 sin(2x) + 1/(x+1)
  anchor,      // target plus a catalog addition, by id
  combo,       // weighted sum of other handles
};

/// Ids for the built-in anchor catalog.
enum class AnchorId { dec1, dec2, dec3, nd1, nd2, nd3 };

/// A symbolically tagged, evaluable scalar function over interval or
/// spherical points. Handles are small values; combos share their term
/// lists. The tag set is a fixed catalog so handles can be serialized.
class FunctionHandle {
 public:
  using Terms = std::vector<std::pair<double, FunctionHandle>>;

  static FunctionHandle constant(double c) { return FunctionHandle(FuncTag::constant, c); }
  static FunctionHandle monomial(int k) { return FunctionHandle(FuncTag::monomial, 0.0, k); }
  static FunctionHandle sine(int k) { return FunctionHandle(FuncTag::sine, 0.0, k); }
  static FunctionHandle cosine(int k) { return FunctionHandle(FuncTag::cosine, 0.0, k); }
  static FunctionHandle chebyshev(int k) { return FunctionHandle(FuncTag::chebyshev, 0.0, k); }
  static FunctionHandle spherical(int l, int m) {
    if (std::abs(m) > l) throw std::invalid_argument("spherical: need |m| <= l");
    return FunctionHandle(FuncTag::sph_harm, 0.0, l, m);
  }
  static FunctionHandle target() { return FunctionHandle(FuncTag::target); }
  static FunctionHandle anchor(AnchorId id) {
    return FunctionHandle(FuncTag::anchor, 0.0, static_cast<int>(id));
  }
  static FunctionHandle combination(Terms terms) {
    FunctionHandle h(FuncTag::combo);
    h.terms_ = std::make_shared<const Terms>(std::move(terms));
    return h;
  }

  FuncTag tag() const { return tag_; }
  bool spherical_domain() const { return tag_ == FuncTag::sph_harm; }
  const Terms& terms() const {
    if (!terms_) throw std::logic_error("FunctionHandle: not a combination");
    return *terms_;
  }

  double operator()(const Point& p) const {
    switch (tag_) {
      case FuncTag::constant:
        return c_;
      case FuncTag::combo: {
        double s = 0.0;
        for (const auto& [w, h] : *terms_) s += w * h(p);
        return s;
      }
      case FuncTag::sph_harm:
        if (!p.on_sphere)
          throw std::invalid_argument("FunctionHandle: spherical harmonic fed an interval point");
        return real_sph_harm(i_, j_, p.u, p.v);
      default:
        break;
    }
    if (p.on_sphere)
      throw std::invalid_argument("FunctionHandle: interval function fed a spherical point");
    double x = p.u;
    switch (tag_) {
      case FuncTag::monomial:
        return std::pow(x, i_);
      case FuncTag::sine:
        return std::sin(i_ * x);
      case FuncTag::cosine:
        return std::cos(i_ * x);
      case FuncTag::chebyshev:
        return chebyshev_t(i_, x);
      case FuncTag::target:
        return target_value(x);
      case FuncTag::anchor:
        return target_value(x) + anchor_addition(static_cast<AnchorId>(i_), x);
      default:
        throw std::logic_error("FunctionHandle: bad tag");
    }
  }

  /// Stable serialization tag. Combinations have no symbol; they are only
  /// representable through a mixed family's mixing matrix.
  std::string symbol() const {
    switch (tag_) {
      case FuncTag::constant:
        return c_ == 1.0 ? "const" : "const:" + format_double(c_);
      case FuncTag::monomial:
        return "pow:" + std::to_string(i_);
      case FuncTag::sine:
        return "sin:" + std::to_string(i_);
      case FuncTag::cosine:
        return "cos:" + std::to_string(i_);
      case FuncTag::chebyshev:
        return "cheb:" + std::to_string(i_);
      case FuncTag::sph_harm:
        return "sph:" + std::to_string(i_) + ":" + std::to_string(j_);
      case FuncTag::target:
        return "target";
      case FuncTag::anchor:
        return std::string("anchor:") + anchor_name(static_cast<AnchorId>(i_));
      case FuncTag::combo:
        throw std::invalid_argument("FunctionHandle: combination has no symbol");
    }
    throw std::logic_error("FunctionHandle: bad tag");
  }

  static FunctionHandle parse(const std::string& sym) {
    auto field = [&sym](std::size_t i) {
      std::size_t start = 0;
      for (std::size_t n = 0; n < i; ++n) {
        start = sym.find(':', start);
        if (start == std::string::npos) throw std::invalid_argument("bad symbol: " + sym);
        ++start;
      }
      std::size_t end = sym.find(':', start);
      return sym.substr(start, end == std::string::npos ? std::string::npos : end - start);
    };
    std::string head = field(0);
    if (head == "const") return constant(sym == "const" ? 1.0 : std::stod(field(1)));
    if (head == "pow") return monomial(std::stoi(field(1)));
    if (head == "sin") return sine(std::stoi(field(1)));
    if (head == "cos") return cosine(std::stoi(field(1)));
    if (head == "cheb") return chebyshev(std::stoi(field(1)));
    if (head == "sph") return spherical(std::stoi(field(1)), std::stoi(field(2)));
    if (head == "target") return target();
    if (head == "anchor") {
      std::string name = field(1);
      for (int id = 0; id < 6; ++id)
        if (name == anchor_name(static_cast<AnchorId>(id)))
          return anchor(static_cast<AnchorId>(id));
    }
    throw std::invalid_argument("unknown function symbol: " + sym);
  }

  static double target_value(double x) {
    return std::pow(0.8, x) - std::cos(x) + 2.0 * std::sin(2.0 * x) + 1.0 / (x + 1.0);
  }

  static double anchor_addition(AnchorId id, double x) {
    switch (id) {
      case AnchorId::dec1:
        return 2.0 / (x + 1.0);
      case AnchorId::dec2:
        return 3.0 * std::sin(x) / (x + 1.0);
      case AnchorId::dec3:
        return std::pow(0.9, x);
      case AnchorId::nd1:
        return x / 10.0;
      case AnchorId::nd2: {
        double s = std::sin(x);
        return s * s;
      }
      case AnchorId::nd3: {
        double lg = std::log(x + 1.0);
        return lg * lg / 5.0;
      }
    }
    throw std::logic_error("bad anchor id");
  }

  static const char* anchor_name(AnchorId id) {
    switch (id) {
      case AnchorId::dec1: return "dec1";
      case AnchorId::dec2: return "dec2";
      case AnchorId::dec3: return "dec3";
      case AnchorId::nd1: return "nd1";
      case AnchorId::nd2: return "nd2";
      case AnchorId::nd3: return "nd3";
    }
    throw std::logic_error("bad anchor id");
  }

 private:
  explicit FunctionHandle(FuncTag tag, double c = 0.0, int i = 0, int j = 0)
      : tag_(tag), c_(c), i_(i), j_(j) {}

  static std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }

  FuncTag tag_;
  double c_;
  int i_;
  int j_;
  std::shared_ptr<const Terms> terms_;
};

}  // namespace extrap
