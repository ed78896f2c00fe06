#include "cayley/builtin_patches.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "cayley/error.hpp"

namespace cayley {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Params {
 public:
  Params(std::string_view patch, const PatchParams& values, std::set<std::string> allowed)
      : patch_(patch), values_(values) {
    allowed.insert("box");
    for (const auto& [key, v] : values_) {
      if (!allowed.count(key)) {
        throw Error(ErrorCode::invalid_argument, "patch '" + patch_ + "' has no parameter '" + key + "'");
      }
      for (double x : v) {
        if (!std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "parameter '" + key + "' is not finite");
      }
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  double scalar(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second.size() != 1) throw Error(ErrorCode::invalid_argument, "parameter '" + key + "' must be a number");
    return it->second.front();
  }

  std::vector<double> list(const std::string& key, std::size_t size, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::vector<double>(size, fallback);
    if (it->second.size() == 1) return std::vector<double>(size, it->second.front());
    if (it->second.size() != size) {
      throw Error(ErrorCode::invalid_argument,
                  "parameter '" + key + "' must have 1 or " + std::to_string(size) + " entries");
    }
    return it->second;
  }

  ParameterBox box(double lo, double hi) const {
    const std::vector<double> b = has("box") ? values_.at("box") : std::vector<double>{lo, hi};
    if (b.size() != 2 || !(b[1] > b[0])) throw Error(ErrorCode::invalid_argument, "'box' must be [lower, upper]");
    ParameterBox out;
    out.lower = Param4::Constant(b[0]);
    out.upper = Param4::Constant(b[1]);
    return out;
  }

 private:
  std::string patch_;
  const PatchParams& values_;
};

ParameterBox torus_box() {
  ParameterBox box;
  box.lower = Param4::Zero();
  box.upper = Param4::Constant(kTwoPi);
  box.periodic = {true, true, true, true};
  return box;
}

Vector8 from_complex(const std::array<std::complex<double>, 4>& z) {
  Vector8 v;
  for (int k = 0; k < 4; ++k) {
    v[2 * k] = z[static_cast<std::size_t>(k)].real();
    v[2 * k + 1] = z[static_cast<std::size_t>(k)].imag();
  }
  return v;
}

Patch affine(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  Frame4 a;
  if (p.has("frame")) {
    const std::vector<double> f = p.list("frame", 32, 0.0);
    for (int c = 0; c < 4; ++c) {
      for (int r = 0; r < 8; ++r) a(r, c) = f[static_cast<std::size_t>(8 * c + r)];
    }
  } else {
    const double lambda = p.scalar("lambda", 0.0);
    if (lambda < 0.0 || lambda > 1.0) throw Error(ErrorCode::invalid_argument, "'lambda' must lie in [0, 1]");
    const std::complex<double> rot = std::polar(1.0, p.scalar("phase", 0.0) / 4.0);
    Frame4 u = Frame4::Zero();
    for (int k = 0; k < 4; ++k) {
      u(2 * k, k) = rot.real();
      u(2 * k + 1, k) = rot.imag();
    }
    const double theta = std::acos(lambda);
    a = plane_from_angles(u, theta, theta).frame();
  }
  const std::vector<double> off = p.list("offset", 8, 0.0);
  Vector8 offset;
  for (int r = 0; r < 8; ++r) offset[r] = off[static_cast<std::size_t>(r)];
  return Patch(
      "affine", [a, offset](const Param4& t) { return Vector8(offset + a * t); }, p.box(-0.5, 0.5),
      std::move(chart), grid);
}

Patch complex_graph(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  const double a = p.scalar("a", 0.5);
  const double b = p.scalar("b", 0.1);
  const double c = p.scalar("c", 0.3);
  return Patch(
      "complex-graph",
      [a, b, c](const Param4& t) {
        const std::complex<double> z1(t[0], t[1]);
        const std::complex<double> z2(t[2], t[3]);
        return from_complex({z1, z2, a * z1 * z1 + b * z1 * z1 * z1, c * z1 * z2});
      },
      p.box(-0.5, 0.5), std::move(chart), grid);
}

Patch lagrangian_graph(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  const double a = p.scalar("a", 0.25);
  const double b = p.scalar("b", 0.5);
  return Patch(
      "lagrangian-graph",
      [a, b](const Param4& x) {
        const double r2 = x.squaredNorm();
        Vector8 v;
        for (int k = 0; k < 4; ++k) {
          double prod = 1.0;
          for (int j = 0; j < 4; ++j) {
            if (j != k) prod *= x[j];
          }
          v[2 * k] = x[k];
          v[2 * k + 1] = a * r2 * x[k] + b * prod;
        }
        return v;
      },
      p.box(-0.5, 0.5), std::move(chart), grid);
}

Patch product_torus(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  const std::vector<double> r = p.list("radii", 4, 1.0);
  const double warp = p.scalar("warp", 0.0);
  if (std::abs(warp) >= 1.0) throw Error(ErrorCode::invalid_argument, "'warp' must lie in (-1, 1)");
  for (double x : r) {
    if (!(x > 0.0)) throw Error(ErrorCode::invalid_argument, "torus radii must be positive");
  }
  return Patch(
      "product-torus",
      [r, warp](const Param4& psi) {
        std::array<std::complex<double>, 4> z;
        for (int k = 0; k < 4; ++k) {
          const double phi = psi[k] + warp * std::sin(psi[(k + 1) % 4]);
          z[static_cast<std::size_t>(k)] = std::polar(r[static_cast<std::size_t>(k)], phi);
        }
        return from_complex(z);
      },
      torus_box(), std::move(chart), grid);
}

Patch hamiltonian_torus(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  const std::vector<double> r = p.list("radii", 4, 1.0);
  const double eps = p.scalar("epsilon", 0.05);
  for (double x : r) {
    if (!(x * x > 2.0 * std::abs(eps))) throw Error(ErrorCode::invalid_argument, "'epsilon' too large for the radii");
  }
  return Patch(
      "hamiltonian-torus",
      [r, eps](const Param4& s) {
        const std::array<double, 4> ds{std::cos(s[0]) * std::cos(s[1]), -std::sin(s[0]) * std::sin(s[1]),
                                       0.5 * std::cos(s[2] + s[3]), 0.5 * std::cos(s[2] + s[3])};
        std::array<std::complex<double>, 4> z;
        for (std::size_t k = 0; k < 4; ++k) {
          z[k] = std::polar(std::sqrt(r[k] * r[k] + 2.0 * eps * ds[k]), s[static_cast<int>(k)]);
        }
        return from_complex(z);
      },
      torus_box(), std::move(chart), grid);
}

Patch complex_torus(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  ParameterBox box = p.box(0.0, 1.0);
  box.periodic = {true, true, true, true};
  return Patch(
      "complex-torus",
      [](const Param4& t) {
        Vector8 v = Vector8::Zero();
        v.head<4>() = t;
        return v;
      },
      box, std::move(chart), grid);
}

Patch fs_real_slice(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  return Patch(
      "fs-real-slice",
      [](const Param4& t) {
        Vector8 v = Vector8::Zero();
        for (int k = 0; k < 4; ++k) v[2 * k] = t[k];
        return v;
      },
      p.box(-0.6, 0.6), std::move(chart), grid);
}

Patch fs_complex_slice(const Params& p, std::shared_ptr<const KahlerChart> chart, PatchGrid grid) {
  return Patch(
      "fs-complex-slice",
      [](const Param4& t) {
        Vector8 v = Vector8::Zero();
        v.head<4>() = t;
        return v;
      },
      p.box(-0.6, 0.6), std::move(chart), grid);
}

}  // namespace

const std::vector<std::string>& builtin_patch_names() {
  static const std::vector<std::string> names{"affine",           "complex-graph", "lagrangian-graph",
                                              "product-torus",    "hamiltonian-torus", "complex-torus",
                                              "fs-real-slice",    "fs-complex-slice"};
  return names;
}

std::string default_ambient(std::string_view name) {
  return name.starts_with("fs-") ? "fubini-study" : "flat";
}

std::shared_ptr<const KahlerChart> chart_by_name(std::string_view name, ChartSteps steps) {
  if (name == "flat") return std::make_shared<const KahlerChart>(flat_chart(steps));
  if (name == "fubini-study") return std::make_shared<const KahlerChart>(fubini_study_chart(1.0, 2.0, steps));
  throw Error(ErrorCode::invalid_argument, "unknown ambient '" + std::string(name) + "'");
}

Patch builtin_patch(std::string_view name, const PatchParams& params, std::shared_ptr<const KahlerChart> chart,
                    PatchGrid grid) {
  if (!chart) chart = chart_by_name(default_ambient(name));
  if (name == "affine") return affine(Params(name, params, {"frame", "lambda", "phase", "offset"}), chart, grid);
  if (name == "complex-graph") return complex_graph(Params(name, params, {"a", "b", "c"}), chart, grid);
  if (name == "lagrangian-graph") return lagrangian_graph(Params(name, params, {"a", "b"}), chart, grid);
  if (name == "product-torus") return product_torus(Params(name, params, {"radii", "warp"}), chart, grid);
  if (name == "hamiltonian-torus") {
    return hamiltonian_torus(Params(name, params, {"radii", "epsilon"}), chart, grid);
  }
  if (name == "complex-torus") return complex_torus(Params(name, params, {}), chart, grid);
  if (name == "fs-real-slice") return fs_real_slice(Params(name, params, {}), chart, grid);
  if (name == "fs-complex-slice") return fs_complex_slice(Params(name, params, {}), chart, grid);
  throw Error(ErrorCode::invalid_argument, "unknown patch '" + std::string(name) + "'");
}

}  // namespace cayley
