#include "hm/gallery.hpp"

#include <cmath>
#include <set>

#include "hm/solver.hpp"

namespace hm {

namespace {

using Params = std::map<std::string, std::string>;

class ParamReader {
 public:
  ParamReader(std::string item, const Params& given) : item_(std::move(item)), given_(given) {}

  std::string text(const std::string& key, const std::string& fallback) {
    used_.insert(key);
    const auto it = given_.find(key);
    return it == given_.end() ? fallback : it->second;
  }

  int integer(const std::string& key, int fallback, int min) {
    const std::string t = text(key, std::to_string(fallback));
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(t, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != t.size()) throw Error(ErrorKind::BadParams, item_ + ": '" + key + "' must be an integer");
    if (v < min)
      throw Error(ErrorKind::BadParams, item_ + ": '" + key + "' must be at least " + std::to_string(min));
    return v;
  }

  std::vector<std::string> list(const std::string& key, const std::vector<std::string>& fallback) {
    used_.insert(key);
    const auto it = given_.find(key);
    if (it == given_.end()) return fallback;
    std::vector<std::string> out;
    std::string cur;
    for (char c : it->second) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    out.push_back(cur);
    return out;
  }

  /// Recorded parameters, defaults included.
  Params resolved;

  void finish() const {
    for (const auto& [k, v] : given_)
      if (!used_.count(k)) throw Error(ErrorKind::BadParams, item_ + ": unknown parameter '" + k + "'");
  }

 private:
  std::string item_;
  const Params& given_;
  std::set<std::string> used_;
};

double number_param(const std::string& item, const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw Error(ErrorKind::BadParams, item + ": '" + key + "' must be numeric");
  return v;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k];
  return out;
}

// Fixed generic coordinates, away from the symmetric special points.
std::vector<double> generic_center(std::size_t n) {
  static const double base[] = {0.31, -0.22, 0.45, 0.13, -0.37, 0.52, 0.27, -0.18, 0.41, -0.29};
  std::vector<double> c;
  for (std::size_t k = 0; k < n; ++k) c.push_back(base[k % 10] + 0.07 * static_cast<double>(k / 10));
  return c;
}

std::vector<std::string> default_mu(int m) {
  static const char* cycle[] = {"z1", "1", "z1^2", "2*z1", "z1+1", "3", "z1^3", "1-z1", "2", "z1^2+1"};
  std::vector<std::string> mu;
  for (std::size_t k = 0; k < mu_count(m); ++k) mu.push_back(cycle[k % 10]);
  return mu;
}

std::vector<std::string> default_alpha(int n) {
  static const char* cycle[] = {"1", "z1", "1", "z1^2", "2", "z1+1"};
  std::vector<std::string> a;
  for (int k = 0; k < n; ++k) a.push_back(cycle[k % 6]);
  return a;
}

std::string linear_form(const std::vector<std::string>& alpha, const char* var) {
  std::string out;
  for (std::size_t k = 0; k < alpha.size(); ++k)
    out += (k ? " + " : "") + std::string("(") + alpha[k] + ")*" + var + std::to_string(k + 1);
  return out;
}

Region box(std::vector<double> center, double hw) { return {RegionKind::Box, std::move(center), {hw}, 1.0}; }

Region sphere(std::vector<double> center, double hw) {
  return {RegionKind::Sphere, std::move(center), {hw}, 1.0};
}

// Seeds the item with the regular solution at the first grid point nearest
// to `guess`.
void seed(GalleryItem& item, std::vector<cplx> guess) {
  const ImplicitSystem sys = build_system(item.spec);
  const auto grid = make_point_grid(sys, item.spec.region, item.spec.grid);
  const SolveResult r = solve_at(sys, grid.front(), guess);
  if (!r.converged)
    throw Error(ErrorKind::BadParams, item.name + ": no regular solution at the first grid point (" +
                                          to_string(r.status) + " " + r.message + ")");
  item.spec.seed_z = r.z;
}

void require_null_square_sum(const GalleryItem& item) {
  const Poly s = linear_coefficient_square_sum(build_system(item.spec));
  double mag = 0.0;
  for (const auto& c : s.coeffs()) mag = std::max(mag, std::abs(c));
  if (mag > 1e-12)
    throw Error(ErrorKind::Validation, item.name + ": sum of squared coefficients does not vanish");
}

GalleryItem make(const std::string& name, ParamReader& pr, std::vector<cplx>& guess) {
  GalleryItem it;
  it.name = name;
  ProblemSpec& s = it.spec;
  s.name = name;

  if (name == "identity") {
    s.m = pr.integer("m", 2, 2);
    s.mode = Mode::ExplicitH;
    s.mu.assign(mu_count(s.m), "0");
    for (int k = 1; k <= s.m; ++k) s.h.push_back("z" + std::to_string(k));
    s.region = box(generic_center(2 * static_cast<std::size_t>(s.m)), 0.5);
    s.grid = 6;
    s.checks = {"verify"};
    pr.resolved["m"] = std::to_string(s.m);
    guess = std::vector<cplx>(static_cast<std::size_t>(s.m));
    return it;
  }
  if (name == "ex4d") {
    s.m = 2;
    s.mode = Mode::Psi;
    s.mu = {pr.text("mu1", "z1")};
    s.psi = pr.text("psi", "w1^2 + w2 - z1");
    s.region = box({0.4, 0.3, -0.2, 0.5}, 0.1);
    s.grid = 6;
    s.checks = {"verify", "superminimal"};
    pr.resolved = {{"mu1", s.mu[0]}, {"psi", s.psi}};
    guess = {0.0};
    return it;
  }
  if (name == "tgeven" || name == "tgoddsphere") {
    const bool homogeneous = name == "tgoddsphere";
    s.m = pr.integer("m", homogeneous ? 3 : 2, 2);
    s.mode = Mode::Psi;
    const auto alpha = pr.list("alpha", default_alpha(s.m));
    if (alpha.size() != static_cast<std::size_t>(s.m))
      throw Error(ErrorKind::BadParams, name + ": 'alpha' needs m entries");
    s.mu = pr.list("mu", default_mu(s.m));
    s.psi = linear_form(alpha, "w") + (homogeneous ? "" : " - 1");
    const auto n = 2 * static_cast<std::size_t>(s.m);
    s.region = homogeneous ? sphere(generic_center(n), 0.15) : box(generic_center(n), 0.1);
    s.grid = s.m == 2 ? 6 : 4;
    s.checks = homogeneous ? std::vector<std::string>{"verify", "sphere-reduction", "homogeneity"}
                           : std::vector<std::string>{"verify", "superminimal"};
    pr.resolved = {{"m", std::to_string(s.m)}, {"alpha", join(alpha)}, {"mu", join(s.mu)}};
    require_null_square_sum(it);
    guess = {0.0};
    return it;
  }
  if (name == "ex6d") {
    s.m = 3;
    s.mode = Mode::Psi;
    s.mu = {"z1", "z1", "0"};
    s.psi = "w1*w2 - w3";
    s.region = box({0.1, 0.1, 1.0, 0.1, 1.0, -0.1}, 0.1);
    s.grid = 4;
    s.checks = {"verify", "fullness", "superminimal"};
    guess = {-0.5};
    return it;
  }
  if (name == "exR3") {
    s.m = 2;
    s.mode = Mode::Phi;
    s.mu = {pr.text("mu1", "z1")};
    s.phi = pr.text("phi", "u1 - z1");
    s.region = box({0.3, 0.5, 0.2}, 0.1);
    s.grid = 10;
    s.checks = {"verify", "superminimal"};
    pr.resolved = {{"mu1", s.mu[0]}, {"phi", s.phi}};
    guess = {0.0};
    return it;
  }
  if (name == "tgodd") {
    s.m = pr.integer("m", 3, 2);
    s.mode = Mode::Phi;
    const auto alpha = pr.list("alpha", default_alpha(s.m - 1));
    if (alpha.size() != static_cast<std::size_t>(s.m - 1))
      throw Error(ErrorKind::BadParams, name + ": 'alpha' needs m-1 entries");
    s.mu = pr.list("mu", default_mu(s.m));
    s.phi = linear_form(alpha, "u") + " - 1";
    s.region = box(generic_center(2 * static_cast<std::size_t>(s.m) - 1), 0.1);
    s.grid = s.m == 2 ? 10 : 4;
    s.checks = {"verify", "superminimal"};
    pr.resolved = {{"m", std::to_string(s.m)}, {"alpha", join(alpha)}, {"mu", join(s.mu)}};
    require_null_square_sum(it);
    guess = {0.0};
    return it;
  }
  if (name == "exR5") {
    s.m = 3;
    s.mode = Mode::Phi;
    s.mu = {"z1", "z1", "0"};
    s.phi = "u1*u2 - 1";
    s.region = box({0.2, 0.6, 0.1, 0.5, -0.3}, 0.1);
    s.grid = 4;
    s.checks = {"verify", "fullness", "superminimal"};
    guess = {0.0};
    return it;
  }
  if (name == "exS5") {
    s.m = 3;
    s.mode = Mode::Psi;
    s.mu = pr.list("mu", {"z1", "1", "z1^2"});
    if (s.mu.size() != 3) throw Error(ErrorKind::BadParams, name + ": 'mu' needs 3 entries");
    s.psi = "w1^2 - z1^2*(w2^2 + w3^2)";
    s.region = sphere(generic_center(6), 0.15);
    s.grid = 4;
    s.checks = {"verify", "sphere-reduction", "homogeneity"};
    pr.resolved = {{"mu", join(s.mu)}};
    guess = {0.5};
    return it;
  }
  if (name == "exS6") {
    s.m = 4;
    s.mode = Mode::Phi;
    s.mu = {"z1", "z1", "z1", "z1^2", "z1^2", "z1^2"};
    s.phi = "u1^2 + u2*u3";
    s.region = sphere(generic_center(7), 0.08);
    s.grid = 3;
    s.checks = {"verify", "sphere-reduction", "homogeneity"};
    guess = {0.5};
    return it;
  }
  if (name == "exS7") {
    const int r = pr.integer("r", 1, 1);
    const int p = pr.integer("p", 1, 1);
    const int q = pr.integer("q", 3, 1);
    const std::string mu1 = pr.text("mu1", "z1*z2");
    const std::string P = std::to_string(p), Q = std::to_string(q), R = std::to_string(r);
    s.m = 4;
    s.mode = Mode::ExplicitH;
    s.mu = {mu1, "z1", "0", "0", "z1^" + P, "z1^" + Q};
    s.h = {"z4", "z3", "z1^" + R + "*z2", "z2"};
    s.z1_equation = Z1Equation{{"0", "z1", "0", "0", "z1^" + P, "z1^" + Q}, "z1^" + R + "*w4 - w3"};
    s.region = sphere(generic_center(8), 0.1);
    s.grid = 3;
    s.checks = {"verify", "sphere-reduction", "fullness"};
    pr.resolved = {{"r", R}, {"p", P}, {"q", Q}, {"mu1", mu1}};
    if (!(q >= p + 2)) it.notes.push_back("q < p + 2: outside the sufficient fullness regime r = 1, p >= 1, q >= p + 2");
    if (r != 1) it.notes.push_back("r != 1: outside the sufficient fullness regime r = 1, p >= 1, q >= p + 2");
    it.notes.push_back(std::string("algebraic fullness condition: ") +
                       (s7_only_trivial_solution(r, p, q) ? "only the trivial solution" : "nontrivial solutions"));
    guess = {0.5, 0.0, 0.0, 0.0};
    return it;
  }
  if (name == "nonsuper2") {
    s.m = 2;
    s.mode = Mode::ExplicitH;
    s.mu = {pr.text("mu1", "z1*z2")};
    s.h = {pr.text("h1", "2*z2 + z1^2"), pr.text("h2", "3*z1 + z2")};
    pr.resolved = {{"mu1", s.mu[0]}, {"h1", s.h[0]}, {"h2", s.h[1]}};
    const std::vector<cplx> z0{{0.3, 0.2}, {-0.4, 0.1}};
    const PointQ q0 = point_for_solution(build_system(s), z0);
    s.region = box({q0.q[0].real(), q0.q[0].imag(), q0.q[1].real(), q0.q[1].imag()}, 0.05);
    s.grid = 6;
    s.checks = {"verify"};
    guess = z0;
    return it;
  }
  throw Error(ErrorKind::UnknownItem, "no gallery item named '" + name + "'");
}

}  // namespace

std::vector<std::string> gallery_names() {
  return {"identity", "ex4d",  "tgeven", "ex6d", "exR3", "tgodd",
          "exR5",     "tgoddsphere", "exS5", "exS6", "exS7", "nonsuper2"};
}

GalleryItem build_gallery(const std::string& name, const std::map<std::string, std::string>& params) {
  ParamReader pr(name, params);
  std::vector<cplx> guess;
  GalleryItem it = make(name, pr, guess);
  Region& region = it.spec.region;
  const auto center = pr.list("center", {});
  if (!center.empty()) {
    region.center.clear();
    for (const auto& c : center) region.center.push_back(number_param(name, "center", c));
    pr.resolved["center"] = join(center);
  }
  const std::string hw = pr.text("half_width", "");
  if (!hw.empty()) {
    region.half_widths = {number_param(name, "half_width", hw)};
    pr.resolved["half_width"] = hw;
  }
  it.spec.grid = pr.integer("grid", it.spec.grid, 2);
  pr.finish();
  seed(it, guess);
  it.params = pr.resolved;
  it.spec.params = pr.resolved;
  return it;
}

Poly linear_coefficient_square_sum(const ImplicitSystem& sys) {
  const std::size_t m = static_cast<std::size_t>(sys.m());
  const std::vector<cplx> zero(m);
  const Poly base = residual_poly(sys, zero, zero);
  Poly sum;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<cplx> e(m);
    e[j] = 1.0;
    const Poly a = residual_poly(sys, e, zero) - base;
    const Poly b = residual_poly(sys, zero, e) - base;
    sum += a * b;
  }
  return sum;
}

bool s7_only_trivial_solution(int r, int p, int q) {
  // Terms (exponent of z, index of α (0-based), conjugated, sign).
  struct Term {
    int power;
    int index;
    bool conj;
    double sign;
  };
  const Term terms[] = {{r + q, 2, true, 1.0}, {r + p, 1, true, 1.0}, {r, 3, false, 1.0},
                        {q, 3, true, 1.0},     {1, 0, true, -1.0},    {0, 2, false, -1.0}};
  std::map<int, std::vector<Term>> groups;
  for (const auto& t : terms) groups[t.power].push_back(t);
  // Unknowns (Re α1..α4, Im α1..α4); each power contributes a real and an
  // imaginary equation.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * static_cast<Eigen::Index>(groups.size()), 8);
  Eigen::Index row = 0;
  for (const auto& [power, group] : groups) {
    for (const auto& t : group) {
      A(row, t.index) += t.sign;
      A(row + 1, 4 + t.index) += t.conj ? -t.sign : t.sign;
    }
    row += 2;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  return lu.rank() == 8;
}

}  // namespace hm
