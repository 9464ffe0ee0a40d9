#include "h22/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace h22 {
namespace {

constexpr double kLn2 = 0.6931471805599453;

void check_vertex(int v, int n, const char* what) {
  if (v == kPinnedVertex) return;
  if (v < 0 || v >= n) throw std::invalid_argument(std::string(what) + ": vertex out of range");
}

// Union-find over {0..n-1} plus rho at index n.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  }
  void join(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

PinnedGraph::PinnedGraph(Eigen::MatrixXd weights, Eigen::VectorXd pinning,
                         std::vector<std::string> labels)
    : weights_(std::move(weights)), pinning_(std::move(pinning)), labels_(std::move(labels)) {
  const int n = static_cast<int>(pinning_.size());
  if (n < 1) throw std::invalid_argument("PinnedGraph: empty vertex set");
  if (weights_.rows() != n || weights_.cols() != n)
    throw std::invalid_argument("PinnedGraph: weight matrix shape mismatch");
  if (!labels_.empty() && static_cast<int>(labels_.size()) != n)
    throw std::invalid_argument("PinnedGraph: label count mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(pinning_[i] >= 0.0)) throw std::invalid_argument("PinnedGraph: negative pinning");
    if (weights_(i, i) != 0.0) throw std::invalid_argument("PinnedGraph: nonzero diagonal");
    for (int j = 0; j < n; ++j) {
      if (!(weights_(i, j) >= 0.0)) throw std::invalid_argument("PinnedGraph: negative weight");
      if (weights_(i, j) != weights_(j, i))
        throw std::invalid_argument("PinnedGraph: weights not symmetric");
    }
  }
  if (pinning_.sum() <= 0.0)
    throw std::invalid_argument("PinnedGraph: pinning vanishes identically");
}

double PinnedGraph::weight(int i, int j) const {
  const int n = size();
  check_vertex(i, n, "weight");
  check_vertex(j, n, "weight");
  if (i == j) throw std::invalid_argument("weight: self edge");
  if (i == kPinnedVertex) return pinning_[j];
  if (j == kPinnedVertex) return pinning_[i];
  return weights_(i, j);
}

bool PinnedGraph::positive_graph_connected() const {
  const int n = size();
  DisjointSet ds(n + 1);  // rho at n
  for (int i = 0; i < n; ++i) {
    if (pinning_[i] > 0.0) ds.join(i, n);
    for (int j = i + 1; j < n; ++j)
      if (weights_(i, j) > 0.0) ds.join(i, j);
  }
  const int root = ds.find(n);
  for (int i = 0; i < n; ++i)
    if (ds.find(i) != root) return false;
  return true;
}

double PinnedGraph::max_weight() const {
  double m = pinning_.maxCoeff();
  if (size() > 1) m = std::max(m, weights_.maxCoeff());
  return m;
}

double PinnedGraph::min_positive_pinning() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < size(); ++i)
    if (pinning_[i] > 0.0) m = std::min(m, pinning_[i]);
  return m;
}

void EdgeSystem::add(int a, int b) {
  if (a == b) throw std::invalid_argument("EdgeSystem: self edge");
  if (b != kPinnedVertex && a > b) std::swap(a, b);
  if (a == kPinnedVertex) std::swap(a, b);  // rho goes to the tail
  const std::pair<int, int> key{a, b};
  if (index_.count(key)) return;
  index_[key] = 0;  // fixed up in finalize()
  edges_.push_back(OrientedEdge{a, b});
}

void EdgeSystem::finalize() {
  std::sort(edges_.begin(), edges_.end(), [](const OrientedEdge& x, const OrientedEdge& y) {
    if (x.is_pinning() != y.is_pinning()) return !x.is_pinning();
    if (x.head != y.head) return x.head < y.head;
    return x.tail < y.tail;
  });
  for (int e = 0; e < count(); ++e)
    index_[{edges_[static_cast<size_t>(e)].head, edges_[static_cast<size_t>(e)].tail}] = e;
}

EdgeSystem EdgeSystem::positive_edges(const PinnedGraph& graph) {
  return with_extra(graph, {});
}

EdgeSystem EdgeSystem::with_extra(const PinnedGraph& graph,
                                  const std::vector<std::pair<int, int>>& extra) {
  EdgeSystem sys;
  const int n = graph.size();
  for (int i = 0; i < n; ++i) {
    if (graph.pinning()[i] > 0.0) sys.add(i, kPinnedVertex);
    for (int j = i + 1; j < n; ++j)
      if (graph.weights()(i, j) > 0.0) sys.add(i, j);
  }
  for (const auto& [a, b] : extra) {
    check_vertex(a, n, "EdgeSystem");
    check_vertex(b, n, "EdgeSystem");
    sys.add(a, b);
  }
  sys.finalize();
  return sys;
}

int EdgeSystem::find(int a, int b) const {
  if (b != kPinnedVertex && a != kPinnedVertex && a > b) std::swap(a, b);
  if (a == kPinnedVertex) std::swap(a, b);
  const auto it = index_.find({a, b});
  return it == index_.end() ? -1 : it->second;
}

Eigen::VectorXd EdgeSystem::weights(const PinnedGraph& graph) const {
  Eigen::VectorXd w(count());
  for (int e = 0; e < count(); ++e)
    w[e] = graph.weight(edges_[static_cast<size_t>(e)].head, edges_[static_cast<size_t>(e)].tail);
  return w;
}

Eigen::MatrixXd EdgeSystem::signed_incidence(int n) const {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, count());
  for (int e = 0; e < count(); ++e) {
    const OrientedEdge& ed = edges_[static_cast<size_t>(e)];
    f(ed.head, e) = 1.0;
    if (!ed.is_pinning()) f(ed.tail, e) = -1.0;
  }
  return f;
}

int hierarchical_distance(std::uint64_t a, std::uint64_t b) {
  return a == b ? 0 : std::bit_width(a ^ b);
}

std::uint64_t box_to_binary(const std::vector<int>& point, int dim, int levels) {
  if (static_cast<int>(point.size()) != dim)
    throw std::invalid_argument("box_to_binary: coordinate count mismatch");
  if (dim < 1 || levels < 1 || dim * levels > 62)
    throw std::invalid_argument("box_to_binary: bad dimensions");
  const int side = 1 << levels;
  std::uint64_t code = 0;
  for (int c = 0; c < dim; ++c) {
    if (point[static_cast<size_t>(c)] < 0 || point[static_cast<size_t>(c)] >= side)
      throw std::invalid_argument("box_to_binary: coordinate out of range");
    for (int k = 0; k < levels; ++k) {
      const std::uint64_t bit = (static_cast<std::uint64_t>(point[static_cast<size_t>(c)]) >> k) & 1u;
      code |= bit << (dim * k + c);
    }
  }
  return code;
}

std::vector<int> binary_to_box(std::uint64_t code, int dim, int levels) {
  if (dim < 1 || levels < 1 || dim * levels > 62)
    throw std::invalid_argument("binary_to_box: bad dimensions");
  if (code >> (dim * levels))
    throw std::invalid_argument("binary_to_box: code out of range");
  std::vector<int> point(static_cast<size_t>(dim), 0);
  for (int c = 0; c < dim; ++c)
    for (int k = 0; k < levels; ++k)
      point[static_cast<size_t>(c)] |= static_cast<int>((code >> (dim * k + c)) & 1u) << k;
  return point;
}

namespace {

// Upper incomplete gamma Gamma(s, x) for s > 0, x >= 0 (series / continued
// fraction split as in the classic gammp/gammq routines).
double upper_incomplete_gamma(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw std::invalid_argument("upper_incomplete_gamma: bad arguments");
  if (x == 0.0) return std::tgamma(s);
  const double lg = std::lgamma(s);
  if (x < s + 1.0) {
    double term = 1.0 / s;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= x / (s + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double lower = sum * std::exp(-x + s * std::log(x));
    return std::exp(lg) - lower;
  }
  // Lentz continued fraction for Gamma(s,x) * e^x * x^{-s}
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double f = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return f * std::exp(-x + s * std::log(x));
}

struct TailEstimate {
  double value = 0.0;
  double band = 0.0;  // certified two-sided error
};

// sum_{r > R} r^{-p} (ln r)^alpha  via the midpoint integral with a convexity
// remainder; requires ln(R + 1/2) >= max(2, 3 alpha / p).
TailEstimate tail_power_log_sum(double p, double alpha, double radius) {
  const double t0 = radius + 0.5;
  const double y0 = std::log(t0);
  if (y0 < std::max(2.0, 3.0 * alpha / p))
    throw std::invalid_argument("tail_power_log_sum: radius too small for certified tail");
  TailEstimate out;
  out.value = upper_incomplete_gamma(alpha + 1.0, (p - 1.0) * y0) /
              std::pow(p - 1.0, alpha + 1.0);
  const double g = std::pow(t0, -p) * std::pow(y0, alpha);
  const double gd = g / t0 * (p * y0 - alpha) / y0;
  const double gdd = g / (t0 * t0) *
                     (p * (p + 1.0) * y0 * y0 - alpha * (2.0 * p + 1.0) * y0 +
                      alpha * (alpha - 1.0)) /
                     (y0 * y0);
  out.band = (gdd + gd) / 12.0 + 1e-13 * out.value;  // factor-2 slack on the 1/24 bound
  return out;
}

// Coefficients c_j of the shell cardinality (2r+1)^d - (2r-1)^d = sum c_j r^j.
std::vector<double> shell_polynomial(int dim) {
  switch (dim) {
    case 1: return {2.0};
    case 2: return {0.0, 8.0};
    case 3: return {2.0, 0.0, 24.0};
    default: throw std::invalid_argument("shell_polynomial: dim must be 1, 2 or 3");
  }
}

double shell_count(int dim, long r) {
  double a = 2.0 * static_cast<double>(r) + 1.0;
  double b = 2.0 * static_cast<double>(r) - 1.0;
  return std::pow(a, dim) - std::pow(b, dim);
}

}  // namespace

WeightProfile::WeightProfile(int dim, double alpha, double wbar, double scale)
    : dim_(dim), alpha_(alpha), wbar_(wbar), scale_(scale) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("WeightProfile: dim must be 1, 2 or 3");
  if (!(alpha > 3.0)) throw std::invalid_argument("WeightProfile: alpha must exceed 3");
  if (!(wbar > 0.0)) throw std::invalid_argument("WeightProfile: wbar must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("WeightProfile: scale must be positive");
  peak_ = std::exp(alpha / (2.0 * dim));
}

double WeightProfile::envelope_floor(double x) const {
  if (!(x >= 1.0)) throw std::invalid_argument("WeightProfile: argument below 1");
  const double lg = std::log2(x);
  return scale_ * 8.0 * wbar_ * std::pow(2.0, 2 * dim_) * std::pow(dim_ * lg, alpha_) *
         std::pow(x, -2.0 * dim_);
}

double WeightProfile::operator()(double x) const {
  if (!(x >= 1.0)) throw std::invalid_argument("WeightProfile: argument below 1");
  return envelope_floor(std::max(x, peak_));
}

namespace {

long certified_radius_floor(const WeightProfile& w) {
  // smallest exponent of the tail monomials is p = dim + 1
  const double p = w.dim() + 1.0;
  const double need = std::max(2.0, 3.0 * w.alpha() / p);
  return static_cast<long>(std::ceil(std::max(std::exp(need), w.peak_point()))) + 1;
}

TailEstimate full_shell_tail(const WeightProfile& w, long radius) {
  // b(x) = amp * (ln x)^alpha * x^{-2d}
  const double amp = w.scale() * 8.0 * w.wbar() * std::pow(2.0, 2 * w.dim()) *
                     std::pow(w.dim() / kLn2, w.alpha());
  const auto poly = shell_polynomial(w.dim());
  TailEstimate total;
  for (size_t j = 0; j < poly.size(); ++j) {
    if (poly[j] == 0.0) continue;
    const auto part = tail_power_log_sum(2.0 * w.dim() - static_cast<double>(j), w.alpha(), radius);
    total.value += amp * poly[j] * part.value;
    total.band += amp * poly[j] * part.band;
  }
  return total;
}

}  // namespace

double WeightProfile::lattice_sum(double* band) const {
  const long r0 = certified_radius_floor(*this);
  double exact = 0.0;
  for (long r = 1; r <= r0; ++r) exact += shell_count(dim_, r) * (*this)(static_cast<double>(r));
  const TailEstimate tail = full_shell_tail(*this, r0);
  if (band) *band = tail.band;
  return exact + tail.value;
}

PinnedGraph build_long_range_box(int dim, int levels, const WeightProfile& profile,
                                 double tail_rel) {
  if (profile.dim() != dim)
    throw std::invalid_argument("build_long_range_box: profile dimension mismatch");
  if (levels < 1 || dim * levels > 12)
    throw std::invalid_argument("build_long_range_box: box too large");
  const int side = 1 << levels;
  int total = 1;
  for (int c = 0; c < dim; ++c) total *= side;

  auto coords = [&](int v) {
    std::vector<int> p(static_cast<size_t>(dim));
    for (int c = 0; c < dim; ++c) {
      p[static_cast<size_t>(c)] = v % side;
      v /= side;
    }
    return p;
  };

  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(total, total);
  for (int v = 0; v < total; ++v) {
    const auto pv = coords(v);
    for (int u = v + 1; u < total; ++u) {
      const auto pu = coords(u);
      int dist = 0;
      for (int c = 0; c < dim; ++c)
        dist = std::max(dist, std::abs(pv[static_cast<size_t>(c)] - pu[static_cast<size_t>(c)]));
      weights(v, u) = weights(u, v) = profile(static_cast<double>(dist));
    }
  }

  Eigen::VectorXd pinning(total);
  long radius = certified_radius_floor(profile);
  radius = std::max(radius, static_cast<long>(2 * side));
  for (;;) {
    bool ok = true;
    for (int v = 0; v < total && ok; ++v) {
      const auto pv = coords(v);
      double exact = 0.0;
      double prev_inside = 1.0;  // |{j in box : dist <= 0}| = the vertex itself
      for (long r = 1; r <= radius; ++r) {
        double inside = 1.0;
        for (int c = 0; c < dim; ++c) {
          const long lo = std::max<long>(pv[static_cast<size_t>(c)] - r, 0);
          const long hi = std::min<long>(pv[static_cast<size_t>(c)] + r, side - 1);
          inside *= static_cast<double>(hi - lo + 1);
        }
        const double shell_inside = inside - prev_inside;
        prev_inside = inside;
        const double outside = shell_count(dim, r) - shell_inside;
        if (outside > 0.0) exact += outside * profile(static_cast<double>(r));
      }
      const TailEstimate tail = full_shell_tail(profile, radius);
      const double h = exact + tail.value;
      if (tail.band > tail_rel * h) {
        ok = false;
        break;
      }
      pinning[v] = h;
    }
    if (ok) break;
    radius *= 2;
    if (radius > (1L << 24))
      throw std::runtime_error("build_long_range_box: pinning tail not certifiable");
  }

  std::vector<std::string> labels(static_cast<size_t>(total));
  for (int v = 0; v < total; ++v) {
    const auto pv = coords(v);
    std::string s;
    for (int c = 0; c < dim; ++c) {
      if (c) s += ',';
      s += std::to_string(pv[static_cast<size_t>(c)]);
    }
    labels[static_cast<size_t>(v)] = s;
  }
  return PinnedGraph(std::move(weights), std::move(pinning), std::move(labels));
}

std::vector<double> hierarchical_level_weights(int levels, double wbar, double alpha) {
  if (levels < 1) throw std::invalid_argument("hierarchical_level_weights: levels must be >= 1");
  std::vector<double> w(static_cast<size_t>(levels));
  for (int r = 1; r <= levels; ++r)
    w[static_cast<size_t>(r - 1)] = 8.0 * wbar * std::pow(2.0, -2.0 * r) * std::pow(r, alpha);
  return w;
}

double hierarchical_pinning_weight(int levels, double wbar, double alpha) {
  if (levels < 1) throw std::invalid_argument("hierarchical_pinning_weight: levels must be >= 1");
  return 2.0 * wbar * std::pow(2.0, -levels) * std::pow(levels + 1.0, alpha);
}

PinnedGraph build_hierarchical(int levels, const std::vector<double>& level_weights,
                               double pinning) {
  if (levels < 1 || levels > 20) throw std::invalid_argument("build_hierarchical: bad level count");
  if (static_cast<int>(level_weights.size()) != levels)
    throw std::invalid_argument("build_hierarchical: need one weight per level");
  for (double w : level_weights)
    if (!(w > 0.0)) throw std::invalid_argument("build_hierarchical: level weights must be positive");
  if (!(pinning > 0.0)) throw std::invalid_argument("build_hierarchical: pinning must be positive");
  const int n = 1 << levels;
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < n; ++v)
    for (int u = v + 1; u < n; ++u) {
      const int r = hierarchical_distance(static_cast<std::uint64_t>(v),
                                          static_cast<std::uint64_t>(u));
      weights(v, u) = weights(u, v) = level_weights[static_cast<size_t>(r - 1)];
    }
  std::vector<std::string> labels(static_cast<size_t>(n));
  for (int v = 0; v < n; ++v) {
    std::string s(static_cast<size_t>(levels), '0');
    for (int k = 0; k < levels; ++k)
      if ((v >> k) & 1) s[static_cast<size_t>(levels - 1 - k)] = '1';
    labels[static_cast<size_t>(v)] = s;
  }
  return PinnedGraph(std::move(weights), Eigen::VectorXd::Constant(n, pinning),
                     std::move(labels));
}

PinnedGraph build_chain(int length, double wbar, double alpha, ChainPinning mode,
                        const Eigen::VectorXd& pinning,
                        const std::vector<std::tuple<int, int, double>>& extra_edges) {
  if (!(wbar > 0.0)) throw std::invalid_argument("build_chain: wbar must be positive");
  const bool wired = (mode == ChainPinning::kLastVertexPinned);
  if (length < 2) throw std::invalid_argument("build_chain: need length >= 2");
  if (wired && pinning.size() != 0)
    throw std::invalid_argument("build_chain: pinning is derived under kLastVertexPinned");
  if (!wired && pinning.size() != length)
    throw std::invalid_argument("build_chain: pinning vector must match length");

  const int n = wired ? length - 1 : length;
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd h = wired ? Eigen::VectorXd::Zero(n) : pinning;
  // chain position l (1-based) sits at index l-1; edge {l-1, l} has weight wbar * l^alpha
  for (int l = 2; l <= length; ++l) {
    const double w = wbar * std::pow(static_cast<double>(l), alpha);
    const int a = l - 2, b = l - 1;
    if (wired && b == length - 1)
      h[a] += w;
    else
      weights(a, b) = weights(b, a) = w;
  }
  for (const auto& [a, b, w] : extra_edges) {
    if (a < 0 || b < 0 || a >= length || b >= length || a == b)
      throw std::invalid_argument("build_chain: bad extra edge");
    if (!(w >= 0.0)) throw std::invalid_argument("build_chain: negative extra weight");
    int x = std::min(a, b), y = std::max(a, b);
    if (wired && y == length - 1)
      h[x] += w;
    else if (wired && x == length - 1)
      h[y] += w;
    else
      weights(x, y) = weights(y, x) = weights(x, y) + w;
  }
  std::vector<std::string> labels(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<size_t>(i)] = std::to_string(i + 1);
  return PinnedGraph(std::move(weights), std::move(h), std::move(labels));
}

PinnedGraph build_effective_chain(int length, const std::vector<double>& level_weights,
                                  double pinning_base) {
  if (length < 1) throw std::invalid_argument("build_effective_chain: need length >= 1");
  if (static_cast<int>(level_weights.size()) < length)
    throw std::invalid_argument("build_effective_chain: need one weight per level");
  if (!(pinning_base > 0.0))
    throw std::invalid_argument("build_effective_chain: pinning must be positive");
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(length, length);
  for (int l = 2; l <= length; ++l) {
    const double w = std::pow(2.0, 2.0 * l - 3.0) * level_weights[static_cast<size_t>(l - 1)];
    weights(l - 2, l - 1) = weights(l - 1, l - 2) = w;
  }
  Eigen::VectorXd h(length);
  for (int k = 0; k < length; ++k) h[k] = std::pow(2.0, k) * pinning_base;
  std::vector<std::string> labels(static_cast<size_t>(length));
  for (int i = 0; i < length; ++i) labels[static_cast<size_t>(i)] = "i" + std::to_string(i + 1);
  return PinnedGraph(std::move(weights), std::move(h), std::move(labels));
}

}  // namespace h22
