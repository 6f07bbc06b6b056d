#pragma once

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SparseCore>

#include "gmim/graph.hpp"

namespace gmim {

enum class DiffusionBackend { closed_form, truncated_series };

inline std::string to_string(DiffusionBackend b) {
  return b == DiffusionBackend::closed_form ? "closed_form" : "truncated_series";
}

inline DiffusionBackend backend_from_string(const std::string& s) {
  if (s == "closed_form") return DiffusionBackend::closed_form;
  if (s == "truncated_series") return DiffusionBackend::truncated_series;
  throw io_error("unknown diffusion backend \"" + s + "\"");
}

struct DiffusionConfig {
  double alpha = 0.2;  // teleport probability, in (0, 1]
  DiffusionBackend backend = DiffusionBackend::closed_form;
  int series_terms = 64;          // truncated_series only
  double sparsify_epsilon = 0.0;  // 0 keeps every entry
  int dense_cap = 25000;          // closed form refuses larger graphs
};

// Symmetric nonnegative diffusion matrix replacing the adjacency.
struct DiffusionMatrix {
  Matrix s;
  DiffusionConfig config;
  int n() const { return static_cast<int>(s.rows()); }
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("diffusion: alpha must be in (0, 1]");
}

// Isolated nodes get an all-zero row: 0^{-1/2} is taken as 0, which leaves
// their diffusion row at alpha * e_i.
inline Vector inv_sqrt_degrees(const AttributedGraph& g) {
  const auto deg = node_degrees(g);
  Vector d(g.n_nodes);
  for (int i = 0; i < g.n_nodes; ++i) d(i) = deg[i] > 0 ? 1.0 / std::sqrt(double(deg[i])) : 0.0;
  return d;
}

inline Eigen::SparseMatrix<double> sym_normalized_adjacency_sparse(const AttributedGraph& g) {
  const Vector dinv = inv_sqrt_degrees(g);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * g.edges.size());
  for (const auto& [u, v] : g.edges) {
    const double w = dinv(u) * dinv(v);
    trip.emplace_back(u, v, w);
    trip.emplace_back(v, u, w);
  }
  Eigen::SparseMatrix<double> m(g.n_nodes, g.n_nodes);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

inline Matrix finalize_symmetric(Matrix s) {
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) throw numeric_error("diffusion: result asymmetry " + std::to_string(asym));
  s = ((s + s.transpose()) / 2.0).eval();
  const double lo = s.minCoeff();
  if (lo < -1e-9) throw numeric_error("diffusion: negative entry " + std::to_string(lo));
  return s.cwiseMax(0.0);
}

}  // namespace detail

// D^{-1/2} A D^{-1/2} as a dense matrix.
inline Matrix sym_normalized_adjacency(const AttributedGraph& g) {
  const Vector dinv = detail::inv_sqrt_degrees(g);
  Matrix m = Matrix::Zero(g.n_nodes, g.n_nodes);
  for (const auto& [u, v] : g.edges) {
    const double w = dinv(u) * dinv(v);
    m(u, v) = w;
    m(v, u) = w;
  }
  return m;
}

// S = alpha * (I - (1-alpha) * D^{-1/2} A D^{-1/2})^{-1} by direct solve.
// The system matrix is SPD for alpha > 0 (eigenvalues >= alpha), so an LDLT
// factorization applies; singularity is guarded regardless.
inline DiffusionMatrix ppr_closed_form(const AttributedGraph& g, double alpha, int dense_cap = 25000) {
  detail::check_alpha(alpha);
  if (g.n_nodes > dense_cap)
    throw numeric_error("diffusion: N=" + std::to_string(g.n_nodes) + " exceeds dense cap " +
                        std::to_string(dense_cap) + "; use the truncated_series backend");
  const int n = g.n_nodes;
  Matrix b = Matrix::Identity(n, n) - (1.0 - alpha) * sym_normalized_adjacency(g);
  Eigen::LDLT<Matrix> ldlt(b);
  if (ldlt.info() != Eigen::Success) throw numeric_error("diffusion: singular PPR system");
  Matrix s = alpha * ldlt.solve(Matrix::Identity(n, n));
  DiffusionMatrix out;
  out.s = detail::finalize_symmetric(std::move(s));
  out.config = DiffusionConfig{alpha, DiffusionBackend::closed_form, 0, 0.0, dense_cap};
  return out;
}

struct TruncatedSeriesResult {
  DiffusionMatrix diffusion;
  double tail_bound;  // ||S - S_K||_2 <= (1-alpha)^K
};

// S_K = alpha * sum_{k=0}^{K-1} (1-alpha)^k M^k with M = D^{-1/2} A D^{-1/2}.
inline TruncatedSeriesResult ppr_truncated_series(const AttributedGraph& g, double alpha, int terms) {
  detail::check_alpha(alpha);
  if (terms < 1) throw std::invalid_argument("diffusion: series_terms must be >= 1");
  const int n = g.n_nodes;
  const Eigen::SparseMatrix<double> m = detail::sym_normalized_adjacency_sparse(g);
  Matrix acc = alpha * Matrix::Identity(n, n);
  Matrix power = Matrix::Identity(n, n);
  double coef = alpha;
  for (int k = 1; k < terms; ++k) {
    coef *= (1.0 - alpha);
    if (coef == 0.0) break;
    power = (m * power).eval();
    acc += coef * power;
  }
  TruncatedSeriesResult out;
  out.diffusion.s = detail::finalize_symmetric(std::move(acc));
  out.diffusion.config = DiffusionConfig{alpha, DiffusionBackend::truncated_series, terms, 0.0, 0};
  out.tail_bound = std::pow(1.0 - alpha, terms);
  return out;
}

// Drops off-diagonal entries with |value| < epsilon. The diagonal is always
// kept so the propagator's degree stays strictly positive.
inline DiffusionMatrix sparsify(const DiffusionMatrix& s, double epsilon) {
  if (epsilon < 0) throw std::invalid_argument("diffusion: epsilon must be >= 0");
  DiffusionMatrix out = s;
  out.config.sparsify_epsilon = epsilon;
  if (epsilon == 0.0) return out;
  const int n = out.n();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (i != j && std::abs(out.s(i, j)) < epsilon) out.s(i, j) = 0.0;
  return out;
}

inline DiffusionMatrix diffuse(const AttributedGraph& g, const DiffusionConfig& cfg) {
  DiffusionMatrix s = cfg.backend == DiffusionBackend::closed_form
                          ? ppr_closed_form(g, cfg.alpha, cfg.dense_cap)
                          : ppr_truncated_series(g, cfg.alpha, cfg.series_terms).diffusion;
  if (cfg.sparsify_epsilon > 0.0) s = sparsify(s, cfg.sparsify_epsilon);
  s.config.dense_cap = cfg.dense_cap;
  return s;
}

namespace detail {

inline std::string diffusion_header(const DiffusionConfig& c, int n) {
  const int terms = c.backend == DiffusionBackend::truncated_series ? c.series_terms : 0;
  return "#diffusion\talpha=" + format_double(c.alpha) + "\tbackend=" + to_string(c.backend) +
         "\tseries_terms=" + std::to_string(terms) +
         "\tsparsify_epsilon=" + format_double(c.sparsify_epsilon) + "\tn_nodes=" + std::to_string(n);
}

}  // namespace detail

// Cache file: one header line recording the config, then "#sparse" and the
// upper triangle (i <= j) as i\tj\tvalue triplets.
inline void save_diffusion(const DiffusionMatrix& s, const std::filesystem::path& file) {
  auto out = io::open_out(file);
  out << detail::diffusion_header(s.config, s.n()) << "\n#sparse\n";
  for (int i = 0; i < s.n(); ++i)
    for (int j = i; j < s.n(); ++j)
      if (s.s(i, j) != 0.0) out << i << '\t' << j << '\t' << format_double(s.s(i, j)) << '\n';
}

inline bool diffusion_cache_matches(const std::filesystem::path& file, const DiffusionConfig& cfg) {
  std::ifstream in(file);
  if (!in) return false;
  std::string header;
  if (!std::getline(in, header)) return false;
  const std::string want = detail::diffusion_header(cfg, -1);
  // Compare everything but the node count, which the caller may not know yet.
  const auto cut = header.rfind("\tn_nodes=");
  const auto want_cut = want.rfind("\tn_nodes=");
  return cut != std::string::npos && header.substr(0, cut) == want.substr(0, want_cut);
}

inline DiffusionMatrix load_diffusion(const std::filesystem::path& file, const DiffusionConfig& expected) {
  const auto lines = io::read_lines(file);
  if (lines.empty() || lines[0].rfind("#diffusion\t", 0) != 0)
    throw io_error(file.string() + ": not a diffusion cache (missing #diffusion header)");
  long n = -1;
  {
    const auto tok = io::split_tabs(lines[0]);
    DiffusionConfig got;
    for (std::size_t i = 1; i < tok.size(); ++i) {
      const auto eq = tok[i].find('=');
      if (eq == std::string::npos) throw io_error(file.string() + ":1: malformed header field");
      const std::string key = tok[i].substr(0, eq), val = tok[i].substr(eq + 1);
      if (key == "alpha")
        got.alpha = io::parse_double(val, file, 1);
      else if (key == "backend")
        got.backend = backend_from_string(val);
      else if (key == "series_terms")
        got.series_terms = static_cast<int>(io::parse_long(val, file, 1));
      else if (key == "sparsify_epsilon")
        got.sparsify_epsilon = io::parse_double(val, file, 1);
      else if (key == "n_nodes")
        n = io::parse_long(val, file, 1);
      else
        throw io_error(file.string() + ":1: unknown header field \"" + key + "\"");
    }
    const int want_terms =
        expected.backend == DiffusionBackend::truncated_series ? expected.series_terms : 0;
    if (got.alpha != expected.alpha || got.backend != expected.backend ||
        got.series_terms != want_terms || got.sparsify_epsilon != expected.sparsify_epsilon)
      throw io_error(file.string() + ": cached diffusion config does not match the requested one");
  }
  if (n < 0) throw io_error(file.string() + ":1: missing n_nodes");
  if (lines.size() < 2 || lines[1] != "#sparse")
    throw io_error(file.string() + ":2: expected #sparse marker");
  DiffusionMatrix out;
  out.s = Matrix::Zero(n, n);
  out.config = expected;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto tok = io::split_tabs(lines[i]);
    if (tok.size() != 3) throw io_error(file.string() + ":" + std::to_string(i + 1) + ": expected triplet");
    long r = io::parse_long(tok[0], file, i + 1);
    long c = io::parse_long(tok[1], file, i + 1);
    if (r < 0 || c < r || c >= n)
      throw io_error(file.string() + ":" + std::to_string(i + 1) + ": triplet out of range");
    const double v = io::parse_double(tok[2], file, i + 1);
    out.s(r, c) = v;
    out.s(c, r) = v;
  }
  return out;
}

}  // namespace gmim
