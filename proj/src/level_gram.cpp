#include "oulab/level_gram.hpp"

#include "oulab/hermite.hpp"
#include "oulab/quadrature.hpp"
#include "oulab/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace oulab {

LevelWeight penalty_weight(const DomainSpec& domain) {
  const double cap = domain.penalty_cap();
  return {[cap](double g) { return std::min(cap, std::max(0.0, g - 1.0)); }, {1.0, 1.0 + cap}};
}

LevelWeight inside_weight() {
  return {[](double g) { return g <= 1.0 ? 1.0 : 0.0; }, {1.0}};
}

LevelWeight outside_weight() {
  return {[](double g) { return g > 1.0 ? 1.0 : 0.0; }, {1.0}};
}

namespace {

// Gram of the active-coordinate Hermite functions along one coordinate,
// split at the kinks so that every panel sees a smooth integrand.
Mat gram_1d(int cap, double lambda, double b, double t, const LevelWeight& weight, const GramOptions& opt) {
  const double L = 2.0 * std::sqrt(cap + 1.0) + 10.0;
  const double s = std::sqrt(lambda);
  std::vector<double> breaks{-L, L};
  for (double c : weight.kinks) {
    // t lambda xi^2 + b s xi - c = 0
    const double A = t * lambda, B = b * s;
    if (A == 0.0) {
      if (B != 0.0) breaks.push_back(c / B);
    } else {
      const double disc = B * B + 4.0 * A * c;
      if (disc >= 0.0) {
        breaks.push_back((-B - std::sqrt(disc)) / (2.0 * A));
        breaks.push_back((-B + std::sqrt(disc)) / (2.0 * A));
      }
    }
  }
  std::erase_if(breaks, [L](double x) { return x < -L || x > L; });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const auto gl = gauss_legendre(opt.panel_order);
  std::vector<double> nodes, wts;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], e = breaks[i + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((e - a) / opt.panel_width)));
    const double h = (e - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (int q = 0; q < gl.order; ++q) {
        const double xi = mid + 0.5 * h * gl.nodes_1d(q);
        const double x = s * xi;
        const double w = weight.w(b * x + t * x * x);
        if (w == 0.0) continue;
        nodes.push_back(xi);
        wts.push_back(0.5 * h * gl.weights_1d(q) * w);
      }
    }
  }
  Mat H(nodes.size(), cap + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) H.row(i) = hermite_functions(cap, nodes[i]).transpose();
  const Eigen::Map<const Vec> w(wts.data(), static_cast<Eigen::Index>(wts.size()));
  return H.transpose() * w.asDiagonal() * H;
}

// Rows of Hermite products for the active basis at standardized points (columns of xi).
Mat active_rows(const HermiteBasis& ab, const Mat& xi) {
  const int na = ab.dim(), cap = ab.degree_cap();
  Mat H(xi.cols(), static_cast<Eigen::Index>(ab.size()));
  std::vector<std::vector<double>> t(na);
  for (Eigen::Index j = 0; j < xi.cols(); ++j) {
    for (int k = 0; k < na; ++k) t[k] = hermite_table<double>(cap, xi(k, j));
    for (std::size_t a = 0; a < ab.size(); ++a) {
      double v = 1.0;
      for (int k = 0; k < na; ++k) v *= t[k][ab[a][k]];
      H(j, static_cast<Eigen::Index>(a)) = v;
    }
  }
  return H;
}

double level_at(const DomainSpec& domain, const std::vector<int>& act, const SpectralModel& model,
                const Eigen::Ref<const Vec>& xi) {
  double g = 0.0;
  for (std::size_t k = 0; k < act.size(); ++k) {
    const int c = act[k];
    const double x = std::sqrt(model.lambda(c)) * xi(static_cast<Eigen::Index>(k));
    g += domain.linear()(c) * x + domain.quad_diag()(c) * x * x;
  }
  return g;
}

Mat gram_tensor(const HermiteBasis& ab, const std::vector<int>& act, const SpectralModel& model,
                const DomainSpec& domain, const LevelWeight& weight, int order) {
  const auto q = gauss_hermite(order);
  const int na = ab.dim();
  std::size_t n = 1;
  for (int k = 0; k < na; ++k) n *= static_cast<std::size_t>(order);
  Mat G = Mat::Zero(static_cast<Eigen::Index>(ab.size()), static_cast<Eigen::Index>(ab.size()));
  constexpr std::size_t kChunk = 4096;
  std::vector<int> idx(na, 0);
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t m = std::min(kChunk, n - start);
    Mat xi(na, static_cast<Eigen::Index>(m));
    Vec w(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      double wt = 1.0;
      for (int k = 0; k < na; ++k) {
        xi(k, j) = q.nodes_1d(idx[k]);
        wt *= q.weights_1d(idx[k]);
      }
      w(j) = wt * weight.w(level_at(domain, act, model, xi.col(j)));
      for (int k = na - 1; k >= 0; --k) {
        if (++idx[k] < order) break;
        idx[k] = 0;
      }
    }
    const Mat H = active_rows(ab, xi);
    G.noalias() += H.transpose() * w.asDiagonal() * H;
  }
  return G;
}

Mat gram_mc(const HermiteBasis& ab, const std::vector<int>& act, const SpectralModel& model,
            const DomainSpec& domain, const LevelWeight& weight, const GramOptions& opt, double* max_se) {
  constexpr std::size_t kBlock = 4096;
  const std::size_t n = opt.mc_samples;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  const auto na = static_cast<Eigen::Index>(ab.dim());
  const auto nb = static_cast<Eigen::Index>(ab.size());
  std::vector<Mat> s1(blocks), s2(blocks);
  parallel_for(blocks, opt.jobs, [&](std::size_t b) {
    Rng rng = substream(opt.mc_seed, b);
    std::normal_distribution<double> n01;
    const std::size_t m = std::min(kBlock, n - b * kBlock);
    Mat xi(na, static_cast<Eigen::Index>(m));
    Vec w(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      for (Eigen::Index k = 0; k < na; ++k) xi(k, j) = n01(rng);
      w(j) = weight.w(level_at(domain, act, model, xi.col(j)));
    }
    const Mat H = active_rows(ab, xi);
    const Mat H2 = H.cwiseAbs2();
    s1[b] = H.transpose() * w.asDiagonal() * H;
    s2[b] = H2.transpose() * w.cwiseAbs2().asDiagonal() * H2;
  });
  Mat G = Mat::Zero(nb, nb), S = Mat::Zero(nb, nb);
  for (std::size_t b = 0; b < blocks; ++b) {
    G += s1[b];
    S += s2[b];
  }
  G /= double(n);
  S /= double(n);
  const Mat var = (S - G.cwiseAbs2()).cwiseMax(0.0) / double(n);
  *max_se = std::sqrt(var.maxCoeff());
  return G;
}

}  // namespace

Mat level_weighted_gram(const HermiteBasis& basis, const SpectralModel& model, const DomainSpec& domain,
                        const LevelWeight& weight, const GramOptions& opt, AssemblyInfo* info) {
  if (basis.dim() != model.dim() || domain.dim() != model.dim())
    throw std::invalid_argument("level_weighted_gram: dimension mismatch");
  AssemblyInfo local;
  AssemblyInfo& inf = info ? *info : local;
  inf = AssemblyInfo{};
  const auto n = static_cast<Eigen::Index>(basis.size());
  const std::vector<int> act = domain.active_coordinates();
  if (act.empty()) {
    inf.method = "exact";
    return weight.w(0.0) * Mat::Identity(n, n);
  }
  const int na = static_cast<int>(act.size());
  const HermiteBasis ab(na, basis.degree_cap(), basis.size() + 1);
  Mat GA;
  if (na == 1) {
    const int c = act[0];
    const Mat g1 = gram_1d(basis.degree_cap(), model.lambda(c), domain.linear()(c), domain.quad_diag()(c), weight, opt);
    GA = g1;  // active basis in one variable is H_0..H_cap in order
    inf.method = "piecewise-gauss-legendre";
  } else {
    const int q1 = basis.degree_cap() + 2, q2 = 2 * q1;
    const double cost = std::pow(double(q2), na) * double(ab.size()) * double(ab.size());
    bool use_mc = cost > opt.quadrature_budget;
    if (!use_mc) {
      const Mat A = gram_tensor(ab, act, model, domain, weight, q1);
      const Mat B = gram_tensor(ab, act, model, domain, weight, q2);
      inf.refinement_gap = (A - B).cwiseAbs().maxCoeff();
      if (inf.refinement_gap <= opt.refine_tol) {
        GA = B;
        inf.method = "tensor-gauss-hermite";
      } else {
        use_mc = true;
      }
    }
    if (use_mc) {
      GA = gram_mc(ab, act, model, domain, weight, opt, &inf.std_error);
      inf.method = "monte-carlo";
      inf.samples = opt.mc_samples;
    }
  }
  GA = 0.5 * (GA + GA.transpose()).eval();

  // expand: inactive coordinates contribute delta_{gamma_k, delta_k}
  std::vector<bool> is_active(model.dim(), false);
  for (int c : act) is_active[c] = true;
  std::map<std::vector<int>, std::vector<std::pair<Eigen::Index, Eigen::Index>>> groups;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& g = basis[i];
    std::vector<int> inactive, active;
    for (int k = 0; k < model.dim(); ++k) (is_active[k] ? active : inactive).push_back(g[k]);
    groups[inactive].emplace_back(i, static_cast<Eigen::Index>(*ab.index_of(MultiIndex(active))));
  }
  Mat G = Mat::Zero(n, n);
  for (const auto& [key, members] : groups)
    for (const auto& [i, a] : members)
      for (const auto& [j, b] : members) G(i, j) = GA(a, b);
  return G;
}

}  // namespace oulab
